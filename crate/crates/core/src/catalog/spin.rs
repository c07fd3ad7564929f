use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::{CatalogEntry, ChainEdge, Factor, LabelConvention, ResPair, Term, POINT};
use crate::graded_algebra::{spin_generators, Prime};
use crate::omega_module::IdealGenerator;
use crate::{Error, Result};

/// Largest `ℓ` for which `spin_entry` synthesizes data.
pub const MAX_SPIN_RANK: u32 = 16;

/// `ℓ` for a group name `Spin_{2ℓ+1}`.
pub fn spin_rank(group: &str) -> Option<u32> {
    let n: u32 = group.strip_prefix("Spin_")?.parse().ok()?;
    (n % 2 == 1 && n >= 5).then_some((n - 1) / 2)
}

fn two_v(k: u32) -> Vec<IdealGenerator> {
    vec![IdealGenerator::integer(2), IdealGenerator::v_power(1, 1, k)]
}

fn mono(names: &[&str]) -> Vec<Factor> {
    names.iter().map(|n| Factor::new(*n, 1)).collect()
}

/// Known pieces of the cobordism restriction image for `Spin_{2ℓ+1}`, and
/// whether they are the whole story.
fn res_table(l: u32) -> (Vec<ResPair>, bool) {
    let pair = |ideal, names: &[&str]| ResPair {
        ideal,
        monomial: mono(names),
        incomplete: false,
    };
    match l {
        2 => (vec![], true),
        3 => (vec![pair(two_v(1), &["y6"])], true),
        5 => (
            vec![
                pair(two_v(1), &["y10"]),
                pair(two_v(2), &["y6", "y10"]),
                pair(two_v(1), &["y6"]),
            ],
            true,
        ),
        6 => (
            vec![
                pair(vec![IdealGenerator::integer(2)], &["y12"]),
                pair(
                    vec![
                        IdealGenerator::integer(4),
                        IdealGenerator::v_power(2, 1, 1),
                        IdealGenerator::v_power(1, 1, 2),
                    ],
                    &["y6", "y12"],
                ),
            ],
            false,
        ),
        7 => (vec![pair(vec![IdealGenerator::integer(2)], &["y14"])], false),
        9 => (vec![pair(two_v(1), &["y18"])], false),
        10 => (vec![pair(vec![IdealGenerator::integer(2)], &["y20"])], false),
        _ => (vec![], false),
    }
}

/// Catalog entry for `Spin_{2ℓ+1}` at p = 2 built from the generator rule:
/// gr-level presentation, the chain edge to `Spin_{2ℓ-1}` labelled by the new
/// generators, and whatever restriction data is known (flagged incomplete
/// otherwise).
pub fn spin_entry(l: u32) -> Result<CatalogEntry> {
    if !(2..=MAX_SPIN_RANK).contains(&l) {
        return Err(Error::Invalid(format!(
            "spin entries are synthesized for 2 <= l <= {MAX_SPIN_RANK}, got {l}"
        )));
    }
    let mut e = CatalogEntry::new(format!("Spin_{}", 2 * l + 1), Prime::new(2)?);
    e.generators = spin_generators(l);
    let (subgroup, labels) = if l == 2 {
        (POINT.to_string(), Vec::new())
    } else {
        let below = spin_generators(l - 1);
        let labels = e
            .generators
            .iter()
            .filter(|g| below.iter().all(|b| b.name() != g.name()))
            .map(|g| Term::monomial(vec![Factor::new(g.name(), 1)]))
            .collect();
        (format!("Spin_{}", 2 * l - 1), labels)
    };
    e.edges.push(ChainEdge {
        subgroup,
        labels,
        convention: LabelConvention::Tensor,
    });
    let (res, complete) = res_table(l);
    e.res = res;
    e.incomplete = !complete;
    Ok(e)
}
