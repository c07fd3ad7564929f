//! The acceptance suite: ten fixed checks against the catalog, each reduced to
//! an exact comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use flagchow_core::catalog::{validate_catalog, Catalog, CatalogEntry, Term};
use flagchow_core::decomposition::verify_motive_restriction;
use flagchow_core::graded_algebra::{complement_character, spin_generators, AlgebraHom};
use flagchow_core::omega_module::{OmegaMonomial, OmegaRing, OmegaSubmodule, DEFAULT_V_BOUND};
use flagchow_core::spectral::{
    predicted_real_character, differentials_from_specs, fiber_of, run_to_stable, BigradedAlgebra, Page, StableResult,
    DEFAULT_S_MAX,
};
use flagchow_core::{
    AlgebraPresentation, CoefficientMode, GeneratorSpec, GradedAbelianGroup, Monomial, OmegaElement, Prime,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{Report, Table, Verdict};

/// Seed of the randomized membership check.
pub const MEMBERSHIP_SEED: u64 = 0x5eed_f1a6;
pub const MEMBERSHIP_INSTANCES: usize = 256;
/// Coefficient bound for random generators and elements.
pub const MEMBERSHIP_COEFF_BOUND: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, bad: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad())
    }
}

fn entry(catalog: &Catalog, group: &str, p: u32) -> Result<CatalogEntry, String> {
    catalog.resolve(group, Some(p)).map_err(|e| e.to_string())
}

fn quotient_of(e: &CatalogEntry) -> Result<GradedAbelianGroup, String> {
    let m = e.res_module(e.max_v_index().max(DEFAULT_V_BOUND)).map_err(|x| x.to_string())?;
    m.augmentation_quotient(m.default_cap()).map_err(|x| x.to_string())
}

fn describe(g: &GradedAbelianGroup) -> String {
    g.pieces()
        .map(|(d, piece)| {
            let mut parts = Vec::new();
            if piece.free_rank > 0 {
                parts.push(if piece.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", piece.free_rank) });
            }
            parts.extend(piece.torsion.iter().map(|t| format!("Z/{t}")));
            format!("{d}: {}", parts.join("+"))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn expect_quotient(e: &CatalogEntry, free: &[i64], torsion: &[(i64, u64)]) -> Outcome {
    let found = quotient_of(e)?;
    let mut want = GradedAbelianGroup::new(e.prime);
    for &d in free {
        want.add(d, 1, &[]).map_err(|x| x.to_string())?;
    }
    for &(d, t) in torsion {
        want.add(d, 0, &[t]).map_err(|x| x.to_string())?;
    }
    check(found == want, describe(&found), || format!("found {{{}}}, want {{{}}}", describe(&found), describe(&want)))
}

fn c1_e8_presentation(catalog: &Catalog) -> Outcome {
    let e = entry(catalog, "E8", 2)?;
    let p = e.presentation().map_err(|x| x.to_string())?;
    let series = p.poincare_series();
    let palindromic = series.iter().eq(series.iter().rev());
    let ok = p.dimension() == 128 && p.top_degree() == 120 && palindromic;
    check(
        ok,
        format!("dimension {}, top degree {}, palindromic", p.dimension(), p.top_degree()),
        || format!("dimension {}, top degree {}, palindromic {palindromic}", p.dimension(), p.top_degree()),
    )
}

fn generator_names(l: u32) -> BTreeSet<String> {
    spin_generators(l).iter().map(|g| g.name().to_string()).collect()
}

fn c2_spin_deltas(catalog: &Catalog) -> Outcome {
    let want: [(u32, &[&str]); 6] = [
        (5, &["y10"]),
        (6, &["y12"]),
        (7, &["y14"]),
        (8, &[]),
        (9, &["y18"]),
        (10, &["y20"]),
    ];
    for (l, names) in want {
        let delta: BTreeSet<String> = generator_names(l).difference(&generator_names(l - 1)).cloned().collect();
        let want: BTreeSet<String> = names.iter().map(|s| s.to_string()).collect();
        if delta != want {
            return Err(format!("l={l}: delta {delta:?}, want {want:?}"));
        }
        let group = format!("Spin_{}", 2 * l + 1);
        let sub = format!("Spin_{}", 2 * l - 1);
        if let Ok(e) = catalog.resolve(&group, Some(2)) {
            let labels: BTreeSet<String> = e
                .edge_to(&sub)
                .ok_or_else(|| format!("{group} has no edge to {sub}"))?
                .labels
                .iter()
                .map(Term::to_string)
                .collect();
            if labels != want {
                return Err(format!("catalog edge {group} <- {sub} labelled {labels:?}, want {want:?}"));
            }
        }
    }
    Ok("deltas y10, y12, y14, (empty), y18, y20 for l = 5..10".to_string())
}

fn c6_restriction(catalog: &Catalog) -> Outcome {
    let g = entry(catalog, "Spin_11", 2)?;
    let sub = entry(catalog, "Spin_7", 2)?;
    let labels = g.edge_to("Spin_7").map(|e| e.labels.clone()).unwrap_or_default();
    let r = verify_motive_restriction(&g, &sub, &labels, DEFAULT_V_BOUND).map_err(|e| e.to_string())?;
    let zero = |n: &str| r.class(n).and_then(|c| c.zero_mod_p) == Some(true);
    let e8 = r.class("e_8").and_then(|c| c.agrees_mod_p) == Some(true);
    let character = r.character.as_ref().is_some_and(|c| c.pass);
    check(
        zero("c_4") && zero("c_5") && e8 && character && r.pass(),
        "c_4, c_5 vanish mod 2; e_8 agrees with c_3*y10; characters equal".to_string(),
        || format!("c_4 zero {}, c_5 zero {}, e_8 agrees {e8}, character {character}, overall {}", zero("c_4"), zero("c_5"), r.pass()),
    )
}

/// Run the catalog differentials of an entry.
pub fn spectral_run(e: &CatalogEntry, s_max: u32) -> Result<StableResult, String> {
    let pres = e.presentation().map_err(|x| x.to_string())?;
    let fiber = fiber_of(&pres).map_err(|x| x.to_string())?;
    let alg = Arc::new(BigradedAlgebra::new(&fiber, s_max).map_err(|x| x.to_string())?);
    let ds = differentials_from_specs(&alg, &pres, &e.differentials).map_err(|x| x.to_string())?;
    run_to_stable(Page::e2(alg), &ds).map_err(|x| x.to_string())
}

fn c7_spectral(catalog: &Catalog) -> Outcome {
    let mut notes = Vec::new();
    for group in ["Spin_7", "Spin_11"] {
        let e = entry(catalog, group, 2)?;
        let res = spectral_run(&e, DEFAULT_S_MAX)?;
        let Some(n) = res.certificate.is_certified().then(|| res.certificate.through()).flatten() else {
            return Err(format!("{group}: {:?}", res.certificate));
        };
        let found = res.final_page().total_dims(n);
        let pres = e.presentation().map_err(|x| x.to_string())?;
        let mut want = predicted_real_character(&pres).map_err(|x| x.to_string())?;
        want.resize(n as usize + 1, 0);
        if found != want {
            return Err(format!("{group}: engine {found:?} vs character {want:?}"));
        }
        if group == "Spin_7" {
            let pattern: Vec<u64> = (0..=n).map(|k| u64::from(k <= 6)).collect();
            if found != pattern {
                return Err(format!("Spin_7: {found:?}"));
            }
        }
        notes.push(format!("{group} stable at E_{} through total degree {n}", res.final_page().page()));
    }
    Ok(notes.join("; "))
}

fn c8_validation(catalog: &Catalog) -> Outcome {
    let report = validate_catalog(catalog);
    let flagged: Vec<String> = report.flagged().map(|i| format!("{}: {}", i.entry, i.item)).collect();
    let want = ["Spin_11 p=2: class c_3", "Spin_11 p=2: class c_4"];
    check(
        flagged == want && report.matches_expectations(),
        format!("flagged exactly {} of {} items", flagged.len(), report.items.len()),
        || format!("flagged {flagged:?}"),
    )
}

fn c9_e8_p3(catalog: &Catalog) -> Outcome {
    let g = entry(catalog, "E8", 3)?;
    let sub = entry(catalog, "E7", 3)?;
    let gp = g.presentation().map_err(|x| x.to_string())?;
    let sp = sub.presentation().map_err(|x| x.to_string())?;
    let hom = AlgebraHom::canonical_projection(&gp, &sp).map_err(|x| x.to_string())?;
    let kernel = hom.kernel_character(gp.top_degree()).map_err(|x| x.to_string())?;
    let degrees: Vec<usize> = kernel
        .iter()
        .enumerate()
        .flat_map(|(d, &k)| std::iter::repeat_n(d, k as usize))
        .collect();
    let mut listed = g
        .edge_to("E7")
        .map(|e| g.label_degrees(&e.labels))
        .transpose()
        .map_err(|x| x.to_string())?
        .unwrap_or_default();
    listed.sort();
    let listed: Vec<usize> = listed.into_iter().map(|d| d as usize).collect();
    let complement = complement_character(&gp, &[("y'", 1)]).map_err(|x| x.to_string())?;
    let total: u64 = complement.iter().sum();
    check(
        degrees.len() == 6 && degrees == listed && total == 3,
        format!("kernel degrees {degrees:?}; complement total {total}"),
        || format!("kernel degrees {degrees:?} vs listed {listed:?}; complement total {total}"),
    )
}

/// `x ∈ L ⊗ Z_(p)` against closure of `L mod p^3`, for lattices containing `p^3·Z^n`.
fn span_mod(rows: &[Vec<i128>], q: i128, n: usize) -> BTreeSet<Vec<i128>> {
    let mut seen: BTreeSet<Vec<i128>> = BTreeSet::from([vec![0; n]]);
    let mut frontier = vec![vec![0i128; n]];
    while let Some(v) = frontier.pop() {
        for r in rows {
            let w: Vec<i128> = v.iter().zip(r).map(|(a, b)| (a + b).rem_euclid(q)).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen
}

/// One random instance in `Ω_1 ⊗ Z_(p)[y]/(y^3)`, `|y| = |v_1|`. Returns (engine, oracle).
fn membership_instance(rng: &mut ChaCha8Rng) -> Result<(bool, bool), String> {
    let p: u32 = if rng.gen_bool(0.5) { 2 } else { 3 };
    let height = 3u32;
    let w = 2 * (p - 1);
    let b = MEMBERSHIP_COEFF_BOUND;
    let alg = Arc::new(
        AlgebraPresentation::new(
            Prime::new(p).unwrap(),
            vec![GeneratorSpec::new("y", w, height).unwrap()],
            CoefficientMode::PLocal,
        )
        .unwrap(),
    );
    let ring = OmegaRing::new(alg, 1);
    let mono = |v: u32, y: u32| OmegaMonomial {
        v: vec![v],
        y: Monomial::from_exponents(vec![y]),
    };
    let column = |j: u32| -> Vec<OmegaMonomial> { (0..height - j).map(|k| mono(k, k + j)).collect() };
    let random_in = |rng: &mut ChaCha8Rng, j: u32| {
        OmegaElement::from_terms(column(j).into_iter().map(|m| (m, rng.gen_range(-b..=b))))
    };
    let x_degree = rng.gen_range(0..2u32);
    let cols = column(x_degree);
    let q = (p as i128).pow(3);
    let mut gens = vec![ring.one()];
    for _ in 0..rng.gen_range(1..=3) {
        let j = rng.gen_range(0..height);
        gens.push(random_in(rng, j));
    }
    for m in &cols {
        gens.push(OmegaElement::from_terms([(m.clone(), q as i64)]));
    }
    let module = OmegaSubmodule::new(ring.clone(), gens.clone()).map_err(|e| e.to_string())?;

    let mut rows = Vec::new();
    for g in &gens {
        let Some(gd) = ring.degree(g) else { continue };
        let shift = gd - (x_degree * w) as i64;
        if shift < 0 || shift % w as i64 != 0 {
            continue;
        }
        let moved = ring.v_multiply(g, &[(shift / w as i64) as u32]);
        rows.push(cols.iter().map(|c| moved.coefficient(c) as i128).collect::<Vec<_>>());
    }
    let x = if rng.gen_bool(0.5) {
        random_in(rng, x_degree)
    } else {
        let mut acc = vec![0i128; cols.len()];
        for r in &rows {
            let k: i128 = rng.gen_range(-3..=3);
            for (a, c) in acc.iter_mut().zip(r) {
                *a += k * c;
            }
        }
        if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..cols.len());
            acc[i] += 1;
        }
        OmegaElement::from_terms(cols.iter().cloned().zip(acc.iter().map(|&c| c as i64)))
    };
    let xv: Vec<i128> = cols.iter().map(|c| (x.coefficient(c) as i128).rem_euclid(q)).collect();
    let oracle = span_mod(&rows, q, cols.len()).contains(&xv);
    let engine = module.contains(&x).map_err(|e| e.to_string())?;
    Ok((engine, oracle))
}

pub fn membership_oracle(seed: u64, instances: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = 0;
    for i in 0..instances {
        let (engine, oracle) = membership_instance(&mut rng)?;
        if engine != oracle {
            return Err(format!("instance {i}: engine {engine}, oracle {oracle}"));
        }
        members += usize::from(oracle);
    }
    Ok(format!("{instances} instances agree ({members} members)"))
}

/// Smith data accounts for the lattice rank in every degree of every complete quotient.
pub fn smith_conservation(catalog: &Catalog) -> Outcome {
    let mut pieces = 0;
    for e in catalog.entries().iter().filter(|e| e.res_complete()) {
        let m = e.res_module(e.max_v_index().max(DEFAULT_V_BOUND)).map_err(|x| x.to_string())?;
        let m = m.saturate_products(m.default_cap()).map_err(|x| x.to_string())?;
        for d in 0..=m.default_cap() {
            let q = m.quotient_in_degree(d).map_err(|x| x.to_string())?;
            let torsion_order: u128 = q.torsion.iter().map(|&t| t as u128).product();
            let invariants: u128 = q.smith.invariants.iter().map(|&t| t as u128).product();
            if q.lattice_rank() != q.free_rank as usize + q.torsion.len() + q.unit_invariants || torsion_order != invariants {
                return Err(format!("{} degree {d}: Smith data does not add up", e.label()));
            }
            pieces += 1;
        }
    }
    Ok(format!("{pieces} graded pieces"))
}

/// Euler characteristic on every page and `d∘d = 0` (checked during each turn).
pub fn spectral_invariants(catalog: &Catalog) -> Outcome {
    let mut turns = 0;
    for e in catalog.entries().iter().filter(|e| !e.differentials.is_empty()) {
        let res = spectral_run(e, DEFAULT_S_MAX).map_err(|x| format!("{}: {x}", e.label()))?;
        let chis: Vec<i64> = res.pages.iter().map(Page::euler_characteristic).collect();
        if chis.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{}: Euler characteristics {chis:?}", e.label()));
        }
        turns += res.pages.len() - 1;
    }
    Ok(format!("{turns} page turns"))
}

fn c10_properties(catalog: &Catalog) -> Outcome {
    let a = membership_oracle(MEMBERSHIP_SEED, MEMBERSHIP_INSTANCES)?;
    let b = smith_conservation(catalog)?;
    let c = spectral_invariants(catalog)?;
    Ok(format!("membership: {a}; Smith: {b}; spectral: {c}"))
}

pub const TITLES: [&str; 10] = [
    "E8 p=2 presentation: dimension 128, top degree 120, palindromic",
    "spin generator deltas for l = 5..10",
    "augmentation quotient of Spin_7",
    "augmentation quotient of Spin_11",
    "augmentation quotient of E8 p=5",
    "restriction Spin_11 -> Spin_7 with labels {y10}",
    "spectral sequences over the reals for Spin_7 and Spin_11",
    "degree validation flags exactly the known lines",
    "E8/E7 p=3 kernel and complement characters",
    "property suites",
];

pub fn run_criterion(catalog: &Catalog, id: u32) -> Criterion {
    let outcome = match id {
        1 => c1_e8_presentation(catalog),
        2 => c2_spin_deltas(catalog),
        3 => entry(catalog, "Spin_7", 2).and_then(|e| expect_quotient(&e, &[0, 6], &[(4, 2)])),
        4 => entry(catalog, "Spin_11", 2).and_then(|e| expect_quotient(&e, &[0, 6, 10, 16], &[(4, 2), (8, 2), (12, 2)])),
        5 => entry(catalog, "E8", 5)
            .and_then(|e| expect_quotient(&e, &[0, 12, 24, 36, 48], &[(4, 5), (16, 5), (28, 5), (40, 5)])),
        6 => c6_restriction(catalog),
        7 => c7_spectral(catalog),
        8 => c8_validation(catalog),
        9 => c9_e8_p3(catalog),
        10 => c10_properties(catalog),
        _ => Err(format!("no criterion {id}")),
    };
    let title = TITLES.get(id as usize - 1).copied().unwrap_or("unknown");
    let (pass, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Criterion { id, title, pass, detail }
}

pub fn run_suite(catalog: &Catalog) -> Vec<Criterion> {
    (1..=10).map(|id| run_criterion(catalog, id)).collect()
}

pub fn suite_report(catalog: &Catalog) -> Report {
    let results = run_suite(catalog);
    let passed = results.iter().filter(|c| c.pass).count();
    let mut r = Report::new("acceptance", None, Verdict::from_pass(passed == results.len()));
    r.witness(format!("{passed} of {} criteria pass", results.len()));
    let mut t = Table::new("criteria", &["id", "criterion", "verdict", "detail"]);
    for c in &results {
        t.push(vec![
            json!(c.id),
            json!(c.title),
            json!(Verdict::from_pass(c.pass).as_str()),
            json!(c.detail),
        ]);
    }
    r.tables.push(t);
    r
}

/// Per-degree p-ranks, for comparisons where only ranks are known.
pub fn p_ranks(g: &GradedAbelianGroup) -> BTreeMap<i64, u32> {
    g.pieces().map(|(d, _)| (d, g.p_rank(d))).filter(|(_, r)| *r > 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_oracle_is_deterministic() {
        assert_eq!(membership_oracle(7, 20), membership_oracle(7, 20));
        assert!(membership_oracle(7, 20).is_ok());
    }
}
