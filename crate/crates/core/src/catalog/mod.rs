//! In-memory model of the catalog: one [`CatalogEntry`] per (group, prime).
//!
//! Entries carry the presentation of `P(y)`, invariant-ideal data for the
//! cobordism restriction image, named classes with their images, stated
//! restrictions to subgroups, the expected Chow basis, chain edges, and
//! free-text assertions that are recorded but never computed. The text format
//! lives in the `flagchow` crate.

mod expr;
mod spin;
mod validate;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use expr::{Expr, Factor, Term};
pub use spin::{spin_entry, spin_rank, MAX_SPIN_RANK};
pub use validate::{validate_catalog, validate_degrees, ValidationItem, ValidationReport, Verdict};

use crate::graded_algebra::{AlgebraPresentation, CoefficientMode, GeneratorSpec, Monomial, Prime};
use crate::omega_module::{GradedAbelianGroup, IdealGenerator, OmegaElement, OmegaRing, OmegaSubmodule};
use crate::{Error, Result};

/// Name of the built-in one-point entry (`P(y) = Z_(p)`).
pub const POINT: &str = "pt";

/// `(ideal)·monomial` in the cobordism restriction data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResPair {
    pub ideal: Vec<IdealGenerator>,
    pub monomial: Vec<Factor>,
    pub incomplete: bool,
}

impl fmt::Display for IdealGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<Factor> = self
            .v
            .iter()
            .map(|&(i, e)| Factor::new(format!("v{i}"), e))
            .collect();
        let t = Term {
            coefficient: self.coefficient,
            factors,
        };
        write!(f, "{t}")
    }
}

impl fmt::Display for ResPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.ideal.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "){}", Term::monomial(self.monomial.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedClass {
    pub name: String,
    /// Topological degree.
    pub degree: u32,
    /// The image as stated by the source, kept verbatim.
    pub image: Expr,
    pub known_inconsistent: bool,
    /// Replacement used for all computations when the stated image is wrong.
    pub corrected: Option<Expr>,
}

impl NamedClass {
    pub fn effective_image(&self) -> &Expr {
        self.corrected.as_ref().unwrap_or(&self.image)
    }
}

/// A stated image of a class of this entry in the Chow ring of the entry over
/// the field where `subgroup` becomes versal. The image is written in class
/// names of the subgroup entry and generator names of this entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub subgroup: String,
    pub class: String,
    pub image: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChowKind {
    Integral { free: u32, torsion: Vec<u64> },
    /// Only the dimension mod p is known.
    ModP { rank: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowLine {
    /// Topological degree.
    pub degree: u32,
    pub kind: ChowKind,
    pub names: Vec<String>,
}

impl ChowLine {
    pub fn p_rank(&self) -> u32 {
        match &self.kind {
            ChowKind::Integral { free, torsion } => free + torsion.len() as u32,
            ChowKind::ModP { rank } => *rank,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LabelConvention {
    /// `P_G'(y) ≅ Λ(labels) ⊗ P_G''(y)`.
    Tensor,
    /// The labels form a basis of the kernel of `P_G'(y) → P_G''(y)`.
    Kernel,
}

impl LabelConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelConvention::Tensor => "tensor",
            LabelConvention::Kernel => "kernel",
        }
    }
}

impl core::str::FromStr for LabelConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor" => Ok(LabelConvention::Tensor),
            "kernel" => Ok(LabelConvention::Kernel),
            _ => Err(Error::Invalid(format!("unknown label convention `{s}`"))),
        }
    }
}

/// Edge `self ← subgroup` of a chain diagram. Labels are monomials in the
/// generators of this entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainEdge {
    pub subgroup: String,
    pub labels: Vec<Term>,
    pub convention: LabelConvention,
}

/// A class `τ^tau ρ^rho` of motivic cohomology of the reals standing for a Chow class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotivicClass {
    pub class: String,
    pub tau: i32,
    pub rho: u32,
    /// Topological degree of the Chow class.
    pub degree: u32,
}

/// `d_page(generator) = image` in a Borel-type spectral sequence; the image is
/// an expression in `rho` and fiber generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialSpec {
    pub page: u32,
    pub generator: String,
    pub image: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub group: String,
    pub prime: Prime,
    /// The cobordism restriction data is known only partially.
    pub incomplete: bool,
    /// The expected Chow list is only known to be contained in the Chow ring.
    pub inclusion_only: bool,
    pub generators: Vec<GeneratorSpec>,
    pub res: Vec<ResPair>,
    pub classes: Vec<NamedClass>,
    pub restrictions: Vec<Restriction>,
    pub chow: Vec<ChowLine>,
    pub edges: Vec<ChainEdge>,
    pub motivic: Vec<MotivicClass>,
    pub differentials: Vec<DifferentialSpec>,
    pub assertions: Vec<String>,
}

/// Topological degree of the E8 (p = 2) generator `y1..y4`.
fn e8_name_degree(name: &str) -> Option<u32> {
    [6, 10, 18, 30]
        .into_iter()
        .find(|&d| crate::graded_algebra::e8_alias(d) == Some(name))
}

/// Degree encoded in a canonical generator name `y<n>`.
fn canonical_name_degree(name: &str) -> Option<u32> {
    let rest = name.strip_prefix('y')?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let d: u32 = rest.parse().ok()?;
    d.is_multiple_of(2).then_some(d)
}

impl CatalogEntry {
    pub fn new(group: impl Into<String>, prime: Prime) -> Self {
        CatalogEntry {
            group: group.into(),
            prime,
            incomplete: false,
            inclusion_only: false,
            generators: Vec::new(),
            res: Vec::new(),
            classes: Vec::new(),
            restrictions: Vec::new(),
            chow: Vec::new(),
            edges: Vec::new(),
            motivic: Vec::new(),
            differentials: Vec::new(),
            assertions: Vec::new(),
        }
    }

    /// The one-point entry: `P(y) = Z_(p)`, restriction image `Ω*`, Chow group `Z` in degree 0.
    pub fn point(prime: Prime) -> Self {
        let mut e = CatalogEntry::new(POINT, prime);
        e.classes.push(NamedClass {
            name: "1".to_string(),
            degree: 0,
            image: Expr::term(Term::scalar(1)),
            known_inconsistent: false,
            corrected: None,
        });
        e.chow.push(ChowLine {
            degree: 0,
            kind: ChowKind::Integral {
                free: 1,
                torsion: Vec::new(),
            },
            names: vec!["1".to_string()],
        });
        e
    }

    /// `group p=<p>`, used in reports.
    pub fn label(&self) -> String {
        format!("{} p={}", self.group, self.prime)
    }

    /// Structural checks: unique class names, a well-formed presentation.
    pub fn check(&self) -> Result<()> {
        let mut seen = BTreeMap::new();
        for c in &self.classes {
            if seen.insert(c.name.as_str(), ()).is_some() {
                return Err(Error::Invalid(format!(
                    "{}: duplicate class `{}`",
                    self.label(),
                    c.name
                )));
            }
        }
        self.presentation()?;
        Ok(())
    }

    pub fn presentation(&self) -> Result<Arc<AlgebraPresentation>> {
        Ok(Arc::new(AlgebraPresentation::new(
            self.prime,
            self.generators.clone(),
            CoefficientMode::PLocal,
        )?))
    }

    /// Index of a generator given by name, alias, or canonical `y<degree>` name.
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.generators.iter().position(|g| g.answers_to(name)) {
            return Some(i);
        }
        let d = canonical_name_degree(name)?;
        let mut hits = self.generators.iter().enumerate().filter(|(_, g)| g.degree() == d);
        match (hits.next(), hits.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    /// Degree of a generator name for validation purposes. Names outside the
    /// presentation still get a degree when they follow one of the two naming
    /// schemes (`y1..y4` at p = 2, `y<degree>`), so that a misprinted image can
    /// be assigned the degree its author meant.
    pub fn name_degree(&self, name: &str) -> Option<u32> {
        if let Some(i) = self.generator_index(name) {
            return Some(self.generators[i].degree());
        }
        if self.prime.get() == 2 {
            if let Some(d) = e8_name_degree(name) {
                return Some(d);
            }
        }
        canonical_name_degree(name)
    }

    pub fn class(&self, name: &str) -> Option<&NamedClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// Exponent vector of a product of generators; `None` if it vanishes by a height relation.
    pub fn monomial(&self, factors: &[Factor]) -> Result<Option<Monomial>> {
        let mut e = vec![0u32; self.generators.len()];
        for f in factors {
            let i = self
                .generator_index(&f.name)
                .ok_or_else(|| Error::UnknownGenerator(f.name.clone()))?;
            e[i] += f.power;
        }
        let m = Monomial::from_exponents(e);
        let admissible = m
            .exponents()
            .iter()
            .zip(&self.generators)
            .all(|(&x, g)| x < g.height());
        Ok(admissible.then_some(m))
    }

    pub fn monomial_degree(&self, factors: &[Factor]) -> Result<u32> {
        factors
            .iter()
            .map(|f| {
                let i = self
                    .generator_index(&f.name)
                    .ok_or_else(|| Error::UnknownGenerator(f.name.clone()))?;
                Ok(self.generators[i].degree() * f.power)
            })
            .sum()
    }

    pub fn ring(&self, v_bound: u32) -> Result<OmegaRing> {
        Ok(OmegaRing::new(self.presentation()?, v_bound))
    }

    /// Element of `Ω_m ⊗ P(y)` from an expression in `v<k>` and generator names.
    pub fn omega_element(&self, expr: &Expr, ring: &OmegaRing) -> Result<OmegaElement> {
        let m = ring.v_bound() as usize;
        let mut out = OmegaElement::zero();
        for t in &expr.terms {
            let mut v = vec![0u32; m];
            let mut ys = Vec::new();
            for f in &t.factors {
                match f.v_index() {
                    Some(k) => {
                        if k == 0 || k as usize > m {
                            return Err(Error::VIndexOutOfRange {
                                index: k,
                                bound: ring.v_bound(),
                            });
                        }
                        v[k as usize - 1] += f.power;
                    }
                    None => ys.push(f.clone()),
                }
            }
            if let Some(y) = self.monomial(&ys)? {
                out = out.add(&ring.term(t.coefficient, v, y));
            }
        }
        Ok(out)
    }

    /// Whether the cobordism restriction data is complete.
    pub fn res_complete(&self) -> bool {
        !self.incomplete && self.res.iter().all(|r| !r.incomplete)
    }

    /// The submodule generated by `1` and the invariant-ideal data, marked
    /// incomplete when the data is partial.
    pub fn res_module(&self, v_bound: u32) -> Result<OmegaSubmodule> {
        let ring = self.ring(v_bound)?;
        let mut pairs = Vec::new();
        for r in &self.res {
            if let Some(m) = self.monomial(&r.monomial)? {
                pairs.push((r.ideal.clone(), m));
            }
        }
        let module = OmegaSubmodule::from_ideal_data(ring, &pairs)?;
        Ok(if self.res_complete() {
            module
        } else {
            module.into_incomplete()
        })
    }

    /// Largest `v<k>` index in the restriction data (at least 1).
    pub fn max_v_index(&self) -> u32 {
        self.res
            .iter()
            .flat_map(|r| r.ideal.iter().flat_map(|g| g.v.iter().map(|&(i, _)| i)))
            .chain(self.classes.iter().flat_map(|c| {
                c.effective_image()
                    .terms
                    .iter()
                    .flat_map(|t| t.factors.iter().filter_map(Factor::v_index))
                    .collect::<Vec<_>>()
            }))
            .max()
            .unwrap_or(1)
            .max(1)
    }

    /// The expected Chow groups, when every line is integral.
    pub fn expected_chow(&self) -> Option<Result<GradedAbelianGroup>> {
        if self.chow.is_empty() {
            return None;
        }
        let mut g = GradedAbelianGroup::new(self.prime);
        for line in &self.chow {
            match &line.kind {
                ChowKind::Integral { free, torsion } => {
                    if let Err(e) = g.add(line.degree as i64, *free, torsion) {
                        return Some(Err(e));
                    }
                }
                ChowKind::ModP { .. } => return None,
            }
        }
        Some(Ok(g))
    }

    /// Expected dimension of `CH^* / p` per topological degree.
    pub fn expected_p_ranks(&self) -> BTreeMap<i64, u32> {
        let mut out = BTreeMap::new();
        for line in &self.chow {
            *out.entry(line.degree as i64).or_insert(0) += line.p_rank();
        }
        out.retain(|_, r| *r > 0);
        out
    }

    pub fn edge_to(&self, subgroup: &str) -> Option<&ChainEdge> {
        self.edges.iter().find(|e| e.subgroup == subgroup)
    }

    pub fn restrictions_to<'a>(&'a self, subgroup: &'a str) -> impl Iterator<Item = &'a Restriction> {
        self.restrictions.iter().filter(move |r| r.subgroup == subgroup)
    }

    /// Topological degrees of label monomials.
    pub fn label_degrees(&self, labels: &[Term]) -> Result<Vec<u32>> {
        labels.iter().map(|t| self.monomial_degree(&t.factors)).collect()
    }
}

/// A set of entries with lookup by group and prime. `pt` is always available
/// and `Spin_n` entries missing from the list are synthesized.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn new(entries: Vec<CatalogEntry>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            e.check()?;
            if entries[..i].iter().any(|o| o.group == e.group && o.prime == e.prime) {
                return Err(Error::Invalid(format!("duplicate entry {}", e.label())));
            }
        }
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, group: &str, prime: Prime) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.group == group && e.prime == prime)
    }

    /// Look up an entry. Without a prime the group must be unambiguous.
    pub fn resolve(&self, group: &str, prime: Option<u32>) -> Result<CatalogEntry> {
        let unknown = || Error::UnknownEntry {
            group: group.to_string(),
            prime,
        };
        let hits: Vec<&CatalogEntry> = self
            .entries
            .iter()
            .filter(|e| e.group == group && prime.is_none_or(|p| e.prime.get() == p))
            .collect();
        match hits.as_slice() {
            [one] => return Ok((*one).clone()),
            [] => {}
            many => {
                let primes: Vec<String> = many.iter().map(|e| e.prime.to_string()).collect();
                return Err(Error::Invalid(format!(
                    "`{group}` exists at several primes ({}); pass one explicitly",
                    primes.join(", ")
                )));
            }
        }
        if group == POINT {
            return Ok(CatalogEntry::point(Prime::new(prime.unwrap_or(2))?));
        }
        if let Some(l) = spin_rank(group) {
            if prime.is_none_or(|p| p == 2) && (2..=MAX_SPIN_RANK).contains(&l) {
                return spin_entry(l);
            }
        }
        Err(unknown())
    }

    /// Distinct group names, for suggestions.
    pub fn group_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.entries.iter().map(|e| e.group.clone()).collect();
        names.push(POINT.to_string());
        names.sort();
        names.dedup();
        names
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spin11() -> CatalogEntry {
        spin_entry(5).unwrap()
    }

    #[test]
    fn generator_lookup_by_every_name() {
        let e = spin11();
        assert_eq!(e.generator_index("y6"), Some(0));
        assert_eq!(e.generator_index("y1"), Some(0));
        assert_eq!(e.generator_index("y2"), Some(1));
        assert_eq!(e.generator_index("y3"), None);
        assert_eq!(e.name_degree("y3"), Some(18));
        assert_eq!(e.name_degree("y14"), Some(14));
        assert_eq!(e.name_degree("c_2"), None);
    }

    #[test]
    fn omega_elements_from_expressions() {
        let e = spin11();
        let ring = e.ring(3).unwrap();
        let x = e.omega_element(&"v1^2*y1*y2".parse().unwrap(), &ring).unwrap();
        assert_eq!(ring.degree(&x), Some(12));
        let zero = e.omega_element(&"y6*y6".parse().unwrap(), &ring).unwrap();
        assert!(zero.is_zero());
        assert!(matches!(
            e.omega_element(&"v4*y6".parse().unwrap(), &ring),
            Err(Error::VIndexOutOfRange { index: 4, bound: 3 })
        ));
    }

    #[test]
    fn point_entry() {
        let pt = CatalogEntry::point(Prime::new(3).unwrap());
        assert_eq!(pt.presentation().unwrap().dimension(), 1);
        let q = pt.res_module(3).unwrap().augmentation_quotient(0).unwrap();
        assert_eq!(q, pt.expected_chow().unwrap().unwrap());
    }

    #[test]
    fn duplicate_class_rejected() {
        let mut e = CatalogEntry::point(Prime::new(2).unwrap());
        let c = e.classes[0].clone();
        e.classes.push(c);
        assert!(e.check().is_err());
    }

    #[test]
    fn resolve_synthesizes_spin() {
        let cat = Catalog::new(vec![]).unwrap();
        let e = cat.resolve("Spin_13", None).unwrap();
        assert_eq!(e.generators.len(), 3);
        assert!(matches!(cat.resolve("E9", None), Err(Error::UnknownEntry { .. })));
        assert!(cat.resolve("Spin_13", Some(3)).is_err());
        assert_eq!(cat.resolve("pt", Some(5)).unwrap().prime.get(), 5);
    }
}
