//! Verifiers for chain edges and restriction statements.
//!
//! A chain edge `G' ← G''` is checked on graded characters of `P(y)`. A
//! restriction statement is checked in the target module
//! `T = Res_Ω(G'') ⊗ Λ(labels)` inside `Ω_m ⊗ P_G(y)`: every named class image of
//! `G` must lie in `T`, its class in the augmentation quotient of `T` is compared
//! with the stated image, and the character of that quotient is compared with
//! the expected Chow groups of `G''` tensored with `Λ(labels)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog::{spin_rank, CatalogEntry, Expr, Factor, LabelConvention, Term};
use crate::graded_algebra::{
    convolve, lambda_character, spin_lbar, truncated_convolve, AlgebraHom, Monomial,
};
use crate::omega_module::{
    GradedAbelianGroup, OmegaElement, OmegaMonomial, OmegaRing, OmegaSubmodule, QuotientClass,
};
use crate::{Error, Result};

fn padded(a: &[u64], len: usize) -> Vec<u64> {
    let mut v = a.to_vec();
    v.resize(len, 0);
    v
}

/// First degree where two series differ, as `(degree, expected, found)`.
pub fn first_mismatch(expected: &[u64], found: &[u64]) -> Option<(u32, u64, u64)> {
    let n = expected.len().max(found.len());
    let (e, f) = (padded(expected, n), padded(found, n));
    (0..n)
        .find(|&d| e[d] != f[d])
        .map(|d| (d as u32, e[d], f[d]))
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCheckResult {
    pub group: String,
    pub subgroup: String,
    pub convention: LabelConvention,
    pub labels: Vec<String>,
    pub expected: Vec<u64>,
    pub found: Vec<u64>,
    /// `(degree, expected, found)` at the first disagreement.
    pub mismatch: Option<(u32, u64, u64)>,
}

impl EdgeCheckResult {
    pub fn pass(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Check `G' ← G''` with the given labels. `tensor`: `P_G' ≅ Λ(labels) ⊗ P_G''` on
/// Poincaré series. `kernel`: the kernel of the canonical surjection
/// `P_G' → P_G''` has exactly the label degrees.
pub fn verify_chain_edge(
    group: &CatalogEntry,
    subgroup: &CatalogEntry,
    labels: &[Term],
    convention: LabelConvention,
) -> Result<EdgeCheckResult> {
    if group.prime != subgroup.prime {
        return Err(Error::PrimeMismatch(group.prime.get(), subgroup.prime.get()));
    }
    let degrees = group.label_degrees(labels)?;
    let pg = group.presentation()?;
    let psub = subgroup.presentation()?;
    let (expected, found) = match convention {
        LabelConvention::Tensor => {
            let lam = lambda_character(group.prime.get(), &degrees);
            (convolve(&lam, &psub.poincare_series()), pg.poincare_series())
        }
        LabelConvention::Kernel => {
            let f = AlgebraHom::canonical_projection(&pg, &psub)?;
            let found = f.kernel_character(pg.top_degree())?;
            let mut hist = vec![0u64; degrees.iter().copied().max().unwrap_or(0) as usize + 1];
            for d in degrees {
                hist[d as usize] += 1;
            }
            (hist, found)
        }
    };
    let (expected, found) = (trim(expected), trim(found));
    Ok(EdgeCheckResult {
        group: group.label(),
        subgroup: subgroup.label(),
        convention,
        labels: labels.iter().map(|t| t.to_string()).collect(),
        mismatch: first_mismatch(&expected, &found),
        expected,
        found,
    })
}

/// Monomials `Π label_i^{e_i}` with `e_i < p`, dropping those killed by heights.
fn label_monomials(group: &CatalogEntry, labels: &[Term]) -> Result<Vec<Monomial>> {
    let p = group.prime.get();
    let mut out = vec![Vec::<Factor>::new()];
    for l in labels {
        let mut next = Vec::new();
        for base in &out {
            for e in 0..p {
                let mut f = base.clone();
                for _ in 0..e {
                    f.extend(l.factors.iter().cloned());
                }
                next.push(f);
            }
        }
        out = next;
    }
    let mut monos = Vec::new();
    for f in out {
        if let Some(m) = group.monomial(&f)? {
            if !monos.contains(&m) {
                monos.push(m);
            }
        }
    }
    Ok(monos)
}

/// The target module `Res_Ω(G'') ⊗ Λ(labels)` inside `Ω_m ⊗ P_G(y)`.
pub struct RestrictionTarget<'a> {
    group: &'a CatalogEntry,
    subgroup: &'a CatalogEntry,
    ring: OmegaRing,
    module: OmegaSubmodule,
    label_degrees: Vec<u32>,
}

impl<'a> RestrictionTarget<'a> {
    pub fn new(group: &'a CatalogEntry, subgroup: &'a CatalogEntry, labels: &[Term], v_bound: u32) -> Result<Self> {
        if group.prime != subgroup.prime {
            return Err(Error::PrimeMismatch(group.prime.get(), subgroup.prime.get()));
        }
        if !subgroup.res_complete() {
            return Err(Error::Incomplete(format!(
                "restriction data of {} is incomplete",
                subgroup.label()
            )));
        }
        let ring = group.ring(v_bound)?;
        let sub_module = subgroup.res_module(v_bound)?;
        let mut generators = Vec::new();
        let monos = label_monomials(group, labels)?;
        for g in sub_module.generators() {
            let h = transport(subgroup, group, g, &ring)?;
            for m in &monos {
                let lm = ring.term(1, vec![0; v_bound as usize], m.clone());
                generators.push(ring.multiply(&h, &lm)?);
            }
        }
        let cap = ring.algebra().top_degree() as i64;
        let module = OmegaSubmodule::new(ring.clone(), generators)?.saturate_products(cap)?;
        Ok(RestrictionTarget {
            group,
            subgroup,
            ring,
            module,
            label_degrees: group.label_degrees(labels)?,
        })
    }

    pub fn module(&self) -> &OmegaSubmodule {
        &self.module
    }

    pub fn ring(&self) -> &OmegaRing {
        &self.ring
    }

    pub fn quotient(&self) -> Result<GradedAbelianGroup> {
        self.module.augmentation_quotient(self.module.default_cap())
    }

    /// Evaluate an expression in subgroup class names and group generator names.
    pub fn evaluate(&self, expr: &Expr) -> Result<OmegaElement> {
        let m = self.ring.v_bound() as usize;
        let mut out = OmegaElement::zero();
        for t in &expr.terms {
            let mut acc = self.ring.one().scale(t.coefficient);
            for f in &t.factors {
                let base = if let Some(c) = self.subgroup.class(&f.name) {
                    let sub_ring = self.subgroup.ring(self.ring.v_bound())?;
                    let x = self.subgroup.omega_element(c.effective_image(), &sub_ring)?;
                    transport(self.subgroup, self.group, &x, &self.ring)?
                } else if let Some(k) = f.v_index() {
                    if k == 0 || k as usize > m {
                        return Err(Error::VIndexOutOfRange {
                            index: k,
                            bound: self.ring.v_bound(),
                        });
                    }
                    self.ring.v_i_multiply(k, &self.ring.one())
                } else {
                    let factor = Term::monomial(vec![Factor::new(f.name.clone(), 1)]);
                    self.group.omega_element(&Expr::term(factor), &self.ring)?
                };
                for _ in 0..f.power {
                    acc = self.ring.multiply(&acc, &base)?;
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Membership plus class in the augmentation quotient (`None` when not contained).
    pub fn classify(&self, x: &OmegaElement) -> Result<Option<QuotientClass>> {
        if x.is_zero() {
            return Ok(Some(QuotientClass {
                degree: 0,
                torsion: Vec::new(),
                free: Vec::new(),
                denominator: 1,
            }));
        }
        match self.module.class_of(x) {
            Ok(c) => Ok(Some(c)),
            Err(Error::NotContained) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Rewrite an element of `Ω ⊗ P_from(y)` in `Ω ⊗ P_to(y)` by generator names.
fn transport(from: &CatalogEntry, to: &CatalogEntry, x: &OmegaElement, ring: &OmegaRing) -> Result<OmegaElement> {
    let index: Vec<usize> = from
        .generators
        .iter()
        .map(|g| {
            to.generator_index(g.name()).ok_or_else(|| {
                Error::Invalid(format!("generator `{}` of {} is missing from {}", g.name(), from.label(), to.label()))
            })
        })
        .collect::<Result<_>>()?;
    let mut out = OmegaElement::zero();
    for (m, c) in x.terms() {
        let mut e = vec![0u32; to.generators.len()];
        for (i, &x) in m.y.exponents().iter().enumerate() {
            e[index[i]] += x;
        }
        let y = Monomial::from_exponents(e);
        if !ring.algebra().is_admissible(&y) {
            continue;
        }
        let mut v = m.v.clone();
        v.resize(ring.v_bound() as usize, 0);
        out = out.add(&OmegaElement::from_terms([(OmegaMonomial { v, y }, c)]));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCheck {
    pub name: String,
    pub degree: u32,
    /// Image used for the computation (the corrected one when present).
    pub image: String,
    pub corrected: bool,
    pub contained: bool,
    pub class: Option<QuotientClass>,
    pub zero_mod_p: Option<bool>,
    pub stated: Option<String>,
    pub agrees_mod_p: Option<bool>,
    pub agrees_integrally: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterCheck {
    /// `degree -> (free rank, torsion)` on both sides, or p-ranks when only those are known.
    pub expected: BTreeMap<i64, (u32, Vec<u64>)>,
    pub found: BTreeMap<i64, (u32, Vec<u64>)>,
    pub integral: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionReport {
    pub group: String,
    pub subgroup: String,
    pub labels: Vec<String>,
    pub classes: Vec<ClassCheck>,
    pub character: Option<CharacterCheck>,
}

impl RestrictionReport {
    pub fn pass(&self) -> bool {
        self.classes.iter().all(|c| {
            c.contained && c.agrees_mod_p != Some(false) && c.agrees_integrally != Some(false)
        }) && self.character.as_ref().is_none_or(|c| c.pass)
    }

    pub fn class(&self, name: &str) -> Option<&ClassCheck> {
        self.classes.iter().find(|c| c.name == name)
    }
}

fn group_map(g: &GradedAbelianGroup) -> BTreeMap<i64, (u32, Vec<u64>)> {
    g.pieces()
        .map(|(d, p)| (d, (p.free_rank, p.torsion.clone())))
        .collect()
}

fn rank_map(g: &GradedAbelianGroup) -> BTreeMap<i64, (u32, Vec<u64>)> {
    g.pieces().map(|(d, p)| (d, (p.p_rank(), Vec::new()))).collect()
}

/// Check the named classes of `group` against `Res_Ω(subgroup) ⊗ Λ(labels)`.
pub fn verify_motive_restriction(
    group: &CatalogEntry,
    subgroup: &CatalogEntry,
    labels: &[Term],
    v_bound: u32,
) -> Result<RestrictionReport> {
    let target = RestrictionTarget::new(group, subgroup, labels, v_bound)?;
    let p = group.prime;
    let integral = matches!(subgroup.expected_chow(), Some(Ok(_)));
    let reflexive = group.group == subgroup.group && labels.is_empty();

    let mut classes = Vec::new();
    for c in &group.classes {
        let x = group.omega_element(c.effective_image(), target.ring())?;
        let class = target.classify(&x)?;
        let stated: Option<Expr> = if reflexive {
            Some(Expr::term(Term::monomial(vec![Factor::new(c.name.clone(), 1)])))
        } else {
            group
                .restrictions_to(&subgroup.group)
                .find(|r| r.class == c.name)
                .map(|r| r.image.clone())
        };
        let (mut agrees_mod_p, mut agrees_integrally) = (None, None);
        if let (Some(s), Some(cls)) = (&stated, &class) {
            let y = target.evaluate(s)?;
            let diff = if y.is_zero() {
                Some(cls.clone())
            } else {
                let same_degree = x.is_zero() || target.ring().degree(&x) == target.ring().degree(&y);
                target.classify(&y)?.filter(|_| same_degree).map(|cy| {
                    if x.is_zero() {
                        cy.scale(-1)
                    } else {
                        cls.sub(&cy)
                    }
                })
            };
            agrees_mod_p = Some(diff.as_ref().is_some_and(|d| d.is_zero_mod(p)));
            if integral {
                agrees_integrally = Some(diff.as_ref().is_some_and(QuotientClass::is_zero));
            }
        }
        classes.push(ClassCheck {
            name: c.name.clone(),
            degree: c.degree,
            image: c.effective_image().to_string(),
            corrected: c.corrected.is_some(),
            contained: class.is_some(),
            zero_mod_p: class.as_ref().map(|k| k.is_zero_mod(p)),
            class,
            stated: stated.map(|s| s.to_string()),
            agrees_mod_p,
            agrees_integrally,
        });
    }

    let character = match subgroup.expected_chow() {
        None if subgroup.chow.is_empty() => None,
        Some(Ok(expected)) => {
            let expected = expected.tensor_lambda(&target.label_degrees);
            let found = target.quotient()?;
            Some(CharacterCheck {
                pass: expected == found,
                expected: group_map(&expected),
                found: group_map(&found),
                integral: true,
            })
        }
        Some(Err(e)) => return Err(e),
        None => {
            let mut base = GradedAbelianGroup::new(p);
            for (d, r) in subgroup.expected_p_ranks() {
                base.add(d, r, &[])?;
            }
            let expected = base.tensor_lambda(&target.label_degrees);
            let found = target.quotient()?;
            let (e, f) = (rank_map(&expected), rank_map(&found));
            Some(CharacterCheck {
                pass: e == f,
                expected: e,
                found: f,
                integral: false,
            })
        }
    };

    Ok(RestrictionReport {
        group: group.label(),
        subgroup: subgroup.label(),
        labels: labels.iter().map(|t| t.to_string()).collect(),
        classes,
        character,
    })
}

/// `Λ(exterior) ⊗ F_p[polynomial]`, the source of a surjection onto `CH*/p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceSource {
    pub exterior: Vec<(String, u32)>,
    pub polynomial: Vec<(String, u32)>,
}

impl DominanceSource {
    /// `Λ(c_2..c_ℓ̄) ⊗ Z/2[e_{2^{t+1}}]` for `Spin_{2ℓ+1}`, `2^t ≤ ℓ < 2^{t+1}`.
    pub fn spin(l: u32) -> Self {
        let lbar = spin_lbar(l);
        let exterior = (2..=lbar).map(|i| (format!("c_{i}"), 2 * i)).collect();
        let t = 31 - l.leading_zeros();
        let j = 1u32 << (t + 1);
        DominanceSource {
            exterior,
            polynomial: vec![(format!("e_{j}"), 2 * j)],
        }
    }

    pub fn series(&self, p: u32, cap: u32) -> Vec<u64> {
        let degrees: Vec<u32> = self.exterior.iter().map(|(_, d)| *d).collect();
        let mut s = lambda_character(p, &degrees);
        s.resize(cap as usize + 1, 0);
        for (_, d) in &self.polynomial {
            let poly: Vec<u64> = (0..=cap).map(|k| u64::from(k % d == 0)).collect();
            s = truncated_convolve(&s, &poly, cap);
        }
        s.resize(cap as usize + 1, 0);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceReport {
    pub entry: String,
    pub source: Vec<u64>,
    pub expected: Vec<u64>,
    /// `(degree, source dimension, expected p-rank)` at the first failure.
    pub violation: Option<(u32, u64, u64)>,
}

impl DominanceReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Per-degree: dimension of the source ≥ p-rank of the expected Chow groups.
pub fn dominance_check(entry: &CatalogEntry, source: &DominanceSource) -> DominanceReport {
    let ranks = entry.expected_p_ranks();
    let cap = ranks.keys().next_back().copied().unwrap_or(0).max(0) as u32;
    let mut expected = vec![0u64; cap as usize + 1];
    for (d, r) in ranks {
        if d >= 0 {
            expected[d as usize] = r as u64;
        }
    }
    let src = source.series(entry.prime.get(), cap);
    let violation = (0..=cap as usize)
        .find(|&d| src[d] < expected[d])
        .map(|d| (d as u32, src[d], expected[d]));
    DominanceReport {
        entry: entry.label(),
        source: src,
        expected,
        violation,
    }
}

/// Indices `j` of every `c_j` factor in a class name such as `c_6c_2`.
pub fn chern_indices(name: &str) -> Vec<u32> {
    let mut out = Vec::new();
    let mut rest = name;
    while let Some(pos) = rest.find("c_") {
        let tail = &rest[pos + 2..];
        let digits: String = tail.chars().take_while(char::is_ascii_digit).collect();
        if let Ok(j) = digits.parse() {
            out.push(j);
        }
        rest = &tail[digits.len()..];
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelIdealItem {
    pub class: String,
    pub indices: Vec<u32>,
    pub vanishes_mod_p: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelIdealReport {
    pub group: String,
    pub subgroup: String,
    pub lbar: u32,
    pub items: Vec<KernelIdealItem>,
}

impl KernelIdealReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.vanishes_mod_p)
    }
}

/// Every named class involving some `c_j` with `j > ℓ̄''` must restrict to zero mod p.
pub fn kernel_ideal_check(
    group: &CatalogEntry,
    subgroup: &CatalogEntry,
    labels: &[Term],
    v_bound: u32,
) -> Result<KernelIdealReport> {
    let l = spin_rank(&subgroup.group).ok_or_else(|| {
        Error::Invalid(format!("{} is not a spin group", subgroup.label()))
    })?;
    let lbar = spin_lbar(l);
    let target = RestrictionTarget::new(group, subgroup, labels, v_bound)?;
    let mut items = Vec::new();
    for c in &group.classes {
        let indices = chern_indices(&c.name);
        if !indices.iter().any(|&j| j > lbar) {
            continue;
        }
        let x = group.omega_element(c.effective_image(), target.ring())?;
        let vanishes = target
            .classify(&x)?
            .is_some_and(|k| k.is_zero_mod(group.prime));
        items.push(KernelIdealItem {
            class: c.name.clone(),
            indices,
            vanishes_mod_p: vanishes,
        });
    }
    Ok(KernelIdealReport {
        group: group.label(),
        subgroup: subgroup.label(),
        lbar,
        items,
    })
}
