//! Multiplicative spectral sequences over `F_2` of Borel type:
//! `E_2 = F_2[ρ]/(ρ^{S+1}) ⊗ Λ(y_1..y_k)` with `ρ` in bidegree `(1, 0)` and `y_i`
//! in `(0, |y_i|)`. A page differential `d_r : (s, t) → (s + r, t - r + 1)` is
//! given on fiber generators and extended as a derivation (no signs over `F_2`).
//!
//! Pages are stored per bidegree as a subquotient `Z / B` of the `E_2` space.
//! The window `s ≤ S` cuts off targets; every cell remembers whether its value
//! could have been affected by the cut, and the stability certificate only
//! speaks about total degrees made of unaffected cells.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog::{DifferentialSpec, Expr};
use crate::graded_algebra::{convolve, AlgebraPresentation};
use crate::linalg::{FpMatrix, Subspace};
use crate::{Error, Result};

/// Default column bound `S`.
pub const DEFAULT_S_MAX: u32 = 24;

/// `E_2` as a bigraded `F_2`-algebra, truncated at `s ≤ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedAlgebra {
    names: Vec<String>,
    degrees: Vec<u32>,
    s_max: u32,
    /// Fiber degree `t` → exterior monomials (bit masks) of that degree, sorted.
    by_degree: BTreeMap<u32, Vec<u32>>,
}

impl BigradedAlgebra {
    pub fn new(fiber: &[(String, u32)], s_max: u32) -> Result<Self> {
        if fiber.len() > 31 {
            return Err(Error::Invalid("at most 31 fiber generators".to_string()));
        }
        for (i, (name, d)) in fiber.iter().enumerate() {
            if *d == 0 {
                return Err(Error::BadDegree {
                    name: name.clone(),
                    degree: 0,
                });
            }
            if fiber[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::DuplicateGenerator(name.clone()));
            }
        }
        let degrees: Vec<u32> = fiber.iter().map(|(_, d)| *d).collect();
        let mut by_degree: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for mask in 0..(1u32 << fiber.len()) {
            let t = mask_degree(&degrees, mask);
            by_degree.entry(t).or_default().push(mask);
        }
        Ok(BigradedAlgebra {
            names: fiber.iter().map(|(n, _)| n.clone()).collect(),
            degrees,
            s_max,
            by_degree,
        })
    }

    pub fn s_max(&self) -> u32 {
        self.s_max
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn top_fiber_degree(&self) -> u32 {
        self.degrees.iter().sum()
    }

    pub fn fiber_basis(&self, t: u32) -> &[u32] {
        self.by_degree.get(&t).map_or(&[], Vec::as_slice)
    }

    /// Fiber degrees with a nonzero space.
    pub fn fiber_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.by_degree.keys().copied()
    }

    fn has_fiber(&self, t: i64) -> bool {
        t >= 0 && self.by_degree.contains_key(&(t as u32))
    }

    pub fn mask_degree(&self, mask: u32) -> u32 {
        mask_degree(&self.degrees, mask)
    }

    fn vector(&self, t: u32, x: &SpectralElement) -> Vec<u32> {
        let basis = self.fiber_basis(t);
        let mut v = vec![0u32; basis.len()];
        for &(_, mask) in &x.terms {
            let j = basis.binary_search(&mask).expect("element lies in the requested bidegree");
            v[j] ^= 1;
        }
        v
    }

    fn element(&self, s: u32, t: u32, v: &[u32]) -> SpectralElement {
        let basis = self.fiber_basis(t);
        SpectralElement {
            terms: v
                .iter()
                .zip(basis)
                .filter(|(c, _)| **c % 2 == 1)
                .map(|(_, &m)| (s, m))
                .collect(),
        }
    }

    /// Dimension of `E_2` in each total degree `0..=n_max` (inside the window).
    pub fn total_dims(&self, n_max: u32) -> Vec<u64> {
        let mut out = vec![0u64; n_max as usize + 1];
        for (&t, basis) in &self.by_degree {
            for s in 0..=self.s_max {
                let n = s + t;
                if n <= n_max {
                    out[n as usize] += basis.len() as u64;
                }
            }
        }
        out
    }
}

fn mask_degree(degrees: &[u32], mask: u32) -> u32 {
    degrees
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, d)| d)
        .sum()
}

/// Element of `E_2`: a set of basis monomials `ρ^s y^mask` (coefficients in `F_2`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectralElement {
    terms: BTreeSet<(u32, u32)>,
}

impl SpectralElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(s: u32, mask: u32) -> Self {
        SpectralElement {
            terms: [(s, mask)].into_iter().collect(),
        }
    }

    pub fn rho_power(s: u32) -> Self {
        Self::basis(s, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.terms.iter().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        SpectralElement {
            terms: self.terms.symmetric_difference(&other.terms).copied().collect(),
        }
    }

    /// Product in `E_2`; terms beyond the window are dropped.
    pub fn multiply(&self, other: &Self, alg: &BigradedAlgebra) -> Self {
        let mut out = SpectralElement::zero();
        for &(s1, m1) in &self.terms {
            for &(s2, m2) in &other.terms {
                if m1 & m2 != 0 || s1 + s2 > alg.s_max {
                    continue;
                }
                out = out.add(&Self::basis(s1 + s2, m1 | m2));
            }
        }
        out
    }

    /// Common bidegree `(s, t)` of a nonzero homogeneous element.
    pub fn bidegree(&self, alg: &BigradedAlgebra) -> Option<(u32, u32)> {
        let mut it = self.terms.iter().map(|&(s, m)| (s, alg.mask_degree(m)));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Parse an expression in `rho` and fiber generator names; coefficients are read mod 2.
    pub fn from_expr(expr: &Expr, alg: &BigradedAlgebra) -> Result<Self> {
        let mut out = SpectralElement::zero();
        for t in &expr.terms {
            if t.coefficient.rem_euclid(2) == 0 {
                continue;
            }
            let mut s = 0u32;
            let mut mask = 0u32;
            let mut vanishes = false;
            for f in &t.factors {
                if f.name == "rho" {
                    s += f.power;
                } else {
                    let i = alg
                        .generator(&f.name)
                        .ok_or_else(|| Error::UnknownGenerator(f.name.clone()))?;
                    if f.power > 1 || mask >> i & 1 == 1 {
                        vanishes = true;
                    }
                    mask |= 1 << i;
                }
            }
            if !vanishes && s <= alg.s_max {
                out = out.add(&Self::basis(s, mask));
            }
        }
        Ok(out)
    }
}

/// `d_r` on the fiber generators (`d(ρ) = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageDifferential {
    page: u32,
    images: Vec<SpectralElement>,
}

impl PageDifferential {
    pub fn zero(alg: &BigradedAlgebra, page: u32) -> Self {
        PageDifferential {
            page,
            images: vec![SpectralElement::zero(); alg.names.len()],
        }
    }

    /// Generators not mentioned map to zero. Each image must sit in bidegree
    /// `(r, |y| - r + 1)`.
    pub fn new(alg: &BigradedAlgebra, page: u32, assignment: &[(&str, SpectralElement)]) -> Result<Self> {
        if page < 2 {
            return Err(Error::Differential {
                page,
                reason: "pages start at 2".to_string(),
            });
        }
        let mut d = Self::zero(alg, page);
        for (name, image) in assignment {
            let i = alg
                .generator(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            if image.is_zero() {
                continue;
            }
            let want_t = alg.degrees[i] as i64 - page as i64 + 1;
            match image.bidegree(alg) {
                Some((s, t)) if s == page && t as i64 == want_t => {}
                other => {
                    return Err(Error::Differential {
                        page,
                        reason: format!(
                            "d({name}) has bidegree {other:?}, expected ({page}, {want_t})"
                        ),
                    })
                }
            }
            d.images[i] = image.clone();
        }
        Ok(d)
    }

    pub fn page(&self) -> u32 {
        self.page
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(SpectralElement::is_zero)
    }

    /// `d(ρ^s y^mask) = Σ_{i ∈ mask} ρ^s y^{mask - i} d(y_i)`.
    pub fn apply_basis(&self, alg: &BigradedAlgebra, s: u32, mask: u32) -> SpectralElement {
        let mut out = SpectralElement::zero();
        for (i, img) in self.images.iter().enumerate() {
            if mask >> i & 1 == 0 || img.is_zero() {
                continue;
            }
            let rest = SpectralElement::basis(s, mask & !(1 << i));
            out = out.add(&rest.multiply(img, alg));
        }
        out
    }

    pub fn apply(&self, alg: &BigradedAlgebra, x: &SpectralElement) -> SpectralElement {
        x.terms()
            .fold(SpectralElement::zero(), |acc, (s, m)| acc.add(&self.apply_basis(alg, s, m)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Cell {
    cycles: Subspace,
    boundaries: Subspace,
    trusted: bool,
}

impl Cell {
    fn dim(&self) -> u64 {
        (self.cycles.dim() - self.boundaries.dim()) as u64
    }
}

/// One page `E_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    algebra: Arc<BigradedAlgebra>,
    r: u32,
    cells: BTreeMap<(u32, u32), Cell>,
}

impl Page {
    pub fn e2(algebra: Arc<BigradedAlgebra>) -> Self {
        let mut cells = BTreeMap::new();
        for (&t, basis) in &algebra.by_degree {
            for s in 0..=algebra.s_max {
                cells.insert(
                    (s, t),
                    Cell {
                        cycles: Subspace::full(2, basis.len()),
                        boundaries: Subspace::zero(2, basis.len()),
                        trusted: true,
                    },
                );
            }
        }
        Page { algebra, r: 2, cells }
    }

    pub fn algebra(&self) -> &Arc<BigradedAlgebra> {
        &self.algebra
    }

    pub fn page(&self) -> u32 {
        self.r
    }

    pub fn dim(&self, s: u32, t: u32) -> u64 {
        self.cells.get(&(s, t)).map_or(0, Cell::dim)
    }

    /// Whether the value at `(s, t)` is unaffected by the window cut.
    pub fn is_trusted(&self, s: u32, t: u32) -> bool {
        match self.cells.get(&(s, t)) {
            Some(c) => c.trusted,
            None => s <= self.algebra.s_max,
        }
    }

    /// Nonzero bidegrees with their dimensions.
    pub fn nonzero_cells(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.cells
            .iter()
            .map(|(&k, c)| (k, c.dim()))
            .filter(|(_, d)| *d > 0)
    }

    pub fn total_dims(&self, n_max: u32) -> Vec<u64> {
        let mut out = vec![0u64; n_max as usize + 1];
        for (&(s, t), c) in &self.cells {
            if s + t <= n_max {
                out[(s + t) as usize] += c.dim();
            }
        }
        out
    }

    /// `Σ (-1)^(s+t) dim E_r^{s,t}` over the window.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|(&(s, t), c)| if (s + t) % 2 == 0 { c.dim() as i64 } else { -(c.dim() as i64) })
            .sum()
    }

    /// Whether `ρ^s y^mask` represents a nonzero class on this page.
    pub fn survives(&self, s: u32, mask: u32) -> bool {
        let t = self.algebra.mask_degree(mask);
        let Some(c) = self.cells.get(&(s, t)) else {
            return false;
        };
        let v = self.algebra.vector(t, &SpectralElement::basis(s, mask));
        c.cycles.contains(&v) && !c.boundaries.contains(&v)
    }

    /// Apply `d_r` and pass to homology.
    pub fn turn(&self, d: &PageDifferential) -> Result<Page> {
        let r = self.r;
        if d.page != r {
            return Err(Error::Differential {
                page: d.page,
                reason: format!("page mismatch: current page is {r}"),
            });
        }
        let alg = &*self.algebra;
        let mut next = self.cells.clone();
        for (&(s, t), cell) in &self.cells {
            let tt = t as i64 - r as i64 + 1;
            if s + r > alg.s_max || !alg.has_fiber(tt) {
                continue;
            }
            let tt = tt as u32;
            let target = &self.cells[&(s + r, tt)];
            let image = |v: &[u32]| {
                let x = alg.element(s, t, v);
                d.apply(alg, &x)
            };
            for b in cell.boundaries.basis() {
                let db = alg.vector(tt, &image(b));
                if !target.boundaries.contains(&db) {
                    return Err(Error::Differential {
                        page: r,
                        reason: format!("not well defined on boundaries at ({s}, {t})"),
                    });
                }
            }
            let mut reduced = FpMatrix::new(2, target.cycles.ambient_dim());
            let mut images = Vec::new();
            for z in cell.cycles.basis() {
                let dz = image(z);
                let v = alg.vector(tt, &dz);
                if !target.cycles.contains(&v) {
                    return Err(Error::Differential {
                        page: r,
                        reason: format!("image of a cycle at ({s}, {t}) is not a cycle"),
                    });
                }
                let t2 = tt as i64 - r as i64 + 1;
                if s + 2 * r <= alg.s_max && alg.has_fiber(t2) {
                    let ddz = d.apply(alg, &dz);
                    let w = alg.vector(t2 as u32, &ddz);
                    if !self.cells[&(s + 2 * r, t2 as u32)].boundaries.contains(&w) {
                        return Err(Error::SquareNonzero { page: r, s, t });
                    }
                }
                reduced.push_row(target.boundaries.reduce(&v));
                images.push(v);
            }
            let kernel: Vec<Vec<u32>> = reduced
                .left_kernel()
                .into_iter()
                .map(|a| {
                    let mut z = vec![0u32; cell.cycles.ambient_dim()];
                    for (coef, row) in a.iter().zip(cell.cycles.basis()) {
                        if coef % 2 == 1 {
                            for (x, y) in z.iter_mut().zip(row) {
                                *x ^= y;
                            }
                        }
                    }
                    z
                })
                .collect();
            let n = cell.cycles.ambient_dim();
            next.get_mut(&(s, t)).expect("cell exists").cycles = Subspace::spanned_by(2, n, kernel);
            let tgt = next.get_mut(&(s + r, tt)).expect("cell exists");
            tgt.boundaries = tgt
                .boundaries
                .sum(&Subspace::spanned_by(2, tgt.cycles.ambient_dim(), images));
        }
        for (&(s, t), cell) in &self.cells {
            let nonzero = cell.dim() > 0;
            let tt = t as i64 - r as i64 + 1;
            let out_ok = !alg.has_fiber(tt)
                || !nonzero
                || (s + r <= alg.s_max && self.cells[&(s + r, tt as u32)].trusted);
            let st = t as i64 + r as i64 - 1;
            let in_ok = s < r || !alg.has_fiber(st) || !nonzero || self.cells[&(s - r, st as u32)].trusted;
            next.get_mut(&(s, t)).expect("cell exists").trusted = cell.trusted && out_ok && in_ok;
        }
        Ok(Page {
            algebra: Arc::clone(&self.algebra),
            r: r + 1,
            cells: next,
        })
    }

    fn possibly_nonzero(&self, s: i64, t: i64) -> bool {
        if !self.algebra.has_fiber(t) || s < 0 {
            return false;
        }
        let (s, t) = (s as u32, t as u32);
        match self.cells.get(&(s, t)) {
            Some(c) => !c.trusted || c.dim() > 0,
            None => true,
        }
    }

    /// Largest `n` such that every total degree `≤ n` is computed exactly and
    /// no differential `d_r`, `r ≥` this page, can touch it.
    pub fn stable_through(&self) -> Option<u32> {
        let alg = &*self.algebra;
        let top = alg.top_fiber_degree();
        let mut through = None;
        for n in 0..=alg.s_max + top + 1 {
            for t in alg.fiber_degrees().filter(|&t| t <= n) {
                let s = n - t;
                if s > alg.s_max || !self.cells[&(s, t)].trusted {
                    return through;
                }
                let (si, ti) = (s as i64, t as i64);
                for r in self.r..=top + 1 {
                    let ri = r as i64;
                    let here = self.possibly_nonzero(si, ti);
                    if here
                        && (self.possibly_nonzero(si + ri, ti - ri + 1)
                            || self.possibly_nonzero(si - ri, ti + ri - 1))
                    {
                        return through;
                    }
                }
            }
            through = Some(n);
        }
        through
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// All later differentials vanish on total degrees `≤ through_total_degree`.
    Certified { through_total_degree: u32 },
    /// The window is too small to rule out later differentials where it matters.
    Inconclusive { through_total_degree: Option<u32> },
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certificate::Certified { .. })
    }

    pub fn through(&self) -> Option<u32> {
        match self {
            Certificate::Certified { through_total_degree } => Some(*through_total_degree),
            Certificate::Inconclusive { through_total_degree } => *through_total_degree,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StableResult {
    /// `E_2` up to the final page, in order.
    pub pages: Vec<Page>,
    pub certificate: Certificate,
}

impl StableResult {
    pub fn final_page(&self) -> &Page {
        self.pages.last().expect("at least E_2")
    }
}

/// Apply the given differentials page by page (missing pages are zero) and
/// certify stability. The certificate is granted when it covers every total
/// degree `n ≤ S - T - 1` (`T` the top fiber degree): the region where no
/// differential can leave the window.
pub fn run_to_stable(e2: Page, differentials: &[PageDifferential]) -> Result<StableResult> {
    let last = differentials.iter().map(|d| d.page).max().unwrap_or(1);
    let mut pages = vec![e2];
    for r in 2..=last {
        let current = pages.last().expect("nonempty");
        let hits: Vec<&PageDifferential> = differentials.iter().filter(|d| d.page == r).collect();
        let zero = PageDifferential::zero(&current.algebra, r);
        let d = match hits.as_slice() {
            [] => &zero,
            [one] => *one,
            _ => {
                return Err(Error::Differential {
                    page: r,
                    reason: "given more than once".to_string(),
                })
            }
        };
        let next = current.turn(d)?;
        pages.push(next);
    }
    let fin = pages.last().expect("nonempty");
    let alg = &fin.algebra;
    let through = fin.stable_through();
    let needed = alg.s_max.saturating_sub(alg.top_fiber_degree() + 1);
    let certificate = match through {
        Some(n) if n >= needed => Certificate::Certified {
            through_total_degree: n,
        },
        other => Certificate::Inconclusive {
            through_total_degree: other,
        },
    };
    Ok(StableResult { pages, certificate })
}

/// Exterior fiber generators `(name, degree)` of the gr-level form of a
/// presentation at p = 2: a generator `y` of height `2^k` contributes
/// `y, y^2, …, y^(2^(k-1))`.
pub fn fiber_of(presentation: &AlgebraPresentation) -> Result<Vec<(String, u32)>> {
    if presentation.prime().get() != 2 {
        return Err(Error::Invalid(format!(
            "spectral sequences are over F_2, got p={}",
            presentation.prime()
        )));
    }
    let mut out = Vec::new();
    for g in presentation.generators() {
        if !g.height().is_power_of_two() {
            return Err(Error::BadHeight {
                name: g.name().to_string(),
                height: g.height(),
            });
        }
        let mut k = 1;
        while k < g.height() {
            let name = if k == 1 {
                g.name().to_string()
            } else {
                format!("{}^{k}", g.name())
            };
            out.push((name, g.degree() * k));
            k *= 2;
        }
    }
    Ok(out)
}

/// Group catalog differential lines into page differentials. Generator names
/// may be aliases; they are matched through the presentation.
pub fn differentials_from_specs(
    alg: &BigradedAlgebra,
    presentation: &AlgebraPresentation,
    specs: &[DifferentialSpec],
) -> Result<Vec<PageDifferential>> {
    let mut by_page: BTreeMap<u32, Vec<(String, SpectralElement)>> = BTreeMap::new();
    for spec in specs {
        let g = presentation.generator(&spec.generator)?;
        let mut image = spec.image.clone();
        for t in image.terms.iter_mut() {
            for f in t.factors.iter_mut() {
                if f.name != "rho" {
                    f.name = presentation.generator(&f.name)?.name().to_string();
                }
            }
        }
        let image = SpectralElement::from_expr(&image, alg)?;
        by_page
            .entry(spec.page)
            .or_default()
            .push((g.name().to_string(), image));
    }
    by_page
        .into_iter()
        .map(|(page, assignment)| {
            let refs: Vec<(&str, SpectralElement)> =
                assignment.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
            PageDifferential::new(alg, page, &refs)
        })
        .collect()
}

/// `(1 + t + … + t^6) · character of P(y)/(y_6)`, the predicted total dimensions
/// of the abutment over the reals.
pub fn predicted_real_character(presentation: &AlgebraPresentation) -> Result<Vec<u64>> {
    let i = presentation
        .generators()
        .iter()
        .position(|g| g.degree() == 6)
        .ok_or_else(|| Error::Invalid("no generator of degree 6".to_string()))?;
    let rest: Vec<_> = presentation
        .generators()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, g)| g.clone())
        .collect();
    let quotient = AlgebraPresentation::new(presentation.prime(), rest, presentation.mode())?;
    Ok(convolve(&[1; 7], &quotient.poincare_series()))
}
