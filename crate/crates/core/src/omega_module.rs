//! Finitely generated `Ω*`-submodules of `Ω_m ⊗ P(y)`.
//!
//! `Ω_m = Z_(p)[v_1..v_m]` with `|v_i| = -2(p^i - 1)`. Each graded piece of
//! `Ω_m ⊗ P(y)` is a finite free abelian group because `P(y)` is finite and the
//! v-degrees are negative, so everything reduces to integer lattices in a fixed
//! degree: membership is decided by Smith invariants, and the augmentation
//! quotient `M / (v_1, .., v_m) M` is the cokernel of the v-multiples inside the
//! lattice spanned by `M`.
//!
//! All torsion is reported p-locally. Torsion prime to `p` is an error: it can
//! only come from corrupt input.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::graded_algebra::{AlgebraPresentation, Monomial, Prime};
use crate::linalg::{gcd, Echelon, IntMatrix, Smith};
use crate::{Error, Result};

/// Default number of cobordism variables `v_1..v_m` kept.
pub const DEFAULT_V_BOUND: u32 = 3;

/// A basis element `v^a ⊗ y^b` of `Ω_m ⊗ P(y)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OmegaMonomial {
    pub v: Vec<u32>,
    pub y: Monomial,
}

impl OmegaMonomial {
    pub fn has_v(&self) -> bool {
        self.v.iter().any(|&e| e > 0)
    }
}

/// Integer combination of [`OmegaMonomial`]s. Degrees are computed through an
/// [`OmegaRing`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OmegaElement {
    terms: BTreeMap<OmegaMonomial, i64>,
}

impl OmegaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (OmegaMonomial, i64)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OmegaMonomial, i64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, m: &OmegaMonomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: OmegaMonomial, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        OmegaElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }
}

/// The ambient ring `Ω_m ⊗ P(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaRing {
    algebra: Arc<AlgebraPresentation>,
    v_bound: u32,
}

impl OmegaRing {
    pub fn new(algebra: Arc<AlgebraPresentation>, v_bound: u32) -> Self {
        OmegaRing { algebra, v_bound }
    }

    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        &self.algebra
    }

    pub fn prime(&self) -> Prime {
        self.algebra.prime()
    }

    pub fn v_bound(&self) -> u32 {
        self.v_bound
    }

    pub fn with_v_bound(&self, v_bound: u32) -> Self {
        OmegaRing {
            algebra: Arc::clone(&self.algebra),
            v_bound,
        }
    }

    /// Weight `Σ e_i · 2(p^i - 1)` of a v-exponent vector (the negated degree).
    pub fn v_weight(&self, v: &[u32]) -> u32 {
        v.iter()
            .enumerate()
            .map(|(i, &e)| e * self.prime().v_weight(i as u32 + 1))
            .sum()
    }

    pub fn degree_of(&self, m: &OmegaMonomial) -> i64 {
        self.algebra.degree_of(&m.y) as i64 - self.v_weight(&m.v) as i64
    }

    /// Common degree of a nonzero homogeneous element.
    pub fn degree(&self, x: &OmegaElement) -> Option<i64> {
        let mut it = x.terms.keys().map(|m| self.degree_of(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_admissible(&self, x: &OmegaElement) -> bool {
        x.terms.keys().all(|m| {
            m.v.len() == self.v_bound as usize && self.algebra.is_admissible(&m.y)
        })
    }

    pub fn one(&self) -> OmegaElement {
        self.term(1, vec![0; self.v_bound as usize], self.algebra.one())
    }

    pub fn term(&self, coefficient: i64, v: Vec<u32>, y: Monomial) -> OmegaElement {
        assert_eq!(v.len(), self.v_bound as usize);
        OmegaElement::from_terms([(OmegaMonomial { v, y }, coefficient)])
    }

    /// Exponent vectors of `v_1..v_m` of the given weight.
    pub fn v_monomials(&self, weight: u32) -> Vec<Vec<u32>> {
        let weights: Vec<u32> = (1..=self.v_bound).map(|i| self.prime().v_weight(i)).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; weights.len()];
        fn rec(i: usize, rem: u32, w: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == w.len() {
                if rem == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let mut e = 0;
            while e * w[i] <= rem {
                cur[i] = e;
                rec(i + 1, rem - e * w[i], w, cur, out);
                e += 1;
            }
            cur[i] = 0;
        }
        rec(0, weight, &weights, &mut cur, &mut out);
        out
    }

    /// Basis of the degree-`d` piece of `Ω_m ⊗ P(y)`, sorted.
    pub fn ambient_basis(&self, d: i64) -> Vec<OmegaMonomial> {
        let mut out = Vec::new();
        let start = d.max(0) as u32;
        for e in start..=self.algebra.top_degree() {
            let ys = self.algebra.basis(e);
            if ys.is_empty() {
                continue;
            }
            let weight = (e as i64 - d) as u32;
            for v in self.v_monomials(weight) {
                for y in &ys {
                    out.push(OmegaMonomial {
                        v: v.clone(),
                        y: y.clone(),
                    });
                }
            }
        }
        out.sort();
        out
    }

    /// Multiply by the v-monomial `v^a`.
    pub fn v_multiply(&self, x: &OmegaElement, v: &[u32]) -> OmegaElement {
        OmegaElement::from_terms(x.terms.iter().map(|(m, c)| {
            let nv = m.v.iter().zip(v).map(|(a, b)| a + b).collect();
            (OmegaMonomial { v: nv, y: m.y.clone() }, *c)
        }))
    }

    /// `v_i · x` for `1 ≤ i ≤ m`.
    pub fn v_i_multiply(&self, i: u32, x: &OmegaElement) -> OmegaElement {
        let mut v = vec![0; self.v_bound as usize];
        v[i as usize - 1] = 1;
        self.v_multiply(x, &v)
    }

    pub fn multiply(&self, a: &OmegaElement, b: &OmegaElement) -> Result<OmegaElement> {
        let mut out = OmegaElement::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some(y) = ma.y.mul(&mb.y, &self.algebra) {
                    let v = ma.v.iter().zip(&mb.v).map(|(x, y)| x + y).collect();
                    out.add_term(OmegaMonomial { v, y }, ca.checked_mul(*cb).ok_or(Error::Overflow)?);
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of `x` against a sorted list of basis monomials; `None` if
    /// some term falls outside the list.
    fn coordinates(&self, x: &OmegaElement, columns: &[OmegaMonomial]) -> Option<Vec<i128>> {
        let mut v = vec![0i128; columns.len()];
        for (m, c) in &x.terms {
            let j = columns.binary_search(m).ok()?;
            v[j] = *c as i128;
        }
        Some(v)
    }
}

/// An ideal generator `c · v^a` used in invariant-ideal data such as `(2, v_1^2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGenerator {
    pub coefficient: i64,
    /// Sparse `(index, exponent)` pairs with 1-based indices.
    pub v: Vec<(u32, u32)>,
}

impl IdealGenerator {
    pub fn integer(c: i64) -> Self {
        IdealGenerator {
            coefficient: c,
            v: Vec::new(),
        }
    }

    pub fn v_power(coefficient: i64, index: u32, exponent: u32) -> Self {
        IdealGenerator {
            coefficient,
            v: vec![(index, exponent)],
        }
    }
}

/// Where a row of a [`GradedPiece`] comes from: `v^a · generator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowOrigin {
    pub generator: usize,
    pub v: Vec<u32>,
}

impl RowOrigin {
    pub fn is_v_multiple(&self) -> bool {
        self.v.iter().any(|&e| e > 0)
    }
}

/// The Ω-multiples of the generators that land in one degree, written in the
/// ambient basis of that degree.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: i64,
    pub columns: Vec<OmegaMonomial>,
    pub rows: IntMatrix,
    pub origins: Vec<RowOrigin>,
}

/// Smith-form presentation of one degree of the augmentation quotient.
#[derive(Clone, Debug)]
pub struct QuotientPiece {
    pub degree: i64,
    pub columns: Vec<OmegaMonomial>,
    /// Z-basis of the lattice spanned by the module in this degree.
    pub lattice: Echelon,
    /// Smith data of the v-multiples written in lattice coordinates.
    pub smith: Smith,
    pub free_rank: u32,
    pub torsion: Vec<u64>,
    /// Invariant factors equal to 1 (v-multiples that kill a lattice direction outright).
    pub unit_invariants: usize,
}

impl QuotientPiece {
    pub fn lattice_rank(&self) -> usize {
        self.lattice.rank()
    }
}

/// Coordinates of an element's image in a [`QuotientPiece`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientClass {
    pub degree: i64,
    /// `(value, order)` for each cyclic torsion summand, value in `0..order`.
    pub torsion: Vec<(i128, i128)>,
    /// Numerators of the free coordinates; the common denominator is prime to `p`.
    pub free: Vec<i128>,
    pub denominator: i128,
}

fn inverse_mod(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

impl QuotientClass {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().all(|(v, _)| *v == 0) && self.free.iter().all(|&f| f == 0)
    }

    /// Vanishing of the image in `quotient ⊗ F_p`.
    pub fn is_zero_mod(&self, p: Prime) -> bool {
        let p = p.get() as i128;
        self.torsion.iter().all(|(v, _)| v % p == 0) && self.free.iter().all(|f| f % p == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = k as i128;
        QuotientClass {
            degree: self.degree,
            torsion: self
                .torsion
                .iter()
                .map(|&(v, o)| ((v * k).rem_euclid(o), o))
                .collect(),
            free: self.free.iter().map(|f| f * k).collect(),
            denominator: self.denominator,
        }
    }

    /// Difference of two classes in the same degree of the same quotient.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        assert_eq!(self.torsion.len(), other.torsion.len());
        let den = self.denominator * other.denominator;
        QuotientClass {
            degree: self.degree,
            torsion: self
                .torsion
                .iter()
                .zip(&other.torsion)
                .map(|(&(a, o), &(b, _))| ((a - b).rem_euclid(o), o))
                .collect(),
            free: self
                .free
                .iter()
                .zip(&other.free)
                .map(|(a, b)| a * other.denominator - b * self.denominator)
                .collect(),
            denominator: den,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        let g = self.free.iter().fold(self.denominator, |g, &f| gcd(g, f));
        if g > 1 {
            for f in self.free.iter_mut() {
                *f /= g;
            }
            self.denominator /= g;
        }
        self
    }
}

/// One degree of a [`GradedAbelianGroup`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupPiece {
    pub free_rank: u32,
    /// Orders of the cyclic torsion summands, sorted, each a power of `p`.
    pub torsion: Vec<u64>,
}

impl GroupPiece {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Dimension after tensoring with `F_p`.
    pub fn p_rank(&self) -> u32 {
        self.free_rank + self.torsion.len() as u32
    }
}

/// A finitely generated graded abelian group, p-locally: per degree a free rank
/// and p-power torsion. Only nonzero degrees are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAbelianGroup {
    prime: Prime,
    pieces: BTreeMap<i64, GroupPiece>,
}

impl GradedAbelianGroup {
    pub fn new(prime: Prime) -> Self {
        GradedAbelianGroup {
            prime,
            pieces: BTreeMap::new(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Add summands in degree `d`. Torsion orders must be powers of `p` greater than 1.
    pub fn add(&mut self, d: i64, free_rank: u32, torsion: &[u64]) -> Result<()> {
        for &t in torsion {
            if t <= 1 || !self.prime.is_power(t as i128) {
                return Err(Error::PrimeToPTorsion {
                    degree: d,
                    invariant: t as i128,
                    prime: self.prime.get(),
                });
            }
        }
        if free_rank == 0 && torsion.is_empty() {
            return Ok(());
        }
        let piece = self.pieces.entry(d).or_default();
        piece.free_rank += free_rank;
        piece.torsion.extend_from_slice(torsion);
        piece.torsion.sort_unstable();
        Ok(())
    }

    pub fn piece(&self, d: i64) -> GroupPiece {
        self.pieces.get(&d).cloned().unwrap_or_default()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (i64, &GroupPiece)> {
        self.pieces.iter().map(|(d, p)| (*d, p))
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn p_rank(&self, d: i64) -> u32 {
        self.piece(d).p_rank()
    }

    pub fn total_p_rank(&self) -> u32 {
        self.pieces.values().map(GroupPiece::p_rank).sum()
    }

    pub fn top_degree(&self) -> Option<i64> {
        self.pieces.keys().next_back().copied()
    }

    /// `self ⊗ Λ(x_1..x_k)` with `|x_i|` = `degrees[i]` and `x_i^p = 0`.
    pub fn tensor_lambda(&self, degrees: &[u32]) -> Self {
        let shifts = crate::graded_algebra::lambda_character(self.prime.get(), degrees);
        let mut out = GradedAbelianGroup::new(self.prime);
        for (shift, &mult) in shifts.iter().enumerate() {
            for _ in 0..mult {
                for (d, piece) in &self.pieces {
                    out.add(d + shift as i64, piece.free_rank, &piece.torsion)
                        .expect("torsion already validated");
                }
            }
        }
        out
    }
}

/// A submodule of `Ω_m ⊗ P(y)` generated over `Ω_m` by homogeneous elements.
/// The unit `1` is always the first generator.
#[derive(Clone, Debug)]
pub struct OmegaSubmodule {
    ring: OmegaRing,
    generators: Vec<OmegaElement>,
    complete: bool,
}

impl OmegaSubmodule {
    /// `Ω*·1` together with the given generators.
    pub fn new(ring: OmegaRing, generators: Vec<OmegaElement>) -> Result<Self> {
        let mut m = OmegaSubmodule {
            generators: vec![ring.one()],
            ring,
            complete: true,
        };
        for g in generators {
            m.push_generator(g)?;
        }
        Ok(m)
    }

    /// The module generated by `1` and `ideal_gen · monomial` for every pair.
    pub fn from_ideal_data(ring: OmegaRing, pairs: &[(Vec<IdealGenerator>, Monomial)]) -> Result<Self> {
        let mut generators = Vec::new();
        for (ideal, mono) in pairs {
            if !ring.algebra().is_admissible(mono) {
                return Err(Error::Invalid("monomial is not admissible".to_string()));
            }
            for g in ideal {
                let mut v = vec![0u32; ring.v_bound() as usize];
                for &(i, e) in &g.v {
                    if i == 0 || i > ring.v_bound() {
                        return Err(Error::VIndexOutOfRange {
                            index: i,
                            bound: ring.v_bound(),
                        });
                    }
                    v[i as usize - 1] += e;
                }
                generators.push(ring.term(g.coefficient, v, mono.clone()));
            }
        }
        Self::new(ring, generators)
    }

    fn push_generator(&mut self, g: OmegaElement) -> Result<()> {
        if g.is_zero() {
            return Ok(());
        }
        if !self.ring.is_admissible(&g) {
            return Err(Error::ShapeMismatch {
                expected: self.ring.v_bound() as usize,
                found: g.terms.keys().next().map_or(0, |m| m.v.len()),
            });
        }
        let d = self.ring.degree(&g).ok_or(Error::NotHomogeneous)?;
        if d < 0 {
            return Err(Error::NegativeDegree(d));
        }
        if g == self.ring.one() {
            return Ok(());
        }
        self.generators.push(g);
        Ok(())
    }

    pub fn with_generator(&self, g: OmegaElement) -> Result<Self> {
        let mut m = self.clone();
        m.push_generator(g)?;
        Ok(m)
    }

    /// Mark the module as known only partially: membership queries still work,
    /// quotient computations are refused.
    pub fn into_incomplete(mut self) -> Self {
        self.complete = false;
        self
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn ring(&self) -> &OmegaRing {
        &self.ring
    }

    pub fn generators(&self) -> &[OmegaElement] {
        &self.generators
    }

    pub fn generator_degrees(&self) -> Vec<i64> {
        self.generators
            .iter()
            .map(|g| self.ring.degree(g).expect("generators are homogeneous"))
            .collect()
    }

    /// Default degree cap: the top degree of `P(y)`.
    pub fn default_cap(&self) -> i64 {
        self.ring.algebra().top_degree() as i64
    }

    pub fn graded_piece(&self, d: i64) -> GradedPiece {
        let columns = self.ring.ambient_basis(d);
        let mut rows = IntMatrix::new(columns.len());
        let mut origins = Vec::new();
        for (gi, (g, gd)) in self.generators.iter().zip(self.generator_degrees()).enumerate() {
            if gd < d {
                continue;
            }
            for v in self.ring.v_monomials((gd - d) as u32) {
                let x = self.ring.v_multiply(g, &v);
                let row = self
                    .ring
                    .coordinates(&x, &columns)
                    .expect("v-multiples of admissible generators stay in the ambient basis");
                rows.push_row(row);
                origins.push(RowOrigin { generator: gi, v });
            }
        }
        GradedPiece {
            degree: d,
            columns,
            rows,
            origins,
        }
    }

    /// p-local membership: `c·x` is an integer combination of the degree piece
    /// for some `c` prime to `p`. Decided by comparing the Smith invariants of
    /// the piece with and without `x` appended.
    pub fn contains(&self, x: &OmegaElement) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        if !self.ring.is_admissible(x) {
            return Ok(false);
        }
        let d = self.ring.degree(x).ok_or(Error::NotHomogeneous)?;
        let piece = self.graded_piece(d);
        let Some(xv) = self.ring.coordinates(x, &piece.columns) else {
            return Ok(false);
        };
        let p = self.ring.prime();
        let before = piece.rows.smith()?.invariants;
        let mut augmented = piece.rows.clone();
        augmented.push_row(xv);
        let after = augmented.smith()?.invariants;
        if before.len() != after.len() {
            return Ok(false);
        }
        let val = |inv: &[i128]| inv.iter().map(|&d| p.valuation(d)).sum::<u32>();
        Ok(val(&before) == val(&after))
    }

    /// Close the generator set under pairwise products up to degree `cap`, then
    /// drop generators already generated by the others.
    pub fn saturate_products(&self, cap: i64) -> Result<Self> {
        let mut m = self.clone();
        loop {
            let mut added = false;
            let n = m.generators.len();
            for i in 1..n {
                for j in i..n {
                    let prod = m.ring.multiply(&m.generators[i], &m.generators[j])?;
                    if prod.is_zero() {
                        continue;
                    }
                    let d = m.ring.degree(&prod).ok_or(Error::NotHomogeneous)?;
                    if d < 0 || d > cap {
                        continue;
                    }
                    if !m.contains(&prod)? {
                        m.generators.push(prod);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        let mut i = 1;
        while i < m.generators.len() {
            let mut others = m.clone();
            let g = others.generators.remove(i);
            if others.contains(&g)? {
                m = others;
            } else {
                i += 1;
            }
        }
        Ok(m)
    }

    fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::Incomplete(
                "restriction data is marked incomplete".to_string(),
            ))
        }
    }

    /// Degree `d` of `M ⊗_Ω Z_(p)`, with its Smith presentation.
    pub fn quotient_in_degree(&self, d: i64) -> Result<QuotientPiece> {
        self.require_complete()?;
        let piece = self.graded_piece(d);
        let lattice = piece.rows.hermite()?;
        let r = lattice.rank();
        let mut killed = IntMatrix::new(r);
        for (row, origin) in piece.rows.rows().iter().zip(&piece.origins) {
            if !origin.is_v_multiple() {
                continue;
            }
            let (z, c) = lattice
                .solve(row)?
                .expect("rows lie in the lattice they span");
            debug_assert_eq!(c, 1);
            killed.push_row(z);
        }
        let smith = killed.smith()?;
        let p = self.ring.prime();
        let mut torsion = Vec::new();
        let mut unit_invariants = 0;
        for &inv in &smith.invariants {
            if inv == 1 {
                unit_invariants += 1;
            } else if p.is_power(inv) {
                torsion.push(u64::try_from(inv).map_err(|_| Error::Overflow)?);
            } else {
                return Err(Error::PrimeToPTorsion {
                    degree: d,
                    invariant: inv,
                    prime: p.get(),
                });
            }
        }
        Ok(QuotientPiece {
            degree: d,
            columns: piece.columns,
            free_rank: (r - smith.invariants.len()) as u32,
            lattice,
            smith,
            torsion,
            unit_invariants,
        })
    }

    /// `M / (v_1..v_m)M` in degrees `0..=cap`. Refused for incomplete modules.
    pub fn augmentation_quotient(&self, cap: i64) -> Result<GradedAbelianGroup> {
        self.require_complete()?;
        let mut g = GradedAbelianGroup::new(self.ring.prime());
        for d in 0..=cap {
            let q = self.quotient_in_degree(d)?;
            g.add(d, q.free_rank, &q.torsion)?;
        }
        Ok(g)
    }

    /// Image of `x ∈ M` in the augmentation quotient, in the coordinates of
    /// [`QuotientPiece`]. Fails with [`Error::NotContained`] when `x ∉ M`.
    pub fn class_of(&self, x: &OmegaElement) -> Result<QuotientClass> {
        self.require_complete()?;
        if x.is_zero() {
            return Err(Error::Invalid(
                "the zero element has no degree; its class is zero in every degree".to_string(),
            ));
        }
        let d = self.ring.degree(x).ok_or(Error::NotHomogeneous)?;
        let q = self.quotient_in_degree(d)?;
        self.class_in(&q, x)
    }

    /// Like [`class_of`](Self::class_of) against a precomputed quotient piece.
    pub fn class_in(&self, q: &QuotientPiece, x: &OmegaElement) -> Result<QuotientClass> {
        let p = self.ring.prime();
        let xv = self
            .ring
            .coordinates(x, &q.columns)
            .ok_or(Error::NotContained)?;
        let (z, c) = q.lattice.solve(&xv)?.ok_or(Error::NotContained)?;
        if c % p.get() as i128 == 0 {
            return Err(Error::NotContained);
        }
        let r = q.lattice.rank();
        let w: Vec<i128> = (0..r)
            .map(|j| (0..r).map(|k| z[k] * q.smith.col_transform[k][j]).sum())
            .collect();
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (j, &wj) in w.iter().enumerate() {
            match q.smith.invariants.get(j) {
                Some(1) => {}
                Some(&order) => {
                    let cinv = inverse_mod(c, order).expect("denominator is prime to p");
                    torsion.push(((wj * cinv).rem_euclid(order), order));
                }
                None => free.push(wj),
            }
        }
        Ok(QuotientClass {
            degree: q.degree,
            torsion,
            free,
            denominator: c,
        }
        .normalized())
    }
}

/// Human-readable rendering of an Ω-element using generator names.
pub fn render(ring: &OmegaRing, x: &OmegaElement) -> String {
    use core::fmt::Write;
    if x.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (m, c)) in x.terms().enumerate() {
        let mut factors: Vec<String> = Vec::new();
        for (i, &e) in m.v.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(alloc::format!("v{}", i + 1)),
                _ => factors.push(alloc::format!("v{}^{}", i + 1, e)),
            }
        }
        for (g, &e) in ring.algebra().generators().iter().zip(m.y.exponents()) {
            match e {
                0 => {}
                1 => factors.push(g.name().to_string()),
                _ => factors.push(alloc::format!("{}^{}", g.name(), e)),
            }
        }
        let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
        let _ = write!(s, "{sign}");
        let a = c.abs();
        if factors.is_empty() {
            let _ = write!(s, "{a}");
        } else {
            if a != 1 {
                let _ = write!(s, "{a}*");
            }
            s.push_str(&factors.join("*"));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::{spin_presentation, CoefficientMode, GeneratorSpec};

    fn spin7() -> OmegaSubmodule {
        let ring = OmegaRing::new(spin_presentation(3), DEFAULT_V_BOUND);
        let y1 = ring.algebra().generator_power(0, 1).unwrap();
        OmegaSubmodule::from_ideal_data(
            ring,
            &[(vec![IdealGenerator::integer(2), IdealGenerator::v_power(1, 1, 1)], y1)],
        )
        .unwrap()
    }

    fn spin11() -> OmegaSubmodule {
        let ring = OmegaRing::new(spin_presentation(5), DEFAULT_V_BOUND);
        let a = ring.algebra().clone();
        let y6 = a.generator_power(0, 1).unwrap();
        let y10 = a.generator_power(1, 1).unwrap();
        let y6y10 = y6.mul(&y10, &a).unwrap();
        let two_v = |k| vec![IdealGenerator::integer(2), IdealGenerator::v_power(1, 1, k)];
        OmegaSubmodule::from_ideal_data(ring, &[(two_v(1), y10), (two_v(2), y6y10), (two_v(1), y6)])
            .unwrap()
    }

    fn elem(m: &OmegaSubmodule, c: i64, v1: u32, y: &[u32]) -> OmegaElement {
        let mut v = vec![0; m.ring().v_bound() as usize];
        v[0] = v1;
        m.ring().term(c, v, Monomial::from_exponents(y.to_vec()))
    }

    #[test]
    fn ideal_data_generators() {
        let m = spin7();
        assert_eq!(m.generators().len(), 3);
        assert_eq!(spin11().generators().len(), 7);
        let ring = OmegaRing::new(spin_presentation(3), 1);
        let y1 = ring.algebra().generator_power(0, 1).unwrap();
        let err = OmegaSubmodule::from_ideal_data(ring, &[(vec![IdealGenerator::v_power(1, 2, 1)], y1)]);
        assert_eq!(err.unwrap_err(), Error::VIndexOutOfRange { index: 2, bound: 1 });
    }

    #[test]
    fn graded_piece_examples() {
        let m = spin7();
        let p4 = m.graded_piece(4);
        assert_eq!(p4.columns.len(), 1);
        assert_eq!(p4.rows.rows(), &[vec![2], vec![1]]);
        let p6 = m.graded_piece(6);
        assert_eq!(p6.columns.len(), 1);
        assert_eq!(p6.rows.rows(), &[vec![2]]);
        let p0 = m.graded_piece(0);
        assert!(p0.origins.iter().any(|o| o.generator == 0 && !o.is_v_multiple()));
    }

    #[test]
    fn membership_examples() {
        let m = spin7();
        assert!(m.contains(&elem(&m, 1, 1, &[1])).unwrap());
        assert!(!m.contains(&elem(&m, 1, 0, &[1])).unwrap());
        assert!(m.contains(&elem(&m, 4, 0, &[1])).unwrap());
        // 3y is not in (2y) even p-locally... but 6y is
        assert!(!m.contains(&elem(&m, 3, 0, &[1])).unwrap());
        assert!(m.contains(&elem(&m, 6, 0, &[1])).unwrap());
    }

    #[test]
    fn p_local_membership_allows_units() {
        let ring = OmegaRing::new(spin_presentation(3), 1);
        let m = OmegaSubmodule::new(ring.clone(), vec![ring.term(3, vec![0], Monomial::from_exponents(vec![1]))])
            .unwrap();
        // 3 is a unit at p = 2, so y ∈ M_(2)
        assert!(m.contains(&ring.term(1, vec![0], Monomial::from_exponents(vec![1]))).unwrap());
    }

    #[test]
    fn spin7_quotient() {
        let m = spin7().saturate_products(6).unwrap();
        let q = m.augmentation_quotient(6).unwrap();
        let pieces: Vec<_> = q.pieces().map(|(d, p)| (d, p.free_rank, p.torsion.clone())).collect();
        assert_eq!(pieces, vec![(0, 1, vec![]), (4, 0, vec![2]), (6, 1, vec![])]);
    }

    #[test]
    fn spin11_quotient() {
        let m = spin11();
        assert_eq!(m.saturate_products(16).unwrap().generators(), m.generators());
        let q = m.augmentation_quotient(16).unwrap();
        let pieces: Vec<_> = q.pieces().map(|(d, p)| (d, p.free_rank, p.torsion.clone())).collect();
        assert_eq!(
            pieces,
            vec![
                (0, 1, vec![]),
                (4, 0, vec![2]),
                (6, 1, vec![]),
                (8, 0, vec![2]),
                (10, 1, vec![]),
                (12, 0, vec![2]),
                (16, 1, vec![]),
            ]
        );
    }

    #[test]
    fn trivial_module_quotient() {
        for m in 1..=3 {
            let ring = OmegaRing::new(spin_presentation(5), m);
            let t = OmegaSubmodule::new(ring, vec![]).unwrap();
            let q = t.augmentation_quotient(16).unwrap();
            let pieces: Vec<_> = q.pieces().map(|(d, p)| (d, p.clone())).collect();
            assert_eq!(pieces, vec![(0, GroupPiece { free_rank: 1, torsion: vec![] })]);
        }
    }

    #[test]
    fn prime_to_p_torsion_is_an_error() {
        // (3, v1) y at p = 2: v1 * 3y = 3 (v1 y) leaves Z/3 in degree 4
        let ring = OmegaRing::new(spin_presentation(3), 1);
        let y = Monomial::from_exponents(vec![1]);
        let m = OmegaSubmodule::from_ideal_data(
            ring,
            &[(vec![IdealGenerator::integer(3), IdealGenerator::v_power(1, 1, 1)], y)],
        )
        .unwrap();
        assert!(matches!(
            m.augmentation_quotient(6),
            Err(Error::PrimeToPTorsion { degree: 4, invariant: 3, prime: 2 })
        ));
    }

    #[test]
    fn incomplete_refuses_quotient_but_allows_membership() {
        let m = spin7().into_incomplete();
        assert!(matches!(m.augmentation_quotient(6), Err(Error::Incomplete(_))));
        assert!(m.contains(&elem(&m, 2, 0, &[1])).unwrap());
    }

    #[test]
    fn class_of_examples() {
        let m = spin7();
        let c2 = m.class_of(&elem(&m, 1, 1, &[1])).unwrap();
        assert_eq!(c2.torsion, vec![(1, 2)]);
        assert!(m.class_of(&elem(&m, 2, 1, &[1])).unwrap().is_zero());
        let unit = m.class_of(&m.ring().one()).unwrap();
        assert_eq!(unit.free, vec![1]);
        assert_eq!(m.class_of(&elem(&m, 1, 0, &[1])), Err(Error::NotContained));
        let v1c3 = m.ring().v_i_multiply(1, &elem(&m, 2, 0, &[1]));
        assert!(m.class_of(&v1c3).unwrap().is_zero());
    }

    #[test]
    fn e8_p5_quotient() {
        let p = Prime::new(5).unwrap();
        let a = Arc::new(
            AlgebraPresentation::new(p, vec![GeneratorSpec::new("y", 12, 5).unwrap()], CoefficientMode::PLocal)
                .unwrap(),
        );
        let ring = OmegaRing::new(a.clone(), DEFAULT_V_BOUND);
        let pairs: Vec<_> = (1..5)
            .map(|i| {
                (
                    vec![IdealGenerator::integer(5), IdealGenerator::v_power(1, 1, 1)],
                    a.generator_power(0, i).unwrap(),
                )
            })
            .collect();
        let m = OmegaSubmodule::from_ideal_data(ring, &pairs).unwrap();
        let m = m.saturate_products(48).unwrap();
        assert_eq!(m.generators().len(), 9);
        let q = m.augmentation_quotient(48).unwrap();
        for d in 0..=48 {
            let piece = q.piece(d);
            let free = u32::from(d % 12 == 0);
            let tors: Vec<u64> = if d % 12 == 4 { vec![5] } else { vec![] };
            assert_eq!(piece, GroupPiece { free_rank: free, torsion: tors }, "degree {d}");
        }
    }

    #[test]
    fn render_names() {
        let m = spin11();
        let x = elem(&m, 2, 1, &[1, 1]).add(&elem(&m, -1, 0, &[0, 1]));
        assert_eq!(render(m.ring(), &x), "-y10+2*v1*y6*y10");
    }
}
