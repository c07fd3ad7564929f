use alloc::collections::BTreeMap;
use alloc::sync::Arc;

use super::{AlgebraPresentation, CoefficientMode, Monomial};
use crate::{Error, Result};

/// A finite sum of admissible monomials with integer coefficients.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    algebra: Arc<AlgebraPresentation>,
    terms: BTreeMap<Monomial, i64>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

pub(crate) fn same_algebra(a: &Arc<AlgebraPresentation>, b: &Arc<AlgebraPresentation>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgebraElement {
    pub fn zero(algebra: &Arc<AlgebraPresentation>) -> Self {
        AlgebraElement {
            algebra: Arc::clone(algebra),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: &Arc<AlgebraPresentation>) -> Self {
        Self::monomial(algebra, algebra.one(), 1)
    }

    /// `coefficient * m`; `m` must be admissible.
    pub fn monomial(algebra: &Arc<AlgebraPresentation>, m: Monomial, coefficient: i64) -> Self {
        assert!(algebra.is_admissible(&m), "monomial is not admissible");
        let mut e = Self::zero(algebra);
        e.add_term(m, coefficient);
        e
    }

    pub fn generator(algebra: &Arc<AlgebraPresentation>, name: &str) -> Result<Self> {
        let i = algebra
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.into()))?;
        let m = algebra
            .generator_power(i, 1)
            .expect("heights are at least 2");
        Ok(Self::monomial(algebra, m, 1))
    }

    pub fn from_terms<I>(algebra: &Arc<AlgebraPresentation>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut e = Self::zero(algebra);
        for (m, c) in terms {
            assert!(algebra.is_admissible(&m), "monomial is not admissible");
            e.add_term(m, c);
        }
        e
    }

    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| self.algebra.degree_of(m));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    fn reduce(&self, c: i64) -> i64 {
        match self.algebra.mode() {
            CoefficientMode::ModP => c.rem_euclid(self.algebra.prime().get() as i64),
            CoefficientMode::PLocal => c,
        }
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        let entry = self.terms.entry(m).or_insert(0);
        *entry += c;
        let r = match self.algebra.mode() {
            CoefficientMode::ModP => entry.rem_euclid(self.algebra.prime().get() as i64),
            CoefficientMode::PLocal => *entry,
        };
        *entry = r;
        self.terms.retain(|_, c| *c != 0);
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (m, c) in &self.terms {
            let v = self.reduce(c * k);
            if v != 0 {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    /// Product in `P(y)`: monomials past a height vanish, coefficients are reduced
    /// according to the coefficient mode.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.algebra);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(m) = a.mul(b, &self.algebra) {
                    let c = ca.checked_mul(*cb).ok_or(Error::Overflow)?;
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::one(&self.algebra);
        for _ in 0..k {
            out = out.multiply(self)?;
        }
        Ok(out)
    }
}
