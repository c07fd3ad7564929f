use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// One of the primes the library handles: 2, 3 or 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        match p {
            2 | 3 | 5 => Ok(Prime(p)),
            _ => Err(Error::UnsupportedPrime(p)),
        }
    }

    pub const fn get(self) -> u32 {
        self.0
    }

    /// Topological degree of `v_i`, i.e. `-2(p^i - 1)`, as a positive weight.
    pub fn v_weight(self, i: u32) -> u32 {
        2 * (self.0.pow(i) - 1)
    }

    /// p-adic valuation of a nonzero integer.
    pub fn valuation(self, mut n: i128) -> u32 {
        debug_assert!(n != 0);
        let p = self.0 as i128;
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        k
    }

    pub fn is_power(self, n: i128) -> bool {
        if n <= 0 {
            return false;
        }
        let p = self.0 as i128;
        let mut n = n;
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientMode {
    ModP,
    PLocal,
}

/// A generator `y` of `P(y)`: topological degree (twice the Chow degree) and
/// nilpotency height (`y^height = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    name: String,
    degree: u32,
    height: u32,
    aliases: Vec<String>,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: u32, height: u32) -> Result<Self> {
        let name = name.into();
        if degree == 0 || !degree.is_multiple_of(2) {
            return Err(Error::BadDegree { name, degree });
        }
        if height < 2 {
            return Err(Error::BadHeight { name, height });
        }
        Ok(GeneratorSpec {
            name,
            degree,
            height,
            aliases: Vec::new(),
        })
    }

    pub fn with_aliases<I, S>(mut self, aliases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.aliases.extend(aliases.into_iter().map(Into::into));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn chow_degree(&self) -> u32 {
        self.degree / 2
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn aliases(&self) -> &[String] {
        &self.aliases
    }

    pub fn answers_to(&self, name: &str) -> bool {
        self.name == name || self.aliases.iter().any(|a| a == name)
    }
}

/// Exponent vector over the generators of a presentation, always in admissible
/// form (`exponent_i < height_i`). The derived order is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(generators: usize) -> Self {
        Monomial(vec![0; generators])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Product in the truncated algebra; `None` when some exponent reaches its height.
    pub fn mul(&self, other: &Monomial, algebra: &AlgebraPresentation) -> Option<Monomial> {
        debug_assert_eq!(self.0.len(), other.0.len());
        let mut out = Vec::with_capacity(self.0.len());
        for ((a, b), g) in self.0.iter().zip(&other.0).zip(algebra.generators()) {
            let e = a + b;
            if e >= g.height() {
                return None;
            }
            out.push(e);
        }
        Some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// A truncated polynomial algebra `Z_(p)[y_1..y_s]/(y_i^{h_i})` (or its reduction mod p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    prime: Prime,
    generators: Vec<GeneratorSpec>,
    mode: CoefficientMode,
}

impl AlgebraPresentation {
    pub fn new(prime: Prime, generators: Vec<GeneratorSpec>, mode: CoefficientMode) -> Result<Self> {
        let mut seen: Vec<&str> = Vec::new();
        for g in &generators {
            for n in core::iter::once(g.name()).chain(g.aliases().iter().map(String::as_str)) {
                if seen.contains(&n) {
                    return Err(Error::DuplicateGenerator(n.to_string()));
                }
                seen.push(n);
            }
        }
        Ok(AlgebraPresentation {
            prime,
            generators,
            mode,
        })
    }

    pub fn empty(prime: Prime, mode: CoefficientMode) -> Self {
        AlgebraPresentation {
            prime,
            generators: Vec::new(),
            mode,
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Index of a generator by canonical name or alias.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.answers_to(name))
    }

    pub fn generator(&self, name: &str) -> Result<&GeneratorSpec> {
        self.index_of(name)
            .map(|i| &self.generators[i])
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Total dimension, the product of the heights.
    pub fn dimension(&self) -> u64 {
        self.generators.iter().map(|g| g.height() as u64).product()
    }

    pub fn top_degree(&self) -> u32 {
        self.generators
            .iter()
            .map(|g| (g.height() - 1) * g.degree())
            .sum()
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree())
            .sum()
    }

    pub fn is_admissible(&self, m: &Monomial) -> bool {
        m.0.len() == self.generators.len()
            && m.0.iter().zip(&self.generators).all(|(e, g)| *e < g.height())
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.generators.len())
    }

    /// `y_i^exponent` as a monomial, or `None` if it is truncated to zero.
    pub fn generator_power(&self, index: usize, exponent: u32) -> Option<Monomial> {
        if exponent >= self.generators[index].height() {
            return None;
        }
        let mut e = vec![0; self.generators.len()];
        e[index] = exponent;
        Some(Monomial(e))
    }

    /// Admissible monomials of topological degree `d`, in lexicographic order.
    pub fn basis(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.generators.len()];
        self.basis_rec(0, d, &mut current, &mut out);
        out
    }

    fn basis_rec(&self, i: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.generators.len() {
            if remaining == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        let g = &self.generators[i];
        for e in 0..g.height() {
            let used = e * g.degree();
            if used > remaining {
                break;
            }
            current[i] = e;
            self.basis_rec(i + 1, remaining - used, current, out);
        }
        current[i] = 0;
    }

    /// Every admissible monomial, sorted by degree and then lexicographically.
    pub fn full_basis(&self) -> Vec<Monomial> {
        (0..=self.top_degree()).flat_map(|d| self.basis(d)).collect()
    }

    /// Graded dimensions for degrees `0..=cap`.
    pub fn poincare(&self, cap: u32) -> Vec<u64> {
        let mut series = vec![0u64; cap as usize + 1];
        series[0] = 1;
        for g in &self.generators {
            series = truncated_convolve(&series, &geometric(g.degree(), g.height()), cap);
        }
        series
    }

    /// The whole Poincaré series, up to the top degree.
    pub fn poincare_series(&self) -> Vec<u64> {
        self.poincare(self.top_degree())
    }

    /// Tensor product: concatenated generator lists. Both factors must share the
    /// prime and coefficient mode, and generator names may not collide.
    pub fn tensor(&self, other: &AlgebraPresentation) -> Result<AlgebraPresentation> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        if self.mode != other.mode {
            return Err(Error::PresentationMismatch);
        }
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        AlgebraPresentation::new(self.prime, generators, self.mode)
    }
}

/// `1 + t^deg + ... + t^{(height-1)deg}`.
pub(crate) fn geometric(degree: u32, height: u32) -> Vec<u64> {
    let mut s = vec![0u64; ((height - 1) * degree) as usize + 1];
    for k in 0..height {
        s[(k * degree) as usize] = 1;
    }
    s
}

/// Product of two series, truncated to degrees `0..=cap`.
pub fn truncated_convolve(a: &[u64], b: &[u64], cap: u32) -> Vec<u64> {
    let len = cap as usize + 1;
    let mut out = vec![0u64; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// Full product of two finite series.
pub fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    truncated_convolve(a, b, (a.len() + b.len() - 2) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8_p2() -> AlgebraPresentation {
        let p = Prime::new(2).unwrap();
        AlgebraPresentation::new(
            p,
            vec![
                GeneratorSpec::new("y6", 6, 8).unwrap(),
                GeneratorSpec::new("y10", 10, 4).unwrap(),
                GeneratorSpec::new("y18", 18, 2).unwrap(),
                GeneratorSpec::new("y30", 30, 2).unwrap(),
            ],
            CoefficientMode::PLocal,
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(GeneratorSpec::new("y", 3, 2), Err(Error::BadDegree { .. })));
        assert!(matches!(GeneratorSpec::new("y", 0, 2), Err(Error::BadDegree { .. })));
        assert!(matches!(GeneratorSpec::new("y", 4, 1), Err(Error::BadHeight { .. })));
        assert_eq!(Prime::new(7), Err(Error::UnsupportedPrime(7)));
    }

    #[test]
    fn rejects_duplicate_names_and_aliases() {
        let p = Prime::new(2).unwrap();
        let a = GeneratorSpec::new("y6", 6, 2).unwrap().with_aliases(["y1"]);
        let b = GeneratorSpec::new("y1", 10, 2).unwrap();
        assert_eq!(
            AlgebraPresentation::new(p, vec![a, b], CoefficientMode::ModP),
            Err(Error::DuplicateGenerator("y1".into()))
        );
    }

    #[test]
    fn e8_basis_small_degrees() {
        let a = e8_p2();
        assert_eq!(a.basis(0), vec![a.one()]);
        assert_eq!(a.basis(6), vec![Monomial(vec![1, 0, 0, 0])]);
        assert_eq!(a.basis(16), vec![Monomial(vec![1, 1, 0, 0])]);
        assert!(a.basis(2).is_empty());
        assert_eq!(a.dimension(), 128);
        assert_eq!(a.top_degree(), 120);
    }

    #[test]
    fn basis_is_lexicographic() {
        let a = e8_p2();
        for d in 0..=a.top_degree() {
            let b = a.basis(d);
            assert!(b.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn empty_presentation_series() {
        let a = AlgebraPresentation::empty(Prime::new(3).unwrap(), CoefficientMode::ModP);
        assert_eq!(a.poincare(4), vec![1, 0, 0, 0, 0]);
        assert_eq!(a.poincare_series(), vec![1]);
    }

    #[test]
    fn tensor_rejects_collisions_and_primes() {
        let a = e8_p2();
        assert!(matches!(a.tensor(&a), Err(Error::DuplicateGenerator(_))));
        let b = AlgebraPresentation::empty(Prime::new(3).unwrap(), CoefficientMode::PLocal);
        assert_eq!(a.tensor(&b), Err(Error::PrimeMismatch(2, 3)));
        let e = AlgebraPresentation::empty(Prime::new(2).unwrap(), CoefficientMode::PLocal);
        assert_eq!(a.tensor(&e).unwrap(), a);
    }

    #[test]
    fn valuation_and_powers() {
        let p = Prime::new(2).unwrap();
        assert_eq!(p.valuation(12), 2);
        assert!(p.is_power(8));
        assert!(p.is_power(1));
        assert!(!p.is_power(6));
        assert_eq!(p.v_weight(3), 14);
        assert_eq!(Prime::new(5).unwrap().v_weight(1), 8);
    }
}
