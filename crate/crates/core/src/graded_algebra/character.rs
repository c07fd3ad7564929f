use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::presentation::{geometric, truncated_convolve};
use super::{AlgebraPresentation, GeneratorSpec};
use crate::{Error, Result};

fn resolve_powers(algebra: &AlgebraPresentation, sub: &[(&str, u32)]) -> Result<Vec<u32>> {
    let mut powers: Vec<u32> = algebra.generators().iter().map(|g| g.height()).collect();
    for &(name, power) in sub {
        let i = algebra
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let g = &algebra.generators()[i];
        if power == 0 || !g.height().is_multiple_of(power) {
            return Err(Error::PowerDoesNotDivide {
                generator: g.name().to_string(),
                power,
                height: g.height(),
            });
        }
        powers[i] = power;
    }
    Ok(powers)
}

/// Graded dimensions of the coset basis of `P(y)` over the subalgebra generated by
/// `y_i^{power_i}`: monomials whose i-th exponent is below `power_i`. Generators not
/// listed contribute nothing to the subalgebra (their power is the full height).
pub fn complement_character(algebra: &AlgebraPresentation, sub: &[(&str, u32)]) -> Result<Vec<u64>> {
    let powers = resolve_powers(algebra, sub)?;
    let top: u32 = algebra
        .generators()
        .iter()
        .zip(&powers)
        .map(|(g, &k)| (k - 1) * g.degree())
        .sum();
    let mut series = vec![0u64; top as usize + 1];
    series[0] = 1;
    for (g, &k) in algebra.generators().iter().zip(&powers) {
        series = truncated_convolve(&series, &geometric(g.degree(), k), top);
    }
    Ok(series)
}

/// The subalgebra `P(y^J)` generated by `y_i^{power_i}`, as a presentation in its
/// own right (generators whose power equals the height are dropped).
pub fn subalgebra(algebra: &AlgebraPresentation, sub: &[(&str, u32)]) -> Result<AlgebraPresentation> {
    let powers = resolve_powers(algebra, sub)?;
    let generators = algebra
        .generators()
        .iter()
        .zip(&powers)
        .filter(|(g, &k)| k < g.height())
        .map(|(g, &k)| {
            let name = if k == 1 {
                g.name().to_string()
            } else {
                format!("{}^{}", g.name(), k)
            };
            GeneratorSpec::new(name, g.degree() * k, g.height() / k)
        })
        .collect::<Result<Vec<_>>>()?;
    AlgebraPresentation::new(algebra.prime(), generators, algebra.mode())
}

/// Character of `Λ(x_1..x_k)` at prime `p` (each `x_i^p = 0`) for the given degrees.
pub fn lambda_character(p: u32, degrees: &[u32]) -> Vec<u64> {
    let top: u32 = degrees.iter().map(|d| d * (p - 1)).sum();
    let mut series = vec![0u64; top as usize + 1];
    series[0] = 1;
    for &d in degrees {
        series = truncated_convolve(&series, &geometric(d, p), top);
    }
    series
}

pub fn is_power_of_two(n: u32) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// `ℓ̄`: `ℓ - 1` when `ℓ` is a power of two, `ℓ` otherwise.
pub fn spin_lbar(l: u32) -> u32 {
    if is_power_of_two(l) {
        l - 1
    } else {
        l
    }
}

/// Names under which the E8 (p = 2) generators y1..y4 reappear in the spin family.
pub(crate) fn e8_alias(degree: u32) -> Option<&'static str> {
    match degree {
        6 => Some("y1"),
        10 => Some("y2"),
        18 => Some("y3"),
        30 => Some("y4"),
        _ => None,
    }
}

/// Generators of `grP(y)` for `Spin(2ℓ+1)` at p = 2: one exterior generator `y_m`
/// for each even `m` with `6 ≤ m ≤ 2ℓ̄` that is not a power of two.
pub fn spin_generators(l: u32) -> Vec<GeneratorSpec> {
    let top = 2 * spin_lbar(l.max(1));
    (6..=top)
        .step_by(2)
        .filter(|&m| !is_power_of_two(m))
        .map(|m| {
            let g = GeneratorSpec::new(format!("y{m}"), m, 2).expect("even positive degree");
            match e8_alias(m) {
                Some(a) => g.with_aliases([a]),
                None => g,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::{CoefficientMode, Prime};
    use alloc::string::String;

    fn names(l: u32) -> Vec<String> {
        spin_generators(l).iter().map(|g| g.name().into()).collect()
    }

    #[test]
    fn spin_rule_examples() {
        assert_eq!(names(3), ["y6"]);
        assert_eq!(names(7), ["y6", "y10", "y12", "y14"]);
        assert_eq!(names(8), names(7));
        assert_eq!(names(10), ["y6", "y10", "y12", "y14", "y18", "y20"]);
        assert!(names(2).is_empty());
        assert_eq!(names(4), ["y6"]);
    }

    #[test]
    fn lbar() {
        assert_eq!(spin_lbar(8), 7);
        assert_eq!(spin_lbar(5), 5);
        assert_eq!(spin_lbar(2), 1);
    }

    #[test]
    fn complement_examples() {
        let p = Prime::new(3).unwrap();
        let e8 = AlgebraPresentation::new(
            p,
            vec![
                GeneratorSpec::new("y", 8, 3).unwrap(),
                GeneratorSpec::new("y'", 20, 3).unwrap(),
            ],
            CoefficientMode::ModP,
        )
        .unwrap();
        let c = complement_character(&e8, &[("y'", 1)]).unwrap();
        let nonzero: Vec<usize> = (0..c.len()).filter(|&d| c[d] != 0).collect();
        assert_eq!(nonzero, vec![0, 8, 16]);
        assert_eq!(c.iter().sum::<u64>(), 3);
        let all = complement_character(&e8, &[]).unwrap();
        assert_eq!(all, e8.poincare_series());
        let one = complement_character(&e8, &[("y", 1), ("y'", 1)]).unwrap();
        assert_eq!(one, vec![1]);
        assert!(matches!(
            complement_character(&e8, &[("y", 2)]),
            Err(Error::PowerDoesNotDivide { .. })
        ));
    }

    #[test]
    fn lambda_at_odd_prime_has_height_p() {
        assert_eq!(lambda_character(3, &[4]), vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);
    }
}
