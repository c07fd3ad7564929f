use std::collections::BTreeSet;
use std::sync::Arc;

use flagchow_core::graded_algebra::{convolve, AlgebraElement, AlgebraHom};
use flagchow_core::linalg::IntMatrix;
use flagchow_core::omega_module::{OmegaMonomial, OmegaRing, OmegaSubmodule};
use flagchow_core::spectral::{BigradedAlgebra, Page, PageDifferential, SpectralElement};
use flagchow_core::{AlgebraPresentation, CoefficientMode, Error, GeneratorSpec, Monomial, OmegaElement, Prime};
use proptest::prelude::*;

fn presentation(p: u32, gens: &[(u32, u32)]) -> Arc<AlgebraPresentation> {
    let specs = gens
        .iter()
        .enumerate()
        .map(|(i, &(d, h))| GeneratorSpec::new(format!("y{i}"), d, h).unwrap())
        .collect();
    Arc::new(AlgebraPresentation::new(Prime::new(p).unwrap(), specs, CoefficientMode::PLocal).unwrap())
}

fn generators() -> impl Strategy<Value = (u32, Vec<(u32, u32)>)> {
    prop::sample::select(vec![2u32, 3, 5]).prop_flat_map(|p| {
        let heights: Vec<u32> = vec![p, p * p];
        (
            Just(p),
            prop::collection::vec((1u32..8, prop::sample::select(heights)), 0..4)
                .prop_map(|v| v.into_iter().map(|(d, h)| (2 * d, h)).collect()),
        )
    })
}

fn element(alg: &Arc<AlgebraPresentation>, coeffs: &[i64]) -> AlgebraElement {
    let basis = alg.full_basis();
    AlgebraElement::from_terms(alg, basis.into_iter().zip(coeffs.iter().copied()))
}

/// Counts monomials by brute force over the exponent box.
fn count_basis(gens: &[(u32, u32)]) -> Vec<u64> {
    let top: u32 = gens.iter().map(|(d, h)| d * (h - 1)).sum();
    let mut out = vec![0u64; top as usize + 1];
    let mut exps = vec![0u32; gens.len()];
    loop {
        let deg: u32 = exps.iter().zip(gens).map(|(e, (d, _))| e * d).sum();
        out[deg as usize] += 1;
        let mut i = 0;
        loop {
            if i == gens.len() {
                return out;
            }
            exps[i] += 1;
            if exps[i] < gens[i].1 {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

proptest! {
    #[test]
    fn poincare_is_palindromic_and_counts_monomials((p, gens) in generators()) {
        let alg = presentation(p, &gens);
        let series = alg.poincare_series();
        prop_assert_eq!(&series, &count_basis(&gens));
        let rev: Vec<u64> = series.iter().rev().copied().collect();
        prop_assert_eq!(&series, &rev);
        prop_assert_eq!(series.iter().sum::<u64>(), alg.dimension());
        prop_assert_eq!(series.len() as u32 - 1, alg.top_degree());
    }

    #[test]
    fn tensor_characters_multiply((p, a) in generators(), b in prop::collection::vec((1u32..6, 0usize..2), 0..3)) {
        let pa = presentation(p, &a);
        let b: Vec<(u32, u32)> = b.into_iter().map(|(d, k)| (2 * d, [p, p * p][k])).collect();
        let renamed: Vec<GeneratorSpec> = b
            .iter()
            .enumerate()
            .map(|(i, &(d, h))| GeneratorSpec::new(format!("z{i}"), d, h).unwrap())
            .collect();
        let pb = AlgebraPresentation::new(pa.prime(), renamed, CoefficientMode::PLocal).unwrap();
        let t = pa.tensor(&pb).unwrap();
        prop_assert_eq!(t.dimension(), pa.dimension() * pb.dimension());
        prop_assert_eq!(t.poincare_series(), convolve(&pa.poincare_series(), &pb.poincare_series()));
    }

    #[test]
    fn multiplication_is_associative_and_commutative(
        gens in prop::collection::vec((1u32..5, 0usize..2), 1..3),
        seed in prop::collection::vec(-3i64..4, 48),
    ) {
        let gens: Vec<(u32, u32)> = gens.into_iter().map(|(d, k)| (2 * d, [2, 4][k])).collect();
        let alg = presentation(2, &gens);
        let n = alg.full_basis().len();
        let chunk = |i: usize| element(&alg, &seed[(i * n) % 48..].iter().chain(seed.iter()).copied().take(n).collect::<Vec<_>>());
        let (x, y, z) = (chunk(0), chunk(1), chunk(2));
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(x.multiply(&y).unwrap(), y.multiply(&x).unwrap());
    }

    #[test]
    fn projection_rank_nullity(gens in prop::collection::vec((1u32..6, 0usize..2), 1..4), keep in prop::collection::vec(any::<bool>(), 4)) {
        let gens: Vec<(u32, u32)> = gens.into_iter().map(|(d, k)| (2 * d, [2, 4][k])).collect();
        let source = presentation(2, &gens);
        let kept: Vec<GeneratorSpec> = source
            .generators()
            .iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(g, _)| g.clone())
            .collect();
        let target = Arc::new(AlgebraPresentation::new(source.prime(), kept, CoefficientMode::PLocal).unwrap());
        let hom = AlgebraHom::canonical_projection(&source, &target).unwrap();
        let cap = source.top_degree();
        let rank = hom.rank_character(cap).unwrap();
        let kernel = hom.kernel_character(cap).unwrap();
        let series = source.poincare(cap);
        for d in 0..=cap as usize {
            prop_assert_eq!(rank[d] + kernel[d], series[d]);
        }
        let mut tgt = target.poincare(cap);
        tgt.resize(cap as usize + 1, 0);
        prop_assert_eq!(rank, tgt);
    }

    #[test]
    fn smith_invariants_divide_and_preserve_index(rows in prop::collection::vec(prop::collection::vec(-6i128..7, 3), 1..5)) {
        let m = IntMatrix::from_rows(3, rows.clone());
        let s = m.smith().unwrap();
        for w in s.invariants.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        prop_assert!(s.invariants.iter().all(|&d| d > 0));
        prop_assert_eq!(s.invariants.len(), m.rank().unwrap());
        if s.invariants.len() == 3 {
            let idx: i128 = s.invariants.iter().product();
            prop_assert_eq!(idx, maximal_minor_gcd(&rows));
        }
    }

    #[test]
    fn euler_characteristic_survives_every_turn(
        degrees in prop::collection::vec(1u32..8, 1..4),
        page in 2u32..6,
        pick in prop::collection::vec(any::<bool>(), 3),
    ) {
        let fiber: Vec<(String, u32)> = degrees.iter().enumerate().map(|(i, d)| (format!("x{i}"), *d)).collect();
        let alg = Arc::new(BigradedAlgebra::new(&fiber, 12).unwrap());
        let mut assignment = Vec::new();
        for (i, (name, d)) in fiber.iter().enumerate() {
            if !pick[i] || d + 1 < page {
                continue;
            }
            let t = d + 1 - page;
            if let Some(&mask) = alg.fiber_basis(t).first() {
                assignment.push((name.as_str(), SpectralElement::basis(page, mask)));
            }
        }
        let d = PageDifferential::new(&alg, page, &assignment).unwrap();
        let mut e = Page::e2(alg.clone());
        for r in 2..page {
            e = e.turn(&PageDifferential::zero(&alg, r)).unwrap();
        }
        match e.turn(&d) {
            Ok(next) => prop_assert_eq!(next.euler_characteristic(), e.euler_characteristic()),
            Err(Error::SquareNonzero { .. }) | Err(Error::Differential { .. }) => {}
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }
}

fn det3(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn maximal_minor_gcd(rows: &[Vec<i128>]) -> i128 {
    let mut g = 0i128;
    let n = rows.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let m = [rows[a].as_slice(), rows[b].as_slice(), rows[c].as_slice()].map(|r| [r[0], r[1], r[2]]);
                g = flagchow_core::linalg::gcd(g, det3(m));
            }
        }
    }
    g.abs()
}

/// The subgroup of `(Z/q)^n` generated by `rows`, by closure.
fn span_mod(rows: &[Vec<i128>], q: i128) -> BTreeSet<Vec<i128>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut seen: BTreeSet<Vec<i128>> = [vec![0; n]].into_iter().collect();
    let mut frontier: Vec<Vec<i128>> = seen.iter().cloned().collect();
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

fn membership_case(p: u32, height: u32, gens: &[(u32, Vec<i64>)], x_degree: u32, x: &[i64]) -> (bool, bool) {
    let w = 2 * (p - 1);
    let alg = Arc::new(
        AlgebraPresentation::new(
            Prime::new(p).unwrap(),
            vec![GeneratorSpec::new("y", w, height).unwrap()],
            CoefficientMode::PLocal,
        )
        .unwrap(),
    );
    let ring = OmegaRing::new(alg, 1);
    let q = (p as i128).pow(3);
    let mono = |v: u32, y: u32| OmegaMonomial { v: vec![v], y: Monomial::from_exponents(vec![y]) };
    // degree j·w is spanned by v^b y^(b+j)
    let column = |j: u32| -> Vec<OmegaMonomial> { (0..height - j).map(|b| mono(b, b + j)).collect() };
    let build = |j: u32, coeffs: &[i64]| {
        OmegaElement::from_terms(column(j).into_iter().zip(coeffs.iter().copied()))
    };
    let cols = column(x_degree);
    // the unit is always a generator
    let mut module_gens = vec![ring.one()];
    module_gens.extend(gens.iter().map(|(j, c)| build(*j, c)));
    for m in &cols {
        module_gens.push(OmegaElement::from_terms([(m.clone(), q as i64)]));
    }
    let module = OmegaSubmodule::new(ring.clone(), module_gens.clone()).unwrap();
    let xe = build(x_degree, x);

    let mut rows = Vec::new();
    for g in &module_gens {
        let Some(gd) = ring.degree(g) else { continue };
        let shift = gd - (x_degree * w) as i64;
        if shift < 0 || shift % w as i64 != 0 {
            continue;
        }
        let a = (shift / w as i64) as u32;
        let moved = ring.v_multiply(g, &[a]);
        rows.push(cols.iter().map(|c| moved.coefficient(c) as i128).collect::<Vec<_>>());
    }
    let span = span_mod(&rows, q);
    let xv: Vec<i128> = cols.iter().map(|c| (xe.coefficient(c) as i128).rem_euclid(q)).collect();
    (module.contains(&xe).unwrap(), span.contains(&xv))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]
    #[test]
    fn membership_matches_brute_force(
        p in prop::sample::select(vec![2u32, 3]),
        gens in prop::collection::vec((0u32..3, prop::collection::vec(-8i64..9, 3)), 1..4),
        x_degree in 0u32..2,
        x in prop::collection::vec(-8i64..9, 3),
        combo in prop::option::of(prop::collection::vec(-3i64..4, 4)),
    ) {
        let height = 3;
        let gens: Vec<(u32, Vec<i64>)> = gens
            .into_iter()
            .map(|(j, c)| (j, c[..(height - j) as usize].to_vec()))
            .collect();
        let n = (height - x_degree) as usize;
        let mut x: Vec<i64> = x[..n].to_vec();
        if let Some(k) = combo {
            // bias towards members: x = Σ k_i · (v-shifted generator)
            x = vec![0; n];
            for ((j, c), k) in gens.iter().zip(&k) {
                if *j < x_degree {
                    continue;
                }
                let a = (j - x_degree) as usize;
                for (b, coef) in c.iter().enumerate() {
                    if b + a < n {
                        x[b + a] += k * coef;
                    }
                }
            }
        }
        let (found, oracle) = membership_case(p, height, &gens, x_degree, &x);
        prop_assert_eq!(found, oracle);
    }
}
