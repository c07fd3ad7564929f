use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{AlgebraElement, AlgebraPresentation};
use crate::linalg::FpMatrix;
use crate::{Error, Result};

/// A ring map `P → P'` determined by the images of the generators of `P`.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    source: Arc<AlgebraPresentation>,
    target: Arc<AlgebraPresentation>,
    images: Vec<AlgebraElement>,
}

impl AlgebraHom {
    /// `assignment` pairs a source generator (name or alias) with its image;
    /// `None` stands for zero. Every source generator must be assigned exactly once.
    pub fn new<'a, I>(
        source: &Arc<AlgebraPresentation>,
        target: &Arc<AlgebraPresentation>,
        assignment: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Option<AlgebraElement>)>,
    {
        if source.prime() != target.prime() {
            return Err(Error::PrimeMismatch(source.prime().get(), target.prime().get()));
        }
        let mut images: Vec<Option<AlgebraElement>> = vec![None; source.rank()];
        let mut assigned = vec![false; source.rank()];
        for (name, image) in assignment {
            let i = source
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            if assigned[i] {
                return Err(Error::DuplicateGenerator(name.to_string()));
            }
            assigned[i] = true;
            images[i] = image;
        }
        if let Some(i) = assigned.iter().position(|a| !a) {
            return Err(Error::MissingImage(source.generators()[i].name().to_string()));
        }
        let images = images
            .into_iter()
            .zip(source.generators())
            .map(|(img, g)| {
                let img = img.unwrap_or_else(|| AlgebraElement::zero(target));
                if !super::element::same_algebra(img.algebra(), target) {
                    return Err(Error::PresentationMismatch);
                }
                if !img.is_zero() && img.degree() != Some(g.degree()) {
                    return Err(Error::DegreeMismatch {
                        generator: g.name().to_string(),
                        expected: g.degree(),
                        found: img.degree(),
                    });
                }
                if !img.pow(g.height())?.is_zero() {
                    return Err(Error::RelationNotPreserved(g.name().to_string()));
                }
                Ok(img)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images,
        })
    }

    pub fn identity(algebra: &Arc<AlgebraPresentation>) -> Result<Self> {
        let assignment = algebra
            .generators()
            .iter()
            .map(|g| Ok((g.name(), Some(AlgebraElement::generator(algebra, g.name())?))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(algebra, algebra, assignment)
    }

    /// Generators present in the target under the same canonical name go to
    /// themselves, everything else to zero.
    pub fn canonical_projection(
        source: &Arc<AlgebraPresentation>,
        target: &Arc<AlgebraPresentation>,
    ) -> Result<Self> {
        for g in target.generators() {
            let s = source.generator(g.name())?;
            if s.degree() != g.degree() {
                return Err(Error::DegreeMismatch {
                    generator: g.name().to_string(),
                    expected: s.degree(),
                    found: Some(g.degree()),
                });
            }
        }
        let assignment = source
            .generators()
            .iter()
            .map(|g| {
                let img = match target.index_of(g.name()) {
                    Some(_) => Some(AlgebraElement::generator(target, g.name())?),
                    None => None,
                };
                Ok((g.name(), img))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, assignment)
    }

    pub fn source(&self) -> &Arc<AlgebraPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraPresentation> {
        &self.target
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if !super::element::same_algebra(x.algebra(), &self.source) {
            return Err(Error::PresentationMismatch);
        }
        let mut out = AlgebraElement::zero(&self.target);
        for (m, c) in x.terms() {
            let mut term = AlgebraElement::one(&self.target).scale(c);
            for (img, &e) in self.images.iter().zip(m.exponents()) {
                if e > 0 {
                    term = term.multiply(&img.pow(e)?)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Matrix over `F_p` of the degree-`d` component; rows follow the source basis,
    /// columns the target basis.
    pub fn matrix_in_degree(&self, d: u32) -> Result<FpMatrix> {
        let target_basis = self.target.basis(d);
        let mut m = FpMatrix::new(self.source.prime().get(), target_basis.len());
        for mono in self.source.basis(d) {
            let img = self.apply(&AlgebraElement::monomial(&self.source, mono, 1))?;
            let row: Vec<i64> = target_basis.iter().map(|b| img.coefficient(b)).collect();
            m.push_row_i64(&row);
        }
        Ok(m)
    }

    /// Per-degree rank over `F_p` for degrees `0..=cap`.
    pub fn rank_character(&self, cap: u32) -> Result<Vec<u64>> {
        (0..=cap)
            .map(|d| Ok(self.matrix_in_degree(d)?.rank() as u64))
            .collect()
    }

    /// Per-degree dimension of the kernel over `F_p` for degrees `0..=cap`.
    /// Fails with [`Error::NotSurjective`] when some degree is not hit.
    pub fn kernel_character(&self, cap: u32) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(cap as usize + 1);
        for d in 0..=cap {
            let m = self.matrix_in_degree(d)?;
            let rank = m.rank();
            if rank != m.ncols() {
                return Err(Error::NotSurjective(d));
            }
            out.push((m.nrows() - rank) as u64);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::{CoefficientMode, GeneratorSpec, Prime};

    fn pres(p: u32, gens: &[(&str, u32, u32)]) -> Arc<AlgebraPresentation> {
        Arc::new(
            AlgebraPresentation::new(
                Prime::new(p).unwrap(),
                gens.iter()
                    .map(|(n, d, h)| GeneratorSpec::new(*n, *d, *h).unwrap())
                    .collect(),
                CoefficientMode::ModP,
            )
            .unwrap(),
        )
    }

    #[test]
    fn e8_to_e7_kills_y4() {
        let e8 = pres(2, &[("y1", 6, 8), ("y2", 10, 4), ("y3", 18, 2), ("y4", 30, 2)]);
        let e7 = pres(2, &[("y1", 6, 2), ("y2", 10, 2), ("y3", 18, 2)]);
        let f = AlgebraHom::canonical_projection(&e8, &e7).unwrap();
        let y1 = AlgebraElement::generator(&e8, "y1").unwrap();
        let y4 = AlgebraElement::generator(&e8, "y4").unwrap();
        assert!(f.apply(&y1.multiply(&y4).unwrap()).unwrap().is_zero());
        assert_eq!(
            f.apply(&y1).unwrap(),
            AlgebraElement::generator(&e7, "y1").unwrap()
        );
        // y1^2 survives in E8 but dies in E7
        assert!(f.apply(&y1.pow(2).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn identity_is_identity() {
        let a = pres(3, &[("y", 8, 3), ("z", 20, 3)]);
        let id = AlgebraHom::identity(&a).unwrap();
        for m in a.full_basis() {
            let x = AlgebraElement::monomial(&a, m, 2);
            assert_eq!(id.apply(&x).unwrap(), x);
        }
        assert!(id.kernel_character(a.top_degree()).unwrap().iter().all(|&k| k == 0));
    }

    #[test]
    fn degree_mismatch_rejected() {
        let a = pres(2, &[("y1", 6, 2), ("y2", 10, 2)]);
        let y2 = AlgebraElement::generator(&a, "y2").unwrap();
        let err = AlgebraHom::new(&a, &a, [("y1", Some(y2.clone())), ("y2", Some(y2))]).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { expected: 6, found: Some(10), .. }));
    }

    #[test]
    fn missing_and_relation_errors() {
        let a = pres(2, &[("y1", 6, 2), ("y2", 10, 2)]);
        assert!(matches!(
            AlgebraHom::new(&a, &a, [("y1", None)]),
            Err(Error::MissingImage(_))
        ));
        let big = pres(2, &[("y1", 6, 4)]);
        let small = pres(2, &[("y1", 6, 2)]);
        // y1 -> y1 from height 2 into height 4 does not respect y1^2 = 0
        let img = AlgebraElement::generator(&big, "y1").unwrap();
        assert!(matches!(
            AlgebraHom::new(&small, &big, [("y1", Some(img))]),
            Err(Error::RelationNotPreserved(_))
        ));
    }

    #[test]
    fn non_surjective_reported() {
        let a = pres(2, &[("y1", 6, 2)]);
        let b = pres(2, &[("y1", 6, 2), ("y2", 10, 2)]);
        let f = AlgebraHom::new(&a, &b, [("y1", Some(AlgebraElement::generator(&b, "y1").unwrap()))])
            .unwrap();
        assert_eq!(f.kernel_character(16), Err(Error::NotSurjective(10)));
    }
}
