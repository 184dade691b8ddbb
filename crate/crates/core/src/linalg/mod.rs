//! Exact linear algebra over every [`BaseRing`](crate::arith::BaseRing).

mod echelon;
mod matrix;
mod presentation;

pub use echelon::{
    canonical_form, kernel, matrix_from_u64, membership, rank, reduce_against, smith_valuations, span_length,
    Echelon, Pivot,
};
pub use matrix::{vec_is_zero, LinearMapMatrix, Matrix, MatrixReport};
pub use presentation::{quotient_presentation, ModulePresentation, PresentationSummary};

use crate::arith::{BaseRing, FpPoly, RingElem};
use crate::error::{Error, Result};

/// Evaluates a polynomial over `F_p` at an element of a Galois field.
fn eval_in(field: &BaseRing, f: &FpPoly, at: &RingElem) -> RingElem {
    f.coeffs()
        .iter()
        .rev()
        .fold(field.zero(), |acc, &c| field.add(&field.mul(&acc, at), &field.from_int(c as i64)))
}

/// Evaluates one entry of a matrix over `F_p[x]` or `F_p(x)` at `at`.
pub fn specialize_elem(from: &BaseRing, x: &RingElem, field: &BaseRing, at: &RingElem) -> Result<RingElem> {
    match x {
        RingElem::Poly(f) => Ok(eval_in(field, f, at)),
        RingElem::Frac(n, d) => {
            let den = eval_in(field, d, at);
            if field.is_zero(&den) {
                return Err(Error::PoleAtSpecialization(format!(
                    "{} at {} = {}",
                    from.format(x),
                    from.param().unwrap_or("x"),
                    field.format(at)
                )));
            }
            Ok(field.mul(&eval_in(field, n, at), &field.try_inv(&den)?))
        }
        _ => Err(Error::UnsupportedRing(format!("specialization from {from}"))),
    }
}

/// Entrywise evaluation of a parameterized matrix at a point of a field of
/// the same characteristic.
pub fn specialize(m: &Matrix, field: &BaseRing, at: &RingElem) -> Result<Matrix> {
    if !matches!(m.ring, BaseRing::PolyOverFp { .. } | BaseRing::RationalFunctionField { .. }) {
        return Err(Error::UnsupportedRing(format!("specialization from {}", m.ring)));
    }
    if !matches!(field, BaseRing::GaloisField { .. } | BaseRing::PrimeField { .. }) || field.p() != m.ring.p() {
        return Err(Error::UnsupportedRing(format!("specialization into {field}")));
    }
    let data = m
        .row_vecs()
        .iter()
        .map(|r| r.iter().map(|x| specialize_elem(&m.ring, x, field, at)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, m.cols(), data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specialization_examples() {
        let r = BaseRing::poly(3, "lambda").unwrap();
        let f3 = BaseRing::galois_field(3, 1).unwrap();
        let l = r.generator().unwrap();
        let m = Matrix::from_rows(&r, 1, vec![vec![r.add(&l, &r.one())]]).unwrap();
        let s = specialize(&m, &f3, &f3.from_int(2)).unwrap();
        assert!(s.is_zero());

        let c = Matrix::from_ints(&r, &[&[1, 2]]);
        let s = specialize(&c, &f3, &f3.from_int(1)).unwrap();
        assert_eq!(s.to_strings(), vec![vec!["1".to_string(), "2".to_string()]]);

        let q = BaseRing::rational(3, "lambda").unwrap();
        let inv = q.try_inv(&q.generator().unwrap()).unwrap();
        let m = Matrix::from_rows(&q, 1, vec![vec![inv]]).unwrap();
        assert!(matches!(specialize(&m, &f3, &f3.zero()), Err(Error::PoleAtSpecialization(_))));
    }

    #[test]
    fn specialization_into_extension() {
        let r = BaseRing::poly(3, "lambda").unwrap();
        let f9 = BaseRing::galois_field(3, 2).unwrap();
        let l = r.generator().unwrap();
        // lambda^2 + 1 vanishes at the generator g of F_9 = F_3[g]/(g^2 + 1).
        let m = Matrix::from_rows(&r, 1, vec![vec![r.add(&r.mul(&l, &l), &r.one())]]).unwrap();
        assert!(specialize(&m, &f9, &f9.generator().unwrap()).unwrap().is_zero());
    }
}
