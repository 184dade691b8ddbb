use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RingElem;
use crate::error::{Error, Result};

/// A monomial in named parameters, e.g. `lambda^2 * mu`.
///
/// Kept sorted by name with strictly positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamMonomial(Vec<(String, u32)>);

impl ParamMonomial {
    pub fn one() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        ParamMonomial(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<&str, u32> = BTreeMap::new();
        for (n, e) in self.0.iter().chain(other.0.iter()) {
            *out.entry(n.as_str()).or_default() += e;
        }
        ParamMonomial(out.into_iter().map(|(n, e)| (n.to_string(), e)).collect())
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial in named parameters with exact rational coefficients.
///
/// This is the computation lift for all structure constants. Denominators
/// are expected to be prime to `p`; [`UniversalCoeff::assert_integral`]
/// turns a violation into [`Error::NotPIntegral`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniversalCoeff {
    terms: BTreeMap<ParamMonomial, BigRational>,
}

/// Values for parameters, used when reducing to a concrete ring.
pub type Assignment = BTreeMap<String, RingElem>;

impl UniversalCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ratio(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_ratio(BigRational::from_integer(n))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(ParamMonomial::one(), r);
        }
        UniversalCoeff { terms }
    }

    pub fn param(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ParamMonomial::var(name), BigRational::one());
        UniversalCoeff { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (ParamMonomial, BigRational)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: ParamMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &BigRational)> {
        self.terms.iter()
    }

    /// The value if this is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&ParamMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        UniversalCoeff {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(n.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Names of all parameters that occur.
    pub fn params(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.terms.values().all(|c| !c.denom().is_multiple_of(&p))
    }

    pub fn assert_integral(&self, p: u64) -> Result<()> {
        if self.is_p_integral(p) {
            Ok(())
        } else {
            Err(Error::NotPIntegral(self.to_string()))
        }
    }

    /// True when every coefficient is an integer (no denominators at all).
    pub fn is_integral_polynomial(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl Add for &UniversalCoeff {
    type Output = UniversalCoeff;
    fn add(self, rhs: &UniversalCoeff) -> UniversalCoeff {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &UniversalCoeff {
    type Output = UniversalCoeff;
    fn sub(self, rhs: &UniversalCoeff) -> UniversalCoeff {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &UniversalCoeff {
    type Output = UniversalCoeff;
    fn neg(self) -> UniversalCoeff {
        UniversalCoeff {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &UniversalCoeff {
    type Output = UniversalCoeff;
    fn mul(self, rhs: &UniversalCoeff) -> UniversalCoeff {
        let mut out = UniversalCoeff::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for UniversalCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending total degree, then descending monomial order.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(a.0)));
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if m.is_one() {
                fmt_ratio(&abs)
            } else if abs.is_one() {
                m.to_string()
            } else {
                format!("{}*{}", fmt_ratio(&abs), m)
            };
            match (i, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body)
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body)
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body)
                }
            }
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> UniversalCoeff {
        UniversalCoeff::param("lambda")
    }

    #[test]
    fn display_is_descending() {
        let x = &(&lam().pow(2) - &lam().scale_int(&BigInt::from(3))) + &UniversalCoeff::from_int(1);
        assert_eq!(x.to_string(), "lambda^2 - 3*lambda + 1");
        let half = UniversalCoeff::from_ratio(BigRational::new(1.into(), 2.into()));
        assert_eq!(half.to_string(), "1/2");
    }

    #[test]
    fn integrality() {
        let half = UniversalCoeff::from_ratio(BigRational::new(1.into(), 2.into()));
        assert!(half.is_p_integral(3));
        assert!(!half.is_p_integral(2));
        assert!(matches!(half.assert_integral(2), Err(Error::NotPIntegral(_))));
    }

    #[test]
    fn multiplication_collects_terms() {
        let a = &lam() + &UniversalCoeff::one();
        let b = &lam() - &UniversalCoeff::one();
        let prod = &a * &b;
        assert_eq!(prod, &lam().pow(2) - &UniversalCoeff::one());
        assert_eq!(prod.params(), vec!["lambda".to_string()]);
        let zero = &prod - &prod;
        assert!(zero.is_zero());
    }
}
