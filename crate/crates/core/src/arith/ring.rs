use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::fp_poly::{inv_mod_prime, mul_mod, pow_mod};
use super::{is_prime, Assignment, FpPoly, UniversalCoeff};
use crate::error::{Error, Result};

const MAX_MODULUS: u64 = 1 << 62;

/// A concrete coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    /// `Z/p^n`.
    ZmodPN { p: u64, n: u32 },
    PrimeField { p: u64 },
    /// `F_p[g]/(modulus)`.
    GaloisField { p: u64, e: u32, modulus: FpPoly },
    /// `F_p[param]`.
    PolyOverFp { p: u64, param: String },
    /// The fraction field `F_p(param)`.
    RationalFunctionField { p: u64, param: String },
    /// `Z_(p)` with symbolic parameters: the computation lift itself.
    Universal { p: u64 },
}

/// An element of some [`BaseRing`]. Only meaningful together with its ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElem {
    Int(u64),
    Poly(FpPoly),
    /// Reduced fraction with monic denominator.
    Frac(FpPoly, FpPoly),
    Univ(UniversalCoeff),
}

fn bigint_mod(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

/// Inverse of a unit modulo an arbitrary modulus via extended Euclid.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i128) as u64)
}

/// Lexicographically-first monic polynomial of degree `e` without roots in
/// `F_p`; for `e <= 3` that is the same as irreducible.
fn default_modulus(p: u64, e: u32) -> FpPoly {
    if e == 1 {
        return FpPoly::x();
    }
    let e = e as usize;
    let count = p.pow(e as u32);
    for code in 0..count {
        let mut c = Vec::with_capacity(e + 1);
        let mut x = code;
        for _ in 0..e {
            c.push(x % p);
            x /= p;
        }
        c.push(1);
        let f = FpPoly::from_coeffs(c, p);
        if (0..p).all(|a| f.eval(a, p) != 0) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl BaseRing {
    pub fn zmod(p: u64, n: u32) -> Result<Self> {
        Self::check_prime(p)?;
        if n == 0 {
            return Err(Error::InvalidArgument("Z/p^0 is the zero ring".into()));
        }
        match p.checked_pow(n) {
            Some(q) if q <= MAX_MODULUS => Ok(BaseRing::ZmodPN { p, n }),
            _ => Err(Error::UnsupportedRing(format!("Z/{p}^{n}: modulus exceeds 2^62"))),
        }
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(BaseRing::PrimeField { p })
    }

    pub fn galois_field(p: u64, e: u32) -> Result<Self> {
        Self::check_prime(p)?;
        if !(1..=3).contains(&e) {
            return Err(Error::UnsupportedRing(format!("F_{p}^{e}: only extension degrees 1..=3 are built in")));
        }
        Ok(BaseRing::GaloisField { p, e, modulus: default_modulus(p, e) })
    }

    pub fn poly(p: u64, param: &str) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(BaseRing::PolyOverFp { p, param: param.to_string() })
    }

    pub fn rational(p: u64, param: &str) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(BaseRing::RationalFunctionField { p, param: param.to_string() })
    }

    pub fn universal(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(BaseRing::Universal { p })
    }

    fn check_prime(p: u64) -> Result<()> {
        if is_prime(p) {
            Ok(())
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Parses a ring descriptor: `fp`, `zmod:N` (N a power of p),
    /// `fp-poly:NAME`, `fp-rational:NAME`, `gf:e`, `universal`.
    pub fn from_spec(spec: &str, p: u64) -> Result<Self> {
        let (tag, arg) = match spec.split_once(':') {
            Some((t, a)) => (t, Some(a)),
            None => (spec, None),
        };
        let need = |what: &str| Error::InvalidArgument(format!("ring `{spec}` needs {what}"));
        match tag {
            "fp" => Self::prime_field(p),
            "universal" => Self::universal(p),
            "zmod" => {
                let modulus: u64 = arg
                    .ok_or_else(|| need("a modulus"))?
                    .parse()
                    .map_err(|_| need("an integer modulus"))?;
                let mut n = 0;
                let mut q = modulus;
                while q > 1 && q.is_multiple_of(p) {
                    q /= p;
                    n += 1;
                }
                if q != 1 || n == 0 {
                    return Err(Error::InvalidArgument(format!("{modulus} is not a positive power of {p}")));
                }
                Self::zmod(p, n)
            }
            "fp-poly" => Self::poly(p, arg.ok_or_else(|| need("a parameter name"))?),
            "fp-rational" => Self::rational(p, arg.ok_or_else(|| need("a parameter name"))?),
            "gf" => {
                let e: u32 = arg
                    .ok_or_else(|| need("an extension degree"))?
                    .parse()
                    .map_err(|_| need("an integer extension degree"))?;
                Self::galois_field(p, e)
            }
            _ => Err(Error::InvalidArgument(format!("unknown ring `{spec}`"))),
        }
    }

    pub fn p(&self) -> u64 {
        match self {
            BaseRing::ZmodPN { p, .. }
            | BaseRing::PrimeField { p }
            | BaseRing::GaloisField { p, .. }
            | BaseRing::PolyOverFp { p, .. }
            | BaseRing::RationalFunctionField { p, .. }
            | BaseRing::Universal { p } => *p,
        }
    }

    /// `p^n` for residue rings.
    pub fn modulus(&self) -> Option<u64> {
        match self {
            BaseRing::ZmodPN { p, n } => Some(p.pow(*n)),
            _ => None,
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            BaseRing::ZmodPN { n, .. } => *n == 1,
            BaseRing::PrimeField { .. } | BaseRing::GaloisField { .. } | BaseRing::RationalFunctionField { .. } => true,
            BaseRing::PolyOverFp { .. } | BaseRing::Universal { .. } => false,
        }
    }

    /// Name of the ring's own parameter, if it has one.
    pub fn param(&self) -> Option<&str> {
        match self {
            BaseRing::PolyOverFp { param, .. } | BaseRing::RationalFunctionField { param, .. } => Some(param),
            _ => None,
        }
    }

    pub fn zero(&self) -> RingElem {
        match self {
            BaseRing::ZmodPN { .. } | BaseRing::PrimeField { .. } => RingElem::Int(0),
            BaseRing::GaloisField { .. } | BaseRing::PolyOverFp { .. } => RingElem::Poly(FpPoly::zero()),
            BaseRing::RationalFunctionField { .. } => RingElem::Frac(FpPoly::zero(), FpPoly::one()),
            BaseRing::Universal { .. } => RingElem::Univ(UniversalCoeff::zero()),
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElem {
        match self {
            BaseRing::ZmodPN { .. } => RingElem::Int(bigint_mod(n, self.modulus().unwrap())),
            BaseRing::PrimeField { p } => RingElem::Int(bigint_mod(n, *p)),
            BaseRing::GaloisField { p, .. } | BaseRing::PolyOverFp { p, .. } => {
                RingElem::Poly(FpPoly::constant(bigint_mod(n, *p), *p))
            }
            BaseRing::RationalFunctionField { p, .. } => {
                RingElem::Frac(FpPoly::constant(bigint_mod(n, *p), *p), FpPoly::one())
            }
            BaseRing::Universal { .. } => RingElem::Univ(UniversalCoeff::from_bigint(n.clone())),
        }
    }

    /// Image of a p-integral rational.
    pub fn from_ratio(&self, r: &BigRational) -> Result<RingElem> {
        if let BaseRing::Universal { p } = self {
            let u = UniversalCoeff::from_ratio(r.clone());
            u.assert_integral(*p)?;
            return Ok(RingElem::Univ(u));
        }
        if r.denom().is_multiple_of(&BigInt::from(self.p())) {
            return Err(Error::NotPIntegral(r.to_string()));
        }
        let num = self.from_bigint(r.numer());
        if r.denom().is_one() {
            return Ok(num);
        }
        let den = self.from_bigint(r.denom());
        Ok(self.mul(&num, &self.try_inv(&den)?))
    }

    /// The generator `g` of a Galois field or the parameter of a polynomial ring.
    pub fn generator(&self) -> Result<RingElem> {
        match self {
            BaseRing::GaloisField { p, modulus, .. } => Ok(RingElem::Poly(FpPoly::x().rem(modulus, *p))),
            BaseRing::PolyOverFp { .. } => Ok(RingElem::Poly(FpPoly::x())),
            BaseRing::RationalFunctionField { .. } => Ok(RingElem::Frac(FpPoly::x(), FpPoly::one())),
            _ => Err(Error::UnsupportedRing(format!("{self} has no generator"))),
        }
    }

    fn make_frac(&self, num: FpPoly, den: FpPoly) -> RingElem {
        let p = self.p();
        if num.is_zero() {
            return RingElem::Frac(FpPoly::zero(), FpPoly::one());
        }
        let g = num.gcd(&den, p);
        let num = num.divrem(&g, p).0;
        let den = den.divrem(&g, p).0;
        let l = inv_mod_prime(den.lead(), p);
        RingElem::Frac(num.scale(l, p), den.scale(l, p))
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (BaseRing::ZmodPN { .. }, RingElem::Int(x), RingElem::Int(y)) => {
                let m = self.modulus().unwrap();
                RingElem::Int(((*x as u128 + *y as u128) % m as u128) as u64)
            }
            (BaseRing::PrimeField { p }, RingElem::Int(x), RingElem::Int(y)) => RingElem::Int((x + y) % p),
            (_, RingElem::Poly(x), RingElem::Poly(y)) => RingElem::Poly(x.add(y, self.p())),
            (_, RingElem::Frac(n1, d1), RingElem::Frac(n2, d2)) => {
                let p = self.p();
                if d1 == d2 {
                    return self.make_frac(n1.add(n2, p), d1.clone());
                }
                self.make_frac(n1.mul(d2, p).add(&n2.mul(d1, p), p), d1.mul(d2, p))
            }
            (_, RingElem::Univ(x), RingElem::Univ(y)) => RingElem::Univ(x + y),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        match (self, a) {
            (BaseRing::ZmodPN { .. }, RingElem::Int(x)) => {
                let m = self.modulus().unwrap();
                RingElem::Int((m - x) % m)
            }
            (BaseRing::PrimeField { p }, RingElem::Int(x)) => RingElem::Int((p - x) % p),
            (_, RingElem::Poly(x)) => RingElem::Poly(x.neg(self.p())),
            (_, RingElem::Frac(n, d)) => RingElem::Frac(n.neg(self.p()), d.clone()),
            (_, RingElem::Univ(x)) => RingElem::Univ(-x),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (BaseRing::ZmodPN { .. }, RingElem::Int(x), RingElem::Int(y)) => {
                RingElem::Int(mul_mod(*x, *y, self.modulus().unwrap()))
            }
            (BaseRing::PrimeField { p }, RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(mul_mod(*x, *y, *p)),
            (BaseRing::GaloisField { p, modulus, .. }, RingElem::Poly(x), RingElem::Poly(y)) => {
                RingElem::Poly(x.mul(y, *p).rem(modulus, *p))
            }
            (BaseRing::PolyOverFp { p, .. }, RingElem::Poly(x), RingElem::Poly(y)) => RingElem::Poly(x.mul(y, *p)),
            (_, RingElem::Frac(n1, d1), RingElem::Frac(n2, d2)) => {
                let p = self.p();
                self.make_frac(n1.mul(n2, p), d1.mul(d2, p))
            }
            (_, RingElem::Univ(x), RingElem::Univ(y)) => RingElem::Univ(x * y),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn pow(&self, a: &RingElem, e: u32) -> RingElem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        match a {
            RingElem::Int(x) => *x == 0,
            RingElem::Poly(x) | RingElem::Frac(x, _) => x.is_zero(),
            RingElem::Univ(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self, a: &RingElem) -> bool {
        *a == self.one()
    }

    pub fn try_inv(&self, a: &RingElem) -> Result<RingElem> {
        let fail = || Error::NotInvertible(self.format(a));
        match (self, a) {
            (BaseRing::ZmodPN { .. }, RingElem::Int(x)) => {
                inv_mod(*x, self.modulus().unwrap()).map(RingElem::Int).ok_or_else(fail)
            }
            (BaseRing::PrimeField { p }, RingElem::Int(x)) => {
                if *x == 0 {
                    Err(fail())
                } else {
                    Ok(RingElem::Int(pow_mod(*x, p - 2, *p)))
                }
            }
            (BaseRing::GaloisField { p, modulus, .. }, RingElem::Poly(x)) => {
                let (g, s) = x.ext_gcd(modulus, *p);
                if g.is_one() {
                    Ok(RingElem::Poly(s))
                } else {
                    Err(fail())
                }
            }
            (BaseRing::PolyOverFp { p, .. }, RingElem::Poly(x)) => match x.degree() {
                Some(0) => Ok(RingElem::Poly(FpPoly::constant(inv_mod_prime(x.lead(), *p), *p))),
                _ => Err(fail()),
            },
            (BaseRing::RationalFunctionField { .. }, RingElem::Frac(n, d)) => {
                if n.is_zero() {
                    Err(fail())
                } else {
                    Ok(self.make_frac(d.clone(), n.clone()))
                }
            }
            (BaseRing::Universal { p }, RingElem::Univ(x)) => match x.as_constant() {
                Some(c) if !c.is_zero() && !c.numer().is_multiple_of(&BigInt::from(*p)) => {
                    Ok(RingElem::Univ(UniversalCoeff::from_ratio(c.recip())))
                }
                _ => Err(fail()),
            },
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// p-adic valuation in `Z/p^n` (`None` for zero). In the other rings
    /// this is `Some(0)` for every nonzero element.
    pub fn valuation(&self, a: &RingElem) -> Option<u32> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (BaseRing::ZmodPN { p, .. }, RingElem::Int(x)) => {
                let mut v = 0;
                let mut x = *x;
                while x % p == 0 {
                    x /= p;
                    v += 1;
                }
                Some(v)
            }
            _ => Some(0),
        }
    }

    /// All elements of a finite ring in canonical order.
    pub fn elements(&self) -> Result<Vec<RingElem>> {
        match self {
            BaseRing::ZmodPN { .. } => Ok((0..self.modulus().unwrap()).map(RingElem::Int).collect()),
            BaseRing::PrimeField { p } => Ok((0..*p).map(RingElem::Int).collect()),
            BaseRing::GaloisField { p, e, .. } => Ok((0..p.pow(*e))
                .map(|code| {
                    let mut c = Vec::new();
                    let mut x = code;
                    for _ in 0..*e {
                        c.push(x % p);
                        x /= p;
                    }
                    RingElem::Poly(FpPoly::from_coeffs(c, *p))
                })
                .collect()),
            _ => Err(Error::UnsupportedRing(format!("{self} is infinite"))),
        }
    }

    /// Image of a universal coefficient. Parameters are taken from
    /// `assignment`, else from the ring's own parameter, else left symbolic
    /// in the universal ring.
    pub fn reduce(&self, u: &UniversalCoeff, assignment: &Assignment) -> Result<RingElem> {
        let p = self.p();
        u.assert_integral(p)?;
        let mut acc = self.zero();
        for (mono, c) in u.terms() {
            let mut term = self.from_ratio(c)?;
            for (name, e) in mono.factors() {
                let base = if let Some(v) = assignment.get(name) {
                    v.clone()
                } else if self.param() == Some(name.as_str()) {
                    self.generator()?
                } else if matches!(self, BaseRing::Universal { .. }) {
                    RingElem::Univ(UniversalCoeff::param(name))
                } else {
                    return Err(Error::UnboundParameter(name.clone()));
                };
                term = self.mul(&term, &self.pow(&base, *e));
            }
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Canonical integer-polynomial lift of an element, when one exists.
    pub fn lift(&self, a: &RingElem) -> Result<UniversalCoeff> {
        match (self, a) {
            (_, RingElem::Int(x)) => Ok(UniversalCoeff::from_bigint(BigInt::from(*x))),
            (BaseRing::PolyOverFp { param, .. }, RingElem::Poly(x)) => Ok(lift_poly(x, param)),
            (BaseRing::RationalFunctionField { param, .. }, RingElem::Frac(n, d)) if d.is_one() => {
                Ok(lift_poly(n, param))
            }
            (_, RingElem::Univ(x)) => Ok(x.clone()),
            _ => Err(Error::UnsupportedRing(format!("{} has no integral lift in {self}", self.format(a)))),
        }
    }

    /// Canonical text encoding of an element.
    pub fn format(&self, a: &RingElem) -> String {
        match (self, a) {
            (_, RingElem::Int(x)) => x.to_string(),
            (BaseRing::GaloisField { .. }, RingElem::Poly(x)) => x.format("g"),
            (BaseRing::PolyOverFp { param, .. }, RingElem::Poly(x)) => x.format(param),
            (BaseRing::RationalFunctionField { param, .. }, RingElem::Frac(n, d)) => {
                if d.is_one() {
                    n.format(param)
                } else {
                    format!("({})/({})", n.format(param), d.format(param))
                }
            }
            (_, RingElem::Univ(x)) => x.to_string(),
            (_, RingElem::Poly(x)) => x.format("x"),
            (_, RingElem::Frac(n, d)) => format!("({})/({})", n.format("x"), d.format("x")),
        }
    }
}

fn lift_poly(x: &FpPoly, param: &str) -> UniversalCoeff {
    let lam = UniversalCoeff::param(param);
    let mut acc = UniversalCoeff::zero();
    for (i, &c) in x.coeffs().iter().enumerate() {
        if c != 0 {
            acc = &acc + &lam.pow(i as u32).scale_int(&BigInt::from(c));
        }
    }
    acc
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::ZmodPN { p, n } => write!(f, "Z/{}", p.pow(*n)),
            BaseRing::PrimeField { p } => write!(f, "F_{p}"),
            BaseRing::GaloisField { p, e, .. } => write!(f, "F_{}", p.pow(*e)),
            BaseRing::PolyOverFp { p, param } => write!(f, "F_{p}[{param}]"),
            BaseRing::RationalFunctionField { p, param } => write!(f, "F_{p}({param})"),
            BaseRing::Universal { p } => write!(f, "Z_({p})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn no_assignment() -> Assignment {
        Assignment::new()
    }

    #[test]
    fn reduce_examples() {
        let z4 = BaseRing::zmod(2, 2).unwrap();
        assert_eq!(z4.reduce(&UniversalCoeff::from_int(6), &no_assignment()), Ok(RingElem::Int(2)));
        let half = UniversalCoeff::from_ratio(BigRational::new(1.into(), 2.into()));
        assert!(matches!(z4.reduce(&half, &no_assignment()), Err(Error::NotPIntegral(_))));

        let f3l = BaseRing::poly(3, "lambda").unwrap();
        let four_lambda = UniversalCoeff::param("lambda").scale_int(&BigInt::from(4));
        let r = f3l.reduce(&four_lambda, &no_assignment()).unwrap();
        assert_eq!(r, f3l.generator().unwrap());
        assert_eq!(f3l.format(&r), "lambda");

        let f3 = BaseRing::prime_field(3).unwrap();
        assert_eq!(
            f3.reduce(&four_lambda, &no_assignment()),
            Err(Error::UnboundParameter("lambda".into()))
        );
    }

    #[test]
    fn inverses_in_residue_rings() {
        let z4 = BaseRing::zmod(2, 2).unwrap();
        assert_eq!(z4.try_inv(&RingElem::Int(3)), Ok(RingElem::Int(3)));
        assert!(matches!(z4.try_inv(&RingElem::Int(2)), Err(Error::NotInvertible(_))));
        let z9 = BaseRing::from_spec("zmod:9", 3).unwrap();
        assert_eq!(z9.valuation(&RingElem::Int(6)), Some(1));
        assert_eq!(z9.from_ratio(&BigRational::new(1.into(), 2.into())), Ok(RingElem::Int(5)));
    }

    #[test]
    fn polynomial_product() {
        let r = BaseRing::poly(3, "lambda").unwrap();
        let l = r.generator().unwrap();
        let a = r.add(&l, &r.one());
        let b = r.add(&l, &r.from_int(2));
        assert_eq!(r.format(&r.mul(&a, &b)), "lambda^2 + 2");
    }

    #[test]
    fn galois_field_moduli() {
        let f9 = BaseRing::galois_field(3, 2).unwrap();
        let BaseRing::GaloisField { modulus, .. } = &f9 else { unreachable!() };
        assert_eq!(modulus.format("x"), "x^2 + 1");
        let f4 = BaseRing::galois_field(2, 2).unwrap();
        let BaseRing::GaloisField { modulus, .. } = &f4 else { unreachable!() };
        assert_eq!(modulus.format("x"), "x^2 + x + 1");
        let g = f9.generator().unwrap();
        assert_eq!(f9.format(&f9.mul(&g, &g)), "2");
        // Multiplicative group of F_9 has order 8.
        for a in f9.elements().unwrap().into_iter().skip(1) {
            assert!(f9.is_one(&f9.pow(&a, 8)));
            assert!(f9.is_one(&f9.mul(&a, &f9.try_inv(&a).unwrap())));
        }
    }

    #[test]
    fn rational_functions_are_reduced() {
        let r = BaseRing::rational(3, "lambda").unwrap();
        let l = r.generator().unwrap();
        let a = r.sub(&r.mul(&l, &l), &r.one()); // lambda^2 - 1
        let b = r.add(&l, &r.one());
        let q = r.mul(&a, &r.try_inv(&b).unwrap());
        assert_eq!(r.format(&q), "lambda + 2");
        let inv = r.try_inv(&l).unwrap();
        assert_eq!(r.format(&inv), "(1)/(lambda)");
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(BaseRing::from_spec("zmod:27", 3), Ok(BaseRing::ZmodPN { p: 3, n: 3 }));
        assert!(BaseRing::from_spec("zmod:6", 3).is_err());
        assert!(BaseRing::from_spec("gf:5", 3).is_err());
        assert!(BaseRing::from_spec("bogus", 3).is_err());
        assert_eq!(BaseRing::from_spec("fp-rational:lambda", 3).unwrap().to_string(), "F_3(lambda)");
    }

    fn rings() -> Vec<BaseRing> {
        vec![
            BaseRing::zmod(2, 2).unwrap(),
            BaseRing::zmod(3, 2).unwrap(),
            BaseRing::prime_field(5).unwrap(),
            BaseRing::galois_field(3, 2).unwrap(),
            BaseRing::galois_field(2, 3).unwrap(),
            BaseRing::poly(3, "lambda").unwrap(),
            BaseRing::rational(3, "lambda").unwrap(),
            BaseRing::universal(3).unwrap(),
        ]
    }

    fn elem(ring: &BaseRing, seed: &[i64]) -> RingElem {
        let u: UniversalCoeff = seed
            .iter()
            .enumerate()
            .map(|(i, &c)| UniversalCoeff::param("lambda").pow(i as u32).scale_int(&BigInt::from(c)))
            .fold(UniversalCoeff::zero(), |a, b| &a + &b);
        let mut asg = Assignment::new();
        if ring.param().is_none() && !matches!(ring, BaseRing::Universal { .. }) {
            let g = ring.generator().unwrap_or_else(|_| ring.from_int(2));
            asg.insert("lambda".into(), g);
        }
        ring.reduce(&u, &asg).unwrap()
    }

    proptest! {
        #[test]
        fn ring_axioms(a in prop::collection::vec(-9i64..9, 0..4),
                       b in prop::collection::vec(-9i64..9, 0..4),
                       c in prop::collection::vec(-9i64..9, 0..4)) {
            for r in rings() {
                let (x, y, z) = (elem(&r, &a), elem(&r, &b), elem(&r, &c));
                prop_assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
                prop_assert_eq!(r.mul(&x, &r.add(&y, &z)), r.add(&r.mul(&x, &y), &r.mul(&x, &z)));
                prop_assert!(r.is_zero(&r.add(&x, &r.neg(&x))));
                prop_assert_eq!(r.add(&x, &y), r.add(&y, &x));
            }
        }

        #[test]
        fn reduction_is_a_homomorphism(a in prop::collection::vec(-20i64..20, 0..4),
                                       b in prop::collection::vec(-20i64..20, 0..4)) {
            let lift = |s: &[i64]| s.iter().enumerate()
                .map(|(i, &c)| UniversalCoeff::param("lambda").pow(i as u32).scale_int(&BigInt::from(c)))
                .fold(UniversalCoeff::zero(), |x, y| &x + &y);
            let (ua, ub) = (lift(&a), lift(&b));
            for r in rings() {
                let mut asg = Assignment::new();
                if r.param().is_none() && !matches!(r, BaseRing::Universal { .. }) {
                    asg.insert("lambda".into(), r.from_int(2));
                }
                let red = |u: &UniversalCoeff| r.reduce(u, &asg).unwrap();
                prop_assert_eq!(red(&(&ua + &ub)), r.add(&red(&ua), &red(&ub)));
                prop_assert_eq!(red(&(&ua * &ub)), r.mul(&red(&ua), &red(&ub)));
            }
        }
    }
}
