//! Truncated divided power algebras of level `m`.
//!
//! An algebra context fixes `r` tensor slots with `n` divided variables
//! each, optionally followed by ordinary (non-divided) base variables, a
//! truncation weight `D`, and a coefficient ring. The basis element
//! `x^{{k}}` is `x^k / q_k!` where `k = p^m q_k + r_k`.
//!
//! Products use [`mul_const`]; everything that needs true division by
//! factorials (divided powers of ideal elements, substitutions) runs on the
//! universal lift and is reduced at the end.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{binomial, factorial, Assignment, BaseRing, PrimeLevel, RingElem, UniversalCoeff};
use crate::error::{Error, Result};
use crate::series::TruncPoly;

/// `<k, l>` with `x^{{k}} x^{{l}} = <k,l> x^{{k+l}}`.
pub fn mul_const_int(k: u64, l: u64, pl: &PrimeLevel) -> BigInt {
    pl.q_factorial(k + l) / (pl.q_factorial(k) * pl.q_factorial(l))
}

/// Coefficient of `x^{{a}} (x) x^{{k-a}}` in `(x (x) 1 + 1 (x) x)^{{k}}`.
pub fn add_const_ratio(k: u64, a: u64, pl: &PrimeLevel) -> BigRational {
    BigRational::new(binomial(k, a) * pl.q_factorial(a) * pl.q_factorial(k - a), pl.q_factorial(k))
}

pub fn mul_const(k: u64, l: u64, pl: &PrimeLevel) -> UniversalCoeff {
    UniversalCoeff::from_bigint(mul_const_int(k, l, pl))
}

pub fn add_const(k: u64, a: u64, pl: &PrimeLevel) -> Result<UniversalCoeff> {
    if a > k {
        return Err(Error::InvalidArgument(format!("add_const needs a <= k, got a={a}, k={k}")));
    }
    let c = UniversalCoeff::from_ratio(add_const_ratio(k, a, pl));
    c.assert_integral(pl.p())?;
    Ok(c)
}

/// Shape of an m-PD polynomial algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraContext {
    pub pl: PrimeLevel,
    /// Divided variables per slot.
    pub n: usize,
    /// Number of tensor slots.
    pub r: usize,
    /// Ordinary polynomial variables placed after the slots.
    pub base_vars: usize,
    /// Truncation weight: divided degree plus base degree.
    pub d: u32,
    pub ring: BaseRing,
    /// Letter used when printing divided variables.
    pub letter: String,
}

/// Exponent vector: `r * n` slot exponents (slot-major), then base exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MpdMonomial(pub Vec<u32>);

/// Sparse linear combination of monomials. The ring is the context's.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MpdElement {
    terms: BTreeMap<MpdMonomial, RingElem>,
}

impl AlgebraContext {
    pub fn new(pl: PrimeLevel, n: usize, r: usize, d: u32, ring: BaseRing) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one variable per slot".into()));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("truncation degree must be at least 1".into()));
        }
        if ring.p() != pl.p() {
            return Err(Error::InvalidArgument(format!("ring {ring} does not have residue characteristic {}", pl.p())));
        }
        Ok(AlgebraContext { pl, n, r, base_vars: 0, d, ring, letter: "t".into() })
    }

    pub fn with_base_vars(mut self, k: usize) -> Self {
        self.base_vars = k;
        self
    }

    pub fn with_letter(mut self, letter: &str) -> Self {
        self.letter = letter.to_string();
        self
    }

    /// Same shape with a different slot count.
    pub fn with_slots(&self, r: usize) -> Self {
        AlgebraContext { r, ..self.clone() }
    }

    /// Same shape over another ring.
    pub fn with_ring(&self, ring: BaseRing) -> Self {
        AlgebraContext { ring, ..self.clone() }
    }

    pub fn nvars(&self) -> usize {
        self.r * self.n + self.base_vars
    }

    /// Index of divided variable `i` in slot `s` (both 0-based).
    pub fn index(&self, s: usize, i: usize) -> usize {
        s * self.n + i
    }

    pub fn is_divided(&self, idx: usize) -> bool {
        idx < self.r * self.n
    }

    pub fn slot<'a>(&self, m: &'a MpdMonomial, s: usize) -> &'a [u32] {
        &m.0[s * self.n..(s + 1) * self.n]
    }

    pub fn base<'a>(&self, m: &'a MpdMonomial) -> &'a [u32] {
        &m.0[self.r * self.n..]
    }

    pub fn slot_degree(&self, m: &MpdMonomial, s: usize) -> u32 {
        self.slot(m, s).iter().sum()
    }

    /// Divided (filtration) degree.
    pub fn degree(&self, m: &MpdMonomial) -> u32 {
        m.0[..self.r * self.n].iter().sum()
    }

    /// Divided degree plus base degree; truncation is by weight.
    pub fn weight(&self, m: &MpdMonomial) -> u32 {
        m.0.iter().sum()
    }

    pub fn unit(&self) -> MpdMonomial {
        MpdMonomial(vec![0; self.nvars()])
    }

    /// Monomial from per-slot exponent vectors (no base part).
    pub fn monomial(&self, slots: &[&[u32]]) -> MpdMonomial {
        let mut e = vec![0; self.nvars()];
        for (s, ex) in slots.iter().enumerate() {
            for (i, &k) in ex.iter().enumerate() {
                e[self.index(s, i)] = k;
            }
        }
        MpdMonomial(e)
    }

    /// All monomials of weight at most `D`, in canonical order.
    pub fn basis(&self) -> Vec<MpdMonomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars()];
        enumerate(&mut cur, 0, self.d, &mut out);
        out.sort();
        out
    }

    /// Product of two basis monomials as a scalar multiple of a monomial,
    /// or `None` if truncated away.
    pub fn mul_monomials(&self, a: &MpdMonomial, b: &MpdMonomial) -> Option<(MpdMonomial, BigInt)> {
        if self.weight(a) + self.weight(b) > self.d {
            return None;
        }
        let mut c = BigInt::one();
        let e: Vec<u32> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        for idx in 0..self.r * self.n {
            c *= mul_const_int(a.0[idx] as u64, b.0[idx] as u64, &self.pl);
        }
        Some((MpdMonomial(e), c))
    }

    pub fn element(&self, terms: impl IntoIterator<Item = (MpdMonomial, RingElem)>) -> MpdElement {
        let mut x = MpdElement::zero();
        for (m, c) in terms {
            x.add_term(&self.ring, m, c);
        }
        x
    }

    pub fn from_monomial(&self, m: MpdMonomial) -> MpdElement {
        self.element([(m, self.ring.one())])
    }

    pub fn one(&self) -> MpdElement {
        self.from_monomial(self.unit())
    }

    pub fn add(&self, x: &MpdElement, y: &MpdElement) -> MpdElement {
        let mut out = x.clone();
        for (m, c) in &y.terms {
            out.add_term(&self.ring, m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, x: &MpdElement, c: &RingElem) -> MpdElement {
        self.element(x.terms.iter().map(|(m, a)| (m.clone(), self.ring.mul(a, c))))
    }

    pub fn sub(&self, x: &MpdElement, y: &MpdElement) -> MpdElement {
        self.add(x, &self.scale(y, &self.ring.from_int(-1)))
    }

    pub fn mul(&self, x: &MpdElement, y: &MpdElement) -> MpdElement {
        let mut out = MpdElement::zero();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                if let Some((m, k)) = self.mul_monomials(a, b) {
                    let c = self.ring.mul(&self.ring.mul(ca, cb), &self.ring.from_bigint(&k));
                    out.add_term(&self.ring, m, c);
                }
            }
        }
        out
    }

    /// `prod over divided variables of q_J!`: the factor between `x^J` and
    /// `x^{{J}}`.
    pub fn weight_factorial(&self, m: &MpdMonomial) -> BigInt {
        (0..self.r * self.n).fold(BigInt::one(), |acc, i| acc * self.pl.q_factorial(m.0[i] as u64))
    }

    /// Ordinary polynomial over the universal ring representing `x`.
    pub fn to_lift(&self, x: &MpdElement) -> Result<TruncPoly> {
        let u = BaseRing::universal(self.pl.p())?;
        let mut out = TruncPoly::zero(self.nvars(), self.d);
        for (m, c) in &x.terms {
            let lifted = self.ring.lift(c)?;
            let coeff = lifted.scale(&BigRational::new(BigInt::one(), self.weight_factorial(m)));
            out.add_term(&u, m.0.clone(), RingElem::Univ(coeff));
        }
        Ok(out)
    }

    /// Coefficients of a lifted polynomial in the m-PD basis, still on the
    /// universal ring.
    pub fn lift_coefficients(&self, poly: &TruncPoly) -> Result<BTreeMap<MpdMonomial, UniversalCoeff>> {
        let mut out = BTreeMap::new();
        for (e, c) in poly.terms() {
            let RingElem::Univ(u) = c else {
                return Err(Error::UnsupportedRing("expected a universal polynomial".into()));
            };
            let m = MpdMonomial(e.clone());
            let v = u.scale_int(&self.weight_factorial(&m));
            v.assert_integral(self.pl.p())?;
            out.insert(m, v);
        }
        Ok(out)
    }

    /// Inverse of [`AlgebraContext::to_lift`], reducing into the context ring.
    pub fn from_lift(&self, poly: &TruncPoly, assignment: &Assignment) -> Result<MpdElement> {
        let mut out = MpdElement::zero();
        for (m, u) in self.lift_coefficients(poly)? {
            out.add_term(&self.ring, m, self.ring.reduce(&u, assignment)?);
        }
        Ok(out)
    }

    /// `gamma_q(x) = x^q / q!` for `x` without constant term.
    pub fn divided_power(&self, x: &MpdElement, q: u32) -> Result<MpdElement> {
        if let Some(m) = x.terms.keys().find(|m| self.degree(m) == 0) {
            return Err(Error::InvalidArgument(format!("{} has a term of divided degree 0", self.format_monomial(m))));
        }
        let u = BaseRing::universal(self.pl.p())?;
        let lifted = self.to_lift(x)?.pow(&u, q);
        let inv = BigRational::new(BigInt::one(), factorial(q as u64));
        let scaled = lifted.scale(&u, &RingElem::Univ(UniversalCoeff::from_ratio(inv)));
        self.from_lift(&scaled, &Assignment::new())
    }

    pub fn format_monomial(&self, m: &MpdMonomial) -> String {
        let mut parts = Vec::new();
        for s in 0..self.r {
            let vars: Vec<String> = self
                .slot(m, s)
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, e)| format!("{}{}^{{{}}}", self.letter, i + 1, e))
                .collect();
            if !vars.is_empty() {
                parts.push(format!("{}@s{}", vars.join("*"), s + 1));
            }
        }
        for (i, &e) in self.base(m).iter().enumerate() {
            if e > 0 {
                parts.push(format!("x{}^{}", i + 1, e));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format_element(&self, x: &MpdElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.terms
            .iter()
            .map(|(m, c)| format!("{} * {}", self.ring.format(c), self.format_monomial(m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn enumerate(cur: &mut Vec<u32>, idx: usize, budget: u32, out: &mut Vec<MpdMonomial>) {
    if idx == cur.len() {
        out.push(MpdMonomial(cur.clone()));
        return;
    }
    for e in 0..=budget {
        cur[idx] = e;
        enumerate(cur, idx + 1, budget - e, out);
    }
    cur[idx] = 0;
}

impl MpdElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MpdMonomial, &RingElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MpdMonomial) -> Option<&RingElem> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, ring: &BaseRing, m: MpdMonomial, c: RingElem) {
        if ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.add(o.get(), &c);
                if ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Minimal divided degree of a term; `None` stands for the zero element.
    pub fn fil_degree(&self, ctx: &AlgebraContext) -> Option<u32> {
        self.terms.keys().map(|m| ctx.degree(m)).min()
    }
}

/// A ring homomorphism between two m-PD algebras, given by the images of
/// the variables and evaluated on the universal lift.
///
/// Divided variable `x` goes to `image^k / q_k!` on `x^{{k}}`; base
/// variables go to ordinary powers of their image. Powers are cached, so one
/// substitution can be applied to many elements cheaply.
pub struct Substitution {
    src: AlgebraContext,
    dst: AlgebraContext,
    universal: BaseRing,
    images: Vec<TruncPoly>,
    cache: std::cell::RefCell<Vec<Vec<TruncPoly>>>,
}

impl Substitution {
    /// `images` are lifted polynomials in the destination variables, one
    /// per source variable, each without constant term.
    pub fn from_lifted(src: &AlgebraContext, dst: &AlgebraContext, images: Vec<TruncPoly>) -> Result<Self> {
        if images.len() != src.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} variables",
                images.len(),
                src.nvars()
            )));
        }
        let universal = BaseRing::universal(src.pl.p())?;
        for img in &images {
            if img.nvars() != dst.nvars() {
                return Err(Error::DimensionMismatch("image lives in the wrong algebra".into()));
            }
            if img.min_degree() == Some(0) {
                return Err(Error::InvalidArgument("substitution images must have no constant term".into()));
            }
        }
        let one = TruncPoly::one(&universal, dst.nvars(), dst.d);
        let cache: Vec<Vec<TruncPoly>> = images.iter().map(|_| vec![one.clone()]).collect();
        Ok(Substitution { src: src.clone(), dst: dst.clone(), universal, images, cache: cache.into() })
    }

    pub fn new(src: &AlgebraContext, dst: &AlgebraContext, images: &[MpdElement]) -> Result<Self> {
        let lifted = images.iter().map(|x| dst.to_lift(x)).collect::<Result<Vec<_>>>()?;
        Self::from_lifted(src, dst, lifted)
    }

    fn power(&self, var: usize, k: u32) -> TruncPoly {
        let mut cache = self.cache.borrow_mut();
        while cache[var].len() <= k as usize {
            let next = cache[var].last().unwrap().mul(&self.universal, &self.images[var]);
            cache[var].push(next);
        }
        cache[var][k as usize].clone()
    }

    /// Image of one source monomial as a lifted polynomial.
    pub fn apply_monomial_lifted(&self, m: &MpdMonomial) -> TruncPoly {
        let u = &self.universal;
        let mut acc = TruncPoly::one(u, self.dst.nvars(), self.dst.d);
        let mut denom = BigInt::one();
        for (idx, &k) in m.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            acc = acc.mul(u, &self.power(idx, k));
            if self.src.is_divided(idx) {
                denom *= self.src.pl.q_factorial(k as u64);
            }
            if acc.is_zero() {
                return acc;
            }
        }
        acc.scale(u, &RingElem::Univ(UniversalCoeff::from_ratio(BigRational::new(BigInt::one(), denom))))
    }

    /// Image of one source monomial, as m-PD coefficients on the universal ring.
    pub fn apply_monomial(&self, m: &MpdMonomial) -> Result<BTreeMap<MpdMonomial, UniversalCoeff>> {
        self.dst.lift_coefficients(&self.apply_monomial_lifted(m))
    }

    pub fn apply(&self, x: &MpdElement) -> Result<MpdElement> {
        let u = &self.universal;
        let mut acc = TruncPoly::zero(self.dst.nvars(), self.dst.d);
        for (m, c) in x.terms() {
            let coeff = RingElem::Univ(self.src.ring.lift(c)?);
            acc = acc.add(u, &self.apply_monomial_lifted(m).scale(u, &coeff));
        }
        self.dst.from_lift(&acc, &Assignment::new())
    }
}

/// Convenience wrapper around [`Substitution`].
pub fn mpd_substitute(
    src: &AlgebraContext,
    x: &MpdElement,
    images: &[MpdElement],
    dst: &AlgebraContext,
) -> Result<MpdElement> {
    Substitution::new(src, dst, images)?.apply(x)
}

impl fmt::Display for MpdMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64, m: u32, n: usize, r: usize, d: u32, ring: &str) -> AlgebraContext {
        let pl = PrimeLevel::new(p, m).unwrap();
        AlgebraContext::new(pl, n, r, d, BaseRing::from_spec(ring, p).unwrap()).unwrap()
    }

    /// Independent oracle: expand `x^{{k}} x^{{l}}` over the rationals as
    /// ordinary powers divided by their quotient factorials.
    fn mul_const_oracle(k: u64, l: u64, pl: &PrimeLevel) -> BigRational {
        let pm = pl.pm();
        let qf = |j: u64| factorial(j / pm);
        BigRational::new(qf(k + l), qf(k) * qf(l))
    }

    #[test]
    fn mul_const_examples() {
        let p21 = PrimeLevel::new(2, 1).unwrap();
        assert_eq!(mul_const_int(1, 1, &p21), BigInt::from(1));
        assert_eq!(mul_const_int(2, 2, &p21), BigInt::from(2));
        for p in [2, 3, 5] {
            assert_eq!(mul_const_int(1, 1, &PrimeLevel::new(p, 0).unwrap()), BigInt::from(2));
        }
    }

    #[test]
    fn add_const_examples() {
        let p21 = PrimeLevel::new(2, 1).unwrap();
        let p31 = PrimeLevel::new(3, 1).unwrap();
        assert_eq!(add_const(2, 1, &p21).unwrap(), UniversalCoeff::from_int(2));
        assert_eq!(add_const(4, 1, &p31).unwrap(), UniversalCoeff::from_int(4));
        let p30 = PrimeLevel::new(3, 0).unwrap();
        for k in 0..8 {
            for a in 0..=k {
                assert_eq!(add_const(k, a, &p30).unwrap(), UniversalCoeff::one());
            }
        }
    }

    #[test]
    fn structure_constants_agree_with_rational_oracle() {
        for (p, m) in [(2, 0), (2, 1), (2, 2), (3, 1), (5, 1)] {
            let pl = PrimeLevel::new(p, m).unwrap();
            for k in 0..20 {
                for l in 0..20 {
                    assert_eq!(BigRational::from_integer(mul_const_int(k, l, &pl)), mul_const_oracle(k, l, &pl));
                }
                for a in 0..=k {
                    // Expanding (x+y)^k / q_k! in the basis x^{{a}} y^{{b}}.
                    let pm = pl.pm();
                    let oracle = BigRational::new(
                        binomial(k, a) * factorial(a / pm) * factorial((k - a) / pm),
                        factorial(k / pm),
                    );
                    assert_eq!(add_const_ratio(k, a, &pl), oracle);
                    assert!(add_const(k, a, &pl).is_ok(), "add_const({k},{a}) at p={p}, m={m}");
                }
            }
        }
    }

    #[test]
    fn products_of_monomials() {
        let c = ctx(2, 1, 1, 1, 6, "zmod:4");
        let t = |k: u32| c.from_monomial(c.monomial(&[&[k]]));
        assert_eq!(c.mul(&t(1), &t(1)), t(2));
        assert_eq!(c.mul(&t(2), &t(2)), c.scale(&t(4), &c.ring.from_int(2)));
        assert_eq!(c.mul(&t(3), &c.one()), t(3));
        assert!(c.mul(&t(4), &t(3)).is_zero());
    }

    #[test]
    fn divided_powers_and_integrality() {
        let c = ctx(2, 1, 1, 1, 4, "zmod:4");
        let t = |k: u32| c.from_monomial(c.monomial(&[&[k]]));
        assert_eq!(c.divided_power(&t(1), 0).unwrap(), c.one());
        assert!(matches!(c.divided_power(&t(1), 2), Err(Error::NotPIntegral(_))));
        // gamma_2(t^{{2}}) = t^4 / (1! 1! 2!) = t^{{4}} since q_4! = 2.
        assert_eq!(c.divided_power(&t(2), 2).unwrap(), t(4));

        let c3 = ctx(3, 1, 1, 1, 6, "fp");
        let z = |k: u32| c3.from_monomial(c3.monomial(&[&[k]]));
        assert!(matches!(c3.divided_power(&z(1), 3), Err(Error::NotPIntegral(_))));
        assert_eq!(c3.divided_power(&z(3), 1).unwrap(), z(3));
        assert!(matches!(c3.divided_power(&c3.one(), 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn substitution_of_sum_is_comultiplication() {
        let src = ctx(3, 1, 1, 1, 7, "universal");
        let dst = src.with_slots(2);
        let t1 = dst.from_monomial(dst.monomial(&[&[1], &[0]]));
        let t2 = dst.from_monomial(dst.monomial(&[&[0], &[1]]));
        let sub = Substitution::new(&src, &dst, &[dst.add(&t1, &t2)]).unwrap();
        for k in 0..=7u32 {
            let img = sub.apply_monomial(&src.monomial(&[&[k]])).unwrap();
            for a in 0..=k {
                let m = dst.monomial(&[&[a], &[k - a]]);
                assert_eq!(img.get(&m), Some(&add_const(k as u64, a as u64, &src.pl).unwrap()));
            }
            assert_eq!(img.len(), k as usize + 1);
        }
    }

    #[test]
    fn binomial_substitution_in_level_one() {
        // t -> t1 + t2 in t^3 with p = 3, m = 1: t^3 = t^{{3}} since q_3 = 1.
        let src = ctx(3, 1, 1, 1, 3, "fp");
        let dst = src.with_slots(2);
        let t1 = dst.from_monomial(dst.monomial(&[&[1], &[0]]));
        let t2 = dst.from_monomial(dst.monomial(&[&[0], &[1]]));
        let x = src.from_monomial(src.monomial(&[&[3]]));
        let img = mpd_substitute(&src, &x, &[dst.add(&t1, &t2)], &dst).unwrap();
        let expect = dst.element([
            (dst.monomial(&[&[3], &[0]]), dst.ring.one()),
            (dst.monomial(&[&[2], &[1]]), dst.ring.from_int(3)),
            (dst.monomial(&[&[1], &[2]]), dst.ring.from_int(3)),
            (dst.monomial(&[&[0], &[3]]), dst.ring.one()),
        ]);
        assert_eq!(img, expect);
    }

    #[test]
    fn identity_substitution() {
        let c = ctx(2, 1, 2, 1, 4, "zmod:4");
        let vars: Vec<MpdElement> = (0..2)
            .map(|i| {
                let mut e = vec![0; 2];
                e[i] = 1;
                c.from_monomial(MpdMonomial(e))
            })
            .collect();
        let sub = Substitution::new(&c, &c, &vars).unwrap();
        for m in c.basis() {
            let x = c.scale(&c.from_monomial(m), &c.ring.from_int(3));
            assert_eq!(sub.apply(&x).unwrap(), x);
        }
    }

    #[test]
    fn coassociativity() {
        let pl = PrimeLevel::new(2, 1).unwrap();
        let u = BaseRing::universal(2).unwrap();
        let one = AlgebraContext::new(pl, 1, 1, 6, u.clone()).unwrap();
        let two = one.with_slots(2);
        let three = one.with_slots(3);
        let v = |c: &AlgebraContext, s: usize| c.from_monomial(c.monomial(&{
            let mut sl: Vec<&[u32]> = vec![&[0]; c.r];
            sl[s] = &[1];
            sl
        }));
        let split = Substitution::new(&one, &two, &[two.add(&v(&two, 0), &v(&two, 1))]).unwrap();
        // (split x id) and (id x split) from two slots to three.
        let left = Substitution::new(&two, &three, &[three.add(&v(&three, 0), &v(&three, 1)), v(&three, 2)]).unwrap();
        let right = Substitution::new(&two, &three, &[v(&three, 0), three.add(&v(&three, 1), &v(&three, 2))]).unwrap();
        for k in 0..=6 {
            let x = split.apply(&one.from_monomial(one.monomial(&[&[k]]))).unwrap();
            assert_eq!(left.apply(&x).unwrap(), right.apply(&x).unwrap());
        }
    }

    #[test]
    fn formatting() {
        let c = ctx(2, 1, 2, 2, 6, "zmod:4").with_base_vars(1);
        let m = MpdMonomial(vec![3, 1, 0, 2, 1]);
        assert_eq!(c.format_monomial(&m), "t1^{3}*t2^{1}@s1*t2^{2}@s2*x1^1");
        let x = c.element([(m, c.ring.from_int(3))]);
        assert_eq!(c.format_element(&x), "3 * t1^{3}*t2^{1}@s1*t2^{2}@s2*x1^1");
        assert_eq!(c.format_monomial(&c.unit()), "1");
    }

    #[test]
    fn basis_size_and_filtration() {
        let c = ctx(2, 1, 1, 1, 3, "zmod:4");
        let b = c.basis();
        assert_eq!(b.len(), 4);
        assert_eq!(b.iter().map(|m| c.degree(m)).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(ctx(2, 1, 1, 0, 3, "zmod:4").basis().len(), 1);
        assert_eq!(ctx(3, 1, 2, 1, 1, "fp").basis().len(), 3);
    }

    fn random_element(c: &AlgebraContext, coeffs: &[i64]) -> MpdElement {
        c.element(c.basis().into_iter().zip(coeffs).map(|(m, &k)| (m, c.ring.from_int(k))))
    }

    proptest! {
        #[test]
        fn algebra_laws(a in prop::collection::vec(-5i64..5, 10),
                        b in prop::collection::vec(-5i64..5, 10),
                        c in prop::collection::vec(-5i64..5, 10)) {
            for (p, m, ring) in [(2, 1, "zmod:8"), (3, 1, "zmod:9"), (3, 0, "fp"), (2, 2, "zmod:4")] {
                let cx = ctx(p, m, 2, 1, 5, ring);
                let (x, y, z) = (random_element(&cx, &a), random_element(&cx, &b), random_element(&cx, &c));
                prop_assert_eq!(cx.mul(&x, &y), cx.mul(&y, &x));
                prop_assert_eq!(cx.mul(&cx.mul(&x, &y), &z), cx.mul(&x, &cx.mul(&y, &z)));
                let xy = cx.mul(&x, &y);
                if let (Some(fx), Some(fy), Some(fxy)) = (x.fil_degree(&cx), y.fil_degree(&cx), xy.fil_degree(&cx)) {
                    prop_assert!(fxy >= fx + fy);
                }
            }
        }
    }

    #[test]
    fn level_zero_is_classical() {
        let pl = PrimeLevel::new(5, 0).unwrap();
        for k in 0..10 {
            for l in 0..10 {
                assert_eq!(mul_const_int(k, l, &pl), binomial(k + l, k));
            }
        }
    }
}
