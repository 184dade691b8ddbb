//! One-parameter formal group laws to a fixed total-degree precision.
//!
//! Elliptic laws come from the `(z, w)` chart `z = -x/y`, `w = -1/y` of a
//! Weierstrass cubic: `w(z)` is found by fixed-point iteration and the
//! addition law by the chord construction, with the slope
//! `(w(z1) - w(z2)) / (z1 - z2)` expanded as a divided difference so that no
//! series division by `z1 - z2` is needed.

use serde::Serialize;

use crate::arith::{Assignment, BaseRing, RingElem, UniversalCoeff};
use crate::error::{Error, Result};
use crate::series::TruncPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawKind {
    Additive,
    Multiplicative,
    Legendre { lambda: String },
    Weierstrass { a: [String; 5] },
}

impl LawKind {
    pub fn name(&self) -> String {
        match self {
            LawKind::Additive => "additive".into(),
            LawKind::Multiplicative => "multiplicative".into(),
            LawKind::Legendre { lambda } => format!("legendre({lambda})"),
            LawKind::Weierstrass { a } => format!("weierstrass({})", a.join(", ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalGroupLaw {
    pub ring: BaseRing,
    pub prec: u32,
    /// `F(z1, z2)`.
    pub f: TruncPoly,
    /// `i(z)`.
    pub inv: TruncPoly,
    pub kind: LawKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawCoefficient {
    pub i: u32,
    pub j: u32,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InverseCoefficient {
    pub k: u32,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub provenance: String,
    pub ring: String,
    pub precision: u32,
    pub coefficients: Vec<LawCoefficient>,
    pub inverse: Vec<InverseCoefficient>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    /// First offending coefficient, as `exponents: value`.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

fn var(ring: &BaseRing, nv: usize, prec: u32, i: usize) -> TruncPoly {
    TruncPoly::var(ring, nv, prec, i)
}

/// Iterates `w <- step(w)` from zero until the result stops changing.
fn fixed_point(prec: u32, mut step: impl FnMut(&TruncPoly) -> TruncPoly, zero: TruncPoly) -> Result<TruncPoly> {
    let mut w = zero;
    for _ in 0..=prec + 1 {
        let next = step(&w);
        if next == w {
            return Ok(w);
        }
        w = next;
    }
    Err(Error::PrecisionUnreachable(prec))
}

/// Coefficients `(a1, a2, a3, a4, a6)`.
pub type WeierstrassCoeffs = [RingElem; 5];

fn weierstrass_w(ring: &BaseRing, a: &WeierstrassCoeffs, prec: u32) -> Result<TruncPoly> {
    let z = var(ring, 1, prec, 0);
    let z2 = z.mul(ring, &z);
    let z3 = z2.mul(ring, &z);
    let [a1, a2, a3, a4, a6] = a;
    fixed_point(
        prec,
        |w| {
            let w2 = w.mul(ring, w);
            let w3 = w2.mul(ring, w);
            z3.add(ring, &z.mul(ring, w).scale(ring, a1))
                .add(ring, &z2.mul(ring, w).scale(ring, a2))
                .add(ring, &w2.scale(ring, a3))
                .add(ring, &z.mul(ring, &w2).scale(ring, a4))
                .add(ring, &w3.scale(ring, a6))
        },
        TruncPoly::zero(1, prec),
    )
}

/// `1 / (1 + u)` for `u` without constant term.
fn geometric_inverse(ring: &BaseRing, u: &TruncPoly) -> TruncPoly {
    let prec = u.prec();
    let mut acc = TruncPoly::one(ring, u.nvars(), prec);
    let mut term = acc.clone();
    let neg_u = u.neg(ring);
    for _ in 0..prec {
        term = term.mul(ring, &neg_u);
        if term.is_zero() {
            break;
        }
        acc = acc.add(ring, &term);
    }
    acc
}

/// Chord-construction addition law from `w(z)` (known to precision at least `prec + 1`).
fn chord_law(ring: &BaseRing, a: &WeierstrassCoeffs, w: &TruncPoly, prec: u32) -> Result<(TruncPoly, TruncPoly)> {
    let [a1, a2, a3, a4, a6] = a;
    let z1 = var(ring, 2, prec, 0);
    let z2 = var(ring, 2, prec, 1);
    // Slope: sum_n A_n (z1^n - z2^n) / (z1 - z2) = sum_n A_n sum_{i+j=n-1} z1^i z2^j.
    let mut slope = TruncPoly::zero(2, prec);
    for (e, c) in w.terms() {
        let n = e[0];
        for i in 0..n {
            slope.add_term(ring, vec![i, n - 1 - i], c.clone());
        }
    }
    let w1 = w.compose(ring, std::slice::from_ref(&z1))?.truncate(prec);
    let nu = w1.sub(ring, &slope.mul(ring, &z1));
    let l2 = slope.mul(ring, &slope);
    let l3 = l2.mul(ring, &slope);
    let two = ring.from_int(2);
    let three = ring.from_int(3);
    // Sum of the three roots of the cubic cut out by the line w = slope*z + nu.
    let num = slope
        .scale(ring, a1)
        .add(ring, &l2.scale(ring, a3))
        .add(ring, &nu.scale(ring, a2))
        .add(ring, &slope.mul(ring, &nu).scale(ring, &ring.mul(&two, a4)))
        .add(ring, &l2.mul(ring, &nu).scale(ring, &ring.mul(&three, a6)));
    let den_tail = slope.scale(ring, a2).add(ring, &l2.scale(ring, a4)).add(ring, &l3.scale(ring, a6));
    let z3 = z1
        .add(ring, &z2)
        .add(ring, &num.mul(ring, &geometric_inverse(ring, &den_tail)))
        .neg(ring);
    // i(z) = -z / (1 - a1 z - a3 w(z)).
    let z = var(ring, 1, prec, 0);
    let tail = z.scale(ring, a1).add(ring, &w.truncate(prec).scale(ring, a3)).neg(ring);
    let inv = z.neg(ring).mul(ring, &geometric_inverse(ring, &tail));
    let f = inv.compose(ring, &[z3])?;
    Ok((f, inv))
}

impl FormalGroupLaw {
    pub fn additive(ring: &BaseRing, prec: u32) -> Result<Self> {
        check_prec(prec, 1)?;
        let z1 = var(ring, 2, prec, 0);
        let z2 = var(ring, 2, prec, 1);
        Ok(FormalGroupLaw {
            ring: ring.clone(),
            prec,
            f: z1.add(ring, &z2),
            inv: var(ring, 1, prec, 0).neg(ring),
            kind: LawKind::Additive,
        })
    }

    /// `G_m` in the coordinate `s = t - 1`.
    pub fn multiplicative(ring: &BaseRing, prec: u32) -> Result<Self> {
        check_prec(prec, 1)?;
        let z1 = var(ring, 2, prec, 0);
        let z2 = var(ring, 2, prec, 1);
        let mut inv = TruncPoly::zero(1, prec);
        for k in 1..=prec {
            let sign = if k % 2 == 1 { -1 } else { 1 };
            inv.add_term(ring, vec![k], ring.from_int(sign));
        }
        Ok(FormalGroupLaw {
            ring: ring.clone(),
            prec,
            f: z1.add(ring, &z2).add(ring, &z1.mul(ring, &z2)),
            inv,
            kind: LawKind::Multiplicative,
        })
    }

    pub fn weierstrass(ring: &BaseRing, a: WeierstrassCoeffs, prec: u32) -> Result<Self> {
        check_prec(prec, 3)?;
        let w = weierstrass_w(ring, &a, prec + 3)?;
        let (f, inv) = chord_law(ring, &a, &w, prec)?;
        let names = a.clone().map(|x| ring.format(&x));
        Ok(FormalGroupLaw { ring: ring.clone(), prec, f, inv, kind: LawKind::Weierstrass { a: names } })
    }

    /// The Legendre curve `y^2 = x(x - 1)(x - lambda)`, with `w(z)` obtained
    /// by iterating `w = z (z - w)(z - lambda w)` directly.
    pub fn legendre(ring: &BaseRing, lambda: &RingElem, prec: u32) -> Result<Self> {
        if ring.p() == 2 {
            return Err(Error::InvalidArgument("the Legendre model needs p != 2".into()));
        }
        check_prec(prec, 3)?;
        let wp = prec + 3;
        let z = var(ring, 1, wp, 0);
        let w = fixed_point(
            wp,
            |w| {
                let zw = z.sub(ring, w);
                let zlw = z.sub(ring, &w.scale(ring, lambda));
                z.mul(ring, &zw).mul(ring, &zlw)
            },
            TruncPoly::zero(1, wp),
        )?;
        let a2 = ring.neg(&ring.add(&ring.one(), lambda));
        let a = [ring.zero(), a2, ring.zero(), lambda.clone(), ring.zero()];
        let (f, inv) = chord_law(ring, &a, &w, prec)?;
        Ok(FormalGroupLaw { ring: ring.clone(), prec, f, inv, kind: LawKind::Legendre { lambda: ring.format(lambda) } })
    }

    /// The Legendre law over the universal ring with a symbolic parameter.
    pub fn legendre_symbolic(p: u64, param: &str, prec: u32) -> Result<Self> {
        let u = BaseRing::universal(p)?;
        Self::legendre(&u, &RingElem::Univ(UniversalCoeff::param(param)), prec)
    }

    pub fn from_parts(ring: BaseRing, prec: u32, f: TruncPoly, inv: TruncPoly, kind: LawKind) -> Self {
        FormalGroupLaw { ring, prec, f, inv, kind }
    }

    /// Coefficient of `z1^i z2^j`.
    pub fn coeff(&self, i: u32, j: u32) -> RingElem {
        self.f.coeff(&self.ring, &[i, j])
    }

    /// Image of the law under reduction from the universal ring.
    pub fn reduce(&self, to: &BaseRing, assignment: &Assignment) -> Result<Self> {
        Ok(FormalGroupLaw {
            ring: to.clone(),
            prec: self.prec,
            f: self.f.reduce(to, assignment)?,
            inv: self.inv.reduce(to, assignment)?,
            kind: self.kind.clone(),
        })
    }

    /// Checks unit, commutativity, associativity and inverse to precision.
    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        let r = &self.ring;
        let p = self.prec;
        let first_nonzero = |x: &TruncPoly| -> Option<String> {
            x.terms().next().map(|(e, c)| format!("{e:?}: {}", r.format(c)))
        };
        let mut checks = Vec::new();
        let mut push = |axiom: &'static str, diff: TruncPoly| {
            let witness = first_nonzero(&diff);
            checks.push(AxiomCheck { axiom, passed: witness.is_none(), witness });
        };

        let z = var(r, 1, p, 0);
        let zero = TruncPoly::zero(1, p);
        push("left_unit", self.f.compose(r, &[zero.clone(), z.clone()])?.sub(r, &z));
        push("right_unit", self.f.compose(r, &[z.clone(), zero])?.sub(r, &z));

        let (x, y) = (var(r, 2, p, 0), var(r, 2, p, 1));
        push("commutativity", self.f.sub(r, &self.f.compose(r, &[y, x])?));

        let (a, b, c) = (var(r, 3, p, 0), var(r, 3, p, 1), var(r, 3, p, 2));
        let ab = self.f.compose(r, &[a.clone(), b.clone()])?;
        let bc = self.f.compose(r, &[b, c.clone()])?;
        let left = self.f.compose(r, &[ab, c])?;
        let right = self.f.compose(r, &[a, bc])?;
        push("associativity", left.sub(r, &right));

        push("inverse", self.f.compose(r, &[z, self.inv.clone()])?);
        Ok(AxiomReport { checks })
    }

    pub fn report(&self) -> LawReport {
        let r = &self.ring;
        LawReport {
            provenance: self.kind.name(),
            ring: r.to_string(),
            precision: self.prec,
            coefficients: self
                .f
                .terms()
                .map(|(e, c)| LawCoefficient { i: e[0], j: e[1], coeff: r.format(c) })
                .collect(),
            inverse: self.inv.terms().map(|(e, c)| InverseCoefficient { k: e[0], coeff: r.format(c) }).collect(),
        }
    }
}

fn check_prec(prec: u32, min: u32) -> Result<()> {
    if prec < min {
        Err(Error::InvalidArgument(format!("precision {prec} is below the minimum {min}")))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn univ(p: u64) -> BaseRing {
        BaseRing::universal(p).unwrap()
    }

    fn lam() -> UniversalCoeff {
        UniversalCoeff::param("lambda")
    }

    #[test]
    fn builtin_laws() {
        let r = BaseRing::zmod(3, 3).unwrap();
        let ga = FormalGroupLaw::additive(&r, 5).unwrap();
        assert_eq!(ga.f.len(), 2);
        assert!(ga.verify_axioms().unwrap().all_passed());

        let gm = FormalGroupLaw::multiplicative(&r, 3).unwrap();
        assert_eq!(gm.coeff(1, 1), r.one());
        let inv: Vec<String> = gm.report().inverse.iter().map(|c| format!("{}:{}", c.k, c.coeff)).collect();
        assert_eq!(inv, vec!["1:26", "2:1", "3:26"]);
        assert!(gm.verify_axioms().unwrap().all_passed());
    }

    #[test]
    fn legendre_coefficients() {
        let u = univ(3);
        let g = FormalGroupLaw::legendre_symbolic(3, "lambda", 6).unwrap();
        let one = UniversalCoeff::one();
        assert_eq!(g.coeff(1, 2), RingElem::Univ(&lam() + &one));
        assert_eq!(g.coeff(2, 1), RingElem::Univ(&lam() + &one));
        assert_eq!(g.coeff(1, 0), u.one());
        assert_eq!(g.coeff(1, 1), u.zero());
        assert_eq!(g.inv, var(&u, 1, 6, 0).neg(&u));
        // F(z, 0) = z.
        for i in 2..=6 {
            assert_eq!(g.coeff(i, 0), u.zero());
        }
    }

    #[test]
    fn legendre_w_series() {
        // Hand iteration: w = z^3 - (1 + lambda) z^5 + O(z^7).
        let u = univ(3);
        let l = RingElem::Univ(lam());
        let a = [u.zero(), u.neg(&u.add(&u.one(), &l)), u.zero(), l, u.zero()];
        let w = weierstrass_w(&u, &a, 6).unwrap();
        assert_eq!(w.coeff(&u, &[3]), u.one());
        assert_eq!(w.coeff(&u, &[4]), u.zero());
        assert_eq!(w.coeff(&u, &[5]), RingElem::Univ(-&(&lam() + &UniversalCoeff::one())));
    }

    #[test]
    fn legendre_axioms_symbolic() {
        let g = FormalGroupLaw::legendre_symbolic(3, "lambda", 6).unwrap();
        let rep = g.verify_axioms().unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn weierstrass_path_agrees_with_legendre_path() {
        let u = univ(5);
        let l = RingElem::Univ(lam());
        let a = [u.zero(), u.neg(&u.add(&u.one(), &l)), u.zero(), l.clone(), u.zero()];
        let w = FormalGroupLaw::weierstrass(&u, a, 7).unwrap();
        let g = FormalGroupLaw::legendre(&u, &l, 7).unwrap();
        assert_eq!(w.f, g.f);
        assert_eq!(w.inv, g.inv);
    }

    #[test]
    fn general_weierstrass_axioms() {
        let u = univ(5);
        let a = [u.from_int(1), u.from_int(-1), u.from_int(1), u.from_int(2), u.from_int(3)];
        let g = FormalGroupLaw::weierstrass(&u, a, 6).unwrap();
        let rep = g.verify_axioms().unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        // Agrees with the additive law to first order.
        assert_eq!(g.f.truncate(1), FormalGroupLaw::additive(&u, 1).unwrap().f);
    }

    #[test]
    fn degenerate_cubic_is_additive() {
        let u = univ(3);
        let g = FormalGroupLaw::weierstrass(&u, [u.zero(), u.zero(), u.zero(), u.zero(), u.zero()], 6).unwrap();
        assert_eq!(g.f, FormalGroupLaw::additive(&u, 6).unwrap().f);
        let sym = g.f.sub(&u, &g.f.compose(&u, &[var(&u, 2, 6, 1), var(&u, 2, 6, 0)]).unwrap());
        assert!(sym.is_zero());
    }

    #[test]
    fn reduction_commutes_with_generation() {
        let g = FormalGroupLaw::legendre_symbolic(3, "lambda", 6).unwrap();
        let fp = BaseRing::poly(3, "lambda").unwrap();
        let direct = FormalGroupLaw::legendre(&fp, &fp.generator().unwrap(), 6).unwrap();
        let reduced = g.reduce(&fp, &Assignment::new()).unwrap();
        assert_eq!(reduced.f, direct.f);
        assert!(direct.verify_axioms().unwrap().all_passed());
    }

    #[test]
    fn corrupted_law_fails_associativity() {
        let u = univ(3);
        let g = FormalGroupLaw::legendre_symbolic(3, "lambda", 5).unwrap();
        let mut f = g.f.clone();
        f.add_term(&u, vec![2, 2], u.one());
        let bad = FormalGroupLaw::from_parts(u, 5, f, g.inv.clone(), g.kind.clone());
        let rep = bad.verify_axioms().unwrap();
        let assoc = rep.check("associativity").unwrap();
        assert!(!assoc.passed);
        assert!(assoc.witness.is_some());
        assert!(rep.check("commutativity").unwrap().passed);
    }

    #[test]
    fn elliptic_laws_start_additively() {
        for p in [3, 5, 7] {
            let g = FormalGroupLaw::legendre_symbolic(p, "lambda", 5).unwrap();
            let u = univ(p);
            assert_eq!(g.f.truncate(2), FormalGroupLaw::additive(&u, 2).unwrap().f);
        }
    }

    #[test]
    fn legendre_rejects_characteristic_two() {
        assert!(FormalGroupLaw::legendre_symbolic(2, "lambda", 5).is_err());
    }
}
