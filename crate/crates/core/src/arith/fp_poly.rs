use std::fmt::Write as _;

/// Dense univariate polynomial over `F_p`, coefficients low to high.
///
/// The prime is not stored; every operation takes it explicitly. The
/// representation is trimmed (no trailing zero coefficients), so the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly(Vec<u64>);

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub(crate) fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

impl FpPoly {
    pub fn zero() -> Self {
        FpPoly(Vec::new())
    }

    pub fn constant(c: u64, p: u64) -> Self {
        Self::from_coeffs(vec![c], p)
    }

    pub fn one() -> Self {
        FpPoly(vec![1])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        FpPoly(vec![0, 1])
    }

    pub fn from_coeffs(mut c: Vec<u64>, p: u64) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly(c)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Self, p: u64) -> Self {
        let n = self.0.len().max(o.0.len());
        let c = (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % p).collect();
        Self::from_coeffs(c, p)
    }

    pub fn neg(&self, p: u64) -> Self {
        Self::from_coeffs(self.0.iter().map(|&a| (p - a) % p).collect(), p)
    }

    pub fn sub(&self, o: &Self, p: u64) -> Self {
        self.add(&o.neg(p), p)
    }

    pub fn scale(&self, c: u64, p: u64) -> Self {
        Self::from_coeffs(self.0.iter().map(|&a| mul_mod(a, c, p)).collect(), p)
    }

    pub fn mul(&self, o: &Self, p: u64) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::from_coeffs(c, p)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self, p: u64) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.0.len() - 1;
        let inv = inv_mod_prime(d.lead(), p);
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = mul_mod(r[i], inv, p);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in d.0.iter().enumerate() {
                let k = i - dd + j;
                r[k] = (r[k] + p - mul_mod(c, b, p)) % p;
            }
        }
        (Self::from_coeffs(q, p), Self::from_coeffs(r, p))
    }

    pub fn rem(&self, d: &Self, p: u64) -> Self {
        self.divrem(d, p).1
    }

    pub fn monic(&self, p: u64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(inv_mod_prime(self.lead(), p), p)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Self, p: u64) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` monic and `s * self = g mod m`.
    pub fn ext_gcd(&self, m: &Self, p: u64) -> (Self, Self) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m, p));
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, p);
            let s = s0.sub(&q.mul(&s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.is_zero() {
            return (r0, s0);
        }
        let inv = inv_mod_prime(r0.lead(), p);
        (r0.scale(inv, p), s0.scale(inv, p))
    }

    pub fn eval(&self, x: u64, p: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }

    /// Formats in descending degree, e.g. `2*lambda^2 + lambda + 1`.
    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            match (i, c) {
                (0, c) => write!(out, "{c}").unwrap(),
                (1, 1) => out.push_str(var),
                (1, c) => write!(out, "{c}*{var}").unwrap(),
                (i, 1) => write!(out, "{var}^{i}").unwrap(),
                (i, c) => write!(out, "{c}*{var}^{i}").unwrap(),
            }
        }
        out
    }
}
