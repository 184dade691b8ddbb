//! Truncated multivariate polynomials over any [`BaseRing`].
//!
//! This is the workhorse for formal group laws and for the universal lift
//! of divided-power expressions. Terms of total degree above the precision
//! are discarded on every operation.

use std::collections::BTreeMap;

use crate::arith::{Assignment, BaseRing, RingElem};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPoly {
    nvars: usize,
    prec: u32,
    terms: BTreeMap<Vec<u32>, RingElem>,
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl TruncPoly {
    pub fn zero(nvars: usize, prec: u32) -> Self {
        TruncPoly { nvars, prec, terms: BTreeMap::new() }
    }

    pub fn constant(ring: &BaseRing, nvars: usize, prec: u32, c: RingElem) -> Self {
        let mut out = Self::zero(nvars, prec);
        out.add_term(ring, vec![0; nvars], c);
        out
    }

    pub fn one(ring: &BaseRing, nvars: usize, prec: u32) -> Self {
        Self::constant(ring, nvars, prec, ring.one())
    }

    /// The variable with index `i` (0-based).
    pub fn var(ring: &BaseRing, nvars: usize, prec: u32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut out = Self::zero(nvars, prec);
        out.add_term(ring, e, ring.one());
        out
    }

    pub fn from_terms(
        ring: &BaseRing,
        nvars: usize,
        prec: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, RingElem)>,
    ) -> Self {
        let mut out = Self::zero(nvars, prec);
        for (e, c) in terms {
            out.add_term(ring, e, c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RingElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, ring: &BaseRing, e: &[u32]) -> RingElem {
        self.terms.get(e).cloned().unwrap_or_else(|| ring.zero())
    }

    /// Smallest total degree of a term, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).min()
    }

    pub fn add_term(&mut self, ring: &BaseRing, e: Vec<u32>, c: RingElem) {
        debug_assert_eq!(e.len(), self.nvars);
        if degree(&e) > self.prec || ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(e) {
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

    pub fn truncate(&self, prec: u32) -> Self {
        TruncPoly {
            nvars: self.nvars,
            prec,
            terms: self.terms.iter().filter(|(e, _)| degree(e) <= prec).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn add(&self, ring: &BaseRing, o: &Self) -> Self {
        let mut out = self.clone();
        out.prec = self.prec.min(o.prec);
        out = out.truncate(out.prec);
        for (e, c) in &o.terms {
            out.add_term(ring, e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, ring: &BaseRing) -> Self {
        TruncPoly {
            nvars: self.nvars,
            prec: self.prec,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), ring.neg(c))).collect(),
        }
    }

    pub fn sub(&self, ring: &BaseRing, o: &Self) -> Self {
        self.add(ring, &o.neg(ring))
    }

    pub fn scale(&self, ring: &BaseRing, c: &RingElem) -> Self {
        let mut out = Self::zero(self.nvars, self.prec);
        for (e, a) in &self.terms {
            out.add_term(ring, e.clone(), ring.mul(a, c));
        }
        out
    }

    pub fn mul(&self, ring: &BaseRing, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let mut out = Self::zero(self.nvars, prec);
        for (e1, c1) in &self.terms {
            let d1 = degree(e1);
            for (e2, c2) in &o.terms {
                if d1 + degree(e2) > prec {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(ring, e, ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, ring: &BaseRing, k: u32) -> Self {
        let mut acc = Self::one(ring, self.nvars, self.prec);
        for _ in 0..k {
            acc = acc.mul(ring, self);
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one
    /// variable count; the result has the smaller of the two precisions.
    pub fn compose(&self, ring: &BaseRing, images: &[TruncPoly]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let (nv, prec) = match images.first() {
            Some(f) => (f.nvars, f.prec.min(self.prec)),
            None => (0, self.prec),
        };
        // Powers of each image, computed lazily up to the needed exponent.
        let mut powers: Vec<Vec<TruncPoly>> = images.iter().map(|_| vec![TruncPoly::one(ring, nv, prec)]).collect();
        let mut out = Self::zero(nv, prec);
        for (e, c) in &self.terms {
            let mut term = TruncPoly::constant(ring, nv, prec, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(ring, &images[i].truncate(prec));
                    powers[i].push(next);
                }
                term = term.mul(ring, &powers[i][k as usize]);
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(ring, &term);
        }
        Ok(out)
    }

    /// Maps every coefficient through `to.reduce`, starting from the
    /// universal ring.
    pub fn reduce(&self, to: &BaseRing, assignment: &Assignment) -> Result<Self> {
        let mut out = Self::zero(self.nvars, self.prec);
        for (e, c) in &self.terms {
            let u = match c {
                RingElem::Univ(u) => u,
                _ => return Err(Error::UnsupportedRing("reduction starts from the universal ring".into())),
            };
            out.add_term(to, e.clone(), to.reduce(u, assignment)?);
        }
        Ok(out)
    }
}
