//! Filtered exactness of `O -> L(Omega^0) -> L(Omega^1) -> L(Omega^2)` at
//! finite truncation, where `L(Omega^r) = P(1) (x) Omega^r` is the shifted
//! Berthelot–Lieberman complex over affine `n`-space.
//!
//! Every map in the shifted complex preserves weight, so each weight piece
//! up to the truncation degree `D` is computed exactly. The filtration band
//! is `0 <= k <= D - p^m`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{Assignment, BaseRing, PrimeLevel, RingElem};
use crate::complex::{BLComplex, SimplicialShape};
use crate::error::{Error, Result};
use crate::linalg::{canonical_form, kernel, reduce_against, span_length, vec_is_zero, Matrix};

/// Which complex is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexKind {
    /// `L(Omega^bullet)`, augmented by the constants.
    Linearized,
    /// `Omega^bullet` of affine space itself, augmented by the constants.
    DeRham,
}

#[derive(Clone, Debug)]
pub struct LinearizedComplex {
    pub kind: ComplexKind,
    pub pl: PrimeLevel,
    pub n: usize,
    pub ring: BaseRing,
    pub d: u32,
    pub complex: BLComplex,
}

/// Builds `L(Omega^r)` for `r = 0, 1, 2`. Needs `D >= 2 p^m`.
pub fn build_linearized(pl: PrimeLevel, n: usize, ring: BaseRing, d: u32) -> Result<LinearizedComplex> {
    build(ComplexKind::Linearized, pl, n, ring, d)
}

/// Builds the non-linearized de Rham complex `Omega^r`, `r = 0, 1, 2`, of
/// level `m` on affine `n`-space, truncated by total weight.
pub fn build_de_rham(pl: PrimeLevel, n: usize, ring: BaseRing, d: u32) -> Result<LinearizedComplex> {
    build(ComplexKind::DeRham, pl, n, ring, d)
}

fn build(kind: ComplexKind, pl: PrimeLevel, n: usize, ring: BaseRing, d: u32) -> Result<LinearizedComplex> {
    let need = 2 * pl.pm() as u32;
    if d < need {
        return Err(Error::TruncationTooSmall { have: d, need });
    }
    let shape = match kind {
        ComplexKind::Linearized => SimplicialShape::product_shifted(n),
        ComplexKind::DeRham => SimplicialShape::product_with_base(n),
    };
    let complex = BLComplex::build(shape, pl, ring.clone(), Assignment::new(), d, 3)?;
    Ok(LinearizedComplex { kind, pl, n, ring, d, complex })
}

#[derive(Clone, Debug, Serialize)]
pub struct PositionCheck {
    pub k: u32,
    pub position: usize,
    pub exact: bool,
    /// Length of the cycles of `Fil^k` at this position.
    pub cycles: u32,
    /// Length of the boundaries from `Fil^k` of the previous position.
    pub boundaries: u32,
    pub homology: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoincareReport {
    pub complex: ComplexKind,
    pub p: u64,
    pub m: u32,
    pub n: usize,
    pub ring: String,
    #[serde(rename = "D")]
    pub d: u32,
    /// Largest filtration index in the band.
    pub band: u32,
    pub d_squared_zero: bool,
    pub all_exact: bool,
    pub checks: Vec<PositionCheck>,
}

impl LinearizedComplex {
    pub fn band(&self) -> u32 {
        self.d - self.pl.pm() as u32
    }

    fn unit(ring: &BaseRing, dim: usize, i: usize) -> Vec<RingElem> {
        let mut e = vec![ring.zero(); dim];
        e[i] = ring.one();
        e
    }

    fn format(&self, r: usize, ring: &BaseRing, v: &[RingElem]) -> Result<String> {
        let labels = self.complex.labels(r)?;
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(i, c)| format!("{} * {}", ring.format(c), labels[i]))
            .collect();
        Ok(if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }

    /// Exactness of `Fil^k` of the augmented complex at `position` (0 or 1).
    /// The constants carry the trivial filtration.
    pub fn check_exactness(&self, k: u32, position: usize) -> Result<PositionCheck> {
        if k > self.band() {
            return Err(Error::BandViolation { k, max: self.band() });
        }
        if position > 1 {
            return Err(Error::InvalidArgument(format!("position {position} is outside 0..=1")));
        }
        let cx = &self.complex;
        let ring = cx.work_ring()?;
        let dim = cx.generators(position)?.len();
        let rel_here = cx.relation_rows(position, &ring)?;
        let rel_next = cx.relation_rows(position + 1, &ring)?;
        let dmat = cx.differential_in(position, &ring)?.matrix;
        let fil_cols = cx.hodge_fil(position, k)?;

        let mut m = Matrix::zeros(&ring, dmat.rows(), fil_cols.len() + rel_next.len());
        for (jj, &j) in fil_cols.iter().enumerate() {
            for i in 0..dmat.rows() {
                m.set(i, jj, dmat.get(i, j).clone());
            }
        }
        for (t, row) in rel_next.iter().enumerate() {
            for (i, x) in row.iter().enumerate() {
                m.set(i, fil_cols.len() + t, x.clone());
            }
        }
        let mut cycles = Vec::new();
        if !fil_cols.is_empty() {
            for v in kernel(&m)? {
                let mut x = vec![ring.zero(); dim];
                for (jj, &j) in fil_cols.iter().enumerate() {
                    x[j] = v[jj].clone();
                }
                if !vec_is_zero(&ring, &x) {
                    cycles.push(x);
                }
            }
        }

        let mut boundaries = Vec::new();
        if position == 0 {
            if k == 0 {
                if let Some(aug) = cx.augmentation() {
                    boundaries.push(cx.dense(&ring, dim, &aug)?);
                }
            }
        } else {
            let prev = cx.differential_in(0, &ring)?.matrix;
            let prev_dim = cx.generators(0)?.len();
            for j in cx.hodge_fil(0, k)? {
                let img = prev.apply(&Self::unit(&ring, prev_dim, j))?;
                if !vec_is_zero(&ring, &img) {
                    boundaries.push(img);
                }
            }
        }

        let length = |rows: Vec<Vec<RingElem>>| -> Result<u32> {
            if rows.is_empty() {
                Ok(0)
            } else {
                span_length(&Matrix::from_rows(&ring, dim, rows)?)
            }
        };
        let base = length(rel_here.clone())?;
        let with_rel = |v: &[Vec<RingElem>]| {
            let mut out = v.to_vec();
            out.extend(rel_here.iter().cloned());
            out
        };
        let z_len = length(with_rel(&cycles))? - base;
        let b_rows = with_rel(&boundaries);
        let b_len = length(b_rows.clone())? - base;

        let mut witness = None;
        if !b_rows.is_empty() || !cycles.is_empty() {
            let e = if b_rows.is_empty() { None } else { Some(canonical_form(&Matrix::from_rows(&ring, dim, b_rows)?)?) };
            for z in &cycles {
                let rem = match &e {
                    Some(e) => reduce_against(e, z).0,
                    None => z.clone(),
                };
                if !vec_is_zero(&ring, &rem) {
                    witness = Some(self.format(position, &ring, z)?);
                    break;
                }
            }
        }
        Ok(PositionCheck {
            k,
            position,
            exact: witness.is_none(),
            cycles: z_len,
            boundaries: b_len,
            homology: z_len.saturating_sub(b_len),
            witness,
        })
    }

    /// Checks positions 0 and 1 for every `k` in the band.
    pub fn report(&self) -> Result<PoincareReport> {
        let jobs: Vec<(u32, usize)> = (0..=self.band()).flat_map(|k| [(k, 0), (k, 1)]).collect();
        let checks = jobs
            .par_iter()
            .map(|&(k, pos)| self.check_exactness(k, pos))
            .collect::<Result<Vec<_>>>()?;
        let d_squared_zero = self.complex.check_d_squared(0)? && self.complex.check_d_squared(1)?;
        Ok(PoincareReport {
            complex: self.kind,
            p: self.pl.p(),
            m: self.pl.m(),
            n: self.n,
            ring: self.ring.to_string(),
            d: self.d,
            band: self.band(),
            d_squared_zero,
            all_exact: checks.iter().all(|c| c.exact),
            checks,
        })
    }
}
