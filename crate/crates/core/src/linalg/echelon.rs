//! Canonical row forms, kernels, membership and Smith invariants.
//!
//! Residue rings `Z/p^N` (and prime fields, as the case `N = 1`) use a
//! Howell form computed on machine integers. Other fields use a reduced row
//! echelon form on generic ring elements. `F_p[x]` is handled through its
//! fraction field, with output rows rescaled to primitive polynomial rows.

use crate::arith::{BaseRing, FpPoly, RingElem};
use crate::error::{Error, Result};

use super::matrix::{vec_is_zero, Matrix};

/// Pivot of a canonical form: column and, over `Z/p^N`, the valuation of
/// the pivot entry (which is exactly `p^val`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub col: usize,
    pub val: u32,
}

/// Output of [`canonical_form`]: `transform * M = form`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub form: Matrix,
    pub transform: Matrix,
    /// One pivot per nonzero row of `form`, in row order.
    pub pivots: Vec<Pivot>,
}

impl Echelon {
    pub fn nonzero_rows(&self) -> usize {
        self.pivots.len()
    }
}

#[derive(Clone, Copy)]
struct Zpn {
    p: u64,
    n: u32,
    q: u64,
}

impl Zpn {
    fn of(ring: &BaseRing) -> Option<Zpn> {
        match ring {
            BaseRing::ZmodPN { p, n } => Some(Zpn { p: *p, n: *n, q: p.pow(*n) }),
            BaseRing::PrimeField { p } => Some(Zpn { p: *p, n: 1, q: *p }),
            _ => None,
        }
    }

    fn val(&self, x: u64) -> u32 {
        let mut v = 0;
        let mut x = x;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    fn inv(&self, a: u64) -> u64 {
        let (mut r0, mut r1) = (self.q as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        debug_assert_eq!(r0, 1);
        s0.rem_euclid(self.q as i128) as u64
    }

    /// `row -= c * other`.
    fn axpy(&self, row: &mut [u64], c: u64, other: &[u64]) {
        if c == 0 {
            return;
        }
        for (x, &y) in row.iter_mut().zip(other) {
            if y != 0 {
                *x = self.sub(*x, self.mul(c, y));
            }
        }
    }

    fn scale(&self, row: &mut [u64], c: u64) {
        for x in row.iter_mut() {
            *x = self.mul(*x, c);
        }
    }
}

fn to_u64(m: &Matrix) -> Vec<Vec<u64>> {
    m.row_vecs()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| match x {
                    RingElem::Int(v) => *v,
                    _ => unreachable!("residue ring entries are integers"),
                })
                .collect()
        })
        .collect()
}

fn from_u64(ring: &BaseRing, cols: usize, rows: Vec<Vec<u64>>) -> Matrix {
    Matrix::from_rows(ring, cols, rows.into_iter().map(|r| r.into_iter().map(RingElem::Int).collect()).collect())
        .expect("rectangular")
}

struct RawForm<T> {
    form: Vec<Vec<T>>,
    transform: Vec<Vec<T>>,
    pivots: Vec<Pivot>,
}

/// Howell form over `Z/p^N`. With `N = 1` this is the reduced row echelon
/// form over `F_p`.
fn howell(z: Zpn, rows: Vec<Vec<u64>>, cols: usize) -> RawForm<u64> {
    let nrows = rows.len();
    let mut work: Vec<(Vec<u64>, Vec<u64>)> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let mut t = vec![0; nrows];
            t[i] = 1;
            (r, t)
        })
        .filter(|(r, _)| r.iter().any(|&x| x != 0))
        .collect();
    let mut out: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..cols {
        let best = work
            .iter()
            .enumerate()
            .filter(|(_, (r, _))| r[c] != 0)
            .min_by_key(|(i, (r, _))| (z.val(r[c]), *i))
            .map(|(i, _)| i);
        let Some(idx) = best else { continue };
        let (mut row, mut tr) = work.remove(idx);
        let v = z.val(row[c]);
        let pv = z.p.pow(v);
        let unit_inv = z.inv(row[c] / pv);
        z.scale(&mut row, unit_inv);
        z.scale(&mut tr, unit_inv);
        for (w, wt) in work.iter_mut() {
            if w[c] != 0 {
                let q = w[c] / pv;
                z.axpy(w, q, &row);
                z.axpy(wt, q, &tr);
            }
        }
        work.retain(|(r, _)| r.iter().any(|&x| x != 0));
        if v > 0 {
            let s = z.p.pow(z.n - v);
            let mut extra = row.clone();
            let mut extra_t = tr.clone();
            z.scale(&mut extra, s);
            z.scale(&mut extra_t, s);
            if extra.iter().any(|&x| x != 0) {
                work.push((extra, extra_t));
            }
        }
        pivots.push(Pivot { col: c, val: v });
        out.push((row, tr));
    }
    // Reduce entries above each pivot modulo the pivot.
    for i in 0..out.len() {
        let Pivot { col, val } = pivots[i];
        let pv = z.p.pow(val);
        let (pivot_row, pivot_t) = out[i].clone();
        for j in 0..i {
            let q = out[j].0[col] / pv;
            if q != 0 {
                z.axpy(&mut out[j].0, q, &pivot_row);
                z.axpy(&mut out[j].1, q, &pivot_t);
            }
        }
    }
    let (form, transform) = out.into_iter().unzip();
    RawForm { form, transform, pivots }
}

/// Reduced row echelon form over a field, on generic elements.
fn rref(ring: &BaseRing, rows: Vec<Vec<RingElem>>, cols: usize) -> Result<RawForm<RingElem>> {
    let nrows = rows.len();
    let mut work: Vec<(Vec<RingElem>, Vec<RingElem>)> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let mut t = vec![ring.zero(); nrows];
            t[i] = ring.one();
            (r, t)
        })
        .collect();
    let axpy = |row: &mut Vec<RingElem>, c: &RingElem, other: &[RingElem]| {
        for (x, y) in row.iter_mut().zip(other) {
            if !ring.is_zero(y) {
                *x = ring.sub(x, &ring.mul(c, y));
            }
        }
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(idx) = (r..work.len()).find(|&i| !ring.is_zero(&work[i].0[c])) else { continue };
        work.swap(r, idx);
        let inv = ring.try_inv(&work[r].0[c])?;
        let (row, tr) = &mut work[r];
        for x in row.iter_mut().chain(tr.iter_mut()) {
            *x = ring.mul(x, &inv);
        }
        let (pivot_row, pivot_t) = work[r].clone();
        for (i, (w, wt)) in work.iter_mut().enumerate() {
            if i != r && !ring.is_zero(&w[c]) {
                let f = w[c].clone();
                axpy(w, &f, &pivot_row);
                axpy(wt, &f, &pivot_t);
            }
        }
        pivots.push(Pivot { col: c, val: 0 });
        r += 1;
    }
    work.truncate(r);
    let (form, transform) = work.into_iter().unzip();
    Ok(RawForm { form, transform, pivots })
}

fn assemble(ring: &BaseRing, rows: usize, cols: usize, raw_form: Vec<Vec<RingElem>>, raw_t: Vec<Vec<RingElem>>) -> (Matrix, Matrix) {
    let k = raw_form.len();
    let total = rows.max(k);
    let mut form = raw_form;
    let mut transform = raw_t;
    form.resize(total, vec![ring.zero(); cols]);
    transform.resize(total, vec![ring.zero(); rows]);
    (
        Matrix::from_rows(ring, cols, form).expect("rectangular"),
        Matrix::from_rows(ring, rows, transform).expect("rectangular"),
    )
}

/// Clears denominators of a row over `F_p(x)`, divides out the content and
/// makes the first nonzero entry monic. Returns the row over `F_p[x]` and
/// the scalar (in `F_p(x)`) it was multiplied by.
fn primitive_row(frac: &BaseRing, row: &[RingElem]) -> (Vec<RingElem>, RingElem) {
    let p = frac.p();
    let mut lcm = FpPoly::one();
    for x in row {
        if let RingElem::Frac(_, d) = x {
            let g = lcm.gcd(d, p);
            lcm = lcm.mul(d, p).divrem(&g, p).0;
        }
    }
    let mut nums: Vec<FpPoly> = row
        .iter()
        .map(|x| match x {
            RingElem::Frac(n, d) => n.mul(&lcm.divrem(d, p).0, p),
            _ => unreachable!("fraction field entries"),
        })
        .collect();
    let content = nums.iter().fold(FpPoly::zero(), |g, x| g.gcd(x, p));
    if content.is_zero() {
        return (nums.into_iter().map(RingElem::Poly).collect(), frac.one());
    }
    let lead = nums.iter().find(|x| !x.is_zero()).map(|x| x.divrem(&content, p).0.lead()).unwrap();
    let unit = crate::arith::FpPoly::constant(lead, p);
    let divisor = content.mul(&unit, p);
    for x in nums.iter_mut() {
        *x = x.divrem(&divisor, p).0;
    }
    // scalar = lcm / divisor
    let scalar = frac.mul(&RingElem::Frac(lcm, FpPoly::one()), &frac.try_inv(&RingElem::Frac(divisor, FpPoly::one())).unwrap());
    (nums.into_iter().map(RingElem::Poly).collect(), scalar)
}

/// Canonical row form with transform.
///
/// Over fields this is the reduced row echelon form; over `Z/p^N` the
/// Howell form; over `F_p[x]` the echelon form over `F_p(x)` with each row
/// scaled to a primitive polynomial row (the transform is then returned
/// over `F_p(x)`). Zero rows are appended so that the form has at least as
/// many rows as the input.
pub fn canonical_form(m: &Matrix) -> Result<Echelon> {
    let ring = &m.ring;
    if let Some(z) = Zpn::of(ring) {
        let raw = howell(z, to_u64(m), m.cols());
        let rows_f: Vec<Vec<RingElem>> = raw.form.into_iter().map(|r| r.into_iter().map(RingElem::Int).collect()).collect();
        let rows_t: Vec<Vec<RingElem>> =
            raw.transform.into_iter().map(|r| r.into_iter().map(RingElem::Int).collect()).collect();
        let (form, transform) = assemble(ring, m.rows(), m.cols(), rows_f, rows_t);
        return Ok(Echelon { form, transform, pivots: raw.pivots });
    }
    match ring {
        BaseRing::GaloisField { .. } | BaseRing::RationalFunctionField { .. } => {
            let raw = rref(ring, m.row_vecs().to_vec(), m.cols())?;
            let (form, transform) = assemble(ring, m.rows(), m.cols(), raw.form, raw.transform);
            Ok(Echelon { form, transform, pivots: raw.pivots })
        }
        BaseRing::PolyOverFp { .. } => {
            let fm = m.to_fraction_field()?;
            let frac = fm.ring.clone();
            let raw = rref(&frac, fm.row_vecs().to_vec(), m.cols())?;
            let mut form = Vec::new();
            let mut transform = Vec::new();
            for (f, t) in raw.form.iter().zip(&raw.transform) {
                let (prim, scalar) = primitive_row(&frac, f);
                form.push(prim);
                transform.push(t.iter().map(|x| frac.mul(x, &scalar)).collect());
            }
            let k = form.len();
            let total = m.rows().max(k);
            form.resize(total, vec![ring.zero(); m.cols()]);
            transform.resize(total, vec![frac.zero(); m.rows()]);
            Ok(Echelon {
                form: Matrix::from_rows(ring, m.cols(), form)?,
                transform: Matrix::from_rows(&frac, m.rows(), transform)?,
                pivots: raw.pivots,
            })
        }
        BaseRing::ZmodPN { .. } | BaseRing::PrimeField { .. } => unreachable!(),
        BaseRing::Universal { .. } => {
            Err(Error::UnsupportedRing(format!("{ring}: reduce to a concrete ring before elimination")))
        }
    }
}

/// Number of pivots; only meaningful over fields and `F_p[x]` (generic rank).
pub fn rank(m: &Matrix) -> Result<usize> {
    if let BaseRing::ZmodPN { n, .. } = m.ring {
        if n > 1 {
            return Err(Error::UnsupportedRing(format!("rank over {}: use span_length", m.ring)));
        }
    }
    Ok(canonical_form(m)?.nonzero_rows())
}

/// Length of the row span: `log_p` of its cardinality over `Z/p^N`, the
/// dimension over a field.
pub fn span_length(m: &Matrix) -> Result<u32> {
    let e = canonical_form(m)?;
    Ok(match m.ring {
        BaseRing::ZmodPN { n, .. } => e.pivots.iter().map(|pv| n - pv.val).sum(),
        _ => e.nonzero_rows() as u32,
    })
}

/// Canonical generators of `{v : M v = 0}`.
pub fn kernel(m: &Matrix) -> Result<Vec<Vec<RingElem>>> {
    let ring = &m.ring;
    match ring {
        BaseRing::ZmodPN { n, .. } if *n > 1 => {
            // Howell form of [M^T | I]: rows with vanishing left block span the kernel.
            let aug = m.transpose().hcat(&Matrix::identity(ring, m.cols()))?;
            let e = canonical_form(&aug)?;
            let k = m.rows();
            Ok(e.form
                .row_vecs()
                .iter()
                .filter(|r| vec_is_zero(ring, &r[..k]) && !vec_is_zero(ring, &r[k..]))
                .map(|r| r[k..].to_vec())
                .collect())
        }
        BaseRing::PolyOverFp { .. } => {
            let fm = m.to_fraction_field()?;
            let frac = fm.ring.clone();
            Ok(kernel(&fm)?.into_iter().map(|v| primitive_row(&frac, &v).0).collect())
        }
        _ => {
            let e = canonical_form(m)?;
            let pivot_cols: Vec<usize> = e.pivots.iter().map(|p| p.col).collect();
            let mut out = Vec::new();
            for f in (0..m.cols()).filter(|c| !pivot_cols.contains(c)) {
                let mut v = vec![ring.zero(); m.cols()];
                v[f] = ring.one();
                for (i, &c) in pivot_cols.iter().enumerate() {
                    v[c] = ring.neg(e.form.get(i, f));
                }
                out.push(v);
            }
            Ok(out)
        }
    }
}

/// Reduces `v` against a canonical form, returning the remainder and the
/// coefficients `c` (one per form row) with `v = c * form + remainder`.
pub fn reduce_against(e: &Echelon, v: &[RingElem]) -> (Vec<RingElem>, Vec<RingElem>) {
    let ring = &e.form.ring;
    let mut rem = v.to_vec();
    let mut coeffs = vec![ring.zero(); e.form.rows()];
    for (i, pv) in e.pivots.iter().enumerate() {
        let x = &rem[pv.col];
        if ring.is_zero(x) {
            continue;
        }
        let pivot = e.form.get(i, pv.col);
        let c = match (ring, x) {
            (BaseRing::ZmodPN { p, .. }, RingElem::Int(a)) => {
                let pv_int = p.pow(pv.val);
                if a % pv_int != 0 {
                    continue;
                }
                RingElem::Int(a / pv_int)
            }
            (BaseRing::PolyOverFp { .. }, _) => {
                // Only exact polynomial quotients keep the remainder polynomial.
                let (RingElem::Poly(a), RingElem::Poly(b)) = (x, pivot) else { continue };
                let (q, r) = a.divrem(b, ring.p());
                if !r.is_zero() {
                    continue;
                }
                RingElem::Poly(q)
            }
            _ => ring.mul(x, &ring.try_inv(pivot).expect("field pivot")),
        };
        for (r, f) in rem.iter_mut().zip(e.form.row(i)) {
            if !ring.is_zero(f) {
                *r = ring.sub(r, &ring.mul(&c, f));
            }
        }
        coeffs[i] = c;
    }
    (rem, coeffs)
}

/// Coordinates of `v` in the span of `gens`, or `None` if it is not a
/// member. Not available over `F_p[x]` (decide over `F_p(x)` instead).
pub fn membership(ring: &BaseRing, v: &[RingElem], gens: &[Vec<RingElem>]) -> Result<Option<Vec<RingElem>>> {
    if matches!(ring, BaseRing::PolyOverFp { .. } | BaseRing::Universal { .. }) {
        return Err(Error::UnsupportedRing(format!("membership over {ring}")));
    }
    let dim = v.len();
    if gens.is_empty() {
        return Ok(vec_is_zero(ring, v).then(Vec::new));
    }
    let g = Matrix::from_rows(ring, dim, gens.to_vec())?;
    let aug = g.hcat(&Matrix::identity(ring, gens.len()))?;
    let e = canonical_form(&aug)?;
    let mut padded = v.to_vec();
    padded.extend(std::iter::repeat_n(ring.zero(), gens.len()));
    let (rem, _) = reduce_against(&e, &padded);
    if !vec_is_zero(ring, &rem[..dim]) {
        return Ok(None);
    }
    Ok(Some(rem[dim..].iter().map(|x| ring.neg(x)).collect()))
}

/// Exponents `v_i` of the Smith invariant factors `p^{v_i}` over `Z/p^N`
/// (nonzero factors only, ascending).
pub fn smith_valuations(m: &Matrix) -> Result<Vec<u32>> {
    let Some(z) = Zpn::of(&m.ring) else {
        return Err(Error::UnsupportedRing(format!("Smith invariants over {}", m.ring)));
    };
    let mut a = to_u64(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut out = Vec::new();
    for k in 0..rows.min(cols) {
        let best = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| (z.val(a[i][j]), i, j));
        let Some((bi, bj)) = best else { break };
        a.swap(k, bi);
        for row in a.iter_mut() {
            row.swap(k, bj);
        }
        let v = z.val(a[k][k]);
        let pv = z.p.pow(v);
        let u = z.inv(a[k][k] / pv);
        z.scale(&mut a[k], u);
        let pivot = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != k && row[k] != 0 {
                let q = row[k] / pv;
                z.axpy(row, q, &pivot);
            }
        }
        for i in 0..rows {
            for j in k + 1..cols {
                a[i][j] = if i == k { 0 } else { a[i][j] };
            }
        }
        out.push(v);
    }
    out.sort();
    Ok(out)
}

/// Helper for callers holding residue vectors as integers.
pub fn matrix_from_u64(ring: &BaseRing, cols: usize, rows: Vec<Vec<u64>>) -> Matrix {
    from_u64(ring, cols, rows)
}
