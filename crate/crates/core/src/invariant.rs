//! Closed invariant forms of level `m`: the kernel of
//! `delta = p_2^* - mu^* + p_1^*` from `omega^1` to `omega^2`, its
//! filtration, scans over the Legendre family and the comparison map to
//! differential forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{valuation, Assignment, BaseRing, PrimeLevel, RingElem, UniversalCoeff};
use crate::complex::{BLComplex, SimplicialShape, SparseVec, UniversalElement};
use crate::error::{Error, Result};
use crate::formal_group::FormalGroupLaw;
use crate::linalg::{
    canonical_form, kernel, smith_valuations, span_length, specialize, vec_is_zero, LinearMapMatrix, Matrix,
    MatrixReport, PresentationSummary,
};
use crate::mpd::Substitution;
use crate::series::TruncPoly;

/// The one-dimensional groups with built-in laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Additive,
    Multiplicative,
    /// Legendre family with symbolic parameter.
    Legendre { param: String },
}

impl GroupSpec {
    pub fn legendre() -> Self {
        GroupSpec::Legendre { param: "lambda".into() }
    }

    pub fn name(&self) -> String {
        match self {
            GroupSpec::Additive => "ga".into(),
            GroupSpec::Multiplicative => "gm".into(),
            GroupSpec::Legendre { param } => format!("legendre({param})"),
        }
    }

    /// Coordinate letter: `t` on `G_a`, `s = t - 1` on `G_m`, `z` on the
    /// elliptic curve.
    pub fn letter(&self) -> &'static str {
        match self {
            GroupSpec::Additive => "t",
            GroupSpec::Multiplicative => "s",
            GroupSpec::Legendre { .. } => "z",
        }
    }

    /// The law over the universal ring to precision `prec`.
    pub fn law(&self, p: u64, prec: u32) -> Result<FormalGroupLaw> {
        let u = BaseRing::universal(p)?;
        match self {
            GroupSpec::Additive => FormalGroupLaw::additive(&u, prec),
            GroupSpec::Multiplicative => FormalGroupLaw::multiplicative(&u, prec),
            GroupSpec::Legendre { param } => FormalGroupLaw::legendre_symbolic(p, param, prec),
        }
    }
}

/// Everything needed to compute `delta` for one group over one ring.
#[derive(Clone, Debug)]
pub struct InvariantSetup {
    pub group: GroupSpec,
    pub pl: PrimeLevel,
    pub ring: BaseRing,
    pub d: u32,
    /// Compute the kernel in the span of the box monomials of `omega^2`
    /// without the comultiplication relations.
    pub naive: bool,
    pub law: FormalGroupLaw,
    pub complex: BLComplex,
}

impl InvariantSetup {
    /// Builds `omega^1 -> omega^2` at truncation `d >= 2 p^m`.
    pub fn new(group: GroupSpec, pl: PrimeLevel, ring: BaseRing, assignment: Assignment, d: u32) -> Result<Self> {
        let need = 2 * pl.pm() as u32;
        if d < need {
            return Err(Error::TruncationTooSmall { have: d, need });
        }
        let law = group.law(pl.p(), d.max(3))?;
        let shape = SimplicialShape::group(law.clone())?.with_letter(group.letter());
        let complex = BLComplex::build(shape, pl, ring.clone(), assignment, d, 2)?;
        Ok(InvariantSetup { group, pl, ring, d, naive: false, law, complex })
    }

    pub fn with_naive(mut self, naive: bool) -> Self {
        self.naive = naive;
        self
    }

    pub fn pm(&self) -> usize {
        self.pl.pm() as usize
    }

    /// Labels `letter^{j}` of the basis of `omega^1`.
    pub fn form_labels(&self) -> Vec<String> {
        (1..=self.pm()).map(|j| format!("{}^{{{j}}}", self.group.letter())).collect()
    }

    /// Renders a vector in the basis of `omega^1`.
    pub fn format_form(&self, ring: &BaseRing, v: &[RingElem]) -> String {
        let labels = self.form_labels();
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(j, c)| format!("{} * {}", ring.format(c), labels[j]))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    fn relation_rows(&self, ring: &BaseRing) -> Result<Vec<Vec<RingElem>>> {
        if self.naive {
            Ok(Vec::new())
        } else {
            self.complex.relation_rows(2, ring)
        }
    }
}

/// `delta(s^{{j}}) = s^{{j}} (x) 1 - F(z_1, z_2)^{{j}} + 1 (x) s^{{j}}` for
/// `j = 1..p^m`, on the universal ring, projected to the box monomials of
/// `omega^2`.
pub fn delta_universal(setup: &InvariantSetup) -> Result<Vec<SparseVec>> {
    let cx = &setup.complex;
    let one = cx.algebra(1)?;
    let two = cx.algebra(2)?;
    let u = &two.ring;
    let var = |i: usize| TruncPoly::var(u, two.nvars(), two.d, i);
    let mu = setup.law.f.compose(u, &[var(0), var(1)])?.truncate(two.d);
    let sub = Substitution::from_lifted(one, two, vec![mu])?;
    let mut out = Vec::with_capacity(setup.pm());
    for j in 1..=setup.pm() as u32 {
        let mut acc: UniversalElement = sub
            .apply_monomial(&one.monomial(&[&[j]]))?
            .into_iter()
            .map(|(m, c)| (m, -&c))
            .collect();
        for outer in [two.monomial(&[&[j], &[0]]), two.monomial(&[&[0], &[j]])] {
            let e = acc.entry(outer).or_insert_with(UniversalCoeff::zero);
            *e = &*e + &UniversalCoeff::one();
        }
        let mut col = SparseVec::new();
        for (m, c) in acc {
            if c.is_zero() {
                continue;
            }
            if two.slot_degree(&m, 0) == 0 || two.slot_degree(&m, 1) == 0 {
                return Err(Error::Inconsistent(format!("degenerate term {} in delta", two.format_monomial(&m))));
            }
            if let Some(k) = cx.index_of(2, &m) {
                col.insert(k, c);
            }
        }
        out.push(col);
    }
    Ok(out)
}

/// `delta` as a labelled matrix over `ring`.
pub fn delta_map_in(setup: &InvariantSetup, ring: &BaseRing) -> Result<LinearMapMatrix> {
    let cols = delta_universal(setup)?;
    let labels2 = setup.complex.labels(2)?;
    let mut mat = Matrix::zeros(ring, labels2.len(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (&i, c) in col {
            mat.set(i, j, ring.reduce(c, &setup.complex.assignment)?);
        }
    }
    LinearMapMatrix::new(mat, labels2, setup.form_labels())
}

/// `delta` over the setup's ring.
pub fn delta_map(setup: &InvariantSetup) -> Result<LinearMapMatrix> {
    delta_map_in(setup, &setup.ring)
}

/// Canonical generators of `{v supported on cols : A v in span(rel)}`,
/// as full-length vectors.
fn composite_kernel(a: &Matrix, rel: &[Vec<RingElem>], cols: &[usize]) -> Result<Vec<Vec<RingElem>>> {
    let ring = &a.ring;
    let width = a.cols();
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let mut m = Matrix::zeros(ring, a.rows(), cols.len() + rel.len());
    for (jj, &j) in cols.iter().enumerate() {
        for i in 0..a.rows() {
            m.set(i, jj, a.get(i, j).clone());
        }
    }
    for (k, row) in rel.iter().enumerate() {
        for (i, x) in row.iter().enumerate() {
            m.set(i, cols.len() + k, x.clone());
        }
    }
    let mut gens = Vec::new();
    for v in kernel(&m)? {
        let mut full = vec![ring.zero(); width];
        for (jj, &j) in cols.iter().enumerate() {
            full[j] = v[jj].clone();
        }
        if !vec_is_zero(ring, &full) {
            gens.push(full);
        }
    }
    canonical_rows(ring, width, gens)
}

fn canonical_rows(ring: &BaseRing, width: usize, gens: Vec<Vec<RingElem>>) -> Result<Vec<Vec<RingElem>>> {
    if gens.is_empty() {
        return Ok(gens);
    }
    let e = canonical_form(&Matrix::from_rows(ring, width, gens)?)?;
    Ok(e.form.row_vecs()[..e.nonzero_rows()].to_vec())
}

#[derive(Clone, Debug, Serialize)]
pub struct FormGenerator {
    /// Coefficients on `letter^{1}, ..., letter^{p^m}`.
    pub coefficients: Vec<String>,
    pub text: String,
    /// Additive order over `Z/p^N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annihilator: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FilStep {
    pub k: u32,
    /// Dimension over a field.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// `log_p` of the cardinality over `Z/p^N`, the dimension over a field.
    pub length: u32,
    /// Smith invariant factors `p^v` of the generator matrix over `Z/p^N`.
    pub invariant_factors: Vec<String>,
    pub generators: Vec<FormGenerator>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub lambda: String,
    pub rank: usize,
    pub supersingular: bool,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NaiveComparison {
    pub presented_length: u32,
    pub naive_length: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantFormsResult {
    pub group: String,
    pub p: u64,
    pub m: u32,
    pub ring: String,
    pub d: u32,
    pub naive: bool,
    pub omega1: PresentationSummary,
    pub omega2: PresentationSummary,
    pub delta: MatrixReport,
    pub generators: Vec<FormGenerator>,
    pub fil: Vec<FilStep>,
    /// The kernel of `delta` equals the kernel of the degree-one
    /// differential of the complex.
    pub kernel_matches_d: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub naive_comparison: Option<NaiveComparison>,
    pub scan: Vec<ScanRow>,
    #[serde(skip)]
    pub work_ring: BaseRing,
    #[serde(skip)]
    pub kernel: Vec<Vec<RingElem>>,
}

impl InvariantFormsResult {
    pub fn fil_step(&self, k: u32) -> Option<&FilStep> {
        self.fil.iter().find(|s| s.k == k)
    }

    pub fn rank(&self) -> Option<usize> {
        self.fil_step(0).and_then(|s| s.rank)
    }
}

fn describe_generators(setup: &InvariantSetup, ring: &BaseRing, gens: &[Vec<RingElem>]) -> Vec<FormGenerator> {
    gens.iter()
        .map(|g| {
            let annihilator = match ring {
                BaseRing::ZmodPN { p, n } => {
                    let v = g.iter().filter_map(|x| ring.valuation(x)).min().unwrap_or(*n);
                    Some(BigInt::from(*p).pow(n - v).to_string())
                }
                _ => None,
            };
            FormGenerator {
                coefficients: g.iter().map(|x| ring.format(x)).collect(),
                text: setup.format_form(ring, g),
                annihilator,
            }
        })
        .collect()
}

fn fil_step(setup: &InvariantSetup, ring: &BaseRing, k: u32, gens: &[Vec<RingElem>]) -> Result<FilStep> {
    let width = setup.pm();
    let (rank, length, invariant_factors) = if gens.is_empty() {
        (ring.is_field().then_some(0), 0, Vec::new())
    } else {
        let m = Matrix::from_rows(ring, width, gens.to_vec())?;
        match ring {
            BaseRing::ZmodPN { p, .. } => {
                let inv = smith_valuations(&m)?.into_iter().map(|v| BigInt::from(*p).pow(v).to_string()).collect();
                (None, span_length(&m)?, inv)
            }
            _ => (Some(gens.len()), gens.len() as u32, Vec::new()),
        }
    };
    Ok(FilStep { k, rank, length, invariant_factors, generators: describe_generators(setup, ring, gens) })
}

/// Kernel generators of `Fil^k omega^1 -> omega^2` over the work ring.
pub fn fil_piece(setup: &InvariantSetup, k: u32) -> Result<Vec<Vec<RingElem>>> {
    let ring = setup.complex.work_ring()?;
    let delta = delta_map_in(setup, &ring)?.matrix;
    let rel = setup.relation_rows(&ring)?;
    let cols: Vec<usize> = (0..setup.pm()).filter(|&j| j + 1 >= k as usize).collect();
    composite_kernel(&delta, &rel, &cols)
}

/// `omega^{(m)}_{G,0}`: kernel, filtration steps `k = 0..p^m` and the
/// cross-check against the complex's own differential.
pub fn closed_invariant_forms(setup: &InvariantSetup) -> Result<InvariantFormsResult> {
    let ring = setup.complex.work_ring()?;
    let delta = delta_map_in(setup, &ring)?;
    let rel = setup.relation_rows(&ring)?;
    let all: Vec<usize> = (0..setup.pm()).collect();
    let kernel_gens = composite_kernel(&delta.matrix, &rel, &all)?;

    let d1 = setup.complex.differential_in(1, &ring)?.matrix;
    let kernel_d = composite_kernel(&d1, &rel, &all)?;
    let kernel_matches_d = kernel_d == kernel_gens;

    let mut fil = Vec::new();
    for k in 0..=setup.pm() as u32 {
        let cols: Vec<usize> = all.iter().copied().filter(|&j| j + 1 >= k as usize).collect();
        let gens = composite_kernel(&delta.matrix, &rel, &cols)?;
        fil.push(fil_step(setup, &ring, k, &gens)?);
    }

    let naive_comparison = if setup.naive {
        None
    } else {
        let naive = composite_kernel(&delta.matrix, &[], &all)?;
        let len = |g: &[Vec<RingElem>]| -> Result<u32> {
            if g.is_empty() {
                Ok(0)
            } else {
                span_length(&Matrix::from_rows(&ring, all.len(), g.to_vec())?)
            }
        };
        let (a, b) = (len(&kernel_gens)?, len(&naive)?);
        (a != b).then_some(NaiveComparison { presented_length: a, naive_length: b })
    };

    Ok(InvariantFormsResult {
        group: setup.group.name(),
        p: setup.pl.p(),
        m: setup.pl.m(),
        ring: setup.ring.to_string(),
        d: setup.d,
        naive: setup.naive,
        omega1: setup.complex.presentation(1)?.summary(),
        omega2: setup.complex.presentation(2)?.summary(),
        delta: delta_map(setup)?.report(),
        generators: describe_generators(setup, &ring, &kernel_gens),
        fil,
        kernel_matches_d,
        naive_comparison,
        scan: Vec::new(),
        work_ring: ring,
        kernel: kernel_gens,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub in_kernel: bool,
    /// Largest `k` with the candidate in `Fil^k`; `None` for zero.
    pub fil_degree: Option<u32>,
}

fn fil_degree_of(ring: &BaseRing, v: &[RingElem]) -> Option<u32> {
    v.iter().position(|x| !ring.is_zero(x)).map(|j| j as u32 + 1)
}

/// Whether `candidate` (over the work ring) is a closed invariant form.
pub fn membership_check(setup: &InvariantSetup, candidate: &[RingElem]) -> Result<Membership> {
    let ring = setup.complex.work_ring()?;
    if candidate.len() != setup.pm() {
        return Err(Error::DimensionMismatch(format!("candidate of length {} for {} forms", candidate.len(), setup.pm())));
    }
    let image = delta_map_in(setup, &ring)?.matrix.apply(candidate)?;
    let in_kernel = if setup.naive {
        vec_is_zero(&ring, &image)
    } else {
        setup.complex.presentation(2)?.is_zero_class(&image)
    };
    Ok(Membership { in_kernel, fil_degree: fil_degree_of(&ring, candidate) })
}

fn scale_sparse(v: &SparseVec, c: &UniversalCoeff) -> SparseVec {
    v.iter().map(|(&k, x)| (k, x * c)).collect()
}

fn sub_sparse(a: &mut SparseVec, b: &SparseVec) {
    for (&k, x) in b {
        let e = a.entry(k).or_insert_with(UniversalCoeff::zero);
        *e = &*e - x;
    }
    a.retain(|_, x| !x.is_zero());
}

fn is_unit_constant(c: &UniversalCoeff, p: u64) -> Option<BigRational> {
    let q = c.as_constant()?;
    if q.is_zero() || valuation(q.numer(), p) > 0 {
        return None;
    }
    Some(q)
}

/// Reduces a vector of `omega^2` on the universal ring modulo the
/// relations, using pivots that are constant `p`-adic units. The result is
/// supported off the pivot columns, so over any quotient of `Z_(p)[params]`
/// it vanishes exactly when the class does.
pub fn reduce_universal(setup: &InvariantSetup, v: &SparseVec) -> Result<SparseVec> {
    let p = setup.pl.p();
    let mut pivots: Vec<(usize, SparseVec)> = Vec::new();
    let eliminate = |x: &mut SparseVec, pivots: &[(usize, SparseVec)]| {
        for (col, row) in pivots {
            if let Some(c) = x.get(col).cloned() {
                sub_sparse(x, &scale_sparse(row, &c));
            }
        }
    };
    if !setup.naive {
        for rel in setup.complex.relations_universal(2)? {
            let mut r = rel.clone();
            eliminate(&mut r, &pivots);
            if r.is_empty() {
                continue;
            }
            let Some((col, unit)) = r.iter().find_map(|(&k, c)| is_unit_constant(c, p).map(|u| (k, u))) else {
                return Err(Error::UnsupportedRing(format!(
                    "relation without a unit pivot on Z_({p}); membership is undecided there"
                )));
            };
            let inv = UniversalCoeff::from_ratio(unit.recip());
            let r = scale_sparse(&r, &inv);
            for (_, other) in pivots.iter_mut() {
                if let Some(c) = other.get(&col).cloned() {
                    sub_sparse(other, &scale_sparse(&r, &c));
                }
            }
            pivots.push((col, r));
        }
    }
    let mut x = v.clone();
    eliminate(&mut x, &pivots);
    Ok(x)
}

/// `delta(candidate)` on the universal ring, reduced modulo relations.
pub fn delta_class_universal(setup: &InvariantSetup, candidate: &[UniversalCoeff]) -> Result<SparseVec> {
    let cols = delta_universal(setup)?;
    if candidate.len() != cols.len() {
        return Err(Error::DimensionMismatch("candidate length".into()));
    }
    let mut acc = SparseVec::new();
    for (c, col) in candidate.iter().zip(&cols) {
        sub_sparse(&mut acc, &scale_sparse(col, &-c));
    }
    reduce_universal(setup, &acc)
}

/// Membership of a form with coefficients in `Z_(p)[params]` after
/// reduction modulo `p^n`, decided on the universal lift.
pub fn membership_universal(setup: &InvariantSetup, candidate: &[UniversalCoeff], n: u32) -> Result<Membership> {
    let p = setup.pl.p();
    let vanishes = |c: &UniversalCoeff| c.terms().all(|(_, q)| q.is_zero() || valuation(q.numer(), p) >= n);
    for c in candidate {
        c.assert_integral(p)?;
    }
    let residual = delta_class_universal(setup, candidate)?;
    let in_kernel = residual.values().all(vanishes);
    let fil_degree = candidate.iter().position(|c| !vanishes(c)).map(|j| j as u32 + 1);
    Ok(Membership { in_kernel, fil_degree })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub p: u64,
    pub m: u32,
    pub ext: u32,
    pub generic_rank: usize,
    pub generic_generators: Vec<String>,
    pub points: Vec<ScanRow>,
}

impl ScanResult {
    pub fn supersingular(&self) -> Vec<&ScanRow> {
        self.points.iter().filter(|r| r.supersingular).collect()
    }
}

/// Rank of the closed invariant forms of the Legendre family over
/// `F_p(lambda)` and at every `lambda` in `F_{p^e}` other than 0 and 1.
pub fn rank_scan(pl: PrimeLevel, ext: u32, d: u32) -> Result<ScanResult> {
    let p = pl.p();
    if p == 2 {
        return Err(Error::InvalidArgument("the Legendre family needs p != 2".into()));
    }
    let group = GroupSpec::legendre();
    let poly = BaseRing::poly(p, "lambda")?;
    let setup = InvariantSetup::new(group, pl, poly.clone(), Assignment::new(), d)?;
    let generic = closed_invariant_forms(&setup)?;
    let generic_rank = generic.kernel.len();

    let delta = delta_map_in(&setup, &poly)?.matrix;
    let rel = setup.complex.relation_rows(2, &poly)?;
    let rel_matrix = if rel.is_empty() { None } else { Some(Matrix::from_rows(&poly, delta.rows(), rel)?) };
    let field = BaseRing::galois_field(p, ext)?;
    let points: Vec<RingElem> = field
        .elements()?
        .into_iter()
        .filter(|x| !field.is_zero(x) && !field.is_one(x))
        .collect();
    let all: Vec<usize> = (0..setup.pm()).collect();
    let points = points
        .par_iter()
        .map(|at| {
            let a = specialize(&delta, &field, at)?;
            let r = match &rel_matrix {
                Some(m) => specialize(m, &field, at)?.row_vecs().to_vec(),
                None => Vec::new(),
            };
            let gens = composite_kernel(&a, &r, &all)?;
            Ok(ScanRow {
                lambda: field.format(at),
                rank: gens.len(),
                supersingular: gens.len() > generic_rank,
                generators: gens.iter().map(|g| setup.format_form(&field, g)).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult {
        p,
        m: pl.m(),
        ext,
        generic_rank,
        generic_generators: generic.generators.iter().map(|g| g.text.clone()).collect(),
        points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NuEntry {
    pub form: String,
    /// Power of `t` in the coefficient.
    pub t_exponent: i64,
    /// Level-`m` power `(dt)^{j}`.
    pub dt_power: u32,
    pub image: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NuTerm {
    pub coeff: String,
    pub t_exponent: i64,
    pub dt_power: u32,
}

/// Image of the basis of `omega^1` in the global forms of level `m` on the
/// group, under pullback by the difference map.
///
/// On `G_a` the difference map is `t -> 1 (x) t - t (x) 1`, so
/// `t^{{j}} -> (dt)^{j}`. On `G_m` it is `t -> t^{-1} (x) t`, so
/// `s -> t^{-1} dt` and `s^{{j}} -> t^{-j} (dt)^{j}`.
pub fn nu_map(group: &GroupSpec, pl: PrimeLevel) -> Result<Vec<NuEntry>> {
    let t_exp: fn(u32) -> i64 = match group {
        GroupSpec::Additive => |_| 0,
        GroupSpec::Multiplicative => |j| -i64::from(j),
        GroupSpec::Legendre { .. } => {
            return Err(Error::UnsupportedKind("the comparison map is only tabulated for ga and gm".into()))
        }
    };
    Ok((1..=pl.pm() as u32)
        .map(|j| {
            let e = t_exp(j);
            let image = if e == 0 { format!("(dt)^{{{j}}}") } else { format!("t^{e} * (dt)^{{{j}}}") };
            NuEntry { form: format!("{}^{{{j}}}", group.letter()), t_exponent: e, dt_power: j, image }
        })
        .collect())
}

/// Image of a combination of basis forms under [`nu_map`].
pub fn nu_image(group: &GroupSpec, pl: PrimeLevel, ring: &BaseRing, v: &[RingElem]) -> Result<Vec<NuTerm>> {
    let table = nu_map(group, pl)?;
    Ok(v.iter()
        .zip(&table)
        .filter(|(c, _)| !ring.is_zero(c))
        .map(|(c, e)| NuTerm { coeff: ring.format(c), t_exponent: e.t_exponent, dt_power: e.dt_power })
        .collect())
}

/// `p^m sum_{i=1}^{p^m} (-1)^{i+1} s^i / i` in the basis `s^{{i}}`:
/// the coefficient of `s^{{i}}` is `p^m (-1)^{i+1} q_i! / i`.
pub fn signed_log_element(pl: PrimeLevel) -> Vec<UniversalCoeff> {
    (1..=pl.pm())
        .map(|i| {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let q = BigRational::new(BigInt::from(sign) * BigInt::from(pl.pm()) * pl.q_factorial(i), BigInt::from(i));
            UniversalCoeff::from_ratio(q)
        })
        .collect()
}

/// Same with every sign positive.
pub fn unsigned_log_element(pl: PrimeLevel) -> Vec<UniversalCoeff> {
    signed_log_element(pl)
        .into_iter()
        .map(|c| UniversalCoeff::from_ratio(c.as_constant().unwrap_or_else(BigRational::zero).abs()))
        .collect()
}
