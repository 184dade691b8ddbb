//! Berthelot–Lieberman complexes of level `m`.
//!
//! A cosimplicial scheme is described by a [`SimplicialShape`]: in
//! cosimplicial degree `r` the truncated m-PD algebra `P(r)` has a fixed
//! number of tensor slots, and the cofaces are ring homomorphisms given by
//! substitution. Three shapes are supported:
//!
//! * `Product`: `X^{r+1}` over affine `n`-space, in the coordinates
//!   `t = x_0` (optional base variables) and `tau_s = x_s - x_{s-1}`;
//! * `ProductShifted`: the shifted complex `X^{r+2}`, whose first slot is the
//!   factor `P(1)` of the linearization;
//! * `Group`: `G^r` for a one-dimensional formal group, with the inner
//!   cofaces given by the group law on adjacent slots.
//!
//! The complex `Omega^r` (or `omega^r`) is presented as the normalized
//! monomials whose slots have degree in `[1, p^m]`, modulo the relations
//! obtained by placing the box part of `d(z^{{J}})`, `|J| > p^m`, on two
//! adjacent slots next to arbitrary box monomials.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Range;

use serde::Serialize;

use crate::arith::{Assignment, BaseRing, PrimeLevel, RingElem, UniversalCoeff};
use crate::error::{Error, Result};
use crate::formal_group::FormalGroupLaw;
use crate::linalg::{
    canonical_form, kernel, quotient_presentation, reduce_against, span_length, vec_is_zero, LinearMapMatrix, Matrix,
    ModulePresentation,
};
use crate::mpd::{mul_const_int, AlgebraContext, MpdMonomial, Substitution};
use crate::series::TruncPoly;

/// Sparse vector over the universal ring, keyed by basis index.
pub type SparseVec = BTreeMap<usize, UniversalCoeff>;

/// Sparse m-PD element over the universal ring.
pub type UniversalElement = BTreeMap<MpdMonomial, UniversalCoeff>;

#[derive(Clone, Debug)]
pub enum ShapeKind {
    Product,
    ProductShifted,
    Group(FormalGroupLaw),
}

#[derive(Clone, Debug)]
pub struct SimplicialShape {
    pub kind: ShapeKind,
    /// Divided variables per slot.
    pub n: usize,
    /// Ordinary coordinate variables (product shape only).
    pub base_vars: usize,
    pub letter: String,
}

fn add_into(acc: &mut UniversalElement, m: MpdMonomial, c: &UniversalCoeff) {
    let entry = acc.entry(m).or_insert_with(UniversalCoeff::zero);
    *entry = &*entry + c;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, UniversalCoeff>) {
    map.retain(|_, c| !c.is_zero());
}

impl SimplicialShape {
    /// The fiber of `X^{r+1}` over the first factor: slots only.
    pub fn product(n: usize) -> Self {
        SimplicialShape { kind: ShapeKind::Product, n, base_vars: 0, letter: "t".into() }
    }

    /// `X^{r+1}` with the coordinates of the first factor kept as ordinary
    /// polynomial variables.
    pub fn product_with_base(n: usize) -> Self {
        SimplicialShape { kind: ShapeKind::Product, n, base_vars: n, letter: "t".into() }
    }

    pub fn product_shifted(n: usize) -> Self {
        SimplicialShape { kind: ShapeKind::ProductShifted, n, base_vars: 0, letter: "t".into() }
    }

    /// Group shape of a one-dimensional law. The law must live on the
    /// universal ring so that every target ring is reached by reduction.
    pub fn group(law: FormalGroupLaw) -> Result<Self> {
        if !matches!(law.ring, BaseRing::Universal { .. }) {
            return Err(Error::UnsupportedRing(format!(
                "group shapes need a law over the universal ring, got {}",
                law.ring
            )));
        }
        Ok(SimplicialShape { kind: ShapeKind::Group(law), n: 1, base_vars: 0, letter: "z".into() })
    }

    pub fn with_letter(mut self, letter: &str) -> Self {
        self.letter = letter.into();
        self
    }

    pub fn name(&self) -> String {
        match &self.kind {
            ShapeKind::Product if self.base_vars > 0 => "product-with-base".into(),
            ShapeKind::Product => "product".into(),
            ShapeKind::ProductShifted => "product-shifted".into(),
            ShapeKind::Group(law) => format!("group({})", law.kind.name()),
        }
    }

    /// Number of tensor slots of `P(r)`.
    pub fn slots(&self, r: usize) -> usize {
        match self.kind {
            ShapeKind::ProductShifted => r + 1,
            _ => r,
        }
    }

    /// Slots that are normalized and bounded by `p^m`.
    pub fn omega_slots(&self, r: usize) -> Range<usize> {
        match self.kind {
            ShapeKind::ProductShifted => 1..r + 1,
            _ => 0..r,
        }
    }

    /// `P(r)` truncated at weight `d`, over the universal ring.
    pub fn algebra(&self, pl: PrimeLevel, r: usize, d: u32) -> Result<AlgebraContext> {
        let u = BaseRing::universal(pl.p())?;
        Ok(AlgebraContext::new(pl, self.n, self.slots(r), d, u)?
            .with_base_vars(self.base_vars)
            .with_letter(&self.letter))
    }

    /// Every monomial of `P(r)` with its filtration degree.
    pub fn build_p(&self, pl: PrimeLevel, r: usize, d: u32) -> Result<Vec<(MpdMonomial, u32)>> {
        let ctx = self.algebra(pl, r, d)?;
        Ok(ctx.basis().into_iter().map(|m| {
            let f = ctx.degree(&m);
            (m, f)
        }).collect())
    }

    pub fn is_normalized(&self, ctx: &AlgebraContext, m: &MpdMonomial) -> bool {
        let r = self.degree_of(ctx);
        self.omega_slots(r).all(|s| ctx.slot_degree(m, s) > 0)
    }

    fn in_box(&self, ctx: &AlgebraContext, m: &MpdMonomial) -> bool {
        let pm = ctx.pl.pm() as u32;
        let r = self.degree_of(ctx);
        self.omega_slots(r).all(|s| ctx.slot_degree(m, s) <= pm)
    }

    fn degree_of(&self, ctx: &AlgebraContext) -> usize {
        match self.kind {
            ShapeKind::ProductShifted => ctx.r - 1,
            _ => ctx.r,
        }
    }

    /// Monomials of `P(r)` with every normalized slot of positive degree.
    pub fn normalize(&self, pl: PrimeLevel, r: usize, d: u32) -> Result<Vec<(MpdMonomial, u32)>> {
        let ctx = self.algebra(pl, r, d)?;
        Ok(self.build_p(pl, r, d)?.into_iter().filter(|(m, _)| self.is_normalized(&ctx, m)).collect())
    }

    fn law(&self) -> Option<&FormalGroupLaw> {
        match &self.kind {
            ShapeKind::Group(law) => Some(law),
            _ => None,
        }
    }

    /// Coface `d_i : P(r) -> P(r+1)`, `0 <= i <= r + 1`.
    pub fn coface(&self, pl: PrimeLevel, d: u32, i: usize, r: usize) -> Result<Substitution> {
        if i > r + 1 {
            return Err(Error::InvalidArgument(format!("coface index {i} in degree {r}")));
        }
        let src = self.algebra(pl, r, d)?;
        let dst = self.algebra(pl, r + 1, d)?;
        let images = match &self.kind {
            ShapeKind::Group(law) => {
                if law.prec < d {
                    return Err(Error::TruncationTooSmall { have: law.prec, need: d });
                }
                group_images(law, &src, &dst, i)?
            }
            ShapeKind::Product => product_images(&src, &dst, i),
            ShapeKind::ProductShifted => product_images(&src, &dst, i + 1),
        };
        Substitution::from_lifted(&src, &dst, images)
    }

    /// Matrix of a coface on the full basis of `P(r)`, over the universal ring.
    pub fn coface_matrix(&self, pl: PrimeLevel, d: u32, i: usize, r: usize) -> Result<LinearMapMatrix> {
        let sub = self.coface(pl, d, i, r)?;
        let src = self.algebra(pl, r, d)?;
        let dst = self.algebra(pl, r + 1, d)?;
        let u = BaseRing::universal(pl.p())?;
        let sb = src.basis();
        let tb = dst.basis();
        let index: HashMap<&MpdMonomial, usize> = tb.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut mat = Matrix::zeros(&u, tb.len(), sb.len());
        for (j, m) in sb.iter().enumerate() {
            for (t, c) in sub.apply_monomial(m)? {
                mat.set(index[&t], j, RingElem::Univ(c));
            }
        }
        LinearMapMatrix::new(
            mat,
            tb.iter().map(|m| dst.format_monomial(m)).collect(),
            sb.iter().map(|m| src.format_monomial(m)).collect(),
        )
    }
}

/// Images of the variables of `src` under the product-type coface with
/// index `i` (on `X^{slots+1}`): outer cofaces shift slots, inner ones
/// send `tau_i` to `tau_i + tau_{i+1}`, and `d_0` moves the base point.
fn product_images(src: &AlgebraContext, dst: &AlgebraContext, i: usize) -> Vec<TruncPoly> {
    let u = &dst.ring;
    let var = |idx: usize| TruncPoly::var(u, dst.nvars(), dst.d, idx);
    let mut out = Vec::with_capacity(src.nvars());
    for s in 0..src.r {
        for j in 0..src.n {
            let img = if i == 0 || s + 1 > i {
                var(dst.index(s + 1, j))
            } else if s + 1 < i {
                var(dst.index(s, j))
            } else {
                var(dst.index(s, j)).add(u, &var(dst.index(s + 1, j)))
            };
            out.push(img);
        }
    }
    for j in 0..src.base_vars {
        let base = var(dst.r * dst.n + j);
        out.push(if i == 0 { base.add(u, &var(dst.index(0, j))) } else { base });
    }
    out
}

fn group_images(law: &FormalGroupLaw, src: &AlgebraContext, dst: &AlgebraContext, i: usize) -> Result<Vec<TruncPoly>> {
    let u = &dst.ring;
    let var = |idx: usize| TruncPoly::var(u, dst.nvars(), dst.d, idx);
    let mut out = Vec::with_capacity(src.nvars());
    for s in 0..src.r {
        let img = if i == 0 || s + 1 > i {
            var(s + 1)
        } else if s + 1 < i {
            var(s)
        } else {
            law.f.compose(u, &[var(s), var(s + 1)])?.truncate(dst.d)
        };
        out.push(img);
    }
    Ok(out)
}

/// One cosimplicial degree of a built complex.
#[derive(Clone, Debug)]
struct Degree {
    ctx: AlgebraContext,
    basis: Vec<MpdMonomial>,
    index: HashMap<MpdMonomial, usize>,
    fil: Vec<u32>,
    relations: Vec<SparseVec>,
}

/// Truncated Berthelot–Lieberman complex in degrees `0..=max_r`, computed
/// on the universal ring and reduced on demand.
#[derive(Clone, Debug)]
pub struct BLComplex {
    pub shape: SimplicialShape,
    pub pl: PrimeLevel,
    pub d: u32,
    pub ring: BaseRing,
    pub assignment: Assignment,
    degrees: Vec<Degree>,
    differentials: Vec<Vec<SparseVec>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FilLength {
    pub k: u32,
    pub length: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeSummary {
    pub r: usize,
    pub generators: usize,
    pub relations: usize,
    pub length: u32,
    pub fil: Vec<FilLength>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexSummary {
    pub shape: String,
    pub p: u64,
    pub m: u32,
    pub n: usize,
    pub ring: String,
    pub d: u32,
    pub degrees: Vec<DegreeSummary>,
}

/// Normalized box part of `d(z^{{J}})` in two slots, for every one-slot
/// `J` with `p^m < |J| <= 2 p^m`, as `((J_1, J_2), coeff)` lists.
type TwoSlotRelation = Vec<((Vec<u32>, Vec<u32>), UniversalCoeff)>;

fn overflow_relations(shape: &SimplicialShape, pl: PrimeLevel) -> Result<Vec<TwoSlotRelation>> {
    let pm = pl.pm() as u32;
    let d = 2 * pm;
    let u = BaseRing::universal(pl.p())?;
    let src = AlgebraContext::new(pl, shape.n, 1, d, u.clone())?;
    let dst = AlgebraContext::new(pl, shape.n, 2, d, u.clone())?;
    let images = match shape.law() {
        Some(law) => group_images(law, &src, &dst, 1)?,
        None => product_images(&src, &dst, 1),
    };
    let sub = Substitution::from_lifted(&src, &dst, images)?;
    let mut out = Vec::new();
    for m in src.basis() {
        if src.degree(&m) <= pm {
            continue;
        }
        let rel: TwoSlotRelation = sub
            .apply_monomial(&m)?
            .into_iter()
            .filter(|(t, _)| (0..2).all(|s| (1..=pm).contains(&dst.slot_degree(t, s))))
            .map(|(t, c)| ((dst.slot(&t, 0).to_vec(), dst.slot(&t, 1).to_vec()), c))
            .collect();
        if !rel.is_empty() {
            out.push(rel);
        }
    }
    Ok(out)
}

impl BLComplex {
    /// Builds degrees `0..=max_r` and the differentials between them.
    ///
    /// The group shape needs `d >= max_r * p^m` so that every box monomial
    /// of the top degree survives truncation; the product shapes are graded
    /// by weight and are exact up to weight `d` for any `d`.
    pub fn build(
        shape: SimplicialShape,
        pl: PrimeLevel,
        ring: BaseRing,
        assignment: Assignment,
        d: u32,
        max_r: usize,
    ) -> Result<Self> {
        if ring.p() != pl.p() {
            return Err(Error::InvalidArgument(format!("ring {ring} does not have residue characteristic {}", pl.p())));
        }
        if let Some(law) = shape.law() {
            let need = (max_r as u32).max(1) * pl.pm() as u32;
            if d < need {
                return Err(Error::TruncationTooSmall { have: d, need });
            }
            if law.prec < d {
                return Err(Error::TruncationTooSmall { have: law.prec, need: d });
            }
        }
        let needs_relations = (0..=max_r).any(|r| shape.omega_slots(r).len() >= 2);
        let overflow = if needs_relations { overflow_relations(&shape, pl)? } else { Vec::new() };
        let mut degrees = Vec::with_capacity(max_r + 1);
        for r in 0..=max_r {
            degrees.push(build_degree(&shape, pl, d, r, &overflow)?);
        }
        let mut cx = BLComplex { shape, pl, d, ring, assignment, degrees, differentials: Vec::new() };
        for r in 0..max_r {
            let subs = (0..=r + 1).map(|i| cx.shape.coface(pl, d, i, r)).collect::<Result<Vec<_>>>()?;
            let cols = (0..cx.degrees[r].basis.len())
                .map(|j| cx.apply_raw(&subs, r, &cx.degrees[r].basis[j]))
                .collect::<Result<Vec<_>>>()?;
            cx.differentials.push(cols);
        }
        Ok(cx)
    }

    /// `sum (-1)^i d_i^*` on one monomial of degree `r`, projected to the
    /// ambient basis of degree `r + 1`.
    fn apply_raw(&self, subs: &[Substitution], r: usize, m: &MpdMonomial) -> Result<SparseVec> {
        let mut acc = UniversalElement::new();
        for (i, sub) in subs.iter().enumerate() {
            for (t, c) in sub.apply_monomial(m)? {
                let c = if i % 2 == 0 { c } else { -&c };
                add_into(&mut acc, t, &c);
            }
        }
        prune(&mut acc);
        let target = &self.degrees[r + 1];
        let mut out = SparseVec::new();
        for (t, c) in acc {
            if !self.shape.is_normalized(&target.ctx, &t) {
                return Err(Error::Inconsistent(format!(
                    "degenerate term {} in the differential of {}",
                    target.ctx.format_monomial(&t),
                    self.degrees[r].ctx.format_monomial(m)
                )));
            }
            if let Some(&k) = target.index.get(&t) {
                out.insert(k, c);
            }
        }
        Ok(out)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len() - 1
    }

    fn degree(&self, r: usize) -> Result<&Degree> {
        self.degrees
            .get(r)
            .ok_or_else(|| Error::InvalidArgument(format!("degree {r} was not built (max {})", self.max_degree())))
    }

    pub fn algebra(&self, r: usize) -> Result<&AlgebraContext> {
        Ok(&self.degree(r)?.ctx)
    }

    pub fn generators(&self, r: usize) -> Result<&[MpdMonomial]> {
        Ok(&self.degree(r)?.basis)
    }

    pub fn index_of(&self, r: usize, m: &MpdMonomial) -> Option<usize> {
        self.degrees.get(r)?.index.get(m).copied()
    }

    pub fn labels(&self, r: usize) -> Result<Vec<String>> {
        let deg = self.degree(r)?;
        Ok(deg.basis.iter().map(|m| deg.ctx.format_monomial(m)).collect())
    }

    pub fn fil(&self, r: usize) -> Result<&[u32]> {
        Ok(&self.degree(r)?.fil)
    }

    pub fn relations_universal(&self, r: usize) -> Result<&[SparseVec]> {
        Ok(&self.degree(r)?.relations)
    }

    /// Columns of `d_r` on the universal ring, one per generator of degree `r`.
    pub fn differential_universal(&self, r: usize) -> Result<&[SparseVec]> {
        self.differentials
            .get(r)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::InvalidArgument(format!("no differential out of degree {r}")))
    }

    /// Ring used for presentations: the fraction field when `ring` is a
    /// polynomial ring.
    pub fn work_ring(&self) -> Result<BaseRing> {
        match &self.ring {
            BaseRing::PolyOverFp { p, param } => BaseRing::rational(*p, param),
            r => Ok(r.clone()),
        }
    }

    pub fn dense(&self, ring: &BaseRing, dim: usize, v: &SparseVec) -> Result<Vec<RingElem>> {
        let mut out = vec![ring.zero(); dim];
        for (&k, c) in v {
            out[k] = ring.reduce(c, &self.assignment)?;
        }
        Ok(out)
    }

    pub fn relation_rows(&self, r: usize, ring: &BaseRing) -> Result<Vec<Vec<RingElem>>> {
        let deg = self.degree(r)?;
        deg.relations.iter().map(|v| self.dense(ring, deg.basis.len(), v)).collect()
    }

    /// `Omega^r` (or `omega^r`) as a finitely presented module over
    /// [`BLComplex::work_ring`].
    pub fn presentation(&self, r: usize) -> Result<ModulePresentation> {
        let ring = self.work_ring()?;
        let deg = self.degree(r)?;
        quotient_presentation(&ring, self.labels(r)?, self.relation_rows(r, &ring)?, deg.fil.clone())
    }

    /// `d_r` reduced into `ring`.
    pub fn differential_in(&self, r: usize, ring: &BaseRing) -> Result<LinearMapMatrix> {
        let cols = self.differential_universal(r)?;
        let rows = self.degree(r + 1)?.basis.len();
        let mut mat = Matrix::zeros(ring, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (&i, c) in col {
                mat.set(i, j, ring.reduce(c, &self.assignment)?);
            }
        }
        LinearMapMatrix::new(mat, self.labels(r + 1)?, self.labels(r)?)
    }

    /// `d_r` over the complex's ring.
    pub fn differential(&self, r: usize) -> Result<LinearMapMatrix> {
        self.differential_in(r, &self.ring)
    }

    /// Indices of the generators spanning `Fil^k` in degree `r`.
    pub fn hodge_fil(&self, r: usize, k: u32) -> Result<Vec<usize>> {
        let deg = self.degree(r)?;
        Ok((0..deg.basis.len()).filter(|&i| deg.fil[i] >= k).collect())
    }

    /// Length of `Fil^k` of the degree-`r` module.
    pub fn fil_length(&self, r: usize, k: u32) -> Result<u32> {
        let ring = self.work_ring()?;
        let deg = self.degree(r)?;
        let dim = deg.basis.len();
        let rel = self.relation_rows(r, &ring)?;
        let mut rows = rel.clone();
        for i in self.hodge_fil(r, k)? {
            let mut e = vec![ring.zero(); dim];
            e[i] = ring.one();
            rows.push(e);
        }
        let whole = span_length(&Matrix::from_rows(&ring, dim, rows)?)?;
        let base = span_length(&Matrix::from_rows(&ring, dim, rel)?)?;
        Ok(whole - base)
    }

    /// Image of `1` in degree 0 for the product shapes.
    pub fn augmentation(&self) -> Option<SparseVec> {
        match self.shape.kind {
            ShapeKind::Group(_) => None,
            _ => {
                let deg = &self.degrees[0];
                let k = deg.index[&deg.ctx.unit()];
                Some(SparseVec::from([(k, UniversalCoeff::one())]))
            }
        }
    }

    /// Whether `d_{r+1} d_r` vanishes on the presented modules.
    pub fn check_d_squared(&self, r: usize) -> Result<bool> {
        let ring = self.work_ring()?;
        let a = self.differential_in(r, &ring)?.matrix;
        let b = self.differential_in(r + 1, &ring)?.matrix;
        let prod = b.mul(&a)?;
        let target = self.presentation(r + 2)?;
        Ok((0..prod.cols()).all(|j| target.is_zero_class(&prod.column(j))))
    }

    /// Whether `d_r` maps the relations of degree `r` (including the
    /// normalized monomials outside the box) into the relations of degree
    /// `r + 1`.
    pub fn check_descent(&self, r: usize) -> Result<bool> {
        let ring = self.work_ring()?;
        let target = self.presentation(r + 1)?;
        let dmat = self.differential_in(r, &ring)?.matrix;
        for row in self.relation_rows(r, &ring)? {
            if !target.is_zero_class(&dmat.apply(&row)?) {
                return Ok(false);
            }
        }
        let subs = (0..=r + 1).map(|i| self.shape.coface(self.pl, self.d, i, r)).collect::<Result<Vec<_>>>()?;
        let deg = self.degree(r)?;
        for (m, _) in self.shape.normalize(self.pl, r, self.d)? {
            if deg.index.contains_key(&m) {
                continue;
            }
            let img = self.apply_raw(&subs, r, &m)?;
            let v = self.dense(&ring, target.dim(), &img)?;
            if !target.is_zero_class(&v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn summary(&self) -> Result<ComplexSummary> {
        let mut degrees = Vec::new();
        for r in 0..=self.max_degree() {
            let pres = self.presentation(r)?;
            let top = self.degrees[r].fil.iter().copied().max().unwrap_or(0);
            let fil = (0..=top + 1).map(|k| Ok(FilLength { k, length: self.fil_length(r, k)? })).collect::<Result<_>>()?;
            degrees.push(DegreeSummary {
                r,
                generators: pres.dim(),
                relations: pres.relation_count(),
                length: pres.length(),
                fil,
            });
        }
        Ok(ComplexSummary {
            shape: self.shape.name(),
            p: self.pl.p(),
            m: self.pl.m(),
            n: self.shape.n,
            ring: self.ring.to_string(),
            d: self.d,
            degrees,
        })
    }

    /// The degree-`r` module of the shifted complex as a module over the
    /// first factor `P(1)`, with the given filtration.
    pub fn filtered_module(&self, r: usize, filtration: ModuleFiltration) -> Result<FilteredModule> {
        if !matches!(self.shape.kind, ShapeKind::ProductShifted) {
            return Err(Error::InvalidArgument("the P(1)-module structure needs the shifted shape".into()));
        }
        let ring = self.work_ring()?;
        let presentation = self.presentation(r)?;
        let deg = self.degree(r)?;
        let ctx = &deg.ctx;
        let n = ctx.n;
        let ideal_degree: Vec<u32> = deg.basis.iter().map(|m| ctx.slot_degree(m, 0)).collect();
        let one_slot = AlgebraContext::new(self.pl, n, 1, self.d, ctx.ring.clone())?;
        let mut actions = Vec::new();
        for mult in one_slot.basis() {
            let deg_i = one_slot.degree(&mult);
            if deg_i == 0 {
                continue;
            }
            let mut mat = Matrix::zeros(&ring, deg.basis.len(), deg.basis.len());
            for (j, g) in deg.basis.iter().enumerate() {
                let mut e = g.0.clone();
                let mut c = num_bigint::BigInt::from(1);
                for v in 0..n {
                    c *= mul_const_int(mult.0[v] as u64, e[v] as u64, &self.pl);
                    e[v] += mult.0[v];
                }
                if let Some(&i) = deg.index.get(&MpdMonomial(e)) {
                    mat.set(i, j, ring.from_bigint(&c));
                }
            }
            actions.push(IdealAction { degree: deg_i, label: one_slot.format_monomial(&mult), matrix: mat });
        }
        FilteredModule::new(presentation, filtration, ideal_degree, actions)
    }
}

fn build_degree(
    shape: &SimplicialShape,
    pl: PrimeLevel,
    d: u32,
    r: usize,
    overflow: &[TwoSlotRelation],
) -> Result<Degree> {
    let ctx = shape.algebra(pl, r, d)?;
    let basis: Vec<MpdMonomial> = ctx
        .basis()
        .into_iter()
        .filter(|m| shape.is_normalized(&ctx, m) && shape.in_box(&ctx, m))
        .collect();
    let index: HashMap<MpdMonomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let fil = basis.iter().map(|m| ctx.degree(m)).collect();
    let omega = shape.omega_slots(r);
    let n = ctx.n;
    let mut relations = Vec::new();
    if omega.len() >= 2 && !overflow.is_empty() {
        let mut frames = BTreeSet::new();
        for m in &basis {
            for k in omega.start..omega.end - 1 {
                let mut f = m.0.clone();
                for v in 0..2 * n {
                    f[k * n + v] = 0;
                }
                frames.insert((k, f));
            }
        }
        for (k, frame) in &frames {
            for rel in overflow {
                let mut row = SparseVec::new();
                let mut dropped = false;
                for ((a, b), c) in rel {
                    let mut e = frame.clone();
                    e[k * n..(k + 1) * n].copy_from_slice(a);
                    e[(k + 1) * n..(k + 2) * n].copy_from_slice(b);
                    let t = MpdMonomial(e);
                    match index.get(&t) {
                        Some(&i) => {
                            row.insert(i, c.clone());
                        }
                        None if ctx.weight(&t) > d => dropped = true,
                        None => {
                            return Err(Error::Inconsistent(format!(
                                "relation term {} is not a generator",
                                ctx.format_monomial(&t)
                            )))
                        }
                    }
                }
                if dropped && !row.is_empty() {
                    return Err(Error::TruncationTooSmall { have: d, need: d + 1 });
                }
                if !row.is_empty() {
                    relations.push(row);
                }
            }
        }
    }
    Ok(Degree { ctx, basis, index, fil, relations })
}

/// Ideal filtration of the coefficient ring `P(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealFiltration {
    /// `I^{(k)} = 0` for `k >= 1`.
    Zero,
    /// `I^{(k)} = I^{{k}}`: the span of `tau^{{I}}` with `|I| >= k`.
    MpdPowers,
}

/// Filtration on a [`FilteredModule`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleFiltration {
    /// `Fil^k` spanned by generators of degree at least `k`.
    Degree(Vec<u32>),
    /// `M` for `k <= 0`, zero above.
    Trivial,
    /// `M` for `k <= 0`, `I^{(k)} M` above.
    TrivialTransversal,
}

/// Multiplication by one monomial of the ideal, on generators.
#[derive(Clone, Debug)]
pub struct IdealAction {
    pub degree: u32,
    pub label: String,
    pub matrix: Matrix,
}

/// Finitely presented module over `P(1)` with a filtration.
#[derive(Clone, Debug)]
pub struct FilteredModule {
    pub presentation: ModulePresentation,
    pub filtration: ModuleFiltration,
    /// Degree in the ideal direction of each generator: generator `g` lies
    /// in `I^{(i)} M` for `i <= ideal_degree[g]`.
    pub ideal_degree: Vec<u32>,
    pub actions: Vec<IdealAction>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransversalityReport {
    pub ideal: IdealFiltration,
    pub transversal: bool,
    pub almost_transversal: bool,
    pub checked: Vec<i64>,
    pub failing_k: Option<i64>,
    /// First element of `I^{(1)} M ∩ Fil^k M` outside the sum, or of the
    /// sum outside the intersection.
    pub witness: Option<String>,
}

impl FilteredModule {
    pub fn new(
        presentation: ModulePresentation,
        filtration: ModuleFiltration,
        ideal_degree: Vec<u32>,
        actions: Vec<IdealAction>,
    ) -> Result<Self> {
        let dim = presentation.dim();
        if ideal_degree.len() != dim {
            return Err(Error::DimensionMismatch("one ideal degree per generator".into()));
        }
        if let ModuleFiltration::Degree(f) = &filtration {
            if f.len() != dim {
                return Err(Error::DimensionMismatch("one filtration degree per generator".into()));
            }
        }
        if actions.iter().any(|a| a.matrix.rows() != dim || a.matrix.cols() != dim) {
            return Err(Error::DimensionMismatch("action matrices must be square on the generators".into()));
        }
        Ok(FilteredModule { presentation, filtration, ideal_degree, actions })
    }

    pub fn with_filtration(&self, filtration: ModuleFiltration) -> Result<Self> {
        Self::new(self.presentation.clone(), filtration, self.ideal_degree.clone(), self.actions.clone())
    }

    fn ring(&self) -> &BaseRing {
        &self.presentation.ring
    }

    fn unit(&self, i: usize) -> Vec<RingElem> {
        let ring = self.ring();
        let mut e = vec![ring.zero(); self.presentation.dim()];
        e[i] = ring.one();
        e
    }

    /// Generators of `Fil^k M` (before adding relations).
    pub fn fil_generators(&self, k: i64) -> Vec<Vec<RingElem>> {
        let dim = self.presentation.dim();
        let pick = |keep: &dyn Fn(usize) -> bool| (0..dim).filter(|&i| keep(i)).map(|i| self.unit(i)).collect();
        if k <= 0 {
            return pick(&|_| true);
        }
        match &self.filtration {
            ModuleFiltration::Degree(f) => pick(&|i| i64::from(f[i]) >= k),
            ModuleFiltration::Trivial => Vec::new(),
            ModuleFiltration::TrivialTransversal => pick(&|i| i64::from(self.ideal_degree[i]) >= k),
        }
    }

    /// Generators of `I^{(i)} M`.
    pub fn ideal_generators(&self, ideal: IdealFiltration, i: i64) -> Vec<Vec<RingElem>> {
        let dim = self.presentation.dim();
        match ideal {
            _ if i <= 0 => (0..dim).map(|g| self.unit(g)).collect(),
            IdealFiltration::Zero => Vec::new(),
            IdealFiltration::MpdPowers => {
                (0..dim).filter(|&g| i64::from(self.ideal_degree[g]) >= i).map(|g| self.unit(g)).collect()
            }
        }
    }

    fn max_degree(&self) -> i64 {
        let f = match &self.filtration {
            ModuleFiltration::Degree(f) => f.iter().copied().max().unwrap_or(0),
            _ => 0,
        };
        i64::from(f.max(self.ideal_degree.iter().copied().max().unwrap_or(0)))
    }

    fn format(&self, v: &[RingElem]) -> String {
        let ring = self.ring();
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(i, c)| format!("{} * {}", ring.format(c), self.presentation.generators[i]))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Elements of `(span a + R) ∩ (span b + R)`, as combinations of `a`.
fn intersection(ring: &BaseRing, dim: usize, a: &[Vec<RingElem>], b: &[Vec<RingElem>], rel: &[Vec<RingElem>]) -> Result<Vec<Vec<RingElem>>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let cols: Vec<&Vec<RingElem>> = a.iter().chain(b).chain(rel).collect();
    let mut m = Matrix::zeros(ring, dim, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    let mut out = Vec::new();
    for v in kernel(&m)? {
        let mut x = vec![ring.zero(); dim];
        for (coef, gen) in v.iter().zip(a) {
            if ring.is_zero(coef) {
                continue;
            }
            for (xi, gi) in x.iter_mut().zip(gen) {
                *xi = ring.add(xi, &ring.mul(coef, gi));
            }
        }
        if !vec_is_zero(ring, &x) {
            out.push(x);
        }
    }
    Ok(out)
}

fn span_contains(ring: &BaseRing, dim: usize, gens: &[Vec<RingElem>], v: &[RingElem]) -> Result<bool> {
    if gens.is_empty() {
        return Ok(vec_is_zero(ring, v));
    }
    let e = canonical_form(&Matrix::from_rows(ring, dim, gens.to_vec())?)?;
    Ok(vec_is_zero(ring, &reduce_against(&e, v).0))
}

/// Compares `I^{(1)} M ∩ Fil^k M` with `sum_{i >= 1} I^{(i)} Fil^{k-i} M`
/// for every `k` from 0 to one past the top degree.
pub fn transversality_check(module: &FilteredModule, ideal: IdealFiltration) -> Result<TransversalityReport> {
    let ring = module.ring().clone();
    let dim = module.presentation.dim();
    let rel = module.presentation.relations();
    let top = module.max_degree() + 1;
    let with_rel = |mut v: Vec<Vec<RingElem>>| {
        v.extend(rel.iter().cloned());
        v
    };
    let i1 = module.ideal_generators(ideal, 1);
    let i1_span = with_rel(i1.clone());
    let mut report = TransversalityReport {
        ideal,
        transversal: true,
        almost_transversal: true,
        checked: Vec::new(),
        failing_k: None,
        witness: None,
    };
    for k in 0..=top {
        report.checked.push(k);
        let fil = module.fil_generators(k);
        let lhs = intersection(&ring, dim, &i1, &fil, &rel)?;
        let mut rhs = Vec::new();
        if ideal == IdealFiltration::MpdPowers {
            for act in &module.actions {
                for b in module.fil_generators(k - i64::from(act.degree)) {
                    let img = act.matrix.apply(&b)?;
                    if !vec_is_zero(&ring, &img) {
                        rhs.push(img);
                    }
                }
            }
        }
        let rhs_span = with_rel(rhs.clone());
        let rhs_e = canonical_form(&Matrix::from_rows(&ring, dim, rhs_span.clone())?)?;
        let mut failure = None;
        for x in &lhs {
            if !vec_is_zero(&ring, &reduce_against(&rhs_e, x).0) {
                report.almost_transversal = false;
                failure = Some(module.format(x));
                break;
            }
        }
        if failure.is_none() {
            let fil_span = with_rel(fil.clone());
            for y in &rhs {
                if !span_contains(&ring, dim, &i1_span, y)? || !span_contains(&ring, dim, &fil_span, y)? {
                    failure = Some(module.format(y));
                    break;
                }
            }
        }
        if let Some(w) = failure {
            report.transversal = false;
            report.failing_k = Some(k);
            report.witness = Some(w);
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universal(p: u64) -> BaseRing {
        BaseRing::universal(p).unwrap()
    }

    fn compose(a: &Substitution, b: &Substitution, m: &MpdMonomial) -> UniversalElement {
        let mut out = UniversalElement::new();
        for (t, c) in a.apply_monomial(m).unwrap() {
            for (s, e) in b.apply_monomial(&t).unwrap() {
                add_into(&mut out, s, &(&c * &e));
            }
        }
        prune(&mut out);
        out
    }

    fn check_identities(shape: &SimplicialShape, pl: PrimeLevel, d: u32, r: usize) {
        let ctx = shape.algebra(pl, r, d).unwrap();
        let lower: Vec<_> = (0..=r + 1).map(|i| shape.coface(pl, d, i, r).unwrap()).collect();
        let upper: Vec<_> = (0..=r + 2).map(|i| shape.coface(pl, d, i, r + 1).unwrap()).collect();
        for j in 1..=r + 2 {
            for i in 0..j {
                for m in ctx.basis() {
                    let left = compose(&lower[i], &upper[j], &m);
                    let right = compose(&lower[j - 1], &upper[i], &m);
                    assert_eq!(left, right, "d^{j} d^{i} vs d^{i} d^{} on {}", j - 1, ctx.format_monomial(&m));
                }
            }
        }
    }

    #[test]
    fn build_p_examples() {
        let pl = PrimeLevel::new(2, 1).unwrap();
        let p = SimplicialShape::product(1).build_p(pl, 1, 3).unwrap();
        assert_eq!(p.iter().map(|(_, f)| *f).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(SimplicialShape::product(1).build_p(pl, 0, 3).unwrap().len(), 1);
        let pl3 = PrimeLevel::new(3, 1).unwrap();
        assert_eq!(SimplicialShape::product(2).build_p(pl3, 1, 1).unwrap().len(), 3);
    }

    #[test]
    fn normalize_two_slots() {
        let pl = PrimeLevel::new(3, 1).unwrap();
        let shape = SimplicialShape::group(FormalGroupLaw::additive(&universal(3), 6).unwrap()).unwrap();
        let ctx = shape.algebra(pl, 2, 6).unwrap();
        let got = shape.normalize(pl, 2, 6).unwrap();
        let expected = (1..=5u32).map(|a| 6 - a).sum::<u32>() as usize;
        assert_eq!(got.len(), expected);
        assert!(got.iter().all(|(m, _)| ctx.slot_degree(m, 0) >= 1 && ctx.slot_degree(m, 1) >= 1));
        assert!(!got.iter().any(|(m, _)| *m == ctx.monomial(&[&[0], &[2]])));
    }

    #[test]
    fn simplicial_identities_all_shapes() {
        let pl = PrimeLevel::new(2, 1).unwrap();
        check_identities(&SimplicialShape::product(1), pl, 4, 1);
        check_identities(&SimplicialShape::product_with_base(1), pl, 3, 1);
        check_identities(&SimplicialShape::product_shifted(2), pl, 3, 1);
        let pl3 = PrimeLevel::new(3, 1).unwrap();
        let law = FormalGroupLaw::legendre_symbolic(3, "lambda", 5).unwrap();
        check_identities(&SimplicialShape::group(law).unwrap(), pl3, 5, 1);
        let gm = FormalGroupLaw::multiplicative(&universal(2), 4).unwrap();
        check_identities(&SimplicialShape::group(gm).unwrap(), pl, 4, 2);
    }

    #[test]
    fn coface_examples() {
        let pl = PrimeLevel::new(3, 1).unwrap();
        let ga = SimplicialShape::group(FormalGroupLaw::additive(&universal(3), 6).unwrap()).unwrap();
        let src = ga.algebra(pl, 1, 6).unwrap();
        let dst = ga.algebra(pl, 2, 6).unwrap();
        let z3 = src.monomial(&[&[3]]);
        let img = ga.coface(pl, 6, 1, 1).unwrap().apply_monomial(&z3).unwrap();
        let expect: UniversalElement = [(0, 3, 1), (1, 2, 3), (2, 1, 3), (3, 0, 1)]
            .into_iter()
            .map(|(a, b, c)| (dst.monomial(&[&[a], &[b]]), UniversalCoeff::from_int(c)))
            .collect();
        assert_eq!(img, expect);
        let outer = ga.coface(pl, 6, 0, 1).unwrap().apply_monomial(&z3).unwrap();
        assert_eq!(outer, UniversalElement::from([(dst.monomial(&[&[0], &[3]]), UniversalCoeff::one())]));

        let pl2 = PrimeLevel::new(2, 1).unwrap();
        let prod = SimplicialShape::product(1);
        let src = prod.algebra(pl2, 1, 4).unwrap();
        let dst = prod.algebra(pl2, 2, 4).unwrap();
        let img = prod.coface(pl2, 4, 1, 1).unwrap().apply_monomial(&src.monomial(&[&[2]])).unwrap();
        let expect: UniversalElement = [(2, 0, 1), (1, 1, 2), (0, 2, 1)]
            .into_iter()
            .map(|(a, b, c)| (dst.monomial(&[&[a], &[b]]), UniversalCoeff::from_int(c)))
            .collect();
        assert_eq!(img, expect);
    }

    #[test]
    fn omega_one_is_free_on_the_box() {
        let pl = PrimeLevel::new(3, 1).unwrap();
        let f3 = BaseRing::prime_field(3).unwrap();
        let ga = SimplicialShape::group(FormalGroupLaw::additive(&universal(3), 6).unwrap()).unwrap();
        let cx = BLComplex::build(ga, pl, f3, Assignment::new(), 6, 2).unwrap();
        let p1 = cx.presentation(1).unwrap();
        assert!(p1.is_free());
        assert_eq!(p1.rank().unwrap(), 3);
        assert_eq!(cx.hodge_fil(1, 2).unwrap(), vec![1, 2]);
        assert_eq!(cx.presentation(2).unwrap().rank().unwrap(), 6);
        assert_eq!(cx.fil_length(2, 7).unwrap(), 0);
        assert_eq!(cx.fil_length(2, 0).unwrap(), 6);
    }

    #[test]
    fn additive_differential_is_binomial() {
        let pl = PrimeLevel::new(3, 1).unwrap();
        let z27 = BaseRing::zmod(3, 3).unwrap();
        let ga = SimplicialShape::group(FormalGroupLaw::additive(&universal(3), 6).unwrap()).unwrap();
        let cx = BLComplex::build(ga, pl, z27.clone(), Assignment::new(), 6, 2).unwrap();
        let d = cx.differential(1).unwrap();
        let ctx2 = cx.algebra(2).unwrap();
        for k in 1..=3u32 {
            let terms = d.column_terms((k - 1) as usize);
            let expect: Vec<(String, RingElem)> = (1..k)
                .map(|i| {
                    let b = crate::arith::binomial(k as u64, i as u64);
                    (ctx2.format_monomial(&ctx2.monomial(&[&[i], &[k - i]])), z27.neg(&z27.from_bigint(&b)))
                })
                .collect();
            let mut terms = terms;
            terms.sort_by(|a, b| a.0.cmp(&b.0));
            let mut expect = expect;
            expect.sort_by(|a, b| a.0.cmp(&b.0));
            assert_eq!(terms, expect, "k = {k}");
        }
    }

    #[test]
    fn additive_level_one_over_z4() {
        let pl = PrimeLevel::new(2, 1).unwrap();
        let z4 = BaseRing::zmod(2, 2).unwrap();
        let ga = SimplicialShape::group(FormalGroupLaw::additive(&universal(2), 4).unwrap()).unwrap();
        let cx = BLComplex::build(ga, pl, z4.clone(), Assignment::new(), 4, 2).unwrap();
        let d = cx.differential(1).unwrap();
        assert!(d.column_terms(0).is_empty());
        assert_eq!(d.column_terms(1), vec![("z1^{1}@s1*z1^{1}@s2".to_string(), RingElem::Int(2))]);
    }

    #[test]
    fn d_squared_and_descent() {
        let pl = PrimeLevel::new(2, 1).unwrap();
        let z4 = BaseRing::zmod(2, 2).unwrap();
        for law in [
            FormalGroupLaw::additive(&universal(2), 6).unwrap(),
            FormalGroupLaw::multiplicative(&universal(2), 6).unwrap(),
        ] {
            let cx = BLComplex::build(SimplicialShape::group(law).unwrap(), pl, z4.clone(), Assignment::new(), 6, 3)
                .unwrap();
            for r in 0..2 {
                assert!(cx.check_d_squared(r).unwrap());
            }
            for r in 1..3 {
                assert!(cx.check_descent(r).unwrap(), "descent in degree {r}");
            }
        }
        let pl3 = PrimeLevel::new(3, 1).unwrap();
        let law = FormalGroupLaw::legendre_symbolic(3, "lambda", 9).unwrap();
        let q = BaseRing::poly(3, "lambda").unwrap();
        let cx = BLComplex::build(SimplicialShape::group(law).unwrap(), pl3, q, Assignment::new(), 9, 3).unwrap();
        assert!(cx.check_d_squared(1).unwrap());
        assert!(cx.check_descent(1).unwrap());
        assert!(cx.check_descent(2).unwrap());
    }

    #[test]
    fn product_complexes() {
        let pl = PrimeLevel::new(3, 1).unwrap();
        let z9 = BaseRing::zmod(3, 2).unwrap();
        let cx = BLComplex::build(SimplicialShape::product_shifted(1), pl, z9.clone(), Assignment::new(), 6, 3).unwrap();
        for r in 0..2 {
            assert!(cx.check_d_squared(r).unwrap());
        }
        for r in 1..3 {
            assert!(cx.check_descent(r).unwrap());
        }
        let base = BLComplex::build(SimplicialShape::product_with_base(1), pl, z9, Assignment::new(), 6, 2).unwrap();
        let d = base.differential(0).unwrap();
        let j = base.index_of(0, &MpdMonomial(vec![1])).unwrap();
        assert_eq!(d.column_terms(j), vec![("t1^{1}@s1".to_string(), RingElem::Int(1))]);
        assert!(base.check_d_squared(0).unwrap());
    }

    #[test]
    fn level_zero_is_classical() {
        let pl = PrimeLevel::new(3, 0).unwrap();
        let f3 = BaseRing::prime_field(3).unwrap();
        let cx = BLComplex::build(SimplicialShape::product(2), pl, f3.clone(), Assignment::new(), 4, 2).unwrap();
        assert_eq!(cx.presentation(1).unwrap().rank().unwrap(), 2);
        assert_eq!(cx.presentation(2).unwrap().rank().unwrap(), 1);
        let law = FormalGroupLaw::legendre_symbolic(3, "lambda", 3).unwrap();
        let q = BaseRing::rational(3, "lambda").unwrap();
        let g = BLComplex::build(SimplicialShape::group(law).unwrap(), pl, q, Assignment::new(), 3, 2).unwrap();
        assert_eq!(g.presentation(1).unwrap().rank().unwrap(), 1);
    }

    #[test]
    fn truncation_stability() {
        let pl = PrimeLevel::new(2, 1).unwrap();
        let f2 = BaseRing::prime_field(2).unwrap();
        let ranks = |d: u32| {
            let law = FormalGroupLaw::multiplicative(&universal(2), d).unwrap();
            let cx = BLComplex::build(SimplicialShape::group(law).unwrap(), pl, f2.clone(), Assignment::new(), d, 3)
                .unwrap();
            (0..=3).map(|r| cx.presentation(r).unwrap().rank().unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(ranks(6), ranks(8));
    }

    #[test]
    fn transversality_of_linearized_forms() {
        let pl = PrimeLevel::new(3, 1).unwrap();
        let z9 = BaseRing::zmod(3, 2).unwrap();
        let cx = BLComplex::build(SimplicialShape::product_shifted(1), pl, z9, Assignment::new(), 6, 1).unwrap();
        let fil = cx.fil(1).unwrap().to_vec();
        let module = cx.filtered_module(1, ModuleFiltration::Degree(fil.clone())).unwrap();
        let rep = transversality_check(&module, IdealFiltration::MpdPowers).unwrap();
        assert!(rep.transversal, "{rep:?}");
        assert!(transversality_check(&module, IdealFiltration::Zero).unwrap().transversal);
        let trivial = module.with_filtration(ModuleFiltration::TrivialTransversal).unwrap();
        assert!(transversality_check(&trivial, IdealFiltration::MpdPowers).unwrap().transversal);

        let mut bad = fil;
        let g = module.ideal_degree.iter().position(|&i| i >= 1).unwrap();
        bad[g] += 1;
        let corrupted = module.with_filtration(ModuleFiltration::Degree(bad)).unwrap();
        let rep = transversality_check(&corrupted, IdealFiltration::MpdPowers).unwrap();
        assert!(!rep.almost_transversal);
        assert!(rep.witness.is_some());
    }
}
