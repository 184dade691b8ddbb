use serde::Serialize;

use crate::arith::{BaseRing, RingElem};
use crate::error::{Error, Result};

use super::echelon::{canonical_form, reduce_against, Echelon};
use super::matrix::{vec_is_zero, Matrix};

/// A finitely presented module: labelled generators modulo the row span of
/// a relation matrix, with a filtration degree on each generator.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    pub ring: BaseRing,
    pub generators: Vec<String>,
    pub fil: Vec<u32>,
    relations: Echelon,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationSummary {
    pub ring: String,
    pub generators: usize,
    pub relations: usize,
    /// Dimension over a field, `log_p` of the cardinality over `Z/p^N`.
    pub length: u32,
}

/// Builds a presentation; relations are stored in canonical form.
///
/// Works over fields and `Z/p^N`; parameterized rings should be passed as
/// their fraction field.
pub fn quotient_presentation(
    ring: &BaseRing,
    generators: Vec<String>,
    relations: Vec<Vec<RingElem>>,
    fil: Vec<u32>,
) -> Result<ModulePresentation> {
    if matches!(ring, BaseRing::PolyOverFp { .. } | BaseRing::Universal { .. }) {
        return Err(Error::UnsupportedRing(format!("presentations over {ring}")));
    }
    if fil.len() != generators.len() {
        return Err(Error::DimensionMismatch("one filtration degree per generator".into()));
    }
    let m = Matrix::from_rows(ring, generators.len(), relations)?;
    let relations = canonical_form(&m)?;
    Ok(ModulePresentation { ring: ring.clone(), generators, fil, relations })
}

impl ModulePresentation {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Nonzero rows of the canonical relation matrix.
    pub fn relations(&self) -> Vec<Vec<RingElem>> {
        self.relations.form.row_vecs()[..self.relations.nonzero_rows()].to_vec()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.nonzero_rows()
    }

    pub fn is_free(&self) -> bool {
        self.relation_count() == 0
    }

    /// Dimension of the quotient over a field.
    pub fn rank(&self) -> Result<usize> {
        if !self.ring.is_field() {
            return Err(Error::UnsupportedRing(format!("rank over {}", self.ring)));
        }
        Ok(self.dim() - self.relation_count())
    }

    /// Composition length: `log_p` of the cardinality over `Z/p^N`, rank
    /// over a field.
    pub fn length(&self) -> u32 {
        match self.ring {
            BaseRing::ZmodPN { n, .. } => {
                let rel: u32 = self.relations.pivots.iter().map(|p| n - p.val).sum();
                n * self.dim() as u32 - rel
            }
            _ => (self.dim() - self.relation_count()) as u32,
        }
    }

    /// Canonical representative of the class of `v`.
    pub fn reduce(&self, v: &[RingElem]) -> Vec<RingElem> {
        reduce_against(&self.relations, v).0
    }

    pub fn is_zero_class(&self, v: &[RingElem]) -> bool {
        vec_is_zero(&self.ring, &self.reduce(v))
    }

    /// Indices of generators of filtration degree at least `k`.
    pub fn fil_indices(&self, k: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.fil[i] >= k).collect()
    }

    pub fn summary(&self) -> PresentationSummary {
        PresentationSummary {
            ring: self.ring.to_string(),
            generators: self.dim(),
            relations: self.relation_count(),
            length: self.length(),
        }
    }
}
