use serde::Serialize;

use crate::arith::{Assignment, BaseRing, FpPoly, RingElem};
use crate::error::{Error, Result};

/// Dense matrix over a [`BaseRing`]. Vectors are plain `Vec<RingElem>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub ring: BaseRing,
    rows: usize,
    cols: usize,
    data: Vec<Vec<RingElem>>,
}

impl Matrix {
    pub fn zeros(ring: &BaseRing, rows: usize, cols: usize) -> Self {
        Matrix { ring: ring.clone(), rows, cols, data: vec![vec![ring.zero(); cols]; rows] }
    }

    pub fn identity(ring: &BaseRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i][i] = ring.one();
        }
        m
    }

    pub fn from_rows(ring: &BaseRing, cols: usize, data: Vec<Vec<RingElem>>) -> Result<Self> {
        if let Some(bad) = data.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("row of length {} in a matrix with {cols} columns", bad.len())));
        }
        Ok(Matrix { ring: ring.clone(), rows: data.len(), cols, data })
    }

    pub fn from_ints(ring: &BaseRing, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().map(|r| r.iter().map(|&x| ring.from_int(x)).collect()).collect();
        Self::from_rows(ring, cols, data).expect("rectangular input")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[RingElem] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<RingElem>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<RingElem> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| vec_is_zero(&self.ring, r))
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols).map(|j| self.column(j)).collect();
        Matrix { ring: self.ring.clone(), rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let r = &self.ring;
        let mut out = Self::zeros(r, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let prod = r.mul(a, &o.data[k][j]);
                    out.data[i][j] = r.add(&out.data[i][j], &prod);
                }
            }
        }
        Ok(out)
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[RingElem]) -> Result<Vec<RingElem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let r = &self.ring;
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().zip(v).fold(r.zero(), |acc, (a, b)| r.add(&acc, &r.mul(a, b))))
            .collect())
    }

    /// `v M` for a row vector `v`.
    pub fn apply_left(&self, v: &[RingElem]) -> Result<Vec<RingElem>> {
        self.transpose().apply(v)
    }

    pub fn hcat(&self, o: &Matrix) -> Result<Matrix> {
        if self.rows != o.rows {
            return Err(Error::DimensionMismatch("hcat of matrices with different heights".into()));
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        Ok(Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols + o.cols, data })
    }

    pub fn vcat(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.cols {
            return Err(Error::DimensionMismatch("vcat of matrices with different widths".into()));
        }
        let data = self.data.iter().chain(&o.data).cloned().collect();
        Ok(Matrix { ring: self.ring.clone(), rows: self.rows + o.rows, cols: self.cols, data })
    }

    /// Columns `range` of every row.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Matrix {
        let cols = range.len();
        let data = self.data.iter().map(|r| r[range.clone()].to_vec()).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols, data }
    }

    /// Reduces a matrix over the universal ring into `target`.
    pub fn reduce(&self, target: &BaseRing, assignment: &Assignment) -> Result<Matrix> {
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut out = Vec::with_capacity(self.cols);
            for x in row {
                match x {
                    RingElem::Univ(u) => out.push(target.reduce(u, assignment)?),
                    _ if self.ring == *target => out.push(x.clone()),
                    _ => return Err(Error::UnsupportedRing(format!("cannot reduce from {} to {target}", self.ring))),
                }
            }
            data.push(out);
        }
        Ok(Matrix { ring: target.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Reinterprets a matrix over `F_p[x]` as one over `F_p(x)`.
    pub fn to_fraction_field(&self) -> Result<Matrix> {
        let BaseRing::PolyOverFp { p, param } = &self.ring else {
            return Err(Error::UnsupportedRing(format!("{} is not a polynomial ring", self.ring)));
        };
        let ring = BaseRing::rational(*p, param)?;
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| match x {
                        RingElem::Poly(f) => RingElem::Frac(f.clone(), FpPoly::one()),
                        other => other.clone(),
                    })
                    .collect()
            })
            .collect();
        Ok(Matrix { ring, rows: self.rows, cols: self.cols, data })
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.data.iter().map(|r| r.iter().map(|x| self.ring.format(x)).collect()).collect()
    }
}

pub fn vec_is_zero(ring: &BaseRing, v: &[RingElem]) -> bool {
    v.iter().all(|x| ring.is_zero(x))
}

/// A matrix between labelled bases: columns are the source, rows the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMapMatrix {
    pub matrix: Matrix,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

/// JSON shape of a labelled matrix.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixReport {
    pub ring: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

impl LinearMapMatrix {
    pub fn new(matrix: Matrix, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        if matrix.rows() != row_labels.len() || matrix.cols() != col_labels.len() {
            return Err(Error::DimensionMismatch("label count does not match matrix shape".into()));
        }
        Ok(LinearMapMatrix { matrix, row_labels, col_labels })
    }

    pub fn reduce(&self, target: &BaseRing, assignment: &Assignment) -> Result<Self> {
        Ok(LinearMapMatrix {
            matrix: self.matrix.reduce(target, assignment)?,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        })
    }

    pub fn report(&self) -> MatrixReport {
        MatrixReport {
            ring: self.matrix.ring.to_string(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: self.matrix.to_strings(),
        }
    }

    /// The image of source basis vector `j` as `coeff * label` terms.
    pub fn column_terms(&self, j: usize) -> Vec<(String, RingElem)> {
        let r = &self.matrix.ring;
        (0..self.matrix.rows())
            .filter(|&i| !r.is_zero(self.matrix.get(i, j)))
            .map(|i| (self.row_labels[i].clone(), self.matrix.get(i, j).clone()))
            .collect()
    }
}
