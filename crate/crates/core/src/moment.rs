//! Symmetric second-moment matrices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A symmetric n×n matrix, serialized as a list of rows.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatrix(pub DMatrix<f64>);

impl MomentMatrix {
    pub fn scaled_identity(n: usize, c: f64) -> Self {
        Self(DMatrix::identity(n, n) * c)
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return invalid("moment matrix must be square and nonempty");
        }
        Ok(Self(DMatrix::from_fn(n, n, |i, j| rows[i][j])))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.0[(i, j)]).collect()).collect()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// `½ Tr(M H)`.
    pub fn half_trace_with(&self, h: &DMatrix<f64>) -> f64 {
        0.5 * (&self.0 * h).trace()
    }

    /// `⟨M a, b⟩`.
    pub fn bilinear(&self, a: &[f64], b: &[f64]) -> f64 {
        let av = nalgebra::DVector::from_column_slice(a);
        let bv = nalgebra::DVector::from_column_slice(b);
        (&self.0 * av).dot(&bv)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).amax()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }
}

impl Serialize for MomentMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MomentMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Self::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}
