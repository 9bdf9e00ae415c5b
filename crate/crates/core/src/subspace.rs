//! Subspaces of `R^m` held by orthonormal generator matrices.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Entrywise tolerance on `gen * gen^T - I` for a valid generator.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Relative singular-value floor below which rows count as dependent.
const RANK_TOL: f64 = 1e-12;

/// An `n`-dimensional subspace of `R^m`, stored as an `n x m` matrix whose
/// rows are orthonormal and span the subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    generator: DMatrix<f64>,
}

impl Subspace {
    /// Wraps an `n x m` generator whose rows are already orthonormal.
    pub fn new(generator: DMatrix<f64>) -> Result<Self> {
        let (n, m) = generator.shape();
        if n == 0 || n > m {
            return Err(Error::BadDimensions(format!(
                "generator must be n x m with 1 <= n <= m, got {n} x {m}"
            )));
        }
        if generator.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotOrthonormal {
                deviation: f64::INFINITY,
            });
        }
        let deviation = orthonormality_defect(&generator);
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Subspace { generator })
    }

    /// Builds a subspace from row vectors, orthonormalizing them first.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(Error::BadDimensions(
                "rows must be non-empty and of equal length".into(),
            ));
        }
        orthonormalize(&DMatrix::from_fn(n, m, |i, j| rows[i][j]))
    }

    /// The span of the columns of an orthogonal projection matrix of rank `n`.
    ///
    /// Uses Gram-Schmidt with column pivoting, so the result is deterministic.
    pub fn from_projection(proj: &DMatrix<f64>, n: usize) -> Result<Self> {
        let m = proj.nrows();
        if proj.ncols() != m || n == 0 || n > m {
            return Err(Error::BadDimensions(format!(
                "projection must be square with rank 1..=m, got {}x{} rank {n}",
                proj.nrows(),
                proj.ncols()
            )));
        }
        let mut frame: Vec<DVector<f64>> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best: Option<(f64, DVector<f64>)> = None;
            for c in 0..m {
                let mut v = proj.column(c).into_owned();
                reduce_against(&mut v, &frame);
                let norm = v.norm();
                if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                    best = Some((norm, v));
                }
            }
            let (norm, v) = best.expect("m >= 1");
            if norm < 1e-8 {
                return Err(Error::RankDeficient {
                    rank: frame.len(),
                    rows: n,
                });
            }
            frame.push(v / norm);
        }
        Subspace::new(rows_to_matrix(&frame, m))
    }

    /// Uniformly distributed random subspace: i.i.d. Gaussian entries, then
    /// orthonormalized.
    pub fn random<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n > m {
            return Err(Error::BadDimensions(format!(
                "need 1 <= n <= m, got m={m} n={n}"
            )));
        }
        loop {
            let raw = DMatrix::from_fn(n, m, |_, _| rng.sample::<f64, _>(StandardNormal));
            match orthonormalize(&raw) {
                Ok(s) => return Ok(s),
                Err(Error::RankDeficient { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }

    /// Ambient dimension.
    pub fn m(&self) -> usize {
        self.generator.ncols()
    }

    /// Subspace dimension.
    pub fn n(&self) -> usize {
        self.generator.nrows()
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.generator
    }

    pub fn into_generator(self) -> DMatrix<f64> {
        self.generator
    }

    /// Orthogonal projection matrix `gen^T gen`.
    pub fn projection_matrix(&self) -> DMatrix<f64> {
        self.generator.transpose() * &self.generator
    }

    /// Image under an orthogonal change of coordinates acting on the right of
    /// the generator.
    pub fn rotated(&self, rotation: &DMatrix<f64>) -> Result<Self> {
        if rotation.nrows() != self.m() || rotation.ncols() != self.m() {
            return Err(Error::DimensionMismatch(format!(
                "rotation is {}x{}, ambient dimension {}",
                rotation.nrows(),
                rotation.ncols(),
                self.m()
            )));
        }
        Subspace::new(&self.generator * rotation)
    }

    /// Orthogonal complement, an `(m - n)`-space. `None` when `n = m`.
    pub fn complement(&self) -> Option<Subspace> {
        if self.n() == self.m() {
            return None;
        }
        let frame: Vec<DVector<f64>> = self.generator.row_iter().map(|r| r.transpose()).collect();
        let extra = complete_frame(&frame, self.m());
        Some(Subspace::new(rows_to_matrix(&extra, self.m())).expect("completion is orthonormal"))
    }

    /// Lexicographic order on generator entries, used to fix the evaluation
    /// order of symmetric functions.
    pub(crate) fn entry_cmp(&self, other: &Subspace) -> Ordering {
        self.generator
            .shape()
            .cmp(&other.generator.shape())
            .then_with(|| {
                let a = self.generator.transpose();
                let b = other.generator.transpose();
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

/// Orthonormal basis for the row space of a full-row-rank `n x m` matrix.
///
/// The result agrees with classical Gram-Schmidt on the rows: each output row
/// has a positive component along the corresponding input row.
pub fn orthonormalize(raw: &DMatrix<f64>) -> Result<Subspace> {
    let (n, m) = raw.shape();
    if n == 0 || m == 0 {
        return Err(Error::BadDimensions(format!("empty {n}x{m} matrix")));
    }
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::BadDimensions("non-finite entry".into()));
    }
    if n > m {
        return Err(Error::RankDeficient { rank: m, rows: n });
    }
    let sv = raw.singular_values();
    let largest = sv.max();
    let rank = sv
        .iter()
        .filter(|&&s| s > RANK_TOL * largest && s > 0.0)
        .count();
    if rank < n {
        return Err(Error::RankDeficient { rank, rows: n });
    }
    Subspace::new(qr_orthonormal(raw))
}

/// Householder QR of `raw^T` with the signs fixed so that `R` has a
/// nonnegative diagonal. No rank check.
pub(crate) fn qr_orthonormal(raw: &DMatrix<f64>) -> DMatrix<f64> {
    let n = raw.nrows();
    let qr = raw.transpose().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q.transpose()
}

/// Largest entrywise deviation of `gen * gen^T` from the identity.
pub fn orthonormality_defect(generator: &DMatrix<f64>) -> f64 {
    let gram = generator * generator.transpose();
    let n = gram.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

/// Random orthogonal `m x m` matrix (Haar distributed).
pub fn random_orthogonal<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<f64> {
    Subspace::random(m, m, rng)
        .expect("m >= 1")
        .into_generator()
}

/// Removes the components of `v` along an orthonormal `frame`; applied twice.
pub(crate) fn reduce_against(v: &mut DVector<f64>, frame: &[DVector<f64>]) {
    for _ in 0..2 {
        for f in frame {
            let c = f.dot(v);
            v.axpy(-c, f, 1.0);
        }
    }
}

/// Extends an orthonormal frame in `R^m` to a full basis, returning only the
/// new vectors. Candidates are coordinate vectors, picked by largest residual.
pub(crate) fn complete_frame(frame: &[DVector<f64>], m: usize) -> Vec<DVector<f64>> {
    let mut all: Vec<DVector<f64>> = frame.to_vec();
    let mut extra = Vec::with_capacity(m - frame.len().min(m));
    while all.len() < m {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for k in 0..m {
            let mut v = DVector::zeros(m);
            v[k] = 1.0;
            reduce_against(&mut v, &all);
            let norm = v.norm();
            // strict comparison keeps the lowest coordinate index on ties
            if best.as_ref().is_none_or(|(b, _)| norm > *b + 1e-12) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.expect("m >= 1");
        let v = v / norm;
        all.push(v.clone());
        extra.push(v);
    }
    extra
}

pub(crate) fn rows_to_matrix(rows: &[DVector<f64>], m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), m, |i, j| rows[i][j])
}
