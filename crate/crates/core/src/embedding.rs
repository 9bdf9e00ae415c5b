//! Projection matrices and the isometric embedding of `G(m,n)` into a sphere
//! in `R^D`, `D = m(m+1)/2 - 1`.
//!
//! A subspace `P` with orthonormal generator `A` maps to `A^T A`. Removing
//! `(n/m) I` gives a traceless symmetric matrix of squared norm `n(m-n)/m`,
//! and `d_c(P, Q)^2 = ||P - Q||^2 / 2`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::packing::Packing;
use crate::subspace::Subspace;

/// Relative eigenvalue floor used when counting embedding dimensions.
pub const RANK_REL_TOL: f64 = 1e-8;

/// `D = m(m+1)/2 - 1`, the dimension of traceless symmetric `m x m` matrices.
pub fn embedding_space_dim(m: usize) -> usize {
    m * (m + 1) / 2 - 1
}

/// Squared radius `n(m-n)/m` of the sphere holding `G(m,n)`.
pub fn sphere_radius_squared(m: usize, n: usize) -> f64 {
    (n * (m - n)) as f64 / m as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPoint {
    /// `A^T A`.
    pub mat: DMatrix<f64>,
    /// `A^T A - (n/m) I`.
    pub detraced: DMatrix<f64>,
    /// Coordinates of `detraced` in an orthonormal basis of traceless
    /// symmetric matrices.
    pub embed_vec: DVector<f64>,
}

/// Projection point of `p`.
///
/// Coordinate layout of `embed_vec` (length `m(m+1)/2 - 1`):
/// first `m - 1` Helmert contrasts of the diagonal, where entry `k`
/// (1-based) is `(d_1 + ... + d_k - k d_{k+1}) / sqrt(k(k+1))`; then
/// `sqrt(2) * detraced[i][j]` for `i < j` in row-major order.
pub fn projection(p: &Subspace) -> ProjectionPoint {
    let (m, n) = (p.m(), p.n());
    let mat = p.projection_matrix();
    let detraced = &mat - DMatrix::<f64>::identity(m, m) * (n as f64 / m as f64);
    let embed_vec = embed_traceless(&detraced);
    ProjectionPoint {
        mat,
        detraced,
        embed_vec,
    }
}

fn embed_traceless(d: &DMatrix<f64>) -> DVector<f64> {
    let m = d.nrows();
    let mut out = Vec::with_capacity(embedding_space_dim(m));
    let mut prefix = 0.0;
    for k in 1..m {
        prefix += d[(k - 1, k - 1)];
        let kf = k as f64;
        out.push((prefix - kf * d[(k, k)]) / (kf * (kf + 1.0)).sqrt());
    }
    let s2 = std::f64::consts::SQRT_2;
    for i in 0..m {
        for j in (i + 1)..m {
            out.push(s2 * d[(i, j)]);
        }
    }
    DVector::from_vec(out)
}

/// Chordal distance from projection matrices: `sqrt(||P - Q||^2 / 2)`.
pub fn chordal_via_projection(p: &Subspace, q: &Subspace) -> Result<f64> {
    if p.m() != q.m() || p.n() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "G({},{}) vs G({},{})",
            p.m(),
            p.n(),
            q.m(),
            q.n()
        )));
    }
    let diff = p.projection_matrix() - q.projection_matrix();
    Ok((0.5 * diff.norm_squared()).sqrt())
}

/// Smallest `D'` such that the packing's chordal distances are realised by
/// points of `R^{D'}`: the numerical rank of the double-centred Gram matrix
/// `-J S J / 2`, with `S` the squared chordal distances.
pub fn embedding_dimension(packing: &Packing) -> Result<usize> {
    let count = packing.len();
    if count < 2 {
        return Err(Error::TooFewSubspaces(count));
    }
    let mats: Vec<DMatrix<f64>> = packing
        .subspaces()
        .iter()
        .map(Subspace::projection_matrix)
        .collect();
    let mut sq = DMatrix::<f64>::zeros(count, count);
    for i in 0..count {
        for j in (i + 1)..count {
            let d2 = 0.5 * (&mats[i] - &mats[j]).norm_squared();
            sq[(i, j)] = d2;
            sq[(j, i)] = d2;
        }
    }
    let centering = DMatrix::<f64>::identity(count, count)
        - DMatrix::<f64>::from_element(count, count, 1.0 / count as f64);
    let gram = &centering * sq * &centering * -0.5;
    let gram = (&gram + gram.transpose()) * 0.5;
    let eig = gram.symmetric_eigenvalues();
    let largest = eig.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(eig
        .iter()
        .filter(|x| x.abs() > RANK_REL_TOL * largest)
        .count())
}
