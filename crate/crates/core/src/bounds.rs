//! Rankin simplex and orthoplex bounds on the squared chordal distance, and
//! certification of packings against them.

use std::fmt;

use crate::embedding::sphere_radius_squared;
use crate::error::{Error, Result};
use crate::packing::Packing;

/// Attainment tolerance on `d_c^2` for optimizer output.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Attainment tolerance for exact constructions.
pub const EXACT_TOL: f64 = 1e-9;

fn check_dims(m: usize, n: usize) -> Result<()> {
    if n == 0 || n >= m {
        return Err(Error::BadDimensions(format!(
            "need 1 <= n < m, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// `d_c^2 <= n(m-n)/m * N/(N-1)`.
pub fn simplex_bound(m: usize, n: usize, count: usize) -> Result<f64> {
    check_dims(m, n)?;
    if count < 2 {
        return Err(Error::BadDimensions(format!("need N >= 2, got {count}")));
    }
    let c = count as f64;
    Ok(sphere_radius_squared(m, n) * c / (c - 1.0))
}

/// `d_c^2 <= n(m-n)/m`, valid once `N > m(m+1)/2`.
pub fn orthoplex_bound(m: usize, n: usize) -> Result<f64> {
    check_dims(m, n)?;
    Ok(sphere_radius_squared(m, n))
}

/// Largest `N` that can meet the simplex bound: `m(m+1)/2`.
pub fn max_simplex_n(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Largest `N` that can meet the orthoplex bound: `(m-1)(m+2)`.
pub fn max_orthoplex_n(m: usize) -> usize {
    (m - 1) * (m + 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Simplex,
    Orthoplex,
}

impl BoundKind {
    /// The bound that governs a packing of `count` subspaces in `R^m`.
    pub fn governing(m: usize, count: usize) -> Self {
        if count <= max_simplex_n(m) {
            BoundKind::Simplex
        } else {
            BoundKind::Orthoplex
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Simplex => "simplex",
            BoundKind::Orthoplex => "orthoplex",
        })
    }
}

/// Whether a packing meets its governing bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attainment {
    /// Equal to rounding error.
    Yes,
    /// Equal within the requested tolerance.
    WithinTolerance,
    No,
}

impl Attainment {
    pub fn is_attained(self) -> bool {
        !matches!(self, Attainment::No)
    }
}

impl fmt::Display for Attainment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attainment::Yes => "yes",
            Attainment::WithinTolerance => "within-tolerance",
            Attainment::No => "no",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub m: usize,
    pub n: usize,
    pub count: usize,
    pub simplex_bound: f64,
    pub orthoplex_bound: f64,
    pub applicable: BoundKind,
    pub min_d2: f64,
    /// Largest pairwise `d_c^2` minus the smallest; zero for a regular simplex.
    pub spread: f64,
    pub attained: Attainment,
    pub tolerance_used: f64,
}

impl BoundReport {
    pub fn governing_bound(&self) -> f64 {
        match self.applicable {
            BoundKind::Simplex => self.simplex_bound,
            BoundKind::Orthoplex => self.orthoplex_bound,
        }
    }
}

/// Compares the packing's minimum squared chordal distance with the bound
/// that governs its size. Simplex attainment also requires all pairwise
/// distances to agree within `tol`.
pub fn certify(packing: &Packing, tol: f64) -> Result<BoundReport> {
    let (m, n, count) = (packing.m(), packing.n(), packing.len());
    if count < 2 {
        return Err(Error::TooFewSubspaces(count));
    }
    if !(tol > 0.0) {
        return Err(Error::BadParams(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let simplex = simplex_bound(m, n, count)?;
    let orthoplex = orthoplex_bound(m, n)?;
    let applicable = BoundKind::governing(m, count);
    let bound = match applicable {
        BoundKind::Simplex => simplex,
        BoundKind::Orthoplex => orthoplex,
    };

    let d2: Vec<f64> = packing
        .pairwise(crate::packing::Metric::Chordal)
        .into_iter()
        .map(|(_, _, d)| d * d)
        .collect();
    let min_d2 = d2.iter().copied().fold(f64::INFINITY, f64::min);
    let max_d2 = d2.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = max_d2 - min_d2;

    let gap = (bound - min_d2).abs();
    let exact_scale = 64.0 * f64::EPSILON * bound.max(1.0);
    let regular = applicable == BoundKind::Orthoplex || spread <= tol;
    let attained = if !regular || gap > tol {
        Attainment::No
    } else if gap <= exact_scale && (applicable == BoundKind::Orthoplex || spread <= exact_scale) {
        Attainment::Yes
    } else {
        Attainment::WithinTolerance
    };
    Ok(BoundReport {
        m,
        n,
        count,
        simplex_bound: simplex,
        orthoplex_bound: orthoplex,
        applicable,
        min_d2,
        spread,
        attained,
        tolerance_used: tol,
    })
}
