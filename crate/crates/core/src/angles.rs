//! Principal angles, the three subspace metrics, and the canonical form of a
//! pair of subspaces.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::packing::Metric;
use crate::subspace::{complete_frame, reduce_against, Subspace};

/// Sorted principal angles between two `n`-spaces, with the clamped cosines
/// they were computed from and optionally the principal vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngles {
    angles: Vec<f64>,
    cosines: Vec<f64>,
    left_vectors: Option<DMatrix<f64>>,
    right_vectors: Option<DMatrix<f64>>,
}

impl PrincipalAngles {
    /// Angles in `[0, pi/2]`, ascending.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Cosines of the angles (singular values clamped to `[0, 1]`), descending.
    pub fn cosines(&self) -> &[f64] {
        &self.cosines
    }

    /// Rows `u_i` of the principal vectors in the first subspace.
    pub fn left_vectors(&self) -> Option<&DMatrix<f64>> {
        self.left_vectors.as_ref()
    }

    /// Rows `v_i` of the principal vectors in the second subspace.
    pub fn right_vectors(&self) -> Option<&DMatrix<f64>> {
        self.right_vectors.as_ref()
    }

    /// `sum sin^2(theta_i)`. Small angles use their sines directly, the rest
    /// `(1 - c)(1 + c)`.
    pub fn chordal_squared(&self) -> f64 {
        self.cosines
            .iter()
            .zip(&self.angles)
            .map(|(&c, t)| {
                if c * c >= 0.5 {
                    t.sin().powi(2)
                } else {
                    (1.0 - c) * (1.0 + c)
                }
            })
            .sum()
    }

    /// `sum theta_i^2`.
    pub fn geodesic_squared(&self) -> f64 {
        self.angles.iter().map(|t| t * t).sum()
    }

    /// Largest principal angle.
    pub fn max_angle(&self) -> f64 {
        self.angles.last().copied().unwrap_or(0.0)
    }

    pub fn distance(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Chordal => self.chordal_squared().sqrt(),
            Metric::Geodesic => self.geodesic_squared().sqrt(),
            Metric::MaxAngle => self.max_angle(),
        }
    }

    pub fn distance_squared(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Chordal => self.chordal_squared(),
            Metric::Geodesic => self.geodesic_squared(),
            Metric::MaxAngle => self.max_angle().powi(2),
        }
    }
}

fn check_compatible(p: &Subspace, q: &Subspace) -> Result<()> {
    if p.m() != q.m() || p.n() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "G({},{}) vs G({},{})",
            p.m(),
            p.n(),
            q.m(),
            q.n()
        )));
    }
    Ok(())
}

/// Singular values of `P Q^T` in descending order with matching singular
/// vectors (columns of `u` and `v`).
fn sorted_svd(
    p: &Subspace,
    q: &Subspace,
    vectors: bool,
) -> (Vec<f64>, Option<(DMatrix<f64>, DMatrix<f64>)>) {
    let product = p.generator() * q.generator().transpose();
    let svd = product.svd(vectors, vectors);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order
        .iter()
        .map(|&k| svd.singular_values[k].clamp(0.0, 1.0))
        .collect();
    let vecs = if vectors {
        let u = svd.u.expect("requested");
        let v_t = svd.v_t.expect("requested");
        let n = u.nrows();
        let u_sorted = DMatrix::from_fn(n, n, |r, c| u[(r, order[c])]);
        let v_sorted = DMatrix::from_fn(n, n, |r, c| v_t[(order[c], r)]);
        Some((u_sorted, v_sorted))
    } else {
        None
    };
    (sigma, vecs)
}

/// Angles from the sorted cosines. Where `cos^2 >= 1/2` the arccosine is
/// ill-conditioned, so those angles come from the sines instead: the
/// singular values of `Q - Q P^T P`, taken in ascending order.
fn angles_from(p: &Subspace, q: &Subspace, cosines: &[f64]) -> Vec<f64> {
    if cosines.iter().all(|c| c * c < 0.5) {
        return cosines.iter().map(|c| c.acos()).collect();
    }
    let (pg, qg) = (p.generator(), q.generator());
    let residual = qg - (qg * pg.transpose()) * pg;
    let mut sines: Vec<f64> = residual
        .singular_values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    sines.sort_by(f64::total_cmp);
    cosines
        .iter()
        .zip(&sines)
        .map(|(c, s)| if c * c >= 0.5 { s.asin() } else { c.acos() })
        .collect()
}

/// Principal angles between `p` and `q`, from the singular values of
/// `P Q^T` clamped into `[0, 1]`.
pub fn principal_angles(p: &Subspace, q: &Subspace) -> Result<PrincipalAngles> {
    check_compatible(p, q)?;
    let (cosines, _) = sorted_svd(p, q, false);
    let angles = angles_from(p, q, &cosines);
    Ok(PrincipalAngles {
        angles,
        cosines,
        left_vectors: None,
        right_vectors: None,
    })
}

/// Principal angles together with principal vector pairs `u_i . v_i = cos theta_i`.
pub fn principal_vectors(p: &Subspace, q: &Subspace) -> Result<PrincipalAngles> {
    check_compatible(p, q)?;
    let (cosines, vecs) = sorted_svd(p, q, true);
    let (u, v) = vecs.expect("requested");
    let left = u.transpose() * p.generator();
    let right = v.transpose() * q.generator();
    let angles = angles_from(p, q, &cosines);
    Ok(PrincipalAngles {
        angles,
        cosines,
        left_vectors: Some(left),
        right_vectors: Some(right),
    })
}

/// Principal angles with the argument order fixed canonically, so that
/// `symmetric_angles(p, q) == symmetric_angles(q, p)` bit for bit.
pub(crate) fn symmetric_angles(p: &Subspace, q: &Subspace) -> Result<PrincipalAngles> {
    if p.entry_cmp(q).is_gt() {
        principal_angles(q, p)
    } else {
        principal_angles(p, q)
    }
}

/// Distance between two subspaces under `metric`.
///
/// Geodesic: `sqrt(sum theta_i^2)`. Chordal: `sqrt(sum sin^2 theta_i)`.
/// Max-angle: `max theta_i`.
pub fn distance(p: &Subspace, q: &Subspace, metric: Metric) -> Result<f64> {
    Ok(symmetric_angles(p, q)?.distance(metric))
}

/// Squared distance; for the chordal metric this avoids a square root.
pub fn distance_squared(p: &Subspace, q: &Subspace, metric: Metric) -> Result<f64> {
    Ok(symmetric_angles(p, q)?.distance_squared(metric))
}

/// A pair of subspaces rotated into canonical position.
#[derive(Debug, Clone)]
pub struct CanonicalPair {
    /// Orthogonal `m x m` matrix; `gen * rotation` gives coordinates in the
    /// canonical frame.
    pub rotation: DMatrix<f64>,
    pub angles: PrincipalAngles,
    /// Principal vectors of `p` in the canonical frame: `[I_n | 0]`.
    pub p_canonical: DMatrix<f64>,
    /// Principal vectors of `q` in the canonical frame:
    /// `[diag(cos) | diag(sin) | 0]`.
    pub q_canonical: DMatrix<f64>,
}

/// Below this sine the direction `v_i - cos(theta_i) u_i` is not resolved and
/// the frame vector is chosen by completion instead.
const SIN_FLOOR: f64 = 1e-7;

/// Rotation that brings `p` and `q` (with `n <= m/2`) to the block forms
/// `[I | 0 | 0]` and `[diag(cos theta) | diag(sin theta) | 0]`.
pub fn canonical_pair(p: &Subspace, q: &Subspace) -> Result<CanonicalPair> {
    check_compatible(p, q)?;
    let (m, n) = (p.m(), p.n());
    if 2 * n > m {
        return Err(Error::RequiresSmallHalf { m, n });
    }
    let angles = principal_vectors(p, q)?;
    let left = angles.left_vectors().expect("computed").clone();
    let right = angles.right_vectors().expect("computed").clone();

    let mut us: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut vs: Vec<DVector<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut u = left.row(i).transpose();
        let mut v = right.row(i).transpose();
        // fix the joint sign so the dominant entry of u is positive
        let lead =
            u.iter().copied().fold(
                0.0f64,
                |acc, x| if x.abs() > acc.abs() + 1e-12 { x } else { acc },
            );
        if lead < 0.0 {
            u.neg_mut();
            v.neg_mut();
        }
        us.push(u);
        vs.push(v);
    }

    let proj_p = p.projection_matrix();
    let mut known: Vec<DVector<f64>> = us.clone();
    let mut ws: Vec<Option<DVector<f64>>> = Vec::with_capacity(n);
    for i in 0..n {
        let sin = angles.angles()[i].sin();
        if sin >= SIN_FLOOR {
            let mut w = &vs[i] - &proj_p * &vs[i];
            reduce_against(&mut w, &known);
            let norm = w.norm();
            if norm > 0.5 * sin {
                let w = w / norm;
                known.push(w.clone());
                ws.push(Some(w));
                continue;
            }
        }
        ws.push(None);
    }
    let mut fill = complete_frame(&known, m).into_iter();
    let mut frame: Vec<DVector<f64>> = us.clone();
    for w in ws {
        frame.push(w.unwrap_or_else(|| fill.next().expect("enough completion vectors")));
    }
    frame.extend(fill);

    let rotation = DMatrix::from_fn(m, m, |r, c| frame[c][r]);
    let u_mat = DMatrix::from_fn(n, m, |r, c| us[r][c]);
    let v_mat = DMatrix::from_fn(n, m, |r, c| vs[r][c]);
    Ok(CanonicalPair {
        p_canonical: &u_mat * &rotation,
        q_canonical: &v_mat * &rotation,
        rotation,
        angles,
    })
}

/// Generator `[I_n | 0]` of the first canonical subspace in `R^m`.
pub fn canonical_first(m: usize, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, m, |r, c| if r == c { 1.0 } else { 0.0 })
}

/// Generator `[diag(cos) | diag(sin) | 0]` of the second canonical subspace.
pub fn canonical_second(m: usize, angles: &[f64]) -> DMatrix<f64> {
    let n = angles.len();
    DMatrix::from_fn(n, m, |r, c| {
        if c == r {
            angles[r].cos()
        } else if c == n + r {
            angles[r].sin()
        } else {
            0.0
        }
    })
}

/// True when the principal angle is within `tol` of `pi/2`.
pub(crate) fn near_right_angle(theta: f64, tol: f64) -> bool {
    (FRAC_PI_2 - theta).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn plane(rows: &[[f64; 4]]) -> Subspace {
        Subspace::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn constructed_angles_are_recovered() {
        let p = Subspace::new(canonical_first(4, 2)).unwrap();
        let q = Subspace::new(canonical_second(4, &[0.3, 0.7])).unwrap();
        let a = principal_angles(&p, &q).unwrap();
        assert!((a.angles()[0] - 0.3).abs() < 1e-14);
        assert!((a.angles()[1] - 0.7).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_planes() {
        let p = plane(&[[1., 0., 0., 0.], [0., 1., 0., 0.]]);
        let q = plane(&[[0., 0., 1., 0.], [0., 0., 0., 1.]]);
        let a = principal_angles(&p, &q).unwrap();
        assert!(a.angles().iter().all(|t| (t - FRAC_PI_2).abs() < 1e-15));
        assert_eq!(distance_squared(&p, &q, Metric::Chordal).unwrap(), 2.0);
        assert!(
            (distance_squared(&p, &q, Metric::Geodesic).unwrap() - PI * PI / 2.0).abs() < 1e-14
        );
        assert!((distance(&p, &q, Metric::MaxAngle).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn identical_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = Subspace::random(5, 2, &mut rng).unwrap();
        for metric in Metric::ALL {
            assert!(distance(&p, &p, metric).unwrap() < 1e-7);
        }
        assert!(distance(&p, &p, Metric::Chordal).unwrap() < 1e-8);
    }

    #[test]
    fn dimension_mismatch() {
        let p = Subspace::new(canonical_first(4, 2)).unwrap();
        let q = Subspace::new(canonical_first(5, 2)).unwrap();
        assert!(matches!(
            principal_angles(&p, &q),
            Err(Error::DimensionMismatch(_))
        ));
        let r = Subspace::new(canonical_first(4, 1)).unwrap();
        assert!(matches!(
            distance(&p, &r, Metric::Chordal),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn clamp_prevents_nan() {
        // two spans that agree to rounding; the singular value can exceed 1
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let p = Subspace::random(6, 3, &mut rng).unwrap();
            let rot = crate::subspace::random_orthogonal(3, &mut rng);
            let q = Subspace::new(&rot * p.generator()).unwrap();
            let a = principal_angles(&p, &q).unwrap();
            assert!(a.angles().iter().all(|t| t.is_finite() && *t >= 0.0));
            assert!(a.cosines().iter().all(|c| *c <= 1.0));
            assert!(a.chordal_squared() >= 0.0);
        }
    }

    #[test]
    fn principal_vectors_pair_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = Subspace::random(7, 3, &mut rng).unwrap();
        let q = Subspace::random(7, 3, &mut rng).unwrap();
        let a = principal_vectors(&p, &q).unwrap();
        let (u, v) = (a.left_vectors().unwrap(), a.right_vectors().unwrap());
        for i in 0..3 {
            let dot = u.row(i).dot(&v.row(i));
            assert!((dot - a.angles()[i].cos()).abs() < 1e-8);
        }
        assert!(a.angles().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn canonical_of_canonical_is_identity() {
        let p = Subspace::new(canonical_first(4, 2)).unwrap();
        let q = Subspace::new(canonical_second(4, &[0.3, 0.7])).unwrap();
        let c = canonical_pair(&p, &q).unwrap();
        assert!((&c.rotation - DMatrix::identity(4, 4)).abs().max() < 1e-8);
    }

    #[test]
    fn canonical_of_orthogonal_planes() {
        let p = plane(&[[1., 0., 0., 0.], [0., 1., 0., 0.]]);
        let q = plane(&[[0., 0., 1., 0.], [0., 0., 0., 1.]]);
        let c = canonical_pair(&p, &q).unwrap();
        assert!((&c.p_canonical - canonical_first(4, 2)).abs().max() < 1e-8);
        assert!(
            (&c.q_canonical - canonical_second(4, &[FRAC_PI_2, FRAC_PI_2]))
                .abs()
                .max()
                < 1e-8
        );
    }

    #[test]
    fn canonical_of_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (m, n) in [(4, 2), (5, 2), (8, 4), (3, 1)] {
            for _ in 0..20 {
                let p = Subspace::random(m, n, &mut rng).unwrap();
                let q = Subspace::random(m, n, &mut rng).unwrap();
                let c = canonical_pair(&p, &q).unwrap();
                let r = &c.rotation;
                assert!((r.transpose() * r - DMatrix::identity(m, m)).abs().max() < 1e-10);
                let direct = principal_angles(&p, &q).unwrap();
                let ang = c.angles.angles();
                for (x, y) in ang.iter().zip(direct.angles()) {
                    assert!((x - y).abs() < 1e-8);
                }
                assert!((&c.p_canonical - canonical_first(m, n)).abs().max() < 1e-8);
                assert!((&c.q_canonical - canonical_second(m, ang)).abs().max() < 1e-8);
                // the rotated generators span the canonical subspaces
                let pr = p.rotated(r).unwrap().projection_matrix();
                let qr = q.rotated(r).unwrap().projection_matrix();
                let pc = Subspace::new(canonical_first(m, n))
                    .unwrap()
                    .projection_matrix();
                let qc = Subspace::new(canonical_second(m, ang))
                    .unwrap()
                    .projection_matrix();
                assert!((pr - pc).abs().max() < 1e-8);
                assert!((qr - qc).abs().max() < 1e-8);
            }
        }
    }

    #[test]
    fn canonical_requires_small_half() {
        let p = Subspace::new(canonical_first(5, 3)).unwrap();
        assert!(matches!(
            canonical_pair(&p, &p),
            Err(Error::RequiresSmallHalf { m: 5, n: 3 })
        ));
    }
}
