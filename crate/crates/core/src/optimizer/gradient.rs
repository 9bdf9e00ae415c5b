//! Gradients of squared pair distances with respect to generator entries.

use nalgebra::DMatrix;

use crate::angles::near_right_angle;
use crate::packing::Packing;
use crate::subspace::qr_orthonormal;

/// Principal angles within this distance of `pi/2` switch the numerical
/// gradient to one-sided differences.
pub const KINK_TOL: f64 = 1e-6;

/// Gradient of `d_c^2 = n - ||A B^T||_F^2` for a pair of generators, with the
/// rows treated as free variables. Returns `(dA, dB)`.
pub fn chordal_pair_gradient(a: &DMatrix<f64>, b: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let cross = a * b.transpose();
    let ga = &cross * b * -2.0;
    let gb = cross.transpose() * a * -2.0;
    (ga, gb)
}

/// `n - ||A B^T||_F^2`; equals `d_c^2` when both generators are orthonormal.
pub fn chordal_trace_form(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.nrows() as f64 - (a * b.transpose()).norm_squared()
}

/// Analytic gradient of `d_c^2` between members `pair.0` and `pair.1`.
pub fn gradient_chordal(packing: &Packing, pair: (usize, usize)) -> (DMatrix<f64>, DMatrix<f64>) {
    let s = packing.subspaces();
    chordal_pair_gradient(s[pair.0].generator(), s[pair.1].generator())
}

/// Component of a gradient tangent to the Grassmannian at orthonormal `a`:
/// `G (I - A^T A)`.
pub fn horizontal(a: &DMatrix<f64>, g: &DMatrix<f64>) -> DMatrix<f64> {
    g - (g * a.transpose()) * a
}

/// Sorted principal angles between the row spaces of two orthonormal generators.
pub(crate) fn raw_angles(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<f64> {
    let mut cos: Vec<f64> = (a * b.transpose())
        .singular_values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    cos.sort_by(|x, y| y.total_cmp(x));
    cos.into_iter().map(f64::acos).collect()
}

pub(crate) fn geodesic_squared_raw(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    raw_angles(a, b).iter().map(|t| t * t).sum()
}

/// Central-difference gradient of `d_g^2` for a pair of orthonormal
/// generators. Each probe perturbs one entry and re-orthonormalizes.
///
/// Near a principal angle of `pi/2` the distance has a kink; there the
/// derivative is taken one-sided, in whichever direction increases the
/// distance, and is zero when both directions decrease it.
pub fn geodesic_pair_gradient_fd(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    h: f64,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let base = geodesic_squared_raw(a, b);
    let kinked = raw_angles(a, b)
        .iter()
        .any(|&t| near_right_angle(t, KINK_TOL));
    let probe = |which: usize, r: usize, c: usize, delta: f64| -> f64 {
        let (mut pa, mut pb) = (a.clone(), b.clone());
        let target = if which == 0 { &mut pa } else { &mut pb };
        target[(r, c)] += delta;
        *target = qr_orthonormal(target);
        geodesic_squared_raw(&pa, &pb)
    };
    let mut grads = [
        DMatrix::zeros(a.nrows(), a.ncols()),
        DMatrix::zeros(b.nrows(), b.ncols()),
    ];
    for (which, g) in grads.iter_mut().enumerate() {
        for r in 0..g.nrows() {
            for c in 0..g.ncols() {
                let up = probe(which, r, c, h);
                let down = probe(which, r, c, -h);
                g[(r, c)] = if kinked {
                    one_sided((up - base) / h, (base - down) / h)
                } else {
                    (up - down) / (2.0 * h)
                };
            }
        }
    }
    let [ga, gb] = grads;
    (ga, gb)
}

/// Picks an ascent-compatible slope from forward and backward differences.
fn one_sided(fwd: f64, bwd: f64) -> f64 {
    match (fwd > 0.0, bwd < 0.0) {
        // both directions increase the distance: take the steeper one
        (true, true) => {
            if fwd >= -bwd {
                fwd
            } else {
                bwd
            }
        }
        (true, false) => fwd,
        (false, true) => bwd,
        // local maximum along this coordinate
        (false, false) => 0.0,
    }
}

/// Numerical gradient of `d_g^2` between members `pair.0` and `pair.1`.
pub fn gradient_geodesic_fd(
    packing: &Packing,
    pair: (usize, usize),
    h: f64,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let s = packing.subspaces();
    geodesic_pair_gradient_fd(s[pair.0].generator(), s[pair.1].generator(), h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{canonical_first, canonical_second};
    use crate::packing::Metric;
    use crate::subspace::Subspace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair_packing(p: Subspace, q: Subspace) -> Packing {
        Packing::new(vec![p, q], Metric::Chordal).unwrap()
    }

    #[test]
    fn identical_subspaces_have_no_tangential_chordal_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = Subspace::random(5, 2, &mut rng).unwrap();
        let pk = pair_packing(p.clone(), p.clone());
        let (ga, gb) = gradient_chordal(&pk, (0, 1));
        assert!(horizontal(p.generator(), &ga).abs().max() < 1e-14);
        assert!(horizontal(p.generator(), &gb).abs().max() < 1e-14);
        let (fa, _) = gradient_geodesic_fd(&pk, (0, 1), 1e-5);
        assert!(fa.abs().max() <= 1e-4);
    }

    #[test]
    fn orthogonal_planes_are_critical() {
        let p = Subspace::new(canonical_first(4, 2)).unwrap();
        let q = Subspace::new(canonical_second(4, &[std::f64::consts::FRAC_PI_2; 2])).unwrap();
        let (ga, gb) = gradient_chordal(&pair_packing(p, q), (0, 1));
        assert!(ga.abs().max() < 1e-15 && gb.abs().max() < 1e-15);
    }

    #[test]
    fn kinked_pair_stays_finite() {
        let p = Subspace::new(canonical_first(4, 2)).unwrap();
        let q = Subspace::new(canonical_second(4, &[0.4, std::f64::consts::FRAC_PI_2])).unwrap();
        let (ga, gb) = gradient_geodesic_fd(&pair_packing(p, q), (0, 1), 1e-5);
        assert!(ga.iter().chain(gb.iter()).all(|x| x.is_finite()));
    }
}
