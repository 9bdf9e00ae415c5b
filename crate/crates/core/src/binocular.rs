//! Planes in `R^4` as sign classes of pairs of points on two 2-spheres.
//!
//! A plane `P` is fixed pointwise by the rotation `alpha = 2 P - I`, which
//! negates `P^perp`. Writing `alpha` as `x -> conj(l) x r` on quaternions
//! (basis `1, i, j, k`) gives purely imaginary unit quaternions `l`, `r`,
//! determined up to a common sign.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::numfmt::g17;
use crate::packing::{Metric, Packing};
use crate::subspace::Subspace;

/// Allowed deviation of `|l|`, `|r|` from 1.
pub const UNIT_TOL: f64 = 1e-10;
/// Coordinates at or below this magnitude are skipped when fixing the sign.
const SIGN_EPS: f64 = 1e-12;

/// Matrix of `x -> q x`.
pub fn left_mul(q: &Vector4<f64>) -> Matrix4<f64> {
    let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
    Matrix4::new(
        a, -b, -c, -d, //
        b, a, -d, c, //
        c, d, a, -b, //
        d, -c, b, a,
    )
}

/// Matrix of `x -> x q`.
pub fn right_mul(q: &Vector4<f64>) -> Matrix4<f64> {
    let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
    Matrix4::new(
        a, -b, -c, -d, //
        b, a, d, -c, //
        c, -d, a, b, //
        d, c, -b, a,
    )
}

fn imaginary(v: &Vector3<f64>) -> Vector4<f64> {
    Vector4::new(0.0, v[0], v[1], v[2])
}

fn unit_basis(a: usize) -> Vector4<f64> {
    let mut e = Vector4::zeros();
    e[a] = 1.0;
    e
}

/// A plane of `G(4,2)` as `(l, r)`, stored with the first non-negligible
/// coordinate of `l` positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinocularPair {
    l: Vector3<f64>,
    r: Vector3<f64>,
}

impl BinocularPair {
    pub fn new(l: Vector3<f64>, r: Vector3<f64>) -> Result<Self> {
        for v in [&l, &r] {
            let norm = v.norm();
            if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::NotUnit(norm));
            }
        }
        let flip = l
            .iter()
            .find(|x| x.abs() > SIGN_EPS)
            .is_some_and(|&x| x < 0.0);
        Ok(if flip {
            BinocularPair { l: -l, r: -r }
        } else {
            BinocularPair { l, r }
        })
    }

    /// Normalizes both vectors first; errors only on zero or non-finite input.
    pub fn from_unnormalized(l: Vector3<f64>, r: Vector3<f64>) -> Result<Self> {
        let (nl, nr) = (l.norm(), r.norm());
        if !(nl > 0.0 && nl.is_finite()) {
            return Err(Error::NotUnit(nl));
        }
        if !(nr > 0.0 && nr.is_finite()) {
            return Err(Error::NotUnit(nr));
        }
        BinocularPair::new(l / nl, r / nr)
    }

    pub fn l(&self) -> Vector3<f64> {
        self.l
    }

    pub fn r(&self) -> Vector3<f64> {
        self.r
    }

    /// The rotation `x -> conj(l) x r` in the basis `1, i, j, k`.
    pub fn rotation(&self) -> Matrix4<f64> {
        left_mul(&(-imaginary(&self.l))) * right_mul(&imaginary(&self.r))
    }
}

/// Principal angles and distances between two planes given as pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDistance {
    pub theta1: f64,
    pub theta2: f64,
    pub chordal_squared: f64,
    pub geodesic_squared: f64,
}

fn vector_angle(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Angles `(phi, psi)` between the left and right points, folded so that
/// `phi + psi <= pi` and `phi <= psi`.
pub fn normalized_angles(p: &BinocularPair, q: &BinocularPair) -> (f64, f64) {
    let mut phi = vector_angle(&p.l, &q.l);
    let mut psi = vector_angle(&p.r, &q.r);
    if phi + psi > PI {
        phi = PI - phi;
        psi = PI - psi;
    }
    if phi > psi {
        std::mem::swap(&mut phi, &mut psi);
    }
    (phi, psi)
}

pub fn pair_distance(p: &BinocularPair, q: &BinocularPair) -> PairDistance {
    let (phi, psi) = normalized_angles(p, q);
    PairDistance {
        theta1: (psi - phi) / 2.0,
        theta2: (psi + phi) / 2.0,
        chordal_squared: 1.0 - psi.cos() * phi.cos(),
        geodesic_squared: (psi * psi + phi * phi) / 2.0,
    }
}

/// The plane fixed by `x -> conj(l) x r`.
pub fn pair_to_plane(pair: &BinocularPair) -> Result<Subspace> {
    let proj = (Matrix4::identity() + pair.rotation()) * 0.5;
    Subspace::from_projection(&DMatrix::from_iterator(4, 4, proj.iter().copied()), 2)
}

pub fn plane_to_pair(plane: &Subspace) -> Result<BinocularPair> {
    if plane.m() != 4 || plane.n() != 2 {
        return Err(Error::NotAPlane {
            m: plane.m(),
            n: plane.n(),
        });
    }
    let proj = plane.projection_matrix();
    let alpha = Matrix4::from_fn(|i, j| 2.0 * proj[(i, j)] - if i == j { 1.0 } else { 0.0 });

    // The products L(e_a) R(e_b) are orthogonal with squared norm 4, so the
    // coefficients of alpha in that basis form the rank-one matrix conj(l) r^T.
    let mut coef = Matrix4::zeros();
    for a in 0..4 {
        let la = left_mul(&unit_basis(a));
        for b in 0..4 {
            let basis = la * right_mul(&unit_basis(b));
            coef[(a, b)] = basis.component_mul(&alpha).sum() / 4.0;
        }
    }
    let row = (0..4)
        .max_by(|&x, &y| {
            coef.row(x)
                .norm_squared()
                .total_cmp(&coef.row(y).norm_squared())
        })
        .expect("four rows");
    let r4: Vector4<f64> = coef.row(row).transpose().normalize();
    let lbar = coef * r4;
    let l = -Vector3::new(lbar[1], lbar[2], lbar[3]);
    let r = Vector3::new(r4[1], r4[2], r4[3]);
    BinocularPair::from_unnormalized(l, r)
}

/// A packing of planes described by its pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BinocularCode {
    pub pairs: Vec<BinocularPair>,
}

impl BinocularCode {
    pub fn from_packing(packing: &Packing) -> Result<Self> {
        let pairs = packing
            .subspaces()
            .iter()
            .map(plane_to_pair)
            .collect::<Result<_>>()?;
        Ok(BinocularCode { pairs })
    }

    pub fn to_packing(&self, metric: Metric) -> Result<Packing> {
        let planes = self
            .pairs
            .iter()
            .map(pair_to_plane)
            .collect::<Result<_>>()?;
        Packing::new(planes, metric)
    }

    /// The points `+l_i, -l_i`, in pair order.
    pub fn left_code(&self) -> Vec<Vector3<f64>> {
        self.pairs.iter().flat_map(|p| [p.l, -p.l]).collect()
    }

    /// The points `+r_i, -r_i`, matched index by index with `left_code`.
    pub fn right_code(&self) -> Vec<Vector3<f64>> {
        self.pairs.iter().flat_map(|p| [p.r, -p.r]).collect()
    }
}

fn code_packing(pairs: &[([f64; 3], [f64; 3])]) -> Packing {
    let code = BinocularCode {
        pairs: pairs
            .iter()
            .map(|(l, r)| {
                BinocularPair::from_unnormalized(Vector3::from(*l), Vector3::from(*r))
                    .expect("fixture vectors are nonzero")
            })
            .collect(),
    };
    code.to_packing(Metric::Chordal)
        .expect("fixture pairs give planes")
}

fn generator_packing(planes: &[[[f64; 4]; 2]]) -> Packing {
    let subs = planes
        .iter()
        .map(|rows| {
            Subspace::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
                .expect("fixture rows are independent")
        })
        .collect();
    Packing::new(subs, Metric::Chordal).expect("fixture planes share dimensions")
}

/// Six planes forming a regular simplex: the icosahedron's vertices matched
/// with their algebraic conjugates.
pub fn icosahedron_packing() -> Packing {
    let tau = (1.0 + 5f64.sqrt()) / 2.0;
    let sigma = (1.0 - 5f64.sqrt()) / 2.0;
    let vertex = |t: f64| {
        [
            [0.0, 1.0, t],
            [0.0, 1.0, -t],
            [t, 0.0, 1.0],
            [-t, 0.0, 1.0],
            [1.0, t, 0.0],
            [1.0, -t, 0.0],
        ]
    };
    let pairs: Vec<_> = vertex(tau).into_iter().zip(vertex(sigma)).collect();
    code_packing(&pairs)
}

/// Eighteen planes: `l` and `r` range over the octahedron's vertices.
pub fn octahedron_packing() -> Packing {
    let e = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut pairs = Vec::with_capacity(18);
    for l in e {
        for r in e {
            pairs.push((l, r));
            pairs.push((l, r.map(|x| -x)));
        }
    }
    code_packing(&pairs)
}

/// Best known chordal packings of `N = 2..=5` planes in `R^4`.
pub fn small_packings(count: usize) -> Result<Packing> {
    let h = 3f64.sqrt() / 2.0;
    Ok(match count {
        2 => generator_packing(&[
            [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]],
            [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]],
        ]),
        3 => generator_packing(&[
            [[1.0, 0.0, h, 0.5], [0.0, 1.0, -0.5, h]],
            [[1.0, 0.0, -h, 0.5], [0.0, 1.0, -0.5, -h]],
            [[1.0, 0.0, 0.0, -1.0], [0.0, 1.0, 1.0, 0.0]],
        ]),
        4 => {
            let a = [1.0, 0.0, 0.0];
            let b = [1.0 / 3f64.sqrt(), (2.0f64 / 3.0).sqrt(), 0.0];
            let c = [b[0], -b[1], 0.0];
            let neg = |v: [f64; 3]| v.map(|x| -x);
            code_packing(&[(a, b), (a, c), (b, neg(a)), (c, neg(a))])
        }
        5 => {
            let dec = |k: usize| {
                let t = PI * k as f64 / 5.0;
                [t.cos(), t.sin(), 0.0]
            };
            let neg = |v: [f64; 3]| v.map(|x| -x);
            code_packing(&[
                (dec(0), dec(0)),
                (dec(1), neg(dec(2))),
                (dec(2), dec(4)),
                (dec(3), dec(1)),
                (dec(4), neg(dec(3))),
            ])
        }
        _ => return Err(Error::UnsupportedN(count)),
    })
}

/// One pair per line: `lx ly lz rx ry rz`. Blank lines and `#` comments are
/// ignored.
pub fn parse_pairs(text: &str) -> Result<Vec<BinocularPair>> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let vals = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::parse(lineno, format!("bad number {tok:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != 6 {
            return Err(Error::parse(
                lineno,
                format!("expected 6 numbers, found {}", vals.len()),
            ));
        }
        let l = Vector3::new(vals[0], vals[1], vals[2]);
        let r = Vector3::new(vals[3], vals[4], vals[5]);
        pairs.push(BinocularPair::new(l, r)?);
    }
    Ok(pairs)
}

pub fn write_pairs(pairs: &[BinocularPair]) -> String {
    let mut out = String::new();
    for p in pairs {
        // adding 0.0 turns -0 into 0
        let fields: Vec<String> =
            p.l.iter()
                .chain(p.r.iter())
                .map(|&x| g17(x + 0.0))
                .collect();
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::principal_angles;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair(l: [f64; 3], r: [f64; 3]) -> BinocularPair {
        BinocularPair::from_unnormalized(Vector3::from(l), Vector3::from(r)).unwrap()
    }

    #[test]
    fn quaternion_matrices_multiply() {
        let i = unit_basis(1);
        let j = unit_basis(2);
        // i j = k, j i = -k
        assert_eq!(left_mul(&i) * j, unit_basis(3));
        assert_eq!(right_mul(&i) * j, -unit_basis(3));
    }

    #[test]
    fn rotation_is_involution_with_zero_trace() {
        let p = pair([0.3, -0.4, 0.5], [1.0, 2.0, -0.5]);
        let a = p.rotation();
        assert!((a * a - Matrix4::identity()).abs().max() < 1e-14);
        assert!(a.trace().abs() < 1e-14);
        assert!((a.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_sign() {
        let p = pair([0.0, -1.0, 0.0], [1.0, 0.0, 0.0]);
        assert_eq!(p.l(), Vector3::new(0.0, 1.0, 0.0));
        assert_eq!(p.r(), Vector3::new(-1.0, 0.0, 0.0));
    }

    #[test]
    fn rejects_non_unit() {
        let e = Vector3::new(1.0, 0.0, 0.0);
        assert!(matches!(
            BinocularPair::new(e * 1.01, e),
            Err(Error::NotUnit(_))
        ));
        assert!(matches!(
            BinocularPair::new(e, Vector3::zeros()),
            Err(Error::NotUnit(_))
        ));
    }

    #[test]
    fn fixed_plane_round_trip() {
        let span =
            Subspace::from_rows(&[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]]).unwrap();
        let p = plane_to_pair(&span).unwrap();
        let back = pair_to_plane(&p).unwrap();
        let pa = principal_angles(&span, &back).unwrap();
        assert!(pa.chordal_squared() < 1e-18);
    }

    #[test]
    fn orthogonal_planes_differ_by_one_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Subspace::random(4, 2, &mut rng).unwrap();
        let a = plane_to_pair(&p).unwrap();
        let b = plane_to_pair(&p.complement().unwrap()).unwrap();
        assert!((a.l() - b.l()).norm() < 1e-9);
        assert!((a.r() + b.r()).norm() < 1e-9);
        let d = pair_distance(&a, &b);
        assert!((d.theta1 - PI / 2.0).abs() < 1e-9 && (d.theta2 - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_other_dimensions() {
        let line = Subspace::from_rows(&[vec![1.0, 0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(
            plane_to_pair(&line),
            Err(Error::NotAPlane { m: 4, n: 1 })
        ));
    }

    #[test]
    fn identical_pairs_are_at_zero() {
        let p = pair([1.0, 2.0, 3.0], [-1.0, 0.5, 0.0]);
        let d = pair_distance(&p, &p);
        assert_eq!(
            (d.theta1, d.theta2, d.chordal_squared, d.geodesic_squared),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn small_packing_sizes() {
        for count in 2..=5 {
            assert_eq!(small_packings(count).unwrap().len(), count);
        }
        assert!(matches!(small_packings(6), Err(Error::UnsupportedN(6))));
        assert!(matches!(small_packings(1), Err(Error::UnsupportedN(1))));
    }

    #[test]
    fn pairs_text_round_trip() {
        let pairs = vec![
            pair([0.1, 0.2, 0.3], [3.0, -1.0, 2.0]),
            pair([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]),
        ];
        let text = write_pairs(&pairs);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(parse_pairs(&text).unwrap(), pairs);
    }

    #[test]
    fn pairs_parse_errors() {
        assert!(matches!(
            parse_pairs("1 0 0 1 0"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_pairs("# c\n1 0 0 1 0 x"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_pairs("1 0 0 1 0 NaN"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_pairs("2 0 0 1 0 0"), Err(Error::NotUnit(_))));
        assert_eq!(parse_pairs("\n# nothing\n").unwrap(), vec![]);
    }
}
