//! Exact subspaces and their orbits under finite matrix groups.

use std::collections::{HashSet, VecDeque};

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::packing::{Metric, Packing};
use crate::subspace::Subspace;

use super::counting::theorem3_count;
use super::exact::ExactMatrix;
use super::extraspecial::{x_gate, y_gate, F2Vec};

/// A subspace stored as its exact, rational projection matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactSubspace {
    n: usize,
    proj: ExactMatrix,
}

impl ExactSubspace {
    /// Checks that `proj` is rational, symmetric and idempotent.
    pub fn new(proj: ExactMatrix) -> Result<Self> {
        let bad = |msg: &str| Err(Error::BadParams(msg.to_string()));
        if proj.nrows() != proj.ncols() {
            return bad("projection must be square");
        }
        if proj.rational_entries().is_none() {
            return bad("projection entries must be rational");
        }
        if !proj.is_symmetric() || &proj * &proj != proj {
            return bad("not an orthogonal projection");
        }
        let trace = proj.trace_rational().expect("rational entries");
        if !trace.is_integer() || *trace.numer() < 1 {
            return bad("projection has no positive integer rank");
        }
        Ok(ExactSubspace {
            n: *trace.numer() as usize,
            proj,
        })
    }

    /// Span of the coordinate vectors `e_u`, `u` in `indices`.
    pub fn coordinate_span(m: usize, indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&u| u >= m) {
            return Err(Error::BadParams("coordinate index out of range".into()));
        }
        Self::new(ExactMatrix::from_fn(m, m, |r, c| {
            i64::from(r == c && indices.contains(&r))
        }))
    }

    /// Span of mutually orthogonal integer vectors whose squared norms are
    /// powers of two.
    pub fn from_int_rows(m: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut proj = ExactMatrix::new(m, m, vec![0; m * m], 0);
        for (k, v) in rows.iter().enumerate() {
            if v.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "row {k} has {} entries, expected {m}",
                    v.len()
                )));
            }
            let norm2: i64 = v.iter().map(|x| x * x).sum();
            if norm2 <= 0 || norm2 & (norm2 - 1) != 0 {
                return Err(Error::BadParams(format!(
                    "row {k} has squared norm {norm2}, not a power of two"
                )));
            }
            for w in &rows[..k] {
                if v.iter().zip(w).map(|(a, b)| a * b).sum::<i64>() != 0 {
                    return Err(Error::BadParams("rows are not orthogonal".into()));
                }
            }
            let outer = ExactMatrix::from_fn(m, m, |r, c| v[r] * v[c]);
            let scaled = ExactMatrix::new(m, m, outer.ints().to_vec(), 2 * norm2.trailing_zeros());
            proj = proj.checked_add(&scaled).expect("both rational");
        }
        Self::new(proj)
    }

    pub fn m(&self) -> usize {
        self.proj.nrows()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn projection(&self) -> &ExactMatrix {
        &self.proj
    }

    /// Row-major projection entries in lowest terms.
    pub fn key(&self) -> Vec<Ratio<i64>> {
        self.proj
            .rational_entries()
            .expect("projection is rational")
    }

    /// Image under an orthogonal `g`: projection `g P g^T`. `None` when the
    /// image is not rational.
    pub fn transformed(&self, g: &ExactMatrix) -> Option<Self> {
        let proj = &(g * &self.proj) * &g.transpose();
        proj.rational_entries()?;
        Some(ExactSubspace { n: self.n, proj })
    }

    /// `d_c^2 = n - tr(P Q)`, exactly.
    pub fn chordal_squared(&self, other: &Self) -> Ratio<i64> {
        let overlap = self
            .proj
            .frobenius_dot(&other.proj)
            .expect("rational projections");
        Ratio::from_integer(self.n as i64) - overlap
    }

    /// `tr((P Q)^j)` for `j = 1..=n`: the power sums of the `cos^2` of the
    /// principal angles.
    pub fn cos2_power_sums(&self, other: &Self) -> Vec<Ratio<i64>> {
        let pq = &self.proj * &other.proj;
        let mut acc = pq.clone();
        let mut sums = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            sums.push(acc.trace_rational().expect("rational product"));
            acc = &acc * &pq;
        }
        sums
    }

    pub fn to_subspace(&self) -> Result<Subspace> {
        Subspace::from_projection(&self.proj.to_f64(), self.n)
    }
}

/// A packing held as exact subspaces, in orbit order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPacking {
    pub subspaces: Vec<ExactSubspace>,
}

impl ExactPacking {
    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    /// All pairwise `d_c^2`, sorted.
    pub fn distance_spectrum(&self) -> Vec<Ratio<i64>> {
        let s = &self.subspaces;
        let mut out = Vec::with_capacity(s.len() * s.len().saturating_sub(1) / 2);
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                out.push(s[a].chordal_squared(&s[b]));
            }
        }
        out.sort();
        out
    }

    pub fn min_chordal_squared(&self) -> Option<Ratio<i64>> {
        self.distance_spectrum().first().copied()
    }

    pub fn to_packing(&self, metric: Metric) -> Result<Packing> {
        let subs = self
            .subspaces
            .iter()
            .map(ExactSubspace::to_subspace)
            .collect::<Result<_>>()?;
        Packing::new(subs, metric)
    }
}

/// Breadth-first closure of `seeds` under `gens`, in insertion order.
/// Fails with `OrbitOverflow` once more than `cap` subspaces turn up.
pub fn orbit(
    seeds: &[ExactSubspace],
    gens: &[ExactMatrix],
    cap: usize,
) -> Result<Vec<ExactSubspace>> {
    let mut seen: HashSet<ExactSubspace> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            order.push(s.clone());
            queue.push_back(s.clone());
        }
    }
    while let Some(s) = queue.pop_front() {
        for g in gens {
            let image = s.transformed(g).ok_or_else(|| {
                Error::BadParams("generator maps a projection outside the rationals".into())
            })?;
            if seen.insert(image.clone()) {
                if order.len() == cap {
                    return Err(Error::OrbitOverflow { cap });
                }
                order.push(image.clone());
                queue.push_back(image);
            }
        }
    }
    Ok(order)
}

/// `G(A, a): e_u -> e_(f(u))` for an affine bijection `f` of `F_2^i`.
pub fn permutation_gate(i: u32, f: impl Fn(usize) -> usize) -> ExactMatrix {
    let m = 1usize << i;
    ExactMatrix::from_fn(m, m, |r, c| i64::from(r == f(c)))
}

/// `H_(u,v) = 2^(-i/2) (-1)^(u.v)`.
pub fn hadamard(i: u32) -> ExactMatrix {
    let m = 1usize << i;
    let ints = (0..m * m)
        .map(|k| {
            if ((k / m) & (k % m)).count_ones() % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    ExactMatrix::new(m, m, ints, i)
}

/// The 2x2 Hadamard acting on bit `j` of the index, identity on the others.
pub fn partial_hadamard(i: u32, j: u32) -> ExactMatrix {
    let m = 1usize << i;
    let ints = (0..m * m)
        .map(|k| {
            let (r, c) = (k / m, k % m);
            if (r ^ c) & !(1 << j) != 0 {
                0
            } else if (r & c) >> j & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect();
    ExactMatrix::new(m, m, ints, 1)
}

/// Generators of the Clifford group on `R^(2^i)`: `X(e_j)`, `Y(e_j)`, the
/// transvections `G(I + E_st, 0)`, the one-bit Hadamards and `H`. The
/// translations `G(I, e_j)` coincide with `X(e_j)`.
///
/// `H` alone is not enough: with only `E`, the `G(A, a)` and `H`, the image
/// of the group in `O+(2i, 2)` is `GL(i, 2)` extended by one swap, which is
/// too small once `i >= 2`. The one-bit Hadamards supply the rest.
pub fn group_generators(i: u32) -> Result<Vec<ExactMatrix>> {
    if i == 0 {
        return Err(Error::BadParams("need i >= 1".into()));
    }
    let mut gens = Vec::new();
    for j in 0..i {
        gens.push(x_gate(i, F2Vec::unit(i, j)));
    }
    for j in 0..i {
        gens.push(y_gate(i, F2Vec::unit(i, j)));
    }
    for s in 0..i {
        for t in 0..i {
            if s != t {
                gens.push(permutation_gate(i, |u| u ^ (((u >> t) & 1) << s)));
            }
        }
    }
    for j in 0..i {
        gens.push(partial_hadamard(i, j));
    }
    gens.push(hadamard(i));
    Ok(gens)
}

/// Exact orbit of `P_0 = span{e_u : u < 2^k}` under the Clifford group on
/// `R^(2^i)`. Limited to `i <= 3`.
pub fn clifford_orbit(i: u32, k: u32) -> Result<ExactPacking> {
    let count = theorem3_count(i, k)?;
    if i > 3 {
        return Err(Error::TooLarge(i as usize));
    }
    let cap = 10 * count.to_usize().expect("small for i <= 3");
    let m = 1usize << i;
    let seed = ExactSubspace::coordinate_span(m, &(0..1usize << k).collect::<Vec<_>>())?;
    let gens = group_generators(i)?;
    let subspaces = orbit(&[seed], &gens, cap)?;
    Ok(ExactPacking { subspaces })
}

/// The orbit above as a floating-point packing in `G(2^i, 2^k)`.
pub fn theorem3_packing(i: u32, k: u32) -> Result<Packing> {
    clifford_orbit(i, k)?.to_packing(Metric::Chordal)
}

/// Safety cap on the closure of the two 4-spaces in `R^8`.
pub const SEVENTY_CAP: usize = 1000;

const SEVENTY_SEEDS: [[&str; 4]; 2] = [
    ["10000000", "01000000", "00100000", "00001000"],
    ["11000000", "00101000", "00010001", "00000110"],
];

/// Coordinates are labelled `inf, 0, 1, ..., 6`; label `j` sits at index
/// `j + 1`, `inf` at index 0.
fn label_permutation(cycles: &[&[Option<usize>]]) -> ExactMatrix {
    let idx = |label: Option<usize>| label.map_or(0, |j| j + 1);
    let mut image: Vec<usize> = (0..8).collect();
    for cycle in cycles {
        for (k, &from) in cycle.iter().enumerate() {
            image[idx(from)] = idx(cycle[(k + 1) % cycle.len()]);
        }
    }
    ExactMatrix::from_fn(8, 8, |r, c| i64::from(r == image[c]))
}

/// Even sign changes and the permutations `(0123456)`,
/// `(inf 0)(16)(23)(45)` and `(124)(365)`.
pub fn seventy_generators() -> Vec<ExactMatrix> {
    let s = Some;
    let mut gens = vec![
        label_permutation(&[&[s(0), s(1), s(2), s(3), s(4), s(5), s(6)]]),
        label_permutation(&[&[None, s(0)], &[s(1), s(6)], &[s(2), s(3)], &[s(4), s(5)]]),
        label_permutation(&[&[s(1), s(2), s(4)], &[s(3), s(6), s(5)]]),
    ];
    for c in 0..7 {
        gens.push(ExactMatrix::from_fn(8, 8, |r, col| {
            if r != col {
                0
            } else if r == c || r == c + 1 {
                -1
            } else {
                1
            }
        }));
    }
    gens
}

pub fn seventy_seeds() -> Vec<ExactSubspace> {
    SEVENTY_SEEDS
        .iter()
        .map(|rows| {
            let ints: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| r.bytes().map(|b| i64::from(b == b'1')).collect())
                .collect();
            ExactSubspace::from_int_rows(8, &ints).expect("seed rows are orthogonal")
        })
        .collect()
}

/// Closure of the two seed 4-spaces under [`seventy_generators`].
pub fn seventy_orbit() -> Result<ExactPacking> {
    let subspaces =
        orbit(&seventy_seeds(), &seventy_generators(), SEVENTY_CAP).map_err(|e| match e {
            Error::OrbitOverflow { cap } => Error::ClosureOverflow { cap },
            other => other,
        })?;
    Ok(ExactPacking { subspaces })
}

/// The 70 4-spaces of `R^8` as a floating-point packing.
pub fn seventy_packing_eq55() -> Result<Packing> {
    seventy_orbit()?.to_packing(Metric::Chordal)
}
