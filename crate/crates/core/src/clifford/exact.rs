//! Matrices with entries in `2^(-h/2) Z`, multiplied without rounding.

use std::ops::Mul;

use nalgebra::DMatrix;
use num_rational::Ratio;

/// An integer matrix scaled by `2^(-half_exp/2)`.
///
/// Kept reduced: `half_exp` is lowered by 2 while every entry is even, and
/// the zero matrix has `half_exp = 0`. Equal matrices therefore have equal
/// representations, so the derived `Eq` and `Hash` are exact comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    half_exp: u32,
    ints: Vec<i64>,
}

impl ExactMatrix {
    /// `ints` in row-major order.
    pub fn new(rows: usize, cols: usize, ints: Vec<i64>, half_exp: u32) -> Self {
        assert_eq!(ints.len(), rows * cols, "entry count does not match shape");
        let mut out = ExactMatrix {
            rows,
            cols,
            half_exp,
            ints,
        };
        out.reduce();
        out
    }

    pub fn identity(m: usize) -> Self {
        Self::from_fn(m, m, |r, c| i64::from(r == c))
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let ints = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self::new(rows, cols, ints, 0)
    }

    fn reduce(&mut self) {
        if self.ints.iter().all(|&x| x == 0) {
            self.half_exp = 0;
            return;
        }
        while self.half_exp >= 2 && self.ints.iter().all(|x| x % 2 == 0) {
            self.ints.iter_mut().for_each(|x| *x /= 2);
            self.half_exp -= 2;
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn half_exp(&self) -> u32 {
        self.half_exp
    }

    pub fn ints(&self) -> &[i64] {
        &self.ints
    }

    pub fn transpose(&self) -> Self {
        let ints = (0..self.rows * self.cols)
            .map(|k| self.ints[(k % self.rows) * self.cols + k / self.rows])
            .collect();
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            half_exp: self.half_exp,
            ints,
        }
    }

    pub fn neg(&self) -> Self {
        ExactMatrix {
            ints: self.ints.iter().map(|x| -x).collect(),
            ..self.clone()
        }
    }

    /// Sum of two matrices; `None` when one has a rational scale and the
    /// other an irrational one (the sum leaves the representable ring).
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        let zero_a = self.ints.iter().all(|&x| x == 0);
        let zero_b = other.ints.iter().all(|&x| x == 0);
        if zero_a {
            return Some(other.clone());
        }
        if zero_b {
            return Some(self.clone());
        }
        if self.half_exp % 2 != other.half_exp % 2 {
            return None;
        }
        let h = self.half_exp.max(other.half_exp);
        let lift = |m: &Self, k: usize| m.ints[k] << ((h - m.half_exp) / 2);
        let ints = (0..self.ints.len())
            .map(|k| lift(self, k) + lift(other, k))
            .collect();
        Some(Self::new(self.rows, self.cols, ints, h))
    }

    /// `G^T G = I`, checked exactly.
    pub fn is_orthogonal(&self) -> bool {
        self.rows == self.cols && &self.transpose() * self == Self::identity(self.rows)
    }

    pub fn is_symmetric(&self) -> bool {
        self.transpose() == *self
    }

    /// Entry as a rational, or `None` when the scale is irrational.
    pub fn rational(&self, r: usize, c: usize) -> Option<Ratio<i64>> {
        let x = self.ints[r * self.cols + c];
        if x == 0 {
            return Some(Ratio::from_integer(0));
        }
        (self.half_exp % 2 == 0).then(|| Ratio::new(x, 1i64 << (self.half_exp / 2)))
    }

    /// All entries in row-major order in lowest terms, when rational.
    pub fn rational_entries(&self) -> Option<Vec<Ratio<i64>>> {
        (0..self.rows * self.cols)
            .map(|k| self.rational(k / self.cols, k % self.cols))
            .collect()
    }

    pub fn trace_rational(&self) -> Option<Ratio<i64>> {
        let t: i64 = (0..self.rows.min(self.cols))
            .map(|k| self.ints[k * self.cols + k])
            .sum();
        if t == 0 {
            return Some(Ratio::from_integer(0));
        }
        (self.half_exp % 2 == 0).then(|| Ratio::new(t, 1i64 << (self.half_exp / 2)))
    }

    /// `sum_ab A_ab B_ab`, i.e. `tr(A^T B)`, when rational.
    pub fn frobenius_dot(&self, other: &Self) -> Option<Ratio<i64>> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        let s: i64 = self.ints.iter().zip(&other.ints).map(|(a, b)| a * b).sum();
        let h = self.half_exp + other.half_exp;
        if s == 0 {
            return Some(Ratio::from_integer(0));
        }
        (h % 2 == 0).then(|| Ratio::new(s, 1i64 << (h / 2)))
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let scale = 2f64.powf(-(self.half_exp as f64) / 2.0);
        DMatrix::from_row_iterator(
            self.rows,
            self.cols,
            self.ints.iter().map(|&x| x as f64 * scale),
        )
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let (n, k, p) = (self.rows, self.cols, rhs.cols);
        let mut ints = vec![0i64; n * p];
        for r in 0..n {
            for t in 0..k {
                let a = self.ints[r * k + t];
                if a == 0 {
                    continue;
                }
                for c in 0..p {
                    ints[r * p + c] += a * rhs.ints[t * p + c];
                }
            }
        }
        ExactMatrix::new(n, p, ints, self.half_exp + rhs.half_exp)
    }
}
