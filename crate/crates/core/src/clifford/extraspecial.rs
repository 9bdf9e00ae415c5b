//! The extraspecial group `E` generated by `X(a)`, `Y(b)` on `R^(2^i)`, and
//! the quadratic form it induces on `E / {+-I} = F_2^(2i)`.

use std::collections::HashSet;

use crate::error::{Error, Result};

use super::exact::ExactMatrix;

/// A vector of `F_2^width`, bit `j` holding coordinate `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct F2Vec {
    width: u32,
    bits: u64,
}

impl F2Vec {
    pub fn new(width: u32, bits: u64) -> Result<Self> {
        if width > 32 || bits >> width != 0 {
            return Err(Error::BadParams(format!(
                "{bits:#b} does not fit in {width} bits"
            )));
        }
        Ok(F2Vec { width, bits })
    }

    pub fn zero(width: u32) -> Self {
        F2Vec { width, bits: 0 }
    }

    pub fn unit(width: u32, j: u32) -> Self {
        assert!(j < width, "unit vector index out of range");
        F2Vec {
            width,
            bits: 1 << j,
        }
    }

    pub fn width(self) -> u32 {
        self.width
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn dot(self, other: F2Vec) -> u8 {
        ((self.bits & other.bits).count_ones() % 2) as u8
    }

    pub fn add(self, other: F2Vec) -> F2Vec {
        assert_eq!(self.width, other.width, "width mismatch");
        F2Vec {
            width: self.width,
            bits: self.bits ^ other.bits,
        }
    }

    /// All `2^width` vectors in increasing bit order.
    pub fn all(width: u32) -> impl Iterator<Item = F2Vec> {
        (0..1u64 << width).map(move |bits| F2Vec { width, bits })
    }
}

fn dot_bits(u: usize, v: usize) -> u8 {
    ((u & v).count_ones() % 2) as u8
}

fn sign(bit: u8) -> i64 {
    if bit == 0 {
        1
    } else {
        -1
    }
}

/// `X(a): e_u -> e_(u+a)`.
pub fn x_gate(i: u32, a: F2Vec) -> ExactMatrix {
    let m = 1usize << i;
    let a = a.bits as usize;
    ExactMatrix::from_fn(m, m, |r, c| i64::from(r == c ^ a))
}

/// `Y(b): e_u -> (-1)^(b.u) e_u`.
pub fn y_gate(i: u32, b: F2Vec) -> ExactMatrix {
    let m = 1usize << i;
    let b = b.bits as usize;
    ExactMatrix::from_fn(m, m, |r, c| if r == c { sign(dot_bits(b, c)) } else { 0 })
}

/// `Q(X(a) Y(b)) = a.b`.
pub fn quad_form(a: F2Vec, b: F2Vec) -> u8 {
    a.dot(b)
}

/// `B((a,b), (a',b')) = a.b' + a'.b`.
pub fn bilin_form(g1: (F2Vec, F2Vec), g2: (F2Vec, F2Vec)) -> u8 {
    (g1.0.dot(g2.1) + g2.0.dot(g1.1)) % 2
}

/// `(-1)^sign X(a) Y(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtraspecialElement {
    pub a: F2Vec,
    pub b: F2Vec,
    /// 0 for `+`, 1 for `-`.
    pub sign: u8,
}

impl ExtraspecialElement {
    pub fn new(a: F2Vec, b: F2Vec, negative: bool) -> Self {
        assert_eq!(a.width, b.width, "width mismatch");
        ExtraspecialElement {
            a,
            b,
            sign: u8::from(negative),
        }
    }

    pub fn width(&self) -> u32 {
        self.a.width
    }

    /// Product by the group law
    /// `X(a)Y(b) X(a')Y(b') = (-1)^(a'.b) X(a+a') Y(b+b')`.
    pub fn compose(&self, other: &Self) -> Self {
        ExtraspecialElement {
            a: self.a.add(other.a),
            b: self.b.add(other.b),
            sign: (self.sign + other.sign + other.a.dot(self.b)) % 2,
        }
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        let i = self.width();
        let g = &x_gate(i, self.a) * &y_gate(i, self.b);
        if self.sign == 1 {
            g.neg()
        } else {
            g
        }
    }

    /// Recovers `(-1)^s X(a) Y(b)` from its matrix, if it is one.
    pub fn from_matrix(i: u32, g: &ExactMatrix) -> Option<Self> {
        let m = 1usize << i;
        if g.nrows() != m || g.ncols() != m || g.half_exp() != 0 {
            return None;
        }
        let ints = g.ints();
        // column 0 is (-1)^s e_a
        let a = (0..m).find(|&r| ints[r * m] != 0)?;
        let negative = ints[a * m] < 0;
        let mut b = 0u64;
        for j in 0..i {
            let u = 1usize << j;
            let entry = ints[(u ^ a) * m + u];
            if entry == 0 {
                return None;
            }
            if (entry < 0) != negative {
                b |= 1 << j;
            }
        }
        let e = ExtraspecialElement::new(
            F2Vec::new(i, a as u64).ok()?,
            F2Vec::new(i, b).ok()?,
            negative,
        );
        (e.to_matrix() == *g).then_some(e)
    }

    /// Quadratic form of the image in `E / {+-I}`.
    pub fn q(&self) -> u8 {
        quad_form(self.a, self.b)
    }

    /// All `2^(2i+1)` elements.
    pub fn all(i: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for a in F2Vec::all(i) {
            for b in F2Vec::all(i) {
                for negative in [false, true] {
                    out.push(ExtraspecialElement::new(a, b, negative));
                }
            }
        }
        out
    }
}

/// Number of `d`-dimensional totally singular subspaces of `F_2^(2i)` under
/// `Q(a,b) = a.b`, by exhaustive search. Limited to `i <= 3`.
pub fn singular_subspace_count(i: u32, d: u32) -> Result<u64> {
    if i > 3 {
        return Err(Error::TooLarge(i as usize));
    }
    if i == 0 || d == 0 || d > i {
        return Err(Error::BadParams(format!(
            "need 1 <= d <= i, got i = {i}, d = {d}"
        )));
    }
    // vector v holds a in its low i bits and b in its high i bits; a subspace
    // is the bitmask of its 2^dim elements
    let mask = (1usize << i) - 1;
    let q = |v: usize| dot_bits(v & mask, v >> i);
    let b = |v: usize, w: usize| (dot_bits(v & mask, w >> i) + dot_bits(w & mask, v >> i)) % 2;
    let singular: Vec<usize> = (1..1usize << (2 * i)).filter(|&v| q(v) == 0).collect();

    let mut level: HashSet<u64> = HashSet::from([1u64]); // {0}
    for _ in 0..d {
        let mut next = HashSet::new();
        for &space in &level {
            let members: Vec<usize> = (0..64).filter(|&x| space >> x & 1 == 1).collect();
            for &v in &singular {
                if space >> v & 1 == 1 || members.iter().any(|&w| b(v, w) == 1) {
                    continue;
                }
                let grown = members.iter().fold(space, |acc, &w| acc | 1u64 << (w ^ v));
                next.insert(grown);
            }
        }
        level = next;
    }
    Ok(level.len() as u64)
}
