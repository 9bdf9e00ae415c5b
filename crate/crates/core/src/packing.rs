//! Packings: lists of subspaces of a common Grassmannian.

use std::fmt;
use std::str::FromStr;

use crate::angles::symmetric_angles;
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// Distance used to score a packing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Chordal,
    Geodesic,
    MaxAngle,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Chordal, Metric::Geodesic, Metric::MaxAngle];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Chordal => "chordal",
            Metric::Geodesic => "geodesic",
            Metric::MaxAngle => "maxangle",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chordal" => Ok(Metric::Chordal),
            "geodesic" => Ok(Metric::Geodesic),
            "maxangle" => Ok(Metric::MaxAngle),
            other => Err(Error::BadParams(format!("unknown metric {other:?}"))),
        }
    }
}

/// `N >= 1` subspaces sharing `(m, n)`, tagged with the metric they were
/// built for.
#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    metric: Metric,
    subspaces: Vec<Subspace>,
}

impl Packing {
    pub fn new(subspaces: Vec<Subspace>, metric: Metric) -> Result<Self> {
        let first = subspaces.first().ok_or_else(|| {
            Error::BadDimensions("packing must contain at least one subspace".into())
        })?;
        let (m, n) = (first.m(), first.n());
        if let Some((i, s)) = subspaces
            .iter()
            .enumerate()
            .find(|(_, s)| s.m() != m || s.n() != n)
        {
            return Err(Error::DimensionMismatch(format!(
                "subspace {i} is in G({},{}), expected G({m},{n})",
                s.m(),
                s.n()
            )));
        }
        Ok(Packing { metric, subspaces })
    }

    pub fn m(&self) -> usize {
        self.subspaces[0].m()
    }

    pub fn n(&self) -> usize {
        self.subspaces[0].n()
    }

    /// Number of subspaces `N`.
    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn into_subspaces(self) -> Vec<Subspace> {
        self.subspaces
    }

    /// All unordered pairs `(i, j, d(P_i, P_j))`, `i < j`, in lexicographic order.
    pub fn pairwise(&self, metric: Metric) -> Vec<(usize, usize, f64)> {
        let s = &self.subspaces;
        let mut out = Vec::with_capacity(s.len() * s.len().saturating_sub(1) / 2);
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let d = symmetric_angles(&s[i], &s[j])
                    .expect("packing members share dimensions")
                    .distance(metric);
                out.push((i, j, d));
            }
        }
        out
    }
}

/// Smallest pairwise distance and the pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinDistance {
    pub value: f64,
    pub pair: (usize, usize),
}

/// Minimum distance over all unordered pairs. Ties go to the lexicographically
/// smallest index pair.
pub fn min_distance(packing: &Packing, metric: Metric) -> Result<MinDistance> {
    if packing.len() < 2 {
        return Err(Error::TooFewSubspaces(packing.len()));
    }
    let mut best = MinDistance {
        value: f64::INFINITY,
        pair: (0, 1),
    };
    for (i, j, d) in packing.pairwise(metric) {
        if d < best.value {
            best = MinDistance {
                value: d,
                pair: (i, j),
            };
        }
    }
    Ok(best)
}

/// Per-member nearest-neighbour distance.
pub fn nearest_neighbour_distances(packing: &Packing, metric: Metric) -> Vec<f64> {
    let mut near = vec![f64::INFINITY; packing.len()];
    for (i, j, d) in packing.pairwise(metric) {
        near[i] = near[i].min(d);
        near[j] = near[j].min(d);
    }
    near
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{canonical_first, canonical_second};

    #[test]
    fn metric_round_trips_through_text() {
        for m in Metric::ALL {
            assert_eq!(m.as_str().parse::<Metric>().unwrap(), m);
        }
        assert!("euclid".parse::<Metric>().is_err());
    }

    #[test]
    fn identical_pair_has_zero_min() {
        let p = Subspace::new(canonical_first(4, 2)).unwrap();
        let packing = Packing::new(vec![p.clone(), p], Metric::Chordal).unwrap();
        let md = min_distance(&packing, Metric::Chordal).unwrap();
        assert_eq!(md.pair, (0, 1));
        assert!(md.value < 1e-8);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let a = Subspace::new(canonical_second(2, &[0.0])).unwrap();
        let b = Subspace::new(canonical_second(2, &[std::f64::consts::FRAC_PI_2])).unwrap();
        // a, b, a, b: pairs (0,1), (0,3), (1,2), (2,3) are all pi/2; (0,2), (1,3) are 0
        let packing = Packing::new(vec![a.clone(), b.clone(), a, b], Metric::Chordal).unwrap();
        let md = min_distance(&packing, Metric::Chordal).unwrap();
        assert_eq!(md.pair, (0, 2));
    }

    #[test]
    fn too_few_and_mixed() {
        let p = Subspace::new(canonical_first(4, 2)).unwrap();
        let single = Packing::new(vec![p.clone()], Metric::Chordal).unwrap();
        assert!(matches!(
            min_distance(&single, Metric::Chordal),
            Err(Error::TooFewSubspaces(1))
        ));
        let q = Subspace::new(canonical_first(4, 1)).unwrap();
        assert!(Packing::new(vec![p, q], Metric::Chordal).is_err());
        assert!(Packing::new(vec![], Metric::Chordal).is_err());
    }
}
