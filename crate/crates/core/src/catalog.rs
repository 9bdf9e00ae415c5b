//! Record packings: best known minimal angles for lines in `R^3` and best
//! found `d_c^2` for planes in `R^4`, with a few exact constructions.

use std::fmt;

use crate::bounds::{orthoplex_bound, simplex_bound, BoundKind};
use crate::error::{Error, Result};
use crate::packing::{min_distance, Metric, Packing};

/// Tolerance for comparisons against 4-decimal table values.
pub const TABLE_TOL: f64 = 5e-5;

/// Best known minimal angle (degrees) of `N` lines in `R^3`, `N = 2..=28`.
const LINES_R3: [f64; 27] = [
    90.0000, 90.0000, 70.5288, 63.4349, 63.4349, 54.7356, 49.6399, 47.9821, 46.6746, 44.4031,
    41.8820, 39.8131, 38.6824, 38.1349, 37.3774, 35.2353, 34.4088, 33.2115, 32.7071, 32.2161,
    31.8963, 30.5062, 30.1628, 29.2486, 28.7126, 28.2495, 27.8473,
];

/// Best found `d_c^2` of `N` planes in `R^4`, `N = 3..=50`.
const PLANES_R4: [f64; 48] = [
    1.5000, 1.3333, 1.2500, 1.2000, 1.1667, 1.1429, 1.1231, 1.1111, 1.0000, 1.0000, 1.0000, 1.0000,
    1.0000, 1.0000, 1.0000, 1.0000, 0.9091, 0.9091, 0.8684, 0.8629, 0.8451, 0.8372, 0.8275, 0.8144,
    0.8056, 0.8005, 0.7889, 0.7809, 0.7760, 0.7691, 0.7592, 0.7549, 0.7489, 0.7477, 0.7286, 0.7198,
    0.7095, 0.7066, 0.6992, 0.6948, 0.6844, 0.6831, 0.6809, 0.6793, 0.6732, 0.6667, 0.6667, 0.6667,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimality {
    /// Known optimal by a direct argument.
    Proven,
    /// Meets the simplex or orthoplex bound.
    MeetsBound(BoundKind),
    BestKnown,
}

impl fmt::Display for Optimality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Optimality::Proven => f.write_str("proven"),
            Optimality::MeetsBound(kind) => write!(f, "{kind}-bound"),
            Optimality::BestKnown => f.write_str("best-known"),
        }
    }
}

/// Builtin constructors that realize a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    SmallPlanes(usize),
    Icosahedron,
    Octahedron,
    Clifford { i: u32, k: u32 },
}

impl Construction {
    pub fn build(self) -> Result<Packing> {
        match self {
            Construction::SmallPlanes(count) => crate::binocular::small_packings(count),
            Construction::Icosahedron => Ok(crate::binocular::icosahedron_packing()),
            Construction::Octahedron => Ok(crate::binocular::octahedron_packing()),
            Construction::Clifford { i, k } => crate::clifford::theorem3_packing(i, k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordEntry {
    pub m: usize,
    pub n: usize,
    pub count: usize,
    pub metric: Metric,
    /// Minimal angle in degrees for lines; minimal squared distance otherwise.
    pub value: f64,
    pub source: &'static str,
    pub optimality: Optimality,
    pub construction: Option<Construction>,
}

impl RecordEntry {
    pub fn is_line_record(&self) -> bool {
        self.n == 1
    }

    /// The record as a squared chordal distance, when it has one.
    pub fn chordal_squared(&self) -> Option<f64> {
        match (self.n, self.metric) {
            (1, _) => Some(angle_deg_to_chordal_squared(self.value)),
            (_, Metric::Chordal) => Some(self.value),
            _ => None,
        }
    }
}

/// `sin^2 theta` for a line angle in degrees.
pub fn angle_deg_to_chordal_squared(deg: f64) -> f64 {
    deg.to_radians().sin().powi(2)
}

/// Line angle in degrees with `sin^2 theta = d2`.
pub fn chordal_squared_to_angle_deg(d2: f64) -> f64 {
    d2.clamp(0.0, 1.0).sqrt().asin().to_degrees()
}

fn plane_optimality(count: usize, value: f64) -> Optimality {
    let kind = BoundKind::governing(4, count);
    let bound = match kind {
        BoundKind::Simplex => simplex_bound(4, 2, count),
        BoundKind::Orthoplex => orthoplex_bound(4, 2),
    }
    .expect("valid dimensions");
    if (bound - value).abs() <= TABLE_TOL {
        Optimality::MeetsBound(kind)
    } else {
        Optimality::BestKnown
    }
}

/// Every stored record, lines first, then planes by metric and `N`.
pub fn records() -> Vec<RecordEntry> {
    let mut out = Vec::new();
    for (k, &deg) in LINES_R3.iter().enumerate() {
        let count = k + 2;
        let optimality = match count {
            ..=6 => Optimality::Proven,
            7 => Optimality::MeetsBound(BoundKind::Orthoplex),
            _ => Optimality::BestKnown,
        };
        out.push(RecordEntry {
            m: 3,
            n: 1,
            count,
            metric: Metric::Geodesic,
            value: deg,
            source: "lines-in-R3 table",
            optimality,
            construction: None,
        });
    }

    let plane = |count: usize,
                 metric: Metric,
                 value: f64,
                 source: &'static str,
                 optimality,
                 construction| RecordEntry {
        m: 4,
        n: 2,
        count,
        metric,
        value,
        source,
        optimality,
        construction,
    };
    out.push(plane(
        2,
        Metric::Chordal,
        2.0,
        "explicit construction",
        Optimality::MeetsBound(BoundKind::Simplex),
        Some(Construction::SmallPlanes(2)),
    ));
    for (k, &value) in PLANES_R4.iter().enumerate() {
        let count = k + 3;
        let construction = match count {
            3..=5 => Some(Construction::SmallPlanes(count)),
            6 => Some(Construction::Icosahedron),
            18 => Some(Construction::Octahedron),
            _ => None,
        };
        out.push(plane(
            count,
            Metric::Chordal,
            value,
            "planes-in-R4 table",
            plane_optimality(count, value),
            construction,
        ));
    }
    use std::f64::consts::PI;
    out.push(plane(
        2,
        Metric::Geodesic,
        PI * PI / 2.0,
        "explicit construction",
        Optimality::Proven,
        Some(Construction::SmallPlanes(2)),
    ));
    out.push(plane(
        3,
        Metric::Geodesic,
        5.0 * PI * PI / 18.0,
        "explicit construction",
        Optimality::BestKnown,
        None,
    ));
    out.push(plane(
        6,
        Metric::Geodesic,
        2.6824,
        "explicit construction",
        Optimality::BestKnown,
        Some(Construction::Icosahedron),
    ));

    out.push(RecordEntry {
        m: 8,
        n: 4,
        count: 70,
        metric: Metric::Chordal,
        value: 2.0,
        source: "explicit construction",
        optimality: Optimality::MeetsBound(BoundKind::Orthoplex),
        construction: Some(Construction::Clifford { i: 3, k: 2 }),
    });
    out
}

/// Stored record for the key. For lines every metric selects the angle record.
pub fn lookup(m: usize, n: usize, count: usize, metric: Metric) -> Option<RecordEntry> {
    let metric = if n == 1 { Metric::Geodesic } else { metric };
    records()
        .into_iter()
        .find(|r| (r.m, r.n, r.count, r.metric) == (m, n, count, metric))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordStatus {
    Beats,
    Matches,
    Below,
}

impl fmt::Display for RecordStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecordStatus::Beats => "beats",
            RecordStatus::Matches => "matches",
            RecordStatus::Below => "below",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordComparison {
    pub status: RecordStatus,
    /// Achieved value in the record's units.
    pub achieved: f64,
    pub record: RecordEntry,
    /// `achieved - record.value`.
    pub delta: f64,
}

/// Compares the packing's minimum distance under its own metric with the
/// stored record, in the record's units.
pub fn verify_against_record(packing: &Packing, tol: f64) -> Result<RecordComparison> {
    let (m, n, count, metric) = (packing.m(), packing.n(), packing.len(), packing.metric());
    let record = lookup(m, n, count, metric).ok_or_else(|| Error::NoRecord {
        m,
        n,
        count,
        metric: metric.to_string(),
    })?;
    let achieved = if n == 1 {
        min_distance(packing, Metric::Geodesic)?.value.to_degrees()
    } else {
        min_distance(packing, metric)?.value.powi(2)
    };
    let delta = achieved - record.value;
    let status = if delta > tol {
        RecordStatus::Beats
    } else if delta >= -tol {
        RecordStatus::Matches
    } else {
        RecordStatus::Below
    };
    Ok(RecordComparison {
        status,
        achieved,
        record,
        delta,
    })
}

/// Tab-separated `m n N metric value source`, one record per line, with a
/// header line.
pub fn dump_tsv() -> String {
    let mut out = String::from("m\tn\tN\tmetric\tvalue\tsource\n");
    for r in records() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.m, r.n, r.count, r.metric, r.value, r.source
        ));
    }
    out
}
