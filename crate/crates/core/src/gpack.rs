//! The `.gpack` text format for packings.
//!
//! ```text
//! gpack 1
//! m <int> n <int> N <int> metric <chordal|geodesic|maxangle>
//! # subspace 0
//! <n lines of m floats>
//! # subspace 1
//! ...
//! ```
//!
//! Blank lines and lines starting with `#` after the header are ignored.
//! Floats are written with 17 significant digits so they read back exactly.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numfmt::g17;
use crate::packing::{Metric, Packing};
use crate::subspace::{orthonormality_defect, Subspace};

pub const MAGIC: &str = "gpack 1";

/// Contents of a `.gpack` file before the orthonormality check.
#[derive(Debug, Clone, PartialEq)]
pub struct GpackData {
    pub m: usize,
    pub n: usize,
    pub metric: Metric,
    /// `N` generator matrices, each `n x m`.
    pub generators: Vec<DMatrix<f64>>,
}

impl GpackData {
    /// Largest `|gen gen^T - I|` entry per subspace.
    pub fn orthonormality_defects(&self) -> Vec<f64> {
        self.generators.iter().map(orthonormality_defect).collect()
    }

    /// Validates every generator and assembles the packing.
    pub fn into_packing(self) -> Result<Packing> {
        let subspaces = self
            .generators
            .into_iter()
            .map(Subspace::new)
            .collect::<Result<Vec<_>>>()?;
        Packing::new(subspaces, self.metric)
    }
}

/// Parses `.gpack` text. Checks structure and finiteness only; use
/// [`GpackData::into_packing`] to enforce orthonormal generators.
pub fn parse_gpack(text: &str) -> Result<GpackData> {
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()));

    match lines.next() {
        Some((_, MAGIC)) => {}
        Some((no, other)) => {
            return Err(Error::parse(
                no,
                format!("expected {MAGIC:?}, found {other:?}"),
            ));
        }
        None => return Err(Error::parse(1, "empty input")),
    }

    let (hdr_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing dimension header"))?;
    let (m, n, count, metric) = parse_header(hdr_no, header)?;

    let mut generators = Vec::new();
    let mut rows: Vec<f64> = Vec::new();
    let mut rows_in_block = 0;
    for (no, line) in lines {
        let body = line.trim_start();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        if generators.len() == count {
            return Err(Error::parse(
                no,
                format!("data beyond the declared {count} subspaces"),
            ));
        }
        let mut fields = 0;
        for tok in body.split_whitespace() {
            fields += 1;
            if fields > m {
                return Err(Error::parse(
                    no,
                    format!("more than m = {m} values on a row"),
                ));
            }
            let x: f64 = tok
                .parse()
                .map_err(|_| Error::parse(no, format!("not a number: {tok:?}")))?;
            if !x.is_finite() {
                return Err(Error::parse(no, format!("non-finite value {tok:?}")));
            }
            rows.push(x);
        }
        if fields != m {
            return Err(Error::parse(
                no,
                format!("expected {m} values, found {fields}"),
            ));
        }
        rows_in_block += 1;
        if rows_in_block == n {
            generators.push(DMatrix::from_row_slice(n, m, &rows));
            rows.clear();
            rows_in_block = 0;
        }
    }
    if generators.len() != count || rows_in_block != 0 {
        let last = text.split('\n').count();
        return Err(Error::parse(
            last,
            format!(
                "expected {count} subspaces of {n} rows, found {} complete plus {rows_in_block} rows",
                generators.len()
            ),
        ));
    }
    Ok(GpackData {
        m,
        n,
        metric,
        generators,
    })
}

fn parse_header(no: usize, header: &str) -> Result<(usize, usize, usize, Metric)> {
    let toks: Vec<&str> = header.split_whitespace().collect();
    let bad = || {
        Error::parse(
            no,
            format!("expected `m <int> n <int> N <int> metric <name>`, found {header:?}"),
        )
    };
    if toks.len() != 8 || toks[0] != "m" || toks[2] != "n" || toks[4] != "N" || toks[6] != "metric"
    {
        return Err(bad());
    }
    let int = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let (m, n, count) = (int(toks[1])?, int(toks[3])?, int(toks[5])?);
    let metric: Metric = toks[7]
        .parse()
        .map_err(|_| Error::parse(no, format!("unknown metric {:?}", toks[7])))?;
    if n == 0 || n > m {
        return Err(Error::parse(
            no,
            format!("need 1 <= n <= m, got m = {m}, n = {n}"),
        ));
    }
    if count == 0 {
        return Err(Error::parse(no, "N must be positive"));
    }
    Ok((m, n, count, metric))
}

/// Serialises a packing. `comments` are emitted as `# ` lines after the header.
pub fn write_gpack(packing: &Packing, comments: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(
        out,
        "m {} n {} N {} metric {}",
        packing.m(),
        packing.n(),
        packing.len(),
        packing.metric()
    );
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for (idx, s) in packing.subspaces().iter().enumerate() {
        let _ = writeln!(out, "# subspace {idx}");
        for row in s.generator().row_iter() {
            let cells: Vec<String> = row.iter().map(|&x| g17(x)).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
    }
    out
}
