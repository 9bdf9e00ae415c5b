//! Multi-start maximisation of the minimum pairwise distance of a packing.
//!
//! Each start samples `N` uniform random subspaces and runs projected
//! gradient ascent on the softmin surrogate
//!
//! ```text
//! S_beta = -(1/beta) log sum_{i<j} exp(-beta d^2(P_i, P_j))
//! ```
//!
//! with `beta` sharpened geometrically across stages. Steps follow the
//! horizontal gradient, are accepted by a backtracking (Armijo) line search,
//! and are retracted onto orthonormal generators by QR.

mod gradient;

pub use gradient::{
    chordal_pair_gradient, chordal_trace_form, geodesic_pair_gradient_fd, gradient_chordal,
    gradient_geodesic_fd, horizontal, KINK_TOL,
};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::packing::{min_distance, nearest_neighbour_distances, Metric, Packing};
use crate::subspace::{qr_orthonormal, Subspace};

use gradient::geodesic_squared_raw;

/// Default rattler tolerance on the distance scale.
pub const RATTLER_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSchedule {
    pub initial: f64,
    pub growth: f64,
    pub stages: usize,
}

impl BetaSchedule {
    pub fn final_beta(&self) -> f64 {
        self.initial * self.growth.powi(self.stages.saturating_sub(1) as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub initial: f64,
    pub shrink: f64,
    pub min_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub starts: usize,
    /// Line-search evaluations allowed per beta stage.
    pub max_iters: usize,
    pub seed: u64,
    pub metric: Metric,
    pub beta: BetaSchedule,
    pub step: StepControl,
    /// Central-difference step for the geodesic gradient at the last stage.
    pub fd_step: f64,
    /// Difference step at the first stage. The step shrinks geometrically to
    /// `fd_step` over the stages, which smooths the kinks of the geodesic
    /// distance early on.
    pub fd_start: f64,
    /// Stop a start early once its minimum distance reaches `target - 1e-9`.
    pub target: Option<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            starts: 100,
            max_iters: 400,
            seed: 0,
            metric: Metric::Chordal,
            beta: BetaSchedule {
                initial: 10.0,
                growth: 2.0,
                stages: 20,
            },
            step: StepControl {
                initial: 0.1,
                shrink: 0.5,
                min_step: 1e-12,
            },
            fd_step: 1e-5,
            fd_start: 5e-2,
            target: None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::BadParams(msg.to_string()));
        if self.starts == 0 || self.max_iters == 0 || self.beta.stages == 0 {
            return bad("starts, max_iters and stages must be positive");
        }
        if !(self.beta.initial > 0.0) || !(self.beta.growth > 1.0) {
            return bad("beta must start positive and grow by a factor > 1");
        }
        if !(self.step.initial > 0.0) || !(self.step.min_step > 0.0) {
            return bad("step sizes must be positive");
        }
        if !(self.step.shrink > 0.0 && self.step.shrink < 1.0) {
            return bad("shrink factor must lie in (0, 1)");
        }
        if !(self.fd_step > 0.0) || !(self.fd_start >= self.fd_step) {
            return bad("need 0 < fd_step <= fd_start");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub packing: Packing,
    /// `min_distance(packing, metric)`.
    pub min_dist: f64,
    pub start_index: usize,
    pub iters_used: usize,
    pub converged: bool,
    pub rattlers: Vec<usize>,
}

/// Softmin surrogate of a list of squared distances, evaluated stably.
pub fn softmin(d2: &[f64], beta: f64) -> f64 {
    let lo = d2.iter().copied().fold(f64::INFINITY, f64::min);
    let sum: f64 = d2.iter().map(|&x| (-beta * (x - lo)).exp()).sum();
    lo - sum.ln() / beta
}

/// Softmin surrogate of a packing's squared distances under `metric`.
pub fn packing_softmin(packing: &Packing, metric: Metric, beta: f64) -> f64 {
    let d2: Vec<f64> = packing
        .pairwise(metric)
        .iter()
        .map(|&(_, _, d)| d * d)
        .collect();
    softmin(&d2, beta)
}

/// Members whose nearest neighbour is farther than the global minimum plus `tol`.
pub fn detect_rattlers(packing: &Packing, metric: Metric, tol: f64) -> Vec<usize> {
    if packing.len() < 2 {
        return Vec::new();
    }
    let near = nearest_neighbour_distances(packing, metric);
    let global = near.iter().copied().fold(f64::INFINITY, f64::min);
    near.iter()
        .enumerate()
        .filter(|(_, &d)| d > global + tol)
        .map(|(i, _)| i)
        .collect()
}

fn check_dims(m: usize, n: usize, count: usize) -> Result<()> {
    if m < 2 || n == 0 || (n > 1 && 2 * n > m) || n >= m {
        return Err(Error::BadDimensions(format!(
            "optimizer needs n = 1 or 1 <= n <= m/2, got m = {m}, n = {n}"
        )));
    }
    if count < 2 {
        return Err(Error::BadDimensions(format!("need N >= 2, got {count}")));
    }
    Ok(())
}

/// Best of `config.starts` independent runs. Start `r` is seeded with
/// `seed ^ r`; the winner has the largest minimum distance, ties going to the
/// lowest start index.
pub fn optimize(
    m: usize,
    n: usize,
    count: usize,
    config: &OptimizerConfig,
) -> Result<OptimizeResult> {
    check_dims(m, n, count)?;
    config.validate()?;
    let runs: Vec<Result<OptimizeResult>> = (0..config.starts)
        .into_par_iter()
        .map(|r| run_start(m, n, count, config, r))
        .collect();
    let mut best: Option<OptimizeResult> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.min_dist > b.min_dist) {
            best = Some(run);
        }
    }
    Ok(best.expect("starts >= 1"))
}

/// One start of the optimizer.
pub fn run_start(
    m: usize,
    n: usize,
    count: usize,
    config: &OptimizerConfig,
    start_index: usize,
) -> Result<OptimizeResult> {
    check_dims(m, n, count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ start_index as u64);
    let mut gens: Vec<DMatrix<f64>> = (0..count)
        .map(|_| Subspace::random(m, n, &mut rng).map(Subspace::into_generator))
        .collect::<Result<_>>()?;

    let mut state = Ascent::new(config);
    let mut beta = config.beta.initial;
    let mut converged = false;
    let stages = config.beta.stages;
    for stage in 0..stages {
        state.fd = if stages == 1 {
            config.fd_step
        } else {
            let t = stage as f64 / (stages - 1) as f64;
            config.fd_start.powf(1.0 - t) * config.fd_step.powf(t)
        };
        converged = state.stage(&mut gens, beta);
        if let Some(target) = config.target {
            if state.true_min(&gens) >= target - 1e-9 {
                converged = true;
                break;
            }
        }
        beta *= config.beta.growth;
    }

    let subspaces = gens
        .into_iter()
        .map(Subspace::new)
        .collect::<Result<Vec<_>>>()?;
    let packing = Packing::new(subspaces, config.metric)?;
    let min_dist = min_distance(&packing, config.metric)?.value;
    let rattlers = detect_rattlers(&packing, config.metric, RATTLER_TOL);
    Ok(OptimizeResult {
        packing,
        min_dist,
        start_index,
        iters_used: state.iters,
        converged,
        rattlers,
    })
}

struct Ascent<'a> {
    config: &'a OptimizerConfig,
    step: f64,
    fd: f64,
    iters: usize,
}

/// Stage ends after this many consecutive accepted steps without progress.
const PLATEAU: usize = 30;
const ARMIJO: f64 = 1e-4;

impl<'a> Ascent<'a> {
    fn new(config: &'a OptimizerConfig) -> Self {
        Ascent {
            config,
            step: config.step.initial,
            fd: config.fd_step,
            iters: 0,
        }
    }

    fn pair_d2(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        match self.config.metric {
            Metric::Chordal => chordal_trace_form(a, b),
            Metric::Geodesic => geodesic_squared_raw(a, b),
            Metric::MaxAngle => gradient::raw_angles(a, b)
                .last()
                .copied()
                .unwrap_or(0.0)
                .powi(2),
        }
    }

    fn all_d2(&self, gens: &[DMatrix<f64>]) -> Vec<f64> {
        let mut out = Vec::with_capacity(gens.len() * gens.len() / 2);
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                out.push(self.pair_d2(&gens[i], &gens[j]));
            }
        }
        out
    }

    fn true_min(&self, gens: &[DMatrix<f64>]) -> f64 {
        self.all_d2(gens)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
            .sqrt()
    }

    /// Horizontal gradient of the surrogate for every member.
    fn gradient(&self, gens: &[DMatrix<f64>], d2: &[f64], beta: f64) -> Vec<DMatrix<f64>> {
        let lo = d2.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = d2.iter().map(|&x| (-beta * (x - lo)).exp()).collect();
        let total: f64 = weights.iter().sum();
        let mut grads: Vec<DMatrix<f64>> = gens
            .iter()
            .map(|g| DMatrix::zeros(g.nrows(), g.ncols()))
            .collect();
        let mut k = 0;
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                let w = weights[k] / total;
                k += 1;
                // negligible pairs contribute nothing measurable
                if w < 1e-300 {
                    continue;
                }
                let (ga, gb) = match self.config.metric {
                    Metric::Chordal => chordal_pair_gradient(&gens[i], &gens[j]),
                    _ => geodesic_like_fd(self, &gens[i], &gens[j]),
                };
                grads[i] += ga * w;
                grads[j] += gb * w;
            }
        }
        grads
            .into_iter()
            .zip(gens)
            .map(|(g, a)| horizontal(a, &g))
            .collect()
    }

    /// Runs one beta stage; returns true when it stopped before the iteration cap.
    fn stage(&mut self, gens: &mut Vec<DMatrix<f64>>, beta: f64) -> bool {
        let cfg = self.config.step;
        self.step = (self.step * 4.0).min(cfg.initial);
        let mut d2 = self.all_d2(gens);
        let mut value = softmin(&d2, beta);
        let mut grad = self.gradient(gens, &d2, beta);
        let mut stalled = 0;
        let mut used = 0;
        while used < self.config.max_iters {
            let gnorm2: f64 = grad.iter().map(|g| g.norm_squared()).sum();
            if gnorm2 < 1e-30 {
                return true;
            }
            used += 1;
            self.iters += 1;
            let trial: Vec<DMatrix<f64>> = gens
                .iter()
                .zip(&grad)
                .map(|(a, g)| qr_orthonormal(&(a + g * self.step)))
                .collect();
            let trial_d2 = self.all_d2(&trial);
            let trial_value = softmin(&trial_d2, beta);
            if trial_value >= value + ARMIJO * self.step * gnorm2 {
                let gain = trial_value - value;
                *gens = trial;
                d2 = trial_d2;
                value = trial_value;
                grad = self.gradient(gens, &d2, beta);
                self.step = (self.step * 1.5).min(cfg.initial);
                if gain <= 1e-15 * value.abs().max(1.0) {
                    stalled += 1;
                    if stalled >= PLATEAU {
                        return true;
                    }
                } else {
                    stalled = 0;
                }
            } else {
                self.step *= cfg.shrink;
                if self.step < cfg.min_step {
                    self.step = cfg.min_step;
                    return true;
                }
            }
        }
        false
    }
}

fn geodesic_like_fd(
    state: &Ascent<'_>,
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
) -> (DMatrix<f64>, DMatrix<f64>) {
    match state.config.metric {
        Metric::Geodesic => geodesic_pair_gradient_fd(a, b, state.fd),
        _ => max_angle_gradient_fd(a, b, state.fd),
    }
}

/// Central differences of the squared largest principal angle.
fn max_angle_gradient_fd(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    h: f64,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let f = |x: &DMatrix<f64>, y: &DMatrix<f64>| {
        gradient::raw_angles(x, y)
            .last()
            .copied()
            .unwrap_or(0.0)
            .powi(2)
    };
    let mut ga = DMatrix::zeros(a.nrows(), a.ncols());
    let mut gb = DMatrix::zeros(b.nrows(), b.ncols());
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            let mut up = a.clone();
            up[(r, c)] += h;
            let mut down = a.clone();
            down[(r, c)] -= h;
            ga[(r, c)] = (f(&qr_orthonormal(&up), b) - f(&qr_orthonormal(&down), b)) / (2.0 * h);
            let mut up = b.clone();
            up[(r, c)] += h;
            let mut down = b.clone();
            down[(r, c)] -= h;
            gb[(r, c)] = (f(a, &qr_orthonormal(&up)) - f(a, &qr_orthonormal(&down))) / (2.0 * h);
        }
    }
    (ga, gb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmin_bounds() {
        let d2 = [1.0, 1.0, 2.0];
        let beta = 100.0;
        let s = softmin(&d2, beta);
        assert!(s <= 1.0);
        assert!(1.0 - s <= (3.0f64).ln() / beta);
        assert_eq!(softmin(&[0.5], 7.0), 0.5);
    }

    #[test]
    fn config_validation() {
        let mut c = OptimizerConfig::default();
        assert!(c.validate().is_ok());
        c.beta.growth = 1.0;
        assert!(c.validate().is_err());
        let mut c = OptimizerConfig::default();
        c.step.shrink = 1.0;
        assert!(c.validate().is_err());
        let c = OptimizerConfig {
            starts: 0,
            ..OptimizerConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn bad_dimensions() {
        let c = OptimizerConfig::default();
        assert!(matches!(
            optimize(4, 3, 5, &c),
            Err(Error::BadDimensions(_))
        ));
        assert!(matches!(
            optimize(4, 2, 1, &c),
            Err(Error::BadDimensions(_))
        ));
        assert!(matches!(
            optimize(1, 1, 3, &c),
            Err(Error::BadDimensions(_))
        ));
    }

    #[test]
    fn two_lines_become_orthogonal() {
        let c = OptimizerConfig {
            starts: 2,
            ..OptimizerConfig::default()
        };
        let r = optimize(3, 1, 2, &c).unwrap();
        assert!((r.min_dist - 1.0).abs() < 1e-9);
        assert!(r.rattlers.is_empty());
    }
}
