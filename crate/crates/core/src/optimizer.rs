//! Multistart Nelder-Mead search over measurement directions, and scans of an
//! inequality along the boost parameter.
//!
//! Each direction contributes two angles `(theta, phi)`; the simplex moves in
//! unbounded angle space and every point is mapped back onto the sphere by
//! [`Direction::from_unbounded`]. Restart `i` draws its starting directions
//! from ChaCha8 seeded with the configured seed on stream `i`, so results do
//! not depend on thread count or scheduling.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inequalities::{evaluate, InequalityKind, InequalityResult, MeasurementSettings};
use crate::linalg::Direction;
use crate::probabilities::ComState;

/// Name of the random generator behind restart initialization.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), one stream per restart";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Convergence threshold on the spread of simplex values.
    pub simplex_tolerance: f64,
    pub seed: u64,
    /// Edge length of the starting simplex, in radians.
    pub initial_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 100,
            max_iters: 2000,
            simplex_tolerance: 1e-10,
            seed: 0,
            initial_step: 0.4,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.simplex_tolerance.is_finite() && self.simplex_tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "simplex tolerance must be positive, got {}",
                self.simplex_tolerance
            )));
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "initial step must be positive, got {}",
                self.initial_step
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Nelder-Mead minimization of `f` from `x0` with an axis-aligned starting
/// simplex of edge `step`. Stops once the spread of simplex values drops
/// below `ftol` or after `max_iters` iterations.
pub fn nelder_mead<F>(f: F, x0: &[f64], step: f64, max_iters: usize, ftol: f64) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    while iterations < max_iters {
        // stable sort keeps ties in insertion order
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if (values[n] - values[0]).abs() < ftol {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(REFLECT);
        let fr = eval(&reflected);
        if fr < values[0] {
            let expanded = along(EXPAND);
            let fe = eval(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (candidate, fc) = if fr < values[n] {
            let outside = along(CONTRACT * REFLECT);
            let fo = eval(&outside);
            (outside, fo.min(fr).max(fo))
        } else {
            let inside = along(-CONTRACT);
            let fi = eval(&inside);
            (inside, fi)
        };
        if fc < values[n].min(fr) {
            simplex[n] = candidate;
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for (x, b) in simplex[i].iter_mut().zip(&best) {
                *x = b + SHRINK * (*x - b);
            }
            values[i] = eval(&simplex[i]);
        }
    }

    let (k, &value) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("simplex is nonempty");
    Minimum {
        x: simplex[k].clone(),
        value,
        iterations,
        evaluations,
    }
}

fn angles_to_settings(angles: &[f64]) -> Result<MeasurementSettings> {
    let dirs: Vec<Direction> = angles
        .chunks_exact(2)
        .map(|p| Direction::from_unbounded(p[0], p[1]))
        .collect();
    MeasurementSettings::from_slice(&dirs)
}

fn random_angles(rng: &mut ChaCha8Rng, directions: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * directions);
    for _ in 0..directions {
        let z: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..TAU);
        out.push(z.acos());
        out.push(phi);
    }
    out
}

/// Result of a multistart search.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationReport {
    pub best: InequalityResult,
    pub best_restart: usize,
    pub restarts: usize,
    pub evaluations: usize,
    /// Largest objective value over all restart starting points.
    pub best_initial: f64,
    pub seed: u64,
}

struct RestartOutcome {
    initial: f64,
    value: f64,
    angles: Vec<f64>,
    evaluations: usize,
}

/// Maximizes `objective` over settings with `kind.direction_count()`
/// directions. `objective` must be deterministic.
pub fn optimize_with<F>(
    kind: InequalityKind,
    state: ComState,
    cfg: &OptimizerConfig,
    objective: F,
) -> Result<OptimizationReport>
where
    F: Fn(&MeasurementSettings) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let dirs = kind.direction_count();
    let score = |angles: &[f64]| -> f64 {
        angles_to_settings(angles)
            .and_then(|s| objective(&s))
            .unwrap_or(f64::NEG_INFINITY)
    };

    let run = |restart: usize| -> RestartOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let start = random_angles(&mut rng, dirs);
        let initial = score(&start);
        let neg = |x: &[f64]| -score(x);
        let mut m = nelder_mead(
            neg,
            &start,
            cfg.initial_step,
            cfg.max_iters,
            cfg.simplex_tolerance,
        );
        let mut evaluations = m.evaluations + 1;
        // one restart from the converged point with a smaller simplex
        let polish = nelder_mead(
            neg,
            &m.x,
            0.1 * cfg.initial_step,
            cfg.max_iters,
            cfg.simplex_tolerance,
        );
        evaluations += polish.evaluations;
        if polish.value < m.value {
            m = polish;
        }
        RestartOutcome {
            initial,
            value: -m.value,
            angles: m.x,
            evaluations,
        }
    };

    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts).into_par_iter().map(run).collect();

    let mut best_idx = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best_idx].value {
            best_idx = i;
        }
    }
    let best_initial = outcomes
        .iter()
        .map(|o| o.initial)
        .fold(f64::NEG_INFINITY, f64::max);
    let best = &outcomes[best_idx];
    if best.value.is_nan() || best.value < best_initial {
        return Err(Error::OptimizerContract {
            best: best.value,
            initial: best_initial,
        });
    }
    let settings = angles_to_settings(&best.angles)?;
    Ok(OptimizationReport {
        best: InequalityResult::new(kind, best.value, settings, state),
        best_restart: best_idx,
        restarts: cfg.restarts,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        best_initial,
        seed: cfg.seed,
    })
}

/// Maximizes the inequality for the centre-of-mass state `(c, x, n)`.
pub fn optimize(
    kind: InequalityKind,
    c: f64,
    x: f64,
    n: Direction,
    cfg: &OptimizerConfig,
) -> Result<OptimizationReport> {
    let state = ComState::new(c, x, n)?;
    optimize_with(kind, state, cfg, |s| {
        evaluate(kind, &state, s).map(|r| r.value)
    })
}

/// One grid point of a scan; `values[i]` belongs to the i-th requested `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    pub values: Vec<f64>,
    pub kind: InequalityKind,
}

/// `x_min, x_min + step, ...` up to `x_max` (inclusive within rounding).
pub fn x_grid(x_min: f64, x_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(x_min.is_finite() && x_min >= 0.0) || !x_max.is_finite() {
        return Err(Error::InvalidGrid(format!("bad range [{x_min}, {x_max}]")));
    }
    if x_max < x_min {
        return Err(Error::InvalidGrid(format!("x_max {x_max} < x_min {x_min}")));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "step must be positive, got {step}"
        )));
    }
    let count = ((x_max - x_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| x_min + i as f64 * step).collect())
}

/// Evaluates `kind` at fixed settings for every `c` in `c_states` and every
/// `x` in the ascending grid.
pub fn scan(
    kind: InequalityKind,
    settings: &MeasurementSettings,
    n: Direction,
    c_states: &[f64],
    grid: &[f64],
) -> Result<Vec<ScanRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if grid.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }
    grid.par_iter()
        .map(|&x| {
            let values = c_states
                .iter()
                .map(|&c| evaluate(kind, &ComState::new(c, x, n)?, settings).map(|r| r.value))
                .collect::<Result<Vec<f64>>>()?;
            Ok(ScanRow { x, values, kind })
        })
        .collect()
}

/// Settings from a flat `[theta_a, phi_a, theta_b, ...]` list; exposed for
/// reporting optimizer output.
pub fn settings_from_angles(angles: &[f64]) -> Result<MeasurementSettings> {
    if !angles.len().is_multiple_of(2) {
        return Err(Error::Domain("odd number of angles".into()));
    }
    angles_to_settings(angles)
}

/// Uniformly random direction from a generator.
pub fn random_direction<R: Rng>(rng: &mut R) -> Direction {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..TAU);
    Direction::new(z.acos().clamp(0.0, PI), phi).expect("angles in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures;
    use crate::inequalities::chsh;
    use std::f64::consts::SQRT_2;

    fn quick(seed: u64, restarts: usize) -> OptimizerConfig {
        OptimizerConfig {
            restarts,
            seed,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + 0.5;
        let m = nelder_mead(f, &[0.0, 0.0], 0.5, 5000, 1e-14);
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] + 2.0).abs() < 1e-5);
        assert!((m.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn nelder_mead_handles_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(f, &[-1.2, 1.0], 0.5, 10_000, 1e-16);
        assert!(m.value < 1e-8, "{}", m.value);
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig {
            restarts: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(OptimizerConfig {
            max_iters: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(OptimizerConfig {
            simplex_tolerance: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(optimize(
            InequalityKind::Chsh,
            0.0,
            -1.0,
            Direction::z(),
            &quick(1, 2)
        )
        .is_err());
    }

    #[test]
    fn chsh_at_rest_reaches_coplanar_value() {
        let r = optimize(
            InequalityKind::Chsh,
            0.0,
            0.0,
            Direction::z(),
            &quick(3, 20),
        )
        .unwrap();
        let v = r.best.value;
        assert!((4.0 * SQRT_2 / 3.0 - 1e-3..=2.0 + 1e-6).contains(&v), "{v}");
        assert!(v >= r.best_initial);
        // reported settings reproduce the reported value
        let again = chsh(&r.best.state, &r.best.settings).unwrap().value;
        assert!((again - v).abs() < 1e-12);
    }

    #[test]
    fn mermin_at_rest_is_bounded() {
        let r = optimize(
            InequalityKind::Mermin,
            0.0,
            0.0,
            Direction::z(),
            &quick(5, 20),
        )
        .unwrap();
        assert!(r.best.value <= 1.0 + 1e-9);
        assert!(r.best.value > 1.0 - 1e-6);
    }

    #[test]
    fn cglmp_at_rest_is_violated() {
        let r = optimize(
            InequalityKind::Cglmp,
            0.0,
            0.0,
            Direction::z(),
            &quick(11, 20),
        )
        .unwrap();
        assert!(r.best.value > 2.0, "{}", r.best.value);
        assert!(r.best.violated);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = quick(7, 8);
        let a = optimize(InequalityKind::Cglmp, -1.0, 1.0, Direction::z(), &cfg).unwrap();
        let b = optimize(InequalityKind::Cglmp, -1.0, 1.0, Direction::z(), &cfg).unwrap();
        assert_eq!(a, b);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = single
            .install(|| optimize(InequalityKind::Cglmp, -1.0, 1.0, Direction::z(), &cfg))
            .unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn grid_construction() {
        let g = x_grid(0.0, 5.0, 0.01).unwrap();
        assert_eq!(g.len(), 501);
        assert_eq!(g[0], 0.0);
        assert!((g[500] - 5.0).abs() < 1e-12);
        assert_eq!(x_grid(0.0, 0.0, 0.1).unwrap(), vec![0.0]);
        assert!(x_grid(1.0, 0.0, 0.1).is_err());
        assert!(x_grid(0.0, 1.0, 0.0).is_err());
        assert!(x_grid(-1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn single_point_scan_matches_direct_evaluation() {
        let f = figures::FIG3;
        let rows = scan(f.kind, &f.settings(), f.n(), &[0.0, -1.0], &[0.0]).unwrap();
        assert_eq!(rows.len(), 1);
        for (v, c) in rows[0].values.iter().zip([0.0, -1.0]) {
            let st = ComState::new(c, 0.0, f.n()).unwrap();
            assert_eq!(*v, evaluate(f.kind, &st, &f.settings()).unwrap().value);
        }
    }

    #[test]
    fn scan_rejects_bad_grids() {
        let f = figures::FIG1;
        assert!(scan(f.kind, &f.settings(), f.n(), &[0.0], &[]).is_err());
        assert!(scan(f.kind, &f.settings(), f.n(), &[0.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn mermin_figure_curves() {
        let grid = x_grid(0.0, 5.0, 0.01).unwrap();
        let peak = |f: figures::FigurePreset, col: usize| {
            scan(f.kind, &f.settings(), f.n(), &[0.0, -1.0], &grid)
                .unwrap()
                .iter()
                .map(|r| r.values[col])
                .fold(f64::NEG_INFINITY, f64::max)
        };
        assert!(peak(figures::FIG1, 0) > 1.0);
        assert!(peak(figures::FIG2, 1) > 1.0);
        // the xi curve of the first preset peaks at rest and never crosses
        assert!(peak(figures::FIG1, 1) < 1.0);
    }
}
