//! Quasi-static disorder: one realization per protocol run, averaged over
//! many runs.
//!
//! Sample `i` of an ensemble draws from its own ChaCha8 stream, seeded with
//! the master seed and switched to stream id `i`. Samples run in parallel
//! and are reduced in index order, so results do not depend on the thread
//! count.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bose::bose_fidelity;
use crate::chain::{build_hamiltonian, ChainSpec, DisorderRealization};
use crate::error::{invalid, Result};
use crate::spectrum::eig_tridiag;
use crate::valve::{run_composite_with, ValveSchedule};

/// Independent random stream for one disorder sample.
#[derive(Debug, Clone)]
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn for_sample(master_seed: u64, sample_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(sample_index);
        Self(rng)
    }

    fn uniform_symmetric(&mut self, half_width: f64) -> f64 {
        let u: f64 = self.0.random();
        half_width * (2.0 * u - 1.0)
    }

    fn normal(&mut self, std_dev: f64) -> f64 {
        let z: f64 = self.0.sample(StandardNormal);
        std_dev * z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisorderKind {
    /// `δ_n` uniform on `[-Δ, Δ]`.
    UniformCoupling,
    /// `δ_n` normal with standard deviation `Δ`.
    GaussianCoupling,
    /// On-site energies uniform on `[-Δ, Δ]`.
    UniformOnsite,
}

impl fmt::Display for DisorderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::UniformCoupling => "uniform",
            Self::GaussianCoupling => "gaussian",
            Self::UniformOnsite => "onsite",
        })
    }
}

impl FromStr for DisorderKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform" => Ok(Self::UniformCoupling),
            "gaussian" => Ok(Self::GaussianCoupling),
            "onsite" => Ok(Self::UniformOnsite),
            other => Err(format!(
                "unknown disorder model `{other}` (uniform, gaussian, onsite)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderModel {
    pub kind: DisorderKind,
    pub strength: f64,
}

impl DisorderModel {
    pub fn new(kind: DisorderKind, strength: f64) -> Result<Self> {
        if !(strength >= 0.0 && strength.is_finite()) {
            return Err(invalid(format!(
                "disorder strength must be >= 0, got {strength}"
            )));
        }
        Ok(Self { kind, strength })
    }
}

/// Draws one realization for a chain of `spec.n_sites()` sites.
pub fn sample_disorder(
    model: &DisorderModel,
    spec: &ChainSpec,
    stream: &mut RngStream,
) -> DisorderRealization {
    let n = spec.n_sites();
    let mut real = DisorderRealization::zeros(n);
    let width = model.strength;
    match model.kind {
        DisorderKind::UniformCoupling => {
            for d in &mut real.coupling_deltas {
                *d = stream.uniform_symmetric(width);
            }
        }
        DisorderKind::GaussianCoupling => {
            for d in &mut real.coupling_deltas {
                *d = stream.normal(width);
            }
        }
        DisorderKind::UniformOnsite => {
            for d in &mut real.onsite_deltas {
                *d = stream.uniform_symmetric(width);
            }
        }
    }
    real
}

/// Ensemble statistics of composite runs. Standard deviations are
/// population (divide by n) deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub n_samples: usize,
    pub per_step_mean: Vec<f64>,
    pub per_step_std: Vec<f64>,
    /// Mean over samples of each sample's best step.
    pub mean_of_max: f64,
    pub std_of_max: f64,
}

impl McSummary {
    /// Best step of the averaged curve.
    pub fn max_of_mean(&self) -> f64 {
        self.per_step_mean.iter().copied().fold(0.0, f64::max)
    }
}

/// Population mean and standard deviation, shifted by the first value so
/// that identical inputs give exactly that value and exactly zero spread.
fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let mut it = values.clone();
    let Some(pivot) = it.next() else {
        return (0.0, 0.0);
    };
    let n = values.clone().count() as f64;
    let shift = values.clone().map(|x| x - pivot).sum::<f64>() / n;
    let mean = pivot + shift;
    let var = values.map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean.clamp(0.0, 1.0), var.sqrt().clamp(0.0, 1.0))
}

struct SampleOutcome {
    trace: Vec<f64>,
    bose: f64,
}

fn run_samples(
    spec: &ChainSpec,
    schedule: &ValveSchedule,
    model: &DisorderModel,
    n_samples: usize,
    master_seed: u64,
    bose_time: Option<f64>,
) -> Result<Vec<SampleOutcome>> {
    if n_samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    if spec.n_sites() != schedule.n_sites() {
        return Err(invalid(format!(
            "schedule designed for {} sites, chain has {}",
            schedule.n_sites(),
            spec.n_sites()
        )));
    }
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut stream = RngStream::for_sample(master_seed, i as u64);
            let real = sample_disorder(model, spec, &mut stream);
            let spectrum = eig_tridiag(&build_hamiltonian(spec, &real)?)?;
            let trace = run_composite_with(&spectrum, schedule).fidelities;
            let bose = bose_time.map_or(0.0, |t| bose_fidelity(&spectrum, t).min(1.0));
            Ok(SampleOutcome { trace, bose })
        })
        .collect()
}

fn summarize(outcomes: &[SampleOutcome], steps: usize) -> McSummary {
    let mut per_step_mean = Vec::with_capacity(steps);
    let mut per_step_std = Vec::with_capacity(steps);
    for k in 0..steps {
        let (m, s) = mean_std(outcomes.iter().map(|o| o.trace[k]));
        per_step_mean.push(m);
        per_step_std.push(s);
    }
    let (mean_of_max, std_of_max) = mean_std(
        outcomes
            .iter()
            .map(|o| o.trace.iter().copied().fold(0.0, f64::max)),
    );
    McSummary {
        n_samples: outcomes.len(),
        per_step_mean,
        per_step_std,
        mean_of_max,
        std_of_max,
    }
}

/// Runs `schedule` against `n_samples` disorder realizations.
pub fn monte_carlo(
    spec: &ChainSpec,
    schedule: &ValveSchedule,
    model: &DisorderModel,
    n_samples: usize,
    master_seed: u64,
) -> Result<McSummary> {
    let outcomes = run_samples(spec, schedule, model, n_samples, master_seed, None)?;
    Ok(summarize(&outcomes, schedule.len()))
}

/// One disorder strength of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub delta: f64,
    pub valve: McSummary,
    pub bose_mean: f64,
    pub bose_std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn deltas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.delta).collect()
    }

    pub fn valve_curve(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.valve.mean_of_max).collect()
    }

    pub fn valve_std(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.valve.std_of_max).collect()
    }

    pub fn bose_curve(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.bose_mean).collect()
    }

    pub fn bose_std(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.bose_std).collect()
    }
}

/// Valve and unassisted fidelity as a function of disorder strength.
///
/// Every strength reuses the per-sample streams, and within a strength the
/// valve run and the unassisted readout at `t_star` see the same
/// realization.
pub fn sweep_delta(
    spec: &ChainSpec,
    schedule: &ValveSchedule,
    kind: DisorderKind,
    delta_grid: &[f64],
    n_samples: usize,
    master_seed: u64,
    t_star: f64,
) -> Result<SweepResult> {
    if delta_grid.is_empty() {
        return Err(invalid("empty disorder grid"));
    }
    if delta_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("disorder grid must be ascending"));
    }
    if !(t_star >= 0.0 && t_star.is_finite()) {
        return Err(invalid(format!(
            "readout time must be finite and >= 0, got {t_star}"
        )));
    }
    let points = delta_grid
        .iter()
        .map(|&delta| {
            let model = DisorderModel::new(kind, delta)?;
            let outcomes =
                run_samples(spec, schedule, &model, n_samples, master_seed, Some(t_star))?;
            let valve = summarize(&outcomes, schedule.len());
            let (bose_mean, bose_std) = mean_std(outcomes.iter().map(|o| o.bose));
            Ok(SweepPoint {
                delta,
                valve,
                bose_mean,
                bose_std,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { points })
}
