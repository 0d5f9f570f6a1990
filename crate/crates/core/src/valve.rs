//! Valve gates between the last chain site and an uncoupled target qubit.
//!
//! A schedule is designed on the ideal chain by tracking the unnormalized
//! chain state `φ_k = P U(t_k) φ_{k-1}`, `φ_0 = |1⟩`, with `P` removing the
//! site-N component. Each gate moves the amplitude `a_k = ⟨N|U(t_k)|φ_{k-1}⟩`
//! that has just arrived at site N onto the target without disturbing what
//! the target already holds, so that `F^k = 1 - ⟨φ_k|φ_k⟩ = F^{k-1} + |a_k|²`.
//!
//! The composite run replays a schedule on any (possibly perturbed) chain
//! of N sites plus the target at index N.

use std::fmt;

use num_complex::Complex64;

use crate::chain::{build_hamiltonian, ChainSpec, DisorderRealization};
use crate::error::{invalid, Error, Result};
use crate::search::{grid_golden_max, TIME_TOLERANCE};
use crate::spectrum::{eig_tridiag, Spectrum};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Slack allowed when checking `F^{k-1} + |a_k|² ≤ 1`.
pub const FIDELITY_SLACK: f64 = 1e-12;

/// Grid density for the greedy arrival-time search.
pub const GREEDY_GRID: usize = 2000;

/// Unnormalized chain state `φ_k` of the design recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiState {
    amplitudes: Vec<Complex64>,
}

impl PhiState {
    /// `|1⟩` on a chain of `n_sites`.
    pub fn initial(n_sites: usize) -> Self {
        let mut amplitudes = vec![ZERO; n_sites];
        amplitudes[0] = ONE;
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Evolves by `t` and projects out site N; returns the removed amplitude.
    fn advance(&mut self, spectrum: &Spectrum, t: f64) -> Complex64 {
        let mut next = spectrum.evolve(&self.amplitudes, t);
        let last = next.len() - 1;
        let arrived = next[last];
        next[last] = ZERO;
        self.amplitudes = next;
        arrived
    }
}

/// One valve gate, stored with the scalars it was built from.
///
/// `block` acts on the ordered pair (target amplitude, site-N amplitude):
///
/// ```text
/// (F^k)^{-1/2} · [ √F^{k-1}   a*        ]
///                [ -a         √F^{k-1}  ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValveGate {
    block: [[Complex64; 2]; 2],
    arrival: Complex64,
    f_prev: f64,
    f_next: f64,
}

impl ValveGate {
    fn identity(arrival: Complex64, f_prev: f64, f_next: f64) -> Self {
        Self {
            block: [[ONE, ZERO], [ZERO, ONE]],
            arrival,
            f_prev,
            f_next,
        }
    }

    fn from_parts(arrival: Complex64, f_prev: f64, f_next: f64) -> Self {
        if f_next == 0.0 {
            // Nothing has arrived and nothing has been extracted yet.
            return Self::identity(arrival, f_prev, f_next);
        }
        let scale = f_next.sqrt().recip();
        let keep = Complex64::new(f_prev.sqrt() * scale, 0.0);
        Self {
            block: [[keep, arrival.conj() * scale], [-arrival * scale, keep]],
            arrival,
            f_prev,
            f_next,
        }
    }

    pub fn block(&self) -> [[Complex64; 2]; 2] {
        self.block
    }

    /// `a_k = ⟨N|U_k|φ_{k-1}⟩` on the design chain.
    pub fn arrival(&self) -> Complex64 {
        self.arrival
    }

    pub fn f_prev(&self) -> f64 {
        self.f_prev
    }

    pub fn f_next(&self) -> f64 {
        self.f_next
    }

    /// The two-qubit gate on (site N, target) in the basis
    /// `|00⟩, |01⟩, |10⟩, |11⟩`, where the second bit is the target.
    pub fn two_qubit_matrix(&self) -> [[Complex64; 4]; 4] {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = ONE;
        m[3][3] = ONE;
        for r in 0..2 {
            for c in 0..2 {
                m[1 + r][1 + c] = self.block[r][c];
            }
        }
        m
    }

    /// `max |(B†B − I)_{ij}|` of the 2×2 block.
    pub fn unitarity_defect(&self) -> f64 {
        let b = &self.block;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = b[0][i].conj() * b[0][j] + b[1][i].conj() * b[1][j];
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Applies the gate to the (target, site N) amplitudes in place.
    pub fn apply(&self, target: &mut Complex64, site_n: &mut Complex64) {
        let b = &self.block;
        let (x, y) = (*target, *site_n);
        *target = b[0][0] * x + b[0][1] * y;
        *site_n = b[1][0] * x + b[1][1] * y;
    }
}

/// Gate that extracts `arrival` given that the target already holds `f_prev`.
///
/// `arrival = 0` with `f_prev = 0` yields the identity.
pub fn build_valve_gate(arrival: Complex64, f_prev: f64) -> Result<ValveGate> {
    if !(arrival.re.is_finite() && arrival.im.is_finite() && f_prev.is_finite()) {
        return Err(invalid("valve gate inputs must be finite"));
    }
    if !(0.0..=1.0 + FIDELITY_SLACK).contains(&f_prev) {
        return Err(invalid(format!(
            "previous fidelity {f_prev} outside [0, 1]"
        )));
    }
    let f_next = f_prev + arrival.norm_sqr();
    if f_next > 1.0 + FIDELITY_SLACK {
        return Err(invalid(format!(
            "previous fidelity {f_prev} plus arrival {} exceeds 1",
            arrival.norm_sqr()
        )));
    }
    Ok(ValveGate::from_parts(arrival, f_prev, f_next))
}

/// How the interval before each gate is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleStrategy {
    /// Wait for the largest arrival amplitude within `(0, t_max]`.
    GreedyArrival,
    /// Wait the same interval before every gate.
    FixedInterval(f64),
}

impl fmt::Display for ScheduleStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GreedyArrival => f.write_str("greedy"),
            Self::FixedInterval(tau) => write!(f, "fixed({tau:?})"),
        }
    }
}

impl std::str::FromStr for ScheduleStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s == "greedy" {
            return Ok(Self::GreedyArrival);
        }
        let tau = s
            .strip_prefix("fixed(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| format!("unknown strategy `{s}` (expected greedy or fixed(<tau>))"))?;
        let tau: f64 = tau
            .trim()
            .parse()
            .map_err(|_| format!("bad interval in `{s}`"))?;
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(format!("interval must be positive, got {tau}"));
        }
        Ok(Self::FixedInterval(tau))
    }
}

/// One step of a schedule: wait `interval`, then apply `gate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValveStep {
    pub interval: f64,
    pub gate: ValveGate,
}

/// A gate sequence designed on an ideal chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ValveSchedule {
    n_sites: usize,
    strategy: ScheduleStrategy,
    steps: Vec<ValveStep>,
}

impl ValveSchedule {
    /// Assembles a schedule from recorded steps, checking the bookkeeping
    /// `F^k = F^{k-1} + |a_k|²` and the chaining `F^{k-1}` of step k equal
    /// to `F^k` of the step before.
    pub fn from_steps(
        n_sites: usize,
        strategy: ScheduleStrategy,
        steps: Vec<ValveStep>,
    ) -> Result<Self> {
        if n_sites < 2 {
            return Err(invalid(format!(
                "chain needs at least 2 sites, got {n_sites}"
            )));
        }
        let mut prev = 0.0;
        for (k, step) in steps.iter().enumerate() {
            let g = &step.gate;
            if !(step.interval > 0.0 && step.interval.is_finite()) {
                return Err(invalid(format!(
                    "step {}: interval must be positive",
                    k + 1
                )));
            }
            if (g.f_prev - prev).abs() > FIDELITY_SLACK {
                return Err(invalid(format!(
                    "step {}: previous fidelity {} does not continue {}",
                    k + 1,
                    g.f_prev,
                    prev
                )));
            }
            if (g.f_next - g.f_prev - g.arrival.norm_sqr()).abs() > FIDELITY_SLACK {
                return Err(invalid(format!(
                    "step {}: fidelity {} is not {} + |a|²",
                    k + 1,
                    g.f_next,
                    g.f_prev
                )));
            }
            prev = g.f_next;
        }
        Ok(Self {
            n_sites,
            strategy,
            steps,
        })
    }

    /// Rebuilds a step from the scalars a schedule file records.
    pub fn step_from_record(
        interval: f64,
        arrival: Complex64,
        f_prev: f64,
        f_next: f64,
    ) -> Result<ValveStep> {
        let finite = [interval, arrival.re, arrival.im, f_prev, f_next]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(invalid("non-finite value in schedule step"));
        }
        if !(0.0..=1.0 + FIDELITY_SLACK).contains(&f_prev)
            || !(0.0..=1.0 + FIDELITY_SLACK).contains(&f_next)
        {
            return Err(invalid("fidelity outside [0, 1]"));
        }
        Ok(ValveStep {
            interval,
            gate: ValveGate::from_parts(arrival, f_prev, f_next),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn strategy(&self) -> ScheduleStrategy {
        self.strategy
    }

    pub fn steps(&self) -> &[ValveStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `F^k` for `k = 1..=K` as achieved on the design chain.
    pub fn design_fidelities(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.gate.f_next).collect()
    }

    /// Total protocol time `Σ t_k`.
    pub fn total_time(&self) -> f64 {
        self.steps.iter().map(|s| s.interval).sum()
    }
}

/// Designs `max_steps` valve steps on the disorder-free `spec`.
pub fn design_schedule(
    spec: &ChainSpec,
    strategy: ScheduleStrategy,
    max_steps: usize,
    t_max: f64,
) -> Result<ValveSchedule> {
    if max_steps == 0 {
        return Err(invalid("a schedule needs at least one step"));
    }
    if let ScheduleStrategy::FixedInterval(tau) = strategy {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid(format!(
                "fixed interval must be positive, got {tau}"
            )));
        }
    } else if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(invalid(format!("t_max must be positive, got {t_max}")));
    }

    let spectrum = eig_tridiag(&spec.ideal_hamiltonian())?;
    let n = spec.n_sites();
    let mut phi = PhiState::initial(n);
    let mut fidelity = 0.0;
    let mut steps = Vec::with_capacity(max_steps);
    for k in 1..=max_steps {
        let interval = match strategy {
            ScheduleStrategy::FixedInterval(tau) => tau,
            ScheduleStrategy::GreedyArrival => {
                let series = spectrum.arrival_series(phi.amplitudes(), n - 1);
                grid_golden_max(|t| series.at(t).norm(), t_max, GREEDY_GRID, TIME_TOLERANCE).0
            }
        };
        let arrival = phi.advance(&spectrum, interval);
        if arrival == ZERO && fidelity == 0.0 {
            return Err(Error::DegenerateStep { step: k });
        }
        let gate = build_valve_gate(arrival, fidelity)?;
        fidelity = gate.f_next;
        steps.push(ValveStep { interval, gate });
    }
    ValveSchedule::from_steps(n, strategy, steps)
}

/// Replays the `φ_k` recursion with the schedule's intervals and returns
/// `1 - ⟨φ_k|φ_k⟩` for `k = 1..=K` (`F^0 = 0` is implied).
pub fn run_ideal_recursion(spec: &ChainSpec, schedule: &ValveSchedule) -> Result<Vec<f64>> {
    check_sizes(spec, schedule)?;
    let spectrum = eig_tridiag(&spec.ideal_hamiltonian())?;
    let mut phi = PhiState::initial(spec.n_sites());
    Ok(schedule
        .steps
        .iter()
        .map(|step| {
            phi.advance(&spectrum, step.interval);
            1.0 - phi.norm_sqr()
        })
        .collect())
}

/// Target populations along one composite run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    /// `|target amplitude|²` after gate k, `k = 1..=K`.
    pub fidelities: Vec<f64>,
    /// Total norm of the (N+1)-site state after each step.
    pub norms: Vec<f64>,
    /// Chain sites `0..N` followed by the target.
    pub final_state: Vec<Complex64>,
}

impl RunTrace {
    pub fn max_fidelity(&self) -> f64 {
        self.fidelities.iter().copied().fold(0.0, f64::max)
    }
}

/// Runs `schedule` on the chain `spec` perturbed by `real`.
pub fn run_composite(
    spec: &ChainSpec,
    real: &DisorderRealization,
    schedule: &ValveSchedule,
) -> Result<RunTrace> {
    check_sizes(spec, schedule)?;
    let spectrum = eig_tridiag(&build_hamiltonian(spec, real)?)?;
    Ok(run_composite_with(&spectrum, schedule))
}

/// Same as [`run_composite`] for an already diagonalized chain.
pub fn run_composite_with(spectrum: &Spectrum, schedule: &ValveSchedule) -> RunTrace {
    let n = spectrum.dim();
    let mut chain = vec![ZERO; n];
    chain[0] = ONE;
    let mut target = ZERO;
    let mut fidelities = Vec::with_capacity(schedule.len());
    let mut norms = Vec::with_capacity(schedule.len());
    for step in &schedule.steps {
        chain = spectrum.evolve(&chain, step.interval);
        step.gate.apply(&mut target, &mut chain[n - 1]);
        let f = target.norm_sqr();
        fidelities.push(f.min(1.0));
        norms.push(chain.iter().map(Complex64::norm_sqr).sum::<f64>() + f);
    }
    chain.push(target);
    RunTrace {
        fidelities,
        norms,
        final_state: chain,
    }
}

fn check_sizes(spec: &ChainSpec, schedule: &ValveSchedule) -> Result<()> {
    if spec.n_sites() != schedule.n_sites {
        return Err(invalid(format!(
            "schedule designed for {} sites, chain has {}",
            schedule.n_sites,
            spec.n_sites()
        )));
    }
    Ok(())
}
