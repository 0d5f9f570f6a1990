//! Quantum state transfer through XX spin chains, with and without valve
//! gates at the receiving end, under quasi-static coupling disorder.
//!
//! * [`chain`] and [`spectrum`]: single-excitation Hamiltonians, their
//!   eigendecomposition and propagators.
//! * [`bose`]: unassisted transfer fidelity and its optimal readout time.
//! * [`valve`]: gate design on the ideal chain and composite runs on
//!   perturbed ones; [`schedule_io`] reads and writes schedules.
//! * [`disorder`]: disorder sampling and deterministic Monte Carlo.
//! * [`config`] and [`experiment`]: the experiment runner behind the CLI.

pub mod bose;
pub mod chain;
pub mod config;
pub mod disorder;
pub mod error;
pub mod experiment;
pub mod schedule_io;
pub mod search;
pub mod spectrum;
pub mod valve;

pub use bose::{bose_fidelity, max_bose_fidelity};
pub use chain::{build_hamiltonian, ChainSpec, DisorderRealization, SingleExcMatrix};
pub use config::{parse_config, CouplingProfile, Experiment, ExperimentConfig};
pub use disorder::{
    monte_carlo, sample_disorder, sweep_delta, DisorderKind, DisorderModel, McSummary, RngStream,
    SweepPoint, SweepResult,
};
pub use error::{Error, Result};
pub use experiment::{render_experiment, run_experiment, Artifact};
pub use schedule_io::{parse_schedule, write_schedule};
pub use spectrum::{eig_tridiag, propagator, transfer_amplitude, Propagator, Spectrum};
pub use valve::{
    build_valve_gate, design_schedule, run_composite, run_ideal_recursion, PhiState, RunTrace,
    ScheduleStrategy, ValveGate, ValveSchedule, ValveStep,
};
