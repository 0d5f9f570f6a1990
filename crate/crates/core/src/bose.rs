//! Unassisted transfer: let the chain evolve and read site N once.

use num_complex::Complex64;

use crate::chain::{build_hamiltonian, ChainSpec, DisorderRealization};
use crate::error::{invalid, Result};
use crate::search::{grid_golden_max, TIME_TOLERANCE};
use crate::spectrum::{eig_tridiag, Spectrum};

/// Grid density used when the caller does not choose one.
pub const DEFAULT_GRID: usize = 2000;

/// Default search window for the optimal readout time, `2N`.
pub fn default_t_max(n_sites: usize) -> f64 {
    2.0 * n_sites as f64
}

/// `|⟨N|U(t)|1⟩|²` for a diagonalized chain.
pub fn bose_fidelity(spectrum: &Spectrum, t: f64) -> f64 {
    let n = spectrum.dim();
    let mut start = vec![Complex64::new(0.0, 0.0); n];
    start[0] = Complex64::new(1.0, 0.0);
    spectrum.arrival_series(&start, n - 1).at(t).norm_sqr()
}

/// Optimal unassisted readout time and fidelity over `(0, t_max]`.
pub fn max_bose_fidelity(
    spec: &ChainSpec,
    real: &DisorderRealization,
    t_max: f64,
    grid: usize,
) -> Result<(f64, f64)> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(invalid(format!("t_max must be positive, got {t_max}")));
    }
    if grid < 2 {
        return Err(invalid(format!("grid needs at least 2 points, got {grid}")));
    }
    let spectrum = eig_tridiag(&build_hamiltonian(spec, real)?)?;
    let n = spectrum.dim();
    let mut start = vec![Complex64::new(0.0, 0.0); n];
    start[0] = Complex64::new(1.0, 0.0);
    let series = spectrum.arrival_series(&start, n - 1);
    let (t, f) = grid_golden_max(|t| series.at(t).norm_sqr(), t_max, grid, TIME_TOLERANCE);
    Ok((t, f.clamp(0.0, 1.0)))
}
