//! XX chain description and its single-excitation Hamiltonian.
//!
//! In the basis `|n⟩` (one excitation on site `n`) the coupling
//! `(1 + δ_n)(σx σx + σy σy)` between sites `n` and `n+1` becomes a hopping
//! element `2(1 + δ_n)`, so the Hamiltonian is a real symmetric
//! tridiagonal matrix. Times everywhere in the crate are in these units.

use crate::error::{invalid, Result};

/// The designed chain: length, base couplings and base on-site energies.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    n_sites: usize,
    couplings: Vec<f64>,
    onsite: Vec<f64>,
}

impl ChainSpec {
    /// Chain of `n_sites` with unit couplings and zero on-site energies.
    pub fn uniform(n_sites: usize) -> Result<Self> {
        if n_sites < 2 {
            return Err(invalid(format!(
                "chain needs at least 2 sites, got {n_sites}"
            )));
        }
        Self::new(vec![1.0; n_sites - 1], vec![0.0; n_sites])
    }

    /// Chain from explicit couplings (length N-1) and on-site energies (length N).
    pub fn new(couplings: Vec<f64>, onsite: Vec<f64>) -> Result<Self> {
        let n_sites = onsite.len();
        if n_sites < 2 {
            return Err(invalid(format!(
                "chain needs at least 2 sites, got {n_sites}"
            )));
        }
        if couplings.len() != n_sites - 1 {
            return Err(invalid(format!(
                "{} couplings given for {} sites (need {})",
                couplings.len(),
                n_sites,
                n_sites - 1
            )));
        }
        if let Some((i, c)) = couplings
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite() || **c <= 0.0)
        {
            return Err(invalid(format!(
                "coupling {i} must be finite and > 0, got {c}"
            )));
        }
        if let Some((i, e)) = onsite.iter().enumerate().find(|(_, e)| !e.is_finite()) {
            return Err(invalid(format!("on-site energy {i} is not finite: {e}")));
        }
        Ok(Self {
            n_sites,
            couplings,
            onsite,
        })
    }

    /// Chain with the given couplings and zero on-site energies.
    pub fn with_couplings(couplings: Vec<f64>) -> Result<Self> {
        let n = couplings.len() + 1;
        Self::new(couplings, vec![0.0; n])
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn onsite(&self) -> &[f64] {
        &self.onsite
    }

    /// Hamiltonian of the chain with no disorder.
    pub fn ideal_hamiltonian(&self) -> SingleExcMatrix {
        build_hamiltonian(self, &DisorderRealization::zeros(self.n_sites))
            .expect("zero realization always matches its own spec")
    }
}

/// One quasi-static draw of coupling and on-site perturbations.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRealization {
    pub coupling_deltas: Vec<f64>,
    pub onsite_deltas: Vec<f64>,
}

impl DisorderRealization {
    pub fn zeros(n_sites: usize) -> Self {
        Self {
            coupling_deltas: vec![0.0; n_sites.saturating_sub(1)],
            onsite_deltas: vec![0.0; n_sites],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coupling_deltas
            .iter()
            .chain(&self.onsite_deltas)
            .all(|&d| d == 0.0)
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SingleExcMatrix {
    /// Builds a matrix from raw bands. Couplings may be zero here; only
    /// [`ChainSpec`] insists on a connected chain.
    pub fn from_bands(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(invalid("empty matrix"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(invalid(format!(
                "off-diagonal has {} entries for dimension {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(invalid("non-finite matrix entry"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.offdiag[i.min(j)],
            _ => 0.0,
        }
    }
}

/// Single-excitation Hamiltonian of `spec` perturbed by `real`.
pub fn build_hamiltonian(spec: &ChainSpec, real: &DisorderRealization) -> Result<SingleExcMatrix> {
    let n = spec.n_sites();
    if real.coupling_deltas.len() != n - 1 || real.onsite_deltas.len() != n {
        return Err(invalid(format!(
            "realization has {} coupling / {} on-site deltas, chain of {} sites needs {} / {}",
            real.coupling_deltas.len(),
            real.onsite_deltas.len(),
            n,
            n - 1,
            n
        )));
    }
    let offdiag = spec
        .couplings
        .iter()
        .zip(&real.coupling_deltas)
        .map(|(c, d)| 2.0 * c * (1.0 + d))
        .collect();
    let diag = spec
        .onsite
        .iter()
        .zip(&real.onsite_deltas)
        .map(|(e, d)| 2.0 * (e + d))
        .collect();
    SingleExcMatrix::from_bands(diag, offdiag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_or_disconnected_chains() {
        assert!(ChainSpec::uniform(1).is_err());
        assert!(ChainSpec::with_couplings(vec![1.0, 0.0]).is_err());
        assert!(ChainSpec::with_couplings(vec![1.0, -0.5]).is_err());
        assert!(ChainSpec::new(vec![1.0], vec![0.0, 0.0, 0.0]).is_err());
        assert!(ChainSpec::new(vec![1.0], vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn zero_disorder_has_zero_diagonal() {
        for n in 2..12 {
            let spec = ChainSpec::uniform(n).unwrap();
            let h = spec.ideal_hamiltonian();
            assert!(h.diag().iter().all(|&d| d == 0.0));
            assert!(h.offdiag().iter().all(|&o| o == 2.0));
        }
    }

    #[test]
    fn coupling_delta_scales_hopping() {
        let spec = ChainSpec::uniform(3).unwrap();
        let real = DisorderRealization {
            coupling_deltas: vec![0.5, 0.0],
            onsite_deltas: vec![0.0; 3],
        };
        let h = build_hamiltonian(&spec, &real).unwrap();
        assert_eq!(h.offdiag(), &[3.0, 2.0]);
    }

    #[test]
    fn onsite_delta_enters_doubled() {
        let spec = ChainSpec::new(vec![1.0], vec![0.25, 0.0]).unwrap();
        let real = DisorderRealization {
            coupling_deltas: vec![0.0],
            onsite_deltas: vec![0.0, -0.5],
        };
        let h = build_hamiltonian(&spec, &real).unwrap();
        assert_eq!(h.diag(), &[0.5, -1.0]);
    }

    #[test]
    fn dimension_mismatch_and_nan_are_rejected() {
        let spec = ChainSpec::uniform(4).unwrap();
        assert!(build_hamiltonian(&spec, &DisorderRealization::zeros(3)).is_err());
        let mut real = DisorderRealization::zeros(4);
        real.coupling_deltas[1] = f64::INFINITY;
        assert!(build_hamiltonian(&spec, &real).is_err());
    }
}
