//! Eigendecomposition of the tridiagonal Hamiltonian and the propagators
//! built from it.

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::chain::SingleExcMatrix;
use crate::error::{invalid, Error, Result};

const MAX_QL_SWEEPS: usize = 64;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    /// Row-major `N×N`; column `m` is the eigenvector of `eigenvalues[m]`.
    eigenvectors: Vec<f64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Component `site` of eigenvector `mode`.
    pub fn vector(&self, site: usize, mode: usize) -> f64 {
        self.eigenvectors[site * self.dim() + mode]
    }

    /// `V diag(λ) Vᵀ`, row-major.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n)
                    .map(|m| self.vector(i, m) * self.eigenvalues[m] * self.vector(j, m))
                    .sum();
            }
        }
        out
    }

    /// Components of `psi` in the eigenbasis, `Vᵀ psi`.
    pub fn to_modes(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|m| (0..n).map(|i| psi[i] * self.vector(i, m)).sum())
            .collect()
    }

    /// `U(t) psi` without forming `U(t)`.
    pub fn evolve(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(psi.len(), n, "state dimension does not match spectrum");
        let modes: Vec<Complex64> = self
            .to_modes(psi)
            .into_iter()
            .zip(&self.eigenvalues)
            .map(|(c, &l)| c * Complex64::from_polar(1.0, -l * t))
            .collect();
        (0..n)
            .map(|i| {
                modes
                    .iter()
                    .enumerate()
                    .map(|(m, c)| c * self.vector(i, m))
                    .sum()
            })
            .collect()
    }

    /// The amplitude `⟨site|U(t)|psi⟩` as a trigonometric series in `t`.
    pub fn arrival_series(&self, psi: &[Complex64], site: usize) -> ArrivalSeries {
        let weights = self
            .to_modes(psi)
            .into_iter()
            .enumerate()
            .map(|(m, c)| c * self.vector(site, m))
            .collect();
        ArrivalSeries {
            frequencies: self.eigenvalues.clone(),
            weights,
        }
    }
}

/// `t ↦ Σ_m w_m exp(-i λ_m t)`, cheap to evaluate many times.
#[derive(Debug, Clone)]
pub struct ArrivalSeries {
    frequencies: Vec<f64>,
    weights: Vec<Complex64>,
}

impl ArrivalSeries {
    pub fn at(&self, t: f64) -> Complex64 {
        self.frequencies
            .iter()
            .zip(&self.weights)
            .map(|(&l, w)| w * Complex64::from_polar(1.0, -l * t))
            .sum()
    }
}

/// Diagonalizes a symmetric tridiagonal matrix by implicit QL iteration
/// with Wilkinson-style shifts.
pub fn eig_tridiag(m: &SingleExcMatrix) -> Result<Spectrum> {
    let n = m.dim();
    let mut d = m.diag().to_vec();
    let mut e = m.offdiag().to_vec();
    e.push(0.0);
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut mm = l;
        while mm < n - 1 && e[mm].abs() > eps * tst1 {
            mm += 1;
        }
        if mm > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(Error::NoConvergence {
                        fingerprint: fingerprint(m),
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[mm];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..mm).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let h = v[k * n + i + 1];
                        v[k * n + i + 1] = s * v[k * n + i] + c * h;
                        v[k * n + i] = c * v[k * n + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Ascending order; stable so ties keep a deterministic layout.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let mut eigenvectors = vec![0.0; n * n];
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[row * n + col] = v[row * n + k];
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn fingerprint(m: &SingleExcMatrix) -> String {
    let mut hasher = Sha256::new();
    for x in m.diag().iter().chain(m.offdiag()) {
        hasher.update(x.to_bits().to_le_bytes());
    }
    let digest = hasher.finalize();
    format!("n={} sha256:{:x}", m.dim(), digest)
}

/// Dense `U(t) = V diag(exp(-iλt)) Vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Propagator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Propagator) -> Propagator {
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum();
            }
        }
        Propagator { dim: n, entries }
    }

    /// `max |(U†U − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc: Complex64 =
                    (0..n).map(|k| self.get(k, i).conj() * self.get(k, j)).sum();
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

pub fn propagator(s: &Spectrum, t: f64) -> Result<Propagator> {
    if !t.is_finite() {
        return Err(invalid(format!("time must be finite, got {t}")));
    }
    let n = s.dim();
    let phases: Vec<Complex64> = s
        .eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -l * t))
        .collect();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let u: Complex64 = phases
                .iter()
                .enumerate()
                .map(|(m, p)| p * (s.vector(i, m) * s.vector(j, m)))
                .sum();
            entries[i * n + j] = u;
            entries[j * n + i] = u;
        }
    }
    Ok(Propagator { dim: n, entries })
}

/// `⟨N|U(t)|1⟩`, whose squared modulus is the unassisted transfer fidelity.
pub fn transfer_amplitude(u: &Propagator) -> Complex64 {
    u.get(u.dim - 1, 0)
}
