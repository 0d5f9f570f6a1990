//! Test-only references that share no code path with the library:
//! dense complex matrices, the full 2^M-dimensional XX Hamiltonian built
//! from Pauli Kronecker products, and exp(-iHt) by scaling and squaring.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valvechain::{
    build_valve_gate, ChainSpec, DisorderRealization, ScheduleStrategy, ValveSchedule, ValveStep,
};

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<C>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![c(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            m.a[i * n..(i + 1) * n].copy_from_slice(r);
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> C {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let n = self.n;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += x * o.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Dense) -> Dense {
        Dense {
            n: self.n,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, s: C) -> Dense {
        Dense {
            n: self.n,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    pub fn kron(&self, o: &Dense) -> Dense {
        let n = self.n * o.n;
        let mut out = Dense::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..o.n {
                    for l in 0..o.n {
                        out.a[(i * o.n + k) * n + j * o.n + l] = self.at(i, j) * o.at(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.at(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// exp(self) by scaling, 24-term Taylor, and squaring.
    pub fn expm(&self) -> Dense {
        let mut s = 0;
        let norm = self.norm1();
        while norm / 2f64.powi(s) > 0.25 {
            s += 1;
        }
        let a = self.scale(c(1.0 / 2f64.powi(s), 0.0));
        let mut sum = Dense::identity(self.n);
        let mut term = Dense::identity(self.n);
        for k in 1..=24 {
            term = term.mul(&a).scale(c(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }
}

fn pauli_x() -> Dense {
    Dense::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]])
}

fn pauli_y() -> Dense {
    Dense::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]])
}

fn excited_projector() -> Dense {
    Dense::from_rows(&[&[c(0.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]])
}

/// Operator acting as `ops[q]` on qubit `q` and identity elsewhere; qubit 0
/// is the most significant bit.
fn embed(qubits: usize, ops: &[(usize, Dense)]) -> Dense {
    let mut out = Dense::identity(1);
    for q in 0..qubits {
        let factor = ops
            .iter()
            .find(|(p, _)| *p == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| Dense::identity(2));
        out = out.kron(&factor);
    }
    out
}

/// Full Hamiltonian of an XX chain on the first `spec.n_sites()` of `qubits`
/// qubits; the remaining qubits are uncoupled. On-site energies act as
/// `2(e_n + ε_n)` times the excitation number of qubit n.
pub fn full_hamiltonian(spec: &ChainSpec, real: &DisorderRealization, qubits: usize) -> Dense {
    let dim = 1 << qubits;
    let mut h = Dense::zeros(dim);
    for n in 0..spec.n_sites() - 1 {
        let j = spec.couplings()[n] * (1.0 + real.coupling_deltas[n]);
        let xx = embed(qubits, &[(n, pauli_x()), (n + 1, pauli_x())]);
        let yy = embed(qubits, &[(n, pauli_y()), (n + 1, pauli_y())]);
        h = h.add(&xx.add(&yy).scale(c(j, 0.0)));
    }
    for n in 0..spec.n_sites() {
        let e = 2.0 * (spec.onsite()[n] + real.onsite_deltas[n]);
        h = h.add(&embed(qubits, &[(n, excited_projector())]).scale(c(e, 0.0)));
    }
    h
}

/// Basis index of the state with a single excitation on qubit `site`.
pub fn one_hot(qubits: usize, site: usize) -> usize {
    1 << (qubits - 1 - site)
}

pub fn full_propagator(
    spec: &ChainSpec,
    real: &DisorderRealization,
    qubits: usize,
    t: f64,
) -> Dense {
    full_hamiltonian(spec, real, qubits)
        .scale(c(0.0, -t))
        .expm()
}

/// Target populations of the valve protocol simulated on N+1 full qubits.
pub fn full_composite(
    spec: &ChainSpec,
    real: &DisorderRealization,
    schedule: &ValveSchedule,
) -> Vec<f64> {
    let n = spec.n_sites();
    let qubits = n + 1;
    let mut psi = vec![c(0.0, 0.0); 1 << qubits];
    psi[one_hot(qubits, 0)] = c(1.0, 0.0);
    let target = one_hot(qubits, n);
    let mut out = Vec::new();
    for step in schedule.steps() {
        let u = full_propagator(spec, real, qubits, step.interval);
        let g = step.gate.two_qubit_matrix();
        let rows: Vec<&[C]> = g.iter().map(|r| r.as_slice()).collect();
        let gate = Dense::identity(1 << (qubits - 2)).kron(&Dense::from_rows(&rows));
        psi = gate.apply(&u.apply(&psi));
        out.push(psi[target].norm_sqr());
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_spec(rng: &mut ChaCha8Rng, n: usize, onsite: bool) -> ChainSpec {
    let couplings = (0..n - 1).map(|_| rng.random_range(0.5..1.5)).collect();
    let energies = (0..n)
        .map(|_| {
            if onsite {
                rng.random_range(-0.5..0.5)
            } else {
                0.0
            }
        })
        .collect();
    ChainSpec::new(couplings, energies).unwrap()
}

pub fn random_realization(rng: &mut ChaCha8Rng, n: usize, width: f64) -> DisorderRealization {
    DisorderRealization {
        coupling_deltas: (0..n - 1)
            .map(|_| rng.random_range(-width..=width))
            .collect(),
        onsite_deltas: (0..n).map(|_| rng.random_range(-width..=width)).collect(),
    }
}

/// A valid but undesigned schedule: random intervals and arrivals that
/// respect the fidelity bookkeeping.
pub fn random_schedule(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> ValveSchedule {
    let mut f: f64 = 0.0;
    let mut out = Vec::new();
    for _ in 0..steps {
        let room = (1.0 - f).max(0.0);
        let r = room.sqrt() * rng.random_range(0.1..0.9);
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let a = C::from_polar(r, phase);
        let gate = build_valve_gate(a, f).unwrap();
        f = gate.f_next();
        out.push(ValveStep {
            interval: rng.random_range(0.1..3.0),
            gate,
        });
    }
    ValveSchedule::from_steps(n, ScheduleStrategy::GreedyArrival, out).unwrap()
}
