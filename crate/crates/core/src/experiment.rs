//! Named experiments and their CSV output.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use crate::bose::{bose_fidelity, max_bose_fidelity};
use crate::chain::DisorderRealization;
use crate::config::{Experiment, ExperimentConfig};
use crate::disorder::{monte_carlo, sweep_delta, DisorderModel};
use crate::error::Result;
use crate::schedule_io::write_schedule;
use crate::spectrum::eig_tridiag;
use crate::valve::{design_schedule, ValveSchedule};

/// Significant digits of every real in CSV output.
pub const CSV_DIGITS: usize = 12;

/// A rendered output file, not yet written.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

impl Artifact {
    /// Data rows only: everything that is not a `#` comment.
    pub fn body(&self) -> String {
        self.contents
            .lines()
            .filter(|l| !l.starts_with('#'))
            .fold(String::new(), |mut acc, l| {
                acc.push_str(l);
                acc.push('\n');
                acc
            })
    }
}

/// Fixed-point decimal with [`CSV_DIGITS`] significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", CSV_DIGITS - 1, x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("LowerExp always has an exponent");
    let decimals = (CSV_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Strengths of a disorder experiment: the configured list with Δ = 0
/// added, ascending, duplicates removed.
pub fn strengths_with_zero(cfg: &ExperimentConfig) -> Vec<f64> {
    let mut s = cfg.strengths.clone();
    s.push(0.0);
    s.sort_by(f64::total_cmp);
    s.dedup();
    s
}

fn header(cfg: &ExperimentConfig, extra: &[String], columns: &str) -> String {
    let mut out = format!(
        "# valvechain {}\n# seed={} config_sha256={}\n",
        cfg.experiment.name(),
        cfg.seed,
        cfg.fingerprint()
    );
    for line in extra {
        writeln!(out, "# {line}").unwrap();
    }
    writeln!(out, "{columns}").unwrap();
    out
}

fn design(cfg: &ExperimentConfig) -> Result<ValveSchedule> {
    design_schedule(
        &cfg.chain()?,
        cfg.strategy,
        cfg.max_steps,
        cfg.schedule_t_max(),
    )
}

/// Computes the experiment's output file without touching the filesystem.
pub fn render_experiment(cfg: &ExperimentConfig) -> Result<Artifact> {
    let spec = cfg.chain()?;
    match cfg.experiment {
        Experiment::Design => Ok(Artifact {
            file_name: "schedule.txt".into(),
            contents: write_schedule(&design(cfg)?),
        }),

        Experiment::Bose => {
            let ideal = DisorderRealization::zeros(spec.n_sites());
            let (t_star, f_star) =
                max_bose_fidelity(&spec, &ideal, cfg.bose_window(), cfg.bose_grid)?;
            let spectrum = eig_tridiag(&spec.ideal_hamiltonian())?;
            let mut out = header(cfg, &[], "kind,t,fidelity");
            writeln!(out, "optimum,{},{}", fmt_sig(t_star), fmt_sig(f_star)).unwrap();
            let window = cfg.bose_window();
            for i in 1..=cfg.bose_grid {
                let t = window * i as f64 / cfg.bose_grid as f64;
                writeln!(
                    out,
                    "grid,{},{}",
                    fmt_sig(t),
                    fmt_sig(bose_fidelity(&spectrum, t))
                )
                .unwrap();
            }
            Ok(Artifact {
                file_name: "bose.csv".into(),
                contents: out,
            })
        }

        Experiment::Fig4 => {
            let schedule = design(cfg)?;
            let mut out = header(
                cfg,
                &["std_F is the population standard deviation over samples".into()],
                "delta,k,mean_F,std_F",
            );
            for delta in strengths_with_zero(cfg) {
                let model = DisorderModel::new(cfg.disorder_model, delta)?;
                let mc = monte_carlo(&spec, &schedule, &model, cfg.samples, cfg.seed)?;
                for (k, (m, s)) in mc.per_step_mean.iter().zip(&mc.per_step_std).enumerate() {
                    writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_sig(delta),
                        k + 1,
                        fmt_sig(*m),
                        fmt_sig(*s)
                    )
                    .unwrap();
                }
            }
            Ok(Artifact {
                file_name: "fig4.csv".into(),
                contents: out,
            })
        }

        Experiment::Fig5 => {
            let schedule = design(cfg)?;
            let ideal = DisorderRealization::zeros(spec.n_sites());
            let (t_star, _) = max_bose_fidelity(&spec, &ideal, cfg.bose_window(), cfg.bose_grid)?;
            let sweep = sweep_delta(
                &spec,
                &schedule,
                cfg.disorder_model,
                &strengths_with_zero(cfg),
                cfg.samples,
                cfg.seed,
                t_star,
            )?;
            let mut out = header(
                cfg,
                &[
                    format!("bose_t_star={}", fmt_sig(t_star)),
                    "std columns are population standard deviations over samples".into(),
                ],
                "delta,valve_mean_of_max,valve_std,valve_max_of_mean,bose_mean,bose_std",
            );
            for p in &sweep.points {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    fmt_sig(p.delta),
                    fmt_sig(p.valve.mean_of_max),
                    fmt_sig(p.valve.std_of_max),
                    fmt_sig(p.valve.max_of_mean()),
                    fmt_sig(p.bose_mean),
                    fmt_sig(p.bose_std)
                )
                .unwrap();
            }
            Ok(Artifact {
                file_name: "fig5.csv".into(),
                contents: out,
            })
        }
    }
}

/// Renders the experiment and writes it under `cfg.output_path`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<PathBuf> {
    let artifact = render_experiment(cfg)?;
    fs::create_dir_all(&cfg.output_path)?;
    let path = cfg.output_path.join(&artifact.file_name);
    fs::write(&path, &artifact.contents)?;
    Ok(path)
}
