//! Plain-text schedule files.
//!
//! ```text
//! valve-schedule v1 N=20 strategy=greedy
//! 1 5.6979762811350680e0 1.2e-1 -7.9e-1 0.0000000000000000e0 6.3196064339755700e-1
//! ...
//! ```
//!
//! One header line, then `k t_k re(a_k) im(a_k) F_prev F_k` per step. Reals
//! carry 17 significant digits so writing a parsed file reproduces it byte
//! for byte.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::valve::{ScheduleStrategy, ValveSchedule};

const MAGIC: &str = "valve-schedule";
const VERSION: &str = "v1";

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_schedule(schedule: &ValveSchedule) -> String {
    let mut out = format!(
        "{MAGIC} {VERSION} N={} strategy={}\n",
        schedule.n_sites(),
        schedule.strategy()
    );
    for (k, step) in schedule.steps().iter().enumerate() {
        let g = &step.gate;
        let a = g.arrival();
        writeln!(
            out,
            "{} {} {} {} {} {}",
            k + 1,
            real(step.interval),
            real(a.re),
            real(a.im),
            real(g.f_prev()),
            real(g.f_next())
        )
        .expect("writing to a String cannot fail");
    }
    out
}

fn parse_err(line: usize, key: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        key: key.to_string(),
        reason: reason.into(),
    }
}

pub fn parse_schedule(text: &str) -> Result<ValveSchedule> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "header", "empty schedule file"))?;
    let mut fields = header.split(' ');
    if fields.next() != Some(MAGIC) {
        return Err(parse_err(1, "header", format!("expected `{MAGIC}`")));
    }
    if fields.next() != Some(VERSION) {
        return Err(parse_err(
            1,
            "header",
            format!("unsupported version, expected `{VERSION}`"),
        ));
    }
    let n_sites: usize = fields
        .next()
        .and_then(|f| f.strip_prefix("N="))
        .ok_or_else(|| parse_err(1, "N", "missing `N=<sites>`"))?
        .parse()
        .map_err(|_| parse_err(1, "N", "not a non-negative integer"))?;
    if n_sites < 2 {
        return Err(parse_err(1, "N", "chain needs at least 2 sites"));
    }
    let strategy: ScheduleStrategy = fields
        .next()
        .and_then(|f| f.strip_prefix("strategy="))
        .ok_or_else(|| parse_err(1, "strategy", "missing `strategy=<name>`"))?
        .parse()
        .map_err(|e: String| parse_err(1, "strategy", e))?;
    if fields.next().is_some() {
        return Err(parse_err(1, "header", "trailing fields"));
    }

    const NAMES: [&str; 5] = ["t", "re_a", "im_a", "f_prev", "f"];
    let mut steps = Vec::new();
    for (line_no, line) in lines {
        let mut fields = line.split(' ');
        let k: usize = fields
            .next()
            .filter(|f| !f.is_empty())
            .ok_or_else(|| parse_err(line_no, "k", "missing step index"))?
            .parse()
            .map_err(|_| parse_err(line_no, "k", "not an integer"))?;
        if k != steps.len() + 1 {
            return Err(parse_err(
                line_no,
                "k",
                format!("expected step {}", steps.len() + 1),
            ));
        }
        let mut values = [0.0; 5];
        for (slot, name) in values.iter_mut().zip(NAMES) {
            *slot = fields
                .next()
                .ok_or_else(|| parse_err(line_no, name, "missing field"))?
                .parse()
                .map_err(|_| parse_err(line_no, name, "not a real number"))?;
        }
        if fields.next().is_some() {
            return Err(parse_err(line_no, "step", "trailing fields"));
        }
        let [t, re, im, f_prev, f] = values;
        let step = ValveSchedule::step_from_record(t, Complex64::new(re, im), f_prev, f)
            .map_err(|e| parse_err(line_no, "step", e.to_string()))?;
        steps.push(step);
    }
    let last_line = steps.len() + 1;
    ValveSchedule::from_steps(n_sites, strategy, steps)
        .map_err(|e| parse_err(last_line, "step", e.to_string()))
}
