//! One-dimensional maximization of oscillatory functions: a uniform grid to
//! find the right peak, then golden-section search inside its bracket.

/// Absolute tolerance on the maximizer used throughout the crate.
pub const TIME_TOLERANCE: f64 = 1e-6;

/// Values within this of the best count as ties; the earliest tie wins.
const TIE: f64 = 1e-9;

/// Maximizes `f` over `(0, upper]`.
///
/// `f` is sampled at `grid` points `upper·i/grid`, `i = 1..=grid`. Every
/// local maximum of the samples within 1% of the best one is refined by
/// golden-section search inside its neighbours' bracket, down to `tol`.
/// Among the refined peaks the earliest one within `1e-9` of the highest is
/// returned, and the result is never worse than the best grid sample.
pub fn grid_golden_max<F>(f: F, upper: f64, grid: usize, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    assert!(
        upper > 0.0 && upper.is_finite(),
        "upper bound must be positive"
    );
    assert!(grid >= 2, "grid needs at least two points");
    let step = upper / grid as f64;
    let point = |i: usize| if i == grid { upper } else { step * i as f64 };

    // samples[i - 1] = f(point(i))
    let samples: Vec<f64> = (1..=grid).map(|i| f(point(i))).collect();
    let best_v = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cutoff = best_v - 0.01 * best_v.abs();

    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 1..=grid {
        let v = samples[i - 1];
        let left = if i > 1 {
            samples[i - 2]
        } else {
            f64::NEG_INFINITY
        };
        let right = if i < grid {
            samples[i]
        } else {
            f64::NEG_INFINITY
        };
        if v < cutoff || v < left || v < right {
            continue;
        }
        let lo = point(i - 1);
        let hi = point((i + 1).min(grid));
        let refined = golden_section_max(&f, lo, hi, tol);
        peaks.push(if refined.1 >= v {
            refined
        } else {
            (point(i), v)
        });
    }

    let top = peaks.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    peaks
        .into_iter()
        .find(|p| p.1 >= top - TIE)
        .expect("the best grid sample is always a candidate")
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`, stopping when
/// the bracket is narrower than `tol`. Assumes `f` is unimodal there.
pub fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_peak() {
        let (t, v) = golden_section_max(|x| -(x - 1.234).powi(2), 0.0, 3.0, 1e-9);
        assert!((t - 1.234).abs() < 1e-8);
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn grid_picks_global_peak_of_oscillation() {
        // Two peaks; the taller one is at x = 7.5.
        let f = |x: f64| (x * std::f64::consts::PI / 5.0).sin().powi(2) * (1.0 + 0.1 * x);
        let (t, v) = grid_golden_max(f, 10.0, 2000, 1e-7);
        // f' = 0 near 7.5 gives a shift of about 0.072.
        assert!((t - 7.572).abs() < 0.01, "{t}");
        assert!(v > 1.75);
    }

    #[test]
    fn peak_at_upper_edge() {
        let (t, v) = grid_golden_max(|x| x, 2.0, 10, 1e-8);
        assert!((t - 2.0).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-7);
    }

    #[test]
    fn equal_peaks_resolve_to_earliest() {
        let f = |x: f64| (x * std::f64::consts::PI).sin().powi(2);
        let (t, v) = grid_golden_max(f, 4.0, 1000, 1e-9);
        assert!((t - 0.5).abs() < 1e-6, "{t}");
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn never_worse_than_grid() {
        let f = |x: f64| (37.0 * x).cos() + (91.0 * x).sin();
        let (_, v) = grid_golden_max(f, 3.0, 50, 1e-6);
        let best = (1..=50)
            .map(|i| f(3.0 * i as f64 / 50.0))
            .fold(f64::MIN, f64::max);
        assert!(v >= best);
    }
}
