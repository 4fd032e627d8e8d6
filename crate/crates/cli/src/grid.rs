use crate::error::CliError;

/// Rectangular `(a, b)` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub steps_a: usize,
    pub steps_b: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("a-min", self.a_min),
            ("a-max", self.a_max),
            ("b-min", self.b_min),
            ("b-max", self.b_max),
        ] {
            if !v.is_finite() {
                return Err(CliError::Usage(format!("--{name} must be finite")));
            }
        }
        if self.steps_a == 0 || self.steps_b == 0 {
            return Err(CliError::Usage(
                "--steps-a and --steps-b must be >= 1".into(),
            ));
        }
        if self.a_min > self.a_max || self.b_min > self.b_max {
            return Err(CliError::Usage("grid minimum exceeds maximum".into()));
        }
        Ok(())
    }

    /// All points in row-major order (`a` outer, `b` inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let bs = linspace(self.b_min, self.b_max, self.steps_b);
        linspace(self.a_min, self.a_max, self.steps_a)
            .into_iter()
            .flat_map(|a| bs.iter().map(move |&b| (a, b)))
            .collect()
    }
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
///
/// Interior values within a few ulps of a 12-decimal number are snapped to it,
/// so `linspace(0, 0.4, 5)` yields `0.3` rather than `0.30000000000000004`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    return lo;
                }
                if i == n - 1 {
                    return hi;
                }
                let raw = lo + (hi - lo) * (i as f64) / ((n - 1) as f64);
                let snapped: f64 = format!("{raw:.12}").parse().unwrap_or(raw);
                if (snapped - raw).abs() <= 4.0 * f64::EPSILON * raw.abs().max(1.0) {
                    snapped
                } else {
                    raw
                }
            })
            .collect(),
    }
}
