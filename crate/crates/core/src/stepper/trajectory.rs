use std::io::Write;

use crate::{Error, Result};

/// `printf("%.6e")` formatting: six fraction digits, signed two-digit
/// exponent.
pub fn format_sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.6e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Coefficient vectors `u^0 ... u^N` with per-step solver diagnostics.
/// Diagnostics at index 0 refer to the initial data and are zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub iterations: Vec<usize>,
    pub residuals: Vec<f64>,
    pub wall_seconds: Vec<f64>,
}

impl Trajectory {
    pub fn new(t0: f64, u0: Vec<f64>) -> Self {
        Trajectory {
            times: vec![t0],
            values: vec![u0],
            iterations: vec![0],
            residuals: vec![0.0],
            wall_seconds: vec![0.0],
        }
    }

    pub fn push(&mut self, t: f64, u: Vec<f64>, iterations: usize, residual: f64, wall_seconds: f64) {
        self.times.push(t);
        self.values.push(u);
        self.iterations.push(iterations);
        self.residuals.push(residual);
        self.wall_seconds.push(wall_seconds);
    }

    /// Number of completed steps.
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn last(&self) -> &[f64] {
        self.values.last().expect("trajectory holds u^0")
    }

    /// Max-norm distance between two trajectories over all time levels.
    pub fn max_difference(&self, other: &Trajectory) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        let mut d = 0.0f64;
        for (a, b) in self.values.iter().zip(&other.values) {
            if a.len() != b.len() {
                return Err(Error::DimensionMismatch {
                    expected: a.len(),
                    got: b.len(),
                });
            }
            for (x, y) in a.iter().zip(b) {
                d = d.max((x - y).abs());
            }
        }
        Ok(d)
    }

    /// Per-step CSV: `n,t_n,iterations,residual` followed by the named extra
    /// columns (one value per time level). Wall-clock times are left out so
    /// that reruns are byte-identical.
    pub fn write_csv<W: Write>(&self, out: &mut W, extra: &[(&str, &[f64])]) -> Result<()> {
        for (name, col) in extra {
            if col.len() != self.times.len() {
                return Err(Error::InvalidArgument(format!(
                    "column '{name}' has {} entries, expected {}",
                    col.len(),
                    self.times.len()
                )));
            }
        }
        let io = |e: std::io::Error| Error::InvalidState(format!("write failed: {e}"));
        let mut header = String::from("n,t_n,iterations,residual");
        for (name, _) in extra {
            header.push(',');
            header.push_str(name);
        }
        writeln!(out, "{header}").map_err(io)?;
        for n in 0..self.times.len() {
            let mut line = format!(
                "{n},{},{},{}",
                format_sci(self.times[n]),
                self.iterations[n],
                format_sci(self.residuals[n])
            );
            for (_, col) in extra {
                line.push(',');
                line.push_str(&format_sci(col[n]));
            }
            writeln!(out, "{line}").map_err(io)?;
        }
        Ok(())
    }
}
