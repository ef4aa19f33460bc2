use crate::fractional_time::L1KernelTable;
use crate::linalg::SparseMatrix;
use crate::{Error, Result};

/// Treatment of the nonlocal integral term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Integral term implicit: dense per-step systems.
    FullyImplicit,
    /// `E u^n = u^{n-1}`.
    Imex1,
    /// `E u^n = (1 + rho_n) u^{n-1} - rho_n u^{n-2}`, with `E u^1 = u^0`.
    Imex2,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::FullyImplicit => "implicit",
            SchemeKind::Imex1 => "imex1",
            SchemeKind::Imex2 => "imex2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "implicit" | "fully-implicit" => Ok(SchemeKind::FullyImplicit),
            "imex1" | "imex-1" => Ok(SchemeKind::Imex1),
            "imex2" | "imex-2" => Ok(SchemeKind::Imex2),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Result of the extrapolation operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Extrapolated {
    /// The integral term uses the unknown `u^n` itself.
    UseCurrent,
    Vector(Vec<f64>),
}

/// `E phi^n` from `history = [phi^0, ..., phi^{n-1}]` (at least).
pub fn extrapolate(scheme: SchemeKind, history: &[Vec<f64>], n: usize, rho_n: f64) -> Result<Extrapolated> {
    if n == 0 {
        return Err(Error::InvalidArgument("extrapolation needs n >= 1".into()));
    }
    if scheme == SchemeKind::FullyImplicit {
        return Ok(Extrapolated::UseCurrent);
    }
    if history.len() < n {
        return Err(Error::InvalidState(format!(
            "extrapolation at step {n} needs {n} past values, have {}",
            history.len()
        )));
    }
    let prev = &history[n - 1];
    match scheme {
        SchemeKind::Imex2 if n >= 2 => {
            let prev2 = &history[n - 2];
            Ok(Extrapolated::Vector(
                prev.iter().zip(prev2).map(|(a, b)| (1.0 + rho_n) * a - rho_n * b).collect(),
            ))
        }
        _ => Ok(Extrapolated::Vector(prev.clone())),
    }
}

/// Past-value part of the L1 sum at step `n`:
/// `sum_{j=1}^{n-1} (K^{n,j+1} - K^{n,j}) u^j + K^{n,1} u^0`, so that
/// `D^a u^n = K^{n,n} u^n - history_combination`.
pub fn history_combination(values: &[Vec<f64>], kernels: &L1KernelTable, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > kernels.steps() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: kernels.steps(),
        });
    }
    if values.len() < n {
        return Err(Error::InvalidState(format!(
            "history at step {n} needs {n} past values, have {}",
            values.len()
        )));
    }
    let row = kernels.k_row(n);
    let mut out: Vec<f64> = values[0].iter().map(|v| row[0] * v).collect();
    for j in 1..n {
        let w = row[j] - row[j - 1];
        if values[j].len() != out.len() {
            return Err(Error::DimensionMismatch {
                expected: out.len(),
                got: values[j].len(),
            });
        }
        for (o, v) in out.iter_mut().zip(&values[j]) {
            *o += w * v;
        }
    }
    Ok(out)
}

/// Mass-weighted history term `M * history_combination`.
pub fn history_rhs(values: &[Vec<f64>], kernels: &L1KernelTable, mass: &SparseMatrix, n: usize) -> Result<Vec<f64>> {
    let h = history_combination(values, kernels, n)?;
    if h.len() != mass.n_cols() {
        return Err(Error::DimensionMismatch {
            expected: mass.n_cols(),
            got: h.len(),
        });
    }
    Ok(mass.matvec(&h))
}
