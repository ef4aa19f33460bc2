//! Spatial resolution tied to the temporal one via `h = dt^{(2-a)/2}`.

use l1fem::fractional_time::GradedTimeMesh;
use l1fem::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingRule {
    /// `dt = T/N`.
    Nominal,
    /// `dt` = largest step of the graded mesh with exponent `gamma`.
    MaxStep { gamma: f64 },
    /// The given number of cells, independent of `N`.
    Fixed(usize),
}

impl CouplingRule {
    pub fn name(&self) -> String {
        match self {
            CouplingRule::Nominal => "nominal".into(),
            CouplingRule::MaxStep { .. } => "max-step".into(),
            CouplingRule::Fixed(m) => format!("fixed-{m}"),
        }
    }

    /// `nominal`, `max-step` (needs `gamma`) or a cell count.
    pub fn parse(s: &str, gamma: f64) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nominal" => Ok(CouplingRule::Nominal),
            "max-step" | "maxstep" => Ok(CouplingRule::MaxStep { gamma }),
            other => other
                .parse::<usize>()
                .map(CouplingRule::Fixed)
                .map_err(|_| Error::InvalidArgument(format!("unknown coupling rule '{other}'"))),
        }
    }
}

/// Mesh width `h = dt^{(2-a)/2}` for the rule (`None` for fixed meshes).
pub fn coupled_mesh_width(steps: usize, alpha: f64, final_time: f64, rule: CouplingRule) -> Result<Option<f64>> {
    let dt = match rule {
        CouplingRule::Fixed(_) => return Ok(None),
        CouplingRule::Nominal => {
            if steps == 0 {
                return Err(Error::InvalidArgument("step count must be at least 1".into()));
            }
            final_time / steps as f64
        }
        CouplingRule::MaxStep { gamma } => GradedTimeMesh::new(final_time, steps, gamma)?.max_step(),
    };
    Ok(Some(dt.powf(0.5 * (2.0 - alpha))))
}

/// Cells per direction: `round(width/h)`, at least 2.
pub fn couple_spatial_mesh(steps: usize, alpha: f64, final_time: f64, width: f64, rule: CouplingRule) -> Result<usize> {
    match coupled_mesh_width(steps, alpha, final_time, rule)? {
        None => match rule {
            CouplingRule::Fixed(m) if m >= 1 => Ok(m),
            _ => Err(Error::InvalidArgument("fixed mesh needs at least one cell".into())),
        },
        Some(h) => Ok(((width / h).round() as usize).max(2)),
    }
}
