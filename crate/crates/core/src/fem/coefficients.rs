use std::fmt;
use std::sync::Arc;

/// Scalar field `(x, t) -> value`.
pub type ScalarField = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;
/// Vector field `(x, t) -> [v1, v2]`; 1D problems use the first component.
pub type VectorField = Arc<dyn Fn(&[f64], f64) -> [f64; 2] + Send + Sync>;
/// Symmetric matrix field `(x, t) -> A`; 1D problems use `A[0][0]`.
pub type MatrixField = Arc<dyn Fn(&[f64], f64) -> [[f64; 2]; 2] + Send + Sync>;

/// Coefficients of `D^a u - div(A grad u) + b . grad u + c u = lambda I u + f`.
///
/// Absent convection, reaction or source mean identically zero. Leaving
/// `convection` empty declares `b = 0`, which lets symmetric solvers be used.
#[derive(Clone)]
pub struct CoefficientSet {
    pub dim: usize,
    pub diffusion: MatrixField,
    pub convection: Option<VectorField>,
    pub reaction: Option<ScalarField>,
    pub source: Option<ScalarField>,
    pub lambda: f64,
}

impl fmt::Debug for CoefficientSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSet")
            .field("dim", &self.dim)
            .field("convection", &self.convection.is_some())
            .field("reaction", &self.reaction.is_some())
            .field("source", &self.source.is_some())
            .field("lambda", &self.lambda)
            .finish()
    }
}

impl CoefficientSet {
    /// `A = I`, everything else zero.
    pub fn laplace(dim: usize) -> Self {
        CoefficientSet {
            dim,
            diffusion: Arc::new(|_, _| [[1.0, 0.0], [0.0, 1.0]]),
            convection: None,
            reaction: None,
            source: None,
            lambda: 0.0,
        }
    }

    pub fn with_diffusion(mut self, a: impl Fn(&[f64], f64) -> [[f64; 2]; 2] + Send + Sync + 'static) -> Self {
        self.diffusion = Arc::new(a);
        self
    }

    /// Scalar diffusion `A = a(x, t) I`.
    pub fn with_scalar_diffusion(self, a: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        self.with_diffusion(move |x, t| {
            let v = a(x, t);
            [[v, 0.0], [0.0, v]]
        })
    }

    pub fn with_convection(mut self, b: impl Fn(&[f64], f64) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.convection = Some(Arc::new(b));
        self
    }

    pub fn with_reaction(mut self, c: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        self.reaction = Some(Arc::new(c));
        self
    }

    pub fn with_source(mut self, f: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Some(Arc::new(f));
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn convection_at(&self, x: &[f64], t: f64) -> [f64; 2] {
        self.convection.as_ref().map_or([0.0; 2], |b| b(x, t))
    }

    pub fn reaction_at(&self, x: &[f64], t: f64) -> f64 {
        self.reaction.as_ref().map_or(0.0, |c| c(x, t))
    }

    pub fn source_at(&self, x: &[f64], t: f64) -> f64 {
        self.source.as_ref().map_or(0.0, |f| f(x, t))
    }

    /// Smallest eigenvalue of the (symmetrised) diffusion matrix at `(x, t)`,
    /// and its asymmetry `|A12 - A21|`.
    pub fn ellipticity_at(&self, x: &[f64], t: f64) -> (f64, f64) {
        let a = (self.diffusion)(x, t);
        if self.dim == 1 {
            return (a[0][0], 0.0);
        }
        let off = 0.5 * (a[0][1] + a[1][0]);
        let mean = 0.5 * (a[0][0] + a[1][1]);
        let half_diff = 0.5 * (a[0][0] - a[1][1]);
        let min_eig = mean - (half_diff * half_diff + off * off).sqrt();
        (min_eig, (a[0][1] - a[1][0]).abs())
    }
}
