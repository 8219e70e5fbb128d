//! Objective-function abstraction, evaluation accounting, and the two
//! benchmark functions (Rastrigin, Griewank).
//!
//! Only minimization is supported; to maximize, negate the function.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Conventional Rastrigin search box, `[-5.12, 5.12]^n`.
pub const RASTRIGIN_BOUND: f64 = 5.12;
/// Default Griewank search box, `[-10, 10]^n`. The conventional `[-600, 600]`
/// domain would put neighboring local minima thousands of suppression radii
/// apart at the sigma values used here; `[-10, 10]` keeps the minimum spacing
/// (a few units) commensurate with them.
pub const GRIEWANK_BOUND: f64 = 10.0;

/// A decision-space point: an owned vector of finite coordinates, dimension
/// at least 1. Finiteness is enforced at construction, so every `Point` in
/// circulation is valid.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidConfig(
                "point must have at least one coordinate".into(),
            ));
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Point(coords))
    }

    /// Construction shortcut for coordinates that are finite by construction
    /// (midpoints, clipped candidates). Checked in debug builds.
    pub(crate) fn new_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The origin of the given dimension.
    pub fn origin(dim: usize) -> Result<Self> {
        Point::new(vec![0.0; dim])
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// An axis-aligned box domain with `lower[i] < upper[i]` for every axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Point,
    upper: Point,
}

impl Bounds {
    pub fn new(lower: Point, upper: Point) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch {
                expected: lower.dim(),
                got: upper.dim(),
            });
        }
        for i in 0..lower.dim() {
            if lower[i] >= upper[i] {
                return Err(Error::InvalidConfig(format!(
                    "bounds must satisfy lower < upper on every axis; axis {i} has [{}, {}]",
                    lower[i], upper[i]
                )));
            }
        }
        Ok(Bounds { lower, upper })
    }

    /// The box `[lo, hi]^dim`.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Bounds::new(Point::new(vec![lo; dim])?, Point::new(vec![hi; dim])?)
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &Point {
        &self.lower
    }

    pub fn upper(&self) -> &Point {
        &self.upper
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.as_slice()
                .iter()
                .enumerate()
                .all(|(i, &c)| self.lower[i] <= c && c <= self.upper[i])
    }
}

/// The standard Rastrigin function, `f(x) = 10n + sum_i (x_i^2 - 10 cos(2 pi x_i))`.
///
/// Nonnegative everywhere, zero only at the origin; local minima sit near the
/// integer lattice.
pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|&xi| xi * xi - 10.0 * (2.0 * PI * xi).cos())
            .sum::<f64>()
}

/// The standard Griewank function,
/// `f(x) = 1 + sum_i x_i^2/4000 - prod_i cos(x_i / sqrt(i))` with 1-based `i`.
///
/// Nonnegative everywhere, zero only at the origin.
pub fn griewank(x: &[f64]) -> f64 {
    let quad: f64 = x.iter().map(|&xi| xi * xi).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| (xi / ((i + 1) as f64).sqrt()).cos())
        .product();
    1.0 + quad - prod
}

/// An objective function together with its search domain and an evaluation
/// counter.
///
/// The evaluator must be pure (same point, same value); every call to
/// [`ObjectiveSpec::evaluate`] bumps the counter by exactly one. The counter
/// is atomic so concurrent evaluation keeps exact accounting.
pub struct ObjectiveSpec {
    name: String,
    dim: usize,
    bounds: Bounds,
    evaluator: Box<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    eval_count: AtomicU64,
    global_optimum: Option<Point>,
}

impl std::fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("bounds", &self.bounds)
            .field("eval_count", &self.eval_count)
            .finish_non_exhaustive()
    }
}

impl ObjectiveSpec {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        bounds: Bounds,
        evaluator: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        if bounds.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bounds.dim(),
            });
        }
        Ok(ObjectiveSpec {
            name: name.into(),
            dim,
            bounds,
            evaluator: Box::new(evaluator),
            eval_count: AtomicU64::new(0),
            global_optimum: None,
        })
    }

    /// Records where the global optimum is known to sit (used to decide
    /// `global_found` in run reports).
    pub fn with_global_optimum(mut self, p: Point) -> Result<Self> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        self.global_optimum = Some(p);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn global_optimum(&self) -> Option<&Point> {
        self.global_optimum.as_ref()
    }

    /// Evaluates the objective at `p` and increments the evaluation counter.
    ///
    /// `Point` construction already guarantees finite coordinates; the only
    /// remaining contract violation is a dimension mismatch, which does not
    /// consume an evaluation.
    pub fn evaluate(&self, p: &Point) -> Result<f64> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        self.eval_count.fetch_add(1, Ordering::Relaxed);
        Ok((self.evaluator)(p.as_slice()))
    }

    /// Number of evaluations performed since construction.
    pub fn eval_count(&self) -> u64 {
        self.eval_count.load(Ordering::Relaxed)
    }
}

/// Builds one of the named benchmarks (`rastrigin` or `griewank`) with its
/// default box unless `bounds` overrides it. Both benchmarks have their
/// global minimum (value 0) at the origin.
pub fn make_benchmark(name: &str, dim: usize, bounds: Option<Bounds>) -> Result<ObjectiveSpec> {
    let (evaluator, default_bound): (fn(&[f64]) -> f64, f64) = match name {
        "rastrigin" => (rastrigin, RASTRIGIN_BOUND),
        "griewank" => (griewank, GRIEWANK_BOUND),
        other => return Err(Error::UnknownFunction(other.into())),
    };
    let bounds = match bounds {
        Some(b) => b,
        None => Bounds::uniform(dim, -default_bound, default_bound)?,
    };
    ObjectiveSpec::new(name, dim, bounds, evaluator)?.with_global_optimum(Point::origin(dim)?)
}
