//! Multimodal optimization by direct maximization of the line-distance
//! diversity measure.
//!
//! The line distance between two solutions `x` and `y` of an objective `f`
//! is the Euclidean distance, in (n+1)-dimensional graph space, from the
//! augmented midpoint `[z, f(z)]` (with `z = (x+y)/2`) to the line through
//! `[x, f(x)]` and `[y, f(y)]`. It is near zero when both points sit in the
//! same basin of attraction and large when they straddle different basins,
//! which makes it a useful diversity measure: a population that expands by
//! maximizing line distance along random rays spreads one representative
//! into each basin instead of collapsing onto a single optimum.
//!
//! The crate provides:
//!
//! - [`objective`]: the objective-function abstraction with evaluation
//!   counting, plus the Rastrigin and Griewank benchmarks,
//! - [`geometry`]: the line-distance measure and supporting vector ops,
//! - [`linesearch`]: one-dimensional maximization of the line distance
//!   along a ray (coarse scan + golden-section refinement),
//! - [`engine`]: the search loop (expansion, archiving, suppression),
//! - [`verify`]: independent local-optimality checks and distinct-optima
//!   counting,
//! - [`cli`] / [`output`]: the experiment driver with CSV/JSON persistence
//!   and static SVG plots.
//!
//! # Example
//!
//! ```
//! use linedist::engine::{run, Config};
//! use linedist::objective::make_benchmark;
//! use linedist::verify::VerifyParams;
//!
//! let spec = make_benchmark("rastrigin", 2, None).unwrap();
//! let config = Config {
//!     sigma: 0.9,
//!     iterations: 50,
//!     seed: 7,
//!     ..Config::default()
//! };
//! let report = run(&config, &spec, 0, &VerifyParams::default()).unwrap();
//! assert!(!report.final_population.is_empty());
//! ```

pub mod cli;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod linesearch;
pub mod objective;
pub mod output;
pub mod verify;

pub use error::Error;
