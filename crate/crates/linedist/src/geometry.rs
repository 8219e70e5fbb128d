//! The line-distance diversity measure and supporting vector operations.
//!
//! The line distance lifts two decision points into the objective's graph
//! space: `x' = [x, f(x)]`, `y' = [y, f(y)]`, `z' = [z, f(z)]` with
//! `z = (x+y)/2`, all (n+1)-dimensional, and measures the Euclidean
//! distance from `z'` to the infinite line through `x'` and `y'`. Two
//! points in one basin produce a chord that hugs the function surface
//! (small distance); points in different basins produce a chord that the
//! surface dips away from (large distance).

use rand::Rng;

use crate::error::{Error, Result};
use crate::objective::{Bounds, ObjectiveSpec, Point};

/// Chords shorter than this in graph space are treated as degenerate and
/// given line distance 0, so a zero-diversity pair never looks attractive
/// to a maximizer.
pub const DEGENERATE_CHORD: f64 = 1e-12;

/// A unit-norm direction in decision space (norm 1 within 1e-12).
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidConfig(
                "direction must have at least one coordinate".into(),
            ));
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "direction must have unit norm, got {norm}"
            )));
        }
        Ok(Direction(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for Direction {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Line distance between the solutions `(x, fx)` and `(y, fy)`.
///
/// `fx` and `fy` are the caller's cached objective values; only the
/// midpoint costs a fresh evaluation, so every call increments the spec's
/// evaluation counter by exactly 1 (including degenerate calls). The
/// result is the distance from `[z, f(z)]` to the line through `[x, fx]`
/// and `[y, fy]`: with `v = z' - x'` and `u = (y' - x') / |y' - x'|`,
/// `sqrt(|v|^2 - (v.u)^2)`, evaluated in a form whose radicand cannot go
/// negative under round-off. A chord shorter than [`DEGENERATE_CHORD`]
/// yields 0.
pub fn line_distance(
    x: &Point,
    fx: f64,
    y: &Point,
    fy: f64,
    spec: &ObjectiveSpec,
) -> Result<f64> {
    if x.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: x.dim(),
        });
    }
    if y.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: y.dim(),
        });
    }

    let z = Point::new_unchecked(
        x.as_slice()
            .iter()
            .zip(y.as_slice())
            .map(|(a, b)| 0.5 * (a + b))
            .collect(),
    );
    let fz = spec.evaluate(&z)?;

    // Decision-space part of the chord; z - x = (y - x)/2 component-wise,
    // so everything reduces to scalar accumulations over y - x.
    let chord_sq_dec: f64 = x
        .as_slice()
        .iter()
        .zip(y.as_slice())
        .map(|(a, b)| (b - a) * (b - a))
        .sum();
    let df_yx = fy - fx;
    let df_zx = fz - fx;

    let chord_sq = chord_sq_dec + df_yx * df_yx;
    if chord_sq < DEGENERATE_CHORD * DEGENERATE_CHORD {
        return Ok(0.0);
    }
    // |v|^2 - (v.u)^2 evaluated through the perpendicular component
    // w = v - (v.u)u, whose squared norm is the same radicand as a sum of
    // squares: never negative, and free of the catastrophic cancellation
    // the subtracted form suffers when z' sits near the chord. Since
    // v_i = chord_i/2 on the decision axes, w collapses to one shared
    // factor there.
    let s = (0.5 * chord_sq_dec + df_zx * df_yx) / chord_sq;
    let w_dec = 0.5 - s;
    let w_f = df_zx - s * df_yx;
    Ok((w_dec * w_dec * chord_sq_dec + w_f * w_f).sqrt())
}

/// Euclidean distance between two points.
///
/// Panics on a dimension mismatch; callers are expected to compare points
/// from the same decision space.
pub fn euclidean(x: &Point, y: &Point) -> f64 {
    assert_eq!(
        x.dim(),
        y.dim(),
        "euclidean distance requires equal dimensions"
    );
    x.as_slice()
        .iter()
        .zip(y.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Draws a direction uniformly from `[-1, 1]^n` and normalizes it.
///
/// Consumes exactly `n` values from the stream per attempt; an attempt
/// whose norm falls below 1e-9 is redrawn (probability ~0, loop terminates
/// with probability 1).
pub fn sample_direction<R: Rng>(rng: &mut R, n: usize) -> Direction {
    assert!(n >= 1, "direction dimension must be at least 1");
    loop {
        let coords: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 1e-9 {
            continue;
        }
        return Direction(coords.into_iter().map(|c| c / norm).collect());
    }
}

/// Clamps each coordinate of `p` into the box `b`.
///
/// Panics on a dimension mismatch.
pub fn clip_to_bounds(p: &Point, b: &Bounds) -> Point {
    assert_eq!(p.dim(), b.dim(), "clip requires matching dimensions");
    Point::new_unchecked(
        p.as_slice()
            .iter()
            .enumerate()
            .map(|(i, &c)| c.clamp(b.lower()[i], b.upper()[i]))
            .collect(),
    )
}
