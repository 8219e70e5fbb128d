//! One-dimensional maximization of the line distance along a ray.
//!
//! The profile `g(alpha) = ld(x + alpha*d, x)` is multimodal: it grows a
//! hump for every basin the ray crosses, so a pure golden-section search
//! (which assumes unimodality) would latch onto an arbitrary hump. A
//! coarse uniform scan first localizes the dominant hump at bounded cost,
//! then golden-section refinement polishes it.

use crate::error::{Error, Result};
use crate::geometry::{clip_to_bounds, line_distance, Direction};
use crate::objective::{Bounds, ObjectiveSpec, Point};

/// Parameters of the scan-then-refine search along a ray.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchParams {
    /// Number of equally spaced probes of the coarse scan (at least 3).
    pub scan_points: usize,
    /// Golden-section iterations on the bracket around the best scan probe.
    pub refine_iters: usize,
    /// Smallest step considered; rays shorter than this are "no room".
    pub alpha_min: f64,
}

impl Default for LineSearchParams {
    fn default() -> Self {
        LineSearchParams {
            scan_points: 20,
            refine_iters: 40,
            alpha_min: 1e-6,
        }
    }
}

impl LineSearchParams {
    pub fn validate(&self) -> Result<()> {
        if self.scan_points < 3 {
            return Err(Error::InvalidConfig(
                "scan_points must be at least 3".into(),
            ));
        }
        if self.refine_iters < 1 {
            return Err(Error::InvalidConfig(
                "refine_iters must be at least 1".into(),
            ));
        }
        if !(self.alpha_min > 0.0 && self.alpha_min.is_finite()) {
            return Err(Error::InvalidConfig(
                "alpha_min must be positive and finite".into(),
            ));
        }
        Ok(())
    }

    /// Objective evaluations consumed by one `maximize_ld_along` call that
    /// finds room: each probe costs two (candidate + midpoint), and the
    /// probes are the scan, the two golden-section seeds, one per
    /// refinement iteration, and the final returned midpoint.
    pub fn evals_per_search(&self) -> u64 {
        2 * (self.scan_points as u64 + self.refine_iters as u64 + 3)
    }
}

/// The best point found along one ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RayMaximum {
    /// Step length from the origin solution.
    pub alpha: f64,
    /// In-bounds candidate at that step.
    pub point: Point,
    /// Cached objective value of the candidate.
    pub value: f64,
    /// Line distance between the candidate and the origin solution.
    pub ld: f64,
}

/// Largest step `alpha >= 0` keeping `x + alpha*d` inside the box.
///
/// Per axis: `(upper-x)/d` if `d > 0`, `(lower-x)/d` if `d < 0`, no
/// constraint if `d = 0`; the minimum over axes, floored at 0 (a boundary
/// point with an outward direction has no room).
pub fn alpha_max(x: &Point, d: &Direction, b: &Bounds) -> f64 {
    assert_eq!(x.dim(), d.dim(), "alpha_max requires matching dimensions");
    assert_eq!(x.dim(), b.dim(), "alpha_max requires matching dimensions");
    let mut best = f64::INFINITY;
    for i in 0..x.dim() {
        let step = if d[i] > 0.0 {
            (b.upper()[i] - x[i]) / d[i]
        } else if d[i] < 0.0 {
            (b.lower()[i] - x[i]) / d[i]
        } else {
            continue;
        };
        best = best.min(step);
    }
    best.max(0.0)
}

/// Golden-section maximization of `g` on `[a, b]`.
///
/// Interior points at the golden ratio; the bracket shrinks by a factor
/// 0.618 per iteration and the midpoint of the final bracket is returned.
/// For unimodal `g` the error is at most `(b-a) * 0.618^iters`. Probes `g`
/// exactly `iters + 2` times.
pub fn golden_section_max<G: FnMut(f64) -> f64>(mut g: G, a: f64, b: f64, iters: usize) -> f64 {
    assert!(a < b, "golden_section_max requires a < b");
    const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..iters {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = g(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Maximizes `alpha -> ld(x + alpha*d, x)` over the in-bounds segment of
/// the ray.
///
/// Probes a uniform `scan_points`-point grid on `[alpha_min, alpha_max]`,
/// then runs golden-section refinement on the bracket between the best
/// scan probe's neighbors, and returns the best probe seen anywhere
/// (guaranteed at least as good as the whole coarse scan). Returns `None`
/// when the ray has no room (`alpha_max <= alpha_min`), which callers
/// treat as a discarded candidate. Consumes exactly
/// [`LineSearchParams::evals_per_search`] evaluations otherwise (scan-only
/// cost in the measure-zero case of a bracket collapsed to one float).
pub fn maximize_ld_along(
    origin: &Point,
    origin_value: f64,
    d: &Direction,
    spec: &ObjectiveSpec,
    params: &LineSearchParams,
) -> Result<Option<RayMaximum>> {
    params.validate()?;
    if origin.dim() != spec.dim() || d.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: if origin.dim() != spec.dim() {
                origin.dim()
            } else {
                d.dim()
            },
        });
    }

    let hi = alpha_max(origin, d, spec.bounds());
    if hi <= params.alpha_min {
        return Ok(None);
    }

    let mut best: Option<RayMaximum> = None;
    let mut failure: Option<Error> = None;
    let mut probe = |alpha: f64| -> f64 {
        let coords: Vec<f64> = origin
            .as_slice()
            .iter()
            .zip(d.as_slice())
            .map(|(x, di)| x + alpha * di)
            .collect();
        let candidate = clip_to_bounds(&Point::new_unchecked(coords), spec.bounds());
        let outcome = spec
            .evaluate(&candidate)
            .and_then(|value| {
                line_distance(&candidate, value, origin, origin_value, spec)
                    .map(|ld| (value, ld))
            });
        match outcome {
            Ok((value, ld)) => {
                if best.as_ref().is_none_or(|b| ld > b.ld) {
                    best = Some(RayMaximum {
                        alpha,
                        point: candidate,
                        value,
                        ld,
                    });
                }
                ld
            }
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    };

    let k = params.scan_points;
    let step = (hi - params.alpha_min) / (k - 1) as f64;
    let grid: Vec<f64> = (0..k)
        .map(|i| {
            if i == k - 1 {
                hi
            } else {
                params.alpha_min + i as f64 * step
            }
        })
        .collect();
    let mut best_idx = 0;
    let mut best_scan = f64::NEG_INFINITY;
    for (i, &alpha) in grid.iter().enumerate() {
        let ld = probe(alpha);
        if ld > best_scan {
            best_scan = ld;
            best_idx = i;
        }
    }

    let bracket_lo = grid[best_idx.saturating_sub(1)];
    let bracket_hi = grid[(best_idx + 1).min(k - 1)];
    // A bracket can collapse when alpha_max sits within an ulp of
    // alpha_min; the scan already probed it, so skip refinement.
    if bracket_lo < bracket_hi {
        let mid = golden_section_max(&mut probe, bracket_lo, bracket_hi, params.refine_iters);
        probe(mid);
    }

    if let Some(e) = failure {
        return Err(e);
    }
    Ok(best)
}
