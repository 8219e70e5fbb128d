//! The search loop: a population expands along random rays by maximizing
//! line distance to the parent, parents whose candidates are all rejected
//! are archived as presumed local optima, and near-duplicates are
//! suppressed.
//!
//! Every run is a pure function of its [`Config`]: iteration order and
//! random-stream consumption are fixed, so identical configurations give
//! bit-identical reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{euclidean, sample_direction};
use crate::linesearch::{maximize_ld_along, LineSearchParams};
use crate::objective::{ObjectiveSpec, Point};
use crate::verify::{count_distinct_optima, is_local_optimum, VerifyParams};

/// A decision point with its cached objective value and a creation-ordered
/// id. Solutions are never mutated, only created and discarded, so the id
/// doubles as a deterministic tie-breaker.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub point: Point,
    pub value: f64,
    pub id: u64,
}

/// Run parameters of the search.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Offspring per solution per iteration.
    pub m: usize,
    /// Suppression radius and expansion acceptance threshold.
    pub sigma: f64,
    /// Number of expansion/suppression iterations.
    pub iterations: usize,
    /// Master seed of the run's random stream.
    pub seed: u64,
    /// Hard cap on the active population (keeps the best by value).
    pub pop_cap: usize,
    /// Also discard active solutions sitting within sigma of an archived
    /// optimum that is at least as good.
    pub cross_suppression: bool,
    pub linesearch: LineSearchParams,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            m: 10,
            sigma: 1.0,
            iterations: 1000,
            seed: 0,
            pop_cap: 10_000,
            cross_suppression: true,
            linesearch: LineSearchParams::default(),
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidConfig("m must be at least 1".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidConfig(
                "sigma must be positive and finite".into(),
            ));
        }
        if self.iterations < 1 {
            return Err(Error::InvalidConfig(
                "iterations must be at least 1".into(),
            ));
        }
        if self.pop_cap < 1 {
            return Err(Error::InvalidConfig("pop_cap must be at least 1".into()));
        }
        self.linesearch.validate()
    }
}

/// Mutable state of one run: the active population, the local-optima
/// archive, the iteration counter, and the random stream.
#[derive(Debug, Clone)]
pub struct SearchState {
    /// Active population P.
    pub population: Vec<Solution>,
    /// Local-optima archive LP; members never re-enter expansion.
    pub local_optima: Vec<Solution>,
    pub iter: usize,
    rng: ChaCha8Rng,
    next_id: u64,
}

impl SearchState {
    fn fresh_uniform(&mut self, spec: &ObjectiveSpec) -> Result<Solution> {
        let bounds = spec.bounds();
        let coords: Vec<f64> = (0..spec.dim())
            .map(|i| self.rng.random_range(bounds.lower()[i]..=bounds.upper()[i]))
            .collect();
        let point = Point::new_unchecked(coords);
        let value = spec.evaluate(&point)?;
        let id = self.next_id;
        self.next_id += 1;
        Ok(Solution { point, value, id })
    }
}

/// One row of a report's per-iteration trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub p_size: usize,
    pub lp_size: usize,
    /// Best (smallest) objective value across both populations.
    pub best_value: f64,
}

/// Everything one repetition produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub repetition: usize,
    /// Final active population P.
    pub final_population: Vec<Solution>,
    /// Final local-optima archive LP.
    pub final_archive: Vec<Solution>,
    /// Spec evaluation counter at the end of the run; includes the
    /// verification probes spent computing `distinct_optima` and
    /// `global_found`.
    pub eval_count: u64,
    pub per_iteration: Vec<IterationRecord>,
    /// Verified distinct local optima among LP and P.
    pub distinct_optima: usize,
    /// True when a solution sits within 1e-2 of the known global optimum
    /// and verifies as locally optimal.
    pub global_found: bool,
}

/// Radius around the known global optimum within which a verified solution
/// counts as having found it.
pub const GLOBAL_FOUND_RADIUS: f64 = 1e-2;

/// Creates the initial state: a single uniform-random solution in P, an
/// empty archive, and the seeded stream.
pub fn init(config: &Config, spec: &ObjectiveSpec) -> Result<SearchState> {
    config.validate()?;
    let mut state = SearchState {
        population: Vec::new(),
        local_optima: Vec::new(),
        iter: 0,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        next_id: 0,
    };
    let first = state.fresh_uniform(spec)?;
    state.population.push(first);
    Ok(state)
}

/// Expands one parent: `m` independent trials, each sampling a direction,
/// maximizing line distance along it, and accepting the candidate iff it
/// lands farther than sigma from the parent. Returns the accepted
/// candidates (with fresh ids) and whether the parent is exhausted (all
/// `m` discarded). Consumes exactly `m` directions from the stream.
pub fn expand(
    parent: &Solution,
    state: &mut SearchState,
    config: &Config,
    spec: &ObjectiveSpec,
) -> Result<(Vec<Solution>, bool)> {
    let mut accepted = Vec::new();
    for _ in 0..config.m {
        let dir = sample_direction(&mut state.rng, spec.dim());
        let found = maximize_ld_along(
            &parent.point,
            parent.value,
            &dir,
            spec,
            &config.linesearch,
        )?;
        if let Some(ray_max) = found {
            if euclidean(&ray_max.point, &parent.point) > config.sigma {
                let id = state.next_id;
                state.next_id += 1;
                accepted.push(Solution {
                    point: ray_max.point,
                    value: ray_max.value,
                    id,
                });
            }
        }
    }
    let exhausted = accepted.is_empty();
    Ok((accepted, exhausted))
}

/// Removes near-duplicates: scanning pairs in ascending id order, whenever
/// two solutions are closer than sigma the one with the larger objective
/// value is discarded (minimization; ties discard the larger id). The
/// survivors are a subset of the input with all pairwise distances at
/// least sigma, returned in ascending id order.
pub fn suppress(pop: &[Solution], sigma: f64) -> Vec<Solution> {
    let mut order: Vec<&Solution> = pop.iter().collect();
    order.sort_by_key(|s| s.id);
    let mut alive = vec![true; order.len()];
    for i in 0..order.len() {
        if !alive[i] {
            continue;
        }
        for j in (i + 1)..order.len() {
            if !alive[j] {
                continue;
            }
            if euclidean(&order[i].point, &order[j].point) < sigma {
                // Worse dies; on a value tie the newer (larger id) dies.
                if order[i].value > order[j].value {
                    alive[i] = false;
                    break;
                } else {
                    alive[j] = false;
                }
            }
        }
    }
    order
        .into_iter()
        .zip(alive)
        .filter_map(|(s, keep)| keep.then(|| s.clone()))
        .collect()
}

/// One iteration: expand every current solution (snapshot order), archive
/// exhausted parents, append accepted candidates, suppress both
/// populations (and across them when configured), enforce the population
/// cap, and restart from a fresh uniform solution if P emptied out.
pub fn step(state: &mut SearchState, config: &Config, spec: &ObjectiveSpec) -> Result<()> {
    let parents = std::mem::take(&mut state.population);
    let mut survivors = Vec::with_capacity(parents.len());
    let mut offspring = Vec::new();
    for parent in &parents {
        let (accepted, exhausted) = expand(parent, state, config, spec)?;
        if exhausted {
            state.local_optima.push(parent.clone());
        } else {
            survivors.push(parent.clone());
        }
        offspring.extend(accepted);
    }
    survivors.extend(offspring);
    state.population = suppress(&survivors, config.sigma);
    state.local_optima = suppress(&state.local_optima, config.sigma);

    if config.cross_suppression {
        let archive = &state.local_optima;
        state.population.retain(|p| {
            !archive.iter().any(|lp| {
                lp.value <= p.value && euclidean(&lp.point, &p.point) < config.sigma
            })
        });
    }

    if state.population.len() > config.pop_cap {
        state
            .population
            .sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap().then(a.id.cmp(&b.id)));
        state.population.truncate(config.pop_cap);
        state.population.sort_by_key(|s| s.id);
    }

    if state.population.is_empty() {
        let fresh = state.fresh_uniform(spec)?;
        state.population.push(fresh);
    }

    state.iter += 1;
    Ok(())
}

/// Runs a full repetition: init, `iterations` steps, then a report with
/// the verified distinct-optima count over LP and P.
pub fn run(
    config: &Config,
    spec: &ObjectiveSpec,
    repetition: usize,
    verify: &VerifyParams,
) -> Result<RunReport> {
    let mut state = init(config, spec)?;
    let mut per_iteration = Vec::with_capacity(config.iterations);
    for _ in 0..config.iterations {
        step(&mut state, config, spec)?;
        let best_value = state
            .population
            .iter()
            .chain(&state.local_optima)
            .map(|s| s.value)
            .fold(f64::INFINITY, f64::min);
        per_iteration.push(IterationRecord {
            iter: state.iter,
            p_size: state.population.len(),
            lp_size: state.local_optima.len(),
            best_value,
        });
    }

    let mut combined: Vec<Solution> = state.local_optima.clone();
    combined.extend(state.population.iter().cloned());
    let (distinct_optima, _) = count_distinct_optima(&combined, spec, verify)?;

    let global_found = match spec.global_optimum() {
        Some(target) => {
            let mut found = false;
            for s in &combined {
                if euclidean(&s.point, target) < GLOBAL_FOUND_RADIUS
                    && is_local_optimum(&s.point, spec, verify)?
                {
                    found = true;
                    break;
                }
            }
            found
        }
        None => false,
    };

    Ok(RunReport {
        repetition,
        final_population: state.population,
        final_archive: state.local_optima,
        eval_count: spec.eval_count(),
        per_iteration,
        distinct_optima,
        global_found,
    })
}
