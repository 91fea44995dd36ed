//! Derivative-free tuning of circuit angles.
//!
//! [`local_search`] runs Nelder-Mead over the `2p` coordinates
//! `[gamma_1..gamma_p, beta_1..beta_p]`, wrapping every coordinate into
//! `[0, 2pi)` inside the objective (the simplex itself moves through
//! unwrapped space). [`layerwise_optimize`] deepens one layer at a time,
//! seeding each new layer with zero angles appended to the previous optimum;
//! since a zero layer acts as the identity, the deeper search starts exactly
//! at the shallower optimum and the best value per level cannot increase.

use std::f64::consts::PI;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{QombiError, Result};
use crate::ising::IsingModel;
use crate::qaoa::{run_qaoa_with, CostDiagonal, QaoaParams};
use crate::rng;

const TWO_PI: f64 = 2.0 * PI;

/// Simplex value spread below which the search stops.
const SPREAD_TOL: f64 = 1e-6;

/// Offset applied per coordinate to form the initial simplex.
const INIT_STEP: f64 = 0.25;

/// Outcome of one angle search.
#[derive(Debug, Clone)]
pub struct OptResult {
    /// Best angles found, wrapped into `[0, 2pi)`.
    pub params: QaoaParams,
    /// Objective (energy expectation) at `params`.
    pub value: f64,
    /// Objective evaluations consumed.
    pub evaluations: usize,
    /// Best-so-far value after each improving evaluation, as
    /// `(evaluation index, value)`; non-increasing in the value.
    pub trajectory: Vec<(usize, f64)>,
}

fn wrap(x: f64) -> f64 {
    x.rem_euclid(TWO_PI)
}

fn params_from_coords(coords: &[f64]) -> Result<QaoaParams> {
    let p = coords.len() / 2;
    QaoaParams::new(coords[..p].to_vec(), coords[p..].to_vec())
}

struct Search<'a> {
    diag: &'a CostDiagonal,
    max_evals: usize,
    evaluations: usize,
    best_coords: Vec<f64>,
    best_value: f64,
    trajectory: Vec<(usize, f64)>,
}

impl Search<'_> {
    /// Evaluates the objective at unwrapped coordinates, or `None` once the
    /// budget is spent. Tracks the best wrapped point ever visited.
    fn eval(&mut self, coords: &[f64]) -> Result<Option<f64>> {
        if self.evaluations >= self.max_evals {
            return Ok(None);
        }
        self.evaluations += 1;
        let wrapped: Vec<f64> = coords.iter().map(|&x| wrap(x)).collect();
        let params = params_from_coords(&wrapped)?;
        let state = run_qaoa_with(self.diag, &params)?;
        let value = self.diag.expectation(&state)?;
        if value < self.best_value {
            self.best_value = value;
            self.best_coords = wrapped;
            self.trajectory.push((self.evaluations, value));
        }
        Ok(Some(value))
    }
}

/// Nelder-Mead (reflection 1, expansion 2, contraction 0.5, shrink 0.5) from
/// the given starting angles, spending at most `max_evals` objective
/// evaluations. Stops early when the simplex's value spread drops below
/// 1e-6. Returns the best point ever evaluated, which is never worse than
/// the starting point. Fully deterministic.
pub fn local_search(m: &IsingModel, init: &QaoaParams, max_evals: usize) -> Result<OptResult> {
    let diag = CostDiagonal::new(m)?;
    local_search_with(&diag, init, max_evals)
}

/// [`local_search`] against a prebuilt cost diagonal.
pub fn local_search_with(
    diag: &CostDiagonal,
    init: &QaoaParams,
    max_evals: usize,
) -> Result<OptResult> {
    let dim = 2 * init.p();
    if max_evals < dim + 1 {
        return Err(QombiError::Validation(format!(
            "budget {max_evals} cannot evaluate the initial {} simplex vertices",
            dim + 1
        )));
    }

    let mut search = Search {
        diag,
        max_evals,
        evaluations: 0,
        best_coords: Vec::new(),
        best_value: f64::INFINITY,
        trajectory: Vec::new(),
    };

    let x0: Vec<f64> = init.gammas().iter().chain(init.betas()).copied().collect();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let f0 = search.eval(&x0)?.expect("budget admits the initial simplex");
    simplex.push((x0.clone(), f0));
    for i in 0..dim {
        let mut x = x0.clone();
        x[i] += INIT_STEP;
        let f = search.eval(&x)?.expect("budget admits the initial simplex");
        simplex.push((x, f));
    }

    'outer: loop {
        simplex.sort_by(|a, b| f64::total_cmp(&a.1, &b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        if spread < SPREAD_TOL {
            break;
        }

        let mut centroid = vec![0.0f64; dim];
        for (x, _) in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v;
            }
        }
        for c in &mut centroid {
            *c /= dim as f64;
        }

        let worst = simplex[dim].clone();
        let reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| c + (c - w))
            .collect();
        let Some(f_reflected) = search.eval(&reflected)? else {
            break;
        };

        if f_reflected < simplex[0].1 {
            let expanded: Vec<f64> = centroid
                .iter()
                .zip(&reflected)
                .map(|(c, r)| c + 2.0 * (r - c))
                .collect();
            let Some(f_expanded) = search.eval(&expanded)? else {
                simplex[dim] = (reflected, f_reflected);
                break;
            };
            simplex[dim] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_reflected);
            continue;
        }

        // Contract toward the better of the reflected and worst points.
        let (anchor, f_anchor) = if f_reflected < worst.1 {
            (&reflected, f_reflected)
        } else {
            (&worst.0, worst.1)
        };
        let contracted: Vec<f64> = centroid
            .iter()
            .zip(anchor)
            .map(|(c, a)| c + 0.5 * (a - c))
            .collect();
        let Some(f_contracted) = search.eval(&contracted)? else {
            break;
        };
        if f_contracted <= f_anchor {
            simplex[dim] = (contracted, f_contracted);
            continue;
        }

        // Shrink everything toward the best vertex.
        let best = simplex[0].0.clone();
        for k in 1..=dim {
            let shrunk: Vec<f64> = best
                .iter()
                .zip(&simplex[k].0)
                .map(|(b, x)| b + 0.5 * (x - b))
                .collect();
            let Some(f_shrunk) = search.eval(&shrunk)? else {
                break 'outer;
            };
            simplex[k] = (shrunk, f_shrunk);
        }
    }

    Ok(OptResult {
        params: params_from_coords(&search.best_coords)?,
        value: search.best_value,
        evaluations: search.evaluations,
        trajectory: search.trajectory,
    })
}

/// Optimizes depths `1..=p_max` in sequence. Depth 1 starts from seeded
/// uniform angles in `[0, 2pi)^2`; depth k+1 starts from the depth-k optimum
/// with a zero layer appended, so reported values are non-increasing with
/// depth. Each level gets its own `max_evals_per_level` budget.
pub fn layerwise_optimize(
    m: &IsingModel,
    p_max: usize,
    max_evals_per_level: usize,
    seed: u64,
) -> Result<Vec<OptResult>> {
    if p_max == 0 {
        return Err(QombiError::Validation("depth must be at least 1".into()));
    }
    let diag = CostDiagonal::new(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = QaoaParams::new(
        vec![TWO_PI * rng::unit(&mut rng)],
        vec![TWO_PI * rng::unit(&mut rng)],
    )?;
    let mut results = vec![local_search_with(&diag, &init, max_evals_per_level)?];
    for _ in 1..p_max {
        let deeper = results.last().unwrap().params.extended(0.0, 0.0);
        results.push(local_search_with(&diag, &deeper, max_evals_per_level)?);
    }
    Ok(results)
}

/// Single search at the given depth from fully random seeded angles, with no
/// warm start; the `--fresh` alternative to layer-wise deepening.
pub fn fresh_optimize(
    m: &IsingModel,
    depth: usize,
    max_evals: usize,
    seed: u64,
) -> Result<OptResult> {
    if depth == 0 {
        return Err(QombiError::Validation("depth must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gammas: Vec<f64> = (0..depth).map(|_| TWO_PI * rng::unit(&mut rng)).collect();
    let betas: Vec<f64> = (0..depth).map(|_| TWO_PI * rng::unit(&mut rng)).collect();
    local_search(m, &QaoaParams::new(gammas, betas)?, max_evals)
}
