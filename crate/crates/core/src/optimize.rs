//! Multistart Riemannian descent on products of complex unit spheres.
//!
//! Objectives return their value and the Euclidean gradient of each block
//! with respect to the real inner product `Re <x, y>`. Steps project the
//! gradient onto the tangent space and retract by renormalizing; the step
//! length is adapted by Armijo backtracking.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::SearchBudget;
use crate::linalg::{self, c, Vector};

#[derive(Debug, Clone)]
pub struct StartOutcome {
    pub start: usize,
    pub value: f64,
    pub point: Vec<Vector>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: StartOutcome,
    pub starts_run: usize,
    pub iterations: usize,
    pub evaluations: usize,
}

const ARMIJO: f64 = 1e-4;

fn start_seed(seed: u64, start: usize) -> u64 {
    // splitmix64 finalizer; keeps per-start streams independent of order
    let mut z = seed ^ (start as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn retract(x: &[Vector], dir: &[Vector], t: f64) -> Vec<Vector> {
    x.iter()
        .zip(dir)
        .map(|(xb, db)| {
            let y = xb - db * c(t, 0.0);
            let n = y.norm();
            if n > 0.0 {
                y / c(n, 0.0)
            } else {
                xb.clone()
            }
        })
        .collect()
}

fn tangent(x: &[Vector], grad: &[Vector]) -> Vec<Vector> {
    x.iter()
        .zip(grad)
        .map(|(xb, gb)| {
            let radial = xb.dotc(gb).re;
            gb - xb * c(radial, 0.0)
        })
        .collect()
}

/// Descends from `x0` and returns (value, point, iterations, evaluations).
pub fn descend<F>(x0: Vec<Vector>, objective: &F, iterations: usize) -> (f64, Vec<Vector>, usize, usize)
where
    F: Fn(&[Vector]) -> (f64, Vec<Vector>),
{
    let mut x = x0;
    let (mut f, mut g) = objective(&x);
    let mut evals = 1;
    let mut step = 1.0;
    let mut it = 0;
    while it < iterations {
        it += 1;
        let rg = tangent(&x, &g);
        let gn2: f64 = rg.iter().map(|v| v.norm_squared()).sum();
        if gn2.sqrt() <= 1e-14 * (1.0 + f.abs()) {
            break;
        }
        let mut accepted = false;
        while step > 1e-16 {
            let y = retract(&x, &rg, step);
            let (fy, gy) = objective(&y);
            evals += 1;
            if fy <= f - ARMIJO * step * gn2 {
                let stalled = (f - fy).abs() <= 1e-16 * (1.0 + f.abs());
                x = y;
                f = fy;
                g = gy;
                step = (step * 2.0).min(1e6);
                accepted = true;
                if stalled {
                    it = iterations;
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (f, x, it, evals)
}

/// Runs `starts` independent descents from seeded random points.
///
/// Returns the best start (lowest value, ties by lowest index). When
/// `stop_below` is set, the search ends after the first start whose final
/// value falls below it.
pub fn multistart<F>(
    blocks: &[usize],
    objective: F,
    budget: &SearchBudget,
    starts: usize,
    stop_below: Option<f64>,
) -> SearchOutcome
where
    F: Fn(&[Vector]) -> (f64, Vec<Vector>),
{
    multistart_with(blocks, objective, |_| {}, budget, starts, stop_below)
}

/// As [`multistart`], with a `polish` hook applied to each start's endpoint.
pub fn multistart_with<F, P>(
    blocks: &[usize],
    objective: F,
    polish: P,
    budget: &SearchBudget,
    starts: usize,
    stop_below: Option<f64>,
) -> SearchOutcome
where
    F: Fn(&[Vector]) -> (f64, Vec<Vector>),
    P: Fn(&mut Vec<Vector>),
{
    let mut best: Option<StartOutcome> = None;
    let mut total_it = 0;
    let mut total_evals = 0;
    let mut run = 0;
    for s in 0..starts {
        let mut rng = ChaCha8Rng::seed_from_u64(start_seed(budget.seed, s));
        let x0: Vec<Vector> = blocks
            .iter()
            .map(|&n| linalg::random_unit_vector(n, &mut rng))
            .collect();
        let (_, mut x, it, evals) = descend(x0, &objective, budget.iterations);
        polish(&mut x);
        for b in x.iter_mut() {
            linalg::fix_phase(b);
        }
        let (value, _) = objective(&x);
        total_it += it;
        total_evals += evals + 1;
        run += 1;
        let better = best.as_ref().is_none_or(|b| value < b.value);
        if better {
            best = Some(StartOutcome {
                start: s,
                value,
                point: x,
                iterations: it,
            });
        }
        if let Some(thr) = stop_below {
            if value < thr {
                break;
            }
        }
    }
    SearchOutcome {
        best: best.expect("at least one start"),
        starts_run: run,
        iterations: total_it,
        evaluations: total_evals,
    }
}
