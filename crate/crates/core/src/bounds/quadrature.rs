//! Composite midpoint rule for `int_0^1 |f|` and `int_0^1 |f'|`.

use rayon::prelude::*;
use serde::Serialize;

use super::family::Family;
use crate::error::{Error, Result};
use crate::phase::Phase;

pub const DEFAULT_NODE_MULTIPLIER: u64 = 16;
/// Nodes summed sequentially per chunk; chunk sums are then added in order,
/// so the result does not depend on the thread count.
const CHUNK: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct L1Estimate {
    pub value: f64,
    pub nodes: u64,
    /// `|I_N - I_(N/2)|` when the refinement check ran.
    pub refinement_delta: Option<f64>,
}

/// Midpoint sum of `g(t_i)` over `t_i = (2i+1)/(2N)`, with each node an exact phase.
pub fn midpoint_sum(nodes: u64, g: impl Fn(Phase) -> f64 + Sync) -> f64 {
    let chunks = nodes.div_ceil(CHUNK);
    let den = 2 * nodes;
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(nodes);
            (lo..hi)
                .map(|i| g(Phase::ratio(2 * i as i128 + 1, den)))
                .sum::<f64>()
        })
        .collect();
    partial.iter().sum::<f64>() / nodes as f64
}

/// `int_0^1 |F|` (or `|F'|` when `derivative`) with `nodes >= 16 x` midpoints.
pub fn l1_norm(f: &Family, derivative: bool, nodes: u64) -> Result<L1Estimate> {
    l1_norm_with(f, derivative, nodes, DEFAULT_NODE_MULTIPLIER, false)
}

pub fn l1_norm_with(
    f: &Family,
    derivative: bool,
    nodes: u64,
    multiplier: u64,
    refine: bool,
) -> Result<L1Estimate> {
    f.validate()?;
    let required = f.scale() * multiplier as f64;
    if (nodes as f64) < required {
        return Err(Error::Guard {
            what: "quadrature nodes below multiplier * x",
            value: required.min(u128::MAX as f64) as u128,
            limit: nodes as u128,
        });
    }
    // 2N must fit the phase denominator
    if nodes > u64::MAX / 2 {
        return Err(Error::InvalidArgument("too many quadrature nodes".into()));
    }
    let g = |t: Phase| {
        if derivative {
            f.eval_with_derivative(t).1.norm()
        } else {
            f.abs(t)
        }
    };
    let value = midpoint_sum(nodes, g);
    let refinement_delta = refine.then(|| (value - midpoint_sum(nodes / 2, g)).abs());
    Ok(L1Estimate {
        value,
        nodes,
        refinement_delta,
    })
}

/// Default node count `multiplier * x`, rounded up.
pub fn default_nodes(f: &Family, multiplier: u64) -> u64 {
    (f.scale() * multiplier as f64).ceil().max(1.0) as u64
}
