//! Stochastic growth trees started from a single edge: preferential
//! attachment (BA, one edge per step) and uniform random attachment.
//!
//! Besides the generators this module carries the published closed forms
//! and recurrence for the expected Wiener index / mean path length, plus two
//! oracles: exact enumeration of every attachment history (small `t`) and
//! Monte Carlo sampling. The published expressions are reported next to the
//! oracles and are not asserted to equal them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, ratio, serialize_opt_rational};
use crate::graph::{Graph, Tree};
use crate::hitting::Estimate;
use crate::wiener::{tree_wiener, wiener_index};

/// Largest `t` accepted by exhaustive enumeration; `(t + 1)!` histories.
pub const MAX_ENUMERATION_T: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomKind {
    Ba,
    Uniform,
}

impl fmt::Display for RandomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RandomKind::Ba => "ba",
            RandomKind::Uniform => "uniform",
        })
    }
}

impl FromStr for RandomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ba" => Ok(RandomKind::Ba),
            "uniform" => Ok(RandomKind::Uniform),
            _ => Err(Error::Parameter(format!(
                "unknown random model `{s}` (expected ba or uniform)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RandomModelSpec {
    pub kind: RandomKind,
    pub t: u32,
    pub rng_seed: u64,
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Grows `t` steps from the edge `{0, 1}`; vertex `s + 1` arrives at step `s`.
fn grow_random<R: Rng>(kind: RandomKind, t: u32, rng: &mut R) -> Tree {
    let n = t as usize + 2;
    let mut adj = vec![Vec::new(); n];
    adj[0].push(1);
    adj[1].push(0);
    // each edge contributes both endpoints, so a uniform pick is degree-proportional
    let mut endpoints = Vec::with_capacity(2 * (n - 1));
    endpoints.extend([0usize, 1]);
    for s in 1..=t as usize {
        let target = match kind {
            RandomKind::Ba => endpoints[rng.random_range(0..endpoints.len())],
            RandomKind::Uniform => rng.random_range(0..=s),
        };
        let v = s + 1;
        adj[target].push(v);
        adj[v].push(target);
        endpoints.extend([target, v]);
    }
    Tree::from_grown(adj)
}

fn check_kind(spec: &RandomModelSpec, want: RandomKind) -> Result<()> {
    if spec.kind != want {
        return Err(Error::Parameter(format!(
            "expected a {want} spec, got {}",
            spec.kind
        )));
    }
    Ok(())
}

/// Preferential attachment with probability `k_v / Σ_w k_w`.
pub fn generate_ba_tree(spec: &RandomModelSpec) -> Result<Tree> {
    check_kind(spec, RandomKind::Ba)?;
    Ok(grow_random(
        RandomKind::Ba,
        spec.t,
        &mut ChaCha8Rng::seed_from_u64(spec.rng_seed),
    ))
}

/// Each new vertex picks its neighbor uniformly among existing vertices.
pub fn generate_uniform_tree(spec: &RandomModelSpec) -> Result<Tree> {
    check_kind(spec, RandomKind::Uniform)?;
    Ok(grow_random(
        RandomKind::Uniform,
        spec.t,
        &mut ChaCha8Rng::seed_from_u64(spec.rng_seed),
    ))
}

pub fn generate(spec: &RandomModelSpec) -> Tree {
    grow_random(
        spec.kind,
        spec.t,
        &mut ChaCha8Rng::seed_from_u64(spec.rng_seed),
    )
}

/// Exact `E[W]` over every attachment history, each outcome scored by BFS.
pub fn expected_wiener_enumeration(kind: RandomKind, t: u32) -> Result<BigRational> {
    Ok(outcome_distribution(kind, t)?.expected_wiener())
}

/// Probability of each generated tree, grouped by edge set.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    /// `(weight, tree)` with probability `weight / denominator`.
    pub outcomes: Vec<(u64, Tree)>,
    pub denominator: u64,
}

impl OutcomeDistribution {
    pub fn expected_wiener(&self) -> BigRational {
        let total: BigInt = self
            .outcomes
            .par_iter()
            .map(|(w, tree)| {
                BigInt::from(*w)
                    * wiener_index(tree.graph()).expect("generated trees are connected")
            })
            .reduce(BigInt::default, |a, b| a + b);
        ratio(total, self.denominator)
    }

    /// Probability that the generated tree satisfies `pred`.
    pub fn probability_where(&self, pred: impl Fn(&Tree) -> bool) -> BigRational {
        let hits: u64 = self
            .outcomes
            .iter()
            .filter(|(_, t)| pred(t))
            .map(|(w, _)| *w)
            .sum();
        ratio(hits, self.denominator)
    }
}

/// Enumerates all `(t + 1)!` histories with their exact probabilities.
pub fn outcome_distribution(kind: RandomKind, t: u32) -> Result<OutcomeDistribution> {
    if t > MAX_ENUMERATION_T {
        return Err(Error::Parameter(format!(
            "enumeration is limited to t <= {MAX_ENUMERATION_T}, got {t}"
        )));
    }
    // Step s has 2s endpoint slots (BA) or s + 1 vertices (uniform); a
    // history's weight is the product of its picks' multiplicities.
    let denominator: u64 = (1..=t as u64)
        .map(|s| match kind {
            RandomKind::Ba => 2 * s,
            RandomKind::Uniform => s + 1,
        })
        .product();
    let mut outcomes = Vec::new();
    let mut parents = Vec::with_capacity(t as usize);
    let mut degree = vec![0u64; t as usize + 2];
    degree[0] = 1;
    degree[1] = 1;
    enumerate(
        kind,
        t as usize,
        1,
        1,
        &mut parents,
        &mut degree,
        &mut outcomes,
    );
    Ok(OutcomeDistribution {
        outcomes,
        denominator,
    })
}

fn enumerate(
    kind: RandomKind,
    t: usize,
    step: usize,
    weight: u64,
    parents: &mut Vec<usize>,
    degree: &mut [u64],
    out: &mut Vec<(u64, Tree)>,
) {
    if step > t {
        let mut edges = vec![(0, 1)];
        edges.extend(parents.iter().enumerate().map(|(i, &p)| (p, i + 2)));
        let g = Graph::from_edges(t + 2, &edges).expect("history edges are simple");
        out.push((weight, Tree::try_from(g).expect("history is a tree")));
        return;
    }
    for target in 0..=step {
        let mult = match kind {
            RandomKind::Ba => degree[target],
            RandomKind::Uniform => 1,
        };
        parents.push(target);
        degree[target] += 1;
        degree[step + 1] += 1;
        enumerate(kind, t, step + 1, weight * mult, parents, degree, out);
        degree[target] -= 1;
        degree[step + 1] -= 1;
        parents.pop();
    }
}

/// Sample mean and standard error of `W` over independently generated trees.
pub fn expected_wiener_monte_carlo(
    kind: RandomKind,
    t: u32,
    trials: u64,
    rng_seed: u64,
) -> Result<Estimate> {
    if trials < 2 {
        return Err(Error::Parameter(
            "Monte Carlo needs at least 2 trials".into(),
        ));
    }
    let ws: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|i| tree_wiener(&grow_random(kind, t, &mut trial_rng(rng_seed, i))))
        .collect();
    let k = trials as f64;
    let mean = ws.iter().map(|&w| w as f64).sum::<f64>() / k;
    let var = ws.iter().map(|&w| (w as f64 - mean).powi(2)).sum::<f64>() / (k - 1.0);
    Ok(Estimate {
        mean,
        std_error: (var / k).sqrt(),
        samples: trials,
    })
}

/// Fraction of generated trees satisfying `pred`, with its standard error.
pub fn monte_carlo_frequency(
    kind: RandomKind,
    t: u32,
    trials: u64,
    rng_seed: u64,
    pred: impl Fn(&Tree) -> bool + Sync,
) -> Result<Estimate> {
    if trials < 2 {
        return Err(Error::Parameter(
            "Monte Carlo needs at least 2 trials".into(),
        ));
    }
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|i| u64::from(pred(&grow_random(kind, t, &mut trial_rng(rng_seed, i)))))
        .sum();
    let p = hits as f64 / trials as f64;
    Ok(Estimate {
        mean: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        samples: trials,
    })
}

/// The published uniform-tree recurrence
/// `W(t) = (1 + 1/(t+1))^2 W(t-1) + t + 1 + t/(t+1)`, `W(0) = 1`.
pub fn uniform_wiener_recurrence(t: u32) -> BigRational {
    let mut w = BigRational::one();
    for s in 1..=t as i64 {
        let grow = int(1) + ratio(1, s + 1);
        w = &grow * &grow * w + int(s + 1) + ratio(s, s + 1);
    }
    w
}

/// Published mean-path-length expression for the uniform tree, evaluated
/// term by term (empty sums are 0, empty products 1).
pub fn uniform_mean_path_closed_form(t: u32) -> f64 {
    let tf = f64::from(t);
    let mut bracket = tf + 1.0 + tf / (tf + 1.0);
    bracket += (0..=t)
        .map(|i| f64::from(i + 2) / f64::from(i + 1))
        .product::<f64>();
    for i in 1..t {
        let fi = f64::from(i);
        // the inner product's factor does not depend on its own index
        let factor = ((fi + 2.0) / (fi + 1.0)).powi((t - i) as i32);
        bracket += (fi + 1.0 + fi / (fi + 1.0)) * factor;
    }
    2.0 / ((tf + 2.0) * (tf + 1.0)) * bracket
}

/// Published mean-path-length expression for the BA tree; needs `t >= 1`.
pub fn ba_mean_path_closed_form(t: u32) -> Result<f64> {
    if t == 0 {
        return Err(Error::Domain("BA closed form is undefined at t = 0".into()));
    }
    let tf = f64::from(t);
    let term = |x: f64| (x + 1.0) / 2.0 - (2.0 * x + 1.0) / (4.0 * x * x);
    // suffix[j] = Π_{k=j}^{t} ((k+1)/k)^2, with suffix[t+1] = 1
    let mut suffix = vec![1.0f64; t as usize + 2];
    for j in (2..=t as usize).rev() {
        let r = (j as f64 + 1.0) / j as f64;
        suffix[j] = suffix[j + 1] * r * r;
    }
    let prod_from = |j: usize| if j <= t as usize { suffix[j] } else { 1.0 };
    let mut bracket = term(tf) + 4.0 * prod_from(2);
    for i in 2..t as usize {
        bracket += term(i as f64) * prod_from(i + 1);
    }
    Ok(2.0 / ((tf + 2.0) * (tf + 1.0)) * bracket)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectationReport {
    pub kind: RandomKind,
    pub t: u32,
    pub rng_seed: u64,
    /// Vertices in every generated tree.
    pub n: u64,
    /// Published mean path length (absent where undefined).
    pub closed_form: Option<f64>,
    /// `closed_form · C(n, 2)`, for comparison with the Wiener values.
    pub closed_form_wiener: Option<f64>,
    /// Published recurrence value for `W` (uniform only).
    #[serde(serialize_with = "serialize_opt_rational")]
    pub recurrence: Option<BigRational>,
    /// Exact `E[W]` by enumeration (small `t` only).
    #[serde(serialize_with = "serialize_opt_rational")]
    pub enumeration: Option<BigRational>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub enumeration_mean_path: Option<BigRational>,
    pub monte_carlo: Option<Estimate>,
    pub attachment: &'static str,
}

pub fn expectation_report(
    kind: RandomKind,
    t: u32,
    trials: u64,
    rng_seed: u64,
) -> Result<ExpectationReport> {
    let n = u64::from(t) + 2;
    let pairs = (n * (n - 1) / 2) as f64;
    let closed_form = match kind {
        RandomKind::Ba => ba_mean_path_closed_form(t).ok(),
        RandomKind::Uniform => Some(uniform_mean_path_closed_form(t)),
    };
    let recurrence = (kind == RandomKind::Uniform).then(|| uniform_wiener_recurrence(t));
    let enumeration = if t <= MAX_ENUMERATION_T {
        Some(expected_wiener_enumeration(kind, t)?)
    } else {
        None
    };
    let enumeration_mean_path = enumeration.as_ref().map(|w| w * ratio(2, n * (n - 1)));
    let monte_carlo = if trials >= 2 {
        Some(expected_wiener_monte_carlo(kind, t, trials, rng_seed)?)
    } else {
        None
    };
    Ok(ExpectationReport {
        kind,
        t,
        rng_seed,
        n,
        closed_form_wiener: closed_form.map(|c| c * pairs),
        closed_form,
        recurrence,
        enumeration,
        enumeration_mean_path,
        monte_carlo,
        attachment: match kind {
            RandomKind::Ba => "degree-proportional, normalized by the actual degree sum",
            RandomKind::Uniform => "uniform over existing vertices",
        },
    })
}
