//! Mean hitting time of the simple random walk, computed three ways: the
//! exact tree identity `2W / n`, the Laplacian spectrum, and Monte Carlo.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ratio;
use crate::graph::{Graph, Tree};
use crate::wiener::tree_wiener;

/// Dense eigensolves above this size are refused.
pub const MAX_SPECTRAL_VERTICES: usize = 2_000;

/// Exact mean hitting time of a tree, `2W / n`.
pub fn mean_hitting_time_tree(t: &Tree) -> BigRational {
    ratio(2 * BigInt::from(tree_wiener(t)), t.n())
}

/// Laplacian eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Eigenvalues below this are treated as zero.
    pub fn zero_tolerance(&self) -> f64 {
        1e-8 * self.lambda_max().max(1.0)
    }

    pub fn zero_count(&self) -> usize {
        let tol = self.zero_tolerance();
        self.eigenvalues.iter().filter(|&&x| x.abs() < tol).count()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

pub fn laplacian_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for u in 0..n {
        l[(u, u)] = g.degree(u) as f64;
        for &v in g.neighbors(u) {
            l[(u, v)] = -1.0;
        }
    }
    l
}

/// All eigenvalues of `L = D - A` from a dense symmetric eigensolver.
pub fn laplacian_spectrum(g: &Graph) -> Result<Spectrum> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Domain("spectrum of an empty graph".into()));
    }
    if n > MAX_SPECTRAL_VERTICES {
        return Err(Error::TooLarge {
            what: "dense Laplacian spectrum (use the tree formula instead)",
            n: n.to_string(),
            cap: MAX_SPECTRAL_VERTICES,
        });
    }
    let eig = laplacian_matrix(g)
        .try_symmetric_eigen(1e-14, 10_000)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum { eigenvalues })
}

/// `(2|E| / (n - 1)) Σ 1/λ` over the nonzero Laplacian eigenvalues.
pub fn mean_hitting_time_spectral(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Domain(format!(
            "mean hitting time needs n >= 2, got {n}"
        )));
    }
    let spec = laplacian_spectrum(g)?;
    if spec.eigenvalues[1] < spec.zero_tolerance() {
        let unreached = g.first_unreachable().unwrap_or(0);
        return Err(Error::Disconnected { unreached });
    }
    let inv_sum: f64 = spec.eigenvalues[1..].iter().map(|l| 1.0 / l).sum();
    Ok(2.0 * g.edge_count() as f64 / (n - 1) as f64 * inv_sum)
}

/// Monte Carlo settings. Every walk draws from its own ChaCha stream
/// derived from `rng_seed`, so results do not depend on thread count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WalkConfig {
    pub trials: u64,
    pub rng_seed: u64,
    pub max_steps: u64,
}

impl WalkConfig {
    /// Uses the default step cap of `100 n^2`.
    pub fn for_graph(g: &Graph, trials: u64, rng_seed: u64) -> Self {
        WalkConfig {
            trials,
            rng_seed,
            max_steps: Self::default_max_steps(g.n()),
        }
    }

    pub fn default_max_steps(n: usize) -> u64 {
        100 * (n as u64).pow(2).max(1)
    }

    fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.max_steps < 1 {
            return Err(Error::Parameter("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl Estimate {
    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn covers(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error + 1e-12 * value.abs().max(1.0)
    }
}

fn walk(
    g: &Graph,
    source: usize,
    target: usize,
    max_steps: u64,
    rng: &mut ChaCha8Rng,
) -> Result<u64> {
    let mut at = source;
    let mut steps = 0u64;
    while at != target {
        if steps == max_steps {
            return Err(Error::WalkCap {
                from: source,
                target,
                max_steps,
            });
        }
        let nb = g.neighbors(at);
        at = nb[rng.random_range(0..nb.len())];
        steps += 1;
    }
    Ok(steps)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_walkable(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::Domain(format!(
            "random walk needs n >= 2, got {}",
            g.n()
        )));
    }
    match g.first_unreachable() {
        Some(unreached) => Err(Error::Disconnected { unreached }),
        None => Ok(()),
    }
}

/// `(mean, unbiased variance)` of a sample, accumulated in index order.
fn moments(xs: &[u64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|&x| (x as f64 - mean).powi(2)).sum();
    (mean, ss / (k - 1.0))
}

/// Estimates `H(source -> target)` from `cfg.trials` independent walks.
pub fn simulate_hitting_time(
    g: &Graph,
    source: usize,
    target: usize,
    cfg: &WalkConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    check_walkable(g)?;
    if source >= g.n() || target >= g.n() || source == target {
        return Err(Error::Parameter(format!(
            "invalid walk endpoints {source} -> {target}"
        )));
    }
    let steps: Vec<u64> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            walk(
                g,
                source,
                target,
                cfg.max_steps,
                &mut stream_rng(cfg.rng_seed, i),
            )
        })
        .collect::<Result<_>>()?;
    let (mean, var) = moments(&steps);
    Ok(Estimate {
        mean,
        std_error: (var / steps.len() as f64).sqrt(),
        samples: cfg.trials,
    })
}

/// Averages simulated hitting times over all ordered pairs `u != v`.
/// `cfg.trials` is split evenly across pairs, at least one walk each.
pub fn simulate_mean_hitting_time(g: &Graph, cfg: &WalkConfig) -> Result<Estimate> {
    cfg.validate()?;
    check_walkable(g)?;
    let n = g.n();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let per_pair = (cfg.trials / pairs.len() as u64).max(1);
    let total = per_pair * pairs.len() as u64;
    let steps: Vec<u64> = (0..total)
        .into_par_iter()
        .map(|i| {
            let (u, v) = pairs[(i / per_pair) as usize];
            walk(g, u, v, cfg.max_steps, &mut stream_rng(cfg.rng_seed, i))
        })
        .collect::<Result<_>>()?;
    let p = pairs.len() as f64;
    let mut mean = 0.0;
    let mut var_of_mean = 0.0;
    for chunk in steps.chunks(per_pair as usize) {
        let (m, v) = moments(chunk);
        mean += m;
        var_of_mean += v / per_pair as f64;
    }
    Ok(Estimate {
        mean: mean / p,
        std_error: var_of_mean.sqrt() / p,
        samples: total,
    })
}
