//! Formula-versus-oracle sweeps. Every closed form in the crate is compared
//! against brute force (BFS distances, explicit construction, Laplacian
//! spectra) over random and named seed trees, and each failure carries
//! enough to reproduce it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ratio, to_f64};
use crate::graph::{build_path, build_star, random_tree, Tree};
use crate::growth::{apply, Family, OpSpec};
use crate::hitting::{laplacian_spectrum, mean_hitting_time_spectral, mean_hitting_time_tree};
use crate::recursive::{
    check_bounds_trajectory, construct_model, model_mht, model_size, model_wiener, ModelParams,
};
use crate::wiener::{
    check_bounds, degree_wiener_additive, degree_wiener_multiplicative, extremal_bounds,
    line_graph_wiener, tree_wiener, wiener_full_form, wiener_index, wiener_one_step,
    wiener_polynomial,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorems,
    Identity,
    Propositions,
    Degree,
    Spectral,
    Bounds,
    Conjecture,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Theorems,
        Suite::Identity,
        Suite::Propositions,
        Suite::Degree,
        Suite::Spectral,
        Suite::Bounds,
        Suite::Conjecture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorems => "theorems",
            Suite::Identity => "identity",
            Suite::Propositions => "propositions",
            Suite::Degree => "degree",
            Suite::Spectral => "spectral",
            Suite::Bounds => "bounds",
            Suite::Conjecture => "conjecture",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown suite `{s}`")))
    }
}

/// Sweep sizes. `None` fields take the per-suite default.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub trees: usize,
    pub max_n: usize,
    pub max_m: Option<u32>,
    pub max_t: Option<u32>,
    pub rng_seed: u64,
    pub spectral_trees: usize,
    pub spectral_max_n: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trees: 100,
            max_n: 12,
            max_m: None,
            max_t: None,
            rng_seed: 0,
            spectral_trees: 50,
            spectral_max_n: 200,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_n < 2 || self.spectral_max_n < 2 {
            return Err(Error::Parameter("random trees need max n >= 2".into()));
        }
        if self.max_m == Some(0) {
            return Err(Error::Parameter("max m must be at least 1".into()));
        }
        Ok(())
    }

    /// The `i`-th random seed tree and the seed that reproduces it via
    /// `random_tree(n, seed)`.
    pub fn random_seed_tree(&self, i: usize, max_n: usize) -> (u64, Tree) {
        let seed = self.rng_seed.wrapping_add(i as u64);
        let n = ChaCha8Rng::seed_from_u64(seed).random_range(2..=max_n);
        (seed, random_tree(n, seed).expect("n >= 2"))
    }
}

/// Enough to rebuild a failing case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    /// `random_tree(n, tree_seed)` or a named seed such as `path:3`.
    pub seed_tree: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub failures: u64,
    pub skipped: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

enum Outcome {
    Pass,
    Skip,
    Fail(Counterexample),
}

fn tally(
    suite: Suite,
    name: impl Into<String>,
    outcomes: impl IntoIterator<Item = Outcome>,
) -> Check {
    let mut c = Check {
        suite,
        name: name.into(),
        passed: true,
        cases: 0,
        failures: 0,
        skipped: 0,
        counterexample: None,
    };
    for o in outcomes {
        match o {
            Outcome::Pass => c.cases += 1,
            Outcome::Skip => c.skipped += 1,
            Outcome::Fail(x) => {
                c.cases += 1;
                c.failures += 1;
                c.counterexample.get_or_insert(x);
            }
        }
    }
    c.passed = c.failures == 0;
    c
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantTermRow {
    pub family: Family,
    pub m: u32,
    pub c_1: String,
    pub zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<Suite>,
    pub passed: bool,
    pub checks_total: usize,
    pub checks_failed: usize,
    pub cases_total: u64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_terms: Option<Vec<ConstantTermRow>>,
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let mut checks = Vec::new();
    let mut constant_terms = None;
    for &s in &suites {
        match s {
            Suite::Theorems => checks.extend(theorems(cfg)),
            Suite::Identity => checks.extend(identity(cfg)),
            Suite::Propositions => checks.extend(propositions(cfg)),
            Suite::Degree => checks.extend(degree(cfg)),
            Suite::Spectral => checks.extend(spectral(cfg)),
            Suite::Bounds => checks.extend(bounds(cfg)),
            Suite::Conjecture => {
                let (c, rows) = conjecture(cfg);
                checks.extend(c);
                constant_terms = Some(rows);
            }
            Suite::All => unreachable!(),
        }
    }
    let checks_failed = checks.iter().filter(|c| !c.passed).count();
    Ok(VerifyReport {
        suites,
        passed: checks_failed == 0,
        checks_total: checks.len(),
        checks_failed,
        cases_total: checks.iter().map(|c| c.cases).sum(),
        checks,
        constant_terms,
    })
}

fn random_label(seed: u64, t: &Tree) -> String {
    format!("random_tree({}, {seed})", t.n())
}

fn admissible(t: &Tree, family: Family, m: u32) -> bool {
    !family.saturating() || m as usize >= t.max_degree()
}

/// One-step Wiener formulas and size laws against BFS on the grown tree.
fn theorems(cfg: &VerifyConfig) -> Vec<Check> {
    let max_m = cfg.max_m.unwrap_or(4);
    let trees: Vec<(u64, Tree)> = (0..cfg.trees)
        .map(|i| cfg.random_seed_tree(i, cfg.max_n))
        .collect();
    let mut checks = Vec::new();
    for family in Family::ALL {
        let outcomes: Vec<Outcome> = trees
            .par_iter()
            .flat_map_iter(|(seed, t)| (1..=max_m).map(move |m| theorem_case(*seed, t, family, m)))
            .collect();
        checks.push(tally(
            Suite::Theorems,
            format!("one-step Wiener formula: {family}"),
            outcomes,
        ));
    }
    checks
}

fn theorem_case(seed: u64, t: &Tree, family: Family, m: u32) -> Outcome {
    if !admissible(t, family, m) {
        return Outcome::Skip;
    }
    let fail = |detail: String| {
        Outcome::Fail(Counterexample {
            seed_tree: random_label(seed, t),
            n: t.n(),
            family: Some(family),
            m: Some(m),
            t: Some(1),
            detail,
        })
    };
    let grown = match apply(t, OpSpec::new(family, m)) {
        Ok(g) => g,
        Err(e) => return fail(format!("construction failed: {e}")),
    };
    let (n, w) = (BigInt::from(t.n()), BigInt::from(tree_wiener(t)));
    let oracle = match wiener_index(grown.graph()) {
        Ok(v) => BigInt::from(v),
        Err(e) => return fail(e.to_string()),
    };
    let (n2, e2) = OpSpec::new(family, m).size_after(&n, &(&n - 1u32));
    if n2 != BigInt::from(grown.n()) || e2 != BigInt::from(grown.edge_count()) {
        return fail(format!(
            "size law ({n2}, {e2}) != constructed ({}, {})",
            grown.n(),
            grown.edge_count()
        ));
    }
    match wiener_one_step(family, m, &w, &n) {
        Ok(p) if p == oracle => Outcome::Pass,
        Ok(p) => fail(format!("formula {p} != BFS {oracle}")),
        Err(e) => fail(e.to_string()),
    }
}

/// Full term-by-term formulas against the simplified polynomials on the
/// extremal `W` values for each `n`.
fn identity(cfg: &VerifyConfig) -> Vec<Check> {
    let max_m = cfg.max_m.unwrap_or(6);
    Family::ALL
        .into_iter()
        .map(|family| {
            let mut outcomes = Vec::new();
            for m in 1..=max_m {
                let poly = wiener_polynomial(family, m);
                for n in 2..=50u32 {
                    let nb = BigInt::from(n);
                    let (lo, hi) = extremal_bounds(&nb);
                    for w in [lo, hi] {
                        let full = wiener_full_form(family, m, &w, &nb);
                        let simple = poly.eval(&w, &nb);
                        outcomes.push(if full == simple {
                            Outcome::Pass
                        } else {
                            Outcome::Fail(Counterexample {
                                seed_tree: format!("(n, W) = ({n}, {w})"),
                                n: n as usize,
                                family: Some(family),
                                m: Some(m),
                                t: None,
                                detail: format!("full {full} != simplified {simple}"),
                            })
                        });
                    }
                }
            }
            tally(
                Suite::Identity,
                format!("full vs simplified form: {family}"),
                outcomes,
            )
        })
        .collect()
}

pub fn named_seeds() -> Vec<(&'static str, Tree)> {
    vec![
        ("path:2", build_path(2).unwrap()),
        ("path:3", build_path(3).unwrap()),
        ("path:4", build_path(4).unwrap()),
        ("star:4", build_star(4).unwrap()),
    ]
}

/// Generation-t closed forms against explicitly built trees.
fn propositions(cfg: &VerifyConfig) -> Vec<Check> {
    let max_m = cfg.max_m.unwrap_or(3);
    let max_t = cfg.max_t.unwrap_or(3);
    let seeds = named_seeds();
    let mut checks = Vec::new();
    for family in Family::ALL {
        let cases: Vec<(&str, &Tree, u32, u32)> = seeds
            .iter()
            .flat_map(|(name, t)| {
                (1..=max_m).flat_map(move |m| (0..=max_t).map(move |s| (*name, t, m, s)))
            })
            .collect();
        let outcomes: Vec<Outcome> = cases
            .par_iter()
            .map(|&(name, t, m, s)| proposition_case(name, t, family, m, s))
            .collect();
        checks.push(tally(
            Suite::Propositions,
            format!("generation-t mean hitting time: {family}"),
            outcomes,
        ));

        // the two closed-form paths must agree far beyond constructible sizes
        let deep: Vec<Outcome> = seeds
            .iter()
            .flat_map(|(name, t)| (1..=max_m).map(move |m| (name, t, m)))
            .map(|(name, t, m)| {
                let p = ModelParams::from_seed(t, family, m, 25);
                if p.validate().is_err() {
                    return Outcome::Skip;
                }
                match model_mht(&p) {
                    Ok(_) => Outcome::Pass,
                    Err(e) => Outcome::Fail(named_cx(name, t, family, m, 25, e.to_string())),
                }
            })
            .collect();
        checks.push(tally(
            Suite::Propositions,
            format!("unrolled sum vs 2W/n up to t = 25: {family}"),
            deep,
        ));
    }
    let golden = [
        ("path:2", Family::Subdivision, 1, 2, ratio(8, 1)),
        ("path:2", Family::TypeIII, 3, 1, ratio(29, 3)),
        ("path:2", Family::TypeI, 1, 1, ratio(5, 1)),
    ];
    let outcomes = golden.into_iter().map(|(name, family, m, t, want)| {
        let seed = &seeds.iter().find(|(s, _)| *s == name).unwrap().1;
        match model_mht(&ModelParams::from_seed(seed, family, m, t)) {
            Ok(v) if v == want => Outcome::Pass,
            Ok(v) => Outcome::Fail(named_cx(name, seed, family, m, t, format!("{v} != {want}"))),
            Err(e) => Outcome::Fail(named_cx(name, seed, family, m, t, e.to_string())),
        }
    });
    checks.push(tally(
        Suite::Propositions,
        "worked mean hitting time values",
        outcomes,
    ));
    checks
}

fn named_cx(
    name: &str,
    t: &Tree,
    family: Family,
    m: u32,
    gen: u32,
    detail: String,
) -> Counterexample {
    Counterexample {
        seed_tree: name.to_string(),
        n: t.n(),
        family: Some(family),
        m: Some(m),
        t: Some(gen),
        detail,
    }
}

fn proposition_case(name: &str, seed: &Tree, family: Family, m: u32, t: u32) -> Outcome {
    let p = ModelParams::from_seed(seed, family, m, t);
    if p.validate().is_err() {
        return Outcome::Skip;
    }
    let fail = |d: String| Outcome::Fail(named_cx(name, seed, family, m, t, d));
    let built = match construct_model(seed, family, m, t) {
        Ok(b) => b,
        Err(Error::TooLarge { .. }) => return Outcome::Skip,
        Err(e) => return fail(format!("construction failed: {e}")),
    };
    let oracle_w = match wiener_index(built.graph()) {
        Ok(w) => w,
        Err(e) => return fail(e.to_string()),
    };
    let n = built.n();
    match (model_size(&p), model_wiener(&p), model_mht(&p)) {
        (Ok(size), Ok(w), Ok(h)) => {
            let oracle_h = ratio(2 * BigInt::from(oracle_w), n);
            if size != BigInt::from(n) {
                fail(format!("size law {size} != constructed {n}"))
            } else if w != BigInt::from(oracle_w) {
                fail(format!("Wiener {w} != BFS {oracle_w}"))
            } else if h != oracle_h {
                fail(format!("mean hitting time {h} != 2W/n {oracle_h}"))
            } else {
                Outcome::Pass
            }
        }
        (a, b, c) => fail(format!("{:?}", a.err().or(b.err()).or(c.err()))),
    }
}

/// Degree-weighted and line-graph Wiener indices against pairwise oracles.
fn degree(cfg: &VerifyConfig) -> Vec<Check> {
    let trees: Vec<(u64, Tree)> = (0..cfg.trees)
        .map(|i| cfg.random_seed_tree(i, cfg.max_n))
        .collect();
    type Metric = fn(&Tree) -> Result<u64>;
    let metrics: [(&str, Metric); 3] = [
        (
            "multiplicative degree Wiener index",
            degree_wiener_multiplicative,
        ),
        ("additive degree Wiener index", degree_wiener_additive),
        ("line graph Wiener index", line_graph_wiener),
    ];
    let mut checks: Vec<Check> = metrics
        .iter()
        .map(|(name, f)| {
            let outcomes: Vec<Outcome> = trees
                .par_iter()
                .map(|(seed, t)| match f(t) {
                    Ok(_) => Outcome::Pass,
                    Err(e) => Outcome::Fail(Counterexample {
                        seed_tree: random_label(*seed, t),
                        n: t.n(),
                        family: None,
                        m: None,
                        t: None,
                        detail: e.to_string(),
                    }),
                })
                .collect();
            tally(Suite::Degree, *name, outcomes)
        })
        .collect();
    let p3 = build_path(3).unwrap();
    let got = (
        line_graph_wiener(&p3).ok(),
        degree_wiener_multiplicative(&p3).ok(),
        degree_wiener_additive(&p3).ok(),
    );
    let outcome = if got == (Some(1), Some(6), Some(10)) {
        Outcome::Pass
    } else {
        Outcome::Fail(Counterexample {
            seed_tree: "path:3".into(),
            n: 3,
            family: None,
            m: None,
            t: None,
            detail: format!("(line, mult, add) = {got:?}, expected (1, 6, 10)"),
        })
    };
    checks.push(tally(Suite::Degree, "golden values on path:3", [outcome]));
    checks
}

/// Laplacian-spectrum mean hitting time against `2W/n`.
fn spectral(cfg: &VerifyConfig) -> Vec<Check> {
    let outcomes: Vec<Outcome> = (0..cfg.spectral_trees)
        .into_par_iter()
        .map(|i| {
            let (seed, t) = cfg.random_seed_tree(i, cfg.spectral_max_n);
            let exact = to_f64(&mean_hitting_time_tree(&t));
            let cx = |detail: String| {
                Outcome::Fail(Counterexample {
                    seed_tree: random_label(seed, &t),
                    n: t.n(),
                    family: None,
                    m: None,
                    t: None,
                    detail,
                })
            };
            let spectrum = match laplacian_spectrum(t.graph()) {
                Ok(s) => s,
                Err(e) => return cx(e.to_string()),
            };
            let degree_sum = 2.0 * t.edge_count() as f64;
            if (spectrum.sum() - degree_sum).abs() > 1e-8 * degree_sum.max(1.0)
                || spectrum.zero_count() != 1
            {
                return cx(format!(
                    "spectrum trace {} vs degree sum {degree_sum}",
                    spectrum.sum()
                ));
            }
            match mean_hitting_time_spectral(t.graph()) {
                Ok(s) if (s - exact).abs() <= 1e-6 * exact => Outcome::Pass,
                Ok(s) => cx(format!("spectral {s} vs 2W/n {exact}")),
                Err(e) => cx(e.to_string()),
            }
        })
        .collect();
    let mut checks = vec![tally(
        Suite::Spectral,
        "spectral vs tree formula (relative 1e-6)",
        outcomes,
    )];
    let golden = [
        ("path:3", build_path(3).unwrap(), 8.0 / 3.0),
        ("star:4", build_star(4).unwrap(), 4.5),
    ];
    let outcomes =
        golden.into_iter().map(
            |(name, t, want)| match mean_hitting_time_spectral(t.graph()) {
                Ok(v) if (v - want).abs() <= 1e-9 => Outcome::Pass,
                r => Outcome::Fail(Counterexample {
                    seed_tree: name.into(),
                    n: t.n(),
                    family: None,
                    m: None,
                    t: None,
                    detail: format!("{r:?} vs {want}"),
                }),
            },
        );
    checks.push(tally(Suite::Spectral, "spectral golden values", outcomes));
    checks
}

/// `(n-1)^2 <= W <= C(n+1, 3)` wherever trees appear, with equality for
/// stars and paths.
fn bounds(cfg: &VerifyConfig) -> Vec<Check> {
    let max_m = cfg.max_m.unwrap_or(4);
    let max_t = cfg.max_t.unwrap_or(3);
    let trees: Vec<(u64, Tree)> = (0..cfg.trees)
        .map(|i| cfg.random_seed_tree(i, cfg.max_n))
        .collect();
    let within =
        |label: String, t: &Tree, family: Option<Family>, m: Option<u32>, gen: Option<u32>| {
            let b = check_bounds(&BigInt::from(tree_wiener(t)), &BigInt::from(t.n()));
            if b.within {
                Outcome::Pass
            } else {
                Outcome::Fail(Counterexample {
                    seed_tree: label,
                    n: t.n(),
                    family,
                    m,
                    t: gen,
                    detail: format!("W = {} outside [{}, {}]", tree_wiener(t), b.lower, b.upper),
                })
            }
        };
    let mut outcomes: Vec<Outcome> = trees
        .iter()
        .map(|(s, t)| within(random_label(*s, t), t, None, None, None))
        .collect();
    let grown: Vec<Outcome> = trees
        .par_iter()
        .flat_map_iter(|(s, t)| {
            Family::ALL
                .into_iter()
                .flat_map(move |f| (1..=max_m).map(move |m| (f, m)))
                .map(move |(f, m)| match apply(t, OpSpec::new(f, m)) {
                    Ok(g) => within(random_label(*s, t), &g, Some(f), Some(m), Some(1)),
                    Err(_) => Outcome::Skip,
                })
        })
        .collect();
    outcomes.extend(grown);
    let mut checks = vec![tally(
        Suite::Bounds,
        "random and grown trees within bounds",
        outcomes,
    )];

    let extremal = (2..=50usize).map(|n| {
        let (lo, hi) = extremal_bounds(&BigInt::from(n));
        let star = BigInt::from(tree_wiener(&build_star(n).unwrap()));
        let path = BigInt::from(tree_wiener(&build_path(n).unwrap()));
        if star == lo && path == hi {
            Outcome::Pass
        } else {
            Outcome::Fail(Counterexample {
                seed_tree: format!("star:{n} / path:{n}"),
                n,
                family: None,
                m: None,
                t: None,
                detail: format!("star {star} vs {lo}, path {path} vs {hi}"),
            })
        }
    });
    checks.push(tally(
        Suite::Bounds,
        "star and path attain the bounds",
        extremal,
    ));

    let seeds = named_seeds();
    let trajectories = seeds.iter().flat_map(|(name, t)| {
        Family::ALL
            .into_iter()
            .flat_map(move |f| (1..=max_m).map(move |m| (f, m)))
            .map(move |(f, m)| {
                let p = ModelParams::from_seed(t, f, m, max_t.max(10));
                if p.validate().is_err() {
                    return Outcome::Skip;
                }
                match check_bounds_trajectory(&p) {
                    Ok(tr) if tr.all_within => Outcome::Pass,
                    Ok(tr) => {
                        let bad = tr
                            .generations
                            .iter()
                            .find(|g| !g.bounds.within)
                            .map(|g| g.t);
                        Outcome::Fail(named_cx(
                            name,
                            t,
                            f,
                            m,
                            bad.unwrap_or(0),
                            "closed-form generation outside bounds".into(),
                        ))
                    }
                    Err(e) => Outcome::Fail(named_cx(name, t, f, m, p.t, e.to_string())),
                }
            })
    });
    checks.push(tally(
        Suite::Bounds,
        "closed-form generations within bounds",
        trajectories,
    ));
    checks
}

/// Constant terms of the simplified one-step formulas.
fn conjecture(cfg: &VerifyConfig) -> (Vec<Check>, Vec<ConstantTermRow>) {
    let max_m = cfg.max_m.unwrap_or(20);
    let rows: Vec<ConstantTermRow> = Family::ALL
        .into_iter()
        .flat_map(|f| (1..=max_m).map(move |m| (f, m)))
        .map(|(family, m)| {
            let c1: BigRational = wiener_polynomial(family, m).c_1;
            ConstantTermRow {
                family,
                m,
                zero: c1.is_zero(),
                c_1: c1.to_string(),
            }
        })
        .collect();
    let expect = |family: Family, zero: bool, from_m: u32, label: &str| {
        let outcomes = rows
            .iter()
            .filter(|r| r.family == family && r.m >= from_m)
            .map(|r| {
                if r.zero == zero {
                    Outcome::Pass
                } else {
                    Outcome::Fail(Counterexample {
                        seed_tree: "-".into(),
                        n: 0,
                        family: Some(family),
                        m: Some(r.m),
                        t: None,
                        detail: format!("c_1 = {}", r.c_1),
                    })
                }
            });
        tally(
            Suite::Conjecture,
            format!("{label}: {family}"),
            outcomes.collect::<Vec<_>>(),
        )
    };
    let checks = vec![
        expect(Family::TypeI, true, 1, "no constant term"),
        expect(Family::VFractal, true, 1, "no constant term"),
        expect(Family::TFractal, false, 2, "nonzero constant term"),
        expect(Family::TypeII, false, 2, "nonzero constant term"),
        expect(Family::TypeIII, false, 2, "nonzero constant term"),
    ];
    (checks, rows)
}
