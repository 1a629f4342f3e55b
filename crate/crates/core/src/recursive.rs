//! Generation-`t` models: repeatedly applying one growth operation to a
//! seed tree. Sizes, Wiener indices and mean hitting times are computed
//! from the seed's `(n, W)` alone, in exact arithmetic, without building
//! the tree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, ratio, serialize_bigint, serialize_rational, to_integer};
use crate::graph::{Tree, MAX_EXPLICIT_VERTICES};
use crate::growth::{grow, Family, OpSpec};
use crate::wiener::{check_bounds, extremal_bounds, tree_wiener, wiener_one_step, BoundsCheck};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelParams {
    pub family: Family,
    pub m: u32,
    #[serde(serialize_with = "serialize_bigint")]
    pub seed_n: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub seed_w: BigInt,
    /// Largest degree in the seed; only consulted for saturating families.
    pub seed_max_degree: usize,
    pub t: u32,
}

impl ModelParams {
    pub fn new(
        family: Family,
        m: u32,
        seed_n: impl Into<BigInt>,
        seed_w: impl Into<BigInt>,
        seed_max_degree: usize,
        t: u32,
    ) -> Self {
        ModelParams {
            family,
            m,
            seed_n: seed_n.into(),
            seed_w: seed_w.into(),
            seed_max_degree,
            t,
        }
    }

    pub fn from_seed(seed: &Tree, family: Family, m: u32, t: u32) -> Self {
        Self::new(family, m, seed.n(), tree_wiener(seed), seed.max_degree(), t)
    }

    pub fn with_t(&self, t: u32) -> Self {
        ModelParams { t, ..self.clone() }
    }

    pub fn op(&self) -> OpSpec {
        OpSpec::new(self.family, self.m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seed_n < BigInt::from(2) {
            return Err(Error::InvalidSeed(format!(
                "seed needs at least 2 vertices, got {}",
                self.seed_n
            )));
        }
        let (lo, hi) = extremal_bounds(&self.seed_n);
        if self.seed_w < lo || self.seed_w > hi {
            return Err(Error::InvalidSeed(format!(
                "seed Wiener index {} outside [{lo}, {hi}] for n = {}",
                self.seed_w, self.seed_n
            )));
        }
        if self.m < 1 {
            return Err(Error::Parameter(
                "order parameter m must be at least 1".into(),
            ));
        }
        if self.family.saturating() && (self.m as usize) < self.seed_max_degree {
            return Err(Error::Parameter(format!(
                "{} needs m >= seed max degree {}, got m = {}",
                self.family, self.seed_max_degree, self.m
            )));
        }
        if self.family == Family::TypeIII && self.m < 2 {
            return Err(Error::Parameter("type3 models need m >= 2".into()));
        }
        // Later generations contain the degree-2 subdivision vertices.
        if self.family == Family::VFractal && self.t >= 2 && self.m < 2 {
            return Err(Error::Parameter(
                "vfractal models beyond t = 1 need m >= 2".into(),
            ));
        }
        Ok(())
    }
}

/// Coefficients `f, g, h, l` of the unrolled mean-hitting-time sums, with
/// the sign each of `g`, `h`, `l` carries in the family's formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCoefficients {
    #[serde(serialize_with = "serialize_rational")]
    pub f: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub g: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub h: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub l: BigRational,
    pub signs: [i8; 3],
}

pub fn family_coefficients(family: Family, m: u32) -> FamilyCoefficients {
    let m = BigInt::from(m);
    let i = |v: BigInt| int(v);
    let (f, g, h, l, signs) = match family {
        Family::Subdivision => (
            i((&m + 1u32).pow(3)),
            ratio(&m * (&m + 1u32).pow(2), 2),
            ratio(&m * (&m + 1u32) * (2u32 * &m + 1u32), 3),
            ratio(&m * (&m * &m - 1u32), 6),
            [-1, 1, -1],
        ),
        Family::TypeII => (
            i((2u32 * &m + 1u32).pow(2)),
            i(&m * (2u32 * &m + 1u32)),
            i(&m * (5 * &m + 3u32)),
            i(&m * (3 * &m + 2u32)),
            [1, -1, 1],
        ),
        Family::TypeI => (
            i((&m + 1u32).pow(2)),
            i(&m * (&m + 1u32)),
            i(m.clone()),
            BigRational::zero(),
            [1, -1, 0],
        ),
        Family::TFractal => (
            i(2 * (&m + 2u32).pow(2)),
            i(&m + 2u32),
            i((&m - 1u32) * (&m + 2u32)),
            i(&m * &m + 2u32 * &m),
            [-1, -1, 1],
        ),
        // g is (m - 2)(m + 1), the quadratic coefficient of the one-step
        // V-fractal formula.
        Family::VFractal => (
            i(3 * (&m + 1u32).pow(2)),
            i((&m - 2u32) * (&m + 1u32)),
            i(&m + 2u32),
            BigRational::zero(),
            [1, 1, 0],
        ),
        Family::TypeIII => (
            i((&m - 1u32).pow(2)),
            i((&m - 1u32).pow(2)),
            i(2 * (&m - 1u32)),
            BigRational::one(),
            [1, 1, 1],
        ),
    };
    FamilyCoefficients { f, g, h, l, signs }
}

/// Vertex count at generation `p.t` from the closed-form size law.
pub fn model_size(p: &ModelParams) -> Result<BigInt> {
    p.validate()?;
    Ok(size_at(p, p.t))
}

fn size_at(p: &ModelParams, t: u32) -> BigInt {
    let n = &p.seed_n;
    let m = BigInt::from(p.m);
    match p.family {
        Family::Subdivision => (n - 1u32) * (&m + 1u32).pow(t) + 1,
        Family::TypeI | Family::VFractal => n * (&m + 1u32).pow(t),
        Family::TFractal => (n - 1u32) * (&m + 2u32).pow(t) + 1,
        Family::TypeII => (n - 1u32) * (2u32 * &m + 1u32).pow(t) + 1,
        Family::TypeIII if p.m == 2 => n + 2 * BigInt::from(t),
        Family::TypeIII => {
            let shift = ratio(2, &m - 2u32);
            let v = (int(n.clone()) + &shift) * int((&m - 1u32).pow(t)) - shift;
            to_integer(&v).expect("type3 size law is integral")
        }
    }
}

/// Sizes for generations `0..=p.t`.
pub fn model_sizes(p: &ModelParams) -> Result<Vec<BigInt>> {
    p.validate()?;
    Ok((0..=p.t).map(|s| size_at(p, s)).collect())
}

/// Wiener index at each generation `0..=p.t`, by iterating the one-step formula.
pub fn model_wiener_trajectory(p: &ModelParams) -> Result<Vec<BigInt>> {
    let sizes = model_sizes(p)?;
    let mut out = Vec::with_capacity(sizes.len());
    let mut w = p.seed_w.clone();
    out.push(w.clone());
    for n in &sizes[..sizes.len() - 1] {
        w = wiener_one_step(p.family, p.m, &w, n)?;
        out.push(w.clone());
    }
    Ok(out)
}

pub fn model_wiener(p: &ModelParams) -> Result<BigInt> {
    Ok(model_wiener_trajectory(p)?
        .pop()
        .expect("trajectory is never empty"))
}

/// Mean hitting time from the unrolled sum
/// `(2/n_t) { f^t W + Σ_{i<t} f^i (±g n_{t-1-i}^2 ± h n_{t-1-i} ± l) }`.
pub fn model_mht_unrolled(p: &ModelParams) -> Result<BigRational> {
    let sizes = model_sizes(p)?;
    let c = family_coefficients(p.family, p.m);
    let sign = |s: i8, v: &BigRational| match s {
        1 => v.clone(),
        -1 => -v.clone(),
        _ => BigRational::zero(),
    };
    let (g, h, l) = (
        sign(c.signs[0], &c.g),
        sign(c.signs[1], &c.h),
        sign(c.signs[2], &c.l),
    );
    let t = p.t as usize;
    let mut f_pow = BigRational::one();
    let mut sum = BigRational::zero();
    for i in 0..t {
        let n = int(sizes[t - 1 - i].clone());
        sum += &f_pow * (&g * &n * &n + &h * &n + &l);
        f_pow *= &c.f;
    }
    let total = f_pow * int(p.seed_w.clone()) + sum;
    Ok(int(BigInt::from(2)) * total / int(sizes[t].clone()))
}

/// Mean hitting time at generation `p.t`. The unrolled sum and `2W_t / n_t`
/// are both computed and must agree.
pub fn model_mht(p: &ModelParams) -> Result<BigRational> {
    let unrolled = model_mht_unrolled(p)?;
    let via_wiener = ratio(2 * model_wiener(p)?, model_size(p)?);
    if unrolled != via_wiener {
        return Err(Error::FormulaViolation {
            what: format!("{}:{} mean hitting time at t = {}", p.family, p.m, p.t),
            detail: format!("unrolled sum {unrolled} != 2W/n {via_wiener}"),
        });
    }
    Ok(unrolled)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationBounds {
    pub t: u32,
    #[serde(serialize_with = "serialize_bigint")]
    pub n: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub wiener: BigInt,
    #[serde(flatten)]
    pub bounds: BoundsCheck,
    #[serde(serialize_with = "serialize_bigint")]
    pub lower_margin: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub upper_margin: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsTrajectory {
    pub generations: Vec<GenerationBounds>,
    pub all_within: bool,
}

/// Checks `(n_s - 1)^2 <= W_s <= C(n_s + 1, 3)` for every generation `s <= t`.
pub fn check_bounds_trajectory(p: &ModelParams) -> Result<BoundsTrajectory> {
    let sizes = model_sizes(p)?;
    let ws = model_wiener_trajectory(p)?;
    let generations: Vec<GenerationBounds> = sizes
        .into_iter()
        .zip(ws)
        .enumerate()
        .map(|(s, (n, w))| {
            let bounds = check_bounds(&w, &n);
            GenerationBounds {
                t: s as u32,
                lower_margin: &w - &bounds.lower,
                upper_margin: &bounds.upper - &w,
                n,
                wiener: w,
                bounds,
            }
        })
        .collect();
    let all_within = generations.iter().all(|g| g.bounds.within);
    Ok(BoundsTrajectory {
        generations,
        all_within,
    })
}

/// Builds the generation-`t` tree explicitly, refusing up front when the
/// size law says it would exceed the explicit-construction cap.
pub fn construct_model(seed: &Tree, family: Family, m: u32, t: u32) -> Result<Tree> {
    let p = ModelParams::from_seed(seed, family, m, t);
    let n = model_size(&p)?;
    if n > BigInt::from(MAX_EXPLICIT_VERTICES) {
        return Err(Error::TooLarge {
            what: "explicit construction",
            n: n.to_string(),
            cap: MAX_EXPLICIT_VERTICES,
        });
    }
    grow(seed, &[p.op()], t)
}
