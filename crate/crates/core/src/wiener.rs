//! Wiener index: the BFS oracle, one-step closed forms for every growth
//! family, degree-weighted variants, the line-graph identity and the
//! extremal bounds for trees.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, int, ratio, serialize_rational, to_integer};
use crate::graph::{line_graph, Graph, Tree};
use crate::growth::Family;

/// Sum of hop distances over unordered vertex pairs, by one BFS per source.
pub fn wiener_index(g: &Graph) -> Result<u64> {
    let sums: Vec<Result<u64>> = (0..g.n())
        .into_par_iter()
        .map(|s| {
            g.bfs(s)
                .into_iter()
                .enumerate()
                .try_fold(0u64, |acc, (v, d)| {
                    d.map(|d| acc + u64::from(d))
                        .ok_or(Error::Disconnected { unreached: v })
                })
        })
        .collect();
    let mut total = 0u64;
    for s in sums {
        total += s?;
    }
    Ok(total / 2)
}

/// Wiener index of a tree from edge cuts: each edge separating `s` and
/// `n - s` vertices lies on exactly `s (n - s)` shortest paths. Linear time.
pub fn tree_wiener(t: &Tree) -> u64 {
    let g = t.graph();
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    parent[0] = 0;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &v in g.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                stack.push(v);
            }
        }
    }
    let mut size = vec![1u64; n];
    let mut total = 0u64;
    for &u in order.iter().skip(1).rev() {
        total += size[u] * (n as u64 - size[u]);
        size[parent[u]] += size[u];
    }
    total
}

/// `2W / (n (n - 1))` as an exact rational.
pub fn mean_shortest_path(g: &Graph) -> Result<BigRational> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Domain(format!(
            "mean shortest path needs n >= 2, got {n}"
        )));
    }
    let w = wiener_index(g)?;
    Ok(ratio(2 * BigInt::from(w), BigInt::from(n) * (n - 1)))
}

/// One-step Wiener formula written as `c_w W + c_n2 n^2 + c_n n + c_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WienerPolynomial {
    pub family: Family,
    pub m: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub c_w: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub c_n2: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub c_n: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub c_1: BigRational,
}

impl WienerPolynomial {
    pub fn eval(&self, w: &BigInt, n: &BigInt) -> BigRational {
        let w = int(w.clone());
        let n = int(n.clone());
        &self.c_w * w + &self.c_n2 * &n * &n + &self.c_n * n + &self.c_1
    }
}

/// Coefficients of the simplified one-step formula for `family` at order `m`.
pub fn wiener_polynomial(family: Family, m: u32) -> WienerPolynomial {
    let m_ = BigInt::from(m);
    let mi = |v: BigInt| int(v);
    let (c_w, c_n2, c_n, c_1) = match family {
        Family::Subdivision => (
            mi((&m_ + 1u32).pow(3)),
            -ratio(&m_ * (&m_ + 1u32).pow(2), 2),
            ratio(&m_ * (&m_ + 1u32) * (2u32 * &m_ + 1u32), 3),
            -ratio(&m_ * (&m_ * &m_ - 1u32), 6),
        ),
        Family::TypeI => (
            mi((&m_ + 1u32).pow(2)),
            mi(&m_ * (&m_ + 1u32)),
            mi(-m_.clone()),
            BigRational::zero(),
        ),
        Family::TFractal => (
            mi(2 * (&m_ + 2u32).pow(2)),
            mi(-(&m_ + 2u32)),
            mi(-(&m_ - 1u32) * (&m_ + 2u32)),
            mi(&m_ * &m_ + 2u32 * &m_),
        ),
        Family::VFractal => (
            mi(3 * (&m_ + 1u32).pow(2)),
            mi((&m_ - 2u32) * (&m_ + 1u32)),
            mi(&m_ + 2u32),
            BigRational::zero(),
        ),
        Family::TypeII => (
            mi((2u32 * &m_ + 1u32).pow(2)),
            mi(&m_ * (2u32 * &m_ + 1u32)),
            mi(-&m_ * (5 * &m_ + 3u32)),
            mi(&m_ * (3 * &m_ + 2u32)),
        ),
        Family::TypeIII => (
            mi((&m_ - 1u32).pow(2)),
            mi((&m_ - 1u32).pow(2)),
            mi(2 * (&m_ - 1u32)),
            mi(BigInt::from(1)),
        ),
    };
    WienerPolynomial {
        family,
        m,
        c_w,
        c_n2,
        c_n,
        c_1,
    }
}

/// The unsimplified one-step formulas, term by term with binomials.
pub fn wiener_full_form(family: Family, m: u32, w: &BigInt, n: &BigInt) -> BigRational {
    let m = BigInt::from(m);
    let w = int(w.clone());
    let n1 = n - 1u32;
    let c = |a: &BigInt, b: u32| int(binomial(a, b));
    let nq = int(n.clone());
    let n1q = int(n1.clone());
    let mq = int(m.clone());
    match family {
        Family::Subdivision => {
            int((&m + 1u32).pow(3)) * w
                - int(&n1 * (&m + 1u32) * &m * &m)
                - int(2 * (&m * binomial(&n1, 2) + binomial(n, 2)) * binomial(&(&m + 1u32), 2))
                + int(&n1 * binomial(&(&m + 1u32), 3))
        }
        Family::TypeI => {
            int((&m + 1u32).pow(2)) * w
                + int(2 * &m * (&m + 1u32) * binomial(n, 2))
                + int(n * (&m + 2u32 * binomial(&m, 2)))
        }
        Family::TFractal => {
            int(2 * (&m + 2u32).pow(2)) * w
                - int(&n1 * (2 * &m * &m + 3u32 * &m + 2u32 * n - 2 * binomial(&m, 2)))
                - int(2 * &m * binomial(&n1, 2))
        }
        Family::VFractal => {
            int(3 * (&m + 1u32).pow(2)) * w
                + int(n * &m * &m)
                + int(2 * ((&m - 1u32).pow(2) + &m - 3u32) * binomial(n, 2))
        }
        Family::TypeII => {
            int((2u32 * &m + 1u32).pow(2)) * w - int(&n1 * (2 * n - 1) * &m * &m)
                + ratio(8 * &m * &m, 3) * &n1q * &n1q
                - int(2 * &m * &n1)
                + ratio(4 * &m, 3) * &nq * &n1q
                - ratio(2 * &m, 3) * c(n, 2)
                + ratio(4 * &m * &m, 3) * (c(n, 2) + c(&n1, 2))
        }
        Family::TypeIII => {
            int((&m - 1u32).pow(2)) * w
                + &nq * &n1q * (&mq * &mq - &mq / int(3) - ratio(4, 3))
                + int(n * &m * &m)
                - int(2 * &n1 * (&m - 1u32))
                - int(&n1 * (2 * n - 1))
                + (ratio(8, 3) - int(2) * &mq) * &n1q * &n1q
                + ratio(2 * (&m + 1u32), 3) * c(n, 2)
                + ratio(4, 3) * (c(n, 2) + c(&n1, 2))
        }
    }
}

/// Wiener index after one application of `family` at order `m` to a tree
/// with `n` vertices and Wiener index `w`.
///
/// Both the full and the simplified forms are evaluated; disagreement or a
/// non-integral value is reported as a formula violation.
pub fn wiener_one_step(family: Family, m: u32, w: &BigInt, n: &BigInt) -> Result<BigInt> {
    if m < 1 {
        return Err(Error::Parameter(
            "order parameter m must be at least 1".into(),
        ));
    }
    let simplified = wiener_polynomial(family, m).eval(w, n);
    let full = wiener_full_form(family, m, w, n);
    if simplified != full {
        return Err(Error::FormulaViolation {
            what: format!("{family}:{m} one-step Wiener"),
            detail: format!("full form {full} != simplified {simplified} at W={w}, n={n}"),
        });
    }
    to_integer(&simplified).ok_or_else(|| Error::FormulaViolation {
        what: format!("{family}:{m} one-step Wiener"),
        detail: format!("non-integral value {simplified} at W={w}, n={n}"),
    })
}

fn degree_weighted_sums(t: &Tree) -> (u64, u64) {
    let g = t.graph();
    let parts: Vec<(u64, u64)> = (0..g.n())
        .into_par_iter()
        .map(|u| {
            let ku = g.degree(u) as u64;
            let mut mult = 0u64;
            let mut add = 0u64;
            for (v, d) in g.bfs(u).into_iter().enumerate() {
                let d = u64::from(d.unwrap_or(0));
                let kv = g.degree(v) as u64;
                mult += ku * kv * d;
                add += (ku + kv) * d;
            }
            (mult, add)
        })
        .collect();
    let (m, a) = parts.iter().fold((0, 0), |(m, a), &(x, y)| (m + x, a + y));
    (m / 2, a / 2)
}

pub fn degree_wiener_multiplicative_oracle(t: &Tree) -> u64 {
    degree_weighted_sums(t).0
}

pub fn degree_wiener_additive_oracle(t: &Tree) -> u64 {
    degree_weighted_sums(t).1
}

/// `4W - (n - 1)(2n - 1)`.
pub fn degree_wiener_multiplicative_closed(w: &BigInt, n: &BigInt) -> BigInt {
    4 * w - (n - 1u32) * (2 * n - 1)
}

/// `4W - n(n - 1)`.
pub fn degree_wiener_additive_closed(w: &BigInt, n: &BigInt) -> BigInt {
    4 * w - n * (n - 1u32)
}

/// `W - C(n, 2)`.
pub fn line_graph_wiener_closed(w: &BigInt, n: &BigInt) -> BigInt {
    w - binomial(n, 2)
}

fn checked(what: &str, oracle: u64, closed: BigInt) -> Result<u64> {
    if BigInt::from(oracle) == closed {
        Ok(oracle)
    } else {
        Err(Error::FormulaViolation {
            what: what.to_string(),
            detail: format!("oracle {oracle} != closed form {closed}"),
        })
    }
}

fn tree_w_n(t: &Tree) -> (BigInt, BigInt) {
    (BigInt::from(tree_wiener(t)), BigInt::from(t.n()))
}

/// `½ Σ k_u k_v d_uv`, checked against its closed form.
pub fn degree_wiener_multiplicative(t: &Tree) -> Result<u64> {
    let (w, n) = tree_w_n(t);
    checked(
        "multiplicative degree Wiener index",
        degree_wiener_multiplicative_oracle(t),
        degree_wiener_multiplicative_closed(&w, &n),
    )
}

/// `½ Σ (k_u + k_v) d_uv`, checked against its closed form.
pub fn degree_wiener_additive(t: &Tree) -> Result<u64> {
    let (w, n) = tree_w_n(t);
    checked(
        "additive degree Wiener index",
        degree_wiener_additive_oracle(t),
        degree_wiener_additive_closed(&w, &n),
    )
}

/// Wiener index of the line graph, checked against `W - C(n, 2)`.
pub fn line_graph_wiener(t: &Tree) -> Result<u64> {
    let (w, n) = tree_w_n(t);
    let oracle = wiener_index(&line_graph(t))?;
    checked(
        "line graph Wiener index",
        oracle,
        line_graph_wiener_closed(&w, &n),
    )
}

/// `((n - 1)^2, C(n + 1, 3))`: the star and path values among trees on `n` vertices.
pub fn extremal_bounds(n: &BigInt) -> (BigInt, BigInt) {
    ((n - 1u32).pow(2), binomial(&(n + 1u32), 3))
}

/// Position of a tree's Wiener index between the extremal bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsCheck {
    #[serde(serialize_with = "crate::exact::serialize_bigint")]
    pub lower: BigInt,
    #[serde(serialize_with = "crate::exact::serialize_bigint")]
    pub upper: BigInt,
    pub within: bool,
    pub lower_tight: bool,
    pub upper_tight: bool,
}

pub fn check_bounds(w: &BigInt, n: &BigInt) -> BoundsCheck {
    let (lower, upper) = extremal_bounds(n);
    BoundsCheck {
        within: &lower <= w && w <= &upper,
        lower_tight: w == &lower,
        upper_tight: w == &upper,
        lower,
        upper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_path, build_star, random_tree};
    use crate::growth::{apply, apply_pipeline, parse_pipeline, OpSpec};

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn w(g: &Graph) -> u64 {
        wiener_index(g).unwrap()
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(w(build_path(3).unwrap().graph()), 4);
        assert_eq!(w(build_path(5).unwrap().graph()), 20);
        assert_eq!(w(build_star(4).unwrap().graph()), 9);
        assert_eq!(w(build_star(6).unwrap().graph()), 25);
        let t2 = apply_pipeline(
            &build_path(2).unwrap(),
            &parse_pipeline("tfractal:1,tfractal:1").unwrap(),
        )
        .unwrap();
        assert_eq!(w(t2.graph()), 117);
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(wiener_index(&two).is_err());
    }

    #[test]
    fn edge_cut_matches_bfs() {
        for seed in 0..40 {
            let t = random_tree(2 + (seed as usize % 30), seed).unwrap();
            assert_eq!(tree_wiener(&t), w(t.graph()));
        }
    }

    #[test]
    fn mean_shortest_path_examples() {
        assert_eq!(
            mean_shortest_path(build_path(2).unwrap().graph()).unwrap(),
            int(1)
        );
        assert_eq!(
            mean_shortest_path(build_path(3).unwrap().graph()).unwrap(),
            ratio(4, 3)
        );
        assert_eq!(
            mean_shortest_path(build_star(4).unwrap().graph()).unwrap(),
            ratio(3, 2)
        );
        assert!(mean_shortest_path(&Graph::empty(1)).is_err());
    }

    #[test]
    fn one_step_examples() {
        assert_eq!(
            wiener_one_step(Family::Subdivision, 2, &b(4), &b(3)).unwrap(),
            b(56)
        );
        assert_eq!(
            wiener_one_step(Family::TypeII, 1, &b(4), &b(3)).unwrap(),
            b(44)
        );
        assert_eq!(
            wiener_one_step(Family::TypeIII, 3, &b(1), &b(2)).unwrap(),
            b(29)
        );
        assert_eq!(
            wiener_one_step(Family::VFractal, 2, &b(1), &b(2)).unwrap(),
            b(35)
        );
        // pipeline subdiv:2 then type2:1 on an edge: P4 (W=10) then 111
        assert_eq!(
            wiener_one_step(Family::TypeII, 1, &b(10), &b(4)).unwrap(),
            b(111)
        );
    }

    #[test]
    fn one_step_values_against_construction() {
        let p2 = build_path(2).unwrap();
        let cases = [
            (Family::TypeI, 1, 10),
            (Family::TFractal, 1, 9),
            (Family::VFractal, 2, 35),
            (Family::TypeII, 1, 10),
            (Family::TypeIII, 2, 10),
            (Family::TypeIII, 3, 29),
        ];
        for (f, m, expected) in cases {
            let grown = apply(&p2, OpSpec::new(f, m)).unwrap();
            assert_eq!(w(grown.graph()), expected, "{f}:{m}");
            assert_eq!(
                wiener_one_step(f, m, &b(1), &b(2)).unwrap(),
                b(expected as i64)
            );
        }
        let grown = apply_pipeline(&p2, &parse_pipeline("subdiv:2,type2:1").unwrap()).unwrap();
        assert_eq!(w(grown.graph()), 111);
    }

    #[test]
    fn polynomial_coefficients() {
        assert!(wiener_polynomial(Family::TypeI, 5).c_1.is_zero());
        assert!(wiener_polynomial(Family::VFractal, 7).c_1.is_zero());
        assert_eq!(wiener_polynomial(Family::Subdivision, 2).c_1, int(-1));
        assert_eq!(wiener_polynomial(Family::TypeII, 1).c_1, int(5));
        assert!(wiener_polynomial(Family::Subdivision, 1).c_1.is_zero());
    }

    #[test]
    fn degree_variants() {
        let p = |n| build_path(n).unwrap();
        assert_eq!(degree_wiener_multiplicative(&p(2)).unwrap(), 1);
        assert_eq!(degree_wiener_multiplicative(&p(3)).unwrap(), 6);
        assert_eq!(degree_wiener_multiplicative(&p(4)).unwrap(), 19);
        assert_eq!(degree_wiener_additive(&p(2)).unwrap(), 2);
        assert_eq!(degree_wiener_additive(&p(3)).unwrap(), 10);
        assert_eq!(degree_wiener_additive(&p(4)).unwrap(), 28);
    }

    #[test]
    fn line_graph_values() {
        assert_eq!(line_graph_wiener(&build_path(3).unwrap()).unwrap(), 1);
        assert_eq!(line_graph_wiener(&build_star(4).unwrap()).unwrap(), 3);
        let spider = apply(&build_path(2).unwrap(), OpSpec::new(Family::TypeIII, 3)).unwrap();
        assert_eq!(line_graph_wiener(&spider).unwrap(), 14);
    }

    #[test]
    fn bounds() {
        assert_eq!(extremal_bounds(&b(4)), (b(9), b(10)));
        assert_eq!(extremal_bounds(&b(2)), (b(1), b(1)));
        assert_eq!(extremal_bounds(&b(10)), (b(81), b(165)));
        let c = check_bounds(&b(9), &b(4));
        assert!(c.within && c.lower_tight && !c.upper_tight);
    }

    #[test]
    fn rejects_zero_order() {
        assert!(wiener_one_step(Family::TypeI, 0, &b(1), &b(2)).is_err());
    }
}
