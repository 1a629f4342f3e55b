//! The six primitive growth operations on trees, their size laws, and
//! sequential pipelines.
//!
//! New vertices get ids after the existing ones, in a fixed order:
//!
//! * edge-driven insertions (subdivision, T-fractal, the two inner vertices
//!   of V-fractal) walk edges in lexicographic `(min, max)` order; inserted
//!   path vertices run from the smaller endpoint towards the larger one, and
//!   a T-fractal midpoint precedes its own leaves;
//! * leaf attachment walks vertices in increasing id order;
//! * V-fractal numbers all subdivision vertices before any saturation leaf.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Tree, MAX_EXPLICIT_VERTICES};

/// Which primitive operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[serde(rename = "subdiv")]
    Subdivision,
    #[serde(rename = "type1")]
    TypeI,
    TFractal,
    VFractal,
    #[serde(rename = "type2")]
    TypeII,
    #[serde(rename = "type3")]
    TypeIII,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Subdivision,
        Family::TypeI,
        Family::TFractal,
        Family::VFractal,
        Family::TypeII,
        Family::TypeIII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Subdivision => "subdiv",
            Family::TypeI => "type1",
            Family::TFractal => "tfractal",
            Family::VFractal => "vfractal",
            Family::TypeII => "type2",
            Family::TypeIII => "type3",
        }
    }

    /// V-fractal and Type-III need `m` at least the target's max degree.
    pub fn saturating(self) -> bool {
        matches!(self, Family::VFractal | Family::TypeIII)
    }

    /// Whether the operation is phrased in terms of vertex degrees.
    pub fn degree_dependent(self) -> bool {
        !matches!(self, Family::TypeI | Family::VFractal)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown operation family `{s}`")))
    }
}

/// One operation with its order parameter, written `family:m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSpec {
    pub family: Family,
    pub m: u32,
}

impl OpSpec {
    pub fn new(family: Family, m: u32) -> Self {
        OpSpec { family, m }
    }

    /// Vertex and edge counts after applying this operation to a graph
    /// with `n` vertices and `e` edges.
    pub fn size_after(&self, n: &BigInt, e: &BigInt) -> (BigInt, BigInt) {
        let m = BigInt::from(self.m);
        match self.family {
            Family::Subdivision => (n + &m * e, (&m + 1) * e),
            Family::TypeI => ((&m + 1) * n, e + &m * n),
            Family::TFractal => (n + (&m + 1) * e, (&m + 2) * e),
            Family::VFractal => ((&m + 1) * n, e + &m * n),
            Family::TypeII => (n + 2 * &m * e, (2 * &m + 1) * e),
            Family::TypeIII => ((&m + 1) * n - 2 * e, &m * n - e),
        }
    }
}

impl fmt::Display for OpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.m)
    }
}

impl FromStr for OpSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (fam, m) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parameter(format!("expected `family:m`, got `{s}`")))?;
        let m: u32 = m
            .parse()
            .map_err(|_| Error::Parameter(format!("order `{m}` is not a positive integer")))?;
        if m < 1 {
            return Err(Error::Parameter(format!(
                "order must be at least 1 in `{s}`"
            )));
        }
        Ok(OpSpec {
            family: fam.parse()?,
            m,
        })
    }
}

/// Parses a comma-separated pipeline such as `subdiv:2,type2:1`.
pub fn parse_pipeline(s: &str) -> Result<Vec<OpSpec>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

pub fn format_pipeline(ops: &[OpSpec]) -> String {
    ops.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Size law as a free function over (|V|, |E|).
pub fn size_after(spec: OpSpec, n: &BigInt, e: &BigInt) -> (BigInt, BigInt) {
    spec.size_after(n, e)
}

fn check_order(m: u32) -> Result<usize> {
    if m < 1 {
        return Err(Error::Parameter(
            "order parameter m must be at least 1".into(),
        ));
    }
    Ok(m as usize)
}

fn check_saturation(t: &Tree, m: u32) -> Result<()> {
    let g = t.graph();
    match (0..g.n()).find(|&u| g.degree(u) > m as usize) {
        Some(vertex) => Err(Error::Saturation {
            vertex,
            degree: g.degree(vertex),
            m,
        }),
        None => Ok(()),
    }
}

fn check_cap(t: &Tree, spec: OpSpec) -> Result<usize> {
    let (n, _) = spec.size_after(&BigInt::from(t.n()), &BigInt::from(t.edge_count()));
    match usize::try_from(&n) {
        Ok(v) if v <= MAX_EXPLICIT_VERTICES => Ok(v),
        _ => Err(Error::TooLarge {
            what: "explicit construction",
            n: n.to_string(),
            cap: MAX_EXPLICIT_VERTICES,
        }),
    }
}

struct Builder {
    adj: Vec<Vec<usize>>,
}

impl Builder {
    fn with_vertices(n: usize, capacity: usize) -> Self {
        let mut adj = Vec::with_capacity(capacity);
        adj.resize(n, Vec::new());
        Builder { adj }
    }

    fn copy_of(t: &Tree, capacity: usize) -> Self {
        let g = t.graph();
        let mut adj = Vec::with_capacity(capacity);
        adj.extend((0..g.n()).map(|u| g.neighbors(u).to_vec()));
        Builder { adj }
    }

    fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn link(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    fn add_leaves(&mut self, u: usize, count: usize) {
        for _ in 0..count {
            let w = self.add_vertex();
            self.link(u, w);
        }
    }

    /// Links `u` to `v` through a path of `k` fresh vertices.
    fn add_path(&mut self, u: usize, v: usize, k: usize) {
        let mut prev = u;
        for _ in 0..k {
            let w = self.add_vertex();
            self.link(prev, w);
            prev = w;
        }
        self.link(prev, v);
    }

    fn finish(self) -> Tree {
        Tree::from_grown(self.adj)
    }
}

pub fn apply_subdivision(t: &Tree, m: u32) -> Result<Tree> {
    let k = check_order(m)?;
    let cap = check_cap(t, OpSpec::new(Family::Subdivision, m))?;
    let mut b = Builder::with_vertices(t.n(), cap);
    for (u, v) in t.graph().edges() {
        b.add_path(u, v, k);
    }
    Ok(b.finish())
}

pub fn apply_type1(t: &Tree, m: u32) -> Result<Tree> {
    let k = check_order(m)?;
    let cap = check_cap(t, OpSpec::new(Family::TypeI, m))?;
    let mut b = Builder::copy_of(t, cap);
    for u in 0..t.n() {
        b.add_leaves(u, k);
    }
    Ok(b.finish())
}

pub fn apply_tfractal(t: &Tree, m: u32) -> Result<Tree> {
    let k = check_order(m)?;
    let cap = check_cap(t, OpSpec::new(Family::TFractal, m))?;
    let mut b = Builder::with_vertices(t.n(), cap);
    for (u, v) in t.graph().edges() {
        let w = b.add_vertex();
        b.link(u, w);
        b.link(w, v);
        b.add_leaves(w, k);
    }
    Ok(b.finish())
}

pub fn apply_vfractal(t: &Tree, m: u32) -> Result<Tree> {
    check_order(m)?;
    check_saturation(t, m)?;
    let cap = check_cap(t, OpSpec::new(Family::VFractal, m))?;
    let mut b = Builder::with_vertices(t.n(), cap);
    for (u, v) in t.graph().edges() {
        b.add_path(u, v, 2);
    }
    for u in 0..t.n() {
        b.add_leaves(u, m as usize - t.degree(u));
    }
    Ok(b.finish())
}

pub fn apply_type2(t: &Tree, m: u32) -> Result<Tree> {
    let k = check_order(m)?;
    let cap = check_cap(t, OpSpec::new(Family::TypeII, m))?;
    let mut b = Builder::copy_of(t, cap);
    for u in 0..t.n() {
        b.add_leaves(u, k * t.degree(u));
    }
    Ok(b.finish())
}

pub fn apply_type3(t: &Tree, m: u32) -> Result<Tree> {
    check_order(m)?;
    check_saturation(t, m)?;
    let cap = check_cap(t, OpSpec::new(Family::TypeIII, m))?;
    let mut b = Builder::copy_of(t, cap);
    for u in 0..t.n() {
        b.add_leaves(u, m as usize - t.degree(u));
    }
    Ok(b.finish())
}

pub fn apply(t: &Tree, spec: OpSpec) -> Result<Tree> {
    match spec.family {
        Family::Subdivision => apply_subdivision(t, spec.m),
        Family::TypeI => apply_type1(t, spec.m),
        Family::TFractal => apply_tfractal(t, spec.m),
        Family::VFractal => apply_vfractal(t, spec.m),
        Family::TypeII => apply_type2(t, spec.m),
        Family::TypeIII => apply_type3(t, spec.m),
    }
}

/// Applies `ops` left to right. The first failure is reported with its index.
pub fn apply_pipeline(t: &Tree, ops: &[OpSpec]) -> Result<Tree> {
    let mut cur = t.clone();
    for (index, &op) in ops.iter().enumerate() {
        cur = apply(&cur, op).map_err(|e| Error::Pipeline {
            index,
            op: op.to_string(),
            source: Box::new(e),
        })?;
    }
    Ok(cur)
}

/// Runs the whole pipeline `gens` times.
pub fn grow(t: &Tree, ops: &[OpSpec], gens: u32) -> Result<Tree> {
    let mut cur = t.clone();
    for _ in 0..gens {
        cur = apply_pipeline(&cur, ops)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_path, build_star, Graph};

    fn p(n: usize) -> Tree {
        build_path(n).unwrap()
    }

    fn counts(t: &Tree) -> (usize, usize) {
        (t.n(), t.edge_count())
    }

    #[test]
    fn subdivision_examples() {
        assert_eq!(apply_subdivision(&p(2), 1).unwrap().graph().degree(2), 2);
        assert_eq!(counts(&apply_subdivision(&p(3), 2).unwrap()), (7, 6));
        assert_eq!(apply_subdivision(&p(3), 2).unwrap().max_degree(), 2);
        assert_eq!(counts(&apply_subdivision(&p(2), 3).unwrap()), (5, 4));
        assert!(apply_subdivision(&p(2), 0).is_err());
    }

    #[test]
    fn subdivision_numbering() {
        // path 0 - 2 - 3 - 1 for m = 2 on a single edge
        let t = apply_subdivision(&p(2), 2).unwrap();
        let want = Graph::from_edges(4, &[(0, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(*t.graph(), want);
    }

    #[test]
    fn type1_examples() {
        let t = apply_type1(&p(2), 1).unwrap();
        assert_eq!(counts(&t), (4, 3));
        assert_eq!(t.max_degree(), 2);
        assert_eq!(apply_type1(&p(2), 2).unwrap().n(), 6);
        assert_eq!(
            counts(&apply_type1(&build_star(4).unwrap(), 1).unwrap()),
            (8, 7)
        );
    }

    #[test]
    fn tfractal_examples() {
        let t = apply_tfractal(&p(2), 1).unwrap();
        assert_eq!(crate::graph::degree_sequence(t.graph()), vec![1, 1, 3, 1]);
        let t = apply_tfractal(&p(2), 2).unwrap();
        assert_eq!(t.n(), 5);
        assert_eq!(t.degree(2), 4);
        assert_eq!(counts(&apply_tfractal(&p(3), 1).unwrap()), (7, 6));
    }

    #[test]
    fn vfractal_examples() {
        let t = apply_vfractal(&p(2), 2).unwrap();
        assert_eq!(counts(&t), (6, 5));
        assert_eq!(t.max_degree(), 2);
        assert_eq!(apply_vfractal(&p(2), 1).unwrap(), {
            let g = Graph::from_edges(4, &[(0, 2), (2, 3), (3, 1)]).unwrap();
            Tree::try_from(g).unwrap()
        });
        let err = apply_vfractal(&build_star(4).unwrap(), 2).unwrap_err();
        assert_eq!(
            err,
            Error::Saturation {
                vertex: 0,
                degree: 3,
                m: 2
            }
        );
    }

    #[test]
    fn type2_examples() {
        assert_eq!(counts(&apply_type2(&p(2), 1).unwrap()), (4, 3));
        assert_eq!(counts(&apply_type2(&p(3), 1).unwrap()), (7, 6));
        assert_eq!(counts(&apply_type2(&p(2), 2).unwrap()), (6, 5));
    }

    #[test]
    fn type3_examples() {
        let t = apply_type3(&p(2), 2).unwrap();
        assert_eq!(counts(&t), (4, 3));
        assert_eq!(t.max_degree(), 2);
        let t = apply_type3(&p(2), 3).unwrap();
        assert_eq!(
            crate::graph::degree_sequence(t.graph()),
            vec![3, 3, 1, 1, 1, 1]
        );
        assert_eq!(apply_type3(&p(2), 1).unwrap(), p(2));
        assert!(matches!(
            apply_type3(&p(3), 1),
            Err(Error::Saturation { vertex: 1, .. })
        ));
    }

    #[test]
    fn pipelines() {
        assert_eq!(apply_pipeline(&p(2), &[]).unwrap(), p(2));
        let ops = parse_pipeline("subdiv:2,type2:1").unwrap();
        assert_eq!(apply_pipeline(&p(2), &ops).unwrap().n(), 10);
        let ops = parse_pipeline("tfractal:1,tfractal:1").unwrap();
        assert_eq!(apply_pipeline(&p(2), &ops).unwrap().n(), 10);
        let ops = parse_pipeline("type1:1,vfractal:1").unwrap();
        match apply_pipeline(&p(2), &ops) {
            Err(Error::Pipeline {
                index: 1, source, ..
            }) => {
                assert!(matches!(*source, Error::Saturation { .. }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spec_strings() {
        for f in Family::ALL {
            let s = OpSpec::new(f, 3);
            assert_eq!(s.to_string().parse::<OpSpec>().unwrap(), s);
        }
        assert!("foo:1".parse::<OpSpec>().is_err());
        assert!("subdiv:0".parse::<OpSpec>().is_err());
        assert!("subdiv".parse::<OpSpec>().is_err());
        assert!("subdiv:x".parse::<OpSpec>().is_err());
        assert_eq!(parse_pipeline("").unwrap(), vec![]);
        assert_eq!(
            format_pipeline(&parse_pipeline("type3:4, tfractal:2").unwrap()),
            "type3:4,tfractal:2"
        );
    }

    #[test]
    fn size_law_examples() {
        let sz = |f, m, n: i64, e: i64| {
            let (a, b) = size_after(OpSpec::new(f, m), &BigInt::from(n), &BigInt::from(e));
            (a, b)
        };
        assert_eq!(sz(Family::Subdivision, 1, 2, 1), (3.into(), 2.into()));
        assert_eq!(sz(Family::TypeIII, 3, 2, 1), (6.into(), 5.into()));
        assert_eq!(sz(Family::TypeII, 2, 3, 2), (11.into(), 10.into()));
    }

    #[test]
    fn determinism() {
        let t = crate::graph::random_tree(11, 5).unwrap();
        for f in Family::ALL {
            let op = OpSpec::new(f, t.max_degree() as u32 + 1);
            assert_eq!(apply(&t, op).unwrap(), apply(&t, op).unwrap());
        }
    }
}
