//! One serializable record per analyzed graph.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ratio, serialize_opt_rational, serialize_rational, to_f64};
use crate::graph::{validate_tree, Graph, Tree, MAX_DENSE_VERTICES};
use crate::hitting::{
    mean_hitting_time_spectral, mean_hitting_time_tree, simulate_mean_hitting_time, Estimate,
    WalkConfig, MAX_SPECTRAL_VERTICES,
};
use crate::wiener::{
    check_bounds, degree_wiener_additive, degree_wiener_additive_closed,
    degree_wiener_multiplicative, degree_wiener_multiplicative_closed, line_graph_wiener,
    line_graph_wiener_closed, tree_wiener, wiener_index, BoundsCheck,
};

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub label: String,
    /// Add the Laplacian-spectrum mean hitting time.
    pub spectral: bool,
    /// `(trials, rng_seed)` for a random-walk estimate.
    pub simulate: Option<(u64, u64)>,
    /// Add the line-graph Wiener index (trees only).
    pub line_graph: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub label: String,
    pub n: usize,
    pub edges: usize,
    pub is_tree: bool,
    pub wiener: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub mean_shortest_path: BigRational,
    #[serde(
        serialize_with = "serialize_opt_rational",
        skip_serializing_if = "Option::is_none"
    )]
    pub mean_hitting_time: Option<BigRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_wiener_mult: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_wiener_add: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line_graph_wiener: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral_mean_hitting_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulated_mean_hitting_time: Option<Estimate>,
    pub notes: Vec<String>,
}

impl MetricsReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: n = {}, |E| = {}, tree = {}\n",
            self.label, self.n, self.edges, self.is_tree
        );
        out += &format!("  wiener              {}\n", self.wiener);
        out += &format!(
            "  mean shortest path  {} (~{:.6})\n",
            self.mean_shortest_path,
            to_f64(&self.mean_shortest_path)
        );
        if let Some(h) = &self.mean_hitting_time {
            out += &format!("  mean hitting time   {} (~{:.6})\n", h, to_f64(h));
        }
        if let Some(v) = self.degree_wiener_mult {
            out += &format!("  degree wiener (*)   {v}\n");
        }
        if let Some(v) = self.degree_wiener_add {
            out += &format!("  degree wiener (+)   {v}\n");
        }
        if let Some(v) = self.line_graph_wiener {
            out += &format!("  line graph wiener   {v}\n");
        }
        if let Some(b) = &self.bounds {
            out += &format!(
                "  bounds              {} <= W <= {} ({})\n",
                b.lower,
                b.upper,
                if b.within { "ok" } else { "VIOLATED" }
            );
        }
        if let Some(s) = self.spectral_mean_hitting_time {
            out += &format!("  spectral hitting    {s:.9}\n");
        }
        if let Some(e) = &self.simulated_mean_hitting_time {
            out += &format!(
                "  simulated hitting   {:.6} +- {:.6} ({} walks)\n",
                e.mean, e.std_error, e.samples
            );
        }
        for note in &self.notes {
            out += &format!("  note: {note}\n");
        }
        out
    }
}

/// Computes every applicable metric. Disconnected or single-vertex graphs
/// are rejected; tree-only metrics are skipped with a note otherwise.
pub fn analyze(g: &Graph, opts: &AnalyzeOptions) -> Result<MetricsReport> {
    if let Some(v) = g.first_unreachable() {
        return Err(Error::Disconnected { unreached: v });
    }
    let n = g.n();
    if n < 2 {
        return Err(Error::Domain(format!(
            "analysis needs at least 2 vertices, got {n}"
        )));
    }
    let tree = if g.edge_count() == n - 1 {
        validate_tree(g).ok()
    } else {
        None
    };
    let mut notes = Vec::new();
    let mut report = MetricsReport {
        label: opts.label.clone(),
        n,
        edges: g.edge_count(),
        is_tree: tree.is_some(),
        wiener: 0,
        mean_shortest_path: BigRational::default(),
        mean_hitting_time: None,
        degree_wiener_mult: None,
        degree_wiener_add: None,
        line_graph_wiener: None,
        bounds: None,
        spectral_mean_hitting_time: None,
        simulated_mean_hitting_time: None,
        notes: Vec::new(),
    };
    match &tree {
        Some(t) => tree_metrics(t, opts, &mut report, &mut notes)?,
        None => {
            report.wiener = wiener_index(g)?;
            notes.push(
                "not a tree: hitting time, degree, line-graph and bound metrics skipped".into(),
            );
        }
    }
    report.mean_shortest_path = ratio(2 * BigInt::from(report.wiener), BigInt::from(n) * (n - 1));
    if opts.spectral {
        if n <= MAX_SPECTRAL_VERTICES {
            report.spectral_mean_hitting_time = Some(mean_hitting_time_spectral(g)?);
        } else {
            notes.push(format!(
                "spectral mean hitting time skipped: n = {n} exceeds {MAX_SPECTRAL_VERTICES}; use the tree formula"
            ));
        }
    }
    if let Some((trials, seed)) = opts.simulate {
        report.simulated_mean_hitting_time = Some(simulate_mean_hitting_time(
            g,
            &WalkConfig::for_graph(g, trials, seed),
        )?);
    }
    report.notes = notes;
    Ok(report)
}

fn tree_metrics(
    t: &Tree,
    opts: &AnalyzeOptions,
    report: &mut MetricsReport,
    notes: &mut Vec<String>,
) -> Result<()> {
    let w = tree_wiener(t);
    report.wiener = w;
    report.mean_hitting_time = Some(mean_hitting_time_tree(t));
    let (wb, nb) = (BigInt::from(w), BigInt::from(t.n()));
    report.bounds = Some(check_bounds(&wb, &nb));
    // pairwise oracles are quadratic; above the dense cap only closed forms run
    let small = t.n() <= MAX_DENSE_VERTICES;
    let as_u64 = |v: BigInt| u64::try_from(v).map_err(|e| Error::Numeric(e.to_string()));
    if small {
        report.degree_wiener_mult = Some(degree_wiener_multiplicative(t)?);
        report.degree_wiener_add = Some(degree_wiener_additive(t)?);
    } else {
        report.degree_wiener_mult = Some(as_u64(degree_wiener_multiplicative_closed(&wb, &nb))?);
        report.degree_wiener_add = Some(as_u64(degree_wiener_additive_closed(&wb, &nb))?);
        notes.push(format!(
            "n > {MAX_DENSE_VERTICES}: degree Wiener indices from closed forms only"
        ));
    }
    if opts.line_graph {
        report.line_graph_wiener = Some(if small {
            line_graph_wiener(t)?
        } else {
            notes.push("line-graph Wiener index from closed form only".into());
            as_u64(line_graph_wiener_closed(&wb, &nb))?
        });
    }
    Ok(())
}
