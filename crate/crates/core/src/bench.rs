//! Timing ladder: closed-form generation-t mean hitting time against
//! explicit construction with the tree formula and against the Laplacian
//! spectrum.

use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{ratio, serialize_bigint, to_f64};
use crate::graph::{Tree, MAX_EXPLICIT_VERTICES};
use crate::growth::Family;
use crate::hitting::{mean_hitting_time_spectral, MAX_SPECTRAL_VERTICES};
use crate::recursive::{construct_model, model_mht, model_size, ModelParams};
use crate::wiener::tree_wiener;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    ExplicitTreeFormula,
    Spectral,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub method: Method,
    pub family: Family,
    pub m: u32,
    pub t: u32,
    #[serde(serialize_with = "serialize_bigint")]
    pub n: BigInt,
    /// Absent for skipped rows.
    pub millis: Option<f64>,
    pub value: Option<f64>,
    /// Whether the value matches the closed form (exactly for the explicit
    /// path, to 1e-6 relative for the spectral one).
    pub agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

pub fn run_ladder(seed: &Tree, family: Family, m: u32, max_t: u32) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for t in 0..=max_t {
        let p = ModelParams::from_seed(seed, family, m, t);
        let n = model_size(&p)?;
        let start = Instant::now();
        let closed = model_mht(&p)?;
        let row = |method, millis, value, agrees, skipped| BenchRow {
            method,
            family,
            m,
            t,
            n: n.clone(),
            millis,
            value,
            agrees,
            skipped,
        };
        rows.push(row(
            Method::ClosedForm,
            Some(elapsed(start)),
            Some(to_f64(&closed)),
            None,
            None,
        ));
        if n > BigInt::from(MAX_EXPLICIT_VERTICES) {
            continue;
        }

        let start = Instant::now();
        let tree = construct_model(seed, family, m, t)?;
        let h = ratio(2 * BigInt::from(tree_wiener(&tree)), tree.n());
        rows.push(row(
            Method::ExplicitTreeFormula,
            Some(elapsed(start)),
            Some(to_f64(&h)),
            Some(h == closed),
            None,
        ));

        if tree.n() > MAX_SPECTRAL_VERTICES {
            rows.push(row(
                Method::Spectral,
                None,
                None,
                None,
                Some(format!("n exceeds spectral cap {MAX_SPECTRAL_VERTICES}")),
            ));
            continue;
        }
        let start = Instant::now();
        let s = mean_hitting_time_spectral(tree.graph())?;
        let c = to_f64(&closed);
        rows.push(row(
            Method::Spectral,
            Some(elapsed(start)),
            Some(s),
            Some((s - c).abs() <= 1e-6 * c.max(1.0)),
            None,
        ));
    }
    Ok(rows)
}

fn elapsed(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
