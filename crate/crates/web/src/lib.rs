//! WebAssembly bindings for the browser demo. Each export takes and returns JSON text.

use amvlab::closed_forms::{euclidean_moment, predict_positive_weight, predict_power_weight, Prediction};
use amvlab::graph::{circle_spokes, three_point_line, GraphPoint};
use amvlab::limits::{extrapolate, sweep, FitOptions, LimitVerdict, RadiiSpec, Row};
use amvlab::operators::{amv_at_radius, samv_at_radius};
use amvlab::{DistanceDescriptor, ScalarField, Scheme, SpaceDescriptor, WeightDescriptor};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRequest {
    pub weight: WeightDescriptor,
    pub field: ScalarField,
    pub x: Vec<f64>,
    #[serde(default)]
    pub samv: bool,
    pub r0: f64,
    pub count: usize,
}

#[derive(Debug, Serialize)]
pub struct SweepResponse {
    pub rows: Vec<Row>,
    pub verdict: LimitVerdict,
    pub prediction: Option<Prediction>,
}

/// Closed form for the plane, when one applies.
fn predict(req: &SweepRequest) -> Option<Prediction> {
    let pick = |(a, s): (Prediction, Prediction)| if req.samv { s } else { a };
    match &req.weight {
        WeightDescriptor::PowerAlpha { alpha } if req.x.iter().all(|v| *v == 0.0) => predict_power_weight(&req.field, 2, *alpha).ok().map(pick),
        WeightDescriptor::PowerAlpha { .. } | WeightDescriptor::Separable { .. } => None,
        w => predict_positive_weight(&req.field, w, &req.x, &euclidean_moment(2)).ok().map(pick),
    }
}

/// AMV or SAMV of a planar field over a geometric radius sweep, with its r → 0 verdict.
pub fn sweep_json(request: &str) -> Result<String, String> {
    let req: SweepRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    if req.count > 24 {
        return Err("at most 24 radii".into());
    }
    let space = SpaceDescriptor::new(DistanceDescriptor::euclidean(2), req.weight.clone()).map_err(|e| e.to_string())?;
    let spec = RadiiSpec::geometric(req.r0, req.count);
    let scheme = Scheme::default();
    let op = if req.samv { samv_at_radius } else { amv_at_radius };
    let profile = sweep(if req.samv { "samv" } else { "amv" }, &req.x, &spec, |r| op(&space, &req.field, &req.x, r, &scheme)).map_err(|e| e.to_string())?;
    let verdict = extrapolate(&profile, &FitOptions::default()).map_err(|e| e.to_string())?;
    let out = SweepResponse { rows: profile.rows, verdict, prediction: predict(&req) };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct SpokesRow {
    pub r: f64,
    pub ratio: f64,
    pub hub: f64,
    pub spoke_end: f64,
}

/// Ball measures at the hub and a spoke end, and the scanned comparability constant.
pub fn spokes_json(n: usize, include_circle: bool, radii: &str) -> Result<String, String> {
    if n > 64 {
        return Err("at most 64 spokes".into());
    }
    let radii: Vec<f64> = serde_json::from_str(radii).map_err(|e| e.to_string())?;
    let g = circle_spokes(n, include_circle).map_err(|e| e.to_string())?;
    let scan = g.comparability_scan(&radii, None).map_err(|e| e.to_string())?;
    let rows = scan
        .iter()
        .map(|row| {
            let hub = g.ball_measure(&GraphPoint::Vertex { index: 0 }, row.r)?;
            let spoke_end = g.ball_measure(&GraphPoint::Vertex { index: 2 }, row.r)?;
            Ok(SpokesRow { r: row.r, ratio: row.ratio, hub, spoke_end })
        })
        .collect::<amvlab::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct AtomicResponse {
    pub ball: Vec<f64>,
    pub amv: Vec<Vec<f64>>,
    pub samv: Vec<Vec<f64>>,
}

/// AMV and SAMV matrices of three atoms at 0, 1, 2.
pub fn atomic_json(masses: &str, r: f64) -> Result<String, String> {
    let m: [f64; 3] = serde_json::from_str(masses).map_err(|e| e.to_string())?;
    let space = three_point_line(m).map_err(|e| e.to_string())?;
    let ops = space.operator_matrices(r).map_err(|e| e.to_string())?;
    let rows = |a: &DMatrix<f64>| (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect();
    let out = AtomicResponse { ball: ops.ball.iter().copied().collect(), amv: rows(&ops.amv), samv: rows(&ops.samv) };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn amv_sweep(request: &str) -> Result<String, JsError> {
    sweep_json(request).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spokes(n: usize, include_circle: bool, radii: &str) -> Result<String, JsError> {
    spokes_json(n, include_circle, radii).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn atomic(masses: &str, r: f64) -> Result<String, JsError> {
    atomic_json(masses, r).map_err(|e| JsError::new(&e))
}
