//! Task execution. Every task returns a [`Bundle`] whose JSON is a pure function of the config.

use amvlab::closed_forms::{
    norm_second_moment, power_weight_moments, predict_model_deviation, predict_positive_weight, predict_power_weight, predict_separable,
    predict_unweighted, Prediction,
};
use amvlab::graph::{circle_spokes, three_point_line, AtomicSpace, GraphPoint, MetricGraph};
use amvlab::limits::{
    box_grid, distortion_equality_flag, extrapolate, order_fit, region_norm_sweep, EqualityFlag, FitOptions, LimitVerdict, RadiiSpec,
    RadiusProfile, Status,
};
use amvlab::operators::{amv_at_radius, blowup_moments, deviation_and_theta, distortion_report, empirical_second_moment, samv_at_radius, weak_pairing};
use amvlab::quadrature::{adjoint_averaging_apply, averaging_apply, ball_measure};
use amvlab::{DistanceDescriptor, Error, Estimate, Method, MomentMatrix, Scheme, SpaceDescriptor, WeightDescriptor};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{space_of, ConfigError, Entry, Experiment, GraphSource, Operator, Task};

pub const DEFAULT_TOLERANCE: f64 = 1e-3;
const DEFAULT_BUDGET: usize = 256;

/// Why an experiment stopped.
#[derive(Debug)]
pub enum TaskError {
    Config(ConfigError),
    Runtime(String),
}

impl From<ConfigError> for TaskError {
    fn from(e: ConfigError) -> Self {
        TaskError::Config(e)
    }
}

/// Input problems surfaced by the core are config errors; numerical ones are runtime failures.
fn core(path: &str) -> impl Fn(Error) -> TaskError + '_ {
    move |e| match e {
        Error::InvalidInput(_) | Error::Domain(_) | Error::NotInCatalog(_) | Error::Singular { .. } => {
            TaskError::Config(ConfigError { path: path.into(), message: e.to_string(), line: None })
        }
        other => TaskError::Runtime(other.to_string()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateOut {
    pub value: f64,
    pub error_bound: f64,
    pub scheme: Method,
}

impl From<Estimate> for EstimateOut {
    fn from(e: Estimate) -> Self {
        EstimateOut { value: e.value, error_bound: e.error_bound, scheme: e.method }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub measured: Option<f64>,
    pub uncertainty: Option<f64>,
    pub predicted: f64,
    pub abs_gap: Option<f64>,
    pub rel_gap: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

/// A CSV table with the fixed `r,value,error_bound` columns.
#[derive(Clone, Debug)]
pub struct Table {
    pub suffix: String,
    pub profile: RadiusProfile,
}

#[derive(Clone, Debug)]
pub struct Bundle {
    pub name: String,
    pub json: Value,
    pub tables: Vec<Table>,
    /// `Some(false)` for a failed verification.
    pub verified: Option<bool>,
    pub summary: String,
}

pub struct Context {
    /// Overrides every experiment's seed.
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

fn verdict_json(v: &LimitVerdict) -> Value {
    serde_json::to_value(v).expect("verdict serializes")
}

fn scheme_of(e: &Experiment, ctx: &Context) -> (Scheme, u64) {
    let base = e.scheme.clone().unwrap_or_default();
    let seed = ctx.seed.or(e.seed).unwrap_or_else(|| base.seed());
    (base.with_seed(seed), seed)
}

fn fit_of(e: &Experiment) -> FitOptions {
    e.fit.unwrap_or_default()
}

/// Evaluates every radius (in parallel) and keeps failures as rows of their own.
fn parallel_sweep(quantity: &str, base: &[f64], spec: &RadiiSpec, f: impl Fn(f64) -> amvlab::Result<Estimate> + Sync) -> Result<RadiusProfile, TaskError> {
    let radii = spec.radii();
    let results: Vec<(f64, amvlab::Result<Estimate>)> = radii.par_iter().map(|&r| (r, f(r))).collect();
    RadiusProfile::from_results(quantity, base, results).map_err(|e| TaskError::Runtime(e.to_string()))
}

fn point_quantity(e: &Experiment, space: &SpaceDescriptor, scheme: &Scheme, x: &[f64], r: f64) -> amvlab::Result<Estimate> {
    let u = e.field.as_ref();
    match e.operator {
        Operator::Amv => amv_at_radius(space, u.unwrap(), x, r, scheme),
        Operator::Samv => samv_at_radius(space, u.unwrap(), x, r, scheme),
        Operator::Average => averaging_apply(space, u.unwrap(), x, r, scheme),
        Operator::AdjointAverage => adjoint_averaging_apply(space, u.unwrap(), x, r, scheme),
        Operator::BallMeasure => ball_measure(space, x, r, scheme),
        Operator::Deviation => {
            let d = deviation_and_theta(space, x, r, None, scheme)?;
            Ok(Estimate { value: d.v_r / (r * r), error_bound: 0.0, method: Method::Oracle, nodes: 0 })
        }
    }
}

fn operator_name(op: Operator) -> &'static str {
    match op {
        Operator::Amv => "amv",
        Operator::Samv => "samv",
        Operator::Average => "average",
        Operator::AdjointAverage => "adjoint_average",
        Operator::BallMeasure => "ball_measure",
        Operator::Deviation => "deviation_over_r2",
    }
}

fn point_of(e: &Experiment) -> Vec<f64> {
    e.x.clone().unwrap_or_default()
}

pub fn run_entry(entry: &Entry, ctx: &Context) -> Result<Bundle, TaskError> {
    let e = &entry.experiment;
    let (scheme, seed) = scheme_of(e, ctx);
    let mut out = match e.task {
        Task::Point => point(e, &scheme)?,
        Task::Sweep => sweep_task(e, &scheme)?,
        Task::Verify => verify(e, &scheme, ctx)?,
        Task::Distortion => distortion(e, &scheme)?,
        Task::Moments => moments(e, &scheme)?,
        Task::Weak => weak(e, &scheme)?,
        Task::Graph => graph(e)?,
    };
    let mut json = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "name": entry.name,
        "config": e,
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut json, std::mem::take(&mut out.json)) {
        dst.extend(src);
    }
    out.json = json;
    out.name = entry.name.clone();
    Ok(out)
}

fn bundle(json: Value, tables: Vec<Table>, verified: Option<bool>, summary: String) -> Bundle {
    Bundle { name: String::new(), json, tables, verified, summary }
}

fn point(e: &Experiment, scheme: &Scheme) -> Result<Bundle, TaskError> {
    let space = space_of(e)?;
    let x = point_of(e);
    let r = e.r.unwrap();
    let est = point_quantity(e, &space, scheme, &x, r).map_err(core("field"))?;
    let summary = format!("{} at r = {r}: {} ± {:.3e}", operator_name(e.operator), est.value, est.error_bound);
    Ok(bundle(json!({ "quantity": operator_name(e.operator), "r": r, "estimate": EstimateOut::from(est) }), vec![], None, summary))
}

fn profile_json(p: &RadiusProfile) -> Value {
    json!({ "quantity": p.quantity, "rows": p.rows, "failures": p.failures })
}

fn sweep_profile(e: &Experiment, scheme: &Scheme) -> Result<RadiusProfile, TaskError> {
    let space = space_of(e)?;
    let spec = e.radii.as_ref().unwrap();
    if let Some(region) = &e.region {
        let grid = box_grid(&region.lo, &region.hi, region.per_axis).map_err(core("region"))?;
        let reference = region.reference;
        let name = format!("{}_{}", operator_name(e.operator), region_label(region.norm));
        // region rows are sums over the grid; evaluate the grid points in parallel per radius
        return region_norm_sweep(&name, &grid, region.norm, spec, |_| reference, |y, r| point_quantity(e, &space, scheme, y, r)).map_err(core("region"));
    }
    let x = point_of(e);
    parallel_sweep(operator_name(e.operator), &x, spec, |r| point_quantity(e, &space, scheme, &x, r))
}

fn region_label(n: amvlab::limits::RegionNorm) -> String {
    match n {
        amvlab::limits::RegionNorm::Sup => "sup".into(),
        amvlab::limits::RegionNorm::Lp { p } => format!("l{p}"),
    }
}

fn fit_profile(e: &Experiment, p: &RadiusProfile) -> Result<LimitVerdict, TaskError> {
    extrapolate(p, &fit_of(e)).map_err(|err| TaskError::Runtime(format!("{}: {err}", p.quantity)))
}

fn sweep_task(e: &Experiment, scheme: &Scheme) -> Result<Bundle, TaskError> {
    let p = sweep_profile(e, scheme)?;
    let v = fit_profile(e, &p)?;
    let summary = format!("{}: {}", p.quantity, describe(&v));
    Ok(bundle(
        json!({ "profile": profile_json(&p), "verdict": verdict_json(&v) }),
        vec![Table { suffix: String::new(), profile: p }],
        None,
        summary,
    ))
}

fn describe(v: &LimitVerdict) -> String {
    match (v.status, v.limit, v.uncertainty) {
        (Status::Converged, Some(l), Some(u)) => format!("converged to {l} ± {u:.3e}"),
        (Status::Diverging, _, _) => format!("diverging (rate {})", v.order.map_or("?".into(), |o| format!("{o:.3}"))),
        _ => format!("oscillating between {:?}", v.accumulation),
    }
}

/// The closed-form prediction matching the experiment's space, weight and operator.
pub fn prediction_for(e: &Experiment) -> Result<Prediction, TaskError> {
    let space = space_of(e)?;
    let unsupported = |why: &str| TaskError::Config(ConfigError { path: "operator".into(), message: format!("no closed form: {why}"), line: None });
    if let Some(DistanceDescriptor::Model { model, n }) = e.space.as_ref().map(|s| s.distance.clone()) {
        if e.operator != Operator::Deviation {
            return Err(unsupported("model spaces predict the deviation only"));
        }
        return predict_model_deviation(model, n).map_err(core("space"));
    }
    let u = e.field.as_ref().unwrap();
    let x = point_of(e);
    let at_origin = x.iter().all(|v| *v == 0.0);
    let norm = space.distance.norm().filter(|_| space.distance.is_norm_induced()).ok_or_else(|| unsupported("closed forms need a norm-induced distance"))?;
    let pick = |(a, s): (Prediction, Prediction)| match e.operator {
        Operator::Amv => Ok(a),
        Operator::Samv => Ok(s),
        _ => Err(unsupported("predictions exist for amv and samv")),
    };
    match &space.weight {
        WeightDescriptor::PowerAlpha { alpha } if at_origin => {
            if !norm.is_euclidean() {
                return Err(unsupported("the power-weight rule is stated for the Euclidean norm"));
            }
            pick(predict_power_weight(u, norm.n, *alpha).map_err(core("field"))?)
        }
        WeightDescriptor::Separable { radial, fourier } if at_origin => {
            if e.operator != Operator::Amv || !norm.is_euclidean() {
                return Err(unsupported("the separable rule predicts the Euclidean AMV only"));
            }
            let s = predict_separable(u, radial, fourier).map_err(core("field"))?;
            s.amv.ok_or_else(|| TaskError::Config(ConfigError { path: "field".into(), message: "the gradient pairs with the first angular moment: the AMV diverges".into(), line: None }))
        }
        w => {
            if w.is_constant() && norm.is_euclidean() {
                let p = predict_unweighted(u, &x).map_err(core("field"))?;
                return match e.operator {
                    Operator::Amv | Operator::Samv => Ok(Prediction { quantity: operator_name(e.operator).into(), ..p }),
                    _ => Err(unsupported("predictions exist for amv and samv")),
                };
            }
            let m = norm_second_moment(&norm).map_err(core("space"))?;
            pick(predict_positive_weight(u, w, &x, &m).map_err(core("space.weight"))?)
        }
    }
}

fn verify(e: &Experiment, scheme: &Scheme, ctx: &Context) -> Result<Bundle, TaskError> {
    let prediction = prediction_for(e)?;
    let predicted = prediction.value.scalar().expect("scalar prediction");
    let p = sweep_profile(e, scheme)?;
    let v = fit_profile(e, &p)?;
    let tolerance = ctx.tolerance.or(e.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    let abs_gap = v.limit.map(|l| (l - predicted).abs());
    let rel_gap = abs_gap.filter(|_| predicted != 0.0).map(|g| g / predicted.abs());
    let pass = v.status == Status::Converged && abs_gap.is_some_and(|g| g <= tolerance);
    let cmp = Comparison { measured: v.limit, uncertainty: v.uncertainty, predicted, abs_gap, rel_gap, tolerance, pass };
    let summary = format!(
        "{} [{}]: measured {} vs predicted {predicted} -> {}",
        p.quantity,
        prediction.citation,
        v.limit.map_or_else(|| format!("{:?}", v.status).to_lowercase(), |l| l.to_string()),
        if pass { "pass" } else { "FAIL" }
    );
    Ok(bundle(
        json!({ "profile": profile_json(&p), "verdict": verdict_json(&v), "prediction": prediction, "comparison": cmp }),
        vec![Table { suffix: String::new(), profile: p }],
        Some(pass),
        summary,
    ))
}

#[derive(Serialize)]
struct DistortionRow {
    r: f64,
    z_r: EstimateOut,
    eps: f64,
    identically_zero: bool,
    comparability: f64,
    v_r: f64,
    theta_r: f64,
    z_ln_r: EstimateOut,
    sup_slack_flag: bool,
}

fn distortion(e: &Experiment, scheme: &Scheme) -> Result<Bundle, TaskError> {
    let space = space_of(e)?;
    let x = point_of(e);
    let budget = e.budget.unwrap_or(DEFAULT_BUDGET);
    let radii = e.radii.as_ref().unwrap().radii();
    let reports: Vec<_> = radii.par_iter().map(|&r| distortion_report(&space, &x, r, scheme, budget)).collect::<amvlab::Result<_>>().map_err(core("space"))?;
    let rows: Vec<DistortionRow> = reports
        .iter()
        .map(|d| DistortionRow {
            r: d.r,
            z_r: d.z_r.into(),
            eps: d.eps,
            identically_zero: d.identically_zero,
            comparability: d.comparability,
            v_r: d.v_r,
            theta_r: d.theta_r,
            z_ln_r: d.z_ln_r.into(),
            sup_slack_flag: d.sup_slack_flag,
        })
        .collect();
    let row = |r: f64, value: f64, error_bound: f64| amvlab::limits::Row { r, value, error_bound };
    let eps = RadiusProfile::from_rows("eps", reports.iter().map(|d| row(d.r, d.eps, 0.0)).collect());
    let z = RadiusProfile::from_rows("z_r", reports.iter().map(|d| row(d.r, d.z_r.value, d.z_r.error_bound)).collect());
    let flag: EqualityFlag = distortion_equality_flag(&eps).map_err(|err| TaskError::Runtime(err.to_string()))?;
    let order = if eps.rows.iter().all(|r| r.value > 0.0) { order_fit(&eps).ok() } else { None };
    let summary = format!(
        "distortion: {}eps order {}, amv = samv predicted: {}",
        if reports.iter().all(|d| d.identically_zero) { "identically zero, " } else { "" },
        order.map_or("n/a".into(), |o| format!("{o:.3}")),
        flag.equal
    );
    Ok(bundle(
        json!({ "rows": rows, "eps_order": order, "equality_flag": flag }),
        vec![Table { suffix: ".eps".into(), profile: eps }, Table { suffix: ".z_r".into(), profile: z }],
        None,
        summary,
    ))
}

#[derive(Serialize)]
struct MomentRow {
    r: f64,
    m_r: MomentMatrix,
    error_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    m_nu_r: Option<MomentMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m_nu_tilde_r: Option<MomentMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu_tilde_mass: Option<f64>,
}

fn moments(e: &Experiment, scheme: &Scheme) -> Result<Bundle, TaskError> {
    let space = space_of(e)?;
    let x = point_of(e);
    let radii = e.radii.as_ref().unwrap().radii();
    let norm = space.distance.norm().filter(|_| space.distance.is_norm_induced());
    let weighted = !space.weight.is_constant();
    if weighted && norm.is_none() {
        return Err(ConfigError { path: "space.weight".into(), message: "blow-up moments need a norm-induced distance".into(), line: None }.into());
    }
    let rows: Vec<MomentRow> = radii
        .par_iter()
        .map(|&r| -> amvlab::Result<MomentRow> {
            let (m, err) = empirical_second_moment(&space.distance, &x, r, scheme)?;
            let blow = if weighted { Some(blowup_moments(&space.weight, norm.as_ref().unwrap(), r, scheme)?) } else { None };
            Ok(MomentRow {
                r,
                m_r: m,
                error_bound: err.max(blow.as_ref().map_or(0.0, |b| b.error_bound)),
                m_nu_r: blow.as_ref().map(|b| b.m_nu_r.clone()),
                m_nu_tilde_r: blow.as_ref().map(|b| b.m_nu_tilde_r.clone()),
                nu_tilde_mass: blow.as_ref().map(|b| b.nu_tilde_mass),
            })
        })
        .collect::<amvlab::Result<_>>()
        .map_err(core("space"))?;
    let mut predictions = vec![];
    if let Some(norm) = norm {
        predictions.push(amvlab::closed_forms::moment_prediction(norm_second_moment(&norm).map_err(core("space"))?, "norm-second-moment"));
        match &space.weight {
            WeightDescriptor::PowerAlpha { alpha } if norm.is_euclidean() => {
                let (m, mt) = power_weight_moments(norm.n, *alpha).map_err(core("space.weight"))?;
                predictions.push(amvlab::closed_forms::moment_prediction(m, "power-weight-moments"));
                predictions.push(amvlab::closed_forms::moment_prediction(mt, "power-weight-samv"));
            }
            WeightDescriptor::Separable { radial, fourier } if norm.is_euclidean() => {
                let u = amvlab::ScalarField::Polynomial(amvlab::Polynomial::zero(2));
                let s = predict_separable(&u, radial, fourier).map_err(core("space.weight"))?;
                if let Some(m) = s.moment {
                    predictions.push(amvlab::closed_forms::moment_prediction(m, "separable-weight-amv"));
                }
                if let Some(m) = s.literal_moment {
                    predictions.push(amvlab::closed_forms::moment_prediction(m, "separable-weight-literal"));
                }
            }
            _ => {}
        }
    }
    let summary = format!("moments at {} radii, {} predictions", rows.len(), predictions.len());
    Ok(bundle(json!({ "rows": rows, "predictions": predictions }), vec![], None, summary))
}

fn weak(e: &Experiment, scheme: &Scheme) -> Result<Bundle, TaskError> {
    let space = space_of(e)?;
    let u = e.field.as_ref().unwrap();
    let phi = e.phi.as_ref().unwrap();
    let variant = e.variant.unwrap_or(amvlab::operators::PairingVariant::Amv);
    let p = parallel_sweep("pairing", &[], e.radii.as_ref().unwrap(), |r| weak_pairing(&space, u, phi, r, variant, scheme))?;
    let v = fit_profile(e, &p)?;
    let summary = format!("weak pairing: {}", describe(&v));
    Ok(bundle(
        json!({ "variant": variant, "profile": profile_json(&p), "verdict": verdict_json(&v) }),
        vec![Table { suffix: String::new(), profile: p }],
        None,
        summary,
    ))
}

#[derive(Serialize)]
struct GraphRow {
    r: f64,
    point: GraphPoint,
    ball_measure: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    amv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samv: Option<f64>,
}

#[derive(Serialize)]
struct AtomicRow {
    r: f64,
    ball_measures: Vec<f64>,
    amv: Vec<Vec<f64>>,
    samv: Vec<Vec<f64>>,
    /// `max |m_x A_xy - m_y A_yx|` for the AMV matrix.
    amv_asymmetry: f64,
    samv_asymmetry: f64,
    z_r: Vec<f64>,
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn weighted_asymmetry(mass: &DVector<f64>, m: &DMatrix<f64>) -> f64 {
    let w = DMatrix::from_diagonal(mass) * m;
    (&w - w.transpose()).abs().max()
}

fn graph(e: &Experiment) -> Result<Bundle, TaskError> {
    let g = e.graph.as_ref().unwrap();
    let radii = e.radii.as_ref().unwrap().radii();
    let atomic = match &g.source {
        GraphSource::ThreePointLine { masses } => Some(three_point_line(*masses)),
        GraphSource::Atomic { distances, masses } => {
            let n = masses.len();
            if distances.len() != n || distances.iter().any(|row| row.len() != n) {
                return Err(ConfigError { path: "graph.source.distances".into(), message: format!("need a {n}×{n} matrix"), line: None }.into());
            }
            Some(AtomicSpace::new(DMatrix::from_fn(n, n, |i, j| distances[i][j]), DVector::from_column_slice(masses)))
        }
        _ => None,
    };
    if let Some(a) = atomic {
        let a = a.map_err(core("graph.source"))?;
        let rows: Vec<AtomicRow> = radii
            .iter()
            .map(|&r| {
                let ops = a.operator_matrices(r).map_err(core("radii"))?;
                Ok(AtomicRow {
                    r,
                    ball_measures: ops.ball.iter().copied().collect(),
                    amv_asymmetry: weighted_asymmetry(&a.mass, &ops.amv),
                    samv_asymmetry: weighted_asymmetry(&a.mass, &ops.samv),
                    amv: rows_of(&ops.amv),
                    samv: rows_of(&ops.samv),
                    z_r: a.distortion_average(r).iter().copied().collect(),
                })
            })
            .collect::<Result<_, TaskError>>()?;
        let summary = format!("atomic space with {} points at {} radii", a.len(), rows.len());
        return Ok(bundle(json!({ "atomic": rows }), vec![], None, summary));
    }
    let graph = match &g.source {
        GraphSource::Inline { graph } => MetricGraph::new(graph.clone()),
        GraphSource::CircleSpokes { n, include_circle } => circle_spokes(*n, *include_circle),
        _ => unreachable!(),
    }
    .map_err(core("graph.source"))?;
    if let Some(v) = &g.values {
        if v.len() != graph.vertex_count() {
            return Err(ConfigError { path: "graph.values".into(), message: format!("need {} vertex values", graph.vertex_count()), line: None }.into());
        }
    }
    for (i, p) in g.points.iter().enumerate() {
        graph.check_point(p).map_err(core(&format!("graph.points[{i}]")))?;
    }
    let mut rows = vec![];
    for &r in &radii {
        for p in &g.points {
            let m = graph.ball_measure(p, r).map_err(core("radii"))?;
            let (amv, samv) = match &g.values {
                Some(v) => (Some(graph.amv(v, p, r).map_err(core("graph.values"))?), Some(graph.samv(v, p, r).map_err(core("graph.values"))?)),
                None => (None, None),
            };
            rows.push(GraphRow { r, point: *p, ball_measure: m, amv, samv });
        }
    }
    let comparability = if g.comparability { Some(graph.comparability_scan(&radii, g.scan_resolution).map_err(core("graph"))?) } else { None };
    let summary = match &comparability {
        Some(c) => format!("graph: comparability {:?}", c.iter().map(|row| row.ratio).collect::<Vec<_>>()),
        None => format!("graph: {} ball rows", rows.len()),
    };
    let graph_json: Value = serde_json::from_str(&graph.to_json()).expect("graph JSON");
    Ok(bundle(json!({ "graph": graph_json, "rows": rows, "comparability": comparability }), vec![], None, summary))
}

impl Bundle {
    /// Pretty JSON with a trailing newline.
    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("bundle serializes");
        s.push('\n');
        s
    }
}

/// Runs entries on the current rayon pool, keeping document order.
pub fn run_all(entries: &[Entry], ctx: &Context) -> Vec<Result<Bundle, TaskError>> {
    entries.par_iter().map(|e| run_entry(e, ctx)).collect()
}

pub fn is_verify(e: &Experiment) -> bool {
    e.task == Task::Verify
}
