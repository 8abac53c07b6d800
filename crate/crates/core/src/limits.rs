//! Radius sweeps, r → 0 extrapolation and order estimates.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::Estimate;

fn default_ratio() -> f64 {
    0.5
}

fn default_count() -> usize {
    9
}

/// Radii of a sweep: geometric `r₀ ρᵏ` or an explicit decreasing list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiiSpec {
    Geometric {
        r0: f64,
        #[serde(default = "default_ratio")]
        ratio: f64,
        #[serde(default = "default_count")]
        count: usize,
    },
    List(Vec<f64>),
}

impl RadiiSpec {
    pub fn geometric(r0: f64, count: usize) -> Self {
        Self::Geometric { r0, ratio: 0.5, count }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Geometric { r0, ratio, count } => {
                if !(*r0 > 0.0) || !r0.is_finite() {
                    return invalid(format!("r0 must be positive and finite, got {r0}"));
                }
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return invalid(format!("ratio must lie in (0, 1), got {ratio}"));
                }
                if *count == 0 {
                    return invalid("count must be positive");
                }
            }
            Self::List(v) => {
                if v.is_empty() {
                    return invalid("radius list is empty");
                }
                if let Some(r) = v.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
                    return invalid(format!("radii must be positive and finite, got {r}"));
                }
                if v.windows(2).any(|w| w[1] >= w[0]) {
                    return invalid("radii must be strictly decreasing");
                }
            }
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        match self {
            Self::Geometric { r0, ratio, count } => (0..*count).map(|k| r0 * ratio.powi(k as i32)).collect(),
            Self::List(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub r: f64,
    pub value: f64,
    pub error_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub r: f64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusProfile {
    pub quantity: String,
    /// Base point, empty for region sweeps.
    pub base: Vec<f64>,
    pub rows: Vec<Row>,
    pub failures: Vec<RowFailure>,
}

impl RadiusProfile {
    /// Assembles a profile from per-radius results, in the order of `results`.
    pub fn from_results(quantity: &str, base: &[f64], results: Vec<(f64, Result<Estimate>)>) -> Result<Self> {
        let mut rows = Vec::new();
        let mut failures = Vec::new();
        for (r, res) in results {
            match res {
                Ok(e) if e.value.is_finite() => rows.push(Row { r, value: e.value, error_bound: e.error_bound }),
                Ok(e) => failures.push(RowFailure { r, error: format!("non-finite value {}", e.value) }),
                Err(e) => failures.push(RowFailure { r, error: e.to_string() }),
            }
        }
        if rows.is_empty() {
            let first = failures.first().map(|f| f.error.clone()).unwrap_or_else(|| "no radii".into());
            return Err(Error::SweepFailed(first));
        }
        Ok(Self { quantity: quantity.to_string(), base: base.to_vec(), rows, failures })
    }

    pub fn from_rows(quantity: &str, rows: Vec<Row>) -> Self {
        Self { quantity: quantity.to_string(), base: vec![], rows, failures: vec![] }
    }

    pub fn radii(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.r).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    /// `r,value,error_bound` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,value,error_bound\n");
        for row in &self.rows {
            s.push_str(&format!("{},{},{}\n", fmt17(row.r), fmt17(row.value), fmt17(row.error_bound)));
        }
        s
    }

    /// Drops the `k` largest radii.
    pub fn without_largest(&self, k: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| b.r.total_cmp(&a.r));
        Self { rows: rows.into_iter().skip(k).collect(), ..self.clone() }
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Evaluates `quantity` at every radius; row failures are recorded, not fatal.
pub fn sweep(name: &str, base: &[f64], spec: &RadiiSpec, quantity: impl Fn(f64) -> Result<Estimate>) -> Result<RadiusProfile> {
    spec.validate()?;
    let results = spec.radii().into_iter().map(|r| (r, quantity(r))).collect();
    RadiusProfile::from_results(name, base, results)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    Diverging,
    Oscillating,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitVerdict {
    pub status: Status,
    pub limit: Option<f64>,
    pub uncertainty: Option<f64>,
    /// Leading power of `r` in the residual, or the growth exponent when diverging.
    pub order: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub accumulation: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitOptions {
    #[serde(default = "default_degree")]
    pub degree: usize,
    /// Extrapolants must agree within `agreement · scale`, plus their quadrature spread.
    #[serde(default = "default_agreement")]
    pub agreement: f64,
}

fn default_degree() -> usize {
    2
}

fn default_agreement() -> f64 {
    1e-3
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { degree: default_degree(), agreement: default_agreement() }
    }
}

struct Fit {
    coef: Vec<f64>,
    sigma: Vec<f64>,
}

/// Weighted least squares for `Σ a_j r^j`; `None` if rank deficient.
fn poly_fit(rows: &[Row], degree: usize) -> Option<Fit> {
    let scale = rows.iter().map(|r| r.value.abs()).fold(0.0, f64::max);
    let floor = (1e-13 * scale).max(1e-300);
    let rmax = rows.iter().map(|r| r.r).fold(0.0, f64::max);
    let m = rows.len();
    let k = degree + 1;
    // columns use r / rmax to keep the design well conditioned
    let mut a = DMatrix::zeros(m, k);
    let mut b = DVector::zeros(m);
    for (i, row) in rows.iter().enumerate() {
        let w = 1.0 / row.error_bound.max(floor);
        let t = row.r / rmax;
        for j in 0..k {
            a[(i, j)] = w * t.powi(j as i32);
        }
        b[i] = w * row.value;
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return None;
    }
    let x = svd.solve(&b, 0.0).ok()?;
    let cov = (a.transpose() * &a).try_inverse()?;
    let coef: Vec<f64> = (0..k).map(|j| x[j] / rmax.powi(j as i32)).collect();
    let sigma: Vec<f64> = (0..k).map(|j| cov[(j, j)].max(0.0).sqrt() / rmax.powi(j as i32)).collect();
    Some(Fit { coef, sigma })
}

fn sorted_rows(profile: &RadiusProfile) -> Vec<Row> {
    let mut rows = profile.rows.clone();
    rows.sort_by(|a, b| b.r.total_cmp(&a.r));
    rows
}

/// `|value|` grows monotonically over the last three rows, by at least 2× overall.
pub fn is_diverging(profile: &RadiusProfile) -> Option<f64> {
    let rows = sorted_rows(profile);
    if rows.len() < 3 {
        return None;
    }
    let t = &rows[rows.len() - 3..];
    let v: Vec<f64> = t.iter().map(|r| r.value.abs()).collect();
    if v[0] > 0.0 && v[1] > v[0] && v[2] > v[1] && v[2] >= 2.0 * v[0] {
        // growth exponent: |value| ~ r^order with order < 0
        Some((v[2] / v[1]).ln() / (t[2].r / t[1].r).ln())
    } else {
        None
    }
}

/// Fits `a₀ + a₁r + … + a_d r^d` and classifies the r → 0 behaviour.
pub fn extrapolate(profile: &RadiusProfile, opts: &FitOptions) -> Result<LimitVerdict> {
    let d = opts.degree;
    let rows = sorted_rows(profile);
    if rows.len() < d + 2 {
        return Err(Error::Fit(format!("{} rows are too few for a degree-{d} fit", rows.len())));
    }
    if let Some(rate) = is_diverging(profile) {
        return Ok(LimitVerdict { status: Status::Diverging, limit: None, uncertainty: None, order: Some(rate), accumulation: vec![] });
    }
    let scale = rows.iter().map(|r| r.value.abs()).fold(0.0, f64::max);
    let mut fits = Vec::new();
    for drop in 0..3 {
        if rows.len() - drop < d + 2 {
            break;
        }
        match poly_fit(&rows[drop..], d) {
            Some(f) => fits.push(f),
            None => return Ok(oscillating(&rows, d)),
        }
    }
    let best = fits.last().unwrap();
    let a0 = best.coef[0];
    let spread = fits.iter().map(|f| (f.coef[0] - a0).abs()).fold(0.0, f64::max);
    let quad = 3.0 * best.sigma[0] * chi_scale(&rows[fits.len() - 1..], best);
    let max_err = rows.iter().map(|r| r.error_bound).fold(0.0, f64::max);
    let allowed = opts.agreement * scale.max(f64::MIN_POSITIVE) + 3.0 * max_err;
    if spread > allowed {
        return Ok(oscillating(&rows, d));
    }
    let order = (1..=d)
        .find(|&j| {
            let rmax = rows[0].r;
            let contribution = (best.coef[j] * rmax.powi(j as i32)).abs();
            contribution > 3.0 * best.sigma[j] * rmax.powi(j as i32) && contribution > 1e-9 * scale.max(f64::MIN_POSITIVE)
        })
        .map(|j| j as f64);
    Ok(LimitVerdict {
        status: Status::Converged,
        limit: Some(a0),
        uncertainty: Some(spread + quad),
        order,
        accumulation: vec![],
    })
}

/// Reduced chi, so the covariance reflects the actual scatter when error bounds are loose floors.
fn chi_scale(rows: &[Row], fit: &Fit) -> f64 {
    let dof = rows.len() as f64 - fit.coef.len() as f64;
    if dof < 1.0 {
        return 1.0;
    }
    let scale = rows.iter().map(|r| r.value.abs()).fold(0.0, f64::max);
    let floor = (1e-13 * scale).max(1e-300);
    let chi2: f64 = rows
        .iter()
        .map(|row| {
            let pred: f64 = fit.coef.iter().enumerate().map(|(j, c)| c * row.r.powi(j as i32)).sum();
            ((row.value - pred) / row.error_bound.max(floor)).powi(2)
        })
        .sum();
    (chi2 / dof).sqrt().max(1.0)
}

fn oscillating(rows: &[Row], d: usize) -> LimitVerdict {
    let mut acc = Vec::new();
    for parity in 0..2 {
        let sub: Vec<Row> = rows.iter().enumerate().filter(|(i, _)| i % 2 == parity).map(|(_, r)| *r).collect();
        let deg = d.min(sub.len().saturating_sub(2));
        let v = if sub.len() >= deg + 2 { poly_fit(&sub, deg).map(|f| f.coef[0]) } else { None };
        if let Some(v) = v.or(sub.last().map(|r| r.value)) {
            acc.push(v);
        }
    }
    LimitVerdict { status: Status::Oscillating, limit: None, uncertainty: None, order: None, accumulation: acc }
}

/// Log-log slope by the median of pairwise slopes (Theil–Sen).
pub fn order_fit(profile: &RadiusProfile) -> Result<f64> {
    let rows = &profile.rows;
    if rows.len() < 2 {
        return Err(Error::Fit("order fit needs at least two rows".into()));
    }
    if let Some(r) = rows.iter().find(|r| !(r.value > 0.0)) {
        return invalid(format!("order fit needs positive values, got {} at r = {}", r.value, r.r));
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.r.ln(), r.value.ln())).collect();
    let mut slopes = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let dx = pts[j].0 - pts[i].0;
            if dx != 0.0 {
                slopes.push((pts[j].1 - pts[i].1) / dx);
            }
        }
    }
    if slopes.is_empty() {
        return Err(Error::Fit("all radii coincide".into()));
    }
    slopes.sort_by(f64::total_cmp);
    let m = slopes.len();
    Ok(if m % 2 == 1 { slopes[m / 2] } else { 0.5 * (slopes[m / 2 - 1] + slopes[m / 2]) })
}

/// Whether the distortion decays like `O(r²)`, the precondition under which AMV and SAMV limits agree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EqualityFlag {
    pub equal: bool,
    pub slope: Option<f64>,
}

pub const QUADRATIC_SLOPE: f64 = 1.95;

pub fn distortion_equality_flag(eps: &RadiusProfile) -> Result<EqualityFlag> {
    if eps.rows.iter().all(|r| r.value == 0.0) {
        return Ok(EqualityFlag { equal: true, slope: None });
    }
    let slope = order_fit(eps)?;
    Ok(EqualityFlag { equal: slope >= QUADRATIC_SLOPE, slope: Some(slope) })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionNorm {
    Sup,
    Lp { p: f64 },
}

/// Sample points of a region with the volume each one represents.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub points: Vec<Vec<f64>>,
    pub cell_volume: f64,
}

/// Midpoint grid of the box `[lo, hi]` with `per_axis` cells per axis.
pub fn box_grid(lo: &[f64], hi: &[f64], per_axis: usize) -> Result<Grid> {
    if lo.len() != hi.len() || lo.is_empty() || per_axis == 0 || lo.iter().zip(hi).any(|(a, b)| !(b > a)) {
        return invalid("grid box needs lo < hi in every coordinate and a positive cell count");
    }
    let n = lo.len();
    let h: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (b - a) / per_axis as f64).collect();
    let total = per_axis.checked_pow(n as u32).filter(|t| *t <= 1 << 24).ok_or_else(|| Error::InvalidInput("grid too large".into()))?;
    let mut points = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut p = vec![0.0; n];
        for i in 0..n {
            p[i] = lo[i] + (idx % per_axis) as f64 * h[i] + 0.5 * h[i];
            idx /= per_axis;
        }
        points.push(p);
    }
    Ok(Grid { points, cell_volume: h.iter().product() })
}

/// Midpoint grid cells whose centers fall in the Euclidean ball.
pub fn ball_grid(center: &[f64], radius: f64, per_axis: usize) -> Result<Grid> {
    let lo: Vec<f64> = center.iter().map(|c| c - radius).collect();
    let hi: Vec<f64> = center.iter().map(|c| c + radius).collect();
    let g = box_grid(&lo, &hi, per_axis)?;
    let points = g
        .points
        .into_iter()
        .filter(|p| p.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() < radius * radius)
        .collect();
    Ok(Grid { points, cell_volume: g.cell_volume })
}

/// Rows of `‖q(·, r) - v‖` over the grid.
pub fn region_norm_sweep(
    name: &str,
    grid: &Grid,
    norm: RegionNorm,
    spec: &RadiiSpec,
    reference: impl Fn(&[f64]) -> f64,
    quantity: impl Fn(&[f64], f64) -> Result<Estimate>,
) -> Result<RadiusProfile> {
    spec.validate()?;
    if grid.points.is_empty() {
        return invalid("region grid has no points");
    }
    if let RegionNorm::Lp { p } = norm {
        if !(p >= 1.0) || !p.is_finite() {
            return invalid(format!("L^p exponent must be finite and at least 1, got {p}"));
        }
    }
    let row = |r: f64| -> Result<Estimate> {
        let mut acc = 0.0f64;
        let mut err = 0.0f64;
        for x in &grid.points {
            let e = quantity(x, r)?;
            let d = (e.value - reference(x)).abs();
            match norm {
                RegionNorm::Sup => {
                    acc = acc.max(d);
                    err = err.max(e.error_bound);
                }
                RegionNorm::Lp { p } => {
                    acc += d.powf(p) * grid.cell_volume;
                    err += e.error_bound.powf(p) * grid.cell_volume;
                }
            }
        }
        let (value, error_bound) = match norm {
            RegionNorm::Sup => (acc, err),
            RegionNorm::Lp { p } => (acc.powf(1.0 / p), err.powf(1.0 / p)),
        };
        Ok(Estimate { value, error_bound, method: crate::quadrature::Method::Exact, nodes: grid.points.len() })
    };
    sweep(name, &[], spec, row)
}
