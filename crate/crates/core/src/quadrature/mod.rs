//! Integrals over metric balls.
//!
//! Every entry point tries the closed-form engine first (unless a sampling
//! scheme is forced), then deterministic product rules, then quasi-Monte Carlo.
//! Estimates always carry an error bound and the method that produced them.

pub(crate) mod exact;
pub mod rules;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fields::{ScalarField, WeightDescriptor};
use crate::geometry::{DistanceDescriptor, ModelVolumeOracle};
use crate::sampling::{mix_key, PointSet};

use exact::{Centering, Region};
pub use rules::Rule;

/// Outer-node × inner-node evaluations allowed for nested integrals.
pub const NESTED_BUDGET: usize = 1 << 28;
/// Cap for automatic refinement of nested integrals; the last affordable level is kept.
pub const AUTO_NESTED_BUDGET: usize = 1 << 24;

/// Independent scrambles per quasi-Monte Carlo estimate.
pub const REPLICATES: usize = 8;

/// A metric measure space: a distance and a density with respect to Lebesgue measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescriptor {
    pub distance: DistanceDescriptor,
    #[serde(default = "WeightDescriptor::lebesgue")]
    pub weight: WeightDescriptor,
}

impl SpaceDescriptor {
    pub fn new(distance: DistanceDescriptor, weight: WeightDescriptor) -> Result<Self> {
        let s = Self { distance, weight };
        s.validate()?;
        Ok(s)
    }

    pub fn lebesgue(distance: DistanceDescriptor) -> Self {
        Self { distance, weight: WeightDescriptor::lebesgue() }
    }

    pub fn validate(&self) -> Result<()> {
        self.distance.validate()?;
        self.weight.validate()?;
        self.weight.check_dim(self.distance.dim())?;
        if self.model().is_some() && !self.weight.is_constant() {
            return invalid("model spaces carry their Riemannian volume; use a constant weight");
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.distance.dim()
    }

    pub fn model(&self) -> Option<ModelVolumeOracle> {
        match &self.distance {
            DistanceDescriptor::Model { model, n } => Some(ModelVolumeOracle { model: *model, n: *n }),
            _ => None,
        }
    }

    /// All balls of a given radius carry the same measure.
    pub fn has_uniform_balls(&self) -> bool {
        self.model().is_some() || (self.distance.is_norm_induced() && self.weight.is_constant())
    }

    /// `w = c e^{⟨a,y⟩}` on a norm-induced distance, so `w(y)/μ(B_r(y))` is constant.
    pub fn exp_affine_rate(&self) -> Option<Vec<f64>> {
        if !self.distance.is_norm_induced() {
            return None;
        }
        let e = exact::exp_poly_form(&self.weight, self.dim())?;
        e.is_exp_affine().then_some(e.a)
    }

    pub(crate) fn check(&self, x: &[f64], r: f64) -> Result<()> {
        if !(r > 0.0) || !r.is_finite() {
            return invalid(format!("radius must be positive and finite, got {r}"));
        }
        if let Some(o) = self.model() {
            if r >= o.max_radius() {
                return Err(Error::Domain(format!("radius {r} beyond the injectivity radius")));
            }
            return Ok(());
        }
        if x.len() != self.dim() {
            return invalid(format!("expected a point of dimension {}, got {}", self.dim(), x.len()));
        }
        self.distance.bounding_box(x, r).map(|_| ())
    }

    fn require_points(&self) -> Result<()> {
        if self.model().is_some() {
            return invalid("model spaces expose ball volumes only");
        }
        Ok(())
    }
}

fn default_level() -> u32 {
    3
}

fn default_tolerance() -> f64 {
    1e-10
}

/// How integrals are evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Scheme {
    /// Closed form only; fails outside the catalog.
    #[serde(alias = "exact_polar")]
    Exact,
    /// Product Gauss rule at a fixed refinement level.
    Gauss {
        #[serde(default = "default_level")]
        level: u32,
    },
    Qmc {
        count: usize,
        #[serde(default)]
        seed: u64,
    },
    Mc {
        count: usize,
        #[serde(default)]
        seed: u64,
    },
    /// Exact when possible, otherwise refine until the error bound meets `tolerance` (relative).
    Auto {
        #[serde(default = "default_tolerance")]
        tolerance: f64,
        #[serde(default)]
        seed: u64,
    },
}

impl Default for Scheme {
    fn default() -> Self {
        Scheme::Auto { tolerance: default_tolerance(), seed: 0 }
    }
}

impl Scheme {
    pub fn with_seed(&self, s: u64) -> Self {
        match self.clone() {
            Scheme::Qmc { count, .. } => Scheme::Qmc { count, seed: s },
            Scheme::Mc { count, .. } => Scheme::Mc { count, seed: s },
            Scheme::Auto { tolerance, .. } => Scheme::Auto { tolerance, seed: s },
            other => other,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Scheme::Qmc { count, .. } | Scheme::Mc { count, .. } if *count == 0 => invalid("sample count must be positive"),
            Scheme::Gauss { level } if *level > 10 => invalid("Gauss level must be at most 10"),
            Scheme::Auto { tolerance, .. } if !(*tolerance > 0.0) => invalid("tolerance must be positive"),
            _ => Ok(()),
        }
    }

    fn allows_exact(&self) -> bool {
        matches!(self, Scheme::Exact | Scheme::Auto { .. })
    }

    pub fn seed(&self) -> u64 {
        match self {
            Scheme::Qmc { seed, .. } | Scheme::Mc { seed, .. } | Scheme::Auto { seed, .. } => *seed,
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Oracle,
    Gauss,
    Qmc,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
    pub method: Method,
    /// Integrand evaluations (0 for closed forms).
    pub nodes: usize,
}

impl Estimate {
    pub(crate) fn exact(e: exact::Exact) -> Self {
        Estimate { value: e.value, error_bound: 0.0, method: Method::Exact, nodes: 0 }
    }

    /// `self / other` with first-order error propagation.
    pub fn ratio(&self, other: &Estimate) -> Estimate {
        let v = self.value / other.value;
        let e = (self.error_bound / other.value.abs()) + (v.abs() * other.error_bound / other.value.abs());
        Estimate { value: v, error_bound: e, method: self.method.max_with(other.method), nodes: self.nodes + other.nodes }
    }

    pub fn scaled(&self, s: f64) -> Estimate {
        Estimate { value: self.value * s, error_bound: self.error_bound * s.abs(), ..*self }
    }

    pub fn plus(&self, other: &Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error_bound: self.error_bound + other.error_bound,
            method: self.method.max_with(other.method),
            nodes: self.nodes + other.nodes,
        }
    }
}

impl Method {
    fn rank(self) -> u8 {
        match self {
            Method::Exact => 0,
            Method::Oracle => 1,
            Method::Gauss => 2,
            Method::Qmc => 3,
            Method::Mc => 4,
        }
    }

    /// The less exact of two methods.
    pub fn max_with(self, o: Method) -> Method {
        if o.rank() > self.rank() {
            o
        } else {
            self
        }
    }
}

/// Breakpoints for one-dimensional composite rules.
pub fn breakpoints(space: &SpaceDescriptor, field: Option<&ScalarField>, r: f64, nested: bool) -> Vec<f64> {
    if space.dim() != 1 {
        return vec![];
    }
    let mut base = vec![0.0];
    if let Some(ScalarField::Bump { center, radius, .. }) = field {
        base.push(center[0] - radius);
        base.push(center[0] + radius);
    }
    if !nested {
        return base;
    }
    let mut out = base.clone();
    for b in base {
        for s in [-2.0, -1.0, 1.0, 2.0] {
            out.push(b + s * r);
        }
    }
    out
}

struct Sums {
    value: f64,
    abs: f64,
    err: f64,
    nodes: usize,
}

fn apply_rule(space: &SpaceDescriptor, rule: &Rule, f: &dyn Fn(&[f64]) -> Result<f64>) -> Result<Sums> {
    let mut value = 0.0;
    let mut abs = 0.0;
    for (y, w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(y)? * space.weight.eval(y) * w;
        value += v;
        abs += v.abs();
    }
    Ok(Sums { value, abs, err: 0.0, nodes: rule.len() })
}

fn max_gauss_level(dim: usize) -> u32 {
    if dim == 1 {
        8
    } else {
        4
    }
}

/// `∫_{B_r(x)} f dμ` by node rules. `inner_cost` is the cost of one evaluation of `f`.
fn integrate_nodes(
    space: &SpaceDescriptor,
    x: &[f64],
    r: f64,
    scheme: &Scheme,
    breaks: &[f64],
    inner_cost: usize,
    f: &dyn Fn(&[f64]) -> Result<f64>,
) -> Result<Estimate> {
    let dist = &space.distance;
    let cap = if matches!(scheme, Scheme::Auto { .. }) { AUTO_NESTED_BUDGET } else { NESTED_BUDGET };
    let budget = |nodes: usize| -> Result<()> {
        let needed = nodes.saturating_mul(inner_cost.max(1));
        if inner_cost > 1 && needed > cap {
            return Err(Error::Budget { needed, budget: cap });
        }
        Ok(())
    };
    let gauss_pair = |level: u32| -> Result<Option<(Sums, Sums)>> {
        let (Some(a), Some(b)) = (rules::gauss_rule(dist, x, r, level, breaks)?, rules::gauss_rule(dist, x, r, level + 1, breaks)?) else {
            return Ok(None);
        };
        budget(a.len() + b.len())?;
        Ok(Some((apply_rule(space, &a, f)?, apply_rule(space, &b, f)?)))
    };
    let cloud = |count: usize, seed: u64, kind: PointSet| -> Result<Sums> {
        // independent scrambles; the spread between replicates gives the error
        let per = count.div_ceil(REPLICATES).max(2);
        budget(per * REPLICATES)?;
        let mut reps = Vec::with_capacity(REPLICATES);
        let mut abs = 0.0;
        let mut nodes = 0;
        for k in 0..REPLICATES {
            let rule = rules::cloud_rule(dist, x, r, per, mix_key(seed, &[k as u64]), kind)?;
            let s = apply_rule(space, &rule, f)?;
            reps.push(s.value);
            abs += s.abs / REPLICATES as f64;
            nodes += s.nodes;
        }
        let m = REPLICATES as f64;
        let value = reps.iter().sum::<f64>() / m;
        let var = reps.iter().map(|v| (v - value) * (v - value)).sum::<f64>() / (m - 1.0);
        Ok(Sums { value, abs, err: 3.0 * (var / m).sqrt(), nodes })
    };
    let finish = |s: Sums, method: Method| Estimate {
        value: s.value,
        error_bound: s.err.max(64.0 * f64::EPSILON * s.abs).max(f64::MIN_POSITIVE),
        method,
        nodes: s.nodes,
    };
    match scheme {
        Scheme::Exact => Err(Error::NotInCatalog("integrand outside the closed-form catalog".into())),
        Scheme::Gauss { level } => {
            let (a, b) = gauss_pair(*level)?.ok_or_else(|| Error::NotInCatalog("no product rule for this ball".into()))?;
            let err = (a.value - b.value).abs();
            Ok(finish(Sums { err, nodes: a.nodes + b.nodes, ..b }, Method::Gauss))
        }
        Scheme::Qmc { count, seed } => Ok(finish(cloud(*count, *seed, PointSet::Qmc)?, Method::Qmc)),
        Scheme::Mc { count, seed } => Ok(finish(cloud(*count, *seed, PointSet::Mc)?, Method::Mc)),
        Scheme::Auto { tolerance, seed } => {
            let mut best: Option<Estimate> = None;
            for level in 1..max_gauss_level(space.dim()) {
                let pair = match gauss_pair(level) {
                    Ok(p) => p,
                    Err(Error::Budget { .. }) if best.is_some() => break,
                    Err(e) => return Err(e),
                };
                let Some((a, b)) = pair else { break };
                let err = (a.value - b.value).abs();
                let est = finish(Sums { err, nodes: a.nodes + b.nodes, ..b }, Method::Gauss);
                let done = est.error_bound <= tolerance * b.abs.max(f64::MIN_POSITIVE);
                best = Some(est);
                if done {
                    break;
                }
            }
            if let Some(b) = best {
                return Ok(b);
            }
            let mut count = 1usize << 12;
            loop {
                let s = match cloud(count, *seed, PointSet::Qmc) {
                    Ok(s) => s,
                    Err(Error::Budget { .. }) if best.is_some() => break,
                    Err(e) => return Err(e),
                };
                let abs = s.abs;
                let est = finish(s, Method::Qmc);
                let done = est.error_bound <= tolerance * abs.max(f64::MIN_POSITIVE) || count >= 1 << 20;
                best = Some(est);
                if done {
                    break;
                }
                count *= 2;
            }
            Ok(best.unwrap())
        }
    }
}

fn exact_region(space: &SpaceDescriptor, x: &[f64], r: f64) -> Result<Region> {
    exact::region(&space.distance, x, r)
}

fn underflow_check(e: Estimate) -> Result<Estimate> {
    if !(e.value > 1e-300) {
        return Err(Error::Underflow(e.value));
    }
    Ok(e)
}

fn try_exact<T>(scheme: &Scheme, attempt: impl FnOnce() -> Result<T>) -> Result<Option<T>> {
    if !scheme.allows_exact() {
        return Ok(None);
    }
    match attempt() {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotInCatalog(_)) if !matches!(scheme, Scheme::Exact) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `μ(B_r(x))`.
pub fn ball_measure(space: &SpaceDescriptor, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    space.check(x, r)?;
    if let Some(o) = space.model() {
        let v = o.volume(r)?;
        return underflow_check(Estimate { value: v, error_bound: 0.0, method: Method::Oracle, nodes: 0 });
    }
    let n = space.dim();
    if let Some(e) = try_exact(scheme, || {
        let reg = exact_region(space, x, r)?;
        exact::integrate(&reg, None, &crate::fields::Polynomial::constant(n, 1.0), &space.weight, None)
    })? {
        return underflow_check(Estimate::exact(e));
    }
    let breaks = breakpoints(space, None, r, false);
    underflow_check(integrate_nodes(space, x, r, scheme, &breaks, 1, &|_| Ok(1.0))?)
}

fn exact_field_integral(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, centered: bool) -> Result<Estimate> {
    let n = space.dim();
    let pieces = exact::field_pieces(u, n).ok_or_else(|| Error::NotInCatalog(format!("field {u:?}")))?;
    let reg = exact_region(space, x, r)?;
    let ux = if centered { Some(u.eval(x)) } else { None };
    let mut total = exact::Exact::default();
    let mut covered = exact::Exact::default();
    for piece in &pieces.pieces {
        let c = ux.map(|ux| Centering { x, ux });
        let e = exact::integrate(&reg, piece.restrict, &piece.poly, &space.weight, c)?;
        total = exact::Exact { value: total.value + e.value, abs: total.abs + e.abs };
        if !pieces.covers_all && centered {
            let m = exact::integrate(&reg, piece.restrict, &crate::fields::Polynomial::constant(n, 1.0), &space.weight, None)?;
            covered = exact::Exact { value: covered.value + m.value, abs: covered.abs + m.abs };
        }
    }
    if let (false, Some(ux)) = (pieces.covers_all, ux) {
        // u = 0 off the pieces, contributing -u(x) μ(B \ pieces)
        let all = exact::integrate(&reg, None, &crate::fields::Polynomial::constant(n, 1.0), &space.weight, None)?;
        let rest = all.value - covered.value;
        total = exact::Exact { value: total.value - ux * rest, abs: total.abs + (ux * all.abs).abs() };
    }
    Ok(Estimate::exact(total))
}

/// `∫_{B_r(x)} u dμ`.
pub fn ball_integral(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    space.check(x, r)?;
    space.require_points()?;
    u.check_dim(space.dim())?;
    if let Some(e) = try_exact(scheme, || exact_field_integral(space, u, x, r, false))? {
        return Ok(e);
    }
    let breaks = breakpoints(space, Some(u), r, false);
    integrate_nodes(space, x, r, scheme, &breaks, 1, &|y| Ok(u.eval(y)))
}

/// `∫_{B_r(x)} (u(y) - u(x)) dμ(y)`.
pub fn centered_integral(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    space.check(x, r)?;
    space.require_points()?;
    u.check_dim(space.dim())?;
    if let Some(e) = try_exact(scheme, || exact_field_integral(space, u, x, r, true))? {
        return Ok(e);
    }
    let ux = u.eval(x);
    let breaks = breakpoints(space, Some(u), r, false);
    integrate_nodes(space, x, r, scheme, &breaks, 1, &|y| Ok(u.eval(y) - ux))
}

/// `⨍_{B_r(x)} u dμ`, the averaging operator.
pub fn ball_average(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    let num = ball_integral(space, u, x, r, scheme)?;
    let den = ball_measure(space, x, r, scheme)?;
    Ok(num.ratio(&den))
}

pub fn averaging_apply(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    ball_average(space, u, x, r, scheme)
}

enum InnerMode {
    Exact,
    Const(f64),
    Rule(u32),
    Cloud(usize, u64),
}

/// Evaluates `y ↦ μ(B_r(y))` inside nested integrals.
struct Inner<'a> {
    space: &'a SpaceDescriptor,
    r: f64,
    mode: InnerMode,
    /// Integrand evaluations per call.
    cost: usize,
}

impl<'a> Inner<'a> {
    fn new(space: &'a SpaceDescriptor, x: &[f64], r: f64, seed: u64) -> Result<Self> {
        if space.has_uniform_balls() {
            let v = ball_measure(space, x, r, &Scheme::Exact)?.value;
            return Ok(Self { space, r, mode: InnerMode::Const(v), cost: 1 });
        }
        let n = space.dim();
        if let (Some(_), Ok(_)) = (exact::exp_poly_form(&space.weight, n), exact_region(space, x, r)) {
            return Ok(Self { space, r, mode: InnerMode::Exact, cost: 1 });
        }
        let level = if n == 1 { 2 } else { 1 };
        if let Some(rule) = rules::gauss_rule(&space.distance, x, r, level, &breakpoints(space, None, r, false))? {
            return Ok(Self { space, r, mode: InnerMode::Rule(level), cost: rule.len() });
        }
        let count = 1024;
        Ok(Self { space, r, mode: InnerMode::Cloud(count, mix_key(seed, &[0x1AAE])), cost: count })
    }

    fn at(&self, y: &[f64]) -> Result<f64> {
        let v = match &self.mode {
            InnerMode::Const(v) => *v,
            InnerMode::Exact => {
                let reg = exact_region(self.space, y, self.r)?;
                exact::integrate(&reg, None, &crate::fields::Polynomial::constant(y.len(), 1.0), &self.space.weight, None)?.value
            }
            InnerMode::Rule(level) => {
                let breaks = breakpoints(self.space, None, self.r, false);
                let rule = rules::gauss_rule(&self.space.distance, y, self.r, *level, &breaks)?
                    .ok_or_else(|| Error::NotInCatalog("inner rule".into()))?;
                apply_rule(self.space, &rule, &|_| Ok(1.0))?.value
            }
            InnerMode::Cloud(count, seed) => {
                let rule = rules::cloud_rule(&self.space.distance, y, self.r, *count, *seed, PointSet::Qmc)?;
                apply_rule(self.space, &rule, &|_| Ok(1.0))?.value
            }
        };
        if !(v > 1e-300) {
            return Err(Error::Underflow(v));
        }
        Ok(v)
    }

    /// Relative accuracy of the inner measure, probed at `x`.
    fn relative_error(&self, x: &[f64]) -> Result<f64> {
        let coarse = self.at(x)?;
        let fine = match &self.mode {
            InnerMode::Const(_) | InnerMode::Exact => return Ok(64.0 * f64::EPSILON),
            InnerMode::Rule(level) => {
                let breaks = breakpoints(self.space, None, self.r, false);
                let rule = rules::gauss_rule(&self.space.distance, x, self.r, level + 1, &breaks)?
                    .ok_or_else(|| Error::NotInCatalog("inner rule".into()))?;
                apply_rule(self.space, &rule, &|_| Ok(1.0))?.value
            }
            InnerMode::Cloud(count, seed) => {
                let rule = rules::cloud_rule(&self.space.distance, x, self.r, 4 * count, *seed, PointSet::Qmc)?;
                apply_rule(self.space, &rule, &|_| Ok(1.0))?.value
            }
        };
        Ok((coarse - fine).abs() / fine)
    }
}

/// `∫_{B_r(x)} g(y) w(y) / μ(B_r(y)) dy`, with `g` given as a field (optionally centered at `x`).
fn nested(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme, centered: bool) -> Result<Estimate> {
    space.check(x, r)?;
    space.require_points()?;
    u.check_dim(space.dim())?;
    if space.has_uniform_balls() || space.exp_affine_rate().is_some() {
        // w(y)/μ(B_r(y)) is the constant 1/K with K the Lebesgue-weighted measure of B_r(0)
        if let Some(e) = try_exact(scheme, || {
            let n = space.dim();
            let zero = vec![0.0; n];
            let k = ball_measure(space, &zero, r, &Scheme::Exact)?;
            let w0 = space.weight.eval(&zero);
            let flat = SpaceDescriptor::lebesgue(space.distance.clone());
            let num = exact_field_integral(&flat, u, x, r, centered)?;
            Ok(num.ratio(&k).scaled(w0))
        })? {
            return Ok(e);
        }
    }
    let inner = Inner::new(space, x, r, scheme.seed())?;
    let ux = if centered { u.eval(x) } else { 0.0 };
    let breaks = breakpoints(space, Some(u), r, true);
    let est = integrate_nodes(space, x, r, scheme, &breaks, inner.cost, &|y| Ok((u.eval(y) - ux) / inner.at(y)?))?;
    let rel = inner.relative_error(x)?;
    let mut out = est;
    out.error_bound += rel * est.value.abs();
    if !matches!(inner.mode, InnerMode::Const(_) | InnerMode::Exact) {
        out.method = out.method.max_with(if matches!(inner.mode, InnerMode::Cloud(..)) { Method::Qmc } else { Method::Gauss });
    }
    Ok(out)
}

/// `(A_r^* f)(x) = ∫_{B_r(x)} f(y) / μ(B_r(y)) dμ(y)`.
pub fn adjoint_averaging_apply(space: &SpaceDescriptor, f: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    nested(space, f, x, r, scheme, false)
}

/// `∫_{B_r(x)} (u(y) - u(x)) / μ(B_r(y)) dμ(y)`.
pub fn centered_adjoint_integral(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    nested(space, u, x, r, scheme, true)
}

/// `∫_{B_r(x)} g dμ` for an arbitrary closure, by node rules only.
pub fn integrate_closure(
    space: &SpaceDescriptor,
    x: &[f64],
    r: f64,
    scheme: &Scheme,
    breaks: &[f64],
    g: &dyn Fn(&[f64]) -> f64,
) -> Result<Estimate> {
    space.check(x, r)?;
    space.require_points()?;
    let scheme = if matches!(scheme, Scheme::Exact) { Scheme::default() } else { scheme.clone() };
    integrate_nodes(space, x, r, &scheme, breaks, 1, &|y| Ok(g(y)))
}
