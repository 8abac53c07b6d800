//! Distances, norms, reference volumes and ball geometry.
//!
//! Everything here is a pure function of immutable descriptors. Ball
//! samplers live in [`crate::sampling`]; this module only describes the
//! balls (membership, bounding boxes, exact Lebesgue volumes where known).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};

/// Serde adapter for an l^p exponent: finite values as numbers, `"inf"` for ∞.
pub(crate) mod p_exponent {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*p)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) if matches!(s.as_str(), "inf" | "infinity" | "Infinity") => Ok(f64::INFINITY),
            Raw::Str(s) => Err(de::Error::custom(format!("bad l^p exponent {s:?}"))),
        }
    }
}

fn default_p() -> f64 {
    2.0
}

/// An l^p norm on ℝⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormDescriptor {
    pub n: usize,
    #[serde(with = "p_exponent", default = "default_p")]
    pub p: f64,
}

impl NormDescriptor {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        let d = Self { n, p };
        d.validate()?;
        Ok(d)
    }

    pub fn euclidean(n: usize) -> Self {
        Self { n, p: 2.0 }
    }

    pub fn sup(n: usize) -> Self {
        Self { n, p: f64::INFINITY }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return invalid("norm dimension must be positive");
        }
        if !(self.p >= 1.0) {
            return invalid(format!("l^p exponent must be >= 1, got {}", self.p));
        }
        Ok(())
    }

    pub fn is_euclidean(&self) -> bool {
        self.p == 2.0
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        let p = self.p;
        if p.is_infinite() {
            v.iter().fold(0.0, |m, x| m.max(x.abs()))
        } else if p == 1.0 {
            v.iter().map(|x| x.abs()).sum()
        } else if p == 2.0 {
            v.iter().map(|x| x * x).sum::<f64>().sqrt()
        } else {
            let m = v.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
            if m == 0.0 {
                return 0.0;
            }
            m * v.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.norm(&diff)
    }

    /// Exact volume of the open unit ball `{‖x‖_p < 1}`.
    pub fn unit_ball_volume(&self) -> f64 {
        self.unit_ball_moment(&vec![0; self.n])
    }

    /// `∫_{‖y‖_p<1} Π y_i^{k_i} dy`, zero whenever some power is odd.
    pub fn unit_ball_moment(&self, powers: &[u32]) -> f64 {
        if powers.iter().any(|k| k % 2 == 1) {
            return 0.0;
        }
        self.unit_ball_abs_moment(powers)
    }

    /// `∫_{‖y‖_p<1} Π |y_i|^{k_i} dy`.
    pub fn unit_ball_abs_moment(&self, powers: &[u32]) -> f64 {
        debug_assert_eq!(powers.len(), self.n);
        let n = self.n as f64;
        if self.p.is_infinite() {
            return powers.iter().map(|&k| 2.0 / (k as f64 + 1.0)).product();
        }
        let p = self.p;
        let total: f64 = powers.iter().map(|&k| k as f64).sum();
        let mut ln = n * (2.0f64).ln() - n * p.ln() - ln_gamma((total + n) / p + 1.0);
        for &k in powers {
            ln += ln_gamma((k as f64 + 1.0) / p);
        }
        ln.exp()
    }

    /// Smallest `c` with `|v|_2 <= c ‖v‖_p` for all v.
    pub fn euclidean_bound(&self) -> f64 {
        if self.p <= 2.0 {
            1.0
        } else if self.p.is_infinite() {
            (self.n as f64).sqrt()
        } else {
            (self.n as f64).powf(0.5 - 1.0 / self.p)
        }
    }
}

/// `ω_Q = π^{Q/2} / Γ(Q/2 + 1)`, the volume of the Euclidean unit ball for integer Q.
pub fn omega_q(q: f64) -> f64 {
    assert!(q > 0.0, "omega_Q needs Q > 0");
    (0.5 * q * PI.ln() - ln_gamma(0.5 * q + 1.0)).exp()
}

pub fn unit_ball_volume(norm: &NormDescriptor) -> f64 {
    norm.unit_ball_volume()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Euclidean,
    Sphere,
    Hyperbolic,
}

/// Ball-volume oracle of a constant-curvature model space with |K| = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelVolumeOracle {
    pub model: ModelKind,
    pub n: usize,
}

// Gauss-Legendre nodes/weights on [-1, 1], 20 points.
const GL20: [(f64, f64); 10] = [
    (0.076_526_521_133_497_33, 0.152_753_387_130_725_85),
    (0.227_785_851_141_645_08, 0.149_172_986_472_603_75),
    (0.373_706_088_715_419_56, 0.142_096_109_318_382_05),
    (0.510_867_001_950_827_1, 0.131_688_638_449_176_63),
    (0.636_053_680_726_515_0, 0.118_194_531_961_518_42),
    (0.746_331_906_460_150_8, 0.101_930_119_817_240_44),
    (0.839_116_971_822_218_8, 0.083_276_741_576_704_75),
    (0.912_234_428_251_326_0, 0.062_672_048_334_109_06),
    (0.963_971_927_277_913_8, 0.040_601_429_800_386_94),
    (0.993_128_599_185_094_9, 0.017_614_007_139_152_12),
];

/// `∫_0^1 f(s) ds` by 20-point Gauss-Legendre.
pub(crate) fn gauss_legendre_unit(f: impl Fn(f64) -> f64) -> f64 {
    GL20.iter()
        .map(|&(x, w)| w * (f(0.5 * (1.0 + x)) + f(0.5 * (1.0 - x))))
        .sum::<f64>()
        * 0.5
}

/// `sin(x)/x - 1` without cancellation.
fn sinc_minus_one(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // alternating series -x²/3! + x⁴/5! - ...
        let x2 = x * x;
        let mut term = -x2 / 6.0;
        let mut sum = term;
        let mut k = 2.0;
        while term.abs() > 1e-20 * sum.abs() {
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        x.sin() / x - 1.0
    }
}

/// `sinh(x)/x - 1` without cancellation.
fn sinhc_minus_one(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let x2 = x * x;
        let mut term = x2 / 6.0;
        let mut sum = term;
        let mut k = 2.0;
        while term.abs() > 1e-20 * sum.abs() {
            term *= x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        x.sinh() / x - 1.0
    }
}

impl ModelVolumeOracle {
    pub fn new(model: ModelKind, n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("model dimension must be positive");
        }
        Ok(Self { model, n })
    }

    /// Largest admissible radius (exclusive).
    pub fn max_radius(&self) -> f64 {
        match self.model {
            ModelKind::Sphere => PI,
            _ => f64::INFINITY,
        }
    }

    /// Scalar curvature of the unit model: ±n(n-1), or 0.
    pub fn scalar_curvature(&self) -> f64 {
        let n = self.n as f64;
        match self.model {
            ModelKind::Euclidean => 0.0,
            ModelKind::Sphere => n * (n - 1.0),
            ModelKind::Hyperbolic => -n * (n - 1.0),
        }
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if !(r > 0.0) || r >= self.max_radius() {
            return Err(Error::Domain(format!(
                "radius {r} outside (0, {}) for {:?}",
                self.max_radius(),
                self.model
            )));
        }
        Ok(())
    }

    /// `1 - vol(B_r) / (ω_n rⁿ)`, computed without cancellation for small r.
    pub fn deviation(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        let m = (self.n - 1) as i32;
        if m == 0 || self.model == ModelKind::Euclidean {
            return Ok(0.0);
        }
        let n = self.n as f64;
        // vol / (ω_n rⁿ) = n ∫_0^1 s^{n-1} (S(rs)/(rs))^{n-1} ds with S = sin or sinh
        let one_minus = |s: f64| {
            let x = r * s;
            let c = match self.model {
                ModelKind::Sphere => sinc_minus_one(x),
                _ => sinhc_minus_one(x),
            };
            // 1 - (1+c)^m
            -(m as f64 * c.ln_1p()).exp_m1()
        };
        Ok(n * gauss_legendre_unit(|s| s.powi(m) * one_minus(s)))
    }

    /// Exact geodesic ball volume.
    pub fn volume(&self, r: f64) -> Result<f64> {
        let dev = self.deviation(r)?;
        Ok(omega_q(self.n as f64) * r.powi(self.n as i32) * (1.0 - dev))
    }
}

pub fn model_ball_volume(oracle: &ModelVolumeOracle, r: f64) -> Result<f64> {
    oracle.volume(r)
}

/// Metric on a Euclidean domain, or a model space known only through ball volumes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistanceDescriptor {
    Norm {
        n: usize,
        #[serde(with = "p_exponent", default = "default_p")]
        p: f64,
    },
    /// `‖Φ_α(x) - Φ_α(y)‖_p` on the open positive orthant, `Φ_α(x)_i = x_i^{α_i}`.
    AlphaWarped {
        alpha: Vec<u8>,
        #[serde(with = "p_exponent", default = "default_p")]
        p: f64,
    },
    /// The catalogued asymmetric-ball metric on ℝ with `B_r(0) = (-r, 2r)`.
    AsymmetricHalfLine,
    Model {
        model: ModelKind,
        n: usize,
    },
}

impl DistanceDescriptor {
    pub fn euclidean(n: usize) -> Self {
        Self::Norm { n, p: 2.0 }
    }

    pub fn from_norm(norm: NormDescriptor) -> Self {
        Self::Norm { n: norm.n, p: norm.p }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Norm { n, p } => NormDescriptor { n: *n, p: *p }.validate(),
            Self::AlphaWarped { alpha, p } => {
                if alpha.is_empty() || alpha.iter().any(|a| !matches!(a, 1 | 2)) {
                    return invalid("alpha must be a nonempty vector over {1, 2}");
                }
                NormDescriptor { n: alpha.len(), p: *p }.validate()
            }
            Self::AsymmetricHalfLine => Ok(()),
            Self::Model { n, .. } => ModelVolumeOracle::new(ModelKind::Euclidean, *n).map(|_| ()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Norm { n, .. } | Self::Model { n, .. } => *n,
            Self::AlphaWarped { alpha, .. } => alpha.len(),
            Self::AsymmetricHalfLine => 1,
        }
    }

    /// The underlying norm for norm-induced and warped distances.
    pub fn norm(&self) -> Option<NormDescriptor> {
        match self {
            Self::Norm { n, p } => Some(NormDescriptor { n: *n, p: *p }),
            Self::AlphaWarped { alpha, p } => Some(NormDescriptor { n: alpha.len(), p: *p }),
            _ => None,
        }
    }

    pub fn is_norm_induced(&self) -> bool {
        matches!(self, Self::Norm { .. })
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return invalid(format!("expected a point of dimension {}, got {}", self.dim(), x.len()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return invalid("non-finite coordinate");
        }
        if let Self::AlphaWarped { .. } = self {
            if x.iter().any(|&v| v <= 0.0) {
                return Err(Error::Domain(format!("{x:?} is not in the open positive orthant")));
            }
        }
        if let Self::Model { .. } = self {
            return invalid("model spaces expose ball volumes only, not points");
        }
        Ok(())
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.distance_unchecked(x, y))
    }

    pub(crate) fn distance_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Self::Norm { n, p } => NormDescriptor { n: *n, p: *p }.distance(x, y),
            Self::AlphaWarped { alpha, p } => {
                let diff: Vec<f64> = alpha
                    .iter()
                    .zip(x.iter().zip(y))
                    .map(|(&a, (&xi, &yi))| if a == 2 { (xi - yi) * (xi + yi) } else { xi - yi })
                    .collect();
                NormDescriptor { n: alpha.len(), p: *p }.norm(&diff)
            }
            Self::AsymmetricHalfLine => asymmetric_half_line(x[0], y[0]),
            Self::Model { .. } => f64::NAN,
        }
    }

    /// Axis-aligned box containing `B_r(center)`. Errors if the ball leaves the domain.
    pub fn bounding_box(&self, center: &[f64], r: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_point(center)?;
        if !(r > 0.0) || !r.is_finite() {
            return invalid(format!("radius must be positive and finite, got {r}"));
        }
        match self {
            Self::Norm { .. } => Ok((
                center.iter().map(|c| c - r).collect(),
                center.iter().map(|c| c + r).collect(),
            )),
            Self::AlphaWarped { alpha, .. } => {
                let mut lo = Vec::with_capacity(alpha.len());
                let mut hi = Vec::with_capacity(alpha.len());
                for (&a, &c) in alpha.iter().zip(center) {
                    let phi = if a == 2 { c * c } else { c };
                    if phi - r <= 0.0 {
                        return Err(Error::Domain(format!(
                            "ball of radius {r} at {center:?} touches the orthant boundary"
                        )));
                    }
                    let inv = |t: f64| if a == 2 { t.sqrt() } else { t };
                    lo.push(inv(phi - r));
                    hi.push(inv(phi + r));
                }
                Ok((lo, hi))
            }
            Self::AsymmetricHalfLine => {
                let (a, b) = asymmetric_ball(center[0], r);
                Ok((vec![a], vec![b]))
            }
            Self::Model { .. } => unreachable!(),
        }
    }

    /// Exact Lebesgue volume of `B_r(center)` when it is known in closed form.
    pub fn exact_ball_volume(&self, center: &[f64], r: f64) -> Option<f64> {
        match self {
            Self::Norm { n, p } => {
                Some(NormDescriptor { n: *n, p: *p }.unit_ball_volume() * r.powi(*n as i32))
            }
            Self::AsymmetricHalfLine => {
                let (a, b) = asymmetric_ball(center[0], r);
                Some(b - a)
            }
            Self::AlphaWarped { alpha, .. } if alpha.len() == 1 => {
                let (lo, hi) = self.bounding_box(center, r).ok()?;
                Some(hi[0] - lo[0])
            }
            _ => None,
        }
    }

    /// In one dimension every ball is an interval; returns it.
    pub fn ball_interval(&self, center: &[f64], r: f64) -> Option<(f64, f64)> {
        if self.dim() != 1 || matches!(self, Self::Model { .. }) {
            return None;
        }
        let (lo, hi) = self.bounding_box(center, r).ok()?;
        Some((lo[0], hi[0]))
    }

    pub fn contains(&self, center: &[f64], r: f64, y: &[f64]) -> bool {
        self.distance_unchecked(center, y) < r
    }
}

fn asymmetric_half_line(x: f64, y: f64) -> f64 {
    match (x <= 0.0, y <= 0.0) {
        (true, true) => (x - y).abs(),
        (false, false) => 0.5 * (x - y).abs(),
        (true, false) => 0.5 * y - x,
        (false, true) => 0.5 * x - y,
    }
}

/// The open interval `B_r(x)` for the asymmetric half-line metric.
fn asymmetric_ball(x: f64, r: f64) -> (f64, f64) {
    if x <= 0.0 {
        if x + r <= 0.0 {
            (x - r, x + r)
        } else {
            (x - r, 2.0 * (x + r))
        }
    } else if x >= 2.0 * r {
        (x - 2.0 * r, x + 2.0 * r)
    } else {
        (0.5 * x - r, x + 2.0 * r)
    }
}

pub fn distance(desc: &DistanceDescriptor, x: &[f64], y: &[f64]) -> Result<f64> {
    desc.distance(x, y)
}

/// Whether `center + v ∈ B_r(center) ⇔ center - v ∈ B_r(center)` holds for this `v`.
pub fn symmetric_ball_holds(desc: &DistanceDescriptor, center: &[f64], v: &[f64], r: f64) -> bool {
    let plus: Vec<f64> = center.iter().zip(v).map(|(c, d)| c + d).collect();
    let minus: Vec<f64> = center.iter().zip(v).map(|(c, d)| c - d).collect();
    let inside = |y: &[f64]| {
        if let DistanceDescriptor::AlphaWarped { .. } = desc {
            if y.iter().any(|&t| t <= 0.0) {
                return false;
            }
        }
        desc.contains(center, r, y)
    };
    inside(&plus) == inside(&minus)
}
