//! Analytic r → 0 limits used as targets for the sweeps.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fields::{Fourier, RadialProfile, ScalarField, WeightDescriptor};
use crate::geometry::{ModelKind, ModelVolumeOracle, NormDescriptor};
use crate::moment::MomentMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PredictedValue {
    Scalar(f64),
    Matrix(MomentMatrix),
}

impl PredictedValue {
    pub fn scalar(&self) -> Option<f64> {
        match self {
            Self::Scalar(v) => Some(*v),
            Self::Matrix(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub quantity: String,
    pub value: PredictedValue,
    pub citation: String,
}

impl Prediction {
    fn scalar(quantity: &str, value: f64, citation: &str) -> Self {
        Self { quantity: quantity.into(), value: PredictedValue::Scalar(value), citation: citation.into() }
    }

    fn matrix(quantity: &str, m: MomentMatrix, citation: &str) -> Self {
        Self { quantity: quantity.into(), value: PredictedValue::Matrix(m), citation: citation.into() }
    }
}

/// Every citation tag a prediction can carry.
pub const CITATIONS: &[&str] = &[
    "unweighted-constant",
    "positive-weight-amv",
    "positive-weight-samv",
    "vanishing-weight-amv",
    "vanishing-weight-samv",
    "power-weight-amv",
    "power-weight-samv",
    "power-weight-moments",
    "separable-weight-amv",
    "separable-weight-literal",
    "norm-second-moment",
    "riemannian-deviation",
    "sub-riemannian-volume",
];

/// `⨍_{B_1} ξ_i ξ_j dξ` for the unit ball of an l^p norm.
pub fn norm_second_moment(norm: &NormDescriptor) -> Result<MomentMatrix> {
    norm.validate()?;
    let n = norm.n;
    let vol = norm.unit_ball_volume();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut k = vec![0u32; n];
        k[i] = 2;
        m[(i, i)] = norm.unit_ball_moment(&k) / vol;
    }
    Ok(MomentMatrix(m))
}

pub fn euclidean_moment(n: usize) -> MomentMatrix {
    MomentMatrix::scaled_identity(n, 1.0 / (n as f64 + 2.0))
}

/// `Δu(x) / (2n + 4)`.
pub fn predict_unweighted(u: &ScalarField, x: &[f64]) -> Result<Prediction> {
    let n = x.len() as f64;
    Ok(Prediction::scalar("amv", u.hessian(x)?.trace() / (2.0 * n + 4.0), "unweighted-constant"))
}

/// AMV and SAMV limits for a weight with `w(x) > 0` and moment matrix `M`.
pub fn predict_positive_weight(u: &ScalarField, w: &WeightDescriptor, x: &[f64], m: &MomentMatrix) -> Result<(Prediction, Prediction)> {
    if m.n() != x.len() {
        return invalid(format!("moment matrix is {}×{}, point has dimension {}", m.n(), m.n(), x.len()));
    }
    let (wv, gw, _) = w.derivatives(x)?;
    if !(wv > 0.0) {
        return Err(Error::Singular { what: "positive-weight formula (w(x) = 0)".into(), at: x.to_vec() });
    }
    let (_, gu, hu) = u.derivatives(x)?;
    let half = m.half_trace_with(&hu);
    let drift = m.bilinear(&gu, &gw) / wv;
    Ok((
        Prediction::scalar("amv", half + drift, "positive-weight-amv"),
        Prediction::scalar("samv", half + 0.5 * drift, "positive-weight-samv"),
    ))
}

/// `½ Tr(M_ν ∇²u(0))`, and the same with `M_ν̃` when given.
pub fn predict_vanishing_weight(u: &ScalarField, m_nu: &MomentMatrix, m_nu_tilde: Option<&MomentMatrix>) -> Result<(Prediction, Option<Prediction>)> {
    let n = m_nu.n();
    let h = u.hessian(&vec![0.0; n])?;
    let amv = Prediction::scalar("amv", m_nu.half_trace_with(&h), "vanishing-weight-amv");
    let samv = match m_nu_tilde {
        Some(mt) if mt.n() == n => Some(Prediction::scalar("samv", mt.half_trace_with(&h), "vanishing-weight-samv")),
        Some(_) => return invalid("moment matrices differ in dimension"),
        None => None,
    };
    Ok((amv, samv))
}

/// Limit moment matrices for `w = |x|^α`: `M_ν = (n+α)/(n(n+α+2)) I` and `M_ν̃ = ½(M_ν + I/(n+2))`.
pub fn power_weight_moments(n: usize, alpha: f64) -> Result<(MomentMatrix, MomentMatrix)> {
    if n == 0 || !(alpha > -(n as f64)) {
        return invalid("need n ≥ 1 and α > -n");
    }
    let nf = n as f64;
    let m_nu = MomentMatrix::scaled_identity(n, (nf + alpha) / (nf * (nf + alpha + 2.0)));
    let m_tilde = m_nu.add(&euclidean_moment(n)).scale(0.5);
    Ok((m_nu, m_tilde))
}

/// AMV and SAMV limits at 0 for `w = |x|^α`.
pub fn predict_power_weight(u: &ScalarField, n: usize, alpha: f64) -> Result<(Prediction, Prediction)> {
    let (m, mt) = power_weight_moments(n, alpha)?;
    let (a, s) = predict_vanishing_weight(u, &m, Some(&mt))?;
    let relabel = |mut p: Prediction, tag: &str| {
        p.citation = tag.into();
        p
    };
    Ok((relabel(a, "power-weight-amv"), relabel(s.unwrap(), "power-weight-samv")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparablePrediction {
    /// `⟨∇u(0), ∫ θ g dσ⟩ = 0`, read off the first Fourier modes.
    pub condition_holds: bool,
    /// `∫ θ g(θ) dσ` with σ normalized: `(a₁, b₁) / 2`.
    pub first_moment: [f64; 2],
    /// The AMV does not converge at 0.
    pub divergent: bool,
    /// Mass-normalized moment matrix and its AMV limit.
    pub moment: Option<MomentMatrix>,
    pub amv: Option<Prediction>,
    /// Moment matrix `c_f ∫ θθᵀ g dσ` taken without normalization, and its AMV.
    pub literal_moment: Option<MomentMatrix>,
    pub literal_amv: Option<Prediction>,
}

/// AMV limit at 0 for `w = f(|x|) g(x/|x|)` in the plane.
pub fn predict_separable(u: &ScalarField, radial: &RadialProfile, g: &Fourier) -> Result<SeparablePrediction> {
    let n = 2.0;
    let RadialProfile::Power { alpha: beta } = *radial;
    if !(beta + n > 0.0) {
        return invalid(format!("∫₀¹ ρ^(β+1) dρ diverges for β = {beta}"));
    }
    WeightDescriptor::Separable { radial: radial.clone(), fourier: g.clone() }.validate()?;
    let zero = [0.0, 0.0];
    let (_, gu, hu) = u.derivatives(&zero)?;
    let first = [0.5 * g.a(1), 0.5 * g.b(1)];
    let pairing = gu[0] * first[0] + gu[1] * first[1];
    let scale = (gu[0].abs() + gu[1].abs()) * (first[0].abs() + first[1].abs());
    let condition_holds = pairing.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) || scale == 0.0;
    if !condition_holds {
        return Ok(SeparablePrediction {
            condition_holds,
            first_moment: first,
            divergent: true,
            moment: None,
            amv: None,
            literal_moment: None,
            literal_amv: None,
        });
    }
    // ⨍ over the normalized circle: cos² → (a₀ + a₂/2)/2, sin² → (a₀ - a₂/2)/2, cos·sin → b₂/4
    let (a0, a2, b2) = (g.a0, g.a(2), g.b(2));
    let angular = MomentMatrix::from_rows(&[vec![0.5 * (a0 + 0.5 * a2), 0.25 * b2], vec![0.25 * b2, 0.5 * (a0 - 0.5 * a2)]])?;
    let c_f = 1.0 / (beta + n + 2.0);
    let radial_ratio = (beta + n) / (beta + n + 2.0);
    let moment = angular.scale(radial_ratio / a0);
    let literal = angular.scale(c_f);
    let amv = Prediction::scalar("amv", moment.half_trace_with(&hu), "separable-weight-amv");
    let literal_amv = Prediction::scalar("amv", literal.half_trace_with(&hu), "separable-weight-literal");
    Ok(SeparablePrediction {
        condition_holds,
        first_moment: first,
        divergent: false,
        moment: Some(moment),
        amv: Some(amv),
        literal_moment: Some(literal),
        literal_amv: Some(literal_amv),
    })
}

/// Limit of `v_r / r²`: `S / (6(n + 2))`.
pub fn predict_riemannian_deviation(n: usize, scalar_curvature: f64) -> Prediction {
    Prediction::scalar("deviation_coefficient", scalar_curvature / (6.0 * (n as f64 + 2.0)), "riemannian-deviation")
}

pub fn predict_model_deviation(model: ModelKind, n: usize) -> Result<Prediction> {
    let o = ModelVolumeOracle::new(model, n)?;
    Ok(predict_riemannian_deviation(n, o.scalar_curvature()))
}

/// `1 - c₁ κ r²`, the leading behaviour of `μ(B_r) / (ω_Q r^Q)` in sub-Riemannian settings.
/// No sub-Riemannian geometry stands behind it; the constants are supplied by the caller.
pub fn sub_riemannian_volume_ratio(c1: f64, kappa: f64, r: f64) -> Prediction {
    Prediction::scalar("volume_ratio", 1.0 - c1 * kappa * r * r, "sub-riemannian-volume")
}

pub fn moment_prediction(m: MomentMatrix, citation: &str) -> Prediction {
    Prediction::matrix("moment_matrix", m, citation)
}
