//! Finite-radius AMV/SAMV operators and distortion diagnostics.

use std::cell::RefCell;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fields::{Polynomial, ScalarField, WeightDescriptor};
use crate::geometry::{omega_q, DistanceDescriptor, NormDescriptor};
use crate::moment::MomentMatrix;
use crate::quadrature::{
    adjoint_averaging_apply, ball_integral, ball_measure, breakpoints, centered_adjoint_integral, centered_integral,
    integrate_closure, Estimate, Method, Scheme, SpaceDescriptor,
};
use crate::sampling::{sample_ball, PointSet};

fn exact_zero() -> Estimate {
    Estimate { value: 0.0, error_bound: 0.0, method: Method::Exact, nodes: 0 }
}

/// Rejects base points where the field has no continuous representative.
fn check_continuity(u: &ScalarField, x: &[f64]) -> Result<()> {
    if matches!(u, ScalarField::Sign) && x.first() == Some(&0.0) {
        return Err(Error::Singular { what: "sign field (discontinuous)".into(), at: x.to_vec() });
    }
    Ok(())
}

fn amv_unchecked(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    let num = centered_integral(space, u, x, r, scheme)?;
    let den = ball_measure(space, x, r, scheme)?;
    Ok(num.ratio(&den).scaled(1.0 / (r * r)))
}

/// `r⁻² ⨍_{B_r(x)} (u(y) - u(x)) dμ(y)`.
pub fn amv_at_radius(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    check_continuity(u, x)?;
    amv_unchecked(space, u, x, r, scheme)
}

/// SAMV together with the two halves it is assembled from.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SamvParts {
    pub samv: Estimate,
    pub amv: Estimate,
    /// `r⁻² ∫_{B_r(x)} (u(y) - u(x)) / μ(B_r(y)) dμ(y)`.
    pub adjoint_term: Estimate,
}

fn samv_unchecked(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<SamvParts> {
    let amv = amv_unchecked(space, u, x, r, scheme)?;
    let adjoint_term = centered_adjoint_integral(space, u, x, r, scheme)?.scaled(1.0 / (r * r));
    let samv = amv.plus(&adjoint_term).scaled(0.5);
    Ok(SamvParts { samv, amv, adjoint_term })
}

pub fn samv_parts(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<SamvParts> {
    check_continuity(u, x)?;
    samv_unchecked(space, u, x, r, scheme)
}

/// `(2r²)⁻¹ ⨍_{B_r(x)} (u(y) - u(x)) (1 + μ(B_r(x)) / μ(B_r(y))) dμ(y)`.
pub fn samv_at_radius(space: &SpaceDescriptor, u: &ScalarField, x: &[f64], r: f64, scheme: &Scheme) -> Result<Estimate> {
    Ok(samv_parts(space, u, x, r, scheme)?.samv)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Deviation {
    pub v_r: f64,
    pub theta_r: f64,
    /// Density of `μ_r` against `μ` at `x`: `(1 - θ_r) / r`.
    pub mu_r_density: f64,
}

/// `v_r = 1 - μ(B_r(x)) / (ω_n rⁿ)` and `θ_r = μ(B_r(x)) / (ω_Q r^Q)`; `Q` defaults to `n`.
pub fn deviation_and_theta(space: &SpaceDescriptor, x: &[f64], r: f64, q: Option<f64>, scheme: &Scheme) -> Result<Deviation> {
    let n = space.dim();
    let q = q.unwrap_or(n as f64);
    if !(q > 0.0) {
        return invalid("Ahlfors exponent Q must be positive");
    }
    let same_q = q == n as f64;
    if let Some(o) = space.model() {
        space.check(x, r)?;
        let v_r = o.deviation(r)?;
        let theta_r = if same_q { 1.0 - v_r } else { o.volume(r)? / (omega_q(q) * r.powf(q)) };
        let mu_r_density = if same_q { v_r / r } else { (1.0 - theta_r) / r };
        return Ok(Deviation { v_r, theta_r, mu_r_density });
    }
    if let (DistanceDescriptor::Norm { p, .. }, WeightDescriptor::Constant { c }) = (&space.distance, &space.weight) {
        if *p == 2.0 {
            space.check(x, r)?;
            let v_r = 1.0 - c;
            let theta_r = if same_q { *c } else { c * omega_q(n as f64) * r.powi(n as i32) / (omega_q(q) * r.powf(q)) };
            return Ok(Deviation { v_r, theta_r, mu_r_density: (1.0 - theta_r) / r });
        }
    }
    let m = ball_measure(space, x, r, scheme)?.value;
    let v_r = 1.0 - m / (omega_q(n as f64) * r.powi(n as i32));
    let theta_r = m / (omega_q(q) * r.powf(q));
    Ok(Deviation { v_r, theta_r, mu_r_density: (1.0 - theta_r) / r })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSample {
    pub y: Vec<f64>,
    pub delta: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistortionReport {
    pub x: Vec<f64>,
    pub r: f64,
    pub delta_samples: Vec<DeltaSample>,
    /// `⨍_{B_r(x)} |δ_r(x, ·)| dμ`.
    pub z_r: Estimate,
    /// Sampled sup of `|δ_r(x, ·)|` (a lower bound for the essential sup).
    pub eps: f64,
    /// The distortion vanishes identically (equal ball measures).
    pub identically_zero: bool,
    pub v_r: f64,
    pub theta_r: f64,
    /// `z_r` for Lebesgue measure on the same distance, averaged against Lebesgue measure.
    pub z_ln_r: Estimate,
    /// Sampled `max μ(B_r(x)) / μ(B_r(y))` over `y ∈ B_r(x)`.
    pub comparability: f64,
    /// `z_r` exceeds the sampled sup by more than its quadrature error.
    pub sup_slack_flag: bool,
}

/// Points at distance `(1 - 10⁻⁶) r` from `x` along a fixed set of directions.
fn boundary_probes(dist: &DistanceDescriptor, x: &[f64], r: f64) -> Result<Vec<Vec<f64>>> {
    let n = x.len();
    let (lo, hi) = dist.bounding_box(x, r)?;
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        for s in [-1.0, 1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            dirs.push(e);
        }
    }
    if n == 2 {
        for k in 0..32 {
            let t = (k as f64 + 0.5) * std::f64::consts::PI / 16.0;
            dirs.push(vec![t.cos(), t.sin()]);
        }
    } else if n <= 4 {
        for mask in 0..(1u32 << n) {
            dirs.push((0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect());
        }
    }
    let target = (1.0 - 1e-6) * r;
    let reach = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(dirs.len());
    for e in dirs {
        let at = |t: f64| -> Vec<f64> { x.iter().zip(&e).map(|(a, d)| a + t * d).collect() };
        // distance grows monotonically along rays for every point metric in the catalog
        let (mut a, mut b) = (0.0, reach);
        if dist.distance_unchecked(x, &at(b)) < target {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if dist.distance_unchecked(x, &at(m)) < target {
                a = m;
            } else {
                b = m;
            }
            if b - a <= 1e-15 * reach {
                break;
            }
        }
        let y = at(a);
        if dist.contains(x, r, &y) {
            out.push(y);
        }
    }
    Ok(out)
}

/// Averages `|δ_r(x, ·)|` over `B_r(x)` against the measure of `space`.
fn average_abs_distortion(space: &SpaceDescriptor, x: &[f64], r: f64, scheme: &Scheme, mu_x: f64) -> Result<Estimate> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let g = |y: &[f64]| match ball_measure(space, y, r, scheme) {
        Ok(m) => (1.0 - mu_x / m.value).abs(),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let breaks = breakpoints(space, None, r, true);
    let num = integrate_closure(space, x, r, scheme, &breaks, &g);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let den = ball_measure(space, x, r, scheme)?;
    Ok(num?.ratio(&den))
}

/// Distortion `δ_r(x, y) = 1 - μ(B_r(x)) / μ(B_r(y))` sampled over `B_r(x)`, with its averages.
pub fn distortion_report(space: &SpaceDescriptor, x: &[f64], r: f64, scheme: &Scheme, budget: usize) -> Result<DistortionReport> {
    space.validate()?;
    space.check(x, r)?;
    let dev = deviation_and_theta(space, x, r, None, scheme)?;
    if space.model().is_some() {
        return Ok(DistortionReport {
            x: x.to_vec(),
            r,
            delta_samples: vec![],
            z_r: exact_zero(),
            eps: 0.0,
            identically_zero: true,
            v_r: dev.v_r,
            theta_r: dev.theta_r,
            z_ln_r: exact_zero(),
            comparability: 1.0,
            sup_slack_flag: false,
        });
    }
    if budget == 0 {
        return invalid("distortion sample budget must be positive");
    }
    let dist = &space.distance;
    let cloud = sample_ball(dist, x, r, budget, scheme.seed(), PointSet::Qmc)?;
    let mut points = cloud.points;
    points.extend(boundary_probes(dist, x, r)?);
    let uniform = space.has_uniform_balls();
    let flat = SpaceDescriptor::lebesgue(dist.clone());
    let flat_uniform = flat.has_uniform_balls();

    let mu_x = ball_measure(space, x, r, scheme)?.value;
    let mut samples = Vec::with_capacity(points.len());
    let mut eps: f64 = 0.0;
    let mut comparability: f64 = 1.0;
    for y in points {
        let delta = if uniform { 0.0 } else { 1.0 - mu_x / ball_measure(space, &y, r, scheme)?.value };
        eps = eps.max(delta.abs());
        comparability = comparability.max(1.0 - delta);
        samples.push(DeltaSample { y, delta });
    }
    let z_r = if uniform { exact_zero() } else { average_abs_distortion(space, x, r, scheme, mu_x)? };
    let z_ln_r = if flat_uniform {
        exact_zero()
    } else {
        let leb_x = ball_measure(&flat, x, r, scheme)?.value;
        average_abs_distortion(&flat, x, r, scheme, leb_x)?
    };
    let sup_slack_flag = z_r.value > eps + z_r.error_bound;
    Ok(DistortionReport {
        x: x.to_vec(),
        r,
        delta_samples: samples,
        z_r,
        eps,
        identically_zero: uniform,
        v_r: dev.v_r,
        theta_r: dev.theta_r,
        z_ln_r,
        comparability,
        sup_slack_flag,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingVariant {
    Amv,
    Samv,
    MuR,
    AbsMuR,
}

/// `∫ φ · (operator at radius r) dμ` for a bump test function `φ`.
pub fn weak_pairing(
    space: &SpaceDescriptor,
    u: &ScalarField,
    phi: &ScalarField,
    r: f64,
    variant: PairingVariant,
    scheme: &Scheme,
) -> Result<Estimate> {
    space.validate()?;
    let ScalarField::Bump { center, radius, .. } = phi else {
        return invalid("weak pairings need a compactly supported bump test function");
    };
    let n = space.dim();
    phi.check_dim(n)?;
    u.check_dim(n)?;
    if space.model().is_some() {
        return invalid("weak pairings need point quadrature; model spaces only expose ball volumes");
    }
    // every ball B_r(x) with x in the support must lie in the domain
    for i in 0..n {
        for s in [-1.0, 1.0] {
            let mut p = center.clone();
            p[i] += s * radius * (1.0 - 1e-12);
            space.check(&p, r).map_err(|e| Error::Domain(format!("support of the test function escapes the domain: {e}")))?;
        }
    }
    if matches!(variant, PairingVariant::MuR | PairingVariant::AbsMuR) {
        if let (DistanceDescriptor::Norm { p, .. }, WeightDescriptor::Constant { c }) = (&space.distance, &space.weight) {
            if *p == 2.0 && *c == 1.0 {
                return Ok(exact_zero());
            }
        }
    }
    let support = SpaceDescriptor::new(DistanceDescriptor::euclidean(n), space.weight.clone())?;
    let inner_err = RefCell::new(0.0f64);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let g = |x: &[f64]| {
        let ph = phi.eval(x);
        if ph == 0.0 {
            return 0.0;
        }
        let v = match variant {
            PairingVariant::Amv => amv_unchecked(space, u, x, r, scheme),
            PairingVariant::Samv => samv_unchecked(space, u, x, r, scheme).map(|p| p.samv),
            PairingVariant::MuR | PairingVariant::AbsMuR => deviation_and_theta(space, x, r, None, scheme).map(|d| {
                let m = if variant == PairingVariant::MuR { d.mu_r_density } else { d.mu_r_density.abs() };
                Estimate { value: m, error_bound: 0.0, method: Method::Exact, nodes: 0 }
            }),
        };
        match v {
            Ok(e) => {
                let mut m = inner_err.borrow_mut();
                *m = m.max(e.error_bound);
                ph * e.value
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let mut breaks = breakpoints(&support, Some(phi), r, true);
    if matches!(u, ScalarField::Sign) {
        breaks.extend([-r, r]);
    }
    let est = integrate_closure(&support, center, *radius, scheme, &breaks, &g);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let mut est = est?;
    if est.value.is_nan() {
        return Err(Error::InvalidInput("pairing integrand is not finite".into()));
    }
    // inner quadrature errors enter through ∫|φ| dμ ≤ μ(supp φ)
    let mass = ball_measure(&support, center, *radius, &Scheme::default())?.value;
    est.error_bound += inner_err.into_inner() * mass;
    Ok(est)
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupMoments {
    pub r: f64,
    /// `r⁻² ⨍_{B_r(0)} x_i x_j dμ`.
    pub m_nu_r: MomentMatrix,
    /// Same moments against `w̃ = (w/2)(1 + μ(B_r(0)) / μ(B_r(·)))`, divided by `μ(B_r(0))`.
    pub m_nu_tilde_r: MomentMatrix,
    /// Total mass of the first measure (1 up to quadrature error).
    pub nu_mass: f64,
    /// Total mass of the reweighted measure: `(1 + A_r^* 1(0)) / 2`.
    pub nu_tilde_mass: f64,
    /// Largest quadrature error bound among the entries.
    pub error_bound: f64,
}

fn coordinate_product(n: usize, i: usize, j: usize) -> ScalarField {
    let mut k = vec![0u32; n];
    k[i] += 1;
    k[j] += 1;
    ScalarField::Polynomial(Polynomial::monomial(&k, 1.0))
}

/// Second moments of the blow-up probability measures at the origin.
pub fn blowup_moments(w: &WeightDescriptor, norm: &NormDescriptor, r: f64, scheme: &Scheme) -> Result<BlowupMoments> {
    norm.validate()?;
    let n = norm.n;
    let space = SpaceDescriptor::new(DistanceDescriptor::from_norm(*norm), w.clone())?;
    let zero = vec![0.0; n];
    let mass = ball_measure(&space, &zero, r, scheme)?;
    let one = ScalarField::Polynomial(Polynomial::constant(n, 1.0));
    let nu_mass = ball_integral(&space, &one, &zero, r, scheme)?.ratio(&mass);
    let adj_one = adjoint_averaging_apply(&space, &one, &zero, r, scheme)?;
    let mut err = nu_mass.error_bound.max(adj_one.error_bound);
    let mut m = vec![vec![0.0; n]; n];
    let mut mt = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let f = coordinate_product(n, i, j);
            let a = ball_integral(&space, &f, &zero, r, scheme)?.ratio(&mass).scaled(1.0 / (r * r));
            let b = adjoint_averaging_apply(&space, &f, &zero, r, scheme)?.scaled(1.0 / (r * r));
            let t = a.plus(&b).scaled(0.5);
            err = err.max(a.error_bound).max(t.error_bound);
            m[i][j] = a.value;
            m[j][i] = a.value;
            mt[i][j] = t.value;
            mt[j][i] = t.value;
        }
    }
    Ok(BlowupMoments {
        r,
        m_nu_r: MomentMatrix::from_rows(&m)?,
        m_nu_tilde_r: MomentMatrix::from_rows(&mt)?,
        nu_mass: nu_mass.value,
        nu_tilde_mass: 0.5 * (1.0 + adj_one.value),
        error_bound: err,
    })
}

/// `M^r(x)_{ij} = r⁻² ⨍_{B_r(x)} (y - x)_i (y - x)_j dy` (Lebesgue average over the metric ball).
pub fn empirical_second_moment(dist: &DistanceDescriptor, x: &[f64], r: f64, scheme: &Scheme) -> Result<(MomentMatrix, f64)> {
    dist.validate()?;
    let space = SpaceDescriptor::lebesgue(dist.clone());
    let n = space.dim();
    let vol = ball_measure(&space, x, r, scheme)?;
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let mut m = vec![vec![0.0; n]; n];
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let ScalarField::Polynomial(p) = coordinate_product(n, i, j) else { unreachable!() };
            let f = ScalarField::Polynomial(p.shift(&neg));
            let e = ball_integral(&space, &f, x, r, scheme)?.ratio(&vol).scaled(1.0 / (r * r));
            err = err.max(e.error_bound);
            m[i][j] = e.value;
            m[j][i] = e.value;
        }
    }
    Ok((MomentMatrix::from_rows(&m)?, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn modulus_sq(n: usize) -> ScalarField {
        let mut p = Polynomial::zero(n);
        for i in 0..n {
            let mut k = vec![0; n];
            k[i] = 2;
            p = p.add(&Polynomial::monomial(&k, 1.0));
        }
        ScalarField::Polynomial(p)
    }

    #[test]
    fn amv_of_modulus_squared() {
        let space = SpaceDescriptor::lebesgue(DistanceDescriptor::euclidean(2));
        for r in [1.0, 0.1, 0.013] {
            let e = amv_at_radius(&space, &modulus_sq(2), &[0.3, -0.7], r, &Scheme::default()).unwrap();
            assert_relative_eq!(e.value, 0.5, max_relative = 1e-13);
            assert_eq!(e.error_bound, 0.0);
        }
    }

    #[test]
    fn sign_field_amv_rows() {
        let space = SpaceDescriptor::lebesgue(DistanceDescriptor::euclidean(1));
        let v = |r: f64| amv_at_radius(&space, &ScalarField::Sign, &[0.5], r, &Scheme::default()).unwrap().value;
        assert_relative_eq!(v(1.0), -0.5, max_relative = 1e-14);
        assert_eq!(v(0.25), 0.0);
        assert!(amv_at_radius(&space, &ScalarField::Sign, &[0.0], 0.1, &Scheme::default()).is_err());
    }

    #[test]
    fn samv_equals_amv_on_norm_balls() {
        let space = SpaceDescriptor::lebesgue(DistanceDescriptor::Norm { n: 2, p: f64::INFINITY });
        let u = ScalarField::Polynomial(Polynomial::new(2, &[crate::Term { powers: vec![3, 1], coef: 1.0 }]).unwrap());
        let a = amv_at_radius(&space, &u, &[0.2, 0.4], 0.1, &Scheme::default()).unwrap();
        let s = samv_at_radius(&space, &u, &[0.2, 0.4], 0.1, &Scheme::default()).unwrap();
        assert_relative_eq!(a.value, s.value, max_relative = 1e-12);
    }

    #[test]
    fn exp_weight_distortion() {
        let space = SpaceDescriptor::new(DistanceDescriptor::euclidean(1), WeightDescriptor::ExpLinear { a: vec![1.0] }).unwrap();
        let rep = distortion_report(&space, &[0.0], 0.1, &Scheme::default(), 256).unwrap();
        // δ(0, y) = 1 - e^{-y}; the sup sits near y = -r
        assert_relative_eq!(rep.eps, (0.1f64 * (1.0 - 1e-6)).exp() - 1.0, max_relative = 1e-6);
        let m = |y: f64| ball_measure(&space, &[y], 0.3, &Scheme::Exact).unwrap().value;
        assert_relative_eq!(1.0 - m(0.0) / m(0.05), 1.0 - (-0.05f64).exp(), max_relative = 1e-12);
        // ⨍ |1 - e^{-y}| e^y dy / ⨍ e^y over (-r, r)
        let r = 0.1f64;
        let exact = ((r.exp() - 1.0 - r) + ((-r).exp() - 1.0 + r)) / (r.exp() - (-r).exp());
        assert_relative_eq!(rep.z_r.value, exact, max_relative = 1e-9);
        assert!(rep.z_r.value <= rep.eps && !rep.sup_slack_flag);
        assert_eq!(rep.z_ln_r.value, 0.0);
    }

    #[test]
    fn translation_invariant_distortion_is_zero() {
        for p in [1.0, 2.0, f64::INFINITY] {
            let space = SpaceDescriptor::lebesgue(DistanceDescriptor::Norm { n: 2, p });
            let rep = distortion_report(&space, &[0.3, 0.1], 0.2, &Scheme::default(), 64).unwrap();
            assert!(rep.identically_zero && rep.eps == 0.0 && rep.z_r.value == 0.0);
        }
    }

    #[test]
    fn warped_lebesgue_distortion_is_positive() {
        let space = SpaceDescriptor::lebesgue(DistanceDescriptor::AlphaWarped { alpha: vec![2], p: 2.0 });
        let rep = distortion_report(&space, &[1.0], 0.2, &Scheme::default(), 64).unwrap();
        assert!(rep.z_ln_r.value > 0.0 && rep.eps > 0.0);
        assert_relative_eq!(rep.z_ln_r.value, rep.z_r.value, max_relative = 1e-9);
    }

    #[test]
    fn deviation_on_models_and_flat_space() {
        let flat = SpaceDescriptor::lebesgue(DistanceDescriptor::euclidean(3));
        let d = deviation_and_theta(&flat, &[0.0; 3], 0.3, None, &Scheme::default()).unwrap();
        assert_eq!((d.v_r, d.theta_r, d.mu_r_density), (0.0, 1.0, 0.0));
        let sphere = SpaceDescriptor::lebesgue(DistanceDescriptor::Model { model: crate::ModelKind::Sphere, n: 2 });
        let d = deviation_and_theta(&sphere, &[], 0.3, None, &Scheme::default()).unwrap();
        let exact = 1.0 - 2.0 * (1.0 - 0.3f64.cos()) / 0.09;
        assert_relative_eq!(d.v_r, exact, max_relative = 1e-10);
        assert!((d.v_r / 0.09 - 1.0 / 12.0).abs() < 0.0035 / 12.0);
    }

    #[test]
    fn blowup_moments_power_weight() {
        let norm = NormDescriptor::euclidean(2);
        let b = blowup_moments(&WeightDescriptor::PowerAlpha { alpha: 2.0 }, &norm, 0.1, &Scheme::default()).unwrap();
        assert!(b.m_nu_r.max_abs_diff(&MomentMatrix::scaled_identity(2, 1.0 / 3.0)) < 1e-13);
        let lt = 0.5 * (1.0 / 3.0 + 3f64.ln() / 8.0);
        assert!(b.m_nu_tilde_r.max_abs_diff(&MomentMatrix::scaled_identity(2, lt)) < 1e-6, "{:?}", b.m_nu_tilde_r);
        assert_relative_eq!(b.nu_tilde_mass, 1.0 - 0.25 * 3f64.ln(), max_relative = 1e-6);
        let flat = blowup_moments(&WeightDescriptor::lebesgue(), &NormDescriptor::euclidean(3), 0.5, &Scheme::default()).unwrap();
        assert!(flat.m_nu_r.max_abs_diff(&MomentMatrix::scaled_identity(3, 0.2)) < 1e-14);
        assert!(flat.m_nu_tilde_r.max_abs_diff(&MomentMatrix::scaled_identity(3, 0.2)) < 1e-14);
    }

    #[test]
    fn second_moments_of_norm_balls() {
        let s = Scheme::default();
        let (m, _) = empirical_second_moment(&DistanceDescriptor::euclidean(3), &[0.1, 0.2, 0.3], 0.7, &s).unwrap();
        assert!(m.max_abs_diff(&MomentMatrix::scaled_identity(3, 0.2)) < 1e-13);
        let (m, _) = empirical_second_moment(&DistanceDescriptor::Norm { n: 2, p: f64::INFINITY }, &[1.0, 2.0], 0.3, &s).unwrap();
        assert!(m.max_abs_diff(&MomentMatrix::scaled_identity(2, 1.0 / 3.0)) < 1e-13);
        let (m, _) = empirical_second_moment(&DistanceDescriptor::Norm { n: 2, p: 1.0 }, &[0.0, 0.0], 2.0, &s).unwrap();
        assert!(m.max_abs_diff(&MomentMatrix::scaled_identity(2, 1.0 / 6.0)) < 1e-13);
    }

    #[test]
    fn weak_pairing_constant_field_and_flat_mu_r() {
        let space = SpaceDescriptor::lebesgue(DistanceDescriptor::euclidean(1));
        let phi = ScalarField::Bump { center: vec![0.3], radius: 1.0, power: 3 };
        let c = ScalarField::Polynomial(Polynomial::constant(1, 2.0));
        let e = weak_pairing(&space, &c, &phi, 0.1, PairingVariant::Amv, &Scheme::default()).unwrap();
        assert_eq!(e.value, 0.0);
        let e = weak_pairing(&space, &c, &phi, 0.1, PairingVariant::AbsMuR, &Scheme::default()).unwrap();
        assert_eq!(e.value, 0.0);
    }
}
