//! Closed-form integration of polynomial fields against catalogued weights.
//!
//! Two families are covered. Exponential-polynomial weights `Q(y) e^{⟨a,y⟩}`
//! are integrated over any l^p ball (and any interval in one dimension) by
//! summing the Taylor series of the exponential against exact monomial moments.
//! Polar weights `c |y|^β g(θ)` are integrated over Euclidean balls centered at
//! the origin, and over arbitrary intervals on the line.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::fields::{Fourier, Polynomial, RadialProfile, ScalarField, WeightDescriptor};
use crate::geometry::{DistanceDescriptor, NormDescriptor};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Region {
    Interval(f64, f64),
    Ball { center: Vec<f64>, radius: f64, norm: NormDescriptor },
}

pub(crate) fn region(dist: &DistanceDescriptor, x: &[f64], r: f64) -> Result<Region> {
    if let Some((a, b)) = dist.ball_interval(x, r) {
        return Ok(Region::Interval(a, b));
    }
    match dist {
        DistanceDescriptor::Norm { n, p } => {
            Ok(Region::Ball { center: x.to_vec(), radius: r, norm: NormDescriptor { n: *n, p: *p } })
        }
        _ => Err(Error::NotInCatalog(format!("balls of {dist:?} in dimension {}", dist.dim()))),
    }
}

/// `w(y) = Q(y) exp(⟨a, y⟩)`.
#[derive(Clone, Debug)]
pub(crate) struct ExpPoly {
    pub a: Vec<f64>,
    pub q: Polynomial,
}

impl ExpPoly {
    pub fn is_exp_affine(&self) -> bool {
        self.q.degree() == 0
    }
}

/// `w(y) = c |y|^β Π g_j(θ)`.
#[derive(Clone, Debug)]
pub(crate) struct Polar {
    pub coef: f64,
    pub beta: f64,
    pub angular: Vec<Fourier>,
}

fn squared_modulus_power(n: usize, k: u32) -> Polynomial {
    let mut s = Polynomial::zero(n);
    for i in 0..n {
        let mut p = vec![0; n];
        p[i] = 2;
        s = s.add(&Polynomial::monomial(&p, 1.0));
    }
    (0..k).fold(Polynomial::constant(n, 1.0), |acc, _| acc.mul(&s))
}

pub(crate) fn exp_poly_form(w: &WeightDescriptor, n: usize) -> Option<ExpPoly> {
    match w {
        WeightDescriptor::Constant { c } => Some(ExpPoly { a: vec![0.0; n], q: Polynomial::constant(n, *c) }),
        WeightDescriptor::ExpLinear { a } if a.len() == n => Some(ExpPoly { a: a.clone(), q: Polynomial::constant(n, 1.0) }),
        WeightDescriptor::PowerAlpha { alpha } => {
            let half = alpha / 2.0;
            if *alpha >= 0.0 && half.fract() == 0.0 && half <= 8.0 {
                Some(ExpPoly { a: vec![0.0; n], q: squared_modulus_power(n, half as u32) })
            } else {
                None
            }
        }
        WeightDescriptor::Separable { radial: RadialProfile::Power { alpha }, fourier } if n == 2 && fourier.degree() == 0 => {
            let half = alpha / 2.0;
            if *alpha >= 0.0 && half.fract() == 0.0 && half <= 8.0 {
                Some(ExpPoly { a: vec![0.0; n], q: squared_modulus_power(n, half as u32).scale(fourier.a0) })
            } else {
                None
            }
        }
        WeightDescriptor::Product { factors } => {
            let mut acc = ExpPoly { a: vec![0.0; n], q: Polynomial::constant(n, 1.0) };
            for f in factors {
                let e = exp_poly_form(f, n)?;
                acc.a.iter_mut().zip(&e.a).for_each(|(x, y)| *x += y);
                acc.q = acc.q.mul(&e.q);
            }
            Some(acc)
        }
        _ => None,
    }
}

pub(crate) fn polar_form(w: &WeightDescriptor) -> Option<Polar> {
    match w {
        WeightDescriptor::Constant { c } => Some(Polar { coef: *c, beta: 0.0, angular: vec![] }),
        WeightDescriptor::ExpLinear { a } if a.iter().all(|v| *v == 0.0) => Some(Polar { coef: 1.0, beta: 0.0, angular: vec![] }),
        WeightDescriptor::PowerAlpha { alpha } => Some(Polar { coef: 1.0, beta: *alpha, angular: vec![] }),
        WeightDescriptor::Separable { radial: RadialProfile::Power { alpha }, fourier } => {
            Some(Polar { coef: 1.0, beta: *alpha, angular: vec![fourier.clone()] })
        }
        WeightDescriptor::Product { factors } => {
            let mut acc = Polar { coef: 1.0, beta: 0.0, angular: vec![] };
            for f in factors {
                let p = polar_form(f)?;
                acc.coef *= p.coef;
                acc.beta += p.beta;
                acc.angular.extend(p.angular);
            }
            Some(acc)
        }
        _ => None,
    }
}

/// A polynomial restricted to an interval (one dimension only); `None` means everywhere.
#[derive(Clone, Debug)]
pub(crate) struct Piece {
    pub restrict: Option<(f64, f64)>,
    pub poly: Polynomial,
}

/// Piecewise-polynomial description of a field. `covers_all` is false when the
/// field vanishes outside the union of the pieces.
#[derive(Clone, Debug)]
pub(crate) struct Pieces {
    pub pieces: Vec<Piece>,
    pub covers_all: bool,
}

pub(crate) fn field_pieces(u: &ScalarField, n: usize) -> Option<Pieces> {
    match u {
        ScalarField::Polynomial(p) if p.n() == n => Some(Pieces { pieces: vec![Piece { restrict: None, poly: p.clone() }], covers_all: true }),
        ScalarField::Sign if n == 1 => Some(Pieces {
            pieces: vec![
                Piece { restrict: Some((f64::NEG_INFINITY, 0.0)), poly: Polynomial::constant(1, -1.0) },
                Piece { restrict: Some((0.0, f64::INFINITY)), poly: Polynomial::constant(1, 1.0) },
            ],
            covers_all: true,
        }),
        ScalarField::Bump { center, radius, power } if n == 1 && center.len() == 1 => {
            let c = center[0];
            let s = Polynomial::affine(1.0 - c * c / (radius * radius), &[2.0 * c / (radius * radius)])
                .add(&Polynomial::monomial(&[2], -1.0 / (radius * radius)));
            let poly = (0..*power).fold(Polynomial::constant(1, 1.0), |acc, _| acc.mul(&s));
            Some(Pieces { pieces: vec![Piece { restrict: Some((c - radius, c + radius)), poly }], covers_all: false })
        }
        ScalarField::Weight(w) => {
            let e = exp_poly_form(w, n)?;
            if e.a.iter().all(|v| *v == 0.0) {
                Some(Pieces { pieces: vec![Piece { restrict: None, poly: e.q }], covers_all: true })
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Value of an exact integral and the sum of absolute contributions (for a rounding bound).
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Exact {
    pub value: f64,
    pub abs: f64,
}

impl Exact {
    fn add(self, o: Exact) -> Exact {
        Exact { value: self.value + o.value, abs: self.abs + o.abs }
    }
}

/// Constant term replacement after shifting to the region center.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Centering<'a> {
    pub x: &'a [f64],
    pub ux: f64,
}

fn centered_shift(p: &Polynomial, center: &[f64], centering: Option<Centering>) -> Polynomial {
    let s = p.shift(center);
    match centering {
        None => s,
        Some(c) => {
            let zero = vec![0; p.n()];
            let c0 = s.terms().iter().find(|(k, _)| *k == zero).map_or(0.0, |(_, v)| *v);
            let target = if c.x == center { 0.0 } else { c0 - c.ux };
            s.add(&Polynomial::constant(p.n(), target - c0))
        }
    }
}

/// `∫_{region ∩ restrict} (P(y) - ux) w(y) dy` (or without the `ux` when `centering` is `None`).
pub(crate) fn integrate(
    region: &Region,
    restrict: Option<(f64, f64)>,
    p: &Polynomial,
    w: &WeightDescriptor,
    centering: Option<Centering>,
) -> Result<Exact> {
    let (center, radius, norm) = match region {
        Region::Interval(a, b) => {
            let (lo, hi) = match restrict {
                Some((c, d)) => (a.max(c), b.min(d)),
                None => (*a, *b),
            };
            if hi <= lo {
                return Ok(Exact::default());
            }
            if let Some(e) = exp_poly_form(w, 1) {
                let mid = 0.5 * (lo + hi);
                return exp_poly_ball(&[mid], 0.5 * (hi - lo), &NormDescriptor::euclidean(1), &e, p, centering);
            }
            if let Some(pf) = polar_form(w) {
                if pf.angular.is_empty() {
                    let q = match centering {
                        Some(c) => p.add(&Polynomial::constant(1, -c.ux)),
                        None => p.clone(),
                    };
                    return polar_interval(lo, hi, &pf, &q);
                }
            }
            return Err(Error::NotInCatalog(format!("weight {} on an interval", w.label())));
        }
        Region::Ball { center, radius, norm } => {
            if restrict.is_some() {
                return Err(Error::NotInCatalog("restricted pieces on a multidimensional ball".into()));
            }
            (center, *radius, norm)
        }
    };
    let n = norm.n;
    if let Some(e) = exp_poly_form(w, n) {
        return exp_poly_ball(center, radius, norm, &e, p, centering);
    }
    if let Some(pf) = polar_form(w) {
        if norm.is_euclidean() && center.iter().all(|v| *v == 0.0) && (pf.angular.is_empty() || n == 2) {
            let q = match centering {
                Some(c) => p.add(&Polynomial::constant(n, -c.ux)),
                None => p.clone(),
            };
            return polar_ball(n, radius, &pf, &q);
        }
    }
    Err(Error::NotInCatalog(format!("weight {} on an off-center or non-Euclidean ball", w.label())))
}

fn moment_functional(norm: &NormDescriptor, p: &Polynomial) -> Exact {
    p.terms().iter().fold(Exact::default(), |acc, (k, c)| {
        let m = norm.unit_ball_moment(k);
        acc.add(Exact { value: c * m, abs: (c * m).abs() })
    })
}

fn abs_moment_functional(norm: &NormDescriptor, p: &Polynomial) -> f64 {
    p.terms().iter().map(|(k, c)| c.abs() * norm.unit_ball_abs_moment(k)).sum()
}

fn exp_poly_ball(
    center: &[f64],
    rho: f64,
    norm: &NormDescriptor,
    e: &ExpPoly,
    p: &Polynomial,
    centering: Option<Centering>,
) -> Result<Exact> {
    let n = norm.n;
    let s = centered_shift(p, center, centering).mul(&e.q.shift(center)).dilate(rho);
    let b: Vec<f64> = e.a.iter().map(|v| v * rho).collect();
    let t: f64 = b.iter().map(|v| v.abs()).sum();
    if t > 40.0 {
        return Err(Error::NotInCatalog(format!("exponential rate {t:.3} across the ball is too large for the series")));
    }
    let pref = rho.powi(n as i32) * e.a.iter().zip(center).map(|(a, c)| a * c).sum::<f64>().exp();
    let base_abs = abs_moment_functional(norm, &s);
    let mut term = s;
    let mut total = Exact::default();
    let mut bound = base_abs;
    for k in 0..600usize {
        total = total.add(moment_functional(norm, &term));
        if t == 0.0 {
            break;
        }
        // tail after order k: ≤ base_abs · t^{k+1}/(k+1)! · e^t
        bound *= t / (k + 1) as f64;
        let floor = total.value.abs().max(1e-12 * total.abs).max(f64::MIN_POSITIVE);
        if bound * t.exp() <= 1e-17 * floor {
            break;
        }
        if term.is_zero() {
            break;
        }
        term = term.mul_linear(&b).scale(1.0 / (k + 1) as f64);
    }
    Ok(Exact { value: pref * total.value, abs: pref * total.abs })
}

/// `∫_a^b c |y|^β P(y) dy`.
fn polar_interval(a: f64, b: f64, pf: &Polar, p: &Polynomial) -> Result<Exact> {
    let mut out = Exact::default();
    for (k, c) in p.terms() {
        let k = k[0] as f64;
        let e = k + pf.beta + 1.0;
        if e <= 0.0 {
            return Err(Error::NotInCatalog("non-integrable power at the origin".into()));
        }
        let g = |y: f64| {
            let s = if y < 0.0 && (k as u32 + 1) % 2 == 1 { -1.0 } else { 1.0 };
            s * y.abs().powf(e) / e
        };
        let v = pf.coef * c * (g(b) - g(a));
        out = out.add(Exact { value: v, abs: v.abs() });
    }
    Ok(out)
}

/// `∫_{S^{n-1}} θ^k dσ`.
fn sphere_moment(k: &[u32]) -> f64 {
    if k.iter().any(|v| v % 2 == 1) {
        return 0.0;
    }
    let n = k.len() as f64;
    let total: f64 = k.iter().map(|&v| v as f64).sum();
    let mut ln = 2f64.ln() - ln_gamma((total + n) / 2.0);
    for &v in k {
        ln += ln_gamma((v as f64 + 1.0) / 2.0);
    }
    ln.exp()
}

/// `∫_0^{2π} cos^{k1} sin^{k2} Π g_j dθ`, exact by the trapezoid rule.
fn circle_moment(k: &[u32], angular: &[Fourier]) -> f64 {
    let deg = (k[0] + k[1]) as usize + angular.iter().map(|g| g.degree()).sum::<usize>();
    let m = 2 * deg + 8;
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|j| {
            let t = j as f64 * h;
            let (s, c) = t.sin_cos();
            c.powi(k[0] as i32) * s.powi(k[1] as i32) * angular.iter().map(|g| g.eval(t)).product::<f64>()
        })
        .sum::<f64>()
        * h
}

/// `∫_{|y|<ρ} c |y|^β g(θ) P(y) dy`.
fn polar_ball(n: usize, rho: f64, pf: &Polar, p: &Polynomial) -> Result<Exact> {
    let mut out = Exact::default();
    for (k, c) in p.terms() {
        let deg: u32 = k.iter().sum();
        let e = deg as f64 + pf.beta + n as f64;
        if e <= 0.0 {
            return Err(Error::NotInCatalog("non-integrable power at the origin".into()));
        }
        let ang = if pf.angular.is_empty() { sphere_moment(k) } else { circle_moment(k, &pf.angular) };
        let v = pf.coef * c * rho.powf(e) / e * ang;
        out = out.add(Exact { value: v, abs: v.abs() });
    }
    Ok(out)
}
