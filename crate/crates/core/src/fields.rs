//! Scalar fields and density weights with analytic derivatives.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::NormDescriptor;
use crate::sampling::{mix_key, ScrambledHalton};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub powers: Vec<u32>,
    pub coef: f64,
}

/// Sparse multivariate polynomial with canonical (sorted, nonzero) terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl Polynomial {
    fn from_map(n: usize, map: BTreeMap<Vec<u32>, f64>) -> Self {
        let terms = map.into_iter().filter(|(_, c)| *c != 0.0).collect();
        Self { n, terms }
    }

    pub fn new(n: usize, terms: &[Term]) -> Result<Self> {
        if n == 0 {
            return invalid("polynomial dimension must be positive");
        }
        let mut map = BTreeMap::new();
        for t in terms {
            if t.powers.len() != n {
                return invalid(format!("term {:?} has {} powers, expected {n}", t.powers, t.powers.len()));
            }
            if !t.coef.is_finite() {
                return invalid("non-finite polynomial coefficient");
            }
            *map.entry(t.powers.clone()).or_insert(0.0) += t.coef;
        }
        Ok(Self::from_map(n, map))
    }

    pub fn zero(n: usize) -> Self {
        Self { n, terms: vec![] }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::from_map(n, BTreeMap::from([(vec![0; n], c)]))
    }

    pub fn monomial(powers: &[u32], c: f64) -> Self {
        Self::from_map(powers.len(), BTreeMap::from([(powers.to_vec(), c)]))
    }

    /// `c0 + Σ a_i x_i`.
    pub fn affine(c0: f64, a: &[f64]) -> Self {
        let n = a.len();
        let mut map = BTreeMap::from([(vec![0; n], c0)]);
        for (i, &ai) in a.iter().enumerate() {
            let mut k = vec![0; n];
            k[i] = 1;
            map.insert(k, ai);
        }
        Self::from_map(n, map)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<u32>, f64)] {
        &self.terms
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms.iter().map(|(p, c)| Term { powers: p.clone(), coef: *c }).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(p, _)| p.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| c * p.iter().zip(x).map(|(&k, &v)| v.powi(k as i32)).product::<f64>())
            .sum()
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut map = BTreeMap::new();
        for (p, c) in &self.terms {
            if p[i] > 0 {
                let mut q = p.clone();
                q[i] -= 1;
                *map.entry(q).or_insert(0.0) += c * p[i] as f64;
            }
        }
        Self::from_map(self.n, map)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.partial(i).eval(x)).collect()
    }

    pub fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let pi = self.partial(i);
            for j in i..self.n {
                let v = pi.partial(j).eval(x);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        h
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut map: BTreeMap<Vec<u32>, f64> = self.terms.iter().cloned().collect();
        for (p, c) in &other.terms {
            *map.entry(p.clone()).or_insert(0.0) += c;
        }
        Self::from_map(self.n, map)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_map(self.n, self.terms.iter().map(|(p, c)| (p.clone(), c * s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut map = BTreeMap::new();
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                let k: Vec<u32> = p.iter().zip(q).map(|(a, b)| a + b).collect();
                *map.entry(k).or_insert(0.0) += c * d;
            }
        }
        Self::from_map(self.n, map)
    }

    /// Multiplies by the linear form `Σ a_i x_i`.
    pub fn mul_linear(&self, a: &[f64]) -> Self {
        let mut map = BTreeMap::new();
        for (p, c) in &self.terms {
            for (i, &ai) in a.iter().enumerate() {
                if ai != 0.0 {
                    let mut k = p.clone();
                    k[i] += 1;
                    *map.entry(k).or_insert(0.0) += c * ai;
                }
            }
        }
        Self::from_map(self.n, map)
    }

    /// `v ↦ P(x0 + v)`.
    pub fn shift(&self, x0: &[f64]) -> Self {
        let mut out = Self::zero(self.n);
        for (p, c) in &self.terms {
            let mut acc = Self::constant(self.n, *c);
            for (i, &k) in p.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let mut map = BTreeMap::new();
                let mut binom = 1.0;
                for j in 0..=k {
                    let mut q = vec![0; self.n];
                    q[i] = j;
                    map.insert(q, binom * x0[i].powi((k - j) as i32));
                    binom = binom * (k - j) as f64 / (j + 1) as f64;
                }
                acc = acc.mul(&Self::from_map(self.n, map));
            }
            out = out.add(&acc);
        }
        out
    }

    /// `v ↦ P(ρ v)`.
    pub fn dilate(&self, rho: f64) -> Self {
        Self::from_map(
            self.n,
            self.terms
                .iter()
                .map(|(p, c)| (p.clone(), c * rho.powi(p.iter().sum::<u32>() as i32)))
                .collect(),
        )
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr { n: self.n, coefficients: self.to_terms() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        Polynomial::new(r.n, &r.coefficients).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyRepr {
    n: usize,
    coefficients: Vec<Term>,
}

/// Trigonometric polynomial `a0 + Σ_m (a_m cos mθ + b_m sin mθ)`, m = 1, 2, ...
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fourier {
    pub a0: f64,
    #[serde(default)]
    pub am: Vec<f64>,
    #[serde(default)]
    pub bm: Vec<f64>,
}

impl Fourier {
    pub fn degree(&self) -> usize {
        let last = |v: &[f64]| v.iter().rposition(|c| *c != 0.0).map_or(0, |i| i + 1);
        last(&self.am).max(last(&self.bm))
    }

    fn coef(v: &[f64], m: usize) -> f64 {
        v.get(m - 1).copied().unwrap_or(0.0)
    }

    pub fn a(&self, m: usize) -> f64 {
        if m == 0 {
            self.a0
        } else {
            Self::coef(&self.am, m)
        }
    }

    pub fn b(&self, m: usize) -> f64 {
        if m == 0 {
            0.0
        } else {
            Self::coef(&self.bm, m)
        }
    }

    /// Value and first two θ-derivatives.
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        let (mut g, mut g1, mut g2) = (self.a0, 0.0, 0.0);
        for m in 1..=self.degree() {
            let (s, c) = (m as f64 * t).sin_cos();
            let (a, b) = (self.a(m), self.b(m));
            let mf = m as f64;
            g += a * c + b * s;
            g1 += mf * (-a * s + b * c);
            g2 -= mf * mf * (a * c + b * s);
        }
        (g, g1, g2)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval3(t).0
    }

    /// Whether every odd mode vanishes, i.e. g(θ + π) = g(θ).
    pub fn is_even(&self) -> bool {
        (1..=self.degree()).step_by(2).all(|m| self.a(m) == 0.0 && self.b(m) == 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialProfile {
    /// `ρ^alpha`.
    Power { alpha: f64 },
}

/// Density of a weighted Lebesgue measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightDescriptor {
    Constant {
        #[serde(default = "one")]
        c: f64,
    },
    /// `exp(⟨a, x⟩)`.
    ExpLinear { a: Vec<f64> },
    /// `|x|^alpha` (Euclidean modulus).
    PowerAlpha { alpha: f64 },
    /// `f(ρ) g(θ)` in polar coordinates of the plane.
    Separable { radial: RadialProfile, fourier: Fourier },
    Product { factors: Vec<WeightDescriptor> },
}

fn one() -> f64 {
    1.0
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn euclid(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

impl WeightDescriptor {
    pub fn lebesgue() -> Self {
        Self::Constant { c: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Constant { c } if !(*c > 0.0 && c.is_finite()) => invalid("constant weight must be positive"),
            Self::ExpLinear { a } if a.is_empty() || a.iter().any(|v| !v.is_finite()) => {
                invalid("exp_linear needs a finite nonempty coefficient vector")
            }
            Self::PowerAlpha { alpha } if !alpha.is_finite() || *alpha <= -1.0 => {
                invalid("power_alpha exponent must be finite and > -1")
            }
            Self::Separable { radial: RadialProfile::Power { alpha }, fourier } => {
                if !alpha.is_finite() || *alpha <= -2.0 {
                    return invalid("radial exponent must be finite and > -2");
                }
                if fourier.am.iter().chain(&fourier.bm).any(|v| !v.is_finite()) || !fourier.a0.is_finite() {
                    return invalid("non-finite Fourier coefficient");
                }
                let min = (0..1440).map(|k| fourier.eval(2.0 * PI * k as f64 / 1440.0)).fold(f64::INFINITY, f64::min);
                if min < 0.0 || fourier.a0 <= 0.0 {
                    return invalid("angular profile must be nonnegative with positive mean");
                }
                Ok(())
            }
            Self::Product { factors } => {
                if factors.is_empty() {
                    return invalid("product weight needs at least one factor");
                }
                factors.iter().try_for_each(|f| f.validate())?;
                let dims: Vec<usize> = factors.iter().filter_map(|f| f.fixed_dim()).collect();
                if dims.windows(2).any(|w| w[0] != w[1]) {
                    return invalid("product factors disagree on dimension");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Dimension forced by the descriptor, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            Self::ExpLinear { a } => Some(a.len()),
            Self::Separable { .. } => Some(2),
            Self::Product { factors } => factors.iter().find_map(|f| f.fixed_dim()),
            _ => None,
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(d) if d != n => invalid(format!("weight lives in dimension {d}, space has dimension {n}")),
            _ => Ok(()),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Self::Constant { .. } => true,
            Self::ExpLinear { a } => a.iter().all(|v| *v == 0.0),
            Self::PowerAlpha { alpha } => *alpha == 0.0,
            Self::Separable { radial: RadialProfile::Power { alpha }, fourier } => *alpha == 0.0 && fourier.degree() == 0,
            Self::Product { factors } => factors.iter().all(|f| f.is_constant()),
        }
    }

    /// Sufficient condition for `w(-x) = w(x)`.
    pub fn is_even(&self) -> bool {
        match self {
            Self::Constant { .. } | Self::PowerAlpha { .. } => true,
            Self::ExpLinear { a } => a.iter().all(|v| *v == 0.0),
            Self::Separable { fourier, .. } => fourier.is_even(),
            Self::Product { factors } => factors.iter().all(|f| f.is_even()),
        }
    }

    /// Plain evaluation; no domain checks.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Self::Constant { c } => *c,
            Self::ExpLinear { a } => dot(a, x).exp(),
            Self::PowerAlpha { alpha } => {
                if *alpha == 0.0 {
                    1.0
                } else {
                    euclid(x).powf(*alpha)
                }
            }
            Self::Separable { radial: RadialProfile::Power { alpha }, fourier } => {
                let rho = euclid(x);
                let g = fourier.eval(x[1].atan2(x[0]));
                if *alpha == 0.0 {
                    g
                } else {
                    rho.powf(*alpha) * g
                }
            }
            Self::Product { factors } => factors.iter().map(|f| f.eval(x)).product(),
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(self.eval(x))
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.derivatives(x)?.1)
    }

    pub fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        Ok(self.derivatives(x)?.2)
    }

    fn singular(&self, x: &[f64]) -> Error {
        Error::Singular { what: format!("weight {}", self.label()), at: x.to_vec() }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Constant { c } => format!("constant({c})"),
            Self::ExpLinear { a } => format!("exp_linear({a:?})"),
            Self::PowerAlpha { alpha } => format!("|x|^{alpha}"),
            Self::Separable { radial: RadialProfile::Power { alpha }, fourier } => {
                format!("rho^{alpha} * fourier(a0={}, am={:?}, bm={:?})", fourier.a0, fourier.am, fourier.bm)
            }
            Self::Product { factors } => factors.iter().map(|f| f.label()).collect::<Vec<_>>().join(" * "),
        }
    }

    /// Value, gradient and Hessian.
    pub fn derivatives(&self, x: &[f64]) -> Result<(f64, Vec<f64>, DMatrix<f64>)> {
        self.check_dim(x.len())?;
        let n = x.len();
        match self {
            Self::Constant { c } => Ok((*c, vec![0.0; n], DMatrix::zeros(n, n))),
            Self::ExpLinear { a } => {
                let w = dot(a, x).exp();
                let av = nalgebra::DVector::from_column_slice(a);
                Ok((w, a.iter().map(|v| v * w).collect(), &av * av.transpose() * w))
            }
            Self::PowerAlpha { alpha } => {
                let al = *alpha;
                let rho = euclid(x);
                if al == 0.0 {
                    return Ok((1.0, vec![0.0; n], DMatrix::zeros(n, n)));
                }
                if rho == 0.0 {
                    return if al == 2.0 {
                        Ok((0.0, vec![0.0; n], DMatrix::identity(n, n) * 2.0))
                    } else if al > 2.0 {
                        Ok((0.0, vec![0.0; n], DMatrix::zeros(n, n)))
                    } else {
                        Err(self.singular(x))
                    };
                }
                let w = rho.powf(al);
                let f = al * rho.powf(al - 2.0);
                let xv = nalgebra::DVector::from_column_slice(x);
                let h = (DMatrix::identity(n, n) + &xv * xv.transpose() * ((al - 2.0) / (rho * rho))) * f;
                Ok((w, x.iter().map(|v| v * f).collect(), h))
            }
            Self::Separable { radial: RadialProfile::Power { alpha }, fourier } => {
                let rho = euclid(x);
                if rho == 0.0 {
                    return Err(self.singular(x));
                }
                let beta = *alpha;
                let t = x[1].atan2(x[0]);
                let (g, g1, g2) = fourier.eval3(t);
                let f0 = rho.powf(beta);
                let w = f0 * g;
                let w_r = beta * f0 / rho * g;
                let w_rr = beta * (beta - 1.0) * f0 / (rho * rho) * g;
                let w_t = f0 * g1;
                let w_tt = f0 * g2;
                let w_rt = beta * f0 / rho * g1;
                let (s, c) = t.sin_cos();
                let grad = vec![c * w_r - s / rho * w_t, s * w_r + c / rho * w_t];
                let r2 = rho * rho;
                let hxx = c * c * w_rr + s * s / rho * w_r + s * s / r2 * w_tt - 2.0 * s * c / rho * w_rt
                    + 2.0 * s * c / r2 * w_t;
                let hyy = s * s * w_rr + c * c / rho * w_r + c * c / r2 * w_tt + 2.0 * s * c / rho * w_rt
                    - 2.0 * s * c / r2 * w_t;
                let hxy = s * c * w_rr - s * c / rho * w_r - s * c / r2 * w_tt + (c * c - s * s) / rho * w_rt
                    - (c * c - s * s) / r2 * w_t;
                Ok((w, grad, DMatrix::from_row_slice(2, 2, &[hxx, hxy, hxy, hyy])))
            }
            Self::Product { factors } => {
                let mut w = 1.0;
                let mut g = nalgebra::DVector::zeros(n);
                let mut h = DMatrix::zeros(n, n);
                for f in factors {
                    let (fv, fg, fh) = f.derivatives(x)?;
                    let fg = nalgebra::DVector::from_vec(fg);
                    h = h * fv + fh * w + &g * fg.transpose() + &fg * g.transpose();
                    g = g * fv + fg * w;
                    w *= fv;
                }
                Ok((w, g.as_slice().to_vec(), h))
            }
        }
    }
}

/// Field to which an operator is applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub enum ScalarField {
    Polynomial(Polynomial),
    /// `sgn(x)` on the line, with `sgn(0) = 0`.
    Sign,
    /// `(1 - |x - center|² / radius²)^power` inside the support, 0 outside.
    Bump { center: Vec<f64>, radius: f64, power: u32 },
    /// A weight used as a field.
    Weight(WeightDescriptor),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FieldRepr {
    Polynomial { n: usize, coefficients: Vec<Term> },
    Sign {},
    Bump { center: Vec<f64>, radius: f64, power: u32 },
    Weight { weight: WeightDescriptor },
}

impl TryFrom<FieldRepr> for ScalarField {
    type Error = Error;
    fn try_from(r: FieldRepr) -> Result<Self> {
        let f = match r {
            FieldRepr::Polynomial { n, coefficients } => Self::Polynomial(Polynomial::new(n, &coefficients)?),
            FieldRepr::Sign {} => Self::Sign,
            FieldRepr::Bump { center, radius, power } => Self::Bump { center, radius, power },
            FieldRepr::Weight { weight } => Self::Weight(weight),
        };
        f.validate()?;
        Ok(f)
    }
}

impl From<ScalarField> for FieldRepr {
    fn from(f: ScalarField) -> Self {
        match f {
            ScalarField::Polynomial(p) => FieldRepr::Polynomial { n: p.n, coefficients: p.to_terms() },
            ScalarField::Sign => FieldRepr::Sign {},
            ScalarField::Bump { center, radius, power } => FieldRepr::Bump { center, radius, power },
            ScalarField::Weight(w) => FieldRepr::Weight { weight: w },
        }
    }
}

impl ScalarField {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Bump { center, radius, power } => {
                if center.is_empty() || !(*radius > 0.0) || *power == 0 {
                    return invalid("bump needs a center, a positive radius and a positive power");
                }
                Ok(())
            }
            Self::Weight(w) => w.validate(),
            _ => Ok(()),
        }
    }

    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            Self::Polynomial(p) => Some(p.n),
            Self::Sign => Some(1),
            Self::Bump { center, .. } => Some(center.len()),
            Self::Weight(w) => w.fixed_dim(),
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(d) if d != n => invalid(format!("field lives in dimension {d}, space has dimension {n}")),
            _ => Ok(()),
        }
    }

    /// Plain evaluation; no domain checks.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Self::Polynomial(p) => p.eval(x),
            Self::Sign => {
                if x[0] > 0.0 {
                    1.0
                } else if x[0] < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Self::Bump { center, radius, power } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                let s = 1.0 - d2 / (radius * radius);
                if s > 0.0 {
                    s.powi(*power as i32)
                } else {
                    0.0
                }
            }
            Self::Weight(w) => w.eval(x),
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(self.eval(x))
    }

    /// Value, gradient and Hessian.
    pub fn derivatives(&self, x: &[f64]) -> Result<(f64, Vec<f64>, DMatrix<f64>)> {
        self.check_dim(x.len())?;
        let n = x.len();
        match self {
            Self::Polynomial(p) => Ok((p.eval(x), p.gradient(x), p.hessian(x))),
            Self::Sign => {
                if x[0] == 0.0 {
                    Err(Error::Singular { what: "sign field".into(), at: x.to_vec() })
                } else {
                    Ok((self.eval(x), vec![0.0], DMatrix::zeros(1, 1)))
                }
            }
            Self::Bump { center, radius, power } => {
                let r2 = radius * radius;
                let d: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let s = 1.0 - dot(&d, &d) / r2;
                if s <= 0.0 {
                    if *power < 3 && s == 0.0 {
                        return Err(Error::Singular { what: "bump field".into(), at: x.to_vec() });
                    }
                    return Ok((0.0, vec![0.0; n], DMatrix::zeros(n, n)));
                }
                let k = *power as f64;
                let v = s.powi(*power as i32);
                let s1 = if *power >= 1 { k * s.powi(*power as i32 - 1) } else { 0.0 };
                let s2 = if *power >= 2 { k * (k - 1.0) * s.powi(*power as i32 - 2) } else { 0.0 };
                // ∇s = -2d/R², ∇²s = -2I/R²
                let dv = nalgebra::DVector::from_vec(d.clone());
                let grad: Vec<f64> = d.iter().map(|di| s1 * (-2.0 * di / r2)).collect();
                let h = &dv * dv.transpose() * (4.0 * s2 / (r2 * r2)) - DMatrix::identity(n, n) * (2.0 * s1 / r2);
                Ok((v, grad, h))
            }
            Self::Weight(w) => w.derivatives(x),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.derivatives(x)?.1)
    }

    pub fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        Ok(self.derivatives(x)?.2)
    }
}

/// `Δu + ⟨∇w, ∇u⟩ / w` at x.
pub fn weighted_laplacian(u: &ScalarField, w: &WeightDescriptor, x: &[f64]) -> Result<f64> {
    let (_, gu, hu) = u.derivatives(x)?;
    let (wv, gw, _) = w.derivatives(x)?;
    if wv <= 0.0 {
        return Err(Error::Singular { what: "weighted Laplacian (w = 0)".into(), at: x.to_vec() });
    }
    Ok(hu.trace() + dot(&gw, &gu) / wv)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvennessStats {
    pub radius: f64,
    /// `sup_{y ∈ B_r(0)} |w(y) - w(-y)|`.
    pub sup_odd_part: f64,
    /// `r · ⨍_{B_r(0)} w`, the scale against which the odd part is compared.
    pub scale: f64,
    pub exact: bool,
}

impl EvennessStats {
    pub fn ratio(&self) -> f64 {
        if self.scale > 0.0 {
            self.sup_odd_part / self.scale
        } else {
            f64::INFINITY
        }
    }
}

/// Measures how far `w` is from even on the ball `B_r(0)` of `norm`.
pub fn evenness_stats(w: &WeightDescriptor, norm: &NormDescriptor, r: f64, samples: usize, seed: u64) -> Result<EvennessStats> {
    w.check_dim(norm.n)?;
    if !(r > 0.0) {
        return invalid("radius must be positive");
    }
    let n = norm.n;
    let mut h = ScrambledHalton::new(n, mix_key(seed, &[r.to_bits()]))?;
    let mut u = vec![0.0; n];
    let mut pts = Vec::with_capacity(samples);
    while pts.len() < samples.max(1) {
        h.next_point(&mut u);
        let y: Vec<f64> = u.iter().map(|v| r * (2.0 * v - 1.0)).collect();
        if norm.norm(&y) < r {
            pts.push(y);
        }
    }
    let mean_w = pts.iter().map(|y| w.eval(y)).sum::<f64>() / pts.len() as f64;
    let scale = r * mean_w;
    if w.is_even() {
        return Ok(EvennessStats { radius: r, sup_odd_part: 0.0, scale, exact: true });
    }
    let odd = |y: &[f64]| {
        let m: Vec<f64> = y.iter().map(|v| -v).collect();
        (w.eval(y) - w.eval(&m)).abs()
    };
    // exp_linear: |2 sinh⟨a,y⟩| with sup over the ball r · (dual norm of a)
    if let WeightDescriptor::ExpLinear { a } = w {
        let q = if norm.p == 1.0 {
            f64::INFINITY
        } else if norm.p.is_infinite() {
            1.0
        } else {
            norm.p / (norm.p - 1.0)
        };
        let dual = NormDescriptor { n, p: q }.norm(a);
        return Ok(EvennessStats { radius: r, sup_odd_part: 2.0 * (r * dual).sinh(), scale, exact: true });
    }
    let mut sup = pts.iter().map(|y| odd(y)).fold(0.0, f64::max);
    // the odd part usually peaks on the boundary
    let mut hb = ScrambledHalton::new(n, mix_key(seed, &[r.to_bits(), 1]))?;
    for _ in 0..samples.max(64) {
        hb.next_point(&mut u);
        let dir: Vec<f64> = u.iter().map(|v| 2.0 * v - 1.0).collect();
        let nn = norm.norm(&dir);
        if nn == 0.0 {
            continue;
        }
        let y: Vec<f64> = dir.iter().map(|v| v * r * (1.0 - 1e-12) / nn).collect();
        sup = sup.max(odd(&y));
    }
    Ok(EvennessStats { radius: r, sup_odd_part: sup, scale, exact: false })
}
