//! Node-weight rules for `∫_{B_r(x)} f(y) dy` (Lebesgue).

use std::f64::consts::PI;

use crate::error::Result;
use crate::geometry::{DistanceDescriptor, NormDescriptor};
use crate::sampling::{sample_ball, PointSet};

// 20-point Gauss-Legendre on [-1, 1], positive half.
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

#[derive(Clone, Debug, Default)]
pub struct Rule {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Composite Gauss-Legendre nodes on `[a, b]` split at `breaks`, `panels` panels per segment.
pub fn composite_gauss(a: f64, b: f64, breaks: &[f64], panels: usize) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|t| *t > a && *t < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut out = Vec::with_capacity(20 * panels * (cuts.len() - 1));
    for seg in cuts.windows(2) {
        let h = (seg[1] - seg[0]) / panels as f64;
        for k in 0..panels {
            let lo = seg[0] + k as f64 * h;
            let mid = lo + 0.5 * h;
            for &(x, w) in &GL20 {
                out.push((mid - 0.5 * h * x, 0.5 * h * w));
                out.push((mid + 0.5 * h * x, 0.5 * h * w));
            }
        }
    }
    out
}

fn norm_rule(center: &[f64], r: f64, norm: &NormDescriptor, level: u32) -> Option<Rule> {
    let panels = 1usize << level;
    let n = norm.n;
    let mut rule = Rule::default();
    if norm.p.is_infinite() && n <= 3 {
        let axis = composite_gauss(-r, r, &[], panels);
        let mut idx = vec![0usize; n];
        loop {
            rule.nodes.push((0..n).map(|i| center[i] + axis[idx[i]].0).collect());
            rule.weights.push((0..n).map(|i| axis[idx[i]].1).product());
            let mut d = 0;
            while d < n {
                idx[d] += 1;
                if idx[d] < axis.len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == n {
                break;
            }
        }
        return Some(rule);
    }
    if n != 2 {
        return None;
    }
    if norm.p == 1.0 {
        // y = c + ((a + b)/2, (a - b)/2) maps the square (-r, r)² onto the diamond, Jacobian 1/2
        let axis = composite_gauss(-r, r, &[], panels);
        for &(a, wa) in &axis {
            for &(b, wb) in &axis {
                rule.nodes.push(vec![center[0] + 0.5 * (a + b), center[1] + 0.5 * (a - b)]);
                rule.weights.push(0.5 * wa * wb);
            }
        }
        return Some(rule);
    }
    // star-shaped polar rule
    let m = 16usize << level;
    let h = 2.0 * PI / m as f64;
    for j in 0..m {
        let t = (j as f64 + 0.5) * h;
        let (s, c) = t.sin_cos();
        let rmax = r / norm.norm(&[c, s]);
        for (rho, wr) in composite_gauss(0.0, rmax, &[], panels) {
            rule.nodes.push(vec![center[0] + rho * c, center[1] + rho * s]);
            rule.weights.push(wr * rho * h);
        }
    }
    Some(rule)
}

/// Deterministic product rule for the ball, when one is available.
pub fn gauss_rule(dist: &DistanceDescriptor, x: &[f64], r: f64, level: u32, breaks: &[f64]) -> Result<Option<Rule>> {
    if let Some((a, b)) = dist.ball_interval(x, r) {
        let pts = composite_gauss(a, b, breaks, 1 << level);
        return Ok(Some(Rule { nodes: pts.iter().map(|p| vec![p.0]).collect(), weights: pts.iter().map(|p| p.1).collect() }));
    }
    match dist {
        DistanceDescriptor::Norm { n, p } => Ok(norm_rule(x, r, &NormDescriptor { n: *n, p: *p }, level)),
        DistanceDescriptor::AlphaWarped { alpha, p } => {
            dist.bounding_box(x, r)?;
            let phi: Vec<f64> = alpha.iter().zip(x).map(|(&a, &v)| if a == 2 { v * v } else { v }).collect();
            let Some(z) = norm_rule(&phi, r, &NormDescriptor { n: alpha.len(), p: *p }, level) else {
                return Ok(None);
            };
            let mut rule = Rule::default();
            for (zn, zw) in z.nodes.iter().zip(&z.weights) {
                let mut w = *zw;
                let y: Vec<f64> = alpha
                    .iter()
                    .zip(zn)
                    .map(|(&a, &v)| {
                        if a == 2 {
                            let s = v.sqrt();
                            w /= 2.0 * s;
                            s
                        } else {
                            v
                        }
                    })
                    .collect();
                rule.nodes.push(y);
                rule.weights.push(w);
            }
            Ok(Some(rule))
        }
        _ => Ok(None),
    }
}

/// Equal-weight cloud.
pub fn cloud_rule(dist: &DistanceDescriptor, x: &[f64], r: f64, count: usize, seed: u64, kind: PointSet) -> Result<Rule> {
    let cloud = sample_ball(dist, x, r, count, seed, kind)?;
    let w = cloud.volume / cloud.points.len() as f64;
    let weights = vec![w; cloud.points.len()];
    Ok(Rule { nodes: cloud.points, weights })
}
