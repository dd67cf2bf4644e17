//! Total-degree homotopy `H = (1 - t) γ G + t F` with `G_i = y_i^(D_i) - 1`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cpoly::CPoly3;
use super::SolverConfig;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathStatus {
    Tracking,
    Converged,
    Diverged,
    Truncated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackedPath {
    pub index: usize,
    pub start: [Complex64; 3],
    pub point: [Complex64; 3],
    pub t: f64,
    pub status: PathStatus,
    pub steps: usize,
    pub rejected: usize,
    /// scaled residual of the target system at `point`
    pub residual: f64,
}

struct Homotopy<'a> {
    target: &'a [CPoly3],
    start: Vec<CPoly3>,
    gamma: Complex64,
}

type Vec3 = Vector3<Complex64>;

fn arr(v: &Vec3) -> [Complex64; 3] {
    [v[0], v[1], v[2]]
}

fn norm(v: &Vec3) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

impl Homotopy<'_> {
    /// `(H, ∂H/∂y, ∂H/∂t)`
    fn eval(&self, y: &Vec3, t: f64) -> (Vec3, Matrix3<Complex64>, Vec3) {
        let ya = arr(y);
        let s = Complex64::new(1.0 - t, 0.0) * self.gamma;
        let tt = Complex64::new(t, 0.0);
        let mut h = Vec3::zeros();
        let mut ht = Vec3::zeros();
        let mut jac = Matrix3::zeros();
        for i in 0..3 {
            let (gv, gg) = self.start[i].eval_grad(&ya);
            let (fv, fg) = self.target[i].eval_grad(&ya);
            h[i] = s * gv + tt * fv;
            ht[i] = fv - self.gamma * gv;
            for j in 0..3 {
                jac[(i, j)] = s * gg[j] + tt * fg[j];
            }
        }
        (h, jac, ht)
    }

    /// Newton at fixed `t`; returns the corrected point if it converges fast.
    fn correct(&self, y: &Vec3, t: f64, cfg: &SolverConfig) -> Option<Vec3> {
        let mut y = *y;
        let mut last = f64::INFINITY;
        for it in 0..cfg.corrector_iterations {
            let (h, jac, _) = self.eval(&y, t);
            let dy = jac.lu().solve(&(-h))?;
            let n = norm(&dy);
            if !n.is_finite() || (it > 0 && n > 0.5 * last) {
                return None;
            }
            y += dy;
            let scale = 1.0 + norm(&y);
            if it == 0 && n > cfg.max_first_correction * scale {
                return None;
            }
            if n < cfg.corrector_tol * scale {
                return Some(y);
            }
            last = n;
        }
        None
    }
}

/// `max_i |F_i(y)| / max(1, |y|)^(D_i)`
pub fn scaled_residual(target: &[CPoly3], y: &[Complex64; 3]) -> f64 {
    let ny = y.iter().map(|x| x.norm()).fold(1.0, f64::max);
    target
        .iter()
        .map(|f| f.eval(y).norm() / ny.powi(f.degree() as i32))
        .fold(0.0, f64::max)
}

/// Newton on the target system alone.
pub fn refine(target: &[CPoly3], y: &[Complex64; 3], iterations: usize) -> [Complex64; 3] {
    let mut y = Vec3::new(y[0], y[1], y[2]);
    for _ in 0..iterations {
        let ya = arr(&y);
        let mut f = Vec3::zeros();
        let mut jac = Matrix3::zeros();
        for i in 0..3 {
            let (v, g) = target[i].eval_grad(&ya);
            f[i] = v;
            for j in 0..3 {
                jac[(i, j)] = g[j];
            }
        }
        let Some(dy) = jac.lu().solve(&(-f)) else {
            break;
        };
        if !dy.iter().all(|x| x.is_finite()) {
            break;
        }
        y += dy;
        if norm(&dy) < 1e-15 * (1.0 + norm(&y)) {
            break;
        }
    }
    arr(&y)
}

fn start_root(index: usize, degrees: &[u32]) -> [Complex64; 3] {
    let mut rest = index;
    std::array::from_fn(|i| {
        let d = degrees[i] as usize;
        let k = rest % d;
        rest /= d;
        Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64)
    })
}

fn track_one(hom: &Homotopy<'_>, index: usize, degrees: &[u32], cfg: &SolverConfig) -> TrackedPath {
    let start = start_root(index, degrees);
    let mut y = Vec3::new(start[0], start[1], start[2]);
    let mut t = 0.0;
    let mut h = cfg.initial_step;
    let (mut steps, mut rejected, mut streak) = (0, 0, 0);
    let mut status = PathStatus::Tracking;
    while t < 1.0 {
        if steps + rejected >= cfg.max_steps {
            status = PathStatus::Truncated;
            break;
        }
        let step = h.min(1.0 - t);
        let (_, jac, ht) = hom.eval(&y, t);
        let pred = jac
            .lu()
            .solve(&(-ht))
            .map(|dy| y + dy * Complex64::new(step, 0.0));
        let t1 = if step == 1.0 - t { 1.0 } else { t + step };
        match pred.and_then(|p| hom.correct(&p, t1, cfg)) {
            Some(next) => {
                y = next;
                t = t1;
                steps += 1;
                streak += 1;
                if streak >= cfg.expand_after {
                    h = (h * 2.0).min(cfg.max_step);
                    streak = 0;
                }
                if norm(&y) > cfg.divergence_bound {
                    status = PathStatus::Diverged;
                    break;
                }
            }
            None => {
                rejected += 1;
                streak = 0;
                h *= 0.5;
                if h < cfg.min_step {
                    status = PathStatus::Truncated;
                    break;
                }
            }
        }
    }
    let mut point = arr(&y);
    let mut residual = scaled_residual(hom.target, &point);
    let near_end = status == PathStatus::Truncated && 1.0 - t < cfg.end_zone;
    if status == PathStatus::Tracking || near_end {
        point = refine(hom.target, &point, cfg.endpoint_iterations);
        residual = scaled_residual(hom.target, &point);
        status = if residual < cfg.residual_tol {
            PathStatus::Converged
        } else if point.iter().map(|x| x.norm()).fold(0.0, f64::max) > cfg.divergence_bound {
            PathStatus::Diverged
        } else {
            PathStatus::Truncated
        };
    }
    TrackedPath {
        index,
        start,
        point,
        t,
        status,
        steps,
        rejected,
        residual,
    }
}

/// Tracks every start root of the total-degree start system to the target.
pub fn track_all_with(
    target: &[CPoly3],
    gamma: Complex64,
    cfg: &SolverConfig,
) -> Result<Vec<TrackedPath>> {
    cfg.validate()?;
    let degrees: Vec<u32> = target.iter().map(CPoly3::degree).collect();
    let start = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| CPoly3::start_equation(i, d))
        .collect();
    let hom = Homotopy {
        target,
        start,
        gamma,
    };
    let total: usize = degrees.iter().map(|&d| d as usize).product();
    Ok((0..total)
        .into_par_iter()
        .map(|i| track_one(&hom, i, &degrees, cfg))
        .collect())
}
