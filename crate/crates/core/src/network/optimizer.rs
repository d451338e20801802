use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;
use serde::Serialize;

use super::blocks::{traced_fidelity, ThreeModeBlocks};
use super::measurement::{conditional_fidelity, serialize_xi, SqueezedProjectorSpec};
use crate::error::{Error, Result};
use crate::linalg::j2;
use crate::numeric;

/// Ingredients of the closed-form dependence of `F^(0)` on the projector `(ξ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerVectors {
    /// `u = (det C + ¼, (det Σ)² − Tr(JCJᵀU))`.
    pub u: Vector2<f64>,
    /// `U = Σ J Γ^tr Jᵀ Σᵀ`.
    pub big_u: Matrix2<f64>,
    pub c: Matrix2<f64>,
    pub det_gamma_tr: f64,
}

fn theta(phi: f64) -> Vector2<f64> {
    let (s, c) = phi.sin_cos();
    Vector2::new(s, c)
}

impl OptimizerVectors {
    /// `k(φ) = (ϑᵀUϑ, ϑᵀCϑ)` with `ϑ = (sin φ, cos φ)`.
    pub fn k(&self, phi: f64) -> Vector2<f64> {
        let t = theta(phi);
        Vector2::new(t.dot(&(self.big_u * t)), t.dot(&(self.c * t)))
    }

    /// `γ(φ) = uᵀk(φ)`.
    pub fn gamma(&self, phi: f64) -> f64 {
        self.u.dot(&self.k(phi))
    }

    /// `ω(φ) = [k_x(φ) k_y(φ − π/2) − k_y(φ) k_x(φ − π/2)]/2`.
    pub fn omega(&self, phi: f64) -> f64 {
        let k = self.k(phi);
        let kq = self.k(phi - FRAC_PI_2);
        0.5 * (k.x * kq.y - k.y * kq.x)
    }

    /// `p(φ)`: `γ(φ) < 0` and `γ(φ − π/2) < 0`.
    pub fn p(&self, phi: f64) -> bool {
        self.gamma(phi) < 0.0 && self.gamma(phi - FRAC_PI_2) < 0.0
    }

    /// `ξ₋(φ) = [ω − √(ω² + γ(φ−π/2)γ(φ))]/γ(φ−π/2)`.
    pub fn xi_minus(&self, phi: f64) -> f64 {
        let (g, gq, w) = (self.gamma(phi), self.gamma(phi - FRAC_PI_2), self.omega(phi));
        (w - (w * w + gq * g).max(0.0).sqrt()) / gq
    }

    /// `F(ξ, φ)` from the vectors `u` and `k`, including the limits `ξ ∈ {0, +∞}`.
    pub fn fidelity(&self, xi: f64, phi: f64) -> f64 {
        let k = self.k(phi);
        let kq = self.k(phi - FRAC_PI_2);
        let ratio = if xi == 0.0 {
            k.x / k.y
        } else if xi == f64::INFINITY {
            kq.x / kq.y
        } else {
            (-self.u.y + 0.5 * xi * kq.x + 0.5 * k.x / xi)
                / (self.u.x + 0.5 * xi * kq.y + 0.5 * k.y / xi)
        };
        1.0 / (self.det_gamma_tr - ratio).sqrt()
    }

    /// Positive roots of `γ(φ−π/2) ξ² − 2ω ξ − γ(φ) = 0`, the stationary points in `ξ`.
    pub fn stationary_xis(&self, phi: f64) -> Vec<f64> {
        let (g, gq, w) = (self.gamma(phi), self.gamma(phi - FRAC_PI_2), self.omega(phi));
        let mut roots = Vec::with_capacity(2);
        if gq == 0.0 {
            if w != 0.0 {
                roots.push(-g / (2.0 * w));
            }
        } else {
            let disc = w * w + gq * g;
            if disc >= 0.0 {
                let s = disc.sqrt();
                // Cancellation-free pair: q = ω + sign(ω)·s, roots q/γ' and −γ/q.
                let q = if w >= 0.0 { w + s } else { w - s };
                if q != 0.0 {
                    roots.push(q / gq);
                    roots.push(-g / q);
                } else {
                    roots.push(w / gq);
                }
            }
        }
        roots.retain(|x| x.is_finite() && *x > 0.0);
        roots
    }

    /// Best `ξ` at fixed `φ` among every stationary point and both end points.
    pub fn best_xi(&self, phi: f64) -> (f64, f64) {
        let mut best = (0.0, self.fidelity(0.0, phi));
        for xi in self.stationary_xis(phi).into_iter().chain([f64::INFINITY]) {
            let f = self.fidelity(xi, phi);
            if f > best.1 {
                best = (xi, f);
            }
        }
        best
    }
}

/// `u`, `U` and the related quantities for `net` and the input `v_in`.
pub fn optimizer_vectors(net: &ThreeModeBlocks, v_in: &Matrix2<f64>) -> Result<OptimizerVectors> {
    let gamma_tr = net.gamma_tr(v_in)?;
    let sigma = net.sigma();
    let j = j2();
    let big_u = sigma * j * gamma_tr * j.transpose() * sigma.transpose();
    let big_u = (big_u + big_u.transpose()) * 0.5;
    let jcj = j * net.c * j.transpose();
    Ok(OptimizerVectors {
        u: Vector2::new(
            net.c.determinant() + 0.25,
            sigma.determinant().powi(2) - (jcj * big_u).trace(),
        ),
        big_u,
        c: net.c,
        det_gamma_tr: gamma_tr.determinant(),
    })
}

/// The phase-dependent optimum: `ξ₋(φ)` when `p(φ)` holds, otherwise the better end point.
pub fn optimal_xi(phi: f64, vectors: &OptimizerVectors) -> f64 {
    if vectors.p(phi) {
        vectors.xi_minus(phi)
    } else if vectors.fidelity(f64::INFINITY, phi) > vectors.fidelity(0.0, phi) {
        f64::INFINITY
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Finite positive optimal squeezing.
    Interior,
    /// `ξ ∈ {0, +∞}`: the optimum is a homodyne detection.
    BoundaryHomodyne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryKind {
    Maximum,
    Minimum,
    Flat,
}

/// A stationary phase of `F(0, φ)` and its second-difference classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryPhase {
    pub phi: f64,
    pub kind: StationaryKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerResult {
    #[serde(serialize_with = "serialize_xi")]
    pub xi_star: f64,
    pub phi_star: f64,
    pub f_star: f64,
    pub f_traced: f64,
    pub branch: Branch,
    pub gamma: f64,
    pub omega: f64,
    pub p: bool,
    pub stationary_phases: Vec<StationaryPhase>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    /// Points of the uniform phase grid over `[0, π)`.
    pub phase_grid: usize,
    /// Number of best local grid maxima refined by Brent's method.
    pub refined_maxima: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            phase_grid: 720,
            refined_maxima: 4,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    phi: f64,
    xi: f64,
    f: f64,
}

fn xi_rank(xi: f64) -> u8 {
    if xi.is_infinite() {
        2
    } else if xi == 0.0 {
        1
    } else {
        0
    }
}

/// Total order: higher fidelity, then smaller phase, then finite over boundary squeezing.
fn better(a: &Candidate, b: &Candidate) -> Ordering {
    a.f.total_cmp(&b.f)
        .then_with(|| b.phi.total_cmp(&a.phi))
        .then_with(|| xi_rank(b.xi).cmp(&xi_rank(a.xi)))
}

fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(PI);
    if w >= PI {
        0.0
    } else {
        w
    }
}

fn candidate(vectors: &OptimizerVectors, phi: f64) -> Candidate {
    let phi = wrap_phase(phi);
    let (xi, f) = vectors.best_xi(phi);
    Candidate { phi, xi, f }
}

/// Stationary phases of `F(0, φ)` from `τ = U J C Jᵀ`, classified by a second difference.
pub fn stationary_phases(vectors: &OptimizerVectors) -> Vec<StationaryPhase> {
    let j = j2();
    let tau = vectors.big_u * j * vectors.c * j.transpose();
    let (t11, t12, t21, t22) = (tau[(0, 0)], tau[(0, 1)], tau[(1, 0)], tau[(1, 1)]);
    let den = (t11 - t22).powi(2) + (t12 + t21).powi(2);
    let rad = (t11 - t22).powi(2) + 4.0 * t12 * t21;
    if !(den > 1e-300) || rad < 0.0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        let cos2 = (t12 * t12 - t21 * t21 + sign * (t11 - t22) * rad.sqrt()) / den;
        if !(cos2.abs() <= 1.0 + 1e-12) {
            continue;
        }
        // cos 2φ fixes φ up to its sign; keep the member of the pair that is stationary.
        let half = 0.5 * cos2.clamp(-1.0, 1.0).acos();
        let f = |p: f64| vectors.fidelity(0.0, p);
        let slope = |p: f64| (f(p + 1e-6) - f(p - 1e-6)).abs();
        let (a, b) = (wrap_phase(half), wrap_phase(-half));
        let phi = if slope(a) <= slope(b) { a } else { b };
        if out.iter().any(|s: &StationaryPhase| (s.phi - phi).abs() < 1e-12) {
            continue;
        }
        let h = 1e-4;
        let second = f(phi + h) + f(phi - h) - 2.0 * f(phi);
        let scale = f(phi).abs() * 1e-12;
        let kind = if second < -scale {
            StationaryKind::Maximum
        } else if second > scale {
            StationaryKind::Minimum
        } else {
            StationaryKind::Flat
        };
        out.push(StationaryPhase { phi, kind });
    }
    out
}

/// Maximizes `F^(0)` over pure projectors `(ξ, φ) ∈ [0, +∞] × [0, π)`.
pub fn optimize_measurement(net: &ThreeModeBlocks, v_in: &Matrix2<f64>) -> Result<OptimizerResult> {
    optimize_measurement_with(net, v_in, &OptimizerOptions::default())
}

pub fn optimize_measurement_with(
    net: &ThreeModeBlocks,
    v_in: &Matrix2<f64>,
    options: &OptimizerOptions,
) -> Result<OptimizerResult> {
    if options.phase_grid < 4 {
        return Err(Error::InvalidParameter("phase grid needs at least 4 points".into()));
    }
    let vectors = optimizer_vectors(net, v_in)?;
    let f_traced = traced_fidelity(net, v_in)?;
    let n = options.phase_grid;
    let step = PI / n as f64;
    let grid: Vec<Candidate> = (0..n)
        .into_par_iter()
        .map(|k| candidate(&vectors, k as f64 * step))
        .collect();

    let mut pool: Vec<Candidate> = grid.clone();
    let phases = stationary_phases(&vectors);
    pool.extend(phases.iter().map(|s| candidate(&vectors, s.phi)));

    let objective = |phi: f64| -vectors.best_xi(wrap_phase(phi)).1;
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    let mut maxima: Vec<usize> = (0..n)
        .filter(|&k| {
            let f = grid[k].f;
            f >= grid[(k + n - 1) % n].f && f >= grid[(k + 1) % n].f
        })
        .collect();
    maxima.sort_by(|&a, &b| better(&grid[b], &grid[a]));
    for &k in maxima.iter().take(options.refined_maxima) {
        let centre = k as f64 * step;
        brackets.push((centre - step, centre + step));
    }
    for k in 0..n {
        let phi = k as f64 * step;
        if vectors.p(phi) != vectors.p(phi + step) {
            brackets.push((phi - step, phi + 2.0 * step));
        }
    }
    let refined: Vec<Candidate> = brackets
        .par_iter()
        .filter_map(|&(a, b)| numeric::minimize_scalar(objective, a, b, 1e-12).ok())
        .map(|(phi, _)| candidate(&vectors, phi))
        .collect();
    pool.extend(refined);

    let best = pool
        .into_iter()
        .max_by(better)
        .expect("phase grid is not empty");
    let spec = SqueezedProjectorSpec::new(best.xi, best.phi);
    let f_star = conditional_fidelity(net, v_in, &spec)?;
    Ok(OptimizerResult {
        xi_star: best.xi,
        phi_star: best.phi,
        f_star,
        f_traced,
        branch: if best.xi > 0.0 && best.xi.is_finite() {
            Branch::Interior
        } else {
            Branch::BoundaryHomodyne
        },
        gamma: vectors.gamma(best.phi),
        omega: vectors.omega(best.phi),
        p: vectors.p(best.phi),
        stationary_phases: phases,
    })
}
