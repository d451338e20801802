//! Scalar and simplex optimizers used by the fidelity searches, thin wrappers over `argmin`.

use argmin::core::{CostFunction, Executor};
use argmin::solver::brent::{BrentOpt, BrentRoot};
use argmin::solver::neldermead::NelderMead;

use crate::error::{Error, Result};

struct Scalar<F>(F);

impl<F: Fn(f64) -> f64> CostFunction for Scalar<F> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, x: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok((self.0)(*x))
    }
}

struct Multi<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Multi<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        Ok((self.0)(x))
    }
}

fn failure(e: argmin::core::Error) -> Error {
    Error::NumericalFailure(e.to_string())
}

/// Minimizes `f` on `[a, b]` with Brent's method; returns `(x, f(x))`.
pub fn minimize_scalar<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, x_tol: f64) -> Result<(f64, f64)> {
    let solver = BrentOpt::new(a, b).set_tolerance(f64::EPSILON.sqrt(), x_tol);
    let res = Executor::new(Scalar(f), solver)
        .configure(|s| s.max_iters(500))
        .run()
        .map_err(failure)?;
    let state = res.state();
    let x = state
        .best_param
        .ok_or_else(|| Error::NumericalFailure("Brent minimization returned no point".into()))?;
    Ok((x, state.best_cost))
}

/// Root of `f` in `[a, b]`, which must bracket a sign change.
pub fn find_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidParameter(format!(
            "[{a}, {b}] does not bracket a root (f = {fa}, {fb})"
        )));
    }
    let res = Executor::new(Scalar(f), BrentRoot::new(a, b, tol))
        .configure(|s| s.max_iters(500))
        .run()
        .map_err(failure)?;
    res.state()
        .best_param
        .ok_or_else(|| Error::NumericalFailure("Brent root search returned no point".into()))
}

/// Nelder-Mead minimization from the given initial simplex; returns `(x, f(x))`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    simplex: Vec<Vec<f64>>,
    max_iters: u64,
) -> Result<(Vec<f64>, f64)> {
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-15)
        .map_err(failure)?;
    let res = Executor::new(Multi(f), solver)
        .configure(|s| s.max_iters(max_iters))
        .run()
        .map_err(failure)?;
    let state = res.state();
    let x = state
        .best_param
        .clone()
        .ok_or_else(|| Error::NumericalFailure("Nelder-Mead returned no point".into()))?;
    Ok((x, state.best_cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_minimum() {
        let (x, fx) = minimize_scalar(|x| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-12).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn brent_root() {
        let x = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-12);
        assert!(find_root(|x| x * x + 1.0, 0.0, 2.0, 1e-14).is_err());
    }

    #[test]
    fn simplex_minimum() {
        let (x, _) = nelder_mead(
            |p| (p[0] - 1.0).powi(2) + 3.0 * (p[1] + 0.5).powi(2),
            vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![0.0, 0.5]],
            2000,
        )
        .unwrap();
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] + 0.5).abs() < 1e-6);
    }
}
