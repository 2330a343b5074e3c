use nalgebra::{DMatrix, DVector};

use super::system::ConstraintSystem;
use super::SolverError;

#[derive(Clone, Debug)]
pub struct NewtonOptions {
    pub max_iter: usize,
    pub tol: f64,
    /// Iterates whose norm exceeds this are declared divergent.
    pub blowup: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { max_iter: 60, tol: 1e-12, blowup: 1e6 }
    }
}

#[derive(Clone, Debug)]
pub struct NewtonSolution {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Newton iteration on a square system; least squares through the SVD otherwise.
pub fn newton_solve(cs: &ConstraintSystem, start: &[f64]) -> Result<NewtonSolution, SolverError> {
    newton_solve_with(cs, start, &NewtonOptions::default())
}

pub fn newton_solve_with(
    cs: &ConstraintSystem,
    start: &[f64],
    opts: &NewtonOptions,
) -> Result<NewtonSolution, SolverError> {
    let n = cs.variables.len();
    if start.len() != n {
        return Err(SolverError::NotSquare { equations: cs.len(), unknowns: start.len() });
    }
    let mut x = start.to_vec();
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    for it in 0..opts.max_iter {
        let (f, jac) = cs.eval_jacobian(&x);
        let res = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !res.is_finite() {
            return Err(SolverError::Diverged { iteration: it });
        }
        if res < opts.tol {
            return Ok(NewtonSolution { x, residual: res, iterations: it });
        }
        // rounding floor: stop once the residual no longer improves
        if res < best * 0.5 {
            best = res;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 4 && best < opts.tol * 100.0 {
                return Ok(NewtonSolution { x, residual: res, iterations: it });
            }
        }
        let m = f.len();
        let j = DMatrix::from_fn(m, n, |r, c| jac[r][c]);
        let rhs = DVector::from_vec(f.iter().map(|v| -v).collect());
        let svd = j.svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if smin <= smax * 1e-13 || smax == 0.0 {
            return Err(SolverError::SingularJacobian { iteration: it });
        }
        let dx = svd.solve(&rhs, 0.0).map_err(|_| SolverError::SingularJacobian { iteration: it })?;
        for (xi, di) in x.iter_mut().zip(dx.iter()) {
            *xi += di;
        }
        if x.iter().any(|v| !v.is_finite() || v.abs() > opts.blowup) {
            return Err(SolverError::Diverged { iteration: it });
        }
    }
    let res = cs.max_residual(&x);
    Err(SolverError::MaxIterations { residual: res })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::MPoly;
    use crate::rational::qi;
    use crate::solver::ansatz::Ansatz;
    use crate::solver::system::Constraint;

    fn system(polys: Vec<MPoly>, vars: usize) -> ConstraintSystem {
        let ansatz = Ansatz::alternating(1);
        ConstraintSystem {
            ansatz,
            variables: (0..vars).map(|i| format!("x{i}")).collect(),
            constraints: polys
                .into_iter()
                .map(|poly| Constraint { poly, target: qi(0), label: String::new() })
                .collect(),
        }
    }

    #[test]
    fn linear_converges_in_one_step() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let cs = system(vec![x.add(&y).sub(&MPoly::constant(qi(3))), x.sub(&y).sub(&MPoly::constant(qi(1)))], 2);
        let sol = newton_solve(&cs, &[0.0, 0.0]).unwrap();
        assert!(sol.iterations <= 1);
        assert!((sol.x[0] - 2.0).abs() < 1e-14 && (sol.x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn no_real_root_reports_failure() {
        let x = MPoly::var(0);
        let cs = system(vec![x.mul(&x).add(&MPoly::constant(qi(1)))], 1);
        assert!(newton_solve(&cs, &[0.3]).is_err());
    }
}
