//! Straight-line homotopy continuation from a random start system.
//!
//! For each path a random complex point `x0` is drawn together with random
//! complex coefficients on the monomial support of every constraint; the start
//! system `G` is shifted so that `G(x0) = 0`. The path `H(x, s) = (1 - s) G(x) + s F(x)`
//! is tracked from `s = 0` to `s = 1` with an Euler predictor and a Newton corrector.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::newton::newton_solve;
use super::system::ConstraintSystem;
use crate::lie::MPoly;
use crate::rational::q_to_f64;

#[derive(Clone, Debug)]
pub struct HomotopyOptions {
    pub paths: usize,
    /// Box half-width for the real and imaginary parts of start points.
    pub radius: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Largest imaginary part accepted as a real endpoint.
    pub real_tol: f64,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        Self { paths: 128, radius: 2.0, min_step: 1e-7, max_step: 0.05, real_tol: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PathStatus {
    Real,
    Complex,
    Diverged,
    StepFailure,
    PolishFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct PathReport {
    pub index: usize,
    pub status: PathStatus,
    pub steps: usize,
    pub max_imag: f64,
}

#[derive(Clone, Debug)]
pub struct HomotopyResult {
    /// Distinct real solutions over the active unknowns, sorted by `max |x_i|`.
    pub solutions: Vec<Vec<f64>>,
    pub paths: Vec<PathReport>,
}

struct CPoly {
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl CPoly {
    fn from_mpoly(p: &MPoly, n: usize) -> Self {
        Self {
            terms: p.terms().iter().map(|(k, c)| (MPoly::exponents(*k, n), Complex64::new(q_to_f64(c), 0.0))).collect(),
        }
    }

    fn eval_grad(&self, x: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let n = x.len();
        let mut v = Complex64::new(0.0, 0.0);
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        for (e, c) in &self.terms {
            let mut m = *c;
            for (xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    m *= xi.powu(ei);
                }
            }
            v += m;
            for k in 0..n {
                if e[k] == 0 {
                    continue;
                }
                let mut d = c * e[k] as f64;
                for (j, (xj, &ej)) in x.iter().zip(e).enumerate() {
                    let p = if j == k { ej - 1 } else { ej };
                    if p > 0 {
                        d *= xj.powu(p);
                    }
                }
                g[k] += d;
            }
        }
        (v, g)
    }
}

struct Homotopy {
    target: Vec<CPoly>,
    start: Vec<CPoly>,
}

impl Homotopy {
    /// `H(x, s)`, `dH/dx`, and `dH/ds = F - G`.
    fn eval(&self, x: &[Complex64], s: f64) -> (DVector<Complex64>, DMatrix<Complex64>, DVector<Complex64>) {
        let n = x.len();
        let m = self.target.len();
        let mut h = DVector::zeros(m);
        let mut hs = DVector::zeros(m);
        let mut jac = DMatrix::zeros(m, n);
        for i in 0..m {
            let (fv, fg) = self.target[i].eval_grad(x);
            let (gv, gg) = self.start[i].eval_grad(x);
            h[i] = gv * (1.0 - s) + fv * s;
            hs[i] = fv - gv;
            for k in 0..n {
                jac[(i, k)] = gg[k] * (1.0 - s) + fg[k] * s;
            }
        }
        (h, jac, hs)
    }

    fn correct(&self, x: &mut [Complex64], s: f64, iters: usize) -> bool {
        for _ in 0..iters {
            let (h, jac, _) = self.eval(x, s);
            let Some(dx) = jac.lu().solve(&(-h)) else {
                return false;
            };
            let scale = 1.0 + x.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (xi, d) in x.iter_mut().zip(dx.iter()) {
                *xi += d;
            }
            if dx.iter().any(|d| !d.is_finite()) {
                return false;
            }
            if dx.norm() < 1e-11 * scale {
                return true;
            }
        }
        false
    }
}

fn random_c(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

fn track_path(
    cs: &ConstraintSystem,
    seed: u64,
    index: usize,
    opts: &HomotopyOptions,
) -> (PathReport, Option<Vec<f64>>) {
    let n = cs.variables.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let x0: Vec<Complex64> = (0..n).map(|_| random_c(&mut rng, opts.radius)).collect();
    let target: Vec<CPoly> = cs.constraints.iter().map(|c| CPoly::from_mpoly(&c.poly, n)).collect();
    let start: Vec<CPoly> = target
        .iter()
        .map(|f| {
            let mut terms: Vec<(Vec<u32>, Complex64)> = f
                .terms
                .iter()
                .filter(|(e, _)| e.iter().any(|&k| k > 0))
                .map(|(e, _)| (e.clone(), random_c(&mut rng, 1.0)))
                .collect();
            let shift = CPoly { terms: terms.clone() }.eval_grad(&x0).0;
            terms.push((vec![0; n], -shift));
            CPoly { terms }
        })
        .collect();
    let hom = Homotopy { target, start };
    let report = |status, steps, max_imag| PathReport { index, status, steps, max_imag };

    let mut x = x0;
    let mut s = 0.0f64;
    let mut h = 0.01f64;
    let mut steps = 0;
    let mut streak = 0;
    while s < 1.0 {
        steps += 1;
        if steps > 20_000 {
            return (report(PathStatus::StepFailure, steps, f64::NAN), None);
        }
        let step = h.min(1.0 - s);
        let (_, jac, hs) = hom.eval(&x, s);
        let Some(dx) = jac.lu().solve(&(-hs)) else {
            return (report(PathStatus::StepFailure, steps, f64::NAN), None);
        };
        let mut trial: Vec<Complex64> = x.iter().zip(dx.iter()).map(|(xi, d)| xi + d * step).collect();
        if hom.correct(&mut trial, s + step, 6) {
            x = trial;
            s += step;
            streak += 1;
            if streak >= 3 {
                h = (h * 2.0).min(opts.max_step);
                streak = 0;
            }
        } else {
            h *= 0.5;
            streak = 0;
            if h < opts.min_step {
                return (report(PathStatus::StepFailure, steps, f64::NAN), None);
            }
        }
        if x.iter().any(|v| v.norm() > 1e6) {
            return (report(PathStatus::Diverged, steps, f64::NAN), None);
        }
    }
    hom.correct(&mut x, 1.0, 20);
    let max_imag = x.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if max_imag > opts.real_tol {
        return (report(PathStatus::Complex, steps, max_imag), None);
    }
    let real: Vec<f64> = x.iter().map(|v| v.re).collect();
    match newton_solve(cs, &real) {
        Ok(sol) => (report(PathStatus::Real, steps, max_imag), Some(sol.x)),
        Err(_) => (report(PathStatus::PolishFailed, steps, max_imag), None),
    }
}

/// Tracks `opts.paths` paths in parallel and collects the distinct real endpoints.
///
/// The result depends only on the system, the options and `seed`.
pub fn homotopy_solve(cs: &ConstraintSystem, seed: u64, opts: &HomotopyOptions) -> HomotopyResult {
    let runs: Vec<(PathReport, Option<Vec<f64>>)> =
        (0..opts.paths).into_par_iter().map(|i| track_path(cs, seed, i, opts)).collect();
    let mut solutions: Vec<Vec<f64>> = Vec::new();
    let mut paths = Vec::with_capacity(runs.len());
    for (rep, sol) in runs {
        paths.push(rep);
        if let Some(x) = sol {
            let dup = solutions.iter().any(|s| s.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-7));
            if !dup {
                solutions.push(x);
            }
        }
    }
    let key = |x: &Vec<f64>| x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    solutions
        .sort_by(|a, b| key(a).total_cmp(&key(b)).then_with(|| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)));
    HomotopyResult { solutions, paths }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use crate::solver::ansatz::Ansatz;
    use crate::solver::system::Constraint;

    fn system(polys: Vec<MPoly>, vars: usize) -> ConstraintSystem {
        ConstraintSystem {
            ansatz: Ansatz::alternating(1),
            variables: (0..vars).map(|i| format!("x{i}")).collect(),
            constraints: polys
                .into_iter()
                .map(|poly| Constraint { poly, target: qi(0), label: String::new() })
                .collect(),
        }
    }

    #[test]
    fn x_squared_plus_one_has_no_real_roots() {
        let x = MPoly::var(0);
        let cs = system(vec![x.mul(&x).add(&MPoly::constant(qi(1)))], 1);
        let r = homotopy_solve(&cs, 7, &HomotopyOptions { paths: 16, ..Default::default() });
        assert!(r.solutions.is_empty());
        assert_eq!(r.paths.len(), 16);
    }

    #[test]
    fn finds_both_roots_of_a_quadratic() {
        let x = MPoly::var(0);
        let cs = system(vec![x.mul(&x).sub(&MPoly::constant(qi(2)))], 1);
        let r = homotopy_solve(&cs, 1, &HomotopyOptions { paths: 16, ..Default::default() });
        assert_eq!(r.solutions.len(), 2);
        assert!((r.solutions[0][0].abs() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn deterministic_given_seed() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let cs = system(
            vec![x.mul(&x).add(&y.mul(&y)).sub(&MPoly::constant(qi(4))), x.mul(&y).sub(&MPoly::constant(qi(1)))],
            2,
        );
        let opts = HomotopyOptions { paths: 24, ..Default::default() };
        let a = homotopy_solve(&cs, 42, &opts);
        let b = homotopy_solve(&cs, 42, &opts);
        assert_eq!(a.solutions, b.solutions);
        assert_eq!(a.solutions.len(), 4);
    }
}
