//! Truncated Fock-space oracle for gate sequences and exponentials of polynomials.
//!
//! Basis index of a multi-mode state is `n_0 N^(K-1) + ... + n_(K-1)`, mode 0 most
//! significant. Gates act exactly on the truncated space: `exp(i s X^j)` through the
//! eigenbasis of the truncated `X`, the Fourier gate through its diagonal
//! `exp(i π/2 (n + 1/2))`. Hamiltonians are compressed to the first `N` levels
//! per mode without corner defects.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::QuadPolynomial;
use crate::sequence::{Gate, GateSequence};

/// Largest total dimension accepted.
pub const MAX_DIM: usize = 4096;
pub const DEFAULT_SINGLE_MODE_DIM: usize = 64;
pub const DEFAULT_TWO_MODE_DIM: usize = 24;
pub const DEFAULT_SUBSPACE: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("truncation {0} is too small (need at least 4 levels)")]
    TooSmall(usize),
    #[error("dimension {n}^{modes} exceeds the limit of {MAX_DIM}")]
    DimensionTooLarge { n: usize, modes: usize },
    #[error("operator acts on mode {mode} but the space has {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },
}

type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Truncated `X = (a + a†)/2` and `P = i(a† - a)/2` on `n` levels.
pub fn quadratures(n: usize) -> (CMat, CMat) {
    let mut x = CMat::zeros(n, n);
    let mut p = CMat::zeros(n, n);
    for k in 1..n {
        let s = (k as f64).sqrt() / 2.0;
        x[(k - 1, k)] = c(s);
        x[(k, k - 1)] = c(s);
        p[(k, k - 1)] = Complex64::new(0.0, s);
        p[(k - 1, k)] = Complex64::new(0.0, -s);
    }
    (x, p)
}

#[derive(Clone, Debug)]
pub struct FockSpace {
    pub n: usize,
    pub modes: usize,
    x_values: Vec<f64>,
    x_vectors: DMatrix<f64>,
    fourier: Vec<Complex64>,
}

impl FockSpace {
    pub fn new(n: usize, modes: usize) -> Result<Self, FockError> {
        if n < 4 {
            return Err(FockError::TooSmall(n));
        }
        let modes = modes.max(1);
        match n.checked_pow(modes as u32) {
            Some(d) if d <= MAX_DIM => {}
            _ => return Err(FockError::DimensionTooLarge { n, modes }),
        }
        let mut xr = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let s = (k as f64).sqrt() / 2.0;
            xr[(k - 1, k)] = s;
            xr[(k, k - 1)] = s;
        }
        let eig = xr.symmetric_eigen();
        let fourier = (0..n).map(|k| Complex64::from_polar(1.0, FRAC_PI_2 * (k as f64 + 0.5))).collect();
        Ok(Self { n, modes, x_values: eig.eigenvalues.iter().copied().collect(), x_vectors: eig.eigenvectors, fourier })
    }

    /// Default truncation for the mode count: 64 levels for one mode, 24 per mode otherwise.
    pub fn default_for(modes: usize) -> Result<Self, FockError> {
        let n = if modes <= 1 { DEFAULT_SINGLE_MODE_DIM } else { DEFAULT_TWO_MODE_DIM };
        Self::new(n, modes)
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.modes as u32)
    }

    fn stride(&self, mode: usize) -> usize {
        self.n.pow((self.modes - 1 - mode) as u32)
    }

    fn check_mode(&self, mode: usize) -> Result<(), FockError> {
        if mode < self.modes {
            Ok(())
        } else {
            Err(FockError::ModeOutOfRange { mode, modes: self.modes })
        }
    }

    /// Basis indices whose every mode occupation is below `d`.
    pub fn subspace_indices(&self, d: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| (0..self.modes).all(|m| (i / self.stride(m)) % self.n < d)).collect()
    }

    /// Columns of the identity on the low subspace.
    pub fn subspace_block(&self, d: usize) -> CMat {
        let idx = self.subspace_indices(d);
        let mut b = CMat::zeros(self.dim(), idx.len());
        for (j, &i) in idx.iter().enumerate() {
            b[(i, j)] = c(1.0);
        }
        b
    }

    /// Applies a single-mode `n x n` matrix to every column of `b`.
    fn apply_single(&self, mode: usize, g: &DMatrix<Complex64>, b: &mut CMat) {
        let n = self.n;
        let stride = self.stride(mode);
        let dim = self.dim();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for col in 0..b.ncols() {
            let mut column = b.column_mut(col);
            for base in 0..dim {
                if !(base / stride).is_multiple_of(n) {
                    continue;
                }
                for (k, v) in buf.iter_mut().enumerate() {
                    *v = column[base + k * stride];
                }
                for (r, o) in out.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, v) in buf.iter().enumerate() {
                        acc += g[(r, k)] * v;
                    }
                    *o = acc;
                }
                for (k, o) in out.iter().enumerate() {
                    column[base + k * stride] = *o;
                }
            }
        }
    }

    fn apply_diag(&self, mode: usize, diag: &[Complex64], b: &mut CMat) {
        let stride = self.stride(mode);
        for col in 0..b.ncols() {
            for (i, v) in b.column_mut(col).iter_mut().enumerate() {
                *v *= diag[(i / stride) % self.n];
            }
        }
    }

    fn x_basis(&self, transpose: bool) -> CMat {
        let v = self.x_vectors.map(c);
        if transpose {
            v.transpose()
        } else {
            v
        }
    }

    /// `b <- gate * b`.
    pub fn apply_gate(&self, gate: &Gate, b: &mut CMat) -> Result<(), FockError> {
        match *gate {
            Gate::Fourier(m) => {
                self.check_mode(m)?;
                self.apply_diag(m, &self.fourier, b);
            }
            Gate::X { mode, power, s } => {
                self.check_mode(mode)?;
                let phases: Vec<Complex64> =
                    self.x_values.iter().map(|x| Complex64::from_polar(1.0, s * x.powi(power as i32))).collect();
                self.apply_single(mode, &self.x_basis(true), b);
                self.apply_diag(mode, &phases, b);
                self.apply_single(mode, &self.x_basis(false), b);
            }
            Gate::Cz { a, b: mb, s } => {
                self.check_mode(a)?;
                self.check_mode(mb)?;
                let vt = self.x_basis(true);
                let v = self.x_basis(false);
                self.apply_single(a, &vt, b);
                self.apply_single(mb, &vt, b);
                let (sa, sb) = (self.stride(a), self.stride(mb));
                for col in 0..b.ncols() {
                    for (i, val) in b.column_mut(col).iter_mut().enumerate() {
                        let xa = self.x_values[(i / sa) % self.n];
                        let xb = self.x_values[(i / sb) % self.n];
                        *val *= Complex64::from_polar(1.0, 2.0 * s * xa * xb);
                    }
                }
                self.apply_single(a, &v, b);
                self.apply_single(mb, &v, b);
            }
        }
        Ok(())
    }

    /// `exp(i phase) G_0 G_1 ... G_(n-1) b`.
    pub fn apply_sequence(&self, seq: &GateSequence, b: &CMat) -> Result<CMat, FockError> {
        let mut out = b.clone();
        for g in seq.gates.iter().rev() {
            self.apply_gate(g, &mut out)?;
        }
        Ok(out * Complex64::from_polar(1.0, seq.global_phase))
    }

    pub fn gate_unitary(&self, gate: &Gate) -> Result<CMat, FockError> {
        let mut u = CMat::identity(self.dim(), self.dim());
        self.apply_gate(gate, &mut u)?;
        Ok(u)
    }

    pub fn sequence_unitary(&self, seq: &GateSequence) -> Result<CMat, FockError> {
        self.apply_sequence(seq, &CMat::identity(self.dim(), self.dim()))
    }

    /// Compression of `h` to the truncated space, computed in a padded space so that
    /// every retained matrix element is exact.
    pub fn operator(&self, h: &QuadPolynomial) -> Result<CMat, FockError> {
        if h.active_modes() > self.modes {
            return Err(FockError::ModeOutOfRange { mode: h.active_modes() - 1, modes: self.modes });
        }
        let pad = self.n + h.total_degree() as usize + 1;
        let (x, p) = quadratures(pad);
        let power = |m: &CMat, e: u32| -> CMat {
            let mut r = CMat::identity(pad, pad);
            for _ in 0..e {
                r = &r * m;
            }
            r
        };
        let mut out = CMat::zeros(self.dim(), self.dim());
        for (mono, coef) in h.terms() {
            let mut acc = CMat::from_element(1, 1, coef.to_c64());
            for k in 0..self.modes {
                let (a, b) = mono.mode(k);
                let full = power(&x, a) * power(&p, b);
                let small = full.view((0, 0), (self.n, self.n)).into_owned();
                acc = acc.kronecker(&small);
            }
            out += acc;
        }
        Ok(out)
    }

    /// `exp(i t H)` for the Hermitian part of the compressed `h`.
    pub fn target_unitary(&self, h: &QuadPolynomial, t: f64) -> Result<CMat, FockError> {
        let m = self.operator(h)?;
        Ok(exp_i_hermitian(&m, t))
    }
}

/// `exp(i t (M + M†)/2)` by Hermitian eigendecomposition.
pub fn exp_i_hermitian(m: &CMat, t: f64) -> CMat {
    let herm = (m + m.adjoint()) * c(0.5);
    let eig = herm.symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, t * l));
    let mut scaled = v.clone();
    for (j, ph) in phases.iter().enumerate() {
        for val in scaled.column_mut(j).iter_mut() {
            *val *= ph;
        }
    }
    scaled * v.adjoint()
}

/// `min_θ ||U - e^{iθ} V||` on the given columns, with `θ = arg tr(V† U)`.
pub fn subspace_distance(u: &CMat, v: &CMat) -> f64 {
    let overlap = (v.adjoint() * u).trace();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0) };
    let diff = u - v * phase;
    diff.singular_values().max()
}

/// `||U† U - I||` in operator norm.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let d = u.adjoint() * u - CMat::identity(u.ncols(), u.ncols());
    d.singular_values().max()
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceReport {
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub distance: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl DistanceReport {
    pub fn new(name: &str, space: &FockSpace, d: usize, distance: f64, threshold: f64) -> Self {
        let warning =
            (4 * d > space.n).then(|| format!("subspace {d} exceeds a quarter of the truncation {}", space.n));
        Self { name: name.into(), n: space.n, d, distance, threshold, pass: distance < threshold, warning }
    }
}

/// Distance between a gate sequence and `exp(i t h)` on the low subspace.
pub fn sequence_distance(
    space: &FockSpace,
    seq: &GateSequence,
    h: &QuadPolynomial,
    t: f64,
    d: usize,
) -> Result<f64, FockError> {
    let block = space.subspace_block(d);
    let u = space.apply_sequence(seq, &block)?;
    let v = space.target_unitary(h, t)? * &block;
    Ok(subspace_distance(&u, &v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;

    #[test]
    fn ccr_holds_except_in_the_corner() {
        let n = 32;
        let (x, p) = quadratures(n);
        let comm = &x * &p - &p * &x;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j && i < n - 1 { Complex64::new(0.0, 0.5) } else { c(0.0) };
                if i == n - 1 && j == n - 1 {
                    assert!((comm[(i, j)] - Complex64::new(0.0, 0.5)).norm() > 1.0);
                } else {
                    assert!((comm[(i, j)] - expect).norm() < 1e-12, "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn fourier_fixes_vacuum_and_is_unitary() {
        let s = FockSpace::new(16, 1).unwrap();
        let f = s.gate_unitary(&Gate::Fourier(0)).unwrap();
        assert!((f[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(unitarity_defect(&f) < 1e-12);
    }

    #[test]
    fn empty_sequence_is_identity() {
        let s = FockSpace::new(8, 2).unwrap();
        let u = s.sequence_unitary(&GateSequence::new(2)).unwrap();
        assert_eq!(u, CMat::identity(64, 64));
    }

    #[test]
    fn x_gate_matches_target_exponential() {
        let s = FockSpace::new(40, 1).unwrap();
        let g = Gate::X { mode: 0, power: 2, s: 0.3 };
        let mut seq = GateSequence::new(1);
        seq.push(g);
        let h = parse_polynomial("X0^2").unwrap();
        assert!(sequence_distance(&s, &seq, &h, 0.3, 6).unwrap() < 1e-10);
    }

    #[test]
    fn cz_matches_target_exponential() {
        let s = FockSpace::new(20, 2).unwrap();
        let mut seq = GateSequence::new(2);
        seq.push(Gate::Cz { a: 0, b: 1, s: 0.2 });
        let h = parse_polynomial("X0 X1").unwrap();
        assert!(sequence_distance(&s, &seq, &h, 0.4, 4).unwrap() < 1e-9);
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(FockSpace::new(64, 3), Err(FockError::DimensionTooLarge { .. })));
        assert!(matches!(FockSpace::new(2, 1), Err(FockError::TooSmall(2))));
    }
}
