//! Gate identities that hold exactly, up to a tracked phase.

use serde::Serialize;

use crate::algebra::{Quad, QuadPolynomial};
use crate::fock::{sequence_distance, FockError, FockSpace};
use crate::rational::{q_from_f64, GaussQ};
use crate::sequence::{GateSequence, Generator, LogicalSequence};

/// `exp(i t^2 X^2) = exp(-i t^4/27) exp(i(2t/3)P) exp(i t X^3) exp(-i(2t/3)P) exp(-i t X^3) exp(-i(t^3/3)X)`
/// on `mode`, with `Q` in place of `X` and its conjugate partner in place of `P`.
pub fn x2_logical(mode: usize, quad: Quad, t: f64) -> LogicalSequence {
    let (qp, sp) = Quad::P.frame_image(quad.parity());
    let sp = sp as f64;
    let mut l = LogicalSequence::new(mode + 1);
    l.push(Generator::Power { mode, quad: qp, power: 1 }, sp * 2.0 * t / 3.0);
    l.push(Generator::Power { mode, quad, power: 3 }, t);
    l.push(Generator::Power { mode, quad: qp, power: 1 }, -sp * 2.0 * t / 3.0);
    l.push(Generator::Power { mode, quad, power: 3 }, -t);
    l.push(Generator::Power { mode, quad, power: 1 }, -t.powi(3) / 3.0);
    l.phase = -t.powi(4) / 27.0;
    l
}

/// `exp(i theta Q^2)` on `mode` through [`x2_logical`]; negative angles use the inverse.
pub fn x2_angle_logical(mode: usize, quad: Quad, theta: f64) -> LogicalSequence {
    let l = x2_logical(mode, quad, theta.abs().sqrt());
    if theta >= 0.0 {
        l
    } else {
        inverse(&l)
    }
}

fn inverse(l: &LogicalSequence) -> LogicalSequence {
    assert!(l.tail.iter().all(|t| *t == 0));
    let mut out = LogicalSequence::new(l.n_modes());
    for g in l.gates.iter().rev() {
        out.push(g.generator, -g.theta);
    }
    out.phase = -l.phase;
    out
}

/// Physical form of `exp(i t^2 X_0^2)`: five gates, the `P` gates wrapped in Fourier
/// rotations, and a global phase.
pub fn exact_x2_sequence(t: f64) -> GateSequence {
    x2_logical(0, Quad::X, t).lower()
}

/// `exp(-ik P_b^3) exp(ia X_a X_b) exp(ik P_b^3) exp(-2ia X_a X_b) exp(ik P_b^3) exp(ia X_a X_b) exp(-ik P_b^3)`
/// `= exp(i (3/2) k a^2 X_a^2 P_b)`.
pub fn pdc_logical_params(a: usize, b: usize, k: f64, alpha: f64) -> LogicalSequence {
    let mut l = LogicalSequence::new(a.max(b) + 1);
    let cubic = Generator::Power { mode: b, quad: Quad::P, power: 3 };
    let pair = Generator::Pair { a: (a, Quad::X), b: (b, Quad::X) };
    l.push(cubic, -k);
    l.push(pair, alpha);
    l.push(cubic, k);
    l.push(pair, -2.0 * alpha);
    l.push(cubic, k);
    l.push(pair, alpha);
    l.push(cubic, -k);
    l
}

/// `exp(i theta Q_a^2 Q_b)` for any quadratures, through the down-conversion identity in
/// rotated frames, with `|k| = |alpha|`.
pub fn pdc_logical(square: (usize, Quad), linear: (usize, Quad), theta: f64) -> LogicalSequence {
    let (a, qa) = square;
    let (b, qb) = linear;
    let ra = qa.parity();
    let rb = qb.other().parity();
    let (img_p, sigma) = Quad::P.frame_image(rb);
    debug_assert_eq!(img_p, qb);
    let native = theta * sigma as f64;
    let alpha = (2.0 * native.abs() / 3.0).cbrt();
    let mut out = LogicalSequence::new(a.max(b) + 1);
    if alpha == 0.0 {
        return out;
    }
    let k = native / (1.5 * alpha * alpha);
    for g in pdc_logical_params(a, b, k, alpha).gates {
        let (generator, sign) = match g.generator {
            Generator::Power { mode, quad, power } => {
                let (q, s) = quad.frame_image(rb);
                (Generator::Power { mode, quad: q, power }, (s as f64).powi(power as i32))
            }
            Generator::Pair { a: (ma, xa), b: (mb, xb) } => {
                let (q1, s1) = xa.frame_image(ra);
                let (q2, s2) = xb.frame_image(rb);
                (Generator::Pair { a: (ma, q1), b: (mb, q2) }, (s1 * s2) as f64)
            }
        };
        out.push(generator, g.theta * sign);
    }
    out
}

/// Physical form of the down-conversion identity on modes 0 and 1.
pub fn exact_pdc_sequence(k: f64, alpha: f64) -> GateSequence {
    let mut s = pdc_logical_params(0, 1, k, alpha).lower();
    s.n_modes = 2;
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugationReport {
    pub t: f64,
    /// `exp(ad_{itX^3})(itP^2)` equals `it (P - (3t/2) X^2)^2` in exact arithmetic.
    pub symbolic: bool,
    pub distance: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// `exp(itX^3) exp(itP^2) exp(-itX^3) = exp(it (P - (3t/2) X^2)^2)`, checked symbolically
/// and on the low Fock subspace.
pub fn conjugation_identity_check(t: f64, space: &FockSpace, d: usize) -> Result<ConjugationReport, FockError> {
    let tq = GaussQ::real(q_from_f64(t).expect("finite t"));
    let it = &GaussQ::i() * &tq;
    let a = QuadPolynomial::x_pow(0, 3).scale(&it);
    let mut term = QuadPolynomial::p_pow(0, 2).scale(&it);
    let mut lhs = term.clone();
    for k in 1..=4 {
        term = a.commutator(&term).scale(&GaussQ::real(crate::rational::q(1, k)));
        lhs = &lhs + &term;
    }
    let shifted = &QuadPolynomial::p(0) - &QuadPolynomial::x_pow(0, 2).scale(&tq.scale(&crate::rational::q(3, 2)));
    let exponent = shifted.mul(&shifted);
    let symbolic = lhs == exponent.scale(&it) && term.is_zero();

    let mut l = LogicalSequence::new(1);
    l.push(Generator::Power { mode: 0, quad: Quad::X, power: 3 }, t);
    l.push(Generator::Power { mode: 0, quad: Quad::P, power: 2 }, t);
    l.push(Generator::Power { mode: 0, quad: Quad::X, power: 3 }, -t);
    let distance = sequence_distance(space, &l.lower(), &exponent, t, d)?;
    let threshold = 1e-5;
    Ok(ConjugationReport { t, symbolic, distance, threshold, pass: symbolic && distance < threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x2_sequence_shape() {
        let s = exact_x2_sequence(0.3);
        let non_f = s.gates.iter().filter(|g| !matches!(g, crate::sequence::Gate::Fourier(_))).count();
        assert_eq!(non_f, 5);
        assert!(exact_x2_sequence(0.0).is_empty());
    }

    #[test]
    fn pdc_degenerate_parameters_cancel() {
        let l = pdc_logical_params(0, 1, 0.0, 0.5);
        assert!(crate::sequence::merge_adjacent(&l).gates.is_empty());
        let l = pdc_logical_params(0, 1, 0.2, 0.0);
        assert!(crate::sequence::merge_adjacent(&l).gates.is_empty());
    }
}
