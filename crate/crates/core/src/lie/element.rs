use std::sync::Arc;

use super::lyndon::{lyndon_basis, Bracket, LyndonElement};
use super::scalar::Scalar;
use super::series::{Alphabet, LieError, TruncatedSeries};
use crate::algebra::QuadPolynomial;

/// Coordinates of a series in the Lyndon bracket basis.
#[derive(Clone, Debug)]
pub struct LieElement<S: Scalar> {
    pub alphabet: Arc<Alphabet>,
    pub basis: Vec<LyndonElement>,
    pub coeffs: Vec<S>,
    pub residual_norm: f64,
}

impl<S: Scalar> LieElement<S> {
    pub fn coefficient(&self, word: &[u8]) -> Option<&S> {
        self.basis.iter().position(|b| b.word == word).map(|i| &self.coeffs[i])
    }

    /// Rebuilds the associative series from the bracket coordinates.
    pub fn to_series(&self, order: u32) -> TruncatedSeries<S> {
        let mut out = TruncatedSeries::zero(&self.alphabet, order);
        for (b, c) in self.basis.iter().zip(&self.coeffs) {
            for (w, k) in &b.expansion {
                out.add_word(w.clone(), c.scale_q(&crate::rational::qi(*k as i128)));
            }
        }
        out
    }

    /// `(bracket, coefficient)` rows for debugging.
    pub fn table(&self) -> Vec<(String, S)> {
        self.basis.iter().zip(&self.coeffs).map(|(b, c)| (b.bracket.display(&self.alphabet), c.clone())).collect()
    }
}

/// Projects `s` onto the free Lie algebra using the triangularity of the Lyndon basis.
///
/// Whatever is left after subtracting every basis component is reported as
/// `residual_norm`; a result above `tol` is an error.
pub fn project_to_lie<S: Scalar>(s: &TruncatedSeries<S>, tol: f64) -> Result<LieElement<S>, LieError> {
    let (el, rest) = project_with_rest(s);
    if rest > tol {
        return Err(LieError::NotLieElement(rest));
    }
    Ok(el)
}

/// Projection without the tolerance check.
pub fn project_with_rest<S: Scalar>(s: &TruncatedSeries<S>) -> (LieElement<S>, f64) {
    let alphabet = s.alphabet().clone();
    let basis = lyndon_basis(&alphabet, s.order());
    let mut rest = s.clone();
    let mut coeffs = Vec::with_capacity(basis.len());
    // per weight, words in increasing lexicographic order
    for b in &basis {
        let c = rest.coefficient(&b.word);
        if !c.is_zero() {
            for (w, k) in &b.expansion {
                rest.add_word(w.clone(), c.scale_q(&crate::rational::qi(-*k as i128)));
            }
        }
        coeffs.push(c);
    }
    let residual = rest.coeffs().values().map(|c| c.magnitude().powi(2)).sum::<f64>().sqrt();
    (LieElement { alphabet, basis, coeffs, residual_norm: residual }, residual)
}

/// Evaluates a bracket in the operator algebra with generator `g` mapped to `gens[g]`.
pub fn evaluate_bracket(b: &Bracket, gens: &[QuadPolynomial]) -> QuadPolynomial {
    match b {
        Bracket::Gen(g) => gens[*g as usize].clone(),
        Bracket::Br(x, y) => evaluate_bracket(x, gens).commutator(&evaluate_bracket(y, gens)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::series::gbch;

    #[test]
    fn projection_of_bch() {
        let ab = Alphabet::uniform(2);
        let t = 0.4;
        let mut s = TruncatedSeries::zero(&ab, 2);
        s.add_word(vec![0], t);
        s.add_word(vec![1], t);
        s.add_word(vec![0, 1], t * t / 2.0);
        s.add_word(vec![1, 0], -t * t / 2.0);
        let l = project_to_lie(&s, 1e-14).unwrap();
        assert_eq!(l.coeffs, vec![t, t, t * t / 2.0]);
        assert_eq!(l.residual_norm, 0.0);
    }

    #[test]
    fn word_ab_is_not_lie() {
        let ab = Alphabet::uniform(2);
        let mut s = TruncatedSeries::<f64>::zero(&ab, 2);
        s.add_word(vec![0, 1], 1.0);
        assert!(matches!(project_to_lie(&s, 1e-12), Err(LieError::NotLieElement(_))));
    }

    #[test]
    fn eq7_ordering_gives_commutator() {
        // e^{itB} e^{itA} e^{-itB} e^{-itA} with a = iA: second-order part t^2 [a, b] up to sign
        let ab = Alphabet::uniform(2);
        let t = 0.1;
        let f = |g: u8, x: f64| TruncatedSeries::generator(&ab, 3, g, x);
        let z = gbch(&[f(1, t), f(0, t), f(1, -t), f(0, -t)], 3).unwrap();
        let l = project_to_lie(&z, 1e-14).unwrap();
        // [b, a] = -[a, b]
        assert!((l.coefficient(&[0, 1]).unwrap() + t * t).abs() < 1e-15);
        assert!(l.coefficient(&[0]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn round_trip_series() {
        let ab = Alphabet::uniform(2);
        let f = |g: u8, x: f64| TruncatedSeries::generator(&ab, 5, g, x);
        let z = gbch(&[f(0, 0.3), f(1, -0.7), f(0, 0.2), f(1, 0.5)], 5).unwrap();
        let l = project_to_lie(&z, 1e-12).unwrap();
        assert!(l.to_series(5).sub(&z).norm() < 1e-14);
    }
}
