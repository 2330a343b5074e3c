use serde::Serialize;

use super::CompileError;
use crate::algebra::QuadPolynomial;
use crate::rational::{q, GaussQ};

/// One factor `exp(i time term)` of a split product.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitFactor {
    pub term: usize,
    pub time: f64,
}

/// Product formula over `n_terms` terms for total time `t`.
///
/// Order 1 is the sequential product; order 2 is the symmetric splitting
/// `T_1(t/2) ... T_(n-1)(t/2) T_n(t) T_(n-1)(t/2) ... T_1(t/2)`.
pub fn split(n_terms: usize, t: f64, order: u32) -> Result<Vec<SplitFactor>, CompileError> {
    match order {
        1 => Ok((0..n_terms).map(|term| SplitFactor { term, time: t }).collect()),
        2 => {
            if n_terms == 0 {
                return Ok(vec![]);
            }
            let half = t / 2.0;
            let mut out: Vec<SplitFactor> = (0..n_terms - 1).map(|term| SplitFactor { term, time: half }).collect();
            out.push(SplitFactor { term: n_terms - 1, time: t });
            out.extend((0..n_terms - 1).rev().map(|term| SplitFactor { term, time: half }));
            Ok(out)
        }
        o => Err(CompileError::InvalidArgument(format!("splitting order must be 1 or 2, got {o}"))),
    }
}

/// Leading splitting error of `prod exp(i t H_k)`, as `|t|^(order+1)` times the
/// coefficient 1-norm of the leading bracket polynomial.
pub fn splitting_error(terms: &[QuadPolynomial], t: f64, order: u32) -> f64 {
    if terms.len() < 2 {
        return 0.0;
    }
    let n = terms.iter().map(|h| h.n_modes()).max().unwrap_or(1);
    let mut e = QuadPolynomial::zero(n);
    match order {
        1 => {
            for (j, a) in terms.iter().enumerate() {
                for b in &terms[j + 1..] {
                    e = &e + &a.commutator(b).scale(&GaussQ::real(q(1, 2)));
                }
            }
        }
        _ => {
            for (k, a) in terms.iter().enumerate().take(terms.len() - 1) {
                let mut b = QuadPolynomial::zero(n);
                for h in &terms[k + 1..] {
                    b = &b + h;
                }
                let ab = a.commutator(&b);
                e = &e + &a.commutator(&ab).scale(&GaussQ::real(q(-1, 24)));
                e = &e + &b.commutator(&ab).scale(&GaussQ::real(q(-1, 12)));
            }
        }
    }
    let norm: f64 = e.terms().values().map(|c| c.to_c64().norm()).sum();
    norm * t.abs().powi(order as i32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;

    #[test]
    fn kerr_pattern() {
        let f = split(3, 0.1, 2).unwrap();
        let got: Vec<(usize, f64)> = f.iter().map(|s| (s.term, s.time)).collect();
        assert_eq!(got, vec![(0, 0.05), (1, 0.05), (2, 0.1), (1, 0.05), (0, 0.05)]);
    }

    #[test]
    fn single_term_is_one_factor() {
        for order in [1, 2] {
            assert_eq!(split(1, 0.3, order).unwrap(), vec![SplitFactor { term: 0, time: 0.3 }]);
        }
        assert!(split(2, 0.1, 3).is_err());
    }

    #[test]
    fn commuting_terms_have_no_splitting_error() {
        let a = parse_polynomial("X0^3").unwrap();
        let b = parse_polynomial("X0 + X0^2").unwrap();
        for order in [1, 2] {
            assert_eq!(splitting_error(&[a.clone(), b.clone()], 0.1, order), 0.0);
        }
        let c = parse_polynomial("P0^2").unwrap();
        assert!(splitting_error(&[a, c], 0.1, 2) > 0.0);
    }
}
