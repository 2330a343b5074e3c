use std::fmt;

use serde::{Deserialize, Serialize};

use super::QuadPolynomial;

/// One of the two quadratures of a mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quad {
    X,
    P,
}

impl Quad {
    /// `F^r Q F^-r` as `(quadrature, sign)`; `F X F^-1 = P` and `F P F^-1 = -X`.
    pub fn frame_image(self, r: u32) -> (Quad, i32) {
        let r = (r % 4) as usize;
        match self {
            Quad::X => [(Quad::X, 1), (Quad::P, 1), (Quad::X, -1), (Quad::P, -1)][r],
            Quad::P => [(Quad::P, 1), (Quad::X, -1), (Quad::P, -1), (Quad::X, 1)][r],
        }
    }

    /// Frame parity a Fourier frame must have to host this quadrature as an X gate.
    pub fn parity(self) -> u32 {
        match self {
            Quad::X => 0,
            Quad::P => 1,
        }
    }

    pub fn other(self) -> Quad {
        match self {
            Quad::X => Quad::P,
            Quad::P => Quad::X,
        }
    }

    pub fn pow(self, mode: usize, j: u32) -> QuadPolynomial {
        match self {
            Quad::X => QuadPolynomial::x_pow(mode, j),
            Quad::P => QuadPolynomial::p_pow(mode, j),
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quad::X => write!(f, "X"),
            Quad::P => write!(f, "P"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::GaussQ;

    #[test]
    fn frame_images_match_polynomial_fourier() {
        for q in [Quad::X, Quad::P] {
            for r in 0..4 {
                let (img, sign) = q.frame_image(r);
                let lhs = q.pow(0, 1).fourier_conjugate_pow(0, r);
                let rhs = img.pow(0, 1).scale(&GaussQ::from_int(sign as i128));
                assert_eq!(lhs, rhs, "{q} r={r}");
            }
        }
    }
}
