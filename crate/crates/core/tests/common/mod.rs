#![allow(dead_code)]

use cvdecomp::algebra::{Monomial, QuadPolynomial};
use cvdecomp::rational::{q, GaussQ};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random monomial of total degree at most `max_degree` on `modes` modes.
pub fn random_monomial(r: &mut impl Rng, modes: usize, max_degree: u32) -> Monomial {
    let degree = r.random_range(0..=max_degree);
    let mut exps = vec![(0u32, 0u32); modes];
    for _ in 0..degree {
        let m = r.random_range(0..modes);
        if r.random_bool(0.5) {
            exps[m].0 += 1;
        } else {
            exps[m].1 += 1;
        }
    }
    Monomial::from_modes(exps)
}

pub fn random_coefficient(r: &mut impl Rng) -> GaussQ {
    let re = q(r.random_range(-6..=6), r.random_range(1..=4));
    let im = if r.random_bool(0.5) { q(r.random_range(-6..=6), r.random_range(1..=4)) } else { q(0, 1) };
    GaussQ::new(re, im)
}

pub fn random_polynomial(r: &mut impl Rng, modes: usize, max_degree: u32, terms: usize) -> QuadPolynomial {
    let mut p = QuadPolynomial::zero(modes);
    for _ in 0..terms {
        p.add_term(random_monomial(r, modes, max_degree), random_coefficient(r));
    }
    p
}

/// `p + p†`, Hermitian by construction.
pub fn random_hermitian(r: &mut impl Rng, modes: usize, max_degree: u32, terms: usize) -> QuadPolynomial {
    let p = random_polynomial(r, modes, max_degree, terms);
    &p + &p.adjoint()
}
