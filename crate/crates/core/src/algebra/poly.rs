use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{binomial, factorial, GaussQ, Q};

/// Exponents `(x, p)` of the canonical word `X^x P^p` on each mode.
///
/// Trailing modes with both exponents zero are trimmed, so the empty monomial
/// is the identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn from_modes(mut modes: Vec<(u32, u32)>) -> Self {
        while modes.last() == Some(&(0, 0)) {
            modes.pop();
        }
        Self(modes)
    }

    pub fn single(mode: usize, x: u32, p: u32) -> Self {
        let mut v = vec![(0, 0); mode + 1];
        v[mode] = (x, p);
        Self::from_modes(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mode(&self, k: usize) -> (u32, u32) {
        self.0.get(k).copied().unwrap_or((0, 0))
    }

    pub fn modes(&self) -> &[(u32, u32)] {
        &self.0
    }

    /// Number of modes up to and including the last one acted on.
    pub fn span(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(x, p)| x + p).sum()
    }

    /// Indices of modes carrying a nontrivial factor.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&k| self.0[k] != (0, 0)).collect()
    }
}

/// Quadrature letter used by [`canonicalize`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Letter {
    X(usize),
    P(usize),
}

/// Polynomial in the quadratures `X_k`, `P_k` with `[X_k, P_k] = i/2`,
/// stored in X-before-P normal order per mode.
///
/// Equality compares terms only; `n_modes` is a lower bound on the mode count.
#[derive(Clone, Debug, Default)]
pub struct QuadPolynomial {
    n_modes: usize,
    terms: BTreeMap<Monomial, GaussQ>,
}

impl PartialEq for QuadPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for QuadPolynomial {}

impl QuadPolynomial {
    pub fn zero(n_modes: usize) -> Self {
        Self { n_modes, terms: BTreeMap::new() }
    }

    pub fn scalar(c: GaussQ) -> Self {
        let mut p = Self::zero(1);
        p.add_term(Monomial::identity(), c);
        p
    }

    pub fn one() -> Self {
        Self::scalar(GaussQ::one())
    }

    pub fn monomial(m: Monomial, c: GaussQ) -> Self {
        let mut p = Self::zero(m.span().max(1));
        p.add_term(m, c);
        p
    }

    pub fn x(mode: usize) -> Self {
        Self::x_pow(mode, 1)
    }

    pub fn p(mode: usize) -> Self {
        Self::p_pow(mode, 1)
    }

    pub fn x_pow(mode: usize, j: u32) -> Self {
        Self::monomial(Monomial::single(mode, j, 0), GaussQ::one()).with_modes(mode + 1)
    }

    pub fn p_pow(mode: usize, j: u32) -> Self {
        Self::monomial(Monomial::single(mode, 0, j), GaussQ::one()).with_modes(mode + 1)
    }

    pub fn with_modes(mut self, n: usize) -> Self {
        self.n_modes = self.n_modes.max(n);
        self
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, GaussQ> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussQ {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scalar_part(&self) -> GaussQ {
        self.coeff(&Monomial::identity())
    }

    /// True when the only term (if any) is the identity.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(Monomial::is_identity)
    }

    pub fn without_scalar(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&Monomial::identity());
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussQ) {
        if c.is_zero() {
            return;
        }
        self.n_modes = self.n_modes.max(m.span());
        let entry = self.terms.entry(m.clone()).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussQ) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_modes);
        }
        Self { n_modes: self.n_modes, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn scale_q(&self, k: &Q) -> Self {
        self.scale(&GaussQ::real(*k))
    }

    /// Operator product `self * other`, normal ordered.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n_modes.max(other.n_modes));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                for (m, k) in monomial_product(ma, mb) {
                    out.add_term(m, &c * &k);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one().with_modes(self.n_modes);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.mul(other) - &other.mul(self)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.n_modes);
        for (m, c) in &self.terms {
            // (X^x P^p)^† = P^p X^x on each mode; modes commute.
            let mut acc = Self::scalar(c.conj());
            for (k, &(x, p)) in m.modes().iter().enumerate() {
                if x == 0 && p == 0 {
                    continue;
                }
                acc = acc.mul(&Self::p_pow(k, p).mul(&Self::x_pow(k, x)));
            }
            out = &out + &acc;
        }
        out.with_modes(self.n_modes)
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    /// Image under the Fourier rotation on `mode`: `X -> P`, `P -> -X`.
    pub fn fourier_conjugate(&self, mode: usize) -> Self {
        self.fourier_conjugate_pow(mode, 1)
    }

    pub fn fourier_conjugate_pow(&self, mode: usize, r: u32) -> Self {
        let mut cur = self.clone();
        for _ in 0..r % 4 {
            let mut out = Self::zero(cur.n_modes);
            for (m, c) in &cur.terms {
                let (x, p) = m.mode(mode);
                let mut rest = m.modes().to_vec();
                if mode < rest.len() {
                    rest[mode] = (0, 0);
                }
                let sign = if p % 2 == 1 { -GaussQ::one() } else { GaussQ::one() };
                let image = Self::p_pow(mode, x).mul(&Self::x_pow(mode, p));
                let rest = Self::monomial(Monomial::from_modes(rest), c * &sign);
                out = &out + &rest.mul(&image);
            }
            cur = out.with_modes(self.n_modes);
        }
        cur
    }

    pub fn real_part_is_zero(&self) -> bool {
        self.terms.values().all(|c| c.re.is_zero())
    }

    /// Largest mode index acted on, plus one.
    pub fn active_modes(&self) -> usize {
        self.terms.keys().map(Monomial::span).max().unwrap_or(0)
    }
}

/// Normal-ordered product of two canonical monomials, as `(monomial, factor)` pairs.
///
/// Per mode, `P^b X^c = sum_k k! C(b,k) C(c,k) (-i/2)^k X^(c-k) P^(b-k)`.
pub fn monomial_product(a: &Monomial, b: &Monomial) -> Vec<(Monomial, GaussQ)> {
    let span = a.span().max(b.span());
    let mut acc: Vec<(Vec<(u32, u32)>, GaussQ)> = vec![(Vec::with_capacity(span), GaussQ::one())];
    for k in 0..span {
        let (xa, pa) = a.mode(k);
        let (xb, pb) = b.mode(k);
        let kmax = pa.min(xb);
        let mut next = Vec::with_capacity(acc.len() * (kmax as usize + 1));
        for (modes, c) in &acc {
            for j in 0..=kmax {
                let w = factorial(j) * binomial(pa, j) * binomial(xb, j);
                let f = GaussQ::minus_half_i_pow(j).scale(&Q::from_integer(w));
                let mut m = modes.clone();
                m.push((xa + xb - j, pa + pb - j));
                next.push((m, c * &f));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(m, c)| (Monomial::from_modes(m), c)).collect()
}

/// Normal-ordered form of a word of quadrature letters.
pub fn canonicalize(word: &[Letter]) -> QuadPolynomial {
    let mut acc = QuadPolynomial::one();
    for &l in word {
        let f = match l {
            Letter::X(k) => QuadPolynomial::x(k),
            Letter::P(k) => QuadPolynomial::p(k),
        };
        acc = acc.mul(&f);
    }
    acc
}

pub fn commutator(a: &QuadPolynomial, b: &QuadPolynomial) -> QuadPolynomial {
    a.commutator(b)
}

impl<'a> Add<&'a QuadPolynomial> for &'a QuadPolynomial {
    type Output = QuadPolynomial;
    fn add(self, o: &QuadPolynomial) -> QuadPolynomial {
        let mut out = self.clone().with_modes(o.n_modes);
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a QuadPolynomial> for &'a QuadPolynomial {
    type Output = QuadPolynomial;
    fn sub(self, o: &QuadPolynomial) -> QuadPolynomial {
        let mut out = self.clone().with_modes(o.n_modes);
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a QuadPolynomial> for &'a QuadPolynomial {
    type Output = QuadPolynomial;
    fn mul(self, o: &QuadPolynomial) -> QuadPolynomial {
        QuadPolynomial::mul(self, o)
    }
}

impl Neg for &QuadPolynomial {
    type Output = QuadPolynomial;
    fn neg(self) -> QuadPolynomial {
        self.scale(&-GaussQ::one())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &(x, p)) in self.0.iter().enumerate() {
            for (letter, e) in [('X', x), ('P', p)] {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{letter}{k}")?;
                } else {
                    write!(f, "{letter}{k}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for QuadPolynomial {
    /// Terms in canonical order joined by ` + `, e.g. `1/2 * X0^2 P0 + -1/4 i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if m.is_identity() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} * {m}")?;
            }
        }
        Ok(())
    }
}
