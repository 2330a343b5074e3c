//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Exponent vectors are packed into a `u128`, eight bits per variable, so at
//! most 16 variables of degree at most 255 each.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{q_to_f64, Q};

pub const MAX_VARS: usize = 16;

#[inline]
fn exp_of(key: u128, var: usize) -> u32 {
    ((key >> (8 * var)) & 0xff) as u32
}

#[inline]
fn unit(var: usize) -> u128 {
    1u128 << (8 * var)
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly {
    /// Sorted by key, no zero coefficients.
    terms: Vec<(u128, Q)>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(0, c)] }
        }
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS, "too many polynomial variables");
        Self { terms: vec![(unit(i), Q::one())] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u128, Q)] {
        &self.terms
    }

    pub fn exponents(key: u128, n_vars: usize) -> Vec<u32> {
        (0..n_vars).map(|v| exp_of(key, v)).collect()
    }

    pub fn constant_term(&self) -> Q {
        match self.terms.first() {
            Some((0, c)) => *c,
            _ => Q::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(k, _)| *k == 0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(k, _)| (0..MAX_VARS).map(|v| exp_of(*k, v)).sum()).max().unwrap_or(0)
    }

    /// Variables that occur with nonzero exponent.
    pub fn variables(&self) -> Vec<usize> {
        let mut seen = 0u128;
        for (k, _) in &self.terms {
            seen |= *k;
        }
        (0..MAX_VARS).filter(|&v| exp_of(seen, v) != 0).collect()
    }

    fn from_map(map: HashMap<u128, Q>) -> Self {
        let mut terms: Vec<(u128, Q)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|(k, _)| *k);
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u128, Q)>) -> Self {
        let mut map: HashMap<u128, Q> = HashMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert_with(Q::zero) += c;
        }
        Self::from_map(map)
    }

    fn merge(&self, other: &Self, sign: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len() || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len() || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                out.push(self.terms[i]);
                i += 1;
            } else if take_right {
                let (k, c) = other.terms[j];
                out.push((k, if sign { -c } else { c }));
                j += 1;
            } else {
                let c = if sign { self.terms[i].1 - other.terms[j].1 } else { self.terms[i].1 + other.terms[j].1 };
                if !c.is_zero() {
                    out.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.terms.len() == 1 && other.terms[0].0 == 0 {
            return self.scale(&other.terms[0].1);
        }
        if self.terms.len() == 1 && self.terms[0].0 == 0 {
            return other.scale(&self.terms[0].1);
        }
        let mut map: HashMap<u128, Q> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                // packed exponents add without carry while each stays below 256
                let entry = map.entry(ka + kb).or_insert_with(Q::zero);
                *entry += ca * cb;
            }
        }
        Self::from_map(map)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Q::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(k, c)| {
            let e = exp_of(*k, var);
            (e > 0).then(|| (k - unit(var), c * Q::from_integer(e as i128)))
        });
        Self::from_terms(terms)
    }

    /// Replaces variable `var` by the constant `value`.
    pub fn substitute(&self, var: usize, value: &Q) -> Self {
        let terms = self.terms.iter().map(|(k, c)| {
            let e = exp_of(*k, var);
            let mut f = Q::one();
            for _ in 0..e {
                f *= value;
            }
            (k - (e as u128) * unit(var), c * f)
        });
        Self::from_terms(terms)
    }

    /// Renames variables: variable `v` becomes `map[v]`.
    pub fn relabel(&self, map: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(k, c)| {
            let mut key = 0u128;
            for (v, &to) in map.iter().enumerate() {
                key += (exp_of(*k, v) as u128) * unit(to);
            }
            (key, *c)
        });
        Self::from_terms(terms)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(k, c)| q_to_f64(c) * monomial_value(*k, x)).sum()
    }

    /// Value and gradient at `x`.
    pub fn eval_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = x.len();
        let mut val = 0.0;
        let mut grad = vec![0.0; n];
        for (k, c) in &self.terms {
            let c = q_to_f64(c);
            val += c * monomial_value(*k, x);
            for (v, g) in grad.iter_mut().enumerate() {
                let e = exp_of(*k, v);
                if e == 0 {
                    continue;
                }
                let mut m = c * e as f64;
                for (w, xw) in x.iter().enumerate() {
                    let ew = exp_of(*k, w) - u32::from(w == v);
                    if ew > 0 {
                        m *= xw.powi(ew as i32);
                    }
                }
                *g += m;
            }
        }
        (val, grad)
    }

    /// Sum of absolute coefficient values.
    pub fn l1(&self) -> f64 {
        self.terms.iter().map(|(_, c)| q_to_f64(c).abs()).sum()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            let mut s = if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) };
            for (v, name) in names.iter().enumerate() {
                match exp_of(*k, v) {
                    0 => {}
                    1 => s.push_str(&format!("*{name}")),
                    e => s.push_str(&format!("*{name}^{e}")),
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

fn monomial_value(key: u128, x: &[f64]) -> f64 {
    let mut m = 1.0;
    for (v, xv) in x.iter().enumerate() {
        let e = exp_of(key, v);
        if e > 0 {
            m *= xv.powi(e as i32);
        }
    }
    m
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..MAX_VARS).map(|v| format!("x{v}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn arithmetic() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        let expect = x.mul(&x).add(&x.mul(&y).scale(&qi(2))).add(&y.mul(&y));
        assert_eq!(sq, expect);
        assert!(sq.sub(&expect).is_zero());
        assert_eq!(sq.degree(), 2);
        assert_eq!(sq.eval(&[1.0, 2.0]), 9.0);
        let (v, g) = sq.eval_grad(&[1.0, 2.0]);
        assert_eq!(v, 9.0);
        assert_eq!(g, vec![6.0, 6.0]);
        assert_eq!(sq.derivative(0), x.scale(&qi(2)).add(&y.scale(&qi(2))));
        let sub = sq.substitute(1, &q(1, 2));
        assert_eq!(sub, x.mul(&x).add(&x).add(&MPoly::constant(q(1, 4))));
        assert_eq!(sq.variables(), vec![0, 1]);
        assert_eq!(x.relabel(&[3]), MPoly::var(3));
    }
}
