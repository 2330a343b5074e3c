use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::scalar::Scalar;
use crate::rational::Q;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("exp requires a series with zero constant term")]
    NonZeroConstant,
    #[error("log requires a series with constant term 1")]
    NotUnitConstant,
    #[error("not a Lie element: residual {0:e}")]
    NotLieElement(f64),
    #[error("mismatched alphabets or truncation orders")]
    Mismatch,
}

/// Generator names and their weights. Truncation is by total word weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub names: Vec<String>,
    pub weights: Vec<u32>,
}

impl Alphabet {
    pub fn new(names: &[&str], weights: &[u32]) -> Arc<Self> {
        assert_eq!(names.len(), weights.len());
        Arc::new(Self { names: names.iter().map(|s| s.to_string()).collect(), weights: weights.to_vec() })
    }

    /// `k` generators of weight one named `A`, `B`, ...
    pub fn uniform(k: usize) -> Arc<Self> {
        let names: Vec<String> = (0..k).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
        Arc::new(Self { names, weights: vec![1; k] })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn weight(&self, word: &[u8]) -> u32 {
        word.iter().map(|&g| self.weights[g as usize]).sum()
    }

    pub fn word_name(&self, word: &[u8]) -> String {
        word.iter().map(|&g| self.names[g as usize].as_str()).collect::<Vec<_>>().join("")
    }
}

/// Element of the free associative algebra truncated above weight `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S: Scalar> {
    alphabet: Arc<Alphabet>,
    order: u32,
    coeffs: BTreeMap<Vec<u8>, S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn zero(alphabet: &Arc<Alphabet>, order: u32) -> Self {
        Self { alphabet: alphabet.clone(), order, coeffs: BTreeMap::new() }
    }

    pub fn one(alphabet: &Arc<Alphabet>, order: u32) -> Self {
        let mut s = Self::zero(alphabet, order);
        s.coeffs.insert(Vec::new(), S::one());
        s
    }

    /// `c * g` for a single generator.
    pub fn generator(alphabet: &Arc<Alphabet>, order: u32, g: u8, c: S) -> Self {
        let mut s = Self::zero(alphabet, order);
        s.add_word(vec![g], c);
        s
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u8>, S> {
        &self.coeffs
    }

    pub fn coefficient(&self, word: &[u8]) -> S {
        self.coeffs.get(word).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c * word`, dropping words above the truncation weight.
    pub fn add_word(&mut self, word: Vec<u8>, c: S) {
        if c.is_zero() || self.alphabet.weight(&word) > self.order {
            return;
        }
        match self.coeffs.get_mut(&word) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.coeffs.remove(&word);
                }
            }
            None => {
                self.coeffs.insert(word, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.coeffs {
            out.add_word(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.coeffs {
            out.add_word(w.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(&self.alphabet, self.order);
        for (w, c) in &self.coeffs {
            out.add_word(w.clone(), c.mul(s));
        }
        out
    }

    pub fn scale_q(&self, q: &Q) -> Self {
        let mut out = Self::zero(&self.alphabet, self.order);
        for (w, c) in &self.coeffs {
            out.add_word(w.clone(), c.scale_q(q));
        }
        out
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Self::zero(&self.alphabet, self.order);
        for (w, c) in &self.coeffs {
            out.add_word(w.clone(), f(c));
        }
        out
    }

    /// Coefficient-wise conversion into another scalar ring.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedSeries<T> {
        let mut out = TruncatedSeries::zero(&self.alphabet, self.order);
        for (w, c) in &self.coeffs {
            out.add_word(w.clone(), f(c));
        }
        out
    }

    pub fn truncate(&self, order: u32) -> Self {
        let mut out = Self::zero(&self.alphabet, order.min(self.order));
        for (w, c) in &self.coeffs {
            out.add_word(w.clone(), c.clone());
        }
        out
    }

    /// Terms of exactly the given weight.
    pub fn homogeneous(&self, weight: u32) -> Self {
        let mut out = Self::zero(&self.alphabet, self.order);
        for (w, c) in &self.coeffs {
            if self.alphabet.weight(w) == weight {
                out.coeffs.insert(w.clone(), c.clone());
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.alphabet, self.order.min(o.order));
        let weights: Vec<(u32, &Vec<u8>, &S)> = o.coeffs.iter().map(|(w, c)| (self.alphabet.weight(w), w, c)).collect();
        for (wa, ca) in &self.coeffs {
            let ka = self.alphabet.weight(wa);
            for (kb, wb, cb) in &weights {
                if ka + kb > out.order {
                    continue;
                }
                let mut word = wa.clone();
                word.extend_from_slice(wb);
                out.add_word(word, ca.mul(cb));
            }
        }
        out
    }

    /// `self * exp(x g)` for a single generator `g`.
    pub fn mul_exp_generator(&self, g: u8, x: &S) -> Self {
        let wg = self.alphabet.weights[g as usize];
        let mut out = Self::zero(&self.alphabet, self.order);
        for (w, c) in &self.coeffs {
            let base = self.alphabet.weight(w);
            let mut word = w.clone();
            let mut term = c.clone();
            let mut j = 0u32;
            loop {
                out.add_word(word.clone(), term.clone());
                j += 1;
                if base + j * wg > self.order {
                    break;
                }
                term = term.mul(x).scale_q(&Q::new(1, j as i128));
                word.push(g);
            }
        }
        out
    }

    pub fn constant_term(&self) -> S {
        self.coefficient(&[])
    }

    /// Truncated exponential; the constant term must vanish.
    pub fn exp(&self) -> Result<Self, LieError> {
        if !self.constant_term().is_zero() {
            return Err(LieError::NonZeroConstant);
        }
        let min_w = self.coeffs.keys().map(|w| self.alphabet.weight(w)).min().unwrap_or(1).max(1);
        let mut out = Self::one(&self.alphabet, self.order);
        let mut power = Self::one(&self.alphabet, self.order);
        let mut k = 1u32;
        while k * min_w <= self.order {
            power = power.mul(self).scale_q(&Q::new(1, k as i128));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
            k += 1;
        }
        Ok(out)
    }

    /// Truncated logarithm; the constant term must be 1.
    pub fn log(&self) -> Result<Self, LieError> {
        if self.constant_term() != S::one() {
            return Err(LieError::NotUnitConstant);
        }
        let y = self.sub(&Self::one(&self.alphabet, self.order));
        let min_w = y.coeffs.keys().map(|w| self.alphabet.weight(w)).min().unwrap_or(1).max(1);
        let mut out = Self::zero(&self.alphabet, self.order);
        let mut power = Self::one(&self.alphabet, self.order);
        let mut k = 1i128;
        while (k as u32) * min_w <= self.order {
            power = power.mul(&y);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale_q(&Q::new(sign, k)));
            k += 1;
        }
        Ok(out)
    }

    /// Drops words whose coefficient magnitude is at most `tol`.
    pub fn chop(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.retain(|_, c| c.magnitude() > tol);
        out
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.magnitude().powi(2)).sum::<f64>().sqrt()
    }
}

/// Log of the ordered product `exp(f_1) exp(f_2) ... exp(f_n)`, truncated at `order`.
pub fn gbch<S: Scalar>(factors: &[TruncatedSeries<S>], order: u32) -> Result<TruncatedSeries<S>, LieError> {
    let Some(first) = factors.first() else {
        return Err(LieError::Mismatch);
    };
    if factors.len() == 1 {
        return Ok(first.truncate(order));
    }
    let alphabet = first.alphabet.clone();
    let mut prod = TruncatedSeries::one(&alphabet, order);
    for f in factors {
        if f.alphabet != alphabet {
            return Err(LieError::Mismatch);
        }
        let f = f.truncate(order);
        let single = (f.coeffs.len() == 1).then(|| f.coeffs.iter().next().unwrap()).filter(|(w, _)| w.len() == 1);
        prod = match single {
            Some((w, c)) => prod.mul_exp_generator(w[0], c),
            None => prod.mul(&f.exp()?),
        };
    }
    prod.log()
}

/// `gbch` for factors that are each a single scaled generator `exp(x g)`.
pub fn gbch_generators<S: Scalar>(
    alphabet: &Arc<Alphabet>,
    factors: &[(u8, S)],
    order: u32,
) -> Result<TruncatedSeries<S>, LieError> {
    let mut prod = TruncatedSeries::one(alphabet, order);
    for (g, x) in factors {
        if !x.is_zero() {
            prod = prod.mul_exp_generator(*g, x);
        }
    }
    prod.log()
}

impl<S: Scalar + fmt::Display> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(w, c)| if w.is_empty() { format!("{c}") } else { format!("({c}) {}", self.alphabet.word_name(w)) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
