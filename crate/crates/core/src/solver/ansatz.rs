use std::collections::BTreeMap;
use std::sync::Arc;

use crate::lie::{Alphabet, LieError, MPoly, Scalar, TruncatedSeries};
use crate::rational::Q;

/// One exponential factor of an ansatz, with its strength given by an unknown.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    /// `exp(u g)` for a single generator `g`.
    Gen { g: u8, unknown: usize },
    /// `Q(u)` or `Q(u)^-1` where `log Q(u) = sum_g u^weight(g) g` over every
    /// generator of a weighted alphabet (target plus error generators).
    Scheme { unknown: usize, inverse: bool },
}

/// Parameterized concatenation of exponentials.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub alphabet: Arc<Alphabet>,
    pub blocks: Vec<Block>,
    pub unknowns: Vec<String>,
    pub pins: BTreeMap<String, Q>,
}

impl Ansatz {
    /// `prod_i exp(c_i A) exp(c_i' B)` over `pairs` pairs, unknowns `c1, c1', c2, ...`.
    pub fn alternating(pairs: usize) -> Self {
        let mut blocks = Vec::new();
        let mut unknowns = Vec::new();
        for i in 0..pairs {
            for (g, name) in [(0u8, format!("c{}", i + 1)), (1u8, format!("c{}'", i + 1))] {
                blocks.push(Block::Gen { g, unknown: unknowns.len() });
                unknowns.push(name);
            }
        }
        Self { alphabet: Alphabet::uniform(2), blocks, unknowns, pins: BTreeMap::new() }
    }

    /// A single factor `exp(c1 A)`.
    pub fn single() -> Self {
        Self {
            alphabet: Alphabet::uniform(2),
            blocks: vec![Block::Gen { g: 0, unknown: 0 }],
            unknowns: vec!["c1".into()],
            pins: BTreeMap::new(),
        }
    }

    /// `prod_i Q(p_i t) Q^-1(p_i' t)` for a base scheme whose log is
    /// `t^w T + sum_{k=m+1}^{order} t^k E_k`.
    pub fn second_step(pairs: usize, target_weight: u32, base_order: u32, order: u32) -> Self {
        let mut names = vec!["T".to_string()];
        let mut weights = vec![target_weight];
        for k in base_order + 1..=order {
            names.push(format!("E{k}"));
            weights.push(k);
        }
        let alphabet = Arc::new(Alphabet { names, weights });
        let mut blocks = Vec::new();
        let mut unknowns = Vec::new();
        for i in 0..pairs {
            for (inverse, name) in [(false, format!("p{}", i + 1)), (true, format!("p{}'", i + 1))] {
                blocks.push(Block::Scheme { unknown: unknowns.len(), inverse });
                unknowns.push(name);
            }
        }
        Self { alphabet, blocks, unknowns, pins: BTreeMap::new() }
    }

    pub fn pin(mut self, name: &str, value: Q) -> Self {
        assert!(self.unknowns.iter().any(|u| u == name), "unknown {name}");
        self.pins.insert(name.to_string(), value);
        self
    }

    /// Indices of unknowns that are not pinned, in declaration order.
    pub fn active(&self) -> Vec<usize> {
        (0..self.unknowns.len()).filter(|&i| !self.pins.contains_key(&self.unknowns[i])).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.unknowns.iter().position(|u| u == name)
    }

    /// Symbolic values: active unknowns become polynomial variables `0..n`.
    pub fn symbolic_values(&self) -> Vec<MPoly> {
        let mut next = 0;
        self.unknowns
            .iter()
            .map(|u| match self.pins.get(u) {
                Some(v) => MPoly::constant(*v),
                None => {
                    next += 1;
                    MPoly::var(next - 1)
                }
            })
            .collect()
    }

    /// Full value vector from the active values plus pins.
    pub fn expand_values(&self, active: &[f64]) -> Vec<f64> {
        let mut it = active.iter();
        self.unknowns
            .iter()
            .map(|u| match self.pins.get(u) {
                Some(v) => crate::rational::q_to_f64(v),
                None => *it.next().expect("active value count"),
            })
            .collect()
    }

    /// `log` of the concatenation with the unknowns set to `values`.
    pub fn log_series<S: Scalar>(&self, values: &[S], order: u32) -> Result<TruncatedSeries<S>, LieError> {
        let mut prod = TruncatedSeries::one(&self.alphabet, order);
        for b in &self.blocks {
            match *b {
                Block::Gen { g, unknown } => {
                    if !values[unknown].is_zero() {
                        prod = prod.mul_exp_generator(g, &values[unknown]);
                    }
                }
                Block::Scheme { unknown, inverse } => {
                    let u = &values[unknown];
                    if u.is_zero() {
                        continue;
                    }
                    let mut expo = TruncatedSeries::zero(&self.alphabet, order);
                    for (g, &w) in self.alphabet.weights.iter().enumerate() {
                        let mut c = S::one();
                        for _ in 0..w {
                            c = c.mul(u);
                        }
                        expo.add_word(vec![g as u8], if inverse { c.neg() } else { c });
                    }
                    prod = prod.mul(&expo.exp()?);
                }
            }
        }
        prod.log()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn shapes() {
        let a = Ansatz::alternating(5).pin("c1", q(6, 5)).pin("c1'", q(-1, 1));
        assert_eq!(a.unknowns.len(), 10);
        assert_eq!(a.active().len(), 8);
        assert_eq!(a.unknowns[3], "c2'");
        let s = Ansatz::second_step(5, 2, 5, 9);
        assert_eq!(s.alphabet.names, vec!["T", "E6", "E7", "E8", "E9"]);
        assert_eq!(s.unknowns.len(), 10);
    }

    #[test]
    fn identity_pattern_is_trivial() {
        let s = Ansatz::second_step(1, 2, 5, 9);
        let z = s.log_series(&[0.7, 0.7], 9).unwrap();
        assert!(z.norm() < 1e-15);
    }
}
