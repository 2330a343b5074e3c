use std::fmt;

use serde::{Deserialize, Serialize};

use super::system::Target;
use super::SolverError;
use crate::lie::{gbch_generators, project_with_rest, Alphabet, LieElement};
use crate::rational::qi;

/// Which exponential a scheme approximates, written with `a = iA`, `b = iB`.
///
/// * `Commutator`: `exp(t^2 [a, b])`.
/// * `Nested`: `exp(-t^3 [a, [a, b]])`, i.e. `exp(i t^3 [A, [A, B]])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Commutator,
    Nested,
}

impl Family {
    pub fn t_power(self) -> u32 {
        match self {
            Family::Commutator => 2,
            Family::Nested => 3,
        }
    }

    pub fn target(self) -> Target {
        match self {
            Family::Commutator => vec![(vec![0, 1], qi(1))],
            Family::Nested => vec![(vec![0, 0, 1], qi(-1))],
        }
    }

    pub fn target_word(self) -> Vec<u8> {
        self.target().remove(0).0
    }

    pub fn target_coefficient(self) -> f64 {
        match self {
            Family::Commutator => 1.0,
            Family::Nested => -1.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Commutator => write!(f, "commutator"),
            Family::Nested => write!(f, "nested"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    A,
    B,
}

impl Slot {
    pub fn index(self) -> u8 {
        match self {
            Slot::A => 0,
            Slot::B => 1,
        }
    }
}

/// Factor `exp(coefficient * t * slot)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeGate {
    pub slot: Slot,
    pub coefficient: f64,
}

/// Solved concatenation `prod_j exp(c_j t g_j)` with a certified order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationScheme {
    pub name: String,
    pub family: Family,
    pub order: u32,
    pub gates: Vec<SchemeGate>,
    /// Euclidean norm of the bracket coefficients at order `order + 1`.
    pub error_coefficient: f64,
    pub provenance: String,
}

impl ApproximationScheme {
    /// Alternating `exp(c_i A) exp(c_i' B)` pairs; zero coefficients are dropped.
    pub fn from_pairs(name: &str, family: Family, order: u32, c: &[f64], c_prime: &[f64], provenance: &str) -> Self {
        let mut gates = Vec::new();
        for (a, b) in c.iter().zip(c_prime) {
            if *a != 0.0 {
                gates.push(SchemeGate { slot: Slot::A, coefficient: *a });
            }
            if *b != 0.0 {
                gates.push(SchemeGate { slot: Slot::B, coefficient: *b });
            }
        }
        let mut s =
            Self { name: name.into(), family, order, gates, error_coefficient: 0.0, provenance: provenance.into() };
        s.error_coefficient = verify_scheme(&s).error_coefficient;
        s
    }

    pub fn from_gates(name: &str, family: Family, order: u32, gates: Vec<SchemeGate>, provenance: &str) -> Self {
        let mut s =
            Self { name: name.into(), family, order, gates, error_coefficient: 0.0, provenance: provenance.into() };
        s.error_coefficient = verify_scheme(&s).error_coefficient;
        s
    }

    /// Two-slot commutator `exp(a) exp(b) exp(-a) exp(-b)`, order 2.
    pub fn group_commutator() -> Self {
        let g = |slot, coefficient| SchemeGate { slot, coefficient };
        Self::from_gates(
            "group-commutator",
            Family::Commutator,
            2,
            vec![g(Slot::A, 1.0), g(Slot::B, 1.0), g(Slot::A, -1.0), g(Slot::B, -1.0)],
            "exact",
        )
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Gates with adjacent same-slot factors merged.
    pub fn merged(&self) -> Vec<SchemeGate> {
        merge_gates(&self.gates)
    }

    /// `Q(t)^-1`: reversed order, negated coefficients.
    pub fn inverse_gates(&self) -> Vec<SchemeGate> {
        self.gates.iter().rev().map(|g| SchemeGate { slot: g.slot, coefficient: -g.coefficient }).collect()
    }

    pub fn t_power(&self) -> u32 {
        self.family.t_power()
    }

    /// Scheme parameter `t` realizing the target strength `s`, i.e. `t^w = s`
    /// for nested schemes and `t^2 = |s|` for commutator schemes.
    pub fn t_for_strength(&self, s: f64) -> f64 {
        match self.family {
            Family::Commutator => -s.abs().sqrt(),
            Family::Nested => s.cbrt(),
        }
    }

    /// Leading error size `|t|^(m+1)` at strength `s`.
    pub fn dominant_error(&self, s: f64) -> f64 {
        self.t_for_strength(s).abs().powi(self.order as i32 + 1)
    }

    /// `error_coefficient * |t|^(m+1)` at strength `s`.
    pub fn weighted_error(&self, s: f64) -> f64 {
        self.error_coefficient * self.dominant_error(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scheme serializes")
    }

    pub fn from_toml(src: &str) -> Result<Self, SolverError> {
        toml::from_str(src).map_err(|e| SolverError::Format(e.to_string()))
    }
}

pub fn merge_gates(gates: &[SchemeGate]) -> Vec<SchemeGate> {
    let mut out: Vec<SchemeGate> = Vec::with_capacity(gates.len());
    for g in gates {
        match out.last_mut() {
            Some(last) if last.slot == g.slot => {
                last.coefficient += g.coefficient;
                if last.coefficient == 0.0 {
                    out.pop();
                }
            }
            _ => out.push(*g),
        }
    }
    out
}

/// Bracket coordinates of `log prod_j exp(c_j g_j)` up to `order`.
pub fn lie_coordinates(gates: &[SchemeGate], order: u32) -> LieElement<f64> {
    let alphabet = Alphabet::uniform(2);
    let factors: Vec<(u8, f64)> = gates.iter().map(|g| (g.slot.index(), g.coefficient)).collect();
    let z = gbch_generators(&alphabet, &factors, order).expect("constant term is one");
    project_with_rest(&z).0
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualRow {
    pub bracket: String,
    pub weight: u32,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    /// `f_target - target` for the target bracket.
    pub target_residual: f64,
    /// Largest residual over all brackets of weight `<= order`, target included.
    pub max_residual: f64,
    /// Largest residual per weight `1..=order`.
    pub per_order: Vec<f64>,
    /// Bracket coefficients at weight `order + 1`.
    pub error_terms: Vec<ResidualRow>,
    pub error_coefficient: f64,
    /// Non-Lie remainder of the log, a check on the series engine.
    pub lie_residual: f64,
}

/// Numeric gBCH of the scheme at `t = 1`, compared against its target.
pub fn verify_scheme(s: &ApproximationScheme) -> ResidualReport {
    verify_gates(&s.gates, s.family, s.order)
}

pub fn verify_gates(gates: &[SchemeGate], family: Family, order: u32) -> ResidualReport {
    let lie = lie_coordinates(gates, order + 1);
    let target = family.target_word();
    let mut per_order = vec![0.0f64; order as usize];
    let mut target_residual = 0.0;
    let mut error_terms = Vec::new();
    for (b, c) in lie.basis.iter().zip(&lie.coeffs) {
        if b.weight <= order {
            let r = if b.word == target { c - family.target_coefficient() } else { *c };
            if b.word == target {
                target_residual = r;
            }
            let slot = &mut per_order[b.weight as usize - 1];
            *slot = slot.max(r.abs());
        } else {
            error_terms.push(ResidualRow { bracket: b.bracket.display(&lie.alphabet), weight: b.weight, value: *c });
        }
    }
    let max_residual = per_order.iter().copied().fold(0.0, f64::max);
    let error_coefficient = error_terms.iter().map(|r| r.value * r.value).sum::<f64>().sqrt();
    ResidualReport {
        target_residual,
        max_residual,
        per_order,
        error_terms,
        error_coefficient,
        lie_residual: lie.residual_norm,
    }
}

/// Norm of all bracket coefficients of weight exactly `weight` for the scheme run at parameter `t`.
pub fn residual_norm_at(gates: &[SchemeGate], t: f64, weight: u32) -> f64 {
    let scaled: Vec<SchemeGate> =
        gates.iter().map(|g| SchemeGate { slot: g.slot, coefficient: g.coefficient * t }).collect();
    let lie = lie_coordinates(&scaled, weight);
    lie.basis.iter().zip(&lie.coeffs).filter(|(b, _)| b.weight == weight).map(|(_, c)| c * c).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_commutator_is_second_order() {
        let s = ApproximationScheme::group_commutator();
        let r = verify_scheme(&s);
        assert!(r.max_residual < 1e-15, "{r:?}");
        assert!(r.error_coefficient > 0.1);
    }

    #[test]
    fn trivial_order_one_scheme() {
        // exp(c A) for target A: only the degree-one coordinate survives
        let g = vec![SchemeGate { slot: Slot::A, coefficient: 1.0 }];
        let lie = lie_coordinates(&g, 3);
        assert_eq!(lie.coefficient(&[0]), Some(&1.0));
        assert!(lie.coeffs.iter().skip(1).all(|c| *c == 0.0));
    }

    #[test]
    fn merging() {
        let g = |slot, coefficient| SchemeGate { slot, coefficient };
        let m = merge_gates(&[g(Slot::A, 1.0), g(Slot::A, 0.5), g(Slot::B, 1.0), g(Slot::B, -1.0), g(Slot::A, 2.0)]);
        assert_eq!(m, vec![g(Slot::A, 3.5)]);
    }

    #[test]
    fn toml_round_trip() {
        let s = ApproximationScheme::group_commutator();
        let back = ApproximationScheme::from_toml(&s.to_toml()).unwrap();
        assert_eq!(s, back);
    }
}
