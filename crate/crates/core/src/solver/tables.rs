//! The six coefficient tables shipped as fixtures, and the refined scheme library.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::ansatz::Ansatz;
use super::compose::{second_step_compose, solve_second_step, suzuki_symmetric, Pattern};
use super::newton::newton_solve;
use super::scheme::{ApproximationScheme, Family};
use super::system::build_system;
use super::SolverError;
use crate::rational::q_from_f64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableFixture {
    pub name: String,
    pub kind: String,
    pub family: Family,
    pub order: u32,
    pub flag: String,
    pub pins: Vec<String>,
    #[serde(default)]
    pub base: Option<String>,
    #[serde(default)]
    pub c: Vec<f64>,
    #[serde(default)]
    pub c_prime: Vec<f64>,
    #[serde(default)]
    pub p: Vec<f64>,
    #[serde(default)]
    pub p_prime: Vec<f64>,
}

impl TableFixture {
    pub fn is_second_step(&self) -> bool {
        self.kind == "second-step"
    }

    pub fn pattern(&self) -> Pattern {
        self.p.iter().copied().zip(self.p_prime.iter().copied()).collect()
    }

    /// Interleaved unknown values `c1, c1', c2, ...` or `p1, p1', ...`.
    pub fn values(&self) -> Vec<f64> {
        let (a, b) = if self.is_second_step() { (&self.p, &self.p_prime) } else { (&self.c, &self.c_prime) };
        a.iter().zip(b).flat_map(|(x, y)| [*x, *y]).collect()
    }

    fn pin_values(&self) -> Vec<(&str, f64)> {
        let vals = self.values();
        let names = if self.is_second_step() {
            Ansatz::second_step(self.p.len(), self.family.t_power(), 5, self.order).unknowns
        } else {
            Ansatz::alternating(self.c.len()).unknowns
        };
        self.pins
            .iter()
            .map(|p| {
                let i = names.iter().position(|n| n == p).expect("pin names an unknown");
                (p.as_str(), vals[i])
            })
            .collect()
    }

    /// Scheme with the values exactly as printed. Second-step tables need their base.
    pub fn printed_scheme(&self) -> ApproximationScheme {
        assert!(!self.is_second_step(), "second-step tables compose a base scheme");
        ApproximationScheme::from_pairs(
            &format!("table-{}", self.name),
            self.family,
            self.order,
            &self.c,
            &self.c_prime,
            &self.flag,
        )
    }
}

const FIXTURES: [(&str, &str); 6] = [
    ("I", include_str!("../../fixtures/table_I.toml")),
    ("II", include_str!("../../fixtures/table_II.toml")),
    ("III", include_str!("../../fixtures/table_III.toml")),
    ("IV", include_str!("../../fixtures/table_IV.toml")),
    ("V", include_str!("../../fixtures/table_V.toml")),
    ("VI", include_str!("../../fixtures/table_VI.toml")),
];

pub const TABLE_NAMES: [&str; 6] = ["I", "II", "III", "IV", "V", "VI"];

pub fn table(name: &str) -> Result<TableFixture, SolverError> {
    let src = FIXTURES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, s)| *s)
        .ok_or_else(|| SolverError::Format(format!("no table named {name}")))?;
    toml::from_str(src).map_err(|e| SolverError::Format(e.to_string()))
}

/// Outcome of refining a first-step table with Newton.
#[derive(Clone, Debug, Serialize)]
pub struct Refinement {
    pub scheme: ApproximationScheme,
    pub values: Vec<f64>,
    /// Largest change of any coefficient relative to the printed value.
    pub drift: f64,
    pub residual: f64,
}

/// Newton refinement of a first-step table, pins held at their printed values.
pub fn refine_first_step(t: &TableFixture) -> Result<Refinement, SolverError> {
    let mut ansatz = Ansatz::alternating(t.c.len());
    for (name, v) in t.pin_values() {
        ansatz = ansatz.pin(name, q_from_f64(v).expect("finite pin"));
    }
    let cs = build_system(&ansatz, &t.family.target(), t.order)?;
    let printed = t.values();
    let sol = newton_solve(&cs, &cs.restrict(&printed))?;
    let values = ansatz.expand_values(&sol.x);
    let drift = values.iter().zip(&printed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let c: Vec<f64> = values.iter().step_by(2).copied().collect();
    let cp: Vec<f64> = values.iter().skip(1).step_by(2).copied().collect();
    let scheme = ApproximationScheme::from_pairs(&format!("table-{}", t.name), t.family, t.order, &c, &cp, "refined");
    Ok(Refinement { scheme, values, drift, residual: sol.residual })
}

/// Refined pattern of a second-step table and the composed ninth-order scheme.
#[derive(Clone, Debug, Serialize)]
pub struct Composition {
    pub scheme: ApproximationScheme,
    pub pattern: Pattern,
    pub drift: f64,
}

pub fn refine_second_step(t: &TableFixture, base: &ApproximationScheme, tol: f64) -> Result<Composition, SolverError> {
    let (pattern, drift) = solve_second_step(t.family, base.order, &t.pattern(), &t.pin_values(), t.order)?;
    let mut scheme = second_step_compose(base, &pattern, t.order, tol)?;
    scheme.name = format!("table-{}", t.name);
    Ok(Composition { scheme, pattern, drift })
}

/// Verified schemes ordered by gate count, one list per family.
#[derive(Clone, Debug)]
pub struct Library {
    pub commutator: Vec<ApproximationScheme>,
    pub nested: Vec<ApproximationScheme>,
}

impl Library {
    pub fn family(&self, f: Family) -> &[ApproximationScheme] {
        match f {
            Family::Commutator => &self.commutator,
            Family::Nested => &self.nested,
        }
    }

    fn build() -> Result<Self, SolverError> {
        let refined =
            |n: &str| -> Result<ApproximationScheme, SolverError> { Ok(refine_first_step(&table(n)?)?.scheme) };
        let t1 = refined("I")?;
        let t2 = refined("II")?;
        let t4 = refined("IV")?;
        let t5 = refined("V")?;
        let t3 = refine_second_step(&table("III")?, &t2, 1e-8)?.scheme;
        let t6 = refine_second_step(&table("VI")?, &t5, 1e-8)?.scheme;
        let suzuki = suzuki_symmetric(&t4)?;
        let mut commutator = vec![ApproximationScheme::group_commutator(), t1, t2, t3];
        let mut nested = vec![t4, t5, suzuki, t6];
        commutator.sort_by_key(|s| s.gate_count());
        nested.sort_by_key(|s| s.gate_count());
        Ok(Self { commutator, nested })
    }
}

/// Shared library, built once on first use.
pub fn library() -> &'static Library {
    static LIB: OnceLock<Library> = OnceLock::new();
    LIB.get_or_init(|| Library::build().expect("shipped tables refine"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        for n in TABLE_NAMES {
            let t = table(n).unwrap();
            assert_eq!(t.flag, "paper-6-digit");
            assert_eq!(t.name, n);
        }
        assert_eq!(table("IV").unwrap().printed_scheme().gate_count(), 9);
        assert_eq!(table("V").unwrap().printed_scheme().gate_count(), 15);
        assert_eq!(table("I").unwrap().printed_scheme().gate_count(), 10);
    }
}
