use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ansatz::Ansatz;
use super::SolverError;
use crate::lie::{is_lyndon, lyndon_basis, project_to_lie, standard_bracketing, MPoly};
use crate::rational::Q;

/// One polynomial condition `poly = 0`, where `poly = f - target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub poly: MPoly,
    pub target: Q,
    /// Bracket or word the condition came from.
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub ansatz: Ansatz,
    /// Names of the polynomial variables, i.e. the active unknowns.
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSystem {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.constraints.len() == self.variables.len()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.constraints.iter().map(|c| c.poly.eval(x)).collect()
    }

    pub fn max_residual(&self, x: &[f64]) -> f64 {
        self.eval(x).into_iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Values and Jacobian rows.
    pub fn eval_jacobian(&self, x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        self.constraints.iter().map(|c| c.poly.eval_grad(x)).unzip()
    }

    /// Active-variable values taken from a full unknown vector.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.ansatz.active().into_iter().map(|i| full[i]).collect()
    }

    /// Text dump, one `label: polynomial` per line.
    pub fn describe(&self) -> String {
        self.constraints
            .iter()
            .map(|c| format!("{}: {}", c.label, c.poly.fmt_with(&self.variables)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Target as Lyndon-word coordinates, e.g. `[([0,1], 1)]` for `[A,B]`.
pub type Target = Vec<(Vec<u8>, Q)>;

fn check_target(ansatz: &Ansatz, target: &Target, order: u32) -> Result<(), SolverError> {
    for (w, _) in target {
        if !is_lyndon(w) || w.iter().any(|&g| g as usize >= ansatz.alphabet.len()) {
            return Err(SolverError::TargetNotInBasis(format!("{w:?} is not a Lyndon word")));
        }
        if ansatz.alphabet.weight(w) > order {
            return Err(SolverError::TargetNotInBasis(format!("{w:?} exceeds order {order}")));
        }
    }
    Ok(())
}

fn target_value(target: &Target, w: &[u8]) -> Q {
    target.iter().find(|(t, _)| t == w).map(|(_, c)| *c).unwrap_or_else(Q::zero)
}

fn symbolic_log(ansatz: &Ansatz, order: u32) -> Result<crate::lie::TruncatedSeries<MPoly>, SolverError> {
    let values = ansatz.symbolic_values();
    Ok(ansatz.log_series(&values, order)?)
}

fn variable_names(ansatz: &Ansatz) -> Vec<String> {
    ansatz.active().into_iter().map(|i| ansatz.unknowns[i].clone()).collect()
}

/// Bracket-level constraints: `f_target - 1` and `f_k` for every other Lyndon bracket up to `order`.
///
/// Identically vanishing conditions are dropped.
pub fn build_system(ansatz: &Ansatz, target: &Target, order: u32) -> Result<ConstraintSystem, SolverError> {
    check_target(ansatz, target, order)?;
    let z = symbolic_log(ansatz, order)?;
    let lie = project_to_lie(&z, 0.0)?;
    let mut constraints = Vec::new();
    for (b, f) in lie.basis.iter().zip(&lie.coeffs) {
        let t = target_value(target, &b.word);
        let poly = f.sub(&MPoly::constant(t));
        if !poly.is_zero() {
            constraints.push(Constraint { poly, target: t, label: b.bracket.display(&ansatz.alphabet) });
        }
    }
    Ok(ConstraintSystem { ansatz: ansatz.clone(), variables: variable_names(ansatz), constraints })
}

/// Word-level constraints: every word coefficient of the log must match the target's expansion.
pub fn raw_constraints(ansatz: &Ansatz, target: &Target, order: u32) -> Result<ConstraintSystem, SolverError> {
    check_target(ansatz, target, order)?;
    let z = symbolic_log(ansatz, order)?;
    let mut expected: std::collections::BTreeMap<Vec<u8>, Q> = Default::default();
    for (w, c) in target {
        for (word, k) in standard_bracketing(w).expand() {
            *expected.entry(word).or_insert_with(Q::zero) += c * Q::from_integer(k as i128);
        }
    }
    let mut words: BTreeSet<Vec<u8>> = BTreeSet::new();
    let k = ansatz.alphabet.len();
    let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(w) = frontier.pop() {
        for g in 0..k as u8 {
            let mut next = w.clone();
            next.push(g);
            if ansatz.alphabet.weight(&next) <= order {
                words.insert(next.clone());
                frontier.push(next);
            }
        }
    }
    let mut sorted: Vec<Vec<u8>> = words.into_iter().collect();
    sorted.sort_by_key(|w| (ansatz.alphabet.weight(w), w.clone()));
    let mut constraints = Vec::new();
    for w in sorted {
        let t = expected.get(&w).copied().unwrap_or_else(Q::zero);
        let poly = z.coefficient(&w).sub(&MPoly::constant(t));
        if !poly.is_zero() {
            constraints.push(Constraint { poly, target: t, label: ansatz.alphabet.word_name(&w) });
        }
    }
    Ok(ConstraintSystem { ansatz: ansatz.clone(), variables: variable_names(ansatz), constraints })
}

/// Maximal linearly independent subset (over the rationals) of the constraint polynomials.
///
/// Each polynomial is a coefficient vector over its monomials, constant included,
/// so the affine solution set is unchanged.
pub fn reduce_dependent(cs: &ConstraintSystem) -> ConstraintSystem {
    let mut columns: Vec<u128> = cs.constraints.iter().flat_map(|c| c.poly.terms().iter().map(|(k, _)| *k)).collect();
    columns.sort_unstable();
    columns.dedup();
    let col_of = |k: u128| columns.binary_search(&k).expect("column");
    let to_big = |q: &Q| BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()));

    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut keep = Vec::new();
    for c in &cs.constraints {
        let mut row = vec![BigRational::zero(); columns.len()];
        for (k, v) in c.poly.terms() {
            row[col_of(*k)] = to_big(v);
        }
        for (pivot, brow) in &basis {
            if !row[*pivot].is_zero() {
                let f = row[*pivot].clone() / brow[*pivot].clone();
                for (x, y) in row.iter_mut().zip(brow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if let Some(p) = row.iter().position(|x| !x.is_zero()) {
            basis.push((p, row));
            keep.push(c.clone());
        }
    }
    ConstraintSystem { ansatz: cs.ansatz.clone(), variables: cs.variables.clone(), constraints: keep }
}

/// Lyndon-basis size, the number of independent conditions up to `order`.
pub fn basis_size(ansatz: &Ansatz, order: u32) -> usize {
    lyndon_basis(&ansatz.alphabet, order).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn comm() -> Target {
        vec![(vec![0, 1], qi(1))]
    }

    #[test]
    fn ten_gate_fourth_order_has_eight_constraints() {
        let a = Ansatz::alternating(5).pin("c1", q(6, 5)).pin("c1'", qi(-1));
        let cs = build_system(&a, &comm(), 4).unwrap();
        assert_eq!(cs.len(), 8);
        assert!(cs.is_square());
    }

    #[test]
    fn single_gate_gives_one_linear_constraint() {
        let a = Ansatz::single();
        let cs = build_system(&a, &vec![(vec![0], qi(1))], 1).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.constraints[0].poly, MPoly::var(0).sub(&MPoly::constant(qi(1))));
    }

    #[test]
    fn rejects_non_lyndon_target() {
        let a = Ansatz::alternating(2);
        assert!(build_system(&a, &vec![(vec![1, 0], qi(1))], 3).is_err());
    }

    #[test]
    fn reduce_removes_duplicates() {
        let a = Ansatz::alternating(3).pin("c1", q(6, 5)).pin("c1'", qi(-1));
        let cs = build_system(&a, &comm(), 3).unwrap();
        let mut doubled = cs.clone();
        doubled.constraints.extend(cs.constraints.clone());
        assert_eq!(reduce_dependent(&doubled).len(), cs.len());
        assert_eq!(reduce_dependent(&cs).constraints, cs.constraints);
    }

    #[test]
    fn fifth_order_raw_constraints_reduce_to_fourteen() {
        let cs = raw_constraints(&Ansatz::alternating(7), &comm(), 5).unwrap();
        assert_eq!(cs.len(), 52);
        assert_eq!(reduce_dependent(&cs).len(), 14);
    }
}
