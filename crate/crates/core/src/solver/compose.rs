use serde::Serialize;

use super::ansatz::Ansatz;
use super::newton::newton_solve;
use super::scheme::{merge_gates, verify_gates, ApproximationScheme, Family, SchemeGate};
use super::system::{build_system, ConstraintSystem};
use super::SolverError;
use crate::rational::{q_from_f64, qi};

/// Pattern `prod_i Q(p_i t) Q^-1(p_i' t)`.
pub type Pattern = Vec<(f64, f64)>;

/// Constraint system for the second step: in the free algebra on `T` (weight `w`) and
/// error generators `E_{m+1} .. E_order`, the product must equal `exp(T)` through `order`.
pub fn second_step_system(
    family: Family,
    base_order: u32,
    pairs: usize,
    pins: &[(&str, f64)],
    order: u32,
) -> Result<ConstraintSystem, SolverError> {
    let mut ansatz = Ansatz::second_step(pairs, family.t_power(), base_order, order);
    for (name, v) in pins {
        let q = q_from_f64(*v).ok_or_else(|| SolverError::Format(format!("bad pin value {v}")))?;
        ansatz = ansatz.pin(name, q);
    }
    build_system(&ansatz, &vec![(vec![0], qi(1))], order)
}

/// Refines a printed pattern with Newton on the second-step system.
///
/// Returns the refined pattern and the largest change of any entry.
pub fn solve_second_step(
    family: Family,
    base_order: u32,
    printed: &Pattern,
    pins: &[(&str, f64)],
    order: u32,
) -> Result<(Pattern, f64), SolverError> {
    let cs = second_step_system(family, base_order, printed.len(), pins, order)?;
    let full: Vec<f64> = printed.iter().flat_map(|(p, q)| [*p, *q]).collect();
    let sol = newton_solve(&cs, &cs.restrict(&full))?;
    let refined = cs.ansatz.expand_values(&sol.x);
    let drift = refined.iter().zip(&full).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok((refined.chunks(2).map(|c| (c[0], c[1])).collect(), drift))
}

/// Gates of `prod_i Q(p_i t) Q^-1(p_i' t)` with `Q^-1(s)` realized as the reverse of `Q(-s)`.
///
/// Blocks with zero parameter are skipped; adjacent blocks are not merged.
pub fn compose_gates(q: &ApproximationScheme, pattern: &Pattern) -> Vec<SchemeGate> {
    let mut gates = Vec::new();
    for &(p, pp) in pattern {
        if p != 0.0 {
            gates.extend(q.gates.iter().map(|g| SchemeGate { slot: g.slot, coefficient: g.coefficient * p }));
        }
        if pp != 0.0 {
            gates.extend(
                q.inverse_gates().into_iter().map(|g| SchemeGate { slot: g.slot, coefficient: g.coefficient * pp }),
            );
        }
    }
    gates
}

/// Composes `q` in the given pattern and certifies the result at `target_order`.
pub fn second_step_compose(
    q: &ApproximationScheme,
    pattern: &Pattern,
    target_order: u32,
    tol: f64,
) -> Result<ApproximationScheme, SolverError> {
    let gates = compose_gates(q, pattern);
    if gates.is_empty() {
        return Ok(ApproximationScheme {
            name: format!("{}-trivial", q.name),
            family: q.family,
            order: 0,
            gates,
            error_coefficient: 0.0,
            provenance: "composed".into(),
        });
    }
    let report = verify_gates(&gates, q.family, target_order);
    if report.max_residual > tol {
        return Err(SolverError::VerificationFailed(format!(
            "composed scheme residual {:.3e} exceeds {tol:.1e}",
            report.max_residual
        )));
    }
    Ok(ApproximationScheme {
        name: format!("{}-order{}", q.name, target_order),
        family: q.family,
        order: target_order,
        gates,
        error_coefficient: report.error_coefficient,
        provenance: "composed".into(),
    })
}

/// Symmetric triple `S(p t) S(q t) S(p t)` cancelling the order-(m+1) term of a
/// time-symmetric order-`m` scheme; adjacent equal-slot gates are merged.
pub fn suzuki_symmetric(s: &ApproximationScheme) -> Result<ApproximationScheme, SolverError> {
    let w = s.t_power() as f64;
    let m1 = (s.order + 1) as f64;
    let p = (2.0 - 2f64.powf(w / m1)).powf(-1.0 / w);
    let q = -2f64.powf(1.0 / m1) * p;
    let scaled = |k: f64| s.gates.iter().map(move |g| SchemeGate { slot: g.slot, coefficient: g.coefficient * k });
    let raw: Vec<SchemeGate> = scaled(p).chain(scaled(q)).chain(scaled(p)).collect();
    let gates = merge_gates(&raw);
    let order = s.order + 2;
    let report = verify_gates(&gates, s.family, order);
    if report.max_residual > 1e-8 {
        return Err(SolverError::VerificationFailed(format!(
            "symmetric composition residual {:.3e}; base scheme is not time-symmetric",
            report.max_residual
        )));
    }
    Ok(ApproximationScheme {
        name: format!("{}-symmetric", s.name),
        family: s.family,
        order,
        gates,
        error_coefficient: report.error_coefficient,
        provenance: "suzuki".into(),
    })
}

/// `t -> t/n`, repeated `n^w` times.
pub fn rescale(s: &ApproximationScheme, n: u32) -> ApproximationScheme {
    if n <= 1 {
        return s.clone();
    }
    let reps = n.pow(s.t_power());
    let block: Vec<SchemeGate> =
        s.gates.iter().map(|g| SchemeGate { slot: g.slot, coefficient: g.coefficient / n as f64 }).collect();
    let mut gates = Vec::with_capacity(block.len() * reps as usize);
    for _ in 0..reps {
        gates.extend_from_slice(&block);
    }
    ApproximationScheme {
        name: format!("{}-x{n}", s.name),
        family: s.family,
        order: s.order,
        gates,
        error_coefficient: s.error_coefficient,
        provenance: format!("rescaled {n}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NaiveKind {
    Commutator,
    Nested,
}

/// Operator count of the rescaled group-commutator baseline at strength `s` and error `eps`:
/// `4 s^3 / eps^2` for a commutator and `8 s^6 / eps^5` for a nested commutator.
pub fn naive_count(kind: NaiveKind, s: f64, eps: f64) -> f64 {
    let s = s.abs();
    match kind {
        NaiveKind::Commutator => 4.0 * s.powi(3) / eps.powi(2),
        NaiveKind::Nested => 8.0 * s.powi(6) / eps.powi(5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_counts() {
        assert_eq!(naive_count(NaiveKind::Commutator, 0.1, 1e-3).round(), 4000.0);
        let nested = naive_count(NaiveKind::Nested, 0.1, 1e-3);
        assert!((nested / 8e9 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rescale_identity_and_counts() {
        let s = ApproximationScheme::group_commutator();
        assert_eq!(rescale(&s, 1), s);
        let r = rescale(&s, 3);
        assert_eq!(r.gate_count(), 4 * 9);
        // the target coordinate is preserved: 9 * (1/3)^2 = 1
        let rep = super::super::scheme::verify_scheme(&r);
        assert!(rep.target_residual.abs() < 1e-12);
    }

    #[test]
    fn identity_pattern_gives_trivial_scheme() {
        let s = ApproximationScheme::group_commutator();
        let c = compose_gates(&s, &vec![(1.0, 1.0)]);
        let merged = merge_gates(&c);
        assert!(merged.is_empty());
    }
}
