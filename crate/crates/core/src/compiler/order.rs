use serde::Serialize;

use super::CompileError;
use crate::solver::{library, rescale, ApproximationScheme, Family};

/// Largest repetition factor `n` tried when rescaling.
pub const MAX_RESCALE: u32 = 64;
/// Largest gate count a rescaled scheme may reach.
pub const MAX_SCHEME_GATES: usize = 1_000_000;

/// Scheme selected for a strength and budget, possibly rescaled by `rescale`.
#[derive(Clone, Debug, Serialize)]
pub struct SchemeChoice {
    pub scheme: ApproximationScheme,
    pub rescale: u32,
    pub predicted_error: f64,
}

impl SchemeChoice {
    pub fn gate_count(&self) -> usize {
        self.scheme.gate_count()
    }
}

/// `n^w |t/n|^(m+1)`: the dominant error of `scheme` rescaled by `n` at `strength`.
pub fn predicted_error(scheme: &ApproximationScheme, strength: f64, n: u32) -> f64 {
    let w = scheme.t_power() as i32;
    let t = scheme.t_for_strength(strength).abs();
    (n as f64).powi(w) * (t / n as f64).powi(scheme.order as i32 + 1)
}

/// Smallest verified scheme of `family` whose dominant error at `strength` is below
/// `budget`; rescaled repetitions are tried when no library scheme suffices.
pub fn choose_order(strength: f64, budget: f64, family: Family) -> Result<SchemeChoice, CompileError> {
    choose_order_with(strength, budget, family, None)
}

/// [`choose_order`] restricted to schemes of order `order` when given.
pub fn choose_order_with(
    strength: f64,
    budget: f64,
    family: Family,
    order: Option<u32>,
) -> Result<SchemeChoice, CompileError> {
    if budget.is_nan() || budget <= 0.0 {
        return Err(CompileError::InvalidArgument(format!("budget must be positive, got {budget}")));
    }
    if !strength.is_finite() {
        return Err(CompileError::InvalidArgument(format!("strength must be finite, got {strength}")));
    }
    if strength == 0.0 {
        let empty = ApproximationScheme {
            name: "empty".into(),
            family,
            order: u32::MAX,
            gates: vec![],
            error_coefficient: 0.0,
            provenance: "exact".into(),
        };
        return Ok(SchemeChoice { scheme: empty, rescale: 1, predicted_error: 0.0 });
    }
    let candidates: Vec<&ApproximationScheme> =
        library().family(family).iter().filter(|s| order.is_none_or(|o| s.order == o)).collect();
    if let Some(s) = candidates.iter().find(|s| s.dominant_error(strength) < budget) {
        let predicted_error = s.dominant_error(strength);
        return Ok(SchemeChoice { scheme: (*s).clone(), rescale: 1, predicted_error });
    }
    let mut best: Option<(usize, &ApproximationScheme, u32, f64)> = None;
    for s in &candidates {
        for n in 2..=MAX_RESCALE {
            let gates = s.gate_count() * (n as usize).pow(s.t_power());
            if gates > MAX_SCHEME_GATES {
                break;
            }
            let err = predicted_error(s, strength, n);
            if err < budget {
                if best.is_none_or(|b| gates < b.0) {
                    best = Some((gates, s, n, err));
                }
                break;
            }
        }
    }
    match best {
        Some((_, s, n, predicted_error)) => Ok(SchemeChoice { scheme: rescale(s, n), rescale: n, predicted_error }),
        None => Err(CompileError::BudgetUnreachable { family, strength, budget }),
    }
}
