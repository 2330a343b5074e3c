//! Hamiltonian, time and error budget to an elementary gate sequence.

mod order;
mod realize;
mod split;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub use order::{choose_order, choose_order_with, predicted_error, SchemeChoice, MAX_RESCALE, MAX_SCHEME_GATES};
pub use realize::{instantiate, ComponentReport};
pub use split::{split, splitting_error, SplitFactor};

use crate::algebra::QuadPolynomial;
use crate::rational::q_to_f64;
use crate::rewrite::{plan, PlanTerm, RewriteError, RewritePlan};
use crate::sequence::{cancel_fourier, GateKind, GateSequence, LogicalSequence};
use crate::solver::{naive_count, Family, NaiveKind};
use realize::Realizer;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileError {
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("no {family} scheme reaches budget {budget:e} at strength {strength}")]
    BudgetUnreachable { family: Family, strength: f64, budget: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompileOptions {
    /// Splitting order, 1 or 2.
    pub split_order: u32,
    /// Use only schemes of this order.
    pub scheme_order: Option<u32>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { split_order: 2, scheme_order: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub order: u32,
    pub factors: Vec<SplitFactor>,
    pub error_estimate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompileReport {
    pub t: f64,
    pub budget: f64,
    pub plan: Vec<String>,
    pub counts: BTreeMap<GateKind, usize>,
    pub fourier_count: usize,
    pub non_fourier_count: usize,
    pub total: usize,
    /// Sum of the dominant errors of every approximated component.
    pub error_estimate: f64,
    pub naive_count: f64,
    pub components: Vec<ComponentReport>,
    pub splitting: SplittingReport,
    pub global_phase: f64,
}

impl CompileReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn compile(h: &QuadPolynomial, t: f64, budget: f64) -> Result<(GateSequence, CompileReport), CompileError> {
    compile_with(h, t, budget, &CompileOptions::default())
}

/// Rewrites `h`, splits `exp(i t h)` over the plan terms, approximates every
/// commutator tree within `budget` and lowers to physical gates.
pub fn compile_with(
    h: &QuadPolynomial,
    t: f64,
    budget: f64,
    options: &CompileOptions,
) -> Result<(GateSequence, CompileReport), CompileError> {
    if !t.is_finite() {
        return Err(CompileError::InvalidArgument(format!("time must be finite, got {t}")));
    }
    if budget.is_nan() || budget <= 0.0 {
        return Err(CompileError::InvalidArgument(format!("budget must be positive, got {budget}")));
    }
    let p = plan(h)?;
    let factors = split(p.terms.len(), t, options.split_order)?;
    let realizer = Realizer { n_modes: p.n_modes.max(1), order: options.scheme_order };
    let mut logical = LogicalSequence::new(realizer.n_modes);
    let mut components = Vec::new();
    let mut error_estimate = 0.0;
    for f in &factors {
        let (seq, err) = realize_term(&realizer, &p.terms[f.term], f.time, budget, &mut components)?;
        error_estimate += err;
        logical.extend(&seq);
    }
    logical.phase += t * q_to_f64(&p.global_phase);
    let seq = cancel_fourier(&logical.lower());

    let expanded: Vec<QuadPolynomial> = p.terms.iter().map(|term| term.expand()).collect();
    let splitting = SplittingReport {
        order: options.split_order,
        error_estimate: splitting_error(&expanded, t, options.split_order),
        factors,
    };
    let fourier_count = seq.fourier_count();
    let report = CompileReport {
        t,
        budget,
        plan: p.to_string().lines().map(str::to_owned).collect(),
        counts: seq.counts(),
        fourier_count,
        non_fourier_count: seq.len() - fourier_count,
        total: seq.len(),
        error_estimate,
        naive_count: naive_plan_count(&p, t, budget),
        components,
        splitting,
        global_phase: seq.global_phase,
    };
    Ok((seq, report))
}

fn realize_term(
    realizer: &Realizer,
    term: &PlanTerm,
    time: f64,
    budget: f64,
    components: &mut Vec<ComponentReport>,
) -> Result<(LogicalSequence, f64), CompileError> {
    match term {
        PlanTerm::Direct { coefficient, leaf } => Ok((realizer.leaf(leaf, time * q_to_f64(coefficient))?, 0.0)),
        PlanTerm::Tree(wt) => {
            let c = Complex64::i() * wt.weight.to_c64() * time;
            let start = components.len();
            let out = realizer.realize(&wt.tree, c, budget, components)?;
            if components.len() > start {
                components.last_mut().expect("nonempty").time = time;
            }
            Ok(out)
        }
    }
}

/// Operation count of the baseline: first-order splitting into `r = ceil(t^2 / budget)`
/// steps, and in every step each tree by the rescaled group commutator at budget
/// `budget / (trees * r)`, each direct term by one gate.
pub fn naive_plan_count(p: &RewritePlan, t: f64, budget: f64) -> f64 {
    let trees: Vec<_> = p.trees().collect();
    let direct = p.direct_terms().count() as f64;
    let r = (t * t / budget).ceil().max(1.0);
    let eps = budget / (trees.len().max(1) as f64 * r);
    let per_step: f64 = trees
        .iter()
        .map(|wt| {
            let kind = if wt.tree.depth() >= 2 { NaiveKind::Nested } else { NaiveKind::Commutator };
            naive_count(kind, wt.weight.to_c64().norm() * t.abs() / r, eps)
        })
        .sum();
    r * (per_step + direct)
}
