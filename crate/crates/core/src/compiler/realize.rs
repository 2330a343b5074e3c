use num_complex::Complex64;
use serde::Serialize;

use super::order::{choose_order_with, SchemeChoice};
use super::CompileError;
use crate::rewrite::{pdc_logical, CommutatorTree, Leaf};
use crate::sequence::{Generator, LogicalSequence};
use crate::solver::{ApproximationScheme, Family, Slot};

const IMAG_TOL: f64 = 1e-9;

/// How one bracket of a compiled tree was realized.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub tree: String,
    pub time: f64,
    pub family: Family,
    pub scheme: String,
    pub order: u32,
    pub gates: usize,
    pub rescale: u32,
    pub strength: f64,
    pub t: f64,
    pub dominant_error: f64,
    /// Dominant error plus the errors of approximated sub-brackets.
    pub error: f64,
}

pub(crate) struct Realizer {
    pub n_modes: usize,
    pub order: Option<u32>,
}

/// `i^(1-b)`, turning a tree with `b` brackets into an anti-Hermitian slot generator.
fn unit(b: u32) -> Complex64 {
    Complex64::i().powu((1 + 3 * b) % 4)
}

fn real_part(z: Complex64, what: &str) -> Result<f64, CompileError> {
    if z.im.abs() > IMAG_TOL * z.norm().max(1.0) {
        return Err(CompileError::ShapeMismatch(format!("{what} coefficient {z} is not real")));
    }
    Ok(z.re)
}

enum Shape<'a> {
    Commutator { a: &'a CommutatorTree, b: &'a CommutatorTree, sign: f64 },
    Nested { a: &'a CommutatorTree, b: &'a CommutatorTree, sign: f64 },
}

fn shape<'a>(l: &'a CommutatorTree, r: &'a CommutatorTree) -> Shape<'a> {
    if let CommutatorTree::Bracket(r1, r2) = r {
        if **r1 == *l {
            return Shape::Nested { a: l, b: r2, sign: 1.0 };
        }
        if **r2 == *l {
            return Shape::Nested { a: l, b: r1, sign: -1.0 };
        }
    }
    Shape::Commutator { a: l, b: r, sign: 1.0 }
}

impl Realizer {
    /// Gates for `exp(i phi leaf)`.
    pub fn leaf(&self, leaf: &Leaf, phi: f64) -> Result<LogicalSequence, CompileError> {
        let mut out = LogicalSequence::new(self.n_modes);
        match *leaf {
            Leaf::Power { mode, quad, power } => {
                if !(1..=3).contains(&power) {
                    return Err(CompileError::ShapeMismatch(format!("leaf power {power} has no elementary gate")));
                }
                out.push(Generator::Power { mode, quad, power }, phi);
            }
            Leaf::Pair { a, b } => out.push(Generator::Pair { a, b }, phi),
            Leaf::Pdc { square, linear } => {
                out.extend(&pdc_logical(square, linear, phi));
            }
        }
        Ok(out)
    }

    /// Gates approximating `exp(c T)` for the expansion `T` of `tree`.
    pub fn realize(
        &self,
        tree: &CommutatorTree,
        c: Complex64,
        budget: f64,
        components: &mut Vec<ComponentReport>,
    ) -> Result<(LogicalSequence, f64), CompileError> {
        match tree {
            CommutatorTree::Leaf(leaf) => {
                let phi = real_part(c / Complex64::i(), "leaf")?;
                Ok((self.leaf(leaf, phi)?, 0.0))
            }
            CommutatorTree::Bracket(l, r) => match shape(l, r) {
                Shape::Nested { a, b, sign } => {
                    let (ua, ub) = (unit(a.brackets()), unit(b.brackets()));
                    let sigma = real_part(-(c * sign) / (ua * ua * ub), "nested")?;
                    let choice = choose_order_with(sigma.abs(), budget, Family::Nested, self.order)?;
                    let t = choice.scheme.t_for_strength(sigma);
                    self.emit(tree, &choice, t, sigma, [(a, ua), (b, ub)], 1.0, budget, components)
                }
                Shape::Commutator { a, b, sign } => {
                    let (ua, ub) = (unit(a.brackets()), unit(b.brackets()));
                    let tau = real_part(c * sign / (ua * ub), "commutator")?;
                    let choice = choose_order_with(tau.abs(), budget, Family::Commutator, self.order)?;
                    let t = choice.scheme.t_for_strength(tau);
                    let b_sign = if tau < 0.0 { -1.0 } else { 1.0 };
                    self.emit(tree, &choice, t, tau, [(a, ua), (b, ub)], b_sign, budget, components)
                }
            },
        }
    }

    /// Substitutes the slots of `choice` at parameter `t`; non-leaf slots are realized
    /// recursively within an equal share of `budget`.
    #[allow(clippy::too_many_arguments)]
    fn emit(
        &self,
        tree: &CommutatorTree,
        choice: &SchemeChoice,
        t: f64,
        strength: f64,
        slots: [(&CommutatorTree, Complex64); 2],
        b_sign: f64,
        budget: f64,
        components: &mut Vec<ComponentReport>,
    ) -> Result<(LogicalSequence, f64), CompileError> {
        let scheme = &choice.scheme;
        let sub_budget = budget / scheme.gate_count().max(1) as f64;
        let mut out = LogicalSequence::new(self.n_modes);
        let mut error = choice.predicted_error;
        let mut inner = Vec::new();
        for g in &scheme.gates {
            let (slot, sign) = match g.slot {
                Slot::A => (slots[0], 1.0),
                Slot::B => (slots[1], b_sign),
            };
            let coef = slot.1 * (g.coefficient * t * sign);
            let (seq, e) = self.realize(slot.0, coef, sub_budget, &mut inner)?;
            error += e;
            out.extend(&seq);
        }
        components.push(ComponentReport {
            tree: tree.to_string(),
            time: 0.0,
            family: scheme.family,
            scheme: scheme.name.clone(),
            order: scheme.order,
            gates: scheme.gate_count(),
            rescale: choice.rescale,
            strength,
            t,
            dominant_error: choice.predicted_error,
            error,
        });
        Ok((out, error))
    }
}

/// Substitutes the leaves of a single bracket `tree` into the slots of `scheme`,
/// approximating `exp(i theta weight T)`.
pub fn instantiate(
    tree: &CommutatorTree,
    weight: Complex64,
    theta: f64,
    scheme: &ApproximationScheme,
    n_modes: usize,
) -> Result<LogicalSequence, CompileError> {
    let CommutatorTree::Bracket(l, r) = tree else {
        return Err(CompileError::ShapeMismatch("a leaf has no scheme slots".into()));
    };
    let c = Complex64::i() * weight * theta;
    let (family, slots, strength, b_sign) = match shape(l, r) {
        Shape::Nested { a, b, sign } => {
            let (ua, ub) = (unit(a.brackets()), unit(b.brackets()));
            let sigma = real_part(-(c * sign) / (ua * ua * ub), "nested")?;
            (Family::Nested, [(a, ua), (b, ub)], sigma, 1.0)
        }
        Shape::Commutator { a, b, sign } => {
            let (ua, ub) = (unit(a.brackets()), unit(b.brackets()));
            let tau = real_part(c * sign / (ua * ub), "commutator")?;
            (Family::Commutator, [(a, ua), (b, ub)], tau, if tau < 0.0 { -1.0 } else { 1.0 })
        }
    };
    if family != scheme.family {
        return Err(CompileError::ShapeMismatch(format!("tree {tree} needs a {family} scheme, got {}", scheme.family)));
    }
    let t = scheme.t_for_strength(strength);
    let realizer = Realizer { n_modes, order: None };
    let mut out = LogicalSequence::new(n_modes);
    for g in &scheme.gates {
        let ((slot, u), sign) = match g.slot {
            Slot::A => (slots[0], 1.0),
            Slot::B => (slots[1], b_sign),
        };
        let Some(leaf) = slot.as_leaf() else {
            return Err(CompileError::ShapeMismatch(format!("slot {slot} is not a leaf")));
        };
        let phi = real_part(u * (g.coefficient * t * sign) / Complex64::i(), "leaf")?;
        out.extend(&realizer.leaf(leaf, phi)?);
    }
    Ok(out)
}
