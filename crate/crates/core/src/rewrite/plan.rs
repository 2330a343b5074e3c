use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::tree::{CommutatorTree, Leaf, WeightedTree};
use super::RewriteError;
use crate::algebra::{Monomial, Quad, QuadPolynomial};
use crate::rational::{GaussQ, Q};

/// One additive piece of a plan.
#[derive(Clone, Debug, PartialEq)]
pub enum PlanTerm {
    /// `coefficient * leaf`, realized without approximation.
    Direct {
        coefficient: Q,
        leaf: Leaf,
    },
    Tree(WeightedTree),
}

impl PlanTerm {
    pub fn expand(&self) -> QuadPolynomial {
        match self {
            PlanTerm::Direct { coefficient, leaf } => leaf.polynomial().scale_q(coefficient),
            PlanTerm::Tree(t) => t.expand(),
        }
    }
}

/// `h = sum(terms) + global_phase`, exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct RewritePlan {
    pub n_modes: usize,
    pub terms: Vec<PlanTerm>,
    pub global_phase: Q,
}

impl RewritePlan {
    pub fn trees(&self) -> impl Iterator<Item = &WeightedTree> {
        self.terms.iter().filter_map(|t| match t {
            PlanTerm::Tree(w) => Some(w),
            PlanTerm::Direct { .. } => None,
        })
    }

    pub fn direct_terms(&self) -> impl Iterator<Item = (&Q, &Leaf)> {
        self.terms.iter().filter_map(|t| match t {
            PlanTerm::Direct { coefficient, leaf } => Some((coefficient, leaf)),
            PlanTerm::Tree(_) => None,
        })
    }

    pub fn expand(&self) -> QuadPolynomial {
        let mut acc = QuadPolynomial::scalar(GaussQ::real(self.global_phase)).with_modes(self.n_modes);
        for t in &self.terms {
            acc = &acc + &t.expand();
        }
        acc
    }

    pub fn to_records(&self) -> PlanRecords {
        PlanRecords {
            terms: self
                .terms
                .iter()
                .map(|t| match t {
                    PlanTerm::Direct { coefficient, leaf } => PlanRecord {
                        kind: "direct",
                        weight: GaussQ::real(*coefficient).to_string(),
                        bracket: CommutatorTree::leaf(*leaf).to_string(),
                    },
                    PlanTerm::Tree(w) => {
                        PlanRecord { kind: "tree", weight: w.weight.to_string(), bracket: w.tree.to_string() }
                    }
                })
                .collect(),
            global_phase: GaussQ::real(self.global_phase).to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanRecord {
    pub kind: &'static str,
    pub weight: String,
    pub bracket: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanRecords {
    pub terms: Vec<PlanRecord>,
    pub global_phase: String,
}

impl fmt::Display for RewritePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            match t {
                PlanTerm::Direct { coefficient, leaf } => {
                    writeln!(f, "{} * {}", GaussQ::real(*coefficient), CommutatorTree::leaf(*leaf))?
                }
                PlanTerm::Tree(w) => writeln!(f, "{w}")?,
            }
        }
        write!(f, "phase {}", GaussQ::real(self.global_phase))
    }
}

/// Processing order: higher degree first, then pure X, pure P, mixed, two-mode.
fn priority(m: &Monomial) -> (std::cmp::Reverse<u32>, u8) {
    let support = m.support();
    let class = match support.as_slice() {
        [k] => match m.mode(*k) {
            (_, 0) => 0,
            (0, _) => 1,
            _ => 2,
        },
        _ => 3,
    };
    (std::cmp::Reverse(m.degree()), class)
}

/// Rewrites a Hermitian polynomial as exactly realizable direct terms and commutator
/// trees plus a scalar phase.
///
/// Each step takes the leading monomial, builds a tree whose expansion has that
/// monomial as its only top-degree term, and subtracts the full expansion.
pub fn plan(h: &QuadPolynomial) -> Result<RewritePlan, RewriteError> {
    if !h.is_hermitian() {
        return Err(RewriteError::NotHermitian);
    }
    if let Some(m) = h.terms().keys().find(|m| m.support().len() > 2) {
        return Err(RewriteError::Unsupported(format!(
            "monomial {m} couples {} modes; only two-mode couplings are supported",
            m.support().len()
        )));
    }
    let n_modes = h.n_modes().max(h.active_modes()).max(1);
    let mut rest = h.clone();
    let mut terms = Vec::new();
    loop {
        let lead =
            rest.terms().keys().filter(|m| !m.is_identity()).min_by_key(|m| (priority(m), (*m).clone())).cloned();
        let Some(m) = lead else { break };
        let c = rest.coeff(&m);
        if !c.im.is_zero() {
            return Err(RewriteError::Internal(format!("leading coefficient {c} of {m} is not real")));
        }
        let chain = find_chain(&m)?;
        let term = if chain.moves.is_empty() {
            PlanTerm::Direct { coefficient: c.re, leaf: chain.start }
        } else {
            let tree = chain.tree();
            let kappa = tree.expand().coeff(&m);
            let w = (&c * &kappa.inv().expect("leading coefficient of a chain is nonzero")).clone();
            PlanTerm::Tree(WeightedTree::new(w, tree))
        };
        rest = &rest - &term.expand();
        terms.push(term);
    }
    let phase = rest.scalar_part();
    if !phase.im.is_zero() {
        return Err(RewriteError::Internal(format!("residual scalar {phase} is not real")));
    }
    Ok(RewritePlan { n_modes, terms, global_phase: phase.re })
}

/// `[Y_k, ... [Y_1, start]]` with single-mode power leaves `Y_i`.
#[derive(Clone, Debug)]
struct Chain {
    start: Leaf,
    moves: Vec<Leaf>,
}

impl Chain {
    /// Innermost `[P-type, X-type]` brackets of two powers on one mode are written
    /// X-first with the sign folded into the tree by swapping back at weight time.
    fn tree(&self) -> CommutatorTree {
        let mut t = CommutatorTree::leaf(self.start);
        for (i, y) in self.moves.iter().enumerate() {
            let swap = i == 0
                && matches!((y, &self.start),
                    (Leaf::Power { quad: Quad::P, mode: a, .. }, Leaf::Power { quad: Quad::X, mode: b, .. }) if a == b);
            t = if swap {
                CommutatorTree::bracket(t, CommutatorTree::leaf(*y))
            } else {
                CommutatorTree::bracket(CommutatorTree::leaf(*y), t)
            };
        }
        t
    }
}

type State = Vec<(u32, u32)>;

/// Shortest chain of degree-preserving or degree-raising brackets from a base leaf
/// to a monomial with the given per-mode exponents.
fn find_chain(m: &Monomial) -> Result<Chain, RewriteError> {
    let modes = m.support();
    let target: State = modes.iter().map(|k| m.mode(*k)).collect();
    let starts = start_leaves(&modes);
    let mut seen: HashMap<State, (Option<State>, Option<Leaf>, Leaf)> = HashMap::new();
    let mut queue = VecDeque::new();
    for (leaf, st) in starts {
        if fits(&st, &target) && !seen.contains_key(&st) {
            seen.insert(st.clone(), (None, None, leaf));
            queue.push_back(st);
        }
    }
    while let Some(st) = queue.pop_front() {
        if st == target {
            let mut moves = Vec::new();
            let mut cur = st;
            loop {
                let (parent, mv, start) = seen[&cur].clone();
                match (parent, mv) {
                    (Some(p), Some(mv)) => {
                        moves.push(mv);
                        cur = p;
                    }
                    _ => {
                        moves.reverse();
                        return Ok(Chain { start, moves });
                    }
                }
            }
        }
        let start = seen[&st].2;
        for (i, &mode) in modes.iter().enumerate() {
            for (quad, j) in [(Quad::X, 3), (Quad::P, 3), (Quad::X, 2), (Quad::P, 2)] {
                let (p, qq) = st[i];
                let next = match quad {
                    Quad::X if qq >= 1 => (p + j - 1, qq - 1),
                    Quad::P if p >= 1 => (p - 1, qq + j - 1),
                    _ => continue,
                };
                let mut ns = st.clone();
                ns[i] = next;
                if fits(&ns, &target) && !seen.contains_key(&ns) {
                    seen.insert(ns.clone(), (Some(st.clone()), Some(Leaf::Power { mode, quad, power: j }), start));
                    queue.push_back(ns);
                }
            }
        }
    }
    Err(RewriteError::Unsupported(format!("no bracket chain reaches {m}")))
}

fn fits(st: &State, target: &State) -> bool {
    st.iter().zip(target).all(|(a, b)| a.0 + a.1 <= b.0 + b.1)
}

fn start_leaves(modes: &[usize]) -> Vec<(Leaf, State)> {
    let st = |q: Quad, j: u32| if q == Quad::X { (j, 0) } else { (0, j) };
    let mut out = Vec::new();
    match *modes {
        [k] => {
            for j in [3, 2, 1] {
                for q in [Quad::X, Quad::P] {
                    out.push((Leaf::Power { mode: k, quad: q, power: j }, vec![st(q, j)]));
                }
            }
        }
        [a, b] => {
            for qa in [Quad::X, Quad::P] {
                for qb in [Quad::X, Quad::P] {
                    out.push((Leaf::Pdc { square: (a, qa), linear: (b, qb) }, vec![st(qa, 2), st(qb, 1)]));
                    out.push((Leaf::Pdc { square: (b, qb), linear: (a, qa) }, vec![st(qa, 1), st(qb, 2)]));
                }
            }
            for qa in [Quad::X, Quad::P] {
                for qb in [Quad::X, Quad::P] {
                    out.push((Leaf::Pair { a: (a, qa), b: (b, qb) }, vec![st(qa, 1), st(qb, 1)]));
                }
            }
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;
    use crate::rational::q;

    fn tree_strings(p: &RewritePlan) -> Vec<String> {
        p.terms
            .iter()
            .map(|t| match t {
                PlanTerm::Direct { coefficient, leaf } => {
                    format!("{} {}", GaussQ::real(*coefficient), CommutatorTree::leaf(*leaf))
                }
                PlanTerm::Tree(w) => w.to_string(),
            })
            .collect()
    }

    #[test]
    fn kerr_plan_structure() {
        let h = parse_polynomial("(X0^2+P0^2)^2").unwrap();
        let p = plan(&h).unwrap();
        assert_eq!(
            tree_strings(&p),
            vec!["-2/9 * [X3,[X3,P2]]@mode0", "2/9 * [P3,[X2,P3]]@mode0", "-4/9 i * [X3,P3]@mode0"]
        );
        assert_eq!(p.global_phase, q(-1, 6));
        assert_eq!(p.expand(), h);
    }

    #[test]
    fn cubic_is_direct() {
        let p = plan(&parse_polynomial("X0^3").unwrap()).unwrap();
        assert_eq!(p.direct_terms().count(), 1);
        assert_eq!(p.trees().count(), 0);
    }

    #[test]
    fn cross_kerr_has_four_two_mode_trees() {
        let h = parse_polynomial("(X0^2+P0^2)(X1^2+P1^2)").unwrap();
        let p = plan(&h).unwrap();
        assert_eq!(p.trees().count(), 4);
        for t in p.trees() {
            assert_eq!(t.tree.modes().len(), 2);
            assert_eq!(t.tree.depth(), 1);
        }
        assert_eq!(p.expand(), h);
    }

    #[test]
    fn pdc_hamiltonian() {
        let h = parse_polynomial("X0^2 X1 - P0^2 X1 + (X0 P0 + P0 X0) P1").unwrap();
        let p = plan(&h).unwrap();
        let s = tree_strings(&p);
        assert!(s.contains(&"i * [P0^2,X0^2P1]".to_string()), "{s:?}");
        assert_eq!(p.direct_terms().count(), 2);
        assert_eq!(p.expand(), h);
    }

    #[test]
    fn rejects_non_hermitian_and_three_modes() {
        assert_eq!(plan(&parse_polynomial("X0 P0").unwrap()), Err(RewriteError::NotHermitian));
        assert!(matches!(plan(&parse_polynomial("X0 X1 X2").unwrap()), Err(RewriteError::Unsupported(_))));
    }
}
