use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Quad, QuadPolynomial};
use crate::rational::GaussQ;

/// Generator realizable by elementary gates, exactly.
///
/// `Pdc` is `Q_a^2 Q_b`, realized by the seven-gate down-conversion identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Leaf {
    Power { mode: usize, quad: Quad, power: u32 },
    Pair { a: (usize, Quad), b: (usize, Quad) },
    Pdc { square: (usize, Quad), linear: (usize, Quad) },
}

impl Leaf {
    pub fn x(mode: usize, power: u32) -> Self {
        Leaf::Power { mode, quad: Quad::X, power }
    }

    pub fn p(mode: usize, power: u32) -> Self {
        Leaf::Power { mode, quad: Quad::P, power }
    }

    pub fn polynomial(&self) -> QuadPolynomial {
        match *self {
            Leaf::Power { mode, quad, power } => quad.pow(mode, power),
            Leaf::Pair { a, b } => a.1.pow(a.0, 1).mul(&b.1.pow(b.0, 1)),
            Leaf::Pdc { square, linear } => square.1.pow(square.0, 2).mul(&linear.1.pow(linear.0, 1)),
        }
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            Leaf::Power { mode, .. } => vec![mode],
            Leaf::Pair { a, b } => vec![a.0, b.0],
            Leaf::Pdc { square, linear } => vec![square.0, linear.0],
        }
    }

    pub fn degree(&self) -> u32 {
        match *self {
            Leaf::Power { power, .. } => power,
            Leaf::Pair { .. } => 2,
            Leaf::Pdc { .. } => 3,
        }
    }

    /// Image under the Fourier rotation on `mode`, as `(leaf, sign)`.
    pub fn fourier_image(&self, mode: usize) -> (Leaf, i32) {
        let rot = |(m, q): (usize, Quad)| -> ((usize, Quad), i32) {
            if m == mode {
                let (q2, s) = q.frame_image(1);
                ((m, q2), s)
            } else {
                ((m, q), 1)
            }
        };
        match *self {
            Leaf::Power { mode: m, quad, power } => {
                let ((_, q), s) = rot((m, quad));
                (Leaf::Power { mode: m, quad: q, power }, s.pow(power))
            }
            Leaf::Pair { a, b } => {
                let (a2, sa) = rot(a);
                let (b2, sb) = rot(b);
                (Leaf::Pair { a: a2, b: b2 }, sa * sb)
            }
            Leaf::Pdc { square, linear } => {
                let (s2, _) = rot(square);
                let (l2, sl) = rot(linear);
                (Leaf::Pdc { square: s2, linear: l2 }, sl)
            }
        }
    }

    fn label(&self, with_mode: bool) -> String {
        let q = |(m, q): (usize, Quad), e: u32| {
            let pow = if e > 1 { format!("^{e}") } else { String::new() };
            if with_mode {
                format!("{q}{m}{pow}")
            } else {
                format!("{q}{e}")
            }
        };
        match *self {
            Leaf::Power { mode, quad, power } => q((mode, quad), power),
            Leaf::Pair { a, b } => format!("{}{}", q(a, 1), q(b, 1)),
            Leaf::Pdc { square, linear } => format!("{}{}", q(square, 2), q(linear, 1)),
        }
    }
}

/// Nested commutator of realizable leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommutatorTree {
    Leaf(Leaf),
    Bracket(Box<CommutatorTree>, Box<CommutatorTree>),
}

impl CommutatorTree {
    pub fn leaf(l: Leaf) -> Self {
        CommutatorTree::Leaf(l)
    }

    pub fn bracket(l: CommutatorTree, r: CommutatorTree) -> Self {
        CommutatorTree::Bracket(Box::new(l), Box::new(r))
    }

    pub fn expand(&self) -> QuadPolynomial {
        match self {
            CommutatorTree::Leaf(l) => l.polynomial(),
            CommutatorTree::Bracket(a, b) => a.expand().commutator(&b.expand()),
        }
    }

    /// Number of brackets; the expansion is Hermitian times `i^brackets`.
    pub fn brackets(&self) -> u32 {
        match self {
            CommutatorTree::Leaf(_) => 0,
            CommutatorTree::Bracket(a, b) => 1 + a.brackets() + b.brackets(),
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            CommutatorTree::Leaf(_) => 0,
            CommutatorTree::Bracket(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn leaves(&self) -> Vec<Leaf> {
        match self {
            CommutatorTree::Leaf(l) => vec![*l],
            CommutatorTree::Bracket(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }

    pub fn modes(&self) -> BTreeSet<usize> {
        self.leaves().iter().flat_map(|l| l.modes()).collect()
    }

    pub fn as_leaf(&self) -> Option<&Leaf> {
        match self {
            CommutatorTree::Leaf(l) => Some(l),
            CommutatorTree::Bracket(..) => None,
        }
    }

    /// Image under the Fourier rotation on `mode`, as `(tree, sign)`.
    pub fn fourier_image(&self, mode: usize) -> (CommutatorTree, i32) {
        match self {
            CommutatorTree::Leaf(l) => {
                let (l2, s) = l.fourier_image(mode);
                (CommutatorTree::Leaf(l2), s)
            }
            CommutatorTree::Bracket(a, b) => {
                let (a2, sa) = a.fourier_image(mode);
                let (b2, sb) = b.fourier_image(mode);
                (CommutatorTree::bracket(a2, b2), sa * sb)
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, with_mode: bool) -> fmt::Result {
        match self {
            CommutatorTree::Leaf(l) => f.write_str(&l.label(with_mode)),
            CommutatorTree::Bracket(a, b) => {
                f.write_str("[")?;
                a.write(f, with_mode)?;
                f.write_str(",")?;
                b.write(f, with_mode)?;
                f.write_str("]")
            }
        }
    }
}

/// Single-mode trees print as `[X3,[X3,P2]]@mode0`; others name the mode on every leaf.
impl fmt::Display for CommutatorTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let modes = self.modes();
        if modes.len() == 1 {
            self.write(f, false)?;
            write!(f, "@mode{}", modes.iter().next().expect("one mode"))
        } else {
            self.write(f, true)
        }
    }
}

/// `weight * tree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTree {
    pub weight: GaussQ,
    pub tree: CommutatorTree,
}

impl WeightedTree {
    pub fn new(weight: GaussQ, tree: CommutatorTree) -> Self {
        Self { weight, tree }
    }

    pub fn leaf(l: Leaf) -> Self {
        Self::new(GaussQ::from_int(1), CommutatorTree::leaf(l))
    }

    pub fn expand(&self) -> QuadPolynomial {
        self.tree.expand().scale(&self.weight)
    }

    /// `[self, other]` with weights multiplied.
    pub fn bracket(&self, other: &WeightedTree) -> WeightedTree {
        WeightedTree::new(&self.weight * &other.weight, CommutatorTree::bracket(self.tree.clone(), other.tree.clone()))
    }

    pub fn scaled(&self, c: &GaussQ) -> WeightedTree {
        WeightedTree::new(&self.weight * c, self.tree.clone())
    }

    pub fn fourier_image(&self, mode: usize) -> WeightedTree {
        let (t, s) = self.tree.fourier_image(mode);
        WeightedTree::new(self.weight.scale(&crate::rational::qi(s as i128)), t)
    }
}

impl fmt::Display for WeightedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", self.weight, self.tree)
    }
}
