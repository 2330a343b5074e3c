//! Exact bracket identities turning powers and products of quadratures into commutators.

use num_traits::Zero;

use super::tree::{CommutatorTree, Leaf, WeightedTree};
use super::RewriteError;
use crate::algebra::Quad;
use crate::rational::{q, qi, GaussQ};

/// `X^m` on mode 0: a leaf for `m <= 3`, otherwise
/// `-2/(3(m-1)) [X^(m-1), [X^3, P^2]]` with `X^(m-1)` expanded recursively.
pub fn power_tree(m: u32) -> Result<WeightedTree, RewriteError> {
    power_tree_on(0, Quad::X, m)
}

/// `Q^m` on `mode`; `P^m` is the Fourier image of the `X^m` tree.
pub fn power_tree_on(mode: usize, quad: Quad, m: u32) -> Result<WeightedTree, RewriteError> {
    if m == 0 {
        return Err(RewriteError::InvalidArgument("power must be at least 1".into()));
    }
    let x = x_power_tree(mode, m);
    Ok(match quad {
        Quad::X => x,
        Quad::P => x.fourier_image(mode),
    })
}

fn x_power_tree(mode: usize, m: u32) -> WeightedTree {
    if m <= 3 {
        return WeightedTree::leaf(Leaf::x(mode, m));
    }
    let inner = WeightedTree::leaf(Leaf::x(mode, 3)).bracket(&WeightedTree::leaf(Leaf::p(mode, 2)));
    x_power_tree(mode, m - 1).bracket(&inner).scaled(&GaussQ::real(q(-2, 3 * (m as i128 - 1))))
}

/// `X^2 = -(2/3) [X, [X^3, P^2]]`, the bracket form of the quadratic gate.
pub fn x2_bracket_tree() -> WeightedTree {
    let inner = WeightedTree::leaf(Leaf::x(0, 3)).bracket(&WeightedTree::leaf(Leaf::p(0, 2)));
    WeightedTree::leaf(Leaf::x(0, 1)).bracket(&inner).scaled(&GaussQ::real(q(-2, 3)))
}

/// Trees whose weighted sum, plus `scalar`, is an operator identity target.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeSum {
    pub trees: Vec<WeightedTree>,
    pub scalar: GaussQ,
}

impl TreeSum {
    pub fn expand(&self, n_modes: usize) -> crate::algebra::QuadPolynomial {
        let mut acc = crate::algebra::QuadPolynomial::scalar(self.scalar.clone()).with_modes(n_modes);
        for t in &self.trees {
            acc = &acc + &t.expand();
        }
        acc
    }

    /// Moves scalar-valued trees into `scalar` and drops vanishing ones.
    fn absorb_scalars(mut self) -> Self {
        let mut kept = Vec::new();
        for t in self.trees {
            let e = t.expand();
            if e.is_scalar() {
                self.scalar += &e.scalar_part();
            } else {
                kept.push(t);
            }
        }
        self.trees = kept;
        self
    }
}

/// `X^m P^n + P^n X^m` on mode 0:
/// `-4i/((n+1)(m+1)) [X^(m+1), P^(n+1)] - 1/(n+1) sum_{k=1}^{n-1} [P^(n-k), [X^m, P^k]]`.
///
/// Terms `k` and `n-k` of the sum coincide and are merged onto `k <= n-k`.
pub fn symmetric_pair_trees(m: u32, n: u32) -> Result<TreeSum, RewriteError> {
    if m == 0 || n == 0 {
        return Err(RewriteError::InvalidArgument("symmetric pair needs m, n >= 1".into()));
    }
    let xp = |j| power_tree_on(0, Quad::X, j);
    let pp = |j| power_tree_on(0, Quad::P, j);
    let lead_w = GaussQ::imag(q(-4, ((n + 1) * (m + 1)) as i128));
    let mut trees = vec![xp(m + 1)?.bracket(&pp(n + 1)?).scaled(&lead_w)];
    for k in 1..n {
        if k > n - k {
            break;
        }
        let mult = if 2 * k == n { 1 } else { 2 };
        let w = GaussQ::real(q(-mult, (n + 1) as i128));
        trees.push(pp(n - k)?.bracket(&xp(m)?.bracket(&pp(k)?)).scaled(&w));
    }
    Ok(TreeSum { trees, scalar: GaussQ::zero() }.absorb_scalars())
}

/// `c X^m P^n + conj(c) P^n X^m = Re(c) (X^m P^n + P^n X^m) + i Im(c) [X^m, P^n]` on mode 0.
pub fn general_term_trees(c: &GaussQ, m: u32, n: u32) -> Result<TreeSum, RewriteError> {
    let two_re = GaussQ::real(c.re * qi(2));
    if m == 0 && n == 0 {
        return Ok(TreeSum { trees: vec![], scalar: two_re });
    }
    if n == 0 || m == 0 {
        let t = if n == 0 { power_tree_on(0, Quad::X, m)? } else { power_tree_on(0, Quad::P, n)? };
        let trees = if c.re.is_zero() { vec![] } else { vec![t.scaled(&two_re)] };
        return Ok(TreeSum { trees, scalar: GaussQ::zero() });
    }
    let mut out = TreeSum { trees: vec![], scalar: GaussQ::zero() };
    if !c.re.is_zero() {
        let sym = symmetric_pair_trees(m, n)?;
        let re = GaussQ::real(c.re);
        out.trees.extend(sym.trees.iter().map(|t| t.scaled(&re)));
        out.scalar = &sym.scalar * &re;
    }
    if !c.im.is_zero() {
        let br = power_tree_on(0, Quad::X, m)?.bracket(&power_tree_on(0, Quad::P, n)?);
        out.trees.push(br.scaled(&GaussQ::imag(c.im)));
    }
    Ok(out.absorb_scalars())
}

/// `P_0^n P_1^s = -4/((n+1)(s+1)) [P_1^(s+1), [P_0^(n+1), X_0 X_1]]`.
pub fn two_mode_tree(n: u32, s: u32) -> Result<WeightedTree, RewriteError> {
    if n == 0 || s == 0 {
        return Err(RewriteError::InvalidArgument("two-mode tree needs n, s >= 1".into()));
    }
    let pair = WeightedTree::leaf(Leaf::Pair { a: (0, Quad::X), b: (1, Quad::X) });
    let inner = power_tree_on(0, Quad::P, n + 1)?.bracket(&pair);
    let t = power_tree_on(1, Quad::P, s + 1)?.bracket(&inner);
    Ok(t.scaled(&GaussQ::real(q(-4, ((n + 1) * (s + 1)) as i128))))
}

/// True when every leaf is realizable by elementary gates: powers up to 3, pairs, or
/// the down-conversion product.
pub fn is_realizable(t: &CommutatorTree) -> bool {
    t.leaves().iter().all(|l| match l {
        Leaf::Power { power, .. } => (1..=3).contains(power),
        Leaf::Pair { a, b } | Leaf::Pdc { square: a, linear: b } => a.0 != b.0,
    })
}
