//! Minimal reverse-mode automatic differentiation on a scalar tape.
//!
//! Operations push nodes onto a Wengert list; [`Tape::backward`] walks the
//! list once in reverse and accumulates adjoints. [`Var`] is a copyable
//! handle `(tape, index)`, so arithmetic composes like plain `f64` code.
//!
//! Non-smooth operations (`relu`, the clamped inverse trigs, the ball
//! projection in the model) take one-sided subgradients: the derivative is
//! zero on the saturated side of a clamp and at the inactive side of a
//! ramp. When [`Tape::record_branches`] is enabled, each such operation also
//! records which branch it took and its distance to the kink, which the
//! gradient-check harness uses to exclude kink-straddling coordinates.

use std::cell::{Cell, RefCell};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy)]
struct Node {
    value: f64,
    parents: [u32; 2],
    partials: [f64; 2],
}

/// Outcome of one branchy operation during a forward pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    /// Which side of the kink was taken.
    pub taken: bool,
    /// Distance of the argument from the kink.
    pub margin: f64,
}

#[derive(Default)]
pub struct Tape {
    nodes: RefCell<Vec<Node>>,
    branches: RefCell<Vec<Branch>>,
    record_branches: Cell<bool>,
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Creates a leaf variable.
    pub fn var(&self, value: f64) -> Var<'_> {
        let idx = self.push(Node {
            value,
            parents: [0, 0],
            partials: [0.0, 0.0],
        });
        Var { tape: self, idx }
    }

    /// Alias of [`Tape::var`] for values that are not differentiated
    /// against; reads better at call sites.
    pub fn constant(&self, value: f64) -> Var<'_> {
        self.var(value)
    }

    fn push(&self, node: Node) -> u32 {
        let mut nodes = self.nodes.borrow_mut();
        let idx = nodes.len();
        assert!(idx < u32::MAX as usize, "tape overflow");
        nodes.push(node);
        idx as u32
    }

    /// Enables or disables branch recording (off by default).
    pub fn set_record_branches(&self, on: bool) {
        self.record_branches.set(on);
        if on {
            self.branches.borrow_mut().clear();
        }
    }

    pub fn record_branch(&self, taken: bool, margin: f64) {
        if self.record_branches.get() {
            self.branches.borrow_mut().push(Branch { taken, margin });
        }
    }

    /// The branch trace of the forward passes run since recording was
    /// enabled.
    pub fn branches(&self) -> Vec<Branch> {
        self.branches.borrow().clone()
    }

    /// Reverse pass from `root`; returns one adjoint per tape node.
    pub fn backward(&self, root: Var<'_>) -> Gradients {
        let nodes = self.nodes.borrow();
        let mut adj = vec![0.0f64; nodes.len()];
        adj[root.idx as usize] = 1.0;
        for i in (0..nodes.len()).rev() {
            let a = adj[i];
            if a == 0.0 {
                continue;
            }
            let n = &nodes[i];
            for k in 0..2 {
                let p = n.partials[k];
                if p != 0.0 {
                    adj[n.parents[k] as usize] += a * p;
                }
            }
        }
        Gradients { adj }
    }
}

/// Adjoints produced by one backward pass.
pub struct Gradients {
    adj: Vec<f64>,
}

impl Gradients {
    pub fn wrt(&self, v: Var<'_>) -> f64 {
        self.adj[v.idx as usize]
    }
}

/// A differentiable scalar on a [`Tape`].
#[derive(Clone, Copy)]
pub struct Var<'t> {
    tape: &'t Tape,
    idx: u32,
}

impl<'t> Var<'t> {
    pub fn value(self) -> f64 {
        self.tape.nodes.borrow()[self.idx as usize].value
    }

    pub fn tape(self) -> &'t Tape {
        self.tape
    }

    fn unary(self, value: f64, partial: f64) -> Var<'t> {
        let idx = self.tape.push(Node {
            value,
            parents: [self.idx, self.idx],
            partials: [partial, 0.0],
        });
        Var {
            tape: self.tape,
            idx,
        }
    }

    fn binary(self, rhs: Var<'t>, value: f64, pl: f64, pr: f64) -> Var<'t> {
        let idx = self.tape.push(Node {
            value,
            parents: [self.idx, rhs.idx],
            partials: [pl, pr],
        });
        Var {
            tape: self.tape,
            idx,
        }
    }

    pub fn tanh(self) -> Var<'t> {
        let t = self.value().tanh();
        self.unary(t, 1.0 - t * t)
    }

    pub fn atanh(self) -> Var<'t> {
        let x = self.value();
        self.unary(x.atanh(), 1.0 / (1.0 - x * x))
    }

    pub fn sqrt(self) -> Var<'t> {
        let s = self.value().sqrt();
        self.unary(s, 0.5 / s)
    }

    pub fn sigmoid(self) -> Var<'t> {
        let s = 1.0 / (1.0 + (-self.value()).exp());
        self.unary(s, s * (1.0 - s))
    }

    /// max(x, 0) with subgradient 0 at the inactive side.
    pub fn relu(self) -> Var<'t> {
        let x = self.value();
        let active = x > 0.0;
        self.tape.record_branch(active, x.abs());
        if active {
            self.unary(x, 1.0)
        } else {
            self.unary(0.0, 0.0)
        }
    }

    /// arcsin with the argument clamped to [−1 + eps, 1 − eps]; zero
    /// derivative when saturated.
    pub fn asin_clamped(self, eps: f64) -> Var<'t> {
        let x = self.value();
        let hi = 1.0 - eps;
        let saturated = !(-hi..=hi).contains(&x);
        self.tape
            .record_branch(saturated, (hi - x.abs()).abs());
        if saturated {
            self.unary(x.clamp(-hi, hi).asin(), 0.0)
        } else {
            self.unary(x.asin(), 1.0 / (1.0 - x * x).sqrt())
        }
    }

    /// arccos with the argument clamped to [−1, 1]; arguments within
    /// `snap_eps` of the boundary map to exactly 0 or π with zero
    /// derivative (the saturated-side subgradient).
    pub fn acos_clamped(self, snap_eps: f64) -> Var<'t> {
        let x = self.value();
        let saturated = x >= 1.0 - snap_eps || x <= -1.0 + snap_eps;
        self.tape
            .record_branch(saturated, (1.0 - x.abs()).abs());
        if x >= 1.0 - snap_eps {
            self.unary(0.0, 0.0)
        } else if x <= -1.0 + snap_eps {
            self.unary(std::f64::consts::PI, 0.0)
        } else {
            self.unary(x.acos(), -1.0 / (1.0 - x * x).sqrt())
        }
    }
}

impl<'t> Add for Var<'t> {
    type Output = Var<'t>;
    fn add(self, rhs: Var<'t>) -> Var<'t> {
        self.binary(rhs, self.value() + rhs.value(), 1.0, 1.0)
    }
}

impl<'t> Sub for Var<'t> {
    type Output = Var<'t>;
    fn sub(self, rhs: Var<'t>) -> Var<'t> {
        self.binary(rhs, self.value() - rhs.value(), 1.0, -1.0)
    }
}

impl<'t> Mul for Var<'t> {
    type Output = Var<'t>;
    fn mul(self, rhs: Var<'t>) -> Var<'t> {
        self.binary(rhs, self.value() * rhs.value(), rhs.value(), self.value())
    }
}

impl<'t> Div for Var<'t> {
    type Output = Var<'t>;
    fn div(self, rhs: Var<'t>) -> Var<'t> {
        let (a, b) = (self.value(), rhs.value());
        self.binary(rhs, a / b, 1.0 / b, -a / (b * b))
    }
}

impl<'t> Neg for Var<'t> {
    type Output = Var<'t>;
    fn neg(self) -> Var<'t> {
        self.unary(-self.value(), -1.0)
    }
}

impl<'t> Add<f64> for Var<'t> {
    type Output = Var<'t>;
    fn add(self, rhs: f64) -> Var<'t> {
        self.unary(self.value() + rhs, 1.0)
    }
}

impl<'t> Sub<f64> for Var<'t> {
    type Output = Var<'t>;
    fn sub(self, rhs: f64) -> Var<'t> {
        self.unary(self.value() - rhs, 1.0)
    }
}

impl<'t> Mul<f64> for Var<'t> {
    type Output = Var<'t>;
    fn mul(self, rhs: f64) -> Var<'t> {
        self.unary(self.value() * rhs, rhs)
    }
}

impl<'t> Div<f64> for Var<'t> {
    type Output = Var<'t>;
    fn div(self, rhs: f64) -> Var<'t> {
        self.unary(self.value() / rhs, 1.0 / rhs)
    }
}

impl<'t> Sub<Var<'t>> for f64 {
    type Output = Var<'t>;
    fn sub(self, rhs: Var<'t>) -> Var<'t> {
        rhs.unary(self - rhs.value(), -1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-6;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn product_and_chain_rule() {
        let t = Tape::new();
        let x = t.var(3.0);
        let y = t.var(-1.5);
        let z = (x * y + x).tanh();
        let g = t.backward(z);
        let f = |x: f64, y: f64| (x * y + x).tanh();
        assert_abs_diff_eq!(g.wrt(x), fd(|v| f(v, -1.5), 3.0), epsilon = 1e-8);
        assert_abs_diff_eq!(g.wrt(y), fd(|v| f(3.0, v), -1.5), epsilon = 1e-8);
    }

    #[test]
    fn fanout_accumulates() {
        let t = Tape::new();
        let x = t.var(0.7);
        let y = x * x + x * 2.0;
        let g = t.backward(y);
        assert_abs_diff_eq!(g.wrt(x), 2.0 * 0.7 + 2.0, epsilon = 1e-12);
    }

    #[test]
    fn scalar_unary_derivatives_match_fd() {
        for &x0 in &[0.3f64, -0.6, 0.05] {
            let t = Tape::new();
            let x = t.var(x0);
            let y = x.atanh() * x.sigmoid() + (x * x + 0.01).sqrt();
            let g = t.backward(y);
            let f =
                |v: f64| v.atanh() * (1.0 / (1.0 + (-v).exp())) + (v * v + 0.01).sqrt();
            assert_abs_diff_eq!(g.wrt(x), fd(f, x0), epsilon = 1e-6);
        }
    }

    #[test]
    fn relu_subgradient_sides() {
        let t = Tape::new();
        let a = t.var(2.0);
        let b = t.var(-2.0);
        let y = a.relu() + b.relu();
        let g = t.backward(y);
        assert_eq!(g.wrt(a), 1.0);
        assert_eq!(g.wrt(b), 0.0);
    }

    #[test]
    fn acos_clamped_snaps_and_saturates() {
        let t = Tape::new();
        let x = t.var(1.0 - 1e-14);
        let y = x.acos_clamped(1e-12);
        assert_eq!(y.value(), 0.0);
        let g = t.backward(y);
        assert_eq!(g.wrt(x), 0.0);

        let t = Tape::new();
        let x = t.var(-1.0000001);
        let y = x.acos_clamped(1e-12);
        assert_eq!(y.value(), std::f64::consts::PI);

        let t = Tape::new();
        let x = t.var(0.4);
        let y = x.acos_clamped(1e-12);
        let g = t.backward(y);
        assert_abs_diff_eq!(g.wrt(x), -1.0 / (1.0f64 - 0.16).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn asin_clamped_saturation() {
        let t = Tape::new();
        let x = t.var(0.9999999999);
        let y = x.asin_clamped(1e-7);
        assert_abs_diff_eq!(y.value(), (1.0f64 - 1e-7).asin(), epsilon = 1e-15);
        let g = t.backward(y);
        assert_eq!(g.wrt(x), 0.0);
    }

    #[test]
    fn branch_recording() {
        let t = Tape::new();
        t.set_record_branches(true);
        let x = t.var(0.5);
        let _ = x.relu();
        let _ = (x - 0.7).relu();
        let br = t.branches();
        assert_eq!(br.len(), 2);
        assert!(br[0].taken);
        assert!(!br[1].taken);
        assert_abs_diff_eq!(br[1].margin, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn unused_parent_gets_zero_gradient() {
        let t = Tape::new();
        let x = t.var(1.0);
        let y = t.var(2.0);
        let z = x * 3.0;
        let g = t.backward(z);
        assert_eq!(g.wrt(y), 0.0);
        assert_eq!(g.wrt(x), 3.0);
    }
}
