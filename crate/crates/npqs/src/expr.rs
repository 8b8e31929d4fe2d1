//! Holomorphic test functions as immutable ASTs.
//!
//! The node set is deliberately closed under the operations the functionals
//! need: evaluation, symbolic complex differentiation (so derivative
//! expressions can be fed back into any integrand), the radial derivative
//! `Rf(z) = Σ z_k ∂f/∂z_k`, and the Möbius-invariant gradient
//! `∇̃f(z) = ∇(f ∘ Φ_z)(0)`.
//!
//! `RealPow` and `Log` use the principal branch; operands that land on the
//! cut `(−∞, 0]` produce evaluation errors rather than silent branch jumps.
//! There is deliberately no conjugation node: every expressible function is
//! holomorphic. The invariant gradient is therefore computed through the
//! closed-form Jacobian `Φ_z'(0) = −(1−|z|²)P_z − s_z Q_z` and the chain
//! rule, not by composing ASTs with `Φ_z` (whose denominator involves
//! conjugated coefficients).

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math methods come from this trait without std
use num_traits::Float;

use crate::ball::{BallPoint, GeometryError, MobiusMap};

/// Immutable AST of a holomorphic function of `z = (z_1, …, z_n)`.
///
/// Variables are 1-based. `LinForm(b)` denotes `⟨z,b⟩ = Σ z_k conj(b_k)`,
/// holomorphic in `z` since `b` is constant.
#[derive(Debug, Clone, PartialEq)]
pub enum HoloExpr {
    Const(Complex64),
    Var(usize),
    Add(Box<HoloExpr>, Box<HoloExpr>),
    Sub(Box<HoloExpr>, Box<HoloExpr>),
    Mul(Box<HoloExpr>, Box<HoloExpr>),
    Div(Box<HoloExpr>, Box<HoloExpr>),
    IntPow(Box<HoloExpr>, i32),
    RealPow(Box<HoloExpr>, f64),
    Log(Box<HoloExpr>),
    Exp(Box<HoloExpr>),
    LinForm(Vec<Complex64>),
}

/// Why an evaluation failed, together with the offending subexpression.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    /// Division by (numerically) zero.
    Pole { expr: HoloExpr },
    /// `Log` or `RealPow` operand landed on the branch cut `(−∞, 0]`.
    BranchCut { expr: HoloExpr },
    /// `Var(k)` with k outside `1..=n`.
    VarOutOfRange { var: usize, dim: usize },
    /// `LinForm` coefficient vector has the wrong length.
    LinFormDimension { expected: usize, got: usize },
    Geometry(GeometryError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Pole { expr } => write!(f, "pole hit while evaluating `{expr}`"),
            EvalError::BranchCut { expr } => {
                write!(f, "operand of `{expr}` lies on the branch cut (-inf, 0]")
            }
            EvalError::VarOutOfRange { var, dim } => {
                write!(f, "variable z{var} exceeds dimension {dim}")
            }
            EvalError::LinFormDimension { expected, got } => {
                write!(f, "linear form has {got} coefficients, point has {expected}")
            }
            EvalError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EvalError {}

impl From<GeometryError> for EvalError {
    fn from(e: GeometryError) -> Self {
        EvalError::Geometry(e)
    }
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl HoloExpr {
    pub fn constant(c: Complex64) -> Self {
        HoloExpr::Const(c)
    }

    pub fn constant_re(x: f64) -> Self {
        HoloExpr::Const(Complex64::new(x, 0.0))
    }

    /// 1-based coordinate variable.
    pub fn var(k: usize) -> Self {
        assert!(k >= 1, "variables are 1-based");
        HoloExpr::Var(k)
    }

    fn is_const(&self, c: Complex64) -> bool {
        matches!(self, HoloExpr::Const(v) if *v == c)
    }

    /// Sum with trivial-zero folding.
    pub fn add(a: HoloExpr, b: HoloExpr) -> Self {
        if a.is_const(ZERO) {
            return b;
        }
        if b.is_const(ZERO) {
            return a;
        }
        HoloExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: HoloExpr, b: HoloExpr) -> Self {
        if b.is_const(ZERO) {
            return a;
        }
        HoloExpr::Sub(Box::new(a), Box::new(b))
    }

    /// Product with zero/one folding.
    pub fn mul(a: HoloExpr, b: HoloExpr) -> Self {
        if a.is_const(ZERO) || b.is_const(ZERO) {
            return HoloExpr::Const(ZERO);
        }
        if a.is_const(ONE) {
            return b;
        }
        if b.is_const(ONE) {
            return a;
        }
        HoloExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: HoloExpr, b: HoloExpr) -> Self {
        if a.is_const(ZERO) && !b.is_const(ZERO) {
            return HoloExpr::Const(ZERO);
        }
        if b.is_const(ONE) {
            return a;
        }
        HoloExpr::Div(Box::new(a), Box::new(b))
    }

    pub fn int_pow(a: HoloExpr, m: i32) -> Self {
        match m {
            0 => HoloExpr::Const(ONE),
            1 => a,
            _ => HoloExpr::IntPow(Box::new(a), m),
        }
    }

    pub fn real_pow(a: HoloExpr, t: f64) -> Self {
        HoloExpr::RealPow(Box::new(a), t)
    }

    pub fn log(a: HoloExpr) -> Self {
        HoloExpr::Log(Box::new(a))
    }

    pub fn exp(a: HoloExpr) -> Self {
        HoloExpr::Exp(Box::new(a))
    }

    pub fn lin_form(b: Vec<Complex64>) -> Self {
        HoloExpr::LinForm(b)
    }

    /// Largest variable index appearing in the expression (0 for constants).
    pub fn max_var(&self) -> usize {
        match self {
            HoloExpr::Const(_) => 0,
            HoloExpr::Var(k) => *k,
            HoloExpr::Add(a, b)
            | HoloExpr::Sub(a, b)
            | HoloExpr::Mul(a, b)
            | HoloExpr::Div(a, b) => a.max_var().max(b.max_var()),
            HoloExpr::IntPow(a, _) | HoloExpr::RealPow(a, _) | HoloExpr::Log(a) | HoloExpr::Exp(a) => {
                a.max_var()
            }
            HoloExpr::LinForm(_) => 0,
        }
    }

    /// Evaluates the AST at `z`. Deterministic exact arithmetic; poles and
    /// branch-cut hits surface as errors naming the subexpression.
    pub fn eval(&self, z: &BallPoint) -> Result<Complex64, EvalError> {
        match self {
            HoloExpr::Const(c) => Ok(*c),
            HoloExpr::Var(k) => {
                if *k >= 1 && *k <= z.dim() {
                    Ok(z.coords()[*k - 1])
                } else {
                    Err(EvalError::VarOutOfRange { var: *k, dim: z.dim() })
                }
            }
            HoloExpr::Add(a, b) => Ok(a.eval(z)? + b.eval(z)?),
            HoloExpr::Sub(a, b) => Ok(a.eval(z)? - b.eval(z)?),
            HoloExpr::Mul(a, b) => Ok(a.eval(z)? * b.eval(z)?),
            HoloExpr::Div(a, b) => {
                let num = a.eval(z)?;
                let den = b.eval(z)?;
                if den.norm_sqr() == 0.0 {
                    return Err(EvalError::Pole { expr: self.clone() });
                }
                Ok(num / den)
            }
            HoloExpr::IntPow(a, m) => {
                let base = a.eval(z)?;
                if *m < 0 && base.norm_sqr() == 0.0 {
                    return Err(EvalError::Pole { expr: self.clone() });
                }
                Ok(base.powi(*m))
            }
            HoloExpr::RealPow(a, t) => {
                let base = a.eval(z)?;
                if base.im == 0.0 && base.re <= 0.0 {
                    return Err(EvalError::BranchCut { expr: self.clone() });
                }
                Ok(base.powf(*t))
            }
            HoloExpr::Log(a) => {
                let v = a.eval(z)?;
                if v.im == 0.0 && v.re <= 0.0 {
                    return Err(EvalError::BranchCut { expr: self.clone() });
                }
                Ok(v.ln())
            }
            HoloExpr::Exp(a) => Ok(a.eval(z)?.exp()),
            HoloExpr::LinForm(b) => {
                if b.len() != z.dim() {
                    return Err(EvalError::LinFormDimension { expected: z.dim(), got: b.len() });
                }
                let mut acc = ZERO;
                for (zk, bk) in z.coords().iter().zip(b.iter()) {
                    acc += zk * bk.conj();
                }
                Ok(acc)
            }
        }
    }

    /// Symbolic partial derivative ∂/∂z_k (1-based `k`).
    pub fn differentiate(&self, k: usize) -> HoloExpr {
        assert!(k >= 1, "variables are 1-based");
        match self {
            HoloExpr::Const(_) => HoloExpr::Const(ZERO),
            HoloExpr::Var(j) => {
                HoloExpr::Const(if *j == k { ONE } else { ZERO })
            }
            HoloExpr::Add(a, b) => HoloExpr::add(a.differentiate(k), b.differentiate(k)),
            HoloExpr::Sub(a, b) => HoloExpr::sub(a.differentiate(k), b.differentiate(k)),
            HoloExpr::Mul(a, b) => HoloExpr::add(
                HoloExpr::mul(a.differentiate(k), (**b).clone()),
                HoloExpr::mul((**a).clone(), b.differentiate(k)),
            ),
            HoloExpr::Div(a, b) => {
                // (a/b)' = a'/b - a b' / b^2
                let da = a.differentiate(k);
                let db = b.differentiate(k);
                HoloExpr::sub(
                    HoloExpr::div(da, (**b).clone()),
                    HoloExpr::div(
                        HoloExpr::mul((**a).clone(), db),
                        HoloExpr::int_pow((**b).clone(), 2),
                    ),
                )
            }
            HoloExpr::IntPow(a, m) => {
                let da = a.differentiate(k);
                HoloExpr::mul(
                    HoloExpr::mul(
                        HoloExpr::constant_re(f64::from(*m)),
                        HoloExpr::int_pow((**a).clone(), m - 1),
                    ),
                    da,
                )
            }
            HoloExpr::RealPow(a, t) => {
                let da = a.differentiate(k);
                HoloExpr::mul(
                    HoloExpr::mul(
                        HoloExpr::constant_re(*t),
                        HoloExpr::real_pow((**a).clone(), t - 1.0),
                    ),
                    da,
                )
            }
            HoloExpr::Log(a) => HoloExpr::div(a.differentiate(k), (**a).clone()),
            HoloExpr::Exp(a) => HoloExpr::mul(a.differentiate(k), self.clone()),
            HoloExpr::LinForm(b) => {
                let coeff = b.get(k - 1).copied().unwrap_or(ZERO);
                HoloExpr::Const(coeff.conj())
            }
        }
    }

    /// The full complex gradient (∂f/∂z_1, …, ∂f/∂z_n) as symbolic components.
    pub fn gradient(&self, n: usize) -> GradExpr {
        GradExpr { components: (1..=n).map(|k| self.differentiate(k)).collect() }
    }

    /// Radial derivative `Rf = Σ z_k ∂f/∂z_k` as a new expression.
    /// Monomials are eigenfunctions: `R(z^m) = |m| z^m`.
    pub fn radial_derivative(&self, n: usize) -> HoloExpr {
        let mut acc = HoloExpr::Const(ZERO);
        for k in 1..=n {
            acc = HoloExpr::add(acc, HoloExpr::mul(HoloExpr::var(k), self.differentiate(k)));
        }
        acc
    }
}

/// Symbolic complex gradient of an expression.
#[derive(Debug, Clone)]
pub struct GradExpr {
    components: Vec<HoloExpr>,
}

impl GradExpr {
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[HoloExpr] {
        &self.components
    }

    /// Evaluates every component at `z`.
    pub fn eval(&self, z: &BallPoint) -> Result<Vec<Complex64>, EvalError> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    /// Euclidean length |∇f(z)|.
    pub fn norm_at(&self, z: &BallPoint) -> Result<f64, EvalError> {
        let mut acc = 0.0;
        for c in &self.components {
            acc += c.eval(z)?.norm_sqr();
        }
        Ok(acc.sqrt())
    }

    /// Möbius-invariant gradient `∇̃f(z) = ∇(f ∘ Φ_z)(0)`, computed as
    /// `Φ_z'(0)ᵀ ∇f(z)` through the closed-form Jacobian.
    pub fn invariant_at(&self, z: &BallPoint) -> Result<Vec<Complex64>, EvalError> {
        let grad = self.eval(z)?;
        let map = MobiusMap::new(z.clone())?;
        let jac = map.jacobian_at_zero();
        let n = self.dim();
        // (J^T g)_j = sum_k J_{kj} g_k for the chain rule on u -> f(Phi_z(u)).
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = ZERO;
            for (k, gk) in grad.iter().enumerate() {
                acc += jac[k * n + j] * gk;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// |∇̃f(z)|.
    pub fn invariant_norm_at(&self, z: &BallPoint) -> Result<f64, EvalError> {
        let v = self.invariant_at(z)?;
        Ok(v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
    }
}

/// Convenience wrapper: `∇̃f(z)` straight from `f` (builds the symbolic
/// gradient on each call; hot paths should hold a [`GradExpr`]).
pub fn invariant_gradient(
    f: &HoloExpr,
    n: usize,
    z: &BallPoint,
) -> Result<Vec<Complex64>, EvalError> {
    f.gradient(n).invariant_at(z)
}
