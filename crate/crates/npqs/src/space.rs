//! Parameter tuples of the `N(p,q,s)` family and their admissibility gates.

use alloc::format;
use alloc::string::String;
use core::fmt;

/// Validated parameter tuple `(n, p, q, s, α)` with the derived exponent
/// `γ = n + 1 + α`.
///
/// Construction enforces the hypotheses the characterizations live under:
/// `p ≥ 1`, `q > 0`, `s > max{0, 1 − q/n}`, `α > q + ns − n − 1`. Note the
/// third constraint makes `q + ns − n − 1 > −1`, which is exactly what the
/// boundary tilts of the estimators need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceParams {
    n: usize,
    p: f64,
    q: f64,
    s: f64,
    alpha: f64,
}

/// A named constraint violation; `constraint` quotes the gate verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamError {
    pub constraint: &'static str,
    pub detail: String,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parameter constraint `{}` violated: {}", self.constraint, self.detail)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParamError {}

impl SpaceParams {
    pub fn new(n: usize, p: f64, q: f64, s: f64, alpha: f64) -> Result<Self, ParamError> {
        if n < 1 {
            return Err(ParamError { constraint: "n>=1", detail: format!("n = {n}") });
        }
        for (name, v) in [("p", p), ("q", q), ("s", s), ("alpha", alpha)] {
            if !v.is_finite() {
                return Err(ParamError {
                    constraint: "finite parameters",
                    detail: format!("{name} = {v}"),
                });
            }
        }
        if !(p >= 1.0) {
            return Err(ParamError { constraint: "p>=1", detail: format!("p = {p}") });
        }
        if !(q > 0.0) {
            return Err(ParamError { constraint: "q>0", detail: format!("q = {q}") });
        }
        let s_floor = (1.0 - q / n as f64).max(0.0);
        if !(s > s_floor) {
            return Err(ParamError {
                constraint: "s>max{0,1-q/n}",
                detail: format!("s = {s}, floor = {s_floor}"),
            });
        }
        let alpha_floor = q + n as f64 * s - n as f64 - 1.0;
        if !(alpha > alpha_floor) {
            return Err(ParamError {
                constraint: "alpha>q+ns-n-1",
                detail: format!("alpha = {alpha}, floor = {alpha_floor}"),
            });
        }
        Ok(Self { n, p, q, s, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// γ = n + 1 + α.
    pub fn gamma(&self) -> f64 {
        self.n as f64 + 1.0 + self.alpha
    }

    /// q + n·s, the total explicit boundary weight of the λ-integrands.
    pub fn q_plus_ns(&self) -> f64 {
        self.q + self.n as f64 * self.s
    }

    /// Gate of the double-integral kernels: `p ≥ 2(n+1+α)`.
    pub fn hw_valid(&self) -> bool {
        self.p >= 2.0 * self.gamma()
    }

    /// Weaker gate `p > 2(q+ns)` under which the kernels can still work when
    /// α sits near its lower bound.
    pub fn hw_remark(&self) -> bool {
        self.p > 2.0 * self.q_plus_ns()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_reference_parameters() {
        let p = SpaceParams::new(1, 7.0, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(p.gamma(), 2.5);
        assert!(p.hw_valid());
        assert!(p.hw_remark());

        let p = SpaceParams::new(2, 7.0, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(p.gamma(), 3.5);
        assert!(p.hw_valid()); // 7 >= 2*3.5
        assert!(p.hw_remark()); // 7 > 6
    }

    #[test]
    fn each_gate_names_its_constraint() {
        assert_eq!(SpaceParams::new(1, 7.0, 0.0, 1.0, 0.5).unwrap_err().constraint, "q>0");
        assert_eq!(SpaceParams::new(1, 0.5, 1.0, 1.0, 0.5).unwrap_err().constraint, "p>=1");
        // s floor: n=2, q=1 -> s must exceed 0.5
        assert_eq!(
            SpaceParams::new(2, 7.0, 1.0, 0.5, 0.5).unwrap_err().constraint,
            "s>max{0,1-q/n}"
        );
        // alpha floor: n=1, q=1, s=1 -> alpha > 0
        assert_eq!(
            SpaceParams::new(1, 7.0, 1.0, 1.0, 0.0).unwrap_err().constraint,
            "alpha>q+ns-n-1"
        );
    }

    #[test]
    fn hw_gates_disagree_in_the_remark_window() {
        // n=1, q=0.5, s=0.75, alpha just above the floor 0.25: 2(q+ns) = 2.5
        // while 2(n+1+alpha) ~ 4.52; p=3 passes the remark gate only.
        let p = SpaceParams::new(1, 3.0, 0.5, 0.75, 0.26).unwrap();
        assert!(!p.hw_valid());
        assert!(p.hw_remark());
    }
}
