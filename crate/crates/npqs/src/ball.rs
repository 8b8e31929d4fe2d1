//! Geometry of the open unit ball 𝔹 ⊂ ℂⁿ.
//!
//! Everything here is exact closed-form arithmetic: the Hermitian inner
//! product, the projections `P_a` / `Q_a`, the involutive automorphisms
//!
//! ```text
//! Φ_a(z) = (a − P_a z − s_a Q_a z) / (1 − ⟨z,a⟩),   s_a = √(1 − |a|²),
//! ```
//!
//! the Bergman pseudometric `d(z,w) = |Φ_z(w)|`, and the kernel identities
//! the double-integral estimators rely on. Quantities of the form
//! `1 − |Φ_a(z)|²` are always computed through the product identity
//!
//! ```text
//! 1 − |Φ_a(z)|² = (1 − |a|²)(1 − |z|²) / |1 − ⟨z,a⟩|²
//! ```
//!
//! rather than by subtraction, which would cancel catastrophically near the
//! boundary.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math methods come from this trait without std
use num_traits::Float;
use smallvec::SmallVec;

/// Inline coordinate storage; dimensions ≤ 4 never touch the heap.
pub type Coords = SmallVec<[Complex64; 4]>;

/// Componentwise tolerance used by [`BallPoint::approx_eq_default`].
pub const POINT_EQ_TOL: f64 = 1e-12;

/// Errors from geometric operations.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    /// Two points of different ambient dimension were combined.
    DimensionMismatch { expected: usize, got: usize },
    /// An operation required a nonzero vector (projections onto span(a)).
    ZeroVector,
    /// A point expected inside the open ball had |z|² ≥ 1.
    NotInterior { norm_sq: f64 },
    /// A coordinate was NaN or infinite.
    NonFinite,
    /// The pair (z, w) was (numerically) coincident where z ≠ w is required.
    DegeneratePair,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            GeometryError::ZeroVector => write!(f, "projection parameter must be nonzero"),
            GeometryError::NotInterior { norm_sq } => {
                write!(f, "point not interior to the unit ball: |z|^2 = {norm_sq}")
            }
            GeometryError::NonFinite => write!(f, "coordinate is NaN or infinite"),
            GeometryError::DegeneratePair => write!(f, "points coincide where z != w is required"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GeometryError {}

/// A point of ℂⁿ. Interior points satisfy `|z|² < 1`; operations that need
/// interiority check it and fail with [`GeometryError::NotInterior`].
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    coords: Coords,
}

impl BallPoint {
    /// Builds a point from complex coordinates. Rejects NaN/infinite entries
    /// and the empty vector; does **not** require interiority.
    pub fn new<I>(coords: I) -> Result<Self, GeometryError>
    where
        I: IntoIterator<Item = Complex64>,
    {
        let coords: Coords = coords.into_iter().collect();
        if coords.is_empty() {
            return Err(GeometryError::DimensionMismatch { expected: 1, got: 0 });
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Self { coords })
    }

    /// The origin of ℂⁿ.
    pub fn origin(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Self { coords: (0..n).map(|_| Complex64::new(0.0, 0.0)).collect() }
    }

    /// Point from real parts only.
    pub fn from_re(re: &[f64]) -> Result<Self, GeometryError> {
        Self::new(re.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// |z|² = Σ_k |z_k|².
    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c.re * c.re + c.im * c.im).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_interior(&self) -> bool {
        self.norm_sq() < 1.0
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Componentwise comparison with absolute tolerance `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(other.coords.iter())
                .all(|(a, b)| (a.re - b.re).abs() <= tol && (a.im - b.im).abs() <= tol)
    }

    /// Componentwise comparison at the default tolerance [`POINT_EQ_TOL`].
    pub fn approx_eq_default(&self, other: &Self) -> bool {
        self.approx_eq(other, POINT_EQ_TOL)
    }

    pub(crate) fn from_coords(coords: Coords) -> Self {
        Self { coords }
    }

    fn check_dim(&self, other: &Self) -> Result<(), GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    fn check_interior(&self) -> Result<(), GeometryError> {
        let n2 = self.norm_sq();
        if n2 < 1.0 {
            Ok(())
        } else {
            Err(GeometryError::NotInterior { norm_sq: n2 })
        }
    }
}

/// Hermitian inner product ⟨z,w⟩ = Σ_k z_k · conj(w_k).
///
/// Conjugate-symmetric: `inner(z,w) = conj(inner(w,z))`.
pub fn inner(z: &BallPoint, w: &BallPoint) -> Result<Complex64, GeometryError> {
    z.check_dim(w)?;
    Ok(inner_unchecked(z.coords(), w.coords()))
}

pub(crate) fn inner_unchecked(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in z.iter().zip(w.iter()) {
        acc += a * b.conj();
    }
    acc
}

/// Orthogonal projection `P_a z = (⟨z,a⟩ / |a|²) a` onto the line spanned by `a`.
///
/// Fails for `a = 0`; the automorphism code handles that case through the
/// `Φ_0 = −I` convention instead.
pub fn proj_parallel(a: &BallPoint, z: &BallPoint) -> Result<BallPoint, GeometryError> {
    a.check_dim(z)?;
    let a2 = a.norm_sq();
    if a2 == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    let scale = inner_unchecked(z.coords(), a.coords()) / a2;
    Ok(BallPoint::from_coords(a.coords.iter().map(|c| scale * c).collect()))
}

/// Complementary projection `Q_a z = z − P_a z`.
pub fn proj_orthogonal(a: &BallPoint, z: &BallPoint) -> Result<BallPoint, GeometryError> {
    let p = proj_parallel(a, z)?;
    Ok(BallPoint::from_coords(
        z.coords.iter().zip(p.coords.iter()).map(|(zi, pi)| zi - pi).collect(),
    ))
}

/// The involutive automorphism Φ_a of the unit ball, precomputing `|a|²` and
/// `s_a = √(1 − |a|²)`.
///
/// `Φ_0` is taken to be `−I`, the limit consistent with `Φ_a(0) = a` and the
/// involution property.
#[derive(Debug, Clone)]
pub struct MobiusMap {
    a: BallPoint,
    a_norm_sq: f64,
    s_a: f64,
}

impl MobiusMap {
    pub fn new(a: BallPoint) -> Result<Self, GeometryError> {
        a.check_interior()?;
        let a_norm_sq = a.norm_sq();
        let s_a = (1.0 - a_norm_sq).sqrt();
        Ok(Self { a, a_norm_sq, s_a })
    }

    /// Same map with the sign of `s_a` flipped. Used only by the mutation
    /// mode of the identity battery to prove the checks can fail.
    pub fn with_flipped_s(a: BallPoint) -> Result<Self, GeometryError> {
        let mut m = Self::new(a)?;
        m.s_a = -m.s_a;
        Ok(m)
    }

    pub fn parameter(&self) -> &BallPoint {
        &self.a
    }

    pub fn a_norm_sq(&self) -> f64 {
        self.a_norm_sq
    }

    pub fn s_a(&self) -> f64 {
        self.s_a
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Numerator `a − P_a z − s_a Q_a z` of the automorphism (equal to
    /// `Φ_a(z)·(1 − ⟨z,a⟩)`). With `a = 0` this is `−z`.
    pub fn numerator(&self, z: &BallPoint) -> Result<BallPoint, GeometryError> {
        self.a.check_dim(z)?;
        if self.a_norm_sq == 0.0 {
            return Ok(BallPoint::from_coords(z.coords.iter().map(|c| -c).collect()));
        }
        // P_a z = (⟨z,a⟩/|a|²) a; the numerator combines the parallel and
        // orthogonal parts in one pass.
        let scale = inner_unchecked(z.coords(), self.a.coords()) / self.a_norm_sq;
        let coords: Coords = self
            .a
            .coords
            .iter()
            .zip(z.coords.iter())
            .map(|(ak, zk)| {
                let pk = scale * ak;
                ak - pk - self.s_a * (zk - pk)
            })
            .collect();
        Ok(BallPoint::from_coords(coords))
    }

    /// Φ_a(z) for interior z. Satisfies Φ_a(0) = a, Φ_a(a) = 0 and
    /// Φ_a ∘ Φ_a = id.
    pub fn apply(&self, z: &BallPoint) -> Result<BallPoint, GeometryError> {
        z.check_interior()?;
        let num = self.numerator(z)?;
        if self.a_norm_sq == 0.0 {
            return Ok(num);
        }
        let denom = Complex64::new(1.0, 0.0)
            - inner_unchecked(z.coords(), self.a.coords());
        Ok(BallPoint::from_coords(num.coords.iter().map(|c| c / denom).collect()))
    }

    /// `1 − |Φ_a(z)|²` through the product identity
    /// `(1 − |a|²)(1 − |z|²) / |1 − ⟨z,a⟩|²`; always in (0, 1] for interior
    /// arguments.
    pub fn one_minus_phi_sq(&self, z: &BallPoint) -> Result<f64, GeometryError> {
        z.check_interior()?;
        self.a.check_dim(z)?;
        Ok(one_minus_phi_sq_product(&self.a, self.a_norm_sq, z))
    }

    /// Holomorphic derivative Φ_a'(0) as a dense row-major n×n matrix:
    /// the linear map `−(1 − |a|²) P_a − s_a Q_a` (so `−I` when a = 0).
    pub fn jacobian_at_zero(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut m = Vec::with_capacity(n * n);
        if self.a_norm_sq == 0.0 {
            for r in 0..n {
                for c in 0..n {
                    m.push(if r == c {
                        Complex64::new(-1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    });
                }
            }
            return m;
        }
        // (P_a)_{rc} = a_r conj(a_c) / |a|²; the map applied to v gives
        // -(1-|a|²) P_a v - s_a (v - P_a v).
        let coeff = -(1.0 - self.a_norm_sq) + self.s_a;
        for r in 0..n {
            for c in 0..n {
                let p_rc = self.a.coords[r] * self.a.coords[c].conj() / self.a_norm_sq;
                let diag = if r == c { Complex64::new(-self.s_a, 0.0) } else { Complex64::new(0.0, 0.0) };
                m.push(diag + coeff * p_rc);
            }
        }
        m
    }
}

fn one_minus_phi_sq_product(a: &BallPoint, a_norm_sq: f64, z: &BallPoint) -> f64 {
    let denom = Complex64::new(1.0, 0.0) - inner_unchecked(z.coords(), a.coords());
    (1.0 - a_norm_sq) * (1.0 - z.norm_sq()) / denom.norm_sqr()
}

/// Both sides of the automorphism identity (for `γ > 0`):
///
/// ```text
/// 1 / |1 − ⟨Φ_z(w),z⟩|^{2γ}  =  |1 − ⟨z,w⟩|^{2γ} / (1 − |z|²)^{2γ}
/// ```
///
/// returned as `(lhs, rhs)`; the two agree to ~1e-9 relative for interior
/// arguments with |z|,|w| ≤ 0.999.
pub fn reciprocal_identity_sides(
    z: &BallPoint,
    w: &BallPoint,
    gamma: f64,
) -> Result<(f64, f64), GeometryError> {
    z.check_interior()?;
    w.check_interior()?;
    let phi = MobiusMap::new(z.clone())?.apply(w)?;
    let lhs_denom = (Complex64::new(1.0, 0.0)
        - inner_unchecked(phi.coords(), z.coords()))
    .norm_sqr();
    let lhs = lhs_denom.powf(-gamma);
    let dzw = (Complex64::new(1.0, 0.0) - inner_unchecked(z.coords(), w.coords())).norm_sqr();
    let rhs = (dzw / ((1.0 - z.norm_sq()) * (1.0 - z.norm_sq()))).powf(gamma);
    Ok((lhs, rhs))
}

/// The change-of-variables kernel
/// `k_z(w) = (1 − |z|²)^γ / |1 − ⟨z,w⟩|^{2γ}` with `γ = n + 1 + α`.
pub fn kernel_weight_k(z: &BallPoint, w: &BallPoint, gamma: f64) -> Result<f64, GeometryError> {
    z.check_interior()?;
    w.check_interior()?;
    z.check_dim(w)?;
    Ok(kernel_weight_unchecked(z, w, gamma))
}

pub(crate) fn kernel_weight_unchecked(z: &BallPoint, w: &BallPoint, gamma: f64) -> f64 {
    let denom = (Complex64::new(1.0, 0.0) - inner_unchecked(z.coords(), w.coords())).norm_sqr();
    ((1.0 - z.norm_sq()) / denom).powf(gamma)
}

/// The three quantities of the displacement inequalities: for z ≠ w interior,
///
/// ```text
/// |z − Φ_z(w)|  ≥  |w| (1 − |z|²) / |1 − ⟨z,w⟩|
/// |z − Φ_z(w)|² ≤  2 (1 − |z|²) / |1 − ⟨z,w⟩|
/// ```
///
/// returned as `(|z − Φ_z(w)|, lower, upper_sq)`.
pub fn lemma43_triple(z: &BallPoint, w: &BallPoint) -> Result<(f64, f64, f64), GeometryError> {
    z.check_interior()?;
    w.check_interior()?;
    z.check_dim(w)?;
    if z.approx_eq(w, 1e-15) {
        return Err(GeometryError::DegeneratePair);
    }
    let phi = MobiusMap::new(z.clone())?.apply(w)?;
    let displacement = BallPoint::from_coords(
        z.coords.iter().zip(phi.coords.iter()).map(|(a, b)| a - b).collect(),
    )
    .norm();
    let denom = (Complex64::new(1.0, 0.0) - inner_unchecked(z.coords(), w.coords())).norm();
    let lower = w.norm() * (1.0 - z.norm_sq()) / denom;
    let upper_sq = 2.0 * (1.0 - z.norm_sq()) / denom;
    Ok((displacement, lower, upper_sq))
}

/// Bergman pseudometric `d(z,w) = |Φ_z(w)|`, computed as
/// `√(1 − product form)` so that symmetry in (z, w) is exact.
pub fn bergman_pseudometric(z: &BallPoint, w: &BallPoint) -> Result<f64, GeometryError> {
    z.check_interior()?;
    w.check_interior()?;
    z.check_dim(w)?;
    let prod = one_minus_phi_sq_product(z, z.norm_sq(), w);
    Ok((1.0 - prod).max(0.0).sqrt())
}
