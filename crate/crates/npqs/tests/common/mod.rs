//! Shared test oracles: deterministic Gauss–Legendre tensor quadrature on the
//! unit disk (n = 1) and closed-form weights, independent of the Monte Carlo
//! estimators they validate.

#![allow(dead_code)]

use std::f64::consts::PI;

use npqs::Complex64;

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    for i in 0..k {
        let mut x = (PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=k {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Tensor quadrature grid for normalized-volume integrals on the unit disk:
/// radial substitution t = r² on paneled Gauss–Legendre nodes, uniform
/// angular grid (spectrally accurate for periodic integrands).
pub struct DiskQuad {
    t_nodes: Vec<f64>,
    t_weights: Vec<f64>,
    thetas: Vec<f64>,
}

impl DiskQuad {
    /// `k_per_panel` radial nodes on each panel of `breaks` (ascending,
    /// starting at 0 and ending at 1), `m_theta` angular points.
    pub fn new(k_per_panel: usize, breaks: &[f64], m_theta: usize) -> Self {
        assert!(breaks.len() >= 2 && breaks[0] == 0.0 && *breaks.last().unwrap() == 1.0);
        let (xs, ws) = gauss_legendre(k_per_panel);
        let mut t_nodes = Vec::new();
        let mut t_weights = Vec::new();
        for win in breaks.windows(2) {
            let (a, b) = (win[0], win[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in xs.iter().zip(ws.iter()) {
                t_nodes.push(mid + half * x);
                t_weights.push(half * w);
            }
        }
        let thetas = (0..m_theta)
            .map(|m| 2.0 * PI * m as f64 / m_theta as f64)
            .collect();
        Self { t_nodes, t_weights, thetas }
    }

    /// Default grid: three radial panels crowding the boundary, good for the
    /// smooth and mildly singular integrands used in the oracle suite.
    pub fn standard() -> Self {
        Self::new(24, &[0.0, 0.7, 0.95, 1.0], 48)
    }

    /// ∫_D g dV with dV the normalized area measure.
    pub fn integral<G: Fn(Complex64) -> f64>(&self, g: G) -> f64 {
        let m = self.thetas.len() as f64;
        let mut acc = 0.0;
        for (t, wt) in self.t_nodes.iter().zip(self.t_weights.iter()) {
            let r = t.sqrt();
            let mut ring = 0.0;
            for theta in &self.thetas {
                ring += g(Complex64::from_polar(r, *theta));
            }
            acc += wt * ring / m;
        }
        acc
    }

    /// ∬_{D×D} G dV dV by the full 4-dimensional tensor product.
    pub fn pair_integral<G: Fn(Complex64, Complex64) -> f64>(&self, g: G) -> f64 {
        let m = self.thetas.len() as f64;
        // Precompute the grid points once; the double loop is the hot path.
        let mut points = Vec::with_capacity(self.t_nodes.len() * self.thetas.len());
        for (t, wt) in self.t_nodes.iter().zip(self.t_weights.iter()) {
            let r = t.sqrt();
            for theta in &self.thetas {
                points.push((Complex64::from_polar(r, *theta), wt / m));
            }
        }
        let mut acc = 0.0;
        for (z, wz) in &points {
            let mut inner = 0.0;
            for (w, ww) in &points {
                inner += g(*z, *w) * ww;
            }
            acc += inner * wz;
        }
        acc
    }
}

/// `c_α` of the normalized weighted measure on the disk (n = 1):
/// Γ(α+2)/Γ(α+1) = α+1.
pub fn c_alpha_disk(alpha: f64) -> f64 {
    alpha + 1.0
}

/// The weight `(1−|z|²)^q (1−|Φ_a(z)|²)^s` on the disk, via the product form.
pub fn disk_weight(z: Complex64, a: Complex64, q: f64, s: f64) -> f64 {
    let one_z = 1.0 - z.norm_sqr();
    let one_a = 1.0 - a.norm_sqr();
    let denom = (Complex64::new(1.0, 0.0) - z * a.conj()).norm_sqr();
    one_z.powf(q) * (one_a * one_z / denom).powf(s)
}

/// Oracle for the defining norm integral on the disk at fixed `a`:
/// `∫ |f|^p (1−|z|²)^q (1−|Φ_a|²)^s dλ`, `dλ = (1−|z|²)^{−2} dV`.
pub fn nnorm_oracle<F: Fn(Complex64) -> Complex64>(
    quad: &DiskQuad,
    f: F,
    p: f64,
    q: f64,
    s: f64,
    a: Complex64,
) -> f64 {
    quad.integral(|z| {
        let w = disk_weight(z, a, q, s);
        f(z).norm().powf(p) * w / (1.0 - z.norm_sqr()).powi(2)
    })
}

/// Oracle for the derivative characterizations on the disk. `deriv` is the
/// hand-written f′; `kind` 1 uses |f′|(1−|z|²)^{p+q}, 2 the invariant
/// gradient |(1−|z|²)f′|(1−|z|²)^q, 3 the radial |z f′|(1−|z|²)^{p+q}.
pub fn derivative_oracle<D: Fn(Complex64) -> Complex64>(
    quad: &DiskQuad,
    deriv: D,
    kind: u8,
    p: f64,
    q: f64,
    s: f64,
    a: Complex64,
) -> f64 {
    quad.integral(|z| {
        let one_z = 1.0 - z.norm_sqr();
        let fp = deriv(z);
        let (mag, extra_q) = match kind {
            1 => (fp.norm(), p + q),
            2 => (one_z * fp.norm(), q),
            3 => ((z * fp).norm(), p + q),
            _ => unreachable!(),
        };
        let one_a = 1.0 - a.norm_sqr();
        let denom = (Complex64::new(1.0, 0.0) - z * a.conj()).norm_sqr();
        mag.powf(p) * one_z.powf(extra_q) * (one_a * one_z / denom).powf(s)
            / one_z.powi(2)
    })
}

/// Which difference kernel a pair oracle integrates against.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum PairKernel {
    /// |1 − ⟨z,w⟩|^{−2γ}
    InnerProduct,
    /// |z − w|^{−2γ} (equals the projection kernel on the disk)
    Euclidean,
}

/// Oracle for the double-integral functionals on the disk at fixed `a`:
/// `∬ |f(z)−f(w)|^p K(z,w) (1−|z|²)^q (1−|Φ_a(z)|²)^s dV_α(z) dV_α(w)`.
pub fn pair_oracle<F: Fn(Complex64) -> Complex64>(
    quad: &DiskQuad,
    f: F,
    kernel: PairKernel,
    p: f64,
    q: f64,
    s: f64,
    alpha: f64,
    a: Complex64,
) -> f64 {
    let gamma = 2.0 + alpha;
    let c = c_alpha_disk(alpha);
    quad.pair_integral(|z, w| {
        let diff = (f(z) - f(w)).norm();
        if diff == 0.0 {
            return 0.0;
        }
        let kernel_sq = match kernel {
            PairKernel::InnerProduct => {
                (Complex64::new(1.0, 0.0) - z * w.conj()).norm_sqr()
            }
            PairKernel::Euclidean => (z - w).norm_sqr(),
        };
        let weight = disk_weight(z, a, q, s);
        diff.powf(p) * kernel_sq.powf(-gamma) * weight
            * c * (1.0 - z.norm_sqr()).powf(alpha)
            * c * (1.0 - w.norm_sqr()).powf(alpha)
    })
}
