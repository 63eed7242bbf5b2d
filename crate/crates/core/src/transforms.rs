//! Concrete transform instances: the Fourier-Bessel (Hankel) family on the
//! half-line and the rank-one Dunkl family on the full line.
//!
//! Both are unitary integral transforms `T f(ξ) = ∫ f(x) K(x,ξ) dμ(x)` whose
//! kernel is bounded by one and homogeneous (`K(λx, ξ) = K(x, λξ)`), and whose
//! measure scales as `μ(λA) = λ^{2a} μ(A)`. The Dunkl normalization constant
//! `c_k` is folded into the measure density so that every instance shares this
//! exact shape; the kernel bound is then 1 for both families.

use crate::error::{Error, Result};
use crate::specfun::{bessel_j_norm_unchecked, gamma_pos};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Which kernel family, with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "lowercase")]
pub enum TransformKind {
    /// Fourier-Bessel transform of index `α ≥ -1/2` on `[0, ∞)`.
    Hankel(f64),
    /// Rank-one Dunkl transform with multiplicity `k ≥ 0` on `ℝ`.
    Dunkl1d(f64),
}

/// A transform instance together with its structural data: homogeneity degree
/// `a`, kernel bound `c_τ` and kernel growth exponents `m`, `m̂` (zero for
/// every kernel implemented here).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "TransformKind", into = "TransformKind")]
pub struct TransformSpec {
    kind: TransformKind,
}

impl From<TransformKind> for TransformSpec {
    fn from(kind: TransformKind) -> Self {
        TransformSpec { kind }
    }
}

impl From<TransformSpec> for TransformKind {
    fn from(spec: TransformSpec) -> Self {
        spec.kind
    }
}

impl TransformSpec {
    pub fn hankel(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < -0.5 {
            return Err(Error::domain(
                "TransformSpec::hankel",
                format!("requires alpha >= -1/2, got {alpha}"),
            ));
        }
        Ok(TransformSpec {
            kind: TransformKind::Hankel(alpha),
        })
    }

    pub fn dunkl1d(k: f64) -> Result<Self> {
        if !k.is_finite() || k < 0.0 {
            return Err(Error::domain(
                "TransformSpec::dunkl1d",
                format!("requires k >= 0, got {k}"),
            ));
        }
        Ok(TransformSpec {
            kind: TransformKind::Dunkl1d(k),
        })
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    /// Homogeneity half-degree of the measure: `α + 1` for Hankel,
    /// `k + 1/2` for rank-one Dunkl.
    pub fn a(&self) -> f64 {
        match self.kind {
            TransformKind::Hankel(alpha) => alpha + 1.0,
            TransformKind::Dunkl1d(k) => k + 0.5,
        }
    }

    /// Kernel bound `c_τ`. With the normalization constant folded into the
    /// measure density, both families have `|K| ≤ 1`.
    pub fn c_tau(&self) -> f64 {
        1.0
    }

    /// Polynomial growth exponent of the kernel in `x` (zero here).
    pub fn m(&self) -> f64 {
        0.0
    }

    /// Polynomial growth exponent of the kernel in `ξ` (zero here).
    pub fn m_hat(&self) -> f64 {
        0.0
    }

    /// Whether the cone is the full line (Dunkl) or the half-line (Hankel).
    pub fn two_sided(&self) -> bool {
        matches!(self.kind, TransformKind::Dunkl1d(_))
    }

    /// True if `x` lies in the cone Ω.
    pub fn in_cone(&self, x: f64) -> bool {
        self.two_sided() || x >= 0.0
    }

    /// Total mass of the angular part of the measure: the constant `A` in
    /// `∫ g(|x|) dμ(x) = A ∫₀^∞ g(r) r^{2a-1} dr`.
    pub fn angular_mass(&self) -> f64 {
        match self.kind {
            TransformKind::Hankel(alpha) => 1.0 / (2.0f64.powf(alpha) * gamma_pos(alpha + 1.0)),
            TransformKind::Dunkl1d(_) => 2.0 * self.normalization(),
        }
    }

    /// The constant multiplying the bare density: `1/(2^α Γ(α+1))` for Hankel,
    /// the Mehta-type constant `c_k` for Dunkl.
    pub fn normalization(&self) -> f64 {
        match self.kind {
            TransformKind::Hankel(alpha) => 1.0 / (2.0f64.powf(alpha) * gamma_pos(alpha + 1.0)),
            TransformKind::Dunkl1d(k) => mehta_constant_rank_one_unchecked(k),
        }
    }
}

/// Kernel `K(x, ξ)`.
///
/// Hankel: `j_α(xξ)`, real. Dunkl: the rank-one closed form
/// `j_{k-1/2}(xξ) - i xξ/(2k+1) j_{k+1/2}(xξ)`, which reduces to `e^{-i x ξ}`
/// at `k = 0`. Modulus is at most one in both cases.
pub fn kernel(spec: &TransformSpec, x: f64, xi: f64) -> Result<C64> {
    if !spec.in_cone(x) || !spec.in_cone(xi) {
        return Err(Error::domain(
            "kernel",
            format!("point ({x}, {xi}) outside the cone"),
        ));
    }
    Ok(kernel_unchecked(spec, x, xi))
}

pub(crate) fn kernel_unchecked(spec: &TransformSpec, x: f64, xi: f64) -> C64 {
    let u = x * xi;
    match spec.kind() {
        TransformKind::Hankel(alpha) => C64::new(bessel_j_norm_unchecked(alpha, u), 0.0),
        TransformKind::Dunkl1d(k) => {
            let re = bessel_j_norm_unchecked(k - 0.5, u);
            let im = -u / (2.0 * k + 1.0) * bessel_j_norm_unchecked(k + 0.5, u);
            C64::new(re, im)
        }
    }
}

/// Density `w(x)` of the measure, `dμ = w dx` on the cone:
/// `x^{2α+1} / (2^α Γ(α+1))` for Hankel and `c_k |x|^{2k}` for Dunkl.
pub fn measure_density(spec: &TransformSpec, x: f64) -> f64 {
    match spec.kind() {
        TransformKind::Hankel(alpha) => spec.normalization() * x.powf(2.0 * alpha + 1.0),
        TransformKind::Dunkl1d(k) => {
            if k == 0.0 {
                spec.normalization()
            } else {
                spec.normalization() * x.abs().powf(2.0 * k)
            }
        }
    }
}

/// Mehta-type constant for the rank-one case:
/// `c_k = (∫_ℝ e^{-x²/2} |x|^{2k} dx)^{-1} = 1/(2^{k+1/2} Γ(k+1/2))`.
pub fn mehta_constant(k: f64) -> Result<f64> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::domain(
            "mehta_constant",
            format!("requires k >= 0, got {k}"),
        ));
    }
    Ok(mehta_constant_rank_one_unchecked(k))
}

fn mehta_constant_rank_one_unchecked(k: f64) -> f64 {
    1.0 / (2.0f64.powf(k + 0.5) * gamma_pos(k + 0.5))
}

/// Mehta constant for general `(d, γ)` from the radial reduction, given the
/// total angular weight `d_k`: `c_k^{-1} = d_k ∫₀^∞ e^{-r²/2} r^{2γ+d-1} dr`.
pub fn mehta_constant_radial(d_k: f64, gamma_idx: f64, d: u32) -> Result<f64> {
    if d_k <= 0.0 || gamma_idx < 0.0 || d == 0 {
        return Err(Error::domain(
            "mehta_constant_radial",
            "requires d_k > 0, gamma >= 0, d >= 1",
        ));
    }
    let e = gamma_idx + d as f64 / 2.0;
    Ok(1.0 / (d_k * 2.0f64.powf(e - 1.0) * gamma_pos(e)))
}

/// Total angular weight `d_k = c_k^{-1} / (2^{γ+d/2-1} Γ(γ+d/2))`.
pub fn sphere_weight_dk(c_k: f64, gamma_idx: f64, d: u32) -> Result<f64> {
    if c_k <= 0.0 || gamma_idx < 0.0 || d == 0 {
        return Err(Error::domain(
            "sphere_weight_dk",
            "requires c_k > 0, gamma >= 0, d >= 1",
        ));
    }
    let e = gamma_idx + d as f64 / 2.0;
    Ok(1.0 / (c_k * 2.0f64.powf(e - 1.0) * gamma_pos(e)))
}
