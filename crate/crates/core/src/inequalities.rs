//! Explicit constants and numerical certificates for the uncertainty
//! inequalities: local dispersion bounds in both regimes, the global
//! Heisenberg-type product, the Donoho-Stark support bound, and the printed
//! closed forms for the Dunkl family.
//!
//! Conventions: the generic evaluators work with the *normalized* measures
//! used everywhere in this crate (the Dunkl density carries its Mehta constant
//! `c_k`), so the kernel bound is one. The `dunkl_local_constant_*` evaluators
//! instead reproduce the classical unnormalized-measure closed forms
//! symbol-for-symbol; the two conventions differ by explicit powers of `c_k`.

use crate::concentration::{weighted_measure, ConcentrationPair, SetSpec};
use crate::discretize::{DiscreteOperator, GridMeta};
use crate::error::{Error, Result};
use crate::families::RealFn;
use crate::par;
use crate::specfun::{gamma_pos, ln_gamma_pos};
use crate::transforms::{sphere_weight_dk, TransformSpec};
use crate::C64;
use nalgebra::DVector;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Outcome of one certified inequality instance. `right` is the side proved
/// larger, so `pass ⇔ margin = right - left ≥ -1e-9 |right|`.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub id: String,
    pub transform: TransformSpec,
    pub params: BTreeMap<String, f64>,
    pub left: f64,
    pub right: f64,
    pub constant: f64,
    pub margin: f64,
    pub pass: bool,
    pub resolution: Option<GridMeta>,
}

impl InequalityReport {
    fn new(
        id: &str,
        transform: TransformSpec,
        params: BTreeMap<String, f64>,
        left: f64,
        right: f64,
        constant: f64,
        resolution: Option<GridMeta>,
    ) -> Self {
        let margin = right - left;
        InequalityReport {
            id: id.to_string(),
            transform,
            params,
            left,
            right,
            constant,
            margin,
            pass: margin >= -1e-9 * right.abs(),
            resolution,
        }
    }

    /// One CSV summary row: id, params, lhs, rhs, margin, pass. Params are
    /// `key=value` pairs joined by `;` to stay comma-free.
    pub fn csv_row(&self) -> String {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v:.16e}"))
            .collect();
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{}\n",
            self.id,
            params.join(";"),
            self.left,
            self.right,
            self.margin,
            self.pass
        )
    }
}

/// `C₁(s) = ∫_{|x|≤1} |x|^{-2s} dμ`, finite for `0 < s < a`.
pub fn c1_constant(spec: &TransformSpec, s: f64) -> Result<f64> {
    let a = spec.a();
    if !(s > 0.0 && s < a) {
        return Err(Error::domain(
            "c1_constant",
            format!("requires 0 < s < a = {a}, got s = {s}"),
        ));
    }
    Ok(spec.angular_mass() / (2.0 * a - 2.0 * s))
}

/// `C₂(s) = ∫ (1+|x|)^{-2s} dμ = A · B(2a, 2s-2a)`, finite for `s > a`.
pub fn c2_constant(spec: &TransformSpec, s: f64) -> Result<f64> {
    let a = spec.a();
    if s <= a {
        return Err(Error::domain(
            "c2_constant",
            format!("requires s > a = {a}, got s = {s}"),
        ));
    }
    let ln_beta = ln_gamma_pos(2.0 * a) + ln_gamma_pos(2.0 * s - 2.0 * a) - ln_gamma_pos(2.0 * s);
    Ok(spec.angular_mass() * ln_beta.exp())
}

/// `∫ (1+|x|^{2s})^{-1} dμ = A π / (2s sin(πa/s))`, finite for `s > a`. This
/// is the variant that enters the optimized large-`s` local constant.
pub fn c2_tilde_constant(spec: &TransformSpec, s: f64) -> Result<f64> {
    let a = spec.a();
    if s <= a {
        return Err(Error::domain(
            "c2_tilde_constant",
            format!("requires s > a = {a}, got s = {s}"),
        ));
    }
    Ok(spec.angular_mass() * PI / (2.0 * s * (PI * a / s).sin()))
}

/// Which branch of the local inequality a constant belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocalRegime {
    /// `0 < s < a`: `‖Tf‖ ≤ c · μ̂(Σ)^e · ‖|x|^s f‖`.
    SmallS,
    /// `s > a + m`: `‖Tf‖ ≤ c · μ̂(Σ)^{1/2} · ‖f‖^{1-a/s} ‖|x|^s f‖^{a/s}`.
    LargeS,
}

/// A local-inequality constant together with the exponents of its right-hand
/// side: `RHS = value · μ̂(Σ)^{sigma_exponent} · ‖f‖^{f_exponent} · ‖|x|^s f‖^{dispersion_exponent}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LocalConstant {
    pub regime: LocalRegime,
    pub value: f64,
    pub sigma_exponent: f64,
    pub f_exponent: f64,
    pub dispersion_exponent: f64,
}

/// Constant of the local uncertainty inequality in the applicable regime.
///
/// Small `s`: the truncation radius `r = μ̂(Σ)^{-1/(2a)}` (or the
/// `μ̂(Σ) ≤ 1` branch exponent) gives `value = 1 + 2^m c_τ √C₁(s)`. Large `s`:
/// the dilation-optimized bound through `∫ dμ/(1+|x|^{2s})` gives
/// `value = c_τ √( C̃₂(s) · s/(s-a) · ((s-a)/a)^{a/s} )`. The two regimes meet
/// nowhere when `m = 0`; `s = a` is rejected.
pub fn local_constant(spec: &TransformSpec, s: f64, sigma_measure: f64) -> Result<LocalConstant> {
    let a = spec.a();
    let m = spec.m();
    if s <= 0.0 {
        return Err(Error::domain("local_constant", "requires s > 0"));
    }
    if s < a {
        let value = 1.0 + 2.0f64.powf(m) * spec.c_tau() * c1_constant(spec, s)?.sqrt();
        let sigma_exponent = if sigma_measure <= 1.0 {
            s / (2.0 * (a + m))
        } else {
            s / (2.0 * a)
        };
        Ok(LocalConstant {
            regime: LocalRegime::SmallS,
            value,
            sigma_exponent,
            f_exponent: 0.0,
            dispersion_exponent: 1.0,
        })
    } else if s > a + m {
        let c2t = c2_tilde_constant(spec, s)?;
        let value = spec.c_tau() * (c2t * (s / (s - a)) * ((s - a) / a).powf(a / s)).sqrt();
        Ok(LocalConstant {
            regime: LocalRegime::LargeS,
            value,
            sigma_exponent: 0.5,
            f_exponent: 1.0 - a / s,
            dispersion_exponent: a / s,
        })
    } else {
        Err(Error::domain(
            "local_constant",
            format!("regime a ≤ s ≤ a+m (s = {s}, a = {a}, m = {m}) needs an ε; use local_constant_interpolated"),
        ))
    }
}

/// Formula evaluator for the intermediate regime `a ≤ s ≤ a + m`, which
/// carries a free `ε > 0`: apply the small-`s` bound at `σ = a - 2(a+m)ε` and
/// interpolate `‖|x|^σ f‖ ≤ ‖f‖^{1-σ/s} ‖|x|^s f‖^{σ/s}` (Hölder, constant
/// one). Exposed for completeness; no in-scope kernel has `m > 0`, so nothing
/// exercises it numerically.
pub fn local_constant_interpolated(
    spec: &TransformSpec,
    s: f64,
    eps: f64,
    sigma_measure: f64,
) -> Result<LocalConstant> {
    let a = spec.a();
    let m = spec.m();
    if !(s >= a && s <= a + m + 1e-15) {
        return Err(Error::domain(
            "local_constant_interpolated",
            format!("requires a ≤ s ≤ a+m, got s = {s}"),
        ));
    }
    let sigma = a - 2.0 * (a + m) * eps;
    if sigma <= 0.0 {
        return Err(Error::domain(
            "local_constant_interpolated",
            "eps too large: shifted exponent is nonpositive",
        ));
    }
    let base = local_constant(spec, sigma, sigma_measure)?;
    Ok(LocalConstant {
        regime: LocalRegime::SmallS,
        value: base.value,
        sigma_exponent: base.sigma_exponent,
        f_exponent: 1.0 - sigma / s,
        dispersion_exponent: sigma / s,
    })
}

/// Printed closed form of the small-`s` local constant for the Dunkl
/// transform with index data `(d, γ)` and Mehta constant `c_k`:
/// `c(s,k) = (2γ+d)/(2γ+d-2s) · [ c_k/(2s) · √((2γ+d-2s) d_k) ]^{(2γ+d)/(2s)}`.
pub fn dunkl_local_constant_small_s(d: u32, gamma: f64, s: f64, c_k: f64) -> Result<f64> {
    let g = 2.0 * gamma + d as f64;
    if !(s > 0.0 && 2.0 * s < g) {
        return Err(Error::domain(
            "dunkl_local_constant_small_s",
            format!("requires 0 < s < (2γ+d)/2, got s = {s}"),
        ));
    }
    let d_k = sphere_weight_dk(c_k, gamma, d)?;
    let bracket = c_k / (2.0 * s) * ((g - 2.0 * s) * d_k).sqrt();
    Ok(g / (g - 2.0 * s) * bracket.powf(g / (2.0 * s)))
}

/// Printed closed form of the large-`s` local constant for the Dunkl
/// transform:
/// `c'(s,k) = c_k [ d_k/(2γ+d) · (2s/(2γ+d) - 1)^{(2γ+d)/(2s)-1} · Γ((2γ+d)/(2s)) Γ(1-(2γ+d)/(2s)) ]^{1/2}`.
pub fn dunkl_local_constant_large_s(d: u32, gamma: f64, s: f64, c_k: f64) -> Result<f64> {
    let g = 2.0 * gamma + d as f64;
    if 2.0 * s <= g {
        return Err(Error::domain(
            "dunkl_local_constant_large_s",
            format!("requires s > (2γ+d)/2, got s = {s}"),
        ));
    }
    let d_k = sphere_weight_dk(c_k, gamma, d)?;
    let r = g / (2.0 * s);
    let inner = d_k / g * (2.0 * s / g - 1.0).powf(r - 1.0) * gamma_pos(r) * gamma_pos(1.0 - r);
    Ok(c_k * inner.sqrt())
}

/// `‖ |x|^s f ‖` by grid quadrature.
pub fn moment_norm(weights: &[f64], nodes: &[f64], f: &DVector<C64>, s: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..f.len() {
        acc += weights[i] * nodes[i].abs().powf(2.0 * s) * f[i].norm_sqr();
    }
    acc.sqrt()
}

/// Certify the local inequality `‖Tf‖_{L²(Σ)} ≤ RHS` on a family: reports the
/// worst `LHS/RHS` ratio as `left` against `right = 1`.
pub fn verify_local(
    forward: &DiscreteOperator,
    s: f64,
    sigma: &SetSpec,
    family: &[RealFn],
) -> Result<InequalityReport> {
    let spec = *forward.in_grid.spec();
    let sigma_measure = weighted_measure(sigma, &spec, 2.0 * spec.m_hat())?;
    let constant = local_constant(&spec, s, sigma_measure)?;
    let mask: Vec<bool> = forward
        .out_grid
        .nodes()
        .iter()
        .map(|&x| sigma.contains(x))
        .collect();
    let ratios = par::map_slice(family, |f| {
        let fv = forward.in_grid.sample(f);
        let nf = forward.in_grid.norm(&fv);
        if nf == 0.0 {
            return 0.0;
        }
        let tf = forward.apply(&fv);
        let mut lhs_sq = 0.0;
        for j in 0..tf.len() {
            if mask[j] {
                lhs_sq += forward.out_grid.weights()[j] * tf[j].norm_sqr();
            }
        }
        let lhs = lhs_sq.sqrt();
        let ns = moment_norm(forward.in_grid.weights(), forward.in_grid.nodes(), &fv, s);
        let rhs = constant.value
            * sigma_measure.powf(constant.sigma_exponent)
            * nf.powf(constant.f_exponent)
            * ns.powf(constant.dispersion_exponent);
        if rhs == 0.0 {
            if lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            lhs / rhs
        }
    });
    let worst = ratios.iter().cloned().fold(0.0, f64::max);
    let mut params = BTreeMap::new();
    params.insert("s".into(), s);
    params.insert("sigma_measure".into(), sigma_measure);
    params.insert("family_size".into(), family.len() as f64);
    params.insert(
        "regime".into(),
        match constant.regime {
            LocalRegime::SmallS => 1.0,
            LocalRegime::LargeS => 3.0,
        },
    );
    Ok(InequalityReport::new(
        "local",
        spec,
        params,
        worst,
        1.0,
        constant.value,
        Some(forward.in_grid.metadata()),
    ))
}

/// How the global Heisenberg-type constant `C_{s,β}` is obtained.
#[derive(Debug, Clone, Copy)]
pub enum GlobalRoute {
    /// Through the local inequality and ball splitting; needs `s ≠ a`.
    LocalUncertainty,
    /// Through the annihilation constant of the unit-ball pair
    /// `(B₁, B̂₁)`; works for every `s`. The caller supplies `‖E_{B₁} F_{B̂₁}‖`.
    Annihilation { unit_ball_op_norm: f64 },
}

/// The balance factor `(β/s)^{s/(s+β)} + (s/β)^{β/(s+β)}` from minimizing
/// `λ^{2s} P + λ^{-2β} Q`.
fn balance_factor(s: f64, beta: f64) -> f64 {
    (beta / s).powf(s / (s + beta)) + (s / beta).powf(beta / (s + beta))
}

/// Valid constant for `‖|x|^s f‖^{2β/(s+β)} ‖|ξ|^β Tf‖^{2s/(s+β)} ≥ C ‖f‖²`.
pub fn global_constant(spec: &TransformSpec, s: f64, beta: f64, route: GlobalRoute) -> Result<f64> {
    if s <= 0.0 || beta <= 0.0 {
        return Err(Error::domain("global_constant", "requires s, β > 0"));
    }
    let a = spec.a();
    let k = balance_factor(s, beta);
    // μ̂(B̂₁) = A/(2a)
    let ball = spec.angular_mass() / (2.0 * a);
    match route {
        GlobalRoute::LocalUncertainty => {
            if s < a {
                let c = local_constant(spec, s, ball)?.value;
                Ok(1.0 / (k * (c * c * ball.powf(s / a)).powf(beta / (s + beta))))
            } else if s > a {
                let c = local_constant(spec, s, ball)?.value;
                Ok(1.0 / (k.powf(s / a) * (c * c * ball).powf(s * beta / (a * (s + beta)))))
            } else {
                Err(Error::domain(
                    "global_constant",
                    "local route needs s ≠ a; use the annihilation route",
                ))
            }
        }
        GlobalRoute::Annihilation { unit_ball_op_norm } => {
            if !(0.0..1.0).contains(&unit_ball_op_norm) {
                return Err(Error::domain(
                    "global_constant",
                    "unit-ball operator norm must lie in [0, 1)",
                ));
            }
            let c_ann = (1.0 - unit_ball_op_norm).powi(-2);
            Ok(1.0 / (c_ann * k))
        }
    }
}

/// Certify the global inequality on a family. `left` is the constant in use
/// and `right` the minimum of the uncertainty products over the family; the
/// sharp constant `a` and the Gaussian's product are recorded when `s = β = 1`.
pub fn verify_global(
    forward: &DiscreteOperator,
    s: f64,
    beta: f64,
    family: &[RealFn],
    route: GlobalRoute,
) -> Result<InequalityReport> {
    let spec = *forward.in_grid.spec();
    let constant = global_constant(&spec, s, beta, route)?;
    let ratios = par::map_slice(family, |f| global_ratio(forward, s, beta, f));
    let min_ratio = ratios
        .iter()
        .cloned()
        .filter(|r| r.is_finite() && *r > 0.0)
        .fold(f64::INFINITY, f64::min);
    let mut params = BTreeMap::new();
    params.insert("s".into(), s);
    params.insert("beta".into(), beta);
    params.insert("family_size".into(), family.len() as f64);
    params.insert("min_ratio".into(), min_ratio);
    if s == 1.0 && beta == 1.0 {
        let gaussian: RealFn = Box::new(|x| (-0.5 * x * x).exp());
        let g_ratio = global_ratio(forward, 1.0, 1.0, &gaussian);
        params.insert("gaussian_ratio".into(), g_ratio);
        params.insert("sharp_constant".into(), spec.a());
    }
    Ok(InequalityReport::new(
        "global",
        spec,
        params,
        constant,
        min_ratio,
        constant,
        Some(forward.in_grid.metadata()),
    ))
}

/// The uncertainty product `‖|x|^s f‖^{2β/(s+β)} ‖|ξ|^β Tf‖^{2s/(s+β)} / ‖f‖²`.
pub fn global_ratio(forward: &DiscreteOperator, s: f64, beta: f64, f: &RealFn) -> f64 {
    let fv = forward.in_grid.sample(f);
    let nf = forward.in_grid.norm(&fv);
    if nf == 0.0 {
        return f64::INFINITY;
    }
    let ns = moment_norm(forward.in_grid.weights(), forward.in_grid.nodes(), &fv, s);
    let tf = forward.apply(&fv);
    let mb = moment_norm(
        forward.out_grid.weights(),
        forward.out_grid.nodes(),
        &tf,
        beta,
    );
    ns.powf(2.0 * beta / (s + beta)) * mb.powf(2.0 * s / (s + beta)) / (nf * nf)
}

/// Donoho-Stark certificate: for unit `f` that is `ε₁`-concentrated on `S`
/// and `ε₂`-bandlimited on `Σ`,
/// `μ_{2m}(S) μ̂_{2m̂}(Σ) ≥ c_τ^{-2} (1 - √(ε₁²+ε₂²))²`.
/// When `ε₁² + ε₂² ≥ 1` the bound is vacuous and reported as a trivial pass.
/// The support-product lower bound `c_τ^{-2} (1 - √(ε₁²+ε₂²))²`, degenerating
/// to zero (vacuous) when `ε₁² + ε₂² ≥ 1`.
pub fn donoho_stark_bound(c_tau: f64, eps1: f64, eps2: f64) -> (f64, bool) {
    let eps_sq = eps1 * eps1 + eps2 * eps2;
    if eps_sq >= 1.0 {
        (0.0, true)
    } else {
        ((1.0 - eps_sq.sqrt()).powi(2) / (c_tau * c_tau), false)
    }
}

pub fn verify_donoho_stark(pair: &ConcentrationPair, f: &DVector<C64>) -> Result<InequalityReport> {
    let spec = pair.spec;
    let nf = pair.grid.norm(f);
    if nf == 0.0 {
        return Err(Error::domain("verify_donoho_stark", "zero test function"));
    }
    let fu = f / C64::new(nf, 0.0);
    let eps1 = pair.time_complement_norm(&fu);
    let eps2 = pair.band_complement_norm(&fu);
    let (bound, vacuous) = donoho_stark_bound(spec.c_tau(), eps1, eps2);
    let product = weighted_measure(&pair.s, &spec, 2.0 * spec.m())?
        * weighted_measure(&pair.sigma, &spec, 2.0 * spec.m_hat())?;
    let mut params = BTreeMap::new();
    params.insert("eps1".into(), eps1);
    params.insert("eps2".into(), eps2);
    params.insert("vacuous".into(), if vacuous { 1.0 } else { 0.0 });
    Ok(InequalityReport::new(
        "donoho_stark",
        spec,
        params,
        bound,
        product,
        1.0 / (spec.c_tau() * spec.c_tau()),
        Some(pair.grid.metadata()),
    ))
}

/// Strong-annihilation certificate: checks
/// `‖f‖² ≤ C (‖E_{S^c} f‖² + ‖F_{Σ^c} f‖²)` with `C = (1-‖E_S F_Σ‖)^{-2}`
/// for each family member, reporting the *worst* margin instance.
pub fn verify_strong_annihilation(
    pair: &ConcentrationPair,
    op_norm_value: f64,
    family: &[RealFn],
) -> Result<InequalityReport> {
    let c = match crate::concentration::annihilation_constant(op_norm_value) {
        crate::concentration::Annihilation::Constant(c) => c,
        crate::concentration::Annihilation::NotApplicable => {
            return Err(Error::domain(
                "verify_strong_annihilation",
                "operator norm too close to one",
            ))
        }
    };
    let values = par::map_slice(family, |f| {
        let fv = pair.grid.sample(f);
        let nf = pair.grid.norm(&fv);
        if nf == 0.0 {
            return (0.0, f64::INFINITY);
        }
        let fu = &fv / C64::new(nf, 0.0);
        let e1 = pair.time_complement_norm(&fu);
        let e2 = pair.band_complement_norm(&fu);
        (1.0, c * (e1 * e1 + e2 * e2))
    });
    // worst = smallest rhs against lhs = ‖f‖² = 1
    let mut worst = f64::INFINITY;
    for (lhs, rhs) in values {
        if lhs > 0.0 {
            worst = worst.min(rhs);
        }
    }
    let mut params = BTreeMap::new();
    params.insert("op_norm".into(), op_norm_value);
    params.insert("family_size".into(), family.len() as f64);
    Ok(InequalityReport::new(
        "strong_annihilation",
        pair.spec,
        params,
        1.0,
        worst,
        c,
        Some(pair.grid.metadata()),
    ))
}

/// Quadrature cross-check used by the constant tests: `∫_lo^hi g dμ-ish` with
/// plain composite Simpson on a density already folded into `g`.
#[cfg(test)]
pub(crate) fn simpson(g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let n = if n.is_multiple_of(2) { n } else { n + 1 };
    let h = (hi - lo) / n as f64;
    let mut s = g(lo) + g(hi);
    for i in 1..n {
        let x = lo + i as f64 * h;
        s += g(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{measure_density, mehta_constant};

    fn h(alpha: f64) -> TransformSpec {
        TransformSpec::hankel(alpha).unwrap()
    }

    fn d(k: f64) -> TransformSpec {
        TransformSpec::dunkl1d(k).unwrap()
    }

    #[test]
    fn c1_analytic_and_quadrature() {
        // hankel α=0, a=1, s=1/2: ∫₀¹ x^{1-1} dx = 1
        let spec = h(0.0);
        assert!((c1_constant(&spec, 0.5).unwrap() - 1.0).abs() < 1e-14);
        // quadrature oracle after x = t⁴, which smooths the endpoint power
        for &s in &[0.3, 0.5, 0.7] {
            let c1 = c1_constant(&spec, s).unwrap();
            let quad = simpson(
                |t| {
                    if t == 0.0 {
                        0.0
                    } else {
                        let x = t.powi(4);
                        measure_density(&spec, x) * x.powf(-2.0 * s) * 4.0 * t.powi(3)
                    }
                },
                0.0,
                1.0,
                20_000,
            );
            assert!((c1 - quad).abs() < 1e-8 * c1, "s={s}: {c1} vs {quad}");
        }
        assert!(c1_constant(&spec, 1.0).is_err());
        assert!(c1_constant(&spec, 1.5).is_err());
    }

    #[test]
    fn c1_diverges_toward_a() {
        let spec = h(1.0); // a = 2
        let mut last = 0.0;
        for &s in &[1.0, 1.5, 1.9, 1.99, 1.999] {
            let c = c1_constant(&spec, s).unwrap();
            assert!(c > last);
            last = c;
        }
        assert!(last > 1e2);
    }

    #[test]
    fn c2_analytic_and_quadrature() {
        // hankel α=0 (a=1), s=2: B(2,2) = 1/6 with unit angular mass
        let spec = h(0.0);
        assert!((c2_constant(&spec, 2.0).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        let s = 2.0;
        let c2 = c2_constant(&spec, s).unwrap();
        let r = 400.0f64;
        let quad = simpson(
            |x| measure_density(&spec, x) * (1.0 + x).powf(-2.0 * s),
            0.0,
            r,
            400_000,
        );
        // exact tail: ∫_R^∞ x (1+x)^{-4} dx = 1/(2(1+R)²) - 1/(3(1+R)³)
        let tail = 0.5 / (1.0 + r).powi(2) - 1.0 / (3.0 * (1.0 + r).powi(3));
        assert!(
            (c2 - quad - tail).abs() < 1e-8 * c2,
            "{c2} vs {}",
            quad + tail
        );
        assert!(c2_constant(&spec, 1.0).is_err());
        // divergence toward a from above
        assert!(c2_constant(&spec, 1.0 + 1e-6).unwrap() > 1e5);
    }

    #[test]
    fn c2_tilde_matches_quadrature() {
        let spec = h(0.5); // a = 1.5
        let a = spec.a();
        let r = 500.0f64;
        for &s in &[2.0, 2.5, 4.0] {
            let v = c2_tilde_constant(&spec, s).unwrap();
            let quad = simpson(
                |x| measure_density(&spec, x) / (1.0 + x.powf(2.0 * s)),
                0.0,
                r,
                500_000,
            );
            // two-term tail of A ∫_R^∞ r^{2a-1}/(1+r^{2s}) dr
            let am = spec.angular_mass();
            let tail = am * r.powf(2.0 * a - 2.0 * s) / (2.0 * s - 2.0 * a)
                - am * r.powf(2.0 * a - 4.0 * s) / (4.0 * s - 2.0 * a);
            let total = quad + tail;
            assert!((v - total).abs() < 1e-8 * v, "s={s}: {v} vs {total}");
        }
    }

    #[test]
    fn local_constant_regimes_and_branch_boundary() {
        let spec = h(0.0); // a = 1
        let small = local_constant(&spec, 0.5, 2.0).unwrap();
        assert_eq!(small.regime, LocalRegime::SmallS);
        assert!((small.value - (1.0 + 1.0f64)).abs() < 1e-12); // 1 + √C₁(1/2) = 2
                                                               // m = 0: the two measure branches give the same exponent
        let below = local_constant(&spec, 0.5, 0.5).unwrap();
        let above = local_constant(&spec, 0.5, 2.0).unwrap();
        assert_eq!(below.sigma_exponent, above.sigma_exponent);
        assert_eq!(below.value, above.value);

        let large = local_constant(&spec, 2.0, 1.0).unwrap();
        assert_eq!(large.regime, LocalRegime::LargeS);
        assert!(large.value > 0.0);
        assert_eq!(large.sigma_exponent, 0.5);

        assert!(local_constant(&spec, 1.0, 1.0).is_err());
        let interp = local_constant_interpolated(&spec, 1.0, 0.05, 1.0).unwrap();
        assert!(interp.value.is_finite() && interp.dispersion_exponent < 1.0);
    }

    #[test]
    fn dunkl_k0_equals_hankel_minus_half_route() {
        // Both describe the cosine transform with the same normalized measure,
        // so the generic constants agree exactly.
        let dk = d(0.0);
        let hk = h(-0.5);
        assert!((dk.a() - hk.a()).abs() < 1e-15);
        assert!((dk.angular_mass() - hk.angular_mass()).abs() < 1e-14);
        for &s in &[0.1, 0.3, 0.45] {
            let a = local_constant(&dk, s, 1.3).unwrap().value;
            let b = local_constant(&hk, s, 1.3).unwrap().value;
            assert!((a - b).abs() < 1e-12 * b, "s={s}");
        }
        for &s in &[0.8, 1.7, 3.0] {
            let a = local_constant(&dk, s, 1.3).unwrap().value;
            let b = local_constant(&hk, s, 1.3).unwrap().value;
            assert!((a - b).abs() < 1e-12 * b, "s={s}");
        }
    }

    #[test]
    fn printed_large_s_constant_matches_generic_route() {
        // The printed c'(s,k) lives on the unnormalized measure; folding the
        // Mehta constant into the density rescales it by √c_k.
        for &k in &[0.0, 0.5, 1.0] {
            let spec = d(k);
            let c_k = mehta_constant(k).unwrap();
            for &s in &[spec.a() + 0.3, spec.a() + 1.2, 2.0 * spec.a() + 1.0] {
                let printed = dunkl_local_constant_large_s(1, k, s, c_k).unwrap();
                let generic = local_constant(&spec, s, 1.0).unwrap().value;
                let rel = (printed - generic * c_k.sqrt()).abs() / printed;
                assert!(
                    rel < 1e-10,
                    "k={k}, s={s}: {printed} vs {}",
                    generic * c_k.sqrt()
                );
            }
        }
    }

    #[test]
    fn printed_small_s_spot_values_have_expected_structure() {
        // d = 1, γ = k = 1: G = 3, valid for s < 1.5
        let c_k = mehta_constant(1.0).unwrap();
        let v = dunkl_local_constant_small_s(1, 1.0, 0.5, c_k).unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert!(dunkl_local_constant_small_s(1, 1.0, 2.0, c_k).is_err());
        let w = dunkl_local_constant_large_s(1, 1.0, 2.5, c_k).unwrap();
        assert!(w.is_finite() && w > 0.0);
        assert!(dunkl_local_constant_large_s(1, 1.0, 0.5, c_k).is_err());
    }

    #[test]
    fn balance_factor_is_two_at_symmetric_point() {
        assert!((balance_factor(1.0, 1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn donoho_stark_bound_arithmetic() {
        // fully concentrated: the bound is c_τ^{-2}
        assert_eq!(donoho_stark_bound(1.0, 0.0, 0.0), (1.0, false));
        assert_eq!(donoho_stark_bound(2.0, 0.0, 0.0), (0.25, false));
        let (b, v) = donoho_stark_bound(1.0, 0.5, 0.0);
        assert!(!v && (b - 0.25).abs() < 1e-15);
        // ε₁² + ε₂² ≥ 1 degenerates
        assert_eq!(donoho_stark_bound(1.0, 0.6, 0.8), (0.0, true));
    }
}
