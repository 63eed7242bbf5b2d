//! Time/band concentration machinery: interval sets, the projections
//! `E_S` (multiplication by an indicator) and `F_Σ = T⁻¹ E_Σ T`, norms of the
//! composite `E_S F_Σ`, generalized prolate eigenpairs, and the Gram witness
//! for linear independence of dilates.
//!
//! On a truncated cone the discrete `F_Σ` is self-adjoint in the weighted
//! inner product by construction (the inverse matrix is the exact weighted
//! adjoint of the forward one), but it is a true orthogonal projection only up
//! to truncation: restricted to `[0, R]` it is the concentration operator of
//! the pair `([0, R], Σ)`, whose spectrum fills `[0, 1]`. Quantities tied to
//! well-localized functions (operator norms, prolates, certificates on the
//! shipped families) are unaffected at the tested tolerances; see
//! [`projection_defects`] for the honest diagnostic.

use crate::discretize::{assemble_forward, assemble_inverse, DiscreteOperator, Grid};
use crate::error::{Error, Result};
use crate::families::unit_uniform;
use crate::linalg;
use crate::par;
use crate::transforms::{kernel_unchecked, measure_density, TransformSpec};
use crate::C64;
use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde::{Deserialize, Serialize};

/// Finite union of disjoint closed intervals inside the (truncated) cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetSpec {
    pub intervals: Vec<[f64; 2]>,
}

impl SetSpec {
    /// Build from intervals; sorts and validates disjointness. Zero-length
    /// intervals are dropped (they carry no measure), inverted ones are
    /// rejected.
    pub fn new(mut intervals: Vec<[f64; 2]>) -> Result<SetSpec> {
        for iv in &intervals {
            if !(iv[0].is_finite() && iv[1].is_finite()) {
                return Err(Error::domain("SetSpec", "intervals must be finite"));
            }
            if iv[1] < iv[0] {
                return Err(Error::domain(
                    "SetSpec",
                    format!("inverted interval {iv:?}"),
                ));
            }
        }
        intervals.retain(|iv| iv[1] > iv[0]);
        intervals.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        for win in intervals.windows(2) {
            if win[1][0] <= win[0][1] {
                return Err(Error::domain("SetSpec", "intervals must be disjoint"));
            }
        }
        Ok(SetSpec { intervals })
    }

    pub fn single(lo: f64, hi: f64) -> Result<SetSpec> {
        SetSpec::new(vec![[lo, hi]])
    }

    pub fn empty() -> SetSpec {
        SetSpec { intervals: vec![] }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| x >= iv[0] && x <= iv[1])
    }

    /// Interval endpoints, for panel alignment.
    pub fn endpoints(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .flat_map(|iv| [iv[0], iv[1]])
            .collect()
    }

    fn check_cone(&self, spec: &TransformSpec) -> Result<()> {
        if !spec.two_sided() && self.intervals.iter().any(|iv| iv[0] < 0.0) {
            return Err(Error::domain("SetSpec", "interval leaves the cone [0, ∞)"));
        }
        Ok(())
    }
}

// Fresh clipped quadrature over a set: panels of width at most CLIP_H with
// CLIP_NPP Gauss nodes each, refined geometrically toward the origin when the
// density is rough there. Used by set measures and the kernel double integral.
// Deliberately different panelization from the default grids, so agreement
// between the kernel and matrix Hilbert-Schmidt routes is a genuine check.
const CLIP_H: f64 = 0.2;
const CLIP_NPP: usize = 20;

fn clipped_quadrature(spec: &TransformSpec, set: &SetSpec, rho: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let (t, wt) = gauss_nodes_cached();
    for iv in &set.intervals {
        let mut pieces: Vec<[f64; 2]> = Vec::new();
        if spec.two_sided() && iv[0] < 0.0 && iv[1] > 0.0 {
            pieces.push([iv[0], 0.0]);
            pieces.push([0.0, iv[1]]);
        } else {
            pieces.push(*iv);
        }
        for piece in pieces {
            for [lo, hi] in split_panels(spec, piece) {
                let mid = 0.5 * (lo + hi);
                let hw = 0.5 * (hi - lo);
                for q in 0..CLIP_NPP {
                    let x = mid + hw * t[q];
                    nodes.push(x);
                    weights.push(hw * wt[q] * measure_density(spec, x) * (1.0 + x.abs()).powf(rho));
                }
            }
        }
    }
    (nodes, weights)
}

fn split_panels(spec: &TransformSpec, iv: [f64; 2]) -> Vec<[f64; 2]> {
    let [lo, hi] = iv;
    let sub = ((hi - lo) / CLIP_H).ceil().max(1.0) as usize;
    let mut out = Vec::with_capacity(sub + 8);
    for s in 0..sub {
        let a = lo + (hi - lo) * s as f64 / sub as f64;
        let b = lo + (hi - lo) * (s + 1) as f64 / sub as f64;
        // refine the panel that touches the origin when the density has a
        // singular derivative there
        let rough = match spec.kind() {
            crate::transforms::TransformKind::Hankel(alpha) => alpha < 0.0,
            crate::transforms::TransformKind::Dunkl1d(k) => k > 0.0 && (2.0 * k).fract() != 0.0,
        };
        if rough && (a.abs() < 1e-14 || b.abs() < 1e-14) {
            let sign = if b.abs() < 1e-14 { -1.0 } else { 1.0 };
            let outer = if sign > 0.0 { b } else { a };
            let mut edges = vec![0.0];
            for g in (0..24).rev() {
                edges.push(outer.abs() / 1.5f64.powi(g));
            }
            for w in edges.windows(2) {
                if sign > 0.0 {
                    out.push([w[0], w[1]]);
                } else {
                    out.push([-w[1], -w[0]]);
                }
            }
        } else {
            out.push([a, b]);
        }
    }
    out
}

fn gauss_nodes_cached() -> (&'static [f64], &'static [f64]) {
    use std::sync::OnceLock;
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (n, w) = CACHE.get_or_init(|| crate::discretize::gauss_legendre(CLIP_NPP));
    (n, w)
}

/// Weighted measure `μ_ρ(set) = ∫_set (1+|x|)^ρ dμ` by clipped panel
/// quadrature. `ρ = 0` gives the plain measure.
pub fn weighted_measure(set: &SetSpec, spec: &TransformSpec, rho: f64) -> Result<f64> {
    if rho < 0.0 {
        return Err(Error::domain("weighted_measure", "rho must be >= 0"));
    }
    set.check_cone(spec)?;
    let (_, w) = clipped_quadrature(spec, set, rho);
    Ok(w.iter().sum())
}

/// Node-membership mask of a set on a grid.
pub fn node_mask(set: &SetSpec, grid: &Grid) -> Vec<bool> {
    grid.nodes().iter().map(|&x| set.contains(x)).collect()
}

/// Time projection `E_S`: the 0/1 diagonal of node membership.
pub fn project_time(set: &SetSpec, grid: &Grid) -> DiscreteOperator {
    let mask = node_mask(set, grid);
    let n = grid.len();
    let mut m = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for (i, &inside) in mask.iter().enumerate() {
        if inside {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
    }
    DiscreteOperator {
        matrix: m,
        in_grid: grid.clone(),
        out_grid: grid.clone(),
    }
}

fn mask_rows(m: &DMatrix<C64>, mask: &[bool]) -> DMatrix<C64> {
    let mut out = m.clone();
    for j in 0..out.ncols() {
        let mut col = out.column_mut(j);
        for i in 0..col.len() {
            if !mask[i] {
                col[i] = C64::new(0.0, 0.0);
            }
        }
    }
    out
}

/// Band projection `F_Σ = T⁻¹ E_Σ T` as a dense matrix.
pub fn project_band(
    set: &SetSpec,
    forward: &DiscreteOperator,
    inverse: &DiscreteOperator,
) -> Result<DiscreteOperator> {
    if forward.in_grid.spec() != inverse.out_grid.spec()
        || forward.out_grid.len() != inverse.in_grid.len()
        || forward.in_grid.len() != inverse.out_grid.len()
    {
        return Err(Error::Mismatch(
            "forward/inverse operators do not share grids".into(),
        ));
    }
    let mask = node_mask(set, &forward.out_grid);
    let masked = mask_rows(&forward.matrix, &mask);
    let matrix = linalg::matmul(&inverse.matrix, &masked);
    Ok(DiscreteOperator {
        matrix,
        in_grid: forward.in_grid.clone(),
        out_grid: forward.in_grid.clone(),
    })
}

/// A time set, a band set, and every operator derived from them on a shared
/// pair of grids.
#[derive(Debug, Clone)]
pub struct ConcentrationPair {
    pub spec: TransformSpec,
    pub s: SetSpec,
    pub sigma: SetSpec,
    pub grid: Grid,
    pub grid_hat: Grid,
    pub s_mask: Vec<bool>,
    pub sigma_mask: Vec<bool>,
    pub forward: DiscreteOperator,
    pub inverse: DiscreteOperator,
    /// `F_Σ = T⁻¹ E_Σ T`.
    pub f_sigma: DMatrix<C64>,
    /// `F_Σ E_S F_Σ`, the self-adjoint PSD operator whose top eigenvalue is
    /// `‖E_S F_Σ‖²`.
    pub composite: DMatrix<C64>,
}

impl ConcentrationPair {
    /// Build every operator for a `(S, Σ)` pair. Grids should be aligned to
    /// the set endpoints (see [`Grid::build_aligned`]).
    pub fn build(
        spec: &TransformSpec,
        grid: &Grid,
        grid_hat: &Grid,
        s: SetSpec,
        sigma: SetSpec,
    ) -> Result<ConcentrationPair> {
        s.check_cone(spec)?;
        sigma.check_cone(spec)?;
        let forward = assemble_forward(spec, grid, grid_hat)?;
        let inverse = assemble_inverse(spec, grid_hat, grid)?;
        let s_mask = node_mask(&s, grid);
        let sigma_mask = node_mask(&sigma, grid_hat);
        let masked_fwd = mask_rows(&forward.matrix, &sigma_mask);
        let f_sigma = linalg::matmul(&inverse.matrix, &masked_fwd);
        let ef = mask_rows(&f_sigma, &s_mask);
        let composite = linalg::matmul(&f_sigma, &ef);
        Ok(ConcentrationPair {
            spec: *spec,
            s,
            sigma,
            grid: grid.clone(),
            grid_hat: grid_hat.clone(),
            s_mask,
            sigma_mask,
            forward,
            inverse,
            f_sigma,
            composite,
        })
    }

    /// Convenience constructor: aligned grids from the set endpoints.
    pub fn build_default(
        spec: &TransformSpec,
        radius: f64,
        panels: usize,
        nodes_per_panel: usize,
        s: SetSpec,
        sigma: SetSpec,
    ) -> Result<ConcentrationPair> {
        let mut criticals = s.endpoints();
        criticals.extend(sigma.endpoints());
        let grid = Grid::build_aligned(spec, radius, panels, nodes_per_panel, &criticals)?;
        let grid_hat = grid.clone();
        ConcentrationPair::build(spec, &grid, &grid_hat, s, sigma)
    }

    /// `‖E_{S^c} f‖` in the weighted norm.
    pub fn time_complement_norm(&self, f: &DVector<C64>) -> f64 {
        let mut acc = 0.0;
        for i in 0..f.len() {
            if !self.s_mask[i] {
                acc += self.grid.weights()[i] * f[i].norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖F_{Σ^c} f‖ = ‖(I - F_Σ) f‖` in the weighted norm.
    pub fn band_complement_norm(&self, f: &DVector<C64>) -> f64 {
        let ff = &self.f_sigma * f;
        let diff = f - ff;
        self.grid.norm(&diff)
    }

    /// Quadratic-form complement mass `⟨(I - F_Σ) f, f⟩^{1/2}`. Unlike
    /// [`Self::band_complement_norm`] this matches the transform-side mass
    /// `‖Tf‖_{L²(Σ^c)}` to round-off on a truncated cone (the norm version
    /// additionally sees the band-limited tail leaking past the truncation
    /// radius).
    pub fn band_complement_mass(&self, f: &DVector<C64>) -> f64 {
        let ff = &self.f_sigma * f;
        let nf2 = self.grid.norm(f).powi(2);
        let q = linalg::dot_w(self.grid.weights(), &ff, f).re;
        (nf2 - q).max(0.0).sqrt()
    }

    /// `‖T f‖_{L²(Σ^c, μ̂)}`: the transform-side complement mass.
    pub fn transform_complement_norm(&self, f: &DVector<C64>) -> f64 {
        let tf = self.forward.apply(f);
        let mut acc = 0.0;
        for j in 0..tf.len() {
            if !self.sigma_mask[j] {
                acc += self.grid_hat.weights()[j] * tf[j].norm_sqr();
            }
        }
        acc.sqrt()
    }
}

/// Hilbert-Schmidt norm of `E_S F_Σ` by the kernel double integral
/// `‖E_S F_Σ‖²_HS = ∫_S ∫_Σ |K(y,η)|² dμ̂(η) dμ(y)`, with the bound
/// `c_τ √(μ_{2m}(S) μ̂_{2m̂}(Σ))` it never exceeds.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HsKernelNorm {
    pub value: f64,
    pub bound: f64,
}

pub fn hs_norm_kernel(pair: &ConcentrationPair) -> Result<HsKernelNorm> {
    let spec = &pair.spec;
    let bound = pair.spec.c_tau()
        * (weighted_measure(&pair.s, spec, 2.0 * spec.m())?
            * weighted_measure(&pair.sigma, spec, 2.0 * spec.m_hat())?)
        .sqrt();
    if pair.s.is_empty() || pair.sigma.is_empty() {
        return Ok(HsKernelNorm { value: 0.0, bound });
    }
    let (xs, wxs) = clipped_quadrature(spec, &pair.s, 0.0);
    let (es, wes) = clipped_quadrature(spec, &pair.sigma, 0.0);
    let partials = par::map_indexed(xs.len(), |i| {
        let x = xs[i];
        let mut inner = 0.0;
        for (e, we) in es.iter().zip(&wes) {
            inner += we * kernel_unchecked(spec, x, *e).norm_sqr();
        }
        wxs[i] * inner
    });
    let value: f64 = partials.iter().sum::<f64>().sqrt();
    Ok(HsKernelNorm { value, bound })
}

/// Discrete-route Hilbert-Schmidt norm: the weighted Frobenius norm of the
/// masked forward matrix `E_Σ T E_S`, which equals that of `E_S F_Σ` because
/// `T⁻¹` is an isometry. (The Frobenius norm of the assembled round-trip
/// matrix itself undershoots by the band-limited mass that leaks past the
/// truncation radius; see `hs_norm_roundtrip`.)
pub fn hs_norm_matrix(pair: &ConcentrationPair) -> f64 {
    let a = &pair.forward.matrix;
    let w_in = pair.grid.weights();
    let w_out = pair.grid_hat.weights();
    let mut acc = 0.0;
    for (i, &in_s) in pair.s_mask.iter().enumerate() {
        if !in_s {
            continue;
        }
        let col = a.column(i);
        let mut cacc = 0.0;
        for (j, &in_sigma) in pair.sigma_mask.iter().enumerate() {
            if in_sigma {
                cacc += w_out[j] * col[j].norm_sqr();
            }
        }
        acc += cacc / w_in[i];
    }
    acc.sqrt()
}

/// Frobenius norm of the literally assembled `E_S F_Σ` matrix. Reported as a
/// diagnostic: it is a restriction of the true Hilbert-Schmidt integral to the
/// truncated cone, so it sits below [`hs_norm_matrix`] by an `O(1/R)` deficit.
pub fn hs_norm_roundtrip(pair: &ConcentrationPair) -> f64 {
    let esf = mask_rows(&pair.f_sigma, &pair.s_mask);
    linalg::frobenius_w(pair.grid.weights(), pair.grid.weights(), &esf)
}

/// Converged dominant-eigenvalue data.
#[derive(Debug, Clone, Serialize)]
pub struct OpNorm {
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// `‖E_S F_Σ‖` via power iteration on the self-adjoint PSD matrix
/// `F_Σ E_S F_Σ` in the weighted inner product.
pub fn op_norm(pair: &ConcentrationPair, tol: f64, max_iter: usize) -> Result<OpNorm> {
    if tol <= 0.0 {
        return Err(Error::domain("op_norm", "tol must be positive"));
    }
    if pair.s.is_empty() || pair.sigma.is_empty() {
        return Ok(OpNorm {
            value: 0.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    let (lambda, _, iterations, residual) = power_iteration(
        &pair.composite,
        pair.grid.weights(),
        tol,
        max_iter,
        0x5EED_0001,
        &[],
    )?;
    Ok(OpNorm {
        value: lambda.max(0.0).sqrt(),
        iterations,
        residual,
    })
}

/// Power iteration with deflation against already-found eigenpairs.
/// Returns (eigenvalue, w-normalized eigenvector, iterations, residual).
fn power_iteration(
    m: &DMatrix<C64>,
    w: &[f64],
    tol: f64,
    max_iter: usize,
    seed: u64,
    deflate: &[(f64, DVector<C64>)],
) -> Result<(f64, DVector<C64>, usize, f64)> {
    let n = m.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::from_fn(n, |_, _| C64::new(2.0 * unit_uniform(&mut rng) - 1.0, 0.0));
    orthogonalize(&mut v, w, deflate);
    let nv = linalg::norm_w(w, &v);
    if nv == 0.0 {
        return Err(Error::domain("power_iteration", "degenerate start vector"));
    }
    v /= C64::new(nv, 0.0);

    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let mut y = m * &v;
        deflate_apply(&mut y, w, &v, deflate);
        lambda = linalg::dot_w(w, &y, &v).re;
        let r = &y - &v * C64::new(lambda, 0.0);
        residual = linalg::norm_w(w, &r);
        if residual < tol {
            return Ok((lambda, v, it, residual));
        }
        let ny = linalg::norm_w(w, &y);
        if ny < 1e-300 {
            // the deflated operator annihilates v: eigenvalue 0
            return Ok((0.0, v, it, 0.0));
        }
        v = y / C64::new(ny, 0.0);
        orthogonalize(&mut v, w, deflate);
        let nv = linalg::norm_w(w, &v);
        if nv < 1e-300 {
            return Err(Error::domain(
                "power_iteration",
                "iterate collapsed into the deflated subspace",
            ));
        }
        v /= C64::new(nv, 0.0);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        last_estimate: lambda,
        residual,
    })
}

fn orthogonalize(v: &mut DVector<C64>, w: &[f64], basis: &[(f64, DVector<C64>)]) {
    for _ in 0..2 {
        for (_, b) in basis {
            let c = linalg::dot_w(w, v, b);
            *v -= b * c;
        }
    }
}

fn deflate_apply(y: &mut DVector<C64>, w: &[f64], v: &DVector<C64>, basis: &[(f64, DVector<C64>)]) {
    for (lam, b) in basis {
        let c = linalg::dot_w(w, v, b) * C64::new(*lam, 0.0);
        *y -= b * c;
    }
}

/// One generalized prolate eigenpair of `F_Σ E_S F_Σ`.
#[derive(Debug, Clone)]
pub struct Prolate {
    pub eigenvalue: f64,
    pub vector: DVector<C64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Top `count` eigenpairs, orthonormal in the weighted inner product,
/// eigenvalues non-increasing.
pub fn prolate_pairs(
    pair: &ConcentrationPair,
    count: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Prolate>> {
    if count > pair.grid.len() {
        return Err(Error::domain("prolate_pairs", "count exceeds grid size"));
    }
    let w = pair.grid.weights();
    let mut found: Vec<(f64, DVector<C64>)> = Vec::new();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let (lambda, v, iterations, residual) = power_iteration(
            &pair.composite,
            w,
            tol,
            max_iter,
            0x5EED_1000 + k as u64,
            &found,
        )?;
        out.push(Prolate {
            eigenvalue: lambda,
            vector: v.clone(),
            iterations,
            residual,
        });
        found.push((lambda, v));
    }
    Ok(out)
}

/// Annihilation constant estimate `(1 - ‖E_S F_Σ‖)^{-2}`, or a marker when the
/// discrete norm reaches one within tolerance and the estimate is meaningless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Annihilation {
    Constant(f64),
    NotApplicable,
}

impl Annihilation {
    pub fn value(&self) -> Option<f64> {
        match self {
            Annihilation::Constant(c) => Some(*c),
            Annihilation::NotApplicable => None,
        }
    }
}

/// Threshold below one past which no constant is reported.
pub const ANNIHILATION_NORM_CUTOFF: f64 = 1.0 - 1e-6;

pub fn annihilation_constant(op_norm_value: f64) -> Annihilation {
    if op_norm_value < ANNIHILATION_NORM_CUTOFF {
        Annihilation::Constant((1.0 - op_norm_value).powi(-2))
    } else {
        Annihilation::NotApplicable
    }
}

/// Honest projection diagnostics for `F_Σ` in the weighted operator norm.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProjectionDefects {
    /// `‖F - F*‖`; zero up to round-off by construction.
    pub self_adjoint: f64,
    /// `‖F² - F‖`; on a truncated cone this converges to
    /// `max λ(1-λ)` over the spectrum of the truncation pair, not to zero.
    pub idempotency: f64,
}

pub fn projection_defects(pair: &ConcentrationPair) -> ProjectionDefects {
    let w = pair.grid.weights();
    let f = &pair.f_sigma;
    let fa = linalg::adjoint_w(w, w, f);
    let sa = linalg::op_norm_w(w, &(f - &fa), 200);
    let f2 = linalg::matmul(f, f);
    let idem = linalg::op_norm_w(w, &(&f2 - f), 200);
    ProjectionDefects {
        self_adjoint: sa,
        idempotency: idem,
    }
}

/// Smallest eigenvalue of the Gram matrix of dilates `D_λ f` in `L²(μ)`;
/// strictly positive is the numeric witness of linear independence.
///
/// `f` must be supported in `support` (a subinterval of the cone) and each
/// dilated support `λ · support` must stay inside the truncation radius.
pub fn dilate_gram_independence(
    spec: &TransformSpec,
    f: &(dyn Fn(f64) -> f64 + Sync),
    support: (f64, f64),
    lambdas: &[f64],
    radius: f64,
) -> Result<f64> {
    if lambdas.is_empty() {
        return Err(Error::domain("dilate_gram", "need at least one dilation"));
    }
    for (i, &li) in lambdas.iter().enumerate() {
        if li <= 0.0 {
            return Err(Error::domain("dilate_gram", "dilations must be positive"));
        }
        for &lj in &lambdas[i + 1..] {
            if (li - lj).abs() < 1e-12 {
                return Err(Error::domain("dilate_gram", "dilations must be distinct"));
            }
        }
    }
    if !spec.two_sided() && support.0 < 0.0 {
        return Err(Error::domain("dilate_gram", "support leaves the cone"));
    }
    let max_reach = lambdas
        .iter()
        .map(|&l| (l * support.0.abs()).max(l * support.1.abs()))
        .fold(0.0, f64::max);
    if max_reach > radius {
        return Err(Error::domain(
            "dilate_gram",
            format!("dilated support reaches {max_reach}, beyond radius {radius}"),
        ));
    }

    let a = spec.a();
    let n = lambdas.len();
    let mut gram = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let (li, lj) = (lambdas[i], lambdas[j]);
            let lo = (li * support.0).max(lj * support.0);
            let hi = (li * support.1).min(lj * support.1);
            let mut val = 0.0;
            if hi > lo {
                let overlap = SetSpec::single(lo, hi)?;
                let (xs, ws) = clipped_quadrature(spec, &overlap, 0.0);
                let scale = (li * lj).powf(-a);
                for (x, w) in xs.iter().zip(&ws) {
                    val += w * f(x / li) * f(x / lj);
                }
                val *= scale;
            }
            gram[(i, j)] = val;
            gram[(j, i)] = val;
        }
    }
    if gram.diagonal().iter().any(|&d| d <= 0.0) {
        return Err(Error::domain(
            "dilate_gram",
            "a dilate has zero norm; f must be nonzero on its support",
        ));
    }
    let eig = nalgebra::SymmetricEigen::new(gram);
    Ok(eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min))
}
