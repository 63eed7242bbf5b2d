//! Shipped deterministic test families: Laguerre-Gaussians (transform
//! eigenfunctions for the Hankel family), dilated Gaussians, and fixed-seed
//! random combinations. These drive the unitarity diagnostics and every
//! inequality certificate.

use crate::specfun::laguerre;
use crate::transforms::{TransformKind, TransformSpec};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A boxed real-valued test function.
pub type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Standard Gaussian `e^{-x²/2}`, the transform fixed point for every family.
pub fn gaussian() -> RealFn {
    Box::new(|x| (-0.5 * x * x).exp())
}

/// `L_n^α(x²) e^{-x²/2}`, an eigenfunction of the Hankel transform of index α
/// with eigenvalue `(-1)ⁿ`.
pub fn laguerre_gaussian(alpha: f64, n: u32) -> RealFn {
    Box::new(move |x| laguerre(n, alpha, x * x).expect("alpha > -1") * (-0.5 * x * x).exp())
}

/// The eigenfunction family up to degree `n_max` for the given transform. For
/// the Dunkl family the Laguerre index of the radial part is `k - 1/2`.
pub fn laguerre_gaussian_family(spec: &TransformSpec, n_max: u32) -> Vec<RealFn> {
    let alpha = match spec.kind() {
        TransformKind::Hankel(a) => a,
        TransformKind::Dunkl1d(k) => k - 0.5,
    };
    (0..=n_max).map(|n| laguerre_gaussian(alpha, n)).collect()
}

/// Dilates `λ^{-a} e^{-x²/(2λ²)}` of the Gaussian, `count` log-spaced values
/// of λ in `[lo, hi]`.
pub fn dilated_gaussians(spec: &TransformSpec, lo: f64, hi: f64, count: usize) -> Vec<RealFn> {
    let a = spec.a();
    (0..count)
        .map(|i| {
            let t = if count == 1 {
                0.0
            } else {
                i as f64 / (count - 1) as f64
            };
            let lambda = lo * (hi / lo).powf(t);
            let scale = lambda.powf(-a);
            Box::new(move |x: f64| scale * (-0.5 * (x / lambda).powi(2)).exp()) as RealFn
        })
        .collect()
}

/// Default dilation sweep: 17 log-spaced dilations in `[1/4, 4]`.
pub fn default_dilation_family(spec: &TransformSpec) -> Vec<RealFn> {
    dilated_gaussians(spec, 0.25, 4.0, 17)
}

/// Uniform sample in [0, 1), built directly from the raw ChaCha stream so the
/// values never depend on a distribution implementation.
pub(crate) fn unit_uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal via Box-Muller on the raw stream.
pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u = unit_uniform(rng).max(1e-300);
    let v = unit_uniform(rng);
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

/// Fixed-seed random 4-term combinations of Laguerre-Gaussians with uniform
/// coefficients in [-1, 1]. Deterministic for a given seed.
pub fn random_combinations(
    spec: &TransformSpec,
    seed: u64,
    draws: usize,
    n_max: u32,
) -> Vec<RealFn> {
    let alpha = match spec.kind() {
        TransformKind::Hankel(a) => a,
        TransformKind::Dunkl1d(k) => k - 0.5,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..draws)
        .map(|_| {
            let mut terms = Vec::with_capacity(4);
            for _ in 0..4 {
                let n = (rng.next_u64() % (n_max as u64 + 1)) as u32;
                let c = 2.0 * unit_uniform(&mut rng) - 1.0;
                terms.push((n, c));
            }
            Box::new(move |x: f64| {
                let g = (-0.5 * x * x).exp();
                terms
                    .iter()
                    .map(|&(n, c)| c * laguerre(n, alpha, x * x).expect("alpha > -1"))
                    .sum::<f64>()
                    * g
            }) as RealFn
        })
        .collect()
}
