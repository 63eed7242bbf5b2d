//! Stable missing-data recovery: reconstruct `f` from its values outside `S`
//! and its transform's values outside `Σ`, valid whenever `‖E_S F_Σ‖ < 1`.
//!
//! Writing `u = E_S f`, the observed data determine the right-hand side of the
//! restricted fixed-point equation `(I - E_S F_Σ E_S) u = E_S F_Σ g₁ + E_S T⁻¹ g₂`,
//! which Neumann iteration solves with geometric ratio `‖E_S F_Σ‖²`. A dense
//! direct solve of the same system is kept as a cross-check oracle in the
//! tests.

use crate::concentration::{annihilation_constant, op_norm, Annihilation, ConcentrationPair};
use crate::error::{Error, Result};
use crate::families::standard_normal;
use crate::linalg;
use crate::C64;
use nalgebra::DVector;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde::Serialize;

/// Masked observations of an unknown function: `g₁ = E_{S^c} f` on the time
/// grid and `g₂ = E_{Σ^c} T f` on the transform grid.
#[derive(Debug, Clone)]
pub struct Observation<'a> {
    pub g1: DVector<C64>,
    pub g2: DVector<C64>,
    pub pair: &'a ConcentrationPair,
}

/// Mask `f` and its transform by the complementary indicators.
pub fn observe<'a>(f: &DVector<C64>, pair: &'a ConcentrationPair) -> Observation<'a> {
    let mut g1 = f.clone();
    for (i, &inside) in pair.s_mask.iter().enumerate() {
        if inside {
            g1[i] = C64::new(0.0, 0.0);
        }
    }
    let mut g2 = pair.forward.apply(f);
    for (j, &inside) in pair.sigma_mask.iter().enumerate() {
        if inside {
            g2[j] = C64::new(0.0, 0.0);
        }
    }
    Observation { g1, g2, pair }
}

/// Result of a reconstruction run.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub f_hat: DVector<C64>,
    pub iterations: usize,
    /// Final update norm relative to `‖b‖`.
    pub residual: f64,
    /// Norms of successive Neumann updates, for convergence-rate inspection.
    pub update_norms: Vec<f64>,
    /// The `‖E_S F_Σ‖` value used for the admission check.
    pub op_norm: f64,
}

impl Reconstruction {
    /// Largest observed per-step contraction ratio (skipping the first step).
    pub fn observed_rate(&self) -> Option<f64> {
        if self.update_norms.len() < 2 {
            return None;
        }
        let mut worst: f64 = 0.0;
        for w in self.update_norms.windows(2) {
            if w[0] > 1e-290 {
                worst = worst.max(w[1] / w[0]);
            }
        }
        Some(worst)
    }
}

/// Refusal threshold: no recovery is attempted when `‖E_S F_Σ‖ ≥ 1 - 1e-6`.
pub const RECOVERY_NORM_CUTOFF: f64 = 1.0 - 1e-6;

/// Neumann-iteration reconstruction. Computes `‖E_S F_Σ‖` first and refuses
/// when it is not boundedly below one.
pub fn reconstruct(obs: &Observation, tol: f64, max_iter: usize) -> Result<Reconstruction> {
    let value = admission_op_norm(obs.pair)?;
    reconstruct_with_norm(obs, value, tol, max_iter)
}

// Power iteration can stall when the top eigenvalues of F E F cluster at one,
// but the Rayleigh quotient is a lower bound for the largest eigenvalue on a
// self-adjoint PSD matrix, so a stalled estimate past the cutoff already
// proves the pair non-recoverable.
fn admission_op_norm(pair: &ConcentrationPair) -> Result<f64> {
    match op_norm(pair, 1e-11, 20_000) {
        Ok(n) => Ok(n.value),
        Err(Error::NoConvergence { last_estimate, .. })
            if last_estimate.max(0.0).sqrt() >= RECOVERY_NORM_CUTOFF =>
        {
            Err(Error::NotRecoverable {
                op_norm: last_estimate.max(0.0).sqrt(),
            })
        }
        Err(e) => Err(e),
    }
}

/// Same as [`reconstruct`] with a precomputed `‖E_S F_Σ‖`.
pub fn reconstruct_with_norm(
    obs: &Observation,
    op_norm_value: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Reconstruction> {
    if tol <= 0.0 {
        return Err(Error::domain("reconstruct", "tol must be positive"));
    }
    let pair = obs.pair;
    if pair.s.is_empty() {
        return Ok(Reconstruction {
            f_hat: obs.g1.clone(),
            iterations: 0,
            residual: 0.0,
            update_norms: vec![],
            op_norm: op_norm_value,
        });
    }
    if op_norm_value >= RECOVERY_NORM_CUTOFF {
        return Err(Error::NotRecoverable {
            op_norm: op_norm_value,
        });
    }
    let w = pair.grid.weights();
    let mask = &pair.s_mask;

    // b = E_S F_Σ g₁ + E_S T⁻¹ g₂
    let mut b = &pair.f_sigma * &obs.g1 + pair.inverse.apply(&obs.g2);
    apply_mask(&mut b, mask);
    let nb = linalg::norm_w(w, &b);

    let mut u = b.clone();
    let mut update_norms = Vec::new();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    if nb == 0.0 {
        residual = 0.0;
    } else {
        for it in 1..=max_iter {
            // u_{n+1} = b + E_S F_Σ E_S u_n   (u_n is already supported on S)
            let mut t = &pair.f_sigma * &u;
            apply_mask(&mut t, mask);
            let next = &b + &t;
            let diff = &next - &u;
            let d = linalg::norm_w(w, &diff);
            update_norms.push(d);
            u = next;
            iterations = it;
            residual = d / nb;
            if residual < tol {
                break;
            }
        }
        if residual >= tol {
            return Err(Error::NoConvergence {
                iterations,
                last_estimate: residual,
                residual,
            });
        }
    }
    let f_hat = &obs.g1 + &u;
    Ok(Reconstruction {
        f_hat,
        iterations,
        residual,
        update_norms,
        op_norm: op_norm_value,
    })
}

fn apply_mask(v: &mut DVector<C64>, mask: &[bool]) {
    for (i, &inside) in mask.iter().enumerate() {
        if !inside {
            v[i] = C64::new(0.0, 0.0);
        }
    }
}

/// Outcome of a noisy-recovery stability trial.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub op_norm: f64,
    /// `C = (1 - ‖E_S F_Σ‖)^{-2}`.
    pub annihilation_constant: f64,
    pub noise_level: f64,
    pub seed: u64,
    /// `‖f_hat - f_true‖`.
    pub error_norm: f64,
    /// `‖E_{S^c}(f_hat - f_true)‖` and `‖F_{Σ^c}(f_hat - f_true)‖`.
    pub eps1: f64,
    pub eps2: f64,
    /// `C (eps1² + eps2²)`, the certified upper bound for `error_norm²`.
    pub bound: f64,
    /// `error_norm² / bound`, the consumed fraction of the certificate.
    pub slack_factor: f64,
    pub pass: bool,
    pub iterations: usize,
}

/// Perturb the observations with fixed-seed Gaussian noise of prescribed
/// weighted-L² size on each channel, reconstruct, and check the annihilation
/// inequality on the error function.
pub fn stability_certificate(
    obs: &Observation,
    f_true: &DVector<C64>,
    noise_level: f64,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<StabilityReport> {
    let pair = obs.pair;
    let norm_value = admission_op_norm(pair)?;
    let c = match annihilation_constant(norm_value) {
        Annihilation::Constant(c) => c,
        Annihilation::NotApplicable => {
            return Err(Error::NotRecoverable {
                op_norm: norm_value,
            })
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy = Observation {
        g1: add_masked_noise(
            &obs.g1,
            &pair.s_mask,
            pair.grid.weights(),
            noise_level,
            &mut rng,
        ),
        g2: add_masked_noise(
            &obs.g2,
            &pair.sigma_mask,
            pair.grid_hat.weights(),
            noise_level,
            &mut rng,
        ),
        pair,
    };
    let rec = reconstruct_with_norm(&noisy, norm_value, tol, max_iter)?;

    let err = &rec.f_hat - f_true;
    let error_norm = pair.grid.norm(&err);
    let eps1 = pair.time_complement_norm(&err);
    let eps2 = pair.band_complement_norm(&err);
    let bound = c * (eps1 * eps1 + eps2 * eps2);
    let err_sq = error_norm * error_norm;
    let pass = err_sq <= bound * (1.0 + 1e-6) + 1e-30;
    Ok(StabilityReport {
        op_norm: norm_value,
        annihilation_constant: c,
        noise_level,
        seed,
        error_norm,
        eps1,
        eps2,
        bound,
        slack_factor: if bound > 0.0 { err_sq / bound } else { 0.0 },
        pass,
        iterations: rec.iterations,
    })
}

/// Add noise supported on the complement mask (where the data live), scaled to
/// the requested weighted-L² size.
fn add_masked_noise(
    v: &DVector<C64>,
    inside_mask: &[bool],
    weights: &[f64],
    level: f64,
    rng: &mut ChaCha8Rng,
) -> DVector<C64> {
    if level == 0.0 {
        return v.clone();
    }
    let mut noise = DVector::from_element(v.len(), C64::new(0.0, 0.0));
    for i in 0..v.len() {
        if !inside_mask[i] {
            noise[i] = C64::new(standard_normal(rng), 0.0);
        }
    }
    let n = linalg::norm_w(weights, &noise);
    if n == 0.0 {
        return v.clone();
    }
    v + noise * C64::new(level / n, 0.0)
}

/// Export a reconstruction as `node,truth,observed,recovered` CSV.
pub fn reconstruction_csv(
    pair: &ConcentrationPair,
    f_true: &DVector<C64>,
    obs: &Observation,
    rec: &Reconstruction,
) -> String {
    let mut out = String::from("node,truth,observed,recovered\n");
    for (i, &x) in pair.grid.nodes().iter().enumerate() {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            x, f_true[i].re, obs.g1[i].re, rec.f_hat[i].re
        ));
    }
    out
}
