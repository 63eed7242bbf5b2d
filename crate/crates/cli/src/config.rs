//! Declarative experiment configuration. Everything an experiment does lives
//! in the config file; the command line only picks the output directory, the
//! thread count and an optional seed override.

use serde::{Deserialize, Serialize};
use uncertop::concentration::SetSpec;
use uncertop::transforms::TransformSpec;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub transform: TransformSpec,
    pub grid: GridConfig,
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub radius: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
}

fn default_seed() -> u64 {
    42
}

fn default_tol() -> f64 {
    1e-11
}

fn default_max_iter() -> usize {
    50_000
}

fn default_n_max() -> u32 {
    6
}

fn default_draws() -> usize {
    50
}

fn default_count() -> usize {
    4
}

fn default_rel_error() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    /// Unitarity diagnostic on the eigenfunction family.
    Plancherel {
        #[serde(default = "default_n_max")]
        n_max: u32,
        #[serde(default = "default_rel_error")]
        max_defect: f64,
    },
    /// Constant formulas swept over s (absolute values).
    Constants {
        s_values: Vec<f64>,
        #[serde(default)]
        dunkl_spots: Vec<DunklSpot>,
    },
    /// Operator norms of one (S, Σ) pair, both Hilbert-Schmidt routes, the
    /// norm chain and the annihilation constant.
    Concentration {
        s: SetSpec,
        sigma: SetSpec,
        #[serde(default = "default_tol")]
        tol: f64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
        #[serde(default)]
        export_operator: bool,
    },
    /// Local uncertainty certificates at s = fraction · a.
    Local {
        s_fractions: Vec<f64>,
        sigma: SetSpec,
        #[serde(default = "default_seed")]
        seed: u64,
    },
    /// Global Heisenberg-type certificate.
    Global {
        s: f64,
        beta: f64,
        #[serde(default = "default_seed")]
        seed: u64,
        #[serde(default = "default_draws")]
        draws: usize,
    },
    /// Donoho-Stark support-product certificate for the top prolate.
    DonohoStark {
        s: SetSpec,
        sigma: SetSpec,
        #[serde(default = "default_tol")]
        tol: f64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
    },
    /// Top concentration eigenpairs.
    Prolate {
        s: SetSpec,
        sigma: SetSpec,
        #[serde(default = "default_count")]
        count: usize,
        #[serde(default = "default_tol")]
        tol: f64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
    },
    /// Missing-data recovery of a Gaussian truth, optionally noisy.
    Recover {
        s: SetSpec,
        sigma: SetSpec,
        #[serde(default)]
        noise: f64,
        #[serde(default = "default_seed")]
        seed: u64,
        #[serde(default = "default_tol")]
        tol: f64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
        #[serde(default = "default_rel_error")]
        max_rel_error: f64,
    },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Plancherel { .. } => "plancherel",
            Task::Constants { .. } => "constants",
            Task::Concentration { .. } => "concentration",
            Task::Local { .. } => "local",
            Task::Global { .. } => "global",
            Task::DonohoStark { .. } => "donoho_stark",
            Task::Prolate { .. } => "prolate",
            Task::Recover { .. } => "recover",
        }
    }

    /// Replace every task seed (the --seed override).
    pub fn override_seed(&mut self, s: u64) {
        match self {
            Task::Local { seed, .. } | Task::Global { seed, .. } | Task::Recover { seed, .. } => {
                *seed = s
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DunklSpot {
    pub d: u32,
    pub gamma: f64,
    pub s: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), String> {
        let g = &self.grid;
        if !(g.radius.is_finite() && g.radius > 0.0) {
            return Err(format!("grid.radius must be positive, got {}", g.radius));
        }
        if g.panels == 0 {
            return Err("grid.panels must be >= 1".into());
        }
        if !(2..=64).contains(&g.nodes_per_panel) {
            return Err(format!(
                "grid.nodes_per_panel must be in [2, 64], got {}",
                g.nodes_per_panel
            ));
        }
        for (i, t) in self.tasks.iter().enumerate() {
            let sets: Vec<&SetSpec> = match t {
                Task::Concentration { s, sigma, .. }
                | Task::DonohoStark { s, sigma, .. }
                | Task::Prolate { s, sigma, .. }
                | Task::Recover { s, sigma, .. } => vec![s, sigma],
                Task::Local { sigma, .. } => vec![sigma],
                _ => vec![],
            };
            for set in sets {
                for iv in &set.intervals {
                    let lo_ok = if self.transform.two_sided() {
                        iv[0] >= -g.radius
                    } else {
                        iv[0] >= 0.0
                    };
                    if !lo_ok || iv[1] > g.radius {
                        return Err(format!(
                            "task {i} ({}): interval {iv:?} outside the truncated cone",
                            t.name()
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}
