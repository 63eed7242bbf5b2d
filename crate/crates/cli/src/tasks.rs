//! Task execution: each task builds what it needs from the shared config,
//! returns its artifacts as bytes, and a pass flag for the exit-code contract.

use crate::config::{ExperimentConfig, Task};
use crate::RunError;
use serde::Serialize;
use serde_json::json;
use uncertop::concentration::{
    annihilation_constant, hs_norm_kernel, hs_norm_matrix, hs_norm_roundtrip, op_norm,
    projection_defects, prolate_pairs, ConcentrationPair, SetSpec,
};
use uncertop::discretize::{assemble_forward, plancherel_defect, Grid};
use uncertop::families::{laguerre_gaussian_family, random_combinations, RealFn};
use uncertop::inequalities::{
    c1_constant, c2_constant, c2_tilde_constant, dunkl_local_constant_large_s,
    dunkl_local_constant_small_s, local_constant, verify_donoho_stark, verify_global, verify_local,
    GlobalRoute,
};
use uncertop::recovery::{observe, reconstruct, reconstruction_csv, stability_certificate};
use uncertop::transforms::TransformSpec;

pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

pub struct TaskOutcome {
    pub pass: bool,
    pub artifacts: Vec<Artifact>,
}

fn num(e: uncertop::Error) -> RunError {
    RunError::Numeric(e.to_string())
}

pub fn base_grid(config: &ExperimentConfig) -> uncertop::Result<Grid> {
    Grid::build(
        &config.transform,
        config.grid.radius,
        config.grid.panels,
        config.grid.nodes_per_panel,
    )
}

fn aligned_grid(config: &ExperimentConfig, criticals: &[f64]) -> Result<Grid, RunError> {
    Grid::build_aligned(
        &config.transform,
        config.grid.radius,
        config.grid.panels,
        config.grid.nodes_per_panel,
        criticals,
    )
    .map_err(num)
}

fn build_pair(
    config: &ExperimentConfig,
    s: &SetSpec,
    sigma: &SetSpec,
) -> Result<ConcentrationPair, RunError> {
    let mut criticals = s.endpoints();
    criticals.extend(sigma.endpoints());
    let grid = aligned_grid(config, &criticals)?;
    ConcentrationPair::build(&config.transform, &grid, &grid, s.clone(), sigma.clone()).map_err(num)
}

fn json_artifact<T: Serialize>(name: String, value: &T) -> Artifact {
    Artifact {
        name,
        bytes: serde_json::to_vec_pretty(value).expect("report serializes"),
    }
}

fn certificate_family(spec: &TransformSpec, seed: u64, draws: usize) -> Vec<RealFn> {
    let mut fam = laguerre_gaussian_family(spec, 6);
    fam.extend(random_combinations(spec, seed, draws, 6));
    fam
}

pub fn execute(
    config: &ExperimentConfig,
    task: &Task,
    idx: usize,
) -> Result<TaskOutcome, RunError> {
    let spec = config.transform;
    let tag = format!("task_{idx:02}_{}", task.name());
    match task {
        Task::Plancherel { n_max, max_defect } => {
            let grid = base_grid(config).map_err(num)?;
            let fwd = assemble_forward(&spec, &grid, &grid).map_err(num)?;
            let fam = laguerre_gaussian_family(&spec, *n_max);
            let report = plancherel_defect(&fwd, &fam);
            let pass = report.defect <= *max_defect;
            Ok(TaskOutcome {
                pass,
                artifacts: vec![json_artifact(
                    format!("{tag}.json"),
                    &json!({
                        "defect": report.defect,
                        "worst_tail": report.worst_tail,
                        "tail_exceeded": report.tail_exceeded,
                        "n_max": n_max,
                        "max_defect": max_defect,
                        "pass": pass,
                    }),
                )],
            })
        }

        Task::Constants {
            s_values,
            dunkl_spots,
        } => {
            let a = spec.a();
            let mut rows = Vec::new();
            let mut csv = String::from("s,c1,c2,c2_tilde,local_constant,regime\n");
            for &s in s_values {
                let c1 = if s > 0.0 && s < a {
                    Some(c1_constant(&spec, s).map_err(num)?)
                } else {
                    None
                };
                let (c2, c2t) = if s > a {
                    (
                        Some(c2_constant(&spec, s).map_err(num)?),
                        Some(c2_tilde_constant(&spec, s).map_err(num)?),
                    )
                } else {
                    (None, None)
                };
                let local = local_constant(&spec, s, 1.0).ok();
                csv.push_str(&format!(
                    "{s:.16e},{},{},{},{},{}\n",
                    c1.map_or(String::new(), |v| format!("{v:.16e}")),
                    c2.map_or(String::new(), |v| format!("{v:.16e}")),
                    c2t.map_or(String::new(), |v| format!("{v:.16e}")),
                    local.map_or(String::new(), |l| format!("{:.16e}", l.value)),
                    local.map_or(String::new(), |l| format!("{:?}", l.regime)),
                ));
                rows.push(json!({
                    "s": s, "c1": c1, "c2": c2, "c2_tilde": c2t,
                    "local": local,
                }));
            }
            let mut spots = Vec::new();
            for spot in dunkl_spots {
                // c_k has a closed form only in the rank-one case, where the
                // index equals the multiplicity
                if spot.d != 1 {
                    return Err(RunError::Config(format!(
                        "dunkl spot with d = {} not supported; numeric evaluation needs d = 1",
                        spot.d
                    )));
                }
                let c_k = uncertop::transforms::mehta_constant(spot.gamma).map_err(num)?;
                let g = 2.0 * spot.gamma + spot.d as f64;
                let value = if 2.0 * spot.s < g {
                    dunkl_local_constant_small_s(spot.d, spot.gamma, spot.s, c_k).map_err(num)?
                } else {
                    dunkl_local_constant_large_s(spot.d, spot.gamma, spot.s, c_k).map_err(num)?
                };
                spots.push(json!({
                    "d": spot.d, "gamma": spot.gamma, "s": spot.s,
                    "c_k": c_k, "value": value,
                }));
            }
            let pass = true; // pure formula evaluation; errors surfaced above
            Ok(TaskOutcome {
                pass,
                artifacts: vec![
                    json_artifact(
                        format!("{tag}.json"),
                        &json!({"rows": rows, "dunkl_spots": spots, "pass": pass}),
                    ),
                    Artifact {
                        name: format!("{tag}.csv"),
                        bytes: csv.into_bytes(),
                    },
                ],
            })
        }

        Task::Concentration {
            s,
            sigma,
            tol,
            max_iter,
            export_operator,
        } => {
            let pair = build_pair(config, s, sigma)?;
            let on = op_norm(&pair, *tol, *max_iter).map_err(num)?;
            let hk = hs_norm_kernel(&pair).map_err(num)?;
            let hm = hs_norm_matrix(&pair);
            let rt = hs_norm_roundtrip(&pair);
            let defects = projection_defects(&pair);
            let ann = annihilation_constant(on.value);
            let dual_gap = if hk.value > 0.0 {
                (hk.value - hm).abs() / hk.value
            } else {
                0.0
            };
            let chain = on.value <= hm + 1e-10 && hm <= hk.bound + 1e-10;
            let pass = chain && dual_gap < 1e-5;
            let mut artifacts = vec![json_artifact(
                format!("{tag}.json"),
                &json!({
                    "s": s, "sigma": sigma,
                    "op_norm": on,
                    "hs_kernel": hk,
                    "hs_matrix": hm,
                    "hs_roundtrip": rt,
                    "dual_route_gap": dual_gap,
                    "annihilation": ann,
                    "projection_defects": defects,
                    "chain_holds": chain,
                    "pass": pass,
                }),
            )];
            if *export_operator {
                artifacts.push(Artifact {
                    name: format!("{tag}_forward.csv"),
                    bytes: pair.forward.to_csv().into_bytes(),
                });
            }
            Ok(TaskOutcome { pass, artifacts })
        }

        Task::Local {
            s_fractions,
            sigma,
            seed,
        } => {
            let grid = aligned_grid(config, &sigma.endpoints())?;
            let fwd = assemble_forward(&spec, &grid, &grid).map_err(num)?;
            let mut fam = certificate_family(&spec, *seed, 50);
            fam.extend(uncertop::families::default_dilation_family(&spec));
            let a = spec.a();
            let mut reports = Vec::new();
            let mut csv = String::from("id,params,lhs,rhs,margin,pass\n");
            let mut pass = true;
            for &frac in s_fractions {
                let rep = verify_local(&fwd, frac * a, sigma, &fam).map_err(num)?;
                pass &= rep.pass;
                csv.push_str(&rep.csv_row());
                reports.push(rep);
            }
            Ok(TaskOutcome {
                pass,
                artifacts: vec![
                    json_artifact(format!("{tag}.json"), &reports),
                    Artifact {
                        name: format!("{tag}.csv"),
                        bytes: csv.into_bytes(),
                    },
                ],
            })
        }

        Task::Global {
            s,
            beta,
            seed,
            draws,
        } => {
            let grid = aligned_grid(config, &[1.0])?;
            let fwd = assemble_forward(&spec, &grid, &grid).map_err(num)?;
            let fam = certificate_family(&spec, *seed, *draws);
            let a = spec.a();
            let route = if (*s - a).abs() < 1e-12 {
                // the local route degenerates at s = a; use the annihilation
                // constant of the unit-ball pair
                let ball =
                    SetSpec::single(if spec.two_sided() { -1.0 } else { 0.0 }, 1.0).map_err(num)?;
                let pair = build_pair(config, &ball, &ball)?;
                let on = op_norm(&pair, 1e-11, 50_000).map_err(num)?;
                GlobalRoute::Annihilation {
                    unit_ball_op_norm: on.value,
                }
            } else {
                GlobalRoute::LocalUncertainty
            };
            let rep = verify_global(&fwd, *s, *beta, &fam, route).map_err(num)?;
            let mut pass = rep.pass;
            if *s == 1.0 && *beta == 1.0 {
                // sharp-constant checks
                let sharp = a;
                let g = rep.params["gaussian_ratio"];
                pass &= (g - sharp).abs() <= 1e-6 * sharp;
                pass &= rep.params["min_ratio"] >= sharp * (1.0 - 1e-6);
            }
            let csv = format!("id,params,lhs,rhs,margin,pass\n{}", rep.csv_row());
            Ok(TaskOutcome {
                pass,
                artifacts: vec![
                    json_artifact(format!("{tag}.json"), &rep),
                    Artifact {
                        name: format!("{tag}.csv"),
                        bytes: csv.into_bytes(),
                    },
                ],
            })
        }

        Task::DonohoStark {
            s,
            sigma,
            tol,
            max_iter,
        } => {
            let pair = build_pair(config, s, sigma)?;
            let pro = prolate_pairs(&pair, 1, *tol, *max_iter).map_err(num)?;
            let rep = verify_donoho_stark(&pair, &pro[0].vector).map_err(num)?;
            let pass = rep.pass;
            let csv = format!("id,params,lhs,rhs,margin,pass\n{}", rep.csv_row());
            Ok(TaskOutcome {
                pass,
                artifacts: vec![
                    json_artifact(format!("{tag}.json"), &rep),
                    Artifact {
                        name: format!("{tag}.csv"),
                        bytes: csv.into_bytes(),
                    },
                ],
            })
        }

        Task::Prolate {
            s,
            sigma,
            count,
            tol,
            max_iter,
        } => {
            let pair = build_pair(config, s, sigma)?;
            let pro = prolate_pairs(&pair, *count, *tol, *max_iter).map_err(num)?;
            let mut pass = true;
            for w in pro.windows(2) {
                pass &= w[1].eigenvalue <= w[0].eigenvalue + 1e-9;
            }
            for p in &pro {
                pass &= p.eigenvalue >= -1e-9 && p.eigenvalue <= 1.0 + 1e-6;
            }
            // node, weight, then one re/im column pair per eigenvector
            let mut csv = String::from("node,weight");
            for i in 0..pro.len() {
                csv.push_str(&format!(",v{i}_re,v{i}_im"));
            }
            csv.push('\n');
            for (j, (&x, &w)) in pair
                .grid
                .nodes()
                .iter()
                .zip(pair.grid.weights())
                .enumerate()
            {
                csv.push_str(&format!("{x:.16e},{w:.16e}"));
                for p in &pro {
                    csv.push_str(&format!(",{:.16e},{:.16e}", p.vector[j].re, p.vector[j].im));
                }
                csv.push('\n');
            }
            let meta: Vec<_> = pro
                .iter()
                .map(|p| {
                    json!({
                        "eigenvalue": p.eigenvalue,
                        "residual": p.residual,
                        "iterations": p.iterations,
                    })
                })
                .collect();
            Ok(TaskOutcome {
                pass,
                artifacts: vec![
                    json_artifact(format!("{tag}.json"), &json!({"pairs": meta, "pass": pass})),
                    Artifact {
                        name: format!("{tag}.csv"),
                        bytes: csv.into_bytes(),
                    },
                ],
            })
        }

        Task::Recover {
            s,
            sigma,
            noise,
            seed,
            tol,
            max_iter,
            max_rel_error,
        } => {
            let pair = build_pair(config, s, sigma)?;
            let truth = pair.grid.sample(|x| (-0.5 * x * x).exp());
            let obs = observe(&truth, &pair);
            let (pass, report, rec) = if *noise > 0.0 {
                let cert = stability_certificate(&obs, &truth, *noise, *seed, *tol, *max_iter)
                    .map_err(num)?;
                let rec = reconstruct(&obs, *tol, *max_iter).map_err(num)?;
                (cert.pass, serde_json::to_value(&cert).unwrap(), rec)
            } else {
                let rec = reconstruct(&obs, *tol, *max_iter).map_err(num)?;
                let rel = pair.grid.norm(&(&rec.f_hat - &truth)) / pair.grid.norm(&truth);
                let pass = rel <= *max_rel_error;
                (
                    pass,
                    json!({
                        "relative_error": rel,
                        "iterations": rec.iterations,
                        "residual": rec.residual,
                        "op_norm": rec.op_norm,
                        "observed_rate": rec.observed_rate(),
                        "annihilation": annihilation_constant(rec.op_norm),
                        "pass": pass,
                    }),
                    rec,
                )
            };
            let csv = reconstruction_csv(&pair, &truth, &obs, &rec);
            Ok(TaskOutcome {
                pass,
                artifacts: vec![
                    json_artifact(format!("{tag}.json"), &report),
                    Artifact {
                        name: format!("{tag}.csv"),
                        bytes: csv.into_bytes(),
                    },
                ],
            })
        }
    }
}
