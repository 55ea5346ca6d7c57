//! Benchmark case definitions, the time-integration driver, convergence
//! sweeps, and CSV reporting.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::cases::{FreestreamCase, SmoothPeriodicField, ViscousShockCase, VortexCase};
use super::norms::{error_norms, linf_deviation, rate, ErrorReport};
use crate::fluxes::UscKind;
use crate::gas::GasParams;
use crate::mesh::{build_mesh, Mesh, MotionSpec, Perturbation};
use crate::operators::build_operator;
use crate::rhs::{ExactState, RhsConfig, SolutionField, Solver};
use crate::time::{rk_step, RkScheme, StepController, StepMode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    IsentropicVortex,
    ViscousShock,
    FreestreamEuler,
    FreestreamNs,
    EntropyConservationPeriodic,
}

impl CaseKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "vortex" => CaseKind::IsentropicVortex,
            "shock" => CaseKind::ViscousShock,
            "freestream-euler" => CaseKind::FreestreamEuler,
            "freestream-ns" => CaseKind::FreestreamNs,
            "entropy-periodic" => CaseKind::EntropyConservationPeriodic,
            other => {
                return Err(Error::Config(format!(
                    "unknown case '{other}' (expected vortex | shock | freestream-euler | freestream-ns | entropy-periodic)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseKind::IsentropicVortex => "vortex",
            CaseKind::ViscousShock => "shock",
            CaseKind::FreestreamEuler => "freestream-euler",
            CaseKind::FreestreamNs => "freestream-ns",
            CaseKind::EntropyConservationPeriodic => "entropy-periodic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub case: CaseKind,
    pub p: usize,
    pub grid: [usize; 3],
    pub t_final: f64,
    pub step: StepMode,
    pub usc_kind: UscKind,
    pub dissipation: bool,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
}

impl CaseSpec {
    pub fn new(case: CaseKind, p: usize, k: usize) -> Self {
        let (grid, t_final, step): ([usize; 3], f64, StepMode) = match case {
            CaseKind::IsentropicVortex => ([k, k, 1], 2.5, StepMode::Cfl(0.5)),
            CaseKind::ViscousShock => ([k, k, k], 0.5, StepMode::Cfl(0.5)),
            CaseKind::FreestreamEuler | CaseKind::FreestreamNs => {
                ([k, k, 1], 2.5, StepMode::Cfl(0.5))
            }
            CaseKind::EntropyConservationPeriodic => ([k, k, k], 1.0, StepMode::Cfl(0.5)),
        };
        Self {
            case,
            p,
            grid,
            t_final,
            step,
            usc_kind: UscKind::Usc2,
            dissipation: true,
            seed: 1,
            out_dir: None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.case {
            CaseKind::IsentropicVortex | CaseKind::FreestreamEuler | CaseKind::FreestreamNs => {
                if self.grid[2] != 1 || self.grid[0] != self.grid[1] {
                    return Err(Error::Config(format!(
                        "{} requires a KxKx1 grid, got {:?}",
                        self.case.name(),
                        self.grid
                    )));
                }
            }
            CaseKind::ViscousShock | CaseKind::EntropyConservationPeriodic => {
                if self.grid[0] != self.grid[1] || self.grid[1] != self.grid[2] {
                    return Err(Error::Config(format!(
                        "{} requires a K^3 grid, got {:?}",
                        self.case.name(),
                        self.grid
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Everything a case needs to run: mesh, gas, config, exact/boundary data.
struct CaseSetup {
    mesh: Mesh,
    gas: GasParams,
    config: RhsConfig,
    exact: Box<dyn ExactState>,
    /// Dirichlet data comes from the exact state unless fully periodic.
    has_boundary: bool,
    /// Constant state for freestream monitoring, if applicable.
    freestream: Option<crate::gas::State5>,
}

fn setup(spec: &CaseSpec) -> Result<CaseSetup> {
    spec.validate()?;
    let k = spec.grid;
    Ok(match spec.case {
        CaseKind::IsentropicVortex => {
            let case = VortexCase::standard();
            CaseSetup {
                mesh: build_mesh(k, MotionSpec::vortex(k[0]), [false, false, true], None)?,
                gas: case.gas,
                config: RhsConfig {
                    interface_dissipation: spec.dissipation,
                    viscous: false,
                    usc_kind: spec.usc_kind,
                },
                exact: Box::new(case),
                has_boundary: true,
                freestream: None,
            }
        }
        CaseKind::ViscousShock => {
            let case = ViscousShockCase::standard();
            CaseSetup {
                mesh: build_mesh(
                    k,
                    MotionSpec::shock(),
                    [false; 3],
                    Some(Perturbation {
                        fraction: 0.25,
                        seed: spec.seed,
                    }),
                )?,
                gas: case.gas,
                config: RhsConfig {
                    interface_dissipation: spec.dissipation,
                    viscous: true,
                    usc_kind: spec.usc_kind,
                },
                exact: Box::new(case),
                has_boundary: true,
                freestream: None,
            }
        }
        CaseKind::FreestreamEuler | CaseKind::FreestreamNs => {
            let vortex = VortexCase::standard();
            let viscous = spec.case == CaseKind::FreestreamNs;
            let gas = GasParams {
                mu: if viscous { 0.05 } else { 0.0 },
                ..vortex.gas
            };
            let state = vortex.freestream();
            CaseSetup {
                mesh: build_mesh(k, MotionSpec::vortex(k[0]), [false, false, true], None)?,
                gas,
                config: RhsConfig {
                    interface_dissipation: spec.dissipation,
                    viscous,
                    usc_kind: spec.usc_kind,
                },
                exact: Box::new(FreestreamCase(state)),
                has_boundary: true,
                freestream: Some(state),
            }
        }
        CaseKind::EntropyConservationPeriodic => {
            let gas = GasParams::default();
            CaseSetup {
                mesh: build_mesh(k, MotionSpec::periodic_bump(), [true; 3], None)?,
                gas,
                config: RhsConfig {
                    interface_dissipation: spec.dissipation,
                    viscous: false,
                    usc_kind: spec.usc_kind,
                },
                exact: Box::new(SmoothPeriodicField { gas }),
                has_boundary: false,
                freestream: None,
            }
        }
    })
}

/// One monitor record per time step.
#[derive(Debug, Clone, Copy)]
pub struct MonitorRow {
    pub tau: f64,
    pub dt: f64,
    pub embedded_error: f64,
    pub entropy: f64,
    pub conserved: [f64; 5],
}

#[derive(Debug)]
pub struct RunResult {
    pub report: Option<ErrorReport>,
    pub steps: usize,
    /// S(t_final) - S(0) of the mathematical entropy total.
    pub entropy_drift: f64,
    /// Relative drift of each conserved total.
    pub conserved_drift_rel: [f64; 5],
    /// Largest per-step embedded temporal error estimate (L2-normalized).
    pub max_embedded_error: f64,
    /// Running max of the freestream Linf deviation, when applicable.
    pub freestream_linf: Option<f64>,
    pub runtime_s: f64,
    pub monitor: Vec<MonitorRow>,
}

impl RunResult {
    /// Case-level pass/fail for the CLI exit code.
    pub fn passed(&self, spec: &CaseSpec) -> bool {
        match spec.case {
            CaseKind::FreestreamEuler | CaseKind::FreestreamNs => {
                self.freestream_linf.map(|v| v <= 1e-11).unwrap_or(false)
            }
            CaseKind::EntropyConservationPeriodic => self
                .conserved_drift_rel
                .iter()
                .all(|d| d.abs() <= 1e-11),
            _ => true,
        }
    }
}

/// Embedded-estimate norm: volume-normalized L2 of err_z / J.
fn embedded_norm(solver: &Solver, field: &SolutionField, err: &SolutionField) -> f64 {
    let mass = solver.node_mass();
    let mut num = 0.0;
    let mut den = 0.0;
    for (ef, ee) in field.elems.iter().zip(&err.elems) {
        for i in 0..ef.zq.len() {
            let j = ef.jac[i];
            let w = mass[i] * j;
            den += w;
            let ea = ee.zq[i].as_array();
            for r in 0..5 {
                let d = ea[r] / j;
                num += w * d * d;
            }
        }
    }
    (num / den).sqrt()
}

/// Run one case to `t_final`, recording the per-step monitor and final
/// errors. Deterministic for a fixed seed.
pub fn run_case(spec: &CaseSpec) -> Result<RunResult> {
    let started = Instant::now();
    let setup = setup(spec)?;
    let op = build_operator(spec.p)?;
    let solver = Solver {
        mesh: &setup.mesh,
        op: &op,
        gas: setup.gas,
        config: setup.config,
        boundary: if setup.has_boundary {
            Some(setup.exact.as_ref())
        } else {
            None
        },
    };
    let scheme = RkScheme::rk45();
    let controller = StepController { mode: spec.step };

    let mut field = SolutionField::from_function(&setup.mesh, &op, 0.0, setup.exact.as_ref());
    let totals0 = solver.conserved_totals(&field);
    let entropy0 = solver.total_entropy(&field)?;

    let mut tau = 0.0;
    let mut steps = 0;
    let mut monitor = Vec::new();
    let mut max_embedded = 0.0f64;
    let mut freestream_linf = setup
        .freestream
        .as_ref()
        .map(|fs| linf_deviation(&field, fs));
    while tau < spec.t_final - 1e-12 * spec.t_final.max(1.0) {
        let dt = controller.dt(&solver, &field, tau, spec.t_final)?;
        let (next, err) = rk_step(&scheme, &field, tau, dt, |y, t| solver.rates(y, t))?;
        let est = embedded_norm(&solver, &next, &err);
        max_embedded = max_embedded.max(est);
        field = next;
        tau += dt;
        steps += 1;
        if let (Some(fs), Some(worst)) = (setup.freestream.as_ref(), freestream_linf.as_mut()) {
            *worst = worst.max(linf_deviation(&field, fs));
        }
        monitor.push(MonitorRow {
            tau,
            dt,
            embedded_error: est,
            entropy: solver.total_entropy(&field)?,
            conserved: solver.conserved_totals(&field),
        });
    }

    let report = match spec.case {
        CaseKind::EntropyConservationPeriodic => None,
        _ => Some(error_norms(
            &setup.mesh,
            &op,
            &field,
            setup.exact.as_ref(),
            tau,
        )?),
    };
    let totals1 = solver.conserved_totals(&field);
    let entropy1 = solver.total_entropy(&field)?;
    let mut conserved_drift_rel = [0.0; 5];
    for r in 0..5 {
        conserved_drift_rel[r] = (totals1[r] - totals0[r]) / totals0[r].abs().max(1e-300);
    }

    let result = RunResult {
        report,
        steps,
        entropy_drift: entropy1 - entropy0,
        conserved_drift_rel,
        max_embedded_error: max_embedded,
        freestream_linf,
        runtime_s: started.elapsed().as_secs_f64(),
        monitor,
    };
    if let Some(dir) = &spec.out_dir {
        write_run_outputs(dir, spec, &result)?;
    }
    Ok(result)
}

/// One row of a convergence table.
#[derive(Debug)]
pub struct ConvergenceRow {
    pub k: usize,
    pub l2: f64,
    pub l2_rate: Option<f64>,
    pub linf: f64,
    pub linf_rate: Option<f64>,
    pub result: RunResult,
}

/// Run a grid sweep and assemble the error/rate table. Rates are log2
/// ratios between successive (grid-doubling) entries.
pub fn convergence_driver(base: &CaseSpec, grids: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if grids.len() < 2 {
        return Err(Error::Config("convergence sweep needs at least 2 grids".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &k in grids {
        let mut spec = base.clone();
        spec.grid = match base.case {
            CaseKind::ViscousShock | CaseKind::EntropyConservationPeriodic => [k, k, k],
            _ => [k, k, 1],
        };
        spec.out_dir = None;
        let result = run_case(&spec)?;
        let report = result
            .report
            .ok_or_else(|| Error::Config("convergence case without an error report".into()))?;
        let (l2_rate, linf_rate) = match rows.last() {
            Some(prev) if k == 2 * prev.k => (
                Some(rate(prev.l2, report.l2)),
                Some(rate(prev.linf, report.linf)),
            ),
            _ => (None, None),
        };
        rows.push(ConvergenceRow {
            k,
            l2: report.l2,
            l2_rate,
            linf: report.linf,
            linf_rate,
            result,
        });
    }
    if let Some(dir) = &base.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(
            dir.join("errors.csv"),
            convergence_csv(base, &rows),
        )?;
    }
    Ok(rows)
}

pub fn convergence_csv(spec: &CaseSpec, rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("case,p,grid,l2_error,l2_rate,linf_error,linf_rate\n");
    for r in rows {
        let fmt_rate = |x: Option<f64>| x.map(|v| format!("{v:.3}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{}x{}x{},{:.6e},{},{:.6e},{}",
            spec.case.name(),
            spec.p,
            r.k,
            r.k,
            if matches!(spec.case, CaseKind::ViscousShock) { r.k } else { 1 },
            r.l2,
            fmt_rate(r.l2_rate),
            r.linf,
            fmt_rate(r.linf_rate),
        );
    }
    s
}

fn write_run_outputs(dir: &Path, spec: &CaseSpec, result: &RunResult) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut mon = String::from("tau,dt,embedded_error,entropy,mass,mom1,mom2,mom3,energy\n");
    for row in &result.monitor {
        let _ = writeln!(
            mon,
            "{:.10e},{:.6e},{:.6e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            row.tau,
            row.dt,
            row.embedded_error,
            row.entropy,
            row.conserved[0],
            row.conserved[1],
            row.conserved[2],
            row.conserved[3],
            row.conserved[4],
        );
    }
    std::fs::write(dir.join("monitor.csv"), mon)?;

    let mut err = String::from(
        "case,p,grid,l2,linf,rho_l2,mom1_l2,mom2_l2,mom3_l2,energy_l2,freestream_linf,entropy_drift,steps,runtime_s\n",
    );
    let report = result.report.unwrap_or_default();
    let _ = writeln!(
        err,
        "{},{},{}x{}x{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{},{:.6e},{},{:.3}",
        spec.case.name(),
        spec.p,
        spec.grid[0],
        spec.grid[1],
        spec.grid[2],
        report.l2,
        report.linf,
        report.per_var_l2[0],
        report.per_var_l2[1],
        report.per_var_l2[2],
        report.per_var_l2[3],
        report.per_var_l2[4],
        result
            .freestream_linf
            .map(|v| format!("{v:.3e}"))
            .unwrap_or_default(),
        result.entropy_drift,
        result.steps,
        result.runtime_s,
    );
    std::fs::write(dir.join("errors.csv"), err)?;
    Ok(())
}
