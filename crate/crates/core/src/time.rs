//! Low-storage five-stage fourth-order explicit Runge-Kutta integration
//! with an embedded third-order error estimator, advancing the coupled
//! (state, integrated-Jacobian) system. Geometry-dependent right-hand sides
//! are re-evaluated analytically at every stage time.

use crate::rhs::SolutionField;
use crate::Result;

/// Anything the integrator can advance: cloneable with in-place axpy.
pub trait OdeState: Clone {
    fn axpy(&mut self, c: f64, other: &Self);
    fn zeroed(&self) -> Self;
}

impl OdeState for Vec<f64> {
    fn axpy(&mut self, c: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += c * b;
        }
    }
    fn zeroed(&self) -> Self {
        vec![0.0; self.len()]
    }
}

impl OdeState for SolutionField {
    fn axpy(&mut self, c: f64, other: &Self) {
        SolutionField::axpy(self, c, other);
    }
    fn zeroed(&self) -> Self {
        self.zeros_like()
    }
}

/// Five-stage fourth-order low-storage scheme in van der Houwen (2R) form
/// with embedded third-order weights. Stage structure:
/// y_i = u_n + dt [ b_1 k_1 + ... + b_{i-2} k_{i-2} + a_i k_{i-1} ].
#[derive(Debug, Clone, Copy)]
pub struct RkScheme {
    /// Subdiagonal coefficients a_{i+1,i}, i = 1..4.
    pub a: [f64; 4],
    /// Fourth-order weights.
    pub b: [f64; 5],
    /// Embedded third-order weights.
    pub b_hat: [f64; 5],
    /// Stage times.
    pub c: [f64; 5],
}

impl RkScheme {
    /// The RK4(3)5[2R+]C coefficient set.
    pub fn rk45() -> Self {
        let a = [
            970286171893.0 / 4311952581923.0,
            6584761158862.0 / 12103376702013.0,
            2251764453980.0 / 15575788980749.0,
            26877169314380.0 / 34165994151039.0,
        ];
        let b = [
            1153189308089.0 / 22510343858157.0,
            1772645290293.0 / 4653164025191.0,
            -1672844663538.0 / 4480602732383.0,
            2114624349019.0 / 3568978502595.0,
            5198255086312.0 / 14908931495163.0,
        ];
        let b_hat = [
            1016888040809.0 / 7410784769900.0,
            11231460423587.0 / 58533540763752.0,
            -1563879915014.0 / 6823010717585.0,
            606302364029.0 / 971179775848.0,
            1097981568119.0 / 3980877426909.0,
        ];
        let c = [
            0.0,
            a[0],
            b[0] + a[1],
            b[0] + b[1] + a[2],
            b[0] + b[1] + b[2] + a[3],
        ];
        Self { a, b, b_hat, c }
    }

    /// Reconstruct the full Butcher matrix (a_{ij} = b_j for j <= i-2).
    pub fn butcher(&self) -> [[f64; 5]; 5] {
        let mut m = [[0.0; 5]; 5];
        for i in 1..5usize {
            for j in 0..i.saturating_sub(1) {
                m[i][j] = self.b[j];
            }
            m[i][i - 1] = self.a[i - 1];
        }
        m
    }
}

/// One step of the 2R scheme. Returns the updated state and the embedded
/// error estimate dt * sum (b_i - b_hat_i) k_i.
pub fn rk_step<S, F>(scheme: &RkScheme, y: &S, tau: f64, dt: f64, mut rhs: F) -> Result<(S, S)>
where
    S: OdeState,
    F: FnMut(&S, f64) -> Result<S>,
{
    let mut acc = y.clone(); // accumulates u_n + dt sum b_j k_j
    let mut stage = y.clone(); // current stage vector
    let mut err = y.zeroed();
    for i in 0..5 {
        let k = rhs(&stage, tau + scheme.c[i] * dt)?;
        if i < 4 {
            stage = acc.clone();
            stage.axpy(dt * scheme.a[i], &k);
        }
        acc.axpy(dt * scheme.b[i], &k);
        err.axpy(dt * (scheme.b[i] - scheme.b_hat[i]), &k);
    }
    Ok((acc, err))
}

/// Time-step policy: fixed step or CFL-based (recomputed every step).
#[derive(Debug, Clone, Copy)]
pub enum StepMode {
    FixedDt(f64),
    Cfl(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct StepController {
    pub mode: StepMode,
}

impl StepController {
    /// Step size for the next step, clamped to land exactly on `t_final`.
    pub fn dt(
        &self,
        solver: &crate::rhs::Solver,
        field: &SolutionField,
        tau: f64,
        t_final: f64,
    ) -> Result<f64> {
        let dt = match self.mode {
            StepMode::FixedDt(dt) => dt,
            StepMode::Cfl(cfl) => solver.select_dt(field, tau, cfl)?,
        };
        let remaining = t_final - tau;
        Ok(if dt > remaining { remaining } else { dt })
    }
}
