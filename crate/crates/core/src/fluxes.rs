//! Inviscid physical fluxes and two-point entropy-conservative flux kernels:
//! the Ismail-Roe flux for the spatial terms and the two mesh-velocity flux
//! variants, all built on a cancellation-safe logarithmic mean.
//!
//! Kernels are pure and symmetric in their arguments; per-node data that is
//! reused across many pairs (logs, Ismail-Roe parameter vector) is
//! precomputed in [`FluxNode`].

use crate::gas::{GasParams, State5};
use crate::Result;

/// Mesh-velocity two-point flux variant. `Usc2` (Z = [rho, V, 1/T]) is the
/// default used in the benchmark runs; `Usc1` (Z = [1/sqrt(T), V/sqrt(T),
/// rho sqrt(T)]) is selectable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UscKind {
    Usc1,
    #[default]
    Usc2,
}

/// Euler flux in Cartesian direction `m` (0, 1 or 2).
pub fn physical_flux(u: &State5, m: usize, g: &GasParams) -> Result<State5> {
    let p = crate::gas::primitive_from_state(u, g)?;
    let mdot = p.rho * p.v[m];
    let mut f = State5 {
        rho: mdot,
        mom: [mdot * p.v[0], mdot * p.v[1], mdot * p.v[2]],
        rho_e: mdot * p.total_enthalpy,
    };
    f.mom[m] += p.pressure;
    Ok(f)
}

/// Logarithmic mean (b - a)/(ln b - ln a) with a series expansion near
/// a = b; formulated symmetrically so that swapping the arguments gives a
/// bitwise-identical result.
pub fn log_mean(a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "log_mean requires positive arguments");
    log_mean_with_ln(a, b, a.ln(), b.ln())
}

#[inline]
pub(crate) fn log_mean_with_ln(a: f64, b: f64, ln_a: f64, ln_b: f64) -> f64 {
    let f = (a - b) / (a + b);
    let u = f * f;
    if u < 1e-4 {
        0.5 * (a + b) / (1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u / 7.0)))
    } else {
        (b - a) / (ln_b - ln_a)
    }
}

/// Per-node data precomputed once per residual evaluation and shared by all
/// two-point kernels touching the node.
#[derive(Debug, Clone, Copy)]
pub struct FluxNode {
    pub rho: f64,
    pub v: [f64; 3],
    pub t: f64,
    pub p: f64,
    /// Specific total enthalpy.
    pub h_total: f64,
    ln_rho: f64,
    ln_t: f64,
    /// Ismail-Roe parameters z1 = sqrt(rho/p), z5 = sqrt(rho p) and their logs.
    z1: f64,
    z5: f64,
    ln_z1: f64,
    ln_z5: f64,
}

impl FluxNode {
    pub fn from_primitives(pr: &crate::gas::Primitives, g: &GasParams) -> Self {
        let ln_rho = pr.rho.ln();
        let ln_t = pr.temperature.ln();
        let ln_p = ln_rho + g.r_gas.ln() + ln_t;
        Self {
            rho: pr.rho,
            v: pr.v,
            t: pr.temperature,
            p: pr.pressure,
            h_total: pr.total_enthalpy,
            ln_rho,
            ln_t,
            z1: (pr.rho / pr.pressure).sqrt(),
            z5: (pr.rho * pr.pressure).sqrt(),
            ln_z1: 0.5 * (ln_rho - ln_p),
            ln_z5: 0.5 * (ln_rho + ln_p),
        }
    }

    pub fn from_state(u: &State5, g: &GasParams) -> Result<Self> {
        let pr = crate::gas::primitive_from_state(u, g)?;
        Ok(Self::from_primitives(&pr, g))
    }
}

/// Ismail-Roe entropy-consistent flux, all three Cartesian directions at
/// once (they share the averaged state).
pub fn fsc_ismail_roe_all(l: &FluxNode, r: &FluxNode, g: &GasParams) -> [[f64; 5]; 3] {
    let z1b = 0.5 * (l.z1 + r.z1);
    let z5b = 0.5 * (l.z5 + r.z5);
    let z1l = log_mean_with_ln(l.z1, r.z1, l.ln_z1, r.ln_z1);
    let z5l = log_mean_with_ln(l.z5, r.z5, l.ln_z5, r.ln_z5);
    let rho_h = z1b * z5l;
    let vh = [
        0.5 * (l.z1 * l.v[0] + r.z1 * r.v[0]) / z1b,
        0.5 * (l.z1 * l.v[1] + r.z1 * r.v[1]) / z1b,
        0.5 * (l.z1 * l.v[2] + r.z1 * r.v[2]) / z1b,
    ];
    let p1 = z5b / z1b;
    let p2 = 0.5 * (g.gamma + 1.0) / g.gamma * z5l / z1l + 0.5 * (g.gamma - 1.0) / g.gamma * p1;
    let ke = 0.5 * (vh[0] * vh[0] + vh[1] * vh[1] + vh[2] * vh[2]);
    let hh = g.gamma / (g.gamma - 1.0) * p2 / rho_h + ke;
    let mut out = [[0.0; 5]; 3];
    for m in 0..3 {
        let mdot = rho_h * vh[m];
        out[m] = [mdot, mdot * vh[0], mdot * vh[1], mdot * vh[2], mdot * hh];
        out[m][1 + m] += p1;
    }
    out
}

/// Single-direction Ismail-Roe flux (test and oracle convenience).
pub fn fsc_ismail_roe(ul: &State5, ur: &State5, m: usize, g: &GasParams) -> Result<State5> {
    let l = FluxNode::from_state(ul, g)?;
    let r = FluxNode::from_state(ur, g)?;
    Ok(State5::from_array(fsc_ismail_roe_all(&l, &r, g)[m]))
}

/// Mesh-velocity two-point entropy-conservative flux.
pub fn usc_flux_nodes(kind: UscKind, l: &FluxNode, r: &FluxNode, g: &GasParams) -> [f64; 5] {
    match kind {
        UscKind::Usc1 => {
            // Z = [1/sqrt(T), V/sqrt(T), rho sqrt(T)]
            let sl = l.t.sqrt();
            let sr = r.t.sqrt();
            let z1 = [1.0 / sl, 1.0 / sr];
            let z5 = [l.rho * sl, r.rho * sr];
            let z1b = 0.5 * (z1[0] + z1[1]);
            let zvb = [
                0.5 * (l.v[0] / sl + r.v[0] / sr),
                0.5 * (l.v[1] / sl + r.v[1] / sr),
                0.5 * (l.v[2] / sl + r.v[2] / sr),
            ];
            let z5b = 0.5 * (z5[0] + z5[1]);
            let z1l = log_mean_with_ln(z1[0], z1[1], -0.5 * l.ln_t, -0.5 * r.ln_t);
            let z5l = log_mean_with_ln(
                z5[0],
                z5[1],
                l.ln_rho + 0.5 * l.ln_t,
                r.ln_rho + 0.5 * r.ln_t,
            );
            let qsum = zvb[0] * zvb[0] + zvb[1] * zvb[1] + zvb[2] * zvb[2];
            [
                z5l * z1b,
                z5l * zvb[0],
                z5l * zvb[1],
                z5l * zvb[2],
                0.5 * z5l
                    * (g.r_gas * (g.gamma + 1.0) / (z1l * (g.gamma - 1.0))
                        + (qsum - g.r_gas * z5b / z5l) / z1b),
            ]
        }
        UscKind::Usc2 => {
            // Z = [rho, V, 1/T]
            let z1l = log_mean_with_ln(l.rho, r.rho, l.ln_rho, r.ln_rho);
            let z5l = log_mean_with_ln(1.0 / l.t, 1.0 / r.t, -l.ln_t, -r.ln_t);
            let zvb = [
                0.5 * (l.v[0] + r.v[0]),
                0.5 * (l.v[1] + r.v[1]),
                0.5 * (l.v[2] + r.v[2]),
            ];
            let sqb = 0.5
                * ((l.v[0] * l.v[0] + l.v[1] * l.v[1] + l.v[2] * l.v[2])
                    + (r.v[0] * r.v[0] + r.v[1] * r.v[1] + r.v[2] * r.v[2]));
            let qsum = zvb[0] * zvb[0] + zvb[1] * zvb[1] + zvb[2] * zvb[2];
            [
                z1l,
                z1l * zvb[0],
                z1l * zvb[1],
                z1l * zvb[2],
                z1l * (g.r_gas / ((g.gamma - 1.0) * z5l) + qsum - 0.5 * sqb),
            ]
        }
    }
}

/// State-level wrapper around [`usc_flux_nodes`].
pub fn usc_flux(kind: UscKind, ul: &State5, ur: &State5, g: &GasParams) -> Result<State5> {
    let l = FluxNode::from_state(ul, g)?;
    let r = FluxNode::from_state(ur, g)?;
    Ok(State5::from_array(usc_flux_nodes(kind, &l, &r, g)))
}
