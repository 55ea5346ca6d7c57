//! Viscous coefficient matrices in entropy variables and their
//! metric-transformed blocks: C_mj maps entropy-variable gradients to the
//! physical viscous fluxes, Chat_ln = sum_mj a_lm C_mj a_nj / J maps
//! computational gradients to the metric-weighted viscous fluxes. The
//! assembled block matrices are symmetric positive semidefinite for
//! admissible states, which is what makes the LDG discretization entropy
//! stable.

use crate::gas::{GasParams, Primitives, State5};
use crate::Result;

/// The 3x3 array of 5x5 viscous coefficient blocks; `blocks[m][j]` maps
/// dW/dx_j to the m-th viscous flux.
#[derive(Debug, Clone)]
pub struct CBlocks(pub [[[[f64; 5]; 5]; 3]; 3]);

/// Assemble the coefficient blocks analytically from the stress tensor and
/// Fourier heat flux re-expressed in entropy-variable gradients.
pub fn c_matrices(u: &State5, g: &GasParams) -> Result<CBlocks> {
    let p = crate::gas::primitive_from_state(u, g)?;
    Ok(c_matrices_prim(&p, g))
}

pub fn c_matrices_prim(p: &Primitives, g: &GasParams) -> CBlocks {
    let mu = g.mu;
    let kappa = g.kappa();
    let t = p.temperature;
    let v = p.v;
    let vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let mut c = [[[[0.0; 5]; 5]; 3]; 3];
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    for m in 0..3 {
        for j in 0..3 {
            let blk = &mut c[m][j];
            for i in 0..3 {
                for k in 0..3 {
                    blk[1 + i][1 + k] = mu
                        * t
                        * (delta(j, m) * delta(i, k) + delta(j, i) * delta(m, k)
                            - 2.0 / 3.0 * delta(i, m) * delta(j, k));
                }
                blk[1 + i][4] = mu
                    * t
                    * (v[i] * delta(j, m) + v[m] * delta(j, i) - 2.0 / 3.0 * delta(i, m) * v[j]);
            }
            for k in 0..3 {
                blk[4][1 + k] = mu
                    * t
                    * (v[k] * delta(j, m) + v[j] * delta(m, k) - 2.0 / 3.0 * v[m] * delta(j, k));
            }
            blk[4][4] =
                mu * t * (vv * delta(j, m) + v[m] * v[j] / 3.0) + kappa * t * t * delta(j, m);
        }
    }
    CBlocks(c)
}

/// delta_m = sum_j C_mj gamma_j without materializing the blocks: the
/// contraction is evaluated through the stress tensor, using the chain rule
/// dV_i/dx_j = T gW[1+i][j] + V_i T gW[4][j] and dT/dx_j = T^2 gW[4][j]
/// (gamma may carry any common scale factor; the map is linear).
pub fn apply_c(p: &Primitives, g: &GasParams, gamma: &[[f64; 5]; 3]) -> [[f64; 5]; 3] {
    let t = p.temperature;
    let v = p.v;
    let mu = g.mu;
    let kappa = g.kappa();
    let mut grad_v = [[0.0; 3]; 3]; // grad_v[i][j] = dV_i/dx_j
    let mut grad_t = [0.0; 3];
    for j in 0..3 {
        for i in 0..3 {
            grad_v[i][j] = t * gamma[j][1 + i] + v[i] * t * gamma[j][4];
        }
        grad_t[j] = t * t * gamma[j][4];
    }
    let div = grad_v[0][0] + grad_v[1][1] + grad_v[2][2];
    let mut tau = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            tau[i][j] = mu * (grad_v[i][j] + grad_v[j][i]);
        }
        tau[i][i] -= mu * 2.0 / 3.0 * div;
    }
    let mut out = [[0.0; 5]; 3];
    for m in 0..3 {
        for i in 0..3 {
            out[m][1 + i] = tau[i][m];
        }
        out[m][4] = tau[0][m] * v[0] + tau[1][m] * v[1] + tau[2][m] * v[2] + kappa * grad_t[m];
    }
    out
}

/// Metric-transformed blocks Chat_ln = sum_mj a_lm C_mj a_nj / J (assembled
/// form, used by the audits; the solver uses [`apply_c`] with pre- and
/// post-contraction by the metrics instead).
pub fn chat_blocks(c: &CBlocks, a: &[[f64; 3]; 3], jdet: f64) -> [[[[f64; 5]; 5]; 3]; 3] {
    let mut chat = [[[[0.0; 5]; 5]; 3]; 3];
    for l in 0..3 {
        for n in 0..3 {
            for m in 0..3 {
                for j in 0..3 {
                    let w = a[l][m] * a[n][j] / jdet;
                    if w == 0.0 {
                        continue;
                    }
                    for r in 0..5 {
                        for s in 0..5 {
                            chat[l][n][r][s] += w * c.0[m][j][r][s];
                        }
                    }
                }
            }
        }
    }
    chat
}

/// Interior-penalty kernel: (1/J) Chat_ll applied to a jump vector,
/// evaluated as (1/J^2) sum_mj a_lm C_mj (a_lj dw).
pub fn ip_apply(
    p: &Primitives,
    g: &GasParams,
    a_l: &[f64; 3],
    jdet: f64,
    dw: &[f64; 5],
) -> [f64; 5] {
    let mut gamma = [[0.0; 5]; 3];
    for j in 0..3 {
        for r in 0..5 {
            gamma[j][r] = a_l[j] * dw[r];
        }
    }
    let delta = apply_c(p, g, &gamma);
    let mut out = [0.0; 5];
    let jj = jdet * jdet;
    for m in 0..3 {
        for r in 0..5 {
            out[r] += a_l[m] * delta[m][r] / jj;
        }
    }
    out
}
