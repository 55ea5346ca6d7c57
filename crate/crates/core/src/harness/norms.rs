//! Quadrature-weighted error norms and convergence-rate bookkeeping.

use crate::mesh::{element_geometry, Mesh};
use crate::operators::Operator1D;
use crate::rhs::{ExactState, SolutionField};
use crate::Result;

/// Joint and per-variable L2 / Linf errors of the entire solution vector.
/// L2 is volume-normalized: sqrt( sum m J |q - q_ex|^2 / sum m J ) with the
/// determinant Jacobian of the geometry at the evaluation time.
#[derive(Debug, Clone, Copy, Default)]
pub struct ErrorReport {
    pub l2: f64,
    pub linf: f64,
    pub per_var_l2: [f64; 5],
    pub per_var_linf: [f64; 5],
}

pub fn error_norms(
    mesh: &Mesh,
    op: &Operator1D,
    field: &SolutionField,
    exact: &dyn ExactState,
    tau: f64,
) -> Result<ErrorReport> {
    let n = op.n();
    let layout = crate::operators::ElementLayout::new(n);
    let mut mass = vec![0.0; layout.total()];
    for i1 in 0..n {
        for i2 in 0..n {
            for i3 in 0..n {
                mass[layout.idx(i1, i2, i3)] = op.h[i1] * op.h[i2] * op.h[i3];
            }
        }
    }
    let mut num = [0.0f64; 5];
    let mut den = 0.0f64;
    let mut linf = [0.0f64; 5];
    for e in 0..mesh.n_elements() {
        let geom = element_geometry(mesh, e, op, tau);
        for i in 0..layout.total() {
            let q = field.q_at(e, i).as_array();
            let qe = exact
                .state([geom.x[0][i], geom.x[1][i], geom.x[2][i]], tau)
                .as_array();
            let w = mass[i] * geom.jdet[i];
            den += w;
            for r in 0..5 {
                let d = q[r] - qe[r];
                num[r] += w * d * d;
                linf[r] = linf[r].max(d.abs());
            }
        }
    }
    let mut per_var_l2 = [0.0; 5];
    let mut total = 0.0;
    for r in 0..5 {
        per_var_l2[r] = (num[r] / den).sqrt();
        total += num[r];
    }
    Ok(ErrorReport {
        l2: (total / den).sqrt(),
        linf: linf.iter().cloned().fold(0.0, f64::max),
        per_var_l2,
        per_var_linf: linf,
    })
}

/// Max-norm deviation from a constant state (freestream monitor; cheaper
/// than the full report).
pub fn linf_deviation(field: &SolutionField, constant: &crate::gas::State5) -> f64 {
    let ca = constant.as_array();
    let mut worst = 0.0f64;
    for (e, ef) in field.elems.iter().enumerate() {
        for i in 0..ef.zq.len() {
            let q = field.q_at(e, i).as_array();
            for r in 0..5 {
                worst = worst.max((q[r] - ca[r]).abs());
            }
        }
    }
    worst
}

/// log2 rate between two grids differing by a factor of two.
pub fn rate(coarse_err: f64, fine_err: f64) -> f64 {
    (coarse_err / fine_err).log2()
}
