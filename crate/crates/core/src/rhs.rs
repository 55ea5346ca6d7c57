//! Semi-discrete right-hand side: skew-symmetric Hadamard-form volume terms,
//! entropy-conservative interface SATs, entropy-stable interface
//! dissipation, Dirichlet/periodic boundary treatment, and the LDG viscous
//! terms, assembled per element for the coupled (J q, J) ODE system.
//!
//! The integrated state is z = J q together with the integrated Jacobian J,
//! both advanced by the same Runge-Kutta scheme. Because the conserved
//! totals are linear in z, discrete conservation and freestream preservation
//! hold to roundoff at the fully discrete level.
//!
//! Assembly is element-parallel: volume terms are element-local, face terms
//! read the neighbor's data immutably and write only to the owner element,
//! and both sides of a face evaluate the shared two-point flux themselves.
//! The result is independent of the worker count.

use crate::fluxes::{fsc_ismail_roe_all, usc_flux_nodes, FluxNode, UscKind};
use crate::gas::{
    entropy_scaled_eigensystem, entropy_vars_from_prim, primitive_from_state, roe_average,
    GasParams, Primitives, State5,
};
use crate::mesh::{
    element_geometry, face_direction, face_is_upper, face_nodes, integrated_jacobian_rate,
    opposite_face, ElementGeometry, FaceKind, Mesh,
};
use crate::operators::{apply_line_derivative, ElementLayout, Operator1D};
use crate::parallel::{map_elements, try_map_elements};
use crate::viscous::{apply_c, ip_apply};
use crate::{Error, Result};

/// Solver switches.
#[derive(Debug, Clone, Copy)]
pub struct RhsConfig {
    pub interface_dissipation: bool,
    pub viscous: bool,
    pub usc_kind: UscKind,
}

impl Default for RhsConfig {
    fn default() -> Self {
        Self {
            interface_dissipation: true,
            viscous: false,
            usc_kind: UscKind::Usc2,
        }
    }
}

/// Exact-state callback used for Dirichlet faces (and for initializing and
/// measuring errors in the harness).
pub trait ExactState: Sync + Send {
    fn state(&self, x: [f64; 3], t: f64) -> State5;
}

impl<F> ExactState for F
where
    F: Fn([f64; 3], f64) -> State5 + Sync + Send,
{
    fn state(&self, x: [f64; 3], t: f64) -> State5 {
        self(x, t)
    }
}

/// Per-element integrated unknowns: z = J q at each node plus the
/// integrated Jacobian, both ordered with the xi_3 index fastest.
#[derive(Debug, Clone)]
pub struct ElemField {
    pub zq: Vec<State5>,
    pub jac: Vec<f64>,
}

/// The global solution: one [`ElemField`] per mesh element.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub elems: Vec<ElemField>,
}

impl SolutionField {
    pub fn zeros_like(&self) -> Self {
        Self {
            elems: self
                .elems
                .iter()
                .map(|e| ElemField {
                    zq: vec![State5::default(); e.zq.len()],
                    jac: vec![0.0; e.jac.len()],
                })
                .collect(),
        }
    }

    pub fn axpy(&mut self, c: f64, other: &Self) {
        for (a, b) in self.elems.iter_mut().zip(&other.elems) {
            for (x, y) in a.zq.iter_mut().zip(&b.zq) {
                x.axpy(c, y);
            }
            for (x, y) in a.jac.iter_mut().zip(&b.jac) {
                *x += c * y;
            }
        }
    }

    /// Conservative state q = z / J at one node.
    #[inline]
    pub fn q_at(&self, elem: usize, node: usize) -> State5 {
        let e = &self.elems[elem];
        let mut q = e.zq[node];
        q.scale(1.0 / e.jac[node]);
        q
    }

    /// Initialize from a pointwise state function: z = J_det q, J = J_det.
    pub fn from_function(
        mesh: &Mesh,
        op: &Operator1D,
        tau: f64,
        f: &dyn ExactState,
    ) -> Self {
        let elems = map_elements(mesh.n_elements(), |e| {
            let geom = element_geometry(mesh, e, op, tau);
            let total = geom.layout.total();
            let mut zq = Vec::with_capacity(total);
            for i in 0..total {
                let mut u = f.state([geom.x[0][i], geom.x[1][i], geom.x[2][i]], tau);
                u.scale(geom.jdet[i]);
                zq.push(u);
            }
            ElemField {
                zq,
                jac: geom.jdet,
            }
        });
        Self { elems }
    }
}

/// The assembled solver: mesh + operator + gas + configuration + optional
/// Dirichlet data.
pub struct Solver<'a> {
    pub mesh: &'a Mesh,
    pub op: &'a Operator1D,
    pub gas: GasParams,
    pub config: RhsConfig,
    pub boundary: Option<&'a dyn ExactState>,
}

/// Per-node data shared by all kernels in one residual evaluation.
struct NodeData {
    q: Vec<State5>,
    flux: Vec<FluxNode>,
    prim: Vec<Primitives>,
    w: Vec<[f64; 5]>,
}

/// Viscous intermediate fields: LDG gradients Theta_n and metric-weighted
/// viscous fluxes g_l = sum_n Chat_ln Theta_n, per element.
struct ViscousFields {
    theta: Vec<[Vec<[f64; 5]>; 3]>,
    gflux: Vec<[Vec<[f64; 5]>; 3]>,
}

impl<'a> Solver<'a> {
    pub fn layout(&self) -> ElementLayout {
        ElementLayout::new(self.op.n())
    }

    /// Tensor-product quadrature weight per node (no Jacobian).
    pub fn node_mass(&self) -> Vec<f64> {
        let layout = self.layout();
        let n = self.op.n();
        let mut m = vec![0.0; layout.total()];
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    m[layout.idx(i1, i2, i3)] = self.op.h[i1] * self.op.h[i2] * self.op.h[i3];
                }
            }
        }
        m
    }

    fn geometries(&self, tau: f64) -> Result<Vec<ElementGeometry>> {
        try_map_elements(self.mesh.n_elements(), |e| {
            let geom = element_geometry(self.mesh, e, self.op, tau);
            geom.check_jacobian(e, tau)?;
            Ok(geom)
        })
    }

    fn node_data(&self, field: &SolutionField, tau: f64) -> Result<Vec<NodeData>> {
        try_map_elements(self.mesh.n_elements(), |e| {
            let ef = &field.elems[e];
            let total = ef.zq.len();
            let mut q = Vec::with_capacity(total);
            let mut flux = Vec::with_capacity(total);
            let mut prim = Vec::with_capacity(total);
            let mut w = Vec::with_capacity(total);
            for i in 0..total {
                let j = ef.jac[i];
                if !(j > 0.0) {
                    return Err(Error::MeshTangled {
                        element: e,
                        node: i,
                        tau,
                        jacobian: j,
                        x: [f64::NAN; 3],
                    });
                }
                let mut u = ef.zq[i];
                u.scale(1.0 / j);
                let p = primitive_from_state(&u, &self.gas).map_err(|err| match err {
                    Error::Inadmissible { rho, temperature } => Error::InadmissibleAt {
                        element: e,
                        node: i,
                        tau,
                        rho,
                        temperature,
                    },
                    other => other,
                })?;
                flux.push(FluxNode::from_primitives(&p, &self.gas));
                w.push(entropy_vars_from_prim(&p, &self.gas));
                prim.push(p);
                q.push(u);
            }
            Ok(NodeData { q, flux, prim, w })
        })
    }

    fn ghost_data(&self, x: [f64; 3], tau: f64) -> Result<(State5, FluxNode, [f64; 5], Primitives)> {
        let bc = self
            .boundary
            .ok_or_else(|| Error::Config("Dirichlet face without boundary data".into()))?;
        let u = bc.state(x, tau);
        let p = primitive_from_state(&u, &self.gas)?;
        Ok((
            u,
            FluxNode::from_primitives(&p, &self.gas),
            entropy_vars_from_prim(&p, &self.gas),
            p,
        ))
    }

    /// LDG gradient pass and viscous flux pass.
    fn viscous_fields(
        &self,
        geoms: &[ElementGeometry],
        nodes: &[NodeData],
        tau: f64,
    ) -> Result<ViscousFields> {
        let layout = self.layout();
        let n = self.op.n();
        let theta: Vec<[Vec<[f64; 5]>; 3]> =
            try_map_elements(self.mesh.n_elements(), |e| {
                let total = layout.total();
                let w = &nodes[e].w;
                let mut th: [Vec<[f64; 5]>; 3] = [
                    vec![[0.0; 5]; total],
                    vec![[0.0; 5]; total],
                    vec![[0.0; 5]; total],
                ];
                // Theta_n = D_n w ...
                let mut comp = vec![0.0; total];
                let mut dcomp = vec![0.0; total];
                for dir in 0..3 {
                    for r in 0..5 {
                        for i in 0..total {
                            comp[i] = w[i][r];
                        }
                        apply_line_derivative(self.op, layout, &comp, dir, &mut dcomp);
                        for i in 0..total {
                            th[dir][i][r] = dcomp[i];
                        }
                    }
                }
                // ... minus the half-jump face corrections
                for face in 0..6 {
                    let dir = face_direction(face);
                    let e_sign = if face_is_upper(face) { 1.0 } else { -1.0 };
                    let h_face = self.op.h[if face_is_upper(face) { n - 1 } else { 0 }];
                    let own = face_nodes(layout, face);
                    match self.mesh.neighbor(e, face) {
                        FaceKind::Interior(ne) => {
                            let partner = face_nodes(layout, opposite_face(face));
                            for (pos, &io) in own.iter().enumerate() {
                                let ip = partner[pos];
                                let wn = nodes[ne].w[ip];
                                for r in 0..5 {
                                    th[dir][io][r] -=
                                        e_sign * (w[io][r] - wn[r]) / (2.0 * h_face);
                                }
                            }
                        }
                        FaceKind::Dirichlet => {
                            let geom = &geoms[e];
                            for &io in &own {
                                let x = [geom.x[0][io], geom.x[1][io], geom.x[2][io]];
                                let (_, _, wg, _) = self.ghost_data(x, tau)?;
                                for r in 0..5 {
                                    th[dir][io][r] -=
                                        e_sign * (w[io][r] - wg[r]) / (2.0 * h_face);
                                }
                            }
                        }
                    }
                }
                Ok(th)
            })?;

        // g_l = sum_n Chat_ln Theta_n, evaluated through the physical blocks
        let gflux: Vec<[Vec<[f64; 5]>; 3]> = map_elements(self.mesh.n_elements(), |e| {
            let total = layout.total();
            let geom = &geoms[e];
            let th = &theta[e];
            let mut gf: [Vec<[f64; 5]>; 3] = [
                vec![[0.0; 5]; total],
                vec![[0.0; 5]; total],
                vec![[0.0; 5]; total],
            ];
            for i in 0..total {
                // gamma_j = sum_n a_nj Theta_n  (approximately J dW/dx_j)
                let mut gamma = [[0.0; 5]; 3];
                for j in 0..3 {
                    for dir in 0..3 {
                        let anj = geom.a[dir][j][i];
                        for r in 0..5 {
                            gamma[j][r] += anj * th[dir][i][r];
                        }
                    }
                }
                let delta = apply_c(&nodes[e].prim[i], &self.gas, &gamma);
                let jinv = 1.0 / geom.jdet[i];
                for l in 0..3 {
                    let mut out = [0.0; 5];
                    for m in 0..3 {
                        let alm = geom.a[l][m][i];
                        for r in 0..5 {
                            out[r] += alm * delta[m][r];
                        }
                    }
                    for r in 0..5 {
                        gf[l][i][r] = out[r] * jinv;
                    }
                }
            }
            gf
        });

        Ok(ViscousFields { theta, gflux })
    }

    /// Assemble d(Jq)/dtau and dJ/dtau at time `tau`.
    pub fn rates(&self, field: &SolutionField, tau: f64) -> Result<SolutionField> {
        let geoms = self.geometries(tau)?;
        let nodes = self.node_data(field, tau)?;
        let visc = if self.config.viscous {
            Some(self.viscous_fields(&geoms, &nodes, tau)?)
        } else {
            None
        };
        let elems = try_map_elements(self.mesh.n_elements(), |e| {
            self.element_rate(e, &geoms, &nodes, visc.as_ref(), tau)
        })?;
        Ok(SolutionField { elems })
    }

    fn element_rate(
        &self,
        e: usize,
        geoms: &[ElementGeometry],
        nodes: &[NodeData],
        visc: Option<&ViscousFields>,
        tau: f64,
    ) -> Result<ElemField> {
        let layout = self.layout();
        let n = self.op.n();
        let total = layout.total();
        let geom = &geoms[e];
        let nd = &nodes[e];
        let mut rate = vec![State5::default(); total];

        // Hadamard volume terms, line-wise: for each tensor line in
        // direction l and each node pair (i, j) on it,
        //   rate_i -= D_ij [ sum_m (a_lm(i)+a_lm(j)) Fsc_m(q_i,q_j)
        //                    + (b_l(i)+b_l(j)) Usc(q_i,q_j) ]
        // and symmetrically for j. The shared two-point fluxes are evaluated
        // once per unordered pair.
        for l in 0..3 {
            let stride = layout.stride(l);
            for &s in &layout.line_starts(l) {
                for i in 0..n {
                    let gi = s + i * stride;
                    for j in i..n {
                        let gj = s + j * stride;
                        let fsc = fsc_ismail_roe_all(&nd.flux[gi], &nd.flux[gj], &self.gas);
                        let usc =
                            usc_flux_nodes(self.config.usc_kind, &nd.flux[gi], &nd.flux[gj], &self.gas);
                        let bsum = geom.b[l][gi] + geom.b[l][gj];
                        let mut combined = [0.0; 5];
                        for m in 0..3 {
                            let asum = geom.a[l][m][gi] + geom.a[l][m][gj];
                            for r in 0..5 {
                                combined[r] += asum * fsc[m][r];
                            }
                        }
                        for r in 0..5 {
                            combined[r] += bsum * usc[r];
                        }
                        let dij = self.op.d[i * n + j];
                        let ri = &mut rate[gi];
                        ri.rho -= dij * combined[0];
                        ri.mom[0] -= dij * combined[1];
                        ri.mom[1] -= dij * combined[2];
                        ri.mom[2] -= dij * combined[3];
                        ri.rho_e -= dij * combined[4];
                        if j > i {
                            let dji = self.op.d[j * n + i];
                            let rj = &mut rate[gj];
                            rj.rho -= dji * combined[0];
                            rj.mom[0] -= dji * combined[1];
                            rj.mom[1] -= dji * combined[2];
                            rj.mom[2] -= dji * combined[3];
                            rj.rho_e -= dji * combined[4];
                        }
                    }
                }
            }
        }

        // viscous volume term: + sum_l D_l g_l
        if let Some(v) = visc {
            let gf = &v.gflux[e];
            let mut comp = vec![0.0; total];
            let mut dcomp = vec![0.0; total];
            for l in 0..3 {
                for r in 0..5 {
                    for i in 0..total {
                        comp[i] = gf[l][i][r];
                    }
                    apply_line_derivative(self.op, layout, &comp, l, &mut dcomp);
                    for i in 0..total {
                        let ra = &mut rate[i];
                        match r {
                            0 => ra.rho += dcomp[i],
                            4 => ra.rho_e += dcomp[i],
                            _ => ra.mom[r - 1] += dcomp[i],
                        }
                    }
                }
            }
        }

        // face terms
        for face in 0..6 {
            let dir = face_direction(face);
            let upper = face_is_upper(face);
            let e_sign = if upper { 1.0 } else { -1.0 };
            let h_face = self.op.h[if upper { n - 1 } else { 0 }];
            let own = face_nodes(layout, face);
            match self.mesh.neighbor(e, face) {
                FaceKind::Interior(ne) => {
                    let partner = face_nodes(layout, opposite_face(face));
                    for (pos, &io) in own.iter().enumerate() {
                        let ip = partner[pos];
                        let ndn = &nodes[ne];
                        let dg = visc.map(|v| {
                            let go = &v.gflux[e][dir][io];
                            let gn = &v.gflux[ne][dir][ip];
                            let mut d = [0.0; 5];
                            for r in 0..5 {
                                d[r] = go[r] - gn[r];
                            }
                            d
                        });
                        self.face_node_terms(
                            geom,
                            nd,
                            io,
                            &ndn.q[ip],
                            &ndn.flux[ip],
                            &ndn.w[ip],
                            dir,
                            e_sign,
                            h_face,
                            dg,
                            &mut rate,
                        )?;
                    }
                }
                FaceKind::Dirichlet => {
                    for &io in &own {
                        let x = [geom.x[0][io], geom.x[1][io], geom.x[2][io]];
                        let (ug, fg, wg, _) = self.ghost_data(x, tau)?;
                        // the viscous flux jump is closed with the interior
                        // value at Dirichlet faces; the gradient correction
                        // and penalty carry the boundary data
                        let dg = visc.map(|_| [0.0; 5]);
                        self.face_node_terms(
                            geom, nd, io, &ug, &fg, &wg, dir, e_sign, h_face, dg, &mut rate,
                        )?;
                    }
                }
            }
        }

        Ok(ElemField {
            zq: rate,
            jac: integrated_jacobian_rate(&geom.b, self.op),
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn face_node_terms(
        &self,
        geom: &ElementGeometry,
        nd: &NodeData,
        io: usize,
        q_p: &State5,
        f_p: &FluxNode,
        w_p: &[f64; 5],
        dir: usize,
        e_sign: f64,
        h_face: f64,
        visc_dg: Option<[f64; 5]>,
        rate: &mut [State5],
    ) -> Result<()> {
        let g = &self.gas;
        let f_o = &nd.flux[io];
        let a_l = [
            geom.a[dir][0][io],
            geom.a[dir][1][io],
            geom.a[dir][2][io],
        ];
        let b_l = geom.b[dir][io];

        // entropy-conservative SAT: consistent flux minus the two-point flux
        // with the partner state
        let fsc = fsc_ismail_roe_all(f_o, f_p, g);
        let usc = usc_flux_nodes(self.config.usc_kind, f_o, f_p, g);
        let q_o = &nd.q[io];
        let q_oa = q_o.as_array();
        let mut sat = [0.0; 5];
        for m in 0..3 {
            let fm = f_o.physical_flux(m);
            for r in 0..5 {
                sat[r] += a_l[m] * (fm[r] - fsc[m][r]);
            }
        }
        for r in 0..5 {
            sat[r] += b_l * (q_oa[r] - usc[r]);
        }
        let coef = e_sign / h_face;
        let ra = &mut rate[io];
        ra.rho += coef * sat[0];
        ra.mom[0] += coef * sat[1];
        ra.mom[1] += coef * sat[2];
        ra.mom[2] += coef * sat[3];
        ra.rho_e += coef * sat[4];

        let w_o = &nd.w[io];
        let mut dw = [0.0; 5];
        for r in 0..5 {
            dw[r] = w_o[r] - w_p[r];
        }

        // entropy-stable interface dissipation from the Roe-averaged state
        if self.config.interface_dissipation {
            let roe = roe_average(q_o, q_p, g)?;
            let es = entropy_scaled_eigensystem(&roe, a_l, 0.0, g)?;
            let spatial = es.apply_modal(&es.abs_lambda(), &dw);
            let yyt = es.apply_modal(&[1.0; 5], &dw);
            let babs = b_l.abs();
            let c = 1.0 / h_face;
            let ra = &mut rate[io];
            ra.rho -= c * (spatial[0] + babs * yyt[0]);
            ra.mom[0] -= c * (spatial[1] + babs * yyt[1]);
            ra.mom[1] -= c * (spatial[2] + babs * yyt[2]);
            ra.mom[2] -= c * (spatial[3] + babs * yyt[3]);
            ra.rho_e -= c * (spatial[4] + babs * yyt[4]);
        }

        // viscous flux SAT and interior penalty
        if let Some(dg) = visc_dg {
            let roe = roe_average(q_o, q_p, g)?;
            let roe_prim = primitive_from_state(&roe, g)?;
            let ip = ip_apply(&roe_prim, g, &a_l, geom.jdet[io], &dw);
            let cv = -e_sign / (2.0 * h_face);
            let ci = 1.0 / h_face;
            let ra = &mut rate[io];
            ra.rho += cv * dg[0] - ci * ip[0];
            ra.mom[0] += cv * dg[1] - ci * ip[1];
            ra.mom[1] += cv * dg[2] - ci * ip[2];
            ra.mom[2] += cv * dg[3] - ci * ip[3];
            ra.rho_e += cv * dg[4] - ci * ip[4];
        }
        Ok(())
    }

    /// Conserved totals sum_nodes m J q (linear invariants of the scheme on
    /// periodic domains).
    pub fn conserved_totals(&self, field: &SolutionField) -> [f64; 5] {
        let mass = self.node_mass();
        let mut tot = [0.0; 5];
        for ef in &field.elems {
            for (i, z) in ef.zq.iter().enumerate() {
                let za = z.as_array();
                for r in 0..5 {
                    tot[r] += mass[i] * za[r];
                }
            }
        }
        tot
    }

    /// Total mathematical entropy sum m J S(q).
    pub fn total_entropy(&self, field: &SolutionField) -> Result<f64> {
        let mass = self.node_mass();
        let mut tot = 0.0;
        for (e, ef) in field.elems.iter().enumerate() {
            for i in 0..ef.zq.len() {
                let q = field.q_at(e, i);
                let (s, _) = crate::gas::entropy_and_flux(&q, &self.gas)?;
                tot += mass[i] * ef.jac[i] * s;
            }
        }
        Ok(tot)
    }

    /// Instantaneous rate of the total entropy implied by assembled rates:
    /// d/dtau sum m J S = sum m [ w . dz/dtau - phi dJ/dtau ].
    pub fn entropy_rate(&self, field: &SolutionField, rates: &SolutionField) -> Result<f64> {
        let mass = self.node_mass();
        let mut tot = 0.0;
        for (e, ef) in field.elems.iter().enumerate() {
            for i in 0..ef.zq.len() {
                let q = field.q_at(e, i);
                let w = crate::gas::entropy_vars(&q, &self.gas)?;
                let (phi, _) = crate::gas::potentials(&q, &self.gas)?;
                let za = rates.elems[e].zq[i].as_array();
                let mut wdz = 0.0;
                for r in 0..5 {
                    wdz += w[r] * za[r];
                }
                tot += mass[i] * (wdz - phi * rates.elems[e].jac[i]);
            }
        }
        Ok(tot)
    }

    /// CFL time step: minimum over nodes and directions of the smallest LGL
    /// node spacing divided by the contravariant wave speed (including mesh
    /// motion), with a parabolic bound when viscosity is active.
    pub fn select_dt(&self, field: &SolutionField, tau: f64, cfl: f64) -> Result<f64> {
        let geoms = self.geometries(tau)?;
        let nodes = &self.op.nodeset.nodes;
        let mut gap = f64::INFINITY;
        for i in 1..nodes.len() {
            gap = gap.min(nodes[i] - nodes[i - 1]);
        }
        let per_elem = try_map_elements(self.mesh.n_elements(), |e| {
            let geom = &geoms[e];
            let mut dt = f64::INFINITY;
            for i in 0..geom.layout.total() {
                let q = field.q_at(e, i);
                let p = primitive_from_state(&q, &self.gas)?;
                let c = self.gas.sound_speed(p.temperature);
                let jinv = 1.0 / geom.jdet[i];
                for l in 0..3 {
                    let an = [geom.a[l][0][i], geom.a[l][1][i], geom.a[l][2][i]];
                    let anorm =
                        (an[0] * an[0] + an[1] * an[1] + an[2] * an[2]).sqrt();
                    let vcon =
                        an[0] * p.v[0] + an[1] * p.v[1] + an[2] * p.v[2] + geom.b[l][i];
                    let lam = (vcon.abs() + c * anorm) * jinv;
                    if lam > 0.0 {
                        dt = dt.min(gap / lam);
                    }
                    if self.gas.mu > 0.0 {
                        // parabolic limit on the physical spacing along xi_l
                        let h_l = gap * geom.jdet[i] / anorm.max(1e-300);
                        let nu = (4.0 / 3.0 * self.gas.mu)
                            .max(self.gas.kappa() / self.gas.cv())
                            / p.rho;
                        dt = dt.min(h_l * h_l / nu);
                    }
                }
            }
            Ok(dt)
        })?;
        Ok(cfl * per_elem.into_iter().fold(f64::INFINITY, f64::min))
    }
}

impl FluxNode {
    /// Physical flux in direction m reconstructed from the node data.
    #[inline]
    pub fn physical_flux(&self, m: usize) -> [f64; 5] {
        let mdot = self.rho * self.v[m];
        let mut f = [
            mdot,
            mdot * self.v[0],
            mdot * self.v[1],
            mdot * self.v[2],
            mdot * self.h_total,
        ];
        f[1 + m] += self.p;
        f
    }
}
