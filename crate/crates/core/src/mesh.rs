//! Dynamic straight-sided hexahedral meshes: motion mappings, watertight
//! connectivity with periodic identification, GCL-satisfying metric terms in
//! Thomas-Lombard conservative (curl) form, mesh velocities, and discrete
//! GCL audits.
//!
//! A mesh is immutable after construction. Element geometry is recomputed
//! per element per stage from the analytic motion; abutting elements agree
//! on face metrics because they share vertices, not because they
//! communicate.

use crate::operators::{apply_line_derivative, ElementLayout, Operator1D};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Analytic motion of the mesh vertices, applied to global computational
/// coordinates in `[-1, 1]^3`.
#[derive(Debug, Clone, Copy)]
pub enum MotionSpec {
    /// Identity map, fixed in time.
    Static,
    /// In-plane sinusoidal deformation with compressed z extent
    /// z = zeta / k (the vortex benchmark map).
    VortexMap {
        a1: f64,
        a2: f64,
        nu: f64,
        omega: f64,
        k: f64,
    },
    /// Cyclic per-axis deformation vanishing on one pair of faces per
    /// component (the viscous-shock benchmark map). The random vertex
    /// perturbation is applied separately at mesh build time.
    ShockMap {
        a1: f64,
        a2: f64,
        a3: f64,
        omega: f64,
    },
    /// Interior bump vanishing on all box faces; compatible with full
    /// periodic identification in every direction.
    PeriodicBump { a: [f64; 3], omega: f64 },
}

impl MotionSpec {
    /// Benchmark parameters for the isentropic-vortex mesh with `k` elements
    /// per in-plane direction.
    pub fn vortex(k: usize) -> Self {
        MotionSpec::VortexMap {
            a1: 0.09,
            a2: 0.06,
            nu: 3.0 * std::f64::consts::PI / 4.0,
            omega: std::f64::consts::PI,
            k: k as f64,
        }
    }

    /// Benchmark parameters for the viscous-shock mesh.
    pub fn shock() -> Self {
        MotionSpec::ShockMap {
            a1: 0.4,
            a2: -0.2,
            a3: 0.3,
            omega: std::f64::consts::PI,
        }
    }

    pub fn periodic_bump() -> Self {
        MotionSpec::PeriodicBump {
            a: [0.08, 0.06, 0.05],
            omega: std::f64::consts::PI,
        }
    }

    /// Physical position of computational point `xi` at time `tau`.
    pub fn map(&self, xi: [f64; 3], tau: f64) -> [f64; 3] {
        match *self {
            MotionSpec::Static => xi,
            MotionSpec::VortexMap { a1, a2, nu, omega, k } => {
                let s = (omega * tau).sin();
                let shape = (nu * xi[0] - std::f64::consts::FRAC_PI_4).cos()
                    * (nu * xi[1] - std::f64::consts::FRAC_PI_4).cos();
                [
                    0.5 * xi[0] + a1 * s * shape,
                    0.5 * xi[1] + a2 * s * shape,
                    xi[2] / k,
                ]
            }
            MotionSpec::ShockMap { a1, a2, a3, omega } => {
                let s = (omega * tau).sin();
                [
                    xi[0] + a1 * s * xi[0] * (xi[1] * xi[1] - 1.0),
                    xi[1] + a2 * s * xi[1] * (xi[2] * xi[2] - 1.0),
                    xi[2] + a3 * s * xi[2] * (xi[0] * xi[0] - 1.0),
                ]
            }
            MotionSpec::PeriodicBump { a, omega } => {
                let s = (omega * tau).sin();
                let shape = (std::f64::consts::PI * xi[0]).sin()
                    * (std::f64::consts::PI * xi[1]).sin()
                    * (std::f64::consts::PI * xi[2]).sin();
                [
                    xi[0] + a[0] * s * shape,
                    xi[1] + a[1] * s * shape,
                    xi[2] + a[2] * s * shape,
                ]
            }
        }
    }

    /// Analytic vertex velocity d(map)/d(tau).
    pub fn velocity(&self, xi: [f64; 3], tau: f64) -> [f64; 3] {
        match *self {
            MotionSpec::Static => [0.0; 3],
            MotionSpec::VortexMap { a1, a2, nu, omega, .. } => {
                let c = omega * (omega * tau).cos();
                let shape = (nu * xi[0] - std::f64::consts::FRAC_PI_4).cos()
                    * (nu * xi[1] - std::f64::consts::FRAC_PI_4).cos();
                [a1 * c * shape, a2 * c * shape, 0.0]
            }
            MotionSpec::ShockMap { a1, a2, a3, omega } => {
                let c = omega * (omega * tau).cos();
                [
                    a1 * c * xi[0] * (xi[1] * xi[1] - 1.0),
                    a2 * c * xi[1] * (xi[2] * xi[2] - 1.0),
                    a3 * c * xi[2] * (xi[0] * xi[0] - 1.0),
                ]
            }
            MotionSpec::PeriodicBump { a, omega } => {
                let c = omega * (omega * tau).cos();
                let shape = (std::f64::consts::PI * xi[0]).sin()
                    * (std::f64::consts::PI * xi[1]).sin()
                    * (std::f64::consts::PI * xi[2]).sin();
                [a[0] * c * shape, a[1] * c * shape, a[2] * c * shape]
            }
        }
    }
}

/// What lies on the other side of an element face. Periodic partners are
/// resolved to their interior element at build time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// Conforming neighbor element (its touching face is the opposite one).
    Interior(usize),
    /// Physical boundary; data imposed weakly from an exact-state callback.
    Dirichlet,
}

/// Face numbering: face `2l` is xi_l = -1 and face `2l+1` is xi_l = +1 for
/// l = 0, 1, 2 (the 1..6 face convention counted from zero).
#[inline]
pub fn face_direction(face: usize) -> usize {
    face / 2
}

/// `false` for the xi = -1 side, `true` for xi = +1.
#[inline]
pub fn face_is_upper(face: usize) -> bool {
    face % 2 == 1
}

#[inline]
pub fn opposite_face(face: usize) -> usize {
    face ^ 1
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub k: [usize; 3],
    pub motion: MotionSpec,
    pub periodic: [bool; 3],
    /// Computational-space vertex coordinates (after any build-time random
    /// perturbation).
    pub vertices: Vec<[f64; 3]>,
    /// Per element, the 8 vertex ids ordered by local corner
    /// (c1, c2, c3) -> c1*4 + c2*2 + c3.
    pub element_vertices: Vec<[usize; 8]>,
    /// Per element, the 6 face links.
    pub faces: Vec<[FaceKind; 6]>,
}

impl Mesh {
    pub fn n_elements(&self) -> usize {
        self.k[0] * self.k[1] * self.k[2]
    }

    #[inline]
    pub fn element_id(&self, e: [usize; 3]) -> usize {
        (e[0] * self.k[1] + e[1]) * self.k[2] + e[2]
    }

    #[inline]
    pub fn element_coords_id(&self, id: usize) -> [usize; 3] {
        let e3 = id % self.k[2];
        let r = id / self.k[2];
        [r / self.k[1], r % self.k[1], e3]
    }

    pub fn neighbor(&self, elem: usize, face: usize) -> FaceKind {
        self.faces[elem][face]
    }

    /// Plain-text dump of vertices and connectivity for debugging.
    pub fn dump(&self) -> String {
        let mut s = format!(
            "mesh {}x{}x{}, periodic {:?}\n",
            self.k[0], self.k[1], self.k[2], self.periodic
        );
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("v {i} {:+.12e} {:+.12e} {:+.12e}\n", v[0], v[1], v[2]));
        }
        for e in 0..self.n_elements() {
            s.push_str(&format!("e {e} verts {:?} faces", self.element_vertices[e]));
            for f in 0..6 {
                match self.faces[e][f] {
                    FaceKind::Interior(n) => s.push_str(&format!(" i{n}")),
                    FaceKind::Dirichlet => s.push_str(" d"),
                }
            }
            s.push('\n');
        }
        s
    }
}

/// Random interior-vertex perturbation applied once at build time in
/// computational space (the randomly-perturbed-grid benchmark).
#[derive(Debug, Clone, Copy)]
pub struct Perturbation {
    /// Fraction of the grid spacing (0.25 in the benchmark).
    pub fraction: f64,
    pub seed: u64,
}

/// Build a K1 x K2 x K3 mesh of the computational box `[-1, 1]^3` with the
/// given motion, periodic flags, and optional vertex perturbation.
/// Deterministic for a fixed seed.
pub fn build_mesh(
    k: [usize; 3],
    motion: MotionSpec,
    periodic: [bool; 3],
    perturbation: Option<Perturbation>,
) -> Result<Mesh> {
    if k.iter().any(|&x| x == 0) {
        return Err(Error::Config("element counts must be >= 1".into()));
    }
    let nv = [k[0] + 1, k[1] + 1, k[2] + 1];
    let vid = |i: [usize; 3]| (i[0] * nv[1] + i[1]) * nv[2] + i[2];
    let mut vertices = Vec::with_capacity(nv[0] * nv[1] * nv[2]);
    for i1 in 0..nv[0] {
        for i2 in 0..nv[1] {
            for i3 in 0..nv[2] {
                vertices.push([
                    -1.0 + 2.0 * i1 as f64 / k[0] as f64,
                    -1.0 + 2.0 * i2 as f64 / k[1] as f64,
                    -1.0 + 2.0 * i3 as f64 / k[2] as f64,
                ]);
            }
        }
    }
    if let Some(pert) = perturbation {
        let mut rng = ChaCha8Rng::seed_from_u64(pert.seed);
        let h = [2.0 / k[0] as f64, 2.0 / k[1] as f64, 2.0 / k[2] as f64];
        for i1 in 0..nv[0] {
            for i2 in 0..nv[1] {
                for i3 in 0..nv[2] {
                    // draw for every vertex so the stream does not depend on
                    // which vertices are movable
                    let mut d;
                    loop {
                        d = [
                            rng.gen_range(-1.0..1.0f64),
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(-1.0..1.0),
                        ];
                        let n2: f64 = d.iter().map(|x| x * x).sum();
                        if n2 > 1e-4 && n2 <= 1.0 {
                            let n = n2.sqrt();
                            d = [d[0] / n, d[1] / n, d[2] / n];
                            break;
                        }
                    }
                    let interior =
                        i1 > 0 && i1 < k[0] && i2 > 0 && i2 < k[1] && i3 > 0 && i3 < k[2];
                    if interior {
                        let v = &mut vertices[vid([i1, i2, i3])];
                        for m in 0..3 {
                            v[m] += pert.fraction * h[m] * d[m];
                        }
                    }
                }
            }
        }
    }

    let n_elem = k[0] * k[1] * k[2];
    let mut element_vertices = Vec::with_capacity(n_elem);
    let mut faces = Vec::with_capacity(n_elem);
    for e1 in 0..k[0] {
        for e2 in 0..k[1] {
            for e3 in 0..k[2] {
                let e = [e1, e2, e3];
                let mut vs = [0usize; 8];
                for c1 in 0..2 {
                    for c2 in 0..2 {
                        for c3 in 0..2 {
                            vs[c1 * 4 + c2 * 2 + c3] = vid([e1 + c1, e2 + c2, e3 + c3]);
                        }
                    }
                }
                element_vertices.push(vs);

                let mut fl = [FaceKind::Dirichlet; 6];
                for dir in 0..3 {
                    for upper in 0..2 {
                        let face = 2 * dir + upper;
                        let mut ne = e;
                        let link = if upper == 1 {
                            if e[dir] + 1 < k[dir] {
                                ne[dir] += 1;
                                Some(ne)
                            } else if periodic[dir] {
                                ne[dir] = 0;
                                Some(ne)
                            } else {
                                None
                            }
                        } else if e[dir] > 0 {
                            ne[dir] -= 1;
                            Some(ne)
                        } else if periodic[dir] {
                            ne[dir] = k[dir] - 1;
                            Some(ne)
                        } else {
                            None
                        };
                        fl[face] = match link {
                            Some(nc) => {
                                FaceKind::Interior((nc[0] * k[1] + nc[1]) * k[2] + nc[2])
                            }
                            None => FaceKind::Dirichlet,
                        };
                    }
                }
                faces.push(fl);
            }
        }
    }

    Ok(Mesh {
        k,
        motion,
        periodic,
        vertices,
        element_vertices,
        faces,
    })
}

/// Per-element geometric data at one time instant: nodal coordinates and
/// velocities, conservative metric terms a_lm = J dxi_l/dx_m, mesh-velocity
/// metrics b_l = J dxi_l/dt, and the determinant Jacobian.
#[derive(Debug, Clone)]
pub struct ElementGeometry {
    pub layout: ElementLayout,
    /// x[m][node], physical coordinates.
    pub x: [Vec<f64>; 3],
    /// xdot[m][node], mesh velocity.
    pub xdot: [Vec<f64>; 3],
    /// a[l][m][node].
    pub a: [[Vec<f64>; 3]; 3],
    /// b[l][node].
    pub b: [Vec<f64>; 3],
    /// Determinant Jacobian per node.
    pub jdet: Vec<f64>,
}

/// Nodal coordinates and velocities of one element: vertices moved by the
/// motion map, interior nodes by trilinear interpolation (straight-sided
/// transfinite interpolation of the 8 vertices and their analytic
/// velocities).
pub fn element_coordinates(
    mesh: &Mesh,
    elem: usize,
    op: &Operator1D,
    tau: f64,
) -> ([Vec<f64>; 3], [Vec<f64>; 3]) {
    let layout = ElementLayout::new(op.n());
    let total = layout.total();
    let mut x: [Vec<f64>; 3] = [vec![0.0; total], vec![0.0; total], vec![0.0; total]];
    let mut xdot: [Vec<f64>; 3] = [vec![0.0; total], vec![0.0; total], vec![0.0; total]];
    let mut vx = [[0.0; 3]; 8];
    let mut vv = [[0.0; 3]; 8];
    for c in 0..8 {
        let xi = mesh.vertices[mesh.element_vertices[elem][c]];
        vx[c] = mesh.motion.map(xi, tau);
        vv[c] = mesh.motion.velocity(xi, tau);
    }
    let nodes = &op.nodeset.nodes;
    let n = op.n();
    for i1 in 0..n {
        let w1 = [(1.0 - nodes[i1]) * 0.5, (1.0 + nodes[i1]) * 0.5];
        for i2 in 0..n {
            let w2 = [(1.0 - nodes[i2]) * 0.5, (1.0 + nodes[i2]) * 0.5];
            for i3 in 0..n {
                let w3 = [(1.0 - nodes[i3]) * 0.5, (1.0 + nodes[i3]) * 0.5];
                let idx = layout.idx(i1, i2, i3);
                for c1 in 0..2 {
                    for c2 in 0..2 {
                        for c3 in 0..2 {
                            let w = w1[c1] * w2[c2] * w3[c3];
                            let c = c1 * 4 + c2 * 2 + c3;
                            for m in 0..3 {
                                x[m][idx] += w * vx[c][m];
                                xdot[m][idx] += w * vv[c][m];
                            }
                        }
                    }
                }
            }
        }
    }
    (x, xdot)
}

/// Conservative (curl-form) metric terms and determinant Jacobian from the
/// nodal coordinates. The curl form makes the spatial discrete GCL hold to
/// roundoff because tensor-product derivatives in different directions
/// commute.
pub fn compute_metrics(x: &[Vec<f64>; 3], op: &Operator1D) -> ([[Vec<f64>; 3]; 3], Vec<f64>) {
    let layout = ElementLayout::new(op.n());
    let total = layout.total();
    // xd[l][m] = D_l x_m
    let mut xd: [[Vec<f64>; 3]; 3] = Default::default();
    for l in 0..3 {
        for m in 0..3 {
            let mut out = vec![0.0; total];
            apply_line_derivative(op, layout, &x[m], l, &mut out);
            xd[l][m] = out;
        }
    }
    let mut jdet = vec![0.0; total];
    for i in 0..total {
        let g = |l: usize, m: usize| xd[l][m][i];
        jdet[i] = g(0, 0) * (g(1, 1) * g(2, 2) - g(2, 1) * g(1, 2))
            - g(1, 0) * (g(0, 1) * g(2, 2) - g(2, 1) * g(0, 2))
            + g(2, 0) * (g(0, 1) * g(1, 2) - g(1, 1) * g(0, 2));
    }

    let mut a: [[Vec<f64>; 3]; 3] = Default::default();
    let mut tmp = vec![0.0; total];
    let mut da = vec![0.0; total];
    let mut db = vec![0.0; total];
    for l in 0..3 {
        let l1 = (l + 1) % 3;
        let l2 = (l + 2) % 3;
        for m in 0..3 {
            let m1 = (m + 1) % 3;
            let m2 = (m + 2) % 3;
            // a_lm = D_{l1}( x_{m1} .* D_{l2} x_{m2} ) - D_{l2}( x_{m1} .* D_{l1} x_{m2} )
            for i in 0..total {
                tmp[i] = x[m1][i] * xd[l2][m2][i];
            }
            apply_line_derivative(op, layout, &tmp, l1, &mut da);
            for i in 0..total {
                tmp[i] = x[m1][i] * xd[l1][m2][i];
            }
            apply_line_derivative(op, layout, &tmp, l2, &mut db);
            let mut field = vec![0.0; total];
            for i in 0..total {
                field[i] = da[i] - db[i];
            }
            a[l][m] = field;
        }
    }
    (a, jdet)
}

/// Mesh-velocity metrics b_l = -sum_m a_lm xdot_m (from inverting the
/// space-time Jacobian).
pub fn mesh_velocity_metrics(a: &[[Vec<f64>; 3]; 3], xdot: &[Vec<f64>; 3]) -> [Vec<f64>; 3] {
    let total = xdot[0].len();
    let mut b: [Vec<f64>; 3] = [vec![0.0; total], vec![0.0; total], vec![0.0; total]];
    for l in 0..3 {
        for i in 0..total {
            b[l][i] =
                -(a[l][0][i] * xdot[0][i] + a[l][1][i] * xdot[1][i] + a[l][2][i] * xdot[2][i]);
        }
    }
    b
}

/// Time rate of the integrated Jacobian from the discrete temporal GCL:
/// dJ/dtau = -sum_l D_l b_l. Integrated alongside the state by the same
/// Runge-Kutta scheme.
pub fn integrated_jacobian_rate(b: &[Vec<f64>; 3], op: &Operator1D) -> Vec<f64> {
    let layout = ElementLayout::new(op.n());
    let total = layout.total();
    let mut rate = vec![0.0; total];
    let mut tmp = vec![0.0; total];
    for l in 0..3 {
        apply_line_derivative(op, layout, &b[l], l, &mut tmp);
        for i in 0..total {
            rate[i] -= tmp[i];
        }
    }
    rate
}

/// Build the full geometry of one element at time `tau`.
pub fn element_geometry(mesh: &Mesh, elem: usize, op: &Operator1D, tau: f64) -> ElementGeometry {
    let (x, xdot) = element_coordinates(mesh, elem, op, tau);
    let (a, jdet) = compute_metrics(&x, op);
    let b = mesh_velocity_metrics(&a, &xdot);
    ElementGeometry {
        layout: ElementLayout::new(op.n()),
        x,
        xdot,
        a,
        b,
        jdet,
    }
}

impl ElementGeometry {
    /// Verify J > 0 at every node; the error carries the first offender.
    pub fn check_jacobian(&self, elem: usize, tau: f64) -> Result<()> {
        for (i, &j) in self.jdet.iter().enumerate() {
            if !(j > 0.0) {
                return Err(Error::MeshTangled {
                    element: elem,
                    node: i,
                    tau,
                    jacobian: j,
                    x: [self.x[0][i], self.x[1][i], self.x[2][i]],
                });
            }
        }
        Ok(())
    }

    /// Max-norm spatial GCL residual max_m ||sum_l D_l a_lm||_inf.
    pub fn gcl_residual(&self, op: &Operator1D) -> f64 {
        let layout = self.layout;
        let total = layout.total();
        let mut worst = 0.0f64;
        let mut tmp = vec![0.0; total];
        for m in 0..3 {
            let mut acc = vec![0.0; total];
            for l in 0..3 {
                apply_line_derivative(op, layout, &self.a[l][m], l, &mut tmp);
                for i in 0..total {
                    acc[i] += tmp[i];
                }
            }
            for v in &acc {
                worst = worst.max(v.abs());
            }
        }
        worst
    }

    pub fn max_metric(&self) -> f64 {
        let mut worst = 0.0f64;
        for l in 0..3 {
            for m in 0..3 {
                for v in &self.a[l][m] {
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }
}

/// Volume node indices on a face, ordered by the two transverse indices
/// (lower direction first). The partner node on the neighbor's opposite
/// face sits at the same position in this ordering.
pub fn face_nodes(layout: ElementLayout, face: usize) -> Vec<usize> {
    let n = layout.n;
    let dir = face_direction(face);
    let fixed = if face_is_upper(face) { n - 1 } else { 0 };
    let mut indices = Vec::with_capacity(n * n);
    let (t1, t2) = match dir {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    for a in 0..n {
        for b in 0..n {
            let mut ijk = [0; 3];
            ijk[dir] = fixed;
            ijk[t1] = a;
            ijk[t2] = b;
            indices.push(layout.idx(ijk[0], ijk[1], ijk[2]));
        }
    }
    indices
}

/// One row of a GCL audit: worst spatial residual relative to the metric
/// magnitude, plus the Jacobian minimum.
pub struct GclAuditRow {
    pub tau: f64,
    pub element: usize,
    pub residual_rel: f64,
    pub min_jdet: f64,
}

/// Audit the spatial discrete GCL over every element at the given times.
pub fn gcl_audit(mesh: &Mesh, op: &Operator1D, taus: &[f64]) -> Vec<GclAuditRow> {
    let mut rows = Vec::new();
    for &tau in taus {
        for e in 0..mesh.n_elements() {
            let geom = element_geometry(mesh, e, op, tau);
            let scale = geom.max_metric().max(1e-300);
            let res = geom.gcl_residual(op) / scale;
            let minj = geom.jdet.iter().cloned().fold(f64::INFINITY, f64::min);
            rows.push(GclAuditRow {
                tau,
                element: e,
                residual_rel: res,
                min_jdet: minj,
            });
        }
    }
    rows
}
