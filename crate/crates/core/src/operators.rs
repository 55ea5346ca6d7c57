//! One-dimensional diagonal-norm SBP collocation operators on
//! Legendre-Gauss-Lobatto nodes and their line-wise tensor-product
//! application on hexahedral elements.
//!
//! Operators are immutable after construction and shared read-only between
//! workers; all elements of a run use the same operator set per degree.

use crate::{Error, Result};

/// Maximum supported polynomial degree for the LGL node build.
pub const MAX_DEGREE: usize = 16;

/// LGL nodes and quadrature weights on `[-1, 1]` for degree `p`.
#[derive(Debug, Clone)]
pub struct NodeSet1D {
    pub degree: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Diagonal-norm SBP operator: `D = H^{-1} Q`, `Q + Q^T = E`, with boundary
/// extrapolation reducing to endpoint selection at LGL nodes.
#[derive(Debug, Clone)]
pub struct Operator1D {
    pub nodeset: NodeSet1D,
    /// Diagonal of the norm matrix (the LGL weights).
    pub h: Vec<f64>,
    /// Dense differentiation matrix, row-major `(p+1) x (p+1)`.
    pub d: Vec<f64>,
    /// `Q = H D`, row-major.
    pub q: Vec<f64>,
}

fn legendre_with_derivs(p: usize, x: f64) -> (f64, f64, f64) {
    // P_p, P'_p, P''_p by the three-term recurrence and the Legendre ODE.
    let mut pm1 = 1.0;
    let mut pcur = x;
    if p == 0 {
        return (1.0, 0.0, 0.0);
    }
    for k in 1..p {
        let pnext = ((2 * k + 1) as f64 * x * pcur - k as f64 * pm1) / (k + 1) as f64;
        pm1 = pcur;
        pcur = pnext;
    }
    let pf = p as f64;
    let denom = 1.0 - x * x;
    let dp = if denom.abs() > 1e-30 {
        pf * (pm1 - x * pcur) / denom
    } else {
        // endpoint limit: P'_p(+-1) = (+-1)^{p-1} p(p+1)/2
        let sign = if x > 0.0 { 1.0 } else { (-1.0f64).powi(p as i32 - 1) };
        sign * pf * (pf + 1.0) / 2.0
    };
    let ddp = if denom.abs() > 1e-30 {
        (2.0 * x * dp - pf * (pf + 1.0) * pcur) / denom
    } else {
        0.0
    };
    (pcur, dp, ddp)
}

/// Build the LGL node set for degree `p` (Newton on the Legendre derivative,
/// Chebyshev-Lobatto initial guesses, tolerance 1e-15).
pub fn build_lgl_nodeset(p: usize) -> Result<NodeSet1D> {
    if p < 1 || p > MAX_DEGREE {
        return Err(Error::Config(format!(
            "polynomial degree {p} out of supported range 1..={MAX_DEGREE}"
        )));
    }
    let n = p + 1;
    let mut nodes = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[p] = 1.0;
    for i in 1..p {
        let mut x = -(std::f64::consts::PI * i as f64 / p as f64).cos();
        for _ in 0..200 {
            let (_, dp, ddp) = legendre_with_derivs(p, x);
            let step = dp / ddp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
    }
    // enforce exact symmetry about the origin
    for i in 0..n / 2 {
        let s = 0.5 * (nodes[i] - nodes[p - i]);
        nodes[i] = s;
        nodes[p - i] = -s;
    }
    if n % 2 == 1 {
        nodes[p / 2] = 0.0;
    }
    let pf = p as f64;
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let (pp, _, _) = legendre_with_derivs(p, nodes[i]);
        weights[i] = 2.0 / (pf * (pf + 1.0) * pp * pp);
    }
    for i in 0..n / 2 {
        let w = 0.5 * (weights[i] + weights[p - i]);
        weights[i] = w;
        weights[p - i] = w;
    }
    Ok(NodeSet1D {
        degree: p,
        nodes,
        weights,
    })
}

/// Build the degree-`p` LGL SBP operator. `D` is the exact Lagrange-basis
/// differentiation matrix at the nodes (barycentric form).
pub fn build_operator(p: usize) -> Result<Operator1D> {
    let nodeset = build_lgl_nodeset(p)?;
    let n = p + 1;
    let x = &nodeset.nodes;
    // barycentric weights
    let mut bw = vec![1.0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                bw[i] *= x[i] - x[j];
            }
        }
        bw[i] = 1.0 / bw[i];
    }
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (bw[j] / bw[i]) / (x[i] - x[j]);
                d[i * n + j] = v;
                diag -= v;
            }
        }
        d[i * n + i] = diag;
    }
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            q[i * n + j] = nodeset.weights[i] * d[i * n + j];
        }
    }
    Ok(Operator1D {
        h: nodeset.weights.clone(),
        nodeset,
        d,
        q,
    })
}

impl Operator1D {
    pub fn n(&self) -> usize {
        self.nodeset.degree + 1
    }

    #[inline]
    pub fn d_entry(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n() + j]
    }

    /// Plain-text dump of D, H and E for operator audits.
    pub fn dump(&self) -> String {
        let n = self.n();
        let mut s = format!("LGL SBP operator, p = {}\n", self.nodeset.degree);
        s.push_str("nodes:");
        for v in &self.nodeset.nodes {
            s.push_str(&format!(" {v:+.16e}"));
        }
        s.push_str("\nH diag:");
        for v in &self.h {
            s.push_str(&format!(" {v:+.16e}"));
        }
        s.push_str("\nD:\n");
        for i in 0..n {
            for j in 0..n {
                s.push_str(&format!(" {:+.16e}", self.d[i * n + j]));
            }
            s.push('\n');
        }
        s.push_str("E = Q + Q^T:\n");
        for i in 0..n {
            for j in 0..n {
                s.push_str(&format!(" {:+.16e}", self.q[i * n + j] + self.q[j * n + i]));
            }
            s.push('\n');
        }
        s
    }
}

/// Tensor-product node indexing for one hexahedral element with `n = p+1`
/// nodes per direction, ordered with the xi_3 index varying fastest, then
/// xi_2, then xi_1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementLayout {
    pub n: usize,
}

impl ElementLayout {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn idx(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n + i2) * self.n + i3
    }

    #[inline]
    pub fn decompose(&self, idx: usize) -> [usize; 3] {
        let i3 = idx % self.n;
        let r = idx / self.n;
        [r / self.n, r % self.n, i3]
    }

    /// Memory stride between consecutive nodes of a line in `direction`
    /// (0, 1 or 2).
    #[inline]
    pub fn stride(&self, direction: usize) -> usize {
        match direction {
            0 => self.n * self.n,
            1 => self.n,
            _ => 1,
        }
    }

    /// Index of the first node of each tensor line in `direction`.
    pub fn line_starts(&self, direction: usize) -> Vec<usize> {
        let n = self.n;
        let mut starts = Vec::with_capacity(n * n);
        match direction {
            0 => {
                for i2 in 0..n {
                    for i3 in 0..n {
                        starts.push(i2 * n + i3);
                    }
                }
            }
            1 => {
                for i1 in 0..n {
                    for i3 in 0..n {
                        starts.push(i1 * n * n + i3);
                    }
                }
            }
            _ => {
                for i1 in 0..n {
                    for i2 in 0..n {
                        starts.push((i1 * n + i2) * n);
                    }
                }
            }
        }
        starts
    }
}

/// Apply `D` along every tensor line of `field` in the given direction
/// (0, 1 or 2), writing the derivative into `out`.
pub fn apply_line_derivative(
    op: &Operator1D,
    layout: ElementLayout,
    field: &[f64],
    direction: usize,
    out: &mut [f64],
) {
    let n = op.n();
    assert_eq!(layout.n, n, "operator size does not match element layout");
    assert_eq!(field.len(), layout.total(), "field length mismatch");
    assert_eq!(out.len(), layout.total(), "output length mismatch");
    let stride = layout.stride(direction);
    for &s in &layout.line_starts(direction) {
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += op.d[i * n + j] * field[s + j * stride];
            }
            out[s + i * stride] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
        v.into_iter().fold(0.0, |a, b| a.max(b.abs()))
    }

    #[test]
    fn lgl_small_degrees_match_analytic_lobatto() {
        let ns = build_lgl_nodeset(1).unwrap();
        assert_eq!(ns.nodes, vec![-1.0, 1.0]);
        assert_eq!(ns.weights, vec![1.0, 1.0]);

        let ns = build_lgl_nodeset(2).unwrap();
        assert!(max_abs(ns.nodes.iter().zip([-1.0, 0.0, 1.0]).map(|(a, b)| a - b)) < 1e-15);
        assert!(
            max_abs(
                ns.weights
                    .iter()
                    .zip([1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0])
                    .map(|(a, b)| a - b)
            ) < 1e-15
        );

        let ns = build_lgl_nodeset(3).unwrap();
        let r5 = 1.0 / 5.0f64.sqrt();
        assert!(max_abs(ns.nodes.iter().zip([-1.0, -r5, r5, 1.0]).map(|(a, b)| a - b)) < 1e-15);
        assert!(
            max_abs(
                ns.weights
                    .iter()
                    .zip([1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0])
                    .map(|(a, b)| a - b)
            ) < 1e-15
        );
    }

    #[test]
    fn degree_out_of_range_is_config_error() {
        assert!(matches!(build_lgl_nodeset(0), Err(Error::Config(_))));
        assert!(matches!(build_lgl_nodeset(17), Err(Error::Config(_))));
    }

    #[test]
    fn weights_sum_and_quadrature_exactness() {
        for p in 1..=MAX_DEGREE {
            let ns = build_lgl_nodeset(p).unwrap();
            let sum: f64 = ns.weights.iter().sum();
            assert!((sum - 2.0).abs() < 1e-14, "p={p} weight sum {sum}");
            assert!(ns.weights.iter().all(|&w| w > 0.0));
            for i in 1..=p {
                assert!(ns.nodes[i] > ns.nodes[i - 1]);
            }
            // exact for degree <= 2p-1
            for k in 0..=(2 * p - 1) {
                let quad: f64 = ns
                    .nodes
                    .iter()
                    .zip(&ns.weights)
                    .map(|(x, w)| w * x.powi(k as i32))
                    .sum();
                let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
                assert!((quad - exact).abs() < 1e-12, "p={p} k={k}: {quad} vs {exact}");
            }
        }
    }

    #[test]
    fn sbp_identity_and_boundary_matrix() {
        for p in 1..=8 {
            let op = build_operator(p).unwrap();
            let n = op.n();
            for i in 0..n {
                for j in 0..n {
                    let e = op.q[i * n + j] + op.q[j * n + i];
                    let expect = if i == 0 && j == 0 {
                        -1.0
                    } else if i == p && j == p {
                        1.0
                    } else {
                        0.0
                    };
                    assert!((e - expect).abs() < 1e-13, "p={p} E[{i}][{j}] = {e}");
                }
            }
        }
    }

    #[test]
    fn monomial_exactness() {
        for p in 1..=8 {
            let op = build_operator(p).unwrap();
            let n = op.n();
            for k in 0..=p {
                let f: Vec<f64> = op.nodeset.nodes.iter().map(|x| x.powi(k as i32)).collect();
                for i in 0..n {
                    let mut acc = 0.0;
                    for j in 0..n {
                        acc += op.d[i * n + j] * f[j];
                    }
                    let exact = if k == 0 {
                        0.0
                    } else {
                        k as f64 * op.nodeset.nodes[i].powi(k as i32 - 1)
                    };
                    assert!((acc - exact).abs() < 1e-11, "p={p} k={k} node {i}: {acc} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn d_matrix_p1_is_half_stencil() {
        let op = build_operator(1).unwrap();
        let expect = [-0.5, 0.5, -0.5, 0.5];
        for (a, b) in op.d.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn discrete_integration_by_parts_for_random_polynomials() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in 1..=8 {
            let op = build_operator(p).unwrap();
            let n = op.n();
            for _ in 0..20 {
                let cu: Vec<f64> = (0..=p).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let cv: Vec<f64> = (0..=p).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let eval = |c: &[f64], x: f64| c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck);
                let u: Vec<f64> = op.nodeset.nodes.iter().map(|&x| eval(&cu, x)).collect();
                let v: Vec<f64> = op.nodeset.nodes.iter().map(|&x| eval(&cv, x)).collect();
                let mut lhs = 0.0;
                for i in 0..n {
                    let mut du = 0.0;
                    let mut dv = 0.0;
                    for j in 0..n {
                        du += op.d[i * n + j] * u[j];
                        dv += op.d[i * n + j] * v[j];
                    }
                    lhs += op.h[i] * (u[i] * dv + v[i] * du);
                }
                let rhs = u[n - 1] * v[n - 1] - u[0] * v[0];
                assert!((lhs - rhs).abs() < 1e-12, "p={p}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn tensor_line_derivative_of_separable_field() {
        for p in [2usize, 4] {
            let op = build_operator(p).unwrap();
            let layout = ElementLayout::new(op.n());
            let xs = &op.nodeset.nodes;
            // f(x1) g(x2) h(x3), each factor of degree <= p
            let f = |x: f64| 1.0 + x + 0.5 * x * x;
            let df = |x: f64| 1.0 + x;
            let g = |x: f64| 2.0 - x * x;
            let dg = |x: f64| -2.0 * x;
            let hf = |x: f64| 0.5 + 0.25 * x;
            let dh = |_: f64| 0.25;

            let mut field = vec![0.0; layout.total()];
            for i1 in 0..op.n() {
                for i2 in 0..op.n() {
                    for i3 in 0..op.n() {
                        field[layout.idx(i1, i2, i3)] = f(xs[i1]) * g(xs[i2]) * hf(xs[i3]);
                    }
                }
            }
            let mut out = vec![0.0; layout.total()];
            for dir in 0..3 {
                apply_line_derivative(&op, layout, &field, dir, &mut out);
                for i1 in 0..op.n() {
                    for i2 in 0..op.n() {
                        for i3 in 0..op.n() {
                            let (a, b, c) = (xs[i1], xs[i2], xs[i3]);
                            let exact = match dir {
                                0 => df(a) * g(b) * hf(c),
                                1 => f(a) * dg(b) * hf(c),
                                _ => f(a) * g(b) * dh(c),
                            };
                            let got = out[layout.idx(i1, i2, i3)];
                            assert!((got - exact).abs() < 1e-10, "dir {dir}: {got} vs {exact}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn constant_and_linear_fields() {
        let op = build_operator(5).unwrap();
        let layout = ElementLayout::new(op.n());
        let ones = vec![1.0; layout.total()];
        let mut out = vec![0.0; layout.total()];
        for dir in 0..3 {
            apply_line_derivative(&op, layout, &ones, dir, &mut out);
            assert!(out.iter().all(|v| v.abs() < 1e-13));
        }
        // field = xi_2 at nodes -> all ones in direction 1
        let mut field = vec![0.0; layout.total()];
        for i1 in 0..op.n() {
            for i2 in 0..op.n() {
                for i3 in 0..op.n() {
                    field[layout.idx(i1, i2, i3)] = op.nodeset.nodes[i2];
                }
            }
        }
        apply_line_derivative(&op, layout, &field, 1, &mut out);
        assert!(out.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }
}
