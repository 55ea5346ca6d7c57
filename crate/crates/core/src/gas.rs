//! Thermodynamics of a calorically perfect gas: conservative / primitive /
//! entropy-variable transforms, entropy function and potentials, the
//! symmetrizing Jacobian dU/dW, Roe averaging, and entropy-scaled
//! eigen-decompositions of the directional flux Jacobian.
//!
//! Everything here is a pure function of value types and safe to call
//! concurrently.

use crate::{Error, Result};

/// Gas parameters. Defaults: gamma = 1.4, R = 1, Pr = 0.75, mu = 0,
/// reference temperature and density 1 (the entropy origin).
#[derive(Debug, Clone, Copy)]
pub struct GasParams {
    pub gamma: f64,
    pub r_gas: f64,
    pub prandtl: f64,
    pub mu: f64,
    pub t_ref: f64,
    pub rho_ref: f64,
}

impl Default for GasParams {
    fn default() -> Self {
        Self {
            gamma: 1.4,
            r_gas: 1.0,
            prandtl: 0.75,
            mu: 0.0,
            t_ref: 1.0,
            rho_ref: 1.0,
        }
    }
}

impl GasParams {
    pub fn cv(&self) -> f64 {
        self.r_gas / (self.gamma - 1.0)
    }
    pub fn cp(&self) -> f64 {
        self.gamma * self.r_gas / (self.gamma - 1.0)
    }
    /// Thermal conductivity kappa = cp mu / Pr.
    pub fn kappa(&self) -> f64 {
        self.cp() * self.mu / self.prandtl
    }
    pub fn sound_speed(&self, temperature: f64) -> f64 {
        (self.gamma * self.r_gas * temperature).sqrt()
    }
}

/// Conservative variables at one node: density, momentum, total energy per
/// unit volume.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State5 {
    pub rho: f64,
    pub mom: [f64; 3],
    pub rho_e: f64,
}

impl State5 {
    pub fn from_primitive(rho: f64, v: [f64; 3], temperature: f64, g: &GasParams) -> Self {
        let ke = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        Self {
            rho,
            mom: [rho * v[0], rho * v[1], rho * v[2]],
            rho_e: rho * (g.cv() * temperature + ke),
        }
    }

    #[inline]
    pub fn as_array(&self) -> [f64; 5] {
        [self.rho, self.mom[0], self.mom[1], self.mom[2], self.rho_e]
    }

    #[inline]
    pub fn from_array(a: [f64; 5]) -> Self {
        Self {
            rho: a[0],
            mom: [a[1], a[2], a[3]],
            rho_e: a[4],
        }
    }

    #[inline]
    pub fn axpy(&mut self, c: f64, other: &State5) {
        self.rho += c * other.rho;
        for m in 0..3 {
            self.mom[m] += c * other.mom[m];
        }
        self.rho_e += c * other.rho_e;
    }

    #[inline]
    pub fn scale(&mut self, c: f64) {
        self.rho *= c;
        for m in 0..3 {
            self.mom[m] *= c;
        }
        self.rho_e *= c;
    }
}

/// Entropy variables W = dS/dU (S = -rho s). W[4] = -1/T < 0 for admissible
/// states.
pub type EntropyVars5 = [f64; 5];

/// Primitive quantities derived from a conservative state.
#[derive(Debug, Clone, Copy)]
pub struct Primitives {
    pub rho: f64,
    pub v: [f64; 3],
    pub temperature: f64,
    pub pressure: f64,
    /// Specific thermodynamic entropy (zero at the reference state).
    pub s: f64,
    /// Specific total enthalpy cp T + |V|^2/2.
    pub total_enthalpy: f64,
}

/// Decode a conservative state. Errors if rho <= 0 or T <= 0.
pub fn primitive_from_state(u: &State5, g: &GasParams) -> Result<Primitives> {
    let rho = u.rho;
    if !(rho > 0.0) {
        return Err(Error::Inadmissible {
            rho,
            temperature: f64::NAN,
        });
    }
    let v = [u.mom[0] / rho, u.mom[1] / rho, u.mom[2] / rho];
    let ke = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    let temperature = (u.rho_e / rho - ke) / g.cv();
    if !(temperature > 0.0) {
        return Err(Error::Inadmissible { rho, temperature });
    }
    let pressure = rho * g.r_gas * temperature;
    let s = g.r_gas / (g.gamma - 1.0) * (temperature / g.t_ref).ln()
        - g.r_gas * (rho / g.rho_ref).ln();
    Ok(Primitives {
        rho,
        v,
        temperature,
        pressure,
        s,
        total_enthalpy: g.cp() * temperature + ke,
    })
}

/// Mathematical entropy S = -rho s and its flux F_m = -rho s V_m.
pub fn entropy_and_flux(u: &State5, g: &GasParams) -> Result<(f64, [f64; 3])> {
    let p = primitive_from_state(u, g)?;
    let s_math = -p.rho * p.s;
    Ok((s_math, [s_math * p.v[0], s_math * p.v[1], s_math * p.v[2]]))
}

pub(crate) fn entropy_vars_from_prim(p: &Primitives, g: &GasParams) -> EntropyVars5 {
    let t = p.temperature;
    let ke = 0.5 * (p.v[0] * p.v[0] + p.v[1] * p.v[1] + p.v[2] * p.v[2]);
    [
        g.cp() - p.s - ke / t,
        p.v[0] / t,
        p.v[1] / t,
        p.v[2] / t,
        -1.0 / t,
    ]
}

/// Entropy variables W = dS/dU.
pub fn entropy_vars(u: &State5, g: &GasParams) -> Result<EntropyVars5> {
    let p = primitive_from_state(u, g)?;
    Ok(entropy_vars_from_prim(&p, g))
}

/// Closed-form inverse of the entropy-variable map.
pub fn state_from_entropy_vars(w: &EntropyVars5, g: &GasParams) -> Result<State5> {
    if !(w[4] < 0.0) {
        return Err(Error::Inadmissible {
            rho: f64::NAN,
            temperature: -1.0 / w[4],
        });
    }
    let t = -1.0 / w[4];
    let v = [t * w[1], t * w[2], t * w[3]];
    let ke = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    let s = g.cp() - w[0] - ke / t;
    let rho = g.rho_ref * ((g.cv() * (t / g.t_ref).ln() - s) / g.r_gas).exp();
    Ok(State5::from_primitive(rho, v, t, g))
}

/// Entropy potential phi = W.U - S and potential fluxes psi_m = W.F_m - F_m.
/// In closed form phi = R rho and psi_m = R rho V_m.
pub fn potentials(u: &State5, g: &GasParams) -> Result<(f64, [f64; 3])> {
    let p = primitive_from_state(u, g)?;
    let phi = g.r_gas * p.rho;
    Ok((
        phi,
        [phi * p.v[0], phi * p.v[1], phi * p.v[2]],
    ))
}

/// Symmetric positive-definite Jacobian dU/dW, row-major.
pub fn du_dw(u: &State5, g: &GasParams) -> Result<[[f64; 5]; 5]> {
    let p = primitive_from_state(u, g)?;
    let v = p.v;
    let t = p.temperature;
    let ke = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    let e = g.cv() * t + ke;
    let ht = p.total_enthalpy;
    let rt = g.r_gas * t;
    let c = p.rho / g.r_gas;
    let mut a = [[0.0; 5]; 5];
    a[0][0] = c;
    for m in 0..3 {
        a[0][1 + m] = c * v[m];
        a[1 + m][0] = c * v[m];
        a[1 + m][4] = c * ht * v[m];
        a[4][1 + m] = c * ht * v[m];
        for j in 0..3 {
            a[1 + m][1 + j] = c * v[m] * v[j];
        }
        a[1 + m][1 + m] += c * rt;
    }
    a[0][4] = c * e;
    a[4][0] = c * e;
    a[4][4] = c * (e * e + rt * (g.cv() * t + 2.0 * ke));
    Ok(a)
}

/// Roe average of two states: sqrt(rho)-weighted velocity and total
/// enthalpy, geometric-mean density, temperature recovered from the averaged
/// enthalpy.
pub fn roe_average(ul: &State5, ur: &State5, g: &GasParams) -> Result<State5> {
    let pl = primitive_from_state(ul, g)?;
    let pr = primitive_from_state(ur, g)?;
    let wl = pl.rho.sqrt();
    let wr = pr.rho.sqrt();
    let rho = wl * wr;
    let inv = 1.0 / (wl + wr);
    let v = [
        (wl * pl.v[0] + wr * pr.v[0]) * inv,
        (wl * pl.v[1] + wr * pr.v[1]) * inv,
        (wl * pl.v[2] + wr * pr.v[2]) * inv,
    ];
    let ht = (wl * pl.total_enthalpy + wr * pr.total_enthalpy) * inv;
    let ke = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    let t = (ht - ke) / g.cp();
    if !(t > 0.0) {
        return Err(Error::Inadmissible { rho, temperature: t });
    }
    Ok(State5::from_primitive(rho, v, t, g))
}

/// Entropy-scaled eigensystem of the metric-weighted directional flux
/// Jacobian: columns of `y` satisfy Y Lambda Y^{-1} = dF_n/dU and
/// Y Y^T = dU/dW (Merriam scaling). `normal` is the metric-weighted face
/// normal (not necessarily unit); `normal_speed` is an additive mesh-motion
/// contribution to every eigenvalue.
#[derive(Debug, Clone, Copy)]
pub struct ScaledEigensystem {
    /// Columns are the scaled eigenvectors.
    pub y: [[f64; 5]; 5],
    pub lambda: [f64; 5],
}

impl ScaledEigensystem {
    /// Apply Y diag(f(lambda)) Y^T to a 5-vector without forming the matrix.
    pub fn apply_modal(&self, diag: &[f64; 5], x: &[f64; 5]) -> [f64; 5] {
        let mut out = [0.0; 5];
        for k in 0..5 {
            let col = &self.y[k];
            let mut t = 0.0;
            for i in 0..5 {
                t += col[i] * x[i];
            }
            t *= diag[k];
            for i in 0..5 {
                out[i] += t * col[i];
            }
        }
        out
    }

    pub fn abs_lambda(&self) -> [f64; 5] {
        let mut a = [0.0; 5];
        for k in 0..5 {
            a[k] = self.lambda[k].abs();
        }
        a
    }
}

pub fn entropy_scaled_eigensystem(
    u: &State5,
    normal: [f64; 3],
    normal_speed: f64,
    g: &GasParams,
) -> Result<ScaledEigensystem> {
    let p = primitive_from_state(u, g)?;
    let nn = (normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]).sqrt();
    assert!(nn > 0.0, "entropy_scaled_eigensystem: zero-length normal");
    let nh = [normal[0] / nn, normal[1] / nn, normal[2] / nn];

    // orthonormal tangents; pivot on the smallest normal component
    let pivot = {
        let a = [nh[0].abs(), nh[1].abs(), nh[2].abs()];
        if a[0] <= a[1] && a[0] <= a[2] {
            0
        } else if a[1] <= a[2] {
            1
        } else {
            2
        }
    };
    let mut e = [0.0; 3];
    e[pivot] = 1.0;
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let mut t1 = cross(nh, e);
    let t1n = (t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]).sqrt();
    for m in 0..3 {
        t1[m] /= t1n;
    }
    let t2 = cross(nh, t1);

    let v = p.v;
    let c = g.sound_speed(p.temperature);
    let ht = p.total_enthalpy;
    let un = v[0] * nh[0] + v[1] * nh[1] + v[2] * nh[2];
    let ut1 = v[0] * t1[0] + v[1] * t1[1] + v[2] * t1[2];
    let ut2 = v[0] * t2[0] + v[1] * t2[1] + v[2] * t2[2];
    let ke = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);

    let tau_ac = (p.rho / (2.0 * g.gamma * g.r_gas)).sqrt();
    let tau_s = (p.rho * (g.gamma - 1.0) / (g.gamma * g.r_gas)).sqrt();
    let tau_t = (p.rho * p.temperature).sqrt();

    let mut y = [[0.0; 5]; 5];
    y[0] = [
        tau_ac,
        tau_ac * (v[0] - c * nh[0]),
        tau_ac * (v[1] - c * nh[1]),
        tau_ac * (v[2] - c * nh[2]),
        tau_ac * (ht - c * un),
    ];
    y[1] = [tau_s, tau_s * v[0], tau_s * v[1], tau_s * v[2], tau_s * ke];
    y[2] = [0.0, tau_t * t1[0], tau_t * t1[1], tau_t * t1[2], tau_t * ut1];
    y[3] = [0.0, tau_t * t2[0], tau_t * t2[1], tau_t * t2[2], tau_t * ut2];
    y[4] = [
        tau_ac,
        tau_ac * (v[0] + c * nh[0]),
        tau_ac * (v[1] + c * nh[1]),
        tau_ac * (v[2] + c * nh[2]),
        tau_ac * (ht + c * un),
    ];

    let un_scaled = v[0] * normal[0] + v[1] * normal[1] + v[2] * normal[2];
    let lambda = [
        un_scaled - c * nn + normal_speed,
        un_scaled + normal_speed,
        un_scaled + normal_speed,
        un_scaled + normal_speed,
        un_scaled + c * nn + normal_speed,
    ];
    Ok(ScaledEigensystem { y, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gas() -> GasParams {
        GasParams::default()
    }

    fn random_state(rng: &mut ChaCha8Rng) -> State5 {
        let rho = (rng.gen_range(0.1f64.ln()..10.0f64.ln())).exp();
        let t = (rng.gen_range(0.1f64.ln()..10.0f64.ln())).exp();
        let v = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ];
        State5::from_primitive(rho, v, t, &gas())
    }

    #[test]
    fn primitive_decode_reference_case() {
        let u = State5 {
            rho: 1.0,
            mom: [0.0; 3],
            rho_e: 2.5,
        };
        let p = primitive_from_state(&u, &gas()).unwrap();
        assert!((p.temperature - 1.0).abs() < 1e-14);
        assert!((p.pressure - 1.0).abs() < 1e-14);
        assert!(p.s.abs() < 1e-14);
    }

    #[test]
    fn pressure_linear_in_density() {
        let g = gas();
        let v = [0.3, -0.2, 0.1];
        let u1 = State5::from_primitive(1.3, v, 0.9, &g);
        let u2 = State5::from_primitive(2.6, v, 0.9, &g);
        let p1 = primitive_from_state(&u1, &g).unwrap().pressure;
        let p2 = primitive_from_state(&u2, &g).unwrap().pressure;
        assert!((p2 - 2.0 * p1).abs() < 1e-13);
    }

    #[test]
    fn inadmissible_states_error() {
        let g = gas();
        let u = State5 {
            rho: -1.0,
            mom: [0.0; 3],
            rho_e: 1.0,
        };
        assert!(matches!(
            primitive_from_state(&u, &g),
            Err(crate::Error::Inadmissible { .. })
        ));
        // kinetic energy exceeds total energy -> T <= 0
        let u = State5 {
            rho: 1.0,
            mom: [3.0, 0.0, 0.0],
            rho_e: 1.0,
        };
        assert!(primitive_from_state(&u, &g).is_err());
    }

    #[test]
    fn entropy_function_reference_and_composition() {
        let g = gas();
        let u = State5::from_primitive(1.0, [0.7, -0.3, 0.2], 1.0, &g);
        let (s_math, fent) = entropy_and_flux(&u, &g).unwrap();
        assert!(s_math.abs() < 1e-14, "S at reference state");
        assert!(fent.iter().all(|f| f.abs() < 1e-14));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let u = random_state(&mut rng);
            let p = primitive_from_state(&u, &g).unwrap();
            let (s_math, fent) = entropy_and_flux(&u, &g).unwrap();
            assert!((s_math + p.rho * p.s).abs() < 1e-12 * (1.0 + s_math.abs()));
            for m in 0..3 {
                assert!((fent[m] - s_math * p.v[m]).abs() < 1e-12 * (1.0 + fent[m].abs()));
            }
        }
    }

    #[test]
    fn entropy_vars_reference_value() {
        let g = gas();
        let u = State5::from_primitive(1.0, [0.0; 3], 1.0, &g);
        let w = entropy_vars(&u, &g).unwrap();
        let expect = [3.5, 0.0, 0.0, 0.0, -1.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{w:?}");
        }
    }

    #[test]
    fn entropy_vars_velocity_components() {
        let g = gas();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let u = random_state(&mut rng);
            let p = primitive_from_state(&u, &g).unwrap();
            let w = entropy_vars(&u, &g).unwrap();
            for m in 0..3 {
                assert!((w[1 + m] - p.v[m] / p.temperature).abs() < 1e-13);
            }
            assert!(w[4] < 0.0);
        }
    }

    #[test]
    fn entropy_vars_match_finite_difference_gradient_of_entropy() {
        // independent oracle: central differences of S(U)
        let g = gas();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let u = random_state(&mut rng);
            let w = entropy_vars(&u, &g).unwrap();
            let ua = u.as_array();
            for j in 0..5 {
                let h = 1e-7 * ua[j].abs().max(1.0);
                let mut up = ua;
                up[j] += h;
                let mut um = ua;
                um[j] -= h;
                let sp = entropy_and_flux(&State5::from_array(up), &g).unwrap().0;
                let sm = entropy_and_flux(&State5::from_array(um), &g).unwrap().0;
                let fd = (sp - sm) / (2.0 * h);
                let scale = w[j].abs().max(1.0);
                assert!(
                    (fd - w[j]).abs() <= 1e-6 * scale,
                    "component {j}: fd {fd} vs W {}",
                    w[j]
                );
            }
        }
    }

    #[test]
    fn entropy_var_round_trip() {
        let g = gas();
        let w = [3.5, 0.0, 0.0, 0.0, -1.0];
        let u = state_from_entropy_vars(&w, &g).unwrap();
        assert!((u.rho - 1.0).abs() < 1e-14);
        assert!(u.mom.iter().all(|m| m.abs() < 1e-14));
        assert!((u.rho_e - 2.5).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let u = random_state(&mut rng);
            let w = entropy_vars(&u, &g).unwrap();
            assert!((-1.0 / w[4] - primitive_from_state(&u, &g).unwrap().temperature).abs() < 1e-12);
            let u2 = state_from_entropy_vars(&w, &g).unwrap();
            let w2 = entropy_vars(&u2, &g).unwrap();
            for j in 0..5 {
                worst = worst.max((w2[j] - w[j]).abs() / w[j].abs().max(1e-30));
            }
        }
        assert!(worst < 1e-12, "round-trip relative error {worst}");

        assert!(state_from_entropy_vars(&[1.0, 0.0, 0.0, 0.0, 0.5], &g).is_err());
    }

    #[test]
    fn potentials_closed_form() {
        let g = gas();
        let u = State5::from_primitive(1.0, [0.0; 3], 1.0, &g);
        let (phi, psi) = potentials(&u, &g).unwrap();
        // W.U - S = 3.5*1 + (-1)*2.5 - 0 = 1
        assert!((phi - 1.0).abs() < 1e-14);
        assert!(psi.iter().all(|p| p.abs() < 1e-14));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let u = random_state(&mut rng);
            let p = primitive_from_state(&u, &g).unwrap();
            let w = entropy_vars(&u, &g).unwrap();
            let (s_math, fent) = entropy_and_flux(&u, &g).unwrap();
            let ua = u.as_array();
            let wu: f64 = w.iter().zip(ua).map(|(a, b)| a * b).sum();
            let (phi, psi) = potentials(&u, &g).unwrap();
            assert!((phi - (wu - s_math)).abs() < 1e-12 * phi.abs().max(1.0));
            for m in 0..3 {
                let f = crate::fluxes::physical_flux(&u, m, &g).unwrap().as_array();
                let wf: f64 = w.iter().zip(f).map(|(a, b)| a * b).sum();
                let def = wf - fent[m];
                assert!((psi[m] - def).abs() < 1e-12 * psi[m].abs().max(1.0));
                assert!((psi[m] - g.r_gas * p.rho * p.v[m]).abs() < 1e-12 * psi[m].abs().max(1.0));
            }
        }
    }

    fn cholesky_5(a: &[[f64; 5]; 5]) -> Option<[[f64; 5]; 5]> {
        let mut l = [[0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..=i {
                let mut sum = a[i][j];
                for k in 0..j {
                    sum -= l[i][k] * l[j][k];
                }
                if i == j {
                    if sum <= 0.0 {
                        return None;
                    }
                    l[i][j] = sum.sqrt();
                } else {
                    l[i][j] = sum / l[j][j];
                }
            }
        }
        Some(l)
    }

    #[test]
    fn du_dw_symmetric_positive_definite_and_matches_fd_jacobian() {
        let g = gas();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let u = random_state(&mut rng);
            let a = du_dw(&u, &g).unwrap();
            let scale = a
                .iter()
                .flatten()
                .fold(0.0f64, |acc, v| acc.max(v.abs()));
            for i in 0..5 {
                for j in 0..5 {
                    assert!((a[i][j] - a[j][i]).abs() <= 1e-12 * scale);
                }
            }
            assert!(cholesky_5(&a).is_some(), "dU/dW not SPD");

            // finite differences of the closed-form inverse map
            let w0 = entropy_vars(&u, &g).unwrap();
            for j in 0..5 {
                let h = 1e-7 * w0[j].abs().max(1.0);
                let mut wp = w0;
                wp[j] += h;
                let mut wm = w0;
                wm[j] -= h;
                let up = state_from_entropy_vars(&wp, &g).unwrap().as_array();
                let um = state_from_entropy_vars(&wm, &g).unwrap().as_array();
                for i in 0..5 {
                    let fd = (up[i] - um[i]) / (2.0 * h);
                    assert!(
                        (fd - a[i][j]).abs() <= 1e-6 * scale,
                        "dU/dW[{i}][{j}]: fd {fd} vs {}",
                        a[i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn roe_average_properties() {
        let g = gas();
        let u = State5::from_primitive(1.2, [0.5, -0.1, 0.2], 0.8, &g);
        let r = roe_average(&u, &u, &g).unwrap();
        for (a, b) in r.as_array().iter().zip(u.as_array()) {
            assert!((a - b).abs() < 1e-13);
        }

        let ul = State5::from_primitive(1.0, [0.4, 0.0, 0.0], 1.0, &g);
        let ur = State5::from_primitive(4.0, [0.4, 0.0, 0.0], 1.0, &g);
        let r = roe_average(&ul, &ur, &g).unwrap();
        assert!((r.rho - 2.0).abs() < 1e-13, "geometric-mean density");

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let ul = random_state(&mut rng);
            let ur = random_state(&mut rng);
            if let (Ok(a), Ok(b)) = (roe_average(&ul, &ur, &g), roe_average(&ur, &ul, &g)) {
                for (x, y) in a.as_array().iter().zip(b.as_array()) {
                    assert!((x - y).abs() < 1e-13, "Roe average not symmetric");
                }
            }
        }
    }

    #[test]
    fn eigensystem_reconstructs_du_dw() {
        // also with a non-unit gas constant
        let mut g = gas();
        g.r_gas = 5.0 / 28.0;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let rho = (rng.gen_range(0.2f64.ln()..5.0f64.ln())).exp();
            let t = (rng.gen_range(0.2f64.ln()..5.0f64.ln())).exp();
            let v = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let u = State5::from_primitive(rho, v, t, &g);
            let n = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            if n.iter().map(|x| x * x).sum::<f64>() < 1e-4 {
                continue;
            }
            let es = entropy_scaled_eigensystem(&u, n, 0.0, &g).unwrap();
            let a = du_dw(&u, &g).unwrap();
            let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            for i in 0..5 {
                for j in 0..5 {
                    let mut yyt = 0.0;
                    for k in 0..5 {
                        yyt += es.y[k][i] * es.y[k][j];
                    }
                    assert!(
                        (yyt - a[i][j]).abs() <= 1e-10 * scale,
                        "YY^T[{i}][{j}] = {yyt} vs {}",
                        a[i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn eigensystem_diagonalizes_directional_jacobian() {
        // oracle: finite-difference Jacobian of the directional flux
        let g = gas();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let u = random_state(&mut rng);
            let n = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            if n.iter().map(|x| x * x).sum::<f64>() < 1e-4 {
                continue;
            }
            let es = entropy_scaled_eigensystem(&u, n, 0.0, &g).unwrap();
            let dirflux = |ua: [f64; 5]| -> [f64; 5] {
                let s = State5::from_array(ua);
                let mut out = [0.0; 5];
                for m in 0..3 {
                    let f = crate::fluxes::physical_flux(&s, m, &g).unwrap().as_array();
                    for i in 0..5 {
                        out[i] += n[m] * f[i];
                    }
                }
                out
            };
            let ua = u.as_array();
            let mut jac = [[0.0; 5]; 5];
            for j in 0..5 {
                let h = 1e-6 * ua[j].abs().max(1.0);
                let mut up = ua;
                up[j] += h;
                let mut um = ua;
                um[j] -= h;
                let fp = dirflux(up);
                let fm = dirflux(um);
                for i in 0..5 {
                    jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
                }
            }
            let scale = jac.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            // A Y = Y Lambda column-wise
            for k in 0..5 {
                for i in 0..5 {
                    let mut ay = 0.0;
                    for j in 0..5 {
                        ay += jac[i][j] * es.y[k][j];
                    }
                    let yl = es.y[k][i] * es.lambda[k];
                    assert!(
                        (ay - yl).abs() <= 2e-5 * scale.max(1.0),
                        "mode {k} row {i}: {ay} vs {yl}"
                    );
                }
            }
        }
    }

    #[test]
    fn eigenvalues_acoustic_at_rest_and_homogeneous_in_normal() {
        let g = gas();
        let u = State5::from_primitive(1.0, [0.0; 3], 1.0, &g);
        let n = [2.0, 0.0, 0.0];
        let es = entropy_scaled_eigensystem(&u, n, 0.0, &g).unwrap();
        let c = g.sound_speed(1.0);
        let mut lam = es.lambda;
        lam.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [-2.0 * c, 0.0, 0.0, 0.0, 2.0 * c];
        for (a, b) in lam.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }

        let u = State5::from_primitive(1.3, [0.4, -0.2, 0.6], 1.7, &g);
        let n = [0.3, -0.8, 0.5];
        let b = 0.37;
        let e1 = entropy_scaled_eigensystem(&u, n, b, &g).unwrap();
        let e2 =
            entropy_scaled_eigensystem(&u, [2.0 * n[0], 2.0 * n[1], 2.0 * n[2]], 2.0 * b, &g)
                .unwrap();
        for k in 0..5 {
            assert!((e2.lambda[k] - 2.0 * e1.lambda[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_flux_compatibility_converges_at_design_order() {
        // W^T dF/dx == dFent/dx for smooth 1-D profiles, to discretization
        // accuracy: residual should shrink at ~order p under h-refinement.
        use crate::operators::build_operator;
        let g = gas();
        let p = 4usize;
        let op = build_operator(p).unwrap();
        let profile = |x: f64| {
            let rho = 1.0 + 0.2 * (2.0 * x).sin();
            let v = [0.3 + 0.1 * x.cos(), 0.05 * x.sin(), 0.0];
            let t = 1.0 + 0.1 * (1.5 * x).cos();
            State5::from_primitive(rho, v, t, &g)
        };
        let mut errs = Vec::new();
        for &h in &[0.4f64, 0.2, 0.1] {
            let xs: Vec<f64> = op.nodeset.nodes.iter().map(|&xi| 0.3 + 0.5 * h * xi).collect();
            let states: Vec<State5> = xs.iter().map(|&x| profile(x)).collect();
            let n = op.n();
            let mut worst = 0.0f64;
            for m in 0..3 {
                let f: Vec<[f64; 5]> = states
                    .iter()
                    .map(|u| crate::fluxes::physical_flux(u, m, &g).unwrap().as_array())
                    .collect();
                let fe: Vec<f64> = states
                    .iter()
                    .map(|u| entropy_and_flux(u, &g).unwrap().1[m])
                    .collect();
                for i in 0..n {
                    let w = entropy_vars(&states[i], &g).unwrap();
                    let mut wdf = 0.0;
                    let mut dfe = 0.0;
                    for j in 0..n {
                        let d = op.d_entry(i, j) * 2.0 / h;
                        for comp in 0..5 {
                            wdf += w[comp] * d * f[j][comp];
                        }
                        dfe += d * fe[j];
                    }
                    worst = worst.max((wdf - dfe).abs());
                }
            }
            errs.push(worst);
        }
        let rate1 = (errs[0] / errs[1]).log2();
        let rate2 = (errs[1] / errs[2]).log2();
        assert!(
            rate2 > p as f64 - 1.0,
            "compatibility residual rates {rate1:.2}, {rate2:.2}, errs {errs:?}"
        );
    }
}
