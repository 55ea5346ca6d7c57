//! Exact solutions and initial/boundary data for the benchmark cases.

use crate::gas::{GasParams, State5};
use crate::rhs::ExactState;
use crate::{Error, Result};

/// Translating isentropic vortex, an exact Euler solution. Velocities are
/// nondimensionalized by the freestream speed, temperature and density by
/// their freestream values; the gas constant follows from the Mach number,
/// R = V_inf^2 / (gamma M_inf^2).
#[derive(Debug, Clone, Copy)]
pub struct VortexCase {
    pub mach: f64,
    pub v_inf: f64,
    pub eps: f64,
    pub x0: f64,
    pub y0: f64,
    pub alpha: f64,
    pub gas: GasParams,
}

impl VortexCase {
    /// Benchmark parameters: M = 0.5, V = 0.25, eps = 5, centered at
    /// (-0.25, 0).
    pub fn standard() -> Self {
        let mach: f64 = 0.5;
        let v_inf: f64 = 0.25;
        let gas = GasParams {
            r_gas: v_inf * v_inf / (1.4 * mach * mach),
            mu: 0.0,
            ..GasParams::default()
        };
        Self {
            mach,
            v_inf,
            eps: 5.0,
            x0: -0.25,
            y0: 0.0,
            alpha: 0.0,
            gas,
        }
    }

    pub fn freestream(&self) -> State5 {
        State5::from_primitive(
            1.0,
            [
                self.v_inf * self.alpha.cos(),
                self.v_inf * self.alpha.sin(),
                0.0,
            ],
            1.0,
            &self.gas,
        )
    }
}

impl ExactState for VortexCase {
    fn state(&self, x: [f64; 3], t: f64) -> State5 {
        let g = &self.gas;
        let (ca, sa) = (self.alpha.cos(), self.alpha.sin());
        let xt = x[0] - self.x0 - self.v_inf * t * ca;
        let yt = x[1] - self.y0 - self.v_inf * t * sa;
        let gexp = 1.0 - xt * xt - yt * yt;
        let two_pi = 2.0 * std::f64::consts::PI;
        let half = (0.5 * gexp).exp();
        let temperature = 1.0
            - self.eps * self.eps * self.mach * self.mach * (g.gamma - 1.0)
                / (8.0 * std::f64::consts::PI * std::f64::consts::PI)
                * gexp.exp();
        let rho = temperature.powf(1.0 / (g.gamma - 1.0));
        let v = [
            self.v_inf * (ca - self.eps * yt / two_pi * half),
            self.v_inf * (sa + self.eps * xt / two_pi * half),
            0.0,
        ];
        State5::from_primitive(rho, v, temperature, g)
    }
}

/// Steady 1-D viscous shock profile (exact for Pr = 3/4) embedded in 3-D by
/// rotating the shock normal 45 degrees about the z- and then the x-axis,
/// and advected at a constant speed. Upstream state: rho = 1, T = 1, speed
/// 1 in the shock frame; the gas constant follows from the Mach number.
#[derive(Debug, Clone, Copy)]
pub struct ViscousShockCase {
    pub mach: f64,
    pub reynolds: f64,
    /// Advection speed of the profile along the shock normal (lab frame).
    pub shock_speed: f64,
    pub normal: [f64; 3],
    pub gas: GasParams,
    /// Shock-frame asymptotic speeds.
    pub u1: f64,
    pub u2: f64,
    /// Mass flux in the shock frame.
    pub mass_flux: f64,
    /// Total enthalpy (constant through the shock at Pr = 3/4).
    pub h0: f64,
    /// Slope constant of the reduced momentum ODE.
    pub slope: f64,
    /// Integration constant fixing u(0) = (u1 + u2)/2.
    pub offset: f64,
}

impl ViscousShockCase {
    /// Benchmark parameters: M = 2.5, Re = 10, Pr = 3/4. The profile
    /// translates so that the downstream gas is at rest in the lab frame.
    pub fn standard() -> Self {
        Self::new(2.5, 10.0, None)
    }

    pub fn new(mach: f64, reynolds: f64, shock_speed: Option<f64>) -> Self {
        let gamma = 1.4;
        let r_gas = 1.0 / (gamma * mach * mach); // upstream T = 1, u1 = 1
        let mu = 1.0 / reynolds;
        let gas = GasParams {
            gamma,
            r_gas,
            prandtl: 0.75,
            mu,
            ..GasParams::default()
        };
        let u1 = 1.0;
        let u2 = u1 * (2.0 + (gamma - 1.0) * mach * mach)
            / ((gamma + 1.0) * mach * mach);
        let mass_flux = 1.0; // rho1 u1
        let h0 = gas.cp() + 0.5 * u1 * u1;
        let slope = 3.0 * mass_flux * (gamma + 1.0) / (8.0 * gamma * mu);
        let offset = u1 * (u1 - 0.5 * (u1 + u2)).ln() - u2 * (0.5 * (u1 + u2) - u2).ln();
        // rotate the 1-D profile 45 degrees about z, then about x
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let normal = [c, 0.5, 0.5];
        Self {
            mach,
            reynolds,
            shock_speed: shock_speed.unwrap_or(-u2),
            normal,
            gas,
            u1,
            u2,
            mass_flux,
            h0,
            slope,
            offset,
        }
    }

    /// Shock-frame speed at shock-attached coordinate `s`, from the implicit
    /// relation u1 ln(u1 - u) - u2 ln(u - u2) = (u1 - u2) slope s + offset,
    /// solved by bisection-safeguarded Newton to 1e-13.
    pub fn profile_speed(&self, s: f64) -> Result<f64> {
        let (u1, u2) = (self.u1, self.u2);
        let target = (u1 - u2) * self.slope * s + self.offset;
        let span = u1 - u2;
        let eval = |u: f64| u1 * (u1 - u).ln() - u2 * (u - u2).ln() - target;
        // the relation is strictly decreasing in u; outside the bracket the
        // exponential tails have saturated to the asymptotic states
        let mut lo = u2 + 1e-14 * span;
        let mut hi = u1 - 1e-14 * span;
        if eval(hi) >= 0.0 {
            return Ok(hi);
        }
        if eval(lo) <= 0.0 {
            return Ok(lo);
        }
        let mut u = 0.5 * (u1 + u2);
        for _ in 0..200 {
            let f = eval(u);
            if f > 0.0 {
                lo = u;
            } else {
                hi = u;
            }
            let df = -u1 / (u1 - u) - u2 / (u - u2);
            // Newton error estimate on the velocity itself; the residual of
            // the logarithmic relation is not resolvable in the steep tails
            if (f / df).abs() < 1e-13 * span || hi - lo < 4.0 * f64::EPSILON * span {
                return Ok(u);
            }
            let next = u - f / df;
            u = if next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
        }
        let f = eval(u);
        let df = -u1 / (u1 - u) - u2 / (u - u2);
        if (f / df).abs() < 1e-12 * span {
            Ok(u)
        } else {
            Err(Error::NewtonFailure {
                context: format!("viscous shock profile at s = {s}"),
                residual: f,
            })
        }
    }

    /// Full state at shock-attached coordinate `s` in the lab frame.
    pub fn state_at(&self, s: f64) -> Result<State5> {
        let w = self.profile_speed(s)?;
        let rho = self.mass_flux / w;
        let temperature = (self.h0 - 0.5 * w * w) / self.gas.cp();
        let speed = w + self.shock_speed;
        let v = [
            speed * self.normal[0],
            speed * self.normal[1],
            speed * self.normal[2],
        ];
        Ok(State5::from_primitive(rho, v, temperature, &self.gas))
    }
}

impl ExactState for ViscousShockCase {
    fn state(&self, x: [f64; 3], t: f64) -> State5 {
        let s = self.normal[0] * x[0] + self.normal[1] * x[1] + self.normal[2] * x[2]
            - self.shock_speed * t;
        self.state_at(s)
            .expect("viscous shock profile evaluation failed")
    }
}

/// Uniform flow (freestream-preservation cases).
#[derive(Debug, Clone, Copy)]
pub struct FreestreamCase(pub State5);

impl ExactState for FreestreamCase {
    fn state(&self, _x: [f64; 3], _t: f64) -> State5 {
        self.0
    }
}

/// Smooth periodic initial data for the entropy-conservation and global
/// conservation audits (not an exact solution; the audits measure structural
/// invariants, not errors).
#[derive(Debug, Clone, Copy)]
pub struct SmoothPeriodicField {
    pub gas: GasParams,
}

impl ExactState for SmoothPeriodicField {
    fn state(&self, x: [f64; 3], _t: f64) -> State5 {
        let pi = std::f64::consts::PI;
        let rho = 1.0 + 0.2 * (pi * x[0]).sin() * (pi * x[1]).cos();
        let t = 1.0 + 0.1 * (pi * x[1]).sin() * (pi * x[2]).cos();
        let v = [
            0.3 + 0.1 * (pi * x[2]).sin(),
            -0.2 + 0.1 * (pi * x[0]).cos(),
            0.1 * (pi * x[1]).sin(),
        ];
        State5::from_primitive(rho, v, t, &self.gas)
    }
}
