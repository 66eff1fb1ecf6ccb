//! Classical orbits in the screened (Tietz) potential and the Perlick
//! type-I geometry: adaptive integration, closure and period detection,
//! self-intersection counting, and the Stäckel-transformed Hamiltonians.
//!
//! The screened model is a unit-mass particle with
//!   H = p_r²/2 + L²/(2r²) + V(r),  V = -Z/(a·x·(1+x)²),  x = r/a.
//! Orbits launched at the perihelion x₀ = Δ-√(Δ²-1) (Δ = Za/L² - 1 ≥ 1)
//! trace x + 1/x = (Δ+1) + (Δ-1)cos φ, closing after two turns with one
//! self-intersection and period T = π(Δ+1)(3Δ-1)a²/L.
//!
//! The Perlick type-I Hamiltonian is evaluated as
//!   H_I = β²(1+Kr²)p_r² + L²/r² - √(r⁻²+K) + G,
//! the radial-kinetic coefficient chosen so that the Kepler-Coulomb
//! reduction (β=1, K=G=0 gives p_r² + L²/r² - 1/r) and the isotropic-chart
//! form H_I = ¼r̃²(r̃^{-β}-Kr̃^{β})²|p|² - ½(r̃^{-β}+Kr̃^{β}) + G hold
//! exactly under the radial map.

use crate::error::{Error, Result};
use crate::geometry::{perlick_radial_map_inverse, PerlickParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitModel {
    TietzNewtonian,
    PerlickI,
}

/// Central-force problem descriptor.
#[derive(Debug, Clone)]
pub struct OrbitParams {
    pub model: OrbitModel,
    pub z: f64,
    pub a: f64,
    pub l_ang: f64,
    pub perlick: Option<PerlickParams>,
}

impl OrbitParams {
    pub fn tietz(z: f64, a: f64, l_ang: f64) -> Result<Self> {
        if z <= 0.0 || a <= 0.0 || l_ang <= 0.0 {
            return Err(Error::Domain("require Z, a, L > 0".into()));
        }
        Ok(Self {
            model: OrbitModel::TietzNewtonian,
            z,
            a,
            l_ang,
            perlick: None,
        })
    }

    /// Screened-model parameters with L chosen so that Δ = Za/L² - 1.
    pub fn tietz_from_delta(delta: f64, z: f64, a: f64) -> Result<Self> {
        if delta <= -1.0 {
            return Err(Error::Domain(format!("Δ > -1 required (got {delta})")));
        }
        let l_ang = (z * a / (delta + 1.0)).sqrt();
        Self::tietz(z, a, l_ang)
    }

    pub fn perlick(params: PerlickParams, l_ang: f64) -> Result<Self> {
        if l_ang <= 0.0 {
            return Err(Error::Domain("require L > 0".into()));
        }
        Ok(Self {
            model: OrbitModel::PerlickI,
            z: 1.0,
            a: 1.0,
            l_ang,
            perlick: Some(params),
        })
    }

    /// Δ = Za/L² - 1 (read-only, screened model).
    pub fn delta(&self) -> f64 {
        self.z * self.a / (self.l_ang * self.l_ang) - 1.0
    }

    fn perlick_params(&self) -> Result<&PerlickParams> {
        self.perlick
            .as_ref()
            .ok_or_else(|| Error::Domain("Perlick parameters missing".into()))
    }

    /// Screened potential V(r) = -Z/(a·x·(1+x)²), x = r/a.
    pub fn tietz_orbit_potential(&self, r: f64) -> f64 {
        let x = r / self.a;
        -self.z / (self.a * x * (1.0 + x) * (1.0 + x))
    }

    fn tietz_potential_derivative(&self, r: f64) -> f64 {
        let x = r / self.a;
        let d = 1.0 + x;
        (self.z / (self.a * self.a)) * (1.0 / (x * x * d * d) + 2.0 / (x * d * d * d))
    }

    /// Energy of a radial state (r, p_r) at the configured L.
    pub fn hamiltonian(&self, r: f64, p_r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Err(Error::Domain(format!("radius r > 0 (got {r})")));
        }
        match self.model {
            OrbitModel::TietzNewtonian => Ok(0.5 * p_r * p_r
                + 0.5 * self.l_ang * self.l_ang / (r * r)
                + self.tietz_orbit_potential(r)),
            OrbitModel::PerlickI => {
                let pp = self.perlick_params()?;
                perlick_hamiltonian(pp, r, p_r, self.l_ang)
            }
        }
    }

    /// d/dt of (r, p_r, φ).
    fn rhs(&self, y: [f64; 3]) -> [f64; 3] {
        let (r, p_r) = (y[0], y[1]);
        match self.model {
            OrbitModel::TietzNewtonian => {
                let l2 = self.l_ang * self.l_ang;
                [
                    p_r,
                    l2 / (r * r * r) - self.tietz_potential_derivative(r),
                    self.l_ang / (r * r),
                ]
            }
            OrbitModel::PerlickI => {
                let pp = self.perlick.as_ref().expect("validated at construction");
                let beta2 = pp.beta() * pp.beta();
                let k = pp.k;
                let l2 = self.l_ang * self.l_ang;
                let root = (1.0 / (r * r) + k).sqrt();
                [
                    2.0 * beta2 * (1.0 + k * r * r) * p_r,
                    -2.0 * beta2 * k * r * p_r * p_r + 2.0 * l2 / (r * r * r)
                        - 1.0 / (r * r * r * root),
                    2.0 * self.l_ang / (r * r),
                ]
            }
        }
    }
}

/// Perihelion x₀ = Δ - √(Δ²-1) of the closed-orbit family (Δ ≥ 1).
pub fn perihelion_radius(delta: f64) -> Result<f64> {
    if delta < 1.0 {
        return Err(Error::Domain(format!(
            "perihelion formula needs Δ ≥ 1 (got {delta})"
        )));
    }
    Ok(delta - (delta * delta - 1.0).sqrt())
}

/// Closed-orbit period T = π(Δ+1)(3Δ-1)a²/L.
pub fn period_formula(delta: f64, a: f64, l_ang: f64) -> f64 {
    std::f64::consts::PI * (delta + 1.0) * (3.0 * delta - 1.0) * a * a / l_ang
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    Collision,
    Escape,
}

#[derive(Debug, Clone, Copy)]
pub struct OrbitSample {
    pub t: f64,
    pub r: f64,
    pub p_r: f64,
    pub phi: f64,
}

/// Time-ordered trajectory samples at the integrator's accepted steps.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<OrbitSample>,
    pub energy0: f64,
    pub termination: Termination,
}

/// Closure/period/self-intersection report for one trajectory.
#[derive(Debug, Clone)]
pub struct OrbitAnalysis {
    pub closed: bool,
    pub period: Option<f64>,
    pub winding: u32,
    pub self_intersections: usize,
    /// max |x + 1/x - (Δ+1) - (Δ-1)cos φ| over one period (screened model)
    pub orbit_residual: Option<f64>,
    pub energy_drift: f64,
}

// Dormand-Prince 5(4) coefficients.
const DP_C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct DpStep {
    y: [f64; 3],
    err: f64,
}

fn dp_step(params: &OrbitParams, y: [f64; 3], h: f64, k1: [f64; 3]) -> (DpStep, [f64; 3]) {
    let mut k = [[0.0; 3]; 7];
    k[0] = k1;
    for stage in 0..6 {
        let mut ys = y;
        for (j, kj) in k.iter().enumerate().take(stage + 1) {
            let a = DP_A[stage][j];
            if a != 0.0 {
                for d in 0..3 {
                    ys[d] += h * a * kj[d];
                }
            }
        }
        let _ = DP_C; // stage times are implicit (autonomous system)
        k[stage + 1] = params.rhs(ys);
    }
    // 5th-order solution is the stage-6 argument (FSAL)
    let mut y5 = y;
    for (j, kj) in k.iter().enumerate().take(6) {
        let b = DP_A[5][j];
        if b != 0.0 {
            for d in 0..3 {
                y5[d] += h * b * kj[d];
            }
        }
    }
    let mut err = [0.0; 3];
    for (j, kj) in k.iter().enumerate() {
        if DP_ERR[j] != 0.0 {
            for d in 0..3 {
                err[d] += h * DP_ERR[j] * kj[d];
            }
        }
    }
    (
        DpStep {
            y: y5,
            err: err.iter().map(|e| e * e).sum::<f64>().sqrt(),
        },
        k[6],
    )
}

/// Integrate the planar flow from the apsis (r = x0·a, p_r = 0, φ = 0) with
/// an embedded 5(4) pair and PI step control; |H(t)-H(0)| stays within
/// tol·(1+|H(0)|). Collision (r → 0) or escape (r > 10⁶a) terminates the
/// run with the samples collected so far.
pub fn integrate_orbit(params: &OrbitParams, x0: f64, t_max: f64, tol: f64) -> Result<Trajectory> {
    if x0 <= 0.0 {
        return Err(Error::Domain(format!("launch radius x0 > 0 (got {x0})")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance in (0, 1) (got {tol})")));
    }
    if t_max <= 0.0 {
        return Err(Error::Domain(format!("t_max > 0 (got {t_max})")));
    }
    let r0 = x0 * params.a;
    let energy0 = params.hamiltonian(r0, 0.0)?;
    let mut y = [r0, 0.0, 0.0];
    let mut t = 0.0;
    let mut h = 1e-4 * t_max.min(1.0);
    let mut err_prev: f64 = 1.0;
    let mut samples = vec![OrbitSample {
        t,
        r: y[0],
        p_r: y[1],
        phi: y[2],
    }];
    let mut k1 = params.rhs(y);
    let mut termination = Termination::Completed;
    let collision_r = 1e-9 * params.a;
    let escape_r = 1e6 * params.a;
    while t < t_max {
        h = h.min(t_max - t);
        let (step, k_last) = dp_step(params, y, h, k1);
        let scale = tol * (1.0 + y.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
        let err = step.err / scale;
        if err <= 1.0 {
            t += h;
            y = step.y;
            k1 = k_last;
            samples.push(OrbitSample {
                t,
                r: y[0],
                p_r: y[1],
                phi: y[2],
            });
            if y[0] <= collision_r {
                termination = Termination::Collision;
                break;
            }
            if y[0] >= escape_r {
                termination = Termination::Escape;
                break;
            }
            // PI controller
            let fac = 0.9 * err.max(1e-10).powf(-0.2) * err_prev.min(1.0).powf(0.04);
            err_prev = err;
            h *= fac.clamp(0.2, 5.0);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < 1e-14 * t_max {
                return Err(Error::Numeric(format!(
                    "step size underflow at t = {t} (r = {})",
                    y[0]
                )));
            }
        }
    }
    Ok(Trajectory {
        samples,
        energy0,
        termination,
    })
}

/// Re-integrate from a sample with fine fixed RK4 steps (event refinement).
fn advance_rk4(params: &OrbitParams, y0: [f64; 3], dt: f64, steps: usize) -> [f64; 3] {
    let h = dt / steps as f64;
    let mut y = y0;
    for _ in 0..steps {
        let k1 = params.rhs(y);
        let mut y2 = y;
        for d in 0..3 {
            y2[d] = y[d] + 0.5 * h * k1[d];
        }
        let k2 = params.rhs(y2);
        for d in 0..3 {
            y2[d] = y[d] + 0.5 * h * k2[d];
        }
        let k3 = params.rhs(y2);
        for d in 0..3 {
            y2[d] = y[d] + h * k3[d];
        }
        let k4 = params.rhs(y2);
        for d in 0..3 {
            y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
    }
    y
}

/// Closure, period, winding, self-intersection count, orbit-equation
/// residual and energy drift of a trajectory.
///
/// Closure means the phase point (r, p_r) returns to its launch value with
/// φ at a whole number of turns, within `PHASE_TOL` in Euclidean norm; the
/// period is the first such return time.
pub fn analyze(trajectory: &Trajectory, params: &OrbitParams) -> Result<OrbitAnalysis> {
    const PHASE_TOL: f64 = 1e-6;
    let samples = &trajectory.samples;
    if samples.len() < 3 {
        return Err(Error::Domain("trajectory too short to analyze".into()));
    }
    let r0 = samples[0].r;
    // energy drift over the full integration span
    let mut drift: f64 = 0.0;
    for s in samples {
        let h = params.hamiltonian(s.r, s.p_r)?;
        drift = drift.max((h - trajectory.energy0).abs());
    }
    // closure: walk φ through multiples of 2π and test the phase distance
    let tau = std::f64::consts::TAU;
    let mut closed = false;
    let mut period = None;
    let mut winding = 0u32;
    let mut k = 1u32;
    'turns: loop {
        let target = tau * f64::from(k);
        // find the first sample index past the target angle
        let Some(hi) = samples.iter().position(|s| s.phi >= target) else {
            break 'turns;
        };
        if hi == 0 {
            break 'turns;
        }
        let lo = &samples[hi - 1];
        // bisect the crossing time within [lo.t, samples[hi].t]
        let mut a = 0.0;
        let mut b = samples[hi].t - lo.t;
        let y_lo = [lo.r, lo.p_r, lo.phi];
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            let y = advance_rk4(params, y_lo, mid, 16);
            if y[2] < target {
                a = mid;
            } else {
                b = mid;
            }
        }
        let dt = 0.5 * (a + b);
        let y = advance_rk4(params, y_lo, dt, 32);
        let dist = ((y[0] - r0) * (y[0] - r0) + y[1] * y[1]).sqrt();
        if dist <= PHASE_TOL {
            closed = true;
            period = Some(lo.t + dt);
            winding = k;
            break 'turns;
        }
        k += 1;
        if k > 64 {
            break 'turns;
        }
    }
    // self-intersections of the (x, y) polyline over one period
    let self_intersections = match period {
        Some(t_end) => {
            let pts = resample_xy(params, samples, t_end, 4096);
            count_proper_crossings(&pts)
        }
        None => 0,
    };
    // orbit-equation residual for the screened model
    let orbit_residual = match params.model {
        OrbitModel::TietzNewtonian => {
            let delta = params.delta();
            let span = period.unwrap_or(samples.last().expect("nonempty").t);
            let mut worst: f64 = 0.0;
            for s in samples.iter().take_while(|s| s.t <= span) {
                let x = s.r / params.a;
                let res = (x + 1.0 / x - (delta + 1.0) - (delta - 1.0) * s.phi.cos()).abs();
                worst = worst.max(res);
            }
            Some(worst)
        }
        OrbitModel::PerlickI => None,
    };
    Ok(OrbitAnalysis {
        closed,
        period,
        winding,
        self_intersections,
        orbit_residual,
        energy_drift: drift,
    })
}

/// Cubic-Hermite resampling of (x, y) = (r cos φ, r sin φ) at `n` uniform
/// times over [0, t_end]; endpoint omitted so the polyline closes cleanly.
pub fn resample_xy(
    params: &OrbitParams,
    samples: &[OrbitSample],
    t_end: f64,
    n: usize,
) -> Vec<[f64; 2]> {
    let mut pts = Vec::with_capacity(n);
    let mut cursor = 0usize;
    for i in 0..n {
        let t = t_end * i as f64 / n as f64;
        while cursor + 1 < samples.len() && samples[cursor + 1].t < t {
            cursor += 1;
        }
        let s0 = &samples[cursor];
        let s1 = &samples[(cursor + 1).min(samples.len() - 1)];
        let y = hermite(params, s0, s1, t);
        pts.push([y[0] * y[2].cos(), y[0] * y[2].sin()]);
    }
    pts
}

fn hermite(params: &OrbitParams, s0: &OrbitSample, s1: &OrbitSample, t: f64) -> [f64; 3] {
    let h = s1.t - s0.t;
    if h <= 0.0 {
        return [s0.r, s0.p_r, s0.phi];
    }
    let u = ((t - s0.t) / h).clamp(0.0, 1.0);
    let y0 = [s0.r, s0.p_r, s0.phi];
    let y1 = [s1.r, s1.p_r, s1.phi];
    let d0 = params.rhs(y0);
    let d1 = params.rhs(y1);
    let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    let h10 = u * (1.0 - u) * (1.0 - u);
    let h01 = u * u * (3.0 - 2.0 * u);
    let h11 = u * u * (u - 1.0);
    let mut out = [0.0; 3];
    for d in 0..3 {
        out[d] = h00 * y0[d] + h10 * h * d0[d] + h01 * y1[d] + h11 * h * d1[d];
    }
    out
}

/// Transverse self-intersections of a closed polyline, adjacent segments
/// and endpoint contacts excluded.
pub fn count_proper_crossings(pts: &[[f64; 2]]) -> usize {
    let n = pts.len();
    if n < 4 {
        return 0;
    }
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| -> f64 {
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    };
    let mut count = 0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        for j in (i + 2)..n {
            // skip segments adjacent to segment i (including the wrap pair)
            if i == 0 && j == n - 1 {
                continue;
            }
            let c = pts[j];
            let d = pts[(j + 1) % n];
            let o1 = orient(a, b, c);
            let o2 = orient(a, b, d);
            let o3 = orient(c, d, a);
            let o4 = orient(c, d, b);
            if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
                count += 1;
            }
        }
    }
    count
}

// ---------------------------------------------------------------------------
// Perlick Hamiltonians
// ---------------------------------------------------------------------------

/// Type-I Hamiltonian H_I = β²(1+Kr²)p_r² + L²/r² - √(r⁻²+K) + G.
pub fn perlick_hamiltonian(params: &PerlickParams, r: f64, p_r: f64, l_ang: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius r > 0 (got {r})")));
    }
    let disc = 1.0 / (r * r) + params.k;
    if 1.0 + params.k * r * r <= 0.0 || disc < 0.0 {
        return Err(Error::Domain(format!(
            "1 + Kr² must be positive at r = {r}"
        )));
    }
    let beta2 = params.beta() * params.beta();
    Ok(
        beta2 * (1.0 + params.k * r * r) * p_r * p_r + l_ang * l_ang / (r * r) - disc.sqrt()
            + params.g,
    )
}

/// Isotropic-chart form of H_I:
/// ¼ r̃²(r̃^{-β}-Kr̃^{β})²(p̃² + L²/r̃²) - ½(r̃^{-β}+Kr̃^{β}) + G.
pub fn perlick_reduced_hamiltonian(
    params: &PerlickParams,
    rtilde: f64,
    p_rtilde: f64,
    l_ang: f64,
) -> Result<f64> {
    if rtilde <= 0.0 {
        return Err(Error::Domain(format!("radius r̃ > 0 (got {rtilde})")));
    }
    let beta = params.beta();
    let minus = rtilde.powf(-beta) - params.k * rtilde.powf(beta);
    let plus = rtilde.powf(-beta) + params.k * rtilde.powf(beta);
    let p2 = p_rtilde * p_rtilde + l_ang * l_ang / (rtilde * rtilde);
    Ok(0.25 * rtilde * rtilde * minus * minus * p2 - 0.5 * plus + params.g)
}

/// Null Hamiltonian r²(r^{-β} - Kr^{β})²|p|² + α.
pub fn perlick_null_hamiltonian(
    params: &PerlickParams,
    r: f64,
    p_sq: f64,
    alpha: f64,
) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius r > 0 (got {r})")));
    }
    let beta = params.beta();
    let minus = r.powf(-beta) - params.k * r.powf(beta);
    Ok(r * r * minus * minus * p_sq + alpha)
}

/// Type-II Hamiltonian H_II = H/U with U = -½(r^{-β}+Kr^{β}) + G; errors
/// when U vanishes at the state.
pub fn stackel_type2(params: &PerlickParams, r: f64, p_sq: f64, alpha: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius r > 0 (got {r})")));
    }
    let beta = params.beta();
    let u = -0.5 * (r.powf(-beta) + params.k * r.powf(beta)) + params.g;
    if u.abs() < 1e-14 {
        return Err(Error::Singularity(format!(
            "Stäckel factor U vanishes at r = {r}"
        )));
    }
    Ok(perlick_null_hamiltonian(params, r, p_sq, alpha)? / u)
}

/// Map a state given in the isotropic chart (r̃, p̃, L) to (r, p_r) of the
/// Schwarzschild-like chart; the momentum transforms as p_r = p̃·dr̃/dr.
pub fn perlick_chart_map(params: &PerlickParams, rtilde: f64, p_rtilde: f64) -> Result<(f64, f64)> {
    let r = perlick_radial_map_inverse(params, rtilde)?;
    let beta = params.beta();
    let drt_dr = rtilde / (beta * r * (1.0 + params.k * r * r).sqrt());
    Ok((r, p_rtilde * drt_dr))
}
