//! Radial Sturmian eigensolver: quantizes the coupling constant β of the
//! fish-eye family (γ = 1, 1/2) at zero energy and of the Coulomb problem at
//! fixed energy, by two-sided shooting on a log-uniform mesh.
//!
//! The radial equations solved, for u(r) with u ~ r^{l+1} at the origin and
//! the bounded branch at infinity:
//!
//!   fish-eye:  u'' = [l(l+1)/r² - β W_γ(r)] u,
//!              W₁ = 1/(1+r²)²,  W_{1/2} = 1/(r(1+r)²)
//!   Coulomb:   u'' = [l(l+1)/r² + k² - 2β/r] u      (eigenvalues β = nk)
//!
//! Shooting integrates outward from a Frobenius series start and inward from
//! an asymptotic series start, both with fixed-step RK4 in s = ln r. The
//! mismatch functional is the Wronskian of the two shots at the match
//! radius, which is analytic in β and changes sign exactly at eigenvalues;
//! node counts bracket which eigenvalue a sign change belongs to.

use crate::error::{Error, Result};

/// Deformation exponent of the fish-eye family. Only these two are
/// physically meaningful (the coupling scaling argument fixes them).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FisheyeGamma {
    One,
    Half,
}

impl FisheyeGamma {
    pub fn value(self) -> f64 {
        match self {
            FisheyeGamma::One => 1.0,
            FisheyeGamma::Half => 0.5,
        }
    }

    /// Exponent stride ν = 2γ of the series expansions.
    fn nu(self) -> f64 {
        2.0 * self.value()
    }
}

/// Fish-eye radial problem descriptor (a is fixed to 1: the coupling is
/// scale-invariant, so r is measured in units of a throughout).
#[derive(Debug, Clone)]
pub struct RadialProblem {
    pub gamma: FisheyeGamma,
    pub l: u32,
    pub a: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub mesh: usize,
    pub match_r: f64,
}

impl RadialProblem {
    pub fn new(gamma: FisheyeGamma, l: u32) -> Self {
        Self {
            gamma,
            l,
            a: 1.0,
            r_min: 1e-6,
            r_max: 200.0,
            mesh: 20_000,
            match_r: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < self.match_r && self.match_r < self.r_max) {
            return Err(Error::Domain("require 0 < r_min < match_r < r_max".into()));
        }
        if self.mesh < 1000 {
            return Err(Error::Domain(format!("mesh ≥ 1000 (got {})", self.mesh)));
        }
        if self.a <= 0.0 {
            return Err(Error::Domain("length scale a > 0".into()));
        }
        Ok(())
    }

    /// Coupling weight W_γ(r).
    pub fn weight(&self, r: f64) -> f64 {
        match self.gamma {
            FisheyeGamma::One => {
                let d = 1.0 + r * r;
                1.0 / (d * d)
            }
            FisheyeGamma::Half => {
                let d = 1.0 + r;
                1.0 / (r * d * d)
            }
        }
    }
}

/// Coulomb Sturmian problem at fixed energy E = -k²/2.
#[derive(Debug, Clone)]
pub struct CoulombProblem {
    pub k: f64,
    pub l: u32,
    pub r_min: f64,
    pub r_max: f64,
    pub mesh: usize,
    pub match_r: f64,
}

impl CoulombProblem {
    pub fn new(k: f64, l: u32) -> Self {
        Self {
            k,
            l,
            r_min: 1e-6,
            r_max: 200.0,
            mesh: 20_000,
            match_r: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k <= 0.0 {
            return Err(Error::Domain(format!("wavenumber k > 0 (got {})", self.k)));
        }
        if !(self.r_min > 0.0 && self.r_min < self.match_r && self.match_r < self.r_max) {
            return Err(Error::Domain("require 0 < r_min < match_r < r_max".into()));
        }
        if self.mesh < 1000 {
            return Err(Error::Domain(format!("mesh ≥ 1000 (got {})", self.mesh)));
        }
        Ok(())
    }
}

/// Either radial problem; carried by spectra and solutions so overlaps know
/// their weight and grid.
#[derive(Debug, Clone)]
pub enum Problem {
    Fisheye(RadialProblem),
    Coulomb(CoulombProblem),
}

impl Problem {
    fn l(&self) -> u32 {
        match self {
            Problem::Fisheye(p) => p.l,
            Problem::Coulomb(p) => p.l,
        }
    }

    fn grid(&self) -> (f64, f64, f64, usize) {
        match self {
            Problem::Fisheye(p) => (p.r_min, p.match_r, p.r_max, p.mesh),
            Problem::Coulomb(p) => (p.r_min, p.match_r, p.r_max, p.mesh),
        }
    }

    /// u''(r) = q(r) u(r).
    fn q(&self, beta: f64, r: f64) -> f64 {
        let l = f64::from(self.l());
        let centrifugal = l * (l + 1.0) / (r * r);
        match self {
            Problem::Fisheye(p) => centrifugal - beta * p.weight(r),
            Problem::Coulomb(p) => centrifugal + p.k * p.k - 2.0 * beta / r,
        }
    }

    /// Orthogonality weight: W_γ for the fish-eye family, 1/r for Coulomb.
    pub fn orthogonality_weight(&self, r: f64) -> f64 {
        match self {
            Problem::Fisheye(p) => p.weight(r),
            Problem::Coulomb(_) => 1.0 / r,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Problem::Fisheye(p) => p.validate(),
            Problem::Coulomb(p) => p.validate(),
        }
    }
}

/// One quantized coupling with the node count of its eigenfunction.
#[derive(Debug, Clone, Copy)]
pub struct CouplingEntry {
    pub nodes: u32,
    pub beta: f64,
}

/// Ascending couplings of one radial problem.
#[derive(Debug, Clone)]
pub struct CouplingSpectrum {
    pub entries: Vec<CouplingEntry>,
    pub problem: Problem,
}

/// Two-sided shooting solution sampled on the problem's log mesh.
#[derive(Debug, Clone)]
pub struct SturmianSolution {
    pub beta: f64,
    pub samples: Vec<(f64, f64)>,
    pub node_count: u32,
}

// ---------------------------------------------------------------------------
// Series starts
// ---------------------------------------------------------------------------

/// Frobenius start near r = 0: u = r^{l+1}(1 + Σ_j c_j r^{νj}) for the
/// fish-eye family (ν = 2γ), with the weight expanded as
/// W = r^{-2-ν} Σ_i (i+1)(-r^ν)^i. Returns (u, u').
fn fisheye_series_origin(p: &RadialProblem, beta: f64, r: f64) -> (f64, f64) {
    let nu = p.gamma.nu();
    let l = f64::from(p.l);
    const TERMS: usize = 14;
    let mut c = [0.0; TERMS];
    c[0] = 1.0;
    for jp in 1..TERMS {
        let mut s = 0.0;
        for i in 0..jp {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            s += c[jp - 1 - i] * (i as f64 + 1.0) * sign;
        }
        let a = nu * jp as f64;
        c[jp] = -beta * s / (a * a + a * (2.0 * l + 1.0));
    }
    let mut u = 0.0;
    let mut du = 0.0;
    for (j, &cj) in c.iter().enumerate() {
        let e = l + 1.0 + nu * j as f64;
        let re = r.powf(e);
        u += cj * re;
        du += cj * e * re / r;
    }
    (u, du)
}

/// Asymptotic bounded branch at large r: u = r^{-l}(1 + Σ_j c_j r^{-νj});
/// the recurrence coefficients coincide with the origin series.
fn fisheye_series_infinity(p: &RadialProblem, beta: f64, r: f64) -> (f64, f64) {
    let nu = p.gamma.nu();
    let l = f64::from(p.l);
    const TERMS: usize = 26;
    let mut c = [0.0; TERMS];
    c[0] = 1.0;
    for jp in 1..TERMS {
        let mut s = 0.0;
        for i in 0..jp {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            s += c[jp - 1 - i] * (i as f64 + 1.0) * sign;
        }
        let a = nu * jp as f64;
        c[jp] = -beta * s / (a * a + a * (2.0 * l + 1.0));
    }
    let mut u = 0.0;
    let mut du = 0.0;
    for (j, &cj) in c.iter().enumerate() {
        let e = -l - nu * j as f64;
        let re = r.powf(e);
        u += cj * re;
        du += cj * e * re / r;
    }
    (u, du)
}

/// Power-series start for the Coulomb problem: u = r^{l+1} Σ_j c_j r^j with
/// c_{j+1} = (-2β c_j + k² c_{j-1}) / ((j+1)(j+2l+2)).
fn coulomb_series_origin(p: &CoulombProblem, beta: f64, r: f64) -> (f64, f64) {
    let l = f64::from(p.l);
    const TERMS: usize = 14;
    let mut c = [0.0; TERMS];
    c[0] = 1.0;
    for j in 0..TERMS - 1 {
        let prev = if j == 0 { 0.0 } else { c[j - 1] };
        let jf = j as f64;
        c[j + 1] = (-2.0 * beta * c[j] + p.k * p.k * prev) / ((jf + 1.0) * (jf + 2.0 * l + 2.0));
    }
    let mut u = 0.0;
    let mut du = 0.0;
    for (j, &cj) in c.iter().enumerate() {
        let e = l + 1.0 + j as f64;
        let re = r.powf(e);
        u += cj * re;
        du += cj * e * re / r;
    }
    (u, du)
}

/// Bounded asymptotic branch u ~ e^{-kr} r^{σ} v(1/r), σ = β/k, returned as
/// (u, u') with the overall scale dropped (u(r) = v-series, u'/u exact).
fn coulomb_series_infinity(p: &CoulombProblem, beta: f64, r: f64) -> (f64, f64) {
    let l = f64::from(p.l);
    let sigma = beta / p.k;
    let mut v = 1.0;
    let mut dv = 0.0; // v'(r)
    let mut d = 1.0;
    for j in 0..40u32 {
        let jf = f64::from(j);
        d *= -((sigma - jf) * (sigma - jf - 1.0) - l * (l + 1.0)) / (2.0 * p.k * (jf + 1.0));
        let term = d * r.powi(-(j as i32) - 1);
        v += term;
        dv += term * (-(jf + 1.0)) / r;
        if term.abs() < 1e-18 * v.abs() {
            break;
        }
    }
    let u = v;
    let du = v * (-p.k + sigma / r) + dv;
    (u, du)
}

// ---------------------------------------------------------------------------
// RK4 sweeps on the log mesh
// ---------------------------------------------------------------------------

struct Sweep {
    u: f64,
    du: f64,
    nodes: u32,
    /// positive rescale applied cumulatively (sign information preserved)
    samples: Option<Vec<(f64, f64)>>,
}

/// Integrate u'' = q(r)u from r0 to r1 (either direction) on a log-uniform
/// mesh with `steps` RK4 steps, counting sign changes and optionally
/// sampling. The radius advances multiplicatively, so no transcendental
/// calls sit in the inner loop.
#[allow(clippy::too_many_arguments)]
fn sweep(
    problem: &Problem,
    beta: f64,
    r0: f64,
    r1: f64,
    u0: f64,
    du0: f64,
    steps: usize,
    record: bool,
) -> Sweep {
    let h = (r1 / r0).ln() / steps as f64;
    let grow = h.exp();
    let half = (0.5 * h).exp();
    let mut r = r0;
    let mut u = u0;
    let mut du = du0;
    let mut nodes = 0u32;
    let mut prev_sign = if u0 > 0.0 {
        1.0
    } else if u0 < 0.0 {
        -1.0
    } else {
        0.0
    };
    let mut samples = record.then(|| {
        let mut v = Vec::with_capacity(steps + 1);
        v.push((r0, u0));
        v
    });
    let deriv = |r: f64, u: f64, du: f64| -> (f64, f64) { (r * du, r * problem.q(beta, r) * u) };
    for _ in 0..steps {
        let r_half = r * half;
        let r_next = r * grow;
        let (k1u, k1d) = deriv(r, u, du);
        let (k2u, k2d) = deriv(r_half, u + 0.5 * h * k1u, du + 0.5 * h * k1d);
        let (k3u, k3d) = deriv(r_half, u + 0.5 * h * k2u, du + 0.5 * h * k2d);
        let (k4u, k4d) = deriv(r_next, u + h * k3u, du + h * k3d);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        r = r_next;
        let mag = u.abs().max(du.abs());
        if mag > 1e250 {
            // linear problem: positive rescale keeps signs and ratios
            u /= mag;
            du /= mag;
            if let Some(v) = samples.as_mut() {
                for e in v.iter_mut() {
                    e.1 /= mag;
                }
            }
        }
        let sign = if u > 0.0 {
            1.0
        } else if u < 0.0 {
            -1.0
        } else {
            0.0
        };
        if sign != 0.0 && prev_sign != 0.0 && sign != prev_sign {
            nodes += 1;
        }
        if sign != 0.0 {
            prev_sign = sign;
        }
        if let Some(v) = samples.as_mut() {
            v.push((r, u));
        }
    }
    Sweep {
        u,
        du,
        nodes,
        samples,
    }
}

struct Shot {
    /// scaled Wronskian mismatch at the match radius; zero at eigenvalues
    wronskian: f64,
    nodes: u32,
    out: Sweep,
    inw: Sweep,
}

fn shoot(problem: &Problem, beta: f64, record: bool) -> Shot {
    let (r_min, r_match, r_max, mesh) = problem.grid();
    let span = (r_max / r_min).ln();
    let n_out = ((mesh as f64) * (r_match / r_min).ln() / span)
        .round()
        .max(8.0) as usize;
    let n_in = (mesh - n_out.min(mesh - 8)).max(8);
    let (u0, du0) = match problem {
        Problem::Fisheye(p) => fisheye_series_origin(p, beta, r_min),
        Problem::Coulomb(p) => coulomb_series_origin(p, beta, r_min),
    };
    let out = sweep(problem, beta, r_min, r_match, u0, du0, n_out, record);
    let (u1, du1) = match problem {
        Problem::Fisheye(p) => fisheye_series_infinity(p, beta, r_max),
        Problem::Coulomb(p) => coulomb_series_infinity(p, beta, r_max),
    };
    let inw = sweep(problem, beta, r_max, r_match, u1, du1, n_in, record);
    let w = out.du * inw.u - inw.du * out.u;
    // Prüfer-style scaling: the norms of the (u, u') phase vectors never
    // vanish, so the scaled mismatch goes to zero smoothly even when the
    // eigenfunction or its derivative has a zero at the match radius.
    let scale = out.u.hypot(out.du) * inw.u.hypot(inw.du);
    let wronskian = if scale > 0.0 { w / scale } else { w };
    Shot {
        wronskian,
        nodes: out.nodes + inw.nodes,
        out,
        inw,
    }
}

// ---------------------------------------------------------------------------
// Eigenvalue search
// ---------------------------------------------------------------------------

/// Default coupling search window.
pub const BETA_MAX: f64 = 1e4;
const SCAN_FACTOR: f64 = 1.05;

/// Bisect the Wronskian sign change inside (lo, hi) to ~1e-13 relative.
fn refine(problem: &Problem, mut lo: f64, mut w_lo: f64, mut hi: f64) -> f64 {
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= 1e-13 * mid {
            break;
        }
        let w_mid = shoot(problem, mid, false).wronskian;
        if w_mid == 0.0 {
            return mid;
        }
        if w_mid.signum() == w_lo.signum() {
            lo = mid;
            w_lo = w_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Locate all eigenvalues inside (lo, hi), given shots at both ends.
/// A Wronskian sign flip marks an eigenvalue; node-count jumps flag cells
/// that may hold more than one and trigger subdivision.
#[allow(clippy::too_many_arguments)]
fn locate(
    problem: &Problem,
    lo: f64,
    shot_lo: (f64, u32),
    hi: f64,
    shot_hi: (f64, u32),
    found: &mut Vec<f64>,
    depth: u32,
) {
    let (w_lo, n_lo) = shot_lo;
    let (w_hi, n_hi) = shot_hi;
    let jumps = n_hi.saturating_sub(n_lo);
    let flip = w_lo.signum() != w_hi.signum();
    if jumps == 0 && !flip {
        return;
    }
    if flip && jumps <= 1 {
        found.push(refine(problem, lo, w_lo, hi));
        return;
    }
    if depth >= 40 {
        if flip {
            found.push(refine(problem, lo, w_lo, hi));
        }
        return;
    }
    // several eigenvalues, or a node jump without a sign flip: split
    let mid = 0.5 * (lo + hi);
    let sm = shoot(problem, mid, false);
    locate(
        problem,
        lo,
        shot_lo,
        mid,
        (sm.wronskian, sm.nodes),
        found,
        depth + 1,
    );
    locate(
        problem,
        mid,
        (sm.wronskian, sm.nodes),
        hi,
        shot_hi,
        found,
        depth + 1,
    );
}

fn solve_couplings(
    problem: &Problem,
    count: usize,
    beta_start: f64,
    beta_max: f64,
) -> Result<CouplingSpectrum> {
    problem.validate()?;
    if count < 1 {
        return Err(Error::Domain(format!("coupling count ≥ 1 (got {count})")));
    }
    if !(beta_max > beta_start && beta_start > 0.0) {
        return Err(Error::Domain("require 0 < beta_start < beta_max".into()));
    }
    let mut found: Vec<f64> = Vec::new();
    let mut b_prev = beta_start;
    let s_prev = shoot(problem, b_prev, false);
    let mut shot_prev = (s_prev.wronskian, s_prev.nodes);
    let mut b = b_prev;
    while found.len() < count && b < beta_max {
        b = (b * SCAN_FACTOR).min(beta_max);
        let s = shoot(problem, b, false);
        let shot = (s.wronskian, s.nodes);
        locate(problem, b_prev, shot_prev, b, shot, &mut found, 0);
        b_prev = b;
        shot_prev = shot;
    }
    if found.len() < count {
        return Err(Error::SearchWindow(format!(
            "found {} couplings in β ∈ ({beta_start:.3e}, {beta_max:.1e}), needed {count} \
             (l = {}, node count at window edge {})",
            found.len(),
            problem.l(),
            shot_prev.1,
        )));
    }
    found.truncate(count);
    let mut entries = Vec::with_capacity(found.len());
    for &beta in &found {
        let sol = eigenfunction(problem, beta)?;
        entries.push(CouplingEntry {
            nodes: sol.node_count,
            beta,
        });
    }
    Ok(CouplingSpectrum {
        entries,
        problem: problem.clone(),
    })
}

/// Lowest `count` quantized couplings of the fish-eye problem at E = 0,
/// searched inside the default window (0, 1e4].
pub fn solve_fisheye_couplings(problem: &RadialProblem, count: usize) -> Result<CouplingSpectrum> {
    solve_couplings(&Problem::Fisheye(problem.clone()), count, 0.5, BETA_MAX)
}

/// Same, with an explicit search window cap.
pub fn solve_fisheye_couplings_bounded(
    problem: &RadialProblem,
    count: usize,
    beta_max: f64,
) -> Result<CouplingSpectrum> {
    solve_couplings(&Problem::Fisheye(problem.clone()), count, 0.5, beta_max)
}

/// Lowest `count` Coulomb Sturmian couplings at fixed E = -k²/2; returns
/// β_n = nk starting at n = l+1.
pub fn solve_coulomb_sturmian(k: f64, l: u32, count: usize) -> Result<CouplingSpectrum> {
    let problem = CoulombProblem::new(k, l);
    solve_couplings(
        &Problem::Coulomb(problem),
        count,
        0.05 * k.max(1e-3),
        BETA_MAX,
    )
}

/// Same, with a caller-tuned problem descriptor.
pub fn solve_coulomb_sturmian_with(
    problem: &CoulombProblem,
    count: usize,
) -> Result<CouplingSpectrum> {
    solve_couplings(
        &Problem::Coulomb(problem.clone()),
        count,
        0.05 * problem.k.max(1e-3),
        BETA_MAX,
    )
}

// ---------------------------------------------------------------------------
// Eigenfunctions and overlaps
// ---------------------------------------------------------------------------

/// Two-sided shooting eigenfunction at coupling β, normalized to unit
/// weighted norm ∫ u² W dr = 1. Errors if β is not an eigenvalue (Wronskian
/// mismatch above tolerance).
pub fn eigenfunction(problem: &Problem, beta: f64) -> Result<SturmianSolution> {
    problem.validate()?;
    let shot = shoot(problem, beta, true);
    if shot.wronskian.abs() > 1e-5 {
        return Err(Error::NotAnEigenvalue(format!(
            "β = {beta}: scaled Wronskian mismatch {:.3e} at the match radius",
            shot.wronskian
        )));
    }
    // rescale the inward branch so both agree at the match radius; the
    // least-squares projection of the outward (u, u') vector onto the
    // inward one stays conditioned even when the eigenfunction or its
    // derivative has a node exactly at the match point
    let denom = shot.inw.u * shot.inw.u + shot.inw.du * shot.inw.du;
    if denom == 0.0 {
        return Err(Error::Numeric(
            "inward branch vanished at the match radius".into(),
        ));
    }
    let scale = (shot.out.u * shot.inw.u + shot.out.du * shot.inw.du) / denom;
    let out_samples = shot.out.samples.expect("recorded");
    let in_samples = shot.inw.samples.expect("recorded");
    let mut samples = out_samples;
    // inward sweep runs r_max → match; reverse and rescale, skip the
    // duplicated match point
    for &(r, u) in in_samples.iter().rev().skip(1) {
        samples.push((r, u * scale));
    }
    // weighted normalization by trapezoid on the nonuniform mesh
    let norm2 = trapezoid_weighted(problem, &samples, &samples);
    if norm2 <= 0.0 || !norm2.is_finite() {
        return Err(Error::Numeric("eigenfunction has nonpositive norm".into()));
    }
    let inv = norm2.sqrt().recip();
    for e in samples.iter_mut() {
        e.1 *= inv;
    }
    let node_count = count_sign_changes(&samples);
    Ok(SturmianSolution {
        beta,
        samples,
        node_count,
    })
}

fn count_sign_changes(samples: &[(f64, f64)]) -> u32 {
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for &(_, u) in samples {
        let s = if u > 0.0 {
            1.0
        } else if u < 0.0 {
            -1.0
        } else {
            0.0
        };
        if s != 0.0 {
            if prev != 0.0 && s != prev {
                nodes += 1;
            }
            prev = s;
        }
    }
    nodes
}

fn trapezoid_weighted(problem: &Problem, a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut acc = 0.0;
    for i in 1..a.len() {
        let (r0, ua0) = a[i - 1];
        let (r1, ua1) = a[i];
        let ub0 = b[i - 1].1;
        let ub1 = b[i].1;
        let f0 = ua0 * ub0 * problem.orthogonality_weight(r0);
        let f1 = ua1 * ub1 * problem.orthogonality_weight(r1);
        acc += 0.5 * (f0 + f1) * (r1 - r0);
    }
    acc
}

/// Weighted overlap ∫ u_a u_b W dr of two solutions of the same problem
/// (weight 1/r for Coulomb, W_γ for the fish-eye family). Distinct
/// eigenfunctions are orthogonal in this inner product.
pub fn weighted_orthogonality(
    problem: &Problem,
    a: &SturmianSolution,
    b: &SturmianSolution,
) -> Result<f64> {
    if a.samples.len() != b.samples.len() {
        return Err(Error::Domain("solutions sampled on different grids".into()));
    }
    for (pa, pb) in a.samples.iter().zip(&b.samples) {
        if (pa.0 - pb.0).abs() > 1e-9 * (1.0 + pa.0.abs()) {
            return Err(Error::Domain("solutions sampled on different grids".into()));
        }
    }
    Ok(trapezoid_weighted(problem, &a.samples, &b.samples))
}
