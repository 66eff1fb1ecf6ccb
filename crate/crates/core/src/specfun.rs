//! Gegenbauer and associated Legendre polynomials, spherical and 4D
//! hyperspherical harmonics, the hydrogenic momentum-space amplitude, and
//! the Gauss quadrature machinery used to verify their normalization.
//!
//! Conventions: no Condon-Shortley phase anywhere; complex harmonics carry
//! e^{imφ}. The hyperspherical harmonics are orthonormal under the S³
//! measure sin²α dα sinθ dθ dφ (total volume 2π²).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::util::{factorial, ln_gamma};

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights of a fixed quadrature rule on [a, b].
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    a: f64,
    b: f64,
}

impl QuadratureGrid {
    /// Build from raw nodes/weights; enforces the structural invariants.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::Domain("node/weight length mismatch".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("nodes must be strictly increasing".into()));
        }
        if weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::Domain("weights must be strictly positive".into()));
        }
        Ok(Self {
            nodes,
            weights,
            a,
            b,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex(&self, mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// Gauss-Legendre rule with `n` nodes mapped to [a, b].
///
/// Nodes are roots of P_n found by Newton iteration from the Chebyshev
/// initial guess; weights w_i = 2/((1-x²)P_n'(x)²) scaled to the interval.
#[allow(clippy::needless_range_loop)] // each root fills two mirrored slots
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> QuadratureGrid {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = (b - a) / 2.0;
    let mid = (b + a) / 2.0;
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess for the i-th root (descending order).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = w * half;
        weights[n - 1 - i] = w * half;
    }
    QuadratureGrid::new(nodes, weights, a, b).expect("Gauss-Legendre construction is valid")
}

/// Adaptive Simpson quadrature; fallback when a fixed rule's error estimate
/// is too large (oscillatory or high-order integrands).
pub fn adaptive_quadrature(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth >= 50 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth + 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth + 1)
    }
    // irregular initial panels so symmetric integrand zeros (Chebyshev-type
    // nodes at rational fractions of the interval) cannot blind the first
    // Simpson estimates
    const SPLITS: [f64; 9] = [
        0.0, 0.1239487, 0.29517, 0.41123, 0.537, 0.68412, 0.79176, 0.91523, 1.0,
    ];
    let mut total = 0.0;
    for w in SPLITS.windows(2) {
        let pa = a + (b - a) * w[0];
        let pb = a + (b - a) * w[1];
        let fa = f(pa);
        let fb = f(pb);
        let (m, fm, whole) = simpson(f, pa, fa, pb, fb);
        total += recurse(f, pa, fa, pb, fb, whole, m, fm, tol / 8.0, 0);
    }
    total
}

// ---------------------------------------------------------------------------
// Gegenbauer polynomials
// ---------------------------------------------------------------------------

/// Three-term recurrence for C_k^λ(x); used internally with pre-validated
/// arguments.
pub(crate) fn gegenbauer_rec(k: u32, lambda: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut c_prev = 1.0;
    let mut c = 2.0 * lambda * x;
    for j in 2..=k {
        let jf = f64::from(j);
        let next = (2.0 * (jf + lambda - 1.0) * x * c - (jf + 2.0 * lambda - 2.0) * c_prev) / jf;
        c_prev = c;
        c = next;
    }
    c
}

/// C_k^λ(x) for k ≥ 0, λ > -1/2 and λ ≠ 0, |x| ≤ 1.
pub fn gegenbauer(k: u32, lambda: f64, x: f64) -> Result<f64> {
    if lambda <= -0.5 || lambda == 0.0 {
        return Err(Error::Domain(format!(
            "Gegenbauer order must satisfy λ > -1/2, λ ≠ 0 (got {lambda})"
        )));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "Gegenbauer argument |x| ≤ 1 (got {x})"
        )));
    }
    Ok(gegenbauer_rec(k, lambda, x))
}

/// Residual of the Gegenbauer addition theorem
/// C_n^{α+β}(x) = Σ_{m=0}^{n} C_m^α(x) C_{n-m}^β(x).
pub fn gegenbauer_addition_residual(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    let lhs = gegenbauer(n, alpha + beta, x)?;
    // validate the orders once; the loop then uses the raw recurrence
    gegenbauer(0, alpha, x)?;
    gegenbauer(0, beta, x)?;
    let mut sum = 0.0;
    for m in 0..=n {
        sum += gegenbauer_rec(m, alpha, x) * gegenbauer_rec(n - m, beta, x);
    }
    Ok((lhs - sum).abs())
}

/// Pointwise residual of the Gegenbauer differential equation
/// (1-x²)C'' - (2λ+1)xC' + k(k+2λ)C = 0, with second-order central
/// differences of step `h`.
pub fn gegenbauer_ode_residual(k: u32, lambda: f64, x: f64, h: f64) -> Result<f64> {
    let cm = gegenbauer(k, lambda, x - h)?;
    let c0 = gegenbauer(k, lambda, x)?;
    let cp = gegenbauer(k, lambda, x + h)?;
    let d1 = (cp - cm) / (2.0 * h);
    let d2 = (cp - 2.0 * c0 + cm) / (h * h);
    let kf = f64::from(k);
    Ok(((1.0 - x * x) * d2 - (2.0 * lambda + 1.0) * x * d1 + kf * (kf + 2.0 * lambda) * c0).abs())
}

/// ∫₀^π sin^{2p}α [C_l^p(cos α)]² dα by adaptive quadrature.
pub fn gegenbauer_norm_integral(l: u32, p: f64) -> Result<f64> {
    if p <= 0.0 {
        return Err(Error::Domain(format!(
            "Gegenbauer norm order p > 0 (got {p})"
        )));
    }
    let f = move |alpha: f64| {
        let s = alpha.sin();
        let c = gegenbauer_rec(l, p, alpha.cos());
        s.powf(2.0 * p) * c * c
    };
    Ok(adaptive_quadrature(&f, 0.0, std::f64::consts::PI, 1e-12))
}

/// Closed form of the same integral: πΓ(2p+l) / (2^{2p-1} l! (l+p) Γ²(p)).
pub fn gegenbauer_norm_closed_form(l: u32, p: f64) -> Result<f64> {
    if p <= 0.0 {
        return Err(Error::Domain(format!(
            "Gegenbauer norm order p > 0 (got {p})"
        )));
    }
    let lf = f64::from(l);
    let ln = std::f64::consts::PI.ln() + ln_gamma(2.0 * p + lf)
        - (2.0 * p - 1.0) * 2.0_f64.ln()
        - ln_gamma(lf + 1.0)
        - (lf + p).ln()
        - 2.0 * ln_gamma(p);
    Ok(ln.exp())
}

// ---------------------------------------------------------------------------
// Associated Legendre and spherical harmonics
// ---------------------------------------------------------------------------

/// P_l^m(x) without the Condon-Shortley phase:
/// P_l^m(x) = (2m-1)!! (1-x²)^{m/2} C_{l-m}^{m+1/2}(x), so P_l^0 is the
/// Legendre polynomial.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> Result<f64> {
    if m > l {
        return Err(Error::Domain(format!(
            "assoc_legendre requires m ≤ l (got l={l}, m={m})"
        )));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "assoc_legendre argument |x| ≤ 1 (got {x})"
        )));
    }
    let mut double_fact = 1.0;
    for j in 1..=m {
        double_fact *= f64::from(2 * j - 1);
    }
    let sin_pow = (1.0 - x * x).powf(f64::from(m) / 2.0);
    Ok(double_fact * sin_pow * gegenbauer_rec(l - m, f64::from(m) + 0.5, x))
}

/// Highest supported harmonic order; the factorial normalization loses its
/// accuracy budget beyond this.
pub const MAX_HARMONIC_L: u32 = 64;

/// Orthonormal spherical harmonic Y_lm(θ, φ) with phase e^{imφ} and no
/// Condon-Shortley sign: ∫ |Y_lm|² dΩ = 1 over S².
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    if l > MAX_HARMONIC_L {
        return Err(Error::Domain(format!(
            "spherical_harmonic supports l ≤ {MAX_HARMONIC_L} (got {l})"
        )));
    }
    if m.unsigned_abs() > l {
        return Err(Error::Domain(format!(
            "spherical_harmonic requires |m| ≤ l (got l={l}, m={m})"
        )));
    }
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::Domain("angles must be finite".into()));
    }
    let ma = m.unsigned_abs();
    let lf = f64::from(l);
    let norm = ((2.0 * lf + 1.0) / (4.0 * std::f64::consts::PI) * factorial(l - ma)
        / factorial(l + ma))
    .sqrt();
    let plm = assoc_legendre(l, ma, theta.cos())?;
    Ok(norm * plm * Complex64::from_polar(1.0, f64::from(m) * phi))
}

// ---------------------------------------------------------------------------
// Hyperspherical harmonics on S³
// ---------------------------------------------------------------------------

/// Quantum-number triple (n, l, m) with n ≥ 1, 0 ≤ l ≤ n-1, |m| ≤ l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    n: u32,
    l: u32,
    m: i32,
}

impl HarmonicIndex {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if n > MAX_HARMONIC_L + 1 {
            return Err(Error::Domain(format!(
                "hyperspherical index supports n ≤ {} (got {n})",
                MAX_HARMONIC_L + 1
            )));
        }
        if n < 1 {
            return Err(Error::Domain(format!(
                "principal quantum number n ≥ 1 (got {n})"
            )));
        }
        if l > n - 1 {
            return Err(Error::Domain(format!(
                "orbital quantum number l ≤ n-1 (got n={n}, l={l})"
            )));
        }
        if m.unsigned_abs() > l {
            return Err(Error::Domain(format!(
                "magnetic quantum number |m| ≤ l (got l={l}, m={m})"
            )));
        }
        Ok(Self { n, l, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// All valid indices with principal quantum number ≤ n_max, in
    /// lexicographic (n, l, m) order.
    pub fn all_up_to(n_max: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 1..=n_max {
            for l in 0..n {
                for m in -(l as i32)..=(l as i32) {
                    out.push(Self { n, l, m });
                }
            }
        }
        out
    }
}

/// 4D hyperspherical harmonic
/// Y_nlm(α,θ,φ) = 2^{l+1} l! [n (n-l-1)! / (2π (n+l)!)]^{1/2}
///                 sin^l α · C_{n-l-1}^{l+1}(cos α) · Y_lm(θ,φ),
/// orthonormal under ∫ sin²α dα sinθ dθ dφ.
pub fn hyperspherical_harmonic(idx: HarmonicIndex, alpha: f64, theta: f64, phi: f64) -> Complex64 {
    let (n, l) = (idx.n, idx.l);
    let lf = f64::from(l);
    let norm = 2.0_f64.powi(l as i32 + 1)
        * factorial(l)
        * (f64::from(n) * factorial(n - l - 1) / (2.0 * std::f64::consts::PI * factorial(n + l)))
            .sqrt();
    let radial = alpha.sin().powf(lf) * gegenbauer_rec(n - l - 1, lf + 1.0, alpha.cos());
    let ylm = spherical_harmonic(l, idx.m, theta, phi).expect("index is pre-validated");
    norm * radial * ylm
}

// ---------------------------------------------------------------------------
// Momentum-space amplitude
// ---------------------------------------------------------------------------

/// Fock change of variable: cos α = (1 - (np)²) / (1 + (np)²).
pub fn fock_cos_alpha(n_scale: f64, p: f64) -> f64 {
    let np2 = (n_scale * p) * (n_scale * p);
    (1.0 - np2) / (1.0 + np2)
}

/// Radial momentum-space amplitude of the hydrogenic state (n, l):
/// F_nl(p) = [2/π (n-l-1)!/(n+l)!]^{1/2} n² 2^{2l+2} l!
///           (np)^l / [(np)²+1]^{l+2} · C_{n-l-1}^{l+1}(cos α),
/// with cos α the Fock variable above and np = n_scale·p.
pub fn momentum_amplitude(idx: HarmonicIndex, n_scale: f64, p: f64) -> Result<f64> {
    if n_scale <= 0.0 {
        return Err(Error::Domain(format!(
            "n_scale must be positive (got {n_scale})"
        )));
    }
    if p < 0.0 {
        return Err(Error::Domain(format!("momentum magnitude p ≥ 0 (got {p})")));
    }
    let (n, l) = (idx.n, idx.l);
    let nf = f64::from(n);
    let lf = f64::from(l);
    let np = n_scale * p;
    let np2 = np * np;
    let norm = (2.0 / std::f64::consts::PI * factorial(n - l - 1) / factorial(n + l)).sqrt()
        * nf
        * nf
        * 2.0_f64.powi(2 * l as i32 + 2)
        * factorial(l);
    let shape = np.powf(lf) / (np2 + 1.0).powi(l as i32 + 2);
    Ok(norm * shape * gegenbauer_rec(n - l - 1, lf + 1.0, fock_cos_alpha(n_scale, p)))
}
