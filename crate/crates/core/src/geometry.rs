//! Stereographic projections, conformal factors, the Hopf map, coordinate
//! inversion, the Perlick radial reduction, Plücker line algebra with the
//! so(4) basis, and the conformal-Christoffel contraction check.
//!
//! Sphere radius is fixed to 1 and projection is from the north pole; the
//! two-parameter (sphere radius a, projection distance b) variant is exposed
//! separately for imaging-geometry checks.

// index loops mirror the tensor notation of the small fixed matrices here
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

pub type Point3 = [f64; 3];
pub type Point4 = [f64; 4];

fn norm2<const N: usize>(x: &[f64; N]) -> f64 {
    x.iter().map(|c| c * c).sum()
}

// ---------------------------------------------------------------------------
// Stereographic projection
// ---------------------------------------------------------------------------

/// R³ → S³: s_i = 2x_i/(r²+1), s₄ = (1-r²)/(1+r²).
pub fn stereo_r3_to_s3(x: Point3) -> Point4 {
    let r2 = norm2(&x);
    let d = 1.0 + r2;
    [
        2.0 * x[0] / d,
        2.0 * x[1] / d,
        2.0 * x[2] / d,
        (1.0 - r2) / d,
    ]
}

/// S³ → R³: x_i = s_i/(1+s₄); the pole s₄ = -1 is a genuine singularity.
pub fn stereo_s3_to_r3(s: Point4) -> Result<Point3> {
    let d = 1.0 + s[3];
    if d.abs() < 1e-12 {
        return Err(Error::Singularity("stereographic pole s4 = -1".into()));
    }
    Ok([s[0] / d, s[1] / d, s[2] / d])
}

/// R² → S² companion of the map above (same convention).
pub fn stereo_r2_to_s2(x: [f64; 2]) -> Point3 {
    let r2 = norm2(&x);
    let d = 1.0 + r2;
    [2.0 * x[0] / d, 2.0 * x[1] / d, (1.0 - r2) / d]
}

/// Two-parameter imaging variant: sphere of radius `a` projected onto a
/// space at distance `b`, ξ_i = 2ab·x_i/(b²+r²), τ = a(b²-r²)/(b²+r²).
/// Output lies on the radius-a sphere; `a = b = 1` recovers the unit map.
pub fn stereo_rn_to_sn_scaled(x: &[f64], a: f64, b: f64) -> Vec<f64> {
    let r2: f64 = x.iter().map(|c| c * c).sum();
    let d = b * b + r2;
    let mut out: Vec<f64> = x.iter().map(|&c| 2.0 * a * b * c / d).collect();
    out.push(a * (b * b - r2) / d);
    out
}

/// Quarter-convention R^n → S^n map: z_i = x_i/(1+¼x²), y = (1-¼x²)/(1+¼x²).
/// Its metric pullback is the conformal factor of `SphereConvention::Quarter`.
pub fn stereo_rn_to_sn_quarter(x: &[f64]) -> Vec<f64> {
    let r2: f64 = x.iter().map(|c| c * c).sum();
    let d = 1.0 + 0.25 * r2;
    let mut out: Vec<f64> = x.iter().map(|&c| c / d).collect();
    out.push((1.0 - 0.25 * r2) / d);
    out
}

/// Which form of the round-sphere conformal factor to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereConvention {
    /// ρ = (1/(1 + ¼|x|²))², the pullback of the quarter-convention map.
    Quarter,
    /// ρ = 4/(1+r²)², the pullback of the unit north-pole map.
    Luneburg,
}

/// Conformal factor of the round metric pulled back to flat space.
pub fn conformal_factor_sphere(x: &[f64], convention: SphereConvention) -> f64 {
    let r2: f64 = x.iter().map(|c| c * c).sum();
    match convention {
        SphereConvention::Quarter => {
            let d = 1.0 + 0.25 * r2;
            1.0 / (d * d)
        }
        SphereConvention::Luneburg => 4.0 / ((1.0 + r2) * (1.0 + r2)),
    }
}

/// Pullback metric g_ij = Σ_k ∂F_k/∂x_i ∂F_k/∂x_j of a map F: Rᵈ → R^{d+1}
/// by central differences; used to verify the conformal factors numerically.
pub fn metric_pullback(
    map: &dyn Fn(&[f64]) -> Vec<f64>,
    point: &[f64],
    step: f64,
) -> Vec<Vec<f64>> {
    let d = point.len();
    let mut jac: Vec<Vec<f64>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut xp = point.to_vec();
        let mut xm = point.to_vec();
        xp[i] += step;
        xm[i] -= step;
        let fp = map(&xp);
        let fm = map(&xm);
        jac.push(
            fp.iter()
                .zip(&fm)
                .map(|(a, b)| (a - b) / (2.0 * step))
                .collect(),
        );
    }
    let mut g = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            g[i][j] = jac[i].iter().zip(&jac[j]).map(|(a, b)| a * b).sum();
        }
    }
    g
}

// ---------------------------------------------------------------------------
// Refractive index of the deformed fish-eye family
// ---------------------------------------------------------------------------

/// n(r) = (a/r) · n₀ / ((r/a)^{-γ} + (r/a)^{γ}); reduces to the fish-eye
/// profile n₀/(1+r²/a²) exactly at γ = 1.
pub fn refractive_index(r: f64, gamma: f64, n0: f64, a: f64) -> Result<f64> {
    if gamma <= 0.0 {
        return Err(Error::Domain(format!(
            "deformation exponent γ > 0 (got {gamma})"
        )));
    }
    if r < 0.0 {
        return Err(Error::Domain(format!("radius r ≥ 0 (got {r})")));
    }
    if r == 0.0 {
        // n = n₀ (r/a)^{γ-1} / (1 + (r/a)^{2γ}) near the origin
        return match gamma.partial_cmp(&1.0).expect("finite") {
            std::cmp::Ordering::Equal => Ok(n0),
            std::cmp::Ordering::Greater => Ok(0.0),
            std::cmp::Ordering::Less => Err(Error::Singularity(
                "refractive index diverges at r = 0 for γ < 1".into(),
            )),
        };
    }
    let t = r / a;
    Ok((a / r) * n0 / (t.powf(-gamma) + t.powf(gamma)))
}

// ---------------------------------------------------------------------------
// Hopf map S³ → S²
// ---------------------------------------------------------------------------

/// Pairs z₁ = s₁+is₂, z₂ = s₃+is₄ and returns the S² image of the ratio
/// z₁/z₂ via inverse stereographic projection; z₁ = 0 maps to (0,0,-1) and
/// z₂ = 0 to (0,0,1). Phase rotations of (z₁, z₂) leave the image fixed.
pub fn hopf_map(s: Point4) -> Result<Point3> {
    let n = norm2(&s);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!(
            "hopf_map expects |s| = 1 (got |s|² = {n})"
        )));
    }
    // With z₁ z̄₂ = u + iv: image = (2u, 2v, |z₁|² - |z₂|²)
    let u = s[0] * s[2] + s[1] * s[3];
    let v = s[1] * s[2] - s[0] * s[3];
    let w = (s[0] * s[0] + s[1] * s[1]) - (s[2] * s[2] + s[3] * s[3]);
    Ok([2.0 * u, 2.0 * v, w])
}

// ---------------------------------------------------------------------------
// Inversion
// ---------------------------------------------------------------------------

/// x ↦ x/|x|²; the unit sphere is fixed and r'r = 1.
pub fn inversion(x: Point3) -> Result<Point3> {
    let r2 = norm2(&x);
    if r2 == 0.0 {
        return Err(Error::Singularity(
            "inversion undefined at the origin".into(),
        ));
    }
    Ok([x[0] / r2, x[1] / r2, x[2] / r2])
}

/// Canonical momentum partner of `inversion`: p' = |x|²p - 2x(x·p).
pub fn inversion_momentum(x: Point3, p: Point3) -> Result<Point3> {
    let r2 = norm2(&x);
    if r2 == 0.0 {
        return Err(Error::Singularity(
            "inversion undefined at the origin".into(),
        ));
    }
    let xp = x[0] * p[0] + x[1] * p[1] + x[2] * p[2];
    Ok([
        r2 * p[0] - 2.0 * x[0] * xp,
        r2 * p[1] - 2.0 * x[1] * xp,
        r2 * p[2] - 2.0 * x[2] * xp,
    ])
}

/// Max-norm departure of the finite-difference Jacobian of
/// (x, p) ↦ (x', p') from the symplectic condition MᵀJM = J.
pub fn inversion_symplectic_residual(x: Point3, p: Point3, step: f64) -> Result<f64> {
    let f = |state: &[f64; 6]| -> Result<[f64; 6]> {
        let xx = [state[0], state[1], state[2]];
        let pp = [state[3], state[4], state[5]];
        let xo = inversion(xx)?;
        let po = inversion_momentum(xx, pp)?;
        Ok([xo[0], xo[1], xo[2], po[0], po[1], po[2]])
    };
    let mut state = [x[0], x[1], x[2], p[0], p[1], p[2]];
    let mut m = [[0.0; 6]; 6];
    for j in 0..6 {
        let orig = state[j];
        state[j] = orig + step;
        let fp = f(&state)?;
        state[j] = orig - step;
        let fm = f(&state)?;
        state[j] = orig;
        for i in 0..6 {
            m[i][j] = (fp[i] - fm[i]) / (2.0 * step);
        }
    }
    // J in block form [[0, I], [-I, 0]]
    let j_of = |i: usize, j: usize| -> f64 {
        if i < 3 && j == i + 3 {
            1.0
        } else if i >= 3 && j == i - 3 {
            -1.0
        } else {
            0.0
        }
    };
    let mut worst: f64 = 0.0;
    for a in 0..6 {
        for b in 0..6 {
            let mut acc = 0.0;
            for i in 0..6 {
                for k in 0..6 {
                    acc += m[i][a] * j_of(i, k) * m[k][b];
                }
            }
            worst = worst.max((acc - j_of(a, b)).abs());
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Perlick radial reduction
// ---------------------------------------------------------------------------

/// Parameters of the Perlick type-I metric. β is kept as an exact integer
/// ratio so r̃^β never drifts through a rounded exponent.
#[derive(Debug, Clone, Copy)]
pub struct PerlickParams {
    beta_num: i64,
    beta_den: i64,
    pub k: f64,
    pub g: f64,
}

impl PerlickParams {
    pub fn new(beta_num: i64, beta_den: i64, k: f64, g: f64) -> Result<Self> {
        if beta_den == 0 {
            return Err(Error::Domain("β denominator must be nonzero".into()));
        }
        if (beta_num as f64 / beta_den as f64) <= 0.0 {
            return Err(Error::Domain("β must be positive".into()));
        }
        Ok(Self {
            beta_num,
            beta_den,
            k,
            g,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta_num as f64 / self.beta_den as f64
    }

    pub fn beta_ratio(&self) -> (i64, i64) {
        (self.beta_num, self.beta_den)
    }
}

/// Radial map of the type-I reduction:
/// r̃^β = r/(1+√(1+Kr²)) and f²(r̃) = (4/r̃²)(r̃^{-β} - K r̃^{β})^{-2}.
pub fn perlick_radial_map(params: &PerlickParams, r: f64) -> Result<(f64, f64)> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius r > 0 (got {r})")));
    }
    let disc = 1.0 + params.k * r * r;
    if disc <= 0.0 {
        return Err(Error::Domain(format!(
            "1 + Kr² must be positive (got {disc})"
        )));
    }
    let beta = params.beta();
    let rt_beta = r / (1.0 + disc.sqrt());
    let rt = rt_beta.powf(1.0 / beta);
    let denom = rt.powf(-beta) - params.k * rt.powf(beta);
    let f2 = 4.0 / (rt * rt) / (denom * denom);
    Ok((rt, f2))
}

/// Inverse of the radial map: r = 2 r̃^β / (1 - K r̃^{2β}).
pub fn perlick_radial_map_inverse(params: &PerlickParams, rtilde: f64) -> Result<f64> {
    if rtilde <= 0.0 {
        return Err(Error::Domain(format!("radius r̃ > 0 (got {rtilde})")));
    }
    let beta = params.beta();
    let y = rtilde.powf(beta);
    let denom = 1.0 - params.k * y * y;
    if denom <= 0.0 {
        return Err(Error::Domain(
            "r̃ outside the image of the radial map".into(),
        ));
    }
    Ok(2.0 * y / denom)
}

// ---------------------------------------------------------------------------
// Plücker line algebra and so(4)
// ---------------------------------------------------------------------------

/// Line coordinates (p01, p02, p03, p23, p31, p12) built from two affine
/// points; they satisfy p01·p23 + p02·p31 + p03·p12 = 0 identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PluckerLine {
    pub p01: f64,
    pub p02: f64,
    pub p03: f64,
    pub p23: f64,
    pub p31: f64,
    pub p12: f64,
}

impl PluckerLine {
    pub fn relation_residual(&self) -> f64 {
        self.p01 * self.p23 + self.p02 * self.p31 + self.p03 * self.p12
    }
}

/// Line through affine points x and y: direction p0i = y_i - x_i, moment
/// p_ij = x_i y_j - x_j y_i.
pub fn plucker_from_points(x: Point3, y: Point3) -> Result<PluckerLine> {
    let dx = [y[0] - x[0], y[1] - x[1], y[2] - x[2]];
    if norm2(&dx) == 0.0 {
        return Err(Error::Domain("coincident points define no line".into()));
    }
    Ok(PluckerLine {
        p01: dx[0],
        p02: dx[1],
        p03: dx[2],
        p23: x[1] * y[2] - x[2] * y[1],
        p31: x[2] * y[0] - x[0] * y[2],
        p12: x[0] * y[1] - x[1] * y[0],
    })
}

/// Incidence residual: the antisymmetric Plücker matrix applied to the
/// homogeneous point q = (x, y, z, w). Zero iff q lies on the line.
pub fn plucker_incidence(line: &PluckerLine, q: Point4) -> Point4 {
    // homogeneous coordinate first in the matrix ordering
    let qh = [q[3], q[0], q[1], q[2]];
    let p13 = -line.p31;
    let m = [
        [0.0, line.p23, -p13, line.p12],
        [-line.p23, 0.0, line.p03, -line.p02],
        [p13, -line.p03, 0.0, line.p01],
        [-line.p12, line.p02, -line.p01, 0.0],
    ];
    let mut out = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i] += m[i][j] * qh[j];
        }
    }
    out
}

/// Antisymmetric 4×4 integer matrix; exact arithmetic for the so(4) algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct So4Matrix {
    pub m: [[i64; 4]; 4],
}

impl So4Matrix {
    pub fn new(m: [[i64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                if m[i][j] != -m[j][i] {
                    return Err(Error::Domain("so(4) matrix must be antisymmetric".into()));
                }
            }
        }
        Ok(Self { m })
    }

    pub fn zero() -> Self {
        Self { m: [[0; 4]; 4] }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = self.m[i][j] + other.m[i][j];
            }
        }
        Self { m }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut m = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = self.m[i][j] - other.m[i][j];
            }
        }
        Self { m }
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut m = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = s * self.m[i][j];
            }
        }
        Self { m }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|row| row.iter().all(|&v| v == 0))
    }

    /// Coefficients (a₁,a₂,a₃,b₁,b₂,b₃) of the expansion in the standard
    /// basis, exact via the trace pairing ⟨M,N⟩ = tr(MᵀN)/2, or None if the
    /// matrix falls outside the span (impossible for true so(4) elements).
    pub fn expand_in_basis(&self) -> Option<[i64; 6]> {
        let (a, b) = so4_basis();
        let basis = [a[0], a[1], a[2], b[0], b[1], b[2]];
        let mut coef = [0i64; 6];
        let mut recon = So4Matrix::zero();
        for (k, e) in basis.iter().enumerate() {
            let mut tr = 0i64;
            for i in 0..4 {
                for j in 0..4 {
                    tr += e.m[j][i] * self.m[j][i];
                }
            }
            debug_assert_eq!(tr % 2, 0);
            coef[k] = tr / 2;
            recon = recon.add(&e.scale(coef[k]));
        }
        if recon == *self {
            Some(coef)
        } else {
            None
        }
    }
}

/// The printed so(4) basis: rotation generators A₁..A₃ and boost-like
/// B₁..B₃. Direct multiplication gives [A_i,A_j] = ε_ijk A_k,
/// [B_i,B_j] = ε_ijk A_k and [A_i,B_j] = ε_ijk B_k; the commuting split is
/// realized by J^± = (A ± B)/2.
pub fn so4_basis() -> ([So4Matrix; 3], [So4Matrix; 3]) {
    let a1 = So4Matrix {
        m: [[0, 0, 0, 0], [0, 0, -1, 0], [0, 1, 0, 0], [0, 0, 0, 0]],
    };
    let a2 = So4Matrix {
        m: [[0, 0, 1, 0], [0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0]],
    };
    let a3 = So4Matrix {
        m: [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    };
    let b1 = So4Matrix {
        m: [[0, 0, 0, -1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
    };
    let b2 = So4Matrix {
        m: [[0, 0, 0, 0], [0, 0, 0, -1], [0, 0, 0, 0], [0, 1, 0, 0]],
    };
    let b3 = So4Matrix {
        m: [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    };
    ([a1, a2, a3], [b1, b2, b3])
}

/// [M1, M2] = M1·M2 - M2·M1 in exact integer arithmetic.
pub fn so4_commutator(m1: &So4Matrix, m2: &So4Matrix) -> So4Matrix {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0;
            for k in 0..4 {
                acc += m1.m[i][k] * m2.m[k][j] - m2.m[i][k] * m1.m[k][j];
            }
            out[i][j] = acc;
        }
    }
    So4Matrix { m: out }
}

// ---------------------------------------------------------------------------
// Conformal Christoffel contraction
// ---------------------------------------------------------------------------

/// For g_ij = δ_ij/ρ, computes Christoffel symbols by central differences of
/// the metric and returns Σ_i |g^{kl}Γ^i_{kl} - ((d-2)/2) δ^{ij} ∂_j ρ|.
///
/// The ρ field must be smooth and positive over the full FD stencil.
pub fn conformal_christoffel_residual(
    rho: &dyn Fn(&[f64]) -> f64,
    point: &[f64],
    step: f64,
) -> Result<f64> {
    let d = point.len();
    if !(2..=4).contains(&d) {
        return Err(Error::Domain(format!("dimension must be 2..4 (got {d})")));
    }
    let rho0 = rho(point);
    if rho0 <= 0.0 {
        return Err(Error::Domain("ρ must be positive on the stencil".into()));
    }
    // metric component g_ml at an offset point
    let g_at = |shift: &[(usize, f64)], m: usize, l: usize| -> Result<f64> {
        let mut x = point.to_vec();
        for &(idx, dv) in shift {
            x[idx] += dv;
        }
        let r = rho(&x);
        if r <= 0.0 {
            return Err(Error::Domain("ρ must be positive on the stencil".into()));
        }
        Ok(if m == l { 1.0 / r } else { 0.0 })
    };
    // ∂_k g_ml by central differences
    let dg = |k: usize, m: usize, l: usize| -> Result<f64> {
        Ok((g_at(&[(k, step)], m, l)? - g_at(&[(k, -step)], m, l)?) / (2.0 * step))
    };
    // ∂_j ρ by central differences
    let mut drho = vec![0.0; d];
    for (j, dr) in drho.iter_mut().enumerate() {
        let mut xp = point.to_vec();
        let mut xm = point.to_vec();
        xp[j] += step;
        xm[j] -= step;
        *dr = (rho(&xp) - rho(&xm)) / (2.0 * step);
    }
    let mut residual = 0.0;
    for i in 0..d {
        // g^{kl} Γ^i_{kl} with g^{im} = ρ δ^{im}, g^{kl} = ρ δ^{kl}
        let mut contraction = 0.0;
        for k in 0..d {
            // Γ^i_{kk} = ½ g^{ii} (2 ∂_k g_ik - ∂_i g_kk)
            let gamma = 0.5 * rho0 * (2.0 * dg(k, i, k)? - dg(i, k, k)?);
            contraction += rho0 * gamma;
        }
        residual += (contraction - 0.5 * (d as f64 - 2.0) * drho[i]).abs();
    }
    Ok(residual)
}

/// Residual of the trace identity Γ^i_{ki} = -(d/2) ∂_k ρ / ρ, summed over k.
pub fn conformal_trace_residual(
    rho: &dyn Fn(&[f64]) -> f64,
    point: &[f64],
    step: f64,
) -> Result<f64> {
    let d = point.len();
    if !(2..=4).contains(&d) {
        return Err(Error::Domain(format!("dimension must be 2..4 (got {d})")));
    }
    let rho0 = rho(point);
    if rho0 <= 0.0 {
        return Err(Error::Domain("ρ must be positive on the stencil".into()));
    }
    let rho_at = |idx: usize, dv: f64| -> f64 {
        let mut x = point.to_vec();
        x[idx] += dv;
        rho(&x)
    };
    let mut residual = 0.0;
    for k in 0..d {
        let drho_k = (rho_at(k, step) - rho_at(k, -step)) / (2.0 * step);
        // Γ^i_{ki} = ½ g^{im}(∂_k g_mi + ∂_i g_mk - ∂_m g_ki) summed over i;
        // for the diagonal metric this collapses to -(d/2) ∂_k ln ρ... but we
        // evaluate it from metric differences to keep the check independent.
        let mut trace = 0.0;
        for i in 0..d {
            let g_at = |shift_idx: usize, dv: f64, m: usize, l: usize| -> f64 {
                if m != l {
                    return 0.0;
                }
                1.0 / rho_at(shift_idx, dv)
            };
            let dk_gii = (g_at(k, step, i, i) - g_at(k, -step, i, i)) / (2.0 * step);
            let di_gik = if i == k { dk_gii } else { 0.0 };
            let dm_gki = if i == k {
                (g_at(i, step, k, k) - g_at(i, -step, k, k)) / (2.0 * step)
            } else {
                0.0
            };
            trace += 0.5 * rho0 * (dk_gii + di_gik - dm_gki);
        }
        residual += (trace + 0.5 * d as f64 * drho_k / rho0).abs();
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // -- stereographic -------------------------------------------------------

    #[test]
    fn origin_maps_to_north_pole() {
        assert_eq!(stereo_r3_to_s3([0.0, 0.0, 0.0]), [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn unit_sphere_maps_to_equator() {
        let s = stereo_r3_to_s3([1.0, 0.0, 0.0]);
        assert_relative_eq!(s[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(s[3], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn image_lies_on_sphere_and_round_trips() {
        let mut rng = crate::util::SplitMix64::new(1);
        for _ in 0..1000 {
            let x = [
                rng.in_range(-3.0, 3.0),
                rng.in_range(-3.0, 3.0),
                rng.in_range(-3.0, 3.0),
            ];
            let s = stereo_r3_to_s3(x);
            assert!((norm2(&s) - 1.0).abs() < 1e-14);
            let back = stereo_s3_to_r3(s).unwrap();
            for i in 0..3 {
                assert!((back[i] - x[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pole_is_rejected() {
        assert!(stereo_s3_to_r3([0.0, 0.0, 0.0, -1.0]).is_err());
    }

    #[test]
    fn half_angle_cotangent_identity() {
        // 1/r = cot(α/2) with cos α = s₄: at r = 1, α = π/2 and cot(π/4) = 1
        let s = stereo_r3_to_s3([1.0, 0.0, 0.0]);
        let alpha = s[3].acos();
        assert_relative_eq!(1.0, (alpha / 2.0).tan().recip(), epsilon = 1e-14);
        // and at a generic radius
        let r = 0.37;
        let s = stereo_r3_to_s3([r, 0.0, 0.0]);
        let alpha = s[3].acos();
        assert_relative_eq!(1.0 / r, (alpha / 2.0).tan().recip(), epsilon = 1e-12);
    }

    #[test]
    fn scaled_variant_reduces_to_unit_map() {
        let x = [0.3, -0.7, 1.1];
        let s = stereo_r3_to_s3(x);
        let v = stereo_rn_to_sn_scaled(&x, 1.0, 1.0);
        for i in 0..4 {
            assert_relative_eq!(s[i], v[i], epsilon = 1e-15);
        }
        // radius-a sphere for generic (a, b)
        let v = stereo_rn_to_sn_scaled(&x, 2.5, 0.8);
        let n: f64 = v.iter().map(|c| c * c).sum();
        assert_relative_eq!(n, 2.5 * 2.5, epsilon = 1e-12);
    }

    // -- conformal factor ------------------------------------------------------

    #[test]
    fn conformal_factor_reference_values() {
        assert_relative_eq!(
            conformal_factor_sphere(&[0.0, 0.0, 0.0], SphereConvention::Quarter),
            1.0
        );
        assert_relative_eq!(
            conformal_factor_sphere(&[1.0, 0.0], SphereConvention::Luneburg),
            1.0
        );
    }

    #[test]
    fn conformal_factor_matches_metric_pullback() {
        let x = [0.3, 0.4, 0.0];
        let g = metric_pullback(&|p| stereo_rn_to_sn_quarter(p), &x, 1e-4);
        let rho = conformal_factor_sphere(&x, SphereConvention::Quarter);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { rho } else { 0.0 };
                assert!((g[i][j] - expect).abs() < 1e-6, "g[{i}][{j}]={}", g[i][j]);
            }
        }
        let x2 = [0.5, -0.2];
        let g2 = metric_pullback(&|p| stereo_rn_to_sn_quarter(&[p[0], p[1]]), &x2, 1e-4);
        let _ = g2;
        let g3 = metric_pullback(
            &|p| {
                let s = stereo_r2_to_s2([p[0], p[1]]);
                s.to_vec()
            },
            &x2,
            1e-4,
        );
        let rho2 = conformal_factor_sphere(&x2, SphereConvention::Luneburg);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { rho2 } else { 0.0 };
                assert!((g3[i][j] - expect).abs() < 1e-6);
            }
        }
    }

    // -- refractive index --------------------------------------------------------

    #[test]
    fn fisheye_at_unit_radius() {
        assert_relative_eq!(refractive_index(1.0, 1.0, 2.0, 1.0).unwrap(), 1.0);
        // any γ gives n₀/2 at r = a
        assert_relative_eq!(refractive_index(1.0, 0.5, 2.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn gamma_one_is_exact_fisheye() {
        for i in 1..=100 {
            let r = 0.05 * i as f64;
            let n = refractive_index(r, 1.0, 3.0, 2.0).unwrap();
            let fisheye = 3.0 / (1.0 + r * r / 4.0);
            assert_relative_eq!(n, fisheye, epsilon = 1e-14);
        }
    }

    #[test]
    fn origin_limits() {
        assert_relative_eq!(refractive_index(0.0, 1.0, 5.0, 1.0).unwrap(), 5.0);
        assert_relative_eq!(refractive_index(0.0, 2.0, 5.0, 1.0).unwrap(), 0.0);
        assert!(refractive_index(0.0, 0.5, 5.0, 1.0).is_err());
    }

    // -- Hopf map -----------------------------------------------------------------

    #[test]
    fn hopf_reference_points() {
        let south = hopf_map([0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_relative_eq!(south[2], -1.0, epsilon = 1e-14);
        let north = hopf_map([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(north[2], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn hopf_fibers_collapse() {
        for &t in &[0.0_f64, 1.0, 2.0] {
            let p = hopf_map([t.cos(), t.sin(), 0.0, 0.0]).unwrap();
            assert_relative_eq!(p[0], 0.0, epsilon = 1e-14);
            assert_relative_eq!(p[1], 0.0, epsilon = 1e-14);
            assert_relative_eq!(p[2], 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn hopf_image_is_unit_and_fiber_invariant() {
        let mut rng = crate::util::SplitMix64::new(2);
        for _ in 0..100 {
            let s: [f64; 4] = rng.on_sphere();
            let base = hopf_map(s).unwrap();
            assert!((norm2(&base) - 1.0).abs() < 1e-12);
            for _ in 0..8 {
                let phase = rng.in_range(0.0, std::f64::consts::TAU);
                let (c, sn) = (phase.cos(), phase.sin());
                // rotate (z₁, z₂) by a common phase
                let rotated = [
                    c * s[0] - sn * s[1],
                    sn * s[0] + c * s[1],
                    c * s[2] - sn * s[3],
                    sn * s[2] + c * s[3],
                ];
                let q = hopf_map(rotated).unwrap();
                for i in 0..3 {
                    assert!((q[i] - base[i]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn hopf_rejects_off_sphere_input() {
        assert!(hopf_map([0.5, 0.0, 0.0, 0.0]).is_err());
    }

    // -- inversion -------------------------------------------------------------------

    #[test]
    fn unit_sphere_is_fixed() {
        let x = [0.6, 0.8, 0.0];
        let xi = inversion(x).unwrap();
        for i in 0..3 {
            assert_relative_eq!(xi[i], x[i], epsilon = 1e-15);
        }
        let y = inversion([2.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(y[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn inversion_is_involutive() {
        let mut rng = crate::util::SplitMix64::new(3);
        for _ in 0..1000 {
            let x = [
                rng.in_range(0.1, 2.0),
                rng.in_range(-2.0, 2.0),
                rng.in_range(-2.0, 2.0),
            ];
            let twice = inversion(inversion(x).unwrap()).unwrap();
            for i in 0..3 {
                assert!((twice[i] - x[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inversion_jacobian_is_symplectic() {
        let res = inversion_symplectic_residual([1.0, 1.0, 0.0], [0.2, -0.3, 0.1], 1e-5).unwrap();
        assert!(res < 1e-8, "symplectic residual {res}");
    }

    #[test]
    fn inversion_origin_is_singular() {
        assert!(inversion([0.0; 3]).is_err());
    }

    // -- Perlick radial map ---------------------------------------------------------

    #[test]
    fn flat_case() {
        let p = PerlickParams::new(1, 1, 0.0, 0.0).unwrap();
        let (rt, f2) = perlick_radial_map(&p, 2.0).unwrap();
        assert_relative_eq!(rt, 1.0, epsilon = 1e-14);
        assert_relative_eq!(f2, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn fisheye_conformal_factor_at_beta_one() {
        let p = PerlickParams::new(1, 1, -1.0, 0.0).unwrap();
        for i in 1..=100 {
            let r = 0.009 * i as f64;
            let (rt, f2) = perlick_radial_map(&p, r).unwrap();
            let fisheye = conformal_factor_sphere(&[rt, 0.0], SphereConvention::Luneburg);
            assert_relative_eq!(f2, fisheye, epsilon = 1e-12);
        }
    }

    #[test]
    fn half_beta_kinetic_factor() {
        // 1/f² · 4 = r̃²(r̃^{-1/2}+r̃^{1/2})² = r̃(1+r̃)²
        let p = PerlickParams::new(1, 2, -1.0, 0.0).unwrap();
        for i in 1..=50 {
            let r = 0.015 * i as f64;
            let (rt, f2) = perlick_radial_map(&p, r).unwrap();
            assert_relative_eq!(4.0 / f2, rt * (1.0 + rt) * (1.0 + rt), epsilon = 1e-11);
        }
    }

    #[test]
    fn radial_map_round_trips() {
        for &(num, den, k) in &[(1i64, 1i64, 0.0), (1, 1, -1.0), (1, 2, -1.0), (2, 3, 0.5)] {
            let p = PerlickParams::new(num, den, k, 0.0).unwrap();
            for i in 1..=40 {
                let r = 0.02 * i as f64;
                if 1.0 + k * r * r <= 0.0 {
                    continue;
                }
                let (rt, _) = perlick_radial_map(&p, r).unwrap();
                let back = perlick_radial_map_inverse(&p, rt).unwrap();
                assert_relative_eq!(back, r, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn radial_map_domain_errors() {
        let p = PerlickParams::new(1, 1, -1.0, 0.0).unwrap();
        assert!(perlick_radial_map(&p, 2.0).is_err()); // 1 + Kr² < 0
        assert!(perlick_radial_map(&p, 0.0).is_err());
        assert!(PerlickParams::new(1, 0, 0.0, 0.0).is_err());
        assert!(PerlickParams::new(-1, 2, 0.0, 0.0).is_err());
    }

    // -- Plücker ------------------------------------------------------------------------

    #[test]
    fn plucker_reference_line() {
        let line = plucker_from_points([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            (line.p01, line.p02, line.p03, line.p23, line.p31, line.p12),
            (-1.0, 1.0, 0.0, 0.0, 0.0, 1.0)
        );
        assert_eq!(line.relation_residual(), 0.0);
    }

    #[test]
    fn midpoint_is_incident() {
        let line = plucker_from_points([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        let res = plucker_incidence(&line, [0.5, 0.5, 0.0, 1.0]);
        for v in res {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn off_line_point_has_residual() {
        let line = plucker_from_points([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        let res = plucker_incidence(&line, [0.0, 0.0, 1.0, 1.0]);
        assert!(res.iter().any(|v| v.abs() > 0.1));
    }

    #[test]
    fn relation_holds_for_random_lines() {
        let mut rng = crate::util::SplitMix64::new(4);
        for _ in 0..200 {
            let x = [
                rng.in_range(-2.0, 2.0),
                rng.in_range(-2.0, 2.0),
                rng.in_range(-2.0, 2.0),
            ];
            let y = [
                rng.in_range(-2.0, 2.0),
                rng.in_range(-2.0, 2.0),
                rng.in_range(-2.0, 2.0),
            ];
            if let Ok(line) = plucker_from_points(x, y) {
                assert!(line.relation_residual().abs() < 1e-12);
                // points on the segment are incident
                let t = rng.next_f64();
                let q = [
                    x[0] + t * (y[0] - x[0]),
                    x[1] + t * (y[1] - x[1]),
                    x[2] + t * (y[2] - x[2]),
                    1.0,
                ];
                let res = plucker_incidence(&line, q);
                for v in res {
                    assert!(v.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn degenerate_line_is_rejected() {
        assert!(plucker_from_points([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]).is_err());
    }

    // -- so(4) ------------------------------------------------------------------------------

    #[test]
    fn a_commutators_close_on_a() {
        let (a, _) = so4_basis();
        assert_eq!(so4_commutator(&a[0], &a[1]), a[2]);
        assert_eq!(so4_commutator(&a[1], &a[2]), a[0]);
        assert_eq!(so4_commutator(&a[2], &a[0]), a[1]);
    }

    #[test]
    fn b_commutators_land_in_a() {
        // the printed matrices satisfy [B_i, B_j] = ε_ijk A_k, not ε_ijk B_k
        let (a, b) = so4_basis();
        assert_eq!(so4_commutator(&b[0], &b[1]), a[2]);
        assert_eq!(so4_commutator(&b[1], &b[2]), a[0]);
        assert_eq!(so4_commutator(&b[2], &b[0]), a[1]);
    }

    #[test]
    fn mixed_commutators() {
        let (a, b) = so4_basis();
        assert_eq!(so4_commutator(&a[0], &b[1]), b[2]);
        assert_eq!(so4_commutator(&a[1], &b[2]), b[0]);
        assert_eq!(so4_commutator(&a[0], &b[0]), So4Matrix::zero());
    }

    #[test]
    fn j_plus_minus_commute() {
        // work with 2J^± = A ± B to stay integer: [J⁺_i, J⁻_j] = 0 iff
        // [A_i + B_i, A_j - B_j] = 0.
        let (a, b) = so4_basis();
        for i in 0..3 {
            for j in 0..3 {
                let plus = a[i].add(&b[i]);
                let minus = a[j].sub(&b[j]);
                assert!(
                    so4_commutator(&plus, &minus).is_zero(),
                    "[J+_{i}, J-_{j}] ≠ 0"
                );
            }
        }
        // and each J family closes as so(3): [2J_i, 2J_j] = 2·(2J_k)
        for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
            let pi = a[i].add(&b[i]);
            let pj = a[j].add(&b[j]);
            let pk = a[k].add(&b[k]);
            assert_eq!(so4_commutator(&pi, &pj), pk.scale(2));
            let mi = a[i].sub(&b[i]);
            let mj = a[j].sub(&b[j]);
            let mk = a[k].sub(&b[k]);
            assert_eq!(so4_commutator(&mi, &mj), mk.scale(2));
        }
    }

    #[test]
    fn commutators_stay_in_span() {
        let (a, b) = so4_basis();
        let basis = [a[0], a[1], a[2], b[0], b[1], b[2]];
        for x in &basis {
            for y in &basis {
                let c = so4_commutator(x, y);
                assert!(c.expand_in_basis().is_some());
            }
        }
    }

    #[test]
    fn basis_is_antisymmetric() {
        let (a, b) = so4_basis();
        for m in a.iter().chain(b.iter()) {
            assert!(So4Matrix::new(m.m).is_ok());
        }
    }

    // -- Christoffel ------------------------------------------------------------------------

    #[test]
    fn constant_rho_gives_zero() {
        let rho = |_: &[f64]| 2.5;
        let r = conformal_christoffel_residual(&rho, &[0.3, 0.1, -0.2], 1e-4).unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn dimension_two_contraction_vanishes() {
        let rho = |x: &[f64]| 1.0 + 0.3 * x[0] * x[0] + 0.2 * x[0] * x[1] + 0.5 * x[1];
        let r = conformal_christoffel_residual(&rho, &[0.2, -0.1], 1e-4).unwrap();
        assert!(r <= 1e-5, "d=2 residual {r}");
    }

    #[test]
    fn fisheye_factor_in_three_dimensions() {
        let rho = |x: &[f64]| conformal_factor_sphere(x, SphereConvention::Quarter);
        let r = conformal_christoffel_residual(&rho, &[0.2, 0.1, 0.3], 1e-4).unwrap();
        assert!(r <= 1e-5, "d=3 residual {r}");
    }

    #[test]
    fn four_dimensional_smooth_field() {
        let rho = |x: &[f64]| (1.0 + x.iter().map(|c| c * c).sum::<f64>() / 4.0).powi(-2);
        let r = conformal_christoffel_residual(&rho, &[0.1, 0.2, -0.1, 0.05], 1e-4).unwrap();
        assert!(r <= 1e-5, "d=4 residual {r}");
    }

    #[test]
    fn trace_identity_holds() {
        let rho = |x: &[f64]| conformal_factor_sphere(x, SphereConvention::Quarter);
        let r = conformal_trace_residual(&rho, &[0.2, 0.1, 0.3], 1e-4).unwrap();
        assert!(r <= 1e-5, "trace residual {r}");
    }

    #[test]
    fn nonpositive_rho_is_domain_error() {
        let rho = |x: &[f64]| x[0];
        assert!(conformal_christoffel_residual(&rho, &[0.0, 0.1], 1e-4).is_err());
    }
}
