//! The geometry invariant battery behind `bertrand-atoms geomcheck`. Each
//! check runs on deterministic pseudo-random inputs and reports the worst
//! measured residual against its bound.

use bertrand_atoms::geometry::{
    conformal_christoffel_residual, conformal_factor_sphere, conformal_trace_residual, hopf_map,
    inversion, inversion_symplectic_residual, metric_pullback, perlick_radial_map,
    plucker_from_points, plucker_incidence, so4_basis, so4_commutator, stereo_r3_to_s3,
    stereo_rn_to_sn_quarter, stereo_s3_to_r3, PerlickParams,
};
use bertrand_atoms::util::SplitMix64;

pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub bound: f64,
}

impl CheckResult {
    pub fn pass(&self) -> bool {
        self.measured <= self.bound
    }
}

pub fn run_battery() -> Vec<CheckResult> {
    let mut results = Vec::new();

    // stereographic round trips on 1000 points
    let mut rng = SplitMix64::new(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x = [
            rng.in_range(-3.0, 3.0),
            rng.in_range(-3.0, 3.0),
            rng.in_range(-3.0, 3.0),
        ];
        let s = stereo_r3_to_s3(x);
        let unit: f64 = s.iter().map(|c| c * c).sum::<f64>() - 1.0;
        worst = worst.max(unit.abs());
        let back = stereo_s3_to_r3(s).expect("away from the pole");
        for i in 0..3 {
            worst = worst.max((back[i] - x[i]).abs());
        }
    }
    results.push(CheckResult {
        name: "stereo_round_trip",
        measured: worst,
        bound: 1e-12,
    });

    // inversion: involution, r'r = 1, symplectic momentum pairing
    let mut rng = SplitMix64::new(0x5eed_0002);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x = [
            rng.in_range(0.2, 2.0),
            rng.in_range(-2.0, 2.0),
            rng.in_range(-2.0, 2.0),
        ];
        let xi = inversion(x).expect("origin excluded");
        let twice = inversion(xi).expect("origin excluded");
        for i in 0..3 {
            worst = worst.max((twice[i] - x[i]).abs());
        }
        let r2: f64 = x.iter().map(|c| c * c).sum();
        let ri2: f64 = xi.iter().map(|c| c * c).sum();
        worst = worst.max((r2 * ri2 - 1.0).abs() / r2.max(1.0));
    }
    results.push(CheckResult {
        name: "inversion_involution",
        measured: worst,
        bound: 1e-12,
    });

    let symplectic = inversion_symplectic_residual([1.0, 1.0, 0.0], [0.2, -0.3, 0.1], 1e-5)
        .expect("valid state");
    results.push(CheckResult {
        name: "inversion_symplectic",
        measured: symplectic,
        bound: 1e-8,
    });

    // Hopf fiber invariance: 100 base points, 8 phases each
    let mut rng = SplitMix64::new(0x5eed_0003);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s: [f64; 4] = rng.on_sphere();
        let base = hopf_map(s).expect("unit input");
        for _ in 0..8 {
            let phase = rng.in_range(0.0, std::f64::consts::TAU);
            let (c, sn) = (phase.cos(), phase.sin());
            let rotated = [
                c * s[0] - sn * s[1],
                sn * s[0] + c * s[1],
                c * s[2] - sn * s[3],
                sn * s[2] + c * s[3],
            ];
            let q = hopf_map(rotated).expect("unit input");
            for i in 0..3 {
                worst = worst.max((q[i] - base[i]).abs());
            }
        }
    }
    results.push(CheckResult {
        name: "hopf_fiber_invariance",
        measured: worst,
        bound: 1e-10,
    });

    // Plücker construction satisfies the quadratic relation; segment points
    // are incident
    let mut rng = SplitMix64::new(0x5eed_0004);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
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
            worst = worst.max(line.relation_residual().abs());
            let t = rng.next_f64();
            let q = [
                x[0] + t * (y[0] - x[0]),
                x[1] + t * (y[1] - x[1]),
                x[2] + t * (y[2] - x[2]),
                1.0,
            ];
            for v in plucker_incidence(&line, q) {
                worst = worst.max(v.abs());
            }
        }
    }
    results.push(CheckResult {
        name: "plucker_relation_incidence",
        measured: worst,
        bound: 1e-12,
    });

    // Perlick radial map at β=1, K=-1 reproduces the fish-eye factor
    let params = PerlickParams::new(1, 1, -1.0, 0.0).expect("valid");
    let mut worst: f64 = 0.0;
    for i in 1..=100 {
        let r = 0.009 * i as f64;
        let (rt, f2) = perlick_radial_map(&params, r).expect("in domain");
        let fisheye = conformal_factor_sphere(
            &[rt, 0.0],
            bertrand_atoms::geometry::SphereConvention::Luneburg,
        );
        worst = worst.max((f2 - fisheye).abs() / fisheye);
    }
    results.push(CheckResult {
        name: "perlick_fisheye_factor",
        measured: worst,
        bound: 1e-12,
    });

    // so(4): antisymmetry, exact commutator tables, closure in the span,
    // commuting J^± halves (computed at the 2J integer scale)
    let (a, b) = so4_basis();
    let mut exact = 0.0;
    for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
        if so4_commutator(&a[i], &a[j]) != a[k]
            || so4_commutator(&b[i], &b[j]) != a[k]
            || so4_commutator(&a[i], &b[j]) != b[k]
        {
            exact = 1.0;
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if !so4_commutator(&a[i].add(&b[i]), &a[j].sub(&b[j])).is_zero() {
                exact = 1.0;
            }
            if so4_commutator(&a[i], &b[j]).expand_in_basis().is_none() {
                exact = 1.0;
            }
        }
    }
    results.push(CheckResult {
        name: "so4_commutator_tables",
        measured: exact,
        bound: 0.0,
    });

    // conformal factor against the metric pullback of the projection
    let x = [0.3, 0.4, 0.0];
    let g = metric_pullback(&|p| stereo_rn_to_sn_quarter(p), &x, 1e-4);
    let rho = conformal_factor_sphere(&x, bertrand_atoms::geometry::SphereConvention::Quarter);
    let mut worst: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expect = if i == j { rho } else { 0.0 };
            worst = worst.max((v - expect).abs());
        }
    }
    results.push(CheckResult {
        name: "conformal_factor_pullback",
        measured: worst,
        bound: 1e-6,
    });

    // conformal Christoffel contraction in d = 2, 3, 4 plus the trace form
    let rho_field =
        |x: &[f64]| conformal_factor_sphere(x, bertrand_atoms::geometry::SphereConvention::Quarter);
    let mut worst: f64 = 0.0;
    worst =
        worst.max(conformal_christoffel_residual(&rho_field, &[0.3, -0.2], 1e-4).expect("smooth"));
    worst = worst
        .max(conformal_christoffel_residual(&rho_field, &[0.2, 0.1, 0.3], 1e-4).expect("smooth"));
    worst = worst.max(
        conformal_christoffel_residual(&rho_field, &[0.1, 0.2, -0.1, 0.05], 1e-4).expect("smooth"),
    );
    worst =
        worst.max(conformal_trace_residual(&rho_field, &[0.2, 0.1, 0.3], 1e-4).expect("smooth"));
    results.push(CheckResult {
        name: "conformal_christoffel",
        measured: worst,
        bound: 1e-5,
    });

    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_green() {
        for check in run_battery() {
            assert!(
                check.pass(),
                "{}: measured {} over bound {}",
                check.name,
                check.measured,
                check.bound
            );
        }
    }
}
