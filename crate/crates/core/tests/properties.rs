//! Property tests for the structural invariants: round trips, parities,
//! conservation laws, and constructor guarantees.

use bertrand_atoms::geometry::{
    hopf_map, inversion, inversion_momentum, plucker_from_points, stereo_r3_to_s3, stereo_s3_to_r3,
};
use bertrand_atoms::ptable::{configuration, FillingRule};
use bertrand_atoms::specfun::{gauss_legendre, gegenbauer};
use bertrand_atoms::spectra::{fisheye_coupling_law, LevelIndex};
use bertrand_atoms::sturm::FisheyeGamma;
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

proptest! {
    #[test]
    fn stereo_round_trip(x in coord(), y in coord(), z in coord()) {
        let s = stereo_r3_to_s3([x, y, z]);
        let n: f64 = s.iter().map(|c| c * c).sum();
        prop_assert!((n - 1.0).abs() < 1e-12);
        let back = stereo_s3_to_r3(s).unwrap();
        for (a, b) in back.iter().zip(&[x, y, z]) {
            prop_assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn inversion_involution(x in 0.05..4.0f64, y in coord(), z in coord()) {
        let p = [x, y, z];
        let q = inversion(p).unwrap();
        let r2: f64 = p.iter().map(|c| c * c).sum();
        let rq2: f64 = q.iter().map(|c| c * c).sum();
        // r'r = 1
        prop_assert!((rq2 * r2 - 1.0).abs() < 1e-10 * r2.max(1.0));
        let back = inversion(q).unwrap();
        for (a, b) in back.iter().zip(&p) {
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn inversion_momentum_is_linear_in_p(
        x in 0.1..2.0f64, y in coord(), p1 in coord(), p2 in coord(), c in -3.0..3.0f64
    ) {
        let pos = [x, y, 0.4];
        let a = inversion_momentum(pos, [p1, p2, 0.0]).unwrap();
        let b = inversion_momentum(pos, [c * p1, c * p2, 0.0]).unwrap();
        for i in 0..3 {
            prop_assert!((b[i] - c * a[i]).abs() < 1e-9 * (1.0 + a[i].abs()));
        }
    }

    #[test]
    fn hopf_fibers_are_invariant(seed in any::<u64>(), phase in 0.0..std::f64::consts::TAU) {
        let mut rng = bertrand_atoms::util::SplitMix64::new(seed);
        let s: [f64; 4] = rng.on_sphere();
        let base = hopf_map(s).unwrap();
        let (c, sn) = (phase.cos(), phase.sin());
        let rotated = [
            c * s[0] - sn * s[1],
            sn * s[0] + c * s[1],
            c * s[2] - sn * s[3],
            sn * s[2] + c * s[3],
        ];
        let q = hopf_map(rotated).unwrap();
        for i in 0..3 {
            prop_assert!((q[i] - base[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn gegenbauer_parity(k in 0u32..=20, lam in prop::sample::select(vec![0.5, 1.0, 1.5, 2.5]), x in -1.0..1.0f64) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let a = gegenbauer(k, lam, -x).unwrap();
        let b = sign * gegenbauer(k, lam, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn plucker_relation_is_identical(
        x1 in coord(), x2 in coord(), x3 in coord(),
        y1 in coord(), y2 in coord(), y3 in coord()
    ) {
        if let Ok(line) = plucker_from_points([x1, x2, x3], [y1, y2, y3]) {
            prop_assert!(line.relation_residual().abs() < 1e-12);
        }
    }

    #[test]
    fn configurations_conserve_electrons(z in 1u32..=120, rule_idx in 0usize..3) {
        let rule = [FillingRule::FockN, FillingRule::Nl, FillingRule::Madelung][rule_idx];
        let c = configuration(z, rule).unwrap();
        let total: u32 = c.shells.iter().map(|(_, occ)| occ).sum();
        prop_assert_eq!(total, z);
        for (o, occ) in &c.shells {
            prop_assert!(*occ <= o.capacity());
        }
    }

    #[test]
    fn coupling_laws_depend_only_on_their_keys(n_r in 0u32..=8, l in 0u32..=4) {
        let one = fisheye_coupling_law(FisheyeGamma::One, LevelIndex::new(n_r, l));
        let one_swapped = fisheye_coupling_law(FisheyeGamma::One, LevelIndex::new(l, n_r));
        prop_assert_eq!(one, one_swapped); // symmetric in n_r + l
        let half = fisheye_coupling_law(FisheyeGamma::Half, LevelIndex::new(n_r, l));
        let m = f64::from(n_r + 2 * l);
        prop_assert_eq!(half, (m + 1.0) * (m + 2.0));
    }

    #[test]
    fn quadrature_weights_sum_to_interval(n in 2usize..64, a in -2.0..0.0f64, b in 0.5..4.0f64) {
        let g = gauss_legendre(n, a, b);
        let sum: f64 = g.weights().iter().sum();
        prop_assert!((sum - (b - a)).abs() < 1e-12 * (b - a));
        prop_assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(g.weights().iter().all(|&w| w > 0.0));
    }
}
