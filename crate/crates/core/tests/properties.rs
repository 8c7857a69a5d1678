use isopair_core::dilation::{build_commuting_unitaries, build_spectral_families, naimark_dilate};
use isopair_core::iso::{factor_residual, godic_lucenko_factor, phi_to_psi, psi_to_phi, build_theta, IsoUnitaryPair};
use isopair_core::linalg::matrix::{hermitian_part, min_eigenvalue, mirror};
use isopair_core::linalg::{cayley_transform, ExtPoint, C64};
use isopair_core::moments::{invert_grid_measure, moments_from_measure};
use isopair_core::pair::pair_resolvent;
use isopair_core::random::{
    haar_unitary, random_commutant_parameter, random_grid_pair, random_iso_unitary, random_operator_measure,
    random_pair, random_partial_isometry, random_scalar_measure,
};
use isopair_core::single::{chumakin_resolvent, SchurParameter};
use isopair_core::{generate, Instance, InstanceKind, InstanceSpec, SampleGrid};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn disk_point() -> impl Strategy<Value = C64> {
    (0.01f64..0.95, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cayley_adjoint_and_positivity(seed in any::<u64>(), n in 1usize..7, z in disk_point()) {
        let u = haar_unitary(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let a = cayley_transform(&u, z).unwrap();
        let b = cayley_transform(&u, mirror(z)).unwrap();
        prop_assert!((a.adjoint() + &b).norm() < 1e-9);
        prop_assert!(min_eigenvalue(&hermitian_part(&(a - b))) > -1e-9);
    }

    #[test]
    fn conjugation_factors_multiply_back(seed in any::<u64>(), n in 1usize..10) {
        let u = haar_unitary(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let (k, l) = godic_lucenko_factor(&u);
        prop_assert!(factor_residual(&u, &k, &l) < 1e-10);
        prop_assert!(k.involution_residual() < 1e-10);
        prop_assert!(l.involution_residual() < 1e-10);
    }

    #[test]
    fn moment_inversion_roundtrip(seed in any::<u64>(), n1 in 1usize..9, n2 in 1usize..9) {
        let m = random_scalar_measure(&mut ChaCha8Rng::seed_from_u64(seed), n1, n2);
        let back = invert_grid_measure(&moments_from_measure(&m, n1 - 1, n2 - 1), n1, n2).unwrap();
        for ((_, _, a), (_, _, b)) in m.cells().zip(back.cells()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn chumakin_resolvent_is_dissipative(seed in any::<u64>(), n in 1usize..6, z in disk_point()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = (seed % n as u64) as usize;
        let v = random_partial_isometry(&mut rng, n, d);
        let phi = isopair_core::random::random_constant_parameter(&mut rng, &v).unwrap();
        let r = chumakin_resolvent(&v, &phi, z).unwrap();
        prop_assert!(min_eigenvalue(&hermitian_part(&r)) >= 0.5 - 1e-9);
    }

    #[test]
    fn pair_resolvent_reflection(seed in any::<u64>(), z1 in disk_point(), z2 in disk_point()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = random_pair(&mut rng, 2, 5);
        for (a, b) in [(z1, z2), (z1, mirror(z2)), (mirror(z1), z2)] {
            let r = pair_resolvent(&pair, a, b).unwrap();
            let m = pair_resolvent(&pair, mirror(a), mirror(b)).unwrap();
            prop_assert!((m - r.adjoint()).norm() < 1e-9);
        }
        let zero = pair_resolvent(&pair, 0.0, 0.0).unwrap();
        prop_assert!((zero - isopair_core::linalg::identity(2)).norm() < 1e-12);
        let inf = pair_resolvent(&pair, ExtPoint::Infinity, ExtPoint::Infinity).unwrap();
        prop_assert!((inf - isopair_core::linalg::identity(2)).norm() < 1e-12);
    }

    #[test]
    fn dilation_compresses_and_commutes(seed in any::<u64>(), dim in 1usize..4, n1 in 1usize..5, n2 in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_operator_measure(&mut rng, dim, n1, n2, n1 * n2);
        let d = naimark_dilate(&e).unwrap();
        prop_assert!(d.compression_residual(&e).unwrap() < 1e-10);
        prop_assert!(d.invariant_residual() < 1e-10);
        let fam = build_spectral_families(&d, n1, n2).unwrap();
        prop_assert!(fam.commutation_residual() < 1e-10);
        prop_assert!(fam.monotonicity_margin() > -1e-10);
        let pair = build_commuting_unitaries(&fam, &d).unwrap();
        prop_assert!(pair.commutator() < 1e-10);
    }

    #[test]
    fn parameter_correspondence_roundtrip(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = SampleGrid::with_angles(4).unwrap();
        let inst = random_iso_unitary(&mut rng, n);
        let pair = IsoUnitaryPair::new(inst.v, inst.u).unwrap();
        let frame = build_theta(&pair, &inst.j).unwrap();
        let psi = random_commutant_parameter(&mut rng, &frame, 0.95).unwrap();
        let phi = psi_to_phi(&frame, &psi, &grid).unwrap();
        let back: SchurParameter = phi_to_psi(&frame, &phi, &grid).unwrap();
        prop_assert!(back.coefficient_distance(&psi) < 1e-12);
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), dim in 1usize..4, extra in 0usize..4, g in 0usize..3) {
        let grid_n = [2, 4, 8][g];
        for kind in [InstanceKind::Pair, InstanceKind::IsoUnitary, InstanceKind::Measure] {
            let spec = InstanceSpec { seed, dim, big_dim: dim + extra, grid_n, kind };
            let a = serde_json::to_string(&generate(&spec).unwrap()).unwrap();
            let b = serde_json::to_string(&generate(&spec).unwrap()).unwrap();
            prop_assert_eq!(&a, &b);
            let back: Instance = serde_json::from_str(&a).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), a);
        }
    }

    #[test]
    fn grid_pairs_have_grid_spectra(seed in any::<u64>(), g in 0usize..3) {
        let grid_n = [2, 4, 8][g];
        let pair = random_grid_pair(&mut ChaCha8Rng::seed_from_u64(seed), 2, 6, grid_n);
        for u in [pair.u1(), pair.u2()] {
            // Every eigenvalue is an n-th root of unity: Uⁿ = I.
            let mut p = u.matrix().clone();
            for _ in 1..grid_n {
                p = &p * u.matrix();
            }
            prop_assert!((p - isopair_core::linalg::identity(6)).norm() < 1e-10);
        }
    }
}
