use dyadlab_core::operators::{
    cz_kernel_apply, dual_positive_apply, haar_shift_apply, maximal, positive_component_apply, random_positive_shift,
    random_shift, random_step, random_vector, sparse_apply, trial_rng, vector_shift_apply, CzKernelSpec,
    ShiftEnsembleConfig,
};
use dyadlab_core::oscillation::{local_osc, osc_bound_check, SparseFamily};
use dyadlab_core::{ap_characteristic, Domain, DyadicCube, StepFunction, VectorStepFunction, Weight};
use proptest::prelude::*;

fn close(a: &StepFunction<f64>, b: &StepFunction<f64>, tol: f64) -> bool {
    a.cells().iter().zip(b.cells()).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn haar_shift_is_linear(seed in any::<u64>(), kappa in 0u32..4, a in -5.0f64..5.0, b in -5.0f64..5.0, canc in any::<bool>()) {
        let d = Domain::unit(1, 7).unwrap();
        let cfg = ShiftEnsembleConfig { kappa, components: 1, seed, cancellative: canc };
        let spec = &random_shift::<f64>(&cfg, &d).unwrap()[0];
        let mut rng = trial_rng(seed, 1);
        let f = random_step::<f64>(d, &mut rng, true);
        let g = random_step::<f64>(d, &mut rng, true);
        let lhs = haar_shift_apply(spec, &f.lin_comb(a, &g, b).unwrap()).unwrap();
        let rhs = haar_shift_apply(spec, &f).unwrap().lin_comb(a, &haar_shift_apply(spec, &g).unwrap(), b).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn positive_shift_adjoint(seed in any::<u64>(), kappa in 0u32..4) {
        let d = Domain::unit(1, 8).unwrap();
        let cfg = ShiftEnsembleConfig { kappa, components: 2, seed, cancellative: false };
        let spec = random_positive_shift(&cfg, &d).unwrap();
        let mut rng = trial_rng(seed, 2);
        for j in 0..2 {
            let f = random_step::<f64>(d, &mut rng, true);
            let g = random_step::<f64>(d, &mut rng, true);
            let lhs = positive_component_apply(&spec, j, &f).unwrap().inner(&g).unwrap();
            let rhs = f.inner(&dual_positive_apply(&spec, j, &g).unwrap()).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn maximal_dominates_and_is_sublinear(seed in any::<u64>()) {
        let d = Domain::symmetric(1, 1, 6).unwrap();
        let mut rng = trial_rng(seed, 3);
        let f = random_step::<f64>(d, &mut rng, true);
        let g = random_step::<f64>(d, &mut rng, true);
        let mf = maximal(&f);
        let mg = maximal(&g);
        let msum = maximal(&f.lin_comb(1.0, &g, 1.0).unwrap());
        for i in 0..d.len() {
            prop_assert!(mf.cells()[i] >= f.cells()[i].abs());
            prop_assert!(msum.cells()[i] <= mf.cells()[i] + mg.cells()[i] + 1e-12);
        }
    }

    #[test]
    fn weight_characteristic_at_least_one(cells in prop::collection::vec(0.01f64..100.0, 64), p in 1.1f64..6.0, c in 0.001f64..1000.0) {
        let d = Domain::unit(1, 6).unwrap();
        let w = Weight::new(StepFunction::from_cells(d, cells).unwrap()).unwrap();
        let base = ap_characteristic(&w, p, None).unwrap();
        prop_assert!(base.value >= 1.0 - 1e-12);
        let scaled = ap_characteristic(&w.scale(c).unwrap(), p, None).unwrap();
        prop_assert!((scaled.value - base.value).abs() <= 1e-12 * base.value);
    }
}

#[test]
fn vector_shift_has_zero_oscillation_on_flat_data() {
    // f vanishes near Q, so only far terms act there and they are constant on Q
    let d = Domain::unit(1, 8).unwrap();
    let kappa = 2;
    let cfg = ShiftEnsembleConfig { kappa, components: 2, seed: 5, cancellative: true };
    let specs = random_shift::<f64>(&cfg, &d).unwrap();
    let q = DyadicCube::interval(5, 3);
    let top = q.ancestor_unchecked(kappa);
    let mut rng = trial_rng(5, 0);
    let comps: Vec<StepFunction<f64>> = (0..2)
        .map(|_| {
            let r = random_step::<f64>(d, &mut rng, true);
            StepFunction::from_fn(d, |c| if top.contains(c) { 0.0 } else { r.cells()[d.locate(c).unwrap().1] })
        })
        .collect();
    let f = VectorStepFunction::new(comps, 2.0).unwrap();
    let out = vector_shift_apply(&specs, &f).unwrap();
    // outputs of terms on cubes inside the top are zero; terms on ancestors are constant on Q
    let (lhs, _) = osc_bound_check(&specs, &f, &q, 0.25).unwrap();
    assert!(lhs <= 1e-12, "ω = {lhs}");
    assert!(local_osc(&out, &q, 0.25).unwrap() <= 1e-12);
}

#[test]
fn oscillation_bound_ratio_is_moderate() {
    let d = Domain::unit(1, 9).unwrap();
    for kappa in 1..=3u32 {
        let cfg = ShiftEnsembleConfig { kappa, components: 3, seed: 17 + kappa as u64, cancellative: true };
        let specs = random_shift::<f64>(&cfg, &d).unwrap();
        let f = random_vector(d, 3, 2.0, &mut trial_rng(17, kappa as u64), true).unwrap();
        for (k, m) in [(4, 0), (5, 7), (6, 20)] {
            let (lhs, rhs) = osc_bound_check(&specs, &f, &DyadicCube::interval(k, m), 0.125).unwrap();
            assert!(lhs <= 10.0 * rhs, "κ={kappa}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn sharpness_operator_on_nested_intervals() {
    let d = Domain::unit(1, 10).unwrap();
    let fam = SparseFamily::new((0..10).map(|j| DyadicCube::interval(j, 0))).unwrap();
    assert!(fam.verify().pass);
    let f = StepFunction::constant(d, 1.0);
    let out = sparse_apply(&fam, &f).unwrap();
    // the cell [2^{-k-1}, 2^{-k}) lies in exactly k+1 of the intervals
    assert_eq!(out.cells()[d.len() / 2], 1.0);
    assert_eq!(out.cells()[0], 10.0);
}

#[test]
fn truncated_kernel_is_skew_and_smooths_oscillation() {
    let d = Domain::symmetric(1, 0, 7).unwrap();
    let spec = CzKernelSpec::default();
    let mut rng = trial_rng(1, 0);
    let f = random_step::<f64>(d, &mut rng, true);
    let g = random_step::<f64>(d, &mut rng, true);
    let tf = cz_kernel_apply(&spec, &f).unwrap();
    let tg = cz_kernel_apply(&spec, &g).unwrap();
    let a = tf.inner(&g).unwrap();
    let b = f.inner(&tg).unwrap();
    assert!((a + b).abs() < 1e-12 * (1.0 + a.abs()));
    // a bump supported in [-1/8, 1/8): the image oscillates less far away
    let bump = StepFunction::from_fn(d, |c| if c.lower::<f64>(0).abs() < 0.125 { c.lower::<f64>(0).signum() } else { 0.0 });
    let t = cz_kernel_apply(&spec, &bump).unwrap();
    let near = local_osc(&t, &DyadicCube::interval(3, 2), 0.25).unwrap();
    let far = local_osc(&t, &DyadicCube::interval(3, 3), 0.25).unwrap();
    assert!(far < near);
}
