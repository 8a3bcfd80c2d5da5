use dyadlab_core::operators::{random_step, random_vector, trial_rng};
use dyadlab_core::oscillation::{
    cz_decompose, lerner_decompose, local_osc, median, rearrangement, sharp_maximal, weak_norm,
};
use dyadlab_core::{Domain, DyadicCube, StepFunction};
use proptest::prelude::*;

fn step(cells: Vec<f64>) -> StepFunction<f64> {
    let depth = cells.len().trailing_zeros();
    StepFunction::from_cells(Domain::unit(1, depth).unwrap(), cells).unwrap()
}

fn cells(depth: u32) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 1usize << depth)
}

proptest! {
    #[test]
    fn rearrangement_below_weak_norm(v in cells(6), lambda in 0.01f64..0.99, p in 1.0f64..8.0, level in 0u32..5, pick in any::<prop::sample::Index>()) {
        let f = step(v);
        let d = *f.domain();
        let q = d.cube_at(level, pick.index(d.cubes_at_level(level)));
        let lhs = rearrangement(&f, &q, lambda * q.volume::<f64>()).unwrap();
        let rhs = weak_norm(&f, &q, p).unwrap() / lambda.powf(p.recip());
        prop_assert!(lhs <= rhs, "{lhs} > {rhs}");
    }

    #[test]
    fn median_is_admissible_constant(v in cells(6), lambda in 0.01f64..0.99) {
        let f = step(v);
        let q = DyadicCube::interval(0, 0);
        let m = median(&f, &q).unwrap();
        let shifted = f.map(|x| x - m);
        let omega = local_osc(&f, &q, lambda).unwrap();
        prop_assert!(omega <= rearrangement(&shifted, &q, lambda).unwrap());
    }

    #[test]
    fn oscillation_translation_and_homogeneity(v in cells(5), lambda in 0.01f64..0.99, c in -100.0f64..100.0, a in 0.0f64..20.0) {
        let f = step(v);
        let q = DyadicCube::interval(0, 0);
        let base = local_osc(&f, &q, lambda).unwrap();
        let moved = local_osc(&f.map(|x| x + c), &q, lambda).unwrap();
        prop_assert!((moved - base).abs() <= 1e-9 * (1.0 + base + c.abs()));
        let scaled = local_osc(&f.scale(a), &q, lambda).unwrap();
        prop_assert!((scaled - a * base).abs() <= 1e-9 * (1.0 + a * base));
    }

    #[test]
    fn sharp_maximal_envelope(v in cells(6), lambda in 0.01f64..0.99) {
        let f = step(v);
        let q = DyadicCube::interval(0, 0);
        let m = median(&f, &q).unwrap();
        let crude = f.cells().iter().map(|x| (x - m).abs()).fold(0.0, f64::max);
        let sharp = sharp_maximal(&f, &q, lambda).unwrap();
        prop_assert!(sharp.cells().iter().all(|&s| s <= 2.0 * crude));
    }
}

#[test]
fn cz_invariants_on_seeded_inputs() {
    let d = Domain::symmetric(1, 2, 8).unwrap();
    for seed in 0..100 {
        let mut rng = trial_rng(7, seed);
        let f = random_vector(d, 4, 2.0, &mut rng, true).unwrap();
        let norm = f.lr_norm_pointwise();
        let top = d.top_cubes().iter().map(|q| norm.average(q).unwrap()).fold(0.0, f64::max);
        let lambda = top * (1.05 + 0.4 * seed as f64 / 100.0);
        let cz = cz_decompose(&f, lambda).unwrap();
        let cert = cz.certify(&f).unwrap();
        assert!(cert.holds(1e-12), "seed {seed}: {cert:?}");
        assert!(cert.mass <= cert.mass_bound);
        assert!(!cz.bad.is_empty());
    }
}

#[test]
fn lerner_inequality_on_seeded_inputs() {
    let d = Domain::unit(1, 8).unwrap();
    let q = DyadicCube::interval(0, 0);
    for seed in 0..100 {
        let mut rng = trial_rng(11, seed);
        let f = random_step::<f64>(d, &mut rng, seed % 2 == 0);
        let fam = lerner_decompose(&f, &q, None).unwrap();
        let cert = fam.certify(&f).unwrap();
        assert!(cert.holds, "seed {seed}: {cert:?}");
        assert!(cert.worst_ratio <= 4.0);
        assert!(cert.sparse.pass && cert.sparse.min_ratio >= 0.5);
    }
}

#[test]
fn lerner_handles_two_dimensions() {
    let d = Domain::unit(2, 5).unwrap();
    let root = d.top_cubes()[0];
    for seed in 0..10 {
        let f = random_step::<f64>(d, &mut trial_rng(3, seed), true);
        let fam = lerner_decompose(&f, &root, None).unwrap();
        assert!(fam.certify(&f).unwrap().holds);
    }
}
