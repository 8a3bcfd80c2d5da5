//! Averages, norms and ℓ^r combinations against exact rational arithmetic.

use dyadlab_core::{Domain, DyadicCube, StepFunction, VectorStepFunction, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn rel_err(got: f64, want: &BigRational) -> f64 {
    let w = want.to_f64().unwrap();
    if w == 0.0 {
        got.abs()
    } else {
        ((got - w) / w).abs()
    }
}

fn cells_strategy(depth: u32) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1000i32..1000, 1usize << depth).prop_map(|v| v.into_iter().map(|x| x as f64 / 7.0).collect())
}

proptest! {
    #[test]
    fn average_matches_rationals(cells in cells_strategy(7), level in 0u32..=7, pick in any::<prop::sample::Index>()) {
        let d = Domain::unit(1, 7).unwrap();
        let f = StepFunction::from_cells(d, cells.clone()).unwrap();
        let chunk = pick.index(d.cubes_at_level(level));
        let q = d.cube_at(level, chunk);
        let range = d.cube_range(&q).unwrap();
        let sum: BigRational = cells[range.clone()].iter().map(|&x| rat(x)).fold(BigRational::zero(), |a, b| a + b);
        let want = sum / BigRational::from_integer(BigInt::from(range.len()));
        // summation error scales with the mean of |f|, not with the signed mean
        let scale = cells[range.clone()].iter().map(|x| x.abs()).sum::<f64>() / range.len() as f64;
        let err = (f.average(&q).unwrap() - want.to_f64().unwrap()).abs();
        prop_assert!(err <= 1e-12 * scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn weighted_l2_norm_matches_rationals(cells in cells_strategy(6), weights in prop::collection::vec(1u32..500, 64)) {
        let d = Domain::symmetric(1, 1, 5).unwrap();
        let f = StepFunction::from_cells(d, cells.clone()).unwrap();
        let wv: Vec<f64> = weights.iter().map(|&x| x as f64 / 16.0).collect();
        let w = Weight::new(StepFunction::from_cells(d, wv.clone()).unwrap()).unwrap();
        let h = rat(d.cell_volume::<f64>());
        let want = cells.iter().zip(&wv).fold(BigRational::zero(), |a, (&x, &y)| a + rat(x) * rat(x) * rat(y)) * h;
        let got = f.lp_norm(2.0, Some(&w)).unwrap();
        prop_assert!(rel_err(got * got, &want) <= 1e-12);
        let plain = f.lp_norm(1.0, None).unwrap();
        let l1 = cells.iter().fold(BigRational::zero(), |a, &x| a + rat(x.abs())) * rat(d.cell_volume::<f64>());
        prop_assert!(rel_err(plain, &l1) <= 1e-12);
    }

    #[test]
    fn lr_norm_is_monotone(a in cells_strategy(4), b in cells_strategy(4), bump in cells_strategy(4), r in 1.1f64..6.0) {
        let d = Domain::unit(1, 4).unwrap();
        let fa = StepFunction::from_cells(d, a.clone()).unwrap();
        let fb = StepFunction::from_cells(d, b).unwrap();
        let bigger: Vec<f64> = a.iter().zip(&bump).map(|(x, y)| x.abs() + y.abs()).collect();
        let fc = StepFunction::from_cells(d, bigger).unwrap();
        let lo = VectorStepFunction::new(vec![fa, fb.clone()], r).unwrap().lr_norm_pointwise();
        let hi = VectorStepFunction::new(vec![fc, fb], r).unwrap().lr_norm_pointwise();
        for (x, y) in lo.cells().iter().zip(hi.cells()) {
            prop_assert!(x <= y);
        }
    }
}

#[test]
fn worked_examples() {
    let d = Domain::symmetric(1, 1, 3).unwrap();
    let ind = StepFunction::indicator(d, &DyadicCube::interval(0, 0), 1.0).unwrap();
    assert_eq!(ind.average(&DyadicCube::interval(-1, 0)).unwrap(), 0.5);
    assert_eq!(ind.lp_norm(2.0, None).unwrap(), 1.0);

    let u = Domain::unit(1, 2).unwrap();
    let quarters = StepFunction::from_cells(u, vec![4.0, 3.0, 2.0, 1.0]).unwrap();
    assert_eq!(quarters.average(&DyadicCube::interval(0, 0)).unwrap(), 2.5);

    let three = StepFunction::indicator(u, &DyadicCube::interval(0, 0), 3.0).unwrap();
    let four = StepFunction::indicator(u, &DyadicCube::interval(0, 0), 4.0).unwrap();
    let v = VectorStepFunction::new(vec![three.clone(), four], 2.0).unwrap();
    assert!(v.lr_norm_pointwise().cells().iter().all(|&x| x == 5.0));
    let single = VectorStepFunction::new(vec![three.scale(-1.0)], 2.5).unwrap();
    assert_eq!(single.lr_norm_pointwise(), three);
    let copies = VectorStepFunction::new(vec![StepFunction::constant(u, 1.0f64); 8], 3.0).unwrap();
    assert!(copies.lr_norm_pointwise().cells().iter().all(|&x| (x - 2.0).abs() < 1e-15));
}

#[test]
fn power_cells_average_exactly_across_levels() {
    let d = Domain::unit(1, 14).unwrap();
    let delta = 0.5;
    let w = dyadlab_core::power_weight(&d, delta - 1.0, None).unwrap();
    for k in 0..=14 {
        let h = 2f64.powi(-k);
        let want = h.powf(delta - 1.0) / delta;
        let got = w.average(&DyadicCube::interval(k, 0)).unwrap();
        assert!((got - want).abs() <= 1e-12 * want, "k={k}: {got} vs {want}");
    }
}

#[test]
fn single_precision_instantiation() {
    let d = Domain::unit(1, 5).unwrap();
    let f = StepFunction::<f32>::from_fn(d, |q| q.lower::<f32>(0));
    let avg = f.average(&DyadicCube::interval(0, 0)).unwrap();
    assert!((avg - 31.0 / 64.0).abs() < 1e-6);
    let m = dyadlab_core::operators::maximal(&f);
    assert!(m.cells().iter().zip(f.cells()).all(|(a, b)| a >= b));
}
