use std::collections::BTreeMap;

use crate::domain::Domain;
use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};
use crate::scalar::Scalar;
use crate::step::{lr_combine, StepFunction, VectorStepFunction};

/// Coefficients of one term `⟨f, k_I⟩ h_I`, constant on the `2^{nκ}`
/// depth-`κ` subcubes of `I` (Morton order).
#[derive(Clone, Debug, PartialEq)]
pub struct HaarTerm<T> {
    pub kcoef: Vec<T>,
    pub hcoef: Vec<T>,
}

/// A generalized Haar shift `S f = Σ_I ⟨f, k_I⟩ h_I` of complexity `κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarShiftSpec<T> {
    kappa: u32,
    terms: BTreeMap<DyadicCube, HaarTerm<T>>,
    cancellative: bool,
}

impl<T: Scalar> HaarShiftSpec<T> {
    pub fn new(kappa: u32, cancellative: bool) -> Self {
        Self { kappa, terms: BTreeMap::new(), cancellative }
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn is_cancellative(&self) -> bool {
        self.cancellative
    }

    pub fn terms(&self) -> &BTreeMap<DyadicCube, HaarTerm<T>> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds the term for `I`, enforcing `‖k_I‖_∞ ‖h_I‖_∞ ≤ |I|^{-1}` and,
    /// for cancellative shifts, zero integrals.
    pub fn insert(&mut self, cube: DyadicCube, kcoef: Vec<T>, hcoef: Vec<T>) -> Result<()> {
        let subs = 1usize << (cube.dim() as u32 * self.kappa);
        if kcoef.len() != subs || hcoef.len() != subs {
            return Err(DyadError::Shape(format!(
                "term on {cube} needs {subs} coefficients, got {} and {}",
                kcoef.len(),
                hcoef.len()
            )));
        }
        let kmax = kcoef.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let hmax = hcoef.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let bound = cube.volume::<T>().recip();
        if kmax * hmax > bound * (T::one() + T::of(1e-12)) {
            return Err(DyadError::Parameter(format!(
                "term on {cube} violates ‖k‖‖h‖ ≤ 1/|I|: {} > {}",
                kmax * hmax,
                bound
            )));
        }
        if self.cancellative {
            let tol = T::of(1e-12) * T::of_usize(subs);
            let ks: T = kcoef.iter().copied().sum();
            let hs: T = hcoef.iter().copied().sum();
            if ks.abs() > tol * kmax.max(T::min_positive_value()) || hs.abs() > tol * hmax.max(T::min_positive_value()) {
                return Err(DyadError::Parameter(format!("term on {cube} is not cancellative")));
            }
        }
        self.terms.insert(cube, HaarTerm { kcoef, hcoef });
        Ok(())
    }

    /// Every term must resolve `κ` levels below its cube on `domain`.
    pub fn check_mesh(&self, domain: &Domain) -> Result<()> {
        for cube in self.terms.keys() {
            domain.locate(cube)?;
            if cube.scale() + self.kappa as i32 > domain.cell_scale() {
                return Err(DyadError::Resolution(format!(
                    "depth-{} subcubes of {cube} are finer than the mesh",
                    self.kappa
                )));
            }
        }
        Ok(())
    }

    /// Largest `‖k_I‖_∞ ‖h_I‖_∞ |I|` over the terms.
    pub fn normalization(&self) -> T {
        self.terms
            .iter()
            .map(|(c, t)| {
                let k = t.kcoef.iter().fold(T::zero(), |m, v| m.max(v.abs()));
                let h = t.hcoef.iter().fold(T::zero(), |m, v| m.max(v.abs()));
                k * h * c.volume::<T>()
            })
            .fold(T::zero(), T::max)
    }
}

/// `S f`, an exact finite sum over the active terms.
pub fn haar_shift_apply<T: Scalar>(spec: &HaarShiftSpec<T>, f: &StepFunction<T>) -> Result<StepFunction<T>> {
    let d = *f.domain();
    spec.check_mesh(&d)?;
    let h = d.cell_volume::<T>();
    let mut prefix = Vec::with_capacity(f.len() + 1);
    prefix.push(T::zero());
    let mut acc = T::zero();
    for &v in f.cells() {
        acc = acc + v;
        prefix.push(acc);
    }
    let mut out = StepFunction::zeros(d);
    let n = d.dim() as u32;
    for (cube, term) in &spec.terms {
        let range = d.cube_range(cube)?;
        let sub = range.len() >> (n * spec.kappa);
        let pairing: T = term
            .kcoef
            .iter()
            .enumerate()
            .map(|(s, &k)| {
                let a = range.start + s * sub;
                k * (prefix[a + sub] - prefix[a])
            })
            .sum::<T>()
            * h;
        if pairing == T::zero() {
            continue;
        }
        for (s, &hv) in term.hcoef.iter().enumerate() {
            let a = range.start + s * sub;
            for o in &mut out.cells_mut()[a..a + sub] {
                *o = *o + pairing * hv;
            }
        }
    }
    Ok(out)
}

/// `S⃗ f⃗ = (Σ_j |S^j f_j|^r)^{1/r}` with one shift per component.
pub fn vector_shift_apply<T: Scalar>(specs: &[HaarShiftSpec<T>], f: &VectorStepFunction<T>) -> Result<StepFunction<T>> {
    if specs.len() != f.len() {
        return Err(DyadError::Shape(format!("{} shifts for {} components", specs.len(), f.len())));
    }
    let parts = specs
        .iter()
        .zip(f.components())
        .map(|(s, c)| haar_shift_apply(s, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(lr_combine(parts.iter().map(|p| p.cells()), f.r(), *f.domain()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn haar_term() -> (Vec<f64>, Vec<f64>) {
        (vec![1.0, -1.0], vec![1.0, -1.0])
    }

    #[test]
    fn single_haar_term() {
        let d = Domain::unit(1, 4).unwrap();
        let mut s = HaarShiftSpec::new(1, true);
        let (k, h) = haar_term();
        s.insert(DyadicCube::interval(0, 0), k, h).unwrap();
        let f = StepFunction::indicator(d, &DyadicCube::interval(1, 0), 1.0).unwrap();
        let out = haar_shift_apply(&s, &f).unwrap();
        for (i, &v) in out.cells().iter().enumerate() {
            assert_eq!(v, if i < 8 { 0.5 } else { -0.5 });
        }
    }

    #[test]
    fn cancellative_kills_constants_and_empty_is_zero() {
        let d = Domain::unit(1, 4).unwrap();
        let mut s = HaarShiftSpec::new(1, true);
        let (k, h) = haar_term();
        s.insert(DyadicCube::interval(0, 0), k.clone(), h.clone()).unwrap();
        s.insert(DyadicCube::interval(1, 1), k.iter().map(|x| x * 2.0).collect(), h).unwrap();
        let c = StepFunction::constant(d, 3.0);
        assert!(haar_shift_apply(&s, &c).unwrap().cells().iter().all(|&v| v == 0.0));
        let empty = HaarShiftSpec::<f64>::new(2, false);
        let f = StepFunction::from_fn(d, |q| q.lower::<f64>(0));
        assert!(haar_shift_apply(&empty, &f).unwrap().cells().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn normalization_and_cancellation_enforced() {
        let mut s = HaarShiftSpec::new(1, true);
        assert!(s.insert(DyadicCube::interval(0, 0), vec![2.0, -2.0], vec![1.0, -1.0]).is_err());
        assert!(s.insert(DyadicCube::interval(0, 0), vec![1.0, 0.0], vec![1.0, -1.0]).is_err());
        assert!(s.insert(DyadicCube::interval(0, 0), vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn mesh_resolution_enforced() {
        let d = Domain::unit(1, 2).unwrap();
        let mut s = HaarShiftSpec::new(2, false);
        s.insert(DyadicCube::interval(1, 0), vec![0.5; 4], vec![0.5; 4]).unwrap();
        assert!(matches!(s.check_mesh(&d), Err(DyadError::Resolution(_))));
    }

    #[test]
    fn vector_shift_shapes() {
        let d = Domain::unit(1, 3).unwrap();
        let f = VectorStepFunction::new(vec![StepFunction::constant(d, 1.0); 2], 2.0).unwrap();
        let s = HaarShiftSpec::<f64>::new(1, false);
        assert!(matches!(vector_shift_apply(&[s], &f), Err(DyadError::Shape(_))));
    }
}
