use std::ops::Range;

use crate::domain::Domain;
use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};
use crate::scalar::Scalar;
use crate::step::{mean, StepFunction, VectorStepFunction};

/// One bad piece `b⃗^j = (f_k - E_{Q_j} f_k) 1_{Q_j}`, stored on the cells of `Q_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BadPart<T> {
    pub cube: DyadicCube,
    range: Range<usize>,
    components: Vec<Vec<T>>,
}

impl<T: Scalar> BadPart<T> {
    /// Component `k` restricted to the cells of the cube.
    pub fn local(&self, k: usize) -> &[T] {
        &self.components[k]
    }

    pub fn cell_range(&self) -> Range<usize> {
        self.range.clone()
    }

    /// `b⃗^j` as a vector function on the whole mesh.
    pub fn to_vector(&self, domain: Domain, r: T) -> Result<VectorStepFunction<T>> {
        let comps = self
            .components
            .iter()
            .map(|loc| {
                let mut s = StepFunction::zeros(domain);
                s.cells_mut()[self.range.clone()].copy_from_slice(loc);
                s
            })
            .collect();
        VectorStepFunction::new(comps, r)
    }
}

/// Calderón–Zygmund decomposition of `f⃗` at height `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CzDecomposition<T> {
    pub lambda: T,
    pub good: VectorStepFunction<T>,
    pub bad: Vec<BadPart<T>>,
}

impl<T: Scalar> CzDecomposition<T> {
    pub fn cubes(&self) -> Vec<DyadicCube> {
        self.bad.iter().map(|b| b.cube).collect()
    }

    /// Audits every structural property against the input it came from.
    pub fn certify(&self, f: &VectorStepFunction<T>) -> Result<CzCertificate> {
        let d = *f.domain();
        self.good.components()[0].same_mesh(f.component(0))?;
        let r = f.r();
        let norm = f.lr_norm_pointwise();
        let lam = self.lambda.as_f64();

        let mut reconstruction_error = 0.0f64;
        for k in 0..f.len() {
            let mut sum = self.good.component(k).clone();
            for b in &self.bad {
                for (s, &v) in sum.cells_mut()[b.cell_range()].iter_mut().zip(b.local(k)) {
                    *s = *s + v;
                }
            }
            for (a, c) in sum.cells().iter().zip(f.component(k).cells()) {
                reconstruction_error = reconstruction_error.max((*a - *c).abs().as_f64());
            }
        }

        let mut support_ok = true;
        let mut max_mean = 0.0f64;
        for b in &self.bad {
            let full = b.to_vector(d, r)?;
            let range = b.cell_range();
            for comp in full.components() {
                support_ok &= comp.cells().iter().enumerate().all(|(i, v)| range.contains(&i) || *v == T::zero());
                max_mean = max_mean.max(mean(&comp.cells()[range.clone()]).abs().as_f64());
            }
        }

        let cubes = self.cubes();
        let mut disjoint = true;
        for (i, a) in cubes.iter().enumerate() {
            for b in &cubes[i + 1..] {
                disjoint &= !a.intersects(b);
            }
        }

        let mut maximal = true;
        for q in &cubes {
            maximal &= norm.average(q)? >= self.lambda;
            if let Ok(parent) = d.ancestor(q, 1) {
                maximal &= norm.average(&parent)? < self.lambda;
            }
        }

        let mass: f64 = cubes.iter().map(|q| q.volume::<f64>()).sum();
        let mass_bound = norm.integral().as_f64() / lam;

        let good_norm = self.good.lr_norm_pointwise();
        let mut inside = vec![false; d.len()];
        for b in &self.bad {
            inside[b.cell_range()].iter_mut().for_each(|x| *x = true);
        }
        let (mut good_max_off, mut good_max_on) = (0.0f64, 0.0f64);
        for (i, v) in good_norm.cells().iter().enumerate() {
            if inside[i] {
                good_max_on = good_max_on.max(v.as_f64());
            } else {
                good_max_off = good_max_off.max(v.as_f64());
            }
        }
        let good_bound = 2f64.powi(d.dim() as i32) * lam;

        Ok(CzCertificate {
            reconstruction_error,
            support_ok,
            max_mean,
            disjoint,
            maximal,
            mass,
            mass_bound,
            good_max_off,
            good_max_on,
            good_bound,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CzCertificate {
    pub reconstruction_error: f64,
    pub support_ok: bool,
    /// Largest `|E_{Q_j} b^j_k|`.
    pub max_mean: f64,
    pub disjoint: bool,
    /// Selected cubes have average `≥ λ`, their parents `< λ`.
    pub maximal: bool,
    /// `Σ_j |Q_j|`.
    pub mass: f64,
    /// `‖f⃗‖_{L^1_{ℓ^r}} / λ`.
    pub mass_bound: f64,
    pub good_max_off: f64,
    pub good_max_on: f64,
    /// `2^n λ`.
    pub good_bound: f64,
}

impl CzCertificate {
    pub fn holds(&self, tol: f64) -> bool {
        self.reconstruction_error <= tol
            && self.support_ok
            && self.max_mean <= tol
            && self.disjoint
            && self.maximal
            && self.mass <= self.mass_bound
            && self.good_max_off <= self.good_bound
            && self.good_max_on <= self.good_bound
    }
}

/// Splits `f⃗` at height `λ` over the maximal dyadic cubes `Q_j` with
/// `E_{Q_j} ‖f⃗‖_{ℓ^r} ≥ λ`.
///
/// The root blocks must all have average below `λ`, so that every selected
/// cube has a parent inside the root.
pub fn cz_decompose<T: Scalar>(f: &VectorStepFunction<T>, lambda: T) -> Result<CzDecomposition<T>> {
    if !(lambda > T::zero()) {
        return Err(DyadError::Parameter(format!("λ = {lambda} must be positive")));
    }
    let d = *f.domain();
    let norm = f.lr_norm_pointwise();
    if let Some(top) = norm.level_averages(0).iter().position(|&a| a >= lambda) {
        return Err(DyadError::Parameter(format!(
            "λ = {lambda} does not exceed the average over root block {}",
            d.cube_at(0, top)
        )));
    }
    let mut taken = vec![false; d.len()];
    let mut bad = Vec::new();
    for level in 1..=d.depth() {
        let w = d.cells_at_level(level);
        for (chunk, cells) in norm.cells().chunks(w).enumerate() {
            let start = chunk * w;
            if taken[start] || mean(cells) < lambda {
                continue;
            }
            taken[start..start + w].iter_mut().for_each(|t| *t = true);
            let range = start..start + w;
            let components = f
                .components()
                .iter()
                .map(|c| {
                    let loc = &c.cells()[range.clone()];
                    let m = mean(loc);
                    loc.iter().map(|&v| v - m).collect()
                })
                .collect();
            bad.push(BadPart { cube: d.cube_at(level, chunk), range, components });
        }
    }
    let mut good: Vec<StepFunction<T>> = f.components().to_vec();
    for (k, g) in good.iter_mut().enumerate() {
        for b in &bad {
            for (s, &v) in g.cells_mut()[b.cell_range()].iter_mut().zip(b.local(k)) {
                *s = *s - v;
            }
        }
    }
    Ok(CzDecomposition { lambda, good: VectorStepFunction::new(good, f.r())?, bad })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(f: StepFunction<f64>) -> VectorStepFunction<f64> {
        VectorStepFunction::new(vec![f], 2.0).unwrap()
    }

    #[test]
    fn unit_indicator_at_low_height() {
        let d = Domain::symmetric(1, 2, 6).unwrap(); // [-4, 4)
        let f = StepFunction::indicator(d, &DyadicCube::interval(0, 0), 1.0).unwrap();
        let dec = cz_decompose(&single(f.clone()), 0.4).unwrap();
        assert_eq!(dec.cubes(), vec![DyadicCube::interval(-1, 0)]);
        let half = StepFunction::indicator(d, &DyadicCube::interval(-1, 0), 0.5).unwrap();
        assert_eq!(dec.good.component(0), &half);
        let b = dec.bad[0].to_vector(d, 2.0).unwrap();
        assert_eq!(b.component(0), &f.lin_comb(1.0, &half, -1.0).unwrap());
        let cert = dec.certify(&single(f)).unwrap();
        assert!(cert.holds(1e-12));
        assert_eq!(cert.mass, 2.0);
        assert_eq!(cert.mass_bound, 2.5);
    }

    #[test]
    fn nothing_selected_above_sup() {
        let d = Domain::symmetric(1, 2, 6).unwrap();
        let f = StepFunction::indicator(d, &DyadicCube::interval(0, 0), 1.0).unwrap();
        let dec = cz_decompose(&single(f.clone()), 2.0).unwrap();
        assert!(dec.bad.is_empty());
        assert_eq!(dec.good.component(0), &f);
    }

    #[test]
    fn parameter_errors() {
        let d = Domain::unit(1, 4).unwrap();
        let f = single(StepFunction::constant(d, 1.0));
        assert!(matches!(cz_decompose(&f, 0.0), Err(DyadError::Parameter(_))));
        assert!(matches!(cz_decompose(&f, 0.5), Err(DyadError::Parameter(_))));
    }
}
