use crate::error::{DyadError, Result};
use crate::scalar::Scalar;
use crate::step::StepFunction;

/// Truncated Hilbert-type kernel `K(x, y) = 1/(x - y)` for `|x - y| ≥ w`,
/// zero otherwise, acting on cell midpoints of a one-dimensional mesh.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CzKernelSpec<T> {
    /// Truncation width `w`; `None` means one cell of the mesh.
    pub truncation: Option<T>,
    /// Hölder exponent of the smoothness condition.
    pub alpha: T,
    /// Constant in `|K(x,y)| ≤ C/|x-y|`.
    pub size_constant: T,
}

impl<T: Scalar> Default for CzKernelSpec<T> {
    fn default() -> Self {
        Self { truncation: None, alpha: T::one(), size_constant: T::one() }
    }
}

impl<T: Scalar> CzKernelSpec<T> {
    pub fn kernel(&self, x: T, y: T, width: T) -> T {
        let t = x - y;
        if t.abs() >= width && t != T::zero() {
            t.recip()
        } else {
            T::zero()
        }
    }

    fn width(&self, f: &StepFunction<T>) -> T {
        self.truncation.unwrap_or_else(|| f.domain().cell_volume::<T>())
    }

    /// Largest `|K(x,y)| |x-y| / C` over the sample pairs.
    pub fn size_ratio(&self, points: &[T], width: T) -> T {
        let mut worst = T::zero();
        for &x in points {
            for &y in points {
                if x != y {
                    let k = self.kernel(x, y, width);
                    worst = worst.max(k.abs() * (x - y).abs() / self.size_constant);
                }
            }
        }
        worst
    }

    /// Largest `|K(x,y) - K(x',y)| |x-y|^{1+α} / |x-x'|^α` over sample
    /// triples with `0 < |x - x'| < |x - y|/2`.
    pub fn holder_ratio(&self, points: &[T], width: T) -> T {
        let half = T::of(0.5);
        let mut worst = T::zero();
        for &x in points {
            for &xp in points {
                for &y in points {
                    let dxy = (x - y).abs();
                    let dxx = (x - xp).abs();
                    if dxx == T::zero() || dxx >= half * dxy {
                        continue;
                    }
                    let diff = (self.kernel(x, y, width) - self.kernel(xp, y, width)).abs();
                    worst = worst.max(diff * dxy.powf(T::one() + self.alpha) / dxx.powf(self.alpha));
                }
            }
        }
        worst
    }
}

/// Cell midpoints of a one-dimensional step function.
pub fn midpoints<T: Scalar>(f: &StepFunction<T>) -> Vec<T> {
    let d = f.domain();
    (0..d.len())
        .map(|i| {
            let c = d.cell_cube(i);
            (c.lower::<T>(0) + c.upper::<T>(0)) * T::of(0.5)
        })
        .collect()
}

/// `T f(x_i) = Σ_j K(x_i, x_j) f_j |cell_j|`; the matrix is skew-symmetric.
pub fn cz_kernel_apply<T: Scalar>(spec: &CzKernelSpec<T>, f: &StepFunction<T>) -> Result<StepFunction<T>> {
    if f.domain().dim() != 1 {
        return Err(DyadError::Parameter("the truncated kernel is one-dimensional".into()));
    }
    let x = midpoints(f);
    let h = f.domain().cell_volume::<T>();
    let w = spec.width(f);
    let cells = x
        .iter()
        .map(|&xi| {
            x.iter()
                .zip(f.cells())
                .map(|(&xj, &v)| spec.kernel(xi, xj, w) * v)
                .sum::<T>()
                * h
        })
        .collect();
    StepFunction::from_cells(*f.domain(), cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    #[test]
    fn zero_input_and_kernel_conditions() {
        let d = Domain::symmetric(1, 1, 5).unwrap();
        let spec = CzKernelSpec::<f64>::default();
        let z = cz_kernel_apply(&spec, &StepFunction::zeros(d)).unwrap();
        assert!(z.cells().iter().all(|&v| v == 0.0));
        let pts = midpoints(&z);
        let h = d.cell_volume::<f64>();
        assert!(spec.size_ratio(&pts, h) <= 1.0 + 1e-12);
        assert!(spec.holder_ratio(&pts, h) <= 2.0 + 1e-9);
    }

    #[test]
    fn two_dimensional_rejected() {
        let d = Domain::unit(2, 2).unwrap();
        assert!(cz_kernel_apply(&CzKernelSpec::<f64>::default(), &StepFunction::zeros(d)).is_err());
    }
}
