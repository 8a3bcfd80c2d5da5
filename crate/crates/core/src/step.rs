//! Exact piecewise-constant functions on the depth-`N` mesh of a [`Domain`].

use crate::domain::Domain;
use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};
use crate::scalar::Scalar;
use crate::weights::Weight;

/// A function constant on every mesh cell and zero outside the root.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<T> {
    domain: Domain,
    cells: Vec<T>,
}

impl<T: Scalar> StepFunction<T> {
    pub fn zeros(domain: Domain) -> Self {
        Self::constant(domain, T::zero())
    }

    pub fn constant(domain: Domain, c: T) -> Self {
        Self { domain, cells: vec![c; domain.len()] }
    }

    /// Wraps cell values given in storage (Morton) order.
    pub fn from_cells(domain: Domain, cells: Vec<T>) -> Result<Self> {
        if cells.len() != domain.len() {
            return Err(DyadError::Shape(format!(
                "{} cell values for a mesh of {} cells",
                cells.len(),
                domain.len()
            )));
        }
        Ok(Self { domain, cells })
    }

    /// Builds cell values from each cell's cube.
    pub fn from_fn(domain: Domain, mut f: impl FnMut(&DyadicCube) -> T) -> Self {
        let cells = (0..domain.len()).map(|i| f(&domain.cell_cube(i))).collect();
        Self { domain, cells }
    }

    /// `c·1_Q` for a standard cube `Q` that is a union of mesh cells.
    ///
    /// `Q` may be larger than a root block as long as the mesh resolves it; the
    /// part outside the root is dropped.
    pub fn indicator(domain: Domain, q: &DyadicCube, c: T) -> Result<Self> {
        if !q.is_standard() || q.dim() != domain.dim() || q.scale() > domain.cell_scale() {
            return Err(DyadError::Mesh(format!("{q} is not a union of mesh cells")));
        }
        Ok(Self::from_fn(domain, |cell| if q.contains(cell) { c } else { T::zero() }))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [T] {
        &mut self.cells
    }

    pub fn into_cells(self) -> Vec<T> {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn same_mesh(&self, other: &Self) -> Result<()> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(DyadError::Mesh(format!("{:?} vs {:?}", self.domain, other.domain)))
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { domain: self.domain, cells: self.cells.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.same_mesh(other)?;
        let cells = self.cells.iter().zip(&other.cells).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { domain: self.domain, cells })
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: T, other: &Self, b: T) -> Result<Self> {
        self.zip_with(other, |x, y| a * x + b * y)
    }

    pub fn scale(&self, a: T) -> Self {
        self.map(|v| a * v)
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn max(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x.max(y))
    }

    pub fn powf(&self, e: T) -> Self {
        self.map(|v| v.powf(e))
    }

    pub fn integral(&self) -> T {
        self.cells.iter().copied().sum::<T>() * self.domain.cell_volume::<T>()
    }

    /// `∫ f g`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.same_mesh(other)?;
        let s: T = self.cells.iter().zip(&other.cells).map(|(&a, &b)| a * b).sum();
        Ok(s * self.domain.cell_volume::<T>())
    }

    /// Cells of `f` over the mesh-compatible cube `Q`.
    pub fn restrict(&self, q: &DyadicCube) -> Result<&[T]> {
        Ok(&self.cells[self.domain.cube_range(q)?])
    }

    /// Exact mean `E_Q f`.
    ///
    /// `Q` must be resolved by the mesh. Cubes coarser than the root blocks
    /// are allowed: the function vanishes outside the root.
    pub fn average(&self, q: &DyadicCube) -> Result<T> {
        match self.domain.cube_range(q) {
            Ok(r) => Ok(mean(&self.cells[r])),
            Err(DyadError::DomainOverflow(_)) if q.is_standard() && q.dim() == self.domain.dim() => {
                let total: T = (0..self.cells.len())
                    .filter(|&i| q.contains(&self.domain.cell_cube(i)))
                    .map(|i| self.cells[i])
                    .sum();
                Ok(total * self.domain.cell_volume::<T>() / q.volume::<T>())
            }
            Err(e) => Err(e),
        }
    }

    /// `‖f‖_{L^p(w)}`, Lebesgue measure when `w` is `None`.
    pub fn lp_norm(&self, p: T, w: Option<&Weight<T>>) -> Result<T> {
        if !(p >= T::one()) {
            return Err(DyadError::Parameter(format!("L^p exponent {p} must be ≥ 1")));
        }
        let h = self.domain.cell_volume::<T>();
        let s: T = match w {
            None => self.cells.iter().map(|&v| v.abs().powf(p)).sum(),
            Some(w) => {
                self.same_mesh(w.cells())?;
                self.cells
                    .iter()
                    .zip(w.cells().cells())
                    .map(|(&v, &wv)| v.abs().powf(p) * wv)
                    .sum()
            }
        };
        Ok((s * h).powf(p.recip()))
    }

    /// Averages of every cube at `level` below the top, in storage order.
    pub fn level_averages(&self, level: u32) -> Vec<T> {
        let w = self.domain.cells_at_level(level);
        self.cells.chunks(w).map(mean).collect()
    }
}

pub(crate) fn mean<T: Scalar>(xs: &[T]) -> T {
    xs.iter().copied().sum::<T>() / T::of_usize(xs.len())
}

/// An ordered family `f⃗ = (f_1, …, f_J)` on a common mesh, with exponent `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorStepFunction<T> {
    components: Vec<StepFunction<T>>,
    r: T,
}

impl<T: Scalar> VectorStepFunction<T> {
    pub fn new(components: Vec<StepFunction<T>>, r: T) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| DyadError::Shape("a vector function needs at least one component".into()))?;
        for c in &components[1..] {
            first.same_mesh(c)?;
        }
        if !(r > T::one()) || !r.is_finite() {
            return Err(DyadError::Parameter(format!("ℓ^r exponent {r} must lie in (1, ∞)")));
        }
        Ok(Self { components, r })
    }

    pub fn components(&self) -> &[StepFunction<T>] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &StepFunction<T> {
        &self.components[j]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn domain(&self) -> &Domain {
        self.components[0].domain()
    }

    /// Cellwise `(Σ_j |f_j|^r)^{1/r}`.
    pub fn lr_norm_pointwise(&self) -> StepFunction<T> {
        lr_combine(self.components.iter().map(|c| c.cells()), self.r, *self.domain())
    }

    /// `‖f⃗‖_{L^1_{ℓ^r}}`.
    pub fn l1_lr_norm(&self) -> T {
        self.lr_norm_pointwise().integral()
    }
}

/// Cellwise ℓ^r combination of equally long cell slices.
pub(crate) fn lr_combine<'a, T: Scalar>(
    parts: impl Iterator<Item = &'a [T]>,
    r: T,
    domain: Domain,
) -> StepFunction<T> {
    let mut acc = vec![T::zero(); domain.len()];
    let mut single: Option<Vec<T>> = None;
    let mut count = 0;
    for part in parts {
        count += 1;
        if count == 1 {
            single = Some(part.iter().map(|v| v.abs()).collect());
        }
        for (a, &v) in acc.iter_mut().zip(part) {
            *a = *a + v.abs().powf(r);
        }
    }
    // a single component is returned exactly rather than through pow/root
    let cells = if count == 1 { single.unwrap() } else { acc.into_iter().map(|s| s.powf(r.recip())).collect() };
    StepFunction { domain, cells }
}
