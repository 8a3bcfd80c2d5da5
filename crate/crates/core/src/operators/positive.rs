use std::collections::BTreeMap;

use crate::domain::Domain;
use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};
use crate::oscillation::SparseFamily;
use crate::scalar::Scalar;
use crate::step::{lr_combine, mean, StepFunction, VectorStepFunction};

/// One component `P^j f = Σ_{Q ∈ 𝒬_j} E_Q(f) 1_{E_j(Q)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveComponent {
    pub family: SparseFamily,
    /// `E_j(Q)` as a union of standard subcubes of `Q`, at most `κ` levels down.
    pub exceptional: BTreeMap<DyadicCube, Vec<DyadicCube>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositiveShiftSpec {
    kappa: u32,
    components: Vec<PositiveComponent>,
}

impl PositiveShiftSpec {
    /// Checks `E_j(Q) ⊆ Q`, depth `≤ κ` and `|E_j(Q)| ≥ 2^{-κ}|Q|`.
    pub fn new(kappa: u32, components: Vec<PositiveComponent>) -> Result<Self> {
        for comp in &components {
            for q in comp.family.cubes() {
                let subs = comp
                    .exceptional
                    .get(q)
                    .ok_or_else(|| DyadError::Shape(format!("no exceptional set for {q}")))?;
                let mut vol = 0.0f64;
                let mut sorted = subs.clone();
                sorted.sort();
                sorted.dedup();
                for (i, s) in sorted.iter().enumerate() {
                    if !q.contains(s) || s.scale() - q.scale() > kappa as i32 {
                        return Err(DyadError::Parameter(format!("{s} is not a depth-≤{kappa} subcube of {q}")));
                    }
                    if sorted[..i].iter().any(|o| o.intersects(s)) {
                        return Err(DyadError::Parameter(format!("overlapping pieces of E({q})")));
                    }
                    vol += s.volume::<f64>();
                }
                if vol < 2f64.powi(-(kappa as i32)) * q.volume::<f64>() {
                    return Err(DyadError::Parameter(format!("|E({q})| = {vol} is below 2^-{kappa}|Q|")));
                }
            }
        }
        Ok(Self { kappa, components })
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn components(&self) -> &[PositiveComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    fn component(&self, j: usize) -> Result<&PositiveComponent> {
        self.components
            .get(j)
            .ok_or_else(|| DyadError::Shape(format!("component {j} of {}", self.components.len())))
    }
}

fn apply_component<T: Scalar>(comp: &PositiveComponent, f: &StepFunction<T>) -> Result<StepFunction<T>> {
    let d = *f.domain();
    let mut out = StepFunction::zeros(d);
    for q in comp.family.cubes() {
        let avg = f.average(q)?;
        for e in &comp.exceptional[q] {
            for v in &mut out.cells_mut()[d.cube_range(e)?] {
                *v = *v + avg;
            }
        }
    }
    Ok(out)
}

/// `P_r f⃗ = (Σ_j |P^j f_j|^r)^{1/r}`.
pub fn positive_shift_apply<T: Scalar>(spec: &PositiveShiftSpec, f: &VectorStepFunction<T>) -> Result<StepFunction<T>> {
    if spec.len() != f.len() {
        return Err(DyadError::Shape(format!("{} components for {} functions", spec.len(), f.len())));
    }
    let parts = spec
        .components
        .iter()
        .zip(f.components())
        .map(|(c, fj)| apply_component(c, fj))
        .collect::<Result<Vec<_>>>()?;
    Ok(lr_combine(parts.iter().map(|p| p.cells()), f.r(), *f.domain()))
}

/// Scalar component `P^j f`.
pub fn positive_component_apply<T: Scalar>(spec: &PositiveShiftSpec, j: usize, f: &StepFunction<T>) -> Result<StepFunction<T>> {
    apply_component(spec.component(j)?, f)
}

/// `(P^j)^* g = Σ_Q (|E_j(Q)|/|Q|) E_{E_j(Q)}(g) 1_Q`, the transpose of `P^j`.
pub fn dual_positive_apply<T: Scalar>(spec: &PositiveShiftSpec, j: usize, g: &StepFunction<T>) -> Result<StepFunction<T>> {
    let comp = spec.component(j)?;
    let d = *g.domain();
    let mut out = StepFunction::zeros(d);
    for q in comp.family.cubes() {
        // Σ over pieces of ∫_piece g, divided by |Q|
        let mut integral = T::zero();
        for e in &comp.exceptional[q] {
            integral = integral + mean(g.restrict(e)?) * e.volume::<T>();
        }
        let coef = integral / q.volume::<T>();
        for v in &mut out.cells_mut()[d.cube_range(q)?] {
            *v = *v + coef;
        }
    }
    Ok(out)
}

/// Mesh check used by ensemble generators.
pub fn check_positive_mesh(spec: &PositiveShiftSpec, domain: &Domain) -> Result<()> {
    for comp in &spec.components {
        for pieces in comp.exceptional.values() {
            for e in pieces {
                domain.locate(e)?;
            }
        }
    }
    Ok(())
}
