use crate::scalar::Scalar;
use crate::step::{lr_combine, StepFunction, VectorStepFunction};

/// Dyadic maximal function `M f(x) = sup_{I ∋ x} E_I |f|` over the standard
/// cubes of the root, from the cell itself up to its root block.
pub fn maximal<T: Scalar>(f: &StepFunction<T>) -> StepFunction<T> {
    let d = *f.domain();
    let abs = f.abs();
    let mut out = abs.clone();
    for level in 0..d.depth() {
        let w = d.cells_at_level(level);
        for (avg, block) in abs.level_averages(level).into_iter().zip(out.cells_mut().chunks_mut(w)) {
            for v in block {
                *v = v.max(avg);
            }
        }
    }
    out
}

/// `M_r f⃗ = (Σ_j (M f_j)^r)^{1/r}`.
pub fn vector_maximal_r<T: Scalar>(f: &VectorStepFunction<T>) -> StepFunction<T> {
    let parts: Vec<StepFunction<T>> = f.components().iter().map(maximal).collect();
    lr_combine(parts.iter().map(|p| p.cells()), f.r(), *f.domain())
}
