//! Maximal functions, Haar shifts, positive shifts, sparse operators and a
//! truncated singular-integral kernel, all acting exactly on step functions.

mod czk;
mod haar;
mod maximal;
mod positive;
mod random;

pub use czk::{cz_kernel_apply, midpoints, CzKernelSpec};
pub use haar::{haar_shift_apply, vector_shift_apply, HaarShiftSpec, HaarTerm};
pub use maximal::{maximal, vector_maximal_r};
pub use positive::{
    check_positive_mesh, dual_positive_apply, positive_component_apply, positive_shift_apply, PositiveComponent,
    PositiveShiftSpec,
};
pub use random::{
    random_positive_shift, random_shift, random_sparse_family, random_step, random_vector, trial_rng,
    ShiftEnsembleConfig,
};

use crate::error::Result;
use crate::oscillation::SparseFamily;
use crate::scalar::Scalar;
use crate::step::StepFunction;

/// `Σ_{I ∈ family} E_I(f) 1_I`.
pub fn sparse_apply<T: Scalar>(family: &SparseFamily, f: &StepFunction<T>) -> Result<StepFunction<T>> {
    if f.cells().iter().any(|&v| v < T::zero()) {
        log::warn!("sparse operator applied to a function with negative values");
    }
    let d = *f.domain();
    let mut out = StepFunction::zeros(d);
    for q in family.cubes() {
        let avg = f.average(q)?;
        for v in &mut out.cells_mut()[d.cube_range(q)?] {
            *v = *v + avg;
        }
    }
    Ok(out)
}
