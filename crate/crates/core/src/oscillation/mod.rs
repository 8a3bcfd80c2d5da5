//! Rearrangements, local mean oscillation and the two stopping-time
//! decompositions (Calderón–Zygmund and local-oscillation), each returning
//! data that can be audited after the fact.

mod cz;
mod lerner;
mod local;
mod sparse;

pub use cz::{cz_decompose, BadPart, CzCertificate, CzDecomposition};
pub use lerner::{default_lambda, lerner_decompose, LernerCertificate, LernerCube, LernerFamily};
pub use local::{local_osc, median, rearrangement, sharp_maximal, weak_norm};
pub use sparse::{sparse_verify, SparseCertificate, SparseFamily};

use crate::dyadic::DyadicCube;
use crate::error::Result;
use crate::operators::{vector_shift_apply, HaarShiftSpec};
use crate::scalar::Scalar;
use crate::step::VectorStepFunction;

/// Both sides of the oscillation estimate for a vector Haar shift:
/// `lhs = ω_λ(S⃗f⃗; Q)` and `rhs = κ^{1+1/r} 2^κ E_{Q^{(κ)}} ‖f⃗‖_{ℓ^r}`.
///
/// The ratio `lhs / rhs` estimates the implicit constant. For `κ = 0` the
/// polynomial factor is taken as 1.
pub fn osc_bound_check<T: Scalar>(
    specs: &[HaarShiftSpec<T>],
    f: &VectorStepFunction<T>,
    q: &DyadicCube,
    lambda: T,
) -> Result<(T, T)> {
    let kappa = specs.iter().map(|s| s.kappa()).max().unwrap_or(0);
    let d = *f.domain();
    let top = d.ancestor(q, kappa)?;
    let out = vector_shift_apply(specs, f)?;
    let lhs = local_osc(&out, q, lambda)?;
    let k = T::of(f64::from(kappa.max(1)));
    let poly = k.powf(T::one() + f.r().recip()) * T::exp2i(kappa as i32);
    let rhs = poly * f.lr_norm_pointwise().average(&top)?;
    Ok((lhs, rhs))
}
