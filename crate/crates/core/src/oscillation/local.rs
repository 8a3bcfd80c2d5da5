//! Rearrangements, medians and local mean oscillation over one cube.
//!
//! All cells of a cube have equal measure, so every measure statement is a
//! count of cells. With `c` cells and `t = λ|Q|`, the rearrangement
//! `g*(t)` is the `⌊λc⌋`-th largest `|g|` (0-based).

use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};
use crate::scalar::Scalar;
use crate::step::StepFunction;

fn sort_asc<T: Scalar>(v: &mut [T]) {
    v.sort_by(|a, b| a.partial_cmp(b).expect("cell values are never NaN"));
}

/// Position `⌊λ·count⌋` of the rearrangement, for `0 < λ < 1`.
pub(crate) fn quantile_position<T: Scalar>(lambda: T, count: usize) -> usize {
    let q = (lambda * T::of_usize(count)).floor().to_usize().unwrap_or(0);
    q.min(count - 1)
}

/// `(|g| 1_Q)^*` at position `pos` of the descending order.
pub(crate) fn rearrangement_slice<T: Scalar>(cells: &[T], pos: usize) -> T {
    let mut v: Vec<T> = cells.iter().map(|x| x.abs()).collect();
    let k = v.len() - 1 - pos;
    let (_, nth, _) = v.select_nth_unstable_by(k, |a, b| a.partial_cmp(b).unwrap());
    *nth
}

/// Lower and upper medians: every value in `[lo, hi]` splits the cells into
/// halves, and `lo` is the least cell value doing so.
pub(crate) fn median_interval<T: Scalar>(cells: &[T]) -> (T, T) {
    let mut v = cells.to_vec();
    sort_asc(&mut v);
    let c = v.len();
    let half_up = c.div_ceil(2);
    (v[half_up - 1], v[c - half_up])
}

/// `ω_λ` on a slice, with the optimal constant.
///
/// `|{|g - c| > s}| ≤ λ|Q|` holds iff the closed window `[c-s, c+s]` holds at
/// least `count - ⌊λ count⌋` cells, so the infimum is half the narrowest span
/// of that many consecutive sorted values, attained at its midpoint.
pub(crate) fn local_osc_slice<T: Scalar>(cells: &[T], lambda: T) -> (T, T) {
    let c = cells.len();
    let need = c - quantile_position(lambda, c);
    let mut v = cells.to_vec();
    sort_asc(&mut v);
    if need <= 1 {
        return (T::zero(), v[0]);
    }
    let (mut best, mut at) = (T::infinity(), 0);
    for i in 0..=c - need {
        let w = v[i + need - 1] - v[i];
        if w < best {
            best = w;
            at = i;
        }
    }
    (best / T::of(2.0), (v[at] + v[at + need - 1]) / T::of(2.0))
}

/// `sup_t t·(|{|g| > t}|/|Q|)^{1/p}` on a slice.
pub(crate) fn weak_norm_slice<T: Scalar>(cells: &[T], p: T) -> T {
    let mut v: Vec<T> = cells.iter().map(|x| x.abs()).collect();
    sort_asc(&mut v);
    let c = T::of_usize(v.len());
    v.iter()
        .rev()
        .enumerate()
        .map(|(j, &a)| a * (T::of_usize(j + 1) / c).powf(p.recip()))
        .fold(T::zero(), T::max)
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if lambda > T::zero() && lambda < T::one() {
        Ok(())
    } else {
        Err(DyadError::Parameter(format!("λ = {lambda} must lie in (0, 1)")))
    }
}

/// Non-increasing rearrangement of `|f| 1_Q` evaluated at `t ∈ (0, |Q|)`.
pub fn rearrangement<T: Scalar>(f: &StepFunction<T>, q: &DyadicCube, t: T) -> Result<T> {
    let cells = f.restrict(q)?;
    let vol = q.volume::<T>();
    if !(t > T::zero() && t < vol) {
        return Err(DyadError::Parameter(format!("t = {t} outside (0, |Q|) = (0, {vol})")));
    }
    Ok(rearrangement_slice(cells, quantile_position(t / vol, cells.len())))
}

/// Median `m_f(Q)`, the least cell value splitting `Q` into halves.
pub fn median<T: Scalar>(f: &StepFunction<T>, q: &DyadicCube) -> Result<T> {
    Ok(median_interval(f.restrict(q)?).0)
}

/// `ω_λ(f; Q) = inf_c ((f - c) 1_Q)^*(λ|Q|)`.
pub fn local_osc<T: Scalar>(f: &StepFunction<T>, q: &DyadicCube, lambda: T) -> Result<T> {
    check_lambda(lambda)?;
    Ok(local_osc_slice(f.restrict(q)?, lambda).0)
}

/// `M^♯_{λ,Q} f`: at each cell of `Q`, the largest `ω_λ(f; I)` over dyadic
/// `I ⊆ Q` containing the cell; zero outside `Q`.
pub fn sharp_maximal<T: Scalar>(f: &StepFunction<T>, q: &DyadicCube, lambda: T) -> Result<StepFunction<T>> {
    check_lambda(lambda)?;
    let d = *f.domain();
    let range = d.cube_range(q)?;
    let mut out = StepFunction::zeros(d);
    let cells = &f.cells()[range.clone()];
    let mut best = vec![T::zero(); cells.len()];
    // single cells have zero oscillation, so the loop stops above them
    let mut width = cells.len();
    while width > 1 {
        for (chunk, b) in cells.chunks(width).zip(best.chunks_mut(width)) {
            let w = local_osc_slice(chunk, lambda).0;
            for x in b.iter_mut() {
                *x = x.max(w);
            }
        }
        width >>= d.dim();
    }
    out.cells_mut()[range].copy_from_slice(&best);
    Ok(out)
}

/// `‖f‖_{L^{p,∞}(Q, |Q|^{-1}dx)}`.
pub fn weak_norm<T: Scalar>(f: &StepFunction<T>, q: &DyadicCube, p: T) -> Result<T> {
    if !(p >= T::one()) {
        return Err(DyadError::Parameter(format!("weak exponent {p} must be ≥ 1")));
    }
    Ok(weak_norm_slice(f.restrict(q)?, p))
}
