//! Local mean oscillation decomposition by a level-set stopping time.
//!
//! Starting from the base cube `R = Q` with centre `c_R = m_f(Q)`, let
//! `s_R = ((f - c_R) 1_R)^*(λ|R|)` and `E_R = {x ∈ R : |f - c_R| > s_R}`, so
//! `|E_R| ≤ λ|R|`. The next-level cubes inside `R` are the maximal dyadic
//! `P ⊊ R` with `|E_R ∩ P| > 2^{-n-1}|P|`; for `λ ≤ 2^{-n-2}` they cover at
//! most half of `R` and contain `E_R`. Each `P` receives the median of `f` on
//! `P` nearest to `c_R`, which is within `s_R ≤ 2 ω_λ(f; R)` of `c_R`.
//! Telescoping gives `|f - m_f(Q)| ≤ 2 Σ_{R ∋ x} ω_λ(f; R)` over the base
//! and every selected cube containing `x`.

use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};
use crate::oscillation::local::{local_osc_slice, median_interval, quantile_position, rearrangement_slice, sharp_maximal};
use crate::oscillation::sparse::{sparse_verify, SparseCertificate, SparseFamily};
use crate::scalar::Scalar;
use crate::step::StepFunction;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LernerCube<T> {
    pub cube: DyadicCube,
    /// Admissible median of `f` on the cube used as its centre.
    pub center: T,
    /// `ω_λ(f; cube)`.
    pub oscillation: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LernerFamily<T> {
    pub base: DyadicCube,
    pub lambda: T,
    /// `m_f(Q)` for the base cube.
    pub median: T,
    pub base_oscillation: T,
    /// `levels[k - 1]` holds the pairwise disjoint cubes `Q^k_j`.
    pub levels: Vec<Vec<LernerCube<T>>>,
    pub certificate: LernerCertificate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LernerCertificate {
    /// `|f - m_f(Q)| ≤ 4 M^♯ f + 4 Σ ω 1_{Q^k_j}` at every cell of the base.
    pub holds: bool,
    /// Largest `lhs / rhs` over cells with positive right side.
    pub worst_ratio: f64,
    /// Cell attaining `worst_ratio`, or the first violating cell.
    pub worst_cell: Option<DyadicCube>,
    pub sparse: SparseCertificate,
    /// `Ω_{k+1} ⊆ Ω_k` and `|Ω_{k+1} ∩ Q^k_j| ≤ |Q^k_j|/2`.
    pub nested: bool,
}

impl<T: Scalar> LernerFamily<T> {
    pub fn cubes(&self) -> Vec<DyadicCube> {
        self.levels.iter().flatten().map(|c| c.cube).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn sparse_family(&self) -> SparseFamily {
        SparseFamily::new(self.cubes()).expect("family cubes share the standard grid")
    }

    /// `Σ_{k,j} ω_λ(f; Q^k_j) 1_{Q^k_j}` on the mesh of `f`.
    pub fn oscillation_sum(&self, f: &StepFunction<T>) -> Result<StepFunction<T>> {
        let d = *f.domain();
        let mut out = StepFunction::zeros(d);
        for c in self.levels.iter().flatten() {
            for v in &mut out.cells_mut()[d.cube_range(&c.cube)?] {
                *v = *v + c.oscillation;
            }
        }
        Ok(out)
    }

    /// Recomputes the pointwise inequality and the family structure.
    pub fn certify(&self, f: &StepFunction<T>) -> Result<LernerCertificate> {
        let d = *f.domain();
        let range = d.cube_range(&self.base)?;
        let sharp = sharp_maximal(f, &self.base, self.lambda)?;
        let sum = self.oscillation_sum(f)?;
        let four = T::of(4.0);
        let mut holds = true;
        let mut worst_ratio = 0.0f64;
        let mut worst_cell = None;
        for i in range {
            let lhs = (f.cells()[i] - self.median).abs();
            let rhs = four * sharp.cells()[i] + four * sum.cells()[i];
            if lhs > rhs {
                if holds {
                    worst_cell = Some(d.cell_cube(i));
                }
                holds = false;
                worst_ratio = f64::INFINITY;
            } else if rhs > T::zero() {
                let ratio = (lhs / rhs).as_f64();
                if holds && ratio > worst_ratio {
                    worst_ratio = ratio;
                    worst_cell = Some(d.cell_cube(i));
                }
            }
        }

        let mut nested = true;
        for w in self.levels.windows(2) {
            for c in &w[0] {
                let inside: f64 = w[1]
                    .iter()
                    .filter(|p| c.cube.contains(&p.cube))
                    .map(|p| p.cube.volume::<f64>())
                    .sum();
                nested &= inside <= c.cube.volume::<f64>() / 2.0;
            }
            nested &= w[1].iter().all(|p| w[0].iter().any(|c| c.cube.contains(&p.cube)));
        }
        for level in &self.levels {
            for (i, a) in level.iter().enumerate() {
                nested &= self.base.contains(&a.cube);
                nested &= level[i + 1..].iter().all(|b| !a.cube.intersects(&b.cube));
            }
        }

        Ok(LernerCertificate { holds, worst_ratio, worst_cell, sparse: sparse_verify(&self.cubes()), nested })
    }
}

/// Default oscillation level `2^{-n-2}`.
pub fn default_lambda<T: Scalar>(dim: usize) -> T {
    T::exp2i(-(dim as i32) - 2)
}

/// Builds the stopping family for `f` on `Q` and certifies it.
///
/// `lambda` defaults to `2^{-n-2}` and may not exceed it. An uncertified
/// result is reported as [`DyadError::Internal`].
pub fn lerner_decompose<T: Scalar>(f: &StepFunction<T>, q: &DyadicCube, lambda: Option<T>) -> Result<LernerFamily<T>> {
    let d = *f.domain();
    let n = d.dim();
    let lambda = lambda.unwrap_or_else(|| default_lambda(n));
    if !(lambda > T::zero() && lambda <= default_lambda(n)) {
        return Err(DyadError::Parameter(format!("λ = {lambda} must lie in (0, 2^-{}]", n + 2)));
    }
    let range = d.cube_range(q)?;
    let base_level = (q.scale() - d.top_scale()) as u32;
    let cells = &f.cells()[range.clone()];
    let (median, _) = median_interval(cells);
    let (base_oscillation, _) = local_osc_slice(cells, lambda);

    // (offset within base, width, level below top, centre)
    let mut frontier = vec![(0usize, cells.len(), base_level, median)];
    let mut levels: Vec<Vec<LernerCube<T>>> = Vec::new();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let mut level_cubes = Vec::new();
        for (off, width, lvl, center) in frontier {
            let local = &cells[off..off + width];
            if width == 1 {
                continue;
            }
            let shifted: Vec<T> = local.iter().map(|&v| v - center).collect();
            let s = rearrangement_slice(&shifted, quantile_position(lambda, width));
            let in_e: Vec<bool> = shifted.iter().map(|v| v.abs() > s).collect();
            let mut prefix = vec![0usize; width + 1];
            for (i, &e) in in_e.iter().enumerate() {
                prefix[i + 1] = prefix[i] + usize::from(e);
            }
            let mut taken = vec![false; width];
            let mut w = width >> n;
            let mut sub = lvl + 1;
            while w >= 1 {
                for start in (0..width).step_by(w) {
                    if taken[start] {
                        continue;
                    }
                    let count_e = prefix[start + w] - prefix[start];
                    if (count_e << (n + 1)) > w {
                        taken[start..start + w].iter_mut().for_each(|t| *t = true);
                        let p_cells = &local[start..start + w];
                        let (lo, hi) = median_interval(p_cells);
                        let c = center.max(lo).min(hi);
                        let chunk = (range.start + off + start) / w;
                        let cube = d.cube_at(sub, chunk);
                        let oscillation = local_osc_slice(p_cells, lambda).0;
                        level_cubes.push(LernerCube { cube, center: c, oscillation });
                        next.push((off + start, w, sub, c));
                    }
                }
                if w == 1 {
                    break;
                }
                w >>= n;
                sub += 1;
            }
        }
        if !level_cubes.is_empty() {
            levels.push(level_cubes);
        }
        frontier = next;
    }

    let mut family = LernerFamily {
        base: *q,
        lambda,
        median,
        base_oscillation,
        levels,
        certificate: LernerCertificate {
            holds: false,
            worst_ratio: f64::NAN,
            worst_cell: None,
            sparse: sparse_verify(&[]),
            nested: false,
        },
    };
    let cert = family.certify(f)?;
    if !(cert.holds && cert.sparse.pass && cert.nested) {
        return Err(DyadError::Internal(format!(
            "decomposition of {q} failed certification: {cert:?}"
        )));
    }
    family.certificate = cert;
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    #[test]
    fn constant_gives_empty_family() {
        let d = Domain::unit(1, 6).unwrap();
        let f = StepFunction::constant(d, 3.0);
        let fam = lerner_decompose(&f, &DyadicCube::interval(0, 0), None).unwrap();
        assert!(fam.is_empty());
        assert_eq!(fam.median, 3.0);
        assert!(fam.certificate.holds);
    }

    #[test]
    fn half_indicator_certified_at_depth_8() {
        let d = Domain::unit(1, 8).unwrap();
        let f = StepFunction::indicator(d, &DyadicCube::interval(1, 0), 1.0).unwrap();
        let fam = lerner_decompose(&f, &DyadicCube::interval(0, 0), None).unwrap();
        assert!(fam.certificate.holds);
        assert!(fam.certificate.sparse.pass);
        assert!(fam.certificate.worst_ratio <= 0.5);
    }

    #[test]
    fn staircase_needs_the_family() {
        // f = Σ_k 1_{[0, 2^-k)}, the sum of many small oscillations near 0
        let depth = 8;
        let d = Domain::unit(1, depth).unwrap();
        let mut f = StepFunction::zeros(d);
        for k in 0..=depth as i32 {
            f = f.lin_comb(1.0, &StepFunction::indicator(d, &DyadicCube::interval(k, 0), 1.0).unwrap(), 1.0).unwrap();
        }
        let fam = lerner_decompose(&f, &DyadicCube::interval(0, 0), None).unwrap();
        assert!(!fam.is_empty());
        assert!(fam.certificate.holds && fam.certificate.nested);
    }

    #[test]
    fn rejects_large_lambda() {
        let d = Domain::unit(1, 4).unwrap();
        let f = StepFunction::constant(d, 1.0);
        assert!(lerner_decompose(&f, &DyadicCube::interval(0, 0), Some(0.3)).is_err());
    }
}
