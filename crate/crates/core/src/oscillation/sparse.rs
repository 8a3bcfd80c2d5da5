use std::collections::BTreeSet;

use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};

/// A family of cubes from one grid, expected to be sparse.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseFamily {
    cubes: Vec<DyadicCube>,
    /// Depth reserved below each cube, e.g. for the exceptional sets of a
    /// positive shift of complexity `κ`.
    pub kappa_margin: Option<u32>,
}

impl SparseFamily {
    /// Deduplicates and sorts coarse-to-fine; all cubes must share a grid.
    pub fn new(cubes: impl IntoIterator<Item = DyadicCube>) -> Result<Self> {
        let set: BTreeSet<DyadicCube> = cubes.into_iter().collect();
        let mut cubes: Vec<DyadicCube> = set.into_iter().collect();
        if let Some(first) = cubes.first() {
            if cubes.iter().any(|c| c.shift() != first.shift() || c.dim() != first.dim()) {
                return Err(DyadError::Parameter("sparse family mixes grids".into()));
            }
        }
        cubes.sort_by_key(|c| c.scale());
        Ok(Self { cubes, kappa_margin: None })
    }

    pub fn with_margin(mut self, kappa: u32) -> Self {
        self.kappa_margin = Some(kappa);
        self
    }

    pub fn cubes(&self) -> &[DyadicCube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn verify(&self) -> SparseCertificate {
        sparse_verify(&self.cubes)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SparseCertificate {
    pub pass: bool,
    /// Smallest `|Q \ ∪{Q' ⊊ Q}| / |Q|` over the family (1 when empty).
    pub min_ratio: f64,
    pub worst: Option<DyadicCube>,
}

/// Checks `|Q \ ∪{Q' ∈ F : Q' ⊊ Q}| ≥ |Q|/2` for every `Q` in the family.
pub fn sparse_verify(cubes: &[DyadicCube]) -> SparseCertificate {
    let set: BTreeSet<DyadicCube> = cubes.iter().copied().collect();
    let mut sorted: Vec<DyadicCube> = set.into_iter().collect();
    sorted.sort_by_key(|c| c.scale());
    let mut min_ratio = 1.0f64;
    let mut worst = None;
    for (i, q) in sorted.iter().enumerate() {
        // strictly finer family members inside q; keep only the maximal ones
        let mut maximal: Vec<DyadicCube> = Vec::new();
        for c in sorted[i + 1..].iter().filter(|c| c.scale() > q.scale() && q.contains(c)) {
            if !maximal.iter().any(|m| m.contains(c)) {
                maximal.push(*c);
            }
        }
        let dim = q.dim() as i32;
        let covered: f64 = maximal.iter().map(|m| 2f64.powi(-dim * (m.scale() - q.scale()))).sum();
        let ratio = 1.0 - covered;
        if ratio < min_ratio {
            min_ratio = ratio;
            worst = Some(*q);
        }
    }
    SparseCertificate { pass: min_ratio >= 0.5, min_ratio, worst }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_family_retains_half() {
        let fam: Vec<DyadicCube> = (0..=10).map(|j| DyadicCube::interval(j, 0)).collect();
        let cert = sparse_verify(&fam);
        assert!(cert.pass);
        assert_eq!(cert.min_ratio, 0.5);
    }

    #[test]
    fn covered_parent_fails() {
        let fam = [DyadicCube::interval(0, 0), DyadicCube::interval(1, 0), DyadicCube::interval(1, 1)];
        let cert = sparse_verify(&fam);
        assert!(!cert.pass);
        assert_eq!(cert.min_ratio, 0.0);
        assert_eq!(cert.worst, Some(DyadicCube::interval(0, 0)));
    }

    #[test]
    fn empty_family_passes() {
        let cert = sparse_verify(&[]);
        assert!(cert.pass);
        assert!(SparseFamily::new([]).unwrap().is_empty());
    }

    #[test]
    fn mixed_grids_rejected() {
        let a = DyadicCube::interval(0, 0);
        let b = DyadicCube::shifted(0, &[0], &[true]);
        assert!(SparseFamily::new([a, b]).is_err());
    }
}
