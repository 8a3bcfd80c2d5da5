//! Dyadic cubes in the standard grid and its one-third translates.
//!
//! A cube of the grid with shift flags `s ∈ {0,1}^n` (shift `s/3`) at scale
//! `k` and index `m` is the point set `2^{-k}([0,1)^n + m + (-1)^k s/3)`.
//! Along each axis its lower endpoint is `(3m + (-1)^k s) / (3·2^k)`, so all
//! containment questions reduce to integer comparisons after bringing both
//! endpoints to the common denominator `3·2^k`.

use std::fmt;

use crate::error::{DyadError, Result};
use crate::scalar::Scalar;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 2;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicCube {
    dim: u8,
    scale: i32,
    index: [i64; MAX_DIM],
    shift: [bool; MAX_DIM],
}

#[inline]
fn sign_of_scale(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl DyadicCube {
    /// Cube of the standard grid `D`.
    pub fn new(scale: i32, index: &[i64]) -> Self {
        Self::shifted(scale, index, &[false; MAX_DIM][..index.len()])
    }

    /// Cube of the shifted grid selected by `shift` (`true` means `1/3`).
    pub fn shifted(scale: i32, index: &[i64], shift: &[bool]) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&index.len()) && index.len() == shift.len(),
            "dimension must be 1..={MAX_DIM}"
        );
        let mut idx = [0; MAX_DIM];
        let mut sh = [false; MAX_DIM];
        idx[..index.len()].copy_from_slice(index);
        sh[..shift.len()].copy_from_slice(shift);
        Self { dim: index.len() as u8, scale, index: idx, shift: sh }
    }

    /// The one-dimensional standard dyadic interval `[m 2^{-k}, (m+1) 2^{-k})`.
    pub fn interval(scale: i32, m: i64) -> Self {
        Self::new(scale, &[m])
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn scale(&self) -> i32 {
        self.scale
    }

    pub fn index(&self) -> &[i64] {
        &self.index[..self.dim()]
    }

    pub fn shift(&self) -> &[bool] {
        &self.shift[..self.dim()]
    }

    pub fn is_standard(&self) -> bool {
        self.shift().iter().all(|s| !s)
    }

    /// Lower endpoint along `axis` as a numerator over `3·2^scale`.
    #[inline]
    pub fn lower_thirds(&self, axis: usize) -> i128 {
        let s = i64::from(self.shift[axis]);
        (3 * self.index[axis] + sign_of_scale(self.scale) * s) as i128
    }

    /// Lower endpoint along `axis` as a numerator over `3·2^target`, `target ≥ scale`.
    fn lower_at(&self, axis: usize, target: i32) -> i128 {
        debug_assert!(target >= self.scale);
        self.lower_thirds(axis) << (target - self.scale) as u32
    }

    fn upper_at(&self, axis: usize, target: i32) -> i128 {
        (self.lower_thirds(axis) + 3) << (target - self.scale) as u32
    }

    pub fn side<T: Scalar>(&self) -> T {
        T::exp2i(-self.scale)
    }

    pub fn volume<T: Scalar>(&self) -> T {
        T::exp2i(-self.scale * self.dim as i32)
    }

    pub fn lower<T: Scalar>(&self, axis: usize) -> T {
        T::of(self.lower_thirds(axis) as f64 / 3.0) * self.side::<T>()
    }

    pub fn upper<T: Scalar>(&self, axis: usize) -> T {
        T::of((self.lower_thirds(axis) + 3) as f64 / 3.0) * self.side::<T>()
    }

    /// The unique cube of scale `k - 1` in the same grid containing `self`.
    pub fn parent(&self) -> Self {
        let sigma = sign_of_scale(self.scale);
        let mut out = *self;
        out.scale = self.scale - 1;
        for a in 0..self.dim() {
            let s = i64::from(self.shift[a]);
            out.index[a] = (self.index[a] + sigma * s).div_euclid(2);
        }
        out
    }

    /// Ancestor `i` generations up, with no domain check.
    pub fn ancestor_unchecked(&self, i: u32) -> Self {
        (0..i).fold(*self, |q, _| q.parent())
    }

    /// The `2^n` children, ordered so that bit `a` of the position is the
    /// upper/lower half along axis `a` (Morton order).
    pub fn children_unchecked(&self) -> Vec<Self> {
        let sigma_child = sign_of_scale(self.scale + 1);
        let n = self.dim();
        (0..1usize << n)
            .map(|c| {
                let mut out = *self;
                out.scale = self.scale + 1;
                for a in 0..n {
                    let s = i64::from(self.shift[a]);
                    let bit = ((c >> a) & 1) as i64;
                    out.index[a] = 2 * self.index[a] - sigma_child * s + bit;
                }
                out
            })
            .collect()
    }

    /// Point-set containment `other ⊆ self`, valid across different grids.
    pub fn contains(&self, other: &Self) -> bool {
        if self.dim != other.dim || other.scale < self.scale {
            return false;
        }
        let t = other.scale;
        (0..self.dim()).all(|a| {
            self.lower_at(a, t) <= other.lower_at(a, t) && other.upper_at(a, t) <= self.upper_at(a, t)
        })
    }

    pub fn intersects(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let t = self.scale.max(other.scale);
        (0..self.dim()).all(|a| {
            self.lower_at(a, t) < other.upper_at(a, t) && other.lower_at(a, t) < self.upper_at(a, t)
        })
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && (0..self.dim()).all(|a| self.lower::<f64>(a) <= x[a] && x[a] < self.upper::<f64>(a))
    }

    /// The cube of the given grid and scale containing the point `x`.
    pub fn containing(x: &[f64], scale: i32, shift: &[bool]) -> Self {
        assert_eq!(x.len(), shift.len());
        let sigma = sign_of_scale(scale) as f64;
        let idx: Vec<i64> = x
            .iter()
            .zip(shift)
            .map(|(&xa, &s)| {
                let t = xa * 2f64.powi(scale) * 3.0 - sigma * f64::from(u8::from(s));
                (t / 3.0).floor() as i64
            })
            .collect();
        Self::shifted(scale, &idx, shift)
    }
}

impl fmt::Debug for DyadicCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DyadicCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.dim() {
            if a > 0 {
                write!(f, "×")?;
            }
            write!(f, "[{}, {})", self.lower::<f64>(a), self.upper::<f64>(a))?;
        }
        if !self.is_standard() {
            let tag: String = self.shift().iter().map(|&s| if s { '⅓' } else { '0' }).collect();
            write!(f, "@{tag}")?;
        }
        Ok(())
    }
}

/// A half-open axis-parallel cube `∏ [lower_a, lower_a + side)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBox {
    pub lower: Vec<f64>,
    pub side: f64,
}

impl AxisBox {
    pub fn new(lower: &[f64], side: f64) -> Self {
        Self { lower: lower.to_vec(), side }
    }

    pub fn interval(a: f64, b: f64) -> Self {
        Self { lower: vec![a], side: b - a }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// Result of [`shifted_cover`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cover {
    pub cube: DyadicCube,
    /// `side(cube) / side(box)`.
    pub ratio: f64,
}

impl Cover {
    pub fn shift(&self) -> &[bool] {
        self.cube.shift()
    }
}

/// Finds a cube `I` in one of the `2^n` grids with `Q ⊆ I` and
/// `side(I) ≤ 6·side(Q)`.
///
/// The smallest admissible `I` wins; among equal sizes the lexicographically
/// least shift vector (with `0 < 1/3`) is taken.
pub fn shifted_cover(q: &AxisBox) -> Result<Cover> {
    let n = q.dim();
    if n == 0 || n > MAX_DIM {
        return Err(DyadError::Parameter(format!("dimension {n} unsupported")));
    }
    if !(q.side > 0.0) || !q.side.is_finite() {
        return Err(DyadError::Parameter(format!("box side {} must be positive", q.side)));
    }
    // Largest scale whose side still reaches ℓ: 2^{-k} ≥ ℓ.
    let mut k = (-q.side.log2()).floor() as i32;
    while 2f64.powi(-k) < q.side {
        k -= 1;
    }
    while 2f64.powi(-k) <= 6.0 * q.side {
        let scale3 = 3.0 * 2f64.powi(k);
        for mask in 0..1usize << n {
            // lexicographic order on the shift vector: axis 0 is most significant
            let shift: Vec<bool> = (0..n).map(|a| (mask >> (n - 1 - a)) & 1 == 1).collect();
            let cube = DyadicCube::containing(&q.lower, k, &shift);
            let fits = (0..n).all(|a| {
                let lo = cube.lower_thirds(a) as f64;
                lo <= q.lower[a] * scale3 && (q.lower[a] + q.side) * scale3 <= lo + 3.0
            });
            if fits {
                return Ok(Cover { cube, ratio: 2f64.powi(-k) / q.side });
            }
        }
        k -= 1;
    }
    Err(DyadError::Internal(format!(
        "no cube of side ≤ 6ℓ covers box at {:?} with side {}",
        q.lower, q.side
    )))
}
