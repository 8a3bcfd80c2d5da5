//! The bounded root region and the addressing of its depth-`N` mesh.
//!
//! The root is a union of top-level standard cubes ("blocks") of scale
//! `top_scale`, with per-axis indices in `lo..hi`. Cells inside a block are
//! stored in Morton order, so every dyadic subcube of a block occupies one
//! contiguous range of the cell array: at level `d` below the top, the
//! aligned chunks of length `2^{n(N-d)}` are exactly the dyadic cubes.

use std::ops::Range;

use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};
use crate::scalar::Scalar;

/// Mesh cells are capped at `2^26` to keep every experiment in memory.
pub const MAX_CELLS: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Domain {
    dim: u8,
    top_scale: i32,
    lo: i64,
    hi: i64,
    depth: u32,
}

impl Domain {
    /// General constructor: top cubes of scale `top_scale` with per-axis
    /// indices in `lo..hi`, refined `depth` levels.
    pub fn new(dim: usize, top_scale: i32, lo: i64, hi: i64, depth: u32) -> Result<Self> {
        if !(1..=crate::dyadic::MAX_DIM).contains(&dim) {
            return Err(DyadError::Parameter(format!("dimension {dim} unsupported")));
        }
        if hi <= lo {
            return Err(DyadError::Parameter(format!("empty block range {lo}..{hi}")));
        }
        let blocks = ((hi - lo) as usize).checked_pow(dim as u32);
        let per_block = 1usize.checked_shl(dim as u32 * depth);
        let len = blocks.zip(per_block).and_then(|(b, c)| b.checked_mul(c));
        match len {
            Some(l) if l <= MAX_CELLS => {}
            _ => {
                return Err(DyadError::Resolution(format!(
                    "mesh with dim {dim}, depth {depth} exceeds {MAX_CELLS} cells"
                )))
            }
        }
        Ok(Self { dim: dim as u8, top_scale, lo, hi, depth })
    }

    /// `[0,1)^n` refined to depth `N`.
    pub fn unit(dim: usize, depth: u32) -> Result<Self> {
        Self::new(dim, 0, 0, 1, depth)
    }

    /// `[-2^L, 2^L)^n` refined `depth` levels below its `2^n` top cubes.
    pub fn symmetric(dim: usize, top: i32, depth: u32) -> Result<Self> {
        Self::new(dim, -top, -1, 1, depth)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn top_scale(&self) -> i32 {
        self.top_scale
    }

    pub fn cell_scale(&self) -> i32 {
        self.top_scale + self.depth as i32
    }

    fn blocks_per_axis(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn block_count(&self) -> usize {
        self.blocks_per_axis().pow(self.dim as u32)
    }

    pub fn cells_per_block(&self) -> usize {
        1 << (self.dim as u32 * self.depth)
    }

    pub fn len(&self) -> usize {
        self.block_count() * self.cells_per_block()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume<T: Scalar>(&self) -> T {
        T::exp2i(-self.cell_scale() * self.dim as i32)
    }

    pub fn volume<T: Scalar>(&self) -> T {
        T::of_usize(self.len()) * self.cell_volume::<T>()
    }

    /// Number of cells in a cube `level` steps below the top.
    pub fn cells_at_level(&self, level: u32) -> usize {
        1 << (self.dim as u32 * (self.depth - level))
    }

    /// Number of cubes at `level` (all blocks together).
    pub fn cubes_at_level(&self, level: u32) -> usize {
        self.block_count() << (self.dim as u32 * level)
    }

    pub fn top_cubes(&self) -> Vec<DyadicCube> {
        (0..self.block_count()).map(|b| self.cube_at(0, b)).collect()
    }

    /// The `chunk`-th cube at `level` in storage order.
    pub fn cube_at(&self, level: u32, chunk: usize) -> DyadicCube {
        let n = self.dim();
        let per = 1usize << (n as u32 * level);
        let block = chunk / per;
        let morton = chunk % per;
        let mut idx = [0i64; crate::dyadic::MAX_DIM];
        let mut b = block;
        for a in 0..n {
            let bi = (b % self.blocks_per_axis()) as i64 + self.lo;
            b /= self.blocks_per_axis();
            idx[a] = bi << level;
        }
        for bit in 0..level as usize {
            for a in 0..n {
                if (morton >> (bit * n + a)) & 1 == 1 {
                    idx[a] += 1 << bit;
                }
            }
        }
        DyadicCube::new(self.top_scale + level as i32, &idx[..n])
    }

    pub fn cell_cube(&self, i: usize) -> DyadicCube {
        self.cube_at(self.depth, i)
    }

    /// Level below the top and chunk index of a mesh-compatible cube.
    pub fn locate(&self, q: &DyadicCube) -> Result<(u32, usize)> {
        if q.dim() != self.dim() {
            return Err(DyadError::Mesh(format!("cube {q} has dimension {}", q.dim())));
        }
        if !q.is_standard() {
            return Err(DyadError::Mesh(format!("shifted cube {q} is not a union of mesh cells")));
        }
        if q.scale() < self.top_scale {
            return Err(DyadError::DomainOverflow(format!("cube {q} is larger than the root blocks")));
        }
        if q.scale() > self.cell_scale() {
            return Err(DyadError::Mesh(format!("cube {q} is finer than the depth-{} mesh", self.depth)));
        }
        let level = (q.scale() - self.top_scale) as u32;
        let n = self.dim();
        let mut block = 0usize;
        let mut stride = 1usize;
        let mut morton = 0usize;
        for a in 0..n {
            let m = q.index()[a];
            let bi = m >> level;
            if bi < self.lo || bi >= self.hi {
                return Err(DyadError::DomainOverflow(format!("cube {q} lies outside the root")));
            }
            block += (bi - self.lo) as usize * stride;
            stride *= self.blocks_per_axis();
            let local = (m - (bi << level)) as usize;
            for bit in 0..level as usize {
                if (local >> bit) & 1 == 1 {
                    morton |= 1 << (bit * n + a);
                }
            }
        }
        Ok((level, (block << (n as u32 * level)) | morton))
    }

    /// Cell range occupied by a mesh-compatible cube.
    pub fn cube_range(&self, q: &DyadicCube) -> Result<Range<usize>> {
        let (level, chunk) = self.locate(q)?;
        let w = self.cells_at_level(level);
        Ok(chunk * w..(chunk + 1) * w)
    }

    /// Whether the cube's point set lies inside the root (any grid).
    pub fn contains_cube(&self, q: &DyadicCube) -> bool {
        if q.dim() != self.dim() {
            return false;
        }
        let t = q.scale().max(self.top_scale);
        let root_lo = (3 * self.lo as i128) << (t - self.top_scale) as u32;
        let root_hi = (3 * self.hi as i128) << (t - self.top_scale) as u32;
        (0..self.dim()).all(|a| {
            let lo = q.lower_thirds(a) << (t - q.scale()) as u32;
            let hi = (q.lower_thirds(a) + 3) << (t - q.scale()) as u32;
            root_lo <= lo && hi <= root_hi
        })
    }

    /// `Q^{(i)}`: the ancestor `i` generations up, which must stay inside the root.
    pub fn ancestor(&self, q: &DyadicCube, i: u32) -> Result<DyadicCube> {
        let a = q.ancestor_unchecked(i);
        if self.contains_cube(&a) {
            Ok(a)
        } else {
            Err(DyadError::DomainOverflow(format!("ancestor {i} of {q} is {a}, outside the root")))
        }
    }

    /// Children of a cube, which must not be finer than the mesh.
    pub fn children(&self, q: &DyadicCube) -> Result<Vec<DyadicCube>> {
        if q.scale() + 1 > self.cell_scale() {
            return Err(DyadError::Resolution(format!(
                "children of {q} lie below the depth-{} mesh",
                self.depth
            )));
        }
        Ok(q.children_unchecked())
    }

    /// Lower-left corner and side of cell `i`.
    pub fn cell_bounds<T: Scalar>(&self, i: usize) -> (Vec<T>, T) {
        let c = self.cell_cube(i);
        ((0..self.dim()).map(|a| c.lower::<T>(a)).collect(), c.side::<T>())
    }
}
