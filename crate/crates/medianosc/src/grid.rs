//! Sampled functions on uniform cube grids, cube regions, and dyadic subdivision.
//!
//! A `SampledFunction` holds one value per grid cell and is treated as constant
//! on each cell, so it is an exact simple function: every counting identity in
//! the rest of the crate is exact, not approximate. Measures are computed as
//! integer cell counts scaled once by the cell volume, which keeps additivity
//! exact under dyadic subdivision.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default cap on the number of cubes an enumeration may produce.
pub const DEFAULT_FAMILY_CAP: usize = 4_000_000;

/// Real-valued samples on a uniform grid over an axis-parallel cube.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    dim: usize,
    origin: Vec<f64>,
    side: f64,
    cells_per_side: usize,
    values: Vec<f64>,
}

impl SampledFunction {
    /// Builds a sampled function, validating finiteness and the cell count.
    pub fn new(
        dim: usize,
        origin: Vec<f64>,
        side: f64,
        cells_per_side: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidField("dimension must be positive".into()));
        }
        if origin.len() != dim {
            return Err(Error::InvalidField(format!(
                "origin has {} coordinates for dimension {}",
                origin.len(),
                dim
            )));
        }
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::InvalidField(format!("side {side} must be finite and positive")));
        }
        if cells_per_side == 0 {
            return Err(Error::InvalidField("cells_per_side must be positive".into()));
        }
        let expected = cells_per_side.checked_pow(dim as u32).ok_or_else(|| {
            Error::InvalidField("cell count overflows".into())
        })?;
        if values.len() != expected {
            return Err(Error::InvalidField(format!(
                "expected {expected} values, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!(
                "non-finite value {} at cell {bad}",
                values[bad]
            )));
        }
        if origin.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidField("non-finite origin coordinate".into()));
        }
        Ok(Self { dim, origin, side, cells_per_side, values })
    }

    /// Samples a closed-form function at cell centers.
    pub fn from_fn(
        dim: usize,
        origin: Vec<f64>,
        side: f64,
        cells_per_side: usize,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let n_cells = cells_per_side.pow(dim as u32);
        let width = side / cells_per_side as f64;
        let mut values = Vec::with_capacity(n_cells);
        let mut center = vec![0.0; dim];
        for cell in 0..n_cells {
            let idx = unflatten(cell, dim, cells_per_side);
            for (a, &i) in idx.iter().enumerate() {
                center[a] = origin[a] + (i as f64 + 0.5) * width;
            }
            values.push(f(&center));
        }
        Self::new(dim, origin, side, cells_per_side, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn cells_per_side(&self) -> usize {
        self.cells_per_side
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_cells(&self) -> usize {
        self.values.len()
    }

    pub fn cell_width(&self) -> f64 {
        self.side / self.cells_per_side as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_width().powi(self.dim as i32)
    }

    /// Row-major flat index of a multi-index.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        flatten(idx, self.cells_per_side)
    }

    /// Multi-index of a row-major flat index.
    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        unflatten(flat, self.dim, self.cells_per_side)
    }

    pub fn value_at(&self, idx: &[usize]) -> f64 {
        self.values[self.flat_index(idx)]
    }

    /// Center coordinates of a cell.
    pub fn cell_center(&self, idx: &[usize]) -> Vec<f64> {
        let w = self.cell_width();
        idx.iter()
            .enumerate()
            .map(|(a, &i)| self.origin[a] + (i as f64 + 0.5) * w)
            .collect()
    }

    /// The region covering the whole grid.
    pub fn full_region(&self) -> CubeRegion {
        CubeRegion {
            lo: vec![0; self.dim],
            len: self.cells_per_side,
            cell_width: self.cell_width(),
        }
    }

    /// Builds and validates a sub-cube region aligned to grid cells.
    pub fn region(&self, lo: Vec<usize>, len: usize) -> Result<CubeRegion> {
        if lo.len() != self.dim {
            return Err(Error::InvalidField(format!(
                "region corner has {} coordinates for dimension {}",
                lo.len(),
                self.dim
            )));
        }
        if len == 0 {
            return Err(Error::InvalidField("region must span at least one cell".into()));
        }
        for &c in &lo {
            if c + len > self.cells_per_side {
                return Err(Error::InvalidField(format!(
                    "region [{c}, {}) exceeds grid of {} cells",
                    c + len,
                    self.cells_per_side
                )));
            }
        }
        Ok(CubeRegion { lo, len, cell_width: self.cell_width() })
    }

    /// Flat indices of the cells inside a region, row-major.
    pub fn cells_in(&self, region: &CubeRegion) -> Vec<usize> {
        let mut out = Vec::with_capacity(region.n_cells(self.dim));
        let mut offset = vec![0usize; self.dim];
        loop {
            let idx: Vec<usize> =
                region.lo.iter().zip(&offset).map(|(&l, &o)| l + o).collect();
            out.push(self.flat_index(&idx));
            if !increment(&mut offset, region.len) {
                break;
            }
        }
        out
    }

    /// Values of the cells inside a region, row-major.
    pub fn values_in(&self, region: &CubeRegion) -> Vec<f64> {
        self.cells_in(region).iter().map(|&c| self.values[c]).collect()
    }

    /// Pointwise map, preserving the grid geometry.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.dim,
            self.origin.clone(),
            self.side,
            self.cells_per_side,
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    /// New sampled function carrying only the cells of `region`, with the
    /// region's own geometry (origin shifted, side shrunk).
    pub fn restrict(&self, region: &CubeRegion) -> Result<Self> {
        let w = self.cell_width();
        let origin = region
            .lo
            .iter()
            .enumerate()
            .map(|(a, &l)| self.origin[a] + l as f64 * w)
            .collect();
        Self::new(
            self.dim,
            origin,
            region.len as f64 * w,
            region.len,
            self.values_in(region),
        )
    }
}

/// An axis-parallel sub-cube aligned to grid cells: corner index and side in cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeRegion {
    pub lo: Vec<usize>,
    pub len: usize,
    cell_width: f64,
}

impl CubeRegion {
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn n_cells(&self, dim: usize) -> usize {
        self.len.pow(dim as u32)
    }

    /// Lebesgue measure: (cells per side x cell width)^dim.
    pub fn measure(&self) -> f64 {
        (self.len as f64 * self.cell_width).powi(self.dim() as i32)
    }

    pub fn side_length(&self) -> f64 {
        self.len as f64 * self.cell_width
    }

    /// Euclidean diameter of the cube.
    pub fn diameter(&self) -> f64 {
        self.side_length() * (self.dim() as f64).sqrt()
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    pub fn contains_cell(&self, idx: &[usize]) -> bool {
        idx.iter()
            .zip(&self.lo)
            .all(|(&i, &l)| i >= l && i < l + self.len)
    }

    pub fn contains_region(&self, other: &CubeRegion) -> bool {
        other
            .lo
            .iter()
            .zip(&self.lo)
            .all(|(&o, &l)| o >= l && o + other.len <= l + self.len)
    }

    /// True when the interiors intersect. Shared faces do not count.
    pub fn interiors_overlap(&self, other: &CubeRegion) -> bool {
        self.lo
            .iter()
            .zip(&other.lo)
            .all(|(&a, &b)| a < b + other.len && b < a + self.len)
    }
}

/// A dyadic descendant of a root region: level and per-axis index in [0, 2^level).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: u32,
    pub index: Vec<usize>,
}

impl DyadicCube {
    pub fn root(dim: usize) -> Self {
        Self { level: 0, index: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// Cells per side when the root cube has `root_len` cells per side.
    pub fn len_in(&self, root_len: usize) -> usize {
        root_len >> self.level
    }

    /// The 2^dim children one level down. Fails at the recursion floor.
    pub fn subdivide(&self, root_len: usize) -> Result<Vec<DyadicCube>> {
        let len = self.len_in(root_len);
        if len <= 1 || !len.is_multiple_of(2) {
            return Err(Error::IndivisibleCube { len });
        }
        let dim = self.dim();
        let mut children = Vec::with_capacity(1 << dim);
        for corner in 0..(1usize << dim) {
            let index = self
                .index
                .iter()
                .enumerate()
                .map(|(a, &i)| 2 * i + ((corner >> a) & 1))
                .collect();
            children.push(DyadicCube { level: self.level + 1, index });
        }
        Ok(children)
    }

    /// Concrete region of this cube inside `root`.
    pub fn region_in(&self, root: &CubeRegion) -> CubeRegion {
        let len = self.len_in(root.len);
        let lo = root
            .lo
            .iter()
            .zip(&self.index)
            .map(|(&r, &i)| r + i * len)
            .collect();
        CubeRegion { lo, len, cell_width: root.cell_width }
    }
}

/// Which cubes a scan ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CubeFamily {
    /// Every grid-aligned cube inside the region.
    All,
    /// Power-of-two sides at aligned positions.
    Dyadic,
    /// Dyadic plus half-side translates.
    DyadicShifted,
}

impl CubeFamily {
    /// Family used by default at a given resolution: exhaustive while cheap,
    /// dyadic-with-shifts beyond that.
    pub fn default_for(dim: usize, len: usize) -> CubeFamily {
        let all_limit = match dim {
            1 => 64,
            2 => 32,
            _ => 16,
        };
        if len <= all_limit {
            CubeFamily::All
        } else {
            CubeFamily::DyadicShifted
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CubeFamily::All => "all",
            CubeFamily::Dyadic => "dyadic",
            CubeFamily::DyadicShifted => "dyadic-shifted",
        }
    }
}

impl std::str::FromStr for CubeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(CubeFamily::All),
            "dyadic" => Ok(CubeFamily::Dyadic),
            "dyadic-shifted" => Ok(CubeFamily::DyadicShifted),
            other => Err(Error::InvalidParameter(format!(
                "unknown cube family '{other}' (expected all | dyadic | dyadic-shifted)"
            ))),
        }
    }
}

fn flatten(idx: &[usize], n_side: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n_side + i)
}

fn unflatten(mut flat: usize, dim: usize, n_side: usize) -> Vec<usize> {
    let mut idx = vec![0; dim];
    for a in (0..dim).rev() {
        idx[a] = flat % n_side;
        flat /= n_side;
    }
    idx
}

/// Advances a row-major offset counter; false once it wraps to zero.
fn increment(offset: &mut [usize], len: usize) -> bool {
    for a in (0..offset.len()).rev() {
        offset[a] += 1;
        if offset[a] < len {
            return true;
        }
        offset[a] = 0;
    }
    false
}

/// Side lengths (in cells) a family uses inside a region of `len` cells per side.
fn family_side_menu(region_len: usize, family: CubeFamily) -> Vec<usize> {
    match family {
        CubeFamily::All => (1..=region_len).collect(),
        CubeFamily::Dyadic | CubeFamily::DyadicShifted => {
            let mut sides = Vec::new();
            let mut a = 1;
            while a <= region_len {
                sides.push(a);
                a *= 2;
            }
            sides
        }
    }
}

/// Corner positions (relative to the region) for a given side length.
fn family_positions_1axis(region_len: usize, side: usize, family: CubeFamily) -> Vec<usize> {
    match family {
        CubeFamily::All => (0..=region_len - side).collect(),
        CubeFamily::Dyadic => (0..)
            .map(|k| k * side)
            .take_while(|&p| p + side <= region_len)
            .collect(),
        CubeFamily::DyadicShifted => {
            let mut ps: Vec<usize> = (0..)
                .map(|k| k * side)
                .take_while(|&p| p + side <= region_len)
                .collect();
            if side >= 2 {
                let half = side / 2;
                ps.extend(
                    (0..)
                        .map(|k| half + k * side)
                        .take_while(|&p| p + side <= region_len),
                );
            }
            ps.sort_unstable();
            ps.dedup();
            ps
        }
    }
}

/// Number of cubes `enumerate_cubes` would yield, by closed-form counting.
pub fn count_cubes(region: &CubeRegion, family: CubeFamily) -> usize {
    let dim = region.dim();
    family_side_menu(region.len, family)
        .into_iter()
        .map(|side| family_positions_1axis(region.len, side, family).len().pow(dim as u32))
        .sum()
}

/// Enumerates the family's cubes within `region`, ordered by (side, corner).
///
/// The order is deterministic: sides ascending, corners lexicographic. Fails
/// with `FamilyTooLarge` when the count exceeds `cap` (defaulted when `None`).
pub fn enumerate_cubes(
    region: &CubeRegion,
    family: CubeFamily,
    cap: Option<usize>,
) -> Result<Vec<CubeRegion>> {
    let cap = cap.unwrap_or(DEFAULT_FAMILY_CAP);
    let count = count_cubes(region, family);
    if count > cap {
        return Err(Error::FamilyTooLarge { count, cap });
    }
    let dim = region.dim();
    let mut out = Vec::with_capacity(count);
    for side in family_side_menu(region.len, family) {
        let axis_positions = family_positions_1axis(region.len, side, family);
        let mut cursor = vec![0usize; dim];
        loop {
            let lo: Vec<usize> = cursor
                .iter()
                .enumerate()
                .map(|(a, &c)| region.lo[a] + axis_positions[c])
                .collect();
            out.push(CubeRegion { lo, len: side, cell_width: region.cell_width });
            if !increment(&mut cursor, axis_positions.len()) {
                break;
            }
        }
    }
    Ok(out)
}

/// The chain of dyadic cubes containing a cell, from the root down to the cell.
///
/// `cell` is relative to the root region; the root side must be a power of two.
pub fn dyadic_tower(root_len: usize, cell: &[usize]) -> Result<Vec<DyadicCube>> {
    if !root_len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "dyadic tower needs a power-of-two side, got {root_len}"
        )));
    }
    let levels = root_len.trailing_zeros();
    let mut tower = Vec::with_capacity(levels as usize + 1);
    for level in 0..=levels {
        let len = root_len >> level;
        let index = cell.iter().map(|&c| c / len).collect();
        tower.push(DyadicCube { level, index });
    }
    Ok(tower)
}
