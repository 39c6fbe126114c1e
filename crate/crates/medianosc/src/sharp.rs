//! The local sharp maximal field over a cube: for each cell, the largest
//! best-constant oscillation among the family cubes containing it.
//!
//! The field is computed against a configurable cube family. Enlarging the
//! family can only raise the field, so values computed on a subfamily are
//! lower estimates of the exhaustive field. Single-cell features can be
//! invisible in 2D when `s >= 1/4`: no cube then has a value-mass fraction
//! strictly between `s` and `1 - s`, so tests needing positive sharp values
//! use block features or a smaller `s`.

use crate::error::{Error, Result};
use crate::grid::{enumerate_cubes, CubeFamily, CubeRegion, SampledFunction};
use crate::median::{best_constant_oscillation, WeightedSamples};
use rayon::prelude::*;
use serde::Serialize;

/// Per-cell sharp values over a region, with the parameters that produced them.
#[derive(Debug, Clone, Serialize)]
pub struct SharpField {
    pub region: CubeRegion,
    pub s: f64,
    pub family: CubeFamily,
    /// One value per cell of `region`, row-major, each >= 0.
    pub values: Vec<f64>,
}

impl SharpField {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Row-major offset of a grid cell inside the field's region.
    pub fn offset_of(&self, cell: &[usize]) -> usize {
        cell.iter()
            .zip(&self.region.lo)
            .fold(0, |acc, (&c, &l)| acc * self.region.len + (c - l))
    }

    /// Minimum over the cells of a sub-region.
    pub fn min_over(&self, sub: &CubeRegion) -> f64 {
        debug_assert!(self.region.contains_region(sub));
        let dim = self.region.dim();
        let mut offset = vec![0usize; dim];
        let mut min = f64::INFINITY;
        loop {
            let cell: Vec<usize> =
                sub.lo.iter().zip(&offset).map(|(&l, &o)| l + o).collect();
            min = min.min(self.values[self.offset_of(&cell)]);
            if !advance(&mut offset, sub.len) {
                break;
            }
        }
        min
    }

    /// True when every cell of `sub` exceeds `beta`.
    pub fn all_above(&self, sub: &CubeRegion, beta: f64) -> bool {
        self.min_over(sub) > beta
    }

    /// The field as a sampled function on the region's own geometry, for
    /// serialization to a field file.
    pub fn to_sampled(&self, parent: &SampledFunction) -> Result<SampledFunction> {
        let w = parent.cell_width();
        let origin = self
            .region
            .lo
            .iter()
            .enumerate()
            .map(|(a, &l)| parent.origin()[a] + l as f64 * w)
            .collect();
        SampledFunction::new(
            parent.dim(),
            origin,
            self.region.len as f64 * w,
            self.region.len,
            self.values.clone(),
        )
    }
}

fn advance(offset: &mut [usize], len: usize) -> bool {
    for a in (0..offset.len()).rev() {
        offset[a] += 1;
        if offset[a] < len {
            return true;
        }
        offset[a] = 0;
    }
    false
}

/// Computes the sharp field of `f` over `region`: for each cell the maximum,
/// over family cubes inside the region containing that cell, of the
/// best-constant oscillation with parameter `s`.
pub fn local_sharp_maximal(
    f: &SampledFunction,
    region: &CubeRegion,
    s: f64,
    family: CubeFamily,
) -> Result<SharpField> {
    if !(s > 0.0 && s <= 0.5) {
        return Err(Error::InvalidParameter(format!("s = {s} must lie in (0, 1/2]")));
    }
    let cubes = enumerate_cubes(region, family, None)?;
    // one oscillation per cube, computed in parallel in enumeration order
    let omegas: Vec<f64> = cubes
        .par_iter()
        .map(|q| {
            let samples = WeightedSamples::from_region(f, q);
            best_constant_oscillation(&samples, s).map(|o| o.omega)
        })
        .collect::<Result<_>>()?;

    let dim = region.dim();
    let mut field = SharpField {
        region: region.clone(),
        s,
        family,
        values: vec![0.0; region.n_cells(dim)],
    };
    for (q, omega) in cubes.iter().zip(omegas) {
        if omega <= 0.0 {
            continue;
        }
        let mut offset = vec![0usize; dim];
        loop {
            let cell: Vec<usize> =
                q.lo.iter().zip(&offset).map(|(&l, &o)| l + o).collect();
            let at = field.offset_of(&cell);
            if omega > field.values[at] {
                field.values[at] = omega;
            }
            if !advance(&mut offset, q.len) {
                break;
            }
        }
    }
    Ok(field)
}

/// Minimum of the sharp field over the cells of `region`.
pub fn sharp_infimum(
    f: &SampledFunction,
    region: &CubeRegion,
    s: f64,
    family: CubeFamily,
) -> Result<f64> {
    Ok(local_sharp_maximal(f, region, s, family)?.min())
}
