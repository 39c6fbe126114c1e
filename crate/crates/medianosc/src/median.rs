//! Exact biased maximal medians, nonincreasing rearrangements, and
//! best-constant median oscillation over a cube.
//!
//! Everything here operates on the cell values of a function restricted to a
//! cube, all cells carrying equal volume. Because the function is constant on
//! cells, each quantity is an order statistic and the identities relating them
//! hold exactly in counting arithmetic.
//!
//! Conventions pinned here and relied on everywhere else:
//!
//! * the maximal median with parameter `s` over `M` cells is the ascending
//!   order statistic at 1-based index `floor(s*M) + 1`; this is the largest
//!   value `m` with `#{v < m} <= s*M`, including the case where `s*M` is an
//!   integer;
//! * the best-constant oscillation is the minimal half-width of a window of
//!   `M - floor(s*M)` consecutive sorted values (ties: leftmost window). Away
//!   from integer `s*M` this equals the infimum over constants `c` of the
//!   maximal median of `|f - c|` with parameter `1 - s`; on the integer
//!   boundary it is the infimum over all valid (not necessarily maximal)
//!   medians, which is the smaller of the two readings.

use crate::error::{Error, Result};
use crate::grid::{dyadic_tower, CubeRegion, SampledFunction};
use serde::Serialize;

/// Threshold below which selection is done by a full sort.
const SORT_CUTOFF: usize = 4096;

/// Cell values of a function restricted to a cube, with their common volume.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSamples {
    values: Vec<f64>,
    cell_volume: f64,
}

impl WeightedSamples {
    pub fn new(values: Vec<f64>, cell_volume: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidField("samples must be nonempty".into()));
        }
        if !(cell_volume > 0.0 && cell_volume.is_finite()) {
            return Err(Error::InvalidField(format!(
                "cell volume {cell_volume} must be finite and positive"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidField("non-finite sample value".into()));
        }
        Ok(Self { values, cell_volume })
    }

    /// The cells of `f` inside `region`.
    pub fn from_region(f: &SampledFunction, region: &CubeRegion) -> Self {
        Self {
            values: f.values_in(region),
            cell_volume: f.cell_volume(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn total_measure(&self) -> f64 {
        self.values.len() as f64 * self.cell_volume
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect(), self.cell_volume)
    }
}

/// The best-constant oscillation over a cube with its achieving constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationValue {
    /// Minimal window half-width.
    pub omega: f64,
    /// Midpoint of the minimizing window.
    pub best_c: f64,
    /// Sorted-rank span (inclusive) of the minimizing window.
    pub window: (usize, usize),
}

fn check_open_unit(s: f64, what: &str) -> Result<()> {
    if !(s > 0.0 && s < 1.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what} = {s} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_half_range(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 0.5 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("s = {s} must lie in (0, 1/2]")));
    }
    Ok(())
}

/// Largest integer k with k <= s*M, computed in the shared f64 convention.
fn lower_count(s: f64, m: usize) -> usize {
    (s * m as f64).floor() as usize
}

/// k-th smallest (0-based) of the values, by sort or by selection.
fn kth_ascending(mut values: Vec<f64>, k: usize) -> f64 {
    debug_assert!(k < values.len());
    if values.len() <= SORT_CUTOFF {
        values.sort_unstable_by(f64::total_cmp);
        values[k]
    } else {
        let (_, v, _) = values.select_nth_unstable_by(k, f64::total_cmp);
        *v
    }
}

#[cfg(test)]
pub(crate) fn kth_by_sort(mut values: Vec<f64>, k: usize) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    values[k]
}

#[cfg(test)]
pub(crate) fn kth_by_selection(mut values: Vec<f64>, k: usize) -> f64 {
    let (_, v, _) = values.select_nth_unstable_by(k, f64::total_cmp);
    *v
}

/// Maximal median with parameter `s`: the largest `m` such that the measure
/// of `{f < m}` stays within `s` times the cube measure.
///
/// ```
/// use medianosc::{maximal_median, WeightedSamples};
///
/// let samples = WeightedSamples::new(vec![1.0, 2.0, 3.0, 4.0, 5.0], 0.2).unwrap();
/// assert_eq!(maximal_median(&samples, 0.5).unwrap(), 3.0);
/// // a biased split: at most 20% of the mass may sit strictly below
/// assert_eq!(maximal_median(&samples, 0.2).unwrap(), 2.0);
/// ```
pub fn maximal_median(samples: &WeightedSamples, s: f64) -> Result<f64> {
    check_open_unit(s, "s")?;
    let k = lower_count(s, samples.count());
    Ok(kth_ascending(samples.values.clone(), k))
}

/// Counts of cells below/above and at-or-beyond the median, the four
/// quantities defining a median value. Used for audit output.
#[derive(Debug, Clone, Serialize)]
pub struct MedianCounts {
    pub below: usize,
    pub above: usize,
    pub at_or_below: usize,
    pub at_or_above: usize,
}

pub fn median_counts(samples: &WeightedSamples, median: f64) -> MedianCounts {
    let below = samples.values.iter().filter(|&&v| v < median).count();
    let above = samples.values.iter().filter(|&&v| v > median).count();
    MedianCounts {
        below,
        above,
        at_or_below: samples.count() - above,
        at_or_above: samples.count() - below,
    }
}

/// Value of the nonincreasing rearrangement of `|f|` at level `lambda`:
/// the least `alpha >= 0` with `|{ |f| > alpha }| <= lambda`.
pub fn rearrangement_value(samples: &WeightedSamples, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} must be positive"
        )));
    }
    let m = samples.count();
    // number of cells allowed to exceed alpha
    let allowed = (lambda / samples.cell_volume).floor() as usize;
    if allowed >= m {
        return Ok(0.0);
    }
    // (allowed+1)-th largest |v| = ascending rank m-1-allowed
    let abs: Vec<f64> = samples.values.iter().map(|v| v.abs()).collect();
    Ok(kth_ascending(abs, m - 1 - allowed))
}

/// Evaluates both sides of the median/rearrangement identity:
/// the maximal median of `|f|` at `1 - s`, and the rearrangement at `s|Q|`.
///
/// The two agree whenever `s * M` is not an integer; on that boundary the
/// rearrangement side can sit one order statistic lower.
pub fn median_rearrangement_identity(
    samples: &WeightedSamples,
    s: f64,
) -> Result<(f64, f64)> {
    check_open_unit(s, "s")?;
    let abs = samples.map(f64::abs)?;
    let median_side = maximal_median(&abs, 1.0 - s)?;
    let rearr_side = rearrangement_value(samples, s * samples.total_measure())?;
    Ok((median_side, rearr_side))
}

/// True when `s * count` lands exactly on an integer, the case where the
/// strict and non-strict counting readings part ways.
pub fn on_count_boundary(s: f64, count: usize) -> bool {
    (s * count as f64).fract() == 0.0
}

/// Best-constant oscillation: minimal half-width of a window of
/// `M - floor(s*M)` consecutive sorted values.
///
/// ```
/// use medianosc::{best_constant_oscillation, WeightedSamples};
///
/// // one outlier among zeros costs nothing once a quarter may be ignored
/// let samples = WeightedSamples::new(vec![0.0, 0.0, 0.0, 10.0], 0.25).unwrap();
/// let osc = best_constant_oscillation(&samples, 0.25).unwrap();
/// assert_eq!((osc.omega, osc.best_c), (0.0, 0.0));
/// ```
pub fn best_constant_oscillation(
    samples: &WeightedSamples,
    s: f64,
) -> Result<OscillationValue> {
    check_half_range(s)?;
    let m = samples.count();
    let window = m - lower_count(s, m);
    debug_assert!(window >= 1);
    let mut sorted = samples.values.clone();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut best = (0usize, f64::INFINITY);
    for i in 0..=(m - window) {
        let half = (sorted[i + window - 1] - sorted[i]) / 2.0;
        if half < best.1 {
            best = (i, half);
        }
    }
    let (i, omega) = best;
    Ok(OscillationValue {
        omega,
        best_c: (sorted[i] + sorted[i + window - 1]) / 2.0,
        window: (i, i + window - 1),
    })
}

/// Median oscillation about the cube's own median:
/// the `1 - s` maximal median of `|f - m_f(1-s, Q)|`.
pub fn oscillation_about_median(samples: &WeightedSamples, s: f64) -> Result<f64> {
    check_half_range(s)?;
    let med = maximal_median(samples, 1.0 - s)?;
    let deviations = samples.map(|v| (v - med).abs())?;
    maximal_median(&deviations, 1.0 - s)
}

/// One step of a shrinking-cube error profile.
#[derive(Debug, Clone, Serialize)]
pub struct ProfilePoint {
    pub level: u32,
    pub diameter: f64,
    pub error: f64,
}

/// Error profile of the median along the dyadic tower shrinking onto a cell:
/// `|m_f(s, Q) - f(x)|` for the nested dyadic cubes containing `x`.
///
/// Requires a power-of-two grid. The last entry is the single cell, where the
/// error is exactly zero.
pub fn median_convergence_profile(
    f: &SampledFunction,
    cell: &[usize],
    s: f64,
) -> Result<Vec<ProfilePoint>> {
    check_open_unit(s, "s")?;
    if cell.len() != f.dim() {
        return Err(Error::InvalidParameter(format!(
            "cell index has {} coordinates for dimension {}",
            cell.len(),
            f.dim()
        )));
    }
    if cell.iter().any(|&c| c >= f.cells_per_side()) {
        return Err(Error::InvalidParameter("cell index out of range".into()));
    }
    let root = f.full_region();
    let target = f.value_at(cell);
    let tower = dyadic_tower(f.cells_per_side(), cell)?;
    let mut profile = Vec::with_capacity(tower.len());
    for cube in tower {
        let region = cube.region_in(&root);
        let samples = WeightedSamples::from_region(f, &region);
        let median = maximal_median(&samples, s)?;
        profile.push(ProfilePoint {
            level: cube.level,
            diameter: region.diameter(),
            error: (median - target).abs(),
        });
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(values: &[f64]) -> WeightedSamples {
        WeightedSamples::new(values.to_vec(), 1.0 / values.len() as f64).unwrap()
    }

    /// Independent check of the maximal median: scan every candidate value and
    /// take the largest one whose strict-below count stays within s*M.
    pub(crate) fn brute_force_median(values: &[f64], s: f64) -> f64 {
        let m = values.len() as f64;
        let mut best = f64::NEG_INFINITY;
        for &cand in values {
            let below = values.iter().filter(|&&v| v < cand).count() as f64;
            if below <= s * m && cand > best {
                best = cand;
            }
        }
        best
    }

    /// Independent check of the rearrangement: scan alpha over breakpoints.
    fn brute_force_rearrangement(values: &[f64], cell_volume: f64, lambda: f64) -> f64 {
        let mut alphas: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        alphas.push(0.0);
        alphas.sort_unstable_by(f64::total_cmp);
        for &alpha in &alphas {
            let exceed =
                values.iter().filter(|&&v| v.abs() > alpha).count() as f64 * cell_volume;
            if exceed <= lambda {
                return alpha;
            }
        }
        unreachable!("the largest |value| always satisfies the constraint");
    }

    #[test]
    fn two_level_step_has_asymmetric_medians() {
        // -2 on the left half, +1 on the right half of [0, 1)
        let f = samples(&[-2.0, -2.0, 1.0, 1.0]);
        for s in [0.1, 0.25, 0.4] {
            assert_eq!(maximal_median(&f, s).unwrap(), -2.0);
            let abs = f.map(f64::abs).unwrap();
            assert_eq!(maximal_median(&abs, s).unwrap(), 1.0);
        }
    }

    #[test]
    fn constant_median_is_the_constant() {
        let f = samples(&[7.0; 5]);
        for s in [0.1, 0.5, 0.9] {
            assert_eq!(maximal_median(&f, s).unwrap(), 7.0);
        }
    }

    #[test]
    fn median_order_statistic_examples() {
        // frozen from the brute-force threshold scan
        let f = samples(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(maximal_median(&f, 0.5).unwrap(), 3.0);
        assert_eq!(brute_force_median(f.values(), 0.5), 3.0);

        // boundary case: s*M integral
        let g = samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(maximal_median(&g, 0.5).unwrap(), 3.0);
        assert_eq!(brute_force_median(g.values(), 0.5), 3.0);
    }

    #[test]
    fn median_rejects_bad_parameter() {
        let f = samples(&[1.0]);
        assert!(maximal_median(&f, 0.0).is_err());
        assert!(maximal_median(&f, 1.0).is_err());
        assert!(rearrangement_value(&f, 0.0).is_err());
        assert!(best_constant_oscillation(&f, 0.6).is_err());
    }

    #[test]
    fn rearrangement_examples() {
        let f = WeightedSamples::new(vec![3.0, 1.0, 2.0], 1.0 / 3.0).unwrap();
        assert_eq!(rearrangement_value(&f, 1.0 / 3.0).unwrap(), 2.0);
        assert_eq!(brute_force_rearrangement(f.values(), 1.0 / 3.0, 1.0 / 3.0), 2.0);

        // lambda at least the total measure leaves no constraint
        assert_eq!(rearrangement_value(&f, 1.0).unwrap(), 0.0);
        assert_eq!(rearrangement_value(&f, 2.0).unwrap(), 0.0);

        let c = samples(&[5.0; 4]);
        assert_eq!(rearrangement_value(&c, 0.5).unwrap(), 5.0);
    }

    #[test]
    fn identity_examples() {
        let f = samples(&[1.0, -2.0, 3.0, -4.0]);
        // s*M = 1.2, off the boundary
        let (a, b) = median_rearrangement_identity(&f, 0.3).unwrap();
        assert_eq!(a, 3.0);
        assert_eq!(a, b);

        let c = samples(&[6.0; 3]);
        let (a, b) = median_rearrangement_identity(&c, 0.4).unwrap();
        assert_eq!((a, b), (6.0, 6.0));

        let z = samples(&[0.0, 0.0, 0.0, 9.0]);
        let (a, b) = median_rearrangement_identity(&z, 0.3).unwrap();
        assert_eq!((a, b), (0.0, 0.0));
    }

    #[test]
    fn window_rule_examples() {
        let f = samples(&[0.0, 0.0, 0.0, 10.0]);
        let osc = best_constant_oscillation(&f, 0.5).unwrap();
        assert_eq!(osc.omega, 0.0);
        assert_eq!(osc.best_c, 0.0);
        assert_eq!(osc.window, (0, 1));

        let c = samples(&[4.0; 6]);
        let osc = best_constant_oscillation(&c, 0.25).unwrap();
        assert_eq!(osc.omega, 0.0);
        assert_eq!(osc.best_c, 4.0);

        let g = samples(&[0.0, 1.0, 2.0, 3.0]);
        let osc = best_constant_oscillation(&g, 0.5).unwrap();
        assert_eq!(osc.omega, 0.5);
        assert_eq!(osc.best_c, 0.5);
        assert_eq!(osc.window, (0, 1));
    }

    #[test]
    fn oscillation_about_median_examples() {
        let c = samples(&[4.0; 6]);
        assert_eq!(oscillation_about_median(&c, 0.25).unwrap(), 0.0);

        let f = samples(&[0.0, 0.0, 0.0, 10.0]);
        assert_eq!(oscillation_about_median(&f, 0.5).unwrap(), 0.0);

        let g = samples(&[0.0, 1.0, 2.0, 3.0]);
        let about = oscillation_about_median(&g, 0.5).unwrap();
        assert!((0.5..=1.0).contains(&about), "got {about}");
    }

    #[test]
    fn sort_and_selection_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let values: Vec<f64> = (0..5000).map(|_| rng.gen_range(-8i32..8) as f64 / 4.0).collect();
        for k in [0, 1, 2499, 4998, 4999] {
            assert_eq!(
                kth_by_sort(values.clone(), k).to_bits(),
                kth_by_selection(values.clone(), k).to_bits()
            );
        }
        // the public path beyond the sort cutoff takes the selection branch
        let ws = WeightedSamples::new(values.clone(), 1.0 / 5000.0).unwrap();
        let med = maximal_median(&ws, 0.37).unwrap();
        assert_eq!(med, kth_by_sort(values, lower_count(0.37, 5000)));
    }

    #[test]
    fn convergence_profile_linear_field() {
        let f = SampledFunction::from_fn(1, vec![0.0], 1.0, 1024, |x| x[0]).unwrap();
        let profile = median_convergence_profile(&f, &[512], 0.5).unwrap();
        for p in &profile {
            assert!(p.error <= p.diameter + 1e-15, "level {}: {} > {}", p.level, p.error, p.diameter);
        }
        assert_eq!(profile.last().unwrap().error, 0.0);
    }

    #[test]
    fn convergence_profile_step_away_from_jump() {
        let f = SampledFunction::from_fn(1, vec![0.0], 1.0, 64, |x| {
            if x[0] >= 0.5 { 1.0 } else { 0.0 }
        })
        .unwrap();
        // a cell strictly inside [0, 1/2)
        let profile = median_convergence_profile(&f, &[10], 0.5).unwrap();
        // once the cube no longer meets the jump the error vanishes
        let tail: Vec<&ProfilePoint> =
            profile.iter().filter(|p| p.level >= 2).collect();
        assert!(tail.iter().all(|p| p.error == 0.0));
        assert_eq!(profile.last().unwrap().error, 0.0);
    }

    #[test]
    fn counts_satisfy_the_defining_inequalities() {
        let f = samples(&[3.0, -1.0, 4.0, 1.0, -5.0, 9.0, 2.0]);
        for s in [0.2, 0.5, 0.75] {
            let m = f.count() as f64;
            let med = maximal_median(&f, s).unwrap();
            let c = median_counts(&f, med);
            assert!(c.below as f64 <= s * m);
            assert!(c.above as f64 <= (1.0 - s) * m);
            assert!(c.at_or_below as f64 >= s * m);
            assert!(c.at_or_above as f64 >= (1.0 - s) * m);
        }
    }
}
