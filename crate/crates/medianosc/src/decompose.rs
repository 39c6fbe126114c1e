//! Recursive dyadic cube decomposition driven by medians and the sharp field,
//! its two-threshold refinement with a packing bound, and the generational
//! cascade that yields exponential tail decay.
//!
//! The recursion on each child cube: discard it when its sharp values all
//! exceed `beta`, collect it when its median escapes `delta`, subdivide
//! otherwise. At the single-cell floor a cell whose value still escapes
//! `delta` is collected as a degenerate cube, so that "small outside the
//! selection" holds exactly cell by cell. Postconditions are verified on
//! every run and reported, never assumed; a failed bound surfaces in the
//! report instead of being silently tolerated.
//!
//! Median stability under slight inflation of a cube is a continuum-limit
//! statement with no grid counterpart (cells cannot be inflated by an
//! arbitrarily small margin), so it is deliberately not part of the verified
//! surface here; the drift bound across nested dyadic scales is.

use crate::bmo::{bmo_phi_norm, Modulus};
use crate::error::{Error, Result};
use crate::grid::{CubeFamily, CubeRegion, DyadicCube, SampledFunction};
use crate::median::{maximal_median, WeightedSamples};
use crate::sharp::{local_sharp_maximal, SharpField};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionParams {
    pub s: f64,
    pub t: f64,
    pub delta: f64,
    pub beta: f64,
}

impl DecompositionParams {
    pub fn new(s: f64, t: f64, delta: f64, beta: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 0.5) {
            return Err(Error::InvalidParameter(format!("s = {s} must lie in (0, 1/2]")));
        }
        if !(t >= 0.5 && t <= 1.0 - s) {
            return Err(Error::InvalidParameter(format!(
                "t = {t} must lie in [1/2, 1 - s] = [0.5, {}]",
                1.0 - s
            )));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta = {delta} must be positive")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta = {beta} must be positive")));
        }
        Ok(Self { s, t, delta, beta })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelectedCube {
    pub cube: DyadicCube,
    pub median: f64,
}

/// Per-run verification of the decomposition's postconditions.
#[derive(Debug, Clone, Serialize)]
pub struct ForestReport {
    /// Total selected measure over the root measure.
    pub packing_ratio: f64,
    pub max_depth: u32,
    pub selected_count: usize,
    pub discarded_count: usize,
    pub floor_cell_count: usize,
    /// Degenerate single-cell selections, where the parent-median bound is
    /// reported but its usual justification does not apply.
    pub floor_selected_count: usize,
    /// Every selected cube keeps a cell with sharp value at most beta.
    pub condition1_ok: bool,
    /// Every selected median lies in (delta, delta + 10 * dim * beta].
    pub condition2_ok: bool,
    pub condition2_violations: usize,
    /// Every cell outside the selection and the discard set has |f| <= delta.
    pub condition3_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionForest {
    pub root: CubeRegion,
    pub params: DecompositionParams,
    pub selected: Vec<SelectedCube>,
    pub discarded: Vec<DyadicCube>,
    /// Grid cell indices that reached the single-cell floor unselected.
    pub floor_cells: Vec<usize>,
    pub report: ForestReport,
}

impl DecompositionForest {
    /// Grid cell indices covered by the selected cubes.
    pub fn selected_cells(&self, f: &SampledFunction) -> Vec<usize> {
        self.selected
            .iter()
            .flat_map(|s| f.cells_in(&s.cube.region_in(&self.root)))
            .collect()
    }

    pub fn discarded_cells(&self, f: &SampledFunction) -> Vec<usize> {
        self.discarded
            .iter()
            .flat_map(|c| f.cells_in(&c.region_in(&self.root)))
            .collect()
    }

    pub fn selected_measure(&self) -> f64 {
        self.selected
            .iter()
            .map(|s| s.cube.region_in(&self.root).measure())
            .fold(0.0, |a, b| a + b)
    }
}

struct Recursion<'a> {
    f: &'a SampledFunction,
    root: &'a CubeRegion,
    params: DecompositionParams,
    sharp: &'a SharpField,
    selected: Vec<SelectedCube>,
    discarded: Vec<DyadicCube>,
    floor_cells: Vec<usize>,
    floor_selected: usize,
    max_depth: u32,
}

impl Recursion<'_> {
    fn median_of(&self, region: &CubeRegion) -> Result<f64> {
        let samples = WeightedSamples::from_region(self.f, region);
        maximal_median(&samples, self.params.t)
    }

    fn descend(&mut self, cube: &DyadicCube) -> Result<()> {
        for child in cube.subdivide(self.root.len)? {
            self.max_depth = self.max_depth.max(child.level);
            let region = child.region_in(self.root);
            if self.sharp.all_above(&region, self.params.beta) {
                self.discarded.push(child);
                continue;
            }
            let median = self.median_of(&region)?;
            if median.abs() > self.params.delta {
                if region.len == 1 {
                    self.floor_selected += 1;
                }
                self.selected.push(SelectedCube { cube: child, median });
            } else if region.len > 1 {
                self.descend(&child)?;
            } else {
                self.floor_cells.push(self.f.flat_index(&region.lo));
            }
        }
        Ok(())
    }
}

/// Runs the median-threshold decomposition of `f` on a power-of-two region.
///
/// Requires `|m_f(t, root)| <= delta` and a sharp field computed on the same
/// region with the same `s`. Returns the selected and discarded cubes, the
/// unselected floor cells, and the verified postcondition report.
pub fn stromberg_decompose(
    f: &SampledFunction,
    root: &CubeRegion,
    params: DecompositionParams,
    sharp: &SharpField,
) -> Result<DecompositionForest> {
    if !root.len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "decomposition root must have a power-of-two side, got {}",
            root.len
        )));
    }
    if sharp.region != *root {
        return Err(Error::InvalidParameter(
            "sharp field region does not match the decomposition root".into(),
        ));
    }
    if sharp.s != params.s {
        return Err(Error::InvalidParameter(format!(
            "sharp field used s = {}, decomposition uses s = {}",
            sharp.s, params.s
        )));
    }
    let root_samples = WeightedSamples::from_region(f, root);
    let root_median = maximal_median(&root_samples, params.t)?;
    if root_median.abs() > params.delta {
        return Err(Error::HypothesisViolated(format!(
            "|m_f(t, root)| = {} exceeds delta = {}",
            root_median.abs(),
            params.delta
        )));
    }

    let mut rec = Recursion {
        f,
        root,
        params,
        sharp,
        selected: Vec::new(),
        discarded: Vec::new(),
        floor_cells: Vec::new(),
        floor_selected: 0,
        max_depth: 0,
    };
    if root.len == 1 {
        rec.floor_cells.push(f.flat_index(&root.lo));
    } else if sharp.min() > params.beta {
        // the whole region sits inside the high-sharp set; nothing to select
        rec.discarded.push(DyadicCube::root(root.dim()));
    } else {
        rec.descend(&DyadicCube::root(root.dim()))?;
    }

    let report = verify_forest(f, root, params, sharp, &rec)?;
    Ok(DecompositionForest {
        root: root.clone(),
        params,
        selected: rec.selected,
        discarded: rec.discarded,
        floor_cells: rec.floor_cells,
        report,
    })
}

fn verify_forest(
    f: &SampledFunction,
    root: &CubeRegion,
    params: DecompositionParams,
    sharp: &SharpField,
    rec: &Recursion,
) -> Result<ForestReport> {
    let dim = root.dim();
    let upper = params.delta + 10.0 * dim as f64 * params.beta;

    let condition1_ok = rec
        .selected
        .iter()
        .all(|s| sharp.min_over(&s.cube.region_in(root)) <= params.beta);

    let condition2_violations = rec
        .selected
        .iter()
        .filter(|s| !(s.median.abs() > params.delta && s.median.abs() <= upper))
        .count();

    // cells outside the selection and the discard set
    let mut covered = vec![false; f.n_cells()];
    for s in &rec.selected {
        for c in f.cells_in(&s.cube.region_in(root)) {
            covered[c] = true;
        }
    }
    for d in &rec.discarded {
        for c in f.cells_in(&d.region_in(root)) {
            covered[c] = true;
        }
    }
    let condition3_ok = f
        .cells_in(root)
        .into_iter()
        .filter(|&c| !covered[c])
        .all(|c| f.values()[c].abs() <= params.delta);

    let selected_measure = rec
        .selected
        .iter()
        .map(|s| s.cube.region_in(root).measure())
        .fold(0.0, |a, b| a + b);

    Ok(ForestReport {
        packing_ratio: selected_measure / root.measure(),
        max_depth: rec.max_depth,
        selected_count: rec.selected.len(),
        discarded_count: rec.discarded.len(),
        floor_cell_count: rec.floor_cells.len(),
        floor_selected_count: rec.floor_selected,
        condition1_ok,
        condition2_ok: condition2_violations == 0,
        condition2_violations,
        condition3_ok,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoThresholdOutcome {
    pub coarse: DecompositionForest,
    pub fine: DecompositionForest,
    pub delta1: f64,
    pub delta2: f64,
    pub beta: f64,
    pub eta: f64,
    /// Fine-generation measure over the root measure.
    pub packing: f64,
    /// Every fine cube sits inside the coarse selection (holds by
    /// construction; verified on cell masks).
    pub nesting_ok: bool,
    /// packing <= s / (2 (1 - s)).
    pub packing_within_half_chain: bool,
    /// packing <= s.
    pub packing_within_s: bool,
    /// The near-median cell sets of the root, the coarse cubes, and the fine
    /// cubes are pairwise disjoint.
    pub disjointness_ok: bool,
}

/// Default slack fraction of beta used when the caller leaves eta unset.
pub const DEFAULT_ETA_FRACTION: f64 = 0.1;

/// Runs the decomposition twice on the median-centered field with thresholds
/// `delta1 = 4 beta + 2 eta` and `delta2 = 2 delta1 + 10 dim beta`, verifying
/// generation nesting, the packing chain, and the disjointness of the
/// near-median sets.
///
/// `beta` must dominate the sharp field of the centered field on the root.
pub fn two_threshold_decompose(
    f: &SampledFunction,
    root: &CubeRegion,
    s: f64,
    t: f64,
    beta: f64,
    eta: f64,
    family: Option<CubeFamily>,
) -> Result<TwoThresholdOutcome> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!("eta = {eta} must be positive")));
    }
    let dim = root.dim();
    let family = family.unwrap_or_else(|| CubeFamily::default_for(dim, root.len));

    let samples = WeightedSamples::from_region(f, root);
    let root_median = maximal_median(&samples, t)?;
    let g = f.map(|v| v - root_median)?;

    let sharp = local_sharp_maximal(&g, root, s, family)?;
    let sharp_max = sharp.max();
    if beta < sharp_max {
        return Err(Error::BetaTooSmall { beta, sharp_max });
    }

    let delta1 = 4.0 * beta + 2.0 * eta;
    let delta2 = 2.0 * delta1 + 10.0 * dim as f64 * beta;
    let coarse = stromberg_decompose(&g, root, DecompositionParams::new(s, t, delta1, beta)?, &sharp)?;
    let fine = stromberg_decompose(&g, root, DecompositionParams::new(s, t, delta2, beta)?, &sharp)?;

    let mut in_coarse = vec![false; g.n_cells()];
    for c in coarse.selected_cells(&g) {
        in_coarse[c] = true;
    }
    let nesting_ok = fine.selected_cells(&g).iter().all(|&c| in_coarse[c]);

    let packing = fine.selected_measure() / root.measure();
    let packing_within_half_chain = packing <= s / (2.0 * (1.0 - s));
    let packing_within_s = packing <= s;

    let disjointness_ok = near_median_sets_disjoint(&g, root, t, &coarse, &fine, beta, eta)?;

    Ok(TwoThresholdOutcome {
        coarse,
        fine,
        delta1,
        delta2,
        beta,
        eta,
        packing,
        nesting_ok,
        packing_within_half_chain,
        packing_within_s,
        disjointness_ok,
    })
}

/// Checks that the sets `{ y in Q : |g - m_g(t, Q)| <= 2 beta + eta }` for the
/// root, each coarse cube, and each fine cube are pairwise disjoint.
fn near_median_sets_disjoint(
    g: &SampledFunction,
    root: &CubeRegion,
    t: f64,
    coarse: &DecompositionForest,
    fine: &DecompositionForest,
    beta: f64,
    eta: f64,
) -> Result<bool> {
    let bound = 2.0 * beta + eta;
    let mut marks = vec![0u8; g.n_cells()];
    let mark_set = |region: &CubeRegion, marks: &mut Vec<u8>| -> Result<bool> {
        let samples = WeightedSamples::from_region(g, region);
        let median = maximal_median(&samples, t)?;
        for cell in g.cells_in(region) {
            if (g.values()[cell] - median).abs() <= bound {
                marks[cell] += 1;
                if marks[cell] > 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    if !mark_set(root, &mut marks)? {
        return Ok(false);
    }
    for s in &coarse.selected {
        if !mark_set(&s.cube.region_in(root), &mut marks)? {
            return Ok(false);
        }
    }
    for s in &fine.selected {
        if !mark_set(&s.cube.region_in(root), &mut marks)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerationReport {
    pub index: u32,
    pub beta: f64,
    pub delta: f64,
    pub cube_count: usize,
    pub total_measure: f64,
    /// Deviation threshold valid off this generation.
    pub lambda: f64,
    /// Measured size of the exceedance set at that threshold.
    pub tail_measure: f64,
    /// tail_measure <= total_measure.
    pub tail_bound_ok: bool,
    /// total_measure <= s^k * root measure.
    pub geometric_bound_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CascadeReport {
    pub s: f64,
    /// Whether `s <= 2^-dim`, the bias regime in which the cascade's tail
    /// bound feeds the mean-oscillation embedding; larger biases still run
    /// and report, without that reading.
    pub small_bias: bool,
    pub t: f64,
    pub phi: String,
    pub norm: f64,
    /// Set when the oscillation norm vanishes: every cube median agrees and
    /// the field is constant cell-wise, so a single empty generation suffices.
    pub constant_path: bool,
    pub generations: Vec<GenerationReport>,
    /// (lambda_k, generation measure) pairs, the measured tail-bound curve.
    pub bound_curve: Vec<(f64, f64)>,
    pub monotone_measures: bool,
}

/// Runs the generational decomposition cascade on a normalized field: zero
/// root median (parameter `1 - s`) and oscillation norm at most one.
///
/// Generation `k` re-centers on each cube selected by generation `k - 1` and
/// decomposes with `beta = 2 phi(|Q0| / 2^(dim k))` and
/// `delta = (10 dim + 9) beta`. Reports per-generation measures, the
/// cumulative deviation thresholds, and whether the measured tail and the
/// geometric bound hold; depth is capped at the grid floor.
pub fn jn_cascade(
    f: &SampledFunction,
    s: f64,
    t: f64,
    phi: &Modulus,
    family: Option<CubeFamily>,
) -> Result<CascadeReport> {
    let root = f.full_region();
    if !root.len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "cascade needs a power-of-two grid, got {}",
            root.len
        )));
    }
    let dim = f.dim();
    let family_for = |len: usize| family.unwrap_or_else(|| CubeFamily::default_for(dim, len));

    let samples = WeightedSamples::from_region(f, &root);
    let root_median = maximal_median(&samples, 1.0 - s)?;
    let scale = f.values().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    if root_median.abs() > 1e-9 * scale {
        return Err(Error::HypothesisViolated(format!(
            "cascade input must have zero root median, got {root_median}"
        )));
    }
    let norm = bmo_phi_norm(f, &root, s, phi, family_for(root.len))?;
    if norm > 1.0 + 1e-9 {
        return Err(Error::HypothesisViolated(format!(
            "cascade input must have norm at most one, got {norm}"
        )));
    }

    let mut report = CascadeReport {
        s,
        small_bias: s <= 0.5f64.powi(dim as i32),
        t,
        phi: phi.describe(),
        norm,
        constant_path: norm == 0.0,
        generations: Vec::new(),
        bound_curve: Vec::new(),
        monotone_measures: true,
    };

    let root_measure = root.measure();
    let nd = dim as f64;
    let mut beta_sum = 0.0;
    let mut parents = vec![root.clone()];
    let max_generations = root.len.trailing_zeros() + 1;
    let mut prev_measure = f64::INFINITY;

    for k in 1..=max_generations {
        let beta = 2.0 * phi.eval(root_measure / 2f64.powf(nd * (k - 1) as f64));
        if beta <= 0.0 {
            return Err(Error::DegenerateModulus(
                "cascade modulus must be positive at positive scales".into(),
            ));
        }
        let delta = (10.0 * nd + 9.0) * beta;
        beta_sum += beta;

        let mut selected_regions = Vec::new();
        let mut total_measure = 0.0;
        for parent in &parents {
            if parent.len == 1 {
                continue;
            }
            let parent_samples = WeightedSamples::from_region(f, parent);
            let median = maximal_median(&parent_samples, t)?;
            let g = f.map(|v| v - median)?;
            let sharp = local_sharp_maximal(&g, parent, s, family_for(parent.len))?;
            let params = DecompositionParams::new(s, t, delta, beta)?;
            let forest = stromberg_decompose(&g, parent, params, &sharp)?;
            for sel in &forest.selected {
                let region = sel.cube.region_in(parent);
                total_measure += region.measure();
                selected_regions.push(region);
            }
        }

        let lambda = (20.0 * nd + 9.0) * beta_sum;
        let exceed = f.values().iter().filter(|v| v.abs() > lambda).count();
        let tail_measure = exceed as f64 * f.cell_volume();

        report.generations.push(GenerationReport {
            index: k,
            beta,
            delta,
            cube_count: selected_regions.len(),
            total_measure,
            lambda,
            tail_measure,
            tail_bound_ok: tail_measure <= total_measure + 1e-12 * root_measure,
            geometric_bound_ok: total_measure
                <= s.powi(k as i32) * root_measure + 1e-12 * root_measure,
        });
        report.bound_curve.push((lambda, total_measure));
        if total_measure > prev_measure {
            report.monotone_measures = false;
        }
        prev_measure = total_measure;

        if selected_regions.is_empty() || selected_regions.iter().all(|r| r.len == 1) {
            break;
        }
        parents = selected_regions;
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmo::normalize_for_tail;

    fn sharp_for(f: &SampledFunction, root: &CubeRegion, s: f64) -> SharpField {
        local_sharp_maximal(f, root, s, CubeFamily::All).unwrap()
    }

    #[test]
    fn constant_zero_field_selects_nothing() {
        let f = SampledFunction::new(1, vec![0.0], 1.0, 8, vec![0.0; 8]).unwrap();
        let root = f.full_region();
        let sharp = sharp_for(&f, &root, 0.25);
        let params = DecompositionParams::new(0.25, 0.5, 0.1, 1.0).unwrap();
        let forest = stromberg_decompose(&f, &root, params, &sharp).unwrap();
        assert!(forest.selected.is_empty());
        assert!(forest.discarded.is_empty());
        assert_eq!(forest.floor_cells.len(), 8);
        assert!(forest.report.condition1_ok);
        assert!(forest.report.condition2_ok);
        assert!(forest.report.condition3_ok);
    }

    #[test]
    fn asymmetric_step_collects_the_loud_half() {
        // hand-simulated on 8 cells: the root median is 0.05 (within delta),
        // the left child stays calm and unravels to floor cells, the right
        // child's median escapes delta at the first level
        let mut values = vec![0.05; 4];
        values.extend(vec![-0.15; 4]);
        let f = SampledFunction::new(1, vec![0.0], 1.0, 8, values).unwrap();
        let root = f.full_region();
        let sharp = sharp_for(&f, &root, 0.25);
        let params = DecompositionParams::new(0.25, 0.5, 0.1, 10.0).unwrap();
        let forest = stromberg_decompose(&f, &root, params, &sharp).unwrap();
        assert_eq!(forest.selected.len(), 1);
        assert_eq!(forest.selected[0].cube, DyadicCube { level: 1, index: vec![1] });
        assert_eq!(forest.selected[0].median, -0.15);
        assert!(forest.discarded.is_empty());
        assert_eq!(forest.floor_cells.len(), 4);
        assert!(forest.report.condition2_ok);
        assert!(forest.report.condition3_ok);
    }

    #[test]
    fn spike_is_collected_where_its_median_escapes() {
        // under the maximal-median convention the two-cell cube sharing the
        // spike already has median 1, so collection happens one level above
        // the floor; the bound delta + 10 n beta holds comfortably
        let mut values = vec![0.0; 8];
        values[5] = 1.0;
        let f = SampledFunction::new(1, vec![0.0], 1.0, 8, values).unwrap();
        let root = f.full_region();
        let sharp = sharp_for(&f, &root, 0.25);
        let params = DecompositionParams::new(0.25, 0.5, 0.5, 1.0).unwrap();
        let forest = stromberg_decompose(&f, &root, params, &sharp).unwrap();
        assert_eq!(forest.selected.len(), 1);
        assert_eq!(forest.selected[0].cube, DyadicCube { level: 2, index: vec![2] });
        assert_eq!(forest.selected[0].median, 1.0);
        assert!(forest.report.condition1_ok);
        assert!(forest.report.condition2_ok);
        assert!(forest.report.condition3_ok);

        // a negative spike reaches the floor: the two-cell maximal median is
        // the larger value 0, so only the single cell escapes delta
        let mut values = vec![0.0; 8];
        values[5] = -1.0;
        let f = SampledFunction::new(1, vec![0.0], 1.0, 8, values).unwrap();
        let sharp = sharp_for(&f, &root, 0.25);
        let forest = stromberg_decompose(&f, &root, params, &sharp).unwrap();
        assert_eq!(forest.selected.len(), 1);
        assert_eq!(forest.selected[0].cube, DyadicCube { level: 3, index: vec![5] });
        assert_eq!(forest.selected[0].median, -1.0);
        assert_eq!(forest.report.floor_selected_count, 1);
        assert!(forest.report.condition2_ok);
        assert!(forest.report.condition3_ok);
    }

    #[test]
    fn hypothesis_violation_is_reported() {
        let f = SampledFunction::new(1, vec![0.0], 1.0, 4, vec![5.0; 4]).unwrap();
        let root = f.full_region();
        let sharp = sharp_for(&f, &root, 0.25);
        let params = DecompositionParams::new(0.25, 0.5, 0.1, 1.0).unwrap();
        assert!(matches!(
            stromberg_decompose(&f, &root, params, &sharp),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn param_validation() {
        assert!(DecompositionParams::new(0.6, 0.5, 1.0, 1.0).is_err());
        assert!(DecompositionParams::new(0.25, 0.8, 1.0, 1.0).is_err()); // t > 1 - s
        assert!(DecompositionParams::new(0.25, 0.4, 1.0, 1.0).is_err());
        assert!(DecompositionParams::new(0.25, 0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn two_threshold_on_constant_field() {
        let f = SampledFunction::new(1, vec![0.0], 1.0, 16, vec![3.0; 16]).unwrap();
        let root = f.full_region();
        let out = two_threshold_decompose(&f, &root, 0.25, 0.5, 1.0, 0.1, None).unwrap();
        assert!(out.coarse.selected.is_empty());
        assert!(out.fine.selected.is_empty());
        assert_eq!(out.packing, 0.0);
        assert!(out.nesting_ok);
        assert!(out.packing_within_s);
        assert!(out.disjointness_ok);
    }

    #[test]
    fn two_threshold_beta_check() {
        let f = SampledFunction::from_fn(1, vec![0.0], 1.0, 16, |x| {
            if x[0] >= 0.5 { 1.0 } else { 0.0 }
        })
        .unwrap();
        let root = f.full_region();
        let err = two_threshold_decompose(&f, &root, 0.25, 0.5, 0.1, 0.01, None);
        assert!(matches!(err, Err(Error::BetaTooSmall { .. })));
    }

    #[test]
    fn two_threshold_step_packs_within_s() {
        let f = SampledFunction::from_fn(1, vec![0.0], 1.0, 64, |x| {
            if x[0] >= 0.5 { 1.0 } else { 0.0 }
        })
        .unwrap();
        let root = f.full_region();
        let s = 0.25;
        let sharp_max = local_sharp_maximal(&f, &root, s, CubeFamily::All)
            .unwrap()
            .max();
        let out =
            two_threshold_decompose(&f, &root, s, 0.5, sharp_max, sharp_max / 10.0, None)
                .unwrap();
        assert!(out.packing <= s, "packing {}", out.packing);
        assert!(out.nesting_ok);
        assert!(out.packing_within_half_chain);
        assert!(out.disjointness_ok);
    }

    #[test]
    fn two_threshold_nesting_on_random_levels() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for trial in 0..10 {
            let n = 64;
            let levels: Vec<f64> = (0..4).map(|_| rng.gen_range(-8i32..=8) as f64 / 4.0).collect();
            let breaks: Vec<usize> = {
                let mut b: Vec<usize> = (0..3).map(|_| rng.gen_range(1..n)).collect();
                b.sort_unstable();
                b
            };
            let values: Vec<f64> = (0..n)
                .map(|i| {
                    let seg = breaks.iter().filter(|&&b| b <= i).count();
                    levels[seg]
                })
                .collect();
            let f = SampledFunction::new(1, vec![0.0], 1.0, n, values).unwrap();
            let root = f.full_region();
            let s = 0.25;
            let sharp_max = local_sharp_maximal(&f, &root, s, CubeFamily::All)
                .unwrap()
                .max()
                .max(1e-6);
            let out = two_threshold_decompose(
                &f,
                &root,
                s,
                0.5,
                sharp_max,
                sharp_max * DEFAULT_ETA_FRACTION,
                None,
            )
            .unwrap();
            assert!(out.nesting_ok, "trial {trial}");
            assert!(out.disjointness_ok, "trial {trial}");
        }
    }

    #[test]
    fn cascade_on_constant_field() {
        let f = SampledFunction::new(1, vec![0.0], 1.0, 16, vec![7.0; 16]).unwrap();
        let phi = Modulus::constant(1.0).unwrap();
        let (g, norm) = normalize_for_tail(&f, 0.25, &phi, CubeFamily::All).unwrap();
        assert_eq!(norm, 0.0);
        let report = jn_cascade(&g, 0.25, 0.5, &phi, None).unwrap();
        assert!(report.constant_path);
        assert_eq!(report.generations.len(), 1);
        assert_eq!(report.generations[0].cube_count, 0);
        assert_eq!(report.generations[0].total_measure, 0.0);
    }

    #[test]
    fn cascade_requires_normalization() {
        let f = SampledFunction::from_fn(1, vec![0.0], 1.0, 16, |x| 10.0 + x[0]).unwrap();
        let phi = Modulus::constant(1.0).unwrap();
        assert!(matches!(
            jn_cascade(&f, 0.25, 0.5, &phi, None),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn cascade_on_log_singularity_decays() {
        let f = SampledFunction::from_fn(1, vec![0.0], 1.0, 256, |x| {
            (1.0 / (x[0] - 0.5).abs()).ln()
        })
        .unwrap();
        let phi = Modulus::constant(1.0).unwrap();
        let (g, norm) = normalize_for_tail(&f, 0.25, &phi, CubeFamily::DyadicShifted).unwrap();
        assert!(norm > 0.0);
        let report = jn_cascade(&g, 0.25, 0.5, &phi, None).unwrap();
        assert!(!report.constant_path);
        assert!(report.monotone_measures);
        assert!(report
            .generations
            .iter()
            .all(|g| g.tail_bound_ok), "tail bounds: {:?}", report.generations);
    }
}
