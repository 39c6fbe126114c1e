//! Oscillation moduli over shrinking cube scales, norms against a growth
//! modulus, the integral transform whose inverse shapes exponential tail
//! bounds, and direct tail measurement with curve fitting.
//!
//! The tail constants are always fitted from measured data, never assumed:
//! the reference value reported alongside them comes from a proof-internal
//! normalization that discrete data does not reproduce exactly.

use crate::error::{Error, Result};
use crate::grid::{enumerate_cubes, CubeFamily, CubeRegion, SampledFunction};
use crate::median::{best_constant_oscillation, maximal_median, WeightedSamples};
use rayon::prelude::*;
use serde::Serialize;

/// A continuous nondecreasing growth modulus, vanishing at zero except for
/// the constant kind (which models the plain bounded-oscillation case).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Modulus {
    Constant(f64),
    /// `scale * u^exponent` with a positive exponent.
    Power { exponent: f64, scale: f64 },
    /// `scale / (1 + max(0, ln(1/u)))`.
    Log { scale: f64 },
    /// Piecewise-linear interpolation through sorted knots, linear from the
    /// origin below the first knot, constant beyond the last.
    Table(Vec<(f64, f64)>),
}

impl Modulus {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("constant modulus {c} must be positive")));
        }
        Ok(Modulus::Constant(c))
    }

    pub fn power(exponent: f64, scale: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "power modulus exponent {exponent} must be positive"
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "power modulus scale {scale} must be positive"
            )));
        }
        Ok(Modulus::Power { exponent, scale })
    }

    pub fn log(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "log modulus scale {scale} must be positive"
            )));
        }
        Ok(Modulus::Log { scale })
    }

    pub fn table(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidParameter("table modulus needs knots".into()));
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidParameter("table knots must be strictly increasing in u".into()));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidParameter("table modulus must be nondecreasing".into()));
            }
        }
        if knots.iter().any(|&(u, p)| u <= 0.0 || p < 0.0 || !u.is_finite() || !p.is_finite()) {
            return Err(Error::InvalidParameter("table knots must be finite, u > 0, phi >= 0".into()));
        }
        Ok(Modulus::Table(knots))
    }

    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            Modulus::Constant(c) => c,
            Modulus::Power { exponent, scale } => {
                if u <= 0.0 { 0.0 } else { scale * u.powf(exponent) }
            }
            Modulus::Log { scale } => {
                if u <= 0.0 {
                    0.0
                } else {
                    scale / (1.0 + (1.0 / u).ln().max(0.0))
                }
            }
            Modulus::Table(ref knots) => {
                if u <= 0.0 {
                    return 0.0;
                }
                let (u1, p1) = knots[0];
                if u <= u1 {
                    return p1 * u / u1;
                }
                for w in knots.windows(2) {
                    let (ua, pa) = w[0];
                    let (ub, pb) = w[1];
                    if u <= ub {
                        return pa + (pb - pa) * (u - ua) / (ub - ua);
                    }
                }
                knots.last().unwrap().1
            }
        }
    }

    /// Largest scale at which the modulus is still zero; 0 for positive kinds.
    fn zero_reach(&self) -> f64 {
        match self {
            Modulus::Table(knots) => knots
                .iter()
                .take_while(|&&(_, p)| p == 0.0)
                .last()
                .map(|&(u, _)| u)
                .unwrap_or(0.0),
            _ => 0.0,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Modulus::Constant(c) => format!("constant({c})"),
            Modulus::Power { exponent, scale } => format!("power(exponent={exponent}, scale={scale})"),
            Modulus::Log { scale } => format!("log(scale={scale})"),
            Modulus::Table(knots) => format!("table({} knots)", knots.len()),
        }
    }
}

fn check_half_range(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 0.5 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("s = {s} must lie in (0, 1/2]")));
    }
    Ok(())
}

/// Per-cube measure and best-constant oscillation over a family, sorted by
/// measure. Shared by the modulus, norm, and embedding scans.
fn cube_oscillations(
    f: &SampledFunction,
    region: &CubeRegion,
    s: f64,
    family: CubeFamily,
) -> Result<Vec<(f64, f64)>> {
    let cubes = enumerate_cubes(region, family, None)?;
    let mut pairs: Vec<(f64, f64)> = cubes
        .par_iter()
        .map(|q| {
            let samples = WeightedSamples::from_region(f, q);
            best_constant_oscillation(&samples, s).map(|o| (q.measure(), o.omega))
        })
        .collect::<Result<_>>()?;
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs)
}

#[derive(Debug, Clone, Serialize)]
pub struct VmoPoint {
    pub u: f64,
    pub phi_s: f64,
}

/// The vanishing-oscillation modulus: for each scale `u`, the largest
/// best-constant oscillation among family cubes of measure at most `u`.
/// Nondecreasing in `u`; zero at the single-cell scale.
pub fn vmo_modulus(
    f: &SampledFunction,
    region: &CubeRegion,
    s: f64,
    u_grid: &[f64],
    family: CubeFamily,
) -> Result<Vec<VmoPoint>> {
    check_half_range(s)?;
    if u_grid.is_empty() || u_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("u grid must be nonempty and increasing".into()));
    }
    let pairs = cube_oscillations(f, region, s, family)?;
    // prefix maxima over cubes ordered by measure
    let mut prefix = Vec::with_capacity(pairs.len());
    let mut running = 0.0f64;
    for &(measure, omega) in &pairs {
        running = running.max(omega);
        prefix.push((measure, running));
    }
    Ok(u_grid
        .iter()
        .map(|&u| {
            let idx = prefix.partition_point(|&(m, _)| m <= u);
            let phi_s = if idx == 0 { 0.0 } else { prefix[idx - 1].1 };
            VmoPoint { u, phi_s }
        })
        .collect())
}

/// The oscillation norm against a modulus: the supremum over family cubes of
/// the best-constant oscillation divided by the modulus of the cube measure.
pub fn bmo_phi_norm(
    f: &SampledFunction,
    region: &CubeRegion,
    s: f64,
    phi: &Modulus,
    family: CubeFamily,
) -> Result<f64> {
    check_half_range(s)?;
    let pairs = cube_oscillations(f, region, s, family)?;
    let mut sup = 0.0f64;
    for (measure, omega) in pairs {
        let denom = phi.eval(measure);
        if denom <= 0.0 {
            if omega > 0.0 {
                return Err(Error::DegenerateModulus(format!(
                    "phi({measure}) = 0 under a positive oscillation"
                )));
            }
            continue;
        }
        sup = sup.max(omega / denom);
    }
    Ok(sup)
}

/// Upper integration limit of the transform: 2^dim times the root measure.
fn upper_limit(q0_measure: f64, dim: usize) -> f64 {
    (1u64 << dim) as f64 * q0_measure
}

/// Adaptive Simpson quadrature on `g` over `[a, b]` to a relative tolerance.
fn adaptive_simpson(g: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson(g: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = g(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        g: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(g, a, fa, m, fm);
        let (right, rm, frm) = simpson(g, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(g, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + recurse(g, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
    }
    let fa = g(a);
    let fb = g(b);
    let (whole, m, fm) = simpson(g, a, fa, b, fb);
    let scale = whole.abs().max(1e-300);
    recurse(g, a, fa, b, fb, whole, m, fm, rel_tol * scale, 48)
}

/// The integral transform: the integral of `phi(v)/v` from `u` up to
/// `2^dim` times the root measure.
///
/// Constant and power kinds evaluate in closed form; log and table kinds use
/// adaptive quadrature at relative error 1e-8 (after substituting `v = e^t`,
/// which removes the `1/v` weight). Nonincreasing in `u`, zero at the upper
/// limit.
///
/// ```
/// use medianosc::bmo::{psi_integral, Modulus};
///
/// let phi = Modulus::constant(1.0).unwrap();
/// // unit cube in 1D: the transform is ln(2/u)
/// let y = psi_integral(&phi, 1.0, 1, 0.5).unwrap();
/// assert!((y - 4.0f64.ln()).abs() < 1e-14);
/// ```
pub fn psi_integral(phi: &Modulus, q0_measure: f64, dim: usize, u: f64) -> Result<f64> {
    if !(q0_measure > 0.0 && q0_measure.is_finite()) {
        return Err(Error::InvalidParameter(format!("root measure {q0_measure} must be positive")));
    }
    let upper = upper_limit(q0_measure, dim);
    if !(u > 0.0 && u <= upper) {
        return Err(Error::DomainError(format!(
            "u = {u} outside (0, {upper}]"
        )));
    }
    Ok(match *phi {
        Modulus::Constant(c) => c * (upper / u).ln(),
        Modulus::Power { exponent, scale } => {
            scale / exponent * (upper.powf(exponent) - u.powf(exponent))
        }
        Modulus::Log { .. } | Modulus::Table(_) => {
            if u == upper {
                0.0
            } else {
                let g = |t: f64| phi.eval(t.exp());
                adaptive_simpson(&g, u.ln(), upper.ln(), 1e-8)
            }
        }
    })
}

/// Limit of the transform as the lower end goes to zero, when finite.
fn psi_zero_limit(phi: &Modulus, q0_measure: f64, dim: usize) -> Result<Option<f64>> {
    let upper = upper_limit(q0_measure, dim);
    Ok(match *phi {
        Modulus::Constant(_) | Modulus::Log { .. } => None,
        Modulus::Power { exponent, scale } => Some(scale / exponent * upper.powf(exponent)),
        Modulus::Table(ref knots) => {
            // below the first knot the modulus is linear from the origin, so
            // the integral of phi(v)/v down to zero adds exactly phi at the cut
            let cut = knots[0].0.min(upper);
            Some(psi_integral(phi, q0_measure, dim, cut)? + phi.eval(cut))
        }
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PsiInverse {
    pub u: f64,
    /// Set when the requested value exceeds the finite zero-limit of the
    /// transform and the result was clamped to the origin.
    pub clamped: bool,
}

/// Inverts the transform by monotone bisection to relative tolerance 1e-10.
pub fn psi_inverse(phi: &Modulus, q0_measure: f64, dim: usize, y: f64) -> Result<PsiInverse> {
    if !(y >= 0.0 && y.is_finite()) {
        return Err(Error::InvalidParameter(format!("y = {y} must be nonnegative")));
    }
    let upper = upper_limit(q0_measure, dim);
    if y == 0.0 {
        return Ok(PsiInverse { u: upper, clamped: false });
    }
    let zero_reach = phi.zero_reach();
    if zero_reach > 0.0 {
        let flat_height = psi_integral(phi, q0_measure, dim, zero_reach.min(upper))?;
        if y >= flat_height {
            return Err(Error::NonInvertible(format!(
                "modulus vanishes up to {zero_reach}; values at or above {flat_height} have no unique preimage"
            )));
        }
    }
    if let Some(limit) = psi_zero_limit(phi, q0_measure, dim)? {
        if y > limit {
            return Ok(PsiInverse { u: 0.0, clamped: true });
        }
    }
    // find a lower bracket with psi(lo) >= y
    let mut lo = upper * 1e-6;
    let mut guard = 0;
    while psi_integral(phi, q0_measure, dim, lo)? < y {
        lo *= 1e-6;
        guard += 1;
        if guard > 50 || lo < f64::MIN_POSITIVE {
            return Ok(PsiInverse { u: 0.0, clamped: true });
        }
    }
    let mut hi = upper;
    while (hi - lo) > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if psi_integral(phi, q0_measure, dim, mid)? >= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(PsiInverse { u: 0.5 * (lo + hi), clamped: false })
}

/// Measured deviation-set sizes over a threshold grid.
#[derive(Debug, Clone, Serialize)]
pub struct TailCurve {
    pub lambdas: Vec<f64>,
    /// Measure of the set where the deviation from the cube median exceeds
    /// each threshold. Nonincreasing.
    pub measures: Vec<f64>,
    /// Oscillation norm of the field against the modulus used for fitting.
    pub normalizer: f64,
}

/// Measures `|{ |f - m_f(1-s, Q)| > lambda }|` exactly (cell counts) over the
/// threshold grid, together with the oscillation norm used as normalizer.
pub fn jn_tail(
    f: &SampledFunction,
    region: &CubeRegion,
    s: f64,
    lambda_grid: &[f64],
    phi: &Modulus,
    family: CubeFamily,
) -> Result<TailCurve> {
    check_half_range(s)?;
    if lambda_grid.is_empty() || lambda_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("lambda grid must be nonempty and increasing".into()));
    }
    if lambda_grid[0] <= 0.0 {
        return Err(Error::InvalidParameter("lambda grid must be positive".into()));
    }
    let samples = WeightedSamples::from_region(f, region);
    let median = maximal_median(&samples, 1.0 - s)?;
    let cell_volume = samples.cell_volume();
    let mut deviations: Vec<f64> =
        samples.values().iter().map(|&v| (v - median).abs()).collect();
    deviations.sort_unstable_by(f64::total_cmp);
    let measures = lambda_grid
        .iter()
        .map(|&lambda| {
            let above = deviations.len() - deviations.partition_point(|&d| d <= lambda);
            above as f64 * cell_volume
        })
        .collect();
    let normalizer = bmo_phi_norm(f, region, s, phi, family)?;
    Ok(TailCurve { lambdas: lambda_grid.to_vec(), measures, normalizer })
}

/// Fitted tail-decay constants, with the fit quality of the log-linear
/// regression over the selected window.
#[derive(Debug, Clone, Serialize)]
pub struct TailFit {
    pub c1: f64,
    pub c2: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Proof-internal reference value for the decay constant, reported for
    /// comparison only.
    pub reference_c2: f64,
    pub points_used: usize,
}

fn linear_regression(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (slope, intercept, r2)
}

/// Fits decay constants to a measured tail curve over the points whose
/// measure lies within the given fractions of the cube measure.
///
/// For a constant modulus the model is a straight line in log-measure and the
/// constants come from linear least squares. Other moduli profile out the
/// amplitude and search the decay rate by golden-section on the residual.
pub fn fit_tail_curve(
    curve: &TailCurve,
    phi: &Modulus,
    q_measure: f64,
    dim: usize,
    window: (f64, f64),
) -> Result<TailFit> {
    let (lo_frac, hi_frac) = window;
    let points: Vec<(f64, f64)> = curve
        .lambdas
        .iter()
        .zip(&curve.measures)
        .filter(|&(_, &m)| m >= lo_frac * q_measure && m <= hi_frac * q_measure && m > 0.0)
        .map(|(&l, &m)| (l, m.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "only {} tail points fall inside the fit window",
            points.len()
        )));
    }
    if curve.normalizer <= 0.0 {
        return Err(Error::InvalidParameter(
            "tail fit needs a positive normalizer".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (slope, intercept, r2) = linear_regression(&xs, &ys);
    let upper = upper_limit(q_measure, dim);
    let reference_c2 = dim as f64 * 2f64.ln() / (2.0 * (4.0 + 10.0 * dim as f64));

    let (c1, c2) = match *phi {
        Modulus::Constant(c) => {
            let c2 = -slope * c * curve.normalizer;
            let c1 = intercept.exp() / upper;
            (c1, c2)
        }
        _ => {
            // profile out c1 for each candidate c2, minimize the residual
            let sse = |c2: f64| -> Result<f64> {
                let mut logs = Vec::with_capacity(xs.len());
                for &lambda in &xs {
                    let inv = psi_inverse(phi, q_measure, dim, c2 * lambda / curve.normalizer)?;
                    if inv.u <= 0.0 {
                        return Ok(f64::INFINITY);
                    }
                    logs.push(inv.u.ln());
                }
                let offset = ys
                    .iter()
                    .zip(&logs)
                    .map(|(y, l)| y - l)
                    .sum::<f64>()
                    / ys.len() as f64;
                Ok(ys
                    .iter()
                    .zip(&logs)
                    .map(|(y, l)| {
                        let e = y - l - offset;
                        e * e
                    })
                    .sum())
            };
            // golden section over ln(c2); the wide bracket covers any
            // normalizer scale the corpus produces
            let (mut a, mut b) = ((1e-8f64).ln(), (1e6f64).ln());
            let ratio = 0.5 * (5f64.sqrt() - 1.0);
            let mut x1 = b - ratio * (b - a);
            let mut x2 = a + ratio * (b - a);
            let mut f1 = sse(x1.exp())?;
            let mut f2 = sse(x2.exp())?;
            for _ in 0..90 {
                if f1 <= f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - ratio * (b - a);
                    f1 = sse(x1.exp())?;
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + ratio * (b - a);
                    f2 = sse(x2.exp())?;
                }
            }
            let c2 = (0.5 * (a + b)).exp();
            let mut logs = Vec::with_capacity(xs.len());
            for &lambda in &xs {
                let inv = psi_inverse(phi, q_measure, dim, c2 * lambda / curve.normalizer)?;
                logs.push(inv.u.max(f64::MIN_POSITIVE).ln());
            }
            let offset =
                ys.iter().zip(&logs).map(|(y, l)| y - l).sum::<f64>() / ys.len() as f64;
            (offset.exp(), c2)
        }
    };

    Ok(TailFit {
        c1,
        c2,
        slope,
        intercept,
        r_squared: r2,
        reference_c2,
        points_used: points.len(),
    })
}

/// Shifts the field by its biased median for the root and rescales by the
/// oscillation norm, so the result has zero root median and unit norm.
/// A zero norm (constant field) yields the shifted field and norm 0.
pub fn normalize_for_tail(
    f: &SampledFunction,
    s: f64,
    phi: &Modulus,
    family: CubeFamily,
) -> Result<(SampledFunction, f64)> {
    check_half_range(s)?;
    let region = f.full_region();
    let samples = WeightedSamples::from_region(f, &region);
    let median = maximal_median(&samples, 1.0 - s)?;
    let norm = bmo_phi_norm(f, &region, s, phi, family)?;
    let g = if norm > 0.0 {
        f.map(|v| (v - median) / norm)?
    } else {
        f.map(|v| v - median)?
    };
    Ok((g, norm))
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingPoint {
    pub u: f64,
    /// Largest mean oscillation over cubes of measure at most `u`.
    pub mean_oscillation: f64,
    /// Modulus evaluated at `2^dim * u`.
    pub phi_scaled: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VmoEmbedding {
    pub s: f64,
    /// Whether `s <= 2^-dim`, the regime where the bounded-ratio reading of
    /// this check is meaningful; outside it the report is descriptive only.
    pub small_bias: bool,
    pub entries: Vec<EmbeddingPoint>,
    /// Empirical embedding constant: the largest ratio over the scale grid.
    pub max_ratio: f64,
}

/// Compares the mean-oscillation modulus against the scaled growth modulus:
/// for each `u`, the supremum over cubes of measure at most `u` of the average
/// of `|f - f_Q|`, divided by `phi(2^dim u)`. The largest ratio over the grid
/// is the empirical embedding constant.
pub fn vmo_embeds_in_vmo_check(
    f: &SampledFunction,
    region: &CubeRegion,
    s: f64,
    phi: &Modulus,
    u_grid: &[f64],
    family: CubeFamily,
) -> Result<VmoEmbedding> {
    check_half_range(s)?;
    if u_grid.is_empty() || u_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("u grid must be nonempty and increasing".into()));
    }
    let cubes = enumerate_cubes(region, family, None)?;
    let mut pairs: Vec<(f64, f64)> = cubes
        .par_iter()
        .map(|q| {
            let values = f.values_in(q);
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let mean_osc =
                values.iter().map(|v| (v - mean).abs()).sum::<f64>() / values.len() as f64;
            (q.measure(), mean_osc)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut prefix = Vec::with_capacity(pairs.len());
    let mut running = 0.0f64;
    for &(measure, osc) in &pairs {
        running = running.max(osc);
        prefix.push((measure, running));
    }
    let dim = region.dim();
    let mut entries = Vec::with_capacity(u_grid.len());
    let mut max_ratio = 0.0f64;
    for &u in u_grid {
        let idx = prefix.partition_point(|&(m, _)| m <= u);
        let mean_oscillation = if idx == 0 { 0.0 } else { prefix[idx - 1].1 };
        let phi_scaled = phi.eval((1u64 << dim) as f64 * u);
        let ratio = if mean_oscillation == 0.0 {
            0.0
        } else if phi_scaled <= 0.0 {
            return Err(Error::DegenerateModulus(format!(
                "phi({}) = 0 under a positive mean oscillation",
                (1u64 << dim) as f64 * u
            )));
        } else {
            mean_oscillation / phi_scaled
        };
        max_ratio = max_ratio.max(ratio);
        entries.push(EmbeddingPoint { u, mean_oscillation, phi_scaled, ratio });
    }
    Ok(VmoEmbedding {
        s,
        small_bias: s <= 0.5f64.powi(dim as i32),
        entries,
        max_ratio,
    })
}
