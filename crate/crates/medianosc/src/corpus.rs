//! Deterministic test-field generators. Every field is a pure function of
//! (name, parameters, dimension, resolution, seed); randomized members draw
//! from a seeded ChaCha8 stream, and random levels live on a coarse dyadic
//! lattice so downstream midpoint and difference arithmetic stays exact.

use crate::error::{Error, Result};
use crate::grid::SampledFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Named generator recorded in output headers.
pub const GENERATOR_NAME: &str = "ChaCha8";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Corpus {
    Constant { value: f64 },
    /// 0 below the midpoint of the first axis, 1 at or above it.
    Step,
    /// -2 below the midpoint, +1 at or above it.
    PaperStep,
    /// The first coordinate.
    Linear,
    /// Slope `l` along the diagonal unit direction, so the Euclidean
    /// Lipschitz constant is exactly `l`.
    Lipschitz { l: f64 },
    /// A centered block of `width` cells per axis set to 1 on a zero field.
    Spike { width: usize },
    /// ln(1 / |x - center|), clipped naturally by cell-center sampling.
    LogSingularity { center: f64 },
    /// Piecewise-constant with `levels` random values: contiguous runs in 1D,
    /// nearest-site regions in 2D.
    Piecewise { levels: usize },
    /// Alternating 0/1 blocks of `block` cells per axis.
    Checkerboard { block: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSpec {
    pub corpus: Corpus,
    pub dim: usize,
    pub n_side: usize,
    pub seed: u64,
}

/// A random value on the dyadic lattice k/8 with |k| <= 32.
fn lattice_level(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-32i32..=32) as f64 / 8.0
}

impl CorpusSpec {
    pub fn generate(&self) -> Result<SampledFunction> {
        if self.dim == 0 || self.dim > 2 {
            return Err(Error::InvalidParameter(format!(
                "corpus generation covers dimensions 1 and 2, got {}",
                self.dim
            )));
        }
        let dim = self.dim;
        let n = self.n_side;
        let origin = vec![0.0; dim];
        match self.corpus {
            Corpus::Constant { value } => {
                SampledFunction::new(dim, origin, 1.0, n, vec![value; n.pow(dim as u32)])
            }
            Corpus::Step => SampledFunction::from_fn(dim, origin, 1.0, n, |x| {
                if x[0] >= 0.5 { 1.0 } else { 0.0 }
            }),
            Corpus::PaperStep => SampledFunction::from_fn(dim, origin, 1.0, n, |x| {
                if x[0] >= 0.5 { 1.0 } else { -2.0 }
            }),
            Corpus::Linear => SampledFunction::from_fn(dim, origin, 1.0, n, |x| x[0]),
            Corpus::Lipschitz { l } => {
                let scale = l / (dim as f64).sqrt();
                SampledFunction::from_fn(dim, origin, 1.0, n, |x| {
                    scale * x.iter().sum::<f64>()
                })
            }
            Corpus::Spike { width } => {
                if width == 0 || width > n {
                    return Err(Error::InvalidParameter(format!(
                        "spike width {width} must lie in 1..={n}"
                    )));
                }
                let start = (n - width) / 2;
                let mut values = vec![0.0; n.pow(dim as u32)];
                match dim {
                    1 => {
                        values[start..start + width].fill(1.0);
                    }
                    _ => {
                        for i in start..start + width {
                            for j in start..start + width {
                                values[i * n + j] = 1.0;
                            }
                        }
                    }
                }
                SampledFunction::new(dim, origin, 1.0, n, values)
            }
            Corpus::LogSingularity { center } => {
                SampledFunction::from_fn(dim, origin, 1.0, n, |x| {
                    let r2: f64 = x.iter().map(|&c| (c - center) * (c - center)).sum();
                    (1.0 / r2.sqrt()).ln()
                })
            }
            Corpus::Piecewise { levels } => {
                if levels == 0 {
                    return Err(Error::InvalidParameter("piecewise needs at least one level".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let values: Vec<f64> = (0..levels).map(|_| lattice_level(&mut rng)).collect();
                match dim {
                    1 => {
                        let mut breaks: Vec<usize> =
                            (0..levels - 1).map(|_| rng.gen_range(1..n)).collect();
                        breaks.sort_unstable();
                        let cells = (0..n)
                            .map(|i| values[breaks.iter().filter(|&&b| b <= i).count()])
                            .collect();
                        SampledFunction::new(dim, origin, 1.0, n, cells)
                    }
                    _ => {
                        let sites: Vec<(f64, f64)> = (0..levels)
                            .map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)))
                            .collect();
                        SampledFunction::from_fn(dim, origin, 1.0, n, |x| {
                            let nearest = sites
                                .iter()
                                .enumerate()
                                .min_by(|(_, a), (_, b)| {
                                    let da = (x[0] - a.0).powi(2) + (x[1] - a.1).powi(2);
                                    let db = (x[0] - b.0).powi(2) + (x[1] - b.1).powi(2);
                                    da.total_cmp(&db)
                                })
                                .map(|(i, _)| i)
                                .unwrap();
                            values[nearest]
                        })
                    }
                }
            }
            Corpus::Checkerboard { block } => {
                if block == 0 || block > n {
                    return Err(Error::InvalidParameter(format!(
                        "checkerboard block {block} must lie in 1..={n}"
                    )));
                }
                let mut values = vec![0.0; n.pow(dim as u32)];
                match dim {
                    1 => {
                        for (i, v) in values.iter_mut().enumerate() {
                            *v = ((i / block) % 2) as f64;
                        }
                    }
                    _ => {
                        for i in 0..n {
                            for j in 0..n {
                                values[i * n + j] = ((i / block + j / block) % 2) as f64;
                            }
                        }
                    }
                }
                SampledFunction::new(dim, origin, 1.0, n, values)
            }
        }
    }
}

/// The strict two-indicator pair on `n` cells: each indicator's zero set
/// exceeds its bias fraction by exactly one cell, so both biased medians are
/// zero, while the sum's median at the discrete boundary fraction is one.
#[derive(Debug, Clone)]
pub struct PairCounterexample {
    pub f: SampledFunction,
    pub g: SampledFunction,
    /// Smallest parameter at which the sum's maximal median reaches one:
    /// (zero-overlap cells) / n, just above s + s1 - 1.
    pub t_boundary: f64,
}

pub fn pair_counterexample(s: f64, s1: f64, n: usize) -> Result<PairCounterexample> {
    if !(s > 0.5 && s < 1.0 && s1 > 0.5 && s1 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "pair construction needs s, s1 in (1/2, 1), got {s}, {s1}"
        )));
    }
    let zeros_f = (s * n as f64).floor() as usize + 1;
    let zeros_g = (s1 * n as f64).floor() as usize + 1;
    if zeros_f >= n || zeros_g >= n {
        return Err(Error::InvalidParameter(format!(
            "n = {n} too small for the requested biases"
        )));
    }
    let support_f = n - zeros_f;
    let support_g = n - zeros_g;
    let overlap_zeros = (zeros_f + zeros_g).checked_sub(n).ok_or_else(|| {
        Error::InvalidParameter("supports overlap; raise s + s1 or n".into())
    })?;
    if overlap_zeros == 0 {
        return Err(Error::InvalidParameter(
            "no shared zero cells; raise s + s1 or n".into(),
        ));
    }
    let mut fv = vec![0.0; n];
    for v in fv.iter_mut().take(support_f) {
        *v = 1.0;
    }
    let mut gv = vec![0.0; n];
    for v in gv.iter_mut().skip(support_f).take(support_g) {
        *v = 1.0;
    }
    Ok(PairCounterexample {
        f: SampledFunction::new(1, vec![0.0], 1.0, n, fv)?,
        g: SampledFunction::new(1, vec![0.0], 1.0, n, gv)?,
        t_boundary: overlap_zeros as f64 / n as f64,
    })
}
