//! Dimension machinery: the similarity-dimension solver, greedy covering
//! counts, log-log regression, localized homogeneity exponents and the
//! twice-the-dimension check for difference sets.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::attractor::{cover_with_budget, diff_cover_with_budget, point_at};
use crate::error::{Error, Result};
use crate::ifs::{Word, IFS1D};
use crate::interval::IntervalSet;
use crate::sampling::SplitMix64;
use crate::scalar::Scalar;
use crate::separation::{scan_scales, Budgets, Checker, TestPoints, Verdict};

/// Solves sum c_i^D = 1 by bisection. The left side is strictly decreasing
/// in D with value >= 2 at D = 0, so the root is unique.
pub fn similarity_dimension(ifs: &IFS1D, tol: f64) -> Result<f64> {
    if tol <= 0.0 {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {}",
            tol
        )));
    }
    let ratios: Vec<f64> = ifs.maps().iter().map(|m| m.ratio().to_f64()).collect();
    let g = |d: f64| ratios.iter().map(|c| c.powf(d)).sum::<f64>() - 1.0;
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while g(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::domain(
                "similarity dimension solver failed to bracket a root",
            ));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Minimum number of closed balls of radius eps, centered in X, needed to
/// cover X. Greedy: cover the leftmost uncovered position with the rightmost
/// admissible center; in one dimension this is optimal.
pub fn box_count(x: &IntervalSet, eps: &Scalar) -> Result<u64> {
    if x.is_empty() {
        return Err(Error::domain("box count of the empty set"));
    }
    if !eps.is_positive() {
        return Err(Error::domain(format!(
            "radius must be positive, got {}",
            eps
        )));
    }
    let mut count: u64 = 0;
    let mut cursor = x.min().clone();
    loop {
        count += 1;
        let center = x
            .last_point_at_or_before(&(&cursor + eps))
            .expect("cursor tracks a point of X");
        let reach = &center + eps;
        match x.next_uncovered_after(&reach) {
            Some(next) => cursor = next,
            None => return Ok(count),
        }
    }
}

pub fn box_counts(x: &IntervalSet, eps_list: &[Scalar]) -> Result<Vec<(Scalar, u64)>> {
    eps_list
        .iter()
        .map(|eps| box_count(x, eps).map(|n| (eps.clone(), n)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitKind {
    /// Least-squares slope of log(count) against log(1/scale).
    Box,
    /// Max over samples of log(count) / log(r/rho); a sup, never mixed with
    /// the regression estimate.
    Assouad,
}

impl std::fmt::Display for FitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitKind::Box => write!(f, "box"),
            FitKind::Assouad => write!(f, "assouad"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FitSample {
    /// Covering radius (box) or outer radius r (assouad).
    pub scale: f64,
    /// Inner radius rho for assouad samples.
    pub rho: Option<f64>,
    pub count: u64,
}

/// A fitted exponent with the samples that produced it.
#[derive(Clone, Debug)]
pub struct DimensionFit {
    pub kind: FitKind,
    pub samples: Vec<FitSample>,
    pub exponent: f64,
    /// Max absolute log-log deviation from the fit (box), or the spread
    /// between the max and min per-sample ratios (assouad).
    pub residual: f64,
}

impl DimensionFit {
    pub const CSV_HEADER: &'static str = "kind,scale_or_r,rho_or_blank,count,exponent,residual";

    /// Recomputes (exponent, residual) from the stored samples.
    pub fn recompute(&self) -> (f64, f64) {
        match self.kind {
            FitKind::Box => {
                let pts: Vec<(f64, u64)> =
                    self.samples.iter().map(|s| (s.scale, s.count)).collect();
                let (slope, residual) = least_squares_loglog(&pts);
                (slope, residual)
            }
            FitKind::Assouad => assouad_stats(&self.samples),
        }
    }

    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for s in &self.samples {
            let rho = s.rho.map(|r| format!("{:.16e}", r)).unwrap_or_default();
            out.push_str(&format!(
                "{},{:.16e},{},{},{:.16e},{:.16e}\n",
                self.kind, s.scale, rho, s.count, self.exponent, self.residual
            ));
        }
        out
    }
}

fn least_squares_loglog(samples: &[(f64, u64)]) -> (f64, f64) {
    let xs: Vec<f64> = samples.iter().map(|(s, _)| (1.0 / s).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, n)| (*n as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (my + slope * (x - mx))).abs())
        .fold(0.0, f64::max);
    (slope, residual)
}

fn assouad_stats(samples: &[FitSample]) -> (f64, f64) {
    let ratios: Vec<f64> = samples
        .iter()
        .map(|s| {
            let rho = s.rho.expect("assouad samples carry rho");
            (s.count as f64).ln() / (s.scale / rho).ln()
        })
        .collect();
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    (max, max - min)
}

/// Least-squares exponent through (scale, count) samples in log-log space.
pub fn fit_exponent(samples: &[(f64, u64)]) -> Result<DimensionFit> {
    let mut distinct: Vec<f64> = samples.iter().map(|(s, _)| *s).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::domain("fit needs at least two distinct scales"));
    }
    if samples.iter().any(|(s, _)| *s <= 0.0) {
        return Err(Error::domain("scales must be positive"));
    }
    let (exponent, residual) = least_squares_loglog(samples);
    Ok(DimensionFit {
        kind: FitKind::Box,
        samples: samples
            .iter()
            .map(|(s, n)| FitSample {
                scale: *s,
                rho: None,
                count: *n,
            })
            .collect(),
        exponent,
        residual,
    })
}

/// Which set the localized counts run over.
#[derive(Clone, Copy, Debug)]
enum Target {
    Attractor,
    Difference,
}

fn localized_samples(
    ifs: &IFS1D,
    target: Target,
    centers: &[Scalar],
    scale_pairs: &[(Scalar, Scalar)],
    budgets: &Budgets,
) -> Result<Vec<FitSample>> {
    for (r, rho) in scale_pairs {
        if r <= rho {
            return Err(Error::domain(format!(
                "assouad scale pair needs r > rho, got ({}, {})",
                r, rho
            )));
        }
    }
    // One cover per distinct rho; kappa = cmin resolves structure below rho.
    let kappa = ifs.cmin().clone();
    let mut covers: BTreeMap<Scalar, IntervalSet> = BTreeMap::new();
    for (_, rho) in scale_pairs {
        if !covers.contains_key(rho) {
            let b = rho * &kappa;
            let set = match target {
                Target::Attractor => cover_with_budget(ifs, &b, budgets.max_words)?,
                Target::Difference => diff_cover_with_budget(ifs, &b, budgets.max_words)?,
            };
            covers.insert(rho.clone(), set);
        }
    }
    let tasks: Vec<(usize, usize)> = (0..scale_pairs.len())
        .flat_map(|p| (0..centers.len()).map(move |c| (p, c)))
        .collect();
    let samples: Vec<Option<FitSample>> = tasks
        .par_iter()
        .map(|&(p, c)| {
            let (r, rho) = &scale_pairs[p];
            let set = &covers[rho];
            let z = &centers[c];
            let clipped = set.clip(&(z - r), &(z + r));
            if clipped.is_empty() {
                return Ok(None);
            }
            let n = box_count(&clipped, rho)?;
            Ok(Some(FitSample {
                scale: r.to_f64(),
                rho: Some(rho.to_f64()),
                count: n,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(samples.into_iter().flatten().collect())
}

/// Localized covering exponent sup log N(K cap B(x,r), rho) / log(r/rho)
/// over the given centers and scale pairs. Centers should be points of the
/// attractor.
pub fn assouad_estimate(
    ifs: &IFS1D,
    centers: &[Scalar],
    scale_pairs: &[(Scalar, Scalar)],
) -> Result<DimensionFit> {
    assouad_estimate_with(ifs, centers, scale_pairs, &Budgets::default())
}

pub fn assouad_estimate_with(
    ifs: &IFS1D,
    centers: &[Scalar],
    scale_pairs: &[(Scalar, Scalar)],
    budgets: &Budgets,
) -> Result<DimensionFit> {
    let samples = localized_samples(ifs, Target::Attractor, centers, scale_pairs, budgets)?;
    if samples.is_empty() {
        return Err(Error::domain("no usable assouad samples"));
    }
    let (exponent, residual) = assouad_stats(&samples);
    Ok(DimensionFit {
        kind: FitKind::Assouad,
        samples,
        exponent,
        residual,
    })
}

/// Seeded points of K: hull endpoints plus images of the left endpoint under
/// random words.
pub fn sample_attractor_points(ifs: &IFS1D, count: usize, len: usize, seed: u64) -> Vec<Scalar> {
    let mut rng = SplitMix64::new(seed);
    let mut points = vec![ifs.hull().lo().clone(), ifs.hull().hi().clone()];
    while points.len() < count.max(2) {
        let indices: Vec<u32> = (0..len)
            .map(|_| 1 + rng.next_index(ifs.map_count()) as u32)
            .collect();
        let w = Word::from_indices(&indices);
        if let Ok(p) = point_at(ifs, &w) {
            points.push(p.value().clone());
        }
    }
    points.sort();
    points.dedup();
    points
}

/// Seeded points of K - K: pairwise differences of sampled attractor points,
/// always including 0 and the extremes.
pub fn sample_difference_points(ifs: &IFS1D, count: usize, len: usize, seed: u64) -> Vec<Scalar> {
    let base = sample_attractor_points(ifs, count, len, seed);
    let mut points = vec![
        Scalar::zero(ifs.mode()),
        ifs.hull().lo() - ifs.hull().hi(),
        ifs.hull().hi() - ifs.hull().lo(),
    ];
    let mut rng = SplitMix64::new(seed ^ 0xD1FF);
    while points.len() < count.max(3) {
        let a = &base[rng.next_index(base.len())];
        let b = &base[rng.next_index(base.len())];
        points.push(a - b);
    }
    points.sort();
    points.dedup();
    points
}

/// Configuration for the twice-the-dimension check.
#[derive(Clone, Debug)]
pub struct DiffBoundParams {
    /// Scales for the weak-separation evidence scan.
    pub wsd_scales: Vec<Scalar>,
    /// Threshold the scanned eps values must clear; None records the floor
    /// without enforcing one.
    pub wsd_threshold: Option<Scalar>,
    /// (r, rho) pairs for both localized estimates.
    pub scale_pairs: Vec<(Scalar, Scalar)>,
    pub center_count: usize,
    pub seed: u64,
    /// Tolerance added to 2 * exponent(K) before comparing.
    pub slack: f64,
    pub budgets: Budgets,
}

impl DiffBoundParams {
    /// Geometric defaults: r = cmax^j for j in 1..=2, rho = r * cmax^m for
    /// m in {4, 6, 8}, scan scales cmax^1..cmax^5.
    pub fn defaults_for(ifs: &IFS1D) -> DiffBoundParams {
        let cmax = ifs.cmax().clone();
        let mut scale_pairs = Vec::new();
        for j in 1..=2 {
            for m in [4_i32, 6, 8] {
                scale_pairs.push((cmax.powi(j), cmax.powi(j + m)));
            }
        }
        DiffBoundParams {
            wsd_scales: (1..=5).map(|k| cmax.powi(k)).collect(),
            wsd_threshold: None,
            scale_pairs,
            center_count: 8,
            seed: 7,
            slack: 0.05,
            budgets: Budgets::default(),
        }
    }
}

/// Outcome of the difference-set dimension check.
#[derive(Clone, Debug)]
pub struct DiffBoundReport {
    pub fit_attractor: DimensionFit,
    pub fit_difference: DimensionFit,
    pub sim_dim: f64,
    /// 2 * exponent(K) + slack, what the difference estimate is held to.
    pub bound: f64,
    pub slack: f64,
    /// Minimal eps over the scanned scales, as evidence the separation
    /// condition held.
    pub wsd_min_eps: Option<Scalar>,
    pub verdict: Verdict,
}

/// Estimates the localized exponents of K and K - K and checks
/// exponent(K - K) <= 2 * exponent(K) + slack, with a weak-separation scan
/// as a side condition: an undetermined scan poisons the verdict, a failed
/// one fails it.
pub fn diff_bound_check(ifs: &IFS1D, params: &DiffBoundParams) -> Result<DiffBoundReport> {
    let pts = TestPoints::hull_endpoints(ifs);
    let scan = scan_scales(
        ifs,
        &params.wsd_scales,
        Checker::Wsd,
        &pts,
        params.wsd_threshold.as_ref(),
        &params.budgets,
    )?;
    if let Some(err) = scan.aborted {
        return Err(err);
    }
    let wsd_undetermined = scan
        .reports
        .iter()
        .any(|r| r.verdict == Verdict::Undetermined);
    let wsd_failed = scan.reports.iter().any(|r| r.verdict == Verdict::Fail);
    let wsd_min_eps = scan.reports.iter().filter_map(|r| r.eps_star.clone()).min();

    let centers_k = sample_attractor_points(ifs, params.center_count, 12, params.seed);
    let centers_diff = sample_difference_points(ifs, params.center_count, 12, params.seed);
    let samples_k = localized_samples(
        ifs,
        Target::Attractor,
        &centers_k,
        &params.scale_pairs,
        &params.budgets,
    )?;
    let samples_diff = localized_samples(
        ifs,
        Target::Difference,
        &centers_diff,
        &params.scale_pairs,
        &params.budgets,
    )?;
    if samples_k.is_empty() || samples_diff.is_empty() {
        return Err(Error::domain("no usable assouad samples"));
    }
    let (exp_k, res_k) = assouad_stats(&samples_k);
    let (exp_d, res_d) = assouad_stats(&samples_diff);
    let fit_attractor = DimensionFit {
        kind: FitKind::Assouad,
        samples: samples_k,
        exponent: exp_k,
        residual: res_k,
    };
    let fit_difference = DimensionFit {
        kind: FitKind::Assouad,
        samples: samples_diff,
        exponent: exp_d,
        residual: res_d,
    };
    let bound = 2.0 * exp_k + params.slack;
    let verdict = if wsd_undetermined {
        Verdict::Undetermined
    } else if wsd_failed || exp_d > bound {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    let sim_dim = similarity_dimension(ifs, 1e-12)?;
    Ok(DiffBoundReport {
        fit_attractor,
        fit_difference,
        sim_dim,
        bound,
        slack: params.slack,
        wsd_min_eps,
        verdict,
    })
}
