//! Weak-separation checkers and minimal-gap reports across scales.
//!
//! Three checkers share one report shape. The sup-norm checker measures
//! ||f_a^{-1} f_b - id|| over the attractor for distinct cut maps; because
//! |h(x) - x| is convex in x for affine h, the supremum over K sits at the
//! hull endpoints, which belong to K. The difference checkers measure gaps
//! between difference classes, either at finitely many test points of K or
//! as Hausdorff distances between depth-refined covers.
//!
//! Class equality beyond the certain merging rules is escalated: a pair of
//! classes indistinguishable at every test point is either proven distinct
//! (their refined covers separate by more than the refinement error) or
//! reported as undetermined, which poisons the verdict. An undetermined pair
//! is never silently counted as a zero gap.

use rayon::prelude::*;

use crate::attractor::{cover_with_budget, diff_classes_from_cut, DiffClass};
use crate::error::{Error, Result};
use crate::ifs::{compose, scale_cut_with_budget, Word, DEFAULT_WORD_BUDGET, IFS1D};
use crate::interval::{hausdorff, IntervalSet};
use crate::scalar::Scalar;

/// Enumeration and escalation limits.
#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    /// Cap on words per scale cut.
    pub max_words: usize,
    /// Maximum refinement depth when escalating suspected class equalities.
    pub merge_depth: u32,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_words: DEFAULT_WORD_BUDGET,
            merge_depth: 6,
        }
    }
}

/// Test points certified to lie in the attractor: hull endpoints are fixed
/// points of member maps, and images of such points under compositions stay
/// inside K.
#[derive(Clone, Debug)]
pub struct TestPoints {
    points: Vec<Scalar>,
}

impl TestPoints {
    /// The hull endpoints {L, R}.
    pub fn hull_endpoints(ifs: &IFS1D) -> TestPoints {
        let lo = ifs.hull().lo().clone();
        let hi = ifs.hull().hi().clone();
        let points = if lo == hi { vec![lo] } else { vec![lo, hi] };
        TestPoints { points }
    }

    /// Adds f_word(L) for each word; those are exact points of K.
    pub fn with_words(ifs: &IFS1D, words: &[Word]) -> Result<TestPoints> {
        let mut points = Self::hull_endpoints(ifs).points;
        for w in words {
            let f = compose(ifs, w)?;
            points.push(f.apply(ifs.hull().lo()));
        }
        points.sort();
        points.dedup();
        Ok(TestPoints { points })
    }

    /// Caller-supplied values; the caller asserts membership in K.
    pub fn from_raw(points: Vec<Scalar>) -> Result<TestPoints> {
        if points.is_empty() {
            return Err(Error::domain("test point set must be nonempty"));
        }
        Ok(TestPoints { points })
    }

    pub fn points(&self) -> &[Scalar] {
        &self.points
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Undetermined => write!(f, "undetermined"),
        }
    }
}

/// The pair attaining the minimal gap, if any. Reports are few and
/// short-lived, so the big variant is not worth boxing.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Witness {
    None,
    Words(Word, Word),
    Classes(DiffClass, DiffClass),
}

impl Witness {
    fn csv_fields(&self) -> (String, String) {
        match self {
            Witness::None => (String::new(), String::new()),
            Witness::Words(a, b) => (a.to_string(), b.to_string()),
            Witness::Classes(a, b) => (
                format!("{};{};{}", a.c_plus, a.c_minus, a.delta_q),
                format!("{};{};{}", b.c_plus, b.c_minus, b.delta_q),
            ),
        }
    }
}

/// Minimal-gap report at one scale.
#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub b: Scalar,
    pub word_count: usize,
    pub class_count: usize,
    /// Minimal gap over pairs of distinct classes; normalized by b for the
    /// difference checkers, raw sup-norm for the WSP checker. None when
    /// fewer than two classes exist.
    pub eps_star: Option<Scalar>,
    pub witness: Witness,
    pub verdict: Verdict,
    /// Bound on how far the depth-refined Hausdorff gap can sit from the
    /// true one (Hausdorff checker only), on the same normalized scale.
    pub refinement_error: Option<Scalar>,
    /// Pairs whose equality the escalation tier could not decide.
    pub undetermined_pairs: usize,
}

impl SeparationReport {
    pub const CSV_HEADER: &'static str =
        "b,word_count,class_count,eps_star,witness_a,witness_b,verdict";

    pub fn csv_row(&self) -> String {
        let (wa, wb) = self.witness.csv_fields();
        let eps = match &self.eps_star {
            Some(e) => e.to_string(),
            None => String::new(),
        };
        [
            self.b.to_string(),
            self.word_count.to_string(),
            self.class_count.to_string(),
            eps,
            wa,
            wb,
            self.verdict.to_string(),
        ]
        .iter()
        .map(|f| crate::report::csv_escape(f))
        .collect::<Vec<_>>()
        .join(",")
    }

    fn verdict_for(eps: Option<&Scalar>, threshold: Option<&Scalar>) -> Verdict {
        match (eps, threshold) {
            (Some(e), Some(t)) => {
                if e >= t {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
            _ => Verdict::Pass,
        }
    }
}

/// Minimal sup-norm separation between distinct cut maps at scale b.
///
/// For each unordered pair of distinct composed maps the score is
/// max(|f_a(L)-f_b(L)|, |f_a(R)-f_b(R)|) / max(ratio_a, ratio_b), which
/// equals the smaller of the two ordered sup-norms ||f^{-1}g - id|| over K.
/// Pairs composing to the same map are excluded.
pub fn wsp_min_separation(
    ifs: &IFS1D,
    b: &Scalar,
    threshold: Option<&Scalar>,
    budgets: &Budgets,
) -> Result<SeparationReport> {
    let cut = scale_cut_with_budget(ifs, b, budgets.max_words)?;
    let lo = ifs.hull().lo();
    let hi = ifs.hull().hi();
    // Dedup identical compositions, keeping the lexicographically first word.
    let mut maps: Vec<(Scalar, Scalar, Scalar, Word)> = Vec::new(); // (f(L), f(R), ratio, word)
    for word in cut.words() {
        let f = compose(ifs, word)?;
        maps.push((f.apply(lo), f.apply(hi), f.ratio().clone(), word.clone()));
    }
    maps.sort();
    maps.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    let class_count = maps.len();

    let mut best: Option<(Scalar, usize, usize)> = None;
    for i in 0..maps.len() {
        for j in (i + 1)..maps.len() {
            // maps are sorted by f(L); once even the f(L) gap divided by the
            // largest possible ratio exceeds the best score, later j's only
            // grow.
            let first_gap = &maps[j].0 - &maps[i].0;
            if let Some((best_score, _, _)) = &best {
                if &(&first_gap / b) >= best_score {
                    break;
                }
            }
            let d = first_gap.max((&maps[j].1 - &maps[i].1).abs());
            let denom = maps[i].2.clone().max(maps[j].2.clone());
            let score = &d / &denom;
            let better = match &best {
                None => true,
                Some((s, bi, bj)) => {
                    score < *s
                        || (score == *s && (&maps[i].3, &maps[j].3) < (&maps[*bi].3, &maps[*bj].3))
                }
            };
            if better {
                best = Some((score, i, j));
            }
        }
    }
    let (eps_star, witness) = match best {
        None => (None, Witness::None),
        Some((score, i, j)) => (
            Some(score),
            Witness::Words(maps[i].3.clone(), maps[j].3.clone()),
        ),
    };
    let verdict = SeparationReport::verdict_for(eps_star.as_ref(), threshold);
    Ok(SeparationReport {
        b: b.clone(),
        word_count: cut.len(),
        class_count,
        eps_star,
        witness,
        verdict,
        refinement_error: None,
        undetermined_pairs: 0,
    })
}

/// Test-point coordinates of a class: c_plus*x_i - c_minus*x_j + delta_q over
/// all ordered point pairs. The gap between two classes is the Chebyshev
/// distance between their coordinate vectors.
fn class_coords(class: &DiffClass, pts: &TestPoints) -> Vec<Scalar> {
    let mut coords = Vec::with_capacity(pts.points.len() * pts.points.len());
    for xi in &pts.points {
        for xj in &pts.points {
            coords.push(&(&(&class.c_plus * xi) - &(&class.c_minus * xj)) + &class.delta_q);
        }
    }
    coords
}

fn chebyshev(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut best = (&a[0] - &b[0]).abs();
    for (x, y) in a.iter().zip(b).skip(1) {
        let d = (x - y).abs();
        if d > best {
            best = d;
        }
    }
    best
}

/// Outcome of escalating one suspected equality.
enum Resolution {
    Distinct,
    Undetermined,
}

/// Decides whether two classes with identical test-point coordinates are
/// genuinely different sets. Refined covers of equal sets can differ by at
/// most the refinement error, so a larger Hausdorff distance proves the sets
/// distinct; anything else up to the depth budget stays undetermined.
fn resolve_equality(
    ifs: &IFS1D,
    b: &Scalar,
    a: &DiffClass,
    c: &DiffClass,
    budgets: &Budgets,
) -> Result<Resolution> {
    let diam = ifs.diameter();
    let four = Scalar::from_int(4, ifs.mode());
    for depth in 1..=budgets.merge_depth {
        let scale = ifs.cmax().powi(depth as i32);
        let base_cover = cover_with_budget(ifs, &scale, budgets.max_words)?;
        let ca = a.refined_cover(&base_cover);
        let cc = c.refined_cover(&base_cover);
        let dh = hausdorff(&ca, &cc)?;
        let tolerance = &(&four * b) * &(&scale * &diam);
        if dh > tolerance {
            return Ok(Resolution::Distinct);
        }
    }
    Ok(Resolution::Undetermined)
}

/// Weak-separation-for-differences report: minimal normalized test-point gap
/// over pairs of distinct difference classes at scale b.
pub fn wsd_report(
    ifs: &IFS1D,
    b: &Scalar,
    pts: &TestPoints,
    threshold: Option<&Scalar>,
    budgets: &Budgets,
) -> Result<SeparationReport> {
    let cut = scale_cut_with_budget(ifs, b, budgets.max_words)?;
    let classes = diff_classes_from_cut(ifs, &cut)?;
    let word_count = cut.len();
    let class_count = classes.len();
    if class_count < 2 {
        return Ok(SeparationReport {
            b: b.clone(),
            word_count,
            class_count,
            eps_star: None,
            witness: Witness::None,
            verdict: SeparationReport::verdict_for(None, threshold),
            refinement_error: None,
            undetermined_pairs: 0,
        });
    }

    let coords: Vec<Vec<Scalar>> = classes.iter().map(|c| class_coords(c, pts)).collect();
    // Sort class indices by coordinates; identical vectors become adjacent
    // and the first coordinate supports window pruning.
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&i, &j| coords[i].cmp(&coords[j]).then(classes[i].cmp(&classes[j])));

    // Suspected equalities: groups with identical coordinate vectors.
    let mut undetermined_pairs = 0usize;
    let mut zero_witness: Option<(usize, usize)> = None;
    let mut group_rep = vec![true; classes.len()];
    {
        let mut g = 0;
        while g < order.len() {
            let mut h = g + 1;
            while h < order.len() && coords[order[h]] == coords[order[g]] {
                h += 1;
            }
            if h - g > 1 {
                for k in g + 1..h {
                    group_rep[order[k]] = false;
                    match resolve_equality(ifs, b, &classes[order[g]], &classes[order[k]], budgets)?
                    {
                        Resolution::Distinct => {
                            if zero_witness.is_none() {
                                zero_witness = Some((order[g], order[k]));
                            }
                        }
                        Resolution::Undetermined => undetermined_pairs += 1,
                    }
                }
            }
            g = h;
        }
    }

    if let Some((i, j)) = zero_witness {
        // A proven-distinct pair with identical test-point values: the gap is
        // genuinely zero.
        let eps = Some(Scalar::zero(b.mode()));
        let verdict = if threshold.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        return Ok(SeparationReport {
            b: b.clone(),
            word_count,
            class_count,
            eps_star: eps,
            witness: Witness::Classes(classes[i].clone(), classes[j].clone()),
            verdict,
            refinement_error: None,
            undetermined_pairs,
        });
    }

    // Minimal positive gap over group representatives.
    let reps: Vec<usize> = order.iter().copied().filter(|&i| group_rep[i]).collect();
    let mut best: Option<(Scalar, usize, usize)> = None;
    for a in 0..reps.len() {
        for bidx in (a + 1)..reps.len() {
            let (i, j) = (reps[a], reps[bidx]);
            let first_gap = (&coords[j][0] - &coords[i][0]).abs();
            if let Some((best_gap, _, _)) = &best {
                if &first_gap >= best_gap {
                    break;
                }
            }
            let gap = chebyshev(&coords[i], &coords[j]);
            let better = match &best {
                None => true,
                Some((g, bi, bj)) => {
                    gap < *g
                        || (gap == *g
                            && (&classes[i], &classes[j]) < (&classes[*bi], &classes[*bj]))
                }
            };
            if better {
                best = Some((gap, i, j));
            }
        }
    }
    let (eps_star, witness) = match best {
        None => (None, Witness::None),
        Some((gap, i, j)) => (
            Some(&gap / b),
            Witness::Classes(classes[i].clone(), classes[j].clone()),
        ),
    };
    let verdict = if undetermined_pairs > 0 {
        Verdict::Undetermined
    } else {
        SeparationReport::verdict_for(eps_star.as_ref(), threshold)
    };
    Ok(SeparationReport {
        b: b.clone(),
        word_count,
        class_count,
        eps_star,
        witness,
        verdict,
        refinement_error: None,
        undetermined_pairs,
    })
}

/// Hausdorff-distance report: minimal normalized Hausdorff distance between
/// depth-refined covers of distinct classes. Lower-bounds the separation
/// constant of the stronger (sufficient) condition up to the reported
/// refinement error.
pub fn wsd_hausdorff_report(
    ifs: &IFS1D,
    b: &Scalar,
    depth: u32,
    threshold: Option<&Scalar>,
    budgets: &Budgets,
) -> Result<SeparationReport> {
    let cut = scale_cut_with_budget(ifs, b, budgets.max_words)?;
    let classes = diff_classes_from_cut(ifs, &cut)?;
    let word_count = cut.len();
    let class_count = classes.len();
    let diam = ifs.diameter();
    let scale = ifs.cmax().powi(depth as i32);
    let refinement_error = &(&Scalar::from_int(4, ifs.mode()) * &scale) * &diam;
    if class_count < 2 {
        return Ok(SeparationReport {
            b: b.clone(),
            word_count,
            class_count,
            eps_star: None,
            witness: Witness::None,
            verdict: SeparationReport::verdict_for(None, threshold),
            refinement_error: Some(refinement_error),
            undetermined_pairs: 0,
        });
    }
    let base_cover = if depth == 0 {
        IntervalSet::singleton(ifs.hull().clone())
    } else {
        cover_with_budget(ifs, &scale, budgets.max_words)?
    };
    let covers: Vec<IntervalSet> = classes
        .iter()
        .map(|c| c.refined_cover(&base_cover))
        .collect();
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&i, &j| {
        covers[i]
            .min()
            .cmp(covers[j].min())
            .then(classes[i].cmp(&classes[j]))
    });

    let mut undetermined_pairs = 0usize;
    let mut best: Option<(Scalar, usize, usize)> = None;
    for a in 0..order.len() {
        for bidx in (a + 1)..order.len() {
            let (i, j) = (order[a], order[bidx]);
            // d_H is at least the gap between the set minima.
            let min_gap = (covers[j].min() - covers[i].min()).abs();
            if let Some((best_gap, _, _)) = &best {
                if &min_gap >= best_gap {
                    break;
                }
            }
            let dh = hausdorff(&covers[i], &covers[j])?;
            if dh.is_zero() {
                // Equal covers at this depth: suspected equal sets.
                undetermined_pairs += 1;
                continue;
            }
            let better = match &best {
                None => true,
                Some((g, bi, bj)) => {
                    dh < *g
                        || (dh == *g && (&classes[i], &classes[j]) < (&classes[*bi], &classes[*bj]))
                }
            };
            if better {
                best = Some((dh, i, j));
            }
        }
    }
    let (eps_star, witness) = match best {
        None => (None, Witness::None),
        Some((dh, i, j)) => (
            Some(&dh / b),
            Witness::Classes(classes[i].clone(), classes[j].clone()),
        ),
    };
    let verdict = if undetermined_pairs > 0 {
        Verdict::Undetermined
    } else {
        SeparationReport::verdict_for(eps_star.as_ref(), threshold)
    };
    Ok(SeparationReport {
        b: b.clone(),
        word_count,
        class_count,
        eps_star,
        witness,
        verdict,
        refinement_error: Some(refinement_error),
        undetermined_pairs,
    })
}

/// Which checker a scan runs at every scale.
#[derive(Clone, Copy, Debug)]
pub enum Checker {
    Wsp,
    Wsd,
    WsdHausdorff { depth: u32 },
}

/// Per-scale reports plus the error that aborted the scan, if any. Reports
/// for scales after the first failing one are dropped.
#[derive(Debug)]
pub struct ScanOutcome {
    pub reports: Vec<SeparationReport>,
    pub aborted: Option<Error>,
}

/// Runs one checker at every scale of a strictly decreasing list in (0,1).
/// Scales are independent and evaluated in parallel; output order follows
/// the input list.
pub fn scan_scales(
    ifs: &IFS1D,
    b_list: &[Scalar],
    checker: Checker,
    pts: &TestPoints,
    threshold: Option<&Scalar>,
    budgets: &Budgets,
) -> Result<ScanOutcome> {
    let zero = Scalar::zero(ifs.mode());
    let one = Scalar::one(ifs.mode());
    if b_list.is_empty() {
        return Err(Error::domain("scale list must be nonempty"));
    }
    for w in b_list.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::domain("scale list must be strictly decreasing"));
        }
    }
    if b_list.iter().any(|b| b <= &zero || b >= &one) {
        return Err(Error::domain("scales must lie in (0,1)"));
    }
    let results: Vec<Result<SeparationReport>> = b_list
        .par_iter()
        .map(|b| match checker {
            Checker::Wsp => wsp_min_separation(ifs, b, threshold, budgets),
            Checker::Wsd => wsd_report(ifs, b, pts, threshold, budgets),
            Checker::WsdHausdorff { depth } => {
                wsd_hausdorff_report(ifs, b, depth, threshold, budgets)
            }
        })
        .collect();
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => {
                return Ok(ScanOutcome {
                    reports,
                    aborted: Some(e),
                })
            }
        }
    }
    Ok(ScanOutcome {
        reports,
        aborted: None,
    })
}
