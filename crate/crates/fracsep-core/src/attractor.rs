//! Interval covers of the attractor K and of the difference set K - K.
//!
//! At scale b the attractor is tiled by the images f_w(K) for w in the cut
//! I_b; replacing K by its hull gives an interval cover within b*diam of K.
//! The analogous cover of K - K is indexed by equivalence classes of word
//! pairs (a, b) under equality of f_a(K) - f_b(K); on the line a class is
//! determined by the parameters (c_plus, c_minus, delta_q) of
//! c_plus*K - c_minus*K + delta_q.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ifs::{compose, scale_cut, scale_cut_with_budget, Word, DEFAULT_WORD_BUDGET, IFS1D};
use crate::interval::{Interval, IntervalSet};
use crate::scalar::Scalar;

/// A word prefix of an infinite code together with the point it pins down.
/// Every infinite extension of `word` codes a point within `error_bound` of
/// `value`.
#[derive(Clone, Debug)]
pub struct PointCode {
    word: Word,
    value: Scalar,
    error_bound: Scalar,
}

impl PointCode {
    pub fn word(&self) -> &Word {
        &self.word
    }

    /// f_word(hull left endpoint); a point of K exactly.
    pub fn value(&self) -> &Scalar {
        &self.value
    }

    pub fn error_bound(&self) -> &Scalar {
        &self.error_bound
    }
}

/// Canonical parameters of f_a(K) - f_b(K) = c_plus*K - c_minus*K + delta_q
/// for orientation-preserving maps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiffClass {
    pub c_plus: Scalar,
    pub c_minus: Scalar,
    pub delta_q: Scalar,
}

impl DiffClass {
    /// Hull of the class set: [cP*L - cM*R + dq, cP*R - cM*L + dq].
    pub fn hull_interval(&self, hull: &Interval) -> Interval {
        let lo = &(&(&self.c_plus * hull.lo()) - &(&self.c_minus * hull.hi())) + &self.delta_q;
        let hi = &(&(&self.c_plus * hull.hi()) - &(&self.c_minus * hull.lo())) + &self.delta_q;
        Interval::new(lo, hi)
    }

    /// Depth-refined cover of the class set: c_plus*C - c_minus*C + delta_q
    /// where C is a cover of K.
    pub fn refined_cover(&self, attractor_cover: &IntervalSet) -> IntervalSet {
        crate::interval::scaled_difference(
            attractor_cover,
            attractor_cover,
            &self.c_plus,
            &self.c_minus,
            &self.delta_q,
        )
    }

    /// Mirror parameterization under x -> (L+R)-x symmetry of K:
    /// (cP, cM, dq) and (cM, cP, dq + (cP-cM)(L+R)) describe the same set.
    fn mirrored(&self, hull: &Interval) -> DiffClass {
        let span = hull.lo() + hull.hi();
        DiffClass {
            c_plus: self.c_minus.clone(),
            c_minus: self.c_plus.clone(),
            delta_q: &self.delta_q + &(&(&self.c_plus - &self.c_minus) * &span),
        }
    }
}

/// Union of f_w(hull) over the scale cut at b. Contains K, and every point
/// of it is within b*diam(hull) of K.
pub fn cover(ifs: &IFS1D, b: &Scalar) -> Result<IntervalSet> {
    cover_with_budget(ifs, b, DEFAULT_WORD_BUDGET)
}

pub fn cover_with_budget(ifs: &IFS1D, b: &Scalar, budget: usize) -> Result<IntervalSet> {
    let cut = scale_cut_with_budget(ifs, b, budget)?;
    let mut raw = Vec::with_capacity(cut.len());
    for word in cut.words() {
        let f = compose(ifs, word)?;
        raw.push(Interval::ordered(
            f.apply(ifs.hull().lo()),
            f.apply(ifs.hull().hi()),
        ));
    }
    Ok(IntervalSet::new(raw))
}

/// The coded point f_word(L) with error bound c_word * diam(hull).
pub fn point_at(ifs: &IFS1D, word: &Word) -> Result<PointCode> {
    if word.is_empty() {
        return Err(Error::domain("point_at requires a nonempty word"));
    }
    let f = compose(ifs, word)?;
    Ok(PointCode {
        word: word.clone(),
        value: f.apply(ifs.hull().lo()),
        error_bound: f.ratio() * &ifs.diameter(),
    })
}

/// Deduplicated difference classes over I_b x I_b, sorted lexicographically
/// by (c_plus, c_minus, delta_q).
///
/// Merging applies two certain rules: exact tuple equality, and (when the
/// system is reflection-symmetric) the mirror identity, canonicalized so
/// that c_plus >= c_minus. Further equalities, if any exist, are left to the
/// escalation tier in the separation checkers.
pub fn diff_classes(ifs: &IFS1D, b: &Scalar) -> Result<Vec<DiffClass>> {
    diff_classes_with_budget(ifs, b, DEFAULT_WORD_BUDGET)
}

pub fn diff_classes_with_budget(ifs: &IFS1D, b: &Scalar, budget: usize) -> Result<Vec<DiffClass>> {
    let cut = scale_cut_with_budget(ifs, b, budget)?;
    diff_classes_from_cut(ifs, &cut)
}

/// Class construction over an already-computed cut.
///
/// Exact mode normalizes every parameter to one common denominator and
/// deduplicates integer triples, which keeps the quadratic pair loop cheap
/// at deep scales; inputs whose numerators overflow that fast path fall back
/// to comparing rationals directly.
pub fn diff_classes_from_cut(ifs: &IFS1D, cut: &crate::ifs::ScaleCut) -> Result<Vec<DiffClass>> {
    if !ifs.orientation_preserving() {
        return Err(Error::UnsupportedOrientation { op: "diff_classes" });
    }
    let maps: Vec<_> = cut
        .words()
        .iter()
        .map(|w| compose(ifs, w))
        .collect::<Result<Vec<_>>>()?;
    if ifs.mode() == crate::scalar::Mode::Exact {
        if let Some(classes) = diff_classes_integer_path(ifs, &maps) {
            return Ok(classes);
        }
    }
    Ok(diff_classes_rational_path(ifs, &maps))
}

/// Reference route comparing rationals directly; the integer path must agree
/// with it wherever it applies.
pub(crate) fn diff_classes_rational_path(
    ifs: &IFS1D,
    maps: &[crate::ifs::Similarity1D],
) -> Vec<DiffClass> {
    let symmetric = ifs.is_reflection_symmetric();
    let hull = ifs.hull();
    let mut set: BTreeSet<DiffClass> = BTreeSet::new();
    for fa in maps {
        for fb in maps {
            let mut class = DiffClass {
                c_plus: fa.ratio().clone(),
                c_minus: fb.ratio().clone(),
                delta_q: fa.translation() - fb.translation(),
            };
            if symmetric && class.c_plus < class.c_minus {
                class = class.mirrored(hull);
            }
            set.insert(class);
        }
    }
    set.into_iter().collect()
}

/// Integer fast path: scale ratios and translations by M = lcm(denominators)
/// times the denominator of the hull span, so tuples (and the mirror
/// translation adjustment) stay integers. Returns None when anything falls
/// outside i128.
fn diff_classes_integer_path(
    ifs: &IFS1D,
    maps: &[crate::ifs::Similarity1D],
) -> Option<Vec<DiffClass>> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, ToPrimitive};

    let symmetric = ifs.is_reflection_symmetric();
    let span = ifs.hull().lo().as_rational()? + ifs.hull().hi().as_rational()?;
    let mut m = BigInt::one();
    for f in maps {
        m = m.lcm(f.ratio().as_rational()?.denom());
        m = m.lcm(f.translation().as_rational()?.denom());
    }
    // The extra span-denominator factor keeps the mirror adjustment integral.
    m *= span.denom();
    let span_num = span.numer().to_i128()?;
    let span_den = span.denom().to_i128()?;
    let scale = |r: &num_rational::BigRational| -> Option<i128> {
        let scaled = r.numer() * (&m / r.denom());
        if scaled.abs() > BigInt::from(i128::MAX / 8) {
            return None;
        }
        scaled.to_i128()
    };
    let ratios: Vec<i128> = maps
        .iter()
        .map(|f| scale(f.ratio().as_rational()?))
        .collect::<Option<_>>()?;
    let qs: Vec<i128> = maps
        .iter()
        .map(|f| scale(f.translation().as_rational()?))
        .collect::<Option<_>>()?;

    let n = maps.len();
    let mut tuples: Vec<(i128, i128, i128)> = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let (mut cp, mut cm) = (ratios[a], ratios[b]);
            let mut dq = qs[a] - qs[b];
            if symmetric && cp < cm {
                // (cp, cm, dq) ~ (cm, cp, dq + (cp - cm) * span); the
                // division is exact because M absorbs the span denominator.
                let adjust = (cp - cm).checked_mul(span_num)?;
                if adjust % span_den != 0 {
                    return None;
                }
                dq += adjust / span_den;
                std::mem::swap(&mut cp, &mut cm);
            }
            tuples.push((cp, cm, dq));
        }
    }
    tuples.sort_unstable();
    tuples.dedup();

    let back = |v: i128| -> Scalar {
        Scalar::from_rational(num_rational::BigRational::new(BigInt::from(v), m.clone()))
    };
    Some(
        tuples
            .into_iter()
            .map(|(cp, cm, dq)| DiffClass {
                c_plus: back(cp),
                c_minus: back(cm),
                delta_q: back(dq),
            })
            .collect(),
    )
}

/// Union over classes of their hull intervals; contains K - K, and every
/// point of it is within 2b*diam(hull) of K - K.
pub fn diff_cover(ifs: &IFS1D, b: &Scalar) -> Result<IntervalSet> {
    diff_cover_with_budget(ifs, b, DEFAULT_WORD_BUDGET)
}

pub fn diff_cover_with_budget(ifs: &IFS1D, b: &Scalar, budget: usize) -> Result<IntervalSet> {
    let classes = diff_classes_with_budget(ifs, b, budget)?;
    let hull = ifs.hull();
    Ok(IntervalSet::new(
        classes.iter().map(|c| c.hull_interval(hull)).collect(),
    ))
}

/// What `local_class_count` counts around a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalCountMode {
    /// Difference classes whose set meets the ball (for z in K - K).
    DiffClasses,
    /// Cut words whose piece f_w(K) meets the ball (for z in K).
    Pieces,
}

/// Number of scale-r pieces (classes or attractor pieces, per `mode`) whose
/// cover meets the closed ball [z-r, z+r]. Boundary touching counts.
///
/// With `refine_depth` 0 each piece is an interval hull; depth d replaces the
/// hull by the depth-d cover of K inside the piece, shrinking the
/// overestimate.
pub fn local_class_count(
    ifs: &IFS1D,
    z: &Scalar,
    r: &Scalar,
    mode: LocalCountMode,
    refine_depth: u32,
) -> Result<usize> {
    Ok(local_class_counts(ifs, std::slice::from_ref(z), r, mode, refine_depth)?[0])
}

/// Batched variant: the scale-r pieces are computed once and tested against
/// every center.
pub fn local_class_counts(
    ifs: &IFS1D,
    centers: &[Scalar],
    r: &Scalar,
    mode: LocalCountMode,
    refine_depth: u32,
) -> Result<Vec<usize>> {
    let zero = Scalar::zero(ifs.mode());
    let one = Scalar::one(ifs.mode());
    if r <= &zero || r >= &one {
        return Err(Error::domain(format!(
            "radius must lie in (0,1), got {}",
            r
        )));
    }
    let refined: Option<IntervalSet> = if refine_depth > 0 {
        Some(cover(ifs, &ifs.cmax().powi(refine_depth as i32))?)
    } else {
        None
    };
    // Each piece becomes either its hull interval or a refined interval set.
    let pieces: Vec<PieceCover> = match mode {
        LocalCountMode::Pieces => {
            let cut = scale_cut(ifs, r)?;
            cut.words()
                .iter()
                .map(|word| {
                    let f = compose(ifs, word)?;
                    Ok(match &refined {
                        None => PieceCover::Hull(Interval::ordered(
                            f.apply(ifs.hull().lo()),
                            f.apply(ifs.hull().hi()),
                        )),
                        Some(c) => PieceCover::Refined(c.affine(&f.slope(), f.translation())),
                    })
                })
                .collect::<Result<_>>()?
        }
        LocalCountMode::DiffClasses => {
            let classes = diff_classes(ifs, r)?;
            classes
                .iter()
                .map(|class| match &refined {
                    None => PieceCover::Hull(class.hull_interval(ifs.hull())),
                    Some(c) => PieceCover::Refined(class.refined_cover(c)),
                })
                .collect()
        }
    };
    Ok(centers
        .iter()
        .map(|z| {
            let ball = Interval::new(z - r, z + r);
            pieces.iter().filter(|p| p.meets(&ball)).count()
        })
        .collect())
}

enum PieceCover {
    Hull(Interval),
    Refined(IntervalSet),
}

impl PieceCover {
    fn meets(&self, ball: &Interval) -> bool {
        match self {
            PieceCover::Hull(iv) => iv.intersects(ball),
            PieceCover::Refined(set) => !set.clip(ball.lo(), ball.hi()).is_empty(),
        }
    }
}
