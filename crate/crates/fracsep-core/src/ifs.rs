//! One-dimensional similarity IFSs, word composition and scale cuts.
//!
//! An IFS here is a finite list of contractions x -> sign*ratio*x + q on the
//! line. The scale cut I_b is the antichain of words whose composed ratio
//! first drops to b or below; the images of the hull under those words tile
//! the attractor at resolution b.

use std::fmt;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{Mode, Scalar};

/// Default cap on the number of words a tree enumeration may emit.
pub const DEFAULT_WORD_BUDGET: usize = 1 << 22;

/// Orientation of a similarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_scalar(self, mode: Mode) -> Scalar {
        match self {
            Sign::Plus => Scalar::from_int(1, mode),
            Sign::Minus => Scalar::from_int(-1, mode),
        }
    }

    fn combine(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A finite sequence of 1-based map indices; the empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_indices(indices: &[u32]) -> Word {
        Word(indices.to_vec())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Drops the last index; the parent of the empty word is itself.
    pub fn parent(&self) -> Word {
        let mut v = self.0.clone();
        v.pop();
        Word(v)
    }

    pub fn child(&self, index: u32) -> Word {
        let mut v = self.0.clone();
        v.push(index);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Parses "2,1" style comma-separated indices.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let mut v = Vec::new();
        for part in s.split(',') {
            let idx: u32 = part.trim().parse().map_err(|_| Error::Parse {
                input: s.to_string(),
                expected: "comma-separated map indices",
            })?;
            v.push(idx);
        }
        Ok(Word(v))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}", i)?;
            first = false;
        }
        Ok(())
    }
}

/// An affine contraction x -> sign*ratio*x + translation with ratio in (0,1].
/// Ratio 1 only arises for the identity / trivial compositions, never for an
/// IFS member.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Similarity1D {
    ratio: Scalar,
    sign: Sign,
    translation: Scalar,
}

impl Similarity1D {
    pub fn new(ratio: Scalar, sign: Sign, translation: Scalar) -> Result<Similarity1D> {
        if !ratio.is_positive() || ratio > Scalar::one(ratio.mode()) {
            return Err(Error::domain(format!(
                "similarity ratio must lie in (0,1], got {}",
                ratio
            )));
        }
        if ratio.mode() != translation.mode() {
            return Err(Error::domain(
                "ratio and translation must use the same arithmetic mode",
            ));
        }
        Ok(Similarity1D {
            ratio,
            sign,
            translation,
        })
    }

    pub fn identity(mode: Mode) -> Similarity1D {
        Similarity1D {
            ratio: Scalar::one(mode),
            sign: Sign::Plus,
            translation: Scalar::zero(mode),
        }
    }

    pub fn ratio(&self) -> &Scalar {
        &self.ratio
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn translation(&self) -> &Scalar {
        &self.translation
    }

    pub fn mode(&self) -> Mode {
        self.ratio.mode()
    }

    /// Signed slope sign*ratio.
    pub fn slope(&self) -> Scalar {
        match self.sign {
            Sign::Plus => self.ratio.clone(),
            Sign::Minus => -&self.ratio,
        }
    }

    pub fn apply(&self, x: &Scalar) -> Scalar {
        &(&self.slope() * x) + &self.translation
    }

    /// self after inner: (self . inner)(x) = self(inner(x)).
    pub fn compose_with(&self, inner: &Similarity1D) -> Similarity1D {
        Similarity1D {
            ratio: &self.ratio * &inner.ratio,
            sign: self.sign.combine(inner.sign),
            translation: self.apply(&inner.translation),
        }
    }

    /// Fixed point q/(1 - slope); None for the identity.
    pub fn fixed_point(&self) -> Option<Scalar> {
        let one = Scalar::one(self.mode());
        let denom = &one - &self.slope();
        if denom.is_zero() {
            return None;
        }
        Some(&self.translation / &denom)
    }
}

/// A system of at least two contracting similarities with a common invariant
/// hull. All parameters share one arithmetic mode.
#[derive(Clone, Debug)]
pub struct IFS1D {
    maps: Vec<Similarity1D>,
    hull: Interval,
    cmin: Scalar,
    cmax: Scalar,
    mode: Mode,
}

impl IFS1D {
    /// Validates ratios in (0,1), computes the hull [min fixed point, max
    /// fixed point] and checks it is invariant under every map.
    pub fn new(maps: Vec<Similarity1D>) -> Result<IFS1D> {
        if maps.len() < 2 {
            return Err(Error::domain("an IFS needs at least two maps"));
        }
        let mode = maps[0].mode();
        let one = Scalar::one(mode);
        for m in &maps {
            if m.mode() != mode {
                return Err(Error::domain("all maps must use the same arithmetic mode"));
            }
            if m.ratio >= one {
                return Err(Error::domain("IFS member ratios must be strictly below 1"));
            }
        }
        let fixed: Vec<Scalar> = maps
            .iter()
            .map(|m| m.fixed_point().expect("contractions have fixed points"))
            .collect();
        let lo = fixed.iter().min().unwrap().clone();
        let hi = fixed.iter().max().unwrap().clone();
        let hull = Interval::new(lo, hi);
        for (i, m) in maps.iter().enumerate() {
            let a = m.apply(hull.lo());
            let b = m.apply(hull.hi());
            let (img_lo, img_hi) = if a <= b { (a, b) } else { (b, a) };
            if &img_lo < hull.lo() || &img_hi > hull.hi() {
                return Err(Error::NotInvariant { map_index: i });
            }
        }
        let cmin = maps.iter().map(|m| m.ratio.clone()).min().unwrap();
        let cmax = maps.iter().map(|m| m.ratio.clone()).max().unwrap();
        Ok(IFS1D {
            maps,
            hull,
            cmin,
            cmax,
            mode,
        })
    }

    pub fn maps(&self) -> &[Similarity1D] {
        &self.maps
    }

    pub fn map_count(&self) -> usize {
        self.maps.len()
    }

    pub fn hull(&self) -> &Interval {
        &self.hull
    }

    pub fn cmin(&self) -> &Scalar {
        &self.cmin
    }

    pub fn cmax(&self) -> &Scalar {
        &self.cmax
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn diameter(&self) -> Scalar {
        self.hull.length()
    }

    pub fn orientation_preserving(&self) -> bool {
        self.maps.iter().all(|m| m.sign == Sign::Plus)
    }

    /// True when conjugating every map by x -> (L+R)-x permutes the system,
    /// which forces the attractor to be reflection-symmetric.
    pub fn is_reflection_symmetric(&self) -> bool {
        let sum = &(self.hull.lo() + self.hull.hi());
        let mut original: Vec<(Scalar, Sign, Scalar)> = self
            .maps
            .iter()
            .map(|m| (m.ratio.clone(), m.sign, m.translation.clone()))
            .collect();
        let mut conjugated: Vec<(Scalar, Sign, Scalar)> = self
            .maps
            .iter()
            .map(|m| {
                let q = &(sum * &(&Scalar::one(self.mode) - &m.slope())) - &m.translation;
                (m.ratio.clone(), m.sign, q)
            })
            .collect();
        original.sort();
        conjugated.sort();
        original == conjugated
    }
}

/// Composes the maps named by `word`, leftmost index applied last. The empty
/// word yields the identity.
pub fn compose(ifs: &IFS1D, word: &Word) -> Result<Similarity1D> {
    let mut acc = Similarity1D::identity(ifs.mode);
    for &idx in word.indices() {
        if idx == 0 || idx as usize > ifs.maps.len() {
            return Err(Error::InvalidWord {
                index: idx,
                map_count: ifs.maps.len(),
            });
        }
        acc = acc.compose_with(&ifs.maps[idx as usize - 1]);
    }
    Ok(acc)
}

/// The scale cut I_b: all words with c_word <= b < c_parent, in lexicographic
/// order, with their composed ratios.
#[derive(Clone, Debug)]
pub struct ScaleCut {
    b: Scalar,
    words: Vec<Word>,
    ratios: Vec<Scalar>,
}

impl ScaleCut {
    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn ratios(&self) -> &[Scalar] {
        &self.ratios
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.words.iter().zip(self.ratios.iter())
    }
}

pub fn scale_cut(ifs: &IFS1D, b: &Scalar) -> Result<ScaleCut> {
    scale_cut_with_budget(ifs, b, DEFAULT_WORD_BUDGET)
}

/// Depth-first expansion of the word tree, emitting a word exactly when its
/// ratio first drops to b or below. Errors once more than `budget` words
/// would be emitted.
pub fn scale_cut_with_budget(ifs: &IFS1D, b: &Scalar, budget: usize) -> Result<ScaleCut> {
    let zero = Scalar::zero(ifs.mode);
    let one = Scalar::one(ifs.mode);
    if b <= &zero || b >= &one {
        return Err(Error::domain(format!(
            "scale b must lie in (0,1), got {}",
            b
        )));
    }
    // Stack of (word, ratio) nodes with ratio > b still to expand.
    let mut emitted: Vec<(Word, Scalar)> = Vec::new();
    let mut stack: Vec<(Word, Scalar)> = vec![(Word::empty(), one)];
    while let Some((word, ratio)) = stack.pop() {
        for idx in 1..=ifs.maps.len() as u32 {
            let child_ratio = &ratio * &ifs.maps[idx as usize - 1].ratio;
            let child = word.child(idx);
            if &child_ratio <= b {
                if emitted.len() >= budget {
                    return Err(Error::BudgetExceeded {
                        what: "scale cut",
                        budget,
                    });
                }
                emitted.push((child, child_ratio));
            } else {
                stack.push((child, child_ratio));
            }
        }
    }
    emitted.sort_by(|a, b| a.0.cmp(&b.0));
    let (words, ratios) = emitted.into_iter().unzip();
    Ok(ScaleCut {
        b: b.clone(),
        words,
        ratios,
    })
}
