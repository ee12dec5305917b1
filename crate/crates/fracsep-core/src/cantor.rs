//! Symmetric and asymmetric Cantor systems, common-base reduction, and the
//! sign-uniform rewriting certificates behind their separation bounds.
//!
//! The rewriting takes a signed-digit expansion sum a_i * lambda^i with
//! digits in {-2,...,2} and re-expresses it with coefficients all of one
//! sign, borrowing 1/lambda from the next shallower position where needed.
//! For lambda < 1/3 every borrow-adjusted coefficient lands at or above
//! 1/lambda - 3, which is what turns a nonzero expansion into an explicit
//! lower bound on its value. The two-level variant does the same over an
//! outer base c^p1 whose block values are themselves expansions in c^p2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ifs::{Sign, Similarity1D, IFS1D};
use crate::scalar::Scalar;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Middle-lambda Cantor system {lambda*x, lambda*x + (1-lambda)} on the
/// unit interval.
pub fn make_symmetric(lambda: &Scalar) -> Result<IFS1D> {
    let zero = Scalar::zero(lambda.mode());
    let half = &Scalar::one(lambda.mode()) / &Scalar::from_int(2, lambda.mode());
    if lambda <= &zero || lambda >= &half {
        return Err(Error::domain(format!(
            "symmetric parameter lambda must lie in (0, 1/2), got {}",
            lambda
        )));
    }
    let one = Scalar::one(lambda.mode());
    IFS1D::new(vec![
        Similarity1D::new(lambda.clone(), Sign::Plus, zero)?,
        Similarity1D::new(lambda.clone(), Sign::Plus, &one - lambda)?,
    ])
}

/// Asymmetric Cantor system {c1*x, c2*x + (1-c2)} on the unit interval;
/// the two pieces
/// must be disjoint, so c1 + c2 < 1.
pub fn make_asymmetric(c1: &Scalar, c2: &Scalar) -> Result<IFS1D> {
    let zero = Scalar::zero(c1.mode());
    let one = Scalar::one(c1.mode());
    if c1 <= &zero || c1 >= &one || c2 <= &zero || c2 >= &one {
        return Err(Error::domain("contraction ratios must lie in (0,1)"));
    }
    if (c1 + c2) >= one {
        return Err(Error::Overlap);
    }
    IFS1D::new(vec![
        Similarity1D::new(c1.clone(), Sign::Plus, zero)?,
        Similarity1D::new(c2.clone(), Sign::Plus, &one - c2)?,
    ])
}

/// Common-base form c1 = c^p1, c2 = c^p2 of an asymmetric pair whose
/// log-ratio is the rational p1/p2.
#[derive(Clone, Debug)]
pub struct AsymmetricParams {
    pub c1: BigRational,
    pub c2: BigRational,
    pub base: BigRational,
    pub p1: u32,
    pub p2: u32,
    /// Whether c^p1 < c^p2 < 1/4 holds, the hypothesis under which the
    /// separation bound below is guaranteed.
    pub theorem_eligible: bool,
}

pub fn common_base(c: &BigRational, p1: u32, p2: u32) -> Result<AsymmetricParams> {
    if !(c > &BigRational::zero() && c < &BigRational::one()) {
        return Err(Error::domain(format!("base must lie in (0,1), got {}", c)));
    }
    if p1 <= p2 || p2 == 0 {
        return Err(Error::domain(format!(
            "exponents must satisfy p1 > p2 >= 1, got p1={} p2={}",
            p1, p2
        )));
    }
    let c1 = pow_rat(c, p1);
    let c2 = pow_rat(c, p2);
    let quarter = ratio(1, 4);
    let theorem_eligible = c2 < quarter;
    Ok(AsymmetricParams {
        c1,
        c2,
        base: c.clone(),
        p1,
        p2,
        theorem_eligible,
    })
}

impl AsymmetricParams {
    pub fn make_ifs(&self) -> Result<IFS1D> {
        make_asymmetric(
            &Scalar::from_rational(self.c1.clone()),
            &Scalar::from_rational(self.c2.clone()),
        )
    }
}

fn pow_rat(c: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= c;
    }
    acc
}

/// A signed-digit expansion `sum coeffs[i] * base^i` with exact rational
/// coefficients. Inputs to the rewriting come from word-pair differences and
/// carry integer digits in {-2,...,2}; rewritten outputs carry rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffVector {
    coeffs: Vec<BigRational>,
    base: BigRational,
}

impl CoeffVector {
    /// Builds a digit vector, checking digits lie in {-2,...,2} and the base
    /// in (0, 1/3).
    pub fn from_digits(digits: &[i64], base: BigRational) -> Result<CoeffVector> {
        if !(base > BigRational::zero() && base < ratio(1, 3)) {
            return Err(Error::domain(format!(
                "expansion base must lie in (0, 1/3), got {}",
                base
            )));
        }
        if let Some(d) = digits.iter().find(|d| d.abs() > 2) {
            return Err(Error::domain(format!("digit {} outside {{-2,...,2}}", d)));
        }
        Ok(CoeffVector {
            coeffs: digits.iter().map(|&d| big(d)).collect(),
            base,
        })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn base(&self) -> &BigRational {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact value `sum coeffs[i] * base^i`.
    pub fn value(&self) -> BigRational {
        let mut acc = BigRational::zero();
        let mut pow = BigRational::one();
        for c in &self.coeffs {
            acc += c * &pow;
            pow *= &self.base;
        }
        acc
    }
}

/// Result of a sign-uniform rewrite; `borrowed[i]` marks coefficients the
/// borrow step adjusted by +1/lambda, which carry the 1/lambda - 3 floor.
#[derive(Clone, Debug)]
pub struct RewrittenVector {
    pub vector: CoeffVector,
    pub borrowed: Vec<bool>,
}

/// Rewrites the expansion so every coefficient has the sign of the value
/// (all zero when the value is zero), preserving the value exactly.
///
/// Guarantees, for base lambda < 1/3 and digits in {-2,...,2}:
/// nonzero borrow-adjusted coefficients have magnitude >= 1/lambda - 3, and
/// untouched ones are integers of magnitude >= 1. The uniform floor over all
/// nonzero entries is therefore min(1, 1/lambda - 3).
pub fn rewrite_sign_uniform(v: &CoeffVector) -> Result<RewrittenVector> {
    let lambda = v.base.clone();
    if lambda >= ratio(1, 3) {
        return Err(Error::precondition(format!(
            "sign-uniform rewriting needs base < 1/3, got {}",
            lambda
        )));
    }
    let value = v.value();
    if value.is_zero() {
        return Ok(RewrittenVector {
            vector: CoeffVector {
                coeffs: vec![BigRational::zero(); v.coeffs.len()],
                base: lambda,
            },
            borrowed: vec![false; v.coeffs.len()],
        });
    }
    let negate = value.is_negative();
    let input: Vec<BigRational> = if negate {
        v.coeffs.iter().map(|c| -c).collect()
    } else {
        v.coeffs.clone()
    };
    let (mut coeffs, borrowed) = borrow_rewrite(&input, &lambda)?;
    if negate {
        for c in &mut coeffs {
            *c = -c.clone();
        }
    }
    Ok(RewrittenVector {
        vector: CoeffVector {
            coeffs,
            base: lambda,
        },
        borrowed,
    })
}

/// The borrow pass for a positive-valued expansion: walk from the deepest
/// index down, and where the running coefficient goes negative add 1/lambda
/// and push a unit borrow one position shallower. Returns nonnegative
/// coefficients with the same value.
///
/// With integer digits the leading coefficient cannot end negative (it stays
/// above -1 and is an integer). With rational coefficients it can; the
/// repair pass then drains the leading debt from deeper coefficients, whose
/// weighted mass exceeds the debt because the total value is positive.
/// Drained coefficients lose their borrow mark, since the floor no longer
/// applies to them.
fn borrow_rewrite(
    input: &[BigRational],
    lambda: &BigRational,
) -> Result<(Vec<BigRational>, Vec<bool>)> {
    let n = input.len();
    let mut out = vec![BigRational::zero(); n];
    let mut borrowed = vec![false; n];
    let inv = lambda.recip();
    let mut borrow = BigRational::zero();
    for i in (0..n).rev() {
        let cur = &input[i] - &borrow;
        if i == 0 {
            out[0] = cur.clone();
            borrow = BigRational::zero();
        } else if cur.is_negative() {
            out[i] = &inv + &cur;
            borrowed[i] = true;
            borrow = BigRational::one();
        } else {
            out[i] = cur;
            borrow = BigRational::zero();
        }
    }
    if out[0].is_negative() {
        // Repair: move the leading debt deeper. Keep it denominated at the
        // current index while scanning down.
        let mut debt = -out[0].clone(); // in lambda^0 units
        out[0] = BigRational::zero();
        let mut weight = BigRational::one(); // lambda^i at index i
        for i in 1..n {
            weight *= lambda;
            if debt.is_zero() {
                break;
            }
            if !out[i].is_positive() {
                continue;
            }
            let capacity = &out[i] * &weight;
            if capacity >= debt {
                out[i] -= &debt / &weight;
                borrowed[i] = false;
                debt = BigRational::zero();
            } else {
                debt -= capacity;
                out[i] = BigRational::zero();
                borrowed[i] = false;
            }
        }
        if !debt.is_zero() {
            // Unreachable for positive values: the deeper mass always covers
            // the debt. Guard anyway.
            return Err(Error::precondition(
                "borrow repair could not clear the leading debt; value was not positive",
            ));
        }
    }
    Ok((out, borrowed))
}

/// A two-level expansion `(1 - c^p2) * sum_i c^(p1*i) * sum_j a[i][j] c^(p2*j)`
/// with blocks indexed by the outer (deeper) base c^p1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCoeffMatrix {
    entries: Vec<Vec<BigRational>>,
    base: BigRational,
    p1: u32,
    p2: u32,
}

impl BlockCoeffMatrix {
    pub fn from_digits(
        digits: &[Vec<i64>],
        base: BigRational,
        p1: u32,
        p2: u32,
    ) -> Result<BlockCoeffMatrix> {
        if digits.is_empty() || digits.iter().any(|row| row.len() != digits[0].len()) {
            return Err(Error::domain(
                "block matrix must be rectangular and nonempty",
            ));
        }
        if !(base > BigRational::zero() && base < BigRational::one()) {
            return Err(Error::domain("base must lie in (0,1)"));
        }
        if p1 <= p2 || p2 == 0 {
            return Err(Error::domain("exponents must satisfy p1 > p2 >= 1"));
        }
        if let Some(d) = digits.iter().flatten().find(|d| d.abs() > 2) {
            return Err(Error::domain(format!("digit {} outside {{-2,...,2}}", d)));
        }
        Ok(BlockCoeffMatrix {
            entries: digits
                .iter()
                .map(|row| row.iter().map(|&d| big(d)).collect())
                .collect(),
            base,
            p1,
            p2,
        })
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    pub fn base(&self) -> &BigRational {
        &self.base
    }

    pub fn exponents(&self) -> (u32, u32) {
        (self.p1, self.p2)
    }

    fn lambda1(&self) -> BigRational {
        pow_rat(&self.base, self.p1)
    }

    fn lambda2(&self) -> BigRational {
        pow_rat(&self.base, self.p2)
    }

    /// Block value `A_i = sum_j a[i][j] * c^(p2*j)`.
    pub fn block_values(&self) -> Vec<BigRational> {
        let l2 = self.lambda2();
        self.entries
            .iter()
            .map(|row| {
                let mut acc = BigRational::zero();
                let mut pow = BigRational::one();
                for a in row {
                    acc += a * &pow;
                    pow *= &l2;
                }
                acc
            })
            .collect()
    }

    /// Exact value (1 - c^p2) * sum_i A_i * c^(p1*i).
    pub fn value(&self) -> BigRational {
        let l1 = self.lambda1();
        let l2 = self.lambda2();
        let mut acc = BigRational::zero();
        let mut pow = BigRational::one();
        for a in self.block_values() {
            acc += &a * &pow;
            pow *= &l1;
        }
        (BigRational::one() - l2) * acc
    }
}

/// Two-level rewrite result. `block_borrowed[i]` marks blocks adjusted by
/// +1/c^p1 (floor 1/c^p1 - 4 on their values); `inner_borrowed[i][j]` marks
/// inner coefficients adjusted by +1/c^p2 (floor 1/c^p2 - 3).
#[derive(Clone, Debug)]
pub struct RewrittenMatrix {
    pub matrix: BlockCoeffMatrix,
    pub block_borrowed: Vec<bool>,
    pub inner_borrowed: Vec<Vec<bool>>,
}

impl RewrittenMatrix {
    pub fn block_values(&self) -> Vec<BigRational> {
        self.matrix.block_values()
    }
}

/// Eligibility regime for the two-level rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eligibility {
    /// Both c^p1 and c^p2 strictly below 1/4 (the guaranteed regime).
    Strict,
    /// c^p1 < 1/4 and c^p2 < 1/3. The construction usually goes through but
    /// is not certified here; outputs are still verified exactly.
    Relaxed,
}

pub fn rewrite_two_level(m: &BlockCoeffMatrix) -> Result<RewrittenMatrix> {
    rewrite_two_level_with(m, Eligibility::Strict)
}

/// Outer borrow pass over block values, then an inner sign-uniform pass per
/// block. The value is preserved exactly; the final sign pattern is verified
/// before returning and any violation is reported as an error rather than
/// silently emitting a bad certificate.
pub fn rewrite_two_level_with(
    m: &BlockCoeffMatrix,
    eligibility: Eligibility,
) -> Result<RewrittenMatrix> {
    let l1 = m.lambda1();
    let l2 = m.lambda2();
    let quarter = ratio(1, 4);
    let third = ratio(1, 3);
    let ok = match eligibility {
        Eligibility::Strict => l1 < quarter && l2 < quarter,
        Eligibility::Relaxed => l1 < quarter && l2 < third,
    };
    if !ok {
        return Err(Error::precondition(format!(
            "two-level rewriting needs c^p1 < 1/4 and c^p2 < {} (got {} and {})",
            match eligibility {
                Eligibility::Strict => "1/4",
                Eligibility::Relaxed => "1/3",
            },
            l1,
            l2
        )));
    }
    let value = m.value();
    let n1 = m.entries.len();
    let n2 = m.entries[0].len();
    if value.is_zero() {
        return Ok(RewrittenMatrix {
            matrix: BlockCoeffMatrix {
                entries: vec![vec![BigRational::zero(); n2]; n1],
                base: m.base.clone(),
                p1: m.p1,
                p2: m.p2,
            },
            block_borrowed: vec![false; n1],
            inner_borrowed: vec![vec![false; n2]; n1],
        });
    }
    let negate = value.is_negative();
    let sign = if negate {
        -BigRational::one()
    } else {
        BigRational::one()
    };
    // Work on the positive version, mirror back at the end.
    let rows: Vec<Vec<BigRational>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(|a| a * &sign).collect())
        .collect();

    // Outer pass on block values: decide per block whether to borrow.
    let l2_pows: Vec<BigRational> = {
        let mut pows = Vec::with_capacity(n2);
        let mut p = BigRational::one();
        for _ in 0..n2 {
            pows.push(p.clone());
            p *= &l2;
        }
        pows
    };
    let block_value =
        |row: &[BigRational]| -> BigRational { row.iter().zip(&l2_pows).map(|(a, p)| a * p).sum() };
    let inv1 = l1.recip();
    let mut adjusted_rows = rows;
    let mut block_borrowed = vec![false; n1];
    let mut borrow = BigRational::zero();
    for i in (0..n1).rev() {
        // The outer borrow subtracts 1 and the self-borrow adds 1/c^p1, both
        // entering the block through its constant (j = 0) slot.
        adjusted_rows[i][0] = &adjusted_rows[i][0] - &borrow;
        let cur = block_value(&adjusted_rows[i]);
        if i > 0 && cur.is_negative() {
            adjusted_rows[i][0] = &adjusted_rows[i][0] + &inv1;
            block_borrowed[i] = true;
            borrow = BigRational::one();
        } else {
            borrow = BigRational::zero();
        }
    }
    // The borrow pass alone can leave the leading block negative (rational
    // block values escape the integrality argument that saves the
    // single-level case). Repair: drain the debt from deeper blocks, which
    // hold enough weighted mass because the total value is positive.
    let lead = block_value(&adjusted_rows[0]);
    if lead.is_negative() {
        let mut debt = -lead; // in l1^0 units
        adjusted_rows[0][0] = &adjusted_rows[0][0] + &debt;
        let mut weight = BigRational::one();
        for i in 1..n1 {
            weight *= &l1;
            if debt.is_zero() {
                break;
            }
            let bv = block_value(&adjusted_rows[i]);
            if !bv.is_positive() {
                continue;
            }
            let capacity = &bv * &weight;
            if capacity >= debt {
                adjusted_rows[i][0] = &adjusted_rows[i][0] - &(&debt / &weight);
                block_borrowed[i] = false;
                debt = BigRational::zero();
            } else {
                adjusted_rows[i][0] = &adjusted_rows[i][0] - &bv;
                block_borrowed[i] = false;
                debt -= capacity;
            }
        }
        if !debt.is_zero() {
            return Err(Error::precondition(
                "outer repair could not clear the leading block debt; value was not positive",
            ));
        }
    }

    // Inner pass: make each block's coefficients sign-uniform (nonnegative,
    // since every block value is now >= 0).
    let mut out_rows: Vec<Vec<BigRational>> = Vec::with_capacity(n1);
    let mut inner_borrowed: Vec<Vec<bool>> = Vec::with_capacity(n1);
    for row in &adjusted_rows {
        let bv = block_value(row);
        if bv.is_zero() {
            out_rows.push(vec![BigRational::zero(); n2]);
            inner_borrowed.push(vec![false; n2]);
        } else {
            let (coeffs, marks) = borrow_rewrite(row, &l2)?;
            out_rows.push(coeffs);
            inner_borrowed.push(marks);
        }
    }

    // Mirror back for negative values.
    if negate {
        for row in &mut out_rows {
            for a in row {
                *a = -a.clone();
            }
        }
    }
    let result = RewrittenMatrix {
        matrix: BlockCoeffMatrix {
            entries: out_rows,
            base: m.base.clone(),
            p1: m.p1,
            p2: m.p2,
        },
        block_borrowed,
        inner_borrowed,
    };
    // Exactness and sign uniformity are the whole point; verify both.
    if result.matrix.value() != value {
        return Err(Error::precondition(
            "two-level rewrite failed to preserve the value",
        ));
    }
    let want_negative = negate;
    for row in result.matrix.entries() {
        for a in row {
            if a.is_negative() != want_negative && !a.is_zero() {
                return Err(Error::precondition(
                    "two-level rewrite produced mixed signs; parameters sit outside the \
                     guaranteed regime"
                        .to_string(),
                ));
            }
        }
    }
    Ok(result)
}

/// Which closed-form separation floor to evaluate.
#[derive(Clone, Debug)]
pub enum TheoremFamily {
    /// Middle-lambda Cantor set, lambda < 1/3.
    Symmetric { lambda: BigRational },
    /// Common-base asymmetric pair (c^p1, c^p2) with c^p1 < c^p2 < 1/4.
    Asymmetric { c: BigRational, p1: u32, p2: u32 },
}

/// Closed-form lower bound on the normalized separation gap eps for the given
/// family: (1-lambda)(1/lambda - 3) in the symmetric case, and the smaller of
/// the translation-case and ratio-case floors in the asymmetric case.
pub fn theoretical_eps_bound(family: &TheoremFamily) -> Result<BigRational> {
    match family {
        TheoremFamily::Symmetric { lambda } => {
            if !(lambda > &BigRational::zero() && lambda < &ratio(1, 3)) {
                return Err(Error::precondition(format!(
                    "symmetric bound needs lambda in (0, 1/3), got {} (it degenerates to 0 at 1/3)",
                    lambda
                )));
            }
            let one = BigRational::one();
            Ok((&one - lambda) * (lambda.recip() - big(3)))
        }
        TheoremFamily::Asymmetric { c, p1, p2 } => {
            let params = common_base(c, *p1, *p2)?;
            if !params.theorem_eligible || params.c1 >= params.c2 {
                return Err(Error::precondition(format!(
                    "asymmetric bound needs c^p1 < c^p2 < 1/4, got {} and {}",
                    params.c1, params.c2
                )));
            }
            let one = BigRational::one();
            let ratio_case = &params.c2 * (&one - c);
            let translation_case = (&one - &params.c2) * (params.c2.recip() - big(3));
            Ok(ratio_case.min(translation_case))
        }
    }
}

/// Similarity dimension log(phi) / (p * log(1/c)) of the family
/// c1 = c^p, c2 = c^(2p), where phi is the golden ratio: solving
/// y + y^2 = 1 for y = c^(pD) gives y = 1/phi.
pub fn closed_form_golden_dim(c: &BigRational, p: u32) -> Result<f64> {
    if !(c > &BigRational::zero() && c < &BigRational::one()) {
        return Err(Error::domain(format!("base must lie in (0,1), got {}", c)));
    }
    if p == 0 {
        return Err(Error::domain("exponent p must be at least 1"));
    }
    let phi = 2.0 / (5.0_f64.sqrt() - 1.0);
    let c_f = Scalar::from_rational(c.clone()).to_f64();
    Ok(phi.ln() / (p as f64 * (1.0 / c_f).ln()))
}

/// Convenience: the guaranteed per-entry floor for nonzero rewritten
/// coefficients at base lambda: borrow-adjusted entries clear 1/lambda - 3,
/// untouched entries are integers, so the uniform floor is the smaller of
/// the two.
pub fn entry_floor(lambda: &BigRational) -> BigRational {
    (lambda.recip() - big(3)).min(BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Mode;

    #[test]
    fn symmetric_constructor_matches_parameters() {
        let ifs = make_symmetric(&Scalar::ratio(1, 3)).unwrap();
        assert_eq!(*ifs.maps()[0].ratio(), Scalar::ratio(1, 3));
        assert_eq!(*ifs.maps()[1].translation(), Scalar::ratio(2, 3));
        let ifs = make_symmetric(&Scalar::ratio(1, 4)).unwrap();
        assert_eq!(*ifs.maps()[1].translation(), Scalar::ratio(3, 4));
        assert!(make_symmetric(&Scalar::ratio(1, 2)).is_err());
    }

    #[test]
    fn asymmetric_constructor_checks_overlap() {
        let ifs = make_asymmetric(&Scalar::ratio(1, 9), &Scalar::ratio(1, 3)).unwrap();
        assert_eq!(*ifs.maps()[1].translation(), Scalar::ratio(2, 3));
        // fixed points 0 and 1 span the hull
        assert_eq!(*ifs.hull().lo(), Scalar::ratio(0, 1));
        assert_eq!(*ifs.hull().hi(), Scalar::ratio(1, 1));
        assert!(matches!(
            make_asymmetric(&Scalar::ratio(1, 2), &Scalar::ratio(1, 2)),
            Err(Error::Overlap)
        ));
        assert!(make_asymmetric(&Scalar::ratio(1, 25), &Scalar::ratio(1, 5)).is_ok());
    }

    #[test]
    fn common_base_powers_and_eligibility() {
        let p = common_base(&ratio(1, 5), 2, 1).unwrap();
        assert_eq!(p.c1, ratio(1, 25));
        assert_eq!(p.c2, ratio(1, 5));
        assert!(p.theorem_eligible);

        let p = common_base(&ratio(1, 2), 3, 2).unwrap();
        assert_eq!(p.c1, ratio(1, 8));
        assert_eq!(p.c2, ratio(1, 4));
        assert!(!p.theorem_eligible, "needs c^p2 < 1/4 strictly");

        let p = common_base(&ratio(1, 3), 2, 1).unwrap();
        assert!(!p.theorem_eligible);

        assert!(common_base(&ratio(1, 5), 1, 2).is_err());
    }

    #[test]
    fn rewrite_borrow_hand_traced() {
        // lambda = 1/4, digits [1, -2], value 1/2 -> [0, 2]
        let v = CoeffVector::from_digits(&[1, -2], ratio(1, 4)).unwrap();
        let r = rewrite_sign_uniform(&v).unwrap();
        assert_eq!(r.vector.coeffs(), &[big(0), big(2)]);
        assert_eq!(r.vector.value(), ratio(1, 2));
        assert!(r.borrowed[1]);
    }

    #[test]
    fn rewrite_keeps_nonnegative_input_unchanged() {
        let v = CoeffVector::from_digits(&[2, 0, 1], ratio(1, 4)).unwrap();
        let r = rewrite_sign_uniform(&v).unwrap();
        assert_eq!(r.vector.coeffs(), v.coeffs());
        assert!(r.borrowed.iter().all(|&b| !b));
    }

    #[test]
    fn rewrite_mirrors_negative_values() {
        // lambda = 1/4, digits [-1, 1], value -3/4 -> [0, -3]
        let v = CoeffVector::from_digits(&[-1, 1], ratio(1, 4)).unwrap();
        let r = rewrite_sign_uniform(&v).unwrap();
        assert_eq!(r.vector.coeffs(), &[big(0), big(-3)]);
        assert_eq!(r.vector.value(), ratio(-3, 4));
    }

    #[test]
    fn rewrite_zero_value_gives_zero_vector() {
        let v = CoeffVector::from_digits(&[0, 0, 0], ratio(1, 5)).unwrap();
        let r = rewrite_sign_uniform(&v).unwrap();
        assert!(r.vector.value().is_zero());
        assert!(r.vector.coeffs().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn rewrite_rejects_base_at_or_above_one_third() {
        assert!(CoeffVector::from_digits(&[1], ratio(1, 3)).is_err());
    }

    #[test]
    fn two_level_hand_traced() {
        // c = 1/5, p1 = 2, p2 = 1, blocks [[2,2],[-1,-1]]:
        // outer borrow at block 1 gives block values [7/5, 119/5], and the
        // inner pass turns block 1 into [23, 4].
        let m =
            BlockCoeffMatrix::from_digits(&[vec![2, 2], vec![-1, -1]], ratio(1, 5), 2, 1).unwrap();
        let value = m.value();
        let r = rewrite_two_level(&m).unwrap();
        assert_eq!(r.matrix.value(), value);
        assert_eq!(r.block_values(), vec![ratio(7, 5), ratio(119, 5)]);
        assert_eq!(r.matrix.entries()[0], vec![big(1), big(2)]);
        assert_eq!(r.matrix.entries()[1], vec![big(23), big(4)]);
        assert!(r.block_borrowed[1] && !r.block_borrowed[0]);
    }

    #[test]
    fn two_level_nonnegative_input_unchanged() {
        let m =
            BlockCoeffMatrix::from_digits(&[vec![1, 0], vec![0, 2]], ratio(1, 5), 2, 1).unwrap();
        let r = rewrite_two_level(&m).unwrap();
        assert_eq!(r.matrix.entries(), m.entries());
    }

    #[test]
    fn two_level_rejects_ineligible_base() {
        let m = BlockCoeffMatrix::from_digits(&[vec![1]], ratio(1, 3), 2, 1).unwrap();
        assert!(rewrite_two_level(&m).is_err());
        // relaxed mode admits c^p2 in [1/4, 1/3)
        let m = BlockCoeffMatrix::from_digits(&[vec![1]], ratio(3, 10), 2, 1).unwrap();
        assert!(rewrite_two_level(&m).is_err());
        assert!(rewrite_two_level_with(&m, Eligibility::Relaxed).is_ok());
    }

    #[test]
    fn eps_bounds_evaluate_to_the_known_values() {
        let sym = theoretical_eps_bound(&TheoremFamily::Symmetric {
            lambda: ratio(1, 4),
        })
        .unwrap();
        assert_eq!(sym, ratio(3, 4));
        let sym = theoretical_eps_bound(&TheoremFamily::Symmetric {
            lambda: ratio(1, 5),
        })
        .unwrap();
        assert_eq!(sym, ratio(8, 5));
        assert!(theoretical_eps_bound(&TheoremFamily::Symmetric {
            lambda: ratio(1, 3)
        })
        .is_err());

        let asym = theoretical_eps_bound(&TheoremFamily::Asymmetric {
            c: ratio(1, 5),
            p1: 2,
            p2: 1,
        })
        .unwrap();
        // min(c^p2 (1-c), (1-c^p2)(1/c^p2 - 3)) = min(4/25, 8/5)
        assert_eq!(asym, ratio(4, 25));
    }

    #[test]
    fn golden_dimension_agrees_with_bisection_oracle() {
        // Solve y + y^2 = 1 by bisection: y = 5^(-D) for c = 1/5, p = 1.
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid + mid * mid < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let y = 0.5 * (lo + hi);
        let oracle = -y.ln() / 5.0_f64.ln();
        let d = closed_form_golden_dim(&ratio(1, 5), 1).unwrap();
        assert!((d - oracle).abs() < 1e-12, "{} vs {}", d, oracle);
        // frozen from the oracle above
        assert!((d - 0.2989937).abs() < 1e-6);
        // doubling p halves the dimension
        let d2 = closed_form_golden_dim(&ratio(1, 5), 2).unwrap();
        assert!((d - 2.0 * d2).abs() < 1e-12);
    }

    #[test]
    fn entry_floor_is_the_provable_one() {
        assert_eq!(entry_floor(&ratio(1, 4)), big(1));
        assert_eq!(entry_floor(&ratio(1, 5)), big(1));
        assert_eq!(entry_floor(&ratio(2, 7)), ratio(1, 2));
    }

    #[test]
    fn make_symmetric_float_mode_works() {
        let ifs = make_symmetric(&Scalar::from_f64(0.25)).unwrap();
        assert_eq!(ifs.mode(), Mode::Float);
    }
}
