//! Exact numbers of the form `±√(p/q)` and finite sums of square-free surds.
//!
//! Every 3j and 6j value is a single signed radical. Sums of products of such
//! values (orthogonality sums, contractions) are [`RadicalSum`]s kept in
//! square-free normal form, where zero-testing is exact because square roots
//! of distinct square-free integers are linearly independent over ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `sign · √radicand` with a non-negative big-rational radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactRadical {
    sign: i8,
    radicand: BigRational,
}

impl Default for ExactRadical {
    fn default() -> Self {
        Self::zero()
    }
}

impl ExactRadical {
    pub fn zero() -> Self {
        ExactRadical {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        ExactRadical {
            sign: 1,
            radicand: BigRational::one(),
        }
    }

    /// `sign · √radicand`; a zero radicand forces sign 0.
    ///
    /// Panics if `radicand` is negative or `sign` is zero with a nonzero radicand.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if radicand.is_zero() {
            return Self::zero();
        }
        assert!(sign != 0, "sign 0 with nonzero radicand");
        ExactRadical {
            sign: sign.signum(),
            radicand,
        }
    }

    /// Positive square root of a non-negative rational.
    pub fn sqrt(radicand: BigRational) -> Self {
        Self::new(1, radicand)
    }

    /// Embeds a rational `c` as `sign(c)·√(c²)`.
    pub fn from_rational(c: &BigRational) -> Self {
        let sign = if c.is_zero() {
            0
        } else if c.is_positive() {
            1
        } else {
            -1
        };
        Self::new(sign, c * c)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    #[inline]
    pub fn sign(&self) -> i8 {
        self.sign
    }

    #[inline]
    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    /// The square of the value (always non-negative).
    pub fn square(&self) -> BigRational {
        self.radicand.clone()
    }

    /// `sign · radicand`; determines the value uniquely.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            1 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let r = ratio_to_f64(&self.radicand).sqrt();
        if self.sign > 0 {
            r
        } else {
            -r
        }
    }

    /// Multiplies by a rational factor.
    pub fn scale(&self, c: &BigRational) -> Self {
        self * &ExactRadical::from_rational(c)
    }

    /// Splits into `coef · √f` with `f` square-free.
    pub fn to_surd(&self) -> SurdTerm {
        if self.sign == 0 {
            return SurdTerm {
                coef: BigRational::zero(),
                squarefree: BigUint::one(),
            };
        }
        // √(p/q) = √(p·q) / q
        let p = self.radicand.numer().magnitude();
        let q = self.radicand.denom().magnitude();
        let (s, f) = squarefree_decompose(&(p * q));
        let coef = BigRational::new(
            BigInt::from_biguint(Sign::Plus, s),
            BigInt::from_biguint(Sign::Plus, q.clone()),
        );
        SurdTerm {
            coef: if self.sign < 0 { -coef } else { coef },
            squarefree: f,
        }
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for magnitudes outside f64's direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Mul for &ExactRadical {
    type Output = ExactRadical;
    fn mul(self, rhs: &ExactRadical) -> ExactRadical {
        if self.sign == 0 || rhs.sign == 0 {
            return ExactRadical::zero();
        }
        ExactRadical {
            sign: self.sign * rhs.sign,
            radicand: &self.radicand * &rhs.radicand,
        }
    }
}

impl Mul for ExactRadical {
    type Output = ExactRadical;
    fn mul(self, rhs: ExactRadical) -> ExactRadical {
        &self * &rhs
    }
}

impl Neg for ExactRadical {
    type Output = ExactRadical;
    fn neg(self) -> ExactRadical {
        ExactRadical {
            sign: -self.sign,
            radicand: self.radicand,
        }
    }
}

impl Neg for &ExactRadical {
    type Output = ExactRadical;
    fn neg(self) -> ExactRadical {
        -self.clone()
    }
}

impl fmt::Display for ExactRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let sign = if s > 0 { "+" } else { "-" };
                if self.radicand.is_integer() {
                    write!(f, "{}sqrt({})", sign, self.radicand.numer())
                } else {
                    write!(
                        f,
                        "{}sqrt({}/{})",
                        sign,
                        self.radicand.numer(),
                        self.radicand.denom()
                    )
                }
            }
        }
    }
}

/// `coef · √squarefree` with `squarefree ≥ 1` square-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdTerm {
    pub coef: BigRational,
    pub squarefree: BigUint,
}

impl SurdTerm {
    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn to_radical(&self) -> ExactRadical {
        let sign = if self.coef.is_zero() {
            0
        } else if self.coef.is_positive() {
            1
        } else {
            -1
        };
        let f = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, self.squarefree.clone()));
        ExactRadical::new(sign, &self.coef * &self.coef * f)
    }
}

impl Mul for &SurdTerm {
    type Output = SurdTerm;
    /// `√f1·√f2 = g·√((f1/g)(f2/g))` with `g = gcd(f1, f2)`; the cofactor is
    /// square-free because `f1/g` and `f2/g` are coprime and square-free.
    fn mul(self, rhs: &SurdTerm) -> SurdTerm {
        let g = self.squarefree.gcd(&rhs.squarefree);
        let f = (&self.squarefree / &g) * (&rhs.squarefree / &g);
        let g = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, g));
        SurdTerm {
            coef: &self.coef * &rhs.coef * g,
            squarefree: f,
        }
    }
}

/// Writes `n = s² · f` with `f` square-free.
///
/// Trial division by every integer up to 2^20; a cofactor left after that is
/// taken as square-free unless it is a perfect square. Radicands built from
/// factorials of arguments below 2^20 are always fully resolved.
pub fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    const TRIAL_LIMIT: u64 = 1 << 20;
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut f = BigUint::one();
    let mut p: u64 = 2;
    loop {
        let pp = BigUint::from(p);
        if &pp * &pp > rest || p > TRIAL_LIMIT {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&pp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            s *= pp.pow(e / 2);
            if e % 2 == 1 {
                f *= &pp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            s *= r;
        } else {
            f *= rest;
        }
    }
    (s, f)
}

/// A finite sum `Σ cᵢ √fᵢ` grouped by distinct square-free `fᵢ`.
///
/// Zero iff no group survives; zero-coefficient groups are removed eagerly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RadicalSum {
    terms: BTreeMap<BigUint, BigRational>,
}

impl RadicalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_surd(&mut self, t: SurdTerm) {
        if t.coef.is_zero() {
            return;
        }
        let mut remove = false;
        match self.terms.get_mut(&t.squarefree) {
            Some(c) => {
                *c += &t.coef;
                remove = c.is_zero();
            }
            None => {
                self.terms.insert(t.squarefree.clone(), t.coef);
            }
        }
        if remove {
            self.terms.remove(&t.squarefree);
        }
    }

    pub fn add(&mut self, r: &ExactRadical) {
        self.add_surd(r.to_surd());
    }

    pub fn add_rational(&mut self, c: &BigRational) {
        self.add_surd(SurdTerm {
            coef: c.clone(),
            squarefree: BigUint::one(),
        });
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(square-free part, coefficient)` in increasing square-free order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    /// The purely rational value, if the sum has no irrational group.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    /// The sum as one signed radical, if at most one group survives.
    pub fn as_single(&self) -> Option<ExactRadical> {
        match self.terms.len() {
            0 => Some(ExactRadical::zero()),
            1 => {
                let (f, c) = self.terms.iter().next().unwrap();
                Some(
                    SurdTerm {
                        coef: c.clone(),
                        squarefree: f.clone(),
                    }
                    .to_radical(),
                )
            }
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(f, c)| ratio_to_f64(c) * f.to_f64().unwrap_or(f64::INFINITY).sqrt())
            .sum()
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (sf, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if sf.is_one() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*sqrt({sf})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zero_has_sign_zero() {
        let z = ExactRadical::new(1, q(0, 1));
        assert_eq!(z.sign(), 0);
        assert_eq!(z, ExactRadical::zero());
        assert_eq!(ExactRadical::from_rational(&q(0, 5)), ExactRadical::zero());
    }

    #[test]
    fn equality_after_normalization() {
        assert_eq!(ExactRadical::sqrt(q(2, 4)), ExactRadical::sqrt(q(1, 2)));
        assert_ne!(ExactRadical::sqrt(q(1, 2)), -ExactRadical::sqrt(q(1, 2)));
    }

    #[test]
    fn rational_folds_into_radicand() {
        let r = ExactRadical::from_rational(&q(-2, 3));
        assert_eq!(r.sign(), -1);
        assert_eq!(r.square(), q(4, 9));
        let x = ExactRadical::sqrt(q(3, 1)).scale(&q(1, 16));
        assert_eq!(x.square(), q(3, 256));
    }

    #[test]
    fn surd_split() {
        // √(8/3) = 2√6 / 3
        let t = ExactRadical::sqrt(q(8, 3)).to_surd();
        assert_eq!(t.coef, q(2, 3));
        assert_eq!(t.squarefree, BigUint::from(6u32));
        assert_eq!(t.to_radical(), ExactRadical::sqrt(q(8, 3)));
    }

    #[test]
    fn surd_product_uses_gcd() {
        let a = ExactRadical::sqrt(q(6, 1)).to_surd();
        let b = ExactRadical::sqrt(q(10, 1)).to_surd();
        let p = &a * &b; // √60 = 2√15
        assert_eq!(p.coef, q(2, 1));
        assert_eq!(p.squarefree, BigUint::from(15u32));
    }

    #[test]
    fn squarefree_of_factorial_products() {
        let n = BigUint::from(2u32 * 2 * 2 * 3 * 5 * 5 * 7);
        let (s, f) = squarefree_decompose(&n);
        assert_eq!(s, BigUint::from(10u32));
        assert_eq!(f, BigUint::from(42u32));
        let big_prime_sq = BigUint::from(1_000_003u64) * BigUint::from(1_000_003u64) * 3u32;
        let (s, f) = squarefree_decompose(&big_prime_sq);
        assert_eq!(s, BigUint::from(1_000_003u64));
        assert_eq!(f, BigUint::from(3u32));
    }

    #[test]
    fn radical_sum_cancels_exactly() {
        let mut s = RadicalSum::new();
        s.add(&ExactRadical::sqrt(q(1, 2)));
        s.add(&ExactRadical::sqrt(q(1, 3)));
        assert_eq!(s.len(), 2);
        assert!(s.as_single().is_none());
        s.add(&-ExactRadical::sqrt(q(2, 4)));
        s.add(&-ExactRadical::sqrt(q(3, 9)));
        assert!(s.is_zero());
        assert_eq!(s.as_rational(), Some(q(0, 1)));
    }

    #[test]
    fn radical_sum_collapses_to_single() {
        let mut s = RadicalSum::new();
        s.add(&ExactRadical::sqrt(q(1, 3)));
        s.add(&ExactRadical::sqrt(q(1, 3)));
        assert_eq!(s.as_single().unwrap(), ExactRadical::sqrt(q(4, 3)));
        assert!((s.to_f64() - 2.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn display_forms() {
        assert_eq!(ExactRadical::zero().to_string(), "0");
        assert_eq!(ExactRadical::sqrt(q(1, 36)).to_string(), "+sqrt(1/36)");
        assert_eq!((-ExactRadical::sqrt(q(3, 1))).to_string(), "-sqrt(3)");
    }
}
