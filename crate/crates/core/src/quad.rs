//! The parameter quadrilateral `(a, b, c, d)` of the symmetric coupling
//! scheme, its two diagonal ranges, Regge conjugation and gauge fixing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::halfint::HalfInt;

/// Sides `(a, b, c, d)`; the diagonal `ℓ` couples `(a, b)` and `(c, d)`,
/// the other diagonal `ℓ̃` couples `(b, c)` and `(a, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadrilateral {
    sides: [HalfInt; 4],
    canonical: bool,
}

/// How [`canonicalize`] reached the representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransformRecord {
    /// `canonical side i = original side permutation[i]` (before any Regge step).
    pub permutation: [usize; 4],
    pub regge: bool,
    /// True when the permutation exchanges the roles of `ℓ` and `ℓ̃`.
    pub swaps_diagonals: bool,
}

impl TransformRecord {
    pub const IDENTITY: TransformRecord = TransformRecord {
        permutation: [0, 1, 2, 3],
        regge: false,
        swaps_diagonals: false,
    };

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

// the dihedral group of the quadrilateral; the first four keep both diagonals
const D4: [([usize; 4], bool); 8] = [
    ([0, 1, 2, 3], false),
    ([2, 3, 0, 1], false),
    ([3, 2, 1, 0], false),
    ([1, 0, 3, 2], false),
    ([1, 2, 3, 0], true),
    ([3, 0, 1, 2], true),
    ([0, 3, 2, 1], true),
    ([2, 1, 0, 3], true),
];

impl Quadrilateral {
    /// A valid quadrilateral: non-negative sides, integer perimeter and a
    /// nonempty `ℓ` range.
    pub fn new(a: HalfInt, b: HalfInt, c: HalfInt, d: HalfInt) -> Result<Self> {
        let q = Quadrilateral {
            sides: [a, b, c, d],
            canonical: false,
        };
        if q.sides.iter().any(|s| s.twice() < 0) {
            return Err(domain(format!("negative side in {q}")));
        }
        if (a + b + c + d).twice() % 2 != 0 {
            return Err(domain(format!("{q}: a+b+c+d is not an integer, no admissible ℓ")));
        }
        let (lo, hi) = q.raw_ell_range();
        if lo > hi {
            return Err(domain(format!("{q}: empty coupling range ({lo} > {hi})")));
        }
        let canonical = q.is_gauge_fixed();
        Ok(Quadrilateral { canonical, ..q })
    }

    pub fn from_twice(t: [i64; 4]) -> Result<Self> {
        let [a, b, c, d] = t.map(HalfInt::from_twice);
        Self::new(a, b, c, d)
    }

    #[inline]
    pub fn sides(&self) -> [HalfInt; 4] {
        self.sides
    }

    pub fn twice(&self) -> [i64; 4] {
        self.sides.map(HalfInt::twice)
    }

    /// Whether the sides satisfy the gauge-fixing conditions.
    #[inline]
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    fn raw_ell_range(&self) -> (HalfInt, HalfInt) {
        let [a, b, c, d] = self.sides;
        ((a - b).abs().max((c - d).abs()), (a + b).min(c + d))
    }

    /// `(ℓmin, ℓmax)`.
    pub fn ell_range(&self) -> (HalfInt, HalfInt) {
        self.raw_ell_range()
    }

    /// `(ℓ̃min, ℓ̃max)`; always the same length as the `ℓ` range.
    pub fn ell_tilde_range(&self) -> (HalfInt, HalfInt) {
        let [a, b, c, d] = self.sides;
        ((b - c).abs().max((a - d).abs()), (b + c).min(a + d))
    }

    pub fn ell_lattice(&self) -> Vec<HalfInt> {
        let (lo, hi) = self.ell_range();
        lo.range_to(hi).collect()
    }

    pub fn ell_tilde_lattice(&self) -> Vec<HalfInt> {
        let (lo, hi) = self.ell_tilde_range();
        lo.range_to(hi).collect()
    }

    pub fn dim(&self) -> usize {
        let (lo, hi) = self.ell_range();
        ((hi - lo).twice() / 2 + 1) as usize
    }

    /// `s = (a+b+c+d)/2`.
    pub fn semi_perimeter(&self) -> HalfInt {
        let t: i64 = self.twice().iter().sum();
        HalfInt::from_twice(t / 2)
    }

    /// Largest side, used to bound sweeps.
    pub fn max_twice(&self) -> i64 {
        *self.twice().iter().max().unwrap()
    }

    /// The same quadrilateral with `ℓ` and `ℓ̃` exchanged: `(a, d, c, b)`.
    pub fn dual(&self) -> Quadrilateral {
        let [a, b, c, d] = self.sides;
        Quadrilateral::new(a, d, c, b).expect("dual of a valid quadrilateral")
    }

    fn permuted(&self, p: [usize; 4]) -> [HalfInt; 4] {
        p.map(|i| self.sides[i])
    }

    fn is_gauge_fixed(&self) -> bool {
        let [a, b, c, d] = self.sides;
        let s = self.semi_perimeter();
        let octet_min = self
            .sides
            .iter()
            .map(|&x| x.min(s - x))
            .min()
            .unwrap();
        a == octet_min && a <= b && b <= d && d - (b - a) <= c && c <= d + (b - a)
    }
}

impl fmt::Display for Quadrilateral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.sides;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// `(s−a, s−b, s−c, s−d)` with `s` the semi-perimeter.
///
/// Both coupling ranges are preserved, so the image is valid whenever `q` is.
pub fn regge_conjugate(q: &Quadrilateral) -> Result<Quadrilateral> {
    let total: i64 = q.twice().iter().sum();
    if total % 2 != 0 {
        return Err(domain(format!("{q}: odd perimeter parity, s−x is not a half-integer")));
    }
    let s = HalfInt::from_twice(total / 2);
    let [a, b, c, d] = q.sides();
    Quadrilateral::new(s - a, s - b, s - c, s - d)
}

/// Gauge-fixed representative under the dihedral symmetries of the
/// quadrilateral combined with Regge conjugation.
///
/// The first matching candidate in a fixed enumeration order is returned, so
/// an already canonical input maps to itself with the identity record.
pub fn canonicalize(q: &Quadrilateral) -> Result<(Quadrilateral, TransformRecord)> {
    let (lo, hi) = q.ell_range();
    if lo > hi {
        return Err(domain(format!("{q}: empty coupling range")));
    }
    for regge in [false, true] {
        let base = if regge { regge_conjugate(q)? } else { *q };
        for &(perm, swaps) in &D4 {
            let [a, b, c, d] = base.permuted(perm);
            let cand = Quadrilateral::new(a, b, c, d)?;
            if cand.canonical {
                let record = TransformRecord {
                    permutation: perm,
                    regge,
                    swaps_diagonals: swaps,
                };
                return Ok((cand, record));
            }
        }
    }
    Err(crate::error::Error::Structural(format!(
        "{q}: no gauge-fixed representative found"
    )))
}

/// All gauge-fixed quadrilaterals with every side `≤ max_twice / 2`.
pub fn canonical_quadrilaterals(max_twice: i64) -> Vec<Quadrilateral> {
    let mut out = Vec::new();
    for a in 0..=max_twice {
        for b in a..=max_twice {
            for d in b..=max_twice {
                for c in 0..=max_twice {
                    if let Ok(q) = Quadrilateral::from_twice([a, b, c, d]) {
                        if q.canonical {
                            out.push(q);
                        }
                    }
                }
            }
        }
    }
    out
}

/// All valid quadrilaterals with every side `≤ max_twice / 2`.
pub fn all_quadrilaterals(max_twice: i64) -> Vec<Quadrilateral> {
    let mut out = Vec::new();
    for a in 0..=max_twice {
        for b in 0..=max_twice {
            for c in 0..=max_twice {
                for d in 0..=max_twice {
                    if let Ok(q) = Quadrilateral::from_twice([a, b, c, d]) {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(t: [i64; 4]) -> Quadrilateral {
        Quadrilateral::from_twice(t).unwrap()
    }

    #[test]
    fn regge_examples() {
        assert_eq!(regge_conjugate(&quad([2, 2, 2, 2])).unwrap(), quad([2, 2, 2, 2]));
        assert_eq!(regge_conjugate(&quad([2, 3, 3, 4])).unwrap(), quad([4, 3, 3, 2]));
        assert_eq!(regge_conjugate(&quad([1, 1, 1, 3])).unwrap(), quad([2, 2, 2, 0]));
    }

    #[test]
    fn ranges() {
        let q = quad([2, 2, 2, 2]);
        assert_eq!(q.dim(), 3);
        assert_eq!(q.ell_range(), (HalfInt::ZERO, HalfInt::from_int(2)));
        assert!(Quadrilateral::from_twice([1, 1, 1, 5]).is_err());
        assert!(Quadrilateral::from_twice([1, 1, 1, 2]).is_err());
    }

    #[test]
    fn all_half_is_canonical() {
        let q = quad([1, 1, 1, 1]);
        assert!(q.is_canonical());
        let (c, rec) = canonicalize(&q).unwrap();
        assert_eq!(c, q);
        assert!(rec.is_identity());
    }

    #[test]
    fn canonicalize_example() {
        let (c, _) = canonicalize(&quad([4, 3, 2, 3])).unwrap();
        let [a, b, cc, d] = c.sides();
        assert!(a <= b && b <= d);
        assert!(d - (b - a) <= cc && cc <= d + (b - a));
    }

    #[test]
    fn canonical_representative_is_unique_per_class() {
        for q in all_quadrilaterals(6) {
            let (c, rec) = canonicalize(&q).unwrap();
            assert!(c.is_canonical());
            assert_eq!(c.dim(), q.dim());
            assert_eq!(canonicalize(&c).unwrap().0, c);
            // the representative is reached from every orbit member
            let r = regge_conjugate(&q).unwrap();
            assert_eq!(canonicalize(&r).unwrap().0, c, "{q} vs Regge image {r}");
            assert_eq!(canonicalize(&q.dual()).unwrap().0, c);
            let _ = rec;
        }
    }
}
