//! Exact Wigner 3j and 6j symbols, triangle conditions and the 144-element
//! classical + Regge symmetry group of the 6j.
//!
//! All routines work on twice-valued integers internally; every factorial
//! argument below is an integer once the triangle/parity checks pass.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::halfint::HalfInt;
use crate::quad::Quadrilateral;
use crate::radical::ExactRadical;

const FACTORIAL_TABLE: usize = 256;

fn factorial_table() -> &'static [BigInt] {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(FACTORIAL_TABLE);
        let mut acc = BigInt::one();
        v.push(acc.clone());
        for n in 1..FACTORIAL_TABLE {
            acc *= n;
            v.push(acc.clone());
        }
        v
    })
}

/// `n!` for `n ≥ 0`.
pub fn factorial(n: i64) -> BigInt {
    assert!(n >= 0, "factorial of negative {n}");
    let table = factorial_table();
    let n = n as usize;
    if n < table.len() {
        return table[n].clone();
    }
    let mut acc = table[table.len() - 1].clone();
    for k in table.len()..=n {
        acc *= k;
    }
    acc
}

fn frac(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// |a−b| ≤ c ≤ a+b and a+b+c integer.
pub fn triangle_ok(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    triangle_twice(a.twice(), b.twice(), c.twice())
}

pub(crate) fn triangle_twice(a: i64, b: i64, c: i64) -> bool {
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// Δ(abc)² = (a+b−c)!(a−b+c)!(−a+b+c)!/(a+b+c+1)!, twice-valued inputs.
fn delta_squared(a: i64, b: i64, c: i64) -> BigRational {
    let num = factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((-a + b + c) / 2);
    frac(num, factorial((a + b + c) / 2 + 1))
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)` by the Racah single-sum formula.
///
/// Zero when `m1+m2+m3 ≠ 0`, when a projection exceeds its spin, or when the
/// triangle condition fails. A projection whose parity differs from its spin
/// is a domain error.
pub fn wigner_3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<ExactRadical> {
    let [tj1, tj2, tj3] = [j1.twice(), j2.twice(), j3.twice()];
    let [tm1, tm2, tm3] = [m1.twice(), m2.twice(), m3.twice()];
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        if j.twice() < 0 {
            return Err(domain(format!("negative spin {j}")));
        }
        if !j.same_parity(m) {
            return Err(domain(format!("projection {m} has a different parity from spin {j}")));
        }
    }
    if tm1 + tm2 + tm3 != 0
        || tm1.abs() > tj1
        || tm2.abs() > tj2
        || tm3.abs() > tj3
        || !triangle_twice(tj1, tj2, tj3)
    {
        return Ok(ExactRadical::zero());
    }
    // everything below is an integer count
    let j1pj2mj3 = (tj1 + tj2 - tj3) / 2;
    let j1mm1 = (tj1 - tm1) / 2;
    let j2pm2 = (tj2 + tm2) / 2;
    let j3mj2pm1 = (tj3 - tj2 + tm1) / 2;
    let j3mj1mm2 = (tj3 - tj1 - tm2) / 2;
    let kmin = 0.max(-j3mj2pm1).max(-j3mj1mm2);
    let kmax = j1pj2mj3.min(j1mm1).min(j2pm2);

    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = factorial(k)
            * factorial(j1pj2mj3 - k)
            * factorial(j1mm1 - k)
            * factorial(j2pm2 - k)
            * factorial(j3mj2pm1 + k)
            * factorial(j3mj1mm2 + k);
        let term = frac(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(ExactRadical::zero());
    }
    let projections = factorial((tj1 + tm1) / 2)
        * factorial((tj1 - tm1) / 2)
        * factorial((tj2 + tm2) / 2)
        * factorial((tj2 - tm2) / 2)
        * factorial((tj3 + tm3) / 2)
        * factorial((tj3 - tm3) / 2);
    let radicand = delta_squared(tj1, tj2, tj3) * BigRational::from_integer(projections) * &sum * &sum;
    let phase_odd = ((tj1 - tj2 - tm3) / 2).rem_euclid(2) == 1;
    let sign = sign_of(&sum) * if phase_odd { -1 } else { 1 };
    Ok(ExactRadical::new(sign, radicand))
}

/// Arguments of a 6j symbol in the array layout `{j1 j2 j12 / j3 j4 j23}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SixJArgs(pub [HalfInt; 6]);

impl SixJArgs {
    pub fn new(top: [HalfInt; 3], bottom: [HalfInt; 3]) -> Self {
        SixJArgs([top[0], top[1], top[2], bottom[0], bottom[1], bottom[2]])
    }

    pub fn from_twice(t: [i64; 6]) -> Self {
        SixJArgs(t.map(HalfInt::from_twice))
    }

    pub fn twice(&self) -> [i64; 6] {
        self.0.map(HalfInt::twice)
    }

    pub fn top(&self) -> [HalfInt; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    pub fn bottom(&self) -> [HalfInt; 3] {
        [self.0[3], self.0[4], self.0[5]]
    }

    /// The four triads `{j1 j2 j12}`, `{j3 j4 j12}`, `{j1 j4 j23}`, `{j2 j3 j23}`
    /// (twice-valued).
    pub fn triads(&self) -> [[i64; 3]; 4] {
        let [a, b, c, d, e, f] = self.twice();
        [[a, b, c], [d, e, c], [a, e, f], [b, d, f]]
    }

    pub fn is_admissible(&self) -> bool {
        self.triads().iter().all(|t| triangle_twice(t[0], t[1], t[2]))
    }

    /// The quadrilateral `(j1, j2, j3, j4)` with `ℓ = j12` and `ℓ̃ = j23`.
    pub fn as_quadrilateral_labels(&self) -> ([HalfInt; 4], HalfInt, HalfInt) {
        let j = self.0;
        ([j[0], j[1], j[3], j[4]], j[2], j[5])
    }
}

impl fmt::Display for SixJArgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = self.0;
        write!(f, "{{{} {} {} / {} {} {}}}", j[0], j[1], j[2], j[3], j[4], j[5])
    }
}

/// Wigner 6j symbol by the Racah single-sum formula; zero for any failed triad.
pub fn wigner_6j(args: &SixJArgs) -> ExactRadical {
    if !args.is_admissible() {
        return ExactRadical::zero();
    }
    let [j1, j2, j3, j4, j5, j6] = args.twice();
    // triad sums (a) and the three row-pair sums (b), in integer units
    let a = [
        (j1 + j2 + j3) / 2,
        (j1 + j5 + j6) / 2,
        (j4 + j2 + j6) / 2,
        (j4 + j5 + j3) / 2,
    ];
    let b = [
        (j1 + j2 + j4 + j5) / 2,
        (j2 + j3 + j5 + j6) / 2,
        (j3 + j1 + j6 + j4) / 2,
    ];
    let tmin = *a.iter().max().unwrap();
    let tmax = *b.iter().min().unwrap();
    let mut sum = BigRational::zero();
    for t in tmin..=tmax {
        let mut den = BigInt::one();
        for &ai in &a {
            den *= factorial(t - ai);
        }
        for &bj in &b {
            den *= factorial(bj - t);
        }
        let term = frac(factorial(t + 1), den);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return ExactRadical::zero();
    }
    let deltas = delta_squared(j1, j2, j3)
        * delta_squared(j1, j5, j6)
        * delta_squared(j4, j2, j6)
        * delta_squared(j4, j5, j3);
    let sign = sign_of(&sum);
    ExactRadical::new(sign, deltas * &sum * &sum)
}

/// Recoupling coefficient `⟨ℓ̃|ℓ⟩ = (−1)^(a+b+c+d) √((2ℓ+1)(2ℓ̃+1)) {a b ℓ / c d ℓ̃}`.
///
/// Zero outside the admissible `ℓ`/`ℓ̃` ranges of `q`.
pub fn overlap_coefficient(ell: HalfInt, ell_tilde: HalfInt, q: &Quadrilateral) -> ExactRadical {
    let [a, b, c, d] = q.sides();
    let sixj = wigner_6j(&SixJArgs::new([a, b, ell], [c, d, ell_tilde]));
    if sixj.is_zero() {
        return sixj;
    }
    let weight = BigRational::from_integer(BigInt::from(ell.multiplicity() * ell_tilde.multiplicity()));
    let mut v = &sixj * &ExactRadical::sqrt(weight);
    if (a + b + c + d).twice().rem_euclid(4) == 2 {
        v = -v;
    }
    v
}

/// Exact recoupling matrix `⟨ℓ̃|ℓ⟩` of `q`: rows `ℓ̃`, columns `ℓ`.
pub fn recoupling_matrix(q: &Quadrilateral) -> Vec<Vec<ExactRadical>> {
    let ells = q.ell_lattice();
    q.ell_tilde_lattice()
        .into_iter()
        .map(|lt| ells.iter().map(|&l| overlap_coefficient(l, lt, q)).collect())
        .collect()
}

/// Float image of [`recoupling_matrix`].
pub fn recoupling_matrix_f64(q: &Quadrilateral) -> nalgebra::DMatrix<f64> {
    let exact = recoupling_matrix(q);
    let n = exact.len();
    nalgebra::DMatrix::from_fn(n, n, |t, l| exact[t][l].to_f64())
}

/// The Regge map with the third column fixed:
/// `{a b ℓ / c d ℓ̃} ↦ {s−a s−b ℓ / s−c s−d ℓ̃}`, `s = (a+b+c+d)/2`.
///
/// `None` when `s` is not a half-integer or a mapped entry would be negative.
pub fn regge_map(args: &SixJArgs) -> Option<SixJArgs> {
    let [a, b, l, c, d, lt] = args.twice();
    let sum = a + b + c + d;
    if sum % 2 != 0 {
        return None;
    }
    let s = sum / 2;
    let out = [s - a, s - b, l, s - c, s - d, lt];
    if out.iter().any(|&x| x < 0) {
        return None;
    }
    Some(SixJArgs::from_twice(out))
}

/// Every admissible argument set with all entries `≤ max_twice / 2`, in
/// lexicographic order of twice-values.
pub fn admissible_sixj(max_twice: i64) -> Vec<SixJArgs> {
    let r = 0..=max_twice;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                if !triangle_twice(a, b, c) {
                    continue;
                }
                for d in r.clone() {
                    for e in r.clone() {
                        if !triangle_twice(d, e, c) {
                            continue;
                        }
                        for f in r.clone() {
                            if triangle_twice(a, e, f) && triangle_twice(b, d, f) {
                                out.push(SixJArgs::from_twice([a, b, c, d, e, f]));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// The 24 classical (tetrahedral) images: column permutations times
/// upper/lower swaps in pairs of columns.
pub fn classical_images(args: &SixJArgs) -> [SixJArgs; 24] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    const FLIPS: [[bool; 3]; 4] = [
        [false, false, false],
        [true, true, false],
        [true, false, true],
        [false, true, true],
    ];
    let top = args.top();
    let bot = args.bottom();
    let mut out = [*args; 24];
    let mut i = 0;
    for p in PERMS {
        for fl in FLIPS {
            let mut t = [HalfInt::ZERO; 3];
            let mut u = [HalfInt::ZERO; 3];
            for col in 0..3 {
                let (x, y) = (top[p[col]], bot[p[col]]);
                if fl[col] {
                    t[col] = y;
                    u[col] = x;
                } else {
                    t[col] = x;
                    u[col] = y;
                }
            }
            out[i] = SixJArgs::new(t, u);
            i += 1;
        }
    }
    out
}

/// Orbit of `args` under the group generated by the classical symmetries and
/// the Regge map. Its size divides 144.
pub fn symmetry_orbit(args: &SixJArgs) -> BTreeSet<SixJArgs> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![*args];
    while let Some(x) = stack.pop() {
        if !seen.insert(x) {
            continue;
        }
        for y in classical_images(&x) {
            if !seen.contains(&y) {
                stack.push(y);
            }
        }
        if let Some(y) = regge_map(&x) {
            if !seen.contains(&y) {
                stack.push(y);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn triangle_examples() {
        assert!(triangle_ok(h(1), h(1), h(2)));
        assert!(!triangle_ok(h(1), h(1), h(3)));
        assert!(!triangle_ok(h(2), h(1), h(2)));
    }

    #[test]
    fn threej_examples() {
        let z = h(0);
        assert_eq!(wigner_3j(z, z, z, z, z, z).unwrap(), ExactRadical::one());
        let v = wigner_3j(h(2), h(2), z, h(2), h(-2), z).unwrap();
        assert_eq!(v, ExactRadical::sqrt(q(1, 3)));
        let v = wigner_3j(h(1), h(1), h(2), h(1), h(1), h(-2)).unwrap();
        assert_eq!(v, -ExactRadical::sqrt(q(1, 3)));
    }

    #[test]
    fn threej_selection_and_parity() {
        assert!(wigner_3j(h(2), h(2), h(2), h(2), h(0), h(0)).unwrap().is_zero());
        assert!(wigner_3j(h(2), h(2), h(6), h(0), h(0), h(0)).unwrap().is_zero());
        assert!(wigner_3j(h(2), h(2), h(2), h(1), h(-1), h(0)).is_err());
        // (1 1 1; 0 0 0) vanishes by the odd-sum rule
        assert!(wigner_3j(h(2), h(2), h(2), h(0), h(0), h(0)).unwrap().is_zero());
    }

    #[test]
    fn sixj_known_values() {
        let all_one = SixJArgs::from_twice([2; 6]);
        assert_eq!(wigner_6j(&all_one), ExactRadical::sqrt(q(1, 36)));
        // {1/2 1/2 0 / 1/2 1/2 0} = -1/2
        let v = wigner_6j(&SixJArgs::from_twice([1, 1, 0, 1, 1, 0]));
        assert_eq!(v, -ExactRadical::sqrt(q(1, 4)));
        // {1/2 1/2 1 / 1/2 1/2 1} = 1/6
        let v = wigner_6j(&SixJArgs::from_twice([1, 1, 2, 1, 1, 2]));
        assert_eq!(v, ExactRadical::sqrt(q(1, 36)));
    }

    #[test]
    fn sixj_failed_triad_is_zero() {
        assert!(wigner_6j(&SixJArgs::from_twice([2, 2, 6, 2, 2, 2])).is_zero());
        assert!(wigner_6j(&SixJArgs::from_twice([2, 2, 1, 2, 2, 2])).is_zero());
    }

    #[test]
    fn sixj_with_zero_entry_closed_form() {
        // {a b c / 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1))
        for a in 0..=6i64 {
            for b in 0..=6i64 {
                for c in 0..=6i64 {
                    if !triangle_twice(a, b, c) {
                        continue;
                    }
                    let v = wigner_6j(&SixJArgs::from_twice([a, b, c, 0, c, b]));
                    let sign = if ((a + b + c) / 2) % 2 == 0 { 1 } else { -1 };
                    let expect = ExactRadical::new(sign, q(1, (b + 1) * (c + 1)));
                    assert_eq!(v, expect, "a={a} b={b} c={c}");
                }
            }
        }
    }

    #[test]
    fn regge_fixes_value() {
        let x = SixJArgs::from_twice([4, 6, 8, 10, 6, 8]);
        let y = regge_map(&x).unwrap();
        assert_ne!(x, y);
        assert_eq!(wigner_6j(&x), wigner_6j(&y));
        assert_eq!(regge_map(&y).unwrap(), x);
    }

    #[test]
    fn fully_symmetric_orbit_is_trivial() {
        let orbit = symmetry_orbit(&SixJArgs::from_twice([2; 6]));
        assert_eq!(orbit.len(), 1);
    }

    #[test]
    fn orbit_sizes_divide_group_order() {
        for t in [[4, 6, 8, 10, 6, 8], [1, 3, 4, 5, 2, 3], [2, 4, 6, 4, 6, 8]] {
            let args = SixJArgs::from_twice(t);
            let orbit = symmetry_orbit(&args);
            assert_eq!(144 % orbit.len(), 0, "{args}: {}", orbit.len());
            let v = wigner_6j(&args);
            assert!(orbit.iter().all(|o| wigner_6j(o) == v));
        }
    }

    #[test]
    fn factorial_beyond_table() {
        let f300 = factorial(300);
        assert_eq!(f300, factorial(299) * 300);
    }
}
