//! Exact Clebsch–Gordan coefficients and 6j contraction.

use std::collections::HashMap;

use num_rational::BigRational;
use recoupling::{ExactRadical, RadicalSum, SixJArgs};

fn sqrt_int(n: i64) -> ExactRadical {
    ExactRadical::sqrt(BigRational::from_integer(n.into()))
}

fn recip(r: &ExactRadical) -> ExactRadical {
    assert!(!r.is_zero(), "division by zero");
    ExactRadical::new(r.sign(), r.radicand().recip())
}

/// `√((j∓m)(j±m+1))` in twice-units: the ladder factor from `m` to `m±1`.
fn ladder(tj: i64, tm: i64, up: bool) -> ExactRadical {
    let (a, b) = if up { (tj - tm, tj + tm + 2) } else { (tj + tm, tj - tm + 2) };
    // (a/2)(b/2) = ab/4
    ExactRadical::sqrt(BigRational::new((a * b).into(), 4.into()))
}

fn single(sum: RadicalSum) -> ExactRadical {
    sum.as_single().expect("coefficient is not a single radical")
}

/// `⟨j1 m1 j2 m2 | J M⟩` for fixed `(j1, j2)`, keyed by twice-valued `(J, M, m1)`.
pub fn cg_table(tj1: i64, tj2: i64) -> HashMap<(i64, i64, i64), ExactRadical> {
    let mut out = HashMap::new();
    let mut tjj = tj1 + tj2;
    while tjj >= (tj1 - tj2).abs() {
        // highest weight: J+ annihilates, ⟨j1 j1 j2 J−j1|J J⟩ > 0
        let mut state: HashMap<i64, ExactRadical> = HashMap::new();
        let mut tm1 = tj1;
        let mut c = ExactRadical::one();
        loop {
            let tm2 = tjj - tm1;
            if tm2 > tj2 || tm1 < -tj1 {
                break;
            }
            state.insert(tm1, c.clone());
            // J1+ at (m1−1, m2+1) and J2+ at (m1, m2) both land on (m1, m2+1)
            let next_m1 = tm1 - 2;
            if next_m1 < -tj1 || tjj - next_m1 > tj2 {
                break;
            }
            let a1 = ladder(tj1, next_m1, true);
            let a2 = ladder(tj2, tm2, true);
            c = -(&(&c * &a2) * &recip(&a1));
            tm1 = next_m1;
        }
        let mut norm = RadicalSum::new();
        for v in state.values() {
            norm.add(&(v * v));
        }
        let norm = norm.as_rational().expect("rational norm");
        let scale = ExactRadical::sqrt(norm.recip());
        for v in state.values_mut() {
            *v = &*v * &scale;
        }
        let mut tmm = tjj;
        loop {
            for (&m1, v) in &state {
                out.insert((tjj, tmm, m1), v.clone());
            }
            if tmm == -tjj {
                break;
            }
            // lower: J−|J M⟩ = √((J+M)(J−M+1)) |J M−1⟩
            let norm = recip(&ladder(tjj, tmm, false));
            let mut next: HashMap<i64, ExactRadical> = HashMap::new();
            let new_m = tmm - 2;
            for m1 in (-tj1..=tj1).step_by(2) {
                let m2 = new_m - m1;
                if m2.abs() > tj2 {
                    continue;
                }
                let mut s = RadicalSum::new();
                if let Some(c) = state.get(&(m1 + 2)) {
                    s.add(&(c * &ladder(tj1, m1 + 2, false)));
                }
                if let Some(c) = state.get(&m1) {
                    s.add(&(c * &ladder(tj2, m2 + 2, false)));
                }
                let v = &single(s) * &norm;
                if !v.is_zero() {
                    next.insert(m1, v);
                }
            }
            state = next;
            tmm = new_m;
        }
        tjj -= 2;
    }
    out
}

/// All 3j symbols with spins up to `max_twice / 2`, from the CG tables.
pub struct ThreeJTable {
    values: HashMap<[i64; 6], ExactRadical>,
}

impl ThreeJTable {
    pub fn new(max_twice: i64) -> Self {
        let mut values = HashMap::new();
        for tj1 in 0..=max_twice {
            for tj2 in 0..=max_twice {
                for ((tj3, tmm, tm1), cg) in cg_table(tj1, tj2) {
                    if tj3 > max_twice {
                        continue;
                    }
                    let tm2 = tmm - tm1;
                    let tm3 = -tmm;
                    // (j1 j2 j3; m1 m2 m3) = (−1)^(j1−j2−m3) ⟨j1 m1 j2 m2|j3 −m3⟩ / √(2j3+1)
                    let mut v = &cg * &recip(&sqrt_int(tj3 + 1));
                    if ((tj1 - tj2 - tm3) / 2).rem_euclid(2) == 1 {
                        v = -v;
                    }
                    values.insert([tj1, tj2, tj3, tm1, tm2, tm3], v);
                }
            }
        }
        ThreeJTable { values }
    }

    /// Zero when absent (selection rules).
    pub fn get(&self, key: [i64; 6]) -> ExactRadical {
        self.values.get(&key).cloned().unwrap_or_else(ExactRadical::zero)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `{j1 j2 j3 / j4 j5 j6}` as the contraction
    /// `Σ (−1)^{Σ(j−m)} (j1 j2 j3; −m1 −m2 −m3)(j1 j5 j6; m1 −m5 m6)
    ///   (j4 j2 j6; m4 m2 −m6)(j4 j5 j3; −m4 m5 m3)`.
    ///
    /// `None` if the exact sum is not a single radical.
    pub fn sixj(&self, args: &SixJArgs) -> Option<ExactRadical> {
        let [j1, j2, j3, j4, j5, j6] = args.twice();
        let jsum: i64 = j1 + j2 + j3 + j4 + j5 + j6;
        let mut total = RadicalSum::new();
        for m1 in (-j1..=j1).step_by(2) {
            for m2 in (-j2..=j2).step_by(2) {
                let m3 = -m1 - m2;
                if m3.abs() > j3 {
                    continue;
                }
                let a = self.get([j1, j2, j3, -m1, -m2, -m3]);
                if a.is_zero() {
                    continue;
                }
                for m5 in (-j5..=j5).step_by(2) {
                    let m6 = m5 - m1;
                    let m4 = m6 - m2;
                    if m6.abs() > j6 || m4.abs() > j4 {
                        continue;
                    }
                    let b = self.get([j1, j5, j6, m1, -m5, m6]);
                    let c = self.get([j4, j2, j6, m4, m2, -m6]);
                    let d = self.get([j4, j5, j3, -m4, m5, m3]);
                    if b.is_zero() || c.is_zero() || d.is_zero() {
                        continue;
                    }
                    let mut p = &(&a * &b) * &(&c * &d);
                    let msum = m1 + m2 + m3 + m4 + m5 + m6;
                    if ((jsum - msum) / 2).rem_euclid(2) == 1 {
                        p = -p;
                    }
                    total.add(&p);
                }
            }
        }
        total.as_single()
    }
}
