//! Racah, Hahn and dual Hahn polynomials: terminating hypergeometric
//! evaluation, weights, norms, three-term recurrences and the 6j ↔ Racah
//! dictionary.

use serde::{Deserialize, Serialize};

use crate::angmom::{wigner_6j, SixJArgs};
use crate::error::{domain, Error, Result};
use crate::halfint::HalfInt;
use crate::quad::Quadrilateral;

/// Family and parameters; `n_max` is the finite size `N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum HypergeomParams {
    /// `₄F₃(−n, n+α+β+1, −x, x+γ+δ+1; α+1, β+δ+1, γ+1; 1)` on `λ(x) = x(x+γ+δ+1)`.
    Racah { alpha: f64, beta: f64, gamma: f64, delta: f64, n_max: u32 },
    /// `₃F₂(−n, n+α+β+1, −x; α+1, −N; 1)` on the linear lattice `x`.
    Hahn { alpha: f64, beta: f64, n_max: u32 },
    /// `₃F₂(−n, −x, x+γ+δ+1; γ+1, −N; 1)` on `λ(x) = x(x+γ+δ+1)`.
    DualHahn { gamma: f64, delta: f64, n_max: u32 },
}

/// Neumaier's compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `(a)_k = a(a+1)…(a+k−1)`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

fn factorial_f64(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

fn is_neg_int(v: f64, n: u32) -> bool {
    (v + n as f64).abs() < 1e-9
}

impl HypergeomParams {
    pub fn n_max(&self) -> u32 {
        match *self {
            HypergeomParams::Racah { n_max, .. }
            | HypergeomParams::Hahn { n_max, .. }
            | HypergeomParams::DualHahn { n_max, .. } => n_max,
        }
    }

    /// Checks the finiteness condition of the family.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            HypergeomParams::Racah { alpha, beta, gamma, delta, n_max } => {
                is_neg_int(alpha + 1.0, n_max) || is_neg_int(beta + delta + 1.0, n_max) || is_neg_int(gamma + 1.0, n_max)
            }
            HypergeomParams::Hahn { alpha, beta, .. } => alpha > -1.0 && beta > -1.0,
            HypergeomParams::DualHahn { gamma, delta, .. } => gamma > -1.0 && delta > -1.0,
        };
        let finite = match *self {
            HypergeomParams::Racah { alpha, beta, gamma, delta, .. } => [alpha, beta, gamma, delta].iter().all(|v| v.is_finite()),
            HypergeomParams::Hahn { alpha, beta, .. } => alpha.is_finite() && beta.is_finite(),
            HypergeomParams::DualHahn { gamma, delta, .. } => gamma.is_finite() && delta.is_finite(),
        };
        if ok && finite {
            Ok(())
        } else {
            Err(domain(format!("inadmissible parameters {self:?}")))
        }
    }

    /// Lattice value: `x(x+γ+δ+1)` for Racah and dual Hahn, `x` for Hahn.
    pub fn lattice(&self, x: u32) -> f64 {
        let x = x as f64;
        match *self {
            HypergeomParams::Racah { gamma, delta, .. } | HypergeomParams::DualHahn { gamma, delta, .. } => {
                x * (x + gamma + delta + 1.0)
            }
            HypergeomParams::Hahn { .. } => x,
        }
    }

    fn series(&self, n: u32, x: u32) -> (Vec<f64>, Vec<f64>) {
        let (n, xf) = (n as f64, x as f64);
        match *self {
            HypergeomParams::Racah { alpha, beta, gamma, delta, .. } => (
                vec![-n, n + alpha + beta + 1.0, -xf, xf + gamma + delta + 1.0],
                vec![alpha + 1.0, beta + delta + 1.0, gamma + 1.0],
            ),
            HypergeomParams::Hahn { alpha, beta, n_max } => (
                vec![-n, n + alpha + beta + 1.0, -xf],
                vec![alpha + 1.0, -(n_max as f64)],
            ),
            HypergeomParams::DualHahn { gamma, delta, n_max } => (
                vec![-n, -xf, xf + gamma + delta + 1.0],
                vec![gamma + 1.0, -(n_max as f64)],
            ),
        }
    }

    /// `σ` in `σ·λ(x) p_n + A_n p_{n+1} − (A_n + C_n) p_n + C_n p_{n−1} = 0`:
    /// `−1` for Racah and dual Hahn, `+1` for Hahn.
    pub fn recurrence_sign(&self) -> f64 {
        match self {
            HypergeomParams::Hahn { .. } => 1.0,
            _ => -1.0,
        }
    }

    /// `(A_n, C_n)` of the three-term recurrence (see [`Self::recurrence_sign`]).
    pub fn recurrence_coefficients(&self, n: u32) -> (f64, f64) {
        let n = n as f64;
        match *self {
            HypergeomParams::Racah { alpha: a, beta: b, gamma: g, delta: d, .. } => {
                let s = 2.0 * n + a + b;
                let big_a = (n + a + 1.0) * (n + a + b + 1.0) * (n + b + d + 1.0) * (n + g + 1.0) / ((s + 1.0) * (s + 2.0));
                let big_c = if n == 0.0 {
                    0.0
                } else {
                    n * (n + a + b - g) * (n + a - d) * (n + b) / (s * (s + 1.0))
                };
                (big_a, big_c)
            }
            HypergeomParams::Hahn { alpha: a, beta: b, n_max } => {
                let nn = n_max as f64;
                let s = 2.0 * n + a + b;
                let big_a = (n + a + b + 1.0) * (n + a + 1.0) * (nn - n) / ((s + 1.0) * (s + 2.0));
                let big_c = if n == 0.0 {
                    0.0
                } else {
                    n * (n + a + b + nn + 1.0) * (n + b) / (s * (s + 1.0))
                };
                (big_a, big_c)
            }
            HypergeomParams::DualHahn { gamma: g, delta: d, n_max } => {
                let nn = n_max as f64;
                ((n + g + 1.0) * (n - nn), n * (n - d - nn - 1.0))
            }
        }
    }

    /// Orthogonality weight at lattice index `x`.
    pub fn weight(&self, x: u32) -> f64 {
        let xf = x as f64;
        match *self {
            HypergeomParams::Racah { alpha: a, beta: b, gamma: g, delta: d, .. } => {
                let mut w = 1.0;
                for i in 0..x {
                    let i = i as f64;
                    w *= (a + 1.0 + i) * (b + d + 1.0 + i) * (g + 1.0 + i) * (g + d + 1.0 + i)
                        / ((-a + g + d + 1.0 + i) * (-b + g + 1.0 + i) * (d + 1.0 + i) * (i + 1.0));
                }
                w * (g + d + 1.0 + 2.0 * xf) / (g + d + 1.0)
            }
            HypergeomParams::Hahn { alpha: a, beta: b, n_max } => {
                pochhammer(a + 1.0, x) / factorial_f64(x) * pochhammer(b + 1.0, n_max - x) / factorial_f64(n_max - x)
            }
            HypergeomParams::DualHahn { gamma: g, delta: d, n_max } => {
                let nn = n_max as f64;
                let sign = if x.is_multiple_of(2) { 1.0 } else { -1.0 };
                (2.0 * xf + g + d + 1.0) * pochhammer(g + 1.0, x) * pochhammer(-nn, x) * factorial_f64(n_max)
                    / (sign * pochhammer(xf + g + d + 1.0, n_max + 1) * pochhammer(d + 1.0, x) * factorial_f64(x))
            }
        }
    }

    /// `Σ_x w(x) p_n(x)²`.
    pub fn norm(&self, n: u32) -> Result<f64> {
        let nf = n as f64;
        Ok(match *self {
            HypergeomParams::Racah { alpha: a, beta: b, gamma: g, delta: d, n_max } => {
                let big_m = if is_neg_int(g + 1.0, n_max) {
                    pochhammer(a + b + 2.0, n_max) * pochhammer(-d, n_max)
                        / (pochhammer(a - d + 1.0, n_max) * pochhammer(b + 1.0, n_max))
                } else if is_neg_int(a + 1.0, n_max) {
                    pochhammer(b + 1.0, n_max) * pochhammer(g + d + 2.0, n_max)
                        / (pochhammer(g - b + 1.0, n_max) * pochhammer(d + 1.0, n_max))
                } else {
                    return Err(domain("closed-form Racah norm needs γ+1 = −N or α+1 = −N"));
                };
                big_m * pochhammer(nf + a + b + 1.0, n) * pochhammer(a + b - g + 1.0, n) * pochhammer(a - d + 1.0, n)
                    * pochhammer(b + 1.0, n)
                    * factorial_f64(n)
                    / (pochhammer(a + b + 2.0, 2 * n) * pochhammer(a + 1.0, n) * pochhammer(b + d + 1.0, n) * pochhammer(g + 1.0, n))
            }
            HypergeomParams::Hahn { alpha: a, beta: b, n_max } => {
                let nn = n_max as f64;
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * pochhammer(nf + a + b + 1.0, n_max + 1) * pochhammer(b + 1.0, n) * factorial_f64(n)
                    / ((2.0 * nf + a + b + 1.0) * pochhammer(a + 1.0, n) * pochhammer(-nn, n) * factorial_f64(n_max))
            }
            HypergeomParams::DualHahn { gamma: g, delta: d, n_max } => {
                let binom = |top: f64, k: u32| pochhammer(top - k as f64 + 1.0, k) / factorial_f64(k);
                1.0 / (binom(g + nf, n) * binom(d + (n_max - n) as f64, n_max - n))
            }
        })
    }
}

/// Evaluates `p_n` at lattice index `x ∈ {0, …, N}`.
pub fn eval_poly(p: &HypergeomParams, n: u32, x: u32) -> Result<f64> {
    p.validate()?;
    if n > p.n_max() || x > p.n_max() {
        return Err(domain(format!("n = {n}, x = {x} outside 0..={}", p.n_max())));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let (num, den) = p.series(n, x);
    let mut sum = CompensatedSum::default();
    let mut term = 1.0;
    sum.add(term);
    for k in 0..n.min(x) {
        let kf = k as f64;
        let mut ratio = 1.0 / (kf + 1.0);
        for a in &num {
            ratio *= a + kf;
        }
        for b in &den {
            ratio /= b + kf;
        }
        term *= ratio;
        if term == 0.0 {
            break;
        }
        sum.add(term);
    }
    Ok(sum.value())
}

/// Largest relative violation of the three-term recurrence over all
/// `n < N` and lattice points `x`.
pub fn recurrence_residual(p: &HypergeomParams) -> Result<f64> {
    let nn = p.n_max();
    let mut worst = 0.0f64;
    for x in 0..=nn {
        let lam = p.lattice(x);
        let vals: Vec<f64> = (0..=nn).map(|n| eval_poly(p, n, x)).collect::<Result<_>>()?;
        for n in 0..nn {
            let (a, c) = p.recurrence_coefficients(n);
            let prev = if n > 0 { vals[n as usize - 1] } else { 0.0 };
            let (cur, next) = (vals[n as usize], vals[n as usize + 1]);
            let r = p.recurrence_sign() * lam * cur + a * next - (a + c) * cur + c * prev;
            let scale = [lam * cur, a * next, (a + c) * cur, c * prev]
                .iter()
                .fold(1.0f64, |s, v| s.max(v.abs()));
            worst = worst.max(r.abs() / scale);
        }
    }
    Ok(worst)
}

/// Orthogonality diagnostics over the full lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    /// `max_{n≠m} |G_nm| / √(G_nn G_mm)`.
    pub off_diagonal: f64,
    /// `max_n |G_nn / h_n − 1|`.
    pub norm_mismatch: f64,
}

pub fn orthogonality(p: &HypergeomParams) -> Result<OrthogonalityReport> {
    let nn = p.n_max() as usize;
    let table: Vec<Vec<f64>> = (0..=nn as u32)
        .map(|n| (0..=nn as u32).map(|x| eval_poly(p, n, x)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let w: Vec<f64> = (0..=nn as u32).map(|x| p.weight(x)).collect();
    let mut gram = vec![vec![0.0; nn + 1]; nn + 1];
    for n in 0..=nn {
        for m in 0..=n {
            let mut s = CompensatedSum::default();
            for x in 0..=nn {
                s.add(w[x] * table[n][x] * table[m][x]);
            }
            gram[n][m] = s.value();
            gram[m][n] = gram[n][m];
        }
    }
    let mut off = 0.0f64;
    let mut mismatch = 0.0f64;
    for n in 0..=nn {
        let h = p.norm(n as u32)?;
        mismatch = mismatch.max((gram[n][n] / h - 1.0).abs());
        for m in 0..n {
            off = off.max(gram[n][m].abs() / (gram[n][n] * gram[m][m]).abs().sqrt());
        }
    }
    Ok(OrthogonalityReport {
        off_diagonal: off,
        norm_mismatch: mismatch,
    })
}

/// The 6j ↔ Racah correspondence for one symbol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RacahIdentity {
    pub args: SixJArgs,
    /// `None` for inadmissible arguments, where both sides vanish.
    pub params: Option<HypergeomParams>,
    pub n: u32,
    pub x: u32,
    /// `6j = proportionality · R_n(λ(x))`.
    pub proportionality: f64,
    pub polynomial: f64,
    pub exact: f64,
    pub error: f64,
}

/// Maps `{a b ℓ / c d ℓ̃}` to a Racah polynomial value.
///
/// Among the images of `(a, b, c, d)` under the Klein four-group and Regge
/// conjugation (all of which fix `ℓ`, `ℓ̃` and the symbol), one has
/// `ℓ ∈ [b−a, a+b]` and `ℓ̃ ∈ [d−a, d+a]`. With that image,
/// `N = 2a`, `x = ℓ−(b−a)`, `n = ℓ̃−(d−a)`, `α = −a+b−c+d`, `β = −a−b+c+d`,
/// `γ = −N−1`, `δ = 2(b−a)+N+1` and
/// `6j = (−1)^(a+b+c+d+x+n+N) √|w(x)/h_n| R_n(λ(x)) / √((2ℓ+1)(2ℓ̃+1))`.
pub fn racah_from_6j(args: &SixJArgs) -> Result<RacahIdentity> {
    let exact = wigner_6j(args).to_f64();
    if !args.is_admissible() {
        return Ok(RacahIdentity {
            args: *args,
            params: None,
            n: 0,
            x: 0,
            proportionality: 0.0,
            polynomial: 0.0,
            exact,
            error: exact.abs(),
        });
    }
    let ([a0, b0, c0, d0], ell, ell_t) = args.as_quadrilateral_labels();
    let q = Quadrilateral::new(a0, b0, c0, d0)?;
    let s = q.semi_perimeter();
    let klein = [[a0, b0, c0, d0], [b0, a0, d0, c0], [c0, d0, a0, b0], [d0, c0, b0, a0]];
    let chosen = klein
        .iter()
        .flat_map(|&[a, b, c, d]| [[a, b, c, d], [s - a, s - b, s - c, s - d]])
        .find(|&[a, b, c, d]| {
            let cand = match Quadrilateral::new(a, b, c, d) {
                Ok(c) => c,
                Err(_) => return false,
            };
            cand.ell_range() == (b - a, a + b) && cand.ell_tilde_range() == (d - a, a + d)
        })
        .ok_or_else(|| Error::Structural(format!("{args}: no Racah-compatible ordering")))?;
    let [a, b, c, d] = chosen;
    let half = |h: HalfInt| h.to_f64();
    let big_n = a.twice() as u32;
    let x = (ell - (b - a)).as_integer().expect("integer offset") as u32;
    let n = (ell_t - (d - a)).as_integer().expect("integer offset") as u32;
    let nf = big_n as f64;
    let params = HypergeomParams::Racah {
        alpha: half(-a + b - c + d),
        beta: half(-a - b + c + d),
        gamma: -nf - 1.0,
        delta: 2.0 * half(b - a) + nf + 1.0,
        n_max: big_n,
    };
    let poly = eval_poly(&params, n, x)?;
    let w = params.weight(x);
    let h = params.norm(n)?;
    let phase_twice = (a + b + c + d).twice() + 2 * (x as i64 + n as i64) + big_n as i64 * 2;
    let sign = if phase_twice.rem_euclid(4) == 0 { 1.0 } else { -1.0 };
    let dims = (ell.multiplicity() * ell_t.multiplicity()) as f64;
    let proportionality = sign * (w / h).abs().sqrt() / dims.sqrt();
    let value = proportionality * poly;
    Ok(RacahIdentity {
        args: *args,
        params: Some(params),
        n,
        x,
        proportionality,
        polynomial: poly,
        exact,
        error: (value - exact).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn families() -> Vec<HypergeomParams> {
        vec![
            HypergeomParams::Racah { alpha: 1.0, beta: 2.0, gamma: -6.0, delta: 9.0, n_max: 5 },
            HypergeomParams::Racah { alpha: 0.5, beta: 1.5, gamma: -5.0, delta: 7.5, n_max: 4 },
            HypergeomParams::Hahn { alpha: 0.5, beta: 1.25, n_max: 6 },
            HypergeomParams::Hahn { alpha: 2.0, beta: 0.0, n_max: 7 },
            HypergeomParams::DualHahn { gamma: 0.5, delta: 2.0, n_max: 6 },
            HypergeomParams::DualHahn { gamma: 3.0, delta: 1.0, n_max: 5 },
        ]
    }

    #[test]
    fn degree_zero_is_one() {
        for p in families() {
            for x in 0..=p.n_max() {
                assert_eq!(eval_poly(&p, 0, x).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn orthogonal_with_stated_norms() {
        for p in families() {
            let r = orthogonality(&p).unwrap();
            assert!(r.off_diagonal < 1e-10 && r.norm_mismatch < 1e-10, "{p:?}: {r:?}");
        }
    }

    #[test]
    fn racah_alpha_branch_norm() {
        let p = HypergeomParams::Racah { alpha: -6.0, beta: -9.5, gamma: 1.0, delta: -3.0, n_max: 5 };
        let r = orthogonality(&p).unwrap();
        assert!(r.off_diagonal < 1e-10 && r.norm_mismatch < 1e-10, "{r:?}");
    }

    #[test]
    fn recurrences_hold() {
        for p in families() {
            assert!(recurrence_residual(&p).unwrap() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn inadmissible_racah_rejected() {
        let p = HypergeomParams::Racah { alpha: 1.0, beta: 2.0, gamma: 0.5, delta: 9.0, n_max: 5 };
        assert!(eval_poly(&p, 1, 1).is_err());
    }

    #[test]
    fn sixj_identity_on_small_symbols() {
        let mut worst = 0.0f64;
        for t in 0..6i64.pow(6) {
            let mut v = [0i64; 6];
            let mut r = t;
            for e in v.iter_mut() {
                *e = r % 6;
                r /= 6;
            }
            let args = SixJArgs::from_twice(v);
            let id = racah_from_6j(&args).unwrap();
            worst = worst.max(id.error);
        }
        assert!(worst < 1e-13, "{worst}");
    }
}
