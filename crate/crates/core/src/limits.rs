//! Large-spin limits: volume eigenfunctions against the recursions of the
//! generalized 3j symbols (dual Hahn type on the quadratic `ℓ` lattice, Hahn
//! type on the linear `m` lattice), and the 6j → 3j limit.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angmom::{wigner_3j, wigner_6j, SixJArgs};
use crate::error::Result;
use crate::families::FamilySet;
use crate::halfint::HalfInt;
use crate::quad::Quadrilateral;
use crate::sweep::par_map;
use crate::tridiag::SymTridiag;
use crate::volume::{heron_area, recursion_residual, volume_spectrum, Representation, DEFAULT_TOL};

/// `slope·s + offset` at scale `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledEntry {
    pub slope: i64,
    pub offset: HalfInt,
}

impl ScaledEntry {
    pub const fn fixed(v: HalfInt) -> Self {
        ScaledEntry { slope: 0, offset: v }
    }

    pub fn at(&self, s: u32) -> HalfInt {
        HalfInt::from_int(self.slope * s as i64) + self.offset
    }
}

impl fmt::Display for ScaledEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.slope, self.offset.twice()) {
            (0, _) => write!(f, "{}", self.offset),
            (k, 0) => write!(f, "{k}s"),
            (k, _) => write!(f, "{k}s+{}", self.offset),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    /// `{j1 j2 · / J3 J4 ·}`: the volume eigenfunction with fixed `j1, j2`
    /// and large `J3, J4`; the third column holds lattice variables.
    Curly,
    /// A 6j whose lower row grows, compared with a round 3j.
    Round,
}

/// Base symbol of a limit scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedSymbol {
    pub upper: [HalfInt; 3],
    pub lower: [ScaledEntry; 3],
    pub kind: SymbolKind,
}

impl GeneralizedSymbol {
    /// `{j1 j2 · / J3 J4 ·}`.
    pub fn curly(j1: HalfInt, j2: HalfInt, big_j3: ScaledEntry, big_j4: ScaledEntry) -> Self {
        GeneralizedSymbol {
            upper: [j1, j2, HalfInt::ZERO],
            lower: [big_j3, big_j4, ScaledEntry::fixed(HalfInt::ZERO)],
            kind: SymbolKind::Curly,
        }
    }

    /// `{a b c / d e f}` with scaled lower row.
    pub fn sixj(upper: [HalfInt; 3], lower: [ScaledEntry; 3]) -> Self {
        GeneralizedSymbol {
            upper,
            lower,
            kind: SymbolKind::Round,
        }
    }

    fn quad_at(&self, s: u32) -> Result<Quadrilateral> {
        Quadrilateral::new(self.upper[0], self.upper[1], self.lower[0].at(s), self.lower[1].at(s))
    }
}

impl fmt::Display for GeneralizedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.upper;
        let [d, e, g] = self.lower;
        match self.kind {
            SymbolKind::Curly => write!(f, "{{{a} {b} . / {d} {e} .}}"),
            SymbolKind::Round => write!(f, "{{{a} {b} {c} / {d} {e} {g}}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub scale: u32,
    pub error: Option<f64>,
    /// Recursion residual of the limiting target, where one is built.
    pub target_residual: Option<f64>,
    pub note: Option<String>,
}

impl ScanPoint {
    fn skip(scale: u32, note: impl Into<String>) -> Self {
        ScanPoint {
            scale,
            error: None,
            target_residual: None,
            note: Some(note.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub kind: String,
    pub base: String,
    pub normalization: String,
    pub scales: Vec<u32>,
    pub points: Vec<ScanPoint>,
    /// `p` in `error ≈ C·scale^(−p)`, least squares over non-skipped points.
    pub decay_exponent: Option<f64>,
    /// Errors non-increasing from the second evaluated scale on.
    pub monotone: bool,
    /// Last error over the one before it.
    pub final_ratio: Option<f64>,
    pub max_target_residual: f64,
    pub pass: bool,
}

const TARGET_RESIDUAL_TOL: f64 = 1e-12;
const RATIO_TOL: f64 = 0.75;

fn summarize(kind: &str, base: String, normalization: &str, scales: &[u32], points: Vec<ScanPoint>) -> ConvergenceReport {
    let evaluated: Vec<(u32, f64)> = points.iter().filter_map(|p| p.error.map(|e| (p.scale, e))).collect();
    let errors: Vec<f64> = evaluated.iter().map(|p| p.1).collect();
    let monotone = errors.windows(2).skip(1).all(|w| w[1] <= w[0]);
    let final_ratio = match errors.len() {
        0 | 1 => None,
        n if errors[n - 2] > 0.0 => Some(errors[n - 1] / errors[n - 2]),
        _ => None,
    };
    let logs: Vec<(f64, f64)> = evaluated
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(s, e)| ((*s as f64).ln(), e.ln()))
        .collect();
    let decay_exponent = if logs.len() >= 2 {
        let n = logs.len() as f64;
        let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
        let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(-sxy / sxx)
    } else {
        None
    };
    let max_target_residual = points.iter().filter_map(|p| p.target_residual).fold(0.0, f64::max);
    let all_zero = !errors.is_empty() && errors.iter().all(|&e| e == 0.0);
    let pass = max_target_residual < TARGET_RESIDUAL_TOL
        && (all_zero || (errors.len() >= 2 && monotone && final_ratio.is_some_and(|r| r < RATIO_TOL)));
    ConvergenceReport {
        kind: kind.to_string(),
        base,
        normalization: normalization.to_string(),
        scales: scales.to_vec(),
        points,
        decay_exponent,
        monotone,
        final_ratio,
        max_target_residual,
        pass,
    }
}

/// Eigenvectors of the real symmetric zero-diagonal tridiagonal with
/// couplings `off`, generated by forward recursion from the first lattice
/// point. `sign = −1` solves `λψ_p + a_{p+1}ψ_{p+1} + a_pψ_{p−1} = 0`,
/// `sign = +1` solves `λψ_p = a_{p+1}ψ_{p+1} + a_pψ_{p−1}`.
/// Eigenvalues are returned descending; columns unit-normalized with
/// `ψ_0 > 0`.
fn recursion_eigenvectors(off: &[f64], sign: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = off.len() + 1;
    let t = SymTridiag::new(vec![0.0; n], off.to_vec());
    let mut mu = t.eigenvalues();
    if n % 2 == 1 {
        mu[n / 2] = 0.0;
    }
    // eigenvalue of the target convention, descending
    let lams: Vec<f64> = if sign < 0.0 {
        mu.iter().map(|m| if *m == 0.0 { 0.0 } else { -m }).collect()
    } else {
        mu.iter().rev().copied().collect()
    };
    let mut psi = vec![vec![0.0; n]; n];
    for (k, &lam) in lams.iter().enumerate() {
        let mut col = vec![0.0; n];
        col[0] = 1.0;
        for p in 0..n - 1 {
            let back = if p > 0 { off[p - 1] * col[p - 1] } else { 0.0 };
            col[p + 1] = if sign < 0.0 { -(lam * col[p] + back) } else { lam * col[p] - back } / off[p];
        }
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        for p in 0..n {
            psi[p][k] = col[p] / norm;
        }
    }
    (lams, psi)
}

fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0f64, |s, (x, y)| s.max((x - y).abs()))
}

fn scan_iia_point(base: &GeneralizedSymbol, s: u32) -> ScanPoint {
    let q = match base.quad_at(s) {
        Ok(q) => q,
        Err(e) => return ScanPoint::skip(s, format!("inadmissible: {e}")),
    };
    let [j1, j2, _] = base.upper;
    let m = base.lower[0].at(s) - base.lower[1].at(s);
    let asym = ((j1 - j2).abs().max(m.abs()), j1 + j2);
    if q.ell_range() != asym {
        return ScanPoint::skip(s, format!("lattice {:?} differs from the asymptotic {:?}", q.ell_range(), asym));
    }
    if q.dim() < 2 {
        return ScanPoint::skip(s, "single-point lattice");
    }
    let spec = match volume_spectrum(&q, Representation::Sym, DEFAULT_TOL) {
        Ok(v) => v,
        Err(e) => return ScanPoint::skip(s, format!("spectrum failed: {e}")),
    };
    let (x1, x2) = (j1.to_f64() + 0.5, j2.to_f64() + 0.5);
    let mf = m.to_f64();
    let off: Vec<f64> = q
        .ell_lattice()
        .into_iter()
        .skip(1)
        .map(|l| {
            let l = l.to_f64();
            heron_area(l, x1, x2) * 0.25 * (l * l - mf * mf).max(0.0).sqrt() / ((2.0 * l + 1.0) * (2.0 * l - 1.0)).sqrt()
        })
        .collect();
    let (lams, target) = recursion_eigenvectors(&off, -1.0);
    let residual = recursion_residual(&off, &lams, &target);
    ScanPoint {
        scale: s,
        error: Some(max_abs_diff(&spec.psi, &target)),
        target_residual: Some(residual),
        note: None,
    }
}

/// Scans the volume eigenfunctions `Ψ_ℓ^(k)` of `(j1, j2, J3, J4)` against the
/// eigenfunctions of the limiting recursion on the quadratic lattice, with
/// couplings `F(ℓ; j1+½, j2+½)·¼√(ℓ²−m²)/√((2ℓ+1)(2ℓ−1))`, `m = J3−J4`
/// (the exact couplings divided by `J3+J4+1`, to leading order).
pub fn limit_scan_iia(base: &GeneralizedSymbol, scales: &[u32]) -> ConvergenceReport {
    let points = par_map(scales, |&s| scan_iia_point(base, s));
    summarize(
        "II.A",
        base.to_string(),
        "eigenvalues divided by J3+J4+1; columns unit-normalized, first entry positive",
        scales,
        points,
    )
}

fn scan_iiib_point(base: &GeneralizedSymbol, s: u32) -> ScanPoint {
    let q = match base.quad_at(s) {
        Ok(q) => q,
        Err(e) => return ScanPoint::skip(s, format!("inadmissible: {e}")),
    };
    let [j1, j2, _] = base.upper;
    let big_j3 = base.lower[0].at(s);
    let m = big_j3 - base.lower[1].at(s);
    let mu_lo = (-j2).max(-m - j1);
    let mu_hi = j2.min(j1 - m);
    if q.ell_tilde_range() != (big_j3 + mu_lo, big_j3 + mu_hi) {
        return ScanPoint::skip(
            s,
            format!("lattice {:?} differs from the asymptotic m-lattice [{mu_lo}, {mu_hi}]", q.ell_tilde_range()),
        );
    }
    if q.dim() < 2 {
        return ScanPoint::skip(s, "single-point lattice");
    }
    let set = match FamilySet::new(&q, Representation::Antisym, DEFAULT_TOL) {
        Ok(v) => v,
        Err(e) => return ScanPoint::skip(s, format!("spectrum failed: {e}")),
    };
    let n = q.dim();
    // strip the lattice phase i^t and the global phase of each column
    let mut exact = vec![vec![0.0; n]; n];
    for k in 0..n {
        let col: Vec<Complex64> = (0..n).map(|t| set.three[(t, k)] * (-Complex64::i()).powu(t as u32)).collect();
        let pivot = col.iter().copied().fold(Complex64::new(0.0, 0.0), |b, z| if z.norm() > b.norm() { z } else { b });
        let phase = pivot.conj() / pivot.norm();
        let mut real: Vec<f64> = col.iter().map(|z| (z * phase).re).collect();
        if real[0] < 0.0 {
            real.iter_mut().for_each(|v| *v = -*v);
        }
        for (row, v) in exact.iter_mut().zip(real) {
            row[k] = v;
        }
    }
    let (h1, h2) = (j1.to_f64(), j2.to_f64());
    let mf = m.to_f64();
    let off: Vec<f64> = mu_lo
        .range_to(mu_hi)
        .skip(1)
        .map(|mu2| {
            let mu2 = mu2.to_f64();
            let mu1 = -mf - mu2;
            ((h2 + mu2) * (h2 - mu2 + 1.0) * (h1 - mu1) * (h1 + mu1 + 1.0)).max(0.0).sqrt() / 16.0
        })
        .collect();
    let (lams, target) = recursion_eigenvectors(&off, 1.0);
    // M̃φ = λφ is the Eq.-(4) form with λ → −λ
    let neg: Vec<f64> = lams.iter().map(|l| -l).collect();
    let residual = recursion_residual(&off, &neg, &target);
    ScanPoint {
        scale: s,
        error: Some(max_abs_diff(&exact, &target)),
        target_residual: Some(residual),
        note: None,
    }
}

/// Scans the III.A/III.B eigenfunctions of `(j1, j2, J3, J4)` in the `ℓ̃`
/// basis, written on the linear lattice `μ2 = ℓ̃ − J3`, against the limiting
/// recursion with couplings
/// `(1/16)√((j2+μ2)(j2−μ2+1)(j1−μ1)(j1+μ1+1))`, `μ1 = −(J3−J4) − μ2`.
pub fn limit_scan_iiib(base: &GeneralizedSymbol, scales: &[u32]) -> ConvergenceReport {
    let points = par_map(scales, |&s| scan_iiib_point(base, s));
    summarize(
        "III.B",
        base.to_string(),
        "antisymmetric representation; lattice phase i^t and global phase removed; eigenvalues divided by J3+J4+1",
        scales,
        points,
    )
}

fn threej_point(base: &GeneralizedSymbol, s: u32) -> ScanPoint {
    let [a, b, c] = base.upper;
    let [d, e, f] = base.lower.map(|x| x.at(s));
    let args = SixJArgs::new([a, b, c], [d, e, f]);
    if [d, e, f].iter().any(|x| x.twice() < 0) {
        return ScanPoint::skip(s, "negative entry");
    }
    let sixj = wigner_6j(&args).to_f64();
    let big_j = (d + e + f).to_f64() / 3.0;
    let lhs = (2.0 * big_j + 1.0).sqrt() * sixj;
    let threej = match wigner_3j(a, b, c, e - f, f - d, d - e) {
        Ok(v) => v.to_f64(),
        Err(err) => return ScanPoint::skip(s, format!("projection parity: {err}")),
    };
    let phase_twice = (a + b + c).twice() + 2 * (d + e + f).twice();
    let sign = if phase_twice.rem_euclid(4) == 0 { 1.0 } else { -1.0 };
    ScanPoint {
        scale: s,
        error: Some((lhs - sign * threej).abs()),
        target_residual: None,
        note: if args.is_admissible() { None } else { Some("triad violated, both sides 0".into()) },
    }
}

/// `√(2J+1)·{a b c / d e f} → (−1)^(a+b+c+2(d+e+f))·(a b c; e−f, f−d, d−e)`
/// with `J = (d+e+f)/3` as the lower row grows.
pub fn threej_limit_of_6j(base: &GeneralizedSymbol, scales: &[u32]) -> ConvergenceReport {
    let points = par_map(scales, |&s| threej_point(base, s));
    summarize(
        "6j->3j",
        base.to_string(),
        "sqrt(2J+1)*6j against (-1)^(a+b+c+2(d+e+f)) * 3j, J=(d+e+f)/3",
        scales,
        points,
    )
}

fn h(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

fn scaled(slope: i64, offset_twice: i64) -> ScaledEntry {
    ScaledEntry {
        slope,
        offset: h(offset_twice),
    }
}

/// Default bases used by `check limits`.
pub fn default_bases() -> [GeneralizedSymbol; 3] {
    [
        GeneralizedSymbol::curly(h(3), h(4), scaled(2, 1), scaled(2, 0)),
        GeneralizedSymbol::curly(h(2), h(3), scaled(2, 1), scaled(2, 0)),
        GeneralizedSymbol::sixj([h(4), h(3), h(3)], [scaled(2, 1), scaled(2, 0), scaled(2, 2)]),
    ]
}

/// The acceptance scales.
pub const DEFAULT_SCALES: [u32; 4] = [1, 2, 4, 8];
