//! The volume operator of the symmetric coupling scheme: Heron couplings,
//! the tridiagonal matrix in the `ℓ` basis and its spectrum.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::halfint::HalfInt;
use crate::quad::Quadrilateral;
use crate::radical::ExactRadical;
use crate::tridiag::SymTridiag;

/// Version stamped into serialized spectra.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default relative tolerance of [`spectrum`].
pub const DEFAULT_TOL: f64 = 1e-12;

/// Phase convention of the off-diagonal entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// `(ℓ, ℓ−1) = −iα_ℓ`, `(ℓ−1, ℓ) = +iα_ℓ`.
    #[default]
    Antisym,
    /// Both entries `+α_ℓ`.
    Sym,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Antisym => "antisym",
            Representation::Sym => "sym",
        })
    }
}

impl FromStr for Representation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "antisym" | "antisymmetric" | "imaginary-antisymmetric" => Ok(Representation::Antisym),
            "sym" | "symmetric" | "real-symmetric" => Ok(Representation::Sym),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected sym or antisym".into(),
            }),
        }
    }
}

/// Squared Heron area of the triangle with twice-valued sides `x, y, z`.
pub fn heron_squared_twice(x: i64, y: i64, z: i64) -> BigRational {
    let p = (x + y + z) * (-x + y + z) * (x - y + z) * (x + y - z);
    BigRational::new(BigInt::from(p), BigInt::from(256))
}

/// Heron area of the triangle with sides `x, y, z`.
pub fn heron_area(x: f64, y: f64, z: f64) -> f64 {
    let p = (x + y + z) * (-x + y + z) * (x - y + z) * (x + y - z);
    0.25 * p.max(0.0).sqrt()
}

/// Coupling between `ℓ` and `ℓ−1`:
/// `F(ℓ; a+½, b+½)·F(ℓ; c+½, d+½) / √((2ℓ+1)(2ℓ−1))`, `F` the Heron area.
///
/// Defined on `ℓmin ≤ ℓ ≤ ℓmax+1`, vanishing at both ends.
pub fn alpha(ell: HalfInt, q: &Quadrilateral) -> Result<ExactRadical> {
    let (lo, hi) = q.ell_range();
    if !ell.same_parity(lo) || ell < lo || ell > hi + HalfInt::ONE {
        return Err(domain(format!(
            "ℓ = {ell} outside the coupling range [{lo}, {}] of {q}",
            hi + HalfInt::ONE
        )));
    }
    if ell == lo || ell == hi + HalfInt::ONE {
        return Ok(ExactRadical::zero());
    }
    let [a, b, c, d] = q.twice();
    let l = ell.twice();
    let f1 = heron_squared_twice(l, a + 1, b + 1);
    let f2 = heron_squared_twice(l, c + 1, d + 1);
    let w = BigRational::from_integer(BigInt::from((l + 1) * (l - 1)));
    let sq = f1 * f2 / w;
    debug_assert!(!sq.is_negative());
    Ok(ExactRadical::sqrt(sq))
}

/// Tridiagonal matrix of the volume operator in the `ℓ` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeMatrix {
    pub quad: Quadrilateral,
    pub ell_min: HalfInt,
    /// `α_ℓ` for `ℓ = ℓmin+1 ..= ℓmax`.
    pub alpha_exact: Vec<ExactRadical>,
    pub alpha: Vec<f64>,
    pub rep: Representation,
}

impl VolumeMatrix {
    pub fn dim(&self) -> usize {
        self.alpha.len() + 1
    }

    pub fn lattice(&self) -> Vec<HalfInt> {
        (0..self.dim() as i64)
            .map(|p| self.ell_min + HalfInt::from_int(p))
            .collect()
    }

    /// Entry `(p, r)` with `p, r` lattice indices.
    pub fn entry(&self, p: usize, r: usize) -> Complex64 {
        let a = if p == r + 1 {
            self.alpha[r]
        } else if r == p + 1 {
            self.alpha[p]
        } else {
            return Complex64::new(0.0, 0.0);
        };
        match self.rep {
            Representation::Sym => Complex64::new(a, 0.0),
            Representation::Antisym if p > r => Complex64::new(0.0, -a),
            Representation::Antisym => Complex64::new(0.0, a),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |p, r| self.entry(p, r))
    }

    /// Infinity norm.
    pub fn norm(&self) -> f64 {
        self.real_form().norm()
    }

    /// The real symmetric form with `+α` off-diagonals.
    pub fn real_form(&self) -> SymTridiag {
        SymTridiag::new(vec![0.0; self.dim()], self.alpha.clone())
    }

    pub fn max_alpha(&self) -> f64 {
        self.alpha.iter().cloned().fold(0.0, f64::max)
    }
}

/// Builds the volume matrix of `q` in representation `rep`.
pub fn build_matrix(q: &Quadrilateral, rep: Representation) -> VolumeMatrix {
    let (lo, hi) = q.ell_range();
    let alpha_exact: Vec<ExactRadical> = (lo + HalfInt::ONE)
        .range_to(hi)
        .map(|l| alpha(l, q).expect("interior ℓ"))
        .collect();
    let alpha = alpha_exact.iter().map(ExactRadical::to_f64).collect();
    VolumeMatrix {
        quad: *q,
        ell_min: lo,
        alpha_exact,
        alpha,
        rep,
    }
}

/// Eigenvalues and eigenfunctions of the volume operator.
///
/// `eigenvalues` descend; `psi[p][k]` is `Ψ_ℓ^(k)` at `ℓ = ℓmin + p`, real,
/// orthonormal by columns and sign-fixed (first nonzero entry positive).
/// Every column solves `λ_k Ψ_ℓ + α_{ℓ+1} Ψ_{ℓ+1} + α_ℓ Ψ_{ℓ−1} = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeSpectrum {
    pub quad: Quadrilateral,
    pub rep: Representation,
    pub ell_min: HalfInt,
    pub alpha: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub psi: Vec<Vec<f64>>,
    pub residual: f64,
    pub tol: f64,
}

impl VolumeSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.psi.iter().map(|row| row[k]).collect()
    }

    /// Lattice phase linking `Ψ` to eigenvectors of the complex matrix:
    /// `1` for `Sym`, `i^p` for `Antisym`.
    pub fn phase(&self, p: usize) -> Complex64 {
        match self.rep {
            Representation::Sym => Complex64::new(1.0, 0.0),
            Representation::Antisym => Complex64::i().powu(p as u32),
        }
    }

    /// Eigenvector table of the representation matrix: `⟨ℓ|k⟩`.
    pub fn eigenvectors(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |p, k| self.phase(p) * self.psi[p][k])
    }

    pub fn to_record(&self) -> SpectrumRecord {
        let (lo, hi) = self.quad.ell_range();
        SpectrumRecord {
            tool_version: TOOL_VERSION.to_string(),
            quadrilateral: self.quad.twice(),
            representation: self.rep,
            tol: self.tol,
            ell_min_twice: lo.twice(),
            ell_max_twice: hi.twice(),
            alpha: self.alpha.clone(),
            eigenvalues: self.eigenvalues.clone(),
            eigenvectors: self.psi.iter().flatten().copied().collect(),
            residual: self.residual,
        }
    }
}

/// Serialized spectrum; eigenvectors row-major with rows `ℓ`, columns `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub tool_version: String,
    pub quadrilateral: [i64; 4],
    pub representation: Representation,
    pub tol: f64,
    pub ell_min_twice: i64,
    pub ell_max_twice: i64,
    pub alpha: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<f64>,
    pub residual: f64,
}

impl SpectrumRecord {
    /// Rebuilds the spectrum; rejects stale versions and malformed shapes.
    pub fn into_spectrum(self) -> Result<VolumeSpectrum> {
        if self.tool_version != TOOL_VERSION {
            return Err(Error::Structural(format!(
                "record version {} differs from {TOOL_VERSION}",
                self.tool_version
            )));
        }
        let quad = Quadrilateral::from_twice(self.quadrilateral)?;
        let n = quad.dim();
        let (lo, hi) = quad.ell_range();
        if self.eigenvalues.len() != n
            || self.eigenvectors.len() != n * n
            || self.alpha.len() + 1 != n
            || lo.twice() != self.ell_min_twice
            || hi.twice() != self.ell_max_twice
        {
            return Err(Error::Structural("spectrum record shape mismatch".into()));
        }
        Ok(VolumeSpectrum {
            quad,
            rep: self.representation,
            ell_min: lo,
            alpha: self.alpha,
            eigenvalues: self.eigenvalues,
            psi: self.eigenvectors.chunks(n).map(<[f64]>::to_vec).collect(),
            residual: self.residual,
            tol: self.tol,
        })
    }
}

/// `max_{k,ℓ} |λ_k Ψ_ℓ + α_{ℓ+1}Ψ_{ℓ+1} + α_ℓΨ_{ℓ−1}|`.
pub fn recursion_residual(alpha: &[f64], eigenvalues: &[f64], psi: &[Vec<f64>]) -> f64 {
    let n = eigenvalues.len();
    let mut worst = 0.0f64;
    for (k, &lam) in eigenvalues.iter().enumerate() {
        for p in 0..n {
            let mut r = lam * psi[p][k];
            if p + 1 < n {
                r += alpha[p] * psi[p + 1][k];
            }
            if p > 0 {
                r += alpha[p - 1] * psi[p - 1][k];
            }
            worst = worst.max(r.abs());
        }
    }
    worst
}

/// Diagonalizes `m`; `tol` is relative to the matrix norm.
pub fn spectrum(m: &VolumeMatrix, tol: f64) -> Result<VolumeSpectrum> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let t = m.real_form();
    let n = t.len();
    let norm = t.norm();
    let mut mu = if norm == 0.0 { vec![0.0; n] } else { t.eigenvalues() };
    if n % 2 == 1 {
        let mid = n / 2;
        if mu[mid].abs() <= tol * norm {
            mu[mid] = 0.0;
        } else {
            return Err(Error::Numeric(format!(
                "odd dimension {n} but middle eigenvalue {:e} is not below {tol:e}·‖m‖",
                mu[mid]
            )));
        }
    }
    let accept = tol.max(16.0 * f64::EPSILON) * norm.max(f64::MIN_POSITIVE);
    let eig = t.eigen(mu, accept)?;
    let eigenvalues: Vec<f64> = eig.values.iter().map(|x| if *x == 0.0 { 0.0 } else { -x }).collect();
    let mut psi = vec![vec![0.0; n]; n];
    for (k, mut v) in eig.vectors.into_iter().enumerate() {
        let scale = v.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * scale) {
            if *first < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        for p in 0..n {
            psi[p][k] = v[p];
        }
    }
    let residual = recursion_residual(&m.alpha, &eigenvalues, &psi);
    Ok(VolumeSpectrum {
        quad: m.quad,
        rep: m.rep,
        ell_min: m.ell_min,
        alpha: m.alpha.clone(),
        eigenvalues,
        psi,
        residual,
        tol,
    })
}

/// `build_matrix` followed by `spectrum`.
pub fn volume_spectrum(q: &Quadrilateral, rep: Representation, tol: f64) -> Result<VolumeSpectrum> {
    spectrum(&build_matrix(q, rep), tol)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::regge_conjugate;

    fn quad(t: [i64; 4]) -> Quadrilateral {
        Quadrilateral::from_twice(t).unwrap()
    }

    #[test]
    fn equilateral_half_alpha() {
        let q = quad([1, 1, 1, 1]);
        let a = alpha(HalfInt::ONE, &q).unwrap();
        assert_eq!(a, ExactRadical::sqrt(BigRational::new(3.into(), 256.into())));
        assert!(alpha(HalfInt::ZERO, &q).unwrap().is_zero());
        assert!(alpha(HalfInt::from_int(2), &q).unwrap().is_zero());
        assert!(alpha(HalfInt::from_int(3), &q).is_err());
    }

    #[test]
    fn alpha_is_regge_invariant() {
        for q in crate::quad::all_quadrilaterals(5) {
            let r = regge_conjugate(&q).unwrap();
            let (lo, hi) = q.ell_range();
            for l in lo.range_to(hi + HalfInt::ONE) {
                assert_eq!(alpha(l, &q).unwrap(), alpha(l, &r).unwrap());
            }
        }
    }

    #[test]
    fn equilateral_half_spectrum() {
        let s = volume_spectrum(&quad([1, 1, 1, 1]), Representation::Antisym, DEFAULT_TOL).unwrap();
        let v = 3f64.sqrt() / 16.0;
        assert!((s.eigenvalues[0] - v).abs() < 1e-15);
        assert!((s.eigenvalues[1] + v).abs() < 1e-15);
        assert!(s.residual < 1e-15);
    }

    #[test]
    fn odd_dimension_has_exact_zero() {
        let s = volume_spectrum(&quad([2, 2, 2, 2]), Representation::Sym, DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.eigenvalues[1], 0.0);
        assert!((s.eigenvalues[0] + s.eigenvalues[2]).abs() < 1e-15);
    }

    #[test]
    fn record_round_trip() {
        let s = volume_spectrum(&quad([3, 4, 5, 6]), Representation::Antisym, DEFAULT_TOL).unwrap();
        let json = serde_json::to_string(&s.to_record()).unwrap();
        let back: SpectrumRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_spectrum().unwrap(), s);
    }

    #[test]
    fn antisym_eigenvectors_diagonalize_dense_matrix() {
        let q = quad([3, 4, 5, 6]);
        for rep in [Representation::Antisym, Representation::Sym] {
            let m = build_matrix(&q, rep);
            let s = spectrum(&m, DEFAULT_TOL).unwrap();
            let h = m.to_dense();
            let v = s.eigenvectors();
            let hv = &h * &v;
            for k in 0..s.dim() {
                let lam = match rep {
                    Representation::Antisym => s.eigenvalues[k],
                    Representation::Sym => -s.eigenvalues[k],
                };
                for p in 0..s.dim() {
                    assert!((hv[(p, k)] - v[(p, k)] * lam).norm() < 1e-13);
                }
            }
        }
    }
}
