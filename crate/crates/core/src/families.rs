//! The six overlap families: recoupling coefficients (I), volume
//! eigenfunctions in the `ℓ` basis (II) and in the `ℓ̃` basis (III), each with
//! its dual (B) table, together with orthogonality, duality and triangular
//! checks.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::angmom::recoupling_matrix;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::quad::Quadrilateral;
use crate::radical::{ExactRadical, RadicalSum};
use crate::volume::{build_matrix, spectrum, Representation, VolumeSpectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    IA,
    IB,
    IIA,
    IIB,
    IIIA,
    IIIB,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::IA, Family::IB, Family::IIA, Family::IIB, Family::IIIA, Family::IIIB];

    pub fn name(self) -> &'static str {
        match self {
            Family::IA => "I.A",
            Family::IB => "I.B",
            Family::IIA => "II.A",
            Family::IIB => "II.B",
            Family::IIIA => "III.A",
            Family::IIIB => "III.B",
        }
    }

    /// `(lattice variable, degree)` labels.
    pub fn labels(self) -> (&'static str, &'static str) {
        match self {
            Family::IA => ("l~ (quadratic lattice l~(l~+1))", "l"),
            Family::IB => ("l (quadratic lattice l(l+1))", "l~"),
            Family::IIA => ("l, eigenvalue lambda_k", "k"),
            Family::IIB => ("k, eigenvalue l(l+1)", "l"),
            Family::IIIA => ("l~, eigenvalue lambda_k", "k"),
            Family::IIIB => ("k, eigenvalue l~(l~+1)", "l~"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.chars().filter(|c| *c != '.').collect::<String>().to_ascii_uppercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name().replace('.', "") == norm)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "expected one of I.A, I.B, II.A, II.B, III.A, III.B".into(),
            })
    }
}

/// Row or column index set of a table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "points", rename_all = "kebab-case")]
pub enum Lattice {
    Ell(Vec<HalfInt>),
    EllTilde(Vec<HalfInt>),
    /// Volume eigenvalues `λ_k`, descending in `k`.
    Eigen(Vec<f64>),
}

impl Lattice {
    pub fn len(&self) -> usize {
        match self {
            Lattice::Ell(v) | Lattice::EllTilde(v) => v.len(),
            Lattice::Eigen(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TableValues {
    Exact(Vec<Vec<ExactRadical>>),
    Complex(DMatrix<Complex64>),
}

/// One overlap family for one quadrilateral. Columns are orthonormal over
/// the rows (sums run over the row lattice, all weights 1).
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapTable {
    pub family: Family,
    pub quad: Quadrilateral,
    pub rep: Option<Representation>,
    pub rows: Lattice,
    pub cols: Lattice,
    pub values: TableValues,
}

impl OverlapTable {
    pub fn to_complex(&self) -> DMatrix<Complex64> {
        match &self.values {
            TableValues::Complex(m) => m.clone(),
            TableValues::Exact(v) => {
                let (r, c) = (v.len(), v.first().map_or(0, Vec::len));
                DMatrix::from_fn(r, c, |i, j| Complex64::new(v[i][j].to_f64(), 0.0))
            }
        }
    }

    /// `max |Σ_r conj(T_{r,j}) T_{r,i} − δ_ij|`.
    pub fn orthogonality_deviation(&self) -> f64 {
        let m = self.to_complex();
        let g = m.adjoint() * &m;
        identity_deviation(&g)
    }
}

fn identity_deviation(g: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

fn transpose_exact(v: &[Vec<ExactRadical>]) -> Vec<Vec<ExactRadical>> {
    let c = v.first().map_or(0, Vec::len);
    (0..c).map(|j| v.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Family tables sharing one spectrum computation.
#[derive(Clone, Debug)]
pub struct FamilySet {
    pub quad: Quadrilateral,
    pub rep: Representation,
    pub spectrum: VolumeSpectrum,
    pub one: Vec<Vec<ExactRadical>>,
    pub u: DMatrix<Complex64>,
    pub two: DMatrix<Complex64>,
    pub three: DMatrix<Complex64>,
}

impl FamilySet {
    pub fn new(q: &Quadrilateral, rep: Representation, tol: f64) -> Result<Self> {
        let spectrum = spectrum(&build_matrix(q, rep), tol)?;
        let one = recoupling_matrix(q);
        let n = one.len();
        let u = DMatrix::from_fn(n, n, |t, l| Complex64::new(one[t][l].to_f64(), 0.0));
        let two = spectrum.eigenvectors();
        let three = &u * &two;
        Ok(FamilySet {
            quad: *q,
            rep,
            spectrum,
            one,
            u,
            two,
            three,
        })
    }

    pub fn table(&self, family: Family) -> OverlapTable {
        let ell = Lattice::Ell(self.quad.ell_lattice());
        let tilde = Lattice::EllTilde(self.quad.ell_tilde_lattice());
        let eig = Lattice::Eigen(self.spectrum.eigenvalues.clone());
        let (rows, cols, values, rep) = match family {
            Family::IA => (tilde, ell, TableValues::Exact(self.one.clone()), None),
            Family::IB => (ell, tilde, TableValues::Exact(transpose_exact(&self.one)), None),
            Family::IIA => (ell, eig, TableValues::Complex(self.two.clone()), Some(self.rep)),
            Family::IIB => (eig, ell, TableValues::Complex(self.two.adjoint()), Some(self.rep)),
            Family::IIIA => (tilde, eig, TableValues::Complex(self.three.clone()), Some(self.rep)),
            Family::IIIB => (eig, tilde, TableValues::Complex(self.three.adjoint()), Some(self.rep)),
        };
        OverlapTable {
            family,
            quad: self.quad,
            rep,
            rows,
            cols,
            values,
        }
    }
}

/// Builds one family table. `rep` only affects families II and III.
pub fn family_table(family: Family, q: &Quadrilateral, rep: Representation, tol: f64) -> Result<OverlapTable> {
    Ok(FamilySet::new(q, rep, tol)?.table(family))
}

/// Exact orthogonality of the recoupling matrix, both summation orders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityIReport {
    pub quadrilateral: [i64; 4],
    pub dim: usize,
    pub pass: bool,
    /// `(i, j, order)` entries that failed; order 0 sums over `ℓ̃`, order 1 over `ℓ`.
    pub failures: Vec<(usize, usize, u8)>,
}

fn exact_gram(m: &[Vec<ExactRadical>], failures: &mut Vec<(usize, usize, u8)>, order: u8) {
    let n = m.len();
    let one = BigRational::one();
    for i in 0..n {
        for j in i..n {
            let mut s = RadicalSum::new();
            for row in m {
                s.add(&(&row[i] * &row[j]));
            }
            let ok = if i == j { s.as_rational() == Some(one.clone()) } else { s.is_empty() };
            if !ok {
                failures.push((i, j, order));
            }
        }
    }
}

pub fn check_duality_one(q: &Quadrilateral) -> DualityIReport {
    let m = recoupling_matrix(q);
    let mut failures = Vec::new();
    exact_gram(&m, &mut failures, 0);
    exact_gram(&transpose_exact(&m), &mut failures, 1);
    DualityIReport {
        quadrilateral: q.twice(),
        dim: m.len(),
        pass: failures.is_empty(),
        failures,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyPair {
    II,
    III,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub pair: FamilyPair,
    pub quadrilateral: [i64; 4],
    pub representation: Representation,
    pub dim: usize,
    /// `max |Σ_rows ⟨k'|r⟩⟨r|k⟩ − δ|` with conjugate bras.
    pub orthogonality_deviation: f64,
    /// `max |Σ_k ⟨r'|k⟩⟨k|r⟩ − δ|` with conjugate bras.
    pub completeness_deviation: f64,
    /// Diagonal signs of `Σ_k ⟨r'|k⟩⟨r|k⟩` (bras transposed, not conjugated),
    /// when that matrix is `±δ`.
    pub transpose_signs: Option<Vec<i8>>,
    pub pass: bool,
}

fn sign_pattern(m: &DMatrix<Complex64>, tol: f64) -> Option<Vec<i8>> {
    let n = m.nrows();
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            let v = m[(i, j)];
            if i == j {
                if (v - Complex64::new(1.0, 0.0)).norm() < tol {
                    signs.push(1);
                } else if (v + Complex64::new(1.0, 0.0)).norm() < tol {
                    signs.push(-1);
                } else {
                    return None;
                }
            } else if v.norm() >= tol {
                return None;
            }
        }
    }
    Some(signs)
}

impl FamilySet {
    pub fn duality(&self, pair: FamilyPair) -> DualityReport {
        let a = match pair {
            FamilyPair::II => &self.two,
            FamilyPair::III => &self.three,
        };
        let n = a.nrows();
        let tol = 1e-12 * n.max(1) as f64;
        let orth = identity_deviation(&(a.adjoint() * a));
        let compl = identity_deviation(&(a * a.adjoint()));
        let plain = a * a.transpose();
        DualityReport {
            pair,
            quadrilateral: self.quad.twice(),
            representation: self.rep,
            dim: n,
            orthogonality_deviation: orth,
            completeness_deviation: compl,
            transpose_signs: sign_pattern(&plain, tol),
            pass: orth < tol && compl < tol,
        }
    }

    pub fn triangular(&self) -> TriangularReport {
        // Σ_k ⟨ℓ̃|k⟩⟨k|ℓ⟩ against ⟨ℓ̃|ℓ⟩
        let x = &self.three * self.two.adjoint();
        let plus = (&x - &self.u).iter().fold(0.0f64, |s, v| s.max(v.norm()));
        let minus = (&x + &self.u).iter().fold(0.0f64, |s, v| s.max(v.norm()));
        let (sign, deviation) = if plus <= minus { (1, plus) } else { (-1, minus) };
        // the same contraction with transposed (unconjugated) bras, per column ℓ
        let y = &self.three * self.two.transpose();
        let n = self.u.nrows();
        let mut column_signs = Some(Vec::with_capacity(n));
        for l in 0..n {
            let p = (0..n).fold(0.0f64, |s, t| s.max((y[(t, l)] - self.u[(t, l)]).norm()));
            let m = (0..n).fold(0.0f64, |s, t| s.max((y[(t, l)] + self.u[(t, l)]).norm()));
            match column_signs.as_mut() {
                Some(v) if p < 1e-11 => v.push(1i8),
                Some(v) if m < 1e-11 => v.push(-1i8),
                _ => column_signs = None,
            }
        }
        TriangularReport {
            quadrilateral: self.quad.twice(),
            representation: self.rep,
            dim: n,
            sign,
            deviation,
            transpose_column_signs: column_signs,
            pass: deviation < 1e-11,
        }
    }

    /// In the antisymmetric representation the volume operator is also
    /// tridiagonal in the `ℓ̃` basis, with entry `(t, t−1) = +iα̃_t` built from
    /// the Heron couplings of the dual quadrilateral. Returns the largest
    /// deviation of `UᵀHU` from that matrix and the eigen-residual of the
    /// III.A columns against it.
    pub fn dual_tridiagonal_check(&self) -> Option<(f64, f64)> {
        if self.rep != Representation::Antisym {
            return None;
        }
        let h = build_matrix(&self.quad, Representation::Antisym).to_dense();
        let transformed = &self.u * h * self.u.transpose();
        let dual = build_matrix(&self.quad.dual(), Representation::Antisym).to_dense();
        let target = dual.map(|z| z.conj());
        let dev = (&transformed - &target).iter().fold(0.0f64, |s, v| s.max(v.norm()));
        let mut res = 0.0f64;
        for k in 0..self.spectrum.dim() {
            let c = self.three.column(k);
            let r = &target * c - c * Complex64::new(self.spectrum.eigenvalues[k], 0.0);
            res = res.max(r.iter().fold(0.0f64, |s, v| s.max(v.norm())));
        }
        Some((dev, res))
    }

    /// Rebuilds every row of II.A from row 0 through the three-term relation
    /// in `λ_k`; returns the largest deviation.
    pub fn dual_recursion_deviation(&self) -> f64 {
        let s = &self.spectrum;
        let n = s.dim();
        let mut worst = 0.0f64;
        for k in 0..n {
            let lam = s.eigenvalues[k];
            let mut prev = 0.0;
            let mut cur = s.psi[0][k];
            for p in 0..n - 1 {
                let back = if p > 0 { s.alpha[p - 1] * prev } else { 0.0 };
                let next = -(lam * cur + back) / s.alpha[p];
                worst = worst.max((next - s.psi[p + 1][k]).abs());
                prev = cur;
                cur = next;
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangularReport {
    pub quadrilateral: [i64; 4],
    pub representation: Representation,
    pub dim: usize,
    pub sign: i8,
    pub deviation: f64,
    /// Column signs `s_ℓ` with `Σ_k ⟨ℓ̃|k⟩⟨ℓ|k⟩ = s_ℓ⟨ℓ̃|ℓ⟩` (no conjugation).
    pub transpose_column_signs: Option<Vec<i8>>,
    pub pass: bool,
}

pub fn check_duality_two_three(pair: FamilyPair, q: &Quadrilateral, rep: Representation, tol: f64) -> Result<DualityReport> {
    Ok(FamilySet::new(q, rep, tol)?.duality(pair))
}

pub fn check_triangular(q: &Quadrilateral, rep: Representation, tol: f64) -> Result<TriangularReport> {
    Ok(FamilySet::new(q, rep, tol)?.triangular())
}

/// Per-family summary row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub family: String,
    pub rows: usize,
    pub cols: usize,
    pub orthogonality_deviation: f64,
}

/// Everything `check families` reports for one quadrilateral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamiliesReport {
    pub quadrilateral: [i64; 4],
    pub representation: Representation,
    pub ell_range_twice: [i64; 2],
    pub ell_tilde_range_twice: [i64; 2],
    pub exact_orthogonality: bool,
    pub families: Vec<FamilySummary>,
    pub duality_ii: DualityReport,
    pub duality_iii: DualityReport,
    pub triangular: TriangularReport,
    pub recursion_residual: f64,
    pub dual_recursion_deviation: f64,
    pub dual_tridiagonal_deviation: Option<f64>,
    pub dual_eigen_residual: Option<f64>,
    pub pass: bool,
}

pub fn families_report(q: &Quadrilateral, rep: Representation, tol: f64) -> Result<FamiliesReport> {
    let set = FamilySet::new(q, rep, tol)?;
    let exact = check_duality_one(q);
    let n = q.dim();
    let families: Vec<FamilySummary> = Family::ALL
        .iter()
        .map(|&f| {
            let t = set.table(f);
            FamilySummary {
                family: f.name().to_string(),
                rows: t.rows.len(),
                cols: t.cols.len(),
                orthogonality_deviation: t.orthogonality_deviation(),
            }
        })
        .collect();
    let d2 = set.duality(FamilyPair::II);
    let d3 = set.duality(FamilyPair::III);
    let tri = set.triangular();
    let dual = set.dual_tridiagonal_check();
    let scale = set.spectrum.alpha.iter().cloned().fold(0.0f64, f64::max);
    let recursion_ok = set.spectrum.residual <= tol.max(1e-14) * scale.max(1.0) * 10.0;
    let orth_ok = families.iter().all(|f| f.orthogonality_deviation < 1e-12 * n as f64);
    let dual_ok = dual.is_none_or(|(d, r)| d < 1e-11 && r < 1e-11 * scale.max(1.0));
    let (lo, hi) = q.ell_range();
    let (tlo, thi) = q.ell_tilde_range();
    Ok(FamiliesReport {
        quadrilateral: q.twice(),
        representation: rep,
        ell_range_twice: [lo.twice(), hi.twice()],
        ell_tilde_range_twice: [tlo.twice(), thi.twice()],
        exact_orthogonality: exact.pass,
        pass: exact.pass && orth_ok && d2.pass && d3.pass && tri.pass && recursion_ok && dual_ok,
        families,
        duality_ii: d2,
        duality_iii: d3,
        triangular: tri,
        recursion_residual: set.spectrum.residual,
        dual_recursion_deviation: set.dual_recursion_deviation(),
        dual_tridiagonal_deviation: dual.map(|d| d.0),
        dual_eigen_residual: dual.map(|d| d.1),
    })
}
