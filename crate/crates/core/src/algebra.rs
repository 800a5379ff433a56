//! Matrix realization of the Racah quadratic algebra on the `ℓ` lattice:
//! `K1 = J12²`, `K2 = J23²`, `K3 = [K1, K2]`, closure fit and duality.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::angmom::recoupling_matrix_f64;
use crate::error::{Error, Result};
use crate::quad::Quadrilateral;

/// `K3 = −4i·K`, so eigenvalues of `K3/(−4i)` are `ORACLE_SCALE·λ_k`
/// for the volume spectrum `λ_k` with Heron couplings.
pub const ORACLE_SCALE: f64 = 4.0;

/// Generators in the `ℓ` basis with the eigenbases of `K1` and `K2`
/// (as columns).
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTriple {
    pub quad: Quadrilateral,
    pub k1: DMatrix<f64>,
    pub k2: DMatrix<f64>,
    /// Real antisymmetric.
    pub k3: DMatrix<f64>,
    pub basis1: DMatrix<f64>,
    pub basis2: DMatrix<f64>,
}

impl GeneratorTriple {
    pub fn dim(&self) -> usize {
        self.k1.nrows()
    }

    /// `[K1,[K2,K3]] + [K2,[K3,K1]] + [K3,[K1,K2]]`, Frobenius norm.
    pub fn jacobi_defect(&self) -> f64 {
        let (a, b, c) = (&self.k1, &self.k2, &self.k3);
        (comm(a, &comm(b, c)) + comm(b, &comm(c, a)) + comm(c, &comm(a, b))).norm()
    }
}

pub fn comm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

pub fn anticomm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b + b * a
}

/// `K1 = diag(ℓ(ℓ+1))`, `K2 = U diag(ℓ̃(ℓ̃+1)) Uᵀ` with `U[ℓ, ℓ̃] = ⟨ℓ̃|ℓ⟩`.
pub fn realize(q: &Quadrilateral) -> GeneratorTriple {
    let n = q.dim();
    let u = recoupling_matrix_f64(q).transpose();
    let chi = DVector::from_iterator(n, q.ell_lattice().into_iter().map(|l| l.casimir()));
    let mu = DVector::from_iterator(n, q.ell_tilde_lattice().into_iter().map(|l| l.casimir()));
    let k1 = DMatrix::from_diagonal(&chi);
    let k2 = &u * DMatrix::from_diagonal(&mu) * u.transpose();
    let k3 = comm(&k1, &k2);
    GeneratorTriple {
        quad: *q,
        k1,
        k2,
        k3,
        basis1: DMatrix::identity(n, n),
        basis2: u,
    }
}

/// `K1 ⇄ K2`, `K3 ↦ −K3`.
pub fn duality_map(g: &GeneratorTriple) -> GeneratorTriple {
    GeneratorTriple {
        quad: g.quad,
        k1: g.k2.clone(),
        k2: g.k1.clone(),
        k3: -&g.k3,
        basis1: g.basis2.clone(),
        basis2: g.basis1.clone(),
    }
}

/// Constants of the two closure relations (with `R = 0`)
///
/// `[K2,K3] = A1{K1,K2} + A2 K2² + C1 K1 + D K2 + G1`,
/// `[K3,K1] = A1 K1² + A2{K1,K2} + C2 K2 + D K1 + G2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureConstants {
    pub a1: f64,
    pub a2: f64,
    pub c1: f64,
    pub c2: f64,
    pub d: f64,
    pub g1: f64,
    pub g2: f64,
    pub r: f64,
    /// Largest Frobenius deviation of the two relations.
    pub residual: f64,
    /// `‖K1‖_F·‖K2‖_F`, the scale residuals are judged against.
    pub scale: f64,
    pub rank: usize,
    pub rank_deficient: bool,
    /// Basis of the null space of the (column-scaled) design matrix, when rank-deficient.
    pub null_space: Vec<[f64; 7]>,
}

impl StructureConstants {
    pub fn as_array(&self) -> [f64; 7] {
        [self.a1, self.a2, self.c1, self.c2, self.d, self.g1, self.g2]
    }

    /// The constants of the dual triple.
    pub fn swapped(&self) -> [f64; 7] {
        [self.a2, self.a1, self.c2, self.c1, self.d, self.g2, self.g1]
    }

    pub fn relative_residual(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual / self.scale
        } else {
            self.residual
        }
    }
}

fn relation_terms(g: &GeneratorTriple) -> [DMatrix<f64>; 2] {
    let (k1, k2, k3) = (&g.k1, &g.k2, &g.k3);
    [comm(k2, k3), comm(k3, k1)]
}

/// Design columns per unknown `[A1, A2, C1, C2, D, G1, G2]`, for each relation.
fn design_blocks(g: &GeneratorTriple) -> [[DMatrix<f64>; 7]; 2] {
    let n = g.dim();
    let (k1, k2) = (&g.k1, &g.k2);
    let z = DMatrix::<f64>::zeros(n, n);
    let id = DMatrix::<f64>::identity(n, n);
    let ac = anticomm(k1, k2);
    let k1sq = k1 * k1;
    let k2sq = k2 * k2;
    [
        [ac.clone(), k2sq, k1.clone(), z.clone(), k2.clone(), id.clone(), z.clone()],
        [k1sq, ac, z.clone(), k2.clone(), k1.clone(), z, id],
    ]
}

/// Evaluates both relations' Frobenius deviations at the given constants.
pub fn closure_residuals(g: &GeneratorTriple, x: &[f64; 7]) -> [f64; 2] {
    let lhs = relation_terms(g);
    let blocks = design_blocks(g);
    let mut out = [0.0; 2];
    for r in 0..2 {
        let mut rhs = DMatrix::<f64>::zeros(g.dim(), g.dim());
        for (j, m) in blocks[r].iter().enumerate() {
            rhs += m * x[j];
        }
        out[r] = (&lhs[r] - rhs).norm();
    }
    out
}

/// Joint least-squares fit of the seven constants over both relations.
///
/// Columns are scaled to unit norm before a minimum-norm SVD solve; rank is
/// counted with a relative singular-value cutoff.
pub fn fit_structure_constants(g: &GeneratorTriple) -> Result<StructureConstants> {
    let n = g.dim();
    if n == 0 {
        return Err(Error::Domain("empty generator triple".into()));
    }
    let lhs = relation_terms(g);
    let blocks = design_blocks(g);
    // padding to 7 rows keeps a full V^T for the null space
    let rows = (2 * n * n).max(7);
    let mut a = DMatrix::<f64>::zeros(rows, 7);
    let mut b = DVector::<f64>::zeros(rows);
    for r in 0..2 {
        for (idx, v) in lhs[r].iter().enumerate() {
            b[r * n * n + idx] = *v;
        }
        for j in 0..7 {
            for (idx, v) in blocks[r][j].iter().enumerate() {
                a[(r * n * n + idx, j)] = *v;
            }
        }
    }
    let mut scales = [1.0; 7];
    for (j, scale) in scales.iter_mut().enumerate() {
        let s = a.column(j).norm();
        if s > 0.0 {
            *scale = s;
            a.column_mut(j).scale_mut(1.0 / s);
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cutoff = 1e-10 * smax.max(f64::MIN_POSITIVE);
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let y = svd
        .solve(&b, cutoff)
        .map_err(|e| Error::Numeric(format!("least-squares solve failed: {e}")))?;
    let mut x = [0.0; 7];
    for j in 0..7 {
        x[j] = y[j] / scales[j];
    }
    let mut null_space = Vec::new();
    if rank < 7 {
        let vt = svd.v_t.as_ref().expect("requested V^T");
        for (i, s) in svd.singular_values.iter().enumerate() {
            if *s <= cutoff {
                let mut v = [0.0; 7];
                for j in 0..7 {
                    v[j] = vt[(i, j)];
                }
                null_space.push(v);
            }
        }
    }
    let res = closure_residuals(g, &x);
    Ok(StructureConstants {
        a1: x[0],
        a2: x[1],
        c1: x[2],
        c2: x[3],
        d: x[4],
        g1: x[5],
        g2: x[6],
        r: 0.0,
        residual: res[0].max(res[1]),
        scale: g.k1.norm() * g.k2.norm(),
        rank,
        rank_deficient: rank < 7,
        null_space,
    })
}

/// Which operator to express in which eigenbasis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TridiagonalView {
    K2InK1Basis,
    K1InK2Basis,
    K3InK1Basis,
}

/// Tridiagonal coefficients; `lower[p]` is entry `(p+1, p)`, `upper[p]` is `(p, p+1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalData {
    pub diag: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Largest entry outside the three central diagonals.
    pub leakage: f64,
    /// For `K3InK1Basis`: deviation from the commutator pattern
    /// `(χ_{p+1}−χ_p)·K2(p+1,p)` below and `−(χ_{p+1}−χ_p)·K2(p,p+1)` above.
    pub pattern_deviation: Option<f64>,
}

/// Extracts tridiagonal data; leakage above `1e−12·max(1, max|entry|)` is a
/// structural error.
pub fn tridiagonal_data(g: &GeneratorTriple, which: TridiagonalView) -> Result<TridiagonalData> {
    let m = match which {
        TridiagonalView::K2InK1Basis => g.basis1.transpose() * &g.k2 * &g.basis1,
        TridiagonalView::K1InK2Basis => g.basis2.transpose() * &g.k1 * &g.basis2,
        TridiagonalView::K3InK1Basis => g.basis1.transpose() * &g.k3 * &g.basis1,
    };
    let n = m.nrows();
    let mut leakage = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i.abs_diff(j) > 1 {
                leakage = leakage.max(m[(i, j)].abs());
            }
        }
    }
    let scale = m.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    if leakage > 1e-12 * scale {
        return Err(Error::Structural(format!(
            "{which:?} of {}: off-tridiagonal leakage {leakage:e}",
            g.quad
        )));
    }
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    let lower: Vec<f64> = (0..n.saturating_sub(1)).map(|i| m[(i + 1, i)]).collect();
    let upper: Vec<f64> = (0..n.saturating_sub(1)).map(|i| m[(i, i + 1)]).collect();
    let pattern_deviation = match which {
        TridiagonalView::K3InK1Basis => {
            let k1 = g.basis1.transpose() * &g.k1 * &g.basis1;
            let k2 = g.basis1.transpose() * &g.k2 * &g.basis1;
            let mut dev = diag.iter().fold(0.0f64, |s, v| s.max(v.abs()));
            for p in 0..n.saturating_sub(1) {
                let gap = k1[(p + 1, p + 1)] - k1[(p, p)];
                dev = dev.max((lower[p] - gap * k2[(p + 1, p)]).abs());
                dev = dev.max((upper[p] + gap * k2[(p, p + 1)]).abs());
            }
            Some(dev)
        }
        _ => None,
    };
    Ok(TridiagonalData {
        diag,
        lower,
        upper,
        leakage,
        pattern_deviation,
    })
}

/// Eigenvalues of the Hermitian matrix `K3/(−4i)`, ascending.
pub fn commutator_spectrum(g: &GeneratorTriple) -> Vec<f64> {
    use nalgebra::Complex;
    let n = g.dim();
    let h = DMatrix::from_fn(n, n, |i, j| Complex::new(0.0, 0.25 * g.k3[(i, j)]));
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}
