//! Symmetric tridiagonal eigenproblem: Sturm-sequence bisection for the
//! eigenvalues, inverse iteration with a pivoted tridiagonal solve for the
//! eigenvectors.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix with `diag.len() = n` and `off.len() = n − 1`.
#[derive(Clone, Debug)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Eigenpairs in ascending eigenvalue order; `vectors[k]` is the unit
/// eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

const MAX_RESTARTS: usize = 4;
const INVERSE_STEPS: usize = 4;

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length");
        SymTridiag { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < self.len() { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.len() {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < self.len() { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> f64 {
        let m = self.off.iter().map(|e| e * e).fold(1.0f64, f64::max);
        m * f64::MIN_POSITIVE
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * (lo.abs().max(hi.abs())).max(1e-300) * 4.0;
        lo -= pad;
        hi += pad;
        for _ in 0..2048 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.eigenvalue(k)).collect()
    }

    /// `‖(T − μ)v‖∞`.
    pub fn residual(&self, mu: f64, v: &[f64]) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut r = (self.diag[i] - mu) * v[i];
                if i > 0 {
                    r += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    r += self.off[i] * v[i + 1];
                }
                r.abs()
            })
            .fold(0.0, f64::max)
    }

    /// Solves `(T − μ) x = rhs` by Gaussian elimination with partial pivoting.
    /// Exactly singular pivots are replaced by `tiny`.
    fn shifted_solve(&self, mu: f64, rhs: &mut [f64], tiny: f64) {
        let n = self.len();
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - mu).collect();
        let mut dl = self.off.clone();
        let mut du = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                d[i + 1] -= fact * du[i];
                rhs[i + 1] -= fact * rhs[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du2[i];
                }
                du[i] = temp;
                let (ri, rj) = (rhs[i], rhs[i + 1]);
                rhs[i] = rj;
                rhs[i + 1] = ri - fact * rj;
            }
            dl[i] = 0.0;
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for i in (0..n).rev() {
            let mut r = rhs[i];
            if i + 1 < n {
                r -= du[i] * rhs[i + 1];
            }
            if i + 2 < n {
                r -= du2[i] * rhs[i + 2];
            }
            rhs[i] = r / d[i];
        }
    }

    /// Full eigendecomposition. `accept` bounds the eigenvector residual
    /// `‖(T − μ)v‖∞`; exceeding it after all restarts is a numeric error.
    pub fn eigen(&self, values: Vec<f64>, accept: f64) -> Result<EigenDecomposition> {
        let n = self.len();
        if n == 0 {
            return Ok(EigenDecomposition { values, vectors: vec![] });
        }
        if n == 1 {
            return Ok(EigenDecomposition { values, vectors: vec![vec![1.0]] });
        }
        let norm = self.norm().max(f64::MIN_POSITIVE);
        let tiny = f64::EPSILON * norm;
        let cluster = 1e-3 * norm;
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
        for (k, &mu) in values.iter().enumerate() {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for restart in 0..MAX_RESTARTS {
                let mut v = start_vector(n, k + restart * n);
                for _ in 0..INVERSE_STEPS {
                    self.shifted_solve(mu, &mut v, tiny);
                    for (j, w) in vectors.iter().enumerate() {
                        if (values[j] - mu).abs() < cluster {
                            let p = dot(w, &v);
                            v.iter_mut().zip(w).for_each(|(x, y)| *x -= p * y);
                        }
                    }
                    normalize(&mut v);
                }
                let res = self.residual(mu, &v);
                if best.as_ref().is_none_or(|(r, _)| res < *r) {
                    best = Some((res, v));
                }
                if res <= accept {
                    break;
                }
            }
            let (res, v) = best.unwrap();
            if res.is_nan() || res > accept {
                return Err(Error::Numeric(format!(
                    "inverse iteration did not converge for eigenvalue #{k} = {mu:e}: \
                     residual {res:e} > {accept:e} after {MAX_RESTARTS} restarts (n = {n})"
                )));
            }
            vectors.push(v);
        }
        Ok(EigenDecomposition { values, vectors })
    }
}

fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    // fixed low-discrepancy start, never orthogonal to a Jacobi eigenvector in practice
    let g = 0.618_033_988_749_894_9_f64;
    (0..n)
        .map(|i| 0.5 + ((i + 1) as f64 * g + seed as f64 * 0.414_213_562_373_095).fract())
        .collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let s = dot(v, v).sqrt();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}
