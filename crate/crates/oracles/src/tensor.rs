//! `[J12², J23²]/(−4i)` on the rotation-invariant subspace of four spins,
//! built from spin matrices in the full tensor product.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use recoupling::Quadrilateral;

/// Basis of the total-M = 0 sector: twice-valued projections per spin.
fn sector(tj: [i64; 4], total: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for a in (-tj[0]..=tj[0]).step_by(2) {
        for b in (-tj[1]..=tj[1]).step_by(2) {
            for c in (-tj[2]..=tj[2]).step_by(2) {
                let d = total - a - b - c;
                if d.abs() <= tj[3] && (tj[3] - d) % 2 == 0 {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// `⟨m+1|J+|m⟩` for spin `tj/2`.
fn raise(tj: i64, tm: i64) -> f64 {
    let (j, m) = (tj as f64 / 2.0, tm as f64 / 2.0);
    ((j - m) * (j + m + 1.0)).sqrt()
}

/// `(J_p + J_q)²` restricted to the M = 0 sector.
fn pair_casimir(tj: [i64; 4], basis: &[[i64; 4]], p: usize, q: usize) -> DMatrix<f64> {
    let n = basis.len();
    let index: std::collections::HashMap<[i64; 4], usize> = basis.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut m = DMatrix::zeros(n, n);
    let jj = |t: i64| {
        let j = t as f64 / 2.0;
        j * (j + 1.0)
    };
    for (col, s) in basis.iter().enumerate() {
        // J_p² + J_q² + 2 J_pz J_qz
        m[(col, col)] += jj(tj[p]) + jj(tj[q]) + 2.0 * (s[p] as f64 / 2.0) * (s[q] as f64 / 2.0);
        // J_p+ J_q− + J_p− J_q+
        for (dp, dq) in [(2i64, -2i64), (-2, 2)] {
            let mut t = *s;
            t[p] += dp;
            t[q] += dq;
            if t[p].abs() > tj[p] || t[q].abs() > tj[q] {
                continue;
            }
            let fp = if dp > 0 { raise(tj[p], s[p]) } else { raise(tj[p], t[p]) };
            let fq = if dq > 0 { raise(tj[q], s[q]) } else { raise(tj[q], t[q]) };
            if let Some(&row) = index.get(&t) {
                m[(row, col)] += fp * fq;
            }
        }
    }
    m
}

/// Ascending eigenvalues of `[J12², J23²]/(−4i)` on the invariant subspace
/// of spins `(a, b, c, d)`.
pub fn commutator_eigenvalues(q: &Quadrilateral) -> Vec<f64> {
    let tj = q.twice();
    let zero = sector(tj, 0);
    let one = sector(tj, 2);
    let idx1: std::collections::HashMap<[i64; 4], usize> = one.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    // total J+ from M = 0 to M = 1; its kernel is the invariant subspace
    let mut jplus = DMatrix::<f64>::zeros(one.len().max(1), zero.len());
    for (col, s) in zero.iter().enumerate() {
        for k in 0..4 {
            if s[k] + 2 > tj[k] {
                continue;
            }
            let mut t = *s;
            t[k] += 2;
            jplus[(idx1[&t], col)] += raise(tj[k], s[k]);
        }
    }
    let gram = jplus.transpose() * &jplus;
    let eig = SymmetricEigen::new(gram);
    let kernel: Vec<usize> = (0..zero.len()).filter(|&i| eig.eigenvalues[i] < 0.5).collect();
    assert_eq!(kernel.len(), q.dim(), "invariant subspace dimension");
    let v = DMatrix::from_fn(zero.len(), kernel.len(), |r, c| eig.eigenvectors[(r, kernel[c])]);
    let a = v.transpose() * pair_casimir(tj, &zero, 0, 1) * &v;
    let b = v.transpose() * pair_casimir(tj, &zero, 1, 2) * &v;
    let c = &a * &b - &b * &a;
    let n = c.nrows();
    let h = DMatrix::from_fn(n, n, |i, j| Complex::new(0.0, 0.25 * c[(i, j)]));
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
