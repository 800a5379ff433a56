//! The Regge–classical group of order 144 as `S4 × S3` acting on Bargmann's
//! triad sums `α` and quadrangle sums `β`.

use std::collections::BTreeSet;

use recoupling::SixJArgs;

fn permutations<const N: usize>() -> Vec<[usize; N]> {
    fn rec<const N: usize>(cur: &mut Vec<usize>, used: &mut [bool; N], out: &mut Vec<[usize; N]>) {
        if cur.len() == N {
            let mut a = [0; N];
            a.copy_from_slice(cur);
            out.push(a);
            return;
        }
        for i in 0..N {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut [false; N], &mut out);
    out
}

/// All images of admissible `args` under the 144 permutations of the
/// Bargmann array (twice-valued entries, so halving is exact).
pub fn orbit(args: &SixJArgs) -> BTreeSet<SixJArgs> {
    let [j1, j2, j3, j4, j5, j6] = args.twice();
    let alpha = [j1 + j2 + j3, j1 + j5 + j6, j4 + j2 + j6, j4 + j5 + j3];
    let beta = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4];
    let mut out = BTreeSet::new();
    for pa in permutations::<4>() {
        for pb in permutations::<3>() {
            let a = pa.map(|i| alpha[i]);
            let b = pb.map(|i| beta[i]);
            let img = [
                (a[0] + a[1] - b[1]) / 2,
                (a[0] + a[2] - b[2]) / 2,
                (a[0] + a[3] - b[0]) / 2,
                (a[2] + a[3] - b[1]) / 2,
                (a[1] + a[3] - b[2]) / 2,
                (a[1] + a[2] - b[0]) / 2,
            ];
            out.insert(SixJArgs::from_twice(img));
        }
    }
    out
}
