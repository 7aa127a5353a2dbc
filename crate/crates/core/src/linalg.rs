use nalgebra::DMatrix;
use num_complex::Complex64;

/// Terms summed naively at the leaves of the pairwise tree.
const LEAF: u64 = 64;
/// Subtrees at least this large are split across the rayon pool.
const PARALLEL: u64 = 4096;

/// `Σ_{m < count} v_m v_m^†` with `v_m = state(m)`, summed pairwise.
///
/// The summation tree depends only on `count`, so the result is bit-identical
/// whether or not the halves run on different threads.
pub(crate) fn sum_outer_products<F>(count: u64, dim: usize, state: &F) -> DMatrix<Complex64>
where
    F: Fn(u64) -> Vec<Complex64> + Sync,
{
    fn rec<F>(lo: u64, hi: u64, dim: usize, state: &F) -> DMatrix<Complex64>
    where
        F: Fn(u64) -> Vec<Complex64> + Sync,
    {
        if hi - lo <= LEAF {
            let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
            for m in lo..hi {
                let v = state(m);
                for j in 0..dim {
                    let vj = v[j].conj();
                    for i in 0..dim {
                        acc[(i, j)] += v[i] * vj;
                    }
                }
            }
            return acc;
        }
        let mid = lo + (hi - lo) / 2;
        let (a, b) = if hi - lo >= PARALLEL {
            rayon::join(|| rec(lo, mid, dim, state), || rec(mid, hi, dim, state))
        } else {
            (rec(lo, mid, dim, state), rec(mid, hi, dim, state))
        };
        a + b
    }
    rec(0, count, dim, state)
}

/// Spectral norm of a Hermitian matrix: the largest `|λ|`.
pub(crate) fn hermitian_norm(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m)
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Largest entry of `|A − A^†|`.
pub(crate) fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}
