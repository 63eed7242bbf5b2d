//! Dense complex linear algebra in the weighted inner product
//! `⟨f, g⟩_w = Σ w_i f_i conj(g_i)` — the discrete `L²(μ)`.
//!
//! All reductions run in a fixed sequential order; only independent output
//! columns are parallelized.

use crate::par;
use crate::C64;
use nalgebra::{DMatrix, DVector};

/// Weighted inner product `Σ w_i x_i conj(y_i)`.
pub fn dot_w(w: &[f64], x: &DVector<C64>, y: &DVector<C64>) -> C64 {
    debug_assert_eq!(w.len(), x.len());
    debug_assert_eq!(w.len(), y.len());
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..w.len() {
        acc += w[i] * x[i] * y[i].conj();
    }
    acc
}

/// Weighted norm `sqrt(Σ w_i |x_i|²)`.
pub fn norm_w(w: &[f64], x: &DVector<C64>) -> f64 {
    let mut acc = 0.0;
    for i in 0..w.len() {
        acc += w[i] * x[i].norm_sqr();
    }
    acc.sqrt()
}

/// Matrix product `a * b`, parallel over the columns of the result.
pub fn matmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    assert_eq!(a.ncols(), b.nrows(), "matmul dimension mismatch");
    let n = a.nrows();
    let k = b.ncols();
    let mut data = vec![C64::new(0.0, 0.0); n * k];
    par::for_each_chunk_mut(&mut data, n, |j, col| {
        for l in 0..a.ncols() {
            let s = b[(l, j)];
            if s.re == 0.0 && s.im == 0.0 {
                continue;
            }
            let ac = a.column(l);
            for i in 0..n {
                col[i] += ac[i] * s;
            }
        }
    });
    DMatrix::from_vec(n, k, data)
}

/// Weighted Frobenius norm of an operator between weighted spaces:
/// `‖X‖² = Σ_{ij} (w_out_i / w_in_j) |X_ij|²`.
pub fn frobenius_w(w_out: &[f64], w_in: &[f64], x: &DMatrix<C64>) -> f64 {
    let mut acc = 0.0;
    for (col, win) in x.column_iter().zip(w_in) {
        let mut cacc = 0.0;
        for i in 0..col.len() {
            cacc += w_out[i] * col[i].norm_sqr();
        }
        acc += cacc / win;
    }
    acc.sqrt()
}

/// Weighted adjoint: `⟨A f, g⟩_{w_out} = ⟨f, adjoint(A) g⟩_{w_in}`.
pub fn adjoint_w(w_out: &[f64], w_in: &[f64], a: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = DMatrix::from_element(a.ncols(), a.nrows(), C64::new(0.0, 0.0));
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            out[(j, i)] = a[(i, j)].conj() * (w_out[i] / w_in[j]);
        }
    }
    out
}

/// Operator-norm estimate of a (not necessarily self-adjoint) matrix on the
/// weighted space via power iteration on `A* A`. Coarse tolerance is fine for
/// the diagnostics that use it.
pub fn op_norm_w(w: &[f64], a: &DMatrix<C64>, iters: usize) -> f64 {
    let n = a.ncols();
    let at = adjoint_w(w, w, a);
    let mut v = DVector::from_fn(n, |i, _| C64::new(1.0 / ((i + 2) as f64), 0.03 * i as f64));
    let nv = norm_w(w, &v);
    v /= C64::new(nv, 0.0);
    let mut lambda = 0.0;
    for _ in 0..iters {
        let av = a * &v;
        let mut u = &at * &av;
        let nu = norm_w(w, &u);
        if nu == 0.0 {
            return 0.0;
        }
        u /= C64::new(nu, 0.0);
        lambda = nu;
        v = u;
    }
    lambda.sqrt()
}
