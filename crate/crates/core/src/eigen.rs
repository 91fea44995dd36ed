//! Eigenvalues of dense real symmetric matrices, nothing else.
//!
//! The spectrum sweep solves one dense eigenproblem per grid point and only
//! ever needs the eigenvalues, so this module implements the classic
//! eigenvalue-only pair (Householder reduction to tridiagonal form, then
//! implicit-shift QL iteration) instead of going through a general-purpose
//! decomposition that also accumulates transforms. On the 2^n-dimensional
//! interpolated Hamiltonians this runs an order of magnitude faster than a
//! full symmetric eigendecomposition while staying backward stable, which is
//! what keeps 10-qubit sweeps interactive.

use crate::error::{QombiError, Result};

/// QL sweeps per eigenvalue before giving up; convergence is cubic, so the
/// usual count is two or three.
const MAX_QL_SWEEPS: usize = 64;

/// Eigenvalues of a symmetric `n x n` matrix in ascending order.
///
/// `a` is the matrix in row-major order; only the lower triangle is read,
/// and the buffer is overwritten during the reduction.
pub(crate) fn symmetric_eigenvalues_ascending(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(a, n, &mut d, &mut e);
    tridiagonal_eigenvalues(&mut d, &mut e)?;
    d.sort_unstable_by(f64::total_cmp);
    Ok(d)
}

/// Householder reduction of the lower triangle to tridiagonal form, without
/// accumulating the transforms. On exit `d` holds the diagonal and `e[1..]`
/// the subdiagonal (`e[0]` is zero).
fn tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let (head, tail) = a.split_at_mut(i * n);
        let u = &mut tail[..i];
        if l == 0 {
            e[i] = u[0];
            continue;
        }
        let scale: f64 = u.iter().map(|x| x.abs()).sum();
        if scale == 0.0 {
            e[i] = u[l];
            continue;
        }
        let mut h = 0.0;
        for x in u.iter_mut() {
            *x /= scale;
            h += *x * *x;
        }
        let f = u[l];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        u[l] = f - g;
        // p = A u over the leading block, sweeping rows so every access is
        // sequential; each strictly-lower entry contributes to two slots.
        p[..i].fill(0.0);
        for j in 0..i {
            let uj = u[j];
            let row = &head[j * n..j * n + j];
            let mut dot = head[j * n + j] * uj;
            for (k, &ajk) in row.iter().enumerate() {
                dot += ajk * u[k];
                p[k] += ajk * uj;
            }
            p[j] += dot;
        }
        let mut up = 0.0;
        for j in 0..i {
            p[j] /= h;
            up += p[j] * u[j];
        }
        let kappa = up / (h + h);
        for j in 0..i {
            q[j] = p[j] - kappa * u[j];
        }
        // A <- A - u q^T - q u^T restricted to the lower triangle.
        for j in 0..i {
            let uj = u[j];
            let qj = q[j];
            let row = &mut head[j * n..j * n + j + 1];
            for (k, ajk) in row.iter_mut().enumerate() {
                *ajk -= uj * q[k] + qj * u[k];
            }
        }
    }
    e[0] = 0.0;
    for j in 0..n {
        d[j] = a[j * n + j];
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix, eigenvalues
/// only. `d` is the diagonal, `e[..n-1]` the subdiagonal; eigenvalues land in
/// `d` unordered.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    // Shift the subdiagonal down so e[k] couples d[k] and d[k + 1].
    e.copy_within(1..n, 0);
    e[n - 1] = 0.0;
    // Deflation floor: a coupling below eps times the Gershgorin bound is
    // noise at the accuracy this method can deliver anyway. Without the
    // absolute floor the element-relative test stalls whenever a cluster of
    // diagonal entries converges to zero, e.g. the heavily degenerate zero
    // level of the bare transverse-field term.
    let mut floor = 0.0f64;
    for i in 0..n {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        floor = floor.max(d[i].abs() + left + e[i].abs());
    }
    let floor = f64::EPSILON * floor;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= (f64::EPSILON * dd).max(floor) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(QombiError::Solver(
                    "tridiagonal QL iteration failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let mut s = 1.0;
            let mut c = 1.0;
            let mut shift = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // A rotation annihilated early; drop the shift applied so
                    // far and restart this eigenvalue's sweep.
                    d[i + 1] -= shift;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - shift;
                r = (d[i] - g) * s + 2.0 * c * b;
                shift = s * r;
                d[i + 1] = g + shift;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= shift;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
