//! Dense phase-1 simplex for small feasibility problems `A x = b, x ≥ 0`.

use alloc::vec;
use alloc::vec::Vec;

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 10_000;

/// Returns a nonnegative `x` with `A x = b` when the minimal total
/// artificial infeasibility is at most `tol`, `None` otherwise.
///
/// Uses Bland's rule, so degenerate pivots cannot cycle. Redundant equality
/// rows are fine; their artificials stay basic at zero.
pub(crate) fn phase_one(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let mut t = vec![0.0; m * width];
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i * width + j] = sign * a[i][j];
        }
        t[i * width + n + i] = 1.0;
        t[i * width + n + m] = sign * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the phase-1 objective: minimize the sum of artificials.
    let mut reduced = vec![0.0; n + m];
    let mut pivots = 0;
    loop {
        for (j, r) in reduced.iter_mut().enumerate() {
            let cost = if j >= n { 1.0 } else { 0.0 };
            let z: f64 = (0..m).map(|i| if basis[i] >= n { t[i * width + j] } else { 0.0 }).sum();
            *r = cost - z;
        }
        let Some(enter) = (0..n + m).find(|&j| reduced[j] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let coef = t[i * width + enter];
            if coef > PIVOT_EPS {
                let ratio = t[i * width + n + m] / coef;
                let better = ratio < best - PIVOT_EPS
                    || (ratio <= best + PIVOT_EPS && leave.is_some_and(|l| basis[i] < basis[l]));
                if leave.is_none() || better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        // Phase 1 is bounded below by zero, so an entering column always has a pivot row.
        let row = leave?;
        pivot(&mut t, width, m, row, enter);
        basis[row] = enter;
        pivots += 1;
        if pivots > MAX_PIVOTS {
            return None;
        }
    }

    let infeasibility: f64 = (0..m).filter(|&i| basis[i] >= n).map(|i| t[i * width + n + m]).sum();
    if infeasibility > tol {
        return None;
    }
    let mut x = vec![0.0; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i * width + n + m];
        }
    }
    Some(x)
}

fn pivot(t: &mut [f64], width: usize, m: usize, row: usize, col: usize) {
    let p = t[row * width + col];
    for k in 0..width {
        t[row * width + k] /= p;
    }
    for i in 0..m {
        if i == row {
            continue;
        }
        let factor = t[i * width + col];
        if factor != 0.0 {
            for k in 0..width {
                t[i * width + k] -= factor * t[row * width + k];
            }
        }
    }
}
