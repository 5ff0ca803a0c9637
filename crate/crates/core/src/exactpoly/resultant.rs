use std::collections::HashMap;

use super::poly::MPoly;
use super::PolyError;

/// Sylvester resultant with p's coefficient rows first, so Res_x(x-a, x-b) = a-b.
pub fn resultant(p: &MPoly, q: &MPoly, var: &str) -> Result<MPoly, PolyError> {
    let m = p.degree_in(var) as usize;
    let n = q.degree_in(var) as usize;
    if m == 0 || n == 0 {
        return Err(PolyError::ZeroDegree(var.to_string()));
    }
    let pc = p.to_univariate(var);
    let qc = q.to_univariate(var);
    let size = m + n;
    let mut rows: Vec<Vec<MPoly>> = vec![vec![MPoly::zero(); size]; size];
    // row k of p block: coefficients of x^(size-1-k-j) ... highest degree first
    for k in 0..n {
        for (d, c) in pc.iter().enumerate() {
            rows[k][k + (m - d)] = c.clone();
        }
    }
    for k in 0..m {
        for (d, c) in qc.iter().enumerate() {
            rows[n + k][k + (n - d)] = c.clone();
        }
    }
    Ok(determinant(&rows))
}

/// Determinant by Laplace expansion along rows, memoized over the set of used columns.
pub fn determinant(rows: &[Vec<MPoly>]) -> MPoly {
    let n = rows.len();
    if n == 0 {
        return MPoly::one();
    }
    assert!(n <= 24, "determinant size {n} too large for subset memoization");
    let mut memo: HashMap<u32, MPoly> = HashMap::new();
    det_rec(rows, 0, &mut memo)
}

fn det_rec(rows: &[Vec<MPoly>], used: u32, memo: &mut HashMap<u32, MPoly>) -> MPoly {
    let n = rows.len();
    let k = used.count_ones() as usize;
    if k == n {
        return MPoly::one();
    }
    if let Some(v) = memo.get(&used) {
        return v.clone();
    }
    let mut acc = MPoly::zero();
    let mut pos = 0usize;
    for j in 0..n {
        if used & (1 << j) != 0 {
            continue;
        }
        let a = &rows[k][j];
        if !a.is_zero() {
            let minor = det_rec(rows, used | (1 << j), memo);
            if !minor.is_zero() {
                let t = a * &minor;
                acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
            }
        }
        pos += 1;
    }
    memo.insert(used, acc.clone());
    acc
}
