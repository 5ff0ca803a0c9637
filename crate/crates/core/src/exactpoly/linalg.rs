use super::gauss::GaussRational;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<GaussRational>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&k| !m[k][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..rows {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                let (src, dst) = if k < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[k])
                } else {
                    let (a, b) = m.split_at_mut(k);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &(s * &f);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<GaussRational>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

/// Basis of the right nullspace {v : M v = 0}.
pub fn nullspace(m: &[Vec<GaussRational>]) -> Vec<Vec<GaussRational>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut w = m.to_vec();
    let piv = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![GaussRational::zero(); cols];
            v[fc] = GaussRational::one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = -&w[r][fc];
            }
            v
        })
        .collect()
}

/// Solves a square system exactly; None if singular.
pub fn solve(a: &[Vec<GaussRational>], b: &[GaussRational]) -> Option<Vec<GaussRational>> {
    let n = a.len();
    let mut aug: Vec<Vec<GaussRational>> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    let piv = rref(&mut aug);
    if piv.len() != n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.iter().map(|row| row[n].clone()).collect())
}
