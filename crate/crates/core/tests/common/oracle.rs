//! Slow reference computations that share no code with the library's
//! factorizations. Matrices are row-major `Vec<Vec<f64>>`.

#![allow(dead_code)]

pub type Mat = Vec<Vec<f64>>;

pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Mat {
    (0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let (m, n) = (a.len(), a[0].len());
    from_fn(n, m, |i, j| a[j][i])
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (m, p, n) = (a.len(), b.len(), b[0].len());
    assert_eq!(a[0].len(), p);
    from_fn(m, n, |i, j| (0..p).map(|t| a[i][t] * b[t][j]).sum())
}

pub fn sub(a: &Mat, b: &Mat) -> Mat {
    from_fn(a.len(), a[0].len(), |i, j| a[i][j] - b[i][j])
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
pub fn symmetric_eigenvalues(a: &Mat) -> Vec<f64> {
    let n = a.len();
    let mut a = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-32 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Singular values from the eigenvalues of the smaller Gram matrix,
/// descending, `min(m, n)` of them.
pub fn singular_values(a: &Mat) -> Vec<f64> {
    let at = transpose(a);
    let gram = if a.len() >= a[0].len() { matmul(&at, a) } else { matmul(a, &at) };
    symmetric_eigenvalues(&gram)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect()
}

/// Sines of the canonical angles between `range(m)` and `range(n)` for
/// orthonormal `m`, `n` with `cols(m) >= cols(n) = k`: the negatives of the
/// `k` most negative eigenvalues of `P_M - P_N`, ascending.
pub fn projector_difference_sines(m: &Mat, n: &Mat) -> Vec<f64> {
    let k = n[0].len();
    let pm = matmul(m, &transpose(m));
    let pn = matmul(n, &transpose(n));
    let ev = symmetric_eigenvalues(&sub(&pm, &pn));
    let mut sines: Vec<f64> = ev.iter().rev().take(k).map(|x| (-x).clamp(0.0, 1.0)).collect();
    sines.sort_by(|a, b| a.total_cmp(b));
    sines
}

/// Solves the symmetric positive definite system `g x = b` by Gaussian
/// elimination with partial pivoting.
pub fn solve(g: &Mat, b: &[f64]) -> Vec<f64> {
    let n = g.len();
    let mut aug: Mat = (0..n)
        .map(|i| {
            let mut row = g[i].clone();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))
            .unwrap();
        aug.swap(col, piv);
        for row in col + 1..n {
            let f = aug[row][col] / aug[col][col];
            for c in col..=n {
                aug[row][c] -= f * aug[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| aug[i][j] * x[j]).sum();
        x[i] = (aug[i][n] - s) / aug[i][i];
    }
    x
}

/// `‖X‖₂` for the minimum-norm `X` with `X Ω₁ = Ω₂` (full row rank `Ω₁`),
/// row by row from the normal equations `x (Ω₁Ω₁ᵀ) = ω₂ Ω₁ᵀ`.
pub fn leverage(omega1: &Mat, omega2: &Mat) -> f64 {
    let gram = matmul(omega1, &transpose(omega1));
    let rhs = matmul(omega2, &transpose(omega1));
    let x: Mat = rhs.iter().map(|row| solve(&gram, row)).collect();
    singular_values(&x).first().copied().unwrap_or(0.0)
}

/// `C_e` and `C_d` by direct evaluation.
pub fn gaussian_constants(n: f64, k: f64, rho: f64, delta: f64) -> (f64, f64) {
    let e = std::f64::consts::E;
    let ce = (k / (rho - 1.0)).sqrt() + e * ((k + rho) * (n - k)).sqrt() / rho;
    let cd = e * (k + rho).sqrt() / (rho + 1.0)
        * (2.0 / delta).powf(1.0 / (rho + 1.0))
        * ((n - k).sqrt() + (k + rho).sqrt() + (2.0 * (2.0 / delta).ln()).sqrt());
    (ce, cd)
}
