//! Dense 4x4 helpers for the metric and curvature code. The workspace only
//! ever meets fixed-size symmetric matrices, so these stay allocation-free
//! instead of pulling in a matrix crate.

pub type Mat4 = [[f64; 4]; 4];

pub const ZERO4: Mat4 = [[0.0; 4]; 4];

/// Determinant via LU with partial pivoting.
pub fn det4(m: &Mat4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let mut pivot = col;
        for row in col + 1..4 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let factor = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    det
}

/// Inverse via Gauss-Jordan with partial pivoting; `None` when singular to
/// working precision.
pub fn inv4(m: &Mat4) -> Option<Mat4> {
    let mut a = *m;
    let mut inv: Mat4 = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let mut pivot = col;
        for row in col + 1..4 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col] == 0.0 || !a[pivot][col].is_finite() {
            return None;
        }
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col];
        for k in 0..4 {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for row in 0..4 {
            if row != col {
                let factor = a[row][col];
                if factor != 0.0 {
                    for k in 0..4 {
                        a[row][k] -= factor * a[col][k];
                        inv[row][k] -= factor * inv[col][k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Cholesky factor `L` (lower triangular, `m = L L^T`); `None` unless `m` is
/// symmetric positive definite to working precision.
pub fn cholesky4(m: &Mat4) -> Option<Mat4> {
    let mut l: Mat4 = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..=i {
            let mut sum = m[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(sum > 0.0) {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Some(l)
}

/// Inverse of a lower-triangular matrix by forward substitution.
pub fn inv_lower4(l: &Mat4) -> Mat4 {
    let mut inv: Mat4 = [[0.0; 4]; 4];
    for col in 0..4 {
        inv[col][col] = 1.0 / l[col][col];
        for row in col + 1..4 {
            let mut sum = 0.0;
            for k in col..row {
                sum += l[row][k] * inv[k][col];
            }
            inv[row][col] = -sum / l[row][row];
        }
    }
    inv
}

/// Largest absolute entry.
pub fn max_abs(m: &Mat4) -> f64 {
    m.iter()
        .flatten()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Mat4 = [
        [4.0, 1.0, 0.2, 0.0],
        [1.0, 3.0, 0.5, 0.1],
        [0.2, 0.5, 2.0, 0.3],
        [0.0, 0.1, 0.3, 1.5],
    ];

    #[test]
    fn inverse_round_trips() {
        let inv = inv4(&A).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut dot = 0.0;
                for k in 0..4 {
                    dot += A[i][k] * inv[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-13, "({i},{j}) = {dot}");
            }
        }
    }

    #[test]
    fn determinant_matches_cholesky_product() {
        let l = cholesky4(&A).unwrap();
        let prod: f64 = (0..4).map(|i| l[i][i]).product();
        assert!((det4(&A) - prod * prod).abs() < 1e-12);
    }

    #[test]
    fn cholesky_frame_orthonormalizes() {
        let l = cholesky4(&A).unwrap();
        let e = inv_lower4(&l);
        // Rows of L^-1 are g-orthonormal frame vectors.
        for a in 0..4 {
            for b in 0..4 {
                let mut dot = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        dot += e[a][i] * A[i][j] * e[b][j];
                    }
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-13, "({a},{b}) = {dot}");
            }
        }
    }

    #[test]
    fn rejects_indefinite_matrices() {
        let mut bad = A;
        bad[2][2] = -2.0;
        assert!(cholesky4(&bad).is_none());
        let singular: Mat4 = [
            [1.0, 2.0, 0.0, 0.0],
            [2.0, 4.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert!(inv4(&singular).is_none());
        assert_eq!(det4(&singular), 0.0);
    }
}
