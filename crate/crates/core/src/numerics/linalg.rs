//! Dense Gaussian elimination on small complex matrices.

use super::complex::ExtendedComplex;

fn pivot_row(m: &[Vec<ExtendedComplex>], col: usize) -> Option<usize> {
    let mut best: Option<(usize, _)> = None;
    for (r, row) in m.iter().enumerate().skip(col) {
        let mag = row[col].abs_max_part();
        if mag.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| mag > *b) {
            best = Some((r, mag));
        }
    }
    best.map(|(r, _)| r)
}

/// Determinant via partial pivoting; the matrix is consumed.
pub fn determinant(mut m: Vec<Vec<ExtendedComplex>>) -> ExtendedComplex {
    let n = m.len();
    let prec = m.iter().flatten().map(|c| c.prec()).max().unwrap_or(64);
    let mut det = ExtendedComplex::one(prec);
    for col in 0..n {
        let Some(piv) = pivot_row(&m, col) else {
            return ExtendedComplex::zero(prec);
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let inv = m[col][col].recip();
        det = &det * &m[col][col];
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &sub;
            }
        }
    }
    det
}

/// Solves `m x = b`; `None` when a zero pivot appears.
pub fn solve(mut m: Vec<Vec<ExtendedComplex>>, mut b: Vec<ExtendedComplex>) -> Option<Vec<ExtendedComplex>> {
    let n = m.len();
    for col in 0..n {
        let piv = pivot_row(&m, col)?;
        m.swap(piv, col);
        b.swap(piv, col);
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &sub;
            }
            let sub = &factor * &b[col];
            b[r] = &b[r] - &sub;
        }
    }
    let mut x = b.clone();
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = &acc - &(&m[r][c] * &x[c]);
        }
        x[r] = &acc / &m[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Vec<Vec<ExtendedComplex>> {
        rows.iter().map(|r| r.iter().map(|&x| ExtendedComplex::from_f64(128, x, 0.0)).collect()).collect()
    }

    #[test]
    fn det_and_solve_small_system() {
        let m = mat(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 1.0]]);
        // expansion along the first row: 0 - 2(1 - 0) + 1(0 - 3) = -5
        assert!((determinant(m.clone()).re.to_f64() + 5.0).abs() < 1e-30);
        let b: Vec<_> = [3.0, 2.0, 4.0].iter().map(|&x| ExtendedComplex::from_f64(128, x, 0.0)).collect();
        let x = solve(m, b).unwrap();
        for (xi, e) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((xi.re.to_f64() - e).abs() < 1e-30);
        }
        let singular = mat(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(determinant(singular.clone()).is_zero());
        assert!(solve(singular, vec![ExtendedComplex::one(128); 2]).is_none());
    }
}
