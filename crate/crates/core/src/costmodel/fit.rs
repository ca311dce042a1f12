use crate::scalar::Scalar;

/// Ordinary least squares result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T, const K: usize> {
    pub coefficients: [T; K],
    /// Coefficient of determination; 1 for a perfect fit, and also 1 when the
    /// targets have no variance and are reproduced exactly.
    pub r_squared: T,
}

/// Fits `y ≈ Σ_k coef_k · x_k` through the normal equations.
///
/// Include a column of ones for an intercept. Returns `None` when the system
/// is singular or there are fewer rows than unknowns.
pub fn least_squares<T: Scalar, const K: usize>(rows: &[[T; K]], y: &[T]) -> Option<LinearFit<T, K>> {
    if rows.len() < K || rows.len() != y.len() {
        return None;
    }
    // Normal equations; columns are scaled to unit max-norm first so the
    // pivot test is meaningful for features of very different magnitude.
    let mut scale = [T::zero(); K];
    for row in rows {
        for k in 0..K {
            scale[k] = scale[k].max(row[k].abs());
        }
    }
    if scale.iter().any(|s| *s <= T::zero()) {
        return None;
    }

    let mut a = [[T::zero(); K]; K];
    let mut b = [T::zero(); K];
    for (row, &t) in rows.iter().zip(y) {
        for i in 0..K {
            let xi = row[i] / scale[i];
            b[i] = b[i] + xi * t;
            for j in 0..K {
                a[i][j] = a[i][j] + xi * row[j] / scale[j];
            }
        }
    }

    let eps = T::epsilon().sqrt() * T::of_usize(rows.len());
    for col in 0..K {
        let pivot = (col..K).max_by(|&p, &q| {
            a[p][col]
                .abs()
                .partial_cmp(&a[q][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() <= eps {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..K {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..K {
                    a[r][c] = a[r][c] - f * a[col][c];
                }
                b[r] = b[r] - f * b[col];
            }
        }
    }
    let mut coefficients = [T::zero(); K];
    for k in 0..K {
        coefficients[k] = b[k] / a[k][k] / scale[k];
    }

    let n = T::of_usize(y.len());
    let mean = y.iter().fold(T::zero(), |s, &v| s + v) / n;
    let (mut ss_res, mut ss_tot) = (T::zero(), T::zero());
    for (row, &t) in rows.iter().zip(y) {
        let pred = row
            .iter()
            .zip(&coefficients)
            .fold(T::zero(), |s, (&x, &c)| s + x * c);
        ss_res = ss_res + (t - pred) * (t - pred);
        ss_tot = ss_tot + (t - mean) * (t - mean);
    }
    let r_squared = if ss_tot > T::zero() {
        T::one() - ss_res / ss_tot
    } else if ss_res <= T::epsilon() * n {
        T::one()
    } else {
        T::zero()
    };
    Some(LinearFit {
        coefficients,
        r_squared,
    })
}
