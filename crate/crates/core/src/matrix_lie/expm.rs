use super::{LieError, Mat};

/// Norm above which [`expm`] reports overflow instead of computing.
pub const EXPM_NORM_LIMIT: f64 = 700.0;

/// Matrix exponential (scaling and squaring with Padé approximants, as
/// provided by nalgebra), with finiteness checks on input and output.
pub fn expm(x: &Mat) -> Result<Mat, LieError> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(LieError::NonFinite);
    }
    let norm = x.norm();
    if norm > EXPM_NORM_LIMIT {
        return Err(LieError::Overflow { norm });
    }
    let e = x.clone().exp();
    if e.iter().any(|v| !v.is_finite()) {
        return Err(LieError::Overflow { norm });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_rotation() {
        assert_eq!(expm(&Mat::zeros(3, 3)).unwrap(), Mat::identity(3, 3));
        let theta: f64 = 0.3;
        let r = expm(&Mat::from_row_slice(2, 2, &[0.0, theta, -theta, 0.0])).unwrap();
        let oracle = Mat::from_row_slice(2, 2, &[theta.cos(), theta.sin(), -theta.sin(), theta.cos()]);
        assert!((r - oracle).norm() < 1e-15);
    }

    #[test]
    fn inverse_law() {
        let x = Mat::from_row_slice(3, 3, &[0.1, 2.0, -1.0, 0.3, -0.5, 0.7, 1.1, 0.0, 0.2]);
        let prod = expm(&x).unwrap() * expm(&(-&x)).unwrap();
        assert!((prod - Mat::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn extreme_norm_overflows() {
        let x = Mat::from_element(2, 2, 1e6);
        assert!(matches!(expm(&x), Err(LieError::Overflow { .. })));
        let mut bad = Mat::zeros(2, 2);
        bad[(0, 0)] = f64::NAN;
        assert_eq!(expm(&bad), Err(LieError::NonFinite));
    }
}
