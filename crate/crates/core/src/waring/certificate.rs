use super::binary::apolar_kernel;
use crate::error::{Error, Result};
use crate::linalg::{rank_with_tol, DenseMatrix};
use crate::poly::{exponents, power_of_linear, residual, HomogeneousPoly, WaringDecomposition};
use num_complex::Complex64 as C64;

/// Relative singular-value cutoff for the stacked span test.
pub const CERTIFICATE_RANK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub passed: bool,
    /// Rank of the powers `L_i^(d-k)` stacked with the order-`k` partials of `F`.
    pub stacked_rank: usize,
    pub expected_rank: usize,
    /// `stacked_rank - expected_rank`.
    pub rank_gap: i64,
    /// Largest `|g(L_i)|` for the apolar form `g` (binary case only).
    pub apolar_defect: Option<f64>,
    pub residual: f64,
}

fn unit_row(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 {
        coeffs.to_vec()
    } else {
        coeffs.iter().map(|c| c / n).collect()
    }
}

/// Checks that every order-`k` partial of `F` lies in `span{L_i^(d-k)}`.
///
/// Supported cases and their orders: ternary quintics with 7 terms (`k = 2`),
/// quaternary cubics with 5 terms (`k = 1`), binary forms of degree `2h - 1`
/// with `h` terms (`k = h - 1`, plus the apolar-form test).
pub fn verify_canonical(f: &HomogeneousPoly, dec: &WaringDecomposition, rank_tol: f64) -> Result<Certificate> {
    let (n, d, h) = (f.num_vars(), f.degree(), dec.len());
    let order = match (n, d, h) {
        (3, 5, 7) => 2,
        (4, 3, 5) => 1,
        (2, d, h) if d % 2 == 1 && d >= 3 && h == d.div_ceil(2) => h - 1,
        _ => {
            return Err(Error::Unsupported(format!(
                "no canonical certificate for {n} variables, degree {d}, {h} terms"
            )))
        }
    };
    let res = residual(f, dec)?;
    let mut rows: Vec<Vec<C64>> = dec
        .forms()
        .map(|l| unit_row(power_of_linear(l, d - order).coeffs()))
        .collect();
    for alpha in exponents(n, order) {
        let partial = f.apply_partials(&alpha)?;
        if !partial.is_zero() {
            rows.push(unit_row(partial.coeffs()));
        }
    }
    let stacked_rank = rank_with_tol(&DenseMatrix::from_rows(&rows)?, rank_tol)?;
    let mut passed = stacked_rank == h;

    let apolar_defect = if n == 2 {
        match apolar_kernel(f, 1e-8) {
            Ok(kernel) => {
                let hh = kernel.len() - 1;
                let defect = dec
                    .forms()
                    .map(|l| {
                        let (u, v) = (l.coeffs()[0], l.coeffs()[1]);
                        let value: C64 = kernel
                            .iter()
                            .enumerate()
                            .map(|(j, c)| c * u.powu((hh - j) as u32) * v.powu(j as u32))
                            .sum();
                        value.norm()
                    })
                    .fold(0.0, f64::max);
                passed &= defect <= rank_tol;
                Some(defect)
            }
            Err(_) => {
                passed = false;
                None
            }
        }
    } else {
        None
    };

    Ok(Certificate {
        passed,
        stacked_rank,
        expected_rank: h,
        rank_gap: stacked_rank as i64 - h as i64,
        apolar_defect,
        residual: res,
    })
}
