use super::{exponents, multinomial, HomogeneousPoly};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use num_complex::Complex64 as C64;

/// Coefficients divided by their multinomial factors, so that
/// `F = sum_g multinomial(g) f_g x^g`. For `F = L^d` this gives `f_g = l^g`.
pub fn normalized_coefficients(f: &HomogeneousPoly) -> Vec<C64> {
    f.exponents()
        .iter()
        .zip(f.coeffs())
        .map(|(e, c)| c / multinomial(e))
        .collect()
}

/// Catalecticant of `F` with `a + b = deg F`.
///
/// Rows are indexed by the degree-`a` monomials `alpha`, columns by the
/// degree-`b` monomials `beta`, and the entry is `f_{alpha+beta}`. Row `alpha`
/// is the normalized coefficient vector of `(b!/d!) d^alpha F`. For binary
/// forms this is the Hankel matrix of the normalized coefficients.
pub fn catalecticant(f: &HomogeneousPoly, a: usize, b: usize) -> Result<DenseMatrix> {
    if a + b != f.degree() {
        return Err(Error::InvalidInput(format!(
            "catalecticant split {a}+{b} does not match degree {}",
            f.degree()
        )));
    }
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("catalecticant split needs a >= 1 and b >= 1".into()));
    }
    let n = f.num_vars();
    let normalized = normalized_coefficients(f);
    let rows = exponents(n, a);
    let cols = exponents(n, b);
    let mut sum = vec![0u32; n];
    let mut out = DenseMatrix::zeros(rows.len(), cols.len());
    for (i, alpha) in rows.iter().enumerate() {
        for (j, beta) in cols.iter().enumerate() {
            for k in 0..n {
                sum[k] = alpha[k] + beta[k];
            }
            out[(i, j)] = normalized[super::monomial_index(&sum)];
        }
    }
    Ok(out)
}
