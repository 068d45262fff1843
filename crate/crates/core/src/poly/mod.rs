//! Dense homogeneous polynomials over the complex numbers.
//!
//! Coefficients are stored against the graded-lexicographic monomial basis:
//! for a fixed degree the exponent tuples are ordered lexicographically with
//! `x0^d` first and `x_n^d` last. For binary forms this is
//! `x0^d, x0^(d-1) x1, ..., x1^d`.

mod catalecticant;
pub mod json;
mod linear;

pub use catalecticant::{catalecticant, normalized_coefficients};
pub use linear::{power_of_linear, recompose, residual, LinearForm, Term, WaringDecomposition};

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Exact binomial coefficient with overflow checking.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial"))?
            / (i + 1) as u128;
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("binomial"))
}

/// Number of monomials of degree `d` in `n + 1` variables, `C(n + d, d)`.
///
/// The projective dimension of the space of forms is one less.
pub fn monomial_count(n: i64, d: i64) -> Result<u64> {
    if n <= 0 || d <= 0 {
        return Err(Error::InvalidInput(format!(
            "monomial_count needs n >= 1 and d >= 1, got n={n}, d={d}"
        )));
    }
    let total = (n as u64)
        .checked_add(d as u64)
        .ok_or(Error::Overflow("monomial_count"))?;
    binomial(total, d as u64)
}

/// Monomial count for `num_vars` variables (degree 0 allowed).
pub(crate) fn basis_len(num_vars: usize, degree: usize) -> usize {
    binomial((num_vars + degree - 1) as u64, degree as u64).expect("basis size fits in u64") as usize
}

/// All exponent tuples of total degree `degree` in graded-lex order.
pub fn exponents(num_vars: usize, degree: usize) -> Vec<Vec<u32>> {
    fn fill(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
        if left == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, left - 1, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(basis_len(num_vars, degree));
    fill(&mut Vec::with_capacity(num_vars), num_vars, degree as u32, &mut out);
    out
}

/// Position of an exponent tuple in the graded-lex basis of its degree.
pub fn monomial_index(exp: &[u32]) -> usize {
    let mut remaining: u32 = exp.iter().sum();
    let mut index = 0usize;
    for (i, &e) in exp.iter().enumerate().take(exp.len().saturating_sub(1)) {
        let vars_after = exp.len() - i - 1;
        // Tuples with a larger exponent in slot i come first.
        for v in (e + 1)..=remaining {
            index += basis_len(vars_after, (remaining - v) as usize);
        }
        remaining -= e;
    }
    index
}

/// `d! / prod(e_i!)` as a float.
pub fn multinomial(exp: &[u32]) -> f64 {
    let mut total = 0u32;
    let mut acc = 1.0f64;
    for &e in exp {
        for j in 1..=e {
            total += 1;
            acc *= total as f64 / j as f64;
        }
    }
    acc
}

fn falling_factorial(e: u32, order: u32) -> f64 {
    (0..order).map(|j| (e - j) as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarField {
    Real,
    Complex,
}

/// A homogeneous form of fixed degree with dense coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly {
    num_vars: usize,
    degree: usize,
    coeffs: Vec<C64>,
}

impl HomogeneousPoly {
    pub fn new(num_vars: usize, degree: usize, coeffs: Vec<C64>) -> Result<Self> {
        if num_vars < 1 {
            return Err(Error::InvalidInput("a form needs at least one variable".into()));
        }
        let len = basis_len(num_vars, degree);
        if coeffs.len() != len {
            return Err(Error::InvalidInput(format!(
                "expected {len} coefficients for degree {degree} in {num_vars} variables, got {}",
                coeffs.len()
            )));
        }
        Ok(Self {
            num_vars,
            degree,
            coeffs,
        })
    }

    pub fn from_real(num_vars: usize, degree: usize, coeffs: &[f64]) -> Result<Self> {
        Self::new(num_vars, degree, coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero(num_vars: usize, degree: usize) -> Self {
        Self {
            num_vars,
            degree,
            coeffs: vec![C64::new(0.0, 0.0); basis_len(num_vars, degree)],
        }
    }

    /// Builds a form from `(exponent, coefficient)` pairs; repeated monomials add up.
    pub fn from_terms(num_vars: usize, degree: usize, terms: &[(Vec<u32>, C64)]) -> Result<Self> {
        let mut poly = Self::zero(num_vars, degree);
        for (exp, c) in terms {
            if exp.len() != num_vars {
                return Err(Error::InvalidInput(format!(
                    "exponent {exp:?} has {} entries, expected {num_vars}",
                    exp.len()
                )));
            }
            let total: u32 = exp.iter().sum();
            if total as usize != degree {
                return Err(Error::InvalidInput(format!(
                    "exponent {exp:?} sums to {total}, expected {degree}"
                )));
            }
            poly.coeffs[monomial_index(exp)] += c;
        }
        Ok(poly)
    }

    /// The single variable `x_var` as a linear form.
    pub fn variable(num_vars: usize, var: usize) -> Self {
        let mut poly = Self::zero(num_vars, 1);
        poly.coeffs[var] = C64::new(1.0, 0.0);
        poly
    }

    /// Gaussian random coefficients (complex Gaussian when `complex`).
    pub fn random(num_vars: usize, degree: usize, complex: bool, rng: &mut impl Rng) -> Self {
        let len = basis_len(num_vars, degree);
        let coeffs = if complex {
            crate::rng::complex_vector(rng, len)
        } else {
            crate::rng::real_vector(rng, len)
        };
        Self {
            num_vars,
            degree,
            coeffs,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn coeff(&self, exp: &[u32]) -> C64 {
        self.coeffs[monomial_index(exp)]
    }

    pub fn exponents(&self) -> Vec<Vec<u32>> {
        exponents(self.num_vars, self.degree)
    }

    /// `Real` when every stored coefficient has zero imaginary part.
    pub fn field(&self) -> ScalarField {
        if self.coeffs.iter().all(|c| c.im == 0.0) {
            ScalarField::Real
        } else {
            ScalarField::Complex
        }
    }

    /// Real coefficients, or an error if some imaginary part exceeds `tol`
    /// relative to the coefficient norm.
    pub fn to_real(&self, tol: f64) -> Result<Vec<f64>> {
        let scale = self.norm().max(f64::MIN_POSITIVE);
        let worst = self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if worst > tol * scale {
            return Err(Error::InvalidInput(format!(
                "imaginary part {worst:e} exceeds real-output tolerance"
            )));
        }
        Ok(self.coeffs.iter().map(|c| c.re).collect())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == C64::new(0.0, 0.0))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            ..self.clone()
        }
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::InvalidInput(format!(
                "variable count mismatch: {} vs {}",
                self.num_vars, other.num_vars
            )));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
            ..self.clone()
        })
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Self, s: C64) -> Result<()> {
        self.check_same_space(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::InvalidInput("variable count mismatch in product".into()));
        }
        let mut out = Self::zero(self.num_vars, self.degree + other.degree);
        let left = self.exponents();
        let right = other.exponents();
        let mut exp = vec![0u32; self.num_vars];
        for (ea, ca) in left.iter().zip(&self.coeffs) {
            if ca.norm_sqr() == 0.0 {
                continue;
            }
            for (eb, cb) in right.iter().zip(&other.coeffs) {
                for k in 0..exp.len() {
                    exp[k] = ea[k] + eb[k];
                }
                out.coeffs[monomial_index(&exp)] += ca * cb;
            }
        }
        Ok(out)
    }

    /// Multiplication by the variable `x_var`.
    pub fn mul_var(&self, var: usize) -> Self {
        let mut out = Self::zero(self.num_vars, self.degree + 1);
        for (mut e, c) in self.exponents().into_iter().zip(&self.coeffs) {
            e[var] += 1;
            out.coeffs[monomial_index(&e)] = *c;
        }
        out
    }

    /// `d^order F / d x_var^order`, computed exactly on coefficients.
    pub fn partial_derivative(&self, var: usize, order: usize) -> Result<Self> {
        if var >= self.num_vars {
            return Err(Error::InvalidInput(format!(
                "variable index {var} out of range for {} variables",
                self.num_vars
            )));
        }
        if order > self.degree {
            return Err(Error::InvalidInput(format!(
                "derivative order {order} exceeds degree {}",
                self.degree
            )));
        }
        let order32 = order as u32;
        let mut out = Self::zero(self.num_vars, self.degree - order);
        for (mut e, c) in self.exponents().into_iter().zip(&self.coeffs) {
            if e[var] < order32 {
                continue;
            }
            let factor = falling_factorial(e[var], order32);
            e[var] -= order32;
            out.coeffs[monomial_index(&e)] = c * factor;
        }
        Ok(out)
    }

    /// Applies the mixed partial `d^|alpha| / d x^alpha`.
    pub fn apply_partials(&self, alpha: &[u32]) -> Result<Self> {
        let mut out = self.clone();
        for (var, &order) in alpha.iter().enumerate() {
            if order > 0 {
                out = out.partial_derivative(var, order as usize)?;
            }
        }
        Ok(out)
    }

    /// `F(A x)`: substitutes `x_i -> sum_j A[i][j] x_j`.
    pub fn linear_substitution(&self, a: &crate::linalg::DenseMatrix) -> Result<Self> {
        let n = self.num_vars;
        if a.rows() != n || a.cols() != n {
            return Err(Error::InvalidInput(format!("substitution must be {n}x{n}")));
        }
        let images: Vec<Self> = (0..n)
            .map(|i| Self::new(n, 1, a.row(i)).expect("row has n entries"))
            .collect();
        let mut out = Self::zero(n, self.degree);
        let mut one = Self::zero(n, 0);
        one.coeffs[0] = C64::new(1.0, 0.0);
        for (e, c) in self.exponents().iter().zip(&self.coeffs) {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let mut prod = one.clone();
            for (img, &k) in images.iter().zip(e) {
                for _ in 0..k {
                    prod = prod.mul(img)?;
                }
            }
            out.add_scaled(&prod, *c)?;
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[C64]) -> C64 {
        assert_eq!(point.len(), self.num_vars, "point dimension mismatch");
        let powers = power_table(point, self.degree);
        self.exponents()
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &k)| acc * powers[i][k as usize])
            })
            .sum()
    }

    /// Gradient at `point`.
    pub fn gradient(&self, point: &[C64]) -> Vec<C64> {
        assert_eq!(point.len(), self.num_vars, "point dimension mismatch");
        let powers = power_table(point, self.degree);
        let mut grad = vec![C64::new(0.0, 0.0); self.num_vars];
        for (e, c) in self.exponents().iter().zip(&self.coeffs) {
            for (var, g) in grad.iter_mut().enumerate() {
                if e[var] == 0 {
                    continue;
                }
                let mut term = c * e[var] as f64;
                for (i, &k) in e.iter().enumerate() {
                    let k = if i == var { k - 1 } else { k };
                    term *= powers[i][k as usize];
                }
                *g += term;
            }
        }
        grad
    }
}

fn power_table(point: &[C64], degree: usize) -> Vec<Vec<C64>> {
    point
        .iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(degree + 1);
            let mut acc = C64::new(1.0, 0.0);
            for _ in 0..=degree {
                row.push(acc);
                acc *= x;
            }
            row
        })
        .collect()
}
