use super::{exponents, multinomial, HomogeneousPoly};
use crate::error::{Error, Result};
use crate::linalg::projective_distance;
use num_complex::Complex64 as C64;
use rand::Rng;
use std::cmp::Ordering;

/// Entries below this fraction of the norm do not count as the "first
/// nonzero" coordinate when fixing the phase.
const PHASE_PIVOT_TOL: f64 = 1e-9;

/// Forms closer than this (Fubini-Study sine distance) count as projectively equal.
const SAME_FORM_TOL: f64 = 1e-9;

/// A nonzero linear form `sum c_i x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    coeffs: Vec<C64>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("linear form needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("linear form has non-finite coefficients".into()));
        }
        if coeffs.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(Error::InvalidInput("linear form is identically zero".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    /// Splits `self = scale * normalized` where `normalized` has unit norm and
    /// its first non-negligible entry is real and positive.
    pub fn normalized(&self) -> (LinearForm, C64) {
        let norm = self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let pivot = self
            .coeffs
            .iter()
            .find(|c| c.norm() > PHASE_PIVOT_TOL * norm)
            .expect("nonzero form has a pivot");
        let phase = pivot / pivot.norm();
        let scale = phase * norm;
        let coeffs = self.coeffs.iter().map(|c| c / scale).collect();
        (LinearForm { coeffs }, scale)
    }

    pub fn evaluate(&self, point: &[C64]) -> C64 {
        self.coeffs.iter().zip(point).map(|(a, b)| a * b).sum()
    }

    /// Fubini-Study sine distance between the projective classes.
    pub fn distance(&self, other: &LinearForm) -> f64 {
        projective_distance(&self.coeffs, &other.coeffs)
    }

    fn lex_cmp(&self, other: &LinearForm) -> Ordering {
        crate::linalg::lex_cmp(&self.coeffs, &other.coeffs)
    }
}

/// Expands `L^d` by the multinomial theorem.
pub fn power_of_linear(form: &LinearForm, d: usize) -> HomogeneousPoly {
    let n = form.num_vars();
    let coeffs = exponents(n, d)
        .iter()
        .map(|e| {
            e.iter()
                .zip(form.coeffs())
                .fold(C64::new(multinomial(e), 0.0), |acc, (&k, c)| acc * c.powu(k))
        })
        .collect();
    HomogeneousPoly::new(n, d, coeffs).expect("expansion has basis length")
}

/// One summand `weight * form^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub weight: C64,
    pub form: LinearForm,
}

/// `F = sum_i weight_i * L_i^d` with normalized forms.
///
/// Construction normalizes every form, moves the scale into the weight and
/// sorts terms lexicographically by form coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct WaringDecomposition {
    num_vars: usize,
    degree: usize,
    terms: Vec<Term>,
    degenerate: bool,
}

impl WaringDecomposition {
    pub fn new(num_vars: usize, degree: usize, terms: Vec<Term>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidInput("decomposition degree must be positive".into()));
        }
        let mut normalized = Vec::with_capacity(terms.len());
        for term in terms {
            if term.form.num_vars() != num_vars {
                return Err(Error::InvalidInput(format!(
                    "form has {} variables, expected {num_vars}",
                    term.form.num_vars()
                )));
            }
            let (form, scale) = term.form.normalized();
            normalized.push(Term {
                weight: term.weight * scale.powu(degree as u32),
                form,
            });
        }
        normalized.sort_by(|a, b| {
            a.form
                .lex_cmp(&b.form)
                .then(a.weight.re.total_cmp(&b.weight.re))
                .then(a.weight.im.total_cmp(&b.weight.im))
        });
        let degenerate = normalized.iter().enumerate().any(|(i, a)| {
            normalized[i + 1..]
                .iter()
                .any(|b| a.form.distance(&b.form) < SAME_FORM_TOL)
        });
        Ok(Self {
            num_vars,
            degree,
            terms: normalized,
            degenerate,
        })
    }

    /// Builds terms from `(weight, form coefficients)` pairs.
    pub fn from_parts(num_vars: usize, degree: usize, parts: Vec<(C64, Vec<C64>)>) -> Result<Self> {
        let terms = parts
            .into_iter()
            .map(|(weight, coeffs)| Ok(Term { weight, form: LinearForm::new(coeffs)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_vars, degree, terms)
    }

    /// Random decomposition with `terms` unit-norm forms and weights of
    /// modulus in `[0.5, 1.5)`; complex Gaussian forms and uniform weight
    /// phases unless `real`, in which case forms are real Gaussian and
    /// weights are real of random sign.
    pub fn random(num_vars: usize, degree: usize, terms: usize, real: bool, rng: &mut impl Rng) -> Result<Self> {
        let parts = (0..terms)
            .map(|_| {
                let coeffs = if real {
                    crate::rng::real_vector(rng, num_vars)
                } else {
                    crate::rng::complex_vector(rng, num_vars)
                };
                let modulus = 0.5 + rng.random::<f64>();
                let weight = if real {
                    C64::new(if rng.random::<bool>() { modulus } else { -modulus }, 0.0)
                } else {
                    C64::from_polar(modulus, std::f64::consts::TAU * rng.random::<f64>())
                };
                let size = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                (weight, coeffs.iter().map(|c| c / size).collect())
            })
            .collect();
        Self::from_parts(num_vars, degree, parts)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when two forms coincide projectively.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn forms(&self) -> impl Iterator<Item = &LinearForm> {
        self.terms.iter().map(|t| &t.form)
    }

    /// Every weight multiplied by `s`.
    pub fn scaled(&self, s: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.weight *= s;
        }
        out
    }

    /// Terms rescaled so that the last coordinate of each form equals one.
    ///
    /// Returns `None` when some form has a (numerically) vanishing last
    /// coordinate.
    pub fn with_last_coordinate_one(&self) -> Option<Vec<(C64, Vec<C64>)>> {
        self.terms
            .iter()
            .map(|t| {
                let last = *t.form.coeffs().last()?;
                if last.norm() < PHASE_PIVOT_TOL {
                    return None;
                }
                let coeffs = t.form.coeffs().iter().map(|c| c / last).collect();
                Some((t.weight * last.powu(self.degree as u32), coeffs))
            })
            .collect()
    }

    /// Largest mismatch between two decompositions after greedily pairing
    /// each term with its nearest unused partner: form distance, and weight
    /// difference relative to the largest weight. Infinite when the term
    /// counts differ.
    pub fn match_distance(&self, other: &WaringDecomposition) -> f64 {
        if self.len() != other.len() || self.degree != other.degree {
            return f64::INFINITY;
        }
        let scale = self
            .terms
            .iter()
            .chain(&other.terms)
            .map(|t| t.weight.norm())
            .fold(f64::MIN_POSITIVE, f64::max);
        let mut used = vec![false; other.len()];
        let mut worst = 0.0f64;
        for a in &self.terms {
            let (j, dist) = other
                .terms
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, b)| (j, a.form.distance(&b.form)))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("equal lengths");
            used[j] = true;
            let weight_gap = (a.weight - other.terms[j].weight).norm() / scale;
            worst = worst.max(dist).max(weight_gap);
        }
        worst
    }

    /// Largest distance from a form of `self` to the nearest form of `other`.
    pub fn form_set_distance(&self, other: &WaringDecomposition) -> f64 {
        self.forms()
            .map(|a| {
                other
                    .forms()
                    .map(|b| a.distance(b))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

/// `sum_i weight_i * L_i^d` as a dense form.
pub fn recompose(dec: &WaringDecomposition) -> HomogeneousPoly {
    let mut out = HomogeneousPoly::zero(dec.num_vars(), dec.degree());
    for t in dec.terms() {
        out.add_scaled(&power_of_linear(&t.form, dec.degree()), t.weight)
            .expect("matching spaces");
    }
    out
}

/// Relative coefficient residual `|F - recompose(dec)| / |F|`.
pub fn residual(f: &HomogeneousPoly, dec: &WaringDecomposition) -> Result<f64> {
    if f.degree() != dec.degree() {
        return Err(Error::DegreeMismatch {
            expected: f.degree(),
            got: dec.degree(),
        });
    }
    if f.num_vars() != dec.num_vars() {
        return Err(Error::InvalidInput(format!(
            "polynomial has {} variables, decomposition {}",
            f.num_vars(),
            dec.num_vars()
        )));
    }
    let norm = f.norm();
    if norm == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.sub(&recompose(dec))?.norm() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_vector, seeded};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn pure_power_of_variable() {
        let l = LinearForm::from_real(&[0.0, 1.0]).unwrap();
        let p = power_of_linear(&l, 3);
        assert_eq!(p.coeffs(), &[c(0.0), c(0.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn binomial_square() {
        let l = LinearForm::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(power_of_linear(&l, 2).coeffs(), &[c(1.0), c(2.0), c(1.0)]);
    }

    #[test]
    fn power_matches_repeated_product() {
        let mut rng = seeded(9);
        let coeffs = complex_vector(&mut rng, 3);
        let l = LinearForm::new(coeffs.clone()).unwrap();
        let lin = HomogeneousPoly::new(3, 1, coeffs).unwrap();
        let mut prod = lin.clone();
        for _ in 1..4 {
            prod = prod.mul(&lin).unwrap();
        }
        assert!(power_of_linear(&l, 4).sub(&prod).unwrap().norm() < 1e-12);
    }

    #[test]
    fn zero_form_rejected() {
        assert!(LinearForm::from_real(&[0.0, 0.0]).is_err());
        assert!(LinearForm::from_real(&[]).is_err());
    }

    #[test]
    fn normalization_is_projective_invariant() {
        let mut rng = seeded(1);
        let coeffs = complex_vector(&mut rng, 4);
        let l = LinearForm::new(coeffs.clone()).unwrap();
        let scaled = LinearForm::new(coeffs.iter().map(|x| x * C64::new(-2.0, 3.5)).collect()).unwrap();
        let (a, sa) = l.normalized();
        let (b, _) = scaled.normalized();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-14);
        }
        let pivot = a.coeffs()[0];
        assert!(pivot.im.abs() < 1e-15 && pivot.re > 0.0);
        for (x, y) in a.coeffs().iter().zip(&coeffs) {
            assert!((x * sa - y).norm() < 1e-14);
        }
    }

    #[test]
    fn decomposition_absorbs_scale_into_weights() {
        let dec = WaringDecomposition::from_parts(
            2,
            3,
            vec![(c(1.0), vec![c(2.0), c(0.0)]), (c(1.0), vec![c(0.0), c(-1.0)])],
        )
        .unwrap();
        let f = recompose(&dec);
        assert_eq!(f.coeffs(), &[c(8.0), c(0.0), c(0.0), c(-1.0)]);
        assert!((dec.terms()[1].weight - c(8.0)).norm() < 1e-14);
        assert!(!dec.is_degenerate());
    }

    #[test]
    fn repeated_forms_flagged() {
        let dec = WaringDecomposition::from_parts(
            2,
            3,
            vec![(c(1.0), vec![c(1.0), c(1.0)]), (c(2.0), vec![c(-3.0), c(-3.0)])],
        )
        .unwrap();
        assert!(dec.is_degenerate());
    }

    #[test]
    fn residual_round_trip() {
        let mut rng = seeded(21);
        let parts: Vec<_> = (0..4)
            .map(|_| (complex_vector(&mut rng, 1)[0], complex_vector(&mut rng, 3)))
            .collect();
        let dec = WaringDecomposition::from_parts(3, 4, parts).unwrap();
        let f = recompose(&dec);
        assert!(residual(&f, &dec).unwrap() < 1e-12);
    }

    #[test]
    fn residual_guards() {
        let empty = WaringDecomposition::new(2, 3, vec![]).unwrap();
        assert_eq!(residual(&HomogeneousPoly::zero(2, 3), &empty), Err(Error::ZeroPolynomial));
        let f = HomogeneousPoly::from_real(2, 2, &[1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(residual(&f, &empty), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn last_coordinate_convention() {
        let dec = WaringDecomposition::from_parts(
            2,
            3,
            vec![(c(1.0), vec![c(-0.5), c(2.0)])],
        )
        .unwrap();
        let conv = dec.with_last_coordinate_one().unwrap();
        assert!((conv[0].0 - c(8.0)).norm() < 1e-12);
        assert!((conv[0].1[0] - c(-0.25)).norm() < 1e-12);
        assert!((conv[0].1[1] - c(1.0)).norm() < 1e-12);
    }
}
