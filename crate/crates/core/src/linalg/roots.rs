use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Target bound on `|p(root)| / |p|` after polishing simple roots.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;

const POLISH_STEPS: usize = 8;

/// Horner evaluation; `coeffs[k]` multiplies `t^k`.
pub fn eval_univariate(coeffs: &[C64], t: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * t + c)
}

fn eval_with_derivative(coeffs: &[C64], t: C64) -> (C64, C64) {
    let mut value = C64::new(0.0, 0.0);
    let mut deriv = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        deriv = deriv * t + value;
        value = value * t + c;
    }
    (value, deriv)
}

/// All complex roots of `sum_k coeffs[k] t^k`, with multiplicity.
///
/// Roots are the eigenvalues of the companion matrix of the monic polynomial,
/// each refined by Newton steps that are kept only while they reduce `|p|`.
/// Multiple roots come back as a cluster whose radius scales like
/// `eps^(1/m)`.
pub fn univariate_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let last = coeffs
        .iter()
        .rposition(|c| c.norm_sqr() != 0.0)
        .ok_or(Error::ZeroPolynomial)?;
    let p = &coeffs[..=last];
    let degree = p.len() - 1;
    if degree == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    let lead = p[degree];
    let mut companion = DMatrix::<C64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for (i, c) in p[..degree].iter().enumerate() {
        companion[(i, degree - 1)] = -c / lead;
    }
    let mut roots = schur_eigenvalues(companion);
    for r in &mut roots {
        *r = polish(p, *r);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn schur_eigenvalues(m: DMatrix<C64>) -> Vec<C64> {
    let n = m.nrows();
    let t = m.schur().unpack().1;
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let scale = t[(i, i)].norm() + if i + 1 < n { t[(i + 1, i + 1)].norm() } else { 0.0 };
        if i + 1 < n && t[(i + 1, i)].norm() > 1e-14 * scale.max(1e-300) {
            // Leftover 2x2 block.
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half_trace = (a + d) * 0.5;
            let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
            out.push(half_trace + disc);
            out.push(half_trace - disc);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    out
}

fn polish(p: &[C64], mut root: C64) -> C64 {
    let (mut value, _) = eval_with_derivative(p, root);
    for _ in 0..POLISH_STEPS {
        let (v, dv) = eval_with_derivative(p, root);
        if dv.norm_sqr() == 0.0 || v.norm_sqr() == 0.0 {
            break;
        }
        let candidate = root - v / dv;
        let (cv, _) = eval_with_derivative(p, candidate);
        if cv.norm() < value.norm() {
            root = candidate;
            value = cv;
        } else {
            break;
        }
    }
    root
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_vector, seeded};
    use proptest::prelude::*;

    fn real(cs: &[f64]) -> Vec<C64> {
        cs.iter().map(|&c| C64::new(c, 0.0)).collect()
    }

    fn coeff_norm(p: &[C64]) -> f64 {
        p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn difference_of_squares() {
        let roots = univariate_roots(&real(&[-1.0, 0.0, 1.0])).unwrap();
        assert!((roots[0] - C64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((roots[1] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn quadratic_formula_oracle() {
        // 2t^2 + 5t - 1: roots (-5 +- sqrt(33)) / 4.
        let p = real(&[-1.0, 5.0, 2.0]);
        let roots = univariate_roots(&p).unwrap();
        let s = 33f64.sqrt();
        let expect = [(-5.0 - s) / 4.0, (-5.0 + s) / 4.0];
        for (r, e) in roots.iter().zip(expect) {
            assert!((r - C64::new(e, 0.0)).norm() < 1e-13);
        }
        assert!((expect[1] - 0.1861406).abs() < 1e-7);
        assert!((expect[0] + 2.6861406).abs() < 1e-7);
        for r in &roots {
            assert!(eval_univariate(&p, *r).norm() <= ROOT_RESIDUAL_TOL * coeff_norm(&p));
        }
    }

    #[test]
    fn triple_root_cluster() {
        // (t - 2)^3 = t^3 - 6t^2 + 12t - 8
        let roots = univariate_roots(&real(&[-8.0, 12.0, -6.0, 1.0])).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!((r - C64::new(2.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn trailing_zero_coefficients_trimmed() {
        let roots = univariate_roots(&real(&[-1.0, 0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert_eq!(univariate_roots(&real(&[0.0, 0.0])), Err(Error::ZeroPolynomial));
        assert!(univariate_roots(&real(&[3.0])).is_err());
        assert_eq!(univariate_roots(&[]), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn zero_root_found() {
        let roots = univariate_roots(&real(&[0.0, -4.0, 1.0])).unwrap();
        assert!(roots[0].norm() < 1e-14);
        assert!((roots[1] - C64::new(4.0, 0.0)).norm() < 1e-13);
    }

    /// Elementary symmetric polynomials of the roots.
    fn elementary(roots: &[C64]) -> Vec<C64> {
        let mut e = vec![C64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![C64::new(0.0, 0.0); e.len() + 1];
            for (k, v) in e.iter().enumerate() {
                next[k] += v;
                next[k + 1] += v * r;
            }
            e = next;
        }
        e
    }

    proptest! {
        #[test]
        fn vieta_relations(seed in 0u64..500, degree in 1usize..10) {
            let mut rng = seeded(seed);
            let p = complex_vector(&mut rng, degree + 1);
            let roots = univariate_roots(&p).unwrap();
            prop_assert_eq!(roots.len(), degree);
            let e = elementary(&roots);
            let lead = p[degree];
            for k in 1..=degree {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let expected = p[degree - k] / lead * sign;
                prop_assert!((e[k] - expected).norm() < 1e-8 * (1.0 + expected.norm()),
                    "k={} got {} expected {}", k, e[k], expected);
            }
            for r in &roots {
                let scale: f64 = p.iter().enumerate()
                    .map(|(k, c)| c.norm() * r.norm().powi(k as i32)).sum();
                prop_assert!(eval_univariate(&p, *r).norm() <= 1e-10 * scale.max(coeff_norm(&p)));
            }
        }
    }
}
