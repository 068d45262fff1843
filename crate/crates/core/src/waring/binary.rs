use super::{fit_weights, polish};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, univariate_roots};
use crate::poly::{catalecticant, HomogeneousPoly, LinearForm, WaringDecomposition};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct BinaryOptions {
    pub rank_tol: f64,
    pub residual_tol: f64,
    /// Minimum Fubini-Study distance between recovered forms.
    pub root_separation: f64,
}

impl Default for BinaryOptions {
    fn default() -> Self {
        Self {
            rank_tol: 1e-8,
            residual_tol: 1e-8,
            root_separation: 1e-6,
        }
    }
}

/// Kernel of the `(h-1, h)` catalecticant as the coefficients `c_j` of the
/// apolar form `g(s, t) = sum_j c_j s^(h-j) t^j`.
pub fn apolar_kernel(f: &HomogeneousPoly, rank_tol: f64) -> Result<Vec<C64>> {
    let h = f.degree().div_ceil(2);
    let m = catalecticant(f, h - 1, h)?;
    let ker = nullspace(&m, rank_tol)?;
    if ker.cols() != 1 {
        return Err(Error::DegenerateInput(format!(
            "catalecticant kernel has dimension {}, expected 1",
            ker.cols()
        )));
    }
    Ok(ker.column(0))
}

/// Linear forms `u x0 + v x1` with `g(u, v) = 0`.
pub(crate) fn kernel_forms(kernel: &[C64]) -> Result<Vec<LinearForm>> {
    let h = kernel.len() - 1;
    let one = C64::new(1.0, 0.0);
    // Solve in whichever affine chart keeps the leading coefficient largest.
    let forms = if kernel[0].norm() >= kernel[h].norm() {
        let ascending: Vec<C64> = kernel.iter().rev().copied().collect();
        univariate_roots(&ascending)?
            .into_iter()
            .map(|s| LinearForm::new(vec![s, one]))
            .collect::<Result<Vec<_>>>()?
    } else {
        univariate_roots(kernel)?
            .into_iter()
            .map(|t| LinearForm::new(vec![one, t]))
            .collect::<Result<Vec<_>>>()?
    };
    if forms.len() != h {
        return Err(Error::DegenerateInput(format!(
            "apolar form has {} finite roots, expected {h}",
            forms.len()
        )));
    }
    Ok(forms)
}

/// Unique decomposition of a general binary form of odd degree `2h - 1` as a
/// sum of `h` powers.
///
/// The kernel of the `(h-1) x h` catalecticant is one-dimensional; read as a
/// binary form of degree `h` it vanishes exactly at the `h` forms of the
/// decomposition. Weights follow by least squares.
pub fn decompose_binary(f: &HomogeneousPoly, opts: &BinaryOptions) -> Result<WaringDecomposition> {
    if f.num_vars() != 2 {
        return Err(Error::InvalidInput(format!(
            "binary algorithm needs 2 variables, got {}",
            f.num_vars()
        )));
    }
    if f.degree().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "binary algorithm needs odd degree, got {}",
            f.degree()
        )));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == 1 {
        let form = LinearForm::new(f.coeffs().to_vec())?;
        return fit_weights(f, &[form]).map(|(dec, _)| dec);
    }
    let kernel = apolar_kernel(f, opts.rank_tol)?;
    let forms = kernel_forms(&kernel)?;
    for (i, a) in forms.iter().enumerate() {
        for b in &forms[i + 1..] {
            if a.distance(b) < opts.root_separation {
                return Err(Error::DegenerateInput("apolar form has a repeated root".into()));
            }
        }
    }
    let (dec, res) = fit_weights(f, &forms)?;
    let (dec, res) = if res > 1e-13 { polish(f, dec, 50)? } else { (dec, res) };
    if res > opts.residual_tol {
        return Err(Error::Inaccurate {
            residual: res,
            tol: opts.residual_tol,
        });
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{recompose, residual};
    use crate::rng::{random_invertible, seeded};
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn worked_cubic_in_last_coordinate_convention() {
        let f = HomogeneousPoly::from_real(2, 3, &[1.0, 1.0, -1.0, 1.0]).unwrap();
        let dec = decompose_binary(&f, &BinaryOptions::default()).unwrap();
        assert_eq!(dec.len(), 2);
        let mut conv = dec.with_last_coordinate_one().unwrap();
        conv.sort_by(|a, b| a.1[0].re.total_cmp(&b.1[0].re));
        let expected = [(0.99322, -0.3722812), (0.00678, 5.3722813)];
        for ((w, form), (ew, eu)) in conv.iter().zip(expected) {
            assert!((w - c(ew)).norm() < 5e-4, "{w}");
            assert!((form[0] - c(eu)).norm() < 5e-4, "{form:?}");
        }
        assert!(residual(&f, &dec).unwrap() < 1e-12);
    }

    #[test]
    fn sum_of_two_cubes() {
        // (x0 + x1)^3 + (x0 - x1)^3 = 2 x0^3 + 6 x0 x1^2
        let f = HomogeneousPoly::from_real(2, 3, &[2.0, 0.0, 6.0, 0.0]).unwrap();
        let dec = decompose_binary(&f, &BinaryOptions::default()).unwrap();
        let expected = WaringDecomposition::from_parts(
            2,
            3,
            vec![(c(1.0), vec![c(1.0), c(1.0)]), (c(1.0), vec![c(1.0), c(-1.0)])],
        )
        .unwrap();
        assert!(dec.match_distance(&expected) < 1e-10);
    }

    #[test]
    fn pure_power_is_degenerate() {
        let f = HomogeneousPoly::from_real(2, 3, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            decompose_binary(&f, &BinaryOptions::default()),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn rejects_wrong_shapes() {
        let even = HomogeneousPoly::from_real(2, 4, &[1.0; 5]).unwrap();
        assert!(matches!(decompose_binary(&even, &BinaryOptions::default()), Err(Error::InvalidInput(_))));
        let ternary = HomogeneousPoly::from_real(3, 3, &[1.0; 10]).unwrap();
        assert!(matches!(decompose_binary(&ternary, &BinaryOptions::default()), Err(Error::InvalidInput(_))));
        let zero = HomogeneousPoly::zero(2, 3);
        assert_eq!(decompose_binary(&zero, &BinaryOptions::default()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn linear_input_is_its_own_decomposition() {
        let f = HomogeneousPoly::from_real(2, 1, &[3.0, -4.0]).unwrap();
        let dec = decompose_binary(&f, &BinaryOptions::default()).unwrap();
        assert_eq!(dec.len(), 1);
        assert!(residual(&f, &dec).unwrap() < 1e-15);
    }

    #[test]
    fn term_count_for_odd_degrees() {
        let mut rng = seeded(77);
        for d in (3..=21).step_by(2) {
            let f = HomogeneousPoly::random(2, d, false, &mut rng);
            let dec = decompose_binary(&f, &BinaryOptions { residual_tol: 1e-6, ..Default::default() })
                .unwrap_or_else(|e| panic!("d={d}: {e}"));
            assert_eq!(dec.len(), d.div_ceil(2));
        }
    }

    fn synthesized(seed: u64, h: usize) -> WaringDecomposition {
        WaringDecomposition::random(2, 2 * h - 1, h, false, &mut seeded(seed)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn round_trip(seed in 0u64..10_000, h in 2usize..6) {
            let truth = synthesized(seed, h);
            let dec = decompose_binary(&recompose(&truth), &BinaryOptions::default()).unwrap();
            prop_assert!(dec.match_distance(&truth) < 1e-6, "{}", dec.match_distance(&truth));
        }

        #[test]
        fn scaling_equivariance(seed in 0u64..10_000, h in 2usize..5) {
            let truth = synthesized(seed, h);
            let f = recompose(&truth);
            let s = C64::new(-1.7, 0.4);
            let a = decompose_binary(&f, &BinaryOptions::default()).unwrap();
            let b = decompose_binary(&f.scale(s), &BinaryOptions::default()).unwrap();
            prop_assert!(a.scaled(s).match_distance(&b) < 1e-8);
        }

        #[test]
        fn coordinate_equivariance(seed in 0u64..10_000, h in 2usize..5) {
            let truth = synthesized(seed, h);
            let f = recompose(&truth);
            let mut rng = seeded(seed ^ 0xabcd);
            let a = random_invertible(2, &mut rng);
            let g = f.linear_substitution(&a).unwrap();
            let dec = decompose_binary(&g, &BinaryOptions::default()).unwrap();
            // L(A x) has coefficient vector A^T l.
            let moved = WaringDecomposition::from_parts(2, f.degree(), truth.terms().iter().map(|t| {
                let l = t.form.coeffs();
                (t.weight, vec![a[(0, 0)] * l[0] + a[(1, 0)] * l[1], a[(0, 1)] * l[0] + a[(1, 1)] * l[1]])
            }).collect()).unwrap();
            prop_assert!(dec.form_set_distance(&moved) < 1e-6);
        }
    }
}
