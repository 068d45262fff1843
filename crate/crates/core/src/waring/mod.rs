//! Canonical Waring decompositions.
//!
//! Three cases have a unique decomposition of a general form:
//!
//! * binary forms of odd degree `2h - 1`, with `h` terms ([`decompose_binary`]),
//! * quaternary cubics, with 5 terms ([`decompose_pentahedral`]),
//! * ternary quintics, with 7 terms ([`decompose_quintic`]).
//!
//! [`verify_canonical`] checks a candidate against the span containment that
//! characterizes the decomposition (partials of `F` lie in the span of powers
//! of the `L_i`).

mod binary;
mod certificate;
mod pentahedral;
mod quintic;

pub use binary::{apolar_kernel, decompose_binary, BinaryOptions};
pub use certificate::{verify_canonical, Certificate, CERTIFICATE_RANK_TOL};
pub use pentahedral::{
    decompose_pentahedral, group_coplanar, hessian_minors, rank2_locus, PentahedralOptions, PentahedralWitness,
};
pub use quintic::{decompose_quintic, QuinticOptions};

use crate::error::{Error, Result};
use crate::linalg::{least_squares, DenseMatrix};
use crate::poly::{basis_len, power_of_linear, residual, HomogeneousPoly, LinearForm, Term, WaringDecomposition};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// Least-squares weights for fixed forms; returns the decomposition and its
/// relative residual against `f`.
pub fn fit_weights(f: &HomogeneousPoly, forms: &[LinearForm]) -> Result<(WaringDecomposition, f64)> {
    if forms.is_empty() {
        return Err(Error::InvalidInput("no forms to fit".into()));
    }
    let d = f.degree();
    let forms: Vec<LinearForm> = forms.iter().map(|l| l.normalized().0).collect();
    let columns: Vec<Vec<_>> = forms.iter().map(|l| power_of_linear(l, d).into_coeffs()).collect();
    let a = DenseMatrix::from_columns(&columns)?;
    let weights = least_squares(&a, f.coeffs())?;
    let terms = forms
        .iter()
        .zip(weights)
        .map(|(form, weight)| Term {
            weight,
            form: form.clone(),
        })
        .collect();
    let dec = WaringDecomposition::new(f.num_vars(), d, terms)?;
    let res = residual(f, &dec)?;
    Ok((dec, res))
}

/// Refines the forms of a decomposition by [`varpro_descend`] and refits the
/// weights. Keeps the input when refinement does not lower the residual.
pub(crate) fn polish(
    f: &HomogeneousPoly,
    dec: WaringDecomposition,
    max_iterations: usize,
) -> Result<(WaringDecomposition, f64)> {
    let before = residual(f, &dec)?;
    let z: Vec<C64> = dec.forms().flat_map(|l| l.coeffs().to_vec()).collect();
    let target = DVector::from_column_slice(f.coeffs());
    let (z, _) = varpro_descend(&target, z, f.num_vars(), f.degree(), max_iterations);
    let forms: Result<Vec<LinearForm>> = z.chunks(f.num_vars()).map(|c| LinearForm::new(c.to_vec())).collect();
    match forms.and_then(|forms| fit_weights(f, &forms)) {
        Ok((refined, after)) if after < before && refined.len() == dec.len() && !refined.is_degenerate() => {
            Ok((refined, after))
        }
        _ => Ok((dec, before)),
    }
}

fn power_columns(forms: &[C64], vars: usize, degree: usize) -> (DMatrix<C64>, Vec<Vec<Vec<C64>>>) {
    let len = basis_len(vars, degree);
    let h = forms.len() / vars;
    let mut a = DMatrix::zeros(len, h);
    let mut derivs = Vec::with_capacity(h);
    for (k, chunk) in forms.chunks(vars).enumerate() {
        let l = LinearForm::new(chunk.to_vec()).expect("forms stay normalized");
        for (i, c) in power_of_linear(&l, degree).coeffs().iter().enumerate() {
            a[(i, k)] = *c;
        }
        let lower = power_of_linear(&l, degree - 1);
        derivs.push(
            (0..vars)
                .map(|j| lower.mul_var(j).coeffs().iter().map(|c| c * degree as f64).collect())
                .collect(),
        );
    }
    (a, derivs)
}

/// Variable-projection Levenberg-Marquardt: the weights are eliminated by
/// least squares at every step and only the (unit-normalized) forms move.
/// Returns the forms and the final relative residual.
pub(crate) fn varpro_descend(
    target: &DVector<C64>,
    mut z: Vec<C64>,
    vars: usize,
    degree: usize,
    max_iterations: usize,
) -> (Vec<C64>, f64) {
    let norm = target.norm();
    let h = z.len() / vars;
    let normalize = |z: &mut Vec<C64>| {
        for chunk in z.chunks_mut(vars) {
            let s = chunk.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            chunk.iter_mut().for_each(|c| *c /= s);
        }
    };
    normalize(&mut z);
    let evaluate = |z: &[C64]| {
        let (a, derivs) = power_columns(z, vars, degree);
        let svd = a.clone().svd(true, true);
        let w = svd.solve(target, 1e-13 * svd.singular_values.max()).expect("svd has u and v");
        let r = target - &a * &w;
        (r, w, svd.u.expect("requested U"), derivs)
    };
    let (mut r, mut w, mut u, mut derivs) = evaluate(&z);
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;
    for _ in 0..max_iterations {
        if cost.sqrt() <= 1e-14 * norm {
            break;
        }
        // Kaufman's approximation: J_kj = -P (dA_k/dz_kj) w_k with P the
        // projector onto the complement of the column span.
        let rank = u.ncols().min(h);
        let q = u.columns(0, rank);
        let mut jac = DMatrix::zeros(target.len(), h * vars);
        for k in 0..h {
            for j in 0..vars {
                let col = DVector::from_iterator(target.len(), derivs[k][j].iter().map(|c| c * w[k]));
                let proj = &col - q * (q.adjoint() * &col);
                jac.set_column(k * vars + j, &(-proj));
            }
        }
        let jh = jac.adjoint();
        let mut normal = &jh * &jac;
        let rhs = -(&jh * &r);
        let scale = (0..h * vars).map(|k| normal[(k, k)].re).fold(0.0, f64::max).max(1e-300);
        for k in 0..h * vars {
            normal[(k, k)] += C64::new(mu * scale, 0.0);
        }
        let Some(step) = normal.lu().solve(&rhs) else {
            mu *= 10.0;
            continue;
        };
        let mut candidate: Vec<C64> = z.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        normalize(&mut candidate);
        if candidate.iter().any(|c| !c.is_finite()) {
            mu *= 10.0;
            continue;
        }
        let (r_new, w_new, u_new, d_new) = evaluate(&candidate);
        let new_cost = r_new.norm_squared();
        if new_cost.is_finite() && new_cost < cost {
            z = candidate;
            (r, w, u, derivs) = (r_new, w_new, u_new, d_new);
            cost = new_cost;
            mu = (mu / 3.0).max(1e-16);
        } else {
            mu *= 4.0;
            if mu > 1e10 {
                break;
            }
        }
    }
    (z, cost.sqrt() / norm)
}
