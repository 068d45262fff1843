//! Seven-term decomposition of a general ternary quintic.
//!
//! The decomposition is found by Levenberg-Marquardt on the seven forms, with
//! the weights eliminated by least squares at every step. A general quintic
//! has exactly one decomposition, so two converged starts that agree confirm
//! it; the span-containment certificate is checked before returning.

use super::{fit_weights, varpro_descend, verify_canonical, CERTIFICATE_RANK_TOL};
use crate::error::{Error, Result};
use crate::poly::{HomogeneousPoly, LinearForm, WaringDecomposition};
use crate::rng::{complex_vector, substream};
use nalgebra::DVector;
use num_complex::Complex64 as C64;

const TERMS: usize = 7;
const VARS: usize = 3;
const DEGREE: usize = 5;

#[derive(Debug, Clone)]
pub struct QuinticOptions {
    pub max_starts: usize,
    pub max_iterations: usize,
    pub residual_tol: f64,
    /// Largest `match_distance` at which two converged answers agree.
    pub agreement_tol: f64,
}

impl Default for QuinticOptions {
    fn default() -> Self {
        Self {
            max_starts: 40,
            max_iterations: 300,
            residual_tol: 1e-8,
            agreement_tol: 1e-6,
        }
    }
}

fn to_decomposition(f: &HomogeneousPoly, z: &[C64]) -> Option<(WaringDecomposition, f64)> {
    let forms = z.chunks(VARS).map(|c| LinearForm::new(c.to_vec()).ok()).collect::<Option<Vec<_>>>()?;
    let (dec, res) = fit_weights(f, &forms).ok()?;
    let biggest = dec.terms().iter().map(|t| t.weight.norm()).fold(0.0, f64::max);
    // A vanishing weight means the start collapsed onto fewer terms.
    if dec.terms().iter().any(|t| t.weight.norm() <= 1e-8 * biggest) {
        return None;
    }
    Some((dec, res))
}

/// Unique seven-term decomposition of a general ternary quintic.
///
/// Returns `NoConvergence` when fewer than two starts out of
/// `opts.max_starts` reach `opts.residual_tol`, `UniquenessViolated` when the
/// first two converged answers differ, and `DegenerateInput` when the span
/// certificate fails.
pub fn decompose_quintic(f: &HomogeneousPoly, seed: u64, opts: &QuinticOptions) -> Result<WaringDecomposition> {
    if f.num_vars() != VARS || f.degree() != DEGREE {
        return Err(Error::InvalidInput(format!(
            "quintic algorithm needs a quintic in 3 variables, got degree {} in {}",
            f.degree(),
            f.num_vars()
        )));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let target = DVector::from_column_slice(f.coeffs());
    let mut first: Option<WaringDecomposition> = None;
    let mut best = f64::INFINITY;
    for start in 0..opts.max_starts {
        let mut rng = substream(seed, start as u64);
        let z0 = complex_vector(&mut rng, TERMS * VARS);
        let (z, _) = varpro_descend(&target, z0, VARS, DEGREE, opts.max_iterations);
        let Some((dec, res)) = to_decomposition(f, &z) else {
            continue;
        };
        best = best.min(res);
        if res > opts.residual_tol || dec.is_degenerate() {
            continue;
        }
        match &first {
            None => first = Some(dec),
            Some(a) => {
                let distance = a.match_distance(&dec);
                if distance > opts.agreement_tol {
                    return Err(Error::UniquenessViolated { distance });
                }
                let cert = verify_canonical(f, a, CERTIFICATE_RANK_TOL)?;
                if !cert.passed {
                    return Err(Error::DegenerateInput(format!(
                        "span certificate failed (stacked rank {} vs {})",
                        cert.stacked_rank, cert.expected_rank
                    )));
                }
                return Ok(a.clone());
            }
        }
    }
    Err(Error::NoConvergence {
        starts: opts.max_starts,
        best_residual: best,
    })
}
