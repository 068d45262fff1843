use super::RESAMPLE_BUDGET;
use crate::error::{Error, Result};
use crate::linalg::{singular_values, DenseMatrix};
use crate::poly::{power_of_linear, residual, HomogeneousPoly, LinearForm, Term, WaringDecomposition};
use crate::rng::{complex_vector, substream};
use crate::waring::{
    decompose_binary, decompose_pentahedral, decompose_quintic, fit_weights, BinaryOptions, PentahedralOptions,
    QuinticOptions,
};
use num_complex::Complex64 as C64;
use rand::Rng;

/// Residual bound for sampler outputs.
pub const SAMPLE_TOL: f64 = 1e-6;

/// Largest condition number accepted for the enlarged power matrix in
/// [`extend_decomposition`].
const MAX_CONDITION: f64 = 1e10;

/// Number of terms of the unique decomposition of a general form, for the
/// shapes that have one: `(d + 1)/2` for binary forms of odd degree `d`, 5
/// for quaternary cubics, 7 for ternary quintics.
pub fn canonical_length(num_vars: usize, degree: usize) -> Option<usize> {
    match (num_vars, degree) {
        (2, d) if d % 2 == 1 && d >= 3 => Some(d.div_ceil(2)),
        (4, 3) => Some(5),
        (3, 5) => Some(7),
        _ => None,
    }
}

/// Unique decomposition of a general form of canonical shape.
pub fn decompose_canonical(f: &HomogeneousPoly, seed: u64) -> Result<WaringDecomposition> {
    match (f.num_vars(), f.degree()) {
        (2, _) => decompose_binary(f, &BinaryOptions::default()),
        (4, 3) => decompose_pentahedral(f, seed, &PentahedralOptions::default()).map(|(dec, _)| dec),
        (3, 5) => decompose_quintic(f, seed, &QuinticOptions::default()),
        (n, d) => Err(Error::Unsupported(format!("no canonical decomposition for degree {d} in {n} variables"))),
    }
}

/// A point of `VSP(F, h)` together with the random data that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct VspSample {
    pub decomposition: WaringDecomposition,
    /// The forms `l_i` drawn for `G = a F + sum_i c_i l_i^d`.
    pub drawn: Vec<LinearForm>,
    pub alpha: C64,
    pub residual: f64,
}

fn random_weight(rng: &mut impl Rng) -> C64 {
    C64::from_polar(0.5 + rng.random::<f64>(), std::f64::consts::TAU * rng.random::<f64>())
}

fn random_unit_form(rng: &mut impl Rng, num_vars: usize) -> Result<LinearForm> {
    let v = complex_vector(rng, num_vars);
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    LinearForm::new(v.iter().map(|c| c / n).collect())
}

fn sample_once(f: &HomogeneousPoly, h: usize, h_bar: usize, seed: u64, attempt: u64) -> Result<VspSample> {
    let mut rng = substream(seed, attempt);
    let d = f.degree();
    let alpha = random_weight(&mut rng) / f.norm();
    let mut g = f.scale(alpha);
    let mut drawn = Vec::new();
    let mut weights = Vec::new();
    for _ in h_bar..h {
        let l = random_unit_form(&mut rng, f.num_vars())?;
        let w = random_weight(&mut rng);
        g.add_scaled(&power_of_linear(&l, d), w)?;
        drawn.push(l);
        weights.push(w);
    }
    let canonical = decompose_canonical(&g, seed.wrapping_add(attempt))?;
    // F = (1/a) sum_j m_j L_j^d - sum_i (c_i/a) l_i^d.
    let mut terms: Vec<Term> = canonical
        .terms()
        .iter()
        .map(|t| Term {
            weight: t.weight / alpha,
            form: t.form.clone(),
        })
        .collect();
    terms.extend(drawn.iter().zip(&weights).map(|(l, w)| Term {
        weight: -w / alpha,
        form: l.clone(),
    }));
    let decomposition = WaringDecomposition::new(f.num_vars(), d, terms)?;
    if decomposition.is_degenerate() {
        return Err(Error::DegenerateDraw { attempts: 1 });
    }
    let res = residual(f, &decomposition)?;
    if res > SAMPLE_TOL {
        return Err(Error::Inaccurate {
            residual: res,
            tol: SAMPLE_TOL,
        });
    }
    Ok(VspSample {
        decomposition,
        drawn,
        alpha,
        residual: res,
    })
}

/// Random `h`-term decomposition of `F` for `h >= h̄`, where `h̄` is the
/// canonical length of `F`'s shape.
///
/// Draws `h - h̄` forms `l_i` and scalars, decomposes
/// `G = a F + sum_i c_i l_i^d` with the canonical algorithm and moves the
/// drawn terms back to the other side. For `h = h̄` this is the canonical
/// decomposition of `F` itself. Failed draws are repeated up to
/// [`RESAMPLE_BUDGET`] times; the last error is returned after that.
pub fn sample_vsp_detailed(f: &HomogeneousPoly, h: usize, seed: u64) -> Result<VspSample> {
    let h_bar = canonical_length(f.num_vars(), f.degree()).ok_or_else(|| {
        Error::Unsupported(format!(
            "VSP sampling needs a binary form of odd degree, a quaternary cubic or a ternary quintic, got degree {} in {} variables",
            f.degree(),
            f.num_vars()
        ))
    })?;
    if h < h_bar {
        return Err(Error::InvalidInput(format!("h = {h} is below the canonical length {h_bar}")));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if h == h_bar {
        let decomposition = decompose_canonical(f, seed)?;
        let res = residual(f, &decomposition)?;
        return Ok(VspSample {
            decomposition,
            drawn: Vec::new(),
            alpha: C64::new(1.0, 0.0),
            residual: res,
        });
    }
    let mut last = Error::DegenerateDraw { attempts: 0 };
    for attempt in 0..RESAMPLE_BUDGET {
        match sample_once(f, h, h_bar, seed, attempt as u64) {
            Ok(sample) => return Ok(sample),
            Err(e @ (Error::InvalidInput(_) | Error::Unsupported(_) | Error::ZeroPolynomial)) => return Err(e),
            Err(Error::DegenerateDraw { .. }) => {
                last = Error::DegenerateDraw {
                    attempts: attempt + 1,
                }
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// [`sample_vsp_detailed`] without the random data.
pub fn sample_vsp(f: &HomogeneousPoly, h: usize, seed: u64) -> Result<WaringDecomposition> {
    sample_vsp_detailed(f, h, seed).map(|s| s.decomposition)
}

/// Adds `h_new - dec.len()` random forms to `dec` and refits all weights
/// against `F` by least squares.
///
/// When the enlarged set of powers is linearly independent the refit leaves
/// the old weights in place and gives the new forms weight zero up to
/// round-off: the result is the image of `dec` under the inclusion
/// `VSP(F, h) -> VSP(F, h_new)`. Draws whose power matrix has condition
/// number above `1e10` are repeated.
pub fn extend_decomposition(
    f: &HomogeneousPoly,
    dec: &WaringDecomposition,
    h_new: usize,
    seed: u64,
) -> Result<WaringDecomposition> {
    if dec.num_vars() != f.num_vars() || dec.degree() != f.degree() {
        return Err(Error::InvalidInput("decomposition does not match the form".into()));
    }
    if h_new < dec.len() {
        return Err(Error::InvalidInput(format!("cannot shrink {} terms to {h_new}", dec.len())));
    }
    if h_new == dec.len() {
        return Ok(dec.clone());
    }
    let start = residual(f, dec)?;
    if start > SAMPLE_TOL {
        return Err(Error::Inaccurate {
            residual: start,
            tol: SAMPLE_TOL,
        });
    }
    for attempt in 0..RESAMPLE_BUDGET {
        let mut rng = substream(seed, 0xe7 + attempt as u64);
        let mut forms: Vec<LinearForm> = dec.forms().cloned().collect();
        for _ in dec.len()..h_new {
            forms.push(random_unit_form(&mut rng, f.num_vars())?);
        }
        let columns: Vec<Vec<C64>> = forms.iter().map(|l| power_of_linear(l, f.degree()).into_coeffs()).collect();
        let sv = singular_values(&DenseMatrix::from_columns(&columns)?)?;
        let (top, bottom) = (sv[0], sv[sv.len() - 1]);
        if bottom <= top / MAX_CONDITION {
            continue;
        }
        let (extended, res) = fit_weights(f, &forms)?;
        if res <= SAMPLE_TOL && !extended.is_degenerate() {
            return Ok(extended);
        }
    }
    Err(Error::DegenerateDraw {
        attempts: RESAMPLE_BUDGET,
    })
}
