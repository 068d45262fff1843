//! JSON file formats for polynomials and decompositions.
//!
//! Polynomial:
//! `{ "n": 1, "d": 3, "terms": [ { "exp": [3, 0], "coeff": [1.0, 0.0] } ] }`
//! where `n + 1` is the number of variables and omitted monomials are zero.
//!
//! Decomposition:
//! `{ "d": 3, "terms": [ { "lambda": [re, im], "form": [[re, im], ...] } ],
//!    "residual": 1e-16, "seed": 0 }`.

use super::{HomogeneousPoly, WaringDecomposition};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    pub n: usize,
    pub d: usize,
    pub terms: Vec<PolyTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub exp: Vec<u32>,
    pub coeff: [f64; 2],
}

impl PolyFile {
    pub fn from_poly(f: &HomogeneousPoly) -> Self {
        let terms = f
            .exponents()
            .into_iter()
            .zip(f.coeffs())
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .map(|(exp, c)| PolyTerm {
                exp,
                coeff: [c.re, c.im],
            })
            .collect();
        Self {
            n: f.num_vars() - 1,
            d: f.degree(),
            terms,
        }
    }

    pub fn to_poly(&self) -> Result<HomogeneousPoly> {
        if self.n < 1 {
            return Err(Error::Parse("field \"n\": must be at least 1".into()));
        }
        if self.d < 1 {
            return Err(Error::Parse("field \"d\": must be at least 1".into()));
        }
        let vars = self.n + 1;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            if t.exp.len() != vars {
                return Err(Error::Parse(format!(
                    "terms[{i}].exp: has {} entries, expected n+1 = {vars}",
                    t.exp.len()
                )));
            }
            let total: u32 = t.exp.iter().sum();
            if total as usize != self.d {
                return Err(Error::Parse(format!(
                    "terms[{i}].exp: exponents sum to {total}, expected d = {}",
                    self.d
                )));
            }
            if !t.coeff[0].is_finite() || !t.coeff[1].is_finite() {
                return Err(Error::Parse(format!("terms[{i}].coeff: not finite")));
            }
            terms.push((t.exp.clone(), C64::new(t.coeff[0], t.coeff[1])));
        }
        HomogeneousPoly::from_terms(vars, self.d, &terms)
    }
}

/// Parses the polynomial JSON format; errors carry line/column or field paths.
pub fn parse_poly(text: &str) -> Result<HomogeneousPoly> {
    let file: PolyFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_poly()
}

pub fn poly_to_json(f: &HomogeneousPoly) -> String {
    serde_json::to_string_pretty(&PolyFile::from_poly(f)).expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub lambda: [f64; 2],
    pub form: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub d: usize,
    pub terms: Vec<DecompositionTerm>,
    pub residual: f64,
    pub seed: u64,
    /// Same terms with every form scaled to last coordinate one, when possible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms_last_coordinate_one: Option<Vec<DecompositionTerm>>,
}

fn pair(c: &C64) -> [f64; 2] {
    // Adding 0.0 turns -0.0 into 0.0.
    [c.re + 0.0, c.im + 0.0]
}

impl DecompositionFile {
    pub fn new(dec: &WaringDecomposition, residual: f64, seed: u64) -> Self {
        let terms = dec
            .terms()
            .iter()
            .map(|t| DecompositionTerm {
                lambda: pair(&t.weight),
                form: t.form.coeffs().iter().map(pair).collect(),
            })
            .collect();
        let alt = dec.with_last_coordinate_one().map(|parts| {
            parts
                .iter()
                .map(|(w, coeffs)| DecompositionTerm {
                    lambda: pair(w),
                    form: coeffs.iter().map(pair).collect(),
                })
                .collect()
        });
        Self {
            d: dec.degree(),
            terms,
            residual,
            seed,
            terms_last_coordinate_one: alt,
        }
    }

    pub fn to_decomposition(&self) -> Result<WaringDecomposition> {
        let vars = self
            .terms
            .first()
            .map(|t| t.form.len())
            .ok_or_else(|| Error::Parse("terms: empty decomposition".into()))?;
        let parts = self
            .terms
            .iter()
            .map(|t| {
                (
                    C64::new(t.lambda[0], t.lambda[1]),
                    t.form.iter().map(|c| C64::new(c[0], c[1])).collect(),
                )
            })
            .collect();
        WaringDecomposition::from_parts(vars, self.d, parts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn parses_worked_cubic() {
        let text = r#"{ "n": 1, "d": 3, "terms": [
            { "exp": [3, 0], "coeff": [1, 0] },
            { "exp": [2, 1], "coeff": [1, 0] },
            { "exp": [1, 2], "coeff": [-1, 0] },
            { "exp": [0, 3], "coeff": [1, 0] } ] }"#;
        let f = parse_poly(text).unwrap();
        assert_eq!(f.to_real(0.0).unwrap(), vec![1.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn omitted_monomials_are_zero() {
        let text = r#"{ "n": 2, "d": 2, "terms": [ { "exp": [0, 1, 1], "coeff": [2, -1] } ] }"#;
        let f = parse_poly(text).unwrap();
        assert_eq!(f.coeffs().iter().filter(|c| c.norm() != 0.0).count(), 1);
        assert_eq!(f.coeff(&[0, 1, 1]), C64::new(2.0, -1.0));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad_sum = r#"{ "n": 1, "d": 3, "terms": [ { "exp": [2, 0], "coeff": [1, 0] } ] }"#;
        let msg = parse_poly(bad_sum).unwrap_err().to_string();
        assert!(msg.contains("terms[0].exp"), "{msg}");

        let bad_len = r#"{ "n": 2, "d": 1, "terms": [ { "exp": [1, 0], "coeff": [1, 0] } ] }"#;
        assert!(parse_poly(bad_len).unwrap_err().to_string().contains("n+1"));

        let syntax = "{ \"n\": 1,\n \"d\": }";
        let msg = parse_poly(syntax).unwrap_err().to_string();
        assert!(msg.contains("line 2"), "{msg}");

        let missing = r#"{ "n": 1, "terms": [] }"#;
        assert!(parse_poly(missing).unwrap_err().to_string().contains("`d`"));
    }

    #[test]
    fn round_trip_random() {
        let mut rng = seeded(17);
        let f = HomogeneousPoly::random(4, 3, true, &mut rng);
        let g = parse_poly(&poly_to_json(&f)).unwrap();
        assert_eq!(f, g);
    }
}
