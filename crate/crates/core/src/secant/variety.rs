use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, ProjectivePoint};
use crate::poly::{binomial, exponents, multinomial};
use crate::rng::complex_vector;
use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Families of parametrized projective varieties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarietyKind {
    /// `V_d^n`, the degree-`d` Veronese embedding of `P^n`.
    Veronese { n: usize, d: usize },
    /// Degree-`d` rational normal curve in `P^d`.
    RationalNormalCurve { d: usize },
    /// Smooth quadric `x0 x1 = x2^2 + ... + xN^2` in `P^N`.
    QuadricHypersurface { ambient: usize },
    /// `SV_{a,b}^{n,m}`, the image of `P^n x P^m` under `O(a,b)`.
    SegreVeronese { n: usize, m: usize, a: usize, b: usize },
    /// Plücker embedding of the Grassmannian of `r`-planes in `P^n`.
    GrassmannPlucker { r: usize, n: usize },
}

/// A variety given by an explicit polynomial map from an affine parameter
/// space onto its affine cone.
///
/// Parameter layouts:
/// - Veronese: the `n + 1` coefficients of a linear form `l`; the image is the
///   coefficient vector of `l^d` in the graded-lex basis.
/// - Quadric: `(t, u_2, ..., u_N)` maps to `(t^2, sum u_i^2, t u_2, ..., t u_N)`.
/// - Segre–Veronese: `(x, y)` maps to the Kronecker product of the two
///   Veronese images.
/// - Grassmannian: an `(r+1) x (n+1)` matrix in row-major order; the image is
///   the vector of maximal minors, column subsets in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamVariety {
    kind: VarietyKind,
}

fn veronese_image(x: &[C64], d: usize) -> Vec<C64> {
    exponents(x.len(), d)
        .iter()
        .map(|e| {
            e.iter()
                .zip(x)
                .fold(C64::new(multinomial(e), 0.0), |acc, (&k, c)| acc * c.powu(k))
        })
        .collect()
}

/// Columns `d/dx_j` of the Veronese image.
fn veronese_derivatives(x: &[C64], d: usize) -> Vec<Vec<C64>> {
    let basis = exponents(x.len(), d);
    (0..x.len())
        .map(|j| {
            basis
                .iter()
                .map(|e| {
                    if e[j] == 0 {
                        return C64::new(0.0, 0.0);
                    }
                    let mut value = C64::new(multinomial(e) * e[j] as f64, 0.0);
                    for (i, (&k, c)) in e.iter().zip(x).enumerate() {
                        let k = if i == j { k - 1 } else { k };
                        value *= c.powu(k);
                    }
                    value
                })
                .collect()
        })
        .collect()
}

fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn det(m: &DMatrix<C64>) -> C64 {
    if m.nrows() == 0 {
        C64::new(1.0, 0.0)
    } else {
        m.clone().determinant()
    }
}

impl ParamVariety {
    pub fn new(kind: VarietyKind) -> Result<Self> {
        let ok = match kind {
            VarietyKind::Veronese { n, d } => n >= 1 && d >= 1,
            VarietyKind::RationalNormalCurve { d } => d >= 1,
            VarietyKind::QuadricHypersurface { ambient } => ambient >= 2,
            VarietyKind::SegreVeronese { n, m, a, b } => n >= 1 && m >= 1 && a >= 1 && b >= 1,
            VarietyKind::GrassmannPlucker { r, n } => r < n,
        };
        if !ok {
            return Err(Error::InvalidInput(format!("invalid variety parameters {kind:?}")));
        }
        let variety = Self { kind };
        variety.ambient_n()?;
        Ok(variety)
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    /// Dimension of the variety.
    pub fn dim(&self) -> usize {
        match self.kind {
            VarietyKind::Veronese { n, .. } => n,
            VarietyKind::RationalNormalCurve { .. } => 1,
            VarietyKind::QuadricHypersurface { ambient } => ambient - 1,
            VarietyKind::SegreVeronese { n, m, .. } => n + m,
            VarietyKind::GrassmannPlucker { r, n } => (r + 1) * (n - r),
        }
    }

    /// Dimension `N` of the ambient projective space.
    pub fn ambient_n(&self) -> Result<u64> {
        let count = match self.kind {
            VarietyKind::Veronese { n, d } => binomial((n + d) as u64, d as u64)?,
            VarietyKind::RationalNormalCurve { d } => d as u64 + 1,
            VarietyKind::QuadricHypersurface { ambient } => ambient as u64 + 1,
            VarietyKind::SegreVeronese { n, m, a, b } => binomial((a + n) as u64, n as u64)?
                .checked_mul(binomial((b + m) as u64, m as u64)?)
                .ok_or(Error::Overflow("Segre-Veronese ambient dimension"))?,
            VarietyKind::GrassmannPlucker { r, n } => binomial(n as u64 + 1, r as u64 + 1)?,
        };
        Ok(count - 1)
    }

    /// Length of a parameter vector.
    pub fn num_params(&self) -> usize {
        match self.kind {
            VarietyKind::Veronese { n, .. } => n + 1,
            VarietyKind::RationalNormalCurve { .. } => 2,
            VarietyKind::QuadricHypersurface { ambient } => ambient,
            VarietyKind::SegreVeronese { n, m, .. } => n + m + 2,
            VarietyKind::GrassmannPlucker { r, n } => (r + 1) * (n + 1),
        }
    }

    /// Complex Gaussian parameter vector.
    pub fn random_params(&self, rng: &mut impl Rng) -> Vec<C64> {
        complex_vector(rng, self.num_params())
    }

    fn check_params(&self, params: &[C64]) -> Result<()> {
        if params.len() != self.num_params() {
            return Err(Error::InvalidInput(format!(
                "expected {} parameters, got {}",
                self.num_params(),
                params.len()
            )));
        }
        if params.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite parameter".into()));
        }
        Ok(())
    }

    /// Image of `params` on the affine cone, without normalization.
    pub fn embed_affine(&self, params: &[C64]) -> Result<Vec<C64>> {
        self.check_params(params)?;
        Ok(match self.kind {
            VarietyKind::Veronese { d, .. } | VarietyKind::RationalNormalCurve { d } => veronese_image(params, d),
            VarietyKind::QuadricHypersurface { ambient } => {
                let t = params[0];
                let u = &params[1..];
                let mut out = Vec::with_capacity(ambient + 1);
                out.push(t * t);
                out.push(u.iter().map(|x| x * x).sum());
                out.extend(u.iter().map(|x| t * x));
                out
            }
            VarietyKind::SegreVeronese { n, a, b, .. } => {
                kron(&veronese_image(&params[..n + 1], a), &veronese_image(&params[n + 1..], b))
            }
            VarietyKind::GrassmannPlucker { r, n } => {
                let m = DMatrix::from_row_slice(r + 1, n + 1, params);
                (0..=n)
                    .combinations(r + 1)
                    .map(|cols| det(&m.select_columns(&cols)))
                    .collect()
            }
        })
    }

    pub fn embed(&self, params: &[C64]) -> Result<ProjectivePoint> {
        ProjectivePoint::new(&self.embed_affine(params)?)
    }

    /// Jacobian of `embed_affine`: `(N + 1) x num_params`. At a smooth point
    /// its columns span the affine tangent space of the cone.
    pub fn tangent_jacobian(&self, params: &[C64]) -> Result<DenseMatrix> {
        self.check_params(params)?;
        let columns: Vec<Vec<C64>> = match self.kind {
            VarietyKind::Veronese { d, .. } | VarietyKind::RationalNormalCurve { d } => {
                veronese_derivatives(params, d)
            }
            VarietyKind::QuadricHypersurface { ambient } => {
                let t = params[0];
                let u = &params[1..];
                let zero = C64::new(0.0, 0.0);
                let mut dt = vec![t * 2.0, zero];
                dt.extend_from_slice(u);
                let mut columns = vec![dt];
                for (k, &uk) in u.iter().enumerate() {
                    let mut col = vec![zero; ambient + 1];
                    col[1] = uk * 2.0;
                    col[2 + k] = t;
                    columns.push(col);
                }
                columns
            }
            VarietyKind::SegreVeronese { n, a, b, .. } => {
                let (x, y) = params.split_at(n + 1);
                let (vx, vy) = (veronese_image(x, a), veronese_image(y, b));
                veronese_derivatives(x, a)
                    .iter()
                    .map(|dx| kron(dx, &vy))
                    .chain(veronese_derivatives(y, b).iter().map(|dy| kron(&vx, dy)))
                    .collect()
            }
            VarietyKind::GrassmannPlucker { r, n } => {
                let m = DMatrix::from_row_slice(r + 1, n + 1, params);
                let subsets: Vec<Vec<usize>> = (0..=n).combinations(r + 1).collect();
                let mut columns = vec![vec![C64::new(0.0, 0.0); subsets.len()]; params.len()];
                for (row, cols) in subsets.iter().enumerate() {
                    let block = m.select_columns(cols);
                    for i in 0..=r {
                        for (c, &j) in cols.iter().enumerate() {
                            // Cofactor expansion of the minor along entry (i, j).
                            let minor = block.clone().remove_row(i).remove_column(c);
                            let sign = if (i + c) % 2 == 0 { 1.0 } else { -1.0 };
                            columns[i * (n + 1) + j][row] = det(&minor) * sign;
                        }
                    }
                }
                columns
            }
        };
        DenseMatrix::from_columns(&columns)
    }

    /// `x0 x1 - sum_{i>=2} x_i^2` for quadrics, `None` otherwise.
    pub fn quadric_value(&self, coords: &[C64]) -> Option<C64> {
        match self.kind {
            VarietyKind::QuadricHypersurface { ambient } if coords.len() == ambient + 1 => {
                Some(coords[0] * coords[1] - coords[2..].iter().map(|x| x * x).sum::<C64>())
            }
            _ => None,
        }
    }
}

impl std::str::FromStr for ParamVariety {
    type Err = Error;

    /// Parses `veronese:n:d`, `rnc:d`, `quadric:N`, `segre-veronese:n:m:a:b`
    /// or `grassmann:r:n`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        let args = parts
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad integer '{p}' in '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        let want = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::Parse(format!("'{name}' takes {k} integer arguments, got {}", args.len())))
            }
        };
        let kind = match name.as_str() {
            "veronese" => {
                want(2)?;
                VarietyKind::Veronese { n: args[0], d: args[1] }
            }
            "rnc" => {
                want(1)?;
                VarietyKind::RationalNormalCurve { d: args[0] }
            }
            "quadric" => {
                want(1)?;
                VarietyKind::QuadricHypersurface { ambient: args[0] }
            }
            "segre-veronese" => {
                want(4)?;
                VarietyKind::SegreVeronese {
                    n: args[0],
                    m: args[1],
                    a: args[2],
                    b: args[3],
                }
            }
            "grassmann" => {
                want(2)?;
                VarietyKind::GrassmannPlucker { r: args[0], n: args[1] }
            }
            other => return Err(Error::Parse(format!("unknown variety kind '{other}'"))),
        };
        ParamVariety::new(kind)
    }
}
