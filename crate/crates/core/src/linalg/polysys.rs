//! Zero-dimensional homogeneous systems by seeded multistart Newton.
//!
//! Each attempt picks a random unitary frame `Q` of `C^(m+1)` and works in the
//! affine chart `xi = q_0 + sum_k t_k q_k`, so the hyperplane at infinity is
//! random and generic solutions are finite. An overdetermined system is
//! replaced by `m` random combinations of its equations. The starts are the
//! roots of `t_i^D = 1`, carried to the target by predictor-corrector Newton
//! along the homotopy `(1 - s) gamma G + s F` with a random `gamma`, which
//! reaches every isolated root of the square system with probability one.
//! Endpoints are polished, verified against the full system on their
//! unit-norm representative and deduplicated with the Fubini-Study distance.

use super::{lex_cmp, normalize_projective, projective_distance, singular_values, DenseMatrix, ProjectivePoint};
use crate::error::{Error, Result};
use crate::poly::HomogeneousPoly;
use crate::rng::{complex_gauss, complex_vector, substream};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct PolySysOptions {
    /// Affine charts (each with fresh randomization) tried before giving up.
    pub charts: usize,
    /// Largest number of homotopy paths per chart.
    pub max_paths: usize,
    /// Step budget for one path.
    pub max_path_steps: usize,
    /// Newton iterations in the final polish.
    pub max_iterations: usize,
    /// Bound on `max |eq_i(point)|` for unit-norm points and unit-norm equations.
    pub residual_tol: f64,
    /// Fubini-Study radius under which two solutions are identified.
    pub cluster_radius: f64,
    /// Relative singular value below which the Jacobian counts as singular.
    pub singular_tol: f64,
}

impl Default for PolySysOptions {
    fn default() -> Self {
        Self {
            charts: 3,
            max_paths: 20_000,
            max_path_steps: 4000,
            max_iterations: 50,
            residual_tol: 1e-8,
            cluster_radius: 1e-6,
            singular_tol: 1e-7,
        }
    }
}

/// Equation with precomputed exponents.
struct Compiled {
    exps: Vec<Vec<u32>>,
    coeffs: Vec<C64>,
    degree: usize,
}

impl Compiled {
    fn new(f: &HomogeneousPoly) -> Self {
        let norm = f.norm();
        Self {
            exps: f.exponents(),
            coeffs: f.coeffs().iter().map(|c| c / norm).collect(),
            degree: f.degree(),
        }
    }

    fn eval_grad(&self, x: &[C64]) -> (C64, Vec<C64>) {
        let n = x.len();
        let powers: Vec<Vec<C64>> = x
            .iter()
            .map(|&v| {
                let mut row = vec![C64::new(1.0, 0.0); self.degree + 1];
                for k in 1..=self.degree {
                    row[k] = row[k - 1] * v;
                }
                row
            })
            .collect();
        let mut value = C64::new(0.0, 0.0);
        let mut grad = vec![C64::new(0.0, 0.0); n];
        for (e, c) in self.exps.iter().zip(&self.coeffs) {
            let mut mono = *c;
            for i in 0..n {
                mono *= powers[i][e[i] as usize];
            }
            value += mono;
            for var in 0..n {
                if e[var] == 0 {
                    continue;
                }
                let mut term = c * e[var] as f64;
                for i in 0..n {
                    let k = if i == var { e[i] - 1 } else { e[i] };
                    term *= powers[i][k as usize];
                }
                grad[var] += term;
            }
        }
        (value, grad)
    }
}

struct Found {
    point: ProjectivePoint,
    singular: bool,
}

/// Solves a generically zero-dimensional homogeneous system in `P^m`.
///
/// Returns exactly `expected_count` verified distinct points, sorted
/// lexicographically by normalized coordinates. Charts are tried until one
/// yields at least `expected_count` solutions; any other final count is a
/// `CountMismatch` (fewer nonzero equations than `m` leave no isolated
/// solutions and count as zero found). A correct count that includes a
/// point with a rank-deficient Jacobian is reported as `NotZeroDimensional`.
pub fn polysys_solve(
    eqs: &[HomogeneousPoly],
    expected_count: usize,
    seed: u64,
    opts: &PolySysOptions,
) -> Result<Vec<ProjectivePoint>> {
    if expected_count == 0 {
        return Err(Error::InvalidInput("expected_count must be positive".into()));
    }
    let vars = eqs
        .first()
        .map(HomogeneousPoly::num_vars)
        .ok_or_else(|| Error::InvalidInput("empty equation list".into()))?;
    if vars < 2 {
        return Err(Error::InvalidInput("need at least two homogeneous variables".into()));
    }
    if eqs.iter().any(|e| e.num_vars() != vars) {
        return Err(Error::InvalidInput("equations live in different variable counts".into()));
    }
    let compiled: Vec<Compiled> = eqs
        .iter()
        .filter(|e| !e.is_zero())
        .map(Compiled::new)
        .collect();
    if compiled.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let m = vars - 1;
    if compiled.len() < m {
        return Err(Error::CountMismatch {
            expected: expected_count,
            found: 0,
        });
    }
    let degree = compiled.iter().map(|c| c.degree).max().unwrap_or(1).max(1);
    let paths = (degree as u64).checked_pow(m as u32).filter(|&p| p <= opts.max_paths as u64);
    let Some(paths) = paths else {
        return Err(Error::InvalidInput(format!(
            "{degree}^{m} homotopy paths exceed the budget of {}",
            opts.max_paths
        )));
    };
    let mut found: Vec<Found> = Vec::new();

    for chart in 0..opts.charts {
        let mut rng = substream(seed, chart as u64);
        let system = Chart {
            eqs: &compiled,
            frame: random_unitary(vars, &mut rng),
            mix: if compiled.len() > m {
                DMatrix::from_column_slice(m, compiled.len(), &complex_vector(&mut rng, m * compiled.len()))
            } else {
                DMatrix::identity(m, m)
            },
            gamma: {
                let g = complex_gauss(&mut rng);
                g / g.norm()
            },
            degree,
        };
        for index in 0..paths {
            let Some(t) = system.track(system.start_point(index, m), opts) else {
                continue;
            };
            let Some(x) = system.polish(t, opts) else {
                continue;
            };
            let Some(unit) = normalize_projective(&x) else {
                continue;
            };
            let worst = compiled
                .iter()
                .map(|c| c.eval_grad(&unit).0.norm())
                .fold(0.0, f64::max);
            if worst > opts.residual_tol {
                continue;
            }
            if found
                .iter()
                .any(|f| projective_distance(f.point.coords(), &unit) < opts.cluster_radius)
            {
                continue;
            }
            let singular = is_singular(&compiled, &unit, opts.singular_tol);
            found.push(Found {
                point: ProjectivePoint::new(&unit)?,
                singular,
            });
        }
        if found.len() >= expected_count {
            break;
        }
    }

    if found.len() != expected_count {
        return Err(Error::CountMismatch {
            expected: expected_count,
            found: found.len(),
        });
    }
    let singular = found.iter().filter(|f| f.singular).count();
    if singular > 0 {
        return Err(Error::NotZeroDimensional { singular });
    }
    let mut points: Vec<ProjectivePoint> = found.into_iter().map(|f| f.point).collect();
    points.sort_by(|a, b| lex_cmp(a.coords(), b.coords()));
    Ok(points)
}

fn random_unitary(n: usize, rng: &mut crate::rng::SeededRng) -> DMatrix<C64> {
    let g = DMatrix::from_column_slice(n, n, &complex_vector(rng, n * n));
    g.qr().q()
}

/// The square target system in one affine chart, with its start system.
struct Chart<'a> {
    eqs: &'a [Compiled],
    frame: DMatrix<C64>,
    mix: DMatrix<C64>,
    gamma: C64,
    degree: usize,
}

impl Chart<'_> {
    fn point(&self, t: &[C64]) -> Vec<C64> {
        let mut x: Vec<C64> = self.frame.column(0).iter().copied().collect();
        for (k, tk) in t.iter().enumerate() {
            for (xi, q) in x.iter_mut().zip(self.frame.column(k + 1).iter()) {
                *xi += tk * q;
            }
        }
        x
    }

    fn target(&self, t: &[C64]) -> (DVector<C64>, DMatrix<C64>) {
        let x = self.point(t);
        let m = t.len();
        let mut r = DVector::zeros(self.eqs.len());
        let mut j = DMatrix::zeros(self.eqs.len(), m);
        for (i, eq) in self.eqs.iter().enumerate() {
            let (v, g) = eq.eval_grad(&x);
            r[i] = v;
            for k in 0..m {
                j[(i, k)] = g.iter().zip(self.frame.column(k + 1).iter()).map(|(a, b)| a * b).sum();
            }
        }
        (&self.mix * r, &self.mix * j)
    }

    /// Root number `index` of `t_i^D = 1`, digits of `index` in base `D`.
    fn start_point(&self, mut index: u64, m: usize) -> Vec<C64> {
        let d = self.degree as u64;
        (0..m)
            .map(|_| {
                let k = index % d;
                index /= d;
                C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64)
            })
            .collect()
    }

    fn start(&self, t: &[C64]) -> (DVector<C64>, DMatrix<C64>) {
        let d = self.degree as i32;
        let m = t.len();
        let mut r = DVector::zeros(m);
        let mut j = DMatrix::zeros(m, m);
        for (i, ti) in t.iter().enumerate() {
            r[i] = ti.powi(d) - 1.0;
            j[(i, i)] = ti.powi(d - 1) * d as f64;
        }
        (r, j)
    }

    /// `H(t, s)`, `dH/dt` and `dH/ds`.
    fn homotopy(&self, t: &[C64], s: f64) -> (DVector<C64>, DMatrix<C64>, DVector<C64>) {
        let (f, jf) = self.target(t);
        let (g, jg) = self.start(t);
        let h = &g * (self.gamma * (1.0 - s)) + &f * C64::new(s, 0.0);
        let jh = &jg * (self.gamma * (1.0 - s)) + &jf * C64::new(s, 0.0);
        let ds = f - g * self.gamma;
        (h, jh, ds)
    }

    fn tangent(&self, t: &[C64], s: f64) -> Option<DVector<C64>> {
        let (_, jh, ds) = self.homotopy(t, s);
        jh.lu().solve(&(-ds))
    }

    /// Follows one path from `s = 0` to `s = 1`; `None` if it diverges or
    /// stalls.
    fn track(&self, mut t: Vec<C64>, opts: &PolySysOptions) -> Option<Vec<C64>> {
        let m = t.len();
        let mut s = 0.0;
        let mut h: f64 = 0.02;
        let mut streak = 0;
        for _ in 0..opts.max_path_steps {
            if s >= 1.0 {
                return Some(t);
            }
            let step = h.min(1.0 - s);
            let advanced = self.rk4(&t, s, step).and_then(|guess| self.correct(guess, s + step));
            match advanced {
                Some(next) => {
                    t = next;
                    s += step;
                    streak += 1;
                    if streak >= 3 {
                        h = (h * 2.0).min(0.1);
                        streak = 0;
                    }
                }
                None => {
                    h /= 2.0;
                    streak = 0;
                    if h < 1e-13 {
                        return None;
                    }
                }
            }
            if t.iter().take(m).any(|c| c.norm() > 1e8) {
                return None;
            }
        }
        None
    }

    fn rk4(&self, t: &[C64], s: f64, h: f64) -> Option<Vec<C64>> {
        let shift = |v: &DVector<C64>, a: f64| -> Vec<C64> { t.iter().zip(v.iter()).map(|(x, d)| x + d * a).collect() };
        let k1 = self.tangent(t, s)?;
        let k2 = self.tangent(&shift(&k1, h / 2.0), s + h / 2.0)?;
        let k3 = self.tangent(&shift(&k2, h / 2.0), s + h / 2.0)?;
        let k4 = self.tangent(&shift(&k3, h), s + h)?;
        let inc = (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0);
        let out = shift(&inc, 1.0);
        out.iter().all(|c| c.is_finite()).then_some(out)
    }

    /// Newton on `H(., s)`; must contract quickly to count as a success.
    fn correct(&self, mut t: Vec<C64>, s: f64) -> Option<Vec<C64>> {
        let mut last = f64::INFINITY;
        for _ in 0..4 {
            let (r, j, _) = self.homotopy(&t, s);
            let dt = j.lu().solve(&(-r))?;
            let size = dt.norm();
            let scale = 1.0 + t.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for (x, d) in t.iter_mut().zip(dt.iter()) {
                *x += d;
            }
            if size <= 1e-10 * scale {
                return Some(t);
            }
            if size > 0.5 * last || size > 0.1 * scale {
                return None;
            }
            last = size;
        }
        None
    }

    /// Newton on the square target from a path endpoint.
    fn polish(&self, mut t: Vec<C64>, opts: &PolySysOptions) -> Option<Vec<C64>> {
        for _ in 0..opts.max_iterations {
            let (r, j) = self.target(&t);
            let Some(dt) = j.lu().solve(&(-r)) else {
                break;
            };
            for (x, d) in t.iter_mut().zip(dt.iter()) {
                *x += d;
            }
            if !t.iter().all(|c| c.is_finite()) {
                return None;
            }
            let scale = 1.0 + t.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if dt.norm() <= 1e-15 * scale {
                break;
            }
        }
        Some(self.point(&t))
    }
}

/// Jacobian restricted to the tangent directions orthogonal to `unit`.
fn is_singular(eqs: &[Compiled], unit: &[C64], tol: f64) -> bool {
    let n = unit.len();
    let row = DenseMatrix::from_row_major(1, n, &unit.iter().map(|c| c.conj()).collect::<Vec<_>>())
        .expect("row vector");
    let tangent = match super::nullspace(&row, 1e-12) {
        Ok(t) => t,
        Err(_) => return true,
    };
    let mut jac = DenseMatrix::zeros(eqs.len(), tangent.cols());
    for (i, eq) in eqs.iter().enumerate() {
        let g = eq.eval_grad(unit).1;
        for k in 0..tangent.cols() {
            jac[(i, k)] = (0..n).map(|a| g[a] * tangent[(a, k)]).sum();
        }
    }
    match singular_values(&jac) {
        Ok(sv) => {
            let top = sv[0];
            top == 0.0 || sv[tangent.cols().min(sv.len()) - 1] < tol * top || sv.len() < tangent.cols()
        }
        Err(_) => true,
    }
}
