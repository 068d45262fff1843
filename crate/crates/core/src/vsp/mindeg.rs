use crate::error::{Error, Result};
use crate::linalg::{least_squares, normalize_projective, projective_distance, univariate_roots, DenseMatrix, ProjectivePoint};
use crate::poly::binomial;
use crate::rng::{complex_gauss, complex_vector, substream};
use crate::secant::{ParamVariety, VarietyKind};
use num_complex::Complex64 as C64;
use rand::Rng;

/// Resampling budget for non-transverse slices and degenerate draws.
pub const RESAMPLE_BUDGET: usize = 10;

/// Bound on the relative span residual and on the distance of each point
/// from the variety.
pub const SPAN_TOL: f64 = 1e-8;

const SEPARATION_TOL: f64 = 1e-6;

/// `p = sum_i weights[i] * points[i]` on the affine cone.
///
/// `points` are unit-norm representatives and `target` is the representative
/// of `p` the weights refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanDecomposition {
    pub target: Vec<C64>,
    pub points: Vec<Vec<C64>>,
    pub weights: Vec<C64>,
    /// `|p - sum_i w_i x_i| / |p|`.
    pub residual: f64,
}

impl SpanDecomposition {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn projective_points(&self) -> Result<Vec<ProjectivePoint>> {
        self.points.iter().map(|x| ProjectivePoint::new(x)).collect()
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn unit(v: &[C64]) -> Vec<C64> {
    let n = norm(v);
    v.iter().map(|c| c / n).collect()
}

fn span_fit(target: &[C64], points: Vec<Vec<C64>>) -> Result<SpanDecomposition> {
    let weights = least_squares(&DenseMatrix::from_columns(&points)?, target)?;
    let mut diff = target.to_vec();
    for (x, w) in points.iter().zip(&weights) {
        for (d, c) in diff.iter_mut().zip(x) {
            *d -= w * c;
        }
    }
    Ok(SpanDecomposition {
        target: target.to_vec(),
        residual: norm(&diff) / norm(target),
        points,
        weights,
    })
}

fn well_separated(points: &[Vec<C64>]) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(i, a)| points[i + 1..].iter().all(|b| projective_distance(a, b) > SEPARATION_TOL))
}

fn degree_of(x: &ParamVariety) -> Result<usize> {
    match x.kind() {
        VarietyKind::RationalNormalCurve { d } | VarietyKind::Veronese { n: 1, d } => Ok(d),
        VarietyKind::QuadricHypersurface { .. } => Ok(2),
        other => Err(Error::Unsupported(format!("slicing needs a rational normal curve or a quadric, got {other:?}"))),
    }
}

/// Univariate pullback of the linear equation `a` along `s -> v(s, 1)`;
/// `coeffs[k]` multiplies `s^k`.
fn pullback(d: usize, a: &[C64]) -> Vec<C64> {
    (0..=d)
        .map(|k| a[d - k] * binomial(d as u64, (d - k) as u64).expect("small binomial") as f64)
        .collect()
}

/// Intersects the degree-`d` rational normal curve with the linear space
/// `{x : a . x = 0 for every a in equations}` through `p` and writes `p` in
/// terms of the intersection points.
///
/// A random combination of the pulled-back equations is solved with
/// [`univariate_roots`]; roots where some equation does not vanish are
/// discarded. The equations must be independent, so `d + 1 - equations.len()`
/// points are expected.
pub fn rnc_slice(d: usize, p: &[C64], equations: &[Vec<C64>], seed: u64) -> Result<SpanDecomposition> {
    if p.len() != d + 1 || equations.iter().any(|a| a.len() != d + 1) || equations.is_empty() {
        return Err(Error::InvalidInput(format!("slice of the degree-{d} curve needs vectors of length {}", d + 1)));
    }
    let expected = d + 1 - equations.len().min(d);
    let mut rng = substream(seed, 0x51ce);
    let pulled: Vec<Vec<C64>> = equations.iter().map(|a| pullback(d, a)).collect();
    let mut combined = vec![C64::new(0.0, 0.0); d + 1];
    for q in &pulled {
        let c = complex_gauss(&mut rng);
        let scale = norm(q);
        for (acc, x) in combined.iter_mut().zip(q) {
            *acc += c * x / scale;
        }
    }
    // A vanishing leading coefficient puts a root at infinity.
    if combined[d].norm() < 1e-8 * norm(&combined) {
        return Err(Error::NonTransverse { attempts: 1 });
    }
    let curve = ParamVariety::new(VarietyKind::RationalNormalCurve { d })?;
    let mut points = Vec::new();
    for s in univariate_roots(&combined)? {
        let param = unit(&[s, C64::new(1.0, 0.0)]);
        let x = unit(&curve.embed_affine(&param)?);
        let on_plane = equations.iter().all(|a| {
            let value: C64 = a.iter().zip(&x).map(|(u, v)| u * v).sum();
            value.norm() <= 1e-6 * norm(a)
        });
        if on_plane {
            points.push(x);
        }
    }
    if points.len() != expected || !well_separated(&points) {
        return Err(Error::NonTransverse { attempts: 1 });
    }
    span_fit(p, points)
}

fn quadric_slice(x: &ParamVariety, p: &[C64], rng: &mut impl Rng) -> Result<SpanDecomposition> {
    let q = unit(&complex_vector(rng, p.len()));
    let bilinear = |u: &[C64], v: &[C64]| (u[0] * v[1] + u[1] * v[0]) * 0.5 - u[2..].iter().zip(&v[2..]).map(|(a, b)| a * b).sum::<C64>();
    // Q(p + t q) = a t^2 + b t + c.
    let a = bilinear(&q, &q);
    let b = bilinear(p, &q) * 2.0;
    let c = bilinear(p, p);
    let scale = a.norm() + b.norm() + c.norm();
    let disc = (b * b - a * c * 4.0).sqrt();
    if a.norm() < 1e-8 * scale || disc.norm() < 1e-6 * scale {
        return Err(Error::NonTransverse { attempts: 1 });
    }
    // Pick the sign that avoids cancellation, then use Vieta for the other root.
    let big = if (b + disc).norm() >= (b - disc).norm() { -(b + disc) } else { -(b - disc) };
    let roots = [big / (a * 2.0), (c * 2.0) / big];
    let points: Vec<Vec<C64>> = roots
        .iter()
        .map(|t| unit(&p.iter().zip(&q).map(|(u, v)| u + t * v).collect::<Vec<_>>()))
        .collect();
    for point in &points {
        if x.quadric_value(point).is_none_or(|v| v.norm() > SPAN_TOL) {
            return Err(Error::NonTransverse { attempts: 1 });
        }
    }
    if !well_separated(&points) {
        return Err(Error::NonTransverse { attempts: 1 });
    }
    span_fit(p, points)
}

/// One slicing attempt with the linear space drawn from `rng`.
fn slice_once(x: &ParamVariety, p: &[C64], rng: &mut impl Rng, seed: u64) -> Result<SpanDecomposition> {
    match x.kind() {
        VarietyKind::QuadricHypersurface { .. } => quadric_slice(x, p, rng),
        _ => {
            let d = degree_of(x)?;
            // The hyperplane through p and d - 1 random points.
            let mut rows = vec![p.to_vec()];
            rows.extend((1..d).map(|_| complex_vector(rng, d + 1)));
            let kernel = crate::linalg::nullspace(&DenseMatrix::from_rows(&rows)?, 1e-10)?;
            if kernel.cols() != 1 {
                return Err(Error::NonTransverse { attempts: 1 });
            }
            let a = kernel.column(0);
            rnc_slice(d, p, &[a], seed)
        }
    }
}

fn check(result: SpanDecomposition) -> Result<SpanDecomposition> {
    if result.residual > SPAN_TOL {
        return Err(Error::Inaccurate {
            residual: result.residual,
            tol: SPAN_TOL,
        });
    }
    Ok(result)
}

fn target_of(x: &ParamVariety, p: &ProjectivePoint) -> Result<Vec<C64>> {
    let n = x.ambient_n()? as usize;
    if p.dim() != n {
        return Err(Error::InvalidInput(format!("point lives in P^{}, variety in P^{n}", p.dim())));
    }
    Ok(p.coords().to_vec())
}

/// Writes a general point `p` as a combination of `deg X` points of a
/// minimal-degree variety `X` cut out by a random `(deg - 1)`-plane through
/// `p`.
///
/// Supported: rational normal curves (hyperplane sections, solved by root
/// finding) and quadrics (secant lines, solved by the quadratic formula).
/// Non-transverse slices are redrawn up to [`RESAMPLE_BUDGET`] times.
pub fn mindeg_decompose(x: &ParamVariety, p: &ProjectivePoint, seed: u64) -> Result<SpanDecomposition> {
    degree_of(x)?;
    let target = target_of(x, p)?;
    slice_target(x, &target, seed)
}

fn slice_target(x: &ParamVariety, target: &[C64], seed: u64) -> Result<SpanDecomposition> {
    for attempt in 0..RESAMPLE_BUDGET {
        let mut rng = substream(seed, attempt as u64);
        match slice_once(x, target, &mut rng, seed.wrapping_add(attempt as u64)).and_then(check) {
            Ok(result) => return Ok(result),
            Err(Error::NonTransverse { .. } | Error::Inaccurate { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NonTransverse {
        attempts: RESAMPLE_BUDGET,
    })
}

/// `h`-point version of [`mindeg_decompose`]: draws `h - deg X` weighted
/// random points `x_i` of `X`, slices through the residual `p - sum l_i x_i`
/// and returns the union.
pub fn mindeg_decompose_extended(x: &ParamVariety, p: &ProjectivePoint, h: usize, seed: u64) -> Result<SpanDecomposition> {
    let deg = degree_of(x)?;
    if h < deg {
        return Err(Error::InvalidInput(format!("need at least {deg} points, got h = {h}")));
    }
    if h == deg {
        return mindeg_decompose(x, p, seed);
    }
    let target = target_of(x, p)?;
    for attempt in 0..RESAMPLE_BUDGET {
        let mut rng = substream(seed, 0x1000 + attempt as u64);
        let mut drawn = Vec::new();
        let mut residual = target.clone();
        for _ in 0..h - deg {
            let point = unit(&x.embed_affine(&x.random_params(&mut rng))?);
            let weight = complex_gauss(&mut rng);
            for (r, c) in residual.iter_mut().zip(&point) {
                *r -= weight * c;
            }
            drawn.push((point, weight));
        }
        if norm(&residual) < 1e-6 {
            continue;
        }
        let Ok(sliced) = slice_target(x, &residual, seed.wrapping_add(attempt as u64)) else {
            continue;
        };
        let mut points: Vec<Vec<C64>> = drawn.iter().map(|(pt, _)| pt.clone()).collect();
        points.extend(sliced.points);
        if !well_separated(&points) {
            continue;
        }
        let mut weights: Vec<C64> = drawn.iter().map(|(_, w)| *w).collect();
        weights.extend(sliced.weights);
        let mut diff = target.clone();
        for (pt, w) in points.iter().zip(&weights) {
            for (d, c) in diff.iter_mut().zip(pt) {
                *d -= w * c;
            }
        }
        let result = SpanDecomposition {
            residual: norm(&diff) / norm(&target),
            target: target.clone(),
            points,
            weights,
        };
        if result.residual <= SPAN_TOL {
            return Ok(result);
        }
    }
    Err(Error::DegenerateDraw {
        attempts: RESAMPLE_BUDGET,
    })
}

/// Unit-sphere draw in the coordinate space, as a projective point.
pub fn random_point(dim: usize, seed: u64) -> Result<ProjectivePoint> {
    let mut rng = substream(seed, 0x9e3);
    let v = complex_vector(&mut rng, dim + 1);
    ProjectivePoint::new(&normalize_projective(&v).ok_or(Error::DegenerateDraw { attempts: 1 })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_with_tol;
    use crate::poly::{HomogeneousPoly, LinearForm, Term, WaringDecomposition};
    use crate::waring::{decompose_binary, BinaryOptions};

    fn rnc(d: usize) -> ParamVariety {
        ParamVariety::new(VarietyKind::RationalNormalCurve { d }).unwrap()
    }

    fn quadric(n: usize) -> ParamVariety {
        ParamVariety::new(VarietyKind::QuadricHypersurface { ambient: n }).unwrap()
    }

    fn rank(points: &[Vec<C64>]) -> usize {
        rank_with_tol(&DenseMatrix::from_columns(points).unwrap(), 1e-8).unwrap()
    }

    fn on_curve(d: usize, x: &[C64]) -> bool {
        // Rank-one Hankel test: consecutive normalized coordinates are in
        // geometric progression.
        let c: Vec<C64> = (0..=d)
            .map(|j| x[j] / binomial(d as u64, j as u64).unwrap() as f64)
            .collect();
        (0..d.saturating_sub(1)).all(|j| (c[j] * c[j + 2] - c[j + 1] * c[j + 1]).norm() < 1e-10)
    }

    #[test]
    fn quadric_line_section() {
        let x = quadric(3);
        for seed in 0..5 {
            let p = random_point(3, seed).unwrap();
            let dec = mindeg_decompose(&x, &p, seed).unwrap();
            assert_eq!(dec.len(), 2);
            assert!(dec.residual < 1e-12);
            for pt in &dec.points {
                assert!(x.quadric_value(pt).unwrap().norm() < 1e-10);
            }
            let mut with_p = dec.points.clone();
            with_p.push(p.coords().to_vec());
            assert_eq!(rank(&with_p), 2);
        }
    }

    #[test]
    fn twisted_cubic_plane_section() {
        let x = rnc(3);
        let p = random_point(3, 7).unwrap();
        let dec = mindeg_decompose(&x, &p, 7).unwrap();
        assert_eq!(dec.len(), 3);
        assert!(dec.residual < 1e-10);
        for pt in &dec.points {
            assert!(on_curve(3, pt));
        }
        let mut with_p = dec.points.clone();
        with_p.push(p.coords().to_vec());
        assert_eq!(rank(&with_p), 3);
    }

    #[test]
    fn vieta_for_cubic_section() {
        // Points (s_i : 1) of a hyperplane section a . v(s, 1) = 0 satisfy
        // s1 + s2 + s3 = -c2/c3 and s1 s2 s3 = -c0/c3 with c = pullback(a).
        let p = random_point(3, 3).unwrap();
        let mut rng = substream(3, 1);
        let q1 = complex_vector(&mut rng, 4);
        let q2 = complex_vector(&mut rng, 4);
        let m = DenseMatrix::from_rows(&[p.coords().to_vec(), q1, q2]).unwrap();
        let a = crate::linalg::nullspace(&m, 1e-10).unwrap().column(0);
        let dec = rnc_slice(3, p.coords(), std::slice::from_ref(&a), 0).unwrap();
        let s: Vec<C64> = dec.points.iter().map(|x| x[0] / x[1] * 3.0).collect();
        let c = pullback(3, &a);
        assert!((s[0] + s[1] + s[2] + c[2] / c[3]).norm() < 1e-8);
        assert!((s[0] * s[1] * s[2] + c[0] / c[3]).norm() < 1e-8);
    }

    #[test]
    fn odd_curves_need_all_intersection_points() {
        for d in [3usize, 5, 7, 9] {
            let x = rnc(d);
            let p = random_point(d, d as u64).unwrap();
            let dec = mindeg_decompose(&x, &p, 1).unwrap();
            assert_eq!(dec.len(), d);
            assert!(dec.residual < SPAN_TOL);
        }
    }

    #[test]
    fn slicing_matches_catalecticant_decomposition() {
        for h in [2usize, 3] {
            let d = 2 * h - 1;
            for seed in 0..3 {
                let p = random_point(d, 40 + seed).unwrap();
                let f = HomogeneousPoly::new(2, d, p.coords().to_vec()).unwrap();
                let binary = decompose_binary(&f, &BinaryOptions::default()).unwrap();
                let g = crate::waring::apolar_kernel(&f, 1e-8).unwrap();
                // a_i . v(s, t) = g(s, t) s^(h-1-i) t^i.
                let equations: Vec<Vec<C64>> = (0..h)
                    .map(|i| {
                        (0..=d)
                            .map(|j| {
                                if j >= i && j - i <= h {
                                    g[j - i] / binomial(d as u64, j as u64).unwrap() as f64
                                } else {
                                    C64::new(0.0, 0.0)
                                }
                            })
                            .collect()
                    })
                    .collect();
                let sliced = rnc_slice(d, p.coords(), &equations, seed).unwrap();
                assert_eq!(sliced.len(), h);
                // Points of the curve are the powers l^d with l = s x0 + t x1.
                let terms = sliced
                    .points
                    .iter()
                    .zip(&sliced.weights)
                    .map(|(x, w)| {
                        let (s, t) = if x[0].norm() > 1e-12 {
                            (C64::new(1.0, 0.0), x[1] / x[0] / d as f64)
                        } else {
                            (C64::new(0.0, 0.0), C64::new(1.0, 0.0))
                        };
                        let scale = x[0].norm() > 1e-12;
                        let weight = if scale { w * x[0] } else { w * x[d] };
                        Term {
                            weight,
                            form: LinearForm::new(vec![s, t]).unwrap(),
                        }
                    })
                    .collect();
                let from_slice = WaringDecomposition::new(2, d, terms).unwrap();
                assert!(from_slice.match_distance(&binary) < 1e-8, "h={h} seed={seed}");
            }
        }
    }

    #[test]
    fn extended_quadric_points_span_plane() {
        let x = quadric(3);
        let p = random_point(3, 11).unwrap();
        let dec = mindeg_decompose_extended(&x, &p, 3, 5).unwrap();
        assert_eq!(dec.len(), 3);
        assert!(dec.residual < SPAN_TOL);
        let mut with_p = dec.points.clone();
        assert_eq!(rank(&with_p), 3);
        with_p.push(p.coords().to_vec());
        assert_eq!(rank(&with_p), 3);
        for pt in &dec.points {
            assert!(x.quadric_value(pt).unwrap().norm() < 1e-8);
        }
    }

    #[test]
    fn extended_twisted_cubic_fiber() {
        let x = rnc(3);
        let p = random_point(3, 12).unwrap();
        let dec = mindeg_decompose_extended(&x, &p, 4, 6).unwrap();
        assert_eq!(dec.len(), 4);
        assert!(dec.residual < SPAN_TOL);
        // Each of the 4 points can play the drawn point: the other three
        // always lie on a plane through p - w_j x_j.
        for j in 0..4 {
            let residual: Vec<C64> = dec.target.iter().zip(&dec.points[j]).map(|(a, b)| a - dec.weights[j] * b).collect();
            let mut rest: Vec<Vec<C64>> = (0..4).filter(|&i| i != j).map(|i| dec.points[i].clone()).collect();
            rest.push(residual);
            assert_eq!(rank(&rest), 3);
        }
    }

    #[test]
    fn extended_with_deg_points_is_plain_slice() {
        let x = rnc(3);
        let p = random_point(3, 13).unwrap();
        assert_eq!(mindeg_decompose_extended(&x, &p, 3, 2).unwrap(), mindeg_decompose(&x, &p, 2).unwrap());
        assert!(mindeg_decompose_extended(&x, &p, 2, 2).is_err());
    }

    #[test]
    fn unsupported_varieties() {
        let v = ParamVariety::new(VarietyKind::Veronese { n: 2, d: 2 }).unwrap();
        let p = random_point(5, 1).unwrap();
        assert!(matches!(mindeg_decompose(&v, &p, 0), Err(Error::Unsupported(_))));
        let wrong = random_point(4, 1).unwrap();
        assert!(mindeg_decompose(&rnc(3), &wrong, 0).is_err());
    }
}
