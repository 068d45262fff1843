//! Sylvester's pentahedral decomposition of a general cubic in four variables.
//!
//! For `F = sum_i lambda_i L_i^3` the polar quadric `P_xi F = sum_j xi_j dF/dx_j`
//! has Gram matrix proportional to `sum_i lambda_i L_i(xi) l_i l_i^T`. It drops
//! to rank 2 exactly where three of the `L_i(xi)` vanish: the ten vertices of
//! the pentahedron. The five planes through six of those vertices each are
//! `L_i(xi) = 0`, so their coefficient vectors are the forms `L_i`.

use super::fit_weights;
use crate::error::{Error, Result};
use crate::linalg::{
    lex_cmp, nullspace, polysys_solve, rank_with_tol, DenseMatrix, PolySysOptions, ProjectivePoint,
};
use crate::poly::{HomogeneousPoly, LinearForm, WaringDecomposition};
use itertools::Itertools;
use num_complex::Complex64 as C64;

const VERTICES: usize = 10;
const PLANES: usize = 5;

#[derive(Debug, Clone)]
pub struct PentahedralOptions {
    pub solver: PolySysOptions,
    /// Rank cutoff for the polar quadric at the vertices.
    pub quadric_rank_tol: f64,
    /// Rank cutoff for the coplanarity and collinearity tests.
    pub coplanar_tol: f64,
    pub residual_tol: f64,
}

impl Default for PentahedralOptions {
    fn default() -> Self {
        Self {
            solver: PolySysOptions::default(),
            quadric_rank_tol: 1e-6,
            coplanar_tol: 1e-7,
            residual_tol: 1e-8,
        }
    }
}

/// The ten rank-2 points, five planes and their incidences.
#[derive(Debug, Clone, PartialEq)]
pub struct PentahedralWitness {
    pub rank2_points: Vec<ProjectivePoint>,
    /// Plane coefficient vectors in the `xi` coordinates.
    pub planes: Vec<LinearForm>,
    /// `incidence[plane][point]`.
    pub incidence: Vec<Vec<bool>>,
    /// Collinear triples among the points of each plane.
    pub collinear_triples: Vec<usize>,
}

impl PentahedralWitness {
    pub fn plane_point_counts(&self) -> Vec<usize> {
        self.incidence.iter().map(|row| row.iter().filter(|&&b| b).count()).collect()
    }

    pub fn point_plane_counts(&self) -> Vec<usize> {
        (0..self.rank2_points.len())
            .map(|j| self.incidence.iter().filter(|row| row[j]).count())
            .collect()
    }
}

fn check_cubic_surface(f: &HomogeneousPoly) -> Result<()> {
    if f.num_vars() != 4 || f.degree() != 3 {
        return Err(Error::InvalidInput(format!(
            "pentahedral algorithm needs a cubic in 4 variables, got degree {} in {}",
            f.degree(),
            f.num_vars()
        )));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(())
}

/// Symmetric matrix of linear forms `Q(xi)_{ab} = sum_j xi_j d^3F / dx_j dx_a dx_b`.
fn polar_quadric_matrix(f: &HomogeneousPoly) -> Result<Vec<Vec<HomogeneousPoly>>> {
    let n = f.num_vars();
    let mut entries = vec![vec![HomogeneousPoly::zero(n, 1); n]; n];
    for a in 0..n {
        for b in a..n {
            let mut coeffs = Vec::with_capacity(n);
            for j in 0..n {
                let mut alpha = vec![0u32; n];
                alpha[a] += 1;
                alpha[b] += 1;
                alpha[j] += 1;
                coeffs.push(f.apply_partials(&alpha)?.coeffs()[0]);
            }
            let entry = HomogeneousPoly::new(n, 1, coeffs)?;
            entries[a][b] = entry.clone();
            entries[b][a] = entry;
        }
    }
    Ok(entries)
}

fn det3(m: [[&HomogeneousPoly; 3]; 3]) -> Result<HomogeneousPoly> {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| -> Result<HomogeneousPoly> {
        m[r1][c1].mul(m[r2][c2])?.sub(&m[r1][c2].mul(m[r2][c1])?)
    };
    let mut out = m[0][0].mul(&minor(1, 2, 1, 2)?)?;
    out = out.sub(&m[0][1].mul(&minor(1, 2, 0, 2)?)?)?;
    out.add(&m[0][2].mul(&minor(1, 2, 0, 1)?)?)
}

/// The 3x3 minors of the polar quadric matrix (one per unordered pair of
/// row/column triples), cubics in `xi` cutting out the rank-2 locus.
pub fn hessian_minors(f: &HomogeneousPoly) -> Result<Vec<HomogeneousPoly>> {
    check_cubic_surface(f)?;
    let q = polar_quadric_matrix(f)?;
    let triples: Vec<Vec<usize>> = (0..4).combinations(3).collect();
    let mut out = Vec::new();
    for (i, rows) in triples.iter().enumerate() {
        for cols in &triples[i..] {
            let pick = |r: usize, c: usize| &q[rows[r]][cols[c]];
            out.push(det3([
                [pick(0, 0), pick(0, 1), pick(0, 2)],
                [pick(1, 0), pick(1, 1), pick(1, 2)],
                [pick(2, 0), pick(2, 1), pick(2, 2)],
            ])?);
        }
    }
    Ok(out)
}

fn quadric_at(f_matrix: &[Vec<HomogeneousPoly>], xi: &[C64]) -> DenseMatrix {
    let n = xi.len();
    let mut m = DenseMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            m[(a, b)] = f_matrix[a][b].evaluate(xi);
        }
    }
    m
}

/// Points `xi` where the polar quadric `P_xi F` has rank 2.
pub fn rank2_locus(f: &HomogeneousPoly, seed: u64, opts: &PentahedralOptions) -> Result<Vec<ProjectivePoint>> {
    let minors = hessian_minors(f)?;
    let points = polysys_solve(&minors, VERTICES, seed, &opts.solver).map_err(|e| match e {
        Error::CountMismatch { found, .. } => {
            Error::NonGenericCubic(format!("rank-2 locus has {found} points instead of {VERTICES}"))
        }
        Error::NotZeroDimensional { .. } => Error::NonGenericCubic("rank-2 locus is not finite".into()),
        other => other,
    })?;
    let q = polar_quadric_matrix(f)?;
    for p in &points {
        let rank = rank_with_tol(&quadric_at(&q, p.coords()), opts.quadric_rank_tol)?;
        if rank != 2 {
            return Err(Error::NonGenericCubic(format!("polar quadric has rank {rank} at a solution")));
        }
    }
    Ok(points)
}

fn coordinate_matrix(points: &[&ProjectivePoint]) -> Result<DenseMatrix> {
    DenseMatrix::from_rows(&points.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>())
}

/// Groups ten points of `P^3` into the five planes that contain six each.
///
/// Every one of the `C(10, 6) = 210` sextuples is tested for rank 3; the
/// survivors define the planes. Fails unless exactly five survive with six
/// points per plane, three planes per point and four collinear triples on
/// every plane.
pub fn group_coplanar(points: &[ProjectivePoint], tol: f64) -> Result<PentahedralWitness> {
    if points.len() != VERTICES || points.iter().any(|p| p.coords().len() != 4) {
        return Err(Error::InvalidInput("group_coplanar needs ten points of P^3".into()));
    }
    let mut planes: Vec<(LinearForm, Vec<usize>)> = Vec::new();
    for six in (0..VERTICES).combinations(6) {
        let chosen: Vec<&ProjectivePoint> = six.iter().map(|&i| &points[i]).collect();
        let m = coordinate_matrix(&chosen)?;
        if rank_with_tol(&m, tol)? != 3 {
            continue;
        }
        let ker = nullspace(&m, tol)?;
        let (plane, _) = LinearForm::new(ker.column(0))?.normalized();
        planes.push((plane, six));
    }
    if planes.len() != PLANES {
        return Err(Error::NoPentahedron { found: planes.len() });
    }
    planes.sort_by(|a, b| lex_cmp(a.0.coeffs(), b.0.coeffs()));

    let incidence: Vec<Vec<bool>> = planes
        .iter()
        .map(|(_, six)| (0..VERTICES).map(|j| six.contains(&j)).collect())
        .collect();
    let mut collinear_triples = Vec::with_capacity(PLANES);
    for (_, six) in &planes {
        let mut count = 0;
        for triple in six.iter().combinations(3) {
            let chosen: Vec<&ProjectivePoint> = triple.iter().map(|&&i| &points[i]).collect();
            if rank_with_tol(&coordinate_matrix(&chosen)?, tol)? == 2 {
                count += 1;
            }
        }
        collinear_triples.push(count);
    }
    let witness = PentahedralWitness {
        rank2_points: points.to_vec(),
        planes: planes.into_iter().map(|(p, _)| p).collect(),
        incidence,
        collinear_triples,
    };
    let incidences_ok = witness.plane_point_counts().iter().all(|&c| c == 6)
        && witness.point_plane_counts().iter().all(|&c| c == 3)
        && witness.collinear_triples.iter().all(|&c| c == 4);
    if !incidences_ok {
        return Err(Error::NoPentahedron { found: PLANES });
    }
    Ok(witness)
}

/// Five-term decomposition of a general cubic in four variables.
pub fn decompose_pentahedral(
    f: &HomogeneousPoly,
    seed: u64,
    opts: &PentahedralOptions,
) -> Result<(WaringDecomposition, PentahedralWitness)> {
    let points = rank2_locus(f, seed, opts)?;
    let witness = group_coplanar(&points, opts.coplanar_tol)?;
    let (dec, res) = fit_weights(f, &witness.planes)?;
    if res > opts.residual_tol {
        return Err(Error::Inaccurate {
            residual: res,
            tol: opts.residual_tol,
        });
    }
    Ok((dec, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{power_of_linear, recompose};
    use crate::rng::{complex_vector, random_invertible, seeded};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn fermat_plus_forms() -> Vec<Vec<f64>> {
        vec![
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 1.0],
        ]
    }

    fn fermat_plus() -> HomogeneousPoly {
        let mut f = HomogeneousPoly::zero(4, 3);
        for l in fermat_plus_forms() {
            f = f.add(&power_of_linear(&LinearForm::from_real(&l).unwrap(), 3)).unwrap();
        }
        f
    }

    /// Triple intersections of the five known planes, by direct kernel
    /// computation on each 3x4 system.
    fn vertex_oracle() -> Vec<ProjectivePoint> {
        let forms = fermat_plus_forms();
        (0..5)
            .combinations(3)
            .map(|triple| {
                let rows: Vec<Vec<C64>> = triple.iter().map(|&i| forms[i].iter().map(|&x| c(x)).collect()).collect();
                let ker = nullspace(&DenseMatrix::from_rows(&rows).unwrap(), 1e-10).unwrap();
                ProjectivePoint::new(&ker.column(0)).unwrap()
            })
            .collect()
    }

    #[test]
    fn oracle_vertices_are_coordinate_and_difference_points() {
        let verts = vertex_oracle();
        let mut coordinate = 0;
        let mut differences = 0;
        for v in &verts {
            let nz: Vec<&C64> = v.coords().iter().filter(|x| x.norm() > 1e-12).collect();
            match nz.len() {
                1 => coordinate += 1,
                2 => {
                    assert!((nz[0] + nz[1]).norm() < 1e-12);
                    differences += 1;
                }
                _ => panic!("unexpected vertex {v:?}"),
            }
        }
        assert_eq!((coordinate, differences), (4, 6));
    }

    #[test]
    fn fermat_plus_rank2_locus_matches_oracle() {
        let points = rank2_locus(&fermat_plus(), 5, &PentahedralOptions::default()).unwrap();
        assert_eq!(points.len(), 10);
        for v in vertex_oracle() {
            assert!(points.iter().any(|p| p.approx_eq(&v, 1e-8)), "missing {v:?}");
        }
    }

    #[test]
    fn fermat_plus_planes_and_incidences() {
        let witness = group_coplanar(&vertex_oracle(), 1e-8).unwrap();
        assert_eq!(witness.plane_point_counts(), vec![6; 5]);
        assert_eq!(witness.point_plane_counts(), vec![3; 10]);
        assert_eq!(witness.collinear_triples, vec![4; 5]);
        for l in fermat_plus_forms() {
            let target = LinearForm::from_real(&l).unwrap();
            assert!(witness.planes.iter().any(|p| p.distance(&target) < 1e-10));
        }
    }

    #[test]
    fn fermat_plus_decomposition() {
        let (dec, _) = decompose_pentahedral(&fermat_plus(), 1, &PentahedralOptions::default()).unwrap();
        let truth = WaringDecomposition::from_parts(
            4,
            3,
            fermat_plus_forms().into_iter().map(|l| (c(1.0), l.into_iter().map(c).collect())).collect(),
        )
        .unwrap();
        assert!(dec.match_distance(&truth) < 1e-8, "{}", dec.match_distance(&truth));
    }

    #[test]
    fn random_points_have_no_pentahedron() {
        let mut rng = seeded(12);
        let pts: Vec<ProjectivePoint> = (0..10)
            .map(|_| ProjectivePoint::new(&complex_vector(&mut rng, 4)).unwrap())
            .collect();
        assert_eq!(group_coplanar(&pts, 1e-8), Err(Error::NoPentahedron { found: 0 }));
    }

    #[test]
    fn cone_is_not_generic() {
        let f = HomogeneousPoly::from_terms(
            4,
            3,
            &[(vec![3, 0, 0, 0], c(1.0)), (vec![0, 3, 0, 0], c(1.0)), (vec![0, 0, 3, 0], c(1.0))],
        )
        .unwrap();
        assert!(matches!(
            rank2_locus(&f, 0, &PentahedralOptions::default()),
            Err(Error::NonGenericCubic(_))
        ));
    }

    #[test]
    fn cone_system_count_mismatch() {
        let f = HomogeneousPoly::from_terms(
            4,
            3,
            &[(vec![3, 0, 0, 0], c(1.0)), (vec![0, 3, 0, 0], c(1.0)), (vec![0, 0, 3, 0], c(1.0))],
        )
        .unwrap();
        let minors = hessian_minors(&f).unwrap();
        assert!(matches!(
            polysys_solve(&minors, 10, 0, &PolySysOptions::default()),
            Err(Error::CountMismatch { expected: 10, .. })
        ));
    }

    #[test]
    fn random_synthesis_recovered_and_seed_independent() {
        let mut rng = seeded(2024);
        for _ in 0..3 {
            let truth = WaringDecomposition::random(4, 3, 5, false, &mut rng).unwrap();
            let f = recompose(&truth);
            let opts = PentahedralOptions::default();
            let (a, _) = decompose_pentahedral(&f, 3, &opts).unwrap();
            let (b, _) = decompose_pentahedral(&f, 4, &opts).unwrap();
            assert!(a.match_distance(&truth) < 1e-6);
            assert!(a.match_distance(&b) < 1e-8);
        }
    }

    #[test]
    fn scaling_equivariance() {
        let truth = WaringDecomposition::random(4, 3, 5, false, &mut seeded(31)).unwrap();
        let f = recompose(&truth);
        let s = C64::new(0.2, 1.3);
        let opts = PentahedralOptions::default();
        let (a, _) = decompose_pentahedral(&f, 0, &opts).unwrap();
        let (b, _) = decompose_pentahedral(&f.scale(s), 0, &opts).unwrap();
        assert!(a.scaled(s).match_distance(&b) < 1e-8);
    }

    #[test]
    fn coordinate_equivariance() {
        let mut rng = seeded(32);
        for _ in 0..3 {
            let truth = WaringDecomposition::random(4, 3, 5, false, &mut rng).unwrap();
            let a = random_invertible(4, &mut rng);
            let g = recompose(&truth).linear_substitution(&a).unwrap();
            let (dec, _) = decompose_pentahedral(&g, 1, &PentahedralOptions::default()).unwrap();
            // L(A x) has coefficient vector A^T l.
            let at = a.transpose();
            let moved = WaringDecomposition::from_parts(
                4,
                3,
                truth.terms().iter().map(|t| (t.weight, at.mul_vec(t.form.coeffs()))).collect(),
            )
            .unwrap();
            assert!(dec.match_distance(&moved) < 1e-6, "{}", dec.match_distance(&moved));
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        let f = HomogeneousPoly::zero(3, 3);
        assert!(matches!(rank2_locus(&f, 0, &PentahedralOptions::default()), Err(Error::InvalidInput(_))));
    }
}
