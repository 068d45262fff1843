use super::ParamVariety;
use crate::error::{Error, Result};
use crate::linalg::{rank_with_tol, DenseMatrix, DEFAULT_RANK_TOL};
use crate::rng::substream;

const PASSES: u64 = 2;

fn unit_columns(m: &DenseMatrix) -> Result<DenseMatrix> {
    let columns: Vec<_> = (0..m.cols())
        .map(|j| {
            let c = m.column(j);
            let n = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if n > 0.0 {
                c.iter().map(|x| x / n).collect()
            } else {
                c
            }
        })
        .collect();
    DenseMatrix::from_columns(&columns)
}

/// Dimension of `sec_h(X)` by Terracini's lemma: the rank of `h` tangent
/// spaces at random points, minus one.
///
/// Two independent draws are made from `seed` and the larger rank is kept.
pub fn terracini_secant_dim(x: &ParamVariety, h: usize, seed: u64) -> Result<u64> {
    if h == 0 {
        return Err(Error::InvalidInput("h must be at least 1".into()));
    }
    let big_n = x.ambient_n()?;
    let mut best = 0u64;
    for pass in 0..PASSES {
        let mut rng = substream(seed, pass);
        let blocks = (0..h)
            .map(|_| {
                let p = x.random_params(&mut rng);
                if x.embed_affine(&p)?.iter().all(|c| c.norm() == 0.0) {
                    return Err(Error::DegenerateDraw { attempts: 1 });
                }
                x.tangent_jacobian(&p)
            })
            .collect::<Result<Vec<_>>>()?;
        let stacked = unit_columns(&DenseMatrix::hstack(&blocks)?)?;
        let rank = rank_with_tol(&stacked, DEFAULT_RANK_TOL)? as u64;
        best = best.max(rank.saturating_sub(1));
    }
    Ok(best.min(big_n))
}

/// `min(h n + h - 1, N)`.
pub fn expected_secant_dim(n: u64, big_n: u64, h: u64) -> u64 {
    (h * n + h).saturating_sub(1).min(big_n)
}

pub fn is_defective(x: &ParamVariety, h: usize, seed: u64) -> Result<bool> {
    let expected = expected_secant_dim(x.dim() as u64, x.ambient_n()?, h as u64);
    Ok(terracini_secant_dim(x, h, seed)? < expected)
}

/// Expected dimension `h(n+1) - N - 1` of `VSP(p, h)` for a general point `p`.
pub fn vsp_dim(n: u64, big_n: u64, h: u64) -> Result<i64> {
    let value = (h as i128) * (n as i128 + 1) - big_n as i128 - 1;
    let value = i64::try_from(value).map_err(|_| Error::Overflow("vsp_dim"))?;
    if value < 0 {
        return Err(Error::EmptyFiber { value });
    }
    Ok(value)
}
