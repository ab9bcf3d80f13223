//! Cusp form spaces S_k for SL_2(Z) and their echelonized (Victor Miller)
//! bases, built from monomials Delta^a E4^b E6^c.

use crate::error::{Error, Result};
use crate::qseries::{delta_z, eisenstein_z, QSeries, SeriesZ};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// dim S_k for SL_2(Z). Zero below weight 12 and at k = 14.
pub fn dim_cusp(k: u32) -> Result<usize> {
    if k % 2 != 0 {
        return Err(Error::OddWeight(k as i64));
    }
    if k < 12 {
        return Ok(0);
    }
    let m = (k / 12) as usize;
    Ok(if k % 12 == 2 { m - 1 } else { m })
}

/// Weight-k cusp space with its echelonized basis: miller[i] has a_j =
/// delta_{i+1,j} for 1 <= j <= dim, and a_0 = 0 throughout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CuspSpace {
    pub k: u32,
    pub dim: usize,
    pub miller: Vec<QSeries>,
}

impl CuspSpace {
    pub fn trunc(&self) -> usize {
        self.miller.first().map(|m| m.trunc()).unwrap_or(0)
    }

    /// Integer coefficient a_{m_i}(n); the Miller basis is integral.
    pub fn coeff(&self, i: usize, n: usize) -> &BigInt {
        debug_assert!(self.miller[i].coeff(n).denom().is_one());
        self.miller[i].coeff(n).numer()
    }

    /// Reconstruct a weight-k series in the span from its first dim
    /// coefficients: f = sum_i a_f(i+1) m_i, exactly, by the echelon property.
    pub fn reconstruct(&self, f: &QSeries) -> Result<QSeries> {
        if f.weight() != self.k {
            return Err(Error::MixedWeights(f.weight(), self.k));
        }
        let terms: Vec<_> = (0..self.dim)
            .map(|i| (f.coeff(i + 1).clone(), &self.miller[i]))
            .collect();
        crate::qseries::series_linear(&terms)
    }
}

/// Exponents (a, b, c) of the one-monomial-per-pivot family Delta^a E4^b E6^c
/// of weight k: for a = 1..dim the remaining even weight e = k - 12a is
/// written as 4b + 6c with c in {0, 1}. e = 2 never occurs for a <= dim.
fn pivot_monomial_exponents(k: u32, dim: usize) -> Vec<(u32, u32, u32)> {
    (1..=dim as u32)
        .map(|a| {
            let e = k - 12 * a;
            if e % 4 == 0 {
                (a, e / 4, 0)
            } else {
                debug_assert!(e % 4 == 2 && e >= 6);
                (a, (e - 6) / 4, 1)
            }
        })
        .collect()
}

/// All cuspidal monomials Delta^a E4^b E6^c of weight k (a >= 1), used by the
/// rank diagnostics; the pivot family is a subset.
pub(crate) fn all_cuspidal_exponents(k: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    let mut a = 1;
    while 12 * a <= k {
        let e = k - 12 * a;
        let mut c = 0;
        while 6 * c <= e {
            let rest = e - 6 * c;
            if rest % 4 == 0 {
                out.push((a, rest / 4, c));
            }
            c += 1;
        }
        a += 1;
    }
    out
}

fn monomial(a: u32, b: u32, c: u32, trunc: usize) -> Result<SeriesZ> {
    let mut acc = SeriesZ::one(trunc);
    let d = delta_z(trunc)?;
    for _ in 0..a {
        acc = acc.mul(&d);
    }
    if b > 0 {
        let e4 = eisenstein_z(4, trunc)?;
        for _ in 0..b {
            acc = acc.mul(&e4);
        }
    }
    if c > 0 {
        let e6 = eisenstein_z(6, trunc)?;
        for _ in 0..c {
            acc = acc.mul(&e6);
        }
    }
    Ok(acc)
}

/// Victor Miller basis of S_k to truncation N.
///
/// The pivot family Delta^a E4^b E6^c (one monomial per a = 1..dim) is lower
/// triangular with unit pivots at q^a, so reduction to echelon form is integer
/// back-substitution with no divisions.
pub fn miller_basis(k: u32, trunc: usize) -> Result<CuspSpace> {
    if k % 2 != 0 {
        return Err(Error::OddWeight(k as i64));
    }
    if k < 12 {
        return Err(Error::WeightBelowTwelve(k));
    }
    let dim = dim_cusp(k)?;
    if trunc < dim + 1 {
        return Err(Error::TruncationTooSmall {
            given: trunc,
            required: dim + 1,
        });
    }
    let mut rows: Vec<SeriesZ> = Vec::with_capacity(dim);
    // Share power chains across the family: Delta^a ascending, E4^b descending
    // from the a = 1 monomial (so each power is one multiplication away).
    let d1 = delta_z(trunc)?;
    let e4 = eisenstein_z(4, trunc)?;
    let e6 = eisenstein_z(6, trunc)?;
    let exps = pivot_monomial_exponents(k, dim);
    let b_max = exps.iter().map(|&(_, b, _)| b).max().unwrap_or(0) as usize;
    let mut e4_powers: Vec<SeriesZ> = Vec::with_capacity(b_max + 1);
    e4_powers.push(SeriesZ::one(trunc));
    for _ in 0..b_max {
        let next = e4_powers.last().unwrap().mul(&e4);
        e4_powers.push(next);
    }
    let mut delta_pow = SeriesZ::one(trunc);
    for &(a, b, c) in &exps {
        debug_assert_eq!(a as usize, rows.len() + 1);
        delta_pow = delta_pow.mul(&d1);
        let mut m = delta_pow.mul(&e4_powers[b as usize]);
        if c == 1 {
            m = m.mul(&e6);
        }
        rows.push(m);
    }
    // Back-substitution: clear column j of row i using the unit pivot of row j.
    for i in (0..dim).rev() {
        for j in (i + 1)..dim {
            let factor = rows[i].coeffs[j + 1].clone();
            if factor.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(j);
            let (target, pivot_row) = (&mut head[i], &tail[0]);
            for n in 0..=trunc {
                if !pivot_row.coeffs[n].is_zero() {
                    let sub = &factor * &pivot_row.coeffs[n];
                    target.coeffs[n] -= sub;
                }
            }
        }
    }
    let miller: Vec<QSeries> = rows.iter().map(|r| r.to_qseries()).collect();
    for (i, m) in miller.iter().enumerate() {
        debug_assert!(m.coeff(0).is_zero());
        for j in 1..=dim {
            debug_assert_eq!(
                m.coeff(j).numer(),
                &if j == i + 1 { BigInt::one() } else { BigInt::zero() }
            );
        }
    }
    Ok(CuspSpace { k, dim, miller })
}

/// Rank of the full cuspidal monomial family over Q, by exact Gaussian
/// elimination on the coefficient columns q^1..q^bound. Independent of the
/// pivot-family construction; used to validate dim_cusp.
pub fn monomial_family_rank(k: u32) -> Result<usize> {
    let exps = all_cuspidal_exponents(k);
    if exps.is_empty() {
        return Ok(0);
    }
    let bound = exps.len() + 2;
    let mut mat: Vec<Vec<num_rational::BigRational>> = exps
        .iter()
        .map(|&(a, b, c)| {
            let m = monomial(a, b, c, bound).expect("trunc >= 1");
            (1..=bound)
                .map(|n| num_rational::BigRational::from_integer(m.coeffs[n].clone()))
                .collect()
        })
        .collect();
    let (nrows, ncols) = (mat.len(), bound);
    let mut rank = 0;
    for col in 0..ncols {
        // Pick the shortest nonzero pivot to limit growth.
        let pivot = (rank..nrows)
            .filter(|&r| !mat[r][col].is_zero())
            .min_by_key(|&r| mat[r][col].numer().magnitude().bits());
        let Some(p) = pivot else { continue };
        mat.swap(rank, p);
        for r in 0..nrows {
            if r != rank && !mat[r][col].is_zero() {
                let factor = &mat[r][col] / &mat[rank][col];
                for c2 in col..ncols {
                    let sub = &factor * &mat[rank][c2];
                    mat[r][c2] -= sub;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{delta, eisenstein, series_mul};
    use num_rational::BigRational;

    #[test]
    fn dimension_formula_matches_rank_oracle() {
        for k in (12..=72).step_by(2) {
            let formula = dim_cusp(k).unwrap();
            let rank = monomial_family_rank(k).unwrap();
            assert_eq!(formula, rank, "dim S_{k}");
        }
        assert_eq!(dim_cusp(10).unwrap(), 0);
        assert_eq!(dim_cusp(0).unwrap(), 0);
        assert_eq!(dim_cusp(12).unwrap(), 1);
        assert_eq!(dim_cusp(14).unwrap(), 0);
        assert_eq!(dim_cusp(24).unwrap(), 2);
        assert!(dim_cusp(13).is_err());
    }

    #[test]
    fn weight_twelve_basis_is_delta() {
        let s = miller_basis(12, 8).unwrap();
        assert_eq!(s.dim, 1);
        let d = delta(8).unwrap();
        assert_eq!(s.miller[0], d);
    }

    #[test]
    fn weight_24_echelon_property() {
        let s = miller_basis(24, 10).unwrap();
        assert_eq!(s.dim, 2);
        assert_eq!(s.miller[0].coeff(1), &BigRational::from_integer(1.into()));
        assert!(s.miller[0].coeff(2).is_zero());
        assert!(s.miller[1].coeff(1).is_zero());
        assert_eq!(s.miller[1].coeff(2), &BigRational::from_integer(1.into()));
    }

    #[test]
    fn weight_26_single_pivot() {
        let s = miller_basis(26, 6).unwrap();
        assert_eq!(s.dim, 1);
        assert_eq!(s.miller[0].coeff(1), &BigRational::from_integer(1.into()));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(miller_basis(13, 10), Err(Error::OddWeight(13))));
        assert!(matches!(miller_basis(10, 10), Err(Error::WeightBelowTwelve(10))));
        assert!(matches!(
            miller_basis(24, 2),
            Err(Error::TruncationTooSmall { given: 2, required: 3 })
        ));
    }

    #[test]
    fn echelon_invariant_medium_weights() {
        for k in [36u32, 48, 50, 62, 74] {
            let s = miller_basis(k, dim_cusp(k).unwrap() + 5).unwrap();
            for (i, m) in s.miller.iter().enumerate() {
                assert!(m.coeff(0).is_zero());
                assert!(m.is_integral(), "Miller basis should be integral at k={k}");
                for j in 1..=s.dim {
                    let expect = if j == i + 1 { 1 } else { 0 };
                    assert_eq!(m.coeff(j), &BigRational::from_integer(expect.into()));
                }
            }
        }
    }

    #[test]
    fn span_round_trip_from_leading_coefficients() {
        // Delta^2 * E4 lies in S_28; reconstruct it from its first dim coeffs.
        let trunc = 12;
        let f = series_mul(
            &series_mul(&delta(trunc).unwrap(), &delta(trunc).unwrap()),
            &eisenstein(4, trunc).unwrap(),
        );
        let s = miller_basis(28, trunc).unwrap();
        let rebuilt = s.reconstruct(&f).unwrap();
        assert_eq!(rebuilt, f.truncated(rebuilt.trunc()));
    }
}
