//! Exact truncated q-expansions over arbitrary-precision rationals, and the
//! classical generators E4, E6, Delta.
//!
//! A `QSeries` stores a_0..a_N of a weight-k form. Arithmetic is exact and
//! never extends truncation: results carry the minimum of the operand
//! truncations. The constant series 1 has weight 0 so monomials in E4, E6,
//! Delta combine uniformly.

use crate::error::{Error, Result};
use crate::num_util::sigma_big;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Truncated q-expansion with exact rational coefficients and a weight tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    weight: u32,
    coeffs: Vec<BigRational>,
}

impl QSeries {
    /// Build from raw coefficients a_0..a_N.
    pub fn from_coeffs(weight: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if weight % 2 != 0 {
            return Err(Error::OddWeight(weight as i64));
        }
        if coeffs.is_empty() {
            return Err(Error::TruncationTooSmall { given: 0, required: 1 });
        }
        Ok(QSeries { weight, coeffs })
    }

    /// The constant series 1 (weight 0), so E4^a E6^b Delta^c monomials
    /// type-check uniformly.
    pub fn one(trunc: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); trunc + 1];
        coeffs[0] = BigRational::one();
        QSeries { weight: 0, coeffs }
    }

    pub fn zero(weight: u32, trunc: usize) -> Self {
        QSeries {
            weight,
            coeffs: vec![BigRational::zero(); trunc + 1],
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Truncation order N: coefficients a_0..a_N are stored.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// a_0 = 0 check, where cuspidality is claimed.
    pub fn is_cuspidal(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Drop coefficients beyond N.
    pub fn truncated(&self, n: usize) -> Self {
        let end = n.min(self.trunc());
        QSeries {
            weight: self.weight,
            coeffs: self.coeffs[..=end].to_vec(),
        }
    }

    /// True if every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }
}

/// Normalized Eisenstein series E_k, k in {4, 6}: a_0 = 1 and
/// a_n = c_k sigma_{k-1}(n) with c_4 = 240, c_6 = -504.
pub fn eisenstein(k: u32, trunc: usize) -> Result<QSeries> {
    Ok(eisenstein_z(k, trunc)?.to_qseries())
}

/// Delta = (E4^3 - E6^2) / 1728, weight 12, a_0 = 0, a_1 = 1.
pub fn delta(trunc: usize) -> Result<QSeries> {
    Ok(delta_z(trunc)?.to_qseries())
}

pub(crate) fn eisenstein_z(k: u32, trunc: usize) -> Result<SeriesZ> {
    let c: BigInt = match k {
        4 => BigInt::from(240),
        6 => BigInt::from(-504),
        other => return Err(Error::UnsupportedEisensteinWeight(other)),
    };
    if trunc < 1 {
        return Err(Error::TruncationTooSmall { given: trunc, required: 1 });
    }
    let mut coeffs = Vec::with_capacity(trunc + 1);
    coeffs.push(BigInt::one());
    for n in 1..=trunc {
        coeffs.push(&c * sigma_big(n as u64, k - 1));
    }
    Ok(SeriesZ { weight: k, coeffs })
}

pub(crate) fn delta_z(trunc: usize) -> Result<SeriesZ> {
    if trunc < 1 {
        return Err(Error::TruncationTooSmall { given: trunc, required: 1 });
    }
    let e4 = eisenstein_z(4, trunc)?;
    let e6 = eisenstein_z(6, trunc)?;
    let e4_cubed = e4.mul(&e4).mul(&e4);
    let e6_sq = e6.mul(&e6);
    let scale = BigInt::from(1728);
    let coeffs = e4_cubed
        .coeffs
        .iter()
        .zip(&e6_sq.coeffs)
        .map(|(a, b)| {
            let diff = a - b;
            debug_assert!((&diff % &scale).is_zero());
            diff / &scale
        })
        .collect();
    Ok(SeriesZ { weight: 12, coeffs })
}

/// Cauchy product; weights add, truncation is the minimum of the operands.
pub fn series_mul(a: &QSeries, b: &QSeries) -> QSeries {
    let trunc = a.trunc().min(b.trunc());
    let coeffs: Vec<BigRational> = (0..=trunc)
        .into_par_iter()
        .map(|n| {
            let mut acc = BigRational::zero();
            for i in 0..=n {
                let (ca, cb) = (&a.coeffs[i], &b.coeffs[n - i]);
                if !ca.is_zero() && !cb.is_zero() {
                    acc += ca * cb;
                }
            }
            acc
        })
        .collect();
    QSeries {
        weight: a.weight + b.weight,
        coeffs,
    }
}

/// Coefficientwise rational linear combination; all weights must agree.
pub fn series_linear(terms: &[(BigRational, &QSeries)]) -> Result<QSeries> {
    let (_, first) = terms
        .first()
        .ok_or(Error::TruncationTooSmall { given: 0, required: 1 })?;
    let weight = first.weight;
    let mut trunc = first.trunc();
    for (_, s) in terms {
        if s.weight != weight {
            return Err(Error::MixedWeights(weight, s.weight));
        }
        trunc = trunc.min(s.trunc());
    }
    let mut coeffs = vec![BigRational::zero(); trunc + 1];
    for (scalar, s) in terms {
        if scalar.is_zero() {
            continue;
        }
        for (n, c) in coeffs.iter_mut().enumerate() {
            let v = &s.coeffs[n];
            if !v.is_zero() {
                *c += scalar * v;
            }
        }
    }
    Ok(QSeries { weight, coeffs })
}

/// a^e by repeated squaring (e = 0 gives the constant series 1).
pub fn series_pow(a: &QSeries, e: u32) -> QSeries {
    if e == 0 {
        return QSeries::one(a.trunc());
    }
    let mut result: Option<QSeries> = None;
    let mut base = a.clone();
    let mut e = e;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => series_mul(&r, &base),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = series_mul(&base, &base);
    }
    result.unwrap()
}

/// JSON wire format: {"weight", "trunc", "coeffs": ["p/q", ...]}, bit-exact.
#[derive(Serialize, Deserialize)]
struct QSeriesWire {
    weight: u32,
    trunc: usize,
    coeffs: Vec<String>,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = QSeriesWire {
            weight: self.weight,
            trunc: self.trunc(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| format!("{}/{}", c.numer(), c.denom()))
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let wire = QSeriesWire::deserialize(d)?;
        if wire.coeffs.len() != wire.trunc + 1 {
            return Err(D::Error::custom(format!(
                "coefficient count {} does not match trunc {}",
                wire.coeffs.len(),
                wire.trunc
            )));
        }
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| BigRational::from_str(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        QSeries::from_coeffs(wire.weight, coeffs).map_err(D::Error::custom)
    }
}

/// Integer-coefficient series used on the hot construction paths (monomials
/// in E4, E6, Delta are integral). Same semantics as QSeries, no rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SeriesZ {
    pub weight: u32,
    pub coeffs: Vec<BigInt>,
}

impl SeriesZ {
    pub fn from_qseries(q: &QSeries) -> Option<Self> {
        if !q.is_integral() {
            return None;
        }
        Some(SeriesZ {
            weight: q.weight,
            coeffs: q.coeffs.iter().map(|c| c.numer().clone()).collect(),
        })
    }

    pub fn to_qseries(&self) -> QSeries {
        QSeries {
            weight: self.weight,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    pub fn one(trunc: usize) -> SeriesZ {
        let mut coeffs = vec![BigInt::zero(); trunc + 1];
        coeffs[0] = BigInt::one();
        SeriesZ { weight: 0, coeffs }
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, other: &SeriesZ) -> SeriesZ {
        let trunc = self.trunc().min(other.trunc());
        // Skip leading zero blocks (cusp forms start at q^1, Delta^a at q^a).
        let lead_a = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(trunc + 1);
        let lead_b = other.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(trunc + 1);
        let coeffs: Vec<BigInt> = (0..=trunc)
            .into_par_iter()
            .map(|n| {
                let mut acc = BigInt::zero();
                if lead_a + lead_b > n {
                    return acc;
                }
                for i in lead_a..=(n - lead_b) {
                    let (ca, cb) = (&self.coeffs[i], &other.coeffs[n - i]);
                    if !ca.is_zero() && !cb.is_zero() {
                        acc += ca * cb;
                    }
                }
                acc
            })
            .collect();
        SeriesZ {
            weight: self.weight + other.weight,
            coeffs,
        }
    }
}

/// Ramanujan tau via Delta; sanity anchor used in a few tests.
pub fn tau(n: usize) -> Result<BigInt> {
    let d = delta(n.max(1))?;
    let c = d.coeff(n);
    debug_assert!(c.denom().is_one());
    Ok(c.numer().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    /// Independent oracle for Delta: q prod (1-q^n)^24 expanded by repeated
    /// multiplication with the sparse factors (1-q^n)^1, 24 times each --
    /// no Eisenstein series involved.
    fn delta_by_euler_product(trunc: usize) -> Vec<BigInt> {
        let mut f = vec![BigInt::zero(); trunc + 1];
        f[0] = BigInt::one();
        for n in 1..=trunc {
            for _ in 0..24 {
                // multiply by (1 - q^n)
                for i in (n..=trunc).rev() {
                    let lower = f[i - n].clone();
                    f[i] -= lower;
                }
            }
        }
        // shift by q^1
        let mut out = vec![BigInt::zero(); trunc + 1];
        for i in 1..=trunc {
            out[i] = f[i - 1].clone();
        }
        out
    }

    #[test]
    fn eisenstein_first_coefficients() {
        let e4 = eisenstein(4, 2).unwrap();
        assert_eq!(e4.coeff(0), &rat(1));
        assert_eq!(e4.coeff(1), &rat(240));
        let e6 = eisenstein(6, 2).unwrap();
        assert_eq!(e6.coeff(1), &rat(-504));
        assert!(matches!(eisenstein(8, 2), Err(Error::UnsupportedEisensteinWeight(8))));
    }

    #[test]
    fn delta_matches_euler_product_oracle() {
        let trunc = 30;
        let d = delta(trunc).unwrap();
        let oracle = delta_by_euler_product(trunc);
        for n in 0..=trunc {
            assert_eq!(d.coeff(n).numer(), &oracle[n], "tau({n})");
            assert!(d.coeff(n).denom().is_one());
        }
        assert_eq!(d.coeff(0), &rat(0));
        assert_eq!(d.coeff(1), &rat(1));
        assert_eq!(d.coeff(2), &rat(-24));
        assert_eq!(d.coeff(3), &rat(252));
    }

    #[test]
    fn tau_multiplicativity_desk_scale() {
        let d = delta(10).unwrap();
        assert_eq!(d.coeff(6), &(d.coeff(2) * d.coeff(3)));
        assert_eq!(d.coeff(10), &(d.coeff(2) * d.coeff(5)));
    }

    #[test]
    fn product_weight_and_hand_value() {
        let d = delta(3).unwrap();
        let dd = series_mul(&d, &d);
        assert_eq!(dd.weight(), 24);
        // (q - 24q^2 + ...)^2: coefficient of q^3 is 2*1*(-24) = -48.
        assert_eq!(dd.coeff(3), &rat(-48));
        let e4 = eisenstein(4, 2).unwrap();
        let e6 = eisenstein(6, 2).unwrap();
        assert_eq!(series_mul(&e4, &e6).weight(), 10);
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let d = delta(8).unwrap();
        let one = QSeries::one(8);
        assert_eq!(series_mul(&d, &one), d);
    }

    #[test]
    fn linear_combination_cancellation_and_scaling() {
        let d = delta(5).unwrap();
        let z = series_linear(&[(rat(1), &d), (rat(-1), &d)]).unwrap();
        assert!(z.is_zero());
        let twice = series_linear(&[(rat(2), &d)]).unwrap();
        assert_eq!(twice.coeff(2), &rat(-48));
        let e4 = eisenstein(4, 5).unwrap();
        assert!(matches!(
            series_linear(&[(rat(1), &d), (rat(1), &e4)]),
            Err(Error::MixedWeights(12, 4))
        ));
    }

    #[test]
    fn truncation_is_min_of_operands() {
        let a = delta(10).unwrap();
        let b = delta(4).unwrap();
        assert_eq!(series_mul(&a, &b).trunc(), 4);
        let lin = series_linear(&[(rat(1), &a), (rat(1), &b)]).unwrap();
        assert_eq!(lin.trunc(), 4);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut d = delta(6).unwrap();
        // introduce a genuine fraction to exercise p/q parsing
        d.coeffs[3] = BigRational::new(BigInt::from(-7), BigInt::from(3));
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.contains("\"-7/3\""));
        let back: QSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn series_pow_matches_repeated_mul() {
        let d = delta(8).unwrap();
        let cube = series_mul(&series_mul(&d, &d), &d);
        assert_eq!(series_pow(&d, 3), cube);
        assert_eq!(series_pow(&d, 1), d);
        assert_eq!(series_pow(&d, 0), QSeries::one(8));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn mul_commutative_associative(
            a_c in proptest::collection::vec(-20i64..20, 5),
            b_c in proptest::collection::vec(-20i64..20, 5),
            c_c in proptest::collection::vec(-20i64..20, 5),
        ) {
            let mk = |v: &[i64], w: u32| QSeries::from_coeffs(
                w, v.iter().map(|&x| rat(x)).collect()).unwrap();
            let (a, b, c) = (mk(&a_c, 4), mk(&b_c, 6), mk(&c_c, 12));
            prop_assert_eq!(series_mul(&a, &b), series_mul(&b, &a));
            prop_assert_eq!(
                series_mul(&series_mul(&a, &b), &c),
                series_mul(&a, &series_mul(&b, &c))
            );
            prop_assert_eq!(series_mul(&a, &b).weight(), 10);
        }
    }
}
