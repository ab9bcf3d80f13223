//! Hecke operators on S_k, eigenform extraction, normalized eigenvalues and
//! Satake parameters.
//!
//! The eigen pipeline never trusts a floating eigensolver: T_2 is an exact
//! integer matrix in the Miller basis, its characteristic polynomial is
//! computed exactly, the real roots are isolated with certified sign changes,
//! and eigenvectors are solved fraction-free (Bareiss) after substituting the
//! isolated eigenvalue. The residual (T_2 - lambda I) v is then an exact
//! rational and is checked against 2^{-precision/2}.

use crate::charpoly::{charpoly_exact, isolate_real_roots};
use crate::error::{Error, Result};
use crate::num_util::{
    ln_abs_rational, rational_to_f64_shifted, round_significant, sqrt_big_to_bits,
};
use crate::space::CuspSpace;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::sync::{Arc, OnceLock};

/// Exact matrix of T_n in the Miller basis (integer entries).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub k: u32,
    pub n: u64,
    pub dim: usize,
    entries: Vec<BigInt>,
}

impl HeckeMatrix {
    pub fn entry_int(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        BigRational::from_integer(self.entry_int(i, j).clone())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.entry_int(i, i).clone()).sum()
    }

    /// Exact product; the operator index multiplies only for coprime inputs,
    /// which is the caller's claim to make.
    pub fn mul(&self, other: &HeckeMatrix) -> HeckeMatrix {
        assert_eq!(self.dim, other.dim);
        let dim = self.dim;
        let entries: Vec<BigInt> = (0..dim * dim)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / dim, idx % dim);
                let mut acc = BigInt::zero();
                for l in 0..dim {
                    acc += self.entry_int(i, l) * other.entry_int(l, j);
                }
                acc
            })
            .collect();
        HeckeMatrix {
            k: self.k,
            n: self.n * other.n,
            dim,
            entries,
        }
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry_int(i, j).clone()).collect())
            .collect()
    }
}

/// Matrix of T_n on S_k in the Miller basis, via
/// a_{T_n f}(m) = sum_{d | gcd(m,n)} d^{k-1} a_f(m n / d^2).
pub fn hecke_matrix(space: &CuspSpace, n: u64) -> Result<HeckeMatrix> {
    let dim = space.dim;
    let required = (n as usize) * dim;
    if space.trunc() < required {
        return Err(Error::TruncationTooSmall {
            given: space.trunc(),
            required,
        });
    }
    let k = space.k;
    let mut entries = vec![BigInt::zero(); dim * dim];
    for j in 0..dim {
        for m in 1..=dim as u64 {
            let mut acc = BigInt::zero();
            let g = num_integer::gcd(m, n);
            let mut d = 1u64;
            while d <= g {
                if g % d == 0 {
                    let idx = (m * n / (d * d)) as usize;
                    let term = BigInt::from(d).pow(k - 1) * space.coeff(j, idx);
                    acc += term;
                }
                d += 1;
            }
            entries[(m as usize - 1) * dim + j] = acc;
        }
    }
    Ok(HeckeMatrix { k, n, dim, entries })
}

/// A Hecke eigenform with exact-integer-derived eigenvalue data.
///
/// `a[n]` are dyadic-rational approximations of the true algebraic
/// coefficients, accurate to `prec_bits` relative; `lambda[n]` =
/// a(n)/n^{(k-1)/2} in f64. The caches for L(1, sym^2) and the Petersson
/// norm are filled once by the analytic layer.
#[derive(Debug)]
pub struct Eigenform {
    pub k: u32,
    pub index: usize,
    pub prec_bits: u64,
    a: Vec<BigRational>,
    lambda: Vec<f64>,
    /// log2 of the exact residual bound ||(T_2 - lambda I) v|| / ||v||.
    pub residual_log2: f64,
    pub charpoly: Arc<Vec<BigInt>>,
    pub(crate) l_sym2_cache: OnceLock<(f64, u64, f64)>,
    pub(crate) norm_cache: OnceLock<(f64, &'static str, f64)>,
}

impl Eigenform {
    pub fn trunc(&self) -> usize {
        self.a.len() - 1
    }

    /// Coefficient a(n) as a high-precision rational; a(1) = 1 exactly.
    pub fn a(&self, n: usize) -> &BigRational {
        &self.a[n]
    }

    /// Normalized eigenvalue lambda(n) = a(n) / n^{(k-1)/2}.
    pub fn lambda(&self, n: usize) -> f64 {
        self.lambda[n]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    /// lambda(n) to `bits` fractional bits, as an exact rational quotient of
    /// the stored a(n) by an integer square root of n^{k-1}.
    pub fn lambda_hp(&self, n: usize, bits: u64) -> BigRational {
        let scale = sqrt_big_to_bits(&num_bigint::BigUint::from(n as u64).pow(self.k - 1), bits + 64);
        round_significant(&(self.a(n) / scale), bits)
    }

    /// Satake parameters (alpha_p, beta_p) from lambda(p).
    pub fn satake(&self, p: u64) -> Result<(Complex64, Complex64)> {
        let pu = p as usize;
        if pu > self.trunc() {
            return Err(Error::SatakeOutOfRange { p, trunc: self.trunc() });
        }
        Ok(satake(self.lambda(pu)))
    }

    /// lambda(n) for any n whose prime factors are all <= trunc, by
    /// multiplicativity and the prime-power recurrence.
    pub fn lambda_multiplicative(&self, n: u64) -> Result<f64> {
        if n as usize <= self.trunc() {
            return Ok(self.lambda(n as usize));
        }
        let mut acc = 1.0;
        for (p, e) in crate::num_util::factorize(n) {
            if p as usize > self.trunc() {
                return Err(Error::SatakeOutOfRange { p, trunc: self.trunc() });
            }
            acc *= lambda_prime_power(self.lambda(p as usize), e);
        }
        Ok(acc)
    }

    /// Largest |lambda(p)| - 2 over primes p <= p_max (positive means a
    /// numerical Deligne violation).
    pub fn deligne_excess(&self, p_max: u64) -> f64 {
        crate::num_util::primes_up_to(p_max.min(self.trunc() as u64))
            .iter()
            .map(|&p| self.lambda(p as usize).abs() - 2.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Memoization wire-level view of a(n) used by the JSON cache.
impl Eigenform {
    pub(crate) fn raw_parts(
        k: u32,
        index: usize,
        prec_bits: u64,
        a: Vec<BigRational>,
        residual_log2: f64,
        charpoly: Arc<Vec<BigInt>>,
    ) -> Self {
        let w = (k as f64 - 1.0) / 2.0;
        let lambda = a
            .iter()
            .enumerate()
            .map(|(n, an)| {
                if n == 0 {
                    0.0
                } else {
                    rational_to_f64_shifted(an, -w * (n as f64).ln())
                }
            })
            .collect();
        Eigenform {
            k,
            index,
            prec_bits,
            a,
            lambda,
            residual_log2,
            charpoly,
            l_sym2_cache: OnceLock::new(),
            norm_cache: OnceLock::new(),
        }
    }
}

/// Satake parameters from a normalized eigenvalue: alpha + beta = lambda,
/// alpha beta = 1, alpha chosen with nonnegative imaginary part and, for real
/// pairs, alpha >= beta.
pub fn satake(lambda: f64) -> (Complex64, Complex64) {
    if lambda.abs() <= 2.0 {
        let im = (4.0 - lambda * lambda).max(0.0).sqrt() / 2.0;
        let alpha = Complex64::new(lambda / 2.0, im);
        let beta = Complex64::new(lambda / 2.0, -im);
        (alpha, beta)
    } else {
        let root = (lambda * lambda - 4.0).sqrt();
        let alpha = Complex64::new((lambda + root) / 2.0, 0.0);
        let beta = Complex64::new((lambda - root) / 2.0, 0.0);
        (alpha, beta)
    }
}

/// lambda(p^l) from lambda(p) by the Hecke recurrence
/// lambda(p^{l+1}) = lambda(p) lambda(p^l) - lambda(p^{l-1}).
pub fn lambda_prime_power(lambda_p: f64, l: u32) -> f64 {
    let (mut prev, mut cur) = (1.0f64, lambda_p);
    if l == 0 {
        return 1.0;
    }
    for _ in 1..l {
        let next = lambda_p * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact-rational version of the prime-power recurrence.
pub fn lambda_prime_power_exact(lambda_p: &BigRational, l: u32) -> BigRational {
    let (mut prev, mut cur) = (BigRational::one(), lambda_p.clone());
    if l == 0 {
        return BigRational::one();
    }
    for _ in 1..l {
        let next = lambda_p * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// alpha^n + beta^n as a real number, by the Chebyshev-style recurrence
/// u_0 = 2, u_1 = lambda, u_{n+1} = lambda u_n - u_{n-1}.
pub fn satake_power_sum(lambda: f64, n: u32) -> f64 {
    match n {
        0 => 2.0,
        _ => {
            let (mut prev, mut cur) = (2.0f64, lambda);
            for _ in 1..n {
                let next = lambda * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

// ---------------------------------------------------------------------------
// Eigenform extraction
// ---------------------------------------------------------------------------

/// Fraction-free (Bareiss) solve of an integer square system; returns exact
/// rationals or None when the matrix is singular.
fn bareiss_solve(mut a: Vec<Vec<BigInt>>, mut b: Vec<BigInt>) -> Option<Vec<BigRational>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut prev = BigInt::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].magnitude().bits())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let (head, tail) = a.split_at_mut(col + 1);
        let pivot_row = &head[col];
        let pivot_val = pivot_row[col].clone();
        let b_piv = b[col].clone();
        tail.par_iter_mut()
            .zip(b[col + 1..].par_iter_mut())
            .for_each(|(row, brow)| {
                let f = row[col].clone();
                for j in (col + 1)..n {
                    let num = &pivot_val * &row[j] - &f * &pivot_row[j];
                    row[j] = num / &prev;
                }
                let num = &pivot_val * &*brow - &f * &b_piv;
                *brow = num / &prev;
                row[col] = BigInt::zero();
            });
        prev = pivot_val;
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(b[i].clone());
        for j in (i + 1)..n {
            acc -= BigRational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(a[i][i].clone());
    }
    Some(x)
}

/// Split a dyadic rational lambda = P / 2^s into (P, s).
fn dyadic_parts(x: &BigRational) -> (BigInt, u64) {
    let den = x.denom();
    let s = den.magnitude().trailing_zeros().unwrap_or(0);
    debug_assert!(den.magnitude().bits() == s + 1, "expected dyadic rational");
    (x.numer().clone(), s)
}

struct EigenSolve {
    v: Vec<BigRational>,
    residual_log2: f64,
    residual_ok: bool,
}

/// Solve for the eigenvector of `t2` at the isolated eigenvalue
/// lambda = p2 / 2^s, normalized so v_1 = 1, and bound the exact residual.
fn eigenvector_at(
    t2: &[Vec<BigInt>],
    lambda: &BigRational,
    prec_bits: u64,
) -> Option<EigenSolve> {
    let dim = t2.len();
    let (p2, s) = dyadic_parts(lambda);
    // B = 2^s T - P I, integer matrix.
    let scale = BigInt::one() << s;
    let b_mat: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let mut e = &t2[i][j] * &scale;
                    if i == j {
                        e -= &p2;
                    }
                    e
                })
                .collect()
        })
        .collect();
    let mut v: Option<Vec<BigRational>> = None;
    if dim == 1 {
        v = Some(vec![BigRational::one()]);
    } else {
        for drop in (0..dim).rev() {
            let rows: Vec<usize> = (0..dim).filter(|&r| r != drop).collect();
            let a: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|&r| b_mat[r][1..].to_vec())
                .collect();
            let rhs: Vec<BigInt> = rows.iter().map(|&r| -&b_mat[r][0]).collect();
            if let Some(u) = bareiss_solve(a, rhs) {
                let mut full = Vec::with_capacity(dim);
                full.push(BigRational::one());
                full.extend(u.into_iter().map(|x| round_significant(&x, prec_bits + 32)));
                v = Some(full);
                break;
            }
        }
    }
    let v = v?;
    // Exact residual of the full system.
    let mut res_max = BigRational::zero();
    let mut v_max = BigRational::zero();
    for i in 0..dim {
        let mut acc = BigRational::zero();
        for j in 0..dim {
            if !t2[i][j].is_zero() {
                acc += BigRational::from_integer(t2[i][j].clone()) * &v[j];
            }
        }
        acc -= lambda * &v[i];
        let a = acc.abs();
        if a > res_max {
            res_max = a;
        }
        let va = v[i].abs();
        if va > v_max {
            v_max = va;
        }
    }
    let ratio_log2 = if res_max.is_zero() {
        f64::NEG_INFINITY
    } else {
        (ln_abs_rational(&res_max) - ln_abs_rational(&v_max)) / std::f64::consts::LN_2
    };
    // Exact comparison against 2^{-prec/2}.
    let threshold = BigRational::new(BigInt::one(), BigInt::one() << (prec_bits / 2));
    let ok = res_max <= threshold * v_max;
    Some(EigenSolve {
        v,
        residual_log2: ratio_log2,
        residual_ok: ok,
    })
}

/// Default working precision: 64 + 2k bits at weight k.
pub fn default_precision_bits(k: u32) -> u64 {
    64 + 2 * k as u64
}

/// Compute the Hecke eigenbasis H_k from a Miller basis, splitting the space
/// with T_2 alone. A repeated T_2 eigenvalue is a hard error (no secondary
/// splitting operator is attempted). Eigenforms are sorted by descending a(2).
pub fn eigenforms(space: &CuspSpace, prec_bits: u64) -> Result<Vec<Eigenform>> {
    let dim = space.dim;
    if dim == 0 {
        return Err(Error::EmptySpace(space.k));
    }
    let k = space.k;
    let t2 = hecke_matrix(space, 2)?;
    let rows = t2.rows();
    let eig_bound_log2 = (k as f64 - 1.0) / 2.0 + 2.0; // |a(2)| <= 2 * 2^{(k-1)/2}
    let charpoly = Arc::new(charpoly_exact(&rows, eig_bound_log2).map_err(|e| match e {
        Error::RootIsolation(_, msg) => Error::RootIsolation(k, msg),
        other => other,
    })?);

    let scale_log2 = (k as f64 - 1.0) / 2.0;
    let mut extra_bits = 0u64;
    for attempt in 0..4 {
        let roots = isolate_real_roots(&charpoly, scale_log2, prec_bits + extra_bits)
            .map_err(|e| match e {
                Error::RootIsolation(_, msg) => {
                    if msg.contains("simple real roots") {
                        Error::DegenerateEigenvalue(k)
                    } else {
                        Error::RootIsolation(k, msg)
                    }
                }
                other => other,
            })?;
        if roots.len() != dim {
            return Err(Error::DegenerateEigenvalue(k));
        }
        let solves: Vec<Option<EigenSolve>> = roots
            .par_iter()
            .map(|r| eigenvector_at(&rows, &r.value, prec_bits))
            .collect();
        if solves.iter().any(|s| s.is_none()) {
            let idx = solves.iter().position(|s| s.is_none()).unwrap();
            return Err(Error::SingularEigenvectorSystem { k, index: idx });
        }
        let solves: Vec<EigenSolve> = solves.into_iter().map(Option::unwrap).collect();
        if solves.iter().all(|s| s.residual_ok) || attempt == 3 {
            if !solves.iter().all(|s| s.residual_ok) {
                return Err(Error::RootIsolation(
                    k,
                    "eigenvector residual did not reach 2^{-prec/2}".into(),
                ));
            }
            // Descending a(2): roots come back ascending.
            let mut order: Vec<usize> = (0..dim).collect();
            order.sort_by(|&i, &j| roots[j].value.cmp(&roots[i].value));
            let trunc = space.trunc();
            let forms: Vec<Eigenform> = order
                .par_iter()
                .enumerate()
                .map(|(index, &ri)| {
                    let v = &solves[ri].v;
                    let mut a = Vec::with_capacity(trunc + 1);
                    a.push(BigRational::zero());
                    for n in 1..=trunc {
                        let mut acc = BigRational::zero();
                        for (i, vi) in v.iter().enumerate() {
                            let c = space.coeff(i, n);
                            if !c.is_zero() {
                                acc += vi * BigRational::from_integer(c.clone());
                            }
                        }
                        a.push(round_significant(&acc, prec_bits));
                    }
                    Eigenform::raw_parts(
                        k,
                        index,
                        prec_bits,
                        a,
                        solves[ri].residual_log2,
                        Arc::clone(&charpoly),
                    )
                })
                .collect();
            return Ok(forms);
        }
        extra_bits += 256;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::miller_basis;
    use num_traits::FromPrimitive;

    fn space(k: u32, trunc: usize) -> CuspSpace {
        miller_basis(k, trunc).unwrap()
    }

    #[test]
    fn t2_on_weight_twelve_is_tau_two() {
        let s = space(12, 4);
        let t2 = hecke_matrix(&s, 2).unwrap();
        assert_eq!(t2.dim, 1);
        assert_eq!(t2.entry_int(0, 0), &BigInt::from(-24));
    }

    #[test]
    fn rejects_insufficient_truncation() {
        let s = space(24, 5);
        let err = hecke_matrix(&s, 3).unwrap_err();
        assert!(matches!(err, Error::TruncationTooSmall { required: 6, .. }));
    }

    #[test]
    fn commutativity_and_coprime_multiplicativity() {
        for k in [24u32, 36, 48] {
            let dim = crate::space::dim_cusp(k).unwrap();
            let s = space(k, 6 * dim + 2);
            let t2 = hecke_matrix(&s, 2).unwrap();
            let t3 = hecke_matrix(&s, 3).unwrap();
            let t6 = hecke_matrix(&s, 6).unwrap();
            assert_eq!(t2.mul(&t3), t3.mul(&t2), "T_2 T_3 = T_3 T_2 at k={k}");
            let mut prod = t2.mul(&t3);
            prod.n = 6;
            assert_eq!(prod, t6, "T_6 = T_2 T_3 at k={k}");
        }
    }

    #[test]
    fn weight_twelve_eigenform() {
        let s = space(12, 40);
        let forms = eigenforms(&s, default_precision_bits(12)).unwrap();
        assert_eq!(forms.len(), 1);
        let f = &forms[0];
        assert_eq!(f.a(1), &BigRational::one());
        assert_eq!(f.a(2), &BigRational::from_i64(-24).unwrap());
        // lambda(2) = -24 / 2^{11/2}
        assert!((f.lambda(2) - (-0.5303300858899107)).abs() < 1e-12);
        // tau multiplicativity carried through the eigenform data
        assert!((f.lambda(6) - f.lambda(2) * f.lambda(3)).abs() < 1e-12);
        assert_eq!(f.residual_log2, f64::NEG_INFINITY); // integer eigenvalue: exact
    }

    #[test]
    fn weight_24_splits_with_exact_trace() {
        let s = space(24, 60);
        let forms = eigenforms(&s, default_precision_bits(24)).unwrap();
        assert_eq!(forms.len(), 2);
        // a(2) values descending, real, distinct; they sum to trace(T_2).
        let t2 = hecke_matrix(&s, 2).unwrap();
        let sum = forms[0].a(2) + forms[1].a(2);
        let trace = BigRational::from_integer(t2.trace());
        let err = (sum - trace).abs();
        assert!(err < BigRational::new(BigInt::one(), BigInt::one() << 80));
        assert!(forms[0].a(2) > forms[1].a(2));
        // Known split: a(2) = 540 +- 12 sqrt(144169)
        let expect = 540.0 + 12.0 * (144169.0f64).sqrt();
        let got = crate::num_util::rational_to_f64(forms[0].a(2));
        assert!((got - expect).abs() < 1e-6);
    }

    #[test]
    fn eigenvalue_residuals_meet_precision_target() {
        for k in [24u32, 36, 48, 60] {
            let s = space(k, 4 * crate::space::dim_cusp(k).unwrap() + 30);
            let prec = default_precision_bits(k);
            let forms = eigenforms(&s, prec).unwrap();
            for f in forms {
                assert!(
                    f.residual_log2 <= -((prec / 2) as f64),
                    "residual 2^{:.1} at k={k}",
                    f.residual_log2
                );
            }
        }
    }

    #[test]
    fn normalized_multiplicativity_and_recurrence() {
        let s = space(36, 80);
        let forms = eigenforms(&s, default_precision_bits(36)).unwrap();
        for f in &forms {
            assert!((f.lambda(6) - f.lambda(2) * f.lambda(3)).abs() < 1e-11);
            assert!((f.lambda(12) - (f.lambda(3) * f.lambda(4))).abs() < 1e-11);
            // lambda(p) lambda(p^2) = lambda(p^3) + lambda(p)
            let l2 = f.lambda(2);
            assert!((l2 * f.lambda(4) - (f.lambda(8) + l2)).abs() < 1e-11);
        }
    }

    #[test]
    fn high_precision_lambda_multiplicativity() {
        // lambda(6) = lambda(2) lambda(3) to 10^{-(prec/4)} decimal digits.
        let k = 12u32;
        let prec = default_precision_bits(k); // 88 bits
        let s = space(k, 20);
        let f = &eigenforms(&s, prec).unwrap()[0];
        let bits = prec + 16;
        let l2 = f.lambda_hp(2, bits);
        let l3 = f.lambda_hp(3, bits);
        let l6 = f.lambda_hp(6, bits);
        let err = (l6 - l2 * l3).abs();
        // 10^{-prec/4} = 10^{-22}
        let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(22));
        assert!(err < tol, "err ~ 2^{:.1}", ln_abs_rational(&err) / std::f64::consts::LN_2);
    }

    #[test]
    fn deligne_bound_small_weights() {
        for k in [12u32, 16, 18, 20, 22, 26, 24, 36] {
            let s = space(k, 60);
            for f in eigenforms(&s, default_precision_bits(k)).unwrap() {
                assert!(f.deligne_excess(53) <= 1e-6, "Deligne at k={k}");
            }
        }
    }

    #[test]
    fn satake_special_values() {
        let (a, b) = satake(2.0);
        assert_eq!((a, b), (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)));
        let (a, b) = satake(0.0);
        assert_eq!(a, Complex64::new(0.0, 1.0));
        assert_eq!(b, Complex64::new(0.0, -1.0));
        let (a, b) = satake(-0.5303300859);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert!((b - a.conj()).norm() < 1e-12);
        assert!(a.im >= 0.0);
        // real branch: alpha >= beta and alpha beta = 1
        let (a, b) = satake(-2.5);
        assert_eq!(a.im, 0.0);
        assert!(a.re >= b.re);
        assert!((a.re * b.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prime_power_recurrence_values() {
        for l in 0..8 {
            assert!((lambda_prime_power(2.0, l) - (l as f64 + 1.0)).abs() < 1e-12);
        }
        let lam = 1.37;
        assert!((lambda_prime_power(lam, 2) - (lam * lam - 1.0)).abs() < 1e-12);
        assert!((lambda_prime_power(0.0, 4) - 1.0).abs() < 1e-15);
        // exact version agrees
        let lr = BigRational::new(BigInt::from(137), BigInt::from(100));
        let exact = lambda_prime_power_exact(&lr, 2);
        assert_eq!(exact, &lr * &lr - BigRational::one());
    }

    #[test]
    fn satake_power_sums_match_satake_parameters() {
        let lam = -1.234;
        let (a, b) = satake(lam);
        for n in 0..6 {
            let direct = (a.powu(n) + b.powu(n)).re;
            assert!((satake_power_sum(lam, n) - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn empty_space_is_an_error() {
        let err = eigenforms(&space_as_empty(), 64).unwrap_err();
        assert!(matches!(err, Error::EmptySpace(14)));
    }

    fn space_as_empty() -> CuspSpace {
        CuspSpace {
            k: 14,
            dim: 0,
            miller: Vec::new(),
        }
    }
}
