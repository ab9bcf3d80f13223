//! Shared numeric plumbing: primes, divisor sums, dyadic rounding of big
//! rationals, log-space conversion of huge rationals, and stable summation.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Primes up to `n` inclusive, by sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if is_prime[p] {
            let mut q = p * p;
            while q <= n {
                is_prime[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| is_prime[i]).map(|i| i as u64).collect()
}

/// Prime powers p^m <= x (m >= 1), as (p, m, p^m), ordered by p^m.
pub fn prime_powers_up_to(x: f64) -> Vec<(u64, u32, u64)> {
    let bound = x.floor() as u64;
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        let mut pm = p;
        let mut m = 1u32;
        while pm as f64 <= x {
            out.push((p, m, pm));
            match pm.checked_mul(p) {
                Some(next) => pm = next,
                None => break,
            }
            m += 1;
        }
    }
    out.sort_by_key(|&(_, _, pm)| pm);
    out
}

/// sigma_j(n) = sum of d^j over divisors d of n, exact.
pub fn sigma_big(n: u64, j: u32) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(j);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(j);
            }
        }
        d += 1;
    }
    acc
}

/// Number of divisors of n.
pub fn divisor_count(mut n: u64) -> u64 {
    let mut count = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            count *= e + 1;
        }
        p += 1;
    }
    if n > 1 {
        count *= 2;
    }
    count
}

/// Factor n into (prime, exponent) pairs by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// ln |x| for a nonzero big rational, computed from bit lengths so it never
/// overflows. Returns -inf for zero.
pub fn ln_abs_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(x.numer()) - ln_abs_bigint(x.denom())
}

/// ln |x| for a nonzero big integer.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    let mag = x.magnitude();
    if mag.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = mag.bits();
    if bits <= 52 {
        return (mag.to_u64().unwrap() as f64).ln();
    }
    // Top 64 bits as mantissa, rest as exponent.
    let shift = bits - 53;
    let top: BigUint = mag >> shift;
    (top.to_u64().unwrap() as f64).ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Convert a big rational to f64 through the log decomposition, signed.
/// Saturates to +-inf rather than panicking on overflow.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let ln = ln_abs_rational(x);
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln.exp()
}

/// sign * exp(ln|x| + shift) for big rational x: lets callers divide by huge
/// scale factors (shift = -w ln n) without ever materializing them.
pub fn rational_to_f64_shifted(x: &BigRational, shift: f64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * (ln_abs_rational(x) + shift).exp()
}

/// Round x to the dyadic grid 2^-frac_bits (round half away from zero).
pub fn round_dyadic(x: &BigRational, frac_bits: u64) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let scale = BigInt::one() << frac_bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    let (num, den) = (scaled.numer().clone(), scaled.denom().clone());
    let two_num = num.clone() * 2 + den.clone() * num.signum();
    let q = two_num / (den * 2);
    BigRational::new(q, scale)
}

/// Round x keeping about `bits` significant bits (relative rounding).
pub fn round_significant(x: &BigRational, bits: u64) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let mag_bits = x.numer().magnitude().bits() as i64 - x.denom().magnitude().bits() as i64;
    let frac = bits as i64 - mag_bits;
    if frac <= 0 {
        // Large numbers: round to 2^{-frac} grid, i.e. clear low bits.
        let shift = (-frac) as u64;
        let grid = BigRational::from_integer(BigInt::one() << shift);
        let q = round_dyadic(&(x / &grid), 0);
        q * grid
    } else {
        round_dyadic(x, frac as u64)
    }
}

/// Floor square root of a nonnegative big integer (Newton).
pub fn isqrt_big(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let bits = n.bits();
    let mut x: BigUint = BigUint::one() << bits.div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// sqrt(n) for a big integer n >= 0, as a rational accurate to `bits`
/// fractional bits: isqrt(n * 4^bits) / 2^bits.
pub fn sqrt_big_to_bits(n: &BigUint, bits: u64) -> BigRational {
    let scaled = n << (2 * bits);
    let root = isqrt_big(&scaled);
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, root),
        BigInt::one() << bits,
    )
}

/// log-sum-exp over a slice of lns; tolerates -inf entries.
pub fn log_sum_exp(lns: &[f64]) -> f64 {
    let m = lns.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = lns.iter().map(|&l| (l - m).exp()).sum();
    m + s.ln()
}

/// Compensated (Kahan) summation.
#[derive(Default, Clone, Copy)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// ln Gamma(k) for integer k >= 1, as the exact sum of logs. Cheap at the
/// sizes we use (k <= a few thousand) and accurate to f64 rounding.
pub fn ln_gamma_int(k: u64) -> f64 {
    let mut acc = Kahan::default();
    for i in 2..k {
        acc.add((i as f64).ln());
    }
    acc.value()
}

/// Exact factorial.
pub fn factorial_big(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}
