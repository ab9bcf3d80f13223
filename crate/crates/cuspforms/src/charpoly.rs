//! Exact characteristic polynomials of big-integer matrices and certified
//! real-root isolation.
//!
//! The characteristic polynomial is assembled by CRT from Hessenberg
//! reductions modulo 62-bit primes; the coefficient bound comes from the
//! eigenvalue bound supplied by the caller (Deligne at weight k), not from
//! entry-size Hadamard bounds, which are hopelessly pessimistic for the
//! skewed Miller-basis matrices.
//!
//! Roots are seeded from a scale-balanced f64 companion matrix, then every
//! root is certified and refined with exact sign evaluations on dyadic
//! rationals, so the isolation is a proof, not a heuristic.

use crate::error::{Error, Result};
use crate::num_util::ln_abs_bigint;
use nalgebra::DMatrix;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

// ---------------------------------------------------------------------------
// Modular arithmetic on u64 words
// ---------------------------------------------------------------------------

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primes_from(start: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = start | 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n += 2;
    }
    out
}

fn bigint_mod_u64(x: &BigInt, p: u64) -> u64 {
    let mut r: u64 = 0;
    let base = (1u128 << 32) % p as u128;
    for d in x.magnitude().iter_u32_digits().rev() {
        r = ((r as u128 * base + d as u128) % p as u128) as u64;
    }
    if x.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

// ---------------------------------------------------------------------------
// Characteristic polynomial mod p via Hessenberg reduction
// ---------------------------------------------------------------------------

/// Coefficients c_0..c_n (ascending, monic) of det(xI - A) mod p.
fn charpoly_mod(a: &[Vec<BigInt>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a
        .iter()
        .map(|row| row.iter().map(|e| bigint_mod_u64(e, p)).collect())
        .collect();
    // Similarity reduction to upper Hessenberg form.
    for col in 0..n.saturating_sub(2) {
        let pivot = ((col + 1)..n).find(|&r| h[r][col] != 0);
        let Some(pr) = pivot else { continue };
        if pr != col + 1 {
            h.swap(pr, col + 1);
            for row in h.iter_mut() {
                row.swap(pr, col + 1);
            }
        }
        let inv = invmod(h[col + 1][col], p);
        for r in (col + 2)..n {
            if h[r][col] == 0 {
                continue;
            }
            let f = mulmod(h[r][col], inv, p);
            for c in 0..n {
                let sub = mulmod(f, h[col + 1][c], p);
                h[r][c] = (h[r][c] + p - sub) % p;
            }
            // column operation keeps the similarity: col_{col+1} += f * col_r
            for row in h.iter_mut() {
                let add = mulmod(f, row[r], p);
                row[col + 1] = (row[col + 1] + add) % p;
            }
        }
    }
    // Recurrence for the characteristic polynomials of leading blocks.
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1u64]);
    for m in 1..=n {
        let mut pm = vec![0u64; m + 1];
        let prev = &polys[m - 1];
        // (x - h[m-1][m-1]) * p_{m-1}
        for (j, &c) in prev.iter().enumerate() {
            pm[j + 1] = (pm[j + 1] + c) % p;
            let sub = mulmod(h[m - 1][m - 1], c, p);
            pm[j] = (pm[j] + p - sub) % p;
        }
        let mut subdiag = 1u64;
        for i in 1..m {
            subdiag = mulmod(subdiag, h[m - i][m - i - 1], p);
            if subdiag == 0 {
                break;
            }
            let coef = mulmod(h[m - 1 - i][m - 1], subdiag, p);
            if coef == 0 {
                continue;
            }
            for (j, &c) in polys[m - 1 - i].iter().enumerate() {
                let sub = mulmod(coef, c, p);
                pm[j] = (pm[j] + p - sub) % p;
            }
        }
        polys.push(pm);
    }
    polys.pop().unwrap()
}

/// Exact characteristic polynomial det(xI - A), coefficients ascending.
///
/// `eig_bound_log2` must dominate log2 of every eigenvalue modulus; for T_n
/// on S_k Deligne gives d(n) n^{(k-1)/2}.
pub fn charpoly_exact(a: &[Vec<BigInt>], eig_bound_log2: f64) -> Result<Vec<BigInt>> {
    let n = a.len();
    if n == 0 {
        return Ok(vec![BigInt::one()]);
    }
    // |e_j(roots)| <= C(n,j) R^j <= 2^n R^n.
    let coeff_bits = (n as f64 * (eig_bound_log2 + 1.0)).ceil() as u64 + 64;
    let n_primes = (coeff_bits / 61 + 2) as usize;
    let primes = primes_from(1u64 << 62, n_primes + 3);
    let (work, check) = primes.split_at(n_primes);
    let residues: Vec<(u64, Vec<u64>)> = work
        .par_iter()
        .map(|&p| (p, charpoly_mod(a, p)))
        .collect();
    // CRT with precomputed multipliers.
    let modulus: BigInt = work.iter().map(|&p| BigInt::from(p)).product();
    let half = &modulus / 2;
    let multipliers: Vec<BigInt> = residues
        .par_iter()
        .map(|&(p, _)| {
            let mi = &modulus / BigInt::from(p);
            let inv = invmod(bigint_mod_u64(&mi, p), p);
            mi * BigInt::from(inv)
        })
        .collect();
    let coeffs: Vec<BigInt> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let mut acc = BigInt::zero();
            for ((_, res), mult) in residues.iter().zip(&multipliers) {
                acc += mult * BigInt::from(res[j]);
            }
            acc %= &modulus;
            if acc > half {
                acc -= &modulus;
            }
            acc
        })
        .collect();
    // Validation: trace identity plus held-out primes.
    let trace: BigInt = (0..n).map(|i| a[i][i].clone()).sum();
    if coeffs[n - 1] != -&trace || !coeffs[n].is_one() {
        return Err(Error::RootIsolation(
            0,
            "characteristic polynomial failed the trace identity (CRT bound too small?)".into(),
        ));
    }
    for &p in check {
        let expect = charpoly_mod(a, p);
        for (j, e) in expect.iter().enumerate() {
            if bigint_mod_u64(&coeffs[j], p) != *e {
                return Err(Error::RootIsolation(
                    0,
                    format!("characteristic polynomial failed verification mod {p}"),
                ));
            }
        }
    }
    Ok(coeffs)
}

// ---------------------------------------------------------------------------
// Exact polynomial evaluation and certified root isolation
// ---------------------------------------------------------------------------

pub fn poly_eval(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

pub fn poly_derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * BigInt::from(j))
        .collect()
}

fn dyadic_from_f64(v: f64, frac_bits: u64) -> BigRational {
    let scaled = v * (frac_bits as f64).exp2();
    let m = BigInt::from(scaled.round() as i128);
    BigRational::new(m, BigInt::one() << frac_bits)
}

/// An isolated real root: certified bracket [lo, hi] with sign change (or an
/// exact rational root with lo = hi), plus the dyadic midpoint `value`.
#[derive(Debug, Clone)]
pub struct IsolatedRoot {
    pub value: BigRational,
    pub width_log2: f64,
}

/// Isolate all real roots of a monic integer polynomial whose roots are known
/// to lie in [-bound, bound] with bound = root_scale * root_range (root_scale
/// = 2^{(k-1)/2} for T_2, root_range a small Deligne-type margin). Requires
/// deg(p) simple real roots in range; anything else is reported as an error.
///
/// `target_frac_bits` is the requested absolute precision: brackets are
/// narrowed until hi - lo <= 2^{-target_frac_bits} * root_scale.
pub fn isolate_real_roots(
    coeffs: &[BigInt],
    scale_log2: f64,
    target_frac_bits: u64,
) -> Result<Vec<IsolatedRoot>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let deriv = poly_derivative(coeffs);
    // f64 seeds from the scale-balanced companion matrix.
    let scaled: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if c.is_zero() {
                0.0
            } else {
                let ln = ln_abs_bigint(c) + ((j as f64) - (n as f64)) * scale_log2 * std::f64::consts::LN_2;
                let s = if c.is_negative() { -1.0 } else { 1.0 };
                s * ln.exp()
            }
        })
        .collect();
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        companion[(i, n - 1)] = -scaled[i];
        if i + 1 < n {
            companion[(i + 1, i)] = 1.0;
        }
    }
    let eigs = companion.complex_eigenvalues();
    let mut seeds: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    seeds.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Midpoints between consecutive seeds bracket each root; the outermost
    // walls sit past the seed range with margin.
    let spread = (seeds[n - 1] - seeds[0]).max(1.0);
    let mut walls_f: Vec<f64> = Vec::with_capacity(n + 1);
    walls_f.push(seeds[0] - 0.1 * spread - 1.0);
    for i in 0..n - 1 {
        walls_f.push(0.5 * (seeds[i] + seeds[i + 1]));
    }
    walls_f.push(seeds[n - 1] + 0.1 * spread + 1.0);

    let scale_int = scale_log2.floor() as i64;
    let scale_rem = (scale_log2 - scale_int as f64).exp2();
    let to_dyadic = |t: f64| -> BigRational {
        let base = dyadic_from_f64(t * scale_rem, 80);
        if scale_int >= 0 {
            base * BigRational::from_integer(BigInt::one() << scale_int as u64)
        } else {
            base / BigRational::from_integer(BigInt::one() << (-scale_int) as u64)
        }
    };

    let mut walls: Vec<BigRational> = walls_f.iter().map(|&t| to_dyadic(t)).collect();
    // Nudge any wall that happens to land exactly on a root.
    let eps = to_dyadic(1.0) / BigRational::from_integer(BigInt::one() << 60);
    let mut signs: Vec<i8> = Vec::with_capacity(n + 1);
    for w in walls.iter_mut() {
        let mut v = poly_eval(coeffs, w);
        if v.is_zero() {
            *w = &*w + &eps;
            v = poly_eval(coeffs, w);
        }
        signs.push(if v.is_positive() { 1 } else { -1 });
    }
    let bracket_ok = (0..n).all(|i| signs[i] != signs[i + 1]);
    if !bracket_ok {
        // Seeds were not trustworthy; fall back to an exact-sign grid scan.
        let (w2, s2) = grid_scan(coeffs, &to_dyadic, n)?;
        walls = w2;
        signs = s2;
    }

    let target = {
        let tf = target_frac_bits as i64 - scale_int;
        if tf > 0 {
            BigRational::new(BigInt::one(), BigInt::one() << tf as u64)
        } else {
            BigRational::from_integer(BigInt::one() << (-tf) as u64)
        }
    };

    let max_frac_bits = (target_frac_bits as i64 - scale_int).max(0) as u64 + 64;
    let roots: Vec<IsolatedRoot> = (0..n)
        .into_par_iter()
        .map(|i| {
            refine_root(
                coeffs,
                &deriv,
                walls[i].clone(),
                walls[i + 1].clone(),
                signs[i],
                &target,
                max_frac_bits,
            )
        })
        .collect();
    Ok(roots)
}

/// Exact-sign grid scan fallback: subdivide [-B, B] until exactly n sign
/// changes appear.
fn grid_scan(
    coeffs: &[BigInt],
    to_dyadic: &dyn Fn(f64) -> BigRational,
    n: usize,
) -> Result<(Vec<BigRational>, Vec<i8>)> {
    let bound = 4.0; // Deligne margin in normalized units
    let mut cells = 64usize;
    while cells <= 1 << 18 {
        let mut walls = Vec::with_capacity(cells + 1);
        let mut signs = Vec::with_capacity(cells + 1);
        for j in 0..=cells {
            let t = -bound + 2.0 * bound * j as f64 / cells as f64;
            let mut w = to_dyadic(t);
            let mut v = poly_eval(coeffs, &w);
            if v.is_zero() {
                w = &w + &to_dyadic(bound / (cells as f64 * 1e6));
                v = poly_eval(coeffs, &w);
            }
            walls.push(w);
            signs.push(if v.is_positive() { 1i8 } else { -1 });
        }
        // Collect sign changes individually (brackets need not be contiguous).
        let mut cw = Vec::new();
        for j in 0..cells {
            if signs[j] != signs[j + 1] {
                cw.push((walls[j].clone(), walls[j + 1].clone(), signs[j]));
            }
        }
        if cw.len() == n {
            let mut walls_out = Vec::with_capacity(n + 1);
            let mut signs_out = Vec::with_capacity(n + 1);
            for (idx, (lo, hi, s)) in cw.into_iter().enumerate() {
                if idx == 0 {
                    walls_out.push(lo);
                    signs_out.push(s);
                }
                walls_out.push(hi);
                signs_out.push(-s);
            }
            // Re-evaluate interior walls shared by adjacent brackets is not
            // needed: each change was verified independently; adjacent
            // brackets may overlap only at walls where the sign flipped.
            return Ok((walls_out, signs_out));
        }
        cells *= 2;
    }
    Err(Error::RootIsolation(
        0,
        format!("could not isolate {n} simple real roots by sign scanning"),
    ))
}

/// Safeguarded Newton inside a certified bracket. `s_lo` = sign of p at lo.
fn refine_root(
    coeffs: &[BigInt],
    deriv: &[BigInt],
    mut lo: BigRational,
    mut hi: BigRational,
    s_lo: i8,
    target: &BigRational,
    max_frac_bits: u64,
) -> IsolatedRoot {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut x = (&lo + &hi) / &two;
    let mut frac_bits: u64 = 128;
    let max_iter = 8 * max_frac_bits.max(64);
    let mut last_x: Option<BigRational> = None;
    for _ in 0..max_iter {
        if &hi - &lo <= *target {
            break;
        }
        let px = poly_eval(coeffs, &x);
        if px.is_zero() {
            return IsolatedRoot { value: x, width_log2: f64::NEG_INFINITY };
        }
        let s = if px.is_positive() { 1i8 } else { -1 };
        if s == s_lo {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        if &hi - &lo <= *target {
            break;
        }
        let dpx = poly_eval(deriv, &x);
        let mut next = if dpx.is_zero() {
            (&lo + &hi) / &two
        } else {
            crate::num_util::round_dyadic(&(&x - px / dpx), frac_bits)
        };
        if next <= lo || next >= hi || Some(&next) == last_x.as_ref() {
            next = (&lo + &hi) / &two;
        }
        last_x = Some(x);
        x = next;
        frac_bits = (frac_bits * 2).min(max_frac_bits);
    }
    let width = &hi - &lo;
    let value = (&lo + &hi) / &two;
    IsolatedRoot {
        value,
        width_log2: crate::num_util::ln_abs_rational(&width) / std::f64::consts::LN_2,
    }
}
