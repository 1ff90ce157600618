//! Modular arithmetic primitives: factorization, multiplicative orders,
//! inverses, CRT, square roots of `-D` modulo odd `c`, discrete logarithms
//! and multiplicative independence.
//!
//! Moduli that index residue classes (`c`, prime powers of `c`) are machine
//! words and all products go through `u128`. Quantities that can grow without
//! bound (values being factored, prime-power moduli `c^{2j}`) are `BigUint`.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const SIEVE_LIMIT: u64 = 1_000_000;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SIEVE_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::with_capacity(80_000);
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn residue(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Signed representative in `[-(m-1)/2, (m-1)/2]` (odd `m`).
#[inline]
pub fn signed_residue(a: u64, m: u64) -> i64 {
    let a = a % m;
    if a > m / 2 {
        a as i64 - m as i64
    } else {
        a as i64
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Number of Miller-Rabin rounds used for arbitrary-precision inputs.
pub const MILLER_RABIN_ROUNDS: usize = 64;

/// Miller-Rabin with a fixed base schedule: the first [`MILLER_RABIN_ROUNDS`]
/// primes (2, 3, 5, ..., 311). Verdicts are reproducible run to run. Inputs
/// below 2^64 are answered exactly.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let bases = &small_primes()[..MILLER_RABIN_ROUNDS];
    for &p in bases {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in bases {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Number of distinct primes.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// The factorization as machine words; fails if any prime exceeds `u64`.
    pub fn small_factors(&self) -> Result<Vec<(u64, u32)>> {
        self.factors
            .iter()
            .map(|(p, e)| {
                p.to_u64()
                    .map(|p| (p, *e))
                    .ok_or_else(|| Error::Overflow(format!("prime factor {p}")))
            })
            .collect()
    }

    fn from_primes(value: BigUint, mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { value, factors }
    }
}

/// Effort budget for [`factorize_with`].
#[derive(Debug, Clone, Copy)]
pub struct FactorConfig {
    /// Trial division bound (clamped to 10^6).
    pub trial_limit: u64,
    /// Total Pollard-rho iterations allowed per composite cofactor.
    pub rho_iterations: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_limit: SIEVE_LIMIT,
            rho_iterations: 1 << 22,
        }
    }
}

pub fn factorize(n: &BigUint) -> Result<Factorization> {
    factorize_with(n, &FactorConfig::default())
}

pub fn factorize_u64(n: u64) -> Result<Factorization> {
    factorize(&BigUint::from(n))
}

/// Trial division up to `trial_limit`, then Brent's variant of Pollard rho.
/// A composite cofactor that survives the rho budget is reported as
/// [`Error::FactorizationIncomplete`]; nothing is ever guessed.
pub fn factorize_with(n: &BigUint, config: &FactorConfig) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ParamOutOfRange("cannot factor 0".into()));
    }
    let limit = config.trial_limit.min(SIEVE_LIMIT);
    let mut primes = Vec::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        if p > limit {
            break;
        }
        if let Some(mut small) = rest.to_u64() {
            // finish in machine words
            for &p in small_primes().iter().skip_while(|&&q| q < p) {
                if p > limit || p * p > small {
                    break;
                }
                while small % p == 0 {
                    small /= p;
                    primes.push(BigUint::from(p));
                }
            }
            rest = BigUint::from(small);
            break;
        }
        if BigUint::from(p * p) > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            primes.push(BigUint::from(p));
        }
    }
    if rest.is_one() {
        return Ok(Factorization::from_primes(n.clone(), primes));
    }
    // Every prime factor of `rest` exceeds the trial bound.
    let bound = BigUint::from(limit) * limit;
    let mut pending = vec![rest];
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if m < bound || is_probable_prime(&m) {
            primes.push(m);
            continue;
        }
        match pollard_brent(&m, config.rho_iterations) {
            Some(f) => {
                let g = &m / &f;
                pending.push(f);
                pending.push(g);
            }
            None => {
                return Err(Error::FactorizationIncomplete {
                    value: n.clone(),
                    cofactor: m,
                })
            }
        }
    }
    Ok(Factorization::from_primes(n.clone(), primes))
}

fn pollard_brent(n: &BigUint, budget: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let mut spent = 0u64;
    for offset in 1u64..=20 {
        let c = BigUint::from(offset);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32 + offset as u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
                spent += m.min(r);
            }
            r *= 2;
            if spent > budget {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g > one && g < *n {
            return Some(g);
        }
        if spent > budget {
            return None;
        }
    }
    None
}

/// Carmichael function of a factored modulus.
pub fn carmichael(factors: &[(u64, u32)]) -> u64 {
    factors.iter().fold(1u64, |acc, &(p, k)| {
        let l = if p == 2 {
            match k {
                1 => 1,
                2 => 2,
                _ => 1 << (k - 2),
            }
        } else {
            p.pow(k - 1) * (p - 1)
        };
        acc.lcm(&l)
    })
}

/// Least `mu >= 1` with `a^mu = 1 mod c`.
pub fn mult_order(a: i64, c: u64) -> Result<u64> {
    if c < 2 {
        return Err(Error::ParamOutOfRange(format!("modulus {c} must exceed 1")));
    }
    let a = residue(a, c);
    if a.gcd(&c) != 1 {
        return Err(Error::not_coprime(a, c));
    }
    let lambda = carmichael(&factorize_u64(c)?.small_factors()?);
    let mut order = lambda;
    for (q, _) in factorize_u64(lambda)?.small_factors()? {
        while order.is_multiple_of(q) && pow_mod(a, order / q, c) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Inverse of `a` modulo `c`, in `[1, c-1]`.
pub fn inverse_mod(a: i64, c: u64) -> Result<u64> {
    if c < 2 {
        return Err(Error::ParamOutOfRange(format!("modulus {c} must exceed 1")));
    }
    let r = residue(a, c) as i128;
    let ext = r.extended_gcd(&(c as i128));
    if ext.gcd != 1 {
        return Err(Error::not_coprime(a, c));
    }
    Ok(ext.x.rem_euclid(c as i128) as u64)
}

/// Inverse of `a` modulo `m` for arbitrary-precision operands.
pub fn inverse_mod_big(a: &BigInt, m: &BigUint) -> Option<BigUint> {
    let m = BigInt::from(m.clone());
    let ext = a.mod_floor(&m).extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    ext.x.mod_floor(&m).to_biguint()
}

/// Chinese remaindering of `(residue, modulus)` pairs with pairwise coprime
/// moduli. Returns the residue modulo the product.
pub fn crt(parts: &[(BigUint, BigUint)]) -> BigUint {
    let mut acc = BigUint::zero();
    let mut modulus = BigUint::one();
    for (r, m) in parts {
        // acc + modulus * k = r (mod m)
        let inv = inverse_mod_big(&BigInt::from(modulus.clone()), m)
            .expect("crt moduli must be pairwise coprime");
        let diff = (BigInt::from(r.clone()) - BigInt::from(acc.clone()))
            .mod_floor(&BigInt::from(m.clone()))
            .to_biguint()
            .unwrap();
        let k = (diff * inv) % m;
        acc += &modulus * k;
        modulus *= m;
    }
    acc
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks), if any.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Both square roots of `-d` modulo `p^k` (odd `p`, `p` not dividing `d`),
/// sorted ascending, or none when `-d` is a non-residue.
pub fn sqrt_neg_mod_prime_power(d: u64, p: u64, k: u32) -> Vec<BigUint> {
    debug_assert!(p % 2 == 1 && !d.is_multiple_of(p));
    let target = p - d % p;
    let Some(root) = sqrt_mod_prime(target, p) else {
        return Vec::new();
    };
    let p_big = BigInt::from(p);
    let d_big = BigInt::from(d);
    let mut x = BigInt::from(root);
    let mut modulus = p_big.clone();
    // Hensel: x <- x - (x^2 + d) / (2x) modulo the next power of p.
    for _ in 1..k {
        modulus *= &p_big;
        let f = &x * &x + &d_big;
        let inv = inverse_mod_big(&(&x * 2), &modulus.to_biguint().unwrap())
            .expect("2x is a unit modulo p^k");
        x = (x - f * BigInt::from(inv)).mod_floor(&modulus);
    }
    let modulus = modulus.to_biguint().unwrap();
    let x = x.to_biguint().unwrap();
    let neg = &modulus - &x;
    let mut roots = vec![x, neg];
    roots.sort();
    roots
}

/// All square roots of `-d` modulo `prod p^k`, combined by CRT and sorted.
/// There are either none or `2^omega` of them.
pub fn sqrt_neg_mod(d: u64, prime_powers: &[(u64, u32)]) -> Vec<BigUint> {
    let mut combos: Vec<Vec<(BigUint, BigUint)>> = vec![Vec::new()];
    for &(p, k) in prime_powers {
        let roots = sqrt_neg_mod_prime_power(d, p, k);
        if roots.is_empty() {
            return Vec::new();
        }
        let m = BigUint::from(p).pow(k);
        let mut next = Vec::with_capacity(combos.len() * roots.len());
        for prefix in &combos {
            for r in &roots {
                let mut parts = prefix.clone();
                parts.push((r.clone(), m.clone()));
                next.push(parts);
            }
        }
        combos = next;
        combos.dedup();
    }
    let mut out: Vec<BigUint> = combos.iter().map(|parts| crt(parts)).collect();
    out.sort();
    out.dedup();
    out
}

/// Key numbers: every `L` with `L^2 = -d mod c`, as signed representatives in
/// `[-(c-1)/2, (c-1)/2]`, sorted ascending.
pub fn key_numbers(d: u64, c_fact: &Factorization) -> Result<Vec<i64>> {
    let c = c_fact
        .value()
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("modulus {}", c_fact.value())))?;
    if c % 2 == 0 {
        return Err(Error::EvenModulus(c));
    }
    if c == 1 {
        return Err(Error::ParamOutOfRange("modulus must exceed 1".into()));
    }
    if d.gcd(&c) != 1 {
        return Err(Error::not_coprime(d, c));
    }
    let mut out: Vec<i64> = sqrt_neg_mod(d, &c_fact.small_factors()?)
        .into_iter()
        .map(|r| signed_residue(r.to_u64().unwrap(), c))
        .collect();
    out.sort();
    Ok(out)
}

/// Decide whether `prod d_i^{e_i} = 1` forces `e = 0`, via the rank of the
/// prime-exponent matrix over the rationals.
pub fn multiplicatively_independent(d: &[u64]) -> Result<bool> {
    if let Some(&bad) = d.iter().find(|&&x| x < 2) {
        return Err(Error::ParamOutOfRange(format!("base {bad} must exceed 1")));
    }
    let facts = d
        .iter()
        .map(|&x| factorize_u64(x).and_then(|f| f.small_factors()))
        .collect::<Result<Vec<_>>>()?;
    let mut primes: Vec<u64> = facts.iter().flatten().map(|&(p, _)| p).collect();
    primes.sort();
    primes.dedup();
    let rows: Vec<Vec<BigInt>> = facts
        .iter()
        .map(|f| {
            primes
                .iter()
                .map(|p| {
                    let e = f.iter().find(|(q, _)| q == p).map_or(0, |&(_, e)| e);
                    BigInt::from(e)
                })
                .collect()
        })
        .collect();
    Ok(rational_rank(rows) == d.len())
}

/// Rank of an integer matrix over Q by fraction-free elimination.
#[allow(clippy::needless_range_loop)]
fn rational_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let (a, b) = (rows[rank][col].clone(), rows[r][col].clone());
            for k in col..cols {
                let v = &rows[r][k] * &a - &rows[rank][k] * &b;
                rows[r][k] = v;
            }
        }
        rank += 1;
    }
    rank
}

/// A generator of the cyclic group `(Z/p^k)^*` for odd prime `p`.
pub fn primitive_root(p: u64, k: u32) -> Result<u64> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenModulus(p));
    }
    let phi_p = p - 1;
    let qs = factorize_u64(phi_p)?.small_factors()?;
    let g = (2..p)
        .find(|&g| qs.iter().all(|&(q, _)| pow_mod(g, phi_p / q, p) != 1))
        .unwrap_or(1);
    if k == 1 {
        return Ok(g);
    }
    // g generates mod p^k for all k iff it generates mod p^2.
    let p2 = p * p;
    if pow_mod(g, phi_p, p2) == 1 {
        Ok(g + p)
    } else {
        Ok(g)
    }
}

/// Baby-step giant-step: the least `x` in `[0, order)` with `g^x = h mod m`.
pub fn discrete_log(g: u64, h: u64, m: u64, order: u64) -> Option<u64> {
    let h = h % m;
    let step = (order as f64).sqrt().ceil() as u64 + 1;
    let mut baby: HashMap<u64, u64> = HashMap::with_capacity(step as usize);
    let mut cur = 1 % m;
    for j in 0..step {
        baby.entry(cur).or_insert(j);
        cur = mul_mod(cur, g, m);
    }
    let g_inv = inverse_mod(g as i64, m).ok()?;
    let giant = pow_mod(g_inv, step, m);
    let mut gamma = h;
    for i in 0..=step {
        if let Some(&j) = baby.get(&gamma) {
            let x = i * step + j;
            if x < order {
                return Some(x);
            }
        }
        gamma = mul_mod(gamma, giant, m);
    }
    None
}
