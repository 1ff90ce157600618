//! Complete enumeration of `r*X + s*Y = c^z` up to a depth bound.
//!
//! For each `z` and each assignment of the indices to the `X` or `Y` side,
//! exponents on the `X` side are walked depth-first under `r*X < c^z`; the
//! complementary term is then split over the `Y`-side bases in every possible
//! way. Every index carries a positive exponent on exactly one side.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// One exponent-level solution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub z: u32,
    /// `prod d_i^{x_i}`
    pub a: BigUint,
    /// `prod d_i^{y_i}`
    pub b: BigUint,
}

impl Solution {
    pub fn triple(&self) -> SumTriple {
        SumTriple {
            a: self.a.clone(),
            b: self.b.clone(),
            z: self.z,
        }
    }

    /// `max(x_i, y_i) mod 2` for every index.
    pub fn parity(&self) -> Vec<u8> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(&x, &y)| (x.max(y) % 2) as u8)
            .collect()
    }

    /// Re-checks every invariant of a solution against its instance.
    pub fn check(&self, inst: &Instance) -> bool {
        let n = inst.n();
        if self.x.len() != n || self.y.len() != n || self.z < 1 {
            return false;
        }
        let support = self
            .x
            .iter()
            .zip(&self.y)
            .all(|(&x, &y)| x.min(y) == 0 && x.max(y) > 0);
        let a = evaluate(&inst.d, &self.x);
        let b = evaluate(&inst.d, &self.y);
        let c = BigUint::from(inst.c);
        let total = &a * inst.r + &b * inst.s;
        let ordered = !(inst.r == 1 && inst.s == 1) || a < b;
        support
            && a == self.a
            && b == self.b
            && total == c.pow(self.z)
            && ordered
            && a.gcd(&b).is_one()
            && (&a * &b).gcd(&c).is_one()
    }
}

/// A value-level solution `(A, B, z)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumTriple {
    pub a: BigUint,
    pub b: BigUint,
    pub z: u32,
}

impl SumTriple {
    pub fn new(a: impl Into<BigUint>, b: impl Into<BigUint>, z: u32) -> Self {
        SumTriple {
            a: a.into(),
            b: b.into(),
            z,
        }
    }
}

impl fmt::Display for SumTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.z)
    }
}

/// `prod d_i^{e_i}` exactly.
pub fn evaluate(d: &[u64], e: &[u32]) -> BigUint {
    d.iter().zip(e).fold(BigUint::one(), |acc, (&di, &ei)| {
        acc * BigUint::from(di).pow(ei)
    })
}

/// Arithmetic needed by the search, implemented for `u128` (fast path when
/// every term fits) and `BigUint`.
trait Magnitude: Clone + Ord + Integer + From<u64> + Send + Sync {
    fn into_big(self) -> BigUint;
}

impl Magnitude for u128 {
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Magnitude for BigUint {
    fn into_big(self) -> BigUint {
        self
    }
}

fn power<T: Magnitude>(base: u64, exp: u32) -> T {
    let b = T::from(base);
    (0..exp).fold(T::one(), |acc, _| acc * b.clone())
}

/// One `(z, side assignment)` cell of the search. The side with fewer bases is
/// walked depth-first; the other side's product is then forced and split.
struct Shard<'a, T> {
    d: &'a [u64],
    target: T,
    walk: Vec<usize>,
    walk_coeff: T,
    split: Vec<usize>,
    split_coeff: T,
}

impl<T: Magnitude> Shard<'_, T> {
    /// `(walk exponents, split exponents, walk product, split product)`.
    fn run(&self) -> Vec<(Vec<u32>, Vec<u32>, T, T)> {
        let mut out = Vec::new();
        let mut e = vec![0u32; self.d.len()];
        self.walk_from(0, T::one(), &mut e, &mut out);
        out
    }

    fn walk_from(
        &self,
        k: usize,
        prod: T,
        e: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, Vec<u32>, T, T)>,
    ) {
        if k == self.walk.len() {
            let used = self.walk_coeff.clone() * prod.clone();
            if used >= self.target {
                return;
            }
            let (rest, rem) = (self.target.clone() - used).div_rem(&self.split_coeff);
            if !rem.is_zero() || rest.is_zero() {
                return;
            }
            let mut f = vec![0u32; self.d.len()];
            let mut found = Vec::new();
            self.split_from(0, rest.clone(), &mut f, &mut found);
            for f in found {
                out.push((e.clone(), f, prod.clone(), rest.clone()));
            }
            return;
        }
        let i = self.walk[k];
        let base = T::from(self.d[i]);
        let mut p = prod;
        let mut n = 0;
        loop {
            p = p * base.clone();
            n += 1;
            if self.walk_coeff.clone() * p.clone() >= self.target {
                break;
            }
            e[i] = n;
            self.walk_from(k + 1, p.clone(), e, out);
        }
        e[i] = 0;
    }

    /// All ways of writing `rest` as a product over the split side with
    /// every exponent positive.
    fn split_from(&self, k: usize, rest: T, f: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == self.split.len() {
            if rest.is_one() {
                out.push(f.clone());
            }
            return;
        }
        let i = self.split[k];
        let base = T::from(self.d[i]);
        let mut cur = rest;
        let mut n = 0;
        loop {
            let (q, r) = cur.div_rem(&base);
            if !r.is_zero() {
                break;
            }
            cur = q;
            n += 1;
            f[i] = n;
            self.split_from(k + 1, cur.clone(), f, out);
        }
        f[i] = 0;
    }
}

fn shard_keys(inst: &Instance) -> Vec<(u32, u64)> {
    let masks = 1u64 << inst.n();
    (1..=inst.z_max)
        .flat_map(|z| (0..masks).map(move |m| (z, m)))
        .collect()
}

fn solve_shard<T: Magnitude>(inst: &Instance, z: u32, mask: u64) -> Vec<Solution> {
    let n = inst.n();
    let (x_side, y_side): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| mask >> i & 1 == 1);
    let walk_x = x_side.len() <= y_side.len();
    let (r, s) = (T::from(inst.r), T::from(inst.s));
    let shard = if walk_x {
        Shard {
            d: &inst.d,
            target: power::<T>(inst.c, z),
            walk: x_side,
            walk_coeff: r,
            split: y_side,
            split_coeff: s,
        }
    } else {
        Shard {
            d: &inst.d,
            target: power::<T>(inst.c, z),
            walk: y_side,
            walk_coeff: s,
            split: x_side,
            split_coeff: r,
        }
    };
    let ordered = inst.r == 1 && inst.s == 1;
    shard
        .run()
        .into_iter()
        .map(|(e, f, pe, pf)| {
            let (x, y, a, b) = if walk_x {
                (e, f, pe, pf)
            } else {
                (f, e, pf, pe)
            };
            (x, y, a, b)
        })
        .filter(|(_, _, a, b)| !ordered || a < b)
        .map(|(x, y, a, b)| Solution {
            x,
            y,
            z,
            a: a.into_big(),
            b: b.into_big(),
        })
        .collect()
}

fn fits_u128(inst: &Instance) -> bool {
    let Some(top) = (inst.c as u128).checked_pow(inst.z_max) else {
        return false;
    };
    let coeff = inst
        .r
        .max(inst.s)
        .max(inst.d.iter().copied().max().unwrap_or(1)) as u128;
    top.checked_mul(coeff)
        .and_then(|x| x.checked_mul(4))
        .is_some()
}

fn canonical_order(a: &Solution, b: &Solution) -> Ordering {
    (a.z, &a.a, &a.b, &a.x, &a.y).cmp(&(b.z, &b.a, &b.b, &b.x, &b.y))
}

fn run(inst: &Instance, parallel: bool) -> Result<Vec<Solution>> {
    inst.validate()?;
    if inst.n() > 20 {
        return Err(Error::InvalidInstance(
            "at most 20 bases are supported".into(),
        ));
    }
    let small = fits_u128(inst);
    let solve = |&(z, mask): &(u32, u64)| {
        if small {
            solve_shard::<u128>(inst, z, mask)
        } else {
            solve_shard::<BigUint>(inst, z, mask)
        }
    };
    let keys = shard_keys(inst);
    let mut sols: Vec<Solution> = if parallel {
        keys.par_iter().flat_map_iter(solve).collect()
    } else {
        keys.iter().flat_map(solve).collect()
    };
    sols.sort_by(canonical_order);
    Ok(sols)
}

/// Solutions of `X + Y = c^z` (or `r*X + s*Y = c^z` if the instance carries
/// coefficients) with `z <= z_max`, sorted by `(z, A, B, x, y)`.
pub fn enumerate_solutions(inst: &Instance) -> Result<Vec<Solution>> {
    run(inst, false)
}

/// Same output as [`enumerate_solutions`], with the `(z, side)` shards run on
/// the rayon pool.
pub fn enumerate_solutions_par(inst: &Instance) -> Result<Vec<Solution>> {
    run(inst, true)
}

/// `r*X + s*Y = c^z`; `X < Y` is imposed only when `r = s = 1`.
pub fn enumerate_general(inst: &Instance, r: u64, s: u64) -> Result<Vec<Solution>> {
    let inst = inst.clone().with_coefficients(r, s)?;
    enumerate_solutions(&inst)
}

/// Distinct `(A, B, z)` values, in order. Its length is the value-level count
/// `N`; the exponent-level count `N_1` is the number of solutions.
pub fn distinct_values(sols: &[Solution]) -> Vec<SumTriple> {
    let mut out: Vec<SumTriple> = sols.iter().map(Solution::triple).collect();
    out.sort_by(|a, b| (a.z, &a.a, &a.b).cmp(&(b.z, &b.a, &b.b)));
    out.dedup();
    out
}

/// Bounds and search box for `r*a^x + s*b^y = c^z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoTermProblem {
    pub r: u64,
    pub s: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub x_max: u32,
    pub y_max: u32,
    pub z_max: u32,
}

impl fmt::Display for TwoTermProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r={} s={} a={} b={} c={} x_max={} y_max={} z_max={}",
            self.r, self.s, self.a, self.b, self.c, self.x_max, self.y_max, self.z_max
        )
    }
}

/// Positive `(x, y, z)` with `r*a^x + s*b^y = c^z` inside the box, sorted by
/// `z` then `x`.
pub fn two_power_search(prob: &TwoTermProblem) -> Result<Vec<(u32, u32, u32)>> {
    let TwoTermProblem {
        r,
        s,
        a,
        b,
        c,
        x_max,
        y_max,
        z_max,
    } = *prob;
    if a < 2 || b < 2 || r < 1 || s < 1 || c < 2 {
        return Err(Error::ParamOutOfRange(format!(
            "need a, b > 1 and r, s, c positive: r={r} s={s} a={a} b={b} c={c}"
        )));
    }
    if x_max < 1 || y_max < 1 || z_max < 1 {
        return Err(Error::DepthInvalid(x_max.min(y_max).min(z_max)));
    }
    if (r as u128 * a as u128).gcd(&(c as u128)) != 1 {
        return Err(Error::not_coprime(format!("r*a = {r}*{a}"), c));
    }
    let big_b = BigUint::from(b);
    let mut out = Vec::new();
    for z in 1..=z_max {
        let target = BigUint::from(c).pow(z);
        let mut ax = BigUint::from(a);
        for x in 1..=x_max {
            let rax = &ax * r;
            if rax >= target {
                break;
            }
            let (q, rem) = (&target - &rax).div_rem(&BigUint::from(s));
            if rem.is_zero() {
                if let Some(y) = exact_log(&q, &big_b) {
                    if (1..=y_max).contains(&y) {
                        out.push((x, y, z));
                    }
                }
            }
            ax *= a;
        }
    }
    Ok(out)
}

/// `Some(k)` if `value = base^k`.
fn exact_log(value: &BigUint, base: &BigUint) -> Option<u32> {
    let mut v = value.clone();
    let mut k = 0u32;
    while !v.is_one() {
        let (q, r) = v.div_rem(base);
        if !r.is_zero() || q.is_zero() {
            return None;
        }
        v = q;
        k += 1;
    }
    Some(k)
}
