//! Squarefree decomposition of solutions and their ideal-pair tags.
//!
//! A solution `A + B = c^z` with `A = D1*X^2`, `B = D2*Y^2` lives in
//! `Q(sqrt(-D))`, `D = D1*D2`. Which conjugate pair of ideals above `c` it
//! belongs to is read off the key number `L = D1*X/Y mod c`, which always
//! satisfies `L^2 = -D mod c`. The pair is unordered, so the tag keeps the
//! representative of `{L, -L}` in `(0, c/2]`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::modmath::{self, factorize};
use crate::search::Solution;

/// Identifies the conjugate ideal pair a solution is associated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealPairTag {
    pub d: u64,
    /// Representative of `{L, -L}` in `(0, c/2]`.
    pub l: u64,
    pub omega_c: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub d: u64,
    pub d1: u64,
    pub d2: u64,
    pub xr: BigUint,
    pub yr: BigUint,
    /// Always 1: kernels are taken of the values themselves.
    pub j: u64,
}

/// Product of the primes dividing `m` to an odd power.
pub fn squarefree_kernel(m: &BigUint) -> Result<BigUint> {
    if m.is_zero() {
        return Err(Error::ParamOutOfRange("squarefree kernel of 0".into()));
    }
    let f = factorize(m)?;
    Ok(f.factors()
        .iter()
        .filter(|(_, e)| e % 2 == 1)
        .fold(BigUint::one(), |acc, (p, _)| acc * p))
}

fn small(v: BigUint, what: &str) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} = {v}")))
}

/// `A = D1*Xr^2`, `B = D2*Yr^2` with `D1`, `D2` squarefree.
pub fn decompose(a: &BigUint, b: &BigUint) -> Result<Decomposition> {
    if !a.gcd(b).is_one() {
        return Err(Error::ParamOutOfRange(format!(
            "{a} and {b} are not coprime"
        )));
    }
    let k1 = squarefree_kernel(a)?;
    let k2 = squarefree_kernel(b)?;
    let xr = (a / &k1).sqrt();
    let yr = (b / &k2).sqrt();
    debug_assert_eq!(&k1 * &xr * &xr, *a);
    debug_assert_eq!(&k2 * &yr * &yr, *b);
    let d1 = small(k1, "D1")?;
    let d2 = small(k2, "D2")?;
    let d = d1
        .checked_mul(d2)
        .ok_or_else(|| Error::Overflow(format!("D = {d1}*{d2}")))?;
    Ok(Decomposition {
        d,
        d1,
        d2,
        xr,
        yr,
        j: 1,
    })
}

fn mod_small(v: &BigUint, c: u64) -> u64 {
    (v % c).to_u64().expect("residue below c")
}

/// Signed key number in `[-(c-1)/2, (c-1)/2]` with `L^2 = -D mod c`.
pub fn key_number_of(a: &BigUint, b: &BigUint, c: u64) -> Result<i64> {
    let dec = decompose(a, b)?;
    key_number_from(a, b, c, &dec)
}

fn key_number_from(a: &BigUint, b: &BigUint, c: u64, dec: &Decomposition) -> Result<i64> {
    if c.is_multiple_of(2) {
        return Err(Error::EvenModulus(c));
    }
    if !(a * b).gcd(&BigUint::from(c)).is_one() {
        return Err(Error::not_coprime(format!("{a}*{b}"), c));
    }
    if !((a + b) % c).is_zero() {
        return Err(Error::CongruenceFails {
            a: a.clone(),
            b: b.clone(),
            c,
        });
    }
    let x = mod_small(&dec.xr, c);
    let y = mod_small(&dec.yr, c);
    let y_inv = modmath::inverse_mod(y as i64, c)?;
    let l = modmath::mul_mod(modmath::mul_mod(dec.d1 % c, x, c), y_inv, c);
    let signed = modmath::signed_residue(l, c);
    if modmath::mul_mod(l, l, c) != (c - dec.d % c) % c {
        return Err(Error::KeyNumberInvalid {
            l: signed,
            d: dec.d,
            c,
        });
    }
    Ok(signed)
}

/// Representative of `{L, -L}` in `(0, c/2]`.
pub fn canonical_key(l: i64, c: u64) -> u64 {
    let r = modmath::residue(l, c);
    r.min(c - r)
}

/// Everything the classifier knows about one solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classified {
    pub decomposition: Decomposition,
    pub key: i64,
    pub tag: IdealPairTag,
    pub parity: Vec<u8>,
}

/// Classifies `sol` against the instance modulus; needs `c` odd.
pub fn classify(sol: &Solution, inst: &Instance) -> Result<Classified> {
    inst.require_odd()?;
    let omega_c = modmath::factorize_u64(inst.c)?.omega() as u32;
    classify_with(sol, inst.c, omega_c)
}

fn classify_with(sol: &Solution, c: u64, omega_c: u32) -> Result<Classified> {
    let decomposition = decompose(&sol.a, &sol.b)?;
    let key = key_number_from(&sol.a, &sol.b, c, &decomposition)?;
    Ok(Classified {
        tag: IdealPairTag {
            d: decomposition.d,
            l: canonical_key(key, c),
            omega_c,
        },
        decomposition,
        key,
        parity: sol.parity(),
    })
}

pub fn association_tag(sol: &Solution, inst: &Instance) -> Result<IdealPairTag> {
    Ok(classify(sol, inst)?.tag)
}

/// Partition of a solution list by tag, plus per-solution labels.
#[derive(Debug, Clone, Default)]
pub struct Grouping {
    pub groups: BTreeMap<IdealPairTag, Vec<Solution>>,
    /// Parallel to the input list.
    pub labels: Vec<Classified>,
}

impl Grouping {
    /// Distinct tags seen within each parity class.
    pub fn tags_per_parity(&self) -> BTreeMap<Vec<u8>, Vec<IdealPairTag>> {
        let mut out: BTreeMap<Vec<u8>, Vec<IdealPairTag>> = BTreeMap::new();
        for c in &self.labels {
            let tags = out.entry(c.parity.clone()).or_default();
            if !tags.contains(&c.tag) {
                tags.push(c.tag);
            }
        }
        for tags in out.values_mut() {
            tags.sort();
        }
        out
    }
}

pub fn group_by_association(sols: &[Solution], inst: &Instance) -> Result<Grouping> {
    inst.require_odd()?;
    let omega_c = modmath::factorize_u64(inst.c)?.omega() as u32;
    let mut g = Grouping::default();
    for sol in sols {
        let cl = classify_with(sol, inst.c, omega_c)?;
        g.groups.entry(cl.tag).or_default().push(sol.clone());
        g.labels.push(cl);
    }
    Ok(g)
}

/// `A - B = 2*Xr*Yr*L mod c`, the congruence tying a solution to its key.
pub fn observation_holds(a: &BigUint, b: &BigUint, cl: &Classified, c: u64) -> bool {
    let lhs = (BigInt::from(a.clone()) - BigInt::from(b.clone())).mod_floor(&BigInt::from(c));
    let rhs = (BigInt::from(2u32)
        * BigInt::from(cl.decomposition.xr.clone())
        * BigInt::from(cl.decomposition.yr.clone())
        * cl.key)
        .mod_floor(&BigInt::from(c));
    lhs == rhs
}
