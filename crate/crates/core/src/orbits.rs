//! Orbits of solutions under powers of a principal generator.
//!
//! For a tag `(D, L)` let `j` be the least exponent for which `c^{2j}` has a
//! primitive representation `u^2 + D*v^2` compatible with the key number and
//! with `v^2*D` divisible by every prime of the bases. Every solution carrying
//! the tag then sits at `z = j*t` and is read off `(u + v*sqrt(-D))^t`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::classify::{group_by_association, IdealPairTag};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::modmath::{self, factorize_u64};
use crate::search::{distinct_values, Solution, SumTriple};

pub const DEFAULT_J_MAX: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSeed {
    pub j: u32,
    pub u: BigInt,
    pub v: BigUint,
    pub d: u64,
    pub c: u64,
}

/// Primitive `(u, v)` with `u, v >= 0`, `gcd(u, v) = 1` and
/// `u^2 + d*v^2 = m`, where `m = prod p^k` is odd and prime to `d`.
/// Sorted by `(u, v)`.
pub fn primitive_representations(d: u64, m_factors: &[(u64, u32)]) -> Vec<(BigUint, BigUint)> {
    let m = m_factors
        .iter()
        .fold(BigUint::one(), |acc, &(p, k)| acc * BigUint::from(p).pow(k));
    let d_big = BigUint::from(d);
    let mut out = Vec::new();
    for root in modmath::sqrt_neg_mod(d, m_factors) {
        let (mut a, mut b) = (m.clone(), root);
        while &b * &b >= m {
            let r = &a % &b;
            a = b;
            b = r;
        }
        let rest = &m - &b * &b;
        let (q, r) = rest.div_rem(&d_big);
        if !r.is_zero() {
            continue;
        }
        let v = q.sqrt();
        if &v * &v == q && !v.is_zero() && b.gcd(&v).is_one() {
            out.extend(unit_associates(d, &b, &v));
            out.push((b, v));
        }
    }
    out.retain(|(u, v)| !v.is_zero() && u.gcd(v).is_one() && u * u + &d_big * v * v == m);
    out.sort();
    out.dedup();
    out
}

/// One Cornacchia run per root misses the representations obtained by the
/// extra units of `Q(i)` and `Q(sqrt(-3))`.
fn unit_associates(d: u64, u: &BigUint, v: &BigUint) -> Vec<(BigUint, BigUint)> {
    match d {
        1 => vec![(v.clone(), u.clone())],
        3 => {
            let (u, v) = (BigInt::from(u.clone()), BigInt::from(v.clone()));
            let mut out = Vec::new();
            for v in [v.clone(), -v] {
                // (u + v*sqrt(-3)) times the two primitive cube roots of unity
                let products: [(BigInt, BigInt); 2] =
                    [(-&u - 3 * &v, &u - &v), (-&u + 3 * &v, -&u - &v)];
                for (a, b) in products {
                    if a.is_even() && b.is_even() {
                        out.push((
                            (a / 2i32).magnitude().clone(),
                            (b / 2i32).magnitude().clone(),
                        ));
                    }
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

fn base_primes(inst: &Instance) -> Result<Vec<u64>> {
    let mut primes = Vec::new();
    for &di in &inst.d {
        for (p, _) in factorize_u64(di)?.small_factors()? {
            primes.push(p);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

fn congruent(u: &BigInt, v: &BigUint, l: u64, c: u64) -> bool {
    let c_big = BigInt::from(c);
    let lhs = u.mod_floor(&c_big);
    let rhs = (BigInt::from(v.clone()) * l).mod_floor(&c_big);
    lhs == rhs
}

/// Least `j <= j_max` carrying an admissible representation for `tag`.
pub fn minimal_pair_power(tag: &IdealPairTag, inst: &Instance, j_max: u32) -> Result<OrbitSeed> {
    inst.require_odd()?;
    let c_factors = factorize_u64(inst.c)?.small_factors()?;
    let primes = base_primes(inst)?;
    for j in 1..=j_max {
        let m_factors: Vec<(u64, u32)> = c_factors.iter().map(|&(p, e)| (p, e * 2 * j)).collect();
        let mut best: Option<(BigInt, BigUint)> = None;
        for (u_abs, v) in primitive_representations(tag.d, &m_factors) {
            let admissible = primes
                .iter()
                .all(|&p| tag.d.is_multiple_of(p) || (&v % p).is_zero());
            if !admissible {
                continue;
            }
            for sign in [Sign::Minus, Sign::Plus] {
                let u = BigInt::from_biguint(sign, u_abs.clone());
                if !congruent(&u, &v, tag.l, inst.c) {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((bu, _)) => (u.abs(), &u) < (bu.abs(), bu),
                };
                if better {
                    best = Some((u, v.clone()));
                }
            }
        }
        if let Some((u, v)) = best {
            return Ok(OrbitSeed {
                j,
                u,
                v,
                d: tag.d,
                c: inst.c,
            });
        }
    }
    Err(Error::NotFound { j_max })
}

/// Coefficients of `(u + v*sqrt(-D))^t`.
pub fn orbit_power(seed: &OrbitSeed, t: u32) -> (BigInt, BigInt) {
    let d = BigInt::from(seed.d);
    let (u, v) = (seed.u.clone(), BigInt::from(seed.v.clone()));
    let (mut a, mut b) = (BigInt::one(), BigInt::zero());
    for _ in 0..t {
        let na = &a * &u - &d * &b * &v;
        let nb = &a * &v + &b * &u;
        a = na;
        b = nb;
    }
    debug_assert_eq!(
        &a * &a + &d * &b * &b,
        BigInt::from(seed.c).pow(2 * seed.j * t)
    );
    (a, b)
}

/// `(c^{jt} - |u_t|)/2`, `(c^{jt} + |u_t|)/2` at `z = j*t`.
pub fn predicted_solution(seed: &OrbitSeed, t: u32) -> Result<SumTriple> {
    if t < 1 {
        return Err(Error::ParamOutOfRange(
            "orbit index must be positive".into(),
        ));
    }
    let (u, v) = orbit_power(seed, t);
    let z = seed.j * t;
    let cz = BigUint::from(seed.c).pow(z);
    let u = u.magnitude().clone();
    if u >= cz || (&cz - &u).is_odd() {
        return Err(Error::PremiseFails(format!(
            "seed power t={t} does not split c^{z} into two integers"
        )));
    }
    let a = (&cz - &u) / 2u32;
    let b = (&cz + &u) / 2u32;
    let vv = v.magnitude();
    debug_assert_eq!(&a * &b * 4u32, vv * vv * seed.d);
    Ok(SumTriple { a, b, z })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseKind {
    None,
    Case1 { nu: u32 },
    Case2,
}

impl CaseKind {
    pub fn label(&self) -> String {
        match self {
            CaseKind::None => "none".into(),
            CaseKind::Case1 { nu } => format!("case1(nu={nu})"),
            CaseKind::Case2 => "case2".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub kind: CaseKind,
    pub partner: Option<SumTriple>,
}

/// `Some(k)` when `v = 3^k`.
fn log3(v: &BigUint) -> Option<u32> {
    let mut v = v.clone();
    let mut k = 0;
    if v.is_zero() {
        return None;
    }
    while (&v % 3u32).is_zero() {
        v /= 3u32;
        k += 1;
    }
    v.is_one().then_some(k)
}

/// Case 1: `8B+1 = 3^{nu+1}`, `8A+3 = 3^nu`, `nu > 1` odd, partner
/// `(B, 3^{2 nu} A, 3z)`. Case 2: `B - A = 1`, partner `(1, 4AB, 2z)`.
pub fn detect_case(a: &BigUint, b: &BigUint, z: u32) -> CaseReport {
    if let (Some(hi), Some(lo)) = (log3(&(b * 8u32 + 1u32)), log3(&(a * 8u32 + 3u32))) {
        if hi == lo + 1 && lo > 1 && lo % 2 == 1 {
            debug_assert!(a < b);
            let partner = SumTriple {
                a: b.clone(),
                b: BigUint::from(3u32).pow(2 * lo) * a,
                z: 3 * z,
            };
            return CaseReport {
                kind: CaseKind::Case1 { nu: lo },
                partner: Some(partner),
            };
        }
    }
    if b > a && (b - a).is_one() {
        return CaseReport {
            kind: CaseKind::Case2,
            partner: Some(SumTriple {
                a: BigUint::one(),
                b: a * b * 4u32,
                z: 2 * z,
            }),
        };
    }
    CaseReport {
        kind: CaseKind::None,
        partner: None,
    }
}

/// A Case 1 or Case 2 solution whose partner is also present.
pub fn case_pair(values: &[SumTriple]) -> Option<(SumTriple, SumTriple, CaseKind)> {
    values.iter().find_map(|s| {
        let rep = detect_case(&s.a, &s.b, s.z);
        let partner = rep.partner?;
        values
            .contains(&partner)
            .then(|| (s.clone(), partner, rep.kind))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSummary {
    pub tag: IdealPairTag,
    pub solutions: Vec<SumTriple>,
    pub case: CaseKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Report {
    pub tags: Vec<TagSummary>,
    pub violations: Vec<String>,
}

impl Lemma1Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// At most one solution per tag, except a single tag holding a Case 1 or
/// Case 2 solution together with its partner.
pub fn verify_lemma1(inst: &Instance, sols: &[Solution]) -> Result<Lemma1Report> {
    let grouping = group_by_association(sols, inst)?;
    let mut tags = Vec::new();
    let mut violations = Vec::new();
    let mut doubled = Vec::new();
    for (tag, group) in &grouping.groups {
        let values = distinct_values(group);
        let mut case = CaseKind::None;
        match values.len() {
            1 => {}
            2 => match case_pair(&values) {
                Some((_, _, kind)) => {
                    case = kind;
                    doubled.push(*tag);
                }
                None => violations.push(format!(
                    "tag (D={}, L={}) holds {} and {} with no case relation",
                    tag.d, tag.l, values[0], values[1]
                )),
            },
            k => violations.push(format!(
                "tag (D={}, L={}) holds {k} solutions",
                tag.d, tag.l
            )),
        }
        tags.push(TagSummary {
            tag: *tag,
            solutions: values,
            case,
        });
    }
    if doubled.len() > 1 {
        violations.push(format!("{} tags have two solutions", doubled.len()));
    }
    Ok(Lemma1Report { tags, violations })
}

/// Per-tag agreement between the search and the orbit of its seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCheck {
    pub tag: IdealPairTag,
    pub seed: Option<OrbitSeed>,
    pub mismatches: Vec<String>,
}

/// Seeds every tag (searching `j` up to the smallest `z` in its group, where
/// a representation is known to exist) and checks that each solution is the
/// predicted orbit element.
pub fn cross_check(inst: &Instance, sols: &[Solution]) -> Result<Vec<OrbitCheck>> {
    let grouping = group_by_association(sols, inst)?;
    let mut out = Vec::new();
    for (tag, group) in &grouping.groups {
        let values = distinct_values(group);
        let j_cap = values.iter().map(|s| s.z).min().unwrap_or(1);
        let mut mismatches = Vec::new();
        let seed = match minimal_pair_power(tag, inst, j_cap) {
            Ok(seed) => Some(seed),
            Err(Error::NotFound { .. }) => {
                mismatches.push(format!(
                    "no seed for (D={}, L={}) with j <= {j_cap}",
                    tag.d, tag.l
                ));
                None
            }
            Err(e) => return Err(e),
        };
        if let Some(seed) = &seed {
            for s in &values {
                if s.z % seed.j != 0 {
                    mismatches.push(format!("{s}: z not a multiple of j={}", seed.j));
                    continue;
                }
                match predicted_solution(seed, s.z / seed.j) {
                    Ok(p) if p == *s => {}
                    Ok(p) => mismatches.push(format!("{s}: orbit predicts {p}")),
                    Err(e) => mismatches.push(format!("{s}: {e}")),
                }
            }
        }
        out.push(OrbitCheck {
            tag: *tag,
            seed,
            mismatches,
        });
    }
    Ok(out)
}

/// Signed `u` as `i64` when it fits; handy for printing small seeds.
pub fn seed_u_i64(seed: &OrbitSeed) -> Option<i64> {
    seed.u.to_i64()
}
