//! Known two-base double solutions: the infinite families, the sporadic
//! ones, the pairing construction, and the primality scan of
//! `(2^{p^{t+1}} - 1)/(2^{p^t} - 1)`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::modmath;
use crate::search::{distinct_values, enumerate_solutions, SumTriple};

/// One listed identity `d1^x1 d2^x2 + d1^y1 d2^y2 = c^z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Listed {
    pub x: [u32; 2],
    pub y: [u32; 2],
    pub z: u32,
}

const fn listed(x: [u32; 2], y: [u32; 2], z: u32) -> Listed {
    Listed { x, y, z }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// `(k, (k^m-1)/(k-1), (k^{m+1}-1)/(k-1))`
    F1,
    /// `(2, 2^r+1, 2^{r+1}+1)`
    F2,
    /// `(2, 2^r-1, 2^r+1)`
    F3,
    /// `(2, 2^r+1, 2^{2r+1}+2^{r+1}+1)`
    F4Plus,
    /// `(2, 2^r-1, 2^{2r+1}-2^{r+1}+1)`
    F4Minus,
    /// `(2^r-1, 2^r+1, 2)`
    F5,
    /// `(2^{g-1}-1, 2, 2^g-1)`, three solutions.
    G,
    /// `F2` with `r` even and `2` replaced by `4`.
    F2Four,
    /// `G` with `g` odd and `2` replaced by `4`.
    GFour,
}

impl FamilyId {
    pub const ALL: [FamilyId; 9] = [
        FamilyId::F1,
        FamilyId::F2,
        FamilyId::F3,
        FamilyId::F4Plus,
        FamilyId::F4Minus,
        FamilyId::F5,
        FamilyId::G,
        FamilyId::F2Four,
        FamilyId::GFour,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::F1 => "F1",
            FamilyId::F2 => "F2",
            FamilyId::F3 => "F3",
            FamilyId::F4Plus => "F4+",
            FamilyId::F4Minus => "F4-",
            FamilyId::F5 => "F5",
            FamilyId::G => "G",
            FamilyId::F2Four => "F2/4",
            FamilyId::GFour => "G/4",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyId> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Family parameters: `(k, m)` for `F1`, `r` or `g` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyParam {
    Km(u64, u32),
    R(u32),
    G(u32),
}

impl fmt::Display for FamilyParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyParam::Km(k, m) => write!(f, "k={k} m={m}"),
            FamilyParam::R(r) => write!(f, "r={r}"),
            FamilyParam::G(g) => write!(f, "g={g}"),
        }
    }
}

/// A base pair with its listed solutions and their check results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: String,
    pub d: [u64; 2],
    pub c: u64,
    pub listed: Vec<Listed>,
    /// Value-level form of each listed identity, `A < B`.
    pub triples: Vec<SumTriple>,
    /// Every listed identity holds exactly and respects the support rule.
    pub arithmetic_ok: bool,
    /// Listed triples found by a search to twice the largest listed depth;
    /// `None` when the search was not run.
    pub search_ok: Option<bool>,
    /// Distinct values that search found.
    pub search_count: Option<usize>,
}

impl CatalogEntry {
    fn build(label: String, d: [u64; 2], c: u64, listed: Vec<Listed>) -> Self {
        let mut arithmetic_ok = true;
        let mut triples = Vec::new();
        for l in &listed {
            let a = power_product(&d, &l.x);
            let b = power_product(&d, &l.y);
            let support = (0..2).all(|i| l.x[i].min(l.y[i]) == 0 && l.x[i].max(l.y[i]) > 0);
            arithmetic_ok &= support && &a + &b == BigUint::from(c).pow(l.z) && a.gcd(&b).is_one();
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            triples.push(SumTriple { a, b, z: l.z });
        }
        CatalogEntry {
            label,
            d,
            c,
            listed,
            triples,
            arithmetic_ok,
            search_ok: None,
            search_count: None,
        }
    }

    /// Re-runs the search to depth `2 * max z` and checks every listed triple
    /// turns up.
    pub fn confirm_by_search(&mut self) -> Result<()> {
        let z_max = 2 * self.listed.iter().map(|l| l.z).max().unwrap_or(1);
        let inst = Instance::new(self.c, self.d.to_vec())?.with_depth(z_max)?;
        let found = distinct_values(&enumerate_solutions(&inst)?);
        self.search_ok = Some(self.triples.iter().all(|t| found.contains(t)));
        self.search_count = Some(found.len());
        Ok(())
    }

    pub fn ok(&self) -> bool {
        self.arithmetic_ok && self.search_ok != Some(false)
    }

    /// Each identity rendered as `"2^2 + 3 = 7^1"`.
    pub fn identities(&self) -> Vec<String> {
        self.listed
            .iter()
            .map(|l| {
                let term = |e: &[u32; 2]| -> String {
                    let parts: Vec<String> = (0..2)
                        .filter(|&i| e[i] > 0)
                        .map(|i| {
                            if e[i] == 1 {
                                self.d[i].to_string()
                            } else {
                                format!("{}^{}", self.d[i], e[i])
                            }
                        })
                        .collect();
                    if parts.is_empty() {
                        "1".into()
                    } else {
                        parts.join("*")
                    }
                };
                format!("{} + {} = {}^{}", term(&l.x), term(&l.y), self.c, l.z)
            })
            .collect()
    }
}

fn power_product(d: &[u64; 2], e: &[u32; 2]) -> BigUint {
    BigUint::from(d[0]).pow(e[0]) * BigUint::from(d[1]).pow(e[1])
}

fn pow2(e: u32) -> Result<u64> {
    1u64.checked_shl(e)
        .filter(|_| e < 63)
        .ok_or_else(|| Error::ParamOutOfRange(format!("2^{e} does not fit")))
}

fn overflow(what: &str) -> Error {
    Error::ParamOutOfRange(format!("{what} does not fit in 64 bits"))
}

/// `(k^m - 1)/(k - 1)`.
fn repunit(k: u64, m: u32) -> Result<u64> {
    let mut acc = 0u64;
    for _ in 0..m {
        acc = acc
            .checked_mul(k)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| overflow("repunit"))?;
    }
    Ok(acc)
}

/// The family member at `param`, with its listed solutions.
pub fn family_entry(id: FamilyId, param: FamilyParam) -> Result<CatalogEntry> {
    let bad = || Error::ParamOutOfRange(format!("{param} is outside the range of family {id}"));
    let (d, c, listed) = match (id, param) {
        (FamilyId::F1, FamilyParam::Km(k, m)) => {
            if k < 2 || m < 2 {
                return Err(bad());
            }
            let d2 = repunit(k, m)?;
            let c = repunit(k, m + 1)?;
            // k^m + d2 = c, k*d2 + 1 = c
            (
                [k, d2],
                c,
                vec![listed([m, 0], [0, 1], 1), listed([0, 0], [1, 1], 1)],
            )
        }
        (FamilyId::F2, FamilyParam::R(r)) => {
            if r < 2 {
                return Err(bad());
            }
            let d2 = pow2(r)? + 1;
            let c = pow2(r + 1)? + 1;
            // 2^r + d2 = c, 2^{r+2} d2 + 1 = c^2
            (
                [2, d2],
                c,
                vec![listed([r, 0], [0, 1], 1), listed([0, 0], [r + 2, 1], 2)],
            )
        }
        (FamilyId::F3, FamilyParam::R(r)) => {
            if r < 2 {
                return Err(bad());
            }
            let d2 = pow2(r)? - 1;
            let c = pow2(r)? + 1;
            // 2 + d2 = c, 2^{r+2} + d2^2 = c^2
            (
                [2, d2],
                c,
                vec![listed([1, 0], [0, 1], 1), listed([r + 2, 0], [0, 2], 2)],
            )
        }
        (FamilyId::F4Plus | FamilyId::F4Minus, FamilyParam::R(r)) => {
            let plus = id == FamilyId::F4Plus;
            if r < 1 || (!plus && r < 2) {
                return Err(bad());
            }
            let d2 = if plus { pow2(r)? + 1 } else { pow2(r)? - 1 };
            let base = pow2(2 * r + 1)?
                .checked_add(1)
                .ok_or_else(|| overflow("c"))?;
            let c = if plus {
                base + pow2(r + 1)?
            } else {
                base - pow2(r + 1)?
            };
            // 2^{2r} + d2^2 = c, 2^{r+1} d2 + 1 = c
            (
                [2, d2],
                c,
                vec![listed([2 * r, 0], [0, 2], 1), listed([0, 0], [r + 1, 1], 1)],
            )
        }
        (FamilyId::F5, FamilyParam::R(r)) => {
            if r < 2 {
                return Err(bad());
            }
            let p = pow2(r)?;
            // d1 + d2 = 2^{r+1}, d1 d2 + 1 = 2^{2r}
            (
                [p - 1, p + 1],
                2,
                vec![listed([1, 0], [0, 1], r + 1), listed([0, 0], [1, 1], 2 * r)],
            )
        }
        (FamilyId::G, FamilyParam::G(g)) => {
            if g < 3 {
                return Err(bad());
            }
            let d1 = pow2(g - 1)? - 1;
            let c = pow2(g)? - 1;
            // d1 + 2^{g-1} = c, 1 + 2 d1 = c, 1 + 2^{g+1} d1 = c^2
            (
                [d1, 2],
                c,
                vec![
                    listed([1, 0], [0, g - 1], 1),
                    listed([0, 0], [1, 1], 1),
                    listed([0, 0], [1, g + 1], 2),
                ],
            )
        }
        (FamilyId::F2Four, FamilyParam::R(r)) => {
            if r < 2 || r % 2 == 1 {
                return Err(bad());
            }
            let d2 = pow2(r)? + 1;
            let c = pow2(r + 1)? + 1;
            (
                [4, d2],
                c,
                vec![
                    listed([r / 2, 0], [0, 1], 1),
                    listed([0, 0], [r / 2 + 1, 1], 2),
                ],
            )
        }
        (FamilyId::GFour, FamilyParam::G(g)) => {
            if g < 3 || g % 2 == 0 {
                return Err(bad());
            }
            let d1 = pow2(g - 1)? - 1;
            let c = pow2(g)? - 1;
            (
                [d1, 4],
                c,
                vec![
                    listed([1, 0], [0, (g - 1) / 2], 1),
                    listed([0, 0], [1, g.div_ceil(2)], 2),
                ],
            )
        }
        _ => return Err(bad()),
    };
    Ok(CatalogEntry::build(format!("{id} {param}"), d, c, listed))
}

/// Parameter bounds for [`family_instances`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyRange {
    pub k_max: u64,
    pub m_max: u32,
    pub r_max: u32,
    pub g_max: u32,
}

impl Default for FamilyRange {
    fn default() -> Self {
        FamilyRange {
            k_max: 6,
            m_max: 6,
            r_max: 8,
            g_max: 8,
        }
    }
}

/// Every member of `id` inside `range`, in parameter order.
pub fn family_instances(id: FamilyId, range: &FamilyRange) -> Result<Vec<CatalogEntry>> {
    let params: Vec<FamilyParam> = match id {
        FamilyId::F1 => (2..=range.k_max)
            .flat_map(|k| (2..=range.m_max).map(move |m| FamilyParam::Km(k, m)))
            .collect(),
        FamilyId::F4Plus => (1..=range.r_max).map(FamilyParam::R).collect(),
        FamilyId::F2 | FamilyId::F3 | FamilyId::F4Minus | FamilyId::F5 => {
            (2..=range.r_max).map(FamilyParam::R).collect()
        }
        FamilyId::F2Four => (2..=range.r_max)
            .filter(|r| r % 2 == 0)
            .map(FamilyParam::R)
            .collect(),
        FamilyId::G => (3..=range.g_max).map(FamilyParam::G).collect(),
        FamilyId::GFour => (3..=range.g_max)
            .filter(|g| g % 2 == 1)
            .map(FamilyParam::G)
            .collect(),
    };
    params.into_iter().map(|p| family_entry(id, p)).collect()
}

/// Sporadic double solutions, each `(d1, d2, c)` with its two identities.
const ANOMALOUS: [([u64; 2], u64, [Listed; 2]); 14] = [
    // 3 + 13 = 2^4, 3^5 + 13 = 2^8
    (
        [3, 13],
        2,
        [listed([1, 0], [0, 1], 4), listed([5, 0], [0, 1], 8)],
    ),
    // 2 + 89 = 91, 2^13 + 89 = 91^2
    (
        [2, 89],
        91,
        [listed([1, 0], [0, 1], 1), listed([13, 0], [0, 1], 2)],
    ),
    // 3 + 10 = 13, 3^7 + 10 = 13^3
    (
        [3, 10],
        13,
        [listed([1, 0], [0, 1], 1), listed([7, 0], [0, 1], 3)],
    ),
    // 2^8 + 3 = 2^4 + 3^5 = 259
    (
        [2, 3],
        259,
        [listed([8, 0], [0, 1], 1), listed([4, 0], [0, 5], 1)],
    ),
    // 2 + 91^2 = 2^13 + 91 = 8283
    (
        [2, 91],
        8283,
        [listed([1, 0], [0, 2], 1), listed([13, 0], [0, 1], 1)],
    ),
    // 3 + 13^3 = 3^7 + 13 = 2200
    (
        [3, 13],
        2200,
        [listed([1, 0], [0, 3], 1), listed([7, 0], [0, 1], 1)],
    ),
    // 2 + 3^2 = 2^3 + 3 = 11
    (
        [2, 3],
        11,
        [listed([1, 0], [0, 2], 1), listed([3, 0], [0, 1], 1)],
    ),
    // 2^3 + 3^3 = 2^5 + 3 = 35
    (
        [2, 3],
        35,
        [listed([3, 0], [0, 3], 1), listed([5, 0], [0, 1], 1)],
    ),
    // 2^3 + 5^3 = 2^7 + 5 = 133
    (
        [2, 5],
        133,
        [listed([3, 0], [0, 3], 1), listed([7, 0], [0, 1], 1)],
    ),
    // 5^5 + 11 = 56^2, 5*11 + 1 = 56
    (
        [5, 11],
        56,
        [listed([5, 0], [0, 1], 2), listed([0, 0], [1, 1], 1)],
    ),
    // 5^6 + 56 = 5*56^2 + 1 = 15681
    (
        [5, 56],
        15681,
        [listed([6, 0], [0, 1], 1), listed([0, 0], [1, 2], 1)],
    ),
    // 2^4 + 11 = 3^3, 2*11^2 + 1 = 3^5
    (
        [2, 11],
        3,
        [listed([4, 0], [0, 1], 3), listed([0, 0], [1, 2], 5)],
    ),
    // 8^2 + 35 = 99, 8*35^2 + 1 = 99^2
    (
        [8, 35],
        99,
        [listed([2, 0], [0, 1], 1), listed([0, 0], [1, 2], 2)],
    ),
    // 10^5 + 41^3 = 411^2, 10*41 + 1 = 411
    (
        [10, 41],
        411,
        [listed([5, 0], [0, 3], 2), listed([0, 0], [1, 1], 1)],
    ),
];

/// The fixed list of sporadic double solutions, each re-checked exactly.
pub fn anomalous_catalog() -> Vec<CatalogEntry> {
    ANOMALOUS
        .iter()
        .map(|&(d, c, l)| {
            CatalogEntry::build(format!("({},{},{})", d[0], d[1], c), d, c, l.to_vec())
        })
        .collect()
}

/// From `a^q b + 1 = c^r` and `a^s + b = c^t`, the new double solution
/// `(a, c, c^r + a^{s+q})` with `a^q c^t + 1 = a^{s+q} + c^r`.
pub fn pair_transform(
    a: u64,
    b: u64,
    c: u64,
    q: u32,
    r: u32,
    s: u32,
    t: u32,
) -> Result<CatalogEntry> {
    let (ab, bb, cb) = (BigUint::from(a), BigUint::from(b), BigUint::from(c));
    let first = ab.pow(q) * &bb + 1u32 == cb.pow(r);
    let second = ab.pow(s) + &bb == cb.pow(t);
    if !first || !second {
        return Err(Error::PremiseFails(format!(
            "need {a}^{q}*{b} + 1 = {c}^{r} and {a}^{s} + {b} = {c}^{t}"
        )));
    }
    let new_c = cb.pow(r) + ab.pow(s + q);
    let new_c = u64::try_from(new_c).map_err(|e| Error::Overflow(e.to_string()))?;
    let entry = CatalogEntry::build(
        format!("({a},{b},{c}) q={q} r={r} s={s} t={t}"),
        [a, c],
        new_c,
        vec![listed([0, 0], [q, t], 1), listed([s + q, 0], [0, r], 1)],
    );
    Ok(entry)
}

/// The pairing inputs quoted alongside the construction.
pub const PAIRING_EXAMPLES: [(u64, u64, u64, u32, u32, u32, u32); 4] = [
    (5, 11, 56, 1, 1, 5, 2),
    (2, 1, 3, 1, 1, 3, 2),
    (3, 5, 2, 1, 4, 3, 5),
    (5, 3, 2, 1, 4, 3, 7),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Prime,
    /// With the least prime factor when one was found by trial division.
    Composite(Option<u64>),
    /// Larger than the digit limit; not computed.
    Skipped,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Prime => "prime",
            Verdict::Composite(_) => "composite",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MersenneQuotient {
    pub p: u64,
    pub t: u32,
    /// `None` when skipped.
    pub value: Option<BigUint>,
    /// Exact when computed, otherwise estimated from the bit length.
    pub digits: u64,
    pub verdict: Verdict,
}

/// Trial division bound used to exhibit a factor of a composite quotient.
pub const TRIAL_FACTOR_LIMIT: u64 = 100_000;

fn small_primes(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| modmath::is_prime_u64(n)).collect()
}

/// `(2^{p^{t+1}} - 1)/(2^{p^t} - 1)` for one `(p, t)`.
pub fn mersenne_quotient(p: u64, t: u32, digit_limit: u64) -> Result<MersenneQuotient> {
    mersenne_quotient_with(p, t, digit_limit, &small_primes(TRIAL_FACTOR_LIMIT))
}

fn mersenne_quotient_with(
    p: u64,
    t: u32,
    digit_limit: u64,
    primes: &[u64],
) -> Result<MersenneQuotient> {
    if !modmath::is_prime_u64(p) {
        return Err(Error::ParamOutOfRange(format!("{p} is not prime")));
    }
    if t < 1 {
        return Err(Error::ParamOutOfRange("t must be positive".into()));
    }
    let inner = p
        .checked_pow(t)
        .filter(|&e| e <= u32::MAX as u64 / p)
        .ok_or_else(|| Error::ParamOutOfRange(format!("{p}^{} is too large", t + 1)))?;
    // the quotient lies in [2^e, 2^{e+1}) with e = (p - 1) p^t
    let bits = (p - 1) * inner;
    let estimate = (bits as f64 * std::f64::consts::LOG10_2).floor() as u64 + 1;
    if estimate > digit_limit {
        return Ok(MersenneQuotient {
            p,
            t,
            value: None,
            digits: estimate,
            verdict: Verdict::Skipped,
        });
    }
    let one = BigUint::one();
    let numerator = (&one << (inner * p)) - &one;
    let denominator = (&one << inner) - &one;
    let (value, rem) = numerator.div_rem(&denominator);
    debug_assert!(rem.is_zero());
    let digits = value.to_string().len() as u64;
    let verdict = if modmath::is_probable_prime(&value) {
        Verdict::Prime
    } else {
        let factor = primes
            .iter()
            .copied()
            .find(|&q| BigUint::from(q) < value && (&value % q).is_zero());
        Verdict::Composite(factor)
    };
    Ok(MersenneQuotient {
        p,
        t,
        value: Some(value),
        digits,
        verdict,
    })
}

/// Scans every `(p, t)` with `p` in `p_list` and `1 <= t <= t_max`, sorted by
/// `(p, t)`. Quotients over `digit_limit` digits are skipped.
pub fn mersenne_quotient_scan(
    p_list: &[u64],
    t_max: u32,
    digit_limit: u64,
) -> Result<Vec<MersenneQuotient>> {
    let primes = small_primes(TRIAL_FACTOR_LIMIT);
    let mut keys: Vec<(u64, u32)> = p_list
        .iter()
        .flat_map(|&p| (1..=t_max).map(move |t| (p, t)))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.par_iter()
        .map(|&(p, t)| mersenne_quotient_with(p, t, digit_limit, &primes))
        .collect()
}

/// Checks `(2^{p^t} - 1) * value = 2^{p^{t+1}} - 1` for a computed quotient.
pub fn quotient_identity_holds(m: &MersenneQuotient) -> bool {
    let Some(value) = &m.value else {
        return true;
    };
    let inner = m.p.pow(m.t);
    let one = BigUint::one();
    ((&one << inner) - &one) * value == (&one << (inner * m.p)) - &one
}
