//! Bounded verification of the counting results.
//!
//! Every report is a statement about solutions with `z <= z_max`; nothing here
//! proves anything beyond the searched depth.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::classify::group_by_association;
use crate::error::{Error, Result};
use crate::grouplat::{self, LatticeInvariants};
use crate::instance::Instance;
use crate::modmath;
use crate::orbits::{self, case_pair, CaseKind, TagSummary};
use crate::search::{
    distinct_values, enumerate_solutions, two_power_search, SumTriple, TwoTermProblem,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub claim: String,
    pub instance: String,
    /// Value-level count `N`.
    pub observed: u64,
    /// Exponent-level count, reported when it is meaningful.
    pub n1: Option<u64>,
    pub bound: u64,
    pub ok: bool,
    pub witnesses: Vec<SumTriple>,
    pub exception: Option<String>,
    pub depth: u32,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(
        claim: &str,
        instance: String,
        depth: u32,
        witnesses: Vec<SumTriple>,
        bound: u64,
    ) -> Self {
        let observed = witnesses.len() as u64;
        VerificationReport {
            claim: claim.into(),
            instance,
            observed,
            n1: None,
            bound,
            ok: observed <= bound,
            witnesses,
            exception: None,
            depth,
            notes: Vec::new(),
        }
    }
}

fn solve_values(inst: &Instance) -> Result<(Vec<SumTriple>, usize)> {
    let sols = enumerate_solutions(inst)?;
    Ok((distinct_values(&sols), sols.len()))
}

/// `N <= 2^(n-1) + 1`, and the same for `N_1` when the bases are
/// multiplicatively independent.
pub fn theorem1(inst: &Instance) -> Result<VerificationReport> {
    inst.require_odd()?;
    let (values, tuples) = solve_values(inst)?;
    let bound = (1u64 << (inst.n() - 1)) + 1;
    let mut rep = VerificationReport::new("theorem1", inst.to_string(), inst.z_max, values, bound);
    if modmath::multiplicatively_independent(&inst.d)? {
        rep.n1 = Some(tuples as u64);
        rep.ok &= tuples as u64 <= bound;
    } else {
        rep.notes
            .push(format!("bases are dependent; {tuples} exponent tuples"));
    }
    Ok(rep)
}

/// `p*q` as an integer bound, `0` when the congruence is unsolvable.
fn pq_value(inv: &LatticeInvariants) -> u64 {
    if !inv.solvable {
        return 0;
    }
    (inv.q * inv.p).to_integer()
}

/// `N <= pq + 1`, where the `+1` may only be used by a Case 1 or Case 2 pair.
pub fn pq_bound(inst: &Instance) -> Result<VerificationReport> {
    let inv = grouplat::invariants(inst)?;
    let (values, _) = solve_values(inst)?;
    Ok(pq_bound_from(inst, &inv, values))
}

fn pq_bound_from(
    inst: &Instance,
    inv: &LatticeInvariants,
    values: Vec<SumTriple>,
) -> VerificationReport {
    let pq = pq_value(inv);
    let pair = case_pair(&values);
    let mut rep = VerificationReport::new("pq_bound", inst.to_string(), inst.z_max, values, pq + 1);
    rep.notes.push(format!("p={} q={} pq={pq}", inv.p, inv.q));
    if let Some((s, partner, kind)) = &pair {
        rep.exception = Some(format!("{}: {s} -> {partner}", kind.label()));
    }
    if rep.observed == pq + 1 && pair.is_none() {
        rep.ok = false;
        rep.notes.push("N = pq + 1 without a case pair".into());
    }
    rep
}

/// Label of the exceptional triple matching `(d1, d2, c)` after ordering the
/// bases so that `d1 > d2`.
pub fn theorem2_exception(d1: u64, d2: u64, c: u64) -> Option<String> {
    let (hi, lo) = (d1.max(d2), d1.min(d2));
    if (hi, lo, c) == (3, 2, 5) || (hi, lo, c) == (5, 2, 3) {
        return Some(format!("({hi},{lo},{c})"));
    }
    let g = (c + 1).trailing_zeros();
    if lo == 2 && (c + 1).is_power_of_two() && g > 2 && hi == (1u64 << (g - 1)) - 1 {
        return Some(format!("(2^{{g-1}}-1,2,2^g-1) g={g}"));
    }
    None
}

/// For two bases, `N <= 2` outside the exceptional triples, which allow 3.
pub fn theorem2(inst: &Instance) -> Result<VerificationReport> {
    inst.require_odd()?;
    if inst.n() != 2 {
        return Err(Error::ParamOutOfRange(format!(
            "need exactly two bases, got {}",
            inst.n()
        )));
    }
    let (values, _) = solve_values(inst)?;
    Ok(theorem2_from(inst, values))
}

fn theorem2_from(inst: &Instance, values: Vec<SumTriple>) -> VerificationReport {
    let exception = theorem2_exception(inst.d[0], inst.d[1], inst.c);
    let bound = if exception.is_some() { 3 } else { 2 };
    let mut rep = VerificationReport::new("theorem2", inst.to_string(), inst.z_max, values, bound);
    rep.exception = exception;
    rep
}

/// Per-tag multiplicities: one doubled tag at most, and only through a case
/// pair. `observed` counts doubled tags.
pub fn lemma1(inst: &Instance) -> Result<VerificationReport> {
    let sols = enumerate_solutions(inst)?;
    let report = orbits::verify_lemma1(inst, &sols)?;
    let values = distinct_values(&sols);
    let doubled = report.tags.iter().filter(|t| t.solutions.len() > 1).count() as u64;
    let mut rep = VerificationReport::new("lemma1", inst.to_string(), inst.z_max, values, 1);
    rep.observed = doubled;
    rep.ok = report.ok();
    for t in &report.tags {
        if t.case != CaseKind::None {
            rep.exception = Some(t.case.label());
        }
        let sols: Vec<String> = t.solutions.iter().map(ToString::to_string).collect();
        rep.notes
            .push(format!("D={} L={}: {}", t.tag.d, t.tag.l, sols.join(" ")));
    }
    rep.notes.extend(report.violations);
    Ok(rep)
}

/// `r*X + s*Y = c^z` has at most `2^n + 1` solutions.
pub fn lemma3(inst: &Instance) -> Result<VerificationReport> {
    inst.require_odd()?;
    let (values, _) = solve_values(inst)?;
    let bound = (1u64 << inst.n()) + 1;
    Ok(VerificationReport::new(
        "lemma3",
        inst.to_string(),
        inst.z_max,
        values,
        bound,
    ))
}

fn power_of_three(v: &BigUint) -> Option<u32> {
    let mut v = v.clone();
    let mut k = 0;
    while v > BigUint::one() {
        let (q, r) = v.div_rem(&BigUint::from(3u32));
        if r != BigUint::ZERO {
            return None;
        }
        v = q;
        k += 1;
    }
    Some(k)
}

/// `{small, big} = {3(3^{nu-1}-1)/8, (3^{nu+1}-1)/8}` with `nu > 1` odd.
fn corollary1_shape(small: &BigUint, big: &BigUint) -> Option<u32> {
    let hi = power_of_three(&(big * 8u32 + 1u32))?;
    let lo = power_of_three(&(small * 8u32 + 3u32))?;
    (hi == lo + 1 && lo > 1 && lo % 2 == 1).then_some(lo)
}

/// At most 4 solutions, or 5 when one of them has the 3-power shape.
pub fn corollary1(prob: &TwoTermProblem) -> Result<VerificationReport> {
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
    if c % 2 == 0 {
        return Err(Error::EvenModulus(c));
    }
    let sols = two_power_search(prob)?;
    let mut exception = None;
    let mut witnesses = Vec::new();
    for &(x, y, z) in &sols {
        let t1 = BigUint::from(a).pow(x) * r;
        let t2 = BigUint::from(b).pow(y) * s;
        let (small, big) = if t1 < t2 { (&t1, &t2) } else { (&t2, &t1) };
        if a == 3 || b == 3 {
            if let Some(nu) = corollary1_shape(small, big) {
                exception = Some(format!("3-power shape nu={nu} at (x,y,z)=({x},{y},{z})"));
            }
        }
        witnesses.push(SumTriple { a: t1, b: t2, z });
    }
    let bound = if exception.is_some() { 5 } else { 4 };
    let instance = format!("r={r} s={s} a={a} b={b} c={c} x<={x_max} y<={y_max}");
    let mut rep = VerificationReport::new("corollary1", instance, z_max, witnesses, bound);
    rep.exception = exception;
    rep.notes = sols
        .iter()
        .map(|(x, y, z)| format!("(x,y,z)=({x},{y},{z})"))
        .collect();
    Ok(rep)
}

/// Every `R`-smooth value below `limit`, ascending.
fn smooth_below(primes: &[u64], limit: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for &p in primes {
        let mut next = Vec::new();
        for v in &out {
            let mut w = v.clone();
            while &w < limit {
                next.push(w.clone());
                w *= p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn is_smooth(v: &BigUint, primes: &[u64]) -> bool {
    let mut v = v.clone();
    for &p in primes {
        while (&v % p) == BigUint::ZERO {
            v /= p;
        }
    }
    v.is_one()
}

/// `A + B = c^z`, `A < B`, `AB` composed of primes from `R`. Counted directly
/// over smooth values, then again as a sum over the nonempty subsets of `R`
/// of the exact-support counts; the two must agree.
pub fn corollary2(primes: &[u64], c: u64, z_max: u32) -> Result<VerificationReport> {
    if c.is_multiple_of(2) {
        return Err(Error::EvenModulus(c));
    }
    if z_max < 1 {
        return Err(Error::DepthInvalid(z_max));
    }
    let mut r: Vec<u64> = primes.to_vec();
    r.sort_unstable();
    r.dedup();
    if r.is_empty() || r.len() > 16 {
        return Err(Error::ParamOutOfRange(
            "need between 1 and 16 primes".into(),
        ));
    }
    for &p in &r {
        if !modmath::is_prime_u64(p) {
            return Err(Error::ParamOutOfRange(format!("{p} is not prime")));
        }
        if c.is_multiple_of(p) {
            return Err(Error::not_coprime(p, c));
        }
    }
    let w = r.len() as u32;
    let bound = 3u64.pow(w - 1) + 2u64.pow(w - 1);

    let mut direct = Vec::new();
    let top = BigUint::from(c).pow(z_max);
    let half = &top / 2u32 + 1u32;
    let smooth = smooth_below(&r, &half);
    for z in 1..=z_max {
        let cz = BigUint::from(c).pow(z);
        for a in &smooth {
            if a * 2u32 >= cz {
                break;
            }
            let b = &cz - a;
            if is_smooth(&b, &r) {
                direct.push(SumTriple { a: a.clone(), b, z });
            }
        }
    }
    direct.sort_by(|x, y| (x.z, &x.a, &x.b).cmp(&(y.z, &y.a, &y.b)));

    let mut by_subset = BTreeSet::new();
    let mut notes = Vec::new();
    for mask in 1u32..(1 << w) {
        let subset: Vec<u64> = (0..w as usize)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| r[i])
            .collect();
        let inst = Instance::new(c, subset.clone())?.with_depth(z_max)?;
        let values = distinct_values(&enumerate_solutions(&inst)?);
        if !values.is_empty() {
            let s: Vec<String> = subset.iter().map(u64::to_string).collect();
            notes.push(format!("subset {{{}}}: {}", s.join(","), values.len()));
        }
        by_subset.extend(values);
    }
    let agree = by_subset.len() == direct.len() && direct.iter().all(|v| by_subset.contains(v));
    let rs: Vec<String> = r.iter().map(u64::to_string).collect();
    let instance = format!("R={{{}}} c={c} z_max={z_max}", rs.join(","));
    let mut rep = VerificationReport::new("corollary2", instance, z_max, direct, bound);
    if !agree {
        rep.ok = false;
        notes.push(format!("subset decomposition counts {}", by_subset.len()));
    }
    rep.notes = notes;
    Ok(rep)
}

/// Everything the sweep checks for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceAudit {
    pub instance: Instance,
    pub values: Vec<SumTriple>,
    pub p: u64,
    pub q: String,
    pub pq: u64,
    pub case_pair: Option<CaseKind>,
    pub theorem1_ok: bool,
    pub pq_bound_ok: bool,
    /// `None` unless the instance has exactly two bases.
    pub theorem2: Option<VerificationReport>,
    pub lemma1_violations: Vec<String>,
    /// Tags carrying more than one solution.
    pub doubled: Vec<TagSummary>,
    pub orbit_mismatches: Vec<String>,
    pub lemma2_violations: Vec<String>,
}

impl InstanceAudit {
    pub fn ok(&self) -> bool {
        self.theorem1_ok
            && self.pq_bound_ok
            && self.theorem2.as_ref().is_none_or(|r| r.ok)
            && self.lemma1_violations.is_empty()
            && self.orbit_mismatches.is_empty()
            && self.lemma2_violations.is_empty()
    }

    /// One line per failed check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.theorem1_ok {
            out.push(format!("theorem1: N={}", self.values.len()));
        }
        if !self.pq_bound_ok {
            out.push(format!("pq_bound: N={} pq={}", self.values.len(), self.pq));
        }
        if let Some(r) = self.theorem2.as_ref().filter(|r| !r.ok) {
            out.push(format!("theorem2: N={} bound={}", r.observed, r.bound));
        }
        out.extend(
            self.lemma1_violations
                .iter()
                .map(|v| format!("lemma1: {v}")),
        );
        out.extend(self.orbit_mismatches.iter().map(|v| format!("orbits: {v}")));
        out.extend(
            self.lemma2_violations
                .iter()
                .map(|v| format!("lemma2: {v}")),
        );
        out
    }
}

/// Runs every instance-level check on one instance (odd `c`).
pub fn audit(inst: &Instance) -> Result<InstanceAudit> {
    inst.require_odd()?;
    let sols = enumerate_solutions(inst)?;
    let values = distinct_values(&sols);
    let inv = grouplat::invariants(inst)?;
    let pq = pq_value(&inv);

    let t1_bound = (1u64 << (inst.n() - 1)) + 1;
    let t1 = values.len() as u64 <= t1_bound
        && (!modmath::multiplicatively_independent(&inst.d)? || sols.len() as u64 <= t1_bound);
    let pqb = pq_bound_from(inst, &inv, values.clone());
    let theorem2 = (inst.n() == 2).then(|| theorem2_from(inst, values.clone()));
    let lemma1 = orbits::verify_lemma1(inst, &sols)?;
    let orbit_mismatches = orbits::cross_check(inst, &sols)?
        .into_iter()
        .flat_map(|c| c.mismatches)
        .collect();

    let grouping = group_by_association(&sols, inst)?;
    let mut lemma2_violations = Vec::new();
    for (parity, tags) in grouping.tags_per_parity() {
        if num_rational::Ratio::from_integer(tags.len() as u64) > inv.q {
            lemma2_violations.push(format!(
                "parity {parity:?} carries {} tags, q = {}",
                tags.len(),
                inv.q
            ));
        }
    }

    Ok(InstanceAudit {
        instance: inst.clone(),
        p: inv.p,
        q: inv.q.to_string(),
        pq,
        case_pair: case_pair(&values).map(|(_, _, k)| k),
        theorem1_ok: t1,
        pq_bound_ok: pqb.ok,
        theorem2,
        doubled: lemma1
            .tags
            .into_iter()
            .filter(|t| t.solutions.len() > 1)
            .collect(),
        lemma1_violations: lemma1.violations,
        orbit_mismatches,
        lemma2_violations,
        values,
    })
}

/// Instance family for a sweep: bases `d_1 > ... > d_n >= 2` up to `d_max`,
/// odd `3 <= c <= c_max` coprime to every base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub n: usize,
    pub d_max: u64,
    pub c_max: u64,
    pub z_max: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: 2,
            d_max: 20,
            c_max: 99,
            z_max: 10,
        }
    }
}

fn descending_tuples(n: usize, hi: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if prefix.len() == n {
        out.push(prefix.clone());
        return;
    }
    let need = (n - prefix.len()) as u64;
    for d in (2..=hi).rev() {
        if d < need + 1 {
            break;
        }
        prefix.push(d);
        descending_tuples(n, d - 1, prefix, out);
        prefix.pop();
    }
}

/// Instances of the sweep in a fixed order: by `c`, then by bases descending
/// lexicographically.
pub fn sweep_instances(cfg: &SweepConfig) -> Result<Vec<Instance>> {
    if cfg.n < 1 || cfg.n > 6 {
        return Err(Error::ParamOutOfRange(format!(
            "sweep arity {} outside 1..=6",
            cfg.n
        )));
    }
    let mut tuples = Vec::new();
    descending_tuples(cfg.n, cfg.d_max, &mut Vec::new(), &mut tuples);
    let mut out = Vec::new();
    for c in (3..=cfg.c_max).step_by(2) {
        for d in &tuples {
            if d.iter().all(|&x| x.gcd(&c) == 1) {
                out.push(Instance {
                    c,
                    d: d.clone(),
                    z_max: cfg.z_max,
                    r: 1,
                    s: 1,
                });
            }
        }
    }
    Ok(out)
}

/// Audits every sweep instance on the rayon pool; output order matches
/// [`sweep_instances`].
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<InstanceAudit>> {
    let instances = sweep_instances(cfg)?;
    instances.par_iter().map(audit).collect()
}

/// Small helper for callers comparing against machine integers.
pub fn values_u64(values: &[SumTriple]) -> Vec<(u64, u64, u32)> {
    values
        .iter()
        .filter_map(|t| Some((t.a.to_u64()?, t.b.to_u64()?, t.z)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(c: u64, d: &[u64], z: u32) -> Instance {
        Instance::new(c, d.to_vec()).unwrap().with_depth(z).unwrap()
    }

    #[test]
    fn theorem1_examples() {
        for (i, n, b) in [
            (inst(5, &[3, 2], 8), 3, 3),
            (inst(13, &[10, 3], 9), 2, 3),
            (inst(3, &[2], 10), 2, 2),
        ] {
            let r = theorem1(&i).unwrap();
            assert_eq!((r.observed, r.bound, r.ok), (n, b, true), "{i}");
            assert_eq!(r.n1, Some(n));
        }
    }

    #[test]
    fn pq_bound_examples() {
        let r = pq_bound(&inst(3, &[5, 2], 8)).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (3, 3, true));
        assert_eq!(r.exception.as_deref(), Some("case2: (4,5,2) -> (1,80,4)"));
        let r = pq_bound(&inst(13, &[10, 3], 10)).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (2, 3, true));
        let r = pq_bound(&inst(15, &[2], 10)).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (0, 1, true));
        assert_eq!(r.notes[0], "p=0 q=1 pq=0");
    }

    #[test]
    fn theorem2_examples() {
        let r = theorem2(&inst(7, &[3, 2], 10)).unwrap();
        assert_eq!(
            values_u64(&r.witnesses),
            vec![(1, 6, 1), (3, 4, 1), (1, 48, 2)]
        );
        assert_eq!((r.bound, r.ok), (3, true));
        assert!(r.exception.is_some());
        let r = theorem2(&inst(3, &[5, 2], 10)).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (3, 3, true));
        let r = theorem2(&inst(13, &[10, 3], 10)).unwrap();
        assert_eq!(
            (r.observed, r.bound, r.ok, r.exception.clone()),
            (2, 2, true, None)
        );
        assert!(theorem2_exception(2, 3, 5).is_some());
        assert!(theorem2_exception(31, 2, 63).is_some());
        assert!(theorem2_exception(7, 2, 7).is_none());
        assert!(theorem2_exception(1, 2, 3).is_none());
    }

    #[test]
    fn corollary1_examples() {
        let p = |r, s, a, b, c| TwoTermProblem {
            r,
            s,
            a,
            b,
            c,
            x_max: 40,
            y_max: 40,
            z_max: 12,
        };
        let r = corollary1(&p(1, 1, 3, 10, 13)).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (2, 5, true));
        assert!(r.exception.is_some());
        let r = corollary1(&p(1, 1, 2, 89, 91)).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (2, 4, true));
        let r = corollary1(&p(2, 1, 3, 5, 7)).unwrap();
        assert_eq!((r.observed, r.ok), (0, true));
    }

    #[test]
    fn corollary2_examples() {
        let r = corollary2(&[2], 3, 10).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (2, 2, true));
        let r = corollary2(&[5, 2], 3, 10).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (5, 5, true));
        let r = corollary2(&[3], 5, 10).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (0, 2, true));
        assert!(corollary2(&[3], 9, 4).is_err());
    }

    #[test]
    fn lemma3_examples() {
        let r = lemma3(&inst(5, &[3], 8).with_coefficients(2, 1).unwrap()).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (1, 3, true));
        let r = lemma3(&inst(5, &[3, 2], 8)).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (3, 5, true));
        let r = lemma3(&inst(5, &[2], 8).with_coefficients(3, 1).unwrap()).unwrap();
        assert_eq!((r.observed, r.bound, r.ok), (2, 3, true));
    }

    #[test]
    fn lemma1_report() {
        let r = lemma1(&inst(13, &[10, 3], 9)).unwrap();
        assert_eq!((r.observed, r.ok), (1, true));
        assert_eq!(r.exception.as_deref(), Some("case1(nu=3)"));
    }

    #[test]
    fn sweep_order_and_size() {
        let cfg = SweepConfig {
            n: 2,
            d_max: 5,
            c_max: 9,
            z_max: 4,
        };
        let inst = sweep_instances(&cfg).unwrap();
        assert_eq!(inst[0].c, 3);
        assert_eq!(inst[0].d, vec![5, 4]);
        assert!(inst.iter().all(|i| i.d[0] > i.d[1] && i.validate().is_ok()));
        let audits = sweep(&cfg).unwrap();
        assert_eq!(audits.len(), inst.len());
        assert!(audits.iter().all(InstanceAudit::ok));
    }
}
