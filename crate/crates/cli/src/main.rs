mod args;
mod cache;
mod input;
mod records;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use powersum::catalog::{self, FamilyId, FamilyRange};
use powersum::classify::{group_by_association, observation_holds};
use powersum::grouplat::{self, LatticeStrategy};
use powersum::orbits::{self, case_pair};
use powersum::search::{distinct_values, enumerate_solutions_par, TwoTermProblem};
use powersum::verify::{self, SweepConfig};
use powersum::{Error, Instance};
use serde::Serialize;

use args::{Claim, Cli, Command, Strategy};
use records::*;

/// A fully validated request. Its `Debug` rendering is the cache key.
#[derive(Debug)]
enum Job {
    Solve(Instance),
    Invariants(Instance, LatticeStrategy),
    Classify(Instance),
    Orbits(Instance, u32),
    Pq(Instance),
    Theorem1(Instance),
    PqBound(Instance),
    Theorem2(Instance),
    Lemma1(Instance),
    Lemma3(Instance),
    Corollary1(TwoTermProblem),
    Corollary2(Vec<u64>, u64, u32),
    Sweep(SweepConfig, bool),
    Families(Vec<FamilyId>, FamilyRange, bool),
    Anomalous(bool),
    PairTransform(Vec<[u64; 7]>, bool),
    ScanMq(Vec<u64>, u32, u64, bool),
}

struct Output {
    body: String,
    ok: bool,
}

impl Output {
    fn new() -> Self {
        Output {
            body: String::new(),
            ok: true,
        }
    }

    fn push<T: Serialize>(&mut self, rec: &T) {
        self.body
            .push_str(&serde_json::to_string(rec).expect("records serialize"));
        self.body.push('\n');
    }

    fn check(&mut self, ok: bool) {
        self.ok &= ok;
    }
}

fn plan(cmd: &Command) -> Result<Job, Error> {
    use input::resolve;
    Ok(match cmd {
        Command::Solve(a) => Job::Solve(resolve(a)?),
        Command::Invariants { inst, strategy } => {
            let s = match strategy {
                Strategy::Auto => LatticeStrategy::Auto,
                Strategy::Enumerate => LatticeStrategy::Enumerate,
                Strategy::Dlog => LatticeStrategy::DiscreteLog,
            };
            Job::Invariants(resolve(inst)?, s)
        }
        Command::Classify(a) => Job::Classify(odd(resolve(a)?)?),
        Command::Orbits { inst, j_max } => Job::Orbits(odd(resolve(inst)?)?, *j_max),
        Command::Verify { claim } => match claim {
            Claim::Pq(a) => Job::Pq(resolve(a)?),
            Claim::Theorem1(a) => Job::Theorem1(resolve(a)?),
            Claim::PqBound(a) => Job::PqBound(resolve(a)?),
            Claim::Theorem2(a) => Job::Theorem2(resolve(a)?),
            Claim::Lemma1(a) => Job::Lemma1(resolve(a)?),
            Claim::Lemma3(a) => Job::Lemma3(resolve(a)?),
            &Claim::Corollary1 {
                r,
                s,
                a,
                b,
                c,
                x_max,
                y_max,
                z_max,
            } => Job::Corollary1(TwoTermProblem {
                r,
                s,
                a,
                b,
                c,
                x_max,
                y_max,
                z_max,
            }),
            Claim::Corollary2 { primes, c, z_max } => Job::Corollary2(primes.clone(), *c, *z_max),
            &Claim::Sweep {
                n,
                d_max,
                c_max,
                z_max,
                all,
            } => Job::Sweep(
                SweepConfig {
                    n,
                    d_max,
                    c_max,
                    z_max,
                },
                all,
            ),
        },
        Command::Families {
            family,
            k_max,
            m_max,
            r_max,
            g_max,
            search,
        } => {
            let ids = if family.is_empty() {
                FamilyId::ALL.to_vec()
            } else {
                family
                    .iter()
                    .map(|f| {
                        FamilyId::parse(f)
                            .ok_or_else(|| Error::ParamOutOfRange(format!("unknown family {f}")))
                    })
                    .collect::<Result<_, _>>()?
            };
            let range = FamilyRange {
                k_max: *k_max,
                m_max: *m_max,
                r_max: *r_max,
                g_max: *g_max,
            };
            Job::Families(ids, range, *search)
        }
        Command::Anomalous { search } => Job::Anomalous(*search),
        Command::PairTransform { params, search } => {
            let list = if params.is_empty() {
                catalog::PAIRING_EXAMPLES
                    .iter()
                    .map(|&(a, b, c, q, r, s, t)| [a, b, c, q as u64, r as u64, s as u64, t as u64])
                    .collect()
            } else {
                for &e in &params[3..] {
                    if e > u32::MAX as u64 {
                        return Err(Error::ParamOutOfRange(format!("exponent {e}")));
                    }
                }
                vec![params
                    .as_slice()
                    .try_into()
                    .expect("clap takes seven values")]
            };
            Job::PairTransform(list, *search)
        }
        Command::ScanMq {
            p,
            t_max,
            digit_limit,
            extended,
        } => Job::ScanMq(p.clone(), *t_max, *digit_limit, *extended),
    })
}

fn odd(inst: Instance) -> Result<Instance, Error> {
    inst.require_odd()?;
    Ok(inst)
}

fn solve(inst: &Instance) -> Result<Output, Error> {
    let sols = enumerate_solutions_par(inst)?;
    let values = distinct_values(&sols);
    let pair = case_pair(&values);
    let grouping = if inst.c % 2 == 1 && inst.r == 1 && inst.s == 1 {
        Some(group_by_association(&sols, inst)?)
    } else {
        None
    };
    let mut out = Output::new();
    for (i, sol) in sols.iter().enumerate() {
        let triple = sol.triple();
        let (case, partner) = match &pair {
            Some((s, partner, kind)) if triple == *s => {
                (kind.label(), Some(ValueRec::from(partner)))
            }
            Some((_, partner, kind)) if triple == *partner => (kind.label(), None),
            _ => ("none".into(), None),
        };
        out.push(&SolutionRec {
            kind: "solution",
            z: sol.z,
            a: big(&sol.a),
            b: big(&sol.b),
            x: sol.x.clone(),
            y: sol.y.clone(),
            tag: grouping.as_ref().map(|g| (&g.labels[i].tag).into()),
            parity: sol.parity(),
            case,
            partner,
        });
    }
    out.push(&SummaryRec {
        kind: "summary",
        instance: inst.into(),
        n: values.len(),
        n1: sols.len(),
    });
    Ok(out)
}

fn invariants(inst: &Instance, strategy: LatticeStrategy) -> Result<Output, Error> {
    let inv = grouplat::invariants_with(inst, strategy)?;
    let mut out = Output::new();
    out.push(&InvariantsRec {
        kind: "invariants",
        instance: inst.into(),
        solvable: inv.solvable,
        p: inv.p,
        q: inv.q.to_string(),
        m: inv.m.iter().map(u64::to_string).collect(),
        u: inv.u_basis,
        u_prime: inv.u_prime_basis,
        witness: inv.witness,
        parity_classes: inv.parity_classes,
    });
    Ok(out)
}

fn classify(inst: &Instance) -> Result<Output, Error> {
    let sols = enumerate_solutions_par(inst)?;
    let g = group_by_association(&sols, inst)?;
    let mut out = Output::new();
    for (sol, cl) in sols.iter().zip(&g.labels) {
        let congruence_ok = observation_holds(&sol.a, &sol.b, cl, inst.c);
        out.check(congruence_ok);
        let dec = &cl.decomposition;
        out.push(&ClassRec {
            kind: "classification",
            z: sol.z,
            a: big(&sol.a),
            b: big(&sol.b),
            d1: dec.d1.to_string(),
            xr: big(&dec.xr),
            d2: dec.d2.to_string(),
            yr: big(&dec.yr),
            key: cl.key.to_string(),
            tag: (&cl.tag).into(),
            parity: cl.parity.clone(),
            congruence_ok,
        });
    }
    for (tag, group) in &g.groups {
        out.push(&GroupRec {
            kind: "group",
            tag: tag.into(),
            omega_c: tag.omega_c,
            solutions: values(&distinct_values(group)),
        });
    }
    Ok(out)
}

fn orbit_records(inst: &Instance, j_max: u32) -> Result<Output, Error> {
    let sols = enumerate_solutions_par(inst)?;
    let g = group_by_association(&sols, inst)?;
    let mut out = Output::new();
    for (tag, group) in &g.groups {
        let seed = orbits::minimal_pair_power(tag, inst, j_max)?;
        let found = distinct_values(group);
        let c = num_bigint::BigInt::from(inst.c);
        let mut predicted = Vec::new();
        let mut hits = Vec::new();
        for t in 1..=inst.z_max / seed.j {
            let (u_t, v_t) = orbits::orbit_power(&seed, t);
            let norm_ok = &u_t * &u_t + &v_t * &v_t * seed.d == c.pow(2 * seed.j * t);
            out.check(norm_ok);
            let value = orbits::predicted_solution(&seed, t).ok();
            let hit = value.as_ref().is_some_and(|v| found.contains(v));
            if hit {
                hits.push(value.clone().expect("hit has a value"));
            }
            predicted.push(PredictionRec {
                t,
                u_t: signed(&u_t),
                v_t: signed(&v_t),
                norm_ok,
                value: value.as_ref().map(ValueRec::from),
                found: hit,
            });
        }
        let mismatches: Vec<String> = found
            .iter()
            .filter(|s| !hits.contains(s))
            .map(|s| format!("{s} is not on the orbit"))
            .collect();
        out.check(mismatches.is_empty());
        out.push(&OrbitRec {
            kind: "orbit",
            tag: tag.into(),
            j: seed.j,
            u: signed(&seed.u),
            v: big(&seed.v),
            solutions: values(&found),
            predicted,
            ok: mismatches.is_empty(),
            mismatches,
        });
    }
    Ok(out)
}

fn report(r: verify::VerificationReport) -> Output {
    let mut out = Output::new();
    out.check(r.ok);
    out.push(&VerificationRec::from(&r));
    out
}

fn sweep(cfg: &SweepConfig, all: bool) -> Result<Output, Error> {
    let audits = verify::sweep(cfg)?;
    let generic = 1usize << (cfg.n.max(1) - 1);
    let mut out = Output::new();
    let mut summary = SweepRec {
        kind: "sweep",
        n: cfg.n,
        d_max: cfg.d_max,
        c_max: cfg.c_max,
        z_max: cfg.z_max,
        instances: audits.len(),
        failures: 0,
        max_n: 0,
        at_theorem1_bound: 0,
        at_pq_bound: 0,
        at_pq_bound_with_pair: 0,
        ok: true,
    };
    for a in &audits {
        let n = a.values.len();
        summary.max_n = summary.max_n.max(n);
        if n > generic {
            summary.at_theorem1_bound += 1;
        }
        if n as u64 == a.pq + 1 {
            summary.at_pq_bound += 1;
            if a.case_pair.is_some() {
                summary.at_pq_bound_with_pair += 1;
            }
        }
        if !a.ok() {
            summary.failures += 1;
        }
        if all || n > generic || !a.ok() {
            out.push(&AuditRec::from(a));
        }
    }
    summary.ok = summary.failures == 0;
    out.check(summary.ok);
    out.push(&summary);
    Ok(out)
}

fn entries(
    kind: &'static str,
    list: Vec<catalog::CatalogEntry>,
    search: bool,
) -> Result<Output, Error> {
    let mut out = Output::new();
    for mut e in list {
        if search {
            e.confirm_by_search()?;
        }
        out.check(e.ok());
        out.push(&CatalogRec::new(kind, &e));
    }
    Ok(out)
}

fn scan_mq(p: &[u64], t_max: u32, digit_limit: u64, extended: bool) -> Result<Output, Error> {
    let limit = if extended { u64::MAX } else { digit_limit };
    let mut list = catalog::mersenne_quotient_scan(p, t_max, limit)?;
    if extended && !list.iter().any(|m| (m.p, m.t) == (59, 1)) {
        list.push(catalog::mersenne_quotient(59, 1, limit)?);
    }
    let mut out = Output::new();
    for m in &list {
        let identity_ok = catalog::quotient_identity_holds(m);
        out.check(identity_ok);
        out.push(&QuotientRec::new(m, identity_ok));
    }
    Ok(out)
}

fn execute(job: &Job) -> Result<Output, Error> {
    match job {
        Job::Solve(i) => solve(i),
        Job::Invariants(i, s) => invariants(i, *s),
        Job::Classify(i) => classify(i),
        Job::Orbits(i, j) => orbit_records(i, *j),
        Job::Pq(i) => {
            let pq = grouplat::check_pq(i)?;
            let mut out = Output::new();
            out.check(pq.ok);
            out.push(&PqRec {
                kind: "pq",
                instance: i.into(),
                p: pq.p,
                q: pq.q,
                product: pq.product,
                expected: pq.expected,
                ok: pq.ok,
            });
            Ok(out)
        }
        Job::Theorem1(i) => verify::theorem1(i).map(report),
        Job::PqBound(i) => verify::pq_bound(i).map(report),
        Job::Theorem2(i) => verify::theorem2(i).map(report),
        Job::Lemma1(i) => verify::lemma1(i).map(report),
        Job::Lemma3(i) => verify::lemma3(i).map(report),
        Job::Corollary1(p) => verify::corollary1(p).map(report),
        Job::Corollary2(primes, c, z) => verify::corollary2(primes, *c, *z).map(report),
        Job::Sweep(cfg, all) => sweep(cfg, *all),
        Job::Families(ids, range, search) => {
            let mut list = Vec::new();
            for &id in ids {
                list.extend(catalog::family_instances(id, range)?);
            }
            entries("family", list, *search)
        }
        Job::Anomalous(search) => entries("anomalous", catalog::anomalous_catalog(), *search),
        Job::PairTransform(list, search) => {
            let built = list
                .iter()
                .map(|&[a, b, c, q, r, s, t]| {
                    catalog::pair_transform(a, b, c, q as u32, r as u32, s as u32, t as u32)
                })
                .collect::<Result<_, _>>()?;
            entries("pair_transform", built, *search)
        }
        Job::ScanMq(p, t, limit, ext) => scan_mq(p, *t, *limit, *ext),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::FactorizationIncomplete { .. } | Error::NotFound { .. } => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<cache::Entry, Error> {
    let job = plan(&cli.command)?;
    let store = (!cli.no_cache).then(|| cache::Cache::new(&cli.cache_dir));
    let key = cache::key(&format!("powersum {}\n{job:?}", env!("CARGO_PKG_VERSION")));
    if let Some(hit) = store.as_ref().and_then(|s| s.get(&key)) {
        return Ok(hit);
    }
    let out = execute(&job)?;
    let entry = cache::Entry {
        exit: if out.ok { 0 } else { 1 },
        body: out.body,
    };
    if let Some(s) = &store {
        if let Err(e) = s.put(&key, &entry) {
            eprintln!("powersum: cache write failed: {e}");
        }
    }
    Ok(entry)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(entry) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(entry.body.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::from(entry.exit as u8)
        }
        Err(e) => {
            eprintln!("powersum: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
