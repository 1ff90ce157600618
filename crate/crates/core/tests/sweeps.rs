use powersum::catalog::{mersenne_quotient, Verdict};
use powersum::verify::{sweep, values_u64, SweepConfig};

#[test]
fn two_base_sweep_is_clean() {
    let audits = sweep(&SweepConfig::default()).unwrap();
    assert!(audits.len() > 5000);
    let failures: Vec<String> = audits
        .iter()
        .filter(|a| !a.ok())
        .map(|a| format!("{}: {:?}", a.instance, a.failures()))
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
    let three: Vec<(Vec<u64>, u64)> = audits
        .iter()
        .filter(|a| a.values.len() >= 3)
        .map(|a| (a.instance.d.clone(), a.instance.c))
        .collect();
    assert_eq!(
        three,
        vec![
            (vec![5, 2], 3),
            (vec![3, 2], 5),
            (vec![3, 2], 7),
            (vec![7, 2], 15),
            (vec![15, 2], 31),
        ]
    );
    for a in audits
        .iter()
        .filter(|a| a.values.len() == a.pq as usize + 1)
    {
        assert!(a.case_pair.is_some(), "{}", a.instance);
    }
}

#[test]
#[ignore = "about half a minute; run with --ignored"]
fn three_base_sweep_is_clean() {
    let audits = sweep(&SweepConfig {
        n: 3,
        ..SweepConfig::default()
    })
    .unwrap();
    let failures: Vec<String> = audits
        .iter()
        .filter(|a| !a.ok())
        .map(|a| format!("{}: {:?}", a.instance, a.failures()))
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
    let top: Vec<_> = audits
        .iter()
        .filter(|a| a.values.len() == 5)
        .map(|a| (a.instance.c, values_u64(&a.values)))
        .collect();
    assert_eq!(top.len(), 2);
}

#[test]
fn largest_known_quotient_is_prime() {
    let m = mersenne_quotient(59, 1, 2000).unwrap();
    assert_eq!(m.digits, 1031);
    assert_eq!(m.verdict, Verdict::Prime);
}
