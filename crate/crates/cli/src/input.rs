//! Instance ingestion from flags or a JSON file.

use std::fs;

use powersum::{Error, Instance};
use serde::Deserialize;

use crate::args::InstanceArgs;

/// A JSON integer or a decimal string holding one.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Int {
    Num(u64),
    Text(String),
}

impl Int {
    fn get(&self, field: &str) -> Result<u64, Error> {
        match self {
            Int::Num(v) => Ok(*v),
            Int::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInstance(format!("{field}: {s:?} is not an integer"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    c: Int,
    d: Vec<Int>,
    z_max: Option<Int>,
    r: Option<Int>,
    s: Option<Int>,
}

fn read_file(path: &std::path::Path) -> Result<InstanceArgs, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInstance(format!("{}: {e}", path.display())))?;
    let f: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInstance(format!("{}: {e}", path.display())))?;
    let opt = |v: &Option<Int>, name: &str| v.as_ref().map(|v| v.get(name)).transpose();
    let z_max = opt(&f.z_max, "z_max")?
        .map(|z| u32::try_from(z).map_err(|_| Error::InvalidInstance(format!("z_max = {z}"))))
        .transpose()?;
    Ok(InstanceArgs {
        instance: None,
        c: Some(f.c.get("c")?),
        d: f.d.iter().map(|v| v.get("d")).collect::<Result<_, _>>()?,
        z_max,
        r: opt(&f.r, "r")?,
        s: opt(&f.s, "s")?,
    })
}

/// Validated instance; the file, when given, takes the place of the flags.
pub fn resolve(args: &InstanceArgs) -> Result<Instance, Error> {
    let args = match &args.instance {
        Some(path) => read_file(path)?,
        None => args.clone(),
    };
    let c = args
        .c
        .ok_or_else(|| Error::InvalidInstance("missing modulus: pass -c or --instance".into()))?;
    let inst = Instance::new(c, args.d)?.with_depth(args.z_max.unwrap_or(10))?;
    inst.with_coefficients(args.r.unwrap_or(1), args.s.unwrap_or(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(c: Option<u64>, d: &[u64]) -> InstanceArgs {
        InstanceArgs {
            instance: None,
            c,
            d: d.to_vec(),
            z_max: None,
            r: None,
            s: None,
        }
    }

    #[test]
    fn flags() {
        let inst = resolve(&args(Some(13), &[10, 3])).unwrap();
        assert_eq!((inst.c, inst.d.clone(), inst.z_max), (13, vec![10, 3], 10));
        assert!(matches!(
            resolve(&args(Some(12), &[10, 3])),
            Err(Error::NotCoprime { .. })
        ));
        assert!(resolve(&args(None, &[10, 3])).is_err());
    }

    #[test]
    fn file_accepts_strings_and_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("i.json");
        fs::write(&path, r#"{"c": "13", "d": [10, "3"], "z_max": 9}"#).unwrap();
        let mut a = args(None, &[]);
        a.instance = Some(path.clone());
        let inst = resolve(&a).unwrap();
        assert_eq!((inst.c, inst.d, inst.z_max), (13, vec![10, 3], 9));

        fs::write(&path, r#"{"c": 13, "d": [10, 3], "depth": 9}"#).unwrap();
        assert!(resolve(&a).is_err());
        fs::write(&path, r#"{"c": "x", "d": [10, 3]}"#).unwrap();
        assert!(resolve(&a).is_err());
    }
}
