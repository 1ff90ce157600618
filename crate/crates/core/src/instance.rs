use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Equation context for `r*X + s*Y = c^z` with `X`, `Y` built from the bases `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub c: u64,
    pub d: Vec<u64>,
    pub z_max: u32,
    pub r: u64,
    pub s: u64,
}

impl Instance {
    /// Validated instance with depth 10 and `r = s = 1`.
    pub fn new(c: u64, d: Vec<u64>) -> Result<Self> {
        let inst = Instance {
            c,
            d,
            z_max: 10,
            r: 1,
            s: 1,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_depth(mut self, z_max: u32) -> Result<Self> {
        if z_max < 1 {
            return Err(Error::DepthInvalid(z_max));
        }
        self.z_max = z_max;
        Ok(self)
    }

    pub fn with_coefficients(mut self, r: u64, s: u64) -> Result<Self> {
        self.r = r;
        self.s = s;
        self.validate()?;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// Checks the invariants every module relies on.
    pub fn validate(&self) -> Result<()> {
        if self.c < 2 {
            return Err(Error::InvalidInstance(format!(
                "c = {} must be at least 2",
                self.c
            )));
        }
        if self.d.is_empty() {
            return Err(Error::InvalidInstance(
                "at least one base is required".into(),
            ));
        }
        if self.z_max < 1 {
            return Err(Error::DepthInvalid(self.z_max));
        }
        for &di in &self.d {
            if di < 2 {
                return Err(Error::InvalidInstance(format!("base {di} must exceed 1")));
            }
            if di.gcd(&self.c) != 1 {
                return Err(Error::not_coprime(di, self.c));
            }
        }
        if self.r < 1 || self.s < 1 {
            return Err(Error::InvalidInstance(
                "coefficients must be positive".into(),
            ));
        }
        if self.r.gcd(&self.c) != 1 || self.s.gcd(&self.c) != 1 {
            return Err(Error::not_coprime(
                format!("r*s = {}*{}", self.r, self.s),
                self.c,
            ));
        }
        Ok(())
    }

    /// The ideal-theoretic modules need an odd modulus.
    pub fn require_odd(&self) -> Result<()> {
        if self.c.is_multiple_of(2) {
            Err(Error::EvenModulus(self.c))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.d.iter().map(u64::to_string).collect();
        write!(f, "d=({}) c={} z_max={}", d.join(","), self.c, self.z_max)?;
        if self.r != 1 || self.s != 1 {
            write!(f, " r={} s={}", self.r, self.s)?;
        }
        Ok(())
    }
}
