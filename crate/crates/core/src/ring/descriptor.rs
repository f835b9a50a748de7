//! JSON ring descriptors:
//! `{"base": {"p", "m", "eta_power"}, "vars": [...], "inverses": [[num, alias]], "power_rules": [{"var", "exp", "rhs"}]}`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expr::parse_elem;
use super::{BaseDesc, BaseRing, RingBuilder, RingCtx};
use crate::error::{ensure, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerRuleDesc {
    pub var: String,
    pub exp: u32,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDesc {
    pub base: BaseDesc,
    #[serde(default)]
    pub vars: Vec<String>,
    #[serde(default)]
    pub inverses: Vec<(String, Option<String>)>,
    #[serde(default)]
    pub power_rules: Vec<PowerRuleDesc>,
}

impl RingDesc {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn build(&self) -> Result<Arc<RingCtx>> {
        let base = BaseRing::from_desc(&self.base)?;
        let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let free = RingCtx::polynomial_ring(base, &names)?;
        let mut b = RingBuilder::from_ctx(&free);
        for r in &self.power_rules {
            let rhs = parse_elem(&free, &r.rhs)?;
            b = b.rule(&r.var, r.exp, &rhs)?;
        }
        for (num, alias) in &self.inverses {
            let f = parse_elem(&free, num)?;
            b = b.inverse(&f, alias.as_deref())?;
        }
        b.build()
    }
}

/// An ideal of the base, `(m, η^k, ρ − r)`, extended to a ring: `{"m", "eta_power", "rho"}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDesc {
    #[serde(default)]
    pub m: Option<i64>,
    #[serde(default)]
    pub eta_power: Option<u32>,
    #[serde(default)]
    pub rho: Option<i64>,
}

impl IdealDesc {
    pub fn load(path: &Path) -> Result<Self> {
        let s =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&s)?)
    }

    /// Descriptor of `R/IR`: the base ideals are added, variables and rules are kept.
    pub fn quotient_of(&self, r: &RingDesc) -> Result<RingDesc> {
        let b = &r.base;
        let m = match (b.m, self.m) {
            (Some(x), Some(y)) => Some(num_integer::Integer::gcd(&x, &y)),
            (x, y) => x.or(y),
        };
        let eta_power = match (b.eta_power, self.eta_power) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        let rho = match (b.rho, self.rho) {
            (Some(x), Some(y)) if x != y => {
                return Err(Error::Argument(format!("ideal contains ρ − {x} and ρ − {y}; use m to express the sum")))
            }
            (x, y) => x.or(y),
        };
        ensure!(r.inverses.is_empty(), Unsupported, "quotients of localized rings are not supported");
        Ok(RingDesc { base: BaseDesc { p: b.p, m, eta_power, rho }, ..r.clone() })
    }
}

/// Load a ring from a JSON descriptor file.
pub fn load_ring(path: &Path) -> Result<Arc<RingCtx>> {
    RingDesc::load(path)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::expr::parse_elem;

    #[test]
    fn descriptor_roundtrip() {
        let js = r#"{"base": {"p": 3, "m": null, "eta_power": null},
                     "vars": ["u"], "inverses": [["1 + u*eta^3", "w"]], "power_rules": []}"#;
        let d = RingDesc::from_json(js).unwrap();
        let ctx = d.build().unwrap();
        let a = parse_elem(&ctx, "(1 + u*eta^3) * w").unwrap();
        assert!(a.is_one());
        let back: RingDesc = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn finite_descriptor() {
        let js = r#"{"base": {"p": 3, "m": 3, "eta_power": null},
                     "vars": ["u"], "power_rules": [{"var": "u", "exp": 2, "rhs": "0"}]}"#;
        let ctx = RingDesc::from_json(js).unwrap().build().unwrap();
        assert!(ctx.is_finite());
        let a = parse_elem(&ctx, "1 + u").unwrap();
        assert_eq!(a.try_invert().unwrap().unwrap(), parse_elem(&ctx, "1 - u").unwrap());
    }
}
