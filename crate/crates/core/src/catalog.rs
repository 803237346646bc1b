//! Parameterized families of hypersurfaces read from TOML.
//!
//! Weights, counts and degree are integer polynomials in `k`, given as
//! coefficient lists in increasing degree (`[2, 3]` is `2 + 3k`). Expected
//! rational invariants are quotients of two such polynomials.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::singularities::{QuotientSingularity, SingularityClass};
use crate::wspace::{Hypersurface, WeightVector};
use serde::Deserialize;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// The families shipped with the crate.
pub const DEFAULT_CATALOG: &str = include_str!("../catalog/families.toml");

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(transparent)]
pub struct Poly(pub Vec<i64>);

impl Poly {
    pub fn eval(&self, k: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * k + c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatFn {
    pub num: Poly,
    #[serde(default = "Poly::one")]
    pub den: Poly,
}

impl Poly {
    fn one() -> Poly {
        Poly(vec![1])
    }
}

impl RatFn {
    pub fn eval(&self, k: i64) -> Result<Rational> {
        let den = self.den.eval(k);
        if den == 0 {
            return Err(Error::Catalog(format!("denominator vanishes at k = {k}")));
        }
        Ok(Rational::new(self.num.eval(k).into(), den.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightPower {
    pub value: Poly,
    #[serde(default = "Poly::one")]
    pub count: Poly,
}

fn expand(powers: &[WeightPower], k: i64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for p in powers {
        let (v, c) = (p.value.eval(k), p.count.eval(k));
        if v < 0 || c < 0 {
            return Err(Error::Catalog(format!("negative weight or count at k = {k}")));
        }
        out.extend(std::iter::repeat_n(v as u64, c as usize));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularitySpec {
    pub order: Poly,
    pub weights: Vec<WeightPower>,
    /// Smallest `k` at which the point is expected.
    #[serde(default)]
    pub from: Option<i64>,
}

impl SingularitySpec {
    pub fn applies(&self, k: i64) -> bool {
        self.from.is_none_or(|f| k >= f)
    }

    pub fn eval(&self, k: i64) -> Result<QuotientSingularity> {
        let r = self.order.eval(k);
        if r < 1 {
            return Err(Error::Catalog(format!("singularity order {r} at k = {k}")));
        }
        Ok(QuotientSingularity::new(r as u64, &expand(&self.weights, k)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorstClass {
    Terminal,
    Canonical,
}

impl WorstClass {
    pub fn admits(self, c: SingularityClass) -> bool {
        match self {
            WorstClass::Terminal => c == SingularityClass::Terminal,
            WorstClass::Canonical => c != SingularityClass::NonCanonical,
        }
    }
}

/// Expected invariants; every field is optional.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    pub dimension: Option<Poly>,
    pub amplitude: Option<Poly>,
    pub volume: Option<RatFn>,
    pub geometric_genus: Option<Poly>,
    pub canonical_dimension: Option<Poly>,
    pub stability_index: Option<Poly>,
    pub nonbirational_at: Option<Poly>,
    /// Worst singularity class allowed away from `noncanonical`.
    pub at_worst: Option<WorstClass>,
    pub noncanonical: Option<Vec<SingularitySpec>>,
    /// Surface families: `2 p_g - 4` equals the least `K^2` of the minimal
    /// surface attached to this dimension, and `K^2` equals the contracted
    /// extremal configuration.
    pub extremal_dimension: Option<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub k_min: i64,
    pub k_max: i64,
    pub degree: Poly,
    pub weights: Vec<WeightPower>,
    #[serde(default)]
    pub expect: Expectations,
}

impl CatalogEntry {
    pub fn instantiate(&self, k: i64) -> Result<Hypersurface> {
        let d = self.degree.eval(k);
        if d < 1 {
            return Err(Error::Catalog(format!("{}: degree {d} at k = {k}", self.name)));
        }
        let w = WeightVector::new(expand(&self.weights, k)?)
            .map_err(|e| Error::Catalog(format!("{}: {e} at k = {k}", self.name)))?;
        Hypersurface::new(w, d as u64).map_err(|e| Error::Catalog(format!("{}: {e} at k = {k}", self.name)))
    }

    pub fn ks(&self, k_max: Option<i64>) -> std::ops::RangeInclusive<i64> {
        self.k_min..=k_max.map_or(self.k_max, |m| m.min(self.k_max))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub schema_version: u32,
    #[serde(rename = "family")]
    pub families: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Catalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        if c.schema_version != SCHEMA_VERSION {
            return Err(Error::Catalog(format!("unsupported schema_version {}", c.schema_version)));
        }
        for f in &c.families {
            if f.k_min > f.k_max {
                return Err(Error::Catalog(format!("{}: empty k range", f.name)));
            }
            for k in f.k_min..=f.k_max {
                f.instantiate(k)?;
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
        Catalog::parse(&text)
    }

    pub fn builtin() -> Self {
        Catalog::parse(DEFAULT_CATALOG).expect("shipped catalog parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn poly_eval() {
        assert_eq!(Poly(vec![2, 3]).eval(4), 14);
        assert_eq!(Poly(vec![]).eval(4), 0);
        assert_eq!(Poly(vec![1, 0, 1]).eval(3), 10);
    }

    #[test]
    fn builtin_parses() {
        let c = Catalog::builtin();
        assert!(c.families.len() >= 5);
        let f = &c.families[0];
        let h = f.instantiate(1).unwrap();
        assert_eq!(h.to_string(), "X_20 in P(1^5,4,10)");
        assert_eq!(f.expect.volume.as_ref().unwrap().eval(1).unwrap(), rat(1, 2));
    }

    #[test]
    fn rejects_bad() {
        assert!(Catalog::parse("schema_version = 2\nfamily = []").is_err());
        let bad = "schema_version = 1\n[[family]]\nname='x'\nk_min=1\nk_max=2\ndegree=[5]\nweights=[{value=[1], count=[2,-1]}]\n";
        assert!(Catalog::parse(bad).is_err());
        assert!(Catalog::parse("not toml [").is_err());
    }
}
