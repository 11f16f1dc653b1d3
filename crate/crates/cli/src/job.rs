//! Job descriptions: which space, which twist, which computation.

use koahss::algebra::Coeff;
use koahss::complex::{
    build_klein, build_rp, build_sphere, build_torus, circle, cross_polytope_sphere, product, rp2_six_vertex,
    ComplexJson, DeltaComplex, SignCocycle, SignCocycleJson,
};
use koahss::ops::{cup, power, Space, TwistData};
use koahss::{Error, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub space: SpaceSpec,
    #[serde(default)]
    pub twist: TwistSpec,
    pub command: Command,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(untagged)]
pub enum SpaceSpec {
    /// `"rp(2)"`, `"klein(3)"`, `"point"`, ...
    Name(String),
    Builtin {
        builtin: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        params: Vec<usize>,
    },
    Explicit {
        complex: ComplexJson,
    },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TwistSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma1: Option<CocycleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<CocycleSpec>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(untagged)]
pub enum CocycleSpec {
    Builtin(String),
    Explicit(SignCocycleJson),
}

// Untagged derives buffer the input and then cannot read the integer map
// keys of the explicit forms, so both specs go through a Value first.
impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::String(s) => Ok(SpaceSpec::Name(s.clone())),
            serde_json::Value::Object(m) if m.contains_key("complex") => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct E {
                    complex: ComplexJson,
                }
                let e: E = serde_json::from_value(v).map_err(D::Error::custom)?;
                Ok(SpaceSpec::Explicit { complex: e.complex })
            }
            serde_json::Value::Object(_) => {
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct B {
                    builtin: String,
                    #[serde(default)]
                    params: Vec<usize>,
                }
                let b: B = serde_json::from_value(v).map_err(D::Error::custom)?;
                Ok(SpaceSpec::Builtin { builtin: b.builtin, params: b.params })
            }
            _ => Err(D::Error::custom("space must be a name, {builtin, params} or {complex}")),
        }
    }
}

impl<'de> Deserialize<'de> for CocycleSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(CocycleSpec::Builtin(s)),
            v => serde_json::from_value(v).map(CocycleSpec::Explicit).map_err(D::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Cohomology,
    Ops,
    Ahss,
    Ko,
    DiffE2,
    CheckLift,
    CheckSpin,
    RTheory,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Cohomology => "cohomology",
            Command::Ops => "ops",
            Command::Ahss => "ahss",
            Command::Ko => "ko",
            Command::DiffE2 => "diff-e2",
            Command::CheckLift => "check-lift",
            Command::CheckSpin => "check-spin",
            Command::RTheory => "r-theory",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Inclusive degree window `[lo, hi]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<[i64; 2]>,
    /// A single degree (KO degree for `ko`, class degree for `ops`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<Coeff>,
    /// Coordinates of a mod-2 class (`ops`) or of B (`check-spin`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<i64>>,
    /// Coordinates of G in the basis of H⁴(X; ℤ) (`check-lift`).
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "G4")]
    pub g4: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rp: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_thom: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// Families of builtin spaces; used to resolve builtin twists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Point,
    Sphere(usize),
    Torus(usize),
    SphereProduct(usize, usize),
    Rp(usize),
    Klein(usize),
    Explicit,
}

pub struct Resolved {
    pub space: Space,
    pub family: Family,
    pub cover: Option<SignCocycle>,
}

fn parse_call(s: &str) -> Result<(String, Vec<usize>)> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s.to_string(), Vec::new()));
    };
    let close = s.strip_suffix(')').ok_or_else(|| Error::Parse(format!("missing ')' in {s:?}")))?;
    let args = &close[open + 1..];
    let params = args
        .split(',')
        .filter(|a| !a.trim().is_empty())
        .map(|a| a.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad parameter {a:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((s[..open].to_string(), params))
}

fn arity(name: &str, params: &[usize], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::Parse(format!("builtin {name:?} takes {n} parameter(s), got {}", params.len())));
    }
    Ok(())
}

pub const BUILTIN_SPACES: &[&str] =
    &["point", "circle", "sphere(n)", "cross-sphere(n)", "torus(n)", "sphere-product(a,b)", "rp(n)", "rp2-six", "klein(n)"];

pub fn builtin_space(name: &str, params: &[usize]) -> Result<(DeltaComplex, Family, Option<SignCocycle>)> {
    let one = |n: usize| -> Result<usize> {
        arity(name, params, n)?;
        Ok(params.first().copied().unwrap_or(0))
    };
    Ok(match name {
        "point" => {
            one(0)?;
            (DeltaComplex::point(), Family::Point, None)
        }
        "circle" => {
            one(0)?;
            (circle(), Family::Sphere(1), None)
        }
        "sphere" => {
            let n = one(1)?;
            if n == 0 {
                return Err(Error::InvalidComplex("S⁰ is disconnected; use n ≥ 1".into()));
            }
            (build_sphere(n), Family::Sphere(n), None)
        }
        "cross-sphere" => {
            let n = one(1)?;
            if n == 0 {
                return Err(Error::InvalidComplex("S⁰ is disconnected; use n ≥ 1".into()));
            }
            (cross_polytope_sphere(n), Family::Sphere(n), None)
        }
        "torus" => {
            let n = one(1)?;
            (build_torus(n)?, Family::Torus(n), None)
        }
        "sphere-product" => {
            arity(name, params, 2)?;
            let (a, b) = (params[0], params[1]);
            if a == 0 || b == 0 {
                return Err(Error::InvalidComplex("sphere factors need dimension ≥ 1".into()));
            }
            (product(&build_sphere(a), &build_sphere(b)), Family::SphereProduct(a, b), None)
        }
        "rp" => {
            let n = one(1)?;
            if n == 0 {
                return Err(Error::InvalidComplex("ℝP⁰ is a point; use \"point\"".into()));
            }
            let (x, w) = build_rp(n)?;
            (x, Family::Rp(n), Some(w))
        }
        "rp2-six" => {
            one(0)?;
            (rp2_six_vertex(), Family::Explicit, None)
        }
        "klein" => {
            let n = one(1)?;
            let (x, w) = build_klein(n)?;
            (x, Family::Klein(n), Some(w))
        }
        _ => return Err(Error::Parse(format!("unknown builtin space {name:?}; known: {}", BUILTIN_SPACES.join(", ")))),
    })
}

impl SpaceSpec {
    pub fn resolve(&self) -> Result<Resolved> {
        let (x, family, cover) = match self {
            SpaceSpec::Name(s) => {
                let (name, params) = parse_call(s)?;
                builtin_space(&name, &params)?
            }
            SpaceSpec::Builtin { builtin, params } => builtin_space(builtin, params)?,
            SpaceSpec::Explicit { complex } => {
                let x = complex.clone().into_complex()?;
                x.validate()?;
                (x, Family::Explicit, None)
            }
        };
        Ok(Resolved { space: Space::new(x), family, cover })
    }
}

pub const BUILTIN_TWISTS: &[&str] = &["zero", "orientation-double-cover", "double-cover", "w1", "w2-tangent", "x2"];

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl Resolved {
    fn unavailable(&self, name: &str) -> Error {
        Error::InvalidCocycle(format!("builtin twist {name:?} is not available for this space ({:?})", self.family))
    }

    fn cover_class(&self, name: &str) -> Result<koahss::ops::CohomologyClass> {
        let w = self.cover.as_ref().ok_or_else(|| self.unavailable(name))?;
        self.space.mod2_class(1, w.values())
    }

    /// Degree-`deg` builtin cocycle as a bit vector.
    fn builtin_bits(&self, name: &str, deg: usize) -> Result<Vec<bool>> {
        let sp = &self.space;
        let zero = vec![false; sp.complex().count(deg)];
        let parallelizable = matches!(
            self.family,
            Family::Point | Family::Sphere(_) | Family::Torus(_) | Family::SphereProduct(..)
        );
        match (name, deg) {
            ("zero", _) => Ok(zero),
            ("orientation-double-cover" | "double-cover", 1) => {
                Ok(self.cover.as_ref().ok_or_else(|| self.unavailable(name))?.values().to_vec())
            }
            ("w1", 1) => match self.family {
                Family::Rp(n) if n % 2 == 0 => self.builtin_bits("double-cover", 1),
                Family::Klein(n) if n % 2 == 0 => self.builtin_bits("double-cover", 1),
                Family::Rp(_) | Family::Klein(_) => Ok(zero),
                _ if parallelizable => Ok(zero),
                _ => Err(self.unavailable(name)),
            },
            ("w2-tangent", 2) => {
                // TℝPⁿ ⊕ 1 = (n+1)ξ; TKₙ = (n−1)ξ ⊕ 1 with ξ the covering line bundle
                let k = match self.family {
                    Family::Rp(n) => binom(n + 1, 2),
                    Family::Klein(n) => binom(n.saturating_sub(1), 2),
                    _ if parallelizable => return Ok(zero),
                    _ => return Err(self.unavailable(name)),
                };
                if k % 2 == 0 {
                    return Ok(zero);
                }
                let x = self.cover_class(name)?;
                Ok(power(sp, &x, 2)?.mod2_bits().expect("mod 2").to_vec())
            }
            ("x2", 2) => {
                if !matches!(self.family, Family::Rp(_)) {
                    return Err(self.unavailable(name));
                }
                let x = self.cover_class(name)?;
                Ok(cup(sp, &x, &x)?.mod2_bits().expect("mod 2").to_vec())
            }
            _ if BUILTIN_TWISTS.contains(&name) => {
                Err(Error::DegreeMismatch(format!("builtin twist {name:?} does not have degree {deg}")))
            }
            _ => Err(Error::Parse(format!("unknown builtin twist {name:?}; known: {}", BUILTIN_TWISTS.join(", ")))),
        }
    }

    fn cocycle_bits(&self, spec: &CocycleSpec, deg: usize) -> Result<Vec<bool>> {
        match spec {
            CocycleSpec::Builtin(name) => self.builtin_bits(name, deg),
            CocycleSpec::Explicit(c) => {
                if c.degree != deg {
                    return Err(Error::DegreeMismatch(format!("cocycle in the σ{deg} slot has degree {}", c.degree)));
                }
                c.to_bits(self.space.complex().count(deg))
            }
        }
    }

    pub fn twist(&self, spec: &TwistSpec) -> Result<TwistData> {
        let x = self.space.complex();
        let s1 = match &spec.sigma1 {
            Some(c) => Some(SignCocycle::new(x, self.cocycle_bits(c, 1)?)?),
            None => None,
        };
        let s2 = match &spec.sigma2 {
            Some(c) => Some(self.cocycle_bits(c, 2)?),
            None => None,
        };
        TwistData::new(x, s1, s2)
    }
}

impl JobSpec {
    pub fn validate_schema(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {} (expected {SCHEMA_VERSION})", self.schema)));
        }
        if let Some([lo, hi]) = self.options.degrees {
            if lo > hi {
                return Err(Error::Parse(format!("empty degree window [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// JSON schema of [`JobSpec`].
pub fn schema() -> serde_json::Value {
    let cocycle = serde_json::json!({
        "oneOf": [
            {"type": "string", "enum": BUILTIN_TWISTS},
            {"type": "object", "required": ["degree", "values"], "additionalProperties": false,
             "properties": {
                "degree": {"type": "integer", "minimum": 1, "maximum": 2},
                "values": {"type": "object", "patternProperties": {"^[0-9]+$": {"enum": [0, 1]}}}}}
        ]
    });
    let window = serde_json::json!({"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2});
    let ints = serde_json::json!({"type": "array", "items": {"type": "integer"}});
    serde_json::json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "koahss job",
        "version": SCHEMA_VERSION,
        "type": "object",
        "required": ["space", "command"],
        "additionalProperties": false,
        "properties": {
            "schema": {"const": SCHEMA_VERSION},
            "space": {"oneOf": [
                {"type": "string", "description": format!("builtin: {}", BUILTIN_SPACES.join(", "))},
                {"type": "object", "required": ["builtin"], "additionalProperties": false,
                 "properties": {"builtin": {"type": "string"}, "params": ints}},
                {"type": "object", "required": ["complex"], "additionalProperties": false,
                 "properties": {"complex": {"type": "object", "required": ["dims"],
                    "properties": {
                        "dims": ints,
                        "faces": {"type": "object", "patternProperties": {"^[0-9]+$": {"type": "array", "items": ints}}},
                        "labels": {"type": "array"}}}}}
            ]},
            "twist": {"type": "object", "additionalProperties": false,
                      "properties": {"sigma1": cocycle, "sigma2": cocycle}},
            "command": {"enum": ["cohomology", "ops", "ahss", "ko", "diff-e2", "check-lift", "check-spin", "r-theory", "verify"]},
            "options": {"type": "object", "additionalProperties": false, "properties": {
                "degrees": window,
                "degree": {"type": "integer"},
                "reduced": {"type": "boolean"},
                "coeff": {"enum": ["Z", "Z2", "QmodZ"]},
                "class": ints,
                "G4": ints,
                "max_rp": {"type": "integer", "minimum": 1},
                "max_thom": {"type": "integer", "minimum": 1},
                "golden": {"type": "boolean"},
                "output": {"type": "string"}
            }}
        }
    })
}
