//! Instance descriptions: JSON documents, command-line shorthands and the
//! built-in corpus.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmod::{Caps, FiniteModule, FiniteRing, ModuleContext, ModuleSpec, RingSpec};

/// Optional overrides of [`Caps`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_hom_candidates: Option<u128>,
}

impl CapsSpec {
    pub fn apply(&self, base: Caps) -> Caps {
        Caps {
            size: self.max_size.unwrap_or(base.size),
            hom: self.max_hom_candidates.unwrap_or(base.hom),
        }
    }

    /// Parses `size=<n>,hom=<n>`; either key may be omitted.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |message: String| Error::Parse {
            location: format!("caps `{s}`"),
            message,
        };
        let mut caps = CapsSpec::default();
        for part in s.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{part}`")))?;
            match key.trim() {
                "size" => caps.max_size = Some(parse_num(value, &bad)?),
                "hom" => caps.max_hom_candidates = Some(parse_num(value, &bad)?),
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(caps)
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, bad: &impl Fn(String) -> Error) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| bad(format!("`{s}` is not a non-negative integer")))
}

fn regular() -> ModuleSpec {
    ModuleSpec::Regular
}

/// A ring, a module over it and optional caps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub ring: RingSpec,
    #[serde(default = "regular")]
    pub module: ModuleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsSpec>,
}

impl InstanceSpec {
    pub fn new(ring: RingSpec, module: ModuleSpec) -> Self {
        Self {
            id: None,
            ring,
            module,
            caps: None,
        }
    }

    /// Parses a JSON document. Errors carry the line, column and field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::Parse {
                location: format!("line {}, column {}, field `{path}`", inner.line(), inner.column()),
                message: inner.to_string(),
            }
        })
    }

    /// `zmod:N`, `product:N1,N2,...`, `matrix:DIM:Q`, `cyclic:M1,M2,...@N`.
    pub fn from_shorthand(s: &str) -> Result<Self> {
        let bad = |message: String| Error::Parse {
            location: format!("shorthand `{s}`"),
            message,
        };
        let list = |body: &str| -> Result<Vec<usize>> {
            body.split(',').map(|x| parse_num(x, &bad)).collect()
        };
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| bad("expected kind:parameters".into()))?;
        let spec = match kind {
            "zmod" => Self::new(RingSpec::Zmod { n: parse_num(body, &bad)? }, regular()),
            "product" => Self::new(
                RingSpec::Product {
                    factors: list(body)?.into_iter().map(|n| RingSpec::Zmod { n }).collect(),
                },
                regular(),
            ),
            "matrix" => {
                let (dim, q) = body
                    .split_once(':')
                    .ok_or_else(|| bad("expected matrix:DIM:Q".into()))?;
                Self::new(
                    RingSpec::Matrix {
                        dim: parse_num(dim, &bad)?,
                        q: parse_num(q, &bad)?,
                    },
                    regular(),
                )
            }
            "cyclic" => {
                let (moduli, n) = body
                    .split_once('@')
                    .ok_or_else(|| bad("expected cyclic:M1,M2,...@N".into()))?;
                Self::new(
                    RingSpec::Zmod { n: parse_num(n, &bad)? },
                    ModuleSpec::CyclicProduct { moduli: list(moduli)? },
                )
            }
            other => return Err(bad(format!("unknown kind `{other}`"))),
        };
        Ok(spec.with_id(s))
    }

    /// A shorthand if `s` looks like one, otherwise JSON text.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Self::from_json(s)
        } else {
            Self::from_shorthand(s.trim())
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn id(&self) -> &str {
        self.id.as_deref().unwrap_or("instance")
    }

    /// Builds the module and its context. Caps are `base` overridden by
    /// the instance's own; table axiom failures name the offending field.
    pub fn build(&self, base: Caps, seed: u64) -> Result<ModuleContext> {
        let caps = self.caps.unwrap_or_default().apply(base);
        let in_field = |field: &str| {
            let field = field.to_string();
            move |e: Error| match e {
                Error::InvalidTables(_) | Error::IncompatibleModuli(_) => Error::Parse {
                    location: format!("field `{field}`"),
                    message: e.to_string(),
                },
                other => other,
            }
        };
        let ring = Arc::new(FiniteRing::build(&self.ring, caps.size).map_err(in_field("ring"))?);
        let module = FiniteModule::build(ring, &self.module, caps.size).map_err(in_field("module"))?;
        ModuleContext::with_caps(module, caps, seed)
    }
}

/// Shorthands of the built-in corpus, in report order.
pub const CORPUS: &[&str] = &[
    "zmod:2",
    "zmod:3",
    "zmod:4",
    "zmod:6",
    "zmod:8",
    "zmod:9",
    "zmod:12",
    "zmod:16",
    "zmod:24",
    "zmod:36",
    "product:2,2",
    "product:2,3",
    "matrix:2:2",
    "cyclic:2,2@2",
    "cyclic:3,3@3",
    "cyclic:2,4@8",
    "product:2,2,2",
];

pub fn corpus() -> Vec<InstanceSpec> {
    CORPUS
        .iter()
        .map(|s| InstanceSpec::from_shorthand(s).expect("corpus shorthands parse"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands() {
        let s = InstanceSpec::from_shorthand("cyclic:2,4@8").unwrap();
        assert_eq!(s.ring, RingSpec::Zmod { n: 8 });
        assert_eq!(s.module, ModuleSpec::CyclicProduct { moduli: vec![2, 4] });
        assert_eq!(s.id(), "cyclic:2,4@8");
        let m = InstanceSpec::from_shorthand("matrix:2:3").unwrap();
        assert_eq!(m.ring, RingSpec::Matrix { dim: 2, q: 3 });
        assert!(matches!(InstanceSpec::from_shorthand("zmod:x"), Err(Error::Parse { .. })));
        assert!(matches!(InstanceSpec::from_shorthand("field:4"), Err(Error::Parse { .. })));
    }

    #[test]
    fn json_with_defaults() {
        let s = InstanceSpec::from_json(r#"{"ring": {"kind": "zmod", "n": 6}}"#).unwrap();
        assert_eq!(s.module, ModuleSpec::Regular);
        let ctx = s.build(Caps::default(), 1).unwrap();
        assert_eq!(ctx.len(), 4);
    }

    #[test]
    fn json_errors_carry_the_field() {
        let bad_key = "{\n  \"ring\": {\"kind\": \"zmod\", \"n\": 6},\n  \"modul\": {}\n}";
        match InstanceSpec::from_json(bad_key) {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 3"), "{location}"),
            other => panic!("{other:?}"),
        }
        let text = "{\n  \"ring\": {\"kind\": \"zmod\", \"n\": \"six\"}\n}";
        match InstanceSpec::from_json(text) {
            Err(Error::Parse { location, .. }) => {
                // tagged enums are buffered, so the position is where the
                // enclosing object ends
                assert!(location.starts_with("line "), "{location}");
                assert!(location.ends_with("field `ring`"), "{location}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_tables_name_the_field() {
        // 1 + 1 = 0 but 1 + 0 = 0 breaks the identity law
        let text = r#"{"ring": {"kind": "tables", "add": [[0,1],[0,0]], "mul": [[0,0],[0,1]], "zero": 0, "one": 1}}"#;
        let s = InstanceSpec::from_json(text).unwrap();
        match s.build(Caps::default(), 1) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "field `ring`"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn caps_flag() {
        let c = CapsSpec::parse("size=10,hom=99").unwrap();
        assert_eq!(c.apply(Caps::default()), Caps { size: 10, hom: 99 });
        assert!(CapsSpec::parse("depth=3").is_err());
        let s = InstanceSpec::from_shorthand("zmod:12").unwrap();
        let tight = CapsSpec::parse("size=8").unwrap().apply(Caps::default());
        assert!(matches!(s.build(tight, 1), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn corpus_builds() {
        for spec in corpus() {
            spec.build(Caps::default(), 1).unwrap();
        }
    }
}
