use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::funcs::{parse_number, ArbFn};
use crate::SolutionError;

/// One entry of a family's parameter schema.
#[derive(Debug, Clone, Copy)]
pub enum ParamSpec {
    /// A number that must be supplied.
    Required(&'static str),
    /// A number with a default value.
    Number(&'static str, f64),
    /// A number defaulting to another parameter's value.
    SameAs(&'static str, &'static str),
    /// An arbitrary function, given by its registry expression.
    Function(&'static str, &'static str),
}

impl ParamSpec {
    pub fn name(&self) -> &'static str {
        match *self {
            ParamSpec::Required(n)
            | ParamSpec::Number(n, _)
            | ParamSpec::SameAs(n, _)
            | ParamSpec::Function(n, _) => n,
        }
    }
}

/// Named numeric constants and function choices of a solution instance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    numbers: BTreeMap<String, f64>,
    functions: BTreeMap<String, ArbFn>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.numbers.insert(name.into(), value);
        self
    }

    pub fn with_fn(mut self, name: &str, f: ArbFn) -> Self {
        self.functions.insert(name.into(), f);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.numbers.get(name).copied()
    }

    pub fn function(&self, name: &str) -> Option<&ArbFn> {
        self.functions.get(name)
    }

    pub fn numbers(&self) -> impl Iterator<Item = (&str, f64)> {
        self.numbers.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &ArbFn)> {
        self.functions.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Checks names against `schema`, fills defaults and rejects anything
    /// missing, unknown or non-finite.
    pub(crate) fn resolve(&self, schema: &[ParamSpec]) -> Result<Params, SolutionError> {
        let invalid = |name: &str, reason: &str| SolutionError::InvalidParam {
            name: name.into(),
            reason: reason.into(),
        };
        for name in self.numbers.keys().chain(self.functions.keys()) {
            if !schema.iter().any(|s| s.name() == name) {
                return Err(invalid(name, "not a parameter of this family"));
            }
        }
        let mut out = Params::new();
        for spec in schema {
            match *spec {
                ParamSpec::Function(name, default) => {
                    if self.numbers.contains_key(name) {
                        return Err(invalid(name, "expects a function"));
                    }
                    let f = match self.functions.get(name) {
                        Some(f) => f.clone(),
                        None => default.parse()?,
                    };
                    out.functions.insert(name.into(), f);
                }
                ParamSpec::Required(name) | ParamSpec::Number(name, _) | ParamSpec::SameAs(name, _) => {
                    if self.functions.contains_key(name) {
                        return Err(invalid(name, "expects a number"));
                    }
                    let value = match (self.numbers.get(name), spec) {
                        (Some(v), _) => *v,
                        (None, ParamSpec::Number(_, d)) => *d,
                        (None, ParamSpec::SameAs(_, other)) => {
                            out.get(other).ok_or_else(|| invalid(name, "missing"))?
                        }
                        _ => return Err(invalid(name, "required")),
                    };
                    if !value.is_finite() {
                        return Err(invalid(name, "must be finite"));
                    }
                    out.numbers.insert(name.into(), value);
                }
            }
        }
        Ok(out)
    }

    /// Value of a resolved number; panics on a schema bug.
    pub(crate) fn num(&self, name: &str) -> f64 {
        self.numbers[name]
    }

    pub(crate) fn func(&self, name: &str) -> &ArbFn {
        &self.functions[name]
    }
}

/// `name=value` pairs separated by commas; a value that is not a number is
/// read as a function expression, whose own commas sit inside parentheses.
impl FromStr for Params {
    type Err = SolutionError;

    fn from_str(s: &str) -> Result<Self, SolutionError> {
        let mut out = Params::new();
        for item in split_top_level(s) {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (name, value) = item.split_once('=').ok_or_else(|| SolutionError::InvalidParam {
                name: item.into(),
                reason: "expected name=value".into(),
            })?;
            let (name, value) = (name.trim(), value.trim());
            match parse_number(value) {
                Some(v) => out.numbers.insert(name.into(), v),
                None => {
                    out.functions.insert(name.into(), value.parse()?);
                    None
                }
            };
        }
        Ok(out)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.numbers.iter().map(|(k, v)| format!("{k}={v}")).collect();
        items.extend(self.functions.iter().map(|(k, v)| format!("{k}={v}")));
        f.write_str(&items.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: &[ParamSpec] = &[
        ParamSpec::Required("c3"),
        ParamSpec::SameAs("c4", "c3"),
        ParamSpec::Number("omega2", 0.0),
        ParamSpec::Function("F", "identity"),
    ];

    #[test]
    fn parses_numbers_and_functions() {
        let p: Params = "c3=2, F=cn_bump(4pi,0.5),omega2=-1".parse().unwrap();
        assert_eq!(p.get("c3"), Some(2.0));
        assert_eq!(p.get("omega2"), Some(-1.0));
        assert_eq!(p.function("F").unwrap().name(), "cn_bump");
        assert_eq!(p.to_string(), "c3=2,omega2=-1,F=cn_bump(12.566370614359172,0.5)");
    }

    #[test]
    fn resolves_defaults() {
        let r = Params::new().with("c3", 1.5).resolve(SCHEMA).unwrap();
        assert_eq!(r.num("c4"), 1.5);
        assert_eq!(r.num("omega2"), 0.0);
        assert_eq!(*r.func("F"), ArbFn::Identity);
    }

    #[test]
    fn rejects_missing_unknown_and_mistyped() {
        assert!(Params::new().resolve(SCHEMA).is_err());
        assert!(Params::new().with("c3", 1.0).with("c9", 0.0).resolve(SCHEMA).is_err());
        assert!(Params::new().with("c3", 1.0).with("F", 0.0).resolve(SCHEMA).is_err());
        assert!(Params::new().with("c3", f64::NAN).resolve(SCHEMA).is_err());
        assert!("c3".parse::<Params>().is_err());
    }
}
