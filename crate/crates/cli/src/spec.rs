//! Versioned ring-spec files.
//!
//! ```toml
//! version = 1
//! field = "F5"
//! precision = [10]
//!
//! [ring]
//! family = "semigroup"
//! generators = [2, 3]
//!
//! [ideals]
//! I = "(t^4, t^5)"
//!
//! [closures]
//! tight = "tight[dim1]"
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;
use std::sync::Arc;

use serde::Deserialize;
use toml::Spanned;

use clint_core::field::is_prime;
use clint_core::poly::{parse_generator_list, parse_poly};
use clint_core::{Error, Field, Poly, RIdeal, Result, RingModel};

use crate::closure_spec::ClosureSpec;

pub const SPEC_VERSION: u32 = 1;

/// The ring family and its defining data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingFamily {
    Semigroup {
        generators: Vec<u32>,
    },
    /// `k[[variables]]/(x^d - tail)`, written as the rule `x^d -> tail`.
    Hypersurface {
        variables: Vec<String>,
        rule: String,
    },
    Presented {
        variables: Vec<String>,
        relations: Vec<String>,
    },
}

/// A parsed ring-spec file. Expressions are kept as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpecFile {
    pub version: u32,
    /// Canonical field name, `F5` or `F5^2`.
    pub field: String,
    pub precision: Option<Vec<u32>>,
    pub ring: RingFamily,
    pub ideals: BTreeMap<String, String>,
    pub closures: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: Spanned<i64>,
    field: Spanned<String>,
    precision: Option<Spanned<Vec<u32>>>,
    ring: RawRing,
    #[serde(default)]
    ideals: BTreeMap<String, Spanned<String>>,
    #[serde(default)]
    closures: BTreeMap<String, Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    family: Spanned<String>,
    generators: Option<Spanned<Vec<u32>>>,
    variables: Option<Spanned<Vec<String>>>,
    rule: Option<Spanned<String>>,
    relations: Option<Vec<Spanned<String>>>,
}

/// Offset of the string contents inside the file, when the value was
/// written without escapes.
fn content_start(text: &str, span: &Range<usize>, value: &str) -> usize {
    let inner = span.start + 1..span.end.saturating_sub(1);
    match text.get(inner.clone()) {
        Some(raw) if raw == value => inner.start,
        _ => span.start,
    }
}

/// Re-anchors a parse error from an embedded expression at its place in
/// the file.
fn relocate(text: &str, span: &Range<usize>, value: &str, err: Error) -> Error {
    match err {
        Error::Parse { line: 1, column, message } => {
            let start = content_start(text, span, value);
            let offset = if start == span.start { start } else { start + column - 1 };
            Error::parse_at(text, offset, message)
        }
        Error::Parse { message, .. } => Error::parse_at(text, span.start, message),
        other => Error::parse_at(text, span.start, other.to_string()),
    }
}

/// Parses `F5`, `F25`, `F5^2` into `(p, d)`.
pub fn parse_field_name(s: &str) -> std::result::Result<(u32, u32), String> {
    let body = s.strip_prefix('F').ok_or_else(|| format!("field '{s}' must look like F5, F25 or F5^2"))?;
    let (p, d) = match body.split_once('^') {
        Some((p, d)) => {
            let p: u32 = p.parse().map_err(|_| format!("bad characteristic in '{s}'"))?;
            let d: u32 = d.parse().map_err(|_| format!("bad degree in '{s}'"))?;
            (p, d)
        }
        None => {
            let q: u32 = body.parse().map_err(|_| format!("bad field order in '{s}'"))?;
            let p = (2..=q).find(|&p| q % p == 0).ok_or_else(|| format!("field order in '{s}' must be at least 2"))?;
            let mut d = 0;
            let mut r = q;
            while r % p == 0 {
                r /= p;
                d += 1;
            }
            if r != 1 {
                return Err(format!("{q} is not a prime power"));
            }
            (p, d)
        }
    };
    if !is_prime(p) || d == 0 {
        return Err(format!("field '{s}' needs a prime characteristic and a positive degree"));
    }
    Ok((p, d))
}

/// Splits `x^3 -> -(y^3+z^3)` into the rewritten variable, its exponent
/// and the right-hand side with its offset in `rule`.
fn split_rule(rule: &str) -> std::result::Result<(String, u32, usize), (usize, String)> {
    let arrow = rule.find("->").ok_or((0, "a rule looks like 'x^3 -> -(y^3 + z^3)'".to_string()))?;
    let lhs = rule[..arrow].trim();
    let (var, deg) = match lhs.split_once('^') {
        Some((v, d)) => (v.trim(), d.trim().parse::<u32>().map_err(|_| (0, format!("bad exponent in '{lhs}'")))?),
        None => (lhs, 1),
    };
    Ok((var.to_string(), deg, arrow + 2))
}

impl RingSpecFile {
    /// Parses and validates a spec file. Every error carries the line and
    /// column of the offending text.
    pub fn parse(text: &str) -> Result<RingSpecFile> {
        let raw: RawFile = toml::from_str(text).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            Error::parse_at(text, offset, e.message().trim().to_string())
        })?;
        let version = *raw.version.get_ref();
        if version != SPEC_VERSION as i64 {
            return Err(Error::parse_at(
                text,
                raw.version.span().start,
                format!("unsupported spec version {version}, expected {SPEC_VERSION}"),
            ));
        }
        let (p, d) =
            parse_field_name(raw.field.get_ref()).map_err(|m| Error::parse_at(text, raw.field.span().start, m))?;
        let field = Field::new(p, d).map_err(|e| Error::parse_at(text, raw.field.span().start, e.to_string()))?;

        let family = raw.ring.family.get_ref().as_str();
        let fam_at = raw.ring.family.span().start;
        let need = |what: &str| Error::parse_at(text, fam_at, format!("family '{family}' needs '{what}'"));
        let forbid = |what: &str, present: bool| {
            if present {
                Err(Error::parse_at(text, fam_at, format!("family '{family}' does not take '{what}'")))
            } else {
                Ok(())
            }
        };
        let ring = match family {
            "semigroup" => {
                forbid("variables", raw.ring.variables.is_some())?;
                forbid("rule", raw.ring.rule.is_some())?;
                forbid("relations", raw.ring.relations.is_some())?;
                let g = raw.ring.generators.as_ref().ok_or_else(|| need("generators"))?;
                RingFamily::Semigroup { generators: g.get_ref().clone() }
            }
            "hypersurface" | "presented" => {
                forbid("generators", raw.ring.generators.is_some())?;
                let vars = raw.ring.variables.as_ref().ok_or_else(|| need("variables"))?;
                let variables = vars.get_ref().clone();
                for v in &variables {
                    let ok = v.len() == 1 && v.chars().all(|c| c.is_ascii_lowercase()) && v != "g";
                    if !ok {
                        return Err(Error::parse_at(
                            text,
                            vars.span().start,
                            format!("variable '{v}' must be a single lowercase letter other than g"),
                        ));
                    }
                }
                if family == "hypersurface" {
                    forbid("relations", raw.ring.relations.is_some())?;
                    let rule = raw.ring.rule.as_ref().ok_or_else(|| need("rule"))?;
                    let r = rule.get_ref();
                    let (var, _, rhs_at) = split_rule(r).map_err(|(o, m)| {
                        relocate(text, &rule.span(), r, Error::Parse { line: 1, column: o + 1, message: m })
                    })?;
                    if !variables.contains(&var) {
                        return Err(relocate(
                            text,
                            &rule.span(),
                            r,
                            Error::Parse {
                                line: 1,
                                column: 1,
                                message: format!("'{var}' is not one of the variables"),
                            },
                        ));
                    }
                    parse_poly(&field, &variables, &r[rhs_at..]).map_err(|e| {
                        let e = match e {
                            Error::Parse { line: 1, column, message } => {
                                Error::Parse { line: 1, column: column + rhs_at, message }
                            }
                            e => e,
                        };
                        relocate(text, &rule.span(), r, e)
                    })?;
                    RingFamily::Hypersurface { variables, rule: r.clone() }
                } else {
                    forbid("rule", raw.ring.rule.is_some())?;
                    let rels = raw.ring.relations.as_ref().ok_or_else(|| need("relations"))?;
                    for r in rels {
                        parse_poly(&field, &variables, r.get_ref())
                            .map_err(|e| relocate(text, &r.span(), r.get_ref(), e))?;
                    }
                    RingFamily::Presented { variables, relations: rels.iter().map(|r| r.get_ref().clone()).collect() }
                }
            }
            other => {
                return Err(Error::parse_at(
                    text,
                    fam_at,
                    format!("unsupported ring family '{other}', expected semigroup, hypersurface or presented"),
                ))
            }
        };

        let vars = match &ring {
            RingFamily::Semigroup { .. } => vec!["t".to_string()],
            RingFamily::Hypersurface { variables, .. } | RingFamily::Presented { variables, .. } => variables.clone(),
        };
        let precision = match &raw.precision {
            Some(p) => {
                if p.get_ref().len() != vars.len() || p.get_ref().contains(&0) {
                    return Err(Error::parse_at(
                        text,
                        p.span().start,
                        format!("precision needs {} positive exponent(s)", vars.len()),
                    ));
                }
                Some(p.get_ref().clone())
            }
            None => None,
        };
        for (name, expr) in &raw.ideals {
            parse_generator_list(&field, &vars, expr.get_ref())
                .map_err(|e| relocate(text, &expr.span(), expr.get_ref(), e))?;
            check_name(text, name, expr.span().start)?;
        }
        for (name, expr) in &raw.closures {
            ClosureSpec::parse(expr.get_ref()).map_err(|e| relocate(text, &expr.span(), expr.get_ref(), e))?;
            check_name(text, name, expr.span().start)?;
        }
        Ok(RingSpecFile {
            version: SPEC_VERSION,
            field: field.spec().to_string(),
            precision,
            ring,
            ideals: raw.ideals.into_iter().map(|(k, v)| (k, v.into_inner())).collect(),
            closures: raw.closures.into_iter().map(|(k, v)| (k, v.into_inner())).collect(),
        })
    }

    /// The canonical text of the file: fixed key order, one blank line
    /// between tables.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "version = {}", self.version).unwrap();
        writeln!(out, "field = {}", quote(&self.field)).unwrap();
        if let Some(p) = &self.precision {
            writeln!(out, "precision = {}", int_list(p)).unwrap();
        }
        out.push_str("\n[ring]\n");
        match &self.ring {
            RingFamily::Semigroup { generators } => {
                out.push_str("family = \"semigroup\"\n");
                writeln!(out, "generators = {}", int_list(generators)).unwrap();
            }
            RingFamily::Hypersurface { variables, rule } => {
                out.push_str("family = \"hypersurface\"\n");
                writeln!(out, "variables = {}", str_list(variables)).unwrap();
                writeln!(out, "rule = {}", quote(rule)).unwrap();
            }
            RingFamily::Presented { variables, relations } => {
                out.push_str("family = \"presented\"\n");
                writeln!(out, "variables = {}", str_list(variables)).unwrap();
                writeln!(out, "relations = {}", str_list(relations)).unwrap();
            }
        }
        for (title, table) in [("ideals", &self.ideals), ("closures", &self.closures)] {
            if table.is_empty() {
                continue;
            }
            writeln!(out, "\n[{title}]").unwrap();
            for (k, v) in table {
                writeln!(out, "{} = {}", key(k), quote(v)).unwrap();
            }
        }
        out
    }

    pub fn variables(&self) -> Vec<String> {
        match &self.ring {
            RingFamily::Semigroup { .. } => vec!["t".into()],
            RingFamily::Hypersurface { variables, .. } | RingFamily::Presented { variables, .. } => variables.clone(),
        }
    }

    /// Constructs the ring model.
    pub fn build(&self) -> Result<Arc<RingModel>> {
        let (p, d) = parse_field_name(&self.field).map_err(Error::Usage)?;
        let field = Field::new(p, d)?;
        let model = match &self.ring {
            RingFamily::Semigroup { generators } => RingModel::semigroup(field, generators)?,
            RingFamily::Hypersurface { variables, rule } => {
                let (var, deg, rhs_at) =
                    split_rule(rule).map_err(|(_, m)| Error::Construction(format!("bad rule '{rule}': {m}")))?;
                let idx = variables
                    .iter()
                    .position(|v| *v == var)
                    .ok_or_else(|| Error::Construction(format!("'{var}' is not one of the variables")))?;
                let tail = parse_poly(&field, variables, &rule[rhs_at..])?;
                RingModel::hypersurface(field, variables.clone(), idx, deg, tail)?
            }
            RingFamily::Presented { variables, relations } => {
                let rels = relations.iter().map(|r| parse_poly(&field, variables, r)).collect::<Result<Vec<Poly>>>()?;
                RingModel::presented(field, variables.clone(), rels, self.precision.clone())?
            }
        };
        Ok(model.with_caps(clint_core::Caps::from_env()?))
    }

    /// The expression of a named ideal, or `arg` itself when no ideal has
    /// that name.
    pub fn ideal_expr<'a>(&'a self, arg: &'a str) -> &'a str {
        self.ideals.get(arg).map_or(arg, String::as_str)
    }

    pub fn closure_expr<'a>(&'a self, arg: &'a str) -> &'a str {
        self.closures.get(arg).map_or(arg, String::as_str)
    }

    pub fn ideal(&self, model: &Arc<RingModel>, arg: &str) -> Result<RIdeal> {
        RIdeal::parse(model, self.ideal_expr(arg))
    }
}

fn check_name(text: &str, name: &str, at: usize) -> Result<()> {
    if name.is_empty() || name.contains(['(', ')', '[', ']', ',', '^', '*', '+']) {
        return Err(Error::parse_at(text, at, format!("name '{name}' may not contain brackets or operators")));
    }
    Ok(())
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn key(k: &str) -> String {
    if !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        k.to_string()
    } else {
        quote(k)
    }
}

fn int_list(v: &[u32]) -> String {
    format!("[{}]", v.iter().map(u32::to_string).collect::<Vec<_>>().join(", "))
}

fn str_list(v: &[String]) -> String {
    format!("[{}]", v.iter().map(|s| quote(s)).collect::<Vec<_>>().join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_names() {
        assert_eq!(parse_field_name("F5"), Ok((5, 1)));
        assert_eq!(parse_field_name("F25"), Ok((5, 2)));
        assert_eq!(parse_field_name("F3^2"), Ok((3, 2)));
        assert!(parse_field_name("F6").is_err());
        assert!(parse_field_name("F1").is_err());
        assert!(parse_field_name("Q").is_err());
    }

    #[test]
    fn rules_split_at_the_arrow() {
        assert_eq!(split_rule("x^3 -> -(y^3+z^3)").unwrap(), ("x".to_string(), 3, 6));
        assert!(split_rule("x^3 = y").is_err());
    }
}
