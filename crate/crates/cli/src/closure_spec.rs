//! Closure strategy strings such as `tight[socle,tau=m]`.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clint_core::family::random_ideal;
use clint_core::{Closure, Error, RIdeal, Result, RingClosure, RingModel};

use crate::spec::RingSpecFile;

/// The module `B` of a `module[B=...]` closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleChoice {
    Residue,
    Regular,
    Dual,
    Normalization,
    /// `A/I` for a random ideal drawn from the seed.
    Random,
    /// `A/I` for an ideal given by expression or name.
    Quotient(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureSpec {
    Identity,
    Integral,
    TightDim1,
    /// `None` stands for the maximal ideal.
    TightSocle {
        tau: Option<String>,
    },
    Frobenius {
        e_max: u32,
    },
    Module(ModuleChoice),
    Residue,
    Collapse,
    Broken,
}

pub const DEFAULT_E_MAX: u32 = 3;

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line: 1, column, message: message.into() }
}

/// Splits `name[args]` into the name and the argument text with its
/// offset.
fn split_args(s: &str) -> Result<(&str, Option<(&str, usize)>)> {
    match s.find('[') {
        None => Ok((s, None)),
        Some(open) => {
            if !s.ends_with(']') {
                return Err(err(s.len() + 1, "missing closing ']'"));
            }
            Ok((&s[..open], Some((&s[open + 1..s.len() - 1], open + 1))))
        }
    }
}

impl ClosureSpec {
    pub fn parse(text: &str) -> Result<ClosureSpec> {
        let lead = text.len() - text.trim_start().len();
        let s = text.trim();
        let (name, args) = split_args(s)?;
        let col = |off: usize| lead + off + 1;
        let no_args = |spec: ClosureSpec| match args {
            None => Ok(spec),
            Some((_, at)) => Err(err(col(at), format!("'{name}' takes no arguments"))),
        };
        match name {
            "identity" => no_args(ClosureSpec::Identity),
            "integral" => no_args(ClosureSpec::Integral),
            "residue" => no_args(ClosureSpec::Residue),
            "collapse" => no_args(ClosureSpec::Collapse),
            "broken" => no_args(ClosureSpec::Broken),
            "tight" => {
                let (a, at) = args.ok_or_else(|| err(col(name.len()), "tight needs [dim1] or [socle,tau=...]"))?;
                if a == "dim1" {
                    return Ok(ClosureSpec::TightDim1);
                }
                if a == "socle" {
                    return Ok(ClosureSpec::TightSocle { tau: None });
                }
                match a.strip_prefix("socle,") {
                    Some(rest) => {
                        let rest_at = at + "socle,".len();
                        let tau = rest
                            .trim_start()
                            .strip_prefix("tau=")
                            .ok_or_else(|| err(col(rest_at), "expected tau=..."))?;
                        let tau = tau.trim();
                        if tau.is_empty() {
                            return Err(err(col(rest_at), "tau needs an ideal"));
                        }
                        Ok(ClosureSpec::TightSocle { tau: if tau == "m" { None } else { Some(tau.to_string()) } })
                    }
                    None => Err(err(col(at), format!("unknown tight closure variant '{a}'"))),
                }
            }
            "frobenius" => match args {
                None => Ok(ClosureSpec::Frobenius { e_max: DEFAULT_E_MAX }),
                Some((a, at)) => {
                    let v = a.trim().strip_prefix("e_max=").ok_or_else(|| err(col(at), "expected e_max=N"))?;
                    let e_max: u32 = v.trim().parse().map_err(|_| err(col(at), format!("'{v}' is not a count")))?;
                    if e_max == 0 {
                        return Err(err(col(at), "e_max must be at least 1"));
                    }
                    Ok(ClosureSpec::Frobenius { e_max })
                }
            },
            "module" => {
                let (a, at) = args.ok_or_else(|| err(col(name.len()), "module needs [B=...]"))?;
                let b = a.trim().strip_prefix("B=").ok_or_else(|| err(col(at), "expected B=..."))?.trim();
                let choice = match b {
                    "k" => ModuleChoice::Residue,
                    "A" => ModuleChoice::Regular,
                    "dual" => ModuleChoice::Dual,
                    "normalization" => ModuleChoice::Normalization,
                    "random" => ModuleChoice::Random,
                    _ => match b.strip_prefix("A/") {
                        Some(i) if !i.trim().is_empty() => ModuleChoice::Quotient(i.trim().to_string()),
                        _ => {
                            return Err(err(
                                col(at),
                                format!(
                                    "unknown module '{b}', expected k, A, dual, normalization, random or A/<ideal>"
                                ),
                            ))
                        }
                    },
                };
                Ok(ClosureSpec::Module(choice))
            }
            "" => Err(err(col(0), "empty closure name")),
            other => Err(err(col(0), format!("unknown closure '{other}'"))),
        }
    }

    /// The closure on ideals of the complete ring.
    pub fn ring(&self, model: &Arc<RingModel>, file: &RingSpecFile) -> Result<RingClosure> {
        Ok(match self {
            ClosureSpec::Identity => RingClosure::Identity,
            ClosureSpec::Integral => RingClosure::Integral,
            ClosureSpec::TightDim1 => RingClosure::TightDim1,
            ClosureSpec::TightSocle { tau } => RingClosure::TightSocle { tau: tau_ideal(model, file, tau)? },
            ClosureSpec::Frobenius { e_max } => RingClosure::Frobenius { e_max: *e_max },
            other => {
                return Err(Error::Capability(format!(
                    "{other} acts on one truncation only; use it with core, reductions, spread, cospread, dual or check"
                )))
            }
        })
    }

    /// The closure on submodules of modules over the truncation at `p`.
    pub fn finite(&self, model: &Arc<RingModel>, file: &RingSpecFile, p: &[u32], seed: u64) -> Result<Closure> {
        let t = model.truncation(p)?;
        let reg = t.algebra.regular();
        Ok(match self {
            ClosureSpec::Identity => Closure::Identity,
            ClosureSpec::Frobenius { .. } => Closure::Frobenius,
            ClosureSpec::Integral | ClosureSpec::TightDim1 | ClosureSpec::TightSocle { .. } => {
                self.ring(model, file)?.finite(model, p)?
            }
            ClosureSpec::Residue => Closure::ResidueField,
            ClosureSpec::Collapse => Closure::Collapse,
            ClosureSpec::Broken => Closure::Broken,
            ClosureSpec::Module(choice) => {
                let b = match choice {
                    ModuleChoice::Residue => reg.quotient(&t.algebra.maximal_space()).target,
                    ModuleChoice::Regular => reg.clone(),
                    ModuleChoice::Dual => reg.dual(),
                    ModuleChoice::Normalization => model.normalization(p)?.0,
                    ModuleChoice::Random => {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        reg.quotient(&random_ideal(&t.algebra, &mut rng, 2)).target
                    }
                    ModuleChoice::Quotient(expr) => {
                        let i = file.ideal(model, expr)?;
                        let lifted = i.lift_to(&model.join(i.precision(), p))?;
                        reg.quotient(&model.project_space(lifted.truncation(), &t, lifted.space())).target
                    }
                };
                Closure::module(self.module_label(), b)
            }
        })
    }

    fn module_label(&self) -> String {
        match self {
            ClosureSpec::Module(c) => match c {
                ModuleChoice::Residue => "k".into(),
                ModuleChoice::Regular => "A".into(),
                ModuleChoice::Dual => "dual".into(),
                ModuleChoice::Normalization => "normalization".into(),
                ModuleChoice::Random => "random".into(),
                ModuleChoice::Quotient(i) => format!("A/{i}"),
            },
            _ => String::new(),
        }
    }
}

fn tau_ideal(model: &Arc<RingModel>, file: &RingSpecFile, tau: &Option<String>) -> Result<RIdeal> {
    match tau {
        None => RIdeal::maximal(model),
        Some(expr) => file.ideal(model, expr),
    }
}

impl fmt::Display for ClosureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureSpec::Identity => f.write_str("identity"),
            ClosureSpec::Integral => f.write_str("integral"),
            ClosureSpec::TightDim1 => f.write_str("tight[dim1]"),
            ClosureSpec::TightSocle { tau: None } => f.write_str("tight[socle,tau=m]"),
            ClosureSpec::TightSocle { tau: Some(t) } => write!(f, "tight[socle,tau={t}]"),
            ClosureSpec::Frobenius { e_max } => write!(f, "frobenius[e_max={e_max}]"),
            ClosureSpec::Module(_) => write!(f, "module[B={}]", self.module_label()),
            ClosureSpec::Residue => f.write_str("residue"),
            ClosureSpec::Collapse => f.write_str("collapse"),
            ClosureSpec::Broken => f.write_str("broken"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips() {
        for s in [
            "identity",
            "integral",
            "tight[dim1]",
            "tight[socle,tau=m]",
            "tight[socle,tau=(x, y^2)]",
            "frobenius[e_max=2]",
            "module[B=k]",
            "module[B=A/(t^4, t^5)]",
            "module[B=random]",
            "residue",
            "collapse",
            "broken",
        ] {
            assert_eq!(ClosureSpec::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(ClosureSpec::parse("frobenius").unwrap(), ClosureSpec::Frobenius { e_max: DEFAULT_E_MAX });
        assert_eq!(ClosureSpec::parse("tight[socle]").unwrap(), ClosureSpec::TightSocle { tau: None });
    }

    #[test]
    fn errors_point_into_the_string() {
        match ClosureSpec::parse("frobenius[e_max=x]") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 11),
            other => panic!("{other:?}"),
        }
        match ClosureSpec::parse("tight[dim2]") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
        assert!(ClosureSpec::parse("plus").is_err());
        assert!(ClosureSpec::parse("module[B=A/]").is_err());
    }
}
