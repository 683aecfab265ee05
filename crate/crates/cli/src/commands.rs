//! Command-line verbs and their dispatch into the engine.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clint_core::algebra::render_poly;
use clint_core::artinistic::{self, IrreducibleSequence, Recipe, Window};
use clint_core::closures::{check_axioms, check_nakayama, Axiom, Closure};
use clint_core::corehull::{self, Mode, Spread};
use clint_core::duality::{self, check_nakayama_interior, Interior};
use clint_core::family::random_ideal;
use clint_core::lattice::Lattice;
use clint_core::poly::{parse_generator_list, parse_poly};
use clint_core::{Error, RIdeal, Result, RingClosure, RingModel, Subspace, Truncation};

use crate::closure_spec::ClosureSpec;
use crate::record::{sha256_hex, ResultRecord, Value};
use crate::spec::RingSpecFile;

#[derive(Parser, Debug)]
#[command(name = "clint", version, about = "Closures, interiors, cores and hulls over truncated local rings")]
pub struct Cli {
    /// Print the result record as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Ring-spec file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Seed for sampled inputs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Truncation exponents, comma separated; overrides the spec default.
    #[arg(long, value_delimiter = ',')]
    pub precision: Option<Vec<u32>>,
    /// Expected result ideal; any other result exits with code 5.
    #[arg(long)]
    pub expect: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SequenceArgs {
    /// Irreducible sequence: standard, powers:(g1, g2), shifted:step=K,a=A
    /// or pair:step=K,a=A,b=B.
    #[arg(long, default_value = "standard")]
    pub sequence: String,
    /// Number of equal partial intersections that ends the search.
    #[arg(long, default_value_t = 3)]
    pub window: u32,
    /// Last index of the sequence that may be used.
    #[arg(long, default_value_t = 12)]
    pub t_max: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoreMode {
    /// Intersection of all reductions.
    Enumerate,
    /// Annihilator of the hull of the dual ideal.
    ViaDuality,
    /// Both, which must agree.
    CrossCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HullMode {
    /// Breadth-first search upward through covers.
    Search,
    /// Sum over the expansions in each truncation of the sequence.
    Enumerate,
    /// Both, which must agree.
    CrossCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReductionMode {
    /// Every minimal reduction.
    Enumerate,
    /// One minimal reduction, by dropping to maximal submodules.
    Descent,
    /// Both; the descent result must be among the enumerated ones.
    CrossCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CospreadMode {
    /// Socle dimensions over the maximal expansions.
    Direct,
    /// Also the spread of the dual ideal, which must agree.
    CrossCheck,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closure of an ideal.
    Closure {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        /// Ideal expression or a name from the spec's [ideals] table.
        #[arg(long)]
        ideal: String,
    },
    /// Interior of an ideal by the double-colon formula along an
    /// irreducible sequence.
    Interior {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        /// Ideal expression or a name from the spec's [ideals] table.
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        seq: SequenceArgs,
    },
    /// Core of an ideal of the truncation.
    Core {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        /// Ideal expression or a name from the spec's [ideals] table.
        #[arg(long)]
        ideal: String,
        #[arg(long, value_enum, default_value = "enumerate")]
        mode: CoreMode,
    },
    /// Hull of an ideal: the sum of its expansions.
    Hull {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        /// Ideal expression or a name from the spec's [ideals] table.
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        seq: SequenceArgs,
        #[arg(long, value_enum, default_value = "search")]
        mode: HullMode,
    },
    /// Minimal reductions of an ideal of the truncation.
    Reductions {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        /// Ideal expression or a name from the spec's [ideals] table.
        #[arg(long)]
        ideal: String,
        #[arg(long, value_enum, default_value = "enumerate")]
        mode: ReductionMode,
    },
    /// Maximal expansions of an ideal.
    Expansions {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        /// Ideal expression or a name from the spec's [ideals] table.
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        seq: SequenceArgs,
    },
    /// Minimal generator counts over the minimal reductions.
    Spread {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        /// Ideal expression or a name from the spec's [ideals] table.
        #[arg(long)]
        ideal: String,
    },
    /// Cogenerator counts over the maximal expansions under the dual
    /// interior.
    Cospread {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        /// Ideal expression or a name from the spec's [ideals] table.
        #[arg(long)]
        ideal: String,
        #[arg(long, value_enum, default_value = "direct")]
        mode: CospreadMode,
    },
    /// Annihilator of an ideal in the dual module, and the dual interior
    /// when a closure is given.
    Dual {
        #[command(flatten)]
        common: Common,
        /// Ideal expression or a name from the spec's [ideals] table.
        #[arg(long)]
        ideal: String,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: Option<String>,
    },
    /// Interior of the unit ideal.
    Testideal {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        #[command(flatten)]
        seq: SequenceArgs,
    },
    /// Whether a closure is trivial on a Gorenstein ring, read off an
    /// irreducible sequence.
    TrivialCheck {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
        #[command(flatten)]
        seq: SequenceArgs,
        /// First sequence index to test.
        #[arg(long, default_value_t = 1)]
        t_from: u32,
        /// Last sequence index to test.
        #[arg(long, default_value_t = 3)]
        t_to: u32,
        /// Number of random ideals to spot check.
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Membership of an element in the test ideal via maps R^{1/q} -> R/J.
    HomTest {
        #[command(flatten)]
        common: Common,
        /// The element whose membership is tested.
        #[arg(long)]
        element: String,
        /// An irreducible ideal J, as an expression or a name from the spec.
        #[arg(long)]
        ideal: String,
        /// Frobenius exponent e, with q = p^e.
        #[arg(long)]
        exponent: u32,
        /// The test element c.
        #[arg(long)]
        test_element: String,
    },
    /// Closure axioms and the Nakayama property on every ideal of the
    /// truncation.
    Check {
        #[command(flatten)]
        common: Common,
        /// Closure string or a name from the spec's [closures] table.
        #[arg(long)]
        closure: String,
    },
    /// Regression suite of interiors and hulls in small rings.
    Suite {
        /// Run only rows whose name contains this text.
        #[arg(long)]
        only: Option<String>,
    },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Closure { .. } => "closure",
            Command::Interior { .. } => "interior",
            Command::Core { .. } => "core",
            Command::Hull { .. } => "hull",
            Command::Reductions { .. } => "reductions",
            Command::Expansions { .. } => "expansions",
            Command::Spread { .. } => "spread",
            Command::Cospread { .. } => "cospread",
            Command::Dual { .. } => "dual",
            Command::Testideal { .. } => "testideal",
            Command::TrivialCheck { .. } => "trivial-check",
            Command::HomTest { .. } => "hom-test",
            Command::Check { .. } => "check",
            Command::Suite { .. } => "suite",
        }
    }

    fn common(&self) -> Option<&Common> {
        match self {
            Command::Closure { common, .. }
            | Command::Interior { common, .. }
            | Command::Core { common, .. }
            | Command::Hull { common, .. }
            | Command::Reductions { common, .. }
            | Command::Expansions { common, .. }
            | Command::Spread { common, .. }
            | Command::Cospread { common, .. }
            | Command::Dual { common, .. }
            | Command::Testideal { common, .. }
            | Command::TrivialCheck { common, .. }
            | Command::HomTest { common, .. }
            | Command::Check { common, .. } => Some(common),
            Command::Suite { .. } => None,
        }
    }

    /// The arguments as echoed in the record.
    fn echo(&self) -> BTreeMap<String, String> {
        let mut a = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            a.insert(k.to_string(), v);
        };
        if let Some(c) = self.common() {
            put("spec", c.spec.display().to_string());
            if let Some(p) = &c.precision {
                put("precision", format!("{p:?}"));
            }
            if let Some(e) = &c.expect {
                put("expect", e.clone());
            }
        }
        let seq = |put: &mut dyn FnMut(&str, String), s: &SequenceArgs| {
            put("sequence", s.sequence.clone());
            put("window", s.window.to_string());
            put("t_max", s.t_max.to_string());
        };
        match self {
            Command::Closure { closure, ideal, .. } | Command::Spread { closure, ideal, .. } => {
                put("closure", closure.clone());
                put("ideal", ideal.clone());
            }
            Command::Interior { closure, ideal, seq: s, .. } | Command::Expansions { closure, ideal, seq: s, .. } => {
                put("closure", closure.clone());
                put("ideal", ideal.clone());
                seq(&mut put, s);
            }
            Command::Hull { closure, ideal, seq: s, mode, .. } => {
                put("closure", closure.clone());
                put("ideal", ideal.clone());
                put("mode", mode_name(mode));
                seq(&mut put, s);
            }
            Command::Core { closure, ideal, mode, .. } => {
                put("closure", closure.clone());
                put("ideal", ideal.clone());
                put("mode", mode_name(mode));
            }
            Command::Reductions { closure, ideal, mode, .. } => {
                put("closure", closure.clone());
                put("ideal", ideal.clone());
                put("mode", mode_name(mode));
            }
            Command::Cospread { closure, ideal, mode, .. } => {
                put("closure", closure.clone());
                put("ideal", ideal.clone());
                put("mode", mode_name(mode));
            }
            Command::Dual { ideal, closure, .. } => {
                put("ideal", ideal.clone());
                if let Some(c) = closure {
                    put("closure", c.clone());
                }
            }
            Command::Testideal { closure, seq: s, .. } => {
                put("closure", closure.clone());
                seq(&mut put, s);
            }
            Command::TrivialCheck { closure, seq: s, t_from, t_to, samples, .. } => {
                put("closure", closure.clone());
                seq(&mut put, s);
                put("t_range", format!("{t_from}..={t_to}"));
                put("samples", samples.to_string());
            }
            Command::HomTest { element, ideal, exponent, test_element, .. } => {
                put("element", element.clone());
                put("ideal", ideal.clone());
                put("exponent", exponent.to_string());
                put("test_element", test_element.clone());
            }
            Command::Check { closure, .. } => put("closure", closure.clone()),
            Command::Suite { only, .. } => {
                if let Some(o) = only {
                    put("only", o.clone());
                }
            }
        }
        a
    }

    fn seed(&self) -> u64 {
        self.common().map_or(0, |c| c.seed)
    }
}

/// Runs one command and returns its record. Errors are folded into the
/// record's status and exit code.
pub fn run(cmd: &Command) -> ResultRecord {
    let start = Instant::now();
    let args = cmd.echo();
    let mut rec = ResultRecord::new(cmd.verb(), args, cmd.seed());
    rec.inputs.insert("args".into(), sha256_hex(serde_json::to_string(&rec.args).unwrap().as_bytes()));
    if let Err(e) = dispatch(cmd, &mut rec) {
        rec.fail(&e);
    }
    rec.elapsed_ms = start.elapsed().as_millis() as u64;
    rec
}

/// A loaded spec file with its model.
pub struct Ctx {
    pub file: RingSpecFile,
    pub expect: Option<String>,
    pub model: Arc<RingModel>,
    pub requested: Option<Vec<u32>>,
    pub seed: u64,
}

impl Ctx {
    pub fn load(common: &Common, rec: &mut ResultRecord) -> Result<Ctx> {
        let text = std::fs::read_to_string(&common.spec)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", common.spec.display())))?;
        rec.inputs.insert("spec".into(), sha256_hex(text.as_bytes()));
        let file = RingSpecFile::parse(&text)?;
        let model = file.build()?;
        rec.provenance.ring = Some(model.meta().name.clone());
        rec.provenance.field = Some(model.field().spec().to_string());
        let requested = common.precision.clone().or_else(|| file.precision.clone());
        if let Some(p) = &requested {
            if p.len() != model.vars().len() {
                return Err(Error::Usage(format!("precision needs {} exponent(s)", model.vars().len())));
            }
        }
        Ok(Ctx { file, model, requested, seed: common.seed, expect: common.expect.clone() })
    }

    pub fn ideal(&self, arg: &str) -> Result<RIdeal> {
        self.file.ideal(&self.model, arg)
    }

    pub fn closure_spec(&self, arg: &str) -> Result<ClosureSpec> {
        ClosureSpec::parse(self.file.closure_expr(arg))
    }

    pub fn ring_closure(&self, arg: &str, rec: &mut ResultRecord) -> Result<RingClosure> {
        let spec = self.closure_spec(arg)?;
        rec.provenance.closure = Some(spec.to_string());
        spec.ring(&self.model, &self.file)
    }

    /// Precision for a computation in one truncation: the requested one,
    /// enlarged to hold `i` when given.
    pub fn precision_for(&self, i: Option<&RIdeal>) -> Result<Vec<u32>> {
        match (&self.requested, i) {
            (Some(r), Some(i)) => Ok(self.model.join(r, i.precision())),
            (Some(r), None) => Ok(r.clone()),
            (None, Some(i)) => Ok(i.precision().clone()),
            (None, None) => Err(Error::Usage("no precision: pass --precision or set one in the spec".into())),
        }
    }

    /// The image of `i` in the truncation at `p`.
    pub fn space_at(&self, i: &RIdeal, p: &[u32]) -> Result<(Arc<Truncation>, Subspace)> {
        let t = self.model.truncation(p)?;
        let lifted = i.lift_to(&self.model.join(i.precision(), p))?;
        let s = self.model.project_space(lifted.truncation(), &t, lifted.space());
        Ok((t, s))
    }

    pub fn finite_closure(&self, arg: &str, p: &[u32], rec: &mut ResultRecord) -> Result<Closure> {
        let spec = self.closure_spec(arg)?;
        rec.provenance.closure = Some(spec.to_string());
        spec.finite(&self.model, &self.file, p, self.seed)
    }

    /// Compares a ring-level result with `--expect`.
    pub fn expect_ring(&self, got: &RIdeal) -> Result<()> {
        match &self.expect {
            None => Ok(()),
            Some(e) => {
                let want = self.ideal(e)?;
                if got.same_as(&want)? {
                    Ok(())
                } else {
                    Err(mismatch("expected and computed ideals", &want.to_string(), &got.to_string()))
                }
            }
        }
    }

    /// Compares an ideal of the truncation `t` with `--expect`, read in
    /// the same truncation.
    pub fn expect_finite(&self, t: &Truncation, got: &Subspace) -> Result<()> {
        match &self.expect {
            None => Ok(()),
            Some(e) => {
                let gens = parse_generator_list(self.model.field(), self.model.vars(), self.file.ideal_expr(e))?;
                let vecs = gens.iter().map(|g| self.model.element_in(t, g)).collect::<Result<Vec<_>>>()?;
                let want = t.algebra.regular().span(vecs);
                if want == *got {
                    Ok(())
                } else {
                    Err(mismatch(
                        "expected and computed ideals",
                        &format!("({})", render_space(&self.model, t, &want).join(", ")),
                        &format!("({})", render_space(&self.model, t, got).join(", ")),
                    ))
                }
            }
        }
    }

    pub fn sequence(&self, args: &SequenceArgs) -> Result<IrreducibleSequence> {
        let recipe = parse_recipe(&self.model, &args.sequence)?;
        match recipe {
            None => IrreducibleSequence::standard(&self.model, args.t_max),
            Some(r) => IrreducibleSequence::new(&self.model, r, args.t_max),
        }
    }
}

/// `standard` gives `None`.
pub fn parse_recipe(model: &RingModel, s: &str) -> Result<Option<Recipe>> {
    let s = s.trim();
    if s == "standard" {
        return Ok(None);
    }
    let (kind, rest) = s.split_once(':').ok_or_else(|| {
        Error::Usage(format!("unknown sequence '{s}', expected standard, powers:(..), shifted:.. or pair:.."))
    })?;
    let f = model.field();
    let params = |rest: &str| -> Result<BTreeMap<String, u32>> {
        let mut out = BTreeMap::new();
        for kv in rest.split(',').map(str::trim) {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Usage(format!("expected key=value, got '{kv}'")))?;
            let v: i64 = v.trim().parse().map_err(|_| Error::Usage(format!("'{v}' is not an integer")))?;
            out.insert(k.trim().to_string(), if k.trim() == "step" { v.max(0) as u32 } else { f.from_int(v) });
        }
        Ok(out)
    };
    let get = |m: &BTreeMap<String, u32>, k: &str| {
        m.get(k).copied().ok_or_else(|| Error::Usage(format!("sequence needs {k}=")))
    };
    let need_semigroup = || {
        if model.semigroup_of().is_none() {
            Err(Error::Usage(format!("'{kind}' sequences need a semigroup ring")))
        } else {
            Ok(())
        }
    };
    Ok(Some(match kind.trim() {
        "powers" => Recipe::Powers(parse_generator_list(f, model.vars(), rest)?),
        "shifted" => {
            need_semigroup()?;
            let m = params(rest)?;
            Recipe::ShiftedPrincipal { step: get(&m, "step")?, a: get(&m, "a")? }
        }
        "pair" => {
            need_semigroup()?;
            let m = params(rest)?;
            Recipe::ShiftedPair { step: get(&m, "step")?, a: get(&m, "a")?, b: get(&m, "b")? }
        }
        other => return Err(Error::Usage(format!("unknown sequence kind '{other}'"))),
    }))
}

fn mode_name<T: ValueEnum>(m: &T) -> String {
    m.to_possible_value().map_or_else(String::new, |v| v.get_name().to_string())
}

fn window(args: &SequenceArgs) -> Window {
    Window { length: args.window, t_max: args.t_max }
}

/// Canonical generators of an ideal of a truncation, in basis order.
pub fn render_space(model: &RingModel, t: &Truncation, s: &Subspace) -> Vec<String> {
    if s.is_zero() {
        return vec!["0".into()];
    }
    let reg = t.algebra.regular();
    reg.minimal_generators(s).iter().map(|v| render_poly(model, &model.poly_of(t, v))).collect()
}

/// Functionals on the monomial basis, `c*D(m)` for the dual basis element
/// of the monomial `m`.
pub fn render_functionals(t: &Truncation, s: &Subspace) -> Vec<String> {
    let a = &t.algebra;
    let f = a.field();
    let dual = a.regular().dual();
    dual.minimal_generators(s)
        .iter()
        .map(|v| {
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| {
                    let lab = format!("D({})", a.label(i));
                    if c == 1 {
                        lab
                    } else {
                        format!("{}*{lab}", f.format(c))
                    }
                })
                .collect();
            terms.join(" + ")
        })
        .collect()
}

fn ideal_value(i: &RIdeal) -> Result<Value> {
    Ok(Value::Ideal { generators: i.generator_strings()? })
}

fn mismatch(what: &str, a: &str, b: &str) -> Error {
    Error::Anomaly(format!("{what} disagree: {a} vs {b}"))
}

fn dispatch(cmd: &Command, rec: &mut ResultRecord) -> Result<()> {
    if let Command::Suite { only } = cmd {
        return crate::suite::run_into(rec, only.as_deref());
    }
    let ctx = Ctx::load(cmd.common().expect("every other verb has common args"), rec)?;
    let cap = ctx.model.caps().lattice;
    let expects = matches!(
        cmd,
        Command::Closure { .. }
            | Command::Interior { .. }
            | Command::Core { .. }
            | Command::Hull { .. }
            | Command::Testideal { .. }
    );
    if ctx.expect.is_some() && !expects {
        return Err(Error::Usage("--expect applies to closure, interior, core, hull and testideal".into()));
    }
    match cmd {
        Command::Closure { closure, ideal, .. } => {
            let i = ctx.ideal(ideal)?;
            let spec = ctx.closure_spec(closure)?;
            match spec.ring(&ctx.model, &ctx.file) {
                Ok(rc) => {
                    rec.provenance.closure = Some(spec.to_string());
                    rec.provenance.mode = Some("ring".into());
                    let (c, report) = rc.close_with_report(&i)?;
                    rec.push("closure", ideal_value(&c)?);
                    ctx.expect_ring(&c)?;
                    rec.provenance.precision = Some(c.precision().clone());
                    if let Some(r) = report {
                        rec.notes.push(format!("frobenius route {}, exponent reached {}", r.route, r.e_reached));
                        if !r.stabilized {
                            return Err(Error::Inconclusive(format!(
                                "Frobenius powers did not stabilize by e = {}; colengths {:?}",
                                r.e_reached, r.colengths
                            )));
                        }
                    }
                }
                Err(Error::Capability(_)) => {
                    let p = ctx.precision_for(Some(&i))?;
                    let cl = ctx.finite_closure(closure, &p, rec)?;
                    let (t, s) = ctx.space_at(&i, &p)?;
                    let c = cl.close(&t.algebra.regular(), &s)?;
                    rec.provenance.mode = Some("truncation".into());
                    rec.provenance.precision = Some(p);
                    rec.push("closure", Value::Ideal { generators: render_space(&ctx.model, &t, &c) });
                    ctx.expect_finite(&t, &c)?;
                }
                Err(e) => return Err(e),
            }
        }
        Command::Interior { closure, ideal, seq, .. } => {
            let i = ctx.ideal(ideal)?;
            let rc = ctx.ring_closure(closure, rec)?;
            let sq = ctx.sequence(seq)?;
            rec.provenance.mode = Some("double colon".into());
            rec.notes.push(sq.recipe().describe(&ctx.model));
            if ctx.model.meta().interior_equals_artinistic.is_none() {
                rec.notes.push("the value computed is the Artinistic version of the interior".into());
            }
            let report = artinistic::artinistic_interior(&i, &rc, &sq, window(seq))?;
            rec.provenance.stabilized_at = report.stabilized_at;
            let r = report.into_result()?;
            rec.provenance.precision = Some(r.precision().clone());
            rec.push("interior", ideal_value(&r)?);
            ctx.expect_ring(&r)?;
        }
        Command::Testideal { closure, seq, .. } => {
            let rc = ctx.ring_closure(closure, rec)?;
            let sq = ctx.sequence(seq)?;
            rec.provenance.mode = Some("double colon".into());
            rec.notes.push(sq.recipe().describe(&ctx.model));
            let report = artinistic::test_ideal(&ctx.model, &rc, &sq, window(seq))?;
            rec.provenance.stabilized_at = report.stabilized_at;
            let r = report.into_result()?;
            rec.provenance.precision = Some(r.precision().clone());
            rec.push("test_ideal", ideal_value(&r)?);
            ctx.expect_ring(&r)?;
        }
        Command::Hull { closure, ideal, seq, mode, .. } => {
            let i = ctx.ideal(ideal)?;
            let rc = ctx.ring_closure(closure, rec)?;
            let sq = ctx.sequence(seq)?;
            rec.notes.push(sq.recipe().describe(&ctx.model));
            rec.provenance.precision = Some(i.precision().clone());
            let searched = match mode {
                HullMode::Enumerate => None,
                _ => Some(artinistic::ideal_hull(&i, &rc, &sq, window(seq))?),
            };
            let enumerated = match mode {
                HullMode::Search => None,
                _ => Some(hull_by_enumeration(&i, &rc, &sq, window(seq), cap)?),
            };
            rec.provenance.mode = Some(mode_name(mode));
            if let Some(h) = &searched {
                rec.push("hull", ideal_value(&h.hull)?);
                rec.push("expansions", Value::Count { value: h.expansions.len() as u64 });
            }
            if let Some((h, n)) = &enumerated {
                if searched.is_none() {
                    rec.push("hull", ideal_value(h)?);
                    rec.push("expansions", Value::Count { value: *n as u64 });
                }
            }
            if let (Some(s), Some((e, _))) = (&searched, &enumerated) {
                if !s.hull.same_as(e)? {
                    return Err(mismatch("search and enumeration hulls", &s.hull.to_string(), &e.to_string()));
                }
            }
            let shown =
                searched.as_ref().map(|s| &s.hull).or(enumerated.as_ref().map(|e| &e.0)).expect("one route ran");
            ctx.expect_ring(shown)?;
        }
        Command::Expansions { closure, ideal, seq, .. } => {
            let i = ctx.ideal(ideal)?;
            let rc = ctx.ring_closure(closure, rec)?;
            let sq = ctx.sequence(seq)?;
            rec.notes.push(sq.recipe().describe(&ctx.model));
            rec.provenance.mode = Some("search".into());
            rec.provenance.precision = Some(i.precision().clone());
            let h = artinistic::ideal_hull(&i, &rc, &sq, window(seq))?;
            let maxs = h.maximal_expansions()?;
            let mut members = maxs.iter().map(|c| c.generator_strings()).collect::<Result<Vec<_>>>()?;
            members.sort();
            rec.push("maximal_expansions", Value::Ideals { members });
            rec.push("expansions", Value::Count { value: h.expansions.len() as u64 });
            rec.push("hull", ideal_value(&h.hull)?);
        }
        Command::Core { closure, ideal, mode, .. } => {
            let i = ctx.ideal(ideal)?;
            let p = ctx.precision_for(Some(&i))?;
            let cl = ctx.finite_closure(closure, &p, rec)?;
            let (t, n) = ctx.space_at(&i, &p)?;
            let reg = t.algebra.regular();
            rec.provenance.precision = Some(p);
            rec.provenance.mode = Some(mode_name(mode));
            let direct = match mode {
                CoreMode::ViaDuality => None,
                _ => Some(corehull::core(&cl, &reg, &n, cap)?),
            };
            let dual = match mode {
                CoreMode::Enumerate => None,
                _ => Some(corehull::core_via_duality(&cl, &reg, &n, cap)?),
            };
            let shown = direct.as_ref().or(dual.as_ref()).expect("one route ran");
            rec.push("core", Value::Ideal { generators: render_space(&ctx.model, &t, shown) });
            ctx.expect_finite(&t, shown)?;
            if let (Some(a), Some(b)) = (&direct, &dual) {
                if a != b {
                    return Err(mismatch(
                        "enumerated core and the dual of the hull",
                        &render_space(&ctx.model, &t, a).join(", "),
                        &render_space(&ctx.model, &t, b).join(", "),
                    ));
                }
            }
        }
        Command::Reductions { closure, ideal, mode, .. } => {
            let i = ctx.ideal(ideal)?;
            let p = ctx.precision_for(Some(&i))?;
            let cl = ctx.finite_closure(closure, &p, rec)?;
            let (t, n) = ctx.space_at(&i, &p)?;
            let reg = t.algebra.regular();
            rec.provenance.precision = Some(p);
            rec.provenance.mode = Some(mode_name(mode));
            let listed = |subs: &[Subspace]| {
                let mut m: Vec<Vec<String>> = subs.iter().map(|s| render_space(&ctx.model, &t, s)).collect();
                m.sort();
                m
            };
            let enumerated = match mode {
                ReductionMode::Descent => None,
                _ => Some(corehull::minimal_reductions(&cl, &reg, &n, Mode::Enumerate, cap)?),
            };
            let descended = match mode {
                ReductionMode::Enumerate => None,
                _ => Some(corehull::minimal_reductions(&cl, &reg, &n, Mode::Descent, cap)?),
            };
            if let Some(e) = &enumerated {
                rec.push("minimal_reductions", Value::Ideals { members: listed(e) });
            }
            if let Some(d) = &descended {
                rec.push("descent_reduction", Value::Ideals { members: listed(d) });
            }
            if let (Some(e), Some(d)) = (&enumerated, &descended) {
                if !d.iter().all(|x| e.contains(x)) {
                    return Err(mismatch(
                        "descent and enumeration",
                        &format!("{:?}", listed(d)),
                        &format!("{:?}", listed(e)),
                    ));
                }
            }
        }
        Command::Spread { closure, ideal, .. } => {
            let i = ctx.ideal(ideal)?;
            let p = ctx.precision_for(Some(&i))?;
            let cl = ctx.finite_closure(closure, &p, rec)?;
            let (t, n) = ctx.space_at(&i, &p)?;
            rec.provenance.precision = Some(p);
            rec.provenance.mode = Some("enumerate".into());
            push_spread(rec, "spread", corehull::spread(&cl, &t.algebra.regular(), &n, cap)?);
        }
        Command::Cospread { closure, ideal, mode, .. } => {
            let i = ctx.ideal(ideal)?;
            let p = ctx.precision_for(Some(&i))?;
            let cl = ctx.finite_closure(closure, &p, rec)?;
            let (t, a) = ctx.space_at(&i, &p)?;
            let reg = t.algebra.regular();
            let int = Interior::smile(cl.clone())?;
            rec.provenance.precision = Some(p);
            rec.provenance.mode = Some(mode_name(mode));
            let direct = corehull::cospread(&int, &reg, &a, &reg.full_space(), cap)?;
            push_spread(rec, "cospread", direct.clone());
            if *mode == CospreadMode::CrossCheck {
                let d = reg.dual();
                let other = corehull::spread(&cl, &d, &a.perp(t.algebra.field()), cap)?;
                push_spread(rec, "spread_of_annihilator", other.clone());
                if other != direct {
                    return Err(mismatch(
                        "cospread and the spread of the annihilator",
                        &direct.to_string(),
                        &other.to_string(),
                    ));
                }
            }
        }
        Command::Dual { ideal, closure, .. } => {
            let i = ctx.ideal(ideal)?;
            let p = ctx.precision_for(Some(&i))?;
            let (t, n) = ctx.space_at(&i, &p)?;
            let f = t.algebra.field();
            let reg = t.algebra.regular();
            rec.provenance.precision = Some(p.clone());
            let perp = duality::dual_submodule(&reg, &n);
            rec.push("annihilator", Value::Functionals { generators: render_functionals(&t, &perp) });
            rec.push("annihilator_dim", Value::Count { value: perp.dim() as u64 });
            rec.push("socle_dim_of_quotient", Value::Count { value: reg.quotient(&n).target.socle().dim() as u64 });
            if let Some(c) = closure {
                let cl = ctx.finite_closure(c, &p, rec)?;
                let int = Interior::smile(cl.clone())?;
                let closed = cl.close(&reg, &n)?;
                let d = reg.dual();
                let inner = int.interior(&d, &perp)?;
                rec.push("closure", Value::Ideal { generators: render_space(&ctx.model, &t, &closed) });
                rec.push("interior_of_annihilator", Value::Functionals { generators: render_functionals(&t, &inner) });
                if inner != closed.perp(f) {
                    return Err(Error::Anomaly(
                        "the dual interior of the annihilator is not the annihilator of the closure".into(),
                    ));
                }
            }
        }
        Command::TrivialCheck { closure, seq, t_from, t_to, samples, .. } => {
            let rc = ctx.ring_closure(closure, rec)?;
            let sq = ctx.sequence(seq)?;
            rec.notes.push(sq.recipe().describe(&ctx.model));
            let last = sq.ideal(*t_to)?;
            let t = last.truncation().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let sampled = (0..*samples)
                .map(|_| RIdeal::from_space(ctx.model.clone(), &t.precision, random_ideal(&t.algebra, &mut rng, 3)))
                .collect::<Result<Vec<_>>>()?;
            let r = artinistic::triviality_check(&sq, &rc, *t_from..=*t_to, &sampled)?;
            rec.provenance.precision = Some(t.precision.clone());
            for (k, closed, witness) in &r.sequence {
                let v = match witness {
                    None => format!("closed: {closed}"),
                    Some(w) => format!("closed: {closed}, witness {w}"),
                };
                rec.push(format!("J_{k}"), Value::Text { value: v });
            }
            for (name, closed) in &r.spot_checks {
                rec.push(format!("sample {name}"), Value::Flag { value: *closed });
            }
            rec.push("trivial", Value::Flag { value: r.trivial });
        }
        Command::HomTest { element, ideal, exponent, test_element, .. } => {
            let f = ctx.model.field();
            let vars = ctx.model.vars();
            let a = parse_poly(f, vars, element)?;
            let c = parse_poly(f, vars, test_element)?;
            let j = ctx.ideal(ideal)?;
            rec.provenance.mode = Some("linear system".into());
            rec.provenance.precision = Some(j.precision().clone());
            rec.notes.push("the test element is taken as given".into());
            let by_maps = artinistic::hom_test_membership(&a, &j, *exponent, &c)?;
            let by_colon = artinistic::hom_test_by_colon(&a, &j, *exponent, &c)?;
            rec.push("member", Value::Flag { value: by_maps });
            if by_maps != by_colon {
                return Err(mismatch("the map route and the colon route", &by_maps.to_string(), &by_colon.to_string()));
            }
        }
        Command::Check { closure, .. } => {
            let p = ctx.precision_for(None)?;
            let cl = ctx.finite_closure(closure, &p, rec)?;
            let t = ctx.model.truncation(&p)?;
            let reg = t.algebra.regular();
            rec.provenance.precision = Some(p);
            rec.provenance.mode = Some("enumerate".into());
            let lat = Lattice::enumerate(&reg, cap)?;
            rec.push("ideals", Value::Count { value: lat.len() as u64 });
            let props = cl.properties();
            let report = check_axioms(&cl, &lat, props.residual.claimed())?;
            let mut claimed_failure = None;
            for (axiom, prov) in [
                (Axiom::Extensive, &props.extensive),
                (Axiom::Idempotent, &props.idempotent),
                (Axiom::OrderPreserving, &props.order_preserving),
                (Axiom::Residual, &props.residual),
            ] {
                if axiom == Axiom::Residual && !prov.claimed() {
                    continue;
                }
                let holds = report.holds(axiom);
                rec.push(axiom.to_string(), Value::Text { value: format!("{holds} ({prov})") });
                if let Some(cert) = report.failures.iter().find(|c| c.axiom == axiom) {
                    let shown: Vec<String> = cert
                        .witnesses
                        .iter()
                        .map(|w| format!("({})", render_space(&ctx.model, &t, w).join(", ")))
                        .collect();
                    rec.notes.push(format!(
                        "certificate: {} fails {axiom} at {}; replays: {}",
                        cl.name(),
                        shown.join(" and "),
                        cert.replay(&cl, &reg)?
                    ));
                    if prov.claimed() && claimed_failure.is_none() {
                        claimed_failure = Some(format!("{} is claimed {axiom} but fails it", cl.name()));
                    }
                }
            }
            let nak = check_nakayama(&cl, &lat)?;
            rec.push("nakayama", Value::Text { value: format!("{} ({})", nak.holds(), props.nakayama) });
            if let Some(c) = &nak.counterexample {
                rec.notes.push(format!(
                    "nakayama certificate: L = ({}), N = ({})",
                    render_space(&ctx.model, &t, &c.l).join(", "),
                    render_space(&ctx.model, &t, &c.n).join(", ")
                ));
            }
            if props.residual.claimed() && report.all_hold() {
                let dual_lat = Lattice::enumerate(&reg.dual(), cap)?;
                let i = check_nakayama_interior(&Interior::Smile(cl.clone()), &dual_lat)?;
                rec.push("dual_interior_nakayama", Value::Flag { value: i.holds() });
                if i.holds() != nak.holds() {
                    return Err(mismatch(
                        "Nakayama for the closure and for its dual interior",
                        &nak.holds().to_string(),
                        &i.holds().to_string(),
                    ));
                }
            }
            let verdict = if report.all_hold() {
                "accepted".to_string()
            } else {
                format!("rejected ({} failing axiom(s))", report.failures.len())
            };
            rec.push("verdict", Value::Text { value: verdict });
            if let Some(msg) = claimed_failure {
                return Err(Error::Anomaly(msg));
            }
        }
        Command::Suite { .. } => unreachable!(),
    }
    Ok(())
}

fn push_spread(rec: &mut ResultRecord, label: &str, s: Spread) {
    match s {
        Spread::Exists(n) => rec.push(label, Value::Count { value: n as u64 }),
        Spread::DoesNotExist(c) => rec.push(label, Value::Text { value: format!("does not exist (counts {c:?})") }),
    }
}

/// Sum of every ideal between `I` and `R` whose interior lies in `I`,
/// with the number of such ideals.
pub fn hull_by_enumeration(
    i: &RIdeal,
    cl: &RingClosure,
    seq: &IrreducibleSequence,
    w: Window,
    cap: usize,
) -> Result<(RIdeal, usize)> {
    let model = i.model();
    let reg = i.truncation().algebra.regular();
    let lat = Lattice::interval(&reg, i.space(), &reg.full_space(), cap)?;
    let mut hull = i.clone();
    let mut count = 0;
    for c in lat.subs() {
        let ci = RIdeal::from_space(model.clone(), i.precision(), c.clone())?;
        let int = artinistic::artinistic_interior(&ci, cl, seq, w)?.into_result()?;
        if int.is_subset_of(i)? {
            hull = hull.sum(&ci)?;
            count += 1;
        }
    }
    Ok((hull, count))
}
