//! Regression suite: interiors and hulls with known answers in four small
//! rings, each over two fields.

use std::sync::Arc;

use clint_core::artinistic::{self, IrreducibleSequence, Recipe, Window};
use clint_core::poly::parse_poly;
use clint_core::{Error, Field, RIdeal, Result, RingClosure, RingModel};

use crate::record::{ResultRecord, Value};

/// One suite row: what was computed against what was expected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

type Job = Box<dyn Fn() -> Result<Row> + Send + Sync>;

fn semigroup(p: u32, gens: &[u32]) -> Result<Arc<RingModel>> {
    RingModel::semigroup(Field::prime(p)?, gens)
}

fn branches(p: u32) -> Result<Arc<RingModel>> {
    let f = Field::prime(p)?;
    let vars = vec!["x".to_string(), "y".to_string()];
    let xy = parse_poly(&f, &vars, "x*y")?;
    RingModel::presented(f, vars, vec![xy], None)
}

fn cubic(p: u32) -> Result<Arc<RingModel>> {
    let f = Field::prime(p)?;
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let tail = parse_poly(&f, &vars, "-(y^3+z^3)")?;
    RingModel::hypersurface(f, vars, 0, 3, tail)
}

#[derive(Clone, Copy)]
enum Op {
    Interior,
    Hull,
}

fn compare(
    name: String,
    op: Op,
    model: &Arc<RingModel>,
    cl: &RingClosure,
    seq: &IrreducibleSequence,
    input: &str,
    expected: &str,
) -> Result<Row> {
    let i = RIdeal::parse(model, input)?;
    let want = RIdeal::parse(model, expected)?;
    let got = match op {
        Op::Interior => artinistic::artinistic_interior(&i, cl, seq, Window::default())?.into_result()?,
        Op::Hull => artinistic::ideal_hull(&i, cl, seq, Window::default())?.hull,
    };
    Ok(Row { name, expected: want.to_string(), computed: got.to_string(), pass: got.same_as(&want)? })
}

fn jobs() -> Vec<(String, Job)> {
    let mut out: Vec<(String, Job)> = Vec::new();
    let mut add = |name: String, job: Job| out.push((name, job));
    for p in [5u32, 7] {
        for m in 2..=3u32 {
            let cases = [
                (Op::Interior, format!("(t^{m} + t^{})", m + 1), format!("(t^{}, t^{})", m + 2, m + 3)),
                (Op::Interior, format!("(t^{m}, t^{})", m + 1), format!("(t^{m}, t^{})", m + 1)),
                (Op::Hull, format!("(t^{}, t^{})", m + 2, m + 3), format!("(t^{m}, t^{})", m + 1)),
            ];
            for (op, input, expected) in cases {
                let verb = if matches!(op, Op::Interior) { "interior" } else { "hull" };
                let name = format!("<2,3> F{p} tight[dim1] {verb} {input}");
                add(
                    name.clone(),
                    Box::new(move || {
                        let model = semigroup(p, &[2, 3])?;
                        let seq = IrreducibleSequence::new(&model, Recipe::ShiftedPrincipal { step: 2, a: 0 }, 12)?;
                        compare(name.clone(), op, &model, &RingClosure::TightDim1, &seq, &input, &expected)
                    }),
                );
            }
        }
        for (input, expected) in [("(t^2, t^3)", "(1)"), ("(t^3, t^4)", "(t^3, t^4)")] {
            let name = format!("<2,3> F{p} tight[dim1] hull {input}");
            add(
                name.clone(),
                Box::new(move || {
                    let model = semigroup(p, &[2, 3])?;
                    let seq = IrreducibleSequence::new(&model, Recipe::ShiftedPrincipal { step: 2, a: 0 }, 12)?;
                    compare(name.clone(), Op::Hull, &model, &RingClosure::TightDim1, &seq, input, expected)
                }),
            );
        }
    }
    for p in [5u32, 7] {
        for m in 3..=4u32 {
            let input = format!("(t^{m})");
            let expected = format!("(t^{}, t^{}, t^{})", m + 3, m + 4, m + 5);
            let name = format!("<3,4,5> F{p} tight[dim1] interior {input}");
            add(
                name.clone(),
                Box::new(move || {
                    let model = semigroup(p, &[3, 4, 5])?;
                    let seq = IrreducibleSequence::standard(&model, 12)?;
                    compare(name.clone(), Op::Interior, &model, &RingClosure::TightDim1, &seq, &input, &expected)
                }),
            );
        }
        let name = format!("<3,4,5> F{p} tight[dim1] hull (t^6, t^7, t^8)");
        add(
            name.clone(),
            Box::new(move || {
                let model = semigroup(p, &[3, 4, 5])?;
                let seq = IrreducibleSequence::standard(&model, 12)?;
                compare(
                    name.clone(),
                    Op::Hull,
                    &model,
                    &RingClosure::TightDim1,
                    &seq,
                    "(t^6, t^7, t^8)",
                    "(t^3, t^4, t^5)",
                )
            }),
        );
    }
    for p in [3u32, 5] {
        for n in 1..=2u32 {
            for m in 1..=2u32 {
                let input = format!("(x^{}, y^{})", n + 1, m + 1);
                let expected = format!("(x^{n}, y^{m})");
                let name = format!("xy=0 F{p} tight[dim1] hull {input}");
                add(
                    name.clone(),
                    Box::new(move || {
                        let model = branches(p)?;
                        let seq = IrreducibleSequence::standard(&model, 12)?;
                        compare(name.clone(), Op::Hull, &model, &RingClosure::TightDim1, &seq, &input, &expected)
                    }),
                );
            }
        }
    }
    for (p, expected) in [(5u32, "(x*y, x*z, y^2, y*z, z^2)"), (7, "(y, z)")] {
        let name = format!("x^3+y^3+z^3 F{p} frobenius interior (y, z)");
        add(
            name.clone(),
            Box::new(move || {
                let model = cubic(p)?;
                let seq = IrreducibleSequence::standard(&model, 6)?;
                compare(
                    name.clone(),
                    Op::Interior,
                    &model,
                    &RingClosure::Frobenius { e_max: 2 },
                    &seq,
                    "(y, z)",
                    expected,
                )
            }),
        );
    }
    out
}

/// Runs the rows whose name contains `only`, in parallel, and returns them
/// in a fixed order. A row whose computation fails is reported as a
/// failing row.
pub fn run(only: Option<&str>) -> Vec<Row> {
    let selected: Vec<(String, Job)> =
        jobs().into_iter().filter(|(n, _)| only.map_or(true, |o| n.contains(o))).collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(selected.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Row>>> = (0..selected.len()).map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some((name, job)) = selected.get(k) else { break };
                let row = job().unwrap_or_else(|e| Row {
                    name: name.clone(),
                    expected: "-".into(),
                    computed: e.to_string(),
                    pass: false,
                });
                *slots[k].lock().unwrap() = Some(row);
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().unwrap().expect("every row ran")).collect()
}

pub fn run_into(rec: &mut ResultRecord, only: Option<&str>) -> Result<()> {
    let rows = run(only);
    if rows.is_empty() {
        return Err(Error::Usage("no suite rows match the filter".into()));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    for r in &rows {
        let verdict = if r.pass { "pass" } else { "FAIL" };
        rec.push(
            r.name.clone(),
            Value::Text { value: format!("{verdict}: expected {}, computed {}", r.expected, r.computed) },
        );
    }
    rec.push("passed", Value::Count { value: passed as u64 });
    rec.push("rows", Value::Count { value: rows.len() as u64 });
    if passed < rows.len() {
        return Err(Error::Anomaly(format!("{} of {} suite rows failed", rows.len() - passed, rows.len())));
    }
    Ok(())
}
