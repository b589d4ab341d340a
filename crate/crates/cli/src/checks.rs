use serde_json::{json, Value};

use veronese_core::exec::Execution;
use veronese_core::lines::LineLabel;
use veronese_core::orbits::{
    census, inflexion_trichotomy, nonexistence_violations, sampled_census, stabilizer_order, verify_bijections,
    BijectionReport, CensusOptions,
};
use veronese_core::planes::{hyperplane_od, representative, PlaneClassifier, PlaneLabel};
use veronese_core::veronese::pgl3_order;
use veronese_core::{Elem, Field};

use crate::{CliError, FieldArgs, Format};

pub const CHECKS: [&str; 9] = [
    "table1",
    "sigma14-bijection",
    "sigma12-bijection",
    "sigma13-bijection",
    "sigma6-hyperplanes",
    "nonexistence",
    "orbit-stabilizer",
    "inflexion-trichotomy",
    "solvers",
];

struct Outcome {
    pass: bool,
    detail: Value,
}

/// Shared state so that expensive sweeps run at most once.
struct Context {
    field: Field,
    pc: PlaneClassifier,
    slow: bool,
    bijections: Option<Vec<BijectionReport>>,
}

impl Context {
    fn bijection(&mut self, line: LineLabel) -> Result<BijectionReport, CliError> {
        if self.bijections.is_none() {
            self.bijections = Some(verify_bijections(&self.pc, Execution::Parallel)?);
        }
        let reports = self.bijections.as_ref().expect("computed");
        Ok(reports.iter().find(|r| r.line == line).expect("every line class reported").clone())
    }
}

fn unsupported(name: &str, q: u32) -> CliError {
    CliError::Usage(format!("check {name} is not available for q = {q}"))
}

fn bijection_outcome(r: &BijectionReport, label: PlaneLabel) -> Outcome {
    let labels: Vec<&str> = r.plane_labels.keys().map(|l| l.name()).collect();
    Outcome {
        pass: r.matches(label),
        detail: json!({
            "line_orbit": r.line.name(),
            "expected_planes": label.name(),
            "plane_labels": labels,
            "planes": r.planes,
            "distinct_lines": r.distinct_lines,
            "orbit_lines": r.orbit_lines,
            "wrong_line_type": r.wrong_line_type,
            "without_unique_line": r.no_unique_line,
            "example": r.example,
        }),
    }
}

fn run_check(ctx: &mut Context, name: &str) -> Result<Outcome, CliError> {
    let f = ctx.field.clone();
    let q = f.q();
    match name {
        "table1" => {
            let mut mismatches = Vec::new();
            for label in PlaneLabel::present_for(q) {
                let rep = representative(&f, label)?;
                let od = ctx.pc.invariants(&rep, false).point_od;
                let want = label.point_od(q);
                if ctx.pc.classify(&rep)? != label || want.is_some_and(|w| w != od) {
                    mismatches.push(json!({ "label": label.name(), "point_od": od.0 }));
                }
            }
            Ok(Outcome { pass: mismatches.is_empty(), detail: json!({ "mismatches": mismatches }) })
        }
        "sigma14-bijection" => {
            if !(8..=32).contains(&q) {
                return Err(unsupported(name, q));
            }
            Ok(bijection_outcome(&ctx.bijection(LineLabel::O14)?, PlaneLabel::S14))
        }
        "sigma12-bijection" | "sigma13-bijection" => {
            if !(4..=32).contains(&q) {
                return Err(unsupported(name, q));
            }
            let (line, label) =
                if name == "sigma12-bijection" { (LineLabel::O15, PlaneLabel::S12) } else { (LineLabel::O17, PlaneLabel::S13) };
            Ok(bijection_outcome(&ctx.bijection(line)?, label))
        }
        "sigma6-hyperplanes" => {
            if q < 4 {
                return Err(unsupported(name, q));
            }
            let od = hyperplane_od(&f, &representative(&f, PlaneLabel::S6)?);
            Ok(Outcome { pass: od == [0, q + 1, 1, q * q - 1], detail: json!({ "hyperplane_od": od }) })
        }
        "nonexistence" => {
            if q <= 4 || (q == 8 && ctx.slow) {
                let c = census(&ctx.pc, CensusOptions::default())?;
                let v = nonexistence_violations(q, &c.od_histogram, &c.od_witness);
                let witnesses: Vec<Value> =
                    v.iter().map(|(od, p)| json!({ "od": od.0, "plane": p.map(|p| p.to_hex()) })).collect();
                Ok(Outcome { pass: v.is_empty(), detail: json!({ "mode": "exhaustive", "violations": witnesses }) })
            } else if q == 8 {
                let r = sampled_census(&ctx.pc, Execution::Parallel, 1_000_000, 0x5eed)?;
                Ok(Outcome { pass: r.forbidden == 0, detail: json!({ "mode": "sampled", "planes": r.planes, "violations": r.forbidden }) })
            } else {
                Err(unsupported(name, q))
            }
        }
        "orbit-stabilizer" => {
            if q > 8 || (q == 8 && !ctx.slow) {
                return Err(unsupported(name, q));
            }
            let c = census(&ctx.pc, CensusOptions::default())?;
            let k = pgl3_order(u64::from(q));
            let mut rows = Vec::new();
            let mut pass = true;
            for (l, n) in &c.counts {
                let s = stabilizer_order(&f, &representative(&f, *l)?)?;
                pass &= n * s == k;
                rows.push(json!({ "label": l.name(), "count": n, "stabilizer": s }));
            }
            Ok(Outcome { pass, detail: json!({ "group_order": k, "labels": rows }) })
        }
        "inflexion-trichotomy" => {
            if q < 4 {
                return Err(unsupported(name, q));
            }
            let r = inflexion_trichotomy(&ctx.pc)?;
            let mism: Vec<String> = r.mismatches.iter().map(|e| e.to_string()).collect();
            Ok(Outcome {
                pass: r.holds(),
                detail: json!({
                    "values_with_0_1_3_inflexions": r.with,
                    "admissible": r.admissible,
                    "expected_admissible": r.expected_admissible(),
                    "mismatches": mism,
                }),
            })
        }
        "solvers" => {
            if q > 64 {
                return Err(unsupported(name, q));
            }
            let bad = solver_disagreements(&f);
            Ok(Outcome { pass: bad == 0, detail: json!({ "disagreements": bad }) })
        }
        other => Err(CliError::Usage(format!("unknown check {other:?}; known: {}, all", CHECKS.join(", ")))),
    }
}

/// Compares the closed-form solvers with exhaustive root search.
fn solver_disagreements(f: &Field) -> u64 {
    let mut bad = 0;
    let cube = |x: Elem| f.mul(f.square(x), x);
    for a in f.nonzero() {
        for b in f.elements() {
            for c in f.elements() {
                let brute: Vec<Elem> = f.elements().filter(|&x| (f.mul(a, f.square(x)) + f.mul(b, x) + c).is_zero()).collect();
                bad += u64::from(f.solve_quadratic(a, b, c).ok() != Some(brute));
            }
        }
        let brute: Vec<Elem> = f.elements().filter(|&t| (cube(t) + t + a).is_zero()).collect();
        bad += u64::from(f.depressed_cubic_roots(a).ok() != Some(brute));
    }
    for a1 in f.elements() {
        for a2 in f.elements() {
            for a3 in f.elements() {
                let brute: Vec<Elem> = f
                    .elements()
                    .filter(|&x| (cube(x) + f.mul(a1, f.square(x)) + f.mul(a2, x) + a3).is_zero())
                    .collect();
                bad += u64::from(f.monic_cubic_roots(a1, a2, a3).ok() != Some(brute));
            }
        }
    }
    bad
}

fn supported(name: &str, q: u32, slow: bool) -> bool {
    match name {
        "table1" | "solvers" => q <= 64,
        "sigma14-bijection" => (8..=32).contains(&q),
        "sigma12-bijection" | "sigma13-bijection" => (4..=32).contains(&q),
        "sigma6-hyperplanes" | "inflexion-trichotomy" => q >= 4,
        "nonexistence" => q <= 8,
        "orbit-stabilizer" => q <= 4 || (q == 8 && slow),
        _ => false,
    }
}

pub fn verify(args: &FieldArgs, names: &[String], slow: bool) -> Result<(), CliError> {
    let field = args.field()?;
    let q = field.q();
    let mut list: Vec<String> = Vec::new();
    for n in names {
        if n == "all" {
            list.extend(CHECKS.iter().filter(|c| supported(c, q, slow)).map(|c| c.to_string()));
        } else if CHECKS.contains(&n.as_str()) {
            list.push(n.clone());
        } else {
            return Err(CliError::Usage(format!("unknown check {n:?}; known: {}, all", CHECKS.join(", "))));
        }
    }
    list.dedup();
    let pc = PlaneClassifier::new(&field)?;
    let mut ctx = Context { field, pc, slow, bijections: None };
    let mut results = Vec::new();
    let mut failed = Vec::new();
    for name in &list {
        let o = run_check(&mut ctx, name)?;
        if !o.pass {
            failed.push(name.clone());
        }
        results.push((name.clone(), o));
    }
    match args.format {
        Format::Json => {
            let checks: Vec<Value> =
                results.iter().map(|(n, o)| json!({ "name": n, "pass": o.pass, "detail": o.detail })).collect();
            println!("{}", json!({ "q": q, "checks": checks }));
        }
        Format::Csv => {
            println!("check,pass,detail");
            for (n, o) in &results {
                println!("{n},{},\"{}\"", o.pass, o.detail.to_string().replace('"', "\"\""));
            }
        }
        Format::Table => {
            for (n, o) in &results {
                println!("{:<22} {}  {}", n, if o.pass { "PASS" } else { "FAIL" }, o.detail);
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}
