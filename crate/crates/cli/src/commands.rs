use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};

use veronese_core::exec::Execution;
use veronese_core::field::format_modulus;
use veronese_core::geometry::{Plane, Vec6};
use veronese_core::orbits::{
    census as run_census, config_checksum, nonexistence_violations, plane_bits, plane_orbits, sampled_census,
    stabilizer_order, sym7_generators, CensusOptions, CENSUS_FORMAT_VERSION,
};
use veronese_core::planes::{parse_pencil, representative as rep_of, representative_pencil, PlaneClassifier, PlaneLabel};
use veronese_core::veronese::pgl3_order;
use veronese_core::{Elem, Field};

use crate::{CliError, FieldArgs, Format, Group};

/// Directory for census files; defaults to the working directory.
pub const CENSUS_DIR_VAR: &str = "VERONESE_CENSUS_DIR";

/// Reads 18 hex tokens (separated by whitespace, commas or semicolons) or a
/// symmetric matrix of linear forms in x, y, z.
pub fn parse_plane(f: &Field, text: &str) -> Result<[Vec6; 3], CliError> {
    if text.contains(['x', 'y', 'z']) {
        return parse_pencil(f, text).map_err(CliError::Usage);
    }
    let tokens: Vec<&str> = text.split(|c: char| c.is_whitespace() || c == ',' || c == ';').filter(|t| !t.is_empty()).collect();
    if tokens.len() != 18 {
        return Err(CliError::Usage(format!("expected 18 field elements, got {}", tokens.len())));
    }
    let mut rows = [[Elem::ZERO; 6]; 3];
    for (k, t) in tokens.iter().enumerate() {
        let digits = t.trim_start_matches("0x");
        let bits = u32::from_str_radix(digits, 16).map_err(|_| CliError::Usage(format!("bad field element {t:?}")))?;
        rows[k / 6][k % 6] = f.elem(bits)?;
    }
    Ok(rows)
}

fn emit(format: Format, fields: &[(&str, Value)]) {
    match format {
        Format::Json => {
            let map: serde_json::Map<String, Value> = fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            println!("{}", Value::Object(map));
        }
        Format::Csv => {
            println!("{}", fields.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(","));
            let row: Vec<String> = fields.iter().map(|(_, v)| csv_cell(v)).collect();
            println!("{}", row.join(","));
        }
        Format::Table => {
            for (k, v) in fields {
                println!("{k:<18} {}", plain(v));
            }
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(plain).collect::<Vec<_>>().join(", ")),
        Value::Null => "-".into(),
        v => v.to_string(),
    }
}

fn csv_cell(v: &Value) -> String {
    let s = plain(v);
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

pub fn classify(args: &FieldArgs, text: &str) -> Result<(), CliError> {
    let f = args.field()?;
    let gens = parse_plane(&f, text)?;
    let plane = Plane::from_generators(&f, gens).map_err(|e| CliError::Usage(format!("not a plane: {e}")))?;
    let pc = PlaneClassifier::new(&f)?;
    let label = pc.classify(&plane)?;
    let inv = pc.invariants(&plane, false);
    let cubic = pc.cubic_of(&plane);
    let mut coeffs: Vec<Value> = cubic.a.iter().flatten().map(|e| json!(format!("{e}"))).collect();
    coeffs.push(json!(format!("{}", cubic.a012)));
    let infl = match label {
        PlaneLabel::S12 | PlaneLabel::S13 | PlaneLabel::S14 | PlaneLabel::S14Prime => json!(inv.inflexions),
        _ => Value::Null,
    };
    emit(
        args.format,
        &[
            ("q", json!(f.q())),
            ("label", json!(label.name())),
            ("point_od", json!(inv.point_od.0)),
            ("nucleus_meet_dim", json!(inv.nucleus_meet_dim)),
            ("cubic", Value::Array(coeffs)),
            ("cubic_type", json!(format!("{:?}", inv.cubic))),
            ("inflexion_count", infl),
        ],
    );
    Ok(())
}

pub fn representative(args: &FieldArgs, label: &str) -> Result<(), CliError> {
    let f = args.field()?;
    let label: PlaneLabel = label.parse().map_err(CliError::Usage)?;
    let pencil = representative_pencil(&f, label)?;
    let plane = rep_of(&f, label)?;
    emit(
        args.format,
        &[("label", json!(label.name())), ("pencil", json!(pencil)), ("plane", json!(plane.to_hex()))],
    );
    Ok(())
}

fn census_path(q: u32, group: Group, sampled: bool) -> PathBuf {
    let dir = std::env::var_os(CENSUS_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    let group = match group {
        Group::Pgl3 => "pgl3",
        Group::Sym7 => "sym7",
    };
    let suffix = if sampled { "-sampled" } else { "" };
    dir.join(format!("census-q{q}-{group}{suffix}.json"))
}

fn print_counts(format: Format, rows: &[(String, u64)], path: &std::path::Path, body: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(body).expect("serializable")),
        Format::Csv => {
            println!("label,count");
            for (l, n) in rows {
                println!("{l},{n}");
            }
        }
        Format::Table => {
            for (l, n) in rows {
                println!("{l:<28} {n:>12}");
            }
            println!("{:<28} {:>12}", "total", rows.iter().map(|r| r.1).sum::<u64>());
            println!("census written to {}", path.display());
        }
    }
}

pub fn census(args: &FieldArgs, group: Group, shards: usize, slow: bool) -> Result<(), CliError> {
    let f = args.field()?;
    let q = f.q();
    let start = Instant::now();
    if q > 8 {
        return Err(CliError::Usage(format!("census is supported for q in 2, 4, 8, not {q}")));
    }
    let pc = PlaneClassifier::new(&f)?;
    if group == Group::Sym7 && q != 2 {
        return Err(CliError::Usage("the Sym(7) fusion exists only for q = 2".into()));
    }
    let mut failed = Vec::new();
    let present: BTreeSet<PlaneLabel> = PlaneLabel::present_for(q).into_iter().collect();
    let (mut body, rows) = if q == 8 && !slow {
        let report = sampled_census(&pc, Execution::Parallel, 1_000_000, 0x5eed)?;
        if report.counts.keys().copied().collect::<BTreeSet<_>>() != present {
            failed.push("labels".to_string());
        }
        if report.forbidden > 0 {
            failed.push("nonexistence".to_string());
        }
        if report.equivariance_failures > 0 {
            failed.push("equivariance".to_string());
        }
        let mut labels = serde_json::Map::new();
        for (l, n) in &report.counts {
            labels.insert(l.name().into(), json!({ "count": n, "representative": plane_bits(&f, &rep_of(&f, *l)?) }));
        }
        let body = json!({
            "version": CENSUS_FORMAT_VERSION,
            "q": q,
            "modulus": format_modulus(f.modulus()),
            "group": "pgl3",
            "mode": "sampled",
            "checksum": config_checksum(q, f.modulus(), "pgl3-sampled"),
            "labels": labels,
            "totals": { "planes": report.planes, "orbits": report.counts.len() },
            "equivariance_checks": report.equivariance_checks,
        });
        let rows = report.counts.iter().map(|(l, n)| (l.name().to_string(), *n)).collect();
        (body, rows)
    } else if group == Group::Sym7 {
        let orbits = plane_orbits(&pc, Execution::Parallel)?;
        let classes = orbits.fuse(&f, &sym7_generators(&f)?)?;
        let counts = orbits.counts();
        let mut labels = serde_json::Map::new();
        let mut rows = Vec::new();
        for class in &classes {
            let name = class.iter().map(|l| l.name()).collect::<Vec<_>>().join("+");
            let n: u64 = class.iter().map(|l| counts[l]).sum();
            let first = *class.iter().next().expect("non-empty class");
            labels.insert(
                name.clone(),
                json!({
                    "count": n,
                    "members": class.iter().map(|l| l.name()).collect::<Vec<_>>(),
                    "representative": plane_bits(&f, &rep_of(&f, first)?),
                }),
            );
            rows.push((name, n));
        }
        let body = json!({
            "version": CENSUS_FORMAT_VERSION,
            "q": q,
            "modulus": format_modulus(f.modulus()),
            "group": "sym7",
            "checksum": config_checksum(q, f.modulus(), "sym7"),
            "labels": labels,
            "totals": { "planes": orbits.planes.len(), "orbits": classes.len() },
        });
        (body, rows)
    } else {
        let c = run_census(&pc, CensusOptions { exec: Execution::Parallel, shards })?;
        if c.counts.keys().copied().collect::<BTreeSet<_>>() != present {
            failed.push("labels".to_string());
        }
        if !nonexistence_violations(q, &c.od_histogram, &c.od_witness).is_empty() {
            failed.push("nonexistence".to_string());
        }
        let k = pgl3_order(u64::from(q));
        for (l, n) in &c.counts {
            if n * stabilizer_order(&f, &rep_of(&f, *l)?)? != k {
                failed.push(format!("orbit-stabilizer {l}"));
            }
        }
        let rows = c.counts.iter().map(|(l, n)| (l.name().to_string(), *n)).collect();
        (c.to_json(None)?, rows)
    };
    body["runtime_seconds"] = json!(start.elapsed().as_secs_f64());
    let path = census_path(q, group, q == 8 && !slow);
    std::fs::write(&path, serde_json::to_string_pretty(&body).expect("serializable") + "\n")?;
    print_counts(args.format, &rows, &path, &body);
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}
