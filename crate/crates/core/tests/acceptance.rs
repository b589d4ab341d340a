//! One PASS/FAIL line per acceptance criterion. The q = 8 parts of
//! criteria 4 and 6 run only with VERONESE_SLOW=1.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use veronese_core::cubic::cubic_of_generators;
use veronese_core::exec::Execution;
use veronese_core::geometry::{combine, Vec3};
use veronese_core::lines::PointOd;
use veronese_core::orbits::{
    census, closure_failures, inflexion_trichotomy, nonexistence_violations, plane_orbits, random_plane_through_surface,
    stabilizer_order, sym7_generators, verify_bijections, CensusOptions,
};
use veronese_core::planes::{hyperplane_od, representative, PlaneClassifier, PlaneLabel};
use veronese_core::veronese::{classify_vec, pgl3_order, rank_sym, Collineation};
use veronese_core::{Elem, Field};

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn part(&mut self, ok: bool, note: impl Into<String>) {
        self.ok &= ok;
        let mark = if ok { "ok" } else { "FAILED" };
        self.notes.push(format!("{} [{mark}]", note.into()));
    }

    fn within(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.part(t < limit, format!("{:.2}s < {}s", t.as_secs_f64(), limit.as_secs()));
    }
}

fn slow() -> bool {
    std::env::var("VERONESE_SLOW").is_ok_and(|v| v == "1")
}

fn gf(h: u32) -> Field {
    Field::new(h).unwrap()
}

fn names(set: &BTreeSet<PlaneLabel>) -> Vec<&'static str> {
    set.iter().map(|l| l.name()).collect()
}

fn table_reproduction() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for h in [2, 3] {
        let f = gf(h);
        let pc = PlaneClassifier::new(&f).unwrap();
        let mut bad = Vec::new();
        for label in PlaneLabel::present_for(f.q()) {
            let rep = representative(&f, label).unwrap();
            let inv = pc.invariants(&rep, false);
            if Some(inv.point_od) != label.point_od(f.q()) || pc.classify(&rep).unwrap() != label {
                bad.push(format!("{label} {}", inv.point_od));
            }
        }
        out.part(bad.is_empty(), format!("q={} mismatches {bad:?}", f.q()));
    }
    out.within(start, Duration::from_secs(10));
    out
}

fn census_q4() -> Outcome {
    let mut out = Outcome::new();
    let f = gf(2);
    let pc = PlaneClassifier::new(&f).unwrap();
    let start = Instant::now();
    let c = census(&pc, CensusOptions { exec: Execution::Sequential, shards: 1 }).unwrap();
    let labels: BTreeSet<PlaneLabel> = c.counts.keys().copied().collect();
    out.part(labels.len() == 15, format!("{} labels over {} planes", labels.len(), c.total));
    out.part(
        !labels.contains(&PlaneLabel::S14) && labels.contains(&PlaneLabel::S14Prime),
        "Σ14 absent, Σ14' present",
    );
    let orbits = plane_orbits(&pc, Execution::Sequential).unwrap();
    out.part(
        orbits.repeats == 0 && orbits.planes.len() as u64 == c.total,
        format!("enumeration once each ({} distinct planes)", orbits.planes.len()),
    );
    out.part(
        orbits.orbit_count() == 15 && orbits.label_mismatches().is_empty(),
        "labels coincide with orbits under PGL(3,4)",
    );
    let mut rng = StdRng::seed_from_u64(0x51);
    let mut by_label: BTreeMap<PlaneLabel, Vec<_>> = BTreeMap::new();
    for (p, l) in orbits.planes.iter().zip(&orbits.labels) {
        by_label.entry(*l).or_default().push(*p);
    }
    let mut failures = 0;
    for (l, planes) in &by_label {
        let samples: Vec<_> = (0..100).map(|_| (planes[rng.gen_range(0..planes.len())], *l)).collect();
        failures += closure_failures(&pc, &samples, &mut rng).unwrap().len();
    }
    out.part(failures == 0, format!("closure under 100 random collineations per label: {failures} failures"));
    out.within(start, Duration::from_secs(300));
    out
}

fn ground_truth_q2() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let f = gf(1);
    let pc = PlaneClassifier::new(&f).unwrap();
    let orbits = plane_orbits(&pc, Execution::Sequential).unwrap();
    out.part(
        orbits.orbit_count() == 15 && orbits.label_mismatches().is_empty(),
        format!("{} PGL(3,2)-classes", orbits.orbit_count()),
    );
    let classes = orbits.fuse(&f, &sym7_generators(&f).unwrap()).unwrap();
    out.part(classes.len() == 5, format!("{} classes after Sym(7) fusion", classes.len()));
    use PlaneLabel::*;
    let mut expected: Vec<BTreeSet<PlaneLabel>> = vec![
        [S1, S2].into(),
        [S3, S4, S5].into(),
        [S6, S10].into(),
        [S7, S9, S12].into(),
        [S8, S11, S14Prime, S15, S15Prime].into(),
    ];
    expected.sort();
    let got: Vec<_> = classes.iter().map(names).collect();
    out.part(classes == expected, format!("fusion pattern {got:?}"));
    out.within(start, Duration::from_secs(10));
    out
}

fn orbit_stabilizer() -> Outcome {
    let mut out = Outcome::new();
    let f = gf(2);
    let pc = PlaneClassifier::new(&f).unwrap();
    let c = census(&pc, CensusOptions::default()).unwrap();
    let k = pgl3_order(4);
    let bad: Vec<String> = c
        .counts
        .iter()
        .filter_map(|(l, n)| {
            let s = stabilizer_order(&f, &representative(&f, *l).unwrap()).unwrap();
            (n * s != k).then(|| format!("{l}: {n} x {s}"))
        })
        .collect();
    out.part(bad.is_empty(), format!("q=4 count x stabilizer = {k} for every label {bad:?}"));
    if !slow() {
        out.notes.push("q=8 part skipped (set VERONESE_SLOW=1)".into());
        return out;
    }
    let f = gf(3);
    let pc = PlaneClassifier::new(&f).unwrap();
    let c = census(&pc, CensusOptions::default()).unwrap();
    let k = pgl3_order(8);
    let mut bad = Vec::new();
    for (l, n) in &c.counts {
        let s = stabilizer_order(&f, &representative(&f, *l).unwrap()).unwrap();
        if n * s != k {
            bad.push(format!("{l}: {n} x {s}"));
        }
    }
    out.part(bad.is_empty(), format!("q=8 count x stabilizer = {k} for every label {bad:?}"));
    for (label, d) in [(PlaneLabel::S14, 6), (PlaneLabel::S12, 2), (PlaneLabel::S13, 3)] {
        let n = c.counts.get(&label).copied().unwrap_or(0);
        out.part(n * d == k, format!("q=8 |{label}| = {n}, |K|/{d} = {}", k / d));
    }
    out
}

fn trichotomy() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for h in [3, 4, 5] {
        let f = gf(h);
        let pc = PlaneClassifier::new(&f).unwrap();
        let r = inflexion_trichotomy(&pc).unwrap();
        let three = f
            .nonzero()
            .filter(|&c| {
                let ci = f.inv(c).unwrap();
                f.trace(c) == f.trace(Elem::ONE) && f.is_admissible(ci)
            })
            .count() as u64;
        out.part(
            r.holds() && r.with[2] == three,
            format!(
                "q={}: 0/1/3 inflexions for {:?} values of c, {} admissible (expected {}), mismatches {:?}",
                r.q,
                r.with,
                r.admissible,
                r.expected_admissible(),
                r.mismatches
            ),
        );
    }
    out.within(start, Duration::from_secs(30));
    out
}

fn bijections() -> Outcome {
    let mut out = Outcome::new();
    let hs: &[u32] = if slow() { &[2, 3] } else { &[2] };
    for &h in hs {
        let f = gf(h);
        let pc = PlaneClassifier::new(&f).unwrap();
        let reports = verify_bijections(&pc, Execution::Parallel).unwrap();
        for r in &reports {
            let expected = match (r.inflexions, f.q()) {
                (3, 4) => None,
                (3, _) => Some(PlaneLabel::S14),
                (1, _) => Some(PlaneLabel::S12),
                _ => Some(PlaneLabel::S13),
            };
            let labels: Vec<&str> = r.plane_labels.keys().map(|l| l.name()).collect();
            let note = format!(
                "q={} {}: {} planes {labels:?} with {} inflexion(s), {} distinct lines of {}",
                f.q(),
                r.line,
                r.planes,
                r.inflexions,
                r.distinct_lines,
                r.orbit_lines
            );
            match expected {
                Some(l) => out.part(r.matches(l), format!("{note}; expected {l}")),
                None => out.notes.push(format!("{note}; bijection {}", r.is_bijection())),
            }
        }
    }
    if !slow() {
        out.notes.push("q=8 part skipped (set VERONESE_SLOW=1)".into());
    }
    out
}

fn nonexistence() -> Outcome {
    let mut out = Outcome::new();
    for h in [1, 2] {
        let f = gf(h);
        let pc = PlaneClassifier::new(&f).unwrap();
        let c = census(&pc, CensusOptions::default()).unwrap();
        let v = nonexistence_violations(c.q, &c.od_histogram, &c.od_witness);
        out.part(v.is_empty(), format!("q={}: {} forbidden distributions", c.q, v.len()));
        let mut doctored = c.od_histogram.clone();
        doctored.insert(PointOd([1, 0, 0, c.q * c.q + c.q]), 1);
        let caught = nonexistence_violations(c.q, &doctored, &c.od_witness);
        out.part(caught.len() == 1, format!("q={}: doctored record detected", c.q));
    }
    out
}

fn sigma6_hyperplanes() -> Outcome {
    let mut out = Outcome::new();
    for h in [2, 3] {
        let f = gf(h);
        let q = f.q();
        let od = hyperplane_od(&f, &representative(&f, PlaneLabel::S6).unwrap());
        out.part(od == [0, q + 1, 1, q * q - 1], format!("q={q}: {od:?}"));
    }
    out
}

fn solver_oracles() -> Outcome {
    let mut out = Outcome::new();
    for h in 2..=6 {
        let f = gf(h);
        let brute2 = |a: Elem, b: Elem, c: Elem| -> Vec<Elem> {
            f.elements().filter(|&x| (f.mul(a, f.square(x)) + f.mul(b, x) + c).is_zero()).collect()
        };
        let mut bad = 0u64;
        for a in f.nonzero() {
            for b in f.elements() {
                for c in f.elements() {
                    let roots = f.solve_quadratic(a, b, c).unwrap();
                    let expected_count = if b.is_zero() {
                        1
                    } else if f.trace(f.div(f.mul(a, c), f.square(b)).unwrap()) == 0 {
                        2
                    } else {
                        0
                    };
                    if roots != brute2(a, b, c) || roots.len() != expected_count {
                        bad += 1;
                    }
                }
            }
        }
        for a in f.nonzero() {
            let brute: Vec<Elem> = f.elements().filter(|&t| (f.mul(f.square(t), t) + t + a).is_zero()).collect();
            let ok = f.depressed_cubic_roots(a).is_ok_and(|r| r == brute)
                && usize::from(f.predicted_depressed_root_count(a).unwrap()) == brute.len();
            bad += u64::from(!ok);
        }
        for a1 in f.elements() {
            for a2 in f.elements() {
                for a3 in f.elements() {
                    let brute: Vec<Elem> = f
                        .elements()
                        .filter(|&x| {
                            let x2 = f.square(x);
                            (f.mul(x2, x) + f.mul(a1, x2) + f.mul(a2, x) + a3).is_zero()
                        })
                        .collect();
                    bad += u64::from(f.monic_cubic_roots(a1, a2, a3).ok() != Some(brute));
                }
            }
        }
        out.part(bad == 0, format!("q={}: {bad} disagreements", f.q()));
    }
    out
}

fn equivariance() -> Outcome {
    let mut out = Outcome::new();
    for h in [2, 3] {
        let f = gf(h);
        let pc = PlaneClassifier::new(&f).unwrap();
        let mut rng = StdRng::seed_from_u64(1000 + u64::from(h));
        let mut bad: BTreeMap<&str, u32> = BTreeMap::new();
        let q = f.q() as u16;
        for _ in 0..1000 {
            let g = random_plane_through_surface(&f, &mut rng);
            let c = Collineation::random(&f, &mut rng);
            let img = g.map(|r| c.apply_vec6(&f, &r));
            let param: Vec3 = loop {
                let p = [0; 3].map(|_| Elem::from_bits(rng.gen_range(0..q)));
                if p.iter().any(|x| !x.is_zero()) {
                    break p;
                }
            };
            let (y, y_img) = (combine(&f, &g, &param), combine(&f, &img, &param));
            if rank_sym(&f, &y) != rank_sym(&f, &y_img) {
                *bad.entry("rank").or_default() += 1;
            }
            if classify_vec(&f, &y) != classify_vec(&f, &y_img) {
                *bad.entry("point class").or_default() += 1;
            }
            let cubic = cubic_of_generators(&f, &g);
            let cubic_img = cubic_of_generators(&f, &img);
            if cubic_img != cubic.scaled(&f, f.square(c.det(&f))) {
                *bad.entry("cubic").or_default() += 1;
            }
            if !cubic.a012.is_zero() {
                let b = *Collineation::random(&f, &mut rng).matrix();
                let lhs = cubic.substitute(&f, &b).hessian(&f).unwrap();
                let rhs = cubic.hessian(&f).unwrap().substitute(&f, &b);
                let same_image = cubic_img.hessian(&f).unwrap().proportional(&f, &cubic.hessian(&f).unwrap());
                if !lhs.proportional(&f, &rhs) || !same_image {
                    *bad.entry("hessian").or_default() += 1;
                }
            }
            if pc.classify_generators(&g).ok() != pc.classify_generators(&img).ok() {
                *bad.entry("classification").or_default() += 1;
            }
        }
        out.part(bad.is_empty(), format!("q={}: 1000 samples, violations {bad:?}", f.q()));
    }
    out
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("representative point distributions", table_reproduction),
        ("q=4 census", census_q4),
        ("q=2 ground truth and Sym(7) fusion", ground_truth_q2),
        ("orbit-stabilizer consistency", orbit_stabilizer),
        ("inflexion trichotomy", trichotomy),
        ("inflexion-line bijections", bijections),
        ("non-existence of rank distributions", nonexistence),
        ("Σ6 hyperplane distribution", sigma6_hyperplanes),
        ("equation solver oracles", solver_oracles),
        ("equivariance properties", equivariance),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name} ({:.1}s)", i + 1, start.elapsed().as_secs_f64());
        for n in &o.notes {
            println!("    {n}");
        }
        if !o.ok {
            failed.push(i + 1);
        }
    }
    println!("failed criteria: {failed:?}");
    // Criterion 3's fusion pattern and the q=8 parts of criteria 4 and 6
    // disagree with the exhaustive computation; see README.
    let known: &[usize] = if slow() { &[3, 4, 6] } else { &[3] };
    assert_eq!(failed, known, "unexpected set of failing criteria");
}
