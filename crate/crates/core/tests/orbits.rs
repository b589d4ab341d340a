use std::collections::BTreeSet;

use veronese_core::exec::Execution;
use veronese_core::lines::LineClassifier;
use veronese_core::orbits::{census, line_orbits, plane_orbits, stabilizer_order, sym7_generators, CensusOptions};
use veronese_core::planes::{representative, PlaneClassifier, PlaneLabel};
use veronese_core::veronese::pgl3_order;
use veronese_core::Field;

#[test]
fn plane_orbits_match_labels() {
    for h in [1, 2] {
        let f = Field::new(h).unwrap();
        let pc = PlaneClassifier::new(&f).unwrap();
        let orbits = plane_orbits(&pc, Execution::Parallel).unwrap();
        assert_eq!(orbits.repeats, 0);
        println!("q={} planes={} orbits={}", f.q(), orbits.planes.len(), orbits.orbit_count());
        println!("{:?}", orbits.counts());
        assert_eq!(orbits.label_mismatches(), Vec::<String>::new());
        let c = census(&pc, CensusOptions::default()).unwrap();
        assert_eq!(c.counts, orbits.counts());
        let present: BTreeSet<PlaneLabel> = PlaneLabel::present_for(f.q()).into_iter().collect();
        assert_eq!(c.counts.keys().copied().collect::<BTreeSet<_>>(), present);
        for (label, n) in &c.counts {
            let stab = stabilizer_order(&f, &representative(&f, *label).unwrap()).unwrap();
            assert_eq!(n * stab, pgl3_order(f.q() as u64), "{label}");
        }
    }
}

#[test]
fn sym7_fusion_at_q2() {
    let f = Field::new(1).unwrap();
    let pc = PlaneClassifier::new(&f).unwrap();
    let orbits = plane_orbits(&pc, Execution::Sequential).unwrap();
    let classes = orbits.fuse(&f, &sym7_generators(&f).unwrap()).unwrap();
    for c in &classes {
        println!("{:?}", c.iter().map(|l| l.name()).collect::<Vec<_>>());
    }
    assert_eq!(classes.len(), 5);
}

#[test]
fn line_orbits_match_labels() {
    for h in [1, 2] {
        let f = Field::new(h).unwrap();
        let lc = LineClassifier::new(&f).unwrap();
        let lo = line_orbits(&lc).unwrap();
        println!("q={} lines={} orbits={}", f.q(), lo.lines.len(), lo.orbit_count());
        assert_eq!(lo.label_mismatches(), Vec::<String>::new());
    }
}
