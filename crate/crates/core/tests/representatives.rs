use veronese_core::planes::{representative, PlaneClassifier, PlaneLabel};
use veronese_core::Field;

#[test]
fn representatives_classify_as_themselves() {
    for h in [2, 3, 4] {
        let f = Field::new(h).unwrap();
        let pc = PlaneClassifier::new(&f).unwrap();
        for label in PlaneLabel::present_for(f.q()) {
            let rep = representative(&f, label).unwrap();
            let inv = pc.invariants(&rep, false);
            let got = pc.classify(&rep);
            println!("q={} {label}: {:?} -> {:?}", f.q(), inv, got);
            assert_eq!(got.unwrap(), label);
            assert_eq!(Some(inv.point_od), label.point_od(f.q()));
        }
    }
}
