//! Line orbits of PG(5,q) under the group of the Veronese surface.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cubic::cubic_of_generators;
use crate::error::{ClassifyError, FieldError};
use crate::extension::Extension;
use crate::field::{Elem, Field};
use crate::geometry::{Line5, Plane, Vec6};
use crate::veronese::{classify_vec, PointClass};

/// Numbers of rank-1, nucleus rank-2, secant rank-2 and rank-3 points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct PointOd(pub [u32; 4]);

impl PointOd {
    pub fn rank1(&self) -> u32 {
        self.0[0]
    }
    pub fn nucleus(&self) -> u32 {
        self.0[1]
    }
    pub fn secant(&self) -> u32 {
        self.0[2]
    }
    pub fn rank3(&self) -> u32 {
        self.0[3]
    }

    pub fn add(&mut self, class: PointClass) {
        self.0[class.index()] += 1;
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for PointOd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

pub fn point_od_of(field: &Field, points: impl IntoIterator<Item = Vec6>) -> PointOd {
    let mut od = PointOd::default();
    for p in points {
        od.add(classify_vec(field, &p));
    }
    od
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LineLabel {
    O5,
    O6,
    O8a,
    O8b,
    O9,
    O10,
    O12a,
    O12b,
    O13a,
    O13b,
    O14,
    O15,
    O16a,
    O16b,
    O17,
}

impl LineLabel {
    pub const ALL: [LineLabel; 15] = [
        LineLabel::O5,
        LineLabel::O6,
        LineLabel::O8a,
        LineLabel::O8b,
        LineLabel::O9,
        LineLabel::O10,
        LineLabel::O12a,
        LineLabel::O12b,
        LineLabel::O13a,
        LineLabel::O13b,
        LineLabel::O14,
        LineLabel::O15,
        LineLabel::O16a,
        LineLabel::O16b,
        LineLabel::O17,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LineLabel::O5 => "o5",
            LineLabel::O6 => "o6",
            LineLabel::O8a => "o8,1",
            LineLabel::O8b => "o8,2",
            LineLabel::O9 => "o9",
            LineLabel::O10 => "o10",
            LineLabel::O12a => "o12,1",
            LineLabel::O12b => "o12,2",
            LineLabel::O13a => "o13,1",
            LineLabel::O13b => "o13,2",
            LineLabel::O14 => "o14",
            LineLabel::O15 => "o15",
            LineLabel::O16a => "o16,1",
            LineLabel::O16b => "o16,2",
            LineLabel::O17 => "o17",
        }
    }

    /// Point-orbit distribution of a line of this orbit.
    pub fn point_od(self, q: u32) -> PointOd {
        let od = match self {
            LineLabel::O5 => [2, 0, q - 1, 0],
            LineLabel::O6 => [1, 1, q - 1, 0],
            LineLabel::O8a => [1, 0, 1, q - 1],
            LineLabel::O8b => [1, 1, 0, q - 1],
            LineLabel::O9 => [1, 0, 0, q],
            LineLabel::O10 => [0, 0, q + 1, 0],
            LineLabel::O12a => [0, q + 1, 0, 0],
            LineLabel::O12b => [0, 1, q, 0],
            LineLabel::O13a => [0, 1, 1, q - 1],
            LineLabel::O13b => [0, 0, 2, q - 1],
            LineLabel::O14 => [0, 0, 3, q - 2],
            LineLabel::O15 | LineLabel::O16b => [0, 0, 1, q],
            LineLabel::O16a => [0, 1, 0, q],
            LineLabel::O17 => [0, 0, 0, q + 1],
        };
        PointOd(od)
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LineLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let norm = s.trim().to_ascii_lowercase().replace(['_', '.'], ",");
        LineLabel::ALL
            .into_iter()
            .find(|l| l.name() == norm)
            .ok_or_else(|| format!("unknown line orbit {s:?}"))
    }
}

/// Classifies lines by their point distribution, separating the two orbits
/// with distribution [0,0,1,q] by counting singular points over GF(q^2).
#[derive(Clone, Debug)]
pub struct LineClassifier {
    field: Field,
    ext: Extension,
}

impl LineClassifier {
    pub fn new(field: &Field) -> Result<LineClassifier, FieldError> {
        Ok(LineClassifier { field: field.clone(), ext: Extension::new(field, 2)? })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Point distribution of the line through `a` and `b`.
    pub fn point_od(&self, a: &Vec6, b: &Vec6) -> PointOd {
        let f = &self.field;
        let mut od = PointOd::default();
        for t in f.elements() {
            let mut v = *a;
            crate::geometry::add_scaled(f, &mut v, t, b);
            od.add(classify_vec(f, &v));
        }
        od.add(classify_vec(f, b));
        od
    }

    /// Number of points of the line over GF(q^2) whose matrix is singular.
    pub fn singular_points_over_quadratic_extension(&self, a: &Vec6, b: &Vec6) -> u32 {
        let f = &self.field;
        let c = cubic_of_generators(f, &[*a, *b, [Elem::ZERO; 6]]);
        // det(s a + t b) = c0 s^3 + c1 s^2 t + c2 s t^2 + c3 t^3.
        let coeffs = [c.a[0][0], c.a[1][0], c.a[0][1], c.a[1][1]].map(|x| self.ext.embed(x));
        let e = self.ext.ext();
        let mut count = u32::from(coeffs[3].is_zero());
        for t in e.elements() {
            let t2 = e.square(t);
            let v = coeffs[0] + e.mul(coeffs[1], t) + e.mul(coeffs[2], t2) + e.mul(coeffs[3], e.mul(t2, t));
            if v.is_zero() {
                count += 1;
            }
        }
        count
    }

    pub fn classify_generators(&self, a: &Vec6, b: &Vec6) -> Result<LineLabel, ClassifyError> {
        let q = self.field.q();
        let od = self.point_od(a, b);
        let label = match od.0 {
            [2, 0, _, 0] => LineLabel::O5,
            [1, 1, _, 0] => LineLabel::O6,
            [1, 0, 1, _] => LineLabel::O8a,
            [1, 1, 0, _] => LineLabel::O8b,
            [1, 0, 0, _] => LineLabel::O9,
            [0, 0, 3, 0] if q == 2 && self.singular_points_over_quadratic_extension(a, b) == 3 => LineLabel::O14,
            [0, 0, n, 0] if n == q + 1 => LineLabel::O10,
            [0, n, 0, 0] if n == q + 1 => LineLabel::O12a,
            [0, 1, n, 0] if n == q => LineLabel::O12b,
            [0, 1, 1, _] => LineLabel::O13a,
            [0, 0, 2, _] => LineLabel::O13b,
            [0, 0, 3, n] if n == q - 2 && q > 2 => LineLabel::O14,
            [0, 1, 0, _] => LineLabel::O16a,
            [0, 0, 0, _] => LineLabel::O17,
            [0, 0, 1, _] => match self.singular_points_over_quadratic_extension(a, b) {
                3 => LineLabel::O15,
                1 => LineLabel::O16b,
                _ => return Err(ClassifyError::UnreachableLine(od.0)),
            },
            _ => return Err(ClassifyError::UnreachableLine(od.0)),
        };
        Ok(label)
    }

    pub fn classify(&self, line: &Line5) -> Result<LineLabel, ClassifyError> {
        let [a, b] = line.rows();
        self.classify_generators(a, b)
    }

    /// How many lines of each orbit lie in the plane.
    pub fn line_od(&self, plane: &Plane) -> Result<BTreeMap<LineLabel, u32>, ClassifyError> {
        let mut out = BTreeMap::new();
        for l in plane.lines(&self.field) {
            *out.entry(self.classify(&l)?).or_insert(0) += 1;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(bits: [u16; 6]) -> Vec6 {
        bits.map(Elem::from_bits)
    }

    #[test]
    fn named_representatives() {
        for h in [2, 3] {
            let f = Field::new(h).unwrap();
            let lc = LineClassifier::new(&f).unwrap();
            assert_eq!(lc.classify_generators(&v([1, 0, 0, 0, 0, 0]), &v([0, 0, 1, 1, 0, 0])).unwrap(), LineLabel::O9);
            assert_eq!(lc.classify_generators(&v([0, 1, 0, 1, 0, 0]), &v([0, 0, 0, 1, 0, 1])).unwrap(), LineLabel::O13b);
            assert_eq!(lc.classify_generators(&v([0, 0, 1, 1, 0, 0]), &v([0, 0, 0, 0, 1, 1])).unwrap(), LineLabel::O16b);
            assert_eq!(lc.classify_generators(&v([1, 0, 0, 0, 0, 0]), &v([0, 0, 0, 1, 0, 0])).unwrap(), LineLabel::O5);
            assert_eq!(lc.classify_generators(&v([0, 1, 0, 0, 0, 0]), &v([0, 0, 1, 0, 0, 0])).unwrap(), LineLabel::O12a);
        }
    }

    #[test]
    fn o14_contains_three_secant_points() {
        let f = Field::new(3).unwrap();
        let lc = LineClassifier::new(&f).unwrap();
        let a = v([1, 0, 0, 1, 0, 0]);
        let b = v([0, 0, 0, 1, 0, 1]);
        let mut c = a;
        crate::geometry::add_scaled(&f, &mut c, Elem::ONE, &b);
        assert_eq!(c, v([1, 0, 0, 0, 0, 1]));
        assert_eq!(lc.classify_generators(&a, &b).unwrap(), LineLabel::O14);
    }

    #[test]
    fn labels_round_trip_through_strings() {
        for l in LineLabel::ALL {
            assert_eq!(l.name().parse::<LineLabel>().unwrap(), l);
        }
        assert_eq!("o8_1".parse::<LineLabel>().unwrap(), LineLabel::O8a);
    }
}
