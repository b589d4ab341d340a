//! Plane orbits: invariants, the decision procedure and representatives.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cubic::{cubic_of_generators, factorize_among, line_incidences, Cubic, CubicTable, FactorKind, Factorization};
use crate::error::{ClassifyError, GeometryError};
use crate::field::{Elem, Field};
use crate::geometry::{combine, meet_nucleus_plane, projective_points, Line2, Plane, Vec3, Vec6};
use crate::lines::{LineClassifier, LineLabel, PointOd};
use crate::veronese::{for_each_pgl3, in_nucleus_plane, is_rank_one};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PlaneLabel {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
    S10,
    S11,
    S12,
    S13,
    S14,
    S14Prime,
    S15,
    S15Prime,
}

impl PlaneLabel {
    pub const ALL: [PlaneLabel; 17] = [
        PlaneLabel::S1,
        PlaneLabel::S2,
        PlaneLabel::S3,
        PlaneLabel::S4,
        PlaneLabel::S5,
        PlaneLabel::S6,
        PlaneLabel::S7,
        PlaneLabel::S8,
        PlaneLabel::S9,
        PlaneLabel::S10,
        PlaneLabel::S11,
        PlaneLabel::S12,
        PlaneLabel::S13,
        PlaneLabel::S14,
        PlaneLabel::S14Prime,
        PlaneLabel::S15,
        PlaneLabel::S15Prime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlaneLabel::S1 => "Σ1",
            PlaneLabel::S2 => "Σ2",
            PlaneLabel::S3 => "Σ3",
            PlaneLabel::S4 => "Σ4",
            PlaneLabel::S5 => "Σ5",
            PlaneLabel::S6 => "Σ6",
            PlaneLabel::S7 => "Σ7",
            PlaneLabel::S8 => "Σ8",
            PlaneLabel::S9 => "Σ9",
            PlaneLabel::S10 => "Σ10",
            PlaneLabel::S11 => "Σ11",
            PlaneLabel::S12 => "Σ12",
            PlaneLabel::S13 => "Σ13",
            PlaneLabel::S14 => "Σ14",
            PlaneLabel::S14Prime => "Σ14'",
            PlaneLabel::S15 => "Σ15",
            PlaneLabel::S15Prime => "Σ15'",
        }
    }

    /// The orbits present for a given q.
    pub fn present_for(q: u32) -> Vec<PlaneLabel> {
        PlaneLabel::ALL
            .into_iter()
            .filter(|l| match l {
                PlaneLabel::S13 => q > 2,
                PlaneLabel::S14 => q > 4,
                PlaneLabel::S14Prime => q <= 4,
                PlaneLabel::S15Prime => q == 2,
                _ => true,
            })
            .collect()
    }

    /// Point-orbit distribution shared by every plane of the orbit, for q >= 4.
    pub fn point_od(self, q: u32) -> Option<PointOd> {
        if q < 4 {
            return None;
        }
        let h_even = q.trailing_zeros().is_multiple_of(2);
        let q2 = q * q;
        let od = match self {
            PlaneLabel::S1 => [q + 1, 1, q2 - 1, 0],
            PlaneLabel::S2 => [3, 0, 3 * q - 3, (q - 1) * (q - 1)],
            PlaneLabel::S3 | PlaneLabel::S4 => [2, 1, 2 * q - 2, q2 - q],
            PlaneLabel::S5 => [2, 0, 2 * q - 2, q2 - q + 1],
            PlaneLabel::S6 | PlaneLabel::S12 => [1, 0, q + 1, q2 - 1],
            PlaneLabel::S7 => [1, q + 1, q2 - 1, 0],
            PlaneLabel::S8 => [1, q + 1, q - 1, q2 - q],
            PlaneLabel::S9 | PlaneLabel::S10 => [1, 1, 2 * q - 1, q2 - q],
            PlaneLabel::S11 | PlaneLabel::S15 => [1, 1, q - 1, q2],
            PlaneLabel::S13 => [1, 0, q - 1, q2 + 1],
            PlaneLabel::S14 if h_even => [1, 0, q - 1, q2 + 1],
            PlaneLabel::S14 => [1, 0, q + 1, q2 - 1],
            PlaneLabel::S14Prime if q == 4 => [1, 0, 3, 17],
            PlaneLabel::S14Prime | PlaneLabel::S15Prime => return None,
        };
        Some(PointOd(od))
    }
}

impl fmt::Display for PlaneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlaneLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        let digits = t
            .strip_prefix("Σ")
            .or_else(|| lower.starts_with("sigma").then(|| &t[5..]))
            .or_else(|| t.strip_prefix(['S', 's']))
            .ok_or_else(|| format!("unknown plane orbit {s:?}"))?;
        PlaneLabel::ALL
            .into_iter()
            .find(|l| &l.name()["Σ".len()..] == digits)
            .ok_or_else(|| format!("unknown plane orbit {s:?}"))
    }
}

/// The invariants from which a plane's orbit is decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneInvariants {
    pub point_od: PointOd,
    pub nucleus_meet_dim: i32,
    pub cubic: FactorKind,
    pub rank2_collinear: bool,
    pub inflexions: Option<u32>,
    pub line_od: Option<BTreeMap<LineLabel, u32>>,
}

/// Rank data of a plane given by three generators, indexed by the points of
/// the parameter plane.
#[derive(Clone, Debug, Default)]
pub(crate) struct Analysis {
    pub cubic: Cubic,
    pub rank1: Vec<usize>,
    pub nucleus: Vec<usize>,
    pub secant: Vec<usize>,
}

impl Analysis {
    pub fn od(&self, total: usize) -> PointOd {
        let (a, b, c) = (self.rank1.len(), self.nucleus.len(), self.secant.len());
        PointOd([a as u32, b as u32, c as u32, (total - a - b - c) as u32])
    }

    pub fn singular(&self) -> impl Iterator<Item = usize> + '_ {
        self.rank1.iter().chain(&self.nucleus).chain(&self.secant).copied()
    }
}

/// Splits `text` into 3 rows of 3 linear forms in x, y, z. Entries are `.`,
/// or sums of terms `var` and `hex*var`.
pub fn parse_pencil(field: &Field, text: &str) -> Result<[Vec6; 3], String> {
    let rows: Vec<&str> = text.split(';').map(str::trim).filter(|r| !r.is_empty()).collect();
    if rows.len() != 3 {
        return Err(format!("expected 3 rows separated by ';', got {}", rows.len()));
    }
    let mut m = [[[Elem::ZERO; 3]; 3]; 3];
    for (i, row) in rows.iter().enumerate() {
        let entries: Vec<&str> = row.split_whitespace().collect();
        if entries.len() != 3 {
            return Err(format!("row {} has {} entries, expected 3", i + 1, entries.len()));
        }
        for (j, entry) in entries.iter().enumerate() {
            m[i][j] = parse_linear_form(field, entry)?;
        }
    }
    for i in 0..3 {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(format!("matrix is not symmetric at ({}, {})", i + 1, j + 1));
            }
        }
    }
    Ok([0, 1, 2].map(|k| [m[0][0][k], m[0][1][k], m[0][2][k], m[1][1][k], m[1][2][k], m[2][2][k]]))
}

fn parse_linear_form(field: &Field, entry: &str) -> Result<Vec3, String> {
    let mut out = [Elem::ZERO; 3];
    if entry == "." || entry == "0" {
        return Ok(out);
    }
    for term in entry.split('+') {
        let (coef, var) = match term.split_once('*') {
            Some((c, v)) => {
                let c = c.trim_start_matches("0x");
                let bits = u32::from_str_radix(c, 16).map_err(|_| format!("bad coefficient {c:?}"))?;
                (field.elem(bits).map_err(|e| e.to_string())?, v)
            }
            None => (Elem::ONE, term),
        };
        let k = match var {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            _ => return Err(format!("bad term {term:?}")),
        };
        out[k] += coef;
    }
    Ok(out)
}

/// The pencil family [[x, y, c x], [y, y+z, 0], [c x, 0, c^2 x + z]].
pub fn pencil_family(field: &Field, c: Elem) -> [Vec6; 3] {
    let c2 = field.square(c);
    let o = Elem::ZERO;
    let i = Elem::ONE;
    [[i, o, c, o, o, c2], [o, i, o, i, o, o], [o, o, o, i, o, i]]
}

/// Pencil text of the chosen representative of `label`.
pub fn representative_pencil(field: &Field, label: PlaneLabel) -> Result<String, ClassifyError> {
    let q = field.q();
    let missing = || ClassifyError::NoRepresentative { label: label.to_string(), q };
    if !PlaneLabel::present_for(q).contains(&label) {
        return Err(missing());
    }
    let one = Elem::ONE;
    let h_odd = field.h() % 2 == 1;
    let tr = |x: Elem| field.trace(x);
    let inv = |x: Elem| field.inv(x).expect("non-zero");
    let family = |c: Elem| {
        let c2 = field.square(c);
        format!("x y {c}*x; y y+z .; {c}*x . {c2}*x+z")
    };
    let text = match label {
        PlaneLabel::S1 => "x y .; y z .; . . .".to_string(),
        PlaneLabel::S2 => "x . .; . y .; . . z".to_string(),
        PlaneLabel::S3 => "x . z; . y .; z . .".to_string(),
        PlaneLabel::S4 => "x . z; . y z; z z .".to_string(),
        PlaneLabel::S5 => "x . z; . y z; z z z".to_string(),
        PlaneLabel::S6 => {
            let c = field.nonzero().find(|&c| tr(inv(c)) == 1).ok_or_else(missing)?;
            format!("x . .; . y+{c}*z z; . z y")
        }
        PlaneLabel::S7 => "x y z; y . .; z . .".to_string(),
        PlaneLabel::S8 => "x y .; y . z; . z .".to_string(),
        PlaneLabel::S9 => "x y .; y z z; . z .".to_string(),
        PlaneLabel::S10 => "x y .; y z .; . . z".to_string(),
        PlaneLabel::S11 => "x y .; y z z; . z x+z".to_string(),
        PlaneLabel::S12 => {
            let c = field
                .nonzero()
                .find(|&c| tr(c) == 1 && !(h_odd && q > 4 && field.is_admissible(inv(c))))
                .ok_or_else(missing)?;
            family(c)
        }
        PlaneLabel::S13 => {
            let c = field
                .nonzero()
                .find(|&c| tr(c) == 0 && !(!h_odd && q > 4 && field.is_admissible(inv(c))))
                .ok_or_else(missing)?;
            family(c)
        }
        PlaneLabel::S14 => {
            let c = field
                .nonzero()
                .find(|&c| tr(c) == tr(one) && field.is_admissible(inv(c)))
                .ok_or_else(missing)?;
            family(c)
        }
        PlaneLabel::S14Prime => "x+z z z; z y+z z; z z y".to_string(),
        PlaneLabel::S15 => "x y z; y z .; z . .".to_string(),
        PlaneLabel::S15Prime => "x y z; y z .; z . y".to_string(),
    };
    Ok(text)
}

pub fn representative(field: &Field, label: PlaneLabel) -> Result<Plane, ClassifyError> {
    let text = representative_pencil(field, label)?;
    let gens = parse_pencil(field, &text).expect("built-in pencils parse");
    Ok(Plane::from_generators(field, gens)?)
}

/// The classes of hyperplanes, by the conic they cut on the parameter plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum HyperplaneClass {
    DoubleLine,
    RealPair,
    ConjugatePair,
    NonSingular,
}

impl HyperplaneClass {
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Class of the hyperplane sum h_i Y_i = 0.
pub fn hyperplane_class(field: &Field, h: &Vec6) -> HyperplaneClass {
    let [h0, h1, h2, h3, h4, h5] = *h;
    if h1.is_zero() && h2.is_zero() && h4.is_zero() {
        return HyperplaneClass::DoubleLine;
    }
    let v = field.mul(h0, field.square(h4)) + field.mul(h3, field.square(h2)) + field.mul(h5, field.square(h1)) + field.mul(h1, field.mul(h2, h4));
    if !v.is_zero() {
        return HyperplaneClass::NonSingular;
    }
    let count = projective_points::<3>(field)
        .iter()
        .filter(|u| crate::geometry::dot(field, h, &crate::veronese::veronese_vec(field, u)).is_zero())
        .count();
    if count == 1 {
        HyperplaneClass::ConjugatePair
    } else {
        HyperplaneClass::RealPair
    }
}

/// Hyperplanes through the plane, by class.
pub fn hyperplane_od(field: &Field, plane: &Plane) -> [u32; 4] {
    let rows = plane.rows();
    let mut od = [0u32; 4];
    for h in projective_points::<6>(field) {
        if rows.iter().all(|r| crate::geometry::dot(field, &h, r).is_zero()) {
            od[hyperplane_class(field, &h).index()] += 1;
        }
    }
    od
}

/// Decides orbit membership of planes meeting the surface.
#[derive(Clone, Debug)]
pub struct PlaneClassifier {
    field: Field,
    table: CubicTable,
    incidences: Vec<Vec<usize>>,
    line_classifier: LineClassifier,
    small: Option<HashMap<Plane, PlaneLabel>>,
}

impl PlaneClassifier {
    pub fn new(field: &Field) -> Result<PlaneClassifier, ClassifyError> {
        let mut pc = PlaneClassifier {
            field: field.clone(),
            table: CubicTable::new(field),
            incidences: line_incidences(field),
            line_classifier: LineClassifier::new(field)?,
            small: None,
        };
        if field.q() == 2 {
            pc.small = Some(small_orbit_map(field)?);
        }
        Ok(pc)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn lines(&self) -> &LineClassifier {
        &self.line_classifier
    }

    pub(crate) fn table(&self) -> &CubicTable {
        &self.table
    }

    pub(crate) fn analyse(&self, g: &[Vec6; 3], out: &mut Analysis) {
        let f = &self.field;
        out.cubic = cubic_of_generators(f, g);
        out.rank1.clear();
        out.nucleus.clear();
        out.secant.clear();
        for (idx, p) in self.table.points.iter().enumerate() {
            if !self.table.eval(f, &out.cubic, idx).is_zero() {
                continue;
            }
            let v = combine(f, g, p);
            if is_rank_one(f, &v) {
                out.rank1.push(idx);
            } else if in_nucleus_plane(&v) {
                out.nucleus.push(idx);
            } else {
                out.secant.push(idx);
            }
        }
    }

    /// Factorization of an analysed cubic; linear factors are looked for
    /// only among lines inside its zero set.
    pub(crate) fn factorization(&self, an: &Analysis) -> Factorization {
        let mut zero = vec![false; self.table.points.len()];
        for i in an.singular() {
            zero[i] = true;
        }
        let duals: Vec<Vec3> = self
            .incidences
            .iter()
            .enumerate()
            .filter(|(_, pts)| pts.iter().all(|&k| zero[k]))
            .map(|(l, _)| self.table.points[l])
            .collect();
        factorize_among(&self.field, &an.cubic, &duals)
    }

    pub(crate) fn incidences(&self) -> &[Vec<usize>] {
        &self.incidences
    }

    fn collinear(&self, idx: &[usize]) -> bool {
        let pts = &self.table.points;
        if idx.len() < 3 {
            return true;
        }
        let line = Line2::through(&self.field, &pts[idx[0]], &pts[idx[1]]).expect("distinct points");
        idx[2..].iter().all(|&i| line.contains(&self.field, &pts[i]))
    }

    pub(crate) fn inflexion_params(&self, an: &Analysis) -> Result<Vec<usize>, GeometryError> {
        let f = &self.field;
        let hess = an.cubic.hessian(f)?;
        Ok(an
            .singular()
            .filter(|&i| {
                let p = &self.table.points[i];
                hess.eval(f, p).is_zero() && !an.cubic.is_singular_at(f, p)
            })
            .collect())
    }

    /// The decision procedure on analysed generators, for q >= 4.
    pub(crate) fn decide(&self, g: &[Vec6; 3], an: &Analysis) -> Result<PlaneLabel, ClassifyError> {
        let f = &self.field;
        let q = f.q();
        let total = self.table.points.len();
        let od = an.od(total);
        let fail = || ClassifyError::Unreachable(Box::new(self.invariants_of_generators(g, false)));
        let label = match od.rank1() {
            0 => return Err(ClassifyError::NoVeronesePoint),
            n if n == q + 1 => PlaneLabel::S1,
            3 => PlaneLabel::S2,
            2 => {
                if od.nucleus() == 0 {
                    PlaneLabel::S5
                } else {
                    // The cubic is the doubled secant line times one more line;
                    // that line passes through a rank-one point only for one orbit.
                    let fac = self.factorization(an);
                    let pts = &self.table.points;
                    let secant = Line2::through(f, &pts[an.rank1[0]], &pts[an.rank1[1]])?;
                    let other = fac.lines.iter().find(|l| **l != secant).ok_or_else(fail)?;
                    if an.rank1.iter().any(|&i| other.contains(f, &pts[i])) {
                        PlaneLabel::S3
                    } else {
                        PlaneLabel::S4
                    }
                }
            }
            1 => match od.nucleus() {
                n if n == q + 1 => {
                    if od.rank3() == 0 {
                        PlaneLabel::S7
                    } else {
                        PlaneLabel::S8
                    }
                }
                1 => {
                    let kind = self.factorization(an).kind;
                    match (od.secant(), kind) {
                        (s, FactorKind::DoubleLinePlusLine) if s == 2 * q - 1 => PlaneLabel::S9,
                        (s, FactorKind::LineAndTangentConic) if s == 2 * q - 1 => PlaneLabel::S10,
                        (s, FactorKind::TripleLine) if s == q - 1 => PlaneLabel::S15,
                        (s, FactorKind::Irreducible) if s == q - 1 => PlaneLabel::S11,
                        _ => return Err(fail()),
                    }
                }
                0 => {
                    let rank2: Vec<usize> = an.secant.clone();
                    if od.secant() == q + 1 && self.collinear(&rank2) {
                        PlaneLabel::S6
                    } else {
                        let infl = self.inflexion_params(an).map_err(|_| fail())?.len();
                        match (infl, od.secant()) {
                            (3, _) if q == 4 => PlaneLabel::S14Prime,
                            (3, _) => PlaneLabel::S14,
                            (_, s) if s == q + 1 => PlaneLabel::S12,
                            (_, s) if s == q - 1 => PlaneLabel::S13,
                            _ => return Err(fail()),
                        }
                    }
                }
                _ => return Err(fail()),
            },
            _ => return Err(fail()),
        };
        Ok(label)
    }

    /// Label of analysed generators; at q = 2 the orbit map is consulted.
    pub(crate) fn label_of(&self, g: &[Vec6; 3], an: &Analysis) -> Result<PlaneLabel, ClassifyError> {
        match &self.small {
            Some(map) => {
                let plane = Plane::from_generators(&self.field, *g)?;
                map.get(&plane).copied().ok_or(ClassifyError::NoVeronesePoint)
            }
            None => self.decide(g, an),
        }
    }

    pub fn classify_generators(&self, g: &[Vec6; 3]) -> Result<PlaneLabel, ClassifyError> {
        let mut an = Analysis::default();
        if self.small.is_none() {
            self.analyse(g, &mut an);
        }
        self.label_of(g, &an)
    }

    pub fn classify(&self, plane: &Plane) -> Result<PlaneLabel, ClassifyError> {
        self.classify_generators(plane.rows())
    }

    fn invariants_of_generators(&self, g: &[Vec6; 3], with_lines: bool) -> PlaneInvariants {
        let f = &self.field;
        let mut an = Analysis::default();
        self.analyse(g, &mut an);
        let plane = Plane::from_generators(f, *g).ok();
        let nucleus_meet_dim = plane
            .as_ref()
            .map(|p| meet_nucleus_plane(f, p).map_or(-1, |m| m.dim()))
            .unwrap_or(-1);
        let rank2: Vec<usize> = an.nucleus.iter().chain(&an.secant).copied().collect();
        let inflexions = self.inflexion_params(&an).ok().map(|v| v.len() as u32);
        let line_od = match (&plane, with_lines) {
            (Some(p), true) => self.line_classifier.line_od(p).ok(),
            _ => None,
        };
        PlaneInvariants {
            point_od: an.od(self.table.points.len()),
            nucleus_meet_dim,
            cubic: an.cubic.factorization(f).kind,
            rank2_collinear: self.collinear(&rank2),
            inflexions,
            line_od,
        }
    }

    pub fn invariants(&self, plane: &Plane, with_lines: bool) -> PlaneInvariants {
        self.invariants_of_generators(plane.rows(), with_lines)
    }

    pub fn cubic_of(&self, plane: &Plane) -> Cubic {
        cubic_of_generators(&self.field, plane.rows())
    }
}

/// Orbit lookup for q = 2, built from the representatives under PGL(3,2).
fn small_orbit_map(field: &Field) -> Result<HashMap<Plane, PlaneLabel>, ClassifyError> {
    let mut map = HashMap::new();
    for label in PlaneLabel::present_for(field.q()) {
        let rep = representative(field, label)?;
        let mut clash = None;
        for_each_pgl3(field, |g| {
            let img = g.apply_plane(field, &rep);
            if let Some(prev) = map.insert(img, label) {
                if prev != label {
                    clash = Some(prev);
                }
            }
        });
        if let Some(prev) = clash {
            return Err(ClassifyError::OrbitClash(prev.to_string(), label.to_string()));
        }
    }
    Ok(map)
}
