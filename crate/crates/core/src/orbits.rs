//! Censuses of planes meeting the Veronese surface, orbit ground truth by
//! direct expansion, stabilizers and the counting checks built on them.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{ClassifyError, FieldError, GeometryError};
use crate::exec::{fold_jobs, Execution};
use crate::field::{format_modulus, Elem, Field};
use crate::geometry::{
    add_scaled, combine, dot, echelon_jobs, echelon_shapes, for_each_in_shape, for_each_plane_through, normalize,
    point_index, projective_size, rank, EchelonShape, Line5, Plane, Vec3, Vec6,
};
use crate::lines::{LineClassifier, LineLabel, PointOd};
use crate::planes::{pencil_family, representative, Analysis, PlaneClassifier, PlaneLabel};
use crate::veronese::{mat3_inv, mat3_mul, veronese_points, veronese_preimage, veronese_vec, Collineation};

pub const CENSUS_FORMAT_VERSION: u32 = 1;

/// A linear map of the ambient space GF(q)^6.
pub type Mat6 = [[Elem; 6]; 6];

pub fn apply6(f: &Field, m: &Mat6, v: &Vec6) -> Vec6 {
    let mut out = [Elem::ZERO; 6];
    for (o, row) in out.iter_mut().zip(m) {
        *o = dot(f, row, v);
    }
    out
}

/// The matrix of a collineation acting on symmetric matrices.
pub fn mat6_of(f: &Field, g: &Collineation) -> Mat6 {
    let mut m = [[Elem::ZERO; 6]; 6];
    for j in 0..6 {
        let mut e = [Elem::ZERO; 6];
        e[j] = Elem::ONE;
        let col = g.apply_vec6(f, &e);
        for i in 0..6 {
            m[i][j] = col[i];
        }
    }
    m
}

fn mat6_inv(f: &Field, m: &Mat6) -> Result<Mat6, GeometryError> {
    let mut a = *m;
    let mut inv = [[Elem::ZERO; 6]; 6];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Elem::ONE;
    }
    for col in 0..6 {
        let p = (col..6).find(|&r| !a[r][col].is_zero()).ok_or(GeometryError::Singular)?;
        a.swap(col, p);
        inv.swap(col, p);
        let s = f.inv(a[col][col])?;
        for j in 0..6 {
            a[col][j] = f.mul(a[col][j], s);
            inv[col][j] = f.mul(inv[col][j], s);
        }
        for r in 0..6 {
            let c = a[r][col];
            if r != col && !c.is_zero() {
                let (pa, pi) = (a[col], inv[col]);
                add_scaled(f, &mut a[r], c, &pa);
                add_scaled(f, &mut inv[r], c, &pi);
            }
        }
    }
    Ok(inv)
}

fn mat6_mul(f: &Field, a: &Mat6, b: &Mat6) -> Mat6 {
    let mut out = [[Elem::ZERO; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            out[i][j] = (0..6).fold(Elem::ZERO, |acc, k| acc + f.mul(a[i][k], b[k][j]));
        }
    }
    out
}

/// Generators of PGL(3,q): a diagonal scaling by a primitive element, the
/// permutations (0 1) and (0 1 2), and an elementary transvection.
pub fn pgl3_generators(f: &Field) -> Vec<Collineation> {
    let (o, i) = (Elem::ZERO, Elem::ONE);
    let mut mats = vec![[[o, i, o], [i, o, o], [o, o, i]], [[o, o, i], [i, o, o], [o, i, o]], [[i, i, o], [o, i, o], [o, o, i]]];
    if f.q() > 2 {
        mats.push([[f.primitive(), o, o], [o, i, o], [o, o, i]]);
    }
    mats.into_iter().map(|a| Collineation::new(f, a).expect("invertible generator")).collect()
}

fn apply_plane6(f: &Field, m: &Mat6, plane: &Plane) -> Result<Plane, GeometryError> {
    Plane::from_generators(f, plane.rows().map(|r| apply6(f, m, &r)))
}

/// Enumerates each plane meeting the Veronese surface once: from its first
/// Veronese point P (in enumeration order), via the lines of the quotient
/// space PG(5,q)/P.
struct Sweep<'a> {
    pc: &'a PlaneClassifier,
    vpoints: Vec<Vec6>,
    shapes: Vec<EchelonShape<2>>,
}

impl<'a> Sweep<'a> {
    fn new(pc: &'a PlaneClassifier) -> Sweep<'a> {
        Sweep { pc, vpoints: veronese_points(pc.field()), shapes: echelon_shapes::<2, 5>() }
    }

    fn planes_from(&self, i: usize, an: &mut Analysis, visit: &mut dyn FnMut(&[Vec6; 3], &Analysis, u64)) {
        let f = self.pc.field();
        let q = f.q();
        let p = self.vpoints[i];
        let lead = p.iter().position(|x| !x.is_zero()).expect("non-zero point");
        let others: Vec<usize> = (0..6).filter(|&k| k != lead).collect();
        let mut first = vec![u32::MAX; projective_size(q, 5) as usize];
        for (j, v) in self.vpoints.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut w = [Elem::ZERO; 5];
            for (k, &o) in others.iter().enumerate() {
                w[k] = v[o] + f.mul(v[lead], p[o]);
            }
            let w = normalize(f, w).expect("distinct points of the surface");
            let idx = point_index(q, &w);
            first[idx] = first[idx].min(j as u32);
        }
        let lift = |r: &[Elem; 5]| {
            let mut v = [Elem::ZERO; 6];
            for (k, &o) in others.iter().enumerate() {
                v[o] = r[k];
            }
            v
        };
        let mut seq = 0u64;
        for shape in &self.shapes {
            for_each_in_shape::<2, 5>(f, shape, None, |m| {
                let mut least = first[point_index(q, &m[1])];
                for t in f.elements() {
                    let mut w = m[0];
                    add_scaled(f, &mut w, t, &m[1]);
                    least = least.min(first[point_index(q, &w)]);
                }
                if least < i as u32 {
                    return;
                }
                let g = [p, lift(&m[0]), lift(&m[1])];
                self.pc.analyse(&g, an);
                visit(&g, an, seq);
                seq += 1;
            });
        }
    }

    /// Folds every plane into an accumulator. Job `s` takes the Veronese
    /// points with index congruent to `s` modulo `shards`.
    fn fold<R, I, V, M>(&self, exec: Execution, shards: usize, identity: I, visit: V, merge: M) -> R
    where
        R: Send,
        I: Fn() -> R + Sync + Send,
        V: Fn(&[Vec6; 3], &Analysis, (u32, u64), &mut R) + Sync + Send,
        M: Fn(R, R) -> R + Sync + Send,
    {
        let n = self.vpoints.len();
        let shards = if shards == 0 { n } else { shards.min(n) };
        let jobs: Vec<usize> = (0..shards).collect();
        fold_jobs(
            &jobs,
            exec,
            identity,
            |&s, acc| {
                let mut an = Analysis::default();
                for i in (s..n).step_by(shards) {
                    self.planes_from(i, &mut an, &mut |g, an, seq| visit(g, an, (i as u32, seq), acc));
                }
            },
            merge,
        )
    }
}

fn in_plane(f: &Field, g: &[Vec6; 3], e: ClassifyError) -> ClassifyError {
    let plane = Plane::from_generators(f, *g).map(|p| p.to_hex()).unwrap_or_else(|_| format!("{g:?}"));
    ClassifyError::InPlane { plane, source: Box::new(e) }
}

/// Scheduling of a census.
#[derive(Clone, Copy, Debug, Default)]
pub struct CensusOptions {
    pub exec: Execution,
    /// Number of work shards; 0 means one per Veronese point.
    pub shards: usize,
}

/// Per-orbit plane counts over all planes with a rank-1 point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub q: u32,
    pub modulus: u32,
    pub counts: BTreeMap<PlaneLabel, u64>,
    pub total: u64,
    pub od_histogram: BTreeMap<PointOd, u64>,
    /// First plane met in enumeration order for each distribution.
    pub od_witness: BTreeMap<PointOd, Plane>,
}

/// Sweep position of a plane: Veronese index and sequence number.
type Position = (u32, u64);

#[derive(Default)]
struct Tally {
    counts: BTreeMap<PlaneLabel, u64>,
    ods: BTreeMap<PointOd, (u64, Position, [Vec6; 3])>,
    failure: Option<(Position, ClassifyError)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        for (od, (n, pos, g)) in other.ods {
            let e = self.ods.entry(od).or_insert((0, pos, g));
            e.0 += n;
            if pos < e.1 {
                e.1 = pos;
                e.2 = g;
            }
        }
        self.failure = match (self.failure, other.failure) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

pub fn census(pc: &PlaneClassifier, opts: CensusOptions) -> Result<Census, ClassifyError> {
    let f = pc.field();
    let total_points = projective_size(f.q(), 3) as usize;
    let sweep = Sweep::new(pc);
    let tally = sweep.fold(
        opts.exec,
        opts.shards,
        Tally::default,
        |g, an, pos, acc| {
            let od = an.od(total_points);
            let e = acc.ods.entry(od).or_insert((0, pos, *g));
            e.0 += 1;
            match pc.label_of(g, an) {
                Ok(label) => *acc.counts.entry(label).or_insert(0) += 1,
                Err(err) => {
                    if acc.failure.as_ref().is_none_or(|(p, _)| pos < *p) {
                        acc.failure = Some((pos, in_plane(f, g, err)));
                    }
                }
            }
        },
        Tally::merge,
    );
    if let Some((_, err)) = tally.failure {
        return Err(err);
    }
    let mut od_histogram = BTreeMap::new();
    let mut od_witness = BTreeMap::new();
    for (od, (n, _, g)) in tally.ods {
        od_histogram.insert(od, n);
        od_witness.insert(od, Plane::from_generators(f, g)?);
    }
    Ok(Census {
        q: f.q(),
        modulus: f.modulus(),
        total: tally.counts.values().sum(),
        counts: tally.counts,
        od_histogram,
        od_witness,
    })
}

fn bit_string(f: &Field, e: Elem) -> String {
    format!("{:0width$b}", e.bits(), width = f.h() as usize)
}

/// Representative as a 3 x 6 matrix of bit strings.
pub fn plane_bits(f: &Field, plane: &Plane) -> Vec<Vec<String>> {
    plane.rows().iter().map(|r| r.iter().map(|&e| bit_string(f, e)).collect()).collect()
}

/// SHA-256 over the settings a census depends on.
pub fn config_checksum(q: u32, modulus: u32, group: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("version={CENSUS_FORMAT_VERSION};q={q};modulus={};group={group}", format_modulus(modulus)));
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Census {
    pub fn field(&self) -> Result<Field, FieldError> {
        Field::with_modulus(self.q.trailing_zeros(), self.modulus)
    }

    /// JSON record; identical for identical inputs apart from `runtime_seconds`.
    pub fn to_json(&self, runtime_seconds: Option<f64>) -> Result<Value, ClassifyError> {
        let f = self.field()?;
        let mut labels = serde_json::Map::new();
        for (label, &count) in &self.counts {
            let rep = representative(&f, *label)?;
            labels.insert(label.name().to_string(), json!({ "count": count, "representative": plane_bits(&f, &rep) }));
        }
        let hist: Vec<Value> = self.od_histogram.iter().map(|(od, n)| json!({ "od": od.0, "count": n })).collect();
        let mut v = json!({
            "version": CENSUS_FORMAT_VERSION,
            "q": self.q,
            "modulus": format_modulus(self.modulus),
            "group": "pgl3",
            "checksum": config_checksum(self.q, self.modulus, "pgl3"),
            "labels": labels,
            "totals": { "planes": self.total, "orbits": self.counts.len() },
            "point_od_histogram": hist,
        });
        if let Some(t) = runtime_seconds {
            v["runtime_seconds"] = json!(t);
        }
        Ok(v)
    }
}

/// Rank distributions no plane can have: one rank-1 point and no rank-2
/// point, or two rank-1 points and fewer than q rank-2 points.
pub fn is_forbidden(q: u32, od: &PointOd) -> bool {
    let r2 = od.nucleus() + od.secant();
    (od.rank1() == 1 && r2 == 0) || (od.rank1() == 2 && r2 < q)
}

/// Forbidden distributions present in a histogram, with a witness if known.
pub fn nonexistence_violations(
    q: u32,
    hist: &BTreeMap<PointOd, u64>,
    witness: &BTreeMap<PointOd, Plane>,
) -> Vec<(PointOd, Option<Plane>)> {
    hist.iter()
        .filter(|(od, &n)| n > 0 && is_forbidden(q, od))
        .map(|(od, _)| (*od, witness.get(od).copied()))
        .collect()
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

/// Connected components of `items` (sorted, distinct) under the maps
/// `image(k, item)`; component ids are numbered by first appearance.
fn components<T: Ord>(
    items: &[T],
    maps: usize,
    image: impl Fn(usize, &T) -> Result<T, GeometryError>,
) -> Result<Vec<u32>, ClassifyError> {
    let mut parent: Vec<u32> = (0..items.len() as u32).collect();
    for (i, it) in items.iter().enumerate() {
        for k in 0..maps {
            let img = image(k, it)?;
            let j = items.binary_search(&img).map_err(|_| {
                FieldError::Inconsistent("image of an enumerated subspace was not enumerated".into())
            })?;
            let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j as u32));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    let mut ids = BTreeMap::new();
    let mut out = Vec::with_capacity(items.len());
    for i in 0..items.len() {
        let r = find(&mut parent, i as u32);
        let next = ids.len() as u32;
        out.push(*ids.entry(r).or_insert(next));
    }
    Ok(out)
}

/// Every plane meeting the surface with its label and its orbit under the
/// group, computed by expansion under generators (small q only).
#[derive(Clone, Debug)]
pub struct PlaneOrbits {
    pub planes: Vec<Plane>,
    pub labels: Vec<PlaneLabel>,
    pub orbit: Vec<u32>,
    /// Planes produced more than once by the enumeration.
    pub repeats: u64,
}

pub fn plane_orbits(pc: &PlaneClassifier, exec: Execution) -> Result<PlaneOrbits, ClassifyError> {
    let f = pc.field();
    if f.q() > 4 {
        return Err(ClassifyError::UnsupportedOrder(f.q()));
    }
    let sweep = Sweep::new(pc);
    type Acc = (Vec<(Plane, PlaneLabel)>, Option<ClassifyError>);
    let (mut all, failure): Acc = sweep.fold(
        exec,
        0,
        || (Vec::new(), None),
        |g, an, _, acc: &mut Acc| match (Plane::from_generators(f, *g), pc.label_of(g, an)) {
            (Ok(p), Ok(l)) => acc.0.push((p, l)),
            (Err(e), _) => acc.1 = Some(e.into()),
            (_, Err(e)) => acc.1 = Some(in_plane(f, g, e)),
        },
        |mut a, b| {
            a.0.extend(b.0);
            (a.0, a.1.or(b.1))
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    all.sort();
    let before = all.len();
    all.dedup_by(|a, b| a.0 == b.0);
    let repeats = (before - all.len()) as u64;
    let (planes, labels): (Vec<Plane>, Vec<PlaneLabel>) = all.into_iter().unzip();
    let gens: Vec<Mat6> = pgl3_generators(f).iter().map(|g| mat6_of(f, g)).collect();
    let orbit = components(&planes, gens.len(), |k, p| apply_plane6(f, &gens[k], p))?;
    Ok(PlaneOrbits { planes, labels, orbit, repeats })
}

impl PlaneOrbits {
    pub fn orbit_count(&self) -> usize {
        self.orbit.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Orbits carrying more than one label, and labels spread over more
    /// than one orbit.
    pub fn label_mismatches(&self) -> Vec<String> {
        let mut by_orbit: BTreeMap<u32, BTreeSet<PlaneLabel>> = BTreeMap::new();
        let mut by_label: BTreeMap<PlaneLabel, BTreeSet<u32>> = BTreeMap::new();
        for (&o, &l) in self.orbit.iter().zip(&self.labels) {
            by_orbit.entry(o).or_default().insert(l);
            by_label.entry(l).or_default().insert(o);
        }
        let mut out = Vec::new();
        for (o, ls) in by_orbit {
            if ls.len() > 1 {
                out.push(format!("orbit {o} carries labels {ls:?}"));
            }
        }
        for (l, os) in by_label {
            if os.len() > 1 {
                out.push(format!("{l} spans {} orbits", os.len()));
            }
        }
        out
    }

    pub fn counts(&self) -> BTreeMap<PlaneLabel, u64> {
        let mut out = BTreeMap::new();
        for l in &self.labels {
            *out.entry(*l).or_insert(0) += 1;
        }
        out
    }

    /// Classes of labels fused by the group generated by PGL(3,q) and the
    /// extra maps.
    pub fn fuse(&self, f: &Field, extra: &[Mat6]) -> Result<Vec<BTreeSet<PlaneLabel>>, ClassifyError> {
        let mut gens: Vec<Mat6> = pgl3_generators(f).iter().map(|g| mat6_of(f, g)).collect();
        gens.extend_from_slice(extra);
        let comp = components(&self.planes, gens.len(), |k, p| apply_plane6(f, &gens[k], p))?;
        let mut classes: BTreeMap<u32, BTreeSet<PlaneLabel>> = BTreeMap::new();
        for (&c, &l) in comp.iter().zip(&self.labels) {
            classes.entry(c).or_default().insert(l);
        }
        let mut out: Vec<BTreeSet<PlaneLabel>> = classes.into_values().collect();
        out.sort();
        Ok(out)
    }
}

/// At q = 2 the seven points of the surface sum to zero, so any permutation
/// of them extends to a linear map. Returns maps for a transposition and a
/// 7-cycle, which generate Sym(7).
pub fn sym7_generators(f: &Field) -> Result<Vec<Mat6>, ClassifyError> {
    if f.q() != 2 {
        return Err(ClassifyError::UnsupportedOrder(f.q()));
    }
    let pts = veronese_points(f);
    let sum = pts.iter().fold([Elem::ZERO; 6], |mut acc, p| {
        add_scaled(f, &mut acc, Elem::ONE, p);
        acc
    });
    if sum.iter().any(|x| !x.is_zero()) || rank(f, &pts[..6]) != 6 {
        return Err(FieldError::Inconsistent("points of the surface over GF(2) are not in general position".into()).into());
    }
    let cols = |idx: [usize; 6]| {
        let mut m = [[Elem::ZERO; 6]; 6];
        for (j, &k) in idx.iter().enumerate() {
            for i in 0..6 {
                m[i][j] = pts[k][i];
            }
        }
        m
    };
    let source_inv = mat6_inv(f, &cols([0, 1, 2, 3, 4, 5]))?;
    let perms = [[1, 0, 2, 3, 4, 5], [1, 2, 3, 4, 5, 6]];
    Ok(perms.iter().map(|&p| mat6_mul(f, &cols(p), &source_inv)).collect())
}

/// Line labels with orbits under PGL(3,q) by expansion (small q only).
#[derive(Clone, Debug)]
pub struct LineOrbits {
    pub lines: Vec<Line5>,
    pub labels: Vec<LineLabel>,
    pub orbit: Vec<u32>,
}

pub fn line_orbits(lc: &LineClassifier) -> Result<LineOrbits, ClassifyError> {
    let f = lc.field();
    if f.q() > 4 {
        return Err(ClassifyError::UnsupportedOrder(f.q()));
    }
    let mut lines = Vec::new();
    for shape in echelon_shapes::<2, 6>() {
        for_each_in_shape::<2, 6>(f, &shape, None, |m| {
            lines.push(Line5::from_generators(f, m[0], m[1]).expect("echelon rows"));
        });
    }
    lines.sort();
    let labels = lines.iter().map(|l| lc.classify(l)).collect::<Result<Vec<_>, _>>()?;
    let gens = pgl3_generators(f);
    let orbit = components(&lines, gens.len(), |k, l| {
        let [a, b] = l.rows();
        Line5::from_generators(f, gens[k].apply_vec6(f, a), gens[k].apply_vec6(f, b))
    })?;
    Ok(LineOrbits { lines, labels, orbit })
}

impl LineOrbits {
    pub fn orbit_count(&self) -> usize {
        self.orbit.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn label_mismatches(&self) -> Vec<String> {
        let mut by_orbit: BTreeMap<u32, BTreeSet<LineLabel>> = BTreeMap::new();
        let mut by_label: BTreeMap<LineLabel, BTreeSet<u32>> = BTreeMap::new();
        for (&o, &l) in self.orbit.iter().zip(&self.labels) {
            by_orbit.entry(o).or_default().insert(l);
            by_label.entry(l).or_default().insert(o);
        }
        let mut out: Vec<String> =
            by_orbit.values().filter(|ls| ls.len() > 1).map(|ls| format!("one orbit carries {ls:?}")).collect();
        out.extend(by_label.iter().filter(|(_, os)| os.len() > 1).map(|(l, os)| format!("{l} spans {} orbits", os.len())));
        out
    }
}

/// Number of lines of PG(5,q) in each orbit.
pub fn line_counts(lc: &LineClassifier, exec: Execution) -> Result<BTreeMap<LineLabel, u64>, ClassifyError> {
    let f = lc.field();
    let shapes = echelon_shapes::<2, 6>();
    let jobs = echelon_jobs::<2, 6>(f);
    type Acc = (BTreeMap<LineLabel, u64>, Option<ClassifyError>);
    let (counts, failure): Acc = fold_jobs(
        &jobs,
        exec,
        || (BTreeMap::new(), None),
        |&(s, first), acc: &mut Acc| {
            for_each_in_shape::<2, 6>(f, &shapes[s], first, |m| match lc.classify_generators(&m[0], &m[1]) {
                Ok(l) => *acc.0.entry(l).or_insert(0) += 1,
                Err(e) => acc.1 = Some(e),
            });
        },
        |mut a, b| {
            for (k, v) in b.0 {
                *a.0.entry(k).or_insert(0) += v;
            }
            (a.0, a.1.or(b.1))
        },
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(counts),
    }
}

/// Invertible matrix whose first column is `x`, padded with unit vectors.
fn completion(f: &Field, x: &Vec3) -> [[Elem; 3]; 3] {
    let lead = x.iter().position(|c| !c.is_zero()).expect("non-zero vector");
    let mut m = [[Elem::ZERO; 3]; 3];
    let mut next = 1;
    for i in 0..3 {
        m[i][0] = x[i];
        if i != lead {
            m[i][next] = Elem::ONE;
            next += 1;
        }
    }
    debug_assert!(!crate::veronese::det3(f, &m).is_zero());
    m
}

/// Order of the stabilizer of a plane in PGL(3,q). Only collineations
/// sending a chosen rank-1 point of the plane to a rank-1 point of the plane
/// are tried.
pub fn stabilizer_order(f: &Field, plane: &Plane) -> Result<u64, ClassifyError> {
    let sources: Vec<Vec3> = plane
        .points(f)
        .iter()
        .filter_map(|p| veronese_preimage(f, p.coords()).ok())
        .map(|p| *p.coords())
        .collect();
    let u0 = *sources.first().ok_or(ClassifyError::NoVeronesePoint)?;
    let to_u0 = mat3_inv(f, &completion(f, &u0))?;
    let mut fixers = Vec::new();
    for b11 in f.elements() {
        for b12 in f.elements() {
            for b21 in f.elements() {
                for b22 in f.elements() {
                    if (f.mul(b11, b22) + f.mul(b12, b21)).is_zero() {
                        continue;
                    }
                    for b01 in f.elements() {
                        for b02 in f.elements() {
                            fixers.push([[Elem::ONE, b01, b02], [Elem::ZERO, b11, b12], [Elem::ZERO, b21, b22]]);
                        }
                    }
                }
            }
        }
    }
    let mut count = 0;
    for t in &sources {
        let tt = completion(f, t);
        for b in &fixers {
            let a = mat3_mul(f, &mat3_mul(f, &tt, b), &to_u0);
            let g = Collineation::new(f, a)?;
            if plane.rows().iter().all(|r| plane.contains(f, &g.apply_vec6(f, r))) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Classifies random images of sample planes; returns the disagreements
/// as (plane, expected, found).
pub fn closure_failures(
    pc: &PlaneClassifier,
    samples: &[(Plane, PlaneLabel)],
    rng: &mut impl Rng,
) -> Result<Vec<(Plane, PlaneLabel, PlaneLabel)>, ClassifyError> {
    let f = pc.field();
    let mut out = Vec::new();
    for (p, l) in samples {
        let g = Collineation::random(f, rng);
        let img = g.apply_plane(f, p);
        let found = pc.classify(&img)?;
        if found != *l {
            out.push((img, *l, found));
        }
    }
    Ok(out)
}

/// Classification of planes through three fixed surface points plus
/// random planes meeting the surface, for q where a full census is slow.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleReport {
    pub counts: BTreeMap<PlaneLabel, u64>,
    pub planes: u64,
    pub equivariance_checks: u64,
    pub equivariance_failures: u64,
    pub forbidden: u64,
}

pub fn sampled_census(pc: &PlaneClassifier, exec: Execution, random: u64, seed: u64) -> Result<SampleReport, ClassifyError> {
    let f = pc.field();
    let total_points = projective_size(f.q(), 3) as usize;
    let vp = veronese_points(f);
    const CHUNK: u64 = 4096;
    let mut jobs: Vec<(usize, u64)> = (0..3.min(vp.len())).map(|i| (i, 0)).collect();
    jobs.extend((0..random.div_ceil(CHUNK)).map(|c| (usize::MAX, c)));
    type Acc = (SampleReport, Option<ClassifyError>);
    let record = |g: &[Vec6; 3], an: &mut Analysis, acc: &mut Acc, rng: Option<&mut StdRng>| {
        pc.analyse(g, an);
        if is_forbidden(f.q(), &an.od(total_points)) {
            acc.0.forbidden += 1;
        }
        match pc.label_of(g, an) {
            Ok(l) => {
                acc.0.planes += 1;
                *acc.0.counts.entry(l).or_insert(0) += 1;
                if let Some(rng) = rng {
                    let c = Collineation::random(f, rng);
                    let img = g.map(|r| c.apply_vec6(f, &r));
                    acc.0.equivariance_checks += 1;
                    if pc.classify_generators(&img).ok() != Some(l) {
                        acc.0.equivariance_failures += 1;
                    }
                }
            }
            Err(e) => acc.1 = Some(in_plane(f, g, e)),
        }
    };
    let (report, failure): Acc = fold_jobs(
        &jobs,
        exec,
        || (SampleReport::default(), None),
        |&(i, chunk), acc: &mut Acc| {
            let mut an = Analysis::default();
            if i != usize::MAX {
                for_each_plane_through(f, &vp[i], |g| record(g, &mut an, acc, None));
                return;
            }
            let mut rng = StdRng::seed_from_u64(seed ^ chunk.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let n = CHUNK.min(random - chunk * CHUNK);
            for k in 0..n {
                let g = random_plane_through_surface(f, &mut rng);
                let check = k % 64 == 0;
                let mut r2 = StdRng::seed_from_u64(rng.gen());
                record(&g, &mut an, acc, check.then_some(&mut r2));
            }
        },
        |mut a, b| {
            for (k, v) in b.0.counts {
                *a.0.counts.entry(k).or_insert(0) += v;
            }
            a.0.planes += b.0.planes;
            a.0.equivariance_checks += b.0.equivariance_checks;
            a.0.equivariance_failures += b.0.equivariance_failures;
            a.0.forbidden += b.0.forbidden;
            (a.0, a.1.or(b.1))
        },
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

/// Generators of a uniformly chosen plane through a random surface point.
pub fn random_plane_through_surface(f: &Field, rng: &mut impl Rng) -> [Vec6; 3] {
    let q = f.q() as u16;
    let mut elem = || Elem::from_bits(rng.gen_range(0..q));
    loop {
        let u = [elem(), elem(), elem()];
        if u.iter().all(|x| x.is_zero()) {
            continue;
        }
        let g = [veronese_vec(f, &u), std::array::from_fn(|_| elem()), std::array::from_fn(|_| elem())];
        if rank(f, &g) == 3 {
            return g;
        }
    }
}

/// Outcome of matching planes with a given number of rational inflexions
/// to lines of one orbit through their inflexion line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub inflexions: u32,
    pub line: LineLabel,
    pub plane_labels: BTreeMap<PlaneLabel, u64>,
    pub planes: u64,
    pub distinct_lines: u64,
    pub orbit_lines: u64,
    pub wrong_line_type: u64,
    pub no_unique_line: u64,
    pub example: Option<String>,
}

impl BijectionReport {
    /// Every plane has a unique inflexion line of the expected orbit, and
    /// this is a one-to-one correspondence with that orbit.
    pub fn is_bijection(&self) -> bool {
        self.wrong_line_type == 0
            && self.no_unique_line == 0
            && self.planes == self.distinct_lines
            && self.distinct_lines == self.orbit_lines
    }

    /// Bijection, and every plane involved carries `label`.
    pub fn matches(&self, label: PlaneLabel) -> bool {
        self.is_bijection() && self.plane_labels.keys().eq([label].iter())
    }
}

fn line_key(f: &Field, line: &Line5) -> u64 {
    line.rows().iter().flatten().fold(0u64, |acc, e| (acc << f.h()) | u64::from(e.bits()))
}

/// The lines of the parameter plane on which the cubic restricts to a
/// non-zero form with simple roots whose restriction of the Hessian is a
/// multiple of it.
fn inflexion_lines(
    pc: &PlaneClassifier,
    inc: &[Vec<usize>],
    an: &Analysis,
    cv: &mut Vec<Elem>,
    hv: &mut Vec<Elem>,
) -> Result<Vec<usize>, GeometryError> {
    let f = pc.field();
    let table = pc.table();
    let hess = an.cubic.hessian(f)?;
    cv.clear();
    hv.clear();
    for k in 0..table.points.len() {
        cv.push(table.eval(f, &an.cubic, k));
        hv.push(table.eval(f, &hess, k));
    }
    let mut out = Vec::new();
    'lines: for (li, pts) in inc.iter().enumerate() {
        let Some(&k0) = pts.iter().find(|&&k| !cv[k].is_zero()) else { continue };
        let ratio = f.div(hv[k0], cv[k0])?;
        if pts.iter().any(|&k| hv[k] != f.mul(ratio, cv[k])) {
            continue;
        }
        let roots: Vec<usize> = pts.iter().copied().filter(|&k| cv[k].is_zero()).collect();
        match roots.len() {
            0 | 3 => {}
            1 => {
                let p = &table.points[roots[0]];
                let other = &table.points[if pts[0] == roots[0] { pts[1] } else { pts[0] }];
                if dot(f, &an.cubic.gradient(f, p), other).is_zero() {
                    continue 'lines;
                }
            }
            _ => continue,
        }
        out.push(li);
    }
    Ok(out)
}

#[derive(Default)]
struct BijectionAcc {
    keys: [Vec<u64>; 3],
    labels: [BTreeMap<PlaneLabel, u64>; 3],
    wrong: [u64; 3],
    no_unique: [u64; 3],
    example: [Option<((u32, u64), String)>; 3],
    failure: Option<ClassifyError>,
}

const BIJECTION_CLASSES: [(u32, LineLabel); 3] = [(3, LineLabel::O14), (1, LineLabel::O15), (0, LineLabel::O17)];

/// For the planes with one rank-1 point, no nucleus point and rank-2 points
/// not on a line, finds the unique inflexion line of each and checks that
/// it gives a bijection onto the line orbit matching the inflexion count.
pub fn verify_bijections(pc: &PlaneClassifier, exec: Execution) -> Result<Vec<BijectionReport>, ClassifyError> {
    let f = pc.field();
    if f.q() < 4 || 12 * f.h() > 64 {
        return Err(ClassifyError::UnsupportedOrder(f.q()));
    }
    let lc = pc.lines();
    let inc = pc.incidences();
    let sweep = Sweep::new(pc);
    let acc = sweep.fold(
        exec,
        0,
        BijectionAcc::default,
        |g, an, pos, acc: &mut BijectionAcc| {
            let wanted = an.rank1.len() == 1 && an.nucleus.is_empty();
            if !wanted {
                return;
            }
            let label = match pc.label_of(g, an) {
                Ok(l @ (PlaneLabel::S12 | PlaneLabel::S13 | PlaneLabel::S14 | PlaneLabel::S14Prime)) => l,
                Ok(_) => return,
                Err(e) => {
                    acc.failure = Some(in_plane(f, g, e));
                    return;
                }
            };
            let mut run = || -> Result<(), ClassifyError> {
                let infl = pc.inflexion_params(an)?.len() as u32;
                let Some(c) = BIJECTION_CLASSES.iter().position(|(n, _)| *n == infl) else {
                    return Err(in_plane(f, g, ClassifyError::Unreachable(Box::new(pc.invariants(&Plane::from_generators(f, *g)?, false)))));
                };
                *acc.labels[c].entry(label).or_insert(0) += 1;
                let (mut cv, mut hv) = (Vec::new(), Vec::new());
                let found = inflexion_lines(pc, inc, an, &mut cv, &mut hv)?;
                let note = |acc: &mut BijectionAcc, why: String| {
                    if acc.example[c].as_ref().is_none_or(|(p, _)| pos < *p) {
                        let plane = Plane::from_generators(f, *g).map(|p| p.to_hex()).unwrap_or_default();
                        acc.example[c] = Some((pos, format!("{why} in plane [{plane}]")));
                    }
                };
                if found.len() != 1 {
                    acc.no_unique[c] += 1;
                    note(acc, format!("{} candidate inflexion lines", found.len()));
                    return Ok(());
                }
                let pts = &inc[found[0]];
                let table = pc.table();
                let line = Line5::from_generators(f, combine(f, g, &table.points[pts[0]]), combine(f, g, &table.points[pts[1]]))?;
                let ll = lc.classify(&line)?;
                if ll != BIJECTION_CLASSES[c].1 {
                    acc.wrong[c] += 1;
                    note(acc, format!("inflexion line of type {ll}"));
                }
                acc.keys[c].push(line_key(f, &line));
                Ok(())
            };
            if let Err(e) = run() {
                acc.failure = Some(e);
            }
        },
        |mut a, b| {
            for c in 0..3 {
                a.keys[c].extend_from_slice(&b.keys[c]);
                for (k, v) in &b.labels[c] {
                    *a.labels[c].entry(*k).or_insert(0) += v;
                }
                a.wrong[c] += b.wrong[c];
                a.no_unique[c] += b.no_unique[c];
                a.example[c] = match (a.example[c].take(), b.example[c].clone()) {
                    (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                    (x, y) => x.or(y),
                };
            }
            a.failure = a.failure.or(b.failure);
            a
        },
    );
    if let Some(e) = acc.failure {
        return Err(e);
    }
    let line_totals = line_counts(lc, exec)?;
    let mut out = Vec::new();
    for (c, (n, line)) in BIJECTION_CLASSES.iter().enumerate() {
        let mut keys = acc.keys[c].clone();
        let planes = acc.labels[c].values().sum();
        keys.sort_unstable();
        keys.dedup();
        out.push(BijectionReport {
            inflexions: *n,
            line: *line,
            plane_labels: acc.labels[c].clone(),
            planes,
            distinct_lines: keys.len() as u64,
            orbit_lines: line_totals.get(line).copied().unwrap_or(0),
            wrong_line_type: acc.wrong[c],
            no_unique_line: acc.no_unique[c],
            example: acc.example[c].as_ref().map(|(_, s)| s.clone()),
        });
    }
    Ok(out)
}

/// Inflexion counts across the family of planes parametrised by c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrichotomyReport {
    pub q: u32,
    /// Number of c with 0, 1 and 3 rational inflexions.
    pub with: [u64; 3],
    /// Values of c whose count disagrees with the root count of the
    /// depressed cubic at 1/c.
    pub mismatches: Vec<Elem>,
    pub admissible: usize,
}

impl TrichotomyReport {
    pub fn expected_admissible(&self) -> usize {
        (self.q as usize - 2) / 6
    }

    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.admissible == self.expected_admissible()
    }
}

pub fn inflexion_trichotomy(pc: &PlaneClassifier) -> Result<TrichotomyReport, ClassifyError> {
    let f = pc.field();
    let mut report = TrichotomyReport { q: f.q(), with: [0; 3], mismatches: Vec::new(), admissible: f.admissible_elements().len() };
    let mut an = Analysis::default();
    for c in f.nonzero() {
        let g = pencil_family(f, c);
        pc.analyse(&g, &mut an);
        let n = pc.inflexion_params(&an)?.len();
        let predicted = usize::from(f.predicted_depressed_root_count(f.inv(c)?)?);
        match n {
            0 => report.with[0] += 1,
            1 => report.with[1] += 1,
            3 => report.with[2] += 1,
            _ => {}
        }
        if n != predicted || an.rank1.len() != 1 {
            report.mismatches.push(c);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym7_maps_permute_the_surface() {
        let f = Field::new(1).unwrap();
        let pts = veronese_points(&f);
        for m in sym7_generators(&f).unwrap() {
            let mut imgs: Vec<Vec6> = pts.iter().map(|p| apply6(&f, &m, p)).collect();
            imgs.sort();
            let mut sorted = pts.clone();
            sorted.sort();
            assert_eq!(imgs, sorted);
        }
    }

    #[test]
    fn collineation_matrix_is_linear_action() {
        let f = Field::new(2).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        let g = Collineation::random(&f, &mut rng);
        let m = mat6_of(&f, &g);
        let y = [1, 2, 3, 0, 1, 2].map(Elem::from_bits);
        assert_eq!(apply6(&f, &m, &y), g.apply_vec6(&f, &y));
        let id = mat6_mul(&f, &m, &mat6_inv(&f, &m).unwrap());
        for (i, row) in id.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(e, if i == j { Elem::ONE } else { Elem::ZERO });
            }
        }
        assert!(mat6_inv(&f, &[[Elem::ZERO; 6]; 6]).is_err());
    }

    #[test]
    fn forbidden_distributions() {
        assert!(is_forbidden(4, &PointOd([1, 0, 0, 20])));
        assert!(is_forbidden(4, &PointOd([2, 1, 2, 16])));
        assert!(!is_forbidden(4, &PointOd([2, 0, 6, 13])));
        assert!(!is_forbidden(4, &PointOd([1, 0, 5, 15])));
    }

    #[test]
    fn stabilizer_of_conic_plane_at_q2() {
        let f = Field::new(1).unwrap();
        let plane = representative(&f, PlaneLabel::S1).unwrap();
        let mut brute = 0;
        crate::veronese::for_each_pgl3(&f, |g| {
            if g.apply_plane(&f, &plane) == plane {
                brute += 1;
            }
        });
        assert_eq!(stabilizer_order(&f, &plane).unwrap(), brute);
    }

    #[test]
    fn census_is_independent_of_sharding() {
        let f = Field::new(1).unwrap();
        let pc = PlaneClassifier::new(&f).unwrap();
        let a = census(&pc, CensusOptions { exec: Execution::Sequential, shards: 1 }).unwrap();
        let b = census(&pc, CensusOptions { exec: Execution::Parallel, shards: 3 }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(None).unwrap(), b.to_json(None).unwrap());
    }
}
