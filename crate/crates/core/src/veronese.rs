//! The Veronese surface of PG(5,q) and the symmetric-matrix model.
//!
//! A point (y0,..,y5) is read as the symmetric matrix
//! `[[y0,y1,y2],[y1,y3,y4],[y2,y4,y5]]`. Rank-one matrices form the surface;
//! the rank-two matrices with zero diagonal form the nucleus plane.

use serde::Serialize;

use crate::error::GeometryError;
use crate::field::{Elem, Field};
use crate::geometry::{normalize, projective_points, Line2, Plane, Point2, Point5, Vec3, Vec6};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymMat3(pub Vec6);

impl SymMat3 {
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Elem {
        const IDX: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
        self.0[IDX[i][j]]
    }

    pub fn from_rows(m: [[Elem; 3]; 3]) -> SymMat3 {
        SymMat3([m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]])
    }

    pub fn rows(&self) -> [[Elem; 3]; 3] {
        [0, 1, 2].map(|i| [0, 1, 2].map(|j| self.entry(i, j)))
    }

    /// Determinant; the off-diagonal triple product drops out in characteristic two.
    #[inline]
    pub fn det(&self, field: &Field) -> Elem {
        det_sym(field, &self.0)
    }

    pub fn rank(&self, field: &Field) -> Result<u8, GeometryError> {
        if self.0.iter().all(|x| x.is_zero()) {
            return Err(GeometryError::ZeroVector);
        }
        Ok(rank_sym(field, &self.0))
    }
}

#[inline]
pub fn det_sym(f: &Field, y: &Vec6) -> Elem {
    let [y0, y1, y2, y3, y4, y5] = *y;
    f.mul(f.mul(y0, y3), y5) + f.mul(y0, f.square(y4)) + f.mul(y3, f.square(y2)) + f.mul(y5, f.square(y1))
}

/// True when every 2x2 minor vanishes.
#[inline]
pub fn is_rank_one(f: &Field, y: &Vec6) -> bool {
    let [y0, y1, y2, y3, y4, y5] = *y;
    f.mul(y0, y3) == f.square(y1)
        && f.mul(y0, y5) == f.square(y2)
        && f.mul(y3, y5) == f.square(y4)
        && f.mul(y0, y4) == f.mul(y1, y2)
        && f.mul(y1, y4) == f.mul(y2, y3)
        && f.mul(y1, y5) == f.mul(y2, y4)
}

/// Rank of a non-zero symmetric matrix.
#[inline]
pub fn rank_sym(f: &Field, y: &Vec6) -> u8 {
    if !det_sym(f, y).is_zero() {
        3
    } else if is_rank_one(f, y) {
        1
    } else {
        2
    }
}

#[inline]
pub fn in_nucleus_plane(y: &Vec6) -> bool {
    y[0].is_zero() && y[3].is_zero() && y[5].is_zero()
}

/// The four point classes of PG(5,q) under the group of the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointClass {
    Rank1,
    Rank2Nucleus,
    Rank2Secant,
    Rank3,
}

impl PointClass {
    pub const ALL: [PointClass; 4] =
        [PointClass::Rank1, PointClass::Rank2Nucleus, PointClass::Rank2Secant, PointClass::Rank3];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Number of points of the class in PG(5,q).
    pub fn size(self, q: u64) -> u64 {
        match self {
            PointClass::Rank1 | PointClass::Rank2Nucleus => q * q + q + 1,
            PointClass::Rank2Secant => (q * q - 1) * (q * q + q + 1),
            PointClass::Rank3 => q.pow(5) - q * q,
        }
    }
}

#[inline]
pub fn classify_vec(f: &Field, y: &Vec6) -> PointClass {
    match rank_sym(f, y) {
        1 => PointClass::Rank1,
        2 if in_nucleus_plane(y) => PointClass::Rank2Nucleus,
        2 => PointClass::Rank2Secant,
        _ => PointClass::Rank3,
    }
}

pub fn classify_point(field: &Field, p: &Point5) -> PointClass {
    classify_vec(field, p.coords())
}

#[inline]
pub fn veronese_vec(f: &Field, u: &Vec3) -> Vec6 {
    let [u0, u1, u2] = *u;
    [f.square(u0), f.mul(u0, u1), f.mul(u0, u2), f.square(u1), f.mul(u1, u2), f.square(u2)]
}

pub fn veronese_map(field: &Field, u: &Point2) -> Point5 {
    Point5::new(field, veronese_vec(field, u.coords())).expect("image of a non-zero vector")
}

/// Preimage of a rank-one point.
pub fn veronese_preimage(field: &Field, y: &Vec6) -> Result<Point2, GeometryError> {
    if !is_rank_one(field, y) || y.iter().all(|x| x.is_zero()) {
        return Err(GeometryError::WrongRank);
    }
    let m = SymMat3(*y);
    let i = (0..3).find(|&i| !m.entry(i, i).is_zero()).ok_or(GeometryError::WrongRank)?;
    let ui = field.sqrt(m.entry(i, i));
    let inv = field.inv(ui)?;
    let u = [0, 1, 2].map(|j| if j == i { ui } else { field.mul(m.entry(i, j), inv) });
    Point2::new(field, u)
}

/// All q^2+q+1 points of the surface, in the order of their preimages.
pub fn veronese_points(field: &Field) -> Vec<Vec6> {
    projective_points::<3>(field)
        .iter()
        .map(|u| normalize(field, veronese_vec(field, u)).expect("non-zero"))
        .collect()
}

/// An element of PGL(3,q), acting on the plane by u -> A u and on PG(5,q)
/// by M -> A M A^T.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Collineation {
    a: [[Elem; 3]; 3],
}

pub fn det3(f: &Field, a: &[[Elem; 3]; 3]) -> Elem {
    f.mul(a[0][0], f.mul(a[1][1], a[2][2]) + f.mul(a[1][2], a[2][1]))
        + f.mul(a[0][1], f.mul(a[1][0], a[2][2]) + f.mul(a[1][2], a[2][0]))
        + f.mul(a[0][2], f.mul(a[1][0], a[2][1]) + f.mul(a[1][1], a[2][0]))
}

pub fn mat3_mul(f: &Field, a: &[[Elem; 3]; 3], b: &[[Elem; 3]; 3]) -> [[Elem; 3]; 3] {
    let mut c = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).fold(Elem::ZERO, |acc, k| acc + f.mul(a[i][k], b[k][j]));
        }
    }
    c
}

/// Inverse of an invertible 3x3 matrix (the adjugate needs no signs here).
pub fn mat3_inv(f: &Field, a: &[[Elem; 3]; 3]) -> Result<[[Elem; 3]; 3], GeometryError> {
    let d = det3(f, a);
    if d.is_zero() {
        return Err(GeometryError::Singular);
    }
    let di = f.inv(d)?;
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| f.mul(a[r0][c0], a[r1][c1]) + f.mul(a[r0][c1], a[r1][c0]);
    let others = |i: usize| match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut inv = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            inv[i][j] = f.mul(minor(r0, r1, c0, c1), di);
        }
    }
    Ok(inv)
}

impl Collineation {
    pub fn new(field: &Field, a: [[Elem; 3]; 3]) -> Result<Collineation, GeometryError> {
        if det3(field, &a).is_zero() {
            return Err(GeometryError::Singular);
        }
        Ok(Collineation { a })
    }

    pub fn identity() -> Collineation {
        let mut a = [[Elem::ZERO; 3]; 3];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = Elem::ONE;
        }
        Collineation { a }
    }


    pub fn matrix(&self) -> &[[Elem; 3]; 3] {
        &self.a
    }

    pub fn det(&self, field: &Field) -> Elem {
        det3(field, &self.a)
    }

    /// `self` after `other`.
    pub fn compose(&self, field: &Field, other: &Collineation) -> Collineation {
        Collineation { a: mat3_mul(field, &self.a, &other.a) }
    }

    pub fn inverse(&self, field: &Field) -> Collineation {
        Collineation { a: mat3_inv(field, &self.a).expect("invertible by construction") }
    }

    pub fn random(field: &Field, rng: &mut impl rand::Rng) -> Collineation {
        loop {
            let a = [0; 3].map(|_| [0; 3].map(|_| Elem::from_bits(rng.gen_range(0..field.q()) as u16)));
            if !det3(field, &a).is_zero() {
                return Collineation { a };
            }
        }
    }

    #[inline]
    pub fn apply_vec3(&self, f: &Field, u: &Vec3) -> Vec3 {
        [0, 1, 2].map(|i| f.mul(self.a[i][0], u[0]) + f.mul(self.a[i][1], u[1]) + f.mul(self.a[i][2], u[2]))
    }

    /// A M A^T on the six coordinates, without normalizing.
    #[inline]
    pub fn apply_vec6(&self, f: &Field, y: &Vec6) -> Vec6 {
        let m = SymMat3(*y);
        // B = A M, then entries of B A^T.
        let mut b = [[Elem::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = f.mul(self.a[i][0], m.entry(0, j)) + f.mul(self.a[i][1], m.entry(1, j)) + f.mul(self.a[i][2], m.entry(2, j));
            }
        }
        let e = |i: usize, j: usize| f.mul(b[i][0], self.a[j][0]) + f.mul(b[i][1], self.a[j][1]) + f.mul(b[i][2], self.a[j][2]);
        [e(0, 0), e(0, 1), e(0, 2), e(1, 1), e(1, 2), e(2, 2)]
    }

    pub fn apply_point2(&self, field: &Field, p: &Point2) -> Point2 {
        Point2::new(field, self.apply_vec3(field, p.coords())).expect("invertible")
    }

    pub fn apply_point(&self, field: &Field, p: &Point5) -> Point5 {
        Point5::new(field, self.apply_vec6(field, p.coords())).expect("invertible")
    }

    pub fn apply_plane(&self, field: &Field, plane: &Plane) -> Plane {
        let r = plane.rows();
        Plane::from_generators(field, [0, 1, 2].map(|k| self.apply_vec6(field, &r[k]))).expect("invertible")
    }

    pub fn apply_line(&self, field: &Field, line: &crate::geometry::Line5) -> crate::geometry::Line5 {
        let [a, b] = line.rows();
        crate::geometry::Line5::from_generators(field, self.apply_vec6(field, a), self.apply_vec6(field, b))
            .expect("invertible")
    }
}

/// Every element of PGL(3,q), each once (first non-zero entry of the
/// matrix scaled to one).
pub fn for_each_pgl3(field: &Field, mut f: impl FnMut(&Collineation)) {
    let vecs = projective_points::<3>(field);
    let all: Vec<Vec3> = {
        let mut v = Vec::new();
        for a in field.elements() {
            for b in field.elements() {
                for c in field.elements() {
                    v.push([a, b, c]);
                }
            }
        }
        v
    };
    for r0 in &vecs {
        for r1 in &all {
            for r2 in &all {
                let a = [*r0, *r1, *r2];
                if !det3(field, &a).is_zero() {
                    f(&Collineation { a });
                }
            }
        }
    }
}

pub fn pgl3_order(q: u64) -> u64 {
    q.pow(3) * (q.pow(3) - 1) * (q * q - 1)
}

/// The conic nu(l) of a line l of PG(2,q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Conic {
    pub line: Line2,
}

impl Conic {
    pub fn points(&self, field: &Field) -> Vec<Vec6> {
        self.line
            .points(field)
            .iter()
            .map(|u| normalize(field, veronese_vec(field, u)).expect("non-zero"))
            .collect()
    }

    /// The plane spanned by the conic.
    pub fn plane(&self, field: &Field) -> Plane {
        let [a, b] = self.line.basis();
        let va = veronese_vec(field, &a);
        let vb = veronese_vec(field, &b);
        let cross = symmetric_product(field, &a, &b);
        Plane::from_generators(field, [va, vb, cross]).expect("conic planes are planes")
    }
}

/// a b^T + b a^T as a point of PG(5,q).
pub fn symmetric_product(f: &Field, a: &Vec3, b: &Vec3) -> Vec6 {
    let m = |i: usize, j: usize| f.mul(a[i], b[j]) + f.mul(a[j], b[i]);
    [Elem::ZERO, m(0, 1), m(0, 2), Elem::ZERO, m(1, 2), Elem::ZERO]
}

/// The common point of the tangents of nu(l).
pub fn nucleus_of_conic(field: &Field, conic: &Conic) -> Point5 {
    let [a, b] = conic.line.basis();
    Point5::new(field, symmetric_product(field, &a, &b)).expect("distinct points")
}

/// The conic associated with a rank-two point: the one whose nucleus it is,
/// or the one whose plane contains it.
pub fn conic_of(field: &Field, p: &Point5) -> Result<Conic, GeometryError> {
    match classify_point(field, p) {
        PointClass::Rank2Nucleus => projective_points::<3>(field)
            .into_iter()
            .map(|l| Conic { line: Line2(l) })
            .find(|c| nucleus_of_conic(field, c) == *p)
            .ok_or(GeometryError::WrongRank),
        PointClass::Rank2Secant => {
            let y = p.coords();
            for v in veronese_points(field) {
                for t in field.nonzero() {
                    let mut w = *y;
                    crate::geometry::add_scaled(field, &mut w, t, &v);
                    if w.iter().any(|x| !x.is_zero()) && is_rank_one(field, &w) {
                        let a = veronese_preimage(field, &v)?;
                        let b = veronese_preimage(field, &w)?;
                        let line = Line2::through(field, a.coords(), b.coords())?;
                        return Ok(Conic { line });
                    }
                }
            }
            Err(GeometryError::WrongRank)
        }
        _ => Err(GeometryError::WrongRank),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::projective_size;

    fn e(bits: [u16; 6]) -> Vec6 {
        bits.map(Elem::from_bits)
    }

    #[test]
    fn examples_of_point_classes() {
        let f = Field::new(2).unwrap();
        assert_eq!(classify_vec(&f, &e([1, 0, 0, 0, 0, 0])), PointClass::Rank1);
        assert_eq!(classify_vec(&f, &e([0, 1, 0, 0, 0, 0])), PointClass::Rank2Nucleus);
        assert_eq!(classify_vec(&f, &e([1, 0, 0, 1, 0, 0])), PointClass::Rank2Secant);
        assert_eq!(classify_vec(&f, &e([1, 0, 0, 1, 0, 1])), PointClass::Rank3);
        assert!(SymMat3([Elem::ZERO; 6]).rank(&f).is_err());
    }

    #[test]
    fn class_sizes_partition_pg5() {
        for h in 1..=3 {
            let f = Field::new(h).unwrap();
            let q = f.q() as u64;
            let mut counts = [0u64; 4];
            for p in projective_points::<6>(&f) {
                counts[classify_vec(&f, &p).index()] += 1;
            }
            for c in PointClass::ALL {
                assert_eq!(counts[c.index()], c.size(q), "{c:?} at q={q}");
            }
            assert_eq!(counts.iter().sum::<u64>(), projective_size(f.q(), 6));
        }
    }

    #[test]
    fn preimage_inverts_the_map() {
        let f = Field::new(3).unwrap();
        for u in projective_points::<3>(&f) {
            let p = Point2(u);
            let v = veronese_map(&f, &p);
            assert_eq!(veronese_preimage(&f, v.coords()).unwrap(), p);
        }
    }

    #[test]
    fn collineations_preserve_classes_and_compose() {
        let f = Field::new(2).unwrap();
        let mut rng = rand::thread_rng();
        for _ in 0..50 {
            let g = Collineation::random(&f, &mut rng);
            let h = Collineation::random(&f, &mut rng);
            let gh = g.compose(&f, &h);
            for y in projective_points::<6>(&f).into_iter().step_by(17) {
                let p = Point5(y);
                assert_eq!(classify_point(&f, &g.apply_point(&f, &p)), classify_point(&f, &p));
                assert_eq!(gh.apply_point(&f, &p), g.apply_point(&f, &h.apply_point(&f, &p)));
            }
            let gi = g.inverse(&f);
            let id = g.compose(&f, &gi);
            let p = Point5(e([1, 2, 3, 0, 1, 1]));
            assert_eq!(id.apply_point(&f, &p), p);
        }
    }

    #[test]
    fn veronese_map_is_equivariant() {
        let f = Field::new(3).unwrap();
        let mut rng = rand::thread_rng();
        for _ in 0..20 {
            let g = Collineation::random(&f, &mut rng);
            for u in projective_points::<3>(&f) {
                let p = Point2(u);
                assert_eq!(veronese_map(&f, &g.apply_point2(&f, &p)), g.apply_point(&f, &veronese_map(&f, &p)));
            }
        }
    }

    #[test]
    fn pgl3_enumeration_has_the_right_order() {
        let f = Field::new(1).unwrap();
        let mut n = 0;
        for_each_pgl3(&f, |_| n += 1);
        assert_eq!(n, pgl3_order(2));
        assert_eq!(pgl3_order(4), 60_480);
        assert_eq!(pgl3_order(8), 16_482_816);
    }

    /// Tangent lines of the conic inside its plane, found by brute force.
    fn tangent_meet(f: &Field, c: &Conic) -> Vec6 {
        let plane = c.plane(f);
        let pts = c.points(f);
        let tangents: Vec<_> = plane
            .lines(f)
            .into_iter()
            .filter(|l| pts.iter().filter(|p| l.contains(f, p)).count() == 1)
            .collect();
        assert_eq!(tangents.len() as u32, f.q() + 1);
        let common: Vec<_> = plane
            .points(f)
            .into_iter()
            .filter(|p| tangents.iter().all(|t| t.contains(f, p.coords())))
            .collect();
        assert_eq!(common.len(), 1);
        *common[0].coords()
    }

    #[test]
    fn nucleus_matches_tangent_oracle() {
        for h in 1..=3 {
            let f = Field::new(h).unwrap();
            for l in projective_points::<3>(&f) {
                let c = Conic { line: Line2(l) };
                let n = nucleus_of_conic(&f, &c);
                assert_eq!(*n.coords(), tangent_meet(&f, &c));
                assert_eq!(classify_point(&f, &n), PointClass::Rank2Nucleus);
                assert_eq!(conic_of(&f, &n).unwrap(), c);
            }
        }
    }

    #[test]
    fn secant_points_recover_their_conic() {
        let f = Field::new(2).unwrap();
        for y in projective_points::<6>(&f) {
            let p = Point5(y);
            if classify_point(&f, &p) == PointClass::Rank2Secant {
                let c = conic_of(&f, &p).unwrap();
                assert!(c.plane(&f).contains(&f, &y));
            }
        }
        assert!(conic_of(&f, &Point5(e([1, 0, 0, 0, 0, 0]))).is_err());
    }
}
