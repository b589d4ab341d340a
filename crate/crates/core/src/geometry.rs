//! Points, lines and planes of PG(2,q) and PG(5,q) over GF(q).
//!
//! Subspaces are stored in reduced row echelon form, which makes equality
//! and hashing canonical.

use std::fmt;

use crate::error::GeometryError;
use crate::field::{Elem, Field};

pub type Vec3 = [Elem; 3];
pub type Vec6 = [Elem; 6];

/// Scales `v` so that its first non-zero coordinate is one.
pub fn normalize<const N: usize>(field: &Field, v: [Elem; N]) -> Result<[Elem; N], GeometryError> {
    let lead = v.iter().position(|x| !x.is_zero()).ok_or(GeometryError::ZeroVector)?;
    if v[lead] == Elem::ONE {
        return Ok(v);
    }
    let s = field.inv(v[lead])?;
    Ok(v.map(|x| field.mul(s, x)))
}

#[inline]
pub fn scale<const N: usize>(field: &Field, s: Elem, v: &[Elem; N]) -> [Elem; N] {
    v.map(|x| field.mul(s, x))
}

#[inline]
pub fn add_scaled<const N: usize>(field: &Field, acc: &mut [Elem; N], s: Elem, v: &[Elem; N]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a += field.mul(s, *x);
    }
}

pub fn dot<const N: usize>(field: &Field, a: &[Elem; N], b: &[Elem; N]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (x, y)| acc + field.mul(*x, *y))
}

/// Brings `rows` into reduced row echelon form in place and returns the
/// rank. Zero rows end up at the bottom.
pub fn rref<const N: usize>(field: &Field, rows: &mut [[Elem; N]]) -> usize {
    let mut rank = 0;
    for col in 0..N {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = field.inv(rows[rank][col]).expect("pivot is non-zero");
        rows[rank] = scale(field, inv, &rows[rank]);
        let pivot = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank {
                let c = row[col];
                add_scaled(field, row, c, &pivot);
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank<const N: usize>(field: &Field, rows: &[[Elem; N]]) -> usize {
    let mut tmp = rows.to_vec();
    rref(field, &mut tmp)
}

/// Number of points of PG(n-1, q), i.e. of the projective space on N = n coordinates.
pub fn projective_size(q: u32, coords: usize) -> u64 {
    (0..coords as u32).map(|i| (q as u64).pow(i)).sum()
}

/// Position of a normalized vector in the canonical enumeration order of
/// [`projective_points`].
pub fn point_index<const N: usize>(q: u32, v: &[Elem; N]) -> usize {
    let lead = v.iter().position(|x| !x.is_zero()).expect("non-zero vector");
    let q = q as usize;
    let mut offset = 0;
    for i in 0..lead {
        offset += q.pow((N - 1 - i) as u32);
    }
    let tail = v[lead + 1..].iter().fold(0usize, |acc, x| acc * q + x.bits() as usize);
    offset + tail
}

/// All normalized points of the projective space on N coordinates, ordered by
/// leading position then lexicographically.
pub fn projective_points<const N: usize>(field: &Field) -> Vec<[Elem; N]> {
    let q = field.q() as usize;
    let mut out = Vec::with_capacity(projective_size(field.q(), N) as usize);
    for lead in 0..N {
        let free = N - 1 - lead;
        for code in 0..q.pow(free as u32) {
            let mut v = [Elem::ZERO; N];
            v[lead] = Elem::ONE;
            let mut c = code;
            for i in (lead + 1..N).rev() {
                v[i] = Elem::from_bits((c % q) as u16);
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

/// A point of PG(5,q) with normalized coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point5(pub(crate) Vec6);

impl Point5 {
    pub fn new(field: &Field, v: Vec6) -> Result<Point5, GeometryError> {
        Ok(Point5(normalize(field, v)?))
    }

    pub fn coords(&self) -> &Vec6 {
        &self.0
    }
}

impl fmt::Debug for Point5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:?}", self.0)
    }
}

/// A point of PG(2,q) with normalized coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2(pub(crate) Vec3);

impl Point2 {
    pub fn new(field: &Field, v: Vec3) -> Result<Point2, GeometryError> {
        Ok(Point2(normalize(field, v)?))
    }

    pub fn coords(&self) -> &Vec3 {
        &self.0
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{:?}", self.0)
    }
}

/// A line of PG(2,q), given by normalized dual coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Line2(pub(crate) Vec3);

impl Line2 {
    pub fn new(field: &Field, dual: Vec3) -> Result<Line2, GeometryError> {
        Ok(Line2(normalize(field, dual)?))
    }

    /// The line through two distinct points.
    pub fn through(field: &Field, a: &Vec3, b: &Vec3) -> Result<Line2, GeometryError> {
        let cross = [
            field.mul(a[1], b[2]) + field.mul(a[2], b[1]),
            field.mul(a[0], b[2]) + field.mul(a[2], b[0]),
            field.mul(a[0], b[1]) + field.mul(a[1], b[0]),
        ];
        Line2::new(field, cross).map_err(|_| GeometryError::Dependent { rank: 1, expected: 2 })
    }

    pub fn dual(&self) -> &Vec3 {
        &self.0
    }

    pub fn contains(&self, field: &Field, p: &Vec3) -> bool {
        dot(field, &self.0, p).is_zero()
    }

    /// Two points spanning the line.
    pub fn basis(&self) -> [Vec3; 2] {
        let l = self.0;
        let lead = l.iter().position(|x| !x.is_zero()).expect("normalized");
        let others: Vec<usize> = (0..3).filter(|&i| i != lead).collect();
        let mut out = [[Elem::ZERO; 3]; 2];
        for (k, &j) in others.iter().enumerate() {
            out[k][j] = Elem::ONE;
            // l[lead] = 1, so the lead coordinate cancels l[j].
            out[k][lead] = l[j];
        }
        out
    }

    pub fn points(&self, field: &Field) -> Vec<Vec3> {
        let [a, b] = self.basis();
        let mut pts = Vec::with_capacity(field.q() as usize + 1);
        for t in field.elements() {
            let mut v = a;
            add_scaled(field, &mut v, t, &b);
            pts.push(normalize(field, v).expect("independent"));
        }
        pts.push(normalize(field, b).expect("non-zero"));
        pts
    }
}

/// A line of PG(5,q) in row echelon form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line5 {
    rows: [Vec6; 2],
}

impl fmt::Debug for Line5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{:?}", self.rows)
    }
}

impl Line5 {
    pub fn from_generators(field: &Field, a: Vec6, b: Vec6) -> Result<Line5, GeometryError> {
        let mut rows = [a, b];
        let r = rref(field, &mut rows);
        if r != 2 {
            return Err(GeometryError::Dependent { rank: r, expected: 2 });
        }
        Ok(Line5 { rows })
    }


    pub fn rows(&self) -> &[Vec6; 2] {
        &self.rows
    }

    pub fn points(&self, field: &Field) -> Vec<Point5> {
        let [a, b] = self.rows;
        let mut pts: Vec<Point5> = field
            .elements()
            .map(|t| {
                let mut v = a;
                add_scaled(field, &mut v, t, &b);
                Point5(v)
            })
            .collect();
        pts.push(Point5(b));
        pts
    }

    pub fn contains(&self, field: &Field, v: &Vec6) -> bool {
        reduces_to_zero(field, &self.rows, v)
    }
}

fn pivot(row: &Vec6) -> usize {
    row.iter().position(|x| !x.is_zero()).expect("echelon row is non-zero")
}

fn reduces_to_zero(field: &Field, rows: &[Vec6], v: &Vec6) -> bool {
    let mut w = *v;
    for row in rows {
        let p = pivot(row);
        let c = w[p];
        add_scaled(field, &mut w, c, row);
    }
    w.iter().all(|x| x.is_zero())
}

/// A plane of PG(5,q) in row echelon form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane {
    rows: [Vec6; 3],
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Plane{:?}", self.rows)
    }
}

impl Plane {
    pub fn from_generators(field: &Field, gens: [Vec6; 3]) -> Result<Plane, GeometryError> {
        let mut rows = gens;
        let r = rref(field, &mut rows);
        if r != 3 {
            return Err(GeometryError::Dependent { rank: r, expected: 3 });
        }
        Ok(Plane { rows })
    }

    pub fn rows(&self) -> &[Vec6; 3] {
        &self.rows
    }

    /// The 18 entries as hexadecimal tokens, rows separated by `;`.
    pub fn to_hex(&self) -> String {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| format!("{e}")).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// The point x r0 + y r1 + z r2; normalized whenever `param` is.
    #[inline]
    pub fn point_at(&self, field: &Field, param: &Vec3) -> Vec6 {
        combine(field, &self.rows, param)
    }

    pub fn points(&self, field: &Field) -> Vec<Point5> {
        projective_points::<3>(field)
            .iter()
            .map(|p| Point5(self.point_at(field, p)))
            .collect()
    }

    pub fn lines(&self, field: &Field) -> Vec<Line5> {
        projective_points::<3>(field)
            .iter()
            .map(|l| {
                let [a, b] = Line2(*l).basis();
                Line5::from_generators(field, self.point_at(field, &a), self.point_at(field, &b))
                    .expect("independent in a plane")
            })
            .collect()
    }

    pub fn contains(&self, field: &Field, v: &Vec6) -> bool {
        reduces_to_zero(field, &self.rows, v)
    }

    pub fn contains_line(&self, field: &Field, line: &Line5) -> bool {
        line.rows().iter().all(|r| self.contains(field, r))
    }

    /// Coordinates of a point of the plane in terms of the echelon rows.
    pub fn param_of(&self, v: &Vec6) -> Vec3 {
        [0, 1, 2].map(|i| v[pivot(&self.rows[i])])
    }
}

#[inline]
pub fn combine(field: &Field, gens: &[Vec6; 3], param: &Vec3) -> Vec6 {
    let mut v = [Elem::ZERO; 6];
    for k in 0..3 {
        add_scaled(field, &mut v, param[k], &gens[k]);
    }
    v
}

/// A projective subspace of dimension at most two.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Flat {
    Point(Point5),
    Line(Line5),
    Plane(Plane),
}

impl Flat {
    pub fn dim(&self) -> i32 {
        match self {
            Flat::Point(_) => 0,
            Flat::Line(_) => 1,
            Flat::Plane(_) => 2,
        }
    }
}

/// Span of independent points.
pub fn span(field: &Field, points: &[Vec6]) -> Result<Flat, GeometryError> {
    let mut rows = points.to_vec();
    let r = rref(field, &mut rows);
    if r != points.len() {
        return Err(GeometryError::Dependent { rank: r, expected: points.len() });
    }
    match r {
        1 => Ok(Flat::Point(Point5(rows[0]))),
        2 => Ok(Flat::Line(Line5 { rows: [rows[0], rows[1]] })),
        3 => Ok(Flat::Plane(Plane { rows: [rows[0], rows[1], rows[2]] })),
        n => Err(GeometryError::Arity { expected: 3, got: n }),
    }
}

/// Intersection of a plane with the plane Y0 = Y3 = Y5 = 0.
pub fn meet_nucleus_plane(field: &Field, plane: &Plane) -> Option<Flat> {
    let rows = plane.rows();
    // Column k of the system: the diagonal entries of generator k.
    let mut eqs = [[Elem::ZERO; 3]; 3];
    for (e, &coord) in [0usize, 3, 5].iter().enumerate() {
        for k in 0..3 {
            eqs[e][k] = rows[k][coord];
        }
    }
    let sols: Vec<Vec6> = projective_points::<3>(field)
        .into_iter()
        .filter(|p| eqs.iter().all(|e| dot(field, e, p).is_zero()))
        .map(|p| plane.point_at(field, &p))
        .collect();
    match sols.len() {
        0 => None,
        1 => span(field, &sols[..1]).ok(),
        _ => {
            // Pick a basis among the solutions.
            let mut basis: Vec<Vec6> = Vec::new();
            for s in sols {
                let mut trial = basis.clone();
                trial.push(s);
                if rank(field, &trial) == trial.len() {
                    basis = trial;
                }
            }
            span(field, &basis).ok()
        }
    }
}

/// Echelon shape of K x N matrices: pivot columns and free positions.
#[derive(Clone, Debug)]
pub struct EchelonShape<const K: usize> {
    pub pivots: [usize; K],
    pub free: Vec<(usize, usize)>,
}

pub fn echelon_shapes<const K: usize, const N: usize>() -> Vec<EchelonShape<K>> {
    fn rec<const K: usize, const N: usize>(start: usize, acc: &mut Vec<usize>, out: &mut Vec<EchelonShape<K>>) {
        if acc.len() == K {
            let pivots: [usize; K] = acc.clone().try_into().expect("K pivots");
            let mut free = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                for j in p + 1..N {
                    if !pivots.contains(&j) {
                        free.push((i, j));
                    }
                }
            }
            out.push(EchelonShape { pivots, free });
            return;
        }
        for c in start..N {
            acc.push(c);
            rec::<K, N>(c + 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec::<K, N>(0, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` on every echelon matrix of the given shape. When `first` is
/// set, the first free entry is pinned to that value.
pub fn for_each_in_shape<const K: usize, const N: usize>(
    field: &Field,
    shape: &EchelonShape<K>,
    first: Option<Elem>,
    mut f: impl FnMut(&[[Elem; N]; K]),
) {
    let mut m = [[Elem::ZERO; N]; K];
    for (i, &p) in shape.pivots.iter().enumerate() {
        m[i][p] = Elem::ONE;
    }
    let skip = usize::from(first.is_some() && !shape.free.is_empty());
    if skip == 1 {
        let (i, j) = shape.free[0];
        m[i][j] = first.expect("checked");
    }
    let slots = &shape.free[skip..];
    let q = field.q() as u16;
    loop {
        f(&m);
        let mut k = 0;
        loop {
            if k == slots.len() {
                return;
            }
            let (i, j) = slots[k];
            let next = m[i][j].bits() + 1;
            if next < q {
                m[i][j] = Elem::from_bits(next);
                break;
            }
            m[i][j] = Elem::ZERO;
            k += 1;
        }
    }
}

/// Work items splitting the subspace enumeration into independent pieces.
pub fn echelon_jobs<const K: usize, const N: usize>(field: &Field) -> Vec<(usize, Option<Elem>)> {
    let mut jobs = Vec::new();
    for (s, shape) in echelon_shapes::<K, N>().iter().enumerate() {
        if shape.free.is_empty() {
            jobs.push((s, None));
        } else {
            jobs.extend(field.elements().map(|v| (s, Some(v))));
        }
    }
    jobs
}

/// Gaussian binomial [n, k]_q.
pub fn gaussian_binomial(q: u64, n: u32, k: u32) -> u64 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (q as u128).pow(n - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Every plane of PG(5,q) through `p`, as (p, u, v) with u, v spanning a
/// complement of p. The complement is fixed by the leading coordinate of p.
pub fn for_each_plane_through(field: &Field, p: &Vec6, mut f: impl FnMut(&[Vec6; 3])) {
    let lead = pivot(p);
    let others: Vec<usize> = (0..6).filter(|&i| i != lead).collect();
    for shape in echelon_shapes::<2, 5>() {
        for_each_in_shape::<2, 5>(field, &shape, None, |m| {
            let lift = |r: &[Elem; 5]| {
                let mut v = [Elem::ZERO; 6];
                for (k, &c) in others.iter().enumerate() {
                    v[c] = r[k];
                }
                v
            };
            f(&[*p, lift(&m[0]), lift(&m[1])]);
        });
    }
}
