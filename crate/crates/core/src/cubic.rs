//! Plane cubic curves over GF(q), q even.
//!
//! A cubic is stored as a 3x3 array `a` with `a[i][j]` the coefficient of
//! X_i X_j^2 (so the diagonal holds the cubes) plus the coefficient of XYZ.

use std::fmt;

use serde::Serialize;

use crate::error::GeometryError;
use crate::field::{Elem, Field};
use crate::geometry::{normalize, projective_points, Line2, Vec3, Vec6};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Cubic {
    pub a: [[Elem; 3]; 3],
    pub a012: Elem,
}

impl fmt::Debug for Cubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_form())
    }
}

impl Cubic {
    pub fn is_zero(&self) -> bool {
        self.a012.is_zero() && self.a.iter().flatten().all(|x| x.is_zero())
    }

    #[inline]
    pub fn eval(&self, f: &Field, p: &Vec3) -> Elem {
        let sq = [f.square(p[0]), f.square(p[1]), f.square(p[2])];
        let mut acc = f.mul(self.a012, f.mul(p[0], f.mul(p[1], p[2])));
        for i in 0..3 {
            let row = &self.a[i];
            let inner = f.mul(row[0], sq[0]) + f.mul(row[1], sq[1]) + f.mul(row[2], sq[2]);
            acc += f.mul(p[i], inner);
        }
        acc
    }

    /// Formal partial derivatives at `p`. In characteristic two the derivative
    /// of X_i X_j^2 in X_j vanishes, so d/dX_k = sum_j a[k][j] X_j^2 + a012 X_{k+1} X_{k+2}.
    pub fn gradient(&self, f: &Field, p: &Vec3) -> Vec3 {
        let sq = [f.square(p[0]), f.square(p[1]), f.square(p[2])];
        [0, 1, 2].map(|k| {
            let row = &self.a[k];
            f.mul(row[0], sq[0])
                + f.mul(row[1], sq[1])
                + f.mul(row[2], sq[2])
                + f.mul(self.a012, f.mul(p[(k + 1) % 3], p[(k + 2) % 3]))
        })
    }

    pub fn is_singular_at(&self, f: &Field, p: &Vec3) -> bool {
        self.eval(f, p).is_zero() && self.gradient(f, p).iter().all(|x| x.is_zero())
    }

    pub fn rational_points(&self, f: &Field) -> Vec<Vec3> {
        projective_points::<3>(f).into_iter().filter(|p| self.eval(f, p).is_zero()).collect()
    }

    pub fn singular_points(&self, f: &Field) -> Vec<Vec3> {
        projective_points::<3>(f)
            .into_iter()
            .filter(|p| self.is_singular_at(f, p))
            .collect()
    }

    /// One application of the covariant operator: cofactor matrix of `a`
    /// plus a012 times the cross-term matrix. The new XYZ coefficient is a012^2.
    pub fn phi(&self, f: &Field) -> Cubic {
        let a = &self.a;
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| f.mul(a[r0][c0], a[r1][c1]) + f.mul(a[r0][c1], a[r1][c0]);
        let others = |i: usize| match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let cross = [[Elem::ZERO, a[0][2], a[0][1]], [a[1][2], Elem::ZERO, a[1][0]], [a[2][1], a[2][0], Elem::ZERO]];
        let mut out = [[Elem::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (r0, r1) = others(i);
                let (c0, c1) = others(j);
                out[i][j] = minor(r0, r1, c0, c1) + f.mul(self.a012, cross[i][j]);
            }
        }
        Cubic { a: out, a012: f.square(self.a012) }
    }

    /// The Hessian curve, defined when the XYZ coefficient is non-zero.
    pub fn hessian(&self, f: &Field) -> Result<Cubic, GeometryError> {
        if self.a012.is_zero() {
            return Err(GeometryError::HessianUndefined);
        }
        Ok(self.phi(f).phi(f))
    }

    /// Non-singular rational points shared with the Hessian.
    pub fn inflexion_points(&self, f: &Field) -> Result<Vec<Vec3>, GeometryError> {
        let hess = self.hessian(f)?;
        Ok(self
            .rational_points(f)
            .into_iter()
            .filter(|p| hess.eval(f, p).is_zero() && !self.is_singular_at(f, p))
            .collect())
    }

    pub fn to_form(&self) -> Form {
        let mut form = Form::zero(3);
        for i in 0..3 {
            for j in 0..3 {
                let mut e = [0usize; 3];
                e[i] += 1;
                e[j] += 2;
                form.set(e, self.a[i][j]);
            }
        }
        form.set([1, 1, 1], self.a012);
        form
    }

    pub fn from_form(form: &Form) -> Cubic {
        assert_eq!(form.deg, 3, "not a cubic form");
        let mut c = Cubic::default();
        for i in 0..3 {
            for j in 0..3 {
                let mut e = [0usize; 3];
                e[i] += 1;
                e[j] += 2;
                c.a[i][j] = form.get(e);
            }
        }
        c.a012 = form.get([1, 1, 1]);
        c
    }

    /// The cubic X -> f(M X).
    pub fn substitute(&self, f: &Field, m: &[[Elem; 3]; 3]) -> Cubic {
        let lins = [0, 1, 2].map(|i| Form::linear(m[i]));
        Cubic::from_form(&self.to_form().substitute(f, &lins))
    }

    pub fn scaled(&self, f: &Field, s: Elem) -> Cubic {
        Cubic { a: self.a.map(|r| r.map(|x| f.mul(s, x))), a012: f.mul(s, self.a012) }
    }

    /// Equal up to a non-zero scalar.
    pub fn proportional(&self, f: &Field, other: &Cubic) -> bool {
        let x = self.to_form();
        let y = other.to_form();
        let Some((ex, vx)) = x.coeffs().find(|(_, v)| !v.is_zero()) else {
            return other.is_zero();
        };
        let vy = y.get(ex);
        if vy.is_zero() {
            return false;
        }
        let s = f.div(vy, vx).expect("non-zero");
        x.scaled(f, s) == y
    }

    pub fn factorization(&self, f: &Field) -> Factorization {
        factorize(f, self)
    }
}

/// Determinant of x M0 + y M1 + z M2 for three symmetric matrices.
pub fn cubic_of_generators(f: &Field, g: &[Vec6; 3]) -> Cubic {
    let lin = |c: usize| [g[0][c], g[1][c], g[2][c]];
    let (l0, l1, l2, l3, l4, l5) = (lin(0), lin(1), lin(2), lin(3), lin(4), lin(5));
    let mut c = Cubic::default();
    triple_product(f, &mut c, &l0, &l3, &l5);
    times_square(f, &mut c, &l0, &l4);
    times_square(f, &mut c, &l3, &l2);
    times_square(f, &mut c, &l5, &l1);
    c
}

fn times_square(f: &Field, c: &mut Cubic, l: &Vec3, s: &Vec3) {
    let s2 = s.map(|x| f.square(x));
    for i in 0..3 {
        if l[i].is_zero() {
            continue;
        }
        for j in 0..3 {
            c.a[i][j] += f.mul(l[i], s2[j]);
        }
    }
}

fn triple_product(f: &Field, c: &mut Cubic, l: &Vec3, m: &Vec3, n: &Vec3) {
    for i in 0..3 {
        c.a[i][i] += f.mul(l[i], f.mul(m[i], n[i]));
        for j in 0..3 {
            if i != j {
                c.a[i][j] += f.mul(l[i], f.mul(m[j], n[j]))
                    + f.mul(l[j], f.mul(m[i], n[j]))
                    + f.mul(l[j], f.mul(m[j], n[i]));
            }
        }
    }
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for p in PERMS {
        c.a012 += f.mul(l[p[0]], f.mul(m[p[1]], n[p[2]]));
    }
}

/// A homogeneous ternary form of degree at most three, dense in the
/// exponents of the last two variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Form {
    pub deg: usize,
    c: [[Elem; 4]; 4],
}

impl Form {
    pub fn zero(deg: usize) -> Form {
        assert!(deg <= 3);
        Form { deg, c: [[Elem::ZERO; 4]; 4] }
    }

    pub fn linear(coeffs: Vec3) -> Form {
        let mut f = Form::zero(1);
        f.set([1, 0, 0], coeffs[0]);
        f.set([0, 1, 0], coeffs[1]);
        f.set([0, 0, 1], coeffs[2]);
        f
    }

    pub fn constant(v: Elem) -> Form {
        let mut f = Form::zero(0);
        f.c[0][0] = v;
        f
    }

    pub fn get(&self, e: [usize; 3]) -> Elem {
        debug_assert_eq!(e[0] + e[1] + e[2], self.deg);
        self.c[e[1]][e[2]]
    }

    pub fn set(&mut self, e: [usize; 3], v: Elem) {
        debug_assert_eq!(e[0] + e[1] + e[2], self.deg);
        self.c[e[1]][e[2]] = v;
    }

    pub fn coeffs(&self) -> impl Iterator<Item = ([usize; 3], Elem)> + '_ {
        let d = self.deg;
        (0..=d).flat_map(move |e1| (0..=d - e1).map(move |e2| ([d - e1 - e2, e1, e2], self.c[e1][e2])))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().all(|(_, v)| v.is_zero())
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.deg, other.deg);
        let mut out = *self;
        for (e, v) in other.coeffs() {
            out.c[e[1]][e[2]] += v;
        }
        out
    }

    pub fn mul(&self, f: &Field, other: &Form) -> Form {
        let mut out = Form::zero(self.deg + other.deg);
        for (e, v) in self.coeffs() {
            if v.is_zero() {
                continue;
            }
            for (g, w) in other.coeffs() {
                out.c[e[1] + g[1]][e[2] + g[2]] += f.mul(v, w);
            }
        }
        out
    }

    pub fn scaled(&self, f: &Field, s: Elem) -> Form {
        let mut out = *self;
        for row in out.c.iter_mut() {
            for x in row.iter_mut() {
                *x = f.mul(s, *x);
            }
        }
        out
    }

    pub fn eval(&self, f: &Field, p: &Vec3) -> Elem {
        self.coeffs().fold(Elem::ZERO, |acc, (e, v)| {
            acc + f.mul(v, f.mul(f.pow(p[0], e[0] as u64), f.mul(f.pow(p[1], e[1] as u64), f.pow(p[2], e[2] as u64))))
        })
    }

    /// Composition with linear forms: X_i -> lins[i].
    pub fn substitute(&self, f: &Field, lins: &[Form; 3]) -> Form {
        let mut out = Form::zero(self.deg);
        for (e, v) in self.coeffs() {
            if v.is_zero() {
                continue;
            }
            let mut term = Form::constant(v);
            for (var, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(f, &lins[var]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Restriction to the line through `a` and `b`: coefficients of
    /// s^(d-k) t^k for k = 0..=d.
    pub fn restrict(&self, f: &Field, a: &Vec3, b: &Vec3) -> Vec<Elem> {
        let lins = [0, 1, 2].map(|i| {
            let mut l = Form::zero(1);
            l.set([1, 0, 0], a[i]);
            l.set([0, 1, 0], b[i]);
            l
        });
        let r = self.substitute(f, &lins);
        (0..=self.deg).map(|k| r.get([self.deg - k, k, 0])).collect()
    }

    /// Exact quotient by a linear form, if it divides.
    pub fn divide_by_linear(&self, f: &Field, line: &Line2) -> Option<Form> {
        let l = *line.dual();
        let p = l.iter().position(|x| !x.is_zero())?;
        // New coordinates: Y_p = l(X), Y_k = X_k otherwise.
        let forward = [0, 1, 2].map(|i| {
            if i == p {
                let mut v = l;
                v[p] = Elem::ONE;
                Form::linear(v)
            } else {
                let mut v = [Elem::ZERO; 3];
                v[i] = Elem::ONE;
                Form::linear(v)
            }
        });
        let backward: [Form; 3] = [0, 1, 2].map(|i| {
            let mut v = [Elem::ZERO; 3];
            v[i] = Elem::ONE;
            if i == p {
                for k in 0..3 {
                    if k != p {
                        v[k] = l[k];
                    }
                }
            }
            Form::linear(v)
        });
        let g = self.substitute(f, &backward);
        if g.coeffs().any(|(e, v)| e[p] == 0 && !v.is_zero()) {
            return None;
        }
        let mut quot = Form::zero(self.deg - 1);
        for (e, v) in g.coeffs() {
            if e[p] > 0 {
                let mut e2 = e;
                e2[p] -= 1;
                quot.set(e2, v);
            }
        }
        Some(quot.substitute(f, &forward))
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{self}")
    }
}

impl fmt::Display for Form {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (e, v) in self.coeffs() {
            if v.is_zero() {
                continue;
            }
            let mut t = if v == Elem::ONE { String::new() } else { format!("{v}*") };
            for (name, k) in ["X", "Y", "Z"].iter().zip(e) {
                match k {
                    0 => {}
                    1 => t.push_str(name),
                    k => t.push_str(&format!("{name}^{k}")),
                }
            }
            if t.is_empty() {
                t = "1".into();
            }
            terms.push(t.trim_end_matches('*').to_string());
        }
        if terms.is_empty() {
            write!(fm, "0")
        } else {
            write!(fm, "{}", terms.join(" + "))
        }
    }
}

/// Nonsingularity test for a conic
/// a00 X^2 + a11 Y^2 + a22 Z^2 + a01 XY + a02 XZ + a12 YZ.
pub fn conic_is_nonsingular(f: &Field, q: &Form) -> bool {
    let a00 = q.get([2, 0, 0]);
    let a11 = q.get([0, 2, 0]);
    let a22 = q.get([0, 0, 2]);
    let a01 = q.get([1, 1, 0]);
    let a02 = q.get([1, 0, 1]);
    let a12 = q.get([0, 1, 1]);
    let v = f.mul(a00, f.square(a12)) + f.mul(a11, f.square(a02)) + f.mul(a22, f.square(a01)) + f.mul(a01, f.mul(a02, a12));
    !v.is_zero()
}

/// How a cubic splits over GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FactorKind {
    IdenticallyZero,
    TripleLine,
    DoubleLinePlusLine,
    ThreeConcurrentLines,
    ThreeLinesInTriangle,
    LineAndIrreducibleConic,
    LineAndTangentConic,
    LineAndConjugatePair,
    /// No linear factor over GF(q).
    Irreducible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub kind: FactorKind,
    /// Rational linear factors with multiplicity.
    pub lines: Vec<Line2>,
}

fn linear_factors(f: &Field, form: &Form, duals: &[Vec3]) -> (Vec<Line2>, Form) {
    let mut rest = *form;
    let mut lines = Vec::new();
    'outer: while rest.deg > 0 {
        for d in duals {
            let line = Line2(*d);
            if let Some(quot) = rest.divide_by_linear(f, &line) {
                lines.push(line);
                rest = quot;
                continue 'outer;
            }
        }
        break;
    }
    (lines, rest)
}

fn concurrent(f: &Field, lines: &[Line2]) -> bool {
    let m: Vec<Vec3> = lines.iter().map(|l| *l.dual()).collect();
    crate::geometry::rank(f, &m) < 3
}

pub fn factorize(f: &Field, cubic: &Cubic) -> Factorization {
    factorize_among(f, cubic, &projective_points::<3>(f))
}

/// Factorization when every rational linear factor is among `duals`.
pub fn factorize_among(f: &Field, cubic: &Cubic, duals: &[Vec3]) -> Factorization {
    if cubic.is_zero() {
        return Factorization { kind: FactorKind::IdenticallyZero, lines: Vec::new() };
    }
    let (lines, rest) = linear_factors(f, &cubic.to_form(), duals);
    let kind = match lines.len() {
        3 => {
            let mut distinct = lines.clone();
            distinct.sort();
            distinct.dedup();
            match distinct.len() {
                1 => FactorKind::TripleLine,
                2 => FactorKind::DoubleLinePlusLine,
                _ if concurrent(f, &lines) => FactorKind::ThreeConcurrentLines,
                _ => FactorKind::ThreeLinesInTriangle,
            }
        }
        1 => {
            if conic_is_nonsingular(f, &rest) {
                let [a, b] = lines[0].basis();
                let r = rest.restrict(f, &a, &b);
                if r[1].is_zero() {
                    FactorKind::LineAndTangentConic
                } else {
                    FactorKind::LineAndIrreducibleConic
                }
            } else {
                FactorKind::LineAndConjugatePair
            }
        }
        0 => FactorKind::Irreducible,
        _ => unreachable!("a quadratic with one rational linear factor has two"),
    };
    Factorization { kind, lines }
}

/// Roots in PG(1,q) of a binary form given by coefficients of s^(d-k) t^k.
pub fn binary_roots(f: &Field, coeffs: &[Elem]) -> Vec<(Elem, Elem)> {
    let d = coeffs.len() - 1;
    let eval = |s: Elem, t: Elem| {
        coeffs.iter().enumerate().fold(Elem::ZERO, |acc, (k, &c)| {
            acc + f.mul(c, f.mul(f.pow(s, (d - k) as u64), f.pow(t, k as u64)))
        })
    };
    let mut roots: Vec<(Elem, Elem)> = f.elements().filter(|&t| eval(Elem::ONE, t).is_zero()).map(|t| (Elem::ONE, t)).collect();
    if eval(Elem::ZERO, Elem::ONE).is_zero() {
        roots.push((Elem::ZERO, Elem::ONE));
    }
    roots
}

/// Precomputed monomials X_i X_j^2 and XYZ at every point of PG(2,q), for
/// fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct CubicTable {
    pub points: Vec<Vec3>,
    mons: Vec<[Elem; 10]>,
}

impl CubicTable {
    pub fn new(f: &Field) -> CubicTable {
        let points = projective_points::<3>(f);
        let mons = points
            .iter()
            .map(|p| {
                let mut m = [Elem::ZERO; 10];
                for i in 0..3 {
                    for j in 0..3 {
                        m[3 * i + j] = f.mul(p[i], f.square(p[j]));
                    }
                }
                m[9] = f.mul(p[0], f.mul(p[1], p[2]));
                m
            })
            .collect();
        CubicTable { points, mons }
    }

    #[inline]
    pub fn eval(&self, f: &Field, c: &Cubic, idx: usize) -> Elem {
        let m = &self.mons[idx];
        let mut acc = f.mul(c.a012, m[9]);
        for i in 0..3 {
            for j in 0..3 {
                acc += f.mul(c.a[i][j], m[3 * i + j]);
            }
        }
        acc
    }
}

/// Lines of PG(2,q) as lists of point indices into [`projective_points`].
pub fn line_incidences(f: &Field) -> Vec<Vec<usize>> {
    projective_points::<3>(f)
        .iter()
        .map(|l| {
            Line2(*l)
                .points(f)
                .iter()
                .map(|p| crate::geometry::point_index(f.q(), p))
                .collect()
        })
        .collect()
}

pub fn normalize3(f: &Field, v: Vec3) -> Vec3 {
    normalize(f, v).expect("non-zero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::combine;
    use crate::veronese::det_sym;

    fn el(b: u16) -> Elem {
        Elem::from_bits(b)
    }

    fn parse(f: &Field, terms: &[(u16, [usize; 3])]) -> Cubic {
        let mut form = Form::zero(3);
        for &(c, e) in terms {
            let v = form.get(e) + el(c);
            form.set(e, v);
        }
        let _ = f;
        Cubic::from_form(&form)
    }

    #[test]
    fn determinant_expansion_matches_evaluation() {
        let f = Field::new(3).unwrap();
        let mut rng = rand::thread_rng();
        use rand::Rng;
        for _ in 0..200 {
            let g: [Vec6; 3] = [0; 3].map(|_| [0; 6].map(|_| el(rng.gen_range(0..8))));
            let c = cubic_of_generators(&f, &g);
            for p in projective_points::<3>(&f) {
                assert_eq!(c.eval(&f, &p), det_sym(&f, &combine(&f, &g, &p)));
            }
        }
    }

    #[test]
    fn phi_of_pure_xyz_vanishes() {
        let f = Field::new(2).unwrap();
        let c = Cubic { a: [[Elem::ZERO; 3]; 3], a012: Elem::ONE };
        let p = c.phi(&f);
        assert!(p.a.iter().flatten().all(|x| x.is_zero()));
        assert_eq!(p.a012, Elem::ONE);
    }

    #[test]
    fn hessian_needs_xyz_term() {
        let f = Field::new(2).unwrap();
        let c = parse(&f, &[(1, [1, 0, 2])]);
        assert_eq!(c.hessian(&f), Err(GeometryError::HessianUndefined));
    }

    #[test]
    fn hessian_of_the_pencil_family() {
        // f = X(Z^2 + YZ + c^2 Y^2) + Y^2 Z has Hessian
        // X(Z^2 + YZ + c^2 Y^2) + Z^3 + (1 + c^2) Y^2 Z + c^2 Y^3.
        for h in [2, 3, 4] {
            let f = Field::new(h).unwrap();
            for c in f.nonzero() {
                let c2 = f.square(c);
                let mut cubic = Form::zero(3);
                cubic.set([1, 0, 2], Elem::ONE);
                cubic.set([1, 1, 1], Elem::ONE);
                cubic.set([1, 2, 0], c2);
                cubic.set([0, 2, 1], Elem::ONE);
                let mut hess = Form::zero(3);
                hess.set([1, 0, 2], Elem::ONE);
                hess.set([1, 1, 1], Elem::ONE);
                hess.set([1, 2, 0], c2);
                hess.set([0, 0, 3], Elem::ONE);
                hess.set([0, 2, 1], Elem::ONE + c2);
                hess.set([0, 3, 0], c2);
                let got = Cubic::from_form(&cubic).hessian(&f).unwrap();
                assert!(got.proportional(&f, &Cubic::from_form(&hess)), "c={c:?}: {got:?}");
            }
        }
    }

    #[test]
    fn hessian_is_covariant() {
        let f = Field::new(3).unwrap();
        let mut rng = rand::thread_rng();
        use rand::Rng;
        for _ in 0..200 {
            let mut c = Cubic::default();
            for i in 0..3 {
                for j in 0..3 {
                    c.a[i][j] = el(rng.gen_range(0..8));
                }
            }
            c.a012 = el(rng.gen_range(1..8));
            let g = crate::veronese::Collineation::random(&f, &mut rng);
            let m = *g.matrix();
            let moved = c.substitute(&f, &m);
            if moved.a012.is_zero() {
                continue;
            }
            let lhs = moved.hessian(&f).unwrap();
            let rhs = c.hessian(&f).unwrap().substitute(&f, &m);
            assert!(lhs.proportional(&f, &rhs));
        }
    }

    #[test]
    fn xyz_coefficient_scales_by_determinant() {
        let f = Field::new(3).unwrap();
        let mut rng = rand::thread_rng();
        use rand::Rng;
        for _ in 0..100 {
            let mut c = Cubic::default();
            for i in 0..3 {
                for j in 0..3 {
                    c.a[i][j] = el(rng.gen_range(0..8));
                }
            }
            c.a012 = el(rng.gen_range(0..8));
            let g = crate::veronese::Collineation::random(&f, &mut rng);
            let moved = c.substitute(&f, g.matrix());
            assert_eq!(moved.a012, f.mul(c.a012, g.det(&f)));
        }
    }

    #[test]
    fn factorization_examples() {
        let f = Field::new(2).unwrap();
        let xyz = parse(&f, &[(1, [1, 1, 1])]);
        assert_eq!(xyz.factorization(&f).kind, FactorKind::ThreeLinesInTriangle);
        let z3 = parse(&f, &[(1, [0, 0, 3])]);
        assert_eq!(z3.factorization(&f).kind, FactorKind::TripleLine);
        let xz2 = parse(&f, &[(1, [1, 0, 2])]);
        assert_eq!(xz2.factorization(&f).kind, FactorKind::DoubleLinePlusLine);
        // Z(XZ + Y^2): the line Z = 0 is tangent to the conic.
        let c = parse(&f, &[(1, [1, 0, 2]), (1, [0, 2, 1])]);
        assert_eq!(c.factorization(&f).kind, FactorKind::LineAndTangentConic);
        // X(Y^2 + YZ + Z^2) over GF(2).
        let g2 = Field::new(1).unwrap();
        let c = parse(&g2, &[(1, [1, 2, 0]), (1, [1, 1, 1]), (1, [1, 0, 2])]);
        assert_eq!(c.factorization(&g2).kind, FactorKind::LineAndConjugatePair);
        let c = parse(&f, &[(1, [2, 0, 1]), (1, [1, 2, 0]), (1, [0, 2, 1])]);
        assert_eq!(c.factorization(&f).kind, FactorKind::Irreducible);
        let con = parse(&f, &[(1, [2, 1, 0]), (1, [1, 2, 0])]);
        assert_eq!(con.factorization(&f).kind, FactorKind::ThreeConcurrentLines);
        assert_eq!(Cubic::default().factorization(&f).kind, FactorKind::IdenticallyZero);
    }

    #[test]
    fn division_round_trips() {
        let f = Field::new(2).unwrap();
        let mut rng = rand::thread_rng();
        use rand::Rng;
        let duals = projective_points::<3>(&f);
        for _ in 0..100 {
            let l = Line2(duals[rng.gen_range(0..duals.len())]);
            let mut qf = Form::zero(2);
            for (e, _) in Form::zero(2).coeffs().collect::<Vec<_>>() {
                qf.set(e, el(rng.gen_range(0..4)));
            }
            let prod = Form::linear(*l.dual()).mul(&f, &qf);
            assert_eq!(prod.divide_by_linear(&f, &l), Some(qf));
        }
    }

    #[test]
    fn table_evaluation_agrees() {
        let f = Field::new(3).unwrap();
        let t = CubicTable::new(&f);
        let c = parse(&f, &[(3, [1, 0, 2]), (5, [1, 1, 1]), (1, [0, 3, 0]), (7, [2, 1, 0])]);
        for (i, p) in t.points.iter().enumerate() {
            assert_eq!(t.eval(&f, &c, i), c.eval(&f, p));
            assert_eq!(c.to_form().eval(&f, p), c.eval(&f, p));
        }
    }
}
