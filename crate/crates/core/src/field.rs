//! Table-driven arithmetic in GF(2^h).
//!
//! Elements are bit vectors over GF(2) in the polynomial basis of the chosen
//! modulus. Addition is XOR; multiplication goes through either a full
//! product table (h <= 8) or log/antilog tables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Sub};
use std::sync::{Arc, OnceLock};

use crate::error::FieldError;

/// Largest supported extension degree over GF(2).
pub const MAX_DEGREE: u32 = 16;

/// An element of GF(2^h), stored as its coefficient bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub(crate) u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Wraps raw bits. The caller is responsible for staying below `q`.
    #[inline]
    pub const fn from_bits(bits: u16) -> Elem {
        Elem(bits)
    }

    #[inline]
    pub const fn bits(self) -> u16 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl Add for Elem {
    type Output = Elem;
    #[inline]
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

// Characteristic two: subtraction is addition.
impl Sub for Elem {
    type Output = Elem;
    #[inline]
    fn sub(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl AddAssign for Elem {
    #[inline]
    fn add_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

/// Carry-less product of two GF(2) polynomials.
fn clmul(mut a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut shift = 0;
    while a != 0 {
        if a & 1 == 1 {
            acc ^= b << shift;
        }
        a >>= 1;
        shift += 1;
    }
    acc
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// Irreducibility over GF(2) by trial division.
pub fn is_irreducible(poly: u64) -> bool {
    let d = degree(poly);
    if d < 1 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if poly & 1 == 0 {
        return false;
    }
    (2u64..(1u64 << (d / 2 + 1))).all(|f| degree(f) > d / 2 || poly_rem(poly, f) != 0)
}

/// The built-in modulus for degree `h`: the listed trinomials for small
/// degrees, otherwise the numerically smallest irreducible polynomial.
pub fn default_modulus(h: u32) -> Result<u32, FieldError> {
    if h == 0 || h > MAX_DEGREE {
        return Err(FieldError::UnsupportedDegree(h));
    }
    let fixed = match h {
        1 => Some(0b11),
        2 => Some(0b111),
        3 => Some(0b1011),
        4 => Some(0b10011),
        5 => Some(0b100101),
        _ => None,
    };
    if let Some(m) = fixed {
        return Ok(m);
    }
    let lo = 1u32 << h;
    (lo..lo << 1)
        .find(|&p| is_irreducible(p as u64))
        .ok_or(FieldError::UnsupportedDegree(h))
}

/// Parses a modulus written as a bit string, most significant bit first
/// (`"1011"` is t^3 + t + 1).
pub fn parse_modulus(bits: &str) -> Result<u32, FieldError> {
    let trimmed = bits.trim();
    if trimmed.is_empty() || trimmed.len() > MAX_DEGREE as usize + 1 {
        return Err(FieldError::BadModulus(bits.to_string()));
    }
    u32::from_str_radix(trimmed, 2).map_err(|_| FieldError::BadModulus(bits.to_string()))
}

pub fn format_modulus(modulus: u32) -> String {
    format!("{modulus:b}")
}

/// Per-degree modulus overrides, read from JSON such as `{"3": "1011"}`.
#[derive(Clone, Debug, Default)]
pub struct ModulusConfig {
    overrides: BTreeMap<u32, u32>,
}

impl ModulusConfig {
    pub fn from_json(text: &str) -> Result<Self, FieldError> {
        let raw: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| FieldError::BadConfig(e.to_string()))?;
        let mut overrides = BTreeMap::new();
        for (k, v) in raw {
            let h: u32 = k
                .trim()
                .parse()
                .map_err(|_| FieldError::BadConfig(format!("degree key {k:?}")))?;
            overrides.insert(h, parse_modulus(&v)?);
        }
        Ok(ModulusConfig { overrides })
    }

    pub fn modulus_for(&self, h: u32) -> Result<u32, FieldError> {
        match self.overrides.get(&h) {
            Some(&m) => Ok(m),
            None => default_modulus(h),
        }
    }

    pub fn field(&self, h: u32) -> Result<Field, FieldError> {
        Field::with_modulus(h, self.modulus_for(h)?)
    }
}

struct Tables {
    h: u32,
    q: u32,
    modulus: u32,
    /// exp[i] = g^i for 0 <= i < 2(q-1).
    exp: Vec<u16>,
    log: Vec<u32>,
    /// Full product table, present for h <= 8.
    product: Option<Vec<u16>>,
    /// For each d with Tr(d) = 0, the smaller root of t^2 + t = d.
    artin_schreier: Vec<u16>,
    admissible: OnceLock<Vec<bool>>,
}

/// A finite field GF(2^h). Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {}", self.0.h, format_modulus(self.0.modulus))
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.h == other.0.h && self.0.modulus == other.0.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// GF(2^h) with the built-in modulus.
    pub fn new(h: u32) -> Result<Field, FieldError> {
        Field::with_modulus(h, default_modulus(h)?)
    }

    /// GF(q) for a power of two q.
    pub fn of_order(q: u32) -> Result<Field, FieldError> {
        if q < 2 || !q.is_power_of_two() {
            return Err(FieldError::NotPowerOfTwo(q));
        }
        Field::new(q.trailing_zeros())
    }

    pub fn with_modulus(h: u32, modulus: u32) -> Result<Field, FieldError> {
        if h == 0 || h > MAX_DEGREE {
            return Err(FieldError::UnsupportedDegree(h));
        }
        if degree(modulus as u64) != h as i32 || !is_irreducible(modulus as u64) {
            return Err(FieldError::Reducible {
                h,
                modulus: format_modulus(modulus),
            });
        }
        let q = 1u32 << h;
        let mulmod = |a: u32, b: u32| poly_rem(clmul(a as u64, b as u64), modulus as u64) as u32;

        let order = q - 1;
        let generator = (2..q.max(3))
            .find(|&g| {
                let g = if q == 2 { 1 } else { g };
                let mut x = 1u32;
                for i in 1..=order {
                    x = mulmod(x, g);
                    if x == 1 {
                        return i == order;
                    }
                }
                false
            })
            .map(|g| if q == 2 { 1 } else { g })
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x as u16;
            exp[(i + order) as usize] = x as u16;
            log[x as usize] = i;
            x = mulmod(x, generator);
        }

        let mut tables = Tables {
            h,
            q,
            modulus,
            exp,
            log,
            product: None,
            artin_schreier: vec![u16::MAX; q as usize],
            admissible: OnceLock::new(),
        };
        if h <= 8 {
            let mut product = vec![0u16; (q * q) as usize];
            for a in 1..q {
                for b in 1..q {
                    let s = tables.log[a as usize] + tables.log[b as usize];
                    product[((a << h) | b) as usize] = tables.exp[s as usize];
                }
            }
            tables.product = Some(product);
        }
        let field = Field(Arc::new(tables));
        let mut artin = vec![u16::MAX; q as usize];
        for t in 0..q {
            let t = Elem(t as u16);
            let d = field.square(t) + t;
            let slot = &mut artin[d.0 as usize];
            if *slot == u16::MAX {
                *slot = t.0;
            }
        }
        let mut tables = Arc::try_unwrap(field.0).ok().expect("sole owner");
        tables.artin_schreier = artin;
        Ok(Field(Arc::new(tables)))
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.0.h
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> u32 {
        self.0.modulus
    }

    /// Element from raw bits, rejecting values outside the field.
    pub fn elem(&self, bits: u32) -> Result<Elem, FieldError> {
        if bits < self.0.q {
            Ok(Elem(bits as u16))
        } else {
            Err(FieldError::OutOfRange { value: bits, q: self.0.q })
        }
    }

    /// The generator used for the log tables.
    pub fn primitive(&self) -> Elem {
        Elem(self.0.exp[1 % self.0.exp.len().max(1)])
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.q).map(|b| Elem(b as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.0.q).map(|b| Elem(b as u16))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.0;
        if let Some(p) = &t.product {
            return Elem(p[((a.0 as usize) << t.h) | b.0 as usize]);
        }
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// Multiplicative inverse.
    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let t = &*self.0;
        let order = t.q - 1;
        Ok(Elem(t.exp[((order - t.log[a.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let t = &*self.0;
        let order = (t.q - 1) as u64;
        let l = (t.log[a.0 as usize] as u64 * (e % order)) % order;
        Elem(t.exp[l as usize])
    }

    /// The unique square root, x^(q/2).
    pub fn sqrt(&self, a: Elem) -> Elem {
        self.pow(a, (self.0.q / 2) as u64)
    }

    /// Absolute trace to GF(2), returned as 0 or 1.
    pub fn trace(&self, a: Elem) -> u8 {
        let mut acc = a;
        let mut x = a;
        for _ in 1..self.0.h {
            x = self.square(x);
            acc += x;
        }
        debug_assert!(acc.0 <= 1);
        acc.0 as u8
    }

    /// Whether `a` lies in the subfield GF(4) (which is GF(2) when h is odd).
    pub fn in_gf4(&self, a: Elem) -> bool {
        self.pow(a, 4) == a
    }

    /// Roots of alpha X^2 + beta X + gamma.
    pub fn solve_quadratic(&self, alpha: Elem, beta: Elem, gamma: Elem) -> Result<Vec<Elem>, FieldError> {
        if alpha.is_zero() {
            return Err(FieldError::DegenerateEquation);
        }
        if beta.is_zero() {
            return Ok(vec![self.sqrt(self.div(gamma, alpha)?)]);
        }
        // X = (beta/alpha) t turns the equation into t^2 + t + delta = 0.
        let delta = self.div(self.mul(alpha, gamma), self.square(beta))?;
        let t = self.0.artin_schreier[delta.0 as usize];
        if t == u16::MAX {
            return Ok(Vec::new());
        }
        let scale = self.div(beta, alpha)?;
        let r0 = self.mul(scale, Elem(t));
        let r1 = self.mul(scale, Elem(t ^ 1));
        Ok(if r0 < r1 { vec![r0, r1] } else { vec![r1, r0] })
    }

    /// Whether `a = (v + 1/v) / (1 + v + 1/v)^3` for some v outside GF(4).
    ///
    /// Only meaningful for q > 4; smaller fields have no admissible elements.
    pub fn is_admissible(&self, a: Elem) -> bool {
        self.admissible_table()[a.0 as usize]
    }

    /// All admissible elements in increasing order.
    pub fn admissible_elements(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_admissible(a)).collect()
    }

    fn admissible_table(&self) -> &[bool] {
        self.0.admissible.get_or_init(|| {
            let mut table = vec![false; self.0.q as usize];
            for v in self.nonzero().filter(|&v| !self.in_gf4(v)) {
                let vi = self.inv(v).expect("nonzero");
                let den = Elem::ONE + v + vi;
                let den3 = self.mul(self.square(den), den);
                let a = self.div(v + vi, den3).expect("v outside GF(4)");
                table[a.0 as usize] = true;
            }
            table
        })
    }

    /// Roots of theta^3 + theta + a for a != 0.
    ///
    /// The count is predicted from traces and admissibility and then
    /// checked against an exhaustive sweep; a disagreement is reported as
    /// an error rather than silently trusted.
    pub fn depressed_cubic_roots(&self, a: Elem) -> Result<Vec<Elem>, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DegenerateEquation);
        }
        let predicted = self.predicted_depressed_root_count(a)?;
        let roots: Vec<Elem> = self
            .elements()
            .filter(|&t| (self.mul(self.square(t), t) + t + a).is_zero())
            .collect();
        if roots.len() != predicted as usize {
            return Err(FieldError::Inconsistent(format!(
                "theta^3+theta+{a:?}: predicted {predicted} roots, found {}",
                roots.len()
            )));
        }
        Ok(roots)
    }

    /// Number of roots of theta^3 + theta + a, from the trace criterion.
    pub fn predicted_depressed_root_count(&self, a: Elem) -> Result<u8, FieldError> {
        let ai = self.inv(a)?;
        if self.trace(ai) != self.trace(Elem::ONE) {
            Ok(1)
        } else if self.q() != 4 && self.is_admissible(a) {
            Ok(3)
        } else {
            Ok(0)
        }
    }

    /// Reduces X^3 + a1 X^2 + a2 X + a3 to theta^3 + theta + a.
    pub fn reduce_cubic(&self, a1: Elem, a2: Elem, a3: Elem) -> Result<DepressedCubic, FieldError> {
        let s2 = a2 + self.square(a1);
        if s2.is_zero() {
            return Err(FieldError::DegenerateEquation);
        }
        let scale = self.sqrt(s2);
        let a = self.div(a3 + self.mul(a2, a1), self.mul(s2, scale))?;
        Ok(DepressedCubic { a, scale, shift: a1 })
    }

    /// Roots of the monic cubic X^3 + a1 X^2 + a2 X + a3, in increasing order.
    pub fn monic_cubic_roots(&self, a1: Elem, a2: Elem, a3: Elem) -> Result<Vec<Elem>, FieldError> {
        let mut roots = match self.reduce_cubic(a1, a2, a3) {
            Ok(red) if !red.a.is_zero() => self
                .depressed_cubic_roots(red.a)?
                .into_iter()
                .map(|t| red.root_of(self, t))
                .collect(),
            Ok(red) => vec![red.root_of(self, Elem::ZERO), red.root_of(self, Elem::ONE)],
            Err(FieldError::DegenerateEquation) => self
                .elements()
                .filter(|&x| {
                    let x2 = self.square(x);
                    (self.mul(x2, x) + self.mul(a1, x2) + self.mul(a2, x) + a3).is_zero()
                })
                .collect(),
            Err(e) => return Err(e),
        };
        roots.sort();
        roots.dedup();
        Ok(roots)
    }
}

/// Result of the substitution X = scale * theta + shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepressedCubic {
    pub a: Elem,
    pub scale: Elem,
    pub shift: Elem,
}

impl DepressedCubic {
    pub fn root_of(&self, field: &Field, theta: Elem) -> Elem {
        field.mul(self.scale, theta) + self.shift
    }
}
