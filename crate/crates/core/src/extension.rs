//! Embeddings GF(q) -> GF(q^k) for k = 2, 3.

use crate::error::FieldError;
use crate::field::{Elem, Field};

#[derive(Clone, Debug)]
pub struct Extension {
    base: Field,
    ext: Field,
    degree: u32,
    image: Vec<Elem>,
}

impl Extension {
    /// Builds GF(q^degree) with its built-in modulus and embeds `base` by
    /// sending t to a root of the base modulus.
    pub fn new(base: &Field, degree: u32) -> Result<Extension, FieldError> {
        if !(2..=3).contains(&degree) {
            return Err(FieldError::UnsupportedDegree(degree));
        }
        let ext = Field::new(base.h() * degree)?;
        let modulus = base.modulus();
        let eval = |x: Elem| {
            let mut acc = Elem::ZERO;
            for i in (0..=base.h()).rev() {
                acc = ext.mul(acc, x);
                if modulus >> i & 1 == 1 {
                    acc += Elem::ONE;
                }
            }
            acc
        };
        let root = ext
            .nonzero()
            .find(|&x| eval(x).is_zero())
            .ok_or_else(|| FieldError::Inconsistent("base modulus has no root in the extension".into()))?;

        let mut basis = Vec::with_capacity(base.h() as usize);
        let mut p = Elem::ONE;
        for _ in 0..base.h() {
            basis.push(p);
            p = ext.mul(p, root);
        }
        let image = base
            .elements()
            .map(|x| {
                let mut acc = Elem::ZERO;
                for (i, b) in basis.iter().enumerate() {
                    if x.bits() >> i & 1 == 1 {
                        acc += *b;
                    }
                }
                acc
            })
            .collect();
        Ok(Extension { base: base.clone(), ext, degree, image })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn embed(&self, x: Elem) -> Elem {
        self.image[x.bits() as usize]
    }

    /// Preimage of an element lying in the embedded base field.
    pub fn restrict(&self, y: Elem) -> Option<Elem> {
        self.image.iter().position(|&z| z == y).map(|i| Elem::from_bits(i as u16))
    }

    /// y + y^q (+ y^(q^2)).
    pub fn relative_trace(&self, y: Elem) -> Elem {
        let q = self.base.q() as u64;
        let mut acc = y;
        let mut x = y;
        for _ in 1..self.degree {
            x = self.ext.pow(x, q);
            acc += x;
        }
        acc
    }

    /// y * y^q (* y^(q^2)).
    pub fn relative_norm(&self, y: Elem) -> Elem {
        let q = self.base.q() as u64;
        let mut acc = y;
        let mut x = y;
        for _ in 1..self.degree {
            x = self.ext.pow(x, q);
            acc = self.ext.mul(acc, x);
        }
        acc
    }
}
