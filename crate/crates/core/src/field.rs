//! Exact arithmetic in F_q for small prime powers q.
//!
//! Elements are integers in `[0, q)`. For prime q this is the residue code.
//! For extension fields (q = 4, 8, 9) an element is a polynomial over F_p
//! encoded radix-p: the element `sum c_i x^i` has code `sum c_i p^i`, reduced
//! modulo a fixed primitive polynomial:
//!
//! - GF(4):  x^2 + x + 1
//! - GF(8):  x^3 + x + 1
//! - GF(9):  x^2 + 2x + 2
//!
//! All operation tables are precomputed at construction and the field axioms
//! (associativity and distributivity over every triple, existence of
//! inverses) are verified exhaustively, which is cheap for q <= 9.

use crate::error::{Error, Result};
use std::sync::OnceLock;

pub const SUPPORTED_Q: [u8; 7] = [2, 3, 4, 5, 7, 8, 9];

/// One finite field F_q with dense operation tables.
pub struct Field {
    q: u8,
    p: u8,
    e: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// exp[i] = g^i for the fixed generator g, i in [0, q-1).
    exp: Vec<u8>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u8>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Field(q={})", self.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state);
    }
}

/// Reduction rule x^e = r(x), with r encoded radix-p.
fn reduction_code(q: u8) -> u8 {
    match q {
        4 => 3, // x^2 = x + 1
        8 => 3, // x^3 = x + 1
        9 => 4, // x^2 = x + 1  (from x^2 + 2x + 2 over F_3)
        _ => unreachable!(),
    }
}

fn factor(q: u8) -> Option<(u8, u8)> {
    match q {
        2 | 3 | 5 | 7 => Some((q, 1)),
        4 => Some((2, 2)),
        8 => Some((2, 3)),
        9 => Some((3, 2)),
        _ => None,
    }
}

fn digits(code: u8, p: u8, e: u8) -> Vec<u8> {
    let mut c = code;
    (0..e)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u8], p: u8) -> u8 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl Field {
    /// Returns the shared field instance for a supported q.
    pub fn get(q: u64) -> Result<&'static Field> {
        static CELLS: [OnceLock<Field>; 10] = [const { OnceLock::new() }; 10];
        if q < 10 && SUPPORTED_Q.contains(&(q as u8)) {
            Ok(CELLS[q as usize].get_or_init(|| Field::build(q as u8)))
        } else {
            Err(Error::UnsupportedField(q))
        }
    }

    fn build(q: u8) -> Field {
        let (p, e) = factor(q).expect("supported q");
        let qq = q as usize;
        let mut add = vec![0u8; qq * qq];
        let mut mul = vec![0u8; qq * qq];
        for a in 0..q {
            for b in 0..q {
                let da = digits(a, p, e);
                let db = digits(b, p, e);
                let ds: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qq + b as usize] = undigits(&ds, p);
                mul[a as usize * qq + b as usize] = poly_mul(a, b, p, e, q);
            }
        }
        let mut neg = vec![0u8; qq];
        for a in 0..q {
            neg[a as usize] = (0..q)
                .find(|&b| add[a as usize * qq + b as usize] == 0)
                .expect("additive inverse");
        }
        // Generator: x itself (code p) for extension fields, since the fixed
        // polynomials are primitive; smallest generator for prime fields.
        let gen = if e > 1 {
            p
        } else {
            (2..q)
                .find(|&g| {
                    let mut x = 1u8;
                    for _ in 0..(q - 2) {
                        x = mul[x as usize * qq + g as usize];
                        if x == 1 {
                            return false;
                        }
                    }
                    true
                })
                .unwrap_or(1)
        };
        let mut exp = vec![0u8; qq - 1];
        let mut log = vec![0u8; qq];
        let mut x = 1u8;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u8;
            x = mul[x as usize * qq + gen as usize];
        }
        assert_eq!(x, 1, "generator order must be q-1");
        let mut inv = vec![0u8; qq];
        inv[1] = 1;
        for a in 2..q {
            inv[a as usize] = exp[(q as usize - 1 - log[a as usize] as usize) % (qq - 1)];
        }
        let f = Field {
            q,
            p,
            e,
            add,
            mul,
            neg,
            inv,
            exp,
            log,
        };
        f.verify_axioms();
        f
    }

    /// Exhaustive check of the field axioms over all triples.
    fn verify_axioms(&self) {
        let q = self.q;
        for a in 0..q {
            assert_eq!(self.add(a, 0), a);
            assert_eq!(self.mul(a, 1), a);
            assert_eq!(self.add(a, self.neg(a)), 0);
            if a != 0 {
                assert_eq!(self.mul(a, self.inv(a)), 1);
            }
            for b in 0..q {
                assert_eq!(self.add(a, b), self.add(b, a));
                assert_eq!(self.mul(a, b), self.mul(b, a));
                for c in 0..q {
                    assert_eq!(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c)));
                    assert_eq!(self.add(self.add(a, b), c), self.add(a, self.add(b, c)));
                    assert_eq!(
                        self.mul(a, self.add(b, c)),
                        self.add(self.mul(a, b), self.mul(a, c))
                    );
                }
            }
        }
    }

    #[inline]
    pub fn q(&self) -> u8 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u8 {
        self.p
    }

    #[inline]
    pub fn extension_degree(&self) -> u8 {
        self.e
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert_ne!(a, 0, "zero has no inverse");
        self.inv[a as usize]
    }

    /// Discrete log of a nonzero element to the fixed generator.
    #[inline]
    pub fn log(&self, a: u8) -> u8 {
        assert_ne!(a, 0, "zero has no discrete log");
        self.log[a as usize]
    }

    /// Power of the fixed generator: `exp(i) = g^i`.
    #[inline]
    pub fn exp(&self, i: u8) -> u8 {
        self.exp[i as usize % (self.q as usize - 1)]
    }

    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> u8 {
        self.exp[1 % (self.q as usize - 1)]
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q
    }
}

/// Polynomial-basis multiplication reduced by the fixed primitive polynomial.
fn poly_mul(a: u8, b: u8, p: u8, e: u8, q: u8) -> u8 {
    if e == 1 {
        return ((a as u16 * b as u16) % p as u16) as u8;
    }
    let da = digits(a, p, e);
    let db = digits(b, p, e);
    let mut prod = vec![0u8; 2 * e as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u16 + x as u16 * y as u16) % p as u16) as u8;
        }
    }
    // Reduce top coefficients with x^e = r(x).
    let r = digits(reduction_code(q), p, e);
    for k in (e as usize..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &rj) in r.iter().enumerate() {
            prod[k - e as usize + j] =
                ((prod[k - e as usize + j] as u16 + c as u16 * rj as u16) % p as u16) as u8;
        }
    }
    undigits(&prod[..e as usize], p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_supported_fields_construct() {
        for &q in &SUPPORTED_Q {
            let f = Field::get(q as u64).unwrap();
            assert_eq!(f.q(), q);
            assert_eq!(
                (f.characteristic() as u64).pow(f.extension_degree() as u32),
                q as u64
            );
        }
    }

    #[test]
    fn unsupported_sizes_refused() {
        for q in [0, 1, 6, 10, 12, 16, 25] {
            assert!(matches!(Field::get(q), Err(Error::UnsupportedField(_))));
        }
    }

    #[test]
    fn gf4_is_not_z4() {
        let f = Field::get(4).unwrap();
        // characteristic 2: a + a = 0
        for a in f.elements() {
            assert_eq!(f.add(a, a), 0);
        }
        // x * x = x + 1 under x^2 + x + 1
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn gf9_squares() {
        let f = Field::get(9).unwrap();
        // x^2 = x + 1 under x^2 + 2x + 2 over F_3 (code of x is 3)
        assert_eq!(f.mul(3, 3), 4);
        // generator has full order 8
        let g = f.generator();
        let mut x = 1u8;
        for i in 1..=8u32 {
            x = f.mul(x, g);
            assert_eq!(x == 1, i == 8);
        }
    }

    #[test]
    fn prime_field_matches_modular_arithmetic() {
        for &q in &[2u8, 3, 5, 7] {
            let f = Field::get(q as u64).unwrap();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.add(a, b), (a + b) % q);
                    assert_eq!(f.mul(a, b), (a * b) % q);
                }
            }
        }
    }
}
