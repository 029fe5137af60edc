use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime field `F_q`. Elements are residues in `[0, q)`.
///
/// Only prime orders are supported; prime powers would need polynomial
/// arithmetic behind the same interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    q: u32,
}

impl TryFrom<u32> for Field {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        Field::new(q)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.q
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Construction(format!("field order {q} is not prime")));
        }
        if q > 1 << 15 {
            // products of two residues must fit in u32
            return Err(Error::Construction(format!("field order {q} too large")));
        }
        Ok(Field { q })
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.q - b) % self.q
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.q - a) % self.q
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.q
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.q;
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        if a % self.q == 0 {
            return Err(Error::Domain(format!("inverse of zero in F_{}", self.q)));
        }
        Ok(self.pow(a, (self.q - 2) as u64))
    }

    /// Reduces an arbitrary integer into `[0, q)`.
    pub fn residue(self, a: i64) -> u32 {
        a.rem_euclid(self.q as i64) as u32
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> u32 {
        if self.q == 2 {
            return 1;
        }
        let order = self.q - 1;
        let mut factors = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..self.q)
            .find(|&g| factors.iter().all(|&p| self.pow(g, (order / p) as u64) != 1))
            .expect("prime field has a primitive root")
    }

    /// `q^e` as an exact integer.
    pub fn order_pow(self, e: u32) -> u128 {
        (self.q as u128).pow(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_examples() {
        let f2 = Field::new(2).unwrap();
        let f5 = Field::new(5).unwrap();
        assert_eq!(f2.inv(1).unwrap(), 1);
        assert_eq!(f5.inv(2).unwrap(), 3);
        assert_eq!(f2.add(1, 1), 0);
        assert_eq!(f5.neg(2), 3);
        assert_eq!(f5.sub(1, 3), 3);
        assert_eq!(f5.mul(4, 4), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(Field::new(4), Err(Error::Construction(_))));
        assert!(matches!(Field::new(1), Err(Error::Construction(_))));
        assert!(matches!(Field::new(0), Err(Error::Construction(_))));
        assert!(matches!(Field::new(3).unwrap().inv(0), Err(Error::Domain(_))));
    }

    #[test]
    fn inverses_exhaustive() {
        for q in [2, 3, 5, 7, 11, 13] {
            let f = Field::new(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn primitive_roots_generate() {
        for q in [2, 3, 5, 7, 11, 13, 17] {
            let f = Field::new(q).unwrap();
            let g = f.primitive_root();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u32, q - 1);
        }
    }

    #[test]
    fn serde_rejects_composites() {
        assert!(serde_json::from_str::<Field>("6").is_err());
        assert_eq!(serde_json::from_str::<Field>("3").unwrap().q(), 3);
    }
}
