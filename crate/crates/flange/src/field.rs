//! Arithmetic in the prime field F_p for p < 2^31.
//!
//! Scalars are plain `u32` residues in `[0, p)`; the characteristic lives
//! once in an [`Fp`] context object rather than on every scalar, so
//! matrices stay flat `Vec<u32>` buffers.

use thiserror::Error;

/// A residue in `[0, p)`.
pub type FieldScalar = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("field error: {0} is not prime")]
    NotPrime(u32),
    #[error("field error: characteristic {0} out of range [2, 2^31)")]
    OutOfRange(u64),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    if p % 3 == 0 {
        return p == 3;
    }
    let mut d = 5u64;
    let p = u64::from(p);
    while d * d <= p {
        if p % d == 0 || p % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// The field F_p. Cheap to copy; all operations take scalars already
/// reduced to `[0, p)` and return reduced scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if !(2..1 << 31).contains(&u64::from(p)) {
            return Err(FieldError::OutOfRange(u64::from(p)));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Fp { p })
    }

    pub fn characteristic(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: FieldScalar, b: FieldScalar) -> FieldScalar {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: FieldScalar, b: FieldScalar) -> FieldScalar {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: FieldScalar) -> FieldScalar {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: FieldScalar, b: FieldScalar) -> FieldScalar {
        ((u64::from(a) * u64::from(b)) % u64::from(self.p)) as u32
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    ///
    /// # Panics
    ///
    /// Panics if `a == 0`.
    pub fn inv(self, a: FieldScalar) -> FieldScalar {
        assert!(a != 0, "division by zero in F_{}", self.p);
        let (mut r0, mut r1) = (i64::from(self.p), i64::from(a));
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "{a} is not a unit mod {}", self.p);
        t0.rem_euclid(i64::from(self.p)) as u32
    }

    /// Reduce an arbitrary integer to its residue.
    #[inline]
    pub fn normalize(self, v: i64) -> FieldScalar {
        v.rem_euclid(i64::from(self.p)) as u32
    }
}
