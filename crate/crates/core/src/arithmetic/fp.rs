use std::fmt;

use super::{ArithError, GaussRat, Scalar};

/// Largest supported modulus: products of two residues must fit in a u64.
pub const MAX_MODULUS: u64 = 1 << 32;

/// Residue modulo a prime p < 2^32.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    residue: u64,
    p: u64,
}

impl FpElem {
    /// Builds `residue mod p`. Primality of `p` is the caller's contract; use
    /// [`FpElem::checked`] to verify it.
    pub fn new(residue: u64, p: u64) -> Result<Self, ArithError> {
        if p > MAX_MODULUS {
            return Err(ArithError::ModulusTooLarge(p));
        }
        if p < 2 {
            return Err(ArithError::NotPrime(p));
        }
        Ok(FpElem { residue: residue % p, p })
    }

    pub fn checked(residue: u64, p: u64) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        FpElem::new(residue, p)
    }

    pub(crate) fn new_unchecked(residue: u64, p: u64) -> Self {
        debug_assert!(residue < p && p <= MAX_MODULUS);
        FpElem { residue, p }
    }

    pub fn from_i64(n: i64, p: u64) -> Result<Self, ArithError> {
        let r = n.rem_euclid(p as i64) as u64;
        FpElem::new(r, p)
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl fmt::Debug for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.p)
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Scalar for FpElem {
    fn zero_like(&self) -> Self {
        FpElem { residue: 0, p: self.p }
    }

    fn one_like(&self) -> Self {
        FpElem { residue: 1, p: self.p }
    }

    fn from_i64_like(&self, n: i64) -> Self {
        FpElem { residue: n.rem_euclid(self.p as i64) as u64, p: self.p }
    }

    fn from_coeff(&self, c: &GaussRat) -> Result<Self, ArithError> {
        if !c.im.is_zero() {
            return Err(ArithError::FieldMismatch(c.to_string()));
        }
        c.re.reduce_mod(self.p)
            .map(|r| FpElem { residue: r, p: self.p })
            .ok_or_else(|| ArithError::FieldMismatch(format!("{} mod {}", c, self.p)))
    }

    fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let s = self.residue + other.residue;
        FpElem { residue: if s >= self.p { s - self.p } else { s }, p: self.p }
    }

    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let r = if self.residue >= other.residue { self.residue - other.residue } else { self.residue + self.p - other.residue };
        FpElem { residue: r, p: self.p }
    }

    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        FpElem { residue: (self.residue * other.residue) % self.p, p: self.p }
    }

    fn neg(&self) -> Self {
        if self.residue == 0 {
            *self
        } else {
            FpElem { residue: self.p - self.residue, p: self.p }
        }
    }

    /// Extended Euclid.
    fn inv(&self) -> Result<Self, ArithError> {
        if self.residue == 0 {
            return Err(ArithError::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i64, self.residue as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus not prime");
        Ok(FpElem { residue: t0.rem_euclid(self.p as i64) as u64, p: self.p })
    }

    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = a[0].p;
        let mut acc = vec![0u128; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.residue == 0 {
                continue;
            }
            let xr = x.residue as u128;
            for (slot, y) in acc[i..].iter_mut().zip(b) {
                *slot += xr * y.residue as u128;
            }
        }
        let pm = p as u128;
        acc.into_iter().map(|s| FpElem { residue: (s % pm) as u64, p }).collect()
    }
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes in `[lo, hi]`, ascending, by a sieve of Eratosthenes.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2) as usize..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}
