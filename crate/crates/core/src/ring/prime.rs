//! The two base rings of size `p^ℓ` that every chain ring in this crate is
//! built over: the integers modulo `p^ℓ`, and the truncated polynomial ring
//! `F_p[u]/(u^ℓ)`.
//!
//! Both encode elements as integers in `[0, p^ℓ)`. For the truncated ring the
//! encoding is the base-`p` digit string of the coefficients of `1, u, u², …`,
//! so in both cases the uniformizer is encoded as `p`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeKind {
    /// `Z/(p^ℓ)`: mixed characteristic, uniformizer `p`.
    Integers,
    /// `F_p[u]/(u^ℓ)`: equal characteristic, uniformizer `u`.
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeRing {
    pub kind: PrimeKind,
    pub p: u64,
    pub ell: u32,
    pub size: u64,
}

impl PrimeRing {
    pub fn new(kind: PrimeKind, p: u64, ell: u32) -> Self {
        PrimeRing {
            kind,
            p,
            ell,
            size: p.pow(ell),
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            PrimeKind::Integers => (a + b) % self.size,
            PrimeKind::Truncated => self.digitwise(a, b, |x, y| x + y),
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            PrimeKind::Integers => (a + self.size - b) % self.size,
            PrimeKind::Truncated => self.digitwise(a, b, |x, y| x + self.p - y),
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            PrimeKind::Integers => ((a as u128 * b as u128) % self.size as u128) as u64,
            PrimeKind::Truncated => {
                let p = self.p;
                let ell = self.ell as usize;
                let da = self.digits(a);
                let db = self.digits(b);
                let mut out = vec![0u64; ell];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate().take(ell - i) {
                        out[i + j] = (out[i + j] + x * y) % p;
                    }
                }
                self.pack_digits(&out)
            }
        }
    }

    /// Image of an integer under `Z → R`.
    pub fn from_int(&self, k: i64) -> u64 {
        let m = match self.kind {
            PrimeKind::Integers => self.size as i64,
            PrimeKind::Truncated => self.p as i64,
        };
        k.rem_euclid(m) as u64
    }

    /// Reduction modulo the uniformizer, as an element of `Z/p`.
    #[inline]
    pub fn residue(&self, a: u64) -> u64 {
        a % self.p
    }

    /// Valuation with respect to the uniformizer; `ℓ` for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.ell;
        }
        // In both encodings the valuation is the number of trailing base-p zeros.
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Top `u`-digit of a truncated-ring element, or the element itself for `Z/p^ℓ`.
    /// This is the additive functional used to build the standard additive character.
    pub fn phase(&self, a: u64) -> u64 {
        match self.kind {
            PrimeKind::Integers => a,
            PrimeKind::Truncated => a / self.p.pow(self.ell - 1),
        }
    }

    /// Denominator of the phase returned by [`PrimeRing::phase`].
    pub fn phase_modulus(&self) -> u64 {
        match self.kind {
            PrimeKind::Integers => self.size,
            PrimeKind::Truncated => self.p,
        }
    }

    fn digits(&self, a: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.ell as usize);
        let mut x = a;
        for _ in 0..self.ell {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    fn pack_digits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn digitwise(&self, a: u64, b: u64, f: impl Fn(u64, u64) -> u64) -> u64 {
        let (mut x, mut y) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.ell {
            out += (f(x % self.p, y % self.p) % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        out
    }
}
