//! Finite chain rings built as towers of polynomial extensions over a prime ring.
//!
//! Every ring here is either a prime ring `P` (`Z/p^ℓ` or `F_p[u]/(u^ℓ)`) or
//! `B[ξ]/(g)` for a ring `B` of the same kind and a monic basic irreducible `g`.
//! Elements are stored as integers: the flat coefficient vector over `P`
//! (blocks of base coefficients for `1, ξ, …, ξ^{n-1}`) read in radix `|P|`,
//! least significant first. A base element therefore has the same code in the
//! extension, which makes the inclusion `B ⊂ R` the identity on codes.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::poly;
use super::prime::{PrimeKind, PrimeRing};
use crate::error::{Error, Result};

/// Default cap on the number of elements any enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    GaloisRing,
    EqualChar,
}

/// Which elements [`ChainRing::enumerate`] should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subset {
    All,
    Units,
    /// The ideal `(π^k)`.
    Ideal(u32),
}

#[derive(Clone)]
pub struct ChainRing(Arc<ChainData>);

struct ChainData {
    family: Family,
    prime: PrimeRing,
    base: Option<ChainRing>,
    /// Non-leading coefficients `g_0, …, g_{n-1}` of the monic modulus, as base codes.
    modulus: Vec<u64>,
    degree: usize,
    dim: usize,
    size: u64,
    label: String,
    residue_field: OnceLock<ChainRing>,
    /// Codes of `ξ^0, …, ξ^{n-1}`.
    xi_powers: OnceLock<Vec<u64>>,
}

impl fmt::Debug for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainRing")
            .field("label", &self.0.label)
            .field("p", &self.p())
            .field("ell", &self.ell())
            .field("q", &self.q())
            .finish()
    }
}

impl fmt::Display for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label)
    }
}

impl PartialEq for ChainRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.prime == other.0.prime
                && self.0.modulus == other.0.modulus
                && self.0.base == other.0.base)
    }
}

impl Eq for ChainRing {}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

impl ChainRing {
    /// The prime ring `Z/p^ℓ` (Galois-ring family) or `F_p[u]/(u^ℓ)` (equal characteristic).
    pub fn prime_ring(family: Family, p: u64, ell: u32) -> Result<ChainRing> {
        if !is_prime(p) || p == 2 {
            return Err(Error::Parameter(format!("p = {p} must be an odd prime")));
        }
        if ell < 1 {
            return Err(Error::Parameter(
                "nilpotency degree must be at least 1".into(),
            ));
        }
        // Fields are the same object in both families; keep one representation.
        let family = if ell == 1 { Family::GaloisRing } else { family };
        let kind = match family {
            Family::GaloisRing => PrimeKind::Integers,
            Family::EqualChar => PrimeKind::Truncated,
        };
        let prime = PrimeRing::new(kind, p, ell);
        if prime.size > u32::MAX as u64 {
            return Err(Error::Parameter("ring too large".into()));
        }
        let label = super::spec::canonical_label(family, p, ell, 1);
        Ok(ChainRing(Arc::new(ChainData {
            family,
            prime,
            base: None,
            modulus: Vec::new(),
            degree: 1,
            dim: 1,
            size: prime.size,
            label,
            residue_field: OnceLock::new(),
            xi_powers: OnceLock::new(),
        })))
    }

    /// `GR(p, ℓ, m)` or `EC(p, ℓ, m)`: the degree-`m` unramified extension of the prime ring.
    pub fn new(family: Family, p: u64, ell: u32, m: usize) -> Result<ChainRing> {
        if m < 1 {
            return Err(Error::Parameter(
                "residue degree m must be at least 1".into(),
            ));
        }
        let prime = ChainRing::prime_ring(family, p, ell)?;
        if m == 1 {
            return Ok(prime);
        }
        let mut ring = prime.extend(m)?;
        Arc::get_mut(&mut ring.0).expect("fresh ring").label =
            super::spec::canonical_label(family, p, ell, m);
        Ok(ring)
    }

    /// Standard unramified extension of degree `n`, defined by the lift of the
    /// lexicographically smallest monic irreducible of degree `n` over the residue field.
    pub fn extend(&self, n: usize) -> Result<ChainRing> {
        if n < 1 {
            return Err(Error::Parameter(
                "extension degree must be at least 1".into(),
            ));
        }
        let modulus = poly::smallest_irreducible(&self.residue_field(), n);
        let lifted: Vec<u64> = modulus.iter().map(|&c| self.lift_residue(c)).collect();
        self.extend_with(lifted)
    }

    /// Extension by an explicit monic modulus `X^n + Σ g_j X^j` (`modulus = [g_0, …, g_{n-1}]`),
    /// which must reduce to an irreducible polynomial over the residue field.
    pub fn extend_with(&self, modulus: Vec<u64>) -> Result<ChainRing> {
        let n = modulus.len();
        if n < 1 {
            return Err(Error::Parameter(
                "modulus must have degree at least 1".into(),
            ));
        }
        if modulus.iter().any(|&c| c >= self.size()) {
            return Err(Error::Parameter("modulus coefficient out of range".into()));
        }
        let residue: Vec<u64> = modulus.iter().map(|&c| self.residue(c)).collect();
        if !poly::is_irreducible_monic(&self.residue_field(), &residue) {
            return Err(Error::Parameter("modulus is not basic irreducible".into()));
        }
        let size = (self.size() as u128).pow(n as u32);
        if size > u32::MAX as u128 {
            return Err(Error::Parameter("ring too large".into()));
        }
        let label = format!("{}[deg {}]", self.0.label, n);
        Ok(ChainRing(Arc::new(ChainData {
            family: self.0.family,
            prime: self.0.prime,
            base: Some(self.clone()),
            modulus,
            degree: n,
            dim: self.0.dim * n,
            size: size as u64,
            label,
            residue_field: OnceLock::new(),
            xi_powers: OnceLock::new(),
        })))
    }

    pub fn family(&self) -> Family {
        self.0.family
    }
    pub fn p(&self) -> u64 {
        self.0.prime.p
    }
    pub fn ell(&self) -> u32 {
        self.0.prime.ell
    }
    /// Residue degree over `F_p`.
    pub fn m(&self) -> usize {
        self.0.dim
    }
    /// Size of the residue field.
    pub fn q(&self) -> u64 {
        self.p().pow(self.0.dim as u32)
    }
    pub fn size(&self) -> u64 {
        self.0.size
    }
    pub fn unit_count(&self) -> u64 {
        self.size() - self.ideal_size(1)
    }
    /// `|(π^k)| = q^{ℓ-k}`.
    pub fn ideal_size(&self, k: u32) -> u64 {
        self.q().pow(self.ell().saturating_sub(k))
    }
    pub fn is_field(&self) -> bool {
        self.ell() == 1
    }
    pub fn label(&self) -> &str {
        &self.0.label
    }
    pub fn prime(&self) -> &PrimeRing {
        &self.0.prime
    }
    pub fn base(&self) -> Option<&ChainRing> {
        self.0.base.as_ref()
    }
    /// Degree of this ring over its immediate base (1 for a prime ring).
    pub fn degree(&self) -> usize {
        self.0.degree
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> u64 {
        0
    }
    pub fn one(&self) -> u64 {
        1
    }
    /// The canonical uniformizer: `p` for the Galois-ring family, `u` for equal characteristic.
    pub fn uniformizer(&self) -> u64 {
        if self.ell() > 1 {
            self.p()
        } else {
            0
        }
    }

    pub fn from_int(&self, k: i64) -> u64 {
        self.0.prime.from_int(k)
    }

    pub fn decode(&self, x: u64) -> Vec<u64> {
        let ps = self.0.prime.size;
        let mut out = Vec::with_capacity(self.0.dim);
        let mut v = x;
        for _ in 0..self.0.dim {
            out.push(v % ps);
            v /= ps;
        }
        out
    }

    pub fn encode(&self, digits: &[u64]) -> u64 {
        let ps = self.0.prime.size;
        digits.iter().rev().fold(0, |acc, &d| acc * ps + d)
    }

    fn digitwise(&self, a: u64, b: u64, f: impl Fn(&PrimeRing, u64, u64) -> u64) -> u64 {
        let pr = &self.0.prime;
        let ps = pr.size;
        let (mut x, mut y) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.0.dim {
            out += f(pr, x % ps, y % ps) * scale;
            x /= ps;
            y /= ps;
            scale *= ps;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.0.dim == 1 {
            return self.0.prime.add(a, b);
        }
        self.digitwise(a, b, PrimeRing::add)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if self.0.dim == 1 {
            return self.0.prime.sub(a, b);
        }
        self.digitwise(a, b, PrimeRing::sub)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.0.base.is_none() {
            return self.0.prime.mul(a, b);
        }
        let out = self.mul_flat(&self.decode(a), &self.decode(b));
        self.encode(&out)
    }

    /// Multiplication on flat prime-ring coefficient vectors.
    fn mul_flat(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let Some(base) = &self.0.base else {
            return vec![self.0.prime.mul(a[0], b[0])];
        };
        let n = self.0.degree;
        let bd = base.0.dim;
        let pr = &self.0.prime;
        let add = |x: &mut [u64], y: &[u64]| {
            for (u, &v) in x.iter_mut().zip(y) {
                *u = pr.add(*u, v);
            }
        };
        let mut prod = vec![0u64; (2 * n - 1) * bd];
        for i in 0..n {
            let ai = &a[i * bd..(i + 1) * bd];
            if ai.iter().all(|&d| d == 0) {
                continue;
            }
            for j in 0..n {
                let bj = &b[j * bd..(j + 1) * bd];
                if bj.iter().all(|&d| d == 0) {
                    continue;
                }
                let t = base.mul_flat(ai, bj);
                add(&mut prod[(i + j) * bd..(i + j + 1) * bd], &t);
            }
        }
        // X^n = -Σ g_j X^j
        for k in (n..2 * n - 1).rev() {
            let c: Vec<u64> = prod[k * bd..(k + 1) * bd].to_vec();
            if c.iter().all(|&d| d == 0) {
                continue;
            }
            for (j, &g) in self.0.modulus.iter().enumerate() {
                if g == 0 {
                    continue;
                }
                let t = base.mul_flat(&c, &base.decode(g));
                let dst = &mut prod[(k - n + j) * bd..(k - n + j + 1) * bd];
                for (u, &v) in dst.iter_mut().zip(&t) {
                    *u = pr.sub(*u, v);
                }
            }
        }
        prod.truncate(n * bd);
        prod
    }

    pub fn pow(&self, x: u64, mut e: u64) -> u64 {
        let mut result = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Valuation `ν(x)`, with `ν(0) = ℓ`.
    pub fn valuation(&self, x: u64) -> u32 {
        if self.0.dim == 1 {
            return self.0.prime.valuation(x);
        }
        self.decode(x)
            .into_iter()
            .map(|d| self.0.prime.valuation(d))
            .min()
            .unwrap_or(self.ell())
    }

    pub fn is_unit(&self, x: u64) -> bool {
        self.decode(x)
            .into_iter()
            .any(|d| self.0.prime.residue(d) != 0)
    }

    pub fn inverse(&self, x: u64) -> Result<u64> {
        if !self.is_unit(x) {
            return Err(Error::NotAUnit);
        }
        Ok(self.pow(x, self.unit_count() - 1))
    }

    /// The residue field `R/(π)`, built as the same tower with `ℓ = 1`.
    pub fn residue_field(&self) -> ChainRing {
        if self.ell() == 1 {
            return self.clone();
        }
        self.0
            .residue_field
            .get_or_init(|| match &self.0.base {
                None => {
                    ChainRing::prime_ring(Family::GaloisRing, self.p(), 1).expect("valid prime")
                }
                Some(base) => {
                    let modulus = self.0.modulus.iter().map(|&g| base.residue(g)).collect();
                    let f = base.residue_field();
                    let mut r = f
                        .extend_with(modulus)
                        .expect("residue of a basic irreducible");
                    Arc::get_mut(&mut r.0).expect("fresh ring").label = format!("GF({})", self.q());
                    r
                }
            })
            .clone()
    }

    /// Reduction map `R → R/(π)`, in residue-field codes.
    pub fn residue(&self, x: u64) -> u64 {
        let p = self.p();
        self.decode(x)
            .into_iter()
            .rev()
            .fold(0, |acc, d| acc * p + self.0.prime.residue(d))
    }

    /// Canonical (digit-wise) lift of a residue-field element.
    pub fn lift_residue(&self, c: u64) -> u64 {
        let p = self.p();
        let mut v = c;
        let mut digits = Vec::with_capacity(self.0.dim);
        for _ in 0..self.0.dim {
            digits.push(v % p);
            v /= p;
        }
        self.encode(&digits)
    }

    fn xi_powers(&self) -> &[u64] {
        self.0.xi_powers.get_or_init(|| {
            let Some(base) = &self.0.base else {
                return vec![1];
            };
            let bs = base.size();
            (0..self.0.degree).map(|i| bs.pow(i as u32)).collect()
        })
    }

    /// Coefficient of `ξ^i` of an element, as a base code.
    pub fn coefficient(&self, x: u64, i: usize) -> u64 {
        match &self.0.base {
            None => x,
            Some(base) => (x / base.size().pow(i as u32)) % base.size(),
        }
    }

    /// Element `Σ c_i ξ^i` from base coefficients.
    pub fn from_coefficients(&self, coeffs: &[u64]) -> u64 {
        match &self.0.base {
            None => coeffs[0],
            Some(base) => coeffs.iter().rev().fold(0, |acc, &c| acc * base.size() + c),
        }
    }

    /// Trace to the immediate base: trace of the multiplication-by-`x` matrix
    /// in the basis `1, ξ, …, ξ^{n-1}`.
    pub fn level_trace(&self, x: u64) -> u64 {
        let Some(base) = &self.0.base else {
            return x;
        };
        self.xi_powers()
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &xi)| {
                base.add(acc, self.coefficient(self.mul(x, xi), i))
            })
    }

    /// Composite trace all the way down to the prime ring.
    pub fn trace_to_prime(&self, x: u64) -> u64 {
        match &self.0.base {
            None => x,
            Some(base) => base.trace_to_prime(self.level_trace(x)),
        }
    }

    /// Phase numerator of the standard additive character at `x`; the character
    /// value is `exp(2πi · phase / phase_modulus)`.
    pub fn additive_phase(&self, x: u64) -> u64 {
        self.0.prime.phase(self.trace_to_prime(x))
    }

    pub fn phase_modulus(&self) -> u64 {
        self.0.prime.phase_modulus()
    }

    pub fn enumerate(&self, which: Subset) -> Result<Vec<u64>> {
        self.enumerate_capped(which, DEFAULT_ENUMERATION_CAP)
    }

    /// Elements of the requested subset in increasing code order.
    pub fn enumerate_capped(&self, which: Subset, cap: u64) -> Result<Vec<u64>> {
        if self.size() > cap {
            return Err(Error::Resource {
                what: format!("enumeration of {}", self.label()),
                size: self.size(),
                cap,
            });
        }
        let all = 0..self.size();
        Ok(match which {
            Subset::All => all.collect(),
            Subset::Units => all.filter(|&x| self.is_unit(x)).collect(),
            Subset::Ideal(k) => all.filter(|&x| self.valuation(x) >= k).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_ring_examples() {
        let f3 = ChainRing::new(Family::GaloisRing, 3, 1, 1).unwrap();
        assert_eq!((f3.size(), f3.unit_count()), (3, 2));
        let z9 = ChainRing::new(Family::GaloisRing, 3, 2, 1).unwrap();
        assert_eq!(z9.unit_count(), 6);
        let ec = ChainRing::new(Family::EqualChar, 3, 2, 1).unwrap();
        assert_eq!(ec.size(), 9);
        assert_eq!(ec.valuation(ec.uniformizer()), 1);
        let sizes: Vec<usize> = (0..=2)
            .map(|k| ec.enumerate(Subset::Ideal(k)).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![9, 3, 1]);
    }

    #[test]
    fn parameter_errors() {
        assert!(ChainRing::new(Family::GaloisRing, 2, 1, 1).is_err());
        assert!(ChainRing::new(Family::GaloisRing, 9, 1, 1).is_err());
        assert!(ChainRing::new(Family::GaloisRing, 3, 0, 1).is_err());
        assert!(ChainRing::new(Family::GaloisRing, 3, 1, 0).is_err());
    }

    #[test]
    fn gf9_relation() {
        let gf9 = ChainRing::new(Family::GaloisRing, 3, 1, 2).unwrap();
        assert_eq!(gf9.modulus(), &[1, 0]); // X^2 + 1
        let xi = gf9.from_coefficients(&[0, 1]);
        assert_eq!(gf9.mul(xi, xi), 2);
    }

    #[test]
    fn inverses() {
        let z9 = ChainRing::new(Family::GaloisRing, 3, 2, 1).unwrap();
        assert_eq!(z9.inverse(2).unwrap(), 5);
        assert_eq!(z9.inverse(3), Err(Error::NotAUnit));
        let ec = ChainRing::new(Family::EqualChar, 3, 2, 1).unwrap();
        // 1+u has inverse 1+2u
        assert_eq!(ec.inverse(1 + 3).unwrap(), 1 + 2 * 3);
    }

    #[test]
    fn valuation_histogram_z27() {
        let z27 = ChainRing::new(Family::GaloisRing, 3, 3, 1).unwrap();
        let mut hist = [0u32; 4];
        for x in 0..27 {
            hist[z27.valuation(x) as usize] += 1;
        }
        assert_eq!(hist, [18, 6, 2, 1]);
    }

    #[test]
    fn valuation_is_multiplicative_on_z9() {
        let z9 = ChainRing::new(Family::GaloisRing, 3, 2, 1).unwrap();
        for x in 0..9 {
            for y in 0..9 {
                let v = (z9.valuation(x) + z9.valuation(y)).min(2);
                assert_eq!(z9.valuation(z9.mul(x, y)), v);
                assert!(z9.valuation(z9.add(x, y)) >= z9.valuation(x).min(z9.valuation(y)));
            }
        }
    }
}
