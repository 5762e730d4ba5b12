//! Finite chain rings, their products, unramified extensions, and linear
//! algebra over them.

mod chain;
mod linear;
mod poly;
mod prime;
pub mod spec;

use std::fmt;
use std::sync::Arc;

pub use chain::{ChainRing, Family, Subset, DEFAULT_ENUMERATION_CAP};
pub use linear::{dual_basis_map, invert_matrix, LinearMap};
pub use prime::{PrimeKind, PrimeRing};
pub use spec::{factorize, parse_chain, parse_ring};

use crate::error::{Error, Result};

/// A finite product of chain rings. Elements are mixed-radix codes with the
/// first factor least significant; a single factor uses the chain-ring code.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

struct RingData {
    factors: Vec<ChainRing>,
    size: u64,
    label: String,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.factors == other.0.factors
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.label)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label)
    }
}

impl From<ChainRing> for Ring {
    fn from(r: ChainRing) -> Ring {
        Ring::product(vec![r]).expect("single factor")
    }
}

impl Ring {
    pub fn product(factors: Vec<ChainRing>) -> Result<Ring> {
        if factors.is_empty() {
            return Err(Error::Parameter(
                "a product needs at least one factor".into(),
            ));
        }
        let size = factors
            .iter()
            .try_fold(1u64, |acc, f| acc.checked_mul(f.size()))
            .filter(|&s| s <= u32::MAX as u64)
            .ok_or_else(|| Error::Parameter("ring too large".into()))?;
        let label = if factors.len() == 1 {
            factors[0].label().to_string()
        } else if factors
            .iter()
            .all(|f| f.m() == 1 && f.family() == Family::GaloisRing)
        {
            format!("Zmod({size})")
        } else {
            factors
                .iter()
                .map(|f| f.label())
                .collect::<Vec<_>>()
                .join(" x ")
        };
        Ok(Ring(Arc::new(RingData {
            factors,
            size,
            label,
        })))
    }

    /// `Z/N` as the product of `Z/p^e` over the prime powers exactly dividing `N`.
    pub fn zmod(n: u64) -> Result<Ring> {
        parse_ring(&format!("Zmod({n})"))
    }

    pub fn factors(&self) -> &[ChainRing] {
        &self.0.factors
    }

    /// The ring itself when it has a single factor.
    pub fn as_chain(&self) -> Option<&ChainRing> {
        match &self.0.factors[..] {
            [r] => Some(r),
            _ => None,
        }
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn unit_count(&self) -> u64 {
        self.0.factors.iter().map(|f| f.unit_count()).product()
    }

    /// Factor codes of `x`.
    pub fn split(&self, x: u64) -> Vec<u64> {
        let mut v = x;
        self.0
            .factors
            .iter()
            .map(|f| {
                let c = v % f.size();
                v /= f.size();
                c
            })
            .collect()
    }

    pub fn join(&self, parts: &[u64]) -> u64 {
        self.0
            .factors
            .iter()
            .zip(parts)
            .rev()
            .fold(0, |acc, (f, &c)| acc * f.size() + c)
    }

    fn zip_with(&self, x: u64, y: u64, op: impl Fn(&ChainRing, u64, u64) -> u64) -> u64 {
        if let Some(r) = self.as_chain() {
            return op(r, x, y);
        }
        let (xs, ys) = (self.split(x), self.split(y));
        let parts: Vec<u64> = self
            .0
            .factors
            .iter()
            .zip(xs.iter().zip(&ys))
            .map(|(f, (&a, &b))| op(f, a, b))
            .collect();
        self.join(&parts)
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        self.zip_with(x, y, ChainRing::add)
    }
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        self.zip_with(x, y, ChainRing::sub)
    }
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        self.zip_with(x, y, ChainRing::mul)
    }
    pub fn neg(&self, x: u64) -> u64 {
        self.sub(0, x)
    }
    pub fn one(&self) -> u64 {
        self.join(&vec![1; self.0.factors.len()])
    }

    pub fn from_int(&self, k: i64) -> u64 {
        let parts: Vec<u64> = self.0.factors.iter().map(|f| f.from_int(k)).collect();
        self.join(&parts)
    }

    pub fn is_unit(&self, x: u64) -> bool {
        self.0
            .factors
            .iter()
            .zip(self.split(x))
            .all(|(f, c)| f.is_unit(c))
    }

    pub fn inverse(&self, x: u64) -> Result<u64> {
        let parts = self
            .0
            .factors
            .iter()
            .zip(self.split(x))
            .map(|(f, c)| f.inverse(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.join(&parts))
    }

    /// Elements (`Subset::Ideal` is taken factorwise) in increasing code order.
    pub fn enumerate(&self, which: Subset) -> Result<Vec<u64>> {
        if self.size() > DEFAULT_ENUMERATION_CAP {
            return Err(Error::Resource {
                what: format!("enumeration of {}", self.label()),
                size: self.size(),
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        let all = 0..self.size();
        Ok(match which {
            Subset::All => all.collect(),
            Subset::Units => all.filter(|&x| self.is_unit(x)).collect(),
            Subset::Ideal(k) => all
                .filter(|&x| {
                    self.0
                        .factors
                        .iter()
                        .zip(self.split(x))
                        .all(|(f, c)| f.valuation(c) >= k)
                })
                .collect(),
        })
    }

    pub fn element(&self, code: u64) -> Result<RingElement> {
        if code >= self.size() {
            return Err(Error::Parameter(format!(
                "code {code} out of range for {}",
                self
            )));
        }
        Ok(RingElement {
            ring: self.clone(),
            code,
        })
    }
}

/// An element paired with its ring, for callers that want owner checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Ring,
    code: u64,
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn code(&self) -> u64 {
        self.code
    }

    fn same_owner(&self, other: &RingElement) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    fn wrap(&self, code: u64) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            code,
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_owner(other)?;
        Ok(self.wrap(self.ring.add(self.code, other.code)))
    }
    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.same_owner(other)?;
        Ok(self.wrap(self.ring.sub(self.code, other.code)))
    }
    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_owner(other)?;
        Ok(self.wrap(self.ring.mul(self.code, other.code)))
    }
    pub fn neg(&self) -> RingElement {
        self.wrap(self.ring.neg(self.code))
    }
    pub fn inverse(&self) -> Result<RingElement> {
        Ok(self.wrap(self.ring.inverse(self.code)?))
    }
    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.code)
    }
    /// Valuation; only defined for chain rings.
    pub fn valuation(&self) -> Option<u32> {
        self.ring.as_chain().map(|r| r.valuation(self.code))
    }
}

/// An unramified extension `S = R[ξ]` with a cached trace table.
#[derive(Debug, Clone)]
pub struct Extension {
    base: ChainRing,
    top: ChainRing,
    traces: Option<Arc<Vec<u64>>>,
}

impl Extension {
    /// The standard degree-`n` extension of `base`.
    pub fn new(base: &ChainRing, n: usize) -> Result<Extension> {
        Extension::from_top(base.extend(n)?)
    }

    /// Views a ring built by [`ChainRing::extend`] as an extension of its base.
    pub fn from_top(top: ChainRing) -> Result<Extension> {
        let base = top
            .base()
            .cloned()
            .ok_or_else(|| Error::Parameter(format!("{top} is not an extension")))?;
        let traces = (top.size() <= DEFAULT_ENUMERATION_CAP)
            .then(|| Arc::new((0..top.size()).map(|s| top.level_trace(s)).collect()));
        Ok(Extension { base, top, traces })
    }

    pub fn base(&self) -> &ChainRing {
        &self.base
    }
    pub fn top(&self) -> &ChainRing {
        &self.top
    }
    pub fn degree(&self) -> usize {
        self.top.degree()
    }

    pub fn trace(&self, s: u64) -> u64 {
        match &self.traces {
            Some(t) => t[s as usize],
            None => self.top.level_trace(s),
        }
    }

    /// Inclusion `R → S`; the identity on codes.
    pub fn embed(&self, r: u64) -> u64 {
        r
    }

    /// Codes of the module basis `1, ξ, …, ξ^{n-1}`.
    pub fn basis(&self) -> Vec<u64> {
        (0..self.degree())
            .map(|i| {
                let mut c = vec![0; self.degree()];
                c[i] = 1;
                self.top.from_coefficients(&c)
            })
            .collect()
    }

    /// `ι(a) = Σ a_i ξ^i` for a coordinate vector over the base.
    pub fn from_coords(&self, a: &[u64]) -> u64 {
        self.top.from_coefficients(a)
    }

    pub fn coords(&self, s: u64) -> Vec<u64> {
        (0..self.degree())
            .map(|i| self.top.coefficient(s, i))
            .collect()
    }

    /// Gram matrix `Tr(ξ^i ξ^j)` of the trace form.
    pub fn trace_gram(&self) -> Vec<Vec<u64>> {
        let b = self.basis();
        b.iter()
            .map(|&x| b.iter().map(|&y| self.trace(self.top.mul(x, y))).collect())
            .collect()
    }

    /// The square root `j` of the defining relation `ξ² = j`, when the modulus is `X² − j`.
    pub fn quadratic_radicand(&self) -> Result<u64> {
        match self.top.modulus() {
            [g0, 0] => Ok(self.base.neg(*g0)),
            _ => Err(Error::Unsupported(format!(
                "{} is not of the form R[X]/(X^2 - j)",
                self.top
            ))),
        }
    }

    /// Conjugate `a − b√j` and norm `a² − j b²` of `s = a + b√j`.
    pub fn conjugate_and_norm(&self, s: u64) -> Result<(u64, u64)> {
        let j = self.quadratic_radicand()?;
        let r = &self.base;
        let (a, b) = (self.top.coefficient(s, 0), self.top.coefficient(s, 1));
        let conj = self.top.from_coefficients(&[a, r.neg(b)]);
        let norm = r.sub(r.mul(a, a), r.mul(j, r.mul(b, b)));
        Ok((conj, norm))
    }
}
