//! Compact ring specifications: `GR(p,l,m)`, `EC(p,l,m)`, `GF(q)`, `Zmod(N)`,
//! and products of these joined by ` x `.

use super::chain::{ChainRing, Family};
use super::Ring;
use crate::error::{Error, Result};

/// Canonical label of a chain ring with the given parameters.
pub fn canonical_label(family: Family, p: u64, ell: u32, m: usize) -> String {
    if ell == 1 {
        return format!("GF({})", p.pow(m as u32));
    }
    match family {
        Family::GaloisRing if m == 1 => format!("Zmod({})", p.pow(ell)),
        Family::GaloisRing => format!("GR({p},{ell},{m})"),
        Family::EqualChar => format!("EC({p},{ell},{m})"),
    }
}

/// Writes `n = p^e` with `p` prime, if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut e = 0;
    let mut k = n;
    while k.is_multiple_of(p) {
        k /= p;
        e += 1;
    }
    (k == 1).then_some((p, e))
}

/// Prime factorization as `(p, e)` pairs in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn args(s: &str, name: &str) -> Option<Vec<u64>> {
    let inner = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

fn parse_factor(s: &str) -> Result<Vec<ChainRing>> {
    let err = || Error::Parse(s.to_string());
    let s = s.trim();
    if let Some(a) = args(s, "GR") {
        let [p, l, m] = a[..] else { return Err(err()) };
        return Ok(vec![ChainRing::new(
            Family::GaloisRing,
            p,
            l as u32,
            m as usize,
        )?]);
    }
    if let Some(a) = args(s, "EC") {
        let [p, l, m] = a[..] else { return Err(err()) };
        return Ok(vec![ChainRing::new(
            Family::EqualChar,
            p,
            l as u32,
            m as usize,
        )?]);
    }
    if let Some(a) = args(s, "GF") {
        let [q] = a[..] else { return Err(err()) };
        let (p, m) =
            prime_power(q).ok_or_else(|| Error::Parameter(format!("{q} is not a prime power")))?;
        return Ok(vec![ChainRing::new(Family::GaloisRing, p, 1, m as usize)?]);
    }
    if let Some(a) = args(s, "Zmod") {
        let [n] = a[..] else { return Err(err()) };
        if n < 3 {
            return Err(Error::Parameter(format!("Zmod({n}) needs N >= 3")));
        }
        return factorize(n)
            .into_iter()
            .map(|(p, e)| ChainRing::new(Family::GaloisRing, p, e, 1))
            .collect();
    }
    Err(err())
}

/// Parses a ring specification string.
pub fn parse_ring(s: &str) -> Result<Ring> {
    let mut factors = Vec::new();
    for part in s.split(" x ") {
        factors.extend(parse_factor(part)?);
    }
    Ring::product(factors)
}

/// Parses a specification that must describe a single chain ring.
pub fn parse_chain(s: &str) -> Result<ChainRing> {
    let ring = parse_ring(s)?;
    ring.as_chain()
        .cloned()
        .ok_or_else(|| Error::Unsupported(format!("{s} is not a chain ring")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn labels() {
        assert_eq!(parse_ring("GR(3,1,1)").unwrap().label(), "GF(3)");
        assert_eq!(parse_ring("GR(3,2,1)").unwrap().label(), "Zmod(9)");
        assert_eq!(parse_ring("GR(3,2,2)").unwrap().label(), "GR(3,2,2)");
        assert_eq!(parse_ring("EC(3,2,1)").unwrap().label(), "EC(3,2,1)");
        assert_eq!(parse_ring("GF(9)").unwrap().label(), "GF(9)");
        assert_eq!(parse_ring("Zmod(15)").unwrap().label(), "Zmod(15)");
        assert_eq!(parse_ring("Zmod(45)").unwrap().factors().len(), 2);
        assert_eq!(
            parse_ring("GF(9) x Zmod(5)").unwrap().label(),
            "GF(9) x GF(5)"
        );
    }

    #[test]
    fn rejects_bad_specs() {
        for s in [
            "GR(2,1,1)",
            "Zmod(12)",
            "GF(6)",
            "XY(3)",
            "GR(3,2)",
            "Zmod(1)",
        ] {
            assert!(parse_ring(s).is_err(), "{s}");
        }
    }

    fn spec_strategy() -> impl Strategy<Value = String> {
        let p = prop::sample::select(vec![3u64, 5, 7]);
        prop_oneof![
            (p.clone(), 1u32..=3, 1usize..=2).prop_map(|(p, l, m)| format!("GR({p},{l},{m})")),
            (p.clone(), 1u32..=3, 1usize..=2).prop_map(|(p, l, m)| format!("EC({p},{l},{m})")),
            (p, 1u32..=3).prop_map(|(p, m)| format!("GF({})", p.pow(m))),
            prop::sample::select(vec![3u64, 9, 15, 21, 25, 27, 45, 63, 105])
                .prop_map(|n| format!("Zmod({n})")),
        ]
    }

    proptest! {
        #[test]
        fn canonical_label_round_trips(s in spec_strategy()) {
            let ring = parse_ring(&s).unwrap();
            let again = parse_ring(ring.label()).unwrap();
            prop_assert_eq!(again.label(), ring.label());
            prop_assert_eq!(again.size(), ring.size());
            prop_assert!(again == ring);
        }
    }
}
