//! The unit group of a chain ring as an explicit product of cyclic groups,
//! with multiplicative and additive characters.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{ChainRing, Extension, Subset};

/// Table of `exp(2πi k / n)` for `k < n`.
#[derive(Debug, Clone)]
pub struct Roots {
    table: Vec<Complex64>,
}

impl Roots {
    pub fn new(n: u64) -> Roots {
        let table = (0..n)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        Roots { table }
    }

    #[inline]
    pub fn get(&self, k: u64) -> Complex64 {
        self.table[(k % self.table.len() as u64) as usize]
    }

    pub fn order(&self) -> u64 {
        self.table.len() as u64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A multiplicative character, `χ(∏ g_i^{a_i}) = exp(2πi Σ e_i a_i / d_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultChar {
    pub exponents: Vec<u64>,
}

/// `R^×` written as `⟨g_1⟩ × … × ⟨g_r⟩`, where `g_1` has order `q − 1` and the
/// remaining generators form a basis of `1 + (π)`.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    ring: ChainRing,
    gens: Vec<u64>,
    orders: Vec<u64>,
    units: Vec<u64>,
    /// Position of each code in `units`, or `u32::MAX` for non-units.
    position: Vec<u32>,
    /// Exponent vectors, `rank` entries per unit.
    dlogs: Vec<u64>,
    exponent: u64,
    /// Generators of `1 + (π^k)` for `k = 0..=ℓ`, with `k = 0` meaning all of `R^×`.
    filtration: Vec<Vec<u64>>,
}

impl UnitGroup {
    pub fn new(ring: &ChainRing) -> Result<UnitGroup> {
        let scan = ring.enumerate(Subset::Units)?;
        UnitGroup::with_scan(ring, &scan)
    }

    /// Builds the structure choosing generators in the order given by `scan`,
    /// which must list every unit exactly once.
    pub fn with_scan(ring: &ChainRing, scan: &[u64]) -> Result<UnitGroup> {
        let unit_count = ring.unit_count();
        if scan.len() as u64 != unit_count || scan.iter().any(|&u| !ring.is_unit(u)) {
            return Err(Error::Parameter("scan must list every unit once".into()));
        }
        let q = ring.q();
        let p = ring.p();
        let field = ring.residue_field();
        let primes = prime_divisors(q - 1);
        let generates = |c: u64| primes.iter().all(|&r| field.pow(c, (q - 1) / r) != 1);
        let x = *scan
            .iter()
            .find(|&&u| generates(ring.residue(u)))
            .ok_or_else(|| Error::Structure("no residue generator".into()))?;
        let teich = ring.pow(x, q.pow(ring.ell() - 1));

        // Basis of the p-group 1 + (π), one maximal-order element at a time.
        let one_plus: Vec<u64> = scan
            .iter()
            .copied()
            .filter(|&u| ring.residue(u) == 1)
            .collect();
        let mut known: HashMap<u64, Vec<u64>> = HashMap::from([(1, Vec::new())]);
        let mut pgens: Vec<u64> = Vec::new();
        let mut porders: Vec<u64> = Vec::new();
        while known.len() < one_plus.len() {
            let mut best: Option<(u64, u32, u64)> = None;
            for &h in &one_plus {
                let (mut y, mut e) = (h, 0);
                while !known.contains_key(&y) {
                    y = ring.pow(y, p);
                    e += 1;
                }
                if best.is_none_or(|(_, be, _)| e > be) {
                    best = Some((h, e, y));
                }
            }
            let (h, e, y) = best.expect("nonempty");
            let pe = p.pow(e);
            let mut g = h;
            for ((&gi, &di), &ai) in pgens.iter().zip(&porders).zip(&known[&y]) {
                if ai % pe != 0 {
                    return Err(Error::Structure(
                        "basis extraction lost divisibility".into(),
                    ));
                }
                g = ring.mul(g, ring.pow(gi, (di - ai / pe) % di));
            }
            let mut next = HashMap::with_capacity(known.len() * pe as usize);
            for (k, v) in &known {
                let mut c = *k;
                for j in 0..pe {
                    let mut w = v.clone();
                    w.push(j);
                    next.insert(c, w);
                    c = ring.mul(c, g);
                }
            }
            if next.len() != known.len() * pe as usize {
                return Err(Error::Structure("new generator is not independent".into()));
            }
            known = next;
            pgens.push(g);
            porders.push(pe);
        }

        let mut gens = vec![teich];
        gens.extend(&pgens);
        let mut orders = vec![q - 1];
        orders.extend(&porders);
        if orders.iter().product::<u64>() != unit_count {
            return Err(Error::Structure(
                "orders do not multiply to the unit count".into(),
            ));
        }
        let rank = gens.len();
        let mut units = scan.to_vec();
        units.sort_unstable();
        let mut position = vec![u32::MAX; ring.size() as usize];
        for (i, &u) in units.iter().enumerate() {
            position[u as usize] = i as u32;
        }
        let mut dlogs = vec![0u64; units.len() * rank];
        let mut filled = 0usize;
        let mut t = 1;
        for a in 0..q - 1 {
            for (h, v) in &known {
                let u = ring.mul(t, *h);
                let pos = position[u as usize] as usize;
                dlogs[pos * rank] = a;
                dlogs[pos * rank + 1..(pos + 1) * rank].copy_from_slice(v);
                filled += 1;
            }
            t = ring.mul(t, teich);
        }
        if filled != units.len() || t != 1 {
            return Err(Error::Structure("discrete log table is incomplete".into()));
        }
        let exponent = (q - 1) * porders.iter().copied().max().unwrap_or(1);

        let mut group = UnitGroup {
            ring: ring.clone(),
            gens,
            orders,
            units,
            position,
            dlogs,
            exponent,
            filtration: Vec::new(),
        };
        group.filtration = (0..=ring.ell())
            .map(|k| group.filtration_generators(k))
            .collect();
        Ok(group)
    }

    fn filtration_generators(&self, k: u32) -> Vec<u64> {
        if k == 0 {
            return self.gens.clone();
        }
        let r = &self.ring;
        let members: Vec<u64> = self
            .units
            .iter()
            .copied()
            .filter(|&u| r.valuation(r.sub(u, 1)) >= k)
            .collect();
        let mut closure = vec![false; self.units.len()];
        let mut elems = vec![1u64];
        closure[self.position[1] as usize] = true;
        let mut gens = Vec::new();
        for &x in &members {
            if closure[self.position[x as usize] as usize] {
                continue;
            }
            gens.push(x);
            let mut layer = elems.clone();
            loop {
                layer = layer.iter().map(|&e| r.mul(e, x)).collect();
                if closure[self.position[layer[0] as usize] as usize] {
                    break;
                }
                for &e in &layer {
                    closure[self.position[e as usize] as usize] = true;
                }
                elems.extend(&layer);
            }
        }
        gens
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }
    pub fn generators(&self) -> &[u64] {
        &self.gens
    }
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }
    pub fn rank(&self) -> usize {
        self.gens.len()
    }
    pub fn order(&self) -> u64 {
        self.units.len() as u64
    }
    /// Units in increasing code order.
    pub fn units(&self) -> &[u64] {
        &self.units
    }
    /// Least common multiple of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }
    /// Generators of `1 + (π^k)`; for `k = 0`, of the whole group.
    pub fn subgroup_generators(&self, k: u32) -> &[u64] {
        &self.filtration[k as usize]
    }

    pub fn position(&self, u: u64) -> Option<usize> {
        match self.position.get(u as usize) {
            Some(&p) if p != u32::MAX => Some(p as usize),
            _ => None,
        }
    }

    pub fn dlog(&self, u: u64) -> Result<&[u64]> {
        let pos = self.position(u).ok_or(Error::NotAUnit)?;
        Ok(self.dlog_at(pos))
    }

    fn dlog_at(&self, pos: usize) -> &[u64] {
        let r = self.rank();
        &self.dlogs[pos * r..(pos + 1) * r]
    }

    pub fn from_exponents(&self, a: &[u64]) -> u64 {
        self.gens
            .iter()
            .zip(a)
            .fold(1, |acc, (&g, &e)| self.ring.mul(acc, self.ring.pow(g, e)))
    }

    pub fn trivial(&self) -> MultChar {
        MultChar {
            exponents: vec![0; self.rank()],
        }
    }

    /// The unique character of order 2.
    pub fn quadratic(&self) -> MultChar {
        let mut exponents = vec![0; self.rank()];
        exponents[0] = self.orders[0] / 2;
        MultChar { exponents }
    }

    /// All `|R^×|` characters in mixed-radix order of their exponent vectors.
    pub fn characters(&self) -> impl Iterator<Item = MultChar> + '_ {
        (0..self.order()).map(move |mut idx| {
            let exponents = self
                .orders
                .iter()
                .map(|&d| {
                    let e = idx % d;
                    idx /= d;
                    e
                })
                .collect();
            MultChar { exponents }
        })
    }

    pub fn conjugate(&self, chi: &MultChar) -> MultChar {
        let exponents = chi
            .exponents
            .iter()
            .zip(&self.orders)
            .map(|(&e, &d)| (d - e) % d)
            .collect();
        MultChar { exponents }
    }

    pub fn is_trivial(&self, chi: &MultChar) -> bool {
        chi.exponents.iter().all(|&e| e == 0)
    }

    /// Order of the character in the dual group.
    pub fn char_order(&self, chi: &MultChar) -> u64 {
        chi.exponents
            .iter()
            .zip(&self.orders)
            .map(|(&e, &d)| d / gcd(e, d))
            .fold(1, |a, b| a / gcd(a, b) * b)
    }

    fn phase_at(&self, chi: &MultChar, pos: usize) -> u64 {
        let l = self.exponent;
        self.dlog_at(pos)
            .iter()
            .zip(&chi.exponents)
            .zip(&self.orders)
            .fold(0, |acc, ((&a, &e), &d)| (acc + (a * e % d) * (l / d)) % l)
    }

    /// `k` with `χ(u) = exp(2πi k / exponent)`.
    pub fn phase(&self, chi: &MultChar, u: u64) -> Result<u64> {
        let pos = self.position(u).ok_or(Error::NotAUnit)?;
        Ok(self.phase_at(chi, pos))
    }

    pub fn value(&self, chi: &MultChar, u: u64) -> Result<Complex64> {
        let k = self.phase(chi, u)?;
        Ok(Complex64::from_polar(
            1.0,
            std::f64::consts::TAU * k as f64 / self.exponent as f64,
        ))
    }

    /// Phases of `χ` at every unit, in the order of [`UnitGroup::units`].
    pub fn phases(&self, chi: &MultChar) -> Vec<u64> {
        (0..self.units.len())
            .map(|pos| self.phase_at(chi, pos))
            .collect()
    }

    /// Smallest `k` with `χ` trivial on `1 + (π^k)`.
    pub fn valuation(&self, chi: &MultChar) -> u32 {
        (0..=self.ring.ell())
            .find(|&k| {
                self.filtration[k as usize]
                    .iter()
                    .all(|&g| self.phase(chi, g).expect("unit") == 0)
            })
            .expect("trivial on 1 + (π^ℓ)")
    }

    /// Restriction to `R^×` along `R ⊂ S`, where `self` is the unit group of `S`.
    pub fn restrict(&self, chi: &MultChar, ext: &Extension, base: &UnitGroup) -> Result<MultChar> {
        if ext.top() != &self.ring || ext.base() != &base.ring {
            return Err(Error::OwnerMismatch);
        }
        let l = self.exponent;
        let exponents = base
            .gens
            .iter()
            .zip(&base.orders)
            .map(|(&h, &d)| {
                let phi = self.phase(chi, ext.embed(h))?;
                if (phi * d) % l != 0 {
                    return Err(Error::Structure("restriction is not a character".into()));
                }
                Ok(phi * d / l)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultChar { exponents })
    }

    pub fn char_json(&self, chi: &MultChar) -> serde_json::Value {
        serde_json::json!({ "generators": self.orders, "exponents": chi.exponents })
    }
}

/// Additive characters `ψ_a(x) = exp(2πi · phase(a x) / M)` of a chain ring,
/// indexed by `a`.
#[derive(Debug, Clone)]
pub struct AdditiveCharacters {
    ring: ChainRing,
    phases: Vec<u64>,
    roots: Roots,
}

impl AdditiveCharacters {
    pub fn new(ring: &ChainRing) -> Result<AdditiveCharacters> {
        let phases = ring
            .enumerate(Subset::All)?
            .into_iter()
            .map(|x| ring.additive_phase(x))
            .collect();
        Ok(AdditiveCharacters {
            ring: ring.clone(),
            phases,
            roots: Roots::new(ring.phase_modulus()),
        })
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    /// Phase numerator of `ψ_a(x)` over [`AdditiveCharacters::modulus`].
    #[inline]
    pub fn phase(&self, a: u64, x: u64) -> u64 {
        self.phases[self.ring.mul(a, x) as usize]
    }

    pub fn modulus(&self) -> u64 {
        self.roots.order()
    }

    #[inline]
    pub fn value(&self, a: u64, x: u64) -> Complex64 {
        self.roots.get(self.phase(a, x))
    }

    /// Smallest `k` with `ψ_a` trivial on `(π^k)`, tested on the additive
    /// generators `π^j e_i`, `j ≥ k`, of that ideal.
    pub fn valuation(&self, a: u64) -> u32 {
        let r = &self.ring;
        let ps = r.prime().size;
        let pi = r.uniformizer();
        (0..=r.ell())
            .find(|&k| {
                (k..r.ell()).all(|j| {
                    (0..r.m()).all(|i| {
                        let g = r.mul(r.pow(pi, j as u64), ps.pow(i as u32));
                        self.phase(a, g) == 0
                    })
                })
            })
            .expect("trivial on (π^ℓ) = 0")
    }

    /// Index of `ψ_(i): r ↦ ψ_a(π^i r)`.
    pub fn shift(&self, a: u64, i: u32) -> u64 {
        let r = &self.ring;
        r.mul(r.pow(r.uniformizer(), i as u64), a)
    }

    /// Index in the top ring of the character `s ↦ ψ_a(Tr s)`; codes embed unchanged.
    pub fn induce(&self, ext: &Extension, a: u64) -> u64 {
        ext.embed(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_chain;
    use proptest::prelude::*;

    fn ug(s: &str) -> UnitGroup {
        UnitGroup::new(&parse_chain(s).unwrap()).unwrap()
    }

    #[test]
    fn z9_structure() {
        let g = ug("Zmod(9)");
        assert_eq!(g.generators(), &[8, 4]);
        assert_eq!(g.orders(), &[2, 3]);
        assert_eq!(g.dlog(2).unwrap(), &[1, 2]);
        assert_eq!(g.dlog(1).unwrap(), &[0, 0]);
        assert_eq!(g.dlog(8).unwrap(), &[1, 0]);
        assert_eq!(g.dlog(3), Err(Error::NotAUnit));
        assert_eq!(g.units(), &[1, 2, 4, 5, 7, 8]);
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(ug("GF(9)").orders(), &[8]);
        let s = Extension::new(&parse_chain("Zmod(9)").unwrap(), 2).unwrap();
        let g = UnitGroup::new(s.top()).unwrap();
        assert_eq!(g.orders(), &[8, 3, 3]);
        let g = ug("EC(3,3,1)");
        assert_eq!(g.orders().iter().product::<u64>(), 18);
    }

    #[test]
    fn every_unit_decomposes_uniquely() {
        for s in [
            "Zmod(9)",
            "Zmod(27)",
            "GR(3,2,2)",
            "EC(3,2,2)",
            "Zmod(25)",
            "EC(5,3,1)",
        ] {
            let g = ug(s);
            let mut seen = std::collections::HashSet::new();
            for &u in g.units() {
                let a = g.dlog(u).unwrap().to_vec();
                assert_eq!(g.from_exponents(&a), u, "{s}");
                assert!(a.iter().zip(g.orders()).all(|(e, d)| e < d));
                assert!(seen.insert(a));
            }
            assert_eq!(g.orders()[0], g.ring().q() - 1);
            assert!(g.orders()[1..].iter().all(|&d| d % g.ring().p() == 0));
        }
    }

    fn histogram(g: &UnitGroup) -> Vec<usize> {
        let mut h = vec![0; g.ring().ell() as usize + 1];
        for chi in g.characters() {
            h[g.valuation(&chi) as usize] += 1;
        }
        h
    }

    #[test]
    fn valuation_histograms() {
        assert_eq!(histogram(&ug("Zmod(9)")), vec![1, 1, 4]);
        assert_eq!(histogram(&ug("GF(3)")), vec![1, 1]);
        for s in ["Zmod(27)", "GR(3,2,2)", "EC(3,3,1)", "Zmod(25)"] {
            let g = ug(s);
            let r = g.ring();
            let h = histogram(&g);
            let mut cum = 0;
            for k in 0..=r.ell() {
                cum += h[k as usize];
                let index = if k == 0 {
                    1
                } else {
                    g.order() / r.q().pow(r.ell() - k)
                };
                assert_eq!(cum as u64, index, "{s} k={k}");
            }
        }
    }

    #[test]
    fn filtration_subgroup_sizes() {
        let g = ug("GR(3,2,2)");
        let r = g.ring();
        for k in 1..=r.ell() {
            let mut closure = std::collections::HashSet::from([1u64]);
            for &x in g.subgroup_generators(k) {
                let mut frontier: Vec<u64> = closure.iter().copied().collect();
                while let Some(y) = frontier.pop() {
                    let z = r.mul(y, x);
                    if closure.insert(z) {
                        frontier.push(z);
                    }
                }
            }
            assert_eq!(closure.len() as u64, r.q().pow(r.ell() - k));
        }
    }

    #[test]
    fn quadratic_character() {
        let g = ug("GF(3)");
        assert_eq!(g.value(&g.quadratic(), 2).unwrap().re.round(), -1.0);
        let g = ug("Zmod(9)");
        let eps = g.quadratic();
        assert_eq!(eps.exponents, vec![1, 0]);
        assert_eq!(g.value(&eps, 2).unwrap().re.round(), -1.0);
        assert_eq!(g.valuation(&eps), 1);
        assert_eq!(g.char_order(&eps), 2);
        let sum: Complex64 = g.units().iter().map(|&u| g.value(&eps, u).unwrap()).sum();
        assert!(sum.norm() < 1e-9);
        let order_two: Vec<MultChar> = g.characters().filter(|c| g.char_order(c) == 2).collect();
        assert_eq!(order_two, vec![eps]);
    }

    #[test]
    fn orthogonality_and_completeness() {
        for s in ["Zmod(9)", "GF(9)", "EC(3,2,1)", "Zmod(25)"] {
            let g = ug(s);
            let mut tables = std::collections::HashSet::new();
            for chi in g.characters() {
                let sum: Complex64 = g.units().iter().map(|&u| g.value(&chi, u).unwrap()).sum();
                if g.is_trivial(&chi) {
                    assert!((sum.re - g.order() as f64).abs() < 1e-8);
                } else {
                    assert!(sum.norm() < 1e-8, "{s}");
                }
                assert!(tables.insert(g.phases(&chi)));
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let f3 = parse_chain("GF(3)").unwrap();
        let base = UnitGroup::new(&f3).unwrap();
        let e2 = Extension::new(&f3, 2).unwrap();
        let g2 = UnitGroup::new(e2.top()).unwrap();
        assert!(base.is_trivial(&g2.restrict(&g2.quadratic(), &e2, &base).unwrap()));
        assert!(base.is_trivial(&g2.restrict(&g2.trivial(), &e2, &base).unwrap()));
        let trivial_on_base = g2
            .characters()
            .filter(|c| base.is_trivial(&g2.restrict(c, &e2, &base).unwrap()))
            .count();
        assert_eq!(trivial_on_base, 4);
        let e3 = Extension::new(&f3, 3).unwrap();
        let g3 = UnitGroup::new(e3.top()).unwrap();
        assert_eq!(
            g3.restrict(&g3.quadratic(), &e3, &base).unwrap(),
            base.quadratic()
        );
        assert_eq!(
            g2.restrict(&g2.trivial(), &e3, &base),
            Err(Error::OwnerMismatch)
        );
    }

    #[test]
    fn restriction_agrees_with_embedding_and_realizes_all_valuation_pairs() {
        for (s, n) in [
            ("Zmod(9)", 2usize),
            ("Zmod(27)", 2),
            ("EC(3,2,1)", 2),
            ("Zmod(9)", 3),
        ] {
            let r = parse_chain(s).unwrap();
            let base = UnitGroup::new(&r).unwrap();
            let ext = Extension::new(&r, n).unwrap();
            let top = UnitGroup::new(ext.top()).unwrap();
            let mut pairs = std::collections::HashSet::new();
            for chi in top.characters() {
                let res = top.restrict(&chi, &ext, &base).unwrap();
                for &u in base.units() {
                    let a = top.value(&chi, ext.embed(u)).unwrap();
                    let b = base.value(&res, u).unwrap();
                    assert!((a - b).norm() < 1e-9);
                }
                let (k, j) = (top.valuation(&chi), base.valuation(&res));
                assert!(j <= k);
                pairs.insert((k, j));
            }
            for k in 1..=r.ell() {
                for j in 0..=k {
                    assert!(pairs.contains(&(k, j)), "{s} deg {n}: ({k},{j}) missing");
                }
            }
        }
    }

    #[test]
    fn generator_choice_does_not_change_valuations() {
        for s in ["Zmod(27)", "GR(3,2,2)", "EC(3,2,2)"] {
            let r = parse_chain(s).unwrap();
            let a = UnitGroup::new(&r).unwrap();
            let mut scan = a.units().to_vec();
            scan.reverse();
            let b = UnitGroup::with_scan(&r, &scan).unwrap();
            assert_ne!(a.generators(), b.generators());
            assert_eq!(histogram(&a), histogram(&b));
        }
    }

    #[test]
    fn additive_characters() {
        let z9 = parse_chain("Zmod(9)").unwrap();
        let add = AdditiveCharacters::new(&z9).unwrap();
        assert!((add.value(0, 5) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert!((add.value(1, 3) - w).norm() < 1e-12);
        assert_eq!(add.valuation(3), 1);
        assert_eq!(add.valuation(0), 0);
        assert_eq!(add.valuation(add.shift(1, 1)), 1);

        let gf9 = parse_chain("GF(9)").unwrap();
        let add = AdditiveCharacters::new(&gf9).unwrap();
        let tables: std::collections::HashSet<Vec<u64>> = (0..9)
            .map(|a| (0..9).map(|x| add.phase(a, x)).collect())
            .collect();
        assert_eq!(tables.len(), 9);
    }

    #[test]
    fn induced_characters_keep_valuation() {
        let z9 = parse_chain("Zmod(9)").unwrap();
        let ext = Extension::new(&z9, 2).unwrap();
        let base = AdditiveCharacters::new(&z9).unwrap();
        let top = AdditiveCharacters::new(ext.top()).unwrap();
        for a in 0..9 {
            let b = base.induce(&ext, a);
            assert_eq!(top.valuation(b), base.valuation(a));
            for s in 0..ext.top().size() {
                assert_eq!(top.phase(b, s), base.phase(a, ext.trace(s)));
            }
        }
    }

    proptest! {
        #[test]
        fn additive_valuation_law(which in 0usize..4, a in 0u64..10_000) {
            let r = parse_chain(["Zmod(27)", "EC(3,3,1)", "GR(3,2,2)", "EC(5,2,1)"][which]).unwrap();
            let a = a % r.size();
            let add = AdditiveCharacters::new(&r).unwrap();
            let expected = if a == 0 { 0 } else { r.ell() - r.valuation(a) };
            prop_assert_eq!(add.valuation(a), expected);
            let total: Complex64 = (0..r.size()).map(|x| add.value(a, x)).sum();
            if a != 0 {
                prop_assert!(total.norm() < 1e-8);
            }
        }

        #[test]
        fn characters_are_homomorphisms(which in 0usize..3, i in 0u64..10_000, x in 0u64..10_000, y in 0u64..10_000) {
            let g = ug(["Zmod(27)", "EC(3,2,2)", "GR(5,2,1)"][which]);
            let chi = g.characters().nth((i % g.order()) as usize).unwrap();
            let u = g.units()[(x % g.order()) as usize];
            let v = g.units()[(y % g.order()) as usize];
            let l = g.exponent();
            let lhs = g.phase(&chi, g.ring().mul(u, v)).unwrap();
            let rhs = (g.phase(&chi, u).unwrap() + g.phase(&chi, v).unwrap()) % l;
            prop_assert_eq!(lhs, rhs);
        }
    }
}
