//! Dense univariate polynomials over a finite field, just enough to find and
//! certify irreducible moduli.
//!
//! Coefficients are field codes, lowest degree first, with no trailing zeros.

use super::chain::ChainRing;

type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn sub(f: &ChainRing, a: &[u64], b: &[u64]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.sub(x, y)
        })
        .collect();
    trim(out)
}

fn mul(f: &ChainRing, a: &[u64], b: &[u64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
fn rem(f: &ChainRing, a: &[u64], m: &[u64]) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inverse(m[dm]).expect("nonzero leading coefficient");
    while r.len() > dm {
        let k = r.len() - 1;
        let c = f.mul(r[k], lead_inv);
        for (j, &mj) in m.iter().enumerate() {
            let idx = k - dm + j;
            r[idx] = f.sub(r[idx], f.mul(c, mj));
        }
        r = trim(r);
    }
    r
}

fn gcd(f: &ChainRing, a: &[u64], b: &[u64]) -> Poly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

fn powmod(f: &ChainRing, base: &[u64], mut e: u64, m: &[u64]) -> Poly {
    let mut result = rem(f, &[1], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(f, &mul(f, &result, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    result
}

fn prime_factors(mut n: usize) -> Vec<usize> {
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

/// Rabin's test for a monic polynomial `X^n + Σ g_j X^j` over the field `f`.
pub fn is_irreducible_monic(f: &ChainRing, nonleading: &[u64]) -> bool {
    let n = nonleading.len();
    if n <= 1 {
        return n == 1;
    }
    let mut m = nonleading.to_vec();
    m.push(1);
    let q = f.size();
    let x: Poly = vec![0, 1];
    // frob[i] = X^{q^i} mod m
    let mut frob = vec![rem(f, &x, &m)];
    for i in 1..=n {
        let next = powmod(f, &frob[i - 1], q, &m);
        frob.push(next);
    }
    if frob[n] != rem(f, &x, &m) {
        return false;
    }
    prime_factors(n).into_iter().all(|r| {
        let h = sub(f, &frob[n / r], &x);
        gcd(f, &h, &m).len() == 1
    })
}

/// Non-leading coefficients of the lexicographically smallest monic irreducible
/// of degree `n` over `f`, ordering by `(a_{n-1}, …, a_0)` as field codes.
pub fn smallest_irreducible(f: &ChainRing, n: usize) -> Vec<u64> {
    let q = f.size();
    let total = q.pow(n as u32);
    (0..total)
        .map(|idx| {
            let mut v = idx;
            (0..n)
                .map(|_| {
                    let d = v % q;
                    v /= q;
                    d
                })
                .collect::<Vec<u64>>()
        })
        .find(|g| is_irreducible_monic(f, g))
        .expect("irreducible polynomials exist in every degree")
}
