//! Square matrices over a chain ring, inverted by elimination on unit pivots.

use super::chain::ChainRing;
use super::Extension;
use crate::error::{Error, Result};

/// An `R`-linear map `S → S`, as a matrix in the basis `1, ξ, …, ξ^{n-1}`
/// acting on coordinate columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub matrix: Vec<Vec<u64>>,
}

impl LinearMap {
    pub fn identity(n: usize) -> LinearMap {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        LinearMap { matrix }
    }

    pub fn apply(&self, ext: &Extension, s: u64) -> u64 {
        let r = ext.base();
        let x = ext.coords(s);
        let y: Vec<u64> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&x)
                    .fold(0, |acc, (&a, &b)| r.add(acc, r.mul(a, b)))
            })
            .collect();
        ext.from_coords(&y)
    }

    pub fn inverse(&self, r: &ChainRing) -> Result<LinearMap> {
        Ok(LinearMap {
            matrix: invert_matrix(r, &self.matrix)?,
        })
    }
}

pub fn mat_mul(r: &ChainRing, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = b.first().map_or(0, |row| row.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(0, |acc, (&x, brow)| r.add(acc, r.mul(x, brow[j])))
                })
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse; fails with [`Error::Degenerate`] when some column has no unit pivot,
/// which over a chain ring happens exactly when the determinant is not a unit.
pub fn invert_matrix(r: &ChainRing, m: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Parameter("matrix is not square".into()));
    }
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut inv = LinearMap::identity(n).matrix;
    for c in 0..n {
        let pivot = (c..n)
            .find(|&i| r.is_unit(a[i][c]))
            .ok_or(Error::Degenerate)?;
        a.swap(c, pivot);
        inv.swap(c, pivot);
        let s = r.inverse(a[c][c])?;
        for j in 0..n {
            a[c][j] = r.mul(a[c][j], s);
            inv[c][j] = r.mul(inv[c][j], s);
        }
        for i in 0..n {
            if i == c || a[i][c] == 0 {
                continue;
            }
            let f = a[i][c];
            for j in 0..n {
                a[i][j] = r.sub(a[i][j], r.mul(f, a[c][j]));
                inv[i][j] = r.sub(inv[i][j], r.mul(f, inv[c][j]));
            }
        }
    }
    Ok(inv)
}

/// The map `φ` with `β(t, s) = Tr(φ(t)·s)`, where `gram[i][j] = β(ξ^i, ξ^j)`.
pub fn dual_basis_map(ext: &Extension, gram: &[Vec<u64>]) -> Result<LinearMap> {
    let r = ext.base();
    let t_inv = invert_matrix(r, &ext.trace_gram())?;
    let n = gram.len();
    let gram_t: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| gram[j][i]).collect())
        .collect();
    let matrix = mat_mul(r, &t_inv, &gram_t);
    // A degenerate form gives a non-invertible φ.
    invert_matrix(r, &matrix)?;
    Ok(LinearMap { matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_chain, Subset};

    fn dot_gram(n: usize) -> Vec<Vec<u64>> {
        LinearMap::identity(n).matrix
    }

    #[test]
    fn inverse_over_z9() {
        let r = parse_chain("Zmod(9)").unwrap();
        let m = vec![vec![3, 1], vec![1, 0]];
        let inv = invert_matrix(&r, &m).unwrap();
        assert_eq!(mat_mul(&r, &m, &inv), LinearMap::identity(2).matrix);
        assert_eq!(
            invert_matrix(&r, &[vec![3, 0], vec![0, 1]]),
            Err(Error::Degenerate)
        );
    }

    #[test]
    fn trace_form_gives_identity() {
        let ext = Extension::new(&parse_chain("GF(3)").unwrap(), 2).unwrap();
        let phi = dual_basis_map(&ext, &ext.trace_gram()).unwrap();
        assert_eq!(phi, LinearMap::identity(2));
    }

    #[test]
    fn dot_product_over_gf9() {
        let ext = Extension::new(&parse_chain("GF(3)").unwrap(), 2).unwrap();
        let phi = dual_basis_map(&ext, &dot_gram(2)).unwrap();
        assert_eq!(phi.matrix, vec![vec![2, 0], vec![0, 1]]);
    }

    fn check_everywhere(ext: &Extension, gram: &[Vec<u64>]) {
        let r = ext.base();
        let s = ext.top();
        let phi = dual_basis_map(ext, gram).unwrap();
        let beta = |x: u64, y: u64| {
            let (a, b) = (ext.coords(x), ext.coords(y));
            let mut acc = 0;
            for i in 0..a.len() {
                for j in 0..b.len() {
                    acc = r.add(acc, r.mul(a[i], r.mul(gram[i][j], b[j])));
                }
            }
            acc
        };
        for t in 0..s.size() {
            let ft = phi.apply(ext, t);
            assert_eq!(s.is_unit(ft), s.is_unit(t));
            for x in 0..s.size() {
                assert_eq!(ext.trace(s.mul(ft, x)), beta(t, x));
            }
        }
    }

    #[test]
    fn defining_identity_exhaustively() {
        let gf9 = Extension::new(&parse_chain("GF(3)").unwrap(), 2).unwrap();
        check_everywhere(&gf9, &dot_gram(2));
        let z9 = Extension::new(&parse_chain("Zmod(9)").unwrap(), 2).unwrap();
        check_everywhere(&z9, &dot_gram(2));
        check_everywhere(&z9, &[vec![1, 3], vec![3, 5]]);
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let z9 = Extension::new(&parse_chain("Zmod(9)").unwrap(), 2).unwrap();
        assert_eq!(
            dual_basis_map(&z9, &[vec![3, 0], vec![0, 1]]),
            Err(Error::Degenerate)
        );
        let _ = z9.top().enumerate(Subset::Units).unwrap();
    }
}
