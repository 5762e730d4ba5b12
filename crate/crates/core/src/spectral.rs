//! Dense symmetric eigenvalues, spectra of the unimodular and Platonic
//! graphs, their closed-form predictions, and multiset comparison.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_platonic, build_trace_graph, platonic_odd_matrix, BipartiteGraph};
use crate::ring::{ChainRing, Extension, Ring};
use crate::sums::{close, predict_eisenstein, SumContext};

pub const EIGEN_DIMENSION_CAP: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: u64,
}

/// Clustered eigenvalues in increasing order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub values: Vec<Eigenvalue>,
    pub tolerance: f64,
}

impl Spectrum {
    /// Groups sorted values whose consecutive gaps are below `tol`; each
    /// cluster is reported by its mean.
    pub fn from_values(mut raw: Vec<f64>, tol: f64) -> Spectrum {
        raw.sort_by(f64::total_cmp);
        let mut values: Vec<Eigenvalue> = Vec::new();
        let mut cluster: Vec<f64> = Vec::new();
        let flush = |cluster: &mut Vec<f64>, values: &mut Vec<Eigenvalue>| {
            if !cluster.is_empty() {
                let mean = cluster.iter().sum::<f64>() / cluster.len() as f64;
                values.push(Eigenvalue {
                    value: mean,
                    multiplicity: cluster.len() as u64,
                });
                cluster.clear();
            }
        };
        for x in raw {
            if cluster.last().is_some_and(|&last| x - last > tol) {
                flush(&mut cluster, &mut values);
            }
            cluster.push(x);
        }
        flush(&mut cluster, &mut values);
        Spectrum {
            values,
            tolerance: tol,
        }
    }

    pub fn dimension(&self) -> u64 {
        self.values.iter().map(|e| e.multiplicity).sum()
    }

    /// `Σ value · multiplicity`.
    pub fn trace(&self) -> f64 {
        self.values
            .iter()
            .map(|e| e.value * e.multiplicity as f64)
            .sum()
    }

    pub fn max(&self) -> f64 {
        self.values.last().map_or(0.0, |e| e.value)
    }

    pub fn min(&self) -> f64 {
        self.values.first().map_or(0.0, |e| e.value)
    }

    /// Multiplicity of the cluster within `tol` of `x`.
    pub fn multiplicity_of(&self, x: f64, tol: f64) -> u64 {
        self.values
            .iter()
            .filter(|e| close(e.value, x, tol))
            .map(|e| e.multiplicity)
            .sum()
    }

    /// Largest and smallest eigenvalues once one copy of the degree `d`
    /// (and of `−d`, when `bipartite`) is removed.
    pub fn nontrivial_extremes(&self, d: f64, bipartite: bool) -> (f64, f64) {
        let mut pool: Vec<(f64, u64)> = self
            .values
            .iter()
            .map(|e| (e.value, e.multiplicity))
            .collect();
        let mut drop_one = |target: f64| {
            if let Some(slot) = pool
                .iter_mut()
                .find(|(v, m)| *m > 0 && close(*v, target, self.tolerance.max(1e-9)))
            {
                slot.1 -= 1;
            }
        };
        drop_one(d);
        if bipartite {
            drop_one(-d);
        }
        let live: Vec<f64> = pool
            .iter()
            .filter(|(_, m)| *m > 0)
            .map(|(v, _)| *v)
            .collect();
        let hi = live.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = live.iter().copied().fold(f64::INFINITY, f64::min);
        (hi, lo)
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = m.len();
    if n > EIGEN_DIMENSION_CAP {
        return Err(Error::Resource {
            what: "eigensolver dimension".into(),
            size: n as u64,
            cap: EIGEN_DIMENSION_CAP as u64,
        });
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Parameter("matrix is not square".into()));
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((m[i][j] - m[j][i]).abs());
        }
    }
    if worst > 1e-12 {
        return Err(Error::NotSymmetric(worst));
    }
    let mut a: Vec<f64> = m.iter().flatten().copied().collect();
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = 1e-10 * norm.max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off < threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

fn frobenius(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn cluster_tolerance(m: &[Vec<f64>]) -> f64 {
    1e-6 * frobenius(m).max(1.0)
}

pub fn symmetric_eigs(m: &[Vec<f64>]) -> Result<Spectrum> {
    let raw = jacobi_eigenvalues(m)?;
    Ok(Spectrum::from_values(raw, cluster_tolerance(m)))
}

/// `AᵀA` for a sparse 0/1 or signed matrix given by rows.
fn gram(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut g = vec![vec![0.0; n]; n];
    for row in rows {
        let support: Vec<usize> = (0..n).filter(|&j| row[j] != 0.0).collect();
        for &i in &support {
            for &j in &support {
                g[i][j] += row[i] * row[j];
            }
        }
    }
    g
}

/// Singular values of a square matrix, clustered.
pub fn singular_values(m: &[Vec<f64>]) -> Result<Spectrum> {
    let g = gram(m);
    let tol = cluster_tolerance(&g);
    let mu = Spectrum::from_values(jacobi_eigenvalues(&g)?, tol);
    let values = mu
        .values
        .iter()
        .map(|e| Eigenvalue {
            value: if e.value < tol { 0.0 } else { e.value.sqrt() },
            multiplicity: e.multiplicity,
        })
        .collect();
    Ok(Spectrum {
        values,
        tolerance: tol.sqrt(),
    })
}

/// Full adjacency spectrum of a bipartite graph: `±σ` for each singular value
/// `σ` of the reduced matrix.
pub fn bipartite_spectrum(b: &BipartiteGraph) -> Result<Spectrum> {
    let sv = singular_values(&b.reduced_matrix())?;
    let mut values = Vec::new();
    for e in &sv.values {
        if e.value == 0.0 {
            values.push(Eigenvalue {
                value: 0.0,
                multiplicity: 2 * e.multiplicity,
            });
        } else {
            values.push(Eigenvalue {
                value: e.value,
                multiplicity: e.multiplicity,
            });
            values.push(Eigenvalue {
                value: -e.value,
                multiplicity: e.multiplicity,
            });
        }
    }
    values.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(Spectrum {
        values,
        tolerance: sv.tolerance,
    })
}

pub fn platonic_spectrum(ring: &Ring) -> Result<Spectrum> {
    symmetric_eigs(&build_platonic(ring)?.matrix())
}

/// Singular values of `D⁻`; its eigenvalues are `±iσ`.
pub fn platonic_odd_singvals(ring: &Ring) -> Result<Spectrum> {
    singular_values(&platonic_odd_matrix(ring)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictedValue {
    pub value: f64,
    pub multiplicity: u64,
    /// Which branch of the closed form this value comes from.
    pub label: String,
}

/// A predicted spectrum with exact multiplicities summing to `dimension`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumPrediction {
    pub entries: Vec<PredictedValue>,
    pub dimension: u64,
    pub source: String,
}

impl SpectrumPrediction {
    /// Entries with zero multiplicity are dropped; `remainder` takes whatever is
    /// left of `dimension`.
    pub fn new(
        source: &str,
        dimension: u64,
        entries: Vec<(f64, u64, String)>,
        remainder: Option<(f64, String)>,
    ) -> Result<SpectrumPrediction> {
        let mut out: Vec<PredictedValue> = entries
            .into_iter()
            .filter(|e| e.1 > 0)
            .map(|(value, multiplicity, label)| PredictedValue {
                value,
                multiplicity,
                label,
            })
            .collect();
        let used: u64 = out.iter().map(|e| e.multiplicity).sum();
        if used > dimension {
            return Err(Error::Structure(format!(
                "{source}: multiplicities {used} exceed dimension {dimension}"
            )));
        }
        match remainder {
            Some((value, label)) if used < dimension => out.push(PredictedValue {
                value,
                multiplicity: dimension - used,
                label,
            }),
            None if used != dimension => {
                return Err(Error::Structure(format!(
                    "{source}: multiplicities {used} differ from dimension {dimension}"
                )))
            }
            _ => {}
        }
        Ok(SpectrumPrediction {
            entries: out,
            dimension,
            source: source.to_string(),
        })
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Entries whose values agree within `tol` are combined; labels are joined.
    pub fn merged(&self, tol: f64) -> SpectrumPrediction {
        let mut sorted = self.entries.clone();
        sorted.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut out: Vec<PredictedValue> = Vec::new();
        for e in sorted {
            match out.last_mut() {
                Some(last) if close(e.value, last.value, tol) => {
                    last.multiplicity += e.multiplicity;
                    if !last.label.split(" + ").any(|l| l == e.label) {
                        last.label = format!("{} + {}", last.label, e.label);
                    }
                }
                _ => out.push(e),
            }
        }
        SpectrumPrediction {
            entries: out,
            dimension: self.dimension,
            source: self.source.clone(),
        }
    }

    pub fn pairs(&self) -> Vec<(f64, u64)> {
        self.entries
            .iter()
            .map(|e| (e.value, e.multiplicity))
            .collect()
    }
}

fn qpow(q: u64, e: f64) -> f64 {
    (q as f64).powf(e)
}

/// Number of characters of `S^×` with each `(ν(χ), ν(χ|_{R^×}))`.
pub fn character_census(ext: &Extension) -> Result<BTreeMap<(u32, u32), u64>> {
    let ctx = SumContext::new(ext)?;
    let mut census = BTreeMap::new();
    for chi in ctx.top_units().characters() {
        let k = ctx.top_units().valuation(&chi);
        let k_res = ctx.base_units().valuation(&ctx.restrict(&chi));
        *census.entry((k, k_res)).or_insert(0) += 1;
    }
    Ok(census)
}

fn unimodular_count(r: &ChainRing, n: usize) -> u64 {
    let (q, ell) = (r.q(), r.ell());
    q.pow(n as u32 * ell) - q.pow(n as u32 * (ell - 1))
}

/// Spectrum of `Um(R^n)`: closed-form counts over a field, otherwise one
/// `±|E(χ)|` pair per character `χ` of `S^×`.
pub fn predict_um_spectrum(r: &ChainRing, n: usize) -> Result<SpectrumPrediction> {
    let (q, ell) = (r.q(), r.ell());
    let nf = n as f64;
    let dim = 2 * unimodular_count(r, n);
    if ell == 1 {
        let m1 = (q - 2) * (q.pow(n as u32) - 1) / (q - 1);
        let m2 = (q.pow(n as u32) - q) / (q - 1);
        let mut entries = Vec::new();
        for (v, m, l) in [
            (qpow(q, nf - 1.0), 1, "q^(n-1)"),
            (qpow(q, (nf - 1.0) / 2.0), m1, "q^((n-1)/2)"),
            (qpow(q, nf / 2.0 - 1.0), m2, "q^(n/2-1)"),
        ] {
            entries.push((v, m, format!("+{l}")));
            entries.push((-v, m, format!("-{l}")));
        }
        return SpectrumPrediction::new("field character count", dim, entries, None);
    }
    let census = character_census(&Extension::new(r, n)?)?;
    let mut entries = Vec::new();
    for (&(k, k_res), &count) in &census {
        let e = predict_eisenstein(q, ell, n, k, k_res).e.magnitude();
        if e > 0.0 {
            entries.push((e, count, format!("+|E| nu={k} nu_res={k_res}")));
            entries.push((-e, count, format!("-|E| nu={k} nu_res={k_res}")));
        }
    }
    SpectrumPrediction::new("character census", dim, entries, Some((0.0, "0".into())))
}

/// Spectrum of `Um₀(R^n)`: one `±|E₀(χ)|/|R^×|` pair per character of `S^×`
/// trivial on `R^×`.
pub fn predict_um0_spectrum(r: &ChainRing, n: usize) -> Result<SpectrumPrediction> {
    let (q, ell) = (r.q(), r.ell());
    let nf = n as f64;
    let dim = 2 * unimodular_count(r, n) / r.unit_count();
    if ell == 1 {
        let m2 = (q.pow(n as u32) - q) / (q - 1);
        let d = (qpow(q, nf - 1.0) - 1.0) / (q as f64 - 1.0);
        let s = qpow(q, nf / 2.0 - 1.0);
        let entries = vec![
            (d, 1, "+(q^(n-1)-1)/(q-1)".to_string()),
            (-d, 1, "-(q^(n-1)-1)/(q-1)".to_string()),
            (s, m2, "+q^(n/2-1)".to_string()),
            (-s, m2, "-q^(n/2-1)".to_string()),
        ];
        return SpectrumPrediction::new("field character count", dim, entries, None);
    }
    let census = character_census(&Extension::new(r, n)?)?;
    let units = r.unit_count() as f64;
    let mut entries = Vec::new();
    for (&(k, k_res), &count) in census.iter().filter(|((_, k_res), _)| *k_res == 0) {
        let e0 = predict_eisenstein(q, ell, n, k, k_res).e0.magnitude() / units;
        if e0 > 0.0 {
            entries.push((e0, count, format!("+|E0|/|R^x| nu={k}")));
            entries.push((-e0, count, format!("-|E0|/|R^x| nu={k}")));
        }
    }
    SpectrumPrediction::new("character census", dim, entries, Some((0.0, "0".into())))
}

fn platonic_dimension(r: &ChainRing) -> u64 {
    unimodular_count(r, 2) / 2
}

/// Adjacency spectrum of `Pl(R)` for a chain ring.
pub fn predict_platonic_spectrum(r: &ChainRing) -> Result<SpectrumPrediction> {
    if r.p() == 2 {
        return Err(Error::Unsupported(
            "Platonic graphs need odd characteristic".into(),
        ));
    }
    let (q, ell) = (r.q(), r.ell());
    let l = ell as f64;
    let dim = platonic_dimension(r);
    let quarter = (q + 1) * (q - 3) / 4;
    if ell == 1 {
        let entries = vec![
            (q as f64, 1, "q".to_string()),
            (-1.0, q, "-1".to_string()),
            (qpow(q, 0.5), quarter, "+q^(1/2)".to_string()),
            (-qpow(q, 0.5), quarter, "-q^(1/2)".to_string()),
        ];
        return SpectrumPrediction::new("platonic multiplicity count", dim, entries, None);
    }
    let mut entries = vec![
        (qpow(q, l), 1, "q^l".to_string()),
        (qpow(q, l - 0.5), quarter, "+q^(l-1/2)".to_string()),
        (-qpow(q, l - 0.5), quarter, "-q^(l-1/2)".to_string()),
    ];
    for k in 2..=ell {
        let m = (q * q - 1) * (q * q - q) * q.pow(2 * (k - 2)) / 4;
        let v = qpow(q, l - k as f64 / 2.0);
        let extra = if k == 2 { q } else { 0 };
        entries.push((v, m, format!("+q^(l-{k}/2)")));
        entries.push((-v, m + extra, format!("-q^(l-{k}/2)")));
    }
    SpectrumPrediction::new(
        "platonic multiplicity count",
        dim,
        entries,
        Some((0.0, "0".into())),
    )
}

/// Singular values of `D⁻` for a chain ring (each `σ` stands for `±iσ`).
pub fn predict_platonic_odd(r: &ChainRing) -> Result<SpectrumPrediction> {
    if r.p() == 2 {
        return Err(Error::Unsupported(
            "Platonic graphs need odd characteristic".into(),
        ));
    }
    let (q, ell) = (r.q(), r.ell());
    let l = ell as f64;
    let dim = platonic_dimension(r);
    let mut entries = vec![(qpow(q, l - 0.5), (q * q - 1) / 2, "q^(l-1/2)".to_string())];
    for k in 2..=ell {
        let m = (q * q - 1) * (q * q - q) * q.pow(2 * (k - 2)) / 2;
        entries.push((qpow(q, l - k as f64 / 2.0), m, format!("q^(l-{k}/2)")));
    }
    let remainder = (ell > 1).then(|| (0.0, "0".to_string()));
    SpectrumPrediction::new("platonic multiplicity count", dim, entries, remainder)
}

/// Spectra of the even and odd parts of `D` for one factor ring; the odd part
/// is stored by the imaginary parts of its eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorSpectrum {
    pub label: String,
    pub even: Vec<(f64, u64)>,
    pub odd_imag: Vec<(f64, u64)>,
}

impl FactorSpectrum {
    /// From the even spectrum and the singular values of the odd part.
    pub fn from_singular(
        label: &str,
        even: Vec<(f64, u64)>,
        odd_sv: &[(f64, u64)],
    ) -> Result<FactorSpectrum> {
        let mut odd_imag = Vec::new();
        for &(s, m) in odd_sv {
            if s == 0.0 {
                odd_imag.push((0.0, m));
            } else if m % 2 != 0 {
                return Err(Error::Structure(format!(
                    "singular value {s} of a skew matrix has odd multiplicity {m}"
                )));
            } else {
                odd_imag.push((s, m / 2));
                odd_imag.push((-s, m / 2));
            }
        }
        Ok(FactorSpectrum {
            label: label.to_string(),
            even,
            odd_imag,
        })
    }

    pub fn predicted(r: &ChainRing) -> Result<FactorSpectrum> {
        let even = predict_platonic_spectrum(r)?.pairs();
        FactorSpectrum::from_singular(r.label(), even, &predict_platonic_odd(r)?.pairs())
    }

    pub fn numeric(r: &ChainRing) -> Result<FactorSpectrum> {
        let ring = Ring::from(r.clone());
        let pairs = |s: Spectrum| {
            s.values
                .iter()
                .map(|e| (e.value, e.multiplicity))
                .collect::<Vec<_>>()
        };
        let even = pairs(platonic_spectrum(&ring)?);
        FactorSpectrum::from_singular(r.label(), even, &pairs(platonic_odd_singvals(&ring)?))
    }
}

/// `sp(D⁺)` of a product ring: the union over sign patterns with an even
/// number of odd factors of the products of factor eigenvalues.
pub fn compose_product_spectrum(factors: &[FactorSpectrum]) -> Result<SpectrumPrediction> {
    if factors.is_empty() {
        return Err(Error::Parameter("no factors".into()));
    }
    let dims: Vec<u64> = factors
        .iter()
        .map(|f| f.even.iter().map(|e| e.1).sum::<u64>())
        .collect();
    for (f, &d) in factors.iter().zip(&dims) {
        if f.odd_imag.iter().map(|e| e.1).sum::<u64>() != d {
            return Err(Error::Structure(format!(
                "{}: even and odd parts differ in size",
                f.label
            )));
        }
    }
    let dimension = (1u64 << (factors.len() - 1)) * dims.iter().product::<u64>();
    let mut acc: BTreeMap<(i64, usize), (f64, u64)> = BTreeMap::new();
    for pattern in 0u32..(1 << factors.len()) {
        let odd = pattern.count_ones() as usize;
        if !odd.is_multiple_of(2) {
            continue;
        }
        let sign = if odd.is_multiple_of(4) { 1.0 } else { -1.0 };
        let mut partial: Vec<(f64, u64)> = vec![(sign, 1)];
        for (i, f) in factors.iter().enumerate() {
            let list = if pattern >> i & 1 == 1 {
                &f.odd_imag
            } else {
                &f.even
            };
            partial = partial
                .iter()
                .flat_map(|&(v, m)| list.iter().map(move |&(w, k)| (v * w, m * k)))
                .collect();
        }
        for (v, m) in partial {
            if m == 0 {
                continue;
            }
            let key = ((v * 1e6).round() as i64, 0);
            let slot = acc.entry(key).or_insert((v, 0));
            slot.1 += m;
        }
    }
    let label = factors
        .iter()
        .map(|f| f.label.as_str())
        .collect::<Vec<_>>()
        .join(" x ");
    let entries = acc
        .into_values()
        .map(|(v, m)| (v, m, format!("product over {label}")))
        .collect();
    SpectrumPrediction::new(
        "tensor decomposition over factors",
        dimension,
        entries,
        None,
    )
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..)
        .find(|d| n.is_multiple_of(*d) || d * d > n)
        .map_or(n, |d| if n.is_multiple_of(d) { d } else { n })
}

/// Extremal non-trivial eigenvalues `(largest, smallest)` of `Pl(Z/N)`.
#[allow(non_snake_case)]
pub fn extremal_plN(n: u64) -> Result<(f64, f64)> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::Parameter(format!(
            "N = {n} must be odd and at least 3"
        )));
    }
    let mut rest = n;
    let mut ell = 0;
    while rest.is_multiple_of(3) {
        rest /= 3;
        ell += 1;
    }
    let nf = n as f64;
    if rest == 1 {
        let r = ChainRing::prime_ring(crate::ring::Family::GaloisRing, 3, ell)?;
        let pred = predict_platonic_spectrum(&r)?;
        let spec = Spectrum {
            values: pred
                .entries
                .iter()
                .map(|e| Eigenvalue {
                    value: e.value,
                    multiplicity: e.multiplicity,
                })
                .collect(),
            tolerance: 1e-9,
        };
        let mut spec = spec;
        spec.values.sort_by(|a, b| a.value.total_cmp(&b.value));
        return Ok(spec.nontrivial_extremes(nf, false));
    }
    let sp = (smallest_prime_factor(rest) as f64).sqrt();
    let m = sp.min(3.0);
    Ok(match ell {
        0 => (nf / sp, -nf / sp),
        1 => (nf / sp, -nf / m),
        _ => (nf / m, -nf / m),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchRow {
    pub value: f64,
    pub label: String,
    pub predicted: u64,
    pub computed: u64,
    /// Largest distance from `value` to a computed cluster assigned to it.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchVerdict {
    pub pass: bool,
    pub rows: Vec<MatchRow>,
    /// Computed clusters no predicted value claimed.
    pub unmatched: Vec<Eigenvalue>,
}

impl MatchVerdict {
    /// `value predicted computed delta` lines.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let mark = if r.predicted == r.computed {
                ""
            } else {
                "  <-- mismatch"
            };
            out.push_str(&format!(
                "{:>14.6} x{:<6} computed x{:<6} delta {:.1e}  [{}]{mark}\n",
                r.value, r.predicted, r.computed, r.delta, r.label
            ));
        }
        for e in &self.unmatched {
            out.push_str(&format!(
                "{:>14.6} x{:<6} unpredicted\n",
                e.value, e.multiplicity
            ));
        }
        out
    }
}

/// Assigns every computed cluster to the nearest predicted value within
/// `tol`, after merging predicted values that coincide.
pub fn multiset_match(
    computed: &Spectrum,
    predicted: &SpectrumPrediction,
    tol: f64,
) -> MatchVerdict {
    let merged = predicted.merged(tol);
    let mut rows: Vec<MatchRow> = merged
        .entries
        .iter()
        .map(|e| MatchRow {
            value: e.value,
            label: e.label.clone(),
            predicted: e.multiplicity,
            computed: 0,
            delta: 0.0,
        })
        .collect();
    let mut unmatched = Vec::new();
    for c in &computed.values {
        let best = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| close(c.value, r.value, tol))
            .min_by(|a, b| {
                (a.1.value - c.value)
                    .abs()
                    .total_cmp(&(b.1.value - c.value).abs())
            })
            .map(|(i, _)| i);
        match best {
            Some(i) => {
                rows[i].computed += c.multiplicity;
                rows[i].delta = rows[i].delta.max((rows[i].value - c.value).abs());
            }
            None => unmatched.push(*c),
        }
    }
    let pass = unmatched.is_empty() && rows.iter().all(|r| r.predicted == r.computed);
    MatchVerdict {
        pass,
        rows,
        unmatched,
    }
}

/// Largest `|A χ − E(χ) χ̄|` over all characters `χ` of `S^×`, where `A` is
/// the reduced adjacency matrix of `Tr(S/R)`.
pub fn character_eigen_residual(ext: &Extension) -> Result<f64> {
    let ctx = SumContext::new(ext)?;
    let graph = build_trace_graph(ext)?;
    let units = ctx.top_units();
    let pos: Vec<usize> = graph
        .labels
        .iter()
        .map(|&u| units.position(u).ok_or(Error::NotAUnit))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for chi in units.characters() {
        let values = ctx.values(&chi);
        let e = ctx.eisenstein(&chi);
        for (x, row) in graph.nbrs.iter().enumerate() {
            let lhs: Complex64 = row.iter().map(|&y| values[pos[y]]).sum();
            let rhs = e * values[pos[x]].conj();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_um, build_um0, odd_matrix_on, platonic_vertices};
    use crate::ring::{parse_chain, parse_ring};
    use proptest::prelude::*;

    fn chain(s: &str) -> ChainRing {
        parse_chain(s).unwrap()
    }

    fn as_pairs(s: &Spectrum) -> Vec<(f64, u64)> {
        s.values.iter().map(|e| (e.value, e.multiplicity)).collect()
    }

    fn assert_pairs(got: &[(f64, u64)], want: &[(f64, u64)]) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!(
                (g.0 - w.0).abs() < 1e-6 && g.1 == w.1,
                "{got:?} vs {want:?}"
            );
        }
    }

    #[test]
    fn trivial_matrices() {
        let id: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| (i == j) as u8 as f64).collect())
            .collect();
        assert_pairs(&as_pairs(&symmetric_eigs(&id).unwrap()), &[(1.0, 5)]);
        let swap = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_pairs(
            &as_pairs(&symmetric_eigs(&swap).unwrap()),
            &[(-1.0, 1), (1.0, 1)],
        );
        let skew = vec![vec![0.0, 1.0], vec![-1.0, 0.0]];
        assert!(matches!(symmetric_eigs(&skew), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn gram_of_um_gf3() {
        let b = build_um(&parse_ring("GF(3)").unwrap(), 2).unwrap();
        let spec = symmetric_eigs(&gram(&b.reduced_matrix())).unwrap();
        assert_pairs(&as_pairs(&spec), &[(1.0, 3), (3.0, 4), (9.0, 1)]);
    }

    fn random_symmetric(n: usize, seed: u64) -> Vec<Vec<f64>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let x: f64 = rng.gen_range(-1.0..1.0);
                m[i][j] = x;
                m[j][i] = x;
            }
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn eigensolver_preserves_trace_and_norm(n in 1usize..24, seed in any::<u64>()) {
            let m = random_symmetric(n, seed);
            let eig = jacobi_eigenvalues(&m).unwrap();
            let tr: f64 = (0..n).map(|i| m[i][i]).sum();
            prop_assert!((eig.iter().sum::<f64>() - tr).abs() < 1e-8 * n as f64);
            let fro = frobenius(&m);
            let fro_eig = eig.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((fro - fro_eig).abs() < 1e-8 * n as f64);
        }

        #[test]
        fn diagonal_matrices_return_their_entries(d in proptest::collection::vec(-50i32..50, 1..12)) {
            let n = d.len();
            let m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { d[i] as f64 } else { 0.0 }).collect()).collect();
            let mut eig = jacobi_eigenvalues(&m).unwrap();
            eig.sort_by(f64::total_cmp);
            let mut want: Vec<f64> = d.iter().map(|&x| x as f64).collect();
            want.sort_by(f64::total_cmp);
            prop_assert_eq!(eig, want);
        }
    }

    #[test]
    fn bipartite_spectra_of_field_graphs() {
        let gf3 = parse_ring("GF(3)").unwrap();
        let s3 = 3f64.sqrt();
        let um = bipartite_spectrum(&build_um(&gf3, 2).unwrap()).unwrap();
        assert_pairs(
            &as_pairs(&um),
            &[(-3.0, 1), (-s3, 4), (-1.0, 3), (1.0, 3), (s3, 4), (3.0, 1)],
        );
        let um0 = bipartite_spectrum(&build_um0(&gf3, 3).unwrap()).unwrap();
        assert_pairs(&as_pairs(&um0), &[(-4.0, 1), (-s3, 12), (s3, 12), (4.0, 1)]);
    }

    #[test]
    fn field_predictions_match_counts() {
        let p = predict_um_spectrum(&chain("GF(5)"), 2)
            .unwrap()
            .merged(1e-9);
        let s5 = 5f64.sqrt();
        assert_pairs(
            &p.pairs(),
            &[
                (-5.0, 1),
                (-s5, 18),
                (-1.0, 5),
                (1.0, 5),
                (s5, 18),
                (5.0, 1),
            ],
        );
        assert_eq!(p.total(), 48);
    }

    #[test]
    fn census_reproduces_field_formulas() {
        for (r, n) in [("GF(3)", 2), ("GF(3)", 3), ("GF(5)", 2)] {
            let r = chain(r);
            let census = character_census(&Extension::new(&r, n).unwrap()).unwrap();
            let q = r.q();
            let mut entries = Vec::new();
            for (&(k, kr), &c) in &census {
                let e = predict_eisenstein(q, 1, n, k, kr).e.magnitude();
                entries.push((e, c, String::new()));
                entries.push((-e, c, String::new()));
            }
            let census_pred =
                SpectrumPrediction::new("c", 2 * (q.pow(n as u32) - 1), entries, None).unwrap();
            let field = predict_um_spectrum(&r, n).unwrap();
            assert_eq!(
                census_pred.merged(1e-9).pairs().len(),
                field.merged(1e-9).pairs().len()
            );
            for (a, b) in census_pred
                .merged(1e-9)
                .pairs()
                .iter()
                .zip(field.merged(1e-9).pairs())
            {
                assert!((a.0 - b.0).abs() < 1e-9 && a.1 == b.1);
            }
        }
    }

    #[test]
    fn um_over_z9_matches_census() {
        let r = chain("Zmod(9)");
        let pred = predict_um_spectrum(&r, 2).unwrap();
        let s = 27f64.sqrt();
        assert_pairs(
            &pred.merged(1e-9).pairs(),
            &[
                (-9.0, 1),
                (-s, 4),
                (-3.0, 51),
                (0.0, 32),
                (3.0, 51),
                (s, 4),
                (9.0, 1),
            ],
        );
        let computed = bipartite_spectrum(&build_um(&Ring::from(r), 2).unwrap()).unwrap();
        let verdict = multiset_match(&computed, &pred, 1e-5);
        assert!(verdict.pass, "{}", verdict.table());
    }

    #[test]
    fn character_vectors_are_eigenvectors() {
        for (r, n) in [("GF(3)", 2), ("GF(3)", 3), ("Zmod(9)", 2)] {
            let ext = Extension::new(&chain(r), n).unwrap();
            assert!(character_eigen_residual(&ext).unwrap() < 1e-6);
        }
    }

    #[test]
    fn platonic_small_fields() {
        let s = platonic_spectrum(&parse_ring("Zmod(3)").unwrap()).unwrap();
        assert_pairs(&as_pairs(&s), &[(-1.0, 3), (3.0, 1)]);
        let s5 = 5f64.sqrt();
        let s = platonic_spectrum(&parse_ring("Zmod(5)").unwrap()).unwrap();
        assert_pairs(&as_pairs(&s), &[(-s5, 3), (-1.0, 5), (s5, 3), (5.0, 1)]);
        assert!(s.trace().abs() < 1e-8);
        let odd = platonic_odd_singvals(&parse_ring("Zmod(3)").unwrap()).unwrap();
        assert_pairs(&as_pairs(&odd), &[(3f64.sqrt(), 4)]);
    }

    #[test]
    fn platonic_predictions() {
        let p = predict_platonic_spectrum(&chain("Zmod(9)"))
            .unwrap()
            .merged(1e-9);
        assert_pairs(&p.pairs(), &[(-3.0, 15), (0.0, 8), (3.0, 12), (9.0, 1)]);
        let p = predict_platonic_spectrum(&chain("GF(7)"))
            .unwrap()
            .merged(1e-9);
        let s7 = 7f64.sqrt();
        assert_pairs(&p.pairs(), &[(-s7, 8), (-1.0, 7), (s7, 8), (7.0, 1)]);
        let p = predict_platonic_spectrum(&chain("Zmod(27)")).unwrap();
        assert!(p
            .entries
            .iter()
            .all(|e| (e.value.abs() - 3f64.powf(2.5)).abs() > 1e-6));
        assert_eq!(p.total(), (729 - 81) / 2);
    }

    #[test]
    fn platonic_numeric_matches_prediction() {
        for r in [
            "Zmod(3)", "Zmod(5)", "Zmod(7)", "Zmod(9)", "GF(9)", "Zmod(25)", "Zmod(27)",
        ] {
            let c = chain(r);
            let ring = Ring::from(c.clone());
            let v = multiset_match(
                &platonic_spectrum(&ring).unwrap(),
                &predict_platonic_spectrum(&c).unwrap(),
                1e-5,
            );
            assert!(v.pass, "{r}\n{}", v.table());
            let v = multiset_match(
                &platonic_odd_singvals(&ring).unwrap(),
                &predict_platonic_odd(&c).unwrap(),
                1e-5,
            );
            assert!(v.pass, "{r} odd\n{}", v.table());
        }
    }

    #[test]
    fn odd_part_is_skew_and_sign_convention_free() {
        let ring = parse_ring("Zmod(9)").unwrap();
        let d = platonic_odd_matrix(&ring).unwrap();
        for i in 0..d.len() {
            for j in 0..d.len() {
                assert_eq!(d[i][j], -d[j][i]);
            }
        }
        let flipped: Vec<Vec<u64>> = platonic_vertices(&ring)
            .unwrap()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if i % 3 == 0 {
                    v.iter().map(|&x| ring.neg(x)).collect()
                } else {
                    v.clone()
                }
            })
            .collect();
        let a = platonic_odd_singvals(&ring).unwrap();
        let b = singular_values(&odd_matrix_on(&ring, &flipped)).unwrap();
        assert_pairs(&as_pairs(&a), &as_pairs(&b));
    }

    #[test]
    fn composition_for_z15() {
        let factors = [
            FactorSpectrum::predicted(&chain("Zmod(3)")).unwrap(),
            FactorSpectrum::predicted(&chain("Zmod(5)")).unwrap(),
        ];
        let p = compose_product_spectrum(&factors).unwrap().merged(1e-9);
        let (s5, s15) = (5f64.sqrt(), 15f64.sqrt());
        assert_pairs(
            &p.pairs(),
            &[
                (-3.0 * s5, 3),
                (-5.0, 3),
                (-s15, 24),
                (-3.0, 5),
                (-s5, 9),
                (1.0, 15),
                (s5, 9),
                (s15, 24),
                (3.0 * s5, 3),
                (15.0, 1),
            ],
        );
        assert_eq!(p.total(), 96);
        let single = compose_product_spectrum(&factors[1..]).unwrap();
        assert_eq!(
            single.merged(1e-9).pairs(),
            predict_platonic_spectrum(&chain("Zmod(5)"))
                .unwrap()
                .merged(1e-9)
                .pairs()
        );
        let numeric = platonic_spectrum(&parse_ring("Zmod(15)").unwrap()).unwrap();
        let v = multiset_match(&numeric, &p, 1e-5);
        assert!(v.pass, "{}", v.table());
    }

    #[test]
    fn odd_products_appear_only_through_odd_parts() {
        let factors = [
            FactorSpectrum::predicted(&chain("Zmod(9)")).unwrap(),
            FactorSpectrum::predicted(&chain("Zmod(5)")).unwrap(),
        ];
        let p = compose_product_spectrum(&factors).unwrap();
        let target = 27f64.sqrt() * 5f64.sqrt();
        assert!(p
            .entries
            .iter()
            .any(|e| (e.value.abs() - target).abs() < 1e-9));
        let even_only = factors[0]
            .even
            .iter()
            .flat_map(|a| factors[1].even.iter().map(move |b| a.0 * b.0));
        assert!(even_only
            .into_iter()
            .all(|v| (v.abs() - target).abs() > 1e-6));
    }

    #[test]
    fn extremal_table() {
        let (s5, s7) = (5f64.sqrt(), 7f64.sqrt());
        let close2 =
            |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9;
        assert!(close2(extremal_plN(15).unwrap(), (15.0 / s5, -15.0 / s5)));
        assert!(close2(extremal_plN(35).unwrap(), (35.0 / s5, -35.0 / s5)));
        assert!(close2(extremal_plN(63).unwrap(), (63.0 / s7, -63.0 / s7)));
        assert!(close2(extremal_plN(9).unwrap(), (3.0, -3.0)));
        assert!(extremal_plN(10).is_err());
        for n in [15u64, 21, 33, 35, 45, 63, 99] {
            let factors: Vec<FactorSpectrum> = parse_ring(&format!("Zmod({n})"))
                .unwrap()
                .factors()
                .iter()
                .map(|f| FactorSpectrum::predicted(f).unwrap())
                .collect();
            let p = compose_product_spectrum(&factors).unwrap().merged(1e-9);
            let mut spec = Spectrum {
                values: p
                    .entries
                    .iter()
                    .map(|e| Eigenvalue {
                        value: e.value,
                        multiplicity: e.multiplicity,
                    })
                    .collect(),
                tolerance: 1e-9,
            };
            spec.values.sort_by(|a, b| a.value.total_cmp(&b.value));
            assert!(
                close2(
                    spec.nontrivial_extremes(n as f64, false),
                    extremal_plN(n).unwrap()
                ),
                "N = {n}"
            );
        }
    }

    #[test]
    fn matching_reports_multiplicity_errors() {
        let computed = Spectrum::from_values(vec![1.0, 1.0, 2.0], 1e-9);
        let good = SpectrumPrediction::new(
            "t",
            3,
            vec![(1.0, 2, "a".into()), (2.0, 1, "b".into())],
            None,
        )
        .unwrap();
        assert!(multiset_match(&computed, &good, 1e-6).pass);
        let bad = SpectrumPrediction::new(
            "t",
            3,
            vec![(1.0, 1, "a".into()), (2.0, 2, "b".into())],
            None,
        )
        .unwrap();
        let v = multiset_match(&computed, &bad, 1e-6);
        assert!(!v.pass);
        assert!(v.table().contains("mismatch"));
        let split = SpectrumPrediction::new(
            "t",
            3,
            vec![
                (1.0, 1, "a".into()),
                (1.0, 1, "c".into()),
                (2.0, 1, "b".into()),
            ],
            None,
        )
        .unwrap();
        assert!(multiset_match(&computed, &split, 1e-6).pass);
    }
}
