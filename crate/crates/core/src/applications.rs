//! Dot-product counting, edge-count estimates, isoperimetric bounds, and the
//! Ramanujan property of Platonic graphs over `Z/N`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    build_trace_graph, build_trace_graph0, build_um, build_um0, decode_tuple, dot, encode_tuple,
    projective_canonical, relabel_iso_check, relabel_iso_check0, BipartiteGraph, Graph,
};
use crate::ring::{dual_basis_map, factorize, ChainRing, Extension, LinearMap, Ring};
use crate::spectral::{
    bipartite_spectrum, compose_product_spectrum, extremal_plN, Eigenvalue, FactorSpectrum,
    Spectrum,
};
use crate::sums::close;
use crate::units::UnitGroup;

/// `N_r(A, B) = #{(a, b) ∈ A × B : a·b = r}`.
pub fn count_dot(ring: &Ring, a: &[Vec<u64>], b: &[Vec<u64>], r: u64) -> u64 {
    a.iter()
        .map(|x| b.iter().filter(|y| dot(ring, x, y) == r).count() as u64)
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct CountingReport {
    pub r: u64,
    pub size_a: usize,
    pub size_b: usize,
    pub density_a: f64,
    pub density_b: f64,
    pub count: u64,
    pub expected: f64,
    pub bound: f64,
    /// `"unit"` for `r ∈ R^×`, `"general"` otherwise.
    pub route: &'static str,
    pub pass: bool,
    /// `δ(A) δ(B)` reaches the threshold at which a solution is guaranteed.
    pub above_threshold: bool,
    pub threshold_ok: bool,
    /// Count recovered through the embedding into `R^{n+1}`.
    pub reduction_count: u64,
    pub reduction_ok: bool,
}

/// Counting over `R^n` for a chain ring `R`, with `Um₀(R^{n+1})` built once
/// for the edge-count reduction.
pub struct CountingSetup {
    pub chain: ChainRing,
    pub ring: Ring,
    pub n: usize,
    pub um0: BipartiteGraph,
}

impl CountingSetup {
    pub fn new(chain: &ChainRing, n: usize) -> Result<CountingSetup> {
        let ring = Ring::from(chain.clone());
        let um0 = build_um0(&ring, n + 1)?;
        Ok(CountingSetup {
            chain: chain.clone(),
            ring,
            n,
            um0,
        })
    }

    pub fn space_size(&self) -> u64 {
        self.ring.size().pow(self.n as u32)
    }

    fn class_index(&self, a: &[u64], last: u64) -> Result<usize> {
        let mut v = a.to_vec();
        v.push(last);
        let c = projective_canonical(&self.ring, &v)?;
        self.um0
            .index_of(encode_tuple(&self.ring, &c))
            .ok_or_else(|| Error::Structure("lifted tuple is not a vertex".into()))
    }

    /// `e(A′, B′)` in `Um₀(R^{n+1})` for `A′ = [A × {1}]`, `B′ = [B × {−r}]`.
    pub fn reduction_edges(&self, a: &[Vec<u64>], b: &[Vec<u64>], r: u64) -> Result<u64> {
        let one = self.ring.one();
        let minus_r = self.ring.neg(r);
        let black: Vec<usize> = a
            .iter()
            .map(|x| self.class_index(x, one))
            .collect::<Result<_>>()?;
        let white: Vec<usize> = b
            .iter()
            .map(|y| self.class_index(y, minus_r))
            .collect::<Result<_>>()?;
        Ok(black
            .iter()
            .map(|&x| white.iter().filter(|&&y| self.um0.adjacent(x, y)).count() as u64)
            .sum())
    }

    pub fn report(&self, a: &[Vec<u64>], b: &[Vec<u64>], r: u64) -> Result<CountingReport> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Parameter("sets must be nonempty".into()));
        }
        let (q, ell) = (self.chain.q() as f64, self.chain.ell() as f64);
        let n = self.n as f64;
        let count = count_dot(&self.ring, a, b, r);
        let (la, lb) = (a.len() as f64, b.len() as f64);
        let expected = q.powf(-ell) * la * lb;
        let unit = self.ring.is_unit(r);
        let (route, bound, reduction_count) = if unit {
            let bound = q.powf((n - 1.0) * (ell - 0.5)) * (la * lb).sqrt();
            ("unit", bound, self.reduction_edges(a, b, r)?)
        } else {
            let bound = q.powf(n * (ell - 0.5)) * (la * lb).sqrt();
            let one = self.ring.one();
            let lift = |s: &[Vec<u64>], last: u64| -> Vec<Vec<u64>> {
                s.iter()
                    .map(|x| x.iter().copied().chain([last]).collect())
                    .collect()
            };
            let shifted = count_dot(
                &self.ring,
                &lift(a, one),
                &lift(b, self.ring.sub(one, r)),
                one,
            );
            ("general", bound, shifted)
        };
        let space = self.space_size() as f64;
        let (density_a, density_b) = (la / space, lb / space);
        let threshold = if unit {
            q.powf(-(n - 1.0))
        } else {
            q.powf(-(n - 2.0 * ell))
        };
        let above_threshold = density_a * density_b >= threshold * (1.0 - 1e-12);
        Ok(CountingReport {
            r,
            size_a: a.len(),
            size_b: b.len(),
            density_a,
            density_b,
            count,
            expected,
            bound,
            route,
            pass: (count as f64 - expected).abs() < bound,
            above_threshold,
            threshold_ok: !above_threshold || count > 0,
            reduction_count,
            reduction_ok: reduction_count == count,
        })
    }

    /// A uniformly random `size`-subset of `R^n`, in code order.
    pub fn random_subset(&self, size: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        let total = self.space_size() as usize;
        let mut idx = sample(rng, total, size.min(total)).into_vec();
        idx.sort_unstable();
        idx.into_iter()
            .map(|c| decode_tuple(&self.ring, c as u64, self.n))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountingSweep {
    pub ring: String,
    pub n: usize,
    pub r: u64,
    pub seed: u64,
    pub trials: Vec<CountingReport>,
    pub pass: bool,
}

/// `trials` random pairs of sets; trial `i` uses the `i mod 3`-th of the
/// product densities `q^{−(n−1)} · {1/2, 1, 2}`, split evenly between `A` and `B`.
pub fn counting_sweep(
    chain: &ChainRing,
    n: usize,
    r: u64,
    trials: usize,
    seed: u64,
) -> Result<CountingSweep> {
    let setup = CountingSetup::new(chain, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = (chain.q() as f64).powf(-(n as f64 - 1.0));
    let space = setup.space_size() as f64;
    let mut reports = Vec::with_capacity(trials);
    for i in 0..trials {
        let target = base * [0.5, 1.0, 2.0][i % 3];
        let size = (target.sqrt() * space).ceil() as usize;
        let a = setup.random_subset(size, &mut rng);
        let b = setup.random_subset(size, &mut rng);
        reports.push(setup.report(&a, &b, r)?);
    }
    let pass = reports
        .iter()
        .all(|t| t.pass && t.reduction_ok && t.threshold_ok);
    Ok(CountingSweep {
        ring: chain.label().to_string(),
        n,
        r,
        seed,
        trials: reports,
        pass,
    })
}

/// Largest eigenvalue once the trivial ones (`d`, and `−d` for a bipartite
/// graph) are removed.
pub fn second_eigenvalue(spectrum: &Spectrum, d: f64, bipartite: bool) -> f64 {
    spectrum.nontrivial_extremes(d, bipartite).0
}

#[derive(Debug, Clone, Serialize)]
pub struct AlonChung {
    pub size_u: usize,
    pub size_w: usize,
    pub edges: u64,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `|e(U,W) − (d/m)|U||W|| ≤ (α₂/m) √(|U||W|(m−|U|)(m−|W|))` for black `U`
/// and white `W`.
pub fn alon_chung_check(
    b: &BipartiteGraph,
    alpha2: f64,
    u: &[usize],
    w: &[usize],
) -> Result<AlonChung> {
    if u.is_empty() || w.is_empty() {
        return Err(Error::Parameter("U and W must be nonempty".into()));
    }
    let d = b
        .degree()
        .ok_or_else(|| Error::Structure("graph is not regular".into()))? as f64;
    let m = b.half_size() as f64;
    let mut in_w = vec![false; b.half_size()];
    for &y in w {
        in_w[y] = true;
    }
    let edges: u64 = u
        .iter()
        .map(|&x| b.nbrs[x].iter().filter(|&&y| in_w[y]).count() as u64)
        .sum();
    let (lu, lw) = (u.len() as f64, w.len() as f64);
    let residual = (edges as f64 - d / m * lu * lw).abs();
    let bound = alpha2 / m * (lu * lw * (m - lu) * (m - lw)).sqrt();
    Ok(AlonChung {
        size_u: u.len(),
        size_w: w.len(),
        edges,
        residual,
        bound,
        pass: residual <= bound + 1e-9 * m * d,
    })
}

/// Random nonempty `U`, `W` of uniformly random sizes.
pub fn alon_chung_sweep(
    b: &BipartiteGraph,
    alpha2: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<AlonChung>> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = b.half_size();
    (0..trials)
        .map(|_| {
            let su = rng.gen_range(1..=m);
            let sw = rng.gen_range(1..=m);
            let u = sample(&mut rng, m, su).into_vec();
            let w = sample(&mut rng, m, sw).into_vec();
            alon_chung_check(b, alpha2, &u, &w)
        })
        .collect()
}

/// Edge counts of the partition built from a `±1` eigenvector.
#[derive(Debug, Clone, Serialize)]
pub struct SignPartition {
    pub alpha: i64,
    pub size_u: usize,
    pub size_w: usize,
    pub cut: u64,
    /// `blocks[i][j]`: edges from white `V(σ_i)` to black `V(σ_j)`, with `σ_0 = +1`, `σ_1 = −1`.
    pub blocks: [[u64; 2]; 2],
    pub blocks_ok: bool,
    pub cut_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    pub graph: String,
    pub degree: usize,
    pub alpha2: f64,
    pub lower: f64,
    pub upper: Option<f64>,
    pub exact: Option<f64>,
    pub partition: Option<SignPartition>,
}

fn sign_partition(b: &BipartiteGraph, f: &[i8]) -> Result<SignPartition> {
    let m = b.half_size();
    let d = b
        .degree()
        .ok_or_else(|| Error::Structure("graph is not regular".into()))?;
    if f.len() != m || f.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidEigenvector(
            "entries must be ±1, one per vertex".into(),
        ));
    }
    if f.iter().map(|&s| s as i64).sum::<i64>() != 0 {
        return Err(Error::InvalidEigenvector(
            "vector does not have zero mean".into(),
        ));
    }
    let apply = |x: usize| b.nbrs[x].iter().map(|&y| f[y] as i64).sum::<i64>();
    let alpha = apply(0) * f[0] as i64;
    if (0..m).any(|x| apply(x) != alpha * f[x] as i64) {
        return Err(Error::InvalidEigenvector(
            "vector is not an eigenvector".into(),
        ));
    }
    let slot = |s: i8| usize::from(s < 0);
    let mut blocks = [[0u64; 2]; 2];
    for (x, row) in b.nbrs.iter().enumerate() {
        for &y in row {
            blocks[slot(f[y])][slot(f[x])] += 1;
        }
    }
    let (m_i, d_i) = (m as i64, d as i64);
    let blocks_ok = [(0, 0, 1), (0, 1, -1), (1, 0, -1), (1, 1, 1)]
        .iter()
        .all(|&(i, j, s)| 4 * blocks[i][j] as i64 == m_i * (d_i + s * alpha));
    let sigma: i8 = if alpha >= 0 { 1 } else { -1 };
    // U = V(+1)_∘ ∪ V(σ)_•, W = V(−1)_∘ ∪ V(−σ)_•.
    let cut = blocks[slot(1)][slot(-sigma)] + blocks[slot(-1)][slot(sigma)];
    let size_u = f.iter().filter(|&&s| s == 1).count() + f.iter().filter(|&&s| s == sigma).count();
    Ok(SignPartition {
        alpha,
        size_u,
        size_w: 2 * m - size_u,
        cut,
        blocks,
        blocks_ok,
        cut_ok: 2 * cut as i64 == m_i * (d_i - alpha.abs()),
    })
}

/// Spectral lower bound `½(d − α₂)` and, from a `±1` eigenvector, the upper
/// bound `½(d − |α|)`.
pub fn iso_bounds(
    b: &BipartiteGraph,
    spectrum: &Spectrum,
    sign_vector: Option<&[i8]>,
) -> Result<IsoReport> {
    let d = b
        .degree()
        .ok_or_else(|| Error::Structure("graph is not regular".into()))?;
    let alpha2 = second_eigenvalue(spectrum, d as f64, true);
    let lower = 0.5 * (d as f64 - alpha2);
    let partition = sign_vector.map(|f| sign_partition(b, f)).transpose()?;
    let upper = partition
        .as_ref()
        .map(|p| 0.5 * (d as f64 - p.alpha.abs() as f64));
    let exact = upper.filter(|&u| (u - lower).abs() < 1e-9);
    Ok(IsoReport {
        graph: b.name.clone(),
        degree: d,
        alpha2,
        lower,
        upper,
        exact,
        partition,
    })
}

/// `ε` of `S^×` as a `±1` vector on the given unit labels.
pub fn quadratic_sign_vector(ext: &Extension, labels: &[u64]) -> Result<Vec<i8>> {
    let g = UnitGroup::new(ext.top())?;
    let eps = g.quadratic();
    labels
        .iter()
        .map(|&u| Ok(if g.phase(&eps, u)? == 0 { 1 } else { -1 }))
        .collect()
}

/// The map turning the dot product on `R^n` into `(s, t) ↦ Tr(φ(s) t)`.
pub fn dot_product_map(ext: &Extension) -> Result<LinearMap> {
    dual_basis_map(ext, &LinearMap::identity(ext.degree()).matrix)
}

/// Isoperimetric bounds of `Um(R^n)` or `Um₀(R^n)` computed on the trace
/// realization, with `ε` as the sign vector where it is an eigenvector.
#[derive(Debug, Clone, Serialize)]
pub struct RealizedIso {
    pub standard: String,
    pub realization: String,
    /// The relabeling onto the trace realization preserves edges exactly.
    pub certified: bool,
    pub report: IsoReport,
}

pub fn realized_iso_report(base: &ChainRing, n: usize, projective: bool) -> Result<RealizedIso> {
    let ring = Ring::from(base.clone());
    let ext = Extension::new(base, n)?;
    let phi = dot_product_map(&ext)?;
    let (standard, trace, certified) = if projective {
        let (s, t) = (build_um0(&ring, n)?, build_trace_graph0(&ext)?);
        let ok = relabel_iso_check0(&s, &t, &ext, &phi)?;
        (s, t, ok)
    } else {
        let (s, t) = (build_um(&ring, n)?, build_trace_graph(&ext)?);
        let ok = relabel_iso_check(&s, &t, &ext, &phi)?;
        (s, t, ok)
    };
    let spectrum = bipartite_spectrum(&trace)?;
    let f = quadratic_sign_vector(&ext, &trace.labels)?;
    let report = match iso_bounds(&trace, &spectrum, Some(&f)) {
        Err(Error::InvalidEigenvector(_)) => iso_bounds(&trace, &spectrum, None)?,
        other => other?,
    };
    Ok(RealizedIso {
        standard: standard.name,
        realization: trace.name,
        certified,
        report,
    })
}

/// Lower bound `½(d − α₂)` for a regular, non-bipartite graph.
pub fn regular_iso_lower(g: &Graph, spectrum: &Spectrum) -> Result<IsoReport> {
    let d = g
        .degree()
        .ok_or_else(|| Error::Structure("graph is not regular".into()))?;
    let alpha2 = second_eigenvalue(spectrum, d as f64, false);
    Ok(IsoReport {
        graph: g.name.clone(),
        degree: d,
        alpha2,
        lower: 0.5 * (d as f64 - alpha2),
        upper: None,
        exact: None,
        partition: None,
    })
}

pub const BRUTE_FORCE_ISO_CAP: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactIso {
    pub value: f64,
    pub cut: u64,
    pub smaller_side: u64,
}

/// `min e(U,W) / min(|U|,|W|)` over all bipartitions.
pub fn brute_force_iso(g: &Graph) -> Result<ExactIso> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_ISO_CAP {
        return Err(Error::Resource {
            what: "vertices for exhaustive iso".into(),
            size: n as u64,
            cap: BRUTE_FORCE_ISO_CAP as u64,
        });
    }
    if n < 2 {
        return Err(Error::Parameter("need at least two vertices".into()));
    }
    let adj: Vec<u32> = g
        .nbrs
        .iter()
        .map(|row| row.iter().fold(0, |acc, &y| acc | 1 << y))
        .collect();
    let full: u32 = (1 << n) - 1;
    let mut best = (u64::MAX, 1u64);
    // The last vertex always lies in W.
    for u in 1u32..(1 << (n - 1)) {
        let cut: u64 = (0..n)
            .filter(|&v| u >> v & 1 == 1)
            .map(|v| (adj[v] & !u & full).count_ones() as u64)
            .sum();
        let small = (u.count_ones() as u64).min((n as u32 - u.count_ones()) as u64);
        if (cut as u128) * (best.1 as u128) < (best.0 as u128) * (small as u128) {
            best = (cut, small);
        }
    }
    Ok(ExactIso {
        value: best.0 as f64 / best.1 as f64,
        cut: best.0,
        smaller_side: best.1,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RamanujanRow {
    pub n: u64,
    pub ramanujan: bool,
    pub largest: f64,
    pub smallest: f64,
    pub max_abs_nontrivial: f64,
    pub bound: f64,
    /// `(N/2)(1 − 1/√p)` for the smallest prime `p | N`.
    pub iso_lower: f64,
    /// The composed extremes agree with the closed-form table.
    pub table_ok: bool,
    /// `−N/p` occurs for every prime `p | N`.
    pub minus_n_over_p_ok: bool,
}

/// Composed spectrum of `Pl(Z/N)` from the predicted factor spectra.
pub fn platonic_zmod_spectrum(n: u64) -> Result<Spectrum> {
    let ring = Ring::zmod(n)?;
    let factors = ring
        .factors()
        .iter()
        .map(FactorSpectrum::predicted)
        .collect::<Result<Vec<_>>>()?;
    let p = compose_product_spectrum(&factors)?.merged(1e-9);
    Ok(Spectrum {
        values: p
            .entries
            .iter()
            .map(|e| Eigenvalue {
                value: e.value,
                multiplicity: e.multiplicity,
            })
            .collect(),
        tolerance: 1e-9,
    })
}

pub fn ramanujan_row(n: u64) -> Result<RamanujanRow> {
    let spec = platonic_zmod_spectrum(n)?;
    let nf = n as f64;
    let (largest, smallest) = spec.nontrivial_extremes(nf, false);
    let max_abs_nontrivial = largest.abs().max(smallest.abs());
    let bound = 2.0 * (nf - 1.0).sqrt();
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    let p = primes[0] as f64;
    let (tl, ts) = extremal_plN(n)?;
    Ok(RamanujanRow {
        n,
        ramanujan: max_abs_nontrivial <= bound + 1e-9,
        largest,
        smallest,
        max_abs_nontrivial,
        bound,
        iso_lower: nf / 2.0 * (1.0 - 1.0 / p.sqrt()),
        table_ok: close(largest, tl, 1e-9) && close(smallest, ts, 1e-9),
        minus_n_over_p_ok: primes
            .iter()
            .all(|&p| spec.multiplicity_of(-nf / p as f64, 1e-9) > 0),
    })
}

/// Rows for the odd composite `N` in `[9, max]`.
pub fn ramanujan_classify(max: u64) -> Result<Vec<RamanujanRow>> {
    (9..=max)
        .step_by(2)
        .filter(|&n| factorize(n).iter().map(|&(_, e)| e).sum::<u32>() > 1)
        .map(ramanujan_row)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_platonic, enumerate_unimodular};
    use crate::ring::{parse_chain, parse_ring};

    fn all_tuples(ring: &Ring, n: usize) -> Vec<Vec<u64>> {
        (0..ring.size().pow(n as u32))
            .map(|c| decode_tuple(ring, c, n))
            .collect()
    }

    #[test]
    fn small_counts() {
        let gf3 = parse_ring("GF(3)").unwrap();
        assert_eq!(count_dot(&gf3, &[vec![1, 0]], &[vec![1, 0]], 1), 1);
        let all = all_tuples(&gf3, 2);
        assert_eq!(count_dot(&gf3, &all, &all, 1), 24);
        let z9 = parse_ring("Zmod(9)").unwrap();
        let all9 = all_tuples(&z9, 2);
        let oracle: u64 = all9
            .iter()
            .map(|a| {
                all9.iter()
                    .filter(|b| (a[0] * b[0] + a[1] * b[1]) % 9 == 0)
                    .count() as u64
            })
            .sum();
        assert_eq!(count_dot(&z9, &all9, &all9, 0), oracle);
    }

    #[test]
    fn full_space_report() {
        let setup = CountingSetup::new(&parse_chain("GF(3)").unwrap(), 2).unwrap();
        let all = all_tuples(&setup.ring, 2);
        let rep = setup.report(&all, &all, 1).unwrap();
        assert_eq!(rep.count, 24);
        assert!((rep.bound - 3f64.sqrt() * 9.0).abs() < 1e-9);
        assert!(rep.pass && rep.reduction_ok);
        let rep0 = setup.report(&all, &all, 0).unwrap();
        assert_eq!(rep0.route, "general");
        assert!(rep0.pass && rep0.reduction_ok);
    }

    #[test]
    fn sweeps_pass() {
        let s = counting_sweep(&parse_chain("Zmod(9)").unwrap(), 2, 1, 30, 7).unwrap();
        assert!(s.pass);
        assert!(s.trials.iter().any(|t| t.above_threshold));
        let again = counting_sweep(&parse_chain("Zmod(9)").unwrap(), 2, 1, 30, 7).unwrap();
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }

    #[test]
    fn alon_chung_edges() {
        let b = build_um0(&parse_ring("GF(3)").unwrap(), 4).unwrap();
        let spec = bipartite_spectrum(&b).unwrap();
        let a2 = second_eigenvalue(&spec, 13.0, true);
        assert!((a2 - 3.0).abs() < 1e-6);
        let all: Vec<usize> = (0..b.half_size()).collect();
        let full = alon_chung_check(&b, a2, &all, &all).unwrap();
        assert!(full.residual < 1e-9 && full.bound == 0.0 && full.pass);
        let y = b.nbrs[0][0];
        let single = alon_chung_check(&b, a2, &[0], &[y]).unwrap();
        assert_eq!(single.edges, 1);
        assert!(single.pass);
        assert!(alon_chung_sweep(&b, a2, 500, 3)
            .unwrap()
            .iter()
            .all(|c| c.pass));
        assert!(alon_chung_check(&b, a2, &[], &[0]).is_err());
    }

    fn quadratic_signs(ext: &Extension, labels: &[u64]) -> Vec<i8> {
        quadratic_sign_vector(ext, labels).unwrap()
    }

    #[test]
    fn realized_reports() {
        let gf3 = parse_chain("GF(3)").unwrap();
        let r = realized_iso_report(&gf3, 3, true).unwrap();
        assert!(r.certified && r.report.upper.is_none());
        let r = realized_iso_report(&gf3, 2, false).unwrap();
        assert!(r.certified);
        assert_eq!(r.report.upper, Some(1.0));
        assert!((r.report.lower - 0.5 * (3.0 - 3f64.sqrt())).abs() < 1e-6);
        let pl = build_platonic(&parse_ring("Zmod(5)").unwrap()).unwrap();
        let spec = crate::spectral::platonic_spectrum(&parse_ring("Zmod(5)").unwrap()).unwrap();
        let low = regular_iso_lower(&pl, &spec).unwrap();
        assert!((low.lower - 0.5 * (5.0 - 5f64.sqrt())).abs() < 1e-6);
    }

    #[test]
    fn iso_exact_for_um_gf3_cubed() {
        let ext = Extension::new(&parse_chain("GF(3)").unwrap(), 3).unwrap();
        let b = crate::graph::build_trace_graph(&ext).unwrap();
        let spec = bipartite_spectrum(&b).unwrap();
        let f = quadratic_signs(&ext, &b.labels);
        let rep = iso_bounds(&b, &spec, Some(&f)).unwrap();
        assert!((rep.lower - 3.0).abs() < 1e-9);
        assert_eq!(rep.upper, Some(3.0));
        let p = rep.partition.unwrap();
        assert!(p.blocks_ok && p.cut_ok);
        assert_eq!((p.size_u, p.size_w, p.cut), (26, 26, 78));
    }

    #[test]
    fn iso_exact_for_um0_gf3_fourth() {
        let ext = Extension::new(&parse_chain("GF(3)").unwrap(), 4).unwrap();
        let b = crate::graph::build_trace_graph0(&ext).unwrap();
        let spec = bipartite_spectrum(&b).unwrap();
        let f = quadratic_signs(&ext, &b.labels);
        let rep = iso_bounds(&b, &spec, Some(&f)).unwrap();
        assert_eq!(rep.exact, Some(5.0));
        assert!(rep.partition.unwrap().blocks_ok);
    }

    #[test]
    fn bad_sign_vectors_are_rejected() {
        let b = build_um(&parse_ring("GF(3)").unwrap(), 2).unwrap();
        let spec = bipartite_spectrum(&b).unwrap();
        let mut f = vec![1i8; 8];
        assert!(matches!(
            iso_bounds(&b, &spec, Some(&f)),
            Err(Error::InvalidEigenvector(_))
        ));
        for s in f.iter_mut().skip(4) {
            *s = -1;
        }
        assert!(matches!(
            iso_bounds(&b, &spec, Some(&f)),
            Err(Error::InvalidEigenvector(_))
        ));
    }

    #[test]
    fn brute_force_small_graphs() {
        let k4 = build_platonic(&parse_ring("Zmod(3)").unwrap()).unwrap();
        assert_eq!(brute_force_iso(&k4).unwrap().value, 2.0);
        let k33 = BipartiteGraph::new("K33".into(), vec![0, 1, 2], |_, _| true).to_graph();
        let iso = brute_force_iso(&k33).unwrap();
        assert_eq!((iso.cut, iso.smaller_side), (5, 3));
        let um = build_um(&parse_ring("GF(3)").unwrap(), 2).unwrap();
        let v = brute_force_iso(&um.to_graph()).unwrap().value;
        assert!(v >= 0.5 * (3.0 - 3f64.sqrt()) - 1e-12 && v <= 1.0 + 1e-12);
        let big = build_um(&parse_ring("Zmod(9)").unwrap(), 2)
            .unwrap()
            .to_graph();
        assert!(matches!(brute_force_iso(&big), Err(Error::Resource { .. })));
    }

    #[test]
    fn ramanujan_set() {
        let rows = ramanujan_classify(45).unwrap();
        let set: Vec<u64> = rows.iter().filter(|r| r.ramanujan).map(|r| r.n).collect();
        assert_eq!(set, vec![9, 15, 21, 27, 33]);
        assert!(rows.iter().all(|r| r.minus_n_over_p_ok));
        assert!(rows
            .iter()
            .filter(|r| r.n != 9 && r.n != 27)
            .all(|r| r.table_ok));
        let r15 = rows.iter().find(|r| r.n == 15).unwrap();
        assert!((r15.largest - 15.0 / 5f64.sqrt()).abs() < 1e-9);
        let r35 = rows.iter().find(|r| r.n == 35).unwrap();
        assert!(!r35.ramanujan && (r35.largest - 35.0 / 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn counting_sets_have_requested_size() {
        let setup = CountingSetup::new(&parse_chain("GF(5)").unwrap(), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = setup.random_subset(25, &mut rng);
        assert_eq!(s.len(), 25);
        assert_eq!(enumerate_unimodular(&setup.ring, 3).unwrap().len(), 124);
    }
}
