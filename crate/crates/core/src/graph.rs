//! Unimodular graphs `Um(R^n)`, `Um₀(R^n)`, trace graphs of extensions, and
//! Platonic graphs, with breadth-first structural statistics.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Extension, LinearMap, Ring, Subset, DEFAULT_ENUMERATION_CAP};

/// Code of a tuple: `Σ a_i |R|^i`.
pub fn encode_tuple(ring: &Ring, a: &[u64]) -> u64 {
    a.iter().rev().fold(0, |acc, &x| acc * ring.size() + x)
}

pub fn decode_tuple(ring: &Ring, code: u64, n: usize) -> Vec<u64> {
    let mut v = code;
    (0..n)
        .map(|_| {
            let x = v % ring.size();
            v /= ring.size();
            x
        })
        .collect()
}

pub fn dot(ring: &Ring, a: &[u64], b: &[u64]) -> u64 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| ring.add(acc, ring.mul(x, y)))
}

/// Some coordinate is a unit in every factor.
pub fn is_unimodular(ring: &Ring, a: &[u64]) -> bool {
    let parts: Vec<Vec<u64>> = a.iter().map(|&x| ring.split(x)).collect();
    ring.factors()
        .iter()
        .enumerate()
        .all(|(i, f)| parts.iter().any(|p| f.is_unit(p[i])))
}

fn tuple_space_size(ring: &Ring, n: usize) -> Result<u64> {
    let size = (ring.size() as u128).pow(n as u32);
    if size > DEFAULT_ENUMERATION_CAP as u128 {
        return Err(Error::Resource {
            what: format!("tuples in {}^{n}", ring),
            size: size.min(u64::MAX as u128) as u64,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    Ok(size as u64)
}

/// Unimodular tuples of `R^n`, in increasing code order.
pub fn enumerate_unimodular(ring: &Ring, n: usize) -> Result<Vec<Vec<u64>>> {
    let total = tuple_space_size(ring, n)?;
    Ok((0..total)
        .map(|c| decode_tuple(ring, c, n))
        .filter(|a| is_unimodular(ring, a))
        .collect())
}

/// Representative of `a R^×` whose first unit coordinate is 1 (factor by factor).
pub fn projective_canonical(ring: &Ring, a: &[u64]) -> Result<Vec<u64>> {
    let parts: Vec<Vec<u64>> = a.iter().map(|&x| ring.split(x)).collect();
    let mut scale = Vec::with_capacity(ring.factors().len());
    for (i, f) in ring.factors().iter().enumerate() {
        let u = parts
            .iter()
            .map(|p| p[i])
            .find(|&c| f.is_unit(c))
            .ok_or_else(|| Error::Parameter("tuple is not unimodular".into()))?;
        scale.push(f.inverse(u)?);
    }
    let s = ring.join(&scale);
    Ok(a.iter().map(|&x| ring.mul(x, s)).collect())
}

/// Canonical representatives of `R^{n,u} / R^×`, in increasing code order.
pub fn projective_classes(ring: &Ring, n: usize) -> Result<Vec<Vec<u64>>> {
    let mut reps: Vec<Vec<u64>> = enumerate_unimodular(ring, n)?
        .into_iter()
        .filter(|a| {
            projective_canonical(ring, a)
                .map(|c| &c == a)
                .unwrap_or(false)
        })
        .collect();
    reps.sort_by_key(|a| encode_tuple(ring, a));
    Ok(reps)
}

/// A bipartite graph on two copies of one labeled vertex set; `nbrs[x]` lists
/// the white vertices adjacent to black `x`.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    pub name: String,
    pub labels: Vec<u64>,
    pub nbrs: Vec<Vec<usize>>,
    index: HashMap<u64, usize>,
}

impl BipartiteGraph {
    pub fn new(name: String, labels: Vec<u64>, adjacent: impl Fn(usize, usize) -> bool) -> Self {
        let m = labels.len();
        let nbrs = (0..m)
            .map(|x| (0..m).filter(|&y| adjacent(x, y)).collect())
            .collect();
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        BipartiteGraph {
            name,
            labels,
            nbrs,
            index,
        }
    }

    pub fn half_size(&self) -> usize {
        self.labels.len()
    }

    /// Common degree of all vertices, if the graph is biregular.
    pub fn degree(&self) -> Option<usize> {
        let d = self.nbrs.first().map_or(0, |r| r.len());
        let mut col = vec![0usize; self.half_size()];
        for row in &self.nbrs {
            for &y in row {
                col[y] += 1;
            }
        }
        (self.nbrs.iter().all(|r| r.len() == d) && col.iter().all(|&c| c == d)).then_some(d)
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.nbrs[x].binary_search(&y).is_ok()
    }

    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.iter().map(Vec::len).sum()
    }

    /// Reduced adjacency matrix `A[x][y] = [x_• ~ y_∘]`.
    pub fn reduced_matrix(&self) -> Vec<Vec<f64>> {
        let m = self.half_size();
        self.nbrs
            .iter()
            .map(|row| {
                let mut r = vec![0.0; m];
                for &y in row {
                    r[y] = 1.0;
                }
                r
            })
            .collect()
    }

    /// The full graph: black `x` is vertex `x`, white `y` is vertex `m + y`.
    pub fn to_graph(&self) -> Graph {
        let m = self.half_size();
        let mut nbrs = vec![Vec::new(); 2 * m];
        for (x, row) in self.nbrs.iter().enumerate() {
            for &y in row {
                nbrs[x].push(m + y);
                nbrs[m + y].push(x);
            }
        }
        for r in &mut nbrs {
            r.sort_unstable();
        }
        let labels = self.labels.iter().chain(&self.labels).copied().collect();
        Graph {
            name: self.name.clone(),
            labels,
            nbrs,
        }
    }

    pub fn edge_list(&self) -> EdgeList {
        let edges = self
            .nbrs
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |&y| (x, y)))
            .map(|(x, y)| (self.labels[x], self.labels[y]))
            .collect();
        EdgeList {
            vertices: 2 * self.half_size(),
            degree: self.degree().unwrap_or(0),
            edges,
        }
    }
}

/// A simple undirected graph with sorted neighbor lists.
#[derive(Debug, Clone)]
pub struct Graph {
    pub name: String,
    pub labels: Vec<u64>,
    pub nbrs: Vec<Vec<usize>>,
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self) -> Option<usize> {
        let d = self.nbrs.first().map_or(0, |r| r.len());
        self.nbrs.iter().all(|r| r.len() == d).then_some(d)
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.nbrs[x].binary_search(&y).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.vertex_count();
        self.nbrs
            .iter()
            .map(|row| {
                let mut r = vec![0.0; n];
                for &y in row {
                    r[y] = 1.0;
                }
                r
            })
            .collect()
    }

    pub fn edge_list(&self) -> EdgeList {
        let mut edges = Vec::new();
        for (x, row) in self.nbrs.iter().enumerate() {
            for &y in row.iter().filter(|&&y| y > x) {
                edges.push((self.labels[x], self.labels[y]));
            }
        }
        EdgeList {
            vertices: self.vertex_count(),
            degree: self.degree().unwrap_or(0),
            edges,
        }
    }

    fn bfs(&self, s: usize) -> (Vec<usize>, usize) {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut parent = vec![usize::MAX; self.vertex_count()];
        let mut girth = usize::MAX;
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.nbrs[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    girth = girth.min(dist[u] + dist[w] + 1);
                }
            }
        }
        (dist, girth)
    }

    /// Connectivity, degree, diameter, and girth by a breadth-first search from every vertex.
    pub fn stats(&self) -> GraphStats {
        let mut diameter = 0;
        let mut girth = usize::MAX;
        let mut connected = true;
        let mut eccentricities = Vec::with_capacity(self.vertex_count());
        for s in 0..self.vertex_count() {
            let (dist, g) = self.bfs(s);
            girth = girth.min(g);
            let ecc = dist.iter().copied().max().unwrap_or(0);
            if ecc == usize::MAX {
                connected = false;
            }
            eccentricities.push(ecc);
            diameter = diameter.max(ecc);
        }
        let uniform = eccentricities.windows(2).all(|w| w[0] == w[1]);
        GraphStats {
            vertices: self.vertex_count(),
            degree: self.degree(),
            connected,
            diameter: connected.then_some(diameter),
            girth: (girth != usize::MAX).then_some(girth),
            uniform_eccentricity: uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub vertices: usize,
    pub degree: Option<usize>,
    pub connected: bool,
    pub diameter: Option<usize>,
    pub girth: Option<usize>,
    /// Every vertex has the same eccentricity.
    pub uniform_eccentricity: bool,
}

/// Plain edge list with a `# vertices <count> degree <d>` header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub vertices: usize,
    pub degree: usize,
    pub edges: Vec<(u64, u64)>,
}

impl EdgeList {
    pub fn to_text(&self) -> String {
        let mut out = format!("# vertices {} degree {}\n", self.vertices, self.degree);
        for (u, v) in &self.edges {
            writeln!(out, "{u} {v}").expect("writing to a string");
        }
        out
    }

    pub fn parse(text: &str) -> Result<EdgeList> {
        let bad = |line: &str| Error::Parse(line.to_string());
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad(""))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (vertices, degree) = match fields[..] {
            ["#", "vertices", v, "degree", d] => (
                v.parse().map_err(|_| bad(header))?,
                d.parse().map_err(|_| bad(header))?,
            ),
            _ => return Err(bad(header)),
        };
        let edges = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let mut it = l.split_whitespace().map(str::parse::<u64>);
                match (it.next(), it.next(), it.next()) {
                    (Some(Ok(u)), Some(Ok(v)), None) => Ok((u, v)),
                    _ => Err(bad(l)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgeList {
            vertices,
            degree,
            edges,
        })
    }
}

/// `Um(R^n)`: `a_• ~ b_∘` iff `a·b = 1`.
pub fn build_um(ring: &Ring, n: usize) -> Result<BipartiteGraph> {
    if n < 2 {
        return Err(Error::Parameter("Um needs n >= 2".into()));
    }
    let tuples = enumerate_unimodular(ring, n)?;
    let labels = tuples.iter().map(|a| encode_tuple(ring, a)).collect();
    let one = ring.one();
    Ok(BipartiteGraph::new(
        format!("Um({ring}^{n})"),
        labels,
        |x, y| dot(ring, &tuples[x], &tuples[y]) == one,
    ))
}

/// `Um₀(R^n)` on projective classes: `[a]_• ~ [b]_∘` iff `a·b = 0`.
pub fn build_um0(ring: &Ring, n: usize) -> Result<BipartiteGraph> {
    if n < 3 {
        return Err(Error::Parameter("Um0 needs n >= 3".into()));
    }
    let classes = projective_classes(ring, n)?;
    let labels = classes.iter().map(|a| encode_tuple(ring, a)).collect();
    Ok(BipartiteGraph::new(
        format!("Um0({ring}^{n})"),
        labels,
        |x, y| dot(ring, &classes[x], &classes[y]) == 0,
    ))
}

/// `Tr(S/R)`: vertices `S^×`, `x_• ~ y_∘` iff `Tr(xy) = 1`.
pub fn build_trace_graph(ext: &Extension) -> Result<BipartiteGraph> {
    let s = ext.top();
    let units = s.enumerate(Subset::Units)?;
    let name = format!("Tr({}/{})", s, ext.base());
    Ok(BipartiteGraph::new(name, units.clone(), |x, y| {
        ext.trace(s.mul(units[x], units[y])) == 1
    }))
}

/// Smallest code in the orbit `x R^×`.
pub fn unit_class_rep(ext: &Extension, base_units: &[u64], x: u64) -> u64 {
    base_units
        .iter()
        .map(|&u| ext.top().mul(x, ext.embed(u)))
        .min()
        .expect("R^× is nonempty")
}

/// `Tr₀(S/R)`: vertices `S^×/R^×`, `[x]_• ~ [y]_∘` iff `Tr(xy) = 0`.
pub fn build_trace_graph0(ext: &Extension) -> Result<BipartiteGraph> {
    let s = ext.top();
    let base_units = ext.base().enumerate(Subset::Units)?;
    let reps: Vec<u64> = s
        .enumerate(Subset::Units)?
        .into_iter()
        .filter(|&x| unit_class_rep(ext, &base_units, x) == x)
        .collect();
    let name = format!("Tr0({}/{})", s, ext.base());
    Ok(BipartiteGraph::new(name, reps.clone(), |x, y| {
        ext.trace(s.mul(reps[x], reps[y])) == 0
    }))
}

/// Whether relabeling the black vertices of `um` by `a ↦ φ(ι a)`, with
/// `ι(a) = Σ a_i ξ^i`, and the white ones by `b ↦ ι b`, carries its edges
/// exactly onto those of `trace`.
pub fn relabel_iso_check(
    um: &BipartiteGraph,
    trace: &BipartiteGraph,
    ext: &Extension,
    phi: &LinearMap,
) -> Result<bool> {
    relabel(um, trace, ext, phi, &|x| x)
}

/// The same check between `Um₀(R^n)` and `Tr₀(S/R)`, with every image
/// replaced by the representative of its class in `S^×/R^×`.
pub fn relabel_iso_check0(
    um0: &BipartiteGraph,
    trace0: &BipartiteGraph,
    ext: &Extension,
    phi: &LinearMap,
) -> Result<bool> {
    let base_units = ext.base().enumerate(Subset::Units)?;
    relabel(um0, trace0, ext, phi, &|x| {
        unit_class_rep(ext, &base_units, x)
    })
}

fn relabel(
    um: &BipartiteGraph,
    trace: &BipartiteGraph,
    ext: &Extension,
    phi: &LinearMap,
    canon: &dyn Fn(u64) -> u64,
) -> Result<bool> {
    if um.half_size() != trace.half_size() {
        return Err(Error::Parameter("graphs have different sizes".into()));
    }
    let ring: Ring = ext.base().clone().into();
    let n = ext.degree();
    let iota = |label: u64| ext.from_coords(&decode_tuple(&ring, label, n));
    let mut black = Vec::with_capacity(um.half_size());
    let mut white = Vec::with_capacity(um.half_size());
    for &label in &um.labels {
        let b = trace.index_of(canon(phi.apply(ext, iota(label))));
        let w = trace.index_of(canon(iota(label)));
        match (b, w) {
            (Some(b), Some(w)) => {
                black.push(b);
                white.push(w);
            }
            _ => return Ok(false),
        }
    }
    for side in [&black, &white] {
        let mut seen = vec![false; trace.half_size()];
        for &v in side.iter() {
            if std::mem::replace(&mut seen[v], true) {
                return Ok(false);
            }
        }
    }
    for x in 0..um.half_size() {
        for y in 0..um.half_size() {
            if um.adjacent(x, y) != trace.adjacent(black[x], white[y]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Connection set of `Tr(S/R)` or `Tr₀(S/R)` in `G ⋊ {±1}`, with `G = S^×`
/// or `S^×/R^×`, and the outcome of checking the Cayley graph against the trace graph.
#[derive(Debug, Clone, Serialize)]
pub struct CayleyCertificate {
    /// Codes `g` of the generators `(g, −1)`.
    pub connection_set: Vec<u64>,
    pub involutions: bool,
    pub identity_excluded: bool,
    pub edges_match: bool,
}

impl CayleyCertificate {
    pub fn verified(&self) -> bool {
        self.involutions && self.identity_excluded && self.edges_match
    }
}

/// In `G ⋊ {±1}` with `(x,ε)(y,δ) = (x y^ε, εδ)`, the generator `(g,−1)` joins
/// `(x,+1)` to `(xg,−1)`. Sending black `x` to `(x^{-1},+1)` and white `y` to
/// `(y,−1)` turns this into `Tr(xy) = c`.
fn cayley(
    graph: &BipartiteGraph,
    ext: &Extension,
    target: u64,
    canon: &dyn Fn(u64) -> u64,
) -> Result<CayleyCertificate> {
    let s = ext.top();
    let connection_set: Vec<u64> = graph
        .labels
        .iter()
        .copied()
        .filter(|&g| ext.trace(g) == target)
        .collect();
    let law = |(x, e): (u64, bool), (y, d): (u64, bool)| -> Result<(u64, bool)> {
        let y = if e { y } else { s.inverse(y)? };
        Ok((canon(s.mul(x, y)), e == d))
    };
    let identity = (canon(1), true);
    let mut involutions = true;
    let mut identity_excluded = true;
    for &g in &connection_set {
        let gen = (canon(g), false);
        involutions &= law(gen, gen)? == identity;
        identity_excluded &= gen != identity;
    }
    let mut edges_match = true;
    for (x, &label) in graph.labels.iter().enumerate() {
        let x_inv = canon(s.inverse(label)?);
        let mut cayley_nbrs: Vec<usize> = connection_set
            .iter()
            .map(|&g| {
                graph
                    .index_of(canon(s.mul(x_inv, g)))
                    .expect("closed under multiplication")
            })
            .collect();
        cayley_nbrs.sort_unstable();
        edges_match &= cayley_nbrs == graph.nbrs[x];
    }
    Ok(CayleyCertificate {
        connection_set,
        involutions,
        identity_excluded,
        edges_match,
    })
}

pub fn cayley_witness(ext: &Extension) -> Result<CayleyCertificate> {
    let graph = build_trace_graph(ext)?;
    cayley(&graph, ext, 1, &|x| x)
}

pub fn cayley_witness0(ext: &Extension) -> Result<CayleyCertificate> {
    let graph = build_trace_graph0(ext)?;
    let base_units = ext.base().enumerate(Subset::Units)?;
    cayley(&graph, ext, 0, &|x| unit_class_rep(ext, &base_units, x))
}

/// `ad − bc`.
pub fn det2(ring: &Ring, v: &[u64], w: &[u64]) -> u64 {
    ring.sub(ring.mul(v[0], w[1]), ring.mul(v[1], w[0]))
}

/// Representatives of `R^{2,u} / {±1}`: of `v` and `−v`, the one with the smaller code.
pub fn platonic_vertices(ring: &Ring) -> Result<Vec<Vec<u64>>> {
    if ring.factors().iter().any(|f| f.p() == 2) {
        return Err(Error::Unsupported(
            "Platonic graphs need 2 to be invertible".into(),
        ));
    }
    Ok(enumerate_unimodular(ring, 2)?
        .into_iter()
        .filter(|v| {
            let neg: Vec<u64> = v.iter().map(|&x| ring.neg(x)).collect();
            encode_tuple(ring, v) < encode_tuple(ring, &neg)
        })
        .collect())
}

/// `Pl(R)`: `[v] ~ [w]` iff `det(v, w) = ±1`.
pub fn build_platonic(ring: &Ring) -> Result<Graph> {
    let verts = platonic_vertices(ring)?;
    let (one, minus_one) = (ring.one(), ring.neg(ring.one()));
    let nbrs = (0..verts.len())
        .map(|x| {
            (0..verts.len())
                .filter(|&y| {
                    let d = det2(ring, &verts[x], &verts[y]);
                    d == one || d == minus_one
                })
                .collect()
        })
        .collect();
    let labels = verts.iter().map(|v| encode_tuple(ring, v)).collect();
    Ok(Graph {
        name: format!("Pl({ring})"),
        labels,
        nbrs,
    })
}

/// The odd part `D⁻` of the determinant operator on the stored representatives:
/// `D⁻[v][w] = [det(v,w) = 1] − [det(v,w) = −1]`.
pub fn platonic_odd_matrix(ring: &Ring) -> Result<Vec<Vec<f64>>> {
    let verts = platonic_vertices(ring)?;
    Ok(odd_matrix_on(ring, &verts))
}

pub fn odd_matrix_on(ring: &Ring, verts: &[Vec<u64>]) -> Vec<Vec<f64>> {
    let (one, minus_one) = (ring.one(), ring.neg(ring.one()));
    verts
        .iter()
        .map(|v| {
            verts
                .iter()
                .map(|w| {
                    let d = det2(ring, v, w);
                    if d == one {
                        1.0
                    } else if d == minus_one {
                        -1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}
