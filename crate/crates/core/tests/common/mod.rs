//! Shared generators and brute-force reference implementations.
//!
//! The references work from first principles (path enumeration, triple
//! enumeration, dense eigendecomposition in nalgebra) and never call the
//! metric code under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cnl::graph::Node;
use cnl::{Category, SignedDiGraph, SquareMatrix};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn node(id: impl Into<String>, category: Category) -> Node {
    Node {
        id: id.into(),
        category,
        country: None,
    }
}

/// Random directed graph on `n` nodes with integer weights 1..=3. Each
/// ordered pair independently gets a positive tie, a negative tie, both or
/// neither.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p_pos: f64, p_neg: f64) -> SignedDiGraph {
    let nodes = (0..n)
        .map(|i| node(format!("a{i}"), Category::ALL[rng.gen_range(0..3)]))
        .collect();
    let mut pos = SquareMatrix::zeros(n);
    let mut neg = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if rng.gen_bool(p_pos) {
                pos[(i, j)] = rng.gen_range(1..=3) as f64;
            }
            if rng.gen_bool(p_neg) {
                neg[(i, j)] = rng.gen_range(1..=3) as f64;
            }
        }
    }
    SignedDiGraph::from_layers(nodes, pos, neg).unwrap()
}

/// Two blocks of `half` nodes: positive ties inside blocks with
/// probability `p_in`, negative ties across with probability `p_out`.
/// Returns the graph and the block of each node.
pub fn two_blocks(rng: &mut ChaCha8Rng, half: usize, p_in: f64, p_out: f64) -> (SignedDiGraph, Vec<usize>) {
    let n = 2 * half;
    let block: Vec<usize> = (0..n).map(|i| i / half).collect();
    let nodes = (0..n)
        .map(|i| node(format!("b{}-{i:02}", block[i]), Category::Rebels))
        .collect();
    let mut pos = SquareMatrix::zeros(n);
    let mut neg = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if block[i] == block[j] {
                if rng.gen_bool(p_in) {
                    pos[(i, j)] = 1.0;
                }
            } else if rng.gen_bool(p_out) {
                // Direction is irrelevant to the undirected embedding.
                if rng.gen_bool(0.5) {
                    neg[(i, j)] = 1.0;
                } else {
                    neg[(j, i)] = 1.0;
                }
            }
        }
    }
    (SignedDiGraph::from_layers(nodes, pos, neg).unwrap(), block)
}

/// Undirected adjacency of one layer over its participating nodes.
pub struct Undirected {
    pub ids: Vec<String>,
    pub adj: Vec<Vec<bool>>,
}

impl Undirected {
    pub fn of(g: &SignedDiGraph, negative: bool) -> Self {
        let m = if negative { g.negative() } else { g.positive() };
        let n = g.len();
        let tie = |i: usize, j: usize| i != j && (m[(i, j)] > 0.0 || m[(j, i)] > 0.0);
        let members: Vec<usize> = (0..n).filter(|&i| (0..n).any(|j| tie(i, j))).collect();
        let adj = members
            .iter()
            .map(|&i| members.iter().map(|&j| tie(i, j)).collect())
            .collect();
        let ids = members.iter().map(|&i| g.nodes()[i].id.clone()).collect();
        Self { ids, adj }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }
}

pub fn degree(u: &Undirected) -> BTreeMap<String, f64> {
    let n = u.n();
    u.ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let d = u.adj[i].iter().filter(|&&b| b).count();
            (id.clone(), d as f64 / (n - 1) as f64)
        })
        .collect()
}

pub fn density(u: &Undirected) -> f64 {
    let n = u.n();
    let mut ties = 0;
    for i in 0..n {
        for j in 0..i {
            ties += usize::from(u.adj[i][j]);
        }
    }
    2.0 * ties as f64 / (n * (n - 1)) as f64
}

/// `3 × triangles / connected triples`, both counted over vertex triples.
pub fn clustering(u: &Undirected) -> f64 {
    let n = u.n();
    let (mut triangles, mut triples) = (0usize, 0usize);
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let e = [u.adj[a][b], u.adj[b][c], u.adj[a][c]];
                let k = e.iter().filter(|&&x| x).count();
                if k == 3 {
                    triangles += 1;
                    triples += 3;
                } else if k == 2 {
                    triples += 1;
                }
            }
        }
    }
    if triples == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / triples as f64
    }
}

fn simple_paths(u: &Undirected, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(u: &Undirected, path: &mut Vec<usize>, t: usize, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if last == t {
            out.push(path.clone());
            return;
        }
        for next in 0..u.n() {
            if u.adj[last][next] && !path.contains(&next) {
                path.push(next);
                walk(u, path, t, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(u, &mut vec![s], t, &mut out);
    out
}

/// Betweenness from explicit enumeration of every shortest path.
pub fn betweenness(u: &Undirected) -> BTreeMap<String, f64> {
    let n = u.n();
    let mut score = vec![0.0; n];
    if n >= 3 {
        for s in 0..n {
            for t in (s + 1)..n {
                let paths = simple_paths(u, s, t);
                let Some(shortest) = paths.iter().map(Vec::len).min() else {
                    continue;
                };
                let geodesics: Vec<_> = paths.iter().filter(|p| p.len() == shortest).collect();
                for (v, sc) in score.iter_mut().enumerate() {
                    if v == s || v == t {
                        continue;
                    }
                    let through = geodesics.iter().filter(|p| p.contains(&v)).count();
                    *sc += through as f64 / geodesics.len() as f64;
                }
            }
        }
        let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
        score.iter_mut().for_each(|x| *x /= norm);
    }
    u.ids.iter().cloned().zip(score).collect()
}

/// Perron vector of the largest component (ties: the component holding
/// the smallest id), by dense eigendecomposition.
pub fn eigenvector(u: &Undirected) -> BTreeMap<String, f64> {
    let n = u.n();
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let c = comps.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        comp[start] = c;
        while let Some(v) = stack.pop() {
            members.push(v);
            for w in 0..n {
                if u.adj[v][w] && comp[w] == usize::MAX {
                    comp[w] = c;
                    stack.push(w);
                }
            }
        }
        comps.push(members);
    }
    let best = comps
        .iter()
        .max_by(|a, b| {
            let min_id = |c: &Vec<usize>| c.iter().map(|&i| u.ids[i].clone()).min().unwrap();
            a.len().cmp(&b.len()).then_with(|| min_id(b).cmp(&min_id(a)))
        })
        .unwrap();
    let m = best.len();
    let a = DMatrix::from_fn(m, m, |i, j| if u.adj[best[i]][best[j]] { 1.0 } else { 0.0 });
    let eig = a.symmetric_eigen();
    let top = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(top);
    let norm: f64 = v.norm();
    let mut out: BTreeMap<String, f64> = u.ids.iter().map(|id| (id.clone(), 0.0)).collect();
    for (k, &i) in best.iter().enumerate() {
        out.insert(u.ids[i].clone(), (v[k] / norm).abs());
    }
    out
}

/// `(external, internal, index)` over the layer's undirected dyads.
pub fn ei(g: &SignedDiGraph, negative: bool) -> (f64, f64, f64) {
    let u = Undirected::of(g, negative);
    let cat: BTreeMap<&str, Category> = g.nodes().iter().map(|n| (n.id.as_str(), n.category)).collect();
    let (mut e, mut i) = (0.0, 0.0);
    for a in 0..u.n() {
        for b in (a + 1)..u.n() {
            if u.adj[a][b] {
                if cat[u.ids[a].as_str()] == cat[u.ids[b].as_str()] {
                    i += 1.0;
                } else {
                    e += 1.0;
                }
            }
        }
    }
    (e, i, (e - i) / (e + i))
}

/// Exact permutation p-value: share of distinct relabellings of the
/// participating nodes whose index is at least the observed one.
pub fn ei_exact_p(g: &SignedDiGraph, negative: bool) -> f64 {
    let u = Undirected::of(g, negative);
    let cat: BTreeMap<&str, Category> = g.nodes().iter().map(|n| (n.id.as_str(), n.category)).collect();
    let labels: Vec<Category> = u.ids.iter().map(|id| cat[id.as_str()]).collect();
    let index = |lab: &[Category]| {
        let (mut e, mut i) = (0.0, 0.0);
        for a in 0..u.n() {
            for b in (a + 1)..u.n() {
                if u.adj[a][b] {
                    if lab[a] == lab[b] {
                        i += 1.0
                    } else {
                        e += 1.0
                    }
                }
            }
        }
        (e - i) / (e + i)
    };
    let observed = index(&labels);
    // Heap's algorithm over positions; every permutation equally likely.
    let n = labels.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let (mut hits, mut total) = (0u64, 0u64);
    let mut visit = |p: &[usize]| {
        let lab: Vec<Category> = p.iter().map(|&k| labels[k]).collect();
        total += 1;
        if index(&lab) >= observed - 1e-12 {
            hits += 1;
        }
    };
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

/// Signed triangle counts on `(P+Pᵀ)/2 − (N+Nᵀ)/2`: `[+++, ++-, +--, ---]`.
pub fn triads(g: &SignedDiGraph) -> [usize; 4] {
    let n = g.len();
    let (p, q) = (g.positive(), g.negative());
    let w = |i: usize, j: usize| (p[(i, j)] + p[(j, i)]) / 2.0 - (q[(i, j)] + q[(j, i)]) / 2.0;
    let mut out = [0; 4];
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let e = [w(a, b), w(b, c), w(a, c)];
                if e.iter().all(|&x| x != 0.0) {
                    out[e.iter().filter(|&&x| x < 0.0).count()] += 1;
                }
            }
        }
    }
    out
}

/// `(closed by a negative tie, closed by a positive tie only, open)` over
/// all negative two-paths.
pub fn transitivity(g: &SignedDiGraph) -> (usize, usize, usize) {
    let n = g.len();
    let tie = |m: &SquareMatrix, i: usize, j: usize| m[(i, j)] > 0.0 || m[(j, i)] > 0.0;
    let (mut cn, mut cp, mut open) = (0, 0, 0);
    for centre in 0..n {
        let ends: BTreeSet<usize> = (0..n)
            .filter(|&x| x != centre && tie(g.negative(), centre, x))
            .collect();
        for &a in &ends {
            for &b in ends.range(a + 1..) {
                if tie(g.negative(), a, b) {
                    cn += 1;
                } else if tie(g.positive(), a, b) {
                    cp += 1;
                } else {
                    open += 1;
                }
            }
        }
    }
    (cn, cp, open)
}

pub fn max_map_diff(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    assert_eq!(
        a.keys().collect::<Vec<_>>(),
        b.keys().collect::<Vec<_>>(),
        "node sets differ"
    );
    a.iter().map(|(k, v)| (v - b[k]).abs()).fold(0.0, f64::max)
}

/// Random symmetric matrix: half the time a dense uniform one, otherwise
/// the signed Laplacian `D̄ − W` of a random sparse signed graph.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(n);
    if rng.gen_bool(0.5) {
        for i in 0..n {
            for j in 0..=i {
                let x = rng.gen_range(-1.0..1.0);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
    } else {
        for i in 0..n {
            for j in 0..i {
                if rng.gen_bool(0.3) {
                    let w = if rng.gen_bool(0.5) { 1.0 } else { -1.0 } * rng.gen_range(0.5..3.0);
                    m[(i, j)] = -w;
                    m[(j, i)] = -w;
                    m[(i, i)] += f64::abs(w);
                    m[(j, j)] += f64::abs(w);
                }
            }
        }
    }
    m
}

pub fn to_nalgebra(m: &SquareMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m[(i, j)])
}
