//! Two-dimensional CW complexes with full, restricted and ghost vertices.
//!
//! Edges are oriented `tail -> head`. A face is a closed walk of
//! `(edge, orientation)` steps; orientation `+1` walks tail to head. Holonomy
//! along a step `(e, +1)` is `g_e` and along `(e, -1)` is `g_e^-1`.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::code::Side;
use crate::error::{Error, Result};
use crate::words::{GroupWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VertexKind {
    Full,
    /// Gauge action restricted to the subgroup generated by these elements.
    Restricted {
        subgroup: Vec<usize>,
    },
    Ghost,
}

impl VertexKind {
    pub fn is_ghost(&self) -> bool {
        matches!(self, VertexKind::Ghost)
    }

    pub fn is_full(&self) -> bool {
        matches!(self, VertexKind::Full)
    }
}

pub type Step = (usize, i8);

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CwComplex {
    pub vertices: Vec<VertexKind>,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<Vec<Step>>,
    /// Per-edge subgroup (by generators) the edge value is confined to.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edge_constraints: BTreeMap<usize, Vec<usize>>,
}

/// Basepoint of a fundamental group presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basepoint {
    Vertex(usize),
    /// The merged point formed by these non-full vertices.
    Merged(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Presentation {
    pub generator_edges: Vec<usize>,
    /// Words over generator positions in `generator_edges`.
    pub relators: Vec<GroupWord>,
    pub basepoint: Basepoint,
}

/// Spanning forest with one tree per root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    pub roots: Vec<usize>,
    pub edges: Vec<usize>,
    pub in_forest: Vec<bool>,
    /// `(edge, parent vertex)` for every non-root vertex.
    pub parent: Vec<Option<(usize, usize)>>,
    pub root_of: Vec<usize>,
}

impl Forest {
    /// Walk from the root of `v`'s tree down to `v`.
    pub fn root_path(&self, c: &CwComplex, v: usize) -> Vec<Step> {
        let mut path = Vec::new();
        let mut x = v;
        while let Some((e, p)) = self.parent[x] {
            let (tail, _) = c.edges[e];
            // step from p to x
            path.push((e, if tail == p { 1 } else { -1 }));
            x = p;
        }
        path.reverse();
        path
    }
}

/// Result of merging all ghost vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub complex: CwComplex,
    pub vertex_map: Vec<usize>,
    /// False when there were no ghosts and the input came back unchanged.
    pub merged: bool,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

impl CwComplex {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// `(start, end)` vertex of a step.
    pub fn step_endpoints(&self, (e, o): Step) -> (usize, usize) {
        let (t, h) = self.edges[e];
        if o > 0 {
            (t, h)
        } else {
            (h, t)
        }
    }

    pub fn ghosts(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].is_ghost()).collect()
    }

    /// Vertices without a full gauge action (ghost or restricted).
    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| !self.vertices[v].is_full()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        for (i, &(t, h)) in self.edges.iter().enumerate() {
            if t >= nv || h >= nv {
                return Err(Error::InvalidComplex(format!("edge {i} has a dangling endpoint")));
            }
        }
        for (f, walk) in self.faces.iter().enumerate() {
            if walk.is_empty() {
                return Err(Error::InvalidComplex(format!("face {f} is empty")));
            }
            for (s, &(e, o)) in walk.iter().enumerate() {
                if e >= self.edges.len() || (o != 1 && o != -1) {
                    return Err(Error::InvalidComplex(format!("face {f} step {s} is malformed")));
                }
            }
            if let Some(s) = self.first_discontinuity(walk) {
                return Err(Error::InvalidComplex(format!("face {f} is discontinuous after step {s}")));
            }
        }
        for &e in self.edge_constraints.keys() {
            if e >= self.edges.len() {
                return Err(Error::InvalidComplex(format!("constraint on missing edge {e}")));
            }
        }
        Ok(())
    }

    fn first_discontinuity(&self, walk: &[Step]) -> Option<usize> {
        (0..walk.len()).find(|&s| {
            let (_, end) = self.step_endpoints(walk[s]);
            let (start, _) = self.step_endpoints(walk[(s + 1) % walk.len()]);
            end != start
        })
    }

    /// Merges all ghost vertices into one, placed at the position of the first
    /// ghost.
    pub fn quotient_ghosts(&self) -> Quotient {
        let ghosts = self.ghosts();
        if ghosts.is_empty() {
            return Quotient { complex: self.clone(), vertex_map: (0..self.vertices.len()).collect(), merged: false };
        }
        let mut vertex_map = vec![0; self.vertices.len()];
        let mut vertices = Vec::new();
        let mut merged_id = None;
        for (v, kind) in self.vertices.iter().enumerate() {
            if kind.is_ghost() {
                let id = *merged_id.get_or_insert_with(|| {
                    vertices.push(VertexKind::Ghost);
                    vertices.len() - 1
                });
                vertex_map[v] = id;
            } else {
                vertex_map[v] = vertices.len();
                vertices.push(kind.clone());
            }
        }
        let complex = CwComplex {
            vertices,
            edges: self.edges.iter().map(|&(t, h)| (vertex_map[t], vertex_map[h])).collect(),
            faces: self.faces.clone(),
            edge_constraints: self.edge_constraints.clone(),
        };
        Quotient { complex, vertex_map, merged: true }
    }

    /// Adjacency lists `(edge, neighbour)` in edge order, self-loops skipped.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            if t != h {
                adj[t].push((e, h));
                adj[h].push((e, t));
            }
        }
        adj
    }

    /// Breadth-first spanning forest rooted at the non-full vertices, or at
    /// vertex 0 when every vertex is full.
    pub fn spanning_forest(&self) -> Result<Forest> {
        let nv = self.vertices.len();
        if nv == 0 {
            return Err(Error::InvalidComplex("no vertices".into()));
        }
        let mut roots = self.boundary_vertices();
        if roots.is_empty() {
            roots.push(0);
        }
        let adj = self.adjacency();
        let mut seen = vec![false; nv];
        let mut parent = vec![None; nv];
        let mut root_of = vec![usize::MAX; nv];
        let mut queue = VecDeque::new();
        for &r in &roots {
            seen[r] = true;
            root_of[r] = r;
            queue.push_back(r);
        }
        let mut in_forest = vec![false; self.edges.len()];
        while let Some(u) = queue.pop_front() {
            for &(e, w) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((e, u));
                    root_of[w] = root_of[u];
                    in_forest[e] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Disconnected);
        }
        let edges = (0..self.edges.len()).filter(|&e| in_forest[e]).collect();
        Ok(Forest { roots, edges, in_forest, parent, root_of })
    }

    /// Presentation of the fundamental group with all non-full vertices
    /// identified to one point. Generators are the non-forest edges; each
    /// face contributes its walk with forest edges deleted, cyclically reduced.
    pub fn presentation_pi1(&self) -> Result<Pi1Presentation> {
        self.validate()?;
        let forest = self.spanning_forest()?;
        Ok(self.presentation_with(&forest))
    }

    pub(crate) fn presentation_with(&self, forest: &Forest) -> Pi1Presentation {
        let generator_edges: Vec<usize> = (0..self.edges.len()).filter(|&e| !forest.in_forest[e]).collect();
        let mut index = vec![usize::MAX; self.edges.len()];
        for (i, &e) in generator_edges.iter().enumerate() {
            index[e] = i;
        }
        let relators = self
            .faces
            .iter()
            .map(|walk| {
                GroupWord::new(
                    walk.iter()
                        .filter(|(e, _)| !forest.in_forest[*e])
                        .map(|&(e, o)| Letter::new(index[e], o))
                        .collect(),
                )
                .reduce_cyclic()
            })
            .filter(|w| !w.letters.is_empty())
            .collect();
        let basepoint = if self.vertices.iter().all(|k| k.is_full()) {
            Basepoint::Vertex(forest.roots[0])
        } else {
            Basepoint::Merged(forest.roots.clone())
        };
        Pi1Presentation { generator_edges, relators, basepoint }
    }

    /// Length of the shortest cycle of the 1-skeleton, `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        if self.edges.iter().any(|&(t, h)| t == h) {
            return Some(1);
        }
        let mut best = usize::MAX;
        let mut pairs: Vec<(usize, usize)> = self.edges.iter().map(|&(t, h)| (t.min(h), t.max(h))).collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            best = 2;
        }
        let adj = self.adjacency();
        let nv = self.vertices.len();
        let mut dist = vec![usize::MAX; nv];
        let mut via = vec![usize::MAX; nv];
        for s in 0..nv {
            if best <= 3 {
                break;
            }
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            via[s] = usize::MAX;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &(e, w) in &adj[u] {
                    if e == via[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = e;
                        queue.push_back(w);
                    } else {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Average vertex degree `2E / V`.
    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.vertices.len() as f64
    }

    /// Relabels vertices by `perm` (new index of old vertex `v` is `perm[v]`).
    pub fn relabel_vertices(&self, perm: &[usize]) -> CwComplex {
        let mut vertices = vec![VertexKind::Full; self.vertices.len()];
        for (v, k) in self.vertices.iter().enumerate() {
            vertices[perm[v]] = k.clone();
        }
        CwComplex {
            vertices,
            edges: self.edges.iter().map(|&(t, h)| (perm[t], perm[h])).collect(),
            faces: self.faces.clone(),
            edge_constraints: self.edge_constraints.clone(),
        }
    }
}

/// Merges ghost vertices wherever a face walk jumps between two of them, so
/// that every walk becomes continuous. Each class of merged ghosts lands at
/// the position of its smallest member; the merge classes depend only on the
/// set of discontinuities, not on the order they are visited.
pub fn ghost_identification(raw: &CwComplex) -> Result<CwComplex> {
    let nv = raw.vertices.len();
    let mut uf = UnionFind::new(nv);
    for (f, walk) in raw.faces.iter().enumerate() {
        for s in 0..walk.len() {
            let (_, end) = raw.step_endpoints(walk[s]);
            let (start, _) = raw.step_endpoints(walk[(s + 1) % walk.len()]);
            if end == start {
                continue;
            }
            if raw.vertices[end].is_ghost() && raw.vertices[start].is_ghost() {
                uf.union(end, start);
            } else {
                return Err(Error::InvalidComplex(format!(
                    "face {f} is discontinuous at non-ghost vertex after step {s}"
                )));
            }
        }
    }
    let mut new_index = vec![usize::MAX; nv];
    let mut vertices = Vec::new();
    for v in 0..nv {
        let r = uf.find(v);
        if r == v {
            new_index[v] = vertices.len();
            vertices.push(raw.vertices[v].clone());
        }
    }
    let map: Vec<usize> = (0..nv).map(|v| new_index[uf.find(v)]).collect();
    let out = CwComplex {
        vertices,
        edges: raw.edges.iter().map(|&(t, h)| (map[t], map[h])).collect(),
        faces: raw.faces.clone(),
        edge_constraints: raw.edge_constraints.clone(),
    };
    out.validate()?;
    Ok(out)
}

/// Raw complex from X-check slot assignments: one vertex per family, an edge
/// per qudit running from the family acting on its left to the family acting
/// on its right, and a fresh ghost for every slot no family covers. Faces
/// follow the given words and may still be discontinuous at ghosts.
pub fn raw_from_slots(
    n: usize,
    families: &[(VertexKind, Vec<(usize, Side)>)],
    faces: Vec<Vec<Step>>,
    edge_constraints: BTreeMap<usize, Vec<usize>>,
) -> Result<CwComplex> {
    let mut tail = vec![None; n];
    let mut head = vec![None; n];
    for (v, (_, actions)) in families.iter().enumerate() {
        for &(q, side) in actions {
            if q >= n {
                return Err(Error::InvalidParams(format!("qudit {q} out of range")));
            }
            let slot = match side {
                Side::Left => &mut tail[q],
                Side::Right => &mut head[q],
            };
            if slot.replace(v).is_some() {
                return Err(Error::NotQuantumDouble(format!("qudit {q} side {side:?} is in two families")));
            }
        }
    }
    let mut vertices: Vec<VertexKind> = families.iter().map(|(k, _)| k.clone()).collect();
    let mut edges = Vec::with_capacity(n);
    for q in 0..n {
        let mut fresh = |slot: Option<usize>| {
            slot.unwrap_or_else(|| {
                vertices.push(VertexKind::Ghost);
                vertices.len() - 1
            })
        };
        let t = fresh(tail[q]);
        let h = fresh(head[q]);
        edges.push((t, h));
    }
    Ok(CwComplex { vertices, edges, faces, edge_constraints })
}

/// Builder parameters, as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuildSpec {
    TorusGrid {
        k: usize,
    },
    RoughTorus {
        k: usize,
    },
    /// One vertex with `loops` self-loops; faces are signed 1-based words.
    Rose {
        loops: usize,
        faces: Vec<Vec<i64>>,
    },
    PresentationComplex {
        generators: usize,
        relators: Vec<GroupWord>,
    },
    Disk {
        r: usize,
        #[serde(default)]
        subgroups: Vec<Vec<usize>>,
    },
    Hole {
        k: usize,
        region: Vec<usize>,
        subgroup: Vec<usize>,
    },
    SsbChain {
        n: usize,
    },
    RepetitionChain {
        n: usize,
    },
    ClusterChain1d {
        n: usize,
    },
    ClusterLieb2d {
        kx: usize,
        ky: usize,
    },
}

impl BuildSpec {
    pub fn build(&self) -> Result<CwComplex> {
        match self {
            BuildSpec::TorusGrid { k } => torus_grid(*k),
            BuildSpec::RoughTorus { k } => rough_torus(*k),
            BuildSpec::Rose { loops, faces } => rose(*loops, faces),
            BuildSpec::PresentationComplex { generators, relators } => presentation_complex(*generators, relators),
            BuildSpec::Disk { r, subgroups } => disk_with_boundaries(*r, subgroups),
            BuildSpec::Hole { k, region, subgroup } => hole(*k, region, subgroup),
            BuildSpec::SsbChain { n } => ssb_chain(*n),
            BuildSpec::RepetitionChain { n } => repetition_chain(*n),
            BuildSpec::ClusterChain1d { n } => cluster_chain_1d(*n),
            BuildSpec::ClusterLieb2d { kx, ky } => cluster_lieb_2d(*kx, *ky),
        }
    }
}

/// `k x k` periodic square grid. Vertex `(i, j)` is `i + k j`; its horizontal
/// edge to `(i+1, j)` is `2(i + k j)` and its vertical edge to `(i, j+1)` is
/// `2(i + k j) + 1`. `k = 1` gives the one-vertex torus.
pub fn torus_grid(k: usize) -> Result<CwComplex> {
    if k == 0 {
        return Err(Error::InvalidParams("torus grid needs k >= 1".into()));
    }
    let v = |i: usize, j: usize| (i % k) + k * (j % k);
    let mut edges = Vec::with_capacity(2 * k * k);
    for j in 0..k {
        for i in 0..k {
            edges.push((v(i, j), v(i + 1, j)));
            edges.push((v(i, j), v(i, j + 1)));
        }
    }
    let h = |i: usize, j: usize| 2 * v(i, j);
    let vert = |i: usize, j: usize| 2 * v(i, j) + 1;
    let mut faces = Vec::with_capacity(k * k);
    for j in 0..k {
        for i in 0..k {
            faces.push(vec![(h(i, j), 1), (vert(i + 1, j), 1), (h(i, j + 1), -1), (vert(i, j), -1)]);
        }
    }
    let c = CwComplex { vertices: vec![VertexKind::Full; k * k], edges, faces, edge_constraints: BTreeMap::new() };
    c.validate()?;
    Ok(c)
}

/// [`torus_grid`] with vertex 0 turned into a ghost.
pub fn rough_torus(k: usize) -> Result<CwComplex> {
    let mut c = torus_grid(k)?;
    c.vertices[0] = VertexKind::Ghost;
    Ok(c)
}

/// One full vertex with `loops` self-loops and the given face words.
pub fn rose(loops: usize, faces: &[Vec<i64>]) -> Result<CwComplex> {
    let words = faces.iter().map(|f| GroupWord::from_signed(f)).collect::<Result<Vec<_>>>()?;
    presentation_complex(loops, &words)
}

/// Presentation complex: one vertex, a loop per generator, a face per relator.
pub fn presentation_complex(generators: usize, relators: &[GroupWord]) -> Result<CwComplex> {
    let mut faces = Vec::new();
    for w in relators {
        if w.letters.is_empty() {
            return Err(Error::InvalidParams("empty relator".into()));
        }
        if w.arity() > generators {
            return Err(Error::InvalidParams(format!("relator {w} uses more than {generators} generators")));
        }
        faces.push(w.letters.iter().map(|l| (l.var, l.exp)).collect());
    }
    let c = CwComplex {
        vertices: vec![VertexKind::Full],
        edges: vec![(0, 0); generators],
        faces,
        edge_constraints: BTreeMap::new(),
    };
    c.validate()?;
    Ok(c)
}

/// Disk with one full centre vertex and `r` boundary vertices on its rim.
/// Spoke `i` (edge `i`) runs from the centre to boundary vertex `i + 1`; rim
/// edge `r + i` runs from boundary vertex `i + 1` to the next one. Boundary
/// vertex `i + 1` is a ghost when `subgroups[i]` is empty or missing and is
/// restricted to the generated subgroup otherwise.
pub fn disk_with_boundaries(r: usize, subgroups: &[Vec<usize>]) -> Result<CwComplex> {
    if r == 0 {
        return Err(Error::InvalidParams("disk needs r >= 1".into()));
    }
    if subgroups.len() > r {
        return Err(Error::InvalidParams("more subgroups than boundaries".into()));
    }
    let mut vertices = vec![VertexKind::Full];
    for i in 0..r {
        vertices.push(match subgroups.get(i) {
            Some(h) if !h.is_empty() => VertexKind::Restricted { subgroup: h.clone() },
            _ => VertexKind::Ghost,
        });
    }
    let b = |i: usize| 1 + i % r;
    let mut edges: Vec<(usize, usize)> = (0..r).map(|i| (0, b(i))).collect();
    edges.extend((0..r).map(|i| (b(i), b(i + 1))));
    let faces = (0..r).map(|i| vec![(i, 1), (r + i, 1), ((i + 1) % r, -1)]).collect();
    let c = CwComplex { vertices, edges, faces, edge_constraints: BTreeMap::new() };
    c.validate()?;
    Ok(c)
}

/// `k x k` torus with a hole: the `region` vertices act only through the
/// subgroup `h`, edges inside the region are confined to `h`, and faces lying
/// entirely inside the region are removed.
pub fn hole(k: usize, region: &[usize], h: &[usize]) -> Result<CwComplex> {
    let mut c = torus_grid(k)?;
    let mut inside = vec![false; c.vertices.len()];
    for &v in region {
        if v >= inside.len() {
            return Err(Error::InvalidParams(format!("region vertex {v} out of range")));
        }
        inside[v] = true;
        c.vertices[v] = VertexKind::Restricted { subgroup: h.to_vec() };
    }
    for (e, &(t, hd)) in c.edges.iter().enumerate() {
        if inside[t] && inside[hd] {
            c.edge_constraints.insert(e, h.to_vec());
        }
    }
    let edges = c.edges.clone();
    c.faces.retain(|walk| !walk.iter().all(|&(e, _)| inside[edges[e].0] && inside[edges[e].1]));
    c.validate()?;
    Ok(c)
}

fn from_code_shape(n: usize, families: Vec<Vec<(usize, Side)>>, words: Vec<Vec<Step>>) -> Result<CwComplex> {
    let fams: Vec<(VertexKind, Vec<(usize, Side)>)> = families.into_iter().map(|a| (VertexKind::Full, a)).collect();
    ghost_identification(&raw_from_slots(n, &fams, words, BTreeMap::new())?)
}

fn check_even_chain(n: usize, what: &str) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("{what} needs an even n >= 4")));
    }
    Ok(())
}

/// Periodic chain whose X-checks left-multiply qudits `i, i+1` and whose
/// Z-checks read `g_i^-1 g_{i+1} g_{i+3}^-1 g_{i+2}`, for odd `i` (1-based).
pub fn ssb_chain(n: usize) -> Result<CwComplex> {
    check_even_chain(n, "ssb chain")?;
    let q = |i: usize| (i - 1) % n;
    let mut families = Vec::new();
    let mut words = Vec::new();
    for i in (1..=n).step_by(2) {
        families.push(vec![(q(i), Side::Left), (q(i + 1), Side::Left)]);
        words.push(vec![(q(i), -1), (q(i + 1), 1), (q(i + 3), -1), (q(i + 2), 1)]);
    }
    from_code_shape(n, families, words)
}

/// Chain of `n` qudits, all running from one ghost to another, with a face
/// enforcing `g_i^-1 g_{i+1} = 1` between neighbours.
pub fn repetition_chain(n: usize) -> Result<CwComplex> {
    if n == 0 {
        return Err(Error::InvalidParams("repetition chain needs n >= 1".into()));
    }
    let c = CwComplex {
        vertices: vec![VertexKind::Ghost, VertexKind::Ghost],
        edges: vec![(0, 1); n],
        faces: (0..n - 1).map(|i| vec![(i, -1), (i + 1, 1)]).collect(),
        edge_constraints: BTreeMap::new(),
    };
    c.validate()?;
    Ok(c)
}

/// Periodic 1D cluster chain: for odd `i` (1-based) the X-check acts on the
/// right of `i+1` and the left of `i+2, i+3`, and the Z-check reads
/// `g_i^-1 g_{i+1} g_{i+2}`.
pub fn cluster_chain_1d(n: usize) -> Result<CwComplex> {
    check_even_chain(n, "cluster chain")?;
    let q = |i: usize| (i - 1) % n;
    let mut families = Vec::new();
    let mut words = Vec::new();
    for i in (1..=n).step_by(2) {
        families.push(vec![(q(i + 1), Side::Right), (q(i + 2), Side::Left), (q(i + 3), Side::Left)]);
        words.push(vec![(q(i), -1), (q(i + 1), 1), (q(i + 2), 1)]);
    }
    from_code_shape(n, families, words)
}

/// Open `kx x ky` Lieb-lattice cluster state. Qudits: one per lattice vertex
/// (index `x + kx y`), then horizontal bonds, then vertical bonds. The X-check
/// at a vertex left-multiplies its own qudit and its right and lower bonds and
/// right-multiplies its left and upper bonds; each bond carries the Z-check
/// `g_a^-1 g_bond g_b` with `a` left of (or above) `b`.
pub fn cluster_lieb_2d(kx: usize, ky: usize) -> Result<CwComplex> {
    if kx == 0 || ky == 0 || kx * ky < 2 {
        return Err(Error::InvalidParams("lieb cluster needs at least two sites".into()));
    }
    let site = |x: usize, y: usize| x + kx * y;
    let nsites = kx * ky;
    let mut bonds = Vec::new();
    for y in 0..ky {
        for x in 0..kx.saturating_sub(1) {
            bonds.push((site(x, y), site(x + 1, y)));
        }
    }
    for y in 0..ky.saturating_sub(1) {
        for x in 0..kx {
            bonds.push((site(x, y), site(x, y + 1)));
        }
    }
    let n = nsites + bonds.len();
    let mut families: Vec<Vec<(usize, Side)>> = (0..nsites).map(|s| vec![(s, Side::Left)]).collect();
    let mut words = Vec::new();
    for (b, &(a, c)) in bonds.iter().enumerate() {
        let q = nsites + b;
        families[a].push((q, Side::Left));
        families[c].push((q, Side::Right));
        words.push(vec![(a, -1), (q, 1), (c, 1)]);
    }
    from_code_shape(n, families, words)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_face_is_valid() {
        let c = CwComplex {
            vertices: vec![VertexKind::Full],
            edges: vec![(0, 0)],
            faces: vec![vec![(0, 1)]],
            edge_constraints: BTreeMap::new(),
        };
        c.validate().unwrap();
    }

    #[test]
    fn open_walk_is_invalid() {
        let c = CwComplex {
            vertices: vec![VertexKind::Full, VertexKind::Full],
            edges: vec![(0, 1)],
            faces: vec![vec![(0, 1)]],
            edge_constraints: BTreeMap::new(),
        };
        assert!(matches!(c.validate(), Err(Error::InvalidComplex(_))));
        let d = CwComplex { edges: vec![(0, 5)], faces: vec![], ..c };
        assert!(d.validate().is_err());
    }

    #[test]
    fn torus_counts() {
        for k in 1..5 {
            let c = torus_grid(k).unwrap();
            assert_eq!((c.num_vertices(), c.num_edges(), c.num_faces()), (k * k, 2 * k * k, k * k));
        }
        assert_eq!(torus_grid(2).unwrap().spanning_forest().unwrap().edges.len(), 3);
        assert_eq!(torus_grid(3).unwrap().girth(), Some(3));
        assert_eq!(torus_grid(2).unwrap().girth(), Some(2));
        assert_eq!(torus_grid(4).unwrap().girth(), Some(4));
    }

    #[test]
    fn rose_presentation() {
        let c = rose(2, &[vec![1, 2, -1, -2]]).unwrap();
        let p = c.presentation_pi1().unwrap();
        assert_eq!(p.generator_edges, vec![0, 1]);
        assert_eq!(p.relators, vec![GroupWord::from_signed(&[1, 2, -1, -2]).unwrap()]);
        assert_eq!(p.basepoint, Basepoint::Vertex(0));
    }

    #[test]
    fn two_ghosts_joined_by_an_edge() {
        let c = CwComplex {
            vertices: vec![VertexKind::Ghost, VertexKind::Ghost],
            edges: vec![(0, 1)],
            faces: vec![],
            edge_constraints: BTreeMap::new(),
        };
        let q = c.quotient_ghosts();
        assert!(q.merged);
        assert_eq!(q.complex.vertices, vec![VertexKind::Ghost]);
        assert_eq!(q.complex.edges, vec![(0, 0)]);
        let smooth = torus_grid(2).unwrap();
        let q = smooth.quotient_ghosts();
        assert!(!q.merged);
        assert_eq!(q.complex, smooth);
    }

    #[test]
    fn tree_has_trivial_presentation() {
        let c = CwComplex {
            vertices: vec![VertexKind::Full; 4],
            edges: vec![(0, 1), (1, 2), (1, 3)],
            faces: vec![],
            edge_constraints: BTreeMap::new(),
        };
        let p = c.presentation_pi1().unwrap();
        assert!(p.generator_edges.is_empty() && p.relators.is_empty());
        assert_eq!(c.girth(), None);
        assert_eq!(c.spanning_forest().unwrap().edges, vec![0, 1, 2]);
    }

    #[test]
    fn disconnected_is_an_error() {
        let c = CwComplex { vertices: vec![VertexKind::Full; 2], ..Default::default() };
        assert_eq!(c.spanning_forest().unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn identify_ghost_cells_pattern() {
        // face a^-1 b c d^-1 where a, d end in ghosts 3 and 4
        let raw = CwComplex {
            vertices: vec![VertexKind::Full, VertexKind::Full, VertexKind::Full, VertexKind::Ghost, VertexKind::Ghost],
            edges: vec![(0, 3), (0, 1), (1, 2), (2, 4)],
            faces: vec![vec![(0, -1), (1, 1), (2, 1), (3, 1)]],
            edge_constraints: BTreeMap::new(),
        };
        assert!(raw.validate().is_err());
        let c = ghost_identification(&raw).unwrap();
        assert_eq!(c.ghosts().len(), 1);
        c.validate().unwrap();
    }

    #[test]
    fn chain_builders() {
        let ssb = ssb_chain(4).unwrap();
        assert_eq!(ssb.ghosts().len(), 2);
        let c = cluster_chain_1d(6).unwrap();
        assert_eq!(c.ghosts().len(), 1);
        let l = cluster_lieb_2d(2, 2).unwrap();
        assert_eq!(l.ghosts().len(), 1);
        assert_eq!(l.num_edges(), 8);
        assert_eq!(repetition_chain(3).unwrap().ghosts().len(), 2);
        assert!(ssb_chain(3).is_err());
    }

    #[test]
    fn build_spec_json() {
        let s: BuildSpec = serde_json::from_str(r#"{"kind":"torus_grid","k":2}"#).unwrap();
        assert_eq!(s.build().unwrap().num_edges(), 8);
        let s: BuildSpec = serde_json::from_str(r#"{"kind":"disk","r":3}"#).unwrap();
        assert_eq!(s.build().unwrap().ghosts().len(), 3);
    }
}
