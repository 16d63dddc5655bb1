//! Girth and distance bounds, plus the randomized high-girth construction:
//! a regular tree whose leaves are joined by a seeded random perfect
//! matching, pruned of short cycles, with 2-cells glued along fundamental
//! cycles according to a classical parity-check matrix.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::rank_mod_p;
use crate::budget::Budget;
use crate::code::{code_from_complex, GroupCssCode};
use crate::complex::{CwComplex, Step, VertexKind};
use crate::error::{Error, Result};
use crate::group::{is_prime, FiniteGroup};

/// Upper bound on the girth of a graph with `n` vertices and average degree
/// `k`: `2 ln(1 + n(k-2)/k) / ln(k-1) + 2`.
pub fn moore_bound(n: f64, k: f64) -> Result<f64> {
    if !(k > 2.0) || !(n >= 1.0) {
        return Err(Error::InvalidParams(format!("Moore bound needs K > 2 and N >= 1, got N={n}, K={k}")));
    }
    Ok(2.0 * (1.0 + n * (k - 2.0) / k).ln() / (k - 1.0).ln() + 2.0)
}

/// Upper bound on the Z-distance of a quantum double with `n` qudits and
/// `k = log_|G| dim` logical qudits: `2 + 2 ln n / ln(1 + 2(k-1)/n)`.
pub fn dz_upper_bound(n: f64, k: f64) -> Result<f64> {
    if !(k > 1.0) {
        return Err(Error::InvalidParams(format!("distance bound is vacuous for k = {k} <= 1")));
    }
    if n < k {
        return Err(Error::InvalidParams(format!("distance bound needs n >= k, got n={n}, k={k}")));
    }
    Ok(2.0 + 2.0 * n.ln() / (1.0 + 2.0 * (k - 1.0) / n).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    /// `log_|G| dim`.
    pub k: f64,
    /// `k` as `(numerator, denominator)` when `dim` is a rational power of `|G|`.
    pub k_exact: Option<(u32, u32)>,
    pub d_z_measured: Option<usize>,
    pub girth: Option<usize>,
    pub average_degree: f64,
    pub num_vertices: usize,
    pub moore_rhs: Option<f64>,
    pub dz_rhs: Option<f64>,
    pub moore_satisfied: Option<bool>,
    pub dz_satisfied: Option<bool>,
}

/// Evaluates both bounds for a code with `n` qudits and codespace dimension
/// `dim` over a group of order `order`, given the measured 1-skeleton girth
/// and Z-distance. A flag is `None` when its bound does not apply.
pub fn bound_report(
    n: usize,
    dim: u128,
    order: usize,
    d_z: Option<usize>,
    skeleton: Option<&CwComplex>,
) -> BoundReport {
    let k = (dim as f64).ln() / (order as f64).ln();
    bound_report_for_k(n, k, exact_log(dim, order as u128), d_z, skeleton)
}

/// Same as [`bound_report`] for a code whose logical dimension `k` is known
/// directly, such as `k` copies of `Z_p` whose dimension `p^k` would not fit
/// in an integer.
pub fn bound_report_for_k(
    n: usize,
    k: f64,
    k_exact: Option<(u32, u32)>,
    d_z: Option<usize>,
    skeleton: Option<&CwComplex>,
) -> BoundReport {
    let dz_rhs = dz_upper_bound(n as f64, k).ok();
    let dz_satisfied = match (dz_rhs, d_z) {
        (Some(b), Some(d)) => Some((d as f64) <= b + 1e-9),
        _ => None,
    };
    let (girth, average_degree, num_vertices) = match skeleton {
        Some(c) => (c.girth(), c.average_degree(), c.num_vertices()),
        None => (None, 0.0, 0),
    };
    let moore_rhs = skeleton.and_then(|_| moore_bound(num_vertices as f64, average_degree).ok());
    let moore_satisfied = match (moore_rhs, girth) {
        (Some(b), Some(g)) => Some((g as f64) < b),
        _ => None,
    };
    BoundReport {
        n,
        k,
        k_exact,
        d_z_measured: d_z,
        girth,
        average_degree,
        num_vertices,
        moore_rhs,
        dz_rhs,
        moore_satisfied,
        dz_satisfied,
    }
}

/// Finds `(a, b)` with `dim^b = order^a` and small `b`, so that
/// `log_order dim = a / b` exactly.
fn exact_log(dim: u128, order: u128) -> Option<(u32, u32)> {
    if order < 2 || dim == 0 {
        return None;
    }
    for b in 1..=6u32 {
        let Some(lhs) = dim.checked_pow(b) else { break };
        let mut acc: u128 = 1;
        let mut a = 0u32;
        while acc < lhs {
            match acc.checked_mul(order) {
                Some(v) => acc = v,
                None => break,
            }
            a += 1;
        }
        if acc == lhs {
            return Some((a, b));
        }
    }
    None
}

/// A depth-`R` tree with `a` children per parent, whose leaves are joined by
/// a matching, after pruning the leaves that lay on short cycles.
///
/// Vertices use level-order numbering of the full tree, with the root at 0;
/// pruned vertices keep their numbers but lose their edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeMatchingGraph {
    pub arity: usize,
    pub depth: usize,
    pub alpha_target: f64,
    pub seed: u64,
    pub num_vertices: usize,
    pub depth_of: Vec<usize>,
    /// Surviving tree edges `(parent, child)`.
    pub tree_edges: Vec<(usize, usize)>,
    /// Surviving matching edges between leaves, `u < v`.
    pub matching: Vec<(usize, usize)>,
    /// Leaves removed by pruning, sorted.
    pub pruned: Vec<usize>,
    pub leaves: usize,
    /// Girth of the survivor graph (`None` when it has no cycle).
    pub girth: Option<usize>,
    pub girth_target: usize,
}

impl TreeMatchingGraph {
    pub fn pruned_fraction(&self) -> f64 {
        self.pruned.len() as f64 / self.leaves as f64
    }

    pub fn survivor_fraction(&self) -> f64 {
        1.0 - self.pruned_fraction()
    }

    pub fn num_edges(&self) -> usize {
        self.tree_edges.len() + self.matching.len()
    }

    /// Upper bound on the edge count, `(a/(a-1) + 1/2) a^R`.
    pub fn edge_bound(&self) -> f64 {
        let a = self.arity as f64;
        (a / (a - 1.0) + 0.5) * a.powi(self.depth as i32)
    }

    /// The survivor graph as a complex with no faces. Vertices are
    /// renumbered in increasing order of their original index; tree edges
    /// come first, then matching edges.
    pub fn skeleton(&self) -> (CwComplex, Vec<usize>) {
        let mut alive = vec![false; self.num_vertices];
        alive[0] = true;
        for &(p, c) in &self.tree_edges {
            alive[p] = true;
            alive[c] = true;
        }
        let mut index = vec![usize::MAX; self.num_vertices];
        let mut count = 0;
        for v in 0..self.num_vertices {
            if alive[v] {
                index[v] = count;
                count += 1;
            }
        }
        let edges = self.tree_edges.iter().chain(&self.matching).map(|&(t, h)| (index[t], index[h])).collect();
        let c = CwComplex {
            vertices: vec![VertexKind::Full; count],
            edges,
            faces: Vec::new(),
            edge_constraints: BTreeMap::new(),
        };
        (c, index)
    }
}

/// Builds the tree, matches its `a^R` leaves uniformly at random using the
/// seeded generator, and removes every matched pair whose edge closes a
/// cycle shorter than `alpha_target * R`. Branches left without leaves are
/// removed as well.
pub fn build_tree_matching(a: usize, r: usize, alpha_target: f64, seed: u64) -> Result<TreeMatchingGraph> {
    if a < 4 || !a.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("arity must be even and at least 4, got {a}")));
    }
    if r < 2 {
        return Err(Error::InvalidParams(format!("depth must be at least 2, got {r}")));
    }
    if !(alpha_target > 0.0) {
        return Err(Error::InvalidParams("alpha_target must be positive".into()));
    }
    let leaves = a
        .checked_pow(r as u32)
        .filter(|&l| l <= 1 << 22)
        .ok_or_else(|| Error::InvalidParams(format!("tree with {a}^{r} leaves is too large")))?;
    let girth_target = (alpha_target * r as f64 - 1e-9).ceil().max(0.0) as usize;

    // Level-order numbering: children of v are a*v+1 ..= a*v+a.
    let num_vertices = (leaves * a - 1) / (a - 1);
    let first_leaf = num_vertices - leaves;
    let parent_of = |v: usize| (v - 1) / a;
    let mut depth_of = vec![0usize; num_vertices];
    for v in 1..num_vertices {
        depth_of[v] = depth_of[parent_of(v)] + 1;
    }

    let mut order: Vec<usize> = (first_leaf..num_vertices).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let pairs: Vec<(usize, usize)> = order.chunks(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
    let mut partner = vec![usize::MAX; num_vertices];
    for &(u, v) in &pairs {
        partner[u] = v;
        partner[v] = u;
    }

    // Every cycle uses a matching edge, so the shortest cycle through
    // (u, v) is one plus the u-v distance avoiding that edge.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
    for v in 1..num_vertices {
        adj[v].push(parent_of(v));
        adj[parent_of(v)].push(v);
    }
    let mut dist = vec![usize::MAX; num_vertices];
    let mut bad = vec![false; pairs.len()];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if girth_target == 0 {
            break;
        }
        let limit = girth_target - 1;
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[u] = 0;
        let mut touched = vec![u];
        let mut queue = VecDeque::from([u]);
        'bfs: while let Some(x) = queue.pop_front() {
            if dist[x] + 1 >= limit {
                break;
            }
            let mut next: Vec<usize> = adj[x].clone();
            if partner[x] != usize::MAX && !(x == u) {
                next.push(partner[x]);
            }
            for y in next {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    touched.push(y);
                    if y == v {
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
            }
        }
        if dist[v] != usize::MAX && dist[v] + 1 < girth_target {
            bad[i] = true;
        }
    }

    let mut pruned = Vec::new();
    let mut matching = Vec::new();
    let mut live_leaf = vec![false; num_vertices];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if bad[i] {
            pruned.push(u);
            pruned.push(v);
        } else {
            matching.push((u, v));
            live_leaf[u] = true;
            live_leaf[v] = true;
        }
    }
    pruned.sort_unstable();
    if matching.is_empty() {
        return Err(Error::InvalidParams(format!(
            "alpha_target {alpha_target} pruned every leaf (seed {seed}); retry with another seed"
        )));
    }

    // Keep internal vertices that still have a surviving leaf below them.
    let mut keep = live_leaf;
    for v in (1..num_vertices).rev() {
        if keep[v] {
            keep[parent_of(v)] = true;
        }
    }
    let tree_edges: Vec<(usize, usize)> = (1..num_vertices).filter(|&v| keep[v]).map(|v| (parent_of(v), v)).collect();

    let mut g = TreeMatchingGraph {
        arity: a,
        depth: r,
        alpha_target,
        seed,
        num_vertices,
        depth_of,
        tree_edges,
        matching,
        pruned,
        leaves,
        girth: None,
        girth_target,
    };
    g.girth = g.skeleton().0.girth();
    if let Some(girth) = g.girth {
        if girth < girth_target {
            return Err(Error::InvalidComplex(format!("survivor girth {girth} is below the target {girth_target}")));
        }
    }
    Ok(g)
}

/// A linear code over `Z_p` given by its parity-check matrix, with exactly
/// computed parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalCode {
    pub p: u64,
    pub n0: usize,
    pub k0: usize,
    /// Minimum weight of a nonzero codeword, `None` when `k0 = 0`.
    pub d0: Option<usize>,
    pub parity: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassicalKind {
    Repetition,
    /// Binary Hamming code, shortened to the requested length.
    Hamming,
    Random,
}

impl std::str::FromStr for ClassicalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "repetition" => Ok(ClassicalKind::Repetition),
            "hamming" => Ok(ClassicalKind::Hamming),
            "random" => Ok(ClassicalKind::Random),
            other => Err(Error::InvalidParams(format!("unknown classical code {other:?}"))),
        }
    }
}

pub fn repetition_parity(n0: usize) -> Vec<Vec<u64>> {
    (0..n0.saturating_sub(1))
        .map(|i| {
            let mut row = vec![0; n0];
            row[i] = 1;
            row[i + 1] = 1;
            row
        })
        .collect()
}

/// Binary Hamming parity checks: column `j` is the binary expansion of `j+1`
/// over the smallest number of bits that fits `n0` columns.
pub fn hamming_parity(n0: usize) -> Vec<Vec<u64>> {
    let mut bits = 1;
    while (1usize << bits) - 1 < n0 {
        bits += 1;
    }
    (0..bits).map(|b| (0..n0).map(|j| (((j + 1) >> b) & 1) as u64).collect()).collect()
}

/// Random matrix with `round((1 - rate) n0)` rows and uniform entries in `Z_p`.
pub fn random_parity(n0: usize, rate: f64, p: u64, seed: u64) -> Vec<Vec<u64>> {
    let rows = ((1.0 - rate.clamp(0.0, 1.0)) * n0 as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows).map(|_| (0..n0).map(|_| rng.gen_range(0..p)).collect()).collect()
}

/// Parity-check matrix of the given kind over `Z_p`. `rate` and `seed` only
/// affect the random kind.
pub fn classical_parity(kind: ClassicalKind, n0: usize, rate: f64, p: u64, seed: u64) -> Result<Vec<Vec<u64>>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n0 == 0 {
        return Err(Error::InvalidParams("classical code length must be positive".into()));
    }
    Ok(match kind {
        ClassicalKind::Repetition => repetition_parity(n0),
        ClassicalKind::Hamming => {
            if p != 2 {
                return Err(Error::InvalidParams("Hamming codes are generated over Z_2 only".into()));
            }
            hamming_parity(n0)
        }
        ClassicalKind::Random => random_parity(n0, rate, p, seed),
    })
}

/// Generates a parity-check matrix and computes its exact parameters.
pub fn classical_code_gen(
    kind: ClassicalKind,
    n0: usize,
    rate: f64,
    p: u64,
    seed: u64,
    budget: &Budget,
) -> Result<ClassicalCode> {
    let parity = classical_parity(kind, n0, rate, p, seed)?;
    classical_parameters(&parity, n0, p, budget)
}

/// Exact `[n0, k0, d0]_p` of the kernel of `parity`, scanning all `p^k0`
/// codewords.
pub fn classical_parameters(parity: &[Vec<u64>], n0: usize, p: u64, budget: &Budget) -> Result<ClassicalCode> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if parity.iter().any(|r| r.len() != n0) {
        return Err(Error::InvalidParams("parity rows must have one entry per column".into()));
    }
    let basis = kernel_mod_p(parity, n0, p);
    let k0 = basis.len();
    let total = (p as u128).checked_pow(k0 as u32).unwrap_or(u128::MAX);
    Budget::check("classical codewords", total, budget.config_cap)?;
    let mut d0: Option<usize> = None;
    let mut coeffs = vec![0u64; k0];
    let mut word = vec![0u64; n0];
    for _ in 1..total {
        // Increment the coefficient vector and update the word incrementally.
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            for (w, b) in word.iter_mut().zip(&basis[i]) {
                *w = (*w + b) % p;
            }
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        let wt = word.iter().filter(|&&x| x != 0).count();
        d0 = Some(d0.map_or(wt, |d| d.min(wt)));
    }
    Ok(ClassicalCode { p, n0, k0, d0, parity: parity.iter().map(|r| r.iter().map(|x| x % p).collect()).collect() })
}

fn inv_mod(x: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (x % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Basis of the right kernel of `matrix` over the prime field `Z_p`.
pub fn kernel_mod_p(matrix: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..a.len()).find(|&i| a[i][col] != 0) else { continue };
        a.swap(row, pr);
        let inv = inv_mod(a[row][col], p);
        for x in a[row].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + (p - f) * a[row][j]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[r][free]) % p;
            }
            v
        })
        .collect()
}

/// Which relations among the fundamental-cycle holonomies become faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSelection {
    pub powers: bool,
    pub commutators: bool,
    pub parity: bool,
    pub leaf_sets: bool,
}

impl Default for CheckSelection {
    fn default() -> Self {
        CheckSelection { powers: true, commutators: true, parity: true, leaf_sets: true }
    }
}

/// The glued complex and its code, with the bookkeeping needed to relate it
/// back to the classical code.
#[derive(Debug, Clone)]
pub struct GluedCode {
    pub complex: CwComplex,
    pub code: GroupCssCode,
    /// Qudit index of each matching edge, in matching order.
    pub matching_qudits: Vec<usize>,
    /// Leaf subsets used for the product checks, as matching-edge indices.
    pub leaf_sets: Vec<Vec<usize>>,
    pub counts: FaceCounts,
    /// Rank over `Z_p` of the parity rows stacked with the leaf-set rows.
    pub combined_rank: usize,
    /// `|M| - combined_rank`: the number of independent `Z_p` holonomy labels.
    pub k_linear: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FaceCounts {
    pub powers: usize,
    pub commutators: usize,
    pub parity: usize,
    pub leaf_sets: usize,
}

/// Glues 2-cells to the survivor graph so that, with the tree gauge-fixed,
/// the holonomies `g_e` around matching edges satisfy `g_e^p = 1`, pairwise
/// commute, satisfy every parity row `prod g_e^{H_ae} = 1`, and multiply to
/// one over a subset of the surviving children of every leaf parent whose
/// size is coprime to `p`.
pub fn attach_tree_checks(
    graph: &TreeMatchingGraph,
    group: &FiniteGroup,
    p: u64,
    parity: &[Vec<u64>],
    select: CheckSelection,
) -> Result<GluedCode> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !(0..group.order()).any(|g| group.element_order(g) as u64 == p) {
        return Err(Error::InvalidParams(format!("group has no element of order {p}")));
    }
    let m = graph.matching.len();
    if parity.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidParams(format!("parity matrix needs {m} columns, one per matching edge")));
    }
    let (mut complex, index) = graph.skeleton();
    let tree_count = graph.tree_edges.len();

    // Path from the root down to each vertex, as steps over tree edges.
    let mut down: Vec<Vec<Step>> = vec![Vec::new(); complex.num_vertices()];
    for (e, &(par, child)) in graph.tree_edges.iter().enumerate() {
        let mut path = down[index[par]].clone();
        path.push((e, 1));
        down[index[child]] = path;
    }
    let up = |v: usize| -> Vec<Step> { down[v].iter().rev().map(|&(e, o)| (e, -o)).collect() };
    // Loop through matching edge i starting at its endpoint `from`.
    let cycle = |i: usize, from_tail: bool| -> Vec<Step> {
        let (u, v) = graph.matching[i];
        let (u, v) = (index[u], index[v]);
        let e = tree_count + i;
        if from_tail {
            [down[u].clone(), vec![(e, 1)], up(v)].concat()
        } else {
            [down[v].clone(), vec![(e, -1)], up(u)].concat()
        }
    };
    let inverse = |w: &[Step]| -> Vec<Step> { w.iter().rev().map(|&(e, o)| (e, -o)).collect() };

    let mut faces: Vec<Vec<Step>> = Vec::new();
    let mut counts = FaceCounts::default();
    let push = |faces: &mut Vec<Vec<Step>>, walk: Vec<Step>| -> bool {
        let w = reduce_walk(walk);
        if w.is_empty() {
            false
        } else {
            faces.push(w);
            true
        }
    };
    if select.powers {
        for i in 0..m {
            let c = cycle(i, true);
            counts.powers += push(&mut faces, c.repeat(p as usize)) as usize;
        }
    }
    if select.commutators {
        for i in 0..m {
            let ci = cycle(i, true);
            for j in i + 1..m {
                let cj = cycle(j, true);
                let walk = [ci.clone(), cj.clone(), inverse(&ci), inverse(&cj)].concat();
                counts.commutators += push(&mut faces, walk) as usize;
            }
        }
    }
    if select.parity {
        for row in parity {
            let mut walk = Vec::new();
            for (i, &h) in row.iter().enumerate() {
                if h % p != 0 {
                    walk.extend(cycle(i, true).repeat((h % p) as usize));
                }
            }
            counts.parity += push(&mut faces, walk) as usize;
        }
    }

    // Leaf subsets: surviving children of each leaf parent, dropping one if
    // the count is divisible by p.
    let mut leaf_edge = BTreeMap::new();
    for (i, &(u, v)) in graph.matching.iter().enumerate() {
        leaf_edge.insert(u, (i, true));
        leaf_edge.insert(v, (i, false));
    }
    let mut by_parent: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(par, child) in &graph.tree_edges {
        if leaf_edge.contains_key(&child) {
            by_parent.entry(par).or_default().push(child);
        }
    }
    let mut leaf_sets = Vec::new();
    for children in by_parent.values() {
        let mut set = children.clone();
        if (set.len() as u64).is_multiple_of(p) {
            set.pop();
        }
        if set.is_empty() {
            continue;
        }
        let mut walk = Vec::new();
        for leaf in &set {
            let (i, from_tail) = leaf_edge[leaf];
            walk.extend(cycle(i, from_tail));
        }
        leaf_sets.push(set.iter().map(|l| leaf_edge[l].0).collect::<Vec<_>>());
        if select.leaf_sets {
            counts.leaf_sets += push(&mut faces, walk) as usize;
        }
    }
    complex.faces = faces;
    complex.validate()?;

    // Linear rank over Z_p of the parity rows plus the leaf-set rows, with
    // orientation signs: a leaf entered at the head contributes g_e^{-1}.
    let mut rows: Vec<Vec<u64>> = if select.parity { parity.to_vec() } else { Vec::new() };
    if select.leaf_sets {
        for children in by_parent.values() {
            let mut set = children.clone();
            if (set.len() as u64).is_multiple_of(p) {
                set.pop();
            }
            if set.is_empty() {
                continue;
            }
            let mut row = vec![0u64; m];
            for leaf in &set {
                let (i, from_tail) = leaf_edge[leaf];
                row[i] = (row[i] + if from_tail { 1 } else { p - 1 }) % p;
            }
            rows.push(row);
        }
    }
    let combined_rank = rank_mod_p(&rows, p);
    let code = code_from_complex(&complex, group)?;
    Ok(GluedCode {
        matching_qudits: (0..m).map(|i| tree_count + i).collect(),
        complex,
        code,
        leaf_sets,
        counts,
        combined_rank,
        k_linear: m - combined_rank,
    })
}

/// Cancels adjacent inverse steps, including across the wrap-around.
fn reduce_walk(walk: Vec<Step>) -> Vec<Step> {
    let mut out: Vec<Step> = Vec::with_capacity(walk.len());
    for s in walk {
        if out.last().is_some_and(|&(e, o)| e == s.0 && o == -s.1) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    let mut lo = 0;
    let mut hi = out.len();
    while hi - lo >= 2 && out[lo].0 == out[hi - 1].0 && out[lo].1 == -out[hi - 1].1 {
        lo += 1;
        hi -= 1;
    }
    out[lo..hi].to_vec()
}
