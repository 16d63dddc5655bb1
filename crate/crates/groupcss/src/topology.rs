//! Codespace dimension from homomorphism counting, systolic Z-distance and
//! logical operators of quantum double codes.
//!
//! After fixing the gauge to the identity on a spanning forest rooted at the
//! non-full vertices, flat configurations correspond to homomorphisms from the
//! fundamental group of the complex (boundary vertices identified) into `G`.
//! The leftover gauge freedom at the roots acts on those homomorphisms by
//! `phi(e) -> h_a phi(e) h_b^-1`, where `a` and `b` are the roots of the trees
//! containing the tail and head of generator edge `e`; codewords are its
//! orbits.

use std::collections::HashMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::code::{complex_from_code, GroupCssCode};
use crate::complex::{CwComplex, Forest, Pi1Presentation, Step, VertexKind};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::oracle::BasisOperator;
use crate::words::GroupWord;

/// Homomorphisms given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSet {
    pub generators: usize,
    pub maps: Vec<Vec<usize>>,
}

impl HomSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// Backtracking enumeration of generator assignments killing every relator,
/// with optional per-generator domains.
pub fn enumerate_hom(
    g: &FiniteGroup,
    generators: usize,
    relators: &[GroupWord],
    domains: &[Option<Subgroup>],
    budget: &Budget,
) -> Result<HomSet> {
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); generators];
    for (j, r) in relators.iter().enumerate() {
        if r.arity() > generators {
            return Err(Error::ArityMismatch { expected: generators, got: r.arity() });
        }
        match r.letters.iter().map(|l| l.var).max() {
            Some(last) => ready[last].push(j),
            None => continue,
        }
    }
    let choices: Vec<Vec<usize>> = (0..generators)
        .map(|i| match domains.get(i).and_then(|d| d.as_ref()) {
            Some(h) => h.members().to_vec(),
            None => (0..g.order()).collect(),
        })
        .collect();
    let mut maps = Vec::new();
    if generators == 0 {
        maps.push(Vec::new());
        return Ok(HomSet { generators, maps });
    }
    let mut assignment = vec![0usize; generators];
    let mut pos = vec![0usize; generators];
    let mut depth = 0;
    let mut nodes: u64 = 0;
    loop {
        assignment[depth] = choices[depth][pos[depth]];
        nodes += 1;
        if nodes > budget.hom_cap {
            return Err(Error::Budget {
                what: "homomorphism search nodes",
                needed: nodes as u128,
                cap: budget.hom_cap,
            });
        }
        let ok = ready[depth].iter().all(|&j| relators[j].eval_unchecked(g, &assignment) == g.identity());
        if ok {
            if depth + 1 == generators {
                maps.push(assignment.clone());
            } else {
                depth += 1;
                pos[depth] = 0;
                continue;
            }
        }
        loop {
            pos[depth] += 1;
            if pos[depth] < choices[depth].len() {
                break;
            }
            if depth == 0 {
                return Ok(HomSet { generators, maps });
            }
            depth -= 1;
        }
    }
}

/// All homomorphisms from a finitely presented group into `g`.
pub fn count_hom(p: &Pi1Presentation, g: &FiniteGroup, budget: &Budget) -> Result<HomSet> {
    enumerate_hom(g, p.generator_edges.len(), &p.relators, &[], budget)
}

/// Orbits of a [`HomSet`] under the residual gauge action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomOrbits {
    /// Index into the map list of the first member of each orbit.
    pub representatives: Vec<usize>,
    pub orbit_of: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl HomOrbits {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// Evaluates holonomies of configurations relative to a spanning forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Holonomy {
    pub group: FiniteGroup,
    pub edges: Vec<(usize, usize)>,
    /// Walk from the root of each vertex's tree down to the vertex.
    pub root_paths: Vec<Vec<Step>>,
    pub generator_edges: Vec<usize>,
}

impl Holonomy {
    pub fn walk(&self, config: &[usize], walk: &[Step]) -> usize {
        let g = &self.group;
        walk.iter().fold(g.identity(), |acc, &(e, o)| {
            let x = if o > 0 { config[e] } else { g.inv(config[e]) };
            g.mul(acc, x)
        })
    }

    /// Holonomy of the loop through generator `i`: root path to its tail, the
    /// edge, and back from its head.
    pub fn generator_value(&self, config: &[usize], i: usize) -> usize {
        let g = &self.group;
        let e = self.generator_edges[i];
        let (t, h) = self.edges[e];
        let a = self.walk(config, &self.root_paths[t]);
        let b = self.walk(config, &self.root_paths[h]);
        g.mul(g.mul(a, config[e]), g.inv(b))
    }

    pub fn phi_of(&self, config: &[usize]) -> Vec<usize> {
        (0..self.generator_edges.len()).map(|i| self.generator_value(config, i)).collect()
    }

    /// Left-multiplies each generator edge so that a configuration in the
    /// class of `phi1` moves to the class of `phi2`; forest edges are kept.
    pub fn transport(&self, config: &[usize], phi1: &[usize], phi2: &[usize]) -> Vec<usize> {
        let g = &self.group;
        let mut out = config.to_vec();
        for (i, &e) in self.generator_edges.iter().enumerate() {
            let a = self.walk(config, &self.root_paths[self.edges[e].0]);
            let h = g.mul(phi2[i], g.inv(phi1[i]));
            let x = g.mul(g.mul(g.inv(a), h), a);
            out[e] = g.mul(x, config[e]);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LogicalKind {
    /// Indicator that the loop through `generator` has holonomy `value`.
    ZRough { generator: usize, value: usize },
    /// Projects onto the class of `phi1` and moves it to the class of `phi2`.
    XRough { phi1: Vec<usize>, phi2: Vec<usize> },
    /// Conjugation average of the projector onto the class of `phi`.
    ZSmooth { phi: Vec<usize> },
    /// Conjugation average of the rough transport from `phi1` to `phi2`.
    XSmooth { phi1: Vec<usize>, phi2: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalOp {
    pub kind: LogicalKind,
    pub holonomy: Holonomy,
}

impl LogicalOp {
    fn conjugate(&self, g: usize, phi: &[usize]) -> Vec<usize> {
        phi.iter().map(|&x| self.holonomy.group.conj(g, x)).collect()
    }
}

impl BasisOperator for LogicalOp {
    fn act(&self, config: &[usize]) -> Vec<(Vec<usize>, Rational64)> {
        let one = Rational64::from_integer(1);
        let hol = &self.holonomy;
        match &self.kind {
            LogicalKind::ZRough { generator, value } => {
                if hol.generator_value(config, *generator) == *value {
                    vec![(config.to_vec(), one)]
                } else {
                    Vec::new()
                }
            }
            LogicalKind::XRough { phi1, phi2 } => {
                if hol.phi_of(config) == *phi1 {
                    vec![(hol.transport(config, phi1, phi2), one)]
                } else {
                    Vec::new()
                }
            }
            LogicalKind::ZSmooth { phi } => {
                let current = hol.phi_of(config);
                let order = hol.group.order();
                let hits = (0..order).filter(|&g| self.conjugate(g, phi) == current).count();
                if hits == 0 {
                    Vec::new()
                } else {
                    vec![(config.to_vec(), Rational64::new(hits as i64, order as i64))]
                }
            }
            LogicalKind::XSmooth { phi1, phi2 } => {
                let current = hol.phi_of(config);
                let order = hol.group.order();
                let w = Rational64::new(1, order as i64);
                (0..order)
                    .filter_map(|g| {
                        let p1 = self.conjugate(g, phi1);
                        (p1 == current).then(|| (hol.transport(config, &p1, &self.conjugate(g, phi2)), w))
                    })
                    .collect()
            }
        }
    }
}

/// Topological data of a quantum double code.
#[derive(Debug, Clone)]
pub struct Topology {
    pub group: FiniteGroup,
    pub complex: CwComplex,
    pub forest: Forest,
    pub presentation: Pi1Presentation,
    /// True when every vertex carries a full gauge action.
    pub smooth: bool,
    /// Residual gauge subgroup at each forest root, aligned with `forest.roots`.
    pub root_subgroups: Vec<Subgroup>,
    /// Per generator: subgroup its value is confined to, if any.
    pub domains: Vec<Option<Subgroup>>,
    /// Per generator: positions in `forest.roots` of the tail and head trees.
    generator_roots: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub n: usize,
    pub dim: usize,
    /// `log_|G| dim`.
    pub k: f64,
    pub hom_count: usize,
    pub orbit_count: usize,
    pub generators: usize,
    pub relators: usize,
    pub smooth: bool,
    /// `|G / H|` for each boundary vertex.
    pub boundary_symmetry: Vec<usize>,
}

impl Topology {
    pub fn from_code(code: &GroupCssCode) -> Result<Topology> {
        let complex = match &code.complex {
            Some(c) => c.clone(),
            None => complex_from_code(code)?,
        };
        Topology::new(complex, &code.group)
    }

    pub fn new(complex: CwComplex, group: &FiniteGroup) -> Result<Topology> {
        complex.validate()?;
        let forest = complex.spanning_forest()?;
        let presentation = complex.presentation_with(&forest);
        let smooth = complex.vertices.iter().all(|k| k.is_full());
        let mut root_subgroups = Vec::new();
        for &r in &forest.roots {
            root_subgroups.push(match &complex.vertices[r] {
                VertexKind::Full => group.whole(),
                VertexKind::Ghost => group.trivial_subgroup(),
                VertexKind::Restricted { subgroup } => group.try_subgroup(subgroup)?,
            });
        }
        let mut slot = vec![usize::MAX; complex.vertices.len()];
        for (i, &r) in forest.roots.iter().enumerate() {
            slot[r] = i;
        }
        let root_pos = |v: usize| slot[forest.root_of[v]];
        let mut domains = vec![None; presentation.generator_edges.len()];
        let mut generator_roots = Vec::new();
        for (i, &e) in presentation.generator_edges.iter().enumerate() {
            let (t, h) = complex.edges[e];
            generator_roots.push((root_pos(t), root_pos(h)));
            if let Some(hs) = complex.edge_constraints.get(&e) {
                domains[i] = Some(group.try_subgroup(hs)?);
            }
        }
        for &e in complex.edge_constraints.keys() {
            if forest.in_forest[e] {
                return Err(Error::InvalidComplex(format!("constrained edge {e} must join two boundary vertices")));
            }
        }
        Ok(Topology {
            group: group.clone(),
            complex,
            forest,
            presentation,
            smooth,
            root_subgroups,
            domains,
            generator_roots,
        })
    }

    pub fn generators(&self) -> usize {
        self.presentation.generator_edges.len()
    }

    /// True when every root is a ghost with trivial residual gauge.
    pub fn is_rough(&self) -> bool {
        !self.smooth && self.root_subgroups.iter().all(|h| h.is_trivial())
    }

    pub fn hom(&self, budget: &Budget) -> Result<HomSet> {
        enumerate_hom(&self.group, self.generators(), &self.presentation.relators, &self.domains, budget)
    }

    fn act(&self, phi: &[usize], root: usize, h: usize) -> Vec<usize> {
        let g = &self.group;
        let hi = g.inv(h);
        phi.iter()
            .zip(&self.generator_roots)
            .map(|(&x, &(a, b))| {
                let x = if a == root { g.mul(h, x) } else { x };
                if b == root {
                    g.mul(x, hi)
                } else {
                    x
                }
            })
            .collect()
    }

    /// Orbits of the maps under the residual gauge action, via union-find
    /// over generators of each root subgroup.
    pub fn orbits(&self, homs: &HomSet) -> HomOrbits {
        let index: HashMap<&[usize], usize> = homs.maps.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let mut parent: Vec<usize> = (0..homs.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (root, h) in self.root_subgroups.iter().enumerate() {
            if h.is_trivial() {
                continue;
            }
            for t in self.group.subgroup_generators(h) {
                for i in 0..homs.len() {
                    let moved = self.act(&homs.maps[i], root, t);
                    let j = index[moved.as_slice()];
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut id = HashMap::new();
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        let mut orbit_of = vec![0; homs.len()];
        for i in 0..homs.len() {
            let r = find(&mut parent, i);
            let k = *id.entry(r).or_insert_with(|| {
                representatives.push(i);
                sizes.push(0);
                representatives.len() - 1
            });
            sizes[k] += 1;
            orbit_of[i] = k;
        }
        HomOrbits { representatives, orbit_of, sizes }
    }

    pub fn codespace_dim(&self, budget: &Budget) -> Result<DimensionReport> {
        let homs = self.hom(budget)?;
        let orbits = self.orbits(&homs);
        let dim = orbits.count();
        let order = self.group.order();
        Ok(DimensionReport {
            n: self.complex.edges.len(),
            dim,
            k: if order > 1 { (dim as f64).ln() / (order as f64).ln() } else { 0.0 },
            hom_count: homs.len(),
            orbit_count: dim,
            generators: self.generators(),
            relators: self.presentation.relators.len(),
            smooth: self.smooth,
            boundary_symmetry: if self.smooth {
                Vec::new()
            } else {
                self.root_subgroups.iter().map(|h| order / h.order()).collect()
            },
        })
    }

    /// Gauge-fixed configuration of a map: forest edges trivial, generator
    /// edges carry the map.
    pub fn config_of(&self, phi: &[usize]) -> Vec<usize> {
        let mut c = vec![self.group.identity(); self.complex.edges.len()];
        for (i, &e) in self.presentation.generator_edges.iter().enumerate() {
            c[e] = phi[i];
        }
        c
    }

    pub fn holonomy(&self) -> Holonomy {
        Holonomy {
            group: self.group.clone(),
            edges: self.complex.edges.clone(),
            root_paths: (0..self.complex.vertices.len()).map(|v| self.forest.root_path(&self.complex, v)).collect(),
            generator_edges: self.presentation.generator_edges.clone(),
        }
    }

    /// Shortest closed walk (or walk between two boundary vertices) whose
    /// gauge-invariant holonomy differs between some codeword and the one
    /// containing the trivial configuration.
    pub fn systole_dz(&self, budget: &Budget) -> Result<usize> {
        let homs = self.hom(budget)?;
        let orbits = self.orbits(&homs);
        if orbits.count() <= 1 {
            return Err(Error::Undefined("Z-distance needs a code space of dimension at least 2".into()));
        }
        let g = &self.group;
        let nv = self.complex.vertices.len();
        let order = g.order();
        let work = (orbits.count() as u128) * (nv as u128) * (nv as u128) * (order as u128);
        Budget::check("systole search states", work, budget.op_cap)?;
        // product sets H_a H_b for pairs of boundary vertices
        let root_slot: Vec<Option<usize>> =
            (0..nv).map(|v| if self.smooth { None } else { self.forest.roots.iter().position(|&r| r == v) }).collect();
        let mut adj: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); nv];
        for (e, &(t, h)) in self.complex.edges.iter().enumerate() {
            adj[t].push((e, h, 1));
            adj[h].push((e, t, -1));
        }
        let mut best = usize::MAX;
        let mut state_dist = vec![usize::MAX; nv * order];
        for &rep in &orbits.representatives {
            let config = self.config_of(&homs.maps[rep]);
            for s in 0..nv {
                state_dist.iter_mut().for_each(|d| *d = usize::MAX);
                state_dist[s * order] = 0;
                let mut queue = std::collections::VecDeque::from([(s, g.identity())]);
                while let Some((v, x)) = queue.pop_front() {
                    let d = state_dist[v * order + x];
                    if d + 1 >= best {
                        break;
                    }
                    for &(e, w, o) in &adj[v] {
                        let step = if o > 0 { config[e] } else { g.inv(config[e]) };
                        let y = g.mul(x, step);
                        let slot = w * order + y;
                        if state_dist[slot] != usize::MAX {
                            continue;
                        }
                        state_dist[slot] = d + 1;
                        let hit = if w == s {
                            y != g.identity()
                        } else {
                            match (root_slot[s], root_slot[w]) {
                                (Some(a), Some(b)) => {
                                    let (ha, hb) = (&self.root_subgroups[a], &self.root_subgroups[b]);
                                    !ha.members().iter().any(|&p| hb.contains(g.mul(g.inv(p), y)))
                                }
                                _ => false,
                            }
                        };
                        if hit {
                            best = best.min(d + 1);
                            break;
                        }
                        queue.push_back((w, y));
                    }
                }
            }
        }
        if best == usize::MAX {
            return Err(Error::Undefined("no walk separates the codewords".into()));
        }
        Ok(best)
    }

    fn check_hom(&self, phi: &[usize]) -> Result<()> {
        let g = &self.group;
        if phi.len() != self.generators() {
            return Err(Error::ArityMismatch { expected: self.generators(), got: phi.len() });
        }
        if let Some(&bad) = phi.iter().find(|&&x| x >= g.order()) {
            return Err(Error::NotInGroup { index: bad, order: g.order() });
        }
        let kills = self.presentation.relators.iter().all(|r| r.eval_unchecked(g, phi) == g.identity());
        let in_domain = phi.iter().zip(&self.domains).all(|(&x, d)| d.as_ref().is_none_or(|h| h.contains(x)));
        if kills && in_domain {
            Ok(())
        } else {
            Err(Error::NotInHom)
        }
    }

    fn require_rough(&self) -> Result<()> {
        if self.smooth {
            return Err(Error::WrongShape("smooth code: use the smooth logical operators".into()));
        }
        if !self.is_rough() {
            return Err(Error::WrongShape("logical operators need trivial ghost boundaries".into()));
        }
        Ok(())
    }

    pub fn make_z_logical(&self, phi: &[usize], generator: usize) -> Result<LogicalOp> {
        self.require_rough()?;
        self.check_hom(phi)?;
        if generator >= self.generators() {
            return Err(Error::InvalidParams(format!("generator {generator} out of range")));
        }
        Ok(LogicalOp { kind: LogicalKind::ZRough { generator, value: phi[generator] }, holonomy: self.holonomy() })
    }

    pub fn make_x_logical(&self, phi1: &[usize], phi2: &[usize]) -> Result<LogicalOp> {
        self.require_rough()?;
        self.check_hom(phi1)?;
        self.check_hom(phi2)?;
        Ok(LogicalOp {
            kind: LogicalKind::XRough { phi1: phi1.to_vec(), phi2: phi2.to_vec() },
            holonomy: self.holonomy(),
        })
    }

    pub fn make_smooth_z(&self, phi: &[usize]) -> Result<LogicalOp> {
        if !self.smooth {
            return Err(Error::WrongShape("smooth logical operators need a smooth code".into()));
        }
        self.check_hom(phi)?;
        Ok(LogicalOp { kind: LogicalKind::ZSmooth { phi: phi.to_vec() }, holonomy: self.holonomy() })
    }

    pub fn make_smooth_x(&self, phi1: &[usize], phi2: &[usize]) -> Result<LogicalOp> {
        if !self.smooth {
            return Err(Error::WrongShape("smooth logical operators need a smooth code".into()));
        }
        self.check_hom(phi1)?;
        self.check_hom(phi2)?;
        Ok(LogicalOp {
            kind: LogicalKind::XSmooth { phi1: phi1.to_vec(), phi2: phi2.to_vec() },
            holonomy: self.holonomy(),
        })
    }
}

/// Codespace dimension of a quantum double code.
pub fn codespace_dim(code: &GroupCssCode, budget: &Budget) -> Result<DimensionReport> {
    Topology::from_code(code)?.codespace_dim(budget)
}

/// Z-distance of a quantum double code as a holonomy systole.
pub fn systole_dz(code: &GroupCssCode, budget: &Budget) -> Result<usize> {
    Topology::from_code(code)?.systole_dz(budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::code_from_complex;
    use crate::complex::{disk_with_boundaries, presentation_complex, rose, torus_grid};

    #[test]
    fn commuting_pairs_in_d8() {
        let g = FiniteGroup::dihedral(8).unwrap();
        let p = rose(2, &[vec![1, 2, -1, -2]]).unwrap().presentation_pi1().unwrap();
        let homs = count_hom(&p, &g, &Budget::default()).unwrap();
        let centralizers: usize = (0..8).map(|a| (0..8).filter(|&b| g.mul(a, b) == g.mul(b, a)).count()).sum();
        assert_eq!(homs.len(), centralizers);
        assert_eq!(homs.len(), 40);
    }

    #[test]
    fn relator_a_forces_identity() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let c = presentation_complex(1, &[GroupWord::from_signed(&[1]).unwrap()]).unwrap();
        let homs = count_hom(&c.presentation_pi1().unwrap(), &g, &Budget::default()).unwrap();
        assert_eq!(homs.maps, vec![vec![0]]);
    }

    #[test]
    fn smooth_torus_dimensions() {
        let d8 = FiniteGroup::dihedral(8).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c = rose(2, &[vec![1, 2, -1, -2]]).unwrap();
        let b = Budget::default();
        assert_eq!(codespace_dim(&code_from_complex(&c, &d8).unwrap(), &b).unwrap().dim, 22);
        assert_eq!(codespace_dim(&code_from_complex(&c, &s3).unwrap(), &b).unwrap().dim, 8);
    }

    #[test]
    fn disk_dimension() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let code = code_from_complex(&disk_with_boundaries(3, &[]).unwrap(), &g).unwrap();
        assert_eq!(codespace_dim(&code, &Budget::default()).unwrap().dim, 36);
    }

    #[test]
    fn toric_systole() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let b = Budget::default();
        for k in 2..5 {
            let code = code_from_complex(&torus_grid(k).unwrap(), &g).unwrap();
            assert_eq!(systole_dz(&code, &b).unwrap(), k);
        }
    }
}
