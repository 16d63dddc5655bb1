//! Brute-force ground truth: admissible configurations, X-orbit codewords,
//! Knill-Laflamme distances and exact operator application.
//!
//! A configuration `c` in `G^n` is stored as the mixed-radix integer
//! `sum c[i] |G|^i`.

use std::collections::{BTreeMap, HashMap};

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::budget::{pow_sat, Budget};
use crate::code::GroupCssCode;
use crate::error::{Error, Result};

pub fn encode(config: &[usize], order: usize) -> u64 {
    config.iter().rev().fold(0u64, |acc, &g| acc * order as u64 + g as u64)
}

pub fn decode(mut id: u64, n: usize, order: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push((id % order as u64) as usize);
        id /= order as u64;
    }
    out
}

/// The set of configurations satisfying every Z-check, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSet {
    pub n: usize,
    pub order: usize,
    pub configs: Vec<u64>,
}

impl AdmissibleSet {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.configs.binary_search(&id).ok()
    }

    pub fn config(&self, i: usize) -> Vec<usize> {
        decode(self.configs[i], self.n, self.order)
    }
}

/// Enumerates `C_Z` by assigning qudits in order and testing each check as
/// soon as its last qudit is set.
pub fn admissible_set(code: &GroupCssCode, budget: &Budget) -> Result<AdmissibleSet> {
    let order = code.group.order();
    let n = code.n;
    Budget::check("configurations", pow_sat(order, n), budget.config_cap)?;
    let subgroups: Vec<_> = (0..code.z_checks.len()).map(|j| code.check_subgroup(j)).collect();
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n.max(1)];
    for (j, z) in code.z_checks.iter().enumerate() {
        let last = z.word.letters.iter().map(|l| l.var).max().unwrap_or(0);
        ready[last].push(j);
    }
    let mut configs = Vec::new();
    if n == 0 {
        return Ok(AdmissibleSet { n, order, configs: vec![0] });
    }
    let mut config = vec![0usize; n];
    let mut depth = 0usize;
    // iterative backtracking; config[depth] holds the candidate value
    loop {
        let ok = ready[depth].iter().all(|&j| subgroups[j].contains(code.check_value(j, &config)));
        if ok && depth + 1 == n {
            configs.push(encode(&config, order));
        }
        if ok && depth + 1 < n {
            depth += 1;
            config[depth] = 0;
            continue;
        }
        loop {
            config[depth] += 1;
            if config[depth] < order {
                break;
            }
            config[depth] = 0;
            if depth == 0 {
                configs.sort_unstable();
                return Ok(AdmissibleSet { n, order, configs });
            }
            depth -= 1;
        }
    }
}

/// Partition of `C_Z` into X-orbits; each orbit is one codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codewords {
    pub admissible: AdmissibleSet,
    /// Orbits as sorted configuration ids, ordered by their smallest member.
    pub orbits: Vec<Vec<u64>>,
    /// Orbit number of each admissible configuration, by position.
    pub orbit_of: Vec<usize>,
}

impl Codewords {
    pub fn dim(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_of_config(&self, config: &[usize]) -> Option<usize> {
        let id = encode(config, self.admissible.order);
        self.admissible.index_of(id).map(|i| self.orbit_of[i])
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Orbits of the admissible set under the X generators. A generator that
/// leaves `C_Z` is reported as an incompatibility.
pub fn codewords(code: &GroupCssCode, budget: &Budget) -> Result<Codewords> {
    let adm = admissible_set(code, budget)?;
    codewords_from(code, adm)
}

pub fn codewords_from(code: &GroupCssCode, adm: AdmissibleSet) -> Result<Codewords> {
    let mut parent: Vec<usize> = (0..adm.len()).collect();
    for i in 0..adm.len() {
        let config = adm.config(i);
        for (v, fam) in code.x_families.iter().enumerate() {
            for &g in &fam.allowed {
                let mut moved = config.clone();
                code.apply_family(v, g, &mut moved);
                let Some(k) = adm.index_of(encode(&moved, adm.order)) else {
                    let check = (0..code.z_checks.len())
                        .find(|&j| !code.check_subgroup(j).contains(code.check_value(j, &moved)))
                        .unwrap_or(0);
                    return Err(Error::Incompatible { family: v, check, element: g, config });
                };
                let (a, b) = (find(&mut parent, i), find(&mut parent, k));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut orbit_id: HashMap<usize, usize> = HashMap::new();
    let mut orbits: Vec<Vec<u64>> = Vec::new();
    let mut orbit_of = vec![0; adm.len()];
    for i in 0..adm.len() {
        let r = find(&mut parent, i);
        let id = *orbit_id.entry(r).or_insert_with(|| {
            orbits.push(Vec::new());
            orbits.len() - 1
        });
        orbits[id].push(adm.configs[i]);
        orbit_of[i] = id;
    }
    Ok(Codewords { admissible: adm, orbits, orbit_of })
}

/// Outcome of a Knill-Laflamme distance search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "value")]
pub enum Distance {
    Exact(usize),
    /// No violation up to the searched support size.
    AtLeast(usize),
    /// The code space has dimension at most one.
    Undefined,
}

impl Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            Distance::Exact(d) => Some(d),
            _ => None,
        }
    }
}

/// Calls `f` on every `m`-subset of `0..n` in lexicographic order until it
/// returns true.
fn any_subset(n: usize, m: usize, mut f: impl FnMut(&[usize]) -> Result<bool>) -> Result<bool> {
    if m > n {
        return Ok(false);
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        if f(&idx)? {
            return Ok(true);
        }
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if idx[i] != i + n - m {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn binomial(n: usize, m: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..m.min(n) {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Smallest support on which some diagonal operator tells two codewords
/// apart. A diagonal operator supported on `S` violates the Knill-Laflamme
/// condition exactly when two orbits restrict to `S` with different value
/// distributions, so only those distributions are compared.
pub fn kl_distance_z(cw: &Codewords, m_max: usize, budget: &Budget) -> Result<Distance> {
    if cw.dim() <= 1 {
        return Ok(Distance::Undefined);
    }
    let n = cw.admissible.n;
    let order = cw.admissible.order;
    let configs: Vec<Vec<usize>> = (0..cw.admissible.len()).map(|i| cw.admissible.config(i)).collect();
    let sizes: Vec<i128> = cw.orbits.iter().map(|o| o.len() as i128).collect();
    for m in 1..=m_max.min(n) {
        Budget::check("diagonal supports", binomial(n, m).saturating_mul(configs.len() as u128), budget.op_cap)?;
        let found = any_subset(n, m, |support| {
            let mut hist: HashMap<u64, Vec<i128>> = HashMap::new();
            for (i, c) in configs.iter().enumerate() {
                let key = support.iter().fold(0u64, |a, &q| a * order as u64 + c[q] as u64);
                hist.entry(key).or_insert_with(|| vec![0; sizes.len()])[cw.orbit_of[i]] += 1;
            }
            Ok(hist.values().any(|counts| (1..counts.len()).any(|b| counts[0] * sizes[b] != counts[b] * sizes[0])))
        })?;
        if found {
            return Ok(Distance::Exact(m));
        }
    }
    Ok(Distance::AtLeast(m_max.min(n) + 1))
}

/// Smallest support of an X-type operator `x_q -> l_q x_q r_q^-1` that maps
/// one codeword onto another or acts unevenly on the codewords. Operators
/// act nontrivially on every qudit of the support.
pub fn kl_distance_x(code: &GroupCssCode, cw: &Codewords, m_max: usize, budget: &Budget) -> Result<Distance> {
    if cw.dim() <= 1 {
        return Ok(Distance::Undefined);
    }
    let g = &code.group;
    let order = g.order();
    let n = cw.admissible.n;
    let configs: Vec<Vec<usize>> = (0..cw.admissible.len()).map(|i| cw.admissible.config(i)).collect();
    let sizes: Vec<i128> = cw.orbits.iter().map(|o| o.len() as i128).collect();
    let dim = cw.dim();
    let pairs = order * order - 1;
    for m in 1..=m_max.min(n) {
        let work = binomial(n, m).saturating_mul(pow_sat(pairs, m)).saturating_mul(configs.len() as u128);
        Budget::check("X-type operator applications", work, budget.op_cap)?;
        let found = any_subset(n, m, |support| {
            // each qudit gets a non-identity pair (l, r), coded as 1..order^2
            let mut digits = vec![1usize; m];
            loop {
                let mut counts = vec![0i128; dim * dim];
                for (i, c) in configs.iter().enumerate() {
                    let mut moved = c.clone();
                    for (&d, &q) in digits.iter().zip(support) {
                        let (l, r) = (d % order, d / order);
                        moved[q] = g.mul(g.mul(l, moved[q]), g.inv(r));
                    }
                    if let Some(k) = cw.admissible.index_of(encode(&moved, order)) {
                        counts[cw.orbit_of[k] * dim + cw.orbit_of[i]] += 1;
                    }
                }
                let off = (0..dim).any(|a| (0..dim).any(|b| a != b && counts[a * dim + b] != 0));
                let uneven = (1..dim).any(|a| counts[a * dim + a] * sizes[0] != counts[0] * sizes[a]);
                if off || uneven {
                    return Ok(true);
                }
                let mut i = 0;
                loop {
                    if i == m {
                        return Ok(false);
                    }
                    digits[i] += 1;
                    if digits[i] < order * order {
                        break;
                    }
                    digits[i] = 1;
                    i += 1;
                }
            }
        })?;
        if found {
            return Ok(Distance::Exact(m));
        }
    }
    Ok(Distance::AtLeast(m_max.min(n) + 1))
}

/// Exact vector over configuration ids.
pub type State = BTreeMap<u64, Rational64>;

/// An operator given by its action on basis configurations.
pub trait BasisOperator {
    /// Image of one basis configuration as weighted configurations.
    fn act(&self, config: &[usize]) -> Vec<(Vec<usize>, Rational64)>;
}

/// Uniform superposition over an orbit, with unit weights.
pub fn orbit_state(orbit: &[u64]) -> State {
    orbit.iter().map(|&id| (id, Rational64::from_integer(1))).collect()
}

pub fn apply_operator(op: &dyn BasisOperator, n: usize, order: usize, state: &State) -> State {
    let mut out = State::new();
    for (&id, &w) in state {
        for (c, a) in op.act(&decode(id, n, order)) {
            *out.entry(encode(&c, order)).or_insert_with(Rational64::zero) += w * a;
        }
    }
    out.retain(|_, w| !w.is_zero());
    out
}

/// Applies one X-family element to a state.
pub fn apply_family_state(code: &GroupCssCode, family: usize, g: usize, state: &State) -> State {
    let order = code.group.order();
    state
        .iter()
        .map(|(&id, &w)| {
            let mut c = decode(id, code.n, order);
            code.apply_family(family, g, &mut c);
            (encode(&c, order), w)
        })
        .collect()
}

/// Applies a Z-check projector to a state.
pub fn apply_check_state(code: &GroupCssCode, check: usize, state: &State) -> State {
    let k = code.check_subgroup(check);
    state
        .iter()
        .filter(|(&id, _)| k.contains(code.check_value(check, &decode(id, code.n, code.group.order()))))
        .map(|(&id, &w)| (id, w))
        .collect()
}

/// A check that fails to commute with an operator on some admissible basis
/// configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckClash {
    Family { family: usize, element: usize, config: Vec<usize> },
    Check { check: usize, config: Vec<usize> },
}

/// Tests `[op, X_v^g] = 0` for every family element and `[op, P] = 0` for
/// every Z-check projector on each admissible basis configuration.
pub fn find_check_clash(code: &GroupCssCode, op: &dyn BasisOperator, adm: &AdmissibleSet) -> Option<CheckClash> {
    let order = code.group.order();
    let n = code.n;
    let elements: Vec<Vec<usize>> = (0..code.x_families.len()).map(|v| code.allowed(v).members().to_vec()).collect();
    for i in 0..adm.len() {
        let config = adm.config(i);
        let basis = orbit_state(&[adm.configs[i]]);
        let image = apply_operator(op, n, order, &basis);
        for check in 0..code.z_checks.len() {
            let before = apply_check_state(code, check, &image);
            let after = apply_operator(op, n, order, &apply_check_state(code, check, &basis));
            if before != after {
                return Some(CheckClash::Check { check, config });
            }
        }
        for (v, elems) in elements.iter().enumerate() {
            for &g in elems {
                let left = apply_family_state(code, v, g, &image);
                let right = apply_operator(op, n, order, &apply_family_state(code, v, g, &basis));
                if left != right {
                    return Some(CheckClash::Family { family: v, element: g, config: config.clone() });
                }
            }
        }
    }
    None
}
