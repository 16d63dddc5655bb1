//! Finite groups given by an explicit Cayley table.
//!
//! Element `0` is always the identity. Every constructor funnels through the
//! same table representation, so the structural queries below work for any
//! group regardless of where it came from.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};

/// Declarative description of a group, as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    /// Cyclic group of order `m`.
    Cyclic {
        m: usize,
    },
    /// Direct power `Z_m^l`.
    Power {
        m: usize,
        l: usize,
    },
    /// Dihedral group with `order` elements (so `order / 2` rotations).
    Dihedral {
        order: usize,
    },
    Symmetric {
        n: usize,
    },
    Alternating {
        n: usize,
    },
    /// `PSL_2(Z_p)` for a prime `p`.
    Psl2 {
        p: u64,
    },
    Product {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
    /// Row-major Cayley table of a group of order `sqrt(table.len())`.
    Table {
        table: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

impl GroupSpec {
    /// Order of the described group, computed without building it.
    pub fn order(&self) -> Result<u64> {
        let fact = |n: usize| (1..=n as u64).try_fold(1u64, |a, b| a.checked_mul(b));
        let overflow = || Error::InvalidParams("group order overflows".into());
        Ok(match self {
            GroupSpec::Cyclic { m } => *m as u64,
            GroupSpec::Power { m, l } => (*m as u64).checked_pow(*l as u32).ok_or_else(overflow)?,
            GroupSpec::Dihedral { order } => *order as u64,
            GroupSpec::Symmetric { n } => fact(*n).ok_or_else(overflow)?,
            GroupSpec::Alternating { n } => {
                let f = fact(*n).ok_or_else(overflow)?;
                if *n >= 2 {
                    f / 2
                } else {
                    f
                }
            }
            GroupSpec::Psl2 { p } => {
                if *p == 2 {
                    6
                } else {
                    p.checked_mul(p * p - 1).ok_or_else(overflow)? / 2
                }
            }
            GroupSpec::Product { left, right } => left.order()?.checked_mul(right.order()?).ok_or_else(overflow)?,
            GroupSpec::Table { table, .. } => (table.len() as f64).sqrt().round() as u64,
        })
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        FiniteGroup::from_spec(self, &Budget::default())
    }
}

/// A subgroup stored as a sorted member list plus a membership mask over the
/// parent group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    /// Order of the parent group this subgroup lives in.
    pub fn parent_order(&self) -> usize {
        self.mask.len()
    }

    /// True when `self` is a subgroup of `other`.
    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let members: Vec<usize> = self.members.iter().copied().filter(|&g| other.contains(g)).collect();
        let mut mask = vec![false; self.mask.len()];
        for &g in &members {
            mask[g] = true;
        }
        Subgroup { members, mask }
    }
}

/// Conjugacy classes of a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClassSet {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

/// Results of the structural queries, bundled for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureSummary {
    pub order: usize,
    pub is_abelian: bool,
    pub center_order: usize,
    pub commutator_order: usize,
    pub class_sizes: Vec<usize>,
    pub is_simple: bool,
}

#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
    classes: OnceLock<ConjugacyClassSet>,
    generators: OnceLock<Vec<usize>>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            labels: self.labels.clone(),
            classes: self.classes.clone(),
            generators: self.generators.clone(),
        }
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for FiniteGroup {}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// All permutations of `0..n` in lexicographic order (identity first).
fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

fn is_even_permutation(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

fn cycle_notation(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = p[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

impl FiniteGroup {
    /// Builds a group from the spec, refusing anything above `budget.order_cap`.
    pub fn from_spec(spec: &GroupSpec, budget: &Budget) -> Result<FiniteGroup> {
        if let GroupSpec::Psl2 { p } = spec {
            if !is_prime(*p) {
                return Err(Error::NotPrime(*p));
            }
        }
        let order = spec.order()?;
        if order > budget.order_cap {
            return Err(Error::OrderCap { order, cap: budget.order_cap });
        }
        match spec {
            GroupSpec::Cyclic { m } => Self::cyclic(*m),
            GroupSpec::Power { m, l } => Self::power(*m, *l),
            GroupSpec::Dihedral { order } => Self::dihedral(*order),
            GroupSpec::Symmetric { n } => Self::symmetric(*n),
            GroupSpec::Alternating { n } => Self::alternating(*n),
            GroupSpec::Psl2 { p } => Self::psl2(*p),
            GroupSpec::Product { left, right } => {
                let a = Self::from_spec(left, budget)?;
                let b = Self::from_spec(right, budget)?;
                Ok(Self::direct_product(&a, &b))
            }
            GroupSpec::Table { table, labels } => Self::from_table(table, labels.clone()),
        }
    }

    /// Builds the table from an explicit element list whose first entry is the
    /// identity. Products must stay inside the list.
    pub fn from_elements<T, F>(elems: Vec<T>, op: F, labels: Vec<String>) -> Result<FiniteGroup>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let n = elems.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty element list".into()));
        }
        let index: HashMap<&T, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != n {
            return Err(Error::InvalidGroup("duplicate elements".into()));
        }
        let mut mul = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c = op(a, b);
                let k = *index.get(&c).ok_or_else(|| Error::InvalidGroup("element set is not closed".into()))?;
                mul[i * n + j] = k as u32;
            }
        }
        for j in 0..n {
            if mul[j] as usize != j {
                return Err(Error::InvalidGroup("first element is not the identity".into()));
            }
        }
        Self::from_raw(n, mul, labels)
    }

    fn from_raw(n: usize, mul: Vec<u32>, labels: Vec<String>) -> Result<FiniteGroup> {
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
            if inv[a] == u32::MAX {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
        }
        Ok(FiniteGroup { order: n, mul, inv, labels, classes: OnceLock::new(), generators: OnceLock::new() })
    }

    pub fn trivial() -> FiniteGroup {
        Self::cyclic(1).expect("trivial group")
    }

    pub fn cyclic(m: usize) -> Result<FiniteGroup> {
        if m == 0 {
            return Err(Error::InvalidParams("cyclic group needs m >= 1".into()));
        }
        let mul = (0..m * m).map(|k| ((k / m + k % m) % m) as u32).collect();
        Self::from_raw(m, mul, (0..m).map(|i| i.to_string()).collect())
    }

    /// `Z_m^l`, with element index equal to the base-`m` digits read
    /// little-endian.
    pub fn power(m: usize, l: usize) -> Result<FiniteGroup> {
        if m == 0 {
            return Err(Error::InvalidParams("power group needs m >= 1".into()));
        }
        let n = m.pow(l as u32);
        let digits = |mut x: usize| {
            let mut d = vec![0; l];
            for slot in d.iter_mut() {
                *slot = x % m;
                x /= m;
            }
            d
        };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let mut c = 0;
                for k in (0..l).rev() {
                    c = c * m + (da[k] + db[k]) % m;
                }
                mul[a * n + b] = c as u32;
            }
        }
        let labels = (0..n)
            .map(|x| {
                let d: Vec<String> = digits(x).iter().map(|v| v.to_string()).collect();
                format!("({})", d.join(","))
            })
            .collect();
        Self::from_raw(n, mul, labels)
    }

    /// Dihedral group of the given (even) order. Element `i + m*j` is
    /// `r^i s^j` with `m = order / 2`, so `r` has index 1 and `s` index `m`.
    pub fn dihedral(order: usize) -> Result<FiniteGroup> {
        if order < 2 || !order.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("dihedral order {order} must be even and >= 2")));
        }
        let m = order / 2;
        let mut mul = vec![0u32; order * order];
        for x in 0..order {
            let (a, b) = (x % m, x / m);
            for y in 0..order {
                let (c, d) = (y % m, y / m);
                let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
                mul[x * order + y] = (rot + m * ((b + d) % 2)) as u32;
            }
        }
        let labels = (0..order)
            .map(|x| {
                let (a, b) = (x % m, x / m);
                let r = match a {
                    0 => String::new(),
                    1 => "r".into(),
                    _ => format!("r^{a}"),
                };
                match (r.is_empty(), b) {
                    (true, 0) => "e".into(),
                    (false, 0) => r,
                    (true, _) => "s".into(),
                    (false, _) => format!("{r}s"),
                }
            })
            .collect();
        Self::from_raw(order, mul, labels)
    }

    /// Symmetric group; permutations compose right to left.
    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        Self::permutation_group(permutations(n))
    }

    pub fn alternating(n: usize) -> Result<FiniteGroup> {
        Self::permutation_group(permutations(n).into_iter().filter(|p| is_even_permutation(p)).collect())
    }

    fn permutation_group(perms: Vec<Vec<u8>>) -> Result<FiniteGroup> {
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_elements(perms, |a, b| b.iter().map(|&x| a[x as usize]).collect::<Vec<u8>>(), labels)
    }

    /// `PSL_2(Z_p)` by enumerating determinant-one matrices modulo `±I`.
    pub fn psl2(p: u64) -> Result<FiniteGroup> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let canon = |m: [u64; 4]| {
            let neg = m.map(|x| (p - x) % p);
            if neg < m {
                neg
            } else {
                m
            }
        };
        let identity = canon([1, 0, 0, 1]);
        let mut elems = vec![identity];
        let mut seen = std::collections::HashSet::from([identity]);
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - b * c) % p == 1 {
                            let m = canon([a, b, c, d]);
                            if seen.insert(m) {
                                elems.push(m);
                            }
                        }
                    }
                }
            }
        }
        let labels = elems.iter().map(|m| format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3])).collect();
        Self::from_elements(
            elems,
            |x, y| {
                canon([
                    (x[0] * y[0] + x[1] * y[2]) % p,
                    (x[0] * y[1] + x[1] * y[3]) % p,
                    (x[2] * y[0] + x[3] * y[2]) % p,
                    (x[2] * y[1] + x[3] * y[3]) % p,
                ])
            },
            labels,
        )
    }

    /// Direct product; element `(a, b)` has index `a + |A| * b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let p = a.mul(x % na, y % na);
                let q = b.mul(x / na, y / na);
                mul[x * n + y] = (p + na * q) as u32;
            }
        }
        let labels = (0..n).map(|x| format!("({},{})", a.label(x % na), b.label(x / na))).collect();
        Self::from_raw(n, mul, labels).expect("product of groups is a group")
    }

    /// Validates an explicit row-major table and relabels it so the identity
    /// sits at index 0.
    pub fn from_table(table: &[usize], labels: Option<Vec<String>>) -> Result<FiniteGroup> {
        let n = (table.len() as f64).sqrt().round() as usize;
        if n == 0 || n * n != table.len() {
            return Err(Error::InvalidGroup(format!("table length {} is not a positive square", table.len())));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::InvalidGroup("label count does not match order".into()));
            }
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidGroup(format!("entry {bad} out of range")));
        }
        let t = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                if std::mem::replace(&mut row[t(a, b)], true) {
                    return Err(Error::InvalidGroup(format!("row {a} is not a permutation")));
                }
                if std::mem::replace(&mut col[t(b, a)], true) {
                    return Err(Error::InvalidGroup(format!("column {a} is not a permutation")));
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|g| t(e, g) == g && t(g, e) == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let assoc = |a: usize, b: usize, c: usize| t(t(a, b), c) == t(a, t(b, c));
        if n <= 256 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..200_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
        // swap e and 0
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(t(a, b)) as u32;
            }
        }
        let labels = match labels {
            Some(l) => (0..n).map(|x| l[relabel(x)].clone()).collect(),
            None => (0..n).map(|x| relabel(x).to_string()).collect(),
        };
        Self::from_raw(n, mul, labels)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g h g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(g) } else { g };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks an element up by its label.
    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Row-major copy of the multiplication table.
    pub fn table(&self) -> Vec<usize> {
        self.mul.iter().map(|&x| x as usize).collect()
    }

    fn mask_to_subgroup(&self, mut members: Vec<usize>) -> Subgroup {
        members.sort_unstable();
        let mut mask = vec![false; self.order];
        for &g in &members {
            mask[g] = true;
        }
        Subgroup { members, mask }
    }

    /// Smallest subgroup containing `generators`. Panics on out-of-range
    /// indices; use [`FiniteGroup::try_subgroup`] for untrusted input.
    pub fn subgroup_closure(&self, generators: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut members = vec![0];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &s in generators {
                let y = self.mul(x, s);
                if !mask[y] {
                    mask[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        self.mask_to_subgroup(members)
    }

    pub fn try_subgroup(&self, generators: &[usize]) -> Result<Subgroup> {
        if let Some(&bad) = generators.iter().find(|&&g| g >= self.order) {
            return Err(Error::NotInGroup { index: bad, order: self.order });
        }
        Ok(self.subgroup_closure(generators))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.mask_to_subgroup(vec![0])
    }

    pub fn whole(&self) -> Subgroup {
        self.mask_to_subgroup((0..self.order).collect())
    }

    /// Greedy generating set of a subgroup: walk its members in index order
    /// and keep each one not already generated.
    pub fn subgroup_generators(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.trivial_subgroup();
        for &g in h.members() {
            if !current.contains(g) {
                gens.push(g);
                current = self.subgroup_closure(&gens);
                if current.order() == h.order() {
                    break;
                }
            }
        }
        gens
    }

    /// Cached generating set of the whole group.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| self.subgroup_generators(&self.whole()))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let members = (0..self.order).filter(|&z| gens.iter().all(|&g| self.mul(g, z) == self.mul(z, g))).collect();
        self.mask_to_subgroup(members)
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClassSet {
        self.classes.get_or_init(|| {
            let gens = self.generators().to_vec();
            let mut class_of = vec![usize::MAX; self.order];
            let mut classes = Vec::new();
            for g in 0..self.order {
                if class_of[g] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                class_of[g] = id;
                let mut class = vec![g];
                let mut i = 0;
                while i < class.len() {
                    let x = class[i];
                    for &t in &gens {
                        let y = self.conj(t, x);
                        if class_of[y] == usize::MAX {
                            class_of[y] = id;
                            class.push(y);
                        }
                    }
                    i += 1;
                }
                class.sort_unstable();
                classes.push(class);
            }
            ConjugacyClassSet { classes, class_of }
        })
    }

    /// Smallest normal subgroup containing `elems`.
    pub fn normal_closure(&self, elems: &[usize]) -> Subgroup {
        let cc = self.conjugacy_classes();
        let mut gens: Vec<usize> = Vec::new();
        for &g in elems {
            gens.extend_from_slice(&cc.classes[cc.class_of[g]]);
        }
        gens.sort_unstable();
        gens.dedup();
        self.subgroup_closure(&gens)
    }

    /// `[G, G]`, as the normal closure of the commutators of a generating set.
    pub fn commutator_subgroup(&self) -> Subgroup {
        let gens = self.generators();
        let comms: Vec<usize> =
            gens.iter().flat_map(|&a| gens.iter().map(move |&b| (a, b))).map(|(a, b)| self.commutator(a, b)).collect();
        self.normal_closure(&comms)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let hg = self.subgroup_generators(h);
        self.generators().iter().all(|&t| hg.iter().all(|&x| h.contains(self.conj(t, x))))
    }

    /// True when `g K g^-1 = K`.
    pub fn normalizes(&self, g: usize, k: &Subgroup) -> bool {
        k.members().iter().all(|&x| k.contains(self.conj(g, x)))
    }

    /// No proper nontrivial normal subgroup. The trivial group is not simple.
    pub fn is_simple(&self) -> bool {
        if self.order == 1 {
            return false;
        }
        let cc = self.conjugacy_classes();
        cc.classes.iter().filter(|c| c[0] != 0).all(|c| self.normal_closure(&c[..1]).order() == self.order)
    }

    pub fn summary(&self) -> StructureSummary {
        StructureSummary {
            order: self.order,
            is_abelian: self.is_abelian(),
            center_order: self.center().order(),
            commutator_order: self.commutator_subgroup().order(),
            class_sizes: self.conjugacy_classes().classes.iter().map(|c| c.len()).collect(),
            is_simple: self.is_simple(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_commutator_subgroups() {
        // [D8, D8] = <r^2>, not the full rotation subgroup
        let d8 = FiniteGroup::dihedral(8).unwrap();
        let c = d8.commutator_subgroup();
        assert_eq!(c.order(), 2);
        assert!(c.contains(d8.element("r").map(|r| d8.pow(r, 2)).unwrap()));
        // odd rotation count: the commutator subgroup is all rotations
        assert_eq!(FiniteGroup::dihedral(10).unwrap().commutator_subgroup().order(), 5);
    }

    #[test]
    fn dihedral_relations() {
        let g = FiniteGroup::dihedral(8).unwrap();
        let r = g.element("r").unwrap();
        let s = g.element("s").unwrap();
        assert_eq!(g.pow(r, 4), 0);
        assert_eq!(g.pow(s, 2), 0);
        assert_eq!(g.mul(g.mul(s, r), s), g.inv(r));
        assert_eq!(g.subgroup_closure(&[r]).order(), 4);
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.mul(0, 0), 0);
        assert!(!g.is_simple());
    }

    #[test]
    fn psl2_orders() {
        assert_eq!(FiniteGroup::psl2(2).unwrap().order(), 6);
        assert_eq!(FiniteGroup::psl2(3).unwrap().order(), 12);
        assert_eq!(FiniteGroup::psl2(5).unwrap().order(), 60);
        assert_eq!(FiniteGroup::psl2(7).unwrap().order(), 168);
        assert_eq!(FiniteGroup::psl2(4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn cap_is_enforced() {
        let budget = Budget { order_cap: 100, ..Budget::default() };
        let err = FiniteGroup::from_spec(&GroupSpec::Symmetric { n: 5 }, &budget).unwrap_err();
        assert_eq!(err, Error::OrderCap { order: 120, cap: 100 });
    }

    #[test]
    fn table_relabels_identity() {
        // Z3 written with the identity at index 2.
        let table = vec![1, 2, 0, 2, 0, 1, 0, 1, 2];
        let g = FiniteGroup::from_table(&table, None).unwrap();
        for x in 0..3 {
            assert_eq!(g.mul(0, x), x);
        }
        assert!(FiniteGroup::from_table(&[0, 1, 1, 1], None).is_err());
        assert!(FiniteGroup::from_table(&[0, 1, 2], None).is_err());
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec: GroupSpec = serde_json::from_str(r#"{"kind":"dihedral","order":8}"#).unwrap();
        assert_eq!(spec, GroupSpec::Dihedral { order: 8 });
        let spec: GroupSpec = serde_json::from_str(
            r#"{"kind":"product","left":{"kind":"cyclic","m":2},"right":{"kind":"symmetric","n":3}}"#,
        )
        .unwrap();
        assert_eq!(spec.build().unwrap().order(), 12);
    }
}
