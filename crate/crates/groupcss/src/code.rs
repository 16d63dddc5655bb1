//! Group CSS codes: X-check families, subgroup Z-checks, the quantum double
//! construction and structural verification.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::budget::{pow_sat, Budget};
use crate::complex::{ghost_identification, raw_from_slots, CwComplex, VertexKind};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupSpec, Subgroup};
use crate::words::{GroupWord, Letter};
use crate::FORMAT_VERSION;

/// Which side of a qudit an X-check multiplies: `Left` maps `x -> g x`,
/// `Right` maps `x -> x g^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

/// A parametric X-check: for each `g` in the allowed subgroup, multiply every
/// listed qudit on the listed side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XCheckFamily {
    pub label: usize,
    pub actions: Vec<(usize, Side)>,
    /// Generators of the allowed subgroup.
    pub allowed: Vec<usize>,
}

/// Projector onto configurations whose word product (letters index qudits)
/// lies in the subgroup generated by `subgroup` (trivial when empty).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZCheck {
    pub word: GroupWord,
    #[serde(default)]
    pub subgroup: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCssCode {
    pub group: FiniteGroup,
    pub n: usize,
    pub x_families: Vec<XCheckFamily>,
    pub z_checks: Vec<ZCheck>,
    /// Complex the code was built from, if any.
    pub complex: Option<CwComplex>,
}

/// Serialized form of a code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub format: String,
    pub group: GroupSpec,
    pub n: usize,
    pub x_families: Vec<XCheckFamily>,
    pub z_checks: Vec<ZCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<CwComplex>,
}

impl CodeDocument {
    pub fn into_code(self, budget: &Budget) -> Result<GroupCssCode> {
        let group = FiniteGroup::from_spec(&self.group, budget)?;
        GroupCssCode::new(group, self.n, self.x_families, self.z_checks, self.complex)
    }
}

impl GroupCssCode {
    pub fn new(
        group: FiniteGroup,
        n: usize,
        x_families: Vec<XCheckFamily>,
        z_checks: Vec<ZCheck>,
        complex: Option<CwComplex>,
    ) -> Result<GroupCssCode> {
        let order = group.order();
        let elem = |g: usize| {
            if g < order {
                Ok(())
            } else {
                Err(Error::NotInGroup { index: g, order })
            }
        };
        for (i, f) in x_families.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &(q, side) in &f.actions {
                if q >= n {
                    return Err(Error::InvalidParams(format!("family {i} acts on qudit {q} >= {n}")));
                }
                if !seen.insert((q, side)) {
                    return Err(Error::InvalidParams(format!("family {i} lists qudit {q} side {side:?} twice")));
                }
            }
            f.allowed.iter().try_for_each(|&g| elem(g))?;
        }
        for (j, z) in z_checks.iter().enumerate() {
            if z.word.letters.is_empty() {
                return Err(Error::InvalidParams(format!("Z-check {j} is empty")));
            }
            if let Some(l) = z.word.letters.iter().find(|l| l.var >= n) {
                return Err(Error::InvalidParams(format!("Z-check {j} reads qudit {} >= {n}", l.var)));
            }
            z.subgroup.iter().try_for_each(|&g| elem(g))?;
        }
        Ok(GroupCssCode { group, n, x_families, z_checks, complex })
    }

    pub fn to_document(&self, spec: Option<&GroupSpec>) -> CodeDocument {
        let group = spec.cloned().unwrap_or_else(|| GroupSpec::Table {
            table: self.group.table(),
            labels: Some(self.group.labels().to_vec()),
        });
        CodeDocument {
            format: FORMAT_VERSION.to_string(),
            group,
            n: self.n,
            x_families: self.x_families.clone(),
            z_checks: self.z_checks.clone(),
            complex: self.complex.clone(),
        }
    }

    pub fn allowed(&self, family: usize) -> Subgroup {
        self.group.subgroup_closure(&self.x_families[family].allowed)
    }

    pub fn check_subgroup(&self, check: usize) -> Subgroup {
        self.group.subgroup_closure(&self.z_checks[check].subgroup)
    }

    /// Multiplies the qudits of `family` by `g` in place.
    pub fn apply_family(&self, family: usize, g: usize, config: &mut [usize]) {
        let gi = self.group.inv(g);
        for &(q, side) in &self.x_families[family].actions {
            config[q] = match side {
                Side::Left => self.group.mul(g, config[q]),
                Side::Right => self.group.mul(config[q], gi),
            };
        }
    }

    pub fn check_value(&self, check: usize, config: &[usize]) -> usize {
        self.z_checks[check].word.eval_unchecked(&self.group, config)
    }

    /// True when each `(qudit, side)` slot belongs to at most one family and
    /// every Z-check with a nontrivial subgroup has weight one.
    pub fn has_double_shape(&self) -> bool {
        let mut seen = BTreeSet::new();
        let slots_ok = self.x_families.iter().flat_map(|f| f.actions.iter()).all(|&a| seen.insert(a));
        let checks_ok =
            self.z_checks.iter().enumerate().all(|(j, z)| z.word.weight() == 1 || self.check_subgroup(j).is_trivial());
        slots_ok && checks_ok
    }

    /// Qudits read by a check, in first-occurrence order.
    pub fn check_support(&self, check: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for l in &self.z_checks[check].word.letters {
            if !out.contains(&l.var) {
                out.push(l.var);
            }
        }
        out
    }

    /// For each qudit, the families touching it.
    pub fn families_by_qudit(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for (i, f) in self.x_families.iter().enumerate() {
            for &(q, _) in &f.actions {
                if !out[q].contains(&i) {
                    out[q].push(i);
                }
            }
        }
        out
    }
}

/// Quantum double code of a complex: a qudit per edge, an X-family per
/// non-ghost vertex (left on outgoing edges, right on incoming ones), a flat
/// Z-check per face and a weight-one Z-check per edge constraint.
pub fn code_from_complex(c: &CwComplex, group: &FiniteGroup) -> Result<GroupCssCode> {
    c.validate()?;
    let mut families = Vec::new();
    for (v, kind) in c.vertices.iter().enumerate() {
        let allowed = match kind {
            VertexKind::Ghost => continue,
            VertexKind::Full => group.generators().to_vec(),
            VertexKind::Restricted { subgroup } => {
                group.try_subgroup(subgroup)?;
                subgroup.clone()
            }
        };
        let mut actions = Vec::new();
        for (e, &(t, h)) in c.edges.iter().enumerate() {
            if t == v {
                actions.push((e, Side::Left));
            }
            if h == v {
                actions.push((e, Side::Right));
            }
        }
        families.push(XCheckFamily { label: v, actions, allowed });
    }
    let mut checks: Vec<ZCheck> = c
        .faces
        .iter()
        .map(|walk| ZCheck {
            word: GroupWord::new(walk.iter().map(|&(e, o)| Letter::new(e, o)).collect()),
            subgroup: Vec::new(),
        })
        .collect();
    for (&e, h) in &c.edge_constraints {
        group.try_subgroup(h)?;
        checks.push(ZCheck { word: GroupWord::new(vec![Letter::new(e, 1)]), subgroup: h.clone() });
    }
    GroupCssCode::new(group.clone(), c.edges.len(), families, checks, Some(c.clone()))
}

/// Rebuilds a complex from a code of quantum double shape. Families become
/// vertices, uncovered qudit sides become ghosts, and ghosts are merged where
/// a check word jumps between them.
pub fn complex_from_code(code: &GroupCssCode) -> Result<CwComplex> {
    let g = &code.group;
    let mut families = Vec::new();
    for (i, f) in code.x_families.iter().enumerate() {
        let h = code.allowed(i);
        let kind = if h.order() == g.order() {
            VertexKind::Full
        } else if h.is_trivial() {
            VertexKind::Ghost
        } else {
            VertexKind::Restricted { subgroup: f.allowed.clone() }
        };
        families.push((kind, f.actions.clone()));
    }
    let mut faces = Vec::new();
    let mut constraints = BTreeMap::new();
    for (j, z) in code.z_checks.iter().enumerate() {
        let k = code.check_subgroup(j);
        if k.is_trivial() {
            faces.push(z.word.letters.iter().map(|l| (l.var, l.exp)).collect());
        } else if z.word.weight() == 1 {
            let q = z.word.letters[0].var;
            if constraints.insert(q, z.subgroup.clone()).is_some() {
                return Err(Error::NotQuantumDouble(format!("qudit {q} has two subgroup checks")));
            }
        } else {
            return Err(Error::NotQuantumDouble(format!("Z-check {j} has a nontrivial subgroup and weight > 1")));
        }
    }
    ghost_identification(&raw_from_slots(code.n, &families, faces, constraints)?)
}

/// Summary of a successful commutation or compatibility verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Overlapping (family, check) pairs examined.
    pub pairs: usize,
    /// Pairs settled by the word-shape argument.
    pub symbolic: usize,
    /// Pairs settled by enumerating configurations.
    pub brute_force: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GapPattern {
    Invariant,
    /// Check word becomes `g w g^-1`.
    Conjugated,
    Unbalanced,
}

#[cfg(test)]
fn gap_pattern(word: &GroupWord, actions: &[(usize, Side)]) -> GapPattern {
    let touched: Vec<usize> =
        (0..word.letters.len()).filter(|&i| actions.iter().any(|a| a.0 == word.letters[i].var)).collect();
    gap_pattern_at(word, actions, &touched)
}

/// How the word of a check transforms under a family, independently of `g`.
/// Only the letter positions in `touched` (sorted) are read; the family
/// acts on no other letter.
fn gap_pattern_at(word: &GroupWord, actions: &[(usize, Side)], touched: &[usize]) -> GapPattern {
    let acts = |q: usize, s: Side| actions.contains(&(q, s));
    // per letter: does it pick up `g` before it, `g^-1` after it
    let flag = |i: usize| -> (bool, bool) {
        let l = word.letters[i];
        let (left, right) = (acts(l.var, Side::Left), acts(l.var, Side::Right));
        if l.exp > 0 {
            (left, right)
        } else {
            (right, left)
        }
    };
    let last = word.letters.len() - 1;
    let mut prev: Option<(usize, (bool, bool))> = None;
    for (k, &i) in touched.iter().enumerate() {
        let f = flag(i);
        let before = match prev {
            Some((j, pf)) if j + 1 == i => pf.1,
            _ => false,
        };
        if i > 0 && before != f.0 {
            return GapPattern::Unbalanced;
        }
        if i < last && touched.get(k + 1) != Some(&(i + 1)) && f.1 {
            return GapPattern::Unbalanced;
        }
        prev = Some((i, f));
    }
    let first_flag = if touched.first() == Some(&0) { flag(0).0 } else { false };
    let last_flag = if touched.last() == Some(&last) { flag(last).1 } else { false };
    match (first_flag, last_flag) {
        (true, true) => GapPattern::Conjugated,
        (false, false) => GapPattern::Invariant,
        _ => GapPattern::Unbalanced,
    }
}

#[derive(Clone, Copy)]
enum Mode {
    Commuting,
    Compatible,
}

fn verify(code: &GroupCssCode, budget: &Budget, mode: Mode) -> Result<VerifyReport> {
    let g = &code.group;
    let by_qudit = code.families_by_qudit();
    let allowed: Vec<Subgroup> = (0..code.x_families.len()).map(|i| code.allowed(i)).collect();
    let mut report = VerifyReport::default();
    for (j, z) in code.z_checks.iter().enumerate() {
        let k = code.check_subgroup(j);
        let support = code.check_support(j);
        let mut positions: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, l) in z.word.letters.iter().enumerate() {
            for &v in &by_qudit[l.var] {
                positions.entry(v).or_default().push(i);
            }
        }
        for (v, mut touched) in positions {
            touched.dedup();
            report.pairs += 1;
            let fam = &code.x_families[v];
            let settled = match gap_pattern_at(&z.word, &fam.actions, &touched) {
                GapPattern::Invariant => true,
                GapPattern::Conjugated => fam.allowed.iter().all(|&h| g.normalizes(h, &k)),
                GapPattern::Unbalanced => false,
            };
            if settled {
                report.symbolic += 1;
                continue;
            }
            let elements: Vec<usize> = match mode {
                Mode::Commuting => allowed[v].members().to_vec(),
                Mode::Compatible => fam.allowed.clone(),
            };
            brute_force_pair(code, budget, mode, v, j, &k, &support, &elements)?;
            report.brute_force += 1;
        }
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn brute_force_pair(
    code: &GroupCssCode,
    budget: &Budget,
    mode: Mode,
    family: usize,
    check: usize,
    k: &Subgroup,
    support: &[usize],
    elements: &[usize],
) -> Result<()> {
    let g = &code.group;
    let order = g.order();
    Budget::check(
        "check-support configurations",
        pow_sat(order, support.len()).saturating_mul(elements.len().max(1) as u128),
        budget.op_cap,
    )?;
    // other checks read only inside this support; every admissible
    // configuration satisfies them, so the enumeration can skip the rest
    let inside: Vec<bool> = (0..code.n).map(|q| support.contains(&q)).collect();
    let contained: Vec<(usize, Subgroup)> = (0..code.z_checks.len())
        .filter(|&j| j != check && code.z_checks[j].word.letters.iter().all(|l| inside[l.var]))
        .map(|j| (j, code.check_subgroup(j)))
        .collect();
    let mut config = vec![0usize; code.n];
    let mut digits = vec![0usize; support.len()];
    loop {
        for (d, &q) in digits.iter().zip(support) {
            config[q] = *d;
        }
        let local = contained.iter().all(|(j, kj)| kj.contains(code.check_value(*j, &config)));
        let before = k.contains(code.check_value(check, &config));
        if local && (before || matches!(mode, Mode::Commuting)) {
            for &h in elements {
                let mut moved = config.clone();
                code.apply_family(family, h, &mut moved);
                let after = k.contains(code.check_value(check, &moved));
                if after != before {
                    return Err(match mode {
                        Mode::Commuting => Error::Commutation { family, check, element: h, config: config.clone() },
                        Mode::Compatible => Error::Incompatible { family, check, element: h, config: config.clone() },
                    });
                }
            }
        }
        // next mixed-radix digit string
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(());
            }
            digits[i] += 1;
            if digits[i] < order {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Checks that every X-family element commutes with every overlapping
/// Z-check projector. Pairs are certified from the shape of the check word
/// when possible and by enumerating the check's support otherwise; the
/// enumeration keeps only configurations satisfying the other checks that
/// live entirely inside that support.
pub fn verify_commuting_projectors(code: &GroupCssCode, budget: &Budget) -> Result<VerifyReport> {
    verify(code, budget, Mode::Commuting)
}

/// Checks that every X generator maps the admissible set into itself.
pub fn verify_compatible(code: &GroupCssCode, budget: &Budget) -> Result<VerifyReport> {
    verify(code, budget, Mode::Compatible)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub covariant: bool,
    pub abelian: bool,
    pub double_shape: bool,
    /// Checks whose subgroup is not normal.
    pub non_normal_checks: Vec<usize>,
    /// Families whose allowed subgroup is not normal.
    pub non_normal_families: Vec<usize>,
}

/// Covariance under global conjugation, tested on the generating checks:
/// conjugating every qudit by `g` sends a check word `w` to `g w g^-1` and a
/// family element `h` to `g h g^-1`, so the generating set is preserved iff
/// every check subgroup and every allowed subgroup is normal.
pub fn is_covariant(code: &GroupCssCode) -> CovarianceReport {
    let g = &code.group;
    let abelian = g.is_abelian();
    let non_normal_checks: Vec<usize> =
        (0..code.z_checks.len()).filter(|&j| !g.is_normal(&code.check_subgroup(j))).collect();
    let non_normal_families: Vec<usize> =
        (0..code.x_families.len()).filter(|&i| !g.is_normal(&code.allowed(i))).collect();
    CovarianceReport {
        covariant: abelian || (non_normal_checks.is_empty() && non_normal_families.is_empty()),
        abelian,
        double_shape: code.has_double_shape(),
        non_normal_checks,
        non_normal_families,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReduction {
    pub check: usize,
    /// Order of the reduced subgroup: 1 or `|G|`.
    pub reduced_order: usize,
    /// The check constrains nothing and can be dropped.
    pub removable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleReduction {
    pub covariant: bool,
    pub checks: Vec<CheckReduction>,
}

impl SimpleReduction {
    pub fn all_trivial(&self) -> bool {
        self.checks.iter().all(|c| c.reduced_order == 1)
    }
}

/// Values a word can take as its variables range over the group.
fn word_image(g: &FiniteGroup, word: &GroupWord, budget: &Budget) -> Result<Subgroup> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for l in &word.letters {
        *counts.entry(l.var).or_default() += 1;
    }
    if counts.values().any(|&c| c == 1) {
        return Ok(g.whole());
    }
    let vars: Vec<usize> = counts.keys().copied().collect();
    Budget::check("word image evaluations", pow_sat(g.order(), vars.len()), budget.op_cap)?;
    let width = vars.iter().max().map_or(0, |m| m + 1);
    let mut assignment = vec![0usize; width];
    let mut digits = vec![0usize; vars.len()];
    let mut hit = vec![false; g.order()];
    loop {
        for (d, &v) in digits.iter().zip(&vars) {
            assignment[v] = *d;
        }
        hit[word.eval_unchecked(g, &assignment)] = true;
        let mut i = 0;
        loop {
            if i == digits.len() {
                let values: Vec<usize> = (0..g.order()).filter(|&x| hit[x]).collect();
                return Ok(g.subgroup_closure(&values));
            }
            digits[i] += 1;
            if digits[i] < g.order() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// For a non-abelian simple group, replaces each check subgroup `K` by the
/// normal closure of `K` intersected with the values its word can take. The
/// result is trivial or the whole group; the latter marks a check that
/// constrains nothing.
pub fn z_check_simple_reduction(code: &GroupCssCode, budget: &Budget) -> Result<SimpleReduction> {
    let g = &code.group;
    if g.is_abelian() || !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let mut checks = Vec::new();
    for j in 0..code.z_checks.len() {
        let k = code.check_subgroup(j);
        let reduced = if k.is_trivial() {
            k
        } else {
            let image = word_image(g, &code.z_checks[j].word, budget)?;
            g.normal_closure(k.intersection(&image).members())
        };
        checks.push(CheckReduction {
            check: j,
            reduced_order: reduced.order(),
            removable: reduced.order() == g.order(),
        });
    }
    Ok(SimpleReduction { covariant: is_covariant(code).covariant, checks })
}

/// Four qudits, one X-family left-multiplying all of them by `h`, weight-one
/// checks confining each qudit to `<h>` and a flat check on their product.
/// With `h` an involution this is a qubit code written over a larger group.
pub fn silly_embedding(group: &FiniteGroup, h: usize) -> Result<GroupCssCode> {
    if h >= group.order() {
        return Err(Error::NotInGroup { index: h, order: group.order() });
    }
    if h == 0 || group.mul(h, h) != 0 {
        return Err(Error::InvalidParams("h must be an involution".into()));
    }
    let family = XCheckFamily { label: 0, actions: (0..4).map(|q| (q, Side::Left)).collect(), allowed: vec![h] };
    let mut checks: Vec<ZCheck> =
        (0..4).map(|q| ZCheck { word: GroupWord::new(vec![Letter::new(q, 1)]), subgroup: vec![h] }).collect();
    checks.push(ZCheck { word: GroupWord::new((0..4).map(|q| Letter::new(q, 1)).collect()), subgroup: Vec::new() });
    GroupCssCode::new(group.clone(), 4, vec![family], checks, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{rose, torus_grid};

    #[test]
    fn toric_shape() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let code = code_from_complex(&torus_grid(2).unwrap(), &g).unwrap();
        assert_eq!(code.n, 8);
        assert_eq!(code.x_families.len(), 4);
        assert_eq!(code.z_checks.len(), 4);
        assert!(code.z_checks.iter().all(|z| z.word.weight() == 4));
        assert!(code.x_families.iter().all(|f| f.actions.len() == 4));
    }

    #[test]
    fn rose_family_touches_both_sides() {
        let g = FiniteGroup::dihedral(8).unwrap();
        let code = code_from_complex(&rose(2, &[vec![1, 2, -1, -2]]).unwrap(), &g).unwrap();
        assert_eq!(code.x_families.len(), 1);
        assert_eq!(code.x_families[0].actions.len(), 4);
    }

    #[test]
    fn gap_patterns() {
        let w = GroupWord::from_signed(&[1, 2, -1, -2]).unwrap();
        let all = [(0, Side::Left), (0, Side::Right), (1, Side::Left), (1, Side::Right)];
        assert_eq!(gap_pattern(&w, &all), GapPattern::Conjugated);
        assert_eq!(gap_pattern(&w, &[(0, Side::Left)]), GapPattern::Unbalanced);
        let ab = GroupWord::from_signed(&[1, 2]).unwrap();
        assert_eq!(gap_pattern(&ab, &[(0, Side::Right), (1, Side::Left)]), GapPattern::Invariant);
    }

    #[test]
    fn incompatible_witness() {
        let g = FiniteGroup::dihedral(8).unwrap();
        let r = g.element("r").unwrap();
        let family = XCheckFamily { label: 0, actions: vec![(0, Side::Left)], allowed: g.generators().to_vec() };
        let check = ZCheck { word: GroupWord::from_signed(&[1, 2]).unwrap(), subgroup: vec![r] };
        let code = GroupCssCode::new(g.clone(), 2, vec![family], vec![check], None).unwrap();
        let err = verify_compatible(&code, &Budget::default()).unwrap_err();
        match err {
            Error::Incompatible { element, .. } => assert!(!g.subgroup_closure(&[r]).contains(element)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn silly_is_not_covariant_over_s3() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let h = (1..6).find(|&x| g.mul(x, x) == 0).unwrap();
        let code = silly_embedding(&g, h).unwrap();
        assert!(!is_covariant(&code).covariant);
        verify_commuting_projectors(&code, &Budget::default()).unwrap();
    }

    #[test]
    fn document_round_trip() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let code = code_from_complex(&torus_grid(2).unwrap(), &g).unwrap();
        let doc = code.to_document(None);
        let text = serde_json::to_string(&doc).unwrap();
        let back: CodeDocument = serde_json::from_str(&text).unwrap();
        let again = back.into_code(&Budget::default()).unwrap();
        assert_eq!(again.x_families, code.x_families);
        assert_eq!(again.z_checks, code.z_checks);
    }
}
