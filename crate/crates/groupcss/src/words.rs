//! Group words, free reduction, group laws and the two-cell decomposition of
//! freely trivial words.

use serde::{Deserialize, Serialize};

use crate::budget::{pow_sat, Budget};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub var: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(var: usize, exp: i8) -> Letter {
        debug_assert!(exp == 1 || exp == -1);
        Letter { var, exp }
    }

    pub fn inverse(self) -> Letter {
        Letter { var: self.var, exp: -self.exp }
    }
}

/// A word in variables `0..arity`. Serialized as signed 1-based integers, so
/// `[1, -2, 2, -1]` is `a b^-1 b a^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl TryFrom<Vec<i64>> for GroupWord {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        GroupWord::from_signed(&v)
    }
}

impl From<GroupWord> for Vec<i64> {
    fn from(w: GroupWord) -> Vec<i64> {
        w.to_signed()
    }
}

impl std::fmt::Display for GroupWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let names = "abcdefghijklmnopqrstuvwxyz".as_bytes();
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match names.get(l.var) {
                Some(&c) => write!(f, "{}", c as char)?,
                None => write!(f, "x{}", l.var)?,
            }
            if l.exp < 0 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> GroupWord {
        GroupWord { letters }
    }

    pub fn from_signed(v: &[i64]) -> Result<GroupWord> {
        let letters = v
            .iter()
            .map(|&x| {
                if x == 0 {
                    Err(Error::InvalidParams("word letters are nonzero signed 1-based integers".into()))
                } else {
                    Ok(Letter::new(x.unsigned_abs() as usize - 1, x.signum() as i8))
                }
            })
            .collect::<Result<_>>()?;
        Ok(GroupWord { letters })
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| (l.var as i64 + 1) * l.exp as i64).collect()
    }

    /// `a^k` in variable 0.
    pub fn power(k: usize) -> GroupWord {
        GroupWord { letters: vec![Letter::new(0, 1); k] }
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator() -> GroupWord {
        GroupWord::from_signed(&[1, 2, -1, -2]).unwrap()
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn arity(&self) -> usize {
        self.letters.iter().map(|l| l.var + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn reduce_free(&self) -> GroupWord {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        GroupWord { letters: stack }
    }

    /// Free reduction followed by stripping inverse pairs at the two ends.
    pub fn reduce_cyclic(&self) -> GroupWord {
        let mut w = self.reduce_free().letters;
        while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
            w.pop();
            w.remove(0);
        }
        GroupWord { letters: w }
    }

    pub fn is_freely_trivial(&self) -> bool {
        self.reduce_free().letters.is_empty()
    }

    /// Ordered product of the substituted letters.
    pub fn evaluate(&self, g: &FiniteGroup, assignment: &[usize]) -> Result<usize> {
        if assignment.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: assignment.len() });
        }
        if let Some(&bad) = assignment.iter().find(|&&x| x >= g.order()) {
            return Err(Error::NotInGroup { index: bad, order: g.order() });
        }
        Ok(self.eval_unchecked(g, assignment))
    }

    pub(crate) fn eval_unchecked(&self, g: &FiniteGroup, assignment: &[usize]) -> usize {
        self.letters.iter().fold(0, |acc, l| {
            let x = assignment[l.var];
            g.mul(acc, if l.exp > 0 { x } else { g.inv(x) })
        })
    }

    /// Exhaustive check that the word evaluates to the identity on all of
    /// `G^arity`.
    pub fn is_group_law(&self, g: &FiniteGroup, budget: &Budget) -> Result<bool> {
        let r = self.arity();
        Budget::check("group law evaluations", pow_sat(g.order(), r), budget.op_cap)?;
        let n = g.order();
        let mut assignment = vec![0usize; r];
        loop {
            if self.eval_unchecked(g, &assignment) != 0 {
                return Ok(false);
            }
            let mut k = 0;
            loop {
                if k == r {
                    return Ok(true);
                }
                assignment[k] += 1;
                if assignment[k] < n {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
        }
    }

    /// Splits a freely trivial word into cells read off the tree of its
    /// cancellation pairing.
    pub fn decompose_two_cells(&self) -> Result<TwoCellDecomposition> {
        decompose(self)
    }
}

/// Smallest weight `w <= max_weight` admitting a reduced word that is a law of
/// `g`. Words are enumerated canonically: the first letter is `a`, variables
/// are introduced in order, and no letter is followed by its inverse.
pub fn smallest_law_weight(g: &FiniteGroup, max_weight: usize, budget: &Budget) -> Result<Option<usize>> {
    for w in 1..=max_weight {
        if find_law_of_weight(g, w, budget)?.is_some() {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// First canonical reduced law of exactly weight `w`, if any.
pub fn find_law_of_weight(g: &FiniteGroup, w: usize, budget: &Budget) -> Result<Option<GroupWord>> {
    let mut letters = vec![Letter::new(0, 1)];
    search_words(g, w, &mut letters, 1, budget)
}

fn search_words(
    g: &FiniteGroup,
    w: usize,
    letters: &mut Vec<Letter>,
    used: usize,
    budget: &Budget,
) -> Result<Option<GroupWord>> {
    if letters.len() == w {
        let word = GroupWord { letters: letters.clone() };
        return Ok(if word.is_group_law(g, budget)? { Some(word) } else { None });
    }
    let last = *letters.last().unwrap();
    for var in 0..=used.min(w - 1) {
        for exp in [1i8, -1] {
            let l = Letter::new(var, exp);
            if l == last.inverse() {
                continue;
            }
            letters.push(l);
            let found = search_words(g, w, letters, used.max(var + 1), budget)?;
            letters.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

/// One cell of a decomposition: the positions it takes from the input word
/// and the letters at those positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub positions: Vec<usize>,
    pub word: GroupWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoCellDecomposition {
    pub cells: Vec<Cell>,
    pub residue: GroupWord,
}

/// Matched pair of positions `(open, close)` in a freely trivial word, with the
/// tree structure of the nesting.
#[derive(Debug, Clone)]
struct PairNode {
    open: usize,
    close: usize,
    depth: usize,
    parent: Option<usize>,
    children: Vec<usize>,
}

/// Non-crossing pairing produced by the cancellation stack. Returns `None` if
/// the word is not freely trivial.
pub fn cancellation_pairing(w: &GroupWord) -> Option<Vec<(usize, usize)>> {
    let mut stack: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for (i, &l) in w.letters.iter().enumerate() {
        match stack.last() {
            Some(&j) if w.letters[j] == l.inverse() => {
                stack.pop();
                pairs.push((j, i));
            }
            _ => stack.push(i),
        }
    }
    if stack.is_empty() {
        pairs.sort_unstable();
        Some(pairs)
    } else {
        None
    }
}

fn pairing_tree(w: &GroupWord) -> Option<Vec<PairNode>> {
    let pairs = cancellation_pairing(w)?;
    // pairs sorted by opening position, so a parent always precedes its children
    let mut nodes: Vec<PairNode> = Vec::with_capacity(pairs.len());
    let mut open_stack: Vec<usize> = Vec::new();
    for (open, close) in pairs {
        while let Some(&top) = open_stack.last() {
            if nodes[top].close < open {
                open_stack.pop();
            } else {
                break;
            }
        }
        let parent = open_stack.last().copied();
        let depth = parent.map_or(1, |p| nodes[p].depth + 1);
        let id = nodes.len();
        nodes.push(PairNode { open, close, depth, parent, children: Vec::new() });
        if let Some(p) = parent {
            nodes[p].children.push(id);
        }
        open_stack.push(id);
    }
    Some(nodes)
}

fn decompose(w: &GroupWord) -> Result<TwoCellDecomposition> {
    let mut nodes = pairing_tree(w).ok_or(Error::NotFreelyTrivial)?;
    let mut alive = vec![true; nodes.len()];
    let mut cells = Vec::new();
    let make_cell = |positions: Vec<usize>| Cell {
        word: GroupWord { letters: positions.iter().map(|&p| w.letters[p]).collect() },
        positions,
    };
    loop {
        let live_children = |nodes: &Vec<PairNode>, alive: &Vec<bool>, id: usize| -> Vec<usize> {
            nodes[id].children.iter().copied().filter(|&c| alive[c]).collect()
        };
        let leaves: Vec<usize> =
            (0..nodes.len()).filter(|&i| alive[i] && live_children(&nodes, &alive, i).is_empty()).collect();
        if leaves.is_empty() {
            break;
        }
        // odd-depth leaves are length-one loops and are cut off first
        if let Some(&leaf) = leaves.iter().find(|&&i| nodes[i].depth % 2 == 1) {
            alive[leaf] = false;
            cells.push(make_cell(vec![nodes[leaf].open, nodes[leaf].close]));
            continue;
        }
        // every leaf has even depth; take the deepest leftmost one and cut the
        // subtree of its parent, which then has only leaf children
        let leaf = *leaves.iter().max_by_key(|&&i| (nodes[i].depth, std::cmp::Reverse(nodes[i].open))).unwrap();
        let p = nodes[leaf].parent.expect("even depth has a parent");
        let kids = live_children(&nodes, &alive, p);
        let mut positions = vec![nodes[p].open];
        for &c in &kids {
            positions.push(nodes[c].open);
            positions.push(nodes[c].close);
            alive[c] = false;
        }
        positions.push(nodes[p].close);
        alive[p] = false;
        cells.push(make_cell(positions));
        nodes[p].children.clear();
    }
    Ok(TwoCellDecomposition { cells, residue: GroupWord::default() })
}

/// Depth of each matched pair (top level is 1), keyed by opening position.
pub fn pairing_depths(w: &GroupWord) -> Option<Vec<(usize, usize, usize)>> {
    Some(pairing_tree(w)?.into_iter().map(|n| (n.open, n.close, n.depth)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(v: &[i64]) -> GroupWord {
        GroupWord::from_signed(v).unwrap()
    }

    #[test]
    fn reduction() {
        assert!(word(&[1, -1]).reduce_free().letters.is_empty());
        assert!(word(&[1, -2, 2, -1]).reduce_free().letters.is_empty());
        assert_eq!(word(&[1, 2, -1]).reduce_free(), word(&[1, 2, -1]));
        assert_eq!(word(&[1, 2, -2, 3]).reduce_free(), word(&[1, 3]));
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(word(&[2, 1, 1, -2]).reduce_cyclic(), word(&[1, 1]));
    }

    #[test]
    fn freely_trivial() {
        assert!(!word(&[1, 1]).is_freely_trivial());
        assert!(!GroupWord::commutator().is_freely_trivial());
    }

    #[test]
    fn evaluation() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(word(&[1, 1]).evaluate(&z2, &[1]).unwrap(), 0);
        assert_eq!(GroupWord::default().evaluate(&z2, &[]).unwrap(), 0);
        assert_eq!(word(&[1, 2]).evaluate(&z2, &[1]).unwrap_err(), Error::ArityMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn trivial_group_law() {
        let g = FiniteGroup::trivial();
        assert_eq!(smallest_law_weight(&g, 1, &Budget::default()).unwrap(), Some(1));
    }

    #[test]
    fn signed_json() {
        let w: GroupWord = serde_json::from_str("[1,-2,2,-1]").unwrap();
        assert_eq!(w.letters[1], Letter::new(1, -1));
        assert_eq!(serde_json::to_string(&w).unwrap(), "[1,-2,2,-1]");
        assert!(serde_json::from_str::<GroupWord>("[0]").is_err());
    }

    #[test]
    fn single_pair_is_one_cell() {
        let d = word(&[1, -1]).decompose_two_cells().unwrap();
        assert_eq!(d.cells.len(), 1);
        let d = word(&[1, -2, 2, -1]).decompose_two_cells().unwrap();
        assert_eq!(d.cells.len(), 1);
        assert_eq!(d.cells[0].positions, vec![0, 1, 2, 3]);
        assert_eq!(word(&[1, 1]).decompose_two_cells().unwrap_err(), Error::NotFreelyTrivial);
    }
}
