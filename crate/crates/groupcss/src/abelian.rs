//! Abelian reductions: group GKP subgroup data and `Z_m` parity-check
//! matrices.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::budget::{pow_sat, Budget};
use crate::code::{GroupCssCode, Side};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::oracle::{admissible_set, decode, encode};

/// Subgroups `H <= K <= G^n` of an abelian code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkpData {
    pub n: usize,
    pub group_order: usize,
    /// Generators of the X-check subgroup `H`.
    pub h_generators: Vec<Vec<usize>>,
    /// Generators of the Z-solution subgroup `K`.
    pub k_generators: Vec<Vec<usize>>,
    pub h_order: usize,
    pub k_order: usize,
}

impl GkpData {
    pub fn dim(&self) -> usize {
        self.k_order / self.h_order
    }
}

/// Subgroup of `G^n` generated by `gens`, as encoded configurations.
fn closure(g: &FiniteGroup, n: usize, gens: &[Vec<usize>]) -> HashSet<u64> {
    let order = g.order();
    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut frontier = vec![vec![g.identity(); n]];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y: Vec<usize> = x.iter().zip(s).map(|(&a, &b)| g.mul(a, b)).collect();
            if seen.insert(encode(&y, order)) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Greedy generating set of a subgroup of `G^n` given by its elements.
fn generators_of(g: &FiniteGroup, n: usize, elements: &[u64]) -> Vec<Vec<usize>> {
    let order = g.order();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut span: HashSet<u64> = HashSet::from([0]);
    for &id in elements {
        if span.len() == elements.len() {
            break;
        }
        if !span.contains(&id) {
            gens.push(decode(id, n, order));
            span = closure(g, n, &gens);
        }
    }
    gens
}

/// X generators of an abelian code as elements of `G^n`: a right action by
/// `g` is a left action by `g^-1`.
fn x_vectors(code: &GroupCssCode) -> Vec<Vec<usize>> {
    let g = &code.group;
    let mut out = Vec::new();
    for f in &code.x_families {
        for &t in &f.allowed {
            let mut v = vec![g.identity(); code.n];
            for &(q, side) in &f.actions {
                let x = match side {
                    Side::Left => t,
                    Side::Right => g.inv(t),
                };
                v[q] = g.mul(v[q], x);
            }
            out.push(v);
        }
    }
    out
}

pub fn to_gkp(code: &GroupCssCode, budget: &Budget) -> Result<GkpData> {
    let g = &code.group;
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let k = admissible_set(code, budget)?;
    let h_generators = x_vectors(code);
    for h in &h_generators {
        if k.index_of(encode(h, g.order())).is_none() {
            return Err(Error::WrongShape("X-check subgroup is not contained in K".into()));
        }
    }
    let h = closure(g, code.n, &h_generators);
    Ok(GkpData {
        n: code.n,
        group_order: g.order(),
        k_generators: generators_of(g, code.n, &k.configs),
        h_generators,
        h_order: h.len(),
        k_order: k.len(),
    })
}

/// Coordinates identifying an abelian group with `Z_m^l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCoordinates {
    pub m: u64,
    pub l: usize,
    /// Coordinates of each element.
    pub coords: Vec<Vec<u64>>,
}

/// Finds a basis of `G` as `Z_m^l` with `m` the exponent of `G`, if one exists.
pub fn cyclic_coordinates(g: &FiniteGroup) -> Result<CyclicCoordinates> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let order = g.order();
    if order == 1 {
        return Ok(CyclicCoordinates { m: 1, l: 0, coords: vec![Vec::new()] });
    }
    let m = (0..order).map(|x| g.element_order(x)).max().unwrap_or(1);
    let mut l = 0;
    let mut size = 1usize;
    while size < order {
        size = size.checked_mul(m).ok_or_else(|| Error::WrongShape("group is not Z_m^l".into()))?;
        l += 1;
    }
    if size != order {
        return Err(Error::WrongShape(format!("order {order} is not a power of the exponent {m}")));
    }
    let mut basis: Vec<usize> = Vec::new();
    let mut span = g.trivial_subgroup();
    for x in 0..order {
        if basis.len() == l {
            break;
        }
        if g.element_order(x) != m {
            continue;
        }
        let mut trial = basis.clone();
        trial.push(x);
        let next = g.subgroup_closure(&trial);
        if next.order() == span.order() * m {
            basis = trial;
            span = next;
        }
    }
    if basis.len() != l {
        return Err(Error::WrongShape("no basis of maximal-order elements".into()));
    }
    let mut coords = vec![Vec::new(); order];
    let total = pow_sat(m, l) as usize;
    for idx in 0..total {
        let mut c = Vec::with_capacity(l);
        let mut rest = idx;
        let mut x = g.identity();
        for &b in &basis {
            let k = rest % m;
            rest /= m;
            c.push(k as u64);
            x = g.mul(x, g.pow(b, k as i64));
        }
        coords[x] = c;
    }
    Ok(CyclicCoordinates { m: m as u64, l, coords })
}

/// Parity-check matrices over `Z_m` of a code on `Z_m^l`, with qudits
/// unblocked so that coordinate `i` of qudit `q` becomes qudit `q l + i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityPair {
    pub m: u64,
    pub l: usize,
    pub hx: Vec<Vec<u64>>,
    pub hz: Vec<Vec<u64>>,
    /// Divisor `c` of each Z row: the row tests membership in `c Z_m`.
    pub c_alpha: Vec<u64>,
    /// `H_X H_Z^T = 0 (mod m)`.
    pub orthogonal: bool,
    /// `|ker H_Z| / |im H_X^T|`, when it fits.
    pub dim: Option<u128>,
    pub log_m_dim: f64,
}

pub fn to_parity_pair(code: &GroupCssCode) -> Result<ParityPair> {
    let g = &code.group;
    let cc = cyclic_coordinates(g)?;
    let (m, l) = (cc.m, cc.l);
    let width = code.n * l;
    let hx: Vec<Vec<u64>> =
        x_vectors(code).iter().map(|v| v.iter().flat_map(|&x| cc.coords[x].iter().copied()).collect()).collect();
    let mut hz = Vec::new();
    let mut c_alpha = Vec::new();
    for j in 0..code.z_checks.len() {
        let k = code.check_subgroup(j);
        // K must split along the coordinate axes
        let axis_orders: Vec<usize> = (0..l)
            .map(|i| {
                k.members().iter().filter(|&&x| cc.coords[x].iter().enumerate().all(|(t, &c)| t == i || c == 0)).count()
            })
            .collect();
        if axis_orders.iter().product::<usize>() != k.order() {
            return Err(Error::WrongShape(format!("Z-check {j} subgroup mixes coordinates")));
        }
        let mut a = vec![0i64; code.n];
        for letter in &code.z_checks[j].word.letters {
            a[letter.var] += letter.exp as i64;
        }
        for (i, &ko) in axis_orders.iter().enumerate() {
            let mut row = vec![0u64; width];
            for (q, &aq) in a.iter().enumerate() {
                row[q * l + i] = (aq * ko as i64).rem_euclid(m as i64) as u64;
            }
            hz.push(row);
            c_alpha.push(m / ko as u64);
        }
    }
    let orthogonal =
        hx.iter().all(|x| hz.iter().all(|z| x.iter().zip(z).map(|(&a, &b)| a * b % m).sum::<u64>() % m == 0));
    let (dim, log_m_dim) = quotient_size(&hx, &hz, width, m);
    Ok(ParityPair { m, l, hx, hz, c_alpha, orthogonal, dim, log_m_dim })
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Bezout coefficients `(g, s, u)` with `s x + u y = g`, preferring plain
/// elimination when `x` already divides `y` so the pivot is left alone.
fn pivot_combination(x: i128, y: i128) -> (i128, i128, i128) {
    if y % x == 0 {
        (x, 1, 0)
    } else {
        egcd(x, y)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Diagonal entries of a matrix over `Z_m` after unimodular row and column
/// operations. The image of the matrix has size `prod m / gcd(d_i, m)`.
pub fn diagonalize_mod(matrix: &[Vec<u64>], m: u64) -> Vec<u64> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    let mm = m as i128;
    let mut a: Vec<Vec<i128>> = matrix.iter().map(|r| r.iter().map(|&x| (x % m) as i128).collect()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = (t..rows).flat_map(|r| (t..cols).map(move |c| (r, c))).find(|&(r, c)| a[r][c] != 0) else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut changed = false;
            for r in t + 1..rows {
                if a[r][t] != 0 {
                    let (x, y) = (a[t][t], a[r][t]);
                    let (g, s, u) = pivot_combination(x, y);
                    let (p, q) = (-y / g, x / g);
                    for c in t..cols {
                        let (top, bot) = (a[t][c], a[r][c]);
                        a[t][c] = (s * top + u * bot).rem_euclid(mm);
                        a[r][c] = (p * top + q * bot).rem_euclid(mm);
                    }
                    changed = true;
                }
            }
            for c in t + 1..cols {
                if a[t][c] != 0 {
                    let (x, y) = (a[t][t], a[t][c]);
                    let (g, s, u) = pivot_combination(x, y);
                    let (p, q) = (-y / g, x / g);
                    for row in a.iter_mut().skip(t) {
                        let (left, right) = (row[t], row[c]);
                        row[t] = (s * left + u * right).rem_euclid(mm);
                        row[c] = (p * left + q * right).rem_euclid(mm);
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        diag.push(a[t][t] as u64);
        t += 1;
    }
    diag
}

/// `|ker H_Z| / |im H_X^T|` over `Z_m^width`.
fn quotient_size(hx: &[Vec<u64>], hz: &[Vec<u64>], width: usize, m: u64) -> (Option<u128>, f64) {
    // log_m of the image sizes
    let image = |mat: &[Vec<u64>]| -> (Vec<u64>, f64) {
        let factors: Vec<u64> = diagonalize_mod(mat, m).iter().map(|&d| m / gcd(d, m)).collect();
        let log = factors.iter().map(|&f| (f as f64).ln()).sum::<f64>();
        (factors, log)
    };
    let (fz, lz) = image(hz);
    let (fx, lx) = image(hx);
    let lm = (m as f64).ln();
    let log_m_dim = if m > 1 { (width as f64 * lm - lz - lx) / lm } else { 0.0 };
    let exact = (|| {
        let mut num: u128 = 1;
        for _ in 0..width {
            num = num.checked_mul(m as u128)?;
        }
        let den = fz.iter().chain(&fx).try_fold(1u128, |acc, &f| acc.checked_mul(f as u128))?;
        num.is_multiple_of(den).then_some(num / den)
    })();
    (exact, log_m_dim)
}

/// Exhaustive `|ker H_Z| / |im H_X^T|`, for cross-checking on tiny inputs.
pub fn quotient_size_brute(hx: &[Vec<u64>], hz: &[Vec<u64>], width: usize, m: u64, budget: &Budget) -> Result<u128> {
    Budget::check("Z_m vectors", pow_sat(m as usize, width), budget.config_cap)?;
    let total = pow_sat(m as usize, width) as u64;
    let mut kernel = 0u128;
    let mut v = vec![0u64; width];
    for id in 0..total {
        let mut rest = id;
        for x in v.iter_mut() {
            *x = rest % m;
            rest /= m;
        }
        if hz.iter().all(|row| row.iter().zip(&v).map(|(&a, &b)| a * b % m).sum::<u64>() % m == 0) {
            kernel += 1;
        }
    }
    let mut span: HashSet<Vec<u64>> = HashSet::from([vec![0; width]]);
    let mut frontier = vec![vec![0u64; width]];
    while let Some(x) = frontier.pop() {
        for row in hx {
            let y: Vec<u64> = x.iter().zip(row).map(|(&a, &b)| (a + b) % m).collect();
            if span.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Ok(kernel / span.len() as u128)
}

/// Rank of a matrix over the prime field `Z_p`.
pub fn rank_mod_p(matrix: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let inv = |x: u64| -> u64 {
        // Fermat inverse
        let (mut base, mut e, mut acc) = (x % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, r);
        let pivot_inv = inv(a[rank][c]);
        for x in a[rank].iter_mut() {
            *x = *x * pivot_inv % p;
        }
        let pivot = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::code_from_complex;
    use crate::complex::{repetition_chain, torus_grid};

    #[test]
    fn toric_gkp_and_matrices() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let code = code_from_complex(&torus_grid(2).unwrap(), &g).unwrap();
        let gkp = to_gkp(&code, &Budget::default()).unwrap();
        assert_eq!((gkp.k_order, gkp.h_order, gkp.dim()), (32, 8, 4));
        let pp = to_parity_pair(&code).unwrap();
        assert!(pp.orthogonal);
        assert_eq!(pp.dim, Some(4));
        assert_eq!(quotient_size_brute(&pp.hx, &pp.hz, 8, 2, &Budget::default()).unwrap(), 4);
    }

    #[test]
    fn repetition_over_z4() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let code = code_from_complex(&repetition_chain(3).unwrap(), &g).unwrap();
        let gkp = to_gkp(&code, &Budget::default()).unwrap();
        assert_eq!(gkp.k_order, 4);
        assert_eq!(gkp.h_order, 1);
    }

    #[test]
    fn power_group_coordinates() {
        let g = FiniteGroup::power(2, 3).unwrap();
        let cc = cyclic_coordinates(&g).unwrap();
        assert_eq!((cc.m, cc.l), (2, 3));
        let mut seen: Vec<_> = cc.coords.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8);
        assert!(cyclic_coordinates(&FiniteGroup::cyclic(6).unwrap()).is_ok());
        assert!(cyclic_coordinates(&FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2).unwrap(),
            &FiniteGroup::cyclic(4).unwrap()
        ))
        .is_err());
    }

    #[test]
    fn diagonalize_small() {
        // [[2, 4], [6, 8]] over Z_12: image generated by columns
        let d = diagonalize_mod(&[vec![2, 4], vec![6, 8]], 12);
        let size: u64 = d.iter().map(|&x| 12 / gcd(x, 12)).product();
        let mut span = HashSet::new();
        for a in 0..12u64 {
            for b in 0..12u64 {
                span.insert(((2 * a + 4 * b) % 12, (6 * a + 8 * b) % 12));
            }
        }
        assert_eq!(size as usize, span.len());
    }

    #[test]
    fn rank_over_gf2() {
        let h = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(rank_mod_p(&h, 2), 2);
        assert_eq!(rank_mod_p(&h, 3), 3);
    }
}
