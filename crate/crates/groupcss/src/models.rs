//! Named physical instances with their expected codespace dimensions,
//! each run through both the topological formula and the brute-force oracle.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::code::{code_from_complex, is_covariant};
use crate::complex::{BuildSpec, CwComplex, VertexKind};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupSpec};
use crate::oracle::codewords;
use crate::topology::Topology;

/// Expected codespace dimension, evaluated against the group at run time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "formula", rename_all = "snake_case")]
pub enum ExpectedDim {
    /// `|G|`.
    GroupOrder,
    /// A unique state.
    One,
    /// `|G|^exponent`.
    OrderPower { exponent: u32 },
    /// Orbits of the subgroup generated by `subgroup` acting by simultaneous
    /// conjugation on commuting pairs, counted with Burnside's lemma.
    CommutingPairOrbits { subgroup: Vec<usize> },
}

impl ExpectedDim {
    pub fn evaluate(&self, g: &FiniteGroup) -> Result<u128> {
        let order = g.order() as u128;
        Ok(match self {
            ExpectedDim::GroupOrder => order,
            ExpectedDim::One => 1,
            ExpectedDim::OrderPower { exponent } => order.pow(*exponent),
            ExpectedDim::CommutingPairOrbits { subgroup } => {
                let h = g.try_subgroup(subgroup)?;
                let mut fixed: u128 = 0;
                for &x in h.members() {
                    let centralizer: Vec<usize> = (0..g.order()).filter(|&a| g.mul(a, x) == g.mul(x, a)).collect();
                    for &a in &centralizer {
                        fixed += centralizer.iter().filter(|&&b| g.mul(a, b) == g.mul(b, a)).count() as u128;
                    }
                }
                fixed / h.order() as u128
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelCase {
    pub name: String,
    pub build: BuildSpec,
    pub group: GroupSpec,
    pub expected: ExpectedDim,
    /// Number of trivial ghost vertices, when the case is meant to have them.
    /// The dimension must then be at least `|G|^(ghosts - 1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ghosts: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CaseStatus {
    Pass,
    Fail { reasons: Vec<String> },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    pub group_order: usize,
    pub n: usize,
    pub expected_dim: u128,
    pub topology_dim: Option<u128>,
    pub oracle_dim: Option<u128>,
    pub ghosts: usize,
    /// True when every restricted vertex and edge constraint uses a normal
    /// subgroup; covariance is expected exactly then.
    pub normal_boundaries: bool,
    pub pi1_generators: usize,
    pub pi1_relators: usize,
    pub covariant: bool,
    pub status: CaseStatus,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.status == CaseStatus::Pass
    }
}

/// Runs one case. Budget failures turn into a skipped report; any other
/// error is returned.
pub fn run_case(case: &ModelCase, budget: &Budget) -> Result<CaseReport> {
    let g = FiniteGroup::from_spec(&case.group, budget)?;
    let complex = case.build.build()?;
    let code = code_from_complex(&complex, &g)?;
    let topo = Topology::from_code(&code)?;
    let expected_dim = case.expected.evaluate(&g)?;
    let mut report = CaseReport {
        name: case.name.clone(),
        group_order: g.order(),
        n: code.n,
        expected_dim,
        topology_dim: None,
        oracle_dim: None,
        ghosts: complex.ghosts().len(),
        normal_boundaries: normal_boundaries(&complex, &g)?,
        pi1_generators: topo.presentation.generator_edges.len(),
        pi1_relators: topo.presentation.relators.len(),
        covariant: is_covariant(&code).covariant,
        status: CaseStatus::Pass,
    };
    let skip = |e: Error, mut r: CaseReport| -> Result<CaseReport> {
        match e {
            Error::Budget { .. } => {
                r.status = CaseStatus::Skipped { reason: e.to_string() };
                Ok(r)
            }
            other => Err(other),
        }
    };
    match topo.codespace_dim(budget) {
        Ok(d) => report.topology_dim = Some(d.dim as u128),
        Err(e) => return skip(e, report),
    }
    match codewords(&code, budget) {
        Ok(cw) => report.oracle_dim = Some(cw.dim() as u128),
        Err(e) => return skip(e, report),
    }

    let mut reasons = Vec::new();
    if report.topology_dim != Some(expected_dim) {
        reasons.push(format!("topology dim {:?} != expected {expected_dim}", report.topology_dim));
    }
    if report.oracle_dim != Some(expected_dim) {
        reasons.push(format!("oracle dim {:?} != expected {expected_dim}", report.oracle_dim));
    }
    if let Some(r) = case.ghosts {
        if report.ghosts != r {
            reasons.push(format!("{} ghosts, expected {r}", report.ghosts));
        }
        let floor = (g.order() as u128).pow(r.saturating_sub(1) as u32);
        if expected_dim < floor {
            reasons.push(format!("dim {expected_dim} below the boundary degeneracy {floor}"));
        }
    }
    if report.covariant != report.normal_boundaries {
        reasons.push(format!(
            "covariant = {} but boundary subgroups normal = {}",
            report.covariant, report.normal_boundaries
        ));
    }
    if !reasons.is_empty() {
        report.status = CaseStatus::Fail { reasons };
    }
    Ok(report)
}

/// Whether every restricted vertex and edge constraint of `c` uses a normal
/// subgroup of `g`.
pub fn normal_boundaries(c: &CwComplex, g: &FiniteGroup) -> Result<bool> {
    let restricted = c.vertices.iter().filter_map(|k| match k {
        VertexKind::Restricted { subgroup } => Some(subgroup),
        _ => None,
    });
    for gens in restricted.chain(c.edge_constraints.values()) {
        if !g.is_normal(&g.try_subgroup(gens)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The standard gallery: symmetry-breaking and repetition chains, 1D and 2D
/// cluster states, disks with trivial rough boundaries and a torus with a
/// restricted hole.
pub fn gallery() -> Result<Vec<ModelCase>> {
    let s3 = GroupSpec::Symmetric { n: 3 };
    let d8 = GroupSpec::Dihedral { order: 8 };
    let z2 = GroupSpec::Cyclic { m: 2 };
    let case = |name: &str, build: BuildSpec, group: &GroupSpec, expected: ExpectedDim, ghosts: Option<usize>| {
        ModelCase { name: name.into(), build, group: group.clone(), expected, ghosts }
    };
    let mut cases = vec![
        case("ssb-chain-S3", BuildSpec::SsbChain { n: 4 }, &s3, ExpectedDim::GroupOrder, None),
        case("ssb-chain-D8", BuildSpec::SsbChain { n: 4 }, &d8, ExpectedDim::GroupOrder, None),
        case("repetition-S3", BuildSpec::RepetitionChain { n: 4 }, &s3, ExpectedDim::GroupOrder, Some(2)),
        case("repetition-D8", BuildSpec::RepetitionChain { n: 3 }, &d8, ExpectedDim::GroupOrder, Some(2)),
        case("cluster-1d-S3", BuildSpec::ClusterChain1d { n: 6 }, &s3, ExpectedDim::One, None),
        case("cluster-1d-D8", BuildSpec::ClusterChain1d { n: 6 }, &d8, ExpectedDim::One, None),
        case("cluster-2d-Z2", BuildSpec::ClusterLieb2d { kx: 2, ky: 2 }, &z2, ExpectedDim::One, None),
        case("cluster-2d-S3", BuildSpec::ClusterLieb2d { kx: 2, ky: 2 }, &s3, ExpectedDim::One, None),
    ];
    for r in [2usize, 3] {
        for (label, g) in [("Z2", &z2), ("S3", &s3)] {
            cases.push(case(
                &format!("disk-R{r}-{label}"),
                BuildSpec::Disk { r, subgroups: Vec::new() },
                g,
                ExpectedDim::OrderPower { exponent: r as u32 - 1 },
                Some(r),
            ));
        }
    }
    let s3g = s3.build()?;
    let involution = (0..s3g.order()).find(|&x| s3g.element_order(x) == 2).expect("S3 has involutions");
    for (label, h) in [("trivial", Vec::new()), ("Z2", vec![involution]), ("S3", s3g.generators().to_vec())] {
        cases.push(case(
            &format!("hole-{label}-S3"),
            BuildSpec::Hole { k: 2, region: vec![0], subgroup: h.clone() },
            &s3,
            ExpectedDim::CommutingPairOrbits { subgroup: h },
            None,
        ));
    }
    Ok(cases)
}
