use std::path::PathBuf;

use groupcss::abelian::{to_gkp, to_parity_pair, GkpData, ParityPair};
use groupcss::bounds::{
    attach_tree_checks, bound_report, bound_report_for_k, build_tree_matching, classical_parameters, classical_parity,
    dz_upper_bound, kernel_mod_p, moore_bound, BoundReport, CheckSelection, ClassicalCode, ClassicalKind, FaceCounts,
    TreeMatchingGraph,
};
use groupcss::code::{
    is_covariant, verify_commuting_projectors, verify_compatible, CodeDocument, CovarianceReport, VerifyReport,
};
use groupcss::complex::BuildSpec;
use groupcss::models::{gallery, run_case, CaseReport, CaseStatus};
use groupcss::oracle::{codewords, kl_distance_x, kl_distance_z, Distance};
use groupcss::topology::Topology;
use groupcss::words::{find_law_of_weight, smallest_law_weight};
use groupcss::{code_from_complex, Budget, CwComplex, Error, FiniteGroup, GroupCssCode, GroupSpec};
use serde::Serialize;

use crate::input::{self, CliError, CliResult};

/// Where the code under study comes from: a code file, or a complex file
/// together with a group.
#[derive(Debug, Clone, clap::Args)]
pub struct Source {
    /// Code document (as written by `build --group` or `generate`).
    #[arg(long, conflicts_with = "complex")]
    pub code: Option<PathBuf>,
    /// Complex document (bare, or as written by `build`).
    #[arg(long, requires = "group")]
    pub complex: Option<PathBuf>,
    /// Group spec as inline JSON or a file path.
    #[arg(long)]
    pub group: Option<String>,
}

impl Source {
    pub fn load(&self, budget: &Budget) -> CliResult<GroupCssCode> {
        match (&self.code, &self.complex) {
            (Some(path), None) => Ok(input::code_file(path)?.into_code(budget)?),
            (None, Some(path)) => {
                let spec = input::group_spec(self.group.as_deref().unwrap_or_default())?;
                let g = FiniteGroup::from_spec(&spec, budget)?;
                let complex = input::complex_file(path)?;
                Ok(code_from_complex(&complex, &g)?)
            }
            _ => Err(CliError::Usage("give either --code or --complex with --group".into())),
        }
    }
}

#[derive(Serialize)]
pub struct BuildReport {
    pub builder: BuildSpec,
    pub complex: CwComplex,
    pub ghosts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeDocument>,
}

pub fn build(builder: &str, group: Option<&str>, budget: &Budget) -> CliResult<BuildReport> {
    let builder = input::build_spec(builder)?;
    let complex = builder.build()?;
    let code = match group {
        Some(arg) => {
            let spec = input::group_spec(arg)?;
            let g = FiniteGroup::from_spec(&spec, budget)?;
            Some(code_from_complex(&complex, &g)?.to_document(Some(&spec)))
        }
        None => None,
    };
    Ok(BuildReport { builder, ghosts: complex.ghosts().len(), complex, code })
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    /// `topology` for quantum doubles, `oracle` when the code has no complex.
    pub method: &'static str,
    pub group_order: usize,
    pub n: usize,
    pub dim: usize,
    pub k: f64,
    pub systole_dz: Option<usize>,
    pub hom_count: Option<usize>,
    pub orbit_count: usize,
    pub generators: Option<usize>,
    pub relators: Option<usize>,
    pub smooth: Option<bool>,
    /// `|G / H_i|` for every boundary vertex.
    pub boundary_symmetry: Vec<usize>,
    pub covariance: CovarianceReport,
}

pub fn analyze(src: &Source, budget: &Budget) -> CliResult<AnalyzeReport> {
    let code = src.load(budget)?;
    let order = code.group.order();
    let covariance = is_covariant(&code);
    let topo = match Topology::from_code(&code) {
        Ok(t) => Some(t),
        Err(Error::NotQuantumDouble(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let Some(topo) = topo else {
        let dim = codewords(&code, budget)?.dim();
        return Ok(AnalyzeReport {
            method: "oracle",
            group_order: order,
            n: code.n,
            dim,
            k: log_base(dim, order),
            systole_dz: None,
            hom_count: None,
            orbit_count: dim,
            generators: None,
            relators: None,
            smooth: None,
            boundary_symmetry: Vec::new(),
            covariance,
        });
    };
    let d = topo.codespace_dim(budget)?;
    let systole_dz = if d.dim > 1 {
        match topo.systole_dz(budget) {
            Ok(s) => Some(s),
            Err(Error::Undefined(_)) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    Ok(AnalyzeReport {
        method: "topology",
        group_order: order,
        n: code.n,
        dim: d.dim,
        k: d.k,
        systole_dz,
        hom_count: Some(d.hom_count),
        orbit_count: d.orbit_count,
        generators: Some(d.generators),
        relators: Some(d.relators),
        smooth: Some(d.smooth),
        boundary_symmetry: d.boundary_symmetry,
        covariance,
    })
}

fn log_base(dim: usize, order: usize) -> f64 {
    if order > 1 && dim > 0 {
        (dim as f64).ln() / (order as f64).ln()
    } else {
        0.0
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Commutation { family: usize, check: usize, element: usize, config: Vec<usize> },
    Incompatible { family: usize, check: usize, element: usize, config: Vec<usize> },
}

#[derive(Serialize)]
pub struct VerifyOutcome {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commuting: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compatible: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_z: Option<Distance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_x: Option<Distance>,
}

fn witness(e: Error) -> Result<Witness, Error> {
    match e {
        Error::Commutation { family, check, element, config } => {
            Ok(Witness::Commutation { family, check, element, config })
        }
        Error::Incompatible { family, check, element, config } => {
            Ok(Witness::Incompatible { family, check, element, config })
        }
        other => Err(other),
    }
}

pub fn verify(src: &Source, dz_max: Option<usize>, dx_max: Option<usize>, budget: &Budget) -> CliResult<VerifyOutcome> {
    let code = src.load(budget)?;
    let mut out = VerifyOutcome {
        passed: false,
        witness: None,
        commuting: None,
        compatible: None,
        dim: None,
        d_z: None,
        d_x: None,
    };
    match verify_commuting_projectors(&code, budget) {
        Ok(r) => out.commuting = Some(r),
        Err(e) => {
            out.witness = Some(witness(e)?);
            return Ok(out);
        }
    }
    match verify_compatible(&code, budget) {
        Ok(r) => out.compatible = Some(r),
        Err(e) => {
            out.witness = Some(witness(e)?);
            return Ok(out);
        }
    }
    if dz_max.is_some() || dx_max.is_some() {
        let cw = codewords(&code, budget)?;
        out.dim = Some(cw.dim());
        if let Some(m) = dz_max {
            out.d_z = Some(kl_distance_z(&cw, m, budget)?);
        }
        if let Some(m) = dx_max {
            out.d_x = Some(kl_distance_x(&code, &cw, m, budget)?);
        }
    }
    out.passed = true;
    Ok(out)
}

#[derive(Serialize)]
pub struct FormulaReport {
    pub n: f64,
    pub k: f64,
    pub dz_rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moore_rhs: Option<f64>,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum BoundsOutput {
    Measured(BoundReport),
    Formula(FormulaReport),
}

pub struct BoundsArgs {
    pub n: Option<f64>,
    pub k: Option<f64>,
    pub vertices: Option<f64>,
    pub degree: Option<f64>,
}

pub fn bounds(src: &Source, args: &BoundsArgs, budget: &Budget) -> CliResult<BoundsOutput> {
    if src.code.is_none() && src.complex.is_none() {
        let (Some(n), Some(k)) = (args.n, args.k) else {
            return Err(CliError::Usage("give --n and --k, or a code to measure".into()));
        };
        let moore_rhs = match (args.vertices, args.degree) {
            (Some(v), Some(d)) => Some(moore_bound(v, d)?),
            (None, None) => None,
            _ => return Err(CliError::Usage("--vertices and --degree go together".into())),
        };
        return Ok(BoundsOutput::Formula(FormulaReport { n, k, dz_rhs: dz_upper_bound(n, k)?, moore_rhs }));
    }
    let code = src.load(budget)?;
    let topo = Topology::from_code(&code)?;
    let d = topo.codespace_dim(budget)?;
    let d_z = if d.dim > 1 { Some(topo.systole_dz(budget)?) } else { None };
    Ok(BoundsOutput::Measured(bound_report(code.n, d.dim as u128, code.group.order(), d_z, Some(&topo.complex))))
}

pub struct GenerateArgs {
    pub arity: usize,
    pub depth: usize,
    pub alpha: f64,
    pub seed: u64,
    pub p: u64,
    pub classical: ClassicalKind,
    pub rate: f64,
    pub group: Option<String>,
    pub no_code: bool,
}

#[derive(Serialize)]
pub struct GenerateReport {
    pub graph: TreeMatchingGraph,
    pub classical: ClassicalCode,
    pub faces: FaceCounts,
    pub combined_rank: usize,
    /// Number of independent `Z_p` holonomy labels.
    pub k_linear: usize,
    pub n: usize,
    /// Present when the group is `Z_p`, where the code space has dimension
    /// exactly `p^k_linear`.
    pub bounds: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeDocument>,
}

pub fn generate(a: &GenerateArgs, budget: &Budget) -> CliResult<GenerateReport> {
    let spec = match &a.group {
        Some(arg) => input::group_spec(arg)?,
        None => GroupSpec::Cyclic { m: a.p as usize },
    };
    let g = FiniteGroup::from_spec(&spec, budget)?;
    let graph = build_tree_matching(a.arity, a.depth, a.alpha, a.seed)?;
    let n0 = graph.matching.len();
    let parity = classical_parity(a.classical, n0, a.rate, a.p, a.seed)?;
    // Exact distance only when the codeword scan fits the budget.
    let classical = match classical_parameters(&parity, n0, a.p, budget) {
        Ok(c) => c,
        Err(Error::Budget { .. }) => {
            ClassicalCode { p: a.p, n0, k0: kernel_mod_p(&parity, n0, a.p).len(), d0: None, parity: parity.clone() }
        }
        Err(e) => return Err(e.into()),
    };
    let glued = attach_tree_checks(&graph, &g, a.p, &parity, CheckSelection::default())?;
    let n = glued.code.n;
    let bounds = (g.order() as u64 == a.p).then(|| {
        bound_report_for_k(n, glued.k_linear as f64, Some((glued.k_linear as u32, 1)), None, Some(&glued.complex))
    });
    let code = (!a.no_code).then(|| glued.code.to_document(Some(&spec)));
    Ok(GenerateReport {
        graph,
        classical,
        faces: glued.counts,
        combined_rank: glued.combined_rank,
        k_linear: glued.k_linear,
        n,
        bounds,
        code,
    })
}

#[derive(Serialize)]
pub struct AbelianizeReport {
    pub parity: ParityPair,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gkp: Option<GkpData>,
}

pub fn abelianize(src: &Source, gkp: bool, budget: &Budget) -> CliResult<AbelianizeReport> {
    let code = src.load(budget)?;
    let parity = to_parity_pair(&code)?;
    let gkp = if gkp { Some(to_gkp(&code, budget)?) } else { None };
    Ok(AbelianizeReport { parity, gkp })
}

#[derive(Serialize)]
pub struct ExamplesReport {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub cases: Vec<CaseReport>,
}

pub fn examples(filter: Option<&str>, budget: &Budget) -> CliResult<ExamplesReport> {
    let mut cases = Vec::new();
    for case in gallery()? {
        if filter.is_some_and(|f| !case.name.contains(f)) {
            continue;
        }
        cases.push(run_case(&case, budget)?);
    }
    let count = |pred: fn(&CaseStatus) -> bool| cases.iter().filter(|c| pred(&c.status)).count();
    Ok(ExamplesReport {
        passed: count(|s| matches!(s, CaseStatus::Pass)),
        failed: count(|s| matches!(s, CaseStatus::Fail { .. })),
        skipped: count(|s| matches!(s, CaseStatus::Skipped { .. })),
        cases,
    })
}

/// Plain-text summary, one row per case.
pub fn examples_table(r: &ExamplesReport) -> String {
    let opt = |v: Option<u128>| v.map_or_else(|| "-".to_string(), |d| d.to_string());
    let mut out = format!(
        "{:<20} {:>4} {:>4} {:>9} {:>9} {:>9} {:>6} {:>9}  status\n",
        "case", "|G|", "n", "expected", "topology", "oracle", "ghosts", "covariant"
    );
    for c in &r.cases {
        let status = match &c.status {
            CaseStatus::Pass => "pass".to_string(),
            CaseStatus::Fail { reasons } => format!("FAIL: {}", reasons.join("; ")),
            CaseStatus::Skipped { reason } => format!("skipped: {reason}"),
        };
        out.push_str(&format!(
            "{:<20} {:>4} {:>4} {:>9} {:>9} {:>9} {:>6} {:>9}  {status}\n",
            c.name,
            c.group_order,
            c.n,
            c.expected_dim,
            opt(c.topology_dim),
            opt(c.oracle_dim),
            c.ghosts,
            c.covariant
        ));
    }
    out.push_str(&format!("{} passed, {} failed, {} skipped\n", r.passed, r.failed, r.skipped));
    out
}

#[derive(Serialize)]
pub struct LawsReport {
    pub group_order: usize,
    pub max_weight: usize,
    /// Smallest weight of a nontrivial reduced law, if one exists up to `max_weight`.
    pub alpha: Option<usize>,
    /// A law of that weight as signed 1-based letters.
    pub law: Option<Vec<i64>>,
}

pub fn laws(group: &str, max_weight: usize, budget: &Budget) -> CliResult<LawsReport> {
    let g = FiniteGroup::from_spec(&input::group_spec(group)?, budget)?;
    let alpha = smallest_law_weight(&g, max_weight, budget)?;
    let law = match alpha {
        Some(w) => find_law_of_weight(&g, w, budget)?.map(|w| w.to_signed()),
        None => None,
    };
    Ok(LawsReport { group_order: g.order(), max_weight, alpha, law })
}
