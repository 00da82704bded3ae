//! Audit campaigns over graph streams.
//!
//! The theorems backing this tool are universally quantified, so on any
//! instance we can afford to solve exactly they become checkable invariants:
//! the variant chain, the degree bounds, monotonicity in `k`, and the
//! forcing-number floor on the Z-value. A campaign sweeps a stream of graphs,
//! records one entry per (instance, k), and attaches a replayable
//! counterexample payload to every failed check. The open questions get
//! dedicated checkers that distinguish "confirmed exactly", "confirmed by a
//! bound pinch", and "undecided interval"; an interval alone never counts as
//! a refutation.
//!
//! Reports contain no timestamps or timing fields: the same stream and
//! config must produce byte-identical output, with any worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{self, ClosedFormValue};
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::forcing::{self, ForcingResult};
use crate::graph::Graph;
use crate::sequence::{self, GrundySequence, Variant, VerifyOutcome, ALL_VARIANTS};
use crate::solver::{self, BoundsResult, SolverConfig};

/// One labelled graph in a campaign stream.
#[derive(Clone, Debug)]
pub struct AuditInstance {
    pub label: String,
    pub graph: Graph,
}

impl AuditInstance {
    pub fn new(label: impl Into<String>, graph: Graph) -> Self {
        AuditInstance {
            label: label.into(),
            graph,
        }
    }

    pub fn from_family(spec: &FamilySpec) -> Result<Self> {
        Ok(AuditInstance::new(spec.to_string(), spec.generate()?))
    }
}

/// Parses a graph6 stream, one graph per nonempty line. Each instance is
/// labelled by its own graph6 string, which keeps reports self-locating.
pub fn graph6_stream(text: &str) -> Result<Vec<AuditInstance>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let graph = Graph::from_graph6(line).map_err(|e| match e {
            Error::Parse { location, msg } => Error::Parse {
                location: format!("line {}, {location}", i + 1),
                msg,
            },
            other => other,
        })?;
        out.push(AuditInstance::new(line, graph));
    }
    Ok(out)
}

/// Everything needed to replay a failed check offline: the graph, a
/// human-readable account of the violation, and the certificates (sequences
/// and/or a forcing set) whose lengths exhibit it. Certificates are
/// re-verified before a failure is recorded, so a stored payload always
/// reproduces.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    pub graph6: String,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sequences: Vec<GrundySequence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<ForcingResult>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckOutcome {
    Pass,
    Fail { counterexample: Box<Counterexample> },
    Skipped { reason: String },
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(flatten)]
    pub outcome: CheckOutcome,
}

impl AuditCheck {
    fn pass(name: impl Into<String>, note: Option<String>) -> Self {
        AuditCheck {
            name: name.into(),
            note,
            outcome: CheckOutcome::Pass,
        }
    }

    fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        AuditCheck {
            name: name.into(),
            note: None,
            outcome: CheckOutcome::Skipped {
                reason: reason.into(),
            },
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self.outcome, CheckOutcome::Fail { .. })
    }
}

/// Exact values for one instance at one `k`; `None` where a variant was not
/// solved (Z above the minimum degree, or a capacity skip).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct VariantValues {
    pub plain: Option<u32>,
    pub total: Option<u32>,
    pub z: Option<u32>,
    pub l: Option<u32>,
}

impl VariantValues {
    pub fn get(&self, variant: Variant) -> Option<u32> {
        match variant {
            Variant::Plain => self.plain,
            Variant::Total => self.total,
            Variant::Z => self.z,
            Variant::L => self.l,
        }
    }

    fn set(&mut self, variant: Variant, value: u32) {
        match variant {
            Variant::Plain => self.plain = Some(value),
            Variant::Total => self.total = Some(value),
            Variant::Z => self.z = Some(value),
            Variant::L => self.l = Some(value),
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AuditEntry {
    pub instance: String,
    pub n: usize,
    pub k: u32,
    pub values: VariantValues,
    /// True when the L-sequence uses every vertex; campaigns can filter on
    /// this to collect graphs attaining the spanning extreme.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub l_reaches_n: bool,
    pub checks: Vec<AuditCheck>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct AuditCounts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl AuditEntry {
    pub fn counts(&self) -> AuditCounts {
        let mut c = AuditCounts::default();
        for check in &self.checks {
            match check.outcome {
                CheckOutcome::Pass => c.pass += 1,
                CheckOutcome::Fail { .. } => c.fail += 1,
                CheckOutcome::Skipped { .. } => c.skipped += 1,
            }
        }
        c
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AuditReport {
    pub campaign: String,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn counts(&self) -> AuditCounts {
        let mut total = AuditCounts::default();
        for e in &self.entries {
            let c = e.counts();
            total.pass += c.pass;
            total.fail += c.fail;
            total.skipped += c.skipped;
        }
        total
    }

    pub fn is_clean(&self) -> bool {
        self.counts().fail == 0
    }

    pub fn failures(&self) -> Vec<(&AuditEntry, &AuditCheck)> {
        let mut out = Vec::new();
        for e in &self.entries {
            for c in &e.checks {
                if c.is_fail() {
                    out.push((e, c));
                }
            }
        }
        out
    }

    /// One JSON object per entry, newline separated.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for e in &self.entries {
            let line = serde_json::to_string(e)
                .map_err(|e| Error::Internal(format!("report serialization: {e}")))?;
            out.push_str(&line);
            out.push('\n');
        }
        Ok(out)
    }

    /// Per-entry summary table: values and check tallies, no payloads.
    pub fn csv_summary(&self) -> String {
        fn cell(v: Option<u32>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        let mut out = String::from("instance,n,k,plain,total,z,l,pass,fail,skipped\n");
        for e in &self.entries {
            let c = e.counts();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                e.instance,
                e.n,
                e.k,
                cell(e.values.plain),
                cell(e.values.total),
                cell(e.values.z),
                cell(e.values.l),
                c.pass,
                c.fail,
                c.skipped
            ));
        }
        out
    }
}

fn vidx(variant: Variant) -> usize {
    match variant {
        Variant::Plain => 0,
        Variant::Total => 1,
        Variant::Z => 2,
        Variant::L => 3,
    }
}

struct Solved {
    value: u32,
    witness: GrundySequence,
}

/// Builds a Fail outcome, first replaying every certificate so a recorded
/// counterexample is guaranteed to reproduce.
fn fail_outcome(g: &Graph, detail: String, sequences: Vec<GrundySequence>) -> Result<CheckOutcome> {
    for seq in &sequences {
        let report = sequence::verify(g, seq)?;
        if !matches!(report.outcome, VerifyOutcome::Valid) {
            return Err(Error::Internal(format!(
                "counterexample certificate failed re-verification: {detail}"
            )));
        }
    }
    Ok(CheckOutcome::Fail {
        counterexample: Box::new(Counterexample {
            graph6: g.to_graph6()?,
            detail,
            sequences,
            forcing: None,
        }),
    })
}

/// Checks `lhs + add <= rhs`, marking equality as tight. A missing side
/// (unsolved variant) downgrades the check to Skipped.
fn le_check(
    g: &Graph,
    name: &str,
    lhs: Option<&Solved>,
    add: u32,
    rhs: Option<&Solved>,
    missing_reason: &str,
) -> Result<AuditCheck> {
    let (a, b) = match (lhs, rhs) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(AuditCheck::skipped(name, missing_reason)),
    };
    if a.value + add <= b.value {
        let note = (a.value + add == b.value).then(|| format!("tight ({} = {})", a.value + add, b.value));
        Ok(AuditCheck::pass(name, note))
    } else {
        let detail = format!(
            "{name} violated: left side {} , right side {}",
            a.value + add,
            b.value
        );
        let outcome = fail_outcome(g, detail, vec![a.witness.clone(), b.witness.clone()])?;
        Ok(AuditCheck {
            name: name.into(),
            note: None,
            outcome,
        })
    }
}

fn capacity_entry(inst: &AuditInstance, k: u32, reason: String) -> AuditEntry {
    AuditEntry {
        instance: inst.label.clone(),
        n: inst.graph.n(),
        k,
        values: VariantValues::default(),
        l_reaches_n: false,
        checks: vec![AuditCheck::skipped("solve", reason)],
    }
}

fn audit_one(inst: &AuditInstance, ks: &[u32], cfg: &SolverConfig) -> Result<Vec<AuditEntry>> {
    let g = &inst.graph;
    let n = g.n();
    let mut out = Vec::new();
    if n == 0 {
        for &k in ks {
            out.push(capacity_entry(inst, k, "empty graph".into()));
        }
        return Ok(out);
    }
    if n > cfg.max_vertices {
        for &k in ks {
            out.push(capacity_entry(
                inst,
                k,
                format!("capacity: n = {n} exceeds the {}-vertex guard", cfg.max_vertices),
            ));
        }
        return Ok(out);
    }
    let delta = g.min_degree() as u32;
    let z_skip = |k: u32| format!("z skipped: k = {k} exceeds the minimum degree {delta}");
    let mut prev: Option<(u32, [Option<Solved>; 4])> = None;
    for &k in ks {
        let mut solved: [Option<Solved>; 4] = [None, None, None, None];
        for variant in ALL_VARIANTS {
            if variant == Variant::Z && k > delta {
                continue;
            }
            let r = solver::grundy_number(g, variant, k, cfg)?;
            solved[vidx(variant)] = Some(Solved {
                value: r.value,
                witness: r.witness,
            });
        }
        let mut values = VariantValues::default();
        for variant in ALL_VARIANTS {
            if let Some(s) = &solved[vidx(variant)] {
                values.set(variant, s.value);
            }
        }

        let mut checks = Vec::new();
        let z = solved[vidx(Variant::Z)].as_ref();
        let plain = solved[vidx(Variant::Plain)].as_ref();
        let total = solved[vidx(Variant::Total)].as_ref();
        let l = solved[vidx(Variant::L)].as_ref();
        checks.push(le_check(g, "z <= plain", z, 0, plain, &z_skip(k))?);
        checks.push(le_check(g, "z <= total", z, 0, total, &z_skip(k))?);
        checks.push(le_check(g, "plain <= l", plain, 0, l, "")?);
        // The strengthened chain fails without the minimum-degree
        // hypothesis: on a path with k = 2 the plain value reaches n, so
        // only the weak form above is universal.
        if delta >= k {
            checks.push(le_check(g, "plain + 1 <= l", plain, 1, l, "")?);
        } else {
            checks.push(AuditCheck::skipped(
                "plain + 1 <= l",
                format!("needs minimum degree >= k; minimum degree is {delta}"),
            ));
        }
        checks.push(le_check(g, "total <= l", total, 0, l, "")?);
        for variant in ALL_VARIANTS {
            let name = format!("{} <= degree bound", variant.tag());
            let check = match &solved[vidx(variant)] {
                None => AuditCheck::skipped(name, z_skip(k)),
                Some(s) => {
                    let bound = constructions::degree_upper_bound(g, variant, k);
                    if s.value <= bound {
                        let note =
                            (s.value == bound).then(|| format!("tight ({} = {})", s.value, bound));
                        AuditCheck::pass(name, note)
                    } else {
                        let detail = format!(
                            "{} value {} exceeds the degree bound {}",
                            variant.tag(),
                            s.value,
                            bound
                        );
                        let outcome = fail_outcome(g, detail, vec![s.witness.clone()])?;
                        AuditCheck {
                            name,
                            note: None,
                            outcome,
                        }
                    }
                }
            };
            checks.push(check);
        }
        if let Some((pk, prev_solved)) = &prev {
            for variant in ALL_VARIANTS {
                let name = format!("{} nondecreasing in k", variant.tag());
                let check = match (&prev_solved[vidx(variant)], &solved[vidx(variant)]) {
                    (Some(a), Some(b)) => {
                        if a.value <= b.value {
                            AuditCheck::pass(
                                name,
                                Some(format!("k = {pk} -> {k}: {} -> {}", a.value, b.value)),
                            )
                        } else {
                            let detail = format!(
                                "{} value dropped from {} at k = {pk} to {} at k = {k}",
                                variant.tag(),
                                a.value,
                                b.value
                            );
                            let outcome = fail_outcome(
                                g,
                                detail,
                                vec![a.witness.clone(), b.witness.clone()],
                            )?;
                            AuditCheck {
                                name,
                                note: None,
                                outcome,
                            }
                        }
                    }
                    _ => AuditCheck::skipped(name, z_skip(k)),
                };
                checks.push(check);
            }
        }

        out.push(AuditEntry {
            instance: inst.label.clone(),
            n,
            k,
            values,
            l_reaches_n: values.l == Some(n as u32),
            checks,
        });
        prev = Some((k, solved));
    }
    Ok(out)
}

/// Runs `f` over `items` preserving input order; `jobs > 1` distributes
/// across that many workers. Output is identical for every worker count.
fn run_ordered<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if jobs > 1 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            return pool.install(|| items.par_iter().map(&f).collect());
        }
    }
    items.iter().map(f).collect()
}

/// Solves all four variants on every instance for every `k` and checks the
/// universal inequalities: the variant chain, the degree bounds, and
/// monotonicity in `k`. Oversized instances are recorded as capacity skips;
/// the Z variant is skipped when `k` exceeds the minimum degree.
pub fn audit_bounds(
    instances: &[AuditInstance],
    ks: &[u32],
    cfg: &SolverConfig,
    jobs: usize,
) -> Result<AuditReport> {
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.iter().any(|&k| k == 0) {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let results = run_ordered(instances, jobs, |inst| audit_one(inst, &ks, cfg));
    let mut entries = Vec::new();
    for r in results {
        entries.extend(r?);
    }
    Ok(AuditReport {
        campaign: "bounds".into(),
        entries,
    })
}

/// Both sides of the Z-versus-forcing question on one graph, with
/// certificates for each: the solver's maximum Z-sequence and a minimum
/// forcing set whose reversed trace is itself a valid Z-sequence. The
/// reversed trace proves `z_value >= n - forcing`; an outcome below that
/// floor is a search bug and aborts with an internal error.
#[derive(Clone, Debug, Serialize)]
pub struct ForcingConjectureReport {
    pub n: usize,
    pub k: u32,
    pub z_value: u32,
    pub n_minus_forcing: u32,
    pub equal: bool,
    pub z_witness: GrundySequence,
    pub forcing: ForcingResult,
    pub reversed: GrundySequence,
}

pub fn check_forcing_conjecture(
    g: &Graph,
    k: u32,
    cfg: &SolverConfig,
) -> Result<ForcingConjectureReport> {
    let z = solver::grundy_number(g, Variant::Z, k, cfg)?;
    let f = forcing::k_forcing_number(g, k)?;
    let reversed = forcing::z_sequence_from_forcing(g, k, &f.trace)?;
    let n_minus_forcing = (g.n() - f.value) as u32;
    if z.value < n_minus_forcing {
        return Err(Error::Internal(format!(
            "Z search returned {} but the reversed forcing trace is a valid Z-sequence of length {}",
            z.value, n_minus_forcing
        )));
    }
    Ok(ForcingConjectureReport {
        n: g.n(),
        k,
        z_value: z.value,
        n_minus_forcing,
        equal: z.value == n_minus_forcing,
        z_witness: z.witness,
        forcing: f,
        reversed,
    })
}

/// Sweeps the Z-versus-forcing check over a stream. Instances whose minimum
/// degree is below `k` are skipped (the question is posed under that
/// hypothesis), as are instances past the capacity guard. A strict
/// inequality is reported as a Fail entry whose payload carries both
/// certificates; it is a finding about the open question, not a bug.
pub fn forcing_conjecture_campaign(
    instances: &[AuditInstance],
    k: u32,
    cfg: &SolverConfig,
    jobs: usize,
) -> Result<AuditReport> {
    let check_name = "z = n - forcing number";
    let per_instance = |inst: &AuditInstance| -> Result<AuditEntry> {
        let g = &inst.graph;
        let n = g.n();
        if n == 0 {
            return Ok(capacity_entry(inst, k, "empty graph".into()));
        }
        if n > cfg.max_vertices || n > forcing::FORCING_GUARD {
            let guard = cfg.max_vertices.min(forcing::FORCING_GUARD);
            return Ok(capacity_entry(
                inst,
                k,
                format!("capacity: n = {n} exceeds the {guard}-vertex guard"),
            ));
        }
        let delta = g.min_degree() as u32;
        if delta < k {
            return Ok(AuditEntry {
                instance: inst.label.clone(),
                n,
                k,
                values: VariantValues::default(),
                l_reaches_n: false,
                checks: vec![AuditCheck::skipped(
                    check_name,
                    format!("hypothesis: minimum degree {delta} below k = {k}"),
                )],
            });
        }
        let report = check_forcing_conjecture(g, k, cfg)?;
        let mut values = VariantValues::default();
        values.set(Variant::Z, report.z_value);
        let check = if report.equal {
            AuditCheck::pass(
                check_name,
                Some(format!("{} = {}", report.z_value, report.n_minus_forcing)),
            )
        } else {
            let detail = format!(
                "strict inequality: z value {} exceeds n - forcing number = {}",
                report.z_value, report.n_minus_forcing
            );
            let mut outcome = fail_outcome(
                g,
                detail,
                vec![report.z_witness.clone(), report.reversed.clone()],
            )?;
            if let CheckOutcome::Fail { counterexample } = &mut outcome {
                counterexample.forcing = Some(report.forcing.clone());
            }
            AuditCheck {
                name: check_name.into(),
                note: None,
                outcome,
            }
        };
        Ok(AuditEntry {
            instance: inst.label.clone(),
            n,
            k,
            values,
            l_reaches_n: false,
            checks: vec![check],
        })
    };
    let results = run_ordered(instances, jobs, per_instance);
    let entries = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(AuditReport {
        campaign: "forcing-conjecture".into(),
        entries,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CubeStatus {
    /// The exact solver agreed with the conjectured value.
    ConfirmedExact { value: u32 },
    /// Constructive lower bound met the degree upper bound at the
    /// conjectured value, determining it without a search.
    ConfirmedPinch { value: u32 },
    /// Only an interval is known at this size; not evidence either way.
    Undecided { lower: u32, upper: u32 },
    /// An exactly determined value (search or pinch) differs from the
    /// conjectured one.
    RefutedExact { value: u32, conjectured: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct CubeConjectureReport {
    pub d: u32,
    pub k: u32,
    pub conjectured: u32,
    pub status: CubeStatus,
    /// The constructive L-sequence backing the lower bound (and the exact
    /// value, when confirmed).
    pub witness: GrundySequence,
}

/// Tests the conjectured L-value of the d-cube at one `k`. Cubes inside the
/// capacity guard are solved exactly; larger ones are bracketed between the
/// constructive witness and the degree bound, confirming by pinch when the
/// two meet and reporting an undecided interval otherwise.
pub fn check_cube_conjecture(d: u32, k: u32, cfg: &SolverConfig) -> Result<CubeConjectureReport> {
    if d < 2 {
        return Err(Error::InvalidParameter(
            "cube check requires d >= 2".into(),
        ));
    }
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(
            "cube check requires 1 <= k <= d".into(),
        ));
    }
    let n = 1usize << d;
    let conjectured = if k >= d {
        n as u32
    } else {
        (n as u32) - (1u32 << (d - k - 1))
    };
    let witness = constructions::hypercube_l_witness(d, k)?.sequence;
    let lower = witness.len() as u32;
    let upper = n as u32 - d + k;
    let status = if n <= cfg.max_vertices {
        let r = solver::grundy_number(&FamilySpec::Hypercube(d).generate()?, Variant::L, k, cfg)?;
        if r.value < lower {
            return Err(Error::Internal(format!(
                "cube search returned {} below the certified witness length {lower}",
                r.value
            )));
        }
        if r.value == conjectured {
            CubeStatus::ConfirmedExact { value: r.value }
        } else {
            CubeStatus::RefutedExact {
                value: r.value,
                conjectured,
            }
        }
    } else if lower == upper {
        if lower == conjectured {
            CubeStatus::ConfirmedPinch { value: lower }
        } else {
            CubeStatus::RefutedExact {
                value: lower,
                conjectured,
            }
        }
    } else {
        CubeStatus::Undecided { lower, upper }
    };
    Ok(CubeConjectureReport {
        d,
        k,
        conjectured,
        status,
        witness,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductRelation {
    Equal,
    LhsLess,
    LhsGreater,
    Undecided,
}

/// Both sides of the product question for the L variant: is the value on a
/// box product the product of the factor values? Values are reported even
/// when the minimum-degree hypothesis fails, with the flag recording it.
#[derive(Clone, Debug, Serialize)]
pub struct ProductQuestionReport {
    pub k: u32,
    /// Both factors have minimum degree at least `k`, the hypothesis the
    /// question is posed under.
    pub hypothesis_met: bool,
    pub lhs: ClosedFormValue,
    pub left_factor: u32,
    pub right_factor: u32,
    pub rhs: u32,
    pub relation: ProductRelation,
}

pub fn check_product_question(
    g: &Graph,
    h: &Graph,
    k: u32,
    cfg: &SolverConfig,
) -> Result<ProductQuestionReport> {
    if g.n() == 0 || h.n() == 0 {
        return Err(Error::InvalidParameter(
            "product question needs nonempty factors".into(),
        ));
    }
    let left_factor = solver::grundy_number(g, Variant::L, k, cfg)?.value;
    let right_factor = solver::grundy_number(h, Variant::L, k, cfg)?.value;
    let rhs = left_factor * right_factor;
    let product = g.cartesian_product(h)?;
    let lhs = if product.n() <= cfg.max_vertices {
        ClosedFormValue::Exact(solver::grundy_number(&product, Variant::L, k, cfg)?.value)
    } else {
        let b = solver::grundy_bounds(&product, Variant::L, k)?;
        if b.lower == b.upper {
            ClosedFormValue::Exact(b.lower)
        } else {
            ClosedFormValue::Bounds {
                lower: b.lower,
                upper: b.upper,
            }
        }
    };
    let relation = match lhs {
        ClosedFormValue::Exact(v) => {
            if v == rhs {
                ProductRelation::Equal
            } else if v < rhs {
                ProductRelation::LhsLess
            } else {
                ProductRelation::LhsGreater
            }
        }
        ClosedFormValue::Bounds { lower, upper } => {
            if lower > rhs {
                ProductRelation::LhsGreater
            } else if upper < rhs {
                ProductRelation::LhsLess
            } else {
                ProductRelation::Undecided
            }
        }
    };
    Ok(ProductQuestionReport {
        k,
        hypothesis_met: g.min_degree() >= k as usize && h.min_degree() >= k as usize,
        lhs,
        left_factor,
        right_factor,
        rhs,
        relation,
    })
}

/// Best known bounds for a family instance without an exact solve: the
/// greedy lower bound and degree upper bound, improved by whichever hand
/// construction applies to the family. On several families the two ends
/// meet, determining the value at sizes the search cannot reach.
pub fn family_bounds(spec: &FamilySpec, variant: Variant, k: u32) -> Result<BoundsResult> {
    let g = spec.generate()?;
    let mut bounds = solver::grundy_bounds(&g, variant, k)?;
    if let Some(seq) = construction_witness(spec, variant, k)? {
        if seq.len() as u32 > bounds.lower {
            bounds.lower = seq.len() as u32;
            bounds.lower_witness = seq;
        }
    }
    Ok(bounds)
}

/// The hand-built maximum-length sequence for families where one is known;
/// `None` when no construction applies to this (family, variant, k).
pub fn construction_witness(
    spec: &FamilySpec,
    variant: Variant,
    k: u32,
) -> Result<Option<GrundySequence>> {
    let seq = match *spec {
        FamilySpec::Cycle(n) if k == 2 => Some(constructions::cycle_witness(n, variant)?),
        FamilySpec::Hypercube(d) if variant == Variant::L && k >= 1 && k <= d => {
            Some(constructions::hypercube_l_witness(d, k)?.sequence)
        }
        FamilySpec::Grid(m, n) if variant == Variant::Plain && k == 2 && m >= 2 => {
            Some(constructions::grid_witness(m, n)?)
        }
        FamilySpec::TreeCycleGadget(h) if variant == Variant::L && k == 2 => {
            Some(constructions::gadget_l_witness(h)?)
        }
        _ => None,
    };
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family_instances(specs: &[FamilySpec]) -> Vec<AuditInstance> {
        specs
            .iter()
            .map(|s| AuditInstance::from_family(s).unwrap())
            .collect()
    }

    #[test]
    fn graph6_stream_parses_lines_and_labels() {
        let text = "D?{\n\nDqc\n";
        let instances = graph6_stream(text).unwrap();
        assert_eq!(instances.len(), 2);
        assert_eq!(instances[0].label, "D?{");
        assert_eq!(instances[0].graph.n(), 5);
        let err = graph6_stream("D?{\nD\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "got: {err}");
    }

    #[test]
    fn bounds_audit_is_clean_on_small_families() {
        let instances = family_instances(&[
            FamilySpec::Cycle(5),
            FamilySpec::Complete(4),
            FamilySpec::Path(4),
            FamilySpec::CompleteBipartite(3, 2),
        ]);
        let cfg = SolverConfig::default();
        let report = audit_bounds(&instances, &[1, 2, 3], &cfg, 1).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.entries.len(), 12);
        let counts = report.counts();
        assert!(counts.skipped > 0, "path instances must skip z for k > 1");

        let c5_k2 = &report.entries[1];
        assert_eq!(c5_k2.instance, "cycle:5");
        assert_eq!(c5_k2.k, 2);
        assert_eq!(c5_k2.values.plain, Some(4));
        assert_eq!(c5_k2.values.l, Some(5));
        assert!(c5_k2.l_reaches_n);
    }

    #[test]
    fn tight_chain_cases_carry_notes() {
        let instances = family_instances(&[FamilySpec::Complete(4)]);
        let cfg = SolverConfig::default();
        let report = audit_bounds(&instances, &[2], &cfg, 1).unwrap();
        let entry = &report.entries[0];
        let chain = entry
            .checks
            .iter()
            .find(|c| c.name == "plain + 1 <= l")
            .unwrap();
        assert_eq!(chain.note.as_deref(), Some("tight (3 = 3)"));
    }

    #[test]
    fn capacity_and_empty_graphs_are_skipped_not_failed() {
        let big = AuditInstance::from_family(&FamilySpec::Grid(5, 5)).unwrap();
        let empty = AuditInstance::new("empty", Graph::empty(0).unwrap());
        let cfg = SolverConfig::default();
        let report = audit_bounds(&[big, empty], &[2], &cfg, 1).unwrap();
        assert!(report.is_clean());
        for entry in &report.entries {
            assert_eq!(entry.checks.len(), 1);
            assert!(matches!(
                entry.checks[0].outcome,
                CheckOutcome::Skipped { .. }
            ));
        }
    }

    #[test]
    fn worker_count_does_not_change_the_report() {
        let instances = family_instances(&[
            FamilySpec::Cycle(5),
            FamilySpec::Cycle(6),
            FamilySpec::Complete(5),
            FamilySpec::Grid(2, 3),
            FamilySpec::Hypercube(3),
        ]);
        let cfg = SolverConfig::default();
        let one = audit_bounds(&instances, &[1, 2], &cfg, 1).unwrap();
        let four = audit_bounds(&instances, &[1, 2], &cfg, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.to_jsonl().unwrap(), four.to_jsonl().unwrap());
    }

    #[test]
    fn jsonl_round_trips_entries() {
        let instances = family_instances(&[FamilySpec::Cycle(4)]);
        let cfg = SolverConfig::default();
        let report = audit_bounds(&instances, &[2], &cfg, 1).unwrap();
        let jsonl = report.to_jsonl().unwrap();
        for line in jsonl.lines() {
            let entry: AuditEntry = serde_json::from_str(line).unwrap();
            assert_eq!(entry.instance, "cycle:4");
        }
        let csv = report.csv_summary();
        assert!(csv.starts_with("instance,n,k,"));
        assert!(csv.contains("cycle:4,4,2,3,4,3,4,"));
    }

    #[test]
    fn forcing_conjecture_small_cases_are_equalities() {
        let cfg = SolverConfig::default();
        for (spec, k, expect_z) in [
            (FamilySpec::Cycle(5), 2, 4),
            (FamilySpec::Complete(3), 1, 1),
            (FamilySpec::CompleteBipartite(3, 3), 2, 4),
        ] {
            let g = spec.generate().unwrap();
            let report = check_forcing_conjecture(&g, k, &cfg).unwrap();
            assert_eq!(report.z_value, expect_z, "{spec}");
            assert!(report.equal, "{spec}");
            assert_eq!(report.reversed.len() as u32, report.n_minus_forcing);
        }
    }

    #[test]
    fn forcing_campaign_skips_low_degree_instances() {
        let instances = family_instances(&[FamilySpec::Path(5), FamilySpec::Cycle(5)]);
        let cfg = SolverConfig::default();
        let report = forcing_conjecture_campaign(&instances, 2, &cfg, 1).unwrap();
        assert!(report.is_clean());
        assert!(matches!(
            report.entries[0].checks[0].outcome,
            CheckOutcome::Skipped { .. }
        ));
        assert!(matches!(
            report.entries[1].checks[0].outcome,
            CheckOutcome::Pass
        ));
        assert_eq!(report.entries[1].values.z, Some(4));
    }

    #[test]
    fn cube_check_statuses() {
        let cfg = SolverConfig::default();
        let r = check_cube_conjecture(3, 2, &cfg).unwrap();
        assert_eq!(r.conjectured, 7);
        assert_eq!(r.status, CubeStatus::ConfirmedExact { value: 7 });

        let r = check_cube_conjecture(4, 3, &cfg).unwrap();
        assert_eq!(r.status, CubeStatus::ConfirmedExact { value: 15 });

        let r = check_cube_conjecture(5, 4, &cfg).unwrap();
        assert_eq!(r.status, CubeStatus::ConfirmedPinch { value: 31 });

        let r = check_cube_conjecture(5, 5, &cfg).unwrap();
        assert_eq!(r.status, CubeStatus::ConfirmedPinch { value: 32 });

        let r = check_cube_conjecture(5, 2, &cfg).unwrap();
        assert_eq!(
            r.status,
            CubeStatus::Undecided {
                lower: 28,
                upper: 29
            }
        );
        assert_eq!(r.witness.len(), 28);
    }

    #[test]
    fn product_question_on_the_square_of_an_edge() {
        let cfg = SolverConfig::default();
        let p2 = FamilySpec::Path(2).generate().unwrap();
        let report = check_product_question(&p2, &p2, 1, &cfg).unwrap();
        assert!(report.hypothesis_met);
        assert_eq!(report.lhs, ClosedFormValue::Exact(3));
        assert_eq!(report.rhs, 4);
        assert_eq!(report.relation, ProductRelation::LhsLess);
    }

    #[test]
    fn product_question_reports_values_without_the_hypothesis() {
        let cfg = SolverConfig::default();
        let p2 = FamilySpec::Path(2).generate().unwrap();
        let p3 = FamilySpec::Path(3).generate().unwrap();
        let report = check_product_question(&p2, &p3, 2, &cfg).unwrap();
        assert!(!report.hypothesis_met);
        assert!(matches!(report.lhs, ClosedFormValue::Exact(_)));
        assert!(report.left_factor > 0 && report.right_factor > 0);
    }

    #[test]
    fn family_bounds_pinch_where_constructions_meet_the_degree_bound() {
        let b = family_bounds(&FamilySpec::Hypercube(4), Variant::L, 3).unwrap();
        assert_eq!((b.lower, b.upper), (15, 15));
        let b = family_bounds(&FamilySpec::TreeCycleGadget(3), Variant::L, 2).unwrap();
        assert_eq!((b.lower, b.upper), (14, 14));
        assert_eq!(b.lower_witness.len(), 14);
        let b = family_bounds(&FamilySpec::Cycle(9), Variant::Total, 2).unwrap();
        assert_eq!((b.lower, b.upper), (9, 9));
    }

    #[test]
    fn empty_stream_gives_an_empty_report() {
        let cfg = SolverConfig::default();
        let report = audit_bounds(&[], &[1, 2], &cfg, 4).unwrap();
        assert!(report.entries.is_empty());
        assert_eq!(report.to_jsonl().unwrap(), "");
    }
}
