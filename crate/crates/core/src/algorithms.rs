//! Local-consistency algorithms as instances of the generic iteration.
//!
//! | algorithm   | driver   | functions                  | update policy          |
//! |-------------|----------|----------------------------|------------------------|
//! | `hyper_arc` | `cd_run` | every `π_i`                | idempotent-filtered    |
//! | `ac3`       | `cd_run` | `π_1` of `C` and `Cᵀ`      | idempotent + comm      |
//! | `path`      | `cd_run` | every path function        | idempotent-filtered    |
//! | `pc2`       | `cd_run` | every path function        | idempotent + comm      |
//! | `darc`      | `si_run` | `π_1` along the order      | one pass               |
//! | `dpath`     | `si_run` | `f^z_{x,y}` along the order| one pass               |
//!
//! `dac` and `dpc` are the classical loop nests, written out directly; they
//! must agree with `darc` and `dpath`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::csp::{normalize, pair_index, reorder, BinaryRelation, Csp, CspError, NormalizedCsp, Value, VariableOrder};
use crate::engine::{
    cd_run, si_run, CommMap, EngineConfig, EngineError, FunctionSet, IterationTrace, PolicyKind,
    Progress, SiConfig, TraceStep, UpdatePolicy,
};
use crate::order::{SchemeFn, ValueSet};
use crate::propagators::{
    comm_ac3_map, comm_arc_map, comm_path_map, path_functions, projections, PathFn, PathTarget,
    ProjectionFn,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgorithmError {
    #[error(transparent)]
    Csp(#[from] CspError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A reduced problem and how it was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmResult<P> {
    pub problem: P,
    pub trace: IterationTrace,
    /// False when some domain or constraint ended up empty.
    pub consistent_hint: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Overrides the algorithm's own update policy (engine-driven
    /// algorithms only).
    pub policy: Option<PolicyKind>,
    pub engine: EngineConfig,
    pub si: SiConfig,
}

fn boxed<T, F: SchemeFn<T> + 'static>(fns: Vec<F>) -> Vec<Box<dyn SchemeFn<T>>> {
    fns.into_iter().map(|f| Box::new(f) as Box<dyn SchemeFn<T>>).collect()
}

fn arc_hint(p: &Csp) -> bool {
    !p.has_empty_domain() && p.constraints().iter().all(|c| !c.tuples().is_empty())
}

fn path_hint(p: &NormalizedCsp) -> bool {
    !p.has_empty_relation() && p.domains().iter().all(|d| !d.is_empty())
}

fn run_projections(
    p: &Csp,
    fns: Vec<ProjectionFn>,
    kind: PolicyKind,
    comm: impl FnOnce(&[ProjectionFn]) -> CommMap,
    engine: &EngineConfig,
) -> Result<AlgorithmResult<Csp>, AlgorithmError> {
    let comm = if kind.uses_comm() { comm(&fns) } else { CommMap::default() };
    let set = FunctionSet::new(p.len(), boxed(fns))?;
    let (d, trace) = cd_run(&set, p.bottoms(), &UpdatePolicy::new(kind, comm), engine)?;
    let problem = p.with_domains(d.into_components());
    Ok(AlgorithmResult {
        consistent_hint: arc_hint(&problem),
        problem,
        trace,
    })
}

/// Hyper-arc consistency: the largest domains below `p` that are a common
/// fixpoint of every projection.
pub fn hyper_arc(p: &Csp) -> Result<AlgorithmResult<Csp>, AlgorithmError> {
    hyper_arc_with(p, &RunOptions::default())
}

pub fn hyper_arc_with(p: &Csp, options: &RunOptions) -> Result<AlgorithmResult<Csp>, AlgorithmError> {
    let kind = options.policy.unwrap_or(PolicyKind::IdempotentFiltered);
    run_projections(p, projections(p), kind, comm_arc_map, &options.engine)
}

fn require_binary(p: &Csp) -> Result<(), CspError> {
    match p.constraints().iter().find(|c| !c.is_binary()) {
        Some(c) => Err(CspError::Unsupported(format!(
            "constraint `{}` has arity {}; only binary constraints are supported here",
            c.name(),
            c.arity()
        ))),
        None => Ok(()),
    }
}

/// AC-3 on a binary problem.
///
/// When some pair carries two constraints the reverse arc of a constraint
/// is no longer treated as commuting with it.
pub fn ac3(p: &Csp) -> Result<AlgorithmResult<Csp>, AlgorithmError> {
    ac3_with(p, &RunOptions::default())
}

pub fn ac3_with(p: &Csp, options: &RunOptions) -> Result<AlgorithmResult<Csp>, AlgorithmError> {
    require_binary(p)?;
    let single = p.at_most_one_per_pair();
    let kind = options.policy.unwrap_or(PolicyKind::Both);
    run_projections(
        p,
        projections(p),
        kind,
        |fns| comm_ac3_map(fns, single),
        &options.engine,
    )
}

fn run_path(
    p: &NormalizedCsp,
    kind: PolicyKind,
    engine: &EngineConfig,
) -> Result<AlgorithmResult<NormalizedCsp>, AlgorithmError> {
    let fns = path_functions(p);
    let comm = if kind.uses_comm() { comm_path_map(&fns) } else { CommMap::default() };
    let set = FunctionSet::new(p.relations().len(), boxed(fns))?;
    let (d, trace) = cd_run(&set, p.bottoms(), &UpdatePolicy::new(kind, comm), engine)?;
    let problem = p.from_element(d);
    Ok(AlgorithmResult {
        consistent_hint: path_hint(&problem),
        problem,
        trace,
    })
}

/// Path consistency: the largest relations below `p` that are a common
/// fixpoint of every path function.
pub fn path(p: &NormalizedCsp) -> Result<AlgorithmResult<NormalizedCsp>, AlgorithmError> {
    path_with(p, &RunOptions::default())
}

pub fn path_with(
    p: &NormalizedCsp,
    options: &RunOptions,
) -> Result<AlgorithmResult<NormalizedCsp>, AlgorithmError> {
    run_path(
        p,
        options.policy.unwrap_or(PolicyKind::IdempotentFiltered),
        &options.engine,
    )
}

/// PC-2: `path` with the functions that tighten the same pair treated as
/// commuting.
pub fn pc2(p: &NormalizedCsp) -> Result<AlgorithmResult<NormalizedCsp>, AlgorithmError> {
    pc2_with(p, &RunOptions::default())
}

pub fn pc2_with(
    p: &NormalizedCsp,
    options: &RunOptions,
) -> Result<AlgorithmResult<NormalizedCsp>, AlgorithmError> {
    run_path(p, options.policy.unwrap_or(PolicyKind::Both), &options.engine)
}

/// The DARC list for `P≺`: `π_1` of every binary constraint on
/// `(x_j, x_m)`, grouped by `m` from last to first, by `j` within a group.
pub fn darc_list(reordered: &Csp) -> Vec<ProjectionFn> {
    let mut keyed: Vec<((usize, usize, usize), ProjectionFn)> = reordered
        .constraints()
        .iter()
        .enumerate()
        .filter_map(|(k, c)| c.pair().map(|(j, m)| ((m, j, k), ProjectionFn::new(reordered, k, 0))))
        .collect();
    keyed.sort_by(|(a, _), (b, _)| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    keyed.into_iter().map(|(_, f)| f).collect()
}

/// Maps trace coordinates of `P≺` back to variable indices of the input.
fn unreorder_variables(trace: &mut IterationTrace, order: &VariableOrder) {
    for step in &mut trace.steps {
        for c in &mut step.changed {
            *c = order.sequence()[*c];
        }
        step.changed.sort_unstable();
    }
}

fn unreorder_pairs(trace: &mut IterationTrace, order: &VariableOrder) {
    let n = order.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    for step in &mut trace.steps {
        for c in &mut step.changed {
            let (a, b) = pairs[*c];
            let (u, v) = (order.sequence()[a], order.sequence()[b]);
            *c = pair_index(u.min(v), u.max(v), n);
        }
        step.changed.sort_unstable();
    }
}

fn restore_domains(reduced: &[ValueSet<Value>], order: &VariableOrder) -> Vec<ValueSet<Value>> {
    (0..order.len()).map(|v| reduced[order.rank(v)].clone()).collect()
}

/// Directional arc consistency w.r.t. `order`, in one pass.
///
/// Non-binary constraints are kept (restricted to the new domains) but do
/// not propagate. The result lists variables in the input order.
pub fn darc(p: &Csp, order: &VariableOrder) -> Result<AlgorithmResult<Csp>, AlgorithmError> {
    darc_with(p, order, &RunOptions::default())
}

pub fn darc_with(
    p: &Csp,
    order: &VariableOrder,
    options: &RunOptions,
) -> Result<AlgorithmResult<Csp>, AlgorithmError> {
    let reordered = reorder(p, order)?;
    let set = FunctionSet::new(reordered.len(), boxed(darc_list(&reordered)))?;
    let (d, mut trace) = si_run(&set, reordered.bottoms(), &options.si)?;
    unreorder_variables(&mut trace, order);
    let problem = p.with_domains(restore_domains(d.components(), order));
    Ok(AlgorithmResult {
        consistent_hint: arc_hint(&problem),
        problem,
        trace,
    })
}

/// The DAC double loop. Needs exactly one binary constraint per pair.
pub fn dac(p: &Csp, order: &VariableOrder) -> Result<AlgorithmResult<Csp>, AlgorithmError> {
    if !p.one_per_pair() {
        return Err(CspError::Unsupported(
            "dac needs exactly one binary constraint on every pair of variables".into(),
        )
        .into());
    }
    let r = reorder(p, order)?;
    let n = r.len();
    let mut relations: Vec<Option<BinaryRelation>> = vec![None; n * n.saturating_sub(1) / 2];
    for c in r.constraints() {
        let (i, j) = c.pair().expect("binary");
        relations[pair_index(i, j, n)] = c.relation();
    }
    let mut domains: Vec<ValueSet<Value>> = r.domains().to_vec();
    let mut trace = IterationTrace::default();
    let total = n * n.saturating_sub(1) / 2;
    for j in (1..n).rev() {
        for i in 0..j {
            let c = relations[pair_index(i, j, n)].as_ref().expect("one per pair");
            let revised: ValueSet<Value> = domains[i]
                .iter()
                .copied()
                .filter(|&a| domains[j].iter().any(|&b| c.contains(a, b)))
                .collect();
            let changed = revised != domains[i];
            domains[i] = revised;
            let id = trace.labels.len();
            trace
                .labels
                .push(format!("rev({},{})", r.variables()[i], r.variables()[j]));
            trace.steps.push(TraceStep {
                step: id + 1,
                function: id,
                changed: if changed { vec![i] } else { vec![] },
                enqueued: vec![],
                pending: total - id - 1,
                progress: if changed { Progress::Strict } else { Progress::Unchanged },
            });
        }
    }
    trace.initial_pending = total;
    unreorder_variables(&mut trace, order);
    let problem = p.with_domains(restore_domains(&domains, order));
    Ok(AlgorithmResult {
        consistent_hint: arc_hint(&problem),
        problem,
        trace,
    })
}

/// The DPATH list for `P≺`: `f^{x_m}_{x_i,x_j}` grouped by `m` from last
/// to first, `(i, j)` lexicographic within a group.
pub fn dpath_list(reordered: &NormalizedCsp) -> Vec<PathFn> {
    let n = reordered.len();
    let mut out = Vec::new();
    for m in (2..n).rev() {
        for i in 0..m {
            for j in i + 1..m {
                out.push(PathFn::new(reordered, [i, j, m], PathTarget::Xy));
            }
        }
    }
    out
}

/// Directional path consistency w.r.t. `order`, in one pass. Relations are
/// returned in the input's variable order.
pub fn dpath(
    p: &NormalizedCsp,
    order: &VariableOrder,
) -> Result<AlgorithmResult<NormalizedCsp>, AlgorithmError> {
    dpath_with(p, order, &RunOptions::default())
}

pub fn dpath_with(
    p: &NormalizedCsp,
    order: &VariableOrder,
    options: &RunOptions,
) -> Result<AlgorithmResult<NormalizedCsp>, AlgorithmError> {
    let r = p.reorder(order)?;
    let set = FunctionSet::new(r.relations().len(), boxed(dpath_list(&r)))?;
    let (d, mut trace) = si_run(&set, r.bottoms(), &options.si)?;
    unreorder_pairs(&mut trace, order);
    let problem = r.from_element(d).reorder(&order.inverse())?;
    Ok(AlgorithmResult {
        consistent_hint: path_hint(&problem),
        problem,
        trace,
    })
}

/// The DPC triple loop, `C_{i,j} := C_{i,j} ∩ C_{i,m} · C_{j,m}ᵀ`.
pub fn dpc(
    p: &NormalizedCsp,
    order: &VariableOrder,
) -> Result<AlgorithmResult<NormalizedCsp>, AlgorithmError> {
    let r = p.reorder(order)?;
    let n = r.len();
    let mut relations: Vec<BinaryRelation> = r.relations().to_vec();
    let mut trace = IterationTrace::default();
    let total: usize = (2..n).map(|m| m * (m - 1) / 2).sum();
    for m in (2..n).rev() {
        for j in 0..m {
            for i in 0..j {
                let through = relations[pair_index(i, m, n)]
                    .compose(&relations[pair_index(j, m, n)].transpose());
                let k = pair_index(i, j, n);
                let tightened = relations[k].intersect(&through);
                let changed = tightened != relations[k];
                relations[k] = tightened;
                let id = trace.labels.len();
                let v = r.variables();
                trace.labels.push(format!("f[{}]({},{})", v[m], v[i], v[j]));
                trace.steps.push(TraceStep {
                    step: id + 1,
                    function: id,
                    changed: if changed { vec![k] } else { vec![] },
                    enqueued: vec![],
                    pending: total - id - 1,
                    progress: if changed { Progress::Strict } else { Progress::Unchanged },
                });
            }
        }
    }
    trace.initial_pending = total;
    unreorder_pairs(&mut trace, order);
    let problem = r.with_relations(relations).reorder(&order.inverse())?;
    Ok(AlgorithmResult {
        consistent_hint: path_hint(&problem),
        problem,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    HyperArc,
    Ac3,
    Path,
    Pc2,
    Darc,
    Dac,
    Dpath,
    Dpc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::HyperArc,
        Algorithm::Ac3,
        Algorithm::Path,
        Algorithm::Pc2,
        Algorithm::Darc,
        Algorithm::Dac,
        Algorithm::Dpath,
        Algorithm::Dpc,
    ];

    pub fn needs_order(self) -> bool {
        matches!(
            self,
            Algorithm::Darc | Algorithm::Dac | Algorithm::Dpath | Algorithm::Dpc
        )
    }

    /// Whether the algorithm reduces relations of the normalized problem.
    pub fn reduces_relations(self) -> bool {
        matches!(
            self,
            Algorithm::Path | Algorithm::Pc2 | Algorithm::Dpath | Algorithm::Dpc
        )
    }

    pub fn is_engine_driven(self) -> bool {
        matches!(
            self,
            Algorithm::HyperArc | Algorithm::Ac3 | Algorithm::Path | Algorithm::Pc2
        )
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "hyperarc" => Algorithm::HyperArc,
            "ac3" => Algorithm::Ac3,
            "path" => Algorithm::Path,
            "pc2" => Algorithm::Pc2,
            "darc" => Algorithm::Darc,
            "dac" => Algorithm::Dac,
            "dpath" => Algorithm::Dpath,
            "dpc" => Algorithm::Dpc,
            other => return Err(format!("unknown algorithm `{other}`")),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::HyperArc => "hyperarc",
            Algorithm::Ac3 => "ac3",
            Algorithm::Path => "path",
            Algorithm::Pc2 => "pc2",
            Algorithm::Darc => "darc",
            Algorithm::Dac => "dac",
            Algorithm::Dpath => "dpath",
            Algorithm::Dpc => "dpc",
        })
    }
}

/// Result of [`run`]: reduced domains or reduced relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Domains(AlgorithmResult<Csp>),
    Relations(AlgorithmResult<NormalizedCsp>),
}

impl Outcome {
    pub fn trace(&self) -> &IterationTrace {
        match self {
            Outcome::Domains(r) => &r.trace,
            Outcome::Relations(r) => &r.trace,
        }
    }

    pub fn consistent_hint(&self) -> bool {
        match self {
            Outcome::Domains(r) => r.consistent_hint,
            Outcome::Relations(r) => r.consistent_hint,
        }
    }
}

/// Runs any algorithm on a plain problem, normalizing first where needed.
/// Directional algorithms default to the identity order.
pub fn run(
    algorithm: Algorithm,
    p: &Csp,
    order: Option<&VariableOrder>,
    options: &RunOptions,
) -> Result<Outcome, AlgorithmError> {
    let identity = VariableOrder::identity(p.len());
    let order = order.unwrap_or(&identity);
    Ok(match algorithm {
        Algorithm::HyperArc => Outcome::Domains(hyper_arc_with(p, options)?),
        Algorithm::Ac3 => Outcome::Domains(ac3_with(p, options)?),
        Algorithm::Darc => Outcome::Domains(darc_with(p, order, options)?),
        Algorithm::Dac => Outcome::Domains(dac(p, order)?),
        Algorithm::Path => Outcome::Relations(path_with(&normalize(p)?, options)?),
        Algorithm::Pc2 => Outcome::Relations(pc2_with(&normalize(p)?, options)?),
        Algorithm::Dpath => Outcome::Relations(dpath_with(&normalize(p)?, order, options)?),
        Algorithm::Dpc => Outcome::Relations(dpc(&normalize(p)?, order)?),
    })
}
