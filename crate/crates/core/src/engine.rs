//! Generic chaotic iteration.
//!
//! Three drivers live here:
//!
//! * [`gi_run`]: the worklist iteration over an arbitrary partial ordering,
//!   where each function is a black box on the whole ordering.
//! * [`cd_run`]: the same iteration specialised to products of powersets,
//!   where functions carry a [`Scheme`] and re-enqueueing only looks at the
//!   coordinates that actually changed.
//! * [`si_run`]: a single ordered pass over a list of functions, valid when
//!   every function semi-commutes with every later one.
//!
//! Each run records an [`IterationTrace`]. The pair `(d, |G|)` must strictly
//! decrease in the lexicographic order at every step; the engine rejects a
//! step that moves `d` down or sideways and [`verify_measure`] re-checks a
//! finished trace.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::order::{apply_extended, OrderError, Poset, ProductElement, SchemeFn, ValueSet};

/// Index of a function in the set handed to a run.
pub type FnId = usize;

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("step {step}: `{function}` is not inflationary (measure did not decrease)")]
    MeasureViolation { step: usize, function: String },
    #[error("step {step}: `{function}` returned {got} components for a scheme of length {expected}")]
    WrongArity {
        step: usize,
        function: String,
        expected: usize,
        got: usize,
    },
    #[error("step limit of {0} reached")]
    StepLimit(usize),
    #[error("step {step}: parked function `{function}` does not fix the current element")]
    WorklistInvariant { step: usize, function: String },
    #[error("comm set of `{0}` contains the function itself")]
    SelfCommuting(String),
    #[error("comm map has {got} entries for {expected} functions")]
    CommSize { expected: usize, got: usize },
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// How the next function is taken from the worklist.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Selection {
    #[default]
    Fifo,
    Lifo,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    /// Re-enqueue every parked function that may have been woken up.
    #[default]
    Full,
    /// As `Full`, minus the applied function when it is idempotent.
    IdempotentFiltered,
    /// As `Full`, minus `Comm(g)`.
    CommFiltered,
    /// Both filters at once.
    Both,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::Full,
        PolicyKind::IdempotentFiltered,
        PolicyKind::CommFiltered,
        PolicyKind::Both,
    ];

    pub fn uses_comm(self) -> bool {
        matches!(self, PolicyKind::CommFiltered | PolicyKind::Both)
    }

    pub fn filters_idempotent(self) -> bool {
        matches!(self, PolicyKind::IdempotentFiltered | PolicyKind::Both)
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(PolicyKind::Full),
            "idem" => Ok(PolicyKind::IdempotentFiltered),
            "comm" => Ok(PolicyKind::CommFiltered),
            "both" => Ok(PolicyKind::Both),
            other => Err(format!(
                "unknown policy `{other}` (expected full, idem, comm or both)"
            )),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolicyKind::Full => "full",
            PolicyKind::IdempotentFiltered => "idem",
            PolicyKind::CommFiltered => "comm",
            PolicyKind::Both => "both",
        })
    }
}

/// `Comm(g)` for every function `g`, indexed by [`FnId`].
///
/// Every member of `Comm(g)` must commute with `g`; the constructors in
/// [`crate::propagators`] guarantee it, and the test suite checks it by
/// evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommMap {
    sets: Vec<BTreeSet<FnId>>,
}

impl CommMap {
    pub fn new(sets: Vec<BTreeSet<FnId>>) -> Self {
        CommMap { sets }
    }

    pub fn get(&self, id: FnId) -> Option<&BTreeSet<FnId>> {
        self.sets.get(id)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FnId, &BTreeSet<FnId>)> {
        self.sets.iter().enumerate()
    }

    /// Every listed pair `(g, f)` with `f ∈ Comm(g)`.
    pub fn pairs(&self) -> impl Iterator<Item = (FnId, FnId)> + '_ {
        self.iter()
            .flat_map(|(g, set)| set.iter().map(move |&f| (g, f)))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UpdatePolicy {
    kind: PolicyKind,
    comm: CommMap,
}

impl UpdatePolicy {
    pub fn full() -> Self {
        UpdatePolicy::default()
    }

    pub fn idempotent() -> Self {
        UpdatePolicy {
            kind: PolicyKind::IdempotentFiltered,
            comm: CommMap::default(),
        }
    }

    /// Builds a policy. `comm` is ignored unless the kind uses it.
    pub fn new(kind: PolicyKind, comm: CommMap) -> Self {
        let comm = if kind.uses_comm() { comm } else { CommMap::default() };
        UpdatePolicy { kind, comm }
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn comm(&self) -> &CommMap {
        &self.comm
    }

    fn validate(&self, labels: &[String]) -> Result<(), EngineError> {
        if !self.kind.uses_comm() {
            return Ok(());
        }
        if self.comm.len() != labels.len() {
            return Err(EngineError::CommSize {
                expected: labels.len(),
                got: self.comm.len(),
            });
        }
        for (g, set) in self.comm.iter() {
            if set.contains(&g) {
                return Err(EngineError::SelfCommuting(labels[g].clone()));
            }
        }
        Ok(())
    }

    /// Drops the members the policy is allowed to skip.
    fn filter(&self, g: FnId, g_idempotent: bool, candidates: &mut Vec<FnId>) {
        if self.kind.filters_idempotent() && g_idempotent {
            candidates.retain(|&f| f != g);
        }
        if self.kind.uses_comm() {
            if let Some(comm) = self.comm.get(g) {
                candidates.retain(|f| !comm.contains(f));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub selection: Selection,
    pub step_limit: usize,
    /// Evaluate every parked function after each step and fail if one of
    /// them does not fix the current element. Costly; on by default in
    /// debug builds.
    pub check_invariant: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            selection: Selection::Fifo,
            step_limit: DEFAULT_STEP_LIMIT,
            check_invariant: cfg!(debug_assertions),
        }
    }
}

/// The set `G` of pending functions.
#[derive(Debug, Clone)]
pub struct Worklist {
    queue: VecDeque<FnId>,
    member: Vec<bool>,
}

impl Worklist {
    pub fn new(universe: usize) -> Self {
        Worklist {
            queue: VecDeque::with_capacity(universe),
            member: vec![false; universe],
        }
    }

    /// All of `0..universe`, in order.
    pub fn full(universe: usize) -> Self {
        Worklist {
            queue: (0..universe).collect(),
            member: vec![true; universe],
        }
    }

    pub fn contains(&self, id: FnId) -> bool {
        self.member.get(id).copied().unwrap_or(false)
    }

    /// Returns whether the id was new.
    pub fn insert(&mut self, id: FnId) -> bool {
        if self.member[id] {
            return false;
        }
        self.member[id] = true;
        self.queue.push_back(id);
        true
    }

    pub fn pop(&mut self, selection: Selection) -> Option<FnId> {
        let id = match selection {
            Selection::Fifo => self.queue.pop_front(),
            Selection::Lifo => self.queue.pop_back(),
        }?;
        self.member[id] = false;
        Some(id)
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.member.len()
    }
}

/// What happened to `d` in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Progress {
    /// `d` strictly increased.
    Strict,
    Unchanged,
    /// `d` moved down or sideways. Never produced by a successful run.
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub function: FnId,
    /// 0-based coordinates that changed.
    pub changed: Vec<usize>,
    pub enqueued: Vec<FnId>,
    /// `|G|` after the step.
    pub pending: usize,
    pub progress: Progress,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IterationTrace {
    pub labels: Vec<String>,
    /// `|G|` before the first step.
    pub initial_pending: usize,
    pub steps: Vec<TraceStep>,
}

impl IterationTrace {
    pub fn new(labels: Vec<String>, initial_pending: usize) -> Self {
        IterationTrace {
            labels,
            initial_pending,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Total number of worklist insertions after initialisation.
    pub fn insertions(&self) -> usize {
        self.steps.iter().map(|s| s.enqueued.len()).sum()
    }

    /// Number of steps that changed the element.
    pub fn changes(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| s.progress == Progress::Strict)
            .count()
    }

    fn label(&self, id: FnId) -> &str {
        self.labels.get(id).map(String::as_str).unwrap_or("?")
    }

    /// One tab-separated line per step, coordinates 1-based.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let changed: Vec<String> = s.changed.iter().map(|i| (i + 1).to_string()).collect();
            let enqueued: Vec<&str> = s.enqueued.iter().map(|&id| self.label(id)).collect();
            let _ = writeln!(
                out,
                "{}\t{}\tchanged={{{}}}\tenqueued={{{}}}\t|G|={}",
                s.step,
                self.label(s.function),
                changed.join(","),
                enqueued.join(","),
                s.pending
            );
        }
        out
    }
}

/// True iff `(d, |G|)` strictly decreased lexicographically at every step:
/// either `d` strictly grew, or it stayed put and `|G|` dropped.
pub fn verify_measure(trace: &IterationTrace) -> bool {
    let mut pending = trace.initial_pending;
    for step in &trace.steps {
        let ok = match step.progress {
            Progress::Strict => true,
            Progress::Unchanged => step.changed.is_empty() && step.pending < pending,
            Progress::Violated => false,
        };
        if !ok {
            return false;
        }
        pending = step.pending;
    }
    true
}

/// A function on a whole partial ordering, for [`gi_run`].
pub trait Propagator<D>: Send + Sync {
    fn apply(&self, d: &D) -> D;

    fn is_idempotent(&self) -> bool {
        false
    }

    fn label(&self) -> String;
}

/// The canonic extension of a scheme function, as a [`Propagator`].
pub struct Extended<F> {
    inner: F,
}

impl<F> Extended<F> {
    pub fn new(inner: F) -> Self {
        Extended { inner }
    }
}

impl<T, F> Propagator<ProductElement<T>> for Extended<F>
where
    T: Ord + Clone,
    F: SchemeFn<T>,
{
    fn apply(&self, d: &ProductElement<T>) -> ProductElement<T> {
        apply_extended(&self.inner, d).expect("scheme fits the product")
    }

    fn is_idempotent(&self) -> bool {
        self.inner.is_idempotent()
    }

    fn label(&self) -> String {
        self.inner.label()
    }
}

fn progress_of<D: Poset>(before: &D, after: &D) -> Progress {
    if before == after {
        Progress::Unchanged
    } else if before.leq(after) {
        Progress::Strict
    } else {
        Progress::Violated
    }
}

/// Generic iteration over an abstract partial ordering.
///
/// With no structural information about the functions, the `Full` update
/// re-enqueues every parked function whenever `d` changes; the filtered
/// policies then drop `g` (if idempotent) and/or `Comm(g)`.
pub fn gi_run<D, P>(
    functions: &[P],
    bottom: D,
    policy: &UpdatePolicy,
    config: &EngineConfig,
) -> Result<(D, IterationTrace), EngineError>
where
    D: Poset,
    P: Propagator<D>,
{
    let labels: Vec<String> = functions.iter().map(Propagator::label).collect();
    policy.validate(&labels)?;

    let mut worklist = Worklist::full(functions.len());
    let mut trace = IterationTrace::new(labels, worklist.len());
    let mut d = bottom;

    while let Some(g) = worklist.pop(config.selection) {
        let step = trace.steps.len() + 1;
        if step > config.step_limit {
            return Err(EngineError::StepLimit(config.step_limit));
        }
        let next = functions[g].apply(&d);
        let progress = progress_of(&d, &next);
        if progress == Progress::Violated {
            return Err(EngineError::MeasureViolation {
                step,
                function: trace.labels[g].clone(),
            });
        }

        let mut enqueued = Vec::new();
        if progress == Progress::Strict {
            enqueued = (0..functions.len())
                .filter(|&f| !worklist.contains(f))
                .collect();
            policy.filter(g, functions[g].is_idempotent(), &mut enqueued);
            for &f in &enqueued {
                worklist.insert(f);
            }
        }
        d = next;

        if config.check_invariant {
            for f in (0..functions.len()).filter(|&f| !worklist.contains(f)) {
                if functions[f].apply(&d) != d {
                    return Err(EngineError::WorklistInvariant {
                        step,
                        function: trace.labels[f].clone(),
                    });
                }
            }
        }

        trace.steps.push(TraceStep {
            step,
            function: g,
            changed: Vec::new(),
            enqueued,
            pending: worklist.len(),
            progress,
        });
    }
    Ok((d, trace))
}

/// Scheme functions over an `arity`-ary product, with a reverse index from
/// coordinates to the functions that depend on them.
pub struct FunctionSet<T> {
    arity: usize,
    functions: Vec<Box<dyn SchemeFn<T>>>,
    dependents: Vec<Vec<FnId>>,
}

impl<T: Ord + Clone> FunctionSet<T> {
    pub fn new(arity: usize, functions: Vec<Box<dyn SchemeFn<T>>>) -> Result<Self, EngineError> {
        let mut dependents = vec![Vec::new(); arity];
        for (id, f) in functions.iter().enumerate() {
            f.scheme().check_arity(arity)?;
            for &i in f.scheme().indices() {
                dependents[i].push(id);
            }
        }
        Ok(FunctionSet {
            arity,
            functions,
            dependents,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn get(&self, id: FnId) -> &dyn SchemeFn<T> {
        self.functions[id].as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn SchemeFn<T>> {
        self.functions.iter().map(|f| f.as_ref())
    }

    pub fn labels(&self) -> Vec<String> {
        self.functions.iter().map(|f| f.label()).collect()
    }

    /// Functions whose scheme contains coordinate `i`.
    pub fn dependents(&self, i: usize) -> &[FnId] {
        &self.dependents[i]
    }

    /// `f⁺(d)` for the function with the given id.
    pub fn apply_extended(&self, id: FnId, d: &ProductElement<T>) -> ProductElement<T> {
        apply_extended(self.get(id), d).expect("schemes checked at construction")
    }

    /// The canonic extensions, usable with [`gi_run`].
    pub fn extended(&self) -> Vec<Extended<&dyn SchemeFn<T>>> {
        self.iter().map(Extended::new).collect()
    }
}

/// The functions to put back on the worklist after `g` took `before` to
/// `after`.
///
/// The `Full` set is every function outside `G` that depends on a changed
/// coordinate; the policy's filters are applied on top. Result is sorted.
pub fn update_set<T: Ord + Clone>(
    worklist: &Worklist,
    g: FnId,
    functions: &FunctionSet<T>,
    before: &ProductElement<T>,
    after: &ProductElement<T>,
    policy: &UpdatePolicy,
) -> Vec<FnId> {
    let changed = functions
        .get(g)
        .scheme()
        .indices()
        .iter()
        .copied()
        .filter(|&i| before.component(i) != after.component(i));
    update_from_changed(worklist, g, functions, changed, policy)
}

fn update_from_changed<T: Ord + Clone>(
    worklist: &Worklist,
    g: FnId,
    functions: &FunctionSet<T>,
    changed: impl Iterator<Item = usize>,
    policy: &UpdatePolicy,
) -> Vec<FnId> {
    let mut out: BTreeSet<FnId> = BTreeSet::new();
    for i in changed {
        out.extend(
            functions
                .dependents(i)
                .iter()
                .copied()
                .filter(|&f| !worklist.contains(f)),
        );
    }
    let mut out: Vec<FnId> = out.into_iter().collect();
    policy.filter(g, functions.get(g).is_idempotent(), &mut out);
    out
}

fn check_shape<T>(
    step: usize,
    f: &dyn SchemeFn<T>,
    input: &[ValueSet<T>],
    output: &[ValueSet<T>],
) -> Result<(), EngineError>
where
    T: Ord,
{
    if output.len() != input.len() {
        return Err(EngineError::WrongArity {
            step,
            function: f.label(),
            expected: input.len(),
            got: output.len(),
        });
    }
    if output.iter().zip(input).any(|(o, i)| !o.is_subset(i)) {
        return Err(EngineError::MeasureViolation {
            step,
            function: f.label(),
        });
    }
    Ok(())
}

/// Generic iteration on a compound domain.
pub fn cd_run<T: Ord + Clone>(
    functions: &FunctionSet<T>,
    bottoms: ProductElement<T>,
    policy: &UpdatePolicy,
    config: &EngineConfig,
) -> Result<(ProductElement<T>, IterationTrace), EngineError> {
    if bottoms.arity() != functions.arity() {
        return Err(OrderError::ArityMismatch {
            left: functions.arity(),
            right: bottoms.arity(),
        }
        .into());
    }
    let labels = functions.labels();
    policy.validate(&labels)?;

    let mut worklist = Worklist::full(functions.len());
    let mut trace = IterationTrace::new(labels, worklist.len());
    let mut d = bottoms;

    while let Some(g) = worklist.pop(config.selection) {
        let step = trace.steps.len() + 1;
        if step > config.step_limit {
            return Err(EngineError::StepLimit(config.step_limit));
        }
        let f = functions.get(g);
        let scheme = f.scheme();
        let input = d.slice(scheme)?;
        let output = f.apply(&input);
        check_shape(step, f, &input, &output)?;

        let changed: Vec<usize> = scheme
            .indices()
            .iter()
            .zip(input.iter().zip(&output))
            .filter(|(_, (a, b))| a != b)
            .map(|(&i, _)| i)
            .collect();

        let (enqueued, progress) = if changed.is_empty() {
            (Vec::new(), Progress::Unchanged)
        } else {
            let add = update_from_changed(
                &worklist,
                g,
                functions,
                changed.iter().copied(),
                policy,
            );
            d = d.with_slice(scheme, output)?;
            (add, Progress::Strict)
        };
        for &id in &enqueued {
            worklist.insert(id);
        }

        if config.check_invariant {
            for id in (0..functions.len()).filter(|&id| !worklist.contains(id)) {
                if functions.apply_extended(id, &d) != d {
                    return Err(EngineError::WorklistInvariant {
                        step,
                        function: trace.labels[id].clone(),
                    });
                }
            }
        }

        trace.steps.push(TraceStep {
            step,
            function: g,
            changed,
            enqueued,
            pending: worklist.len(),
            progress,
        });
    }
    Ok((d, trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiConfig {
    /// Random states per ordered pair for the semi-commutation spot check;
    /// zero disables it.
    pub spot_check_samples: usize,
    pub seed: u64,
}

impl Default for SiConfig {
    fn default() -> Self {
        SiConfig {
            spot_check_samples: if cfg!(debug_assertions) { 4 } else { 0 },
            seed: 0x5eed,
        }
    }
}

/// One pass over `functions` in list order, each applied exactly once.
///
/// Gives the least common fixpoint when every function is monotonic,
/// inflationary and idempotent and each one semi-commutes with every
/// function after it in the list. That hypothesis is the caller's; with
/// `spot_check_samples > 0` it is sampled and violations are logged.
pub fn si_run<T: Ord + Clone>(
    functions: &FunctionSet<T>,
    bottoms: ProductElement<T>,
    config: &SiConfig,
) -> Result<(ProductElement<T>, IterationTrace), EngineError> {
    if bottoms.arity() != functions.arity() {
        return Err(OrderError::ArityMismatch {
            left: functions.arity(),
            right: bottoms.arity(),
        }
        .into());
    }
    if config.spot_check_samples > 0 {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(config.seed);
        let violations =
            semi_commutation_violations(functions, &bottoms, config.spot_check_samples, &mut rng);
        for (f, g) in violations {
            log::warn!(
                "`{}` does not semi-commute with later `{}`; one pass may stop short of the least fixpoint",
                functions.get(f).label(),
                functions.get(g).label()
            );
        }
    }

    let labels = functions.labels();
    let mut trace = IterationTrace::new(labels, functions.len());
    let mut d = bottoms;
    for id in 0..functions.len() {
        let step = id + 1;
        let f = functions.get(id);
        let input = d.slice(f.scheme())?;
        let output = f.apply(&input);
        check_shape(step, f, &input, &output)?;
        let changed: Vec<usize> = f
            .scheme()
            .indices()
            .iter()
            .zip(input.iter().zip(&output))
            .filter(|(_, (a, b))| a != b)
            .map(|(&i, _)| i)
            .collect();
        let progress = if changed.is_empty() {
            Progress::Unchanged
        } else {
            d = d.with_slice(f.scheme(), output)?;
            Progress::Strict
        };
        trace.steps.push(TraceStep {
            step,
            function: id,
            changed,
            enqueued: Vec::new(),
            pending: functions.len() - step,
            progress,
        });
    }
    Ok((d, trace))
}

/// A random element above `bottoms`: each coordinate is a random subset.
pub fn random_state<T: Ord + Clone, R: Rng + ?Sized>(
    rng: &mut R,
    bottoms: &ProductElement<T>,
) -> ProductElement<T> {
    let keep: f64 = rng.gen_range(0.3..1.0);
    ProductElement::new(
        bottoms
            .components()
            .iter()
            .map(|c| c.iter().filter(|_| rng.gen_bool(keep)).cloned().collect())
            .collect(),
    )
}

/// Whether `f⁺(g⁺(d)) ⊑ g⁺(f⁺(d))` in every coordinate, i.e. applying `f`
/// first leaves no more than applying `g` first.
pub fn semi_commutes_at<T: Ord + Clone>(
    functions: &FunctionSet<T>,
    f: FnId,
    g: FnId,
    d: &ProductElement<T>,
) -> bool {
    let fg = functions.apply_extended(f, &functions.apply_extended(g, d));
    let gf = functions.apply_extended(g, &functions.apply_extended(f, d));
    fg.leq(&gf)
}

/// Ordered pairs `(earlier, later)` of the list for which semi-commutation
/// failed on some sampled state.
pub fn semi_commutation_violations<T: Ord + Clone, R: Rng + ?Sized>(
    functions: &FunctionSet<T>,
    bottoms: &ProductElement<T>,
    samples: usize,
    rng: &mut R,
) -> Vec<(FnId, FnId)> {
    let states: Vec<ProductElement<T>> = (0..samples)
        .map(|_| random_state(rng, bottoms))
        .chain(std::iter::once(bottoms.clone()))
        .collect();
    let mut out = Vec::new();
    for f in 0..functions.len() {
        for g in f + 1..functions.len() {
            if !states.iter().all(|d| semi_commutes_at(functions, f, g, d)) {
                out.push((f, g));
            }
        }
    }
    out
}
