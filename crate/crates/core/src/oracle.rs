//! Brute-force ground truth.
//!
//! Nothing here calls into the iteration engine or the propagators; only the
//! problem types and the [`SchemeFn`] interface are shared. Every check is
//! the slow, literal one: enumerate assignments, enumerate witnesses, apply
//! functions round-robin until a full cycle changes nothing.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::csp::{reorder, BinaryRelation, Constraint, Csp, CspError, NormalizedCsp, Value, VariableOrder};
use crate::order::{ProductElement, Scheme, SchemeFn, ValueSet};

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;
pub const DEFAULT_STEP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space of {size} assignments exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("no fixpoint within {0} function applications")]
    StepCap(usize),
    #[error(transparent)]
    Csp(#[from] CspError),
}

/// All solutions of a problem, as full assignments in variable order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionSet {
    solutions: BTreeSet<Vec<Value>>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn contains(&self, assignment: &[Value]) -> bool {
        self.solutions.contains(assignment)
    }

    /// Lexicographic over the sorted domains.
    pub fn iter(&self) -> impl Iterator<Item = &Vec<Value>> {
        self.solutions.iter()
    }
}

/// Exhaustive enumeration, refusing problems with more than `cap`
/// candidate assignments.
pub fn enumerate_solutions(p: &Csp, cap: u128) -> Result<SolutionSet, OracleError> {
    let size = p.search_space();
    if size > cap {
        return Err(OracleError::CapExceeded { size, cap });
    }
    let mut solutions = BTreeSet::new();
    if p.has_empty_domain() {
        return Ok(SolutionSet { solutions });
    }
    let domains: Vec<Vec<Value>> = p.domains().iter().map(|d| d.iter().copied().collect()).collect();
    let mut at = vec![0usize; domains.len()];
    loop {
        let assignment: Vec<Value> = at.iter().zip(&domains).map(|(&k, d)| d[k]).collect();
        if p.constraints().iter().all(|c| c.satisfied_by(&assignment)) {
            solutions.insert(assignment);
        }
        // odometer, last variable fastest
        let mut k = domains.len();
        loop {
            if k == 0 {
                return Ok(SolutionSet { solutions });
            }
            k -= 1;
            at[k] += 1;
            if at[k] < domains[k].len() {
                break;
            }
            at[k] = 0;
        }
    }
}

/// Applies `functions` cyclically, in list order, until one whole cycle
/// leaves the state unchanged.
pub fn roundrobin_fixpoint<T, F>(
    functions: &[F],
    bottoms: ProductElement<T>,
    step_cap: usize,
) -> Result<ProductElement<T>, OracleError>
where
    T: Ord + Clone,
    F: SchemeFn<T>,
{
    let mut d = bottoms.into_components();
    let mut steps = 0;
    loop {
        let mut changed = false;
        for f in functions {
            steps += 1;
            if steps > step_cap {
                return Err(OracleError::StepCap(step_cap));
            }
            let indices = f.scheme().indices();
            let input: Vec<ValueSet<T>> = indices.iter().map(|&i| d[i].clone()).collect();
            for (out, &i) in f.apply(&input).into_iter().zip(indices) {
                if out != d[i] {
                    d[i] = out;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(ProductElement::new(d));
        }
    }
}

/// `π_coord` by enumeration of `X_1 × … × X_k`.
#[derive(Debug, Clone)]
pub struct NaiveProjection {
    constraint: Constraint,
    coord: usize,
}

impl NaiveProjection {
    pub fn new(constraint: Constraint, coord: usize) -> Self {
        NaiveProjection { constraint, coord }
    }
}

fn product(sets: &[ValueSet<Value>]) -> Vec<Vec<Value>> {
    sets.iter().fold(vec![Vec::new()], |acc, s| {
        acc.into_iter()
            .flat_map(|t| {
                s.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect()
    })
}

impl SchemeFn<Value> for NaiveProjection {
    fn scheme(&self) -> &Scheme {
        self.constraint.scheme()
    }

    fn apply(&self, input: &[ValueSet<Value>]) -> Vec<ValueSet<Value>> {
        let mut out = input.to_vec();
        out[self.coord] = product(input)
            .into_iter()
            .filter(|t| self.constraint.tuples().contains(t))
            .map(|t| t[self.coord])
            .collect();
        out
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn label(&self) -> String {
        format!("naive-pi{}({})", self.coord + 1, self.constraint.name())
    }
}

/// The path function of `x < y < z` that tightens `updated`, by witness
/// enumeration over the third variable's domain.
#[derive(Debug, Clone)]
pub struct NaivePath {
    scheme: Scheme,
    /// 0 = `(x,y)` through `z`, 1 = `(x,z)` through `y`, 2 = `(y,z)` through `x`.
    updated: usize,
    witnesses: ValueSet<Value>,
}

impl NaivePath {
    pub fn new(p: &NormalizedCsp, [x, y, z]: [usize; 3], updated: usize) -> Self {
        assert!(x < y && y < z && updated < 3);
        let scheme = Scheme::new(vec![p.pair_index(x, y), p.pair_index(x, z), p.pair_index(y, z)])
            .expect("increasing");
        let through = [z, y, x][updated];
        NaivePath {
            scheme,
            updated,
            witnesses: p.domains()[through].clone(),
        }
    }
}

impl SchemeFn<(Value, Value)> for NaivePath {
    fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    fn apply(&self, input: &[ValueSet<(Value, Value)>]) -> Vec<ValueSet<(Value, Value)>> {
        let (xy, xz, yz) = (&input[0], &input[1], &input[2]);
        let w = &self.witnesses;
        let mut out = input.to_vec();
        out[self.updated] = match self.updated {
            0 => xy
                .iter()
                .filter(|&&(a, b)| w.iter().any(|&c| xz.contains(&(a, c)) && yz.contains(&(b, c))))
                .copied()
                .collect(),
            1 => xz
                .iter()
                .filter(|&&(a, c)| w.iter().any(|&b| xy.contains(&(a, b)) && yz.contains(&(b, c))))
                .copied()
                .collect(),
            _ => yz
                .iter()
                .filter(|&&(b, c)| w.iter().any(|&a| xy.contains(&(a, b)) && xz.contains(&(a, c))))
                .copied()
                .collect(),
        };
        out
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn label(&self) -> String {
        format!("naive-path{:?}/{}", self.scheme.indices(), self.updated)
    }
}

pub fn naive_projections(p: &Csp) -> Vec<NaiveProjection> {
    p.constraints()
        .iter()
        .flat_map(|c| (0..c.arity()).map(move |k| NaiveProjection::new(c.clone(), k)))
        .collect()
}

fn triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |x| (x + 1..n).flat_map(move |y| (y + 1..n).map(move |z| [x, y, z])))
}

pub fn naive_path_functions(p: &NormalizedCsp) -> Vec<NaivePath> {
    triples(p.len())
        .flat_map(|t| (0..3).map(move |u| (t, u)))
        .map(|(t, u)| NaivePath::new(p, t, u))
        .collect()
}

/// `π_1` of the binary constraints of `P≺` (which revise the earlier
/// variable), in any order.
fn naive_dir_projections(reordered: &Csp) -> Vec<NaiveProjection> {
    reordered
        .constraints()
        .iter()
        .filter(|c| c.is_binary())
        .map(|c| NaiveProjection::new(c.clone(), 0))
        .collect()
}

/// `f^z_{x,y}` for every `x < y < z` of `P≺`.
fn naive_dir_path_functions(reordered: &NormalizedCsp) -> Vec<NaivePath> {
    triples(reordered.len()).map(|t| NaivePath::new(reordered, t, 0)).collect()
}

fn holds_fixed<T: Ord + Clone, F: SchemeFn<T>>(functions: &[F], d: &[ValueSet<T>]) -> bool {
    functions.iter().all(|f| {
        let indices = f.scheme().indices();
        let input: Vec<ValueSet<T>> = indices.iter().map(|&i| d[i].clone()).collect();
        f.apply(&input) == input
    })
}

/// The hyper-arc consistent closure.
pub fn arc_closure(p: &Csp) -> Result<Csp, OracleError> {
    let d = roundrobin_fixpoint(&naive_projections(p), p.bottoms(), DEFAULT_STEP_CAP)?;
    Ok(p.with_domains(d.into_components()))
}

/// The path consistent closure.
pub fn path_closure(p: &NormalizedCsp) -> Result<NormalizedCsp, OracleError> {
    let d = roundrobin_fixpoint(&naive_path_functions(p), p.bottoms(), DEFAULT_STEP_CAP)?;
    Ok(p.from_element(d))
}

/// The directionally arc consistent closure w.r.t. `order`, variables in
/// the input order.
pub fn dir_arc_closure(p: &Csp, order: &VariableOrder) -> Result<Csp, OracleError> {
    let r = reorder(p, order)?;
    let d = roundrobin_fixpoint(&naive_dir_projections(&r), r.bottoms(), DEFAULT_STEP_CAP)?;
    let d = d.into_components();
    Ok(p.with_domains((0..p.len()).map(|v| d[order.rank(v)].clone()).collect()))
}

/// The directionally path consistent closure w.r.t. `order`, relations in
/// the input order.
pub fn dir_path_closure(p: &NormalizedCsp, order: &VariableOrder) -> Result<NormalizedCsp, OracleError> {
    let r = p.reorder(order)?;
    let d = roundrobin_fixpoint(&naive_dir_path_functions(&r), r.bottoms(), DEFAULT_STEP_CAP)?;
    Ok(r.from_element(d).reorder(&order.inverse())?)
}

/// Every projection of every constraint fixes the domains.
pub fn is_hyper_arc_consistent(p: &Csp) -> bool {
    holds_fixed(&naive_projections(p), p.domains())
}

/// Every path function fixes the relations.
pub fn is_path_consistent(p: &NormalizedCsp) -> bool {
    let d: Vec<ValueSet<(Value, Value)>> = p.relations().iter().map(|r| r.pairs().clone()).collect();
    holds_fixed(&naive_path_functions(p), &d)
}

pub fn is_dir_arc_consistent(p: &Csp, order: &VariableOrder) -> bool {
    match reorder(p, order) {
        Ok(r) => holds_fixed(&naive_dir_projections(&r), r.domains()),
        Err(_) => false,
    }
}

pub fn is_dir_path_consistent(p: &NormalizedCsp, order: &VariableOrder) -> bool {
    match p.reorder(order) {
        Ok(r) => {
            let d: Vec<ValueSet<(Value, Value)>> =
                r.relations().iter().map(|rel| rel.pairs().clone()).collect();
            holds_fixed(&naive_dir_path_functions(&r), &d)
        }
        Err(_) => false,
    }
}

/// Solutions of a normalized problem, via its plain form.
pub fn enumerate_normalized(p: &NormalizedCsp, cap: u128) -> Result<SolutionSet, OracleError> {
    enumerate_solutions(&p.to_csp(), cap)
}

/// Pair relations as plain sets, for comparisons.
pub fn relation_sets(p: &NormalizedCsp) -> Vec<BTreeSet<(Value, Value)>> {
    p.relations().iter().map(BinaryRelation::pairs).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::gen::{random_csp, CspParams};
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn enumerate_e1() {
        let s = enumerate_solutions(&examples::e1(), DEFAULT_ENUMERATION_CAP).unwrap();
        let got: Vec<_> = s.iter().cloned().collect();
        assert_eq!(got, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn enumerate_trivial_cases() {
        let mut p = Csp::new();
        p.add_variable("x", [1, 2]).unwrap();
        p.add_variable("y", [1, 2, 3]).unwrap();
        assert_eq!(enumerate_solutions(&p, 100).unwrap().len(), 6);
        p.add_constraint("none", &["y"], []).unwrap();
        assert!(enumerate_solutions(&p, 100).unwrap().is_empty());
        assert!(matches!(
            enumerate_solutions(&p, 5),
            Err(OracleError::CapExceeded { size: 6, cap: 5 })
        ));
        assert_eq!(enumerate_solutions(&Csp::new(), 1).unwrap().len(), 1);
    }

    #[test]
    fn roundrobin_examples() {
        let e1 = examples::e1();
        let d = roundrobin_fixpoint(&naive_projections(&e1), e1.bottoms(), 100).unwrap();
        let want: Vec<ValueSet<Value>> = vec![[1, 2].into(), [2, 3].into()];
        assert_eq!(d.components(), want.as_slice());

        let none: Vec<NaiveProjection> = Vec::new();
        assert_eq!(roundrobin_fixpoint(&none, e1.bottoms(), 1).unwrap(), e1.bottoms());
        assert!(matches!(
            roundrobin_fixpoint(&naive_projections(&e1), e1.bottoms(), 1),
            Err(OracleError::StepCap(1))
        ));
    }

    #[test]
    fn predicates() {
        let e1 = examples::e1();
        assert!(!is_hyper_arc_consistent(&e1));
        assert!(is_hyper_arc_consistent(&arc_closure(&e1).unwrap()));

        let mut empty = Csp::new();
        empty.add_variable("x", []).unwrap();
        empty.add_variable("y", []).unwrap();
        empty.add_constraint("c", &["x", "y"], []).unwrap();
        assert!(is_hyper_arc_consistent(&empty));

        let e4 = examples::e4();
        assert!(is_hyper_arc_consistent(&examples::e4_csp()));
        assert!(!is_path_consistent(&e4));
        let closed = path_closure(&e4).unwrap();
        assert!(closed.relations().iter().all(BinaryRelation::is_empty));
        assert!(is_path_consistent(&closed));

        let id = VariableOrder::identity(3);
        let e3 = examples::e3();
        let dir = dir_arc_closure(&e3, &id).unwrap();
        assert!(is_dir_arc_consistent(&dir, &id));
        assert!(!is_hyper_arc_consistent(&dir));

        let dp = dir_path_closure(&e4, &id).unwrap();
        assert!(dp.relation(0, 1).is_empty());
        assert!(is_dir_path_consistent(&dp, &id));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closure_preserves_solutions_and_is_idempotent(seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let p = random_csp(&mut rng, &CspParams::default().with_ternary(0.3));
            let closed = arc_closure(&p).unwrap();
            prop_assert_eq!(
                enumerate_solutions(&p, DEFAULT_ENUMERATION_CAP).unwrap(),
                enumerate_solutions(&closed, DEFAULT_ENUMERATION_CAP).unwrap()
            );
            prop_assert_eq!(arc_closure(&closed).unwrap(), closed.clone());
        }
    }
}
