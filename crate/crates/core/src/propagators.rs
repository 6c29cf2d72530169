//! Concrete propagation functions and their commutation sets.
//!
//! * [`ProjectionFn`] is the projection `π_i` of a constraint: it shrinks
//!   the domain of the constraint's `i`-th variable to the values that still
//!   have a supporting tuple.
//! * [`PathFn`] is one of the three path-consistency functions of a triple
//!   `x < y < z`; it tightens one pair relation through the third variable.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::csp::{pair_index, BinaryRelation, Constraint, Csp, CspError, NormalizedCsp, Tuple, Value};
use crate::engine::{CommMap, FnId};
use crate::order::{Scheme, SchemeFn, ValueSet};

/// Supported values of coordinate `coord`: `Π_coord(C ∩ (X_1 × … × X_k))`.
///
/// Filters the tuples of `C` rather than building the product.
fn supported(tuples: &BTreeSet<Tuple>, coord: usize, x: &[ValueSet<Value>]) -> ValueSet<Value> {
    tuples
        .iter()
        .filter(|t| t.iter().zip(x).all(|(v, xs)| xs.contains(v)))
        .map(|t| t[coord])
        .collect()
}

/// `π_coord` of `c` applied to `x`.
pub fn project(
    c: &Constraint,
    coord: usize,
    x: &[ValueSet<Value>],
) -> Result<Vec<ValueSet<Value>>, CspError> {
    if x.len() != c.arity() || coord >= c.arity() {
        return Err(CspError::Unsupported(format!(
            "projection {} of `{}` on {} sets",
            coord + 1,
            c.name(),
            x.len()
        )));
    }
    let mut out = x.to_vec();
    out[coord] = supported(c.tuples(), coord, x);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// Binary projection: keeps the values on `side` that have a witness on
/// the other side.
pub fn project_binary(
    c: &BinaryRelation,
    side: Side,
    x: &ValueSet<Value>,
    y: &ValueSet<Value>,
) -> (ValueSet<Value>, ValueSet<Value>) {
    match side {
        Side::First => {
            let xs = x
                .iter()
                .copied()
                .filter(|&a| y.iter().any(|&b| c.contains(a, b)))
                .collect();
            (xs, y.clone())
        }
        Side::Second => {
            let ys = y
                .iter()
                .copied()
                .filter(|&b| x.iter().any(|&a| c.contains(a, b)))
                .collect();
            (x.clone(), ys)
        }
    }
}

/// `π_i` of one constraint of a [`Csp`].
#[derive(Debug, Clone)]
pub struct ProjectionFn {
    label: String,
    constraint: usize,
    coord: usize,
    scheme: Scheme,
    tuples: Arc<BTreeSet<Tuple>>,
}

impl ProjectionFn {
    pub fn new(p: &Csp, constraint: usize, coord: usize) -> Self {
        let c = &p.constraints()[constraint];
        assert!(coord < c.arity(), "coordinate within the constraint");
        ProjectionFn {
            label: format!("pi{}({})", coord + 1, c.name()),
            constraint,
            coord,
            scheme: c.scheme().clone(),
            tuples: Arc::new(c.tuples().clone()),
        }
    }

    pub fn constraint(&self) -> usize {
        self.constraint
    }

    /// 0-based position inside the constraint's scheme.
    pub fn coord(&self) -> usize {
        self.coord
    }

    /// The variable whose domain this function shrinks.
    pub fn variable(&self) -> usize {
        self.scheme.indices()[self.coord]
    }

    /// For binary constraints, the other variable.
    pub fn partner(&self) -> Option<usize> {
        let s = self.scheme.indices();
        (s.len() == 2).then(|| s[1 - self.coord])
    }
}

impl SchemeFn<Value> for ProjectionFn {
    fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    fn apply(&self, input: &[ValueSet<Value>]) -> Vec<ValueSet<Value>> {
        let mut out = input.to_vec();
        out[self.coord] = supported(&self.tuples, self.coord, input);
        out
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Every `π_i` of every constraint, constraint by constraint.
pub fn projections(p: &Csp) -> Vec<ProjectionFn> {
    p.constraints()
        .iter()
        .enumerate()
        .flat_map(|(k, c)| (0..c.arity()).map(move |i| (k, i)))
        .map(|(k, i)| ProjectionFn::new(p, k, i))
        .collect()
}

/// `Comm(π_i)` for hyper-arc consistency: the other projections of the same
/// constraint, plus every projection (of any constraint) that shrinks the
/// same variable.
pub fn comm_arc(index: FnId, all: &[ProjectionFn]) -> BTreeSet<FnId> {
    let pi = &all[index];
    all.iter()
        .enumerate()
        .filter(|&(j, f)| {
            j != index && (f.constraint == pi.constraint || f.variable() == pi.variable())
        })
        .map(|(j, _)| j)
        .collect()
}

pub fn comm_arc_map(all: &[ProjectionFn]) -> CommMap {
    CommMap::new((0..all.len()).map(|i| comm_arc(i, all)).collect())
}

/// `Comm` for the arc-consistency view, where each binary constraint `C` on
/// `x,y` contributes `π_1` of `C` and of `Cᵀ`.
///
/// For the arc shrinking `x` against `y`: the arcs shrinking `x` against
/// any `z ≠ y`, plus (when at most one constraint sits on every pair) the
/// reverse arc of the same constraint.
pub fn comm_ac3(index: FnId, all: &[ProjectionFn], at_most_one_per_pair: bool) -> BTreeSet<FnId> {
    let arc = &all[index];
    let (x, y) = (arc.variable(), arc.partner().expect("binary arc"));
    all.iter()
        .enumerate()
        .filter(|&(j, f)| {
            if j == index {
                return false;
            }
            let same_constraint = at_most_one_per_pair && f.constraint == arc.constraint;
            let same_target = f.variable() == x && f.partner() != Some(y);
            same_constraint || same_target
        })
        .map(|(j, _)| j)
        .collect()
}

pub fn comm_ac3_map(all: &[ProjectionFn], at_most_one_per_pair: bool) -> CommMap {
    CommMap::new(
        (0..all.len())
            .map(|i| comm_ac3(i, all, at_most_one_per_pair))
            .collect(),
    )
}

/// Which relation of the triple `x < y < z` a [`PathFn`] tightens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathTarget {
    /// `P' := P ∩ Q·Rᵀ`, i.e. `f^z_{x,y}`.
    Xy,
    /// `Q' := Q ∩ P·R`, i.e. `f^y_{x,z}`.
    Xz,
    /// `R' := R ∩ Pᵀ·Q`, i.e. `f^x_{y,z}`.
    Yz,
}

impl PathTarget {
    pub const ALL: [PathTarget; 3] = [PathTarget::Xy, PathTarget::Xz, PathTarget::Yz];
}

/// Applies one path function to `(P, Q, R) = (C_{x,y}, C_{x,z}, C_{y,z})`.
pub fn path_apply(
    target: PathTarget,
    p: &BinaryRelation,
    q: &BinaryRelation,
    r: &BinaryRelation,
) -> (BinaryRelation, BinaryRelation, BinaryRelation) {
    match target {
        PathTarget::Xy => (p.intersect(&q.compose(&r.transpose())), q.clone(), r.clone()),
        PathTarget::Xz => (p.clone(), q.intersect(&p.compose(r)), r.clone()),
        PathTarget::Yz => (p.clone(), q.clone(), r.intersect(&p.transpose().compose(q))),
    }
}

/// A path-consistency function of a normalized problem, acting on the
/// product of its pair relations.
#[derive(Debug, Clone)]
pub struct PathFn {
    label: String,
    triple: [usize; 3],
    target: PathTarget,
    scheme: Scheme,
}

impl PathFn {
    /// `triple` must be strictly increasing.
    pub fn new(p: &NormalizedCsp, triple: [usize; 3], target: PathTarget) -> Self {
        let [x, y, z] = triple;
        assert!(x < y && y < z && z < p.len(), "increasing triple");
        let n = p.len();
        let scheme = Scheme::new(vec![pair_index(x, y, n), pair_index(x, z, n), pair_index(y, z, n)])
            .expect("lexicographic pair order");
        let v = p.variables();
        let (sup, a, b) = match target {
            PathTarget::Xy => (z, x, y),
            PathTarget::Xz => (y, x, z),
            PathTarget::Yz => (x, y, z),
        };
        PathFn {
            label: format!("f[{}]({},{})", v[sup], v[a], v[b]),
            triple,
            target,
            scheme,
        }
    }

    pub fn triple(&self) -> [usize; 3] {
        self.triple
    }

    pub fn target(&self) -> PathTarget {
        self.target
    }

    /// The pair whose relation is tightened, `(a, b)` with `a < b`.
    pub fn updated_pair(&self) -> (usize, usize) {
        let [x, y, z] = self.triple;
        match self.target {
            PathTarget::Xy => (x, y),
            PathTarget::Xz => (x, z),
            PathTarget::Yz => (y, z),
        }
    }

    /// The superscript variable: the one the pair is checked through.
    pub fn through(&self) -> usize {
        let [x, y, z] = self.triple;
        match self.target {
            PathTarget::Xy => z,
            PathTarget::Xz => y,
            PathTarget::Yz => x,
        }
    }
}

impl SchemeFn<(Value, Value)> for PathFn {
    fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    fn apply(&self, input: &[ValueSet<(Value, Value)>]) -> Vec<ValueSet<(Value, Value)>> {
        let [p, q, r] = [0, 1, 2].map(|k| BinaryRelation::new(input[k].clone()));
        let (p, q, r) = path_apply(self.target, &p, &q, &r);
        vec![p.into_pairs(), q.into_pairs(), r.into_pairs()]
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// All three functions of every increasing triple, triples in lexicographic
/// order.
pub fn path_functions(p: &NormalizedCsp) -> Vec<PathFn> {
    let n = p.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                for target in PathTarget::ALL {
                    out.push(PathFn::new(p, [x, y, z], target));
                }
            }
        }
    }
    out
}

/// `Comm(f^z_{x,y}) = {f^u_{x,y} | u ∉ {x,y,z}}`: the functions tightening
/// the same pair through another variable. Has `m − 3` members when `all`
/// holds every path function of an `m`-variable problem.
pub fn comm_path(index: FnId, all: &[PathFn]) -> BTreeSet<FnId> {
    let f = &all[index];
    all.iter()
        .enumerate()
        .filter(|&(j, g)| j != index && g.updated_pair() == f.updated_pair() && g.through() != f.through())
        .map(|(j, _)| j)
        .collect()
}

pub fn comm_path_map(all: &[PathFn]) -> CommMap {
    CommMap::new((0..all.len()).map(|i| comm_path(i, all)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::normalize;
    use crate::engine::FunctionSet;
    use crate::order::{apply_extended, ProductElement};
    use rand::SeedableRng;

    fn set(v: &[Value]) -> ValueSet<Value> {
        v.iter().copied().collect()
    }

    fn rel(p: &[(Value, Value)]) -> BinaryRelation {
        p.iter().copied().collect()
    }

    fn e1() -> Csp {
        let mut p = Csp::new();
        p.add_variable("x", [1, 2, 3]).unwrap();
        p.add_variable("y", [1, 2, 3]).unwrap();
        p.add_constraint("lt", &["x", "y"], [vec![1, 2], vec![1, 3], vec![2, 3]])
            .unwrap();
        p
    }

    #[test]
    fn project_examples() {
        let p = e1();
        let c = &p.constraints()[0];
        let out = project(c, 0, &[set(&[1, 2, 3]), set(&[2, 3])]).unwrap();
        assert_eq!(out, vec![set(&[1, 2]), set(&[2, 3])]);

        let mut q = Csp::new();
        q.add_variable("x", [1, 2]).unwrap();
        q.add_variable("y", [1, 2]).unwrap();
        q.add_constraint("all", &["x", "y"], [vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]])
            .unwrap();
        q.add_constraint("none", &["x", "y"], []).unwrap();
        let x = [set(&[1, 2]), set(&[1, 2])];
        assert_eq!(project(&q.constraints()[0], 1, &x).unwrap(), x.to_vec());
        assert_eq!(project(&q.constraints()[1], 1, &x).unwrap()[1], set(&[]));

        assert!(project(c, 0, &[set(&[1])]).is_err());
    }

    #[test]
    fn project_binary_examples() {
        let c = rel(&[(1, 2), (2, 3)]);
        let (x, y) = (set(&[1, 2, 3]), set(&[2, 3]));
        assert_eq!(project_binary(&c, Side::First, &x, &y), (set(&[1, 2]), y.clone()));
        assert_eq!(project_binary(&c, Side::Second, &x, &y), (x.clone(), set(&[2, 3])));
        assert_eq!(project_binary(&c, Side::First, &x, &set(&[])).0, set(&[]));
    }

    #[test]
    fn path_apply_examples() {
        let swap = rel(&[(0, 1), (1, 0)]);
        let (p, q, r) = path_apply(PathTarget::Xz, &swap, &swap, &swap);
        assert!(q.is_empty());
        assert_eq!((p, r), (swap.clone(), swap.clone()));

        let d = set(&[0, 1]);
        let full = BinaryRelation::universal(&d, &d);
        let (p, q, r) = path_apply(PathTarget::Xy, &swap, &full, &full);
        assert_eq!((p, q, r), (swap.clone(), full.clone(), full.clone()));
    }

    #[test]
    fn comm_arc_examples() {
        let mut p = Csp::new();
        for v in ["x", "y", "z"] {
            p.add_variable(v, [0, 1]).unwrap();
        }
        p.add_constraint("c1", &["x", "y"], [vec![0, 1]]).unwrap();
        p.add_constraint("c2", &["z", "x"], [vec![1, 0]]).unwrap();
        // c2 is stored on (x, z): x is its first coordinate
        let all = projections(&p);
        let labels: Vec<String> = all.iter().map(|f| f.label()).collect();
        assert_eq!(labels, ["pi1(c1)", "pi2(c1)", "pi1(c2)", "pi2(c2)"]);
        assert_eq!(comm_arc(0, &all), [1, 2].into());
        assert_eq!(comm_arc(1, &all), [0].into());
    }

    #[test]
    fn comm_ac3_variants() {
        let mut p = Csp::new();
        p.add_variable("x", [0, 1]).unwrap();
        p.add_variable("y", [0, 1]).unwrap();
        p.add_variable("z", [0, 1]).unwrap();
        p.add_constraint("a", &["x", "y"], [vec![0, 1]]).unwrap();
        p.add_constraint("b", &["x", "z"], [vec![0, 1]]).unwrap();
        let all = projections(&p);
        assert_eq!(comm_ac3(0, &all, true), [1, 2].into());
        assert_eq!(comm_ac3(0, &all, false), [2].into());
        // under the single-constraint assumption both views agree
        for i in 0..all.len() {
            assert_eq!(comm_ac3(i, &all, true), comm_arc(i, &all));
        }
    }

    fn four_vars() -> NormalizedCsp {
        let mut p = Csp::new();
        for v in ["w", "x", "y", "z"] {
            p.add_variable(v, [0, 1]).unwrap();
        }
        normalize(&p).unwrap()
    }

    #[test]
    fn comm_path_cardinality() {
        for m in 3..=6 {
            let mut p = Csp::new();
            for i in 0..m {
                p.add_variable(format!("v{i}"), [0]).unwrap();
            }
            let n = normalize(&p).unwrap();
            let all = path_functions(&n);
            for i in 0..all.len() {
                assert_eq!(comm_path(i, &all).len(), m - 3);
            }
        }
        let n = four_vars();
        let all = path_functions(&n);
        let f = all.iter().position(|f| f.label() == "f[y](w,x)").unwrap();
        let comm: Vec<String> = comm_path(f, &all).iter().map(|&j| all[j].label()).collect();
        assert_eq!(comm, ["f[z](w,x)"]);
    }

    #[test]
    fn listed_pairs_commute() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..30 {
            let p = crate::gen::random_csp(&mut rng, &crate::gen::CspParams::default().with_ternary(0.5));
            let all = projections(&p);
            let bottoms = p.bottoms();
            for (g, f) in comm_arc_map(&all).pairs() {
                for _ in 0..5 {
                    let d = crate::engine::random_state(&mut rng, &bottoms);
                    let gf = apply_extended(&all[g], &apply_extended(&all[f], &d).unwrap()).unwrap();
                    let fg = apply_extended(&all[f], &apply_extended(&all[g], &d).unwrap()).unwrap();
                    assert_eq!(gf, fg, "{} / {}", all[g].label(), all[f].label());
                }
            }
        }
    }

    #[test]
    fn path_functions_are_inflationary_monotonic_idempotent() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let n = crate::gen::random_normalized(&mut rng, &crate::gen::CspParams::default());
            let fns = path_functions(&n);
            let boxed: Vec<Box<dyn SchemeFn<(Value, Value)>>> =
                fns.iter().cloned().map(|f| Box::new(f) as _).collect();
            let set = FunctionSet::new(n.relations().len(), boxed).unwrap();
            let bottoms = n.bottoms();
            for id in 0..set.len() {
                for _ in 0..5 {
                    let big = crate::engine::random_state(&mut rng, &bottoms);
                    let small = crate::engine::random_state(&mut rng, &big);
                    let fb = set.apply_extended(id, &big);
                    let fs = set.apply_extended(id, &small);
                    assert!(crate::order::leq(&big, &fb).unwrap());
                    assert!(crate::order::leq(&fb, &fs).unwrap());
                    assert_eq!(set.apply_extended(id, &fb), fb);
                }
            }
        }
    }

    #[test]
    fn projections_are_inflationary_monotonic_idempotent() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(6);
        for _ in 0..40 {
            let p = crate::gen::random_csp(&mut rng, &crate::gen::CspParams::default().with_ternary(0.5));
            let bottoms = p.bottoms();
            for f in projections(&p) {
                for _ in 0..5 {
                    let big = crate::engine::random_state(&mut rng, &bottoms);
                    let small = crate::engine::random_state(&mut rng, &big);
                    let fb = apply_extended(&f, &big).unwrap();
                    let fs = apply_extended(&f, &small).unwrap();
                    assert!(crate::order::leq(&big, &fb).unwrap());
                    assert!(crate::order::leq(&fb, &fs).unwrap());
                    assert_eq!(apply_extended(&f, &fb).unwrap(), fb);
                }
            }
        }
        let _ = ProductElement::<Value>::new(vec![]);
    }
}
