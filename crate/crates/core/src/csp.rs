//! CSP data model and the binary-relation algebra.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::order::{ProductElement, Scheme, ValueSet};

pub type Value = i64;
pub type Tuple = Vec<Value>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CspError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("constraint `{constraint}`: variable `{variable}` repeated in scheme")]
    RepeatedInScheme { constraint: String, variable: String },
    #[error("constraint `{0}` has an empty scheme")]
    EmptyScheme(String),
    #[error("constraint `{constraint}`: tuple of arity {got}, scheme has {expected} variables")]
    TupleArity {
        constraint: String,
        expected: usize,
        got: usize,
    },
    #[error("constraint `{constraint}`: value {value} is not in the domain of `{variable}`")]
    ValueOutsideDomain {
        constraint: String,
        variable: String,
        value: Value,
    },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("not a permutation of the variables: {0}")]
    NotAPermutation(String),
}

/// Set of value pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryRelation {
    pairs: BTreeSet<(Value, Value)>,
}

impl BinaryRelation {
    pub fn new(pairs: BTreeSet<(Value, Value)>) -> Self {
        BinaryRelation { pairs }
    }

    /// `xs × ys`.
    pub fn universal(xs: &ValueSet<Value>, ys: &ValueSet<Value>) -> Self {
        xs.iter()
            .flat_map(|&a| ys.iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn pairs(&self) -> &BTreeSet<(Value, Value)> {
        &self.pairs
    }

    pub fn into_pairs(self) -> BTreeSet<(Value, Value)> {
        self.pairs
    }

    pub fn contains(&self, a: Value, b: Value) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Value, Value)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn transpose(&self) -> Self {
        self.iter().map(|(a, b)| (b, a)).collect()
    }

    /// `{(a,b) | ∃c. (a,c) ∈ self ∧ (c,b) ∈ other}`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut successors: BTreeMap<Value, Vec<Value>> = BTreeMap::new();
        for (c, b) in other.iter() {
            successors.entry(c).or_default().push(b);
        }
        let mut out = BTreeSet::new();
        for (a, c) in self.iter() {
            if let Some(bs) = successors.get(&c) {
                out.extend(bs.iter().map(|&b| (a, b)));
            }
        }
        BinaryRelation { pairs: out }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        BinaryRelation {
            pairs: self.pairs.intersection(&other.pairs).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.pairs.is_subset(&other.pairs)
    }
}

impl FromIterator<(Value, Value)> for BinaryRelation {
    fn from_iter<I: IntoIterator<Item = (Value, Value)>>(iter: I) -> Self {
        BinaryRelation {
            pairs: iter.into_iter().collect(),
        }
    }
}

pub fn transpose(r: &BinaryRelation) -> BinaryRelation {
    r.transpose()
}

pub fn compose(r: &BinaryRelation, s: &BinaryRelation) -> BinaryRelation {
    r.compose(s)
}

/// A constraint: a set of tuples over a scheme of variable indices.
///
/// The scheme is always stored in increasing variable order; constructors
/// permute tuple columns to match.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    name: String,
    scheme: Scheme,
    tuples: BTreeSet<Tuple>,
}

impl Constraint {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn tuples(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn arity(&self) -> usize {
        self.scheme.len()
    }

    pub fn is_binary(&self) -> bool {
        self.arity() == 2
    }

    /// The tuples as a relation, for binary constraints.
    pub fn relation(&self) -> Option<BinaryRelation> {
        self.is_binary()
            .then(|| self.tuples.iter().map(|t| (t[0], t[1])).collect())
    }

    /// The variable pair of a binary constraint.
    pub fn pair(&self) -> Option<(usize, usize)> {
        let s = self.scheme.indices();
        self.is_binary().then(|| (s[0], s[1]))
    }

    pub fn satisfied_by(&self, assignment: &[Value]) -> bool {
        let projected: Tuple = self.scheme.indices().iter().map(|&i| assignment[i]).collect();
        self.tuples.contains(&projected)
    }
}

/// Variables with finite domains plus constraints over them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Csp {
    variables: Vec<String>,
    domains: Vec<ValueSet<Value>>,
    constraints: Vec<Constraint>,
}

impl Csp {
    pub fn new() -> Self {
        Csp::default()
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        domain: impl IntoIterator<Item = Value>,
    ) -> Result<usize, CspError> {
        let name = name.into();
        if self.variable_index(&name).is_some() {
            return Err(CspError::DuplicateVariable(name));
        }
        self.variables.push(name);
        self.domains.push(domain.into_iter().collect());
        Ok(self.variables.len() - 1)
    }

    /// Adds a constraint on the named variables, in any order.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        variables: &[&str],
        tuples: impl IntoIterator<Item = Tuple>,
    ) -> Result<(), CspError> {
        let indices = variables
            .iter()
            .map(|v| {
                self.variable_index(v)
                    .ok_or_else(|| CspError::UnknownVariable(v.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.add_constraint_on(name, &indices, tuples)
    }

    /// Adds a constraint on variables given by index, in any order.
    ///
    /// Tuples must lie inside the current domains.
    pub fn add_constraint_on(
        &mut self,
        name: impl Into<String>,
        variables: &[usize],
        tuples: impl IntoIterator<Item = Tuple>,
    ) -> Result<(), CspError> {
        let name = name.into();
        if variables.is_empty() {
            return Err(CspError::EmptyScheme(name));
        }
        for &v in variables {
            if v >= self.variables.len() {
                return Err(CspError::UnknownVariable(format!("#{}", v + 1)));
            }
        }
        let mut order: Vec<usize> = (0..variables.len()).collect();
        order.sort_by_key(|&k| variables[k]);
        if let Some(w) = order.windows(2).find(|w| variables[w[0]] == variables[w[1]]) {
            return Err(CspError::RepeatedInScheme {
                constraint: name,
                variable: self.variables[variables[w[0]]].clone(),
            });
        }

        let mut canonical = BTreeSet::new();
        for tuple in tuples {
            if tuple.len() != variables.len() {
                return Err(CspError::TupleArity {
                    constraint: name,
                    expected: variables.len(),
                    got: tuple.len(),
                });
            }
            for (&v, &value) in variables.iter().zip(&tuple) {
                if !self.domains[v].contains(&value) {
                    return Err(CspError::ValueOutsideDomain {
                        constraint: name,
                        variable: self.variables[v].clone(),
                        value,
                    });
                }
            }
            canonical.insert(order.iter().map(|&k| tuple[k]).collect::<Tuple>());
        }
        let scheme = Scheme::new(order.iter().map(|&k| variables[k]).collect())
            .expect("sorted, distinct and non-empty");
        self.constraints.push(Constraint {
            name,
            scheme,
            tuples: canonical,
        });
        Ok(())
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn domains(&self) -> &[ValueSet<Value>] {
        &self.domains
    }

    pub fn domain(&self, i: usize) -> &ValueSet<Value> {
        &self.domains[i]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// Domains as the least element of the domain reduction ordering.
    pub fn bottoms(&self) -> ProductElement<Value> {
        ProductElement::new(self.domains.clone())
    }

    pub fn is_binary(&self) -> bool {
        self.constraints.iter().all(Constraint::is_binary)
    }

    /// Whether no two constraints share the same variable pair.
    pub fn at_most_one_per_pair(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.constraints
            .iter()
            .filter_map(Constraint::pair)
            .all(|p| seen.insert(p))
    }

    /// Whether every variable pair carries exactly one constraint, and all
    /// constraints are binary.
    pub fn one_per_pair(&self) -> bool {
        let n = self.len();
        self.is_binary()
            && self.at_most_one_per_pair()
            && self.constraints.len() == n * n.saturating_sub(1) / 2
    }

    /// The same problem with the given domains, each constraint restricted
    /// to them.
    pub fn with_domains(&self, domains: Vec<ValueSet<Value>>) -> Csp {
        assert_eq!(domains.len(), self.len(), "one domain per variable");
        let constraints = self
            .constraints
            .iter()
            .map(|c| Constraint {
                name: c.name.clone(),
                scheme: c.scheme.clone(),
                tuples: c
                    .tuples
                    .iter()
                    .filter(|t| {
                        c.scheme
                            .indices()
                            .iter()
                            .zip(t.iter())
                            .all(|(&v, value)| domains[v].contains(value))
                    })
                    .cloned()
                    .collect(),
            })
            .collect();
        Csp {
            variables: self.variables.clone(),
            domains,
            constraints,
        }
    }

    pub fn has_empty_domain(&self) -> bool {
        self.domains.iter().any(BTreeSet::is_empty)
    }

    /// Number of candidate assignments, saturating.
    pub fn search_space(&self) -> u128 {
        self.domains
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }
}

/// A linear order on the variables of a problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableOrder {
    /// `sequence[k]` is the variable of rank `k`.
    sequence: Vec<usize>,
    rank: Vec<usize>,
}

impl VariableOrder {
    pub fn identity(n: usize) -> Self {
        VariableOrder {
            sequence: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn from_indices(n: usize, sequence: Vec<usize>) -> Result<Self, CspError> {
        let mut rank = vec![usize::MAX; n];
        if sequence.len() != n {
            return Err(CspError::NotAPermutation(format!(
                "{} entries for {n} variables",
                sequence.len()
            )));
        }
        for (k, &v) in sequence.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(CspError::NotAPermutation(format!(
                    "variable #{} listed twice or out of range",
                    v + 1
                )));
            }
            rank[v] = k;
        }
        Ok(VariableOrder { sequence, rank })
    }

    pub fn from_names<S: AsRef<str>>(variables: &[String], names: &[S]) -> Result<Self, CspError> {
        let sequence = names
            .iter()
            .map(|n| {
                let n = n.as_ref();
                variables
                    .iter()
                    .position(|v| v == n)
                    .ok_or_else(|| CspError::UnknownVariable(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        VariableOrder::from_indices(variables.len(), sequence)
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn rank(&self, variable: usize) -> usize {
        self.rank[variable]
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }

    pub fn inverse(&self) -> VariableOrder {
        VariableOrder {
            sequence: self.rank.clone(),
            rank: self.sequence.clone(),
        }
    }
}

/// `P≺`: the variables listed along `order`, each constraint's scheme
/// rewritten to be increasing in the new numbering.
pub fn reorder(p: &Csp, order: &VariableOrder) -> Result<Csp, CspError> {
    if order.len() != p.len() {
        return Err(CspError::NotAPermutation(format!(
            "order has {} variables, problem has {}",
            order.len(),
            p.len()
        )));
    }
    let mut out = Csp::new();
    for &v in order.sequence() {
        out.add_variable(p.variables[v].clone(), p.domains[v].iter().copied())?;
    }
    for c in &p.constraints {
        let ranks: Vec<usize> = c.scheme.indices().iter().map(|&v| order.rank(v)).collect();
        out.add_constraint_on(c.name.clone(), &ranks, c.tuples.iter().cloned())?;
    }
    Ok(out)
}

/// Index of the pair `(i, j)`, `i < j`, in lexicographic pair order.
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Binary-only problem with exactly one relation `C_{x,y}` per pair
/// `x < y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedCsp {
    variables: Vec<String>,
    domains: Vec<ValueSet<Value>>,
    /// In lexicographic pair order, see [`pair_index`].
    relations: Vec<BinaryRelation>,
}

impl NormalizedCsp {
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn domains(&self) -> &[ValueSet<Value>] {
        &self.domains
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn relations(&self) -> &[BinaryRelation] {
        &self.relations
    }

    /// All pairs `(i, j)`, `i < j`, in relation order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        pair_index(i, j, self.len())
    }

    /// `C_{i,j}` for `i < j`.
    pub fn relation(&self, i: usize, j: usize) -> &BinaryRelation {
        &self.relations[self.pair_index(i, j)]
    }

    /// The relation between `a` and `b` oriented from `a` to `b`.
    pub fn oriented(&self, a: usize, b: usize) -> BinaryRelation {
        if a < b {
            self.relation(a, b).clone()
        } else {
            self.relation(b, a).transpose()
        }
    }

    /// The same problem with new relations (lexicographic pair order).
    pub fn with_relations(&self, relations: Vec<BinaryRelation>) -> NormalizedCsp {
        assert_eq!(relations.len(), self.relations.len());
        NormalizedCsp {
            variables: self.variables.clone(),
            domains: self.domains.clone(),
            relations,
        }
    }

    /// Relations as the least element of the constraint reduction ordering.
    pub fn bottoms(&self) -> ProductElement<(Value, Value)> {
        ProductElement::new(
            self.relations
                .iter()
                .map(|r| r.pairs().clone())
                .collect(),
        )
    }

    pub fn from_element(&self, d: ProductElement<(Value, Value)>) -> NormalizedCsp {
        self.with_relations(d.into_components().into_iter().map(BinaryRelation::new).collect())
    }

    pub fn has_empty_relation(&self) -> bool {
        self.relations.iter().any(BinaryRelation::is_empty)
    }

    /// Name of the constraint on a pair when rendered as a plain CSP.
    pub fn pair_name(&self, i: usize, j: usize) -> String {
        format!("c_{}_{}", self.variables[i], self.variables[j])
    }

    pub fn to_csp(&self) -> Csp {
        let mut csp = Csp::new();
        for (v, d) in self.variables.iter().zip(&self.domains) {
            csp.add_variable(v.clone(), d.iter().copied())
                .expect("names unique");
        }
        for (i, j) in self.pairs() {
            let name = self.pair_name(i, j);
            csp.constraints.push(Constraint {
                name,
                scheme: Scheme::new(vec![i, j]).expect("i < j"),
                tuples: self.relation(i, j).iter().map(|(a, b)| vec![a, b]).collect(),
            });
        }
        csp
    }

    /// The same problem with variables listed along `order`.
    pub fn reorder(&self, order: &VariableOrder) -> Result<NormalizedCsp, CspError> {
        let n = self.len();
        if order.len() != n {
            return Err(CspError::NotAPermutation(format!(
                "order has {} variables, problem has {n}",
                order.len()
            )));
        }
        let seq = order.sequence();
        let variables = seq.iter().map(|&v| self.variables[v].clone()).collect();
        let domains = seq.iter().map(|&v| self.domains[v].clone()).collect();
        let mut relations = Vec::with_capacity(self.relations.len());
        for a in 0..n {
            for b in a + 1..n {
                relations.push(self.oriented(seq[a], seq[b]));
            }
        }
        Ok(NormalizedCsp {
            variables,
            domains,
            relations,
        })
    }
}

/// Folds all binary constraints into one relation per pair.
///
/// Several constraints on a pair are intersected (transposing those given
/// in the other direction); a pair without constraints gets `D_x × D_y`.
pub fn normalize(p: &Csp) -> Result<NormalizedCsp, CspError> {
    if let Some(c) = p.constraints.iter().find(|c| !c.is_binary()) {
        return Err(CspError::Unsupported(format!(
            "constraint `{}` has arity {}; normalization needs binary constraints",
            c.name,
            c.arity()
        )));
    }
    let n = p.len();
    let mut relations: Vec<Option<BinaryRelation>> = vec![None; n * n.saturating_sub(1) / 2];
    for c in &p.constraints {
        let (i, j) = c.pair().expect("binary");
        let r = c.relation().expect("binary");
        let slot = &mut relations[pair_index(i, j, n)];
        *slot = Some(match slot.take() {
            Some(prev) => prev.intersect(&r),
            None => r,
        });
    }
    let mut out = Vec::with_capacity(relations.len());
    for i in 0..n {
        for j in i + 1..n {
            let r = relations[pair_index(i, j, n)]
                .take()
                .unwrap_or_else(|| BinaryRelation::universal(&p.domains[i], &p.domains[j]));
            out.push(r);
        }
    }
    Ok(NormalizedCsp {
        variables: p.variables.clone(),
        domains: p.domains.clone(),
        relations: out,
    })
}

impl fmt::Display for Csp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::render_csp(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(p: &[(Value, Value)]) -> BinaryRelation {
        p.iter().copied().collect()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(transpose(&rel(&[(1, 2)])), rel(&[(2, 1)]));
        assert_eq!(transpose(&rel(&[])), rel(&[]));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose(&rel(&[(1, 2)]), &rel(&[(2, 3)])), rel(&[(1, 3)]));
        let swap = rel(&[(0, 1), (1, 0)]);
        assert_eq!(compose(&swap, &swap), rel(&[(0, 0), (1, 1)]));
        assert!(compose(&swap, &rel(&[])).is_empty());
    }

    #[test]
    fn pair_index_is_dense() {
        for n in 0..7 {
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    assert_eq!(pair_index(i, j, n), k);
                    k += 1;
                }
            }
        }
    }

    fn xy(domain: &[Value]) -> Csp {
        let mut p = Csp::new();
        p.add_variable("x", domain.iter().copied()).unwrap();
        p.add_variable("y", domain.iter().copied()).unwrap();
        p
    }

    #[test]
    fn constraint_validation() {
        let mut p = xy(&[1, 2]);
        assert_eq!(
            p.add_constraint("c", &["x", "x"], [vec![1, 1]]),
            Err(CspError::RepeatedInScheme {
                constraint: "c".into(),
                variable: "x".into()
            })
        );
        assert!(matches!(
            p.add_constraint("c", &["x", "z"], []),
            Err(CspError::UnknownVariable(_))
        ));
        assert!(matches!(
            p.add_constraint("c", &["x", "y"], [vec![1]]),
            Err(CspError::TupleArity { .. })
        ));
        assert!(matches!(
            p.add_constraint("c", &["x", "y"], [vec![1, 7]]),
            Err(CspError::ValueOutsideDomain { value: 7, .. })
        ));
        assert_eq!(
            p.add_variable("x", [1]),
            Err(CspError::DuplicateVariable("x".into()))
        );
    }

    #[test]
    fn schemes_are_canonicalized() {
        let mut p = xy(&[1, 2, 3]);
        p.add_constraint("c", &["y", "x"], [vec![2, 1]]).unwrap();
        let c = &p.constraints()[0];
        assert_eq!(c.scheme().indices(), &[0, 1]);
        assert_eq!(c.relation().unwrap(), rel(&[(1, 2)]));
    }

    #[test]
    fn normalize_examples() {
        let p = xy(&[0, 1]);
        let n = normalize(&p).unwrap();
        assert_eq!(n.relation(0, 1), &rel(&[(0, 0), (0, 1), (1, 0), (1, 1)]));

        let mut p = xy(&[1, 2, 3]);
        p.add_constraint("a", &["x", "y"], [vec![1, 2], vec![2, 2]]).unwrap();
        p.add_constraint("b", &["x", "y"], [vec![2, 2], vec![2, 3]]).unwrap();
        assert_eq!(normalize(&p).unwrap().relation(0, 1), &rel(&[(2, 2)]));

        let mut p = xy(&[1, 2, 3]);
        p.add_constraint("a", &["y", "x"], [vec![2, 1]]).unwrap();
        assert_eq!(normalize(&p).unwrap().relation(0, 1), &rel(&[(1, 2)]));

        let mut p = xy(&[1]);
        p.add_constraint("u", &["x"], [vec![1]]).unwrap();
        assert!(matches!(normalize(&p), Err(CspError::Unsupported(_))));
    }

    #[test]
    fn reorder_examples() {
        let mut p = xy(&[1, 2]);
        p.add_constraint("c", &["x", "y"], [vec![1, 2]]).unwrap();
        assert_eq!(reorder(&p, &VariableOrder::identity(2)).unwrap(), p);

        let swapped = reorder(&p, &VariableOrder::from_indices(2, vec![1, 0]).unwrap()).unwrap();
        assert_eq!(swapped.variables(), &["y".to_string(), "x".to_string()]);
        let c = &swapped.constraints()[0];
        assert_eq!(c.scheme().indices(), &[0, 1]);
        assert_eq!(c.relation().unwrap(), rel(&[(2, 1)]));

        assert!(VariableOrder::from_indices(2, vec![0, 0]).is_err());
        assert!(VariableOrder::from_indices(2, vec![0]).is_err());
        assert!(VariableOrder::from_names(p.variables(), &["x", "q"]).is_err());
    }

    #[test]
    fn with_domains_restricts_constraints() {
        let mut p = xy(&[1, 2, 3]);
        p.add_constraint("lt", &["x", "y"], [vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        let q = p.with_domains(vec![[1].into(), [2, 3].into()]);
        assert_eq!(q.constraints()[0].relation().unwrap(), rel(&[(1, 2), (1, 3)]));
    }

    fn relation() -> impl Strategy<Value = BinaryRelation> {
        proptest::collection::btree_set((0i64..4, 0i64..4), 0..10).prop_map(BinaryRelation::new)
    }

    proptest! {
        #[test]
        fn transpose_is_an_involution(r in relation()) {
            prop_assert_eq!(r.transpose().transpose(), r);
        }

        #[test]
        fn compose_is_associative(r in relation(), s in relation(), t in relation()) {
            prop_assert_eq!(r.compose(&s).compose(&t), r.compose(&s.compose(&t)));
        }

        #[test]
        fn transpose_reverses_composition(r in relation(), s in relation()) {
            prop_assert_eq!(r.compose(&s).transpose(), s.transpose().compose(&r.transpose()));
        }

        #[test]
        fn compose_matches_definition(r in relation(), s in relation()) {
            let rs = r.compose(&s);
            for a in 0..4 {
                for b in 0..4 {
                    let witness = (0..4).any(|c| r.contains(a, c) && s.contains(c, b));
                    prop_assert_eq!(rs.contains(a, b), witness);
                }
            }
        }

        #[test]
        fn reorder_with_inverse_is_identity(seed in any::<u64>()) {
            use rand::{SeedableRng, seq::SliceRandom};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let p = crate::gen::random_csp(&mut rng, &crate::gen::CspParams::default());
            let mut seq: Vec<usize> = (0..p.len()).collect();
            seq.shuffle(&mut rng);
            let order = VariableOrder::from_indices(p.len(), seq).unwrap();
            let there = reorder(&p, &order).unwrap();
            let back = reorder(&there, &order.inverse()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
