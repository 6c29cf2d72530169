//! Compound partial orderings.
//!
//! Every ordering used by the propagation algorithms is a Cartesian product
//! of powersets, each ordered by reversed inclusion: `X ⊑ Y` iff `Y ⊆ X` in
//! every coordinate. The least element is the tuple of full base sets, and
//! propagation moves "up" by removing values.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A finite set of values, stored sorted so set equality is structural.
pub type ValueSet<T> = BTreeSet<T>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("scheme must not be empty")]
    EmptyScheme,
    #[error("scheme indices must be strictly increasing (got {0:?})")]
    NotIncreasing(Vec<usize>),
    #[error("scheme index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
}

/// Strictly increasing, non-empty sequence of component indices (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scheme(Vec<usize>);

impl Scheme {
    pub fn new(indices: Vec<usize>) -> Result<Self, OrderError> {
        if indices.is_empty() {
            return Err(OrderError::EmptyScheme);
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(OrderError::NotIncreasing(indices));
        }
        Ok(Scheme(indices))
    }

    /// Checks that every index is valid for a product of the given arity.
    pub fn check_arity(&self, arity: usize) -> Result<(), OrderError> {
        match self.0.last() {
            Some(&index) if index >= arity => Err(OrderError::IndexOutOfRange { index, arity }),
            _ => Ok(()),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    /// Position of `index` inside the scheme, if present.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.0.binary_search(&index).ok()
    }
}

impl fmt::Display for Scheme {
    /// Rendered 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str(")")
    }
}

/// An element of a product of powersets: one value-set per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductElement<T: Ord> {
    components: Vec<ValueSet<T>>,
}

impl<T: Ord + Clone> ProductElement<T> {
    pub fn new(components: Vec<ValueSet<T>>) -> Self {
        ProductElement { components }
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ValueSet<T>] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &ValueSet<T> {
        &self.components[index]
    }

    pub fn into_components(self) -> Vec<ValueSet<T>> {
        self.components
    }

    /// `d[s]`: the components at the scheme's indices, in scheme order.
    pub fn slice(&self, scheme: &Scheme) -> Result<Vec<ValueSet<T>>, OrderError> {
        scheme.check_arity(self.arity())?;
        Ok(scheme
            .indices()
            .iter()
            .map(|&i| self.components[i].clone())
            .collect())
    }

    /// Returns a copy with the scheme's coordinates replaced by `values`.
    pub fn with_slice(
        &self,
        scheme: &Scheme,
        values: Vec<ValueSet<T>>,
    ) -> Result<Self, OrderError> {
        scheme.check_arity(self.arity())?;
        if values.len() != scheme.len() {
            return Err(OrderError::ArityMismatch {
                left: scheme.len(),
                right: values.len(),
            });
        }
        let mut components = self.components.clone();
        for (&i, v) in scheme.indices().iter().zip(values) {
            components[i] = v;
        }
        Ok(ProductElement { components })
    }

    /// Total number of values over all coordinates.
    pub fn size(&self) -> usize {
        self.components.iter().map(BTreeSet::len).sum()
    }

    /// Coordinates (0-based) where `self` and `other` differ.
    pub fn changed_coordinates(&self, other: &Self) -> Vec<usize> {
        self.components
            .iter()
            .zip(&other.components)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_empty_component(&self) -> bool {
        self.components.iter().any(BTreeSet::is_empty)
    }
}

/// Componentwise reversed inclusion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComponentOrder;

impl ComponentOrder {
    /// `a ⊑ b` iff `b[i] ⊆ a[i]` for every coordinate.
    pub fn leq<T: Ord + Clone>(
        &self,
        a: &ProductElement<T>,
        b: &ProductElement<T>,
    ) -> Result<bool, OrderError> {
        leq(a, b)
    }

    pub fn bottom<T: Ord + Clone>(&self, base: &[ValueSet<T>]) -> ProductElement<T> {
        ProductElement::new(base.to_vec())
    }
}

pub fn leq<T: Ord + Clone>(
    a: &ProductElement<T>,
    b: &ProductElement<T>,
) -> Result<bool, OrderError> {
    if a.arity() != b.arity() {
        return Err(OrderError::ArityMismatch {
            left: a.arity(),
            right: b.arity(),
        });
    }
    Ok(a
        .components
        .iter()
        .zip(&b.components)
        .all(|(x, y)| y.is_subset(x)))
}

/// A partial ordering on which the generic iteration can run.
pub trait Poset: Clone + PartialEq {
    fn leq(&self, other: &Self) -> bool;
}

impl<T: Ord + Clone> Poset for ProductElement<T> {
    fn leq(&self, other: &Self) -> bool {
        leq(self, other).unwrap_or(false)
    }
}

/// A function on `D_s` for some scheme `s`.
///
/// Implementations are expected to be inflationary and monotonic with
/// respect to componentwise reversed inclusion; the engine checks
/// inflationarity at run time.
pub trait SchemeFn<T>: Send + Sync {
    fn scheme(&self) -> &Scheme;

    /// Maps `d[s]` to the new values of the same coordinates.
    fn apply(&self, input: &[ValueSet<T>]) -> Vec<ValueSet<T>>;

    fn is_idempotent(&self) -> bool {
        false
    }

    fn label(&self) -> String;
}

impl<T, F: SchemeFn<T> + ?Sized> SchemeFn<T> for Box<F> {
    fn scheme(&self) -> &Scheme {
        (**self).scheme()
    }
    fn apply(&self, input: &[ValueSet<T>]) -> Vec<ValueSet<T>> {
        (**self).apply(input)
    }
    fn is_idempotent(&self) -> bool {
        (**self).is_idempotent()
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

impl<T, F: SchemeFn<T> + ?Sized> SchemeFn<T> for &F {
    fn scheme(&self) -> &Scheme {
        (**self).scheme()
    }
    fn apply(&self, input: &[ValueSet<T>]) -> Vec<ValueSet<T>> {
        (**self).apply(input)
    }
    fn is_idempotent(&self) -> bool {
        (**self).is_idempotent()
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

/// Applies the canonic extension `f⁺` of `f` to `d`.
pub fn apply_extended<T: Ord + Clone, F: SchemeFn<T> + ?Sized>(
    f: &F,
    d: &ProductElement<T>,
) -> Result<ProductElement<T>, OrderError> {
    let input = d.slice(f.scheme())?;
    d.with_slice(f.scheme(), f.apply(&input))
}

/// Lifts `f` to a function on the whole `n`-ary product.
pub fn canonic_extend<'f, T, F>(
    f: &'f F,
    arity: usize,
) -> Result<impl Fn(&ProductElement<T>) -> ProductElement<T> + 'f, OrderError>
where
    T: Ord + Clone,
    F: SchemeFn<T> + ?Sized,
{
    f.scheme().check_arity(arity)?;
    Ok(move |d: &ProductElement<T>| {
        apply_extended(f, d).expect("arity checked when the extension was built")
    })
}

/// Scheme function given by a closure. Handy in tests and small examples.
pub struct ClosureFn<T, F> {
    scheme: Scheme,
    label: String,
    idempotent: bool,
    f: F,
    _marker: std::marker::PhantomData<fn() -> T>,
}

impl<T, F> ClosureFn<T, F>
where
    F: Fn(&[ValueSet<T>]) -> Vec<ValueSet<T>> + Send + Sync,
{
    pub fn new(label: impl Into<String>, scheme: Scheme, f: F) -> Self {
        ClosureFn {
            scheme,
            label: label.into(),
            idempotent: false,
            f,
            _marker: std::marker::PhantomData,
        }
    }

    pub fn idempotent(mut self, flag: bool) -> Self {
        self.idempotent = flag;
        self
    }
}

impl<T, F> SchemeFn<T> for ClosureFn<T, F>
where
    F: Fn(&[ValueSet<T>]) -> Vec<ValueSet<T>> + Send + Sync,
{
    fn scheme(&self) -> &Scheme {
        &self.scheme
    }
    fn apply(&self, input: &[ValueSet<T>]) -> Vec<ValueSet<T>> {
        (self.f)(input)
    }
    fn is_idempotent(&self) -> bool {
        self.idempotent
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[i64]) -> ValueSet<i64> {
        v.iter().copied().collect()
    }

    fn el(c: &[&[i64]]) -> ProductElement<i64> {
        ProductElement::new(c.iter().map(|v| set(v)).collect())
    }

    fn scheme(i: &[usize]) -> Scheme {
        Scheme::new(i.to_vec()).unwrap()
    }

    #[test]
    fn scheme_validation() {
        assert_eq!(Scheme::new(vec![]), Err(OrderError::EmptyScheme));
        assert!(matches!(
            Scheme::new(vec![2, 1]),
            Err(OrderError::NotIncreasing(_))
        ));
        assert!(matches!(
            Scheme::new(vec![1, 1]),
            Err(OrderError::NotIncreasing(_))
        ));
        assert_eq!(scheme(&[0, 2]).to_string(), "(1,3)");
    }

    #[test]
    fn slice_examples() {
        let d = el(&[&[1], &[2], &[3]]);
        assert_eq!(d.slice(&scheme(&[0, 2])).unwrap(), vec![set(&[1]), set(&[3])]);
        let d = el(&[&[1, 2], &[5]]);
        assert_eq!(d.slice(&scheme(&[0])).unwrap(), vec![set(&[1, 2])]);
        let d = el(&[&[7], &[8], &[9]]);
        assert_eq!(d.slice(&scheme(&[0, 1, 2])).unwrap(), d.components().to_vec());
        assert_eq!(
            d.slice(&scheme(&[3])),
            Err(OrderError::IndexOutOfRange { index: 3, arity: 3 })
        );
    }

    #[test]
    fn canonic_extension_examples() {
        let d = el(&[&[1], &[2, 3], &[4]]);
        let id = ClosureFn::new("id", scheme(&[1]), |x: &[ValueSet<i64>]| x.to_vec());
        assert_eq!(canonic_extend(&id, 3).unwrap()(&d), d);

        let drop3 = ClosureFn::new("drop3", scheme(&[1]), |x: &[ValueSet<i64>]| {
            vec![x[0].iter().copied().filter(|&v| v != 3).collect()]
        });
        assert_eq!(apply_extended(&drop3, &d).unwrap(), el(&[&[1], &[2], &[4]]));

        assert!(canonic_extend(&drop3, 1).is_err());
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&el(&[&[1, 2], &[3, 4]]), &el(&[&[1], &[3, 4]])).unwrap());
        assert!(!leq(&el(&[&[1], &[3]]), &el(&[&[1, 2], &[3]])).unwrap());
        let x = el(&[&[5, 6], &[]]);
        assert!(leq(&x, &x).unwrap());
        assert!(leq(&el(&[&[1]]), &el(&[&[1], &[2]])).is_err());
    }

    fn small_element(arity: usize) -> impl Strategy<Value = ProductElement<i64>> {
        proptest::collection::vec(proptest::collection::btree_set(0i64..4, 0..4), arity)
            .prop_map(ProductElement::new)
    }

    proptest! {
        #[test]
        fn leq_is_a_partial_order(a in small_element(3), b in small_element(3), c in small_element(3)) {
            prop_assert!(leq(&a, &a).unwrap());
            if leq(&a, &b).unwrap() && leq(&b, &a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if leq(&a, &b).unwrap() && leq(&b, &c).unwrap() {
                prop_assert!(leq(&a, &c).unwrap());
            }
        }

        #[test]
        fn extension_touches_only_its_scheme(
            d in small_element(4),
            mask in proptest::collection::vec(any::<bool>(), 4),
            drop in 0i64..4,
        ) {
            let indices: Vec<usize> = (0..4).filter(|&i| mask[i]).collect();
            prop_assume!(!indices.is_empty());
            let s = Scheme::new(indices).unwrap();
            let f = ClosureFn::new("drop", s.clone(), move |x: &[ValueSet<i64>]| {
                x.iter().map(|c| c.iter().copied().filter(|&v| v != drop).collect()).collect()
            });
            let e = apply_extended(&f, &d).unwrap();
            for i in 0..4 {
                if !s.contains(i) {
                    prop_assert_eq!(e.component(i), d.component(i));
                }
            }
            prop_assert_eq!(e.slice(&s).unwrap(), f.apply(&d.slice(&s).unwrap()));
        }
    }
}
