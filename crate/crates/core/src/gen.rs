//! Random problem generation for tests and benchmarks.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::csp::{normalize, Csp, NormalizedCsp, Tuple, Value, VariableOrder};

#[derive(Debug, Clone, PartialEq)]
pub struct CspParams {
    pub variables: RangeInclusive<usize>,
    pub domain_size: RangeInclusive<usize>,
    /// Range for the per-constraint probability of keeping a tuple.
    pub density: (f64, f64),
    /// Probability that a variable pair carries a constraint.
    pub pair_probability: f64,
    /// Probability of a second constraint on a pair that already has one.
    pub duplicate_probability: f64,
    /// Probability of adding one ternary constraint (needs 3+ variables).
    pub ternary_probability: f64,
}

impl Default for CspParams {
    fn default() -> Self {
        CspParams {
            variables: 2..=4,
            domain_size: 2..=4,
            density: (0.3, 0.8),
            pair_probability: 0.7,
            duplicate_probability: 0.1,
            ternary_probability: 0.0,
        }
    }
}

impl CspParams {
    /// At most one binary constraint per pair.
    pub fn simple() -> Self {
        CspParams {
            duplicate_probability: 0.0,
            ..CspParams::default()
        }
    }

    pub fn with_ternary(mut self, p: f64) -> Self {
        self.ternary_probability = p;
        self
    }
}

fn random_tuples<R: Rng + ?Sized>(
    rng: &mut R,
    domains: &[&[Value]],
    density: f64,
) -> Vec<Tuple> {
    let mut out: Vec<Tuple> = vec![Vec::new()];
    for d in domains {
        out = out
            .into_iter()
            .flat_map(|t| {
                d.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out.retain(|_| rng.gen_bool(density));
    out
}

pub fn random_csp<R: Rng + ?Sized>(rng: &mut R, params: &CspParams) -> Csp {
    let n = rng.gen_range(params.variables.clone());
    let mut csp = Csp::new();
    let mut domains: Vec<Vec<Value>> = Vec::with_capacity(n);
    for i in 0..n {
        let size = rng.gen_range(params.domain_size.clone());
        let offset: Value = rng.gen_range(-1..=1);
        let domain: Vec<Value> = (0..size as Value).map(|v| v + offset).collect();
        csp.add_variable(format!("v{i}"), domain.iter().copied())
            .expect("fresh names");
        domains.push(domain);
    }
    let density = |rng: &mut R| rng.gen_range(params.density.0..=params.density.1);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if !rng.gen_bool(params.pair_probability) {
                continue;
            }
            let copies = if rng.gen_bool(params.duplicate_probability) { 2 } else { 1 };
            for _ in 0..copies {
                let (a, b) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
                let p = density(rng);
                let tuples = random_tuples(rng, &[&domains[a], &domains[b]], p);
                csp.add_constraint_on(format!("c{k}"), &[a, b], tuples)
                    .expect("generated within domains");
                k += 1;
            }
        }
    }
    if n >= 3 && rng.gen_bool(params.ternary_probability) {
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(rng);
        vars.truncate(3);
        let p = density(rng);
        let ds: Vec<&[Value]> = vars.iter().map(|&v| domains[v].as_slice()).collect();
        let tuples = random_tuples(rng, &ds, p);
        csp.add_constraint_on(format!("c{k}"), &vars, tuples)
            .expect("generated within domains");
    }
    csp
}

pub fn random_normalized<R: Rng + ?Sized>(rng: &mut R, params: &CspParams) -> NormalizedCsp {
    let params = CspParams {
        ternary_probability: 0.0,
        ..params.clone()
    };
    normalize(&random_csp(rng, &params)).expect("binary by construction")
}

/// Every pair constrained exactly once; what the literal DAC loop needs.
pub fn random_complete<R: Rng + ?Sized>(rng: &mut R, params: &CspParams) -> Csp {
    random_normalized(rng, params).to_csp()
}

pub fn random_order<R: Rng + ?Sized>(rng: &mut R, n: usize) -> VariableOrder {
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    VariableOrder::from_indices(n, seq).expect("a shuffle is a permutation")
}
