//! Small fixed problems used by tests, the acceptance suite and the docs.

use crate::csp::{normalize, Csp, NormalizedCsp};

fn less_than(xs: &[i64], ys: &[i64]) -> Vec<Vec<i64>> {
    xs.iter()
        .flat_map(|&a| ys.iter().filter(move |&&b| a < b).map(move |&b| vec![a, b]))
        .collect()
}

/// `x < y` on `{1,2,3}`.
pub fn e1() -> Csp {
    let mut p = Csp::new();
    p.add_variable("x", [1, 2, 3]).unwrap();
    p.add_variable("y", [1, 2, 3]).unwrap();
    p.add_constraint("lt", &["x", "y"], less_than(&[1, 2, 3], &[1, 2, 3]))
        .unwrap();
    p
}

/// The chain `x < y`, `y < z` on `{1,2,3}`.
pub fn e2() -> Csp {
    let mut p = Csp::new();
    for v in ["x", "y", "z"] {
        p.add_variable(v, [1, 2, 3]).unwrap();
    }
    let lt = less_than(&[1, 2, 3], &[1, 2, 3]);
    p.add_constraint("xy", &["x", "y"], lt.clone()).unwrap();
    p.add_constraint("yz", &["y", "z"], lt).unwrap();
    p
}

/// `x = y`, `y < z` on `{1,2,3}`; directionally but not fully arc
/// consistent after one pass along `x, y, z`.
pub fn e3() -> Csp {
    let mut p = Csp::new();
    for v in ["x", "y", "z"] {
        p.add_variable(v, [1, 2, 3]).unwrap();
    }
    p.add_constraint("eq", &["x", "y"], (1..=3).map(|a| vec![a, a]))
        .unwrap();
    p.add_constraint("lt", &["y", "z"], less_than(&[1, 2, 3], &[1, 2, 3]))
        .unwrap();
    p
}

/// Three pairwise `≠` constraints on `{0,1}`: no solution, arc consistent,
/// not path consistent.
pub fn e4_csp() -> Csp {
    let mut p = Csp::new();
    for v in ["x", "y", "z"] {
        p.add_variable(v, [0, 1]).unwrap();
    }
    let ne = || [vec![0, 1], vec![1, 0]];
    p.add_constraint("xy", &["x", "y"], ne()).unwrap();
    p.add_constraint("xz", &["x", "z"], ne()).unwrap();
    p.add_constraint("yz", &["y", "z"], ne()).unwrap();
    p
}

pub fn e4() -> NormalizedCsp {
    normalize(&e4_csp()).unwrap()
}

/// `x = w`, `y ≠ w` on `{0,1}`, every other pair unconstrained. Tightening
/// `(x, y)` through `w` happens after `f^z_{x,y}` has left the worklist, so
/// PC-2 skips re-adding it while PATH does not.
pub fn e5() -> NormalizedCsp {
    let mut p = Csp::new();
    for v in ["x", "y", "z", "w"] {
        p.add_variable(v, [0, 1]).unwrap();
    }
    p.add_constraint("eq", &["x", "w"], [vec![0, 0], vec![1, 1]]).unwrap();
    p.add_constraint("ne", &["y", "w"], [vec![0, 1], vec![1, 0]]).unwrap();
    normalize(&p).unwrap()
}
