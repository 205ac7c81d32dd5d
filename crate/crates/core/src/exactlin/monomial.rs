//! Monomial bases of the graded pieces `S_d` of a polynomial ring.

use std::collections::HashMap;

/// Exponent vectors of all degree-`d` monomials in `m` variables, in
/// graded-lex order with variable 0 highest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    vars: usize,
    degree: i64,
    exponents: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(vars: usize, degree: i64) -> Self {
        assert!(vars >= 1, "a monomial basis needs at least one variable");
        let mut exponents = Vec::new();
        if degree >= 0 {
            let mut current = vec![0u32; vars];
            fill(&mut exponents, &mut current, 0, degree as u32);
        }
        let index = exponents
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        MonomialBasis {
            vars,
            degree,
            exponents,
            index,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn len(&self) -> usize {
        self.exponents.len()
    }
    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }
    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, var: usize, remaining: u32) {
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(current.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e;
        fill(out, current, var + 1, remaining - e);
    }
    current[var] = 0;
}

/// `dim S_d` in `m` variables: `C(d+m-1, m-1)` for `d >= 0`, else 0.
pub fn graded_dim(vars: usize, degree: i64) -> usize {
    if degree < 0 {
        return 0;
    }
    let d = degree as u128;
    let k = (vars as u128).saturating_sub(1);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (d + i) / i;
    }
    acc as usize
}
