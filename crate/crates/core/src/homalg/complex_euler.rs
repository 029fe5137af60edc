use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{add, is_zero, DimVector, EulerValue, HallContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    /// `[U_{α,n}]`: a stalk complex in degree `n`.
    Stalk,
    /// `[K_{α,n}]`: the identity `α -> α` in degrees `n-1, n`.
    Acyclic,
}

/// One summand of a formal combination of stalk and acyclic classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexTerm {
    pub kind: TermKind,
    pub degree: i64,
    pub class: DimVector,
}

impl ComplexTerm {
    pub fn stalk(class: DimVector, degree: i64) -> Self {
        ComplexTerm {
            kind: TermKind::Stalk,
            degree,
            class,
        }
    }

    pub fn acyclic(class: DimVector, degree: i64) -> Self {
        ComplexTerm {
            kind: TermKind::Acyclic,
            degree,
            class,
        }
    }
}

fn delta(a: i64, b: i64) -> i64 {
    i64::from(a == b)
}

/// Euler pairing of two generators, as an exponent of `q`.
fn pair(ctx: &HallContext, x: &ComplexTerm, y: &ComplexTerm) -> i64 {
    use TermKind::*;
    let (m, n) = (x.degree, y.degree);
    let e = |a: &[i64], b: &[i64]| ctx.euler(a, b);
    match (x.kind, y.kind) {
        (Stalk, Stalk) if m == n => e(&x.class, &y.class),
        (Stalk, Stalk) if m > n => 0,
        (Stalk, Stalk) => {
            let sign = if (n - m) % 2 == 0 { 1 } else { -1 };
            sign * e(&x.class, &y.class)
        }
        (Acyclic, Stalk) => delta(n, m - 1) * e(&x.class, &y.class),
        (Stalk, Acyclic) => delta(m, n) * e(&x.class, &y.class),
        (Acyclic, Acyclic) => (delta(n, m) + delta(n, m - 1)) * e(&x.class, &y.class),
    }
}

/// `<x, y>` on formal sums, by bilinearity from the closed forms on
/// generators.
pub fn complex_euler(ctx: &HallContext, x: &[ComplexTerm], y: &[ComplexTerm]) -> EulerValue {
    let exponent = x.iter().flat_map(|a| y.iter().map(move |b| (a, b))).map(|(a, b)| pair(ctx, a, b)).sum();
    EulerValue { q: ctx.q(), exponent }
}

/// Degreewise dimension vectors of a formal sum.
pub fn degreewise(terms: &[ComplexTerm]) -> BTreeMap<i64, DimVector> {
    let mut out: BTreeMap<i64, DimVector> = BTreeMap::new();
    let mut put = |deg: i64, v: &[i64]| {
        let slot = out.entry(deg).or_insert_with(|| vec![0; v.len()]);
        *slot = add(slot, v);
    };
    for t in terms {
        put(t.degree, &t.class);
        if t.kind == TermKind::Acyclic {
            put(t.degree - 1, &t.class);
        }
    }
    out.retain(|_, v| !is_zero(v));
    out
}

/// Euler form of bounded complexes from degreewise classes:
/// `sum_{i <= j} (-1)^{j-i} <x_i, y_j>`, as an exponent of `q`.
pub fn degreewise_euler(ctx: &HallContext, x: &BTreeMap<i64, DimVector>, y: &BTreeMap<i64, DimVector>) -> i64 {
    let mut total = 0;
    for (&i, a) in x {
        for (&j, b) in y.range(i..) {
            let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
            total += sign * ctx.euler(a, b);
        }
    }
    total
}
