//! The twisted product is `x * y = <x, y> x ◇ y` for the Euler form of
//! bounded complexes. These conversions give an independent route from one
//! multiplication to the other.

use std::collections::BTreeMap;

use super::{AlgebraElement, Engine, Factor, Mode, NormalWord};
use crate::error::Result;
use crate::homalg::{self, degreewise_euler, DimVector, HallContext};
use crate::scalar::Scalar;

fn factor_class(ctx: &HallContext, f: &Factor) -> BTreeMap<i64, DimVector> {
    let mut out = BTreeMap::new();
    match f {
        Factor::U { degree, class } => {
            out.insert(*degree, ctx.class(*class));
        }
        Factor::K { degree, alpha } => {
            out.insert(*degree, alpha.clone());
            out.insert(degree - 1, alpha.clone());
        }
    }
    out
}

/// Degreewise class of a word in `K_0` of bounded complexes.
pub fn word_class(ctx: &HallContext, w: &NormalWord) -> BTreeMap<i64, DimVector> {
    let mut out: BTreeMap<i64, DimVector> = BTreeMap::new();
    for f in w.factors() {
        for (n, v) in factor_class(ctx, &f) {
            let slot = out.entry(n).or_insert_with(|| vec![0; v.len()]);
            *slot = homalg::add(slot, &v);
        }
    }
    out
}

/// `sum_{i<j} <f_i, f_j>` over the factors of `w`: the ◇-word equals
/// `q^{-E}` times the *-word with the same factors.
pub fn ordering_exponent(ctx: &HallContext, w: &NormalWord) -> i64 {
    let classes: Vec<_> = w.factors().iter().map(|f| factor_class(ctx, f)).collect();
    let mut total = 0;
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            total += degreewise_euler(ctx, &classes[i], &classes[j]);
        }
    }
    total
}

/// Re-expresses an element given in ◇-words in *-words.
pub fn to_twisted_basis<S: Scalar>(ctx: &HallContext, x: &AlgebraElement<S>) -> AlgebraElement<S> {
    x.map_words(|w, c| (w.clone(), c.clone() * S::q_pow(ctx.q(), -ordering_exponent(ctx, w))))
}

pub fn from_twisted_basis<S: Scalar>(ctx: &HallContext, x: &AlgebraElement<S>) -> AlgebraElement<S> {
    x.map_words(|w, c| (w.clone(), c.clone() * S::q_pow(ctx.q(), ordering_exponent(ctx, w))))
}

/// `x ◇ y` computed with the twisted relations only.
pub fn multiply_via_twist<S: Scalar>(
    ctx: &HallContext,
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
) -> Result<AlgebraElement<S>> {
    let (tx, ty) = (to_twisted_basis(ctx, x), to_twisted_basis(ctx, y));
    let mut start = Vec::new();
    for (wx, cx) in tx.terms() {
        for (wy, cy) in ty.terms() {
            let pairing = degreewise_euler(ctx, &word_class(ctx, wx), &word_class(ctx, wy));
            let mut raw = wx.factors();
            raw.extend(wy.factors());
            start.push((cx.clone() * cy.clone() * S::q_pow(ctx.q(), -pairing), raw));
        }
    }
    let product = Engine::new(ctx, Mode::MhTw).normalize_terms(start)?;
    Ok(from_twisted_basis(ctx, &product))
}
