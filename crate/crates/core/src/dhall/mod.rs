//! The derived Hall algebra and its twist on generators `Z_A^{[n]}`, the
//! embedding `ι` of the twisted derived Hall algebra into the twisted
//! modified Ringel-Hall algebra, and the matching tensor decomposition.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::homalg::{self, HallContext};
use crate::mhall::{AlgebraElement, Engine, Factor, Mode, NormalWord, TorusElement};
use crate::quiverrep::IsoClassId;
use crate::scalar::Scalar;

/// `Z_{A_r}^{[r]} ⋯ Z_{A_l}^{[l]}` in strictly descending degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DerivedWord {
    stalks: BTreeMap<i64, IsoClassId>,
}

impl DerivedWord {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn new(stalks: impl IntoIterator<Item = (i64, IsoClassId)>) -> Self {
        DerivedWord {
            stalks: stalks.into_iter().filter(|(_, id)| !id.is_zero()).collect(),
        }
    }

    pub fn generator(class: IsoClassId, n: i64) -> Self {
        Self::new([(n, class)])
    }

    /// Factors in ascending degree.
    pub fn stalks(&self) -> impl DoubleEndedIterator<Item = (i64, IsoClassId)> + '_ {
        self.stalks.iter().map(|(&n, &id)| (n, id))
    }

    pub fn is_unit(&self) -> bool {
        self.stalks.is_empty()
    }

    /// The generators in product order, as stalk factors.
    pub fn factors(&self) -> Vec<Factor> {
        self.stalks().rev().map(|(n, id)| Factor::u(id, n)).collect()
    }

    fn to_normal(&self) -> NormalWord {
        NormalWord::new(TorusElement::unit(), self.stalks())
    }
}

impl fmt::Display for DerivedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.stalks().rev().map(|(n, id)| format!("Z{id}[{n}]")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Finite combination of derived words with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DHElement<S> {
    terms: BTreeMap<DerivedWord, S>,
}

impl<S: Scalar> Default for DHElement<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> DHElement<S> {
    pub fn zero() -> Self {
        DHElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_word(DerivedWord::unit())
    }

    pub fn from_word(w: DerivedWord) -> Self {
        Self::from_terms([(w, S::one())])
    }

    pub fn generator(class: IsoClassId, n: i64) -> Self {
        Self::from_word(DerivedWord::generator(class, n))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (DerivedWord, S)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            if c.is_zero() {
                continue;
            }
            let slot = out.terms.entry(w.clone()).or_insert_with(S::zero);
            *slot = slot.clone() + c;
            if slot.is_zero() {
                out.terms.remove(&w);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivedWord, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &DerivedWord) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_terms(self.terms().map(|(w, c)| (w.clone(), c.clone() * s.clone())))
    }

    fn to_modified(&self) -> AlgebraElement<S> {
        AlgebraElement::from_terms(self.terms().map(|(w, c)| (w.to_normal(), c.clone())))
    }

    fn from_modified(x: &AlgebraElement<S>) -> Self {
        Self::from_terms(x.terms().map(|(w, c)| {
            debug_assert!(w.torus().is_unit());
            (DerivedWord::new(w.stalks()), c.clone())
        }))
    }
}

impl<S: Scalar> fmt::Display for DHElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(w, c)| format!("({c})·{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Product in `DH` (`twisted == false`) or `DH_tw`.
pub fn dh_multiply<S: Scalar>(
    ctx: &HallContext,
    x: &DHElement<S>,
    y: &DHElement<S>,
    twisted: bool,
) -> Result<DHElement<S>> {
    dh_multiply_with(&Engine::new(ctx, Mode::derived(twisted)), x, y)
}

/// Product with a caller-configured engine (strategy, step guard).
pub fn dh_multiply_with<S: Scalar>(engine: &Engine<'_>, x: &DHElement<S>, y: &DHElement<S>) -> Result<DHElement<S>> {
    debug_assert!(engine.mode().is_derived());
    Ok(DHElement::from_modified(&engine.multiply(&x.to_modified(), &y.to_modified())?))
}

/// Normal form of an arbitrary sequence of generators `(class, degree)`.
pub fn dh_normalize<S: Scalar>(ctx: &HallContext, raw: &[(IsoClassId, i64)], twisted: bool) -> Result<DHElement<S>> {
    let factors: Vec<Factor> = raw.iter().map(|&(id, n)| Factor::u(id, n)).collect();
    let x = Engine::new(ctx, Mode::derived(twisted)).normalize(&factors)?;
    Ok(DHElement::from_modified(&x))
}

/// Torus part of `ι(Z_A^{[n]})`:
/// `n > 0`: `prod_{i=1}^{n} K_{Â,n-i+1}^{(-1)^i}`; `n < 0`: `prod_{i=1}^{|n|} K_{Â,i+n}^{(-1)^i}`.
pub fn iota_torus(class: &[i64], n: i64) -> TorusElement {
    let signed = |i: i64| if i % 2 == 0 { class.to_vec() } else { homalg::neg(class) };
    let factors: Vec<(i64, Vec<i64>)> = if n > 0 {
        (1..=n).map(|i| (n - i + 1, signed(i))).collect()
    } else {
        (1..=-n).map(|i| (i + n, signed(i))).collect()
    };
    TorusElement::from_factors(factors)
}

/// Generator sequence of `ι(w)` in product order.
pub fn iota_factors(ctx: &HallContext, w: &DerivedWord) -> Vec<Factor> {
    let mut raw = Vec::new();
    for (n, id) in w.stalks().rev() {
        raw.push(Factor::u(id, n));
        for (m, alpha) in iota_torus(&ctx.class(id), n).iter().rev() {
            raw.push(Factor::k(alpha.clone(), m));
        }
    }
    raw
}

/// `ι: DH_tw -> MH_tw`, extended multiplicatively and linearly.
pub fn iota<S: Scalar>(ctx: &HallContext, x: &DHElement<S>) -> Result<AlgebraElement<S>> {
    let start = x.terms().map(|(w, c)| (c.clone(), iota_factors(ctx, w))).collect();
    Engine::new(ctx, Mode::MhTw).normalize_terms(start)
}

/// The unique `(u, t)` with `ι(u) * t = w` in `MH_tw`.
pub fn tensor_decompose(ctx: &HallContext, w: &NormalWord) -> (DerivedWord, TorusElement) {
    let word = DerivedWord::new(w.stalks());
    let mut tau = TorusElement::unit();
    for (n, id) in word.stalks() {
        tau = tau.combine(&iota_torus(&ctx.class(id), n));
    }
    (word, w.torus().combine(&tau.inverse()))
}

/// `ι(u) * t` as an element of `MH_tw`.
pub fn recompose<S: Scalar>(ctx: &HallContext, u: &DerivedWord, t: &TorusElement) -> Result<AlgebraElement<S>> {
    let mut raw = iota_factors(ctx, u);
    raw.extend(NormalWord::new(t.clone(), []).factors());
    Engine::new(ctx, Mode::MhTw).normalize(&raw)
}

/// `Σ_n (-1)^n Â_n`: the class of a derived word in `K_0(A)`.
pub fn derived_class(ctx: &HallContext, w: &DerivedWord) -> Vec<i64> {
    let mut total = vec![0; ctx.vertex_count()];
    for (n, id) in w.stalks() {
        let c = ctx.class(id);
        total = if n % 2 == 0 { homalg::add(&total, &c) } else { homalg::sub(&total, &c) };
    }
    total
}

/// `sum_{i<j} <f_i, f_j>_D` over the generators of `w`, where
/// `<Z_A^{[m]}, Z_B^{[n]}>_D = <Â, B̂>^{(-1)^{m-n}}`.
pub fn derived_ordering_exponent(ctx: &HallContext, w: &DerivedWord) -> i64 {
    let gens: Vec<DerivedWord> = w.stalks().rev().map(|(n, id)| DerivedWord::generator(id, n)).collect();
    let mut total = 0;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            total += ctx.euler(&derived_class(ctx, &gens[i]), &derived_class(ctx, &gens[j]));
        }
    }
    total
}

/// Untwisted `x y` computed from the twisted relations through
/// `x * y = <x, y>_D x y`.
pub fn dh_multiply_via_twist<S: Scalar>(ctx: &HallContext, x: &DHElement<S>, y: &DHElement<S>) -> Result<DHElement<S>> {
    let q = ctx.q();
    let to_tw = |e: &DHElement<S>| {
        DHElement::from_terms(e.terms().map(|(w, c)| (w.clone(), c.clone() * S::q_pow(q, -derived_ordering_exponent(ctx, w)))))
    };
    let (tx, ty) = (to_tw(x), to_tw(y));
    let mut start = Vec::new();
    for (wx, cx) in tx.terms() {
        for (wy, cy) in ty.terms() {
            let pairing = ctx.euler(&derived_class(ctx, wx), &derived_class(ctx, wy));
            let mut raw = wx.factors();
            raw.extend(wy.factors());
            start.push((cx.clone() * cy.clone() * S::q_pow(q, -pairing), raw));
        }
    }
    let product = DHElement::from_modified(&Engine::new(ctx, Mode::DhTw).normalize_terms(start)?);
    Ok(DHElement::from_terms(product.terms().map(|(w, c)| {
        (w.clone(), c.clone() * S::q_pow(q, derived_ordering_exponent(ctx, w)))
    })))
}

#[cfg(test)]
mod tests;
