//! The modified Ringel-Hall algebra and its twist, presented on the
//! normal-form basis `K_{α_r,r} ⋯ K_{α_l,l} U_{A_r,r} ⋯ U_{A_l,l}` and
//! multiplied by rewriting with the defining relations.

mod element;
mod engine;
mod twist;

pub use element::{AlgebraElement, Factor, NormalWord, TorusElement};
pub use engine::{Engine, Mode, Strategy, DEFAULT_STEP_GUARD};
pub use twist::{from_twisted_basis, multiply_via_twist, ordering_exponent, to_twisted_basis, word_class};

use crate::error::Result;
use crate::homalg::{DimVector, HallContext};
use crate::quiverrep::IsoClassId;
use crate::scalar::Scalar;

/// Product of two elements in `MH` (`twisted == false`) or `MH_tw`.
pub fn multiply<S: Scalar>(
    ctx: &HallContext,
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    twisted: bool,
) -> Result<AlgebraElement<S>> {
    Engine::new(ctx, Mode::modified(twisted)).multiply(x, y)
}

/// The element represented by an arbitrary sequence of generators.
pub fn normalize<S: Scalar>(ctx: &HallContext, raw: &[Factor], twisted: bool) -> Result<AlgebraElement<S>> {
    Engine::new(ctx, Mode::modified(twisted)).normalize(raw)
}

/// `U_{A,n} U_{B,n}`.
pub fn same_degree_product<S: Scalar>(
    ctx: &HallContext,
    a: IsoClassId,
    b: IsoClassId,
    n: i64,
    twisted: bool,
) -> Result<AlgebraElement<S>> {
    normalize(ctx, &[Factor::u(a, n), Factor::u(b, n)], twisted)
}

/// `t1 t2` inside the quantum torus, as a scalar times a torus word.
pub fn torus_multiply<S: Scalar>(
    ctx: &HallContext,
    t1: &TorusElement,
    t2: &TorusElement,
    twisted: bool,
) -> (S, TorusElement) {
    Engine::new(ctx, Mode::modified(twisted)).torus_multiply(t1, t2)
}

/// `K_{α,n}` as a one-factor torus word.
pub fn k_word(alpha: DimVector, n: i64) -> NormalWord {
    NormalWord::new(TorusElement::from_factors([(n, alpha)]), [])
}
