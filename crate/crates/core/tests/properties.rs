use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hallcore::dhall::{self, DHElement};
use hallcore::ffla::Field;
use hallcore::format::{Codec, ElementJson};
use hallcore::homalg::HallContext;
use hallcore::mhall::{self, Engine, Mode};
use hallcore::quiverrep::{EnumerationLimits, IsoClassTable, Quiver, RepCategory};
use hallcore::verify::sample::Sampler;
use hallcore::{DhElement, MhElement, Rat, Scalar};

fn ctx() -> &'static HallContext {
    static CTX: OnceLock<HallContext> = OnceLock::new();
    CTX.get_or_init(|| {
        let cat = RepCategory::new(Quiver::linear(2), Field::new(3).unwrap());
        HallContext::new(IsoClassTable::enumerate(cat, vec![3, 3], None, EnumerationLimits::default()).unwrap())
    })
}

fn sampler(seed: u64) -> Sampler<'static> {
    Sampler::new(ctx(), &[1, 1], (-2, 2), ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip(seed in any::<u64>(), twisted in any::<bool>()) {
        let w = sampler(seed).word(3, true);
        let x: MhElement = mhall::normalize(ctx(), &w, twisted).unwrap();
        let codec = Codec::new(ctx().table());
        let text = serde_json::to_string(&codec.element_to_json(&x)).unwrap();
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(codec.element_from_json::<Rat>(&back).unwrap(), x);
    }

    #[test]
    fn twisted_basis_change_is_invertible(seed in any::<u64>()) {
        let w = sampler(seed).word(3, true);
        let x: MhElement = mhall::normalize(ctx(), &w, false).unwrap();
        let there = mhall::to_twisted_basis(ctx(), &x);
        prop_assert_eq!(mhall::from_twisted_basis(ctx(), &there), x);
    }

    #[test]
    fn untwisted_product_matches_twisted_relations(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let (a, b) = (s.word(1, true), s.word(1, true));
        prop_assume!(hallcore::verify::sample::fits(ctx(), &[a.clone(), b.clone()].concat()));
        let x: MhElement = mhall::normalize(ctx(), &a, false).unwrap();
        let y: MhElement = mhall::normalize(ctx(), &b, false).unwrap();
        let direct = Engine::new(ctx(), Mode::Mh).multiply(&x, &y).unwrap();
        prop_assert_eq!(direct, mhall::multiply_via_twist(ctx(), &x, &y).unwrap());
    }

    #[test]
    fn derived_products_match_twisted_relations(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let (u, v) = (s.derived_word(2), s.derived_word(2));
        let all: Vec<_> = u.factors().into_iter().chain(v.factors()).collect();
        prop_assume!(hallcore::verify::sample::fits(ctx(), &all));
        let (x, y): (DhElement, DhElement) = (DHElement::from_word(u), DHElement::from_word(v));
        prop_assert_eq!(dhall::dh_multiply(ctx(), &x, &y, false).unwrap(), dhall::dh_multiply_via_twist(ctx(), &x, &y).unwrap());
    }

    #[test]
    fn tensor_round_trip(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let (u, t) = (s.derived_word(3), s.torus(3));
        let x: MhElement = dhall::recompose(ctx(), &u, &t).unwrap();
        prop_assert_eq!(x.len(), 1);
        let (w, c) = x.terms().next().unwrap();
        prop_assert_eq!(c, &Rat::from_counts(1, 1));
        prop_assert_eq!(dhall::tensor_decompose(ctx(), w), (u, t));
    }

    #[test]
    fn fractions_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = Rat::new(n.into(), d.into());
        prop_assert_eq!(Rat::parse_fraction(&x.to_fraction()), Some(x));
    }
}
