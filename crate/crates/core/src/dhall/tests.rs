use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::testutil::{a2, ids};
use crate::Rat;

fn z(id: IsoClassId, n: i64) -> DHElement<Rat> {
    DHElement::generator(id, n)
}

#[test]
fn product_examples() {
    let ctx = a2(2, vec![1, 1]);
    let [s1, s2, p, split] = ids(&ctx, ["S1", "S2", "P", "S1+S2"]);
    let half = Rat::from_counts(1, 2);
    let got = dh_multiply(&ctx, &z(s1, 0), &z(s2, 0), true).unwrap();
    let want = DHElement::from_terms([
        (DerivedWord::generator(split, 0), half.clone()),
        (DerivedWord::generator(p, 0), half),
    ]);
    assert_eq!(got, want);
    let got = dh_multiply(&ctx, &z(s2, 0), &z(s1, 1), true).unwrap();
    assert_eq!(got, DHElement::from_word(DerivedWord::new([(1, s1), (0, s2)])));
    for twisted in [false, true] {
        let x = z(p, -1);
        assert_eq!(dh_multiply(&ctx, &z(IsoClassId::ZERO, 4), &x, twisted).unwrap(), x);
        assert_eq!(dh_multiply(&ctx, &x, &DHElement::one(), twisted).unwrap(), x);
    }
}

#[test]
fn iota_examples() {
    let ctx = a2(2, vec![1, 1]);
    let [p] = ids(&ctx, ["P"]);
    let a = ctx.class(p);
    let neg = homalg::neg(&a);
    let image = |n| iota(&ctx, &z(p, n)).unwrap();
    assert_eq!(image(0), AlgebraElement::from_word(NormalWord::stalk(p, 0)));
    let want = |stalk: i64, torus: i64| {
        AlgebraElement::from_word(NormalWord::new(TorusElement::from_factors([(torus, neg.clone())]), [(stalk, p)]))
    };
    assert_eq!(image(1), want(1, 1));
    assert_eq!(image(-1), want(-1, 0));
    assert_eq!(iota_torus(&a, 2), TorusElement::from_factors([(2, neg.clone()), (1, a.clone())]));
    assert_eq!(iota_torus(&a, -2), TorusElement::from_factors([(-1, neg), (0, a)]));
}

#[test]
fn tensor_decompose_examples() {
    let ctx = a2(2, vec![1, 1]);
    let [p] = ids(&ctx, ["P"]);
    let a = ctx.class(p);
    let (u, t) = tensor_decompose(&ctx, &NormalWord::stalk(p, 0));
    assert_eq!((u, t), (DerivedWord::generator(p, 0), TorusElement::unit()));
    let (u, t) = tensor_decompose(&ctx, &NormalWord::stalk(p, 1));
    assert_eq!(u, DerivedWord::generator(p, 1));
    assert_eq!(t, TorusElement::from_factors([(1, a.clone())]));
    let torus = TorusElement::from_factors([(3, vec![1, -2])]);
    let (u, t) = tensor_decompose(&ctx, &NormalWord::new(torus.clone(), []));
    assert!(u.is_unit());
    assert_eq!(t, torus);
}

fn generators(ctx: &HallContext, cap: usize) -> Vec<(IsoClassId, i64)> {
    let t = ctx.table();
    let mut out = Vec::new();
    for id in t.ids().filter(|&id| !id.is_zero() && t.dims(id).iter().all(|&d| d <= cap)) {
        for n in -2..=2 {
            out.push((id, n));
        }
    }
    out
}

#[test]
fn iota_is_multiplicative() {
    let ctx = a2(2, vec![2, 2]);
    let gens = generators(&ctx, 1);
    for &(b, n) in &gens {
        for &(a, m) in &gens {
            let (x, y) = (z(b, n), z(a, m));
            let lhs = iota(&ctx, &dh_multiply(&ctx, &x, &y, true).unwrap()).unwrap();
            let rhs = crate::mhall::multiply(&ctx, &iota(&ctx, &x).unwrap(), &iota(&ctx, &y).unwrap(), true).unwrap();
            assert_eq!(lhs, rhs, "Z{b}[{n}] Z{a}[{m}]");
        }
    }
}

#[test]
fn tensor_round_trip() {
    let ctx = a2(2, vec![2, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let classes: Vec<_> = ctx.table().ids().collect();
    for _ in 0..100 {
        let word = DerivedWord::new((-2..=2).map(|n| (n, classes[rng.gen_range(0..classes.len())])));
        let torus = TorusElement::from_factors((-2..=2).map(|n| (n, vec![rng.gen_range(-2..=2), rng.gen_range(-2..=2)])));
        let w = recompose::<Rat>(&ctx, &word, &torus).unwrap();
        assert_eq!(w.len(), 1);
        let (nw, c) = w.terms().next().unwrap();
        assert_eq!(*c, Rat::one());
        assert_eq!(tensor_decompose(&ctx, nw), (word, torus));
    }
}

#[test]
fn associativity_and_twist_conversion() {
    let ctx = a2(3, vec![3, 3]);
    let gens = generators(&ctx, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pick = || {
        let (id, n) = gens[rng.gen_range(0..gens.len())];
        z(id, n)
    };
    for twisted in [false, true] {
        for _ in 0..40 {
            let (x, y, w) = (pick(), pick(), pick());
            let left = dh_multiply(&ctx, &dh_multiply(&ctx, &x, &y, twisted).unwrap(), &w, twisted).unwrap();
            let right = dh_multiply(&ctx, &x, &dh_multiply(&ctx, &y, &w, twisted).unwrap(), twisted).unwrap();
            assert_eq!(left, right, "{x} {y} {w} twisted={twisted}");
        }
    }
    for _ in 0..60 {
        let (x, y) = (pick(), pick());
        assert_eq!(dh_multiply(&ctx, &x, &y, false).unwrap(), dh_multiply_via_twist(&ctx, &x, &y).unwrap());
    }
}

/// The adjacent relation with `γ` taken from the factorisation identity
/// rather than from enumerating `Hom(B, A)`.
#[test]
fn adjacent_relation_matches_convolution_counts() {
    let ctx = a2(2, vec![2, 2]);
    let t = ctx.table();
    let q = ctx.q();
    for b in t.ids().filter(|id| !id.is_zero()) {
        for a in t.ids().filter(|id| !id.is_zero()) {
            let got = dh_multiply(&ctx, &z(b, 0), &z(a, 1), false).unwrap();
            let mut want = Vec::new();
            for m in t.ids() {
                for n in t.ids() {
                    let gamma: Rat = ctx.gamma_by_convolution(a, b, m, n).unwrap();
                    if gamma == Rat::from_counts(0, 1) {
                        continue;
                    }
                    let scale = Rat::from_counts(t.aut(a) * t.aut(b), t.aut(m) * t.aut(n))
                        * Rat::q_pow(q, -ctx.euler(&ctx.class(n), &ctx.class(m)));
                    want.push((DerivedWord::new([(1, n), (0, m)]), gamma * scale));
                }
            }
            assert_eq!(got, DHElement::from_terms(want), "B={b} A={a}");
        }
    }
}
