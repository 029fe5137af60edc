//! Seeded generators of test instances shared by the suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::complexes::BoundedComplex;
use crate::dhall::DerivedWord;
use crate::ffla::FqMatrix;
use crate::homalg::{DimVector, HallContext};
use crate::mhall::{Factor, TorusElement};
use crate::quiverrep::IsoClassId;

/// Draws generators `U_{A,n}` and `K_{α,n}` with `A` among the nonzero
/// classes below `gen_caps` and `n` in a degree window.
pub struct Sampler<'a> {
    ctx: &'a HallContext,
    classes: Vec<IsoClassId>,
    window: (i64, i64),
    pub rng: ChaCha8Rng,
}

impl<'a> Sampler<'a> {
    pub fn new(ctx: &'a HallContext, gen_caps: &[usize], window: (i64, i64), rng: ChaCha8Rng) -> Self {
        let classes = small_classes(ctx, gen_caps);
        Sampler { ctx, classes, window, rng }
    }

    pub fn classes(&self) -> &[IsoClassId] {
        &self.classes
    }

    pub fn degree(&mut self) -> i64 {
        self.rng.gen_range(self.window.0..=self.window.1)
    }

    pub fn class(&mut self) -> IsoClassId {
        self.classes[self.rng.gen_range(0..self.classes.len())]
    }

    pub fn alpha(&mut self) -> DimVector {
        loop {
            let a: DimVector = (0..self.ctx.vertex_count()).map(|_| self.rng.gen_range(-1..=1)).collect();
            if a.iter().any(|&x| x != 0) {
                return a;
            }
        }
    }

    /// A single generator; `K` factors only when `with_torus`.
    pub fn generator(&mut self, with_torus: bool) -> Factor {
        if with_torus && self.rng.gen_bool(0.25) {
            let alpha = self.alpha();
            Factor::k(alpha, self.degree())
        } else {
            let c = self.class();
            Factor::u(c, self.degree())
        }
    }

    /// A sequence of `len` generators whose `U` classes sum to a dimension
    /// vector inside the table, so every product stays in range.
    pub fn word(&mut self, len: usize, with_torus: bool) -> Vec<Factor> {
        loop {
            let w: Vec<Factor> = (0..len).map(|_| self.generator(with_torus)).collect();
            if fits(self.ctx, &w) {
                return w;
            }
        }
    }

    /// A derived word with up to `max_len` stalks in distinct degrees.
    pub fn derived_word(&mut self, max_len: usize) -> DerivedWord {
        loop {
            let len = self.rng.gen_range(1..=max_len);
            let stalks: Vec<(i64, IsoClassId)> = (0..len).map(|_| (self.degree(), self.class())).collect();
            let w = DerivedWord::new(stalks);
            let factors = w.factors();
            if factors.len() == len && fits(self.ctx, &factors) {
                return w;
            }
        }
    }

    pub fn torus(&mut self, max_len: usize) -> TorusElement {
        let len = self.rng.gen_range(0..=max_len);
        let factors: Vec<(i64, DimVector)> = (0..len).map(|_| (self.degree(), self.alpha())).collect();
        TorusElement::from_factors(factors)
    }
}

/// Nonzero classes with every vertex dimension at most `caps`.
pub fn small_classes(ctx: &HallContext, caps: &[usize]) -> Vec<IsoClassId> {
    let t = ctx.table();
    t.ids()
        .filter(|&id| !id.is_zero() && t.dims(id).iter().zip(caps).all(|(d, c)| d <= c))
        .collect()
}

/// Whether the `U` classes of `w` sum to a dimension vector in the table.
pub fn fits(ctx: &HallContext, w: &[Factor]) -> bool {
    let mut total = vec![0usize; ctx.vertex_count()];
    for f in w {
        if let Factor::U { class, .. } = f {
            for (t, d) in total.iter_mut().zip(ctx.table().dims(*class)) {
                *t += d;
            }
        }
    }
    ctx.table().contains_dims(&total)
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize, ctx: &HallContext) -> FqMatrix {
    let f = ctx.category().field();
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..f.q())).collect();
        let m = FqMatrix::from_data(n, n, data, f).expect("square data");
        if m.is_invertible(f) {
            return m;
        }
    }
}

/// A direct sum of one to three acyclic generators `K_{A,n}` (with `A` below
/// `caps`, `n` in the window) hidden by a random change of basis in each degree.
pub fn scrambled_acyclic(rng: &mut ChaCha8Rng, ctx: &HallContext, caps: &[usize], window: (i64, i64)) -> BoundedComplex {
    let cat = ctx.category();
    let t = ctx.table();
    let small = small_classes(ctx, caps);
    loop {
        let mut x = BoundedComplex::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let a = small[rng.gen_range(0..small.len())];
            x = x.direct_sum(cat, &BoundedComplex::acyclic(t.rep(a), rng.gen_range(window.0..=window.1)));
        }
        if x.components().values().any(|r| !t.contains_dims(r.dims())) {
            continue;
        }
        let bases = x
            .components()
            .iter()
            .map(|(&i, r)| (i, r.dims().iter().map(|&d| random_invertible(rng, d, ctx)).collect()))
            .collect();
        return x.change_basis(cat, &bases).expect("invertible bases");
    }
}
