//! Exhaustive and seeded checks of the structural identities, each producing
//! a serializable [`CheckReport`].

pub mod sample;
#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complexes::{hom_complex, BoundedComplex, ReducedForm};
use crate::dhall::{self, DHElement, DerivedWord};
use crate::error::{Error, Result};
use crate::homalg::{complex_euler, degreewise, degreewise_euler, ComplexTerm, HallContext, TermKind};
use crate::mhall::{AlgebraElement, Engine, Factor, Mode, Strategy};
use crate::quiverrep::{bounded_dim_vectors, IsoClassId};
use crate::scalar::Scalar;
use crate::Rat;
use sample::Sampler;

/// One instance where the two sides disagree, with everything needed to
/// re-run it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub instance: Value,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub parameters: Value,
    pub instances: u64,
    pub passed: bool,
    pub failures: Vec<Failure>,
    /// Wall time; left out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckReport {
    /// Concatenates several reports under one name.
    pub fn combine(check: &str, parameters: Value, parts: Vec<CheckReport>) -> CheckReport {
        let mut failures = Vec::new();
        let mut instances = 0;
        let mut elapsed = Duration::ZERO;
        for p in parts {
            instances += p.instances;
            elapsed += p.elapsed;
            failures.extend(p.failures.into_iter().map(|mut f| {
                f.instance = json!({ "check": p.check, "instance": f.instance });
                f
            }));
        }
        CheckReport {
            check: check.to_string(),
            parameters,
            instances,
            passed: failures.is_empty(),
            failures,
            elapsed,
        }
    }
}

/// Quiver, field and caps of the table behind `ctx`.
pub fn context_parameters(ctx: &HallContext) -> Value {
    let t = ctx.table();
    json!({
        "quiver": t.category().quiver(),
        "q": ctx.q(),
        "caps": t.caps(),
        "total_cap": t.total_cap(),
    })
}

fn with_context(ctx: &HallContext, extra: Value) -> Value {
    let mut p = context_parameters(ctx);
    if let (Value::Object(p), Value::Object(e)) = (&mut p, extra) {
        p.extend(e);
    }
    p
}

/// Evaluates `check` on every instance in parallel; outcomes are gathered in
/// instance order and the first error in that order is returned.
fn run<I, F>(name: &str, parameters: Value, instances: Vec<I>, check: F) -> Result<CheckReport>
where
    I: Sync,
    F: Fn(&I) -> Result<Option<Failure>> + Sync,
{
    let start = Instant::now();
    let outcomes: Vec<Result<Option<Failure>>> = instances.par_iter().map(&check).collect();
    let mut failures = Vec::new();
    for o in outcomes {
        failures.extend(o?);
    }
    Ok(CheckReport {
        check: name.to_string(),
        parameters,
        instances: instances.len() as u64,
        passed: failures.is_empty(),
        failures,
        elapsed: start.elapsed(),
    })
}

fn compare<S: Scalar>(instance: impl FnOnce() -> Value, lhs: S, rhs: S) -> Option<Failure> {
    (lhs != rhs).then(|| Failure {
        instance: instance(),
        lhs: lhs.to_fraction(),
        rhs: rhs.to_fraction(),
    })
}

fn compare_elements<S: Scalar>(instance: impl FnOnce() -> Value, lhs: &AlgebraElement<S>, rhs: &AlgebraElement<S>) -> Option<Failure> {
    (lhs != rhs).then(|| Failure {
        instance: instance(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

fn ratio(num: u128, den: u128) -> Rat {
    Rat::from_counts(num, den)
}

fn sum_dims(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Green's formula for every `(A, B, A', B')` with `Â + B̂ = Â' + B̂'` of total
/// dimension at most `total_cap`:
/// `a_A a_B a_A' a_B' Σ_C g^C_{AB} g^C_{A'B'} / a_C`
/// `= Σ q^{-<X,Y'>} g^A_{XX'} g^B_{YY'} g^{A'}_{XY} g^{B'}_{X'Y'} a_X a_X' a_Y a_Y'`.
pub fn green_check(ctx: &HallContext, total_cap: usize) -> Result<CheckReport> {
    let t = ctx.table();
    let n = ctx.vertex_count();
    let needed = bounded_dim_vectors(&vec![total_cap; n], Some(total_cap));
    if let Some(d) = needed.iter().find(|d| !t.contains_dims(d)) {
        return Err(Error::Bound(format!(
            "total dimension {total_cap} needs dimension vector {d:?}, outside the table"
        )));
    }
    let mut by_sum: BTreeMap<Vec<usize>, Vec<(IsoClassId, IsoClassId)>> = BTreeMap::new();
    for a in t.ids() {
        for b in t.ids() {
            let s = sum_dims(t.dims(a), t.dims(b));
            if s.iter().sum::<usize>() <= total_cap {
                by_sum.entry(s).or_default().push((a, b));
            }
        }
    }
    let mut instances = Vec::new();
    for (s, pairs) in &by_sum {
        for &(a, b) in pairs {
            for &(a2, b2) in pairs {
                instances.push((s.clone(), a, b, a2, b2));
            }
        }
    }
    run("green", with_context(ctx, json!({ "total_dim": total_cap })), instances, |&(_, a, b, a2, b2)| {
        let (lhs, rhs) = green_sides(ctx, a, b, a2, b2)?;
        Ok(compare(|| json!({ "A": a, "B": b, "A'": a2, "B'": b2 }), lhs, rhs))
    })
}

/// Both sides of Green's formula for one 4-tuple.
pub fn green_sides(ctx: &HallContext, a: IsoClassId, b: IsoClassId, a2: IsoClassId, b2: IsoClassId) -> Result<(Rat, Rat)> {
    let t = ctx.table();
    let aut = |x| t.aut(x);
    let mut lhs = Rat::from_counts(0, 1);
    let s = sum_dims(t.dims(a), t.dims(b));
    if s == sum_dims(t.dims(a2), t.dims(b2)) {
        for &c in t.ids_with_dims(&s) {
            let g = ctx.hall_number(a, b, c)? * ctx.hall_number(a2, b2, c)?;
            if g != 0 {
                lhs += ratio(g, aut(c));
            }
        }
    }
    lhs *= ratio(aut(a) * aut(b), 1) * ratio(aut(a2) * aut(b2), 1);
    let mut rhs = Rat::from_counts(0, 1);
    let (row_a, row_b) = (ctx.hall_row(a)?, ctx.hall_row(b)?);
    for (&(x, x2), &g_a) in row_a.iter() {
        for (&(y, y2), &g_b) in row_b.iter() {
            let g = ctx.hall_number(x, y, a2)? * ctx.hall_number(x2, y2, b2)?;
            if g == 0 {
                continue;
            }
            let weight = Rat::q_pow(ctx.q(), -ctx.euler(&ctx.class(x), &ctx.class(y2)));
            let auts = ratio(aut(x) * aut(x2), 1) * ratio(aut(y) * aut(y2), 1);
            rhs += weight * ratio(g_a * g_b, 1) * ratio(g, 1) * auts;
        }
    }
    Ok((lhs, rhs))
}

/// `g^C_{AB}` from subobjects against injections `B -> C` with cokernel `A`
/// divided by `a_B`, for all triples with `Â + B̂ = Ĉ`.
pub fn hall_crosscheck(ctx: &HallContext) -> Result<CheckReport> {
    let t = ctx.table();
    let mut instances = Vec::new();
    for a in t.ids() {
        for b in t.ids() {
            let s = sum_dims(t.dims(a), t.dims(b));
            for &c in t.ids_with_dims(&s) {
                instances.push((a, b, c));
            }
        }
    }
    run("hall", context_parameters(ctx), instances, |&(a, b, c)| {
        let g = ratio(ctx.hall_number(a, b, c)?, 1);
        let inj = ratio(ctx.injection_count(b, c, a)?, t.aut(b));
        Ok(compare(|| json!({ "A": a, "B": b, "C": c }), g, inj))
    })
}

/// `Σ_C |Ext^1(A, B)_C| = q^{dim Ext^1(A, B)}` for all pairs whose sum fits.
pub fn ext_sum_check(ctx: &HallContext) -> Result<CheckReport> {
    let t = ctx.table();
    let mut instances = Vec::new();
    for a in t.ids() {
        for b in t.ids() {
            if t.contains_dims(&sum_dims(t.dims(a), t.dims(b))) {
                instances.push((a, b));
            }
        }
    }
    run("ext_sum", context_parameters(ctx), instances, |&(a, b)| {
        let s = sum_dims(t.dims(a), t.dims(b));
        let mut total = 0u128;
        for &c in t.ids_with_dims(&s) {
            total += ctx.ext_count_with_middle(a, b, c)?;
        }
        let expected = Rat::q_pow(ctx.q(), ctx.ext1_dim_ids(a, b)? as i64);
        Ok(compare(|| json!({ "A": a, "B": b }), ratio(total, 1), expected))
    })
}

/// `γ^{FG}_{DE}` by morphism enumeration against the Hall-number convolution,
/// for all 4-tuples, and `γ^{F0}_{DE} = g^E_{DF} a_F / a_E`.
pub fn gamma_check(ctx: &HallContext) -> Result<CheckReport> {
    let t = ctx.table();
    let ids: Vec<IsoClassId> = t.ids().collect();
    let mut instances = Vec::new();
    for &d in &ids {
        for &e in &ids {
            for &f in &ids {
                for &g in &ids {
                    instances.push((d, e, f, Some(g)));
                }
                instances.push((d, e, f, None));
            }
        }
    }
    run("gamma", context_parameters(ctx), instances, |&(d, e, f, g)| {
        let (lhs, rhs): (Rat, Rat) = match g {
            Some(g) => (ctx.gamma(d, e, f, g)?, ctx.gamma_by_convolution(d, e, f, g)?),
            None => (
                ctx.gamma(d, e, f, IsoClassId::ZERO)?,
                ratio(ctx.hall_number(d, f, e)? * t.aut(f), t.aut(e)),
            ),
        };
        let inst = || match g {
            Some(g) => json!({ "D": d, "E": e, "F": f, "G": g }),
            None => json!({ "D": d, "E": e, "F": f, "identity": "gamma_F0" }),
        };
        Ok(compare(inst, lhs, rhs))
    })
}

fn generator_complex(ctx: &HallContext, kind: TermKind, id: IsoClassId, n: i64) -> BoundedComplex {
    let rep = ctx.table().rep(id);
    match kind {
        TermKind::Stalk => BoundedComplex::stalk(rep, n),
        TermKind::Acyclic => BoundedComplex::acyclic(rep, n),
    }
}

/// Predicted `dim Hom(x, y)` between generators: `dim Hom(A, B)` times the
/// number of degrees where a chain map can be nonzero.
fn predicted_hom(kx: TermKind, m: i64, ky: TermKind, n: i64, hom: usize) -> usize {
    use TermKind::*;
    let d = |a: i64, b: i64| usize::from(a == b);
    hom * match (kx, ky) {
        (Stalk, Stalk) => d(m, n),
        (Acyclic, Stalk) => d(n, m - 1),
        (Stalk, Acyclic) => d(n, m),
        (Acyclic, Acyclic) => d(n, m) + d(n, m - 1),
    }
}

/// Chain-map dimensions between stalk and acyclic generators against the
/// closed forms, and the closed-form Euler pairing against the degreewise
/// alternating sum, for degrees in `window`.
pub fn euler_check(ctx: &HallContext, window: (i64, i64)) -> Result<CheckReport> {
    let t = ctx.table();
    let ids: Vec<IsoClassId> = t.ids().filter(|id| !id.is_zero()).collect();
    let kinds = [TermKind::Stalk, TermKind::Acyclic];
    let mut instances = Vec::new();
    for &a in &ids {
        for &b in &ids {
            for kx in kinds {
                for ky in kinds {
                    for m in window.0..=window.1 {
                        for n in window.0..=window.1 {
                            instances.push((kx, a, m, ky, b, n));
                        }
                    }
                }
            }
        }
    }
    let params = with_context(ctx, json!({ "window": [window.0, window.1] }));
    run("euler", params, instances, |&(kx, a, m, ky, b, n)| {
        let cat = ctx.category();
        let inst = || json!({ "x": { "kind": kx, "class": a, "degree": m }, "y": { "kind": ky, "class": b, "degree": n } });
        let got = hom_complex(cat, &generator_complex(ctx, kx, a, m), &generator_complex(ctx, ky, b, n));
        let want = predicted_hom(kx, m, ky, n, ctx.hom_dim(a, b)?);
        if got != want {
            return Ok(Some(Failure {
                instance: inst(),
                lhs: got.to_string(),
                rhs: want.to_string(),
            }));
        }
        let term = |k, id, d| ComplexTerm { kind: k, degree: d, class: ctx.class(id) };
        let (x, y) = ([term(kx, a, m)], [term(ky, b, n)]);
        let closed = complex_euler(ctx, &x, &y).exponent;
        let direct = degreewise_euler(ctx, &degreewise(&x), &degreewise(&y));
        Ok(compare(inst, Rat::q_pow(ctx.q(), closed), Rat::q_pow(ctx.q(), direct)))
    })
}

/// Hall cross-check, Ext sums, γ identities and Euler closed forms.
pub fn consistency_suite(ctx: &HallContext, window: (i64, i64)) -> Result<CheckReport> {
    let parts = vec![hall_crosscheck(ctx)?, ext_sum_check(ctx)?, gamma_check(ctx)?, euler_check(ctx, window)?];
    Ok(CheckReport::combine("consistency", with_context(ctx, json!({ "window": [window.0, window.1] })), parts))
}

/// Shared settings of the seeded algebra suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleParams {
    pub samples: usize,
    pub seed: u64,
    /// Generators use classes with every vertex dimension at most this.
    pub gen_caps: Vec<usize>,
    pub window: (i64, i64),
    pub step_guard: u64,
}

impl SampleParams {
    pub fn new(ctx: &HallContext, samples: usize, seed: u64) -> Self {
        SampleParams {
            samples,
            seed,
            gen_caps: ctx.table().caps().iter().map(|&c| c.min(2)).collect(),
            window: (-2, 2),
            step_guard: crate::mhall::DEFAULT_STEP_GUARD,
        }
    }

    fn sampler<'a>(&self, ctx: &'a HallContext) -> Sampler<'a> {
        Sampler::new(ctx, &self.gen_caps, self.window, ChaCha8Rng::seed_from_u64(self.seed))
    }

    fn json(&self, ctx: &HallContext, mode: Option<Mode>) -> Value {
        with_context(ctx, json!({ "mode": mode, "sampling": self }))
    }
}

fn engine<'a>(ctx: &'a HallContext, mode: Mode, p: &SampleParams) -> Engine<'a> {
    Engine::new(ctx, mode).with_step_guard(p.step_guard)
}

fn to_element(word: &[Factor], engine: &Engine<'_>) -> Result<AlgebraElement<Rat>> {
    engine.normalize(word)
}

/// `(xy)z = x(yz)` on seeded generator triples.
pub fn associativity_suite(ctx: &HallContext, mode: Mode, p: &SampleParams) -> Result<CheckReport> {
    let mut s = p.sampler(ctx);
    let triples: Vec<Vec<Factor>> = (0..p.samples).map(|_| s.word(3, !mode.is_derived())).collect();
    let engine = engine(ctx, mode, p);
    run("associativity", p.json(ctx, Some(mode)), triples, |w| {
        let [x, y, z] = [&w[0], &w[1], &w[2]].map(|f| to_element(std::slice::from_ref(f), &engine));
        let (x, y, z) = (x?, y?, z?);
        let lhs = engine.multiply(&engine.multiply(&x, &y)?, &z)?;
        let rhs = engine.multiply(&x, &engine.multiply(&y, &z)?)?;
        Ok(compare_elements(|| json!({ "factors": w }), &lhs, &rhs))
    })
}

/// Seeded raw words of length 2 to 5 reduce to the same normal form under
/// leftmost-first and rightmost-first rewriting.
pub fn confluence_suite(ctx: &HallContext, mode: Mode, p: &SampleParams) -> Result<CheckReport> {
    let mut s = p.sampler(ctx);
    let words: Vec<Vec<Factor>> = (0..p.samples)
        .map(|_| {
            let len = rand::Rng::gen_range(&mut s.rng, 2..=5);
            s.word(len, !mode.is_derived())
        })
        .collect();
    let left = engine(ctx, mode, p).with_strategy(Strategy::Leftmost);
    let right = engine(ctx, mode, p).with_strategy(Strategy::Rightmost);
    run("confluence", p.json(ctx, Some(mode)), words, |w| {
        let (a, b) = (to_element(w, &left)?, to_element(w, &right)?);
        Ok(compare_elements(|| json!({ "factors": w }), &a, &b))
    })
}

enum EmbedInstance {
    Pair(IsoClassId, i64, IsoClassId, i64),
    Injective(Vec<DerivedWord>),
    RoundTrip(DerivedWord, crate::mhall::TorusElement),
}

/// `ι(xy) = ι(x)ι(y)` on every pair of generators in the window, `ι` sends
/// distinct sampled basis words to distinct basis words, and
/// `tensor_decompose` inverts `ι(u) * t` on sampled pairs.
pub fn embed_suite(ctx: &HallContext, p: &SampleParams) -> Result<CheckReport> {
    let mut s = p.sampler(ctx);
    let t = ctx.table();
    let mut instances = Vec::new();
    for &a in s.classes() {
        for &b in s.classes() {
            if !t.contains_dims(&sum_dims(t.dims(a), t.dims(b))) {
                continue;
            }
            for m in p.window.0..=p.window.1 {
                for n in p.window.0..=p.window.1 {
                    instances.push(EmbedInstance::Pair(a, m, b, n));
                }
            }
        }
    }
    let basis: BTreeSet<DerivedWord> = (0..p.samples).map(|_| s.derived_word(3)).collect();
    instances.push(EmbedInstance::Injective(basis.into_iter().collect()));
    for _ in 0..p.samples {
        let u = s.derived_word(3);
        let tau = s.torus(3);
        instances.push(EmbedInstance::RoundTrip(u, tau));
    }
    let dh = engine(ctx, Mode::DhTw, p);
    let mh = engine(ctx, Mode::MhTw, p);
    run("embed", p.json(ctx, None), instances, |inst| match inst {
        EmbedInstance::Pair(a, m, b, n) => {
            let (x, y) = (DHElement::<Rat>::generator(*a, *m), DHElement::<Rat>::generator(*b, *n));
            let lhs = dhall::iota(ctx, &dhall::dh_multiply_with(&dh, &x, &y)?)?;
            let rhs = mh.multiply(&dhall::iota(ctx, &x)?, &dhall::iota(ctx, &y)?)?;
            Ok(compare_elements(|| json!({ "x": [a, m], "y": [b, n] }), &lhs, &rhs))
        }
        EmbedInstance::Injective(words) => {
            let mut seen = BTreeMap::new();
            for w in words {
                let image = dhall::iota::<Rat>(ctx, &DHElement::from_word(w.clone()))?;
                let terms: Vec<_> = image.terms().collect();
                let bad = |why: &str, other: Option<&DerivedWord>| {
                    Some(Failure {
                        instance: json!({ "word": w, "other": other, "reason": why }),
                        lhs: image.to_string(),
                        rhs: w.to_string(),
                    })
                };
                if terms.len() != 1 {
                    return Ok(bad("image is not a single basis word", None));
                }
                if dhall::tensor_decompose(ctx, terms[0].0).0 != *w {
                    return Ok(bad("image has a different stalk part", None));
                }
                if let Some(prev) = seen.insert(terms[0].0.clone(), w.clone()) {
                    return Ok(bad("two words share an image", Some(&prev)));
                }
            }
            Ok(None)
        }
        EmbedInstance::RoundTrip(u, tau) => {
            let x = dhall::recompose::<Rat>(ctx, u, tau)?;
            let inst = || json!({ "word": u, "torus": tau });
            let terms: Vec<_> = x.terms().collect();
            if terms.len() != 1 {
                return Ok(Some(Failure {
                    instance: inst(),
                    lhs: x.to_string(),
                    rhs: "a single basis word".into(),
                }));
            }
            let (u2, tau2) = dhall::tensor_decompose(ctx, terms[0].0);
            Ok(((&u2, &tau2) != (u, tau)).then(|| Failure {
                instance: inst(),
                lhs: format!("{u2} {tau2:?}"),
                rhs: format!("{u} {tau:?}"),
            }))
        }
    })
}

/// Reducing a scrambled acyclic complex agrees with the product of its
/// acyclic summands `K_{α,n}`.
pub fn reduction_suite(ctx: &HallContext, p: &SampleParams) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let window = (p.window.0, p.window.1);
    let complexes: Vec<BoundedComplex> =
        (0..p.samples).map(|_| sample::scrambled_acyclic(&mut rng, ctx, &p.gen_caps, window)).collect();
    let mh = engine(ctx, Mode::Mh, p);
    run("reduction", p.json(ctx, None), complexes, |x| {
        let factors: Vec<Factor> = x
            .acyclic_decompose(ctx.category())?
            .into_iter()
            .map(|(alpha, n)| Factor::k(alpha, n))
            .collect();
        let lhs: AlgebraElement<Rat> = mh.normalize(&factors)?;
        let r: ReducedForm<Rat> = x.reduce(ctx, false)?;
        let rhs = AlgebraElement::from_word(r.word).scale(&r.coefficient);
        Ok(compare_elements(|| json!({ "complex": crate::format::complex_to_json(x) }), &lhs, &rhs))
    })
}

/// Every associativity and confluence run over all four modes, plus the
/// embedding and reduction suites.
pub fn algebra_suite(ctx: &HallContext, p: &SampleParams) -> Result<CheckReport> {
    let mut parts = Vec::new();
    for mode in Mode::ALL {
        parts.push(associativity_suite(ctx, mode, p)?);
        parts.push(confluence_suite(ctx, mode, p)?);
    }
    parts.push(embed_suite(ctx, p)?);
    parts.push(reduction_suite(ctx, p)?);
    Ok(CheckReport::combine("algebra", p.json(ctx, None), parts))
}

