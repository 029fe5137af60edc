use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraElement, Factor, NormalWord, TorusElement};
use crate::error::{Error, Result};
use crate::homalg::{self, HallContext};
use crate::quiverrep::IsoClassId;
use crate::scalar::Scalar;

pub const DEFAULT_STEP_GUARD: u64 = 5_000_000;

/// Which relation dictionary drives the rewriting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Mh,
    MhTw,
    Dh,
    DhTw,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Mh, Mode::MhTw, Mode::Dh, Mode::DhTw];

    pub fn modified(twisted: bool) -> Self {
        if twisted {
            Mode::MhTw
        } else {
            Mode::Mh
        }
    }

    pub fn derived(twisted: bool) -> Self {
        if twisted {
            Mode::DhTw
        } else {
            Mode::Dh
        }
    }

    pub fn is_twisted(self) -> bool {
        matches!(self, Mode::MhTw | Mode::DhTw)
    }

    pub fn is_derived(self) -> bool {
        matches!(self, Mode::Dh | Mode::DhTw)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Mh => "mh",
            Mode::MhTw => "mh_tw",
            Mode::Dh => "dh",
            Mode::DhTw => "dh_tw",
        }
    }
}

/// Which out-of-order stalk pair is rewritten first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// A term under rewriting: normalized torus block, then a stalk sequence
/// that may still contain inversions.
type Key = (TorusElement, Vec<(i64, IsoClassId)>);

pub struct Engine<'a> {
    ctx: &'a HallContext,
    mode: Mode,
    strategy: Strategy,
    step_guard: u64,
}

fn alternating(k: i64) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<'a> Engine<'a> {
    pub fn new(ctx: &'a HallContext, mode: Mode) -> Self {
        Engine {
            ctx,
            mode,
            strategy: Strategy::default(),
            step_guard: DEFAULT_STEP_GUARD,
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_step_guard(mut self, guard: u64) -> Self {
        self.step_guard = guard;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn context(&self) -> &HallContext {
        self.ctx
    }

    fn e(&self, a: &[i64], b: &[i64]) -> i64 {
        self.ctx.euler(a, b)
    }

    fn class(&self, id: IsoClassId) -> Vec<i64> {
        self.ctx.class(id)
    }

    /// Multiplies `K_{α,m}` into the torus block from the right, after it has
    /// been moved left past the stalks in `prefix`. Returns the exponent of
    /// `q` collected on the way.
    fn absorb(&self, torus: &mut TorusElement, prefix: &[(i64, IsoClassId)], alpha: &[i64], m: i64) -> i64 {
        if homalg::is_zero(alpha) {
            return 0;
        }
        let mut exp = 0;
        if self.mode == Mode::Mh {
            for &(n, a) in prefix {
                let class = self.class(a);
                // U_{A,n} K_{α,n} = <A,α>^{-1} K U;  U_{A,n} K_{α,n+1} = <α,A> K U
                if m == n {
                    exp -= self.e(&class, alpha);
                } else if m == n + 1 {
                    exp += self.e(alpha, &class);
                }
            }
            if let Some(beta) = torus.get(m - 1) {
                exp += self.e(alpha, beta);
            }
            if let Some(beta) = torus.get(m) {
                exp -= self.e(beta, alpha);
            }
        }
        torus.add_at(m, alpha);
        exp
    }

    /// `t1 t2` in the torus.
    pub fn torus_multiply<S: Scalar>(&self, t1: &TorusElement, t2: &TorusElement) -> (S, TorusElement) {
        let mut out = t1.clone();
        let mut exp = 0;
        for (n, alpha) in t2.iter().rev() {
            exp += self.absorb(&mut out, &[], alpha, n);
        }
        (S::q_pow(self.ctx.q(), exp), out)
    }

    /// Applies one relation to the out-of-order pair at `i, i + 1`.
    fn rewrite<S: Scalar>(&self, key: &Key, i: usize) -> Result<Vec<(S, i64, Key)>> {
        let (torus, stalks) = key;
        let (n, left) = stalks[i];
        let (m, right) = stalks[i + 1];
        let prefix = &stalks[..i];
        let suffix = &stalks[i + 2..];
        let splice = |middle: &[(i64, IsoClassId)]| -> Vec<(i64, IsoClassId)> {
            prefix
                .iter()
                .chain(middle.iter().filter(|(_, id)| !id.is_zero()))
                .chain(suffix)
                .copied()
                .collect()
        };
        let (l, r) = (self.class(left), self.class(right));
        let mut out = Vec::new();
        if m == n {
            let twist = if self.mode.is_twisted() { self.e(&l, &r) } else { 0 };
            for (c, num, den) in self.ctx.hall_product(left, right)? {
                out.push((S::from_counts(num, den), twist, (torus.clone(), splice(&[(n, c)]))));
            }
        } else if m == n + 1 {
            // U_{B,n} U_{A,n+1} with B = left, A = right.
            for (&(mm, nn), &count) in self.ctx.gamma_counts(right, left)?.iter() {
                let mc = self.class(mm);
                let kernel_image = homalg::sub(&l, &mc);
                let mut t = torus.clone();
                let exp = match self.mode {
                    Mode::Mh => self.e(&kernel_image, &mc) + self.absorb(&mut t, prefix, &kernel_image, n + 1),
                    Mode::MhTw => {
                        t.add_at(n + 1, &kernel_image);
                        -self.e(&l, &r)
                    }
                    Mode::Dh => -self.e(&self.class(nn), &mc),
                    Mode::DhTw => -self.e(&l, &r),
                };
                out.push((S::from_counts(count, 1), exp, (t, splice(&[(n + 1, nn), (n, mm)]))));
            }
        } else {
            // U_{B,n} U_{A,m}, m >= n + 2, becomes U_{A,m} U_{B,n}.
            let sign = alternating(m - n);
            let exp = match self.mode {
                Mode::Mh => 0,
                Mode::MhTw | Mode::DhTw => sign * self.e(&l, &r),
                Mode::Dh => sign * self.e(&r, &l),
            };
            out.push((S::one(), exp, (torus.clone(), splice(&[(m, right), (n, left)]))));
        }
        Ok(out)
    }

    fn inversion(&self, stalks: &[(i64, IsoClassId)]) -> Option<usize> {
        let mut pairs = (0..stalks.len().saturating_sub(1)).filter(|&i| stalks[i].0 <= stalks[i + 1].0);
        match self.strategy {
            Strategy::Leftmost => pairs.next(),
            Strategy::Rightmost => pairs.next_back(),
        }
    }

    fn start_key(&self, raw: &[Factor]) -> Result<(i64, Key)> {
        let mut torus = TorusElement::unit();
        let mut stalks = Vec::new();
        let mut exp = 0;
        for f in raw {
            match f {
                Factor::U { degree, class } => {
                    self.ctx.table().class(*class)?;
                    if !class.is_zero() {
                        stalks.push((*degree, *class));
                    }
                }
                Factor::K { degree, alpha } => {
                    if self.mode.is_derived() {
                        return Err(Error::Contract("derived Hall algebras have no torus generators".into()));
                    }
                    if alpha.len() != self.ctx.vertex_count() {
                        return Err(Error::Contract(format!(
                            "torus exponent {alpha:?} has the wrong length"
                        )));
                    }
                    exp += self.absorb(&mut torus, &stalks, alpha, *degree);
                }
            }
        }
        Ok((exp, (torus, stalks)))
    }

    /// Rewrites a combination of raw generator sequences to normal form.
    pub fn normalize_terms<S: Scalar>(&self, start: Vec<(S, Vec<Factor>)>) -> Result<AlgebraElement<S>> {
        let q = self.ctx.q();
        let mut work: BTreeMap<Key, S> = BTreeMap::new();
        let push = |work: &mut BTreeMap<Key, S>, key: Key, c: S| {
            if c.is_zero() {
                return;
            }
            match work.get_mut(&key) {
                Some(slot) => {
                    *slot = slot.clone() + c;
                    if slot.is_zero() {
                        work.remove(&key);
                    }
                }
                None => {
                    work.insert(key, c);
                }
            }
        };
        for (c, raw) in start {
            let (exp, key) = self.start_key(&raw)?;
            push(&mut work, key, c * S::q_pow(q, exp));
        }
        let mut out = AlgebraElement::zero();
        let mut steps = 0u64;
        while let Some((key, c)) = work.pop_first() {
            steps += 1;
            if steps > self.step_guard {
                return Err(Error::Resource(format!(
                    "rewriting exceeded the step guard of {}",
                    self.step_guard
                )));
            }
            match self.inversion(&key.1) {
                None => out.add_term(NormalWord::new(key.0, key.1), c),
                Some(i) => {
                    for (coef, exp, next) in self.rewrite::<S>(&key, i)? {
                        push(&mut work, next, c.clone() * coef * S::q_pow(q, exp));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn normalize<S: Scalar>(&self, raw: &[Factor]) -> Result<AlgebraElement<S>> {
        self.normalize_terms(vec![(S::one(), raw.to_vec())])
    }

    pub fn multiply<S: Scalar>(&self, x: &AlgebraElement<S>, y: &AlgebraElement<S>) -> Result<AlgebraElement<S>> {
        let mut start = Vec::with_capacity(x.len() * y.len());
        for (wx, cx) in x.terms() {
            for (wy, cy) in y.terms() {
                let mut raw = wx.factors();
                raw.extend(wy.factors());
                start.push((cx.clone() * cy.clone(), raw));
            }
        }
        self.normalize_terms(start)
    }
}
