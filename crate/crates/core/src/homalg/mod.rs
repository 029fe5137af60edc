//! Homological counting on top of an [`IsoClassTable`]: Euler forms, Hall
//! numbers, extension counts and the `γ` numbers of four-term sequences.

mod complex_euler;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiverrep::{IsoClassId, IsoClassTable, RepCategory, Representation, DEFAULT_ENUMERATION_CAP};
use crate::scalar::Scalar;

pub use complex_euler::{complex_euler, degreewise, degreewise_euler, ComplexTerm, TermKind};

/// Element of `K_0`: one signed integer per vertex.
pub type DimVector = Vec<i64>;

/// A power of `q`, kept as its exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EulerValue {
    pub q: u32,
    pub exponent: i64,
}

impl EulerValue {
    pub fn value<S: Scalar>(&self) -> S {
        S::q_pow(self.q, self.exponent)
    }

    pub fn inverse(self) -> Self {
        EulerValue {
            exponent: -self.exponent,
            ..self
        }
    }

    pub fn times(self, other: EulerValue) -> Self {
        debug_assert_eq!(self.q, other.q);
        EulerValue {
            exponent: self.exponent + other.exponent,
            ..self
        }
    }
}

pub fn add(a: &[i64], b: &[i64]) -> DimVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> DimVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[i64]) -> DimVector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// `|S_{MN}|` for every `(M, N)`: the morphisms `B -> A` with kernel `M` and
/// cokernel `N`.
pub type GammaCounts = BTreeMap<(IsoClassId, IsoClassId), u128>;

/// Counts of subobjects of one `C`, keyed by `(quotient A, sub B)`.
pub type HallRow = BTreeMap<(IsoClassId, IsoClassId), u128>;

/// Shared read-only view of a table plus memoized counting results.
/// Caches are append-only and safe to use from many threads.
#[derive(Debug)]
pub struct HallContext {
    table: Arc<IsoClassTable>,
    hall_rows: RwLock<HashMap<IsoClassId, Arc<HallRow>>>,
    gamma_sets: RwLock<HashMap<(IsoClassId, IsoClassId), Arc<GammaCounts>>>,
    hom_dims: RwLock<HashMap<(IsoClassId, IsoClassId), usize>>,
}

impl HallContext {
    pub fn new(table: IsoClassTable) -> Self {
        Self::from_arc(Arc::new(table))
    }

    pub fn from_arc(table: Arc<IsoClassTable>) -> Self {
        HallContext {
            table,
            hall_rows: RwLock::default(),
            gamma_sets: RwLock::default(),
            hom_dims: RwLock::default(),
        }
    }

    pub fn table(&self) -> &IsoClassTable {
        &self.table
    }

    pub fn table_arc(&self) -> Arc<IsoClassTable> {
        Arc::clone(&self.table)
    }

    pub fn category(&self) -> &RepCategory {
        self.table.category()
    }

    pub fn q(&self) -> u32 {
        self.table.q()
    }

    pub fn vertex_count(&self) -> usize {
        self.category().vertex_count()
    }

    fn check(&self, id: IsoClassId) -> Result<()> {
        self.table.class(id).map(|_| ())
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.vertex_count() {
            return Err(Error::Contract(format!(
                "dimension vector of length {} for {} vertices",
                v.len(),
                self.vertex_count()
            )));
        }
        Ok(())
    }

    /// `sum_v a_v b_v - sum_arrows a_s b_t`.
    pub fn additive_euler(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.category().quiver().euler_form(a, b))
    }

    /// Unchecked form for internal callers with vectors of the right length.
    pub fn euler(&self, a: &[i64], b: &[i64]) -> i64 {
        self.category().quiver().euler_form(a, b)
    }

    pub fn mult_euler(&self, a: &[i64], b: &[i64]) -> Result<EulerValue> {
        Ok(EulerValue {
            q: self.q(),
            exponent: self.additive_euler(a, b)?,
        })
    }

    pub fn class(&self, id: IsoClassId) -> DimVector {
        self.table.class_vector(id)
    }

    pub fn aut(&self, id: IsoClassId) -> u128 {
        self.table.aut(id)
    }

    pub fn hom_dim(&self, a: IsoClassId, b: IsoClassId) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        if let Some(&d) = self.hom_dims.read().unwrap().get(&(a, b)) {
            return Ok(d);
        }
        let d = self.category().hom_dim(self.table.rep(a), self.table.rep(b));
        self.hom_dims.write().unwrap().insert((a, b), d);
        Ok(d)
    }

    /// `dim Hom(M, N) - <dim M, dim N>`.
    pub fn ext1_dim(&self, m: &Representation, n: &Representation) -> Result<usize> {
        let hom = self.category().hom_dim(m, n) as i64;
        let e = self.additive_euler(&m.class(), &n.class())?;
        usize::try_from(hom - e).map_err(|_| {
            Error::Consistency(format!("negative Ext^1 dimension {}", hom - e))
        })
    }

    pub fn ext1_dim_ids(&self, a: IsoClassId, b: IsoClassId) -> Result<usize> {
        let hom = self.hom_dim(a, b)? as i64;
        let e = self.euler(&self.class(a), &self.class(b));
        usize::try_from(hom - e).map_err(|_| {
            Error::Consistency(format!("negative Ext^1 dimension {} for ({a}, {b})", hom - e))
        })
    }

    fn q_pow(&self, e: usize) -> Result<u128> {
        (self.q() as u128)
            .checked_pow(e as u32)
            .ok_or_else(|| Error::Resource(format!("q^{e} overflows")))
    }

    /// Number of subobjects of `C` for every `(quotient, sub)` pair.
    pub fn hall_row(&self, c: IsoClassId) -> Result<Arc<HallRow>> {
        self.check(c)?;
        if let Some(row) = self.hall_rows.read().unwrap().get(&c) {
            return Ok(Arc::clone(row));
        }
        let cat = self.category();
        let mut row = HallRow::new();
        for s in cat.subreps(self.table.rep(c)) {
            let b = self.table.canonical_id(&s.sub)?;
            let a = self.table.canonical_id(&s.quotient)?;
            *row.entry((a, b)).or_insert(0) += 1;
        }
        let row = Arc::new(row);
        self.hall_rows.write().unwrap().insert(c, Arc::clone(&row));
        Ok(row)
    }

    /// `g^C_{AB}`: subobjects of `C` isomorphic to `B` with quotient `A`.
    pub fn hall_number(&self, a: IsoClassId, b: IsoClassId, c: IsoClassId) -> Result<u128> {
        self.check(a)?;
        self.check(b)?;
        self.check(c)?;
        if add(&self.class(a), &self.class(b)) != self.class(c) {
            return Ok(0);
        }
        Ok(self.hall_row(c)?.get(&(a, b)).copied().unwrap_or(0))
    }

    /// Injective morphisms `B -> C` with cokernel isomorphic to `A`, by
    /// enumerating `Hom(B, C)`.
    pub fn injection_count(&self, b: IsoClassId, c: IsoClassId, a: IsoClassId) -> Result<u128> {
        self.check(a)?;
        self.check(b)?;
        self.check(c)?;
        if add(&self.class(a), &self.class(b)) != self.class(c) {
            return Ok(0);
        }
        let cat = self.category();
        let f = cat.field();
        let (rb, rc) = (self.table.rep(b), self.table.rep(c));
        let mut count = 0u128;
        for g in cat.hom_space(rb, rc).enumerate(DEFAULT_ENUMERATION_CAP)? {
            if g.is_injective(f) && self.table.canonical_id(&cat.image(&g, rc).quotient)? == a {
                count += 1;
            }
        }
        Ok(count)
    }

    /// `|Ext^1(A, B)_C| = g^C_{AB} |Hom(A, B)| a_A a_B / a_C`.
    pub fn ext_count_with_middle(&self, a: IsoClassId, b: IsoClassId, c: IsoClassId) -> Result<u128> {
        let g = self.hall_number(a, b, c)?;
        if g == 0 {
            return Ok(0);
        }
        let num = [self.q_pow(self.hom_dim(a, b)?)?, self.aut(a), self.aut(b)]
            .into_iter()
            .try_fold(g, u128::checked_mul)
            .ok_or_else(|| Error::Resource("extension count overflows".into()))?;
        let den = self.aut(c);
        if num % den != 0 {
            return Err(Error::Consistency(format!(
                "|Ext^1({a}, {b})_{c}| = {num}/{den} is not an integer"
            )));
        }
        Ok(num / den)
    }

    /// `U_A U_B = sum_C (|Ext^1(A,B)_C| / |Hom(A,B)|) U_C` as `(C, numerator,
    /// denominator)` triples in increasing `C`.
    pub fn hall_product(&self, a: IsoClassId, b: IsoClassId) -> Result<Vec<(IsoClassId, u128, u128)>> {
        let target = add(&self.class(a), &self.class(b));
        let dims: Vec<usize> = target.iter().map(|&x| x as usize).collect();
        if !self.table.contains_dims(&dims) {
            return Err(Error::Bound(format!(
                "product of {a} and {b} has dimension vector {dims:?}, outside the table"
            )));
        }
        let hom = self.q_pow(self.hom_dim(a, b)?)?;
        let mut out = Vec::new();
        for &c in self.table.ids_with_dims(&dims) {
            let ext = self.ext_count_with_middle(a, b, c)?;
            if ext != 0 {
                out.push((c, ext, hom));
            }
        }
        Ok(out)
    }

    /// `|S_{MN}|` for all `(M, N)`, enumerating `Hom(B, A)`.
    pub fn gamma_counts(&self, a: IsoClassId, b: IsoClassId) -> Result<Arc<GammaCounts>> {
        self.check(a)?;
        self.check(b)?;
        if let Some(s) = self.gamma_sets.read().unwrap().get(&(a, b)) {
            return Ok(Arc::clone(s));
        }
        let cat = self.category();
        let (ra, rb) = (self.table.rep(a), self.table.rep(b));
        let mut counts = GammaCounts::new();
        for g in cat.hom_space(rb, ra).enumerate(DEFAULT_ENUMERATION_CAP)? {
            let m = self.table.canonical_id(&cat.kernel(&g, rb).sub)?;
            let n = self.table.canonical_id(&cat.image(&g, ra).quotient)?;
            *counts.entry((m, n)).or_insert(0) += 1;
        }
        let counts = Arc::new(counts);
        self.gamma_sets.write().unwrap().insert((a, b), Arc::clone(&counts));
        Ok(counts)
    }

    /// `γ^{MN}_{AB} = |S_{MN}| a_M a_N / (a_A a_B)`.
    pub fn gamma<S: Scalar>(&self, a: IsoClassId, b: IsoClassId, m: IsoClassId, n: IsoClassId) -> Result<S> {
        self.check(m)?;
        self.check(n)?;
        let balance = sub(&add(&self.class(m), &self.class(a)), &add(&self.class(b), &self.class(n)));
        if !is_zero(&balance) {
            return Ok(S::zero());
        }
        let s = self.gamma_counts(a, b)?.get(&(m, n)).copied().unwrap_or(0);
        Ok(S::from_counts(s, 1) * S::from_counts(self.aut(m), self.aut(a)) * S::from_counts(self.aut(n), self.aut(b)))
    }

    /// `γ^{FG}_{DE}` through the factorisation `E ->> I >-> D`:
    /// `sum_I g^E_{IF} g^D_{GI} a_F a_I a_G / (a_D a_E)`.
    pub fn gamma_by_convolution<S: Scalar>(
        &self,
        d: IsoClassId,
        e: IsoClassId,
        f: IsoClassId,
        g: IsoClassId,
    ) -> Result<S> {
        let image = sub(&self.class(e), &self.class(f));
        if image.iter().any(|&x| x < 0) || sub(&self.class(d), &image) != self.class(g) {
            return Ok(S::zero());
        }
        let dims: Vec<usize> = image.iter().map(|&x| x as usize).collect();
        let mut total = S::zero();
        for &i in self.table.ids_with_dims(&dims) {
            let left = self.hall_number(i, f, e)?;
            let right = self.hall_number(g, i, d)?;
            if left != 0 && right != 0 {
                total = total + S::from_counts(left * right * self.aut(i), 1);
            }
        }
        Ok(total * S::from_counts(self.aut(f), self.aut(d)) * S::from_counts(self.aut(g), self.aut(e)))
    }
}

#[cfg(test)]
mod tests;
