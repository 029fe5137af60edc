use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::homalg::{self, DimVector};
use crate::quiverrep::IsoClassId;
use crate::scalar::Scalar;

/// A generator `U_{A,n}` or `K_{α,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    U { degree: i64, class: IsoClassId },
    K { degree: i64, alpha: DimVector },
}

impl Factor {
    pub fn u(class: IsoClassId, degree: i64) -> Self {
        Factor::U { degree, class }
    }

    pub fn k(alpha: DimVector, degree: i64) -> Self {
        Factor::K { degree, alpha }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Factor::U { degree, .. } | Factor::K { degree, .. } => *degree,
        }
    }
}

/// Finitely supported map from degrees to nonzero exponent vectors; the word
/// `K_{α_r,r} ⋯ K_{α_l,l}` in descending degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusElement {
    factors: BTreeMap<i64, DimVector>,
}

impl TorusElement {
    pub fn unit() -> Self {
        Self::default()
    }

    /// Adds exponent vectors degree by degree; zero entries are dropped.
    pub fn from_factors(factors: impl IntoIterator<Item = (i64, DimVector)>) -> Self {
        let mut t = Self::unit();
        for (n, alpha) in factors {
            t.add_at(n, &alpha);
        }
        t
    }

    pub(crate) fn add_at(&mut self, n: i64, alpha: &[i64]) {
        let slot = self.factors.entry(n).or_insert_with(|| vec![0; alpha.len()]);
        *slot = homalg::add(slot, alpha);
        if homalg::is_zero(slot) {
            self.factors.remove(&n);
        }
    }

    pub fn get(&self, n: i64) -> Option<&DimVector> {
        self.factors.get(&n)
    }

    /// Factors in ascending degree.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, &DimVector)> {
        self.factors.iter().map(|(&n, a)| (n, a))
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Componentwise sum of exponents.
    pub fn combine(&self, other: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        for (n, a) in other.iter() {
            out.add_at(n, a);
        }
        out
    }

    pub fn inverse(&self) -> TorusElement {
        TorusElement {
            factors: self.factors.iter().map(|(&n, a)| (n, homalg::neg(a))).collect(),
        }
    }
}

/// Basis word: torus block followed by stalks `U_{A_j,j}` in strictly
/// descending degree, zero objects omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalWord {
    torus: TorusElement,
    stalks: BTreeMap<i64, IsoClassId>,
}

impl NormalWord {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn new(torus: TorusElement, stalks: impl IntoIterator<Item = (i64, IsoClassId)>) -> Self {
        NormalWord {
            torus,
            stalks: stalks.into_iter().filter(|(_, id)| !id.is_zero()).collect(),
        }
    }

    pub fn stalk(class: IsoClassId, n: i64) -> Self {
        Self::new(TorusElement::unit(), [(n, class)])
    }

    pub fn torus(&self) -> &TorusElement {
        &self.torus
    }

    /// Stalk factors in ascending degree.
    pub fn stalks(&self) -> impl DoubleEndedIterator<Item = (i64, IsoClassId)> + '_ {
        self.stalks.iter().map(|(&n, &id)| (n, id))
    }

    pub fn stalk_map(&self) -> &BTreeMap<i64, IsoClassId> {
        &self.stalks
    }

    pub fn is_unit(&self) -> bool {
        self.torus.is_unit() && self.stalks.is_empty()
    }

    pub fn with_torus(&self, torus: TorusElement) -> NormalWord {
        NormalWord {
            torus,
            stalks: self.stalks.clone(),
        }
    }

    /// The generators in product order.
    pub fn factors(&self) -> Vec<Factor> {
        let ks = self.torus.iter().rev().map(|(n, a)| Factor::k(a.clone(), n));
        let us = self.stalks().rev().map(|(n, id)| Factor::u(id, n));
        ks.chain(us).collect()
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors()
            .into_iter()
            .map(|x| match x {
                Factor::K { degree, alpha } => format!("K{alpha:?}[{degree}]"),
                Factor::U { degree, class } => format!("U{class}[{degree}]"),
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Finite linear combination of normal words with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<S> {
    terms: BTreeMap<NormalWord, S>,
}

impl<S: Scalar> Default for AlgebraElement<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_word(NormalWord::unit())
    }

    pub fn from_word(w: NormalWord) -> Self {
        Self::from_terms([(w, S::one())])
    }

    /// Sums coefficients of repeated words and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (NormalWord, S)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn add_term(&mut self, w: NormalWord, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                *slot = slot.clone() + c;
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalWord, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &NormalWord) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_terms(self.terms().map(|(w, c)| (w.clone(), c.clone() * s.clone())))
    }

    pub fn map_words(&self, f: impl Fn(&NormalWord, &S) -> (NormalWord, S)) -> Self {
        Self::from_terms(self.terms().map(|(w, c)| f(w, c)))
    }
}

impl<S: Scalar> fmt::Display for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(w, c)| format!("({c})·{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
