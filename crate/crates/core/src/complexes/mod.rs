//! Bounded complexes of representations, their homology, and reduction to
//! the normal-form basis of the modified Ringel-Hall algebra.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffla::{linear_solve, FqMatrix, Solution};
use crate::homalg::{self, DimVector, HallContext};
use crate::mhall::{ordering_exponent, NormalWord, TorusElement};
use crate::quiverrep::{IsoClassId, Morphism, RepCategory, Representation, Subrep};
use crate::scalar::Scalar;

/// Finitely many nonzero components `X^i` with differentials
/// `d^i : X^i -> X^{i+1}`. Missing entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedComplex {
    components: BTreeMap<i64, Representation>,
    differentials: BTreeMap<i64, Morphism>,
}

/// Image and kernel of one differential.
#[derive(Clone, Debug)]
pub struct ImageKernel {
    /// `Im d^i` inside `X^{i+1}`.
    pub image: Subrep,
    /// `Ker d^i` inside `X^i`.
    pub kernel: Subrep,
}

/// `coefficient · word`, the normal form of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedForm<S> {
    pub coefficient: S,
    pub word: NormalWord,
}

impl BoundedComplex {
    /// Builds and validates a complex.
    pub fn new(
        cat: &RepCategory,
        components: BTreeMap<i64, Representation>,
        differentials: BTreeMap<i64, Morphism>,
    ) -> Result<Self> {
        let x = BoundedComplex {
            components: components.into_iter().filter(|(_, r)| !r.is_zero()).collect(),
            differentials: differentials.into_iter().filter(|(_, d)| !d.is_zero()).collect(),
        };
        x.validate(cat)?;
        Ok(x)
    }

    pub fn zero() -> Self {
        BoundedComplex {
            components: BTreeMap::new(),
            differentials: BTreeMap::new(),
        }
    }

    /// `U_{A,m}`: `A` in degree `m`.
    pub fn stalk(a: &Representation, m: i64) -> Self {
        let mut x = Self::zero();
        if !a.is_zero() {
            x.components.insert(m, a.clone());
        }
        x
    }

    /// `K_{A,m}`: `A -> A` by the identity in degrees `m - 1, m`.
    pub fn acyclic(a: &Representation, m: i64) -> Self {
        let mut x = Self::zero();
        if !a.is_zero() {
            x.components.insert(m - 1, a.clone());
            x.components.insert(m, a.clone());
            x.differentials.insert(m - 1, Morphism::identity(a));
        }
        x
    }

    pub fn components(&self) -> &BTreeMap<i64, Representation> {
        &self.components
    }

    pub fn differentials(&self) -> &BTreeMap<i64, Morphism> {
        &self.differentials
    }

    pub fn component(&self, cat: &RepCategory, i: i64) -> Representation {
        self.components.get(&i).cloned().unwrap_or_else(|| cat.zero())
    }

    pub fn differential(&self, cat: &RepCategory, i: i64) -> Morphism {
        self.differentials
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(&self.component(cat, i), &self.component(cat, i + 1)))
    }

    /// Lowest and highest degree with a nonzero component.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.components.keys().next()?, *self.components.keys().next_back()?))
    }

    pub fn width(&self) -> usize {
        self.support().map_or(0, |(lo, hi)| (hi - lo + 1) as usize)
    }

    /// Checks component shapes, that every differential is a morphism of
    /// representations, and `d^{i+1} d^i = 0`.
    pub fn validate(&self, cat: &RepCategory) -> Result<()> {
        let f = cat.field();
        for (&i, x) in &self.components {
            cat.rep(x.dims().to_vec(), x.maps().to_vec())
                .map_err(|e| Error::Contract(format!("component in degree {i}: {e}")))?;
        }
        for (&i, d) in &self.differentials {
            if !self.components.contains_key(&i) && !self.components.contains_key(&(i + 1)) && d.is_zero() {
                continue;
            }
            let (src, tgt) = (self.component(cat, i), self.component(cat, i + 1));
            if d.maps.len() != cat.vertex_count() {
                return Err(Error::Contract(format!("differential from degree {i} has {} vertex maps", d.maps.len())));
            }
            for (v, m) in d.maps.iter().enumerate() {
                if m.rows() != tgt.dims()[v] || m.cols() != src.dims()[v] {
                    return Err(Error::Contract(format!(
                        "differential from degree {i}, vertex {}: shape {}x{} but components need {}x{}",
                        v + 1,
                        m.rows(),
                        m.cols(),
                        tgt.dims()[v],
                        src.dims()[v]
                    )));
                }
                if m.data().iter().any(|&e| e >= f.q()) {
                    return Err(Error::Contract(format!(
                        "differential from degree {i}, vertex {}: entry not reduced mod {}",
                        v + 1,
                        f.q()
                    )));
                }
            }
            if !d.intertwines(cat.quiver(), &src, &tgt, f) {
                let arrow = cat
                    .quiver()
                    .arrows()
                    .iter()
                    .enumerate()
                    .find(|(k, a)| d.maps[a.target].mul(&src.maps()[*k], f) != tgt.maps()[*k].mul(&d.maps[a.source], f))
                    .map_or(0, |(k, _)| k + 1);
                return Err(Error::Contract(format!(
                    "differential from degree {i} does not commute with arrow {arrow}"
                )));
            }
            if let Some(next) = self.differentials.get(&(i + 1)) {
                for (v, (a, b)) in d.maps.iter().zip(&next.maps).enumerate() {
                    if !b.mul(a, f).is_zero() {
                        return Err(Error::Contract(format!(
                            "d^{} d^{i} is nonzero at vertex {}",
                            i + 1,
                            v + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `X ⊕ Y` degreewise.
    pub fn direct_sum(&self, cat: &RepCategory, other: &BoundedComplex) -> BoundedComplex {
        let degrees: Vec<i64> = self.components.keys().chain(other.components.keys()).copied().collect();
        let mut out = BoundedComplex::zero();
        for &i in &degrees {
            out.components.insert(i, cat.direct_sum(&self.component(cat, i), &other.component(cat, i)));
        }
        for &i in &degrees {
            let (a, b) = (self.differential(cat, i), other.differential(cat, i));
            let maps = a.maps.iter().zip(&b.maps).map(|(x, y)| block_diagonal(x, y)).collect();
            let d = Morphism { maps };
            if !d.is_zero() {
                out.differentials.insert(i, d);
            }
        }
        out.components.retain(|_, r| !r.is_zero());
        out
    }

    /// Replaces `X^i` by an isomorphic copy via invertible per-vertex base
    /// changes `g^i` (new coordinates = `g^i` · old), adjusting differentials.
    pub fn change_basis(&self, cat: &RepCategory, bases: &BTreeMap<i64, Vec<FqMatrix>>) -> Result<BoundedComplex> {
        let f = cat.field();
        let mut out = self.clone();
        let inv = |i: i64| -> Option<Vec<FqMatrix>> {
            bases.get(&i).map(|g| g.iter().map(|m| m.inverse(f).expect("invertible base change")).collect())
        };
        for (&i, x) in &self.components {
            if let Some(g) = bases.get(&i) {
                out.components.insert(i, cat.change_basis(x, g)?);
            }
        }
        for (&i, d) in &self.differentials {
            let mut maps = d.maps.clone();
            if let Some(g) = bases.get(&(i + 1)) {
                maps = maps.iter().zip(g).map(|(m, g)| g.mul(m, f)).collect();
            }
            if let Some(gi) = inv(i) {
                maps = maps.iter().zip(&gi).map(|(m, g)| m.mul(g, f)).collect();
            }
            out.differentials.insert(i, Morphism { maps });
        }
        out.validate(cat)?;
        Ok(out)
    }

    fn degrees(&self) -> Vec<i64> {
        match self.support() {
            Some((lo, hi)) => (lo..=hi).collect(),
            None => Vec::new(),
        }
    }

    /// `Im d^i` and `Ker d^i` for every degree `i` in the support.
    pub fn images_kernels(&self, cat: &RepCategory) -> BTreeMap<i64, ImageKernel> {
        self.degrees()
            .into_iter()
            .map(|i| {
                let d = self.differential(cat, i);
                let image = cat.image(&d, &self.component(cat, i + 1));
                let kernel = cat.kernel(&d, &self.component(cat, i));
                (i, ImageKernel { image, kernel })
            })
            .collect()
    }

    /// `H^i = Ker d^i / Im d^{i-1}` as explicit representations.
    pub fn homology_reps(&self, cat: &RepCategory) -> Result<BTreeMap<i64, Representation>> {
        let f = cat.field();
        let ik = self.images_kernels(cat);
        let mut out = BTreeMap::new();
        for i in self.degrees() {
            let kernel = &ik[&i].kernel;
            let incoming = cat.image(&self.differential(cat, i - 1), &self.component(cat, i));
            let mut coords = Vec::new();
            for (kb, ib) in kernel.basis.iter().zip(&incoming.basis) {
                let mut cols = Vec::new();
                for c in 0..ib.cols() {
                    match linear_solve(kb, &ib.column(c), f)? {
                        Solution::Solved { particular, .. } => cols.push(particular),
                        Solution::NoSolution { .. } => {
                            return Err(Error::Contract(format!("image of d^{} is not inside Ker d^{i}", i - 1)))
                        }
                    }
                }
                coords.push(FqMatrix::from_columns(kb.cols(), &cols));
            }
            let h = cat.restrict(&kernel.sub, coords)?.quotient;
            if !h.is_zero() {
                out.insert(i, h);
            }
        }
        Ok(out)
    }

    /// Homology classes in the table; zero homology is omitted.
    pub fn homology(&self, ctx: &HallContext) -> Result<BTreeMap<i64, IsoClassId>> {
        self.homology_reps(ctx.category())?
            .into_iter()
            .map(|(i, h)| Ok((i, ctx.table().canonical_id(&h)?)))
            .collect()
    }

    pub fn is_acyclic(&self, cat: &RepCategory) -> Result<bool> {
        Ok(self.homology_reps(cat)?.is_empty())
    }

    /// Normal form: coefficient `prod_i <Im d^i, Ker d^i>`, torus factors
    /// `K_{Im d^i, i+1}`, stalks `U_{H^i, i}`. In the twisted algebra the
    /// coefficient additionally absorbs the conversion from the ◇-word to
    /// the *-word.
    pub fn reduce<S: Scalar>(&self, ctx: &HallContext, twisted: bool) -> Result<ReducedForm<S>> {
        let cat = ctx.category();
        let mut exponent = 0;
        let mut torus = TorusElement::unit();
        for (i, ik) in self.images_kernels(cat) {
            let (im, ker) = (ik.image.sub.class(), ik.kernel.sub.class());
            exponent += ctx.euler(&im, &ker);
            torus.add_at(i + 1, &im);
        }
        let word = NormalWord::new(torus, self.homology(ctx)?);
        if twisted {
            exponent -= ordering_exponent(ctx, &word);
        }
        Ok(ReducedForm {
            coefficient: S::q_pow(ctx.q(), exponent),
            word,
        })
    }

    /// For acyclic `K`, the factors `K_{Im d^i, i+1}` in ascending degree.
    pub fn acyclic_decompose(&self, cat: &RepCategory) -> Result<Vec<(DimVector, i64)>> {
        if !self.is_acyclic(cat)? {
            return Err(Error::Contract("complex is not acyclic".into()));
        }
        Ok(self
            .images_kernels(cat)
            .into_iter()
            .map(|(i, ik)| (ik.image.sub.class(), i + 1))
            .filter(|(alpha, _)| !homalg::is_zero(alpha))
            .collect())
    }
}

fn block_diagonal(a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
    let mut out = FqMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            out.set(r, c, a.get(r, c));
        }
    }
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            out.set(a.rows() + r, a.cols() + c, b.get(r, c));
        }
    }
    out
}

/// Dimension of the space of chain maps `X -> Y`.
pub fn hom_complex(cat: &RepCategory, x: &BoundedComplex, y: &BoundedComplex) -> usize {
    let f = cat.field();
    let n = cat.vertex_count();
    let degrees: Vec<i64> = x
        .components
        .keys()
        .filter(|i| y.components.contains_key(i))
        .copied()
        .collect();
    // unknown blocks (degree, vertex) of shape Y^i_v x X^i_v
    let mut blocks = Vec::new();
    let mut unknowns = 0;
    for &i in &degrees {
        for v in 0..n {
            let shape = (y.components[&i].dims()[v], x.components[&i].dims()[v]);
            blocks.push((i, v, unknowns, shape));
            unknowns += shape.0 * shape.1;
        }
    }
    let unit_map = |k: usize| -> BTreeMap<i64, Morphism> {
        let mut maps: BTreeMap<i64, Morphism> = degrees
            .iter()
            .map(|&i| (i, Morphism::zero(&x.components[&i], &y.components[&i])))
            .collect();
        for &(i, v, off, (r, c)) in &blocks {
            if (off..off + r * c).contains(&k) {
                let e = k - off;
                maps.get_mut(&i).unwrap().maps[v].set(e / c, e % c, 1);
            }
        }
        maps
    };
    let mut columns: Vec<Vec<u32>> = Vec::with_capacity(unknowns);
    let support: Vec<i64> = x.components.keys().chain(y.components.keys()).copied().collect();
    for k in 0..unknowns {
        let phi = unit_map(k);
        let get = |i: i64| -> Morphism {
            phi.get(&i)
                .cloned()
                .unwrap_or_else(|| Morphism::zero(&x.component(cat, i), &y.component(cat, i)))
        };
        let mut column = Vec::new();
        for (&i, g) in &phi {
            for (a_idx, a) in cat.quiver().arrows().iter().enumerate() {
                let lhs = g.maps[a.target].mul(&x.components[&i].maps()[a_idx], f);
                let rhs = y.components[&i].maps()[a_idx].mul(&g.maps[a.source], f);
                column.extend_from_slice(lhs.sub(&rhs, f).data());
            }
        }
        let (lo, hi) = (support.iter().min().copied().unwrap_or(0), support.iter().max().copied().unwrap_or(-1));
        for i in lo - 1..=hi {
            let (dx, dy) = (x.differential(cat, i), y.differential(cat, i));
            let (gi, gj) = (get(i), get(i + 1));
            for v in 0..n {
                let lhs = dy.maps[v].mul(&gi.maps[v], f);
                let rhs = gj.maps[v].mul(&dx.maps[v], f);
                column.extend_from_slice(lhs.sub(&rhs, f).data());
            }
        }
        columns.push(column);
    }
    if unknowns == 0 {
        return 0;
    }
    let rows = columns[0].len();
    let system = FqMatrix::from_columns(rows, &columns);
    unknowns - system.rank(f)
}
