use super::{Morphism, RepCategory, Representation};
use crate::error::{Error, Result};
use crate::ffla::{FqMatrix, Subspaces};

/// A subrepresentation together with its explicit sub- and quotient objects.
#[derive(Clone, Debug)]
pub struct Subrep {
    /// Per vertex, a `d_v x e_v` matrix whose columns span the subspace.
    pub basis: Vec<FqMatrix>,
    pub sub: Representation,
    pub quotient: Representation,
}

impl RepCategory {
    fn is_invariant(&self, m: &Representation, basis: &[FqMatrix]) -> bool {
        let f = self.field();
        self.quiver().arrows().iter().enumerate().all(|(i, a)| {
            let image = m.maps()[i].mul(&basis[a.source], f);
            let joined = basis[a.target].hstack(&image);
            joined.rank(f) == basis[a.target].cols()
        })
    }

    /// Sub and quotient for an arrow-invariant family of subspaces given by
    /// independent column bases. The quotient uses the complement obtained by
    /// appending standard vectors in index order.
    pub fn restrict(&self, m: &Representation, basis: Vec<FqMatrix>) -> Result<Subrep> {
        let f = self.field();
        if basis.len() != self.vertex_count() {
            return Err(Error::Contract("one subspace basis per vertex required".into()));
        }
        for (v, b) in basis.iter().enumerate() {
            if b.rows() != m.dims()[v] || b.rank(f) != b.cols() {
                return Err(Error::Contract(format!(
                    "basis at vertex {v} is not an independent family in F_q^{}",
                    m.dims()[v]
                )));
            }
        }
        if !self.is_invariant(m, &basis) {
            return Err(Error::Contract("subspaces are not closed under the arrow maps".into()));
        }
        let complements: Vec<FqMatrix> = basis.iter().map(|b| b.complement_columns(f)).collect();
        let inverses: Vec<FqMatrix> = basis
            .iter()
            .zip(&complements)
            .map(|(b, w)| b.hstack(w).inverse(f).expect("completed basis is invertible"))
            .collect();
        let sub_dims: Vec<usize> = basis.iter().map(FqMatrix::cols).collect();
        let quot_dims: Vec<usize> = complements.iter().map(FqMatrix::cols).collect();
        let mut sub_maps = Vec::new();
        let mut quot_maps = Vec::new();
        for (i, a) in self.quiver().arrows().iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let e_t = sub_dims[t];
            let on_sub = inverses[t].mul(&m.maps()[i].mul(&basis[s], f), f);
            sub_maps.push(on_sub.row_block(0, e_t));
            let on_complement = inverses[t].mul(&m.maps()[i].mul(&complements[s], f), f);
            quot_maps.push(on_complement.row_block(e_t, m.dims()[t]));
        }
        Ok(Subrep {
            basis,
            sub: Representation::from_parts(sub_dims, sub_maps),
            quotient: Representation::from_parts(quot_dims, quot_maps),
        })
    }

    /// All subrepresentations of `c` with dimension vector `e`.
    pub fn subreps_of_dim<'a>(&'a self, c: &'a Representation, e: &[usize]) -> SubrepIter<'a> {
        let choices: Vec<Vec<FqMatrix>> = if e.len() == c.dims().len()
            && e.iter().zip(c.dims()).all(|(x, d)| x <= d)
        {
            c.dims()
                .iter()
                .zip(e)
                .map(|(&d, &k)| Subspaces::new(d, k, self.field()).map(|m| m.transpose()).collect())
                .collect()
        } else {
            vec![Vec::new(); c.dims().len().max(1)]
        };
        SubrepIter {
            cat: self,
            rep: c,
            index: vec![0; choices.len()],
            done: choices.iter().any(Vec::is_empty),
            choices,
        }
    }

    /// Every subrepresentation of `c`, grouped by dimension vector in
    /// lexicographic order.
    pub fn subreps<'a>(&'a self, c: &'a Representation) -> impl Iterator<Item = Subrep> + 'a {
        dim_vectors_below(c.dims())
            .into_iter()
            .flat_map(move |e| self.subreps_of_dim(c, &e).collect::<Vec<_>>())
    }

    /// Kernel of `g : source -> target` as a subrepresentation of `source`.
    pub fn kernel(&self, g: &Morphism, source: &Representation) -> Subrep {
        let f = self.field();
        let basis = g.maps.iter().map(|m| m.kernel_matrix(f)).collect();
        self.restrict(source, basis).expect("kernel is a subrepresentation")
    }

    /// Image of `g` as a subrepresentation of `target`; its quotient is the cokernel.
    pub fn image(&self, g: &Morphism, target: &Representation) -> Subrep {
        let f = self.field();
        let basis = g.maps.iter().map(|m| m.column_space(f)).collect();
        self.restrict(target, basis).expect("image is a subrepresentation")
    }
}

/// All vectors `e` with `0 <= e <= bound` componentwise, lexicographic.
pub fn dim_vectors_below(bound: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

pub struct SubrepIter<'a> {
    cat: &'a RepCategory,
    rep: &'a Representation,
    choices: Vec<Vec<FqMatrix>>,
    index: Vec<usize>,
    done: bool,
}

impl Iterator for SubrepIter<'_> {
    type Item = Subrep;

    fn next(&mut self) -> Option<Subrep> {
        while !self.done {
            let basis: Vec<FqMatrix> = self
                .index
                .iter()
                .zip(&self.choices)
                .map(|(&i, c)| c[i].clone())
                .collect();
            self.done = true;
            for v in (0..self.index.len()).rev() {
                self.index[v] += 1;
                if self.index[v] < self.choices[v].len() {
                    self.done = false;
                    break;
                }
                self.index[v] = 0;
            }
            if self.cat.is_invariant(self.rep, &basis) {
                return Some(self.cat.restrict(self.rep, basis).expect("invariant basis"));
            }
        }
        None
    }
}
