use serde::{Deserialize, Serialize};

use super::Quiver;
use crate::error::{Error, Result};
use crate::ffla::{Field, FqMatrix};

/// A finite-dimensional representation: one vector space `F_q^{d_v}` per
/// vertex and one matrix per arrow, of shape `d_target x d_source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Representation {
    dims: Vec<usize>,
    maps: Vec<FqMatrix>,
}

impl Representation {
    pub fn new(quiver: &Quiver, dims: Vec<usize>, maps: Vec<FqMatrix>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::Construction(format!(
                "dimension vector has {} entries for {} vertices",
                dims.len(),
                quiver.vertex_count()
            )));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::Construction(format!(
                "{} arrow maps for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (i, (a, m)) in quiver.arrows().iter().zip(&maps).enumerate() {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(Error::Construction(format!(
                    "arrow {i} map is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[a.target],
                    dims[a.source]
                )));
            }
        }
        Ok(Representation { dims, maps })
    }

    /// Constructor for callers that have already validated shapes.
    pub(crate) fn from_parts(dims: Vec<usize>, maps: Vec<FqMatrix>) -> Self {
        Representation { dims, maps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[FqMatrix] {
        &self.maps
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Dimension vector as a signed Grothendieck-group vector.
    pub fn class(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }
}

/// A morphism of representations: one matrix per vertex, `f_v : M_v -> N_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Morphism {
    pub maps: Vec<FqMatrix>,
}

impl Morphism {
    pub fn zero(source: &Representation, target: &Representation) -> Self {
        Morphism {
            maps: source
                .dims()
                .iter()
                .zip(target.dims())
                .map(|(&s, &t)| FqMatrix::zeros(t, s))
                .collect(),
        }
    }

    pub fn identity(m: &Representation) -> Self {
        Morphism {
            maps: m.dims().iter().map(|&d| FqMatrix::identity(d)).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism, field: Field) -> Morphism {
        Morphism {
            maps: self
                .maps
                .iter()
                .zip(&other.maps)
                .map(|(f, g)| g.mul(f, field))
                .collect(),
        }
    }

    pub fn add(&self, other: &Morphism, field: Field) -> Morphism {
        Morphism {
            maps: self
                .maps
                .iter()
                .zip(&other.maps)
                .map(|(f, g)| f.add(g, field))
                .collect(),
        }
    }

    pub fn scale(&self, s: u32, field: Field) -> Morphism {
        Morphism {
            maps: self.maps.iter().map(|f| f.scale(s, field)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(FqMatrix::is_zero)
    }

    pub fn is_injective(&self, field: Field) -> bool {
        self.maps.iter().all(|f| f.rank(field) == f.cols())
    }

    pub fn is_invertible(&self, field: Field) -> bool {
        self.maps.iter().all(|f| f.is_invertible(field))
    }

    /// Checks `f_t · M_a = N_a · f_s` for every arrow.
    pub fn intertwines(
        &self,
        quiver: &Quiver,
        source: &Representation,
        target: &Representation,
        field: Field,
    ) -> bool {
        if self.maps.len() != quiver.vertex_count() {
            return false;
        }
        for (v, f) in self.maps.iter().enumerate() {
            if f.rows() != target.dims()[v] || f.cols() != source.dims()[v] {
                return false;
            }
        }
        quiver.arrows().iter().enumerate().all(|(i, a)| {
            let left = self.maps[a.target].mul(&source.maps()[i], field);
            let right = target.maps()[i].mul(&self.maps[a.source], field);
            left == right
        })
    }
}

/// The category of representations of one quiver over one prime field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepCategory {
    quiver: Quiver,
    field: Field,
}

impl RepCategory {
    pub fn new(quiver: Quiver, field: Field) -> Self {
        RepCategory { quiver, field }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    /// Builds and validates a representation, also checking entry ranges.
    pub fn rep(&self, dims: Vec<usize>, maps: Vec<FqMatrix>) -> Result<Representation> {
        for m in &maps {
            if let Some(bad) = m.data().iter().find(|&&x| x >= self.q()) {
                return Err(Error::Construction(format!(
                    "entry {bad} is not a residue mod {}",
                    self.q()
                )));
            }
        }
        Representation::new(&self.quiver, dims, maps)
    }

    /// Representation with all arrow maps zero.
    pub fn semisimple(&self, dims: Vec<usize>) -> Representation {
        let maps = self
            .quiver
            .arrows()
            .iter()
            .map(|a| FqMatrix::zeros(dims[a.target], dims[a.source]))
            .collect();
        Representation::from_parts(dims, maps)
    }

    pub fn zero(&self) -> Representation {
        self.semisimple(vec![0; self.vertex_count()])
    }

    /// The simple `S_i` at zero-based vertex `i`.
    pub fn simple(&self, i: usize) -> Representation {
        let mut dims = vec![0; self.vertex_count()];
        dims[i] = 1;
        self.semisimple(dims)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, m: &Representation, n: &Representation) -> Representation {
        let dims: Vec<usize> = m.dims().iter().zip(n.dims()).map(|(a, b)| a + b).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let (ma, na) = (&m.maps()[i], &n.maps()[i]);
                let mut block = FqMatrix::zeros(dims[a.target], dims[a.source]);
                for r in 0..ma.rows() {
                    for c in 0..ma.cols() {
                        block.set(r, c, ma.get(r, c));
                    }
                }
                for r in 0..na.rows() {
                    for c in 0..na.cols() {
                        block.set(ma.rows() + r, ma.cols() + c, na.get(r, c));
                    }
                }
                block
            })
            .collect();
        Representation::from_parts(dims, maps)
    }

    /// Transports `m` along a change of basis `g_v` at each vertex:
    /// arrow maps become `g_t · M_a · g_s^{-1}`.
    pub fn change_basis(&self, m: &Representation, basis: &[FqMatrix]) -> Result<Representation> {
        let f = self.field;
        let inverses: Vec<FqMatrix> = basis
            .iter()
            .map(|g| {
                g.inverse(f)
                    .ok_or_else(|| Error::Contract("change of basis is not invertible".into()))
            })
            .collect::<Result<_>>()?;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| basis[a.target].mul(&m.maps()[i], f).mul(&inverses[a.source], f))
            .collect();
        Ok(Representation::from_parts(m.dims().to_vec(), maps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(q: u32) -> RepCategory {
        RepCategory::new(Quiver::linear(2), Field::new(q).unwrap())
    }

    #[test]
    fn direct_sums() {
        let cat = a2(2);
        let s1 = cat.simple(0);
        let s2 = cat.simple(1);
        let sum = cat.direct_sum(&s1, &s2);
        assert_eq!(sum.dims(), &[1, 1]);
        assert!(sum.maps()[0].is_zero());
        assert_eq!(cat.direct_sum(&sum, &cat.zero()), sum);
    }

    #[test]
    fn shape_validation() {
        let cat = a2(3);
        assert!(cat.rep(vec![1, 1], vec![FqMatrix::identity(1)]).is_ok());
        assert!(cat.rep(vec![1, 2], vec![FqMatrix::identity(1)]).is_err());
        assert!(cat.rep(vec![1, 1], vec![]).is_err());
        assert!(cat.rep(vec![1], vec![FqMatrix::identity(1)]).is_err());
        let bad = FqMatrix::from_data(1, 1, vec![2], Field::new(3).unwrap()).unwrap();
        assert!(cat.rep(vec![1, 1], vec![bad.clone()]).is_ok());
        assert!(a2(2).rep(vec![1, 1], vec![bad]).is_err());
    }

    #[test]
    fn morphism_checks() {
        let cat = a2(2);
        let p = cat.rep(vec![1, 1], vec![FqMatrix::identity(1)]).unwrap();
        let s2 = cat.simple(1);
        // inclusion S2 -> P at vertex 2
        let inc = Morphism {
            maps: vec![FqMatrix::zeros(1, 0), FqMatrix::identity(1)],
        };
        assert!(inc.intertwines(cat.quiver(), &s2, &p, cat.field()));
        // a map P -> S2 that is nonzero at vertex 2 does not commute with the arrow
        let bad = Morphism {
            maps: vec![FqMatrix::zeros(0, 1), FqMatrix::identity(1)],
        };
        assert!(!bad.intertwines(cat.quiver(), &p, &s2, cat.field()));
        assert!(inc.is_injective(cat.field()));
    }
}
