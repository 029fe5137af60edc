use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Morphism, RepCategory, Representation};
use crate::error::{Error, Result};
use crate::ffla::{Field, FqMatrix};

/// Default cap on the number of Hom-space elements enumerated exhaustively.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

const ISO_PROBES: usize = 64;
const ISO_FALLBACK_PROBES: usize = 4096;
const ISO_SEED: u64 = 0x4a11_5eed;

/// `Hom(M, N)` as an explicit basis of intertwiners.
#[derive(Clone, Debug)]
pub struct HomSpace {
    field: Field,
    zero: Morphism,
    basis: Vec<Morphism>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Morphism] {
        &self.basis
    }

    /// `q^dim`, or `None` when it does not fit in a `u128`.
    pub fn size(&self) -> Option<u128> {
        (self.field.q() as u128).checked_pow(self.dim() as u32)
    }

    pub fn element(&self, coords: &[u32]) -> Morphism {
        assert_eq!(coords.len(), self.basis.len());
        let f = self.field;
        let mut acc = self.zero.clone();
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0 {
                acc = acc.add(&b.scale(*c, f), f);
            }
        }
        acc
    }

    /// Every element, in lexicographic order of coordinates. Fails with a
    /// resource error when the space has more than `cap` elements.
    pub fn enumerate(&self, cap: u128) -> Result<HomIter<'_>> {
        match self.size() {
            Some(n) if n <= cap => Ok(HomIter {
                space: self,
                coords: vec![0; self.dim()],
                done: false,
            }),
            _ => Err(Error::Resource(format!(
                "Hom space of dimension {} over F_{} exceeds enumeration cap {cap}",
                self.dim(),
                self.field.q()
            ))),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Morphism {
        let q = self.field.q();
        let coords: Vec<u32> = (0..self.dim()).map(|_| rng.gen_range(0..q)).collect();
        self.element(&coords)
    }
}

pub struct HomIter<'a> {
    space: &'a HomSpace,
    coords: Vec<u32>,
    done: bool,
}

impl Iterator for HomIter<'_> {
    type Item = Morphism;

    fn next(&mut self) -> Option<Morphism> {
        if self.done {
            return None;
        }
        let out = self.space.element(&self.coords);
        let q = self.space.field.q();
        self.done = true;
        for i in (0..self.coords.len()).rev() {
            self.coords[i] += 1;
            if self.coords[i] < q {
                self.done = false;
                break;
            }
            self.coords[i] = 0;
        }
        Some(out)
    }
}

/// Cheap isomorphism invariants used to pre-filter candidates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dims: Vec<usize>,
    pub end_dim: usize,
    pub hom_to_simples: Vec<usize>,
    pub hom_from_simples: Vec<usize>,
}

/// Result of an isomorphism test. `exact == false` means the search space
/// was too large to enumerate and no isomorphism was found by sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoDecision {
    pub isomorphic: bool,
    pub exact: bool,
}

impl RepCategory {
    /// Solves the intertwiner equations `f_t M_a = N_a f_s`.
    pub fn hom_space(&self, m: &Representation, n: &Representation) -> HomSpace {
        let f = self.field();
        let nv = self.vertex_count();
        let mut offsets = Vec::with_capacity(nv);
        let mut unknowns = 0;
        for v in 0..nv {
            offsets.push(unknowns);
            unknowns += n.dims()[v] * m.dims()[v];
        }
        let var = |v: usize, i: usize, j: usize| offsets[v] + i * m.dims()[v] + j;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (idx, a) in self.quiver().arrows().iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let ma = &m.maps()[idx];
            let na = &n.maps()[idx];
            for i in 0..n.dims()[t] {
                for j in 0..m.dims()[s] {
                    let mut row = vec![0u32; unknowns];
                    for k in 0..m.dims()[t] {
                        let c = ma.get(k, j);
                        if c != 0 {
                            let x = var(t, i, k);
                            row[x] = f.add(row[x], c);
                        }
                    }
                    for k in 0..n.dims()[s] {
                        let c = na.get(i, k);
                        if c != 0 {
                            let x = var(s, k, j);
                            row[x] = f.sub(row[x], c);
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let system = FqMatrix::from_rows(&rows, unknowns, f).expect("residues in range");
        let zero = Morphism::zero(m, n);
        let basis = system
            .kernel_basis(f)
            .into_iter()
            .map(|v| {
                let maps = (0..nv)
                    .map(|w| {
                        let (r, c) = (n.dims()[w], m.dims()[w]);
                        let data = v[offsets[w]..offsets[w] + r * c].to_vec();
                        FqMatrix::from_data(r, c, data, f).expect("kernel entries in range")
                    })
                    .collect();
                Morphism { maps }
            })
            .collect();
        HomSpace {
            field: f,
            zero,
            basis,
        }
    }

    pub fn hom_dim(&self, m: &Representation, n: &Representation) -> usize {
        self.hom_space(m, n).dim()
    }

    /// `|Aut(M)|` by enumerating `End(M)`.
    pub fn aut_order(&self, m: &Representation, cap: u128) -> Result<u128> {
        let end = self.hom_space(m, m);
        let f = self.field();
        let count = end.enumerate(cap)?.filter(|g| g.is_invertible(f)).count();
        Ok(count as u128)
    }

    pub fn fingerprint(&self, m: &Representation) -> Fingerprint {
        let simples: Vec<Representation> = (0..self.vertex_count()).map(|i| self.simple(i)).collect();
        Fingerprint {
            dims: m.dims().to_vec(),
            end_dim: self.hom_dim(m, m),
            hom_to_simples: simples.iter().map(|s| self.hom_dim(m, s)).collect(),
            hom_from_simples: simples.iter().map(|s| self.hom_dim(s, m)).collect(),
        }
    }

    pub fn is_isomorphic(&self, m: &Representation, n: &Representation) -> bool {
        self.iso_decision(m, n, DEFAULT_ENUMERATION_CAP).isomorphic
    }

    /// Fingerprint filter, then a search for an invertible element of
    /// `Hom(M, N)`: deterministic random probes first, exhaustive enumeration
    /// when the space has at most `cap` elements, sampling beyond that.
    pub fn iso_decision(&self, m: &Representation, n: &Representation, cap: u128) -> IsoDecision {
        let no = IsoDecision {
            isomorphic: false,
            exact: true,
        };
        let yes = IsoDecision {
            isomorphic: true,
            exact: true,
        };
        if m.dims() != n.dims() {
            return no;
        }
        if m == n {
            return yes;
        }
        if self.fingerprint(m) != self.fingerprint(n) {
            return no;
        }
        let f = self.field();
        let hom = self.hom_space(m, n);
        let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED);
        for _ in 0..ISO_PROBES {
            if hom.sample(&mut rng).is_invertible(f) {
                return yes;
            }
        }
        if let Ok(iter) = hom.enumerate(cap) {
            let found = iter.into_iter().any(|g| g.is_invertible(f));
            return IsoDecision {
                isomorphic: found,
                exact: true,
            };
        }
        for _ in 0..ISO_FALLBACK_PROBES {
            if hom.sample(&mut rng).is_invertible(f) {
                return yes;
            }
        }
        IsoDecision {
            isomorphic: false,
            exact: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiverrep::Quiver;

    fn a2(q: u32) -> RepCategory {
        RepCategory::new(Quiver::linear(2), Field::new(q).unwrap())
    }

    fn proj(cat: &RepCategory) -> Representation {
        cat.rep(vec![1, 1], vec![FqMatrix::identity(1)]).unwrap()
    }

    #[test]
    fn hom_examples() {
        let cat = a2(2);
        let p = proj(&cat);
        let s1 = cat.simple(0);
        let s2 = cat.simple(1);
        assert_eq!(cat.hom_dim(&p, &s2), 0);
        assert_eq!(cat.hom_dim(&s2, &p), 1);
        assert_eq!(cat.hom_dim(&s1, &s1), 1);
        assert_eq!(cat.hom_dim(&p, &s1), 1);
        assert_eq!(cat.hom_dim(&s1, &p), 0);
        for g in cat.hom_space(&s2, &p).basis() {
            assert!(g.intertwines(cat.quiver(), &s2, &p, cat.field()));
        }
    }

    #[test]
    fn aut_examples() {
        let point = RepCategory::new(Quiver::point(), Field::new(2).unwrap());
        let s = point.simple(0);
        let ss = point.direct_sum(&s, &s);
        assert_eq!(point.aut_order(&s, DEFAULT_ENUMERATION_CAP).unwrap(), 1);
        assert_eq!(point.aut_order(&ss, DEFAULT_ENUMERATION_CAP).unwrap(), 6);
        assert_eq!(point.aut_order(&point.zero(), DEFAULT_ENUMERATION_CAP).unwrap(), 1);
        for q in [3, 5] {
            let cat = a2(q);
            assert_eq!(cat.aut_order(&cat.simple(1), DEFAULT_ENUMERATION_CAP).unwrap(), (q - 1) as u128);
        }
        assert!(matches!(point.aut_order(&ss, 10), Err(Error::Resource(_))));
    }

    #[test]
    fn iso_examples() {
        let cat = a2(2);
        let p = proj(&cat);
        let split = cat.direct_sum(&cat.simple(0), &cat.simple(1));
        assert!(cat.is_isomorphic(&p, &p));
        assert!(!cat.is_isomorphic(&split, &p));
        assert_eq!(cat.fingerprint(&split).end_dim, 2);
        assert_eq!(cat.fingerprint(&p).end_dim, 1);

        let f3 = Field::new(3).unwrap();
        let cat3 = a2(3);
        let one = cat3.rep(vec![1, 1], vec![FqMatrix::identity(1)]).unwrap();
        let two = cat3
            .rep(vec![1, 1], vec![FqMatrix::from_data(1, 1, vec![2], f3).unwrap()])
            .unwrap();
        let d = cat3.iso_decision(&one, &two, DEFAULT_ENUMERATION_CAP);
        assert!(d.isomorphic && d.exact);
    }

    #[test]
    fn hom_enumeration_covers_space() {
        let cat = a2(3);
        let p = proj(&cat);
        let m = cat.direct_sum(&p, &cat.simple(1));
        let hom = cat.hom_space(&m, &m);
        let all: Vec<_> = hom.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().collect();
        assert_eq!(all.len() as u128, hom.size().unwrap());
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }
}
