use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{dim_vectors_below, Fingerprint, RepCategory, Representation, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::ffla::{Field, FqMatrix};

/// Identifier of an isomorphism class inside one [`IsoClassTable`].
/// Id 0 is always the zero object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IsoClassId(pub u32);

impl IsoClassId {
    pub const ZERO: IsoClassId = IsoClassId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for IsoClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClass {
    pub id: IsoClassId,
    pub rep: Representation,
    pub aut: u128,
    pub fingerprint: Fingerprint,
    /// Number of arrow-map tuples in the class; absent for tables loaded
    /// from representatives only.
    pub orbit_size: Option<u128>,
}

impl IsoClass {
    pub fn dims(&self) -> &[usize] {
        self.rep.dims()
    }

    pub fn end_dim(&self) -> usize {
        self.fingerprint.end_dim
    }
}

/// Resource guards for table construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationLimits {
    /// Largest number of arrow-map tuples enumerated for one dimension vector.
    pub max_tuples_per_dim: u128,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_tuples_per_dim: 1 << 24,
        }
    }
}

/// All isomorphism classes of representations whose dimension vector lies
/// below the per-vertex caps (and optional total-dimension cap).
#[derive(Clone, Debug)]
pub struct IsoClassTable {
    cat: RepCategory,
    caps: Vec<usize>,
    total_cap: Option<usize>,
    classes: Vec<IsoClass>,
    by_dims: HashMap<Vec<usize>, Vec<IsoClassId>>,
    by_fingerprint: HashMap<Fingerprint, Vec<IsoClassId>>,
    orbit_labels: Option<HashMap<Vec<usize>, Vec<u32>>>,
    decompositions: Vec<Vec<(IsoClassId, usize)>>,
}

/// Number of invertible `n x n` matrices over `F_q`.
pub fn gl_order(n: usize, q: u32) -> Option<u128> {
    let q = q as u128;
    let qn = q.checked_pow(n as u32)?;
    (0..n).try_fold(1u128, |acc, i| acc.checked_mul(qn - q.pow(i as u32)))
}

/// Tuple layout for one dimension vector: arrow matrices flattened in
/// arrow order, row-major, the first entry most significant.
struct Layout {
    dims: Vec<usize>,
    shapes: Vec<(usize, usize, usize)>, // (offset, rows, cols)
    len: usize,
}

impl Layout {
    fn new(cat: &RepCategory, dims: &[usize]) -> Self {
        let mut shapes = Vec::new();
        let mut off = 0;
        for a in cat.quiver().arrows() {
            let (r, c) = (dims[a.target], dims[a.source]);
            shapes.push((off, r, c));
            off += r * c;
        }
        Layout {
            dims: dims.to_vec(),
            shapes,
            len: off,
        }
    }

    fn encode(&self, entries: &[u32], q: u32) -> usize {
        entries.iter().fold(0usize, |acc, &x| acc * q as usize + x as usize)
    }

    fn decode(&self, mut code: usize, q: u32, out: &mut [u32]) {
        for slot in out.iter_mut().rev() {
            *slot = (code % q as usize) as u32;
            code /= q as usize;
        }
    }

    fn flatten(&self, rep: &Representation) -> Vec<u32> {
        rep.maps().iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    fn to_rep(&self, entries: &[u32], field: Field) -> Representation {
        let maps = self
            .shapes
            .iter()
            .map(|&(off, r, c)| {
                FqMatrix::from_data(r, c, entries[off..off + r * c].to_vec(), field)
                    .expect("entries are residues")
            })
            .collect();
        Representation::from_parts(self.dims.clone(), maps)
    }
}

/// Generator of `prod_v GL(d_v)` acting on arrow-map tuples.
#[derive(Clone, Copy)]
enum Generator {
    /// `I + E_ij` at a vertex.
    Transvection { vertex: usize, i: usize, j: usize },
    /// `diag(w, 1, ..., 1)` at a vertex, `w` a primitive root.
    Scale { vertex: usize },
}

fn generators(dims: &[usize], field: Field) -> Vec<Generator> {
    let mut gens = Vec::new();
    for (v, &d) in dims.iter().enumerate() {
        if d >= 1 && field.q() > 2 {
            gens.push(Generator::Scale { vertex: v });
        }
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    gens.push(Generator::Transvection { vertex: v, i, j });
                }
            }
        }
    }
    gens
}

fn act(cat: &RepCategory, layout: &Layout, g: Generator, entries: &mut [u32]) {
    let f = cat.field();
    for (idx, a) in cat.quiver().arrows().iter().enumerate() {
        let (off, rows, cols) = layout.shapes[idx];
        let at = |r: usize, c: usize| off + r * cols + c;
        match g {
            Generator::Transvection { vertex, i, j } => {
                // g M: row_i += row_j
                if a.target == vertex {
                    for c in 0..cols {
                        entries[at(i, c)] = f.add(entries[at(i, c)], entries[at(j, c)]);
                    }
                }
                // M g^{-1}: col_j -= col_i
                if a.source == vertex {
                    for r in 0..rows {
                        entries[at(r, j)] = f.sub(entries[at(r, j)], entries[at(r, i)]);
                    }
                }
            }
            Generator::Scale { vertex } => {
                let w = f.primitive_root();
                let w_inv = f.inv(w).expect("primitive root is nonzero");
                if a.target == vertex {
                    for c in 0..cols {
                        entries[at(0, c)] = f.mul(entries[at(0, c)], w);
                    }
                }
                if a.source == vertex {
                    for r in 0..rows {
                        entries[at(r, 0)] = f.mul(entries[at(r, 0)], w_inv);
                    }
                }
            }
        }
    }
}

/// All dimension vectors within the bounds, ordered by total dimension and
/// then reverse-lexicographically (so `e_1, e_2, ...` come in vertex order).
pub fn bounded_dim_vectors(caps: &[usize], total_cap: Option<usize>) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = dim_vectors_below(caps)
        .into_iter()
        .filter(|d| total_cap.is_none_or(|t| d.iter().sum::<usize>() <= t))
        .collect();
    all.sort_by_key(|d| (d.iter().sum::<usize>(), std::cmp::Reverse(d.clone())));
    all
}

impl IsoClassTable {
    /// Enumerates every arrow-map tuple for every bounded dimension vector and
    /// groups the tuples into orbits under `prod_v GL(d_v)` by breadth-first
    /// search over elementary generators. Each orbit is one class; the
    /// representative is its first tuple in enumeration order and
    /// `|Aut| = |GL_d| / |orbit|`.
    pub fn enumerate(
        cat: RepCategory,
        caps: Vec<usize>,
        total_cap: Option<usize>,
        limits: EnumerationLimits,
    ) -> Result<Self> {
        if caps.len() != cat.vertex_count() {
            return Err(Error::Construction(format!(
                "{} caps for {} vertices",
                caps.len(),
                cat.vertex_count()
            )));
        }
        let field = cat.field();
        let q = field.q();
        let mut classes = Vec::new();
        let mut labels_by_dims = HashMap::new();
        for dims in bounded_dim_vectors(&caps, total_cap) {
            let layout = Layout::new(&cat, &dims);
            let count = (q as u128)
                .checked_pow(layout.len as u32)
                .filter(|&n| n <= limits.max_tuples_per_dim)
                .ok_or_else(|| {
                    Error::Resource(format!(
                        "dimension vector {dims:?} has {q}^{} arrow-map tuples, above the limit {}",
                        layout.len, limits.max_tuples_per_dim
                    ))
                })? as usize;
            let gl: u128 = dims
                .iter()
                .map(|&d| gl_order(d, q))
                .try_fold(1u128, |acc, g| g.and_then(|g| acc.checked_mul(g)))
                .ok_or_else(|| Error::Resource(format!("|GL| overflows for {dims:?}")))?;
            let gens = generators(&dims, field);
            let mut labels = vec![u32::MAX; count];
            let mut entries = vec![0u32; layout.len];
            let mut queue = VecDeque::new();
            for start in 0..count {
                if labels[start] != u32::MAX {
                    continue;
                }
                let id = classes.len() as u32;
                labels[start] = id;
                queue.push_back(start);
                let mut orbit = 0u128;
                while let Some(code) = queue.pop_front() {
                    orbit += 1;
                    for &g in &gens {
                        layout.decode(code, q, &mut entries);
                        act(&cat, &layout, g, &mut entries);
                        let next = layout.encode(&entries, q);
                        if labels[next] == u32::MAX {
                            labels[next] = id;
                            queue.push_back(next);
                        }
                    }
                }
                if gl % orbit != 0 {
                    return Err(Error::Consistency(format!(
                        "orbit of size {orbit} does not divide |GL| = {gl}"
                    )));
                }
                layout.decode(start, q, &mut entries);
                let rep = layout.to_rep(&entries, field);
                let fingerprint = cat.fingerprint(&rep);
                classes.push(IsoClass {
                    id: IsoClassId(id),
                    rep,
                    aut: gl / orbit,
                    fingerprint,
                    orbit_size: Some(orbit),
                });
            }
            labels_by_dims.insert(dims, labels);
        }
        Self::assemble(cat, caps, total_cap, classes, Some(labels_by_dims))
    }

    /// Rebuilds a table from stored representatives (e.g. a cache file).
    /// Lookups then go through fingerprints and isomorphism search.
    pub fn from_representatives(
        cat: RepCategory,
        caps: Vec<usize>,
        total_cap: Option<usize>,
        reps: Vec<(Representation, u128)>,
    ) -> Result<Self> {
        let mut classes = Vec::with_capacity(reps.len());
        for (i, (rep, aut)) in reps.into_iter().enumerate() {
            let rep = cat.rep(rep.dims().to_vec(), rep.maps().to_vec())?;
            let fingerprint = cat.fingerprint(&rep);
            classes.push(IsoClass {
                id: IsoClassId(i as u32),
                rep,
                aut,
                fingerprint,
                orbit_size: None,
            });
        }
        match classes.first() {
            Some(c) if c.rep.is_zero() => {}
            _ => return Err(Error::Construction("class 0 must be the zero object".into())),
        }
        Self::assemble(cat, caps, total_cap, classes, None)
    }

    fn assemble(
        cat: RepCategory,
        caps: Vec<usize>,
        total_cap: Option<usize>,
        classes: Vec<IsoClass>,
        orbit_labels: Option<HashMap<Vec<usize>, Vec<u32>>>,
    ) -> Result<Self> {
        let mut by_dims: HashMap<Vec<usize>, Vec<IsoClassId>> = HashMap::new();
        let mut by_fingerprint: HashMap<Fingerprint, Vec<IsoClassId>> = HashMap::new();
        for c in &classes {
            by_dims.entry(c.dims().to_vec()).or_default().push(c.id);
            by_fingerprint.entry(c.fingerprint.clone()).or_default().push(c.id);
        }
        let mut table = IsoClassTable {
            cat,
            caps,
            total_cap,
            classes,
            by_dims,
            by_fingerprint,
            orbit_labels,
            decompositions: Vec::new(),
        };
        table.decompositions = table.compute_decompositions()?;
        Ok(table)
    }

    /// Krull-Schmidt decomposition of every class, found by matching each
    /// class against direct sums of two smaller nonzero classes.
    fn compute_decompositions(&self) -> Result<Vec<Vec<(IsoClassId, usize)>>> {
        let mut out: Vec<Vec<(IsoClassId, usize)>> = Vec::with_capacity(self.classes.len());
        let mut sums: HashMap<IsoClassId, (IsoClassId, IsoClassId)> = HashMap::new();
        for x in self.classes.iter().filter(|c| !c.rep.is_zero()) {
            for y in self.classes.iter().filter(|c| !c.rep.is_zero() && c.id <= x.id) {
                let dims: Vec<usize> = x.dims().iter().zip(y.dims()).map(|(a, b)| a + b).collect();
                if !self.contains_dims(&dims) {
                    continue;
                }
                let sum = self.canonical_id(&self.cat.direct_sum(&x.rep, &y.rep))?;
                sums.entry(sum).or_insert((x.id, y.id));
            }
        }
        for c in &self.classes {
            let parts = if c.rep.is_zero() {
                Vec::new()
            } else if let Some(&(x, y)) = sums.get(&c.id) {
                let mut merged: Vec<(IsoClassId, usize)> = out[x.index()].clone();
                for &(id, k) in &out[y.index()] {
                    match merged.iter_mut().find(|(m, _)| *m == id) {
                        Some(entry) => entry.1 += k,
                        None => merged.push((id, k)),
                    }
                }
                merged.sort();
                merged
            } else {
                vec![(c.id, 1)]
            };
            out.push(parts);
        }
        Ok(out)
    }

    pub fn category(&self) -> &RepCategory {
        &self.cat
    }

    pub fn field(&self) -> Field {
        self.cat.field()
    }

    pub fn q(&self) -> u32 {
        self.cat.q()
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn total_cap(&self) -> Option<usize> {
        self.total_cap
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[IsoClass] {
        &self.classes
    }

    pub fn ids(&self) -> impl Iterator<Item = IsoClassId> + '_ {
        self.classes.iter().map(|c| c.id)
    }

    pub fn class(&self, id: IsoClassId) -> Result<&IsoClass> {
        self.classes
            .get(id.index())
            .ok_or_else(|| Error::Bound(format!("no iso class {id} in a table of {}", self.len())))
    }

    /// Unchecked accessor for ids that came from this table.
    pub fn get(&self, id: IsoClassId) -> &IsoClass {
        &self.classes[id.index()]
    }

    pub fn rep(&self, id: IsoClassId) -> &Representation {
        &self.get(id).rep
    }

    pub fn dims(&self, id: IsoClassId) -> &[usize] {
        self.get(id).dims()
    }

    pub fn aut(&self, id: IsoClassId) -> u128 {
        self.get(id).aut
    }

    /// Grothendieck class (dimension vector) as signed integers.
    pub fn class_vector(&self, id: IsoClassId) -> Vec<i64> {
        self.dims(id).iter().map(|&d| d as i64).collect()
    }

    /// Whether the orbit index is present (lookups are then exact and O(1)).
    pub fn has_orbit_index(&self) -> bool {
        self.orbit_labels.is_some()
    }

    pub fn contains_dims(&self, dims: &[usize]) -> bool {
        dims.len() == self.caps.len()
            && dims.iter().zip(&self.caps).all(|(d, c)| d <= c)
            && self.total_cap.is_none_or(|t| dims.iter().sum::<usize>() <= t)
    }

    pub fn ids_with_dims(&self, dims: &[usize]) -> &[IsoClassId] {
        self.by_dims.get(dims).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn candidates(&self, fingerprint: &Fingerprint) -> &[IsoClassId] {
        self.by_fingerprint
            .get(fingerprint)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// The class of `m`.
    pub fn canonical_id(&self, m: &Representation) -> Result<IsoClassId> {
        if !self.contains_dims(m.dims()) {
            return Err(Error::Bound(format!(
                "dimension vector {:?} is outside the table bounds {:?}",
                m.dims(),
                self.caps
            )));
        }
        if let Some(labels) = &self.orbit_labels {
            let layout = Layout::new(&self.cat, m.dims());
            let code = layout.encode(&layout.flatten(m), self.q());
            return Ok(IsoClassId(labels[m.dims()][code]));
        }
        let fp = self.cat.fingerprint(m);
        for &id in self.candidates(&fp) {
            let d = self.cat.iso_decision(m, self.rep(id), DEFAULT_ENUMERATION_CAP);
            if d.isomorphic {
                return Ok(id);
            }
        }
        Err(Error::Consistency(format!(
            "no class in the table matches a representation with fingerprint {fp:?}"
        )))
    }

    /// Indecomposable summands with multiplicities, sorted by id.
    pub fn decomposition(&self, id: IsoClassId) -> &[(IsoClassId, usize)] {
        &self.decompositions[id.index()]
    }

    pub fn is_indecomposable(&self, id: IsoClassId) -> bool {
        matches!(self.decomposition(id), [(x, 1)] if *x == id)
    }

    /// Class with the given multiset of indecomposable summands.
    pub fn class_with_decomposition(&self, parts: &[(IsoClassId, usize)]) -> Option<IsoClassId> {
        let mut want: Vec<(IsoClassId, usize)> = Vec::new();
        for &(id, k) in parts.iter().filter(|(_, k)| *k > 0) {
            match want.iter_mut().find(|(m, _)| *m == id) {
                Some(e) => e.1 += k,
                None => want.push((id, k)),
            }
        }
        want.sort();
        self.ids().find(|&id| self.decomposition(id) == want.as_slice())
    }
}
