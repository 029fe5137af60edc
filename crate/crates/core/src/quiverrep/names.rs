use std::collections::HashMap;

use super::{IsoClassId, IsoClassTable};
use crate::error::{Error, Result};

/// Human-readable aliases for the classes of a table.
///
/// Indecomposables are named `S<i>` (simple), `P<i>` (projective cover of
/// `S<i>`), `I<i>` (injective hull of `S<i>`) or `M<k>` otherwise; vertex
/// numbers are one-based. Decomposable classes are named by their summands,
/// e.g. `S1+S2` or `S^2`. A lone non-simple projective (injective) is also
/// reachable as `P` (`I`).
#[derive(Clone, Debug)]
pub struct ClassNames {
    names: Vec<String>,
    lookup: HashMap<String, IsoClassId>,
}

impl ClassNames {
    pub fn new(table: &IsoClassTable) -> Self {
        let cat = table.category();
        let n = cat.vertex_count();
        let simples: Vec<_> = (0..n).map(|i| cat.simple(i)).collect();
        let unit = |i: usize| -> Vec<i64> { (0..n).map(|j| i64::from(i == j)).collect() };
        let ext1 = |hom: usize, e: i64| hom as i64 - e;

        let mut names = vec![String::new(); table.len()];
        let mut lookup = HashMap::new();
        let mut projectives = Vec::new();
        let mut injectives = Vec::new();
        let mut others = 0;
        for id in table.ids().filter(|&id| table.is_indecomposable(id)) {
            let m = table.rep(id);
            let class = m.class();
            if let Some(i) = (0..n).find(|&i| class == unit(i)) {
                names[id.index()] = if n == 1 { "S".into() } else { format!("S{}", i + 1) };
                continue;
            }
            let q = cat.quiver();
            let top = (0..n).find(|&j| cat.hom_dim(m, &simples[j]) > 0);
            let socle = (0..n).find(|&j| cat.hom_dim(&simples[j], m) > 0);
            let projective =
                (0..n).all(|j| ext1(cat.hom_dim(m, &simples[j]), q.euler_form(&class, &unit(j))) == 0);
            let injective =
                (0..n).all(|j| ext1(cat.hom_dim(&simples[j], m), q.euler_form(&unit(j), &class)) == 0);
            let mut aliases = Vec::new();
            if projective {
                aliases.push(format!("P{}", top.map_or(0, |t| t + 1)));
                projectives.push(id);
            }
            if injective {
                aliases.push(format!("I{}", socle.map_or(0, |s| s + 1)));
                injectives.push(id);
            }
            if aliases.is_empty() {
                others += 1;
                aliases.push(format!("M{others}"));
            }
            names[id.index()] = aliases[0].clone();
            for a in aliases.into_iter().skip(1) {
                lookup.entry(a).or_insert(id);
            }
        }
        if let [p] = projectives[..] {
            lookup.entry("P".into()).or_insert(p);
        }
        if let [i] = injectives[..] {
            lookup.entry("I".into()).or_insert(i);
        }
        for id in table.ids() {
            if id.is_zero() {
                names[0] = "0".into();
            } else if !table.is_indecomposable(id) {
                names[id.index()] = table
                    .decomposition(id)
                    .iter()
                    .map(|&(part, k)| match k {
                        1 => names[part.index()].clone(),
                        k => format!("{}^{k}", names[part.index()]),
                    })
                    .collect::<Vec<_>>()
                    .join("+");
            }
        }
        for (i, name) in names.iter().enumerate() {
            lookup.insert(name.clone(), IsoClassId(i as u32));
        }
        ClassNames { names, lookup }
    }

    pub fn name(&self, id: IsoClassId) -> &str {
        &self.names[id.index()]
    }

    /// `(alias, id)` pairs, primary names first in id order, then extra aliases.
    pub fn aliases(&self) -> Vec<(String, IsoClassId)> {
        let mut out: Vec<_> = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), IsoClassId(i as u32)))
            .collect();
        let mut extra: Vec<_> = self
            .lookup
            .iter()
            .filter(|(n, id)| self.names[id.index()] != **n)
            .map(|(n, &id)| (n.clone(), id))
            .collect();
        extra.sort();
        out.extend(extra);
        out
    }

    /// Resolves an alias, a numeric id (`7` or `#7`), or a direct sum of
    /// indecomposable aliases (`S1+P^2`, `S⊕S`).
    pub fn resolve(&self, table: &IsoClassTable, text: &str) -> Result<IsoClassId> {
        let text = text.trim();
        if let Some(&id) = self.lookup.get(text) {
            return Ok(id);
        }
        if let Ok(n) = text.trim_start_matches('#').parse::<u32>() {
            return table.class(IsoClassId(n)).map(|c| c.id);
        }
        let unknown = || Error::Bound(format!("unknown iso class `{text}`"));
        let mut parts = Vec::new();
        for part in text.split(['+', '⊕']) {
            let (name, k) = match part.trim().split_once('^') {
                Some((name, k)) => (name.trim(), k.trim().parse::<usize>().map_err(|_| unknown())?),
                None => (part.trim(), 1),
            };
            let &id = self.lookup.get(name).ok_or_else(unknown)?;
            for &(summand, m) in table.decomposition(id) {
                parts.push((summand, m * k));
            }
        }
        table.class_with_decomposition(&parts).ok_or_else(unknown)
    }
}
