//! JSON interchange formats for words, elements and complexes. Coefficients
//! are exact `"num/den"` strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complexes::{BoundedComplex, ReducedForm};
use crate::dhall::{DHElement, DerivedWord};
use crate::error::{Error, Result};
use crate::ffla::FqMatrix;
use crate::mhall::{AlgebraElement, NormalWord, TorusElement};
use crate::quiverrep::{ClassNames, IsoClassId, IsoClassTable, Morphism, RepCategory};
use crate::scalar::Scalar;

/// A class given by numeric id or by alias.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassRef {
    Id(u32),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusFactorJson {
    pub degree: i64,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkJson {
    pub degree: i64,
    pub iso_class_id: ClassRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// A word, factors listed in product order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordJson {
    #[serde(default)]
    pub torus: Vec<TorusFactorJson>,
    #[serde(default)]
    pub stalks: Vec<StalkJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    #[serde(flatten)]
    pub word: WordJson,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedFormJson {
    pub coeff: String,
    pub word: WordJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDegreeJson {
    pub degree: i64,
    pub dim_vector: Vec<usize>,
    /// One matrix per arrow, as a list of rows.
    #[serde(default)]
    pub arrow_maps: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialJson {
    pub from_degree: i64,
    /// One matrix per vertex, as a list of rows.
    pub vertex_maps: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub degrees: Vec<ComplexDegreeJson>,
    #[serde(default)]
    pub differentials: Vec<DifferentialJson>,
}

/// Converts between library values and their JSON shapes, resolving class
/// aliases against one table.
pub struct Codec<'a> {
    table: &'a IsoClassTable,
    names: ClassNames,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}

impl<'a> Codec<'a> {
    pub fn new(table: &'a IsoClassTable) -> Self {
        Codec {
            table,
            names: ClassNames::new(table),
        }
    }

    pub fn names(&self) -> &ClassNames {
        &self.names
    }

    pub fn resolve(&self, c: &ClassRef) -> Result<IsoClassId> {
        match c {
            ClassRef::Id(n) => self.table.class(IsoClassId(*n)).map(|c| c.id),
            ClassRef::Name(s) => self.names.resolve(self.table, s),
        }
    }

    fn stalk_json(&self, n: i64, id: IsoClassId) -> StalkJson {
        StalkJson {
            degree: n,
            iso_class_id: ClassRef::Id(id.0),
            name: Some(self.names.name(id).to_string()),
        }
    }

    pub fn word_to_json(&self, w: &NormalWord) -> WordJson {
        WordJson {
            torus: w
                .torus()
                .iter()
                .rev()
                .map(|(n, a)| TorusFactorJson {
                    degree: n,
                    exponents: a.clone(),
                })
                .collect(),
            stalks: w.stalks().rev().map(|(n, id)| self.stalk_json(n, id)).collect(),
        }
    }

    pub fn word_from_json(&self, w: &WordJson) -> Result<NormalWord> {
        let nv = self.table.category().vertex_count();
        let mut torus = BTreeMap::new();
        for t in &w.torus {
            if t.exponents.len() != nv {
                return Err(bad(format!("torus exponents {:?} need {nv} entries", t.exponents)));
            }
            if torus.insert(t.degree, t.exponents.clone()).is_some() {
                return Err(bad(format!("two torus factors in degree {}", t.degree)));
            }
        }
        let mut stalks = BTreeMap::new();
        for s in &w.stalks {
            if stalks.insert(s.degree, self.resolve(&s.iso_class_id)?).is_some() {
                return Err(bad(format!("two stalk factors in degree {}", s.degree)));
            }
        }
        Ok(NormalWord::new(TorusElement::from_factors(torus), stalks))
    }

    pub fn element_to_json<S: Scalar>(&self, x: &AlgebraElement<S>) -> ElementJson {
        ElementJson {
            terms: x
                .terms()
                .map(|(w, c)| TermJson {
                    coeff: c.to_fraction(),
                    word: self.word_to_json(w),
                })
                .collect(),
        }
    }

    pub fn element_from_json<S: Scalar>(&self, x: &ElementJson) -> Result<AlgebraElement<S>> {
        let mut terms = Vec::new();
        for t in &x.terms {
            let c = S::parse_fraction(&t.coeff).ok_or_else(|| bad(format!("bad coefficient `{}`", t.coeff)))?;
            terms.push((self.word_from_json(&t.word)?, c));
        }
        Ok(AlgebraElement::from_terms(terms))
    }

    pub fn dh_to_json<S: Scalar>(&self, x: &DHElement<S>) -> ElementJson {
        ElementJson {
            terms: x
                .terms()
                .map(|(w, c)| TermJson {
                    coeff: c.to_fraction(),
                    word: WordJson {
                        torus: Vec::new(),
                        stalks: w.stalks().rev().map(|(n, id)| self.stalk_json(n, id)).collect(),
                    },
                })
                .collect(),
        }
    }

    pub fn dh_from_json<S: Scalar>(&self, x: &ElementJson) -> Result<DHElement<S>> {
        let mut terms = Vec::new();
        for t in &x.terms {
            if !t.word.torus.is_empty() {
                return Err(bad("derived Hall algebra words have no torus part"));
            }
            let c = S::parse_fraction(&t.coeff).ok_or_else(|| bad(format!("bad coefficient `{}`", t.coeff)))?;
            let w = self.word_from_json(&t.word)?;
            terms.push((DerivedWord::new(w.stalks()), c));
        }
        Ok(DHElement::from_terms(terms))
    }

    pub fn reduced_to_json<S: Scalar>(&self, r: &ReducedForm<S>) -> ReducedFormJson {
        ReducedFormJson {
            coeff: r.coefficient.to_fraction(),
            word: self.word_to_json(&r.word),
        }
    }

    pub fn reduced_from_json<S: Scalar>(&self, r: &ReducedFormJson) -> Result<ReducedForm<S>> {
        Ok(ReducedForm {
            coefficient: S::parse_fraction(&r.coeff).ok_or_else(|| bad(format!("bad coefficient `{}`", r.coeff)))?,
            word: self.word_from_json(&r.word)?,
        })
    }
}

fn matrix(rows: &[Vec<u32>], r: usize, c: usize, cat: &RepCategory, what: &str) -> Result<FqMatrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(bad(format!("{what}: expected a {r}x{c} matrix")));
    }
    FqMatrix::from_rows(rows, c, cat.field()).map_err(|e| bad(format!("{what}: {e}")))
}

pub fn complex_from_json(cat: &RepCategory, x: &ComplexJson) -> Result<BoundedComplex> {
    let mut components = BTreeMap::new();
    for d in &x.degrees {
        if d.dim_vector.len() != cat.vertex_count() {
            return Err(bad(format!("degree {}: dimension vector needs {} entries", d.degree, cat.vertex_count())));
        }
        let arrows = cat.quiver().arrows();
        let maps = if d.arrow_maps.is_empty() && !arrows.is_empty() {
            arrows
                .iter()
                .map(|a| FqMatrix::zeros(d.dim_vector[a.target], d.dim_vector[a.source]))
                .collect()
        } else {
            if d.arrow_maps.len() != arrows.len() {
                return Err(bad(format!("degree {}: {} arrow maps for {} arrows", d.degree, d.arrow_maps.len(), arrows.len())));
            }
            arrows
                .iter()
                .zip(&d.arrow_maps)
                .enumerate()
                .map(|(i, (a, rows))| {
                    let what = format!("degree {}, arrow {}", d.degree, i + 1);
                    matrix(rows, d.dim_vector[a.target], d.dim_vector[a.source], cat, &what)
                })
                .collect::<Result<_>>()?
        };
        let rep = cat.rep(d.dim_vector.clone(), maps)?;
        if components.insert(d.degree, rep).is_some() {
            return Err(bad(format!("degree {} listed twice", d.degree)));
        }
    }
    let zero = cat.zero();
    let mut differentials = BTreeMap::new();
    for d in &x.differentials {
        let src = components.get(&d.from_degree).unwrap_or(&zero);
        let tgt = components.get(&(d.from_degree + 1)).unwrap_or(&zero);
        if d.vertex_maps.len() != cat.vertex_count() {
            return Err(bad(format!("differential from degree {}: one map per vertex required", d.from_degree)));
        }
        let maps = d
            .vertex_maps
            .iter()
            .enumerate()
            .map(|(v, rows)| {
                let what = format!("differential from degree {}, vertex {}", d.from_degree, v + 1);
                matrix(rows, tgt.dims()[v], src.dims()[v], cat, &what)
            })
            .collect::<Result<_>>()?;
        if differentials.insert(d.from_degree, Morphism { maps }).is_some() {
            return Err(bad(format!("differential from degree {} listed twice", d.from_degree)));
        }
    }
    BoundedComplex::new(cat, components, differentials)
}

pub fn complex_to_json(x: &BoundedComplex) -> ComplexJson {
    ComplexJson {
        degrees: x
            .components()
            .iter()
            .map(|(&i, r)| ComplexDegreeJson {
                degree: i,
                dim_vector: r.dims().to_vec(),
                arrow_maps: r.maps().iter().map(FqMatrix::to_rows).collect(),
            })
            .collect(),
        differentials: x
            .differentials()
            .iter()
            .map(|(&i, d)| DifferentialJson {
                from_degree: i,
                vertex_maps: d.maps.iter().map(FqMatrix::to_rows).collect(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dhall;
    use crate::mhall;
    use crate::testutil::{a2, ids};
    use crate::Rat;

    #[test]
    fn element_round_trip() {
        let ctx = a2(2, vec![2, 2]);
        let codec = Codec::new(ctx.table());
        let [s1, s2, p] = ids(&ctx, ["S1", "S2", "P"]);
        let x: AlgebraElement<Rat> = mhall::normalize(
            &ctx,
            &[
                mhall::Factor::u(s2, 0),
                mhall::Factor::k(vec![1, -1], 2),
                mhall::Factor::u(p, 1),
                mhall::Factor::u(s1, 1),
            ],
            false,
        )
        .unwrap();
        assert!(x.len() > 1);
        let json = serde_json::to_string(&codec.element_to_json(&x)).unwrap();
        let back: ElementJson = serde_json::from_str(&json).unwrap();
        assert_eq!(codec.element_from_json::<Rat>(&back).unwrap(), x);

        let d: DHElement<Rat> = dhall::dh_normalize(&ctx, &[(s2, 0), (p, 1)], false).unwrap();
        let back: ElementJson = serde_json::from_str(&serde_json::to_string(&codec.dh_to_json(&d)).unwrap()).unwrap();
        assert_eq!(codec.dh_from_json::<Rat>(&back).unwrap(), d);
    }

    #[test]
    fn parses_aliases_and_rejects_junk() {
        let ctx = a2(2, vec![1, 1]);
        let codec = Codec::new(ctx.table());
        let [p] = ids(&ctx, ["P"]);
        let json = r#"{"terms":[{"coeff":"3/4","torus":[{"degree":1,"exponents":[1,0]}],"stalks":[{"degree":0,"iso_class_id":"P"}]}]}"#;
        let x: ElementJson = serde_json::from_str(json).unwrap();
        let x: AlgebraElement<Rat> = codec.element_from_json(&x).unwrap();
        let w = NormalWord::new(TorusElement::from_factors([(1, vec![1, 0])]), [(0, p)]);
        assert_eq!(x.coefficient(&w), Rat::from_counts(3, 4));
        for junk in [
            r#"{"terms":[{"coeff":"x","stalks":[]}]}"#,
            r#"{"terms":[{"coeff":"1","stalks":[{"degree":0,"iso_class_id":"Q"}]}]}"#,
            r#"{"terms":[{"coeff":"1","stalks":[{"degree":0,"iso_class_id":99}]}]}"#,
            r#"{"terms":[{"coeff":"1","torus":[{"degree":0,"exponents":[1]}]}]}"#,
        ] {
            let x: ElementJson = serde_json::from_str(junk).unwrap();
            assert!(codec.element_from_json::<Rat>(&x).is_err(), "{junk}");
        }
    }

    #[test]
    fn complex_round_trip() {
        let ctx = a2(2, vec![1, 1]);
        let cat = ctx.category();
        let json = r#"{"degrees":[{"degree":0,"dim_vector":[1,1],"arrow_maps":[[[1]]]},
                                  {"degree":1,"dim_vector":[1,0],"arrow_maps":[[]]}],
                       "differentials":[{"from_degree":0,"vertex_maps":[[[1]],[]]}]}"#;
        let parsed: ComplexJson = serde_json::from_str(json).unwrap();
        let x = complex_from_json(cat, &parsed).unwrap();
        let r: ReducedForm<Rat> = x.reduce(&ctx, false).unwrap();
        assert_eq!(r.coefficient, Rat::from_counts(1, 2));
        let again = complex_from_json(cat, &complex_to_json(&x)).unwrap();
        assert_eq!(again, x);
        let codec = Codec::new(ctx.table());
        let rj = codec.reduced_to_json(&r);
        assert_eq!(codec.reduced_from_json::<Rat>(&rj).unwrap(), r);
        let bad = r#"{"degrees":[{"degree":0,"dim_vector":[1,1],"arrow_maps":[[[1]]]},
                                 {"degree":1,"dim_vector":[0,1],"arrow_maps":[[]]}],
                      "differentials":[{"from_degree":0,"vertex_maps":[[],[[1]]]}]}"#;
        let parsed: ComplexJson = serde_json::from_str(bad).unwrap();
        assert!(complex_from_json(cat, &parsed).is_err());
    }
}
