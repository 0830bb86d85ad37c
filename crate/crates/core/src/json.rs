//! JSON documents for the domain types, with validated conversions.
//!
//! Every document derives `Serialize`/`Deserialize` and round-trips through
//! the corresponding domain type. Deserialisation is two-stage: serde parses
//! the text (failures become [`Error::Json`]) and an explicit conversion
//! rebuilds the domain value through its validating constructor, so a file
//! that parses but describes a malformed object is still rejected.
//!
//! Conventions: matrices are row-major with entries as `[re, im]` pairs;
//! sets are bare sizes or `{"size", "labels"}` objects; a `null` normaliser
//! means the identity; `-1` marks undefined composites in groupoid tables.

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::biproduct::SumObject;
use crate::error::Error;
use crate::fhilb::{FHilb, Matrix};
use crate::frobenius::FrobeniusAlgebra;
use crate::groupoid::Groupoid;
use crate::rel::{FinSet, Rel, Relation};
use crate::split::{CpmPer, Per};

/// Parse a document, mapping serde failures to [`Error::Json`].
pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}

/// Pretty-print a document.
pub fn to_pretty<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("document serialisation cannot fail")
}

/// A finite set: either a bare size or a size with display labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FinSetDoc {
    Size(usize),
    Labelled { size: usize, labels: Vec<String> },
}

impl FinSetDoc {
    pub fn of(set: &FinSet) -> Self {
        match set.labels() {
            Some(ls) => Self::Labelled { size: set.size(), labels: ls.to_vec() },
            None => Self::Size(set.size()),
        }
    }

    pub fn to_set(&self) -> Result<FinSet, Error> {
        match self {
            Self::Size(n) => Ok(FinSet::of_size(*n)),
            Self::Labelled { size, labels } => {
                if labels.len() != *size {
                    return Err(Error::Json(format!(
                        "set declares size {size} but lists {} labels",
                        labels.len()
                    )));
                }
                FinSet::labelled(labels.iter().cloned())
            }
        }
    }
}

/// A relation as an explicit pair list between two finite sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub src: FinSetDoc,
    pub dst: FinSetDoc,
    pub pairs: Vec<(usize, usize)>,
}

impl RelationDoc {
    pub fn of(r: &Relation) -> Self {
        Self {
            src: FinSetDoc::of(r.src()),
            dst: FinSetDoc::of(r.dst()),
            pairs: r.pairs().collect(),
        }
    }

    pub fn to_relation(&self) -> Result<Relation, Error> {
        Relation::new(self.src.to_set()?, self.dst.to_set()?, self.pairs.iter().copied())
    }
}

/// A complex matrix as a row-major list of `[re, im]` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(f64, f64)>,
}

impl MatrixDoc {
    pub fn of(m: &Matrix<f64>) -> Self {
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let z = m[(i, j)];
                entries.push((z.re, z.im));
            }
        }
        Self { rows: m.rows(), cols: m.cols(), entries }
    }

    pub fn to_matrix(&self) -> Result<Matrix<f64>, Error> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Json(format!(
                "{}×{} matrix needs {} entries, got {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.entries.len()
            )));
        }
        Ok(Matrix::from_entries(
            self.rows,
            self.cols,
            self.entries.iter().map(|&(re, im)| Complex::new(re, im)).collect(),
        ))
    }
}

/// A backend morphism: a relation pair list or a complex matrix.
///
/// The two shapes share no field names, so the untagged representation is
/// unambiguous; which backend a morphism belongs to is decided by the
/// algebra documents it is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MorphismDoc {
    Rel(RelationDoc),
    Mat(MatrixDoc),
}

impl MorphismDoc {
    pub fn to_relation(&self) -> Result<Relation, Error> {
        match self {
            Self::Rel(doc) => doc.to_relation(),
            Self::Mat(_) => Err(Error::Json("expected a relation, found a matrix".into())),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix<f64>, Error> {
        match self {
            Self::Mat(doc) => doc.to_matrix(),
            Self::Rel(_) => Err(Error::Json("expected a matrix, found a relation".into())),
        }
    }
}

/// A Frobenius algebra over either backend, tagged by `"backend"`.
///
/// A `null` (or absent) normaliser denotes the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase")]
pub enum AlgebraDoc {
    Rel {
        carrier: FinSetDoc,
        mult: RelationDoc,
        unit: RelationDoc,
        #[serde(default)]
        normaliser: Option<RelationDoc>,
    },
    Fhilb {
        carrier: usize,
        mult: MatrixDoc,
        unit: MatrixDoc,
        #[serde(default)]
        normaliser: Option<MatrixDoc>,
    },
}

impl AlgebraDoc {
    pub fn of_rel(a: &FrobeniusAlgebra<Rel>) -> Self {
        let id = Relation::identity(a.carrier());
        Self::Rel {
            carrier: FinSetDoc::of(a.carrier()),
            mult: RelationDoc::of(a.mult()),
            unit: RelationDoc::of(a.unit()),
            normaliser: (a.normaliser() != &id).then(|| RelationDoc::of(a.normaliser())),
        }
    }

    pub fn of_fhilb(a: &FrobeniusAlgebra<FHilb<f64>>) -> Self {
        let n = *a.carrier();
        let is_id = a.normaliser().max_diff(&Matrix::identity(n)) == 0.0;
        Self::Fhilb {
            carrier: n,
            mult: MatrixDoc::of(a.mult()),
            unit: MatrixDoc::of(a.unit()),
            normaliser: (!is_id).then(|| MatrixDoc::of(a.normaliser())),
        }
    }

    pub fn backend(&self) -> &'static str {
        match self {
            Self::Rel { .. } => "rel",
            Self::Fhilb { .. } => "fhilb",
        }
    }

    pub fn to_rel(&self) -> Result<FrobeniusAlgebra<Rel>, Error> {
        match self {
            Self::Rel { carrier, mult, unit, normaliser } => FrobeniusAlgebra::from_parts(
                carrier.to_set()?,
                mult.to_relation()?,
                unit.to_relation()?,
                normaliser.as_ref().map(|d| d.to_relation()).transpose()?,
            ),
            Self::Fhilb { .. } => Err(Error::Json("expected a rel algebra, found fhilb".into())),
        }
    }

    pub fn to_fhilb(&self) -> Result<FrobeniusAlgebra<FHilb<f64>>, Error> {
        match self {
            Self::Fhilb { carrier, mult, unit, normaliser } => FrobeniusAlgebra::from_parts(
                *carrier,
                mult.to_matrix()?,
                unit.to_matrix()?,
                normaliser.as_ref().map(|d| d.to_matrix()).transpose()?,
            ),
            Self::Rel { .. } => Err(Error::Json("expected a fhilb algebra, found rel".into())),
        }
    }
}

/// A partial equivalence relation by base size and pair list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerDoc {
    pub base: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl PerDoc {
    pub fn of(p: &Per) -> Self {
        Self { base: p.base(), pairs: p.relation().pairs().collect() }
    }

    pub fn to_per(&self) -> Result<Per, Error> {
        Per::new(self.base, self.pairs.iter().copied())
    }
}

/// A CP-closed PER on a doubled object; `base` must equal `x_size²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpmPerDoc {
    pub x_size: usize,
    pub base: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl CpmPerDoc {
    pub fn of(q: &CpmPer) -> Self {
        Self {
            x_size: q.x_size(),
            base: q.per().base(),
            pairs: q.per().relation().pairs().collect(),
        }
    }

    pub fn to_cpm_per(&self) -> Result<CpmPer, Error> {
        if self.base != self.x_size * self.x_size {
            return Err(Error::Json(format!(
                "base {} is not the square of x_size {}",
                self.base, self.x_size
            )));
        }
        CpmPer::new(self.x_size, self.pairs.iter().copied())
    }
}

/// A biproduct object by its ordered summand list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumDoc {
    pub summands: Vec<FinSetDoc>,
}

impl SumDoc {
    pub fn of_rel(s: &SumObject<Rel>) -> Self {
        Self { summands: s.summands().iter().map(FinSetDoc::of).collect() }
    }

    pub fn of_fhilb(s: &SumObject<FHilb<f64>>) -> Self {
        Self { summands: s.summands().iter().map(|&n| FinSetDoc::Size(n)).collect() }
    }

    pub fn to_rel(&self) -> Result<SumObject<Rel>, Error> {
        let summands = self.summands.iter().map(|d| d.to_set()).collect::<Result<_, _>>()?;
        Ok(SumObject::new(summands))
    }

    pub fn to_fhilb(&self) -> Result<SumObject<FHilb<f64>>, Error> {
        let summands = self
            .summands
            .iter()
            .map(|d| d.to_set().map(|s| s.size()))
            .collect::<Result<_, _>>()?;
        Ok(SumObject::new(summands))
    }
}

/// A groupoid by explicit tables; `-1` marks undefined composites.
///
/// `comp[g][h]` is the composite "g after h". Inverse and identity tables
/// are derivable, so they may be omitted on input; when present they are
/// checked against the composition table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupoidDoc {
    pub objects: usize,
    pub morphisms: usize,
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub comp: Vec<Vec<i64>>,
    #[serde(default)]
    pub inv: Option<Vec<usize>>,
    #[serde(default)]
    pub ids: Option<Vec<usize>>,
}

impl GroupoidDoc {
    pub fn of(g: &Groupoid) -> Self {
        let m = g.morphisms();
        let comp = (0..m)
            .map(|a| (0..m).map(|b| g.compose(a, b).map_or(-1, |x| x as i64)).collect())
            .collect();
        Self {
            objects: g.objects(),
            morphisms: m,
            dom: (0..m).map(|x| g.dom(x)).collect(),
            cod: (0..m).map(|x| g.cod(x)).collect(),
            comp,
            inv: Some((0..m).map(|x| g.inv(x)).collect()),
            ids: Some(g.identities().to_vec()),
        }
    }

    pub fn to_groupoid(&self) -> Result<Groupoid, Error> {
        let m = self.morphisms;
        if self.dom.len() != m {
            return Err(Error::Json(format!(
                "groupoid declares {m} morphisms but lists {} domains",
                self.dom.len()
            )));
        }
        let comp = self
            .comp
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&e| match e {
                        -1 => Ok(None),
                        e if e >= 0 && (e as usize) < m => Ok(Some(e as usize)),
                        e => Err(Error::Json(format!("composition entry {e} out of range"))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let g = Groupoid::new(self.objects, self.dom.clone(), self.cod.clone(), comp)?;
        if let Some(inv) = &self.inv {
            if *inv != (0..m).map(|x| g.inv(x)).collect::<Vec<_>>() {
                return Err(Error::Json(
                    "declared inverses disagree with the composition table".into(),
                ));
            }
        }
        if let Some(ids) = &self.ids {
            if ids != g.identities() {
                return Err(Error::Json(
                    "declared identities disagree with the composition table".into(),
                ));
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Tolerance;
    use crate::groupoid::{groupoid_to_algebra, GroupTable};
    use crate::split::f_image_per;

    fn reparse<T: Serialize + DeserializeOwned>(doc: &T) -> T {
        from_str(&to_pretty(doc)).expect("round trip parses")
    }

    #[test]
    fn finite_sets_round_trip_as_sizes_or_labelled_objects() {
        let plain = FinSetDoc::of(&FinSet::of_size(3));
        assert_eq!(to_pretty(&plain), "3");
        assert_eq!(reparse(&plain).to_set().unwrap().size(), 3);

        let labelled = FinSet::labelled(["a", "b"]).unwrap();
        let doc = reparse(&FinSetDoc::of(&labelled));
        assert_eq!(doc.to_set().unwrap().labels(), Some(&["a".to_string(), "b".to_string()][..]));

        let mismatch: FinSetDoc = from_str(r#"{"size": 3, "labels": ["a"]}"#).unwrap();
        assert!(matches!(mismatch.to_set(), Err(Error::Json(_))));
    }

    #[test]
    fn relations_round_trip_and_reject_out_of_range_pairs() {
        let r = Relation::graph(FinSet::of_size(2), FinSet::of_size(3), &[2, 0]).unwrap();
        assert_eq!(reparse(&RelationDoc::of(&r)).to_relation().unwrap(), r);

        let doc: RelationDoc = from_str(r#"{"src": 2, "dst": 2, "pairs": [[0, 5]]}"#).unwrap();
        assert!(matches!(doc.to_relation(), Err(Error::PairOutOfRange(..))));
    }

    #[test]
    fn matrices_round_trip_exactly_and_check_entry_counts() {
        let m = Matrix::<f64>::from_entries(
            2,
            2,
            vec![
                Complex::new(0.25, -1.5),
                Complex::new(1.0 / 3.0, 0.0),
                Complex::new(0.0, 2.0_f64.sqrt()),
                Complex::new(-4.0, 0.125),
            ],
        );
        assert_eq!(reparse(&MatrixDoc::of(&m)).to_matrix().unwrap().max_diff(&m), 0.0);

        let short: MatrixDoc = from_str(r#"{"rows": 2, "cols": 2, "entries": [[1, 0]]}"#).unwrap();
        assert!(matches!(short.to_matrix(), Err(Error::Json(_))));
    }

    #[test]
    fn morphism_documents_distinguish_the_two_backends() {
        let rel: MorphismDoc = from_str(r#"{"src": 1, "dst": 1, "pairs": [[0, 0]]}"#).unwrap();
        assert!(rel.to_relation().is_ok());
        assert!(rel.to_matrix().is_err());

        let mat: MorphismDoc =
            from_str(r#"{"rows": 1, "cols": 1, "entries": [[1, 0]]}"#).unwrap();
        assert!(mat.to_matrix().is_ok());
        assert!(mat.to_relation().is_err());
    }

    #[test]
    fn rel_algebras_round_trip_with_identity_normaliser_as_null() {
        let tol = Tolerance::default();
        let g = Groupoid::from_group(&GroupTable::cyclic(2));
        let alg = groupoid_to_algebra::<Rel>(&g, &tol).unwrap();
        let doc = AlgebraDoc::of_rel(&alg);
        assert_eq!(doc.backend(), "rel");
        assert!(to_pretty(&doc).contains("\"normaliser\": null"));
        let back = reparse(&doc).to_rel().unwrap();
        assert_eq!(back.mult(), alg.mult());
        assert_eq!(back.unit(), alg.unit());
        assert_eq!(back.normaliser(), &Relation::identity(alg.carrier()));
        assert!(doc.to_fhilb().is_err());
    }

    #[test]
    fn fhilb_algebras_round_trip_with_a_nontrivial_normaliser() {
        let tol = Tolerance::default();
        let alg = FrobeniusAlgebra::<FHilb<f64>>::pair_of_pants(2, &tol).unwrap();
        let doc = AlgebraDoc::of_fhilb(&alg);
        assert_eq!(doc.backend(), "fhilb");
        let text = to_pretty(&doc);
        assert!(!text.contains("\"normaliser\": null"));
        let back: AlgebraDoc = from_str(&text).unwrap();
        let back = back.to_fhilb().unwrap();
        assert_eq!(back.mult().max_diff(alg.mult()), 0.0);
        assert_eq!(back.normaliser().max_diff(alg.normaliser()), 0.0);
        assert!(doc.to_rel().is_err());
    }

    #[test]
    fn pers_and_doubled_pers_round_trip_and_validate_sizes() {
        let per = Per::new(3, [(0, 0), (1, 2), (2, 1), (1, 1), (2, 2)]).unwrap();
        let back = reparse(&PerDoc::of(&per)).to_per().unwrap();
        assert_eq!(back.relation(), per.relation());

        let q = f_image_per(&Groupoid::from_group(&GroupTable::cyclic(2)));
        let doc = CpmPerDoc::of(&q);
        assert_eq!(doc.base, doc.x_size * doc.x_size);
        let back = reparse(&doc).to_cpm_per().unwrap();
        assert_eq!(back.per().relation(), q.per().relation());

        let bad: CpmPerDoc = from_str(r#"{"x_size": 2, "base": 3, "pairs": []}"#).unwrap();
        assert!(matches!(bad.to_cpm_per(), Err(Error::Json(_))));
    }

    #[test]
    fn sum_objects_round_trip_over_both_backends() {
        let rel_sum = SumObject::<Rel>::new(vec![FinSet::of_size(2), FinSet::of_size(1)]);
        let back = reparse(&SumDoc::of_rel(&rel_sum)).to_rel().unwrap();
        assert_eq!(back.total().size(), 3);

        let fhilb_sum = SumObject::<FHilb<f64>>::new(vec![3, 0, 2]);
        let back = reparse(&SumDoc::of_fhilb(&fhilb_sum)).to_fhilb().unwrap();
        assert_eq!(back.summands(), &[3, 0, 2]);
    }

    #[test]
    fn groupoids_round_trip_and_validate_declared_tables() {
        for g in [
            Groupoid::from_group(&GroupTable::sym3()),
            Groupoid::indiscrete(3),
            Groupoid::empty(),
        ] {
            let doc = GroupoidDoc::of(&g);
            let back = reparse(&doc).to_groupoid().unwrap();
            assert_eq!(back.canonical_key(), g.canonical_key());
        }

        let mut doc = GroupoidDoc::of(&Groupoid::from_group(&GroupTable::cyclic(3)));
        doc.inv = Some(vec![0, 1, 2]);
        assert!(matches!(doc.to_groupoid(), Err(Error::Json(_))));

        let mut doc = GroupoidDoc::of(&Groupoid::indiscrete(2));
        doc.ids = Some(vec![0, 1]);
        assert!(matches!(doc.to_groupoid(), Err(Error::Json(_))));

        // derived tables are filled in when omitted
        let mut doc = GroupoidDoc::of(&Groupoid::indiscrete(2));
        doc.inv = None;
        doc.ids = None;
        assert!(doc.to_groupoid().is_ok());

        let wild = GroupoidDoc {
            objects: 1,
            morphisms: 1,
            dom: vec![0],
            cod: vec![0],
            comp: vec![vec![7]],
            inv: None,
            ids: None,
        };
        assert!(matches!(wild.to_groupoid(), Err(Error::Json(_))));
    }

    #[test]
    fn malformed_text_is_reported_as_a_json_error() {
        assert!(matches!(from_str::<RelationDoc>("{not json"), Err(Error::Json(_))));
        assert!(matches!(from_str::<AlgebraDoc>(r#"{"backend": "set"}"#), Err(Error::Json(_))));
    }
}
