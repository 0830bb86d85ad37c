//! Finite sets and binary relations: the exact backend.
//!
//! Relations between finite sets form a dagger compact closed category with
//! dagger biproducts: composition is relational composition, the dagger is
//! the converse, the tensor is the cartesian product under the row-major pair
//! encoding, and every object is self-dual with the diagonal as cup and cap.
//! All checks here are exact set comparisons; tolerances are ignored.

use crate::backend::{Backend, Tolerance};
use crate::error::Error;
use std::collections::{BTreeMap, BTreeSet};

/// A finite set `{0, 1, …, size-1}`, optionally carrying display labels.
///
/// Labels are presentation only: two sets compare equal exactly when their
/// sizes agree, and constructions on sets (tensor, sum) drop labels.
#[derive(Debug, Clone, Eq)]
pub struct FinSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
    }
}

impl FinSet {
    pub fn of_size(size: usize) -> Self {
        Self { size, labels: None }
    }

    /// A set labelled by the given distinct strings.
    pub fn labelled<I, S>(labels: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidFinSet("labels must be distinct".into()));
        }
        Ok(Self { size: labels.len(), labels: Some(labels) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element: its label if present, else its index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) if i < ls.len() => ls[i].clone(),
            _ => i.to_string(),
        }
    }
}

/// A binary relation between two finite sets, stored as a sorted pair set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    src: FinSet,
    dst: FinSet,
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    /// Build a relation, rejecting pairs outside the declared sets.
    pub fn new<I>(src: FinSet, dst: FinSet, pairs: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        for &(x, y) in &pairs {
            if x >= src.size() || y >= dst.size() {
                return Err(Error::PairOutOfRange(x, y, src.size(), dst.size()));
            }
        }
        Ok(Self { src, dst, pairs })
    }

    pub fn empty(src: FinSet, dst: FinSet) -> Self {
        Self { src, dst, pairs: BTreeSet::new() }
    }

    pub fn identity(a: &FinSet) -> Self {
        Self {
            src: a.clone(),
            dst: a.clone(),
            pairs: (0..a.size()).map(|i| (i, i)).collect(),
        }
    }

    /// The graph `{(x, f(x))}` of a function given as a slice.
    pub fn graph(src: FinSet, dst: FinSet, f: &[usize]) -> Result<Self, Error> {
        if f.len() != src.size() {
            return Err(Error::DimensionMismatch(format!(
                "graph of a function on {} elements given {} values",
                src.size(),
                f.len()
            )));
        }
        Self::new(src, dst, f.iter().enumerate().map(|(x, &y)| (x, y)))
    }

    pub fn src(&self) -> &FinSet {
        &self.src
    }

    pub fn dst(&self) -> &FinSet {
        &self.dst
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    /// Elements related to `x` on the right.
    pub fn image(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.pairs.range((x, 0)..(x + 1, 0)).map(|&(_, y)| y)
    }

    /// Diagrammatic composition `self ; other`.
    ///
    /// Panics if `self.dst` and `other.src` have different sizes.
    pub fn then(&self, other: &Relation) -> Relation {
        assert_eq!(
            self.dst.size(),
            other.src.size(),
            "relation composition shape mismatch"
        );
        let mut successors: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (y, z) in other.pairs() {
            successors.entry(y).or_default().push(z);
        }
        let mut pairs = BTreeSet::new();
        for (x, y) in self.pairs() {
            if let Some(zs) = successors.get(&y) {
                for &z in zs {
                    pairs.insert((x, z));
                }
            }
        }
        Relation { src: self.src.clone(), dst: other.dst.clone(), pairs }
    }

    /// The converse relation.
    pub fn dagger(&self) -> Relation {
        Relation {
            src: self.dst.clone(),
            dst: self.src.clone(),
            pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    /// Tensor product under the row-major pair encoding.
    pub fn tensor(&self, other: &Relation) -> Relation {
        let sn = other.src.size();
        let dn = other.dst.size();
        let mut pairs = BTreeSet::new();
        for (a, b) in self.pairs() {
            for (c, d) in other.pairs() {
                pairs.insert((a * sn + c, b * dn + d));
            }
        }
        Relation {
            src: FinSet::of_size(self.src.size() * sn),
            dst: FinSet::of_size(self.dst.size() * dn),
            pairs,
        }
    }

    /// Union of parallel relations.
    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.src.size(), other.src.size(), "union shape mismatch");
        assert_eq!(self.dst.size(), other.dst.size(), "union shape mismatch");
        Relation {
            src: self.src.clone(),
            dst: self.dst.clone(),
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.src.size() == other.src.size()
            && self.dst.size() == other.dst.size()
            && self.pairs.is_subset(&other.pairs)
    }

    /// The diagonal state `I → A ⊗ A`.
    pub fn cup(a: &FinSet) -> Relation {
        let n = a.size();
        Relation {
            src: FinSet::of_size(1),
            dst: FinSet::of_size(n * n),
            pairs: (0..n).map(|i| (0, i * n + i)).collect(),
        }
    }

    /// The diagonal costate `A ⊗ A → I`.
    pub fn cap(a: &FinSet) -> Relation {
        Self::cup(a).dagger()
    }

    /// Whether the relation is the graph of a bijection.
    pub fn is_bijection_graph(&self) -> bool {
        if self.src.size() != self.dst.size() || self.pairs.len() != self.src.size() {
            return false;
        }
        let mut seen_src = vec![false; self.src.size()];
        let mut seen_dst = vec![false; self.dst.size()];
        for (x, y) in self.pairs() {
            if seen_src[x] || seen_dst[y] {
                return false;
            }
            seen_src[x] = true;
            seen_dst[y] = true;
        }
        true
    }
}

/// Marker type for the relational backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rel;

impl Backend for Rel {
    type Obj = FinSet;
    type Mor = Relation;

    fn obj_size(a: &FinSet) -> usize {
        a.size()
    }

    fn obj_of_size(n: usize) -> FinSet {
        FinSet::of_size(n)
    }

    fn tensor_obj(a: &FinSet, b: &FinSet) -> FinSet {
        FinSet::of_size(a.size() * b.size())
    }

    fn sum_obj(a: &FinSet, b: &FinSet) -> FinSet {
        FinSet::of_size(a.size() + b.size())
    }

    fn src(f: &Relation) -> FinSet {
        f.src.clone()
    }

    fn dst(f: &Relation) -> FinSet {
        f.dst.clone()
    }

    fn id(a: &FinSet) -> Relation {
        Relation::identity(a)
    }

    fn zero_mor(a: &FinSet, b: &FinSet) -> Relation {
        Relation::empty(a.clone(), b.clone())
    }

    fn then(f: &Relation, g: &Relation) -> Relation {
        f.then(g)
    }

    fn dagger(f: &Relation) -> Relation {
        f.dagger()
    }

    fn transpose(f: &Relation) -> Relation {
        f.dagger()
    }

    fn conjugate(f: &Relation) -> Relation {
        f.clone()
    }

    fn tensor(f: &Relation, g: &Relation) -> Relation {
        f.tensor(g)
    }

    fn plus(f: &Relation, g: &Relation) -> Relation {
        f.union(g)
    }

    fn cup(a: &FinSet) -> Relation {
        Relation::cup(a)
    }

    fn mor_from_pairs(src: &FinSet, dst: &FinSet, pairs: &[(usize, usize)]) -> Relation {
        Relation::new(src.clone(), dst.clone(), pairs.iter().map(|&(d, s)| (s, d)))
            .expect("index pairs out of range")
    }

    fn approx_eq(f: &Relation, g: &Relation, _tol: &Tolerance) -> bool {
        f == g
    }

    fn residual(f: &Relation, g: &Relation) -> f64 {
        if f.src.size() != g.src.size() || f.dst.size() != g.dst.size() {
            return f64::INFINITY;
        }
        f.pairs.symmetric_difference(&g.pairs).count() as f64
    }

    /// Positive relations are exactly those of the form `h† ; h`: symmetric
    /// relations in which every related element is related to itself.
    fn is_positive(f: &Relation, _tol: &Tolerance) -> bool {
        if f.src.size() != f.dst.size() {
            return false;
        }
        f.pairs()
            .all(|(x, y)| f.contains(y, x) && f.contains(x, x))
    }

    fn is_invertible(f: &Relation, _tol: &Tolerance) -> bool {
        f.is_bijection_graph()
    }

    fn is_completely_positive(h: &Relation, a: &FinSet, b: &FinSet, _tol: &Tolerance) -> bool {
        let (na, nb) = (a.size(), b.size());
        assert_eq!(h.src.size(), na * na, "doubled source shape mismatch");
        assert_eq!(h.dst.size(), nb * nb, "doubled target shape mismatch");
        h.pairs().all(|(p, q)| {
            let (x, x1) = (p / na, p % na);
            let (y, y1) = (q / nb, q % nb);
            h.contains(x1 * na + x, y1 * nb + y) && h.contains(x * na + x, y * nb + y)
        })
    }

    fn positive_sqrt_inverse(q: &Relation, _tol: &Tolerance) -> Result<Relation, Error> {
        if *q == Relation::identity(&q.src) {
            Ok(q.clone())
        } else {
            Err(Error::NotNormalisable(
                "in Rel the only positive invertible candidate is the identity".into(),
            ))
        }
    }

    fn positive_inverse(z: &Relation, _tol: &Tolerance) -> Result<Relation, Error> {
        if *z == Relation::identity(&z.src) {
            Ok(z.clone())
        } else {
            Err(Error::NotNormalisable(
                "in Rel the only positive invertible normaliser is the identity".into(),
            ))
        }
    }
}
