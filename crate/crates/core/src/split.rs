//! Partial equivalence relations and dagger-idempotent splitting over the
//! relational backend.
//!
//! A dagger idempotent in relations is exactly a partial equivalence
//! relation (PER): symmetric and transitive, with a domain that need not be
//! everything. Its canonical dagger splitting relates every element to its
//! equivalence class, so splittings through a set `Y` correspond to
//! bijections between the quotient and `Y`. This module builds that
//! machinery, the extra class structure carried by PERs on doubled sets
//! (where the complete-positivity conditions make "swap" and "take the
//! diagonal" well-defined on classes), the isomorphism searches between
//! split objects, and the two search-based counterexamples: a completely
//! positive dagger idempotent on the nine-morphism groupoid that splits
//! through no groupoid at all, and a unital doubled PER that is the image
//! of no groupoid.

use crate::cp::is_cpstar_rel_groupoid;
use crate::error::Error;
use crate::groupoid::{enumerate_groupoids, Groupoid};
use crate::rel::{FinSet, Rel, Relation};
use crate::util;
use crate::backend::{Backend, Tolerance};

/// A partial equivalence relation: symmetric, transitive, with its
/// equivalence classes precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Per {
    relation: Relation,
    classes: Vec<Vec<usize>>,
    class_of: Vec<Option<usize>>,
}

impl Per {
    /// Build from a pair list on `{0, …, base-1}`.
    pub fn new<I>(base: usize, pairs: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let set = FinSet::of_size(base);
        Self::from_relation(&Relation::new(set.clone(), set, pairs)?)
    }

    /// Validate symmetry and transitivity of an endo-relation.
    pub fn from_relation(r: &Relation) -> Result<Self, Error> {
        if r.src().size() != r.dst().size() {
            return Err(Error::InvalidPer(
                "a partial equivalence relation must be an endo-relation".into(),
            ));
        }
        if r.dagger() != *r {
            return Err(Error::InvalidPer("not symmetric".into()));
        }
        if !r.then(r).is_subset_of(r) {
            return Err(Error::InvalidPer("not transitive".into()));
        }
        let base = r.src().size();
        let mut class_of: Vec<Option<usize>> = vec![None; base];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..base {
            if class_of[x].is_some() || !r.contains(x, x) {
                continue;
            }
            let members: Vec<usize> = r.image(x).collect();
            let idx = classes.len();
            for &y in &members {
                class_of[y] = Some(idx);
            }
            classes.push(members);
        }
        Ok(Self { relation: r.clone(), classes, class_of })
    }

    pub fn base(&self) -> usize {
        self.relation.src().size()
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    /// The equivalence classes, each sorted, ordered by least member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.class_of.get(x).copied().flatten()
    }

    pub fn in_domain(&self, x: usize) -> bool {
        self.class_of(x).is_some()
    }

    /// The canonical dagger splitting `S : X → X/R` relating each domain
    /// element to its class: `S ; S† = R` and `S† ; S = id` on the
    /// quotient.
    pub fn splitting(&self) -> Relation {
        let quotient = FinSet::of_size(self.class_count());
        let pairs = (0..self.base()).filter_map(|x| self.class_of(x).map(|c| (x, c)));
        Relation::new(self.relation.src().clone(), quotient, pairs).expect("classes in range")
    }
}

/// A PER on a doubled set `X × X` satisfying the complete-positivity
/// closure conditions: an object of the idempotent-splitting category over
/// doubled relations. The conditions make two maps on classes well
/// defined: *swap* `[(a, b)] ↦ [(b, a)]` and *diagonal*
/// `[(a, b)] ↦ [(a, a)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpmPer {
    x_size: usize,
    per: Per,
}

impl CpmPer {
    pub fn new<I>(x_size: usize, pairs: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_per(x_size, Per::new(x_size * x_size, pairs)?)
    }

    pub fn from_per(x_size: usize, per: Per) -> Result<Self, Error> {
        if per.base() != x_size * x_size {
            return Err(Error::InvalidPer(format!(
                "base {} is not the square of {}",
                per.base(),
                x_size
            )));
        }
        let x = FinSet::of_size(x_size);
        if !Rel::is_completely_positive(per.relation(), &x, &x, &Tolerance::default()) {
            return Err(Error::InvalidPer(
                "fails the complete-positivity closure conditions".into(),
            ));
        }
        Ok(Self { x_size, per })
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn per(&self) -> &Per {
        &self.per
    }

    fn decode(&self, flat: usize) -> (usize, usize) {
        (flat / self.x_size, flat % self.x_size)
    }

    fn encode(&self, a: usize, b: usize) -> usize {
        a * self.x_size + b
    }

    /// The swap map on classes, as a vector indexed by class.
    pub fn class_swap(&self) -> Vec<usize> {
        self.per
            .classes()
            .iter()
            .map(|members| {
                let (a, b) = self.decode(members[0]);
                self.per
                    .class_of(self.encode(b, a))
                    .expect("closure keeps the swap in the domain")
            })
            .collect()
    }

    /// The diagonal map on classes, as a vector indexed by class.
    pub fn class_diag(&self) -> Vec<usize> {
        self.per
            .classes()
            .iter()
            .map(|members| {
                let (a, _) = self.decode(members[0]);
                self.per
                    .class_of(self.encode(a, a))
                    .expect("closure keeps the diagonal in the domain")
            })
            .collect()
    }

    /// A class is diagonal when it contains a pair `(x, x)`; equivalently
    /// the diagonal map fixes it.
    pub fn is_diagonal_class(&self, c: usize) -> bool {
        self.class_diag()[c] == c
    }

    /// Whether every pair `(x, x)` is in the domain — the object-level
    /// unitality condition for doubled PERs.
    pub fn has_total_diagonal(&self) -> bool {
        (0..self.x_size).all(|x| self.per.in_domain(self.encode(x, x)))
    }
}

/// Whether a relation is a partial equivalence relation.
pub fn per_check(r: &Relation) -> bool {
    Per::from_relation(r).is_ok()
}

/// Whether a relation on a doubled set is a PER satisfying the
/// complete-positivity closure conditions.
pub fn cpm_per_check(x_size: usize, r: &Relation) -> bool {
    Per::from_relation(r)
        .and_then(|per| CpmPer::from_per(x_size, per))
        .is_ok()
}

/// A dagger isomorphism between split PERs over plain relations: any
/// matching of quotients works, so one exists exactly when the class
/// counts agree. Returns the class-matching relation.
pub fn split_iso_rel(a: &Per, b: &Per) -> Option<Relation> {
    if a.class_count() != b.class_count() {
        return None;
    }
    let mut pairs = Vec::new();
    for (ca, cb) in a.classes().iter().zip(b.classes()) {
        for &x in ca {
            for &y in cb {
                pairs.push((x, y));
            }
        }
    }
    let u = Relation::new(a.relation().src().clone(), b.relation().src().clone(), pairs)
        .expect("class members in range");
    debug_assert_eq!(u.then(&u.dagger()), *a.relation());
    debug_assert_eq!(u.dagger().then(&u), *b.relation());
    Some(u)
}

/// A dagger isomorphism between doubled-PER objects that is completely
/// positive in both directions: a bijection of classes commuting with the
/// class-level swap and diagonal maps. Found by backtracking; the witness
/// relation is verified against the actual deciders before being returned.
pub fn split_iso_cpm_rel(a: &CpmPer, b: &CpmPer) -> Option<Relation> {
    let n = a.per().class_count();
    if n != b.per().class_count() {
        return None;
    }
    let (sa, da) = (a.class_swap(), a.class_diag());
    let (sb, db) = (b.class_swap(), b.class_diag());
    let mut beta: Vec<usize> = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search_class_bijection(a, b, &sa, &da, &sb, &db, &mut beta, &mut used, 0)
}

#[allow(clippy::too_many_arguments)]
fn search_class_bijection(
    a: &CpmPer,
    b: &CpmPer,
    sa: &[usize],
    da: &[usize],
    sb: &[usize],
    db: &[usize],
    beta: &mut Vec<usize>,
    used: &mut Vec<bool>,
    c: usize,
) -> Option<Relation> {
    let n = beta.len();
    if c == n {
        let mut pairs = Vec::new();
        for (ca, &t) in beta.iter().enumerate() {
            for &x in &a.per().classes()[ca] {
                for &y in &b.per().classes()[t] {
                    pairs.push((x, y));
                }
            }
        }
        let u = Relation::new(
            FinSet::of_size(a.per().base()),
            FinSet::of_size(b.per().base()),
            pairs,
        )
        .expect("members in range");
        let tol = Tolerance::default();
        let (xa, xb) = (FinSet::of_size(a.x_size()), FinSet::of_size(b.x_size()));
        let ok = u.then(&u.dagger()) == *a.per().relation()
            && u.dagger().then(&u) == *b.per().relation()
            && Rel::is_completely_positive(&u, &xa, &xb, &tol)
            && Rel::is_completely_positive(&u.dagger(), &xb, &xa, &tol);
        return if ok { Some(u) } else { None };
    }
    for t in 0..n {
        if used[t] {
            continue;
        }
        // the partial assignment must already commute with swap and diag
        let consistent = |x: usize, y: usize| beta[x] == usize::MAX || beta[x] == y;
        if !consistent(sa[c], sb[t]) || !consistent(da[c], db[t]) {
            continue;
        }
        if sa[c] == c && sb[t] != t {
            continue;
        }
        if da[c] == c && db[t] != t {
            continue;
        }
        let mut fine = true;
        for c2 in 0..c {
            if sa[c2] == c && sb[beta[c2]] != t {
                fine = false;
                break;
            }
            if da[c2] == c && db[beta[c2]] != t {
                fine = false;
                break;
            }
        }
        if !fine {
            continue;
        }
        beta[c] = t;
        used[t] = true;
        if let Some(u) = search_class_bijection(a, b, sa, da, sb, db, beta, used, c + 1) {
            return Some(u);
        }
        beta[c] = usize::MAX;
        used[t] = false;
    }
    None
}

/// The doubled PER carried by the regular-action projection of a groupoid
/// algebra: `(a, b) ~ (c, d)` exactly when `a⁻¹ ∘ b` and `c⁻¹ ∘ d` are both
/// defined and equal. Its classes correspond bijectively to the morphisms
/// of the groupoid, with class-swap matching inversion and class-diagonal
/// matching `g ↦ id_cod(g)`.
pub fn f_image_per(g: &Groupoid) -> CpmPer {
    let m = g.morphisms();
    let mut by_key: Vec<Vec<usize>> = vec![Vec::new(); m.max(1)];
    for a in 0..m {
        for b in 0..m {
            if g.cod(a) == g.cod(b) {
                let key = g.compose(g.inv(a), b).expect("composable by construction");
                by_key[key].push(a * m + b);
            }
        }
    }
    let mut pairs = Vec::new();
    for members in &by_key {
        for &p in members {
            for &q in members {
                pairs.push((p, q));
            }
        }
    }
    CpmPer::new(m, pairs).expect("groupoid image satisfies the closure conditions")
}

/// Decide whether a doubled-PER object is isomorphic to the image of one
/// *specific* groupoid, returning the bijection from morphisms of the
/// groupoid to classes of the object when it exists. Identities must land
/// on diagonal classes, inverse must match class-swap, and source
/// identities must match class-diagonal; the search reuses the
/// class-bijection backtracking.
pub fn f_image_test(q: &CpmPer, g: &Groupoid) -> Option<Vec<usize>> {
    let image = f_image_per(g);
    let u = split_iso_cpm_rel(&image, q)?;
    // read the morphism-to-class bijection off the witness: the class of
    // the image containing (a, b) corresponds to the morphism a⁻¹ ∘ b
    let m = g.morphisms();
    let mut beta = vec![usize::MAX; m];
    for (i, members) in image.per().classes().iter().enumerate() {
        let (a, b) = (members[0] / m, members[0] % m);
        let key = g.compose(g.inv(a), b).expect("class members compose");
        let x = members[0];
        let y = u.image(x).next().expect("witness is total on the domain");
        let target = q.per().class_of(y).expect("witness lands in the domain");
        beta[key] = target;
        debug_assert!(i < image.per().class_count());
    }
    Some(beta)
}

/// Decide whether a doubled-PER object is isomorphic (in the
/// completely-positive sense) to the image of *some* groupoid, searching
/// all groupoids with as many morphisms as the object has classes.
/// Returns the groupoid and the isomorphism witness when one exists.
pub fn f_image_search(q: &CpmPer) -> Result<Option<(Groupoid, Relation)>, Error> {
    for g in enumerate_groupoids(q.per().class_count())? {
        let image = f_image_per(&g);
        if let Some(u) = split_iso_cpm_rel(&image, q) {
            return Ok(Some((g, u)));
        }
    }
    Ok(None)
}

/// The doubled PER on a three-element set keeping every singleton class
/// except `(0, 2)` and `(2, 0)`: unital (the whole diagonal is present)
/// and completely positive, but the image of no groupoid — its classes
/// would need three objects joined by arrows `0 ↔ 1 ↔ 2`, forcing a
/// connected component with at least nine morphisms where only seven
/// exist.
pub fn unital_non_image_object() -> CpmPer {
    let keep = (0..9).filter(|&p| p != 2 && p != 6);
    CpmPer::new(3, keep.map(|p| (p, p))).expect("valid doubled PER")
}

/// Search for a dagger splitting of a PER idempotent on a groupoid algebra
/// through *another groupoid algebra*: every splitting must relate each
/// equivalence class to a single morphism of the target bijectively, so it
/// suffices to scan all groupoids with `#classes` morphisms and all
/// bijections, keeping those whose graph satisfies the arrow-level
/// morphism condition. Returns a witness `(H, S)` when a splitting exists,
/// `None` when provably none does.
pub fn verify_no_dagger_splitting(
    g: &Groupoid,
    r: &Relation,
) -> Result<Option<(Groupoid, Relation)>, Error> {
    let m = g.morphisms();
    if r.src().size() != m || r.dst().size() != m {
        return Err(Error::Mismatch(
            "idempotent must live on the morphism set of the groupoid".into(),
        ));
    }
    let per = Per::from_relation(r)?;
    if !is_cpstar_rel_groupoid(r, g, g) {
        return Err(Error::NotCompletelyPositive(
            "idempotent fails the arrow-level morphism condition".into(),
        ));
    }
    let k = per.class_count();
    // flat lookup tables for the inner loop
    let class_of: Vec<Option<usize>> = (0..m).map(|x| per.class_of(x)).collect();
    let domain: Vec<usize> = (0..m).filter(|&x| class_of[x].is_some()).collect();
    for h in enumerate_groupoids(k)? {
        let mut witness: Option<Vec<usize>> = None;
        util::for_each_permutation(k, |perm| {
            if witness.is_some() {
                return;
            }
            // candidate splitting: x ↦ perm[class of x]
            let ok = domain.iter().all(|&x| {
                let y = perm[class_of[x].unwrap()];
                let inv_ok = match class_of[g.inv(x)] {
                    Some(c) => perm[c] == h.inv(y),
                    None => false,
                };
                let id_ok = match class_of[g.identity_of(g.dom(x))] {
                    Some(c) => perm[c] == h.identity_of(h.dom(y)),
                    None => false,
                };
                inv_ok && id_ok
            });
            if ok {
                witness = Some(perm.to_vec());
            }
        });
        if let Some(perm) = witness {
            let pairs = domain.iter().map(|&x| (x, perm[class_of[x].unwrap()]));
            let s = Relation::new(
                FinSet::of_size(m),
                FinSet::of_size(h.morphisms()),
                pairs,
            )
            .expect("in range");
            // verify the witness end to end before reporting it
            assert_eq!(s.then(&s.dagger()), *r, "splitting equation failed");
            assert_eq!(
                s.dagger().then(&s),
                Relation::identity(&FinSet::of_size(h.morphisms())),
                "co-splitting equation failed"
            );
            assert!(is_cpstar_rel_groupoid(&s, g, &h));
            assert!(is_cpstar_rel_groupoid(&s.dagger(), &h, g));
            return Ok(Some((h, s)));
        }
    }
    Ok(None)
}
