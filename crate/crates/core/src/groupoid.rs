//! Finite groupoids presented by composition tables.
//!
//! A groupoid is stored as a list of morphisms with domain, codomain and a
//! partial composition table `comp[g][h] = g ∘ h` ("g after h", defined
//! exactly when `dom(g) = cod(h)`). Identities and inverses are derived and
//! verified rather than supplied. Every finite groupoid is a disjoint union
//! of connected pieces, and a connected piece with `k` objects and vertex
//! group `G` has `k²·|G|` morphisms; enumeration walks that classification
//! against a library of group tables up to order nine, with an independent
//! brute-force table search as a cross-check for small sizes.
//!
//! The groupoid algebra (morphisms as basis, composition as multiplication,
//! the sum of identities as unit) is a dagger Frobenius algebra in either
//! backend; over relations it is special, over matrices it normalises by
//! the square root of the counting map.

use crate::backend::{Backend, Tolerance};
use crate::error::Error;
use crate::frobenius::FrobeniusAlgebra;
use crate::rel::{FinSet, Relation};
use crate::util;
use std::collections::BTreeSet;

/// A finite group given by its multiplication table, identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    mult: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Validate a multiplication table: square, closed, identity at 0,
    /// associative, and with two-sided inverses.
    pub fn new(name: impl Into<String>, mult: Vec<Vec<usize>>) -> Result<Self, Error> {
        let name = name.into();
        let n = mult.len();
        let fail = |msg: String| Err(Error::InvalidGroupoid(format!("group {name}: {msg}")));
        for row in &mult {
            if row.len() != n {
                return fail("table is not square".into());
            }
            if row.iter().any(|&x| x >= n) {
                return fail("table entry out of range".into());
            }
        }
        for a in 0..n {
            if mult[0][a] != a || mult[a][0] != a {
                return fail("index 0 is not the identity".into());
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return fail(format!("not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| mult[a][b] == 0 && mult[b][a] == 0) {
                return fail(format!("element {a} has no inverse"));
            }
        }
        Ok(Self { name, mult })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "a group needs at least the identity");
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(format!("Z{n}"), mult).expect("cyclic table")
    }

    /// Direct product, with the pair `(a, b)` encoded as `a·|H| + b`.
    pub fn product(&self, other: &GroupTable) -> Self {
        let (n, m) = (self.order(), other.order());
        let mult = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mult[x / m][y / m] * m + other.mult[x % m][y % m])
                    .collect()
            })
            .collect();
        Self::new(format!("{}x{}", self.name, other.name), mult).expect("product table")
    }

    /// The symmetric group on three letters, permutations listed in
    /// lexicographic order so the identity comes first.
    pub fn sym3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mult = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index([p[q[0]], p[q[1]], p[q[2]]]))
                    .collect()
            })
            .collect();
        Self::new("S3", mult).expect("symmetric group table")
    }

    /// The dihedral group of the square, elements `r^a s^b` encoded as
    /// `b·4 + a`.
    pub fn dihedral4() -> Self {
        let idx = |a: usize, b: usize| b * 4 + a;
        let mut mult = vec![vec![0; 8]; 8];
        for a in 0..4 {
            for b in 0..2 {
                for c in 0..4 {
                    for d in 0..2 {
                        let rot = if b == 0 { (a + c) % 4 } else { (a + 4 - c) % 4 };
                        mult[idx(a, b)][idx(c, d)] = idx(rot, (b + d) % 2);
                    }
                }
            }
        }
        Self::new("D4", mult).expect("dihedral table")
    }

    /// The quaternion group, elements `±1, ±i, ±j, ±k` encoded as
    /// `sign·4 + axis`.
    pub fn quaternion() -> Self {
        // axis_mult[t][u] = (sign, axis) of the product of basis elements.
        let axis_mult = |t: usize, u: usize| -> (usize, usize) {
            match (t, u) {
                (0, u) => (0, u),
                (t, 0) => (0, t),
                (t, u) if t == u => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        let mut mult = vec![vec![0; 8]; 8];
        for s1 in 0..2 {
            for t1 in 0..4 {
                for s2 in 0..2 {
                    for t2 in 0..4 {
                        let (s3, t3) = axis_mult(t1, t2);
                        mult[s1 * 4 + t1][s2 * 4 + t2] = ((s1 + s2 + s3) % 2) * 4 + t3;
                    }
                }
            }
        }
        Self::new("Q8", mult).expect("quaternion table")
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }
}

/// One representative per isomorphism class of groups of the given order,
/// for orders up to nine.
pub fn builtin_groups(order: usize) -> Result<Vec<GroupTable>, Error> {
    let c = GroupTable::cyclic;
    Ok(match order {
        1..=3 | 5 | 7 => vec![c(order)],
        4 => vec![c(4), c(2).product(&c(2))],
        6 => vec![c(6), GroupTable::sym3()],
        8 => vec![
            c(8),
            c(2).product(&c(4)),
            c(2).product(&c(2)).product(&c(2)),
            GroupTable::dihedral4(),
            GroupTable::quaternion(),
        ],
        9 => vec![c(9), c(3).product(&c(3))],
        _ => {
            return Err(Error::Unsupported(format!(
                "group tables are available up to order 9, requested {order}"
            )))
        }
    })
}

/// A finite groupoid given by a partial composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    objects: usize,
    dom: Vec<usize>,
    cod: Vec<usize>,
    comp: Vec<Vec<Option<usize>>>,
    inv: Vec<usize>,
    ids: Vec<usize>,
}

impl Groupoid {
    /// Validate a composition table and derive identities and inverses.
    ///
    /// `comp[g][h]` must be defined exactly when `dom(g) = cod(h)`, with
    /// the expected endpoint types; associativity, an identity on every
    /// object and a two-sided inverse for every morphism are all checked.
    pub fn new(
        objects: usize,
        dom: Vec<usize>,
        cod: Vec<usize>,
        comp: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, Error> {
        let m = dom.len();
        let fail = |msg: String| Err(Error::InvalidGroupoid(msg));
        if cod.len() != m || comp.len() != m || comp.iter().any(|row| row.len() != m) {
            return fail("domain, codomain and table sizes disagree".into());
        }
        if dom.iter().chain(&cod).any(|&o| o >= objects) {
            return fail("object index out of range".into());
        }
        for g in 0..m {
            for h in 0..m {
                match comp[g][h] {
                    Some(x) => {
                        if dom[g] != cod[h] {
                            return fail(format!("composition {g}∘{h} defined but not composable"));
                        }
                        if x >= m || dom[x] != dom[h] || cod[x] != cod[g] {
                            return fail(format!("composition {g}∘{h} has wrong endpoints"));
                        }
                    }
                    None => {
                        if dom[g] == cod[h] {
                            return fail(format!("composable pair {g}∘{h} left undefined"));
                        }
                    }
                }
            }
        }
        for g in 0..m {
            for h in 0..m {
                let Some(gh) = comp[g][h] else { continue };
                for k in 0..m {
                    let Some(hk) = comp[h][k] else { continue };
                    if comp[gh][k] != comp[g][hk] {
                        return fail(format!("not associative at ({g}, {h}, {k})"));
                    }
                }
            }
        }
        let mut ids = Vec::with_capacity(objects);
        for o in 0..objects {
            let found = (0..m).find(|&e| {
                dom[e] == o
                    && cod[e] == o
                    && (0..m).all(|h| cod[h] != o || comp[e][h] == Some(h))
                    && (0..m).all(|g| dom[g] != o || comp[g][e] == Some(g))
            });
            match found {
                Some(e) => ids.push(e),
                None => return fail(format!("object {o} has no identity")),
            }
        }
        let mut inv = Vec::with_capacity(m);
        for g in 0..m {
            let found = (0..m).find(|&h| {
                comp[h][g] == Some(ids[dom[g]]) && comp[g][h] == Some(ids[cod[g]])
            });
            match found {
                Some(h) => inv.push(h),
                None => return fail(format!("morphism {g} has no inverse")),
            }
        }
        Ok(Self { objects, dom, cod, comp, inv, ids })
    }

    pub fn empty() -> Self {
        Self::new(0, vec![], vec![], vec![]).expect("empty groupoid")
    }

    /// The one-object groupoid of a group.
    pub fn from_group(group: &GroupTable) -> Self {
        Self::connected(1, group)
    }

    /// The connected groupoid with `k` objects and vertex group `G`:
    /// morphisms `((i, j), g)` from `j` to `i`, encoded `(i·k + j)·|G| + g`,
    /// composed by matching the middle object and multiplying in `G`.
    pub fn connected(k: usize, group: &GroupTable) -> Self {
        assert!(k >= 1, "a connected groupoid needs an object");
        let ord = group.order();
        let m = k * k * ord;
        let enc = |i: usize, j: usize, g: usize| (i * k + j) * ord + g;
        let mut dom = vec![0; m];
        let mut cod = vec![0; m];
        for i in 0..k {
            for j in 0..k {
                for g in 0..ord {
                    dom[enc(i, j, g)] = j;
                    cod[enc(i, j, g)] = i;
                }
            }
        }
        let mut comp = vec![vec![None; m]; m];
        for i in 0..k {
            for j in 0..k {
                for g in 0..ord {
                    for j2 in 0..k {
                        for g2 in 0..ord {
                            comp[enc(i, j, g)][enc(j, j2, g2)] =
                                Some(enc(i, j2, group.mult(g, g2)));
                        }
                    }
                }
            }
        }
        Self::new(k, dom, cod, comp).expect("connected groupoid")
    }

    /// The indiscrete groupoid: exactly one morphism `j → i` for every
    /// ordered pair, encoded `i·k + j`. Its algebra is the
    /// matrix-multiplication algebra on `k·k`.
    pub fn indiscrete(k: usize) -> Self {
        Self::connected(k, &GroupTable::cyclic(1))
    }

    /// Disjoint union, with `other`'s objects and morphisms shifted up.
    pub fn disjoint_union(&self, other: &Groupoid) -> Self {
        let (m1, m2) = (self.morphisms(), other.morphisms());
        let m = m1 + m2;
        let mut dom = self.dom.clone();
        let mut cod = self.cod.clone();
        dom.extend(other.dom.iter().map(|&o| o + self.objects));
        cod.extend(other.cod.iter().map(|&o| o + self.objects));
        let mut comp = vec![vec![None; m]; m];
        for g in 0..m1 {
            for h in 0..m1 {
                comp[g][h] = self.comp[g][h];
            }
        }
        for g in 0..m2 {
            for h in 0..m2 {
                comp[m1 + g][m1 + h] = other.comp[g][h].map(|x| x + m1);
            }
        }
        Self::new(self.objects + other.objects, dom, cod, comp).expect("disjoint union")
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn morphisms(&self) -> usize {
        self.dom.len()
    }

    pub fn dom(&self, g: usize) -> usize {
        self.dom[g]
    }

    pub fn cod(&self, g: usize) -> usize {
        self.cod[g]
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.comp[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    /// The identity morphism on each object, indexed by object.
    pub fn identities(&self) -> &[usize] {
        &self.ids
    }

    pub fn identity_of(&self, o: usize) -> usize {
        self.ids[o]
    }

    pub fn is_identity(&self, g: usize) -> bool {
        self.ids[self.dom[g]] == g
    }

    /// A total invariant of the isomorphism class: the lexicographically
    /// least table encoding over all relabellings of morphisms (objects are
    /// renamed by first appearance). Two groupoids are isomorphic exactly
    /// when their keys agree.
    pub fn canonical_key(&self) -> Vec<usize> {
        let m = self.morphisms();
        let mut best: Option<Vec<usize>> = None;
        util::for_each_permutation(m, |perm| {
            let mut from_new = vec![0usize; m];
            for old in 0..m {
                from_new[perm[old]] = old;
            }
            let mut obj_map = vec![usize::MAX; self.objects];
            let mut next = 0;
            for &old in &from_new {
                for o in [self.dom[old], self.cod[old]] {
                    if obj_map[o] == usize::MAX {
                        obj_map[o] = next;
                        next += 1;
                    }
                }
            }
            let mut key = Vec::with_capacity(2 + 2 * m + m * m);
            key.push(self.objects);
            key.push(m);
            for &old in &from_new {
                key.push(obj_map[self.dom[old]]);
            }
            for &old in &from_new {
                key.push(obj_map[self.cod[old]]);
            }
            for &g in &from_new {
                for &h in &from_new {
                    key.push(match self.comp[g][h] {
                        Some(x) => perm[x] + 1,
                        None => 0,
                    });
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        });
        best.expect("at least the identity relabelling")
    }
}

/// One representative per isomorphism class of groupoids with exactly `n`
/// morphisms, built from the classification into connected components.
pub fn enumerate_groupoids(n: usize) -> Result<Vec<Groupoid>, Error> {
    // every connected component descriptor (k objects, vertex group) whose
    // morphism count fits
    let mut parts: Vec<(usize, usize, GroupTable)> = Vec::new();
    for size in 1..=n {
        let mut k = 1;
        while k * k <= size {
            if size % (k * k) == 0 {
                for group in builtin_groups(size / (k * k))? {
                    parts.push((size, k, group));
                }
            }
            k += 1;
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    build_multisets(&parts, 0, n, &mut chosen, &mut out);
    Ok(out)
}

fn build_multisets(
    parts: &[(usize, usize, GroupTable)],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Groupoid>,
) {
    if remaining == 0 {
        let mut g = Groupoid::empty();
        for &idx in chosen.iter() {
            let (_, k, ref group) = parts[idx];
            g = g.disjoint_union(&Groupoid::connected(k, group));
        }
        out.push(g);
        return;
    }
    for idx in start..parts.len() {
        if parts[idx].0 <= remaining {
            chosen.push(idx);
            build_multisets(parts, idx, remaining - parts[idx].0, chosen, out);
            chosen.pop();
        }
    }
}

/// Count isomorphism classes of groupoids with exactly `n` morphisms by
/// exhaustively searching composition tables — an independent oracle for
/// [`enumerate_groupoids`], practical for `n ≤ 4`.
pub fn count_groupoids_by_table_search(n: usize) -> usize {
    assert!(n <= 5, "table search is exponential; use the classification");
    if n == 0 {
        return 1;
    }
    let mut keys: BTreeSet<Vec<usize>> = BTreeSet::new();
    for objects in 1..=n {
        let total = objects.pow(n as u32);
        let decode = |mut mask: usize| -> Vec<usize> {
            let mut v = vec![0; n];
            for slot in v.iter_mut() {
                *slot = mask % objects;
                mask /= objects;
            }
            v
        };
        for dmask in 0..total {
            let dom = decode(dmask);
            'cods: for cmask in 0..total {
                let cod = decode(cmask);
                // every object needs at least a candidate identity
                for o in 0..objects {
                    if !(0..n).any(|g| dom[g] == o && cod[g] == o) {
                        continue 'cods;
                    }
                }
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|g| (0..n).map(move |h| (g, h)))
                    .filter(|&(g, h)| dom[g] == cod[h])
                    .collect();
                let mut comp = vec![vec![None; n]; n];
                let mut row_used = vec![0u32; n];
                let mut col_used = vec![0u32; n];
                fill_table(
                    &pairs, 0, &dom, &cod, objects, &mut comp, &mut row_used, &mut col_used,
                    &mut keys,
                );
            }
        }
    }
    keys.len()
}

#[allow(clippy::too_many_arguments)]
fn fill_table(
    pairs: &[(usize, usize)],
    idx: usize,
    dom: &[usize],
    cod: &[usize],
    objects: usize,
    comp: &mut Vec<Vec<Option<usize>>>,
    row_used: &mut [u32],
    col_used: &mut [u32],
    keys: &mut BTreeSet<Vec<usize>>,
) {
    let n = dom.len();
    if idx == pairs.len() {
        if let Ok(g) = Groupoid::new(objects, dom.to_vec(), cod.to_vec(), comp.clone()) {
            keys.insert(g.canonical_key());
        }
        return;
    }
    let (g, h) = pairs[idx];
    for x in 0..n {
        // candidate must typecheck and respect the cancellation laws
        if dom[x] == dom[h]
            && cod[x] == cod[g]
            && row_used[g] & (1 << x) == 0
            && col_used[h] & (1 << x) == 0
        {
            comp[g][h] = Some(x);
            row_used[g] |= 1 << x;
            col_used[h] |= 1 << x;
            fill_table(pairs, idx + 1, dom, cod, objects, comp, row_used, col_used, keys);
            comp[g][h] = None;
            row_used[g] &= !(1 << x);
            col_used[h] &= !(1 << x);
        }
    }
}

/// The groupoid algebra: morphisms as basis, composition as multiplication
/// (zero when undefined), the sum of identities as unit. The normaliser is
/// computed, so the result is ready for doubling constructions.
pub fn groupoid_to_algebra<B: Backend>(
    groupoid: &Groupoid,
    tol: &Tolerance,
) -> Result<FrobeniusAlgebra<B>, Error> {
    let m = groupoid.morphisms();
    let a = B::obj_of_size(m);
    let a2 = B::tensor_obj(&a, &a);
    let mut mpairs = Vec::new();
    for g in 0..m {
        for h in 0..m {
            if let Some(x) = groupoid.compose(g, h) {
                mpairs.push((x, g * m + h));
            }
        }
    }
    let mult = B::mor_from_pairs(&a2, &a, &mpairs);
    let upairs: Vec<(usize, usize)> = groupoid.identities().iter().map(|&e| (e, 0)).collect();
    let unit = B::mor_from_pairs(&B::unit_obj(), &a, &upairs);
    let alg = FrobeniusAlgebra::from_parts(a, mult, unit, None)?;
    let z = alg.find_normaliser(tol)?;
    alg.with_normaliser(z)
}

/// The indiscrete groupoid on three objects: the smallest groupoid whose
/// algebra carries a completely positive idempotent with no dagger
/// splitting. See [`non_splittable_idempotent`].
pub fn nine_morphism_groupoid() -> Groupoid {
    Groupoid::indiscrete(3)
}

/// The diagonal relation on the morphisms of [`nine_morphism_groupoid`]
/// minus the arrow `0 → 2` and its inverse: a dagger idempotent satisfying
/// the complete positivity conditions whose splitting would need a third
/// object in one connected component — impossible with only seven
/// morphisms.
pub fn non_splittable_idempotent() -> Relation {
    let removed = [2usize, 6];
    let base = FinSet::of_size(9);
    Relation::new(
        base.clone(),
        base,
        (0..9).filter(|g| !removed.contains(g)).map(|g| (g, g)),
    )
    .expect("diagonal relation")
}
