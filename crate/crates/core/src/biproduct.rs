//! Direct sums in both backends: the summand bookkeeping of a biproduct,
//! the Frobenius algebra on `A ⊕ B`, the zero algebra, the structural
//! morphisms (all star-homomorphisms), duals of sums, and the
//! distributivity isomorphism between `(A⊕B)⊗(C⊕D)` and the sum of the
//! four pairwise tensors.
//!
//! Sums use offset layout: the first summand occupies the low indices,
//! each later summand the next block. Only binary sums and a zero object
//! are primitive; n-ary sums are left folds.

use crate::backend::{Backend, Tolerance};
use crate::error::Error;
use crate::frobenius::FrobeniusAlgebra;

/// An ordered list of summands with offset-based injections and
/// projections into the flat total object.
#[derive(Debug, Clone, PartialEq)]
pub struct SumObject<B: Backend> {
    summands: Vec<B::Obj>,
}

impl<B: Backend> SumObject<B> {
    pub fn new(summands: Vec<B::Obj>) -> Self {
        Self { summands }
    }

    pub fn summands(&self) -> &[B::Obj] {
        &self.summands
    }

    /// The flat object holding all summands.
    pub fn total(&self) -> B::Obj {
        self.summands
            .iter()
            .fold(B::zero_obj(), |acc, s| B::sum_obj(&acc, s))
    }

    /// Index where summand `i` starts inside the total.
    pub fn offset(&self, i: usize) -> usize {
        self.summands[..i].iter().map(B::obj_size).sum()
    }

    /// The injection of summand `i` into the total.
    pub fn injection(&self, i: usize) -> B::Mor {
        let off = self.offset(i);
        let pairs: Vec<(usize, usize)> = (0..B::obj_size(&self.summands[i]))
            .map(|k| (off + k, k))
            .collect();
        B::mor_from_pairs(&self.summands[i], &self.total(), &pairs)
    }

    /// The projection onto summand `i`, the dagger of the injection.
    pub fn projection(&self, i: usize) -> B::Mor {
        B::dagger(&self.injection(i))
    }
}

/// The unique normal dagger Frobenius algebra on the zero object.
pub fn zero_algebra<B: Backend>() -> FrobeniusAlgebra<B> {
    let zero = B::zero_obj();
    let mult = B::zero_mor(&B::tensor_obj(&zero, &zero), &zero);
    let unit = B::zero_mor(&B::unit_obj(), &zero);
    FrobeniusAlgebra::from_parts(zero, mult, unit, None).expect("zero shapes agree")
}

/// The direct-sum algebra on `A ⊕ B`: multiply componentwise through the
/// projections, with the sum of the units as unit. Both inputs must be
/// normalised (normalise first if not); the result is again normalised.
pub fn oplus_algebra<B: Backend>(
    a: &FrobeniusAlgebra<B>,
    b: &FrobeniusAlgebra<B>,
    tol: &Tolerance,
) -> Result<FrobeniusAlgebra<B>, Error> {
    for (alg, which) in [(a, "left"), (b, "right")] {
        if !alg.is_normalised(tol) {
            return Err(Error::InvalidAlgebra(format!(
                "{which} summand is not normalised; normalise it first"
            )));
        }
    }
    let sum = SumObject::<B>::new(vec![a.carrier().clone(), b.carrier().clone()]);
    let total = sum.total();
    let component = |alg: &FrobeniusAlgebra<B>, i: usize| {
        let (inj, proj) = (sum.injection(i), sum.projection(i));
        let both = B::tensor(&proj, &proj);
        (
            B::then(&B::then(&both, alg.mult()), &inj),
            B::then(alg.unit(), &inj),
        )
    };
    let (ma, ua) = component(a, 0);
    let (mb, ub) = component(b, 1);
    FrobeniusAlgebra::from_parts(total, B::plus(&ma, &mb), B::plus(&ua, &ub), None)
}

/// Fold a list of normalised algebras into one direct sum (the zero
/// algebra for an empty list).
pub fn oplus_all<B: Backend>(
    algebras: &[FrobeniusAlgebra<B>],
    tol: &Tolerance,
) -> Result<FrobeniusAlgebra<B>, Error> {
    let mut acc = zero_algebra::<B>();
    for alg in algebras {
        acc = oplus_algebra(&acc, alg, tol)?;
    }
    Ok(acc)
}

/// The structural morphisms attached to a pair of normalised algebras,
/// together with the algebras they point at. Every one of them is a
/// star-homomorphism and a completely positive morphism of the algebra
/// category; only the injection fails to be unital (for a non-zero
/// complement).
#[derive(Debug, Clone)]
pub struct StructuralMorphisms<B: Backend> {
    /// `A → 0`.
    pub zero: B::Mor,
    /// `i_A : A → A ⊕ B`.
    pub inj: B::Mor,
    /// `p_A = i_A† : A ⊕ B → A`.
    pub proj: B::Mor,
    /// `Δ : A → A ⊕ A`, `a ↦ (a, a)`.
    pub diag: B::Mor,
    /// The algebra on `A ⊕ B`.
    pub sum: FrobeniusAlgebra<B>,
    /// The algebra on `A ⊕ A`.
    pub double: FrobeniusAlgebra<B>,
}

pub fn structural_morphisms<B: Backend>(
    a: &FrobeniusAlgebra<B>,
    b: &FrobeniusAlgebra<B>,
    tol: &Tolerance,
) -> Result<StructuralMorphisms<B>, Error> {
    let sum = oplus_algebra(a, b, tol)?;
    let double = oplus_algebra(a, a, tol)?;
    let pair = SumObject::<B>::new(vec![a.carrier().clone(), b.carrier().clone()]);
    let twice = SumObject::<B>::new(vec![a.carrier().clone(), a.carrier().clone()]);
    Ok(StructuralMorphisms {
        zero: B::zero_mor(a.carrier(), &B::zero_obj()),
        inj: pair.injection(0),
        proj: pair.projection(0),
        diag: B::plus(&twice.injection(0), &twice.injection(1)),
        sum,
        double,
    })
}

/// Compact-closed structure on a sum, assembled from the summand cups and
/// caps pushed through the injections. With flat duals this equals the
/// plain cup/cap of the total object; returns `(cup, cap)`.
pub fn dual_of_sum<B: Backend>(a: &B::Obj, b: &B::Obj) -> (B::Mor, B::Mor) {
    let sum = SumObject::<B>::new(vec![a.clone(), b.clone()]);
    let part = |i: usize, obj: &B::Obj| {
        let inj = sum.injection(i);
        B::then(&B::cup(obj), &B::tensor(&inj, &inj))
    };
    let cup = B::plus(&part(0, a), &part(1, b));
    (cup.clone(), B::dagger(&cup))
}

/// The mutually inverse distributivity morphisms between
/// `(A⊕B) ⊗ (C⊕D)` and `(A⊗C) ⊕ (A⊗D) ⊕ (B⊗C) ⊕ (B⊗D)`.
pub fn distributivity_iso<B: Backend>(
    a: &B::Obj,
    b: &B::Obj,
    c: &B::Obj,
    d: &B::Obj,
) -> (B::Mor, B::Mor) {
    let left = SumObject::<B>::new(vec![a.clone(), b.clone()]);
    let right = SumObject::<B>::new(vec![c.clone(), d.clone()]);
    let prods = SumObject::<B>::new(
        [(0usize, 0usize), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(i, j)| B::tensor_obj(&left.summands()[i], &right.summands()[j]))
            .collect(),
    );
    let mut forward: Option<B::Mor> = None;
    let mut backward: Option<B::Mor> = None;
    for (k, &(i, j)) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
        let grab = B::tensor(&left.projection(i), &right.projection(j));
        let fwd = B::then(&grab, &prods.injection(k));
        let put = B::tensor(&left.injection(i), &right.injection(j));
        let back = B::then(&prods.projection(k), &put);
        forward = Some(match forward {
            Some(f) => B::plus(&f, &fwd),
            None => fwd,
        });
        backward = Some(match backward {
            Some(g) => B::plus(&g, &back),
            None => back,
        });
    }
    (forward.expect("four summands"), backward.expect("four summands"))
}

/// Biproduct addition `[id, id] ∘ (f ⊕ g) ∘ ⟨id, id⟩`, which must agree
/// with the backend's own morphism addition.
pub fn biproduct_addition<B: Backend>(f: &B::Mor, g: &B::Mor) -> B::Mor {
    let src = B::src(f);
    let dst = B::dst(f);
    let pair_in = SumObject::<B>::new(vec![src.clone(), src]);
    let pair_out = SumObject::<B>::new(vec![dst.clone(), dst]);
    let diag = B::plus(&pair_in.injection(0), &pair_in.injection(1));
    let codiag = B::plus(&pair_out.projection(0), &pair_out.projection(1));
    B::then(&B::then(&diag, &B::direct_sum(f, g)), &codiag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fhilb::{FHilb, Matrix};
    use crate::frobenius::{is_star_homomorphism, is_unital_star_homomorphism};
    use crate::groupoid::{groupoid_to_algebra, Groupoid, GroupTable};
    use crate::rel::{FinSet, Rel, Relation};
    use num_complex::Complex64;

    type F64 = FHilb<f64>;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn injections_and_projections_are_orthogonal_isometries() {
        let sum = SumObject::<Rel>::new(vec![FinSet::of_size(2), FinSet::of_size(3)]);
        let (i0, i1) = (sum.injection(0), sum.injection(1));
        let (p0, p1) = (sum.projection(0), sum.projection(1));
        assert_eq!(i0.then(&p0), Relation::identity(&FinSet::of_size(2)));
        assert_eq!(i1.then(&p1), Relation::identity(&FinSet::of_size(3)));
        assert!(i0.then(&p1).is_empty());
        assert!(i1.then(&p0).is_empty());
        assert_eq!(sum.offset(1), 2);
        assert_eq!(Rel::obj_size(&sum.total()), 5);
    }

    #[test]
    fn direct_sum_of_identities_is_the_identity() {
        let id2 = F64::id(&2);
        let id3 = F64::id(&3);
        assert_eq!(F64::direct_sum(&id2, &id3), F64::id(&5));
    }

    #[test]
    fn summing_with_a_zero_morphism_leaves_a_zero_block() {
        let f = Matrix::<f64>::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let z = F64::zero_mor(&2, &2);
        let block = F64::direct_sum(&f, &z);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i < 2 && j < 2 {
                    f[(i, j)]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert_eq!(block[(i, j)], expect);
            }
        }
    }

    #[test]
    fn zero_algebra_passes_every_axiom_in_both_backends() {
        assert!(zero_algebra::<Rel>().check(&tol()).passed());
        assert!(zero_algebra::<F64>().check(&tol()).passed());
    }

    #[test]
    fn sum_of_group_algebras_is_the_disjoint_union_algebra() {
        let z2 = Groupoid::from_group(&GroupTable::cyclic(2));
        let a = groupoid_to_algebra::<Rel>(&z2, &tol()).unwrap();
        let sum = oplus_algebra(&a, &a, &tol()).unwrap();
        let union = groupoid_to_algebra::<Rel>(&z2.disjoint_union(&z2), &tol()).unwrap();
        assert_eq!(sum.mult(), union.mult());
        assert_eq!(sum.unit(), union.unit());
        assert!(sum.check(&tol()).passed());
    }

    #[test]
    fn sum_of_classical_algebras_is_classical() {
        let c2 = FrobeniusAlgebra::<F64>::classical(2);
        let c1 = FrobeniusAlgebra::<F64>::classical(1);
        let sum = oplus_algebra(&c2, &c1, &tol()).unwrap();
        let c3 = FrobeniusAlgebra::<F64>::classical(3);
        assert!(F64::approx_eq(sum.mult(), c3.mult(), &tol()));
        assert!(F64::approx_eq(sum.unit(), c3.unit(), &tol()));
        assert!(sum.check(&tol()).passed());
    }

    #[test]
    fn summing_with_zero_changes_nothing() {
        let a = FrobeniusAlgebra::<F64>::pair_of_pants(2, &tol())
            .unwrap()
            .normalised(&tol())
            .unwrap()
            .0;
        let sum = oplus_algebra(&a, &zero_algebra(), &tol()).unwrap();
        assert!(F64::approx_eq(sum.mult(), a.mult(), &tol()));
        assert!(F64::approx_eq(sum.unit(), a.unit(), &tol()));
        let both = oplus_algebra(&zero_algebra::<F64>(), &zero_algebra(), &tol()).unwrap();
        assert_eq!(both.dim(), 0);
    }

    #[test]
    fn unnormalised_input_is_rejected() {
        let pants = FrobeniusAlgebra::<F64>::pair_of_pants(2, &tol()).unwrap();
        assert!(!pants.is_normalised(&tol()));
        assert!(oplus_algebra(&pants, &pants, &tol()).is_err());
    }

    #[test]
    fn oplus_is_associative_on_the_nose_in_offset_layout() {
        let x = FrobeniusAlgebra::<Rel>::classical(2);
        let y = groupoid_to_algebra::<Rel>(&Groupoid::from_group(&GroupTable::cyclic(2)), &tol())
            .unwrap();
        let z = FrobeniusAlgebra::<Rel>::classical(1);
        let left = oplus_algebra(&oplus_algebra(&x, &y, &tol()).unwrap(), &z, &tol()).unwrap();
        let right = oplus_algebra(&x, &oplus_algebra(&y, &z, &tol()).unwrap(), &tol()).unwrap();
        assert_eq!(left.mult(), right.mult());
        assert_eq!(left.unit(), right.unit());
    }

    #[test]
    fn structural_morphisms_are_star_homomorphisms() {
        let a = FrobeniusAlgebra::<Rel>::classical(2);
        let b = groupoid_to_algebra::<Rel>(&Groupoid::from_group(&GroupTable::cyclic(2)), &tol())
            .unwrap();
        let s = structural_morphisms(&a, &b, &tol()).unwrap();
        let zero = zero_algebra::<Rel>();
        assert!(is_star_homomorphism(&s.zero, &a, &zero, &tol()));
        assert!(is_star_homomorphism(&s.inj, &a, &s.sum, &tol()));
        assert!(is_star_homomorphism(&s.proj, &s.sum, &a, &tol()));
        assert!(is_star_homomorphism(&s.diag, &a, &s.double, &tol()));
        // the injection misses the other summand's unit; the rest are unital
        assert!(!is_unital_star_homomorphism(&s.inj, &a, &s.sum, &tol()));
        assert!(is_unital_star_homomorphism(&s.proj, &s.sum, &a, &tol()));
        assert!(is_unital_star_homomorphism(&s.diag, &a, &s.double, &tol()));
    }

    #[test]
    fn structural_morphisms_are_star_homomorphisms_in_fhilb() {
        let a = FrobeniusAlgebra::<F64>::pair_of_pants(2, &tol())
            .unwrap()
            .normalised(&tol())
            .unwrap()
            .0;
        let b = FrobeniusAlgebra::<F64>::classical(2);
        let s = structural_morphisms(&a, &b, &tol()).unwrap();
        let zero = zero_algebra::<F64>();
        assert!(is_star_homomorphism(&s.zero, &a, &zero, &tol()));
        assert!(is_star_homomorphism(&s.inj, &a, &s.sum, &tol()));
        assert!(is_star_homomorphism(&s.proj, &s.sum, &a, &tol()));
        assert!(is_star_homomorphism(&s.diag, &a, &s.double, &tol()));
        assert!(!is_unital_star_homomorphism(&s.inj, &a, &s.sum, &tol()));
    }

    #[test]
    fn dual_of_sum_equals_the_flat_cup_and_satisfies_snakes() {
        let (cup, cap) = dual_of_sum::<Rel>(&FinSet::of_size(2), &FinSet::of_size(2));
        let total = FinSet::of_size(4);
        assert_eq!(cup, Relation::cup(&total));
        assert_eq!(cap, Relation::cap(&total));
        let (cup_f, cap_f) = dual_of_sum::<F64>(&2, &3);
        let id5 = F64::id(&5);
        let left = F64::then(&F64::tensor(&cup_f, &id5), &F64::tensor(&id5, &cap_f));
        assert!(F64::approx_eq(&left, &id5, &tol()));
    }

    #[test]
    fn distributivity_morphisms_invert_each_other() {
        for (a, b, c, d) in [(1usize, 1, 1, 1), (2, 1, 1, 2), (2, 2, 3, 1)] {
            let (fwd, back) = distributivity_iso::<F64>(&a, &b, &c, &d);
            let n = (a + b) * (c + d);
            assert!(F64::approx_eq(&F64::then(&fwd, &back), &F64::id(&n), &tol()));
            assert!(F64::approx_eq(&F64::then(&back, &fwd), &F64::id(&n), &tol()));
        }
        let s1 = FinSet::of_size(2);
        let s2 = FinSet::of_size(3);
        let (fwd, back) = distributivity_iso::<Rel>(&s1, &s1, &s2, &s1);
        let id = Relation::identity(&FinSet::of_size(20));
        assert_eq!(fwd.then(&back), id);
        assert_eq!(back.then(&fwd), Relation::identity(&FinSet::of_size(20)));
    }

    #[test]
    fn tensoring_distributes_over_addition_and_kills_zero() {
        let f = Matrix::<f64>::from_real(2, 2, &[1.0, -1.0, 0.5, 2.0]);
        let g = Matrix::<f64>::from_real(2, 2, &[0.0, 3.0, 1.0, 1.0]);
        let h = Matrix::<f64>::from_real(2, 2, &[2.0, 0.0, 0.0, -1.0]);
        let lhs = F64::tensor(&f, &F64::plus(&g, &h));
        let rhs = F64::plus(&F64::tensor(&f, &g), &F64::tensor(&f, &h));
        assert!(F64::approx_eq(&lhs, &rhs, &tol()));
        let zero = F64::zero_mor(&2, &2);
        assert!(F64::approx_eq(&F64::tensor(&f, &zero), &F64::zero_mor(&4, &4), &tol()));
    }

    #[test]
    fn biproduct_addition_matches_backend_addition() {
        let f = Matrix::<f64>::from_real(2, 3, &[1.0, 0.0, 2.0, 0.0, 1.0, 0.0]);
        let g = Matrix::<f64>::from_real(2, 3, &[0.5, 1.0, 0.0, 1.0, 0.0, 3.0]);
        assert!(F64::approx_eq(
            &biproduct_addition::<F64>(&f, &g),
            &F64::plus(&f, &g),
            &tol()
        ));
        let r = Relation::new(FinSet::of_size(3), FinSet::of_size(2), [(0, 1), (2, 0)]).unwrap();
        let s = Relation::new(FinSet::of_size(3), FinSet::of_size(2), [(1, 1)]).unwrap();
        assert_eq!(biproduct_addition::<Rel>(&r, &s), r.union(&s));
    }
}
