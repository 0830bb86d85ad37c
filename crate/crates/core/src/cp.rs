//! Completely positive maps between doubled objects.
//!
//! A morphism `A → B` of matrix algebras (or of relations on pairs) is
//! presented by its doubled form `h : A ⊗ A → B ⊗ B`. Complete positivity
//! is decided by the backend — a positive semidefinite Choi matrix over
//! Hilbert spaces, a two-clause closure condition over relations — and both
//! deciders are backed here by an explicit Kraus construction: every CP map
//! arises by doubling a morphism `g : A → C ⊗ B` with an environment `C`
//! that is traced out.
//!
//! The module also hosts the morphism condition for the category of
//! algebras: `f : A → B` between Frobenius algebras is accepted when the
//! composite `action_B ∘ f ∘ coaction_A` of doubled objects is completely
//! positive; over relations and groupoid algebras this unfolds to a finite
//! condition on arrows, implemented separately as a cross-check.

use crate::backend::{Backend, Tolerance};
use crate::error::Error;
use crate::fhilb::Matrix;
use crate::frobenius::FrobeniusAlgebra;
use crate::groupoid::Groupoid;
use crate::rel::{FinSet, Rel, Relation};

/// Double a Kraus morphism `g : A → C ⊗ B`: tensor it with its conjugate,
/// group the environments together, and trace them out with a cap. The
/// result is the doubled form of `X ↦ Σ_c G_c X G_c†` where `G_c` are the
/// environment components of `g`.
pub fn kraus_to_map<B: Backend>(g: &B::Mor, env: &B::Obj, out: &B::Obj) -> B::Mor {
    let a = B::src(g);
    assert_eq!(
        B::obj_size(&B::dst(g)),
        B::obj_size(env) * B::obj_size(out),
        "Kraus target must factor as environment ⊗ output"
    );
    let doubled = B::tensor(g, &B::conjugate(g));
    let regroup = B::factor_permutation(
        &[env.clone(), out.clone(), env.clone(), out.clone()],
        &[0, 2, 1, 3],
    );
    let id_bb = B::id(&B::tensor_obj(out, out));
    let trace_env = B::tensor(&B::cap(env), &id_bb);
    let _ = a;
    B::then(&B::then(&doubled, &regroup), &trace_env)
}

/// Stack explicit Kraus operators `G_k : A → B` into a single morphism
/// `A → C ⊗ B` with environment size `k`, ready for [`kraus_to_map`].
pub fn kraus_stack<B: Backend>(ops: &[B::Mor]) -> (B::Mor, B::Obj) {
    assert!(!ops.is_empty(), "at least one Kraus operator");
    let src = B::src(&ops[0]);
    let dst = B::dst(&ops[0]);
    let env = B::obj_of_size(ops.len());
    let mut acc = B::zero_mor(&src, &B::tensor_obj(&env, &dst));
    for (k, op) in ops.iter().enumerate() {
        assert!(
            B::src(op) == src && B::dst(op) == dst,
            "Kraus operators must be parallel"
        );
        let basis_k = B::mor_from_pairs(&B::unit_obj(), &env, &[(k, 0)]);
        let lifted = B::then(op, &B::tensor(&basis_k, &B::id(&dst)));
        acc = B::plus(&acc, &lifted);
    }
    (acc, env)
}

/// Whether `h : A ⊗ A → B ⊗ B` is completely positive.
pub fn is_cp<B: Backend>(h: &B::Mor, a: &B::Obj, b: &B::Obj, tol: &Tolerance) -> bool {
    B::is_completely_positive(h, a, b, tol)
}

/// Whether `h` preserves the unit state: `h ∘ cup_A = cup_B`, i.e. the
/// underlying map sends the identity to the identity.
pub fn is_unital<B: Backend>(h: &B::Mor, a: &B::Obj, b: &B::Obj, tol: &Tolerance) -> bool {
    B::approx_eq(&B::then(&B::cup(a), h), &B::cup(b), tol)
}

/// Whether `p` is a dagger idempotent: self-adjoint and `p ∘ p = p`.
pub fn is_dagger_idempotent<B: Backend>(p: &B::Mor, tol: &Tolerance) -> bool {
    B::src(p) == B::dst(p)
        && B::approx_eq(&B::dagger(p), p, tol)
        && B::approx_eq(&B::then(p, p), p, tol)
}

/// Whether `s : X → Y` dagger-splits the idempotent `p : X → X`:
/// `s† ∘ s = p` and `s ∘ s† = id_Y`.
pub fn verifies_dagger_splitting<B: Backend>(p: &B::Mor, s: &B::Mor, tol: &Tolerance) -> bool {
    let y = B::dst(s);
    B::src(s) == B::src(p)
        && B::approx_eq(&B::then(s, &B::dagger(s)), p, tol)
        && B::approx_eq(&B::then(&B::dagger(s), s), &B::id(&y), tol)
}

/// The morphism condition of the idempotent-splitting category: `f` is a
/// morphism `(X, p) → (Y, q)` exactly when it is absorbed by the chosen
/// idempotents, `f = q ∘ f ∘ p`.
pub fn split_morphism_check<B: Backend>(
    f: &B::Mor,
    p: &B::Mor,
    q: &B::Mor,
    tol: &Tolerance,
) -> bool {
    B::approx_eq(&B::then(&B::then(p, f), q), f, tol)
}

/// The morphism condition of the algebra category: `f : A → B` on carriers
/// is accepted when `action_B ∘ f ∘ coaction_A` is completely positive.
/// Both algebras are normalised first (the condition is stated for special
/// algebras; normalisation fixes the carrier and rescales the structure).
pub fn is_cpstar_morphism<B: Backend>(
    f: &B::Mor,
    a: &FrobeniusAlgebra<B>,
    b: &FrobeniusAlgebra<B>,
    tol: &Tolerance,
) -> Result<bool, Error> {
    if B::src(f) != *a.carrier() || B::dst(f) != *b.carrier() {
        return Err(Error::Mismatch(
            "morphism endpoints do not match the algebra carriers".into(),
        ));
    }
    let (na, _) = a.normalised(tol)?;
    let (nb, _) = b.normalised(tol)?;
    let doubled = B::then(&B::then(&na.coaction(), f), &nb.action());
    Ok(is_cp::<B>(&doubled, a.carrier(), b.carrier(), tol))
}

/// The arrow-level morphism condition for relations between groupoid
/// algebras: whenever `x R y`, also `x⁻¹ R y⁻¹` and
/// `id_dom(x) R id_dom(y)`. Equivalent to [`is_cpstar_morphism`] on the
/// corresponding algebras.
pub fn is_cpstar_rel_groupoid(r: &Relation, g: &Groupoid, h: &Groupoid) -> bool {
    if r.src().size() != g.morphisms() || r.dst().size() != h.morphisms() {
        return false;
    }
    r.pairs().all(|(x, y)| {
        r.contains(g.inv(x), h.inv(y))
            && r.contains(g.identity_of(g.dom(x)), h.identity_of(h.dom(y)))
    })
}

/// Tensor of doubled maps `h1 : A² → B²`, `h2 : C² → D²` as a doubled map
/// `(A⊗C)² → (B⊗D)²`: conjugate `h1 ⊗ h2` by the middle-swap regroupings.
pub fn cpm_tensor<B: Backend>(
    h1: &B::Mor,
    a: &B::Obj,
    b: &B::Obj,
    h2: &B::Mor,
    c: &B::Obj,
    d: &B::Obj,
) -> B::Mor {
    let regroup_in = B::factor_permutation(
        &[a.clone(), c.clone(), a.clone(), c.clone()],
        &[0, 2, 1, 3],
    );
    let regroup_out = B::factor_permutation(
        &[b.clone(), b.clone(), d.clone(), d.clone()],
        &[0, 2, 1, 3],
    );
    B::then(&B::then(&regroup_in, &B::tensor(h1, h2)), &regroup_out)
}

/// A completely positive dagger projection on the doubled qubit that is
/// *not* contractive: `Φ(X) = Tr(ρX)·a` with `a = diag(1/2 + √2/2, 1/2)`
/// and `ρ = a / Tr(a)`. Since `Tr(a) = Tr(a²)`, the map satisfies
/// `p† = p = p²` on the nose and its Choi matrix `a ⊗ ρ` is positive, yet
/// `‖Φ(I)‖ = ‖a‖ = 1/2 + √2/2 > 1` — so it is not unital either, and the
/// object it splits off is not an operator system.
pub fn noncontractive_projection() -> Matrix<f64> {
    let x = 0.5 + std::f64::consts::SQRT_2 / 2.0;
    let a = Matrix::diagonal(&[x, 0.5]);
    let trace = x + 0.5;
    let rho = a.scale_real(1.0 / trace);
    a.vectorise().matmul(&rho.vectorise().dagger())
}

/// Reconstruct an explicit Kraus witness for a completely positive relation
/// `h` on doubled sets: an environment `C` and `g : A → C ⊗ B` with
/// `kraus_to_map(g) = h`. Returns `None` when `h` fails the closure
/// conditions (then no witness exists).
///
/// The construction takes one environment point per unordered related pair
/// of the tolerance relation `(a, b) ~ (a', b') ⇔ (a,a') h (b,b')`; the
/// closure conditions make each such pair a clique, and their union
/// recovers `~` exactly.
pub fn rel_kraus_witness(h: &Relation, a: &FinSet, b: &FinSet) -> Option<(Relation, FinSet)> {
    let tol = Tolerance::default();
    if !Rel::is_completely_positive(h, a, b, &tol) {
        return None;
    }
    let (na, nb) = (a.size(), b.size());
    let mut cliques: Vec<[(usize, usize); 2]> = Vec::new();
    for (p, q) in h.pairs() {
        let (x, x1) = (p / na, p % na);
        let (y, y1) = (q / nb, q % nb);
        let (lo, hi) = if (x, y) <= (x1, y1) {
            ((x, y), (x1, y1))
        } else {
            ((x1, y1), (x, y))
        };
        if !cliques.contains(&[lo, hi]) {
            cliques.push([lo, hi]);
        }
    }
    let env = FinSet::of_size(cliques.len());
    let mut pairs = Vec::new();
    for (c, clique) in cliques.iter().enumerate() {
        for &(x, y) in clique {
            pairs.push((x, c * nb + y));
        }
    }
    let g = Relation::new(a.clone(), FinSet::of_size(env.size() * nb), pairs).expect("in range");
    Some((g, env))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fhilb::{choi, is_psd, operator_norm, FHilb};
    use crate::groupoid::{groupoid_to_algebra, GroupTable};
    use crate::FHilb64;
    use num_complex::Complex;

    type M = Matrix<f64>;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn doubling_the_identity_gives_the_identity() {
        let g = M::identity(3);
        let h = kraus_to_map::<FHilb64>(&g, &1, &3);
        assert!(h.max_diff(&M::identity(9)) < 1e-12);
        assert!(is_cp::<FHilb64>(&h, &3, &3, &tol()));
        assert!(is_unital::<FHilb64>(&h, &3, &3, &tol()));
    }

    #[test]
    fn doubling_matches_the_operator_formula() {
        // A single Kraus operator: h · vec(X) = vec(G X G†) for all basis X.
        let g = M::from_entries(
            2,
            2,
            vec![
                Complex::new(0.3, 0.1),
                Complex::new(1.0, 0.0),
                Complex::new(0.0, -0.5),
                Complex::new(0.2, 0.0),
            ],
        );
        let h = kraus_to_map::<FHilb64>(&g, &1, &2);
        for i in 0..2 {
            for j in 0..2 {
                let mut e = M::zeros(2, 2);
                e[(i, j)] = Complex::new(1.0, 0.0);
                let lhs = h.matmul(&e.vectorise());
                let rhs = g.matmul(&e).matmul(&g.dagger()).vectorise();
                assert!(lhs.max_diff(&rhs) < 1e-12, "basis ({i},{j})");
            }
        }
        assert!(is_cp::<FHilb64>(&h, &2, &2, &tol()));
    }

    #[test]
    fn dephasing_is_a_unital_dagger_idempotent() {
        let k0 = M::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let k1 = M::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let (g, env) = kraus_stack::<FHilb64>(&[k0, k1]);
        let h = kraus_to_map::<FHilb64>(&g, &env, &2);
        assert!(h.max_diff(&M::diagonal(&[1.0, 0.0, 0.0, 1.0])) < 1e-12);
        assert!(is_cp::<FHilb64>(&h, &2, &2, &tol()));
        assert!(is_unital::<FHilb64>(&h, &2, &2, &tol()));
        assert!(is_dagger_idempotent::<FHilb64>(&h, &tol()));
    }

    #[test]
    fn amplitude_damping_is_cp_but_not_unital() {
        let gamma: f64 = 0.3;
        let k0 = M::diagonal(&[1.0, (1.0 - gamma).sqrt()]);
        let mut k1 = M::zeros(2, 2);
        k1[(0, 1)] = Complex::new(gamma.sqrt(), 0.0);
        let (g, env) = kraus_stack::<FHilb64>(&[k0, k1]);
        let h = kraus_to_map::<FHilb64>(&g, &env, &2);
        assert!(is_cp::<FHilb64>(&h, &2, &2, &tol()));
        assert!(!is_unital::<FHilb64>(&h, &2, &2, &tol()));
    }

    #[test]
    fn the_swap_is_not_completely_positive() {
        let swap = FHilb64::swap(&2, &2);
        assert!(!is_cp::<FHilb64>(&swap, &2, &2, &tol()));
    }

    #[test]
    fn relational_doubling_always_passes_the_closure_conditions() {
        // g : 3 → 2 ⊗ 2 with overlapping environments.
        let g = Relation::new(
            FinSet::of_size(3),
            FinSet::of_size(4),
            [(0, 0), (1, 0), (1, 2), (2, 3), (0, 1)],
        )
        .unwrap();
        let h = kraus_to_map::<Rel>(&g, &FinSet::of_size(2), &FinSet::of_size(2));
        assert!(is_cp::<Rel>(&h, &FinSet::of_size(3), &FinSet::of_size(2), &tol()));
    }

    #[test]
    fn kraus_witness_round_trips() {
        let a = FinSet::of_size(3);
        let b = FinSet::of_size(2);
        let g = Relation::new(
            a.clone(),
            FinSet::of_size(4),
            [(0, 0), (1, 0), (1, 2), (2, 2), (2, 1)],
        )
        .unwrap();
        let h = kraus_to_map::<Rel>(&g, &FinSet::of_size(2), &b);
        let (g2, env2) = rel_kraus_witness(&h, &a, &b).expect("h is CP by construction");
        let h2 = kraus_to_map::<Rel>(&g2, &env2, &b);
        assert_eq!(h, h2);
    }

    #[test]
    fn kraus_witness_rejects_non_cp_relations() {
        // A single off-diagonal pair violates the diagonal closure clause.
        let h = Relation::new(FinSet::of_size(4), FinSet::of_size(4), [(1, 0)]).unwrap();
        let a = FinSet::of_size(2);
        assert!(!is_cp::<Rel>(&h, &a, &a, &tol()));
        assert!(rel_kraus_witness(&h, &a, &a).is_none());
    }

    #[test]
    fn groupoid_condition_matches_the_algebra_condition_exhaustively() {
        // All 16 relations between the Z2 algebra and itself.
        let z2 = Groupoid::from_group(&GroupTable::cyclic(2));
        let alg = groupoid_to_algebra::<Rel>(&z2, &tol()).unwrap();
        let cells: Vec<(usize, usize)> =
            (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).collect();
        let mut agreed = 0;
        for mask in 0u32..16 {
            let pairs: Vec<(usize, usize)> = cells
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect();
            let r = Relation::new(FinSet::of_size(2), FinSet::of_size(2), pairs).unwrap();
            let by_groupoid = is_cpstar_rel_groupoid(&r, &z2, &z2);
            let by_algebra = is_cpstar_morphism::<Rel>(&r, &alg, &alg, &tol()).unwrap();
            assert_eq!(by_groupoid, by_algebra, "relation {mask:04b}");
            if by_groupoid {
                agreed += 1;
            }
        }
        // sanity: the identity and the empty relation are both accepted
        assert!(agreed >= 2);
    }

    #[test]
    fn cpm_tensor_of_identities_is_the_identity() {
        let h1 = M::identity(4);
        let h2 = M::identity(9);
        let t = cpm_tensor::<FHilb64>(&h1, &2, &2, &h2, &3, &3);
        assert!(t.max_diff(&M::identity(36)) < 1e-12);
    }

    #[test]
    fn cpm_tensor_preserves_complete_positivity() {
        let k = M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let h1 = kraus_to_map::<FHilb64>(&k, &1, &2);
        let h2 = M::diagonal(&[1.0, 0.0, 0.0, 1.0]);
        let t = cpm_tensor::<FHilb64>(&h1, &2, &2, &h2, &2, &2);
        assert!(is_cp::<FHilb64>(&t, &4, &4, &tol()));
    }

    #[test]
    fn noncontractive_projection_has_all_claimed_properties() {
        let p = noncontractive_projection();
        // a dagger projection, up to floating-point rounding only
        assert!(p.dagger().max_diff(&p) < 1e-12);
        assert!(p.matmul(&p).max_diff(&p) < 1e-12);
        assert!(is_dagger_idempotent::<FHilb64>(&p, &tol()));
        // completely positive
        assert!(is_psd(&choi(&p, 2, 2), 1e-9));
        // yet not unital: the identity is sent to a, of norm > 1
        assert!(!is_unital::<FHilb64>(&p, &2, &2, &tol()));
        let image_of_unit = M::unvectorise(&p.matmul(&FHilb::cup(&2)), 2, 2);
        let norm = operator_norm(&image_of_unit);
        let expected = 0.5 + std::f64::consts::SQRT_2 / 2.0;
        assert!((norm - expected).abs() < 1e-9);
        assert!(norm > 1.2);
    }

    #[test]
    fn split_absorption_detects_unabsorbed_morphisms() {
        // The dephasing projection absorbs diagonal maps but not all maps.
        let p = M::diagonal(&[1.0, 0.0, 0.0, 1.0]);
        let diag_map = M::diagonal(&[1.0, 0.0, 0.0, 0.5]);
        assert!(split_morphism_check::<FHilb64>(&diag_map, &p, &p, &tol()));
        let full = M::from_real(4, 4, &[1.0; 16]);
        assert!(!split_morphism_check::<FHilb64>(&full, &p, &p, &tol()));
        // identity idempotents absorb everything
        assert!(split_morphism_check::<FHilb64>(
            &full,
            &M::identity(4),
            &M::identity(4),
            &tol()
        ));
    }
}
