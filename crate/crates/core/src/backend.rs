//! The dagger compact closed interface shared by both backends.
//!
//! [`Backend`] packages, for one model, the data the generic layers need:
//! objects with sizes, morphisms with composition/dagger/tensor, self-dual
//! cups and caps, biproduct blocks, an additive structure on hom-sets, and the
//! semi-decision procedures (approximate equality, positivity, complete
//! positivity) that are exact for relations and tolerance-based for matrices.
//!
//! All tensor legs use the row-major pair encoding of [`crate::util`]:
//! the point `(i, j)` of `A ⊗ B` sits at flat index `i * |B| + j`. Duals are
//! identified with the underlying object, so cups and caps are the diagonal
//! state and costate of `A ⊗ A`.

use crate::util;
use std::fmt::Debug;

/// Absolute tolerance for numerical comparisons.
///
/// Relational checks are exact and ignore it; matrix checks compare entrywise
/// against `eps`. The default matches working `f64` precision for the sizes
/// this crate targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Self {
        assert!(eps >= 0.0, "tolerance must be non-negative");
        Self { eps }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps: Self::DEFAULT_EPS }
    }
}

/// A dagger compact closed category with dagger biproducts, plus the decision
/// procedures the algebra layers build on.
///
/// Morphisms know their own source and target. Operations that combine
/// morphisms panic if shapes disagree; external data is validated before it
/// reaches these operations.
pub trait Backend: Sized + Debug + Clone + PartialEq + 'static {
    /// Objects: finite sets for relations, dimensions for matrices.
    type Obj: Clone + PartialEq + Debug;
    /// Morphisms: relations or matrices.
    type Mor: Clone + PartialEq + Debug;

    fn obj_size(a: &Self::Obj) -> usize;
    /// The canonical object of a given size (unlabelled set / plain dimension).
    fn obj_of_size(n: usize) -> Self::Obj;
    fn tensor_obj(a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn sum_obj(a: &Self::Obj, b: &Self::Obj) -> Self::Obj;

    /// Monoidal unit: the one-element set / the scalars.
    fn unit_obj() -> Self::Obj {
        Self::obj_of_size(1)
    }
    /// Zero object for the biproduct structure.
    fn zero_obj() -> Self::Obj {
        Self::obj_of_size(0)
    }

    fn src(f: &Self::Mor) -> Self::Obj;
    fn dst(f: &Self::Mor) -> Self::Obj;

    fn id(a: &Self::Obj) -> Self::Mor;
    fn zero_mor(a: &Self::Obj, b: &Self::Obj) -> Self::Mor;

    /// Diagrammatic composition: `f.then(g)` is `g ∘ f`.
    fn then(f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    fn dagger(f: &Self::Mor) -> Self::Mor;
    /// The lower star `f_*`: plain transpose, no conjugation.
    fn transpose(f: &Self::Mor) -> Self::Mor;
    /// Entrywise conjugation; the identity on relations.
    fn conjugate(f: &Self::Mor) -> Self::Mor;
    fn tensor(f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    /// The enrichment addition on hom-sets: union of relations, entrywise sum
    /// of matrices. Agrees with the biproduct convolution formula.
    fn plus(f: &Self::Mor, g: &Self::Mor) -> Self::Mor;

    /// Cup (unit of the self-duality): the diagonal state `I → A ⊗ A`.
    fn cup(a: &Self::Obj) -> Self::Mor;
    /// Cap (counit): the diagonal costate `A ⊗ A → I`. Equal to `dagger(cup)`
    /// in both backends under the flat identification of duals.
    fn cap(a: &Self::Obj) -> Self::Mor {
        Self::dagger(&Self::cup(a))
    }

    /// A morphism given by index pairs `(target, source)`, each hit once:
    /// a partial-injection relation or a 0/1 matrix. Used for permutations
    /// and biproduct blocks.
    fn mor_from_pairs(
        src: &Self::Obj,
        dst: &Self::Obj,
        pairs: &[(usize, usize)],
    ) -> Self::Mor;

    /// Reorder tensor factors: output factor `k` is input factor `perm[k]`.
    fn factor_permutation(factors: &[Self::Obj], perm: &[usize]) -> Self::Mor {
        let dims: Vec<usize> = factors.iter().map(Self::obj_size).collect();
        let pairs = util::factor_permutation_pairs(&dims, perm);
        let src = factors
            .iter()
            .skip(1)
            .fold(factors[0].clone(), |acc, b| Self::tensor_obj(&acc, b));
        let dst = perm
            .iter()
            .skip(1)
            .fold(factors[perm[0]].clone(), |acc, &p| {
                Self::tensor_obj(&acc, &factors[p])
            });
        Self::mor_from_pairs(&src, &dst, &pairs)
    }

    /// Symmetry `A ⊗ B → B ⊗ A`.
    fn swap(a: &Self::Obj, b: &Self::Obj) -> Self::Mor {
        Self::factor_permutation(&[a.clone(), b.clone()], &[1, 0])
    }

    /// Biproduct injection `A → A ⊕ B` (offset layout: `A` first).
    fn inj_left(a: &Self::Obj, b: &Self::Obj) -> Self::Mor {
        let sum = Self::sum_obj(a, b);
        let pairs: Vec<(usize, usize)> = (0..Self::obj_size(a)).map(|i| (i, i)).collect();
        Self::mor_from_pairs(a, &sum, &pairs)
    }

    /// Biproduct injection `B → A ⊕ B`.
    fn inj_right(a: &Self::Obj, b: &Self::Obj) -> Self::Mor {
        let sum = Self::sum_obj(a, b);
        let off = Self::obj_size(a);
        let pairs: Vec<(usize, usize)> = (0..Self::obj_size(b)).map(|i| (off + i, i)).collect();
        Self::mor_from_pairs(b, &sum, &pairs)
    }

    /// Block-diagonal sum `f ⊕ g : A ⊕ C → B ⊕ D`.
    fn direct_sum(f: &Self::Mor, g: &Self::Mor) -> Self::Mor {
        let pa = Self::dagger(&Self::inj_left(&Self::src(f), &Self::src(g)));
        let pb = Self::dagger(&Self::inj_right(&Self::src(f), &Self::src(g)));
        let ia = Self::inj_left(&Self::dst(f), &Self::dst(g));
        let ib = Self::inj_right(&Self::dst(f), &Self::dst(g));
        let left = Self::then(&Self::then(&pa, f), &ia);
        let right = Self::then(&Self::then(&pb, g), &ib);
        Self::plus(&left, &right)
    }

    /// Exact equality for relations; entrywise comparison within `tol.eps`
    /// for matrices.
    fn approx_eq(f: &Self::Mor, g: &Self::Mor, tol: &Tolerance) -> bool;

    /// Residual distance between two parallel morphisms: the number of
    /// differing pairs for relations, the max-norm difference for matrices.
    fn residual(f: &Self::Mor, g: &Self::Mor) -> f64;

    /// Whether `f : A → A` is positive, i.e. of the form `h† ∘ h`.
    /// Matrices: positive semidefinite within `tol`. Relations: symmetric and
    /// locally reflexive (`(x, y) ∈ f` implies `(x, x) ∈ f`).
    fn is_positive(f: &Self::Mor, tol: &Tolerance) -> bool;

    /// Whether `f` is invertible: graph of a bijection / no singular value
    /// within `tol` of zero.
    fn is_invertible(f: &Self::Mor, tol: &Tolerance) -> bool;

    /// Complete positivity of `h : A ⊗ A → B ⊗ B` in doubled form.
    /// Matrices: positive semidefiniteness of the Choi matrix. Relations: the
    /// closure conditions `((x, x'), (y, y')) ∈ h ⟹ ((x', x), (y', y)) ∈ h`
    /// and `((x, x), (y, y)) ∈ h`.
    ///
    /// Panics if the shape of `h` is not `(|A|², |B|²)`.
    fn is_completely_positive(h: &Self::Mor, a: &Self::Obj, b: &Self::Obj, tol: &Tolerance)
        -> bool;

    /// `q^(-1/2)` for a positive central invertible `q`, used to find
    /// normalisers. Relations admit only `q = id`; matrices use the Hermitian
    /// eigendecomposition.
    fn positive_sqrt_inverse(q: &Self::Mor, tol: &Tolerance) -> Result<Self::Mor, crate::Error>;

    /// `z⁻¹` for a positive invertible `z` (the normaliser in `normalise`).
    fn positive_inverse(z: &Self::Mor, tol: &Tolerance) -> Result<Self::Mor, crate::Error>;
}

/// Fold a list of objects into a direct sum, left-associated.
/// The empty list gives the zero object.
pub fn sum_all<B: Backend>(objs: &[B::Obj]) -> B::Obj {
    objs.iter()
        .fold(B::zero_obj(), |acc, o| B::sum_obj(&acc, o))
}
