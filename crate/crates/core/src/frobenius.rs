//! Dagger Frobenius algebras over a backend, with normalisers.
//!
//! An algebra here is a monoid `(A, m, u)` in the backend category whose
//! comultiplication is `m†`, together with a chosen *normaliser* `z`: a
//! central positive invertible endomorphism satisfying `m ∘ m† ∘ z² = id`.
//! Specialness is not assumed — the matrix-multiplication algebra on `M_n`
//! has `m ∘ m† = n·id` — but every algebra must normalise, and normalising
//! (rescaling `m` by `z` and `u` by `z⁻¹`) produces a special algebra on the
//! same carrier.
//!
//! The module also derives the regular action and coaction used to embed
//! algebras into doubled objects, the C*-involution, and checks for
//! (not necessarily unital) *-homomorphisms between algebras.

use crate::backend::{Backend, Tolerance};
use crate::error::Error;
use std::fmt;

/// One named check with its pass flag and numeric residual
/// (`0` exact, pair-count or max-entry distance otherwise).
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
}

/// The outcome of a structured verification: a list of named checks.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub items: Vec<CheckItem>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|item| item.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.items
            .iter()
            .filter(|item| !item.passed)
            .map(|item| item.name)
            .collect()
    }

    pub fn merge(&mut self, other: Report) {
        self.items.extend(other.items);
    }

    fn push_eq<B: Backend>(&mut self, name: &'static str, lhs: &B::Mor, rhs: &B::Mor, tol: &Tolerance) {
        self.items.push(CheckItem {
            name,
            passed: B::approx_eq(lhs, rhs, tol),
            residual: B::residual(lhs, rhs),
        });
    }

    fn push_flag(&mut self, name: &'static str, passed: bool) {
        self.items.push(CheckItem { name, passed, residual: if passed { 0.0 } else { 1.0 } });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(
                f,
                "  [{}] {} (residual {:.3e})",
                if item.passed { "ok" } else { "FAIL" },
                item.name,
                item.residual
            )?;
        }
        Ok(())
    }
}

/// A dagger Frobenius algebra with a chosen normaliser.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusAlgebra<B: Backend> {
    carrier: B::Obj,
    mult: B::Mor,
    unit: B::Mor,
    normaliser: B::Mor,
}

impl<B: Backend> FrobeniusAlgebra<B> {
    /// Assemble an algebra from its data, checking shapes only.
    /// A missing normaliser defaults to the identity.
    pub fn from_parts(
        carrier: B::Obj,
        mult: B::Mor,
        unit: B::Mor,
        normaliser: Option<B::Mor>,
    ) -> Result<Self, Error> {
        let n = B::obj_size(&carrier);
        let shape = |f: &B::Mor| (B::obj_size(&B::src(f)), B::obj_size(&B::dst(f)));
        if shape(&mult) != (n * n, n) {
            return Err(Error::InvalidAlgebra(format!(
                "multiplication must map {}·{} → {}, got {:?}",
                n,
                n,
                n,
                shape(&mult)
            )));
        }
        if shape(&unit) != (1, n) {
            return Err(Error::InvalidAlgebra(format!(
                "unit must map 1 → {}, got {:?}",
                n,
                shape(&unit)
            )));
        }
        let normaliser = normaliser.unwrap_or_else(|| B::id(&carrier));
        if shape(&normaliser) != (n, n) {
            return Err(Error::InvalidAlgebra(format!(
                "normaliser must map {} → {}, got {:?}",
                n,
                n,
                shape(&normaliser)
            )));
        }
        Ok(Self { carrier, mult, unit, normaliser })
    }

    /// Assemble an algebra and verify every axiom, rejecting failures.
    pub fn validated(
        carrier: B::Obj,
        mult: B::Mor,
        unit: B::Mor,
        normaliser: Option<B::Mor>,
        tol: &Tolerance,
    ) -> Result<Self, Error> {
        let alg = Self::from_parts(carrier, mult, unit, normaliser)?;
        let report = alg.check(tol);
        if report.passed() {
            Ok(alg)
        } else {
            Err(Error::InvalidAlgebra(format!(
                "axioms failed: {}",
                report.failures().join(", ")
            )))
        }
    }

    pub fn carrier(&self) -> &B::Obj {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        B::obj_size(&self.carrier)
    }

    pub fn mult(&self) -> &B::Mor {
        &self.mult
    }

    pub fn unit(&self) -> &B::Mor {
        &self.unit
    }

    pub fn normaliser(&self) -> &B::Mor {
        &self.normaliser
    }

    pub fn comult(&self) -> B::Mor {
        B::dagger(&self.mult)
    }

    pub fn counit(&self) -> B::Mor {
        B::dagger(&self.unit)
    }

    /// Replace the normaliser (shape-checked).
    pub fn with_normaliser(mut self, z: B::Mor) -> Result<Self, Error> {
        if B::src(&z) != self.carrier || B::dst(&z) != self.carrier {
            return Err(Error::InvalidAlgebra(
                "normaliser must be an endomorphism of the carrier".into(),
            ));
        }
        self.normaliser = z;
        Ok(self)
    }

    /// The positive endomorphism `m ∘ m†`.
    pub fn mult_comult(&self) -> B::Mor {
        B::then(&self.comult(), &self.mult)
    }

    /// Compute the canonical normaliser `(m ∘ m†)^{-1/2}` and verify it is
    /// central; fails when the algebra is not normalisable.
    pub fn find_normaliser(&self, tol: &Tolerance) -> Result<B::Mor, Error> {
        let z = B::positive_sqrt_inverse(&self.mult_comult(), tol)?;
        let id = B::id(&self.carrier);
        let zm = B::then(&self.mult, &z);
        let left = B::then(&B::tensor(&z, &id), &self.mult);
        let right = B::then(&B::tensor(&id, &z), &self.mult);
        if !B::approx_eq(&left, &zm, tol) || !B::approx_eq(&right, &zm, tol) {
            return Err(Error::NotNormalisable(
                "canonical normaliser is not central".into(),
            ));
        }
        Ok(z)
    }

    /// Whether the algebra is special (`m ∘ m† = id`) with identity
    /// normaliser.
    pub fn is_normalised(&self, tol: &Tolerance) -> bool {
        let id = B::id(&self.carrier);
        B::approx_eq(&self.mult_comult(), &id, tol) && B::approx_eq(&self.normaliser, &id, tol)
    }

    /// The special algebra on the same carrier with `m' = z ∘ m` and
    /// `u' = z⁻¹ ∘ u`, together with the identity as the comparison witness.
    pub fn normalised(&self, tol: &Tolerance) -> Result<(Self, B::Mor), Error> {
        let z_inv = B::positive_inverse(&self.normaliser, tol)?;
        let id = B::id(&self.carrier);
        let alg = Self {
            carrier: self.carrier.clone(),
            mult: B::then(&self.mult, &self.normaliser),
            unit: B::then(&self.unit, &z_inv),
            normaliser: id.clone(),
        };
        Ok((alg, id))
    }

    /// The regular action `α = (cup ⊗ id) ; (id ⊗ m) : A → A ⊗ A`, viewing
    /// the target as the flat dual pair.
    pub fn action(&self) -> B::Mor {
        let id = B::id(&self.carrier);
        let cup = B::cup(&self.carrier);
        B::then(&B::tensor(&cup, &id), &B::tensor(&id, &self.mult))
    }

    /// The coaction `κ = α† : A ⊗ A → A`.
    pub fn coaction(&self) -> B::Mor {
        B::dagger(&self.action())
    }

    /// The linear part of the C*-involution. The involution itself is
    /// antilinear: compose this with entrywise conjugation. On the group
    /// algebra of `G` it is `g ↦ g⁻¹`; on a matrix algebra it is the
    /// transpose.
    pub fn involution(&self) -> B::Mor {
        let id = B::id(&self.carrier);
        let cup = B::cup(&self.carrier);
        let swap = B::swap(&self.carrier, &self.carrier);
        let pairing = B::then(&self.mult, &self.counit());
        let step1 = B::tensor(&cup, &id);
        let step2 = B::tensor(&id, &swap);
        let step3 = B::tensor(&id, &B::conjugate(&pairing));
        B::then(&B::then(&step1, &step2), &step3)
    }

    /// Verify the defining axioms: associativity, unit laws, the Frobenius
    /// law on both sides, and the normaliser conditions.
    pub fn check(&self, tol: &Tolerance) -> Report {
        let id = B::id(&self.carrier);
        let m = &self.mult;
        let u = &self.unit;
        let z = &self.normaliser;
        let delta = self.comult();
        let mut rep = Report::default();
        rep.push_eq::<B>(
            "associative",
            &B::then(&B::tensor(m, &id), m),
            &B::then(&B::tensor(&id, m), m),
            tol,
        );
        rep.push_eq::<B>("left-unit", &B::then(&B::tensor(u, &id), m), &id, tol);
        rep.push_eq::<B>("right-unit", &B::then(&B::tensor(&id, u), m), &id, tol);
        let both = B::then(m, &delta);
        rep.push_eq::<B>(
            "frobenius-left",
            &B::then(&B::tensor(&delta, &id), &B::tensor(&id, m)),
            &both,
            tol,
        );
        rep.push_eq::<B>(
            "frobenius-right",
            &B::then(&B::tensor(&id, &delta), &B::tensor(m, &id)),
            &both,
            tol,
        );
        rep.push_flag("normaliser-positive", B::is_positive(z, tol));
        rep.push_flag("normaliser-invertible", B::is_invertible(z, tol));
        let zm = B::then(m, z);
        rep.push_eq::<B>("normaliser-central-left", &B::then(&B::tensor(z, &id), m), &zm, tol);
        rep.push_eq::<B>("normaliser-central-right", &B::then(&B::tensor(&id, z), m), &zm, tol);
        let zz = B::then(z, z);
        rep.push_eq::<B>(
            "normalisation",
            &B::then(&B::then(&zz, &delta), m),
            &id,
            tol,
        );
        rep
    }

    /// Verify laws that follow from the axioms: the action/coaction form of
    /// the Frobenius law, the twisted normalisation, and involution
    /// sanity. Useful as an independent cross-check of the derivations.
    pub fn check_derived_laws(&self, tol: &Tolerance) -> Report {
        let id = B::id(&self.carrier);
        let m = &self.mult;
        let u = &self.unit;
        let z = &self.normaliser;
        let alpha = self.action();
        let kappa = self.coaction();
        let mut rep = Report::default();
        rep.push_eq::<B>(
            "action-coaction",
            &B::then(&alpha, &kappa),
            &self.mult_comult(),
            tol,
        );
        let zt = B::transpose(z);
        rep.push_eq::<B>(
            "twisted-normalisation",
            &B::then(&B::then(&alpha, &B::tensor(&zt, z)), &kappa),
            &id,
            tol,
        );
        // The involution is antilinear (linear part `s` composed with
        // entrywise conjugation), so its laws read off the linear parts
        // with a conjugation on the inner factor: (xy)* = y*x* becomes
        // s ∘ conj(m) = m ∘ (s⊗s) ∘ swap, and 1* = 1 becomes s(conj(u)) = u.
        let s = self.involution();
        rep.push_eq::<B>("involution-involutive", &B::then(&s, &B::conjugate(&s)), &id, tol);
        let swap = B::swap(&self.carrier, &self.carrier);
        rep.push_eq::<B>(
            "involution-antihomomorphism",
            &B::then(&B::conjugate(m), &s),
            &B::then(&B::then(&swap, &B::tensor(&s, &s)), m),
            tol,
        );
        rep.push_eq::<B>("involution-fixes-unit", &B::then(&B::conjugate(u), &s), u, tol);
        rep
    }

    /// The matrix-multiplication algebra on the doubled object `n·n`:
    /// multiplication composes index pairs, the unit is the diagonal.
    /// In the relational backend this is the indiscrete-groupoid algebra.
    pub fn pair_of_pants(n: usize, tol: &Tolerance) -> Result<Self, Error> {
        let a = B::obj_of_size(n * n);
        let a2 = B::tensor_obj(&a, &a);
        let mut mpairs = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    mpairs.push((i * n + l, (i * n + j) * n * n + (j * n + l)));
                }
            }
        }
        let mult = B::mor_from_pairs(&a2, &a, &mpairs);
        let upairs: Vec<(usize, usize)> = (0..n).map(|i| (i * n + i, 0)).collect();
        let unit = B::mor_from_pairs(&B::unit_obj(), &a, &upairs);
        let alg = Self::from_parts(a, mult, unit, None)?;
        let z = alg.find_normaliser(tol)?;
        alg.with_normaliser(z)
    }

    /// The commutative pointwise algebra on `n` points (copying
    /// comultiplication); special, so the normaliser is the identity.
    pub fn classical(n: usize) -> Self {
        let a = B::obj_of_size(n);
        let a2 = B::tensor_obj(&a, &a);
        let mpairs: Vec<(usize, usize)> = (0..n).map(|i| (i, i * n + i)).collect();
        let upairs: Vec<(usize, usize)> = (0..n).map(|i| (i, 0)).collect();
        let mult = B::mor_from_pairs(&a2, &a, &mpairs);
        let unit = B::mor_from_pairs(&B::unit_obj(), &a, &upairs);
        Self::from_parts(a, mult, unit, None).expect("classical algebra shapes")
    }

    /// The tensor-product algebra on `A ⊗ B`, with the middle factors
    /// swapped before multiplying componentwise.
    pub fn tensor_with(&self, other: &Self) -> Self {
        let a = &self.carrier;
        let b = &other.carrier;
        let interleave = B::factor_permutation(
            &[a.clone(), b.clone(), a.clone(), b.clone()],
            &[0, 2, 1, 3],
        );
        let mult = B::then(&interleave, &B::tensor(&self.mult, &other.mult));
        let unit = B::tensor(&self.unit, &other.unit);
        let normaliser = B::tensor(&self.normaliser, &other.normaliser);
        Self {
            carrier: B::tensor_obj(a, b),
            mult,
            unit,
            normaliser,
        }
    }
}

/// Check that `f` is a (not necessarily unital) *-homomorphism between the
/// underlying *-algebras: multiplicative and involution-preserving, with
/// unitality reported separately.
pub fn star_homomorphism_report<B: Backend>(
    f: &B::Mor,
    a: &FrobeniusAlgebra<B>,
    b: &FrobeniusAlgebra<B>,
    tol: &Tolerance,
) -> Report {
    let mut rep = Report::default();
    let shape_ok = B::src(f) == *a.carrier() && B::dst(f) == *b.carrier();
    rep.push_flag("shape", shape_ok);
    if !shape_ok {
        return rep;
    }
    rep.push_eq::<B>(
        "multiplicative",
        &B::then(&B::tensor(f, f), b.mult()),
        &B::then(a.mult(), f),
        tol,
    );
    // f(x*) = f(x)* for antilinear involutions reads s_B ∘ conj(f) = f ∘ s_A
    // on the linear parts.
    rep.push_eq::<B>(
        "involution-preserving",
        &B::then(&B::conjugate(f), &b.involution()),
        &B::then(&a.involution(), f),
        tol,
    );
    rep.push_eq::<B>("unital", &B::then(a.unit(), f), b.unit(), tol);
    rep
}

/// Multiplicative and involution-preserving (unitality not required).
pub fn is_star_homomorphism<B: Backend>(
    f: &B::Mor,
    a: &FrobeniusAlgebra<B>,
    b: &FrobeniusAlgebra<B>,
    tol: &Tolerance,
) -> bool {
    star_homomorphism_report(f, a, b, tol)
        .items
        .iter()
        .filter(|item| item.name != "unital")
        .all(|item| item.passed)
}

/// A unital *-homomorphism.
pub fn is_unital_star_homomorphism<B: Backend>(
    f: &B::Mor,
    a: &FrobeniusAlgebra<B>,
    b: &FrobeniusAlgebra<B>,
    tol: &Tolerance,
) -> bool {
    star_homomorphism_report(f, a, b, tol).passed()
}
