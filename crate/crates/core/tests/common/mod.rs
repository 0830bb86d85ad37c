//! Shared samplers for the integration suites: random relations, matrices,
//! unitaries, PERs, Kraus data and algebras, all driven by a seeded RNG so
//! every suite is reproducible.

// each suite uses its own subset of the samplers
#![allow(dead_code)]

use num_complex::Complex;
use rand::rngs::StdRng;
use rand::Rng;

use cpstar::backend::Tolerance;
use cpstar::biproduct::oplus_all;
use cpstar::cp::{is_cpstar_rel_groupoid, kraus_stack, kraus_to_map};
use cpstar::frobenius::FrobeniusAlgebra;
use cpstar::groupoid::Groupoid;
use cpstar::rel::{FinSet, Relation};
use cpstar::split::Per;
use cpstar::{FHilb64, Mat64};

/// A relation with each pair present independently with probability `density`.
pub fn rand_relation(rng: &mut StdRng, a: usize, b: usize, density: f64) -> Relation {
    let pairs = (0..a)
        .flat_map(|x| (0..b).map(move |y| (x, y)))
        .filter(|_| rng.gen_bool(density));
    Relation::new(FinSet::of_size(a), FinSet::of_size(b), pairs).expect("pairs in range")
}

/// A matrix with entries uniform in the complex square `[-1, 1]²`.
pub fn rand_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> Mat64 {
    Mat64::from_fn(rows, cols, |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// A Haar-ish random unitary: Gram–Schmidt on a random square matrix.
pub fn rand_unitary(rng: &mut StdRng, n: usize) -> Mat64 {
    'retry: loop {
        let a = rand_matrix(rng, n, n);
        let mut cols: Vec<Mat64> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = a.column(j);
            for q in &cols {
                let overlap = q.dagger().matmul(&v)[(0, 0)];
                v = v.sub(&q.scale(overlap));
            }
            let norm = v.frobenius_norm();
            if norm < 1e-6 {
                continue 'retry;
            }
            cols.push(v.scale_real(1.0 / norm));
        }
        return Mat64::from_fn(n, n, |i, j| cols[j][(i, 0)]);
    }
}

/// A random PER on `base` points: each point is dropped or assigned to one
/// of a few blocks, and the PER relates points within a block.
pub fn rand_per(rng: &mut StdRng, base: usize) -> Per {
    let blocks: Vec<Option<usize>> = (0..base)
        .map(|_| if rng.gen_bool(0.3) { None } else { Some(rng.gen_range(0..3)) })
        .collect();
    let pairs = (0..base).flat_map(|x| {
        let blocks = blocks.clone();
        (0..base).filter(move |&y| blocks[x].is_some() && blocks[x] == blocks[y]).map(move |y| (x, y))
    });
    Per::new(base, pairs).expect("blocks form a per")
}

/// A random completely positive doubled map `a² → b²` in Kraus form.
pub fn rand_cp_doubled(rng: &mut StdRng, a: usize, b: usize, ops: usize) -> Mat64 {
    let kraus: Vec<Mat64> = (0..ops).map(|_| rand_matrix(rng, b, a)).collect();
    let (g, env) = kraus_stack::<FHilb64>(&kraus);
    kraus_to_map::<FHilb64>(&g, &env, &b)
}

/// Every relation `Z[G] → Z[H]` accepted by the arrow-level morphism
/// condition, by exhausting all pair subsets. Sizes stay desk-scale.
pub fn rel_cpstar_morphisms(g: &Groupoid, h: &Groupoid) -> Vec<Relation> {
    let (n, m) = (g.morphisms(), h.morphisms());
    assert!(n * m <= 16, "mask enumeration needs at most 16 cells");
    let src = FinSet::of_size(n);
    let dst = FinSet::of_size(m);
    (0u32..1 << (n * m))
        .map(|mask| {
            let pairs = (0..n * m).filter(|i| mask & (1 << i) != 0).map(|i| (i / m, i % m));
            Relation::new(src.clone(), dst.clone(), pairs).expect("pairs in range")
        })
        .filter(|r| is_cpstar_rel_groupoid(r, g, h))
        .collect()
}

/// Transport an algebra along a unitary change of carrier basis.
pub fn conjugate_algebra(alg: &FrobeniusAlgebra<FHilb64>, u: &Mat64) -> FrobeniusAlgebra<FHilb64> {
    let ud = u.dagger();
    let mult = u.matmul(alg.mult()).matmul(&ud.kron(&ud));
    let unit = u.matmul(alg.unit());
    let normaliser = u.matmul(alg.normaliser()).matmul(&ud);
    FrobeniusAlgebra::from_parts(*alg.carrier(), mult, unit, Some(normaliser))
        .expect("conjugation preserves shapes")
}

/// A random matrix-backend algebra: a direct sum of matrix blocks and
/// classical points with total dimension in `2..=max_dim`, conjugated by a
/// random unitary so nothing stays aligned with the standard basis.
pub fn rand_fhilb_algebra(rng: &mut StdRng, max_dim: usize, tol: &Tolerance) -> FrobeniusAlgebra<FHilb64> {
    let target = rng.gen_range(2..=max_dim);
    let mut blocks: Vec<FrobeniusAlgebra<FHilb64>> = Vec::new();
    let mut dim = 0;
    while dim < target {
        if rng.gen_bool(0.4) && dim + 4 <= target {
            let pants = FrobeniusAlgebra::<FHilb64>::pair_of_pants(2, tol).expect("pants");
            blocks.push(pants.normalised(tol).expect("normalisable").0);
            dim += 4;
        } else {
            blocks.push(FrobeniusAlgebra::<FHilb64>::classical(1));
            dim += 1;
        }
    }
    let plain = oplus_all(&blocks, tol).expect("summands are normalised");
    let u = rand_unitary(rng, dim);
    conjugate_algebra(&plain, &u)
}
