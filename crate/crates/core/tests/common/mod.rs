#![allow(dead_code)]

use condspec::linalg::{eigenvalues, CMatrix, CVector};
use condspec::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Dense matrix with entries uniform in the unit square; about a third of
/// the draws are purely real.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    let real = rng.random_bool(1.0 / 3.0);
    CMatrix::from_fn(n, n, |_, _| {
        let z = random_complex(rng);
        if real {
            c(z.re, 0.0)
        } else {
            z
        }
    })
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::new((0..n).map(|_| random_complex(rng)).collect()).unwrap()
}

/// Unitary factor of a random matrix by modified Gram-Schmidt.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| random_complex(rng)).collect())
        .collect();
    for j in 0..n {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let proj: Complex64 = done[k]
                .iter()
                .zip(rest[0].iter())
                .map(|(q, v)| q.conj() * v)
                .sum();
            for (v, q) in rest[0].iter_mut().zip(done[k].iter()) {
                *v -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn max_real_eig(a: &CMatrix) -> f64 {
    eigenvalues(a)
        .unwrap()
        .require_converged()
        .unwrap()
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn to_nalgebra(a: &CMatrix) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

/// Singular values by an independent implementation, descending.
pub fn oracle_singular_values(a: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_nalgebra(a).singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn oracle_eigenvalues(a: &CMatrix) -> Vec<Complex64> {
    let m = to_nalgebra(a);
    // complex Schur form is triangular
    let (_, t) = nalgebra::linalg::Schur::new(m).unpack();
    t.diagonal().iter().copied().collect()
}

/// Largest distance between two multisets under greedy nearest matching.
pub fn spectrum_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}
