#![allow(dead_code)]

use adiabat::linalg::{eigh, CMatrix};
use adiabat::{Envelope, HamiltonianSchedule, HermitianTerm};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..d {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// `exp(iK)` for a random Hermitian `K`.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let k = random_hermitian(rng, d) * c(3.0, 0.0);
    let (values, vectors) = eigh(&k);
    let mut u = CMatrix::zeros(d, d);
    for (lambda, v) in values.iter().zip(&vectors) {
        u += v * v.adjoint() * Complex64::from_polar(1.0, *lambda);
    }
    u
}

pub fn random_phases(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |_, _| {
        Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
    }))
}

/// A few random Hermitian terms with random polynomial envelopes of degree
/// at most three.
pub fn random_schedule(rng: &mut ChaCha8Rng, d: usize) -> HamiltonianSchedule {
    let count = rng.gen_range(2..=3);
    let terms = (0..count)
        .map(|_| {
            let degree = rng.gen_range(0..=3);
            let poly = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let term = HermitianTerm::new(random_hermitian(rng, d)).unwrap();
            (Envelope::polynomial(poly), term)
        })
        .collect();
    HamiltonianSchedule::new(terms).unwrap()
}

/// Complex three-level schedule `(1−s)A + sB + s(1−s)C` with a ground gap
/// that stays open along the path.
#[rustfmt::skip]
pub fn three_level() -> HamiltonianSchedule {
    let a = DMatrix::from_row_slice(
        3,
        3,
        &[
            c(0.0, 0.0), c(0.1, 0.05), c(0.0, 0.0),
            c(0.1, -0.05), c(1.0, 0.0), c(0.05, 0.1),
            c(0.0, 0.0), c(0.05, -0.1), c(2.2, 0.0),
        ],
    );
    let b = DMatrix::from_row_slice(
        3,
        3,
        &[
            c(1.3, 0.0), c(0.2, -0.1), c(0.1, 0.1),
            c(0.2, 0.1), c(0.0, 0.0), c(0.0, 0.15),
            c(0.1, -0.1), c(0.0, -0.15), c(2.0, 0.0),
        ],
    );
    let cm = DMatrix::from_row_slice(
        3,
        3,
        &[
            c(0.5, 0.0), c(0.0, 0.3), c(0.2, 0.0),
            c(0.0, -0.3), c(0.2, 0.0), c(0.1, 0.1),
            c(0.2, 0.0), c(0.1, -0.1), c(-0.4, 0.0),
        ],
    );
    HamiltonianSchedule::new(vec![
        (Envelope::polynomial(vec![1.0, -1.0]), HermitianTerm::new(a).unwrap()),
        (Envelope::polynomial(vec![0.0, 1.0]), HermitianTerm::new(b).unwrap()),
        (Envelope::polynomial(vec![0.0, 1.0, -1.0]), HermitianTerm::new(cm).unwrap()),
    ])
    .unwrap()
}

/// Independent composite Simpson rule with `n` (even) intervals.
pub fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * k as f64);
    }
    acc * h / 3.0
}

pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (a.ln() + (b.ln() - a.ln()) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Gap of `s(1−s)σ_z + 0.2σ_x`.
pub fn quadratic_gap(s: f64) -> f64 {
    2.0 * ((s * (1.0 - s)).powi(2) + 0.04).sqrt()
}

pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
