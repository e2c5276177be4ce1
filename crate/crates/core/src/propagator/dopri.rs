//! Dormand–Prince 5(4) explicit Runge–Kutta pair.

use num_complex::Complex64;

use crate::linalg::CVector;

pub(crate) const ORDER: i32 = 5;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Fifth-order weights (identical to the last stage row, FSAL).
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub(crate) struct Step {
    pub y: CVector,
    /// Derivative at the new point, reusable as the next first stage.
    pub dy: CVector,
    /// Euclidean norm of the embedded error estimate.
    pub error: f64,
}

/// One step from `(t, y)` with `dy = f(t, y)` already known.
pub(crate) fn step<F>(f: &F, t: f64, y: &CVector, dy: &CVector, h: f64) -> Step
where
    F: Fn(f64, &CVector) -> CVector,
{
    let mut k: Vec<CVector> = Vec::with_capacity(7);
    k.push(dy.clone());
    for stage in 1..7 {
        let mut arg = y.clone();
        for (j, kj) in k.iter().enumerate() {
            let a = A[stage][j];
            if a != 0.0 {
                arg.axpy(Complex64::new(h * a, 0.0), kj, Complex64::new(1.0, 0.0));
            }
        }
        k.push(f(t + C[stage] * h, &arg));
    }
    // The seventh stage is evaluated at the fifth-order solution itself.
    let mut y_new = y.clone();
    for (j, kj) in k.iter().enumerate().take(6) {
        if B[j] != 0.0 {
            y_new.axpy(Complex64::new(h * B[j], 0.0), kj, Complex64::new(1.0, 0.0));
        }
    }
    let mut err = CVector::zeros(y.len());
    for (j, kj) in k.iter().enumerate() {
        if E[j] != 0.0 {
            err.axpy(Complex64::new(h * E[j], 0.0), kj, Complex64::new(1.0, 0.0));
        }
    }
    let dy_new = k.pop().expect("seven stages");
    Step {
        y: y_new,
        dy: dy_new,
        error: err.norm(),
    }
}
