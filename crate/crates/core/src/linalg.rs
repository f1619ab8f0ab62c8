//! Small dense helpers for 3-vectors and 3×3 matrices.

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn mat_vec(m: &Mat3, v: Vec3) -> Vec3 {
    std::array::from_fn(|i| dot(m[i], v))
}

/// Inner product u·g·v.
pub fn metric_dot(g: &Mat3, u: Vec3, v: Vec3) -> f64 {
    dot(u, mat_vec(g, v))
}

pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse by adjugate over determinant; caller guarantees `det` nonzero.
pub fn inv3(m: &Mat3, det: f64) -> Mat3 {
    let c = |i: usize, j: usize| -> f64 {
        let r = [(i + 1) % 3, (i + 2) % 3];
        let s = [(j + 1) % 3, (j + 2) % 3];
        m[r[0]][s[0]] * m[r[1]][s[1]] - m[r[0]][s[1]] * m[r[1]][s[0]]
    };
    // adj(m)_{ij} = cofactor_{ji}; the cyclic index trick already transposes
    std::array::from_fn(|i| std::array::from_fn(|j| c(j, i) / det))
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric 2×2.
pub fn eig_sym2(a: f64, b: f64, c: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let mean = 0.5 * (a + c);
    let half_diff = 0.5 * (a - c);
    let radius = (half_diff * half_diff + b * b).sqrt();
    let lo = mean - radius;
    let hi = mean + radius;
    // eigenvector for `hi`: pick the better conditioned of (b, hi-a), (hi-c, b)
    let v_hi = if half_diff >= 0.0 { [hi - c, b] } else { [b, hi - a] };
    let norm = (v_hi[0] * v_hi[0] + v_hi[1] * v_hi[1]).sqrt();
    let v_hi = if norm > 0.0 { [v_hi[0] / norm, v_hi[1] / norm] } else { [1.0, 0.0] };
    let v_lo = [-v_hi[1], v_hi[0]];
    ([lo, hi], [v_lo, v_hi])
}
