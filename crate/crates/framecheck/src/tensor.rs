//! Fixed-shape 3D tensor algebra: vectors, second-order tensors, orthogonal
//! observer changes and seeded Haar sampling of the orthogonal group.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Orthogonality tolerance for user-supplied tensors (may come from low-precision text).
pub const USER_ORTH_TOL: f64 = 1e-9;
/// Orthogonality tolerance for internally generated tensors.
pub const INTERNAL_ORTH_TOL: f64 = 1e-12;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TensorError {
    #[error("tensor is not orthogonal: max |Q·Qᵀ - 1| = {deviation:e} exceeds {tol:e}")]
    NotOrthogonal { deviation: f64, tol: f64 },
    #[error("tensor has non-finite entries")]
    NonFinite,
}

fn nan_max(m: f64, a: f64) -> f64 {
    if a > m || a.is_nan() {
        a
    } else {
        m
    }
}

/// A vector on 3D Euclidean space, in components of some orthonormal basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    /// Unit vector along coordinate axis `i` (0, 1 or 2).
    pub fn axis(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vec3(v)
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute component; NaN if any component is NaN.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| nan_max(m, x.abs()))
    }

    pub fn normalized(&self) -> Vec3 {
        *self * (1.0 / self.norm())
    }

    pub fn outer(&self, other: &Vec3) -> Tensor2 {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[i] * other.0[j];
            }
        }
        Tensor2(t)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(self.0.map(|x| -x))
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3(self.0.map(|x| x * s))
    }
}

/// A second-order tensor on 3D Euclidean space, stored row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor2(pub [[f64; 3]; 3]);

impl Default for Tensor2 {
    fn default() -> Self {
        Tensor2::identity()
    }
}

impl Tensor2 {
    pub const ZERO: Tensor2 = Tensor2([[0.0; 3]; 3]);

    pub const fn identity() -> Self {
        Tensor2([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn scalar(alpha: f64) -> Self {
        Tensor2::identity() * alpha
    }

    pub fn diag(d0: f64, d1: f64, d2: f64) -> Self {
        Tensor2([[d0, 0.0, 0.0], [0.0, d1, 0.0], [0.0, 0.0, d2]])
    }

    pub fn from_row_major(v: [f64; 9]) -> Self {
        Tensor2([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.0;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }

    /// Tensor whose columns are `c0`, `c1`, `c2`.
    pub fn from_columns(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Tensor2([
            [c0[0], c1[0], c2[0]],
            [c0[1], c1[1], c2[1]],
            [c0[2], c1[2], c2[2]],
        ])
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Tensor2 {
        Tensor2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i])
        }))
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest absolute entry; NaN if any entry is NaN.
    pub fn max_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0, |m, x| nan_max(m, x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        let m = &self.0;
        Vec3(std::array::from_fn(|i| {
            m[i][0] * v.0[0] + m[i][1] * v.0[1] + m[i][2] * v.0[2]
        }))
    }

    /// Right-handed rotation by `angle` radians about `axis` (need not be unit).
    pub fn rotation(axis: Vec3, angle: f64) -> Tensor2 {
        let n = axis.normalized();
        let (s, c) = angle.sin_cos();
        let k = Tensor2([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]]);
        Tensor2::identity() * c + k * s + n.outer(&n) * (1.0 - c)
    }

    /// Rotation by a multiple of 90° about a coordinate axis, with exact entries.
    pub fn quarter_turns(axis: usize, turns: i32) -> Tensor2 {
        let (c, s) = match turns.rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
        let mut m = [[0.0; 3]; 3];
        m[axis][axis] = 1.0;
        m[a][a] = c;
        m[a][b] = -s;
        m[b][a] = s;
        m[b][b] = c;
        Tensor2(m)
    }
}

impl Index<(usize, usize)> for Tensor2 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Tensor2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Tensor2 {
    type Output = Tensor2;
    fn add(self, rhs: Tensor2) -> Tensor2 {
        Tensor2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl Sub for Tensor2 {
    type Output = Tensor2;
    fn sub(self, rhs: Tensor2) -> Tensor2 {
        Tensor2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])
        }))
    }
}

impl Mul<f64> for Tensor2 {
    type Output = Tensor2;
    fn mul(self, s: f64) -> Tensor2 {
        Tensor2(self.0.map(|row| row.map(|x| x * s)))
    }
}

impl Mul<Vec3> for Tensor2 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        self.mul_vec(&v)
    }
}

impl Mul for Tensor2 {
    type Output = Tensor2;
    fn mul(self, rhs: Tensor2) -> Tensor2 {
        let (a, b) = (&self.0, &rhs.0);
        Tensor2(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j])
        }))
    }
}

impl fmt::Display for Tensor2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "[{:>12} {:>12} {:>12}]",
                sig6(row[0]),
                sig6(row[1]),
                sig6(row[2])
            )?;
        }
        Ok(())
    }
}

/// Formats `x` with six significant digits, in the style of C's `%.6g`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').unwrap();
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Max-norm deviation of `t·tᵀ` from the identity.
pub fn orthogonality_defect(t: &Tensor2) -> f64 {
    (*t * t.transpose() - Tensor2::identity()).max_norm()
}

/// True iff `max |t·tᵀ - 1| <= tol`. Non-finite tensors are never orthogonal.
pub fn is_orthogonal(t: &Tensor2, tol: f64) -> bool {
    t.is_finite() && orthogonality_defect(t) <= tol
}

/// Projects a nearly orthogonal tensor onto O(3) with Newton-Schulz
/// iterations `X ← X·(3·1 - XᵀX)/2`, which converge to the orthogonal
/// polar factor when `max |XᵀX - 1|` is well below one.
pub fn nearest_orthogonal(t: &Tensor2) -> Result<Tensor2, TensorError> {
    if !t.is_finite() {
        return Err(TensorError::NonFinite);
    }
    let start = orthogonality_defect(t);
    if start > 0.5 {
        return Err(TensorError::NotOrthogonal {
            deviation: start,
            tol: 0.5,
        });
    }
    let mut x = *t;
    for _ in 0..16 {
        if orthogonality_defect(&x) <= 1e-15 {
            break;
        }
        x = x * (Tensor2::scalar(3.0) - x.transpose() * x) * 0.5;
    }
    Ok(x)
}

/// An orthogonal tensor relating the canonical observer `B` to another observer `B*`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObserverChange {
    q: Tensor2,
}

impl ObserverChange {
    pub const IDENTITY: ObserverChange = ObserverChange {
        q: Tensor2::identity(),
    };

    /// Validates orthogonality at `tol` (see [`USER_ORTH_TOL`]).
    pub fn new(q: Tensor2, tol: f64) -> Result<Self, TensorError> {
        if !q.is_finite() {
            return Err(TensorError::NonFinite);
        }
        let deviation = orthogonality_defect(&q);
        if deviation > tol {
            return Err(TensorError::NotOrthogonal { deviation, tol });
        }
        Ok(ObserverChange { q })
    }

    pub fn random(seed: RngSeed) -> Self {
        ObserverChange {
            q: random_orthogonal(seed, false),
        }
    }

    pub fn matrix(&self) -> &Tensor2 {
        &self.q
    }

    /// The inverse observer change, `Qᵀ`.
    pub fn inverse(&self) -> ObserverChange {
        ObserverChange {
            q: self.q.transpose(),
        }
    }
}

/// Components seen by the new observer: `v* = Q·v`.
pub fn transform_vector(q: &ObserverChange, v: &Vec3) -> Vec3 {
    q.q.mul_vec(v)
}

/// Components of a second-order tensor for the new observer: `H* = Q·H·Qᵀ`.
pub fn conjugate_tensor(q: &ObserverChange, h: &Tensor2) -> Tensor2 {
    q.q * *h * q.q.transpose()
}

/// Explicit seed for every random stream in the crate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent sub-seed for stream `index`, via a splitmix64 finalizer.
    pub fn derive(self, index: u64) -> RngSeed {
        let mut z = self
            .0
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngSeed(z ^ (z >> 31))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Haar-distributed orthogonal tensor: QR orthonormalization of a standard
/// normal 3×3 matrix with the sign of `R`'s diagonal fixed positive.
///
/// Columns one and two come from Gram-Schmidt with one reorthogonalization
/// pass; column three is the cross product, with its sign taken from
/// `det(A)` so that `det Q = sign det A` exactly as in the QR factorization.
/// With `proper_only`, an improper draw has its first column negated, which
/// maps Haar measure on the improper coset onto Haar measure on SO(3).
pub fn random_orthogonal(seed: RngSeed, proper_only: bool) -> Tensor2 {
    let mut rng = seed.rng();
    loop {
        let mut a = [Vec3::ZERO; 3];
        for col in a.iter_mut() {
            *col = Vec3(std::array::from_fn(|_| rng.sample(StandardNormal)));
        }
        if let Some(q) = orthonormalize(&a) {
            if proper_only && q.det() < 0.0 {
                let c0 = -q.column(0);
                return Tensor2::from_columns(c0, q.column(1), q.column(2));
            }
            return q;
        }
    }
}

fn orthonormalize(a: &[Vec3; 3]) -> Option<Tensor2> {
    const DEGENERATE: f64 = 1e-10;
    let n0 = a[0].norm();
    if n0 < DEGENERATE {
        return None;
    }
    let q0 = a[0] * (1.0 / n0);
    let mut v = a[1];
    for _ in 0..2 {
        v = v - q0 * q0.dot(&v);
    }
    let n1 = v.norm();
    if n1 < DEGENERATE * a[1].norm().max(1.0) {
        return None;
    }
    let q1 = v * (1.0 / n1);
    let det_a = Tensor2::from_columns(a[0], a[1], a[2]).det();
    if det_a.abs() < DEGENERATE {
        return None;
    }
    let q2 = q0.cross(&q1).normalized() * det_a.signum();
    Some(Tensor2::from_columns(q0, q1, q2))
}
