//! Two-level and bipartite two-level linear algebra.
//!
//! Basis order is fixed as |00⟩, |01⟩, |10⟩, |11⟩ with the left tensor
//! factor belonging to Alice. Every Kronecker product and every amplitude
//! index in this module follows that order.

use alloc::format;
use num_complex::Complex64;

use crate::behavior::Behavior;
use crate::error::{invalid, Error, Result};

/// Deviation of an input direction's norm from 1 that is silently repaired.
/// Anything larger is rejected.
pub const UNIT_INPUT_TOL: f64 = 1e-9;

/// Largest imaginary part tolerated on a Hermitian expectation value.
pub const IMAG_TOL: f64 = 1e-9;

pub type Matrix2 = [[Complex64; 2]; 2];
pub type Matrix4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub const SIGMA_X: Matrix2 = [[ZERO, ONE], [ONE, ZERO]];
pub const SIGMA_Y: Matrix2 = [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]];
pub const SIGMA_Z: Matrix2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];
pub const IDENTITY2: Matrix2 = [[ONE, ZERO], [ZERO, ONE]];

/// A direction in ℝ³, normalized to unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const X: Self = Self { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Self = Self { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Self = Self { x: 0.0, y: 0.0, z: 1.0 };

    /// Accepts `(x, y, z)` whose norm is within [`UNIT_INPUT_TOL`] of 1 and
    /// renormalizes it exactly.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(invalid("unit vector has non-finite component"));
        }
        let norm = libm::sqrt(x * x + y * y + z * z);
        if (norm - 1.0).abs() > UNIT_INPUT_TOL {
            return Err(invalid(format!("vector ({x}, {y}, {z}) has norm {norm}, expected 1")));
        }
        Ok(Self { x: x / norm, y: y / norm, z: z / norm })
    }

    /// Normalizes an arbitrary nonzero vector. Returns `None` when the norm
    /// is below `min_norm`.
    pub fn normalize(v: [f64; 3], min_norm: f64) -> Option<Self> {
        let norm = norm3(v);
        if !norm.is_finite() || norm < min_norm {
            return None;
        }
        Some(Self { x: v[0] / norm, y: v[1] / norm, z: v[2] / norm })
    }

    /// Vector in the xy-plane at `degrees` from the x axis.
    pub fn in_xy_plane(degrees: f64) -> Self {
        let t = degrees.to_radians();
        Self { x: libm::cos(t), y: libm::sin(t), z: 0.0 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn y(self) -> f64 {
        self.y
    }

    pub fn z(self) -> f64 {
        self.z
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Rotates by `degrees` about `axis` (right-hand rule, Rodrigues' formula).
    pub fn rotated(self, axis: UnitVector3, degrees: f64) -> Self {
        let t = degrees.to_radians();
        let (s, c) = (libm::sin(t), libm::cos(t));
        let k = axis.to_array();
        let v = self.to_array();
        let kxv = cross(k, v);
        let kdv = axis.dot(self);
        let r = [
            v[0] * c + kxv[0] * s + k[0] * kdv * (1.0 - c),
            v[1] * c + kxv[1] * s + k[1] * kdv * (1.0 - c),
            v[2] * c + kxv[2] * s + k[2] * kdv * (1.0 - c),
        ];
        // Rotation preserves the norm up to rounding.
        Self::normalize(r, 0.5).unwrap_or(self)
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

impl core::ops::Neg for UnitVector3 {
    type Output = Self;

    fn neg(self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }
}

/// A ±1-valued spin observable `v·σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable2 {
    m: Matrix2,
}

impl Observable2 {
    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    /// Projector onto the eigenspace with eigenvalue `sign` (±1): (I ± v·σ)/2.
    pub fn projector(&self, sign: f64) -> Matrix2 {
        let mut p = [[ZERO; 2]; 2];
        for (r, row) in p.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = (IDENTITY2[r][c] + self.m[r][c] * sign) * 0.5;
            }
        }
        p
    }
}

/// Returns `v.x σx + v.y σy + v.z σz`.
pub fn pauli_dot(v: UnitVector3) -> Observable2 {
    let mut m = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = SIGMA_X[r][c] * v.x + SIGMA_Y[r][c] * v.y + SIGMA_Z[r][c] * v.z;
        }
    }
    Observable2 { m }
}

/// Checked variant of [`pauli_dot`] for raw components.
pub fn pauli_dot_checked(x: f64, y: f64, z: f64) -> Result<Observable2> {
    UnitVector3::new(x, y, z).map(pauli_dot)
}

/// Kronecker product `left ⊗ right` in the fixed basis order.
pub fn kron(left: &Matrix2, right: &Matrix2) -> Matrix4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = left[i][j] * right[k][l];
                }
            }
        }
    }
    out
}

/// `mA ⊗ mB` for two spin observables.
pub fn tensor(alice: &Observable2, bob: &Observable2) -> Matrix4 {
    kron(&alice.m, &bob.m)
}

/// Pure state of two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amp: [Complex64; 4],
}

impl TwoQubitState {
    /// Accepts amplitudes whose squared norm is within `UNIT_INPUT_TOL` of 1.
    pub fn new(amp: [Complex64; 4]) -> Result<Self> {
        Self::with_tolerance(amp, UNIT_INPUT_TOL)
    }

    /// Accepts amplitudes whose squared norm deviates from 1 by at most
    /// `tol`, then renormalizes.
    pub fn with_tolerance(amp: [Complex64; 4], tol: f64) -> Result<Self> {
        if amp.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(invalid("state amplitude is not finite"));
        }
        let norm_sqr: f64 = amp.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol {
            return Err(invalid(format!("state has squared norm {norm_sqr}, expected 1")));
        }
        let scale = 1.0 / libm::sqrt(norm_sqr);
        Ok(Self { amp: amp.map(|a| a * scale) })
    }

    /// Computational basis state |ij⟩, `index = 2i + j`.
    pub fn basis(index: usize) -> Self {
        let mut amp = [ZERO; 4];
        amp[index & 3] = ONE;
        Self { amp }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amp
    }

    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amp.iter().zip(other.amp.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// ⟨ψ|M|ψ⟩.
    pub fn expectation(&self, m: &Matrix4) -> Complex64 {
        let mut acc = ZERO;
        for (r, row) in m.iter().enumerate() {
            let mut mv = ZERO;
            for (c, entry) in row.iter().enumerate() {
                mv += entry * self.amp[c];
            }
            acc += self.amp[r].conj() * mv;
        }
        acc
    }
}

/// The singlet (|01⟩ − |10⟩)/√2.
pub fn singlet() -> TwoQubitState {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    TwoQubitState { amp: [ZERO, Complex64::new(h, 0.0), Complex64::new(-h, 0.0), ZERO] }
}

fn real_expectation(psi: &TwoQubitState, m: &Matrix4) -> Result<f64> {
    let e = psi.expectation(m);
    if e.im.abs() > IMAG_TOL {
        return Err(Error::Inconsistent(format!("expectation has imaginary part {}", e.im)));
    }
    Ok(e.re.clamp(-1.0, 1.0))
}

/// ⟨ψ|(u·σ)⊗(v·σ)|ψ⟩.
pub fn correlation(psi: &TwoQubitState, u: UnitVector3, v: UnitVector3) -> Result<f64> {
    real_expectation(psi, &tensor(&pauli_dot(u), &pauli_dot(v)))
}

/// Alice's pair (u, u′) followed by Bob's pair (v, v′).
pub type SettingVectors = [UnitVector3; 4];

/// Outcome table P(A,B|x,y) = ⟨ψ|Π_A(x)⊗Π_B(y)|ψ⟩ with Π±(v) = (I ± v·σ)/2.
pub fn quantum_behavior(psi: &TwoQubitState, settings: &SettingVectors) -> Behavior {
    let alice = [pauli_dot(settings[0]), pauli_dot(settings[1])];
    let bob = [pauli_dot(settings[2]), pauli_dot(settings[3])];
    let signs = [1.0, -1.0];
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            for (ai, sa) in signs.iter().enumerate() {
                let pa = alice[x].projector(*sa);
                for (bi, sb) in signs.iter().enumerate() {
                    let pb = bob[y].projector(*sb);
                    // Projector expectations are real and nonnegative up to rounding.
                    let e = psi.expectation(&kron(&pa, &pb)).re;
                    p[x][y][ai][bi] = if e < 0.0 { 0.0 } else { e };
                }
            }
        }
    }
    Behavior::from_table_unchecked(p)
}

/// Correlation tensor T_ij = ⟨ψ|σi⊗σj|ψ⟩, so that E(u, v) = uᵀ T v.
pub fn correlation_matrix(psi: &TwoQubitState) -> [[f64; 3]; 3] {
    let paulis = [SIGMA_X, SIGMA_Y, SIGMA_Z];
    let mut t = [[0.0; 3]; 3];
    for (i, si) in paulis.iter().enumerate() {
        for (j, sj) in paulis.iter().enumerate() {
            t[i][j] = psi.expectation(&kron(si, sj)).re;
        }
    }
    t
}

pub(crate) fn mat_vec(t: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        t[0][0] * v[0] + t[0][1] * v[1] + t[0][2] * v[2],
        t[1][0] * v[0] + t[1][1] * v[1] + t[1][2] * v[2],
        t[2][0] * v[0] + t[2][1] * v[1] + t[2][2] * v[2],
    ]
}

pub(crate) fn transpose(t: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in t.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[j][i] = *v;
        }
    }
    out
}

/// uᵀ T v.
pub fn bilinear(t: &[[f64; 3]; 3], u: UnitVector3, v: UnitVector3) -> f64 {
    let tv = mat_vec(t, v.to_array());
    let u = u.to_array();
    u[0] * tv[0] + u[1] * tv[1] + u[2] * tv[2]
}
