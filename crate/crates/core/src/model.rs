//! Physical parameters and Bloch-space coefficient matrices.
//!
//! The unit cell holds three bosonic modes: cavity A, cavity B and the
//! collective spin boson obtained from the Holstein-Primakoff mapping in the
//! thermodynamic limit. Quadratic Hamiltonians are stored as 6x6 Hermitian
//! coefficient matrices in the Nambu basis
//! `[a_A(k), a_B(k), b(k), a_A(-k)^+, a_B(-k)^+, b(-k)^+]`.

use faer::c64;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lattice geometry of the cavity array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Chain1d,
    Honeycomb2d,
}

impl Geometry {
    pub fn dim(self) -> usize {
        match self {
            Geometry::Chain1d => 1,
            Geometry::Honeycomb2d => 2,
        }
    }

    /// Lattice constant: 1 for the chain, sqrt(3)/3 for the honeycomb.
    pub fn lattice_constant(self) -> f64 {
        match self {
            Geometry::Chain1d => 1.0,
            Geometry::Honeycomb2d => 3f64.sqrt() / 3.0,
        }
    }
}

/// Honeycomb basis vectors.
pub const BASIS_A1: [f64; 2] = [1.0, 0.0];
pub const BASIS_A2: [f64; 2] = [0.5, 0.866_025_403_784_438_6];

/// Physical couplings of the extended Dicke-Hubbard lattice, in units of a
/// reference frequency (all figures use omega_a = omega_b = omega_spin = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Cavity-A frequency.
    pub omega_a: f64,
    /// Cavity-B frequency.
    pub omega_b: f64,
    /// Spin splitting.
    pub omega_spin: f64,
    /// Cavity-cavity hopping strength.
    pub zeta: f64,
    /// Spin-field coupling.
    pub lambda: f64,
    pub geometry: Geometry,
}

impl ModelParams {
    pub fn new(
        omega_a: f64,
        omega_b: f64,
        omega_spin: f64,
        zeta: f64,
        lambda: f64,
        geometry: Geometry,
    ) -> Result<Self> {
        for (name, v) in [
            ("omega_a", omega_a),
            ("omega_b", omega_b),
            ("omega_spin", omega_spin),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::ModelInvalid(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        for (name, v) in [("zeta", zeta), ("lambda", lambda)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::ModelInvalid(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(Self {
            omega_a,
            omega_b,
            omega_spin,
            zeta,
            lambda,
            geometry,
        })
    }

    /// Resonant shortcut used throughout the figures.
    pub fn resonant(omega: f64, zeta: f64, lambda: f64, geometry: Geometry) -> Result<Self> {
        Self::new(omega, omega, omega, zeta, lambda, geometry)
    }

    /// Common frequency if the model is resonant (omega_a = omega_b = omega_spin).
    pub fn resonant_omega(&self) -> Option<f64> {
        let w = self.omega_a;
        if (self.omega_b - w).abs() < 1e-12 * w.abs() && (self.omega_spin - w).abs() < 1e-12 * w.abs()
        {
            Some(w)
        } else {
            None
        }
    }

    /// Model validity flag: the resonant lattice is well defined only for
    /// |zeta / omega| < 1/4. Violations are reported, never silently accepted.
    pub fn hopping_in_range(&self) -> bool {
        match self.resonant_omega() {
            Some(w) => (self.zeta / w).abs() < 0.25,
            None => true,
        }
    }

    pub fn check_hopping(&self) -> Result<()> {
        if self.hopping_in_range() {
            Ok(())
        } else {
            Err(Error::ModelInvalid(format!(
                "|zeta/omega| = {:.6} >= 1/4: the resonant lattice is only well defined for \
                 |zeta/omega| < 1/4",
                (self.zeta / self.omega_a).abs()
            )))
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }
}

/// A point in reciprocal space; dimensionality follows the geometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WaveVector {
    Chain(f64),
    Plane(f64, f64),
}

impl WaveVector {
    pub fn dim(&self) -> usize {
        match self {
            WaveVector::Chain(_) => 1,
            WaveVector::Plane(_, _) => 2,
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            WaveVector::Chain(k) => k.is_finite(),
            WaveVector::Plane(kx, ky) => kx.is_finite() && ky.is_finite(),
        }
    }

    /// Canonical reduction to the first Brillouin zone. Never applied
    /// implicitly by any builder.
    pub fn reduced(&self) -> WaveVector {
        use std::f64::consts::PI;
        let wrap = |x: f64| {
            let y = (x / (2.0 * PI)).rem_euclid(1.0);
            let y = if y >= 0.5 { y - 1.0 } else { y };
            y * 2.0 * PI
        };
        match *self {
            WaveVector::Chain(k) => WaveVector::Chain(wrap(k)),
            WaveVector::Plane(kx, ky) => {
                // fractional coordinates along the reciprocal basis, wrapped
                // to [-1/2, 1/2)
                let f1 = (kx * BASIS_A1[0] + ky * BASIS_A1[1]) / (2.0 * PI);
                let f2 = (kx * BASIS_A2[0] + ky * BASIS_A2[1]) / (2.0 * PI);
                let w = |f: f64| {
                    let g = f.rem_euclid(1.0);
                    if g >= 0.5 {
                        g - 1.0
                    } else {
                        g
                    }
                };
                let (f1, f2) = (w(f1), w(f2));
                // invert the 2x2 fractional map
                let det = BASIS_A1[0] * BASIS_A2[1] - BASIS_A1[1] * BASIS_A2[0];
                let kx = 2.0 * PI * (f1 * BASIS_A2[1] - f2 * BASIS_A1[1]) / det;
                let ky = 2.0 * PI * (-f1 * BASIS_A2[0] + f2 * BASIS_A1[0]) / det;
                WaveVector::Plane(kx, ky)
            }
        }
    }
}

/// Which quadratic Hamiltonian a matrix or solution refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseBranch {
    Normal,
    Superradiant,
}

/// 6x6 Hermitian coefficient matrix of the quadratic Bloch Hamiltonian.
///
/// Basis order: `[a_A(k), a_B(k), b(k), a_A(-k)^+, a_B(-k)^+, b(-k)^+]`.
#[derive(Clone, Debug)]
pub struct BlochMatrix {
    pub k: WaveVector,
    pub branch: PhaseBranch,
    pub entries: faer::Mat<c64>,
}

impl BlochMatrix {
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.entries;
        let mut worst = 0.0f64;
        for i in 0..6 {
            for j in 0..6 {
                let d = (m[(i, j)] - m[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Off-site interaction part: the matrix with its diagonal removed.
    pub fn interaction_part(&self) -> faer::Mat<c64> {
        let mut m = self.entries.clone();
        for i in 0..6 {
            m[(i, i)] = c64::new(0.0, 0.0);
        }
        m
    }
}

/// Sign branch of the macroscopic displacements; the quadratic matrix is
/// branch-independent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignBranch {
    #[default]
    Plus,
    Minus,
}

impl SignBranch {
    fn factor(self) -> f64 {
        match self {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        }
    }
}

/// Macroscopic displacement frame of the superradiant phase, stored as
/// densities per sqrt(N) so the thermodynamic limit never references N.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacedFrame {
    pub mu: f64,
    /// Cavity-A displacement density alpha / sqrt(N).
    pub alpha_n: f64,
    /// Spin displacement density beta / sqrt(N).
    pub beta_n: f64,
    /// Cavity-B displacement density gamma / sqrt(N).
    pub gamma_n: f64,
    pub chi: f64,
    pub xi: f64,
    pub eta: f64,
    pub sign: SignBranch,
}

/// Bloch form factor of the cavity-cavity hopping.
///
/// `f = -zeta (1 + e^{ik})` on the chain; on the honeycomb the sum runs over
/// the two in-cell basis vectors, `f = -zeta (1 + e^{ik.a1} + e^{ik.a2})`.
pub fn form_factor(params: &ModelParams, k: &WaveVector) -> Result<Complex64> {
    if k.dim() != params.geometry.dim() {
        return Err(Error::DimensionMismatch {
            expected: params.geometry.dim(),
            got: k.dim(),
        });
    }
    if !k.is_finite() {
        return Err(Error::Contract("wave vector components must be finite".into()));
    }
    let z = params.zeta;
    Ok(match *k {
        WaveVector::Chain(k) => -z * (Complex64::new(1.0, 0.0) + Complex64::new(0.0, k).exp()),
        WaveVector::Plane(kx, ky) => {
            let p1 = Complex64::new(0.0, kx * BASIS_A1[0] + ky * BASIS_A1[1]).exp();
            let p2 = Complex64::new(0.0, kx * BASIS_A2[0] + ky * BASIS_A2[1]).exp();
            -z * (Complex64::new(1.0, 0.0) + p1 + p2)
        }
    })
}

/// Fills the shared 6x6 template. `g` is the spin-cavity coupling entry,
/// `spin_diag` the spin on-site energy and `spin_pair` the anomalous
/// spin-spin entry at positions (2,5)/(5,2).
fn fill_template(
    params: &ModelParams,
    f: Complex64,
    g: f64,
    spin_diag: f64,
    spin_pair: f64,
) -> faer::Mat<c64> {
    let z = c64::new(0.0, 0.0);
    let mut m = faer::Mat::from_fn(6, 6, |_, _| z);
    let fc = c64::new(f.re, f.im);
    let g = c64::new(g, 0.0);
    let sp = c64::new(spin_pair, 0.0);

    // upper triangle, then mirror
    m[(0, 1)] = fc;
    m[(0, 2)] = g;
    m[(0, 4)] = fc;
    m[(0, 5)] = g;
    m[(1, 3)] = fc.conj();
    m[(2, 3)] = g;
    m[(2, 5)] = sp;
    m[(3, 4)] = fc;
    m[(3, 5)] = g;
    for i in 0..6 {
        for j in (i + 1)..6 {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    let d = [
        params.omega_a,
        params.omega_b,
        spin_diag,
        params.omega_a,
        params.omega_b,
        spin_diag,
    ];
    for i in 0..6 {
        m[(i, i)] = c64::new(d[i], 0.0);
    }
    m
}

/// Normal-phase coefficient matrix M_nor(k).
pub fn build_bloch_normal(params: &ModelParams, k: &WaveVector) -> Result<BlochMatrix> {
    let f = form_factor(params, k)?;
    Ok(BlochMatrix {
        k: *k,
        branch: PhaseBranch::Normal,
        entries: fill_template(params, f, params.lambda, params.omega_spin, 0.0),
    })
}

/// Displacement densities and derived couplings of the superradiant frame.
pub fn displaced_frame(params: &ModelParams, sign: SignBranch) -> Result<DisplacedFrame> {
    if !(params.lambda > 0.0) {
        return Err(Error::Contract(
            "displaced frame requires lambda > 0".into(),
        ));
    }
    let radicand = params.omega_a - 4.0 * params.zeta * params.zeta / params.omega_b;
    if radicand <= 0.0 {
        return Err(Error::ModelInvalid(format!(
            "omega_a - 4 zeta^2 / omega_b = {radicand} <= 0: cavity-cavity coupling too strong"
        )));
    }
    let mu = params.omega_spin * radicand / (4.0 * params.lambda * params.lambda);
    if mu > 1.0 + 1e-12 {
        return Err(Error::SuperradiantFrameInvalid { mu });
    }
    let mu_c = mu.min(1.0);
    let s = sign.factor();
    let alpha_n = s * params.omega_spin / (2.0 * mu * params.lambda)
        * ((1.0 - mu_c * mu_c) / 4.0).sqrt();
    let beta_n = s * ((1.0 - mu_c) / 2.0).sqrt();
    let gamma_n = 2.0 * params.zeta / params.omega_b * alpha_n;
    let chi = params.omega_spin * (1.0 + mu) / (2.0 * mu);
    let xi = params.lambda * mu * (2.0 / (1.0 + mu)).sqrt();
    let eta = params.omega_spin * (1.0 - mu) * (3.0 + mu) / (8.0 * mu * (1.0 + mu));
    Ok(DisplacedFrame {
        mu,
        alpha_n,
        beta_n,
        gamma_n,
        chi,
        xi,
        eta,
        sign,
    })
}

/// Superradiant-phase coefficient matrix M_sup(k) in the displaced frame.
pub fn build_bloch_super(params: &ModelParams, k: &WaveVector) -> Result<BlochMatrix> {
    let frame = displaced_frame(params, SignBranch::Plus)?;
    build_bloch_super_with_frame(params, k, &frame)
}

pub fn build_bloch_super_with_frame(
    params: &ModelParams,
    k: &WaveVector,
    frame: &DisplacedFrame,
) -> Result<BlochMatrix> {
    let f = form_factor(params, k)?;
    Ok(BlochMatrix {
        k: *k,
        branch: PhaseBranch::Superradiant,
        entries: fill_template(
            params,
            f,
            frame.xi,
            frame.chi + 2.0 * frame.eta,
            2.0 * frame.eta,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn resonant(zeta: f64, lambda: f64) -> ModelParams {
        ModelParams::resonant(1.0, zeta, lambda, Geometry::Chain1d).unwrap()
    }

    #[test]
    fn form_factor_chain() {
        let p = resonant(0.18, 0.3);
        let f = form_factor(&p, &WaveVector::Chain(PI)).unwrap();
        assert!(f.norm() < 1e-15, "f(pi) should vanish, got {f}");
        let f0 = form_factor(&p, &WaveVector::Chain(0.0)).unwrap();
        assert_abs_diff_eq!(f0.re, -0.36, epsilon = 1e-15);
        assert_abs_diff_eq!(f0.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn form_factor_honeycomb_gamma_point() {
        let p = ModelParams::resonant(1.0, 0.12, 0.3, Geometry::Honeycomb2d).unwrap();
        let f = form_factor(&p, &WaveVector::Plane(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(f.re, -0.36, epsilon = 1e-15);
        assert_abs_diff_eq!(f.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn form_factor_dimension_mismatch() {
        let p = resonant(0.18, 0.3);
        assert!(matches!(
            form_factor(&p, &WaveVector::Plane(0.0, 0.0)),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn normal_matrix_entries() {
        let p = resonant(0.18, 0.3);
        let m = build_bloch_normal(&p, &WaveVector::Chain(0.0)).unwrap();
        assert_abs_diff_eq!(m.entries[(0, 1)].re, -0.36, epsilon = 1e-15);
        assert_abs_diff_eq!(m.entries[(0, 2)].re, 0.3, epsilon = 1e-15);
        assert!(m.entries[(1, 2)].norm() < 1e-15);
        for i in 0..6 {
            assert_abs_diff_eq!(m.entries[(i, i)].re, 1.0, epsilon = 1e-15);
        }
        assert!(m.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn normal_matrix_decouples_at_pi() {
        let p = resonant(0.18, 0.3);
        let m = build_bloch_normal(&p, &WaveVector::Chain(PI)).unwrap();
        // all f-entries vanish, lambda entries survive
        assert!(m.entries[(0, 1)].norm() < 1e-15);
        assert!(m.entries[(0, 4)].norm() < 1e-15);
        assert_abs_diff_eq!(m.entries[(0, 2)].re, 0.3, epsilon = 1e-15);
    }

    #[test]
    fn normal_matrix_periodic() {
        let p = resonant(0.18, 0.3);
        let k = 0.7321;
        let m1 = build_bloch_normal(&p, &WaveVector::Chain(k)).unwrap();
        let m2 = build_bloch_normal(&p, &WaveVector::Chain(k + 2.0 * PI)).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert!((m1.entries[(i, j)] - m2.entries[(i, j)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn spin_b_sparsity() {
        let p = resonant(0.18, 0.542);
        for m in [
            build_bloch_normal(&p, &WaveVector::Chain(1.1)).unwrap(),
            build_bloch_super(&p, &WaveVector::Chain(1.1)).unwrap(),
        ] {
            for &(i, j) in &[(2, 1), (2, 4), (5, 1), (5, 4)] {
                assert!(m.entries[(i, j)].norm() < 1e-15);
                assert!(m.entries[(j, i)].norm() < 1e-15);
            }
        }
    }

    #[test]
    fn displaced_frame_at_critical_point() {
        let lsc = 0.466_476_151_587_624;
        let p = resonant(0.18, lsc);
        let fr = displaced_frame(&p, SignBranch::Plus).unwrap();
        assert_abs_diff_eq!(fr.mu, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fr.alpha_n, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(fr.beta_n, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(fr.eta, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fr.chi, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fr.xi, lsc, epsilon = 1e-12);
    }

    #[test]
    fn displaced_frame_values() {
        let p = resonant(0.18, 0.542);
        let fr = displaced_frame(&p, SignBranch::Plus).unwrap();
        assert_abs_diff_eq!(fr.mu, 0.740_730_654_539_017_7, epsilon = 1e-14);
        assert_abs_diff_eq!(fr.chi, 1.175_009_191_176_470_6, epsilon = 1e-13);
        assert_abs_diff_eq!(fr.eta, 0.094_021_186_527_744_52, epsilon = 1e-13);
        // gamma/alpha ratio fixed by the cavity-B equation of motion
        assert_abs_diff_eq!(fr.gamma_n / fr.alpha_n, 2.0 * 0.18 / 1.0, epsilon = 1e-14);
    }

    #[test]
    fn displaced_frame_rejects_normal_phase() {
        let p = resonant(0.18, 0.3);
        assert!(matches!(
            displaced_frame(&p, SignBranch::Plus),
            Err(Error::SuperradiantFrameInvalid { .. })
        ));
    }

    #[test]
    fn super_matrix_entries() {
        let p = resonant(0.18, 0.542);
        let m = build_bloch_super(&p, &WaveVector::Chain(0.0)).unwrap();
        assert_abs_diff_eq!(m.entries[(2, 2)].re, 1.363_051_564_231_959_6, epsilon = 1e-13);
        assert_abs_diff_eq!(m.entries[(2, 5)].re, 0.188_042_373_055_489_04, epsilon = 1e-13);
        assert!(m.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn super_matrix_matches_normal_at_boundary() {
        let lsc = 0.466_476_151_587_624;
        let p = resonant(0.18, lsc);
        for &k in &[0.0, 0.4, 2.0, PI] {
            let mn = build_bloch_normal(&p, &WaveVector::Chain(k)).unwrap();
            let ms = build_bloch_super(&p, &WaveVector::Chain(k)).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    assert!(
                        (mn.entries[(i, j)] - ms.entries[(i, j)]).norm() < 1e-12,
                        "entry ({i},{j}) differs at the phase boundary"
                    );
                }
            }
        }
    }

    #[test]
    fn wave_vector_reduction() {
        let k = WaveVector::Chain(3.0 * PI);
        match k.reduced() {
            WaveVector::Chain(r) => assert_abs_diff_eq!(r, -PI, epsilon = 1e-12),
            _ => unreachable!(),
        }
    }

    #[test]
    fn rejects_nonpositive_frequencies() {
        assert!(ModelParams::new(0.0, 1.0, 1.0, 0.1, 0.1, Geometry::Chain1d).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, -0.1, 0.1, Geometry::Chain1d).is_err());
    }

    #[test]
    fn hopping_validity_flag() {
        let p = resonant(0.3, 0.1);
        assert!(!p.hopping_in_range());
        assert!(p.check_hopping().is_err());
        assert!(resonant(0.18, 0.1).check_hopping().is_ok());
    }
}
