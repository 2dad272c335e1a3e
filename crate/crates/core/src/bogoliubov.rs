//! Symplectic diagonalization of the 6x6 quadratic-boson coefficient
//! matrices, analytic spectral forms, chiral-symmetry defect and vacuum
//! pairing correlators.
//!
//! The working object is the dynamical matrix `D = tau_z M` with
//! `tau_z = diag(1,1,1,-1,-1,-1)`. For a stable matrix its spectrum is real
//! and closed under negation, and the eigenvector matrix can be scaled into a
//! paraunitary transform `T` with `T^+ tau_z T = tau_z`.

use faer::c64;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{BlochMatrix, ModelParams, PhaseBranch, WaveVector};

/// Relative tolerance below which an eigenvalue's imaginary part counts as zero.
pub const STABILITY_IM_TOL: f64 = 1e-9;
/// Tolerance for the +/- pairing of the dynamical spectrum.
pub const PAIRING_TOL: f64 = 1e-10;
/// Eigenvalues closer than this form a degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Hermiticity contract on input matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Signs of the bosonic metric tau_z in the Nambu basis.
pub const TAU_Z: [f64; 6] = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
/// Chiral operator C = diag(-1,1,1,-1,1,1).
pub const CHIRAL: [f64; 6] = [-1.0, 1.0, 1.0, -1.0, 1.0, 1.0];

/// Result of diagonalizing one Bloch matrix.
#[derive(Clone, Debug)]
pub struct BandSolution {
    pub k: WaveVector,
    pub branch: PhaseBranch,
    /// Positive-branch quasiparticle energies, ascending; `None` when unstable.
    pub energies: Option<[f64; 3]>,
    /// All six eigenvalues of `tau_z M`; `{+E1,+E2,+E3,-E1,-E2,-E3}` when stable.
    pub full_spectrum: [Complex64; 6],
    /// Paraunitary transform, columns ordered as the full spectrum.
    pub transform: Option<faer::Mat<c64>>,
    pub stable: bool,
    /// Largest |Im| among the eigenvalues.
    pub max_imag: f64,
}

impl BandSolution {
    /// Particle-sector components (rows 0..3) of the eigenvector for positive
    /// band `band`, renormalized to unit total weight. Mode order A, B, spin.
    pub fn particle_weights(&self, band: usize) -> Option<[f64; 3]> {
        let t = self.transform.as_ref()?;
        let mut w = [0.0f64; 3];
        for i in 0..3 {
            w[i] = t[(i, band)].norm_sqr();
        }
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return None;
        }
        Some([w[0] / total, w[1] / total, w[2] / total])
    }

    /// Frobenius deviation of `T^+ tau_z T` from `tau_z`.
    pub fn paraunitarity_defect(&self) -> Option<f64> {
        let t = self.transform.as_ref()?;
        let mut acc = 0.0f64;
        for a in 0..6 {
            for b in 0..6 {
                let mut s = c64::new(0.0, 0.0);
                for i in 0..6 {
                    s += t[(i, a)].conj() * TAU_Z[i] * t[(i, b)];
                }
                let target = if a == b { TAU_Z[a] } else { 0.0 };
                acc += (s - c64::new(target, 0.0)).norm_sqr();
            }
        }
        Some(acc.sqrt())
    }
}

fn tz_inner(a: &[c64; 6], b: &[c64; 6]) -> c64 {
    let mut s = c64::new(0.0, 0.0);
    for i in 0..6 {
        s += a[i].conj() * TAU_Z[i] * b[i];
    }
    s
}

fn col_to_array(m: faer::MatRef<'_, c64>, j: usize) -> [c64; 6] {
    std::array::from_fn(|i| m[(i, j)])
}

/// Mode weight used for the deterministic tie-break inside degenerate
/// clusters: cavity-B weight first, then spin weight.
fn tie_break_key(v: &[c64; 6]) -> (f64, f64) {
    let b = v[1].norm_sqr() + v[4].norm_sqr();
    let s = v[2].norm_sqr() + v[5].norm_sqr();
    (b, s)
}

/// Symplectic eigen-decomposition of `D = tau_z M`.
///
/// When all eigenvalues are real, come in +/- pairs and carry definite
/// tau_z norm, the solution is stable and a paraunitary `T` is returned.
/// Otherwise the full complex spectrum is still reported.
pub fn diagonalize(m: &BlochMatrix) -> Result<BandSolution> {
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NonHermitian { defect });
    }

    let mut d = m.entries.clone();
    for i in 3..6 {
        for j in 0..6 {
            d[(i, j)] = -d[(i, j)];
        }
    }

    let evd = faer::linalg::solvers::Eigen::new(d.as_ref())
        .map_err(|e| Error::Contract(format!("eigendecomposition failed: {e:?}")))?;
    let vals: Vec<c64> = (0..6).map(|i| evd.S()[i]).collect();
    let vecs = evd.U();

    let max_imag = vals.iter().map(|v| v.im.abs()).fold(0.0f64, f64::max);
    let scale = vals.iter().map(|v| v.norm()).fold(1.0f64, f64::max);

    let mut spectrum_sorted: Vec<c64> = vals.clone();
    spectrum_sorted.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let unstable = |vals: &[c64]| -> BandSolution {
        let mut fs = [Complex64::default(); 6];
        for (i, v) in vals.iter().enumerate() {
            fs[i] = Complex64::new(v.re, v.im);
        }
        BandSolution {
            k: m.k,
            branch: m.branch,
            energies: None,
            full_spectrum: fs,
            transform: None,
            stable: false,
            max_imag,
        }
    };

    let all_real = vals
        .iter()
        .all(|v| v.im.abs() < STABILITY_IM_TOL * 1.0f64.max(v.re.abs()));
    if !all_real {
        return Ok(unstable(&spectrum_sorted));
    }

    // ascending real order: [-E3,-E2,-E1,+E1,+E2,+E3]
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| vals[a].re.partial_cmp(&vals[b].re).unwrap());

    let paired = (0..3).all(|i| {
        (vals[order[i]].re + vals[order[5 - i]].re).abs() < PAIRING_TOL * scale
    });
    let strictly_positive = vals[order[3]].re > 0.0;
    if !paired || !strictly_positive {
        return Ok(unstable(&spectrum_sorted));
    }

    let energies = [vals[order[3]].re, vals[order[4]].re, vals[order[5]].re];

    // positive columns ascending, negative columns matched as -E1,-E2,-E3
    let mut pos: Vec<[c64; 6]> = (3..6).map(|i| col_to_array(vecs, order[i])).collect();
    let mut neg: Vec<[c64; 6]> = (0..3).rev().map(|i| col_to_array(vecs, order[i])).collect();

    for (cols, positive_norm) in [(&mut pos, true), (&mut neg, false)] {
        let es = energies;
        // degenerate clusters: tau_z Gram-Schmidt, then deterministic tie-break
        let mut start = 0;
        while start < 3 {
            let mut end = start + 1;
            while end < 3 && (es[end] - es[end - 1]).abs() < DEGENERACY_TOL {
                end += 1;
            }
            if end - start > 1 {
                for j in start..end {
                    for i in start..j {
                        let proj = tz_inner(&cols[i], &cols[j]) / tz_inner(&cols[i], &cols[i]);
                        for r in 0..6 {
                            let t = proj * cols[i][r];
                            cols[j][r] -= t;
                        }
                    }
                }
                let mut cluster: Vec<[c64; 6]> = cols[start..end].to_vec();
                cluster.sort_by(|a, b| {
                    let (ba, sa) = tie_break_key(a);
                    let (bb, sb) = tie_break_key(b);
                    bb.partial_cmp(&ba).unwrap().then(sb.partial_cmp(&sa).unwrap())
                });
                cols[start..end].copy_from_slice(&cluster);
            }
            start = end;
        }
        for col in cols.iter_mut() {
            let n = tz_inner(col, col).re;
            let good = if positive_norm { n > 1e-10 } else { n < -1e-10 };
            if !good {
                return Ok(unstable(&spectrum_sorted));
            }
            let s = n.abs().sqrt();
            for r in 0..6 {
                col[r] /= s;
            }
        }
    }

    let mut t = faer::Mat::from_fn(6, 6, |_, _| c64::new(0.0, 0.0));
    for (j, col) in pos.iter().chain(neg.iter()).enumerate() {
        for i in 0..6 {
            t[(i, j)] = col[i];
        }
    }

    let mut fs = [Complex64::default(); 6];
    for i in 0..3 {
        fs[i] = Complex64::new(energies[i], 0.0);
        fs[i + 3] = Complex64::new(-energies[i], 0.0);
    }

    Ok(BandSolution {
        k: m.k,
        branch: m.branch,
        energies: Some(energies),
        full_spectrum: fs,
        transform: Some(t),
        stable: true,
        max_imag,
    })
}

/// Inner radical of the resonant normal-phase spectrum:
/// `R = sqrt(|f(k)|^2 + lambda^2)` written out per geometry.
pub fn normal_radical(params: &ModelParams, k: &WaveVector) -> Result<f64> {
    if k.dim() != params.geometry.dim() {
        return Err(Error::DimensionMismatch {
            expected: params.geometry.dim(),
            got: k.dim(),
        });
    }
    let z2 = params.zeta * params.zeta;
    let l2 = params.lambda * params.lambda;
    Ok(match *k {
        WaveVector::Chain(k) => (2.0 * z2 * (1.0 + k.cos()) + l2).sqrt(),
        WaveVector::Plane(kx, ky) => {
            let g = 3.0
                + 2.0 * kx.cos()
                + 4.0 * (kx / 2.0).cos() * (3f64.sqrt() * ky / 2.0).cos();
            (z2 * g + l2).sqrt()
        }
    })
}

/// Closed-form normal-phase spectrum at resonance, `{sqrt(w^2 - 2wR), w,
/// sqrt(w^2 + 2wR)}`, continued past the boundary with the principal square
/// root.
pub fn analytic_bands_normal(params: &ModelParams, k: &WaveVector) -> Result<[Complex64; 3]> {
    let w = params.resonant_omega().ok_or(Error::NotApplicable)?;
    let r = normal_radical(params, k)?;
    let low = Complex64::new(w * w - 2.0 * w * r, 0.0).sqrt();
    let high = Complex64::new(w * w + 2.0 * w * r, 0.0).sqrt();
    Ok([low, Complex64::new(w, 0.0), high])
}

/// Frobenius norm of the anticommutator `{C, M_int}` where `M_int` is the
/// matrix with its on-site diagonal removed. Zero exactly when the off-site
/// part is chiral-symmetric.
pub fn chiral_defect(m: &BlochMatrix) -> f64 {
    let mi = m.interaction_part();
    let mut acc = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            let a = (CHIRAL[i] + CHIRAL[j]) * mi[(i, j)];
            acc += a.norm_sqr();
        }
    }
    acc.sqrt()
}

/// Ground-state pair expectations `<psi_i(k) psi_j(-k)>` of the Bogoliubov
/// vacuum, indexed by mode (0 = cavity A, 1 = cavity B, 2 = spin). In the
/// superradiant branch these are displaced-frame correlators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairingSet {
    pub matrix: [[Complex64; 3]; 3],
    pub branch: PhaseBranch,
}

impl PairingSet {
    pub fn pair(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[i][j]
    }

    /// `<a_A(k) b(-k)>` (normal) or its displaced-frame analogue.
    pub fn a_spin(&self) -> Complex64 {
        self.matrix[0][2]
    }

    /// `<b(k) b(-k)>` spin-spin pairing.
    pub fn spin_spin(&self) -> Complex64 {
        self.matrix[2][2]
    }

    /// `<a_A(k) a_B(-k)>` cavity-cavity pairing.
    pub fn a_b(&self) -> Complex64 {
        self.matrix[0][1]
    }

    /// The six distinct pair expectations keyed by (mode, mode), i <= j.
    pub fn pairs(&self) -> [((usize, usize), Complex64); 6] {
        let mut out = [((0, 0), Complex64::default()); 6];
        let mut n = 0;
        for i in 0..3 {
            for j in i..3 {
                out[n] = ((i, j), self.matrix[i][j]);
                n += 1;
            }
        }
        out
    }
}

/// Vacuum pairing correlators from the anomalous block of the transform:
/// with `T = [[U, .],[V, .]]`, `<a_i(k) a_j(-k)> = (U V^+)_{ij}`.
pub fn pairing_correlators(sol: &BandSolution) -> Result<PairingSet> {
    let t = sol.transform.as_ref().ok_or(Error::UnstableSolution)?;
    if !sol.stable {
        return Err(Error::UnstableSolution);
    }
    let mut p = [[Complex64::default(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = c64::new(0.0, 0.0);
            for m in 0..3 {
                s += t[(i, m)] * t[(3 + j, m)].conj();
            }
            p[i][j] = Complex64::new(s.re, s.im);
        }
    }
    Ok(PairingSet {
        matrix: p,
        branch: sol.branch,
    })
}
