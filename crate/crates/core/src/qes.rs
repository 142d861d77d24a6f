//! sl(2) algebraization: generator matrices on the polynomial module of
//! dimension `2j + 1`, the finite algebraic blocks of the quartic and
//! barrier-sextic families, physical energies, and wavefunction
//! reconstruction from block eigenvectors.
//!
//! The invariant subspace is polynomials of degree at most `2j`; that bound is
//! forced by closure of the raising generator on the top monomial.

use crate::algebra::{HalfInt, ShiftedPolynomial};
use crate::eigen::{self, DenseMatrix, EigenError};
use crate::potentials::{self, PotentialSpec, SexticBarrierParams};
use num_complex::Complex64;

/// Largest supported spin label.
pub const J_CAP: u32 = 16;

/// Which variable the polynomial module lives in.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BlockVariable {
    /// `t = x_eps` (quartic family).
    Shifted,
    /// `t = z = x_eps^2` (sextic family).
    ShiftedSquared,
}

/// Matrices of the sl(2) generators on the monomial basis `{1, t, ..., t^{2j}}`:
/// `J^- = d/dt`, `J^+ = t^2 d/dt - 2j t`, `J^0 = t d/dt - j`.
#[derive(Clone, Debug)]
pub struct Sl2Rep {
    pub j: HalfInt,
    pub variable: BlockVariable,
    pub j_minus: DenseMatrix,
    pub j_zero: DenseMatrix,
    pub j_plus: DenseMatrix,
}

/// Builds the generator matrices. Entries are exact half-integers, so the
/// commutation relations hold with exact floating-point equality.
pub fn sl2_rep(j: HalfInt, variable: BlockVariable) -> Sl2Rep {
    assert!(j.twice() <= 2 * J_CAP, "j = {j} exceeds cap {J_CAP}");
    let dim = j.dim();
    let jv = j.value();
    let two_j = j.twice() as f64;
    let mut minus = DenseMatrix::zeros(dim);
    let mut zero = DenseMatrix::zeros(dim);
    let mut plus = DenseMatrix::zeros(dim);
    for k in 0..dim {
        let kf = k as f64;
        // J^- : t^k -> k t^{k-1}
        if k >= 1 {
            minus.set(k - 1, k, Complex64::new(kf, 0.0));
        }
        // J^0 : t^k -> (k - j) t^k
        zero.set(k, k, Complex64::new(kf - jv, 0.0));
        // J^+ : t^k -> (k - 2j) t^{k+1}; vanishes on the top monomial
        if k + 1 < dim {
            plus.set(k + 1, k, Complex64::new(kf - two_j, 0.0));
        }
    }
    Sl2Rep {
        j,
        variable,
        j_minus: minus,
        j_zero: zero,
        j_plus: plus,
    }
}

/// Gauge prefactor multiplying the block polynomial.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum GaugeKind {
    /// `exp(i x_eps^3 / 3)` (quartic family).
    CubicPhase,
    /// `x_eps^{-gamma} exp(-x_eps^4/4 - a x_eps^2/2)` (barrier sextic).
    QuarticDecay { a: f64, gamma: f64 },
}

impl GaugeKind {
    /// Logarithm of the gauge factor at the complex point `z = x + i*eps`.
    pub fn log_gauge(&self, z: Complex64) -> Complex64 {
        match *self {
            GaugeKind::CubicPhase => Complex64::new(0.0, 1.0 / 3.0) * z * z * z,
            GaugeKind::QuarticDecay { a, gamma } => {
                let z2 = z * z;
                -z2 * z2 / 4.0 - (a / 2.0) * z2 - gamma * z.ln()
            }
        }
    }
}

/// Family parameters carried by a block so the associated potential can be
/// reconstructed.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum BlockFamily {
    Quartic { b: f64 },
    SexticBarrier { a: f64, gamma: f64 },
}

/// Finite algebraic block: a dense complex matrix on the polynomial module,
/// an affine map from block eigenvalues to physical energies, and the gauge
/// descriptor.
#[derive(Clone, Debug)]
pub struct QesBlock {
    pub matrix: DenseMatrix,
    pub energy_slope: f64,
    pub energy_intercept: f64,
    pub gauge: GaugeKind,
    pub variable: BlockVariable,
    pub family: BlockFamily,
    pub j: HalfInt,
}

impl QesBlock {
    /// Physical energy for a block eigenvalue.
    pub fn energy(&self, mu: Complex64) -> Complex64 {
        mu * self.energy_slope + self.energy_intercept
    }

    /// Maximum imaginary part among characteristic-polynomial coefficients;
    /// the PT structure of the families keeps this at roundoff level.
    pub fn charpoly_imag_defect(&self) -> Result<f64, EigenError> {
        let coeffs = eigen::charpoly(&self.matrix)?;
        Ok(coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max))
    }

    /// The Schrödinger potential this block algebraizes, on the line with the
    /// given shift. Blocks themselves contain no shift; spectra are
    /// eps-independent.
    pub fn potential(&self, eps: f64) -> PotentialSpec {
        match self.family {
            BlockFamily::Quartic { b } => potentials::build_qes_quartic(self.j, b, eps),
            BlockFamily::SexticBarrier { a, gamma } => potentials::build_barrier_sextic(
                &SexticBarrierParams {
                    a,
                    gamma,
                    j: self.j,
                },
                eps,
            ),
        }
    }
}

/// Block of the quartic family at `A = -(2j+1)`:
/// `-(J^-)^2 - 2i J^+ + B j` acting on polynomials in `x_eps`. The physical
/// energy is the block eigenvalue itself.
pub fn quartic_block(j: HalfInt, b: f64) -> QesBlock {
    let rep = sl2_rep(j, BlockVariable::Shifted);
    let minus_sq = rep.j_minus.matmul(&rep.j_minus);
    let matrix = minus_sq
        .scaled(Complex64::new(-1.0, 0.0))
        .add(&rep.j_plus.scaled(Complex64::new(0.0, -2.0)))
        .plus_scaled_identity(Complex64::new(b * j.value(), 0.0));
    QesBlock {
        matrix,
        energy_slope: 1.0,
        energy_intercept: 0.0,
        gauge: GaugeKind::CubicPhase,
        variable: BlockVariable::Shifted,
        family: BlockFamily::Quartic { b },
        j,
    }
}

/// Block of the barrier-sextic family:
/// `-4 J^0 J^- + 4 J^+ + (4 gamma - 2 - 4j) J^- + 4a J^0` acting on
/// polynomials in `z = x_eps^2`, with `E = mu + a - 2 a gamma + 4 a j`.
pub fn sextic_block(j: HalfInt, a: f64, gamma: f64) -> QesBlock {
    let rep = sl2_rep(j, BlockVariable::ShiftedSquared);
    let zero_minus = rep.j_zero.matmul(&rep.j_minus);
    let matrix = zero_minus
        .scaled(Complex64::new(-4.0, 0.0))
        .add(&rep.j_plus.scaled(Complex64::new(4.0, 0.0)))
        .add(
            &rep.j_minus
                .scaled(Complex64::new(4.0 * gamma - 2.0 - 4.0 * j.value(), 0.0)),
        )
        .add(&rep.j_zero.scaled(Complex64::new(4.0 * a, 0.0)));
    QesBlock {
        matrix,
        energy_slope: 1.0,
        energy_intercept: a - 2.0 * a * gamma + 4.0 * a * j.value(),
        gauge: GaugeKind::QuarticDecay { a, gamma },
        variable: BlockVariable::ShiftedSquared,
        family: BlockFamily::SexticBarrier { a, gamma },
        j,
    }
}

/// One algebraic level: physical energy, the block-eigenvector polynomial in
/// the block variable, and multiplicity bookkeeping.
#[derive(Clone, Debug)]
pub struct QesLevel {
    pub energy: Complex64,
    pub poly: ShiftedPolynomial,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    pub defective: bool,
}

/// Eigenvalue clustering tolerance used when grouping algebraic multiplicity.
const CLUSTER_TOL: f64 = 1e-8;

/// Solves the block: eigenvalues via the QR engine, physical energies via the
/// affine map, defective levels flagged by comparing algebraic and geometric
/// multiplicity. Levels are sorted by (re, im) of the energy.
pub fn solve_block(block: &QesBlock) -> Result<Vec<QesLevel>, EigenError> {
    let report = eigen::eigen_with_vectors(&block.matrix)?;
    let values = report.values;
    let vectors = report.vectors.expect("vectors requested");
    let scale = 1.0 + values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let norm = block.matrix.frobenius_norm();
    let mut used = vec![false; values.len()];
    let mut levels = Vec::new();
    for i in 0..values.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![i];
        for k in i + 1..values.len() {
            if !used[k] && (values[k] - values[i]).norm() <= CLUSTER_TOL * scale {
                used[k] = true;
                members.push(k);
            }
        }
        used[i] = true;
        let mean = members.iter().map(|&k| values[k]).sum::<Complex64>() / members.len() as f64;
        let algebraic = members.len();
        let geometric = eigen::geometric_multiplicity(&block.matrix, mean, norm).max(1);
        let coeffs = vectors[members[0]].clone();
        let poly = canonical_eigenpoly(coeffs);
        levels.push(QesLevel {
            energy: block.energy(mean),
            poly,
            algebraic_multiplicity: algebraic,
            geometric_multiplicity: geometric,
            defective: geometric < algebraic,
        });
    }
    levels.sort_by(|a, b| {
        a.energy
            .re
            .partial_cmp(&b.energy.re)
            .unwrap()
            .then(a.energy.im.partial_cmp(&b.energy.im).unwrap())
    });
    Ok(levels)
}

/// Scales an eigenvector so its largest coefficient is exactly 1.
fn canonical_eigenpoly(mut coeffs: Vec<Complex64>) -> ShiftedPolynomial {
    let (idx, _) = coeffs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .expect("nonzero vector");
    let pivot = coeffs[idx];
    for c in &mut coeffs {
        *c /= pivot;
    }
    // the coefficients live in the abstract block variable; the contour shift
    // is chosen at sampling time
    ShiftedPolynomial::new(coeffs, 0.0).expect("finite eigenvector")
}

/// Maximum distance from the multiset of energies to its conjugate multiset
/// (zero for a PT-paired spectrum).
pub fn pt_pairing_defect(values: &[Complex64]) -> f64 {
    let conj: Vec<Complex64> = values.iter().map(|v| v.conj()).collect();
    if values.is_empty() {
        return 0.0;
    }
    eigen::multiset_distance(values, &conj)
}

/// Samples the physical wavefunction `Psi(x) = P(t(x_eps)) * gauge(x_eps)` on
/// the given grid with the given contour shift, normalized to unit discrete
/// L2 norm.
///
/// The quartic gauge needs `eps > 0` for normalizability, as do barrier
/// blocks (gamma != 0); the energies themselves are eps-independent.
pub fn qes_wavefunction(
    level: &QesLevel,
    block: &QesBlock,
    xs: &[f64],
    eps: f64,
) -> Vec<Complex64> {
    match block.gauge {
        GaugeKind::CubicPhase => assert!(eps > 0.0, "quartic gauge needs eps > 0"),
        GaugeKind::QuarticDecay { gamma, .. } => {
            assert!(gamma == 0.0 || eps > 0.0, "barrier gauge needs eps > 0")
        }
    }
    let mut psi: Vec<Complex64> = xs
        .iter()
        .map(|&x| {
            let z = Complex64::new(x, eps);
            let t = match block.variable {
                BlockVariable::Shifted => z,
                BlockVariable::ShiftedSquared => z * z,
            };
            level.poly.eval(t) * block.gauge.log_gauge(z).exp()
        })
        .collect();
    let h = if xs.len() >= 2 { xs[1] - xs[0] } else { 1.0 };
    let norm = (psi.iter().map(|p| p.norm_sqr()).sum::<f64>() * h).sqrt();
    if norm > 0.0 {
        for p in &mut psi {
            *p /= norm;
        }
    }
    psi
}
