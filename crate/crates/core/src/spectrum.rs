//! The pseudo-resolvent R_q(A), the S-spectrum as eigenspheres, the
//! spectral radius r_S and lower index i(A), and membership tests for the
//! approximate-point, surjectivity and compression S-spectra.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Error;
use crate::kato;
use crate::linalg::{C64, QMatrix, QVector};
use crate::quat::{EigenSphere, Quaternion};

/// Relative κ(R_q(A)) margin below which a point is declared on-spectrum.
pub const ON_MARGIN: f64 = 1e-7;
/// Relative margin above which a point is declared off-spectrum; between
/// the two the decision is reported as indeterminate.
pub const OFF_MARGIN: f64 = 1e-4;

/// `R_q(A) = A² − 2 Re(q) A + |q|² I`; depends on q only through
/// `(Re q, |q|)`, so it is constant on eigenspheres.
pub fn pseudo_resolvent(a: &QMatrix, q: &Quaternion) -> QMatrix {
    let n = a.dim();
    let a2 = a * a;
    let lin = a.scale(2.0 * q.re());
    let cst = QMatrix::identity(n).scale(q.norm_sq());
    &(&a2 - &lin) + &cst
}

/// Which refinement of the S-spectrum a membership query addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Approximate S-point spectrum: R_q(A) not bounded below.
    ApproximatePoint,
    /// Surjectivity S-spectrum: R_q(A) not onto.
    Surjectivity,
    /// Compression S-spectrum: ran(R_q(A)) not dense.
    Compression,
    /// Full S-spectrum: R_q(A) not invertible.
    SSpectrum,
}

/// Three-valued on/off decision with an explicit indeterminate band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    On,
    Off,
    Indeterminate,
}

/// Eigenvalues of χ(A) through a complex Schur decomposition.
pub fn chi_eigenvalues(a: &QMatrix) -> Result<Vec<C64>, Error> {
    let chi = a.chi();
    let schur = nalgebra::linalg::Schur::try_new(chi, f64::EPSILON, 0)
        .ok_or(Error::EigenFailure)?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Clusters the 2n eigenvalues of χ(A) into eigenspheres. Each sphere
/// absorbs an even number of eigenvalues (the conjugate-pair symmetry of
/// χ); multiplicity is half that count.
pub fn spectral_spheres(a: &QMatrix, tol: Option<f64>) -> Result<Vec<(EigenSphere, usize)>, Error> {
    let base_radius = tol.unwrap_or_else(|| 1e-8 * a.op_norm().max(1.0));
    let eigs = chi_eigenvalues(a)?;
    let points: Vec<(f64, f64)> = eigs.iter().map(|z| (z.re, z.im.abs())).collect();
    let mut radius = base_radius;
    for _ in 0..5 {
        let clusters = cluster_points(&points, radius);
        if clusters.iter().all(|c| c.count % 2 == 0) {
            let mut spheres: Vec<(EigenSphere, usize)> = clusters
                .into_iter()
                .map(|c| {
                    let im = if c.im <= radius { 0.0 } else { c.im };
                    (EigenSphere::new(c.re, im), c.count / 2)
                })
                .collect();
            spheres.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
            debug_assert_eq!(spheres.iter().map(|s| s.1).sum::<usize>(), a.dim());
            return Ok(spheres);
        }
        radius *= 10.0;
    }
    Err(Error::EigenFailure)
}

struct Cluster {
    re: f64,
    im: f64,
    count: usize,
}

fn cluster_points(points: &[(f64, f64)], radius: f64) -> Vec<Cluster> {
    let mut sorted: Vec<(f64, f64)> = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut clusters: Vec<Cluster> = Vec::new();
    for (re, im) in sorted {
        match clusters.iter_mut().find(|c| {
            let d = ((c.re - re).powi(2) + (c.im - im).powi(2)).sqrt();
            d <= radius
        }) {
            Some(c) => {
                // running centroid
                let k = c.count as f64;
                c.re = (c.re * k + re) / (k + 1.0);
                c.im = (c.im * k + im) / (k + 1.0);
                c.count += 1;
            }
            None => clusters.push(Cluster { re, im, count: 1 }),
        }
    }
    clusters
}

/// Maximum |q| over the S-spectrum.
pub fn spectral_radius(a: &QMatrix) -> Result<f64, Error> {
    Ok(spectral_spheres(a, None)?
        .iter()
        .map(|(s, _)| s.radius())
        .fold(0.0, f64::max))
}

/// The lower index i(A): zero when A is singular, 1/r_S(A⁻¹) otherwise.
pub fn lower_index(a: &QMatrix) -> Result<f64, Error> {
    match a.try_inverse() {
        None => Ok(0.0),
        Some(inv) => {
            let r = spectral_radius(&inv)?;
            Ok(1.0 / r)
        }
    }
}

/// Membership of q in the chosen refinement, decided at absolute
/// threshold `tol · max(1, ‖R_q(A)‖)`. Each kind uses its defining
/// criterion rather than a shared invertibility test.
pub fn membership(a: &QMatrix, q: &Quaternion, kind: SpectrumKind, tol: f64) -> bool {
    let r = pseudo_resolvent(a, q);
    let scale = r.op_norm().max(1.0);
    let tau = tol * scale;
    match kind {
        SpectrumKind::ApproximatePoint => {
            let (_, kappa, _) = r.gauges();
            kappa < tau
        }
        SpectrumKind::Surjectivity => r.range_basis(Some(tau)).dim() < a.dim(),
        SpectrumKind::Compression => {
            // ran not dense ⟺ ker(R_q(A)†) ≠ {0}
            r.adjoint().kernel_basis(Some(tau)).dim() > 0
        }
        SpectrumKind::SSpectrum => r.rank(Some(tau)) < a.dim(),
    }
}

/// Margin-aware on/off decision via κ(R_q(A)).
pub fn classify(a: &QMatrix, q: &Quaternion) -> Decision {
    let r = pseudo_resolvent(a, q);
    let scale = r.op_norm().max(1.0);
    let (_, kappa, _) = r.gauges();
    if kappa < ON_MARGIN * scale {
        Decision::On
    } else if kappa > OFF_MARGIN * scale {
        Decision::Off
    } else {
        Decision::Indeterminate
    }
}

/// Applies R_q(A)⁻¹ to φ; errors when q sits on the spectrum.
pub fn resolvent_apply(
    a: &QMatrix,
    q: &Quaternion,
    phi: &QVector,
    tol: f64,
) -> Result<QVector, Error> {
    let r = pseudo_resolvent(a, q);
    let scale = r.op_norm().max(1.0);
    let (_, kappa, _) = r.gauges();
    if kappa < tol * scale {
        return Err(Error::SpectralPoint(format!("κ(R_q(A)) = {kappa:.3e} below threshold")));
    }
    let psi = r.solve(phi, Some(1e-10 * scale))?;
    Ok(psi)
}

/// Residual of the power identity
/// `R_{qⁿ}(Aⁿ) = R_q(A) · Σ_{k=1..n} Σ_{j=1..n} q^{n−k} q̄^{n−j} A^{j+k−2}`
/// with the right-scalar convention `(sB)(φ) = B(φ)s`. The right side is
/// only real-linear, so the residual is measured over the 4n real basis
/// directions of H^n.
pub fn power_factorization_residual(a: &QMatrix, q: &Quaternion, n: u32) -> f64 {
    let dim = a.dim();
    let n_us = n as usize;
    // powers of A up to 2n, and the scalar weights
    let mut apow = Vec::with_capacity(2 * n_us + 1);
    apow.push(QMatrix::identity(dim));
    for m in 1..=2 * n_us {
        apow.push(&apow[m - 1] * a);
    }
    let an = apow[n_us].clone();
    let qn = q.powi(n);
    let lhs = pseudo_resolvent(&an, &qn);
    let rq = pseudo_resolvent(a, q);
    let qc = q.conj();

    let units = [
        Quaternion::real(1.0),
        Quaternion::i(),
        Quaternion::j(),
        Quaternion::k(),
    ];
    let mut sq_sum = 0.0;
    for m in 0..dim {
        for u in units {
            let phi = QVector::basis(dim, m).scale_right(u);
            let mut sum = QVector::zeros(dim);
            for k in 1..=n_us {
                for j in 1..=n_us {
                    let s = q.powi((n_us - k) as u32) * qc.powi((n_us - j) as u32);
                    let term = apow[j + k - 2].apply(&phi).scale_right(s);
                    sum = &sum + &term;
                }
            }
            let d = &lhs.apply(&phi) - &rq.apply(&sum);
            sq_sum += d.norm_sq();
        }
    }
    sq_sum.sqrt()
}

/// A right eigenpair `Aφ = φq` with q the canonical representative of the
/// sphere, recovered from the χ(A) eigenvector of `re + im·i`.
pub fn eigenpair(a: &QMatrix, sphere: &EigenSphere) -> Result<(QVector, Quaternion), Error> {
    let z = C64::new(sphere.re, sphere.im);
    let n2 = 2 * a.dim();
    let shifted = a.chi() - DMatrix::from_diagonal_element(n2, n2, z);
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("svd with v requested");
    let w = v_t.row(n2 - 1).adjoint().column(0).into_owned();
    let phi = QVector::unembed(&w);
    let q = Quaternion::new(sphere.re, sphere.im, 0.0, 0.0);
    let residual = (&a.apply(&phi) - &phi.scale_right(q)).norm();
    if residual > 1e-8 * a.op_norm().max(1.0) {
        return Err(Error::SpectralPoint(format!(
            "eigenpair residual {residual:.3e}; sphere may not be spectral"
        )));
    }
    Ok((phi, q))
}

/// Per-sphere entry of a spectral report.
#[derive(Debug, Clone, Serialize)]
pub struct SphereEntry {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    /// Always "point" on H^n: a non-invertible R_q(A) has nontrivial
    /// kernel, so the residual and continuous S-spectra are empty.
    pub classification: &'static str,
    pub flags: SphereFlags,
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereFlags {
    pub in_aps: bool,
    pub in_surjectivity: bool,
    pub in_compression: bool,
    pub in_kato: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Gauges {
    pub norm: f64,
    pub kappa: f64,
    /// `None` encodes γ = ∞ (the zero operator).
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub cluster_radius: f64,
    pub rank_tol: f64,
    pub on_margin: f64,
    pub off_margin: f64,
}

/// Full spectral report for a finite-dimensional operator.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub spheres: Vec<SphereEntry>,
    pub r_s: f64,
    pub lower_index: f64,
    pub gauges: Gauges,
    pub tolerances: Tolerances,
    /// Degenerate trichotomy note for matrices.
    pub note: &'static str,
}

impl SpectralReport {
    pub fn sphere_set(&self) -> Vec<EigenSphere> {
        self.spheres.iter().map(|s| EigenSphere::new(s.re, s.im)).collect()
    }
}

/// Computes the S-spectrum of A as eigenspheres with multiplicities and
/// per-sphere membership flags.
pub fn s_spectrum(a: &QMatrix, tol: Option<f64>) -> Result<SpectralReport, Error> {
    let cluster_radius = tol.unwrap_or_else(|| 1e-8 * a.op_norm().max(1.0));
    let spheres = spectral_spheres(a, Some(cluster_radius))?;
    let (norm, kappa, gamma) = a.gauges();
    let r_s = spheres.iter().map(|(s, _)| s.radius()).fold(0.0, f64::max);
    let idx = lower_index(a)?;
    let entries = spheres
        .iter()
        .map(|(s, mult)| {
            let rep = s.representative();
            SphereEntry {
                re: s.re,
                im: s.im,
                multiplicity: *mult,
                classification: "point",
                flags: SphereFlags {
                    in_aps: membership(a, &rep, SpectrumKind::ApproximatePoint, ON_MARGIN),
                    in_surjectivity: membership(a, &rep, SpectrumKind::Surjectivity, ON_MARGIN),
                    in_compression: membership(a, &rep, SpectrumKind::Compression, ON_MARGIN),
                    in_kato: kato::in_kato_spectrum(a, &rep, None),
                },
            }
        })
        .collect();
    Ok(SpectralReport {
        n: a.dim(),
        spheres: entries,
        r_s,
        lower_index: idx,
        gauges: Gauges {
            norm,
            kappa,
            gamma: if gamma.is_finite() { Some(gamma) } else { None },
        },
        tolerances: Tolerances {
            cluster_radius,
            rank_tol: a.default_rank_tol(),
            on_margin: ON_MARGIN,
            off_margin: OFF_MARGIN,
        },
        note: "finite-dimensional operator: every spectral sphere is point spectrum; \
               residual and continuous S-spectra are empty",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::{ONE, ZERO};
    use approx::assert_relative_eq;

    fn nilpotent2() -> QMatrix {
        QMatrix::from_rows(vec![vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap()
    }

    #[test]
    fn pseudo_resolvent_cases() {
        let q = Quaternion::new(0.3, 1.0, -0.4, 0.2);
        let z = QMatrix::zeros(2);
        let r = pseudo_resolvent(&z, &q);
        assert_eq!(r, QMatrix::identity(2).scale(q.norm_sq()));

        let r = pseudo_resolvent(&QMatrix::identity(2), &Quaternion::real(1.0));
        assert_relative_eq!(r.op_norm(), 0.0, epsilon = 1e-14);

        // invariance under conjugation of q
        let a = QMatrix::from_rows(vec![
            vec![Quaternion::new(1.0, 0.5, 0.0, -0.2), Quaternion::j()],
            vec![Quaternion::i(), Quaternion::new(0.0, 0.0, 2.0, 1.0)],
        ])
        .unwrap();
        assert_eq!(pseudo_resolvent(&a, &q), pseudo_resolvent(&a, &q.conj()));
    }

    #[test]
    fn spectrum_of_scalar_i() {
        let a = QMatrix::diagonal(&[Quaternion::i()]);
        let report = s_spectrum(&a, None).unwrap();
        assert_eq!(report.spheres.len(), 1);
        assert_relative_eq!(report.spheres[0].re, 0.0, epsilon = 1e-12);
        assert_relative_eq!(report.spheres[0].im, 1.0, epsilon = 1e-12);
        assert_eq!(report.spheres[0].multiplicity, 1);
        // σ_S = S: any imaginary unit belongs to the sphere
        let s = report.sphere_set()[0];
        assert!(s.contains(&Quaternion::j(), 1e-10));
    }

    #[test]
    fn spectrum_of_identity() {
        let report = s_spectrum(&QMatrix::identity(2), None).unwrap();
        assert_eq!(report.spheres.len(), 1);
        assert_relative_eq!(report.spheres[0].re, 1.0, epsilon = 1e-12);
        assert_eq!(report.spheres[0].im, 0.0);
        assert_eq!(report.spheres[0].multiplicity, 2);
    }

    #[test]
    fn spectrum_of_nilpotent() {
        let report = s_spectrum(&nilpotent2(), None).unwrap();
        assert_eq!(report.spheres.len(), 1);
        assert_relative_eq!(report.spheres[0].re, 0.0, epsilon = 1e-10);
        assert_eq!(report.spheres[0].im, 0.0);
        assert_eq!(report.spheres[0].multiplicity, 2);
        assert_relative_eq!(report.r_s, 0.0, epsilon = 1e-10);
        assert_eq!(report.lower_index, 0.0);
    }

    #[test]
    fn radius_and_index() {
        let id = QMatrix::identity(2);
        assert_relative_eq!(spectral_radius(&id).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(lower_index(&id).unwrap(), 1.0, epsilon = 1e-12);

        let a = QMatrix::diagonal(&[Quaternion::real(2.0), Quaternion::real(3.0)]);
        assert_relative_eq!(spectral_radius(&a).unwrap(), 3.0, epsilon = 1e-12);
        assert_relative_eq!(lower_index(&a).unwrap(), 2.0, epsilon = 1e-12);
        // power-sequence cross-check κ(A^n)^{1/n} → i(A)
        let a32 = a.pow(32);
        let (_, kappa, _) = a32.gauges();
        assert_relative_eq!(kappa.powf(1.0 / 32.0), 2.0, epsilon = 1e-6);
    }

    #[test]
    fn membership_cases() {
        let id = QMatrix::identity(2);
        let q2 = Quaternion::real(2.0);
        for kind in [
            SpectrumKind::ApproximatePoint,
            SpectrumKind::Surjectivity,
            SpectrumKind::Compression,
            SpectrumKind::SSpectrum,
        ] {
            assert!(!membership(&id, &q2, kind, ON_MARGIN));
            assert!(membership(&id, &Quaternion::real(1.0), kind, ON_MARGIN));
        }
        assert_eq!(classify(&id, &q2), Decision::Off);
        assert_eq!(classify(&id, &Quaternion::real(1.0)), Decision::On);
    }

    #[test]
    fn resolvent_apply_cases() {
        let phi = QVector::from_entries(vec![Quaternion::new(1.0, -0.5, 0.3, 2.0)]);
        // A = 0, q = 1: R = I
        let z = QMatrix::zeros(1);
        let psi = resolvent_apply(&z, &Quaternion::real(1.0), &phi, ON_MARGIN).unwrap();
        assert_relative_eq!((&psi - &phi).norm(), 0.0, epsilon = 1e-12);
        // A = I, q = 0: R = I
        let id = QMatrix::identity(1);
        let psi = resolvent_apply(&id, &crate::quat::ZERO, &phi, ON_MARGIN).unwrap();
        assert_relative_eq!((&psi - &phi).norm(), 0.0, epsilon = 1e-12);
        // A = diag(i), q = 2: R = (−1 − 0 + 4)I = 3I... computed numerically
        let a = QMatrix::diagonal(&[Quaternion::i()]);
        let q = Quaternion::real(2.0);
        let psi = resolvent_apply(&a, &q, &phi, ON_MARGIN).unwrap();
        let back = pseudo_resolvent(&a, &q).apply(&psi);
        assert_relative_eq!((&back - &phi).norm(), 0.0, epsilon = 1e-10);
        // spectral point rejected
        assert!(resolvent_apply(&a, &Quaternion::i(), &phi, ON_MARGIN).is_err());
    }

    #[test]
    fn power_factorization_trivial_cases() {
        let a = QMatrix::from_rows(vec![
            vec![Quaternion::new(0.2, 1.0, 0.0, 0.0), Quaternion::j()],
            vec![ZERO, Quaternion::new(-1.0, 0.0, 0.5, 0.0)],
        ])
        .unwrap();
        let q = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        // n = 1: both sides are R_q(A) exactly
        assert_eq!(power_factorization_residual(&a, &q, 1), 0.0);
        // A = 0
        let z = QMatrix::zeros(3);
        assert!(power_factorization_residual(&z, &q, 3) < 1e-12);
    }

    #[test]
    fn eigenpair_recovery() {
        let a = QMatrix::diagonal(&[Quaternion::i(), Quaternion::real(2.0)]);
        let (phi, q) = eigenpair(&a, &EigenSphere::new(0.0, 1.0)).unwrap();
        assert_relative_eq!((&a.apply(&phi) - &phi.scale_right(q)).norm(), 0.0, epsilon = 1e-10);
        let (phi, q) = eigenpair(&a, &EigenSphere::new(2.0, 0.0)).unwrap();
        assert_relative_eq!((&a.apply(&phi) - &phi.scale_right(q)).norm(), 0.0, epsilon = 1e-10);
    }
}
