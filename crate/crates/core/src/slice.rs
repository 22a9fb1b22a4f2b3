//! Right power series Σ φ_n qⁿ with operator coefficients acting on the
//! right, the slice derivative, the local resolvent, and local spectra
//! with their spectral subspaces.

use serde::Serialize;

use crate::error::Error;
use crate::linalg::{QMatrix, QVector, SubspaceBasis};
use crate::quat::{EigenSphere, Quaternion};
use crate::spectrum::{pseudo_resolvent, spectral_spheres};

/// A right power series Σ_{n≥0} φ_n qⁿ with vector coefficients and an
/// explicit radius of convergence (∞ for polynomials).
#[derive(Debug, Clone)]
pub struct RightPowerSeries {
    pub coefficients: Vec<QVector>,
    pub radius: f64,
}

impl RightPowerSeries {
    pub fn new(coefficients: Vec<QVector>, radius: f64) -> Result<Self, Error> {
        if coefficients.is_empty() {
            return Err(Error::InvalidInput("series needs at least one coefficient".into()));
        }
        let n = coefficients[0].len();
        if coefficients.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(
                "series coefficients must share a dimension".into(),
            ));
        }
        Ok(RightPowerSeries { coefficients, radius })
    }

    /// Evaluates by Horner's scheme adapted to right multiplication:
    /// `((φ_N q + φ_{N−1}) q + …) q + φ_0`.
    pub fn eval(&self, q: &Quaternion) -> Result<QVector, Error> {
        if q.norm() >= self.radius {
            return Err(Error::OutOfRadius { norm: q.norm(), radius: self.radius });
        }
        let mut acc = self.coefficients.last().unwrap().clone();
        for c in self.coefficients.iter().rev().skip(1) {
            acc = &acc.scale_right(*q) + c;
        }
        Ok(acc)
    }

    /// The slice derivative Σ_{n≥1} φ_n n q^{n−1}; same radius.
    pub fn slice_derivative(&self) -> RightPowerSeries {
        let n = self.coefficients[0].len();
        let coeffs: Vec<QVector> = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale_right(Quaternion::real(k as f64)))
            .collect();
        RightPowerSeries {
            coefficients: if coeffs.is_empty() { vec![QVector::zeros(n)] } else { coeffs },
            radius: self.radius,
        }
    }
}

/// Evaluates the local resolvent of A at φ in p: the vector f(p) with
/// `R_p(A) f(p) = φ`, defined away from the spectral spheres that carry
/// a component of φ. For an eigenvector with Aφ = φq this reduces to the
/// closed form `φ (q² − 2 Re(p) q + |p|²)⁻¹`. The local spectrum of φ
/// supplies the denominator guard.
pub fn local_resolvent_eval(
    a: &QMatrix,
    phi: &QVector,
    p: &Quaternion,
    tol: f64,
) -> Result<QVector, Error> {
    let local = local_spectrum(a, phi, tol)?;
    // denominator guard: p must stay away from every sphere carrying φ
    for s in &local.spheres {
        if s.distance_to(p) < tol.max(1e-10) {
            return Err(Error::DenominatorVanishes(format!(
                "p approaches the spectral sphere [{} + {}I]",
                s.re, s.im
            )));
        }
    }
    let r = pseudo_resolvent(a, p);
    r.solve(phi, None)
}

/// Local spectrum data of a vector under A.
#[derive(Debug, Clone, Serialize)]
pub struct LocalSpectrumResult {
    /// Spheres of σ_S(A) that carry a nonzero component of φ.
    pub spheres: Vec<EigenSphere>,
    /// ‖component of φ in the root subspace of each sphere‖.
    pub component_norms: Vec<f64>,
    /// Residual of reassembling φ from its root components.
    pub decomposition_residual: f64,
}

/// Root-subspace decomposition of H^n under A: for each spectral sphere
/// [q_s] the subspace N_s = ker(R_{q_s}(A)^{k_s}) at the ascent k_s.
pub fn root_decomposition(a: &QMatrix) -> Result<Vec<(EigenSphere, SubspaceBasis)>, Error> {
    let spheres = spectral_spheres(a, None)?;
    let mut out = Vec::with_capacity(spheres.len());
    for (s, _) in spheres {
        let b = pseudo_resolvent(a, &s.representative());
        let chains = crate::kato::chain_analysis(&b, Some(crate::kato::KATO_REL_TOL));
        out.push((s, chains.hyper_kernel().clone()));
    }
    Ok(out)
}

/// The local S-spectrum σ_A(φ): the spheres whose root component of φ is
/// nonzero. Aggregate root subspaces span H^n, so the decomposition is
/// solved as one linear system over the combined basis.
pub fn local_spectrum(a: &QMatrix, phi: &QVector, tol: f64) -> Result<LocalSpectrumResult, Error> {
    let n = a.dim();
    if phi.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator dimension {n}, vector length {}",
            phi.len()
        )));
    }
    let decomp = root_decomposition(a)?;
    // Solve for the coefficients of φ in the concatenated root basis.
    let all: Vec<QVector> = decomp
        .iter()
        .flat_map(|(_, basis)| basis.columns().iter().cloned())
        .collect();
    let coeffs = solve_in_basis(&all, phi)?;
    let mut spheres = Vec::new();
    let mut component_norms = Vec::new();
    let mut reassembled = QVector::zeros(n);
    let mut offset = 0;
    let scale = phi.norm().max(1.0);
    for (s, basis) in &decomp {
        let mut comp = QVector::zeros(n);
        for (j, col) in basis.columns().iter().enumerate() {
            comp = &comp + &col.scale_right(coeffs[offset + j]);
        }
        offset += basis.dim();
        let cn = comp.norm();
        reassembled = &reassembled + &comp;
        if cn > tol * scale {
            spheres.push(*s);
            component_norms.push(cn);
        }
    }
    let decomposition_residual = (&reassembled - phi).norm();
    Ok(LocalSpectrumResult { spheres, component_norms, decomposition_residual })
}

/// The local spectral subspace X_A(F) = ⊕ { N_s : [q_s] meets F }, where
/// membership of a sphere in F is delegated to the predicate.
pub fn local_spectral_subspace<F>(a: &QMatrix, mut in_f: F) -> Result<SubspaceBasis, Error>
where
    F: FnMut(&EigenSphere) -> bool,
{
    let decomp = root_decomposition(a)?;
    let mut acc = SubspaceBasis::trivial(a.dim());
    for (s, basis) in decomp {
        if in_f(&s) {
            acc = acc.sum(&basis);
        }
    }
    Ok(acc)
}

/// SVEP report for an operator on H^n. Matrices always have the
/// single-valued extension property, as does their adjoint; the report
/// records this with the witnessing argument.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SvepReport {
    pub has_svep: bool,
    pub analytic_residuum_empty: bool,
    pub reason: &'static str,
}

pub fn svep_report(_a: &QMatrix) -> SvepReport {
    SvepReport {
        has_svep: true,
        analytic_residuum_empty: true,
        reason: "the point S-spectrum of a finite-dimensional operator is a finite \
                 union of spheres, which cannot cluster anywhere off itself, so the \
                 operator has SVEP and its analytic residuum is empty",
    }
}

/// Least-squares solve for the coefficients expressing `target` in the
/// (possibly overcomplete spanning, here exact) quaternionic basis.
fn solve_in_basis(basis: &[QVector], target: &QVector) -> Result<Vec<Quaternion>, Error> {
    use nalgebra::DMatrix;
    if basis.is_empty() {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    let n2 = 2 * target.len();
    let k = basis.len();
    let mut m = DMatrix::zeros(n2, 2 * k);
    for (j, v) in basis.iter().enumerate() {
        // columns j and k+j: embeddings of v and v·j, so that right
        // quaternion coefficients become complex pairs
        let e0 = v.embed();
        let e1 = v.scale_right(Quaternion::j()).embed();
        m.set_column(j, &e0);
        m.set_column(k + j, &e1);
    }
    let rhs = target.embed();
    let svd = m.svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::InvalidInput(format!("basis solve failed: {e}")))?;
    let coeffs = (0..k)
        .map(|j| {
            let alpha = sol[j];
            let beta = sol[k + j];
            // coefficient c = alpha + beta·j as a right scalar
            Quaternion::new(alpha.re, alpha.im, beta.re, -beta.im)
        })
        .collect();
    Ok(coeffs)
}
