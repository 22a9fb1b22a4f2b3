//! Kernel/range chains, ascent and descent, the hyper-kernel and
//! hyper-range, semi-regularity, the Kato spectrum, and the generalized
//! Kato decomposition (which on H^n is the Fitting decomposition).

use serde::Serialize;

use crate::error::Error;
use crate::linalg::{QMatrix, SubspaceBasis, SubspaceRelation};
use crate::quat::Quaternion;
use crate::spectrum::pseudo_resolvent;

/// Containment tolerance used when comparing chain subspaces.
pub const CHAIN_TOL: f64 = 1e-8;

/// Relative rank tolerance for chains built from a pseudo-resolvent at a
/// spectral point: there σ_min(R_q(A)) sits at roundoff level rather than
/// exactly at zero, so rank decisions must use the same margin as the
/// on-spectrum membership test, not the generic SVD threshold.
pub const KATO_REL_TOL: f64 = 1e-7;

fn power_rank_tol(rel: Option<f64>, m: &QMatrix) -> Option<f64> {
    rel.map(|r| r * m.op_norm().max(1.0))
}

/// Kernel and range chains of B together with ascent and descent. Both
/// chains stabilize by step n on H^n.
#[derive(Debug, Clone)]
pub struct ChainAnalysis {
    /// ker(B⁰) ⊆ ker(B¹) ⊆ … up to and including the stabilized step.
    pub kernels: Vec<SubspaceBasis>,
    /// ran(B⁰) ⊇ ran(B¹) ⊇ … up to and including the stabilized step.
    pub ranges: Vec<SubspaceBasis>,
    /// Least p with ker(B^p) = ker(B^{p+1}).
    pub ascent: usize,
    /// Least q with ran(B^q) = ran(B^{q+1}).
    pub descent: usize,
}

/// Computes the kernel and range chains of B until both stabilize.
/// `rel_tol` is the relative singular-value threshold for the first-step
/// rank decision (scaled by max(1, ‖B‖)) and the relative drop threshold
/// for the iterated steps; `None` uses generic defaults.
///
/// Higher powers are never formed explicitly: ran(B^{m+1}) is the image
/// of ran(B^m) under one application of B, and ker(B^m) = ran((B†)^m)^⊥
/// comes from the adjoint's range chain the same way. An SVD of B^m would
/// have to separate singular values whose ratio compounds like (‖B‖/κ₊)^m,
/// which no per-power threshold survives; one application per step keeps
/// every rank decision at the conditioning of B itself.
pub fn chain_analysis(b: &QMatrix, rel_tol: Option<f64>) -> ChainAnalysis {
    let n = b.dim();
    let drop = rel_tol.unwrap_or(1e-9);
    let tau = power_rank_tol(rel_tol, b);
    let adj = b.adjoint();
    let mut kernels = vec![SubspaceBasis::trivial(n)];
    let mut ranges = vec![SubspaceBasis::full(n)];
    let mut adj_range = SubspaceBasis::full(n);
    let (mut ascent, mut descent) = (None, None);
    for m in 1..=n + 1 {
        let (ran, adj_ran) = if m == 1 {
            (b.range_basis(tau), adj.range_basis(tau))
        } else {
            (ranges.last().unwrap().image(b, drop), adj_range.image(&adj, drop))
        };
        let ker = adj_ran.complement();
        adj_range = adj_ran;
        // stabilization requires equal dimension *and* equal subspace;
        // equal dimensions with drifting bases indicate tolerance failure
        if ascent.is_none() && ker.dim() == kernels.last().unwrap().dim() {
            assert!(
                matches!(
                    ker.compare(kernels.last().unwrap(), CHAIN_TOL),
                    Ok(SubspaceRelation::Equal)
                ),
                "kernel chain dimension stabilized without subspace equality"
            );
            ascent = Some(m - 1);
        }
        if descent.is_none() && ran.dim() == ranges.last().unwrap().dim() {
            assert!(
                matches!(
                    ran.compare(ranges.last().unwrap(), CHAIN_TOL),
                    Ok(SubspaceRelation::Equal)
                ),
                "range chain dimension stabilized without subspace equality"
            );
            descent = Some(m - 1);
        }
        kernels.push(ker);
        ranges.push(ran);
        if ascent.is_some() && descent.is_some() {
            break;
        }
    }
    ChainAnalysis {
        kernels,
        ranges,
        ascent: ascent.expect("kernel chain stabilizes within n steps"),
        descent: descent.expect("range chain stabilizes within n steps"),
    }
}

impl ChainAnalysis {
    /// The hyper-kernel N^∞(B) = ∪ ker(B^m), reached at the ascent.
    pub fn hyper_kernel(&self) -> &SubspaceBasis {
        &self.kernels[self.ascent]
    }

    /// The hyper-range B^∞ = ∩ ran(B^m), reached at the descent.
    pub fn hyper_range(&self) -> &SubspaceBasis {
        &self.ranges[self.descent]
    }

    /// Verifies monotonicity of both chains with `compare`; returns the
    /// first violation found.
    pub fn monotonicity_violation(&self) -> Option<String> {
        for w in self.kernels.windows(2) {
            match w[0].compare(&w[1], CHAIN_TOL) {
                Ok(SubspaceRelation::LeftInRight) | Ok(SubspaceRelation::Equal) => {}
                other => return Some(format!("kernel chain not increasing: {other:?}")),
            }
        }
        for w in self.ranges.windows(2) {
            match w[1].compare(&w[0], CHAIN_TOL) {
                Ok(SubspaceRelation::LeftInRight) | Ok(SubspaceRelation::Equal) => {}
                other => return Some(format!("range chain not decreasing: {other:?}")),
            }
        }
        None
    }
}

/// The algebraic core of B. On H^n it coincides with the analytic core
/// and with the hyper-range, so all three are served by one computation.
pub fn algebraic_core(b: &QMatrix, rel_tol: Option<f64>) -> SubspaceBasis {
    chain_analysis(b, rel_tol).hyper_range().clone()
}

/// B is semi-regular when ran(B) is closed (automatic here) and
/// ker(B) ⊆ B^∞.
pub fn is_semi_regular(b: &QMatrix, rel_tol: Option<f64>) -> bool {
    let ker = b.kernel_basis(power_rank_tol(rel_tol, b));
    if ker.dim() == 0 {
        return true;
    }
    let core = algebraic_core(b, rel_tol);
    core.contains(&ker, CHAIN_TOL)
}

/// q lies in the Kato spectrum σ_ka(A) iff R_q(A) fails to be
/// semi-regular. On H^n any singular R_q(A) has an eigenvector killed by
/// every power that reaches the hyper-range only if it lies there, so the
/// test reduces to the containment above.
pub fn in_kato_spectrum(a: &QMatrix, q: &Quaternion, tol: Option<f64>) -> bool {
    let rel = tol.or(Some(KATO_REL_TOL));
    !is_semi_regular(&pseudo_resolvent(a, q), rel)
}

/// Outcome of classifying B against the Kato-type hierarchy. On H^n the
/// Fitting decomposition always exists with N finite-dimensional, so
/// every non-semi-regular operator is of Kato type (and a fortiori
/// essentially semi-regular); `NotKatoType` is never produced and the
/// generalized Kato S-spectrum of a matrix is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KatoKind {
    /// Trivial GKD with N = {0}.
    SemiRegular,
    /// GKD with N finite-dimensional; subsumed by `KatoType` on H^n and
    /// never returned, kept so reports can spell out the hierarchy.
    EssentiallySemiRegular,
    /// GKD with B|_N nilpotent of the recorded order d.
    KatoType(usize),
    /// No GKD exists; impossible on H^n.
    NotKatoType,
}

/// A generalized Kato decomposition H^n = M ⊕ N with M, N invariant,
/// B|_M semi-regular (here: injective) and B|_N nilpotent of order d.
#[derive(Debug, Clone)]
pub struct GkdResult {
    pub m: SubspaceBasis,
    pub n: SubspaceBasis,
    /// Least d with (B|_N)^d = 0; zero when N = {0}.
    pub order_d: usize,
    pub kind: KatoKind,
    /// Max residual of M + N = H^n and dim(M) + dim(N) = n.
    pub direct_sum_residual: f64,
    /// Max of the invariance residuals ‖(I−P)BP‖ for M and N.
    pub invariance_residual: f64,
    /// ‖(B|_N)^d‖ relative to ‖B‖^d.
    pub nilpotency_residual: f64,
    /// Smallest singular value of B restricted to M (injectivity check).
    pub restricted_kappa: f64,
}

/// Computes the Fitting decomposition of B: M = ran(B^k), N = ker(B^k)
/// at k = ascent(B). This realises a generalized Kato decomposition on
/// H^n for every operator.
pub fn gkd(b: &QMatrix, tol: Option<f64>) -> Result<GkdResult, Error> {
    let dim = b.dim();
    let tol = tol.unwrap_or(CHAIN_TOL);
    let chains = chain_analysis(b, Some(KATO_REL_TOL));
    let k = chains.ascent;
    let m = chains.ranges[k].clone();
    let n = chains.kernels[k].clone();

    let sum = m.sum(&n);
    let dim_ok = m.dim() + n.dim() == dim && sum.dim() == dim;
    if !dim_ok {
        return Err(Error::InvalidInput(format!(
            "Fitting decomposition failed: dim M = {}, dim N = {}, dim(M+N) = {}",
            m.dim(),
            n.dim(),
            sum.dim()
        )));
    }
    let direct_sum_residual = (dim - sum.dim()) as f64;
    let invariance_residual = m.invariance_residual(b).max(n.invariance_residual(b));

    let bn = n.compress(b);
    let bnorm = b.op_norm().max(1.0);
    let mut order_d = 0;
    let mut nilpotency_residual = 0.0;
    if n.dim() > 0 {
        let mut p = QMatrix::identity(n.dim());
        for d in 1..=n.dim() {
            p = &p * &bn;
            let rel = p.op_norm() / bnorm.powi(d as i32);
            if rel <= tol {
                order_d = d;
                nilpotency_residual = rel;
                break;
            }
        }
        if order_d == 0 {
            return Err(Error::InvalidInput(
                "B restricted to N is not nilpotent within its dimension".into(),
            ));
        }
    }

    let restricted_kappa = if m.dim() == 0 {
        f64::INFINITY
    } else {
        let bm = m.compress(b);
        let (_, kappa, _) = bm.gauges();
        kappa
    };

    let kind = if n.dim() == 0 {
        KatoKind::SemiRegular
    } else {
        KatoKind::KatoType(order_d)
    };

    Ok(GkdResult {
        m,
        n,
        order_d,
        kind,
        direct_sum_residual,
        invariance_residual,
        nilpotency_residual,
        restricted_kappa,
    })
}

/// Classification of R_q(A) for a query point q: semi-regular off the
/// Kato spectrum, otherwise Kato-type or generalized Kato depending on
/// the nilpotency order. On H^n a decomposition always exists, so the
/// hierarchy is never escaped.
pub fn kato_kind(a: &QMatrix, q: &Quaternion, tol: Option<f64>) -> Result<KatoKind, Error> {
    Ok(gkd(&pseudo_resolvent(a, q), tol)?.kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::{ONE, ZERO};

    fn jordan_block(n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n);
        for k in 0..n - 1 {
            m[(k, k + 1)] = ONE;
        }
        m
    }

    #[test]
    fn chains_of_identity() {
        let ch = chain_analysis(&QMatrix::identity(3), None);
        assert_eq!(ch.ascent, 0);
        assert_eq!(ch.descent, 0);
        assert_eq!(ch.hyper_kernel().dim(), 0);
        assert_eq!(ch.hyper_range().dim(), 3);
        assert!(ch.monotonicity_violation().is_none());
    }

    #[test]
    fn chains_of_jordan_block() {
        let ch = chain_analysis(&jordan_block(3), None);
        assert_eq!(ch.ascent, 3);
        assert_eq!(ch.descent, 3);
        assert_eq!(ch.hyper_kernel().dim(), 3);
        assert_eq!(ch.hyper_range().dim(), 0);
        assert_eq!(
            ch.kernels.iter().map(|k| k.dim()).collect::<Vec<_>>()[..4],
            [0, 1, 2, 3]
        );
        assert!(ch.monotonicity_violation().is_none());
    }

    #[test]
    fn semi_regularity_cases() {
        assert!(is_semi_regular(&QMatrix::identity(2), None));
        assert!(!is_semi_regular(&jordan_block(2), None));
        // diag(0, 0): kernel = H², hyper-range = {0} → not semi-regular
        assert!(!is_semi_regular(&QMatrix::zeros(2), None));
        // 0 ⊕ invertible: ker = span(e₁), B^∞ = span(e₂) → not semi-regular
        let b = QMatrix::diagonal(&[ZERO, Quaternion::real(2.0)]);
        assert!(!is_semi_regular(&b, None));
    }

    #[test]
    fn gkd_of_jordan_block() {
        let g = gkd(&jordan_block(3), None).unwrap();
        assert_eq!(g.m.dim(), 0);
        assert_eq!(g.n.dim(), 3);
        assert_eq!(g.order_d, 3);
        assert_eq!(g.kind, KatoKind::KatoType(g.order_d));
        assert!(g.invariance_residual < 1e-10);
    }

    #[test]
    fn gkd_of_mixed_operator() {
        // 2×2 nilpotent block ⊕ invertible block
        let b = jordan_block(2).block_diag(&QMatrix::diagonal(&[Quaternion::i()]));
        let g = gkd(&b, None).unwrap();
        assert_eq!(g.m.dim(), 1);
        assert_eq!(g.n.dim(), 2);
        assert_eq!(g.order_d, 2);
        assert_eq!(g.kind, KatoKind::KatoType(g.order_d));
        assert!(g.restricted_kappa > 0.5);
        assert!(g.invariance_residual < 1e-10);
    }

    #[test]
    fn gkd_of_invertible() {
        let g = gkd(&QMatrix::identity(4), None).unwrap();
        assert_eq!(g.kind, KatoKind::SemiRegular);
        assert_eq!(g.n.dim(), 0);
        assert_eq!(g.order_d, 0);
    }

    #[test]
    fn gkd_kato_type() {
        // diag(0, 1): B|_N = 0 at order 1
        let b = QMatrix::diagonal(&[ZERO, ONE]);
        let g = gkd(&b, None).unwrap();
        assert_eq!(g.kind, KatoKind::KatoType(1));
        assert_eq!(g.order_d, 1);
    }

    #[test]
    fn kato_spectrum_on_matrices() {
        let a = QMatrix::diagonal(&[Quaternion::i(), Quaternion::real(2.0)]);
        // spectral points are Kato-spectral in finite dimension
        assert!(in_kato_spectrum(&a, &Quaternion::i(), None));
        assert!(in_kato_spectrum(&a, &Quaternion::real(2.0), None));
        assert!(!in_kato_spectrum(&a, &Quaternion::real(5.0), None));
        assert_eq!(
            kato_kind(&a, &Quaternion::real(5.0), None).unwrap(),
            KatoKind::SemiRegular
        );
    }
}
