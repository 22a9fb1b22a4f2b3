//! Right quaternionic module H^n: vectors, right-linear operators as
//! quaternion matrices, the complex adjoint embedding, subspace
//! computations and the scalar gauges ‖A‖, κ(A), γ(A).
//!
//! Every rank decision in the crate is made on the complex embedding
//! χ(A) through a singular value decomposition with a single tolerance
//! policy (`QMatrix::default_rank_tol`), overridable per call.

use nalgebra::{Complex, DMatrix, DVector};
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::Error;
use crate::quat::{self, Quaternion};

pub type C64 = Complex<f64>;
/// The 2n×2n complex adjoint matrix χ(A).
pub type ComplexAdjoint = DMatrix<C64>;

/// Pivoted Gram–Schmidt drop threshold for candidate basis vectors.
const GS_DROP_TOL: f64 = 1e-7;

/// A vector of H^n under right scalar multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct QVector {
    pub entries: Vec<Quaternion>,
}

impl QVector {
    pub fn zeros(n: usize) -> Self {
        QVector { entries: vec![quat::ZERO; n] }
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.entries[k] = quat::ONE;
        v
    }

    pub fn from_entries(entries: Vec<Quaternion>) -> Self {
        QVector { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Right scalar action `(φq)_k = φ_k q`.
    pub fn scale_right(&self, q: Quaternion) -> Self {
        QVector { entries: self.entries.iter().map(|e| *e * q).collect() }
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sq()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// ⟨φ|ψ⟩ = Σ φ̄_k ψ_k — conjugate-linear in the first slot, right
    /// linear in the second.
    pub fn inner(&self, other: &QVector) -> Result<Quaternion, Error> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "inner product of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        let mut acc = quat::ZERO;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc += a.conj() * *b;
        }
        Ok(acc)
    }

    /// Complex embedding ι(φ) ∈ C^{2n} compatible with χ:
    /// χ(A)ι(φ) = ι(Aφ) and |ι(φ)| = ‖φ‖.
    pub fn embed(&self) -> DVector<C64> {
        let n = self.len();
        let mut v = DVector::from_element(2 * n, C64::new(0.0, 0.0));
        for (k, q) in self.entries.iter().enumerate() {
            // q = (w + xi) + (y + zi) j
            v[k] = C64::new(q.w, q.x);
            v[n + k] = C64::new(-q.y, q.z); // -conj(y + zi)
        }
        v
    }

    pub fn unembed(v: &DVector<C64>) -> Self {
        let n = v.len() / 2;
        let entries = (0..n)
            .map(|k| {
                let a = v[k];
                let b = v[n + k];
                Quaternion::new(a.re, a.im, -b.re, b.im)
            })
            .collect();
        QVector { entries }
    }
}

impl Add for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        QVector {
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        QVector {
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl Index<usize> for QVector {
    type Output = Quaternion;
    fn index(&self, i: usize) -> &Quaternion {
        &self.entries[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Quaternion {
        &mut self.entries[i]
    }
}

/// An n×n quaternion matrix acting on H^n by `(Aφ)_k = Σ_m A_{km} φ_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Quaternion>, // row-major
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix { n, entries: vec![quat::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m[(k, k)] = quat::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self, Error> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch("matrix rows must all have length n".into()));
            }
        }
        Ok(QMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(diag: &[Quaternion]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (k, q) in diag.iter().enumerate() {
            m[(k, k)] = *q;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Direct sum `A ⊕ B` on H^{n+m}.
    pub fn block_diag(&self, other: &QMatrix) -> QMatrix {
        let n = self.n + other.n;
        let mut m = QMatrix::zeros(n);
        for r in 0..self.n {
            for c in 0..self.n {
                m[(r, c)] = self[(r, c)];
            }
        }
        for r in 0..other.n {
            for c in 0..other.n {
                m[(self.n + r, self.n + c)] = other[(r, c)];
            }
        }
        m
    }

    pub fn apply(&self, v: &QVector) -> QVector {
        assert_eq!(v.len(), self.n, "vector length must match matrix dimension");
        let mut out = QVector::zeros(self.n);
        for r in 0..self.n {
            let mut acc = quat::ZERO;
            for c in 0..self.n {
                acc += self[(r, c)] * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// Conjugate transpose; the Hilbert adjoint for ⟨·|·⟩.
    pub fn adjoint(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                m[(r, c)] = self[(c, r)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        QMatrix { n: self.n, entries: self.entries.iter().map(|q| *q * s).collect() }
    }

    pub fn pow(&self, k: u32) -> QMatrix {
        let mut acc = QMatrix::identity(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The complex adjoint embedding
    /// χ(A) = [[A₁, A₂], [−Ā₂, Ā₁]] with A = A₁ + A₂ j split along L_i.
    pub fn chi(&self) -> ComplexAdjoint {
        let n = self.n;
        let mut m = DMatrix::from_element(2 * n, 2 * n, C64::new(0.0, 0.0));
        for r in 0..n {
            for c in 0..n {
                let q = self[(r, c)];
                let a1 = C64::new(q.w, q.x);
                let a2 = C64::new(q.y, q.z);
                m[(r, c)] = a1;
                m[(r, n + c)] = a2;
                m[(n + r, c)] = -a2.conj();
                m[(n + r, n + c)] = a1.conj();
            }
        }
        m
    }

    /// Inverse of `chi` on matrices of the symmetric form; only the top
    /// half of the blocks is read.
    pub fn from_chi(m: &ComplexAdjoint) -> QMatrix {
        let n = m.nrows() / 2;
        let mut out = QMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let a1 = m[(r, c)];
                let a2 = m[(r, n + c)];
                out[(r, c)] = Quaternion::new(a1.re, a1.im, a2.re, a2.im);
            }
        }
        out
    }

    /// SVD rank threshold `2n·ε·σ_max(χ(A))`.
    pub fn default_rank_tol(&self) -> f64 {
        2.0 * self.n as f64 * f64::EPSILON * self.op_norm()
    }

    fn singular_values(&self) -> Vec<f64> {
        // sorted descending by nalgebra's SVD::new
        self.chi().svd(false, false).singular_values.iter().copied().collect()
    }

    /// Operator norm, the largest singular value of χ(A).
    pub fn op_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// (‖A‖, κ(A), γ(A)); γ(A) = ∞ for the zero operator.
    pub fn gauges(&self) -> (f64, f64, f64) {
        let sv = self.singular_values();
        let norm = sv.first().copied().unwrap_or(0.0);
        let kappa = sv.last().copied().unwrap_or(0.0);
        let tau = 2.0 * self.n as f64 * f64::EPSILON * norm;
        let gamma = sv
            .iter()
            .rev()
            .find(|s| **s > tau)
            .copied()
            .unwrap_or(f64::INFINITY);
        (norm, kappa, gamma)
    }

    /// Rank over H, via paired singular values of χ(A).
    pub fn rank(&self, tol: Option<f64>) -> usize {
        let tau = tol.unwrap_or_else(|| self.default_rank_tol());
        let sv = self.singular_values();
        let below = sv.iter().filter(|s| **s <= tau).count();
        (2 * self.n - even_kernel_count(&sv, below, tau)) / 2
    }

    /// H-orthonormal basis of ker(A).
    pub fn kernel_basis(&self, tol: Option<f64>) -> SubspaceBasis {
        // ker(A) = ran(A†)^⊥, and ‖A†‖ and the singular values agree with
        // A's, so the same threshold applies. Going through the adjoint's
        // columns keeps the subspace exact; singular *vectors* of the
        // complex embedding can come back polluted when the SVD iteration
        // misconverges on a degenerate pair.
        self.adjoint().range_basis(tol).complement()
    }

    /// H-orthonormal basis of ran(A). The SVD is used only for the rank
    /// count; the basis itself comes from pivoted Gram–Schmidt over the
    /// columns of A, whose span is the range exactly.
    pub fn range_basis(&self, tol: Option<f64>) -> SubspaceBasis {
        let r = self.rank(tol);
        let candidates: Vec<QVector> = (0..self.n)
            .map(|c| QVector::from_entries((0..self.n).map(|row| self[(row, c)]).collect()))
            .collect();
        SubspaceBasis::from_candidates(self.n, candidates, r)
    }

    /// Minimum-norm φ with ‖Aφ − ψ‖ ≤ tol·‖ψ‖, through the χ pseudo-inverse.
    pub fn solve(&self, rhs: &QVector, tol: Option<f64>) -> Result<QVector, Error> {
        let tau = tol.unwrap_or_else(|| self.default_rank_tol());
        let svd = self.chi().svd(true, true);
        let sol = svd
            .solve(&rhs.embed(), tau)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        let phi = QVector::unembed(&sol.column(0).into_owned());
        let residual = (&self.apply(&phi) - rhs).norm();
        let bound = tau.max(1e-10) * rhs.norm().max(f64::EPSILON);
        if residual > bound {
            return Err(Error::NotInRange { residual, tol: bound });
        }
        Ok(phi)
    }

    /// Inverse, when κ(A) clears the rank threshold.
    pub fn try_inverse(&self) -> Option<QMatrix> {
        let (_, kappa, _) = self.gauges();
        if kappa <= self.default_rank_tol() {
            return None;
        }
        self.chi().try_inverse().map(|inv| QMatrix::from_chi(&inv))
    }

    pub fn is_invertible(&self) -> bool {
        let (_, kappa, _) = self.gauges();
        kappa > self.default_rank_tol()
    }

    /// Strict matrix-file parser: {"n": int, "entries": [[[w,x,y,z] × n] × n]}.
    pub fn from_json_str(s: &str) -> Result<QMatrix, Error> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| Error::InvalidInput("expected object".into()))?;
        let n = obj
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::InvalidInput("missing positive integer field 'n'".into()))?
            as usize;
        if n == 0 {
            return Err(Error::InvalidInput("n must be >= 1".into()));
        }
        let entries = obj
            .get("entries")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::InvalidInput("missing array field 'entries'".into()))?;
        if entries.len() != n {
            return Err(Error::InvalidInput(format!("expected {n} rows, got {}", entries.len())));
        }
        let mut rows = Vec::with_capacity(n);
        for row in entries {
            let row = row
                .as_array()
                .ok_or_else(|| Error::InvalidInput("row is not an array".into()))?;
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "ragged row: expected {n} entries, got {}",
                    row.len()
                )));
            }
            let mut qrow = Vec::with_capacity(n);
            for cell in row {
                let comps = cell
                    .as_array()
                    .ok_or_else(|| Error::InvalidInput("entry is not a 4-component array".into()))?;
                if comps.len() != 4 {
                    return Err(Error::InvalidInput(format!(
                        "entry must have 4 components, got {}",
                        comps.len()
                    )));
                }
                let mut c = [0.0; 4];
                for (slot, comp) in c.iter_mut().zip(comps) {
                    let x = comp
                        .as_f64()
                        .ok_or_else(|| Error::InvalidInput("non-numeric component".into()))?;
                    if !x.is_finite() {
                        return Err(Error::InvalidInput("non-finite component".into()));
                    }
                    *slot = x;
                }
                qrow.push(Quaternion::new(c[0], c[1], c[2], c[3]));
            }
            rows.push(qrow);
        }
        QMatrix::from_rows(rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 4]>> = (0..self.n)
            .map(|r| {
                (0..self.n)
                    .map(|c| {
                        let q = self[(r, c)];
                        [q.w, q.x, q.y, q.z]
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "n": self.n, "entries": rows })
    }
}

/// Promotes an odd complex kernel count to an unambiguous even one;
/// singular values of χ come in quaternionic pairs, so an odd count means
/// one of a pair straddles the threshold.
fn even_kernel_count(sv: &[f64], below: usize, tau: f64) -> usize {
    if below % 2 == 0 {
        return below;
    }
    let idx = sv.len() - below - 1; // smallest singular value above tau
    if idx < sv.len() && sv[idx] <= 10.0 * tau.max(f64::EPSILON) {
        below + 1
    } else {
        below - 1
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.entries[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.entries[r * self.n + c]
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        QMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        QMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        QMatrix { n: self.n, entries: self.entries.iter().map(|q| -*q).collect() }
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = QMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = quat::ZERO;
                for m in 0..n {
                    acc += self[(r, m)] * rhs[(m, c)];
                }
                out[(r, c)] = acc;
            }
        }
        out
    }
}

/// How two right subspaces relate under `subspace_compare`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceRelation {
    Equal,
    LeftInRight,
    RightInLeft,
    Incomparable,
}

/// An H-orthonormal family of columns spanning a right subspace of H^n.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    ambient: usize,
    columns: Vec<QVector>,
}

impl SubspaceBasis {
    pub fn trivial(ambient: usize) -> Self {
        SubspaceBasis { ambient, columns: vec![] }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            columns: (0..ambient).map(|k| QVector::basis(ambient, k)).collect(),
        }
    }

    /// Pivoted H-Gram–Schmidt over `candidates`, stopping at `expected`
    /// columns. Panics if the candidates cannot furnish that many
    /// independent directions — that indicates a rank-tolerance failure
    /// upstream, which must not be silently absorbed.
    fn from_candidates(ambient: usize, mut candidates: Vec<QVector>, expected: usize) -> Self {
        let mut columns: Vec<QVector> = Vec::with_capacity(expected);
        while columns.len() < expected {
            // orthogonalize all remaining candidates against the chosen set
            for cand in candidates.iter_mut() {
                *cand = orthogonalize(cand, &columns);
            }
            let (best, norm) = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("candidate pool exhausted before reaching expected dimension");
            assert!(
                norm > GS_DROP_TOL,
                "subspace extraction failed: residual {norm:.3e} below drop tolerance"
            );
            let v = candidates.swap_remove(best);
            columns.push(v.scale_right(Quaternion::real(1.0 / norm)));
        }
        SubspaceBasis { ambient, columns }
    }

    /// H-orthonormalizes an arbitrary spanning family, dropping dependent
    /// vectors below `1e-7` residual (relative to unit candidates).
    pub fn from_spanning(ambient: usize, vectors: &[QVector]) -> Self {
        let mut columns: Vec<QVector> = Vec::new();
        let mut candidates: Vec<QVector> = vectors
            .iter()
            .filter(|v| v.norm() > 0.0)
            .map(|v| v.scale_right(Quaternion::real(1.0 / v.norm())))
            .collect();
        loop {
            for cand in candidates.iter_mut() {
                *cand = orthogonalize(cand, &columns);
            }
            let best = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, norm)) if norm > GS_DROP_TOL => {
                    let v = candidates.swap_remove(i);
                    columns.push(v.scale_right(Quaternion::real(1.0 / norm)));
                }
                _ => break,
            }
        }
        SubspaceBasis { ambient, columns }
    }

    /// Image of this subspace under `a`: applies `a` to the basis and
    /// H-orthonormalizes *without* pre-normalizing, dropping residuals
    /// below `rel_drop · ‖a‖`. The basis columns are unit vectors, so a
    /// genuine image direction has norm at least the restricted minimum
    /// modulus while roundoff from near-kernel inputs sits at ε·‖a‖;
    /// keeping the absolute sizes is what separates the two. Iterating
    /// this is the numerically stable way to walk a range chain (an SVD
    /// of a high power would have to resolve singular values spanning
    /// ‖A‖^m/κ^m).
    pub fn image(&self, a: &QMatrix, rel_drop: f64) -> SubspaceBasis {
        let mut candidates: Vec<QVector> = self.columns.iter().map(|c| a.apply(c)).collect();
        let thresh = rel_drop * a.op_norm();
        if thresh == 0.0 {
            return SubspaceBasis::trivial(self.ambient);
        }
        let mut columns: Vec<QVector> = Vec::new();
        loop {
            for cand in candidates.iter_mut() {
                *cand = orthogonalize(cand, &columns);
            }
            let best = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, norm)) if norm > thresh => {
                    let v = candidates.swap_remove(i);
                    columns.push(v.scale_right(Quaternion::real(1.0 / norm)));
                }
                _ => break,
            }
        }
        SubspaceBasis { ambient: self.ambient, columns }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[QVector] {
        &self.columns
    }

    /// Orthogonal projection `P v = Σ c ⟨c|v⟩`.
    pub fn project(&self, v: &QVector) -> QVector {
        let mut out = QVector::zeros(self.ambient);
        for c in &self.columns {
            let coeff = c.inner(v).expect("ambient dimensions agree");
            out = &out + &c.scale_right(coeff);
        }
        out
    }

    /// Largest residual `‖(1 − P_self) v‖` over the other basis' columns.
    pub fn containment_residual(&self, other: &SubspaceBasis) -> f64 {
        other
            .columns
            .iter()
            .map(|v| (v - &self.project(v)).norm())
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, other: &SubspaceBasis, tol: f64) -> bool {
        self.containment_residual(other) <= tol
    }

    pub fn compare(&self, other: &SubspaceBasis, tol: f64) -> Result<SubspaceRelation, Error> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("subspaces of different ambient spaces".into()));
        }
        let fwd = other.contains(self, tol);
        let bwd = self.contains(other, tol);
        Ok(match (fwd, bwd) {
            (true, true) => SubspaceRelation::Equal,
            (true, false) => SubspaceRelation::LeftInRight,
            (false, true) => SubspaceRelation::RightInLeft,
            (false, false) => SubspaceRelation::Incomparable,
        })
    }

    pub fn sum(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let mut all = self.columns.clone();
        all.extend(other.columns.iter().cloned());
        SubspaceBasis::from_spanning(self.ambient, &all)
    }

    /// Orthogonal complement, `dim U + dim U^⊥ = n`.
    pub fn complement(&self) -> SubspaceBasis {
        let candidates: Vec<QVector> = (0..self.ambient)
            .map(|k| {
                let e = QVector::basis(self.ambient, k);
                &e - &self.project(&e)
            })
            .collect();
        SubspaceBasis::from_candidates(self.ambient, candidates, self.ambient - self.dim())
    }

    pub fn intersect(&self, other: &SubspaceBasis) -> SubspaceBasis {
        self.complement().sum(&other.complement()).complement()
    }

    /// Matrix of `P_self · A · P_self` in this basis: the compression of A
    /// to the subspace (exact when the subspace is A-invariant).
    pub fn compress(&self, a: &QMatrix) -> QMatrix {
        let k = self.dim();
        let mut m = QMatrix::zeros(k);
        for (c, col) in self.columns.iter().enumerate() {
            let image = a.apply(col);
            for (r, row) in self.columns.iter().enumerate() {
                m[(r, c)] = row.inner(&image).expect("dimensions agree");
            }
        }
        m
    }

    /// Residual `max_c ‖(1−P) A c‖ / ‖A‖` of A-invariance.
    pub fn invariance_residual(&self, a: &QMatrix) -> f64 {
        let scale = a.op_norm().max(f64::EPSILON);
        self.columns
            .iter()
            .map(|c| {
                let img = a.apply(c);
                (&img - &self.project(&img)).norm()
            })
            .fold(0.0, f64::max)
            / scale
    }
}

fn orthogonalize(v: &QVector, against: &[QVector]) -> QVector {
    let mut out = v.clone();
    for c in against {
        let coeff = c.inner(&out).expect("dimensions agree");
        out = &out - &c.scale_right(coeff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::{Quaternion, ONE, ZERO};
    use approx::assert_relative_eq;

    fn nilpotent2() -> QMatrix {
        QMatrix::from_rows(vec![vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap()
    }

    #[test]
    fn chi_of_j_scalar() {
        let a = QMatrix::diagonal(&[Quaternion::j()]);
        let chi = a.chi();
        assert_eq!(chi[(0, 0)], C64::new(0.0, 0.0));
        assert_eq!(chi[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(chi[(1, 0)], C64::new(-1.0, 0.0));
        assert_eq!(chi[(1, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn chi_of_identity() {
        let a = QMatrix::identity(3);
        assert_eq!(a.chi(), DMatrix::identity(6, 6));
    }

    #[test]
    fn chi_commutes_with_vector_action() {
        let a = QMatrix::from_rows(vec![
            vec![Quaternion::new(1.0, 2.0, 0.5, -1.0), Quaternion::j()],
            vec![Quaternion::k(), Quaternion::new(0.0, -0.3, 0.2, 0.9)],
        ])
        .unwrap();
        let v = QVector::from_entries(vec![
            Quaternion::new(0.1, -0.4, 0.7, 1.3),
            Quaternion::new(-2.0, 0.5, 0.0, 0.25),
        ]);
        let lhs = a.apply(&v).embed();
        let rhs = &a.chi() * v.embed();
        assert_relative_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn adjoint_examples() {
        let a = QMatrix::diagonal(&[Quaternion::i()]);
        assert_eq!(a.adjoint(), QMatrix::diagonal(&[-Quaternion::i()]));
        let b = QMatrix::from_rows(vec![
            vec![Quaternion::new(1.0, 2.0, 3.0, 4.0), Quaternion::j()],
            vec![ZERO, Quaternion::k()],
        ])
        .unwrap();
        assert_eq!(b.adjoint().adjoint(), b);
    }

    #[test]
    fn inner_product_axioms() {
        let e1 = QVector::basis(2, 0);
        assert_eq!(e1.inner(&e1).unwrap(), ONE);
        let phi = QVector::from_entries(vec![
            Quaternion::new(0.2, 1.0, -0.5, 0.0),
            Quaternion::new(1.0, 0.0, 2.0, -1.0),
        ]);
        let psi = QVector::from_entries(vec![
            Quaternion::new(-1.0, 0.5, 0.5, 2.0),
            Quaternion::new(0.0, 1.0, 0.0, 0.3),
        ]);
        let q = Quaternion::new(0.7, -0.2, 1.1, 0.4);
        // ⟨φ|ψq⟩ = ⟨φ|ψ⟩q
        let lhs = phi.inner(&psi.scale_right(q)).unwrap();
        let rhs = phi.inner(&psi).unwrap() * q;
        assert_relative_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
        // ⟨φq|ψ⟩ = q̄⟨φ|ψ⟩
        let lhs = phi.scale_right(q).inner(&psi).unwrap();
        let rhs = q.conj() * phi.inner(&psi).unwrap();
        assert_relative_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
        // length mismatch errors
        assert!(e1.inner(&QVector::basis(3, 0)).is_err());
    }

    #[test]
    fn gauges_examples() {
        let (norm, kappa, gamma) = QMatrix::identity(3).gauges();
        assert_relative_eq!(norm, 1.0, epsilon = 1e-14);
        assert_relative_eq!(kappa, 1.0, epsilon = 1e-14);
        assert_relative_eq!(gamma, 1.0, epsilon = 1e-14);

        let (norm, kappa, gamma) = QMatrix::zeros(2).gauges();
        assert_eq!(norm, 0.0);
        assert_eq!(kappa, 0.0);
        assert_eq!(gamma, f64::INFINITY);

        let a = QMatrix::diagonal(&[Quaternion::real(2.0), ZERO]);
        let (norm, kappa, gamma) = a.gauges();
        assert_relative_eq!(norm, 2.0, epsilon = 1e-14);
        assert_relative_eq!(kappa, 0.0, epsilon = 1e-14);
        assert_relative_eq!(gamma, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn kernel_and_range() {
        let id = QMatrix::identity(3);
        assert_eq!(id.kernel_basis(None).dim(), 0);
        assert_eq!(id.range_basis(None).dim(), 3);

        let a = nilpotent2();
        let ker = a.kernel_basis(None);
        let ran = a.range_basis(None);
        assert_eq!(ker.dim(), 1);
        assert_eq!(ran.dim(), 1);
        let e1 = SubspaceBasis::from_spanning(2, &[QVector::basis(2, 0)]);
        assert_eq!(ker.compare(&e1, 1e-10).unwrap(), SubspaceRelation::Equal);
        assert_eq!(ran.compare(&e1, 1e-10).unwrap(), SubspaceRelation::Equal);

        let z = QMatrix::zeros(2);
        assert_eq!(z.kernel_basis(None).dim(), 2);
        assert_eq!(z.range_basis(None).dim(), 0);
    }

    #[test]
    fn subspace_compare_cases() {
        let e1 = SubspaceBasis::from_spanning(2, &[QVector::basis(2, 0)]);
        let e2 = SubspaceBasis::from_spanning(2, &[QVector::basis(2, 1)]);
        let full = SubspaceBasis::full(2);
        assert_eq!(e1.compare(&full, 1e-10).unwrap(), SubspaceRelation::LeftInRight);
        assert_eq!(e1.compare(&e2, 1e-10).unwrap(), SubspaceRelation::Incomparable);
        // right scalar multiples span the same right subspace
        let v = &QVector::basis(2, 0) + &QVector::basis(2, 1).scale_right(Quaternion::i());
        let u = SubspaceBasis::from_spanning(2, &[v.clone()]);
        let w = SubspaceBasis::from_spanning(2, &[v.scale_right(Quaternion::j())]);
        assert_eq!(u.compare(&w, 1e-10).unwrap(), SubspaceRelation::Equal);
        // ambient mismatch
        let e1_3 = SubspaceBasis::from_spanning(3, &[QVector::basis(3, 0)]);
        assert!(e1.compare(&e1_3, 1e-10).is_err());
    }

    #[test]
    fn subspace_combine_cases() {
        let e1 = SubspaceBasis::from_spanning(2, &[QVector::basis(2, 0)]);
        let e2 = SubspaceBasis::from_spanning(2, &[QVector::basis(2, 1)]);
        let comp = e1.complement();
        assert_eq!(comp.compare(&e2, 1e-10).unwrap(), SubspaceRelation::Equal);
        assert_eq!(e1.sum(&e2).dim(), 2);
        let a = nilpotent2();
        let inter = a.range_basis(None).intersect(&a.kernel_basis(None));
        assert_eq!(inter.compare(&e1, 1e-10).unwrap(), SubspaceRelation::Equal);
    }

    #[test]
    fn solve_cases() {
        let id = QMatrix::identity(2);
        let psi = QVector::from_entries(vec![Quaternion::new(1.0, 2.0, 3.0, 4.0), Quaternion::j()]);
        let phi = id.solve(&psi, None).unwrap();
        assert_relative_eq!((&phi - &psi).norm(), 0.0, epsilon = 1e-13);

        let a = QMatrix::diagonal(&[Quaternion::real(2.0)]);
        let e1 = QVector::basis(1, 0);
        let phi = a.solve(&e1, None).unwrap();
        assert_relative_eq!(phi[0].w, 0.5, epsilon = 1e-14);

        let n = nilpotent2();
        assert!(matches!(
            n.solve(&QVector::basis(2, 1), None),
            Err(Error::NotInRange { .. })
        ));
    }

    #[test]
    fn matrix_json_roundtrip_and_validation() {
        let a = QMatrix::from_rows(vec![
            vec![Quaternion::new(1.0, 2.0, 3.0, 4.0), ZERO],
            vec![Quaternion::i(), Quaternion::k()],
        ])
        .unwrap();
        let s = a.to_json().to_string();
        let b = QMatrix::from_json_str(&s).unwrap();
        assert_eq!(a, b);

        assert!(QMatrix::from_json_str(r#"{"n":2,"entries":[[[0,0,0,0]],[[0,0,0,0],[0,0,0,0]]]}"#).is_err());
        assert!(QMatrix::from_json_str(r#"{"n":1,"entries":[[[1,0,0]]]}"#).is_err());
        assert!(QMatrix::from_json_str(r#"{"n":0,"entries":[]}"#).is_err());
        assert!(QMatrix::from_json_str(r#"{"entries":[]}"#).is_err());
    }
}
