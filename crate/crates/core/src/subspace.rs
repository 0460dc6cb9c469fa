//! Subspaces of `K^d` in canonical form, with orthocomplement, meet, join and
//! the Born projection value.
//!
//! A subspace is stored as the reduced row-echelon form of a matrix whose rows
//! span it (equivalently, the reduced column-echelon form of the basis
//! matrix). Pivots are normalized to one, so two subspaces are equal as sets
//! iff their stored bases are identical. No square roots are ever taken:
//! projectors use the Gram-matrix formula `P = V (V*V)^-1 V*` on an
//! unnormalized basis.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, ExactComplex, Scalar};

/// Reduces `rows` in place to reduced row-echelon form, dropping zero rows.
/// Returns the pivot columns.
pub(crate) fn rref<T: Scalar>(rows: &mut Vec<Vec<T>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for (r, row) in rows.iter().enumerate().skip(top) {
            if row[col].is_negligible() {
                continue;
            }
            let w = row[col].pivot_weight();
            if best.map_or(true, |(_, bw)| w > bw) {
                best = Some((r, w));
            }
        }
        let Some((p, _)) = best else { continue };
        rows.swap(top, p);

        let inv = T::one() / rows[top][col].clone();
        for x in rows[top].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        rows[top][col] = T::one();

        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || row[col].is_negligible() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
            row[col] = T::zero();
        }
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    // Flush round-off so canonical forms compare cleanly.
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            if x.is_negligible() {
                *x = T::zero();
            }
        }
    }
    pivots
}

/// Basis of `{x : row · x = 0 for every row}`.
pub(crate) fn null_space<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); ncols];
        v[free] = T::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves the square system `a x = b` by Gauss-Jordan elimination.
/// Returns `None` when `a` is singular.
pub(crate) fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, n + 1);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// `⟨u, v⟩ = Σ conj(u_i) v_i`.
pub fn inner<T: Scalar>(u: &[T], v: &[T]) -> T {
    u.iter()
        .zip(v)
        .fold(T::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        Subspace { ambient, basis }
    }

    /// Span of the given vectors (which may be dependent).
    pub fn span(ambient: usize, vectors: &[Vec<T>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    left: ambient,
                    right: v.len(),
                });
            }
        }
        let mut rows = vectors.to_vec();
        rref(&mut rows, ambient);
        Ok(Subspace {
            ambient,
            basis: rows,
        })
    }

    /// The one-dimensional subspace spanned by a nonzero vector.
    pub fn line(v: &[T]) -> Result<Self> {
        if v.iter().all(Scalar::is_negligible) {
            return Err(Error::ZeroVector(None));
        }
        Self::span(v.len(), &[v.to_vec()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis: reduced echelon rows with unit pivots.
    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn ortho(&self) -> Self {
        let constraints: Vec<Vec<T>> = self
            .basis
            .iter()
            .map(|v| v.iter().map(Scalar::conj).collect())
            .collect();
        let ns = null_space(&constraints, self.ambient);
        let mut rows = ns;
        rref(&mut rows, self.ambient);
        Subspace {
            ambient: self.ambient,
            basis: rows,
        }
    }

    /// Intersection: the null space of the stacked constraints that cut out
    /// each operand (conjugated bases of the orthocomplements).
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let constraints: Vec<Vec<T>> = self
            .ortho()
            .basis
            .iter()
            .chain(other.ortho().basis.iter())
            .map(|v| v.iter().map(Scalar::conj).collect())
            .collect();
        let mut rows = null_space(&constraints, self.ambient);
        rref(&mut rows, self.ambient);
        Ok(Subspace {
            ambient: self.ambient,
            basis: rows,
        })
    }

    /// Closed linear span of the union.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut rows: Vec<Vec<T>> = self.basis.iter().chain(&other.basis).cloned().collect();
        rref(&mut rows, self.ambient);
        Ok(Subspace {
            ambient: self.ambient,
            basis: rows,
        })
    }

    pub fn contains(&self, v: &[T]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(&mut rows, self.ambient).len() == self.basis.len()
    }

    /// Inclusion, by a rank test on the stacked bases.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        let mut rows: Vec<Vec<T>> = other.basis.iter().chain(&self.basis).cloned().collect();
        Ok(rref(&mut rows, self.ambient).len() == other.rank())
    }
}

/// Born value `⟨ψ|P_A|ψ⟩ / ⟨ψ|ψ⟩`.
pub fn born<T: Scalar>(psi: &[T], a: &Subspace<T>) -> Result<T::Real> {
    if psi.len() != a.ambient {
        return Err(Error::DimensionMismatch {
            left: a.ambient,
            right: psi.len(),
        });
    }
    let norm = inner(psi, psi).re();
    if psi.iter().all(Scalar::is_negligible) {
        return Err(Error::ZeroVector(None));
    }
    if a.rank() == 0 {
        return Ok(<T::Real as num_traits::Zero>::zero());
    }
    // w = V* ψ, G = V* V, ⟨ψ|P|ψ⟩ = w* G^-1 w.
    let w: Vec<T> = a.basis.iter().map(|v| inner(v, psi)).collect();
    let gram: Vec<Vec<T>> = a
        .basis
        .iter()
        .map(|u| a.basis.iter().map(|v| inner(u, v)).collect())
        .collect();
    let y = solve(&gram, &w).expect("canonical basis is independent");
    Ok(inner(&w, &y).re() / norm)
}

impl fmt::Display for Subspace<ExactComplex> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "0");
        }
        write!(f, "span{{")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", crate::scalar::VecDisplay(v))?;
        }
        write!(f, "}}")
    }
}

impl Subspace<ExactComplex> {
    /// Basis rendered as scalar-literal strings, the form used in spec files.
    pub fn to_literals(&self) -> Vec<Vec<String>> {
        self.basis
            .iter()
            .map(|v| v.iter().map(format_scalar).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cint, ivec, rational, ExactComplex};
    use num_complex::Complex64;

    type S = Subspace<ExactComplex>;

    fn line(v: &[i64]) -> S {
        S::line(&ivec(v)).unwrap()
    }

    #[test]
    fn ortho_of_basis_line() {
        assert_eq!(line(&[1, 0]).ortho(), line(&[0, 1]));
    }

    #[test]
    fn ortho_is_involutive() {
        let a = line(&[1, 1]);
        assert_eq!(a.ortho().ortho(), a);
        assert_eq!(a.ortho(), line(&[1, -1]));
    }

    #[test]
    fn ortho_of_complex_line() {
        // Conjugate orthogonality: ⟨(1,i),(1,-i)⟩ = 1·1 + (-i)(-i) = 0.
        let a = S::line(&[cint(1, 0), cint(0, 1)]).unwrap();
        let expected = S::line(&[cint(1, 0), cint(0, -1)]).unwrap();
        assert_eq!(a.ortho(), expected);
        assert_eq!(a.ortho().rank(), 1);
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let a = S::span(3, &[ivec(&[1, 2, 0]), ivec(&[0, 1, 1])]).unwrap();
        let b = S::span(3, &[ivec(&[1, 3, 1]), ivec(&[2, 3, -1])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn meet_join_of_lines() {
        let x = line(&[1, 0]);
        let y = line(&[0, 1]);
        let d = line(&[1, 1]);
        assert_eq!(x.meet(&y).unwrap(), S::zero(2));
        assert_eq!(x.join(&d).unwrap(), S::full(2));
        assert_eq!(x.meet(&d).unwrap(), S::zero(2));
    }

    #[test]
    fn absorption_on_nested_pair() {
        let a = line(&[1, 0, 0]);
        let b = S::span(3, &[ivec(&[1, 0, 0]), ivec(&[0, 1, 0])]).unwrap();
        assert_eq!(a.meet(&b).unwrap(), a);
        assert_eq!(a.join(&b).unwrap(), b);
        assert!(a.leq(&b).unwrap());
        assert!(!b.leq(&a).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = line(&[1, 0]).meet(&line(&[1, 0, 0])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn zero_vector_line_is_rejected() {
        assert!(matches!(S::line(&ivec(&[0, 0])), Err(Error::ZeroVector(_))));
    }

    #[test]
    fn born_values() {
        let x = line(&[1, 0]);
        assert_eq!(born(&ivec(&[1, 0]), &x).unwrap(), rational(1, 1));
        assert_eq!(born(&ivec(&[1, 1]), &x).unwrap(), rational(1, 2));
        assert_eq!(born(&ivec(&[1, 0]), &line(&[0, 1])).unwrap(), rational(0, 1));
        assert!(matches!(born(&ivec(&[0, 0]), &x), Err(Error::ZeroVector(_))));
    }

    #[test]
    fn float_instance_agrees_on_small_case() {
        let a = Subspace::<Complex64>::span(
            3,
            &[
                vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
            ],
        )
        .unwrap();
        let psi = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)];
        let exact = Subspace::<ExactComplex>::span(
            3,
            &[ivec(&[1, 1, 0]), vec![cint(0, 0), cint(0, 1), cint(1, 0)]],
        )
        .unwrap();
        let pe = born(&ivec(&[1, 0, 2]), &exact).unwrap();
        let pf = born(&psi, &a).unwrap();
        use num_traits::ToPrimitive;
        assert!((pe.to_f64().unwrap() - pf).abs() < 1e-12);
        assert_eq!(a.ortho().rank(), 1);
    }
}
