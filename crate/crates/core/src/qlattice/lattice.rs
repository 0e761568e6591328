use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::linalg;
use super::Rat;
use crate::error::{Error, Result};

/// Coefficients of a numerical divisor class in the basis of some lattice.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassVector(pub Vec<Rat>);

impl ClassVector {
    pub fn zero(rank: usize) -> Self {
        ClassVector(vec![Rat::zero(); rank])
    }

    /// The `index`-th basis vector.
    pub fn basis(rank: usize, index: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[index] = Rat::one();
        v
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        ClassVector(coeffs.iter().map(|&c| Rat::int(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        ClassVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: &Rat, other: &ClassVector) -> Self {
        assert_eq!(self.len(), other.len(), "class vector length mismatch");
        ClassVector(self.0.iter().zip(&other.0).map(|(a, b)| a + &(k * b)).collect())
    }
}

impl fmt::Debug for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Add for &ClassVector {
    type Output = ClassVector;
    fn add(self, rhs: &ClassVector) -> ClassVector {
        self.add_scaled(&Rat::one(), rhs)
    }
}

impl Sub for &ClassVector {
    type Output = ClassVector;
    fn sub(self, rhs: &ClassVector) -> ClassVector {
        self.add_scaled(&Rat::int(-1), rhs)
    }
}

impl Neg for &ClassVector {
    type Output = ClassVector;
    fn neg(self) -> ClassVector {
        self.scale(&Rat::int(-1))
    }
}

/// A free lattice of divisor classes with a symmetric intersection pairing
/// and a distinguished canonical class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    basis_names: Vec<String>,
    gram: Vec<Vec<Rat>>,
    canonical: ClassVector,
    chi_structure_sheaf: Rat,
}

impl IntersectionLattice {
    pub fn new(
        basis_names: Vec<String>,
        gram: Vec<Vec<Rat>>,
        canonical: ClassVector,
        chi_structure_sheaf: Rat,
    ) -> Result<Self> {
        let n = basis_names.len();
        if gram.len() != n {
            return Err(Error::RankMismatch {
                expected: n,
                found: gram.len(),
            });
        }
        for row in &gram {
            if row.len() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidParameters(format!(
                        "gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if canonical.len() != n {
            return Err(Error::RankMismatch {
                expected: n,
                found: canonical.len(),
            });
        }
        Ok(IntersectionLattice {
            basis_names,
            gram,
            canonical,
            chi_structure_sheaf,
        })
    }

    /// The lattice `<1> ⊕ <-1>^k` with the given canonical class.
    pub fn diagonal(basis_names: Vec<String>, squares: &[i64], canonical: ClassVector) -> Result<Self> {
        let n = squares.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rat::int(squares[i]) } else { Rat::zero() })
                    .collect()
            })
            .collect();
        Self::new(basis_names, gram, canonical, Rat::one())
    }

    pub fn rank(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn gram(&self) -> &[Vec<Rat>] {
        &self.gram
    }

    pub fn canonical(&self) -> &ClassVector {
        &self.canonical
    }

    pub fn chi_structure_sheaf(&self) -> &Rat {
        &self.chi_structure_sheaf
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    fn check(&self, v: &ClassVector) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `vᵀ · gram · w`.
    pub fn intersect(&self, v: &ClassVector, w: &ClassVector) -> Result<Rat> {
        self.check(v)?;
        self.check(w)?;
        let mut total = Rat::zero();
        for (i, vi) in v.0.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, wj) in w.0.iter().enumerate() {
                if wj.is_zero() || self.gram[i][j].is_zero() {
                    continue;
                }
                total += &(&(vi * wj) * &self.gram[i][j]);
            }
        }
        Ok(total)
    }

    pub fn square(&self, v: &ClassVector) -> Result<Rat> {
        self.intersect(v, v)
    }

    /// Gram matrix of the pairing restricted to `subset`.
    pub fn restricted_gram(&self, subset: &[ClassVector]) -> Result<Vec<Vec<Rat>>> {
        subset
            .iter()
            .map(|v| subset.iter().map(|w| self.intersect(v, w)).collect())
            .collect()
    }

    fn check_independent(&self, subset: &[ClassVector]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        for v in subset {
            self.check(v)?;
        }
        let rows: Vec<Vec<Rat>> = subset.iter().map(|v| v.0.clone()).collect();
        let rank = linalg::rank(&rows);
        if rank < subset.len() {
            return Err(Error::DependentSubset {
                rank,
                len: subset.len(),
            });
        }
        Ok(())
    }

    /// Whether the pairing restricted to the span of `subset` is negative
    /// definite: the leading principal minors alternate in sign starting
    /// negative.
    pub fn is_negative_definite(&self, subset: &[ClassVector]) -> Result<bool> {
        self.check_independent(subset)?;
        let gram = self.restricted_gram(subset)?;
        let minors = linalg::leading_minors(&gram);
        Ok(minors
            .iter()
            .enumerate()
            .all(|(k, m)| if k % 2 == 0 { m.is_negative() } else { m.is_positive() }))
    }

    /// The unique `x` with `(target + Σ x_k subset_k) · subset_j = 0` for all
    /// `j`.
    pub fn solve_against(&self, subset: &[ClassVector], target: &ClassVector) -> Result<Vec<Rat>> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        self.check(target)?;
        let gram = self.restricted_gram(subset)?;
        let rhs = subset
            .iter()
            .map(|s| self.intersect(target, s).map(|x| -x))
            .collect::<Result<Vec<_>>>()?;
        linalg::solve(&gram, &rhs).ok_or(Error::SingularBlock)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2_blown_up_once() -> IntersectionLattice {
        IntersectionLattice::diagonal(vec!["H".into(), "e".into()], &[1, -1], ClassVector::from_ints(&[-3, 1])).unwrap()
    }

    #[test]
    fn intersect_rank_mismatch() {
        let l = p2_blown_up_once();
        let err = l
            .intersect(&ClassVector::from_ints(&[1]), &ClassVector::from_ints(&[1, 0]))
            .unwrap_err();
        assert_eq!(err, Error::RankMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn negative_definite_single_exceptional() {
        let l = p2_blown_up_once();
        let e = ClassVector::from_ints(&[0, 1]);
        assert!(l.is_negative_definite(std::slice::from_ref(&e)).unwrap());
        let h = ClassVector::from_ints(&[1, 0]);
        assert!(!l.is_negative_definite(std::slice::from_ref(&h)).unwrap());
        assert!(!l.is_negative_definite(&[h, e]).unwrap());
    }

    #[test]
    fn dependent_and_empty_subsets_are_reported() {
        let l = p2_blown_up_once();
        let e = ClassVector::from_ints(&[0, 1]);
        let err = l.is_negative_definite(&[e.clone(), e.scale(&Rat::int(2))]).unwrap_err();
        assert_eq!(err, Error::DependentSubset { rank: 1, len: 2 });
        assert_eq!(l.is_negative_definite(&[]).unwrap_err(), Error::EmptySubset);
    }

    #[test]
    fn singular_block_is_reported() {
        let l = p2_blown_up_once();
        // (H - e)^2 = 0.
        let f = ClassVector::from_ints(&[1, -1]);
        let err = l.solve_against(&[f], &ClassVector::from_ints(&[1, 0])).unwrap_err();
        assert_eq!(err, Error::SingularBlock);
    }

    #[test]
    fn asymmetric_gram_rejected() {
        let gram = vec![vec![Rat::int(1), Rat::int(2)], vec![Rat::int(0), Rat::int(1)]];
        assert!(
            IntersectionLattice::new(vec!["a".into(), "b".into()], gram, ClassVector::zero(2), Rat::one()).is_err()
        );
    }
}
