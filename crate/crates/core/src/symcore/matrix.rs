//! Small dense complex matrices.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

/// Dense row-major complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    m: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            data: vec![C64::new(0.0, 0.0); m * m],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut a = Self::zeros(m);
        for i in 0..m {
            a[(i, i)] = C64::new(1.0, 0.0);
        }
        a
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let m = rows.len();
        let mut data = Vec::with_capacity(m * m);
        for r in rows {
            assert_eq!(r.len(), m, "matrix must be square");
            data.extend_from_slice(r);
        }
        Self { m, data }
    }

    pub fn from_vec(m: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), m * m, "matrix must be m x m");
        Self { m, data }
    }

    /// Rank-one outer product `v v*`.
    pub fn outer(v: &[C64]) -> Self {
        let m = v.len();
        let mut a = Self::zeros(m);
        for i in 0..m {
            for j in 0..m {
                a[(i, j)] = v[i] * v[j].conj();
            }
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut a = Self::zeros(self.m);
        for i in 0..self.m {
            for j in 0..self.m {
                a[(i, j)] = self[(j, i)].conj();
            }
        }
        a
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            m: self.m,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.m).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.m {
            for j in i..self.m {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.m + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.m + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        let m = self.m;
        assert_eq!(m, rhs.m);
        let mut out = CMatrix::zeros(m);
        for i in 0..m {
            for k in 0..m {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..m {
                    out.data[i * m + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.m, rhs.m);
        CMatrix {
            m: self.m,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.m, rhs.m);
        CMatrix {
            m: self.m,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// An `m x m` matrix, `2 <= m <= 8`, intended to be Hermitian.
///
/// [`HermitianMatrix::new`] symmetrizes its input; [`HermitianMatrix::raw`]
/// keeps the entries as given so that symbol validation can measure how far
/// an evaluator is from Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Symmetrizing constructor: stores `(A + A*) / 2`.
    pub fn new(a: CMatrix) -> Result<Self> {
        check_dim(a.dim())?;
        let sym = (&a + &a.adjoint()).scale(C64::new(0.5, 0.0));
        Ok(Self(sym))
    }

    /// Keeps the entries verbatim.
    pub fn raw(a: CMatrix) -> Result<Self> {
        check_dim(a.dim())?;
        Ok(Self(a))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.0.hermitian_defect()
    }

    /// Hermitian part `(A + A*) / 2`.
    pub fn symmetrized(&self) -> Self {
        let a = &self.0;
        Self((a + &a.adjoint()).scale(C64::new(0.5, 0.0)))
    }

    /// `U A U*`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self(&(u * &self.0) * &u.adjoint())
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;
    fn index(&self, ij: (usize, usize)) -> &C64 {
        &self.0[ij]
    }
}

fn check_dim(m: usize) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "matrix dimension {m} outside {MIN_DIM}..={MAX_DIM}"
        )));
    }
    Ok(())
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `<a|b> = sum conj(a_i) b_i`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
