use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_register, StateVector};
use crate::{Error, Result};

/// Dense `2^N × 2^N` complex matrix, row-major.
///
/// Used both for Hamiltonians (Hermitian, energy units) and for gates and
/// propagators (unitary). The arithmetic operators panic on dimension
/// mismatch; [`Operator::apply`] reports it as an error instead.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Operator {
    n_qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl Operator {
    pub fn zeros(n_qubits: usize) -> Result<Self> {
        let dim = check_register(n_qubits)?;
        Ok(Self {
            n_qubits,
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        let mut op = Self::zeros(n_qubits)?;
        for i in 0..op.dim {
            op.data[i * op.dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(op)
    }

    pub fn from_vec(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        let dim = check_register(n_qubits)?;
        if data.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self {
            n_qubits,
            dim,
            data,
        })
    }

    pub fn from_rows(n_qubits: usize, rows: &[Vec<Complex64>]) -> Result<Self> {
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        let op = Self::from_vec(n_qubits, data)?;
        if rows.len() != op.dim {
            return Err(Error::Dimension {
                expected: op.dim,
                found: rows.len(),
            });
        }
        Ok(op)
    }

    /// Diagonal operator from its diagonal entries.
    pub fn diagonal(n_qubits: usize, diag: &[Complex64]) -> Result<Self> {
        let mut op = Self::zeros(n_qubits)?;
        if diag.len() != op.dim {
            return Err(Error::Dimension {
                expected: op.dim,
                found: diag.len(),
            });
        }
        for (i, &d) in diag.iter().enumerate() {
            op.data[i * op.dim + i] = d;
        }
        Ok(op)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[r * self.dim + c] = self.data[c * self.dim + r].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `self · other − other · self`
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the more significant qubits.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let n_qubits = self.n_qubits + other.n_qubits;
        let mut out = Self::zeros(n_qubits)?;
        let (da, db) = (self.dim, other.dim);
        for ra in 0..da {
            for ca in 0..da {
                let a = self.get(ra, ca);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        out.set(ra * db + rb, ca * db + cb, a * other.get(rb, cb));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix–vector product. The result carries no norm guarantee.
    pub fn apply(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        self.apply_slice(psi.amplitudes())
    }

    pub fn apply_slice(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        matvec(&self.data, v, &mut out);
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance `max |A_ij − B_ij|`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm distance after aligning the global phase of `other` to `self`.
    ///
    /// The phase is `arg tr(other† · self)`, which is optimal in Frobenius norm.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let overlap: Complex64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| b.conj() * a)
            .sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |H − H†|` entrywise.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// `max |U†U − I|` entrywise.
    pub fn unitarity_error(&self) -> f64 {
        let prod = &self.adjoint() * self;
        let id = Self::identity(self.n_qubits).expect("valid register");
        prod.distance(&id)
    }

    /// True when every off-diagonal entry is at most `tol` in modulus.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.get(r, c).norm() <= tol))
    }
}

/// `out = m · v` for a row-major square matrix.
#[inline]
pub(crate) fn matvec(m: &[Complex64], v: &[Complex64], out: &mut [Complex64]) {
    let dim = v.len();
    for (r, o) in out.iter_mut().enumerate() {
        let row = &m[r * dim..(r + 1) * dim];
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    out[r * d + c] += a * rhs.data[k * d + c];
                }
            }
        }
        Operator {
            n_qubits: self.n_qubits,
            dim: d,
            data: out,
        }
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let mut out = self.clone();
        out.data
            .iter_mut()
            .zip(&rhs.data)
            .for_each(|(a, b)| *a += b);
        out
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let mut out = self.clone();
        out.data
            .iter_mut()
            .zip(&rhs.data)
            .for_each(|(a, b)| *a -= b);
        out
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({} qubits) [", self.n_qubits)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_product() {
        let id = Operator::identity(2).unwrap();
        let mut m = Operator::zeros(2).unwrap();
        m.set(0, 3, c(1.0, 2.0));
        m.set(2, 1, c(-0.5, 0.0));
        assert_eq!(&id * &m, m);
        assert_eq!(&m * &id, m);
    }

    #[test]
    fn register_limits() {
        assert!(matches!(Operator::zeros(0), Err(Error::RegisterSize(0))));
        assert!(matches!(Operator::zeros(5), Err(Error::RegisterSize(5))));
        assert_eq!(Operator::zeros(4).unwrap().dim(), 16);
    }

    #[test]
    fn phase_alignment_ignores_global_phase() {
        let mut m = Operator::identity(1).unwrap();
        m.set(1, 1, c(0.0, 1.0));
        let rotated = m.scale(Complex64::from_polar(1.0, 0.7));
        assert!(m.distance(&rotated) > 0.5);
        assert!(m.distance_up_to_phase(&rotated) < 1e-15);
    }

    #[test]
    fn apply_checks_dimension() {
        let id = Operator::identity(2).unwrap();
        let err = id.apply_slice(&[c(1.0, 0.0); 2]).unwrap_err();
        assert!(matches!(
            err,
            Error::Dimension {
                expected: 4,
                found: 2
            }
        ));
    }
}
