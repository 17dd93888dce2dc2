//! Exact 4-component covectors and 4×4 matrices over [`GaussRational`],
//! contracted with the Minkowski metric `h = diag(-1, 1, 1, 1)`.
//!
//! Index 0 is time throughout.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{GaussRational, ParseScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("covector has non-real component {index}: {value}")]
    NonReal { index: usize, value: String },
    #[error("diagonal entry ({0},{0}) is undefined for a symmetric-off-diagonal matrix")]
    UndefinedDiagonal(usize),
    #[error("expected exactly 4 components, got {0}")]
    WrongLength(usize),
    #[error(transparent)]
    Parse(#[from] ParseScalarError),
}

/// Diagonal entries of `h` (and of `h⁻¹`, which coincides with it).
pub const MINKOWSKI_DIAG: [i64; 4] = [-1, 1, 1, 1];

#[inline]
pub fn h_sign(index: usize) -> i64 {
    MINKOWSKI_DIAG[index]
}

/// A covector `(ζ₀, ζ₁, ζ₂, ζ₃)`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Covector4(pub [GaussRational; 4]);

impl Covector4 {
    pub fn new(c: [GaussRational; 4]) -> Self {
        Self(c)
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Self(c.map(GaussRational::from_int))
    }

    /// Real covector from `(numerator, denominator)` pairs.
    pub fn from_ratios(c: [(i64, i64); 4]) -> Self {
        Self(c.map(|(n, d)| GaussRational::from_ratio(n, d)))
    }

    pub fn from_rationals(c: [BigRational; 4]) -> Self {
        Self(c.map(GaussRational::real))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Unit basis covector `e_k`.
    pub fn basis(k: usize) -> Self {
        let mut c = Self::zero();
        c.0[k] = GaussRational::one();
        c
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GaussRational::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(GaussRational::is_real)
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        Self(std::array::from_fn(|k| &self.0[k] * s))
    }

    pub fn components(&self) -> &[GaussRational; 4] {
        &self.0
    }

    /// Real parts, failing if any component carries an imaginary part.
    pub fn real_parts(&self) -> Result<[BigRational; 4], TensorError> {
        let mut out: [BigRational; 4] = Default::default();
        for (k, c) in self.0.iter().enumerate() {
            if !c.is_real() {
                return Err(TensorError::NonReal {
                    index: k,
                    value: c.to_string(),
                });
            }
            out[k] = c.re.clone();
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> [f64; 4] {
        std::array::from_fn(|k| self.0[k].to_f64_pair().0)
    }

    pub fn parse(items: &[String]) -> Result<Self, TensorError> {
        if items.len() != 4 {
            return Err(TensorError::WrongLength(items.len()));
        }
        let mut c: [GaussRational; 4] = Default::default();
        for (slot, s) in c.iter_mut().zip(items) {
            *slot = GaussRational::parse(s)?;
        }
        Ok(Self(c))
    }
}

impl Index<usize> for Covector4 {
    type Output = GaussRational;
    fn index(&self, k: usize) -> &GaussRational {
        &self.0[k]
    }
}

impl<'a> Add<&'a Covector4> for &'a Covector4 {
    type Output = Covector4;
    fn add(self, rhs: &Covector4) -> Covector4 {
        Covector4(std::array::from_fn(|k| &self.0[k] + &rhs.0[k]))
    }
}

impl<'a> Sub<&'a Covector4> for &'a Covector4 {
    type Output = Covector4;
    fn sub(self, rhs: &Covector4) -> Covector4 {
        Covector4(std::array::from_fn(|k| &self.0[k] - &rhs.0[k]))
    }
}

impl Neg for &Covector4 {
    type Output = Covector4;
    fn neg(self) -> Covector4 {
        Covector4(std::array::from_fn(|k| -&self.0[k]))
    }
}

impl fmt::Debug for Covector4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.0[0], self.0[1], self.0[2], self.0[3]
        )
    }
}

impl fmt::Display for Covector4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `h^{αβ} ξ_α η_β = −ξ₀η₀ + Σᵢ ξᵢηᵢ`.
pub fn minkowski_pairing(xi: &Covector4, eta: &Covector4) -> GaussRational {
    let mut acc = GaussRational::zero();
    for k in 0..4 {
        let term = &xi.0[k] * &eta.0[k];
        if h_sign(k) < 0 {
            acc -= &term;
        } else {
            acc += &term;
        }
    }
    acc
}

/// Nonzero, real, null, with positive time component.
pub fn is_lightlike_future(xi: &Covector4) -> Result<bool, TensorError> {
    let re = xi.real_parts()?;
    Ok(is_lightlike(xi) && re[0] > BigRational::from_integer(0.into()))
}

/// Nonzero and null (no time orientation requirement).
pub fn is_lightlike(xi: &Covector4) -> bool {
    !xi.is_zero() && minkowski_pairing(xi, xi).is_zero()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    General,
    Antisymmetric,
    Symmetric,
    /// Symmetric with undefined diagonal.
    SymmetricOffDiagonal,
}

/// 4×4 matrix of exact scalars with a structural kind tag.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Matrix4 {
    entries: [[GaussRational; 4]; 4],
    kind: MatrixKind,
}

impl Matrix4 {
    pub fn zero() -> Self {
        Self {
            entries: Default::default(),
            kind: MatrixKind::General,
        }
    }

    pub fn from_entries(entries: [[GaussRational; 4]; 4]) -> Self {
        Self {
            entries,
            kind: MatrixKind::General,
        }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> GaussRational) -> Self {
        Self::from_entries(std::array::from_fn(|a| std::array::from_fn(|b| f(a, b))))
    }

    pub fn from_ints(rows: [[i64; 4]; 4]) -> Self {
        Self::from_fn(|a, b| GaussRational::from_int(rows[a][b]))
    }

    /// The Minkowski metric `H` (equal to its inverse).
    pub fn minkowski() -> Self {
        let mut m = Self::from_fn(|a, b| {
            if a == b {
                GaussRational::from_int(h_sign(a))
            } else {
                GaussRational::zero()
            }
        });
        m.kind = MatrixKind::Symmetric;
        m
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Retags the matrix. Symmetric kinds are not re-verified here; see
    /// [`Matrix4::is_symmetric_off_diagonal`].
    pub fn with_kind(mut self, kind: MatrixKind) -> Self {
        self.kind = kind;
        self
    }

    /// Checked read; refuses diagonal entries of symmetric-off-diagonal matrices.
    pub fn entry(&self, a: usize, b: usize) -> Result<&GaussRational, TensorError> {
        if a == b && self.kind == MatrixKind::SymmetricOffDiagonal {
            return Err(TensorError::UndefinedDiagonal(a));
        }
        Ok(&self.entries[a][b])
    }

    /// Unchecked read, for internal arithmetic.
    pub fn raw(&self, a: usize, b: usize) -> &GaussRational {
        &self.entries[a][b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: GaussRational) {
        self.entries[a][b] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::from_fn(|a, b| self.entries[b][a].clone());
        t.kind = self.kind;
        t
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        let mut m = Self::from_fn(|a, b| &self.entries[a][b] * s);
        m.kind = self.kind;
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(GaussRational::is_zero)
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..4).all(|a| (0..4).all(|b| self.entries[a][b] == -&self.entries[b][a]))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|a| (0..4).all(|b| self.entries[a][b] == self.entries[b][a]))
    }

    pub fn is_symmetric_off_diagonal(&self) -> bool {
        (0..4).all(|a| (0..4).all(|b| a == b || self.entries[a][b] == self.entries[b][a]))
    }

    /// Entrywise equality on the entries defined for both operands.
    pub fn eq_defined(&self, other: &Matrix4) -> bool {
        let skip_diag = self.kind == MatrixKind::SymmetricOffDiagonal
            || other.kind == MatrixKind::SymmetricOffDiagonal;
        (0..4).all(|a| {
            (0..4).all(|b| (skip_diag && a == b) || self.entries[a][b] == other.entries[a][b])
        })
    }

    pub fn rows(&self) -> &[[GaussRational; 4]; 4] {
        &self.entries
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|a| std::array::from_fn(|b| self.entries[a][b].to_f64_pair().0))
    }

    /// `Σ_{ab} M_{ab} u_a v_b`.
    pub fn bilinear(&self, u: &Covector4, v: &Covector4) -> GaussRational {
        let mut acc = GaussRational::zero();
        for a in 0..4 {
            if u.0[a].is_zero() {
                continue;
            }
            for b in 0..4 {
                if self.entries[a][b].is_zero() || v.0[b].is_zero() {
                    continue;
                }
                acc += &(&(&self.entries[a][b] * &u.0[a]) * &v.0[b]);
            }
        }
        acc
    }

    /// `H M H`, i.e. both indices raised with the Minkowski metric.
    pub fn raise_both(&self) -> Matrix4 {
        let mut m = Self::from_fn(|a, b| {
            let e = &self.entries[a][b];
            if h_sign(a) * h_sign(b) < 0 {
                -e
            } else {
                e.clone()
            }
        });
        m.kind = self.kind;
        m
    }
}

impl Default for Matrix4 {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a Matrix4> for &'a Matrix4 {
    type Output = Matrix4;
    fn add(self, rhs: &Matrix4) -> Matrix4 {
        Matrix4::from_fn(|a, b| &self.entries[a][b] + &rhs.entries[a][b])
            .with_kind(combine_kind(self.kind, rhs.kind))
    }
}

impl<'a> Sub<&'a Matrix4> for &'a Matrix4 {
    type Output = Matrix4;
    fn sub(self, rhs: &Matrix4) -> Matrix4 {
        Matrix4::from_fn(|a, b| &self.entries[a][b] - &rhs.entries[a][b])
            .with_kind(combine_kind(self.kind, rhs.kind))
    }
}

impl<'a> Mul<&'a Matrix4> for &'a Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: &Matrix4) -> Matrix4 {
        Matrix4::from_fn(|a, b| {
            let mut acc = GaussRational::zero();
            for c in 0..4 {
                let l = &self.entries[a][c];
                let r = &rhs.entries[c][b];
                if !l.is_zero() && !r.is_zero() {
                    acc += &(l * r);
                }
            }
            acc
        })
    }
}

impl Neg for &Matrix4 {
    type Output = Matrix4;
    fn neg(self) -> Matrix4 {
        Matrix4::from_fn(|a, b| -&self.entries[a][b]).with_kind(self.kind)
    }
}

fn combine_kind(a: MatrixKind, b: MatrixKind) -> MatrixKind {
    use MatrixKind::*;
    match (a, b) {
        (x, y) if x == y => x,
        (SymmetricOffDiagonal, Symmetric) | (Symmetric, SymmetricOffDiagonal) => {
            SymmetricOffDiagonal
        }
        _ => General,
    }
}

impl fmt::Debug for Matrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix4<{:?}>[", self.kind)?;
        for a in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|b| {
                    if a == b && self.kind == MatrixKind::SymmetricOffDiagonal {
                        "*".to_string()
                    } else {
                        self.entries[a][b].to_string()
                    }
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `Tr(F G) = Σ_{λμ} h^{λλ} h^{μμ} F_{λμ} G_{λμ}`.
pub fn weighted_trace(f: &Matrix4, g: &Matrix4) -> GaussRational {
    let mut acc = GaussRational::zero();
    for l in 0..4 {
        for m in 0..4 {
            let a = &f.entries[l][m];
            let b = &g.entries[l][m];
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let term = a * b;
            if h_sign(l) * h_sign(m) < 0 {
                acc -= &term;
            } else {
                acc += &term;
            }
        }
    }
    acc
}

/// `F · H · G`.
pub fn sandwich(f: &Matrix4, g: &Matrix4) -> Matrix4 {
    Matrix4::from_fn(|a, b| {
        let mut acc = GaussRational::zero();
        for l in 0..4 {
            let x = &f.entries[a][l];
            let y = &g.entries[l][b];
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let term = x * y;
            if h_sign(l) < 0 {
                acc -= &term;
            } else {
                acc += &term;
            }
        }
        acc
    })
}
