//! Small dense matrices: 2×2 complex (symbol values), 4×4 real (frames,
//! metrics), 4×4 complex (Dirac symbols), and 2×2 matrix-valued fields.

use nalgebra::{Matrix2, Matrix4, SMatrix};
use num_complex::Complex64;

use crate::fieldlang::{symbolic_partial, FieldError, Point4, ScalarFieldExpr};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4c = SMatrix<C64, 4, 4>;
pub type Mat4 = Matrix4<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Minkowski signature `diag(1,1,1,-1)` in the frame index.
pub const ETA: [f64; 4] = [1.0, 1.0, 1.0, -1.0];

pub fn eta() -> Mat4 {
    Mat4::from_diagonal(&nalgebra::Vector4::from(ETA))
}

pub fn mat2(a: C64, b: C64, c: C64, d: C64) -> Mat2 {
    Mat2::new(a, b, c, d)
}

/// The standard basis `s¹..s⁴` of Hermitian 2×2 matrices (index 0..3).
pub fn standard_basis(j: usize) -> Mat2 {
    match j {
        0 => mat2(ZERO, ONE, ONE, ZERO),
        1 => mat2(ZERO, -I, I, ZERO),
        2 => mat2(ONE, ZERO, ZERO, -ONE),
        3 => Mat2::identity(),
        _ => panic!("standard basis index {j} out of range"),
    }
}

/// Matrix adjugate `(a b; c d) ↦ (d −b; −c a)`.
pub fn adj(m: &Mat2) -> Mat2 {
    mat2(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

/// The metric spinor `ε = (0 −1; 1 0)`.
pub fn metric_spinor() -> Mat2 {
    mat2(ZERO, -ONE, ONE, ZERO)
}

/// Frobenius norm.
pub fn norm2(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm4c(m: &Mat4c) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖M − M*‖`.
pub fn hermiticity_residual(m: &Mat2) -> f64 {
    norm2(&(m - m.adjoint()))
}

pub fn scale(m: &Mat2, s: C64) -> Mat2 {
    m.map(|z| z * s)
}

pub fn scale_real(m: &Mat2, s: f64) -> Mat2 {
    m.map(|z| z * s)
}

/// Real coordinates `c_j` with `M = s^j c_j` for Hermitian `M`, together
/// with the size of the non-Hermitian remainder.
pub fn decompose_hermitian(m: &Mat2) -> ([f64; 4], f64) {
    let h = scale_real(&(m + m.adjoint()), 0.5);
    let c = [
        h[(1, 0)].re,
        h[(1, 0)].im,
        0.5 * (h[(0, 0)].re - h[(1, 1)].re),
        0.5 * (h[(0, 0)].re + h[(1, 1)].re),
    ];
    (c, hermiticity_residual(m) / 2.0)
}

pub fn compose_hermitian(c: &[f64; 4]) -> Mat2 {
    (0..4).fold(Mat2::zeros(), |acc, j| acc + scale_real(&standard_basis(j), c[j]))
}

/// Assembles a 4×4 complex matrix from 2×2 blocks.
pub fn block4(tl: &Mat2, tr: &Mat2, bl: &Mat2, br: &Mat2) -> Mat4c {
    let mut out = Mat4c::zeros();
    for r in 0..2 {
        for c in 0..2 {
            out[(r, c)] = tl[(r, c)];
            out[(r, c + 2)] = tr[(r, c)];
            out[(r + 2, c)] = bl[(r, c)];
            out[(r + 2, c + 2)] = br[(r, c)];
        }
    }
    out
}

/// 2×2 matrix-valued field with one scalar expression per entry.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatrixField2 {
    pub entries: [[ScalarFieldExpr; 2]; 2],
}

impl MatrixField2 {
    pub fn new(entries: [[ScalarFieldExpr; 2]; 2]) -> Self {
        MatrixField2 { entries }
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> ScalarFieldExpr) -> Self {
        MatrixField2 {
            entries: [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]],
        }
    }

    pub fn constant(m: &Mat2) -> Self {
        Self::from_fn(|r, c| ScalarFieldExpr::constant(m[(r, c)]))
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| ScalarFieldExpr::zero())
    }

    pub fn identity() -> Self {
        Self::scalar(ScalarFieldExpr::one())
    }

    /// `s · I` for a scalar field `s`.
    pub fn scalar(s: ScalarFieldExpr) -> Self {
        Self::from_fn(|r, c| if r == c { s.clone() } else { ScalarFieldExpr::zero() })
    }

    pub fn get(&self, r: usize, c: usize) -> &ScalarFieldExpr {
        &self.entries[r][c]
    }

    pub fn eval(&self, x: &Point4) -> Result<Mat2, FieldError> {
        Ok(mat2(
            self.entries[0][0].eval(x)?,
            self.entries[0][1].eval(x)?,
            self.entries[1][0].eval(x)?,
            self.entries[1][1].eval(x)?,
        ))
    }

    pub fn partial(&self, alpha: usize) -> Self {
        Self::from_fn(|r, c| symbolic_partial(&self.entries[r][c], alpha))
    }

    pub fn map(&self, f: impl Fn(&ScalarFieldExpr) -> ScalarFieldExpr) -> Self {
        Self::from_fn(|r, c| f(&self.entries[r][c]))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(|r, c| self.entries[r][c].clone() + other.entries[r][c].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(|r, c| self.entries[r][c].clone() - other.entries[r][c].clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_fn(|r, c| {
            self.entries[r][0].clone() * other.entries[0][c].clone()
                + self.entries[r][1].clone() * other.entries[1][c].clone()
        })
    }

    pub fn scale(&self, s: &ScalarFieldExpr) -> Self {
        self.map(|e| s.clone() * e.clone())
    }

    /// Hermitian conjugate (conjugate transpose).
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, c| self.entries[c][r].conj())
    }

    /// Matrix adjugate.
    pub fn adj(&self) -> Self {
        let e = &self.entries;
        MatrixField2::new([
            [e[1][1].clone(), -e[0][1].clone()],
            [-e[1][0].clone(), e[0][0].clone()],
        ])
    }

    pub fn det(&self) -> ScalarFieldExpr {
        let e = &self.entries;
        e[0][0].clone() * e[1][1].clone() - e[0][1].clone() * e[1][0].clone()
    }

    /// True when every entry is a folded constant.
    pub fn is_constant(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    /// Parses four entry strings `[[a, b], [c, d]]`.
    pub fn parse(text: &[[&str; 2]; 2]) -> Result<Self, crate::fieldlang::ParseError> {
        let p = crate::fieldlang::parse_scalar_expr;
        Ok(MatrixField2::new([
            [p(text[0][0])?, p(text[0][1])?],
            [p(text[1][0])?, p(text[1][1])?],
        ]))
    }

    pub fn to_strings(&self) -> [[String; 2]; 2] {
        [
            [self.entries[0][0].to_string(), self.entries[0][1].to_string()],
            [self.entries[1][0].to_string(), self.entries[1][1].to_string()],
        ]
    }
}

/// `Σ_α fields[α] · p_α` for four matrix values.
pub fn contract(mats: &[Mat2; 4], p: &[f64; 4]) -> Mat2 {
    (0..4).fold(Mat2::zeros(), |acc, a| acc + scale_real(&mats[a], p[a]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_of_standard_basis() {
        for k in 0..3 {
            assert_eq!(adj(&standard_basis(k)), -standard_basis(k));
        }
        assert_eq!(adj(&standard_basis(3)), standard_basis(3));
    }

    #[test]
    fn adjugate_via_metric_spinor() {
        let eps = metric_spinor();
        let eps_inv = eps.try_inverse().unwrap();
        let s1 = standard_basis(0);
        assert_eq!(eps * s1.transpose() * eps_inv, -s1);
    }

    #[test]
    fn decomposition_roundtrip() {
        let c = [0.3, -1.2, 0.7, 2.0];
        let m = compose_hermitian(&c);
        let (back, res) = decompose_hermitian(&m);
        assert_eq!(res, 0.0);
        for j in 0..4 {
            assert!((back[j] - c[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn symbolic_adj_is_involution() {
        let f = MatrixField2::parse(&[["x1", "2*i + x2"], ["sin(x3)", "-x4"]]).unwrap();
        assert_eq!(f.adj().adj(), f);
        assert_eq!(f.adjoint().adjoint(), f);
    }
}
