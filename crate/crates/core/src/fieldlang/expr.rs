use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::FieldError;

/// A point of the 4-chart, `x[0] = x¹ … x[3] = x⁴`.
pub type Point4 = [f64; 4];

/// Elementary functions known to the field language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, z: Complex64) -> Result<Complex64, FieldError> {
        match self {
            Func::Sin => Ok(z.sin()),
            Func::Cos => Ok(z.cos()),
            Func::Exp => Ok(z.exp()),
            Func::Ln => {
                if z.im == 0.0 && z.re <= 0.0 {
                    Err(FieldError::Domain(format!("ln of non-positive real {}", z.re)))
                } else {
                    Ok(z.ln())
                }
            }
            Func::Sqrt => {
                if z.im == 0.0 && z.re < 0.0 {
                    Err(FieldError::Domain(format!("sqrt of negative real {}", z.re)))
                } else {
                    Ok(z.sqrt())
                }
            }
        }
    }
}

/// Node of a scalar-field expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(Complex64),
    /// Chart coordinate, zero based (`Var(0)` is `x1`).
    Var(usize),
    Add(ScalarFieldExpr, ScalarFieldExpr),
    Sub(ScalarFieldExpr, ScalarFieldExpr),
    Mul(ScalarFieldExpr, ScalarFieldExpr),
    Div(ScalarFieldExpr, ScalarFieldExpr),
    Pow(ScalarFieldExpr, i32),
    Neg(ScalarFieldExpr),
    Call(Func, ScalarFieldExpr),
}

/// Immutable, cheaply clonable expression for a complex scalar field over
/// the chart coordinates `x1..x4`.
///
/// The smart constructors (`add`, `mul`, ...) perform constant folding, so
/// every tree built through them (including every parsed tree) is in
/// canonical folded form. [`ScalarFieldExpr::raw`] bypasses folding.
#[derive(Clone, PartialEq)]
pub struct ScalarFieldExpr(Arc<Node>);

fn is_zero(e: &ScalarFieldExpr) -> bool {
    matches!(e.node(), Node::Const(c) if *c == Complex64::new(0.0, 0.0))
}

fn is_one(e: &ScalarFieldExpr) -> bool {
    matches!(e.node(), Node::Const(c) if *c == Complex64::new(1.0, 0.0))
}

fn finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

impl ScalarFieldExpr {
    /// Wraps a node without folding.
    pub fn raw(node: Node) -> Self {
        ScalarFieldExpr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: Complex64) -> Self {
        Self::raw(Node::Const(c))
    }

    pub fn real(v: f64) -> Self {
        Self::constant(Complex64::new(v, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn imag_unit() -> Self {
        Self::constant(Complex64::new(0.0, 1.0))
    }

    /// Coordinate `x^(index+1)`.
    pub fn var(index: usize) -> Self {
        assert!(index < 4, "chart has four coordinates");
        Self::raw(Node::Var(index))
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        is_zero(self)
    }

    pub fn add(a: Self, b: Self) -> Self {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Self::constant(x + y);
        }
        if is_zero(&a) {
            return b;
        }
        if is_zero(&b) {
            return a;
        }
        Self::raw(Node::Add(a, b))
    }

    pub fn sub(a: Self, b: Self) -> Self {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Self::constant(x - y);
        }
        if is_zero(&b) {
            return a;
        }
        if is_zero(&a) {
            return Self::neg(b);
        }
        Self::raw(Node::Sub(a, b))
    }

    pub fn mul(a: Self, b: Self) -> Self {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Self::constant(x * y);
        }
        if is_zero(&a) || is_zero(&b) {
            return Self::zero();
        }
        if is_one(&a) {
            return b;
        }
        if is_one(&b) {
            return a;
        }
        if let Node::Neg(inner) = a.node() {
            return Self::neg(Self::mul(inner.clone(), b));
        }
        if let Node::Neg(inner) = b.node() {
            return Self::neg(Self::mul(a, inner.clone()));
        }
        Self::raw(Node::Mul(a, b))
    }

    pub fn div(a: Self, b: Self) -> Self {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            let q = x / y;
            if finite(q) {
                return Self::constant(q);
            }
        }
        if is_zero(&a) && !is_zero(&b) {
            return Self::zero();
        }
        if is_one(&b) {
            return a;
        }
        if let Node::Neg(inner) = a.node() {
            return Self::neg(Self::div(inner.clone(), b));
        }
        if let Node::Neg(inner) = b.node() {
            return Self::neg(Self::div(a, inner.clone()));
        }
        Self::raw(Node::Div(a, b))
    }

    pub fn pow(a: Self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        if n == 1 {
            return a;
        }
        if let Some(x) = a.as_const() {
            let v = x.powi(n);
            if finite(v) {
                return Self::constant(v);
            }
        }
        Self::raw(Node::Pow(a, n))
    }

    pub fn neg(a: Self) -> Self {
        match a.node() {
            Node::Const(c) => Self::constant(-c),
            Node::Neg(inner) => inner.clone(),
            _ => Self::raw(Node::Neg(a)),
        }
    }

    pub fn call(f: Func, a: Self) -> Self {
        if let Some(x) = a.as_const() {
            if let Ok(v) = f.apply(x) {
                if finite(v) {
                    return Self::constant(v);
                }
            }
        }
        Self::raw(Node::Call(f, a))
    }

    /// Rebuilds the tree bottom-up through the folding constructors.
    /// Idempotent.
    pub fn fold(&self) -> Self {
        match self.node() {
            Node::Const(_) | Node::Var(_) => self.clone(),
            Node::Add(a, b) => Self::add(a.fold(), b.fold()),
            Node::Sub(a, b) => Self::sub(a.fold(), b.fold()),
            Node::Mul(a, b) => Self::mul(a.fold(), b.fold()),
            Node::Div(a, b) => Self::div(a.fold(), b.fold()),
            Node::Pow(a, n) => Self::pow(a.fold(), *n),
            Node::Neg(a) => Self::neg(a.fold()),
            Node::Call(f, a) => Self::call(*f, a.fold()),
        }
    }

    /// Exact recursive evaluation at `x`.
    pub fn eval(&self, x: &Point4) -> Result<Complex64, FieldError> {
        let v = match self.node() {
            Node::Const(c) => *c,
            Node::Var(i) => Complex64::new(x[*i], 0.0),
            Node::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Node::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Node::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Node::Div(a, b) => {
                let den = b.eval(x)?;
                if den.norm() == 0.0 {
                    return Err(FieldError::Domain("division by zero".into()));
                }
                a.eval(x)? / den
            }
            Node::Pow(a, n) => {
                let base = a.eval(x)?;
                if *n < 0 && base.norm() == 0.0 {
                    return Err(FieldError::Domain("negative power of zero".into()));
                }
                base.powi(*n)
            }
            Node::Neg(a) => -a.eval(x)?,
            Node::Call(f, a) => f.apply(a.eval(x)?)?,
        };
        if !finite(v) {
            return Err(FieldError::Domain(format!("non-finite value in `{self}`")));
        }
        Ok(v)
    }

    /// Structural complex conjugate. Coordinates are real, and every function
    /// in the language commutes with conjugation away from its branch cut,
    /// so conjugating the constants conjugates the field.
    pub fn conj(&self) -> Self {
        match self.node() {
            Node::Const(c) => Self::constant(c.conj()),
            Node::Var(_) => self.clone(),
            Node::Add(a, b) => Self::add(a.conj(), b.conj()),
            Node::Sub(a, b) => Self::sub(a.conj(), b.conj()),
            Node::Mul(a, b) => Self::mul(a.conj(), b.conj()),
            Node::Div(a, b) => Self::div(a.conj(), b.conj()),
            Node::Pow(a, n) => Self::pow(a.conj(), *n),
            Node::Neg(a) => Self::neg(a.conj()),
            Node::Call(f, a) => Self::call(*f, a.conj()),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                1 + a.size() + b.size()
            }
            Node::Pow(a, _) | Node::Neg(a) | Node::Call(_, a) => 1 + a.size(),
        }
    }

    /// True when no coordinate occurs in the tree.
    pub fn is_constant(&self) -> bool {
        match self.node() {
            Node::Const(_) => true,
            Node::Var(_) => false,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
            Node::Pow(a, _) | Node::Neg(a) | Node::Call(_, a) => a.is_constant(),
        }
    }
}

impl Default for ScalarFieldExpr {
    fn default() -> Self {
        ScalarFieldExpr::zero()
    }
}

impl From<f64> for ScalarFieldExpr {
    fn from(v: f64) -> Self {
        ScalarFieldExpr::real(v)
    }
}

impl From<Complex64> for ScalarFieldExpr {
    fn from(c: Complex64) -> Self {
        ScalarFieldExpr::constant(c)
    }
}

impl std::ops::Add for ScalarFieldExpr {
    type Output = ScalarFieldExpr;
    fn add(self, rhs: Self) -> Self {
        ScalarFieldExpr::add(self, rhs)
    }
}

impl std::ops::Sub for ScalarFieldExpr {
    type Output = ScalarFieldExpr;
    fn sub(self, rhs: Self) -> Self {
        ScalarFieldExpr::sub(self, rhs)
    }
}

impl std::ops::Mul for ScalarFieldExpr {
    type Output = ScalarFieldExpr;
    fn mul(self, rhs: Self) -> Self {
        ScalarFieldExpr::mul(self, rhs)
    }
}

impl std::ops::Div for ScalarFieldExpr {
    type Output = ScalarFieldExpr;
    fn div(self, rhs: Self) -> Self {
        ScalarFieldExpr::div(self, rhs)
    }
}

impl std::ops::Neg for ScalarFieldExpr {
    type Output = ScalarFieldExpr;
    fn neg(self) -> Self {
        ScalarFieldExpr::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Canonical printing. The output re-parses to the identical folded tree.
// ---------------------------------------------------------------------------

fn write_real(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    write!(f, "{v}")
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64, standalone: bool) -> fmt::Result {
    if c.im == 0.0 {
        return write_real(f, c.re);
    }
    if c.re == 0.0 {
        if c.im == 1.0 {
            return write!(f, "i");
        }
        if c.im == -1.0 {
            return write!(f, "-i");
        }
        if !standalone {
            write!(f, "(")?;
        }
        write_real(f, c.im)?;
        write!(f, "*i")?;
        if !standalone {
            write!(f, ")")?;
        }
        return Ok(());
    }
    if !standalone {
        write!(f, "(")?;
    }
    write_real(f, c.re)?;
    if c.im < 0.0 {
        write!(f, "-")?;
        write_real(f, -c.im)?;
    } else {
        write!(f, "+")?;
        write_real(f, c.im)?;
    }
    write!(f, "*i")?;
    if !standalone {
        write!(f, ")")?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Level {
    Expr,
    Term,
    Base,
}

fn level_of(e: &ScalarFieldExpr) -> Level {
    match e.node() {
        Node::Add(..) | Node::Sub(..) => Level::Expr,
        Node::Mul(..) | Node::Div(..) | Node::Pow(..) => Level::Term,
        Node::Const(c) if c.im != 0.0 && !(c.re == 0.0 && c.im.abs() == 1.0) => Level::Expr,
        _ => Level::Base,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &ScalarFieldExpr, need: Level) -> fmt::Result {
    if level_of(e) < need {
        write!(f, "(")?;
        write_node(f, e)?;
        write!(f, ")")
    } else {
        write_node(f, e)
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, e: &ScalarFieldExpr) -> fmt::Result {
    match e.node() {
        Node::Const(c) => write_const(f, *c, true),
        Node::Var(i) => write!(f, "x{}", i + 1),
        Node::Add(a, b) => {
            write_at(f, a, Level::Expr)?;
            write!(f, " + ")?;
            write_at(f, b, Level::Term)
        }
        Node::Sub(a, b) => {
            write_at(f, a, Level::Expr)?;
            write!(f, " - ")?;
            write_at(f, b, Level::Term)
        }
        Node::Mul(a, b) => {
            write_at(f, a, Level::Term)?;
            write!(f, "*")?;
            write_factor(f, b)
        }
        Node::Div(a, b) => {
            write_at(f, a, Level::Term)?;
            write!(f, "/")?;
            write_factor(f, b)
        }
        Node::Pow(a, n) => {
            write_at(f, a, Level::Base)?;
            write!(f, "^{n}")
        }
        Node::Neg(a) => {
            write!(f, "-")?;
            write_at(f, a, Level::Base)
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a)?;
            write!(f, ")")
        }
    }
}

// Right operand of `*` or `/` must be a single factor.
fn write_factor(f: &mut fmt::Formatter<'_>, e: &ScalarFieldExpr) -> fmt::Result {
    match e.node() {
        Node::Mul(..) | Node::Div(..) => {
            write!(f, "(")?;
            write_node(f, e)?;
            write!(f, ")")
        }
        _ => write_at(f, e, Level::Term),
    }
}

impl fmt::Display for ScalarFieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, self)
    }
}

impl fmt::Debug for ScalarFieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarFieldExpr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> ScalarFieldExpr {
        ScalarFieldExpr::var(i)
    }

    #[test]
    fn folding_rules() {
        let e = ScalarFieldExpr::mul(ScalarFieldExpr::real(0.0), x(0));
        assert!(e.is_zero());
        let e = ScalarFieldExpr::add(ScalarFieldExpr::real(2.0), ScalarFieldExpr::real(3.0));
        assert_eq!(e.as_const(), Some(Complex64::new(5.0, 0.0)));
        let e = -(-x(1));
        assert_eq!(e, x(1));
        let e = ScalarFieldExpr::mul(-x(0), x(1));
        assert!(matches!(e.node(), Node::Neg(_)));
        assert_eq!(ScalarFieldExpr::pow(x(2), 1), x(2));
    }

    #[test]
    fn eval_domain_errors() {
        let inv = ScalarFieldExpr::div(ScalarFieldExpr::one(), x(0));
        assert!(matches!(inv.eval(&[0.0; 4]), Err(FieldError::Domain(_))));
        let ln = ScalarFieldExpr::call(Func::Ln, x(0));
        assert!(ln.eval(&[-1.0, 0.0, 0.0, 0.0]).is_err());
        assert!(ln.eval(&[1.0, 0.0, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn conj_is_involution() {
        let e = ScalarFieldExpr::mul(
            ScalarFieldExpr::constant(Complex64::new(1.5, -2.0)),
            ScalarFieldExpr::call(Func::Exp, ScalarFieldExpr::mul(ScalarFieldExpr::imag_unit(), x(3))),
        );
        assert_eq!(e.conj().conj(), e);
        let p = [0.1, 0.2, 0.3, 0.4];
        let a = e.eval(&p).unwrap().conj();
        let b = e.conj().eval(&p).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn printing_of_constants() {
        assert_eq!(ScalarFieldExpr::imag_unit().to_string(), "i");
        assert_eq!(ScalarFieldExpr::constant(Complex64::new(0.0, 2.0)).to_string(), "2*i");
        assert_eq!(ScalarFieldExpr::constant(Complex64::new(1.0, -2.5)).to_string(), "1-2.5*i");
        let e = ScalarFieldExpr::mul(x(0), ScalarFieldExpr::constant(Complex64::new(0.0, 2.0)));
        assert_eq!(e.to_string(), "x1*(2*i)");
    }
}
