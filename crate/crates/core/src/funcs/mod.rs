//! One-variable scalar functions with exact first and second derivatives.
//!
//! Expressions are parsed into a tree and differentiated in forward mode
//! (see [`Jet2`]); sampled functions are natural cubic interpolants.

mod jet;
mod parse;
mod spline;

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use jet::Jet2;
pub use spline::CubicSpline;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum UnaryFn {
    Exp,
    Ln,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Sin,
    Cos,
}

impl UnaryFn {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => UnaryFn::Exp,
            "log" | "ln" => UnaryFn::Ln,
            "sqrt" => UnaryFn::Sqrt,
            "sinh" => UnaryFn::Sinh,
            "cosh" => UnaryFn::Cosh,
            "tanh" => UnaryFn::Tanh,
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Const(f64),
    Var,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    PowConst(Box<Node>, f64),
    Pow(Box<Node>, Box<Node>),
    Unary(UnaryFn, Box<Node>),
    Table(Arc<CubicSpline>, Box<Node>),
}

impl Node {
    fn power(base: Node, exponent: Node) -> Node {
        match exponent.constant_value() {
            Some(p) => Node::PowConst(Box::new(base), p),
            None => Node::Pow(Box::new(base), Box::new(exponent)),
        }
    }

    /// Folds a variable-free subtree to its value.
    fn constant_value(&self) -> Option<f64> {
        if self.has_var() {
            return None;
        }
        self.eval(Jet2::constant(0.0)).ok().map(|j| j.value)
    }

    fn has_var(&self) -> bool {
        match self {
            Node::Const(_) => false,
            Node::Var => true,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.has_var() || b.has_var()
            }
            Node::Neg(a) | Node::PowConst(a, _) | Node::Unary(_, a) | Node::Table(_, a) => a.has_var(),
        }
    }

    fn has_table(&self) -> bool {
        match self {
            Node::Const(_) | Node::Var => false,
            Node::Table(..) => true,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.has_table() || b.has_table()
            }
            Node::Neg(a) | Node::PowConst(a, _) | Node::Unary(_, a) => a.has_table(),
        }
    }

    fn eval(&self, x: Jet2) -> Result<Jet2> {
        Ok(match self {
            Node::Const(c) => Jet2::constant(*c),
            Node::Var => x,
            Node::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Node::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Node::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Node::Div(a, b) => {
                let den = b.eval(x)?;
                if den.value == 0.0 {
                    return Err(Error::domain(format!("division by zero at {}", x.value)));
                }
                a.eval(x)? / den
            }
            Node::Neg(a) => -a.eval(x)?,
            Node::PowConst(a, p) => {
                let base = a.eval(x)?;
                if base.value < 0.0 && p.fract() != 0.0 {
                    return Err(Error::domain(format!(
                        "negative base {} to non-integer power {p}",
                        base.value
                    )));
                }
                if base.value == 0.0 && *p < 0.0 {
                    return Err(Error::domain(format!("zero to negative power {p}")));
                }
                base.powf(*p)
            }
            Node::Pow(a, b) => {
                let base = a.eval(x)?;
                if base.value <= 0.0 {
                    return Err(Error::domain(format!(
                        "non-positive base {} to a variable power",
                        base.value
                    )));
                }
                (b.eval(x)? * base.ln()).exp()
            }
            Node::Unary(f, a) => {
                let u = a.eval(x)?;
                match f {
                    UnaryFn::Exp => u.exp(),
                    UnaryFn::Ln => {
                        if u.value <= 0.0 {
                            return Err(Error::domain(format!("log of non-positive {}", u.value)));
                        }
                        u.ln()
                    }
                    UnaryFn::Sqrt => {
                        if u.value < 0.0 {
                            return Err(Error::domain(format!("sqrt of negative {}", u.value)));
                        }
                        u.sqrt()
                    }
                    UnaryFn::Sinh => u.sinh(),
                    UnaryFn::Cosh => u.cosh(),
                    UnaryFn::Tanh => u.tanh(),
                    UnaryFn::Sin => u.sin(),
                    UnaryFn::Cos => u.cos(),
                }
            }
            Node::Table(spline, a) => {
                let u = a.eval(x)?;
                let inner = spline.jet_at(u.value)?;
                u.compose(inner.value, inner.d1, inner.d2)
            }
        })
    }
}

/// Real interval with open, closed or infinite ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: lo.is_finite(),
            hi_closed: hi.is_finite(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn is_interior(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// A function of one real variable on a declared domain.
///
/// Cheap to clone; the expression tree is shared.
#[derive(Debug, Clone)]
pub struct ScalarFunction {
    root: Arc<Node>,
    domain: Interval,
    source: String,
    variable: Option<String>,
}

impl ScalarFunction {
    pub fn parse(src: &str) -> Result<Self> {
        let parsed = parse::parse(src)?;
        Ok(ScalarFunction {
            root: parsed.node,
            domain: Interval::REAL_LINE,
            source: src.trim().to_string(),
            variable: parsed.variable,
        })
    }

    /// Natural cubic interpolant through `points`; the domain is the
    /// closed range of the abscissae.
    pub fn table(points: &[(f64, f64)]) -> Result<Self> {
        let spline = CubicSpline::new(points)?;
        let domain = Interval::closed(spline.lo(), spline.hi());
        let source = format!("table[{} points on {}]", points.len(), domain);
        Ok(ScalarFunction {
            root: Arc::new(Node::Table(Arc::new(spline), Box::new(Node::Var))),
            domain,
            source,
            variable: None,
        })
    }

    pub fn constant(c: f64) -> Self {
        ScalarFunction {
            root: Arc::new(Node::Const(c)),
            domain: Interval::REAL_LINE,
            source: format!("{c}"),
            variable: None,
        }
    }

    /// The identity `x ↦ x`.
    pub fn identity() -> Self {
        ScalarFunction {
            root: Arc::new(Node::Var),
            domain: Interval::REAL_LINE,
            source: "x".into(),
            variable: Some("x".into()),
        }
    }

    /// Restricts the domain (intersected with the current one).
    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = self.domain.intersect(&domain);
        self
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn variable(&self) -> Option<&str> {
        self.variable.as_deref()
    }

    /// True when any part of the function comes from a sampled table, in
    /// which case second derivatives are only piecewise linear.
    pub fn is_interpolated(&self) -> bool {
        self.root.has_table()
    }

    fn derived(&self, root: Node, source: String) -> Self {
        ScalarFunction {
            root: Arc::new(root),
            domain: self.domain,
            source,
            variable: self.variable.clone(),
        }
    }

    /// `c · f`
    pub fn scaled(&self, c: f64) -> Self {
        self.derived(
            Node::Mul(Box::new(Node::Const(c)), Box::new((*self.root).clone())),
            format!("{c}*({})", self.source),
        )
    }

    /// `f^p` for a constant exponent.
    pub fn powf(&self, p: f64) -> Self {
        self.derived(
            Node::PowConst(Box::new((*self.root).clone()), p),
            format!("({})^({p})", self.source),
        )
    }

    /// Value, first and second derivative at `x`.
    pub fn eval_jet2(&self, x: f64) -> Result<Jet2> {
        if !self.domain.contains(x) {
            return Err(Error::domain(format!(
                "{x} outside domain {} of '{}'",
                self.domain, self.source
            )));
        }
        let j = self.root.eval(Jet2::variable(x))?;
        if !j.is_finite() {
            return Err(Error::NonFinite(format!(
                "'{}' at {x} gives ({}, {}, {})",
                self.source, j.value, j.d1, j.d2
            )));
        }
        Ok(j)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.eval_jet2(x).map(|j| j.value)
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Serialize for ScalarFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl std::str::FromStr for ScalarFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScalarFunction::parse(s)
    }
}

pub fn eval_jet2(f: &ScalarFunction, x: f64) -> Result<Jet2> {
    f.eval_jet2(x)
}

fn positive_jet(f: &ScalarFunction, x: f64) -> Result<Jet2> {
    let j = f.eval_jet2(x)?;
    if j.value <= 0.0 {
        return Err(Error::domain(format!(
            "'{}' is not positive at {x} (value {})",
            f.source, j.value
        )));
    }
    Ok(j)
}

/// `(log f)''(x) = f''/f − (f'/f)²`.
pub fn log_second_derivative(f: &ScalarFunction, x: f64) -> Result<f64> {
    let j = positive_jet(f, x)?;
    let h = j.d1 / j.value;
    Ok(j.d2 / j.value - h * h)
}

/// The Hubble function `f'/f`.
pub fn hubble(f: &ScalarFunction, x: f64) -> Result<f64> {
    let j = positive_jet(f, x)?;
    Ok(j.d1 / j.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet(src: &str, x: f64) -> Jet2 {
        ScalarFunction::parse(src).unwrap().eval_jet2(x).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn elementary_jets() {
        assert_eq!(jet("exp(t)", 0.0), Jet2::new(1.0, 1.0, 1.0));
        assert_eq!(jet("sinh(t)", 0.0), Jet2::new(0.0, 1.0, 0.0));
        assert_eq!(jet("r^3", 2.0), Jet2::new(8.0, 12.0, 12.0));
    }

    #[test]
    fn log_second_derivative_examples() {
        let exp = ScalarFunction::parse("exp(t)").unwrap();
        assert!(log_second_derivative(&exp, 5.0).unwrap().abs() < 1e-12);
        let lin = ScalarFunction::parse("t").unwrap().with_domain(Interval::open(0.0, f64::INFINITY));
        assert!(close(log_second_derivative(&lin, 2.0).unwrap(), -0.25, 1e-15));
        let cosh = ScalarFunction::parse("cosh(t)").unwrap();
        assert!(close(log_second_derivative(&cosh, 0.0).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn log_second_derivative_rejects_nonpositive() {
        let lin = ScalarFunction::parse("t").unwrap();
        assert!(matches!(log_second_derivative(&lin, 0.0), Err(Error::Domain(_))));
        assert!(matches!(log_second_derivative(&lin, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn hubble_examples() {
        let exp = ScalarFunction::parse("exp(t)").unwrap();
        assert!(close(hubble(&exp, 3.0).unwrap(), 1.0, 1e-15));
        let eds = ScalarFunction::parse("t^(2/3)").unwrap();
        assert!(close(hubble(&eds, 1.0).unwrap(), 2.0 / 3.0, 1e-15));
        let c = ScalarFunction::parse("5").unwrap();
        assert_eq!(hubble(&c, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(jet("2^3^2", 0.0).value, 512.0);
        assert_eq!(jet("-x^2", 3.0).value, -9.0);
        assert_eq!(jet("1 - 2 - 3", 0.0).value, -4.0);
        assert_eq!(jet("8 / 2 / 2", 0.0).value, 2.0);
        assert!(close(jet("2*pi*x", 1.0).value, 2.0 * std::f64::consts::PI, 1e-15));
        assert!(close(jet("1.5e-1 * x", 2.0).value, 0.3, 1e-15));
    }

    #[test]
    fn variable_exponent_uses_exp_log() {
        // x^x at 2: value 4, derivative x^x (ln x + 1)
        let j = jet("x^x", 2.0);
        assert!(close(j.value, 4.0, 1e-14));
        assert!(close(j.d1, 4.0 * (2f64.ln() + 1.0), 1e-14));
    }

    #[test]
    fn malformed_expressions_are_parse_errors() {
        for bad in ["exp(", "", "1 +", "sin x", "x y", "(x", "x)", "2 $ x", "t + r"] {
            assert!(
                matches!(ScalarFunction::parse(bad), Err(Error::Parse { .. })),
                "{bad:?} should not parse"
            );
        }
    }

    #[test]
    fn domain_violations_are_errors() {
        let f = ScalarFunction::parse("log(x)").unwrap();
        assert!(matches!(f.eval(-1.0), Err(Error::Domain(_))));
        let g = ScalarFunction::parse("1/x").unwrap();
        assert!(matches!(g.eval(0.0), Err(Error::Domain(_))));
        let h = ScalarFunction::parse("x^0.5").unwrap();
        assert!(matches!(h.eval(-4.0), Err(Error::Domain(_))));
        assert!(matches!(h.eval(0.0), Err(Error::NonFinite(_))));
        let d = ScalarFunction::parse("x").unwrap().with_domain(Interval::open(0.0, 1.0));
        assert!(matches!(d.eval(1.0), Err(Error::Domain(_))));
        let big = ScalarFunction::parse("exp(x)").unwrap();
        assert!(matches!(big.eval(1000.0), Err(Error::NonFinite(_))));
    }

    #[test]
    fn table_flags_interpolation() {
        let t = ScalarFunction::table(&[(0.0, 1.0), (1.0, 2.0), (2.0, 5.0)]).unwrap();
        assert!(t.is_interpolated());
        assert!(!ScalarFunction::parse("x").unwrap().is_interpolated());
        assert_eq!(t.eval(1.0).unwrap(), 2.0);
        assert!(t.eval(2.5).is_err());
    }

    #[test]
    fn combinators_keep_derivatives() {
        let s = ScalarFunction::parse("sinh(r)").unwrap().powf(2.0).scaled(3.0);
        let j = s.eval_jet2(1.0).unwrap();
        let (sh, ch) = (1f64.sinh(), 1f64.cosh());
        assert!(close(j.value, 3.0 * sh * sh, 1e-14));
        assert!(close(j.d1, 6.0 * sh * ch, 1e-14));
        assert!(close(j.d2, 6.0 * (ch * ch + sh * sh), 1e-14));
    }
}
