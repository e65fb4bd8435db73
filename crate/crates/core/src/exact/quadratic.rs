use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::{ArithOp, ExactError, Rational};

/// Element `a + b√d` of the real quadratic field ℚ(√d).
///
/// `d` is part of the value. Arithmetic between elements with different
/// `d` is an error ([`quad_arith`]) or a panic (operator impls); there is
/// no implicit embedding into a larger field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticFieldElement {
    a: Rational,
    b: Rational,
    d: u64,
}

/// Returns true when `d > 1` has no square factor.
pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadraticFieldElement {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, ExactError> {
        if !is_square_free(d) {
            return Err(ExactError::NotSquareFree(d));
        }
        Ok(Self { a, b, d })
    }

    pub fn rational(a: Rational, d: u64) -> Result<Self, ExactError> {
        Self::new(a, Rational::zero(), d)
    }

    pub fn from_integers(a: i64, b: i64, d: u64) -> Result<Self, ExactError> {
        Self::new(a.into(), b.into(), d)
    }

    /// `√d` itself.
    pub fn sqrt_d(d: u64) -> Result<Self, ExactError> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn zero(d: u64) -> Result<Self, ExactError> {
        Self::new(Rational::zero(), Rational::zero(), d)
    }

    pub fn one(d: u64) -> Result<Self, ExactError> {
        Self::new(Rational::one(), Rational::zero(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(self.d)) * (&self.b * &self.b)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { a: &self.a * k, b: &self.b * k, d: self.d }
    }

    fn same_field(&self, other: &Self) -> Result<(), ExactError> {
        if self.d != other.d {
            return Err(ExactError::MismatchedField { left: self.d, right: other.d });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.same_field(other)?;
        Ok(Self { a: &self.a + &other.a, b: &self.b + &other.b, d: self.d })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.same_field(other)?;
        Ok(Self { a: &self.a - &other.a, b: &self.b - &other.b, d: self.d })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.same_field(other)?;
        let d = Rational::from_integer(BigInt::from(self.d));
        Ok(Self {
            a: &self.a * &other.a + d * (&self.b * &other.b),
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d,
        })
    }

    /// `1/(a+b√d) = (a−b√d)/(a²−db²)`.
    pub fn try_recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // d square-free and > 1, so the norm vanishes only at zero
        let inv_norm = self.norm().recip()?;
        Ok(self.conjugate().scale(&inv_norm))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.same_field(other)?;
        self.try_mul(&other.try_recip()?)
    }
}

/// Exact arithmetic in ℚ(√d).
pub fn quad_arith(
    x: &QuadraticFieldElement,
    y: &QuadraticFieldElement,
    op: ArithOp,
) -> Result<QuadraticFieldElement, ExactError> {
    match op {
        ArithOp::Add => x.try_add(y),
        ArithOp::Sub => x.try_sub(y),
        ArithOp::Mul => x.try_mul(y),
        ArithOp::Div => x.try_div(y),
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadraticFieldElement> for &QuadraticFieldElement {
            type Output = QuadraticFieldElement;
            fn $method(self, rhs: &QuadraticFieldElement) -> QuadraticFieldElement {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait for QuadraticFieldElement {
            type Output = QuadraticFieldElement;
            fn $method(self, rhs: QuadraticFieldElement) -> QuadraticFieldElement {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

impl Neg for &QuadraticFieldElement {
    type Output = QuadraticFieldElement;
    fn neg(self) -> QuadraticFieldElement {
        QuadraticFieldElement { a: -&self.a, b: -&self.b, d: self.d }
    }
}

impl Neg for QuadraticFieldElement {
    type Output = QuadraticFieldElement;
    fn neg(self) -> QuadraticFieldElement {
        -&self
    }
}

impl fmt::Display for QuadraticFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("√{}", self.d);
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}", coefficient_times(&self.b, &root)),
            (false, false) => {
                let tail = coefficient_times(&self.b.abs(), &root);
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}", self.a, sign, tail)
            }
        }
    }
}

fn coefficient_times(c: &Rational, root: &str) -> String {
    if *c == Rational::one() {
        root.to_string()
    } else if *c == -Rational::one() {
        format!("-{root}")
    } else if c.is_integer() {
        format!("{c}{root}")
    } else {
        let num = c.numerator();
        let den = c.denominator();
        if *num == BigInt::from(1) {
            format!("{root}/{den}")
        } else {
            format!("{num}{root}/{den}")
        }
    }
}

impl fmt::Debug for QuadraticFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
