//! Homogeneous ternary forms and projective points over ℚ(√d).

use std::collections::BTreeMap;
use std::fmt;

use super::PencilError;
use crate::exact::{QuadraticFieldElement as Q, Rational};

/// Exponent vector `[i, j, k]` of `xⁱ yʲ zᵏ`.
pub type Monomial = [u32; 3];

/// A homogeneous polynomial in `x, y, z` with coefficients in ℚ(√d).
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogeneousForm {
    d: u64,
    degree: u32,
    terms: BTreeMap<Monomial, Q>,
}

impl HomogeneousForm {
    pub fn zero(d: u64, degree: u32) -> Self {
        Self { d, degree, terms: BTreeMap::new() }
    }

    pub fn monomial(coefficient: Q, exponents: Monomial) -> Self {
        let mut f = Self::zero(coefficient.d(), exponents.iter().sum());
        if !coefficient.is_zero() {
            f.terms.insert(exponents, coefficient);
        }
        f
    }

    /// The coordinate function `x`, `y` or `z` (index 0, 1, 2).
    pub fn variable(d: u64, index: usize) -> Result<Self, PencilError> {
        let mut e = [0; 3];
        e[index] = 1;
        Ok(Self::monomial(Q::one(d)?, e))
    }

    /// `a·x + b·y + c·z`.
    pub fn linear(a: Q, b: Q, c: Q) -> Result<Self, PencilError> {
        let mut f = Self::monomial(a, [1, 0, 0]);
        f = f.try_add(&Self::monomial(b, [0, 1, 0]))?;
        f.try_add(&Self::monomial(c, [0, 0, 1]))
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> Q {
        self.terms.get(&m).cloned().unwrap_or_else(|| Q::zero(self.d).expect("validated d"))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    fn compatible(&self, other: &Self) -> Result<(), PencilError> {
        if self.d != other.d {
            return Err(crate::exact::ExactError::MismatchedField { left: self.d, right: other.d }.into());
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PencilError> {
        self.compatible(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(PencilError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let sum = match terms.get(m) {
                Some(v) => v.try_add(c)?,
                None => c.clone(),
            };
            if sum.is_zero() {
                terms.remove(m);
            } else {
                terms.insert(*m, sum);
            }
        }
        Ok(Self { d: self.d, degree, terms })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PencilError> {
        self.compatible(other)?;
        let mut out = Self::zero(self.d, self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = [m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]];
                out = out.try_add(&Self::monomial(c1.try_mul(c2)?, m))?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Q) -> Result<Self, PencilError> {
        self.try_mul(&Self::monomial(k.clone(), [0, 0, 0]))
    }

    pub fn evaluate(&self, p: &ProjectivePoint) -> Result<Q, PencilError> {
        if p.d() != self.d {
            return Err(crate::exact::ExactError::MismatchedField { left: self.d, right: p.d() }.into());
        }
        let mut total = Q::zero(self.d)?;
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (coord, &e) in p.coords().iter().zip(m) {
                for _ in 0..e {
                    v = v.try_mul(coord)?;
                }
            }
            total = total.try_add(&v)?;
        }
        Ok(total)
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn partial(&self, index: usize) -> Self {
        let mut out = Self::zero(self.d, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            if m[index] == 0 {
                continue;
            }
            let mut e = *m;
            e[index] -= 1;
            out.terms.insert(e, c.scale(&Rational::from(i64::from(m[index]))));
        }
        out
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Descending monomial order reads x³, x²y, … , z³.
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: String = ["x", "y", "z"]
                .iter()
                .zip(m)
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect::<Vec<_>>()
                .join("*");
            match (mono.is_empty(), c.b().is_zero() && *c.a() == Rational::one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "({c})*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A point `[x : y : z]` of the projective plane over ℚ(√d).
#[derive(Clone)]
pub struct ProjectivePoint {
    coords: [Q; 3],
}

impl ProjectivePoint {
    pub fn new(x: Q, y: Q, z: Q) -> Result<Self, PencilError> {
        let d = x.d();
        for c in [&y, &z] {
            if c.d() != d {
                return Err(crate::exact::ExactError::MismatchedField { left: d, right: c.d() }.into());
            }
        }
        if x.is_zero() && y.is_zero() && z.is_zero() {
            return Err(PencilError::ZeroPoint);
        }
        Ok(Self { coords: [x, y, z] })
    }

    pub fn coords(&self) -> &[Q; 3] {
        &self.coords
    }

    pub fn d(&self) -> u64 {
        self.coords[0].d()
    }

    pub fn scaled(&self, k: &Q) -> Result<Self, PencilError> {
        let [x, y, z] = &self.coords;
        Self::new(x.try_mul(k)?, y.try_mul(k)?, z.try_mul(k)?)
    }

    /// Index of the last nonzero coordinate, which names the affine chart.
    pub fn chart(&self) -> usize {
        (0..3).rev().find(|&i| !self.coords[i].is_zero()).expect("nonzero point")
    }

    /// The cross product `p × q`, zero exactly when the points coincide.
    pub fn cross(&self, other: &Self) -> Result<[Q; 3], PencilError> {
        let (a, b) = (&self.coords, &other.coords);
        let minor =
            |i: usize, j: usize| -> Result<Q, PencilError> { Ok(a[i].try_mul(&b[j])?.try_sub(&a[j].try_mul(&b[i])?)?) };
        Ok([minor(1, 2)?, minor(2, 0)?, minor(0, 1)?])
    }
}

/// Equality up to a nonzero scalar.
impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        self.d() == other.d() && self.cross(other).map(|c| c.iter().all(Q::is_zero)).unwrap_or(false)
    }
}

impl Eq for ProjectivePoint {}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.coords;
        write!(f, "[{x}:{y}:{z}]")
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
