//! Divisor classes on iterated blow-ups of the projective plane.
//!
//! A class is a coefficient vector in the basis `H, E₁, …, Eₙ` where `H` is
//! the pullback of a line and `Eᵢ` the total transform of the i-th
//! exceptional curve. The intersection form is `diag(+1, −1, …, −1)` and
//! the canonical class is `−3H + ΣEᵢ`. Blowing up appends a basis vector,
//! and every existing class is pulled back by padding with zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: {left} vs {right} basis vectors")]
    DimensionMismatch { left: usize, right: usize },
    #[error("{given} multiplicities given but the surface has only {blowups} exceptional classes")]
    TooManyMultiplicities { given: usize, blowups: usize },
    #[error("negative multiplicity {value} at E{index} for a proper transform")]
    NegativeMultiplicity { index: usize, value: i64 },
    #[error("a curve named '{0}' is already registered")]
    DuplicateCurve(String),
    #[error("unknown curve '{0}'")]
    UnknownCurve(String),
    #[error("'{name}' is declared a (-1)-curve but has C^2 = {square} and K.C = {canonical}")]
    NotMinusOne { name: String, square: Box<Rational>, canonical: Box<Rational> },
}

/// A divisor class `d·H − Σ mᵢEᵢ`, stored as the coefficient vector
/// `(d, −m₁, …, −mₙ)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    coefficients: Vec<Rational>,
}

impl DivisorClass {
    pub fn zero(blowups: usize) -> Self {
        Self { coefficients: vec![Rational::zero(); blowups + 1] }
    }

    pub fn from_coefficients(coefficients: Vec<Rational>) -> Self {
        assert!(!coefficients.is_empty(), "a divisor class needs the H coefficient");
        Self { coefficients }
    }

    /// `degree·H − Σ mᵢEᵢ` on a surface with `blowups` exceptional classes.
    /// Multiplicities are signed here so exceptional components such as
    /// `E₁ − E₂` can be written as degree 0 with `m = (−1, 1)`.
    pub fn from_degree_multiplicities(
        blowups: usize,
        degree: i64,
        multiplicities: &[i64],
    ) -> Result<Self, LatticeError> {
        if multiplicities.len() > blowups {
            return Err(LatticeError::TooManyMultiplicities { given: multiplicities.len(), blowups });
        }
        let mut c = Self::zero(blowups);
        c.coefficients[0] = degree.into();
        for (i, &m) in multiplicities.iter().enumerate() {
            c.coefficients[i + 1] = (-m).into();
        }
        Ok(c)
    }

    pub fn hyperplane(blowups: usize) -> Self {
        let mut c = Self::zero(blowups);
        c.coefficients[0] = Rational::one();
        c
    }

    /// Total transform `Eᵢ` of the i-th exceptional curve, 1-based.
    pub fn exceptional(blowups: usize, index: usize) -> Self {
        assert!((1..=blowups).contains(&index), "exceptional index out of range");
        let mut c = Self::zero(blowups);
        c.coefficients[index] = Rational::one();
        c
    }

    pub fn canonical(blowups: usize) -> Self {
        let mut c = Self::zero(blowups);
        c.coefficients[0] = Rational::from(-3);
        for coef in c.coefficients.iter_mut().skip(1) {
            *coef = Rational::one();
        }
        c
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Number of exceptional basis vectors.
    pub fn blowups(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn degree(&self) -> &Rational {
        &self.coefficients[0]
    }

    /// Multiplicity `mᵢ` at `Eᵢ`, i.e. minus the coefficient.
    pub fn multiplicity(&self, index: usize) -> Rational {
        -&self.coefficients[index]
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(Rational::is_integer)
    }

    /// Pullback to a surface with more blow-ups.
    pub fn extended_to(&self, blowups: usize) -> Self {
        let mut c = self.clone();
        if blowups + 1 > c.coefficients.len() {
            c.coefficients.resize(blowups + 1, Rational::zero());
        }
        c
    }

    pub fn intersect(&self, other: &Self) -> Result<Rational, LatticeError> {
        intersect(self, other)
    }

    pub fn self_intersection(&self) -> Rational {
        form(&self.coefficients, &self.coefficients)
    }

    /// `K·C` for the canonical class of the same surface.
    pub fn canonical_degree(&self) -> Rational {
        let mut sum = Rational::from(-3) * &self.coefficients[0];
        for c in &self.coefficients[1..] {
            sum -= c;
        }
        sum
    }

    /// Arithmetic genus from adjunction, `(C² + K·C)/2 + 1`.
    pub fn adjunction_genus(&self) -> Rational {
        let two = Rational::from(2);
        (self.self_intersection() + self.canonical_degree()).checked_div(&two).expect("nonzero divisor")
            + Rational::one()
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        Self { coefficients: self.coefficients.iter().map(|c| c * k).collect() }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LatticeError> {
        same_dimension(self, other)?;
        Ok(Self { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect() })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LatticeError> {
        same_dimension(self, other)?;
        Ok(Self { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a - b).collect() })
    }
}

fn same_dimension(a: &DivisorClass, b: &DivisorClass) -> Result<(), LatticeError> {
    if a.coefficients.len() != b.coefficients.len() {
        return Err(LatticeError::DimensionMismatch { left: a.coefficients.len(), right: b.coefficients.len() });
    }
    Ok(())
}

fn form(a: &[Rational], b: &[Rational]) -> Rational {
    let mut sum = &a[0] * &b[0];
    for (x, y) in a[1..].iter().zip(&b[1..]) {
        sum -= &(x * y);
    }
    sum
}

/// The diagonal intersection form `diag(+1, −1, …, −1)`.
pub fn intersect(c1: &DivisorClass, c2: &DivisorClass) -> Result<Rational, LatticeError> {
    same_dimension(c1, c2)?;
    Ok(form(&c1.coefficients, &c2.coefficients))
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_add(rhs).expect("divisor classes on the same surface")
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_sub(rhs).expect("divisor classes on the same surface")
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scaled(&Rational::from(-1))
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scaled(self)
    }
}

/// Renders as `3H - 2E1 - E2`.
impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = if i == 0 { "H".to_string() } else { format!("E{i}") };
            let mag = c.abs();
            let body = if mag == Rational::one() { name } else { format!("{mag}{name}") };
            match (wrote, c.is_negative()) {
                (false, false) => write!(f, "{body}")?,
                (false, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, " + {body}")?,
                (true, true) => write!(f, " - {body}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveRole {
    ChainMember,
    MinusOneCurve,
    FiberComponent,
    Section,
    Bisection,
    Auxiliary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub name: String,
    pub class: DivisorClass,
    pub role: CurveRole,
}

/// A rational surface `P² ♯ n·P̄²` with a registry of named curve classes.
#[derive(Debug, Clone, Default)]
pub struct SurfaceModel {
    blowups: usize,
    curves: IndexMap<String, CurveRecord>,
}

impl SurfaceModel {
    pub fn projective_plane() -> Self {
        Self::default()
    }

    /// `P²` blown up `n` times with an empty registry.
    pub fn with_blowups(n: usize) -> Self {
        Self { blowups: n, curves: IndexMap::new() }
    }

    pub fn blowups(&self) -> usize {
        self.blowups
    }

    /// Rank of `H²(Z, ℤ)`, i.e. `1 + n`.
    pub fn picard_rank(&self) -> usize {
        self.blowups + 1
    }

    /// Blow up one more point. Registered classes are pulled back; the
    /// returned class is the new exceptional curve.
    pub fn blow_up(&mut self) -> DivisorClass {
        self.blowups += 1;
        let n = self.blowups;
        for rec in self.curves.values_mut() {
            rec.class = rec.class.extended_to(n);
        }
        DivisorClass::exceptional(n, n)
    }

    pub fn canonical_class(&self) -> DivisorClass {
        DivisorClass::canonical(self.blowups)
    }

    /// `K² = 9 − n`.
    pub fn canonical_square(&self) -> Rational {
        self.canonical_class().self_intersection()
    }

    /// Topological Euler number `e = 3 + n` (`b₁ = b₃ = 0`).
    pub fn euler_number(&self) -> i64 {
        3 + self.blowups as i64
    }

    /// Class of the proper transform `dH − ΣmᵢEᵢ` of a plane curve of
    /// degree `d` with multiplicity `mᵢ ≥ 0` at the i-th blown-up point.
    pub fn proper_transform(&self, degree: i64, multiplicities: &[i64]) -> Result<DivisorClass, LatticeError> {
        if let Some((i, &m)) = multiplicities.iter().enumerate().find(|(_, &m)| m < 0) {
            return Err(LatticeError::NegativeMultiplicity { index: i + 1, value: m });
        }
        DivisorClass::from_degree_multiplicities(self.blowups, degree, multiplicities)
    }

    /// Register a named curve. Classes from a smaller surface are pulled back.
    pub fn register(
        &mut self,
        name: impl Into<String>,
        class: DivisorClass,
        role: CurveRole,
    ) -> Result<&CurveRecord, LatticeError> {
        let name = name.into();
        if self.curves.contains_key(&name) {
            return Err(LatticeError::DuplicateCurve(name));
        }
        if class.blowups() > self.blowups {
            return Err(LatticeError::DimensionMismatch { left: class.coefficients.len(), right: self.blowups + 1 });
        }
        let class = class.extended_to(self.blowups);
        if role == CurveRole::MinusOneCurve {
            let square = class.self_intersection();
            let canonical = class.canonical_degree();
            let minus_one = Rational::from(-1);
            if square != minus_one || canonical != minus_one {
                return Err(LatticeError::NotMinusOne { name, square: square.into(), canonical: canonical.into() });
            }
        }
        let record = CurveRecord { name: name.clone(), class, role };
        self.curves.insert(name.clone(), record);
        Ok(&self.curves[&name])
    }

    pub fn curve(&self, name: &str) -> Result<&CurveRecord, LatticeError> {
        self.curves.get(name).ok_or_else(|| LatticeError::UnknownCurve(name.to_string()))
    }

    pub fn curves(&self) -> impl Iterator<Item = &CurveRecord> {
        self.curves.values()
    }

    pub fn curves_with_role(&self, role: CurveRole) -> impl Iterator<Item = &CurveRecord> {
        self.curves.values().filter(move |c| c.role == role)
    }
}

/// Rank over ℚ of a family of classes of equal length.
pub fn rank(classes: &[DivisorClass]) -> usize {
    let mut rows: Vec<Vec<Rational>> = classes.iter().map(|c| c.coefficients.clone()).collect();
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip().expect("nonzero pivot");
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] * &inv;
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &(&factor * p);
                }
            }
        }
        rank += 1;
    }
    rank
}
