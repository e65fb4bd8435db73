//! The explicit pencil of plane cubics over ℚ(√3) and its certificates.
//!
//! Generators: `G₁ = (y − √3x)(y + √3x)(2y − 3z)`, three lines, and
//! `G₂ = x·(x² + (y − 2z)² − z²)`, a line times a conic. Nothing here
//! searches for points: every check evaluates exhibited data exactly.

mod form;

pub use form::{HomogeneousForm, Monomial, ProjectivePoint};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactError, QuadraticFieldElement as Q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PencilError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("cannot add forms of degree {left} and {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("[0:0:0] is not a projective point")]
    ZeroPoint,
    #[error("a line needs two distinct points, got {0} twice")]
    EqualPoints(String),
    #[error("{point} does not lie on the curve")]
    NotOnCurve { point: String },
    #[error("expected a nonzero cubic form, got degree {degree}")]
    NotCubic { degree: u32 },
    #[error("[0:0] is not a pencil parameter")]
    ZeroParameter,
}

/// The field of definition of the pencil.
pub const D: u64 = 3;

/// Monomials in the order `x³, x²y, x²z, xy², xyz, xz², y³, y²z, yz², z³`.
pub const CUBIC_MONOMIALS: [Monomial; 10] =
    [[3, 0, 0], [2, 1, 0], [2, 0, 1], [1, 2, 0], [1, 1, 1], [1, 0, 2], [0, 3, 0], [0, 2, 1], [0, 1, 2], [0, 0, 3]];

/// A nonzero ternary cubic form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubicForm(HomogeneousForm);

impl CubicForm {
    pub fn new(form: HomogeneousForm) -> Result<Self, PencilError> {
        if form.is_zero() || form.degree() != 3 {
            return Err(PencilError::NotCubic { degree: form.degree() });
        }
        Ok(Self(form))
    }

    pub fn from_coefficients(coefficients: [Q; 10]) -> Result<Self, PencilError> {
        let d = coefficients[0].d();
        let mut f = HomogeneousForm::zero(d, 3);
        for (c, m) in coefficients.into_iter().zip(CUBIC_MONOMIALS) {
            f = f.try_add(&HomogeneousForm::monomial(c, m))?;
        }
        Self::new(f)
    }

    pub fn coefficients(&self) -> [Q; 10] {
        CUBIC_MONOMIALS.map(|m| self.0.coefficient(m))
    }

    pub fn form(&self) -> &HomogeneousForm {
        &self.0
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn evaluate(f: &CubicForm, p: &ProjectivePoint) -> Result<Q, PencilError> {
    f.0.evaluate(p)
}

pub fn gradient(f: &CubicForm, p: &ProjectivePoint) -> Result<[Q; 3], PencilError> {
    let [fx, fy, fz] = f.0.gradient();
    Ok([fx.evaluate(p)?, fy.evaluate(p)?, fz.evaluate(p)?])
}

/// Ordinary double point test: vanishing gradient and a nonzero 2×2
/// Hessian minor in the chart of the last nonzero coordinate.
pub fn is_node(f: &CubicForm, p: &ProjectivePoint) -> Result<bool, PencilError> {
    if !evaluate(f, p)?.is_zero() {
        return Err(PencilError::NotOnCurve { point: p.to_string() });
    }
    if !gradient(f, p)?.iter().all(Q::is_zero) {
        return Ok(false);
    }
    let chart = p.chart();
    let vars: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
    let second = |i: usize, j: usize| f.0.partial(i).partial(j).evaluate(p);
    let (a, b) = (vars[0], vars[1]);
    let det = second(a, a)?.try_mul(&second(b, b)?)?.try_sub(&second(a, b)?.try_mul(&second(a, b)?)?)?;
    Ok(!det.is_zero())
}

/// The linear form `(p₁ × p₂)·(x, y, z)`.
pub fn line_through(p1: &ProjectivePoint, p2: &ProjectivePoint) -> Result<HomogeneousForm, PencilError> {
    if p1 == p2 {
        return Err(PencilError::EqualPoints(p1.to_string()));
    }
    let [a, b, c] = p1.cross(p2)?;
    HomogeneousForm::linear(a, b, c)
}

/// `a + b√3`.
pub fn qe(a: i64, b: i64) -> Q {
    Q::from_integers(a, b, D).expect("3 is square-free")
}

/// The point `[x₀ + x₁√3 : y₀ + y₁√3 : z₀ + z₁√3]`.
pub fn point(x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> ProjectivePoint {
    ProjectivePoint::new(qe(x.0, x.1), qe(y.0, y.1), qe(z.0, z.1)).expect("nonzero point")
}

/// A parameter `[λ : μ]` of the pencil `λG₁ + μG₂`.
#[derive(Clone, Debug)]
pub struct PencilParameter {
    pub lambda: Q,
    pub mu: Q,
}

impl PencilParameter {
    pub fn new(lambda: Q, mu: Q) -> Result<Self, PencilError> {
        if lambda.is_zero() && mu.is_zero() {
            return Err(PencilError::ZeroParameter);
        }
        if lambda.d() != mu.d() {
            return Err(ExactError::MismatchedField { left: lambda.d(), right: mu.d() }.into());
        }
        Ok(Self { lambda, mu })
    }
}

impl PartialEq for PencilParameter {
    fn eq(&self, other: &Self) -> bool {
        match (self.lambda.try_mul(&other.mu), self.mu.try_mul(&other.lambda)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for PencilParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.lambda, self.mu)
    }
}

pub struct Pencil {
    pub g1: CubicForm,
    pub g2: CubicForm,
}

fn lin(a: Q, b: Q, c: Q) -> HomogeneousForm {
    HomogeneousForm::linear(a, b, c).expect("same field")
}

impl Pencil {
    pub fn builtin() -> Self {
        let z0 = || qe(0, 0);
        let la = lin(qe(0, -1), qe(1, 0), z0());
        let lb = lin(qe(0, 1), qe(1, 0), z0());
        let lc = lin(z0(), qe(2, 0), qe(-3, 0));
        let g1 = la.try_mul(&lb).and_then(|f| f.try_mul(&lc)).expect("same field");
        let x = HomogeneousForm::variable(D, 0).expect("d = 3");
        let y2z = lin(z0(), qe(1, 0), qe(-2, 0));
        let z = HomogeneousForm::variable(D, 2).expect("d = 3");
        let conic = x
            .try_mul(&x)
            .and_then(|f| f.try_add(&y2z.try_mul(&y2z)?))
            .and_then(|f| f.try_add(&z.try_mul(&z)?.scale(&qe(-1, 0))?))
            .expect("same field");
        let g2 = x.try_mul(&conic).expect("same field");
        Self { g1: CubicForm::new(g1).expect("cubic"), g2: CubicForm::new(g2).expect("cubic") }
    }

    pub fn member(&self, t: &PencilParameter) -> Result<CubicForm, PencilError> {
        let f = self.g1.form().scale(&t.lambda)?.try_add(&self.g2.form().scale(&t.mu)?)?;
        CubicForm::new(f)
    }

    /// The members listed as singular, with the points exhibiting it.
    pub fn listed_singular_members() -> Vec<(&'static str, PencilParameter, Vec<ProjectivePoint>)> {
        let param = |l: (i64, i64), m: (i64, i64)| PencilParameter::new(qe(l.0, l.1), qe(m.0, m.1)).expect("nonzero");
        vec![
            (
                "G1",
                param((1, 0), (0, 0)),
                vec![point((0, 0), (0, 0), (1, 0)), point((0, 1), (3, 0), (2, 0)), point((0, -1), (3, 0), (2, 0))],
            ),
            ("G2", param((0, 0), (1, 0)), vec![point((0, 0), (3, 0), (1, 0)), point((0, 0), (1, 0), (1, 0))]),
            ("F1", param((2, 0), (0, 3)), vec![node_f1()]),
            ("F2", param((2, 0), (0, -3)), vec![node_f2()]),
        ]
    }
}

pub fn node_f1() -> ProjectivePoint {
    point((0, 1), (0, 0), (-1, 0))
}

pub fn node_f2() -> ProjectivePoint {
    point((0, 1), (0, 0), (1, 0))
}

pub fn base_point_q() -> ProjectivePoint {
    point((0, 0), (3, 0), (2, 0))
}

/// The four base points `p, q, r, s`.
pub fn base_points() -> Vec<(&'static str, ProjectivePoint)> {
    vec![
        ("p", point((0, 1), (3, 0), (2, 0))),
        ("q", base_point_q()),
        ("r", point((0, -1), (3, 0), (2, 0))),
        ("s", point((0, 0), (0, 0), (1, 0))),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularPointCheck {
    pub point: String,
    pub on_curve: bool,
    pub gradient_zero: bool,
    pub node: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MemberCertificate {
    pub parameter: String,
    pub member: Option<String>,
    pub points: Vec<SingularPointCheck>,
    /// `false` with no points means no certificate is held, not smoothness.
    pub certified: bool,
}

pub fn member_singular_check(params: &PencilParameter) -> Result<MemberCertificate, PencilError> {
    let pencil = Pencil::builtin();
    let listed = Pencil::listed_singular_members();
    let Some((name, _, points)) = listed.iter().find(|(_, t, _)| t == params) else {
        return Ok(MemberCertificate { parameter: params.to_string(), member: None, points: vec![], certified: false });
    };
    let f = pencil.member(params)?;
    let mut checks = Vec::new();
    for p in points {
        let on_curve = evaluate(&f, p)?.is_zero();
        let gradient_zero = on_curve && gradient(&f, p)?.iter().all(Q::is_zero);
        let node = on_curve && is_node(&f, p)?;
        checks.push(SingularPointCheck { point: p.to_string(), on_curve, gradient_zero, node });
    }
    let nodal_member = matches!(*name, "F1" | "F2");
    let certified = checks.iter().all(|c| c.gradient_zero && (!nodal_member || c.node));
    Ok(MemberCertificate { parameter: params.to_string(), member: Some(name.to_string()), points: checks, certified })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasePointCheck {
    pub point: String,
    pub g1: String,
    pub g2: String,
    pub on_both: bool,
}

pub fn base_point_check(points: &[ProjectivePoint]) -> Result<Vec<BasePointCheck>, PencilError> {
    let pencil = Pencil::builtin();
    points
        .iter()
        .map(|p| {
            let v1 = evaluate(&pencil.g1, p)?;
            let v2 = evaluate(&pencil.g2, p)?;
            Ok(BasePointCheck {
                point: p.to_string(),
                on_both: v1.is_zero() && v2.is_zero(),
                g1: v1.to_string(),
                g2: v2.to_string(),
            })
        })
        .collect()
}

/// One line of the pencil report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Every certificate for the built-in pencil.
pub fn pencil_certificates() -> Result<Vec<Certificate>, PencilError> {
    let pencil = Pencil::builtin();
    let mut out = Vec::new();
    let mut push = |name: String, passed: bool, detail: String| out.push(Certificate { name, passed, detail });

    for (name, t, _) in Pencil::listed_singular_members() {
        let m = member_singular_check(&t)?;
        let detail = m
            .points
            .iter()
            .map(|c| format!("{} singular={} node={}", c.point, c.gradient_zero, c.node))
            .collect::<Vec<_>>()
            .join("; ");
        push(format!("singular member {name} at {t}"), m.certified, detail);
    }

    let f1 = pencil.member(&Pencil::listed_singular_members()[2].1)?;
    let f2 = pencil.member(&Pencil::listed_singular_members()[3].1)?;
    for (name, f, p) in [("F1", &f1, node_f1()), ("F2", &f2, node_f2())] {
        let node = evaluate(f, &p)?.is_zero() && is_node(f, &p)?;
        push(format!("{name} has a node at {p}"), node, format!("{name} = {f}"));
    }

    let m = line_through(&base_point_q(), &node_f1())?;
    let at = |p: &ProjectivePoint| m.evaluate(p);
    let (mq, mn1, mn2) = (at(&base_point_q())?, at(&node_f1())?, at(&node_f2())?);
    push(format!("M passes through q = {}", base_point_q()), mq.is_zero(), format!("M = {m}, M(q) = {mq}"));
    push(format!("M passes through the node {} of F1", node_f1()), mn1.is_zero(), format!("M = {mn1}"));
    push(format!("the node {} of F2 is off M", node_f2()), !mn2.is_zero(), format!("M({}) = {mn2}", node_f2()));

    let names = base_points();
    let pts: Vec<ProjectivePoint> = names.iter().map(|(_, p)| p.clone()).collect();
    for ((label, _), c) in names.iter().zip(base_point_check(&pts)?) {
        push(format!("base point {label} = {}", c.point), c.on_both, format!("G1 = {}, G2 = {}", c.g1, c.g2));
    }
    let control = point((1, 0), (1, 0), (1, 0));
    let c = &base_point_check(std::slice::from_ref(&control))?[0];
    push(format!("{control} is not a base point"), !c.on_both, format!("G1 = {}, G2 = {}", c.g1, c.g2));

    let smooth = point((1, 0), (2, 0), (1, 0));
    let grad = gradient(&pencil.g2, &smooth)?;
    let on = evaluate(&pencil.g2, &smooth)?.is_zero();
    push(
        format!("G2 is smooth at {smooth} on the conic"),
        on && !grad.iter().all(Q::is_zero),
        format!("grad = ({}, {}, {})", grad[0], grad[1], grad[2]),
    );
    Ok(out)
}

/// A rational number as an element of ℚ(√3).
pub fn rational_element(r: Rational) -> Q {
    Q::rational(r, D).expect("3 is square-free")
}
