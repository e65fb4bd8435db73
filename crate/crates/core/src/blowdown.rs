//! Contraction of an embedded chain: discrepancies, the pulled-back
//! canonical class and the numerical invariants of the smoothing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Rational;
use crate::lattice::{rank, CurveRole, DivisorClass, LatticeError, SurfaceModel};
use crate::tchain::{wahl_recognize, Chain};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowdownError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("chain has {entries} entries but {members} member curves")]
    LengthMismatch { entries: usize, members: usize },
    #[error("{0} is not a Wahl chain")]
    NotWahl(Chain),
    #[error("discrepancy system is singular at row {0}")]
    Singular(usize),
    #[error("discrepancy d{index} = {value} is outside (0, 1)")]
    DiscrepancyOutOfRange { index: usize, value: Rational },
    #[error("chain embedding has {0} failed checks")]
    EmbeddingFailed(usize),
    #[error("(f*K).G{index} = {value}, expected 0")]
    NonzeroOnChain { index: usize, value: Rational },
    #[error("cross-check failed for {what}: {left} != {right}")]
    CrossCheck { what: &'static str, left: String, right: String },
    #[error("unknown fiber type '{0}' (expected I<n>, nodal or cusp)")]
    UnknownFiberType(String),
}

/// Chain data together with the registry names of `G₁ … G_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainEmbedding {
    pub chain: Chain,
    pub members: Vec<String>,
}

impl ChainEmbedding {
    pub fn new(chain: Chain, members: Vec<String>) -> Result<Self, BlowdownError> {
        if chain.len() != members.len() {
            return Err(BlowdownError::LengthMismatch { entries: chain.len(), members: members.len() });
        }
        Ok(Self { chain, members })
    }

    fn classes<'a>(&self, s: &'a SurfaceModel) -> Result<Vec<&'a DivisorClass>, BlowdownError> {
        self.members.iter().map(|m| Ok(&s.curve(m)?.class)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum EmbeddingFailure {
    SelfIntersection { member: String, expected: Rational, found: Rational },
    Adjacency { left: String, right: String, found: Rational },
    Disjointness { left: String, right: String, found: Rational },
}

impl fmt::Display for EmbeddingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SelfIntersection { member, expected, found } => {
                write!(f, "{member}^2 = {found}, expected {expected}")
            }
            Self::Adjacency { left, right, found } => write!(f, "{left}.{right} = {found}, expected 1"),
            Self::Disjointness { left, right, found } => write!(f, "{left}.{right} = {found}, expected 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub self_intersections: Vec<Rational>,
    pub failures: Vec<EmbeddingFailure>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `Gᵢ² = −bᵢ`, `Gᵢ·Gᵢ₊₁ = 1` and `Gᵢ·Gⱼ = 0` for `|i − j| ≥ 2`.
pub fn verify_chain_embedding(s: &SurfaceModel, e: &ChainEmbedding) -> Result<EmbeddingReport, BlowdownError> {
    let classes = e.classes(s)?;
    let mut failures = Vec::new();
    let mut self_intersections = Vec::with_capacity(classes.len());
    for (i, g) in classes.iter().enumerate() {
        let sq = g.self_intersection();
        let expected = Rational::from(-(e.chain.entry(i + 1) as i64));
        if sq != expected {
            failures.push(EmbeddingFailure::SelfIntersection {
                member: e.members[i].clone(),
                expected,
                found: sq.clone(),
            });
        }
        self_intersections.push(sq);
        for (j, h) in classes.iter().enumerate().skip(i + 1) {
            let p = g.intersect(h)?;
            let (left, right) = (e.members[i].clone(), e.members[j].clone());
            if j == i + 1 {
                if p != Rational::one() {
                    failures.push(EmbeddingFailure::Adjacency { left, right, found: p });
                }
            } else if !p.is_zero() {
                failures.push(EmbeddingFailure::Disjointness { left, right, found: p });
            }
        }
    }
    Ok(EmbeddingReport { self_intersections, failures })
}

/// Exact solution of `d_{i−1} − bᵢdᵢ + d_{i+1} = −(bᵢ − 2)`, `d₀ = d_{k+1} = 0`.
///
/// The matrix is negative definite, so elimination without pivoting
/// never meets a zero pivot on a valid chain.
pub fn solve_discrepancies(chain: &Chain) -> Result<Vec<Rational>, BlowdownError> {
    let k = chain.len();
    let b: Vec<Rational> = chain.entries().iter().map(|&x| Rational::from(x as i64)).collect();
    let two = Rational::from(2);
    // Forward sweep over rows with diagonal −bᵢ and unit off-diagonals.
    let mut diag = Vec::with_capacity(k);
    let mut rhs = Vec::with_capacity(k);
    for i in 0..k {
        let mut di = -&b[i];
        let mut ri = &two - &b[i];
        if i > 0 {
            let m = Rational::one().checked_div(&diag[i - 1]).map_err(|_| BlowdownError::Singular(i))?;
            di -= &m;
            ri -= &(&m * &rhs[i - 1]);
        }
        if di.is_zero() {
            return Err(BlowdownError::Singular(i + 1));
        }
        diag.push(di);
        rhs.push(ri);
    }
    let mut d = vec![Rational::zero(); k];
    for i in (0..k).rev() {
        let mut num = rhs[i].clone();
        if i + 1 < k {
            num -= &d[i + 1];
        }
        d[i] = num.checked_div(&diag[i]).map_err(|_| BlowdownError::Singular(i + 1))?;
    }
    Ok(d)
}

/// Discrepancy vector of a Wahl chain, each entry in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyVector {
    pub d: Vec<Rational>,
}

impl DiscrepancyVector {
    /// `Σ dⱼ(bⱼ − 2)`, which is `(f*K)² − K_Z²`.
    pub fn canonical_gain(&self, chain: &Chain) -> Rational {
        self.d.iter().zip(chain.entries()).map(|(d, &b)| d * &Rational::from(b as i64 - 2)).sum()
    }
}

pub fn discrepancies(chain: &Chain) -> Result<DiscrepancyVector, BlowdownError> {
    if wahl_recognize(chain).is_none() {
        return Err(BlowdownError::NotWahl(chain.clone()));
    }
    let d = solve_discrepancies(chain)?;
    let one = Rational::one();
    if let Some((i, v)) = d.iter().enumerate().find(|(_, v)| !v.is_positive() || **v >= one) {
        return Err(BlowdownError::DiscrepancyOutOfRange { index: i + 1, value: v.clone() });
    }
    Ok(DiscrepancyVector { d })
}

/// `K_Z + Σ dⱼGⱼ`, checked to be orthogonal to every chain member.
pub fn pullback_canonical(s: &SurfaceModel, e: &ChainEmbedding) -> Result<DivisorClass, BlowdownError> {
    let report = verify_chain_embedding(s, e)?;
    if !report.passed() {
        return Err(BlowdownError::EmbeddingFailed(report.failures.len()));
    }
    let d = solve_discrepancies(&e.chain)?;
    let classes = e.classes(s)?;
    let mut pullback = s.canonical_class();
    for (dj, g) in d.iter().zip(&classes) {
        pullback = &pullback + &g.scaled(dj);
    }
    for (i, g) in classes.iter().enumerate() {
        let v = pullback.intersect(g)?;
        if !v.is_zero() {
            return Err(BlowdownError::NonzeroOnChain { index: i + 1, value: v });
        }
    }
    Ok(pullback)
}

/// Which global checks apply to a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionContext {
    /// Built from a rational elliptic surface; `p_g = q = 0`, `χ = 1`.
    EllipticFibration,
    /// No geometric context; only the contraction arithmetic is reported.
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum NoetherCheck {
    Holds { total: i64 },
    ContextChecksSkipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub k2_z: Rational,
    pub k2_x: Rational,
    pub chain_length: usize,
    pub e_z: i64,
    pub e_x: i64,
    pub b2_drop: usize,
    pub chi_h: Option<i64>,
    pub p_g: Option<i64>,
    pub irregularity: Option<i64>,
    pub noether: NoetherCheck,
}

pub fn invariant_report(
    s: &SurfaceModel,
    e: &ChainEmbedding,
    context: ConstructionContext,
) -> Result<InvariantReport, BlowdownError> {
    let dv = discrepancies(&e.chain)?;
    let pullback = pullback_canonical(s, e)?;
    let k = e.chain.len();
    let k2_z = s.canonical_square();
    let k2_x = pullback.self_intersection();
    let by_gain = &k2_z + &dv.canonical_gain(&e.chain);
    let by_count = &k2_z + &Rational::from(k as i64);
    for (what, other) in [("K_X^2 via discrepancies", &by_gain), ("K_X^2 = K_Z^2 + k", &by_count)] {
        if &k2_x != other {
            return Err(BlowdownError::CrossCheck { what, left: k2_x.to_string(), right: other.to_string() });
        }
    }
    let e_z = s.euler_number();
    let e_x = e_z - k as i64;
    let (chi_h, p_g, irregularity, noether) = match context {
        ConstructionContext::Generic => (None, None, None, NoetherCheck::ContextChecksSkipped),
        ConstructionContext::EllipticFibration => {
            let total = &k2_x + &Rational::from(e_x);
            if total != Rational::from(12) {
                return Err(BlowdownError::CrossCheck {
                    what: "Noether K^2 + e = 12",
                    left: total.to_string(),
                    right: "12".into(),
                });
            }
            (Some(1), Some(0), Some(0), NoetherCheck::Holds { total: 12 })
        }
    };
    Ok(InvariantReport { k2_z, k2_x, chain_length: k, e_z, e_x, b2_drop: k, chi_h, p_g, irregularity, noether })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Positivity {
    Positive,
    /// A chain member; contracted, so zero is required.
    ExpectedZero,
    /// Zero on a curve that survives the contraction.
    Zero,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityEntry {
    pub curve: String,
    pub role: CurveRole,
    pub product: Rational,
    pub status: Positivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NefAuditReport {
    pub k2_x: Rational,
    pub table: Vec<PositivityEntry>,
    pub minus_one_positive: bool,
    pub no_negative: bool,
    /// Rank of the span of the (−1)-curves and chain members.
    pub span_rank: usize,
    pub picard_rank: usize,
    pub note: &'static str,
}

impl NefAuditReport {
    pub fn passed(&self) -> bool {
        self.k2_x.is_positive() && self.minus_one_positive && self.no_negative
    }

    pub fn spans(&self) -> bool {
        self.span_rank == self.picard_rank
    }
}

pub const NEF_AUDIT_NOTE: &str =
    "positivity is checked over the registered curves only; this is not an effective-cone computation";

pub fn nef_ample_audit(s: &SurfaceModel, e: &ChainEmbedding) -> Result<NefAuditReport, BlowdownError> {
    let pullback = pullback_canonical(s, e)?;
    let mut table = Vec::new();
    for rec in s.curves() {
        let product = pullback.intersect(&rec.class)?;
        let in_chain = e.members.contains(&rec.name);
        let status = if product.is_positive() {
            Positivity::Positive
        } else if product.is_negative() {
            Positivity::Negative
        } else if in_chain {
            Positivity::ExpectedZero
        } else {
            Positivity::Zero
        };
        table.push(PositivityEntry { curve: rec.name.clone(), role: rec.role, product, status });
    }
    let minus_one_positive =
        table.iter().filter(|t| t.role == CurveRole::MinusOneCurve).all(|t| t.status == Positivity::Positive);
    let no_negative = table.iter().all(|t| t.status != Positivity::Negative);
    let mut span: Vec<DivisorClass> = s.curves_with_role(CurveRole::MinusOneCurve).map(|c| c.class.clone()).collect();
    for g in e.classes(s)? {
        span.push(g.clone());
    }
    Ok(NefAuditReport {
        k2_x: pullback.self_intersection(),
        table,
        minus_one_positive,
        no_negative,
        span_rank: rank(&span),
        picard_rank: s.picard_rank(),
        note: NEF_AUDIT_NOTE,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EffectivityReport {
    pub matches: bool,
    pub all_nonnegative: bool,
    pub residual: DivisorClass,
}

impl EffectivityReport {
    pub fn passed(&self) -> bool {
        self.matches && self.all_nonnegative
    }
}

/// Compares `target` with `Σ cᵢCᵢ` over registered curves.
pub fn effectivity_check(
    s: &SurfaceModel,
    target: &DivisorClass,
    terms: &[(String, Rational)],
) -> Result<EffectivityReport, BlowdownError> {
    let mut sum = DivisorClass::zero(s.blowups());
    for (name, coef) in terms {
        sum = &sum + &s.curve(name)?.class.scaled(coef);
    }
    let residual = target.checked_sub(&sum)?;
    Ok(EffectivityReport {
        matches: residual.coefficients().iter().all(Rational::is_zero),
        all_nonnegative: terms.iter().all(|(_, c)| !c.is_negative()),
        residual,
    })
}

/// The singular fiber types accepted by the Euler audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberType {
    /// `I_n`, a cycle of `n` rational curves; `I₁` is the nodal cubic.
    I(u32),
    /// Cuspidal rational curve, Kodaira type II.
    Cusp,
}

impl FiberType {
    pub const NODAL: FiberType = FiberType::I(1);

    pub fn euler_number(self) -> u32 {
        match self {
            FiberType::I(n) => n,
            FiberType::Cusp => 2,
        }
    }
}

impl FromStr for FiberType {
    type Err = BlowdownError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        match lower.as_str() {
            "nodal" => return Ok(FiberType::NODAL),
            "cusp" | "cuspidal" | "ii" => return Ok(FiberType::Cusp),
            _ => {}
        }
        let digits = t
            .strip_prefix('I')
            .map(|r| r.strip_prefix('_').unwrap_or(r))
            .filter(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit()));
        match digits.and_then(|d| d.parse::<u32>().ok()) {
            Some(n) if n >= 1 => Ok(FiberType::I(n)),
            _ => Err(BlowdownError::UnknownFiberType(s.to_string())),
        }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::I(1) => write!(f, "nodal"),
            FiberType::I(n) => write!(f, "I{n}"),
            FiberType::Cusp => write!(f, "cusp"),
        }
    }
}

impl Serialize for FiberType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FiberType {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberAudit {
    pub fibers: Vec<FiberType>,
    pub total: u32,
    pub expected: u32,
}

impl FiberAudit {
    pub fn passed(&self) -> bool {
        self.total == self.expected
    }
}

/// Euler numbers of the singular fibers of a rational elliptic surface sum to 12.
pub fn fiber_euler_audit(fibers: &[FiberType]) -> FiberAudit {
    FiberAudit { fibers: fibers.to_vec(), total: fibers.iter().map(|f| f.euler_number()).sum(), expected: 12 }
}
