//! Relations on the boundary meridian coming from curves in the complement
//! of the chain, certified in the abelianization.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blowdown::ChainEmbedding;
use crate::exact::{exact_sqrt, gcd_list, Rational};
use crate::lattice::{LatticeError, SurfaceModel};
use crate::tchain::{exponent_sequence, Chain};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VanKampenError {
    #[error("chain index {index} is outside 1..={len}")]
    BadIndex { index: usize, len: usize },
    #[error("replay step '{step}' failed: computed {computed}, expected {expected}")]
    ReplayMismatch { step: String, computed: String, expected: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// How a curve in the complement constrains the meridians `αᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ComplementRelation {
    /// A disk meeting only `uᵢ`, once: `αᵢ = 1`.
    SingleMeet { member: usize },
    /// `αᵢ` and `αⱼ` are conjugate.
    IdentifyPair { left: usize, right: usize },
    /// A curve meeting `uᵢ` twice with matching orientations: `αᵢ² = 1`.
    DoubleMeet { member: usize },
}

impl ComplementRelation {
    fn indices(&self) -> Vec<usize> {
        match *self {
            Self::SingleMeet { member } | Self::DoubleMeet { member } => vec![member],
            Self::IdentifyPair { left, right } => vec![left, right],
        }
    }
}

/// Exponent `e` with `α₁^e = 1` implied by the relation, reduced mod `n`.
///
/// For a conjugate pair the class of `cᵢ − cⱼ` is only defined up to sign,
/// so the smaller of the two representatives is returned.
pub fn relation_exponent(chain: &Chain, r: &ComplementRelation) -> Result<BigInt, VanKampenError> {
    let len = chain.len();
    if let Some(&index) = r.indices().iter().find(|&&i| i == 0 || i > len) {
        return Err(VanKampenError::BadIndex { index, len });
    }
    let seq = exponent_sequence(chain);
    let n = &seq.n;
    Ok(match *r {
        ComplementRelation::SingleMeet { member } => seq.get(member).mod_floor(n),
        ComplementRelation::DoubleMeet { member } => (seq.get(member) * 2u32).mod_floor(n),
        ComplementRelation::IdentifyPair { left, right } => {
            let d = (seq.get(left) - seq.get(right)).mod_floor(n);
            let other = n - &d;
            if other < d && !d.is_zero() {
                other
            } else {
                d
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pi1Verdict {
    H1TrivialAndGeneratorCoprime,
    H1EqualsZg,
}

pub const PI1_ASSUMPTIONS: [&str; 2] = [
    "pi_1 of the lens-space boundary surjects onto pi_1 of the rational ball",
    "the rational surface Z is simply connected, so pi_1 of the complement is normally generated by the meridian",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pi1Certificate {
    #[serde(with = "crate::exact::bigint_str")]
    pub n: BigInt,
    #[serde(with = "crate::exact::bigint_str::vec")]
    pub exponents: Vec<BigInt>,
    #[serde(with = "crate::exact::bigint_str")]
    pub g: BigInt,
    pub verdict: Pi1Verdict,
    pub assumptions: Vec<String>,
}

impl Pi1Certificate {
    pub fn certified(&self) -> bool {
        self.verdict == Pi1Verdict::H1TrivialAndGeneratorCoprime
    }
}

pub fn h1_certificate(chain: &Chain, relations: &[ComplementRelation]) -> Result<Pi1Certificate, VanKampenError> {
    let n = exponent_sequence(chain).n;
    let exponents = relations.iter().map(|r| relation_exponent(chain, r)).collect::<Result<Vec<_>, _>>()?;
    let mut all = vec![n.clone()];
    all.extend(exponents.iter().cloned());
    let g = gcd_list(&all).expect("list contains n");
    let verdict = if g.is_one() { Pi1Verdict::H1TrivialAndGeneratorCoprime } else { Pi1Verdict::H1EqualsZg };
    Ok(Pi1Certificate {
        n,
        exponents,
        g,
        verdict,
        assumptions: PI1_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Argument {
    Main,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayStep {
    pub statement: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub argument: Argument,
    pub steps: Vec<ReplayStep>,
}

struct Replay {
    steps: Vec<ReplayStep>,
}

impl Replay {
    fn check(&mut self, statement: impl Into<String>, computed: &BigInt, expected: i64) -> Result<(), VanKampenError> {
        let statement = statement.into();
        if *computed != BigInt::from(expected) {
            return Err(VanKampenError::ReplayMismatch {
                step: statement,
                computed: computed.to_string(),
                expected: expected.to_string(),
            });
        }
        self.steps.push(ReplayStep { statement, value: computed.to_string() });
        Ok(())
    }
}

/// Replays the printed exponent arithmetic against `chain`; any mismatch is an error.
pub fn replay_argument(which: Argument, chain: &Chain) -> Result<ReplayReport, VanKampenError> {
    if chain.len() < 12 {
        return Err(VanKampenError::BadIndex { index: 12, len: chain.len() });
    }
    let seq = exponent_sequence(chain);
    let mut r = Replay { steps: Vec::new() };
    match which {
        Argument::Main => {
            let (c3, c6, c12) = (seq.get(3), seq.get(6), seq.get(12));
            r.check("c3", c3, 5)?;
            r.check("c6", c6, 26)?;
            r.check("c12", c12, 9574)?;
            r.check("n", &seq.n, 63504)?;
            let residue = c12.mod_floor(c6);
            r.check("9574 mod 26", &residue, 6)?;
            // smallest m with 6m ≡ 0 (mod 26); then α^(5m) ~ α^(6m) = 1
            let m = c6 / c6.gcd(&residue);
            r.check("26 / gcd(26, 6)", &m, 13)?;
            r.check("6*13 mod 26", &(&residue * &m).mod_floor(c6), 0)?;
            let power = c3 * &m;
            r.check("5*13", &power, 65)?;
            r.check("gcd(65, 63504)", &power.gcd(&seq.n), 1)?;
        }
        Argument::Second => {
            let c12 = seq.get(12);
            r.check("c12", c12, 1276)?;
            let doubled = c12 * 2u32;
            r.check("2*1276", &doubled, 2552)?;
            r.check("8*11*29", &BigInt::from(8 * 11 * 29), 2552)?;
            r.check("n", &seq.n, 33489)?;
            let root = exact_sqrt(&seq.n).unwrap_or_else(BigInt::zero);
            r.check("sqrt(33489)", &root, 183)?;
            r.check("3*61", &BigInt::from(3 * 61), 183)?;
            r.check("gcd(2552, 33489)", &doubled.gcd(&seq.n), 1)?;
        }
    }
    Ok(ReplayReport { argument: which, steps: r.steps })
}

pub fn main_chain() -> Chain {
    Chain::new(vec![3, 2, 3, 2, 2, 2, 4, 2, 6, 2, 6, 4, 2]).expect("valid chain")
}

pub fn second_chain() -> Chain {
    Chain::new(vec![2, 2, 2, 3, 2, 2, 2, 4, 2, 6, 2, 6, 5]).expect("valid chain")
}

pub fn replay_paper_argument(which: Argument) -> Result<ReplayReport, VanKampenError> {
    let chain = match which {
        Argument::Main => main_chain(),
        Argument::Second => second_chain(),
    };
    replay_argument(which, &chain)
}

/// Generators, plumbing relations `α_{i−1}α_{i+1} = αᵢ^{bᵢ}`, the exponent table and `n`.
pub fn presentation_dump(chain: &Chain) -> String {
    let k = chain.len();
    let seq = exponent_sequence(chain);
    let alpha = |i: usize| format!("a{i}");
    let mut out = String::new();
    let gens: Vec<String> = (1..=k).map(alpha).collect();
    writeln!(out, "generators: {}", gens.join(", ")).unwrap();
    writeln!(out, "relations:").unwrap();
    for i in 1..=k {
        let mut lhs = Vec::new();
        if i > 1 {
            lhs.push(alpha(i - 1));
        }
        if i < k {
            lhs.push(alpha(i + 1));
        }
        let lhs = if lhs.is_empty() { "1".to_string() } else { lhs.join("*") };
        writeln!(out, "  {lhs} = {}^{}", alpha(i), chain.entry(i)).unwrap();
    }
    writeln!(out, "exponents (a_i = a1^c_i):").unwrap();
    for (i, c) in seq.c.iter().enumerate() {
        writeln!(out, "  c{} = {c}", i + 1).unwrap();
    }
    writeln!(out, "n = {}", seq.n).unwrap();
    out
}

/// Intersection pattern a witness curve needs for a relation: `(index, W·G_index)`
/// with every other chain member disjoint from `W`.
fn witness_pattern(r: &ComplementRelation) -> Vec<(usize, i64)> {
    match *r {
        ComplementRelation::SingleMeet { member } => vec![(member, 1)],
        ComplementRelation::DoubleMeet { member } => vec![(member, 2)],
        ComplementRelation::IdentifyPair { left, right } => vec![(left, 1), (right, 1)],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessMismatch {
    pub member: String,
    pub expected: Rational,
    pub found: Rational,
}

/// Compares the witness curve's products with the chain members against
/// the pattern the relation requires.
pub fn witness_incidence(
    s: &SurfaceModel,
    e: &ChainEmbedding,
    r: &ComplementRelation,
    witness: &str,
) -> Result<Vec<WitnessMismatch>, VanKampenError> {
    let len = e.chain.len();
    if let Some(&index) = r.indices().iter().find(|&&i| i == 0 || i > len) {
        return Err(VanKampenError::BadIndex { index, len });
    }
    let w = &s.curve(witness)?.class;
    let pattern = witness_pattern(r);
    let mut out = Vec::new();
    for (i, name) in e.members.iter().enumerate() {
        let expected = pattern.iter().find(|(j, _)| *j == i + 1).map_or(0, |&(_, m)| m);
        let found = w.intersect(&s.curve(name)?.class)?;
        let expected = Rational::from(expected);
        if found != expected {
            out.push(WitnessMismatch { member: name.clone(), expected, found });
        }
    }
    Ok(out)
}
