//! Hirzebruch–Jung continued fractions, Wahl chains and lens-space data.
//!
//! A chain `[b₁, …, b_k]` lists the magnitudes of the self-intersections of
//! a linear chain of rational curves, `b₁` being the curve labelled `u₁`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::exact_sqrt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("a chain needs at least one entry")]
    Empty,
    #[error("chain entry b{index} = {value} is smaller than 2")]
    EntryTooSmall { index: usize, value: u64 },
    #[error("invalid pair (n, q) = ({n}, {q}): need 0 < q < n")]
    OutOfRange { n: BigInt, q: BigInt },
    #[error("invalid pair (n, q) = ({n}, {q}): gcd is {gcd}, not 1")]
    NotCoprime { n: BigInt, q: BigInt, gcd: BigInt },
    #[error("invalid Wahl parameters (p, q) = ({p}, {q}): need p ≥ 2, 0 < q < p, gcd(p, q) = 1")]
    InvalidWahl { p: BigInt, q: BigInt },
}

/// A linear chain `[b₁, …, b_k]` with every `bᵢ ≥ 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Chain(Vec<u64>);

impl Chain {
    pub fn new(entries: Vec<u64>) -> Result<Self, ChainError> {
        if entries.is_empty() {
            return Err(ChainError::Empty);
        }
        if let Some((i, &b)) = entries.iter().enumerate().find(|(_, &b)| b < 2) {
            return Err(ChainError::EntryTooSmall { index: i + 1, value: b });
        }
        Ok(Chain(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry `b_i`, 1-based.
    pub fn entry(&self, i: usize) -> u64 {
        self.0[i - 1]
    }

    pub fn reversed(&self) -> Chain {
        Chain(self.0.iter().rev().copied().collect())
    }
}

impl TryFrom<Vec<u64>> for Chain {
    type Error = ChainError;
    fn try_from(v: Vec<u64>) -> Result<Self, ChainError> {
        Chain::new(v)
    }
}

impl From<Chain> for Vec<u64> {
    fn from(c: Chain) -> Vec<u64> {
        c.0
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parameters `(p, q)` of the T-singularity `1/p²(1, pq − 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WahlParams {
    #[serde(with = "crate::exact::bigint_str")]
    pub p: BigInt,
    #[serde(with = "crate::exact::bigint_str")]
    pub q: BigInt,
}

impl WahlParams {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, ChainError> {
        let (p, q) = (p.into(), q.into());
        let valid = p >= BigInt::from(2) && q.is_positive() && q < p && p.gcd(&q).is_one();
        if !valid {
            return Err(ChainError::InvalidWahl { p, q });
        }
        Ok(Self { p, q })
    }

    /// `(p², pq − 1)`.
    pub fn lens_pair(&self) -> (BigInt, BigInt) {
        (&self.p * &self.p, &self.p * &self.q - 1)
    }

    pub fn chain(&self) -> Chain {
        let (n, q) = self.lens_pair();
        hj_expand(&n, &q).expect("Wahl parameters give a valid lens pair")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundarySide {
    Neighborhood,
    Complement,
}

/// Lens space `L(n, q′)`; `qprime` is reduced to `0 ≤ q′ < n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensInvariant {
    #[serde(with = "crate::exact::bigint_str")]
    pub n: BigInt,
    #[serde(with = "crate::exact::bigint_str")]
    pub qprime: BigInt,
    pub side: BoundarySide,
    /// For the complement side, the representative `−q′` with
    /// `q′` the neighborhood value; `qprime` is then `n − q′`.
    #[serde(with = "crate::exact::bigint_str")]
    pub signed_qprime: BigInt,
}

impl fmt::Display for LensInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            BoundarySide::Neighborhood => write!(f, "L({}, {}) [neighborhood]", self.n, self.qprime),
            BoundarySide::Complement => {
                write!(f, "L({}, {}) = L({}, {}) [complement]", self.n, self.signed_qprime, self.n, self.qprime)
            }
        }
    }
}

/// Meridian exponents `cᵢ` with `αᵢ = α₁^{cᵢ}` and lens order `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSequence {
    #[serde(with = "crate::exact::bigint_str::vec")]
    pub c: Vec<BigInt>,
    #[serde(with = "crate::exact::bigint_str")]
    pub n: BigInt,
}

impl ExponentSequence {
    /// `c_i`, 1-based.
    pub fn get(&self, i: usize) -> &BigInt {
        &self.c[i - 1]
    }
}

/// `(P_k, P_{k−1})` from `P₀ = 1`, `P₁ = b₁`, `Pᵢ = bᵢPᵢ₋₁ − Pᵢ₋₂`.
/// Generic over the integer type so exhaustive sweeps can run on machine words.
pub fn cf_value_generic<T>(entries: &[u64]) -> (T, T)
where
    T: Integer + Clone + From<u64>,
{
    let mut prev = T::zero();
    let mut cur = T::one();
    for &b in entries {
        let next = T::from(b) * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Chain `[b₁, …, b_k]` with `cf_value = (n, q)`, assuming `0 < q < n` coprime.
///
/// The greedy expansion `n/q = a₁ − 1/(a₂ − …)` yields `b_k` first, so the
/// output is that expansion reversed.
pub fn hj_expand_generic<T>(n: T, q: T) -> Vec<u64>
where
    T: Integer + Clone + ToPrimitive,
{
    let mut out = Vec::new();
    let (mut n, mut q) = (n, q);
    while !q.is_zero() {
        let b = n.div_ceil(&q);
        out.push(b.to_u64().expect("HJ entries are bounded by n"));
        let r = b * q.clone() - n;
        n = q;
        q = r;
    }
    out.reverse();
    out
}

/// `(n, q′) = (P_k, P_{k−1})`, so `n/q′ = b_k − 1/(b_{k−1} − 1/(… − 1/b₁))`.
pub fn cf_value(chain: &Chain) -> (BigInt, BigInt) {
    cf_value_generic::<BigInt>(chain.entries())
}

pub fn hj_expand(n: &BigInt, q: &BigInt) -> Result<Chain, ChainError> {
    if !(q.is_positive() && q < n) {
        return Err(ChainError::OutOfRange { n: n.clone(), q: q.clone() });
    }
    let gcd = n.gcd(q);
    if !gcd.is_one() {
        return Err(ChainError::NotCoprime { n: n.clone(), q: q.clone(), gcd });
    }
    Ok(Chain(hj_expand_generic(n.clone(), q.clone())))
}

pub fn wahl_recognize(chain: &Chain) -> Option<WahlParams> {
    let (n, qprime) = cf_value(chain);
    let p = exact_sqrt(&n)?;
    if p < BigInt::from(2) || !(&qprime + 1u32).mod_floor(&p).is_zero() {
        return None;
    }
    let q = (&qprime + 1u32) / &p;
    WahlParams::new(p, q).ok()
}

/// Every Wahl chain of length at most `max_length`, sorted.
pub fn wahl_generate(max_length: usize) -> Vec<Chain> {
    let mut all = BTreeSet::new();
    if max_length == 0 {
        return Vec::new();
    }
    let mut frontier = vec![Chain(vec![4])];
    all.insert(Chain(vec![4]));
    for _ in 1..max_length {
        let mut next = BTreeSet::new();
        for ch in &frontier {
            let e = ch.entries();
            let mut left = Vec::with_capacity(e.len() + 1);
            left.push(2);
            left.extend_from_slice(e);
            *left.last_mut().expect("non-empty") += 1;
            let mut right = e.to_vec();
            right[0] += 1;
            right.push(2);
            next.insert(Chain(left));
            next.insert(Chain(right));
        }
        all.extend(next.iter().cloned());
        frontier = next.into_iter().collect();
    }
    all.into_iter().collect()
}

/// `c₁ = 1`, `c₂ = b₁`, `c_{i+1} = bᵢcᵢ − c_{i−1}`; `n = b_k c_k − c_{k−1}`.
pub fn exponent_sequence(chain: &Chain) -> ExponentSequence {
    let mut c = Vec::with_capacity(chain.len());
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for &b in chain.entries() {
        c.push(cur.clone());
        let next = BigInt::from(b) * &cur - &prev;
        prev = cur;
        cur = next;
    }
    ExponentSequence { c, n: cur }
}

pub fn boundary_lens(chain: &Chain, side: BoundarySide) -> LensInvariant {
    let (n, qprime) = cf_value(chain);
    match side {
        BoundarySide::Neighborhood => LensInvariant { signed_qprime: qprime.clone(), n, qprime, side },
        BoundarySide::Complement => {
            LensInvariant { qprime: (&n - &qprime).mod_floor(&n), signed_qprime: -qprime, n, side }
        }
    }
}
