//! Player strengths and the elementary match-probability formulas.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;

use crate::rational::parse_rational;
use crate::{Error, Result};

/// Positive player strengths, held in canonical (non-increasing) order.
///
/// Instances are sorted internally so that player 0 is the strongest;
/// ties keep their original relative order. The permutation back to the
/// caller's indexing is kept so reports can be presented in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerValues {
    values: Vec<BigRational>,
    canon_to_orig: Vec<usize>,
    orig_to_canon: Vec<usize>,
}

#[derive(Deserialize)]
struct InstanceDoc {
    values: Vec<serde_json::Value>,
}

impl PlayerValues {
    /// Build from strengths in the caller's order; sorts canonically.
    pub fn new(original: Vec<BigRational>) -> Result<Self> {
        if original.len() < 2 {
            return Err(Error::TooFewPlayers { n: original.len() });
        }
        for (index, v) in original.iter().enumerate() {
            if *v <= BigRational::zero() {
                return Err(Error::BadValue {
                    index,
                    entry: v.to_string(),
                    reason: "strength must be positive".into(),
                });
            }
        }
        let mut canon_to_orig: Vec<usize> = (0..original.len()).collect();
        // Stable sort: descending by value, ties by original position.
        canon_to_orig.sort_by(|&a, &b| original[b].cmp(&original[a]));
        let mut orig_to_canon = vec![0; original.len()];
        for (canon, &orig) in canon_to_orig.iter().enumerate() {
            orig_to_canon[orig] = canon;
        }
        let values = canon_to_orig.iter().map(|&o| original[o].clone()).collect();
        Ok(Self {
            values,
            canon_to_orig,
            orig_to_canon,
        })
    }

    /// Parse an instance document: a JSON object `{"values": [string, ...]}`
    /// whose entries are rational strings (`"6"`, `"1/100"`, `"2.5"`).
    pub fn parse_instance(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)
            .map_err(|e| Error::BadInstance(e.to_string()))?;
        let mut original = Vec::with_capacity(doc.values.len());
        for (index, entry) in doc.values.iter().enumerate() {
            let s = entry.as_str().ok_or_else(|| Error::BadValue {
                index,
                entry: entry.to_string(),
                reason: "expected a rational string".into(),
            })?;
            let v = parse_rational(s).map_err(|reason| Error::BadValue {
                index,
                entry: s.to_string(),
                reason,
            })?;
            if v <= BigRational::zero() {
                return Err(Error::BadValue {
                    index,
                    entry: s.to_string(),
                    reason: "strength must be positive".into(),
                });
            }
            original.push(v);
        }
        Self::new(original)
    }

    /// Convenience constructor for integer strengths.
    pub fn from_integers(strengths: &[u64]) -> Result<Self> {
        Self::new(
            strengths
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Strengths in canonical (non-increasing) order.
    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value(&self, canonical: usize) -> &BigRational {
        &self.values[canonical]
    }

    /// Canonical index -> original input index.
    pub fn canon_to_orig(&self) -> &[usize] {
        &self.canon_to_orig
    }

    /// Original input index -> canonical index.
    pub fn orig_to_canon(&self) -> &[usize] {
        &self.orig_to_canon
    }

    /// Reorder a canonical-indexed vector into the caller's input order.
    pub fn to_original_order<T: Clone>(&self, canonical: &[T]) -> Vec<T> {
        assert_eq!(canonical.len(), self.n());
        let mut out = vec![canonical[0].clone(); self.n()];
        for (canon, &orig) in self.canon_to_orig.iter().enumerate() {
            out[orig] = canonical[canon].clone();
        }
        out
    }

    /// Sum of all strengths.
    pub fn total(&self) -> BigRational {
        self.values.iter().sum()
    }
}

/// Probability that a player of strength `vi` beats one of strength `vj`:
/// `vi / (vi + vj)`, exact.
pub fn match_win_prob(vi: &BigRational, vj: &BigRational) -> Result<BigRational> {
    if *vi <= BigRational::zero() || *vj <= BigRational::zero() {
        return Err(Error::Domain(format!(
            "match strengths must be positive, got {vi} and {vj}"
        )));
    }
    Ok(vi / (vi + vj))
}

/// Probability that player `i` (canonical index) beats an opponent chosen
/// uniformly from the others: `(1/(n-1)) Σ_{j≠i} v_i/(v_i+v_j)`.
pub fn mean_opponent_win_prob(values: &PlayerValues, i: usize) -> Result<BigRational> {
    let n = values.n();
    if i >= n {
        return Err(Error::PlayerIndex { index: i, n });
    }
    let vi = values.value(i);
    let mut sum = BigRational::zero();
    for (j, vj) in values.values().iter().enumerate() {
        if j != i {
            sum += vi / (vi + vj);
        }
    }
    Ok(sum / BigRational::from_integer((n as u64 - 1).into()))
}

/// `true` when all strengths are equal (every match is a coin flip).
pub fn is_uniform(values: &PlayerValues) -> bool {
    values.values().windows(2).all(|w| w[0] == w[1])
}

/// All strengths multiplied by a positive rational. Win probabilities are
/// invariant under this; tests rely on exact equality after scaling.
pub fn scaled(values: &PlayerValues, c: &BigRational) -> Result<PlayerValues> {
    if *c <= BigRational::zero() {
        return Err(Error::Domain(format!(
            "scale factor must be positive, got {c}"
        )));
    }
    let mut orig = vec![BigRational::zero(); values.n()];
    for (canon, &o) in values.canon_to_orig().iter().enumerate() {
        orig[o] = values.value(canon) * c;
    }
    PlayerValues::new(orig)
}
