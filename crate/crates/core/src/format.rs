//! Tournament formats: per-round match counts with feasibility checks,
//! the balanced and sequential constructions, and exhaustive enumeration.

use std::fmt;

use num_rational::BigRational;

use crate::{Error, Result};

/// Formats with more players than this need an explicit override to
/// enumerate; the count roughly doubles with each extra player.
pub const ENUMERATION_GUARD: usize = 16;

/// A knockout format: match counts `m_1..m_r` for `n` players.
///
/// Validity requires every `m_s ≥ 1`, `Σ m_s = n − 1`, and `2·m_s ≤ r_s`
/// where `r_s` is the number of players alive entering round `s`. These
/// force the final round to be a single match between the last 2 players.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Format {
    rounds: Vec<usize>,
    alive: Vec<usize>, // r_1..r_r; r_1 = n
}

impl Format {
    /// Validate match counts against a player count (`validate_format`).
    pub fn new(n: usize, rounds: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPlayers { n });
        }
        let total: usize = rounds.iter().sum();
        if total != n - 1 {
            return Err(Error::WrongMatchTotal {
                got: total,
                expected: n - 1,
            });
        }
        let mut alive = Vec::with_capacity(rounds.len());
        let mut remaining = n;
        for (idx, &m) in rounds.iter().enumerate() {
            let round = idx + 1;
            if m < 1 {
                return Err(Error::EmptyRound { round });
            }
            if 2 * m > remaining {
                return Err(Error::InfeasibleRound {
                    round,
                    matches: m,
                    need: 2 * m,
                    alive: remaining,
                });
            }
            alive.push(remaining);
            remaining -= m;
        }
        debug_assert_eq!(remaining, 1);
        Ok(Self { rounds, alive })
    }

    /// The balanced format: with `n = 2^s + k`, play `k` matches, then
    /// halve the field every round (`k` omitted when zero).
    pub fn balanced(n: usize) -> Result<Self> {
        let BalancedDecomposition { s, k } = balanced_decomposition(n)?;
        let mut rounds = Vec::new();
        if k > 0 {
            rounds.push(k);
        }
        let mut half = 1usize << s;
        while half >= 2 {
            rounds.push(half / 2);
            half /= 2;
        }
        Self::new(n, rounds)
    }

    /// One match per round, `n − 1` rounds.
    pub fn sequential(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPlayers { n });
        }
        Self::new(n, vec![1; n - 1])
    }

    /// Parse a CLI-style format argument: `"balanced"`, `"sequential"`,
    /// or comma-separated match counts like `"2,2,1"`.
    pub fn parse_spec(n: usize, spec: &str) -> Result<Self> {
        match spec.trim() {
            "balanced" => Self::balanced(n),
            "sequential" => Self::sequential(n),
            s => {
                let rounds = s
                    .split(',')
                    .map(|tok| {
                        tok.trim().parse::<usize>().map_err(|_| {
                            Error::Domain(format!("bad match count {tok:?} in format {spec:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(n, rounds)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.alive[0]
    }

    pub fn num_rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn rounds(&self) -> &[usize] {
        &self.rounds
    }

    /// Alive counts `r_1..r_r` (players entering each round).
    pub fn alive_counts(&self) -> &[usize] {
        &self.alive
    }

    /// Players alive entering round `s`, 1-based; `s = r+1` gives 1.
    pub fn alive_at(&self, s: usize) -> usize {
        if s == self.rounds.len() + 1 {
            1
        } else {
            self.alive[s - 1]
        }
    }

    /// Probability that a given alive player is selected to play in round
    /// `s` (0-based index): `q_s = 2 m_s / r_s`, in `(0, 1]`.
    pub fn round_play_prob(&self, idx: usize) -> BigRational {
        BigRational::new(
            (2 * self.rounds[idx] as u64).into(),
            (self.alive[idx] as u64).into(),
        )
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for m in &self.rounds {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// `n = 2^s + k` with `0 ≤ k < 2^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalancedDecomposition {
    pub s: u32,
    pub k: usize,
}

pub fn balanced_decomposition(n: usize) -> Result<BalancedDecomposition> {
    if n < 2 {
        return Err(Error::TooFewPlayers { n });
    }
    let s = (usize::BITS - 1) - n.leading_zeros();
    let k = n - (1usize << s);
    debug_assert!(k < (1usize << s));
    Ok(BalancedDecomposition { s, k })
}

/// Every valid format for `n` players, in lexicographic order of the
/// match-count sequence. Guarded at [`ENUMERATION_GUARD`] players.
pub fn enumerate_formats(n: usize) -> Result<Vec<Format>> {
    enumerate_formats_with_guard(n, ENUMERATION_GUARD)
}

/// Enumeration with an explicit guard override.
pub fn enumerate_formats_with_guard(n: usize, guard: usize) -> Result<Vec<Format>> {
    if n < 2 {
        return Err(Error::TooFewPlayers { n });
    }
    if n > guard {
        return Err(Error::GuardExceeded {
            what: "format enumeration",
            n,
            limit: guard,
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn go(alive: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Format>) {
        if alive == 1 {
            out.push(Format::new(n, prefix.clone()).expect("construction is valid"));
            return;
        }
        for m in 1..=alive / 2 {
            prefix.push(m);
            go(alive - m, n, prefix, out);
            prefix.pop();
        }
    }
    go(n, n, &mut prefix, &mut out);
    Ok(out)
}
