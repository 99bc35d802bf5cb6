use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An entry of the instance document could not be read as a positive
    /// rational. Indices are 0-based positions in the input array.
    #[error("value #{index} ({entry:?}): {reason}")]
    BadValue {
        index: usize,
        entry: String,
        reason: String,
    },

    /// The instance document itself is malformed (not JSON, missing the
    /// `values` array, wrong element types, ...).
    #[error("invalid instance document: {0}")]
    BadInstance(String),

    #[error("need at least 2 players, got {n}")]
    TooFewPlayers { n: usize },

    /// A round was declared with zero matches. Rounds are 1-based.
    #[error("round {round}: match count must be at least 1")]
    EmptyRound { round: usize },

    /// A round schedules more match slots than there are alive players.
    #[error("round {round}: {matches} matches need {need} participants but only {alive} players are alive")]
    InfeasibleRound {
        round: usize,
        matches: usize,
        need: usize,
        alive: usize,
    },

    #[error("match counts sum to {got}, expected n - 1 = {expected}")]
    WrongMatchTotal { got: usize, expected: usize },

    /// A size guard would be exceeded. Callers may retry with an explicit
    /// override, or switch to Monte Carlo estimation.
    #[error("{what} is guarded at {limit} players, got {n}")]
    GuardExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("player index {index} out of range for {n} players")]
    PlayerIndex { index: usize, n: usize },

    /// A domain precondition failed (non-positive strength, probability
    /// outside its open interval, identical player pair, ...).
    #[error("{0}")]
    Domain(String),
}
