//! Exact analysis of random-pairing knockout tournaments.
//!
//! A tournament among `n` players runs in rounds; round `s` consists of
//! `m_s` two-player matches, and the losers are eliminated until a single
//! player remains (`Σ m_s = n − 1`). Participants and pairings are drawn
//! uniformly at random each round; players left out of a round advance on
//! a bye. Matches follow the Bradley–Terry rule: player `i` beats player
//! `j` with probability `v_i / (v_i + v_j)` for fixed positive strengths
//! `v_1, …, v_n`.
//!
//! The crate computes, with exact rational arithmetic:
//!
//! * per-player win and reach probabilities ([`exact`]),
//! * analytic lower/upper bounds on those probabilities ([`bounds`]),
//! * exhaustive best/worst format searches plus self-verification suites
//!   for the known extremal-format results ([`optimize`]),
//! * seeded Monte Carlo estimates for instances too large for the exact
//!   engine ([`montecarlo`]).
//!
//! Floats appear only as display approximations; every probability is an
//! exact `BigRational` end to end.

pub mod bounds;
pub mod cli;
pub mod exact;
pub mod format;
pub mod montecarlo;
pub mod optimize;
pub mod rational;
pub mod report;
pub mod values;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
