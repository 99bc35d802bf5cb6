//! Exact win/reach probabilities by dynamic programming over alive-player
//! subsets.
//!
//! The state key is `(alive set, round index)`. One forward sweep turns
//! the initial distribution (all players alive with probability 1) into a
//! distribution over alive sets per round via [`round_transition`]; win
//! probabilities, reach probabilities, joint reach probabilities and the
//! per-state weight process all read off that sweep. Everything is an
//! exact `BigRational`; equal-strength players are deliberately not
//! merged.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::format::Format;
use crate::values::PlayerValues;
use crate::{Error, Result};

/// Alive sets are bitmasks over canonical player indices.
pub type Mask = u32;

/// Default cap on the exact engine; beyond it use an explicit guard
/// override or Monte Carlo.
pub const DEFAULT_GUARD: usize = 12;

/// Absolute cap regardless of overrides (subset enumeration blows up well
/// before the mask width runs out).
pub const HARD_LIMIT: usize = 24;

fn mask_of_all(n: usize) -> Mask {
    ((1u64 << n) - 1) as Mask
}

fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    (0..Mask::BITS as usize).filter(move |i| mask >> i & 1 == 1)
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Exact distribution of the survivor set after one round.
#[derive(Debug, Clone)]
pub struct TransitionDistribution {
    alive: Mask,
    matches: usize,
    probs: BTreeMap<Mask, BigRational>,
}

impl TransitionDistribution {
    pub fn alive(&self) -> Mask {
        self.alive
    }

    pub fn matches(&self) -> usize {
        self.matches
    }

    /// Survivor set → probability; keys are subsets of `alive` of size
    /// `|alive| − matches`, and the values sum to exactly 1.
    pub fn probs(&self) -> &BTreeMap<Mask, BigRational> {
        &self.probs
    }
}

/// Pairwise win probabilities `p[i][j] = v_i / (v_i + v_j)` in canonical
/// order (diagonal unused).
fn pair_matrix(values: &PlayerValues) -> Vec<Vec<BigRational>> {
    let n = values.n();
    let mut p = vec![vec![BigRational::zero(); n]; n];
    for (i, row) in p.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                let vi = values.value(i);
                let vj = values.value(j);
                *cell = vi / (vi + vj);
            }
        }
    }
    p
}

/// Survivor distribution for one round: `matches` pairs are drawn from
/// `alive` by (a) a uniform choice of participants, (b) a uniform perfect
/// matching, (c) independent Bradley–Terry outcomes. Non-participants
/// advance on a bye.
pub fn round_transition(
    values: &PlayerValues,
    alive: Mask,
    matches: usize,
) -> Result<TransitionDistribution> {
    let n = values.n();
    if alive == 0 || bits(alive).any(|i| i >= n) {
        return Err(Error::Domain(format!(
            "alive mask {alive:#b} does not address players 0..{n}"
        )));
    }
    let pair = pair_matrix(values);
    transition_with(&pair, alive, matches)
}

fn transition_with(
    pair: &[Vec<BigRational>],
    alive: Mask,
    matches: usize,
) -> Result<TransitionDistribution> {
    let t = alive.count_ones() as usize;
    if matches < 1 || 2 * matches > t {
        return Err(Error::Domain(format!(
            "{matches} matches need {} participants but only {t} players are alive",
            2 * matches
        )));
    }

    let players: Vec<usize> = bits(alive).collect();
    let participant_weight =
        BigRational::new(1.into(), binomial(t, 2 * matches).into());
    let mut probs: BTreeMap<Mask, BigRational> = BTreeMap::new();

    // Enumerate participant subsets of size 2m as combinations of the
    // alive players, then pair them off recursively: the lowest remaining
    // participant meets each possible partner with probability
    // 1/(remaining − 1), which induces the uniform perfect matching.
    let mut combo = Vec::with_capacity(2 * matches);
    enumerate_subsets(&players, 2 * matches, 0, &mut combo, &mut |participants| {
        let participant_mask: Mask = participants.iter().map(|&i| 1u32 << i).sum();
        let byes = alive & !participant_mask;
        pair_off(
            pair,
            participants,
            byes,
            participant_weight.clone(),
            &mut probs,
        );
    });

    Ok(TransitionDistribution {
        alive,
        matches,
        probs,
    })
}

fn enumerate_subsets(
    players: &[usize],
    want: usize,
    from: usize,
    acc: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if acc.len() == want {
        visit(acc);
        return;
    }
    let still_needed = want - acc.len();
    for idx in from..=players.len().saturating_sub(still_needed) {
        acc.push(players[idx]);
        enumerate_subsets(players, want, idx + 1, acc, visit);
        acc.pop();
    }
}

fn pair_off(
    pair: &[Vec<BigRational>],
    remaining: &[usize],
    survivors: Mask,
    weight: BigRational,
    out: &mut BTreeMap<Mask, BigRational>,
) {
    if remaining.is_empty() {
        *out.entry(survivors).or_insert_with(BigRational::zero) += weight;
        return;
    }
    let a = remaining[0];
    let partner_weight = &weight / BigRational::from_integer(((remaining.len() - 1) as u64).into());
    for idx in 1..remaining.len() {
        let b = remaining[idx];
        let rest: Vec<usize> = remaining[1..]
            .iter()
            .copied()
            .filter(|&x| x != b)
            .collect();
        pair_off(
            pair,
            &rest,
            survivors | (1 << a),
            &partner_weight * &pair[a][b],
            out,
        );
        pair_off(
            pair,
            &rest,
            survivors | (1 << b),
            &partner_weight * &pair[b][a],
            out,
        );
    }
}

/// Exact engine for one `(values, format)` query. Construction runs the
/// forward sweep; the accessors are then cheap.
pub struct Engine<'a> {
    values: &'a PlayerValues,
    format: &'a Format,
    pair: Vec<Vec<BigRational>>,
    /// `trace[s-1]` is the alive-set distribution entering round `s`,
    /// for `s = 1..=r+1`; the last entry is over singletons.
    trace: Vec<BTreeMap<Mask, BigRational>>,
}

impl<'a> Engine<'a> {
    pub fn new(values: &'a PlayerValues, format: &'a Format) -> Result<Self> {
        Self::with_guard(values, format, DEFAULT_GUARD)
    }

    pub fn with_guard(
        values: &'a PlayerValues,
        format: &'a Format,
        guard: usize,
    ) -> Result<Self> {
        let n = values.n();
        if format.n() != n {
            return Err(Error::Domain(format!(
                "format is for {} players but the instance has {n}",
                format.n()
            )));
        }
        let limit = guard.min(HARD_LIMIT);
        if n > limit {
            return Err(Error::GuardExceeded {
                what: "exact engine",
                n,
                limit,
            });
        }

        let pair = pair_matrix(values);
        let mut trace = Vec::with_capacity(format.num_rounds() + 1);
        let mut dist = BTreeMap::new();
        dist.insert(mask_of_all(n), BigRational::one());
        trace.push(dist);
        for &m in format.rounds() {
            let prev = trace.last().expect("trace starts non-empty");
            let mut next: BTreeMap<Mask, BigRational> = BTreeMap::new();
            for (&alive, p) in prev {
                let t = transition_with(&pair, alive, m)?;
                for (surv, q) in t.probs() {
                    *next.entry(*surv).or_insert_with(BigRational::zero) += p * q;
                }
            }
            trace.push(next);
        }

        Ok(Self {
            values,
            format,
            pair,
            trace,
        })
    }

    pub fn values(&self) -> &PlayerValues {
        self.values
    }

    pub fn format(&self) -> &Format {
        self.format
    }

    /// Alive-set distributions entering rounds `1..=r+1`.
    pub fn trace(&self) -> &[BTreeMap<Mask, BigRational>] {
        &self.trace
    }

    /// `P_i` for every player, canonical order; sums to exactly 1.
    pub fn win_probabilities(&self) -> Vec<BigRational> {
        let n = self.values.n();
        let mut out = vec![BigRational::zero(); n];
        for (&mask, p) in self.trace.last().expect("non-empty trace") {
            let winner = mask.trailing_zeros() as usize;
            debug_assert_eq!(mask.count_ones(), 1);
            out[winner] += p;
        }
        out
    }

    /// Reach and joint-reach probabilities for all players and rounds.
    pub fn reach_matrix(&self) -> ReachMatrix {
        let n = self.values.n();
        let stages = self.trace.len();
        let mut reach = vec![vec![BigRational::zero(); stages]; n];
        let mut joint = vec![vec![vec![BigRational::zero(); stages]; n]; n];
        for (s, dist) in self.trace.iter().enumerate() {
            for (&mask, p) in dist {
                let members: Vec<usize> = bits(mask).collect();
                for &i in &members {
                    reach[i][s] += p;
                    joint[i][i][s] += p;
                }
                for (a, &i) in members.iter().enumerate() {
                    for &j in &members[a + 1..] {
                        joint[i][j][s] += p;
                        joint[j][i][s] += p;
                    }
                }
            }
        }
        ReachMatrix { reach, joint }
    }

    /// The weight process of player `i` over every reachable state where
    /// `i` is alive: current weight and the expected weight after the
    /// round. Rounds are 1-based.
    pub fn weight_trace(&self, i: usize) -> Result<Vec<WeightStep>> {
        let n = self.values.n();
        if i >= n {
            return Err(Error::PlayerIndex { index: i, n });
        }
        let mut steps = Vec::new();
        for (idx, &m) in self.format.rounds().iter().enumerate() {
            for (&alive, state_prob) in &self.trace[idx] {
                if alive >> i & 1 == 0 {
                    continue;
                }
                let weight = self.weight_in(i, alive);
                let transition = transition_with(&self.pair, alive, m)?;
                let mut expected = BigRational::zero();
                for (&surv, q) in transition.probs() {
                    if surv >> i & 1 == 1 {
                        expected += q * self.weight_in(i, surv);
                    }
                }
                steps.push(WeightStep {
                    round: idx + 1,
                    alive,
                    state_prob: state_prob.clone(),
                    weight,
                    expected_next: expected,
                });
            }
        }
        Ok(steps)
    }

    fn weight_in(&self, i: usize, alive: Mask) -> BigRational {
        let total: BigRational = bits(alive).map(|j| self.values.value(j).clone()).sum();
        self.values.value(i) / total
    }

    /// Check the martingale property of the weight process: for the
    /// strongest player the expected weight never drops (submartingale),
    /// for the weakest it never rises (supermartingale). States where the
    /// player is already out contribute 0 = 0 and are skipped.
    pub fn weight_process_check(&self, i: usize) -> Result<WeightCheck> {
        let steps = self.weight_trace(i)?;
        let vi = self.values.value(i);
        let strongest = self.values.values().iter().all(|v| v <= vi);
        let weakest = self.values.values().iter().all(|v| v >= vi);
        let role = match (strongest, weakest) {
            (true, true) => PlayerRole::AllEqual,
            (true, false) => PlayerRole::Strongest,
            (false, true) => PlayerRole::Weakest,
            (false, false) => PlayerRole::Interior,
        };

        // Slacks over all reachable alive states; both are reported, the
        // verdict only asserts the side(s) the role claims.
        let mut min_gain: Option<(BigRational, usize, Mask)> = None;
        let mut min_drop: Option<(BigRational, usize, Mask)> = None;
        for step in &steps {
            let gain = &step.expected_next - &step.weight;
            let drop = -gain.clone();
            if min_gain.as_ref().is_none_or(|(g, _, _)| gain < *g) {
                min_gain = Some((gain, step.round, step.alive));
            }
            if min_drop.as_ref().is_none_or(|(d, _, _)| drop < *d) {
                min_drop = Some((drop, step.round, step.alive));
            }
        }
        let (min_gain, min_drop) = (
            min_gain.expect("player 0..n is alive at round 1"),
            min_drop.expect("player 0..n is alive at round 1"),
        );

        let zero = BigRational::zero();
        let pass = match role {
            PlayerRole::Strongest => min_gain.0 >= zero,
            PlayerRole::Weakest => min_drop.0 >= zero,
            PlayerRole::AllEqual => min_gain.0 >= zero && min_drop.0 >= zero,
            PlayerRole::Interior => true, // no property asserted
        };
        Ok(WeightCheck {
            player: i,
            role,
            pass,
            min_gain,
            min_drop,
        })
    }
}

/// Exact `P(R_{i,s})` and `P(R_{i,s} R_{j,s})` for `s = 1..=r+1`.
///
/// `reach[i][s-1]` is the probability player `i` is alive entering round
/// `s`; the last column is the win probability. `joint[i][j]` likewise,
/// with the diagonal holding `reach`.
pub struct ReachMatrix {
    pub reach: Vec<Vec<BigRational>>,
    pub joint: Vec<Vec<Vec<BigRational>>>,
}

impl ReachMatrix {
    pub fn win_probabilities(&self) -> Vec<BigRational> {
        self.reach
            .iter()
            .map(|row| row.last().expect("at least two stages").clone())
            .collect()
    }
}

/// One reachable state of the weight process.
#[derive(Debug, Clone)]
pub struct WeightStep {
    pub round: usize,
    pub alive: Mask,
    pub state_prob: BigRational,
    pub weight: BigRational,
    pub expected_next: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlayerRole {
    Strongest,
    Weakest,
    /// All strengths equal: the weight process is an exact martingale.
    AllEqual,
    /// Neither extreme; no one-sided property is claimed.
    Interior,
}

/// Outcome of [`Engine::weight_process_check`]: minimal slacks over all
/// reachable states, with the round and alive set attaining them.
#[derive(Debug, Clone)]
pub struct WeightCheck {
    pub player: usize,
    pub role: PlayerRole,
    pub pass: bool,
    /// min over states of `E[W_i(next)] − W_i` (≥ 0 ⟺ submartingale).
    pub min_gain: (BigRational, usize, Mask),
    /// min over states of `W_i − E[W_i(next)]` (≥ 0 ⟺ supermartingale).
    pub min_drop: (BigRational, usize, Mask),
}

/// Win probabilities with the default guard. Canonical order.
pub fn win_probabilities(values: &PlayerValues, format: &Format) -> Result<Vec<BigRational>> {
    Ok(Engine::new(values, format)?.win_probabilities())
}

/// Reach (and joint-reach) probabilities with the default guard.
pub fn reach_probabilities(values: &PlayerValues, format: &Format) -> Result<ReachMatrix> {
    Ok(Engine::new(values, format)?.reach_matrix())
}

/// `P(R_{i,s} R_{j,s})` for `s = 1..=r+1`; requires `i ≠ j`. The final
/// entry is 0, only one player wins.
pub fn joint_reach_probabilities(
    values: &PlayerValues,
    format: &Format,
    i: usize,
    j: usize,
) -> Result<Vec<BigRational>> {
    let n = values.n();
    if i >= n {
        return Err(Error::PlayerIndex { index: i, n });
    }
    if j >= n {
        return Err(Error::PlayerIndex { index: j, n });
    }
    if i == j {
        return Err(Error::Domain(
            "joint reach requires two distinct players".into(),
        ));
    }
    Ok(Engine::new(values, format)?.reach_matrix().joint[i][j].clone())
}

/// Winner probability when one distinguished player wins every match with
/// the same probability `p`: `Π_s (q_s·p + 1 − q_s)` with `q_s = 2m_s/r_s`.
pub fn special_case_win_prob(p: &BigRational, format: &Format) -> Result<BigRational> {
    if *p <= BigRational::zero() || *p >= BigRational::one() {
        return Err(Error::Domain(format!(
            "per-match win probability must lie in (0,1), got {p}"
        )));
    }
    let mut acc = BigRational::one();
    for idx in 0..format.num_rounds() {
        let q = format.round_play_prob(idx);
        acc *= &q * p + (BigRational::one() - &q);
    }
    Ok(acc)
}

/// Weight-process check with the default guard.
pub fn weight_process_check(
    values: &PlayerValues,
    format: &Format,
    i: usize,
) -> Result<WeightCheck> {
    Engine::new(values, format)?.weight_process_check(i)
}
