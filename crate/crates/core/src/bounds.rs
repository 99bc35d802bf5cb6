//! Analytic bounds on tournament win probabilities, computed exactly.
//!
//! All bounds are evaluated in canonical (sorted) order; the lower bounds
//! that depend on the ordering are only meaningful there, while the
//! product bounds depend on a player only through its mean-opponent win
//! probability and are permutation-invariant.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::special_case_win_prob;
use crate::format::Format;
use crate::values::{mean_opponent_win_prob, PlayerValues};
use crate::{Error, Result};

/// Exact law of the number of matches a player's surrogate chain plays:
/// the sum of independent Bernoulli round-participation indicators.
#[derive(Debug, Clone)]
pub struct SurrogateGameCount {
    /// `pmf[g] = P(N = g)` for `g = 0..=r`; sums to exactly 1.
    pub pmf: Vec<BigRational>,
    /// Per-round participation probabilities `q_s = 2 m_s / r_s`.
    pub round_probs: Vec<BigRational>,
}

/// Exact pmf of a sum of independent Bernoulli variables, by the textbook
/// convolution recursion.
pub fn poisson_binomial_pmf(probs: &[BigRational]) -> Result<SurrogateGameCount> {
    for (idx, p) in probs.iter().enumerate() {
        if *p < BigRational::zero() || *p > BigRational::one() {
            return Err(Error::Domain(format!(
                "probability #{idx} = {p} is outside [0, 1]"
            )));
        }
    }
    let mut pmf = vec![BigRational::one()];
    for p in probs {
        let q = BigRational::one() - p;
        let mut next = vec![BigRational::zero(); pmf.len() + 1];
        for (k, mass) in pmf.iter().enumerate() {
            next[k] += mass * &q;
            next[k + 1] += mass * p;
        }
        pmf = next;
    }
    Ok(SurrogateGameCount {
        pmf,
        round_probs: probs.to_vec(),
    })
}

/// The surrogate game count for a format (Bernoulli(`2m_s/r_s`) rounds).
pub fn surrogate_game_count(format: &Format) -> SurrogateGameCount {
    let probs: Vec<BigRational> = (0..format.num_rounds())
        .map(|idx| format.round_play_prob(idx))
        .collect();
    poisson_binomial_pmf(&probs).expect("round probabilities lie in (0, 1]")
}

/// Initial-weight bounds: the strongest player wins with probability at
/// least `v_1/Σv`, the weakest with probability at most `v_n/Σv`.
/// Returned as `(lower for player 1, upper for player n)`.
pub fn initial_weight_bounds(values: &PlayerValues) -> (BigRational, BigRational) {
    let total = values.total();
    (
        values.value(0) / &total,
        values.value(values.n() - 1) / &total,
    )
}

/// Upper bound `Π_s (q_s·p_i + 1 − q_s)`: the win probability if every
/// match were against a uniformly random opponent.
pub fn mean_opponent_upper(
    values: &PlayerValues,
    format: &Format,
    i: usize,
) -> Result<BigRational> {
    check_same_n(values, format)?;
    let p = mean_opponent_win_prob(values, i)?;
    special_case_win_prob(&p, format)
}

/// Lower bound from the surrogate chain: condition on the number of games
/// `N = g` the player's surrogate plays and assume the opponents are the
/// strongest `g` potential ones.
pub fn surrogate_lower(values: &PlayerValues, format: &Format, i: usize) -> Result<BigRational> {
    check_same_n(values, format)?;
    let n = values.n();
    if i >= n {
        return Err(Error::PlayerIndex { index: i, n });
    }
    let count = surrogate_game_count(format);
    let vi = values.value(i);
    let beats = |k: usize| vi / (vi + values.value(k));

    let mut total = BigRational::zero();
    for (g, mass) in count.pmf.iter().enumerate() {
        if mass.is_zero() {
            continue;
        }
        // Worst-case opponents for N = g: players 1..g when the player's
        // own rank exceeds g, otherwise everyone above plus the next ones
        // below (skipping the player itself). Empty products are 1.
        let mut product = BigRational::one();
        if g <= i {
            for k in 0..g {
                product *= beats(k);
            }
        } else {
            for k in 0..i {
                product *= beats(k);
            }
            for k in i + 1..=g {
                product *= beats(k);
            }
        }
        total += mass * product;
    }
    Ok(total)
}

/// Weaker lower bound: assume every surrogate game is against the
/// strongest player. Defined for `i > 0` in canonical order.
pub fn strongest_opponent_lower(
    values: &PlayerValues,
    format: &Format,
    i: usize,
) -> Result<BigRational> {
    check_same_n(values, format)?;
    let n = values.n();
    if i >= n {
        return Err(Error::PlayerIndex { index: i, n });
    }
    if i == 0 {
        return Err(Error::Domain(
            "the strongest-opponent bound is defined for players below the top".into(),
        ));
    }
    let vi = values.value(i);
    let ratio = vi / (vi + values.value(0));
    special_case_win_prob(&ratio, format)
}

/// Format-independent upper bound on `P_i`, piecewise in the player's
/// mean-opponent win probability `p_i`:
/// the balanced-format product when `p_i > 1/2`, exactly `1/n` when
/// `p_i = 1/2`, and the sequential-format product when `p_i < 1/2`.
pub fn universal_upper(values: &PlayerValues, i: usize) -> Result<BigRational> {
    let n = values.n();
    let p = mean_opponent_win_prob(values, i)?;
    let half = BigRational::new(1.into(), 2.into());
    if p == half {
        return Ok(BigRational::new(1.into(), (n as u64).into()));
    }
    let extremal = if p > half {
        Format::balanced(n)?
    } else {
        Format::sequential(n)?
    };
    special_case_win_prob(&p, &extremal)
}

/// All bounds for one player (canonical index), exact.
#[derive(Debug, Clone)]
pub struct PlayerBounds {
    pub player: usize,
    /// Mean-opponent win probability `p_i` the product bounds use.
    pub mean_win_prob: BigRational,
    /// `v_1/Σv`, present only for the strongest player.
    pub initial_weight_lower: Option<BigRational>,
    /// `v_n/Σv`, present only for the weakest player.
    pub initial_weight_upper: Option<BigRational>,
    pub mean_opponent_upper: BigRational,
    pub surrogate_lower: BigRational,
    /// Absent for the strongest player.
    pub strongest_opponent_lower: Option<BigRational>,
    pub universal_upper: BigRational,
    /// `p_i < 1/2`, in which case `universal_upper < 1/n` under any format.
    pub below_uniform: bool,
}

#[derive(Debug, Clone)]
pub struct BoundsReport {
    /// Per player, canonical order.
    pub per_player: Vec<PlayerBounds>,
}

/// Every bound for every player under one format.
pub fn bounds_report(values: &PlayerValues, format: &Format) -> Result<BoundsReport> {
    check_same_n(values, format)?;
    let n = values.n();
    let half = BigRational::new(1.into(), 2.into());
    let (top_lower, bottom_upper) = initial_weight_bounds(values);
    let mut per_player = Vec::with_capacity(n);
    for i in 0..n {
        let mean_win_prob = mean_opponent_win_prob(values, i)?;
        per_player.push(PlayerBounds {
            player: i,
            below_uniform: mean_win_prob < half,
            mean_win_prob,
            initial_weight_lower: (i == 0).then(|| top_lower.clone()),
            initial_weight_upper: (i == n - 1).then(|| bottom_upper.clone()),
            mean_opponent_upper: mean_opponent_upper(values, format, i)?,
            surrogate_lower: surrogate_lower(values, format, i)?,
            strongest_opponent_lower: if i == 0 {
                None
            } else {
                Some(strongest_opponent_lower(values, format, i)?)
            },
            universal_upper: universal_upper(values, i)?,
        });
    }
    Ok(BoundsReport { per_player })
}

fn check_same_n(values: &PlayerValues, format: &Format) -> Result<()> {
    if values.n() != format.n() {
        return Err(Error::Domain(format!(
            "format is for {} players but the instance has {}",
            format.n(),
            values.n()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::win_probabilities;
    use crate::format::enumerate_formats;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn vals(ints: &[u64]) -> PlayerValues {
        PlayerValues::from_integers(ints).unwrap()
    }

    #[test]
    fn poisson_binomial_examples() {
        let c = poisson_binomial_pmf(&[BigRational::one()]).unwrap();
        assert_eq!(c.pmf, vec![rat(0, 1), rat(1, 1)]);

        let c = poisson_binomial_pmf(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(c.pmf, vec![rat(1, 4), rat(1, 2), rat(1, 4)]);

        let c = poisson_binomial_pmf(&[rat(2, 3), rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(c.pmf, vec![rat(0, 1), rat(0, 1), rat(1, 3), rat(2, 3)]);

        assert!(poisson_binomial_pmf(&[rat(3, 2)]).is_err());
        assert!(poisson_binomial_pmf(&[rat(-1, 2)]).is_err());
    }

    #[test]
    fn surrogate_count_balanced_closed_form() {
        // Balanced format: N is s with probability 1-2k/n, else s+1.
        for n in [3usize, 6, 8, 12, 31, 64] {
            let f = Format::balanced(n).unwrap();
            let d = crate::format::balanced_decomposition(n).unwrap();
            let c = surrogate_game_count(&f);
            let total: BigRational = c.pmf.iter().cloned().sum();
            assert_eq!(total, BigRational::one());
            let two_k_over_n = BigRational::new((2 * d.k as u64).into(), (n as u64).into());
            for (g, mass) in c.pmf.iter().enumerate() {
                let expected = if g == d.s as usize + 1 && d.k > 0 {
                    two_k_over_n.clone()
                } else if g == d.s as usize {
                    BigRational::one() - &two_k_over_n
                } else {
                    BigRational::zero()
                };
                assert_eq!(*mass, expected, "n={n} g={g}");
            }
        }
    }

    #[test]
    fn surrogate_count_never_zero_games() {
        // Valid formats end with a 2-player final, so N ≥ 1 always.
        for n in 2..=8 {
            for f in enumerate_formats(n).unwrap() {
                let c = surrogate_game_count(&f);
                assert_eq!(c.pmf[0], BigRational::zero(), "n={n} [{f}]");
            }
        }
    }

    #[test]
    fn initial_weight_examples() {
        let (lo, hi) = initial_weight_bounds(&vals(&[3, 2, 1]));
        assert_eq!(lo, rat(1, 2));
        assert_eq!(hi, rat(1, 6));

        let (lo, hi) = initial_weight_bounds(&vals(&[5, 5, 5, 5]));
        assert_eq!(lo, rat(1, 4));
        assert_eq!(hi, rat(1, 4));

        // The bound really holds on a worked instance.
        let v = vals(&[2, 1, 1]);
        let f = Format::new(3, vec![1, 1]).unwrap();
        let p = win_probabilities(&v, &f).unwrap();
        let (lo, hi) = initial_weight_bounds(&v);
        assert!(p[0] >= lo);
        assert!(p[2] <= hi);
        assert_eq!(p[0], rat(14, 27));
    }

    #[test]
    fn mean_opponent_upper_examples() {
        let f = Format::new(3, vec![1, 1]).unwrap();
        let v = vals(&[2, 1, 1]);
        // Tight when all opponents share one strength.
        assert_eq!(mean_opponent_upper(&v, &f, 0).unwrap(), rat(14, 27));

        let u = vals(&[7, 7, 7, 7]);
        for f in enumerate_formats(4).unwrap() {
            for i in 0..4 {
                assert_eq!(mean_opponent_upper(&u, &f, i).unwrap(), rat(1, 4));
            }
        }

        let w = vals(&[6, 4, 3, 1, 1, 1]);
        let f = Format::new(6, vec![2, 2, 1]).unwrap();
        let bound = mean_opponent_upper(&w, &f, 0).unwrap();
        assert_eq!(bound, rat(216166379, 434109375));
        let exact = win_probabilities(&w, &f).unwrap()[0].clone();
        assert!(bound >= exact);
    }

    #[test]
    fn surrogate_lower_examples() {
        let f = Format::new(3, vec![1, 1]).unwrap();
        let v = vals(&[2, 1, 1]);
        assert_eq!(surrogate_lower(&v, &f, 0).unwrap(), rat(14, 27)); // tight
        assert_eq!(surrogate_lower(&v, &f, 1).unwrap(), rat(2, 9));
        let exact = win_probabilities(&v, &f).unwrap();
        assert!(surrogate_lower(&v, &f, 1).unwrap() <= exact[1]);

        // Uniform strengths: the bound collapses to exactly 1/n.
        for n in 2..=7usize {
            let u = vals(&vec![2; n]);
            for f in enumerate_formats(n).unwrap() {
                for i in 0..n {
                    assert_eq!(
                        surrogate_lower(&u, &f, i).unwrap(),
                        BigRational::new(1.into(), (n as u64).into()),
                        "n={n} [{f}] i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn strongest_opponent_lower_examples() {
        let f = Format::new(3, vec![1, 1]).unwrap();
        assert_eq!(
            strongest_opponent_lower(&vals(&[2, 1, 1]), &f, 1).unwrap(),
            rat(5, 27)
        );
        assert_eq!(
            strongest_opponent_lower(&vals(&[3, 1, 1]), &f, 1).unwrap(),
            rat(1, 8)
        );
        let u = vals(&[4, 4, 4]);
        assert_eq!(strongest_opponent_lower(&u, &f, 1).unwrap(), rat(1, 3));
        assert!(strongest_opponent_lower(&u, &f, 0).is_err());
    }

    #[test]
    fn universal_upper_examples() {
        let v = vals(&[2, 1, 1]);
        assert_eq!(universal_upper(&v, 0).unwrap(), rat(14, 27));

        let u = vals(&[9, 9, 9, 9, 9]);
        for i in 0..5 {
            assert_eq!(universal_upper(&u, i).unwrap(), rat(1, 5));
        }

        let w = vals(&[6, 4, 3, 1, 1, 1]);
        let weakest = universal_upper(&w, 5).unwrap();
        assert_eq!(weakest, rat(27074821375927, 420175000000000));
        assert!(weakest < rat(1, 6)); // below the uniform share
        assert_eq!(universal_upper(&w, 0).unwrap(), rat(216166379, 434109375));
    }

    #[test]
    fn universal_upper_dominates_every_format() {
        let v = PlayerValues::new(vec![rat(5, 1), rat(3, 1), rat(3, 2), rat(1, 1), rat(2, 3)])
            .unwrap();
        for i in 0..5 {
            let cap = universal_upper(&v, i).unwrap();
            for f in enumerate_formats(5).unwrap() {
                assert!(
                    mean_opponent_upper(&v, &f, i).unwrap() <= cap,
                    "[{f}] i={i}"
                );
            }
        }
    }

    #[test]
    fn bounds_report_uniform_collapses() {
        let u = vals(&[1, 1, 1, 1]);
        let f = Format::new(4, vec![2, 1]).unwrap();
        let report = bounds_report(&u, &f).unwrap();
        for b in &report.per_player {
            assert_eq!(b.mean_opponent_upper, rat(1, 4));
            assert_eq!(b.surrogate_lower, rat(1, 4));
            assert_eq!(b.universal_upper, rat(1, 4));
            assert!(!b.below_uniform);
            if let Some(w) = &b.strongest_opponent_lower {
                assert_eq!(*w, rat(1, 4));
            }
        }
    }

    #[test]
    fn bounds_report_sandwiches_exact_values() {
        let v = vals(&[6, 4, 3, 1, 1, 1]);
        let f = Format::new(6, vec![2, 2, 1]).unwrap();
        let exact = win_probabilities(&v, &f).unwrap();
        let report = bounds_report(&v, &f).unwrap();
        for (i, b) in report.per_player.iter().enumerate() {
            assert!(b.surrogate_lower <= exact[i], "lower i={i}");
            assert!(exact[i] <= b.mean_opponent_upper, "upper i={i}");
            assert!(b.mean_opponent_upper <= b.universal_upper, "cap i={i}");
            if let Some(w) = &b.strongest_opponent_lower {
                assert!(*w <= b.surrogate_lower, "weak i={i}");
            }
        }
        assert!(report.per_player[5].below_uniform);
        assert!(!report.per_player[0].below_uniform);
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (1i64..=16, 1i64..=9).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn lower_bounds_are_ordered(
            ints in proptest::collection::vec(small_rational(), 3..=6),
        ) {
            let v = PlayerValues::new(ints).unwrap();
            let f = Format::balanced(v.n()).unwrap();
            for i in 1..v.n() {
                let weak = strongest_opponent_lower(&v, &f, i).unwrap();
                let strong = surrogate_lower(&v, &f, i).unwrap();
                prop_assert!(weak <= strong, "i={i}");
            }
        }

        #[test]
        fn pmf_sums_to_one(
            ps in proptest::collection::vec((0i64..=6, 1i64..=6), 1..=6)
        ) {
            let probs: Vec<BigRational> = ps
                .into_iter()
                .map(|(a, b)| {
                    let r = rat(a, b);
                    if r > BigRational::one() { BigRational::one() } else { r }
                })
                .collect();
            let c = poisson_binomial_pmf(&probs).unwrap();
            let total: BigRational = c.pmf.iter().cloned().sum();
            prop_assert_eq!(total, BigRational::one());
            prop_assert_eq!(c.pmf.len(), c.round_probs.len() + 1);
        }
    }
}
