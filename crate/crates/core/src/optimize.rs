//! Exhaustive format search and the self-verification suites for the
//! known extremal-format results and counterexamples.

use num_rational::BigRational;
use num_traits::One;

use crate::exact::{special_case_win_prob, win_probabilities, Engine, DEFAULT_GUARD};
use crate::format::{balanced_decomposition, enumerate_formats, Format};
use crate::rational::{exact_string, to_f64};
use crate::values::PlayerValues;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Maximize,
    Minimize,
}

/// Exact win probability of one player under every valid format, with
/// the exact extreme sets. Ties are decided by exact rational equality.
#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Canonical player index the objective refers to.
    pub player: usize,
    pub objective: Objective,
    /// `(format, exact P_player)` in enumeration (lexicographic) order.
    pub table: Vec<(Format, BigRational)>,
    pub argmax: Vec<Format>,
    pub argmin: Vec<Format>,
}

impl SearchResult {
    /// The formats attaining the requested objective.
    pub fn best(&self) -> &[Format] {
        match self.objective {
            Objective::Maximize => &self.argmax,
            Objective::Minimize => &self.argmin,
        }
    }
}

pub fn search_formats(
    values: &PlayerValues,
    player: usize,
    objective: Objective,
) -> Result<SearchResult> {
    search_formats_with_guard(values, player, objective, DEFAULT_GUARD)
}

pub fn search_formats_with_guard(
    values: &PlayerValues,
    player: usize,
    objective: Objective,
    guard: usize,
) -> Result<SearchResult> {
    let n = values.n();
    if player >= n {
        return Err(Error::PlayerIndex { index: player, n });
    }
    let mut table = Vec::new();
    for format in enumerate_formats_guarded(n, guard)? {
        let p = Engine::with_guard(values, &format, guard)?.win_probabilities()[player].clone();
        table.push((format, p));
    }
    let max = table.iter().map(|(_, p)| p).max().expect("n ≥ 2 has formats");
    let min = table.iter().map(|(_, p)| p).min().expect("n ≥ 2 has formats");
    let argmax = table
        .iter()
        .filter(|(_, p)| p == max)
        .map(|(f, _)| f.clone())
        .collect();
    let argmin = table
        .iter()
        .filter(|(_, p)| p == min)
        .map(|(f, _)| f.clone())
        .collect();
    Ok(SearchResult {
        player,
        objective,
        table,
        argmax,
        argmin,
    })
}

fn enumerate_formats_guarded(n: usize, guard: usize) -> Result<Vec<Format>> {
    // The exact-engine guard is the binding one for searches.
    crate::format::enumerate_formats_with_guard(n, guard)
}

/// One named pass/fail observation inside a verification report.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Verification results for one player count.
#[derive(Debug, Clone)]
pub struct CaseReport {
    pub n: usize,
    pub argmax: Vec<Format>,
    pub argmin: Vec<Format>,
    pub checks: Vec<Check>,
}

impl CaseReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// A whole verification suite run.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub suite: &'static str,
    /// Match-win probability parameter, for the suites that take one.
    pub p: Option<BigRational>,
    pub cases: Vec<CaseReport>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass())
    }
}

/// Verify the extremal formats for a single strong player among equals
/// (strengths `(p/(1−p), 1, …, 1)` so the favourite wins each match with
/// probability `p > 1/2`): the balanced format attains the exact maximum
/// of `P_1` (uniquely for odd `n`; for even `n` every maximizer opens
/// with `k` or `n/2` matches), and the one-match-per-round format is the
/// unique minimizer. Every engine value is also cross-checked against
/// the per-round product formula.
pub fn verify_strongest_extremes(n_max: usize, p: &BigRational) -> Result<VerificationReport> {
    let half = BigRational::new(1.into(), 2.into());
    if *p <= half || *p >= BigRational::one() {
        return Err(Error::Domain(format!(
            "favourite's match-win probability must lie in (1/2, 1), got {p}"
        )));
    }
    let mut cases = Vec::new();
    for n in 3..=n_max {
        let values = one_strong_instance(n, p)?;
        let search = search_formats(&values, 0, Objective::Maximize)?;
        let mut checks = cross_check_products(&search, p);

        let balanced = Format::balanced(n)?;
        let sequential = Format::sequential(n)?;
        let decomp = balanced_decomposition(n)?;

        checks.push(Check::new(
            "balanced-attains-max",
            search.argmax.contains(&balanced),
            format!("argmax = {:?}", search.argmax),
        ));
        if n % 2 == 1 {
            checks.push(Check::new(
                "odd-n-unique-max",
                search.argmax == vec![balanced.clone()],
                format!("argmax = {:?}", search.argmax),
            ));
        } else {
            let allowed = [decomp.k, n / 2];
            checks.push(Check::new(
                "even-n-max-first-round",
                search
                    .argmax
                    .iter()
                    .all(|f| allowed.contains(&f.rounds()[0])),
                format!(
                    "first rounds {:?}, allowed {allowed:?}",
                    search.argmax.iter().map(|f| f.rounds()[0]).collect::<Vec<_>>()
                ),
            ));
        }
        checks.push(Check::new(
            "sequential-unique-min",
            search.argmin == vec![sequential],
            format!("argmin = {:?}", search.argmin),
        ));

        cases.push(CaseReport {
            n,
            argmax: search.argmax,
            argmin: search.argmin,
            checks,
        });
    }
    Ok(VerificationReport {
        suite: "strongest",
        p: Some(p.clone()),
        cases,
    })
}

/// Verify the weakest-player analogues with strengths `(1, …, 1, p/(1−p))`
/// where `p < 1/2`: one match per round attains the maximum of `P_n`,
/// the balanced format the minimum.
pub fn verify_weakest_extremes(n_max: usize, p: &BigRational) -> Result<VerificationReport> {
    let half = BigRational::new(1.into(), 2.into());
    if *p >= half || *p <= num_traits::Zero::zero() {
        return Err(Error::Domain(format!(
            "underdog's match-win probability must lie in (0, 1/2), got {p}"
        )));
    }
    let mut cases = Vec::new();
    for n in 3..=n_max {
        let values = one_weak_instance(n, p)?;
        let search = search_formats(&values, n - 1, Objective::Maximize)?;
        let balanced = Format::balanced(n)?;
        let sequential = Format::sequential(n)?;
        let checks = vec![
            Check::new(
                "sequential-attains-max",
                search.argmax.contains(&sequential),
                format!("argmax = {:?}", search.argmax),
            ),
            Check::new(
                "balanced-attains-min",
                search.argmin.contains(&balanced),
                format!("argmin = {:?}", search.argmin),
            ),
        ];
        cases.push(CaseReport {
            n,
            argmax: search.argmax,
            argmin: search.argmin,
            checks,
        });
    }
    Ok(VerificationReport {
        suite: "weakest",
        p: Some(p.clone()),
        cases,
    })
}

/// Check the weight process on seeded random instances: a submartingale
/// for the strongest player and a supermartingale for the weakest, over
/// every reachable state of every valid format.
pub fn verify_martingale(
    n_max: usize,
    instances_per_n: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut cases = Vec::new();
    for n in 2..=n_max {
        let mut checks = Vec::new();
        let formats = enumerate_formats(n)?;
        for idx in 0..instances_per_n {
            let values = random_instance(n, seed, idx as u64);
            for format in &formats {
                let engine = Engine::new(&values, format)?;
                for (role, player) in [("strongest", 0), ("weakest", n - 1)] {
                    let check = engine.weight_process_check(player)?;
                    checks.push(Check::new(
                        format!("instance-{idx}/[{format}]/{role}"),
                        check.pass,
                        format!(
                            "min slack {} at round {}",
                            exact_string(match role {
                                "strongest" => &check.min_gain.0,
                                _ => &check.min_drop.0,
                            }),
                            match role {
                                "strongest" => check.min_gain.1,
                                _ => check.min_drop.1,
                            }
                        ),
                    ));
                }
            }
        }
        cases.push(CaseReport {
            n,
            argmax: Vec::new(),
            argmin: Vec::new(),
            checks,
        });
    }
    Ok(VerificationReport {
        suite: "martingale",
        p: None,
        cases,
    })
}

/// Deterministic small-rational instance used by the self-check suites.
pub fn random_instance(n: usize, seed: u64, index: u64) -> PlayerValues {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (index.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
    let mut vals = Vec::with_capacity(n);
    for _ in 0..n {
        let num: u64 = rng.random_range(1..=24);
        let den: u64 = rng.random_range(1..=12);
        vals.push(BigRational::new(num.into(), den.into()));
    }
    PlayerValues::new(vals).expect("positive strengths")
}

fn cross_check_products(search: &SearchResult, p: &BigRational) -> Vec<Check> {
    let mut ok = true;
    let mut detail = String::from("engine equals per-round product on every format");
    for (format, engine_value) in &search.table {
        let product = special_case_win_prob(p, format).expect("p in (0,1)");
        if product != *engine_value {
            ok = false;
            detail = format!(
                "mismatch at [{format}]: engine {} vs product {}",
                exact_string(engine_value),
                exact_string(&product)
            );
            break;
        }
    }
    vec![Check::new("engine-matches-product", ok, detail)]
}

fn one_strong_instance(n: usize, p: &BigRational) -> Result<PlayerValues> {
    let favourite = p / (BigRational::one() - p);
    let mut v = vec![BigRational::one(); n];
    v[0] = favourite;
    PlayerValues::new(v)
}

fn one_weak_instance(n: usize, p: &BigRational) -> Result<PlayerValues> {
    let underdog = p / (BigRational::one() - p);
    let mut v = vec![BigRational::one(); n];
    v[n - 1] = underdog;
    PlayerValues::new(v)
}

/// The two bundled counterexamples, reproduced exactly.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub cases: Vec<CounterexampleCase>,
}

impl CounterexampleReport {
    pub fn pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass())
    }
}

/// One reproduced counterexample: named quantities plus checks.
#[derive(Debug, Clone)]
pub struct CounterexampleCase {
    pub name: &'static str,
    pub description: &'static str,
    /// `(label, exact value, 6-decimal display)` rows.
    pub quantities: Vec<(String, BigRational, String)>,
    pub checks: Vec<Check>,
}

impl CounterexampleCase {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub const CASE_NONMONOTONE: &str = "n4-nonmonotone";
pub const CASE_HALVING: &str = "n6-halving-suboptimal";

/// Reproduce one or both counterexamples. `case` is one of the named
/// cases or `"all"`.
pub fn reproduce_counterexamples(case: &str) -> Result<CounterexampleReport> {
    let mut cases = Vec::new();
    match case {
        CASE_NONMONOTONE => cases.push(nonmonotone_case()?),
        CASE_HALVING => cases.push(halving_case()?),
        "all" => {
            cases.push(nonmonotone_case()?);
            cases.push(halving_case()?);
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown case {other:?}; expected {CASE_NONMONOTONE:?}, {CASE_HALVING:?} or \"all\""
            )))
        }
    }
    Ok(CounterexampleReport { cases })
}

/// Weakening the weakest player can lower the favourite's win chance:
/// with strengths `(2,1,1,x)` under the format `2,1`, `P_1` at `x = 1/100`
/// is strictly below `P_1` at `x = 1/99`.
fn nonmonotone_case() -> Result<CounterexampleCase> {
    let format = Format::new(4, vec![2, 1])?;
    let rat = |num: i64, den: i64| BigRational::new(num.into(), den.into());

    let p_at = |x: BigRational| -> Result<BigRational> {
        let values = PlayerValues::new(vec![
            rat(2, 1),
            BigRational::one(),
            BigRational::one(),
            x,
        ])?;
        // Canonical index 0 is the strength-2 player.
        Ok(win_probabilities(&values, &format)?[0].clone())
    };

    let p_small = p_at(rat(1, 100))?;
    let p_large = p_at(rat(1, 99))?;
    let p_unit = p_at(BigRational::one())?;

    let checks = vec![
        Check::new(
            "exact-at-1/100",
            p_small == rat(31600, 60903),
            format!("P_1(2,1,1,1/100) = {}", exact_string(&p_small)),
        ),
        Check::new(
            "exact-at-1/99",
            p_large == rat(7744, 14925),
            format!("P_1(2,1,1,1/99) = {}", exact_string(&p_large)),
        ),
        Check::new(
            "weakening-the-weakest-hurts-the-favourite",
            p_small < p_large,
            format!(
                "{} < {}",
                exact_string(&p_small),
                exact_string(&p_large)
            ),
        ),
        Check::new(
            "consistency-at-x=1",
            p_unit == rat(4, 9),
            format!("P_1(2,1,1,1) = {}", exact_string(&p_unit)),
        ),
    ];
    Ok(CounterexampleCase {
        name: CASE_NONMONOTONE,
        description: "P_1 for strengths (2,1,1,x) under format 2,1 is not monotone in x",
        quantities: vec![
            quantity("P1(2,1,1,1/100)", p_small),
            quantity("P1(2,1,1,1/99)", p_large),
            quantity("P1(2,1,1,1)", p_unit),
        ],
        checks,
    })
}

/// Halving the field whenever it is even is not optimal for the best
/// player in general: for strengths `(6,4,3,1,1,1)`, the balanced format
/// `2,2,1` strictly beats `3,1,1`.
fn halving_case() -> Result<CounterexampleCase> {
    let values = PlayerValues::from_integers(&[6, 4, 3, 1, 1, 1])?;
    let balanced = Format::new(6, vec![2, 2, 1])?;
    let halving = Format::new(6, vec![3, 1, 1])?;
    let p_balanced = win_probabilities(&values, &balanced)?[0].clone();
    let p_halving = win_probabilities(&values, &halving)?[0].clone();

    let round4 = |r: &BigRational| format!("{:.4}", to_f64(r));
    let checks = vec![
        Check::new(
            "balanced-strictly-better",
            p_balanced > p_halving,
            format!(
                "{} > {}",
                exact_string(&p_balanced),
                exact_string(&p_halving)
            ),
        ),
        Check::new(
            "balanced-rounds-to-0.4422",
            round4(&p_balanced) == "0.4422",
            format!("P_1[2,2,1] ≈ {}", round4(&p_balanced)),
        ),
        Check::new(
            "halving-rounds-to-0.4412",
            round4(&p_halving) == "0.4412",
            format!("P_1[3,1,1] ≈ {}", round4(&p_halving)),
        ),
    ];
    Ok(CounterexampleCase {
        name: CASE_HALVING,
        description:
            "for strengths (6,4,3,1,1,1) the balanced format 2,2,1 beats the halving format 3,1,1",
        quantities: vec![
            quantity("P1[2,2,1]", p_balanced),
            quantity("P1[3,1,1]", p_halving),
        ],
        checks,
    })
}

fn quantity(label: &str, value: BigRational) -> (String, BigRational, String) {
    let display = format!("{:.6}", to_f64(&value));
    (label.to_string(), value, display)
}
