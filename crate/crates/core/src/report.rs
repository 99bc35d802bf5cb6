//! Report documents: one stable schema serialized as JSON (default),
//! CSV, or an aligned table.
//!
//! Every exact value is carried losslessly as a `numerator/denominator`
//! string; the accompanying 6-decimal floats are annotations only.
//! Serialization is deterministic (struct field order, no maps), so
//! identical invocations produce byte-identical documents.

use num_rational::BigRational;
use serde::Serialize;

use crate::bounds::{self, BoundsReport};
use crate::exact::Engine;
use crate::format::{enumerate_formats_with_guard, Format};
use crate::montecarlo::EstimateReport;
use crate::optimize::{
    CounterexampleReport, Objective, SearchResult, VerificationReport,
};
use crate::rational::{approx_string, exact_string};
use crate::values::PlayerValues;
use crate::Result;

pub const SCHEMA_VERSION: &str = env!("CARGO_PKG_VERSION");

/// An exact rational paired with its display approximation.
#[derive(Debug, Clone, Serialize)]
pub struct Value {
    pub exact: String,
    pub approx: String,
}

impl Value {
    pub fn new(r: &BigRational) -> Self {
        Self {
            exact: exact_string(r),
            approx: approx_string(r),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<Results>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundsRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formats: Option<FormatsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repro: Option<ReproSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSection>,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InstanceEcho {
    pub n: usize,
    /// The strengths in input order, exact.
    pub values: Vec<String>,
    /// 1-based input indices sorted by descending strength.
    pub canonical_order: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Results {
    pub per_player: Vec<PlayerRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reach: Option<Vec<ReachRow>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PlayerRow {
    /// 1-based index in the caller's input order.
    pub index: usize,
    pub exact: String,
    pub approx: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReachRow {
    pub index: usize,
    /// Round the player must be alive at the start of; `r+1` means
    /// winning the tournament.
    pub round: usize,
    pub exact: String,
    pub approx: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsRow {
    pub index: usize,
    pub mean_win_prob: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_weight_lower: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_weight_upper: Option<Value>,
    pub mean_opponent_upper: Value,
    pub surrogate_lower: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strongest_opponent_lower: Option<Value>,
    pub universal_upper: Value,
    pub below_uniform: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchSection {
    /// 1-based index in the caller's input order.
    pub player: usize,
    pub objective: String,
    pub table: Vec<SearchRow>,
    pub argmax: Vec<String>,
    pub argmin: Vec<String>,
    pub best: Vec<String>,
    /// Extremality holds for this instance by exhaustive exact
    /// comparison; nothing is asserted beyond it.
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchRow {
    pub format: String,
    pub exact: String,
    pub approx: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FormatsSection {
    pub n: usize,
    pub count: usize,
    pub formats: Vec<FormatRow>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FormatRow {
    pub rounds: String,
    pub alive_counts: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifySection {
    pub pass: bool,
    pub suites: Vec<SuiteRow>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteRow {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    pub pass: bool,
    pub cases: Vec<SuiteCaseRow>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteCaseRow {
    pub label: String,
    pub pass: bool,
    pub checks: Vec<CheckRow>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRow {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReproSection {
    pub pass: bool,
    pub cases: Vec<ReproCaseRow>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReproCaseRow {
    pub name: String,
    pub description: String,
    pub pass: bool,
    pub quantities: Vec<QuantityRow>,
    pub checks: Vec<CheckRow>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuantityRow {
    pub label: String,
    pub exact: String,
    pub approx: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct McSection {
    pub trials: u64,
    pub seed: u64,
    pub rng_algorithm: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Metadata {
    /// `exact` or `montecarlo`.
    pub engine: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
}

impl Report {
    fn bare(command: String, engine: &str) -> Self {
        Self {
            command,
            instance: None,
            format: None,
            results: None,
            bounds: None,
            search: None,
            formats: None,
            verify: None,
            repro: None,
            mc: None,
            metadata: Metadata {
                engine: engine.to_string(),
                seed: None,
                version: SCHEMA_VERSION.to_string(),
            },
        }
    }

    /// Whether a verification-style section reports a failure.
    pub fn verification_failed(&self) -> bool {
        let verify_failed = self.verify.as_ref().is_some_and(|v| !v.pass);
        let repro_failed = self.repro.as_ref().is_some_and(|r| !r.pass);
        verify_failed || repro_failed
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `player,quantity,exact,approx` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("player,quantity,exact,approx\n");
        let mut row = |player: String, quantity: &str, exact: &str, approx: &str| {
            out.push_str(&format!("{player},{quantity},{exact},{approx}\n"));
        };
        if let Some(results) = &self.results {
            for r in &results.per_player {
                row(r.index.to_string(), "win", &r.exact, &r.approx);
            }
            for r in &results.per_player {
                if let Some(se) = &r.std_error {
                    row(r.index.to_string(), "stdError", "", se);
                }
            }
            if let Some(reach) = &results.reach {
                for r in reach {
                    row(
                        r.index.to_string(),
                        &format!("reach[{}]", r.round),
                        &r.exact,
                        &r.approx,
                    );
                }
            }
        }
        if let Some(bounds) = &self.bounds {
            for b in bounds {
                let idx = b.index.to_string();
                row(idx.clone(), "meanWinProb", &b.mean_win_prob.exact, &b.mean_win_prob.approx);
                if let Some(v) = &b.initial_weight_lower {
                    row(idx.clone(), "initialWeightLower", &v.exact, &v.approx);
                }
                if let Some(v) = &b.initial_weight_upper {
                    row(idx.clone(), "initialWeightUpper", &v.exact, &v.approx);
                }
                row(idx.clone(), "meanOpponentUpper", &b.mean_opponent_upper.exact, &b.mean_opponent_upper.approx);
                row(idx.clone(), "surrogateLower", &b.surrogate_lower.exact, &b.surrogate_lower.approx);
                if let Some(v) = &b.strongest_opponent_lower {
                    row(idx.clone(), "strongestOpponentLower", &v.exact, &v.approx);
                }
                row(idx.clone(), "universalUpper", &b.universal_upper.exact, &b.universal_upper.approx);
                row(idx, "belowUniform", &b.below_uniform.to_string(), "");
            }
        }
        if let Some(search) = &self.search {
            for t in &search.table {
                row(
                    search.player.to_string(),
                    &format!("win[{}]", t.format),
                    &t.exact,
                    &t.approx,
                );
            }
        }
        if let Some(formats) = &self.formats {
            for f in &formats.formats {
                row(String::new(), "format", &format!("\"{}\"", f.rounds), "");
            }
        }
        if let Some(verify) = &self.verify {
            for s in &verify.suites {
                for c in &s.cases {
                    for ch in &c.checks {
                        row(
                            String::new(),
                            &format!("{}/{}/{}", s.suite, c.label, ch.name),
                            if ch.pass { "pass" } else { "FAIL" },
                            "",
                        );
                    }
                }
            }
        }
        if let Some(repro) = &self.repro {
            for c in &repro.cases {
                for q in &c.quantities {
                    row(String::new(), &format!("{}/{}", c.name, q.label), &q.exact, &q.approx);
                }
                for ch in &c.checks {
                    row(
                        String::new(),
                        &format!("{}/{}", c.name, ch.name),
                        if ch.pass { "pass" } else { "FAIL" },
                        "",
                    );
                }
            }
        }
        out
    }

    /// Human-oriented aligned text.
    pub fn to_table(&self) -> String {
        let csv = self.to_csv();
        let rows: Vec<Vec<String>> = csv
            .lines()
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect();
        let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut widths = vec![0usize; cols];
        for r in &rows {
            for (c, cell) in r.iter().enumerate() {
                widths[c] = widths[c].max(cell.len());
            }
        }
        let mut out = String::new();
        for r in &rows {
            let line: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(c, cell)| format!("{cell:<width$}", width = widths[c]))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn render(&self, style: OutputStyle) -> String {
        match style {
            OutputStyle::Json => self.to_json(),
            OutputStyle::Csv => self.to_csv(),
            OutputStyle::Table => self.to_table(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputStyle {
    Json,
    Csv,
    Table,
}

fn instance_echo(values: &PlayerValues) -> InstanceEcho {
    let originals = values.to_original_order(values.values());
    InstanceEcho {
        n: values.n(),
        values: originals.iter().map(exact_string).collect(),
        canonical_order: values.canon_to_orig().iter().map(|&o| o + 1).collect(),
    }
}

/// Canonical-order probabilities presented in input order, 1-based.
fn player_rows(values: &PlayerValues, canonical: &[BigRational]) -> Vec<PlayerRow> {
    let in_orig = values.to_original_order(canonical);
    in_orig
        .iter()
        .enumerate()
        .map(|(idx, p)| PlayerRow {
            index: idx + 1,
            exact: exact_string(p),
            approx: approx_string(p),
            std_error: None,
        })
        .collect()
}

/// Exact analysis report: win probabilities, optionally reach
/// probabilities for every round.
pub fn analyze_exact(
    command: String,
    values: &PlayerValues,
    format: &Format,
    include_reach: bool,
    guard: usize,
) -> Result<Report> {
    let engine = Engine::with_guard(values, format, guard)?;
    let wins = engine.win_probabilities();
    let mut results = Results {
        per_player: player_rows(values, &wins),
        reach: None,
    };
    if include_reach {
        let matrix = engine.reach_matrix();
        let mut rows = Vec::new();
        for orig in 0..values.n() {
            let canon = values.orig_to_canon()[orig];
            for (s_idx, p) in matrix.reach[canon].iter().enumerate() {
                rows.push(ReachRow {
                    index: orig + 1,
                    round: s_idx + 1,
                    exact: exact_string(p),
                    approx: approx_string(p),
                });
            }
        }
        results.reach = Some(rows);
    }
    let mut report = Report::bare(command, "exact");
    report.instance = Some(instance_echo(values));
    report.format = Some(format.to_string());
    report.results = Some(results);
    Ok(report)
}

/// Monte Carlo analysis report. Point estimates are exact as
/// `winCount/trials`; floats annotate.
pub fn analyze_mc(
    command: String,
    values: &PlayerValues,
    format: &Format,
    estimate: &EstimateReport,
) -> Report {
    let counts_canonical: Vec<(u64, f64)> = estimate
        .win_counts
        .iter()
        .zip(&estimate.standard_errors)
        .map(|(&w, &se)| (w, se))
        .collect();
    let in_orig = values.to_original_order(&counts_canonical);
    let per_player = in_orig
        .iter()
        .enumerate()
        .map(|(idx, (wins, se))| PlayerRow {
            index: idx + 1,
            exact: format!("{wins}/{}", estimate.trials),
            approx: format!("{:.6}", *wins as f64 / estimate.trials as f64),
            std_error: Some(format!("{se:.6}")),
        })
        .collect();
    let mut report = Report::bare(command, "montecarlo");
    report.instance = Some(instance_echo(values));
    report.format = Some(format.to_string());
    report.results = Some(Results {
        per_player,
        reach: None,
    });
    report.mc = Some(McSection {
        trials: estimate.trials,
        seed: estimate.seed,
        rng_algorithm: estimate.rng_algorithm.to_string(),
    });
    report.metadata.seed = Some(estimate.seed);
    report
}

/// Bounds report, rows in input order.
pub fn bounds(
    command: String,
    values: &PlayerValues,
    format: &Format,
) -> Result<Report> {
    let BoundsReport { per_player } = bounds::bounds_report(values, format)?;
    // per_player is canonical; present in input order.
    let mut rows: Vec<BoundsRow> = Vec::with_capacity(values.n());
    for orig in 0..values.n() {
        let canon = values.orig_to_canon()[orig];
        let b = &per_player[canon];
        rows.push(BoundsRow {
            index: orig + 1,
            mean_win_prob: Value::new(&b.mean_win_prob),
            initial_weight_lower: b.initial_weight_lower.as_ref().map(Value::new),
            initial_weight_upper: b.initial_weight_upper.as_ref().map(Value::new),
            mean_opponent_upper: Value::new(&b.mean_opponent_upper),
            surrogate_lower: Value::new(&b.surrogate_lower),
            strongest_opponent_lower: b.strongest_opponent_lower.as_ref().map(Value::new),
            universal_upper: Value::new(&b.universal_upper),
            below_uniform: b.below_uniform,
        });
    }
    let mut report = Report::bare(command, "exact");
    report.instance = Some(instance_echo(values));
    report.format = Some(format.to_string());
    report.bounds = Some(rows);
    Ok(report)
}

/// Format-search report. `player` is the 1-based input index.
pub fn search(
    command: String,
    values: &PlayerValues,
    player: usize,
    result: &SearchResult,
) -> Report {
    let fmt_list = |fs: &[Format]| fs.iter().map(Format::to_string).collect::<Vec<_>>();
    let mut report = Report::bare(command, "exact");
    report.instance = Some(instance_echo(values));
    report.search = Some(SearchSection {
        player,
        objective: match result.objective {
            Objective::Maximize => "max".into(),
            Objective::Minimize => "min".into(),
        },
        table: result
            .table
            .iter()
            .map(|(f, p)| SearchRow {
                format: f.to_string(),
                exact: exact_string(p),
                approx: approx_string(p),
            })
            .collect(),
        argmax: fmt_list(&result.argmax),
        argmin: fmt_list(&result.argmin),
        best: fmt_list(result.best()),
        note: "exhaustive exact comparison for this instance only".into(),
    });
    report
}

/// Format listing report.
pub fn formats(command: String, n: usize, guard: usize) -> Result<Report> {
    let all = enumerate_formats_with_guard(n, guard)?;
    let mut report = Report::bare(command, "exact");
    report.formats = Some(FormatsSection {
        n,
        count: all.len(),
        formats: all
            .iter()
            .map(|f| FormatRow {
                rounds: f.to_string(),
                alive_counts: f
                    .alive_counts()
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            })
            .collect(),
    });
    Ok(report)
}

/// Verification report over one or more suites.
pub fn verify(command: String, suites: Vec<SuiteRow>) -> Report {
    let pass = suites.iter().all(|s| s.pass);
    let mut report = Report::bare(command, "exact");
    report.verify = Some(VerifySection { pass, suites });
    report
}

pub fn suite_row(report: &VerificationReport) -> SuiteRow {
    SuiteRow {
        suite: report.suite.to_string(),
        p: report.p.as_ref().map(exact_string),
        pass: report.pass(),
        cases: report
            .cases
            .iter()
            .map(|c| SuiteCaseRow {
                label: format!("n={}", c.n),
                pass: c.pass(),
                checks: c
                    .checks
                    .iter()
                    .map(|ch| CheckRow {
                        name: ch.name.clone(),
                        pass: ch.pass,
                        detail: ch.detail.clone(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Counterexample-reproduction report.
pub fn repro(command: String, result: &CounterexampleReport) -> Report {
    let mut report = Report::bare(command, "exact");
    report.repro = Some(ReproSection {
        pass: result.pass(),
        cases: result
            .cases
            .iter()
            .map(|c| ReproCaseRow {
                name: c.name.to_string(),
                description: c.description.to_string(),
                pass: c.pass(),
                quantities: c
                    .quantities
                    .iter()
                    .map(|(label, value, _)| QuantityRow {
                        label: label.clone(),
                        exact: exact_string(value),
                        approx: approx_string(value),
                    })
                    .collect(),
                checks: c
                    .checks
                    .iter()
                    .map(|ch| CheckRow {
                        name: ch.name.clone(),
                        pass: ch.pass,
                        detail: ch.detail.clone(),
                    })
                    .collect(),
            })
            .collect(),
    });
    report
}
