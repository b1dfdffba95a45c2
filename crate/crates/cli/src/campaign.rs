//! Seeded experiment campaigns: a config sweeps generator and algorithm
//! parameters, every (point, trial) job runs independently, and results come
//! back as flat rows plus aggregates that are exactly recomputable from the
//! rows.
//!
//! Determinism: trial r of point p always runs on RNG stream `p * trials + r`
//! under the campaign's master seed, and generator seeds derive from the
//! master seed, the point index, and (for per-trial instances) the trial
//! index. Jobs may execute in any parallel order; rows are assembled in
//! job-index order, so the output never depends on scheduling.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use wsep_core::emo::{run, Algorithm, Fitness, Seed, StopSpec};
use wsep_core::graph::VertexSet;
use wsep_core::lp::Rational;
use wsep_core::reducible::reducible_sequence;
use wsep_core::separator::brute_force_opt;

use crate::gen::{generate, GenError, GeneratorSpec, Shape};
use crate::{parse_event_name, parse_rational};

/// Largest instance the campaign will brute-force an optimum for.
pub const ORACLE_LIMIT: usize = 16;

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid campaign config: {0}")]
    Config(String),
    #[error(transparent)]
    Gen(#[from] GenError),
}

fn config_err(msg: impl Into<String>) -> CampaignError {
    CampaignError::Config(msg.into())
}

/// A scalar or a list of scalars; lists become sweep axes.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SweepOf<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> SweepOf<T> {
    fn values(&self) -> Vec<T> {
        match self {
            SweepOf::One(v) => vec![v.clone()],
            SweepOf::Many(vs) => vs.clone(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub campaign: CampaignSection,
    pub generator: GeneratorSection,
    pub algorithm: AlgorithmSection,
    pub stopping: StoppingSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignSection {
    pub trials: usize,
    pub master_seed: u64,
    /// "per-point" (default) shares one instance across a point's trials;
    /// "per-trial" regenerates with a trial-specific seed.
    #[serde(default = "default_instances")]
    pub instances: String,
}

fn default_instances() -> String {
    "per-point".into()
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSection {
    pub kind: String,
    pub w: Option<SweepOf<usize>>,
    #[serde(default)]
    pub n: Option<SweepOf<usize>>,
    #[serde(default)]
    pub p: Option<SweepOf<String>>,
    #[serde(default)]
    pub separator_size: Option<SweepOf<usize>>,
    #[serde(default)]
    pub components_per: Option<SweepOf<usize>>,
    #[serde(default)]
    pub component_size: Option<SweepOf<usize>>,
    #[serde(default)]
    pub attach_degree: Option<SweepOf<usize>>,
    #[serde(default)]
    pub rows: Option<SweepOf<usize>>,
    #[serde(default)]
    pub cols: Option<SweepOf<usize>>,
    #[serde(default)]
    pub heads: Option<SweepOf<usize>>,
    #[serde(default)]
    pub components: Option<SweepOf<usize>>,
    #[serde(default)]
    pub tail: Option<SweepOf<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSection {
    pub algorithm: SweepOf<String>,
    pub fitness: SweepOf<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoppingSection {
    pub budget: u64,
    /// Stop once every listed milestone is recorded; empty runs the budget.
    #[serde(default)]
    pub until: Vec<String>,
    /// Arm the oracle-dependent milestones from the certificate or, when it
    /// is inconclusive and the instance is small, from branch and bound.
    #[serde(default)]
    pub oracle: bool,
    /// Approximation slack; arms the approximation milestone with factor
    /// 1 + eps * (3W - 1) / 2.
    #[serde(default)]
    pub epsilon: Option<String>,
    /// Arm the head milestone with the union of heads of the instance's
    /// reducible sequence.
    #[serde(default)]
    pub heads: bool,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub rows: Option<String>,
    #[serde(default)]
    pub aggregates: Option<String>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config, CampaignError> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }
}

/// One result line: either a milestone occurrence or the trial's `end`
/// marker carrying the iteration count it stopped at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub point: usize,
    pub label: String,
    pub trial: usize,
    pub stream: u64,
    pub n: usize,
    pub m: usize,
    pub w: usize,
    pub algorithm: String,
    pub fitness: String,
    pub budget: u64,
    pub iterations: u64,
    pub event: String,
    pub iteration: u64,
}

/// Exact per-(point, milestone) statistics over the trials that recorded it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregate {
    pub point: usize,
    pub label: String,
    pub event: String,
    pub trials: usize,
    pub hits: usize,
    pub median: Option<u64>,
    /// Exact mean as a rational string.
    pub mean: Option<String>,
    pub q25: Option<u64>,
    pub q75: Option<u64>,
    pub min: Option<u64>,
    pub max: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub aggregates: Vec<Aggregate>,
}

#[derive(Clone, Debug)]
struct Point {
    label: String,
    shape: Shape,
    w: usize,
    algorithm: Algorithm,
    algorithm_name: String,
    fitness: Fitness,
    fitness_name: String,
}

fn axis(name: &str, sweep: &Option<SweepOf<usize>>) -> Result<Vec<(String, usize)>, CampaignError> {
    match sweep {
        Some(s) => Ok(s.values().into_iter().map(|v| (format!("{name}={v}"), v)).collect()),
        None => Err(config_err(format!("generator is missing `{name}`"))),
    }
}

fn axis_or(name: &str, sweep: &Option<SweepOf<usize>>, default: usize) -> Vec<(String, usize)> {
    match sweep {
        Some(s) => s.values().into_iter().map(|v| (format!("{name}={v}"), v)).collect(),
        None => vec![(format!("{name}={default}"), default)],
    }
}

fn cartesian(axes: &[Vec<(String, usize)>]) -> Vec<(String, Vec<usize>)> {
    let mut combos: Vec<(String, Vec<usize>)> = vec![(String::new(), Vec::new())];
    for axis in axes {
        let mut next = Vec::with_capacity(combos.len() * axis.len());
        for (label, values) in &combos {
            for (part, v) in axis {
                let mut l = label.clone();
                if !l.is_empty() {
                    l.push(',');
                }
                l.push_str(part);
                let mut vs = values.clone();
                vs.push(*v);
                next.push((l, vs));
            }
        }
        combos = next;
    }
    combos
}

fn expand_points(config: &Config) -> Result<Vec<Point>, CampaignError> {
    let g = &config.generator;
    let kind = g.kind.as_str();
    let w_axis = axis("w", &g.w)?;
    let mut shapes: Vec<(String, Shape, usize)> = Vec::new();
    match kind {
        "path" => {
            for (wl, w) in &w_axis {
                for (nl, n) in axis("n", &g.n)? {
                    shapes.push((format!("kind=path,{wl},{nl}"), Shape::Path { n }, *w));
                }
            }
        }
        "grid" => {
            let axes = [axis("rows", &g.rows)?, axis("cols", &g.cols)?];
            for (wl, w) in &w_axis {
                for (label, v) in cartesian(&axes) {
                    shapes.push((
                        format!("kind=grid,{wl},{label}"),
                        Shape::Grid { rows: v[0], cols: v[1] },
                        *w,
                    ));
                }
            }
        }
        "gnp" => {
            let ps = g
                .p
                .as_ref()
                .ok_or_else(|| config_err("generator is missing `p`"))?
                .values();
            for (wl, w) in &w_axis {
                for (nl, n) in axis("n", &g.n)? {
                    for p in &ps {
                        let prob = p.parse().map_err(CampaignError::Gen)?;
                        shapes.push((
                            format!("kind=gnp,{wl},{nl},p={prob}"),
                            Shape::Gnp { n, p: prob },
                            *w,
                        ));
                    }
                }
            }
        }
        "planted" => {
            let axes = [
                axis("separator_size", &g.separator_size)?,
                axis("components_per", &g.components_per)?,
                axis("component_size", &g.component_size)?,
                axis_or("attach_degree", &g.attach_degree, 1),
            ];
            for (wl, w) in &w_axis {
                for (label, v) in cartesian(&axes) {
                    shapes.push((
                        format!("kind=planted,{wl},{label}"),
                        Shape::Planted {
                            separator_size: v[0],
                            components_per: v[1],
                            component_size: v[2],
                            attach_degree: v[3],
                        },
                        *w,
                    ));
                }
            }
        }
        "crown" => {
            let axes = [
                axis("heads", &g.heads)?,
                axis("components", &g.components)?,
                axis("component_size", &g.component_size)?,
                axis_or("tail", &g.tail, 0),
            ];
            for (wl, w) in &w_axis {
                for (label, v) in cartesian(&axes) {
                    shapes.push((
                        format!("kind=crown,{wl},{label}"),
                        Shape::Crown {
                            heads: v[0],
                            components: v[1],
                            component_size: v[2],
                            tail: v[3],
                        },
                        *w,
                    ));
                }
            }
        }
        other => return Err(config_err(format!("unknown generator kind {other:?}"))),
    }

    let mut points = Vec::new();
    for alg_name in config.algorithm.algorithm.values() {
        let algorithm = match alg_name.as_str() {
            "semo" => Algorithm::Semo,
            "semo-alt" => Algorithm::SemoAlt,
            other => return Err(config_err(format!("unknown algorithm {other:?}"))),
        };
        for fit_name in config.algorithm.fitness.values() {
            let fitness = match fit_name.as_str() {
                "f1" => Fitness::F1,
                "f2" => Fitness::F2,
                "f3" => Fitness::F3,
                other => return Err(config_err(format!("unknown fitness {other:?}"))),
            };
            for (label, shape, w) in &shapes {
                points.push(Point {
                    label: format!("{label},alg={alg_name},fit={fit_name}"),
                    shape: shape.clone(),
                    w: *w,
                    algorithm,
                    algorithm_name: alg_name.clone(),
                    fitness,
                    fitness_name: fit_name.clone(),
                });
            }
        }
    }
    Ok(points)
}

fn generator_seed(master: u64, point: usize, trial: Option<usize>) -> u64 {
    let base = master.wrapping_add(1 + point as u64);
    match trial {
        None => base,
        Some(t) => base.wrapping_add((t as u64 + 1) << 32),
    }
}

struct Prepared {
    spec_w: usize,
    stop: StopSpec,
    instance: Option<wsep_core::separator::Instance>,
}

fn arm_stop(
    config: &Config,
    point: &Point,
    generated: &crate::gen::Generated,
) -> Result<StopSpec, CampaignError> {
    let mut stop = StopSpec::budget(config.stopping.budget);
    for name in &config.stopping.until {
        stop.until.push(parse_event_name(name).map_err(config_err)?);
    }
    if config.stopping.oracle {
        stop.opt = generated.certificate.exact().or_else(|| {
            if generated.instance.n() <= ORACLE_LIMIT {
                brute_force_opt(&generated.instance, None, None)
                    .ok()
                    .and_then(|o| o.opt())
            } else {
                None
            }
        });
        if let Some(eps) = &config.stopping.epsilon {
            let eps = parse_rational(eps).map_err(|e| config_err(e.to_string()))?;
            if eps < Rational::from_integer(0.into()) {
                return Err(config_err("epsilon must be nonnegative"));
            }
            let three_w = Rational::from_integer((3 * point.w as i64).into());
            let one = Rational::from_integer(1.into());
            let half = Rational::new(BigInt::from(1), BigInt::from(2));
            stop.rho = Some(&one + eps * (three_w - &one) * half);
        }
    }
    if config.stopping.heads {
        let mut heads = VertexSet::new(generated.instance.n());
        for pair in reducible_sequence(&generated.instance) {
            heads.union_with(&pair.head);
        }
        if !heads.is_empty() {
            stop.heads = Some(heads);
        }
    }
    Ok(stop)
}

/// Expands the config, runs every (point, trial) job, and returns rows plus
/// aggregates. Per-trial budget exhaustion shows up as an `end` row short of
/// any milestone, never as an error.
pub fn run_campaign(config: &Config) -> Result<Outcome, CampaignError> {
    let points = expand_points(config)?;
    if points.is_empty() {
        return Err(config_err("config expands to no points"));
    }
    let trials = config.campaign.trials;
    if trials == 0 {
        return Err(config_err("trials must be positive"));
    }
    let per_trial = match config.campaign.instances.as_str() {
        "per-point" => false,
        "per-trial" => true,
        other => return Err(config_err(format!("unknown instances mode {other:?}"))),
    };
    let master = config.campaign.master_seed;

    let mut prepared = Vec::with_capacity(points.len());
    for (idx, point) in points.iter().enumerate() {
        let spec = GeneratorSpec {
            shape: point.shape.clone(),
            w: point.w,
            seed: generator_seed(master, idx, None),
        };
        let generated = generate(&spec)?;
        let stop = arm_stop(config, point, &generated)?;
        prepared.push(Prepared {
            spec_w: point.w,
            stop,
            instance: (!per_trial).then_some(generated.instance),
        });
    }

    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..trials).map(move |t| (p, t)))
        .collect();
    let per_job: Result<Vec<Vec<Row>>, CampaignError> = jobs
        .into_par_iter()
        .map(|(p, t)| {
            let point = &points[p];
            let prep = &prepared[p];
            let stream = (p * trials + t) as u64;
            let (instance, stop) = match &prep.instance {
                Some(inst) => (inst.clone(), prep.stop.clone()),
                None => {
                    let spec = GeneratorSpec {
                        shape: point.shape.clone(),
                        w: point.w,
                        seed: generator_seed(master, p, Some(t)),
                    };
                    let generated = generate(&spec)?;
                    let stop = arm_stop(config, point, &generated)?;
                    (generated.instance, stop)
                }
            };
            let trace = run(
                &instance,
                point.fitness,
                point.algorithm,
                Seed::with_stream(master, stream),
                &stop,
            );
            let base = Row {
                point: p,
                label: point.label.clone(),
                trial: t,
                stream,
                n: instance.n(),
                m: instance.graph.m(),
                w: prep.spec_w,
                algorithm: point.algorithm_name.clone(),
                fitness: point.fitness_name.clone(),
                budget: stop.budget,
                iterations: trace.iterations,
                event: String::new(),
                iteration: 0,
            };
            let mut rows = Vec::with_capacity(trace.events.len() + 1);
            for record in &trace.events {
                rows.push(Row {
                    event: record.name.to_string(),
                    iteration: record.iteration,
                    ..base.clone()
                });
            }
            rows.push(Row {
                event: "end".into(),
                iteration: trace.iterations,
                ..base
            });
            Ok(rows)
        })
        .collect();
    let rows: Vec<Row> = per_job?.into_iter().flatten().collect();
    let aggregates = aggregate_rows(&rows);
    Ok(Outcome { rows, aggregates })
}

/// Nearest-rank quantile of a sorted sample (p in hundredths).
fn nearest_rank(sorted: &[u64], hundredths: usize) -> u64 {
    let rank = (sorted.len() * hundredths).div_ceil(100).max(1);
    sorted[rank - 1]
}

/// Recomputes the aggregate table from rows; `run_campaign` emits exactly
/// this, so stored aggregates can always be audited against stored rows.
pub fn aggregate_rows(rows: &[Row]) -> Vec<Aggregate> {
    let mut trials_per_point: BTreeMap<usize, usize> = BTreeMap::new();
    let mut hits: BTreeMap<(usize, String), Vec<u64>> = BTreeMap::new();
    let mut labels: BTreeMap<usize, String> = BTreeMap::new();
    for row in rows {
        labels.entry(row.point).or_insert_with(|| row.label.clone());
        if row.event == "end" {
            *trials_per_point.entry(row.point).or_default() += 1;
        } else {
            hits.entry((row.point, row.event.clone()))
                .or_default()
                .push(row.iteration);
        }
    }
    let mut out = Vec::new();
    for ((point, event), mut iterations) in hits {
        iterations.sort_unstable();
        let h = iterations.len();
        let sum: BigInt = iterations.iter().map(|&i| BigInt::from(i)).sum();
        let mean = Rational::new(sum, BigInt::from(h)).to_string();
        out.push(Aggregate {
            point,
            label: labels[&point].clone(),
            event,
            trials: trials_per_point.get(&point).copied().unwrap_or(0),
            hits: h,
            median: Some(iterations[(h - 1) / 2]),
            mean: Some(mean),
            q25: Some(nearest_rank(&iterations, 25)),
            q75: Some(nearest_rank(&iterations, 75)),
            min: Some(iterations[0]),
            max: Some(iterations[h - 1]),
        });
    }
    // Points whose armed milestones never fired still deserve a line.
    for (&point, &trials) in &trials_per_point {
        if !out.iter().any(|a| a.point == point) {
            out.push(Aggregate {
                point,
                label: labels[&point].clone(),
                event: "none".into(),
                trials,
                hits: 0,
                median: None,
                mean: None,
                q25: None,
                q75: None,
                min: None,
                max: None,
            });
        }
    }
    out.sort_by(|a, b| (a.point, &a.event).cmp(&(b.point, &b.event)));
    out
}

pub fn rows_to_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf8")
}

pub fn rows_from_csv(text: &str) -> Result<Vec<Row>, CampaignError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .collect::<Result<Vec<Row>, _>>()
        .map_err(|e| config_err(format!("malformed rows csv: {e}")))
}

pub fn aggregates_to_csv(aggregates: &[Aggregate]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for a in aggregates {
        w.serialize(a).expect("aggregates serialize");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf8")
}

pub fn aggregates_from_csv(text: &str) -> Result<Vec<Aggregate>, CampaignError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .collect::<Result<Vec<Aggregate>, _>>()
        .map_err(|e| config_err(format!("malformed aggregates csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config(extra: &str) -> Config {
        let text = format!(
            r#"
[campaign]
trials = 6
master_seed = 11

[generator]
kind = "path"
n = [4, 8]
w = 1

[algorithm]
algorithm = "semo"
fitness = "f3"

[stopping]
budget = 30000
until = ["zero_point"]
{extra}
"#
        );
        Config::from_toml(&text).unwrap()
    }

    #[test]
    fn campaigns_are_deterministic() {
        let config = base_config("");
        let a = run_campaign(&config).unwrap();
        let b = run_campaign(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.rows.iter().filter(|r| r.event == "end").count(),
            12,
            "6 trials x 2 points"
        );
    }

    #[test]
    fn zero_point_medians_grow_with_size() {
        let config = base_config("");
        let outcome = run_campaign(&config).unwrap();
        let median = |point: usize| {
            outcome
                .aggregates
                .iter()
                .find(|a| a.point == point && a.event == "zero_point")
                .and_then(|a| a.median)
                .expect("zero point reached on every trial")
        };
        assert!(median(0) < median(1), "{} vs {}", median(0), median(1));
    }

    #[test]
    fn oracle_armed_runs_record_the_optimum() {
        let config = base_config("oracle = true");
        let mut config = config;
        config.stopping.until = vec!["optimum".into()];
        let outcome = run_campaign(&config).unwrap();
        for point in [0usize, 1] {
            let agg = outcome
                .aggregates
                .iter()
                .find(|a| a.point == point && a.event == "optimum")
                .expect("optimum aggregated");
            assert_eq!(agg.hits, agg.trials);
        }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let config = base_config("oracle = true");
        let outcome = run_campaign(&config).unwrap();
        let rows_text = rows_to_csv(&outcome.rows);
        let rows_back = rows_from_csv(&rows_text).unwrap();
        assert_eq!(outcome.rows, rows_back);
        let agg_text = aggregates_to_csv(&outcome.aggregates);
        let agg_back = aggregates_from_csv(&agg_text).unwrap();
        assert_eq!(outcome.aggregates, agg_back);
        assert_eq!(aggregate_rows(&rows_back), outcome.aggregates);
    }

    #[test]
    fn aggregates_use_exact_statistics() {
        let mk = |trial: usize, event: &str, iteration: u64| Row {
            point: 0,
            label: "test".into(),
            trial,
            stream: trial as u64,
            n: 4,
            m: 3,
            w: 1,
            algorithm: "semo".into(),
            fitness: "f3".into(),
            budget: 100,
            iterations: 100,
            event: event.into(),
            iteration,
        };
        let mut rows = Vec::new();
        for (t, it) in [(0, 7), (1, 1), (2, 4), (3, 10)] {
            rows.push(mk(t, "zero_point", it));
            rows.push(mk(t, "end", 100));
        }
        rows.push(mk(4, "end", 100));
        let aggs = aggregate_rows(&rows);
        assert_eq!(aggs.len(), 1);
        let a = &aggs[0];
        assert_eq!(a.trials, 5);
        assert_eq!(a.hits, 4);
        assert_eq!(a.median, Some(4));
        assert_eq!(a.mean.as_deref(), Some("11/2"));
        assert_eq!(a.q25, Some(1));
        assert_eq!(a.q75, Some(7));
        assert_eq!(a.min, Some(1));
        assert_eq!(a.max, Some(10));
    }

    #[test]
    fn sweeps_expand_cartesian_axes() {
        let text = r#"
[campaign]
trials = 1
master_seed = 0

[generator]
kind = "gnp"
n = [4, 5]
p = ["0/1", "1/2"]
w = [1, 2]

[algorithm]
algorithm = ["semo", "semo-alt"]
fitness = "f1"

[stopping]
budget = 10
"#;
        let config = Config::from_toml(text).unwrap();
        let points = expand_points(&config).unwrap();
        assert_eq!(points.len(), 2 * 2 * 2 * 2);
        assert!(points[0].label.contains("kind=gnp"));
        assert!(points.iter().any(|p| p.label.contains("alg=semo-alt")));
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(Config::from_toml("[campaign]\ntrials = 1").is_err());
        let mut config = base_config("");
        config.generator.kind = "mystery".into();
        assert!(matches!(run_campaign(&config), Err(CampaignError::Config(_))));
        let mut config = base_config("");
        config.stopping.until = vec!["sunrise".into()];
        assert!(run_campaign(&config).is_err());
        let mut config = base_config("");
        config.campaign.trials = 0;
        assert!(run_campaign(&config).is_err());
    }

    #[test]
    fn per_trial_instances_vary_but_stay_reproducible() {
        let text = r#"
[campaign]
trials = 4
master_seed = 5
instances = "per-trial"

[generator]
kind = "gnp"
n = 8
p = "1/3"
w = 1

[algorithm]
algorithm = "semo"
fitness = "f1"

[stopping]
budget = 200
"#;
        let config = Config::from_toml(text).unwrap();
        let a = run_campaign(&config).unwrap();
        let b = run_campaign(&config).unwrap();
        assert_eq!(a, b);
        let ms: Vec<usize> = a
            .rows
            .iter()
            .filter(|r| r.event == "end")
            .map(|r| r.m)
            .collect();
        assert!(ms.windows(2).any(|w| w[0] != w[1]), "edge counts all equal: {ms:?}");
    }
}
