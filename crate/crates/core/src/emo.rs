//! Multi-objective evolutionary search over separator candidates.
//!
//! The engine keeps a population of pairwise non-dominated search points
//! under one of three lexicographically minimized objective vectors:
//!
//! * `f1` is (|X₁|, |u(X)|, −Σ degrees of X₁): cheap, purely combinatorial;
//! * `f2` is (|X₁|, |u(X)|, LP(G[u(X)])): the relaxation value of what is
//!   still uncovered replaces the degree sum;
//! * `f3` is (|X₁|, LP(G[u(X)])): drops the uncovered count entirely.
//!
//! Each iteration clones a uniformly chosen member, mutates it (either the
//! standard per-bit flip or the three-branch alternative operator), and
//! offers the child to the archive, which accepts unless a stored vector
//! strictly dominates it and then evicts everything the child weakly
//! dominates. Runs are instrumented: structural milestones are recorded the
//! first time a point witnessing them enters the population.
//!
//! All dominance decisions are exact; LP components are arbitrary-precision
//! rationals served by the memoized solver.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::graph::VertexSet;
use crate::lp::{lp_value_of, persistent_ones, LpCache, Rational};
use crate::separator::{uncovered, Instance, SearchPoint};

/// Which objective vector the engine optimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fitness {
    F1,
    F2,
    F3,
}

/// Which mutation operator drives the run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Semo,
    SemoAlt,
}

/// Last objective component: a degree sum for `f1`, a relaxation value for
/// `f2`/`f3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Third {
    NegDegreeSum(i64),
    LpValue(Rational),
}

/// An evaluated objective vector. The shape follows the fitness that
/// produced it: `uncovered` is present for `f1`/`f2` and absent for `f3`,
/// and `third` carries the matching variant. Vectors of different shapes
/// must never meet in one comparison or archive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitnessVector {
    pub ones: usize,
    pub uncovered: Option<usize>,
    pub third: Third,
}

/// Componentwise `a <= b`. Panics when the two vectors come from different
/// fitness configurations.
pub fn weakly_dominates(a: &FitnessVector, b: &FitnessVector) -> bool {
    if a.ones > b.ones {
        return false;
    }
    match (a.uncovered, b.uncovered) {
        (None, None) => {}
        (Some(ua), Some(ub)) => {
            if ua > ub {
                return false;
            }
        }
        _ => panic!("comparing fitness vectors of different configurations"),
    }
    match (&a.third, &b.third) {
        (Third::NegDegreeSum(da), Third::NegDegreeSum(db)) => da <= db,
        (Third::LpValue(la), Third::LpValue(lb)) => la <= lb,
        _ => panic!("comparing fitness vectors of different configurations"),
    }
}

/// Weak dominance by a strictly different vector.
pub fn strictly_dominates(a: &FitnessVector, b: &FitnessVector) -> bool {
    a != b && weakly_dominates(a, b)
}

/// Evaluates one candidate under the chosen fitness.
pub fn evaluate(
    inst: &Instance,
    fitness: Fitness,
    x: &SearchPoint,
    cache: &mut LpCache,
) -> FitnessVector {
    let u = uncovered(inst, x);
    evaluate_with_uncovered(inst, fitness, x, &u, cache)
}

fn evaluate_with_uncovered(
    inst: &Instance,
    fitness: Fitness,
    x: &SearchPoint,
    u: &VertexSet,
    cache: &mut LpCache,
) -> FitnessVector {
    let ones = x.count_ones();
    match fitness {
        Fitness::F1 => {
            let degree_sum: i64 = x.ones().iter().map(|v| inst.graph.degree(v) as i64).sum();
            FitnessVector {
                ones,
                uncovered: Some(u.len()),
                third: Third::NegDegreeSum(-degree_sum),
            }
        }
        Fitness::F2 => FitnessVector {
            ones,
            uncovered: Some(u.len()),
            third: Third::LpValue(lp_value_of(inst, u, cache)),
        },
        Fitness::F3 => FitnessVector {
            ones,
            uncovered: None,
            third: Third::LpValue(lp_value_of(inst, u, cache)),
        },
    }
}

/// One archived search point with its vector and cached uncovered set.
#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub point: SearchPoint,
    pub vector: FitnessVector,
    pub uncovered: VertexSet,
}

/// The Pareto archive: insertion-ordered, one entry per stored vector,
/// pairwise non-dominated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Population {
    members: Vec<Member>,
}

impl Population {
    pub fn new() -> Self {
        Population::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    /// Offers a candidate. Rejected only when a stored strictly different
    /// vector weakly dominates it; on acceptance every stored member the
    /// candidate weakly dominates is evicted, so an equal vector is replaced
    /// by the newcomer.
    pub fn insert(&mut self, point: SearchPoint, vector: FitnessVector, uncovered: VertexSet) -> bool {
        if self
            .members
            .iter()
            .any(|m| strictly_dominates(&m.vector, &vector))
        {
            return false;
        }
        self.members.retain(|m| !weakly_dominates(&vector, &m.vector));
        self.members.push(Member {
            point,
            vector,
            uncovered,
        });
        true
    }

    fn pick<R: Rng>(&self, rng: &mut R) -> &Member {
        &self.members[rng.gen_range(0..self.members.len())]
    }
}

/// Flips every bit independently with probability 1/n, drawing bits in
/// ascending vertex order.
pub fn standard_mutation<R: Rng>(rng: &mut R, x: &SearchPoint) -> SearchPoint {
    let n = x.len();
    let mut y = x.clone();
    for v in 0..n {
        if rng.gen_range(0..n) == 0 {
            y.flip(v);
        }
    }
    y
}

/// Flips each bit of `mask` independently with probability 1/2, in
/// ascending vertex order.
fn flip_masked<R: Rng>(rng: &mut R, x: &SearchPoint, mask: &VertexSet) -> SearchPoint {
    let mut y = x.clone();
    for v in mask.iter() {
        if rng.gen_bool(0.5) {
            y.flip(v);
        }
    }
    y
}

/// The three-branch operator. One uniform draw from {0,1,2} comes first;
/// branch 2 halves over the uncovered set when it is nonempty, branch 1
/// halves over the deleted set when it is nonempty, and every other case
/// falls back to the standard per-bit mutation. Bit draws always run in
/// ascending vertex order, so identical seeds replay identically.
pub fn alt_mutation<R: Rng>(rng: &mut R, inst: &Instance, x: &SearchPoint) -> SearchPoint {
    let u = uncovered(inst, x);
    alt_mutation_with_uncovered(rng, x, &u)
}

fn alt_mutation_with_uncovered<R: Rng>(
    rng: &mut R,
    x: &SearchPoint,
    u: &VertexSet,
) -> SearchPoint {
    let branch = rng.gen_range(0..3u8);
    if branch == 2 && !u.is_empty() {
        flip_masked(rng, x, u)
    } else if branch == 1 && x.count_ones() > 0 {
        flip_masked(rng, x, x.ones())
    } else {
        standard_mutation(rng, x)
    }
}

/// Structural milestones a run can record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventName {
    /// The all-zeros point entered the population.
    ZeroPoint,
    /// An `f1` point whose deleted vertices all exceed degree OPT+W while
    /// everything still uncovered stays within it.
    DegreeReducedPoint,
    /// An `f2`/`f3` point with |X₁| + LP(G[u(X)]) = LP(G) and no persistent
    /// ones left in the uncovered part.
    LpEqualityPoint,
    /// A point whose deleted set equals the supplied head union.
    HeadsPoint,
    /// A point that is a W-separator.
    FeasiblePoint,
    /// A feasible point of oracle-optimal size.
    Optimum,
    /// A feasible point within the configured factor of the oracle optimum.
    Approx,
}

impl EventName {
    pub fn as_str(self) -> &'static str {
        match self {
            EventName::ZeroPoint => "zero_point",
            EventName::DegreeReducedPoint => "degree_reduced_point",
            EventName::LpEqualityPoint => "lp_equality_point",
            EventName::HeadsPoint => "heads_point",
            EventName::FeasiblePoint => "feasible_point",
            EventName::Optimum => "optimum",
            EventName::Approx => "approx",
        }
    }
}

impl fmt::Display for EventName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// First occurrence of one milestone.
#[derive(Clone, Debug, PartialEq)]
pub struct EventRecord {
    pub name: EventName,
    pub iteration: u64,
    pub point: SearchPoint,
}

/// Iteration budget plus the optional oracle data that arms the
/// oracle-dependent milestones.
///
/// `opt` arms `optimum`, `approx` (together with `rho`), and the `f1`
/// degree milestone; `heads` arms the head-union milestone. Milestones
/// without their data stay silent. When `until` is nonempty the run stops
/// as soon as every listed milestone has been recorded.
#[derive(Clone, Debug, Default)]
pub struct StopSpec {
    pub budget: u64,
    pub until: Vec<EventName>,
    pub opt: Option<usize>,
    pub rho: Option<Rational>,
    pub heads: Option<VertexSet>,
}

impl StopSpec {
    pub fn budget(budget: u64) -> Self {
        StopSpec {
            budget,
            ..StopSpec::default()
        }
    }
}

/// Master seed and stream index of the counter-based generator; campaigns
/// give every trial its own stream under one master seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed { master, stream: 0 }
    }

    pub fn with_stream(master: u64, stream: u64) -> Self {
        Seed { master, stream }
    }

    fn rng(self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

impl From<u64> for Seed {
    fn from(master: u64) -> Self {
        Seed::new(master)
    }
}

/// Everything one run produced: the final archive and each milestone's
/// first occurrence, in recording order.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub seed: Seed,
    pub iterations: u64,
    pub events: Vec<EventRecord>,
    pub final_population: Population,
}

impl RunTrace {
    pub fn event(&self, name: EventName) -> Option<&EventRecord> {
        self.events.iter().find(|e| e.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("traces serialize without fallible content")
    }
}

/// Runs the loop with no observer.
pub fn run(
    inst: &Instance,
    fitness: Fitness,
    algorithm: Algorithm,
    seed: Seed,
    stop: &StopSpec,
) -> RunTrace {
    run_observed(inst, fitness, algorithm, seed, stop, |_, _, _| {})
}

/// Runs the loop, calling `observe(iteration, population, events)` after
/// the initial insertion and after every later iteration.
///
/// The loop is the classic archive-based scheme: draw the start uniformly,
/// then repeatedly clone a uniform member, mutate, evaluate, offer to the
/// archive. Milestones are point-local predicates checked on each accepted
/// candidate, so their first holder is caught at its insertion.
pub fn run_observed(
    inst: &Instance,
    fitness: Fitness,
    algorithm: Algorithm,
    seed: Seed,
    stop: &StopSpec,
    mut observe: impl FnMut(u64, &Population, &[EventRecord]),
) -> RunTrace {
    let mut rng = seed.rng();
    let mut cache = LpCache::new();
    let n = inst.n();
    let whole_lp = match fitness {
        Fitness::F2 | Fitness::F3 => Some(lp_value_of(inst, &VertexSet::full(n), &mut cache)),
        Fitness::F1 => None,
    };
    let mut population = Population::new();
    let mut events: Vec<EventRecord> = Vec::new();

    let start = SearchPoint::random(&mut rng, n);
    offer(
        inst, fitness, stop, &whole_lp, &mut cache, &mut population, &mut events, 0, start,
    );
    observe(0, &population, &events);

    let mut iteration = 0;
    while iteration < stop.budget && !until_reached(stop, &events) {
        iteration += 1;
        let (parent, parent_uncovered) = {
            let member = population.pick(&mut rng);
            (member.point.clone(), member.uncovered.clone())
        };
        let child = match algorithm {
            Algorithm::Semo => standard_mutation(&mut rng, &parent),
            Algorithm::SemoAlt => alt_mutation_with_uncovered(&mut rng, &parent, &parent_uncovered),
        };
        offer(
            inst, fitness, stop, &whole_lp, &mut cache, &mut population, &mut events, iteration,
            child,
        );
        observe(iteration, &population, &events);
    }
    RunTrace {
        seed,
        iterations: iteration,
        events,
        final_population: population,
    }
}

fn until_reached(stop: &StopSpec, events: &[EventRecord]) -> bool {
    !stop.until.is_empty()
        && stop
            .until
            .iter()
            .all(|name| events.iter().any(|e| e.name == *name))
}

#[allow(clippy::too_many_arguments)]
fn offer(
    inst: &Instance,
    fitness: Fitness,
    stop: &StopSpec,
    whole_lp: &Option<Rational>,
    cache: &mut LpCache,
    population: &mut Population,
    events: &mut Vec<EventRecord>,
    iteration: u64,
    candidate: SearchPoint,
) {
    let u = uncovered(inst, &candidate);
    let vector = evaluate_with_uncovered(inst, fitness, &candidate, &u, cache);
    if !population.insert(candidate.clone(), vector.clone(), u.clone()) {
        return;
    }
    let note = |name: EventName, events: &mut Vec<EventRecord>| {
        if events.iter().all(|e| e.name != name) {
            events.push(EventRecord {
                name,
                iteration,
                point: candidate.clone(),
            });
        }
    };

    if candidate.count_ones() == 0 {
        note(EventName::ZeroPoint, events);
    }
    let feasible = u.is_empty();
    if feasible {
        note(EventName::FeasiblePoint, events);
    }
    if let Some(opt) = stop.opt {
        if feasible && candidate.count_ones() == opt {
            note(EventName::Optimum, events);
        }
        if let Some(rho) = &stop.rho {
            if feasible
                && Rational::from_integer(candidate.count_ones().into())
                    <= rho * Rational::from_integer(opt.into())
            {
                note(EventName::Approx, events);
            }
        }
        if fitness == Fitness::F1 {
            let threshold = opt + inst.w();
            let ones_heavy = candidate.ones().iter().all(|v| inst.graph.degree(v) > threshold);
            let rest_light = u.iter().all(|v| inst.graph.degree(v) <= threshold);
            if ones_heavy && rest_light {
                note(EventName::DegreeReducedPoint, events);
            }
        }
    }
    if let (Some(whole), Third::LpValue(rest)) = (whole_lp, &vector.third) {
        if events.iter().all(|e| e.name != EventName::LpEqualityPoint)
            && &(Rational::from_integer(vector.ones.into()) + rest) == whole
            && persistent_ones(inst, &u, cache).is_empty()
        {
            note(EventName::LpEqualityPoint, events);
        }
    }
    if let Some(heads) = &stop.heads {
        if candidate.ones() == heads {
            note(EventName::HeadsPoint, events);
        }
    }
}

impl Serialize for Third {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("Third", 1)?;
        match self {
            Third::NegDegreeSum(d) => s.serialize_field("neg_degree_sum", d)?,
            Third::LpValue(r) => s.serialize_field("lp_value", &r.to_string())?,
        }
        s.end()
    }
}

impl Serialize for FitnessVector {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("FitnessVector", 3)?;
        s.serialize_field("ones", &self.ones)?;
        match self.uncovered {
            Some(u) => s.serialize_field("uncovered", &u)?,
            None => s.skip_field("uncovered")?,
        }
        s.serialize_field("third", &self.third)?;
        s.end()
    }
}

impl Serialize for Member {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("Member", 2)?;
        s.serialize_field("point", &self.point.to_string())?;
        s.serialize_field("fitness", &self.vector)?;
        s.end()
    }
}

impl Serialize for Population {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.members.len()))?;
        for member in &self.members {
            seq.serialize_element(member)?;
        }
        seq.end()
    }
}

impl Serialize for EventRecord {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("EventRecord", 3)?;
        s.serialize_field("name", &self.name)?;
        s.serialize_field("iteration", &self.iteration)?;
        s.serialize_field("point", &self.point.to_string())?;
        s.end()
    }
}

impl Serialize for RunTrace {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("RunTrace", 4)?;
        s.serialize_field("seed", &self.seed)?;
        s.serialize_field("iterations", &self.iterations)?;
        s.serialize_field("events", &self.events)?;
        s.serialize_field("final_population", &self.final_population)?;
        s.end()
    }
}
