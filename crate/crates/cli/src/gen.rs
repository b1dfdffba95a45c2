//! Seeded instance generators with certificates.
//!
//! Every generator is deterministic in its spec: the same shape, W, and seed
//! always produce the same graph. Certificates carry whatever the
//! construction itself proves. Planted instances know their planted deletion
//! set as an upper bound and, when components have size exactly W, a
//! disjoint packing that pins the optimum. Crown instances carry the
//! verified strictly reducible pair they were built around, which together
//! with the crown reduction fixes the optimum exactly. Paths come with a
//! closed form, random graphs only with the trivial bound.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use wsep_core::graph::{Graph, VertexSet};
use wsep_core::reducible::{verify_reducible_pair, ReduciblePair};
use wsep_core::separator::{verify_packing, Instance, Packing};

/// An exact probability, kept as a reduced fraction so configs and logs
/// round-trip without floating-point drift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Probability {
    num: u32,
    den: u32,
}

impl Probability {
    pub fn new(num: u32, den: u32) -> Result<Self, GenError> {
        if den == 0 {
            return Err(GenError::InvalidParams("probability denominator is zero".into()));
        }
        if num > den {
            return Err(GenError::InvalidParams(format!(
                "probability {num}/{den} exceeds one"
            )));
        }
        let g = num.gcd(&den);
        Ok(Probability {
            num: num / g.max(1),
            den: den / g.max(1),
        })
    }

    pub fn zero() -> Self {
        Probability { num: 0, den: 1 }
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    fn draw<R: Rng>(self, rng: &mut R) -> bool {
        rng.gen_ratio(self.num, self.den)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Probability {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let bad = |_| GenError::InvalidParams(format!("malformed probability {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => Probability::new(n.trim().parse().map_err(bad)?, d.trim().parse().map_err(bad)?),
            None => {
                let n: u32 = s.trim().parse().map_err(bad)?;
                Probability::new(n, 1)
            }
        }
    }
}

impl TryFrom<String> for Probability {
    type Error = GenError;

    fn try_from(s: String) -> Result<Self, GenError> {
        s.parse()
    }
}

impl From<Probability> for String {
    fn from(p: Probability) -> String {
        p.to_string()
    }
}

/// Graph family and its size parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Shape {
    /// A hidden separator of `separator_size` vertices, each carrying
    /// `components_per` disjoint paths of `component_size <= W` vertices.
    /// Each path is anchored to its own separator vertex and attached to
    /// `attach_degree - 1` further separator vertices at random points.
    Planted {
        separator_size: usize,
        components_per: usize,
        component_size: usize,
        attach_degree: usize,
    },
    /// Every unordered pair becomes an edge independently with exact
    /// probability `p`.
    Gnp { n: usize, p: Probability },
    /// The path on `n` vertices.
    Path { n: usize },
    /// The `rows x cols` grid.
    Grid { rows: usize, cols: usize },
    /// `heads` head vertices plus `components` crown paths of
    /// `component_size <= W` vertices whose first vertex sees every head,
    /// plus an optional `tail` path hanging off head 0. Sized so the head
    /// set forms a strictly reducible pair with the crown.
    Crown {
        heads: usize,
        components: usize,
        component_size: usize,
        #[serde(default)]
        tail: usize,
    },
}

/// Full generator input: shape, component bound, and RNG seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub shape: Shape,
    pub w: usize,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// What the construction proves about the optimum.
#[derive(Clone, Debug, Default)]
pub struct Certificate {
    pub lower: Option<usize>,
    pub upper: Option<usize>,
    /// Crown instances: the verified strictly reducible pair built in.
    pub pair: Option<ReduciblePair>,
}

impl Certificate {
    /// The optimum when the bounds meet.
    pub fn exact(&self) -> Option<usize> {
        match (self.lower, self.upper) {
            (Some(l), Some(u)) if l == u => Some(l),
            _ => None,
        }
    }

    fn exactly(opt: usize) -> Self {
        Certificate {
            lower: Some(opt),
            upper: Some(opt),
            pair: None,
        }
    }
}

/// A generated instance with its certificate.
#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: Instance,
    pub certificate: Certificate,
}

fn invalid(msg: impl Into<String>) -> GenError {
    GenError::InvalidParams(msg.into())
}

fn instance(graph: Graph, w: usize) -> Result<Instance, GenError> {
    Instance::new(graph, w).map_err(|e| invalid(e.to_string()))
}

/// Builds the instance described by `spec` together with its certificate.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    let w = spec.w;
    match spec.shape {
        Shape::Path { n } => path(n, w),
        Shape::Grid { rows, cols } => grid(rows, cols, w),
        Shape::Gnp { n, p } => gnp(n, p, w, spec.seed),
        Shape::Planted {
            separator_size,
            components_per,
            component_size,
            attach_degree,
        } => planted(
            separator_size,
            components_per,
            component_size,
            attach_degree,
            w,
            spec.seed,
        ),
        Shape::Crown {
            heads,
            components,
            component_size,
            tail,
        } => crown(heads, components, component_size, tail, w),
    }
}

fn path_opt(n: usize, w: usize) -> usize {
    n / (w + 1)
}

fn path(n: usize, w: usize) -> Result<Generated, GenError> {
    if n == 0 {
        return Err(invalid("path needs at least one vertex"));
    }
    let graph = Graph::from_edges(n, (1..n).map(|v| (v - 1, v)));
    Ok(Generated {
        instance: instance(graph, w)?,
        // Deleting every (W+1)-th vertex is feasible; chopping the path into
        // disjoint blocks of W+1 consecutive vertices is a packing of the
        // same size, so the bound is exact.
        certificate: Certificate::exactly(path_opt(n, w)),
    })
}

fn grid(rows: usize, cols: usize, w: usize) -> Result<Generated, GenError> {
    if rows == 0 || cols == 0 {
        return Err(invalid("grid needs positive dimensions"));
    }
    let n = rows * cols;
    let id = |r: usize, c: usize| r * cols + c;
    let mut graph = Graph::new(n);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                graph.add_edge(id(r, c), id(r, c + 1));
            }
            if r + 1 < rows {
                graph.add_edge(id(r, c), id(r + 1, c));
            }
        }
    }
    // Horizontal or vertical strips of W+1 consecutive cells are a packing;
    // keeping any W vertices is always feasible.
    let lower = (rows * (cols / (w + 1))).max(cols * (rows / (w + 1)));
    Ok(Generated {
        instance: instance(graph, w)?,
        certificate: Certificate {
            lower: Some(lower),
            upper: Some(n.saturating_sub(w).max(lower)),
            pair: None,
        },
    })
}

fn gnp(n: usize, p: Probability, w: usize, seed: u64) -> Result<Generated, GenError> {
    if n == 0 {
        return Err(invalid("gnp needs at least one vertex"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut graph = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if p.draw(&mut rng) {
                graph.add_edge(u, v);
            }
        }
    }
    let certificate = if p.is_zero() {
        Certificate::exactly(0)
    } else if p.is_one() {
        // A clique keeps a clique after any deletion, so exactly n-W
        // vertices must go.
        Certificate::exactly(n.saturating_sub(w))
    } else {
        Certificate {
            lower: None,
            upper: Some(n.saturating_sub(w)),
            pair: None,
        }
    };
    Ok(Generated {
        instance: instance(graph, w)?,
        certificate,
    })
}

fn planted(
    s: usize,
    components_per: usize,
    component_size: usize,
    attach_degree: usize,
    w: usize,
    seed: u64,
) -> Result<Generated, GenError> {
    if s == 0 || components_per == 0 {
        return Err(invalid("planted needs a separator and components"));
    }
    if component_size == 0 || component_size > w {
        return Err(invalid(format!(
            "planted component size must lie in 1..={w}"
        )));
    }
    if attach_degree == 0 || attach_degree > s {
        return Err(invalid(format!(
            "attachment degree must lie in 1..={s}"
        )));
    }
    let n = s + s * components_per * component_size;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut graph = Graph::new(n);
    for i in 0..s {
        for j in 0..components_per {
            let base = s + (i * components_per + j) * component_size;
            for v in 1..component_size {
                graph.add_edge(base + v - 1, base + v);
            }
            graph.add_edge(base, i);
            for t in 1..attach_degree {
                let from = base + rng.gen_range(0..component_size);
                graph.add_edge(from, (i + t) % s);
            }
        }
    }
    let inst = instance(graph, w)?;
    let certificate = if component_size == w {
        // Each separator vertex with its first anchored component is a
        // connected part of W+1 vertices; the parts are disjoint, so the
        // planted solution is optimal.
        let parts = (0..s)
            .map(|i| {
                let base = s + i * components_per * component_size;
                let mut part = VertexSet::from_iter(n, [i]);
                for v in base..base + component_size {
                    part.insert(v);
                }
                part
            })
            .collect();
        let packing = Packing { parts };
        assert!(
            verify_packing(&inst, &packing).is_ok(),
            "planted packing construction broke"
        );
        Certificate::exactly(s)
    } else {
        Certificate {
            lower: None,
            upper: Some(s),
            pair: None,
        }
    };
    Ok(Generated {
        instance: inst,
        certificate,
    })
}

fn crown(
    heads: usize,
    components: usize,
    component_size: usize,
    tail: usize,
    w: usize,
) -> Result<Generated, GenError> {
    if heads == 0 || components == 0 {
        return Err(invalid("crown needs heads and components"));
    }
    if component_size == 0 || component_size > w {
        return Err(invalid(format!("crown component size must lie in 1..={w}")));
    }
    let quota = 2 * w - 1;
    if components * component_size < quota * heads + 1 {
        return Err(invalid(format!(
            "crown mass {} cannot strictly feed {heads} heads needing {quota} each",
            components * component_size
        )));
    }
    let n = heads + components * component_size + tail;
    let mut graph = Graph::new(n);
    let mut crown_set = VertexSet::new(n);
    for k in 0..components {
        let base = heads + k * component_size;
        for v in 1..component_size {
            graph.add_edge(base + v - 1, base + v);
        }
        for h in 0..heads {
            graph.add_edge(base, h);
        }
        for v in base..base + component_size {
            crown_set.insert(v);
        }
    }
    let tail_base = heads + components * component_size;
    for v in 1..tail {
        graph.add_edge(tail_base + v - 1, tail_base + v);
    }
    if tail > 0 {
        graph.add_edge(tail_base, 0);
    }
    let inst = instance(graph, w)?;
    let head_set = VertexSet::from_iter(n, 0..heads);
    let pair = verify_reducible_pair(&inst, &head_set, &crown_set)
        .expect("crown construction yields a reducible pair");
    assert!(pair.strict(), "crown construction yields a strict pair");
    // Removing the pair leaves only the tail path, so the crown reduction
    // pins the optimum exactly.
    let opt = heads + path_opt(tail, w);
    Ok(Generated {
        instance: inst,
        certificate: Certificate {
            lower: Some(opt),
            upper: Some(opt),
            pair: Some(pair),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use wsep_core::separator::brute_force_opt;

    fn oracle(inst: &Instance) -> usize {
        brute_force_opt(inst, None, None).unwrap().opt().unwrap()
    }

    fn spec(shape: Shape, w: usize, seed: u64) -> GeneratorSpec {
        GeneratorSpec { shape, w, seed }
    }

    #[test]
    fn planted_separator_covers_its_graph() {
        let g = generate(&spec(
            Shape::Planted {
                separator_size: 2,
                components_per: 3,
                component_size: 2,
                attach_degree: 2,
            },
            2,
            9,
        ))
        .unwrap();
        let planted = VertexSet::from_iter(g.instance.n(), [0, 1]);
        for comp in g.instance.graph.components_avoiding(&planted) {
            assert!(comp.len() <= 2);
        }
        assert_eq!(g.certificate.exact(), Some(2));
        assert_eq!(oracle(&g.instance), 2);
    }

    #[test]
    fn undersized_planted_components_leave_only_a_bound() {
        let g = generate(&spec(
            Shape::Planted {
                separator_size: 3,
                components_per: 2,
                component_size: 1,
                attach_degree: 1,
            },
            2,
            5,
        ))
        .unwrap();
        assert_eq!(g.certificate.upper, Some(3));
        assert_eq!(g.certificate.lower, None);
        assert!(oracle(&g.instance) <= 3);
    }

    #[test]
    fn two_leaf_crown_is_a_star() {
        let g = generate(&spec(
            Shape::Crown {
                heads: 1,
                components: 2,
                component_size: 1,
                tail: 0,
            },
            1,
            0,
        ))
        .unwrap();
        assert_eq!(g.instance.n(), 3);
        assert_eq!(g.instance.graph.m(), 2);
        assert_eq!(g.instance.graph.degree(0), 2);
        let pair = g.certificate.pair.as_ref().unwrap();
        assert!(pair.strict());
        assert_eq!(g.certificate.exact(), Some(1));
        assert_eq!(oracle(&g.instance), 1);
    }

    #[test]
    fn crown_tail_extends_the_optimum() {
        let g = generate(&spec(
            Shape::Crown {
                heads: 2,
                components: 4,
                component_size: 2,
                tail: 5,
            },
            2,
            0,
        ))
        .unwrap();
        assert_eq!(g.certificate.exact(), Some(2 + 1));
        assert_eq!(oracle(&g.instance), 3);
    }

    #[test]
    fn starved_crowns_are_rejected() {
        let err = generate(&spec(
            Shape::Crown {
                heads: 2,
                components: 2,
                component_size: 1,
                tail: 0,
            },
            1,
            0,
        ))
        .unwrap_err();
        assert!(matches!(err, GenError::InvalidParams(_)));
    }

    #[test]
    fn edgeless_and_complete_random_graphs_are_certified() {
        let empty = generate(&spec(
            Shape::Gnp {
                n: 10,
                p: Probability::zero(),
            },
            1,
            3,
        ))
        .unwrap();
        assert_eq!(empty.instance.graph.m(), 0);
        assert_eq!(empty.certificate.exact(), Some(0));

        let full = generate(&spec(
            Shape::Gnp {
                n: 5,
                p: "1/1".parse().unwrap(),
            },
            2,
            3,
        ))
        .unwrap();
        assert_eq!(full.instance.graph.m(), 10);
        assert_eq!(full.certificate.exact(), Some(3));
        assert_eq!(oracle(&full.instance), 3);
    }

    #[test]
    fn path_certificates_match_the_oracle() {
        for (n, w) in [(7, 1), (7, 2), (10, 3), (1, 1)] {
            let g = generate(&spec(Shape::Path { n }, w, 0)).unwrap();
            assert_eq!(g.certificate.exact(), Some(oracle(&g.instance)), "n={n} w={w}");
        }
    }

    #[test]
    fn grid_bounds_bracket_the_oracle() {
        let g = generate(&spec(Shape::Grid { rows: 3, cols: 3 }, 1, 0)).unwrap();
        let opt = oracle(&g.instance);
        assert!(g.certificate.lower.unwrap() <= opt);
        assert!(opt <= g.certificate.upper.unwrap());
        assert_eq!(opt, 4);
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let shape = Shape::Gnp {
            n: 12,
            p: "1/3".parse().unwrap(),
        };
        let a = generate(&spec(shape.clone(), 2, 77)).unwrap();
        let b = generate(&spec(shape.clone(), 2, 77)).unwrap();
        let c = generate(&spec(shape, 2, 78)).unwrap();
        assert_eq!(
            a.instance.graph.to_edge_list_string(),
            b.instance.graph.to_edge_list_string()
        );
        assert_ne!(
            a.instance.graph.to_edge_list_string(),
            c.instance.graph.to_edge_list_string()
        );
    }

    #[test]
    fn probabilities_parse_and_print_reduced() {
        let p: Probability = "2/4".parse().unwrap();
        assert_eq!(p.to_string(), "1/2");
        assert_eq!("1".parse::<Probability>().unwrap().to_string(), "1/1");
        assert!("3/2".parse::<Probability>().is_err());
        assert!("1/0".parse::<Probability>().is_err());
        assert!("x".parse::<Probability>().is_err());
    }

    #[test]
    fn specs_roundtrip_through_serde() {
        let s = spec(
            Shape::Planted {
                separator_size: 2,
                components_per: 2,
                component_size: 1,
                attach_degree: 1,
            },
            1,
            4,
        );
        let json = serde_json::to_string(&s).unwrap();
        let back: GeneratorSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(s, back);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn planted_bounds_hold_against_the_oracle(
            s in 1usize..3,
            per in 1usize..3,
            size in 1usize..3,
            w in 1usize..4,
            seed in 0u64..1000,
        ) {
            prop_assume!(size <= w);
            let attach = 1 + (seed as usize) % s;
            let g = generate(&spec(
                Shape::Planted {
                    separator_size: s,
                    components_per: per,
                    component_size: size,
                    attach_degree: attach,
                },
                w,
                seed,
            )).unwrap();
            prop_assume!(g.instance.n() <= 12);
            let opt = oracle(&g.instance);
            prop_assert!(opt <= g.certificate.upper.unwrap());
            if let Some(lower) = g.certificate.lower {
                prop_assert!(lower <= opt);
            }
        }

        #[test]
        fn crown_certificates_are_exact(
            heads in 1usize..3,
            size in 1usize..3,
            w in 1usize..3,
            tail in 0usize..4,
        ) {
            prop_assume!(size <= w);
            let quota = 2 * w - 1;
            let components = (quota * heads + size) / size + 1;
            let g = generate(&spec(
                Shape::Crown { heads, components, component_size: size, tail },
                w,
                0,
            )).unwrap();
            prop_assume!(g.instance.n() <= 13);
            prop_assert_eq!(g.certificate.exact(), Some(oracle(&g.instance)));
        }
    }
}
