//! Library surface behind the `wsep` binary: generators, campaign driver,
//! and verification sweeps, plus the small parsing helpers the subcommands
//! share. Everything here is usable directly from tests, so the binary
//! stays a thin argument-handling shell.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use num_bigint::BigInt;

use wsep_core::emo::EventName;
use wsep_core::graph::{Graph, VertexSet};
use wsep_core::lp::Rational;
use wsep_core::separator::Instance;

pub mod campaign;
pub mod gen;
pub mod verify;

/// Parses "p/q" or a bare integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let bad = |_| format!("malformed rational {text:?}, expected p or p/q");
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(bad)?;
            let den: BigInt = den.trim().parse().map_err(bad)?;
            if den == BigInt::from(0) {
                return Err(format!("rational {text:?} divides by zero"));
            }
            Ok(Rational::new(num, den))
        }
        None => Ok(Rational::from_integer(text.trim().parse().map_err(bad)?)),
    }
}

/// Milestone names as they appear in configs, traces, and CSV rows.
pub fn parse_event_name(name: &str) -> Result<EventName, String> {
    match name {
        "zero_point" => Ok(EventName::ZeroPoint),
        "degree_reduced_point" => Ok(EventName::DegreeReducedPoint),
        "lp_equality_point" => Ok(EventName::LpEqualityPoint),
        "heads_point" => Ok(EventName::HeadsPoint),
        "feasible_point" => Ok(EventName::FeasiblePoint),
        "optimum" => Ok(EventName::Optimum),
        "approx" => Ok(EventName::Approx),
        _ => Err(format!("unknown milestone {name:?}")),
    }
}

/// Reads an edge-list file into an instance with the given W.
pub fn load_instance(path: &Path, w: usize) -> anyhow::Result<Instance> {
    let file = File::open(path)
        .map_err(|e| anyhow::anyhow!("cannot open {}: {e}", path.display()))?;
    let graph = Graph::parse(BufReader::new(file))
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    Ok(Instance::new(graph, w)?)
}

/// Parses a comma-separated vertex list like "0,3,5" into a set over n ids.
pub fn parse_vertex_set(text: &str, n: usize) -> Result<VertexSet, String> {
    let mut set = VertexSet::new(n);
    if text.trim().is_empty() {
        return Ok(set);
    }
    for part in text.split(',') {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("malformed vertex id {part:?}"))?;
        if v >= n {
            return Err(format!("vertex {v} out of range for n={n}"));
        }
        set.insert(v);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_both_forms() {
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3.into()));
        assert_eq!(
            parse_rational("1/4").unwrap(),
            Rational::new(BigInt::from(1), BigInt::from(4))
        );
        assert_eq!(
            parse_rational(" -2/8 ").unwrap(),
            Rational::new(BigInt::from(-1), BigInt::from(4))
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn event_names_cover_the_enum() {
        for name in [
            "zero_point",
            "degree_reduced_point",
            "lp_equality_point",
            "heads_point",
            "feasible_point",
            "optimum",
            "approx",
        ] {
            assert_eq!(parse_event_name(name).unwrap().to_string(), name);
        }
        assert!(parse_event_name("zero").is_err());
    }

    #[test]
    fn vertex_lists_parse_and_validate() {
        let s = parse_vertex_set("0, 2,3", 4).unwrap();
        assert_eq!(s.to_vec(), vec![0, 2, 3]);
        assert!(parse_vertex_set("", 4).unwrap().is_empty());
        assert!(parse_vertex_set("4", 4).is_err());
        assert!(parse_vertex_set("a", 4).is_err());
    }
}
