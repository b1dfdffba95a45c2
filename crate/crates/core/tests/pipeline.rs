use wsep_core::emo::{self, Algorithm, EventName, Fitness, Seed, StopSpec};
use wsep_core::lp::{lp_value_of, LpCache, Rational};
use wsep_core::reducible::{
    crown_reduce, degree_reduce, find_strictly_reducible_pair, kernel_size_check,
    packing_from_pair,
};
use wsep_core::separator::{
    brute_force_opt, is_w_separator, max_packing_brute, verify_packing,
};
use wsep_core::{Graph, Instance, VertexSet};

fn parse(text: &str, w: usize) -> Instance {
    let graph = Graph::parse(text.as_bytes()).expect("test graphs parse");
    Instance::new(graph, w).expect("test widths are positive")
}

#[test]
fn a_parsed_graph_runs_end_to_end() {
    let inst = parse("6 5\n0 1\n1 2\n2 3\n3 4\n4 5\n", 2);
    let opt = brute_force_opt(&inst, None, None)
        .expect("tiny search fits the budget")
        .opt()
        .expect("uncapped search is exact");
    assert_eq!(opt, 2);

    let mut cache = LpCache::new();
    let relaxation = lp_value_of(&inst, &VertexSet::full(inst.n()), &mut cache);
    assert!(relaxation <= Rational::from_integer(opt.into()));

    let stop = StopSpec {
        budget: 200_000,
        until: vec![EventName::Optimum],
        opt: Some(opt),
        ..StopSpec::default()
    };
    let trace = emo::run(&inst, Fitness::F2, Algorithm::SemoAlt, Seed::new(7), &stop);
    let hit = trace
        .event(EventName::Optimum)
        .expect("the run reaches the optimum on a six-vertex path");
    assert_eq!(hit.point.count_ones(), opt);
    assert!(is_w_separator(&inst, &hit.point));
}

#[test]
fn reductions_preserve_the_optimum_through_the_pipeline() {
    let star = parse("4 3\n0 1\n0 2\n0 3\n", 1);
    let opt = brute_force_opt(&star, None, None).unwrap().opt().unwrap();
    assert_eq!(opt, 1);

    let pair = find_strictly_reducible_pair(&star).expect("a star center is reducible");
    let reduced = crown_reduce(&star, opt, &pair);
    assert!(reduced.budget >= 0);
    let residual_opt = brute_force_opt(&reduced.instance, None, None)
        .unwrap()
        .opt()
        .unwrap();
    assert_eq!(pair.head.len() + residual_opt, opt);

    let wide = parse("5 4\n0 1\n0 2\n0 3\n0 4\n", 1);
    let cut = degree_reduce(&wide, 1);
    assert!(cut.forced.contains(0));
    assert_eq!(cut.budget, 0);
    assert!(kernel_size_check(&cut.residual, cut.budget as usize));
}

#[test]
fn packings_witness_lower_bounds() {
    let inst = parse("5 4\n0 1\n1 2\n2 3\n3 4\n", 1);
    let pair = find_strictly_reducible_pair(&inst).expect("paths have reducible pairs");
    let packing = packing_from_pair(&inst, &pair);
    verify_packing(&inst, &packing).expect("constructed packings verify");
    assert_eq!(packing.size(), pair.head.len());

    let best = max_packing_brute(&inst, None).expect("tiny search fits the budget");
    verify_packing(&inst, &best).expect("brute packings verify");
    assert!(best.size() >= packing.size());

    let opt = brute_force_opt(&inst, None, None).unwrap().opt().unwrap();
    assert!(packing.size() <= opt);
    assert!(best.size() <= opt);
}
