mod common;

use featsel_core::genotype::{random_init, repair_empty, Genome, RngStream};
use featsel_core::moea::{
    fast_nondominated_sort, moead_generation, nsga2_generation, nsga2_select, run, Algorithm, Individual,
    MoeadState, SearchParams,
};
use featsel_core::objectives::{dominates, EvaluationContext, Formulation, ObjectiveVector};
use proptest::prelude::*;

use common::synthetic_ctx;

fn small(population: usize, generations: usize) -> SearchParams {
    SearchParams { population, generations, ..Default::default() }
}

fn initial_population(ctx: &EvaluationContext, p: usize, seed: u64) -> Vec<Individual> {
    (0..p)
        .map(|i| {
            let mut rng = RngStream::new(seed, 0, i as u64).rng();
            let g = repair_empty(&random_init(ctx.feature_count(), &mut rng).unwrap(), &mut rng);
            let score = ctx.score(&g).unwrap();
            Individual {
                objectives: ctx.formulation().objectives(&score),
                genome: g,
                score,
                rank: None,
                crowding: None,
            }
        })
        .collect()
}

#[test]
fn zero_generations_return_the_initial_nondominated_set() {
    let ctx = synthetic_ctx(1, Formulation::Dr3);
    let out = run(Algorithm::Nsga2, &ctx, &small(30, 0), 5).unwrap();
    let init = initial_population(&ctx, 30, 5);
    let mut expected: Vec<Genome> = init
        .iter()
        .filter(|a| !init.iter().any(|b| dominates(&b.objectives, &a.objectives).unwrap()))
        .map(|a| a.genome.clone())
        .collect();
    expected.sort();
    expected.dedup();
    let got: Vec<Genome> = out.archive.members().iter().map(|m| m.genome.clone()).collect();
    assert_eq!(got, expected);
    assert_eq!(out.progress.len(), 1);
}

#[test]
fn archives_do_not_depend_on_worker_count() {
    for (alg, form) in [
        (Algorithm::Nsga2, Formulation::Dr3),
        (Algorithm::Nsga3, Formulation::Dr3),
        (Algorithm::Moead, Formulation::Acc2),
        (Algorithm::Ga, Formulation::Acc1),
    ] {
        let a = run(alg, &synthetic_ctx(2, form), &SearchParams { workers: 1, ..small(20, 4) }, 9).unwrap();
        let b = run(alg, &synthetic_ctx(2, form), &SearchParams { workers: 4, ..small(20, 4) }, 9).unwrap();
        assert_eq!(a.archive, b.archive, "{alg}");
        assert_eq!(a.progress, b.progress, "{alg}");
    }
}

#[test]
fn populations_keep_size_and_archives_stay_nondominated() {
    for alg in [Algorithm::Nsga2, Algorithm::Nsga3, Algorithm::Moead] {
        let ctx = synthetic_ctx(3, Formulation::Dr3);
        let out = run(alg, &ctx, &small(24, 6), 11).unwrap();
        assert_eq!(out.final_population.len(), 24, "{alg}");
        assert!(out.final_population.iter().all(|i| i.genome.len() == 12 && i.genome.size() > 0));
        let m = out.archive.members();
        for a in m {
            for b in m {
                assert!(!dominates(&a.objectives, &b.objectives).unwrap(), "{alg}");
            }
        }
        let mut bits: Vec<String> = m.iter().map(|x| x.genome.to_string()).collect();
        let sorted = bits.clone();
        bits.sort();
        bits.dedup();
        assert_eq!(bits, sorted);
    }
}

#[test]
fn ga_best_accuracy_never_drops_and_keeps_larger_subsets() {
    let mut ga_sizes = 0.0;
    let mut dr3_sizes = 0.0;
    for seed in 0..3 {
        let ga = run(Algorithm::Ga, &synthetic_ctx(4, Formulation::Acc1), &small(30, 10), seed).unwrap();
        assert!(ga.progress.windows(2).all(|w| w[1].best_accuracy >= w[0].best_accuracy));
        assert_eq!(ga.archive.len(), 1);
        ga_sizes += ga.archive.members()[0].genome.size() as f64;

        let dr3 = run(Algorithm::Nsga2, &synthetic_ctx(4, Formulation::Dr3), &small(30, 10), seed).unwrap();
        let best = dr3
            .archive
            .members()
            .iter()
            .max_by(|a, b| a.validation.accuracy.total_cmp(&b.validation.accuracy))
            .unwrap();
        dr3_sizes += best.genome.size() as f64;
    }
    assert!(ga_sizes > dr3_sizes, "GA {ga_sizes} vs DR3 {dr3_sizes}");
}

#[test]
fn degenerate_operators_keep_the_survivor_objectives() {
    let ctx = synthetic_ctx(5, Formulation::Dr3);
    let params = SearchParams { crossover_prob: 0.0, mutation_prob: 0.0, ..small(16, 1) };
    let pop = initial_population(&ctx, 16, 3);
    let next = nsga2_generation(&pop, &ctx, &params, 3, 1).unwrap();
    // offspring are copies of parents, so survivors are drawn from the old genomes
    assert!(next.iter().all(|n| pop.iter().any(|p| p.genome == n.genome)));
    assert_eq!(next.len(), 16);
}

#[test]
fn moead_ideal_point_is_monotone_and_neighbourhoods_sized() {
    let ctx = synthetic_ctx(6, Formulation::Dr3);
    let pop = initial_population(&ctx, 15, 1);
    let mut state = MoeadState::new(pop, 1).unwrap();
    assert!(state.neighbors.iter().enumerate().all(|(i, n)| n == &vec![i]));
    let params = small(15, 0);
    for g in 1..=4 {
        let before = state.ideal.clone();
        moead_generation(&mut state, &ctx, &params, 7, g).unwrap();
        assert!(state.ideal.0.iter().zip(&before.0).all(|(a, b)| a >= b));
    }
    let mut default_t = MoeadState::new(initial_population(&ctx, 30, 2), 20).unwrap();
    assert!(default_t.neighbors.iter().all(|n| n.len() == 20));
    moead_generation(&mut default_t, &ctx, &small(30, 1), 1, 1).unwrap();
    assert_eq!(default_t.population.len(), 30);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nsga2_selection_respects_rank(
        raw in prop::collection::vec((0u8..6, 0u8..6, 0u8..6), 4..60),
        frac in 0.1f64..1.0,
    ) {
        let pts: Vec<ObjectiveVector> = raw.iter().map(|&(a, b, c)| ObjectiveVector(vec![a as f64, b as f64, c as f64])).collect();
        let target = ((pts.len() as f64 * frac) as usize).max(1);
        let keep = nsga2_select(&pts, target).unwrap();
        prop_assert_eq!(keep.len(), target);
        let fronts = fast_nondominated_sort(&pts).unwrap();
        let mut rank = vec![0; pts.len()];
        for (r, f) in fronts.iter().enumerate() {
            for &i in f {
                rank[i] = r;
            }
        }
        let worst_kept = keep.iter().map(|&i| rank[i]).max().unwrap();
        for i in 0..pts.len() {
            if rank[i] < worst_kept {
                prop_assert!(keep.contains(&i), "rank {} dropped while rank {} kept", rank[i], worst_kept);
            }
        }
    }
}
