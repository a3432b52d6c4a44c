use std::fs;
use std::path::{Path, PathBuf};

use mmga_bench::experiment::ExperimentSpec;
use mmga_bench::report::{
    competition_ranks, convergence_file_name, load_runs, rank_table, summarize, write_artifacts,
    RUNS_FILE, SUMMARY_FILE,
};
use mmga_bench::{parse_tsplib, run_experiment, ExperimentError};
use mmga_core::{
    contains_genotype, init_population, GaConfig, Metric, MutationKind, RngStream, Tour,
};
use proptest::prelude::*;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/tsplib")
        .join(format!("{name}.tsp"))
}

fn small_spec(
    instances: &[&str],
    operators: &[MutationKind],
    generations: usize,
) -> ExperimentSpec {
    ExperimentSpec {
        instances: instances.iter().map(|n| data(n)).collect(),
        operators: operators.to_vec(),
        replicates: 2,
        ga: GaConfig {
            population_size: 10,
            generations,
            seed: 3,
            ..GaConfig::default()
        },
        out_dir: PathBuf::new(),
    }
}

#[test]
fn bundled_instances_load() {
    for (name, n, metric) in [
        ("eil51", 51, Metric::Euc2d),
        ("berlin52", 52, Metric::Euc2d),
        ("ch130", 130, Metric::Euc2d),
        ("a280", 280, Metric::Euc2d),
        ("att48", 48, Metric::Att),
    ] {
        let inst = mmga_bench::load_tsplib(&data(name)).unwrap();
        assert_eq!(
            (inst.name(), inst.dimension(), inst.metric()),
            (name, n, metric)
        );
    }
}

#[test]
fn known_optimal_tour_of_berlin52() {
    // the published optimal tour, 1-based
    let tour1 = [
        1, 49, 32, 45, 19, 41, 8, 9, 10, 43, 33, 51, 11, 52, 14, 13, 47, 26, 27, 28, 12, 25, 4, 6,
        15, 5, 24, 48, 38, 37, 40, 39, 36, 35, 34, 44, 46, 16, 29, 50, 20, 23, 30, 2, 7, 42, 21,
        17, 3, 18, 31, 22,
    ];
    let inst = mmga_bench::load_tsplib(&data("berlin52")).unwrap();
    let tour: Vec<usize> = tour1.iter().map(|c| c - 1).collect();
    assert_eq!(
        inst.tour_length(&tour),
        mmga_bench::known_optimum("berlin52").unwrap()
    );
}

#[test]
fn berlin52_population_and_absent_genotype() {
    let inst = mmga_bench::load_tsplib(&data("berlin52")).unwrap();
    let pop = init_population(&inst, &GaConfig::default(), &mut RngStream::new(11, 0));
    assert_eq!(pop.len(), 100);
    for m in pop.members() {
        assert_eq!(m.cities()[0], 0);
        let mut sorted = m.cities().to_vec();
        sorted.sort_unstable();
        assert!(sorted.iter().copied().eq(0..52));
        assert!(contains_genotype(&pop, m));
    }
    // first single swap of the best member that no member matches
    let base = pop.members()[0].cities().to_vec();
    let absent = (1..52)
        .flat_map(|i| (i + 1..52).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut c = base.clone();
            c.swap(i, j);
            Tour::new(&inst, c).unwrap()
        })
        .find(|t| !pop.members().iter().any(|m| m.cities() == t.cities()))
        .unwrap();
    assert!(!contains_genotype(&pop, &absent));
}

#[test]
fn smoke_run_single_generation() {
    let mut spec = small_spec(&["eil51"], &[MutationKind::Sam], 1);
    spec.replicates = 1;
    let result = run_experiment(&spec).unwrap();
    assert_eq!(result.records.len(), 1);
    let r = &result.records[0];
    assert_eq!(r.best_series.len(), 1);
    assert!(r.wall_ms > 0.0);
    assert_eq!(r.selections.unwrap().total(), 10);
}

#[test]
fn artifacts_are_mutually_consistent() {
    let ops = [MutationKind::Exchange, MutationKind::Sbm, MutationKind::Sam];
    let spec = small_spec(&["berlin52", "eil51"], &ops, 1600);
    let result = run_experiment(&spec).unwrap();
    assert_eq!(result.records.len(), 2 * 3 * 2);
    let dir = tempfile::tempdir().unwrap();
    write_artifacts(&result, dir.path()).unwrap();

    let summary = summarize(&result.records).unwrap();
    let conv = fs::read_to_string(dir.path().join(convergence_file_name("berlin52"))).unwrap();
    let lines: Vec<&str> = conv.lines().collect();
    assert_eq!(lines[0], "generation,Exchange,SBM,SAM");
    assert_eq!(lines.len(), 1 + 1600);
    let rows: Vec<Vec<f64>> = lines[1..]
        .iter()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(rows.iter().all(|r| r.len() == 4));
    for col in 1..4 {
        assert!(
            rows.windows(2).all(|w| w[1][col] <= w[0][col]),
            "column {col} increases"
        );
    }
    for (col, op) in ops.iter().enumerate() {
        let mean = summary.means.get(op.name(), "berlin52").unwrap();
        assert_eq!(rows[1599][col + 1], mean);
        let finals: Vec<f64> = result
            .records
            .iter()
            .filter(|r| r.instance == "berlin52" && r.operator == *op)
            .map(|r| r.final_length as f64)
            .collect();
        assert_eq!(mean, finals.iter().sum::<f64>() / finals.len() as f64);
    }

    // reloading from disk gives the same summary and selection tallies
    let loaded = load_runs(dir.path()).unwrap();
    assert_eq!(summarize(&loaded).unwrap(), summary);
    for (a, b) in loaded.iter().zip(&result.records) {
        assert_eq!(
            (a.final_length, &a.final_tour, a.selections),
            (b.final_length, &b.final_tour, b.selections)
        );
        assert!((a.wall_ms - b.wall_ms).abs() < 1e-3);
    }
    let summary_text = fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap();
    assert_eq!(summary_text.lines().count(), 1 + 6);
    assert!(fs::read_to_string(dir.path().join(RUNS_FILE))
        .unwrap()
        .ends_with('\n'));

    let ranks = rank_table(&summary.means);
    for c in 0..2 {
        let col: Vec<u32> = ranks.rows.iter().map(|r| r.ranks[c].unwrap()).collect();
        assert_eq!(ranks.rows.last().unwrap().ranks[c], Some(1));
        assert!(col.iter().all(|&r| (1..=4).contains(&r)));
    }
}

#[test]
fn different_operators_have_independent_streams() {
    // adding an operator must not change the runs of the others
    let a = run_experiment(&small_spec(&["eil51"], &[MutationKind::Exchange], 30)).unwrap();
    let b = run_experiment(&small_spec(
        &["eil51"],
        &[MutationKind::Sam, MutationKind::Exchange],
        30,
    ))
    .unwrap();
    let exch: Vec<_> = b
        .records
        .iter()
        .filter(|r| r.operator == MutationKind::Exchange)
        .collect();
    for (x, y) in a.records.iter().zip(exch) {
        assert_eq!(x.seed, y.seed);
        assert_eq!(x.best_series, y.best_series);
    }
}

#[test]
fn unparseable_instance_aborts_with_file_name() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.tsp");
    fs::write(
        &bad,
        "NAME: broken\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1\n",
    )
    .unwrap();
    let mut spec = small_spec(&["eil51"], &[MutationKind::Exchange], 1);
    spec.instances.push(bad);
    let err = run_experiment(&spec).unwrap_err();
    assert!(matches!(err, ExperimentError::Instance(_)));
    assert!(err.to_string().contains("broken.tsp:6"), "{err}");
}

proptest! {
    #[test]
    fn competition_ranks_are_consistent(values in prop::collection::vec(0u8..6, 1..12)) {
        let v: Vec<Option<f64>> = values.iter().map(|&x| Some(x as f64)).collect();
        let ranks: Vec<u32> = competition_ranks(&v).into_iter().map(Option::unwrap).collect();
        prop_assert!(ranks.contains(&1));
        for i in 0..v.len() {
            // rank = 1 + number of strictly better entries
            let better = values.iter().filter(|&&y| y < values[i]).count() as u32;
            prop_assert_eq!(ranks[i], better + 1);
            for j in 0..v.len() {
                prop_assert_eq!(values[i] < values[j], ranks[i] < ranks[j]);
            }
        }
    }

    #[test]
    fn tsplib_round_trip(coords in prop::collection::vec((-1e4f64..1e4, -1e4f64..1e4), 3..40)) {
        let mut text = format!("NAME : rt\nTYPE : TSP\nDIMENSION : {}\nEDGE_WEIGHT_TYPE : CEIL_2D\nNODE_COORD_SECTION\n", coords.len());
        for (i, (x, y)) in coords.iter().enumerate() {
            text.push_str(&format!("{} {x} {y}\n", i + 1));
        }
        text.push_str("EOF\n");
        let inst = parse_tsplib(text.as_bytes(), "rt.tsp", "rt").unwrap();
        prop_assert_eq!(inst.coords(), &coords[..]);
        prop_assert_eq!(inst.metric(), Metric::Ceil2d);
    }
}
