use mmga_core::ops::{self, MutationContext};
use mmga_core::probes::{worst_gene_left, worst_gene_lr, worst_gene_pair};
use mmga_core::strategy::{sam_mutate, sbm_mutate, OperatorPool, SelectionStats};
use mmga_core::{
    init_population, step_generation, GaConfig, Metric, MutationKind, NoObserver, Population,
    RngStream, Tour, TspInstance,
};
use proptest::prelude::*;

fn metric() -> impl Strategy<Value = Metric> {
    prop_oneof![Just(Metric::Euc2d), Just(Metric::Ceil2d), Just(Metric::Att)]
}

/// Instance with integer coordinates (so ties happen) and a random tour on it.
fn instance_and_tour(max_n: usize) -> impl Strategy<Value = (TspInstance, Vec<usize>)> {
    (3..=max_n, metric())
        .prop_flat_map(|(n, m)| {
            let coords = prop::collection::vec((0u16..200, 0u16..200), n);
            let rest: Vec<usize> = (1..n).collect();
            (coords, Just(m), Just(rest).prop_shuffle())
        })
        .prop_map(|(coords, m, rest)| {
            let coords = coords
                .into_iter()
                .map(|(x, y)| (x as f64, y as f64))
                .collect();
            let inst = TspInstance::new("prop", coords, m).unwrap();
            let mut cities = vec![0];
            cities.extend(rest);
            (inst, cities)
        })
}

fn assert_valid(inst: &TspInstance, t: &Tour) {
    let n = inst.dimension();
    assert_eq!(t.len(), n);
    assert_eq!(t.cities()[0], 0);
    let mut seen = vec![false; n];
    for &c in t.cities() {
        assert!(!seen[c], "city {c} twice");
        seen[c] = true;
    }
    assert_eq!(t.length(), inst.tour_length(t.cities()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operators_emit_valid_tours_and_leave_parent_alone(
        (inst, cities) in instance_and_tour(40),
        seed in any::<u64>(),
    ) {
        let nn = inst.nearest_neighbor_table();
        let ctx = MutationContext::new(&inst, &nn);
        let parent = Tour::new(&inst, cities.clone()).unwrap();
        for kind in MutationKind::CONCRETE {
            let mut a = RngStream::new(seed, 0);
            let mut b = RngStream::new(seed, 0);
            let child = ops::apply(kind, &parent, &ctx, &mut a);
            assert_valid(&inst, &child);
            prop_assert_eq!(parent.cities(), &cities[..]);
            prop_assert_eq!(&child, &ops::apply(kind, &parent, &ctx, &mut b), "{}", kind);
        }
    }

    #[test]
    fn swglm_returns_the_shorter_local_swap((inst, cities) in instance_and_tour(30)) {
        prop_assume!(cities.len() >= 5);
        let nn = inst.nearest_neighbor_table();
        let ctx = MutationContext::new(&inst, &nn);
        let parent = Tour::new(&inst, cities.clone()).unwrap();
        let child = ops::swglm(&parent, &ctx);
        let m = cities.len() - 1;
        let ring = |p: usize, d: isize| ((p as isize - 1 + d).rem_euclid(m as isize) + 1) as usize;
        let w = worst_gene_lr(&parent, &inst).index;
        let swap = |a: usize, b: usize| {
            let mut c = cities.clone();
            c.swap(a, b);
            inst.tour_length(&c)
        };
        let c1 = swap(ring(w, -1), ring(w, -2));
        let c2 = swap(w, ring(w, 1));
        prop_assert_eq!(child.length(), c1.min(c2));
        prop_assert_eq!(child.length(), inst.tour_length(child.cities()));
    }

    #[test]
    fn probes_match_brute_force((inst, cities) in instance_and_tour(30)) {
        let t = Tour::new(&inst, cities.clone()).unwrap();
        let n = cities.len();
        let left = |i: usize| inst.distance(cities[i - 1], cities[i]);
        let lr = |i: usize| left(i) + inst.distance(cities[i], cities[(i + 1) % n]);

        // first index attaining the max
        let argmax = |f: &dyn Fn(usize) -> u64, skip: Option<usize>| {
            (1..n)
                .filter(|&i| Some(i) != skip)
                .fold(None, |acc: Option<usize>, i| match acc {
                    Some(j) if f(j) >= f(i) => Some(j),
                    _ => Some(i),
                })
                .unwrap()
        };

        let w = worst_gene_left(&t, &inst);
        prop_assert_eq!(w.index, argmax(&left, None));
        prop_assert_eq!(w.contribution, left(w.index));

        let (a, b) = worst_gene_pair(&t, &inst);
        prop_assert_eq!(a.index, w.index);
        prop_assert_eq!(b.index, argmax(&left, Some(a.index)));
        prop_assert_eq!(b.contribution, left(b.index));

        let w = worst_gene_lr(&t, &inst);
        prop_assert_eq!(w.index, argmax(&lr, None));
        prop_assert_eq!(w.contribution, lr(w.index));
    }

    #[test]
    fn tour_length_ignores_rotation_and_direction(
        (inst, cities) in instance_and_tour(30),
        shift in 0usize..30,
    ) {
        let len = inst.tour_length(&cities);
        let mut rotated = cities.clone();
        rotated.rotate_left(shift % cities.len());
        prop_assert_eq!(inst.tour_length(&rotated), len);
        rotated.reverse();
        prop_assert_eq!(inst.tour_length(&rotated), len);
    }

    #[test]
    fn nearest_neighbour_is_first_closest((inst, _) in instance_and_tour(30)) {
        let nn = inst.nearest_neighbor_table();
        let n = inst.dimension();
        for c in 0..n {
            let expect = (0..n)
                .filter(|&o| o != c)
                .min_by_key(|&o| (inst.distance(c, o), o))
                .unwrap();
            prop_assert_eq!(nn.nearest(c), expect);
        }
    }

    #[test]
    fn sbm_emits_shortest_new_candidate(
        (inst, cities) in instance_and_tour(25),
        seed in any::<u64>(),
        strict in any::<bool>(),
    ) {
        let nn = inst.nearest_neighbor_table();
        let ctx = MutationContext::new(&inst, &nn);
        let parent = Tour::new(&inst, cities).unwrap();
        let cfg = GaConfig { population_size: 6, ..GaConfig::default() };
        let mut rng = RngStream::new(seed, 1);
        let mut members = init_population(&inst, &cfg, &mut rng).members().to_vec();
        members.push(parent.clone());
        let pop = Population::from_members(members);
        let pool = if strict { OperatorPool::strict10() } else { OperatorPool::full12() };
        let mut stats = SelectionStats::default();
        let out = sbm_mutate(&parent, &pool, &pop, &ctx, &mut rng, &mut stats);

        prop_assert_eq!(out.candidates.len(), pool.len());
        let fresh: Vec<_> = out.candidates.iter().filter(|c| !c.in_population).collect();
        let winner = &out.candidates[out.winner];
        for (i, c) in out.candidates.iter().enumerate() {
            prop_assert_eq!(c.kind, pool.kinds()[i]);
            prop_assert_eq!(c.in_population, pop.members().iter().any(|m| m == &c.tour));
        }
        if fresh.is_empty() {
            prop_assert!(out.candidates.iter().all(|c| c.tour.length() >= winner.tour.length()));
        } else {
            prop_assert!(!winner.in_population);
            prop_assert!(fresh.iter().all(|c| c.tour.length() >= winner.tour.length()));
        }
        // earliest among equals
        prop_assert!(out.candidates[..out.winner]
            .iter()
            .all(|c| c.tour.length() > winner.tour.length()
                || (c.in_population && !fresh.is_empty())));
        prop_assert_eq!(stats.total(), 1);
        prop_assert_eq!(stats.count(out.winner_kind()), 1);
    }

    #[test]
    fn sam_only_uses_pool_operators(
        (inst, cities) in instance_and_tour(25),
        seed in any::<u64>(),
    ) {
        let nn = inst.nearest_neighbor_table();
        let ctx = MutationContext::new(&inst, &nn);
        let parent = Tour::new(&inst, cities).unwrap();
        let pool = OperatorPool::strict10();
        let mut rng = RngStream::new(seed, 0);
        let mut stats = SelectionStats::default();
        for _ in 0..20 {
            let (kind, child) = sam_mutate(&parent, &pool, &ctx, &mut rng, &mut stats);
            prop_assert!(pool.kinds().contains(&kind));
            assert_valid(&inst, &child);
        }
        prop_assert_eq!(stats.count(MutationKind::Exchange), 0);
        prop_assert_eq!(stats.count(MutationKind::Rearrangement), 0);
        prop_assert_eq!(stats.total(), 20);
    }

    #[test]
    fn generation_step_is_elitist_and_sorted(
        (inst, _) in instance_and_tour(30),
        seed in any::<u64>(),
        k in 1usize..12,
        op in prop::sample::select(MutationKind::ALL.to_vec()),
        p in prop_oneof![Just(1.0), 0.0f64..1.0],
    ) {
        let nn = inst.nearest_neighbor_table();
        let ctx = MutationContext::new(&inst, &nn);
        let cfg = GaConfig {
            population_size: k,
            operator: op,
            mutation_probability: p,
            ..GaConfig::default()
        };
        let mut rng = RngStream::new(seed, 0);
        let mut pop = init_population(&inst, &cfg, &mut rng);
        for _ in 0..5 {
            let before = pop.clone();
            let (next, stat) = step_generation(pop, &ctx, &cfg, &mut rng, &mut NoObserver);
            prop_assert_eq!(next.len(), k);
            prop_assert!(next.members().windows(2).all(|w| w[0].length() <= w[1].length()));
            prop_assert!(stat.best <= before.best().length());
            prop_assert_eq!(stat.best, next.best().length());
            // the i-th best never gets worse
            for (a, b) in next.members().iter().zip(before.members()) {
                prop_assert!(a.length() <= b.length());
            }
            for m in next.members() {
                assert_valid(&inst, m);
            }
            pop = next;
        }
    }
}
