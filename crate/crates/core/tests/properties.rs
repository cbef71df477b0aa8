use proptest::prelude::*;
use tbm::credal::{enumerate_allocations, enumerate_vertices};
use tbm::{
    combine_dempster, d_condition, d_condition_closed_form, g_condition, mass_from_bel, Frame, MassFunction,
    MultivaluedSource, Rational, Scalar, Scenario, SubsetMask, WorldId, WorldMode,
};

type Q = Rational;

fn frame(n: usize) -> Frame {
    Frame::new((0..n).map(|i| format!("e{i}"))).unwrap()
}

/// Closed-world masses on frames of 1..=4 elements: up to 6 focal sets with
/// integer weights.
fn closed_mass() -> impl Strategy<Value = MassFunction<Q>> {
    (1usize..=4).prop_flat_map(|n| {
        let max = (1u32 << n) - 1;
        prop::collection::vec((1..=max, 1i64..=9), 1..=6).prop_map(move |entries| {
            let total: i64 = entries.iter().map(|e| e.1).sum();
            MassFunction::new(
                frame(n),
                entries
                    .into_iter()
                    .map(|(bits, w)| (SubsetMask::from_bits(bits), Q::from_ratio(w, total))),
                WorldMode::Closed,
            )
            .unwrap()
        })
    })
}

fn open_mass() -> impl Strategy<Value = MassFunction<Q>> {
    (1usize..=4).prop_flat_map(|n| {
        let max = (1u32 << n) - 1;
        prop::collection::vec((0..=max, 1i64..=9), 1..=6).prop_map(move |entries| {
            let total: i64 = entries.iter().map(|e| e.1).sum();
            MassFunction::new(
                frame(n),
                entries
                    .into_iter()
                    .map(|(bits, w)| (SubsetMask::from_bits(bits), Q::from_ratio(w, total))),
                WorldMode::Open,
            )
            .unwrap()
        })
    })
}

/// Same-frame pairs and triples.
fn mass_on(n: usize, empty_ok: bool) -> impl Strategy<Value = MassFunction<Q>> {
    let lo = if empty_ok { 0 } else { 1 };
    let max = (1u32 << n) - 1;
    prop::collection::vec((lo..=max, 1i64..=9), 1..=5).prop_map(move |entries| {
        let total: i64 = entries.iter().map(|e| e.1).sum();
        let mode = if empty_ok { WorldMode::Open } else { WorldMode::Closed };
        MassFunction::new(
            frame(n),
            entries
                .into_iter()
                .map(|(bits, w)| (SubsetMask::from_bits(bits), Q::from_ratio(w, total))),
            mode,
        )
        .unwrap()
    })
}

fn triple() -> impl Strategy<Value = (MassFunction<Q>, MassFunction<Q>, MassFunction<Q>)> {
    (1usize..=4, any::<bool>())
        .prop_flat_map(|(n, open)| (mass_on(n, open), mass_on(n, open), mass_on(n, open)))
}

fn source() -> impl Strategy<Value = MultivaluedSource<Q>> {
    (1usize..=4).prop_flat_map(|n| {
        let max = (1u32 << n) - 1;
        prop::collection::vec((0..=max, 0i64..=4), 1..=5).prop_map(move |mut entries| {
            if entries.iter().all(|e| e.1 == 0) {
                entries[0].1 = 1;
            }
            let total: i64 = entries.iter().map(|e| e.1).sum();
            MultivaluedSource::new(
                frame(n),
                entries.into_iter().enumerate().map(|(i, (bits, w))| {
                    (format!("x{i}"), Q::from_ratio(w, total), SubsetMask::from_bits(bits))
                }),
            )
            .unwrap()
        })
    })
}

fn scenario() -> impl Strategy<Value = Scenario<Q>> {
    (1usize..=4).prop_flat_map(|n| {
        let max = (1u32 << n) - 1;
        prop::collection::vec((1..=max, 1i64..=4), 1..=4).prop_map(move |entries| {
            let total: i64 = entries.iter().map(|e| e.1).sum();
            Scenario::build(
                frame(n),
                entries.into_iter().enumerate().map(|(i, (bits, w))| {
                    (format!("S{i}"), Q::from_ratio(w, total), SubsetMask::from_bits(bits))
                }),
            )
            .unwrap()
        })
    })
}

/// Σ m(X) over nonempty X ⊆ A by scanning every subset of the frame.
fn bel_by_enumeration(m: &MassFunction<Q>, a: SubsetMask) -> Q {
    let mut total = Q::from_ratio(0, 1);
    for bits in 1..(1u32 << m.frame().len()) {
        if bits & !a.bits() == 0 {
            total += m.mass(SubsetMask::from_bits(bits));
        }
    }
    total
}

fn total_mass(m: &MassFunction<Q>) -> Q {
    m.focal().map(|(_, v)| v.clone()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn belief_measures_are_monotone_and_ordered(m in closed_mass()) {
        let f = m.frame().clone();
        let one = Q::from_ratio(1, 1);
        for a in f.subsets() {
            let (bel_a, pl_a) = (m.bel(a).unwrap(), m.pl(a).unwrap());
            prop_assert!(bel_a <= pl_a);
            prop_assert_eq!(pl_a.clone(), one.clone() - m.bel(f.complement(a)).unwrap());
            for b in a.submasks() {
                prop_assert!(m.bel(b).unwrap() <= bel_a);
                prop_assert!(m.pl(b).unwrap() <= pl_a);
            }
        }
    }

    #[test]
    fn belief_is_two_monotone(m in closed_mass()) {
        let f = m.frame().clone();
        for a in f.subsets() {
            for b in f.subsets() {
                let lhs = m.bel(a | b).unwrap() + m.bel(a & b).unwrap();
                let rhs = m.bel(a).unwrap() + m.bel(b).unwrap();
                prop_assert!(lhs >= rhs);
            }
        }
    }

    #[test]
    fn table_matches_enumeration_and_inverts(m in prop_oneof![closed_mass(), open_mass()]) {
        let table = m.bel_table();
        for a in m.frame().subsets() {
            prop_assert_eq!(table.bel(a).unwrap(), &bel_by_enumeration(&m, a));
        }
        let back = mass_from_bel(&table).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.empty_mass(), m.empty_mass());
    }

    #[test]
    fn bayesian_masses_are_additive(weights in prop::collection::vec(0i64..=5, 1..=4)) {
        prop_assume!(weights.iter().any(|&w| w > 0));
        let total: i64 = weights.iter().sum();
        let f = frame(weights.len());
        let m = MassFunction::bayesian(
            f.clone(),
            weights.iter().enumerate().map(|(i, &w)| (format!("e{i}"), Q::from_ratio(w, total))),
        ).unwrap();
        for a in f.subsets() {
            prop_assert_eq!(m.bel(a).unwrap(), m.pl(a).unwrap());
            for b in f.subsets().filter(|b| !b.intersects(a)) {
                prop_assert_eq!(m.bel(a | b).unwrap(), m.bel(a).unwrap() + m.bel(b).unwrap());
            }
        }
    }

    #[test]
    fn transfer_matches_closed_form(m in prop_oneof![closed_mass(), open_mass()]) {
        let f = m.frame().clone();
        for b in f.subsets().skip(1) {
            let Ok(moved) = d_condition(&m, b, true) else {
                prop_assert!(!Scalar::is_positive(&m.pl(b).unwrap()));
                continue;
            };
            for a in f.subsets() {
                let cf = d_condition_closed_form(&m, a, b).unwrap();
                prop_assert_eq!(cf.lower, moved.mass.bel(a).unwrap());
                prop_assert_eq!(cf.upper, moved.mass.pl(a).unwrap());
            }
        }
    }

    #[test]
    fn conditioning_identities(m in prop_oneof![closed_mass(), open_mass()]) {
        let f = m.frame().clone();
        prop_assert_eq!(&d_condition(&m, f.full(), false).unwrap().mass, &m);
        if m.mode() == WorldMode::Closed {
            prop_assert_eq!(&d_condition(&m, f.full(), true).unwrap().mass, &m);
        }
        for b in f.subsets().skip(1) {
            let open = d_condition(&m, b, false).unwrap();
            prop_assert_eq!(total_mass(&open.mass), Q::from_ratio(1, 1));
            prop_assert_eq!(&d_condition(&open.mass, b, false).unwrap().mass, &open.mass);
            if let Ok(once) = d_condition(&m, b, true) {
                let twice = d_condition(&once.mass, b, true).unwrap();
                prop_assert_eq!(&twice.mass, &once.mass);
                prop_assert_eq!(twice.conflict, Q::from_ratio(0, 1));
            }
        }
    }

    #[test]
    fn combination_laws((m1, m2, m3) in triple()) {
        let vac = MassFunction::vacuous(m1.frame().clone());
        for normalize in [true, false] {
            let id = combine_dempster(&m1, &vac, normalize);
            if let Ok(id) = id {
                if normalize && m1.mode() == WorldMode::Open {
                    // normalization drops m(∅)
                    prop_assert_eq!(&id.mass, &d_condition(&m1, m1.frame().full(), true).unwrap().mass);
                } else {
                    prop_assert_eq!(&id.mass, &m1);
                }
            }
            let ab = combine_dempster(&m1, &m2, normalize);
            let ba = combine_dempster(&m2, &m1, normalize);
            match (&ab, &ba) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "commutativity broke on error status"),
            }
            let left = ab.and_then(|x| combine_dempster(&x.mass, &m3, normalize));
            let right = combine_dempster(&m2, &m3, normalize).and_then(|x| combine_dempster(&m1, &x.mass, normalize));
            if let (Ok(l), Ok(r)) = (&left, &right) {
                prop_assert_eq!(&l.mass, &r.mass);
            }
            if !normalize {
                prop_assert!(left.is_ok() && right.is_ok());
            }
        }
    }

    #[test]
    fn conditioning_is_combination_with_a_categorical(m in prop_oneof![closed_mass(), open_mass()]) {
        let f = m.frame().clone();
        for b in f.subsets().skip(1) {
            let cat = MassFunction::categorical(f.clone(), b).unwrap();
            for normalize in [true, false] {
                let via_comb = combine_dempster(&m, &cat, normalize);
                let via_cond = d_condition(&m, b, normalize);
                match (via_comb, via_cond) {
                    (Ok(x), Ok(y)) => {
                        prop_assert_eq!(&x.mass, &y.mass);
                        prop_assert_eq!(x.conflict, y.conflict);
                    }
                    (Err(_), Err(_)) => {}
                    (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
                }
            }
        }
    }

    #[test]
    fn robust_conditioning_is_the_credal_envelope(m in closed_mass()) {
        let credal = enumerate_vertices(&m).unwrap();
        let f = m.frame().clone();
        for a in f.subsets() {
            let env = credal.envelope(a);
            prop_assert_eq!(env.lower, m.bel(a).unwrap());
            prop_assert_eq!(env.upper, m.pl(a).unwrap());
        }
        for b in f.subsets() {
            if !Scalar::is_positive(&m.pl(b).unwrap()) {
                prop_assert!(g_condition(&m, f.full(), b).is_err());
                continue;
            }
            for a in f.subsets() {
                let g = g_condition(&m, a, b).unwrap();
                let env = credal.conditional_envelope(a, b).unwrap();
                prop_assert_eq!((&g.lower, &g.upper), (&env.lower, &env.upper));
                let d = d_condition_closed_form(&m, a, b).unwrap();
                prop_assert!(g.contains(&d));
            }
        }
    }

    #[test]
    fn credal_vertices_are_distributions(m in closed_mass()) {
        let raw = enumerate_allocations(&m).unwrap();
        let product: usize = m.focal().map(|(s, _)| s.len()).product();
        prop_assert_eq!(raw.len(), product);
        let credal = enumerate_vertices(&m).unwrap();
        prop_assert!(credal.len() <= product);
        for v in credal.vertices() {
            prop_assert!(v.distribution.iter().all(|p| !Scalar::is_negative(p)));
            prop_assert_eq!(v.distribution.iter().cloned().sum::<Q>(), Q::from_ratio(1, 1));
            for a in m.frame().subsets() {
                prop_assert!(m.bel(a).unwrap() <= v.probability(a));
                prop_assert!(v.probability(a) <= m.pl(a).unwrap());
            }
        }
        for a in m.frame().subsets() {
            prop_assert_eq!(tbm::credal::envelope_over(&raw, a), credal.envelope(a));
        }
    }

    #[test]
    fn mapping_conditioning_is_mass_transfer(s in source()) {
        let f = s.target().clone();
        for b in f.subsets() {
            let mapped = s.condition_mapping(b);
            for normalize in [true, false] {
                let lhs = mapped.induced_mass(normalize);
                let rhs = s.induced_mass(normalize).and_then(|m| {
                    if b.is_empty() {
                        // transfer onto ∅ is total conflict
                        if normalize { Err(tbm::Error::TotalConflict) } else {
                            MassFunction::new(f.clone(), [(SubsetMask::EMPTY, Q::from_ratio(1, 1))], WorldMode::Open)
                        }
                    } else {
                        d_condition(&m, b, normalize).map(|r| r.mass)
                    }
                });
                match (lhs, rhs) {
                    (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                    (Err(_), Err(_)) => {}
                    (x, y) => prop_assert!(false, "B={:?}: {:?} vs {:?}", b, x, y),
                }
            }
        }
    }

    #[test]
    fn induced_measures_are_probabilities_of_preimages(s in source()) {
        let m = s.induced_mass(false).unwrap();
        for a in s.target().subsets() {
            // direct sums over the states
            let mut lower = Q::from_ratio(0, 1);
            let mut upper = Q::from_ratio(0, 1);
            for (p, img) in s.probabilities().iter().zip(s.images()) {
                if !img.is_empty() && img.bits() & !a.bits() == 0 {
                    lower += p.clone();
                }
                if img.bits() & a.bits() != 0 {
                    upper += p.clone();
                }
            }
            prop_assert_eq!(m.bel(a).unwrap(), lower);
            prop_assert_eq!(m.pl(a).unwrap(), upper);
        }
    }

    #[test]
    fn source_revisions_commute(s in source(), pick in any::<u32>()) {
        let f = s.target().clone();
        let allowed: Vec<String> = s.labels().iter().enumerate()
            .filter(|(i, _)| pick & (1 << i) != 0)
            .map(|(_, l)| l.clone())
            .collect();
        for b1 in f.subsets() {
            if let Ok(conditioned) = s.condition_source(&allowed) {
                prop_assert_eq!(
                    conditioned.condition_mapping(b1),
                    s.condition_mapping(b1).condition_source(&allowed).unwrap()
                );
            }
            for b2 in f.subsets() {
                prop_assert_eq!(s.condition_mapping(b1).condition_mapping(b2), s.condition_mapping(b1 & b2));
            }
        }
    }

    #[test]
    fn observation_is_dempster_conditioning(sc in scenario()) {
        let f = sc.outcomes().clone();
        for b in f.subsets().skip(1) {
            let observed = sc.observe_outcomes(b).unwrap();
            for normalize in [true, false] {
                let lhs = observed.induced_mass(normalize);
                let rhs = sc.induced_mass(normalize).and_then(|m| d_condition(&m, b, normalize)).map(|r| r.mass);
                match (lhs, rhs) {
                    (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                    (Err(_), Err(_)) => {}
                    (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
                }
            }
        }
    }

    #[test]
    fn case1_equals_rebuilding_from_survivors(sc in scenario(), kill in any::<u64>()) {
        let dead: Vec<WorldId> = (0..sc.world_count()).filter(|w| kill & (1 << (w % 64)) != 0).map(WorldId).collect();
        let Ok(revised) = sc.apply_case1(&dead) else {
            prop_assert_eq!(dead.len(), sc.world_count());
            return Ok(());
        };
        let survivors = revised.surviving_worlds();
        let rebuilt = Scenario::build(
            sc.outcomes().clone(),
            sc.sources().iter().zip(sc.probabilities()).enumerate().map(|(x, (name, p))| {
                let opts = survivors.iter().fold(SubsetMask::EMPTY, |acc, &w| acc | SubsetMask::singleton(sc.assignment(w, x)));
                (name.clone(), p.clone(), opts)
            }),
        ).unwrap();
        prop_assert_eq!(revised.induced_mass(true).unwrap(), rebuilt.induced_mass(true).unwrap());
        // Case 1 only removes pairs
        prop_assert!(revised.alive_pairs().iter().all(|&(w, x)| sc.is_alive(w, x)));
        prop_assert_eq!(revised.probabilities(), sc.probabilities());
    }

    #[test]
    fn case3_commutes_with_case2(sc in scenario(), kill in any::<u64>(), pick in any::<u8>()) {
        let k = sc.sources().len();
        let pairs: Vec<(WorldId, String)> = sc.alive_pairs().into_iter().enumerate()
            .filter(|(i, _)| kill & (1 << (i % 64)) != 0)
            .map(|(_, (w, x))| (w, sc.sources()[x].clone()))
            .collect();
        let allowed: Vec<&String> = sc.sources().iter().enumerate().filter(|(i, _)| pick & (1 << i) != 0).map(|(_, s)| s).collect();
        let Ok(c3) = sc.apply_case3(&allowed) else { return Ok(()); };
        let a = c3.apply_case2(&pairs).unwrap();
        let b = sc.apply_case2(&pairs).unwrap().apply_case3(&allowed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.alive_pairs().len(), sc.world_count() * k - pairs.len());
    }
}

#[test]
fn float_and_exact_agree_on_random_masses() {
    let mut rng = tbm::random::seeded(11);
    for _ in 0..50 {
        let exact: MassFunction<Q> = tbm::random::random_mass(&mut rng, 4);
        let float = MassFunction::new(
            exact.frame().clone(),
            exact.focal().map(|(s, m)| (s, m.to_f64())),
            WorldMode::Closed,
        )
        .unwrap();
        let f = exact.frame().clone();
        for b in f.subsets().filter(|&b| Scalar::is_positive(&exact.pl(b).unwrap())) {
            for a in f.subsets() {
                let ge = g_condition(&exact, a, b).unwrap();
                let gf = g_condition(&float, a, b).unwrap();
                assert!((ge.lower.to_f64() - gf.lower).abs() < 1e-9);
                assert!((ge.upper.to_f64() - gf.upper).abs() < 1e-9);
            }
        }
        let report = tbm::verify_against_closed_forms(&float).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
    }
}
