use std::collections::BTreeSet;

use proptest::prelude::*;

use chtest_core::corpus::{generate, CorpusConfig};
use chtest_core::distiller::{distill_delta, distill_initial, relink_to};
use chtest_core::frontend::{parse_source, print_program, recheck};
use chtest_core::model::{Change, ChangeId, ChangeKind, ChangeModel, Indexes, Resolution, ResolutionMode, SubjectKind};
use chtest_core::mutator::{apply, generate_production_mutants};
use chtest_core::selector::{select_relevant_tests, tests_for_method, TestConfig};

fn resolution(poly: bool, ctors: bool) -> Resolution {
    let mode = if poly { ResolutionMode::Polymorphic } else { ResolutionMode::Static };
    Resolution::new(mode).with_constructors(ctors)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn document_round_trip(seed in 0u64..10_000, poly: bool, ctors: bool) {
        let g = generate(seed, &CorpusConfig::default());
        let m = distill_initial(&g.program, resolution(poly, ctors)).unwrap();
        let text = m.to_json();
        let back = ChangeModel::from_json(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn rebuilt_indexes_match_incremental(a in 0u64..10_000, b in 0u64..10_000, poly: bool) {
        let cfg = CorpusConfig::default();
        let (pa, pb) = (generate(a, &cfg).program, generate(b, &cfg).program);
        let mut m = distill_initial(&pa, resolution(poly, false)).unwrap();
        distill_delta(&mut m, &pa, &pb).unwrap();
        let rebuilt = Indexes::rebuild(m.changes(), m.subjects()).unwrap();
        prop_assert_eq!(&rebuilt, m.indexes());
    }

    #[test]
    fn delta_then_select_matches_fresh(a in 0u64..10_000, b in 0u64..10_000, poly: bool, ctors: bool) {
        let cfg = CorpusConfig::default();
        let tests = TestConfig::default();
        let (pa, pb) = (generate(a, &cfg).program, generate(b, &cfg).program);
        let res = resolution(poly, ctors);
        let mut history = distill_initial(&pa, res).unwrap();
        distill_delta(&mut history, &pa, &pb).unwrap();
        let fresh = distill_initial(&pb, res).unwrap();
        let alive = |m: &ChangeModel| m.alive_subjects().cloned().collect::<Vec<_>>();
        prop_assert_eq!(alive(&history), alive(&fresh));
        for s in fresh.alive_subjects().filter(|s| s.kind == SubjectKind::Method) {
            prop_assert_eq!(tests_for_method(&history, &s.id, &tests), tests_for_method(&fresh, &s.id, &tests));
        }
        prop_assert!(distill_delta(&mut history, &pb, &pb).unwrap().is_empty());
    }

    #[test]
    fn remove_follows_removal_of_dependents(a in 0u64..10_000, b in 0u64..10_000) {
        let cfg = CorpusConfig::default();
        let (pa, pb) = (generate(a, &cfg).program, generate(b, &cfg).program);
        let mut m = distill_initial(&pa, resolution(true, true)).unwrap();
        let before = m.changes().len();
        distill_delta(&mut m, &pa, &pb).unwrap();
        let mut alive: BTreeSet<_> = pa.classes.iter().map(|c| c.name.clone()).collect();
        for c in &m.changes()[before..] {
            if c.kind == ChangeKind::Remove {
                let subject = m.subject(&c.subject_id).unwrap();
                if subject.kind == SubjectKind::Class {
                    prop_assert!(alive.remove(&subject.identifier));
                }
            }
        }
    }

    #[test]
    fn per_change_answers_do_not_depend_on_batching(seed in 0u64..10_000, poly: bool) {
        let g = generate(seed, &CorpusConfig::default());
        let m = distill_initial(&g.program, resolution(poly, false)).unwrap();
        let cfg = TestConfig::default();
        let changes: Vec<Change> = m
            .alive_subjects()
            .filter(|s| s.kind == SubjectKind::Method)
            .enumerate()
            .map(|(i, s)| {
                let mut c = m.synthetic_modify(&s.id).unwrap();
                c.change_id = ChangeId(c.change_id.0 + i as u64);
                c
            })
            .collect();
        let batch = select_relevant_tests(&m, &changes, &cfg);
        let mut reversed = changes.clone();
        reversed.reverse();
        let batch_rev = select_relevant_tests(&m, &reversed, &cfg);
        prop_assert_eq!(&batch.per_change, &batch_rev.per_change);
        for c in &changes {
            let single = select_relevant_tests(&m, std::slice::from_ref(c), &cfg);
            prop_assert_eq!(&single.per_change[&c.change_id], &batch.per_change[&c.change_id]);
        }
    }

    #[test]
    fn relinking_round_trips_on_initial_models(seed in 0u64..10_000) {
        let g = generate(seed, &CorpusConfig::default());
        let s = distill_initial(&g.program, resolution(false, false)).unwrap();
        let p = distill_initial(&g.program, resolution(true, false)).unwrap();
        prop_assert_eq!(&relink_to(&s, ResolutionMode::Polymorphic), &p);
        prop_assert_eq!(&relink_to(&p, ResolutionMode::Static), &s);
    }

    #[test]
    fn mutants_print_reparse_and_check(seed in 0u64..10_000) {
        let g = generate(seed, &CorpusConfig::default());
        for m in generate_production_mutants(&g.program, &TestConfig::default()) {
            let mutated = apply(&g.program, &m);
            prop_assert!(mutated != g.program);
            recheck(&mutated).unwrap();
            let text = print_program(&mutated);
            let reparsed = parse_source(&text).unwrap().program;
            prop_assert_eq!(print_program(&reparsed), text);
        }
    }

    #[test]
    fn printer_round_trip(seed in 0u64..10_000) {
        let g = generate(seed, &CorpusConfig::default());
        let text = print_program(&g.program);
        let reparsed = parse_source(&text).unwrap().program;
        prop_assert_eq!(&reparsed, &g.program);
    }
}
