use popstack::bound::{best_bound, theorem_bound, BoundQuery};
use popstack::enumerate::next_permutation;
use popstack::motion::{classify_transition, MotionKind, TraceMotions};
use popstack::sampling::sample_permutation;
use popstack::{sort_trace, t_star, Permutation};
use proptest::prelude::*;

fn for_all_permutations(n_max: usize, mut f: impl FnMut(&Permutation)) {
    for n in 1..=n_max {
        let mut values: Vec<u32> = (1..=n as u32).collect();
        loop {
            f(&Permutation::from_values(values.clone()).unwrap());
            if !next_permutation(&mut values) {
                break;
            }
        }
    }
}

#[test]
fn pop_structure_exhaustive_to_8() {
    for_all_permutations(8, |p| {
        let q = p.pop();
        assert_eq!(q == *p, p.is_identity(), "{p}");
        assert_eq!(p.reverse_complement().pop(), q.reverse_complement(), "{p}");
        let t = t_star(p).unwrap();
        assert!(t < p.len(), "{p}: t* = {t}");

        // Runs partition 1..=n and reversing each reproduces pop.
        let runs = p.decreasing_runs();
        let mut next = 1;
        let mut rebuilt: Vec<u32> = Vec::with_capacity(p.len());
        for r in &runs.runs {
            assert_eq!(r.start, next);
            let seg = &p.values()[r.start - 1..r.end()];
            assert!(seg.windows(2).all(|w| w[0] > w[1]));
            rebuilt.extend(seg.iter().rev());
            next = r.end() + 1;
        }
        assert_eq!(next, p.len() + 1);
        for w in runs.runs.windows(2) {
            // Maximality: the boundary between runs is an ascent.
            assert!(p.get(w[0].end()) < p.get(w[1].start));
        }
        assert_eq!(rebuilt, q.values());
    });
}

#[test]
fn classification_reproduces_pop_exhaustive_to_8() {
    for_all_permutations(8, |p| {
        let trace = sort_trace(p).unwrap();
        for t in 1..=trace.t_star() {
            let table = classify_transition(trace.step(t - 1), t).unwrap();
            let sum: i64 = table.iter().map(|(_, m)| m.offset()).sum();
            assert_eq!(sum, 0);
            assert_eq!(&table.apply().unwrap(), trace.step(t));
            if t >= 2 {
                assert!(!table
                    .iter()
                    .any(|(_, m)| matches!(m, MotionKind::FirstSortReversal(_))));
            }
        }
    });
}

#[test]
fn motions_mirror_under_reverse_complement() {
    for_all_permutations(7, |p| {
        let n = p.len() as u32;
        if n < 2 {
            return;
        }
        let a = TraceMotions::new(&sort_trace(p).unwrap()).unwrap();
        let b = TraceMotions::new(&sort_trace(&p.reverse_complement()).unwrap()).unwrap();
        assert_eq!(a.t_star(), b.t_star());
        for t in 1..=a.t_star() {
            for v in 1..=n {
                assert_eq!(
                    a.motion(t, v).mirror(),
                    b.motion(t, n + 1 - v),
                    "{p} t={t} v={v}"
                );
            }
        }
    });
}

#[test]
fn single_element_is_left_edge() {
    let table = classify_transition(&Permutation::identity(1), 1).unwrap();
    assert_eq!(table.motion_of(1), MotionKind::StationaryLeftEdge);
}

fn arb_permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| sample_permutation(n, seed, 0))
}

proptest! {
    #[test]
    fn pop_preserves_values(p in arb_permutation(300)) {
        let q = p.pop();
        prop_assert_eq!(q.len(), p.len());
        let mut sorted = q.values().to_vec();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, Permutation::identity(p.len()).into_values());
        prop_assert!(q.max_run_len() <= 3);
    }

    #[test]
    fn sampled_traces_respect_bound(p in arb_permutation(250)) {
        let t = t_star(&p).unwrap();
        prop_assert!(t < p.len());
        if !p.is_identity() {
            prop_assert!(best_bound(&p).unwrap().bound <= t as u64);
        }
    }

    #[test]
    fn bound_monotone_in_k(n in 1usize..400, i_frac in 0.0f64..1.0, k in 1usize..400) {
        let i = 1 + ((n - 1) as f64 * i_frac) as usize;
        prop_assume!(k < n);
        let here = theorem_bound(BoundQuery::new(n, i, k).unwrap());
        let next = theorem_bound(BoundQuery::new(n, i, k + 1).unwrap());
        match (here, next) {
            (Some(a), Some(b)) => prop_assert!(b <= a),
            (None, Some(_)) => prop_assert!(false, "larger k became applicable"),
            _ => {}
        }
    }

    #[test]
    fn parse_display_round_trip(p in arb_permutation(60)) {
        let q: Permutation = p.to_string().parse().unwrap();
        prop_assert_eq!(q, p);
    }
}
