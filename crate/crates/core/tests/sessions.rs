use num_bigint::BigUint;
use proptest::prelude::*;

use unichan_core::codebook::{rank, unrank, Codebook};
use unichan_core::{
    encode_step, replay, run_session, AnyStrategy, Channel, ChannelGraph, DirectionState, Error,
    GreedyAdversary, IdentityCode, ModifiedRubber, PassiveAdversary, PathAdversary, RunConstraint,
    Side, Strategy, Symbol, UnidirectionalChannel, UnidirectionalRubber, ZeroErrorUnidirectional,
};

fn z(q: usize) -> Channel {
    ChannelGraph::z(q).unwrap().into()
}

fn pair(q: usize) -> Channel {
    UnidirectionalChannel::z_pair(q).unwrap().into()
}

fn roster() -> Vec<(AnyStrategy, Channel, usize)> {
    vec![
        (
            ModifiedRubber::new(3, 2, Side::Z, 8, 2).unwrap().into(),
            z(3),
            2,
        ),
        (
            ModifiedRubber::new(2, 2, Side::Z, 8, 2).unwrap().into(),
            z(2),
            2,
        ),
        (
            ZeroErrorUnidirectional::new(5, 4).unwrap().into(),
            pair(5),
            4,
        ),
        (
            UnidirectionalRubber::new(3, 2, 8, 2).unwrap().into(),
            pair(3),
            2,
        ),
        (
            UnidirectionalRubber::new(4, 2, 8, 2).unwrap().into(),
            pair(4),
            2,
        ),
    ]
}

#[test]
fn passive_sessions_decode() {
    for (s, ch, _) in roster() {
        let count: u64 = s.message_count().try_into().unwrap();
        for m in 0..count {
            let m = BigUint::from(m);
            let tr = run_session(&s, &ch, &mut PassiveAdversary, &m, 0).unwrap();
            assert_eq!(tr.x, tr.y);
            assert_eq!(tr.decoded, Some(m));
            assert_eq!(tr.direction, DirectionState::Undecided);
        }
    }
}

#[test]
fn greedy_sessions_decode() {
    for (s, ch, t) in roster() {
        let count: u64 = s.message_count().try_into().unwrap();
        for m in 0..count {
            let m = BigUint::from(m);
            let tr = run_session(&s, &ch, &mut GreedyAdversary, &m, t).unwrap();
            assert!(tr.error_positions.len() <= t);
            assert_eq!(tr.decoded, Some(m), "{}", s.name());
        }
    }
}

#[test]
fn single_error_hand_trace() {
    let s = ModifiedRubber::new(3, 2, Side::Z, 4, 1).unwrap();
    let m = s.codebook().rank(&[1, 0]).unwrap();
    let tr = run_session(&s, &z(3), &mut PathAdversary::parse("-1").unwrap(), &m, 1).unwrap();
    assert_eq!(tr.x, vec![1, 2, 2, 0]);
    assert_eq!(tr.y, vec![0, 2, 2, 0]);
    assert_eq!(tr.decoded, Some(m));
    assert_eq!(tr.error_vector(), vec![-1, 0, 0, 0]);
}

#[test]
fn error_on_rubber_hand_trace() {
    // info (1) corrupted to 0, then the first rubber 2 corrupted to 1
    let s = ModifiedRubber::new(3, 2, Side::Z, 5, 2).unwrap();
    assert_eq!(s.info_length(), 1);
    let m = s.codebook().rank(&[1]).unwrap();
    let tr = run_session(
        &s,
        &z(3),
        &mut PathAdversary::parse("-1,-1").unwrap(),
        &m,
        2,
    )
    .unwrap();
    assert_eq!(tr.x, vec![1, 2, 2, 2, 2]);
    assert_eq!(tr.y, vec![0, 1, 2, 2, 2]);
    assert_eq!(tr.decoded, Some(m));
}

#[test]
fn mixed_directions_are_rejected() {
    let s = IdentityCode::new(3, 2).unwrap();
    let m = BigUint::from(4u32); // word (1, 1)
    let err = run_session(
        &s,
        &pair(3),
        &mut PathAdversary::parse("+1,-1").unwrap(),
        &m,
        2,
    )
    .unwrap_err();
    assert!(matches!(err, Error::InadmissibleOutput { position: 1, .. }));
}

#[test]
fn budget_overrun_is_a_fault() {
    let s = IdentityCode::new(3, 2).unwrap();
    let m = BigUint::from(8u32); // (2, 2)
    let err = run_session(
        &s,
        &z(3),
        &mut PathAdversary::parse("-1,-1").unwrap(),
        &m,
        1,
    )
    .unwrap_err();
    assert_eq!(err, Error::BudgetExceeded { budget: 1 });
}

#[test]
fn zero_error_examples() {
    let s = ZeroErrorUnidirectional::new(5, 3).unwrap();
    assert_eq!(s.message_count(), BigUint::from(9u32));
    let m = s.decode(&[4, 2, 0]).unwrap();
    assert_eq!(s.decode(&[3, 2, 0]), Some(m));
    assert_eq!(
        ZeroErrorUnidirectional::new(2, 4).unwrap().message_count(),
        BigUint::from(1u32)
    );
}

#[test]
fn unidirectional_rubber_without_errors_matches_plain_rubber() {
    for q in [3, 4] {
        for n in 3..8 {
            let uni = UnidirectionalRubber::new(q, 2, n, 0).unwrap();
            let plain = ModifiedRubber::new(q, 2, Side::Z, n - 2, 0).unwrap();
            assert_eq!(uni.message_count(), plain.message_count());
            let count: u64 = uni.message_count().try_into().unwrap();
            for m in 0..count {
                let m = BigUint::from(m);
                let a = run_session(&uni, &pair(q), &mut PassiveAdversary, &m, 0).unwrap();
                let b = run_session(&plain, &z(q), &mut PassiveAdversary, &m, 0).unwrap();
                assert_eq!(&a.x[..n - 2], b.x.as_slice());
                assert_eq!(&a.x[n - 2..], &[0, 0]);
            }
        }
    }
}

#[test]
fn rubber_rate_approaches_the_root_rate() {
    let (q, r, n, t) = (2usize, 2usize, 60usize, 6usize);
    let s = ModifiedRubber::new(q, r, Side::Z, n, t).unwrap();
    let tau = t as f64 / n as f64;
    let rate = unichan_core::codebook::ln_big(&s.message_count()) / (q as f64).ln() / n as f64;
    let expect = (1.0 - r as f64 * tau) * unichan_core::bounds::z_r(q, r).log2();
    assert!((rate - expect).abs() < 0.05, "{rate} vs {expect}");
}

#[test]
fn transcript_json_shape() {
    let s = ModifiedRubber::new(3, 2, Side::Z, 4, 1).unwrap();
    let m = BigUint::from(1u32);
    let tr = run_session(&s, &z(3), &mut GreedyAdversary, &m, 1).unwrap();
    let v: serde_json::Value = serde_json::from_str(&tr.to_json()).unwrap();
    for key in ["x", "y", "errors", "direction", "decoded"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["decoded"], "1");
}

fn strategy_and_path() -> impl proptest::strategy::Strategy<Value = (usize, u64, Vec<Symbol>)> {
    (
        0..5usize,
        any::<u64>(),
        proptest::collection::vec(0..4u16, 0..9),
    )
}

proptest! {
    #[test]
    fn causality_and_replay((which, m, y) in strategy_and_path()) {
        let (s, _, _) = roster().swap_remove(which);
        let count: u64 = s.message_count().try_into().unwrap();
        let m = BigUint::from(m % count);
        let q = s.alphabet().size() as Symbol;
        let n = s.block_length();
        let y: Vec<Symbol> = y.into_iter().map(|v| v % q).take(n).collect();
        let x = replay(&s, &m, &y).unwrap();
        for i in 0..x.len().min(n) {
            prop_assert_eq!(encode_step(&s, &m, &y[..i]).unwrap(), x[i]);
            // Changing later feedback leaves earlier symbols alone.
            let mut other = y.clone();
            if let Some(v) = other.get_mut(i) {
                *v = (*v + 1) % q;
                let x2 = replay(&s, &m, &other).unwrap();
                prop_assert_eq!(&x2[..=i], &x[..=i]);
            }
        }
    }

    #[test]
    fn path_sessions_account_for_errors(which in 0..5usize, m in any::<u64>(), e in proptest::collection::vec(-1i64..=1, 0..8)) {
        let (s, ch, t) = roster().swap_remove(which);
        let count: u64 = s.message_count().try_into().unwrap();
        let m = BigUint::from(m % count);
        match run_session(&s, &ch, &mut PathAdversary::new(e), &m, t) {
            Ok(tr) => {
                let wrong = tr.x.iter().zip(&tr.y).filter(|(a, b)| a != b).count();
                prop_assert_eq!(wrong, tr.error_positions.len());
                prop_assert!(wrong <= t);
                prop_assert_eq!(tr.decoded, Some(m.clone()));
                let pairs = || tr.x.iter().zip(&tr.y);
                match (&ch, tr.direction) {
                    (Channel::Graph(_), d) => {
                        prop_assert_eq!(d, DirectionState::Undecided);
                        prop_assert!(pairs().all(|(a, b)| b <= a));
                    }
                    (_, DirectionState::CommittedNegative) => prop_assert!(pairs().all(|(a, b)| b <= a)),
                    (_, DirectionState::CommittedPositive) => prop_assert!(pairs().all(|(a, b)| b >= a)),
                    (_, DirectionState::Undecided) => prop_assert_eq!(&tr.x, &tr.y),
                }
                prop_assert_eq!(replay(&s, &m, &tr.y).unwrap(), tr.x);
            }
            Err(Error::InadmissibleOutput { .. } | Error::BudgetExceeded { .. }) => {}
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn codebook_round_trip(q in 2usize..5, r in 1usize..4, len in 0usize..12, idx in any::<u64>()) {
        let b = (q - 1) as Symbol;
        let c = RunConstraint::new(q, b, r).unwrap();
        let book = Codebook::new(c, len);
        let size: u64 = book.size().try_into().unwrap();
        prop_assume!(size > 0);
        let idx = BigUint::from(idx % size);
        let w = unrank(c, len, &idx).unwrap();
        prop_assert!(c.is_valid(&w));
        prop_assert_eq!(rank(c, &w).unwrap(), idx);
    }
}
