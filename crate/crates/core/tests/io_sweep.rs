mod common;

use besov_morrey::io::{parse_space, read_sequence_csv, write_sequence_csv};
use besov_morrey::sweep::{decide_blocks, Axis, SweepSpec};
use besov_morrey::{DecideOptions, DyadicSequence, Error, Outcome};
use common::*;
use proptest::prelude::*;

#[test]
fn space_display_round_trips() {
    let mut rng = rng(3);
    for _ in 0..300 {
        let d = 1 + (rand::Rng::gen_range(&mut rng, 0..2usize));
        let sp = random_space(&mut rng, &ALL, d);
        let back = parse_space(&sp.to_string()).unwrap();
        assert_eq!(back.to_string(), sp.to_string());
    }
}

#[test]
fn malformed_blocks_rejected() {
    for bad in [
        "s=1, p=2, q=2",
        "s=1, p=2, q=2, phi=power(2), colour=red",
        "s=x, p=2, q=2, phi=power(2)",
        "s=1, p=2, q=2, phi=power(1)",
        "s=1, p=2, q=2, phi=power(2), d=0",
    ] {
        assert!(parse_space(bad).is_err(), "{bad}");
    }
}

#[test]
fn sequence_csv_errors_carry_line_numbers() {
    let text = "# d=1\nj,m1,value\n0,0,1.0\n1,x,2.0\n";
    match read_sequence_csv(text) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
    let dup = read_sequence_csv("# d=1\n0,3,1.5\n0,3,0.5\n").unwrap();
    assert_eq!(dup.get(0, &[3]), 2.0);
}

fn arb_sequence() -> impl Strategy<Value = DyadicSequence> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::vec((0u32..8, prop::collection::vec(-20i64..20, d), -1e6f64..1e6), 1..40).prop_map(
            move |entries| {
                let mut s = DyadicSequence::new(d);
                for (j, m, v) in entries {
                    s.insert(j, m, v).unwrap();
                }
                s
            },
        )
    })
}

proptest! {
    #[test]
    fn sequence_csv_round_trip(seq in arb_sequence()) {
        let text = write_sequence_csv(&seq, &["note".to_string()]);
        let back = read_sequence_csv(&text).unwrap();
        prop_assert_eq!(back, seq);
    }
}

fn two_power_grid() -> SweepSpec {
    SweepSpec {
        source: "s=$s, p=1, q=$q, phi=twopower(4,1)".into(),
        target: "s=0, p=2, q=1, phi=twopower(4,2)".into(),
        axes: vec![Axis::parse("s", "0..0.25:11").unwrap(), Axis::parse("q", "1,2").unwrap()],
        options: DecideOptions::default(),
    }
}

#[test]
fn sweep_rows_are_ordered_and_repeatable() {
    let spec = two_power_grid();
    let a = spec.run().unwrap();
    let b = spec.run().unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 22);
    assert_eq!(a[0].assignment, vec![("s".into(), "0".into()), ("q".into(), "1".into())]);
    assert_eq!(a[1].assignment[1].1, "2");
}

#[test]
fn sweep_flips_at_two_power_threshold() {
    // (s1 − s2)/d ≥ (p1/u)(1/p1 − 1/p2) = 1/8, strict when q1 > q2
    for row in two_power_grid().run().unwrap() {
        let s: f64 = row.assignment[0].1.parse().unwrap();
        let q1 = &row.assignment[1].1;
        let expected = if q1 == "1" { s >= 0.125 - 1e-12 } else { s > 0.125 + 1e-12 };
        let got = row.verdict.as_ref().unwrap().outcome == Outcome::Holds;
        assert_eq!(got, expected, "s={s} q1={q1}");
    }
}

#[test]
fn sweep_matches_single_decisions() {
    for row in two_power_grid().run().unwrap() {
        let single = decide_blocks(&row.source, &row.target, &DecideOptions::default()).unwrap();
        assert_eq!(row.verdict.unwrap().fields(), single.fields());
    }
}

#[test]
fn sweep_keeps_row_errors() {
    let spec = SweepSpec {
        source: "s=0, p=$p, q=1, phi=power(2)".into(),
        target: "s=0, p=2, q=1, phi=power(2)".into(),
        axes: vec![Axis::parse("p", "2,3").unwrap()],
        options: DecideOptions::default(),
    };
    let rows = spec.run().unwrap();
    assert!(rows[0].verdict.is_ok());
    assert!(rows[1].verdict.is_err());
}
