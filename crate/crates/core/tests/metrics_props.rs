use num_rational::Ratio;
use proptest::prelude::*;
use sualbp::metrics::{primal_gap, primal_integral, IncumbentTrace};

/// Strictly improving trace from (gap-free) increments.
fn trace(steps: &[(u64, i64)], horizon: u64, reference: i64) -> IncumbentTrace {
    let mut t = IncumbentTrace {
        horizon_micros: horizon,
        reference: Some(reference),
        ..Default::default()
    };
    let (mut at, mut obj) = (0u64, reference + steps.iter().map(|s| s.1).sum::<i64>());
    for &(dt, drop) in steps {
        at += dt;
        t.push(at, obj);
        obj -= drop;
    }
    t
}

fn steps() -> impl Strategy<Value = Vec<(u64, i64)>> {
    prop::collection::vec((1u64..2_000_000, 1i64..20), 0..8)
}

proptest! {
    #[test]
    fn integral_lies_in_zero_to_horizon(s in steps(), horizon in 0u64..30_000_000, reference in 1i64..100) {
        let p = primal_integral(&trace(&s, horizon, reference));
        prop_assert!(p >= Ratio::from_integer(0));
        prop_assert!(p <= Ratio::new(i128::from(horizon), 1_000_000));
    }

    /// Finding every incumbent earlier never raises the integral.
    #[test]
    fn earlier_incumbents_lower_the_integral(s in steps(), shrink in 1u64..4, horizon in 0u64..30_000_000, reference in 1i64..100) {
        let faster: Vec<_> = s.iter().map(|&(dt, d)| (dt / shrink.max(1) / 2 + 1, d)).collect();
        let slow = primal_integral(&trace(&s, horizon, reference));
        let fast = primal_integral(&trace(&faster, horizon, reference));
        prop_assert!(fast <= slow);
    }

    #[test]
    fn gap_is_a_fraction(c in -50i64..200, r in -50i64..200) {
        let g = primal_gap(Some(c), r);
        prop_assert!(g >= Ratio::from_integer(0) && g <= Ratio::from_integer(1));
        prop_assert_eq!(primal_gap(Some(r), r), Ratio::from_integer(0));
    }
}
