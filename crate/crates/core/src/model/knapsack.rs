//! Bin-packing weights for the station-count bounds.
//!
//! Weights are kept as integers: `w2` in units of one station, `w2p` in
//! halves and `w3` in sixths, so all sums stay exact.

use num_rational::Ratio;

use crate::instance::Time;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KnapsackWeights {
    /// 1 if `t > c/2`.
    pub w2: i64,
    /// 1 (one half) if `t = c/2`.
    pub w2p_halves: i64,
    /// Weight in sixths: 6, 4, 3, 2 or 0.
    pub w3_sixths: i64,
}

impl KnapsackWeights {
    /// Weights of an item of size `t` in a bin of capacity `c`. Sizes above
    /// `c` are rejected.
    pub fn of(t: Time, c: Time) -> Option<Self> {
        if t > c || c <= 0 {
            return None;
        }
        if t <= 0 {
            return Some(KnapsackWeights::default());
        }
        let w2 = i64::from(2 * t > c);
        let w2p_halves = i64::from(2 * t == c);
        let w3_sixths = if 3 * t > 2 * c {
            6
        } else if 3 * t == 2 * c {
            4
        } else if 3 * t > c {
            3
        } else if 3 * t == c {
            2
        } else {
            0
        };
        Some(KnapsackWeights {
            w2,
            w2p_halves,
            w3_sixths,
        })
    }

    pub fn w2p(&self) -> Ratio<i64> {
        Ratio::new(self.w2p_halves, 2)
    }

    pub fn w3(&self) -> Ratio<i64> {
        Ratio::new(self.w3_sixths, 6)
    }
}

/// Credits of an open station with free capacity `r`, treated as one more
/// item: `(l2 in halves, l3 in sixths)`.
pub fn credits(r: Time, c: Time) -> (i64, i64) {
    if r <= 0 {
        return (0, 0);
    }
    let w = KnapsackWeights::of(r.min(c), c).unwrap_or_default();
    (2 * w.w2 + w.w2p_halves, w.w3_sixths)
}

/// `Σ w2 + ⌈Σ w2' − l2⌉` from the summed halves.
pub fn bound2(w2_sum: i64, w2p_halves_sum: i64, l2_halves: i64) -> i64 {
    w2_sum + ceil_div(w2p_halves_sum - l2_halves, 2)
}

/// `⌈Σ w3 − l3⌉` from the summed sixths.
pub fn bound3(w3_sixths_sum: i64, l3_sixths: i64) -> i64 {
    ceil_div(w3_sixths_sum - l3_sixths, 6)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    crate::preprocess::div_ceil(a, b)
}
