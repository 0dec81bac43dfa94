//! Seeded random instance generator used by the verifier and the test
//! suites: slopes are reduced fractions a/b with |a| <= 3 and 1 <= b <= 3,
//! drawn until their denominators fill the requested dimension; Hodge
//! entries are uniform integers in [-5, 5].

use num::integer::gcd;
use rand::Rng;

use crate::isocrystal::{hodge_from_tuple, newton_from_slopes, HodgeData, NewtonData};
use crate::rational::{Rat, RatTuple};

/// Draws a random instance with dimension between 1 and `max_d`.
pub fn random_instance<R: Rng>(rng: &mut R, max_d: usize) -> (NewtonData, HodgeData) {
    assert!(max_d >= 1);
    let d = rng.gen_range(1..=max_d);
    let mut slopes: Vec<Rat> = Vec::new();
    let mut remaining = d;
    while remaining > 0 {
        let b_max = remaining.min(3) as i64;
        loop {
            let b = rng.gen_range(1..=b_max);
            let a = rng.gen_range(-3..=3i64);
            if gcd(a.unsigned_abs(), b as u64) == 1 {
                slopes.push(Rat::new(a, b));
                remaining -= b as usize;
                break;
            }
        }
    }
    slopes.sort_by(|x, y| y.cmp(x));
    let newton = newton_from_slopes(&slopes).expect("generated slopes are sorted");

    let mu: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
    let hodge = hodge_from_tuple(&RatTuple::from_ints(&mu)).expect("non-empty");
    (newton, hodge)
}
