//! Validated Newton and Hodge data, their value-class structure,
//! stabilizer compositions and the two classical non-emptiness criteria.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Composition;
use crate::rational::{dominance_geq, fr_geq, Rat, RatTuple};

/// Slope data of an isocrystal: simple-summand slopes `r_i/s_i` (each
/// contributing a block of `s_i` equal entries to the full `d`-tuple),
/// plus the grouping of summands by distinct slope value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonData {
    simple_slopes: Vec<Rat>,
    block_sizes: Vec<usize>,
    d: usize,
    nu_tuple: RatTuple,
    distinct_values: Vec<Rat>,
    class_mults: Vec<usize>,
    entry_mults: Vec<usize>,
}

impl NewtonData {
    /// Number of simple summands.
    pub fn l(&self) -> usize {
        self.simple_slopes.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn simple_slopes(&self) -> &[Rat] {
        &self.simple_slopes
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn block_sizes_composition(&self) -> Composition {
        Composition::new(self.block_sizes.clone()).unwrap()
    }

    pub fn nu_tuple(&self) -> &RatTuple {
        &self.nu_tuple
    }

    pub fn distinct_values(&self) -> &[Rat] {
        &self.distinct_values
    }

    /// Number of simple summands per distinct slope value.
    pub fn class_mults(&self) -> &[usize] {
        &self.class_mults
    }

    /// Number of entries of the `d`-tuple per distinct slope value.
    pub fn entry_mults(&self) -> &[usize] {
        &self.entry_mults
    }

    /// For each summand, the index (0-based) of its slope class. Classes are
    /// consecutive since the slopes are sorted.
    pub fn class_of_summand(&self, summand: usize) -> usize {
        debug_assert!((1..=self.l()).contains(&summand));
        let slope = &self.simple_slopes[summand - 1];
        self.distinct_values.iter().position(|v| v == slope).unwrap()
    }
}

/// Builds Newton data from the slopes of the simple summands
/// (non-increasing); `s_i` is the reduced denominator of each slope.
pub fn newton_from_slopes(slopes: &[Rat]) -> Result<NewtonData> {
    if slopes.is_empty() {
        return Err(Error::NotNewtonVector("no slopes given".into()));
    }
    for pair in slopes.windows(2) {
        if pair[0] < pair[1] {
            return Err(Error::NotSorted(format!(
                "slopes {} < {} are increasing",
                pair[0], pair[1]
            )));
        }
    }
    let block_sizes: Vec<usize> = slopes
        .iter()
        .map(|s| s.denom_usize())
        .collect::<Result<_>>()?;
    let d: usize = block_sizes.iter().sum();
    let mut entries = Vec::with_capacity(d);
    for (slope, &size) in slopes.iter().zip(&block_sizes) {
        for _ in 0..size {
            entries.push(slope.clone());
        }
    }
    let nu_tuple = RatTuple::new(entries);
    let mut distinct_values = Vec::new();
    let mut class_mults = Vec::new();
    for slope in slopes {
        if distinct_values.last() == Some(slope) {
            *class_mults.last_mut().unwrap() += 1;
        } else {
            distinct_values.push(slope.clone());
            class_mults.push(1);
        }
    }
    let entry_mults = distinct_values
        .iter()
        .zip(&class_mults)
        .map(|(v, &m)| Ok(v.denom_usize()? * m))
        .collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(entry_mults.iter().sum::<usize>(), d);
    Ok(NewtonData {
        simple_slopes: slopes.to_vec(),
        block_sizes,
        d,
        nu_tuple,
        distinct_values,
        class_mults,
        entry_mults,
    })
}

/// Builds Newton data from the full `d`-tuple. Each distinct value `r/s`
/// (lowest terms) must occur a multiple of `s` times; the quotient is the
/// number of simple summands with that slope.
pub fn newton_from_tuple(t: &RatTuple) -> Result<NewtonData> {
    if t.is_empty() {
        return Err(Error::NotNewtonVector("empty tuple".into()));
    }
    if !t.is_non_increasing() {
        return Err(Error::NotSorted(format!("{}", t)));
    }
    let mut slopes = Vec::new();
    let mut i = 0;
    while i < t.len() {
        let value = t[i].clone();
        let mut mult = 0;
        while i < t.len() && t[i] == value {
            mult += 1;
            i += 1;
        }
        let s = value.denom_usize()?;
        if mult % s != 0 {
            return Err(Error::NotNewtonVector(format!(
                "value {} occurs {} times, not a multiple of its denominator {}",
                value, mult, s
            )));
        }
        for _ in 0..mult / s {
            slopes.push(value.clone());
        }
    }
    newton_from_slopes(&slopes)
}

/// A filtration type: the non-increasing `d`-tuple of jump values with
/// their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeData {
    mu_tuple: RatTuple,
    distinct_values: Vec<Rat>,
    value_mults: Vec<usize>,
}

impl HodgeData {
    pub fn d(&self) -> usize {
        self.mu_tuple.len()
    }

    pub fn mu_tuple(&self) -> &RatTuple {
        &self.mu_tuple
    }

    pub fn distinct_values(&self) -> &[Rat] {
        &self.distinct_values
    }

    pub fn value_mults(&self) -> &[usize] {
        &self.value_mults
    }

    pub fn class_of_entry(&self, entry: usize) -> usize {
        debug_assert!((1..=self.d()).contains(&entry));
        let value = &self.mu_tuple[entry - 1];
        self.distinct_values.iter().position(|v| v == value).unwrap()
    }
}

/// Builds Hodge data from any non-empty rational tuple; unsorted input is
/// sorted descending first.
pub fn hodge_from_tuple(t: &RatTuple) -> Result<HodgeData> {
    if t.is_empty() {
        return Err(Error::NotNewtonVector("empty Hodge tuple".into()));
    }
    let mu_tuple = t.sort_desc();
    let mut distinct_values: Vec<Rat> = Vec::new();
    let mut value_mults = Vec::new();
    for e in mu_tuple.iter() {
        if distinct_values.last() == Some(e) {
            *value_mults.last_mut().unwrap() += 1;
        } else {
            distinct_values.push(e.clone());
            value_mults.push(1);
        }
    }
    Ok(HodgeData {
        mu_tuple,
        distinct_values,
        value_mults,
    })
}

/// The stabilizer of the Hodge tuple inside `S_d`, as the composition of
/// value multiplicities.
pub fn stab_mu(h: &HodgeData) -> Composition {
    Composition::new(h.value_mults.clone()).unwrap()
}

/// The stabilizer of the Newton vector inside `S_l`, as the composition of
/// summand-class multiplicities.
pub fn stab_nu(n: &NewtonData) -> Composition {
    Composition::new(n.class_mults.clone()).unwrap()
}

fn check_dims(h: &HodgeData, n: &NewtonData) -> Result<()> {
    if h.d() != n.d() {
        return Err(Error::LengthMismatch {
            expected: n.d(),
            got: h.d(),
        });
    }
    Ok(())
}

/// Non-emptiness of the weakly admissible locus: partial sums of `mu`
/// dominate those of `nu` with equal totals.
pub fn wa_nonempty(h: &HodgeData, n: &NewtonData) -> Result<bool> {
    check_dims(h, n)?;
    fr_geq(h.mu_tuple(), n.nu_tuple())
}

/// Non-emptiness of the semistable locus: the normalized partial-sum order,
/// equivalently the equal-total order after shifting `mu` by
/// `(|nu| - |mu|) / d`.
pub fn ss_nonempty(h: &HodgeData, n: &NewtonData) -> Result<bool> {
    check_dims(h, n)?;
    dominance_geq(h.mu_tuple(), n.nu_tuple())
}

/// The instance file format: a Newton input (slopes or full tuple) and the
/// Hodge tuple, all rationals as strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub newton: NewtonInput,
    pub hodge: Vec<Rat>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NewtonInput {
    Slopes(Vec<Rat>),
    Tuple(Vec<Rat>),
}

impl InstanceFile {
    pub fn build(&self) -> Result<(NewtonData, HodgeData)> {
        let newton = match &self.newton {
            NewtonInput::Slopes(slopes) => newton_from_slopes(slopes)?,
            NewtonInput::Tuple(tuple) => newton_from_tuple(&RatTuple::new(tuple.clone()))?,
        };
        let hodge = hodge_from_tuple(&RatTuple::new(self.hodge.clone()))?;
        check_dims(&hodge, &newton)?;
        Ok((newton, hodge))
    }
}
