//! Exact rational scalars and fixed-length rational tuples, together with
//! the two partial orders driving everything else: the partial-sum order
//! with equal totals (`fr_geq`) and its total-insensitive normalization
//! (`dominance_geq`).
//!
//! All arithmetic is exact; there is no floating point on any code path
//! that decides membership or ordering.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Index, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number in canonical reduced form (positive denominator,
/// coprime numerator and denominator).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// The reduced denominator as a machine integer.
    pub fn denom_usize(&self) -> Result<usize> {
        use num::ToPrimitive;
        self.0
            .denom()
            .to_usize()
            .ok_or_else(|| Error::Parse(format!("denominator of {} out of range", self)))
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        use num::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let numer: BigInt = num_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {:?}", s)))?;
        let denom: BigInt = den_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {:?}", s)))?;
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {:?}", s)));
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

/// A fixed-length tuple of rationals. Length is set at construction; the
/// binary operations insist on equal lengths.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RatTuple(Vec<Rat>);

impl RatTuple {
    pub fn new(entries: Vec<Rat>) -> RatTuple {
        RatTuple(entries)
    }

    pub fn from_ints(entries: &[i64]) -> RatTuple {
        RatTuple(entries.iter().map(|&n| Rat::from_int(n)).collect())
    }

    pub fn zeros(len: usize) -> RatTuple {
        RatTuple(vec![Rat::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// The sorting convention `(.)_+`: entries rearranged non-increasingly.
    pub fn sort_desc(&self) -> RatTuple {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.cmp(a));
        RatTuple(v)
    }

    /// `|v| = v_1 + ... + v_d`; the empty total is 0.
    pub fn total(&self) -> Rat {
        self.0.iter().cloned().sum()
    }

    /// Adds `alpha` to every entry.
    pub fn shift(&self, alpha: &Rat) -> RatTuple {
        RatTuple(self.0.iter().map(|e| e + alpha).collect())
    }

    /// Componentwise difference; lengths must agree.
    pub fn sub(&self, other: &RatTuple) -> Result<RatTuple> {
        check_len(self, other)?;
        Ok(RatTuple(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    /// Concatenation, used to assemble block tuples.
    pub fn concat(blocks: &[RatTuple]) -> RatTuple {
        RatTuple(blocks.iter().flat_map(|b| b.0.iter().cloned()).collect())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> RatTuple {
        RatTuple(self.0[range].to_vec())
    }
}

impl Index<usize> for RatTuple {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl fmt::Display for RatTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

impl FromStr for RatTuple {
    type Err = Error;

    /// Parses "p/q,p/q,..." with optional surrounding parentheses.
    fn from_str(s: &str) -> Result<RatTuple> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(RatTuple(Vec::new()));
        }
        let entries = s
            .split(',')
            .map(|p| p.parse::<Rat>())
            .collect::<Result<Vec<_>>>()?;
        Ok(RatTuple(entries))
    }
}

fn check_len(a: &RatTuple, b: &RatTuple) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

fn check_order_pre(a: &RatTuple, b: &RatTuple) -> Result<()> {
    check_len(a, b)?;
    if a.is_empty() {
        return Err(Error::EmptyTuple);
    }
    Ok(())
}

/// The normalized partial-sum order: `a >= b` iff for every k < d
/// the k-th partial sum of `a - b` is at least `k * (|a| - |b|) / d`.
/// Entries are taken in the given order; there is no implicit sorting,
/// and adding a constant tuple to either side does not change the answer.
pub fn dominance_geq(a: &RatTuple, b: &RatTuple) -> Result<bool> {
    check_order_pre(a, b)?;
    let d = Rat::from_int(a.len() as i64);
    let ta = a.total();
    let tb = b.total();
    let mut pa = Rat::zero();
    let mut pb = Rat::zero();
    for k in 0..a.len() - 1 {
        pa = pa + a[k].clone();
        pb = pb + b[k].clone();
        let kk = Rat::from_int((k + 1) as i64);
        // pa + k|b|/d >= pb + k|a|/d
        let lhs = &pa + &(&(&kk * &tb) / &d);
        let rhs = &pb + &(&(&kk * &ta) / &d);
        if lhs < rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The partial-sum order with equal totals: prefix sums of `a` dominate
/// those of `b` and the totals agree.
pub fn fr_geq(a: &RatTuple, b: &RatTuple) -> Result<bool> {
    check_order_pre(a, b)?;
    if a.total() != b.total() {
        return Ok(false);
    }
    let mut pa = Rat::zero();
    let mut pb = Rat::zero();
    for k in 0..a.len() - 1 {
        pa = pa + a[k].clone();
        pb = pb + b[k].clone();
        if pa < pb {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(entries: &[(i64, i64)]) -> RatTuple {
        RatTuple::new(entries.iter().map(|&(p, q)| Rat::new(p, q)).collect())
    }

    #[test]
    fn sort_desc_examples() {
        let v = t(&[(0, 1), (1, 1), (1, 2)]);
        assert_eq!(v.sort_desc(), t(&[(1, 1), (1, 2), (0, 1)]));
        assert_eq!(RatTuple::new(vec![]).sort_desc(), RatTuple::new(vec![]));
        let c = t(&[(3, 1), (3, 1), (3, 1)]);
        assert_eq!(c.sort_desc(), c);
    }

    #[test]
    fn total_examples() {
        assert_eq!(t(&[(1, 2), (1, 2), (0, 1)]).total(), Rat::from_int(1));
        assert_eq!(RatTuple::new(vec![]).total(), Rat::zero());
        assert_eq!(t(&[(4, 1), (1, 1), (0, 1)]).total(), Rat::from_int(5));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(
            t(&[(1, 1), (0, 1)]).shift(&Rat::new(-1, 2)),
            t(&[(1, 2), (-1, 2)])
        );
        let v = t(&[(2, 3)]);
        assert_eq!(v.shift(&Rat::zero()), v);
        assert_eq!(
            t(&[(0, 1), (0, 1), (0, 1)]).shift(&Rat::new(2, 3)),
            t(&[(2, 3), (2, 3), (2, 3)])
        );
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_geq(&t(&[(1, 1), (0, 1)]), &t(&[(1, 2), (1, 2)])).unwrap());
        let a = t(&[(4, 1), (1, 1), (0, 1)]);
        assert!(dominance_geq(&a, &a).unwrap());
        assert!(!dominance_geq(&t(&[(0, 1), (0, 1)]), &t(&[(1, 1), (-1, 1)])).unwrap());
    }

    #[test]
    fn fr_examples() {
        assert!(fr_geq(&t(&[(1, 1), (0, 1)]), &t(&[(1, 2), (1, 2)])).unwrap());
        let a = t(&[(4, 1), (1, 1), (0, 1)]);
        assert!(fr_geq(&a, &a).unwrap());
        assert!(!fr_geq(&t(&[(1, 1), (1, 1)]), &t(&[(1, 2), (1, 2)])).unwrap());
    }

    #[test]
    fn order_rejects_length_mismatch_and_empty() {
        let a = t(&[(1, 1)]);
        let b = t(&[(1, 1), (0, 1)]);
        assert!(dominance_geq(&a, &b).is_err());
        assert!(fr_geq(&a, &b).is_err());
        let e = RatTuple::new(vec![]);
        assert!(dominance_geq(&e, &e).is_err());
    }

    #[test]
    fn rational_string_format() {
        assert_eq!(Rat::new(1, 2).to_string(), "1/2");
        assert_eq!(Rat::new(-4, 8).to_string(), "-1/2");
        assert_eq!(Rat::new(6, 3).to_string(), "2");
        assert_eq!("7/2".parse::<Rat>().unwrap(), Rat::new(7, 2));
        assert_eq!("-3".parse::<Rat>().unwrap(), Rat::from_int(-3));
        assert_eq!("2/-4".parse::<Rat>().unwrap(), Rat::new(-1, 2));
        assert!("1/0".parse::<Rat>().is_err());
    }

    #[test]
    fn tuple_parse() {
        assert_eq!(
            "3/2, 3/2, 1".parse::<RatTuple>().unwrap(),
            t(&[(3, 2), (3, 2), (1, 1)])
        );
        assert_eq!("(1,0)".parse::<RatTuple>().unwrap(), t(&[(1, 1), (0, 1)]));
    }

    // Constant-tuple comparison: every sorted tuple dominates the constant
    // tuple with the same average.
    #[test]
    fn sorted_dominates_its_average() {
        let cases = [
            t(&[(4, 1), (1, 1), (0, 1)]),
            t(&[(1, 2), (1, 2), (0, 1)]),
            t(&[(5, 1), (4, 1), (3, 1), (2, 1), (-14, 1)]),
        ];
        for s in cases {
            let avg = &s.total() / &Rat::from_int(s.len() as i64);
            let c = RatTuple::zeros(s.len()).shift(&avg);
            assert!(dominance_geq(&s, &c).unwrap(), "{} vs {}", s, c);
        }
    }
}
