//! Scalar abstraction for the vector-valued parts of the crate.
//!
//! Walk decompositions and determinant walks only need field arithmetic, so
//! they are written against [`Scalar`] and run equally over `f64` (quick
//! experiments) and exact rationals (identity checks with zero tolerance).
//! Anything that groups coordinates by value (level sets, structured-set
//! membership) needs exact equality and ordering, hence [`ExactScalar`].

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Num;

pub trait Scalar: Num + Clone + PartialEq + Debug + Neg<Output = Self> {
    fn from_i64(v: i64) -> Self;

    fn half(&self) -> Self {
        self.clone() / Self::from_i64(2)
    }
}

/// Scalars with exact equality and a total order.
pub trait ExactScalar: Scalar + Ord + Hash {}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl Scalar for Ratio<i128> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
}

impl ExactScalar for BigRational {}
impl ExactScalar for Ratio<i64> {}
impl ExactScalar for Ratio<i128> {}

/// Dot product of a 0/1 indicator (given as the list of its ones) with `u`.
pub fn sum_over<S: Scalar>(u: &[S], idx: impl IntoIterator<Item = usize>) -> S {
    idx.into_iter().fold(S::zero(), |acc, j| acc + u[j].clone())
}

/// Serde helpers writing exact rationals as `"p/q"` strings.
pub mod fraction {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn to_string(q: &BigRational) -> String {
        format!("{}/{}", q.numer(), q.denom())
    }

    pub fn parse(s: &str) -> Option<BigRational> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().ok()?;
                let q: BigInt = q.trim().parse().ok()?;
                if q == BigInt::from(0) {
                    return None;
                }
                Some(BigRational::new(p, q))
            }
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        }
    }

    pub fn serialize<S: Serializer>(q: &BigRational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(de)?;
        parse(&s).ok_or_else(|| de::Error::custom(format!("bad fraction {s:?}")))
    }

    pub mod vec {
        use num_rational::BigRational;
        use serde::ser::SerializeSeq;
        use serde::{de, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[BigRational], ser: S) -> Result<S::Ok, S::Error> {
            let mut seq = ser.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&super::to_string(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigRational>, D::Error> {
            let raw = Vec::<String>::deserialize(de)?;
            raw.iter()
                .map(|s| super::parse(s).ok_or_else(|| de::Error::custom(format!("bad fraction {s:?}"))))
                .collect()
        }
    }

    pub mod vecvec {
        use num_rational::BigRational;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Vec<BigRational>], ser: S) -> Result<S::Ok, S::Error> {
            let mut seq = ser.serialize_seq(Some(v.len()))?;
            for row in v {
                let strs: Vec<String> = row.iter().map(super::to_string).collect();
                seq.serialize_element(&strs)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            de: D,
        ) -> Result<Vec<Vec<BigRational>>, D::Error> {
            let raw = Vec::<Vec<String>>::deserialize(de)?;
            raw.iter()
                .map(|row| {
                    row.iter()
                        .map(|s| {
                            super::parse(s)
                                .ok_or_else(|| serde::de::Error::custom(format!("bad fraction {s:?}")))
                        })
                        .collect()
                })
                .collect()
        }
    }
}
