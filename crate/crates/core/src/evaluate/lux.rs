use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Illumination ranges used for stratified evaluation. Intervals are
/// left-closed: `[0, 25)`, `[25, 75)`, `[75, 150)`, `[150, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LuxBucket {
    #[serde(rename = "0-25")]
    B0_25,
    #[serde(rename = "25-75")]
    B25_75,
    #[serde(rename = "75-150")]
    B75_150,
    #[serde(rename = ">150")]
    B150Plus,
}

impl LuxBucket {
    pub const ALL: [LuxBucket; 4] = [Self::B0_25, Self::B25_75, Self::B75_150, Self::B150Plus];

    /// `None` for negative or non-finite readings.
    pub fn of(lux: f64) -> Option<Self> {
        if !lux.is_finite() || lux < 0.0 {
            None
        } else if lux < 25.0 {
            Some(Self::B0_25)
        } else if lux < 75.0 {
            Some(Self::B25_75)
        } else if lux < 150.0 {
            Some(Self::B75_150)
        } else {
            Some(Self::B150Plus)
        }
    }

    /// A reading inside the bucket, used when synthesizing metadata.
    pub fn representative(self) -> f64 {
        match self {
            Self::B0_25 => 10.0,
            Self::B25_75 => 50.0,
            Self::B75_150 => 110.0,
            Self::B150Plus => 200.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::B0_25 => "0-25 lux",
            Self::B25_75 => "25-75 lux",
            Self::B75_150 => "75-150 lux",
            Self::B150Plus => ">150 lux",
        }
    }
}

impl fmt::Display for LuxBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LuxGroups<T> {
    pub buckets: BTreeMap<LuxBucket, Vec<T>>,
    /// Items with no (or an invalid) lux reading.
    pub unbucketed: Vec<T>,
}

/// Partitions items by lux bucket, keeping input order inside each group.
pub fn bucket_by_lux<T>(items: impl IntoIterator<Item = T>, lux: impl Fn(&T) -> Option<f64>) -> LuxGroups<T> {
    let mut groups = LuxGroups {
        buckets: BTreeMap::new(),
        unbucketed: Vec::new(),
    };
    for item in items {
        match lux(&item).and_then(LuxBucket::of) {
            Some(b) => groups.buckets.entry(b).or_default().push(item),
            None => groups.unbucketed.push(item),
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries_are_left_closed() {
        assert_eq!(LuxBucket::of(0.0), Some(LuxBucket::B0_25));
        assert_eq!(LuxBucket::of(10.0), Some(LuxBucket::B0_25));
        assert_eq!(LuxBucket::of(25.0), Some(LuxBucket::B25_75));
        assert_eq!(LuxBucket::of(74.9), Some(LuxBucket::B25_75));
        assert_eq!(LuxBucket::of(75.0), Some(LuxBucket::B75_150));
        assert_eq!(LuxBucket::of(150.0), Some(LuxBucket::B150Plus));
        assert_eq!(LuxBucket::of(200.0), Some(LuxBucket::B150Plus));
        assert_eq!(LuxBucket::of(-1.0), None);
        assert_eq!(LuxBucket::of(f64::NAN), None);
    }

    #[test]
    fn representatives_land_in_their_bucket() {
        for b in LuxBucket::ALL {
            assert_eq!(LuxBucket::of(b.representative()), Some(b));
        }
    }

    #[test]
    fn missing_lux_is_unbucketed() {
        let groups = bucket_by_lux([Some(10.0), None, Some(300.0)], |x| *x);
        assert_eq!(groups.unbucketed, vec![None]);
        assert_eq!(groups.buckets[&LuxBucket::B0_25], vec![Some(10.0)]);
        assert_eq!(groups.buckets[&LuxBucket::B150Plus], vec![Some(300.0)]);
    }
}
