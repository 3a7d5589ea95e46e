use crate::{Error, Result};

/// Something that carries a capture time and a stable name.
pub trait Timestamped {
    fn timestamp(&self) -> Option<u64>;
    /// Tie-breaker for equal timestamps.
    fn name(&self) -> &str;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub val: Vec<T>,
    pub test: Vec<T>,
}

/// Chronological 70:20:10 split.
///
/// Items are sorted by ascending timestamp (then name); the first
/// `floor(0.7 n)` go to train, the next `floor(0.2 n)` to validation and the
/// remainder to test, so the test set is always the most recent capture.
pub fn split_by_timestamp<T: Timestamped>(mut items: Vec<T>) -> Result<Split<T>> {
    if let Some(bad) = items.iter().find(|i| i.timestamp().is_none()) {
        return Err(Error::Dataset(format!("{} has no timestamp", bad.name())));
    }
    items.sort_by(|a, b| a.timestamp().cmp(&b.timestamp()).then_with(|| a.name().cmp(b.name())));
    let n = items.len();
    let n_train = n * 7 / 10;
    let n_val = n * 2 / 10;
    let test = items.split_off(n_train + n_val);
    let val = items.split_off(n_train);
    Ok(Split {
        train: items,
        val,
        test,
    })
}
