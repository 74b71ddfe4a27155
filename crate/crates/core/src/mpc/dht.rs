use std::collections::HashMap;

use super::MpcError;

/// Key-value store written in one round and readable from the next round on.
#[derive(Debug, Default, Clone)]
pub struct DhtHandle {
    store: HashMap<u64, u64>,
    pending: HashMap<u64, u64>,
    round: u64,
    puts_this_round: u64,
    gets_this_round: u64,
}

impl DhtHandle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(keys: usize) -> Self {
        DhtHandle {
            store: HashMap::with_capacity(keys),
            pending: HashMap::with_capacity(keys),
            ..Self::default()
        }
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn puts_this_round(&self) -> u64 {
        self.puts_this_round
    }

    pub fn gets_this_round(&self) -> u64 {
        self.gets_this_round
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    /// Stages writes for the next round; returns the number acknowledged.
    pub fn put_batch<I>(&mut self, pairs: I) -> usize
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut acks = 0;
        for (k, v) in pairs {
            self.pending.insert(k, v);
            acks += 1;
        }
        self.puts_this_round += acks as u64;
        acks
    }

    #[inline]
    pub fn get(&mut self, key: u64) -> Result<Option<u64>, MpcError> {
        if self.pending.contains_key(&key) {
            return Err(MpcError::Visibility { key });
        }
        self.gets_this_round += 1;
        Ok(self.store.get(&key).copied())
    }

    pub fn get_batch<I>(&mut self, keys: I) -> Result<Vec<Option<u64>>, MpcError>
    where
        I: IntoIterator<Item = u64>,
    {
        keys.into_iter().map(|k| self.get(k)).collect()
    }

    /// Commits staged writes and resets the per-round counters.
    pub fn advance_round(&mut self) {
        self.store.extend(self.pending.drain());
        self.round += 1;
        self.puts_this_round = 0;
        self.gets_this_round = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_visible_next_round() {
        let mut d = DhtHandle::new();
        assert_eq!(d.put_batch([(1, 10), (2, 20)]), 2);
        assert_eq!(d.puts_this_round(), 2);
        d.advance_round();
        assert_eq!(d.get_batch([1, 2]).unwrap(), vec![Some(10), Some(20)]);
        assert_eq!(d.gets_this_round(), 2);
    }

    #[test]
    fn absent_key_is_none() {
        let mut d = DhtHandle::new();
        d.advance_round();
        assert_eq!(d.get(42).unwrap(), None);
    }

    #[test]
    fn same_round_read_is_rejected() {
        let mut d = DhtHandle::new();
        d.put_batch([(5, 1)]);
        assert_eq!(d.get(5), Err(MpcError::Visibility { key: 5 }));
        // Other keys remain readable.
        assert_eq!(d.get(6).unwrap(), None);
    }

    #[test]
    fn advance_on_empty_and_twice() {
        let mut d = DhtHandle::new();
        d.advance_round();
        assert!(d.is_empty());
        d.put_batch([(3, 4)]);
        d.advance_round();
        d.advance_round();
        assert_eq!(d.get(3).unwrap(), Some(4));
        assert_eq!(d.round(), 3);
        assert_eq!(d.puts_this_round(), 0);
    }
}
