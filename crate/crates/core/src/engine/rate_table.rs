use crate::model::{event_rate, Configuration, Event, ModelParams};
use crate::sumtree::SumTree;

/// Current rate of every event, kept in a sum tree indexed by
/// [`Event::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    n: usize,
    tree: SumTree,
}

impl RateTable {
    pub fn build(params: &ModelParams, config: &Configuration) -> Self {
        let n = params.n();
        let rates: alloc::vec::Vec<f64> =
            Event::all(n).map(|e| event_rate(params, config, e)).collect();
        Self { n, tree: SumTree::from_weights(&rates) }
    }

    #[inline]
    pub fn rate(&self, event: Event) -> f64 {
        self.tree.get(event.index(self.n))
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.tree.total()
    }

    pub fn rates(&self) -> &[f64] {
        self.tree.leaves()
    }

    /// Event selected by a target in `[0, total)`.
    #[inline]
    pub(crate) fn select(&self, target: f64) -> Event {
        Event::from_index(self.tree.find(target), self.n).expect("sum tree index in range")
    }

    /// Recomputes the rates of every event whose rate depends on site `x`.
    #[inline]
    pub(crate) fn refresh_site(&mut self, params: &ModelParams, config: &Configuration, x: usize) {
        let last = config.sites();
        let mut put = |e: Event| self.tree.set(e.index(self.n), event_rate(params, config, e));
        // bonds (x−1, x) and (x, x+1)
        if x >= 2 {
            put(Event::BulkRight(x - 1));
            put(Event::BulkLeft(x - 1));
        }
        if x < last {
            put(Event::BulkRight(x));
            put(Event::BulkLeft(x));
        }
        if x == 1 {
            put(Event::InjectLeft);
            put(Event::RemoveLeft);
        }
        if x == last {
            put(Event::InjectRight);
            put(Event::RemoveRight);
        }
    }

    /// Refreshes the rates touching the sites modified by `event`.
    #[inline]
    pub(crate) fn refresh_after(&mut self, params: &ModelParams, config: &Configuration, event: Event) {
        match event {
            Event::BulkRight(x) | Event::BulkLeft(x) => {
                self.refresh_site(params, config, x);
                self.refresh_site(params, config, x + 1);
            }
            Event::InjectLeft | Event::RemoveLeft => self.refresh_site(params, config, 1),
            Event::InjectRight | Event::RemoveRight => {
                self.refresh_site(params, config, config.sites())
            }
        }
    }

    /// Largest relative deviation from a table rebuilt from scratch, over the
    /// leaves and the total.
    pub fn deviation_from_rebuild(&self, params: &ModelParams, config: &Configuration) -> f64 {
        let fresh = RateTable::build(params, config);
        let scale = fresh.total().max(f64::MIN_POSITIVE);
        let leaves = self
            .rates()
            .iter()
            .zip(fresh.rates())
            .map(|(a, b)| (a - b).abs() / scale)
            .fold(0.0, f64::max);
        let naive: f64 = self.rates().iter().sum();
        leaves
            .max((self.total() - fresh.total()).abs() / scale)
            .max((self.total() - naive).abs() / scale)
    }
}
