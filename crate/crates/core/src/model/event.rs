/// One of the `2(N−2) + 4` transitions of the chain.
///
/// `BulkRight(x)` moves a particle `x → x+1` and `BulkLeft(x)` moves one
/// `x+1 → x`, for `x ∈ {1, …, N−2}`. The four reservoir events act on site 1
/// (left) or site `N−1` (right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Event {
    BulkRight(usize),
    BulkLeft(usize),
    InjectLeft,
    RemoveLeft,
    InjectRight,
    RemoveRight,
}

impl Event {
    /// Number of distinct events for system size `n`.
    pub fn count(n: usize) -> usize {
        2 * (n - 2) + 4
    }

    /// Dense identifier in `0..Event::count(n)`.
    ///
    /// Layout: `BulkRight(1..=N−2)`, then `BulkLeft(1..=N−2)`, then
    /// `InjectLeft, RemoveLeft, InjectRight, RemoveRight`.
    #[inline]
    pub fn index(self, n: usize) -> usize {
        let bonds = n - 2;
        match self {
            Event::BulkRight(x) => x - 1,
            Event::BulkLeft(x) => bonds + x - 1,
            Event::InjectLeft => 2 * bonds,
            Event::RemoveLeft => 2 * bonds + 1,
            Event::InjectRight => 2 * bonds + 2,
            Event::RemoveRight => 2 * bonds + 3,
        }
    }

    #[inline]
    pub fn from_index(i: usize, n: usize) -> Option<Event> {
        let bonds = n - 2;
        Some(match i {
            i if i < bonds => Event::BulkRight(i + 1),
            i if i < 2 * bonds => Event::BulkLeft(i - bonds + 1),
            i if i == 2 * bonds => Event::InjectLeft,
            i if i == 2 * bonds + 1 => Event::RemoveLeft,
            i if i == 2 * bonds + 2 => Event::InjectRight,
            i if i == 2 * bonds + 3 => Event::RemoveRight,
            _ => return None,
        })
    }

    pub fn all(n: usize) -> impl Iterator<Item = Event> {
        (0..Event::count(n)).map(move |i| Event::from_index(i, n).expect("index in range"))
    }

    /// The event undoing this one.
    pub fn reverse(self) -> Event {
        match self {
            Event::BulkRight(x) => Event::BulkLeft(x),
            Event::BulkLeft(x) => Event::BulkRight(x),
            Event::InjectLeft => Event::RemoveLeft,
            Event::RemoveLeft => Event::InjectLeft,
            Event::InjectRight => Event::RemoveRight,
            Event::RemoveRight => Event::InjectRight,
        }
    }

    pub fn is_bulk(self) -> bool {
        matches!(self, Event::BulkRight(_) | Event::BulkLeft(_))
    }

    pub fn is_boundary(self) -> bool {
        !self.is_bulk()
    }

    /// Change of total particle number when the event is not clamped.
    pub fn mass_change(self) -> i32 {
        match self {
            Event::BulkRight(_) | Event::BulkLeft(_) => 0,
            Event::InjectLeft | Event::InjectRight => 1,
            Event::RemoveLeft | Event::RemoveRight => -1,
        }
    }
}
