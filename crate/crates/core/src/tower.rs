//! The tower over the induced shift and the map `f_hat` on it.
//!
//! A tower point `(x, k)` sits at height `k < tau(x_0)` above the base point
//! `x`. One step climbs a level; at the roof the base is shifted and the
//! height resets to 0.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{invalid, Result};
use crate::scheme::BlockId;

/// A one-sided symbol sequence, produced lazily.
pub struct SymbolStream {
    buffer: VecDeque<BlockId>,
    source: Source,
}

enum Source {
    Periodic { word: Vec<BlockId>, pos: usize },
    Generator(Box<dyn FnMut() -> BlockId + Send>),
}

impl fmt::Debug for SymbolStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolStream")
            .field("buffered", &self.buffer)
            .finish_non_exhaustive()
    }
}

impl SymbolStream {
    /// `word word word ...`
    pub fn periodic(word: Vec<BlockId>) -> Result<Self> {
        if word.is_empty() {
            return invalid("periodic word must be non-empty");
        }
        Ok(SymbolStream {
            buffer: VecDeque::new(),
            source: Source::Periodic { word, pos: 0 },
        })
    }

    pub fn from_fn(f: impl FnMut() -> BlockId + Send + 'static) -> Self {
        SymbolStream {
            buffer: VecDeque::new(),
            source: Source::Generator(Box::new(f)),
        }
    }

    /// A fixed prefix followed by the stream `rest`.
    pub fn with_prefix(mut self, prefix: &[BlockId]) -> Self {
        for &a in prefix.iter().rev() {
            self.buffer.push_front(a);
        }
        self
    }

    fn produce(&mut self) -> BlockId {
        match &mut self.source {
            Source::Periodic { word, pos } => {
                let a = word[*pos];
                *pos = (*pos + 1) % word.len();
                a
            }
            Source::Generator(g) => g(),
        }
    }

    /// The `i`-th symbol.
    pub fn get(&mut self, i: usize) -> BlockId {
        while self.buffer.len() <= i {
            let a = self.produce();
            self.buffer.push_back(a);
        }
        self.buffer[i]
    }

    pub fn prefix(&mut self, len: usize) -> Vec<BlockId> {
        (0..len).map(|i| self.get(i)).collect()
    }

    /// The left shift `sigma`.
    pub fn shift(&mut self) {
        self.get(0);
        self.buffer.pop_front();
    }
}

/// `(x, k)` with `0 <= k < tau(x_0)`.
#[derive(Debug)]
pub struct TowerPoint {
    base: SymbolStream,
    height: u32,
}

impl TowerPoint {
    /// `(x, 0)`.
    pub fn new(base: SymbolStream) -> Self {
        TowerPoint { base, height: 0 }
    }

    pub fn at_height(mut base: SymbolStream, height: u32) -> Result<Self> {
        let tau = base.get(0).tau();
        if height >= tau {
            return invalid(format!("height {height} is not below the roof {tau}"));
        }
        Ok(TowerPoint { base, height })
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn head(&mut self) -> BlockId {
        self.base.get(0)
    }

    pub fn base_prefix(&mut self, len: usize) -> Vec<BlockId> {
        self.base.prefix(len)
    }

    /// One application of `f_hat`.
    pub fn step(&mut self) {
        if self.height + 1 < self.head().tau() {
            self.height += 1;
        } else {
            self.base.shift();
            self.height = 0;
        }
    }
}

pub fn tower_step(mut p: TowerPoint) -> TowerPoint {
    p.step();
    p
}

/// `A_n^N(x)`: share of the first `n` iterates of `(x, 0)` at height `<= N`.
pub fn frequency_a(mut p: TowerPoint, n: u64, big_n: u32) -> Result<f64> {
    if p.height() != 0 {
        return invalid("frequency starts from a base point (height 0)");
    }
    if n == 0 || big_n == 0 {
        return invalid("n and N must be positive");
    }
    let mut hits = 0u64;
    for _ in 0..n {
        if p.height() <= big_n {
            hits += 1;
        }
        p.step();
    }
    Ok(hits as f64 / n as f64)
}

/// `A_n^N` for every `n` in `ns` along the orbit whose base has the given
/// return times; `taus` must cover `max(ns)` tower steps.
pub fn frequencies_from_times(
    taus: impl IntoIterator<Item = u32>,
    ns: &[u64],
    big_n: u32,
) -> Vec<f64> {
    let mut sorted: Vec<(usize, u64)> = ns.iter().copied().enumerate().collect();
    sorted.sort_by_key(|x| x.1);
    let mut out = vec![f64::NAN; ns.len()];
    let mut steps = 0u64;
    let mut hits = 0u64;
    let mut next = 0;
    'outer: for tau in taus {
        for k in 0..tau {
            while next < sorted.len() && sorted[next].1 == steps {
                out[sorted[next].0] = hits as f64 / steps.max(1) as f64;
                next += 1;
            }
            if next == sorted.len() {
                break 'outer;
            }
            if k <= big_n {
                hits += 1;
            }
            steps += 1;
        }
    }
    while next < sorted.len() && sorted[next].1 == steps {
        out[sorted[next].0] = hits as f64 / steps.max(1) as f64;
        next += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u32) -> BlockId {
        BlockId::new(n, 1)
    }

    #[test]
    fn below_roof_climbs() {
        let mut p = tower_step(TowerPoint::new(
            SymbolStream::periodic(vec![b(3), b(1)]).unwrap(),
        ));
        assert_eq!(p.height(), 1);
        assert_eq!(p.head(), b(3));
    }

    #[test]
    fn unit_time_returns_immediately() {
        let mut p = tower_step(TowerPoint::new(
            SymbolStream::periodic(vec![b(1), b(2)]).unwrap(),
        ));
        assert_eq!(p.height(), 0);
        assert_eq!(p.head(), b(2));
    }

    #[test]
    fn roof_identity() {
        let mut p = TowerPoint::new(SymbolStream::periodic(vec![b(4), b(2), b(7)]).unwrap());
        for _ in 0..4 {
            p.step();
        }
        assert_eq!(p.height(), 0);
        assert_eq!(p.base_prefix(3), vec![b(2), b(7), b(4)]);
    }

    #[test]
    fn frequency_examples() {
        let p = TowerPoint::new(SymbolStream::periodic(vec![b(4)]).unwrap());
        assert_eq!(frequency_a(p, 4, 2).unwrap(), 0.75);
        let p = TowerPoint::new(SymbolStream::periodic(vec![b(1), BlockId::new(1, 2)]).unwrap());
        assert_eq!(frequency_a(p, 37, 1).unwrap(), 1.0);
        assert!(TowerPoint::at_height(SymbolStream::periodic(vec![b(2)]).unwrap(), 2).is_err());
    }

    #[test]
    fn batched_frequencies_match_stepping() {
        let word = vec![b(3), b(1), b(5), b(2)];
        let ns = [1u64, 7, 30, 100];
        let taus = word.iter().map(|a| a.tau()).cycle().take(200);
        let batch = frequencies_from_times(taus, &ns, 1);
        for (i, &n) in ns.iter().enumerate() {
            let p = TowerPoint::new(SymbolStream::periodic(word.clone()).unwrap());
            assert_eq!(batch[i], frequency_a(p, n, 1).unwrap());
        }
    }
}
