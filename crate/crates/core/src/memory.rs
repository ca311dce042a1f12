//! Logical memory accounting.
//!
//! Sizes are computed from element counts rather than from the allocator, so
//! the numbers are stable across platforms and allocators.

/// Bytes charged per prefix tree node (item, depth, parent, aggregates).
pub const NODE_BYTES: u64 = 32;
/// Bytes charged per object id stored anywhere (result lists, postings,
/// candidate lists, child links).
pub const ENTRY_BYTES: u64 = 4;

/// Running gauge with a high-water mark.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct MemoryGauge {
    current: u64,
    peak: u64,
}

impl MemoryGauge {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, bytes: u64) {
        self.current += bytes;
        self.peak = self.peak.max(self.current);
    }

    pub fn sub(&mut self, bytes: u64) {
        debug_assert!(bytes <= self.current, "gauge underflow");
        self.current = self.current.saturating_sub(bytes);
    }

    pub fn current(&self) -> u64 {
        self.current
    }

    pub fn peak(&self) -> u64 {
        self.peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_tracks_high_water_mark() {
        let mut g = MemoryGauge::new();
        g.add(10);
        g.add(5);
        g.sub(12);
        g.add(4);
        assert_eq!(g.current(), 7);
        assert_eq!(g.peak(), 15);
    }
}
