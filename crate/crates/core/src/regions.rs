//! Partition of the bound-restricted hypercube into boxes.
//!
//! Each coordinate `u'_i` of a point in the restricted cube lies in one of
//! three intervals: `(0, a_i)` ([`Slot::Below`], `X_i < A`), `(a_i, b_i)`
//! ([`Slot::Mid`], `A < X_i < B`) or `(b_i, 1)` ([`Slot::Above`], `X_i > B`).
//! The k-th smallest `X` lands in `(A, B)` exactly when at most `k - 1`
//! coordinates are `Below` and at least `k` are `Below` or `Mid`, so the
//! restricted cube is the disjoint union of the boxes whose assignment
//! satisfies both counts.
//!
//! The region table orders those boxes canonically (lexicographic over the
//! assignment vector, `Below < Mid < Above`, coordinate 1 most significant),
//! drops empty ones, and cuts the last coordinate of the source cube into
//! slabs whose widths are the normalized box volumes.

use std::fmt;

use crate::error::{Error, Result};
use crate::problem::Problem;

/// Default cap on N. The table is materialized and holds up to 3^N regions.
pub const DEFAULT_MAX_N: usize = 12;

/// Which interval a coordinate occupies within a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Slot {
    Below = 0,
    Mid = 1,
    Above = 2,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::Below, Slot::Mid, Slot::Above];

    pub fn code(self) -> char {
        match self {
            Slot::Below => 'B',
            Slot::Mid => 'M',
            Slot::Above => 'A',
        }
    }

    /// `(low, high)` end points of this slot's interval for coordinate bounds `a`, `b`.
    #[inline]
    pub fn interval(self, a: f64, b: f64) -> (f64, f64) {
        match self {
            Slot::Below => (0.0, a),
            Slot::Mid => (a, b),
            Slot::Above => (b, 1.0),
        }
    }
}

/// One box of the restricted hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub assignment: Vec<Slot>,
    /// Unnormalized volume of the box.
    pub volume: f64,
}

impl Region {
    /// Assignment as a string over `{B, M, A}`, coordinate 1 first.
    pub fn code(&self) -> String {
        self.assignment.iter().map(|s| s.code()).collect()
    }

    /// 1-based indices of the coordinates in `slot`.
    pub fn indices(&self, slot: Slot) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == slot)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:e})", self.code(), self.volume)
    }
}

fn capacity_error(n: usize, cap: usize) -> Error {
    Error::Capacity {
        n,
        cap,
        estimate: 3f64.powi(n as i32),
    }
}

/// All assignments satisfying the order-statistic constraints, in canonical
/// order, with their volumes. Zero-volume regions are kept.
pub fn enumerate_regions(p: &Problem, max_n: usize) -> Result<Vec<Region>> {
    let n = p.n();
    if n > max_n {
        return Err(capacity_error(n, max_n));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    Enumerator {
        n,
        k: p.k(),
        a: p.a(),
        b: p.b(),
        out: &mut out,
    }
    .descend(&mut prefix, 0, 0, 1.0);
    Ok(out)
}

struct Enumerator<'a> {
    n: usize,
    k: usize,
    a: &'a [f64],
    b: &'a [f64],
    out: &'a mut Vec<Region>,
}

impl Enumerator<'_> {
    fn descend(&mut self, prefix: &mut Vec<Slot>, below: usize, mid: usize, volume: f64) {
        let j = prefix.len();
        if j == self.n {
            debug_assert!(mid >= 1);
            self.out.push(Region {
                assignment: prefix.clone(),
                volume,
            });
            return;
        }
        let remaining = self.n - j - 1;
        for slot in Slot::ALL {
            let (below, mid) = match slot {
                Slot::Below => (below + 1, mid),
                Slot::Mid => (below, mid + 1),
                Slot::Above => (below, mid),
            };
            // At most k - 1 below A; enough room left to reach k below B.
            if below >= self.k || below + mid + remaining < self.k {
                continue;
            }
            let (lo, hi) = slot.interval(self.a[j], self.b[j]);
            prefix.push(slot);
            self.descend(prefix, below, mid, volume * (hi - lo));
            prefix.pop();
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Ordered, pruned regions with normalized fractions and the slab partition
/// of the source cube's last coordinate.
#[derive(Debug, Clone)]
pub struct RegionTable {
    n: usize,
    regions: Vec<Region>,
    fractions: Vec<f64>,
    cumulative: Vec<f64>,
    total_volume: f64,
    // Flat `regions.len() * n` copy of the assignments for the sampling loop.
    slots: Vec<Slot>,
}

impl RegionTable {
    pub fn build(p: &Problem) -> Result<Self> {
        Self::build_with_cap(p, DEFAULT_MAX_N)
    }

    pub fn build_with_cap(p: &Problem, max_n: usize) -> Result<Self> {
        let mut regions = enumerate_regions(p, max_n)?;
        regions.retain(|r| r.volume > 0.0);
        if regions.is_empty() {
            return Err(Error::Infeasible);
        }

        let mut total = CompensatedSum::default();
        for r in &regions {
            total.add(r.volume);
        }
        let total_volume = total.value();

        let fractions: Vec<f64> = regions.iter().map(|r| r.volume / total_volume).collect();
        let mut running = CompensatedSum::default();
        let mut cumulative: Vec<f64> = fractions
            .iter()
            .map(|&f| {
                running.add(f);
                running.value()
            })
            .collect();
        // The last slab closes the unit interval exactly.
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }

        let slots = regions.iter().flat_map(|r| r.assignment.iter().copied()).collect();
        Ok(RegionTable {
            n: p.n(),
            regions,
            fractions,
            cumulative,
            total_volume,
            slots,
        })
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Sum of the raw region volumes, i.e. `P(A < Y < B)`.
    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    /// Probability that an unconstrained draw satisfies the bounds; a
    /// rejection sampler needs `1 / acceptance_probability()` attempts per
    /// draw on average.
    pub fn acceptance_probability(&self) -> f64 {
        self.total_volume
    }

    /// 0-based index `s` with `cumulative[s-1] <= u < cumulative[s]`.
    /// Values at or beyond 1 fall in the last slab.
    #[inline]
    pub fn locate(&self, u: f64) -> usize {
        self.cumulative.partition_point(|&c| c <= u).min(self.regions.len() - 1)
    }

    /// Start and width of slab `s` on the selector axis.
    #[inline]
    pub fn slab(&self, s: usize) -> (f64, f64) {
        let start = if s == 0 { 0.0 } else { self.cumulative[s - 1] };
        (start, self.cumulative[s] - start)
    }

    #[inline]
    pub(crate) fn assignment(&self, s: usize) -> &[Slot] {
        &self.slots[s * self.n..(s + 1) * self.n]
    }
}
