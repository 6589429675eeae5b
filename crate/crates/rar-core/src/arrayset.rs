//! Reference implementation of the array-backed set.
//!
//! One `anext` array threads two singly linked lists through the same slots:
//! the used list, starting at `used_head`, and the free list, starting at
//! `free_head`. Both lists end at the terminator value `capacity`. `avals`
//! holds the element stored in each used slot; values in free slots are
//! meaningless.
//!
//! The operations mirror `corpus/arrayset.rar` statement for statement and
//! take and return the set by value, as the RAR source does. Loops are
//! bounded by the capacity, so every operation terminates even on states
//! whose lists are corrupt.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Capacity fixed by the shipped RAR corpus (`ARR_SZ`).
pub const CORPUS_CAPACITY: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroCapacity;

impl fmt::Display for ZeroCapacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("arrayset capacity must be at least 1")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrayset {
    pub anext: Vec<usize>,
    pub avals: Vec<i64>,
    pub free_head: usize,
    pub used_head: usize,
}

impl Arrayset {
    /// All slots free, threaded in ascending order; values zeroed.
    pub fn init(capacity: usize) -> Result<Self, ZeroCapacity> {
        if capacity == 0 {
            return Err(ZeroCapacity);
        }
        Ok(Arrayset {
            anext: (1..=capacity).collect(),
            avals: vec![0; capacity],
            free_head: 0,
            used_head: capacity,
        })
    }

    /// Number of slots; also the list terminator.
    pub fn capacity(&self) -> usize {
        self.anext.len()
    }

    /// Inserts `val`. Full sets and sets already holding `val` come back
    /// unchanged; the fullness test comes first.
    // Branches kept separate to mirror the RAR source.
    #[allow(clippy::should_implement_trait, clippy::if_same_then_else)]
    pub fn add(mut self, val: i64) -> Self {
        let size = self.capacity();
        let curr_index = self.free_head;

        if curr_index >= size {
            self // Full
        } else if self.used_head < size && self.is_element(val) {
            self
        } else {
            self.free_head = self.anext[self.free_head];
            self.avals[curr_index] = val;
            self.anext[curr_index] = self.used_head;
            self.used_head = curr_index;
            self
        }
    }

    /// Removes `val`, moving its slot to the head of the free list. Absent
    /// values leave the set unchanged. The freed slot keeps its old value.
    pub fn del(mut self, val: i64) -> Self {
        let size = self.capacity();
        let mut curr_index = self.used_head;

        if self.used_head >= size {
            return self; // Empty
        }
        if self.avals[curr_index] == val {
            self.used_head = self.anext[curr_index];
            self.anext[curr_index] = self.free_head;
            self.free_head = curr_index;
            return self;
        }
        let prev_index = self.element_prev_from(self.used_head, val);
        if prev_index >= size {
            return self;
        }
        curr_index = self.anext[prev_index];
        if curr_index >= size {
            return self;
        }
        self.anext[prev_index] = self.anext[curr_index];
        self.anext[curr_index] = self.free_head;
        self.free_head = curr_index;
        self
    }

    /// Whether `val` is stored in a slot reachable from `used_head` within
    /// `capacity` steps.
    pub fn is_element(&self, val: i64) -> bool {
        let size = self.capacity();
        let mut found = false;
        let mut curr_index = self.used_head;
        for _ in 0..size {
            if curr_index < size {
                if self.avals[curr_index] == val {
                    found = true;
                    curr_index = size;
                } else {
                    curr_index = self.anext[curr_index];
                }
            }
        }
        found
    }

    /// First index `previ` on the chain from `start` (inclusive) such that
    /// `avals[anext[previ]] == val`, or `capacity` when there is none.
    pub fn element_prev_from(&self, start: usize, val: i64) -> usize {
        let size = self.capacity();
        let mut result = size;
        let mut prev_index = start;
        for _ in 0..size {
            if result >= size && prev_index < size {
                let next_index = self.anext[prev_index];
                if next_index < size && self.avals[next_index] == val {
                    result = prev_index;
                } else {
                    prev_index = next_index;
                }
            }
        }
        result
    }

    /// Length of the used list, capped at `capacity`.
    pub fn len(&self) -> usize {
        self.chain_len(self.used_head)
    }

    /// Length of the free list, capped at `capacity`.
    pub fn len_free(&self) -> usize {
        self.chain_len(self.free_head)
    }

    pub fn is_empty(&self) -> bool {
        self.used_head >= self.capacity()
    }

    fn chain_len(&self, head: usize) -> usize {
        let size = self.capacity();
        let mut count = 0;
        let mut curr_index = head;
        for _ in 0..size {
            if curr_index < size {
                count += 1;
                curr_index = self.anext[curr_index];
            }
        }
        count
    }

    /// Slot indices on the chain from `head`, at most `capacity` of them.
    pub fn chain(&self, head: usize) -> Chain<'_> {
        Chain {
            set: self,
            next: head,
            remaining: self.capacity(),
        }
    }

    /// Stored values in used-list order.
    pub fn used_values(&self) -> impl Iterator<Item = i64> + '_ {
        self.chain(self.used_head).map(move |i| self.avals[i])
    }
}

/// Bounded walk along `anext`. Stops at the first out-of-range link or after
/// `capacity` slots, whichever comes first.
#[derive(Debug, Clone)]
pub struct Chain<'a> {
    set: &'a Arrayset,
    next: usize,
    remaining: usize,
}

impl Iterator for Chain<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.remaining == 0 || self.next >= self.set.capacity() {
            return None;
        }
        let i = self.next;
        self.remaining -= 1;
        self.next = self.set.anext[i];
        Some(i)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The five-slot state holding {33, 22}: used list 1 -> 0, free list
    /// 2 -> 3 -> 4.
    pub(crate) fn s0() -> Arrayset {
        Arrayset {
            anext: vec![5, 0, 3, 4, 5],
            avals: vec![22, 33, 0, 0, 0],
            free_head: 2,
            used_head: 1,
        }
    }

    pub(crate) fn s_full() -> Arrayset {
        Arrayset {
            anext: vec![5, 0, 1, 2, 3],
            avals: vec![10, 11, 12, 13, 14],
            free_head: 5,
            used_head: 4,
        }
    }

    #[test]
    fn init_threads_free_list() {
        let s = Arrayset::init(5).unwrap();
        assert_eq!(s.free_head, 0);
        assert_eq!(s.used_head, 5);
        assert_eq!(s.anext, [1, 2, 3, 4, 5]);
        assert_eq!(s.len_free(), 5);
        assert_eq!(s.len(), 0);
        assert!(Arrayset::init(256).unwrap().is_empty());
        assert_eq!(Arrayset::init(0), Err(ZeroCapacity));
    }

    #[test]
    fn add_pops_free_head() {
        let s = s0().add(44);
        assert_eq!(s.free_head, 3);
        assert_eq!(s.avals[2], 44);
        assert_eq!(s.anext[2], 1);
        assert_eq!(s.used_head, 2);
        assert_eq!(s.anext, [5, 0, 1, 4, 5]);
    }

    #[test]
    fn add_to_full_or_present_is_identity() {
        assert_eq!(s_full().add(7), s_full());
        assert_eq!(s0().add(33), s0());
        assert_eq!(s0().add(22), s0());
    }

    #[test]
    fn del_interior_element() {
        let s = s0().del(22);
        assert_eq!(s.used_head, 1);
        assert_eq!(s.anext[1], 5);
        assert_eq!(s.free_head, 0);
        assert_eq!(s.anext[0], 2);
        assert_eq!(s.used_values().collect::<Vec<_>>(), [33]);
        // Only links move.
        assert_eq!(s.avals, s0().avals);
    }

    #[test]
    fn del_head_element() {
        let s = s0().del(33);
        assert_eq!(s.used_head, 0);
        assert_eq!(s.anext[1], 2);
        assert_eq!(s.free_head, 1);
        assert_eq!(s.used_values().collect::<Vec<_>>(), [22]);
    }

    #[test]
    fn del_absent_or_empty_is_identity() {
        let empty = Arrayset::init(5).unwrap();
        assert_eq!(empty.clone().del(7), empty);
        assert_eq!(s0().del(99), s0());
    }

    #[test]
    fn membership() {
        assert!(s0().is_element(33));
        assert!(s0().is_element(22));
        assert!(!s0().is_element(44));
        assert!(!Arrayset::init(5).unwrap().is_element(0));
        // Free slots are not members even when their value matches.
        assert!(!s0().is_element(0));
    }

    #[test]
    fn prev_from() {
        assert_eq!(s0().element_prev_from(1, 22), 1);
        assert_eq!(s0().element_prev_from(1, 99), 5);
        assert_eq!(s0().element_prev_from(5, 22), 5);
        // The start slot itself is never the match.
        assert_eq!(s0().element_prev_from(1, 33), 5);
    }

    #[test]
    fn lengths() {
        assert_eq!(s0().len(), 2);
        assert_eq!(s0().len_free(), 3);
        assert_eq!(s_full().len_free(), 0);
        assert_eq!(s_full().len(), 5);
    }

    #[test]
    fn lengths_are_capped_on_cycles() {
        let mut s = s0();
        s.anext[0] = 1; // used list now cycles 1 -> 0 -> 1
        assert_eq!(s.len(), 5);
        assert_eq!(s.chain(s.used_head).count(), 5);
        assert!(!s.is_element(7));
    }
}
