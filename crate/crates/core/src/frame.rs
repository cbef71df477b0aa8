//! Frames of discernment and their subsets as bitmasks.

use std::fmt;
use std::ops::{BitAnd, BitOr};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported frame. Dense tables hold `2^MAX_FRAME_SIZE` entries.
pub const MAX_FRAME_SIZE: usize = 20;

/// Subset of a frame; bit `i` stands for the frame's `i`-th label.
///
/// A mask carries no reference to its frame, so the same bits mean different
/// things on different frames.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        SubsetMask(1 << index)
    }

    /// Mask with the lowest `n` bits set.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << n) - 1)
        }
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Indices of the set bits in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// Every subset of `self`, from `self` down to the empty set.
    pub fn submasks(self) -> impl Iterator<Item = SubsetMask> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 {
                None
            } else {
                Some((cur - 1) & full)
            };
            Some(SubsetMask(cur))
        })
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask({:#b})", self.0)
    }
}

/// Ordered, finite set of distinct outcome labels.
///
/// Cloning is cheap; the label list is shared.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge {
                size: labels.len(),
                max: MAX_FRAME_SIZE,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Frame {
            labels: labels.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Mask of the named labels. An empty list gives the empty set.
    pub fn subset<I, S>(&self, names: I) -> Result<SubsetMask>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().try_fold(SubsetMask::EMPTY, |acc, name| {
            let name = name.as_ref();
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
            Ok(acc.union(SubsetMask::singleton(i)))
        })
    }

    /// The whole frame, Ω.
    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.len())
    }

    pub fn complement(&self, set: SubsetMask) -> SubsetMask {
        self.full().difference(set)
    }

    pub fn contains_mask(&self, set: SubsetMask) -> bool {
        set.is_subset_of(self.full())
    }

    pub fn check(&self, set: SubsetMask) -> Result<()> {
        if self.contains_mask(set) {
            Ok(())
        } else {
            Err(Error::MaskOutOfFrame {
                mask: set.bits(),
                size: self.len(),
            })
        }
    }

    /// Number of subsets, `2^n`.
    pub fn powerset_len(&self) -> usize {
        1 << self.len()
    }

    /// All `2^n` subsets in increasing bit order, starting with ∅.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.powerset_len() as u32).map(SubsetMask::from_bits)
    }

    pub fn singletons(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.len()).map(SubsetMask::singleton)
    }

    pub fn names(&self, set: SubsetMask) -> Vec<&str> {
        set.elements()
            .filter(|&i| i < self.len())
            .map(|i| self.label(i))
            .collect()
    }

    /// Renders a subset as `{P1,P3}`.
    pub fn render(&self, set: SubsetMask) -> String {
        format!("{{{}}}", self.names(set).join(","))
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Frame").field(&self.labels).finish()
    }
}
