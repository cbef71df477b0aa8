//! Dense belief tables: subset-lattice zeta transform and its Möbius inverse.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};
use crate::mass::{MassFunction, WorldMode};
use crate::scalar::Scalar;

/// In place: `xs[A] <- Σ_{X ⊆ A} xs[X]`. `xs.len()` must be a power of two.
pub fn subset_sums<T: Scalar>(xs: &mut [T]) {
    let n = xs.len();
    debug_assert!(n.is_power_of_two());
    let mut bit = 1;
    while bit < n {
        for a in 0..n {
            if a & bit != 0 {
                let lower = xs[a ^ bit].clone();
                xs[a] += lower;
            }
        }
        bit <<= 1;
    }
}

/// Inverse of [`subset_sums`]: `xs[A] <- Σ_{X ⊆ A} (-1)^{|A \ X|} xs[X]`.
pub fn inverse_subset_sums<T: Scalar>(xs: &mut [T]) {
    let n = xs.len();
    debug_assert!(n.is_power_of_two());
    let mut bit = 1;
    while bit < n {
        for a in 0..n {
            if a & bit != 0 {
                let lower = xs[a ^ bit].clone();
                xs[a] -= lower;
            }
        }
        bit <<= 1;
    }
}

/// bel over all `2^n` subsets of a frame, indexed by mask bits.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefTable<T> {
    frame: Frame,
    values: Vec<T>,
    mode: WorldMode,
}

impl<T: Scalar> BeliefTable<T> {
    pub(crate) fn from_mass(m: &MassFunction<T>) -> Self {
        let frame = m.frame().clone();
        let mut values = vec![T::zero(); frame.powerset_len()];
        for (set, mass) in m.focal() {
            if !set.is_empty() {
                values[set.bits() as usize] = mass.clone();
            }
        }
        subset_sums(&mut values);
        BeliefTable {
            frame,
            values,
            mode: m.mode(),
        }
    }

    /// Wraps raw values. Checks shape, bel(∅) = 0, and bel(Ω) = 1 in
    /// closed mode; Möbius positivity is checked by [`BeliefTable::to_mass`].
    pub fn new(frame: Frame, values: Vec<T>, mode: WorldMode) -> Result<Self> {
        if values.len() != frame.powerset_len() {
            return Err(Error::InvalidBeliefTable(format!(
                "expected {} values, got {}",
                frame.powerset_len(),
                values.len()
            )));
        }
        if !values[0].is_negligible() {
            return Err(Error::InvalidBeliefTable(format!(
                "bel of the empty set is {}, expected 0",
                values[0].to_literal()
            )));
        }
        let total = &values[values.len() - 1];
        let total_ok = match mode {
            WorldMode::Closed => total.approx_eq(&T::one()),
            WorldMode::Open => !total.is_negative() && total.le_approx(&T::one()),
        };
        if !total_ok {
            return Err(Error::InvalidBeliefTable(format!(
                "bel of the frame is {}",
                total.to_literal()
            )));
        }
        Ok(BeliefTable { frame, values, mode })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mode(&self) -> WorldMode {
        self.mode
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn bel(&self, set: SubsetMask) -> Result<&T> {
        self.frame.check(set)?;
        Ok(&self.values[set.bits() as usize])
    }

    /// pl(A) = bel(Ω) − bel(Ā).
    pub fn pl(&self, set: SubsetMask) -> Result<T> {
        self.frame.check(set)?;
        let total = self.values[self.frame.full().bits() as usize].clone();
        let complement = self.values[self.frame.complement(set).bits() as usize].clone();
        Ok(total - complement)
    }

    /// Möbius inversion back to masses. In open mode, m(∅) = 1 − bel(Ω).
    pub fn to_mass(&self) -> Result<MassFunction<T>> {
        mass_from_bel(self)
    }
}

/// Recovers the mass function whose belief table is `table`. Fails with
/// [`Error::NotBeliefFunction`] when some recovered mass is negative.
pub fn mass_from_bel<T: Scalar>(table: &BeliefTable<T>) -> Result<MassFunction<T>> {
    let frame = table.frame().clone();
    let mut masses = table.values().to_vec();
    inverse_subset_sums(&mut masses);
    let mut focal = BTreeMap::new();
    for (bits, mass) in masses.into_iter().enumerate().skip(1) {
        let set = SubsetMask::from_bits(bits as u32);
        if mass.is_negative() {
            return Err(Error::NotBeliefFunction {
                set: frame.render(set),
                mass: mass.to_literal(),
            });
        }
        focal.insert(set, mass);
    }
    if table.mode() == WorldMode::Open {
        let total = table.values()[table.values().len() - 1].clone();
        focal.insert(SubsetMask::EMPTY, T::one() - total);
    }
    Ok(MassFunction::from_parts(frame, focal, table.mode()))
}
