use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ensure_same, Space};
use crate::{Error, Result};

/// A clopen subset, presented as a set of cells at some level. `(n, A)` and
/// `(n + 1, transition⁻¹(A))` denote the same clopen; equality compares
/// canonical forms.
#[derive(Clone)]
pub struct Clopen {
    space: Space,
    level: usize,
    cells: BTreeSet<usize>,
}

/// JSON form `{ "level": n, "cells": [..] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClopenDescriptor {
    pub level: usize,
    pub cells: Vec<usize>,
}

impl fmt::Debug for Clopen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self
            .cells
            .iter()
            .map(|&c| self.space.cell_name(self.level, c))
            .collect();
        write!(f, "Clopen(level {}, {{{}}})", self.level, names.join(","))
    }
}

impl PartialEq for Clopen {
    fn eq(&self, other: &Self) -> bool {
        if ensure_same(&self.space, &other.space).is_err() {
            return false;
        }
        let level = self.level.max(other.level);
        match (self.lift(level), other.lift(level)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Clopen {}

impl Clopen {
    pub fn new(space: Space, level: usize, cells: impl IntoIterator<Item = usize>) -> Result<Self> {
        let size = space.level_size(level)?;
        let cells: BTreeSet<usize> = cells.into_iter().collect();
        if let Some(&c) = cells.iter().find(|&&c| c >= size) {
            return Err(Error::malformed(
                "clopen",
                format!("cell {c} out of range for level {level} (size {size})"),
            ));
        }
        Ok(Clopen { space, level, cells })
    }

    pub fn from_descriptor(space: Space, desc: &ClopenDescriptor) -> Result<Self> {
        Self::new(space, desc.level, desc.cells.iter().copied())
    }

    pub fn descriptor(&self) -> ClopenDescriptor {
        ClopenDescriptor {
            level: self.level,
            cells: self.cells.iter().copied().collect(),
        }
    }

    /// Every cell of level 0; a finite space has more than one.
    pub fn top(space: Space) -> Self {
        let size = space.level_size(0).expect("level 0 exists");
        Clopen {
            space,
            level: 0,
            cells: (0..size).collect(),
        }
    }

    pub fn empty(space: Space) -> Self {
        Clopen {
            space,
            level: 0,
            cells: BTreeSet::new(),
        }
    }

    /// The single cell `x` of level `level`.
    pub fn cell(space: Space, level: usize, x: usize) -> Result<Self> {
        Self::new(space, level, [x])
    }

    /// Cantor-space cylinder of all sequences starting with `prefix`, a
    /// string over `{0,1}`.
    pub fn cantor_prefix(space: Space, prefix: &str) -> Result<Self> {
        let x = super::point::parse_bits(prefix)?;
        Self::new(space, prefix.len(), [x])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn cells(&self) -> &BTreeSet<usize> {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells of the preimage at a level at least as deep as this one.
    pub fn lift(&self, level: usize) -> Result<BTreeSet<usize>> {
        if level < self.level {
            return Err(Error::malformed(
                "clopen lift",
                format!("cannot lift from level {} to coarser level {level}", self.level),
            ));
        }
        let cells: Vec<usize> = self.cells.iter().copied().collect();
        Ok(self.space.lift_cells(self.level, level, &cells)?.into_iter().collect())
    }

    /// Same clopen presented at a deeper level.
    pub fn at_level(&self, level: usize) -> Result<Self> {
        Ok(Clopen {
            space: self.space.clone(),
            level,
            cells: self.lift(level)?,
        })
    }

    /// Presentation at the least level admitting this set as a full preimage.
    pub fn canonical(&self) -> Self {
        let mut cur = self.clone();
        while cur.level > 0 {
            let n = cur.level - 1;
            let image: BTreeSet<usize> = cur
                .cells
                .iter()
                .map(|&y| self.space.transition(n, y).expect("levels below a valid level exist"))
                .collect();
            let candidate = Clopen {
                space: self.space.clone(),
                level: n,
                cells: image,
            };
            match candidate.lift(cur.level) {
                Ok(back) if back == cur.cells => cur = candidate,
                _ => break,
            }
        }
        cur
    }

    fn binary(&self, other: &Clopen, op: impl Fn(bool, bool) -> bool) -> Result<Clopen> {
        ensure_same(&self.space, &other.space)?;
        let level = self.level.max(other.level);
        let a = self.lift(level)?;
        let b = other.lift(level)?;
        let size = self.space.level_size(level)?;
        let cells = (0..size).filter(|c| op(a.contains(c), b.contains(c)));
        Ok(Clopen::new(self.space.clone(), level, cells)?.canonical())
    }

    pub fn and(&self, other: &Clopen) -> Result<Clopen> {
        self.binary(other, |a, b| a && b)
    }

    pub fn or(&self, other: &Clopen) -> Result<Clopen> {
        self.binary(other, |a, b| a || b)
    }

    pub fn diff(&self, other: &Clopen) -> Result<Clopen> {
        self.binary(other, |a, b| a && !b)
    }

    pub fn not(&self) -> Clopen {
        Clopen::top(self.space.clone())
            .diff(self)
            .expect("a clopen and the top share a space")
    }

    pub fn leq(&self, other: &Clopen) -> Result<bool> {
        Ok(self.diff(other)?.is_empty())
    }

    pub fn is_disjoint(&self, other: &Clopen) -> Result<bool> {
        Ok(self.and(other)?.is_empty())
    }
}

/// Atoms of the Boolean subalgebra generated by `generators`: the nonempty
/// sign-pattern intersections. They are pairwise disjoint, cover the space,
/// and every generator is a union of atoms. Atoms come out in order of their
/// least cell.
pub fn atoms(space: &Space, generators: &[Clopen]) -> Result<Vec<Clopen>> {
    for g in generators {
        ensure_same(space, g.space())?;
    }
    let level = generators.iter().map(Clopen::level).max().unwrap_or(0);
    let lifted = generators
        .iter()
        .map(|g| g.lift(level))
        .collect::<Result<Vec<_>>>()?;
    let mut classes: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
    for c in 0..space.level_size(level)? {
        let sign: Vec<bool> = lifted.iter().map(|g| g.contains(&c)).collect();
        match classes.iter_mut().find(|(s, _)| *s == sign) {
            Some((_, cells)) => cells.push(c),
            None => classes.push((sign, vec![c])),
        }
    }
    classes
        .into_iter()
        .map(|(_, cells)| Ok(Clopen::new(space.clone(), level, cells)?.canonical()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::InverseSystem;
    use super::*;

    fn b0() -> Clopen {
        Clopen::cantor_prefix(InverseSystem::cantor(), "0").unwrap()
    }

    #[test]
    fn boolean_laws_on_b0() {
        let b = b0();
        assert!(b.and(&b.not()).unwrap().is_empty());
        assert_eq!(b.or(&b.not()).unwrap(), Clopen::top(b.space().clone()));
        assert!(b.leq(&Clopen::top(b.space().clone())).unwrap());
        assert!(!Clopen::top(b.space().clone()).leq(&b).unwrap());
    }

    #[test]
    fn complements_in_a_finite_space() {
        let x = InverseSystem::finite(3).unwrap();
        let b = Clopen::new(x.clone(), 0, [1]).unwrap();
        assert_eq!(b.not().cells(), &BTreeSet::from([0, 2]));
        assert_eq!(Clopen::empty(x.clone()).not(), Clopen::top(x));
    }

    #[test]
    fn lift_and_canonical_form() {
        let b = b0();
        assert_eq!(b.lift(2).unwrap(), BTreeSet::from([0, 1]));
        let deep = Clopen::new(b.space().clone(), 2, [0, 1]).unwrap();
        let canon = deep.canonical();
        assert_eq!((canon.level(), canon.cells().clone()), (1, BTreeSet::from([0])));
        assert_eq!(deep, b);
        // not a full fibre: stays at level 2
        let partial = Clopen::new(b.space().clone(), 2, [0, 2]).unwrap().canonical();
        assert_eq!(partial.level(), 2);
        // top and empty canonicalise to level 0
        let all = Clopen::new(b.space().clone(), 3, 0..8).unwrap().canonical();
        assert_eq!(all.level(), 0);
    }

    #[test]
    fn atom_examples() {
        let space = InverseSystem::cantor();
        let top = Clopen::top(space.clone());
        assert_eq!(atoms(&space, &[]).unwrap(), vec![top]);
        let b = b0();
        assert_eq!(atoms(&space, std::slice::from_ref(&b)).unwrap(), vec![b.clone(), b.not()]);
        // second bit 0
        let c0 = Clopen::new(space.clone(), 2, [0, 2]).unwrap();
        let at = atoms(&space, &[b, c0]).unwrap();
        assert_eq!(at.len(), 4);
        assert!(at.iter().all(|a| a.level() == 2 && a.cells().len() == 1));
    }

    #[test]
    fn mismatched_spaces() {
        let other = InverseSystem::nat_infty();
        let e = b0().and(&Clopen::top(other));
        assert!(matches!(e, Err(Error::Mismatch(_))));
        assert!(Clopen::new(InverseSystem::cantor(), 1, [2]).is_err());
    }
}
