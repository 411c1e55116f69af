//! Finite Stone duality for measures on a finite discrete space `X`.
//!
//! Subsets of the universe `S^X` are bitsets over its canonical enumeration
//! (see [`crate::monad::FinFn::encode`]). The brackets
//! `[b, k] = { f | Σ_{x ∈ b} f(x) = k }` generate a Boolean algebra whose
//! atoms correspond to the measures on `X`, i.e. to the functions `X -> S`.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::monad::{power_count, FinFn, Idx};
use crate::report::{Status, Witness};
use crate::semiring::{Elem, FiniteSemiring};
use crate::{Error, Result};

/// A Boolean subalgebra of the powerset of `0..universe`, held by its atoms.
#[derive(Debug, Clone)]
pub struct FiniteBooleanAlgebra {
    universe: usize,
    atoms: Vec<FixedBitSet>,
    generators: Vec<FixedBitSet>,
    /// Atom index of each universe element.
    atom_of: Vec<usize>,
}

/// Smallest subalgebra containing `generators`: elements with the same
/// membership pattern share an atom. Atoms are ordered by least element.
pub fn generated_algebra(universe: usize, generators: &[FixedBitSet]) -> Result<FiniteBooleanAlgebra> {
    if let Some(g) = generators.iter().find(|g| g.len() != universe) {
        return Err(Error::malformed(
            "generator",
            format!("subset of a universe of {} given for a universe of {universe}", g.len()),
        ));
    }
    let mut by_pattern: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut atoms: Vec<FixedBitSet> = Vec::new();
    let mut atom_of = Vec::with_capacity(universe);
    for u in 0..universe {
        let pattern: Vec<bool> = generators.iter().map(|g| g.contains(u)).collect();
        let next = atoms.len();
        let i = *by_pattern.entry(pattern).or_insert(next);
        if i == next {
            atoms.push(FixedBitSet::with_capacity(universe));
        }
        atoms[i].insert(u);
        atom_of.push(i);
    }
    Ok(FiniteBooleanAlgebra {
        universe,
        atoms,
        generators: generators.to_vec(),
        atom_of,
    })
}

impl FiniteBooleanAlgebra {
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn atoms(&self) -> &[FixedBitSet] {
        &self.atoms
    }

    pub fn generators(&self) -> &[FixedBitSet] {
        &self.generators
    }

    pub fn atom_containing(&self, u: usize) -> usize {
        self.atom_of[u]
    }

    /// Index of `set` among the atoms, if it is one.
    pub fn atom_index(&self, set: &FixedBitSet) -> Option<usize> {
        let first = set.ones().next()?;
        let i = self.atom_of[first];
        (self.atoms[i] == *set).then_some(i)
    }

    /// Unions of atoms are exactly the members.
    pub fn is_member(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|u| self.atoms[self.atom_of[u]].is_subset(set))
    }
}

/// `[b, k]` as a subset of `S^X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketSet {
    /// Subset of `X` as a bitmask.
    pub b: u64,
    pub k: Elem,
    pub members: FixedBitSet,
}

fn universe_size(x: usize, s: &FiniteSemiring, budget: u64) -> Result<usize> {
    let count = power_count(s, x as Idx).unwrap_or(Idx::MAX);
    if x >= 64 || count > budget as Idx {
        return Err(Error::BudgetExceeded {
            needed: count,
            budget: budget as u128,
        });
    }
    Ok(count as usize)
}

/// `Σ_{x ∈ b} f(x)`, with `f` given by its enumeration index.
fn bracket_value(s: &FiniteSemiring, x: usize, f: usize, b: u64) -> Elem {
    s.sum((0..x).filter(|i| b >> i & 1 == 1).map(|i| FinFn::digit(s, x as Idx, f as Idx, i as Idx)))
}

/// Every `[b, k]` for `b ⊆ X` (bitmask order) and `k ∈ S`.
pub fn bracket_generators(x: usize, s: &FiniteSemiring, budget: u64) -> Result<Vec<BracketSet>> {
    let n = universe_size(x, s, budget)?;
    let mut out = Vec::with_capacity((1 << x) * s.size());
    for b in 0..1u64 << x {
        let mut sets: Vec<FixedBitSet> = (0..s.size()).map(|_| FixedBitSet::with_capacity(n)).collect();
        for f in 0..n {
            sets[bracket_value(s, x, f, b)].insert(f);
        }
        out.extend(sets.into_iter().enumerate().map(|(k, members)| BracketSet { b, k, members }));
    }
    Ok(out)
}

/// Algebra generated by all brackets over `X`.
pub fn bracket_algebra(x: usize, s: &FiniteSemiring, budget: u64) -> Result<(FiniteBooleanAlgebra, Vec<BracketSet>)> {
    let brackets = bracket_generators(x, s, budget)?;
    let gens: Vec<FixedBitSet> = brackets.iter().map(|b| b.members.clone()).collect();
    Ok((generated_algebra(universe_size(x, s, budget)?, &gens)?, brackets))
}

/// `μ_ϕ` on singletons: for each `x`, the unique `k` with `[{x}, k] ⊇ atom`.
/// Also checks that the values on larger `b` are the sums, as they must be
/// for an atom.
pub fn atom_to_measure(
    algebra: &FiniteBooleanAlgebra,
    brackets: &[BracketSet],
    atom: &FixedBitSet,
    x: usize,
    s: &Arc<FiniteSemiring>,
) -> Result<FinFn> {
    if algebra.atom_index(atom).is_none() {
        return Err(Error::malformed("atom", "not an atom of the bracket algebra"));
    }
    let value_on = |b: u64| -> Result<Elem> {
        let ks: Vec<Elem> = brackets
            .iter()
            .filter(|br| br.b == b && atom.is_subset(&br.members))
            .map(|br| br.k)
            .collect();
        match ks.as_slice() {
            [k] => Ok(*k),
            _ => Err(Error::malformed("atom", format!("no unique bracket value on {b:#b}"))),
        }
    };
    let values = (0..x).map(|i| value_on(1 << i)).collect::<Result<Vec<_>>>()?;
    for b in 0..1u64 << x {
        let sum = s.sum((0..x).filter(|i| b >> i & 1 == 1).map(|i| values[i]));
        if value_on(b)? != sum {
            return Err(Error::malformed("atom", format!("value on {b:#b} is not additive")));
        }
    }
    FinFn::from_values(s.clone(), &values)
}

/// The atom generating the ultrafilter `{ [b, μ(b)] }`: the intersection of
/// all brackets the measure `f` lies in.
pub fn measure_to_ultrafilter(
    algebra: &FiniteBooleanAlgebra,
    brackets: &[BracketSet],
    f: &FinFn,
) -> Result<FixedBitSet> {
    let s = f.semiring();
    let x = f.base() as usize;
    let mut meet = FixedBitSet::with_capacity(algebra.universe());
    meet.insert_range(..);
    for br in brackets {
        let mu_b = s.sum((0..x).filter(|i| br.b >> i & 1 == 1).map(|i| f.get(i as Idx)));
        if br.k == mu_b {
            meet.intersect_with(&br.members);
        }
    }
    if algebra.atom_index(&meet).is_none() {
        return Err(Error::malformed("filter base", "does not meet in an atom"));
    }
    Ok(meet)
}

/// JSON report of the atom/measure correspondence on a finite `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub universe_size: u128,
    pub atom_count: usize,
    pub expected: u128,
    pub bijection: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Pairs and scalar multiples over which the linear structure was
    /// transported.
    pub transport_checked: u64,
}

/// Verifies that the bracket atoms match `S^X`, that the two translations
/// are inverse to each other, and that sums and scalar multiples of
/// measures land in the brackets of the summed values. Universes above the
/// budget are reported as partial without enumeration.
pub fn bijection_report(x: usize, s: &Arc<FiniteSemiring>, budget: u64) -> Result<DualityReport> {
    let expected = power_count(s, x as Idx).unwrap_or(Idx::MAX);
    let (algebra, brackets) = match bracket_algebra(x, s, budget) {
        Ok(v) => v,
        Err(Error::BudgetExceeded { .. }) => {
            return Ok(DualityReport {
                universe_size: expected,
                atom_count: 0,
                expected,
                bijection: Status::Partial,
                witness: Some(Witness::new(vec![], format!("universe of {expected} exceeds the budget {budget}"))),
                transport_checked: 0,
            })
        }
        Err(e) => return Err(e),
    };
    let n = algebra.universe();
    let mut report = DualityReport {
        universe_size: n as u128,
        atom_count: algebra.atoms().len(),
        expected,
        bijection: Status::Pass,
        witness: None,
        transport_checked: 0,
    };
    let fail = |report: &mut DualityReport, tuple: Vec<String>, detail: String| {
        report.bijection = Status::Fail;
        report.witness = Some(Witness::new(tuple, detail));
    };
    if report.atom_count as u128 != expected {
        let detail = format!("{} atoms for {expected} measures", report.atom_count);
        fail(&mut report, vec![], detail);
        return Ok(report);
    }
    for b in 0..1u64 << x {
        let mut cover = FixedBitSet::with_capacity(n);
        for br in brackets.iter().filter(|br| br.b == b) {
            if !cover.is_disjoint(&br.members) {
                fail(&mut report, vec![format!("{b:#b}")], "brackets overlap".into());
                return Ok(report);
            }
            cover.union_with(&br.members);
        }
        if cover.count_ones(..) != n {
            fail(&mut report, vec![format!("{b:#b}")], "brackets do not cover".into());
            return Ok(report);
        }
    }

    let mut measures = Vec::with_capacity(n);
    for atom in algebra.atoms() {
        let f = atom_to_measure(&algebra, &brackets, atom, x, s)?;
        if measure_to_ultrafilter(&algebra, &brackets, &f)? != *atom {
            fail(&mut report, vec![f.to_string()], "atom → measure → atom is not the identity".into());
            return Ok(report);
        }
        measures.push(f);
    }
    let mut atom_of_fn: Vec<Option<usize>> = vec![None; n];
    for code in 0..n {
        let f = FinFn::decode(s.clone(), x as Idx, code as Idx)?;
        let atom = measure_to_ultrafilter(&algebra, &brackets, &f)?;
        let i = algebra.atom_index(&atom).expect("checked above");
        if measures[i] != f {
            fail(&mut report, vec![f.to_string()], format!("measure → atom → measure gives {}", measures[i]));
            return Ok(report);
        }
        atom_of_fn[code] = Some(i);
    }

    // the atom of f1 + f2 lies in [b, μ1(b) + μ2(b)]; likewise for t·f
    let inside_all = |atom: &FixedBitSet, value: &dyn Fn(u64) -> Elem| {
        brackets
            .iter()
            .filter(|br| br.k == value(br.b))
            .all(|br| atom.is_subset(&br.members))
    };
    let mu = |f: &FinFn, b: u64| s.sum((0..x).filter(|i| b >> i & 1 == 1).map(|i| f.get(i as Idx)));
    for (i, f1) in measures.iter().enumerate() {
        for f2 in &measures[i..] {
            let sum = f1.plus(f2)?;
            let atom = &algebra.atoms()[atom_of_fn[sum.encode()? as usize].expect("every function has an atom")];
            report.transport_checked += 1;
            if !inside_all(atom, &|b| s.add(mu(f1, b), mu(f2, b))) {
                fail(&mut report, vec![f1.to_string(), f2.to_string()], "sum leaves its brackets".into());
                return Ok(report);
            }
        }
        for t in s.elements() {
            let scaled = f1.scaled(t)?;
            let atom = &algebra.atoms()[atom_of_fn[scaled.encode()? as usize].expect("every function has an atom")];
            report.transport_checked += 1;
            if !inside_all(atom, &|b| s.mul(t, mu(f1, b))) {
                fail(&mut report, vec![s.name(t).into(), f1.to_string()], "scalar multiple leaves its brackets".into());
                return Ok(report);
            }
        }
    }
    Ok(report)
}
