//! The semiring monad `S` on finite sets.
//!
//! For a finite base `X = {0, .., n-1}`, `S(X)` is the set of functions
//! `X -> S`, enumerated in lexicographic order of carrier indices with
//! `f(0)` most significant. That enumeration identifies `S(X)` with the base
//! `{0, .., |S|^n - 1}` of the next layer, so `S²X` and `S³X` are again
//! [`FinFn`]s. Values are stored sparsely (zeros implicit), which keeps
//! elements of the very large outer layers cheap.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::report::{LawOutcome, LawReport, Status, Witness};
use crate::semiring::{Elem, FiniteSemimodule, FiniteSemiring};
use crate::{Error, Result};

/// Index of a base element. Outer layers get large quickly.
pub type Idx = u128;

/// A total function from a finite base `0..base` to a semiring.
#[derive(Clone, PartialEq, Eq)]
pub struct FinFn {
    semiring: Arc<FiniteSemiring>,
    base: Idx,
    /// Nonzero values only.
    support: BTreeMap<Idx, Elem>,
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.semiring;
        if self.base <= 8 {
            let vals: Vec<&str> = (0..self.base).map(|x| s.name(self.get(x))).collect();
            write!(f, "[{}]", vals.join(","))
        } else {
            let vals: Vec<String> = self
                .support
                .iter()
                .map(|(x, v)| format!("{x}↦{}", s.name(*v)))
                .collect();
            write!(f, "{{{}}}/{}", vals.join(", "), self.base)
        }
    }
}

/// `|S|^n`, if it fits an index.
pub fn power_count(s: &FiniteSemiring, n: Idx) -> Option<Idx> {
    let n = u32::try_from(n).ok()?;
    (s.size() as Idx).checked_pow(n)
}

impl FinFn {
    pub fn zero(semiring: Arc<FiniteSemiring>, base: Idx) -> Self {
        FinFn {
            semiring,
            base,
            support: BTreeMap::new(),
        }
    }

    /// Dense constructor: `values[x]` is the value at `x`.
    pub fn from_values(semiring: Arc<FiniteSemiring>, values: &[Elem]) -> Result<Self> {
        Self::from_pairs(semiring, values.len() as Idx, values.iter().enumerate().map(|(x, &v)| (x as Idx, v)))
    }

    /// Sets the listed values; later pairs overwrite earlier ones.
    pub fn from_pairs(
        semiring: Arc<FiniteSemiring>,
        base: Idx,
        pairs: impl IntoIterator<Item = (Idx, Elem)>,
    ) -> Result<Self> {
        let mut f = FinFn::zero(semiring, base);
        for (x, v) in pairs {
            f.set(x, v)?;
        }
        Ok(f)
    }

    pub fn set(&mut self, x: Idx, v: Elem) -> Result<()> {
        if x >= self.base {
            return Err(Error::malformed("finite function", format!("{x} is outside the base of size {}", self.base)));
        }
        self.semiring.check(v)?;
        if v == self.semiring.zero() {
            self.support.remove(&x);
        } else {
            self.support.insert(x, v);
        }
        Ok(())
    }

    pub fn semiring(&self) -> &Arc<FiniteSemiring> {
        &self.semiring
    }

    pub fn base(&self) -> Idx {
        self.base
    }

    pub fn get(&self, x: Idx) -> Elem {
        self.support.get(&x).copied().unwrap_or(self.semiring.zero())
    }

    /// Nonzero entries in increasing base order.
    pub fn support(&self) -> impl Iterator<Item = (Idx, Elem)> + '_ {
        self.support.iter().map(|(&x, &v)| (x, v))
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// Dense value list (small bases only).
    pub fn values(&self) -> Vec<Elem> {
        (0..self.base).map(|x| self.get(x)).collect()
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &FinFn) -> Result<FinFn> {
        self.ensure_compatible(other)?;
        let s = &self.semiring;
        let mut out = self.clone();
        for (x, v) in other.support() {
            out.set(x, s.add(self.get(x), v))?;
        }
        Ok(out)
    }

    /// Left scalar multiple `t·f`.
    pub fn scaled(&self, t: Elem) -> Result<FinFn> {
        let s = &self.semiring;
        s.check(t)?;
        FinFn::from_pairs(s.clone(), self.base, self.support().map(|(x, v)| (x, s.mul(t, v))))
    }

    fn ensure_compatible(&self, other: &FinFn) -> Result<()> {
        if self.base != other.base || self.semiring != other.semiring {
            return Err(Error::Mismatch(format!(
                "functions over base {} in `{}` and base {} in `{}`",
                self.base,
                self.semiring.label(),
                other.base,
                other.semiring.label()
            )));
        }
        Ok(())
    }

    /// Position of this function in the enumeration of `S^base`.
    pub fn encode(&self) -> Result<Idx> {
        let k = self.semiring.size() as Idx;
        power_count(&self.semiring, self.base).ok_or_else(|| overflow(&self.semiring, self.base))?;
        let mut idx: Idx = 0;
        for x in 0..self.base {
            idx = idx * k + self.get(x) as Idx;
        }
        Ok(idx)
    }

    /// Inverse of [`FinFn::encode`].
    pub fn decode(semiring: Arc<FiniteSemiring>, base: Idx, index: Idx) -> Result<FinFn> {
        let count = power_count(&semiring, base).ok_or_else(|| overflow(&semiring, base))?;
        if index >= count {
            return Err(Error::malformed("function index", format!("{index} >= {count}")));
        }
        let k = semiring.size() as Idx;
        let mut rest = index;
        let mut f = FinFn::zero(semiring, base);
        for x in (0..base).rev() {
            f.set(x, (rest % k) as Elem)?;
            rest /= k;
        }
        Ok(f)
    }

    /// Value at `x` of the function with the given enumeration index, without
    /// decoding the rest.
    pub fn digit(semiring: &FiniteSemiring, base: Idx, index: Idx, x: Idx) -> Elem {
        let k = semiring.size() as Idx;
        let shift = power_count(semiring, base - 1 - x).expect("digit position fits");
        ((index / shift) % k) as Elem
    }
}

fn overflow(s: &FiniteSemiring, base: Idx) -> Error {
    Error::BudgetExceeded {
        needed: Idx::MAX,
        budget: base.saturating_mul(s.size() as Idx),
    }
}

/// A function between finite sets `0..source -> 0..target`.
#[derive(Clone)]
pub struct FiniteFunction {
    source: Idx,
    target: Idx,
    map: Arc<dyn Fn(Idx) -> Idx + Send + Sync>,
}

impl fmt::Debug for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.source <= 8 {
            let img: Vec<Idx> = (0..self.source).map(|x| (self.map)(x)).collect();
            write!(f, "{img:?}→{}", self.target)
        } else {
            write!(f, "FiniteFunction({} → {})", self.source, self.target)
        }
    }
}

impl FiniteFunction {
    pub fn new(source: Idx, target: Idx, map: impl Fn(Idx) -> Idx + Send + Sync + 'static) -> Self {
        FiniteFunction {
            source,
            target,
            map: Arc::new(map),
        }
    }

    pub fn from_table(table: Vec<Idx>, target: Idx) -> Result<Self> {
        if let Some(y) = table.iter().find(|&&y| y >= target) {
            return Err(Error::malformed("function table", format!("{y} outside target of size {target}")));
        }
        let source = table.len() as Idx;
        Ok(Self::new(source, target, move |x| table[x as usize]))
    }

    pub fn identity(n: Idx) -> Self {
        Self::new(n, n, |x| x)
    }

    pub fn source(&self) -> Idx {
        self.source
    }

    pub fn target(&self) -> Idx {
        self.target
    }

    pub fn apply(&self, x: Idx) -> Idx {
        (self.map)(x)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &FiniteFunction) -> Result<FiniteFunction> {
        if self.target != then.source {
            return Err(Error::Mismatch(format!("composing {} → {} with {} → {}", self.source, self.target, then.source, then.target)));
        }
        let (f, g) = (self.map.clone(), then.map.clone());
        Ok(Self::new(self.source, then.target, move |x| g(f(x))))
    }

    /// Every function `0..n -> 0..m`, as lookup tables.
    pub fn all(n: usize, m: usize) -> Vec<FiniteFunction> {
        if n == 0 {
            return vec![Self::new(0, m as Idx, |_| 0)];
        }
        if m == 0 {
            return vec![];
        }
        let count = m.pow(n as u32);
        (0..count)
            .map(|mut i| {
                let mut table = vec![0; n];
                for slot in table.iter_mut().rev() {
                    *slot = (i % m) as Idx;
                    i /= m;
                }
                Self::from_table(table, m as Idx).expect("entries are in range")
            })
            .collect()
    }
}

/// `S(φ)(f)(y) = Σ_{φ(x) = y} f(x)`.
pub fn functor_map(phi: &FiniteFunction, f: &FinFn) -> Result<FinFn> {
    if phi.source != f.base {
        return Err(Error::Mismatch(format!("map from {} elements applied to a function on {}", phi.source, f.base)));
    }
    let s = f.semiring.clone();
    let mut out: BTreeMap<Idx, Elem> = BTreeMap::new();
    for (x, v) in f.support() {
        let y = phi.apply(x);
        if y >= phi.target {
            return Err(Error::malformed("function", format!("image {y} outside target of size {}", phi.target)));
        }
        let acc = out.entry(y).or_insert(s.zero());
        *acc = s.add(*acc, v);
    }
    FinFn::from_pairs(s, phi.target, out)
}

/// The characteristic function of `{x}`.
pub fn unit(s: Arc<FiniteSemiring>, base: Idx, x: Idx) -> Result<FinFn> {
    if x >= base {
        return Err(Error::malformed("unit", format!("{x} is not in a base of size {base}")));
    }
    let one = s.one();
    FinFn::from_pairs(s, base, [(x, one)])
}

/// An element of `S(S(X))`: a function on the enumeration of `S^X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleFinFn {
    inner_base: Idx,
    outer: FinFn,
}

impl DoubleFinFn {
    pub fn new(inner_base: Idx, outer: FinFn) -> Result<Self> {
        let count = power_count(&outer.semiring, inner_base).ok_or_else(|| overflow(&outer.semiring, inner_base))?;
        if outer.base != count {
            return Err(Error::malformed(
                "double function",
                format!("outer base {} is not |S|^{inner_base} = {count}", outer.base),
            ));
        }
        Ok(DoubleFinFn { inner_base, outer })
    }

    /// `Σ s_i f_i` from its terms; repeated functions accumulate.
    pub fn from_terms(s: Arc<FiniteSemiring>, inner_base: Idx, terms: &[(FinFn, Elem)]) -> Result<Self> {
        let count = power_count(&s, inner_base).ok_or_else(|| overflow(&s, inner_base))?;
        let mut outer = FinFn::zero(s.clone(), count);
        for (f, c) in terms {
            if f.base != inner_base {
                return Err(Error::Mismatch("term over a different base".into()));
            }
            let i = f.encode()?;
            outer.set(i, s.add(outer.get(i), *c))?;
        }
        Ok(DoubleFinFn { inner_base, outer })
    }

    pub fn inner_base(&self) -> Idx {
        self.inner_base
    }

    pub fn outer(&self) -> &FinFn {
        &self.outer
    }

    pub fn semiring(&self) -> &Arc<FiniteSemiring> {
        &self.outer.semiring
    }
}

/// `μ(F)(x) = Σ_f F(f)·f(x)`.
pub fn mult(big: &DoubleFinFn) -> Result<FinFn> {
    let s = big.semiring();
    let n = big.inner_base;
    let values = (0..n).map(|x| {
        let terms = big
            .outer
            .support()
            .map(|(g, c)| s.mul(c, FinFn::digit(s, n, g, x)));
        (x, s.sum(terms))
    });
    FinFn::from_pairs(s.clone(), n, values)
}

/// A multiplication `S²X -> SX`, so the checker can be pointed at variants.
pub type MultFn<'a> = dyn Fn(&DoubleFinFn) -> Result<FinFn> + Sync + 'a;

/// Test inputs for one law: either all of `S^base` or a generating family.
struct Family {
    items: Vec<FinFn>,
    exhaustive: bool,
    coverage: String,
}

/// All of `S^base` when it fits the budget; otherwise the zero function, all
/// monomials `s·η(p)` and (up to the budget) all binomials over the given
/// base points, which default to the whole base.
fn family(s: &Arc<FiniteSemiring>, base: Idx, points: Option<&[Idx]>, budget: u64) -> Result<Family> {
    if points.is_none() {
        if let Some(count) = power_count(s, base).filter(|&c| c <= budget as Idx) {
            let items = (0..count).map(|i| FinFn::decode(s.clone(), base, i)).collect::<Result<_>>()?;
            return Ok(Family {
                items,
                exhaustive: true,
                coverage: format!("exhaustive over {count}"),
            });
        }
    }
    let owned: Vec<Idx>;
    let pts: &[Idx] = match points {
        Some(p) => p,
        None => {
            owned = (0..base.min(budget as Idx)).collect();
            &owned
        }
    };
    let nonzero: Vec<Elem> = s.elements().filter(|&v| v != s.zero()).collect();
    let mut items = vec![FinFn::zero(s.clone(), base)];
    for &p in pts {
        for &v in &nonzero {
            items.push(FinFn::from_pairs(s.clone(), base, [(p, v)])?);
        }
    }
    let k = nonzero.len() as u128;
    let pairs = (pts.len() as u128) * (pts.len().saturating_sub(1) as u128) / 2 * k * k;
    let room = (budget as u128).saturating_sub(items.len() as u128);
    let stride = if pairs <= room { 1 } else { pairs.div_ceil(room.max(1)) };
    let mut counter: u128 = 0;
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            for &v in &nonzero {
                for &w in &nonzero {
                    if counter.is_multiple_of(stride) {
                        items.push(FinFn::from_pairs(s.clone(), base, [(p, v), (q, w)])?);
                    }
                    counter += 1;
                }
            }
        }
    }
    let coverage = format!(
        "support ≤ 2 over {} base points: {} of {} elements ({})",
        pts.len(),
        items.len(),
        1 + pts.len() as u128 * k + pairs,
        if stride == 1 { "all".to_string() } else { format!("binomials strided by {stride}") },
    );
    Ok(Family {
        items,
        exhaustive: false,
        coverage,
    })
}

fn record(
    report: &mut LawReport,
    law: String,
    fam: &Family,
    mut check: impl FnMut(&FinFn) -> Result<Option<Witness>>,
) -> Result<()> {
    let mut checked = 0;
    for item in &fam.items {
        checked += 1;
        if let Some(w) = check(item)? {
            report.push(LawOutcome::fail(law, checked, w).with_coverage(fam.coverage.clone()));
            return Ok(());
        }
    }
    let mut outcome = LawOutcome::pass(law, checked).with_coverage(fam.coverage.clone());
    if !fam.exhaustive {
        outcome.status = Status::Partial;
    }
    report.push(outcome);
    Ok(())
}

/// Verifies the monad laws with the standard multiplication.
pub fn check_monad_laws(s: &Arc<FiniteSemiring>, max_base_size: usize, budget: u64) -> Result<LawReport> {
    check_monad_laws_with(s, max_base_size, budget, &mult)
}

/// Verifies unit, associativity and naturality laws for every base of size
/// `0..=max_base_size` (and all functions between such bases).
///
/// A law whose input set `S^Y` has at most `budget` elements is checked on
/// all of it. Larger input sets are replaced by the generating family of
/// [`family`]; such laws report [`Status::Partial`] unless they fail.
pub fn check_monad_laws_with(
    s: &Arc<FiniteSemiring>,
    max_base_size: usize,
    budget: u64,
    mult: &MultFn<'_>,
) -> Result<LawReport> {
    let mut report = LawReport::new(format!("semiring monad of `{}`", s.label()));
    let mu = |n: Idx, outer: &FinFn| -> Result<FinFn> { mult(&DoubleFinFn::new(n, outer.clone())?) };

    for n in 0..=max_base_size as Idx {
        let sx = power_count(s, n).ok_or_else(|| overflow(s, n))?;
        let sx_fam = family(s, n, None, budget)?;

        // μ ∘ η_{SX} = id
        record(&mut report, format!("left-unit[n={n}]"), &sx_fam, |f| {
            let lifted = unit(s.clone(), sx, f.encode()?)?;
            let back = mu(n, &lifted)?;
            Ok((back != *f).then(|| Witness::new(vec![f.to_string()], format!("μ(η({f})) = {back}"))))
        })?;

        // μ ∘ S(η_X) = id
        let eta = {
            let s = s.clone();
            FiniteFunction::new(n, sx, move |x| unit(s.clone(), n, x).and_then(|u| u.encode()).expect("unit encodes"))
        };
        record(&mut report, format!("right-unit[n={n}]"), &sx_fam, |f| {
            let back = mu(n, &functor_map(&eta, f)?)?;
            Ok((back != *f).then(|| Witness::new(vec![f.to_string()], format!("μ(S(η)({f})) = {back}"))))
        })?;

        // μ ∘ S(μ) = μ ∘ μ_S on S³X
        let s2x = power_count(s, sx).ok_or_else(|| overflow(s, sx))?;
        let s2_fam = family(s, sx, None, budget)?;
        let s3_points: Option<Vec<Idx>> = if power_count(s, s2x).is_some_and(|c| c <= budget as Idx) {
            None
        } else {
            Some(s2_fam.items.iter().map(|g| g.encode()).collect::<Result<_>>()?)
        };
        let s3_fam = family(s, s2x, s3_points.as_deref(), budget)?;
        let s_mu = {
            let (s, mult) = (s.clone(), mult);
            move |big: &FinFn| -> Result<FinFn> {
                let mut out = FinFn::zero(s.clone(), sx);
                for (g, c) in big.support() {
                    let inner = FinFn::decode(s.clone(), sx, g)?;
                    let image = mult(&DoubleFinFn::new(n, inner)?)?.encode()?;
                    out.set(image, s.add(out.get(image), c))?;
                }
                Ok(out)
            }
        };
        record(&mut report, format!("associativity[n={n}]"), &s3_fam, |big| {
            let lhs = mu(n, &s_mu(big)?)?;
            let rhs = mu(n, &mu(sx, big)?)?;
            Ok((lhs != rhs).then(|| {
                Witness::new(vec![big.to_string()], format!("μ(S(μ)(Φ)) = {lhs} but μ(μ(Φ)) = {rhs}"))
            }))
        })?;

        // naturality of η and μ along every φ: X -> Y
        for m in 0..=max_base_size as Idx {
            let sy = power_count(s, m).ok_or_else(|| overflow(s, m))?;
            for phi in FiniteFunction::all(n as usize, m as usize) {
                let law = format!("eta-natural[{phi:?}]");
                let mut outcome = LawOutcome::pass(law.clone(), n as u64).with_coverage(format!("exhaustive over {n}"));
                for x in 0..n {
                    let lhs = functor_map(&phi, &unit(s.clone(), n, x)?)?;
                    let rhs = unit(s.clone(), m, phi.apply(x))?;
                    if lhs != rhs {
                        let w = Witness::new(vec![x.to_string()], format!("S(φ)(η(x)) = {lhs} but η(φ(x)) = {rhs}"));
                        outcome = LawOutcome::fail(law, x as u64 + 1, w);
                        break;
                    }
                }
                report.push(outcome);
                let s_phi = {
                    let (s, phi) = (s.clone(), phi.clone());
                    FiniteFunction::new(sx, sy, move |g| {
                        FinFn::decode(s.clone(), n, g)
                            .and_then(|f| functor_map(&phi, &f))
                            .and_then(|f| f.encode())
                            .expect("S(φ) is total")
                    })
                };
                record(&mut report, format!("mu-natural[{phi:?}]"), &s2_fam, |big| {
                    let lhs = functor_map(&phi, &mu(n, big)?)?;
                    let rhs = mu(m, &functor_map(&s_phi, big)?)?;
                    Ok((lhs != rhs).then(|| Witness::new(vec![big.to_string()], format!("S(φ)(μ(F)) = {lhs} but μ(SS(φ)(F)) = {rhs}"))))
                })?;
            }
        }
    }
    Ok(report)
}

/// Eilenberg–Moore structure map of a semimodule: `a(f) = Σ_m f(m)·m`.
pub fn structure_map(module: &FiniteSemimodule, f: &FinFn) -> Result<Elem> {
    if f.base() != module.size() as Idx || f.semiring() != module.semiring() {
        return Err(Error::Mismatch(format!("function is not over the carrier of `{}`", module.label())));
    }
    Ok(module.sum(f.support().map(|(m, c)| module.act(c, m as Elem))))
}

/// Checks `a ∘ η = id` and `a ∘ μ = a ∘ S(a)` for a semimodule's structure
/// map, with the same budget policy as [`check_monad_laws`].
pub fn check_algebra_laws(module: &FiniteSemimodule, budget: u64) -> Result<LawReport> {
    let s = module.semiring().clone();
    let m = module.size() as Idx;
    let mut report = LawReport::new(format!("structure map of `{}`", module.label()));
    let units = Family {
        items: (0..m).map(|x| unit(s.clone(), m, x)).collect::<Result<_>>()?,
        exhaustive: true,
        coverage: format!("exhaustive over {m}"),
    };
    record(&mut report, "algebra-unit".into(), &units, |u| {
        let x = u.support().next().expect("unit has support").0 as Elem;
        let back = structure_map(module, u)?;
        Ok((back != x).then(|| Witness::new(vec![module.name(x).into()], format!("a(η(m)) = {}", module.name(back)))))
    })?;
    let sm = power_count(&s, m).ok_or_else(|| overflow(&s, m))?;
    let fam = family(&s, sm, None, budget)?;
    let a = {
        let (s, module) = (s.clone(), module.clone());
        FiniteFunction::new(sm, m, move |g| {
            FinFn::decode(s.clone(), m, g)
                .and_then(|f| structure_map(&module, &f))
                .expect("structure map is total") as Idx
        })
    };
    record(&mut report, "algebra-associative".into(), &fam, |big| {
        let lhs = structure_map(module, &mult(&DoubleFinFn::new(m, big.clone())?)?)?;
        let rhs = structure_map(module, &functor_map(&a, big)?)?;
        Ok((lhs != rhs).then(|| {
            Witness::new(vec![big.to_string()], format!("a(μ(F)) = {} but a(S(a)(F)) = {}", module.name(lhs), module.name(rhs)))
        }))
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{bool2, nat_sat, trop_trunc, zmod};

    fn arc(s: FiniteSemiring) -> Arc<FiniteSemiring> {
        Arc::new(s)
    }

    #[test]
    fn encoding_is_lexicographic() {
        let s = arc(zmod(3));
        let f = FinFn::from_values(s.clone(), &[1, 0, 2]).unwrap();
        assert_eq!(f.encode().unwrap(), 9 + 2);
        for i in 0..27 {
            let g = FinFn::decode(s.clone(), 3, i).unwrap();
            assert_eq!(g.encode().unwrap(), i);
            for x in 0..3 {
                assert_eq!(FinFn::digit(&s, 3, i, x), g.get(x));
            }
        }
    }

    #[test]
    fn functor_sums_fibres() {
        let s = arc(zmod(4));
        let f = FinFn::from_values(s.clone(), &[1, 2, 3]).unwrap();
        let phi = FiniteFunction::from_table(vec![0, 0, 1], 2).unwrap();
        assert_eq!(functor_map(&phi, &f).unwrap().values(), vec![3, 3]);
    }

    #[test]
    fn functoriality() {
        for s in [arc(bool2()), arc(zmod(3)), arc(trop_trunc(2))] {
            for n in 0..=3usize {
                let count = power_count(&s, n as Idx).unwrap();
                for i in 0..count {
                    let f = FinFn::decode(s.clone(), n as Idx, i).unwrap();
                    assert_eq!(functor_map(&FiniteFunction::identity(n as Idx), &f).unwrap(), f);
                    for phi in FiniteFunction::all(n, 2) {
                        for psi in FiniteFunction::all(2, 3) {
                            let both = functor_map(&phi.then(&psi).unwrap(), &f).unwrap();
                            let stepwise = functor_map(&psi, &functor_map(&phi, &f).unwrap()).unwrap();
                            assert_eq!(both, stepwise);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mult_flattens() {
        let s = arc(zmod(5));
        let f = FinFn::from_values(s.clone(), &[1, 2]).unwrap();
        let g = FinFn::from_values(s.clone(), &[3, 0]).unwrap();
        let big = DoubleFinFn::from_terms(s.clone(), 2, &[(f, 2), (g, 1)]).unwrap();
        // 2·(1,2) + (3,0) = (5,4) = (0,4)
        assert_eq!(mult(&big).unwrap().values(), vec![0, 4]);
    }

    #[test]
    fn boolean_laws_are_exhaustive() {
        let report = check_monad_laws(&arc(bool2()), 2, 1 << 16).unwrap();
        assert_eq!(report.status(), Status::Pass, "{report:?}");
    }

    #[test]
    fn larger_semirings_pass_on_generators() {
        for s in [arc(zmod(3)), arc(nat_sat(2))] {
            let report = check_monad_laws(&s, 1, 1 << 12).unwrap();
            assert_eq!(report.failures().count(), 0, "{report:?}");
            assert!(report.law("left-unit[n=1]").unwrap().status == Status::Pass);
        }
    }

    #[test]
    fn coefficient_dropping_mult_is_caught() {
        let s = arc(zmod(3));
        let broken = |big: &DoubleFinFn| -> Result<FinFn> {
            let s = big.semiring();
            let n = big.inner_base();
            let vals = (0..n).map(|x| (x, s.sum(big.outer().support().map(|(g, _)| FinFn::digit(s, n, g, x)))));
            FinFn::from_pairs(s.clone(), n, vals)
        };
        let report = check_monad_laws_with(&s, 1, 1 << 12, &broken).unwrap();
        assert_eq!(report.status(), Status::Fail);
        assert!(report.failures().any(|l| l.law.starts_with("associativity")));
    }

    #[test]
    fn regular_module_is_an_algebra() {
        let s = arc(zmod(3));
        let report = check_algebra_laws(&FiniteSemimodule::regular(s), 1 << 12).unwrap();
        assert_eq!(report.failures().count(), 0, "{report:?}");
        let b = arc(bool2());
        assert!(check_algebra_laws(&FiniteSemimodule::regular(b), 1 << 12).unwrap().is_pass());
    }
}
