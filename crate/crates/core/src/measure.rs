//! Finitely additive semiring-valued measures on the clopens of a profinite
//! space, represented by their compatible stage families
//! `stage_at(n): X_n -> S` with `stage_at(n)(x) = Σ_{y over x} stage_at(n+1)(y)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::monad::{functor_map, FinFn, FiniteFunction, Idx};
use crate::semiring::{Elem, FiniteSemimodule, FiniteSemiring};
use crate::space::{ensure_same, joint_separation, Clopen, ContinuousMap, InverseSystem, Point, Space, Tail};
use crate::{Error, Result};

/// Deterministic generator for case `case` of a suite run with `seed`.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// A finitely supported function on the points of a space.
#[derive(Clone)]
pub struct FinSuppFn {
    space: Space,
    semiring: Arc<FiniteSemiring>,
    support: Vec<(Point, Elem)>,
    separation: usize,
}

impl fmt::Debug for FinSuppFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .support
            .iter()
            .map(|(p, v)| format!("{}↦{}", p.label(), self.semiring.name(*v)))
            .collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl PartialEq for FinSuppFn {
    /// Equality as functions: zero entries are ignored.
    fn eq(&self, other: &Self) -> bool {
        if ensure_same(&self.space, &other.space).is_err() || self.semiring != other.semiring {
            return false;
        }
        let covers = |a: &FinSuppFn, b: &FinSuppFn| a.support.iter().all(|(p, v)| b.value_at(p).ok() == Some(*v));
        covers(self, other) && covers(other, self)
    }
}

impl FinSuppFn {
    /// Points must be pairwise distinct.
    pub fn new(space: Space, semiring: Arc<FiniteSemiring>, support: Vec<(Point, Elem)>) -> Result<Self> {
        for (p, v) in &support {
            ensure_same(&space, p.space())?;
            semiring.check(*v)?;
        }
        let points: Vec<Point> = support.iter().map(|(p, _)| p.clone()).collect();
        let separation = joint_separation(&points)?;
        Ok(FinSuppFn {
            space,
            semiring,
            support,
            separation,
        })
    }

    pub fn zero(space: Space, semiring: Arc<FiniteSemiring>) -> Self {
        FinSuppFn {
            space,
            semiring,
            support: Vec::new(),
            separation: 0,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn semiring(&self) -> &Arc<FiniteSemiring> {
        &self.semiring
    }

    pub fn support(&self) -> &[(Point, Elem)] {
        &self.support
    }

    /// Least level at which the support points occupy distinct cells.
    pub fn separation_level(&self) -> usize {
        self.separation
    }

    /// Drops zero entries.
    pub fn normalized(&self) -> FinSuppFn {
        let zero = self.semiring.zero();
        let support: Vec<_> = self.support.iter().filter(|(_, v)| *v != zero).cloned().collect();
        let points: Vec<Point> = support.iter().map(|(p, _)| p.clone()).collect();
        FinSuppFn {
            separation: joint_separation(&points).expect("subfamily of distinct points"),
            space: self.space.clone(),
            semiring: self.semiring.clone(),
            support,
        }
    }

    pub fn value_at(&self, p: &Point) -> Result<Elem> {
        for (q, v) in &self.support {
            if q.separation_level(p)?.is_none() {
                return Ok(*v);
            }
        }
        Ok(self.semiring.zero())
    }

    /// Pointwise sum; coinciding points merge.
    pub fn plus(&self, other: &FinSuppFn) -> Result<FinSuppFn> {
        self.ensure_compatible(other)?;
        let s = &self.semiring;
        let mut support = self.support.clone();
        for (p, v) in &other.support {
            match find(&support, p)? {
                Some(i) => support[i].1 = s.add(support[i].1, *v),
                None => support.push((p.clone(), *v)),
            }
        }
        FinSuppFn::new(self.space.clone(), s.clone(), support)
    }

    pub fn scaled(&self, t: Elem) -> Result<FinSuppFn> {
        let s = &self.semiring;
        s.check(t)?;
        Ok(FinSuppFn {
            support: self.support.iter().map(|(p, v)| (p.clone(), s.mul(t, *v))).collect(),
            ..self.clone()
        })
    }

    fn ensure_compatible(&self, other: &FinSuppFn) -> Result<()> {
        ensure_same(&self.space, &other.space)?;
        if self.semiring != other.semiring {
            return Err(Error::Mismatch(format!(
                "semirings `{}` and `{}`",
                self.semiring.label(),
                other.semiring.label()
            )));
        }
        Ok(())
    }

    fn certified_depth(&self) -> usize {
        self.support
            .iter()
            .map(|(p, _)| p.certified_depth())
            .min()
            .unwrap_or(self.space.certified_depth())
    }
}

fn find(support: &[(Point, Elem)], p: &Point) -> Result<Option<usize>> {
    for (i, (q, _)) in support.iter().enumerate() {
        if q.separation_level(p)?.is_none() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

type StageGen = Arc<dyn Fn(usize) -> Result<FinFn> + Send + Sync>;

#[derive(Clone)]
enum Source {
    FinSupp { f: FinSuppFn, dirac: bool },
    Stages(StageGen),
}

/// Where a measure came from; decides how far pointwise readings are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Dirac,
    #[serde(rename = "finsupp")]
    FinSupp,
    Stages,
}

#[derive(Clone)]
pub struct Measure {
    space: Space,
    semiring: Arc<FiniteSemiring>,
    source: Source,
    depth: usize,
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::FinSupp { f: g, .. } => write!(f, "Measure(∫{g:?})"),
            Source::Stages(_) => write!(f, "Measure(stages to depth {})", self.depth),
        }
    }
}

pub fn dirac(semiring: Arc<FiniteSemiring>, p: &Point) -> Result<Measure> {
    let one = semiring.one();
    let f = FinSuppFn::new(p.space().clone(), semiring, vec![(p.clone(), one)])?;
    let mut m = integrate(&f);
    m.source = Source::FinSupp { f, dirac: true };
    Ok(m)
}

/// `b ↦ Σ_{x ∈ b} f(x)`.
pub fn integrate(f: &FinSuppFn) -> Measure {
    Measure {
        space: f.space.clone(),
        semiring: f.semiring.clone(),
        depth: f.certified_depth(),
        source: Source::FinSupp { f: f.clone(), dirac: false },
    }
}

pub fn zero_measure(space: Space, semiring: Arc<FiniteSemiring>) -> Measure {
    integrate(&FinSuppFn::zero(space, semiring))
}

impl Measure {
    /// A measure from explicit stage functions at levels `0..levels.len()`;
    /// they must be compatible.
    pub fn from_stages(space: Space, semiring: Arc<FiniteSemiring>, levels: Vec<FinFn>) -> Result<Measure> {
        if levels.is_empty() {
            return Err(Error::malformed("stages", "at least level 0 is required"));
        }
        for (n, f) in levels.iter().enumerate() {
            if f.base() != space.level_size(n)? as Idx || f.semiring() != &semiring {
                return Err(Error::malformed("stages", format!("level {n} has the wrong shape")));
            }
        }
        let depth = levels.len() - 1;
        let levels = Arc::new(levels);
        let m = Measure::from_generator(space, semiring, depth, move |n| Ok(levels[n].clone()));
        if let Some(n) = m.compatibility_failure(depth)? {
            return Err(Error::malformed(
                "stages",
                format!("level {n} is not the fibre sum of level {}", n + 1),
            ));
        }
        Ok(m)
    }

    /// A measure from a stage generator, trusted to be compatible up to
    /// `depth`.
    pub fn from_generator(
        space: Space,
        semiring: Arc<FiniteSemiring>,
        depth: usize,
        stage_at: impl Fn(usize) -> Result<FinFn> + Send + Sync + 'static,
    ) -> Measure {
        Measure {
            depth: depth.min(space.certified_depth()),
            space,
            semiring,
            source: Source::Stages(Arc::new(stage_at)),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn semiring(&self) -> &Arc<FiniteSemiring> {
        &self.semiring
    }

    pub fn certified_depth(&self) -> usize {
        self.depth
    }

    pub fn provenance(&self) -> Provenance {
        match &self.source {
            Source::FinSupp { dirac: true, .. } => Provenance::Dirac,
            Source::FinSupp { .. } => Provenance::FinSupp,
            Source::Stages(_) => Provenance::Stages,
        }
    }

    /// The integrand, for measures of the form `∫ f`.
    pub fn finsupp(&self) -> Option<&FinSuppFn> {
        match &self.source {
            Source::FinSupp { f, .. } => Some(f),
            Source::Stages(_) => None,
        }
    }

    /// Level from which stage data determines every pointwise reading: the
    /// support separation level for integrals, the certified depth
    /// otherwise.
    pub fn exactness_depth(&self) -> usize {
        match &self.source {
            Source::FinSupp { f, .. } => f.separation_level(),
            Source::Stages(_) => self.depth,
        }
    }

    pub fn stage_at(&self, n: usize) -> Result<FinFn> {
        if n > self.depth {
            return Err(Error::depth(n, self.depth));
        }
        let base = self.space.level_size(n)? as Idx;
        match &self.source {
            Source::FinSupp { f, .. } => {
                let s = &self.semiring;
                let mut acc: BTreeMap<Idx, Elem> = BTreeMap::new();
                for (p, v) in &f.support {
                    let slot = acc.entry(p.at(n)? as Idx).or_insert(s.zero());
                    *slot = s.add(*slot, *v);
                }
                FinFn::from_pairs(s.clone(), base, acc)
            }
            Source::Stages(g) => g(n),
        }
    }

    /// `μ(b) = Σ_{c ∈ b} stage_at(b.level)(c)`.
    pub fn eval(&self, b: &Clopen) -> Result<Elem> {
        ensure_same(&self.space, b.space())?;
        let stage = self.stage_at(b.level())?;
        let s = &self.semiring;
        Ok(s.sum(
            stage
                .support()
                .filter(|(c, _)| b.cells().contains(&(*c as usize)))
                .map(|(_, v)| v),
        ))
    }

    /// First level `n < depth` at which `stage_at(n)` is not the fibre sum
    /// of `stage_at(n+1)`.
    pub fn compatibility_failure(&self, depth: usize) -> Result<Option<usize>> {
        let mut next = self.stage_at(depth)?;
        for n in (0..depth).rev() {
            let here = self.stage_at(n)?;
            let space = self.space.clone();
            let down = FiniteFunction::new(next.base(), here.base(), move |y| {
                space.transition(n, y as usize).expect("level exists") as Idx
            });
            if functor_map(&down, &next)? != here {
                return Ok(Some(n));
            }
            next = here;
        }
        Ok(None)
    }

    fn ensure_compatible(&self, other: &Measure) -> Result<()> {
        ensure_same(&self.space, &other.space)?;
        if self.semiring != other.semiring {
            return Err(Error::Mismatch(format!(
                "measures in `{}` and `{}`",
                self.semiring.label(),
                other.semiring.label()
            )));
        }
        Ok(())
    }
}

/// Stage-wise sum.
pub fn combine(m1: &Measure, m2: &Measure) -> Result<Measure> {
    m1.ensure_compatible(m2)?;
    if let (Some(f), Some(g)) = (m1.finsupp(), m2.finsupp()) {
        return Ok(integrate(&f.plus(g)?));
    }
    let (a, b) = (m1.clone(), m2.clone());
    let depth = m1.depth.min(m2.depth);
    Ok(Measure::from_generator(m1.space.clone(), m1.semiring.clone(), depth, move |n| {
        a.stage_at(n)?.plus(&b.stage_at(n)?)
    }))
}

/// Stage-wise `t·μ`.
pub fn scale(t: Elem, m: &Measure) -> Result<Measure> {
    m.semiring.check(t)?;
    if let Some(f) = m.finsupp() {
        return Ok(integrate(&f.scaled(t)?));
    }
    let a = m.clone();
    Ok(Measure::from_generator(m.space.clone(), m.semiring.clone(), m.depth, move |n| {
        a.stage_at(n)?.scaled(t)
    }))
}

/// `μ ∘ h⁻¹`, stage-wise the functor image along `h`'s stage maps.
pub fn pushforward(m: &Measure, h: &ContinuousMap) -> Result<Measure> {
    ensure_same(&m.space, h.source())?;
    let target = h.target().clone();
    if let Some(f) = m.finsupp() {
        let mut support: Vec<(Point, Elem)> = Vec::new();
        let s = &m.semiring;
        for (p, v) in f.support() {
            let q = h.apply(p)?;
            match find(&support, &q)? {
                Some(i) => support[i].1 = s.add(support[i].1, *v),
                None => support.push((q, *v)),
            }
        }
        let g = FinSuppFn::new(target, s.clone(), support)?;
        let mut out = integrate(&g);
        if m.provenance() == Provenance::Dirac {
            out.source = Source::FinSupp { f: g, dirac: true };
        }
        return Ok(out);
    }
    let depth = h.target_depth(m.depth);
    let (a, h) = (m.clone(), h.clone());
    let tgt = target.clone();
    Ok(Measure::from_generator(target, m.semiring.clone(), depth, move |n| {
        let src = a.stage_at(h.factor_level(n))?;
        let hh = h.clone();
        let stage = FiniteFunction::new(src.base(), tgt.level_size(n)? as Idx, move |x| {
            hh.stage(n, x as usize).expect("stage map is total") as Idx
        });
        functor_map(&stage, &src)
    }))
}

/// Stage functions agree at every level `0..=d`.
pub fn equal_to_depth(m1: &Measure, m2: &Measure, d: usize) -> Result<bool> {
    m1.ensure_compatible(m2)?;
    for n in 0..=d {
        if m1.stage_at(n)? != m2.stage_at(n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First level `n ≤ d` at which the stage functions differ.
pub fn first_difference(m1: &Measure, m2: &Measure, d: usize) -> Result<Option<usize>> {
    m1.ensure_compatible(m2)?;
    for n in 0..=d {
        if m1.stage_at(n)? != m2.stage_at(n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `⟨b, U⟩`: measures whose value on `b` lies in `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubbasicConstraint {
    pub clopen: Clopen,
    pub allowed: BTreeSet<Elem>,
}

impl SubbasicConstraint {
    pub fn new(clopen: Clopen, allowed: impl IntoIterator<Item = Elem>) -> Self {
        SubbasicConstraint {
            clopen,
            allowed: allowed.into_iter().collect(),
        }
    }

    pub fn holds(&self, m: &Measure) -> Result<bool> {
        Ok(self.allowed.contains(&m.eval(&self.clopen)?))
    }
}

/// Outcome of [`density_witness`].
#[derive(Debug, Clone)]
pub enum DensityOutcome {
    Witness(FinSuppFn),
    /// No assignment of values to the atoms satisfies every constraint.
    Unsatisfiable { atoms: usize, assignments: u128 },
}

/// Default cap on atom-value assignments tried by [`density_witness`].
pub const WITNESS_BUDGET: u128 = 1 << 24;

/// Finds a finitely supported `f` with `∫ f` in every constraint, putting
/// one point on the least thread of each atom of the algebra generated by
/// the constraint clopens. Assignments are tried in lexicographic order.
pub fn density_witness(
    space: &Space,
    semiring: &Arc<FiniteSemiring>,
    constraints: &[SubbasicConstraint],
) -> Result<DensityOutcome> {
    for c in constraints {
        ensure_same(space, c.clopen.space())?;
    }
    // atoms are the classes of level cells with equal membership patterns
    let level = constraints.iter().map(|c| c.clopen.level()).max().unwrap_or(0);
    let lifted = constraints
        .iter()
        .map(|c| c.clopen.lift(level))
        .collect::<Result<Vec<_>>>()?;
    let mut patterns: Vec<Vec<bool>> = Vec::new();
    let mut least_cell: Vec<usize> = Vec::new();
    for cell in 0..space.level_size(level)? {
        let pattern: Vec<bool> = lifted.iter().map(|l| l.contains(&cell)).collect();
        if !patterns.contains(&pattern) {
            patterns.push(pattern);
            least_cell.push(cell);
        }
    }
    // membership[i][j]: atom j lies inside constraint i's clopen
    let membership: Vec<Vec<bool>> = (0..constraints.len())
        .map(|i| patterns.iter().map(|p| p[i]).collect())
        .collect();
    let k = semiring.size() as u128;
    let total = u32::try_from(patterns.len())
        .ok()
        .and_then(|n| k.checked_pow(n))
        .filter(|&t| t <= WITNESS_BUDGET)
        .ok_or(Error::BudgetExceeded {
            needed: k.saturating_pow(patterns.len() as u32),
            budget: WITNESS_BUDGET,
        })?;
    let mut values = vec![0 as Elem; patterns.len()];
    for index in 0..total {
        let mut rest = index;
        for v in values.iter_mut().rev() {
            *v = (rest % k) as Elem;
            rest /= k;
        }
        let ok = constraints.iter().zip(&membership).all(|(c, inside)| {
            let total = semiring.sum(values.iter().zip(inside).filter(|(_, &i)| i).map(|(&v, _)| v));
            c.allowed.contains(&total)
        });
        if ok {
            let mut support = Vec::new();
            for (&cell, &v) in least_cell.iter().zip(&values) {
                if v != semiring.zero() {
                    support.push((Point::through_cell(space.clone(), level, cell, Tail::Least)?, v));
                }
            }
            return Ok(DensityOutcome::Witness(FinSuppFn::new(space.clone(), semiring.clone(), support)?));
        }
    }
    Ok(DensityOutcome::Unsatisfiable {
        atoms: patterns.len(),
        assignments: total,
    })
}

/// A clopen on which `∫ f` and `∫ g` differ, at the joint separation level of
/// both supports; `None` when `f = g`.
pub fn separating_clopen(f: &FinSuppFn, g: &FinSuppFn) -> Result<Option<Clopen>> {
    f.ensure_compatible(g)?;
    let mut points: Vec<Point> = Vec::new();
    for (p, _) in f.support.iter().chain(&g.support) {
        if find_point(&points, p)?.is_none() {
            points.push(p.clone());
        }
    }
    let level = joint_separation(&points)?;
    let (mf, mg) = (integrate(f), integrate(g));
    let (sf, sg) = (mf.stage_at(level)?, mg.stage_at(level)?);
    for p in &points {
        let c = p.at(level)?;
        if sf.get(c as Idx) != sg.get(c as Idx) {
            return Ok(Some(Clopen::cell(f.space.clone(), level, c)?));
        }
    }
    Ok(None)
}

fn find_point(points: &[Point], p: &Point) -> Result<Option<usize>> {
    for (i, q) in points.iter().enumerate() {
        if q.separation_level(p)?.is_none() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `Σ_{v ∈ Y} ν(v)·v` with `ν` the pushforward of `m` along `f`.
pub fn free_extension(y: &FiniteSemimodule, f: &ContinuousMap, m: &Measure) -> Result<Elem> {
    match f.target().as_ref() {
        InverseSystem::Finite { k } if *k == y.size() => {}
        other => {
            return Err(Error::Mismatch(format!(
                "map must target finite:{}, not {}",
                y.size(),
                other.describe()
            )))
        }
    }
    if y.semiring() != m.semiring() {
        return Err(Error::Mismatch(format!(
            "module over `{}`, measure in `{}`",
            y.semiring().label(),
            m.semiring().label()
        )));
    }
    let nu = pushforward(m, f)?.stage_at(0)?;
    Ok(y.sum(nu.support().map(|(v, c)| y.act(c, v as Elem))))
}

/// A random finitely supported function resolving by `level`: every level
/// cell carries an independent uniform value, on a point with a random tail.
/// Integrals of these realise every compatible stage prefix up to `level`.
pub fn random_definable(
    space: &Space,
    semiring: &Arc<FiniteSemiring>,
    level: usize,
    rng: &mut impl Rng,
) -> Result<FinSuppFn> {
    let mut support = Vec::new();
    for c in 0..space.level_size(level)? {
        let v = rng.gen_range(0..semiring.size());
        let tail = if rng.gen_bool(0.5) { Tail::Least } else { Tail::Greatest };
        if v != semiring.zero() {
            support.push((Point::through_cell(space.clone(), level, c, tail)?, v));
        }
    }
    FinSuppFn::new(space.clone(), semiring.clone(), support)
}

/// A random function with at most `max_points` support points on cells of
/// random levels `≤ max_level`; coinciding points are merged.
pub fn random_sparse(
    space: &Space,
    semiring: &Arc<FiniteSemiring>,
    max_level: usize,
    max_points: usize,
    rng: &mut impl Rng,
) -> Result<FinSuppFn> {
    let mut f = FinSuppFn::zero(space.clone(), semiring.clone());
    for _ in 0..rng.gen_range(0..=max_points) {
        let level = rng.gen_range(0..=max_level);
        let c = rng.gen_range(0..space.level_size(level)?);
        let tail = if rng.gen_bool(0.5) { Tail::Least } else { Tail::Greatest };
        let p = Point::through_cell(space.clone(), level, c, tail)?;
        let v = rng.gen_range(0..semiring.size());
        f = f.plus(&FinSuppFn::new(space.clone(), semiring.clone(), vec![(p, v)])?)?;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{bool2, trop_trunc, zmod};

    fn z(c: &Space) -> Point {
        Point::cantor(c.clone(), "0", Tail::Least).unwrap()
    }

    fn o(c: &Space) -> Point {
        Point::cantor(c.clone(), "1", Tail::Greatest).unwrap()
    }

    fn b0(c: &Space) -> Clopen {
        Clopen::cantor_prefix(c.clone(), "0").unwrap()
    }

    #[test]
    fn dirac_values() {
        let c = InverseSystem::cantor();
        let s = Arc::new(bool2());
        let m = dirac(s.clone(), &z(&c)).unwrap();
        assert_eq!(m.eval(&b0(&c)).unwrap(), 1);
        assert_eq!(m.eval(&b0(&c).not()).unwrap(), 0);
        assert_eq!(m.eval(&Clopen::top(c.clone())).unwrap(), 1);
        assert_eq!(m.eval(&Clopen::empty(c.clone())).unwrap(), 0);
        let t = Arc::new(trop_trunc(2));
        let stage = dirac(t.clone(), &z(&c)).unwrap().stage_at(2).unwrap();
        assert_eq!(stage.values(), vec![0, 3, 3, 3]);
    }

    #[test]
    fn integrals() {
        let c = InverseSystem::cantor();
        let s = Arc::new(zmod(2));
        let f = FinSuppFn::new(c.clone(), s.clone(), vec![(z(&c), 1), (o(&c), 1)]).unwrap();
        let m = integrate(&f);
        assert_eq!(m.eval(&Clopen::top(c.clone())).unwrap(), 0);
        assert_eq!(m.eval(&b0(&c)).unwrap(), 1);
        let t = Arc::new(trop_trunc(2));
        let g = FinSuppFn::new(c.clone(), t.clone(), vec![(z(&c), 2)]).unwrap();
        let mg = integrate(&g);
        assert_eq!(mg.eval(&b0(&c)).unwrap(), 2);
        assert_eq!(mg.eval(&b0(&c).not()).unwrap(), 3);
        // level independence
        let deep = b0(&c).at_level(3).unwrap();
        assert_eq!(m.eval(&deep).unwrap(), m.eval(&b0(&c)).unwrap());
        assert!(zero_measure(c.clone(), s).stage_at(4).unwrap().support_len() == 0);
    }

    #[test]
    fn linear_structure() {
        let c = InverseSystem::cantor();
        let s = Arc::new(zmod(2));
        let (dz, dd) = (dirac(s.clone(), &z(&c)).unwrap(), dirac(s.clone(), &o(&c)).unwrap());
        let f = FinSuppFn::new(c.clone(), s.clone(), vec![(z(&c), 1), (o(&c), 1)]).unwrap();
        assert!(equal_to_depth(&combine(&dz, &dd).unwrap(), &integrate(&f), 6).unwrap());
        let zero = zero_measure(c.clone(), s.clone());
        assert!(equal_to_depth(&combine(&dz, &dz).unwrap(), &zero, 5).unwrap());
        assert!(equal_to_depth(&scale(0, &integrate(&f)).unwrap(), &zero, 5).unwrap());
        assert_eq!(first_difference(&dz, &dd, 1).unwrap(), Some(1));
        assert!(!equal_to_depth(&dz, &dd, 1).unwrap());
    }

    #[test]
    fn pushforward_along_first_bit() {
        let c = InverseSystem::cantor();
        let s = Arc::new(zmod(2));
        let h = ContinuousMap::first_bit(c.clone()).unwrap();
        let pushed = pushforward(&dirac(s.clone(), &z(&c)).unwrap(), &h).unwrap();
        assert_eq!(pushed.stage_at(0).unwrap().values(), vec![1, 0]);
        let f = FinSuppFn::new(c.clone(), s.clone(), vec![(z(&c), 1), (o(&c), 1)]).unwrap();
        assert_eq!(pushforward(&integrate(&f), &h).unwrap().stage_at(0).unwrap().values(), vec![1, 1]);
        let id = ContinuousMap::identity(c.clone());
        assert!(equal_to_depth(&pushforward(&integrate(&f), &id).unwrap(), &integrate(&f), 5).unwrap());
    }

    #[test]
    fn stage_family_pushforward_matches_integral_route() {
        let c = InverseSystem::cantor();
        let s = Arc::new(zmod(3));
        let f = random_definable(&c, &s, 4, &mut case_rng(1, 0)).unwrap();
        let m = integrate(&f);
        let stages: Vec<FinFn> = (0..=4).map(|n| m.stage_at(n).unwrap()).collect();
        let explicit = Measure::from_stages(c.clone(), s.clone(), stages).unwrap();
        let h = ContinuousMap::first_bit(c.clone()).unwrap();
        let a = pushforward(&m, &h).unwrap();
        let b = pushforward(&explicit, &h).unwrap();
        assert!(equal_to_depth(&a, &b, 0).unwrap());
        assert_eq!(explicit.compatibility_failure(4).unwrap(), None);
    }

    #[test]
    fn incompatible_stages_are_rejected() {
        let c = InverseSystem::cantor();
        let s = Arc::new(bool2());
        let l0 = FinFn::from_values(s.clone(), &[0]).unwrap();
        let l1 = FinFn::from_values(s.clone(), &[1, 0]).unwrap();
        assert!(Measure::from_stages(c, s, vec![l0, l1]).is_err());
    }

    #[test]
    fn witnesses() {
        let c = InverseSystem::cantor();
        let s = Arc::new(zmod(2));
        let b = b0(&c);
        let one = [SubbasicConstraint::new(b.clone(), [1])];
        match density_witness(&c, &s, &one).unwrap() {
            DensityOutcome::Witness(f) => {
                assert_eq!(f.support().len(), 1);
                assert!(f.support()[0].0 == z(&c));
                assert!(one[0].holds(&integrate(&f)).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let clash = [SubbasicConstraint::new(b.clone(), [1]), SubbasicConstraint::new(b, [0])];
        assert!(matches!(
            density_witness(&c, &s, &clash).unwrap(),
            DensityOutcome::Unsatisfiable { .. }
        ));
        let top = [SubbasicConstraint::new(Clopen::top(c.clone()), [0])];
        match density_witness(&c, &Arc::new(bool2()), &top).unwrap() {
            DensityOutcome::Witness(f) => assert!(f.support().is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn separation_of_distinct_functions() {
        let c = InverseSystem::cantor();
        let s = Arc::new(zmod(3));
        let f = FinSuppFn::new(c.clone(), s.clone(), vec![(z(&c), 1)]).unwrap();
        let near = Point::cantor(c.clone(), "0001", Tail::Least).unwrap();
        let g = FinSuppFn::new(c.clone(), s.clone(), vec![(near, 1)]).unwrap();
        let sep = separating_clopen(&f, &g).unwrap().unwrap();
        assert_eq!(sep.level(), 4);
        assert_ne!(integrate(&f).eval(&sep).unwrap(), integrate(&g).eval(&sep).unwrap());
        assert!(separating_clopen(&f, &f.plus(&FinSuppFn::zero(c, s)).unwrap()).unwrap().is_none());
    }

    #[test]
    fn free_extension_over_booleans() {
        let c = InverseSystem::cantor();
        let s = Arc::new(bool2());
        let y = FiniteSemimodule::regular(s.clone());
        let ind = ContinuousMap::indicator(&b0(&c)).unwrap();
        for m in [dirac(s.clone(), &z(&c)).unwrap(), dirac(s.clone(), &o(&c)).unwrap()] {
            assert_eq!(free_extension(&y, &ind, &m).unwrap(), m.eval(&b0(&c)).unwrap());
        }
        assert_eq!(free_extension(&y, &ind, &zero_measure(c, s)).unwrap(), y.zero());
    }

    #[test]
    fn seeded_streams_are_reproducible() {
        let c = InverseSystem::cantor();
        let s = Arc::new(zmod(3));
        let a = random_definable(&c, &s, 3, &mut case_rng(7, 3)).unwrap();
        let b = random_definable(&c, &s, 3, &mut case_rng(7, 3)).unwrap();
        assert_eq!(a, b);
        let other = random_definable(&c, &s, 3, &mut case_rng(7, 4)).unwrap();
        assert_ne!(format!("{a:?}"), format!("{other:?}"));
    }
}
