//! Densities of measures with values in a finite idempotent semiring.
//!
//! For idempotent `S` the sum is a join for the natural order, and a measure
//! is recovered from its density `δ_μ(x) = ⋀_{x ∈ b} μ(b)` by integration
//! `∫_b f = ⋁_{x ∈ b} f(x)`. Functions coming from integrals are held
//! pointwise (finitely many points above the bottom), so both directions do
//! real work; functions coming from bare stage families keep the stages and
//! read points off the decreasing chain of cells, up to a stated depth.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::measure::{integrate, FinSuppFn, Measure, SubbasicConstraint};
use crate::monad::{FinFn, Idx};
use crate::semiring::{bool2, natural_order, Elem, FiniteSemiring, NaturalOrder};
use crate::space::{ensure_same, Clopen, Point, Space, Tail};
use crate::{Error, Result};

#[derive(Clone)]
enum Repr {
    /// Values above the bottom, at finitely many distinct points.
    Pointwise(FinSuppFn),
    /// A measure's stage family read through thread infima.
    Stages(Measure),
}

/// A function `X -> S` that is continuous for the down-set topology of the
/// natural order.
#[derive(Clone)]
pub struct ScottContinuousFn {
    order: Arc<NaturalOrder>,
    repr: Repr,
}

impl fmt::Debug for ScottContinuousFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Pointwise(g) => write!(f, "ScottContinuousFn({g:?})"),
            Repr::Stages(m) => write!(f, "ScottContinuousFn(stages to depth {})", m.certified_depth()),
        }
    }
}

/// A pointwise reading and how far it can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointValue {
    pub value: Elem,
    /// Deepest level inspected.
    pub level: usize,
    /// The chain is known to be constant from `level` on.
    pub stabilised: bool,
}

fn order_of(s: &FiniteSemiring) -> Result<Arc<NaturalOrder>> {
    Ok(Arc::new(natural_order(s)?))
}

/// `δ_μ`. Integrals become pointwise functions whose values are the infima of
/// the cell chains through their support points.
pub fn density(m: &Measure) -> Result<ScottContinuousFn> {
    let order = order_of(m.semiring())?;
    let repr = match m.finsupp() {
        Some(f) => {
            let mut support = Vec::new();
            for (p, _) in f.support() {
                let level = stabilisation_level(f.support().iter().map(|(q, _)| q), p)?;
                let v = chain_meet(&order, m, p, level)?;
                if v != m.semiring().zero() {
                    support.push((p.clone(), v));
                }
            }
            Repr::Pointwise(FinSuppFn::new(m.space().clone(), m.semiring().clone(), support)?)
        }
        None => Repr::Stages(m.clone()),
    };
    Ok(ScottContinuousFn { order, repr })
}

/// A pointwise function from finitely many values; everything else is the
/// bottom.
pub fn pointwise(f: FinSuppFn) -> Result<ScottContinuousFn> {
    Ok(ScottContinuousFn {
        order: order_of(f.semiring())?,
        repr: Repr::Pointwise(f.normalized()),
    })
}

/// The constant function `c`, kept as stages.
pub fn constant(space: Space, semiring: Arc<FiniteSemiring>, c: Elem, depth: usize) -> Result<ScottContinuousFn> {
    semiring.check(c)?;
    let order = order_of(&semiring)?;
    let sp = space.clone();
    let s = semiring.clone();
    let m = Measure::from_generator(space, semiring, depth, move |n| {
        let size = sp.level_size(n)? as Idx;
        FinFn::from_pairs(s.clone(), size, (0..size).map(|x| (x, c)))
    });
    Ok(ScottContinuousFn {
        order,
        repr: Repr::Stages(m),
    })
}

/// Least level from which `p`'s cell holds no other listed point.
fn stabilisation_level<'a>(points: impl Iterator<Item = &'a Point>, p: &Point) -> Result<usize> {
    let mut level = 0;
    for q in points {
        if let Some(l) = q.separation_level(p)? {
            level = level.max(l);
        }
    }
    Ok(level)
}

/// `⋀_{n ≤ depth} stage_n(p_n)`.
fn chain_meet(order: &NaturalOrder, m: &Measure, p: &Point, depth: usize) -> Result<Elem> {
    let chain = (0..=depth)
        .map(|n| Ok(m.stage_at(n)?.get(p.at(n)? as Idx)))
        .collect::<Result<Vec<_>>>()?;
    Ok(order.meet_all(chain).expect("chain is nonempty"))
}

impl ScottContinuousFn {
    pub fn space(&self) -> &Space {
        match &self.repr {
            Repr::Pointwise(f) => f.space(),
            Repr::Stages(m) => m.space(),
        }
    }

    pub fn semiring(&self) -> &Arc<FiniteSemiring> {
        match &self.repr {
            Repr::Pointwise(f) => f.semiring(),
            Repr::Stages(m) => m.semiring(),
        }
    }

    pub fn order(&self) -> &NaturalOrder {
        &self.order
    }

    pub fn certified_depth(&self) -> usize {
        match &self.repr {
            Repr::Pointwise(f) => integrate(f).certified_depth(),
            Repr::Stages(m) => m.certified_depth(),
        }
    }

    /// The finitely many points above the bottom, for pointwise functions.
    pub fn support(&self) -> Option<&FinSuppFn> {
        match &self.repr {
            Repr::Pointwise(f) => Some(f),
            Repr::Stages(_) => None,
        }
    }

    /// Level `n` join-table: `stage_at(n)(x) = ⋁_{p ∈ x} f(p)`.
    pub fn stage_at(&self, n: usize) -> Result<FinFn> {
        match &self.repr {
            Repr::Pointwise(f) => {
                let s = f.semiring();
                let mut out = FinFn::zero(s.clone(), self.space().level_size(n)? as Idx);
                for (p, v) in f.support() {
                    let x = p.at(n)? as Idx;
                    out.set(x, self.order.join(out.get(x), *v))?;
                }
                Ok(out)
            }
            Repr::Stages(m) => m.stage_at(n),
        }
    }

    /// Reads `f(p)` off the chain `stage_n(p_n)`, `n ≤ depth`.
    pub fn eval_pointwise(&self, p: &Point, depth: usize) -> Result<PointValue> {
        ensure_same(self.space(), p.space())?;
        let (stable_from, exact_rule) = match &self.repr {
            Repr::Pointwise(f) => (stabilisation_level(f.support().iter().map(|(q, _)| q), p)?, true),
            Repr::Stages(m) => (m.certified_depth(), false),
        };
        let chain = (0..=depth)
            .map(|n| Ok(self.stage_at(n)?.get(p.at(n)? as Idx)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointValue {
            value: self.order.meet_all(chain).expect("chain is nonempty"),
            level: depth,
            stabilised: exact_rule && depth >= stable_from,
        })
    }

    /// `f(p)` at the depth where it is known to be exact, or at the
    /// certified depth with a `stabilised: false` flag.
    pub fn value_at(&self, p: &Point) -> Result<PointValue> {
        let depth = match &self.repr {
            Repr::Pointwise(f) => stabilisation_level(f.support().iter().map(|(q, _)| q), p)?,
            Repr::Stages(m) => m.certified_depth(),
        };
        self.eval_pointwise(p, depth)
    }

    /// `∫_b f = ⋁` over `b`'s cells of the stage table at `b`'s level.
    pub fn integral(&self, b: &Clopen) -> Result<Elem> {
        ensure_same(self.space(), b.space())?;
        let stage = self.stage_at(b.level())?;
        Ok(self.order.join_all(
            stage
                .support()
                .filter(|(c, _)| b.cells().contains(&(*c as usize)))
                .map(|(_, v)| v),
        ))
    }

    /// One point per level-`level` cell: the function's own point when the
    /// cell holds one, else the least thread through the cell.
    pub fn representatives(&self, level: usize, cells: impl IntoIterator<Item = usize>) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        for c in cells {
            let own = match &self.repr {
                Repr::Pointwise(f) => f
                    .support()
                    .iter()
                    .map(|(p, _)| p)
                    .find(|p| p.at(level).ok() == Some(c))
                    .cloned(),
                Repr::Stages(_) => None,
            };
            match own {
                Some(p) => out.push(p),
                None => out.push(Point::through_cell(self.space().clone(), level, c, Tail::Least)?),
            }
        }
        Ok(out)
    }

    /// Level at which the pointwise support is resolved (each cell holds at
    /// most one point), or the certified depth for stage families.
    pub fn resolution_level(&self) -> usize {
        match &self.repr {
            Repr::Pointwise(f) => f.separation_level(),
            Repr::Stages(m) => m.certified_depth(),
        }
    }
}

/// `b ↦ ∫_b f`.
pub fn to_measure(f: &ScottContinuousFn) -> Measure {
    match &f.repr {
        Repr::Pointwise(g) => integrate(g),
        // fibre joins are fibre sums
        Repr::Stages(m) => m.clone(),
    }
}

/// Stage tables agree at every level `0..=d`.
pub fn functions_equal_to_depth(f: &ScottContinuousFn, g: &ScottContinuousFn, d: usize) -> Result<bool> {
    for n in 0..=d {
        if f.stage_at(n)? != g.stage_at(n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both sides of `∫f ≤ μ ⟺ f ≤ δ_μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisCheck {
    /// `∫_b f ≤ μ(b)` for every clopen up to `depth`.
    pub integral_side: bool,
    /// `f(p) ≤ δ_μ(p)` at every inspected point.
    pub pointwise_side: bool,
    /// Level actually inspected.
    pub depth: usize,
    pub witness: Option<String>,
}

impl GaloisCheck {
    pub fn agrees(&self) -> bool {
        self.integral_side == self.pointwise_side
    }
}

/// Evaluates both sides of the adjunction.
///
/// Clopens at a level are finite unions of cells and both sides are joins,
/// so the integral side is checked cell by cell at each level. When both
/// arguments are integrals the inspected depth is raised to the joint
/// separation level of their supports; below it neither side is exact.
/// The pointwise side inspects the support of a pointwise `f` (it is the
/// bottom elsewhere), and one representative per cell otherwise.
pub fn galois_holds(f: &ScottContinuousFn, m: &Measure, depth: usize) -> Result<GaloisCheck> {
    ensure_same(f.space(), m.space())?;
    if f.semiring() != m.semiring() {
        return Err(Error::Mismatch("function and measure use different semirings".into()));
    }
    let delta = density(m)?;
    let order = &f.order;
    let mut depth = depth;
    if let (Some(a), Some(b)) = (f.support(), m.finsupp()) {
        let joint = a.normalized().plus(&b.normalized())?;
        depth = depth.max(joint.separation_level());
    }

    let mut integral_side = true;
    let mut witness = None;
    'levels: for n in 0..=depth {
        let (fs, ms) = (f.stage_at(n)?, m.stage_at(n)?);
        for (c, v) in fs.support() {
            if !order.leq(v, ms.get(c)) {
                integral_side = false;
                witness = Some(format!(
                    "∫f = {} > {} = μ on cell {} at level {n}",
                    f.semiring().name(v),
                    f.semiring().name(ms.get(c)),
                    f.space().cell_name(n, c as usize)
                ));
                break 'levels;
            }
        }
    }

    let points: Vec<Point> = match f.support() {
        Some(g) => g.support().iter().map(|(p, _)| p.clone()).collect(),
        None => {
            let size = f.space().level_size(depth)?;
            f.representatives(depth, 0..size)?
        }
    };
    let mut pointwise_side = true;
    for p in &points {
        let (lhs, rhs) = match f.support() {
            Some(_) => (f.value_at(p)?.value, delta.value_at(p)?.value),
            None => (f.eval_pointwise(p, depth)?.value, delta.eval_pointwise(p, depth)?.value),
        };
        if !order.leq(lhs, rhs) {
            pointwise_side = false;
            if witness.is_none() || integral_side {
                witness = Some(format!(
                    "f({}) = {} > {} = δ_μ",
                    p.label(),
                    f.semiring().name(lhs),
                    f.semiring().name(rhs)
                ));
            }
            break;
        }
    }
    if integral_side == pointwise_side && integral_side {
        witness = None;
    }
    Ok(GaloisCheck {
        integral_side,
        pointwise_side,
        depth,
        witness,
    })
}

type CellGen = Arc<dyn Fn(usize) -> Result<BTreeSet<usize>> + Send + Sync>;

/// A closed subset of a space, given by the cells it meets at each level.
#[derive(Clone)]
pub struct ClosedSetFamily {
    space: Space,
    cells_at: CellGen,
    depth: usize,
}

impl fmt::Debug for ClosedSetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosedSetFamily(depth {})", self.depth)
    }
}

impl ClosedSetFamily {
    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn certified_depth(&self) -> usize {
        self.depth
    }

    pub fn cells_at(&self, n: usize) -> Result<BTreeSet<usize>> {
        if n > self.depth {
            return Err(Error::depth(n, self.depth));
        }
        (self.cells_at)(n)
    }

    /// The union of the given cells of one level.
    pub fn from_cells(space: Space, level: usize, cells: BTreeSet<usize>) -> Result<Self> {
        space.ensure_level(level)?;
        let sp = space.clone();
        let listed: Vec<usize> = cells.iter().copied().collect();
        Ok(ClosedSetFamily {
            depth: space.certified_depth(),
            cells_at: Arc::new(move |n| {
                if n >= level {
                    return Ok(sp.lift_cells(level, n, &listed)?.into_iter().collect());
                }
                listed.iter().map(|&c| sp.project(level, n, c)).collect()
            }),
            space,
        })
    }

    /// The Boolean measure `b ↦ [C ∩ b ≠ ∅]`.
    pub fn to_measure(&self) -> Measure {
        let this = self.clone();
        let s = Arc::new(bool2());
        Measure::from_generator(self.space.clone(), s.clone(), self.depth, move |n| {
            let size = this.space.level_size(n)? as Idx;
            FinFn::from_pairs(s.clone(), size, this.cells_at(n)?.into_iter().map(|c| (c as Idx, 1)))
        })
    }

    /// `C ∈ ◊b`, i.e. `μ_C ∈ ⟨b, {1}⟩`.
    pub fn in_diamond(&self, b: &Clopen) -> Result<bool> {
        SubbasicConstraint::new(b.clone(), [1]).holds(&self.to_measure())
    }

    /// `C ∈ □b`, i.e. `μ_C ∈ ⟨¬b, {0}⟩`.
    pub fn in_box(&self, b: &Clopen) -> Result<bool> {
        SubbasicConstraint::new(b.not(), [0]).holds(&self.to_measure())
    }

    /// `C ∩ b ≠ ∅`, read from the cells.
    pub fn meets(&self, b: &Clopen) -> Result<bool> {
        let cells = self.cells_at(b.level())?;
        Ok(cells.iter().any(|c| b.cells().contains(c)))
    }

    /// `C ⊆ b`, read from the cells.
    pub fn within(&self, b: &Clopen) -> Result<bool> {
        let cells = self.cells_at(b.level())?;
        Ok(cells.iter().all(|c| b.cells().contains(c)))
    }

    pub fn equal_to_depth(&self, other: &ClosedSetFamily, d: usize) -> Result<bool> {
        ensure_same(&self.space, &other.space)?;
        for n in 0..=d {
            if self.cells_at(n)? != other.cells_at(n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The closed set of a Boolean measure: at each level, the cells of
/// positive mass.
pub fn from_measure(m: &Measure) -> Result<ClosedSetFamily> {
    if m.semiring().as_ref() != &bool2() {
        return Err(Error::Mismatch(format!(
            "closed sets come from bool2 measures, not `{}`",
            m.semiring().label()
        )));
    }
    let mm = m.clone();
    Ok(ClosedSetFamily {
        space: m.space().clone(),
        depth: m.certified_depth(),
        cells_at: Arc::new(move |n| Ok(mm.stage_at(n)?.support().map(|(c, _)| c as usize).collect())),
    })
}

/// `{p}`.
pub fn singleton(p: &Point) -> ClosedSetFamily {
    let q = p.clone();
    ClosedSetFamily {
        space: p.space().clone(),
        depth: p.certified_depth(),
        cells_at: Arc::new(move |n| Ok(BTreeSet::from([q.at(n)?]))),
    }
}

/// Level-wise union.
pub fn union(space: &Space, sets: &[ClosedSetFamily]) -> Result<ClosedSetFamily> {
    for c in sets {
        ensure_same(space, &c.space)?;
    }
    let parts = sets.to_vec();
    Ok(ClosedSetFamily {
        space: space.clone(),
        depth: parts.iter().map(|c| c.depth).min().unwrap_or(space.certified_depth()),
        cells_at: Arc::new(move |n| {
            let mut out = BTreeSet::new();
            for c in &parts {
                out.extend(c.cells_at(n)?);
            }
            Ok(out)
        }),
    })
}
