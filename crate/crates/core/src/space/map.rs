use std::fmt;
use std::sync::Arc;

use super::{ensure_same, Clopen, InverseSystem, Point, Space, UNBOUNDED};
use crate::report::{LawOutcome, LawReport, Witness};
use crate::{Error, Result};

type FactorFn = Arc<dyn Fn(usize) -> usize + Send + Sync>;
type StageFn = Arc<dyn Fn(usize, usize) -> usize + Send + Sync>;

/// A continuous map given stage-wise: target level `m` is computed from
/// source level `factor_level(m)` by `stage(m, -)`. Factor levels are
/// monotone, and stage maps commute with the transitions on both sides.
#[derive(Clone)]
pub struct ContinuousMap {
    label: String,
    source: Space,
    target: Space,
    factor: FactorFn,
    stage: StageFn,
    depth: usize,
}

impl fmt::Debug for ContinuousMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ContinuousMap({}: {} -> {})",
            self.label,
            self.source.describe(),
            self.target.describe()
        )
    }
}

impl ContinuousMap {
    /// `depth` bounds the target levels at which the map is defined.
    pub fn new(
        label: impl Into<String>,
        source: Space,
        target: Space,
        depth: usize,
        factor_level: impl Fn(usize) -> usize + Send + Sync + 'static,
        stage: impl Fn(usize, usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        ContinuousMap {
            label: label.into(),
            depth: depth.min(target.certified_depth()),
            source,
            target,
            factor: Arc::new(factor_level),
            stage: Arc::new(stage),
        }
    }

    pub fn identity(space: Space) -> Self {
        let depth = space.certified_depth();
        ContinuousMap::new("id", space.clone(), space, depth, |m| m, |_, x| x)
    }

    /// A map into the discrete space `finite(k)` that factors through
    /// `level`: `values[x]` is the image of the level-`level` cell `x`.
    pub fn to_finite(source: Space, level: usize, k: usize, values: Vec<usize>) -> Result<Self> {
        let size = source.level_size(level)?;
        if values.len() != size || values.iter().any(|&v| v >= k) {
            return Err(Error::malformed(
                "map to finite space",
                format!("need {size} values in 0..{k}"),
            ));
        }
        let target = InverseSystem::finite(k)?;
        Ok(ContinuousMap::new(
            format!("to_finite:{k}@{level}"),
            source,
            target,
            UNBOUNDED,
            move |_| level,
            move |_, x| values[x],
        ))
    }

    /// Characteristic map of a clopen into `finite(2)`.
    pub fn indicator(c: &Clopen) -> Result<Self> {
        let size = c.space().level_size(c.level())?;
        let values = (0..size).map(|x| usize::from(c.cells().contains(&x))).collect();
        Self::to_finite(c.space().clone(), c.level(), 2, values)
    }

    /// First coordinate of Cantor space, `cantor -> finite(2)`.
    pub fn first_bit(cantor: Space) -> Result<Self> {
        Self::to_finite(cantor, 1, 2, vec![0, 1])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn certified_depth(&self) -> usize {
        self.depth
    }

    pub fn factor_level(&self, m: usize) -> usize {
        (self.factor)(m)
    }

    /// Image at target level `m` of the source element `x` at
    /// `factor_level(m)`.
    pub fn stage(&self, m: usize, x: usize) -> Result<usize> {
        if m > self.depth {
            return Err(Error::depth(m, self.depth));
        }
        let n = self.factor_level(m);
        let size = self.source.level_size(n)?;
        if x >= size {
            return Err(Error::malformed(
                "map argument",
                format!("{x} is not an element of source level {n}"),
            ));
        }
        Ok((self.stage)(m, x))
    }

    /// Deepest target level computable from source data certified to
    /// `source_depth`.
    pub fn target_depth(&self, source_depth: usize) -> usize {
        if source_depth >= self.source.certified_depth() || self.factor_level(self.depth) <= source_depth {
            return self.depth;
        }
        // factor levels are monotone: binary search the last admissible m
        let (mut lo, mut hi) = (0usize, self.depth);
        if self.factor_level(0) > source_depth {
            return 0;
        }
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.factor_level(mid) <= source_depth {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        ensure_same(&self.source, p.space())?;
        Ok(Point::image(self.clone(), p.clone()))
    }

    /// Preimage of a target clopen, presented at `factor_level(c.level)`.
    pub fn preimage(&self, c: &Clopen) -> Result<Clopen> {
        ensure_same(&self.target, c.space())?;
        let n = self.factor_level(c.level());
        let size = self.source.level_size(n)?;
        let mut cells = Vec::new();
        for x in 0..size {
            if c.cells().contains(&self.stage(c.level(), x)?) {
                cells.push(x);
            }
        }
        Clopen::new(self.source.clone(), n, cells)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &ContinuousMap) -> Result<ContinuousMap> {
        ensure_same(&self.target, then.source())?;
        let (f, g) = (self.clone(), then.clone());
        let depth = then.target_depth_limit(self);
        let g_factor = g.factor.clone();
        Ok(ContinuousMap::new(
            format!("{}∘{}", g.label, f.label),
            f.source.clone(),
            g.target.clone(),
            depth,
            {
                let (f, g) = (f.clone(), g.clone());
                move |m| f.factor_level(g.factor_level(m))
            },
            move |m, x| {
                let mid = g_factor(m);
                (g.stage)(m, (f.stage)(mid, x))
            },
        ))
    }

    fn target_depth_limit(&self, inner: &ContinuousMap) -> usize {
        self.target_depth(inner.depth)
    }

    /// Checks monotone factor levels and commutation with transitions for
    /// target levels `0..=depth`.
    pub fn validate(&self, depth: usize) -> Result<LawReport> {
        if depth > self.depth {
            return Err(Error::depth(depth, self.depth));
        }
        let mut report = LawReport::new(format!("map {}", self.label));
        let mut checked = 0;
        for m in 0..depth {
            let (lo, hi) = (self.factor_level(m), self.factor_level(m + 1));
            if hi < lo {
                report.push(LawOutcome::fail(
                    "factor-levels-monotone",
                    m as u64 + 1,
                    Witness::new(vec![m.to_string()], format!("factor level drops from {lo} to {hi}")),
                ));
                return Ok(report);
            }
            for x in 0..self.source.level_size(hi)? {
                checked += 1;
                let down = self.target.transition(m, self.stage(m + 1, x)?)?;
                let across = self.stage(m, self.source.project(hi, lo, x)?)?;
                if down != across {
                    report.push(LawOutcome::fail(
                        "stages-commute",
                        checked,
                        Witness::new(
                            vec![m.to_string(), self.source.cell_name(hi, x)],
                            format!("at target level {m} the square over source cell {} does not commute", self.source.cell_name(hi, x)),
                        ),
                    ));
                    return Ok(report);
                }
            }
        }
        report.push(LawOutcome::pass("stages-commute", checked));
        Ok(report)
    }
}
