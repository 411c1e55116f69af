use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ensure_same, Clopen, ContinuousMap, Space};
use crate::{Error, Result};

/// How a thread continues past its explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// Least element of each fibre (`0000…` on Cantor space).
    Least,
    /// Greatest element of each fibre (`1111…`, or `∞` on `nat_infty`).
    Greatest,
    /// No continuation: the point is certified only to its prefix depth.
    Stop,
}

/// Levels beyond the explicit data that are compared before two threads that
/// agree there are declared equal. Section tails of the builtin systems
/// either split within one step or never, so this is exact for them.
pub const SEPARATION_HORIZON: usize = 64;

/// A point of the limit: a thread `x_n ∈ X_n` with
/// `transition(x_{n+1}) = x_n`.
#[derive(Clone)]
pub struct Point {
    space: Space,
    thread: Thread,
}

#[derive(Clone)]
enum Thread {
    Section { prefix: Vec<usize>, tail: Tail },
    Image { map: ContinuousMap, source: Arc<Point> },
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({})", self.label())
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.separation_level(other), Ok(None))
    }
}

pub(crate) fn parse_bits(bits: &str) -> Result<usize> {
    if bits.len() > super::CANTOR_DEPTH {
        return Err(Error::malformed("bitstring", "too long"));
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => Err(Error::malformed("bitstring", format!("unexpected `{other}`"))),
    })
}

impl Point {
    /// A thread given by its values at levels `0..prefix.len()`.
    pub fn new(space: Space, prefix: Vec<usize>, tail: Tail) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::malformed("point", "thread prefix must include level 0"));
        }
        for (n, &x) in prefix.iter().enumerate() {
            let size = space.level_size(n)?;
            if x >= size {
                return Err(Error::malformed(
                    "point",
                    format!("element {x} out of range at level {n} (size {size})"),
                ));
            }
            if n > 0 && space.transition(n - 1, x)? != prefix[n - 1] {
                return Err(Error::malformed(
                    "point",
                    format!("thread is incompatible between levels {} and {n}", n - 1),
                ));
            }
        }
        Ok(Point {
            space,
            thread: Thread::Section { prefix, tail },
        })
    }

    /// The thread through the level-`level` cell `x`.
    pub fn through_cell(space: Space, level: usize, x: usize, tail: Tail) -> Result<Self> {
        if x >= space.level_size(level)? {
            return Err(Error::malformed("point", format!("cell {x} out of range at level {level}")));
        }
        let mut prefix = vec![0; level + 1];
        prefix[level] = x;
        for n in (0..level).rev() {
            prefix[n] = space.transition(n, prefix[n + 1])?;
        }
        Point::new(space, prefix, tail)
    }

    /// Cantor point with the given leading bits.
    pub fn cantor(space: Space, bits: &str, tail: Tail) -> Result<Self> {
        let x = parse_bits(bits)?;
        Point::through_cell(space, bits.len(), x, tail)
    }

    /// The natural number `k` in `nat_infty`.
    pub fn nat(space: Space, k: usize) -> Result<Self> {
        Point::through_cell(space, k + 1, k, Tail::Least)
    }

    /// The point at infinity of `nat_infty` (the all-`*` thread).
    pub fn nat_infinity(space: Space) -> Result<Self> {
        Point::new(space, vec![0], Tail::Greatest)
    }

    pub(crate) fn image(map: ContinuousMap, source: Point) -> Self {
        Point {
            space: map.target().clone(),
            thread: Thread::Image {
                map,
                source: Arc::new(source),
            },
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn certified_depth(&self) -> usize {
        match &self.thread {
            Thread::Section { prefix, tail: Tail::Stop } => prefix.len() - 1,
            Thread::Section { .. } => self.space.certified_depth(),
            Thread::Image { map, source } => map.target_depth(source.certified_depth()),
        }
    }

    /// Explicit prefix and tail rule, unless the point is an image.
    pub fn section(&self) -> Option<(&[usize], Tail)> {
        match &self.thread {
            Thread::Section { prefix, tail } => Some((prefix, *tail)),
            Thread::Image { .. } => None,
        }
    }

    /// Number of levels given explicitly (the rest is generated).
    fn explicit_len(&self) -> usize {
        match &self.thread {
            Thread::Section { prefix, .. } => prefix.len(),
            Thread::Image { source, .. } => source.explicit_len(),
        }
    }

    /// Thread element at level `n`.
    pub fn at(&self, n: usize) -> Result<usize> {
        match &self.thread {
            Thread::Section { prefix, tail } => {
                if let Some(&x) = prefix.get(n) {
                    return Ok(x);
                }
                if *tail == Tail::Stop {
                    return Err(Error::depth(n, prefix.len() - 1));
                }
                self.space.ensure_level(n)?;
                let mut x = *prefix.last().expect("prefix is nonempty");
                for level in prefix.len() - 1..n {
                    let fibre = self.space.fibre(level, x)?;
                    x = match tail {
                        Tail::Least => fibre[0],
                        _ => *fibre.last().expect("transitions are surjective"),
                    };
                }
                Ok(x)
            }
            Thread::Image { map, source } => {
                let d = self.certified_depth();
                if n > d {
                    return Err(Error::depth(n, d));
                }
                map.stage(n, source.at(map.factor_level(n))?)
            }
        }
    }

    /// Thread values at levels `0..=depth`.
    pub fn prefix(&self, depth: usize) -> Result<Vec<usize>> {
        (0..=depth).map(|n| self.at(n)).collect()
    }

    /// Least level at which the two threads differ; `None` if they are the
    /// same point. Bounded threads that agree to their full depth cannot be
    /// told apart and yield `DepthExhausted`.
    pub fn separation_level(&self, other: &Point) -> Result<Option<usize>> {
        ensure_same(&self.space, &other.space)?;
        let explicit = self.explicit_len().max(other.explicit_len());
        if let (
            Thread::Section { tail: ta, .. },
            Thread::Section { tail: tb, .. },
        ) = (&self.thread, &other.thread)
        {
            if ta == tb && *ta != Tail::Stop {
                // identical continuation rules from the same element
                for n in 0..explicit {
                    if self.at(n)? != other.at(n)? {
                        return Ok(Some(n));
                    }
                }
                return Ok(None);
            }
        }
        let depth = self.certified_depth().min(other.certified_depth());
        let horizon = explicit.saturating_add(SEPARATION_HORIZON);
        for n in 0..=depth.min(horizon) {
            if self.at(n)? != other.at(n)? {
                return Ok(Some(n));
            }
        }
        if depth < horizon {
            Err(Error::depth(depth + 1, depth))
        } else {
            Ok(None)
        }
    }

    /// Membership in a clopen, read at the clopen's level.
    pub fn is_in(&self, c: &Clopen) -> Result<bool> {
        ensure_same(&self.space, c.space())?;
        let d = self.certified_depth();
        if c.level() > d {
            return Err(Error::depth(c.level(), d));
        }
        Ok(c.cells().contains(&self.at(c.level())?))
    }

    /// Short display form, e.g. `0100…` on Cantor space.
    pub fn label(&self) -> String {
        let shown = self.explicit_len().min(self.certified_depth().saturating_add(1)).max(1);
        let cells: Vec<String> = (0..shown)
            .filter_map(|n| self.at(n).ok().map(|x| (n, x)))
            .map(|(n, x)| self.space.cell_name(n, x))
            .collect();
        let tail = match &self.thread {
            Thread::Section { tail: Tail::Stop, .. } => "",
            _ => "…",
        };
        format!("{}{tail}", cells.last().cloned().unwrap_or_default())
    }
}

/// Separation level of a finite family: least level at which all threads
/// are pairwise distinct.
pub fn joint_separation(points: &[Point]) -> Result<usize> {
    let mut level = 0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            match p.separation_level(q)? {
                Some(l) => level = level.max(l),
                None => {
                    return Err(Error::malformed(
                        "point family",
                        format!("{} occurs twice", p.label()),
                    ))
                }
            }
        }
    }
    Ok(level)
}
