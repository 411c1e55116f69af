//! Boolean spaces presented as ω-indexed inverse chains of finite sets
//! `X_0 <- X_1 <- X_2 <- ...` with surjective transitions.
//!
//! Level `n` elements are indices `0..level_size(n)`. A clopen is a set of
//! cells at some level; a point is a compatible thread.

mod clopen;
mod map;
mod point;

pub use clopen::{atoms, Clopen};
pub use map::ContinuousMap;
pub use point::{joint_separation, Point, Tail, SEPARATION_HORIZON};

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::report::{LawOutcome, LawReport, Witness};
use crate::{Error, Result};

/// Shared handle to an inverse system.
pub type Space = Arc<InverseSystem>;

/// Depth reported by systems whose levels are defined for every `n`.
pub const UNBOUNDED: usize = usize::MAX;

/// Cantor levels are bitstrings packed into `usize`.
const CANTOR_DEPTH: usize = usize::BITS as usize - 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InverseSystem {
    /// Level `n` is `{0,1}^n`, read as a number with the first bit most
    /// significant; the transition drops the last bit.
    Cantor,
    /// Level `n` is `{0, .., n-1, *}` with `*` at index `n`; the transition
    /// sends `n` and `*` to `*`. The limit is the one-point compactification
    /// of the naturals.
    NatInfty,
    /// Every level is `{0..k}`, transitions are identities.
    Finite { k: usize },
    /// Level `n` is `f_0 × .. × f_{n-1}` over the factor list repeated
    /// cyclically; the transition drops the last coordinate.
    Product { factors: Vec<usize> },
    /// Explicit levels: `transitions[n]` maps level `n + 1` to level `n`.
    Table {
        sizes: Vec<usize>,
        transitions: Vec<Vec<usize>>,
    },
}

impl InverseSystem {
    pub fn cantor() -> Space {
        Arc::new(InverseSystem::Cantor)
    }

    pub fn nat_infty() -> Space {
        Arc::new(InverseSystem::NatInfty)
    }

    pub fn finite(k: usize) -> Result<Space> {
        InverseSystem::Finite { k }.checked()
    }

    pub fn product(factors: Vec<usize>) -> Result<Space> {
        InverseSystem::Product { factors }.checked()
    }

    /// An explicitly tabulated system. Shapes are checked here; surjectivity
    /// is left to [`InverseSystem::validate`].
    pub fn table(sizes: Vec<usize>, transitions: Vec<Vec<usize>>) -> Result<InverseSystem> {
        let sys = InverseSystem::Table { sizes, transitions };
        sys.check_shape()?;
        Ok(sys)
    }

    /// Builds a system from a builtin name (`cantor`, `nat_infty`,
    /// `finite:k`, `product:a,b,..`).
    pub fn builtin(text: &str) -> Result<Space> {
        let (name, params) = text.split_once(':').unwrap_or((text, ""));
        let ints = || {
            params
                .split(',')
                .filter(|p| !p.is_empty())
                .map(|p| {
                    p.trim().parse::<usize>().map_err(|_| Error::InvalidParameter {
                        name: name.to_string(),
                        detail: format!("`{p}` is not a non-negative integer"),
                    })
                })
                .collect::<Result<Vec<_>>>()
        };
        match name {
            "cantor" => Ok(Self::cantor()),
            "nat_infty" => Ok(Self::nat_infty()),
            "finite" => match ints()?.as_slice() {
                [k] => Self::finite(*k),
                other => Err(Error::InvalidParameter {
                    name: "finite".into(),
                    detail: format!("expected one size, got {other:?}"),
                }),
            },
            "product" => Self::product(ints()?),
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }

    /// Shape check for descriptor-built systems.
    pub fn checked(self) -> Result<Space> {
        self.check_shape()?;
        Ok(Arc::new(self))
    }

    fn check_shape(&self) -> Result<()> {
        match self {
            InverseSystem::Finite { k } if *k < 1 => Err(Error::InvalidParameter {
                name: "finite".into(),
                detail: "k must be at least 1".into(),
            }),
            InverseSystem::Product { factors } if factors.is_empty() || factors.contains(&0) => {
                Err(Error::InvalidParameter {
                    name: "product".into(),
                    detail: "factors must be a nonempty list of positive sizes".into(),
                })
            }
            InverseSystem::Table { sizes, transitions } => {
                if sizes.is_empty() || sizes[0] == 0 {
                    return Err(Error::malformed("space table", "level 0 must be nonempty"));
                }
                if transitions.len() + 1 != sizes.len() {
                    return Err(Error::malformed(
                        "space table",
                        format!("{} levels need {} transitions", sizes.len(), sizes.len() - 1),
                    ));
                }
                for (n, t) in transitions.iter().enumerate() {
                    if t.len() != sizes[n + 1] {
                        return Err(Error::malformed(
                            "space table",
                            format!("transition {n} has {} entries for level size {}", t.len(), sizes[n + 1]),
                        ));
                    }
                    if let Some(x) = t.iter().find(|&&x| x >= sizes[n]) {
                        return Err(Error::malformed(
                            "space table",
                            format!("transition {n} hits {x}, outside level {n} of size {}", sizes[n]),
                        ));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Deepest level at which this system is defined.
    pub fn certified_depth(&self) -> usize {
        match self {
            InverseSystem::Cantor => CANTOR_DEPTH,
            InverseSystem::NatInfty | InverseSystem::Finite { .. } => UNBOUNDED,
            InverseSystem::Product { factors } => {
                if factors.iter().all(|&f| f == 1) {
                    return UNBOUNDED;
                }
                let (mut size, mut n) = (1usize, 0);
                while let Some(s) = size.checked_mul(factors[n % factors.len()]).filter(|&s| s <= 1 << CANTOR_DEPTH) {
                    size = s;
                    n += 1;
                }
                n
            }
            InverseSystem::Table { sizes, .. } => sizes.len() - 1,
        }
    }

    pub fn ensure_level(&self, n: usize) -> Result<()> {
        let d = self.certified_depth();
        if n > d {
            Err(Error::depth(n, d))
        } else {
            Ok(())
        }
    }

    pub fn level_size(&self, n: usize) -> Result<usize> {
        self.ensure_level(n)?;
        Ok(match self {
            InverseSystem::Cantor => 1usize << n,
            InverseSystem::NatInfty => n + 1,
            InverseSystem::Finite { k } => *k,
            InverseSystem::Product { factors } => {
                (0..n).map(|i| factors[i % factors.len()]).product()
            }
            InverseSystem::Table { sizes, .. } => sizes[n],
        })
    }

    /// Image at level `n` of the level-`(n+1)` element `x`.
    pub fn transition(&self, n: usize, x: usize) -> Result<usize> {
        self.ensure_level(n + 1)?;
        Ok(match self {
            InverseSystem::Cantor => x >> 1,
            InverseSystem::NatInfty => x.min(n),
            InverseSystem::Finite { .. } => x,
            InverseSystem::Product { factors } => x / factors[n % factors.len()],
            InverseSystem::Table { transitions, .. } => transitions[n][x],
        })
    }

    /// Image of the level-`from` element `x` at the coarser level `to`.
    pub fn project(&self, from: usize, to: usize, mut x: usize) -> Result<usize> {
        debug_assert!(to <= from);
        for n in (to..from).rev() {
            x = self.transition(n, x)?;
        }
        Ok(x)
    }

    /// Level-`(n+1)` elements over the level-`n` element `x`, ascending.
    pub fn fibre(&self, n: usize, x: usize) -> Result<Vec<usize>> {
        self.ensure_level(n + 1)?;
        Ok(match self {
            InverseSystem::Cantor => vec![2 * x, 2 * x + 1],
            InverseSystem::NatInfty => {
                if x < n {
                    vec![x]
                } else {
                    vec![n, n + 1]
                }
            }
            InverseSystem::Finite { .. } => vec![x],
            InverseSystem::Product { factors } => {
                let f = factors[n % factors.len()];
                (x * f..(x + 1) * f).collect()
            }
            InverseSystem::Table { transitions, .. } => transitions[n]
                .iter()
                .enumerate()
                .filter(|&(_, &y)| y == x)
                .map(|(i, _)| i)
                .collect(),
        })
    }

    /// All level-`to` elements over the level-`from` set `cells`.
    pub fn lift_cells(&self, from: usize, to: usize, cells: &[usize]) -> Result<Vec<usize>> {
        let mut cur = cells.to_vec();
        for n in from..to {
            let mut next = Vec::with_capacity(cur.len() * 2);
            for &x in &cur {
                next.extend(self.fibre(n, x)?);
            }
            cur = next;
        }
        cur.sort_unstable();
        Ok(cur)
    }

    /// Display name of an element, e.g. `"01"` on Cantor space or `*` on
    /// `nat_infty`.
    pub fn cell_name(&self, n: usize, x: usize) -> String {
        match self {
            InverseSystem::Cantor => {
                if n == 0 {
                    "ε".into()
                } else {
                    format!("{x:0n$b}")
                }
            }
            InverseSystem::NatInfty if x == n => "*".into(),
            _ => x.to_string(),
        }
    }

    /// Checks every transition up to `depth` for surjectivity.
    pub fn validate(&self, depth: usize) -> Result<LawReport> {
        self.ensure_level(depth)?;
        let mut report = LawReport::new(format!("inverse system {}", self.describe()));
        if self.level_size(0)? == 0 {
            report.push(LawOutcome::fail(
                "level-0-nonempty",
                1,
                Witness::new(vec![], "level 0 is empty"),
            ));
            return Ok(report);
        }
        for n in 0..depth {
            let lo = self.level_size(n)?;
            let hi = self.level_size(n + 1)?;
            let mut hit = vec![false; lo];
            for y in 0..hi {
                hit[self.transition(n, y)?] = true;
            }
            let law = format!("transition-{n}-surjective");
            match hit.iter().position(|&h| !h) {
                Some(x) => report.push(LawOutcome::fail(
                    law,
                    hi as u64,
                    Witness::new(
                        vec![self.cell_name(n, x)],
                        format!("level-{n} element {} is missed by the transition from level {}", self.cell_name(n, x), n + 1),
                    ),
                )),
                None => report.push(LawOutcome::pass(law, hi as u64)),
            }
        }
        Ok(report)
    }

    pub fn describe(&self) -> String {
        match self {
            InverseSystem::Cantor => "cantor".into(),
            InverseSystem::NatInfty => "nat_infty".into(),
            InverseSystem::Finite { k } => format!("finite:{k}"),
            InverseSystem::Product { factors } => format!(
                "product:{}",
                factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(",")
            ),
            InverseSystem::Table { sizes, .. } => format!("table[{} levels]", sizes.len()),
        }
    }
}

/// Structural equality of two space handles.
pub fn same_space(a: &Space, b: &Space) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn ensure_same(a: &Space, b: &Space) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::Mismatch(format!(
            "spaces {} and {}",
            a.describe(),
            b.describe()
        )))
    }
}
