//! JSON descriptors for points and measures, plus a parse helper that keeps
//! serde's line and column. Semirings, semimodules, spaces and clopens carry
//! their own descriptor types next to their definitions.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::measure::{dirac, integrate, FinSuppFn, Measure, Provenance};
use crate::monad::FinFn;
use crate::semiring::{Elem, FiniteSemiring};
use crate::space::{Point, Space, Tail};
use crate::{Error, Result};

/// Parses JSON, reporting the position of the first error.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &'static str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::malformed(what, format!("line {} column {}: {e}", e.line(), e.column()))
    })
}

fn default_tail() -> Tail {
    Tail::Least
}

/// A point as the thread through one cell, or a Cantor bitstring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDescriptor {
    Cell {
        level: usize,
        cell: usize,
        #[serde(default = "default_tail")]
        tail: Tail,
    },
    Bits {
        bits: String,
        #[serde(default = "default_tail")]
        tail: Tail,
    },
}

pub fn load_point(space: &Space, desc: &PointDescriptor) -> Result<Point> {
    match desc {
        PointDescriptor::Cell { level, cell, tail } => Point::through_cell(space.clone(), *level, *cell, *tail),
        PointDescriptor::Bits { bits, tail } => Point::cantor(space.clone(), bits, *tail),
    }
}

/// Descriptor of a point with an explicit thread; images are resolved to
/// their prefix at `depth` and stop there.
pub fn point_descriptor(p: &Point, depth: usize) -> Result<PointDescriptor> {
    Ok(match p.section() {
        Some((prefix, tail)) => PointDescriptor::Cell {
            level: prefix.len() - 1,
            cell: *prefix.last().expect("prefix is nonempty"),
            tail,
        },
        None => {
            let depth = depth.min(p.certified_depth());
            PointDescriptor::Cell {
                level: depth,
                cell: p.at(depth)?,
                tail: Tail::Stop,
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportEntry {
    pub point: PointDescriptor,
    pub value: Elem,
}

/// `{ "provenance", "support": [..], "stages": [[..], ..] }`; `stages[n]`
/// lists the level-`n` values densely.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureDescriptor {
    pub provenance: Provenance,
    #[serde(default)]
    pub support: Vec<SupportEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<Vec<Vec<Elem>>>,
}

pub fn load_measure(space: &Space, semiring: &Arc<FiniteSemiring>, desc: &MeasureDescriptor) -> Result<Measure> {
    match desc.provenance {
        Provenance::Dirac => match desc.support.as_slice() {
            [entry] if entry.value == semiring.one() => dirac(semiring.clone(), &load_point(space, &entry.point)?),
            _ => Err(Error::malformed("measure", "a dirac measure has one support point with value one")),
        },
        Provenance::FinSupp => {
            let support = desc
                .support
                .iter()
                .map(|e| Ok((load_point(space, &e.point)?, semiring.check(e.value)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(integrate(&FinSuppFn::new(space.clone(), semiring.clone(), support)?))
        }
        Provenance::Stages => {
            let stages = desc
                .stages
                .as_ref()
                .ok_or_else(|| Error::malformed("measure", "stage provenance needs `stages`"))?;
            let levels = stages
                .iter()
                .map(|vals| FinFn::from_values(semiring.clone(), vals))
                .collect::<Result<Vec<_>>>()?;
            Measure::from_stages(space.clone(), semiring.clone(), levels)
        }
    }
}

/// Support entries for integrals; explicit stages `0..=depth` otherwise.
pub fn measure_descriptor(m: &Measure, depth: usize) -> Result<MeasureDescriptor> {
    match m.finsupp() {
        Some(f) => Ok(MeasureDescriptor {
            provenance: m.provenance(),
            support: f
                .support()
                .iter()
                .map(|(p, v)| Ok(SupportEntry { point: point_descriptor(p, depth)?, value: *v }))
                .collect::<Result<_>>()?,
            stages: None,
        }),
        None => Ok(MeasureDescriptor {
            provenance: Provenance::Stages,
            support: vec![],
            stages: Some((0..=depth).map(|n| Ok(m.stage_at(n)?.values())).collect::<Result<_>>()?),
        }),
    }
}
