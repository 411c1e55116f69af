//! Profinite semirings as inverse chains of finite semirings, and the
//! stage-wise test for joint continuity of an action on a finite discrete
//! module.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{nat_sat, Elem, FiniteSemiring};
use crate::report::{LawOutcome, LawReport, Witness};
use crate::space::InverseSystem;
use crate::{Error, Result};

/// `stage(0) <- stage(1) <- ...` with surjective homomorphisms between
/// consecutive stages, materialised up to `exactness_depth`.
#[derive(Clone)]
pub struct ProfiniteSemiringChain {
    label: String,
    stages: Vec<Arc<FiniteSemiring>>,
    /// `quotients[n]` maps `stage(n + 1)` onto `stage(n)`.
    quotients: Vec<Vec<Elem>>,
}

impl fmt::Debug for ProfiniteSemiringChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProfiniteSemiringChain")
            .field("label", &self.label)
            .field("exactness_depth", &self.exactness_depth())
            .finish()
    }
}

impl ProfiniteSemiringChain {
    /// Checks that every quotient is a surjective semiring homomorphism.
    pub fn new(
        label: impl Into<String>,
        stages: Vec<Arc<FiniteSemiring>>,
        quotients: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        let label = label.into();
        if stages.is_empty() || quotients.len() + 1 != stages.len() {
            return Err(Error::malformed(
                "semiring chain",
                format!("{} stages need {} quotient maps", stages.len(), stages.len().saturating_sub(1)),
            ));
        }
        let chain = ProfiniteSemiringChain { label, stages, quotients };
        let report = chain.validate(chain.exactness_depth())?;
        if let Some(fail) = report.failures().next() {
            return Err(Error::LawViolation {
                label: chain.label.clone(),
                law: fail.law.clone(),
                detail: fail.witness.as_ref().map(|w| w.detail.clone()).unwrap_or_default(),
            });
        }
        Ok(chain)
    }

    /// `stage(n) = nat_sat(n + 1)`, whose limit is `(N∞, +, ·)`. Stage `n` has
    /// the numbers `0..=n` and `⊤`; the quotient sends `n + 1` and `⊤` to `⊤`.
    pub fn nat_infty(depth: usize) -> Self {
        let stages = (0..=depth).map(|n| Arc::new(nat_sat(n + 1))).collect();
        let quotients = (0..depth)
            .map(|n| (0..n + 3).map(|k| k.min(n + 1)).collect())
            .collect();
        Self::new("N∞", stages, quotients).expect("saturation quotients are homomorphisms")
    }

    /// The constant chain at a finite semiring.
    pub fn constant(s: Arc<FiniteSemiring>, depth: usize) -> Self {
        let quotients = (0..depth).map(|_| s.elements().collect()).collect();
        let label = format!("const({})", s.label());
        Self::new(label, vec![s; depth + 1], quotients).expect("identity maps are homomorphisms")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn exactness_depth(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn stage(&self, n: usize) -> Result<&Arc<FiniteSemiring>> {
        self.stages
            .get(n)
            .ok_or_else(|| Error::depth(n, self.exactness_depth()))
    }

    /// Image in `stage(n)` of `x` in `stage(n + 1)`.
    pub fn quotient(&self, n: usize, x: Elem) -> Result<Elem> {
        let q = self
            .quotients
            .get(n)
            .ok_or_else(|| Error::depth(n + 1, self.exactness_depth()))?;
        Ok(q[x])
    }

    /// The underlying profinite space of the chain.
    pub fn space(&self) -> InverseSystem {
        InverseSystem::table(
            self.stages.iter().map(|s| s.size()).collect(),
            self.quotients.clone(),
        )
        .expect("quotients are surjective")
    }

    /// Checks that the quotients up to `depth` are surjective homomorphisms.
    pub fn validate(&self, depth: usize) -> Result<LawReport> {
        if depth > self.exactness_depth() {
            return Err(Error::depth(depth, self.exactness_depth()));
        }
        let mut report = LawReport::new(format!("semiring chain `{}`", self.label));
        for n in 0..depth {
            let (lo, hi, q) = (&self.stages[n], &self.stages[n + 1], &self.quotients[n]);
            if q.len() != hi.size() || q.iter().any(|&x| x >= lo.size()) {
                return Err(Error::malformed(
                    "semiring chain",
                    format!("quotient {n} is not a map from stage {} to stage {n}", n + 1),
                ));
            }
            let law = format!("quotient-{n}-homomorphism");
            let bad_const = [(hi.zero(), lo.zero(), "zero"), (hi.one(), lo.one(), "one")]
                .into_iter()
                .find(|&(h, l, _)| q[h] != l);
            let bad_op = hi.elements().flat_map(|a| hi.elements().map(move |b| (a, b))).find(|&(a, b)| {
                q[hi.add(a, b)] != lo.add(q[a], q[b]) || q[hi.mul(a, b)] != lo.mul(q[a], q[b])
            });
            match (bad_const, bad_op) {
                (Some((_, _, what)), _) => report.push(LawOutcome::fail(
                    law,
                    1,
                    Witness::new(vec![what.into()], format!("{what} is not preserved")),
                )),
                (None, Some((a, b))) => report.push(LawOutcome::fail(
                    law,
                    1,
                    Witness::new(
                        vec![hi.name(a).into(), hi.name(b).into()],
                        format!("q does not commute with + or · at ({}, {})", hi.name(a), hi.name(b)),
                    ),
                )),
                (None, None) => report.push(LawOutcome::pass(law, (hi.size() * hi.size()) as u64)),
            }
            let surj = format!("quotient-{n}-surjective");
            match lo.elements().find(|x| !q.contains(x)) {
                Some(x) => report.push(LawOutcome::fail(
                    surj,
                    lo.size() as u64,
                    Witness::new(vec![lo.name(x).into()], format!("{} has no preimage", lo.name(x))),
                )),
                None => report.push(LawOutcome::pass(surj, lo.size() as u64)),
            }
        }
        Ok(report)
    }
}

/// An action of a profinite semiring chain on a finite discrete module.
///
/// `action_at(n, s, a)` is the action of the limit point that represents the
/// cell `s` of `stage(n)` (for `N∞` the cell `⊤` is represented by `∞`). An
/// action that is jointly continuous factors through some stage, so these
/// values eventually stop depending on the representative.
#[derive(Clone)]
pub struct StageAction {
    chain: ProfiniteSemiringChain,
    module_names: Vec<String>,
    action_at: Arc<dyn Fn(usize, Elem, Elem) -> Elem + Send + Sync>,
}

impl fmt::Debug for StageAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StageAction")
            .field("chain", &self.chain)
            .field("module", &self.module_names)
            .finish()
    }
}

impl StageAction {
    pub fn new(
        chain: ProfiniteSemiringChain,
        module_names: Vec<String>,
        action_at: impl Fn(usize, Elem, Elem) -> Elem + Send + Sync + 'static,
    ) -> Self {
        StageAction {
            chain,
            module_names,
            action_at: Arc::new(action_at),
        }
    }

    /// `N∞` acting on the chain `{0 < 1 < ω}` by `n·a = a + ... + a` and
    /// `∞·0 = 0`, `∞·1 = ∞·ω = ω`.
    pub fn nat_infty_on_three_chain(depth: usize) -> Self {
        let chain = ProfiniteSemiringChain::nat_infty(depth);
        StageAction::new(chain, vec!["0".into(), "1".into(), "ω".into()], |n, s, a| {
            let top = n + 1;
            match (s, a) {
                (0, _) | (_, 0) => 0,
                (s, 1) if s == top => 2,
                (_, a) => a,
            }
        })
    }

    /// `s·m = m` for every scalar.
    pub fn trivial(chain: ProfiniteSemiringChain, module_names: Vec<String>) -> Self {
        StageAction::new(chain, module_names, |_, _, a| a)
    }

    /// A finite semiring acting on itself through the constant chain.
    pub fn regular(s: Arc<FiniteSemiring>, depth: usize) -> Self {
        let names = s.names().to_vec();
        let chain = ProfiniteSemiringChain::constant(s.clone(), depth);
        StageAction::new(chain, names, move |_, a, b| s.mul(a, b))
    }

    pub fn chain(&self) -> &ProfiniteSemiringChain {
        &self.chain
    }

    pub fn module_size(&self) -> usize {
        self.module_names.len()
    }

    pub fn act(&self, level: usize, s: Elem, a: Elem) -> Elem {
        (self.action_at)(level, s, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ContinuityVerdict {
    /// Every preimage `α⁻¹(m)` is a union of stage cylinders from
    /// `stable_from` on.
    Pass { depth: usize, stable_from: usize },
    /// One certificate per module element whose preimage is not clopen.
    Fail { certificates: Vec<ContinuityCertificate> },
}

impl ContinuityVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, ContinuityVerdict::Pass { .. })
    }

    /// Certificate for the module element named `element`, if it failed.
    pub fn failure_at(&self, element: &str) -> Option<&ContinuityCertificate> {
        match self {
            ContinuityVerdict::Pass { .. } => None,
            ContinuityVerdict::Fail { certificates } => certificates.iter().find(|c| c.element == element),
        }
    }
}

/// A module element whose preimage keeps splitting fibres up to the tested
/// depth, with the scalar thread along which it splits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuityCertificate {
    pub element: String,
    pub module_argument: String,
    /// Scalar cells at levels `0..=depth`.
    pub thread: Vec<String>,
    /// `(level, inside, outside)`: the fibre over the thread's cell at
    /// `level` contains `inside` (in the preimage) and `outside` (not in it).
    pub splits: Vec<(usize, String, String)>,
    pub depth: usize,
}

/// Tests whether every preimage `α⁻¹(m) ⊆ S × A` is clopen at resolution
/// `depth`: it must be a union of fibre cylinders over some level below
/// `depth`. A failure means the preimage is not definable at any level
/// `< depth`.
pub fn check_action_joint_continuity(a: &StageAction, depth: usize) -> Result<ContinuityVerdict> {
    let chain = &a.chain;
    if depth > chain.exactness_depth() {
        return Err(Error::depth(depth, chain.exactness_depth()));
    }
    if depth == 0 {
        return Ok(ContinuityVerdict::Pass { depth, stable_from: 0 });
    }
    let msize = a.module_size();
    let mut stable_from = 0;
    let mut certificates = Vec::new();
    for m in 0..msize {
        // last level n whose fibres towards n + 1 are split by α⁻¹(m)
        let mut last_split: Option<(usize, Elem, Elem, Elem, Elem)> = None;
        for n in 0..depth {
            let hi = chain.stage(n + 1)?;
            for arg in 0..msize {
                for t in hi.elements() {
                    let s = chain.quotient(n, t)?;
                    let coarse = a.act(n, s, arg) == m;
                    let fine = a.act(n + 1, t, arg) == m;
                    if coarse != fine {
                        // find both sides of the fibre over s
                        let fibre: Vec<Elem> = hi
                            .elements()
                            .filter(|&u| chain.quotient(n, u).ok() == Some(s))
                            .collect();
                        let inside = fibre.iter().copied().find(|&u| a.act(n + 1, u, arg) == m);
                        let outside = fibre.iter().copied().find(|&u| a.act(n + 1, u, arg) != m);
                        last_split = Some((n, s, arg, inside.unwrap_or(t), outside.unwrap_or(t)));
                        break;
                    }
                }
                if last_split.is_some_and(|(l, ..)| l == n) {
                    break;
                }
            }
        }
        match last_split {
            Some((n, s, arg, inside, _)) if n + 1 == depth => {
                certificates.push(certificate(a, depth, m, n, s, arg, inside)?);
            }
            Some((n, ..)) => stable_from = stable_from.max(n + 1),
            None => {}
        }
    }
    if certificates.is_empty() {
        Ok(ContinuityVerdict::Pass { depth, stable_from })
    } else {
        Ok(ContinuityVerdict::Fail { certificates })
    }
}

fn certificate(
    a: &StageAction,
    depth: usize,
    m: Elem,
    level: usize,
    cell: Elem,
    arg: Elem,
    inside: Elem,
) -> Result<ContinuityCertificate> {
    let chain = &a.chain;
    let mut thread = vec![0; depth + 1];
    thread[level] = cell;
    thread[level + 1] = inside;
    for n in (0..level).rev() {
        thread[n] = chain.quotient(n, thread[n + 1])?;
    }
    let mut splits = Vec::new();
    for n in 0..depth {
        let hi = chain.stage(n + 1)?;
        let fibre: Vec<Elem> = hi
            .elements()
            .filter(|&u| chain.quotient(n, u).ok() == Some(thread[n]))
            .collect();
        let inside = fibre.iter().copied().find(|&u| a.act(n + 1, u, arg) == m);
        let outside = fibre.iter().copied().find(|&u| a.act(n + 1, u, arg) != m);
        if let (Some(i), Some(o)) = (inside, outside) {
            splits.push((n, hi.name(i).to_string(), hi.name(o).to_string()));
        }
    }
    let thread = thread
        .iter()
        .enumerate()
        .map(|(n, &x)| chain.stage(n).map(|s| s.name(x).to_string()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ContinuityCertificate {
        element: a.module_names[m].clone(),
        module_argument: a.module_names[arg].clone(),
        thread,
        splits,
        depth,
    })
}
