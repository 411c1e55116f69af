use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_table, scan, Elem, FiniteSemiring};
use crate::report::{LawReport, Witness};
use crate::{Error, Result};

/// Semimodule descriptor; `semiring` names the acting semiring by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemimoduleDescriptor {
    pub semiring: String,
    #[serde(default)]
    pub label: String,
    pub size: usize,
    pub madd: Vec<Vec<Elem>>,
    pub mzero: Elem,
    /// `action[s][m]` is `s·m`.
    pub action: Vec<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

/// A finite module over a finite semiring, stored as lookup tables. Values
/// built through [`FiniteSemimodule::new`] satisfy every semimodule law.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSemimodule {
    semiring: Arc<FiniteSemiring>,
    label: String,
    size: usize,
    madd: Vec<Elem>,
    mzero: Elem,
    action: Vec<Elem>,
    names: Vec<String>,
}

impl fmt::Debug for FiniteSemimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSemimodule")
            .field("label", &self.label)
            .field("semiring", &self.semiring.label())
            .field("size", &self.size)
            .finish()
    }
}

impl FiniteSemimodule {
    /// Builds and validates.
    pub fn new(semiring: Arc<FiniteSemiring>, desc: &SemimoduleDescriptor) -> Result<Self> {
        let report = validate_semimodule(&semiring, desc)?;
        if let Some(fail) = report.failures().next() {
            return Err(Error::LawViolation {
                label: desc.label.clone(),
                law: fail.law.clone(),
                detail: fail.witness.as_ref().map(|w| w.detail.clone()).unwrap_or_default(),
            });
        }
        Ok(Self::unchecked(semiring, desc))
    }

    fn unchecked(semiring: Arc<FiniteSemiring>, desc: &SemimoduleDescriptor) -> Self {
        let names = desc
            .names
            .clone()
            .unwrap_or_else(|| (0..desc.size).map(|i| format!("m{i}")).collect());
        FiniteSemimodule {
            semiring,
            label: desc.label.clone(),
            size: desc.size,
            madd: desc.madd.iter().flatten().copied().collect(),
            mzero: desc.mzero,
            action: desc.action.iter().flatten().copied().collect(),
            names,
        }
    }

    /// Descriptor built from operation closures (not validated).
    pub fn descriptor_from_fns(
        semiring: &FiniteSemiring,
        label: impl Into<String>,
        names: Vec<String>,
        mzero: Elem,
        madd: impl Fn(Elem, Elem) -> Elem,
        action: impl Fn(Elem, Elem) -> Elem,
    ) -> SemimoduleDescriptor {
        let m = names.len();
        SemimoduleDescriptor {
            semiring: semiring.label().to_string(),
            label: label.into(),
            size: m,
            madd: (0..m).map(|a| (0..m).map(|b| madd(a, b)).collect()).collect(),
            mzero,
            action: semiring
                .elements()
                .map(|s| (0..m).map(|x| action(s, x)).collect())
                .collect(),
            names: Some(names),
        }
    }

    /// `S` acting on itself by left multiplication.
    pub fn regular(semiring: Arc<FiniteSemiring>) -> Self {
        let s = semiring.clone();
        let desc = Self::descriptor_from_fns(
            &s,
            format!("{}-regular", s.label()),
            s.names().to_vec(),
            s.zero(),
            |a, b| s.add(a, b),
            |a, b| s.mul(a, b),
        );
        Self::new(semiring, &desc).expect("a semiring is a module over itself")
    }

    pub fn descriptor(&self) -> SemimoduleDescriptor {
        let k = self.semiring.size();
        SemimoduleDescriptor {
            semiring: self.semiring.label().to_string(),
            label: self.label.clone(),
            size: self.size,
            madd: self.madd.chunks(self.size).map(|r| r.to_vec()).collect(),
            mzero: self.mzero,
            action: (0..k)
                .map(|s| self.action[s * self.size..(s + 1) * self.size].to_vec())
                .collect(),
            names: Some(self.names.clone()),
        }
    }

    pub fn semiring(&self) -> &Arc<FiniteSemiring> {
        &self.semiring
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> Elem {
        self.mzero
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.madd[a * self.size + b]
    }

    #[inline]
    pub fn act(&self, s: Elem, m: Elem) -> Elem {
        self.action[s * self.size + m]
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.mzero, |acc, x| self.add(acc, x))
    }

    pub fn name(&self, m: Elem) -> &str {
        &self.names[m]
    }
}

/// Exhaustive scan of the semimodule laws; structural defects are `Err`.
pub fn validate_semimodule(s: &FiniteSemiring, desc: &SemimoduleDescriptor) -> Result<LawReport> {
    if desc.semiring != s.label() {
        return Err(Error::Mismatch(format!(
            "semimodule `{}` is declared over `{}` but `{}` was supplied",
            desc.label,
            desc.semiring,
            s.label()
        )));
    }
    let m = desc.size;
    if m == 0 {
        return Err(Error::malformed("semimodule", "carrier must be nonempty"));
    }
    if desc.mzero >= m {
        return Err(Error::malformed("semimodule", format!("mzero {} out of range", desc.mzero)));
    }
    check_table("madd", &desc.madd, m, m, m)?;
    check_table("action", &desc.action, s.size(), m, m)?;
    if desc.names.as_ref().is_some_and(|n| n.len() != m) {
        return Err(Error::malformed("semimodule", "names length differs from size"));
    }

    let module = FiniteSemimodule::unchecked(Arc::new(s.clone()), desc);
    let mn = |x: Elem| module.names[x].clone();
    let sn = |x: Elem| s.name(x).to_string();
    let mut report = LawReport::new(format!("semimodule `{}` over `{}`", desc.label, s.label()));
    let k = s.size();
    let mpairs = || (0..m).flat_map(move |a| (0..m).map(move |b| (a, b)));

    scan(
        &mut report,
        "madd-associative",
        mpairs().flat_map(|(a, b)| (0..m).map(move |c| (a, b, c))),
        |(a, b, c)| {
            let (l, r) = (module.add(module.add(a, b), c), module.add(a, module.add(b, c)));
            (l != r).then(|| Witness::new(vec![mn(a), mn(b), mn(c)], format!("({0}+{1})+{2} = {3} but {0}+({1}+{2}) = {4}", mn(a), mn(b), mn(c), mn(l), mn(r))))
        },
    );
    scan(&mut report, "madd-commutative", mpairs(), |(a, b)| {
        (module.add(a, b) != module.add(b, a)).then(|| Witness::new(vec![mn(a), mn(b)], format!("{0}+{1} differs from {1}+{0}", mn(a), mn(b))))
    });
    scan(&mut report, "madd-identity", 0..m, |a| {
        (module.add(a, module.mzero) != a || module.add(module.mzero, a) != a)
            .then(|| Witness::new(vec![mn(a)], format!("{} + 0 is not {}", mn(a), mn(a))))
    });
    scan(
        &mut report,
        "action-distributes-over-madd",
        (0..k).flat_map(|t| mpairs().map(move |(a, b)| (t, a, b))),
        |(t, a, b)| {
            let l = module.act(t, module.add(a, b));
            let r = module.add(module.act(t, a), module.act(t, b));
            (l != r).then(|| Witness::new(vec![sn(t), mn(a), mn(b)], format!("{0}({1}+{2}) = {3} but {0}{1}+{0}{2} = {4}", sn(t), mn(a), mn(b), mn(l), mn(r))))
        },
    );
    scan(
        &mut report,
        "scalar-add-distributes",
        (0..k).flat_map(|t| (0..k).flat_map(move |u| (0..m).map(move |a| (t, u, a)))),
        |(t, u, a)| {
            let l = module.act(s.add(t, u), a);
            let r = module.add(module.act(t, a), module.act(u, a));
            (l != r).then(|| Witness::new(vec![sn(t), sn(u), mn(a)], format!("({0}+{1}){2} = {3} but {0}{2}+{1}{2} = {4}", sn(t), sn(u), mn(a), mn(l), mn(r))))
        },
    );
    scan(
        &mut report,
        "action-associative",
        (0..k).flat_map(|t| (0..k).flat_map(move |u| (0..m).map(move |a| (t, u, a)))),
        |(t, u, a)| {
            let l = module.act(s.mul(t, u), a);
            let r = module.act(t, module.act(u, a));
            (l != r).then(|| Witness::new(vec![sn(t), sn(u), mn(a)], format!("({0}·{1}){2} = {3} but {0}({1}{2}) = {4}", sn(t), sn(u), mn(a), mn(l), mn(r))))
        },
    );
    scan(&mut report, "action-unit", 0..m, |a| {
        let l = module.act(s.one(), a);
        (l != a).then(|| Witness::new(vec![mn(a)], format!("1{} = {}", mn(a), mn(l))))
    });
    scan(
        &mut report,
        "action-zero",
        (0..m).map(|a| (None, a)).chain((0..k).map(|t| (Some(t), module.mzero))),
        |(t, a)| match t {
            None => {
                let l = module.act(s.zero(), a);
                (l != module.mzero).then(|| Witness::new(vec![sn(s.zero()), mn(a)], format!("0{} = {}", mn(a), mn(l))))
            }
            Some(t) => {
                let l = module.act(t, module.mzero);
                (l != module.mzero).then(|| Witness::new(vec![sn(t), mn(module.mzero)], format!("{}·0 = {}", sn(t), mn(l))))
            }
        },
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::{bool2, builtin, nat_sat, trop_trunc, zmod, FiniteSemiring};
    use super::*;
    use crate::report::Status;

    /// `{0 < 1 < ω}` as a join-semilattice, `ω` is index 2.
    fn three_chain(s: &FiniteSemiring, act: impl Fn(Elem, Elem) -> Elem) -> SemimoduleDescriptor {
        FiniteSemimodule::descriptor_from_fns(
            s,
            "A",
            vec!["0".into(), "1".into(), "ω".into()],
            0,
            |a, b| a.max(b),
            act,
        )
    }

    /// Three-element quotient of N∞ collapsing all nonzero naturals: 0, n, ∞.
    fn collapsed_nat_infty() -> FiniteSemiring {
        let (zero, fin, inf) = (0, 1, 2);
        FiniteSemiring::from_fns(
            "N∞/fin",
            vec!["0".into(), "n".into(), "∞".into()],
            zero,
            fin,
            |a, b| a.max(b),
            move |a, b| if a == zero || b == zero { zero } else if a == inf || b == inf { inf } else { fin },
        )
        .unwrap()
    }

    #[test]
    fn regular_modules_pass() {
        for s in [bool2(), zmod(3), trop_trunc(2), nat_sat(3)] {
            let m = FiniteSemimodule::regular(Arc::new(s.clone()));
            assert!(validate_semimodule(&s, &m.descriptor()).unwrap().is_pass());
        }
    }

    #[test]
    fn infinity_action_on_three_chain() {
        // Over the finite truncations nat_sat(n) the assignment ⊤·a = ω for
        // nonzero a is not a module: (n-1)+1 = ⊤ gives ⊤·1 = ω, while
        // (n-1)·1 + 1·1 = 1.
        for n in 2..=4 {
            let s = nat_sat(n);
            let top = n;
            let desc = three_chain(&s, |t, a| match (t, a) {
                (0, _) | (_, 0) => 0,
                (t, 1) if t == top => 2,
                (_, a) => a,
            });
            let report = validate_semimodule(&s, &desc).unwrap();
            let fail = report.law("scalar-add-distributes").unwrap();
            assert_eq!(fail.status, Status::Fail);
        }
        // The action does live on the quotient of N∞ that separates 0, the
        // finite nonzero naturals and ∞.
        let q = collapsed_nat_infty();
        assert!(validate_semiring_ok(&q));
        let desc = three_chain(&q, |t, a| match (t, a) {
            (0, _) | (_, 0) => 0,
            (2, _) => 2,
            (_, a) => a,
        });
        assert!(validate_semimodule(&q, &desc).unwrap().is_pass());
        // and the finite part of the action is a genuine nat_sat(n) module
        let s = nat_sat(3);
        let desc = three_chain(&s, |t, a| if t == 0 { 0 } else { a });
        assert!(validate_semimodule(&s, &desc).unwrap().is_pass());
    }

    fn validate_semiring_ok(s: &FiniteSemiring) -> bool {
        super::super::validate_semiring(&s.descriptor()).unwrap().is_pass()
    }

    #[test]
    fn injected_scalar_distributivity_failure() {
        let s = Arc::new(zmod(3));
        let mut desc = FiniteSemimodule::regular(s.clone()).descriptor();
        desc.action[2][1] = 0;
        let report = validate_semimodule(&s, &desc).unwrap();
        let law = report.law("scalar-add-distributes").unwrap();
        assert_eq!(law.status, Status::Fail);
        assert_eq!(law.witness.as_ref().unwrap().tuple, vec!["1", "1", "1"]);
        assert!(FiniteSemimodule::new(s, &desc).is_err());
    }

    #[test]
    fn structural_errors() {
        let s = builtin("bool2", &[]).unwrap();
        let mut desc = FiniteSemimodule::regular(s.clone()).descriptor();
        desc.action.pop();
        assert!(matches!(validate_semimodule(&s, &desc), Err(Error::Malformed { .. })));
        let mut desc = FiniteSemimodule::regular(s.clone()).descriptor();
        desc.semiring = "zmod:2".into();
        assert!(matches!(validate_semimodule(&s, &desc), Err(Error::Mismatch(_))));
    }
}
