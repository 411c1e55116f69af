//! Finite semirings as validated lookup tables.
//!
//! Carrier elements are indices `0..size`. The additive and multiplicative
//! identities are named explicitly in the descriptor, so subalgebras and
//! quotients keep their numbering.

mod chain;
mod module;
mod order;

pub use chain::{
    check_action_joint_continuity, ContinuityCertificate, ContinuityVerdict, ProfiniteSemiringChain,
    StageAction,
};
pub use module::{validate_semimodule, FiniteSemimodule, SemimoduleDescriptor};
pub use order::{natural_order, NaturalOrder};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::report::{LawOutcome, LawReport, Witness};
use crate::{Error, Result};

/// Carrier element of a finite semiring or semimodule.
pub type Elem = usize;

/// Raw semiring description, as read from JSON; not yet validated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiringDescriptor {
    pub label: String,
    pub size: usize,
    pub zero: Elem,
    pub one: Elem,
    pub add: Vec<Vec<Elem>>,
    pub mul: Vec<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

/// A finite semiring whose laws have been verified exhaustively.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSemiring {
    label: String,
    size: usize,
    zero: Elem,
    one: Elem,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    names: Vec<String>,
}

impl fmt::Debug for FiniteSemiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSemiring")
            .field("label", &self.label)
            .field("size", &self.size)
            .finish()
    }
}

impl fmt::Display for FiniteSemiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl FiniteSemiring {
    /// Validates `desc` and builds the semiring. Structural problems and law
    /// violations are both errors here; use [`validate_semiring`] to get the
    /// full list of violated laws instead.
    pub fn from_descriptor(desc: &SemiringDescriptor) -> Result<Self> {
        let report = validate_semiring(desc)?;
        if let Some(fail) = report.failures().next() {
            return Err(Error::LawViolation {
                label: desc.label.clone(),
                law: fail.law.clone(),
                detail: fail
                    .witness
                    .as_ref()
                    .map(|w| w.detail.clone())
                    .unwrap_or_default(),
            });
        }
        Ok(Self::from_descriptor_unchecked(desc))
    }

    fn from_descriptor_unchecked(desc: &SemiringDescriptor) -> Self {
        let flat = |t: &Vec<Vec<Elem>>| t.iter().flatten().copied().collect::<Vec<_>>();
        let names = desc
            .names
            .clone()
            .unwrap_or_else(|| (0..desc.size).map(|i| i.to_string()).collect());
        FiniteSemiring {
            label: desc.label.clone(),
            size: desc.size,
            zero: desc.zero,
            one: desc.one,
            add: flat(&desc.add),
            mul: flat(&desc.mul),
            names,
        }
    }

    /// Builds from operation closures; the result is validated.
    pub fn from_fns(
        label: impl Into<String>,
        names: Vec<String>,
        zero: Elem,
        one: Elem,
        add: impl Fn(Elem, Elem) -> Elem,
        mul: impl Fn(Elem, Elem) -> Elem,
    ) -> Result<Self> {
        let size = names.len();
        let table = |op: &dyn Fn(Elem, Elem) -> Elem| {
            (0..size)
                .map(|a| (0..size).map(|b| op(a, b)).collect())
                .collect()
        };
        let desc = SemiringDescriptor {
            label: label.into(),
            size,
            zero,
            one,
            add: table(&add),
            mul: table(&mul),
            names: Some(names),
        };
        Self::from_descriptor(&desc)
    }

    pub fn descriptor(&self) -> SemiringDescriptor {
        let rows = |t: &[Elem]| t.chunks(self.size.max(1)).map(|r| r.to_vec()).collect();
        SemiringDescriptor {
            label: self.label.clone(),
            size: self.size,
            zero: self.zero,
            one: self.one,
            add: if self.size == 0 { vec![] } else { rows(&self.add) },
            mul: if self.size == 0 { vec![] } else { rows(&self.mul) },
            names: Some(self.names.clone()),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.size + b]
    }

    /// Finite sum; the empty sum is zero.
    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.zero, |acc, x| self.add(acc, x))
    }

    pub fn is_idempotent(&self) -> bool {
        self.elements().all(|a| self.add(a, a) == a)
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Looks an element up by its display name or numeric index.
    pub fn parse_elem(&self, s: &str) -> Option<Elem> {
        self.names
            .iter()
            .position(|n| n == s)
            .or_else(|| s.parse::<usize>().ok().filter(|&i| i < self.size))
    }

    pub fn check(&self, a: Elem) -> Result<Elem> {
        if a < self.size {
            Ok(a)
        } else {
            Err(Error::malformed(
                "semiring element",
                format!("{a} is not an element of `{}` (size {})", self.label, self.size),
            ))
        }
    }
}

/// Runs the exhaustive law scan over a semiring descriptor.
///
/// Structural defects (wrong table dimensions, out-of-range entries) are
/// returned as `Err`; law violations go into the report, one witness per law.
pub fn validate_semiring(desc: &SemiringDescriptor) -> Result<LawReport> {
    check_structure(desc)?;
    let s = FiniteSemiring::from_descriptor_unchecked(desc);
    let n = s.size;
    let name = |a: Elem| s.names[a].clone();
    let mut report = LawReport::new(format!("semiring `{}`", s.label));

    let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));
    let triples = || pairs().flat_map(move |(a, b)| (0..n).map(move |c| (a, b, c)));

    scan(&mut report, "add-associative", triples(), |(a, b, c)| {
        let l = s.add(s.add(a, b), c);
        let r = s.add(a, s.add(b, c));
        (l != r).then(|| {
            Witness::new(
                vec![name(a), name(b), name(c)],
                format!("({0}+{1})+{2} = {3} but {0}+({1}+{2}) = {4}", name(a), name(b), name(c), name(l), name(r)),
            )
        })
    });
    scan(&mut report, "add-commutative", pairs(), |(a, b)| {
        (s.add(a, b) != s.add(b, a)).then(|| {
            Witness::new(
                vec![name(a), name(b)],
                format!("{0}+{1} = {2} but {1}+{0} = {3}", name(a), name(b), name(s.add(a, b)), name(s.add(b, a))),
            )
        })
    });
    scan(&mut report, "add-identity", 0..n, |a| {
        (s.add(a, s.zero) != a || s.add(s.zero, a) != a).then(|| {
            Witness::new(
                vec![name(a)],
                format!("{0}+{1} = {2}, {1}+{0} = {3}", name(a), name(s.zero), name(s.add(a, s.zero)), name(s.add(s.zero, a))),
            )
        })
    });
    scan(&mut report, "mul-associative", triples(), |(a, b, c)| {
        let l = s.mul(s.mul(a, b), c);
        let r = s.mul(a, s.mul(b, c));
        (l != r).then(|| {
            Witness::new(
                vec![name(a), name(b), name(c)],
                format!("({0}·{1})·{2} = {3} but {0}·({1}·{2}) = {4}", name(a), name(b), name(c), name(l), name(r)),
            )
        })
    });
    scan(&mut report, "mul-identity", 0..n, |a| {
        (s.mul(a, s.one) != a || s.mul(s.one, a) != a).then(|| {
            Witness::new(
                vec![name(a)],
                format!("{0}·{1} = {2}, {1}·{0} = {3}", name(a), name(s.one), name(s.mul(a, s.one)), name(s.mul(s.one, a))),
            )
        })
    });
    scan(&mut report, "left-distributive", triples(), |(a, b, c)| {
        let l = s.mul(a, s.add(b, c));
        let r = s.add(s.mul(a, b), s.mul(a, c));
        (l != r).then(|| {
            Witness::new(
                vec![name(a), name(b), name(c)],
                format!("{0}·({1}+{2}) = {3} but {0}·{1}+{0}·{2} = {4}", name(a), name(b), name(c), name(l), name(r)),
            )
        })
    });
    scan(&mut report, "right-distributive", triples(), |(a, b, c)| {
        let l = s.mul(s.add(b, c), a);
        let r = s.add(s.mul(b, a), s.mul(c, a));
        (l != r).then(|| {
            Witness::new(
                vec![name(a), name(b), name(c)],
                format!("({1}+{2})·{0} = {3} but {1}·{0}+{2}·{0} = {4}", name(a), name(b), name(c), name(l), name(r)),
            )
        })
    });
    scan(&mut report, "annihilation", 0..n, |a| {
        (s.mul(a, s.zero) != s.zero || s.mul(s.zero, a) != s.zero).then(|| {
            Witness::new(
                vec![name(a)],
                format!("{0}·{1} = {2}, {1}·{0} = {3}", name(a), name(s.zero), name(s.mul(a, s.zero)), name(s.mul(s.zero, a))),
            )
        })
    });
    scan(&mut report, "zero-ne-one", std::iter::once(()), |()| {
        (n > 1 && s.zero == s.one).then(|| {
            Witness::new(
                vec![name(s.zero)],
                "zero and one coincide in a carrier with more than one element",
            )
        })
    });
    Ok(report)
}

/// Records the first counterexample of `law` over `domain`.
pub(crate) fn scan<T>(
    report: &mut LawReport,
    law: &str,
    domain: impl IntoIterator<Item = T>,
    mut violation: impl FnMut(T) -> Option<Witness>,
) {
    let mut checked = 0u64;
    for item in domain {
        checked += 1;
        if let Some(w) = violation(item) {
            report.push(LawOutcome::fail(law, checked, w));
            return;
        }
    }
    report.push(LawOutcome::pass(law, checked));
}

fn check_structure(desc: &SemiringDescriptor) -> Result<()> {
    let n = desc.size;
    if n == 0 {
        return Err(Error::malformed("semiring", "carrier must be nonempty"));
    }
    for (what, idx) in [("zero", desc.zero), ("one", desc.one)] {
        if idx >= n {
            return Err(Error::malformed(
                "semiring",
                format!("{what} index {idx} out of range for size {n}"),
            ));
        }
    }
    check_table("add", &desc.add, n, n, n)?;
    check_table("mul", &desc.mul, n, n, n)?;
    if let Some(names) = &desc.names {
        if names.len() != n {
            return Err(Error::malformed(
                "semiring",
                format!("{} names for {n} elements", names.len()),
            ));
        }
    }
    Ok(())
}

pub(crate) fn check_table(
    what: &str,
    table: &[Vec<Elem>],
    rows: usize,
    cols: usize,
    range: usize,
) -> Result<()> {
    if table.len() != rows {
        return Err(Error::malformed(
            "table",
            format!("`{what}` has {} rows, expected {rows}", table.len()),
        ));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::malformed(
                "table",
                format!("`{what}` row {i} has {} entries, expected {cols}", row.len()),
            ));
        }
        if let Some((j, v)) = row.iter().enumerate().find(|(_, &v)| v >= range) {
            return Err(Error::malformed(
                "table",
                format!("`{what}`[{i}][{j}] = {v} is out of range 0..{range}"),
            ));
        }
    }
    Ok(())
}

/// Names accepted by [`builtin`].
pub const BUILTINS: &[(&str, &str)] = &[
    ("bool2", "two-element distributive lattice ({0,1}, or, and)"),
    ("zmod", "integers modulo n; one parameter n >= 1"),
    ("trop_trunc", "min-plus on {0..k, inf} saturating above k; one parameter k >= 1"),
    ("nat_sat", "(N, +, ·) with every value >= n collapsed to ⊤; one parameter n >= 1"),
];

/// Instantiates a named semiring family.
pub fn builtin(name: &str, params: &[usize]) -> Result<Arc<FiniteSemiring>> {
    let param = |expected: &str| -> Result<usize> {
        match params {
            [k] if *k >= 1 => Ok(*k),
            _ => Err(Error::InvalidParameter {
                name: name.to_string(),
                detail: format!("expected a single parameter {expected} >= 1, got {params:?}"),
            }),
        }
    };
    let s = match name {
        "bool2" => {
            if !params.is_empty() {
                return Err(Error::InvalidParameter {
                    name: name.into(),
                    detail: "bool2 takes no parameters".into(),
                });
            }
            bool2()
        }
        "zmod" => zmod(param("n")?),
        "trop_trunc" => trop_trunc(param("k")?),
        "nat_sat" => nat_sat(param("n")?),
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    Ok(Arc::new(s))
}

/// Parses `name` or `name:p1,p2` into a builtin.
pub fn parse_builtin(text: &str) -> Result<Arc<FiniteSemiring>> {
    let (name, params) = match text.split_once(':') {
        Some((n, p)) => {
            let params = p
                .split(',')
                .map(|x| {
                    x.trim().parse::<usize>().map_err(|_| Error::InvalidParameter {
                        name: n.to_string(),
                        detail: format!("`{x}` is not a non-negative integer"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            (n, params)
        }
        None => (text, vec![]),
    };
    builtin(name, &params)
}

pub fn bool2() -> FiniteSemiring {
    FiniteSemiring::from_fns("bool2", vec!["0".into(), "1".into()], 0, 1, |a, b| a | b, |a, b| a & b)
        .expect("bool2 is a semiring")
}

pub fn zmod(n: usize) -> FiniteSemiring {
    assert!(n >= 1);
    FiniteSemiring::from_fns(
        format!("zmod:{n}"),
        (0..n).map(|i| i.to_string()).collect(),
        0,
        1 % n,
        |a, b| (a + b) % n,
        |a, b| (a * b) % n,
    )
    .expect("Z/n is a semiring")
}

/// Min-plus semiring on `{0, .., k, ∞}`; sums above `k` saturate to `∞`.
/// Index `i <= k` is the number `i`, index `k + 1` is `∞` (the zero).
pub fn trop_trunc(k: usize) -> FiniteSemiring {
    assert!(k >= 1);
    let inf = k + 1;
    let mut names: Vec<String> = (0..=k).map(|i| i.to_string()).collect();
    names.push("∞".into());
    FiniteSemiring::from_fns(
        format!("trop_trunc:{k}"),
        names,
        inf,
        0,
        |a, b| a.min(b),
        |a, b| if a == inf || b == inf || a + b > k { inf } else { a + b },
    )
    .expect("truncated tropical semiring is a semiring")
}

/// `(N, +, ·, 0, 1)` modulo the congruence collapsing all values `>= n` into
/// `⊤`. Index `i < n` is the number `i`, index `n` is `⊤`.
pub fn nat_sat(n: usize) -> FiniteSemiring {
    assert!(n >= 1);
    let top = n;
    let mut names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    names.push("⊤".into());
    let sat = move |v: usize| if v >= n { top } else { v };
    FiniteSemiring::from_fns(
        format!("nat_sat:{n}"),
        names,
        0,
        1,
        move |a, b| if a == top || b == top { top } else { sat(a + b) },
        move |a, b| {
            if a == 0 || b == 0 {
                0
            } else if a == top || b == top {
                top
            } else {
                sat(a * b)
            }
        },
    )
    .expect("saturated naturals form a semiring")
}
