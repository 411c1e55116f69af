use super::{Elem, FiniteSemiring};
use crate::{Error, Result};

/// The natural order `a <= b iff a + u = b for some u` of an idempotent
/// semiring. For idempotent addition this is `a + b = b`, addition is the
/// join and zero is the bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalOrder {
    size: usize,
    bottom: Elem,
    leq: Vec<bool>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
}

pub fn natural_order(s: &FiniteSemiring) -> Result<NaturalOrder> {
    if let Some(a) = s.elements().find(|&a| s.add(a, a) != a) {
        return Err(Error::NotIdempotent {
            label: s.label().to_string(),
            element: s.name(a).to_string(),
            sum: s.name(s.add(a, a)).to_string(),
        });
    }
    let n = s.size();
    // existential form, not the a+b=b shortcut
    let leq: Vec<bool> = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            s.elements().any(|u| s.add(a, u) == b)
        })
        .collect();
    let join = (0..n * n).map(|i| s.add(i / n, i % n)).collect();
    // a finite join-semilattice with bottom is a lattice: meet = join of all
    // common lower bounds
    let meet = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            s.sum(s.elements().filter(|&c| leq[c * n + a] && leq[c * n + b]))
        })
        .collect();
    Ok(NaturalOrder {
        size: n,
        bottom: s.zero(),
        leq,
        join,
        meet,
    })
}

impl NaturalOrder {
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.size + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.size + b]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.size + b]
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    /// Join of a finite family; the empty join is the bottom.
    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.bottom, |a, b| self.join(a, b))
    }

    /// Meet of a nonempty family.
    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Option<Elem> {
        items.into_iter().reduce(|a, b| self.meet(a, b))
    }

    /// Top element (join of everything).
    pub fn top(&self) -> Elem {
        self.join_all(0..self.size)
    }

    /// Elements listed from the bottom upward along a linear extension.
    pub fn linear_extension(&self) -> Vec<Elem> {
        let mut v: Vec<Elem> = (0..self.size).collect();
        v.sort_by_key(|&a| (0..self.size).filter(|&b| self.leq(b, a)).count());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::super::{bool2, builtin, trop_trunc, zmod};
    use super::*;

    #[test]
    fn bool2_order() {
        let o = natural_order(&bool2()).unwrap();
        assert!(o.leq(0, 1));
        assert!(!o.leq(1, 0));
        assert_eq!(o.bottom(), 0);
    }

    #[test]
    fn trop_trunc_order_reverses_numbers() {
        let t = trop_trunc(2);
        let o = natural_order(&t).unwrap();
        let inf = 3;
        let chain = [inf, 2, 1, 0];
        for w in chain.windows(2) {
            assert!(o.leq(w[0], w[1]) && !o.leq(w[1], w[0]));
        }
        assert_eq!(o.bottom(), inf);
        assert_eq!(o.top(), 0);
        assert_eq!(o.linear_extension(), chain.to_vec());
    }

    #[test]
    fn zmod2_is_rejected() {
        match natural_order(&zmod(2)) {
            Err(Error::NotIdempotent { element, sum, .. }) => {
                assert_eq!((element.as_str(), sum.as_str()), ("1", "0"));
            }
            other => panic!("expected NotIdempotent, got {other:?}"),
        }
    }

    #[test]
    fn order_axioms_for_idempotent_builtins() {
        for s in [bool2(), trop_trunc(1), trop_trunc(3), (*builtin("nat_sat", &[1]).unwrap()).clone()] {
            let o = natural_order(&s).unwrap();
            let n = s.size();
            for a in 0..n {
                assert!(o.leq(a, a));
                assert!(o.leq(s.zero(), a));
                for b in 0..n {
                    if o.leq(a, b) && o.leq(b, a) {
                        assert_eq!(a, b);
                    }
                    assert_eq!(o.leq(a, b), s.add(a, b) == b);
                    let j = s.add(a, b);
                    assert!(o.leq(a, j) && o.leq(b, j));
                    for c in 0..n {
                        if o.leq(a, b) && o.leq(b, c) {
                            assert!(o.leq(a, c));
                        }
                        if o.leq(a, c) && o.leq(b, c) {
                            assert!(o.leq(j, c), "join is least");
                        }
                        let m = o.meet(a, b);
                        if o.leq(c, a) && o.leq(c, b) {
                            assert!(o.leq(c, m), "meet is greatest");
                        }
                    }
                }
            }
        }
    }
}
