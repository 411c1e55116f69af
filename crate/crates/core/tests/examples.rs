//! Small worked instances across the modules, with the values computed by
//! hand.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use profmeasure::density::{density, from_measure, singleton, to_measure, union};
use profmeasure::duality::{
    atom_to_measure, bijection_report, bracket_algebra, bracket_generators, generated_algebra, measure_to_ultrafilter,
};
use profmeasure::measure::{
    combine, dirac, equal_to_depth, free_extension, integrate, pushforward, scale, zero_measure, FinSuppFn,
};
use profmeasure::monad::{check_monad_laws, mult, unit, DoubleFinFn, FinFn};
use profmeasure::report::Status;
use profmeasure::semiring::{bool2, builtin, natural_order, trop_trunc, zmod, FiniteSemimodule, FiniteSemiring};
use profmeasure::space::{Clopen, ContinuousMap, InverseSystem, Point, Space, Tail};
use profmeasure::Error;

fn cantor() -> Space {
    InverseSystem::cantor()
}

/// 000…
fn z() -> Point {
    Point::cantor(cantor(), "0", Tail::Least).unwrap()
}

/// 111…
fn o() -> Point {
    Point::cantor(cantor(), "1", Tail::Greatest).unwrap()
}

fn b0() -> Clopen {
    Clopen::cantor_prefix(cantor(), "0").unwrap()
}

fn arc(s: FiniteSemiring) -> Arc<FiniteSemiring> {
    Arc::new(s)
}

fn fin(s: &Arc<FiniteSemiring>, support: Vec<(Point, usize)>) -> FinSuppFn {
    FinSuppFn::new(cantor(), s.clone(), support).unwrap()
}

#[test]
fn builtin_tables() {
    let t = builtin("trop_trunc", &[2]).unwrap();
    assert_eq!(t.mul(1, 2), t.zero());
    let n = builtin("nat_sat", &[3]).unwrap();
    let top = 3;
    assert_eq!(n.add(2, 2), top);
    assert_eq!(n.mul(2, 0), 0);
    assert!(n.elements().all(|x| n.add(x, top) == top));
    let b = bool2();
    assert_eq!((b.size(), b.zero(), b.one()), (2, 0, 1));
}

#[test]
fn natural_orders() {
    let t = trop_trunc(2);
    let order = natural_order(&t).unwrap();
    // ∞ ≤ 2 ≤ 1 ≤ 0
    assert!(order.leq(3, 2) && order.leq(2, 1) && order.leq(1, 0));
    assert!(!order.leq(0, 1));
    assert!(matches!(natural_order(&zmod(2)), Err(Error::NotIdempotent { .. })));
}

#[test]
fn spaces_and_clopens() {
    let sizes = |s: &Space| (0..5).map(|n| s.level_size(n).unwrap()).collect::<Vec<_>>();
    assert_eq!(sizes(&cantor()), vec![1, 2, 4, 8, 16]);
    assert_eq!(sizes(&InverseSystem::nat_infty()), vec![1, 2, 3, 4, 5]);
    assert_eq!(sizes(&InverseSystem::finite(3).unwrap()), vec![3; 5]);
    let n = InverseSystem::nat_infty();
    // level 3 is {0, 1, 2, *}: 2 and * both go to *
    assert_eq!(n.transition(2, 2).unwrap(), 2);
    assert_eq!(n.transition(2, 3).unwrap(), 2);
    assert_eq!(n.transition(2, 1).unwrap(), 1);

    let b = b0();
    assert!(b.and(&b.not()).unwrap().is_empty());
    assert_eq!(b.or(&b.not()).unwrap(), Clopen::top(cantor()));
    assert_eq!(Clopen::new(cantor(), 2, [0, 1]).unwrap().canonical(), b);
    assert!(z().is_in(&b).unwrap());
    assert!(!o().is_in(&b).unwrap());
}

#[test]
fn monad_unit_and_multiplication() {
    let t = arc(trop_trunc(2));
    assert_eq!(unit(t.clone(), 1, 0).unwrap().values(), vec![0]);
    let z2 = arc(zmod(2));
    assert_eq!(unit(z2.clone(), 2, 1).unwrap().values(), vec![0, 1]);
    let f1 = FinFn::from_values(z2.clone(), &[1]).unwrap();
    let f2 = FinFn::from_values(z2.clone(), &[0]).unwrap();
    let big = DoubleFinFn::from_terms(z2.clone(), 1, &[(f1, 1), (f2, 1)]).unwrap();
    assert_eq!(mult(&big).unwrap().values(), vec![1]);
    assert_eq!(check_monad_laws(&z2, 2, 1 << 16).unwrap().status(), Status::Pass);
}

#[test]
fn dirac_and_integrals() {
    let b = arc(bool2());
    let top = Clopen::top(cantor());
    let empty = Clopen::empty(cantor());
    let dz = dirac(b.clone(), &z()).unwrap();
    assert_eq!((dz.eval(&b0()).unwrap(), dz.eval(&b0().not()).unwrap()), (1, 0));
    assert_eq!((dz.eval(&top).unwrap(), dz.eval(&empty).unwrap()), (1, 0));

    let t = arc(trop_trunc(2));
    let inf = t.zero();
    let stage = dirac(t.clone(), &z()).unwrap().stage_at(3).unwrap();
    assert_eq!(stage.values(), vec![0, inf, inf, inf, inf, inf, inf, inf]);

    let z2 = arc(zmod(2));
    let both = integrate(&fin(&z2, vec![(z(), 1), (o(), 1)]));
    assert_eq!((both.eval(&top).unwrap(), both.eval(&b0()).unwrap()), (0, 1));
    let only = integrate(&fin(&t, vec![(z(), 2)]));
    assert_eq!((only.eval(&b0()).unwrap(), only.eval(&b0().not()).unwrap()), (2, inf));
    assert_eq!(integrate(&fin(&b, vec![(z(), 1), (o(), 1)])).eval(&b0()).unwrap(), 1);
}

#[test]
fn linear_structure() {
    let b = arc(bool2());
    let sum = combine(&dirac(b.clone(), &z()).unwrap(), &dirac(b.clone(), &o()).unwrap()).unwrap();
    assert!(equal_to_depth(&sum, &integrate(&fin(&b, vec![(z(), 1), (o(), 1)])), 6).unwrap());
    assert!(equal_to_depth(&scale(0, &sum).unwrap(), &zero_measure(cantor(), b.clone()), 6).unwrap());
    let z2 = arc(zmod(2));
    let dz = dirac(z2.clone(), &z()).unwrap();
    assert!(equal_to_depth(&combine(&dz, &dz).unwrap(), &zero_measure(cantor(), z2.clone()), 5).unwrap());
    assert!(equal_to_depth(&integrate(&fin(&b, vec![(z(), 1)])), &dirac(b.clone(), &z()).unwrap(), 5).unwrap());
    assert!(!equal_to_depth(&dirac(b.clone(), &z()).unwrap(), &dirac(b, &o()).unwrap(), 1).unwrap());
}

#[test]
fn pushforward_along_the_first_bit() {
    let b = arc(bool2());
    let first = ContinuousMap::first_bit(cantor()).unwrap();
    let pushed = pushforward(&dirac(b.clone(), &z()).unwrap(), &first).unwrap();
    let zero_point = Point::through_cell(first.target().clone(), 0, 0, Tail::Least).unwrap();
    assert!(equal_to_depth(&pushed, &dirac(b, &zero_point).unwrap(), 3).unwrap());
    let z2 = arc(zmod(2));
    let both = integrate(&fin(&z2, vec![(z(), 1), (o(), 1)]));
    assert_eq!(pushforward(&both, &first).unwrap().stage_at(0).unwrap().values(), vec![1, 1]);
}

#[test]
fn free_extension_on_units_and_zero() {
    let z3 = arc(zmod(3));
    let y = FiniteSemimodule::regular(z3.clone());
    let f = ContinuousMap::to_finite(cantor(), 1, 3, vec![2, 1]).unwrap();
    assert_eq!(free_extension(&y, &f, &dirac(z3.clone(), &z()).unwrap()).unwrap(), 2);
    assert_eq!(free_extension(&y, &f, &dirac(z3.clone(), &o()).unwrap()).unwrap(), 1);
    assert_eq!(free_extension(&y, &f, &zero_measure(cantor(), z3)).unwrap(), y.zero());
}

#[test]
fn tropical_densities() {
    let t = arc(trop_trunc(2));
    let m = integrate(&fin(&t, vec![(z(), 2)]));
    let d = density(&m).unwrap();
    assert_eq!(d.value_at(&z()).unwrap().value, 2);
    assert_eq!(d.value_at(&o()).unwrap().value, t.zero());
    assert_eq!(d.integral(&b0()).unwrap(), 2);
    assert_eq!(d.integral(&b0().not()).unwrap(), t.zero());
    assert!(equal_to_depth(&to_measure(&d), &m, 6).unwrap());

    let b = arc(bool2());
    let dz = density(&dirac(b, &z()).unwrap()).unwrap();
    for depth in 0..4 {
        assert_eq!(dz.eval_pointwise(&z(), depth).unwrap().value, 1);
    }
    let at_o = dz.eval_pointwise(&o(), 1).unwrap();
    assert_eq!((at_o.value, at_o.stabilised), (0, true));
}

#[test]
fn closed_sets_of_boolean_measures() {
    let b = arc(bool2());
    assert!(from_measure(&dirac(b.clone(), &z()).unwrap()).unwrap().equal_to_depth(&singleton(&z()), 6).unwrap());
    let sum = combine(&dirac(b.clone(), &z()).unwrap(), &dirac(b, &o()).unwrap()).unwrap();
    let closed = from_measure(&sum).unwrap();
    assert!(closed.equal_to_depth(&union(&cantor(), &[singleton(&z()), singleton(&o())]).unwrap(), 6).unwrap());
    assert!(closed.in_diamond(&b0()).unwrap() && closed.in_diamond(&b0().not()).unwrap());
    assert!(!closed.in_box(&b0()).unwrap());
}

#[test]
fn boolean_algebras_and_brackets() {
    let set = |n: usize, items: &[usize]| {
        let mut s = FixedBitSet::with_capacity(n);
        items.iter().for_each(|&i| s.insert(i));
        s
    };
    let alg = generated_algebra(3, &[set(3, &[0])]).unwrap();
    assert_eq!(alg.atoms(), &[set(3, &[0]), set(3, &[1, 2])]);
    assert_eq!(generated_algebra(3, &[]).unwrap().atoms(), &[set(3, &[0, 1, 2])]);
    assert_eq!(generated_algebra(4, &[set(4, &[0, 1]), set(4, &[1, 2])]).unwrap().atoms().len(), 4);

    let b = bool2();
    let one_point = bracket_generators(1, &b, 1 << 10).unwrap();
    let x1 = one_point.iter().find(|br| br.b == 1 && br.k == 1).unwrap();
    assert_eq!(x1.members.count_ones(..), 1);
    let two = bracket_generators(2, &b, 1 << 10).unwrap();
    let xy1 = two.iter().find(|br| br.b == 0b11 && br.k == 1).unwrap();
    assert_eq!(xy1.members.count_ones(..), 3);
    let empty0 = two.iter().find(|br| br.b == 0 && br.k == 0).unwrap();
    let empty1 = two.iter().find(|br| br.b == 0 && br.k == 1).unwrap();
    assert_eq!((empty0.members.count_ones(..), empty1.members.count_ones(..)), (4, 0));
}

#[test]
fn atoms_and_measures_correspond() {
    let b = arc(bool2());
    let (alg, brackets) = bracket_algebra(2, &b, 1 << 10).unwrap();
    assert_eq!(alg.atoms().len(), 4);
    let f = FinFn::from_values(b.clone(), &[1, 0]).unwrap();
    let atom = alg.atoms()[alg.atom_containing(f.encode().unwrap() as usize)].clone();
    assert_eq!(atom_to_measure(&alg, &brackets, &atom, 2, &b).unwrap().values(), vec![1, 0]);
    assert_eq!(measure_to_ultrafilter(&alg, &brackets, &f).unwrap(), atom);
    let zero = FinFn::zero(b.clone(), 2);
    let zero_atom = measure_to_ultrafilter(&alg, &brackets, &zero).unwrap();
    assert!(zero_atom.contains(0));
    for (x, s, atoms) in [(1, arc(bool2()), 2), (2, arc(zmod(2)), 4), (2, arc(trop_trunc(1)), 9)] {
        let r = bijection_report(x, &s, 1 << 10).unwrap();
        assert_eq!((r.atom_count, r.bijection), (atoms, Status::Pass));
    }
}
