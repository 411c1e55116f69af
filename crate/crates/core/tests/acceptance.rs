//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use profmeasure::duality::bijection_report;
use profmeasure::measure::{case_rng, random_definable};
use profmeasure::monad::{check_monad_laws, check_monad_laws_with, DoubleFinFn, FinFn};
use profmeasure::report::{LawOutcome, LawReport, Status};
use profmeasure::semiring::{
    bool2, check_action_joint_continuity, StageAction, nat_sat, trop_trunc, validate_semiring, zmod, FiniteSemiring, SemiringDescriptor,
};
use profmeasure::space::{InverseSystem, Space};
use profmeasure::suites::{self, SuiteConfig};

type Verdict = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn arc(s: FiniteSemiring) -> Arc<FiniteSemiring> {
    Arc::new(s)
}

fn outcome(o: LawOutcome) -> Verdict {
    match o.status {
        Status::Pass => Ok(format!("{} ({} checked)", o.law, o.checked)),
        _ => Err(format!("{}: {:?} {:?}", o.law, o.status, o.witness)),
    }
}

fn all_pass(outcomes: Vec<LawOutcome>) -> Verdict {
    let mut lines = Vec::new();
    for o in outcomes {
        lines.push(outcome(o)?);
    }
    Ok(lines.join("; "))
}

/// Scans every triple of a descriptor for the semiring axioms.
fn oracle_is_semiring(d: &SemiringDescriptor) -> bool {
    let n = d.size;
    let (a, m) = (&d.add, &d.mul);
    let el = || 0..n;
    el().all(|x| {
        a[x][d.zero] == x
            && m[x][d.one] == x
            && m[d.one][x] == x
            && m[x][d.zero] == d.zero
            && m[d.zero][x] == d.zero
            && el().all(|y| {
                a[x][y] == a[y][x]
                    && el().all(|z| {
                        a[a[x][y]][z] == a[x][a[y][z]]
                            && m[m[x][y]][z] == m[x][m[y][z]]
                            && m[x][a[y][z]] == a[m[x][y]][m[x][z]]
                            && m[a[x][y]][z] == a[m[x][z]][m[y][z]]
                    })
            })
    })
}

fn criterion_1() -> Verdict {
    let mut good = vec![bool2()];
    good.extend((1..=5).map(zmod));
    good.extend((1..=3).map(trop_trunc));
    good.extend((1..=4).map(nat_sat));
    for s in &good {
        let d = s.descriptor();
        let report = validate_semiring(&d).map_err(|e| e.to_string())?;
        if !report.is_pass() || !oracle_is_semiring(&d) {
            return Err(format!("{} rejected: {:?}", s.label(), report.failures().collect::<Vec<_>>()));
        }
    }
    let mut broken = zmod(2).descriptor();
    broken.label = "broken_z2".into();
    broken.mul[1][1] = 0;
    let report = validate_semiring(&broken).map_err(|e| e.to_string())?;
    let failure = report.failures().next().ok_or("mutated Z/2 accepted")?;
    let witness = failure.witness.as_ref().ok_or("no witness for mutated Z/2")?;
    if oracle_is_semiring(&broken) {
        return Err("oracle accepts mutated Z/2".into());
    }
    Ok(format!(
        "{} builtins pass; broken_z2 fails {} at {:?}",
        good.len(),
        failure.law,
        witness.tuple
    ))
}

fn criterion_2() -> Verdict {
    let budget = 1 << 14;
    let mut exhaustive = 0;
    let mut partial = Vec::new();
    let mut count = 0;
    for s in suites::small_builtins(4) {
        let report: LawReport = check_monad_laws(&s, 2, budget).map_err(|e| e.to_string())?;
        if let Some(f) = report.failures().next() {
            return Err(format!("{}: {} fails: {:?}", s.label(), f.law, f.witness));
        }
        count += 1;
        for law in &report.laws {
            match law.status {
                Status::Pass => exhaustive += 1,
                Status::Partial => partial.push(format!("{}:{}", s.label(), law.law)),
                _ => {}
            }
        }
    }
    // sums coefficients of the outer function without weighting
    let s = arc(zmod(3));
    let broken = |big: &DoubleFinFn| {
        let s = big.semiring();
        let n = big.inner_base();
        let vals = (0..n).map(|x| (x, s.sum(big.outer().support().map(|(g, _)| FinFn::digit(s, n, g, x)))));
        FinFn::from_pairs(s.clone(), n, vals)
    };
    let report = check_monad_laws_with(&s, 2, budget, &broken).map_err(|e| e.to_string())?;
    let caught = report.failures().next().ok_or("coefficient-dropping mutant passes")?;
    let summary = format!(
        "{count} semirings of size ≤ 4: {exhaustive} laws exhaustive, {} on generating families beyond enumeration; mutant fails {} at {:?}",
        partial.len(),
        caught.law,
        caught.witness.as_ref().map(|w| &w.tuple)
    );
    Ok(summary)
}

fn cantor_level_sum_oracle(space: &Space, s: &Arc<FiniteSemiring>, cfg: &SuiteConfig) -> Verdict {
    // stage at level 3 must equal the fibre sums of the stage at the definability level
    for case in 0..50 {
        let f = random_definable(space, s, cfg.depth, &mut case_rng(cfg.seed, case)).map_err(|e| e.to_string())?;
        let m = profmeasure::measure::integrate(&f);
        let fine = m.stage_at(cfg.depth).map_err(|e| e.to_string())?;
        let coarse = m.stage_at(3).map_err(|e| e.to_string())?;
        let mut sums = vec![s.zero(); coarse.base() as usize];
        for c in 0..fine.base() {
            let up = space.project(cfg.depth, 3, c as usize).map_err(|e| e.to_string())?;
            sums[up] = s.add(sums[up], fine.get(c));
        }
        if sums != coarse.values() {
            return Err(format!("case {case}: level-3 stage is not the fibre sum"));
        }
    }
    Ok(String::new())
}

fn criterion_3() -> Verdict {
    let c = InverseSystem::cantor();
    let cfg = SuiteConfig::default();
    let mut out = Vec::new();
    for s in [arc(bool2()), arc(zmod(2)), arc(trop_trunc(2))] {
        cantor_level_sum_oracle(&c, &s, &cfg)?;
        out.push(suites::additivity(&c, &s, &cfg).map_err(|e| e.to_string())?);
    }
    all_pass(out)
}

fn criterion_4() -> Verdict {
    let c = InverseSystem::cantor();
    let cfg = SuiteConfig { cases: 500, ..SuiteConfig::default() };
    let mut out = Vec::new();
    for s in [arc(bool2()), arc(zmod(3)), arc(trop_trunc(2))] {
        out.push(suites::injectivity(&c, &s, &cfg).map_err(|e| e.to_string())?);
    }
    for s in suites::small_builtins(3) {
        out.push(suites::density_witness_exhaustive(&s).map_err(|e| e.to_string())?);
    }
    all_pass(out)
}

fn criterion_5() -> Verdict {
    let mut lines = Vec::new();
    for s in [arc(bool2()), arc(zmod(2)), arc(zmod(3)), arc(trop_trunc(1))] {
        for x in 0..=2usize {
            let r = bijection_report(x, &s, 1 << 16).map_err(|e| e.to_string())?;
            let expected = (s.size() as u128).pow(x as u32);
            if r.bijection != Status::Pass || r.atom_count as u128 != expected || r.expected != expected {
                return Err(format!("{} with |X| = {x}: {r:?}", s.label()));
            }
            lines.push(format!("{}^{x}={}", s.label(), r.atom_count));
        }
    }
    Ok(format!("atoms {}", lines.join(", ")))
}

fn idempotent_corpus() -> Vec<(Space, Arc<FiniteSemiring>)> {
    let mut out = Vec::new();
    for space in [InverseSystem::cantor(), InverseSystem::nat_infty()] {
        for s in [arc(bool2()), arc(trop_trunc(2)), arc(trop_trunc(3))] {
            out.push((space.clone(), s));
        }
    }
    out
}

fn criterion_6() -> Verdict {
    let cfg = SuiteConfig::default();
    let mut out = Vec::new();
    for (space, s) in idempotent_corpus() {
        out.push(suites::roundtrip(&space, &s, &cfg).map_err(|e| e.to_string())?);
    }
    all_pass(out)
}

fn criterion_7() -> Verdict {
    let cfg = SuiteConfig::default();
    let mut out = Vec::new();
    for (space, s) in idempotent_corpus() {
        out.push(suites::density_join(&space, &s, &cfg).map_err(|e| e.to_string())?);
    }
    all_pass(out)
}

fn criterion_8() -> Verdict {
    let cfg = SuiteConfig::default();
    let mut out = Vec::new();
    for (space, s) in idempotent_corpus() {
        let o = suites::galois(&space, &s, &cfg).map_err(|e| e.to_string())?;
        let coverage = o.coverage.clone().unwrap_or_default();
        // both verdicts must occur, or the check says little
        if coverage.contains(" 0 with") {
            return Err(format!("{}: one-sided corpus ({coverage})", o.law));
        }
        out.push(o);
    }
    all_pass(out)
}

fn criterion_9() -> Verdict {
    let mut out = Vec::new();
    for k in 1..=3 {
        out.push(suites::vietoris(&InverseSystem::finite(k).map_err(|e| e.to_string())?, 0).map_err(|e| e.to_string())?);
    }
    out.push(suites::vietoris(&InverseSystem::cantor(), 3).map_err(|e| e.to_string())?);
    for k in 1..=3 {
        out.push(suites::vietoris_monad(k).map_err(|e| e.to_string())?);
    }
    all_pass(out)
}

fn criterion_10() -> Verdict {
    let mut out = Vec::new();
    for s in [arc(zmod(1)), arc(bool2()), arc(zmod(2)), arc(nat_sat(1))] {
        out.push(suites::freeness(&s, 4).map_err(|e| e.to_string())?);
    }
    all_pass(out)
}

fn criterion_11() -> Verdict {
    let verdict = check_action_joint_continuity(&StageAction::nat_infty_on_three_chain(6), 6).map_err(|e| e.to_string())?;
    let cert = verdict.failure_at("ω").ok_or("no failure reported at ω")?;
    let control = check_action_joint_continuity(&StageAction::regular(arc(trop_trunc(2)), 6), 6).map_err(|e| e.to_string())?;
    if !control.is_pass() {
        return Err("self-action control fails".into());
    }
    Ok(format!("failure at ω: {cert:?}; self-action passes"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("semiring axioms", criterion_1),
        ("monad laws", criterion_2),
        ("measure additivity", criterion_3),
        ("injectivity and density witnesses", criterion_4),
        ("finite duality", criterion_5),
        ("idempotent round trips", criterion_6),
        ("density joins", criterion_7),
        ("galois adjunction", criterion_8),
        ("vietoris specialisation", criterion_9),
        ("freeness", criterion_10),
        ("joint continuity", criterion_11),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({secs:.1}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({secs:.1}s) {detail}", i + 1);
            }
        }
    }
    println!("{} of 11 criteria pass in {:.1}s", 11 - failed, total.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
