//! Property suites: seeded random corpora of level-definable measures and
//! exhaustive enumerations over small instances. Every outcome names the
//! instance it ran on; random failures carry the seed and case index.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;

use crate::density::{density, functions_equal_to_depth, galois_holds, pointwise, to_measure};
use crate::measure::{
    case_rng, combine, density_witness, equal_to_depth, first_difference, free_extension, integrate,
    random_definable, random_sparse, scale, separating_clopen, DensityOutcome, FinSuppFn, Measure,
    SubbasicConstraint,
};
use crate::monad::{FinFn, Idx};
use crate::report::{LawOutcome, LawReport, Status, Witness};
use crate::semiring::{
    natural_order, validate_semimodule, Elem, FiniteSemimodule, FiniteSemiring, SemimoduleDescriptor,
};
use crate::space::{joint_separation, Clopen, ContinuousMap, InverseSystem, Point, Space, Tail};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub cases: u64,
    pub seed: u64,
    /// Definability level of the random measures.
    pub depth: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            cases: 1000,
            seed: 7,
            depth: 5,
        }
    }
}

/// Level of the clopens quantified over by the seeded suites.
pub const CLOPEN_LEVEL: usize = 3;

fn instance(s: &FiniteSemiring, space: &Space) -> String {
    format!("{} on {}", s.label(), space.describe())
}

fn replay(cfg: &SuiteConfig, case: u64) -> Vec<String> {
    vec![format!("seed={}", cfg.seed), format!("case={case}")]
}

/// `∫ f` for a random `f` resolving by `cfg.depth`.
pub fn corpus_measure(space: &Space, s: &Arc<FiniteSemiring>, cfg: &SuiteConfig, case: u64) -> Result<Measure> {
    let f = random_definable(space, s, cfg.depth, &mut case_rng(cfg.seed, case))?;
    Ok(integrate(&f))
}

/// Every clopen at level `≤ level`, indexed by its level-`level` cell mask
/// and presented canonically (so at mixed levels).
pub fn clopens_by_mask(space: &Space, level: usize) -> Result<Vec<Clopen>> {
    let size = space.level_size(level)?;
    if size > 16 {
        return Err(Error::BudgetExceeded {
            needed: 1 << size,
            budget: 1 << 16,
        });
    }
    (0..1usize << size)
        .map(|mask| Ok(Clopen::new(space.clone(), level, (0..size).filter(|c| mask >> c & 1 == 1))?.canonical()))
        .collect()
}

/// Checks once that clopen union and intersection agree with the cell
/// masks the additivity suite indexes by.
fn mask_algebra_agrees(clopens: &[Clopen]) -> Result<Option<(usize, usize)>> {
    for a in 0..clopens.len() {
        for b in a..clopens.len() {
            if clopens[a].or(&clopens[b])? != clopens[a | b] || clopens[a].and(&clopens[b])? != clopens[a & b] {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// `μ(∅) = 0` and `μ(a ∨ b) + μ(a ∧ b) = μ(a) + μ(b)` for all clopen pairs at
/// level `≤ 3`, plus stage compatibility up to `cfg.depth`.
pub fn additivity(space: &Space, s: &Arc<FiniteSemiring>, cfg: &SuiteConfig) -> Result<LawOutcome> {
    let law = format!("additivity[{}]", instance(s, space));
    let clopens = clopens_by_mask(space, CLOPEN_LEVEL)?;
    if let Some((a, b)) = mask_algebra_agrees(&clopens)? {
        return Ok(LawOutcome::fail(
            law,
            0,
            Witness::new(vec![format!("{a:#b}"), format!("{b:#b}")], "clopen operations disagree with cell masks"),
        ));
    }
    let mut checked = 0;
    let mut table = vec![0; clopens.len()];
    for case in 0..cfg.cases {
        let m = corpus_measure(space, s, cfg, case)?;
        if let Some(n) = m.compatibility_failure(cfg.depth)? {
            return Ok(LawOutcome::fail(law, checked, Witness::new(replay(cfg, case), format!("stages incompatible at level {n}"))));
        }
        let stage = m.stage_at(CLOPEN_LEVEL)?;
        for (mask, b) in clopens.iter().enumerate() {
            table[mask] = m.eval(b)?;
            let direct = s.sum((0..stage.base()).filter(|c| mask >> c & 1 == 1).map(|c| stage.get(c)));
            if table[mask] != direct {
                let mut tuple = replay(cfg, case);
                tuple.push(format!("{b:?}"));
                return Ok(LawOutcome::fail(law, checked, Witness::new(tuple, "value depends on the presentation level")));
            }
        }
        if table[0] != s.zero() {
            return Ok(LawOutcome::fail(law, checked, Witness::new(replay(cfg, case), "μ(∅) ≠ 0")));
        }
        for a in 0..table.len() {
            for b in a..table.len() {
                checked += 1;
                if s.add(table[a | b], table[a & b]) != s.add(table[a], table[b]) {
                    let mut tuple = replay(cfg, case);
                    tuple.extend([format!("{:?}", clopens[a]), format!("{:?}", clopens[b])]);
                    return Ok(LawOutcome::fail(law, checked, Witness::new(tuple, "μ(a∨b)+μ(a∧b) ≠ μ(a)+μ(b)")));
                }
            }
        }
    }
    Ok(LawOutcome::pass(law, checked).with_coverage(format!("{} measures, seed {}", cfg.cases, cfg.seed)))
}

/// `to_measure ∘ density = id` and `density ∘ to_measure = id` to
/// `cfg.depth`, along both the pointwise and the stage-family routes.
pub fn roundtrip(space: &Space, s: &Arc<FiniteSemiring>, cfg: &SuiteConfig) -> Result<LawOutcome> {
    let law = format!("roundtrip[{}]", instance(s, space));
    let d = cfg.depth;
    let mut checked = 0;
    for case in 0..cfg.cases {
        let fail = |detail: String| LawOutcome::fail(law.clone(), checked, Witness::new(replay(cfg, case), detail));
        let m = corpus_measure(space, s, cfg, case)?;
        let delta = density(&m)?;
        let back = to_measure(&delta);
        if let Some(n) = first_difference(&back, &m, d)? {
            return Ok(fail(format!("to_measure(density(μ)) differs from μ at level {n}")));
        }
        let again = density(&back)?;
        if !functions_equal_to_depth(&again, &delta, d)? {
            return Ok(fail("density(to_measure(f)) differs from f".into()));
        }
        if let Some(f) = delta.support() {
            for (p, v) in f.support() {
                let read = again.value_at(p)?;
                if read.value != *v || !read.stabilised {
                    return Ok(fail(format!("density(to_measure(f)) at {} is {}", p.label(), s.name(read.value))));
                }
            }
        }
        // the same measure as a bare stage family
        let stages = (0..=d).map(|n| m.stage_at(n)).collect::<Result<Vec<_>>>()?;
        let staged = Measure::from_stages(space.clone(), s.clone(), stages)?;
        let staged_delta = density(&staged)?;
        if !equal_to_depth(&to_measure(&staged_delta), &m, d)?
            || !functions_equal_to_depth(&density(&to_measure(&staged_delta))?, &staged_delta, d)?
        {
            return Ok(fail("stage-family round trip differs".into()));
        }
        let size = space.level_size(d)?;
        for (c, rep) in delta.representatives(d, 0..size)?.iter().enumerate() {
            let (exact, bounded) = (delta.value_at(rep)?.value, staged_delta.eval_pointwise(rep, d)?.value);
            if exact != bounded {
                return Ok(fail(format!("cell {}: pointwise {} vs stage reading {}", space.cell_name(d, c), s.name(exact), s.name(bounded))));
            }
        }
        checked += 1;
    }
    Ok(LawOutcome::pass(law, checked).with_coverage(format!("{} measures, seed {}, depth {d}", cfg.cases, cfg.seed)))
}

/// `μ(b)` is the join of the density over one representative per resolved
/// cell of `b`, for every clopen at level `≤ 3`.
pub fn density_join(space: &Space, s: &Arc<FiniteSemiring>, cfg: &SuiteConfig) -> Result<LawOutcome> {
    let law = format!("density-join[{}]", instance(s, space));
    let order = natural_order(s)?;
    let clopens = clopens_by_mask(space, CLOPEN_LEVEL)?;
    let mut checked = 0;
    for case in 0..cfg.cases {
        let m = corpus_measure(space, s, cfg, case)?;
        let delta = density(&m)?;
        let level = CLOPEN_LEVEL.max(m.exactness_depth());
        let size = space.level_size(level)?;
        let reps = delta.representatives(level, 0..size)?;
        let mut values = Vec::with_capacity(size);
        let mut above = Vec::with_capacity(size);
        for (c, rep) in reps.iter().enumerate() {
            let v = delta.value_at(rep)?;
            if !v.stabilised {
                return Ok(LawOutcome::fail(law, checked, Witness::new(replay(cfg, case), format!("density at {} did not stabilise", rep.label()))));
            }
            values.push(v.value);
            above.push(space.project(level, CLOPEN_LEVEL, c)?);
        }
        for (mask, b) in clopens.iter().enumerate() {
            checked += 1;
            let joined = order.join_all((0..size).filter(|&c| mask >> above[c] & 1 == 1).map(|c| values[c]));
            let direct = m.eval(b)?;
            if joined != direct {
                let mut tuple = replay(cfg, case);
                tuple.push(format!("{b:?}"));
                return Ok(LawOutcome::fail(
                    law,
                    checked,
                    Witness::new(tuple, format!("μ(b) = {} but the join of densities is {}", s.name(direct), s.name(joined))),
                ));
            }
        }
    }
    Ok(LawOutcome::pass(law, checked).with_coverage(format!("{} measures, seed {}", cfg.cases, cfg.seed)))
}

/// A pointwise function below `δ_μ`: a random subset of its points with
/// values lowered in the natural order.
fn below(delta_points: &FinSuppFn, s: &Arc<FiniteSemiring>, rng: &mut impl Rng) -> Result<FinSuppFn> {
    let order = natural_order(s)?;
    let mut support = Vec::new();
    for (p, v) in delta_points.support() {
        if rng.gen_bool(0.7) {
            let lower: Vec<Elem> = s.elements().filter(|&u| order.leq(u, *v)).collect();
            support.push((p.clone(), lower[rng.gen_range(0..lower.len())]));
        }
    }
    FinSuppFn::new(delta_points.space().clone(), s.clone(), support)
}

/// The two sides of the adjunction agree on seeded `(f, μ)` pairs; also
/// checks monotonicity of `δ` and `∫` along `μ ≤ μ + ν`.
pub fn galois(space: &Space, s: &Arc<FiniteSemiring>, cfg: &SuiteConfig) -> Result<LawOutcome> {
    let law = format!("galois[{}]", instance(s, space));
    let order = natural_order(s)?;
    let mut tally = [0u64; 2];
    for case in 0..cfg.cases {
        let mut rng = case_rng(cfg.seed, case);
        let m = integrate(&random_definable(space, s, cfg.depth, &mut rng)?);
        let delta = density(&m)?;
        let own = delta.support().expect("integrals have pointwise densities").clone();
        let f = match rng.gen_range(0..4) {
            0 => delta.clone(),
            1 => pointwise(below(&own, s, &mut rng)?)?,
            2 => {
                // below δ_μ except at one extra point
                let extra = Point::through_cell(
                    space.clone(),
                    cfg.depth + 1,
                    rng.gen_range(0..space.level_size(cfg.depth + 1)?),
                    Tail::Greatest,
                )?;
                let v = rng.gen_range(0..s.size());
                let mut g = below(&own, s, &mut rng)?;
                if g.value_at(&extra)? == s.zero() && own.value_at(&extra)? == s.zero() {
                    g = g.plus(&FinSuppFn::new(space.clone(), s.clone(), vec![(extra, v)])?)?;
                }
                pointwise(g)?
            }
            _ => density(&integrate(&random_definable(space, s, cfg.depth, &mut rng)?))?,
        };
        let check = galois_holds(&f, &m, cfg.depth)?;
        if !check.agrees() {
            let mut tuple = replay(cfg, case);
            tuple.push(format!("{f:?}"));
            return Ok(LawOutcome::fail(
                law,
                case + 1,
                Witness::new(
                    tuple,
                    format!(
                        "∫f ≤ μ is {} but f ≤ δ_μ is {}: {}",
                        check.integral_side,
                        check.pointwise_side,
                        check.witness.unwrap_or_default()
                    ),
                ),
            ));
        }
        tally[usize::from(check.integral_side)] += 1;

        // monotonicity along μ ≤ μ + ν
        let bigger = combine(&m, &integrate(&random_sparse(space, s, cfg.depth, 3, &mut rng)?))?;
        let big_delta = density(&bigger)?;
        for (p, v) in own.support() {
            if !order.leq(*v, big_delta.value_at(p)?.value) {
                return Ok(LawOutcome::fail(law, case + 1, Witness::new(replay(cfg, case), format!("δ is not monotone at {}", p.label()))));
            }
        }
        let probe = Clopen::cell(space.clone(), CLOPEN_LEVEL, rng.gen_range(0..space.level_size(CLOPEN_LEVEL)?))?;
        if !order.leq(delta.integral(&probe)?, big_delta.integral(&probe)?) {
            return Ok(LawOutcome::fail(law, case + 1, Witness::new(replay(cfg, case), format!("∫ is not monotone on {probe:?}"))));
        }
    }
    Ok(LawOutcome::pass(law, cfg.cases).with_coverage(format!(
        "{} pairs, seed {}: {} with both sides true, {} with both false",
        cfg.cases, cfg.seed, tally[1], tally[0]
    )))
}

/// Distinct finitely supported functions have integrals that differ on a
/// clopen at their joint separation level.
pub fn injectivity(space: &Space, s: &Arc<FiniteSemiring>, cfg: &SuiteConfig) -> Result<LawOutcome> {
    let law = format!("injectivity[{}]", instance(s, space));
    let mut checked = 0;
    let mut case = 0;
    while checked < cfg.cases {
        let mut rng = case_rng(cfg.seed, case);
        let f = random_sparse(space, s, cfg.depth + 1, 4, &mut rng)?;
        let g = random_sparse(space, s, cfg.depth + 1, 4, &mut rng)?;
        case += 1;
        if f == g {
            continue;
        }
        checked += 1;
        let fail = |detail: String| {
            let mut tuple = replay(cfg, case - 1);
            tuple.extend([format!("{f:?}"), format!("{g:?}")]);
            LawOutcome::fail(law.clone(), checked, Witness::new(tuple, detail))
        };
        let Some(b) = separating_clopen(&f, &g)? else {
            return Ok(fail("no separating clopen for distinct functions".into()));
        };
        let points: Vec<Point> = f.plus(&g)?.support().iter().map(|(p, _)| p.clone()).collect();
        if b.level() != joint_separation(&points)? {
            return Ok(fail(format!("separating clopen at level {} instead of the joint separation level", b.level())));
        }
        if integrate(&f).eval(&b)? == integrate(&g).eval(&b)? {
            return Ok(fail(format!("integrals agree on {b:?}")));
        }
    }
    Ok(LawOutcome::pass(law, checked).with_coverage(format!("{checked} distinct pairs from {case} draws, seed {}", cfg.seed)))
}

/// Every list of at most three constraints `⟨b, U⟩` with `b` a clopen at
/// level `≤ 2` of Cantor space (as a multiset; order and repetition do not
/// change satisfiability). Satisfiability is decided independently by
/// scanning all level-2 stage functions.
pub fn density_witness_exhaustive(s: &Arc<FiniteSemiring>) -> Result<LawOutcome> {
    let law = format!("density-witness[{} on cantor]", s.label());
    let space = InverseSystem::cantor();
    let level = 2;
    let cells = space.level_size(level)?;
    let k = s.size();
    let stage_count = k.pow(cells as u32);
    if stage_count > 128 {
        return Err(Error::BudgetExceeded {
            needed: stage_count as u128,
            budget: 128,
        });
    }
    // value of every level-2 stage function on every cell mask
    let value = |f: usize, mask: usize| -> Elem {
        s.sum((0..cells).filter(|c| mask >> c & 1 == 1).map(|c| FinFn::digit(s, cells as Idx, f as Idx, c as Idx)))
    };
    let clopens = clopens_by_mask(&space, level)?;
    let mut constraints: Vec<(SubbasicConstraint, u128)> = Vec::new();
    for (mask, b) in clopens.iter().enumerate() {
        for allowed in 0..1usize << k {
            let set: BTreeSet<Elem> = (0..k).filter(|v| allowed >> v & 1 == 1).collect();
            let sat = (0..stage_count)
                .filter(|&f| set.contains(&value(f, mask)))
                .fold(0u128, |acc, f| acc | 1 << f);
            constraints.push((SubbasicConstraint::new(b.clone(), set), sat));
        }
    }
    let everything: u128 = if stage_count == 128 { u128::MAX } else { (1 << stage_count) - 1 };
    let n = constraints.len();
    let mut checked = 0u64;
    let mut witnesses = 0u64;
    let mut lists: Vec<Vec<usize>> = vec![vec![]];
    lists.extend((0..n).map(|i| vec![i]));
    let mut run = |list: &[usize]| -> Result<Option<LawOutcome>> {
        checked += 1;
        let oracle = list.iter().fold(everything, |acc, &i| acc & constraints[i].1) != 0;
        let cs: Vec<SubbasicConstraint> = list.iter().map(|&i| constraints[i].0.clone()).collect();
        let describe = || cs.iter().map(|c| format!("⟨{:?}, {:?}⟩", c.clopen, c.allowed)).collect::<Vec<_>>();
        match density_witness(&space, s, &cs)? {
            DensityOutcome::Witness(f) => {
                let m = integrate(&f);
                for c in &cs {
                    if !c.holds(&m)? {
                        return Ok(Some(LawOutcome::fail(law.clone(), checked, Witness::new(describe(), format!("witness {f:?} violates a constraint")))));
                    }
                }
                if !oracle {
                    return Ok(Some(LawOutcome::fail(law.clone(), checked, Witness::new(describe(), "witness for an unsatisfiable list"))));
                }
                witnesses += 1;
            }
            DensityOutcome::Unsatisfiable { .. } => {
                if oracle {
                    return Ok(Some(LawOutcome::fail(law.clone(), checked, Witness::new(describe(), "satisfiable list reported unsatisfiable"))));
                }
            }
        }
        Ok(None)
    };
    for list in &lists {
        if let Some(out) = run(list)? {
            return Ok(out);
        }
    }
    for i in 0..n {
        for j in i..n {
            if let Some(out) = run(&[i, j])? {
                return Ok(out);
            }
            for l in j..n {
                if let Some(out) = run(&[i, j, l])? {
                    return Ok(out);
                }
            }
        }
    }
    Ok(LawOutcome::pass(law, checked).with_coverage(format!(
        "exhaustive: {checked} lists over {n} constraints, {witnesses} satisfiable"
    )))
}

/// Every finite semimodule of size `≤ max_size` over `s` whose carrier is
/// `0..size` with zero `0`. The action of `0` and `1` is forced, so only the
/// remaining scalars are enumerated.
pub fn all_small_semimodules(s: &Arc<FiniteSemiring>, max_size: usize) -> Result<Vec<FiniteSemimodule>> {
    let free_scalars: Vec<Elem> = s.elements().filter(|&t| t != s.zero() && t != s.one()).collect();
    let mut out = Vec::new();
    for size in 1..=max_size {
        let pairs: Vec<(usize, usize)> = (1..size).flat_map(|a| (a..size).map(move |b| (a, b))).collect();
        let add_tables = size.pow(pairs.len() as u32);
        let action_tables = size.checked_pow(((size - 1) * free_scalars.len()) as u32).unwrap_or(usize::MAX);
        if add_tables.saturating_mul(action_tables) > 1 << 24 {
            return Err(Error::BudgetExceeded {
                needed: add_tables as u128 * action_tables as u128,
                budget: 1 << 24,
            });
        }
        for code in 0..add_tables {
            let mut madd = vec![vec![0; size]; size];
            for (a, row) in madd.iter_mut().enumerate() {
                row[0] = a;
            }
            for (b, cell) in madd[0].iter_mut().enumerate() {
                *cell = b;
            }
            let mut rest = code;
            for &(a, b) in &pairs {
                madd[a][b] = rest % size;
                madd[b][a] = rest % size;
                rest /= size;
            }
            for acode in 0..action_tables {
                let mut action = vec![vec![0; size]; s.size()];
                action[s.one()] = (0..size).collect();
                let mut rest = acode;
                for &t in &free_scalars {
                    for slot in &mut action[t][1..] {
                        *slot = rest % size;
                        rest /= size;
                    }
                }
                let desc = SemimoduleDescriptor {
                    semiring: s.label().to_string(),
                    label: format!("Y{size}#{code}.{acode}"),
                    size,
                    madd: madd.clone(),
                    mzero: 0,
                    action,
                    names: None,
                };
                if validate_semimodule(s, &desc)?.is_pass() {
                    out.push(FiniteSemimodule::new(s.clone(), &desc)?);
                }
            }
        }
    }
    Ok(out)
}

/// For each level set `X_n` with at most two cells, each module `Y` with at
/// most four elements and each map `f: X_n -> Y`: the extension `g` sends
/// `δ_p` to `f(p)`, is additive and homogeneous on all level-`n` measures,
/// and is the only homomorphism `S^{X_n} -> Y` agreeing with `f` on units.
pub fn freeness(s: &Arc<FiniteSemiring>, max_module: usize) -> Result<LawOutcome> {
    let law = format!("freeness[{}]", s.label());
    let modules = all_small_semimodules(s, max_module)?;
    let instances: Vec<(Space, usize)> = vec![
        (InverseSystem::finite(1)?, 0),
        (InverseSystem::finite(2)?, 0),
        (InverseSystem::cantor(), 1),
        (InverseSystem::nat_infty(), 1),
    ];
    let mut checked = 0u64;
    for (space, level) in &instances {
        let xs = space.level_size(*level)?;
        let points: Vec<Point> = (0..xs)
            .map(|c| Point::through_cell(space.clone(), *level, c, Tail::Least))
            .collect::<Result<_>>()?;
        let fns = s.size().pow(xs as u32);
        // measures definable at this level, one per stage function
        let measures: Vec<Measure> = (0..fns)
            .map(|i| {
                let f = FinFn::decode(s.clone(), xs as Idx, i as Idx)?;
                let support = f.support().map(|(c, v)| (points[c as usize].clone(), v)).collect();
                Ok(integrate(&FinSuppFn::new(space.clone(), s.clone(), support)?))
            })
            .collect::<Result<_>>()?;
        let code_of = |m: &Measure| -> Result<usize> { Ok(m.stage_at(*level)?.encode()? as usize) };
        for y in &modules {
            let ysz = y.size();
            for fcode in 0..ysz.pow(xs as u32) {
                let values: Vec<usize> = (0..xs).map(|c| fcode / ysz.pow((xs - 1 - c) as u32) % ysz).collect();
                let map = ContinuousMap::to_finite(space.clone(), *level, ysz, values.clone())?;
                let tag = || vec![space.describe(), y.label().to_string(), format!("f={values:?}")];
                let g: Vec<Elem> = measures.iter().map(|m| free_extension(y, &map, m)).collect::<Result<_>>()?;
                checked += 1;
                for (c, p) in points.iter().enumerate() {
                    let d = crate::measure::dirac(s.clone(), p)?;
                    if g[code_of(&d)?] != values[c] {
                        return Ok(LawOutcome::fail(law, checked, Witness::new(tag(), format!("g(δ_{}) ≠ f", p.label()))));
                    }
                }
                for (i, m1) in measures.iter().enumerate() {
                    for (j, m2) in measures.iter().enumerate() {
                        if g[code_of(&combine(m1, m2)?)?] != y.add(g[i], g[j]) {
                            return Ok(LawOutcome::fail(law, checked, Witness::new(tag(), format!("g is not additive on measures #{i}, #{j}"))));
                        }
                    }
                    for t in s.elements() {
                        if g[code_of(&scale(t, m1)?)?] != y.act(t, g[i]) {
                            return Ok(LawOutcome::fail(law, checked, Witness::new(tag(), format!("g is not homogeneous on measure #{i}"))));
                        }
                    }
                }
                // uniqueness: all homomorphisms S^{X_n} -> Y agreeing on units
                let unit_codes: Vec<usize> = points
                    .iter()
                    .map(|p| code_of(&crate::measure::dirac(s.clone(), p)?))
                    .collect::<Result<_>>()?;
                for hcode in 0..ysz.pow(fns as u32) {
                    let h: Vec<Elem> = (0..fns).map(|i| hcode / ysz.pow((fns - 1 - i) as u32) % ysz).collect();
                    if unit_codes.iter().zip(&values).any(|(&u, &v)| h[u] != v) {
                        continue;
                    }
                    let hom = (0..fns).all(|i| {
                        let fi = FinFn::decode(s.clone(), xs as Idx, i as Idx).expect("in range");
                        (0..fns).all(|j| {
                            let fj = FinFn::decode(s.clone(), xs as Idx, j as Idx).expect("in range");
                            h[fi.plus(&fj).and_then(|x| x.encode()).expect("in range") as usize] == y.add(h[i], h[j])
                        }) && s.elements().all(|t| h[fi.scaled(t).and_then(|x| x.encode()).expect("in range") as usize] == y.act(t, h[i]))
                    });
                    if hom && h != g {
                        return Ok(LawOutcome::fail(law, checked, Witness::new(tag(), format!("a second extension {h:?} exists"))));
                    }
                }
            }
        }
    }
    Ok(LawOutcome::pass(law, checked).with_coverage(format!(
        "exhaustive: {} modules of size ≤ {max_module}, level sets of size ≤ 2",
        modules.len()
    )))
}

/// Boolean measures at a level and closed sets at that level determine each
/// other; `⟨b,{1}⟩` is "meets b" and `⟨¬b,{0}⟩` is "inside b".
pub fn vietoris(space: &Space, max_level: usize) -> Result<LawOutcome> {
    use crate::density::{from_measure, ClosedSetFamily};
    let s = Arc::new(crate::semiring::bool2());
    let law = format!("vietoris[{}]", space.describe());
    let mut checked = 0u64;
    for level in 0..=max_level {
        let size = space.level_size(level)?;
        if size > 8 {
            return Err(Error::BudgetExceeded {
                needed: 1 << size,
                budget: 1 << 8,
            });
        }
        let clopens: Vec<Clopen> = (0..1usize << size)
            .map(|mask| Clopen::new(space.clone(), level, (0..size).filter(|c| mask >> c & 1 == 1)))
            .collect::<Result<_>>()?;
        let mut seen = BTreeSet::new();
        for mask in 0..1usize << size {
            let support = (0..size)
                .filter(|c| mask >> c & 1 == 1)
                .map(|c| Ok((Point::through_cell(space.clone(), level, c, Tail::Least)?, 1)))
                .collect::<Result<Vec<_>>>()?;
            let m = integrate(&FinSuppFn::new(space.clone(), s.clone(), support)?);
            let closed = from_measure(&m)?;
            let cells = closed.cells_at(level)?;
            let expected: BTreeSet<usize> = (0..size).filter(|c| mask >> c & 1 == 1).collect();
            let tag = || vec![format!("level {level}"), format!("{expected:?}")];
            if cells != expected || !seen.insert(cells.clone()) {
                return Ok(LawOutcome::fail(law, checked, Witness::new(tag(), "measure → closed set is not a bijection")));
            }
            let rebuilt = ClosedSetFamily::from_cells(space.clone(), level, cells)?;
            if !equal_to_depth(&rebuilt.to_measure(), &m, level)? {
                return Ok(LawOutcome::fail(law, checked, Witness::new(tag(), "closed set → measure does not invert")));
            }
            for (bmask, b) in clopens.iter().enumerate() {
                checked += 1;
                let meets = mask & bmask != 0;
                let inside = mask & !bmask == 0;
                if closed.in_diamond(b)? != meets || closed.meets(b)? != meets {
                    return Ok(LawOutcome::fail(law, checked, Witness::new(tag(), format!("◊ disagrees with meeting {b:?}"))));
                }
                if closed.in_box(b)? != inside || closed.within(b)? != inside {
                    return Ok(LawOutcome::fail(law, checked, Witness::new(tag(), format!("□ disagrees with containment in {b:?}"))));
                }
            }
        }
        if seen.len() != 1 << size {
            return Ok(LawOutcome::fail(law, checked, Witness::new(vec![format!("level {level}")], "not every closed set is reached")));
        }
    }
    Ok(LawOutcome::pass(law, checked).with_coverage(format!("exhaustive to level {max_level}")))
}

/// Singleton and union on closed sets of a finite level set are the unit
/// and multiplication of the Boolean monad: unit laws for every closed set,
/// multiplication against the monad's for every family, and associativity
/// for every pair of families.
pub fn vietoris_monad(k: usize) -> Result<LawOutcome> {
    use crate::density::{singleton, union, ClosedSetFamily};
    use crate::monad::{mult, DoubleFinFn};
    let law = format!("vietoris-monad[finite:{k}]");
    let space = InverseSystem::finite(k)?;
    let s = Arc::new(crate::semiring::bool2());
    let set_of = |mask: usize| -> Result<ClosedSetFamily> {
        ClosedSetFamily::from_cells(space.clone(), 0, (0..k).filter(|c| mask >> c & 1 == 1).collect())
    };
    // FinFn codes put cell 0 in the most significant digit
    let code_of_mask = |mask: usize| -> usize { (0..k).filter(|c| mask >> c & 1 == 1).map(|c| 1 << (k - 1 - c)).sum() };
    let mask_of = |cells: &BTreeSet<usize>| -> usize { cells.iter().map(|c| 1 << c).sum() };
    let sets = 1usize << k;
    let mut checked = 0u64;
    for mask in 0..sets {
        checked += 1;
        let c = set_of(mask)?;
        let points: Vec<ClosedSetFamily> = (0..k)
            .filter(|x| mask >> x & 1 == 1)
            .map(|x| Ok(singleton(&Point::through_cell(space.clone(), 0, x, Tail::Least)?)))
            .collect::<Result<_>>()?;
        if !union(&space, std::slice::from_ref(&c))?.equal_to_depth(&c, 0)? || !union(&space, &points)?.equal_to_depth(&c, 0)? {
            return Ok(LawOutcome::fail(law, checked, Witness::new(vec![format!("{mask:#b}")], "unit law fails")));
        }
    }
    let family_union = |fam: usize| -> Result<usize> {
        let parts: Vec<ClosedSetFamily> = (0..sets).filter(|m| fam >> m & 1 == 1).map(set_of).collect::<Result<_>>()?;
        Ok(mask_of(&union(&space, &parts)?.cells_at(0)?))
    };
    let unions: Vec<usize> = (0..1usize << sets).map(family_union).collect::<Result<_>>()?;
    for (fam, &u) in unions.iter().enumerate() {
        checked += 1;
        let terms: Vec<(FinFn, Elem)> = (0..sets)
            .filter(|m| fam >> m & 1 == 1)
            .map(|m| Ok((FinFn::decode(s.clone(), k as Idx, code_of_mask(m) as Idx)?, 1)))
            .collect::<Result<_>>()?;
        let flat = mult(&DoubleFinFn::from_terms(s.clone(), k as Idx, &terms)?)?;
        if flat.encode()? as usize != code_of_mask(u) {
            return Ok(LawOutcome::fail(law, checked, Witness::new(vec![format!("{fam:#b}")], "union differs from the monad multiplication")));
        }
    }
    for f1 in 0..unions.len() {
        for f2 in f1..unions.len() {
            checked += 1;
            if unions[f1] | unions[f2] != unions[f1 | f2] {
                return Ok(LawOutcome::fail(law, checked, Witness::new(vec![format!("{f1:#b}"), format!("{f2:#b}")], "union is not associative")));
            }
        }
    }
    Ok(LawOutcome::pass(law, checked).with_coverage("unit: every closed set; multiplication: every family; associativity: every pair of families"))
}

/// Semirings with at most `max` elements among the builtins, smallest
/// parameters first.
pub fn small_builtins(max: usize) -> Vec<Arc<FiniteSemiring>> {
    let mut out = vec![Arc::new(crate::semiring::bool2())];
    for n in 1..=max {
        out.push(Arc::new(crate::semiring::zmod(n)));
    }
    for k in 1..max.saturating_sub(1) {
        out.push(Arc::new(crate::semiring::trop_trunc(k)));
    }
    for n in 1..max {
        out.push(Arc::new(crate::semiring::nat_sat(n)));
    }
    out.retain(|s| s.size() <= max);
    out
}

/// Suites that take `--cases`, `--seed` and `--depth`.
pub const SEEDED: &[&str] = &["additivity", "roundtrip", "density-join", "galois", "injectivity"];

/// Runs a named seeded suite. Suites about densities need an idempotent
/// semiring and report no-op otherwise.
pub fn run_seeded(name: &str, space: &Space, s: &Arc<FiniteSemiring>, cfg: &SuiteConfig) -> Result<LawOutcome> {
    let needs_order = matches!(name, "roundtrip" | "density-join" | "galois");
    if needs_order && !s.is_idempotent() {
        let mut out = LawOutcome::pass(format!("{name}[{}]", instance(s, space)), 0)
            .with_coverage(format!("`{}` is not idempotent", s.label()));
        out.status = Status::NoOp;
        return Ok(out);
    }
    match name {
        "additivity" => additivity(space, s, cfg),
        "roundtrip" => roundtrip(space, s, cfg),
        "density-join" => density_join(space, s, cfg),
        "galois" => galois(space, s, cfg),
        "injectivity" => injectivity(space, s, cfg),
        other => Err(Error::InvalidParameter {
            name: "suite".into(),
            detail: format!("unknown suite `{other}`; expected one of {SEEDED:?}"),
        }),
    }
}

/// All seeded suites on one instance.
pub fn run_all_seeded(space: &Space, s: &Arc<FiniteSemiring>, cfg: &SuiteConfig) -> Result<LawReport> {
    let mut report = LawReport::new(format!("properties of {}", instance(s, space)));
    for name in SEEDED {
        report.push(run_seeded(name, space, s, cfg)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{bool2, trop_trunc, zmod};

    fn small() -> SuiteConfig {
        SuiteConfig {
            cases: 20,
            seed: 3,
            depth: 4,
        }
    }

    #[test]
    fn seeded_suites_pass_on_small_corpora() {
        let c = InverseSystem::cantor();
        for s in [Arc::new(bool2()), Arc::new(trop_trunc(2))] {
            let report = run_all_seeded(&c, &s, &small()).unwrap();
            assert_eq!(report.status(), Status::Pass, "{report:?}");
        }
        let z = Arc::new(zmod(3));
        let report = run_all_seeded(&InverseSystem::nat_infty(), &z, &small()).unwrap();
        assert_eq!(report.failures().count(), 0, "{report:?}");
        assert_eq!(report.law("galois[zmod:3 on nat_infty]").map(|l| l.status), Some(Status::NoOp));
    }

    #[test]
    fn small_module_catalogue() {
        let b = Arc::new(bool2());
        // join-semilattices with bottom 0; on three elements only the two chains
        let counts: Vec<usize> = (1..=3)
            .map(|k| all_small_semimodules(&b, k).unwrap().iter().filter(|m| m.size() == k).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2]);
        let z2 = Arc::new(zmod(2));
        let sizes: Vec<usize> = all_small_semimodules(&z2, 4).unwrap().iter().map(|m| m.size()).collect();
        // Z/2 and (Z/2)² on labelled carriers with zero 0
        assert_eq!(sizes.iter().filter(|&&n| n == 2).count(), 1);
        assert_eq!(sizes.iter().filter(|&&n| n == 3).count(), 0);
        assert_eq!(sizes.iter().filter(|&&n| n == 4).count(), 1);
    }

    #[test]
    fn builtin_catalogue() {
        let labels: Vec<String> = small_builtins(3).iter().map(|s| s.label().to_string()).collect();
        assert!(labels.contains(&"trop_trunc:1".to_string()) && labels.contains(&"zmod:3".to_string()));
        assert!(small_builtins(3).iter().all(|s| s.size() <= 3));
    }
}
