//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the test
//! fails if any criterion fails. All tolerances and time budgets are pinned
//! as constants below.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pastlab::certificates::{check_proof_rule, check_rsm, in_loop_rsm_from_bound, rsm_bound, RsmCert, RuleCert};
use pastlab::exploration::{
    build_tree, collapse_to_state_graph, exp_reach_runtime_bounds, reachable_queries, termination_prob_upto,
    ast_semicheck, ast_search, Limits, NodeKind, SemicheckConfig, SeriesWalker, StateGraph,
};
use pastlab::hydra::{line_hydra, play_round, HydraState};
use pastlab::scheduling::{constant, enumerate_partial_schedules, hashed, standard_extension, Scheduler};
use pastlab::syntax::{AExpr, ArithOp, BExpr, CmpOp, Program};
use pastlab::transforms::{
    emit_ordinal_program, emit_tree_reduction, inc_program, is_knievel, to_knievel, unsoundness_program,
    unsoundness_program_capped, KnievelPolicy, TreeRule, TreeSpec,
};
use pastlab::{parse, Direction, ExecState, Ordinal};

type Q = BigRational;

const C1_PROGRAMS: usize = 500;
const C1_MAX_DEPTH: u32 = 5;
const C1_TREE_DEPTH: usize = 14;
const C1_BUDGET: Duration = Duration::from_secs(30);
const C2_BUDGET: Duration = Duration::from_secs(5);
const C3_MAX_K: usize = 200;
const C4_GAMES: usize = 200;
const C4_MAX_NODES: usize = 12;
const C4_MAX_E: u32 = 4;
const C4_ROUNDS: usize = 30;
const C4_GROWTH_CAP: usize = 2_000;
const C5_MAX_E: u32 = 10;
const C6_SCHEDULE_DEPTH: usize = 20;
const C6_MAX_QUERIES: usize = 10;
const C6_SERIES_DEPTH: usize = 120;
const C7_CAPS: [u64; 3] = [3, 4, 5];
const C7_TARGET: i64 = 100;
const C7_MAX_STEPS: usize = 200_000;
const C8_MAX_SCHEDULES: u128 = 256;
const C8_DEPTH: usize = 600;
const C8_RESIDUAL_EXP: u32 = 6;
const C8_ZEROS_TARGET: i64 = 5;
const C8_ZEROS_MAX_STEPS: usize = 10_000;
const C8_CONVERGE_K: (usize, usize) = (400, 800);
const C8_CONVERGE_GAP_EXP: u32 = 20;
const C9_SCHEDULERS: u64 = 50;
const C9_DEPTH: usize = 100;
const C10_CAP: usize = 64;
const C11_TRIPLES: usize = 1000;

fn limits() -> Limits {
    Limits::new(2_000_000)
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn half_pow(k: u32) -> Q {
    Q::new(BigUint::one().into(), (BigUint::one() << k).into())
}

fn prog(name: &str) -> Program {
    let path = format!("{}/../../programs/{name}", env!("CARGO_MANIFEST_DIR"));
    parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---------------------------------------------------------------- 1

fn random_aexpr(rng: &mut ChaCha8Rng, depth: u32) -> AExpr {
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.5) {
            AExpr::int(rng.gen_range(-2..=3))
        } else {
            AExpr::var(["x", "y"][rng.gen_range(0..2)])
        };
    }
    let op = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul][rng.gen_range(0..3)];
    AExpr::Bin(op, Box::new(random_aexpr(rng, depth - 1)), Box::new(random_aexpr(rng, depth - 1)))
}

fn random_bexpr(rng: &mut ChaCha8Rng) -> BExpr {
    let op = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge][rng.gen_range(0..6)];
    let b = BExpr::cmp(op, random_aexpr(rng, 1), random_aexpr(rng, 1));
    match rng.gen_range(0..4) {
        0 => BExpr::not(b),
        1 => BExpr::and(b, BExpr::cmp(CmpOp::Lt, AExpr::var("x"), AExpr::int(4))),
        _ => b,
    }
}

fn random_program(rng: &mut ChaCha8Rng, depth: u32) -> Program {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => Program::Skip,
            1 => Program::Exit,
            _ => Program::assign(["x", "y"][rng.gen_range(0..2)], random_aexpr(rng, 2)),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_program(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => Program::seq(sub(rng), sub(rng)),
        1 => {
            let (n, d) = [(1, 2), (1, 3), (2, 3), (1, 4)][rng.gen_range(0..4)];
            Program::prob(sub(rng), AExpr::lit(q(n, d)), sub(rng))
        }
        2 => Program::nondet(sub(rng), sub(rng)),
        3 => Program::if_else(random_bexpr(rng), sub(rng), sub(rng)),
        _ => Program::while_loop(random_bexpr(rng), sub(rng)),
    }
}

fn ast_depth(p: &Program) -> u32 {
    match p {
        Program::Seq(a, b) | Program::ProbChoice(a, _, b) | Program::NondetChoice(a, b) | Program::If(_, a, b) => {
            1 + ast_depth(a).max(ast_depth(b))
        }
        Program::While(_, b) => 1 + ast_depth(b),
        _ => 0,
    }
}

fn c1_conservation() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut levels_checked = 0usize;
    for i in 0..C1_PROGRAMS {
        let p = random_program(&mut rng, C1_MAX_DEPTH);
        ensure(ast_depth(&p) <= C1_MAX_DEPTH, "generator exceeded depth")?;
        let mut f = hashed(rng.gen());
        let tree = build_tree(&p, &mut f, C1_TREE_DEPTH, limits()).map_err(|e| format!("program {i}: {e}"))?;
        // at depth d: terminal leaves at depth <= d plus live nodes at depth d
        let mut terminal = Q::zero();
        for (d, level) in tree.levels().iter().enumerate() {
            let mut live = Q::zero();
            for &n in level {
                let s = &tree.nodes[n].state;
                if s.is_terminal() {
                    terminal += &s.prob;
                } else {
                    live += &s.prob;
                }
            }
            if level.is_empty() {
                break;
            }
            ensure(&terminal + &live == Q::one(), format!("program {i} depth {d}: mass {}", &terminal + &live))?;
            levels_checked += 1;
        }
    }
    let took = start.elapsed();
    ensure(took < C1_BUDGET, format!("took {took:?}"))?;
    Ok(format!("{C1_PROGRAMS} programs, {levels_checked} levels, {took:.2?}"))
}

// ---------------------------------------------------------------- 2

/// Probability that a fair ±1 walk from 1 hits 0 within `n` moves, by
/// enumerating all coin strings.
fn ballot_oracle(n: u32) -> Q {
    let mut hits = 0u64;
    for coins in 0..(1u64 << n) {
        let mut x = 1i64;
        for i in 0..n {
            x += if (coins >> i) & 1 == 1 { 1 } else { -1 };
            if x == 0 {
                hits += 1;
                break;
            }
        }
    }
    Q::new(hits.into(), (1u64 << n).into())
}

/// Depths at which terminal leaves appear, smallest first.
fn terminal_depths(p: &Program, depth: usize) -> Vec<usize> {
    let tree = build_tree(p, &mut constant(Direction::Ln), depth, limits()).unwrap();
    let set: BTreeSet<usize> = tree.terminal_leaves().iter().map(|&i| tree.nodes[i].depth).collect();
    set.into_iter().collect()
}

fn c2_random_walk() -> Outcome {
    let start = Instant::now();
    let p = prog("random_walk.pgcl");
    let depths = terminal_depths(&p, 40);
    ensure(depths.len() >= 2, "walk never terminates in the explored tree")?;
    // hits happen after an odd number of moves: iteration length is half the gap
    let first = depths[0];
    let per_iter = (depths[1] - depths[0]) / 2;
    let mut parts = Vec::new();
    for (n, expected) in [(1u32, q(1, 2)), (3, q(5, 8)), (5, q(11, 16))] {
        let oracle = ballot_oracle(n);
        ensure(oracle == expected, format!("oracle at horizon {n} is {oracle}"))?;
        let k = first + (n as usize - 1) * per_iter;
        let got = termination_prob_upto(&p, &mut constant(Direction::Ln), k, limits()).map_err(|e| e.to_string())?;
        ensure(got == oracle, format!("horizon {n} (depth {k}): got {got}, oracle {oracle}"))?;
        parts.push(format!("n={n}@{k}: {got}"));
    }
    let took = start.elapsed();
    ensure(took < C2_BUDGET, format!("took {took:?}"))?;
    Ok(format!("{}, {took:.2?}", parts.join(", ")))
}

// ---------------------------------------------------------------- 3

/// `Σ_{i≥1} i·x^i = x/(1-x)^2`.
fn weighted_geometric(x: &Q) -> Q {
    x / ((Q::one() - x) * (Q::one() - x))
}

fn c3_geometric() -> Outcome {
    let p = prog("geometric.pgcl");
    let depths = terminal_depths(&p, 40);
    let first = depths[0];
    let s = depths[1] - depths[0];
    // exit at first + s·(i-1) with probability 2^-i, i ≥ 1
    let half = q(1, 2);
    let offset = Q::from_integer((first as i64 - s as i64).into());
    let limit = offset * (&half / (Q::one() - &half)) + Q::from_integer((s as i64).into()) * weighted_geometric(&half);
    let mut w = SeriesWalker::termination(ExecState::initial(&p), limits());
    let mut f = constant(Direction::Ln);
    let mut prev = Q::zero();
    for k in 0..=C3_MAX_K {
        w.advance_to(k, &mut f).map_err(|e| e.to_string())?;
        let l = w.lower().clone();
        ensure(l >= prev, format!("L({k}) decreased"))?;
        let gap = &limit - &l;
        let bound = Q::from_integer((s as i64).into())
            * (q(k as i64, s as i64) + Q::from_integer(2.into()))
            * half_pow((k / s) as u32);
        ensure(gap >= Q::zero() && gap <= bound, format!("k={k}: limit - L = {gap} vs bound {bound}"))?;
        prev = l;
    }
    Ok(format!("s = {s}, limit = {limit}, L({C3_MAX_K}) = {:.12}", approx(&prev)))
}

fn approx(r: &Q) -> f64 {
    pastlab::rational::approx(r)
}

// ---------------------------------------------------------------- 4

fn random_hydra(rng: &mut ChaCha8Rng) -> HydraState {
    let mut h = HydraState::root_only();
    let size = rng.gen_range(2..=C4_MAX_NODES);
    let mut ids = vec![h.root()];
    while ids.len() < size {
        let parent = ids[rng.gen_range(0..ids.len())];
        ids.push(h.add_child(parent));
    }
    h
}

fn subtree_size(h: &HydraState, v: usize) -> usize {
    1 + h.children(v).map(|c| subtree_size(h, c)).sum::<usize>()
}

fn c4_hydra_rank() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut rounds = 0usize;
    let mut capped = 0usize;
    for game in 0..C4_GAMES {
        let mut h = random_hydra(&mut rng);
        for _ in 0..C4_ROUNDS {
            let heads = h.heads();
            if heads.is_empty() || h.node_count() > C4_GROWTH_CAP {
                break;
            }
            let leaf = heads[rng.gen_range(0..heads.len())];
            let parent = h.parent(leaf).expect("heads have parents");
            let has_gp = h.parent(parent).is_some();
            let mut e = if has_gp { rng.gen_range(0..=C4_MAX_E) } else { 0 };
            // keep the regrown tree within the size cap by lowering e
            let sub = subtree_size(&h, parent);
            let grown = |e: u32| &h.n * BigUint::from(4u32).pow(e) * BigUint::from(sub) + h.node_count();
            while e > 0 && grown(e) > BigUint::from(C4_GROWTH_CAP) {
                e -= 1;
            }
            if has_gp && grown(e) > BigUint::from(C4_GROWTH_CAP) {
                capped += 1;
                break;
            }
            let outs = play_round(&h, leaf, e).map_err(|err| format!("game {game}: {err}"))?;
            let before = h.t();
            let survivor = outs.into_iter().find(|o| o.survived).and_then(|o| o.result).expect("survivor");
            let after = survivor.t();
            ensure(after < before, format!("game {game}: T went from {before} to {after}"))?;
            rounds += 1;
            h = survivor;
        }
    }
    Ok(format!("{C4_GAMES} games, {rounds} surviving rounds, 0 violations ({capped} games stopped at the size cap)"))
}

// ---------------------------------------------------------------- 5

fn c5_hydra_divergence() -> Outcome {
    let h = line_hydra();
    let leaf = h.heads()[0];
    for e in 0..=C5_MAX_E {
        let outs = play_round(&h, leaf, e).map_err(|x| x.to_string())?;
        let s = outs.iter().find(|o| o.survived).expect("survivor");
        let heads = s.result.as_ref().unwrap().heads().len();
        let product = &s.prob * Q::from_integer(heads.into());
        let expected = Q::from_integer((4u64 << e).into());
        ensure(product == expected, format!("e={e}: {product} != {expected}"))?;
        let floor = Q::from_integer((1u64 << e).into()) * half_pow(1);
        ensure(product >= floor, format!("e={e}: below 2^(e-1)"))?;
        ensure(s.prob == half_pow(e), format!("e={e}: survival {}", s.prob))?;
    }
    Ok(format!("e = 0..{C5_MAX_E}: survival x heads = 4*2^e"))
}

// ---------------------------------------------------------------- 6

fn non_terminal(g: &StateGraph) -> Vec<bool> {
    (0..g.len()).map(|s| !g.is_terminal(s)).collect()
}

fn schedules_for(p: &Program, max_m: usize, max_queries: usize) -> (usize, Vec<Vec<Direction>>) {
    let mut best = (0, Vec::new());
    for m in 0..=max_m {
        let qs = reachable_queries(p, m, limits()).unwrap();
        let dedup: BTreeSet<_> = qs.into_iter().filter(|h| h.len() <= m).collect();
        if dedup.len() > max_queries {
            break;
        }
        best = (m, dedup.into_iter().collect());
    }
    best
}

fn c6_rsm_soundness() -> Outcome {
    let sources = [
        "x := 0; while (x < 3) { { x := x + 1 } [] { { x := x + 2 } <1/2> { skip } } }",
        "c := 0; while (c = 0) { { skip } [] { skip; skip }; { c := 1 } <1/2> { skip } }",
        "x := 2; while (x > 0) { { x := x - 1 } <1/3> { { skip } [] { x := x - 1 } } }",
    ];
    let mut parts = Vec::new();
    for src in sources {
        let p = parse(src).unwrap();
        let g = collapse_to_state_graph(&p, 10_000).map_err(|e| e.to_string())?;
        let cert = in_loop_rsm_from_bound(&g, &non_terminal(&g), &Q::from_integer(1_000_000.into()))
            .map_err(|e| e.to_string())?;
        ensure(check_rsm(&g, &cert).unwrap().ok, format!("certificate rejected for `{src}`"))?;
        let bound = rsm_bound(&cert, g.key(g.initial)).unwrap();
        let (m, queries) = schedules_for(&p, C6_SCHEDULE_DEPTH, C6_MAX_QUERIES);
        let mut count = 0;
        let mut worst = Q::zero();
        for ps in enumerate_partial_schedules(m, &queries, 100).map_err(|e| e.to_string())? {
            let mut f = standard_extension(ps);
            let b = exp_reach_runtime_bounds(&p, &mut f, &|s| s.is_terminal(), C6_SERIES_DEPTH, limits())
                .map_err(|e| e.to_string())?;
            ensure(b.lower <= bound, format!("`{src}`: lower {} exceeds h/eps = {bound}", b.lower))?;
            worst = worst.max(b.lower);
            count += 1;
        }
        parts.push(format!("{count} schedules (m={m}) max {:.4} <= {bound}", approx(&worst)));
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------- 7

fn chain_graph() -> StateGraph {
    StateGraph::from_json_str(
        r#"{"initial":"a","nodes":[{"key":"a","terminal":false},{"key":"b","terminal":false},{"key":"c","terminal":true}],
            "edges":[{"from":"a","to":"b","kind":"det"},{"from":"b","to":"c","kind":"det"}]}"#,
    )
    .unwrap()
}

fn chain_cert() -> RuleCert {
    RuleCert::from_json_str(
        r#"{"g":{"a":"2","b":"1","c":"0"},
            "k":{"a":{"epsilon":"1","h":{"a":"1","b":"0","c":"0"}},
                 "b":{"epsilon":"1","h":{"a":"0","b":"1","c":"0"}}}}"#,
    )
    .unwrap()
}

/// Rank ω on states that can still reach a probabilistic choice, the
/// longest distance to a terminal on the deterministic tail.
fn unsoundness_cert(g: &StateGraph) -> Result<RuleCert, String> {
    let n = g.len();
    let in_loop: Vec<bool> = (0..n)
        .map(|s| {
            let r = g.reach(s);
            (0..n).any(|t| r[t] && matches!(g.kind(t), NodeKind::Prob(..)))
        })
        .collect();
    let mut dist: Vec<Option<u64>> = vec![None; n];
    fn longest(g: &StateGraph, s: usize, dist: &mut Vec<Option<u64>>) -> u64 {
        if let Some(d) = dist[s] {
            return d;
        }
        let d = if g.is_terminal(s) {
            0
        } else {
            1 + g.successors(s).into_iter().map(|t| longest(g, t, dist)).max().unwrap_or(0)
        };
        dist[s] = Some(d);
        d
    }
    let mut cert = RuleCert::default();
    for s in 0..n {
        let key = g.key(s).to_string();
        let rank = if in_loop[s] { Ordinal::omega() } else { Ordinal::from_natural(longest(g, s, &mut dist)) };
        cert.g.insert(key.clone(), rank);
        if g.is_terminal(s) {
            continue;
        }
        let k = if in_loop[s] {
            let reach = g.reach(s);
            let region: Vec<bool> = (0..n).map(|t| reach[t] && in_loop[t]).collect();
            in_loop_rsm_from_bound(g, &region, &Q::from_integer(1_000_000_000.into())).map_err(|e| e.to_string())?
        } else {
            RsmCert { h: BTreeMap::from([(key.clone(), Q::one())]), epsilon: Q::one() }
        };
        cert.k.insert(key, k);
    }
    Ok(cert)
}

fn c7_proof_rule() -> Outcome {
    let g = chain_graph();
    let cert = chain_cert();
    ensure(check_proof_rule(&g, &cert).unwrap().ok, "(a) valid chain certificate rejected")?;
    let mut bad = cert.clone();
    bad.g.insert("c".into(), Ordinal::one());
    let v = check_proof_rule(&g, &bad).unwrap();
    ensure(!v.ok && v.violations.iter().any(|x| x.node == "c"), "(b) g(terminal) != 0 accepted")?;

    let mut sizes = Vec::new();
    for cap in C7_CAPS {
        let g = collapse_to_state_graph(&unsoundness_program_capped(cap), 1_000_000).map_err(|e| e.to_string())?;
        let cert = unsoundness_cert(&g)?;
        let v = check_proof_rule(&g, &cert).map_err(|e| e.to_string())?;
        ensure(v.ok, format!("(c) cap {cap}: certificate rejected: {:?}", v.violations.first()))?;
        sizes.push(g.len());
    }
    let p = unsoundness_program();
    ensure(!is_knievel(&p), "(c) unsoundness program is in Knievel form")?;
    let mut w = SeriesWalker::termination(ExecState::initial(&p), limits());
    let mut f = constant(Direction::Ln);
    let target = Q::from_integer(C7_TARGET.into());
    while *w.lower() <= target {
        ensure(w.depth() < C7_MAX_STEPS, format!("(c) lower bound only {} after {C7_MAX_STEPS} steps", w.lower()))?;
        w.advance(&mut f).map_err(|e| e.to_string())?;
    }
    Ok(format!(
        "chain ok, bad rank rejected, capped certificates accepted (graphs {sizes:?}), lower > {C7_TARGET} at depth {}",
        w.depth()
    ))
}

// ---------------------------------------------------------------- 8

fn c8_reduction() -> Outcome {
    // (a) root-only tree: every schedule drains the frontier
    let p = emit_tree_reduction(&TreeSpec::root_only()).unwrap();
    let mut m = 0;
    let mut queries = Vec::new();
    loop {
        let qs: BTreeSet<_> = reachable_queries(&p, m + 1, limits()).unwrap().into_iter().collect();
        if (1u128 << qs.len().min(127)) > C8_MAX_SCHEDULES || m + 1 > C8_DEPTH {
            break;
        }
        m += 1;
        queries = qs.into_iter().collect();
    }
    let threshold = half_pow(C8_RESIDUAL_EXP);
    let mut count = 0;
    let mut worst = Q::zero();
    for ps in enumerate_partial_schedules(m, &queries, 100).map_err(|e| e.to_string())? {
        let mut f = standard_extension(ps);
        let mut w = SeriesWalker::termination(ExecState::initial(&p), limits());
        w.advance_to(C8_DEPTH, &mut f).map_err(|e| e.to_string())?;
        let residual = w.alive();
        ensure(residual < threshold, format!("(a) residual {residual} at depth {C8_DEPTH}"))?;
        worst = worst.max(residual);
        count += 1;
    }
    ensure(count as u128 <= C8_MAX_SCHEDULES, "(a) too many schedules")?;

    // (b) all-zeros tree: the branch-following scheduler never stops
    let p = emit_tree_reduction(&TreeSpec::Rule(TreeRule::AllZeros)).unwrap();
    let mut w = SeriesWalker::termination(ExecState::initial(&p), limits());
    let mut f = constant(Direction::Rn);
    let target = Q::from_integer(C8_ZEROS_TARGET.into());
    while *w.lower() <= target {
        ensure(w.depth() < C8_ZEROS_MAX_STEPS, "(b) lower bound stuck")?;
        w.advance(&mut f).map_err(|e| e.to_string())?;
    }
    let zeros_depth = w.depth();

    // (c) a scheduler that keeps the number generator spinning: bounds converge
    let p = emit_tree_reduction(&TreeSpec::Rule(TreeRule::BoundedDepth(2))).unwrap();
    let mut w = SeriesWalker::termination(ExecState::initial(&p), limits());
    let mut f = constant(Direction::Ln);
    w.advance_to(C8_CONVERGE_K.0, &mut f).map_err(|e| e.to_string())?;
    let l1 = w.lower().clone();
    w.advance_to(C8_CONVERGE_K.1, &mut f).map_err(|e| e.to_string())?;
    let l2 = w.lower().clone();
    let gap = &l2 - &l1;
    let tol = half_pow(C8_CONVERGE_GAP_EXP);
    ensure(gap < tol && w.alive() < tol, format!("(c) gap {gap}, alive {}", w.alive()))?;
    Ok(format!(
        "(a) {count} schedules m={m}, worst residual {:.3e}; (b) lower > {C8_ZEROS_TARGET} at depth {zeros_depth}; (c) L = {:.6}",
        approx(&worst),
        approx(&l2)
    ))
}

// ---------------------------------------------------------------- 9

fn c9_knievel_closure() -> Outcome {
    let mut outputs: Vec<(String, Program)> = Vec::new();
    for src in ["x := 1; x := 2", "{ x := 1 } <1/3> { skip; skip }; y := x"] {
        outputs.push((format!("to_knievel({src})"), to_knievel(&parse(src).unwrap(), KnievelPolicy::default()).unwrap()));
    }
    for name in ["random_walk.pgcl", "pbast_loop.pgcl", "geometric.pgcl"] {
        outputs.push((format!("to_knievel({name})"), to_knievel(&prog(name), KnievelPolicy::default()).unwrap()));
    }
    let specs = [
        TreeSpec::root_only(),
        TreeSpec::explicit([vec![], vec![0], vec![1], vec![1, 0]]).unwrap(),
        TreeSpec::Rule(TreeRule::Full),
        TreeSpec::Rule(TreeRule::AllZeros),
        TreeSpec::Rule(TreeRule::BoundedDepth(2)),
    ];
    for s in &specs {
        outputs.push((format!("reduction({})", s.to_json()), emit_tree_reduction(s).unwrap()));
        outputs.push((format!("ordinal({})", s.to_json()), emit_ordinal_program(s).unwrap()));
    }
    outputs.push(("inc".into(), inc_program()));
    for (name, p) in &outputs {
        ensure(is_knievel(p), format!("{name} is not in Knievel form"))?;
        for seed in 0..C9_SCHEDULERS {
            let mut f: Box<dyn Scheduler> = Box::new(hashed(seed));
            let mut w = SeriesWalker::termination(ExecState::initial(p), limits());
            w.advance_to(C9_DEPTH, &mut f).map_err(|e| format!("{name}: {e}"))?;
            ensure(w.max_live_per_depth() <= 1, format!("{name}, seed {seed}: {} live states", w.max_live_per_depth()))?;
        }
    }
    Ok(format!("{} programs x {C9_SCHEDULERS} schedulers, depth {C9_DEPTH}", outputs.len()))
}

// ---------------------------------------------------------------- 10

fn c10_semicheck() -> Outcome {
    let cfg = SemicheckConfig { limits: limits(), query_cap: 16, jobs: 1 };
    let delta = q(3, 4);
    let n = ast_search(&prog("pbast_loop.pgcl"), &delta, C10_CAP, &cfg).map_err(|e| e.to_string())?;
    let Some(n) = n else {
        return Err(format!("first loop not certified for any n <= {C10_CAP}"));
    };
    let spin = parse("while (true) { skip }").unwrap();
    for m in 0..=C10_CAP {
        ensure(!ast_semicheck(&spin, &delta, m, &cfg).map_err(|e| e.to_string())?, format!("spin loop passed at n={m}"))?;
    }
    Ok(format!("first loop true at n = {n}; spin loop false for all n <= {C10_CAP}"))
}

// ---------------------------------------------------------------- 11

/// Independent model of ordinals below ω^ω^ω: a multiset of exponents, each
/// exponent a polynomial in ω with natural coefficients (index = degree).
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly(Vec<u64>);

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    fn text(&self) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (d, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            parts.push(if d == 0 { c.to_string() } else { format!("w^({d})*{c}") });
        }
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Model(BTreeMap<Poly, u64>);

impl Model {
    fn sum(&self, o: &Model) -> Model {
        let mut m = self.0.clone();
        for (e, c) in &o.0 {
            *m.entry(e.clone()).or_insert(0) += c;
        }
        Model(m)
    }

    fn cmp(&self, o: &Model) -> Ordering {
        self.0.iter().rev().cmp(o.0.iter().rev())
    }

    fn text(&self) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(e, c)| if e.0.is_empty() { c.to_string() } else { format!("w^({})*{c}", e.text()) })
            .collect();
        parts.join(" + ")
    }
}

fn random_model(rng: &mut ChaCha8Rng) -> Model {
    let mut m = BTreeMap::new();
    for _ in 0..rng.gen_range(0..4) {
        let deg = rng.gen_range(0..4);
        let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..3)).collect();
        if deg > 0 {
            coeffs[deg - 1] = rng.gen_range(1..3);
        }
        *m.entry(Poly(coeffs)).or_insert(0) += rng.gen_range(1..4);
    }
    Model(m)
}

fn c11_ordinal_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..C11_TRIPLES {
        let ms = [random_model(&mut rng), random_model(&mut rng), random_model(&mut rng)];
        let os: Vec<Ordinal> = ms.iter().map(|m| Ordinal::parse(&m.text()).unwrap()).collect();
        let (a, b, c) = (&os[0], &os[1], &os[2]);
        let fail = |what: &str| format!("triple {i} ({a}, {b}, {c}): {what}");
        ensure(a.height() <= 2, fail("not below w^w^w"))?;
        ensure(a.natural_sum(b) == b.natural_sum(a), fail("natural sum not commutative"))?;
        ensure(a.natural_sum(b).natural_sum(c) == a.natural_sum(&b.natural_sum(c)), fail("not associative"))?;
        ensure(a.natural_sum(b) == Ordinal::parse(&ms[0].sum(&ms[1]).text()).unwrap(), fail("sum disagrees with model"))?;
        ensure(a.cmp(b) == ms[0].cmp(&ms[1]), fail("compare disagrees with model"))?;
        ensure(a.cmp(b) == b.cmp(a).reverse(), fail("compare not antisymmetric"))?;
        ensure((a.cmp(b) == Ordering::Equal) == (a == b), fail("compare equal but values differ"))?;
        if a < b {
            ensure(a.natural_sum(c) < b.natural_sum(c), fail("not strictly monotone"))?;
        }
        for o in &os {
            ensure(Ordinal::parse(&o.to_text()).as_ref() == Ok(o), fail("parse/print round-trip"))?;
        }
    }
    Ok(format!("{C11_TRIPLES} triples"))
}

// ----------------------------------------------------------------

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 semantics conservation", c1_conservation),
        ("2 random walk termination probabilities", c2_random_walk),
        ("3 geometric loop runtime bounds", c3_geometric),
        ("4 hydra rank decrease", c4_hydra_rank),
        ("5 hydra divergence witness", c5_hydra_divergence),
        ("6 RSM soundness", c6_rsm_soundness),
        ("7 proof-rule regressions", c7_proof_rule),
        ("8 reduction behavior", c8_reduction),
        ("9 Knievel syntactic closure", c9_knievel_closure),
        ("10 AST semi-check", c10_semicheck),
        ("11 ordinal laws", c11_ordinal_laws),
    ];
    let total = criteria.len();
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(why) => {
                println!("FAIL  {name}: {why} [{:.2?}]", start.elapsed());
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {total} criteria passed");
    } else {
        println!("acceptance: failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
