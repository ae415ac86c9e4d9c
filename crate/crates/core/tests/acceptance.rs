//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.
//!
//! `ACCEPTANCE_SLOW=1` also runs the long Reversi series.
//! `ACCEPTANCE_ONLY=3,4` restricts the run to the listed criteria.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use boardmind_core::arena::{run_series_with, SeriesOutcome, Side};
use boardmind_core::clock::MonotonicClock;
use boardmind_core::prelude::*;
use boardmind_core::rng::seeded;
use boardmind_core::search::{LeafEvaluator, PlayoutLeaf};
use rand::Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }
}

fn spec(id: GameId) -> GameSpec {
    GameSpec::new(id, RuleVariant::default()).unwrap()
}

// ---------------------------------------------------------------- oracles

/// Standard normal CDF by composite Simpson integration of the density.
fn normal_cdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let (a, n) = (z.min(0.0), 20_000);
    let integrate = |lo: f64, hi: f64| {
        let h = (hi - lo) / n as f64;
        let mut s = density(lo) + density(hi);
        for i in 1..n {
            s += density(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    // P(Z <= z) = 0.5 +/- integral between 0 and |z|
    if z >= 0.0 {
        0.5 + integrate(0.0, z)
    } else {
        0.5 - integrate(a, 0.0)
    }
}

/// Deterministic, zero-sum leaf value.
struct StubLeaf;

fn stub_value(state: &GameState, perspective: Player) -> f64 {
    let mover = state.to_move();
    let rel: String = state
        .cells()
        .iter()
        .map(|c| match c {
            None => '.',
            Some(q) if *q == mover => 'm',
            Some(_) => 'o',
        })
        .collect();
    let mut hasher = DefaultHasher::new();
    rel.hash(&mut hasher);
    let h = (hasher.finish() % 1001) as f64 / 1000.0;
    if mover == perspective { h } else { 1.0 - h }
}

impl LeafEvaluator for StubLeaf {
    fn leaf_value<G: ForwardModel + ?Sized>(&mut self, _game: &G, state: &GameState, perspective: Player) -> f64 {
        stub_value(state, perspective)
    }
}

fn unpruned(g: &GameSpec, s: &GameState, depth: u32, perspective: Player) -> f64 {
    match g.expand(s) {
        Expansion::Terminal(o) => o.value_for(perspective),
        Expansion::Moves(_) if depth == 0 => stub_value(s, perspective),
        Expansion::Moves(moves) => {
            let vals = moves.iter().map(|m| unpruned(g, &g.apply_unchecked(s, m), depth - 1, perspective));
            if s.to_move() == perspective {
                vals.fold(f64::NEG_INFINITY, f64::max)
            } else {
                vals.fold(f64::INFINITY, f64::min)
            }
        }
    }
}

fn solve(g: &GameSpec, s: &GameState, perspective: Player, memo: &mut HashMap<(String, Player), f64>) -> f64 {
    let key = (s.digest(), perspective);
    if let Some(v) = memo.get(&key) {
        return *v;
    }
    let v = match g.expand(s) {
        Expansion::Terminal(o) => o.value_for(perspective),
        Expansion::Moves(moves) => {
            let vals: Vec<f64> = moves.iter().map(|m| solve(g, &g.apply_unchecked(s, m), perspective, memo)).collect();
            if s.to_move() == perspective {
                vals.into_iter().fold(0.0, f64::max)
            } else {
                vals.into_iter().fold(1.0, f64::min)
            }
        }
    };
    memo.insert(key, v);
    v
}

/// Plies left until the end of the longest line of play.
fn remaining_plies(g: &GameSpec, s: &GameState, memo: &mut HashMap<String, u32>) -> u32 {
    if let Some(v) = memo.get(&s.digest()) {
        return *v;
    }
    let v = match g.expand(s) {
        Expansion::Terminal(_) => 0,
        Expansion::Moves(m) => 1 + m.iter().map(|mv| remaining_plies(g, &g.apply_unchecked(s, mv), memo)).max().unwrap(),
    };
    memo.insert(s.digest(), v);
    v
}

/// Exact outcome distribution of uniformly random tic-tac-toe.
fn random_play_probabilities(g: &GameSpec, s: &GameState, memo: &mut HashMap<String, [f64; 3]>) -> [f64; 3] {
    if let Some(p) = memo.get(&s.digest()) {
        return *p;
    }
    let p = match g.expand(s) {
        Expansion::Terminal(Outcome::Win(Player::P1)) => [1.0, 0.0, 0.0],
        Expansion::Terminal(Outcome::Win(Player::P2)) => [0.0, 1.0, 0.0],
        Expansion::Terminal(Outcome::Draw) => [0.0, 0.0, 1.0],
        Expansion::Moves(moves) => {
            let mut acc = [0.0; 3];
            for m in &moves {
                let q = random_play_probabilities(g, &g.apply_unchecked(s, m), memo);
                for i in 0..3 {
                    acc[i] += q[i] / moves.len() as f64;
                }
            }
            acc
        }
    };
    memo.insert(s.digest(), p);
    p
}

fn all_states(g: &GameSpec) -> Vec<GameState> {
    let mut seen = HashSet::new();
    let mut stack = vec![g.initial_state()];
    let mut out = Vec::new();
    while let Some(s) = stack.pop() {
        if !seen.insert(s.digest()) {
            continue;
        }
        if let Expansion::Moves(m) = g.expand(&s) {
            stack.extend(m.iter().map(|mv| g.apply_unchecked(&s, mv)));
        }
        out.push(s);
    }
    out
}

// ------------------------------------------------------------- criteria

/// Published selection-band percentages (low, mid, high) per preset.
const TABLE_2: [(DifficultyPreset, [f64; 3]); 3] = [
    (DifficultyPreset::Easy, [30.85, 56.98, 12.17]),
    (DifficultyPreset::Medium, [12.17, 56.98, 30.85]),
    (DifficultyPreset::Hard, [0.62, 19.61, 79.77]),
];

fn band_oracle(p: DifficultyParams) -> [f64; 3] {
    let low = normal_cdf(0.25, p.mu, p.sigma);
    let high = 1.0 - normal_cdf(0.75, p.mu, p.sigma);
    [low, 1.0 - low - high, high]
}

fn criterion_1() -> Verdict {
    let mut worst: f64 = 0.0;
    for (preset, published) in TABLE_2 {
        let (l, m, h) = selection_band_probabilities(preset.params());
        let oracle = band_oracle(preset.params());
        for (i, v) in [l, m, h].into_iter().enumerate() {
            worst = worst.max((v - published[i] / 100.0).abs()).max((v - oracle[i]).abs());
        }
    }
    Verdict::new(worst <= 5e-4, format!("max deviation {worst:.2e} (tolerance 5e-4)"))
}

fn criterion_2() -> Verdict {
    let n = 100_000;
    let mut worst: f64 = 0.0;
    let mut rng = seeded(2);
    for (preset, _) in TABLE_2 {
        let mut counts = [0u32; 3];
        for _ in 0..n {
            let t = sample_target(preset.params(), &mut rng);
            assert!((0.0..=1.0).contains(&t));
            counts[if t < 0.25 { 0 } else if t <= 0.75 { 1 } else { 2 }] += 1;
        }
        let oracle = band_oracle(preset.params());
        for i in 0..3 {
            worst = worst.max((f64::from(counts[i]) / f64::from(n) - oracle[i]).abs());
        }
    }
    Verdict::new(worst <= 0.01, format!("1e5 draws per preset, max band deviation {worst:.4} (tolerance 0.01)"))
}

fn criterion_3() -> Verdict {
    let g = spec(GameId::TicTacToe);
    let mut solved = HashMap::new();
    let mut remaining = HashMap::new();
    let (mut checked, mut wrong, mut leaves) = (0, 0, 0u64);
    for s in all_states(&g) {
        if g.is_terminal(&s) {
            continue;
        }
        let k = remaining_plies(&g, &s, &mut remaining);
        if k > 5 {
            continue;
        }
        for depth in k..=k + 1 {
            let mut leaf = PlayoutLeaf::new(15, 100, seeded(3));
            let v = minimax_mcts(&g, &s, depth, 0.0, 1.0, s.to_move(), &mut leaf).unwrap();
            leaves += leaf.leaves;
            checked += 1;
            if v != solve(&g, &s, s.to_move(), &mut solved) {
                wrong += 1;
            }
        }
    }
    Verdict::new(
        wrong == 0 && leaves == 0 && checked > 0,
        format!("{checked} searches, {wrong} differ from exact values, {leaves} playout leaves"),
    )
}

fn criterion_4() -> Verdict {
    let mut rng = seeded(4);
    let (mut checked, mut wrong) = (0, 0);
    for (gi, id) in GameId::ALL.into_iter().enumerate() {
        let g = spec(id);
        let quota = 1000 / 6 + usize::from(gi < 1000 % 6);
        let mut found = 0;
        while found < quota {
            let mut s = g.initial_state();
            for _ in 0..rng.random_range(0..40) {
                let Expansion::Moves(m) = g.expand(&s) else { break };
                s = g.apply_unchecked(&s, &m[rng.random_range(0..m.len())]);
            }
            if g.is_terminal(&s) {
                continue;
            }
            found += 1;
            let depth = rng.random_range(0..=3);
            let perspective = s.to_move();
            let v = minimax_mcts(&g, &s, depth, 0.0, 1.0, perspective, &mut StubLeaf).unwrap();
            checked += 1;
            if v != unpruned(&g, &s, depth, perspective) {
                wrong += 1;
            }
        }
    }
    Verdict::new(wrong == 0 && checked == 1000, format!("{checked} positions over 6 games, {wrong} mismatches"))
}

fn hybrid(budget: Duration) -> AgentConfig {
    AgentConfig::hybrid(SearchConfig::with_budget(budget))
}

fn uct(budget: Duration) -> AgentConfig {
    AgentConfig::uct(UctConfig { time_budget: budget, ..UctConfig::default() })
}

fn series(id: GameId, a: &AgentConfig, b: &AgentConfig, n_games: u32, seed: u64) -> SeriesResult {
    let options = SeriesOptions { n_games, master_seed: seed, ..SeriesOptions::default() };
    run_series_with(&spec(id), a, b, &options, Arc::new(MonotonicClock::new()), &|_| {}).unwrap()
}

fn criterion_5() -> Verdict {
    let r = series(GameId::TicTacToe, &hybrid(Duration::from_secs(1)), &uct(Duration::from_secs(1)), 20, 5);
    let draws = r.pct_draw();
    Verdict::new(draws >= 90.0, format!("hybrid / uct / draw = {} (need >= 90% draws)", r.percent_row()))
}

fn criterion_6() -> Verdict {
    let r = series(GameId::Reversi, &hybrid(Duration::from_secs(1)), &uct(Duration::from_secs(1)), 20, 6);
    Verdict::new(r.pct_a() >= 40.0, format!("hybrid / uct / draw = {} (need hybrid >= 40%)", r.percent_row()))
}

fn criterion_7() -> Verdict {
    let half = Duration::from_millis(500);
    let hard = hybrid(half).with_difficulty(Difficulty::Preset(DifficultyPreset::Hard));
    let easy = hybrid(half).with_difficulty(Difficulty::Preset(DifficultyPreset::Easy));
    let r = series(GameId::Tapatan, &hard, &easy, 50, 7);
    let decisive = r.wins_a + r.wins_b;
    let share = if decisive == 0 { 0.0 } else { f64::from(r.wins_a) / f64::from(decisive) };
    Verdict::new(
        decisive > 0 && share >= 0.7,
        format!("Hard {} / Easy {} / draws {}, Hard takes {:.0}% of decisive games (need >= 70%)", r.wins_a, r.wins_b, r.draws, share * 100.0),
    )
}

fn criterion_8() -> Verdict {
    let mut worst_ratio: f64 = 0.0;
    let mut failures = Vec::new();
    for budget_ms in [100u64, 500, 1000, 5000] {
        let budget = Duration::from_millis(budget_ms);
        for id in GameId::ALL {
            let g = spec(id);
            let s = g.initial_state();
            let started = Instant::now();
            let e = iterative_deepening_evaluate(&g, &s, &SearchConfig::with_budget(budget)).unwrap();
            let took = started.elapsed();
            let ratio = took.as_secs_f64() / budget.as_secs_f64();
            worst_ratio = worst_ratio.max(ratio);
            let complete = e.len() == g.legal_moves(&s).unwrap().len() && e.timings.len() as u32 == e.completed_depth + 1;
            if std::env::var("ACCEPTANCE_VERBOSE").is_ok() {
                println!("  {id} @ {budget_ms} ms: {took:?} depth {}", e.completed_depth);
            }
            if ratio > 1.5 || !complete {
                failures.push(format!("{id}@{budget_ms}ms: {took:?}, depth {}", e.completed_depth));
            }
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("24 searches, worst time/budget {worst_ratio:.2} (limit 1.5){}", if failures.is_empty() { String::new() } else { format!("; {}", failures.join(", ")) }),
    )
}

fn criterion_9() -> Verdict {
    let g = spec(GameId::TicTacToe);
    let exact = random_play_probabilities(&g, &g.initial_state(), &mut HashMap::new());
    let n = 100_000;
    let r = series(GameId::TicTacToe, &AgentConfig::random(), &AgentConfig::random(), n, 9);
    let first_wins = r
        .matches
        .iter()
        .filter(|m| match m.first {
            Side::A => m.outcome == SeriesOutcome::A,
            Side::B => m.outcome == SeriesOutcome::B,
        })
        .count() as f64
        / f64::from(n);
    let draws = f64::from(r.draws) / f64::from(n);
    let pass = (first_wins - 0.585).abs() <= 0.01 && (draws - 0.127).abs() <= 0.01 && (exact[0] - 0.585).abs() < 1e-3;
    Verdict::new(
        pass,
        format!(
            "first mover wins {first_wins:.4}, draws {draws:.4} (exact {:.4} / {:.4}; tolerance 0.01)",
            exact[0], exact[2]
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Verdict, bool);

fn main() -> ExitCode {
    let slow = std::env::var("ACCEPTANCE_SLOW").is_ok_and(|v| v == "1");
    let only: Option<Vec<u32>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    // (number, name, check, slow)
    let criteria: [Criterion; 9] = [
        (1, "selection band probabilities", criterion_1, false),
        (2, "sampled selection bands", criterion_2, false),
        (3, "exact endgame values", criterion_3, false),
        (4, "pruning preserves minimax values", criterion_4, false),
        (5, "tic-tac-toe hybrid vs uct draws", criterion_5, false),
        (6, "reversi hybrid vs uct", criterion_6, true),
        (7, "tapatan Hard vs Easy", criterion_7, false),
        (8, "anytime budgets", criterion_8, false),
        (9, "random tic-tac-toe statistics", criterion_9, false),
    ];
    let mut failed = 0;
    for (n, name, check, is_slow) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        if is_slow && !slow {
            println!("criterion {n} ({name}): SKIP (set ACCEPTANCE_SLOW=1)");
            continue;
        }
        let started = Instant::now();
        let v = check();
        println!(
            "criterion {n} ({name}): {} - {} [{:.1}s]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            started.elapsed().as_secs_f64()
        );
        failed += usize::from(!v.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
