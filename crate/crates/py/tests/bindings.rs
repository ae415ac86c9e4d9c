use std::ffi::CString;

use boardmind::boardmind as module;
use pyo3::prelude::*;

fn run(code: &str) {
    // the module is registered once per process, before the interpreter starts
    static INIT: std::sync::Once = std::sync::Once::new();
    INIT.call_once(|| {
        pyo3::append_to_inittab!(module);
        Python::initialize();
    });
    Python::attach(|py| {
        let code = CString::new(format!("import boardmind\n{code}")).unwrap();
        if let Err(e) = py.run(&code, None, None) {
            e.display(py);
            panic!("python code failed");
        }
    });
}

#[test]
fn games_states_and_moves() {
    run(r#"
g = boardmind.Game("tapatan", "ludii")
s = g.initial_state()
assert s.occupancy == "........."
assert len(g.legal_moves(s)) == 9
s2 = g.apply(s, "4")
assert s2.count("P1") == 1 and s2.to_move == "P2"
assert s.occupancy == "........."
assert g.outcome(s2) is None
g2, back = boardmind.parse_state(g.notation(s2))
assert back == s2 and g2.variant == "ludii"
try:
    g.apply(s2, "4")
    raise SystemExit("occupied cell accepted")
except boardmind.IllegalMoveError:
    pass
"#);
}

#[test]
fn evaluation_and_selection() {
    run(r#"
g, s = boardmind.parse_state("game=tictactoe;variant=default;occupancy=11.22....;to_move=P1;phase=placement;ply_count=4")
ev = boardmind.evaluate(g, s, time_ms=50, seed=2)
assert len(ev) == 5 and ev.best() == ("2", 1.0)
assert all(0.0 <= v <= 1.0 for _, v in ev.values)
assert boardmind.select_move(ev, (1.0, 0.01), seed=1) == "2"
assert boardmind.select_move(ev, (0.0, 0.01), seed=1) != "2"
u = boardmind.uct_evaluate(g, s, time_ms=50, iterations=500, seed=1)
assert len(u) == 5
import math
cdf = lambda x: 0.5 * (1 + math.erf((x - 0.4) / (0.3 * math.sqrt(2))))
lo, mid, hi = boardmind.band_probabilities(0.4, 0.3)
assert abs(lo - cdf(0.25)) < 1e-9 and abs(hi - (1 - cdf(0.75))) < 1e-9
try:
    boardmind.select_move(ev, "extreme")
    raise SystemExit("bad difficulty accepted")
except ValueError as e:
    assert "Easy" in str(e)
"#);
}

#[test]
fn terminal_states_raise() {
    run(r#"
g, s = boardmind.parse_state("game=tictactoe;variant=default;occupancy=111.22...;to_move=P2;phase=placement;ply_count=5")
assert g.is_terminal(s) and g.outcome(s) == "P1"
try:
    boardmind.evaluate(g, s, time_ms=10)
    raise SystemExit("terminal state evaluated")
except boardmind.TerminalStateError as e:
    assert str(e) == "state is terminal"
"#);
}

#[test]
fn series_tallies_add_up() {
    run(r#"
r = boardmind.run_series(boardmind.Game("tsoro"), "random", "uct", games=4, time_ms=5, seed=1)
assert r["wins_a"] + r["wins_b"] + r["draws"] == 4
assert r["agent_b"] == "uct"
"#);
}
