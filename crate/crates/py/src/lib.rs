//! Python bindings.
//!
//! ```python
//! import boardmind
//! game = boardmind.Game("tictactoe")
//! state = game.initial_state()
//! ev = boardmind.evaluate(game, state, time_ms=200)
//! move = boardmind.select_move(ev, "Medium", seed=1)
//! state = game.apply(state, move)
//! ```

use std::time::Duration;

use boardmind_core::agents::{AgentConfig, Difficulty};
use boardmind_core::arena::{run_series as core_run_series, SeriesOptions};
use boardmind_core::difficulty::{selection_band_probabilities, stochastic_select, DifficultyParams, DifficultyPreset};
use boardmind_core::games::{GameId, GameSpec, RuleVariant};
use boardmind_core::model::ForwardModel;
use boardmind_core::moves::Move;
use boardmind_core::player::{Outcome, Player};
use boardmind_core::rng::seeded;
use boardmind_core::search::{self, SearchConfig, UctConfig};
use boardmind_core::{notation, EngineError, GameState};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(boardmind, IllegalMoveError, PyValueError);
create_exception!(boardmind, TerminalStateError, PyValueError);

fn err(e: EngineError) -> PyErr {
    match e {
        EngineError::IllegalMove { .. } => IllegalMoveError::new_err(e.to_string()),
        EngineError::TerminalState => TerminalStateError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_move(text: &str, game: &GameSpec) -> PyResult<Move> {
    Move::parse(text, game.board()).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Game", frozen, skip_from_py_object, module = "boardmind")]
#[derive(Clone)]
struct PyGame {
    spec: GameSpec,
}

#[pymethods]
impl PyGame {
    #[new]
    #[pyo3(signature = (name, variant = "default"))]
    fn new(name: &str, variant: &str) -> PyResult<Self> {
        let id: GameId = name.parse().map_err(|e: boardmind_core::ParseError| PyValueError::new_err(e.message))?;
        let variant = RuleVariant::named(id, variant).map_err(err)?;
        Ok(PyGame { spec: GameSpec::new(id, variant).map_err(err)? })
    }

    /// Names accepted by the constructor.
    #[staticmethod]
    fn names() -> Vec<&'static str> {
        GameId::ALL.iter().map(|g| g.slug()).collect()
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.spec.id().slug()
    }

    #[getter]
    fn variant(&self) -> String {
        self.spec.variant().name().to_string()
    }

    #[getter]
    fn title(&self) -> &'static str {
        self.spec.id().title()
    }

    fn board_text(&self) -> &'static str {
        self.spec.id().board_text()
    }

    fn initial_state(&self) -> PyState {
        PyState { state: self.spec.initial_state() }
    }

    fn legal_moves(&self, state: &PyState) -> PyResult<Vec<String>> {
        let moves = self.spec.legal_moves(&state.state).map_err(err)?;
        Ok(moves.iter().map(Move::to_string).collect())
    }

    fn apply(&self, state: &PyState, mv: &str) -> PyResult<PyState> {
        let mv = parse_move(mv, &self.spec)?;
        Ok(PyState { state: self.spec.apply(&state.state, &mv).map_err(err)? })
    }

    fn is_terminal(&self, state: &PyState) -> bool {
        self.spec.is_terminal(&state.state)
    }

    /// `"P1"` or `"P2"` for a win, `"draw"`, or None while the game runs.
    fn outcome(&self, state: &PyState) -> Option<String> {
        self.spec.outcome(&state.state).map(|o| match o {
            Outcome::Win(p) => p.to_string(),
            Outcome::Draw => "draw".to_string(),
        })
    }

    fn notation(&self, state: &PyState) -> String {
        notation::serialize(&self.spec, &state.state)
    }

    fn __repr__(&self) -> String {
        format!("Game({:?}, {:?})", self.name(), self.variant())
    }
}

#[pyclass(name = "State", frozen, eq, skip_from_py_object, module = "boardmind")]
#[derive(Clone, PartialEq)]
struct PyState {
    state: GameState,
}

#[pymethods]
impl PyState {
    #[getter]
    fn to_move(&self) -> String {
        self.state.to_move().to_string()
    }

    #[getter]
    fn occupancy(&self) -> String {
        self.state.occupancy_string()
    }

    #[getter]
    fn ply_count(&self) -> u32 {
        self.state.ply_count()
    }

    fn count(&self, player: &str) -> PyResult<usize> {
        let p: Player = player.parse().map_err(|e: boardmind_core::ParseError| PyValueError::new_err(e.message))?;
        Ok(self.state.count(p))
    }

    fn __repr__(&self) -> String {
        format!("State({:?}, to_move={})", self.state.occupancy_string(), self.state.to_move())
    }
}

/// Parses canonical notation into `(Game, State)`.
#[pyfunction]
fn parse_state(text: &str) -> PyResult<(PyGame, PyState)> {
    let (spec, state) = notation::parse(text).map_err(err)?;
    Ok((PyGame { spec }, PyState { state }))
}

#[pyclass(name = "Evaluation", frozen, module = "boardmind")]
struct PyEvaluation {
    inner: search::Evaluation,
}

#[pymethods]
impl PyEvaluation {
    /// `(move, value)` pairs in legal-move order.
    #[getter]
    fn values(&self) -> Vec<(String, f64)> {
        self.inner.entries().iter().map(|e| (e.mv.to_string(), e.value)).collect()
    }

    #[getter]
    fn completed_depth(&self) -> u32 {
        self.inner.completed_depth
    }

    #[getter]
    fn timings_ms(&self) -> Vec<f64> {
        self.inner.timings.iter().map(|d| d.as_secs_f64() * 1e3).collect()
    }

    fn best(&self) -> Option<(String, f64)> {
        self.inner.best().map(|e| (e.mv.to_string(), e.value))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Evaluation({} moves, depth {})", self.inner.len(), self.inner.completed_depth)
    }
}

/// Hybrid minimax/playout evaluation under iterative deepening.
#[pyfunction]
#[pyo3(signature = (game, state, time_ms = 1000, playouts = 15, max_depth = None, seed = 0))]
fn evaluate(
    py: Python<'_>,
    game: &PyGame,
    state: &PyState,
    time_ms: u64,
    playouts: u32,
    max_depth: Option<u32>,
    seed: u64,
) -> PyResult<PyEvaluation> {
    let config = SearchConfig {
        playouts_per_leaf: playouts,
        max_depth,
        rng_seed: seed,
        ..SearchConfig::with_budget(Duration::from_millis(time_ms))
    };
    let (spec, state) = (&game.spec, &state.state);
    let inner = py.detach(|| search::iterative_deepening_evaluate(spec, state, &config)).map_err(err)?;
    Ok(PyEvaluation { inner })
}

/// UCT baseline evaluation: each move's mean reward.
#[pyfunction]
#[pyo3(signature = (game, state, time_ms = 1000, c = std::f64::consts::SQRT_2, iterations = None, seed = 0))]
fn uct_evaluate(
    py: Python<'_>,
    game: &PyGame,
    state: &PyState,
    time_ms: u64,
    c: f64,
    iterations: Option<u64>,
    seed: u64,
) -> PyResult<PyEvaluation> {
    let config = UctConfig {
        c,
        time_budget: Duration::from_millis(time_ms),
        max_iterations: iterations,
        ..UctConfig::default()
    };
    let (spec, state) = (&game.spec, &state.state);
    let inner = py.detach(|| search::uct_evaluate(spec, state, &config, &mut seeded(seed))).map_err(err)?;
    Ok(PyEvaluation { inner })
}

fn difficulty(obj: &Bound<'_, PyAny>) -> PyResult<DifficultyParams> {
    if let Ok(name) = obj.extract::<String>() {
        return Ok(name.parse::<DifficultyPreset>().map_err(err)?.params());
    }
    let (mu, sigma): (f64, f64) = obj
        .extract()
        .map_err(|_| PyValueError::new_err("difficulty must be Easy, Medium, Hard or a (mu, sigma) tuple"))?;
    DifficultyParams::new(mu, sigma).map_err(err)
}

/// Picks the move whose value is nearest a clipped Gaussian target.
#[pyfunction]
#[pyo3(signature = (evaluation, difficulty = None, seed = None))]
fn select_move(
    evaluation: &PyEvaluation,
    difficulty: Option<&Bound<'_, PyAny>>,
    seed: Option<u64>,
) -> PyResult<String> {
    let params = match difficulty {
        Some(d) => self::difficulty(d)?,
        None => DifficultyPreset::Medium.params(),
    };
    let mut rng = seeded(seed.unwrap_or_else(|| std::time::UNIX_EPOCH.elapsed().map_or(0, |d| d.as_nanos() as u64)));
    Ok(stochastic_select(&evaluation.inner, params, &mut rng).map_err(err)?.to_string())
}

/// Probability mass of the target below 0.25, within [0.25, 0.75] and
/// above 0.75.
#[pyfunction]
fn band_probabilities(mu: f64, sigma: f64) -> PyResult<(f64, f64, f64)> {
    Ok(selection_band_probabilities(DifficultyParams::new(mu, sigma).map_err(err)?))
}

fn agent(kind: &str, time_ms: u64, difficulty: Option<&Bound<'_, PyAny>>) -> PyResult<AgentConfig> {
    let budget = Duration::from_millis(time_ms);
    let mut config = match kind {
        "hybrid" => AgentConfig::hybrid(SearchConfig::with_budget(budget)),
        "uct" => AgentConfig::uct(UctConfig { time_budget: budget, ..UctConfig::default() }),
        "random" => AgentConfig::random(),
        other => return Err(PyValueError::new_err(format!("unknown agent `{other}` (expected hybrid, uct or random)"))),
    };
    if let Some(d) = difficulty {
        config = config.with_difficulty(Difficulty::Custom(self::difficulty(d)?));
    }
    Ok(config)
}

/// Plays a series with alternating first player; returns the tallies.
#[pyfunction]
#[pyo3(signature = (game, a, b, games = 20, time_ms = 1000, seed = 0, a_difficulty = None, b_difficulty = None, turn_limit = 100))]
#[allow(clippy::too_many_arguments)]
fn run_series<'py>(
    py: Python<'py>,
    game: &PyGame,
    a: &str,
    b: &str,
    games: u32,
    time_ms: u64,
    seed: u64,
    a_difficulty: Option<&Bound<'py, PyAny>>,
    b_difficulty: Option<&Bound<'py, PyAny>>,
    turn_limit: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let a = agent(a, time_ms, a_difficulty)?;
    let b = agent(b, time_ms, b_difficulty)?;
    let options = SeriesOptions { n_games: games, turn_limit, master_seed: seed, workers: 1 };
    let spec = &game.spec;
    let r = py.detach(|| core_run_series(spec, &a, &b, &options)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("agent_a", &r.agent_a)?;
    out.set_item("agent_b", &r.agent_b)?;
    out.set_item("wins_a", r.wins_a)?;
    out.set_item("wins_b", r.wins_b)?;
    out.set_item("draws", r.draws)?;
    out.set_item("pct_a", r.pct_a())?;
    out.set_item("pct_b", r.pct_b())?;
    out.set_item("pct_draw", r.pct_draw())?;
    Ok(out)
}

#[pymodule]
pub fn boardmind(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyEvaluation>()?;
    m.add_function(wrap_pyfunction!(parse_state, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(uct_evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(select_move, m)?)?;
    m.add_function(wrap_pyfunction!(band_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(run_series, m)?)?;
    m.add("IllegalMoveError", m.py().get_type::<IllegalMoveError>())?;
    m.add("TerminalStateError", m.py().get_type::<TerminalStateError>())?;
    Ok(())
}
