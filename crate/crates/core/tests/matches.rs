use std::sync::Arc;
use std::time::Duration;

use boardmind_core::arena::{run_series_custom, run_series_with, SeriesOutcome, Side};
use boardmind_core::clock::ManualClock;
use boardmind_core::matches::{run_match_with_clock, MatchError};
use boardmind_core::prelude::*;
use boardmind_core::{EngineError, RuleViolation};

fn spec(id: GameId) -> GameSpec {
    GameSpec::new(id, RuleVariant::default()).unwrap()
}

/// Moves a piece back where it came from whenever it can, so two of them
/// shuffle forever.
#[derive(Default)]
struct Shuffler {
    last: Option<(Pos, Pos)>,
}

impl Agent for Shuffler {
    fn name(&self) -> String {
        "shuffler".into()
    }

    fn reseed(&mut self, _seed: u64) {
        self.last = None;
    }

    fn decide(&mut self, game: &dyn ForwardModel, state: &GameState) -> Result<Decision, EngineError> {
        let moves = game.legal_moves(state)?;
        let back = self.last.map(|(from, to)| Move::Step { from: to, to: from });
        let mv = match back {
            Some(b) if moves.contains(&b) => b,
            _ => moves[0].clone(),
        };
        if let Move::Step { from, to } = mv {
            self.last = Some((from, to));
        }
        Ok(Decision::plain(mv))
    }
}

/// Always plays on position 0.
struct Stubborn;

impl Agent for Stubborn {
    fn name(&self) -> String {
        "stubborn".into()
    }

    fn reseed(&mut self, _seed: u64) {}

    fn decide(&mut self, _game: &dyn ForwardModel, _state: &GameState) -> Result<Decision, EngineError> {
        Ok(Decision::plain(Move::Insert { to: 0 }))
    }
}

#[test]
fn random_tictactoe_ends_within_nine_plies() {
    let g = spec(GameId::TicTacToe);
    let clock = ManualClock::new();
    for seed in 0..200 {
        let mut a = RandomAgent::new(0);
        let mut b = RandomAgent::new(0);
        let r = run_match_with_clock(&g, &mut a, &mut b, 100, seed, &clock).unwrap();
        assert!(r.plies <= 9 && r.plies >= 5);
        assert!(!r.cutoff);
        assert_eq!(r.log.len() as u32, r.plies);
        assert_eq!(r.log[0].seat, Player::P1);
    }
}

#[test]
fn shuffling_kono_is_a_draw_at_the_turn_limit() {
    let g = spec(GameId::FiveFieldKono);
    let mut a = Shuffler::default();
    let mut b = Shuffler::default();
    let r = run_match_with_clock(&g, &mut a, &mut b, 100, 0, &ManualClock::new()).unwrap();
    assert_eq!(r.outcome, Outcome::Draw);
    assert!(r.cutoff);
    assert_eq!(r.plies, 200);
}

#[test]
fn illegal_moves_abort_the_match() {
    let g = spec(GameId::TicTacToe);
    let mut a = Stubborn;
    let mut b = Stubborn;
    let err = run_match_with_clock(&g, &mut a, &mut b, 100, 0, &ManualClock::new()).unwrap_err();
    match &err {
        MatchError::IllegalMove { seat, violation, plies, .. } => {
            assert_eq!(*seat, Player::P2);
            assert_eq!(*violation, RuleViolation::Occupied(0));
            assert_eq!(*plies, 1);
        }
        other => panic!("{other}"),
    }
    assert_eq!(err.offender(), Some(Player::P2));
    let zero = run_match_with_clock(&g, &mut a, &mut b, 0, 0, &ManualClock::new());
    assert!(matches!(zero, Err(MatchError::InvalidTurnLimit)));
}

#[test]
fn illegal_agent_loses_in_a_series() {
    let g = spec(GameId::TicTacToe);
    let factory = |side: Side| -> Box<dyn Agent> {
        match side {
            Side::A => Box::new(RandomAgent::new(0)),
            Side::B => Box::new(Stubborn),
        }
    };
    let options = SeriesOptions { n_games: 10, ..SeriesOptions::default() };
    let r = run_series_custom(&g, ("random", "stubborn"), &factory, &options, &ManualClock::new(), &|_| {}).unwrap();
    // the stubborn side either loses outright or gets caught cheating
    assert_eq!(r.wins_b, 0);
    for m in &r.matches {
        if m.aborted.is_some() {
            assert_eq!(m.outcome, SeriesOutcome::A);
        }
    }
    assert!(r.matches.iter().any(|m| m.aborted.as_deref().is_some_and(|a| a.contains("stubborn"))));
}

#[test]
fn hybrid_agent_plays_legal_moves() {
    let clock: Arc<dyn boardmind_core::clock::Clock> = Arc::new(ManualClock::ticking(Duration::from_micros(50)));
    for id in GameId::ALL {
        let g = spec(id);
        let hybrid = AgentConfig::hybrid(SearchConfig {
            time_budget: Duration::from_millis(5),
            playouts_per_leaf: 2,
            max_playout_depth: 20,
            ..SearchConfig::default()
        })
        .with_difficulty(Difficulty::Preset(DifficultyPreset::Medium));
        let uct = AgentConfig::uct(UctConfig { time_budget: Duration::from_millis(5), ..UctConfig::default() });
        let options = SeriesOptions { n_games: 2, turn_limit: 15, ..SeriesOptions::default() };
        let r = run_series_with(&g, &hybrid, &uct, &options, clock.clone(), &|_| {}).unwrap();
        assert!(r.matches.iter().all(|m| m.aborted.is_none()), "{id}: {:?}", r.matches);
        assert_eq!(r.agent_a, "hybrid[Medium]");
    }
}
