//! Outcome classification and optimal move selection for every variant.
//!
//! Closed forms are used where they exist. The three-heap game with the
//! triple move uses its P-position formula, the pass game its P-position
//! families (for `p >= 3`). Everything else falls back to an oracle table
//! over the smallest region enclosing the queried position.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{GameState, Outcome, Position, RuleSet};
use crate::grundy::{grundy_closed_form, three_dim_is_p_position, GrundyTable, Region};
use crate::pass::{classify_pass, outcome_backward_induction, PassOutcomeTable, PASS_FORMULA_MIN_P};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveRecommendation {
    pub target: GameState,
    /// True iff `target` is a P-position.
    pub winning: bool,
}

/// Whether classifying positions of `rules` requires an oracle table.
pub fn needs_oracle(rules: &RuleSet) -> bool {
    match *rules {
        RuleSet::ThreeDim => false,
        RuleSet::PassRyuo { p } => p < PASS_FORMULA_MIN_P,
        _ => !rules.has_closed_form(),
    }
}

enum Judge {
    ClosedForm(RuleSet),
    ThreeDim,
    PassFormula(u64),
    Table(GrundyTable),
    PassTable(PassOutcomeTable),
}

impl Judge {
    /// A judge valid for `state` and everything reachable from it.
    fn new(rules: &RuleSet, state: &GameState) -> Result<Judge> {
        check_state(rules, state)?;
        Ok(match (*rules, state) {
            (RuleSet::ThreeDim, _) => Judge::ThreeDim,
            (RuleSet::PassRyuo { p }, GameState::Pass(pos)) => {
                if p >= PASS_FORMULA_MIN_P {
                    Judge::PassFormula(p)
                } else {
                    let region = Region::new(vec![pos.x, pos.y]);
                    Judge::PassTable(outcome_backward_induction(p, &region)?)
                }
            }
            (_, GameState::Plain(pos)) if !rules.has_closed_form() => {
                Judge::Table(GrundyTable::for_rules(rules, Region::enclosing(pos))?)
            }
            _ => Judge::ClosedForm(*rules),
        })
    }

    fn outcome(&self, state: &GameState) -> Result<Outcome> {
        match (self, state) {
            (Judge::ClosedForm(rules), GameState::Plain(pos)) => {
                Ok(Outcome::from_grundy(grundy_closed_form(rules, pos)?))
            }
            (Judge::ThreeDim, GameState::Plain(pos)) => {
                let c = pos.coords();
                Ok(if three_dim_is_p_position(c[0], c[1], c[2]) {
                    Outcome::P
                } else {
                    Outcome::N
                })
            }
            (Judge::PassFormula(p), GameState::Pass(pos)) => Ok(classify_pass(*p, pos)),
            (Judge::Table(table), GameState::Plain(pos)) => {
                Ok(Outcome::from_grundy(table.value(pos)?))
            }
            (Judge::PassTable(table), GameState::Pass(pos)) => {
                table.get(pos).ok_or_else(|| Error::OutOfRegion {
                    position: vec![pos.x, pos.y],
                    maxima: table.region().maxima().to_vec(),
                })
            }
            _ => unreachable!("judge built for a different kind of position"),
        }
    }
}

fn check_state(rules: &RuleSet, state: &GameState) -> Result<()> {
    rules.validate()?;
    match (rules.is_pass(), state) {
        (true, GameState::Pass(_)) => Ok(()),
        (true, GameState::Plain(_)) => Err(Error::WrongOperation(
            "pass-ryuo positions carry a pass flag".into(),
        )),
        (false, GameState::Pass(_)) => Err(Error::WrongOperation(format!(
            "{} positions have no pass flag",
            rules.name()
        ))),
        (false, GameState::Plain(pos)) => rules.check_position(pos),
    }
}

/// P iff the position is a previous-player win.
pub fn outcome(rules: &RuleSet, state: &GameState) -> Result<Outcome> {
    Judge::new(rules, state)?.outcome(state)
}

/// Convenience wrapper for plain positions.
pub fn outcome_of(rules: &RuleSet, pos: &Position) -> Result<Outcome> {
    outcome(rules, &GameState::Plain(pos.clone()))
}

/// Every option that is a P-position, in lexicographic order. Empty iff the
/// position is P or terminal.
pub fn best_moves(rules: &RuleSet, state: &GameState) -> Result<Vec<MoveRecommendation>> {
    let judge = Judge::new(rules, state)?;
    let mut winning = Vec::new();
    for option in rules.options(state)? {
        if judge.outcome(&option)? == Outcome::P {
            winning.push(MoveRecommendation {
                target: option,
                winning: true,
            });
        }
    }
    Ok(winning)
}

/// The first winning option, or the lexicographically smallest option when
/// none wins.
pub fn engine_move(rules: &RuleSet, state: &GameState) -> Result<MoveRecommendation> {
    check_state(rules, state)?;
    if state.is_terminal() {
        return Err(Error::Terminal);
    }
    if let Some(best) = best_moves(rules, state)?.into_iter().next() {
        return Ok(best);
    }
    let fallback = rules
        .options(state)?
        .into_iter()
        .next()
        .ok_or(Error::Terminal)?;
    Ok(MoveRecommendation {
        target: fallback,
        winning: false,
    })
}
