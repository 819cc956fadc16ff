//! Positions, rule sets and move generation for every variant of the
//! game, plus the move-set description of a piece on the quarter-infinite
//! board.
//!
//! The board has its origin in the upper left corner: `(x, y)` is `x` fields
//! to the right and `y` fields down. Equivalently, a position is a tuple of
//! heap sizes and a move removes tokens from one or more heaps.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Heap sizes, or board coordinates for the two-heap games.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(Vec<u64>);

impl Position {
    pub fn new(coords: impl Into<Vec<u64>>) -> Self {
        Position(coords.into())
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_terminal(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sum of the coordinates, `None` on overflow.
    pub fn coordinate_sum(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |acc, &c| acc.checked_add(c))
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }
}

impl<const N: usize> From<[u64; N]> for Position {
    fn from(coords: [u64; N]) -> Self {
        Position(coords.to_vec())
    }
}

impl From<Vec<u64>> for Position {
    fn from(coords: Vec<u64>) -> Self {
        Position(coords)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A two-heap position of the pass variant. `pass` is true while the single
/// pass move is still available to either player.
///
/// Orders lexicographically on `(x, y, pass)` with `false < true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PassPosition {
    pub x: u64,
    pub y: u64,
    pub pass: bool,
}

impl PassPosition {
    pub const fn new(x: u64, y: u64, pass: bool) -> Self {
        PassPosition { x, y, pass }
    }

    /// `(0,0,*)`: the pass may not be used from here, so no options remain.
    pub fn is_terminal(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl fmt::Display for PassPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.pass)
    }
}

/// Either kind of position, for code that serves every variant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum GameState {
    Plain(Position),
    Pass(PassPosition),
}

impl GameState {
    pub fn is_terminal(&self) -> bool {
        match self {
            GameState::Plain(pos) => pos.is_terminal(),
            GameState::Pass(pos) => pos.is_terminal(),
        }
    }

    /// Coordinates without the pass flag.
    pub fn coords(&self) -> Vec<u64> {
        match self {
            GameState::Plain(pos) => pos.coords().to_vec(),
            GameState::Pass(pos) => vec![pos.x, pos.y],
        }
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameState::Plain(pos) => pos.fmt(f),
            GameState::Pass(pos) => pos.fmt(f),
        }
    }
}

impl From<Position> for GameState {
    fn from(pos: Position) -> Self {
        GameState::Plain(pos)
    }
}

impl From<PassPosition> for GameState {
    fn from(pos: PassPosition) -> Self {
        GameState::Pass(pos)
    }
}

/// Outcome class under normal play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// The previous player (the one who just moved) wins.
    P,
    /// The next player to move wins.
    N,
}

impl Outcome {
    pub fn from_grundy(value: u64) -> Self {
        if value == 0 {
            Outcome::P
        } else {
            Outcome::N
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::P => "P",
            Outcome::N => "N",
        })
    }
}

/// A game of the family together with its parameters.
///
/// `p` bounds the total taken by a multi-heap move to `p - 1`. `q` and `r`
/// bound single-heap removals to `q - 1` (first heap, or both heaps for
/// [`RuleSet::RestrictedSide`]) and `r - 1` (second heap).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleSet {
    GeneralizedRyuo { p: u64 },
    PassRyuo { p: u64 },
    RestrictedSide { p: u64, q: u64 },
    RestrictedHv { p: u64, q: u64, r: u64 },
    ThreeDim,
    ModifiedThreeDim,
    NDim { p: u64, n: usize },
}

/// Wire names, in catalogue order.
pub const VARIANT_NAMES: [&str; 7] = [
    "ryuo",
    "pass-ryuo",
    "restricted-side",
    "restricted-hv",
    "3dim",
    "3dim-modified",
    "ndim",
];

impl RuleSet {
    /// Builds a rule set from its wire name and optional parameters.
    /// Parameters the variant does not use are ignored.
    pub fn from_parts(
        variant: &str,
        p: Option<u64>,
        q: Option<u64>,
        r: Option<u64>,
        n: Option<u64>,
    ) -> Result<RuleSet> {
        let need = |value: Option<u64>, name: &str| {
            value.ok_or_else(|| {
                Error::InvalidRules(format!("variant {variant} requires parameter {name}"))
            })
        };
        let rules = match variant {
            "ryuo" => RuleSet::GeneralizedRyuo { p: need(p, "p")? },
            "pass-ryuo" => RuleSet::PassRyuo { p: need(p, "p")? },
            "restricted-side" => RuleSet::RestrictedSide {
                p: need(p, "p")?,
                q: need(q, "q")?,
            },
            "restricted-hv" => RuleSet::RestrictedHv {
                p: need(p, "p")?,
                q: need(q, "q")?,
                r: need(r, "r")?,
            },
            "3dim" => RuleSet::ThreeDim,
            "3dim-modified" => RuleSet::ModifiedThreeDim,
            "ndim" => {
                let n = need(n, "n")?;
                let n = usize::try_from(n)
                    .map_err(|_| Error::InvalidRules(format!("dimension {n} too large")))?;
                RuleSet::NDim { p: need(p, "p")?, n }
            }
            other => {
                return Err(Error::InvalidRules(format!(
                    "unknown variant {other:?}; expected one of {}",
                    VARIANT_NAMES.join(", ")
                )))
            }
        };
        rules.validate()?;
        Ok(rules)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidRules(msg));
        let (p, q, r) = match *self {
            RuleSet::GeneralizedRyuo { p } | RuleSet::PassRyuo { p } => (Some(p), None, None),
            RuleSet::RestrictedSide { p, q } => (Some(p), Some(q), None),
            RuleSet::RestrictedHv { p, q, r } => (Some(p), Some(q), Some(r)),
            RuleSet::ThreeDim | RuleSet::ModifiedThreeDim => (None, None, None),
            RuleSet::NDim { p, n } => {
                if n < 2 {
                    return fail(format!("n must be at least 2, got {n}"));
                }
                (Some(p), None, None)
            }
        };
        if p == Some(0) {
            return fail("p must be at least 1".into());
        }
        if let Some(q) = q.filter(|&q| q < 2) {
            return fail(format!("q must be greater than 1, got {q}"));
        }
        if let Some(r) = r.filter(|&r| r < 2) {
            return fail(format!("r must be greater than 1, got {r}"));
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            RuleSet::GeneralizedRyuo { .. } => "ryuo",
            RuleSet::PassRyuo { .. } => "pass-ryuo",
            RuleSet::RestrictedSide { .. } => "restricted-side",
            RuleSet::RestrictedHv { .. } => "restricted-hv",
            RuleSet::ThreeDim => "3dim",
            RuleSet::ModifiedThreeDim => "3dim-modified",
            RuleSet::NDim { .. } => "ndim",
        }
    }

    /// Named parameters in the fixed order p, q, r, n.
    pub fn params(&self) -> Vec<(&'static str, u64)> {
        match *self {
            RuleSet::GeneralizedRyuo { p } | RuleSet::PassRyuo { p } => vec![("p", p)],
            RuleSet::RestrictedSide { p, q } => vec![("p", p), ("q", q)],
            RuleSet::RestrictedHv { p, q, r } => vec![("p", p), ("q", q), ("r", r)],
            RuleSet::ThreeDim | RuleSet::ModifiedThreeDim => vec![],
            RuleSet::NDim { p, n } => vec![("p", p), ("n", n as u64)],
        }
    }

    /// Number of heap coordinates (the pass flag is not counted).
    pub fn dimension(&self) -> usize {
        match *self {
            RuleSet::ThreeDim | RuleSet::ModifiedThreeDim => 3,
            RuleSet::NDim { n, .. } => n,
            _ => 2,
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, RuleSet::PassRyuo { .. })
    }

    /// Whether [`crate::grundy::grundy_closed_form`] applies to these parameters.
    pub fn has_closed_form(&self) -> bool {
        match *self {
            RuleSet::GeneralizedRyuo { .. } | RuleSet::ModifiedThreeDim | RuleSet::NDim { .. } => {
                true
            }
            // for p = 2 there is no diagonal step and the special value at
            // (q, q) is 0, not q
            RuleSet::RestrictedSide { p, q } => q % p == 0 || (q % p == 1 && p >= 3),
            RuleSet::RestrictedHv { p, q, r } => q % p == 0 && r % p == 0,
            RuleSet::PassRyuo { .. } | RuleSet::ThreeDim => false,
        }
    }

    pub fn check_position(&self, pos: &Position) -> Result<()> {
        if pos.dim() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: pos.dim(),
            });
        }
        Ok(())
    }

    pub(crate) fn move_rule(&self) -> Result<MoveRule> {
        self.validate()?;
        Ok(match *self {
            RuleSet::GeneralizedRyuo { p } | RuleSet::PassRyuo { p } => MoveRule::Planar {
                x_cap: None,
                y_cap: None,
                diagonal_total: p - 1,
            },
            RuleSet::RestrictedSide { p, q } => MoveRule::Planar {
                x_cap: Some(q - 1),
                y_cap: Some(q - 1),
                diagonal_total: p - 1,
            },
            RuleSet::RestrictedHv { p, q, r } => MoveRule::Planar {
                x_cap: Some(q - 1),
                y_cap: Some(r - 1),
                diagonal_total: p - 1,
            },
            RuleSet::ThreeDim => MoveRule::Heaps {
                n: 3,
                multi_total: 2,
                all_ones: true,
            },
            RuleSet::ModifiedThreeDim => MoveRule::Heaps {
                n: 3,
                multi_total: 2,
                all_ones: false,
            },
            RuleSet::NDim { p, n } => MoveRule::Heaps {
                n,
                multi_total: p - 1,
                all_ones: false,
            },
        })
    }

    /// Sorted options of either kind of position.
    pub fn options(&self, state: &GameState) -> Result<Vec<GameState>> {
        match (self, state) {
            (RuleSet::PassRyuo { p }, GameState::Pass(pos)) => {
                pass_rule(*p).check_enumerable(&[pos.x, pos.y])?;
                Ok(legal_moves_pass(*p, pos)
                    .into_iter()
                    .map(GameState::Pass)
                    .collect())
            }
            (RuleSet::PassRyuo { .. }, GameState::Plain(_)) => Err(Error::WrongOperation(
                "pass-ryuo positions carry a pass flag".into(),
            )),
            (_, GameState::Pass(_)) => Err(Error::WrongOperation(format!(
                "{} positions have no pass flag",
                self.name()
            ))),
            (_, GameState::Plain(pos)) => Ok(legal_moves(self, pos)?
                .into_iter()
                .map(GameState::Plain)
                .collect()),
        }
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        for (name, value) in self.params() {
            write!(f, " {name}={value}")?;
        }
        Ok(())
    }
}

/// Most options [`legal_moves`] and [`RuleSet::options`] will list.
pub const MAX_OPTIONS: u64 = 1 << 20;

/// Normalized move generator shared by all variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum MoveRule {
    /// Two heaps: take `1..=cap` from one heap (`None` = any amount), or
    /// `s, t >= 1` from both with `s + t <= diagonal_total`.
    Planar {
        x_cap: Option<u64>,
        y_cap: Option<u64>,
        diagonal_total: u64,
    },
    /// `n` heaps: take any amount from one heap; or at least one token from
    /// each of `k >= 2` heaps with at most `multi_total` in all; with
    /// `all_ones`, also one token from every heap at once.
    Heaps {
        n: usize,
        multi_total: u64,
        all_ones: bool,
    },
}

impl MoveRule {
    /// The literal reading of the restricted game (single-heap removals up to
    /// `q`, two-heap totals up to `p`). Kept only as a negative control.
    pub(crate) fn literal_restricted_side(p: u64, q: u64) -> MoveRule {
        MoveRule::Planar {
            x_cap: Some(q),
            y_cap: Some(q),
            diagonal_total: p,
        }
    }

    pub(crate) fn dimension(&self) -> usize {
        match *self {
            MoveRule::Planar { .. } => 2,
            MoveRule::Heaps { n, .. } => n,
        }
    }

    /// Upper bound on the number of options of `coords`.
    pub(crate) fn option_bound(&self, coords: &[u64]) -> u64 {
        match *self {
            MoveRule::Planar {
                x_cap,
                y_cap,
                diagonal_total,
            } => {
                let (x, y) = (coords[0], coords[1]);
                let sx = x_cap.map_or(x, |cap| x.min(cap));
                let sy = y_cap.map_or(y, |cap| y.min(cap));
                let d = diagonal_total;
                let diagonal = x.min(d).saturating_mul(y.min(d));
                sx.saturating_add(sy).saturating_add(diagonal)
            }
            MoveRule::Heaps { multi_total, .. } => {
                let single = coords.iter().fold(0u64, |acc, &c| acc.saturating_add(c));
                let multi = if multi_total >= 2 {
                    coords
                        .iter()
                        .fold(1u64, |acc, &c| acc.saturating_mul(c.min(multi_total) + 1))
                } else {
                    0
                };
                single.saturating_add(multi).saturating_add(1)
            }
        }
    }

    fn check_enumerable(&self, coords: &[u64]) -> Result<()> {
        if self.option_bound(coords) > MAX_OPTIONS {
            return Err(Error::RegionTooLarge(format!(
                "{} has too many options to list (limit {MAX_OPTIONS})",
                Position::new(coords.to_vec())
            )));
        }
        Ok(())
    }

    /// Calls `f` once per option of `coords` (options may repeat only where
    /// two move kinds coincide; none of the current variants do).
    pub(crate) fn for_each_option(&self, coords: &[u64], f: &mut dyn FnMut(&[u64])) {
        let mut buf = coords.to_vec();
        match *self {
            MoveRule::Planar {
                x_cap,
                y_cap,
                diagonal_total,
            } => {
                let (x, y) = (coords[0], coords[1]);
                let lo_x = x_cap.map_or(0, |cap| x.saturating_sub(cap));
                for u in lo_x..x {
                    buf[0] = u;
                    f(&buf);
                }
                buf[0] = x;
                let lo_y = y_cap.map_or(0, |cap| y.saturating_sub(cap));
                for v in lo_y..y {
                    buf[1] = v;
                    f(&buf);
                }
                buf[1] = y;
                // s, t >= 1 and s + t <= diagonal_total
                let max_s = x.min(diagonal_total.saturating_sub(1));
                for s in 1..=max_s {
                    let max_t = y.min(diagonal_total - s);
                    for t in 1..=max_t {
                        buf[0] = x - s;
                        buf[1] = y - t;
                        f(&buf);
                    }
                }
            }
            MoveRule::Heaps {
                n,
                multi_total,
                all_ones,
            } => {
                debug_assert_eq!(coords.len(), n);
                for i in 0..n {
                    for u in 0..coords[i] {
                        buf[i] = u;
                        f(&buf);
                    }
                    buf[i] = coords[i];
                }
                if multi_total >= 2 {
                    multi_heap(coords, 0, multi_total, 0, &mut buf, f);
                }
                if all_ones && coords.iter().all(|&c| c >= 1) {
                    let ones: Vec<u64> = coords.iter().map(|&c| c - 1).collect();
                    f(&ones);
                }
            }
        }
    }
}

fn multi_heap(
    coords: &[u64],
    heap: usize,
    remaining: u64,
    chosen: usize,
    buf: &mut [u64],
    f: &mut dyn FnMut(&[u64]),
) {
    if heap == coords.len() {
        if chosen >= 2 {
            f(buf);
        }
        return;
    }
    multi_heap(coords, heap + 1, remaining, chosen, buf, f);
    for t in 1..=coords[heap].min(remaining) {
        buf[heap] = coords[heap] - t;
        multi_heap(coords, heap + 1, remaining - t, chosen + 1, buf, f);
    }
    buf[heap] = coords[heap];
}

/// All positions reachable from `pos` in one move.
pub fn legal_moves(rules: &RuleSet, pos: &Position) -> Result<BTreeSet<Position>> {
    if let RuleSet::PassRyuo { .. } = rules {
        return Err(Error::WrongOperation(
            "pass-ryuo positions carry a pass flag; use legal_moves_pass".into(),
        ));
    }
    rules.check_position(pos)?;
    let rule = rules.move_rule()?;
    rule.check_enumerable(pos.coords())?;
    let mut out = BTreeSet::new();
    rule.for_each_option(pos.coords(), &mut |c| {
        out.insert(Position::new(c));
    });
    Ok(out)
}

/// Options in the pass variant. With the pass still available the player may
/// also skip the turn, except from `(0,0)`.
pub fn legal_moves_pass(p: u64, pos: &PassPosition) -> BTreeSet<PassPosition> {
    let mut out = BTreeSet::new();
    for_each_pass_option(p, pos, &mut |o| {
        out.insert(o);
    });
    out
}

fn pass_rule(p: u64) -> MoveRule {
    MoveRule::Planar {
        x_cap: None,
        y_cap: None,
        diagonal_total: p.saturating_sub(1),
    }
}

pub(crate) fn for_each_pass_option(p: u64, pos: &PassPosition, f: &mut dyn FnMut(PassPosition)) {
    pass_rule(p).for_each_option(&[pos.x, pos.y], &mut |c| {
        f(PassPosition::new(c[0], c[1], pos.pass))
    });
    if pos.pass && !pos.is_terminal() {
        f(PassPosition::new(pos.x, pos.y, false));
    }
}

/// A non-zero displacement vector: the amounts a move removes per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Offset(Vec<u64>);

impl Offset {
    pub fn new(deltas: impl Into<Vec<u64>>) -> Result<Offset> {
        let deltas = deltas.into();
        if deltas.iter().all(|&d| d == 0) {
            return Err(Error::InvalidArgument(
                "an offset must move at least one coordinate".into(),
            ));
        }
        Ok(Offset(deltas))
    }

    /// Two-coordinate offset. Panics if both are zero.
    pub fn planar(s: u64, t: u64) -> Offset {
        Offset::new(vec![s, t]).expect("planar offset must be non-zero")
    }

    pub fn deltas(&self) -> &[u64] {
        &self.0
    }

    fn is_axis(&self) -> bool {
        self.0.len() == 2 && (self.0[0] == 0 || self.0[1] == 0)
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Position::new(self.0.clone()).fmt(f)
    }
}

/// The set of offsets a two-coordinate piece may subtract from its position.
///
/// Unbounded families are kept symbolic: the two axis rays `{(s,0)}` and
/// `{(0,t)}`, and the diagonal ray `{(r,r)}`. Everything else is an explicit
/// finite set, and single offsets can be carved out of the whole description.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MoveSet {
    axis_rays: bool,
    diagonal_ray: bool,
    finite: BTreeSet<Offset>,
    removed: BTreeSet<Offset>,
}

impl MoveSet {
    pub fn explicit(offsets: impl IntoIterator<Item = Offset>) -> Result<MoveSet> {
        let finite: BTreeSet<Offset> = offsets.into_iter().collect();
        if let Some(bad) = finite.iter().find(|o| o.deltas().len() != 2) {
            return Err(Error::InvalidArgument(format!(
                "move sets are two-dimensional, got offset {bad}"
            )));
        }
        Ok(MoveSet {
            finite,
            ..MoveSet::default()
        })
    }

    pub fn rook() -> MoveSet {
        MoveSet {
            axis_rays: true,
            ..MoveSet::default()
        }
    }

    /// Rook plus the diagonal ray: Wythoff's game.
    pub fn queen() -> MoveSet {
        MoveSet {
            axis_rays: true,
            diagonal_ray: true,
            ..MoveSet::default()
        }
    }

    /// Rook plus every `(s,t)` with `1 <= s + t <= p - 1`.
    pub fn generalized_ryuo(p: u64) -> MoveSet {
        MoveSet {
            axis_rays: true,
            finite: triangle(p.saturating_sub(1)).collect(),
            ..MoveSet::default()
        }
    }

    pub fn contains(&self, offset: &Offset) -> bool {
        let d = offset.deltas();
        if d.len() != 2 || self.removed.contains(offset) {
            return false;
        }
        (self.axis_rays && offset.is_axis())
            || (self.diagonal_ray && d[0] == d[1])
            || self.finite.contains(offset)
    }

    /// The same set with one offset taken out.
    pub fn without(mut self, offset: Offset) -> MoveSet {
        self.finite.remove(&offset);
        self.removed.insert(offset);
        self
    }

    /// The same set with one offset added.
    pub fn with(mut self, offset: Offset) -> MoveSet {
        self.removed.remove(&offset);
        self.finite.insert(offset);
        self
    }

    /// Every member `(s,t)` with `s <= max_s` and `t <= max_t`, in
    /// lexicographic order.
    pub fn materialize(&self, max_s: u64, max_t: u64) -> Vec<Offset> {
        let mut out = Vec::new();
        for s in 0..=max_s {
            for t in 0..=max_t {
                if s == 0 && t == 0 {
                    continue;
                }
                let o = Offset::planar(s, t);
                if self.contains(&o) {
                    out.push(o);
                }
            }
        }
        out
    }

    /// `{(x-s, y-t) : (s,t) in M, s <= x, t <= y}`.
    pub fn options(&self, pos: &Position) -> Result<BTreeSet<Position>> {
        if pos.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: pos.dim(),
            });
        }
        let (x, y) = (pos.coords()[0], pos.coords()[1]);
        let rays = x.saturating_add(y).saturating_add(x.min(y));
        if rays.saturating_add(self.finite.len() as u64) > MAX_OPTIONS {
            return Err(Error::RegionTooLarge(format!(
                "{pos} has too many options to list (limit {MAX_OPTIONS})"
            )));
        }
        Ok(self
            .materialize(x, y)
            .into_iter()
            .map(|o| Position::from([x - o.deltas()[0], y - o.deltas()[1]]))
            .collect())
    }
}

/// `{(s,t) : s,t >= 0, 1 <= s + t <= total}` in lexicographic order.
fn triangle(total: u64) -> impl Iterator<Item = Offset> {
    (0..=total).flat_map(move |s| {
        (0..=total - s)
            .filter(move |&t| s + t >= 1)
            .map(move |t| Offset::planar(s, t))
    })
}

/// The move set of a two-coordinate variant.
pub fn move_set(rules: &RuleSet) -> Result<MoveSet> {
    rules.validate()?;
    let strict_diagonal = |p: u64| {
        triangle(p.saturating_sub(1)).filter(|o| !o.is_axis())
    };
    match *rules {
        RuleSet::GeneralizedRyuo { p } | RuleSet::NDim { p, n: 2 } => {
            Ok(MoveSet::generalized_ryuo(p))
        }
        RuleSet::RestrictedSide { p, q } => MoveSet::explicit(
            (1..q)
                .flat_map(|s| [Offset::planar(s, 0), Offset::planar(0, s)])
                .chain(strict_diagonal(p)),
        ),
        RuleSet::RestrictedHv { p, q, r } => MoveSet::explicit(
            (1..q)
                .map(|s| Offset::planar(s, 0))
                .chain((1..r).map(|t| Offset::planar(0, t)))
                .chain(strict_diagonal(p)),
        ),
        _ => Err(Error::UnsupportedVariant(format!(
            "{rules} has no two-coordinate move set"
        ))),
    }
}

/// Whether `m` contains both axis rays and every `(s,t)` with
/// `1 <= s + t <= p - 1`: the condition any piece must meet for its game to
/// have the generalized Ryuo Grundy function.
pub fn satisfies_necessary_condition(m: &MoveSet, p: u64) -> bool {
    let rays_intact = m.axis_rays && !m.removed.iter().any(Offset::is_axis);
    rays_intact && triangle(p.saturating_sub(1)).all(|o| m.contains(&o))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set<const N: usize>(items: &[[u64; N]]) -> BTreeSet<Position> {
        items.iter().map(|&c| Position::from(c)).collect()
    }

    #[test]
    fn huge_positions_are_not_enumerated() {
        let big = Position::from([u64::MAX, 3]);
        assert!(matches!(
            legal_moves(&RuleSet::GeneralizedRyuo { p: 3 }, &big),
            Err(Error::RegionTooLarge(_))
        ));
        let wide = Position::from([3000, 3000]);
        assert!(matches!(
            legal_moves(&RuleSet::GeneralizedRyuo { p: u64::MAX }, &wide),
            Err(Error::RegionTooLarge(_))
        ));
        let pass = GameState::Pass(PassPosition::new(1 << 40, 0, true));
        assert!(RuleSet::PassRyuo { p: 3 }.options(&pass).is_err());
        assert!(MoveSet::queen().options(&big).is_err());
        assert_eq!(legal_moves(&RuleSet::NDim { p: 3, n: 5 }, &Position::new(vec![9; 5])).unwrap().len(), 45 + 10);
    }

    #[test]
    fn worked_example_options() {
        let rules = RuleSet::GeneralizedRyuo { p: 3 };
        let moves = legal_moves(&rules, &Position::from([17, 19])).unwrap();
        assert_eq!(moves.len(), 37);
        let diagonal: Vec<_> = moves
            .iter()
            .filter(|m| m.coords()[0] < 17 && m.coords()[1] < 19)
            .collect();
        assert_eq!(diagonal, vec![&Position::from([16, 18])]);
        for u in 0..17 {
            assert!(moves.contains(&Position::from([u, 19])));
        }
        for v in 0..19 {
            assert!(moves.contains(&Position::from([17, v])));
        }
    }

    #[test]
    fn p4_small_position() {
        let moves = legal_moves(&RuleSet::GeneralizedRyuo { p: 4 }, &Position::from([2, 3])).unwrap();
        assert_eq!(
            moves,
            set(&[[0, 3], [1, 3], [2, 0], [2, 1], [2, 2], [1, 2], [0, 2], [1, 1]])
        );
    }

    #[test]
    fn three_dim_unit_cube() {
        let moves = legal_moves(&RuleSet::ThreeDim, &Position::from([1, 1, 1])).unwrap();
        assert_eq!(
            moves,
            set(&[
                [0, 1, 1],
                [1, 0, 1],
                [1, 1, 0],
                [0, 0, 1],
                [0, 1, 0],
                [1, 0, 0],
                [0, 0, 0]
            ])
        );
        let modified = legal_moves(&RuleSet::ModifiedThreeDim, &Position::from([1, 1, 1])).unwrap();
        assert!(!modified.contains(&Position::from([0, 0, 0])));
        assert_eq!(modified.len(), 6);
    }

    #[test]
    fn terminal_has_no_moves() {
        let all = [
            RuleSet::GeneralizedRyuo { p: 3 },
            RuleSet::RestrictedSide { p: 3, q: 4 },
            RuleSet::RestrictedHv { p: 3, q: 3, r: 6 },
            RuleSet::NDim { p: 3, n: 2 },
        ];
        for rules in all {
            assert!(legal_moves(&rules, &Position::from([0, 0])).unwrap().is_empty());
        }
        assert!(legal_moves(&RuleSet::ThreeDim, &Position::from([0, 0, 0]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn restricted_moves() {
        let side = RuleSet::RestrictedSide { p: 3, q: 3 };
        assert_eq!(
            legal_moves(&side, &Position::from([5, 1])).unwrap(),
            set(&[[3, 1], [4, 1], [5, 0], [4, 0]])
        );
        let hv = RuleSet::RestrictedHv { p: 2, q: 4, r: 2 };
        assert_eq!(
            legal_moves(&hv, &Position::from([5, 5])).unwrap(),
            set(&[[2, 5], [3, 5], [4, 5], [5, 4]])
        );
    }

    #[test]
    fn ndim_multi_heap() {
        // p = 4: pairs with total <= 3 and the (1,1,1) triple
        let moves = legal_moves(&RuleSet::NDim { p: 4, n: 3 }, &Position::from([2, 2, 2])).unwrap();
        assert!(moves.contains(&Position::from([1, 1, 1])));
        assert!(moves.contains(&Position::from([0, 1, 2])));
        assert!(!moves.contains(&Position::from([0, 0, 2])));
        // p = 3 reproduces the modified three-heap game
        for x in 0..5 {
            for y in 0..5 {
                for z in 0..5 {
                    let pos = Position::from([x, y, z]);
                    assert_eq!(
                        legal_moves(&RuleSet::NDim { p: 3, n: 3 }, &pos).unwrap(),
                        legal_moves(&RuleSet::ModifiedThreeDim, &pos).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn errors() {
        let rules = RuleSet::GeneralizedRyuo { p: 3 };
        assert_eq!(
            legal_moves(&rules, &Position::from([1, 2, 3])),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 3
            })
        );
        assert!(matches!(
            legal_moves(&RuleSet::PassRyuo { p: 3 }, &Position::from([1, 1])),
            Err(Error::WrongOperation(_))
        ));
        assert!(matches!(
            legal_moves(&RuleSet::GeneralizedRyuo { p: 0 }, &Position::from([1, 1])),
            Err(Error::InvalidRules(_))
        ));
        assert!(RuleSet::RestrictedSide { p: 3, q: 1 }.validate().is_err());
        assert!(RuleSet::RestrictedHv { p: 3, q: 3, r: 1 }.validate().is_err());
        assert!(RuleSet::NDim { p: 3, n: 1 }.validate().is_err());
    }

    #[test]
    fn pass_moves() {
        let with_pass = legal_moves_pass(3, &PassPosition::new(1, 1, true));
        let expected: BTreeSet<_> = [(0, 1, true), (1, 0, true), (0, 0, true), (1, 1, false)]
            .into_iter()
            .map(|(x, y, b)| PassPosition::new(x, y, b))
            .collect();
        assert_eq!(with_pass, expected);
        assert!(legal_moves_pass(3, &PassPosition::new(0, 0, true)).is_empty());
        assert!(legal_moves_pass(3, &PassPosition::new(0, 0, false)).is_empty());
        let expected: BTreeSet<_> = [PassPosition::new(1, 0, false), PassPosition::new(0, 0, false)]
            .into_iter()
            .collect();
        assert_eq!(legal_moves_pass(3, &PassPosition::new(2, 0, false)), expected);
    }

    #[test]
    fn reference_move_sets() {
        let rook = MoveSet::rook();
        assert!(rook.contains(&Offset::planar(5, 0)));
        assert!(rook.contains(&Offset::planar(0, 1000)));
        assert!(!rook.contains(&Offset::planar(1, 1)));

        let queen = MoveSet::queen();
        assert!(queen.contains(&Offset::planar(7, 7)));
        assert!(!queen.contains(&Offset::planar(1, 2)));

        let ryuo = move_set(&RuleSet::GeneralizedRyuo { p: 3 }).unwrap();
        assert!(ryuo.contains(&Offset::planar(1, 1)));
        assert!(ryuo.contains(&Offset::planar(40, 0)));
        assert!(!ryuo.contains(&Offset::planar(2, 1)));
        assert_eq!(
            ryuo.materialize(2, 2),
            vec![
                Offset::planar(0, 1),
                Offset::planar(0, 2),
                Offset::planar(1, 0),
                Offset::planar(1, 1),
                Offset::planar(2, 0),
            ]
        );

        assert!(matches!(
            move_set(&RuleSet::ThreeDim),
            Err(Error::UnsupportedVariant(_))
        ));
        assert!(matches!(
            move_set(&RuleSet::PassRyuo { p: 3 }),
            Err(Error::UnsupportedVariant(_))
        ));
    }

    #[test]
    fn necessary_condition() {
        let ryuo = move_set(&RuleSet::GeneralizedRyuo { p: 3 }).unwrap();
        assert!(satisfies_necessary_condition(&ryuo, 3));
        assert!(satisfies_necessary_condition(&MoveSet::queen(), 3));
        assert!(!satisfies_necessary_condition(&MoveSet::rook(), 3));
        // axis rays with one step carved out no longer qualify
        let holed = MoveSet::generalized_ryuo(3).without(Offset::planar(4, 0));
        assert!(!satisfies_necessary_condition(&holed, 3));
        assert!(!holed.contains(&Offset::planar(4, 0)));
        assert!(holed.contains(&Offset::planar(5, 0)));
        // the restricted pieces have finite rays
        let restricted = move_set(&RuleSet::RestrictedSide { p: 3, q: 3 }).unwrap();
        assert!(!satisfies_necessary_condition(&restricted, 3));
        assert!(satisfies_necessary_condition(&MoveSet::generalized_ryuo(5), 4));
        assert!(!satisfies_necessary_condition(&MoveSet::generalized_ryuo(4), 5));
    }

    #[test]
    fn offsets_reject_zero() {
        assert!(Offset::new(vec![0, 0]).is_err());
        assert!(Offset::new(Vec::<u64>::new()).is_err());
        assert!(MoveSet::explicit([Offset::new(vec![1, 0, 0]).unwrap()]).is_err());
    }

    #[test]
    fn from_parts() {
        assert_eq!(
            RuleSet::from_parts("ryuo", Some(3), None, None, None),
            Ok(RuleSet::GeneralizedRyuo { p: 3 })
        );
        assert_eq!(
            RuleSet::from_parts("ndim", Some(3), None, None, Some(4)),
            Ok(RuleSet::NDim { p: 3, n: 4 })
        );
        assert!(RuleSet::from_parts("ryuo", None, None, None, None).is_err());
        assert!(RuleSet::from_parts("queen", Some(3), None, None, None).is_err());
        assert_eq!(RuleSet::RestrictedHv { p: 3, q: 3, r: 6 }.to_string(), "restricted-hv p=3 q=3 r=6");
    }
}
