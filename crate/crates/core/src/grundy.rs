//! mex and nim-sum, the closed-form Grundy functions, the brute-force
//! Sprague-Grundy oracle and the harness that compares the two.
//!
//! The oracle never calls a closed form. It fills a dense table bottom-up in
//! lexicographic order: every move lowers some coordinate and raises none, so
//! each option of an in-region position is in-region and already filled.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{MoveRule, MoveSet, Offset, Outcome, Position, RuleSet};

/// Largest table the oracle will allocate.
pub const MAX_TABLE_CELLS: usize = 1 << 26;

/// Least non-negative integer not among `values`. Repeats are allowed.
pub fn mex(values: impl IntoIterator<Item = u64>) -> u64 {
    let values: Vec<u64> = values.into_iter().collect();
    let mut seen = Vec::new();
    mex_with(&values, &mut seen)
}

// A set of k values has its mex in 0..=k, so larger values can be dropped.
fn mex_with(values: &[u64], seen: &mut Vec<bool>) -> u64 {
    seen.clear();
    seen.resize(values.len() + 1, false);
    for &v in values {
        if let Some(slot) = usize::try_from(v).ok().and_then(|i| seen.get_mut(i)) {
            *slot = true;
        }
    }
    seen.iter().position(|&s| !s).unwrap_or(values.len()) as u64
}

/// Bitwise XOR of all values; 0 for an empty list.
pub fn nim_sum(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, |acc, v| acc ^ v)
}

/// `mod(x+y, p) + p * (floor(x/p) xor floor(y/p))`, `None` on overflow.
pub fn generalized_ryuo_grundy(x: u64, y: u64, p: u64) -> Option<u64> {
    ndim_grundy(&[x, y], p)
}

/// `mod(sum, p) + p * xor(floor(x_i/p))`, `None` on overflow.
pub fn ndim_grundy(coords: &[u64], p: u64) -> Option<u64> {
    let sum = coords.iter().try_fold(0u64, |acc, &c| acc.checked_add(c))?;
    let quotients = nim_sum(coords.iter().map(|&c| c / p));
    p.checked_mul(quotients)?.checked_add(sum % p)
}

/// P-positions of the three-heap game that also allows taking one token from
/// every heap: `x+y+z = 0 (mod 3)` and the xor of the thirds is 0, or 1 when
/// every heap is `1 (mod 3)`.
pub fn three_dim_is_p_position(x: u64, y: u64, z: u64) -> bool {
    let sum_mod = (x % 3 + y % 3 + z % 3) % 3;
    if sum_mod != 0 {
        return false;
    }
    let thirds = nim_sum([x / 3, y / 3, z / 3]);
    if x % 3 == 1 && y % 3 == 1 && z % 3 == 1 {
        thirds ^ 1 == 0
    } else {
        thirds == 0
    }
}

fn restricted_grundy(a: u64, b: u64, p: u64) -> u64 {
    // a, b are residues below q (or r), so nothing here can overflow
    (a + b) % p + p * ((a / p) ^ (b / p))
}

/// Exact Grundy value from the theorem that covers `rules`.
pub fn grundy_closed_form(rules: &RuleSet, pos: &Position) -> Result<u64> {
    rules.validate()?;
    if rules.is_pass() {
        return Err(Error::WrongOperation(
            "pass-ryuo has no Grundy formula; classify its positions with the pass classifier"
                .into(),
        ));
    }
    rules.check_position(pos)?;
    if !rules.has_closed_form() {
        return Err(Error::NoClosedForm(rules.to_string()));
    }
    let c = pos.coords();
    let overflow = || Error::Overflow(c.to_vec());
    match *rules {
        RuleSet::GeneralizedRyuo { p } | RuleSet::NDim { p, .. } => {
            ndim_grundy(c, p).ok_or_else(overflow)
        }
        RuleSet::ModifiedThreeDim => ndim_grundy(c, 3).ok_or_else(overflow),
        RuleSet::RestrictedSide { p, q } => {
            let (a, b) = (c[0] % q, c[1] % q);
            if q % p == 1 && a == 0 && b == 0 && c[0] != 0 && c[1] != 0 {
                Ok(q)
            } else {
                Ok(restricted_grundy(a, b, p))
            }
        }
        RuleSet::RestrictedHv { p, q, r } => Ok(restricted_grundy(c[0] % q, c[1] % r, p)),
        RuleSet::PassRyuo { .. } | RuleSet::ThreeDim => unreachable!("no closed form"),
    }
}

/// Per-coordinate inclusive maxima of an analysis window anchored at the
/// origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Region(Vec<u64>);

impl Region {
    pub fn new(maxima: impl Into<Vec<u64>>) -> Self {
        Region(maxima.into())
    }

    /// `dim` coordinates, each in `0..=max`.
    pub fn square(dim: usize, max: u64) -> Self {
        Region(vec![max; dim])
    }

    /// The smallest region holding `pos`.
    pub fn enclosing(pos: &Position) -> Self {
        Region(pos.coords().to_vec())
    }

    pub fn maxima(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, coords: &[u64]) -> bool {
        coords.len() == self.0.len() && coords.iter().zip(&self.0).all(|(c, m)| c <= m)
    }

    pub fn cell_count(&self) -> Result<usize> {
        let too_large = || Error::RegionTooLarge(format!("{:?} exceeds {MAX_TABLE_CELLS} cells", self.0));
        let mut cells = 1usize;
        for &m in &self.0 {
            let side = usize::try_from(m).ok().and_then(|m| m.checked_add(1)).ok_or_else(too_large)?;
            cells = cells.checked_mul(side).ok_or_else(too_large)?;
        }
        if cells > MAX_TABLE_CELLS {
            return Err(too_large());
        }
        Ok(cells)
    }

    /// Every position in lexicographic order.
    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        let total = self.cell_count().unwrap_or(0);
        let mut coords = vec![0u64; self.0.len()];
        (0..total).map(move |i| {
            if i > 0 {
                advance(&mut coords, &self.0);
            }
            Position::new(coords.clone())
        })
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.0.len()];
        for i in (0..self.0.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (self.0[i + 1] as usize + 1);
        }
        strides
    }
}

// Odometer step with the last coordinate fastest, i.e. lexicographic order.
fn advance(coords: &mut [u64], maxima: &[u64]) {
    for i in (0..coords.len()).rev() {
        if coords[i] < maxima[i] {
            coords[i] += 1;
            return;
        }
        coords[i] = 0;
    }
}

/// Dense map from every position of a region to its Grundy value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrundyTable {
    region: Region,
    strides: Vec<usize>,
    values: Vec<u64>,
}

impl GrundyTable {
    /// Runs the oracle for `rules` over `region`.
    pub fn for_rules(rules: &RuleSet, region: Region) -> Result<GrundyTable> {
        if rules.is_pass() {
            return Err(Error::WrongOperation(
                "pass-ryuo tables are built per pass layer".into(),
            ));
        }
        let rule = rules.move_rule()?;
        if region.dim() != rule.dimension() {
            return Err(Error::DimensionMismatch {
                expected: rule.dimension(),
                got: region.dim(),
            });
        }
        Self::for_move_rule(&rule, region)
    }

    pub(crate) fn for_move_rule(rule: &MoveRule, region: Region) -> Result<GrundyTable> {
        Self::fill(region, |coords, emit| rule.for_each_option(coords, emit))
    }

    /// Runs the oracle for an arbitrary two-coordinate piece.
    pub fn for_move_set(m: &MoveSet, region: Region) -> Result<GrundyTable> {
        if region.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: region.dim(),
            });
        }
        region.cell_count()?;
        let offsets: Vec<(u64, u64)> = m
            .materialize(region.maxima()[0], region.maxima()[1])
            .iter()
            .map(|o| (o.deltas()[0], o.deltas()[1]))
            .collect();
        let mut buf = [0u64; 2];
        Self::fill(region, |c, emit| {
            for &(s, t) in &offsets {
                if s <= c[0] && t <= c[1] {
                    buf = [c[0] - s, c[1] - t];
                    emit(&buf);
                }
            }
        })
    }

    /// Generic bottom-up fill. `options(coords, emit)` must emit only
    /// positions that are component-wise below `coords`.
    pub(crate) fn fill<F>(region: Region, mut options: F) -> Result<GrundyTable>
    where
        F: FnMut(&[u64], &mut dyn FnMut(&[u64])),
    {
        let cells = region.cell_count()?;
        let strides = region.strides();
        let mut values: Vec<u64> = Vec::with_capacity(cells);
        let mut coords = vec![0u64; region.dim()];
        let mut option_values = Vec::new();
        let mut seen = Vec::new();
        for i in 0..cells {
            if i > 0 {
                advance(&mut coords, region.maxima());
            }
            option_values.clear();
            options(&coords, &mut |o| {
                let j: usize = o.iter().zip(&strides).map(|(&c, &s)| c as usize * s).sum();
                debug_assert!(j < i, "option {o:?} of {coords:?} is not below it");
                option_values.push(values[j]);
            });
            values.push(mex_with(&option_values, &mut seen));
        }
        Ok(GrundyTable {
            region,
            strides,
            values,
        })
    }

    pub(crate) fn from_values(region: Region, values: Vec<u64>) -> GrundyTable {
        let strides = region.strides();
        debug_assert_eq!(Some(values.len()), region.cell_count().ok());
        GrundyTable {
            region,
            strides,
            values,
        }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn get(&self, coords: &[u64]) -> Option<u64> {
        if !self.region.contains(coords) {
            return None;
        }
        let j: usize = coords.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum();
        Some(self.values[j])
    }

    pub fn value(&self, pos: &Position) -> Result<u64> {
        self.get(pos.coords()).ok_or_else(|| Error::OutOfRegion {
            position: pos.coords().to_vec(),
            maxima: self.region.maxima().to_vec(),
        })
    }

    /// Values of a two-coordinate table as rows indexed by `y`, columns by `x`.
    pub fn rows(&self) -> Vec<Vec<u64>> {
        assert_eq!(self.region.dim(), 2, "rows() needs a two-coordinate table");
        let (mx, my) = (self.region.maxima()[0], self.region.maxima()[1]);
        (0..=my)
            .map(|y| (0..=mx).map(|x| self.get(&[x, y]).unwrap()).collect())
            .collect()
    }
}

/// Oracle tables over one fixed region, built on first use per rule set or
/// move set.
#[derive(Debug)]
pub struct GrundyCache {
    region: Region,
    by_rules: HashMap<RuleSet, GrundyTable>,
    by_move_set: HashMap<MoveSet, GrundyTable>,
}

impl GrundyCache {
    pub fn new(region: Region) -> Self {
        GrundyCache {
            region,
            by_rules: HashMap::new(),
            by_move_set: HashMap::new(),
        }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    fn check(&self, pos: &Position) -> Result<()> {
        if !self.region.contains(pos.coords()) {
            return Err(Error::OutOfRegion {
                position: pos.coords().to_vec(),
                maxima: self.region.maxima().to_vec(),
            });
        }
        Ok(())
    }
}

/// Oracle Grundy value of `pos` under `rules`, by mex recursion.
pub fn grundy_brute_force(rules: &RuleSet, pos: &Position, cache: &mut GrundyCache) -> Result<u64> {
    rules.check_position(pos)?;
    cache.check(pos)?;
    if !cache.by_rules.contains_key(rules) {
        let table = GrundyTable::for_rules(rules, cache.region.clone())?;
        cache.by_rules.insert(*rules, table);
    }
    cache.by_rules[rules].value(pos)
}

/// Oracle Grundy value of `pos` for the piece with move set `m`.
pub fn grundy_custom_moveset(m: &MoveSet, pos: &Position, cache: &mut GrundyCache) -> Result<u64> {
    if pos.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: pos.dim(),
        });
    }
    cache.check(pos)?;
    if !cache.by_move_set.contains_key(m) {
        let table = GrundyTable::for_move_set(m, cache.region.clone())?;
        cache.by_move_set.insert(m.clone(), table);
    }
    cache.by_move_set[m].value(pos)
}

/// A value observed on one side of a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Observed {
    Grundy(u64),
    Outcome(Outcome),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub position: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    pub oracle: Observed,
    pub formula: Observed,
}

/// Result of comparing a formula against the oracle over a region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub region: Region,
    pub checked: u64,
    /// In lexicographic order of position.
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    pub fn matched(&self) -> u64 {
        self.checked - self.mismatches.len() as u64
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn compare_table(
    subject: String,
    table: &GrundyTable,
    formula: impl Fn(&Position) -> Result<u64>,
) -> Result<VerificationReport> {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for pos in table.region().positions() {
        let oracle = table.value(&pos)?;
        let expected = formula(&pos)?;
        checked += 1;
        if oracle != expected {
            mismatches.push(Mismatch {
                position: pos.into_inner(),
                pass: None,
                oracle: Observed::Grundy(oracle),
                formula: Observed::Grundy(expected),
            });
        }
    }
    Ok(VerificationReport {
        subject,
        region: table.region().clone(),
        checked,
        mismatches,
    })
}

/// Oracle against closed form at every position of `region`.
pub fn verify_equivalence(rules: &RuleSet, region: Region) -> Result<VerificationReport> {
    rules.validate()?;
    if !rules.has_closed_form() {
        return Err(Error::NoClosedForm(rules.to_string()));
    }
    let table = GrundyTable::for_rules(rules, region)?;
    compare_table(rules.to_string(), &table, |pos| grundy_closed_form(rules, pos))
}

/// Oracle for the piece `m` against the generalized Ryuo formula for `p`.
pub fn verify_move_set(m: &MoveSet, p: u64, region: Region) -> Result<VerificationReport> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let table = GrundyTable::for_move_set(m, region)?;
    compare_table(format!("move set vs ryuo p={p}"), &table, |pos| {
        let c = pos.coords();
        generalized_ryuo_grundy(c[0], c[1], p).ok_or_else(|| Error::Overflow(c.to_vec()))
    })
}

/// Negative control: the restricted game read literally (single-heap takes
/// up to `q`, two-heap totals up to `p`) against the restricted closed form.
pub fn verify_literal_restricted_side(p: u64, q: u64, region: Region) -> Result<VerificationReport> {
    let rules = RuleSet::RestrictedSide { p, q };
    rules.validate()?;
    if !rules.has_closed_form() {
        return Err(Error::NoClosedForm(rules.to_string()));
    }
    let table = GrundyTable::for_move_rule(&MoveRule::literal_restricted_side(p, q), region)?;
    compare_table(format!("{rules} (literal reading)"), &table, |pos| {
        grundy_closed_form(&rules, pos)
    })
}

/// P-position formula of the three-heap game with the triple move against the
/// zeros of its oracle table.
pub fn verify_three_dim_p_positions(region: Region) -> Result<VerificationReport> {
    let table = GrundyTable::for_rules(&RuleSet::ThreeDim, region)?;
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for pos in table.region().positions() {
        let c = pos.coords();
        let oracle = Outcome::from_grundy(table.value(&pos)?);
        let formula = if three_dim_is_p_position(c[0], c[1], c[2]) {
            Outcome::P
        } else {
            Outcome::N
        };
        checked += 1;
        if oracle != formula {
            mismatches.push(Mismatch {
                position: pos.into_inner(),
                pass: None,
                oracle: Observed::Outcome(oracle),
                formula: Observed::Outcome(formula),
            });
        }
    }
    Ok(VerificationReport {
        subject: "3dim P-positions".into(),
        region: table.region().clone(),
        checked,
        mismatches,
    })
}

/// Oracle tables of two rule sets compared cell by cell; `oracle` holds the
/// value under `a` and `formula` the value under `b`.
pub fn verify_same_game(a: &RuleSet, b: &RuleSet, region: Region) -> Result<VerificationReport> {
    let other = GrundyTable::for_rules(b, region.clone())?;
    let table = GrundyTable::for_rules(a, region)?;
    compare_table(format!("{a} vs {b}"), &table, |pos| other.value(pos))
}

/// A position where a piece's oracle value departs from the formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub position: Position,
    pub oracle: u64,
    pub formula: u64,
}

/// Takes `dropped` out of the generalized Ryuo move set for `p` and returns
/// the lexicographically first position of the `(p+2) x (p+2)` window where
/// the resulting piece's Grundy value departs from the formula.
pub fn necessary_condition_witness(p: u64, dropped: &Offset) -> Result<Witness> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let d = dropped.deltas();
    let admissible = d.len() == 2
        && (d[0].saturating_add(d[1]) < p || matches!((d[0], d[1]), (1, 0) | (0, 1)));
    if !admissible {
        return Err(Error::InvalidArgument(format!(
            "{dropped} is neither a unit axis step nor has s+t <= {}",
            p - 1
        )));
    }
    let m = MoveSet::generalized_ryuo(p).without(dropped.clone());
    let report = verify_move_set(&m, p, Region::square(2, p + 1))?;
    let first = report.mismatches.into_iter().next().ok_or_else(|| {
        Error::NoWitness(format!("dropping {dropped} for p={p} left the formula intact"))
    })?;
    match (first.oracle, first.formula) {
        (Observed::Grundy(oracle), Observed::Grundy(formula)) => Ok(Witness {
            position: Position::new(first.position),
            oracle,
            formula,
        }),
        _ => unreachable!("move-set reports compare Grundy values"),
    }
}
