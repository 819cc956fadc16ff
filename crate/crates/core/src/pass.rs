//! The two-heap game with a single pass move shared by both players.
//!
//! P-positions without the pass are the zeros of the generalized Ryuo
//! formula. With the pass still available they fall into three arithmetic
//! families plus the terminal `(0,0,true)`. These families are the exact
//! P-positions for `p >= 3`; for `p = 1` and `p = 2` they are not, and
//! [`outcome_backward_induction`] is the only sound classifier there.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::game::{for_each_pass_option, MoveRule, Outcome, PassPosition};
use crate::grundy::{GrundyTable, Mismatch, Observed, Region, VerificationReport};

/// Smallest `p` for which [`classify_pass`] is exact.
pub const PASS_FORMULA_MIN_P: u64 = 3;

/// Membership test against the P-position families; O(1).
pub fn classify_pass(p: u64, pos: &PassPosition) -> Outcome {
    let p = p.max(1);
    let (x, y) = (pos.x, pos.y);
    let is_p = if !pos.pass {
        // (x+y) = 0 mod p with equal quotients
        x / p == y / p && (x % p + y % p).is_multiple_of(p)
    } else {
        pos.is_terminal() || first_family(p, x, y) || second_family(p, x, y) || third_family(p, x, y)
    };
    if is_p {
        Outcome::P
    } else {
        Outcome::N
    }
}

// (m+1, p-m) for 0 <= m <= p-1
fn first_family(p: u64, x: u64, y: u64) -> bool {
    (1..=p).contains(&x) && y == p + 1 - x
}

// (pn+1, pn+1) for n >= 1
fn second_family(p: u64, x: u64, y: u64) -> bool {
    x == y && x > p && (x - 1).is_multiple_of(p)
}

// (k+pn, p+2-k+pn) for n >= 1, 2 <= k <= p
fn third_family(p: u64, x: u64, y: u64) -> bool {
    let Some(sum) = x.checked_add(y) else {
        return false;
    };
    let Some(rest) = sum.checked_sub(p + 2) else {
        return false;
    };
    let period = 2 * p;
    if rest % period != 0 || rest == 0 {
        return false;
    }
    let shift = (rest / period) * p;
    x.checked_sub(shift).is_some_and(|k| (2..=p).contains(&k))
}

/// Outcome of every `(x, y, pass)` state of a region, both layers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassOutcomeTable {
    p: u64,
    region: Region,
    without_pass: Vec<Outcome>,
    with_pass: Vec<Outcome>,
}

impl PassOutcomeTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn get(&self, pos: &PassPosition) -> Option<Outcome> {
        let (mx, my) = (self.region.maxima()[0], self.region.maxima()[1]);
        if pos.x > mx || pos.y > my {
            return None;
        }
        let i = (pos.x * (my + 1) + pos.y) as usize;
        Some(if pos.pass {
            self.with_pass[i]
        } else {
            self.without_pass[i]
        })
    }
}

/// Labels every state by backward induction: P iff no option is P. The
/// layer without the pass is solved first; a pass-available state depends on
/// smaller states of its own layer and on its own image without the pass.
pub fn outcome_backward_induction(p: u64, region: &Region) -> Result<PassOutcomeTable> {
    let region = planar(region)?;
    let cells = region.cell_count()?;
    let (mx, my) = (region.maxima()[0], region.maxima()[1]);
    let index = |x: u64, y: u64| (x * (my + 1) + y) as usize;

    let mut layers: [Vec<Outcome>; 2] = [Vec::with_capacity(cells), Vec::with_capacity(cells)];
    for (layer, pass) in [(0usize, false), (1, true)] {
        for x in 0..=mx {
            for y in 0..=my {
                let mut reaches_p = false;
                for_each_pass_option(p, &PassPosition::new(x, y, pass), &mut |o| {
                    let side = &layers[usize::from(o.pass)];
                    reaches_p |= side[index(o.x, o.y)] == Outcome::P;
                });
                let outcome = if reaches_p { Outcome::N } else { Outcome::P };
                layers[layer].push(outcome);
            }
        }
    }
    let [without_pass, with_pass] = layers;
    Ok(PassOutcomeTable {
        p,
        region,
        without_pass,
        with_pass,
    })
}

fn planar(region: &Region) -> Result<Region> {
    if region.dim() != 2 {
        return Err(crate::Error::DimensionMismatch {
            expected: 2,
            got: region.dim(),
        });
    }
    Ok(region.clone())
}

/// Classifier against backward induction on both layers of `region`.
pub fn verify_pass_theorem(p: u64, region: &Region) -> Result<VerificationReport> {
    let table = outcome_backward_induction(p, region)?;
    let (mx, my) = (region.maxima()[0], region.maxima()[1]);
    let mut mismatches = BTreeSet::new();
    let mut checked = 0;
    for x in 0..=mx {
        for y in 0..=my {
            for pass in [false, true] {
                let pos = PassPosition::new(x, y, pass);
                let oracle = table.get(&pos).expect("in region");
                let formula = classify_pass(p, &pos);
                checked += 1;
                if oracle != formula {
                    mismatches.insert((pos, oracle, formula));
                }
            }
        }
    }
    Ok(VerificationReport {
        subject: format!("pass-ryuo p={p}"),
        region: table.region().clone(),
        checked,
        mismatches: mismatches
            .into_iter()
            .map(|(pos, oracle, formula)| Mismatch {
                position: vec![pos.x, pos.y],
                pass: Some(pos.pass),
                oracle: Observed::Outcome(oracle),
                formula: Observed::Outcome(formula),
            })
            .collect(),
    })
}

/// Oracle Grundy values of one pass layer, for display. Zero cells are the
/// P-positions of that layer.
pub fn pass_grundy_table(p: u64, region: &Region, pass: bool) -> Result<GrundyTable> {
    let region = planar(region)?;
    let rule = MoveRule::Planar {
        x_cap: None,
        y_cap: None,
        diagonal_total: p.saturating_sub(1),
    };
    let without_pass = GrundyTable::for_move_rule(&rule, region.clone())?;
    if !pass {
        return Ok(without_pass);
    }
    let my = region.maxima()[1];
    let cells = region.cell_count()?;
    let mut values: Vec<u64> = Vec::with_capacity(cells);
    let mut options = Vec::new();
    for x in 0..=region.maxima()[0] {
        for y in 0..=my {
            options.clear();
            for_each_pass_option(p, &PassPosition::new(x, y, true), &mut |o| {
                options.push(if o.pass {
                    values[(o.x * (my + 1) + o.y) as usize]
                } else {
                    without_pass.get(&[o.x, o.y]).expect("in region")
                });
            });
            values.push(crate::grundy::mex(options.iter().copied()));
        }
    }
    Ok(GrundyTable::from_values(region, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(x: u64, y: u64, pass: bool) -> PassPosition {
        PassPosition::new(x, y, pass)
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(classify_pass(3, &pp(2, 2, true)), Outcome::P);
        assert_eq!(classify_pass(3, &pp(5, 6, true)), Outcome::P);
        assert_eq!(classify_pass(3, &pp(0, 0, true)), Outcome::P);
        assert_eq!(classify_pass(3, &pp(0, 0, false)), Outcome::P);
        assert_eq!(classify_pass(3, &pp(3, 3, false)), Outcome::P);
        assert_eq!(classify_pass(3, &pp(1, 1, true)), Outcome::N);
        assert_eq!(classify_pass(3, &pp(1, 3, true)), Outcome::P);
        assert_eq!(classify_pass(3, &pp(3, 1, true)), Outcome::P);
        assert_eq!(classify_pass(3, &pp(4, 4, true)), Outcome::P);
        assert_eq!(classify_pass(3, &pp(u64::MAX, u64::MAX, true)), Outcome::N);
    }

    #[test]
    fn backward_induction_examples() {
        let table = outcome_backward_induction(3, &Region::square(2, 2)).unwrap();
        assert_eq!(table.get(&pp(0, 0, false)), Some(Outcome::P));
        assert_eq!(table.get(&pp(0, 0, true)), Some(Outcome::P));
        assert_eq!(table.get(&pp(1, 0, true)), Some(Outcome::N));
        assert_eq!(table.get(&pp(1, 1, false)), Some(Outcome::N));
        assert_eq!(table.get(&pp(2, 2, true)), Some(Outcome::P));
        assert_eq!(table.get(&pp(3, 0, true)), None);
    }

    #[test]
    fn small_p_needs_the_oracle() {
        for p in [1, 2] {
            let report = verify_pass_theorem(p, &Region::square(2, 12)).unwrap();
            assert!(!report.is_clean(), "p={p}");
        }
        let report = verify_pass_theorem(3, &Region::square(2, 12)).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.checked, 2 * 13 * 13);
    }

    #[test]
    fn grundy_layers() {
        let region = Region::square(2, 12);
        let with_pass = pass_grundy_table(3, &region, true).unwrap();
        assert_eq!(with_pass.get(&[2, 2]), Some(0));
        assert_eq!(with_pass.get(&[0, 0]), Some(0));
        let without = pass_grundy_table(3, &region, false).unwrap();
        for x in 0..=12 {
            for y in 0..=12 {
                let expected = (x + y) % 3 + 3 * ((x / 3) ^ (y / 3));
                assert_eq!(without.get(&[x, y]), Some(expected));
            }
        }
    }
}
