//! C ABI over `ryuo-core`.
//!
//! Every function returns a [`RyuoStatus`] and writes results through out
//! pointers. Rule sets and move lists are opaque heap handles owned by the
//! caller, released with [`ryuo_rules_free`] and [`ryuo_moves_free`]. On a
//! non-OK status, [`ryuo_last_error`] describes the failure on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ryuo_core::strategy::needs_oracle;
use ryuo_core::{
    engine_move, grundy_closed_form, outcome, Error, GameState, GrundyTable, Outcome, PassPosition,
    Position, Region, RuleSet,
};

/// Largest coordinate accepted where an oracle table is needed.
pub const RYUO_ORACLE_MAX: u64 = 4096;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RyuoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidRules = 3,
    InvalidArgument = 4,
    DimensionMismatch = 5,
    /// Plain call on the pass game or pass call on a plain game.
    WrongOperation = 6,
    NoClosedForm = 7,
    Unsupported = 8,
    /// Overflow, or a region beyond the oracle cap.
    OutOfRange = 9,
    Terminal = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RyuoOutcome {
    P = 0,
    N = 1,
}

impl From<Outcome> for RyuoOutcome {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::P => RyuoOutcome::P,
            Outcome::N => RyuoOutcome::N,
        }
    }
}

/// A validated rule set.
pub struct RyuoRules(RuleSet);

/// Legal options of one position, in lexicographic order.
pub struct RyuoMoves {
    dim: usize,
    coords: Vec<u64>,
    pass: Option<Vec<bool>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &Error) -> RyuoStatus {
    match err {
        Error::InvalidRules(_) => RyuoStatus::InvalidRules,
        Error::DimensionMismatch { .. } => RyuoStatus::DimensionMismatch,
        Error::WrongOperation(_) => RyuoStatus::WrongOperation,
        Error::UnsupportedVariant(_) | Error::NoWitness(_) => RyuoStatus::Unsupported,
        Error::NoClosedForm(_) => RyuoStatus::NoClosedForm,
        Error::OutOfRegion { .. } | Error::RegionTooLarge(_) | Error::Overflow(_) => {
            RyuoStatus::OutOfRange
        }
        Error::Terminal => RyuoStatus::Terminal,
        Error::InvalidArgument(_) => RyuoStatus::InvalidArgument,
    }
}

struct Failure(RyuoStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RyuoStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording its error and turning panics into `Panic`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RyuoStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RyuoStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {message}"));
            RyuoStatus::Panic
        }
    }
}

unsafe fn rules_ref<'a>(rules: *const RyuoRules) -> Result<&'a RuleSet, Failure> {
    rules.as_ref().map(|r| &r.0).ok_or_else(|| null("rules"))
}

unsafe fn out_ref<'a, T>(out: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    out.as_mut().ok_or_else(|| null(what))
}

unsafe fn plain_position(rules: &RuleSet, coords: *const u64, len: usize) -> Result<Position, Failure> {
    if rules.is_pass() {
        return Err(Error::WrongOperation("use the ryuo_pass_* functions for pass-ryuo".into()).into());
    }
    if coords.is_null() && len > 0 {
        return Err(null("coords"));
    }
    let slice = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(coords, len)
    };
    let pos = Position::new(slice.to_vec());
    rules.check_position(&pos)?;
    Ok(pos)
}

fn pass_position(rules: &RuleSet, x: u64, y: u64, pass: bool) -> Result<GameState, Failure> {
    if !rules.is_pass() {
        return Err(Error::WrongOperation(format!("{} has no pass flag", rules.name())).into());
    }
    Ok(GameState::Pass(PassPosition::new(x, y, pass)))
}

fn check_oracle_cap(rules: &RuleSet, state: &GameState) -> Result<(), Failure> {
    if needs_oracle(rules) && state.coords().iter().any(|&c| c > RYUO_ORACLE_MAX) {
        return Err(Failure(
            RyuoStatus::OutOfRange,
            format!("{rules} needs an oracle table and coordinates are capped at {RYUO_ORACLE_MAX}"),
        ));
    }
    Ok(())
}

fn optional(value: u64) -> Option<u64> {
    (value != 0).then_some(value)
}

/// Builds a rule set. `variant` is one of `ryuo`, `pass-ryuo`,
/// `restricted-side`, `restricted-hv`, `3dim`, `3dim-modified`, `ndim`.
/// Parameters a variant does not use are ignored; 0 means absent.
///
/// # Safety
/// `variant` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ryuo_rules_new(
    variant: *const c_char,
    p: u64,
    q: u64,
    r: u64,
    n: u64,
    out: *mut *mut RyuoRules,
) -> RyuoStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        if variant.is_null() {
            return Err(null("variant"));
        }
        let name = CStr::from_ptr(variant)
            .to_str()
            .map_err(|_| Failure(RyuoStatus::InvalidUtf8, "variant is not UTF-8".into()))?;
        let rules = RuleSet::from_parts(name, optional(p), optional(q), optional(r), optional(n))?;
        *out = Box::into_raw(Box::new(RyuoRules(rules)));
        Ok(())
    })
}

/// # Safety
/// `rules` must come from [`ryuo_rules_new`] and not be freed twice. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn ryuo_rules_free(rules: *mut RyuoRules) {
    if !rules.is_null() {
        drop(Box::from_raw(rules));
    }
}

/// Number of coordinates of a position; 2 for the pass game.
///
/// # Safety
/// `rules` must be a live handle or null; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ryuo_rules_dimension(rules: *const RyuoRules, out: *mut usize) -> RyuoStatus {
    guard(|| {
        *out_ref(out, "out")? = rules_ref(rules)?.dimension();
        Ok(())
    })
}

/// Whether the variant has a closed-form Grundy value.
///
/// # Safety
/// As [`ryuo_rules_dimension`].
#[no_mangle]
pub unsafe extern "C" fn ryuo_rules_has_closed_form(rules: *const RyuoRules, out: *mut bool) -> RyuoStatus {
    guard(|| {
        *out_ref(out, "out")? = rules_ref(rules)?.has_closed_form();
        Ok(())
    })
}

/// Closed-form Grundy value; `NoClosedForm` for variants without one.
///
/// # Safety
/// `coords` must point to `len` values; other pointers as above.
#[no_mangle]
pub unsafe extern "C" fn ryuo_grundy(
    rules: *const RyuoRules,
    coords: *const u64,
    len: usize,
    out: *mut u64,
) -> RyuoStatus {
    guard(|| {
        let rules = rules_ref(rules)?;
        let pos = plain_position(rules, coords, len)?;
        *out_ref(out, "out")? = grundy_closed_form(rules, &pos)?;
        Ok(())
    })
}

/// Grundy value from the brute-force oracle over the box enclosing the
/// position. Coordinates are capped at [`RYUO_ORACLE_MAX`].
///
/// # Safety
/// As [`ryuo_grundy`].
#[no_mangle]
pub unsafe extern "C" fn ryuo_grundy_oracle(
    rules: *const RyuoRules,
    coords: *const u64,
    len: usize,
    out: *mut u64,
) -> RyuoStatus {
    guard(|| {
        let rules = rules_ref(rules)?;
        let pos = plain_position(rules, coords, len)?;
        if pos.coords().iter().any(|&c| c > RYUO_ORACLE_MAX) {
            return Err(Failure(
                RyuoStatus::OutOfRange,
                format!("oracle coordinates are capped at {RYUO_ORACLE_MAX}"),
            ));
        }
        let table = GrundyTable::for_rules(rules, Region::enclosing(&pos))?;
        *out_ref(out, "out")? = table.value(&pos)?;
        Ok(())
    })
}

/// P or N for a position of any plain variant.
///
/// # Safety
/// As [`ryuo_grundy`].
#[no_mangle]
pub unsafe extern "C" fn ryuo_outcome(
    rules: *const RyuoRules,
    coords: *const u64,
    len: usize,
    out: *mut RyuoOutcome,
) -> RyuoStatus {
    guard(|| {
        let rules = rules_ref(rules)?;
        let state = GameState::Plain(plain_position(rules, coords, len)?);
        check_oracle_cap(rules, &state)?;
        *out_ref(out, "out")? = outcome(rules, &state)?.into();
        Ok(())
    })
}

/// P or N for a state of the pass game.
///
/// # Safety
/// As [`ryuo_rules_dimension`].
#[no_mangle]
pub unsafe extern "C" fn ryuo_pass_outcome(
    rules: *const RyuoRules,
    x: u64,
    y: u64,
    pass: bool,
    out: *mut RyuoOutcome,
) -> RyuoStatus {
    guard(|| {
        let rules = rules_ref(rules)?;
        let state = pass_position(rules, x, y, pass)?;
        check_oracle_cap(rules, &state)?;
        *out_ref(out, "out")? = outcome(rules, &state)?.into();
        Ok(())
    })
}

/// The engine's reply: the first winning option, else the smallest option.
/// `out_coords` receives `len` values. `Terminal` when no move exists.
///
/// # Safety
/// `coords` and `out_coords` must each hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ryuo_engine_move(
    rules: *const RyuoRules,
    coords: *const u64,
    len: usize,
    out_coords: *mut u64,
    out_winning: *mut bool,
) -> RyuoStatus {
    guard(|| {
        let rules = rules_ref(rules)?;
        let state = GameState::Plain(plain_position(rules, coords, len)?);
        check_oracle_cap(rules, &state)?;
        if out_coords.is_null() {
            return Err(null("out_coords"));
        }
        let winning = out_ref(out_winning, "out_winning")?;
        let reply = engine_move(rules, &state)?;
        let target = reply.target.coords();
        std::slice::from_raw_parts_mut(out_coords, len).copy_from_slice(&target);
        *winning = reply.winning;
        Ok(())
    })
}

/// Engine reply in the pass game.
///
/// # Safety
/// All out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ryuo_pass_engine_move(
    rules: *const RyuoRules,
    x: u64,
    y: u64,
    pass: bool,
    out_x: *mut u64,
    out_y: *mut u64,
    out_pass: *mut bool,
    out_winning: *mut bool,
) -> RyuoStatus {
    guard(|| {
        let rules = rules_ref(rules)?;
        let state = pass_position(rules, x, y, pass)?;
        check_oracle_cap(rules, &state)?;
        let (ox, oy) = (out_ref(out_x, "out_x")?, out_ref(out_y, "out_y")?);
        let (op, ow) = (out_ref(out_pass, "out_pass")?, out_ref(out_winning, "out_winning")?);
        let reply = engine_move(rules, &state)?;
        let GameState::Pass(target) = reply.target else {
            unreachable!("pass game options are pass states");
        };
        (*ox, *oy, *op, *ow) = (target.x, target.y, target.pass, reply.winning);
        Ok(())
    })
}

fn moves_handle(dim: usize, options: Vec<GameState>) -> *mut RyuoMoves {
    let mut coords = Vec::with_capacity(options.len() * dim);
    let mut pass = Vec::new();
    let mut is_pass = false;
    for option in &options {
        coords.extend(option.coords());
        if let GameState::Pass(p) = option {
            is_pass = true;
            pass.push(p.pass);
        }
    }
    Box::into_raw(Box::new(RyuoMoves {
        dim,
        coords,
        pass: is_pass.then_some(pass),
    }))
}

/// All legal options of a plain position.
///
/// # Safety
/// As [`ryuo_grundy`]; `out` receives a handle for [`ryuo_moves_free`].
#[no_mangle]
pub unsafe extern "C" fn ryuo_moves(
    rules: *const RyuoRules,
    coords: *const u64,
    len: usize,
    out: *mut *mut RyuoMoves,
) -> RyuoStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let rules = rules_ref(rules)?;
        let state = GameState::Plain(plain_position(rules, coords, len)?);
        *out = moves_handle(len, rules.options(&state)?);
        Ok(())
    })
}

/// All legal options of a pass game state.
///
/// # Safety
/// As [`ryuo_moves`].
#[no_mangle]
pub unsafe extern "C" fn ryuo_pass_moves(
    rules: *const RyuoRules,
    x: u64,
    y: u64,
    pass: bool,
    out: *mut *mut RyuoMoves,
) -> RyuoStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let rules = rules_ref(rules)?;
        let state = pass_position(rules, x, y, pass)?;
        *out = moves_handle(2, rules.options(&state)?);
        Ok(())
    })
}

/// Number of options in the list; 0 for null.
///
/// # Safety
/// `moves` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ryuo_moves_len(moves: *const RyuoMoves) -> usize {
    match moves.as_ref() {
        Some(m) if m.dim > 0 => m.coords.len() / m.dim,
        _ => 0,
    }
}

/// Copies option `index` into `out_coords` (capacity `cap`). `out_pass` may
/// be null; for pass game lists it receives the option's pass flag.
///
/// # Safety
/// `out_coords` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn ryuo_moves_get(
    moves: *const RyuoMoves,
    index: usize,
    out_coords: *mut u64,
    cap: usize,
    out_pass: *mut bool,
) -> RyuoStatus {
    guard(|| {
        let moves = moves.as_ref().ok_or_else(|| null("moves"))?;
        let count = ryuo_moves_len(moves);
        if index >= count {
            return Err(Failure(
                RyuoStatus::InvalidArgument,
                format!("index {index} out of range for {count} moves"),
            ));
        }
        if cap < moves.dim {
            return Err(Failure(
                RyuoStatus::BufferTooSmall,
                format!("buffer holds {cap} values, options have {}", moves.dim),
            ));
        }
        if out_coords.is_null() {
            return Err(null("out_coords"));
        }
        let row = &moves.coords[index * moves.dim..(index + 1) * moves.dim];
        std::slice::from_raw_parts_mut(out_coords, moves.dim).copy_from_slice(row);
        if let (Some(flags), Some(out)) = (&moves.pass, out_pass.as_mut()) {
            *out = flags[index];
        }
        Ok(())
    })
}

/// # Safety
/// `moves` must come from [`ryuo_moves`] or [`ryuo_pass_moves`] and not be
/// freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ryuo_moves_free(moves: *mut RyuoMoves) {
    if !moves.is_null() {
        drop(Box::from_raw(moves));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ryuo_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn ryuo_status_name(status: RyuoStatus) -> *const c_char {
    let name: &'static CStr = match status {
        RyuoStatus::Ok => c"ok",
        RyuoStatus::NullPointer => c"null pointer",
        RyuoStatus::InvalidUtf8 => c"invalid utf-8",
        RyuoStatus::InvalidRules => c"invalid rules",
        RyuoStatus::InvalidArgument => c"invalid argument",
        RyuoStatus::DimensionMismatch => c"dimension mismatch",
        RyuoStatus::WrongOperation => c"wrong operation",
        RyuoStatus::NoClosedForm => c"no closed form",
        RyuoStatus::Unsupported => c"unsupported",
        RyuoStatus::OutOfRange => c"out of range",
        RyuoStatus::Terminal => c"terminal position",
        RyuoStatus::BufferTooSmall => c"buffer too small",
        RyuoStatus::Panic => c"internal panic",
    };
    name.as_ptr()
}
