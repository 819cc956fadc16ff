use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ryuo_ffi::*;

struct Rules(*mut RyuoRules);

impl Rules {
    fn new(variant: &str, p: u64, q: u64, r: u64, n: u64) -> Result<Rules, RyuoStatus> {
        let name = CString::new(variant).unwrap();
        let mut handle = ptr::null_mut();
        match unsafe { ryuo_rules_new(name.as_ptr(), p, q, r, n, &mut handle) } {
            RyuoStatus::Ok => Ok(Rules(handle)),
            status => {
                assert!(handle.is_null());
                Err(status)
            }
        }
    }
}

impl Drop for Rules {
    fn drop(&mut self) {
        unsafe { ryuo_rules_free(self.0) };
    }
}

fn last_error() -> String {
    let p = ryuo_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn outcome(rules: &Rules, coords: &[u64]) -> Result<RyuoOutcome, RyuoStatus> {
    let mut out = RyuoOutcome::N;
    match unsafe { ryuo_outcome(rules.0, coords.as_ptr(), coords.len(), &mut out) } {
        RyuoStatus::Ok => Ok(out),
        s => Err(s),
    }
}

fn moves(rules: &Rules, coords: &[u64]) -> Vec<Vec<u64>> {
    let mut list = ptr::null_mut();
    let status = unsafe { ryuo_moves(rules.0, coords.as_ptr(), coords.len(), &mut list) };
    assert_eq!(status, RyuoStatus::Ok);
    let n = unsafe { ryuo_moves_len(list) };
    let mut out = Vec::new();
    for i in 0..n {
        let mut buf = vec![0u64; coords.len()];
        let status = unsafe { ryuo_moves_get(list, i, buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
        assert_eq!(status, RyuoStatus::Ok);
        out.push(buf);
    }
    unsafe { ryuo_moves_free(list) };
    out
}

#[test]
fn grundy_values() {
    let ryuo = Rules::new("ryuo", 3, 0, 0, 0).unwrap();
    let mut g = 0;
    assert_eq!(unsafe { ryuo_grundy(ryuo.0, [17, 19].as_ptr(), 2, &mut g) }, RyuoStatus::Ok);
    assert_eq!(g, 9);
    assert_eq!(unsafe { ryuo_grundy_oracle(ryuo.0, [17, 19].as_ptr(), 2, &mut g) }, RyuoStatus::Ok);
    assert_eq!(g, 9);

    let ndim = Rules::new("ndim", 3, 0, 0, 4).unwrap();
    let mut dim = 0;
    assert_eq!(unsafe { ryuo_rules_dimension(ndim.0, &mut dim) }, RyuoStatus::Ok);
    assert_eq!(dim, 4);
    assert_eq!(unsafe { ryuo_grundy(ndim.0, [1, 2, 3, 4].as_ptr(), 4, &mut g) }, RyuoStatus::Ok);
    assert_eq!(g, 1);
}

#[test]
fn error_codes() {
    assert_eq!(Rules::new("ryuo", 0, 0, 0, 0).err(), Some(RyuoStatus::InvalidRules));
    assert_eq!(Rules::new("chess", 3, 0, 0, 0).err(), Some(RyuoStatus::InvalidRules));
    assert!(last_error().contains("chess"));

    let mut handle = ptr::null_mut();
    assert_eq!(
        unsafe { ryuo_rules_new(ptr::null(), 3, 0, 0, 0, &mut handle) },
        RyuoStatus::NullPointer
    );
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { ryuo_rules_new(bad.as_ptr().cast(), 3, 0, 0, 0, &mut handle) },
        RyuoStatus::InvalidUtf8
    );

    let ryuo = Rules::new("ryuo", 3, 0, 0, 0).unwrap();
    let mut g = 0;
    assert_eq!(
        unsafe { ryuo_grundy(ryuo.0, [1, 2, 3].as_ptr(), 3, &mut g) },
        RyuoStatus::DimensionMismatch
    );
    assert_eq!(
        unsafe { ryuo_grundy(ryuo.0, [1, 2].as_ptr(), 2, ptr::null_mut()) },
        RyuoStatus::NullPointer
    );
    assert_eq!(
        unsafe { ryuo_grundy(ryuo.0, [u64::MAX, u64::MAX].as_ptr(), 2, &mut g) },
        RyuoStatus::OutOfRange
    );
    assert_eq!(
        unsafe { ryuo_grundy(ptr::null(), [1, 2].as_ptr(), 2, &mut g) },
        RyuoStatus::NullPointer
    );

    let side = Rules::new("restricted-side", 3, 5, 0, 0).unwrap();
    assert_eq!(
        unsafe { ryuo_grundy(side.0, [1, 2].as_ptr(), 2, &mut g) },
        RyuoStatus::NoClosedForm
    );
    assert_eq!(outcome(&side, &[5000, 1]), Err(RyuoStatus::OutOfRange));
    assert_eq!(outcome(&side, &[5, 0]), Ok(RyuoOutcome::P));

    let pass = Rules::new("pass-ryuo", 3, 0, 0, 0).unwrap();
    assert_eq!(outcome(&pass, &[2, 2]), Err(RyuoStatus::WrongOperation));
    let mut o = RyuoOutcome::N;
    assert_eq!(unsafe { ryuo_pass_outcome(ryuo.0, 2, 2, true, &mut o) }, RyuoStatus::WrongOperation);

    let name = unsafe { CStr::from_ptr(ryuo_status_name(RyuoStatus::NoClosedForm)) };
    assert_eq!(name.to_str().unwrap(), "no closed form");
}

#[test]
fn outcomes_and_engine() {
    let ryuo = Rules::new("ryuo", 3, 0, 0, 0).unwrap();
    assert_eq!(outcome(&ryuo, &[1, 2]), Ok(RyuoOutcome::P));
    assert_eq!(outcome(&ryuo, &[17, 19]), Ok(RyuoOutcome::N));

    let mut target = [0u64; 2];
    let mut winning = false;
    let status = unsafe { ryuo_engine_move(ryuo.0, [2, 2].as_ptr(), 2, target.as_mut_ptr(), &mut winning) };
    assert_eq!((status, target, winning), (RyuoStatus::Ok, [1, 2], true));
    let status = unsafe { ryuo_engine_move(ryuo.0, [0, 0].as_ptr(), 2, target.as_mut_ptr(), &mut winning) };
    assert_eq!(status, RyuoStatus::Terminal);

    let pass = Rules::new("pass-ryuo", 3, 0, 0, 0).unwrap();
    let mut o = RyuoOutcome::N;
    assert_eq!(unsafe { ryuo_pass_outcome(pass.0, 5, 6, true, &mut o) }, RyuoStatus::Ok);
    assert_eq!(o, RyuoOutcome::P);
    let (mut x, mut y, mut flag) = (9, 9, true);
    let status = unsafe { ryuo_pass_engine_move(pass.0, 1, 1, true, &mut x, &mut y, &mut flag, &mut winning) };
    assert_eq!((status, x, y, flag, winning), (RyuoStatus::Ok, 0, 0, true, true));

    let cube = Rules::new("3dim", 0, 0, 0, 0).unwrap();
    let mut t3 = [9u64; 3];
    let status = unsafe { ryuo_engine_move(cube.0, [1, 1, 1].as_ptr(), 3, t3.as_mut_ptr(), &mut winning) };
    assert_eq!((status, t3, winning), (RyuoStatus::Ok, [0, 0, 0], true));
}

#[test]
fn move_lists() {
    let ryuo = Rules::new("ryuo", 3, 0, 0, 0).unwrap();
    assert_eq!(moves(&ryuo, &[1, 1]), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    assert!(moves(&ryuo, &[0, 0]).is_empty());

    let pass = Rules::new("pass-ryuo", 3, 0, 0, 0).unwrap();
    let mut list = ptr::null_mut();
    assert_eq!(unsafe { ryuo_pass_moves(pass.0, 1, 1, true, &mut list) }, RyuoStatus::Ok);
    let mut got = Vec::new();
    for i in 0..unsafe { ryuo_moves_len(list) } {
        let mut buf = [0u64; 2];
        let mut flag = false;
        assert_eq!(unsafe { ryuo_moves_get(list, i, buf.as_mut_ptr(), 2, &mut flag) }, RyuoStatus::Ok);
        got.push((buf[0], buf[1], flag));
    }
    assert_eq!(got, vec![(0, 0, true), (0, 1, true), (1, 0, true), (1, 1, false)]);

    let mut small = [0u64; 1];
    assert_eq!(
        unsafe { ryuo_moves_get(list, 0, small.as_mut_ptr(), 1, ptr::null_mut()) },
        RyuoStatus::BufferTooSmall
    );
    assert_eq!(
        unsafe { ryuo_moves_get(list, 4, small.as_mut_ptr(), 2, ptr::null_mut()) },
        RyuoStatus::InvalidArgument
    );
    unsafe { ryuo_moves_free(list) };
    unsafe { ryuo_moves_free(ptr::null_mut()) };
    assert_eq!(unsafe { ryuo_moves_len(ptr::null()) }, 0);
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("ryuo.h")
}

#[test]
fn header_declares_the_surface() {
    let text = std::fs::read_to_string(header()).unwrap();
    for symbol in [
        "typedef struct RyuoRules RyuoRules;",
        "typedef struct RyuoMoves RyuoMoves;",
        "RYUO_STATUS_OK = 0",
        "RYUO_STATUS_PANIC",
        "RYUO_OUTCOME_P = 0",
        "ryuo_rules_new(",
        "ryuo_rules_free(",
        "ryuo_grundy(",
        "ryuo_grundy_oracle(",
        "ryuo_outcome(",
        "ryuo_pass_outcome(",
        "ryuo_engine_move(",
        "ryuo_pass_engine_move(",
        "ryuo_moves(",
        "ryuo_pass_moves(",
        "ryuo_moves_len(",
        "ryuo_moves_get(",
        "ryuo_moves_free(",
        "ryuo_last_error(",
        "ryuo_status_name(",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "ryuo.h"

int main(void) {
    RyuoRules *rules = NULL;
    if (ryuo_rules_new("ryuo", 3, 0, 0, 0, &rules) != RYUO_STATUS_OK) return 10;
    uint64_t pos[2] = {17, 19};
    uint64_t g = 0;
    if (ryuo_grundy(rules, pos, 2, &g) != RYUO_STATUS_OK) return 11;
    RyuoMoves *moves = NULL;
    uint64_t one[2] = {1, 1};
    if (ryuo_moves(rules, one, 2, &moves) != RYUO_STATUS_OK) return 12;
    size_t n = ryuo_moves_len(moves);
    ryuo_moves_free(moves);
    RyuoStatus bad = ryuo_rules_new("ryuo", 0, 0, 0, 0, &rules);
    printf("%llu %zu %d %s\n", (unsigned long long)g, n, (int)bad, ryuo_last_error() ? "msg" : "none");
    return 0;
}
"#;

/// Compiles a C program against the header and links the static library.
#[test]
fn c_program_links_against_the_header() {
    let archive = find_archive().expect("static library builds");
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("c-abi");
    std::fs::create_dir_all(&dir).unwrap();
    let source = dir.join("main.c");
    std::fs::write(&source, C_PROGRAM).unwrap();
    let exe = dir.join("main");
    let include = header().parent().unwrap().to_path_buf();
    let compiled = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&source)
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output();
    let Ok(compiled) = compiled else {
        eprintln!("skipping: no C compiler");
        return;
    };
    assert!(compiled.status.success(), "{}", String::from_utf8_lossy(&compiled.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status);
    assert_eq!(String::from_utf8_lossy(&run.stdout), "9 3 3 msg\n");
}

/// Builds the static library into the shared target directory; the test
/// harness only produces the rlib.
fn find_archive() -> Option<PathBuf> {
    let cargo = std::env::var_os("CARGO").unwrap_or_else(|| "cargo".into());
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).parent()?.to_path_buf();
    let status = Command::new(cargo)
        .args(["build", "--quiet", "--offline", "-p", "ryuo-ffi", "--lib", "--manifest-path"])
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("Cargo.toml"))
        .arg("--target-dir")
        .arg(&target)
        .status()
        .ok()?;
    let archive = target.join("debug").join("libryuo_ffi.a");
    (status.success() && archive.exists()).then_some(archive)
}
