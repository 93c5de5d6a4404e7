//! C ABI over the workbench: load an inventory and learned theories,
//! then judge words from any language with C linkage. Handles are
//! opaque, every fallible call returns a [`PlStatus`], and the last
//! error or rejection cause is readable via [`pl_last_message`].
//!
//! The build script writes the matching header to
//! `include/phonolearn.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use phonolearn::baseline::SonorityModel;
use phonolearn::dataset::Word;
use phonolearn::evaluation::{acceptance_program, word_accepted_by_program, WordVerdict};
use phonolearn::ilp::Theory;
use phonolearn::logic::{parse_program, Clause, Program};
use phonolearn::phonology::{background, Background, FeatureSystem, Inventory};
use phonolearn::session::{SessionError, Settings};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A file could not be read.
    Io = 3,
    /// An inventory, feature system, theory, clause text, or model
    /// config failed to parse.
    Parse = 4,
    /// The library panicked; details in `pl_last_message`.
    Internal = 5,
}

/// An inventory, its background feature theory, the learned clauses
/// loaded so far, and the sonority reference model. Judging a word
/// proves its affixing events against background + learned clauses.
pub struct PlWorkbench {
    inventory: Inventory,
    background: Background,
    clauses: Vec<Clause>,
    program: Program,
    derivation_depth: usize,
    sonority: SonorityModel,
}

impl PlWorkbench {
    fn rebuild(&mut self) {
        self.program = acceptance_program(&self.clauses, &self.background);
    }
}

thread_local! {
    static LAST_MESSAGE: RefCell<CString> = RefCell::new(CString::default());
}

fn set_message(text: &str) {
    let text = text.replace('\0', " ");
    LAST_MESSAGE.with(|m| *m.borrow_mut() = CString::new(text).expect("nul replaced"));
}

fn clear_message() {
    LAST_MESSAGE.with(|m| *m.borrow_mut() = CString::default());
}

/// Message describing this thread's most recent error, or the
/// rejection cause after a judge call that set `*accepted` to false.
/// Empty when the last call fully succeeded. The pointer stays valid
/// until the next phonolearn call on the same thread; never freed by
/// the caller.
#[no_mangle]
pub extern "C" fn pl_last_message() -> *const c_char {
    LAST_MESSAGE.with(|m| m.borrow().as_ptr())
}

/// Every entry point clears the message, catches panics, and never
/// unwinds into the caller.
fn guarded(body: impl FnOnce() -> PlStatus) -> PlStatus {
    clear_message();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let text = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_message(&format!("internal panic: {text}"));
            PlStatus::Internal
        }
    }
}

unsafe fn required_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, PlStatus> {
    if ptr.is_null() {
        set_message(&format!("{name} must not be null"));
        return Err(PlStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_message(&format!("{name} is not valid UTF-8"));
        PlStatus::InvalidUtf8
    })
}

unsafe fn required_ref<'a>(ptr: *const PlWorkbench) -> Result<&'a PlWorkbench, PlStatus> {
    ptr.as_ref().ok_or_else(|| {
        set_message("workbench must not be null");
        PlStatus::NullArgument
    })
}

unsafe fn required_mut<'a>(ptr: *mut PlWorkbench) -> Result<&'a mut PlWorkbench, PlStatus> {
    ptr.as_mut().ok_or_else(|| {
        set_message("workbench must not be null");
        PlStatus::NullArgument
    })
}

/// Builds a workbench with no learned clauses yet. `inventory` is the
/// bundled name `dutch` or a path to an inventory file;
/// `feature_system` is `ipa`, `booij`, or `sonority`. On success
/// `*out` owns the handle; release it with `pl_workbench_free`.
#[no_mangle]
pub unsafe extern "C" fn pl_workbench_new(
    inventory: *const c_char,
    feature_system: *const c_char,
    out: *mut *mut PlWorkbench,
) -> PlStatus {
    guarded(|| {
        if out.is_null() {
            set_message("out must not be null");
            return PlStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let inventory_name = match required_str(inventory, "inventory") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let system_name = match required_str(feature_system, "feature_system") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let mut settings = Settings::default();
        settings.inventory = inventory_name.to_string();
        let inv = match settings.load_inventory() {
            Ok(inv) => inv,
            Err(e) => {
                let status = match &e {
                    SessionError::Io { .. } => PlStatus::Io,
                    _ => PlStatus::Parse,
                };
                set_message(&e.to_string());
                return status;
            }
        };
        let system: FeatureSystem = match system_name.parse() {
            Ok(s) => s,
            Err(e) => {
                set_message(&e);
                return PlStatus::Parse;
            }
        };
        let bg = background(system, &inv);
        let program = acceptance_program(&[], &bg);
        let sonority = SonorityModel::new(&inv);
        let workbench = Box::new(PlWorkbench {
            inventory: inv,
            background: bg,
            clauses: Vec::new(),
            program,
            derivation_depth: settings.derivation_depth,
            sonority,
        });
        *out = Box::into_raw(workbench);
        PlStatus::Ok
    })
}

/// Releases a workbench. Null is a no-op. The handle must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn pl_workbench_free(workbench: *mut PlWorkbench) {
    if !workbench.is_null() {
        drop(Box::from_raw(workbench));
    }
}

/// Appends every clause of a theory file (as written by the CLI's
/// `learn` subcommand) to the workbench. Prefix and suffix theories
/// load into the same workbench one call each.
#[no_mangle]
pub unsafe extern "C" fn pl_workbench_load_theory(
    workbench: *mut PlWorkbench,
    path: *const c_char,
) -> PlStatus {
    guarded(|| {
        let workbench = match required_mut(workbench) {
            Ok(w) => w,
            Err(status) => return status,
        };
        let path = match required_str(path, "path") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let src = match fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                set_message(&format!("{path}: {e}"));
                return PlStatus::Io;
            }
        };
        let theory = match Theory::parse(&src) {
            Ok(t) => t,
            Err(e) => {
                set_message(&format!("{path}: {e}"));
                return PlStatus::Parse;
            }
        };
        workbench.clauses.extend(theory.clauses);
        workbench.rebuild();
        PlStatus::Ok
    })
}

/// Appends clauses given directly as text, e.g.
/// `"prefix(A,[],C).\nsuffix(A,B,C)."`. Nothing is appended if any
/// clause fails to parse.
#[no_mangle]
pub unsafe extern "C" fn pl_workbench_add_clauses(
    workbench: *mut PlWorkbench,
    text: *const c_char,
) -> PlStatus {
    guarded(|| {
        let workbench = match required_mut(workbench) {
            Ok(w) => w,
            Err(status) => return status,
        };
        let text = match required_str(text, "text") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let clauses = match parse_program(text) {
            Ok(c) => c,
            Err(e) => {
                set_message(&e.to_string());
                return PlStatus::Parse;
            }
        };
        workbench.clauses.extend(clauses);
        workbench.rebuild();
        PlStatus::Ok
    })
}

/// Number of learned clauses currently loaded. Null yields 0.
#[no_mangle]
pub unsafe extern "C" fn pl_workbench_clause_count(workbench: *const PlWorkbench) -> usize {
    match workbench.as_ref() {
        Some(w) => w.clauses.len(),
        None => 0,
    }
}

/// Overrides the resolution-step bound used when judging words. The
/// default matches the CLI default.
#[no_mangle]
pub unsafe extern "C" fn pl_workbench_set_derivation_depth(
    workbench: *mut PlWorkbench,
    depth: usize,
) -> PlStatus {
    guarded(|| {
        let workbench = match required_mut(workbench) {
            Ok(w) => w,
            Err(status) => return status,
        };
        workbench.derivation_depth = depth;
        PlStatus::Ok
    })
}

fn parse_word(text: &str) -> Word {
    Word::new(text.split_whitespace())
}

/// Judges a word, given as space-separated inventory symbols
/// (`"m a : k t"`), against the loaded clauses. On `Ok` with
/// `*accepted == false`, `pl_last_message` names the first affixing
/// event the clauses fail to license (or the template violation).
#[no_mangle]
pub unsafe extern "C" fn pl_workbench_accepts(
    workbench: *const PlWorkbench,
    word: *const c_char,
    accepted: *mut bool,
) -> PlStatus {
    guarded(|| {
        let workbench = match required_ref(workbench) {
            Ok(w) => w,
            Err(status) => return status,
        };
        let word = match required_str(word, "word") {
            Ok(s) => s,
            Err(status) => return status,
        };
        if accepted.is_null() {
            set_message("accepted must not be null");
            return PlStatus::NullArgument;
        }
        let verdict = word_accepted_by_program(
            &workbench.program,
            &workbench.inventory,
            &parse_word(word),
            workbench.derivation_depth,
        );
        match verdict {
            WordVerdict::Accept => *accepted = true,
            WordVerdict::Reject(cause) => {
                *accepted = false;
                set_message(&cause.to_string());
            }
        }
        PlStatus::Ok
    })
}

/// Judges a word with the hand-written sonority model instead of the
/// learned clauses. Rejections leave their cause in `pl_last_message`.
#[no_mangle]
pub unsafe extern "C" fn pl_sonority_accepts(
    workbench: *const PlWorkbench,
    word: *const c_char,
    accepted: *mut bool,
) -> PlStatus {
    guarded(|| {
        let workbench = match required_ref(workbench) {
            Ok(w) => w,
            Err(status) => return status,
        };
        let word = match required_str(word, "word") {
            Ok(s) => s,
            Err(status) => return status,
        };
        if accepted.is_null() {
            set_message("accepted must not be null");
            return PlStatus::NullArgument;
        }
        match workbench.sonority.accepts(&parse_word(word)) {
            WordVerdict::Accept => *accepted = true,
            WordVerdict::Reject(cause) => {
                *accepted = false;
                set_message(&cause.to_string());
            }
        }
        PlStatus::Ok
    })
}

/// Applies `key = value` overrides to the sonority model:
/// `scale.<symbol>`, `license.s`, and `filter.<name>` keys, `#`
/// comments. The model keeps its previous state on error.
#[no_mangle]
pub unsafe extern "C" fn pl_sonority_configure(
    workbench: *mut PlWorkbench,
    text: *const c_char,
) -> PlStatus {
    guarded(|| {
        let workbench = match required_mut(workbench) {
            Ok(w) => w,
            Err(status) => return status,
        };
        let text = match required_str(text, "text") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let mut updated = workbench.sonority.clone();
        if let Err(e) = updated.apply_config(text) {
            set_message(&e.to_string());
            return PlStatus::Parse;
        }
        workbench.sonority = updated;
        PlStatus::Ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn message() -> String {
        unsafe {
            CStr::from_ptr(pl_last_message())
                .to_str()
                .unwrap()
                .to_string()
        }
    }

    fn new_workbench(inventory: &str, system: &str) -> *mut PlWorkbench {
        let mut out = ptr::null_mut();
        let status =
            unsafe { pl_workbench_new(c(inventory).as_ptr(), c(system).as_ptr(), &mut out) };
        assert_eq!(status, PlStatus::Ok, "{}", message());
        assert!(!out.is_null());
        out
    }

    fn judge(w: *const PlWorkbench, word: &str) -> bool {
        let mut accepted = false;
        let status = unsafe { pl_workbench_accepts(w, c(word).as_ptr(), &mut accepted) };
        assert_eq!(status, PlStatus::Ok, "{}", message());
        accepted
    }

    fn judge_sonority(w: *const PlWorkbench, word: &str) -> bool {
        let mut accepted = false;
        let status = unsafe { pl_sonority_accepts(w, c(word).as_ptr(), &mut accepted) };
        assert_eq!(status, PlStatus::Ok, "{}", message());
        accepted
    }

    #[test]
    fn clauses_judge_words() {
        let w = new_workbench("dutch", "ipa");
        unsafe {
            // Nothing loaded: every affixing event is unprovable.
            assert!(!judge(w, "m a : k t"));
            assert!(message().starts_with("affix "), "{}", message());

            let status =
                pl_workbench_add_clauses(w, c("prefix(A,B,C).\nsuffix(A,B,C).").as_ptr());
            assert_eq!(status, PlStatus::Ok);
            assert_eq!(pl_workbench_clause_count(w), 2);

            assert!(judge(w, "m a : k t"));
            assert_eq!(message(), "");
            // Template violations reject even under the universal theory.
            assert!(!judge(w, "m a q t"));
            assert!(message().starts_with("template "), "{}", message());

            pl_workbench_free(w);
        }
    }

    #[test]
    fn theory_files_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("prefix.theory");
        std::fs::write(
            &path,
            "% theory target=prefix clauses=1\nprefix(A,B,C).\n",
        )
        .unwrap();
        let w = new_workbench("dutch", "booij");
        unsafe {
            let status = pl_workbench_load_theory(w, c(path.to_str().unwrap()).as_ptr());
            assert_eq!(status, PlStatus::Ok, "{}", message());
            assert_eq!(pl_workbench_clause_count(w), 1);

            let status = pl_workbench_load_theory(w, c("no-such-file.theory").as_ptr());
            assert_eq!(status, PlStatus::Io);
            assert!(message().contains("no-such-file.theory"));

            pl_workbench_free(w);
        }
    }

    #[test]
    fn sonority_model_judges_and_reconfigures() {
        let w = new_workbench("dutch", "ipa");
        unsafe {
            assert!(judge_sonority(w, "k a r l"));
            assert!(!judge_sonority(w, "k a l r"));
            assert!(!judge_sonority(w, "a b"));
            assert!(message().contains("voiced"), "{}", message());

            assert!(judge_sonority(w, "s t r a k"));
            let status = pl_sonority_configure(w, c("license.s = off").as_ptr());
            assert_eq!(status, PlStatus::Ok, "{}", message());
            assert!(!judge_sonority(w, "s t r a k"));

            let status = pl_sonority_configure(w, c("license.s = sideways").as_ptr());
            assert_eq!(status, PlStatus::Parse);
            assert!(!message().is_empty());

            pl_workbench_free(w);
        }
    }

    #[test]
    fn bad_arguments_are_reported() {
        unsafe {
            let status = pl_workbench_new(c("dutch").as_ptr(), c("ipa").as_ptr(), ptr::null_mut());
            assert_eq!(status, PlStatus::NullArgument);

            let mut out = ptr::null_mut();
            let status = pl_workbench_new(ptr::null(), c("ipa").as_ptr(), &mut out);
            assert_eq!(status, PlStatus::NullArgument);
            assert!(message().contains("inventory"));

            let status = pl_workbench_new(c("dutch").as_ptr(), c("klingon").as_ptr(), &mut out);
            assert_eq!(status, PlStatus::Parse);
            assert!(message().contains("klingon"));
            assert!(out.is_null());

            let status =
                pl_workbench_new(c("no-such.inventory").as_ptr(), c("ipa").as_ptr(), &mut out);
            assert_eq!(status, PlStatus::Io, "{}", message());

            let bad = CStr::from_bytes_with_nul(b"\xff\0").unwrap();
            let status = pl_workbench_new(bad.as_ptr(), c("ipa").as_ptr(), &mut out);
            assert_eq!(status, PlStatus::InvalidUtf8);

            let mut accepted = false;
            let status = pl_workbench_accepts(ptr::null(), c("p a").as_ptr(), &mut accepted);
            assert_eq!(status, PlStatus::NullArgument);

            assert_eq!(pl_workbench_clause_count(ptr::null()), 0);
            pl_workbench_free(ptr::null_mut());

            let w = new_workbench("dutch", "ipa");
            let status = pl_workbench_accepts(w, c("p a").as_ptr(), ptr::null_mut());
            assert_eq!(status, PlStatus::NullArgument);
            let status = pl_workbench_add_clauses(w, c("prefix(A,B,").as_ptr());
            assert_eq!(status, PlStatus::Parse);
            assert_eq!(pl_workbench_clause_count(w), 0);
            pl_workbench_free(w);
        }
    }

    #[test]
    fn custom_inventories_load_from_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.inventory");
        std::fs::write(
            &path,
            "p class=consonant place=bilabial manner=plosive voiced=minus sonority=1\n\
             a class=vowel place=front manner=open length=short round=minus sonority=4\n\
             ^ class=boundary\n",
        )
        .unwrap();
        let w = new_workbench(path.to_str().unwrap(), "sonority");
        unsafe {
            let status = pl_workbench_add_clauses(w, c("prefix(A,B,C).\nsuffix(A,B,C).").as_ptr());
            assert_eq!(status, PlStatus::Ok);
            assert!(judge(w, "p a p"));
            assert!(!judge(w, "b a"));
            pl_workbench_free(w);
        }
    }

    #[test]
    fn depth_bound_is_adjustable() {
        let w = new_workbench("dutch", "ipa");
        unsafe {
            pl_workbench_add_clauses(w, c("prefix(A,B,C).\nsuffix(A,B,C).").as_ptr());
            assert!(judge(w, "s t r a k t"));
            // No proof fits in zero resolution steps.
            let status = pl_workbench_set_derivation_depth(w, 0);
            assert_eq!(status, PlStatus::Ok);
            assert!(!judge(w, "s t r a k t"));
            pl_workbench_free(w);
        }
    }
}
