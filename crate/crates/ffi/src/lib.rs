//! C ABI over `ie-core`.
//!
//! Every object crosses the boundary as an opaque pointer that the caller
//! releases with the matching `*_free` function. Functions return an
//! [`IeStatus`]; on failure the message is available from
//! [`ie_last_error`] on the same thread until the next call.
//!
//! Strings handed out by the library are NUL-terminated UTF-8 and must be
//! released with [`ie_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ie_core::kb::{load_kb, KnowledgeBase, PipelineConfig};
use ie_core::pipeline::{emit_html_document, emit_json, run_validated, Document, RunResult};
use ie_core::scanner::{normalize_date, normalize_time};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IeStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidKb = 3,
    InvalidConfig = 4,
    NoMatch = 5,
    Internal = 6,
}

/// A loaded and validated knowledge base.
pub struct IeKb(KnowledgeBase);

/// A pipeline configuration validated against one knowledge base.
pub struct IePipeline(PipelineConfig);

/// The result of running the pipeline on one document.
pub struct IeResult(RunResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f`, mapping panics to [`IeStatus::Internal`].
fn guard(f: impl FnOnce() -> Result<(), (IeStatus, String)>) -> IeStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IeStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            IeStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (IeStatus, String)> {
    if p.is_null() {
        return Err((IeStatus::NullArgument, format!("`{what}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (IeStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, (IeStatus, String)> {
    p.as_ref().ok_or_else(|| (IeStatus::NullArgument, format!("`{what}` is null")))
}

fn out_arg<T>(p: *mut *mut T, what: &str) -> Result<(), (IeStatus, String)> {
    if p.is_null() {
        Err((IeStatus::NullArgument, format!("`{what}` is null")))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ie_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ie_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads the knowledge base in directory `dir`.
///
/// # Safety
/// `dir` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ie_kb_load(dir: *const c_char, out: *mut *mut IeKb) -> IeStatus {
    guard(|| {
        out_arg(out, "out")?;
        let dir = str_arg(dir, "dir")?;
        let kb = load_kb(Path::new(dir)).map_err(|e| {
            let lines: Vec<String> = e.diagnostics().iter().map(ToString::to_string).collect();
            (IeStatus::InvalidKb, lines.join("\n"))
        })?;
        *out = Box::into_raw(Box::new(IeKb(kb)));
        Ok(())
    })
}

/// # Safety
/// `kb` must come from [`ie_kb_load`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ie_kb_free(kb: *mut IeKb) {
    if !kb.is_null() {
        drop(Box::from_raw(kb));
    }
}

/// Number of fragment grammars in `kb`, 0 for null.
///
/// # Safety
/// `kb` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ie_kb_grammar_count(kb: *const IeKb) -> usize {
    kb.as_ref().map_or(0, |k| k.0.grammars.len())
}

/// Parses a TOML pipeline configuration and validates it against `kb`.
///
/// # Safety
/// `kb` must be a live handle, `toml` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ie_pipeline_parse(kb: *const IeKb, toml: *const c_char, out: *mut *mut IePipeline) -> IeStatus {
    guard(|| {
        out_arg(out, "out")?;
        let kb = ref_arg(kb, "kb")?;
        let src = str_arg(toml, "toml")?;
        let config = PipelineConfig::parse(src, "<memory>").map_err(|e| (IeStatus::InvalidConfig, e.to_string()))?;
        config.validate(&kb.0).map_err(|e| (IeStatus::InvalidConfig, e.to_string()))?;
        *out = Box::into_raw(Box::new(IePipeline(config)));
        Ok(())
    })
}

/// Like [`ie_pipeline_parse`], reading the configuration from `path`.
///
/// # Safety
/// `kb` must be a live handle, `path` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ie_pipeline_load(kb: *const IeKb, path: *const c_char, out: *mut *mut IePipeline) -> IeStatus {
    guard(|| {
        out_arg(out, "out")?;
        let kb = ref_arg(kb, "kb")?;
        let path = str_arg(path, "path")?;
        let config = PipelineConfig::load(Path::new(path)).map_err(|e| (IeStatus::InvalidConfig, e.to_string()))?;
        config.validate(&kb.0).map_err(|e| (IeStatus::InvalidConfig, e.to_string()))?;
        *out = Box::into_raw(Box::new(IePipeline(config)));
        Ok(())
    })
}

/// # Safety
/// `pipeline` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ie_pipeline_free(pipeline: *mut IePipeline) {
    if !pipeline.is_null() {
        drop(Box::from_raw(pipeline));
    }
}

/// Runs the pipeline over `text`. The pipeline must have been created
/// from the same knowledge base.
///
/// # Safety
/// Handles must be live, strings NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ie_run(
    kb: *const IeKb,
    pipeline: *const IePipeline,
    id: *const c_char,
    text: *const c_char,
    out: *mut *mut IeResult,
) -> IeStatus {
    guard(|| {
        out_arg(out, "out")?;
        let kb = ref_arg(kb, "kb")?;
        let pipeline = ref_arg(pipeline, "pipeline")?;
        let id = str_arg(id, "id")?;
        let text = str_arg(text, "text")?;
        let result = run_validated(&Document::new(id, text), &kb.0, &pipeline.0);
        *out = Box::into_raw(Box::new(IeResult(result)));
        Ok(())
    })
}

/// # Safety
/// `result` must come from [`ie_run`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ie_result_free(result: *mut IeResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Number of cached items in `result`, 0 for null.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ie_result_item_count(result: *const IeResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.items().len())
}

/// Number of templates in `result`, 0 for null.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ie_result_template_count(result: *const IeResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.templates.len())
}

/// Writes the JSON rendering of `result` to `*out`.
///
/// # Safety
/// `result` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ie_result_json(result: *const IeResult, out: *mut *mut c_char) -> IeStatus {
    guard(|| {
        out_arg(out, "out")?;
        let r = ref_arg(result, "result")?;
        let json = String::from_utf8(emit_json(&r.0)).map_err(|e| (IeStatus::Internal, e.to_string()))?;
        *out = c_string(json);
        Ok(())
    })
}

/// Writes a self-contained HTML page for `result` to `*out`.
///
/// # Safety
/// `result` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ie_result_html(result: *const IeResult, out: *mut *mut c_char) -> IeStatus {
    guard(|| {
        out_arg(out, "out")?;
        let r = ref_arg(result, "result")?;
        *out = c_string(emit_html_document(&r.0));
        Ok(())
    })
}

fn normalized(
    surface: *const c_char,
    out: *mut *mut c_char,
    f: fn(&str) -> Result<ie_core::avs::AttrValue, ie_core::scanner::ScanError>,
) -> IeStatus {
    guard(|| {
        out_arg(out, "out")?;
        let s = unsafe { str_arg(surface, "surface")? };
        let av = f(s).map_err(|e| (IeStatus::NoMatch, e.to_string()))?;
        let json = serde_json::to_string(&av).map_err(|e| (IeStatus::Internal, e.to_string()))?;
        unsafe { *out = c_string(json) };
        Ok(())
    })
}

/// Normalizes a date surface (`1.3.96`, `21. Oktober`) to a JSON object.
///
/// # Safety
/// `surface` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ie_normalize_date(surface: *const c_char, out: *mut *mut c_char) -> IeStatus {
    normalized(surface, out, normalize_date)
}

/// Normalizes a time surface (`13:15 h`) to a JSON object.
///
/// # Safety
/// `surface` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ie_normalize_time(surface: *const c_char, out: *mut *mut c_char) -> IeStatus {
    normalized(surface, out, normalize_time)
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ie_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
