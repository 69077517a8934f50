//! C ABI for the srisum engine.
//!
//! Clusters and selections are opaque handles created and freed by this
//! library. Every fallible call returns an [`SrisumStatus`]; on failure the
//! message is available from [`srisum_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use srisum::corpus::{parse_cluster, DocumentCluster};
use srisum::eval::{score_rouge, MultiRef, RougeConfig, Variant};
use srisum::inference::{Budget, Method};
use srisum::pipeline::{summarize_cluster, Preset, SummarizeParams};
use srisum::similarity::{EmbeddingMatrix, EmbeddingRecord};
use srisum::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrisumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InputError = 4,
    ConfigError = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrisumMethod {
    IndividualGreedy = 0,
    HolisticGreedy = 1,
    Beam = 2,
    Exhaustive = 3,
    Oracle = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrisumBudgetKind {
    Sentences = 0,
    Words = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrisumVariant {
    R1 = 0,
    R2 = 1,
    Rl = 2,
    Rlsum = 3,
    Rsu4 = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrisumParams {
    pub alpha: f64,
    pub theta: f64,
    pub lambda: f64,
    pub method: SrisumMethod,
    pub beam_size: usize,
    pub prefilter_size: usize,
    pub budget_kind: SrisumBudgetKind,
    pub budget: usize,
    pub safety_cap: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SrisumRougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// A loaded document cluster with optional embeddings and importance scores.
pub struct SrisumCluster {
    cluster: DocumentCluster,
    embeddings: Option<EmbeddingMatrix>,
    scores: Option<Vec<f64>>,
}

/// The result of summarizing one cluster.
pub struct SrisumSelection {
    ids: Vec<usize>,
    score: f64,
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: SrisumStatus, msg: impl Into<String>) -> SrisumStatus {
    set_error(msg);
    status
}

fn from_error(err: Error) -> SrisumStatus {
    let status = if err.is_config() {
        SrisumStatus::ConfigError
    } else if matches!(err, Error::Parse { .. }) {
        SrisumStatus::ParseError
    } else {
        SrisumStatus::InputError
    };
    fail(status, err.to_string())
}

fn guard(f: impl FnOnce() -> SrisumStatus) -> SrisumStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(SrisumStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, SrisumStatus> {
    if p.is_null() {
        return Err(fail(SrisumStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SrisumStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($p:expr, $name:literal) => {
        if $p.is_null() {
            return fail(SrisumStatus::NullPointer, concat!($name, " is null"));
        }
    };
}

impl From<SrisumMethod> for Method {
    fn from(m: SrisumMethod) -> Self {
        match m {
            SrisumMethod::IndividualGreedy => Method::IndividualGreedy,
            SrisumMethod::HolisticGreedy => Method::HolisticGreedy,
            SrisumMethod::Beam => Method::Beam,
            SrisumMethod::Exhaustive => Method::Exhaustive,
            SrisumMethod::Oracle => Method::Oracle,
        }
    }
}

impl From<Method> for SrisumMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::IndividualGreedy => SrisumMethod::IndividualGreedy,
            Method::HolisticGreedy => SrisumMethod::HolisticGreedy,
            Method::Beam => SrisumMethod::Beam,
            Method::Exhaustive => SrisumMethod::Exhaustive,
            Method::Oracle => SrisumMethod::Oracle,
        }
    }
}

impl From<SummarizeParams> for SrisumParams {
    fn from(p: SummarizeParams) -> Self {
        let (budget_kind, budget) = match p.budget {
            Budget::Sentences(n) => (SrisumBudgetKind::Sentences, n),
            Budget::Words(w) => (SrisumBudgetKind::Words, w),
        };
        SrisumParams {
            alpha: p.alpha,
            theta: p.theta,
            lambda: p.lambda,
            method: p.method.into(),
            beam_size: p.beam_size,
            prefilter_size: p.prefilter_size,
            budget_kind,
            budget,
            safety_cap: p.safety_cap,
        }
    }
}

impl From<SrisumParams> for SummarizeParams {
    fn from(p: SrisumParams) -> Self {
        SummarizeParams {
            alpha: p.alpha,
            theta: p.theta,
            lambda: p.lambda,
            method: p.method.into(),
            beam_size: p.beam_size,
            prefilter_size: p.prefilter_size,
            budget: match p.budget_kind {
                SrisumBudgetKind::Sentences => Budget::Sentences(p.budget),
                SrisumBudgetKind::Words => Budget::Words(p.budget),
            },
            safety_cap: p.safety_cap,
            trace: false,
        }
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn srisum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Writes the default parameters to `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn srisum_params_default(out: *mut SrisumParams) -> SrisumStatus {
    guard(|| {
        non_null!(out, "out");
        out.write(SummarizeParams::default().into());
        SrisumStatus::Ok
    })
}

/// Writes the parameters of a named preset (`duc`, `tac`, `multinews`,
/// `wikisum`) to `out`.
///
/// # Safety
/// `name` must be null or a NUL-terminated string; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn srisum_params_preset(name: *const c_char, out: *mut SrisumParams) -> SrisumStatus {
    guard(|| {
        let name = try_ffi!(str_arg(name, "name"));
        non_null!(out, "out");
        match name.parse::<Preset>() {
            Ok(p) => {
                out.write(p.params().into());
                SrisumStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parses one cluster object (the JSONL line format) into a new handle.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be null or
/// valid for writes. The handle must be released with [`srisum_cluster_free`].
#[no_mangle]
pub unsafe extern "C" fn srisum_cluster_from_json(json: *const c_char, out: *mut *mut SrisumCluster) -> SrisumStatus {
    guard(|| {
        let json = try_ffi!(str_arg(json, "json"));
        non_null!(out, "out");
        match parse_cluster(json, 1) {
            Ok((cluster, _)) => {
                let handle = Box::new(SrisumCluster {
                    cluster,
                    embeddings: None,
                    scores: None,
                });
                out.write(Box::into_raw(handle));
                SrisumStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of sentences in the cluster; 0 for a null handle.
///
/// # Safety
/// `cluster` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn srisum_cluster_len(cluster: *const SrisumCluster) -> usize {
    cluster.as_ref().map_or(0, |c| c.cluster.len())
}

/// Attaches sentence embeddings: `rows * dim` values in row-major order,
/// one row per sentence.
///
/// # Safety
/// `cluster` must be null or a live handle; `data` must be null or point to
/// `rows * dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn srisum_cluster_set_embeddings(
    cluster: *mut SrisumCluster,
    data: *const f64,
    rows: usize,
    dim: usize,
) -> SrisumStatus {
    guard(|| {
        non_null!(cluster, "cluster");
        non_null!(data, "data");
        let Some(len) = rows.checked_mul(dim) else {
            return fail(SrisumStatus::InputError, "rows * dim overflows");
        };
        let handle = &mut *cluster;
        let values = slice::from_raw_parts(data, len);
        let record = EmbeddingRecord {
            cluster_id: handle.cluster.cluster_id.clone(),
            dim,
            vectors: values.chunks(dim.max(1)).map(<[f64]>::to_vec).collect(),
        };
        match EmbeddingMatrix::from_record(record, &handle.cluster) {
            Ok(m) => {
                handle.embeddings = Some(m);
                SrisumStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Attaches external sentence importance scores, one per sentence. They
/// replace graph centrality when summarizing.
///
/// # Safety
/// `cluster` must be null or a live handle; `scores` must be null or point
/// to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn srisum_cluster_set_importance(
    cluster: *mut SrisumCluster,
    scores: *const f64,
    len: usize,
) -> SrisumStatus {
    guard(|| {
        non_null!(cluster, "cluster");
        non_null!(scores, "scores");
        let handle = &mut *cluster;
        let scores = slice::from_raw_parts(scores, len).to_vec();
        let id = handle.cluster.cluster_id.clone();
        if scores.len() != handle.cluster.len() {
            return from_error(Error::ScoreCount {
                cluster: id,
                scores: scores.len(),
                sentences: handle.cluster.len(),
            });
        }
        if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
            return from_error(Error::NonFinite {
                cluster: id,
                what: format!("importance score {i} is not finite"),
            });
        }
        handle.scores = Some(scores);
        SrisumStatus::Ok
    })
}

/// Releases a cluster handle. Null is ignored.
///
/// # Safety
/// `cluster` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn srisum_cluster_free(cluster: *mut SrisumCluster) {
    if !cluster.is_null() {
        drop(Box::from_raw(cluster));
    }
}

/// Summarizes a cluster. `params` may be null for the defaults.
///
/// # Safety
/// `cluster` must be null or a live handle; `params` must be null or
/// readable; `out` must be null or valid for writes. The selection must be
/// released with [`srisum_selection_free`].
#[no_mangle]
pub unsafe extern "C" fn srisum_summarize(
    cluster: *const SrisumCluster,
    params: *const SrisumParams,
    out: *mut *mut SrisumSelection,
) -> SrisumStatus {
    guard(|| {
        non_null!(cluster, "cluster");
        non_null!(out, "out");
        let handle = &*cluster;
        let params: SummarizeParams = params.as_ref().map_or_else(SummarizeParams::default, |p| (*p).into());
        let result = summarize_cluster(
            &handle.cluster,
            &params,
            handle.embeddings.as_ref(),
            handle.scores.clone(),
        );
        match result {
            Ok(summary) => {
                let text = CString::new(summary.summary_text.replace('\0', " ")).expect("NUL removed");
                let selection = Box::new(SrisumSelection {
                    ids: summary.selection.selected,
                    score: summary.selection.score,
                    text,
                });
                out.write(Box::into_raw(selection));
                SrisumStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of selected sentences; 0 for a null handle.
///
/// # Safety
/// `selection` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn srisum_selection_len(selection: *const SrisumSelection) -> usize {
    selection.as_ref().map_or(0, |s| s.ids.len())
}

/// Copies the selected sentence ids, in selection order, into `out`, which
/// holds `capacity` entries.
///
/// # Safety
/// `selection` must be null or a live handle; `out` must be null or valid
/// for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn srisum_selection_ids(
    selection: *const SrisumSelection,
    out: *mut usize,
    capacity: usize,
) -> SrisumStatus {
    guard(|| {
        non_null!(selection, "selection");
        let ids = &(*selection).ids;
        if capacity < ids.len() {
            return fail(
                SrisumStatus::BufferTooSmall,
                format!("need {} entries, got {capacity}", ids.len()),
            );
        }
        if !ids.is_empty() {
            non_null!(out, "out");
            ptr::copy_nonoverlapping(ids.as_ptr(), out, ids.len());
        }
        SrisumStatus::Ok
    })
}

/// Subset score of the selection; NaN for a null handle.
///
/// # Safety
/// `selection` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn srisum_selection_score(selection: *const SrisumSelection) -> f64 {
    selection.as_ref().map_or(f64::NAN, |s| s.score)
}

/// Summary text, owned by the selection; null for a null handle.
///
/// # Safety
/// `selection` must be null or a live handle. The pointer is valid until
/// the selection is freed.
#[no_mangle]
pub unsafe extern "C" fn srisum_selection_text(selection: *const SrisumSelection) -> *const c_char {
    selection.as_ref().map_or(ptr::null(), |s| s.text.as_ptr())
}

/// Releases a selection handle. Null is ignored.
///
/// # Safety
/// `selection` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn srisum_selection_free(selection: *mut SrisumSelection) {
    if !selection.is_null() {
        drop(Box::from_raw(selection));
    }
}

/// Scores `candidate` against `n_refs` reference texts. A `word_limit` of 0
/// scores the whole candidate. Multiple references use the best F1.
///
/// # Safety
/// `candidate` must be a NUL-terminated string; `refs` must point to
/// `n_refs` NUL-terminated strings; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn srisum_rouge(
    candidate: *const c_char,
    refs: *const *const c_char,
    n_refs: usize,
    variant: SrisumVariant,
    stemming: bool,
    word_limit: usize,
    out: *mut SrisumRougeScore,
) -> SrisumStatus {
    guard(|| {
        let candidate = try_ffi!(str_arg(candidate, "candidate"));
        non_null!(out, "out");
        if n_refs > 0 {
            non_null!(refs, "refs");
        }
        let mut references = Vec::with_capacity(n_refs);
        for i in 0..n_refs {
            references.push(try_ffi!(str_arg(*refs.add(i), "reference")).to_string());
        }
        let variant = match variant {
            SrisumVariant::R1 => Variant::R1,
            SrisumVariant::R2 => Variant::R2,
            SrisumVariant::Rl => Variant::Rl,
            SrisumVariant::Rlsum => Variant::Rlsum,
            SrisumVariant::Rsu4 => Variant::Rsu4,
        };
        let config = RougeConfig {
            variants: vec![variant],
            stemming,
            word_limit: (word_limit > 0).then_some(word_limit),
            multi_ref: MultiRef::Max,
        };
        let s = score_rouge(candidate, &references, &config)
            .remove(&variant)
            .unwrap_or_default();
        out.write(SrisumRougeScore {
            precision: s.precision,
            recall: s.recall,
            f1: s.f1,
        });
        SrisumStatus::Ok
    })
}
