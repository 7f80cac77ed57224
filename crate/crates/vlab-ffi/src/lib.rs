//! C ABI over the `vlab` core: opaque oracle handles, integer status codes,
//! and flat-buffer queries. Every entry point catches panics, stores a
//! descriptive message retrievable with [`vlab_last_error_message`], and
//! returns a [`VlabStatus`]. The generated header lands in
//! `include/vlab.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num::ToPrimitive;
use vlab::instances::all_extreme::AllExtremeSpace;
use vlab::instances::dsmallest::DSmallestSpace;
use vlab::instances::explicit::ExplicitSpace;
use vlab::instances::random_consistent::{RandomConsistentParams, RandomConsistentSpace};
use vlab::instances::repetitions::RepetitionsSpace;
use vlab::instances::seb::{PointSet, SebSpaceExact};
use vlab::removal::{EvalMode, RemovalRule};
use vlab::sampling::{exact_expectation, monte_carlo_expectation, Budget, Quantity};
use vlab::{Oracle, SpaceError};

/// Outcome of an FFI call. Zero is success; everything else mirrors one
/// arm of the library's error type, plus FFI-only conditions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VlabStatus {
    Ok = 0,
    ConsistencyViolation = 1,
    ModeUnsupported = 2,
    BudgetExceeded = 3,
    NumericInstability = 4,
    RegimeUnsupported = 5,
    RuleInapplicable = 6,
    Poisoned = 7,
    NotDimensionOne = 8,
    LocalityViolation = 9,
    StructureViolation = 10,
    InvalidInstance = 11,
    /// A required pointer argument was null.
    NullArgument = 12,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 13,
    /// The caller's buffer cannot hold the result; re-call with the size
    /// reported through the length output.
    BufferTooSmall = 14,
    /// The library panicked; the handle may be in an unusable state.
    Panic = 15,
    /// A numeric result does not fit the requested fixed-width type.
    Overflow = 16,
}

/// Which expectation to compute.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VlabQuantity {
    /// `E[|V(R)|]`
    Violators = 0,
    /// `E[|X(R)|]`
    Extreme = 1,
    /// `E[|V_k(R)|]`
    ViolatorsUnion = 2,
    /// `E[|X_k(R)|]`
    ExtremeUnion = 3,
}

/// Removal rule selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VlabRule {
    /// k uniformly random elements (seeded)
    Random = 0,
    /// the k smallest constraint ids
    Smallest = 1,
    /// the removal maximizing the violator count
    Adversarial = 2,
    /// the removal minimizing the objective (needs an objective)
    ObjectiveMin = 3,
    /// k elements outside a basis of the sample
    BasisAvoiding = 4,
}

/// Opaque oracle handle; create with one of the `vlab_oracle_*`
/// constructors and release with [`vlab_oracle_free`].
pub struct VlabOracle {
    inner: Oracle,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

fn status_of(err: &SpaceError) -> VlabStatus {
    match err {
        SpaceError::ConsistencyViolation { .. } => VlabStatus::ConsistencyViolation,
        SpaceError::ModeUnsupported { .. } => VlabStatus::ModeUnsupported,
        SpaceError::BudgetExceeded { .. } => VlabStatus::BudgetExceeded,
        SpaceError::NumericInstability(_) => VlabStatus::NumericInstability,
        SpaceError::RegimeUnsupported(_) => VlabStatus::RegimeUnsupported,
        SpaceError::RuleInapplicable(_) => VlabStatus::RuleInapplicable,
        SpaceError::Poisoned { .. } => VlabStatus::Poisoned,
        SpaceError::NotDimensionOne { .. } => VlabStatus::NotDimensionOne,
        SpaceError::LocalityViolation { .. } => VlabStatus::LocalityViolation,
        SpaceError::StructureViolation { .. } => VlabStatus::StructureViolation,
        SpaceError::InvalidInstance(_) => VlabStatus::InvalidInstance,
    }
}

fn fail(err: SpaceError) -> VlabStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Run `body` with panic isolation and the error slot maintained.
fn guarded(body: impl FnOnce() -> VlabStatus) -> VlabStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".into());
            set_error(format!("internal panic: {detail}"));
            VlabStatus::Panic
        }
    }
}

unsafe fn ids_from<'a>(ptr: *const u32, len: usize) -> Option<&'a [u32]> {
    if len == 0 {
        Some(&[])
    } else if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

/// Copy `values` into the caller's buffer, reporting the required length.
unsafe fn fill_buffer(
    values: &[u32],
    out_buf: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> VlabStatus {
    if out_len.is_null() {
        set_error("out_len must not be null".into());
        return VlabStatus::NullArgument;
    }
    *out_len = values.len();
    if values.is_empty() {
        return VlabStatus::Ok;
    }
    if out_buf.is_null() {
        set_error("out_buf must not be null for a nonempty result".into());
        return VlabStatus::NullArgument;
    }
    if cap < values.len() {
        set_error(format!("buffer holds {cap} ids, result needs {}", values.len()));
        return VlabStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(values.as_ptr(), out_buf, values.len());
    VlabStatus::Ok
}

unsafe fn install(oracle: Oracle, out: *mut *mut VlabOracle) -> VlabStatus {
    if out.is_null() {
        set_error("out handle must not be null".into());
        return VlabStatus::NullArgument;
    }
    *out = Box::into_raw(Box::new(VlabOracle { inner: oracle }));
    VlabStatus::Ok
}

fn quantity_of(q: VlabQuantity) -> Quantity {
    match q {
        VlabQuantity::Violators => Quantity::V,
        VlabQuantity::Extreme => Quantity::X,
        VlabQuantity::ViolatorsUnion => Quantity::Vk,
        VlabQuantity::ExtremeUnion => Quantity::Xk,
    }
}

fn rule_of(rule: VlabRule, seed: u64) -> RemovalRule {
    match rule {
        VlabRule::Random => RemovalRule::RandomK { seed },
        VlabRule::Smallest => RemovalRule::SmallestK,
        VlabRule::Adversarial => RemovalRule::AdversarialMaxViolators,
        VlabRule::ObjectiveMin => RemovalRule::ObjectiveMin,
        VlabRule::BasisAvoiding => RemovalRule::BasisAvoiding,
    }
}

fn budget_with(ksubsets: u64) -> Budget {
    Budget { ksubsets: if ksubsets == 0 { Budget::default().ksubsets } else { ksubsets } }
}

/// Message for the most recent failure on this thread, or null after a
/// success. The pointer stays valid until the next FFI call on the same
/// thread.
#[no_mangle]
pub extern "C" fn vlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |msg| msg.as_ptr()))
}

/// Static human-readable name of a status code.
#[no_mangle]
pub extern "C" fn vlab_status_name(status: VlabStatus) -> *const c_char {
    let name: &'static CStr = match status {
        VlabStatus::Ok => c"ok",
        VlabStatus::ConsistencyViolation => c"consistency-violation",
        VlabStatus::ModeUnsupported => c"mode-unsupported",
        VlabStatus::BudgetExceeded => c"budget-exceeded",
        VlabStatus::NumericInstability => c"numeric-instability",
        VlabStatus::RegimeUnsupported => c"regime-unsupported",
        VlabStatus::RuleInapplicable => c"rule-inapplicable",
        VlabStatus::Poisoned => c"poisoned",
        VlabStatus::NotDimensionOne => c"not-dimension-one",
        VlabStatus::LocalityViolation => c"locality-violation",
        VlabStatus::StructureViolation => c"structure-violation",
        VlabStatus::InvalidInstance => c"invalid-instance",
        VlabStatus::NullArgument => c"null-argument",
        VlabStatus::InvalidUtf8 => c"invalid-utf8",
        VlabStatus::BufferTooSmall => c"buffer-too-small",
        VlabStatus::Panic => c"panic",
        VlabStatus::Overflow => c"overflow",
    };
    name.as_ptr()
}

/// Build the d-smallest LP-type oracle on `n` constraints.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn vlab_oracle_d_smallest(
    n: usize,
    d: usize,
    out: *mut *mut VlabOracle,
) -> VlabStatus {
    guarded(|| match DSmallestSpace::new(n, d) {
        Ok(space) => install(Oracle::from_space(space), out),
        Err(e) => fail(e),
    })
}

/// Build the smallest-number-with-repetitions oracle from `len` values.
///
/// # Safety
/// `values` must point to `len` readable `int64_t`s; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vlab_oracle_repetitions(
    values: *const i64,
    len: usize,
    out: *mut *mut VlabOracle,
) -> VlabStatus {
    guarded(|| {
        if values.is_null() && len > 0 {
            set_error("values must not be null".into());
            return VlabStatus::NullArgument;
        }
        let values = std::slice::from_raw_parts(values, len);
        match RepetitionsSpace::new(values.to_vec()) {
            Ok(space) => install(Oracle::from_space(space), out),
            Err(e) => fail(e),
        }
    })
}

/// Build the consistent space on `m` elements where every constraint is
/// extreme in every subset.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn vlab_oracle_all_extreme(
    m: usize,
    out: *mut *mut VlabOracle,
) -> VlabStatus {
    guarded(|| match AllExtremeSpace::new(m) {
        Ok(space) => install(Oracle::from_space(space), out),
        Err(e) => fail(e),
    })
}

/// Build a table-backed oracle from explicit-space JSON
/// (`{"n": ..., "entries": [{"set": [...], "violators": [...]}]}`).
///
/// # Safety
/// `text` must be a valid NUL-terminated C string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vlab_oracle_explicit_json(
    text: *const c_char,
    out: *mut *mut VlabOracle,
) -> VlabStatus {
    guarded(|| {
        if text.is_null() {
            set_error("text must not be null".into());
            return VlabStatus::NullArgument;
        }
        let text = match CStr::from_ptr(text).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("text is not valid UTF-8".into());
                return VlabStatus::InvalidUtf8;
            }
        };
        match ExplicitSpace::from_json(text) {
            Ok(space) => install(Oracle::from_space(space), out),
            Err(e) => fail(e),
        }
    })
}

/// Build the exact smallest-enclosing-ball oracle from `count` points of
/// dimension `dim`, coordinates row-major in `coords`.
///
/// # Safety
/// `coords` must hold `count * dim` readable `int64_t`s; `out` must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn vlab_oracle_ball_integer(
    dim: usize,
    coords: *const i64,
    count: usize,
    out: *mut *mut VlabOracle,
) -> VlabStatus {
    guarded(|| {
        if coords.is_null() && count > 0 {
            set_error("coords must not be null".into());
            return VlabStatus::NullArgument;
        }
        let flat = std::slice::from_raw_parts(coords, count * dim);
        let rows: Vec<&[i64]> = flat.chunks(dim).collect();
        match PointSet::from_integers(dim, &rows) {
            Ok(points) => install(Oracle::from_space(SebSpaceExact::new(points)), out),
            Err(e) => fail(e),
        }
    })
}

/// Build the planted random consistent space. `scan_budget` of zero picks
/// the default cap on candidate-basis scans.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn vlab_oracle_random_consistent(
    n: usize,
    r: usize,
    k: usize,
    delta: usize,
    eps: f64,
    seed: u64,
    scan_budget: u64,
    out: *mut *mut VlabOracle,
) -> VlabStatus {
    guarded(|| {
        let params = RandomConsistentParams {
            n,
            r,
            k,
            delta,
            eps,
            seed,
            scan_budget: if scan_budget == 0 { 10_000_000 } else { scan_budget },
        };
        match RandomConsistentSpace::new(params) {
            Ok(space) => install(Oracle::from_space(space), out),
            Err(e) => fail(e),
        }
    })
}

/// Release a handle. Null is a no-op; anything else must have come from a
/// `vlab_oracle_*` constructor and must not be used afterwards.
///
/// # Safety
/// See above.
#[no_mangle]
pub unsafe extern "C" fn vlab_oracle_free(oracle: *mut VlabOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

/// Ground set size, or 0 for a null handle.
///
/// # Safety
/// `oracle` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn vlab_n(oracle: *const VlabOracle) -> usize {
    if oracle.is_null() {
        0
    } else {
        (*oracle).inner.n()
    }
}

/// `V(set)` as sorted ids. Call with `cap = 0` to learn the needed length
/// through `out_len`, then re-call with a buffer at least that large.
///
/// # Safety
/// `oracle` must be live; `ids` must hold `len` readable ids; `out_buf`
/// must hold `cap` writable slots; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_violators(
    oracle: *const VlabOracle,
    ids: *const u32,
    len: usize,
    out_buf: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() {
            set_error("oracle must not be null".into());
            return VlabStatus::NullArgument;
        }
        let Some(ids) = ids_from(ids, len) else {
            set_error("ids must not be null".into());
            return VlabStatus::NullArgument;
        };
        match (*oracle).inner.violators_ids(ids) {
            Ok(violators) => fill_buffer(&violators, out_buf, cap, out_len),
            Err(e) => fail(e),
        }
    })
}

/// `|V(set)|`.
///
/// # Safety
/// `oracle` must be live; `ids` must hold `len` readable ids; `out_count`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_violator_count(
    oracle: *const VlabOracle,
    ids: *const u32,
    len: usize,
    out_count: *mut u64,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_count.is_null() {
            set_error("oracle and out_count must not be null".into());
            return VlabStatus::NullArgument;
        }
        let Some(ids) = ids_from(ids, len) else {
            set_error("ids must not be null".into());
            return VlabStatus::NullArgument;
        };
        match (*oracle).inner.violator_count_ids(ids) {
            Ok(count) => {
                *out_count = count;
                VlabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Combinatorial dimension (size of the largest basis).
///
/// # Safety
/// `oracle` must be live; `out_dimension` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_dimension(
    oracle: *const VlabOracle,
    out_dimension: *mut usize,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_dimension.is_null() {
            set_error("oracle and out_dimension must not be null".into());
            return VlabStatus::NullArgument;
        }
        match vlab::structure::combinatorial_dimension(&(*oracle).inner) {
            Ok(dim) => {
                *out_dimension = dim;
                VlabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Maximum number of distinct extreme sets reachable by removing exactly
/// `k` elements from one subset. `budget_ksubsets` of zero = default.
///
/// # Safety
/// `oracle` must be live; `out_delta_k` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_delta_k(
    oracle: *const VlabOracle,
    k: usize,
    budget_ksubsets: u64,
    out_delta_k: *mut usize,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_delta_k.is_null() {
            set_error("oracle and out_delta_k must not be null".into());
            return VlabStatus::NullArgument;
        }
        match vlab::sampling::delta_k(&(*oracle).inner, k, &budget_with(budget_ksubsets)) {
            Ok(dk) => {
                *out_delta_k = dk;
                VlabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact expectation over uniform size-`r` samples, as a reduced fraction.
/// Returns `Overflow` when numerator or denominator exceeds `int64_t`;
/// `vlab_exact_expectation_string` has no such limit.
///
/// # Safety
/// `oracle` must be live; `out_num` and `out_den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_exact_expectation(
    oracle: *const VlabOracle,
    quantity: VlabQuantity,
    r: usize,
    k: usize,
    budget_ksubsets: u64,
    out_num: *mut i64,
    out_den: *mut i64,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_num.is_null() || out_den.is_null() {
            set_error("oracle, out_num, and out_den must not be null".into());
            return VlabStatus::NullArgument;
        }
        let result = exact_expectation(
            &(*oracle).inner,
            quantity_of(quantity),
            r,
            k,
            &budget_with(budget_ksubsets),
        );
        match result {
            Ok(result) => {
                let exact = result.exact().expect("exact mode yields a rational");
                match (exact.numer().to_i64(), exact.denom().to_i64()) {
                    (Some(num), Some(den)) => {
                        *out_num = num;
                        *out_den = den;
                        VlabStatus::Ok
                    }
                    _ => {
                        set_error(format!("{exact} does not fit int64 num/den"));
                        VlabStatus::Overflow
                    }
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact expectation as a heap-allocated `"p/q"` string; free with
/// [`vlab_string_free`].
///
/// # Safety
/// `oracle` must be live; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_exact_expectation_string(
    oracle: *const VlabOracle,
    quantity: VlabQuantity,
    r: usize,
    k: usize,
    budget_ksubsets: u64,
    out_text: *mut *mut c_char,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_text.is_null() {
            set_error("oracle and out_text must not be null".into());
            return VlabStatus::NullArgument;
        }
        let result = exact_expectation(
            &(*oracle).inner,
            quantity_of(quantity),
            r,
            k,
            &budget_with(budget_ksubsets),
        );
        match result {
            Ok(result) => {
                let text = result.exact().expect("exact mode yields a rational").to_string();
                *out_text = CString::new(text).expect("no NUL in rational").into_raw();
                VlabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Monte Carlo estimate of an expectation with its standard error.
///
/// # Safety
/// `oracle` must be live; `out_estimate` and `out_std_error` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_monte_carlo(
    oracle: *const VlabOracle,
    quantity: VlabQuantity,
    r: usize,
    k: usize,
    trials: u64,
    seed: u64,
    budget_ksubsets: u64,
    out_estimate: *mut f64,
    out_std_error: *mut f64,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_estimate.is_null() || out_std_error.is_null() {
            set_error("oracle, out_estimate, and out_std_error must not be null".into());
            return VlabStatus::NullArgument;
        }
        let result = monte_carlo_expectation(
            &(*oracle).inner,
            quantity_of(quantity),
            r,
            k,
            trials,
            seed,
            &budget_with(budget_ksubsets),
        );
        match result {
            Ok(result) => match result.value {
                vlab::sampling::ExpectationValue::MonteCarlo { estimate, std_error, .. } => {
                    *out_estimate = estimate;
                    *out_std_error = std_error;
                    VlabStatus::Ok
                }
                _ => unreachable!("monte carlo mode yields an estimate"),
            },
            Err(e) => fail(e),
        }
    })
}

/// Apply a removal rule to `set`, writing the surviving ids (sorted).
///
/// # Safety
/// `oracle` must be live; `ids` must hold `len` readable ids; `out_buf`
/// must hold `cap` writable slots; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_apply_rule(
    oracle: *const VlabOracle,
    rule: VlabRule,
    rule_seed: u64,
    ids: *const u32,
    len: usize,
    k: usize,
    budget_ksubsets: u64,
    out_buf: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() {
            set_error("oracle must not be null".into());
            return VlabStatus::NullArgument;
        }
        let Some(ids) = ids_from(ids, len) else {
            set_error("ids must not be null".into());
            return VlabStatus::NullArgument;
        };
        let rule = rule_of(rule, rule_seed);
        match vlab::removal::apply_rule_ids(
            &(*oracle).inner,
            &rule,
            ids,
            k,
            &budget_with(budget_ksubsets),
        ) {
            Ok(reduced) => fill_buffer(&reduced, out_buf, cap, out_len),
            Err(e) => fail(e),
        }
    })
}

/// Exact `E[|V(R ∖ K_rule)|]` over uniform `r`-samples as a reduced
/// fraction (the random rule averages over every removal choice).
///
/// # Safety
/// `oracle` must be live; `out_num` and `out_den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_removal_expectation_exact(
    oracle: *const VlabOracle,
    rule: VlabRule,
    rule_seed: u64,
    r: usize,
    k: usize,
    budget_ksubsets: u64,
    out_num: *mut i64,
    out_den: *mut i64,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_num.is_null() || out_den.is_null() {
            set_error("oracle, out_num, and out_den must not be null".into());
            return VlabStatus::NullArgument;
        }
        let rule = rule_of(rule, rule_seed);
        let result = vlab::removal::expected_violators_after_removal(
            &(*oracle).inner,
            &rule,
            r,
            k,
            EvalMode::Exact,
            &budget_with(budget_ksubsets),
        );
        match result {
            Ok(result) => {
                let exact = result.exact().expect("exact mode yields a rational");
                match (exact.numer().to_i64(), exact.denom().to_i64()) {
                    (Some(num), Some(den)) => {
                        *out_num = num;
                        *out_den = den;
                        VlabStatus::Ok
                    }
                    _ => {
                        set_error(format!("{exact} does not fit int64 num/den"));
                        VlabStatus::Overflow
                    }
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// Monte Carlo `E[|V(R ∖ K_rule)|]` over uniform `r`-samples.
///
/// # Safety
/// `oracle` must be live; `out_estimate` and `out_std_error` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_removal_expectation_mc(
    oracle: *const VlabOracle,
    rule: VlabRule,
    rule_seed: u64,
    r: usize,
    k: usize,
    trials: u64,
    seed: u64,
    budget_ksubsets: u64,
    out_estimate: *mut f64,
    out_std_error: *mut f64,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_estimate.is_null() || out_std_error.is_null() {
            set_error("oracle, out_estimate, and out_std_error must not be null".into());
            return VlabStatus::NullArgument;
        }
        let rule = rule_of(rule, rule_seed);
        let result = vlab::removal::expected_violators_after_removal(
            &(*oracle).inner,
            &rule,
            r,
            k,
            EvalMode::MonteCarlo { trials, seed },
            &budget_with(budget_ksubsets),
        );
        match result {
            Ok(result) => match result.value {
                vlab::sampling::ExpectationValue::MonteCarlo { estimate, std_error, .. } => {
                    *out_estimate = estimate;
                    *out_std_error = std_error;
                    VlabStatus::Ok
                }
                _ => unreachable!("monte carlo mode yields an estimate"),
            },
            Err(e) => fail(e),
        }
    })
}

/// Verify the exact sampling identity (`k = 0`) or its removal variant
/// (`k > 0`); writes 1 into `out_holds` when the identity checks out.
///
/// # Safety
/// `oracle` must be live; `out_holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_check_identity(
    oracle: *const VlabOracle,
    k: usize,
    budget_ksubsets: u64,
    out_holds: *mut u8,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_holds.is_null() {
            set_error("oracle and out_holds must not be null".into());
            return VlabStatus::NullArgument;
        }
        let report = if k == 0 {
            vlab::sampling::check_sampling_identity(&(*oracle).inner)
        } else {
            vlab::sampling::check_removal_identity(
                &(*oracle).inner,
                k,
                &budget_with(budget_ksubsets),
            )
        };
        match report {
            Ok(report) => {
                *out_holds = u8::from(report.holds);
                VlabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Canonicalize a dimension-1 space into layered multiset form, returned
/// as a JSON document (`{"layers": ..., "f": ...}`); free the string with
/// [`vlab_string_free`].
///
/// # Safety
/// `oracle` must be live; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_canonicalize_dim1_json(
    oracle: *const VlabOracle,
    out_text: *mut *mut c_char,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_text.is_null() {
            set_error("oracle and out_text must not be null".into());
            return VlabStatus::NullArgument;
        }
        match vlab::dim1::canonicalize_dim1(&(*oracle).inner) {
            Ok(canon) => {
                let text = canon.to_json().to_string();
                *out_text = CString::new(text).expect("no NUL in JSON").into_raw();
                VlabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Run consistency / locality / dimension / nondegeneracy diagnostics and
/// return them as JSON; free the string with [`vlab_string_free`].
/// `sampled_trials` applies when the ground set is too large to exhaust.
///
/// # Safety
/// `oracle` must be live; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlab_diagnostics_json(
    oracle: *const VlabOracle,
    sampled_trials: u64,
    seed: u64,
    out_text: *mut *mut c_char,
) -> VlabStatus {
    guarded(|| {
        if oracle.is_null() || out_text.is_null() {
            set_error("oracle and out_text must not be null".into());
            return VlabStatus::NullArgument;
        }
        match vlab::structure::run_diagnostics(&(*oracle).inner, sampled_trials, seed) {
            Ok(diag) => {
                let mut doc = serde_json::to_value(&diag).expect("diagnostics serialize");
                doc["all_ok"] = serde_json::Value::Bool(diag.all_ok());
                let text = doc.to_string();
                *out_text = CString::new(text).expect("no NUL in JSON").into_raw();
                VlabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Free a string returned by this library. Null is a no-op.
///
/// # Safety
/// `text` must have come from a `vlab_*` function and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn vlab_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
