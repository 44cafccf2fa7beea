//! C ABI over the `mfpc` library.
//!
//! Instances and solutions cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free` function. Every fallible
//! call returns an [`MfpcStatus`]; on failure a message is available from
//! [`mfpc_last_error`] on the same thread. Strings returned through `char**`
//! out-parameters must be released with [`mfpc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use mfpc::bench::{self, BenchConfig, Method};
use mfpc::generate::{CapacityRegime, GenParams};
use mfpc::{FlowAssignment, Instance, SolveOutcome, SolveStatus};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MfpcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    DimensionMismatch = 5,
    Panic = 6,
}

/// Solution quality, mirroring the CSV `status` column.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MfpcSolveStatus {
    Optimal = 0,
    Feasible = 1,
    InfeasibleNonzero = 2,
}

impl From<SolveStatus> for MfpcSolveStatus {
    fn from(s: SolveStatus) -> Self {
        match s {
            SolveStatus::Optimal => Self::Optimal,
            SolveStatus::Feasible => Self::Feasible,
            SolveStatus::InfeasibleNonzero => Self::InfeasibleNonzero,
        }
    }
}

/// Opaque instance handle.
pub struct MfpcInstance(Instance);

/// Opaque solution handle: a flow assignment with the bounds that produced it.
pub struct MfpcSolution {
    flow: FlowAssignment,
    lower: u64,
    upper: u64,
    status: MfpcSolveStatus,
    nodes: u64,
}

fn solution(r: SolveOutcome) -> MfpcSolution {
    MfpcSolution { lower: r.lower, upper: r.upper, status: r.status.into(), nodes: r.nodes_explored, flow: r.best }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: MfpcStatus, msg: impl Into<String>) -> MfpcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> MfpcStatus) -> MfpcStatus {
    set_error("");
    panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(MfpcStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, MfpcStatus> {
    if p.is_null() {
        return Err(fail(MfpcStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(MfpcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_string(s: String, out: *mut *mut c_char) -> MfpcStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            MfpcStatus::Ok
        }
        Err(e) => fail(MfpcStatus::InvalidArgument, e.to_string()),
    }
}

fn boxed<T>(value: T, out: *mut *mut T) -> MfpcStatus {
    unsafe { *out = Box::into_raw(Box::new(value)) };
    MfpcStatus::Ok
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(MfpcStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn mfpc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mfpc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse an instance from its text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_instance_parse(text: *const c_char, out: *mut *mut MfpcInstance) -> MfpcStatus {
    guard(|| {
        non_null!(out);
        let s = match read_str(text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match mfpc::parse_instance(s) {
            Ok(inst) => boxed(MfpcInstance(inst), out),
            Err(e) => fail(MfpcStatus::ParseError, e.to_string()),
        }
    })
}

/// Generate a random instance. `regime` is 1 (capacities 10..=15) or 2 (15..=20).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_instance_generate(
    nodes: usize,
    arc_density: f64,
    conflict_density: f64,
    regime: u8,
    seed: u64,
    out: *mut *mut MfpcInstance,
) -> MfpcStatus {
    guard(|| {
        non_null!(out);
        let Some(regime) = CapacityRegime::from_index(regime) else {
            return fail(MfpcStatus::InvalidArgument, format!("capacity regime {regime} is not 1 or 2"));
        };
        let params = GenParams { nodes, arc_density, conflict_density, regime, seed };
        match mfpc::generate(&params) {
            Ok(inst) => boxed(MfpcInstance(inst), out),
            Err(e) => fail(MfpcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `inst` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mfpc_instance_free(inst: *mut MfpcInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mfpc_instance_node_count(inst: *const MfpcInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.node_count())
}

/// # Safety
/// `inst` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mfpc_instance_arc_count(inst: *const MfpcInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.arc_count())
}

/// # Safety
/// `inst` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mfpc_instance_conflict_count(inst: *const MfpcInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.conflict_count())
}

/// Instance text format. Free the result with `mfpc_string_free`.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_instance_serialize(inst: *const MfpcInstance, out: *mut *mut c_char) -> MfpcStatus {
    guard(|| {
        non_null!(inst, out);
        write_string(mfpc::serialize_instance(&(*inst).0), out)
    })
}

/// MILP model in LP format. Free the result with `mfpc_string_free`.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_export_lp(inst: *const MfpcInstance, out: *mut *mut c_char) -> MfpcStatus {
    guard(|| {
        non_null!(inst, out);
        write_string(mfpc::export_lp(&mfpc::build_model(&(*inst).0)), out)
    })
}

/// Exact branch-and-bound. `node_limit` 0 means unlimited.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_solve_bnb(
    inst: *const MfpcInstance,
    time_limit_secs: f64,
    node_limit: u64,
    out: *mut *mut MfpcSolution,
) -> MfpcStatus {
    guard(|| {
        non_null!(inst, out);
        if !(time_limit_secs.is_finite() && time_limit_secs > 0.0) {
            return fail(MfpcStatus::InvalidArgument, format!("time limit {time_limit_secs} is not positive"));
        }
        let config = BenchConfig {
            time_limit: Duration::from_secs_f64(time_limit_secs),
            node_limit: (node_limit > 0).then_some(node_limit),
            ..BenchConfig::default()
        };
        boxed(solution(bench::solve_method(&(*inst).0, Method::Bnb, &config)), out)
    })
}

/// Greedy heuristic. The upper bound reported is the max-flow relaxation.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_solve_greedy(
    inst: *const MfpcInstance,
    seed: u64,
    restarts: u32,
    out: *mut *mut MfpcSolution,
) -> MfpcStatus {
    guard(|| {
        non_null!(inst, out);
        let config = BenchConfig { seed, restarts, ..BenchConfig::default() };
        boxed(solution(bench::solve_method(&(*inst).0, Method::Greedy, &config)), out)
    })
}

/// Read a solution file body for an instance with `arc_count` arcs. Bounds
/// are both set to the declared total; status is `Feasible`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_solution_parse(
    text: *const c_char,
    arc_count: usize,
    out: *mut *mut MfpcSolution,
) -> MfpcStatus {
    guard(|| {
        non_null!(out);
        let s = match read_str(text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match mfpc::parse_solution(s, arc_count) {
            Ok(flow) => boxed(
                MfpcSolution { lower: flow.total, upper: flow.total, status: MfpcSolveStatus::Feasible, nodes: 0, flow },
                out,
            ),
            Err(e) => fail(MfpcStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `sol` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mfpc_solution_free(sol: *mut MfpcSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Total flow of the assignment.
///
/// # Safety
/// `sol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mfpc_solution_value(sol: *const MfpcSolution) -> u64 {
    sol.as_ref().map_or(0, |s| s.flow.total)
}

/// # Safety
/// `sol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mfpc_solution_arc_count(sol: *const MfpcSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.flow.flow.len())
}

/// Bounds, status and work done: search nodes for branch-and-bound,
/// restarts for greedy, 0 for parsed solutions.
///
/// # Safety
/// `sol` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_solution_summary(
    sol: *const MfpcSolution,
    lower: *mut u64,
    upper: *mut u64,
    status: *mut MfpcSolveStatus,
    nodes: *mut u64,
) -> MfpcStatus {
    guard(|| {
        non_null!(sol, lower, upper, status, nodes);
        let s = &*sol;
        *lower = s.lower;
        *upper = s.upper;
        *status = s.status;
        *nodes = s.nodes;
        MfpcStatus::Ok
    })
}

/// Copy per-arc flows into `buf`, which must hold exactly the arc count.
///
/// # Safety
/// `sol` must be a live handle; `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn mfpc_solution_flows(sol: *const MfpcSolution, buf: *mut u64, len: usize) -> MfpcStatus {
    guard(|| {
        non_null!(sol, buf);
        let flow = &(*sol).flow.flow;
        if len != flow.len() {
            return fail(MfpcStatus::DimensionMismatch, format!("buffer holds {len} values, solution has {}", flow.len()));
        }
        ptr::copy_nonoverlapping(flow.as_ptr(), buf, len);
        MfpcStatus::Ok
    })
}

/// Solution file text. Free the result with `mfpc_string_free`.
///
/// # Safety
/// `sol` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_solution_serialize(sol: *const MfpcSolution, out: *mut *mut c_char) -> MfpcStatus {
    guard(|| {
        non_null!(sol, out);
        write_string(mfpc::serialize_solution(&(*sol).flow), out)
    })
}

/// Run the feasibility checker; `violations` receives the number of
/// violated constraints (0 means feasible).
///
/// # Safety
/// Handles must be live; `violations` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mfpc_check_feasible(
    inst: *const MfpcInstance,
    sol: *const MfpcSolution,
    violations: *mut usize,
) -> MfpcStatus {
    guard(|| {
        non_null!(inst, sol, violations);
        match mfpc::check_feasible(&(*inst).0, &(*sol).flow) {
            Ok(verdict) => {
                *violations = verdict.violations.len();
                if let Some(first) = verdict.violations.first() {
                    set_error(first.to_string());
                }
                MfpcStatus::Ok
            }
            Err(e) => fail(MfpcStatus::DimensionMismatch, e.to_string()),
        }
    })
}
