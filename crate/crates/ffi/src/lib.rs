//! C ABI for gatecut.
//!
//! Objects cross the boundary as opaque handles. Constructors such as
//! `gc_circuit_parse` write a handle through their last argument; release
//! it with the matching `gc_*_free`.
//! Every fallible call returns a [`GcStatus`]; on failure the message is
//! available from [`gc_last_error`] on the same thread until the next call.
//! Strings returned through `char **` are owned by the caller and released
//! with [`gc_string_free`].
//!
//! # Safety
//!
//! Handles must come from this library and must not be used after being
//! freed. Input strings must be NUL-terminated UTF-8. Null handles and null
//! output pointers are rejected with `GC_STATUS_NULL_ARGUMENT`; other
//! invalid pointers are undefined behavior. Handles are immutable after
//! construction and may be shared across threads.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gatecut::analysis::{m_star, BreakevenParams};
use gatecut::circuit::{build_tfim, circuit_from_graph, emit_circuit, parse_circuit, Circuit, TfimSpec};
use gatecut::graph::{generate, GraphFamilySpec, UGraph};
use gatecut::router::{delta_ecr, ecr_count, CouplingMap};
use gatecut::select::{random_cut, select_cut_explained, CutSelection, Method, SelectParams};
use gatecut::treewidth::min_fill_trace;
use gatecut::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidParam = 2,
    Parse = 3,
    NoTwoQubitGates = 4,
    EmptyGraph = 5,
    DeviceTooSmall = 6,
    OutOfRange = 7,
    Unsupported = 8,
    Io = 9,
    Internal = 10,
}

impl From<&Error> for GcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Param { .. } | Error::DivisionDomain(_) | Error::Statistics(_) => GcStatus::InvalidParam,
            Error::Format { .. } => GcStatus::Parse,
            Error::NoTwoQubitGates => GcStatus::NoTwoQubitGates,
            Error::EmptyGraph => GcStatus::EmptyGraph,
            Error::DeviceTooSmall { .. } => GcStatus::DeviceTooSmall,
            Error::OutOfRange { .. } => GcStatus::OutOfRange,
            Error::SimulationLimit(_) | Error::Unsupported(_) => GcStatus::Unsupported,
            Error::Io(_) => GcStatus::Io,
        }
    }
}

/// Selection method for [`gc_select`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcMethod {
    Tw2s = 0,
    Stage1Only = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcTopology {
    Chain = 0,
    J1j2Ring = 1,
}

/// Selector weights; [`gc_select_params_default`] fills the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcSelectParams {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

impl From<GcSelectParams> for SelectParams {
    fn from(p: GcSelectParams) -> Self {
        SelectParams {
            k: p.k,
            alpha: p.alpha,
            beta: p.beta,
            alpha2: p.alpha2,
            beta2: p.beta2,
        }
    }
}

/// One shortlist entry.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcCandidate {
    pub u: usize,
    pub v: usize,
    pub score1: f64,
    pub bc: f64,
    pub dp: f64,
    pub score2: f64,
}

pub struct GcGraph(UGraph);
pub struct GcCircuit(Circuit);
pub struct GcSelection(CutSelection);
pub struct GcCoupling(CouplingMap);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(GcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(GcStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(GcStatus::NullArgument, format!("`{what}` is null"))
}

/// Runs `f`, maps errors and panics to a status and records the message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            GcStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(GcStatus::Parse, format!("`{what}` is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(GcStatus::Internal, "string contains NUL".into()))?;
    put(out, c.into_raw(), "out")
}

unsafe fn seeds_arg<'a>(seeds: *const u64, n: usize) -> Result<&'a [u64], Fail> {
    if n == 0 {
        return Err(Fail(GcStatus::InvalidParam, "need at least one routing seed".into()));
    }
    if seeds.is_null() {
        return Err(null("seeds"));
    }
    Ok(std::slice::from_raw_parts(seeds, n))
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn gc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn gc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- graphs ----

/// Parses the graph text format (`n m` header, one `u v` line per edge).
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_parse(text: *const c_char, out: *mut *mut GcGraph) -> GcStatus {
    guard(|| put_box(out, GcGraph(UGraph::from_text(str_arg(text, "text")?)?)))
}

/// Generates a benchmark graph from a JSON family spec such as
/// `{"family":"sbm","n_per":8,"communities":2,"p_in":0.5,"p_out":0.05,"seed":3}`.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_generate(spec_json: *const c_char, out: *mut *mut GcGraph) -> GcStatus {
    guard(|| {
        let spec: GraphFamilySpec = serde_json::from_str(str_arg(spec_json, "spec_json")?)
            .map_err(|e| Fail(GcStatus::Parse, format!("family spec: {e}")))?;
        put_box(out, GcGraph(generate(&spec)?))
    })
}

/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_node_count(g: *const GcGraph, out: *mut usize) -> GcStatus {
    guard(|| put(out, handle(g, "graph")?.0.node_count(), "out"))
}

/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_edge_count(g: *const GcGraph, out: *mut usize) -> GcStatus {
    guard(|| put(out, handle(g, "graph")?.0.edge_count(), "out"))
}

/// Min-fill treewidth upper bound.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_treewidth_upper_bound(g: *const GcGraph, out: *mut usize) -> GcStatus {
    guard(|| put(out, min_fill_trace(&handle(g, "graph")?.0)?.tw_ub, "out"))
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_free(g: *mut GcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

// ---- circuits ----

/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_circuit_parse(text: *const c_char, out: *mut *mut GcCircuit) -> GcStatus {
    guard(|| put_box(out, GcCircuit(parse_circuit(str_arg(text, "text")?)?)))
}

/// One CX per edge, in ascending edge order.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_circuit_from_graph(g: *const GcGraph, out: *mut *mut GcCircuit) -> GcStatus {
    guard(|| put_box(out, GcCircuit(circuit_from_graph(&handle(g, "graph")?.0)?)))
}

/// Trotterised TFIM circuit with the default couplings of `topology`.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_circuit_tfim(
    topology: GcTopology,
    n: usize,
    trotter_steps: usize,
    out: *mut *mut GcCircuit,
) -> GcStatus {
    guard(|| {
        let spec = match topology {
            GcTopology::Chain => TfimSpec::chain(n, trotter_steps),
            GcTopology::J1j2Ring => TfimSpec::j1j2_ring(n, trotter_steps),
        };
        put_box(out, GcCircuit(build_tfim(&spec)?))
    })
}

/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_circuit_qubit_count(c: *const GcCircuit, out: *mut usize) -> GcStatus {
    guard(|| put(out, handle(c, "circuit")?.0.n_qubits(), "out"))
}

/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_circuit_two_qubit_count(c: *const GcCircuit, out: *mut usize) -> GcStatus {
    guard(|| put(out, handle(c, "circuit")?.0.two_qubit_count(), "out"))
}

/// Circuit text; free with [`gc_string_free`].
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_circuit_emit(c: *const GcCircuit, out: *mut *mut c_char) -> GcStatus {
    guard(|| put_string(out, emit_circuit(&handle(c, "circuit")?.0)))
}

/// # Safety
/// `c` must be null or a live circuit handle.
#[no_mangle]
pub unsafe extern "C" fn gc_circuit_free(c: *mut GcCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

// ---- selection ----

#[no_mangle]
pub extern "C" fn gc_select_params_default() -> GcSelectParams {
    let p = SelectParams::default();
    GcSelectParams {
        k: p.k,
        alpha: p.alpha,
        beta: p.beta,
        alpha2: p.alpha2,
        beta2: p.beta2,
    }
}

/// Runs the selector. `params` may be null for the defaults.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_select(
    c: *const GcCircuit,
    params: *const GcSelectParams,
    method: GcMethod,
    out: *mut *mut GcSelection,
) -> GcStatus {
    guard(|| {
        let circuit = &handle(c, "circuit")?.0;
        let p: SelectParams = params.as_ref().copied().unwrap_or_else(|| gc_select_params_default()).into();
        let m = match method {
            GcMethod::Tw2s => Method::Tw2s,
            GcMethod::Stage1Only => Method::Stage1Only,
        };
        put_box(out, GcSelection(select_cut_explained(circuit, &p, m)?.selection))
    })
}

/// Uniformly random two-qubit gate, seeded.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_select_random(c: *const GcCircuit, seed: u64, out: *mut *mut GcSelection) -> GcStatus {
    guard(|| put_box(out, GcSelection(random_cut(&handle(c, "circuit")?.0, seed)?)))
}

/// Chosen edge `(u, v)` with `u < v` and the position of the cut gate.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_selection_cut(
    s: *const GcSelection,
    u: *mut usize,
    v: *mut usize,
    gate_index: *mut usize,
) -> GcStatus {
    guard(|| {
        let sel = &handle(s, "selection")?.0;
        if u.is_null() || v.is_null() || gate_index.is_null() {
            return Err(null("out"));
        }
        u.write(sel.edge.u());
        v.write(sel.edge.v());
        gate_index.write(sel.gate_index);
        Ok(())
    })
}

/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_selection_shortlist_len(s: *const GcSelection, out: *mut usize) -> GcStatus {
    guard(|| put(out, handle(s, "selection")?.0.shortlist.len(), "out"))
}

/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_selection_candidate(
    s: *const GcSelection,
    index: usize,
    out: *mut GcCandidate,
) -> GcStatus {
    guard(|| {
        let list = &handle(s, "selection")?.0.shortlist;
        let c = list.get(index).ok_or(Error::OutOfRange {
            index,
            len: list.len(),
        })?;
        put(
            out,
            GcCandidate {
                u: c.edge.u(),
                v: c.edge.v(),
                score1: c.score1,
                bc: c.bc,
                dp: c.dp,
                score2: c.score2,
            },
            "out",
        )
    })
}

/// Same JSON as the `select` command; free with [`gc_string_free`].
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_selection_to_json(s: *const GcSelection, out: *mut *mut c_char) -> GcStatus {
    guard(|| {
        let json = serde_json::to_string(&handle(s, "selection")?.0).expect("plain data");
        put_string(out, json)
    })
}

/// # Safety
/// `s` must be null or a live selection handle.
#[no_mangle]
pub unsafe extern "C" fn gc_selection_free(s: *mut GcSelection) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

// ---- routing ----

/// The 127-qubit heavy-hex device.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_coupling_eagle(out: *mut *mut GcCoupling) -> GcStatus {
    guard(|| put_box(out, GcCoupling(CouplingMap::eagle())))
}

/// Heavy-hex lattice of odd code distance `d`.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_coupling_heavy_hex(d: usize, out: *mut *mut GcCoupling) -> GcStatus {
    guard(|| put_box(out, GcCoupling(CouplingMap::heavy_hex(d)?)))
}

/// Any connected graph as a device.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_coupling_from_graph(g: *const GcGraph, out: *mut *mut GcCoupling) -> GcStatus {
    guard(|| put_box(out, GcCoupling(CouplingMap::new(handle(g, "graph")?.0.clone())?)))
}

/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_coupling_node_count(cm: *const GcCoupling, out: *mut usize) -> GcStatus {
    guard(|| put(out, handle(cm, "coupling")?.0.node_count(), "out"))
}

/// # Safety
/// `cm` must be null or a live coupling handle.
#[no_mangle]
pub unsafe extern "C" fn gc_coupling_free(cm: *mut GcCoupling) {
    if !cm.is_null() {
        drop(Box::from_raw(cm));
    }
}

/// Mean routed ECR count over `n_seeds` routing seeds.
///
/// # Safety
/// `seeds` must point to `n_seeds` values. See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_ecr_count(
    c: *const GcCircuit,
    cm: *const GcCoupling,
    seeds: *const u64,
    n_seeds: usize,
    out: *mut f64,
) -> GcStatus {
    guard(|| {
        let v = ecr_count(&handle(c, "circuit")?.0, &handle(cm, "coupling")?.0, seeds_arg(seeds, n_seeds)?)?;
        put(out, v, "out")
    })
}

/// Routed ECR saving from deleting the gate at `position`.
///
/// # Safety
/// `seeds` must point to `n_seeds` values. See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_delta_ecr(
    c: *const GcCircuit,
    position: usize,
    cm: *const GcCoupling,
    seeds: *const u64,
    n_seeds: usize,
    out: *mut f64,
) -> GcStatus {
    guard(|| {
        let v = delta_ecr(
            &handle(c, "circuit")?.0,
            position,
            &handle(cm, "coupling")?.0,
            seeds_arg(seeds, n_seeds)?,
        )?;
        put(out, v, "out")
    })
}

// ---- breakeven ----

/// Breakeven shot count; `INFINITY` when `h_ideal` is zero.
///
/// # Safety
/// See the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn gc_m_star(
    p: f64,
    n: f64,
    delta_n: f64,
    sigma_h: f64,
    h_ideal: f64,
    out: *mut f64,
) -> GcStatus {
    guard(|| {
        let v = m_star(&BreakevenParams {
            p,
            n,
            delta_n,
            sigma_h,
            h_ideal,
        })?;
        put(out, v, "out")
    })
}
