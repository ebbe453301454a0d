//! C ABI for `nc_spectra`.
//!
//! Every function returns an [`NcsStatus`]; results come back through out-pointers.
//! Solutions and oracle results are opaque handles owned by the caller and
//! released with the matching `*_free` function. After a non-`Ok` status,
//! [`ncs_last_error_message`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nc_spectra::numerics::upper_incomplete_gamma_int;
use nc_spectra::oracle::{default_r_max, expectation_numeric, radial_eigensolve, GridSpec, OracleResult};
use nc_spectra::perturbation::level_with_solution;
use nc_spectra::series::{solve_quasi_exact, termination_constraints, SeriesSolution};
use nc_spectra::{ClosedFormMode, Error, NCConfig, PotentialParams, QuantumState, SpinBranch, Variant};

/// Result code of every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    NoTerminationRoot = 3,
    Divergent = 4,
    NonConvergence = 5,
    InvalidArgument = 6,
    BufferTooSmall = 7,
    Eigensolver = 8,
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcsParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcsVariant {
    Canonical = 0,
    Complex = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcsBranch {
    /// Canonical variant.
    None = 0,
    Up = 1,
    Down = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcsShiftMode {
    Quadrature = 0,
    CompletedSquare = 1,
    /// Literal closed forms, constant a-term and oscillator energy.
    PaperLiteral = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NcsLevel {
    pub commutative: f64,
    pub zeroth: f64,
    pub first_order_shift: f64,
    pub total: f64,
}

/// Opaque quasi-exact series solution.
pub struct NcsSolution(SeriesSolution);

/// Opaque finite-difference oracle result.
pub struct NcsOracle(OracleResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(NcsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidParams(_) => NcsStatus::InvalidParams,
            Error::InvalidArgument(_) => NcsStatus::InvalidArgument,
            Error::NoTerminationRoot { .. } => NcsStatus::NoTerminationRoot,
            Error::DivergentMoment { .. } => NcsStatus::Divergent,
            Error::QuadratureNonConvergence { .. } => NcsStatus::NonConvergence,
            Error::Eigensolver(_) => NcsStatus::Eigensolver,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(NcsStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NcsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NcsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            NcsStatus::Internal
        }
    }
}

/// # Safety
/// `ptr` must be null or valid for writes of one `T`.
unsafe fn write<T>(ptr: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    ptr.write(value);
    Ok(())
}

/// # Safety
/// `ptr` must be null or point to a live `T`.
unsafe fn deref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

/// Copies `values` into `buf`; `len` receives the full length.
///
/// # Safety
/// `buf` must be valid for `cap` writes (or null with `cap == 0`), `len` for one.
unsafe fn copy_out(values: &[f64], buf: *mut f64, cap: usize, len: *mut usize) -> Result<(), Failure> {
    write(len, values.len(), "len")?;
    if cap < values.len() {
        return Err(Failure(
            NcsStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", values.len()),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(null("buf"));
        }
        std::ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

fn params(p: NcsParams) -> PotentialParams {
    PotentialParams::new(p.a, p.b, p.c)
}

/// Message for the last failed call on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn ncs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ncs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Solves the quasi-exact state `(n, m)` and stores a new handle in `out`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn ncs_solve_quasi_exact(p: NcsParams, n: u32, m: u32, out: *mut *mut NcsSolution) -> NcsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let sol = solve_quasi_exact(params(p), n, m)?;
        out.write(Box::into_raw(Box::new(NcsSolution(sol))));
        Ok(())
    })
}

/// # Safety
/// `sol` must be null or a handle from `ncs_solve_quasi_exact` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncs_solution_free(sol: *mut NcsSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Termination-derived energy.
///
/// # Safety
/// `sol` must be a live handle, `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ncs_solution_energy(sol: *const NcsSolution, out: *mut f64) -> NcsStatus {
    guard(|| write(out, deref(sol, "sol")?.0.energy, "out"))
}

/// The oscillator formula `2√b(1+m+n)`.
///
/// # Safety
/// `sol` must be a live handle, `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ncs_solution_paper_energy(sol: *const NcsSolution, out: *mut f64) -> NcsStatus {
    guard(|| write(out, deref(sol, "sol")?.0.paper_energy, "out"))
}

/// Residual of the termination condition at the given `c` (0 when it holds).
///
/// # Safety
/// `sol` must be a live handle, `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ncs_solution_constraint_residual(sol: *const NcsSolution, out: *mut f64) -> NcsStatus {
    guard(|| write(out, deref(sol, "sol")?.0.constraint_residual, "out"))
}

/// Normalised polynomial coefficients `a_0..a_n`.
///
/// # Safety
/// `sol` must be a live handle; `buf` valid for `cap` writes; `len` for one.
#[no_mangle]
pub unsafe extern "C" fn ncs_solution_coeffs(
    sol: *const NcsSolution,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> NcsStatus {
    guard(|| copy_out(&deref(sol, "sol")?.0.coeffs, buf, cap, len))
}

/// Radial function `R(r)`.
///
/// # Safety
/// `sol` must be a live handle, `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ncs_solution_evaluate(sol: *const NcsSolution, r: f64, out: *mut f64) -> NcsStatus {
    guard(|| {
        if r.is_nan() || r < 0.0 {
            return Err(Failure(NcsStatus::InvalidArgument, format!("r must be ≥ 0 (got {r})")));
        }
        write(out, deref(sol, "sol")?.0.radial(r), "out")
    })
}

/// Admissible Coulomb coefficients for `(n, m)` in ascending order, plus the energy.
///
/// # Safety
/// `buf` valid for `cap` writes; `len` and `energy` for one write each (`energy` may be null).
#[no_mangle]
pub unsafe extern "C" fn ncs_termination_roots(
    a: f64,
    b: f64,
    n: u32,
    m: u32,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
    energy: *mut f64,
) -> NcsStatus {
    guard(|| {
        let t = termination_constraints(a, b, n, m)?;
        if !energy.is_null() {
            energy.write(t.energy);
        }
        copy_out(&t.c_values, buf, cap, len)
    })
}

/// `Γ(s, x)` for integer `s ≥ 1` and any real `x`.
///
/// # Safety
/// `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ncs_upper_incomplete_gamma_int(s: f64, x: f64, out: *mut f64) -> NcsStatus {
    guard(|| write(out, upper_incomplete_gamma_int(s, x)?, "out"))
}

/// Noncommutative level `(n, m, branch)` at `theta`.
///
/// # Safety
/// `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ncs_nc_level(
    p: NcsParams,
    variant: NcsVariant,
    theta: f64,
    n: u32,
    m: u32,
    branch: NcsBranch,
    mode: NcsShiftMode,
    out: *mut NcsLevel,
) -> NcsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let variant = match variant {
            NcsVariant::Canonical => Variant::Canonical,
            NcsVariant::Complex => Variant::Complex,
        };
        let branch = match branch {
            NcsBranch::None => None,
            NcsBranch::Up => Some(SpinBranch::Up),
            NcsBranch::Down => Some(SpinBranch::Down),
        };
        let mut nc = NCConfig::new(theta, variant);
        match mode {
            NcsShiftMode::Quadrature => {}
            NcsShiftMode::CompletedSquare => nc.closed_form_mode = ClosedFormMode::CompletedSquare,
            NcsShiftMode::PaperLiteral => nc = nc.paper_literal(),
        }
        nc.validate()?;
        let state = QuantumState { n, m, branch };
        state.check_variant(variant)?;
        let sol = solve_quasi_exact(params(p), n, m)?;
        let level = level_with_solution(&sol, &state, &nc)?;
        out.write(NcsLevel {
            commutative: level.commutative,
            zeroth: level.zeroth,
            first_order_shift: level.first_order_shift,
            total: level.total,
        });
        Ok(())
    })
}

/// Lowest `k` finite-difference levels for magnetic number `m`.
///
/// `points = 0` and `r_max ≤ 0` select the defaults.
///
/// # Safety
/// `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn ncs_oracle_solve(
    p: NcsParams,
    m: u32,
    points: usize,
    r_max: f64,
    k: usize,
    out: *mut *mut NcsOracle,
) -> NcsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = params(p);
        let base = GridSpec::for_state(&params, m);
        let grid = GridSpec::uniform(
            if r_max > 0.0 { r_max } else { default_r_max(&params, m) },
            if points == 0 { base.points } else { points },
        );
        let result = radial_eigensolve(params, m, grid, k)?;
        out.write(Box::into_raw(Box::new(NcsOracle(result))));
        Ok(())
    })
}

/// # Safety
/// `oracle` must be null or a handle from `ncs_oracle_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncs_oracle_free(oracle: *mut NcsOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

/// # Safety
/// `oracle` must be a live handle, `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ncs_oracle_eigenvalue(oracle: *const NcsOracle, index: usize, out: *mut f64) -> NcsStatus {
    guard(|| {
        let o = &deref(oracle, "oracle")?.0;
        let e = o.eigenvalues.get(index).copied().ok_or_else(|| {
            Failure(
                NcsStatus::InvalidArgument,
                format!("index {index} out of range ({} levels)", o.eigenvalues.len()),
            )
        })?;
        write(out, e, "out")
    })
}

/// Whether halving the grid spacing left every level within tolerance.
///
/// # Safety
/// `oracle` must be a live handle, `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ncs_oracle_converged(oracle: *const NcsOracle, out: *mut bool) -> NcsStatus {
    guard(|| write(out, deref(oracle, "oracle")?.0.converged, "out"))
}

/// `⟨r^power⟩` for the oracle state `index`.
///
/// # Safety
/// `oracle` must be a live handle, `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ncs_oracle_expectation(
    oracle: *const NcsOracle,
    index: usize,
    power: i32,
    out: *mut f64,
) -> NcsStatus {
    guard(|| write(out, expectation_numeric(&deref(oracle, "oracle")?.0, index, power)?, "out"))
}
