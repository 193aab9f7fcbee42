//! C ABI over `nanowire-core`.
//!
//! Every fallible function returns an [`NwStatus`]; on failure the message is
//! available from [`nw_last_error`] on the same thread. Objects are opaque
//! handles created by `nw_*_new`-style functions and released with the
//! matching `nw_*_free`. Passing NULL to a free function is a no-op.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::path::Path;
use std::ptr;

use nanowire_core::error::{Error, ErrorCategory};
use nanowire_core::fitting::{
    field_grid, fit_wl, lso_profile, simulate_trace, FitConfig, FitResult, LsoScan, MagnetoTrace,
    Param,
};
use nanowire_core::gpa::{line_scan, strain_map, LatticeImage, PixelPoint, Raster, ReciprocalPeak, Rect, StrainMap};
use nanowire_core::morphology::{facet_dihedral, minimize_aspect_ratio, CrossSectionModel};
use nanowire_core::tlm::{control_ratio, fit_tlm, TlmDataset, TlmPoint};
use nanowire_core::transport::{delta_g, TransportGeometry, WlModel, WlParams};
use nanowire_core::io;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Malformed input file or value.
    ParseError = 3,
    /// Parameters outside the physical domain.
    DomainError = 4,
    /// The fit failed or is not identifiable.
    FitError = 5,
    /// Output buffer too small; the required length was written.
    BufferTooSmall = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Magnetoconductance trace.
pub struct NwTrace(MagnetoTrace);
/// Result of a weak-localization fit.
pub struct NwFit(FitResult);
/// Lattice image.
pub struct NwImage(LatticeImage);
/// Strain map from geometric phase analysis.
pub struct NwStrainMap(StrainMap);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: NwStatus, msg: impl Into<String>) -> NwStatus {
    set_error(msg);
    status
}

fn from_error(err: impl Into<Error>) -> NwStatus {
    let err = err.into();
    let status = match err.category() {
        ErrorCategory::Parse => NwStatus::ParseError,
        ErrorCategory::Domain => NwStatus::DomainError,
        ErrorCategory::Fit => NwStatus::FitError,
    };
    fail(status, err.to_string())
}

fn guard<F: FnOnce() -> NwStatus + UnwindSafe>(f: F) -> NwStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(f) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(NwStatus::Panic, format!("panic: {msg}"))
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(NwStatus::NullPointer, concat!(stringify!($p), " is NULL"));
        })+
    };
}

unsafe fn slice<'a, T>(p: *const T, n: usize) -> &'a [T] {
    if n == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(p, n)
    }
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, NwStatus> {
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| fail(NwStatus::InvalidArgument, "path is not valid UTF-8"))
}

unsafe fn boxed<T>(out: *mut *mut T, value: T) -> NwStatus {
    *out = Box::into_raw(Box::new(value));
    NwStatus::Ok
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

fn wl_params(l_phi: f64, l_so: f64, width: f64, length: f64) -> Result<WlParams, NwStatus> {
    let l_so = (l_so > 0.0).then_some(l_so);
    TransportGeometry::new(length, width)
        .and_then(|g| WlParams::new(l_phi, l_so, g))
        .map_err(from_error)
}

/// Quantum correction ΔG (S) at `field` (T). `l_so <= 0` selects the base
/// form; lengths in metres.
///
/// # Safety
/// `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nw_wl_delta_g(
    field: f64,
    l_phi: f64,
    l_so: f64,
    width: f64,
    length: f64,
    out: *mut f64,
) -> NwStatus {
    guard(|| {
        non_null!(out);
        let p = match wl_params(l_phi, l_so, width, length) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let model = if p.l_so().is_some() { WlModel::SpinOrbit } else { WlModel::Base };
        *out = delta_g(model, field, &p);
        NwStatus::Ok
    })
}

/// Copies `n` field (T) and conductance (S) values into a new trace.
///
/// # Safety
/// `field` and `conductance` must point to `n` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn nw_trace_new(
    field: *const f64,
    conductance: *const f64,
    n: usize,
    n_parallel: u32,
    out: *mut *mut NwTrace,
) -> NwStatus {
    guard(|| {
        non_null!(field, conductance, out);
        if n_parallel == 0 {
            return fail(NwStatus::InvalidArgument, "n_parallel must be >= 1");
        }
        match MagnetoTrace::new(slice(field, n).to_vec(), slice(conductance, n).to_vec()) {
            Ok(mut t) => {
                t.n_parallel = n_parallel;
                boxed(out, NwTrace(t))
            }
            Err(e) => from_error(e),
        }
    })
}

/// Reads a trace CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn nw_trace_read_csv(path: *const c_char, out: *mut *mut NwTrace) -> NwStatus {
    guard(|| {
        non_null!(path, out);
        let path = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match io::parse_trace_csv(path) {
            Ok(t) => boxed(out, NwTrace(t)),
            Err(e) => from_error(e),
        }
    })
}

/// Synthetic trace on `n` evenly spaced fields over `[b_min, b_max]` with
/// Gaussian noise of `noise_sigma` (S), reproducible for a given `seed`.
///
/// # Safety
/// `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nw_trace_simulate(
    l_phi: f64,
    l_so: f64,
    width: f64,
    length: f64,
    background: f64,
    b_min: f64,
    b_max: f64,
    n: usize,
    noise_sigma: f64,
    seed: u64,
    out: *mut *mut NwTrace,
) -> NwStatus {
    guard(|| {
        non_null!(out);
        let p = match wl_params(l_phi, l_so, width, length) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if n == 0 || !(b_max > b_min) {
            return fail(NwStatus::InvalidArgument, "need n >= 1 and b_max > b_min");
        }
        match simulate_trace(&p, background, &field_grid(b_min, b_max, n), noise_sigma, seed) {
            Ok(t) => boxed(out, NwTrace(t)),
            Err(e) => from_error(e),
        }
    })
}

/// Number of points, or 0 for NULL.
///
/// # Safety
/// `trace` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nw_trace_len(trace: *const NwTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `trace` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nw_trace_free(trace: *mut NwTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Fit configuration. Fill with [`nw_fit_options_default`] and adjust.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct NwFitOptions {
    /// Include the spin-orbit term.
    pub spin_orbit: bool,
    /// Contact spacing L (m).
    pub length: f64,
    /// Channel width W (m): the fixed value, or the initial guess if `fit_width`.
    pub width: f64,
    pub fit_width: bool,
    pub l_phi_init: f64,
    pub l_so_init: f64,
    pub max_iterations: u32,
    /// Only |B| <= this enters the fit; <= 0 uses all points.
    pub field_window: f64,
}

impl NwFitOptions {
    fn config(&self) -> FitConfig {
        let model = if self.spin_orbit { WlModel::SpinOrbit } else { WlModel::Base };
        let mut cfg = FitConfig::new(model, self.length);
        cfg = if self.fit_width {
            cfg.free(Param::Width, self.width)
        } else {
            cfg.fix(Param::Width, self.width)
        };
        cfg = cfg.free(Param::LPhi, self.l_phi_init).free(Param::LSo, self.l_so_init);
        cfg.max_iterations = self.max_iterations as usize;
        cfg.field_window = (self.field_window > 0.0).then_some(self.field_window);
        cfg
    }
}

/// Default options: base model, L = 1.25 µm, W fixed at 20 nm.
///
/// # Safety
/// `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn nw_fit_options_default(out: *mut NwFitOptions) -> NwStatus {
    guard(|| {
        non_null!(out);
        let d = FitConfig::new(WlModel::Base, 1.25e-6);
        *out = NwFitOptions {
            spin_orbit: false,
            length: d.contact_spacing,
            width: d.fixed[&Param::Width],
            fit_width: false,
            l_phi_init: d.initial[&Param::LPhi],
            l_so_init: d.initial[&Param::LSo],
            max_iterations: d.max_iterations as u32,
            field_window: 0.0,
        };
        NwStatus::Ok
    })
}

/// Fits the trace; the result handle must be released with [`nw_fit_free`].
///
/// # Safety
/// `trace` must be a live handle, `options` readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nw_fit_wl(
    trace: *const NwTrace,
    options: *const NwFitOptions,
    out: *mut *mut NwFit,
) -> NwStatus {
    guard(|| {
        non_null!(trace, options, out);
        match fit_wl(&(*trace).0, &(*options).config()) {
            Ok(f) => boxed(out, NwFit(f)),
            Err(e) => from_error(e),
        }
    })
}

/// Fitted values and standard errors. Errors of fixed parameters are 0;
/// `l_so` is 0 for the base model.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NwFitSummary {
    pub l_phi: f64,
    pub l_phi_err: f64,
    pub l_so: f64,
    pub l_so_err: f64,
    pub width: f64,
    pub width_err: f64,
    pub background: f64,
    pub background_err: f64,
    /// Residual sum of squares (S²).
    pub chi2: f64,
    pub n_points: usize,
    pub n_iterations: usize,
    pub converged: bool,
}

/// # Safety
/// `fit` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nw_fit_summary(fit: *const NwFit, out: *mut NwFitSummary) -> NwStatus {
    guard(|| {
        non_null!(fit, out);
        let f = &(*fit).0;
        let v = |p| f.value(p).unwrap_or(0.0);
        let e = |p| f.std_error(p).unwrap_or(0.0);
        *out = NwFitSummary {
            l_phi: v(Param::LPhi),
            l_phi_err: e(Param::LPhi),
            l_so: v(Param::LSo),
            l_so_err: e(Param::LSo),
            width: v(Param::Width),
            width_err: e(Param::Width),
            background: v(Param::Background),
            background_err: e(Param::Background),
            chi2: f.chi2,
            n_points: f.n_points,
            n_iterations: f.n_iterations,
            converged: f.converged,
        };
        NwStatus::Ok
    })
}

/// Fitted per-wire conductance (S) at `field`.
///
/// # Safety
/// `fit` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nw_fit_predict(fit: *const NwFit, field: f64, out: *mut f64) -> NwStatus {
    guard(|| {
        non_null!(fit, out);
        *out = (*fit).0.predict(field);
        NwStatus::Ok
    })
}

/// # Safety
/// `fit` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nw_fit_free(fit: *mut NwFit) {
    if !fit.is_null() {
        drop(Box::from_raw(fit));
    }
}

/// Profile-likelihood lower bound on l_so at `confidence`. `noise_sigma > 0`
/// fixes the per-wire noise level, otherwise it is estimated from residuals.
/// `*bounded` is false when no tested l_so was rejected; `*bound` is then 0.
///
/// # Safety
/// `trace` must be a live handle, `options` readable, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn nw_lso_lower_bound(
    trace: *const NwTrace,
    options: *const NwFitOptions,
    confidence: f64,
    noise_sigma: f64,
    bound: *mut f64,
    bounded: *mut bool,
) -> NwStatus {
    guard(|| {
        non_null!(trace, options, bound, bounded);
        let scan = LsoScan { noise_sigma: (noise_sigma > 0.0).then_some(noise_sigma), ..LsoScan::default() };
        match lso_profile(&(*trace).0, &(*options).config(), &scan, confidence) {
            Ok(p) => {
                *bounded = p.bound.value().is_some();
                *bound = p.bound.value().unwrap_or(0.0);
                NwStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Copies a row-major `rows x cols` image.
///
/// # Safety
/// `values` must point to `rows * cols` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn nw_image_new(
    values: *const f64,
    rows: usize,
    cols: usize,
    pixel_size_nm: f64,
    out: *mut *mut NwImage,
) -> NwStatus {
    guard(|| {
        non_null!(values, out);
        let Some(n) = rows.checked_mul(cols) else {
            return fail(NwStatus::InvalidArgument, "image size overflows");
        };
        match Raster::new(rows, cols, pixel_size_nm, slice(values, n).to_vec()).and_then(LatticeImage::new) {
            Ok(img) => boxed(out, NwImage(img)),
            Err(e) => from_error(e),
        }
    })
}

/// Reads a `.gpa1` raster file.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn nw_image_read(path: *const c_char, out: *mut *mut NwImage) -> NwStatus {
    guard(|| {
        non_null!(path, out);
        let path = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match io::parse_raster(path) {
            Ok(img) => boxed(out, NwImage(img)),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `image` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nw_image_free(image: *mut NwImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// Region in pixel indices, half-open.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct NwRect {
    pub row0: usize,
    pub col0: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Strain along `g = (gx, gy)` (nm⁻¹) relative to `reference`.
/// `mask_sigma <= 0` uses the default mask |g|/6.
///
/// # Safety
/// `image` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nw_strain_map(
    image: *const NwImage,
    gx: f64,
    gy: f64,
    mask_sigma: f64,
    reference: NwRect,
    out: *mut *mut NwStrainMap,
) -> NwStatus {
    guard(|| {
        non_null!(image, out);
        let peak = if mask_sigma > 0.0 {
            ReciprocalPeak::new(gx, gy, mask_sigma)
        } else {
            ReciprocalPeak::with_default_mask(gx, gy)
        };
        let rect = Rect::new(reference.row0, reference.col0, reference.rows, reference.cols);
        match peak.and_then(|p| strain_map(&(*image).0, &p, rect)) {
            Ok(m) => boxed(out, NwStrainMap(m)),
            Err(e) => from_error(e),
        }
    })
}

/// Shape and untrusted border width of a strain map.
///
/// # Safety
/// `map` must be a live handle and the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn nw_strain_map_dims(
    map: *const NwStrainMap,
    rows: *mut usize,
    cols: *mut usize,
    border_px: *mut usize,
) -> NwStatus {
    guard(|| {
        non_null!(map, rows, cols, border_px);
        let m = &(*map).0;
        *rows = m.raster.rows();
        *cols = m.raster.cols();
        *border_px = m.border_px;
        NwStatus::Ok
    })
}

/// Copies the row-major strain values into `buf`.
///
/// # Safety
/// `map` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nw_strain_map_values(map: *const NwStrainMap, buf: *mut f64, len: usize) -> NwStatus {
    guard(|| {
        non_null!(map, buf);
        let values = (*map).0.raster.values();
        if len < values.len() {
            return fail(NwStatus::BufferTooSmall, format!("need {} values, got {len}", values.len()));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        NwStatus::Ok
    })
}

/// # Safety
/// `map` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nw_strain_map_free(map: *mut NwStrainMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Profile from `(row0, col0)` to `(row1, col1)` averaged over `width_px`.
/// Writes up to `capacity` samples of distance (nm) and strain; `*len`
/// receives the sample count, also when the buffers are too small.
///
/// # Safety
/// `map` must be a live handle; `distance` and `value` must hold
/// `capacity` doubles; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn nw_line_scan(
    map: *const NwStrainMap,
    row0: f64,
    col0: f64,
    row1: f64,
    col1: f64,
    width_px: usize,
    distance: *mut f64,
    value: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> NwStatus {
    guard(|| {
        non_null!(map, distance, value, len);
        let profile = match line_scan(
            &(*map).0.raster,
            PixelPoint::new(row0, col0),
            PixelPoint::new(row1, col1),
            width_px,
        ) {
            Ok(p) => p,
            Err(e) => return from_error(e),
        };
        *len = profile.len();
        if capacity < profile.len() {
            return fail(NwStatus::BufferTooSmall, format!("need {} samples, got {capacity}", profile.len()));
        }
        for (i, (d, v)) in profile.into_iter().enumerate() {
            *distance.add(i) = d;
            *value.add(i) = v;
        }
        NwStatus::Ok
    })
}

/// Cross-section energy model, SI units.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct NwCrossSection {
    pub gamma_top: f64,
    pub gamma_side: f64,
    pub gamma_interface: f64,
    pub area: f64,
    pub misfit: f64,
    pub modulus: f64,
    pub relaxation_k: f64,
}

impl From<NwCrossSection> for CrossSectionModel {
    fn from(m: NwCrossSection) -> Self {
        CrossSectionModel {
            gamma_top: m.gamma_top,
            gamma_side: m.gamma_side,
            gamma_interface: m.gamma_interface,
            area: m.area,
            misfit: m.misfit,
            modulus: m.modulus,
            relaxation_k: m.relaxation_k,
        }
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nw_cross_section_default(out: *mut NwCrossSection) -> NwStatus {
    guard(|| {
        non_null!(out);
        let d = CrossSectionModel::default();
        *out = NwCrossSection {
            gamma_top: d.gamma_top,
            gamma_side: d.gamma_side,
            gamma_interface: d.gamma_interface,
            area: d.area,
            misfit: d.misfit,
            modulus: d.modulus,
            relaxation_k: d.relaxation_k,
        };
        NwStatus::Ok
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NwShapeOptimum {
    /// Height over width.
    pub aspect_ratio: f64,
    /// Energy per unit length (J/m).
    pub energy: f64,
    pub width: f64,
    pub height: f64,
    /// The minimum lies on the search bracket.
    pub edge_minimum: bool,
}

/// Minimum-energy aspect ratio within `[r_lo, r_hi]`.
///
/// # Safety
/// `model` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nw_minimize_aspect_ratio(
    model: *const NwCrossSection,
    r_lo: f64,
    r_hi: f64,
    out: *mut NwShapeOptimum,
) -> NwStatus {
    guard(|| {
        non_null!(model, out);
        match minimize_aspect_ratio(&(*model).into(), r_lo, r_hi) {
            Ok(o) => {
                *out = NwShapeOptimum {
                    aspect_ratio: o.aspect_ratio,
                    energy: o.energy,
                    width: o.shape.width,
                    height: o.shape.height,
                    edge_minimum: o.edge_minimum,
                };
                NwStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Angle (degrees) between the normals of two Miller planes.
///
/// # Safety
/// `a` and `b` must point to 3 ints; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nw_facet_dihedral(a: *const i32, b: *const i32, out: *mut f64) -> NwStatus {
    guard(|| {
        non_null!(a, b, out);
        let (a, b) = (slice(a, 3), slice(b, 3));
        match facet_dihedral([a[0], a[1], a[2]], [b[0], b[1], b[2]]) {
            Ok(v) => {
                *out = v;
                NwStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NwTlmResult {
    /// Per contact, per wire (Ω).
    pub contact_resistance: f64,
    /// Per wire (Ω/m).
    pub resistance_per_length: f64,
    pub r_squared: f64,
    /// Standard errors; false with fewer than three points.
    pub has_errors: bool,
    pub contact_resistance_err: f64,
    pub resistance_per_length_err: f64,
    pub negative_contact_warning: bool,
}

/// Transfer-length fit of `n` measured resistances (Ω) at channel lengths
/// (m) through `n_parallel` wires.
///
/// # Safety
/// `lengths` and `resistances` must hold `n` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nw_tlm_fit(
    lengths: *const f64,
    resistances: *const f64,
    n: usize,
    n_parallel: u32,
    out: *mut NwTlmResult,
) -> NwStatus {
    guard(|| {
        non_null!(lengths, resistances, out);
        let points = slice(lengths, n)
            .iter()
            .zip(slice(resistances, n))
            .map(|(&length, &resistance)| TlmPoint { length, resistance })
            .collect();
        match TlmDataset::new(points, n_parallel).and_then(|d| fit_tlm(&d)) {
            Ok(r) => {
                let (ce, se) = r.std_errors.unwrap_or((0.0, 0.0));
                *out = NwTlmResult {
                    contact_resistance: r.contact_resistance,
                    resistance_per_length: r.resistance_per_length,
                    r_squared: r.r_squared,
                    has_errors: r.std_errors.is_some(),
                    contact_resistance_err: ce,
                    resistance_per_length_err: se,
                    negative_contact_warning: r.negative_contact_warning,
                };
                NwStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `control / sample`; `*attributed` is set when the ratio reaches `threshold`.
///
/// # Safety
/// `ratio` and `attributed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nw_control_ratio(
    sample: f64,
    control: f64,
    threshold: f64,
    ratio: *mut f64,
    attributed: *mut bool,
) -> NwStatus {
    guard(|| {
        non_null!(ratio, attributed);
        match control_ratio(sample, control, threshold) {
            Ok(c) => {
                *ratio = c.ratio;
                *attributed = c.conduction_attributed;
                NwStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
