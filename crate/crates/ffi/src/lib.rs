//! C ABI over the `fivedist` library.
//!
//! Every entry point returns an [`FdStatus`]; results travel through out
//! pointers. Point sets cross the boundary as opaque [`FdPointSet`] handles
//! that the caller releases with [`fd_point_set_free`]. After a failing call,
//! [`fd_last_error_message`] describes what went wrong on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fivedist::construction::ConstructionConfig;
use fivedist::io::{write_atomic, PointsFile};
use fivedist::{Error, FpPoint, GridPoint, PointSet};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfGrid = 3,
    DuplicatePoint = 4,
    RetriesExhausted = 5,
    BeyondExhaustiveBound = 6,
    Format = 7,
    Io = 8,
    Panic = 9,
}

/// Pattern bits reported by [`fd_classify`]; bit `k` stands for pattern `k + 1`.
pub const FD_PATTERN_COUNT: u32 = 8;

/// Opaque handle to a point set on the `n × n` grid, kept sorted.
pub struct FdPointSet {
    n: u32,
    points: Vec<GridPoint>,
}

impl FdPointSet {
    fn from_set(set: &PointSet) -> Box<Self> {
        Box::new(FdPointSet { n: set.n(), points: set.points().to_vec() })
    }

    fn to_set(&self) -> PointSet {
        PointSet::new(self.n, self.points.iter().copied()).expect("handle points are validated on insert")
    }
}

/// Outcome of [`fd_construct`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FdConstructSummary {
    pub p: u32,
    /// Parabola coefficients `a, b, c, d, e`.
    pub coefficients: [u32; 5],
    pub initial_size: u64,
    pub refined_size: u64,
    pub final_size: u64,
    pub attempts_used: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> FdStatus {
    match err {
        Error::InvalidArgument(_) | Error::NoPrimeInRange { .. } | Error::SamplingExhausted(_) => {
            FdStatus::InvalidArgument
        }
        Error::OutOfGrid { .. } => FdStatus::OutOfGrid,
        Error::DuplicatePoint { .. } => FdStatus::DuplicatePoint,
        Error::RetriesExhausted { .. } => FdStatus::RetriesExhausted,
        Error::BeyondExhaustiveBound { .. } => FdStatus::BeyondExhaustiveBound,
        Error::Format(_) => FdStatus::Format,
        Error::Io { .. } => FdStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            FdStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer passed for {what}"));
            FdStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            FdStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(ptr: *const T, what: &'static str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or(Failure::Null(what))
}

unsafe fn deref_mut<'a, T>(ptr: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or(Failure::Null(what))
}

unsafe fn path_arg<'a>(ptr: *const c_char) -> Result<&'a Path, Failure> {
    if ptr.is_null() {
        return Err(Failure::Null("path"));
    }
    let s = CStr::from_ptr(ptr).to_str().map_err(|_| Error::InvalidArgument("path is not valid UTF-8".into()))?;
    Ok(Path::new(s))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// always NUL-terminated when `len > 0`). Returns the full message length in
/// bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn fd_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Creates an empty set on the `n × n` grid.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle owned by
/// the caller.
#[no_mangle]
pub unsafe extern "C" fn fd_point_set_new(n: u32, out: *mut *mut FdPointSet) -> FdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        if n == 0 || n > i32::MAX as u32 {
            return Err(Error::InvalidArgument(format!("grid size {n} out of range")).into());
        }
        *out = Box::into_raw(Box::new(FdPointSet { n, points: Vec::new() }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `set` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fd_point_set_free(set: *mut FdPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Inserts `(x, y)`; rejects points outside the grid and duplicates.
///
/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_point_set_push(set: *mut FdPointSet, x: i64, y: i64) -> FdStatus {
    guard(|| {
        let set = deref_mut(set, "set")?;
        let n = i64::from(set.n);
        if !(0..n).contains(&x) || !(0..n).contains(&y) {
            return Err(Error::OutOfGrid { x, y, n: set.n }.into());
        }
        let pt = GridPoint::new(x as i32, y as i32);
        match set.points.binary_search(&pt) {
            Ok(_) => Err(Error::DuplicatePoint { x, y }.into()),
            Err(at) => {
                set.points.insert(at, pt);
                Ok(())
            }
        }
    })
}

/// Number of points in the set; 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_point_set_len(set: *const FdPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.points.len())
}

/// Grid side of the set; 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_point_set_grid(set: *const FdPointSet) -> u32 {
    set.as_ref().map_or(0, |s| s.n)
}

/// The `index`-th point in sorted order.
///
/// # Safety
/// `set` must be a live handle; `x` and `y` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fd_point_set_get(set: *const FdPointSet, index: usize, x: *mut i64, y: *mut i64) -> FdStatus {
    guard(|| {
        let set = deref(set, "set")?;
        let (x, y) = (deref_mut(x, "x")?, deref_mut(y, "y")?);
        let pt = set.points.get(index).ok_or_else(|| {
            Error::InvalidArgument(format!("index {index} out of range for {} points", set.points.len()))
        })?;
        *x = i64::from(pt.x);
        *y = i64::from(pt.y);
        Ok(())
    })
}

/// Reads a JSON points file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fd_point_set_read(path: *const c_char, out: *mut *mut FdPointSet) -> FdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        let (_, set) = PointsFile::read(path_arg(path)?)?;
        *out = Box::into_raw(FdPointSet::from_set(&set));
        Ok(())
    })
}

/// Writes the set as a JSON points file, atomically.
///
/// # Safety
/// `set` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fd_point_set_write(set: *const FdPointSet, path: *const c_char) -> FdStatus {
    guard(|| {
        let set = deref(set, "set")?;
        let path = path_arg(path)?;
        write_atomic(path, PointsFile::from_set(&set.to_set(), None).to_json().as_bytes())?;
        Ok(())
    })
}

/// Smallest prime strictly between `lo` and `hi`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fd_prime_in_range(lo: u64, hi: u64, out: *mut u64) -> FdStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        *out = fivedist::prime_in_range(lo, hi)?;
        Ok(())
    })
}

/// Distinct nonzero squared distances in the `n × n` grid.
#[no_mangle]
pub extern "C" fn fd_grid_distinct_distances(n: u32) -> u64 {
    fivedist::grid_distinct_distances(n)
}

/// Pattern bitmask of the quadruple `(xs[i], ys[i])`; zero when the four
/// points span at least five distinct distances.
///
/// # Safety
/// `xs` and `ys` must point to four readable values each; `mask` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fd_classify(xs: *const i32, ys: *const i32, mask: *mut u32) -> FdStatus {
    guard(|| {
        let xs = deref(xs.cast::<[i32; 4]>(), "xs")?;
        let ys = deref(ys.cast::<[i32; 4]>(), "ys")?;
        let mask = deref_mut(mask, "mask")?;
        let pts: [GridPoint; 4] = std::array::from_fn(|i| GridPoint::new(xs[i], ys[i]));
        let q = fivedist::Quadruple::new(pts[0], pts[1], pts[2], pts[3])
            .ok_or_else(|| Error::InvalidArgument("quadruple has repeated points".into()))?;
        *mask = u32::from(fivedist::classify(&q).bits());
        Ok(())
    })
}

/// Number of forbidden quadruples in the set.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fd_count_forbidden(set: *const FdPointSet, out: *mut u64) -> FdStatus {
    guard(|| {
        let set = deref(set, "set")?;
        let out = deref_mut(out, "out")?;
        *out = fivedist::count_forbidden(&set.to_set());
        Ok(())
    })
}

/// Exact number of nondegenerate parabolas mod `p` through four points.
///
/// # Safety
/// `xs` and `ys` must point to four readable values each; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fd_count_solution_quintuples(
    p: u32,
    xs: *const i64,
    ys: *const i64,
    out: *mut u64,
) -> FdStatus {
    guard(|| {
        let xs = deref(xs.cast::<[i64; 4]>(), "xs")?;
        let ys = deref(ys.cast::<[i64; 4]>(), "ys")?;
        let out = deref_mut(out, "out")?;
        if p < 3 {
            return Err(Error::InvalidArgument(format!("{p} is not an odd prime")).into());
        }
        let pts: [FpPoint; 4] = std::array::from_fn(|i| FpPoint::new(xs[i], ys[i], p));
        *out = fivedist::count_solution_quintuples(p, &pts)?;
        Ok(())
    })
}

/// Runs the construction with default settings for grid size `n` and `seed`.
/// `out_set` may be null when only the summary is wanted.
///
/// # Safety
/// `summary` must be valid; `out_set` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fd_construct(
    n: u32,
    seed: u64,
    summary: *mut FdConstructSummary,
    out_set: *mut *mut FdPointSet,
) -> FdStatus {
    guard(|| {
        let summary = deref_mut(summary, "summary")?;
        let built = fivedist::construct_pipeline(&ConstructionConfig::new(n, seed))?;
        let r = &built.report;
        *summary = FdConstructSummary {
            p: r.params.modulus(),
            coefficients: r.params.coefficients(),
            initial_size: r.sizes.initial as u64,
            refined_size: r.sizes.refined as u64,
            final_size: r.sizes.final_ as u64,
            attempts_used: r.attempts_used,
        };
        if let Some(out) = out_set.as_mut() {
            *out = Box::into_raw(FdPointSet::from_set(&built.points));
        }
        Ok(())
    })
}
