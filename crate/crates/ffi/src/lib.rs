//! C ABI over `quadinterp`.
//!
//! Images and flows cross the boundary as opaque handles that the caller
//! frees with the matching `*_free` function. Every fallible call returns a
//! [`QiStatus`]; on failure the message is available from
//! [`qi_last_error_message`] on the same thread. Results are written through
//! out-pointers only on success.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quadinterp::filtering::filter_flow;
use quadinterp::flowest::{estimate_flow, FlowProvider, HornSchunckParams, QuartetFlows};
use quadinterp::imgio::{read_flo, read_image, write_flo, write_image};
use quadinterp::metrics::compute_quality;
use quadinterp::quadmodel::MotionModel;
use quadinterp::reversal::reverse_flow;
use quadinterp::synthesis::{InterpConfig, Interpolator};
use quadinterp::{Error, FlowField, HoleMask, Image};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Format = 4,
    Io = 5,
    Scene = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QiModel {
    Quadratic = 0,
    Linear = 1,
}

/// Opaque image handle.
pub struct QiImage(Image);

/// Opaque flow field handle.
pub struct QiFlow(FlowField);

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QiHsParams {
    pub levels: usize,
    pub alpha: f64,
    pub iterations: usize,
    pub warps: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QiInterpConfig {
    pub model: QiModel,
    pub sigma: f64,
    pub radius: f64,
    pub filter_radius: usize,
    pub filter_threshold: f64,
    pub hs: QiHsParams,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QiQuality {
    pub psnr: f64,
    pub ssim: f64,
    pub ie: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QiStatus {
    match err.root() {
        Error::Format { .. } => QiStatus::Format,
        Error::Io { .. } => QiStatus::Io,
        Error::Dimension(_) => QiStatus::Dimension,
        Error::Scene { .. } => QiStatus::Scene,
        _ => QiStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Invalid(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn guard(body: impl FnOnce() -> Outcome) -> QiStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QiStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            QiStatus::NullPointer
        }
        Ok(Err(Failure::Invalid(msg))) => {
            set_last_error(format!("invalid argument: {msg}"));
            QiStatus::InvalidArgument
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            QiStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn c_path<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Invalid("path is not valid UTF-8".into()))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn checked_len(parts: &[usize]) -> Result<usize, Failure> {
    parts
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .ok_or_else(|| Failure::Invalid("size overflow".into()))
}

fn hs_params(p: &QiHsParams) -> HornSchunckParams {
    HornSchunckParams {
        levels: p.levels,
        alpha: p.alpha,
        iterations: p.iterations,
        warps: p.warps,
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn qi_hs_params_default() -> QiHsParams {
    let d = HornSchunckParams::default();
    QiHsParams {
        levels: d.levels,
        alpha: d.alpha,
        iterations: d.iterations,
        warps: d.warps,
    }
}

#[no_mangle]
pub extern "C" fn qi_interp_config_default() -> QiInterpConfig {
    let d = InterpConfig::default();
    QiInterpConfig {
        model: QiModel::Quadratic,
        sigma: d.sigma,
        radius: d.radius,
        filter_radius: d.filter_radius,
        filter_threshold: d.filter_threshold,
        hs: qi_hs_params_default(),
    }
}

/// Creates an image from `width * height * channels` interleaved samples in [0, 1].
#[no_mangle]
pub unsafe extern "C" fn qi_image_new(
    width: usize,
    height: usize,
    channels: usize,
    data: *const f64,
    out: *mut *mut QiImage,
) -> QiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let len = checked_len(&[width, height, channels])?;
        let samples = slice(data, len, "data")?;
        let image = Image::new(width, height, channels, samples.to_vec())?;
        *out = Box::into_raw(Box::new(QiImage(image)));
        Ok(())
    })
}

/// Reads a binary PGM or PPM file.
#[no_mangle]
pub unsafe extern "C" fn qi_image_read(path: *const c_char, out: *mut *mut QiImage) -> QiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let image = read_image(c_path(path)?)?;
        *out = Box::into_raw(Box::new(QiImage(image)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qi_image_write(image: *const QiImage, path: *const c_char) -> QiStatus {
    guard(|| {
        let image = deref(image, "image")?;
        write_image(&image.0, c_path(path)?)?;
        Ok(())
    })
}

/// Writes width, height and channel count; any out-pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn qi_image_dims(
    image: *const QiImage,
    width: *mut usize,
    height: *mut usize,
    channels: *mut usize,
) -> QiStatus {
    guard(|| {
        let image = &deref(image, "image")?.0;
        if let Some(w) = width.as_mut() {
            *w = image.width();
        }
        if let Some(h) = height.as_mut() {
            *h = image.height();
        }
        if let Some(c) = channels.as_mut() {
            *c = image.channels();
        }
        Ok(())
    })
}

/// Copies the samples into `buffer`, which must hold exactly
/// `width * height * channels` values.
#[no_mangle]
pub unsafe extern "C" fn qi_image_copy_data(
    image: *const QiImage,
    buffer: *mut f64,
    len: usize,
) -> QiStatus {
    guard(|| {
        let data = deref(image, "image")?.0.data();
        if len != data.len() {
            return Err(Failure::Invalid(format!(
                "buffer holds {len} values, image has {}",
                data.len()
            )));
        }
        if buffer.is_null() {
            return Err(Failure::Null("buffer"));
        }
        std::slice::from_raw_parts_mut(buffer, len).copy_from_slice(data);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qi_image_free(image: *mut QiImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// Creates a flow field from `width * height` interleaved (u, v) pairs.
#[no_mangle]
pub unsafe extern "C" fn qi_flow_new(
    width: usize,
    height: usize,
    uv: *const f64,
    out: *mut *mut QiFlow,
) -> QiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let len = checked_len(&[width, height, 2])?;
        let values = slice(uv, len, "uv")?;
        let data = values.chunks_exact(2).map(|p| [p[0], p[1]]).collect();
        let flow = FlowField::new(width, height, data)?;
        *out = Box::into_raw(Box::new(QiFlow(flow)));
        Ok(())
    })
}

/// Reads a Middlebury `.flo` file.
#[no_mangle]
pub unsafe extern "C" fn qi_flow_read(path: *const c_char, out: *mut *mut QiFlow) -> QiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let flow = read_flo(c_path(path)?)?;
        *out = Box::into_raw(Box::new(QiFlow(flow)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qi_flow_write(flow: *const QiFlow, path: *const c_char) -> QiStatus {
    guard(|| {
        let flow = deref(flow, "flow")?;
        write_flo(&flow.0, c_path(path)?)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qi_flow_dims(
    flow: *const QiFlow,
    width: *mut usize,
    height: *mut usize,
) -> QiStatus {
    guard(|| {
        let flow = &deref(flow, "flow")?.0;
        if let Some(w) = width.as_mut() {
            *w = flow.width();
        }
        if let Some(h) = height.as_mut() {
            *h = flow.height();
        }
        Ok(())
    })
}

/// Copies interleaved (u, v) pairs into `buffer` of exactly `2 * width * height` values.
#[no_mangle]
pub unsafe extern "C" fn qi_flow_copy_data(
    flow: *const QiFlow,
    buffer: *mut f64,
    len: usize,
) -> QiStatus {
    guard(|| {
        let data = deref(flow, "flow")?.0.data();
        if len != 2 * data.len() {
            return Err(Failure::Invalid(format!(
                "buffer holds {len} values, flow has {}",
                2 * data.len()
            )));
        }
        if buffer.is_null() {
            return Err(Failure::Null("buffer"));
        }
        let dst = std::slice::from_raw_parts_mut(buffer, len);
        for (d, s) in dst.chunks_exact_mut(2).zip(data) {
            d.copy_from_slice(s);
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qi_flow_free(flow: *mut QiFlow) {
    if !flow.is_null() {
        drop(Box::from_raw(flow));
    }
}

/// Estimates flow from `from` to `to`. `params` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn qi_estimate_flow(
    from: *const QiImage,
    to: *const QiImage,
    params: *const QiHsParams,
    out: *mut *mut QiFlow,
) -> QiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let params = params.as_ref().map(hs_params).unwrap_or_default();
        let flow = estimate_flow(&deref(from, "from")?.0, &deref(to, "to")?.0, &params)?;
        *out = Box::into_raw(Box::new(QiFlow(flow)));
        Ok(())
    })
}

/// Reverses a forward flow. When `holes` is non-null it receives one byte per
/// pixel (1 = hole) and `holes_len` must equal `width * height`.
#[no_mangle]
pub unsafe extern "C" fn qi_reverse_flow(
    flow: *const QiFlow,
    sigma: f64,
    radius: f64,
    out: *mut *mut QiFlow,
    holes: *mut u8,
    holes_len: usize,
) -> QiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let flow = &deref(flow, "flow")?.0;
        let pixels = flow.width() * flow.height();
        if !holes.is_null() && holes_len != pixels {
            return Err(Failure::Invalid(format!(
                "holes buffer holds {holes_len} bytes, flow has {pixels} pixels"
            )));
        }
        let result = reverse_flow(flow, sigma, radius)?;
        if !holes.is_null() {
            let dst = std::slice::from_raw_parts_mut(holes, holes_len);
            for (d, &h) in dst.iter_mut().zip(result.holes.data()) {
                *d = u8::from(h);
            }
        }
        *out = Box::into_raw(Box::new(QiFlow(result.flow)));
        Ok(())
    })
}

/// Medoid-filters a backward flow. `holes` (one byte per pixel, nonzero =
/// hole) may be null when there are no holes.
#[no_mangle]
pub unsafe extern "C" fn qi_filter_flow(
    flow: *const QiFlow,
    holes: *const u8,
    holes_len: usize,
    radius: usize,
    threshold: f64,
    out: *mut *mut QiFlow,
) -> QiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let flow = &deref(flow, "flow")?.0;
        let mask = if holes.is_null() {
            HoleMask::empty(flow.width(), flow.height())
        } else {
            let bytes = slice(holes, holes_len, "holes")?;
            HoleMask::new(
                flow.width(),
                flow.height(),
                bytes.iter().map(|&b| b != 0).collect(),
            )?
        };
        let filtered = filter_flow(flow, &mask, radius, threshold)?;
        *out = Box::into_raw(Box::new(QiFlow(filtered)));
        Ok(())
    })
}

/// Synthesizes the frame at time `t` in (0, 1) between `f0` and `f1`.
///
/// `flows` is either null (flows are estimated) or an array of four handles
/// in the order 0->1, 0->-1, 1->0, 1->2. `config` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn qi_interpolate(
    f_m1: *const QiImage,
    f0: *const QiImage,
    f1: *const QiImage,
    f2: *const QiImage,
    flows: *const *const QiFlow,
    config: *const QiInterpConfig,
    t: f64,
    out: *mut *mut QiImage,
) -> QiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let frames = [
            &deref(f_m1, "f_m1")?.0,
            &deref(f0, "f0")?.0,
            &deref(f1, "f1")?.0,
            &deref(f2, "f2")?.0,
        ];
        let c = config
            .as_ref()
            .copied()
            .unwrap_or_else(|| qi_interp_config_default());
        let provider = if flows.is_null() {
            FlowProvider::Estimator(hs_params(&c.hs))
        } else {
            let f = slice(flows, 4, "flows")?;
            let get = |i: usize, what| deref(f[i], what).map(|h| h.0.clone());
            FlowProvider::Precomputed(Box::new(QuartetFlows {
                f0_to_1: get(0, "flows[0]")?,
                f0_to_m1: get(1, "flows[1]")?,
                f1_to_0: get(2, "flows[2]")?,
                f1_to_2: get(3, "flows[3]")?,
            }))
        };
        let cfg = InterpConfig {
            model: match c.model {
                QiModel::Quadratic => MotionModel::Quadratic,
                QiModel::Linear => MotionModel::Linear,
            },
            sigma: c.sigma,
            radius: c.radius,
            filter_radius: c.filter_radius,
            filter_threshold: c.filter_threshold,
            provider,
        };
        let frame = Interpolator::new(frames, &cfg)?.frame_at(t)?;
        *out = Box::into_raw(Box::new(QiImage(frame)));
        Ok(())
    })
}

/// PSNR, SSIM and interpolation error of `prediction` against `reference`.
#[no_mangle]
pub unsafe extern "C" fn qi_quality(
    reference: *const QiImage,
    prediction: *const QiImage,
    out: *mut QiQuality,
) -> QiStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let q = compute_quality(
            &deref(reference, "reference")?.0,
            &deref(prediction, "prediction")?.0,
        )?;
        *out = QiQuality {
            psnr: q.psnr,
            ssim: q.ssim,
            ie: q.ie,
        };
        Ok(())
    })
}
