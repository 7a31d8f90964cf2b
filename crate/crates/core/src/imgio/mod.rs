//! Frame and flow value types with their on-disk formats.
//!
//! Frames are binary PNM (`P5` gray, `P6` RGB, maxval 255). Flow fields use
//! the Middlebury `.flo` layout. Hole masks are stored as `P5` images where
//! 255 marks a hole.

mod flo;
mod flow;
pub(crate) mod image;
mod pnm;

pub use flo::{decode_flo, encode_flo, read_flo, write_flo};
pub use flow::{FlowField, HoleMask};
pub use image::{luma, Image};
pub use pnm::{decode_pnm, encode_pnm, read_holes, read_image, write_holes, write_image};

use std::path::Path;

use crate::error::{Error, Result};

/// Writes `bytes` to `path` through a sibling temporary file and a rename, so
/// readers never observe a partially written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::invalid(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::io(path, e)
    })
}
