//! PNG and raw PPM (P6) image loading and saving for the preview command.

use std::path::Path;

use image::{ColorType, ImageFormat};

use gi_vqa_core::augment::RgbImage;

use crate::error::{CliError, CliResult};

fn format_for(path: &Path) -> CliResult<ImageFormat> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("png") => Ok(ImageFormat::Png),
        Some("ppm") | Some("pnm") => Ok(ImageFormat::Pnm),
        other => Err(CliError::input(format!(
            "unsupported image extension {other:?} (expected png or ppm)"
        ))),
    }
}

pub fn load_image(path: &Path) -> CliResult<RgbImage> {
    format_for(path)?;
    let decoded = image::open(path)
        .map_err(|e| CliError::input(format!("cannot decode {}: {e}", path.display())))?
        .to_rgb8();
    let (width, height) = decoded.dimensions();
    RgbImage::new(width, height, decoded.into_raw()).map_err(CliError::from)
}

pub fn save_image(path: &Path, img: &RgbImage) -> CliResult<()> {
    let format = format_for(path)?;
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    image::save_buffer_with_format(
        path,
        img.pixels(),
        img.width(),
        img.height(),
        ColorType::Rgb8,
        format,
    )
    .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_and_ppm_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let img = RgbImage::new(3, 2, (0..18).collect()).unwrap();
        for name in ["img.png", "img.ppm"] {
            let path = dir.path().join(name);
            save_image(&path, &img).unwrap();
            let loaded = load_image(&path).unwrap();
            assert_eq!(loaded, img, "round trip through {name}");
        }
    }

    #[test]
    fn unknown_extension_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let img = RgbImage::new(2, 2, vec![0; 12]).unwrap();
        assert!(save_image(&dir.path().join("img.bmp"), &img).is_err());
        assert!(load_image(&dir.path().join("missing.txt")).is_err());
    }
}
