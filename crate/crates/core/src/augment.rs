//! Deterministic pixel-level augmentations with a replayable audit trail.
//!
//! Four named strategies mirror the ablation setup: `none` (identity),
//! `standard` (random crop keeping at least 70% of the area, coin-flip
//! horizontal flip, color jitter with half-range 0.2), `heavy` (standard
//! plus coin-flip vertical flip and rotation up to 30 degrees), and
//! `fine_tuned` (crop keeping at least 85%, horizontal flip only, jitter
//! 0.1). Every sampled parameter is logged in a [`TransformRecord`];
//! replaying the record on the same input reproduces the output byte for
//! byte.
//!
//! Numeric rules, fixed everywhere: rotation resamples nearest-neighbor,
//! and jitter arithmetic rounds half away from zero before clamping to
//! 0..=255.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededStream;

/// Row-major 8-bit RGB buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<RgbImage> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize * 3;
        if pixels.len() != expected {
            return Err(Error::Parameter(format!(
                "pixel buffer has {} bytes, {width}x{height} rgb needs {expected}",
                pixels.len()
            )));
        }
        Ok(RgbImage {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Result<RgbImage> {
        let mut pixels = Vec::with_capacity(width as usize * height as usize * 3);
        for _ in 0..width as usize * height as usize {
            pixels.extend_from_slice(&rgb);
        }
        RgbImage::new(width, height, pixels)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * 3
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let o = self.offset(x, y);
        [self.pixels[o], self.pixels[o + 1], self.pixels[o + 2]]
    }

    fn set_pixel(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let o = self.offset(x, y);
        self.pixels[o..o + 3].copy_from_slice(&rgb);
    }
}

/// The four named augmentation plans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    None,
    Standard,
    Heavy,
    FineTuned,
}

impl std::fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StrategyKind::None => write!(f, "none"),
            StrategyKind::Standard => write!(f, "standard"),
            StrategyKind::Heavy => write!(f, "heavy"),
            StrategyKind::FineTuned => write!(f, "fine_tuned"),
        }
    }
}

/// Sampling ranges for one strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyParams {
    /// Lower bound on the kept area fraction of the random crop.
    pub crop_min_area: f64,
    pub hflip_prob: f64,
    pub vflip_prob: f64,
    /// Half-range shared by the brightness, contrast, and saturation factors.
    pub jitter: f64,
    /// Rotation angle drawn uniformly from `[-max, +max]` degrees.
    pub rotate_max_degrees: f64,
}

/// A validated strategy: kind plus ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentationStrategy {
    kind: StrategyKind,
    params: StrategyParams,
}

impl AugmentationStrategy {
    pub fn none() -> AugmentationStrategy {
        AugmentationStrategy {
            kind: StrategyKind::None,
            params: StrategyParams {
                crop_min_area: 1.0,
                hflip_prob: 0.0,
                vflip_prob: 0.0,
                jitter: 0.0,
                rotate_max_degrees: 0.0,
            },
        }
    }

    pub fn standard() -> AugmentationStrategy {
        AugmentationStrategy {
            kind: StrategyKind::Standard,
            params: StrategyParams {
                crop_min_area: 0.7,
                hflip_prob: 0.5,
                vflip_prob: 0.0,
                jitter: 0.2,
                rotate_max_degrees: 0.0,
            },
        }
    }

    pub fn heavy() -> AugmentationStrategy {
        AugmentationStrategy {
            kind: StrategyKind::Heavy,
            params: StrategyParams {
                crop_min_area: 0.7,
                hflip_prob: 0.5,
                vflip_prob: 0.5,
                jitter: 0.2,
                rotate_max_degrees: 30.0,
            },
        }
    }

    pub fn fine_tuned() -> AugmentationStrategy {
        AugmentationStrategy {
            kind: StrategyKind::FineTuned,
            params: StrategyParams {
                crop_min_area: 0.85,
                hflip_prob: 0.5,
                vflip_prob: 0.0,
                jitter: 0.1,
                rotate_max_degrees: 0.0,
            },
        }
    }

    pub fn of_kind(kind: StrategyKind) -> AugmentationStrategy {
        match kind {
            StrategyKind::None => Self::none(),
            StrategyKind::Standard => Self::standard(),
            StrategyKind::Heavy => Self::heavy(),
            StrategyKind::FineTuned => Self::fine_tuned(),
        }
    }

    /// Build a strategy with custom ranges. Orientation-changing transforms
    /// (vertical flip, rotation) are only allowed for `heavy`.
    pub fn with_params(kind: StrategyKind, params: StrategyParams) -> Result<AugmentationStrategy> {
        if !(params.crop_min_area > 0.0 && params.crop_min_area <= 1.0) {
            return Err(Error::Parameter(format!(
                "crop_min_area must be in (0, 1], got {}",
                params.crop_min_area
            )));
        }
        for (name, p) in [
            ("hflip_prob", params.hflip_prob),
            ("vflip_prob", params.vflip_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Parameter(format!(
                    "{name} must be in [0, 1], got {p}"
                )));
            }
        }
        if !(0.0..=0.5).contains(&params.jitter) {
            return Err(Error::Parameter(format!(
                "jitter half-range must be in [0, 0.5], got {}",
                params.jitter
            )));
        }
        if !(0.0..=180.0).contains(&params.rotate_max_degrees) {
            return Err(Error::Parameter(format!(
                "rotate_max_degrees must be in [0, 180], got {}",
                params.rotate_max_degrees
            )));
        }
        if kind != StrategyKind::Heavy
            && (params.vflip_prob > 0.0 || params.rotate_max_degrees > 0.0)
        {
            return Err(Error::Parameter(format!(
                "strategy {kind} must not use vertical flips or rotation"
            )));
        }
        Ok(AugmentationStrategy { kind, params })
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn params(&self) -> &StrategyParams {
        &self.params
    }
}

/// One applied operation with its sampled parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum TransformOp {
    HorizontalFlip,
    VerticalFlip,
    Crop {
        x: u32,
        y: u32,
        width: u32,
        height: u32,
    },
    Rotate {
        degrees: f64,
        fill: [u8; 3],
    },
    ColorJitter {
        brightness: f64,
        contrast: f64,
        saturation: f64,
    },
}

impl TransformOp {
    /// Apply this op deterministically (no randomness left at this level).
    pub fn apply(&self, img: &RgbImage) -> Result<RgbImage> {
        match *self {
            TransformOp::HorizontalFlip => Ok(horizontal_flip(img)),
            TransformOp::VerticalFlip => Ok(vertical_flip(img)),
            TransformOp::Crop {
                x,
                y,
                width,
                height,
            } => crop(img, x, y, width, height),
            TransformOp::Rotate { degrees, fill } => Ok(rotate(img, degrees, fill)),
            TransformOp::ColorJitter {
                brightness,
                contrast,
                saturation,
            } => Ok(apply_jitter_factors(img, brightness, contrast, saturation)),
        }
    }
}

/// An op plus the stream position at which its parameters were drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformStep {
    #[serde(flatten)]
    pub op: TransformOp,
    pub rng_position: u64,
}

/// Ordered audit trail of the applied operations.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TransformRecord {
    pub steps: Vec<TransformStep>,
}

impl TransformRecord {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// True when any step is a vertical flip or rotation.
    pub fn changes_orientation(&self) -> bool {
        self.steps
            .iter()
            .any(|s| matches!(s.op, TransformOp::VerticalFlip | TransformOp::Rotate { .. }))
    }
}

/// Mirror columns left-to-right.
pub fn horizontal_flip(img: &RgbImage) -> RgbImage {
    let mut out = img.clone();
    for y in 0..img.height {
        for x in 0..img.width {
            out.set_pixel(img.width - 1 - x, y, img.pixel(x, y));
        }
    }
    out
}

/// Mirror rows top-to-bottom.
pub fn vertical_flip(img: &RgbImage) -> RgbImage {
    let mut out = img.clone();
    for y in 0..img.height {
        for x in 0..img.width {
            out.set_pixel(x, img.height - 1 - y, img.pixel(x, y));
        }
    }
    out
}

fn crop(img: &RgbImage, x: u32, y: u32, width: u32, height: u32) -> Result<RgbImage> {
    if width == 0
        || height == 0
        || x.checked_add(width).is_none_or(|end| end > img.width)
        || y.checked_add(height).is_none_or(|end| end > img.height)
    {
        return Err(Error::Parameter(format!(
            "crop {width}x{height}+{x}+{y} exceeds image {}x{}",
            img.width, img.height
        )));
    }
    let mut pixels = Vec::with_capacity(width as usize * height as usize * 3);
    for row in y..y + height {
        let start = img.offset(x, row);
        pixels.extend_from_slice(&img.pixels[start..start + width as usize * 3]);
    }
    RgbImage::new(width, height, pixels)
}

/// Uniformly crop a rectangle keeping at least `min_area_fraction` of the
/// area: the height is drawn first, then the narrowest width honoring the
/// area bound, then the offsets.
pub fn random_crop(
    img: &RgbImage,
    min_area_fraction: f64,
    stream: &mut SeededStream,
) -> Result<(RgbImage, TransformRecord)> {
    if !(min_area_fraction > 0.0 && min_area_fraction <= 1.0) {
        return Err(Error::Parameter(format!(
            "min_area_fraction must be in (0, 1], got {min_area_fraction}"
        )));
    }
    if img.width < 2 || img.height < 2 {
        return Err(Error::Parameter(format!(
            "random crop needs at least a 2x2 image, got {}x{}",
            img.width, img.height
        )));
    }
    let rng_position = stream.position();
    let (w, h) = (img.width as u64, img.height as u64);
    let min_height = (min_area_fraction * h as f64).ceil() as u64;
    let crop_h = min_height + stream.next_below(h - min_height + 1);
    let min_width = ((min_area_fraction * (w * h) as f64) / crop_h as f64).ceil() as u64;
    let crop_w = min_width + stream.next_below(w - min_width + 1);
    let x = stream.next_below(w - crop_w + 1) as u32;
    let y = stream.next_below(h - crop_h + 1) as u32;

    let op = TransformOp::Crop {
        x,
        y,
        width: crop_w as u32,
        height: crop_h as u32,
    };
    let out = op.apply(img)?;
    Ok((
        out,
        TransformRecord {
            steps: vec![TransformStep { op, rng_position }],
        },
    ))
}

/// Rotate about the image center with nearest-neighbor sampling; dimensions
/// are unchanged and uncovered pixels take the fill color.
pub fn rotate(img: &RgbImage, degrees: f64, fill: [u8; 3]) -> RgbImage {
    let theta = degrees.to_radians();
    let (cos, sin) = (theta.cos(), theta.sin());
    let cx = (img.width as f64 - 1.0) / 2.0;
    let cy = (img.height as f64 - 1.0) / 2.0;
    let mut out = img.clone();
    for y in 0..img.height {
        for x in 0..img.width {
            let dx = x as f64 - cx;
            let dy = y as f64 - cy;
            let sx = (cx + cos * dx + sin * dy).round();
            let sy = (cy - sin * dx + cos * dy).round();
            let rgb =
                if sx >= 0.0 && sy >= 0.0 && (sx as u32) < img.width && (sy as u32) < img.height {
                    img.pixel(sx as u32, sy as u32)
                } else {
                    fill
                };
            out.set_pixel(x, y, rgb);
        }
    }
    out
}

/// Round half away from zero, then clamp to the channel range.
fn quantize(value: f64) -> u8 {
    value.round().clamp(0.0, 255.0) as u8
}

fn scale_pixels(img: &RgbImage, f: impl Fn(usize, u8) -> f64) -> RgbImage {
    let pixels = img
        .pixels
        .iter()
        .enumerate()
        .map(|(i, &v)| quantize(f(i, v)))
        .collect();
    RgbImage {
        width: img.width,
        height: img.height,
        pixels,
    }
}

/// Apply fixed brightness, contrast, and saturation factors in that order,
/// quantizing after each stage.
pub fn apply_jitter_factors(
    img: &RgbImage,
    brightness: f64,
    contrast: f64,
    saturation: f64,
) -> RgbImage {
    // brightness: plain scale
    let bright = scale_pixels(img, |_, v| v as f64 * brightness);

    // contrast: blend each channel toward its own image-wide mean
    let mut channel_sum = [0.0f64; 3];
    for (i, &v) in bright.pixels.iter().enumerate() {
        channel_sum[i % 3] += v as f64;
    }
    let pixel_count = (bright.width as usize * bright.height as usize) as f64;
    let channel_mean = [
        channel_sum[0] / pixel_count,
        channel_sum[1] / pixel_count,
        channel_sum[2] / pixel_count,
    ];
    let contrasted = scale_pixels(&bright, |i, v| {
        let mean = channel_mean[i % 3];
        mean + contrast * (v as f64 - mean)
    });

    // saturation: blend each pixel toward its Rec. 601 luma
    let mut out = contrasted.clone();
    for y in 0..out.height {
        for x in 0..out.width {
            let [r, g, b] = contrasted.pixel(x, y);
            let luma = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
            out.set_pixel(
                x,
                y,
                [
                    quantize(luma + saturation * (r as f64 - luma)),
                    quantize(luma + saturation * (g as f64 - luma)),
                    quantize(luma + saturation * (b as f64 - luma)),
                ],
            );
        }
    }
    out
}

/// Sample brightness/contrast/saturation factors from `[1-r, 1+r]` per
/// property and apply them. Half-ranges above 0.5 are rejected.
pub fn color_jitter(
    img: &RgbImage,
    brightness_range: f64,
    contrast_range: f64,
    saturation_range: f64,
    stream: &mut SeededStream,
) -> Result<(RgbImage, TransformRecord)> {
    for (name, r) in [
        ("brightness", brightness_range),
        ("contrast", contrast_range),
        ("saturation", saturation_range),
    ] {
        if !(0.0..=0.5).contains(&r) {
            return Err(Error::Parameter(format!(
                "{name} half-range must be in [0, 0.5], got {r}"
            )));
        }
    }
    let rng_position = stream.position();
    let brightness = stream.next_range_f64(1.0 - brightness_range, 1.0 + brightness_range);
    let contrast = stream.next_range_f64(1.0 - contrast_range, 1.0 + contrast_range);
    let saturation = stream.next_range_f64(1.0 - saturation_range, 1.0 + saturation_range);
    let op = TransformOp::ColorJitter {
        brightness,
        contrast,
        saturation,
    };
    let out = op.apply(img)?;
    Ok((
        out,
        TransformRecord {
            steps: vec![TransformStep { op, rng_position }],
        },
    ))
}

/// Run a whole strategy on one image.
///
/// The random stream is derived from `(seed, "augment|" + image_id)`, so a
/// corpus can be augmented in any order or in parallel without changing any
/// output. Operation order is fixed: crop, horizontal flip, color jitter,
/// then (heavy only) vertical flip and rotation.
pub fn apply_strategy(
    img: &RgbImage,
    strategy: &AugmentationStrategy,
    seed: u64,
    image_id: &str,
) -> Result<(RgbImage, TransformRecord)> {
    if strategy.kind == StrategyKind::None {
        return Ok((img.clone(), TransformRecord::default()));
    }
    let params = strategy.params;
    let mut stream = SeededStream::derive(seed, &format!("augment|{image_id}"));
    let mut record = TransformRecord::default();

    let (mut current, crop_record) = random_crop(img, params.crop_min_area, &mut stream)?;
    record.steps.extend(crop_record.steps);

    let rng_position = stream.position();
    if stream.next_bool(params.hflip_prob) {
        current = horizontal_flip(&current);
        record.steps.push(TransformStep {
            op: TransformOp::HorizontalFlip,
            rng_position,
        });
    }

    let (jittered, jitter_record) = color_jitter(
        &current,
        params.jitter,
        params.jitter,
        params.jitter,
        &mut stream,
    )?;
    current = jittered;
    record.steps.extend(jitter_record.steps);

    if params.vflip_prob > 0.0 {
        let rng_position = stream.position();
        if stream.next_bool(params.vflip_prob) {
            current = vertical_flip(&current);
            record.steps.push(TransformStep {
                op: TransformOp::VerticalFlip,
                rng_position,
            });
        }
    }
    if params.rotate_max_degrees > 0.0 {
        let rng_position = stream.position();
        let degrees = stream.next_range_f64(-params.rotate_max_degrees, params.rotate_max_degrees);
        let fill = [0u8, 0, 0];
        current = rotate(&current, degrees, fill);
        record.steps.push(TransformStep {
            op: TransformOp::Rotate { degrees, fill },
            rng_position,
        });
    }
    Ok((current, record))
}

/// Re-apply a recorded transform sequence to an input image.
pub fn replay(img: &RgbImage, record: &TransformRecord) -> Result<RgbImage> {
    let mut current = img.clone();
    for step in &record.steps {
        current = step.op.apply(&current)?;
    }
    Ok(current)
}
