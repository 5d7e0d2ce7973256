use std::path::Path;

use super::{AudioBuffer, DspError};

/// Reads a PCM or IEEE-float WAV file into a mono buffer.
///
/// Integer samples are scaled by `2^(bits-1)`; stereo is averaged to mono.
pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioBuffer, DspError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let reader = hound::WavReader::open(path).map_err(|e| map_err(&name, e))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 || channels > 2 {
        return Err(DspError::UnsupportedCodec {
            path: name,
            message: format!("{channels} channels (only mono and stereo are supported)"),
        });
    }

    let interleaved: Vec<f32> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .collect::<Result<_, _>>()
            .map_err(|e| map_err(&name, e))?,
        (hound::SampleFormat::Int, bits @ (8 | 16 | 24 | 32)) => {
            let scale = 1.0 / (1u64 << (bits - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| (v as f64 * scale) as f32))
                .collect::<Result<_, _>>()
                .map_err(|e| map_err(&name, e))?
        }
        (format, bits) => {
            return Err(DspError::UnsupportedCodec {
                path: name,
                message: format!("{bits}-bit {format:?} samples"),
            })
        }
    };

    let samples = if channels == 2 {
        interleaved
            .chunks_exact(2)
            .map(|pair| 0.5 * (pair[0] + pair[1]))
            .collect()
    } else {
        interleaved
    };
    Ok(AudioBuffer::new(samples, spec.sample_rate))
}

fn map_err(path: &str, err: hound::Error) -> DspError {
    match err {
        hound::Error::IoError(source) => DspError::Unreadable {
            path: path.to_string(),
            source,
        },
        hound::Error::FormatError(message) => DspError::Malformed {
            path: path.to_string(),
            message: message.to_string(),
        },
        other => DspError::UnsupportedCodec {
            path: path.to_string(),
            message: other.to_string(),
        },
    }
}
