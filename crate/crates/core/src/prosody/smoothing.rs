use super::PipelineConfig;

/// First-order exponential smoothing followed by a per-step jump clamp.
///
/// `y[0] = x[0]`, `y[i] = alpha x[i] + (1 - alpha) y[i-1]`, then `y[i]` is
/// pulled to within `max_jump_pct` of `y[i-1]`. With
/// `clamp_before_smoothing` the clamp is applied to the raw series instead.
pub fn smooth_series(values: &[f64], cfg: &PipelineConfig) -> Vec<f64> {
    let jump = cfg.max_jump_pct;
    let clamp_step = |prev: f64, x: f64| x.clamp(prev - jump, prev + jump);
    let mut out = Vec::with_capacity(values.len());
    let Some(&first) = values.first() else {
        return out;
    };

    if cfg.clamp_before_smoothing {
        let mut clamped_prev = first;
        let mut smoothed = first;
        out.push(first);
        for &x in &values[1..] {
            clamped_prev = clamp_step(clamped_prev, x);
            smoothed = cfg.alpha * clamped_prev + (1.0 - cfg.alpha) * smoothed;
            out.push(smoothed);
        }
    } else {
        let mut prev = first;
        out.push(first);
        for &x in &values[1..] {
            prev = clamp_step(prev, cfg.alpha * x + (1.0 - cfg.alpha) * prev);
            out.push(prev);
        }
    }
    out
}
