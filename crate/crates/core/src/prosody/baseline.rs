use super::ProsodyError;
use crate::stats::median;

/// Rolling median used as the per-syntagm reference level.
///
/// Entry `i` is the median of the present values in the window
/// `[i - w/2, i - w/2 + w)`, truncated at the ends of the series. When the
/// series is no longer than `w`, every entry is the global median. A window
/// holding only missing values falls back to the global median.
pub fn rolling_baseline(values: &[Option<f64>], w: usize) -> Result<Vec<f64>, ProsodyError> {
    if w == 0 {
        return Err(ProsodyError::Config("window must hold at least one value".into()));
    }
    let present: Vec<f64> = values.iter().flatten().copied().collect();
    let global = median(&present).ok_or(ProsodyError::AllAbsent)?;
    if values.len() <= w {
        return Ok(vec![global; values.len()]);
    }
    let half = w / 2;
    let out = (0..values.len())
        .map(|i| {
            let start = i.saturating_sub(half);
            let end = (i + w - half).min(values.len());
            let window: Vec<f64> = values[start..end].iter().flatten().copied().collect();
            median(&window).unwrap_or(global)
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn some(v: &[f64]) -> Vec<Option<f64>> {
        v.iter().copied().map(Some).collect()
    }

    #[test]
    fn single_value() {
        assert_eq!(rolling_baseline(&some(&[200.0]), 10).unwrap(), vec![200.0]);
    }

    #[test]
    fn short_series_uses_global_median() {
        let out = rolling_baseline(&some(&[5.0, 1.0, 4.0, 2.0, 3.0]), 10).unwrap();
        assert_eq!(out, vec![3.0; 5]);
    }

    #[test]
    fn centred_window() {
        let values: Vec<f64> = (1..=20).map(f64::from).collect();
        let out = rolling_baseline(&some(&values), 10).unwrap();
        // values 6..=15
        assert_eq!(out[10], 10.5);
        // truncated at the left edge: values 1..=5
        assert_eq!(out[0], 3.0);
    }

    #[test]
    fn missing_values_are_skipped() {
        let out = rolling_baseline(&[Some(1.0), None, Some(3.0)], 10).unwrap();
        assert_eq!(out, vec![2.0; 3]);
        assert_eq!(rolling_baseline(&[None, None], 10), Err(ProsodyError::AllAbsent));
    }

    /// Independent route: for each index, enumerate every member of the window
    /// explicitly and take the median by counting ranks.
    fn brute(values: &[Option<f64>], w: usize) -> Vec<f64> {
        let rank_median = |xs: &[f64]| -> f64 {
            let n = xs.len();
            let kth = |k: usize| -> f64 {
                *xs.iter()
                    .find(|&&x| {
                        let below = xs.iter().filter(|&&y| y < x).count();
                        let equal = xs.iter().filter(|&&y| y == x).count();
                        below <= k && k < below + equal
                    })
                    .unwrap()
            };
            if n % 2 == 1 {
                kth(n / 2)
            } else {
                (kth(n / 2 - 1) + kth(n / 2)) / 2.0
            }
        };
        let all: Vec<f64> = values.iter().flatten().copied().collect();
        let global = rank_median(&all);
        let n = values.len() as i64;
        (0..n)
            .map(|i| {
                if n as usize <= w {
                    return global;
                }
                let lo = i - (w / 2) as i64;
                let members: Vec<f64> = (lo..lo + w as i64)
                    .filter(|&j| j >= 0 && j < n)
                    .filter_map(|j| values[j as usize])
                    .collect();
                if members.is_empty() {
                    global
                } else {
                    rank_median(&members)
                }
            })
            .collect()
    }

    proptest::proptest! {
        #[test]
        fn matches_brute_force(
            values in proptest::collection::vec(proptest::option::weighted(0.8, -100.0f64..100.0), 1..50),
            w in 1usize..15,
        ) {
            proptest::prop_assume!(values.iter().any(Option::is_some));
            proptest::prop_assert_eq!(rolling_baseline(&values, w).unwrap(), brute(&values, w));
        }
    }
}
