//! Parsers for list and range arguments.

/// `7`, `4-14` or `0,3,9`.
pub fn parse_mcs_list(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    let out: Vec<usize> = if let Some((a, b)) = s.split_once('-') {
        let a: usize = a.trim().parse().map_err(|_| format!("bad MCS range {s:?}"))?;
        let b: usize = b.trim().parse().map_err(|_| format!("bad MCS range {s:?}"))?;
        if a > b {
            return Err(format!("empty MCS range {s:?}"));
        }
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|v| v.trim().parse().map_err(|_| format!("bad MCS {v:?}")))
            .collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err("no MCS given".into());
    }
    Ok(out)
}

/// `start:stop:step` (inclusive), a comma list, or one value. `inf` is accepted.
pub fn parse_snr_points(s: &str) -> Result<Vec<f64>, String> {
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad SNR value {v:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
                return Err(format!("bad SNR sweep {s:?}"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            // Snap to 1e-9 to drop accumulated rounding error.
            Ok((0..=n).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect())
        }
        [single] => single.split(',').map(num).collect(),
        _ => Err(format!("bad SNR spec {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mcs_forms() {
        assert_eq!(parse_mcs_list("7").unwrap(), vec![7]);
        assert_eq!(parse_mcs_list("4-6").unwrap(), vec![4, 5, 6]);
        assert_eq!(parse_mcs_list("0, 3,9").unwrap(), vec![0, 3, 9]);
        assert!(parse_mcs_list("6-4").is_err());
        assert!(parse_mcs_list("x").is_err());
    }

    #[test]
    fn snr_forms() {
        assert_eq!(parse_snr_points("-2:0:0.5").unwrap(), vec![-2.0, -1.5, -1.0, -0.5, 0.0]);
        assert_eq!(parse_snr_points("0:1:0.1").unwrap().len(), 11);
        assert_eq!(parse_snr_points("0.1:0.3:0.1").unwrap(), vec![0.1, 0.2, 0.3]);
        assert_eq!(parse_snr_points("3").unwrap(), vec![3.0]);
        assert_eq!(parse_snr_points("1,inf").unwrap(), vec![1.0, f64::INFINITY]);
        assert!(parse_snr_points("0:1:0").is_err());
        assert!(parse_snr_points("1:0:1").is_err());
        assert!(parse_snr_points("a:b").is_err());
    }
}
