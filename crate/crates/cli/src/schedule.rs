use crate::CliError;

/// Largest exponent accepted by `dyadic:k`.
pub const MAX_DYADIC: u32 = 40;

/// Parses `"1,10,100"` or `"dyadic:k"` (meaning `1, 2, 4, …, 2^k`) into a
/// strictly increasing list of positive integers.
pub fn parse_schedule(s: &str) -> Result<Vec<u64>, CliError> {
    let s = s.trim();
    let out: Vec<u64> = if let Some(k) = s.strip_prefix("dyadic:") {
        let k: u32 = k.trim().parse().map_err(|_| CliError::Usage(format!("bad dyadic exponent in {s:?}")))?;
        if k > MAX_DYADIC {
            return Err(CliError::Usage(format!("dyadic exponent {k} exceeds {MAX_DYADIC}")));
        }
        (0..=k).map(|i| 1u64 << i).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad schedule entry {t:?}"))))
            .collect::<Result<_, _>>()?
    };
    if out.is_empty() || out[0] == 0 || out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!("schedule {s:?} must be an increasing list of positive integers")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_dyadic() {
        assert_eq!(parse_schedule("1,10,100").unwrap(), vec![1, 10, 100]);
        assert_eq!(parse_schedule(" 2, 3 ").unwrap(), vec![2, 3]);
        assert_eq!(parse_schedule("dyadic:3").unwrap(), vec![1, 2, 4, 8]);
        assert_eq!(parse_schedule("dyadic:0").unwrap(), vec![1]);
    }

    #[test]
    fn rejects_bad_schedules() {
        for bad in ["", "0,1", "3,2", "1,1", "a", "dyadic:", "dyadic:41", "dyadic:-1", "1,,2"] {
            assert!(matches!(parse_schedule(bad), Err(CliError::Usage(_))), "{bad:?}");
        }
    }
}
