use fpscp::permgen::{PermGenConfig, PermKind};

/// Parses `knn[:k=K][:count=N][:seed=S]` or `uniform[:count=N][:seed=S]`.
/// Missing fields default to `k=2`, `count=1000`, `seed=0`.
pub fn parse(text: &str) -> Result<PermGenConfig, String> {
    let mut parts = text.split(':');
    let kind = parts.next().unwrap_or_default();
    let (mut k, mut count, mut seed) = (2usize, 1000usize, 0u64);
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("`{part}` is not key=value"))?;
        let bad = |_| format!("bad value for {key}: `{value}`");
        match key {
            "k" => k = value.parse().map_err(bad)?,
            "count" => count = value.parse().map_err(bad)?,
            "seed" => seed = value.parse().map_err(bad)?,
            _ => return Err(format!("unknown permutation option `{key}`")),
        }
    }
    let kind = match kind {
        "knn" => {
            if k == 0 {
                return Err("k must be at least 1".into());
            }
            PermKind::StochasticKnn { k }
        }
        "uniform" => PermKind::UniformRandom,
        other => {
            return Err(format!(
                "unknown permutation kind `{other}` (expected knn or uniform)"
            ))
        }
    };
    Ok(PermGenConfig { kind, seed, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(
            parse("knn:k=3:count=10").unwrap(),
            PermGenConfig {
                kind: PermKind::StochasticKnn { k: 3 },
                seed: 0,
                count: 10
            }
        );
        let u = parse("uniform:seed=7").unwrap();
        assert_eq!((u.kind, u.seed, u.count), (PermKind::UniformRandom, 7, 1000));
        assert!(parse("knn:k=0").is_err());
        assert!(parse("knn:k").is_err());
        assert!(parse("spiral").is_err());
        assert!(parse("uniform:depth=2").is_err());
    }
}
