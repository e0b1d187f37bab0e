//! Text formats of the vector, matrix and noise flags.

use unlearn::tof_core::NoiseModel;

/// A comma-separated list of finite numbers.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, String> {
    let values = text
        .split(',')
        .map(|field| {
            let field = field.trim();
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("expected a finite number, got {field:?}")),
            }
        })
        .collect::<Result<Vec<f64>, String>>()?;
    Ok(values)
}

/// Rows separated by ';', entries by ','. All rows must share a length.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let rows = text
        .split(';')
        .map(parse_vector)
        .collect::<Result<Vec<_>, String>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("matrix rows differ in length".to_string());
    }
    Ok(rows)
}

/// `gaussian:σ`, `laplace:b`, or `uniform:a`.
pub fn parse_noise(text: &str) -> Result<NoiseModel, String> {
    let (kind, value) = text
        .split_once(':')
        .ok_or_else(|| format!("expected KIND:VALUE, got {text:?}"))?;
    let value = match parse_vector(value)?.as_slice() {
        [v] => *v,
        _ => return Err(format!("noise takes one parameter, got {value:?}")),
    };
    let noise = match kind.trim() {
        "gaussian" => NoiseModel::Gaussian { sigma: value },
        "laplace" => NoiseModel::Laplace { scale: value },
        "uniform" => NoiseModel::Uniform { half_width: value },
        other => {
            return Err(format!(
                "unknown noise {other:?}; use gaussian, laplace or uniform"
            ))
        }
    };
    noise.validate().map_err(|e| e.to_string())?;
    Ok(noise)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_and_matrices() {
        assert_eq!(parse_vector("3, 0,-1.5").unwrap(), vec![3.0, 0.0, -1.5]);
        assert_eq!(
            parse_matrix("1,0;0,2").unwrap(),
            vec![vec![1.0, 0.0], vec![0.0, 2.0]]
        );
        assert!(parse_vector("1,,2").is_err());
        assert!(parse_vector("inf").is_err());
        assert!(parse_matrix("1,0;2").is_err());
    }

    #[test]
    fn noise_models() {
        assert_eq!(
            parse_noise("laplace:0.5").unwrap(),
            NoiseModel::Laplace { scale: 0.5 }
        );
        assert_eq!(
            parse_noise("uniform:2").unwrap(),
            NoiseModel::Uniform { half_width: 2.0 }
        );
        assert!(parse_noise("laplace").is_err());
        assert!(parse_noise("cauchy:1").is_err());
        assert!(parse_noise("gaussian:-1").is_err());
    }
}
