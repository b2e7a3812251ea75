//! Parsers for user-supplied instances and settings.
//!
//! All of these accept untrusted text and must fail with [`Error::Parse`]
//! or a validation error rather than panic.

use crate::distributions::{ProbVector, DEFAULT_EXACT_LIMIT};
use crate::error::{Error, Result};
use crate::k1::OptimizerConfig;

/// Run-wide settings: optimiser budget and the exact-TV size limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub optimizer: OptimizerConfig,
    pub exact_limit: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            optimizer: OptimizerConfig::default(),
            exact_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| parse_err(line, format!("`{token}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(line, format!("`{token}` is not finite")))
    }
}

/// Parses `"0.1, 0.2 0.3"`: numbers separated by commas and/or whitespace.
pub fn parse_prob_list(text: &str) -> Result<ProbVector> {
    let probs = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_f64(t, 1))
        .collect::<Result<Vec<_>>>()?;
    if probs.is_empty() {
        return Err(Error::EmptyInstance);
    }
    ProbVector::new(probs)
}

/// Parses a CSV file of probabilities.
///
/// Every field of every record is a probability; blank lines and lines
/// starting with `#` are skipped, and a first record that holds no numbers
/// is taken as a header.
pub fn parse_prob_csv(text: &str) -> Result<ProbVector> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut probs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(i + 1, e.to_string()))?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        let fields: Vec<&str> = record.iter().filter(|f| !f.is_empty()).collect();
        if i == 0 && !fields.is_empty() && fields.iter().all(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        for f in fields {
            probs.push(parse_f64(f, line)?);
        }
    }
    if probs.is_empty() {
        return Err(Error::EmptyInstance);
    }
    ProbVector::new(probs)
}

fn parse_usize(value: &str, line: usize) -> Result<usize> {
    value
        .parse()
        .map_err(|_| parse_err(line, format!("`{value}` is not a nonnegative integer")))
}

fn parse_positive(value: &str, line: usize) -> Result<f64> {
    let v = parse_f64(value, line)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(parse_err(line, format!("`{value}` must be > 0")))
    }
}

/// Applies one `key = value` setting.
pub fn apply_setting(settings: &mut Settings, key: &str, value: &str, line: usize) -> Result<()> {
    let opt = &mut settings.optimizer;
    match key {
        "grid" => {
            let g = parse_usize(value, line)?;
            opt.grid_alpha = g;
            opt.grid_theta = g;
        }
        "grid_alpha" => opt.grid_alpha = parse_usize(value, line)?,
        "grid_theta" => opt.grid_theta = parse_usize(value, line)?,
        "refine_starts" => opt.refine_starts = parse_usize(value, line)?,
        "max_iter" => opt.max_iter = parse_usize(value, line)?,
        "restarts" => opt.restarts = parse_usize(value, line)?,
        "alpha_sigma" => opt.alpha_sigma = parse_positive(value, line)?,
        "alpha_offset" => opt.alpha_offset = parse_positive(value, line)?,
        "theta_min" => opt.theta_min = parse_positive(value, line)?,
        "theta_scale" => opt.theta_scale = parse_positive(value, line)?,
        "theta_offset" => opt.theta_offset = parse_positive(value, line)?,
        "exact_limit" => settings.exact_limit = parse_usize(value, line)?,
        other => return Err(parse_err(line, format!("unknown key `{other}`"))),
    }
    Ok(())
}

/// Parses a `key = value` config file on top of `base`.
///
/// `#` starts a comment; blank lines are ignored.
pub fn parse_config(text: &str, base: Settings) -> Result<Settings> {
    let mut settings = base;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
        apply_setting(&mut settings, key.trim(), value.trim(), line)?;
    }
    if settings.optimizer.theta_min
        >= settings.optimizer.theta_scale + settings.optimizer.theta_offset
    {
        return Err(parse_err(0, "theta_min must be below the theta box upper end"));
    }
    Ok(settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prob_list_forms() {
        let p = parse_prob_list("0.1, 0.2 0.3\t0.4").unwrap();
        assert_eq!(p.probs(), &[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(parse_prob_list("0.1").unwrap().len(), 1);
        assert_eq!(parse_prob_list(""), Err(Error::EmptyInstance));
        assert_eq!(parse_prob_list(" , "), Err(Error::EmptyInstance));
        assert!(matches!(parse_prob_list("0.1,x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_prob_list("1.2"), Err(Error::InvalidProbability { .. })));
        assert!(matches!(parse_prob_list("nan"), Err(Error::Parse { .. })));
    }

    #[test]
    fn csv_with_header_and_comments() {
        let text = "p\n# comment\n0.1\n0.2,0.3\n\n0.4\n";
        let p = parse_prob_csv(text).unwrap();
        assert_eq!(p.probs(), &[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(parse_prob_csv("p\n"), Err(Error::EmptyInstance));
        match parse_prob_csv("0.1\n0.2\nabc\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_overrides() {
        let text = "# budget\ngrid = 6\nmax_iter=300 # inline\nexact_limit = 100\ntheta_scale = 4.5\n";
        let s = parse_config(text, Settings::default()).unwrap();
        assert_eq!(s.optimizer.grid_alpha, 6);
        assert_eq!(s.optimizer.grid_theta, 6);
        assert_eq!(s.optimizer.max_iter, 300);
        assert_eq!(s.optimizer.theta_scale, 4.5);
        assert_eq!(s.exact_limit, 100);
        assert_eq!(s.optimizer.refine_starts, OptimizerConfig::default().refine_starts);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(
            parse_config("nope = 1", Settings::default()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_config("grid", Settings::default()).is_err());
        assert!(parse_config("\n\ngrid = -1", Settings::default()).is_err());
        assert!(parse_config("theta_min = 0", Settings::default()).is_err());
        assert!(parse_config("theta_min = 1e9", Settings::default()).is_err());
    }

    proptest! {
        #[test]
        fn parsers_never_panic(s in "\\PC{0,64}") {
            let _ = parse_prob_list(&s);
            let _ = parse_prob_csv(&s);
            let _ = parse_config(&s, Settings::default());
        }

        #[test]
        fn prob_list_roundtrip(v in proptest::collection::vec(0.0f64..=1.0, 1..30)) {
            let text = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let p = parse_prob_list(&text).unwrap();
            prop_assert_eq!(p.probs(), &v[..]);
        }
    }
}
