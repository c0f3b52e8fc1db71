//! Strict plain-text configuration: `key=value` lines, optional `[section]`
//! headers (organizational only), `#` comments. Unknown and duplicate keys
//! are errors; every diagnostic carries its line number.

use num_complex::Complex64;
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Flow,
    Evolve,
    Map,
    Verify,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Flow => "flow",
            Subcommand::Evolve => "evolve",
            Subcommand::Map => "map",
            Subcommand::Verify => "verify",
        }
    }
}

/// Problem domain: the disk, a polynomial inverse map `w + c2 w^2 + ...`,
/// or a star-like domain with cosine-series radius.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Disk,
    Poly(Vec<Complex64>),
    StarCos(Vec<f64>),
}

/// Disk-side semiflow generator.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Dilation,
    Rotation,
    Parabolic,
    /// Berkson-Porta data: constant Herglotz factor and fixed point.
    Bp { f: Complex64, b: Complex64 },
    /// Polynomial generator given by its coefficients from degree 0.
    Custom(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Zero,
    Constant(Complex64),
    Series(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSpec {
    Monomial(i64),
    Coeffs(Vec<Complex64>),
    /// Built-in smooth test signal with coefficients `2^{-n}`, `n <= 12`.
    NamedDecay,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub domain: DomainSpec,
    pub generator: Option<GeneratorSpec>,
    pub weight: WeightSpec,
    pub data: Option<DataSpec>,
    pub times: Vec<f64>,
    pub n: usize,
    pub tol: f64,
    pub z0: Option<Complex64>,
    pub out: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config line {line}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        message: message.into(),
    }
}

fn err_global(message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: None,
        message: message.into(),
    }
}

fn parse_f64(s: &str, line: usize, field: &str) -> Result<f64, ConfigError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| err(line, format!("{field}: `{s}` is not a number")))
}

/// `RE` or `RE,IM`.
fn parse_complex(s: &str, line: usize, field: &str) -> Result<Complex64, ConfigError> {
    let mut parts = s.splitn(2, ',');
    let re = parse_f64(parts.next().unwrap_or(""), line, field)?;
    let im = match parts.next() {
        Some(p) => parse_f64(p, line, field)?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

/// `RE,IM;RE,IM;...`
fn parse_complex_list(s: &str, line: usize, field: &str) -> Result<Vec<Complex64>, ConfigError> {
    if s.trim().is_empty() {
        return Err(err(line, format!("{field}: empty list")));
    }
    s.split(';').map(|item| parse_complex(item, line, field)).collect()
}

fn parse_real_list(s: &str, line: usize, field: &str) -> Result<Vec<f64>, ConfigError> {
    if s.trim().is_empty() {
        return Err(err(line, format!("{field}: empty list")));
    }
    s.split(',').map(|item| parse_f64(item, line, field)).collect()
}

fn parse_subcommand(s: &str, line: usize) -> Result<Subcommand, ConfigError> {
    match s {
        "flow" => Ok(Subcommand::Flow),
        "evolve" => Ok(Subcommand::Evolve),
        "map" => Ok(Subcommand::Map),
        "verify" => Ok(Subcommand::Verify),
        other => Err(err(
            line,
            format!("subcommand: `{other}` is not one of flow, evolve, map, verify"),
        )),
    }
}

fn parse_domain(s: &str, line: usize) -> Result<DomainSpec, ConfigError> {
    if s == "disk" {
        return Ok(DomainSpec::Disk);
    }
    if let Some(rest) = s.strip_prefix("poly:") {
        return Ok(DomainSpec::Poly(parse_complex_list(rest, line, "domain")?));
    }
    if let Some(rest) = s.strip_prefix("star-cos:") {
        return Ok(DomainSpec::StarCos(parse_real_list(rest, line, "domain")?));
    }
    Err(err(
        line,
        format!("domain: `{s}` is not disk, poly:..., or star-cos:..."),
    ))
}

fn parse_generator(s: &str, line: usize) -> Result<GeneratorSpec, ConfigError> {
    match s {
        "dilation" => return Ok(GeneratorSpec::Dilation),
        "rotation" => return Ok(GeneratorSpec::Rotation),
        "parabolic" => return Ok(GeneratorSpec::Parabolic),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("bp:") {
        let mut halves = rest.splitn(2, ';');
        let f = parse_complex(halves.next().unwrap_or(""), line, "generator")?;
        let b = match halves.next() {
            Some(h) => parse_complex(h, line, "generator")?,
            None => return Err(err(line, "generator: bp form is bp:F_RE,F_IM;B_RE,B_IM")),
        };
        return Ok(GeneratorSpec::Bp { f, b });
    }
    if let Some(rest) = s.strip_prefix("custom:") {
        return Ok(GeneratorSpec::Custom(parse_complex_list(
            rest,
            line,
            "generator",
        )?));
    }
    Err(err(
        line,
        format!("generator: `{s}` is not dilation, rotation, parabolic, bp:..., or custom:..."),
    ))
}

fn parse_weight(s: &str, line: usize) -> Result<WeightSpec, ConfigError> {
    if s == "zero" {
        return Ok(WeightSpec::Zero);
    }
    if let Some(rest) = s.strip_prefix("constant:") {
        return Ok(WeightSpec::Constant(parse_complex(rest, line, "weight")?));
    }
    if let Some(rest) = s.strip_prefix("series:") {
        return Ok(WeightSpec::Series(parse_complex_list(rest, line, "weight")?));
    }
    Err(err(
        line,
        format!("weight: `{s}` is not zero, constant:..., or series:..."),
    ))
}

fn parse_data(s: &str, line: usize) -> Result<DataSpec, ConfigError> {
    if let Some(rest) = s.strip_prefix("monomial:") {
        let n = rest
            .trim()
            .parse::<i64>()
            .map_err(|_| err(line, format!("data: `{rest}` is not an integer mode")))?;
        return Ok(DataSpec::Monomial(n));
    }
    if let Some(rest) = s.strip_prefix("coeffs:") {
        return Ok(DataSpec::Coeffs(parse_complex_list(rest, line, "data")?));
    }
    if s == "named:decay" {
        return Ok(DataSpec::NamedDecay);
    }
    Err(err(
        line,
        format!("data: `{s}` is not monomial:N, coeffs:..., or named:decay"),
    ))
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut subcommand = None;
    let mut domain = DomainSpec::Disk;
    let mut generator = None;
    let mut weight = WeightSpec::Zero;
    let mut data = None;
    let mut times: Vec<f64> = Vec::new();
    let mut n: usize = 256;
    let mut tol: f64 = 1e-10;
    let mut z0 = None;
    let mut out = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            let valid = line.ends_with(']')
                && line.len() > 2
                && line[1..line.len() - 1]
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
            if !valid {
                return Err(err(line_no, format!("malformed section header `{line}`")));
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(line_no, format!("expected key=value, got `{line}`")));
        };
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            return Err(err(line_no, format!("duplicate key `{key}`")));
        }
        match key {
            "subcommand" => subcommand = Some(parse_subcommand(value, line_no)?),
            "domain" => domain = parse_domain(value, line_no)?,
            "generator" => generator = Some(parse_generator(value, line_no)?),
            "weight" => weight = parse_weight(value, line_no)?,
            "data" => data = Some(parse_data(value, line_no)?),
            "t" => times = parse_real_list(value, line_no, "t")?,
            "N" => {
                n = value
                    .parse::<usize>()
                    .map_err(|_| err(line_no, format!("N: `{value}` is not an integer")))?;
            }
            "tol" => tol = parse_f64(value, line_no, "tol")?,
            "z0" => z0 = Some(parse_complex(value, line_no, "z0")?),
            "out" => out = Some(value.to_string()),
            other => return Err(err(line_no, format!("unknown key `{other}`"))),
        }
    }

    let Some(subcommand) = subcommand else {
        return Err(err_global("missing required key `subcommand`"));
    };
    if !n.is_power_of_two() || n < 8 {
        return Err(err_global(format!("N: {n} must be a power of two, at least 8")));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(err_global(format!("tol: {tol} must be positive and finite")));
    }
    for &t in &times {
        if !t.is_finite() || t < 0.0 {
            return Err(err_global(format!("t: {t} must be nonnegative and finite")));
        }
    }
    match subcommand {
        Subcommand::Flow => {
            if generator.is_none() {
                return Err(err_global("flow requires `generator`"));
            }
            if z0.is_none() {
                return Err(err_global("flow requires `z0`"));
            }
            if times.is_empty() {
                return Err(err_global("flow requires a nonempty `t` list"));
            }
        }
        Subcommand::Evolve => {
            if generator.is_none() {
                return Err(err_global("evolve requires `generator`"));
            }
            if data.is_none() {
                return Err(err_global("evolve requires `data`"));
            }
            if times.is_empty() {
                return Err(err_global("evolve requires a nonempty `t` list"));
            }
        }
        Subcommand::Map | Subcommand::Verify => {}
    }

    Ok(RunConfig {
        subcommand,
        domain,
        generator,
        weight,
        data,
        times,
        n,
        tol,
        z0,
        out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_example_parses() {
        let cfg = parse_config(
            "subcommand=evolve\ngenerator=dilation\nweight=constant:1.0\ndata=monomial:3\nt=0.5\nN=256",
        )
        .unwrap();
        assert_eq!(cfg.subcommand, Subcommand::Evolve);
        assert_eq!(cfg.generator, Some(GeneratorSpec::Dilation));
        assert_eq!(cfg.weight, WeightSpec::Constant(Complex64::new(1.0, 0.0)));
        assert_eq!(cfg.data, Some(DataSpec::Monomial(3)));
        assert_eq!(cfg.times, vec![0.5]);
        assert_eq!(cfg.n, 256);
    }

    #[test]
    fn missing_subcommand_is_named() {
        let e = parse_config("generator=dilation\n").unwrap_err();
        assert!(e.message.contains("subcommand"), "{e}");
    }

    #[test]
    fn non_power_of_two_grid_rejected() {
        let e = parse_config("subcommand=verify\nN=100\n").unwrap_err();
        assert!(e.message.contains("power of two"), "{e}");
    }

    #[test]
    fn unknown_key_carries_line_number() {
        let e = parse_config("subcommand=verify\nweigth=zero\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.message.contains("weigth"), "{e}");
    }

    #[test]
    fn duplicate_key_rejected() {
        let e = parse_config("subcommand=verify\nN=256\nN=512\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.message.contains("duplicate"), "{e}");
    }

    #[test]
    fn sections_and_comments_are_cosmetic() {
        let cfg = parse_config(
            "# evolution battery\n[run]\nsubcommand=evolve\n\n[problem]\ngenerator=parabolic\ndata=named:decay\nt=0.1,0.5\n",
        )
        .unwrap();
        assert_eq!(cfg.times, vec![0.1, 0.5]);
        assert_eq!(cfg.data, Some(DataSpec::NamedDecay));
    }

    #[test]
    fn malformed_section_rejected() {
        let e = parse_config("[run\nsubcommand=verify\n").unwrap_err();
        assert_eq!(e.line, Some(1));
    }

    #[test]
    fn complex_and_list_values_parse() {
        let cfg = parse_config(
            "subcommand=flow\ngenerator=bp:1,0;0.5,-0.25\nz0=0.3,0.1\nt=0.5,1.0\ndomain=poly:0.3,0;0.02,0.01\n",
        )
        .unwrap();
        assert_eq!(
            cfg.generator,
            Some(GeneratorSpec::Bp {
                f: Complex64::new(1.0, 0.0),
                b: Complex64::new(0.5, -0.25),
            })
        );
        assert_eq!(cfg.z0, Some(Complex64::new(0.3, 0.1)));
        assert_eq!(
            cfg.domain,
            DomainSpec::Poly(vec![
                Complex64::new(0.3, 0.0),
                Complex64::new(0.02, 0.01)
            ])
        );
    }

    #[test]
    fn negative_time_rejected() {
        let e = parse_config("subcommand=evolve\ngenerator=dilation\ndata=monomial:1\nt=-0.5\n")
            .unwrap_err();
        assert!(e.message.contains("nonnegative"), "{e}");
    }

    #[test]
    fn star_domain_parses() {
        let cfg = parse_config("subcommand=map\ndomain=star-cos:1.0,0.2\n").unwrap();
        assert_eq!(cfg.domain, DomainSpec::StarCos(vec![1.0, 0.2]));
    }
}
