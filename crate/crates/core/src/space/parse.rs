//! Text form of [`SpaceSpec`]:
//!
//! ```text
//! lp:dim=<n>,p=<real|inf>
//! lplq:p=<real>,q=<real>
//! poly:(x1,y1);(x2,y2);...
//! gridsup:n=<n>
//! euclidean:dim=<n>
//! ```
//!
//! Family and parameter names are case-insensitive. `Display` writes the
//! same grammar, using the shortest round-trip float representation.

use std::str::FromStr;

use super::{Exponent, Polygon, SpaceSpec, SpecError};

impl FromStr for SpaceSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        parse_space_spec(s)
    }
}

pub fn parse_space_spec(s: &str) -> Result<SpaceSpec, SpecError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(SpecError::Empty);
    }
    let (family, rest) = match s.split_once(':') {
        Some((f, r)) => (f.trim().to_ascii_lowercase(), r.trim()),
        None => (s.to_ascii_lowercase(), ""),
    };
    let spec = match family.as_str() {
        "lp" => {
            let params = Params::parse(rest, &["dim", "p"])?;
            let dim = params.dim("lp", "dim")?;
            let p_tok = params.get("lp", "p")?;
            let p = if matches!(p_tok.to_ascii_lowercase().as_str(), "inf" | "infinity") {
                Exponent::Infinity
            } else {
                let p = parse_real(p_tok)?;
                if p.is_infinite() && p > 0.0 {
                    Exponent::Infinity
                } else {
                    Exponent::Finite(p)
                }
            };
            SpaceSpec::Lp { dim, p }
        }
        "lplq" => {
            let params = Params::parse(rest, &["p", "q"])?;
            let p = parse_real(params.get("lplq", "p")?)?;
            let q = parse_real(params.get("lplq", "q")?)?;
            SpaceSpec::LpLq { p, q }
        }
        "poly" => SpaceSpec::Polyhedral(Polygon::new(parse_vertices(rest)?)?),
        "gridsup" => {
            let params = Params::parse(rest, &["n"])?;
            SpaceSpec::GridSup {
                n: params.dim("gridsup", "n")?,
            }
        }
        "euclidean" => {
            let params = Params::parse(rest, &["dim"])?;
            SpaceSpec::Euclidean {
                dim: params.dim("euclidean", "dim")?,
            }
        }
        _ => return Err(SpecError::UnknownFamily(family)),
    };
    spec.validate()?;
    Ok(spec)
}

struct Params<'a> {
    pairs: Vec<(String, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(rest: &'a str, allowed: &[&str]) -> Result<Self, SpecError> {
        let mut pairs = Vec::new();
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| SpecError::Malformed(tok.to_string()))?;
            let key = k.trim().to_ascii_lowercase();
            if !allowed.contains(&key.as_str()) {
                return Err(SpecError::UnknownParameter(tok.to_string()));
            }
            if pairs.iter().any(|(seen, _)| *seen == key) {
                return Err(SpecError::Malformed(tok.to_string()));
            }
            pairs.push((key, v.trim()));
        }
        Ok(Self { pairs })
    }

    fn get(&self, family: &'static str, name: &'static str) -> Result<&'a str, SpecError> {
        self.pairs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
            .ok_or(SpecError::MissingParameter { family, name })
    }

    fn dim(&self, family: &'static str, name: &'static str) -> Result<usize, SpecError> {
        let tok = self.get(family, name)?;
        let n: usize = tok
            .parse()
            .map_err(|_| SpecError::InvalidNumber(tok.to_string()))?;
        if n < 2 {
            return Err(SpecError::DimensionTooSmall(tok.to_string()));
        }
        Ok(n)
    }
}

fn parse_real(tok: &str) -> Result<f64, SpecError> {
    let x: f64 = tok
        .trim()
        .parse()
        .map_err(|_| SpecError::InvalidNumber(tok.to_string()))?;
    if x.is_nan() {
        return Err(SpecError::InvalidNumber(tok.to_string()));
    }
    Ok(x)
}

fn parse_vertices(rest: &str) -> Result<Vec<[f64; 2]>, SpecError> {
    rest.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| {
            let inner = tok
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| SpecError::Malformed(tok.to_string()))?;
            let (x, y) = inner
                .split_once(',')
                .ok_or_else(|| SpecError::Malformed(tok.to_string()))?;
            let (x, y) = (parse_real(x)?, parse_real(y)?);
            if !x.is_finite() || !y.is_finite() {
                return Err(SpecError::InvalidNumber(tok.to_string()));
            }
            Ok([x, y])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::default_catalog;

    #[test]
    fn parses_each_family() {
        assert_eq!(
            parse_space_spec("lp:dim=2,p=1").unwrap(),
            SpaceSpec::Lp { dim: 2, p: Exponent::Finite(1.0) }
        );
        assert_eq!(
            parse_space_spec("LP:DIM=3, P=Inf").unwrap(),
            SpaceSpec::Lp { dim: 3, p: Exponent::Infinity }
        );
        assert_eq!(
            parse_space_spec("lplq:p=3,q=1.5").unwrap(),
            SpaceSpec::LpLq { p: 3.0, q: 1.5 }
        );
        assert_eq!(parse_space_spec("gridsup:n=4").unwrap(), SpaceSpec::GridSup { n: 4 });
        assert_eq!(
            parse_space_spec("Euclidean:dim=2").unwrap(),
            SpaceSpec::Euclidean { dim: 2 }
        );
        let sq = parse_space_spec("poly:(1,0);(0,1);(-1,0);(0,-1)").unwrap();
        assert_eq!(sq.dim(), 2);
    }

    #[test]
    fn distinct_errors() {
        let err = parse_space_spec("lplq:p=1,q=2").unwrap_err();
        assert!(err.to_string().contains("q exceeds p"), "{err}");
        assert!(matches!(
            parse_space_spec("banana:dim=2"),
            Err(SpecError::UnknownFamily(f)) if f == "banana"
        ));
        assert!(matches!(
            parse_space_spec("lp:dim=2"),
            Err(SpecError::MissingParameter { name: "p", .. })
        ));
        assert!(matches!(
            parse_space_spec("lp:dim=2,p=0.5"),
            Err(SpecError::ExponentBelowOne(t)) if t.contains("0.5")
        ));
        assert!(matches!(
            parse_space_spec("poly:(1,0);(0,1);(-1,0);(0,-2)"),
            Err(SpecError::Asymmetric(v)) if v == "(0,1)"
        ));
        assert!(matches!(
            parse_space_spec("lp:dim=1,p=2"),
            Err(SpecError::DimensionTooSmall(_))
        ));
        assert!(matches!(
            parse_space_spec("lp:dim=2,p=2,r=3"),
            Err(SpecError::UnknownParameter(_))
        ));
        assert!(matches!(parse_space_spec("lp:dim=2,p=x"), Err(SpecError::InvalidNumber(_))));
        assert!(matches!(parse_space_spec("  "), Err(SpecError::Empty)));
    }

    #[test]
    fn catalog_round_trips() {
        for s in default_catalog() {
            let text = s.to_string();
            let back: SpaceSpec = text.parse().unwrap();
            assert_eq!(back, s, "{text}");
            assert_eq!(back.to_string(), text);
        }
    }
}
