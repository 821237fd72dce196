//! Command-line front end: data ingestion, λ estimation reports and
//! simulation runs.

pub mod estimate;
pub mod ingest;
pub mod simulate;

use boxcox_core::estimate::Method;

/// Parses a comma-free method token; "all" expands to every method.
pub fn parse_methods(tokens: &[String]) -> Result<Vec<Method>, String> {
    let mut out = Vec::new();
    for t in tokens {
        if t.eq_ignore_ascii_case("all") {
            out.extend(Method::ALL);
        } else {
            out.push(t.parse::<Method>()?);
        }
    }
    let mut seen = Vec::new();
    out.retain(|m| {
        let fresh = !seen.contains(m);
        seen.push(*m);
        fresh
    });
    if out.is_empty() {
        return Err("no methods selected".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_lists() {
        let all = parse_methods(&["all".into()]).unwrap();
        assert_eq!(all, Method::ALL.to_vec());
        let two = parse_methods(&["sw".into(), "AC".into(), "sw".into()]).unwrap();
        assert_eq!(two, vec![Method::ALL[0], Method::ArtificialCovariate]);
        assert!(parse_methods(&["nope".into()]).is_err());
        assert!(parse_methods(&[]).is_err());
    }
}
