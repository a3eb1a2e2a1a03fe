use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed};

use super::{EdgeRejection, Graph, GraphBuilder};
use crate::error::ParseError;

/// Parses the whitespace-separated edge-list format.
///
/// Each non-blank line is `<u> <v>` or `<u> <v> <w>`; `#` starts a comment.
/// Weights are decimals (`1.5`) or fractions (`3/2`) and are read exactly.
/// If any line carries a weight, lines without one get weight 1.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut builder = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        let (u, v, w) = match fields.as_slice() {
            [] => continue,
            [u, v] => (*u, *v, None),
            [u, v, w] => {
                let weight = parse_weight(w).ok_or_else(|| ParseError::Weight {
                    line,
                    text: (*w).to_owned(),
                })?;
                (*u, *v, Some(weight))
            }
            other => {
                return Err(ParseError::Malformed {
                    line,
                    reason: format!("expected 2 or 3 fields, found {}", other.len()),
                })
            }
        };
        builder.add_edge(u, v, w).map_err(|r| match r {
            EdgeRejection::SelfLoop => ParseError::SelfLoop {
                line,
                label: u.to_owned(),
            },
            EdgeRejection::Duplicate => ParseError::DuplicateEdge {
                line,
                u: u.to_owned(),
                v: v.to_owned(),
            },
            EdgeRejection::NonPositiveWeight => ParseError::Weight {
                line,
                text: fields[2].to_owned(),
            },
        })?;
    }
    Ok(builder.build())
}

/// Reads `p/q`, `12`, or `1.25` as an exact positive rational.
///
/// Decimal literals are converted digit-for-digit (`1.5` is `3/2`), never through `f64`.
pub fn parse_weight(text: &str) -> Option<BigRational> {
    let is_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let value = if let Some((p, q)) = text.split_once('/') {
        if !is_digits(p) || !is_digits(q) {
            return None;
        }
        let q = BigInt::from_str_radix(q, 10).ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        BigRational::new(BigInt::from_str_radix(p, 10).ok()?, q)
    } else {
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        let int_ok = int.is_empty() || is_digits(int);
        let frac_ok = frac.is_empty() || is_digits(frac);
        if !int_ok || !frac_ok || (int.is_empty() && frac.is_empty()) {
            return None;
        }
        let digits = format!("{int}{frac}");
        let numer = BigInt::from_str_radix(&digits, 10).ok()?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        BigRational::new(numer, denom)
    };
    value.is_positive().then_some(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn path_p3() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_weighted());
    }

    #[test]
    fn grid_labels_in_first_appearance_order() {
        let g = parse_edge_list("a0 a1\na1 a2\nb0 b1\nb1 b2\na0 b0\na1 b1\na2 b2").unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 7);
        assert_eq!(g.labels(), ["a0", "a1", "a2", "b0", "b1", "b2"]);
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(
            parse_edge_list("0 0").unwrap_err(),
            ParseError::SelfLoop {
                line: 1,
                label: "0".into()
            }
        );
    }

    #[test]
    fn duplicate_rejected_with_line() {
        let err = parse_edge_list("a b\n# comment\nb a\n").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateEdge { line: 3, .. }));
    }

    #[test]
    fn bad_weights() {
        for bad in ["0", "-1", "abc", "1/0", "0/3", "1e3", ".", "1.2.3", "+2"] {
            let err = parse_edge_list(&format!("a b {bad}")).unwrap_err();
            assert!(matches!(err, ParseError::Weight { line: 1, .. }), "{bad}");
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_edge_list("a b\nlonely").unwrap_err(),
            ParseError::Malformed { line: 2, .. }
        ));
        assert!(matches!(
            parse_edge_list("a b 1 2").unwrap_err(),
            ParseError::Malformed { line: 1, .. }
        ));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# header\n\n a b  # trailing\n\t\nb c 2").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.is_weighted());
        assert_eq!(g.weight(0), q(1, 1));
        assert_eq!(g.weight(1), q(2, 1));
    }

    #[test]
    fn weights_are_exact() {
        assert_eq!(parse_weight("1.5"), Some(q(3, 2)));
        assert_eq!(parse_weight("0.1"), Some(q(1, 10)));
        assert_eq!(parse_weight(".25"), Some(q(1, 4)));
        assert_eq!(parse_weight("3."), Some(q(3, 1)));
        assert_eq!(parse_weight("6/4"), Some(q(3, 2)));
        assert_eq!(parse_weight("2"), Some(q(2, 1)));
    }
}
