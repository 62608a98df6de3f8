use std::collections::HashMap;

use super::{valid_label, EndpointRef, Multistring, Role};
use crate::error::DiagramError;

/// Parses the line-oriented diagram format:
///
/// ```text
/// # comment
/// circle: a+ b-
/// circle: a- b+
/// ```
///
/// `LABEL+` marks a tail and `LABEL-` a head. Every label must occur exactly
/// once with each mark. Blank and comment-only lines are ignored.
pub fn parse_multistring(text: &str) -> Result<Multistring, DiagramError> {
    let mut words = Vec::new();
    let mut seen: HashMap<String, (Vec<Role>, usize, usize)> = HashMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = line.len() - trimmed.len();
        let Some(rest) = trimmed.strip_prefix("circle:") else {
            return Err(parse_err(ln, col(line, lead), "expected `circle:`"));
        };
        let offset = lead + "circle:".len();
        let mut word = Vec::new();
        for (start, tok) in tokens(rest) {
            let at = col(line, offset + start);
            let (label, role) = if let Some(l) = tok.strip_suffix('+') {
                (l, Role::Tail)
            } else if let Some(l) = tok.strip_suffix('-').or_else(|| tok.strip_suffix('\u{2212}')) {
                (l, Role::Head)
            } else {
                return Err(parse_err(ln, at, format!("token `{tok}` must end in `+` or `-`")));
            };
            if !valid_label(label) {
                return Err(parse_err(ln, at, format!("malformed label in `{tok}`")));
            }
            let entry = seen.entry(label.to_string()).or_insert((Vec::new(), ln, at));
            entry.0.push(role);
            match entry.0.as_slice() {
                [a, b] if a == b => {
                    return Err(parse_err(
                        ln,
                        at,
                        format!("label `{label}` carries `{}` twice", role.mark()),
                    ))
                }
                roles if roles.len() > 2 => {
                    return Err(parse_err(ln, at, format!("label `{label}` appears more than twice")))
                }
                _ => {}
            }
            word.push(EndpointRef::new(label, role));
        }
        words.push(word);
    }
    if words.is_empty() {
        return Err(DiagramError::Parse { line: 1, column: 1, message: "no circles".into() });
    }
    let mut lonely: Vec<_> = seen.iter().filter(|(_, (r, _, _))| r.len() != 2).collect();
    lonely.sort_by_key(|(_, (_, l, c))| (*l, *c));
    if let Some((label, (_, l, c))) = lonely.first() {
        return Err(parse_err(*l, *c, format!("label `{label}` appears once; expected twice")));
    }
    Multistring::from_words(words)
}

fn tokens(s: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(b) = start.take() {
                out.push((b, &s[b..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((b, &s[b..]));
    }
    out.into_iter()
}

fn col(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> DiagramError {
    DiagramError::Parse { line: line + 1, column, message: message.into() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{fixture_sigma, gen_beta};

    #[test]
    fn smallest_diagram() {
        let m = parse_multistring("circle: a+ a-\n").unwrap();
        assert_eq!(m.circle_count(), 1);
        assert_eq!(m.arrow_count(), 1);
        assert_eq!(m.self_arrows(0), ["a"]);
    }

    #[test]
    fn two_intersection_arrows() {
        let m = parse_multistring("circle: a+ b+\ncircle: a- b-\n").unwrap();
        assert_eq!(m.circle_count(), 2);
        assert!(m.self_arrows(0).is_empty() && m.self_arrows(1).is_empty());
        assert_eq!(m.intersection_arrows(), ["a", "b"]);
    }

    #[test]
    fn comments_blank_lines_and_empty_circles() {
        let m = parse_multistring("# header\n\ncircle:   # nothing here\ncircle: x+ x- # kink\n").unwrap();
        assert_eq!(m.circle_count(), 2);
        assert!(m.circle(0).unwrap().is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_multistring("circle: a+ a-\ncircle: b+ c\n").unwrap_err();
        assert_eq!(e, DiagramError::Parse { line: 2, column: 12, message: "token `c` must end in `+` or `-`".into() });
        let e = parse_multistring("circle: a+ a+").unwrap_err();
        assert!(matches!(e, DiagramError::Parse { line: 1, column: 12, .. }), "{e}");
        let e = parse_multistring("circle: a+ b- a-").unwrap_err();
        assert!(e.to_string().contains("`b` appears once"), "{e}");
        let e = parse_multistring("  round: a+ a-").unwrap_err();
        assert!(matches!(e, DiagramError::Parse { line: 1, column: 3, .. }));
        let e = parse_multistring("circle: a.b+ a.b-").unwrap_err();
        assert!(e.to_string().contains("malformed label"));
        assert!(parse_multistring("# only a comment\n").is_err());
    }

    #[test]
    fn text_round_trip_on_fixtures() {
        for m in [fixture_sigma(), gen_beta(2, 1, 1, 2, 2, 1)] {
            let again = parse_multistring(&m.to_text()).unwrap();
            assert_eq!(again, m);
            assert_eq!(again.to_text(), m.to_text());
        }
    }
}
