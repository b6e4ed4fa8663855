//! Surface expressions and the line-oriented cut/paste script.
//!
//! ```text
//! start torus + g2b1
//! cut 0 nonsep
//! cut 1 sep 1 0,1
//! paste 0~2 1~3
//! ```
//!
//! `sep <g> <circles>` gives the first piece genus `g` and the listed
//! local boundary circles (comma-separated, `-` for none). Blank lines and
//! text after `#` are ignored.

use skk_core::surfaces::{Component, CurveKind, CutSpec, Move, PasteSpec, Surface};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

/// `sphere`, `torus`, `disk`, `cylinder`, `pants`, `g<N>` or `g<N>b<M>`,
/// joined by `+`. `empty` is the empty surface.
pub fn parse_surface(text: &str) -> Result<Surface, String> {
    let text = text.trim();
    if text == "empty" {
        return Ok(Surface::empty());
    }
    let mut components = Vec::new();
    for term in text.split('+') {
        let term = term.trim();
        let c = match term {
            "sphere" => Component::SPHERE,
            "torus" => Component::TORUS,
            "disk" => Component::DISK,
            "cylinder" => Component::CYLINDER,
            "pants" => Component::PANTS,
            _ => parse_gb(term).ok_or_else(|| format!("unknown surface term {term:?}"))?,
        };
        components.push(c);
    }
    Ok(Surface::new(components))
}

fn parse_gb(term: &str) -> Option<Component> {
    let rest = term.strip_prefix('g')?;
    let (g, b) = match rest.split_once('b') {
        Some((g, b)) => (g, b.parse().ok()?),
        None => (rest, 0),
    };
    Some(Component::new(g.parse().ok()?, b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub start: Surface,
    pub moves: Vec<(usize, Move)>,
}

fn err(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(
    line: usize,
    token: Option<&str>,
    what: &str,
) -> Result<T, ScriptError> {
    let t = token.ok_or_else(|| err(line, format!("missing {what}")))?;
    t.parse()
        .map_err(|_| err(line, format!("bad {what} {t:?}")))
}

pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let mut start = None;
    let mut moves = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let keyword = tokens.next().expect("nonempty");
        match keyword {
            "start" => {
                if start.is_some() {
                    return Err(err(line, "second start line"));
                }
                let expr = body["start".len()..].trim();
                start = Some(parse_surface(expr).map_err(|m| err(line, m))?);
                continue;
            }
            _ if start.is_none() => return Err(err(line, "script must begin with a start line")),
            "cut" => {
                let component = number(line, tokens.next(), "component")?;
                let kind = match tokens.next() {
                    Some("nonsep") => CurveKind::NonSeparating,
                    Some("sep") => {
                        let genus = number(line, tokens.next(), "genus")?;
                        let list = tokens
                            .next()
                            .ok_or_else(|| err(line, "missing circle list"))?;
                        let circles = if list == "-" {
                            Vec::new()
                        } else {
                            list.split(',')
                                .map(|c| number(line, Some(c), "circle"))
                                .collect::<Result<_, _>>()?
                        };
                        CurveKind::Separating { genus, circles }
                    }
                    other => {
                        return Err(err(
                            line,
                            format!("expected nonsep or sep, found {other:?}"),
                        ))
                    }
                };
                moves.push((line, Move::Cut(CutSpec { component, kind })));
            }
            "paste" => {
                let mut pairs = Vec::new();
                for t in tokens.by_ref() {
                    let (a, b) = t
                        .split_once('~')
                        .ok_or_else(|| err(line, format!("expected a~b, found {t:?}")))?;
                    pairs.push((
                        number(line, Some(a), "circle id")?,
                        number(line, Some(b), "circle id")?,
                    ));
                }
                if pairs.is_empty() {
                    return Err(err(line, "paste needs at least one pair"));
                }
                moves.push((line, Move::Paste(PasteSpec { pairs })));
            }
            other => return Err(err(line, format!("unknown command {other:?}"))),
        }
        if let Some(extra) = tokens.next() {
            return Err(err(line, format!("unexpected {extra:?}")));
        }
    }
    let start = start.ok_or_else(|| err(0, "empty script"))?;
    Ok(Script { start, moves })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surfaces() {
        assert_eq!(parse_surface("torus + g2b1").unwrap().chi(), -3);
        assert_eq!(parse_surface("sphere+sphere").unwrap().chi(), 4);
        assert_eq!(parse_surface("g3").unwrap(), Surface::closed_genus(3));
        assert_eq!(parse_surface("empty").unwrap(), Surface::empty());
        assert!(parse_surface("klein").is_err());
        assert!(parse_surface("g2b").is_err());
    }

    #[test]
    fn script() {
        let s = parse_script("# demo\nstart g2\ncut 0 nonsep\ncut 0 sep 1 0\npaste 0~2 # glue\n")
            .unwrap();
        assert_eq!(s.start, Surface::closed_genus(2));
        assert_eq!(s.moves.len(), 3);
        assert_eq!(s.moves[0].0, 3);
        assert_eq!(
            s.moves[1].1,
            Move::Cut(CutSpec {
                component: 0,
                kind: CurveKind::Separating {
                    genus: 1,
                    circles: vec![0]
                }
            })
        );
    }

    #[test]
    fn script_errors_carry_lines() {
        assert_eq!(parse_script("cut 0 nonsep").unwrap_err().line, 1);
        assert_eq!(
            parse_script("start torus\n\npaste 0-1").unwrap_err().line,
            3
        );
        assert_eq!(
            parse_script("start torus\ncut x nonsep").unwrap_err().line,
            2
        );
        assert_eq!(
            parse_script("start torus\ncut 0 nonsep extra")
                .unwrap_err()
                .line,
            2
        );
        assert_eq!(parse_script("").unwrap_err().line, 0);
    }
}
