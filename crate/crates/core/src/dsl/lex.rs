use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u64),
    Char(char),
    Str(String),
    Punct(&'static str),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Char(c) => format!("'{c}'"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const PUNCT: [&str; 8] = ["->", "(", ")", ",", "[", "]", "=", ";"];

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.')
}

fn quoted(cs: &[char], i: &mut usize, close: char) -> Option<String> {
    let mut out = String::new();
    *i += 1;
    while *i < cs.len() {
        match cs[*i] {
            c if c == close => {
                *i += 1;
                return Some(out);
            }
            '\\' if *i + 1 < cs.len() => {
                out.push(cs[*i + 1]);
                *i += 2;
            }
            '\n' => return None,
            c => {
                out.push(c);
                *i += 1;
            }
        }
    }
    None
}

pub(crate) fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let cs: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < cs.len() {
            let c = cs[i];
            let (line, col) = (ln + 1, i + 1);
            let rest: String = cs[i..].iter().take(12).collect();
            let err = |what: &str| ParseError::new(line, col, vec![what.to_string()], format!("{rest:?}"));
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let tok = if let Some(p) = PUNCT.iter().find(|p| line_has(&cs, i, p)) {
                i += p.chars().count();
                Tok::Punct(p)
            } else if c == '\'' {
                let s = quoted(&cs, &mut i, '\'').ok_or_else(|| err("a closing `'`"))?;
                let mut it = s.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => Tok::Char(c),
                    _ => return Err(err("a single quoted symbol")),
                }
            } else if c == '"' {
                Tok::Str(quoted(&cs, &mut i, '"').ok_or_else(|| err("a closing `\"`"))?)
            } else if c.is_ascii_digit() {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = cs[start..i].iter().collect();
                Tok::Int(s.parse().map_err(|_| err("a number that fits in 64 bits"))?)
            } else if is_ident_char(c) {
                let start = i;
                while i < cs.len() && is_ident_char(cs[i]) {
                    i += 1;
                }
                Tok::Ident(cs[start..i].iter().collect())
            } else {
                return Err(err("a token"));
            };
            out.push(Spanned { tok, line, col });
        }
    }
    let line = src.lines().count().max(1);
    let col = src.lines().last().map_or(0, |l| l.chars().count()) + 1;
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

fn line_has(cs: &[char], i: usize, p: &str) -> bool {
    p.chars().enumerate().all(|(k, c)| cs.get(i + k) == Some(&c))
}
