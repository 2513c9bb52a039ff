use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const SYMBOLS: &[&str] = &[":=", "=>", "->", "(", ")", ":", ",", "|", "{", "}"];

pub const KEYWORDS: &[&str] = &[
    "def",
    "axiom",
    "inductive",
    "fixpoint",
    "module",
    "fun",
    "forall",
    "let",
    "fix",
    "in",
    "match",
    "return",
    "with",
    "end",
    "struct",
    "Prop",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s) || sort_level(s).is_some()
}

/// `Type`, `Type0`, `Type1`, ... denote universes.
pub fn sort_level(s: &str) -> Option<u32> {
    let rest = s.strip_prefix("Type")?;
    if rest.is_empty() {
        Some(0)
    } else if rest.chars().all(|c| c.is_ascii_digit()) {
        rest.parse().ok()
    } else {
        None
    }
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tl, tc) = (line, col);
        if ident_start(c) {
            let start = i;
            loop {
                while i < chars.len() && ident_char(chars[i]) {
                    i += 1;
                }
                // dotted path segment
                if i + 1 < chars.len() && chars[i] == '.' && ident_start(chars[i + 1]) {
                    i += 1;
                    continue;
                }
                break;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let n = s.parse().map_err(|_| ParseError::SyntaxError {
                line: tl,
                col: tc,
                message: format!("number too large: {s}"),
            })?;
            out.push(Token {
                tok: Tok::Num(n),
                line: tl,
                col: tc,
            });
            continue;
        }
        let mut matched = None;
        for sym in SYMBOLS {
            let n = sym.chars().count();
            if i + n <= chars.len() && chars[i..i + n].iter().copied().eq(sym.chars()) {
                matched = Some(*sym);
                break;
            }
        }
        match matched {
            Some(sym) => {
                let n = sym.chars().count();
                i += n;
                col += n;
                out.push(Token {
                    tok: Tok::Sym(sym),
                    line: tl,
                    col: tc,
                });
            }
            None => {
                return Err(ParseError::SyntaxError {
                    line,
                    col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}
