//! Tokenizer for the supported Go subset, including automatic semicolon
//! insertion.

use super::FrontError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Float(String),
    Str(String),
    Char(String),
    Keyword(&'static str),
    Op(&'static str),
    /// An explicit or inserted `;`.
    Semi,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Float(s) => format!("number `{s}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Char(_) => "rune literal".to_string(),
            Tok::Keyword(k) => format!("keyword `{k}`"),
            Tok::Op(o) => format!("`{o}`"),
            Tok::Semi => "`;` or newline".to_string(),
            Tok::Eof => "end of file".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
}

const KEYWORDS: &[&str] = &[
    "break",
    "case",
    "chan",
    "const",
    "continue",
    "default",
    "defer",
    "else",
    "fallthrough",
    "for",
    "func",
    "go",
    "goto",
    "if",
    "import",
    "interface",
    "map",
    "package",
    "range",
    "return",
    "select",
    "struct",
    "switch",
    "type",
    "var",
];

// Longest operators first so that greedy matching works.
const OPS: &[&str] = &[
    "<<=", ">>=", "&^=", "...", "&&", "||", "<-", "++", "--", "==", "!=", "<=", ">=", ":=", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "&^", "+", "-", "*", "/", "%", "&", "|",
    "^", "<", ">", "=", "!", "(", ")", "[", "]", "{", "}", ",", ":", ".", "~",
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, FrontError> {
    let bytes = src.as_bytes();
    let mut out: Vec<Token> = Vec::new();
    let mut i = 0;
    let mut line = 1;

    fn needs_semi(last: Option<&Token>) -> bool {
        match last.map(|t| &t.tok) {
            Some(Tok::Ident(_) | Tok::Int(_) | Tok::Float(_) | Tok::Str(_) | Tok::Char(_)) => true,
            Some(Tok::Keyword(k)) => matches!(*k, "break" | "continue" | "fallthrough" | "return"),
            Some(Tok::Op(o)) => matches!(*o, "++" | "--" | ")" | "]" | "}"),
            _ => false,
        }
    }

    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            if needs_semi(out.last()) {
                out.push(Token {
                    tok: Tok::Semi,
                    line,
                });
            }
            line += 1;
            i += 1;
            continue;
        }
        if c == b';' {
            out.push(Token {
                tok: Tok::Semi,
                line,
            });
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if src[i..].starts_with("//") {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if src[i..].starts_with("/*") {
            let start_line = line;
            let mut had_newline = false;
            i += 2;
            loop {
                if i + 1 >= bytes.len() {
                    return Err(FrontError::Syntax {
                        line: start_line,
                        expected: "end of comment".into(),
                    });
                }
                if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                    i += 2;
                    break;
                }
                if bytes[i] == b'\n' {
                    line += 1;
                    had_newline = true;
                }
                i += 1;
            }
            if had_newline && needs_semi(out.last()) {
                out.push(Token {
                    tok: Tok::Semi,
                    line,
                });
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' || c >= 0x80 {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] >= 0x80)
            {
                i += 1;
            }
            let word = &src[start..i];
            let tok = match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Keyword(k),
                None => Tok::Ident(word.to_string()),
            };
            out.push(Token { tok, line });
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            let mut is_float = false;
            if src[i..].starts_with("0x") || src[i..].starts_with("0X") {
                i += 2;
                while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_') {
                    i += 1;
                }
            } else {
                while i < bytes.len() {
                    let d = bytes[i];
                    if d.is_ascii_digit() || d == b'_' {
                        i += 1;
                    } else if d == b'.' || d == b'e' || d == b'E' {
                        is_float = true;
                        i += 1;
                        if (d == b'e' || d == b'E') && matches!(bytes.get(i), Some(b'+' | b'-')) {
                            i += 1;
                        }
                    } else {
                        break;
                    }
                }
            }
            let text: String = src[start..i].chars().filter(|&c| c != '_').collect();
            let tok = if is_float {
                Tok::Float(text)
            } else if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
                Tok::Int(
                    i64::from_str_radix(hex, 16).map_err(|_| FrontError::Syntax {
                        line,
                        expected: "integer".into(),
                    })?,
                )
            } else {
                Tok::Int(text.parse().map_err(|_| FrontError::Syntax {
                    line,
                    expected: "integer".into(),
                })?)
            };
            out.push(Token { tok, line });
            continue;
        }
        if c == b'"' || c == b'`' || c == b'\'' {
            let quote = c;
            let start = i;
            i += 1;
            while i < bytes.len() && bytes[i] != quote {
                if bytes[i] == b'\\' && quote != b'`' {
                    i += 1;
                }
                if bytes[i] == b'\n' {
                    if quote != b'`' {
                        return Err(FrontError::Syntax {
                            line,
                            expected: "closing quote".into(),
                        });
                    }
                    line += 1;
                }
                i += 1;
            }
            if i >= bytes.len() {
                return Err(FrontError::Syntax {
                    line,
                    expected: "closing quote".into(),
                });
            }
            i += 1;
            let text = src[start..i].to_string();
            let tok = if quote == b'\'' {
                Tok::Char(text)
            } else {
                Tok::Str(text)
            };
            out.push(Token { tok, line });
            continue;
        }
        match OPS.iter().find(|op| src[i..].starts_with(**op)) {
            Some(op) => {
                out.push(Token {
                    tok: Tok::Op(op),
                    line,
                });
                i += op.len();
            }
            None => {
                return Err(FrontError::Syntax {
                    line,
                    expected: format!("a token, found `{}`", c as char),
                });
            }
        }
    }
    if needs_semi(out.last()) {
        out.push(Token {
            tok: Tok::Semi,
            line,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
    });
    Ok(out)
}
