use super::ExprError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Number(f64),
    Ident,
    Op(char),
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte offset of the first character in the source.
    pub offset: usize,
}

/// Splits `source` into tokens. The stream always ends with a single
/// [`TokenKind::End`] token positioned at `source.len()`.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let kind = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                pos += 1;
                TokenKind::Op(c as char)
            }
            b'(' => {
                pos += 1;
                TokenKind::LParen
            }
            b')' => {
                pos += 1;
                TokenKind::RParen
            }
            b'0'..=b'9' | b'.' => {
                pos = scan_number(bytes, pos);
                let text = &source[start..pos];
                let value: f64 = text.parse().map_err(|_| ExprError::Lex {
                    offset: start,
                    found: text.chars().next().unwrap_or('.'),
                })?;
                TokenKind::Number(value)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                TokenKind::Ident
            }
            _ => {
                let found = source[start..].chars().next().unwrap_or('?');
                return Err(ExprError::Lex {
                    offset: start,
                    found,
                });
            }
        };
        tokens.push(Token {
            kind,
            lexeme: source[start..pos].to_string(),
            offset: start,
        });
    }
    tokens.push(Token {
        kind: TokenKind::End,
        lexeme: String::new(),
        offset: source.len(),
    });
    Ok(tokens)
}

/// Decimal literal with optional fraction and exponent. The exponent marker is
/// only consumed when digits follow it, so `2exp(t)` lexes as `2`, `exp`, ...
fn scan_number(bytes: &[u8], mut pos: usize) -> usize {
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos < bytes.len() && bytes[pos] == b'.' {
        pos += 1;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
    }
    if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
        let mut look = pos + 1;
        if look < bytes.len() && (bytes[look] == b'+' || bytes[look] == b'-') {
            look += 1;
        }
        if look < bytes.len() && bytes[look].is_ascii_digit() {
            pos = look;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
        }
    }
    pos
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.lexeme))
            .collect()
    }

    #[test]
    fn power() {
        assert_eq!(
            kinds("t^2"),
            vec![
                (TokenKind::Ident, "t".into()),
                (TokenKind::Op('^'), "^".into()),
                (TokenKind::Number(2.0), "2".into()),
                (TokenKind::End, "".into()),
            ]
        );
    }

    #[test]
    fn function_call() {
        let got: Vec<_> = kinds("exp(t) + 1").into_iter().map(|(k, _)| k).collect();
        assert_eq!(
            got,
            vec![
                TokenKind::Ident,
                TokenKind::LParen,
                TokenKind::Ident,
                TokenKind::RParen,
                TokenKind::Op('+'),
                TokenKind::Number(1.0),
                TokenKind::End,
            ]
        );
    }

    #[test]
    fn unknown_character() {
        assert_eq!(
            tokenize("2 @ t"),
            Err(ExprError::Lex {
                offset: 2,
                found: '@'
            })
        );
    }

    #[test]
    fn numbers() {
        let nums: Vec<_> = tokenize("1.5e-3 .25 7. 2E+2 3e")
            .unwrap()
            .into_iter()
            .filter_map(|t| match t.kind {
                TokenKind::Number(v) => Some(v),
                _ => None,
            })
            .collect();
        assert_eq!(nums, vec![1.5e-3, 0.25, 7.0, 200.0, 3.0]);
        assert!(tokenize(".").is_err());
    }

    #[test]
    fn offsets_strictly_increase() {
        let toks = tokenize(" sin( t ) *2.5^ 3 ").unwrap();
        for w in toks.windows(2) {
            assert!(w[0].offset < w[1].offset);
        }
    }
}
