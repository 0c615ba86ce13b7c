use super::ExprError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    Paren,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Character offset of the first character of the lexeme.
    pub position: usize,
}

/// Splits `input` into tokens. Whitespace separates tokens and is dropped.
pub fn tokenize(input: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = if c.is_ascii_digit() || c == '.' {
            i = scan_number(&chars, i)?;
            TokenKind::Number
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            TokenKind::Identifier
        } else {
            i += 1;
            match c {
                '+' | '-' | '*' | '/' | '^' => TokenKind::Operator,
                '(' | ')' => TokenKind::Paren,
                ',' => TokenKind::Comma,
                other => {
                    return Err(ExprError::InvalidCharacter {
                        offset: start,
                        found: other,
                    })
                }
            }
        };
        tokens.push(Token {
            kind,
            lexeme: chars[start..i].iter().collect(),
            position: start,
        });
    }
    Ok(tokens)
}

// digits [ '.' digits ] [ ('e'|'E') ['+'|'-'] digits ], or '.' digits ...
fn scan_number(chars: &[char], start: usize) -> Result<usize, ExprError> {
    let mut i = start;
    let digits = |i: &mut usize| {
        let from = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        *i - from
    };
    let int_digits = digits(&mut i);
    if i < chars.len() && chars[i] == '.' {
        let dot = i;
        i += 1;
        let frac_digits = digits(&mut i);
        if frac_digits == 0 && (int_digits == 0 || (i < chars.len() && chars[i] == '.')) {
            return Err(ExprError::MalformedNumber { offset: dot });
        }
    }
    if i < chars.len() && chars[i] == '.' {
        return Err(ExprError::MalformedNumber { offset: i });
    }
    // Exponent only when digits follow, so that `2*e` style input still lexes `e` as a constant.
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            i = j;
            digits(&mut i);
        }
    }
    Ok(i)
}
