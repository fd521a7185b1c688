//! Tokenizer for the ASCII concrete syntax.

use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u32),
    AllUr,
    ExBang,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Dot,
    Comma,
    Colon,
    Semi,
    Caret,
    Underscore,
    Eq,
    Neq,
    SurjArrow,
    MapsArrow,
    Implies,
    Iff,
    AndOp,
    OrOp,
    Tilde,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::AllUr => "`all-ur`".into(),
            Tok::ExBang => "`ex!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Underscore => "`_`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::SurjArrow => "`->>`".into(),
            Tok::MapsArrow => "`|->`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::AndOp => "`/\\`".into(),
            Tok::OrOp => "`\\/`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;
    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(Spanned { tok: $tok, span: SourceSpan { line, column: col, length: $len } });
            col += $len;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                push!(Tok::LParen, 1);
                i += 1;
            }
            ')' => {
                push!(Tok::RParen, 1);
                i += 1;
            }
            '{' => {
                push!(Tok::LBrace, 1);
                i += 1;
            }
            '}' => {
                push!(Tok::RBrace, 1);
                i += 1;
            }
            '[' => {
                push!(Tok::LBracket, 1);
                i += 1;
            }
            ']' => {
                push!(Tok::RBracket, 1);
                i += 1;
            }
            '.' => {
                push!(Tok::Dot, 1);
                i += 1;
            }
            ',' => {
                push!(Tok::Comma, 1);
                i += 1;
            }
            ':' => {
                push!(Tok::Colon, 1);
                i += 1;
            }
            ';' => {
                push!(Tok::Semi, 1);
                i += 1;
            }
            '^' => {
                push!(Tok::Caret, 1);
                i += 1;
            }
            '_' => {
                push!(Tok::Underscore, 1);
                i += 1;
            }
            '~' => {
                push!(Tok::Tilde, 1);
                i += 1;
            }
            '=' => {
                push!(Tok::Eq, 1);
                i += 1;
            }
            '!' if chars.get(i + 1) == Some(&'=') => {
                push!(Tok::Neq, 2);
                i += 2;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                if chars.get(i + 2) == Some(&'>') {
                    push!(Tok::SurjArrow, 3);
                    i += 3;
                } else {
                    push!(Tok::Implies, 2);
                    i += 2;
                }
            }
            '|' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push!(Tok::MapsArrow, 3);
                i += 3;
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push!(Tok::Iff, 3);
                i += 3;
            }
            '<' => {
                push!(Tok::LAngle, 1);
                i += 1;
            }
            '>' => {
                push!(Tok::RAngle, 1);
                i += 1;
            }
            '/' if chars.get(i + 1) == Some(&'\\') => {
                push!(Tok::AndOp, 2);
                i += 2;
            }
            '\\' if chars.get(i + 1) == Some(&'/') => {
                push!(Tok::OrOp, 2);
                i += 2;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n: u32 = s.parse().map_err(|_| ParseError {
                    span: SourceSpan { line, column: col, length: (i - start) as u32 },
                    expected: vec!["a small number".into()],
                    found: s.clone(),
                })?;
                push!(Tok::Int(n), (i - start) as u32);
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                // `all-ur` and `ex!` are multi-character keywords.
                if s == "all"
                    && chars.get(i) == Some(&'-')
                    && chars.get(i + 1) == Some(&'u')
                    && chars.get(i + 2) == Some(&'r')
                {
                    i += 3;
                    push!(Tok::AllUr, 6);
                } else if s == "ex" && chars.get(i) == Some(&'!') && chars.get(i + 1) != Some(&'=')
                {
                    i += 1;
                    push!(Tok::ExBang, 3);
                } else {
                    push!(Tok::Ident(s), (i - start) as u32);
                }
            }
            other => {
                return Err(ParseError {
                    span: SourceSpan { line, column: col, length: 1 },
                    expected: vec!["a token".into()],
                    found: other.to_string(),
                })
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, span: SourceSpan { line, column: col, length: 1 } });
    Ok(out)
}
