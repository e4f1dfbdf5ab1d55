use std::fmt;

use crate::source::{Code, Diagnostic, FileId, SourceUnit, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Keyword {
    Class,
    Extends,
    Static,
    Void,
    Int,
    Boolean,
    String,
    If,
    Else,
    While,
    For,
    Return,
    Print,
    New,
    This,
    Super,
    True,
    False,
    Null,
    Collection,
}

impl Keyword {
    pub fn from_word(s: &str) -> Option<Keyword> {
        Some(match s {
            "class" => Keyword::Class,
            "extends" => Keyword::Extends,
            "static" => Keyword::Static,
            "void" => Keyword::Void,
            "int" => Keyword::Int,
            "boolean" => Keyword::Boolean,
            "string" => Keyword::String,
            "if" => Keyword::If,
            "else" => Keyword::Else,
            "while" => Keyword::While,
            "for" => Keyword::For,
            "return" => Keyword::Return,
            "print" => Keyword::Print,
            "new" => Keyword::New,
            "this" => Keyword::This,
            "super" => Keyword::Super,
            "true" => Keyword::True,
            "false" => Keyword::False,
            "null" => Keyword::Null,
            "Collection" => Keyword::Collection,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Class => "class",
            Keyword::Extends => "extends",
            Keyword::Static => "static",
            Keyword::Void => "void",
            Keyword::Int => "int",
            Keyword::Boolean => "boolean",
            Keyword::String => "string",
            Keyword::If => "if",
            Keyword::Else => "else",
            Keyword::While => "while",
            Keyword::For => "for",
            Keyword::Return => "return",
            Keyword::Print => "print",
            Keyword::New => "new",
            Keyword::This => "this",
            Keyword::Super => "super",
            Keyword::True => "true",
            Keyword::False => "false",
            Keyword::Null => "null",
            Keyword::Collection => "Collection",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Punct {
    LBrace,
    RBrace,
    LParen,
    RParen,
    Lt,
    Gt,
    Le,
    Ge,
    EqEq,
    Ne,
    Assign,
    Semi,
    Comma,
    Dot,
    Colon,
    Plus,
    Minus,
    Star,
    Slash,
    Bang,
    AndAnd,
    OrOr,
    Question,
}

impl Punct {
    pub fn as_str(self) -> &'static str {
        match self {
            Punct::LBrace => "{",
            Punct::RBrace => "}",
            Punct::LParen => "(",
            Punct::RParen => ")",
            Punct::Lt => "<",
            Punct::Gt => ">",
            Punct::Le => "<=",
            Punct::Ge => ">=",
            Punct::EqEq => "==",
            Punct::Ne => "!=",
            Punct::Assign => "=",
            Punct::Semi => ";",
            Punct::Comma => ",",
            Punct::Dot => ".",
            Punct::Colon => ":",
            Punct::Plus => "+",
            Punct::Minus => "-",
            Punct::Star => "*",
            Punct::Slash => "/",
            Punct::Bang => "!",
            Punct::AndAnd => "&&",
            Punct::OrOr => "||",
            Punct::Question => "?",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Keyword(Keyword),
    IntLit(i64),
    /// Decoded value; the lexeme keeps quotes and escapes.
    StrLit(String),
    Punct(Punct),
    /// The `@group` marker.
    GroupMarker,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(name) => write!(f, "identifier `{name}`"),
            TokenKind::Keyword(k) => write!(f, "`{}`", k.as_str()),
            TokenKind::IntLit(v) => write!(f, "integer `{v}`"),
            TokenKind::StrLit(_) => f.write_str("string literal"),
            TokenKind::Punct(p) => write!(f, "`{}`", p.as_str()),
            TokenKind::GroupMarker => f.write_str("`@group`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.text.len(), |&(i, _)| i)
    }

    fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '$'
}

/// Splits a source file into tokens. The returned list always ends with an
/// [`TokenKind::Eof`] sentinel. Comments (`//` to end of line) and
/// whitespace are dropped.
pub fn tokenize(file: FileId, unit: &SourceUnit) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let text = unit.text.as_str();
    let mut cur = Cursor {
        chars: text.char_indices().peekable(),
        text,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek2() == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }

        let start = cur.pos();
        let start_off = cur.offset();
        let kind = if is_ident_start(c) {
            while cur.peek().is_some_and(is_ident_continue) {
                cur.bump();
            }
            let word = &text[start_off..cur.offset()];
            Some(match Keyword::from_word(word) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Ident(word.to_string()),
            })
        } else if c.is_ascii_digit() {
            while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                cur.bump();
            }
            let digits = &text[start_off..cur.offset()];
            match digits.parse::<i64>() {
                Ok(v) => Some(TokenKind::IntLit(v)),
                Err(_) => {
                    let span = Span::new(file, start, cur.pos());
                    diags.push(Diagnostic::error(
                        Code::E001,
                        span,
                        format!("integer literal `{digits}` does not fit in 64 bits"),
                    ));
                    None
                }
            }
        } else if c == '"' {
            lex_string(&mut cur, file, start, &mut diags)
        } else if c == '@' {
            cur.bump();
            let word_off = cur.offset();
            while cur.peek().is_some_and(is_ident_continue) {
                cur.bump();
            }
            let word = &text[word_off..cur.offset()];
            if word == "group" {
                Some(TokenKind::GroupMarker)
            } else {
                let span = Span::new(file, start, cur.pos());
                diags.push(Diagnostic::error(
                    Code::E001,
                    span,
                    format!("unknown annotation `@{word}`; only `@group` is supported"),
                ));
                None
            }
        } else {
            cur.bump();
            let next = cur.peek();
            let two = |cur: &mut Cursor, p| {
                cur.bump();
                Some(TokenKind::Punct(p))
            };
            match (c, next) {
                ('<', Some('=')) => two(&mut cur, Punct::Le),
                ('>', Some('=')) => two(&mut cur, Punct::Ge),
                ('=', Some('=')) => two(&mut cur, Punct::EqEq),
                ('!', Some('=')) => two(&mut cur, Punct::Ne),
                ('&', Some('&')) => two(&mut cur, Punct::AndAnd),
                ('|', Some('|')) => two(&mut cur, Punct::OrOr),
                _ => {
                    let p = match c {
                        '{' => Some(Punct::LBrace),
                        '}' => Some(Punct::RBrace),
                        '(' => Some(Punct::LParen),
                        ')' => Some(Punct::RParen),
                        '<' => Some(Punct::Lt),
                        '>' => Some(Punct::Gt),
                        '=' => Some(Punct::Assign),
                        ';' => Some(Punct::Semi),
                        ',' => Some(Punct::Comma),
                        '.' => Some(Punct::Dot),
                        ':' => Some(Punct::Colon),
                        '+' => Some(Punct::Plus),
                        '-' => Some(Punct::Minus),
                        '*' => Some(Punct::Star),
                        '/' => Some(Punct::Slash),
                        '!' => Some(Punct::Bang),
                        '?' => Some(Punct::Question),
                        _ => None,
                    };
                    if p.is_none() {
                        let span = Span::new(file, start, cur.pos());
                        diags.push(Diagnostic::error(
                            Code::E001,
                            span,
                            format!("unexpected character `{}`", c.escape_debug()),
                        ));
                    }
                    p.map(TokenKind::Punct)
                }
            }
        };

        if let Some(kind) = kind {
            let span = Span::new(file, start, cur.pos());
            let lexeme = text[start_off..cur.offset()].to_string();
            tokens.push(Token { kind, lexeme, span });
        }
    }

    let end = cur.pos();
    tokens.push(Token {
        kind: TokenKind::Eof,
        lexeme: String::new(),
        span: Span::new(file, end, (end.0, end.1 + 1)),
    });

    if diags.is_empty() {
        Ok(tokens)
    } else {
        Err(diags)
    }
}

fn lex_string(
    cur: &mut Cursor,
    file: FileId,
    start: (u32, u32),
    diags: &mut Vec<Diagnostic>,
) -> Option<TokenKind> {
    cur.bump();
    let mut value = String::new();
    loop {
        match cur.peek() {
            None | Some('\n') => {
                diags.push(Diagnostic::error(
                    Code::E001,
                    Span::new(file, start, cur.pos()),
                    "unterminated string literal",
                ));
                return None;
            }
            Some('"') => {
                cur.bump();
                return Some(TokenKind::StrLit(value));
            }
            Some('\\') => {
                let esc_start = cur.pos();
                cur.bump();
                match cur.bump() {
                    Some('n') => value.push('\n'),
                    Some('t') => value.push('\t'),
                    Some('"') => value.push('"'),
                    Some('\\') => value.push('\\'),
                    other => {
                        diags.push(Diagnostic::error(
                            Code::E001,
                            Span::new(file, esc_start, cur.pos()),
                            format!(
                                "unknown escape sequence `\\{}`",
                                other.map(|c| c.to_string()).unwrap_or_default()
                            ),
                        ));
                    }
                }
            }
            Some(c) => {
                cur.bump();
                value.push(c);
            }
        }
    }
}
