//! On-demand tokenizer for ODL.
//!
//! The parser pulls one token at a time. Method bodies are never tokenized:
//! after the opening brace the parser calls [`Lexer::skip_block`], which scans
//! raw characters until the matching close brace, stepping over comments and
//! string or character literals.

use std::fmt;

use super::{ParseError, SourcePosition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Class,
    Interface,
    Extends,
    Public,
    Protected,
    Private,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Self> {
        Some(match word {
            "class" => Keyword::Class,
            "interface" => Keyword::Interface,
            "extends" => Keyword::Extends,
            "public" => Keyword::Public,
            "protected" => Keyword::Protected,
            "private" => Keyword::Private,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Class => "class",
            Keyword::Interface => "interface",
            Keyword::Extends => "extends",
            Keyword::Public => "public",
            Keyword::Protected => "protected",
            Keyword::Private => "private",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Keyword(Keyword),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(name) => write!(f, "`{name}`"),
            TokenKind::Keyword(kw) => write!(f, "`{}`", kw.as_str()),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Semi => f.write_str("`;`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
    /// A `/** */` comment appeared since the previous token.
    pub doc: bool,
}

pub struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    file: &'a str,
    line: usize,
    column: usize,
    pending_doc: bool,
}

impl<'a> Lexer<'a> {
    pub fn new(text: &'a str, file: &'a str) -> Self {
        Self {
            chars: text.chars().peekable(),
            file,
            line: 1,
            column: 1,
            pending_doc: false,
        }
    }

    pub fn position_at(&self, line: usize, column: usize) -> SourcePosition {
        SourcePosition {
            file: self.file.into(),
            line,
            column,
        }
    }

    fn error(&self, line: usize, column: usize, expected: &str, found: &str) -> ParseError {
        ParseError {
            position: self.position_at(line, column),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    /// Consumes a comment whose leading `/` is already consumed and whose
    /// second character is next. Returns whether it was a doc comment.
    fn comment(&mut self, line: usize, column: usize) -> Result<bool, ParseError> {
        match self.bump() {
            Some('/') => {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                Ok(false)
            }
            Some('*') => {
                // `/**/` is an empty plain comment, not a doc comment.
                let mut doc = false;
                if self.peek() == Some('*') {
                    self.bump();
                    if self.peek() == Some('/') {
                        self.bump();
                        return Ok(false);
                    }
                    doc = true;
                }
                let mut star = false;
                loop {
                    match self.bump() {
                        None => return Err(self.error(line, column, "`*/`", "end of input")),
                        Some('/') if star => return Ok(doc),
                        Some(c) => star = c == '*',
                    }
                }
            }
            _ => unreachable!("caller checked the second character"),
        }
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c != '/' {
                break;
            }
            let (line, column) = (self.line, self.column);
            let mut ahead = self.chars.clone();
            ahead.next();
            if !matches!(ahead.next(), Some('/' | '*')) {
                break;
            }
            self.bump();
            if self.comment(line, column)? {
                self.pending_doc = true;
            }
        }
        Ok(())
    }

    pub fn next_token(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia()?;
        let (line, column) = (self.line, self.column);
        let doc = std::mem::take(&mut self.pending_doc);
        let kind = match self.bump() {
            None => TokenKind::Eof,
            Some('{') => TokenKind::LBrace,
            Some('}') => TokenKind::RBrace,
            Some('(') => TokenKind::LParen,
            Some(')') => TokenKind::RParen,
            Some(';') => TokenKind::Semi,
            Some(',') => TokenKind::Comma,
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::from(c);
                while let Some(c) = self.peek() {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    word.push(c);
                    self.bump();
                }
                match Keyword::from_word(&word) {
                    Some(kw) => TokenKind::Keyword(kw),
                    None => TokenKind::Ident(word),
                }
            }
            Some(c) => return Err(self.error(line, column, "token", &format!("`{c}`"))),
        };
        Ok(Token {
            kind,
            line,
            column,
            doc,
        })
    }

    /// Skips the rest of a block whose `{` the parser already consumed.
    pub fn skip_block(&mut self, open_line: usize, open_column: usize) -> Result<(), ParseError> {
        let mut depth = 1usize;
        while depth > 0 {
            let (line, column) = (self.line, self.column);
            match self.bump() {
                None => return Err(self.error(open_line, open_column, "`}`", "end of input")),
                Some('{') => depth += 1,
                Some('}') => depth -= 1,
                Some('/') if matches!(self.peek(), Some('/' | '*')) => {
                    self.comment(line, column)?;
                }
                Some(quote @ ('"' | '\'')) => loop {
                    match self.bump() {
                        None | Some('\n') => {
                            let what = if quote == '"' { "closing `\"`" } else { "closing `'`" };
                            return Err(self.error(line, column, what, "end of line"));
                        }
                        Some('\\') => {
                            self.bump();
                        }
                        Some(c) if c == quote => break,
                        Some(_) => {}
                    }
                },
                Some(_) => {}
            }
        }
        self.pending_doc = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        let mut lexer = Lexer::new(text, "t.odl");
        let mut out = Vec::new();
        loop {
            let tok = lexer.next_token().unwrap();
            if tok.kind == TokenKind::Eof {
                return out;
            }
            out.push(tok.kind);
        }
    }

    #[test]
    fn tokens_and_comments() {
        assert_eq!(
            kinds("class A /* x */ extends B, // tail\n C {}"),
            vec![
                TokenKind::Keyword(Keyword::Class),
                TokenKind::Ident("A".into()),
                TokenKind::Keyword(Keyword::Extends),
                TokenKind::Ident("B".into()),
                TokenKind::Comma,
                TokenKind::Ident("C".into()),
                TokenKind::LBrace,
                TokenKind::RBrace,
            ]
        );
    }

    #[test]
    fn doc_flag_attaches_to_next_token_only() {
        let mut lexer = Lexer::new("/** d */ class /**/ A", "t.odl");
        let class = lexer.next_token().unwrap();
        assert!(class.doc);
        let name = lexer.next_token().unwrap();
        assert!(!name.doc);
    }

    #[test]
    fn positions_are_one_based() {
        let mut lexer = Lexer::new("\n  class", "t.odl");
        let tok = lexer.next_token().unwrap();
        assert_eq!((tok.line, tok.column), (2, 3));
    }

    #[test]
    fn unterminated_comment() {
        let err = Lexer::new("/* open", "t.odl").next_token().unwrap_err();
        assert_eq!(err.expected, "`*/`");
        assert_eq!((err.position.line, err.position.column), (1, 1));
    }

    #[test]
    fn stray_character() {
        let mut lexer = Lexer::new("class A # {}", "t.odl");
        lexer.next_token().unwrap();
        lexer.next_token().unwrap();
        let err = lexer.next_token().unwrap_err();
        assert_eq!(err.found, "`#`");
        assert_eq!(err.position.column, 9);
    }

    #[test]
    fn skip_block_handles_nesting_strings_and_comments() {
        let body = r#" if (x) { s = "}{"; c = '}'; } // }
            /* } */ } ;"#;
        let mut lexer = Lexer::new(body, "t.odl");
        lexer.skip_block(1, 1).unwrap();
        assert_eq!(lexer.next_token().unwrap().kind, TokenKind::Semi);
    }

    #[test]
    fn skip_block_errors() {
        let err = Lexer::new(" s = \"open ", "t.odl").skip_block(1, 1).unwrap_err();
        assert_eq!(err.expected, "closing `\"`");
        let err = Lexer::new(" { } ", "t.odl").skip_block(3, 7).unwrap_err();
        assert_eq!(err.expected, "`}`");
        assert_eq!((err.position.line, err.position.column), (3, 7));
    }
}
