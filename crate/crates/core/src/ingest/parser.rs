//! Recursive-descent parser for ODL.
//!
//! ```text
//! model      := classdecl*
//! classdecl  := doc? ("class" | "interface") IDENT
//!               ("extends" IDENT ("," IDENT)*)? "{" member* "}"
//! member     := doc? visibility IDENT IDENT
//!               ( ";" | "(" (IDENT IDENT ("," IDENT IDENT)*)? ")" (";" | block) )
//! visibility := "public" | "protected" | "private"
//! ```

use super::lexer::{Keyword, Lexer, Token, TokenKind};
use super::ParseError;
use crate::model::{AttributeDef, ClassDef, ClassKind, MethodDef, Visibility};

pub struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Token>,
}

impl<'a> Parser<'a> {
    pub fn new(text: &'a str, file: &'a str) -> Self {
        Self {
            lexer: Lexer::new(text, file),
            peeked: None,
        }
    }

    fn peek(&mut self) -> Result<&Token, ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().expect("filled above"))
    }

    fn bump(&mut self) -> Result<Token, ParseError> {
        match self.peeked.take() {
            Some(tok) => Ok(tok),
            None => self.lexer.next_token(),
        }
    }

    fn unexpected(&self, tok: &Token, expected: &str) -> ParseError {
        ParseError {
            position: self.lexer.position_at(tok.line, tok.column),
            expected: expected.to_string(),
            found: tok.kind.to_string(),
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String, ParseError> {
        let tok = self.bump()?;
        match tok.kind {
            TokenKind::Ident(name) => Ok(name),
            _ => Err(self.unexpected(&tok, expected)),
        }
    }

    fn punct(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        let tok = self.bump()?;
        if tok.kind == kind {
            Ok(tok)
        } else {
            Err(self.unexpected(&tok, &kind.to_string()))
        }
    }

    pub fn parse_model(&mut self) -> Result<Vec<ClassDef>, ParseError> {
        let mut classes = Vec::new();
        loop {
            let tok = self.bump()?;
            let kind = match tok.kind {
                TokenKind::Eof => return Ok(classes),
                TokenKind::Keyword(Keyword::Class) => ClassKind::Class,
                TokenKind::Keyword(Keyword::Interface) => ClassKind::Interface,
                _ => return Err(self.unexpected(&tok, "`class` or `interface`")),
            };
            classes.push(self.class_body(kind, tok.doc)?);
        }
    }

    fn class_body(&mut self, kind: ClassKind, documented: bool) -> Result<ClassDef, ParseError> {
        let mut class = ClassDef::new(self.ident("class name")?, kind);
        class.documented = documented;
        if self.peek()?.kind == TokenKind::Keyword(Keyword::Extends) {
            self.bump()?;
            class.parents.push(self.ident("identifier")?);
            while self.peek()?.kind == TokenKind::Comma {
                self.bump()?;
                class.parents.push(self.ident("identifier")?);
            }
        }
        self.punct(TokenKind::LBrace).map_err(|mut e| {
            if class.parents.is_empty() {
                e.expected = "`extends` or `{`".into();
            } else {
                e.expected = "`,` or `{`".into();
            }
            e
        })?;
        loop {
            let tok = self.bump()?;
            let visibility = match tok.kind {
                TokenKind::RBrace => return Ok(class),
                TokenKind::Keyword(Keyword::Public) => Visibility::Public,
                TokenKind::Keyword(Keyword::Protected) => Visibility::Protected,
                TokenKind::Keyword(Keyword::Private) => Visibility::Private,
                _ => return Err(self.unexpected(&tok, "visibility or `}`")),
            };
            self.member(&mut class, visibility, tok.doc)?;
        }
    }

    fn member(
        &mut self,
        class: &mut ClassDef,
        visibility: Visibility,
        documented: bool,
    ) -> Result<(), ParseError> {
        let type_name = self.ident("type name")?;
        let name = self.ident("member name")?;
        let tok = self.bump()?;
        match tok.kind {
            TokenKind::Semi => {
                class.attributes.push(AttributeDef {
                    name,
                    type_name,
                    visibility,
                    documented,
                });
                Ok(())
            }
            TokenKind::LParen => {
                let mut parameter_types = Vec::new();
                if self.peek()?.kind != TokenKind::RParen {
                    loop {
                        parameter_types.push(self.ident("parameter type or `)`")?);
                        self.ident("parameter name")?;
                        let next = self.bump()?;
                        match next.kind {
                            TokenKind::Comma => continue,
                            TokenKind::RParen => break,
                            _ => return Err(self.unexpected(&next, "`,` or `)`")),
                        }
                    }
                } else {
                    self.bump()?;
                }
                let end = self.bump()?;
                match end.kind {
                    TokenKind::Semi => {}
                    TokenKind::LBrace => self.lexer.skip_block(end.line, end.column)?,
                    _ => return Err(self.unexpected(&end, "`;` or method body")),
                }
                class.methods.push(MethodDef {
                    name,
                    parameter_types,
                    return_type: type_name,
                    visibility,
                    documented,
                });
                Ok(())
            }
            _ => Err(self.unexpected(&tok, "`;` or `(`")),
        }
    }
}
