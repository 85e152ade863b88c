use super::FrontendError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Class,
    Extends,
    Def,
    Var,
    New,
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Dot,
    Eof,
}

impl Token {
    pub fn describe(&self) -> String {
        match self {
            Token::Class => "`class`".into(),
            Token::Extends => "`extends`".into(),
            Token::Def => "`def`".into(),
            Token::Var => "`var`".into(),
            Token::New => "`new`".into(),
            Token::Ident(name) => format!("identifier `{name}`"),
            Token::LBrace => "`{`".into(),
            Token::RBrace => "`}`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Colon => "`:`".into(),
            Token::Semi => "`;`".into(),
            Token::Dot => "`.`".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub token: Token,
    pub pos: Pos,
}

/// Splits MiniJ source into tokens. The final token is always `Eof`.
pub fn tokenize(source: &str) -> Result<Vec<Spanned>, FrontendError> {
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let mut pos = Pos { line: 1, column: 1 };

    let advance = |c: char, pos: &mut Pos| {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    };

    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut pos);
            continue;
        }
        if c == '/' {
            chars.next();
            advance(c, &mut pos);
            if chars.peek() != Some(&'/') {
                return Err(FrontendError::syntax(start, "unexpected `/`"));
            }
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                advance(c, &mut pos);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                word.push(c);
                chars.next();
                advance(c, &mut pos);
            }
            let token = match word.as_str() {
                "class" => Token::Class,
                "extends" => Token::Extends,
                "def" => Token::Def,
                "var" => Token::Var,
                "new" => Token::New,
                _ => Token::Ident(word),
            };
            tokens.push(Spanned { token, pos: start });
            continue;
        }
        let token = match c {
            '{' => Token::LBrace,
            '}' => Token::RBrace,
            '(' => Token::LParen,
            ')' => Token::RParen,
            ':' => Token::Colon,
            ';' => Token::Semi,
            '.' => Token::Dot,
            other => {
                return Err(FrontendError::syntax(
                    start,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        chars.next();
        advance(c, &mut pos);
        tokens.push(Spanned { token, pos: start });
    }
    tokens.push(Spanned {
        token: Token::Eof,
        pos,
    });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Token> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|s| s.token)
            .collect()
    }

    #[test]
    fn keywords_and_punctuation() {
        assert_eq!(
            kinds("class A extends B { def m() { var x: C; new C; x.m(); } }"),
            vec![
                Token::Class,
                Token::Ident("A".into()),
                Token::Extends,
                Token::Ident("B".into()),
                Token::LBrace,
                Token::Def,
                Token::Ident("m".into()),
                Token::LParen,
                Token::RParen,
                Token::LBrace,
                Token::Var,
                Token::Ident("x".into()),
                Token::Colon,
                Token::Ident("C".into()),
                Token::Semi,
                Token::New,
                Token::Ident("C".into()),
                Token::Semi,
                Token::Ident("x".into()),
                Token::Dot,
                Token::Ident("m".into()),
                Token::LParen,
                Token::RParen,
                Token::Semi,
                Token::RBrace,
                Token::RBrace,
                Token::Eof,
            ]
        );
    }

    #[test]
    fn comments_are_skipped_and_positions_tracked() {
        let toks = tokenize("// header\n  class _A1 // trailing\n{}").unwrap();
        assert_eq!(toks[0].token, Token::Class);
        assert_eq!(toks[0].pos, Pos { line: 2, column: 3 });
        assert_eq!(toks[1].token, Token::Ident("_A1".into()));
        assert_eq!(toks[2].pos, Pos { line: 3, column: 1 });
    }

    #[test]
    fn stray_characters_are_reported_with_position() {
        let err = tokenize("class A {\n  # }").unwrap_err();
        assert_eq!(
            err,
            FrontendError::Syntax {
                line: 2,
                column: 3,
                message: "unexpected character `#`".into()
            }
        );
        assert!(matches!(
            tokenize("/ x"),
            Err(FrontendError::Syntax {
                line: 1,
                column: 1,
                ..
            })
        ));
    }
}
