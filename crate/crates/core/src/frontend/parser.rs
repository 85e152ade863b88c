//! Recursive-descent parser for MiniJ.
//!
//! Parsing happens in two passes: the grammar pass produces raw class and
//! method declarations, then the semantic pass checks names (duplicates,
//! undeclared types, inheritance cycles) and builds the [`ProgramModel`].

use indexmap::map::Entry;
use indexmap::{IndexMap, IndexSet};

use super::lexer::{tokenize, Pos, Spanned, Token};
use super::model::{
    CallSite, ClassDecl, Delta, MethodDecl, MethodId, ProgramModel, Receiver, Stmt,
};
use super::FrontendError;

struct RawClass {
    name: String,
    superclass: Option<String>,
    methods: Vec<RawMethod>,
}

struct RawMethod {
    name: String,
    body: Vec<Stmt>,
}

struct Parser {
    tokens: Vec<Spanned>,
    at: usize,
}

impl Parser {
    fn new(source: &str) -> Result<Self, FrontendError> {
        Ok(Self {
            tokens: tokenize(source)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.at].token
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let idx = (self.at + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].token
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.at].token.clone();
        if tok != Token::Eof {
            self.at += 1;
        }
        tok
    }

    fn unexpected(&self, wanted: &str) -> FrontendError {
        FrontendError::syntax(
            self.pos(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, want: Token) -> Result<(), FrontendError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&want.describe()))
        }
    }

    fn ident(&mut self) -> Result<String, FrontendError> {
        match self.peek() {
            Token::Ident(_) => match self.bump() {
                Token::Ident(name) => Ok(name),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn program(&mut self) -> Result<Vec<RawClass>, FrontendError> {
        let mut classes = Vec::new();
        while *self.peek() != Token::Eof {
            classes.push(self.class_decl()?);
        }
        Ok(classes)
    }

    fn class_decl(&mut self) -> Result<RawClass, FrontendError> {
        self.expect(Token::Class)?;
        let name = self.ident()?;
        let superclass = if *self.peek() == Token::Extends {
            self.bump();
            Some(self.ident()?)
        } else {
            None
        };
        self.expect(Token::LBrace)?;
        let mut methods = Vec::new();
        while *self.peek() != Token::RBrace {
            if *self.peek() != Token::Def {
                return Err(self.unexpected("`def` or `}`"));
            }
            methods.push(self.method_decl()?);
        }
        self.expect(Token::RBrace)?;
        Ok(RawClass {
            name,
            superclass,
            methods,
        })
    }

    fn method_decl(&mut self) -> Result<RawMethod, FrontendError> {
        self.expect(Token::Def)?;
        let name = self.ident()?;
        self.expect(Token::LParen)?;
        self.expect(Token::RParen)?;
        self.expect(Token::LBrace)?;
        let mut body = Vec::new();
        while *self.peek() != Token::RBrace {
            body.push(self.stmt()?);
        }
        self.expect(Token::RBrace)?;
        Ok(RawMethod { name, body })
    }

    fn stmt(&mut self) -> Result<Stmt, FrontendError> {
        match self.peek() {
            Token::Var => {
                self.bump();
                let name = self.ident()?;
                self.expect(Token::Colon)?;
                let ty = self.ident()?;
                self.expect(Token::Semi)?;
                Ok(Stmt::Var { name, ty })
            }
            Token::New => {
                self.bump();
                let class = self.ident()?;
                self.expect(Token::Semi)?;
                Ok(Stmt::New(class))
            }
            Token::Ident(_) => {
                let receiver = if *self.peek_at(1) == Token::Dot {
                    let var = self.ident()?;
                    self.bump();
                    Receiver::Local(var)
                } else {
                    Receiver::This
                };
                let target = self.ident()?;
                self.expect(Token::LParen)?;
                self.expect(Token::RParen)?;
                self.expect(Token::Semi)?;
                Ok(Stmt::Call { receiver, target })
            }
            _ => Err(self.unexpected("statement")),
        }
    }
}

/// Parses and validates a MiniJ source unit.
pub fn parse_program(source: &str) -> Result<ProgramModel, FrontendError> {
    let raw = Parser::new(source)?.program()?;

    let mut supers: IndexMap<String, Option<String>> = IndexMap::new();
    for class in &raw {
        if supers
            .insert(class.name.clone(), class.superclass.clone())
            .is_some()
        {
            return Err(FrontendError::DuplicateClass(class.name.clone()));
        }
    }
    for (name, sup) in &supers {
        if let Some(sup) = sup {
            if !supers.contains_key(sup) {
                return Err(FrontendError::UndeclaredSuperclass {
                    class: name.clone(),
                    superclass: sup.clone(),
                });
            }
        }
    }
    check_acyclic(&supers)?;

    let declared: IndexSet<&str> = supers.keys().map(String::as_str).collect();
    let mut classes = IndexMap::new();
    for class in raw {
        let mut methods = IndexMap::new();
        for method in class.methods {
            match methods.entry(method.name.clone()) {
                Entry::Occupied(_) => {
                    return Err(FrontendError::DuplicateMethod(MethodId::new(
                        &class.name,
                        &method.name,
                    )))
                }
                Entry::Vacant(slot) => {
                    slot.insert(build_method(
                        &class.name,
                        &method.name,
                        method.body,
                        &declared,
                    )?);
                }
            }
        }
        classes.insert(
            class.name.clone(),
            ClassDecl {
                name: class.name,
                superclass: class.superclass,
                methods,
            },
        );
    }
    Ok(ProgramModel { classes })
}

fn check_acyclic(supers: &IndexMap<String, Option<String>>) -> Result<(), FrontendError> {
    for start in supers.keys() {
        let mut path = vec![start.as_str()];
        let mut cur = start.as_str();
        while let Some(Some(next)) = supers.get(cur) {
            if let Some(at) = path.iter().position(|c| *c == next) {
                let cycle = path[at..].iter().map(|c| c.to_string()).collect();
                return Err(FrontendError::InheritanceCycle(cycle));
            }
            path.push(next);
            cur = next;
        }
    }
    Ok(())
}

/// Turns a statement list into a checked method declaration.
///
/// Locals may be used before their `var` line; a method body has no scopes.
pub(crate) fn build_method(
    owner: &str,
    name: &str,
    body: Vec<Stmt>,
    declared: &IndexSet<&str>,
) -> Result<MethodDecl, FrontendError> {
    let id = || MethodId::new(owner, name);
    let mut locals = IndexMap::new();
    let mut instantiations = IndexSet::new();
    let mut calls = Vec::new();
    for stmt in body {
        match stmt {
            Stmt::Var { name: var, ty } => {
                if !declared.contains(ty.as_str()) {
                    return Err(FrontendError::UndeclaredType { method: id(), ty });
                }
                if locals.insert(var.clone(), ty).is_some() {
                    return Err(FrontendError::DuplicateLocal {
                        method: id(),
                        local: var,
                    });
                }
            }
            Stmt::New(class) => {
                if !declared.contains(class.as_str()) {
                    return Err(FrontendError::UndeclaredType {
                        method: id(),
                        ty: class,
                    });
                }
                instantiations.insert(class);
            }
            Stmt::Call { receiver, target } => calls.push((receiver, target)),
        }
    }
    let mut call_sites = Vec::with_capacity(calls.len());
    for (index, (receiver, target_name)) in calls.into_iter().enumerate() {
        if let Receiver::Local(var) = &receiver {
            if !locals.contains_key(var) {
                return Err(FrontendError::UndeclaredLocal {
                    method: id(),
                    local: var.clone(),
                });
            }
        }
        call_sites.push(CallSite {
            index,
            receiver,
            target_name,
        });
    }
    Ok(MethodDecl {
        owner: owner.to_string(),
        name: name.to_string(),
        locals,
        instantiations,
        call_sites,
    })
}

/// Parses an edit patch: a header line `@@ Class.method` followed by the
/// replacement MiniJ method declaration.
pub fn parse_patch(text: &str) -> Result<Delta, FrontendError> {
    let body_start = text
        .find(|c: char| !c.is_whitespace())
        .ok_or_else(|| FrontendError::MalformedPatch("empty patch".into()))?;
    let rest = &text[body_start..];
    let header_end = rest.find('\n').unwrap_or(rest.len());
    let header = rest[..header_end].trim();
    let target = header.strip_prefix("@@").ok_or_else(|| {
        FrontendError::MalformedPatch(format!(
            "expected `@@ Class.method` header, found `{header}`"
        ))
    })?;
    let method: MethodId = target
        .trim()
        .parse()
        .map_err(|e| FrontendError::MalformedPatch(format!("{e}")))?;

    // Keep line numbers in diagnostics relative to the whole patch file.
    let preceding_lines = text[..body_start + header_end].matches('\n').count();
    let padded = format!("{}{}", "\n".repeat(preceding_lines), &rest[header_end..]);
    let mut parser = Parser::new(&padded)?;
    let decl = parser.method_decl()?;
    if *parser.peek() != Token::Eof {
        return Err(parser.unexpected("end of patch"));
    }
    if decl.name != method.method_name {
        return Err(FrontendError::MalformedPatch(format!(
            "header names `{method}` but the declaration defines `{}`",
            decl.name
        )));
    }
    Ok(Delta {
        method,
        new_body: decl.body,
    })
}
