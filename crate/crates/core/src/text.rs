//! Parenthesized tree syntax.
//!
//! ```text
//! tree := '(' label (' ' (label | tree))* ')'
//! ```
//!
//! A bare label inside a tree is a leaf child. Any run of whitespace separates
//! items, and children may be written in any order: the parsed tree is
//! canonical, so [`format_tree`] always prints children sorted by label.

use std::fmt::Write as _;

use crate::tree::{Label, Tree, TreeError};

/// Parses exactly one tree; surrounding whitespace is ignored.
pub fn parse_tree(text: &str) -> Result<Tree, TreeError> {
    let mut parser = Parser { text, pos: 0 };
    parser.skip_ws();
    let tree = parser.tree()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(parser.error("unexpected input after the tree"));
    }
    Ok(tree)
}

/// Canonical text of a tree; [`parse_tree`] reads it back unchanged.
pub fn format_tree(tree: &Tree) -> String {
    fn write(tree: &Tree, out: &mut String) {
        out.push('(');
        out.push_str(tree.label().as_str());
        for child in tree.children() {
            out.push(' ');
            if child.is_leaf() {
                out.push_str(child.label().as_str());
            } else {
                write(child, out);
            }
        }
        out.push(')');
    }

    let mut out = String::with_capacity(tree.node_count() * 4);
    write(tree, &mut out);
    out
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn error(&self, message: &str) -> TreeError {
        let mut message = message.to_string();
        match self.peek() {
            Some(c) => {
                let _ = write!(message, " (found {c:?})");
            }
            None => message.push_str(" (found end of input)"),
        }
        TreeError::Syntax {
            position: self.pos,
            message,
        }
    }

    fn expect(&mut self, want: char) -> Result<(), TreeError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {want:?}")))
        }
    }

    fn label(&mut self) -> Result<Label, TreeError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return Err(self.error("expected a label"));
        }
        Label::new(&self.text[start..self.pos]).map_err(|_| TreeError::Syntax {
            position: start,
            message: format!("invalid label {:?}", &self.text[start..self.pos]),
        })
    }

    fn tree(&mut self) -> Result<Tree, TreeError> {
        self.expect('(')?;
        self.skip_ws();
        let label = self.label()?;
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some('(') => children.push(self.tree()?),
                Some(_) => children.push(Tree::leaf(self.label()?)),
                None => return Err(self.error("unclosed '('")),
            }
        }
        Tree::new(label, children)
    }
}
