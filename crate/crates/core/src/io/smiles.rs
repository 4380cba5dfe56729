//! Heavy-atom graphs from a practical subset of SMILES.
//!
//! Supported: organic-subset atoms (`B C N O P S F Cl Br I`), aromatic atoms
//! (`b c n o p s`), bracket atoms with an optional hydrogen count and charge,
//! bond symbols `- = # :`, branches, ring closures (`1`-`9`, `%nn`) and the
//! `.` component separator. Bond orders are validated but not kept.
//! Stereochemistry, isotopes and wildcards are rejected.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{NodeId, SimpleGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmilesError {
    #[error("empty SMILES string")]
    EmptyInput,
    #[error("unknown atom symbol {symbol:?} at offset {position}")]
    UnknownAtomSymbol { position: usize, symbol: String },
    #[error("ring closure {ring} opened at offset {position} is not matched")]
    UnmatchedRingClosure { position: usize, ring: u32 },
    #[error("unbalanced parenthesis at offset {position}")]
    UnbalancedParenthesis { position: usize },
    #[error("bond at offset {position} does not connect two atoms")]
    DanglingBond { position: usize },
}

const ORGANIC: &[&str] = &["Br", "Cl", "B", "C", "N", "O", "P", "S", "F", "I"];
const AROMATIC: &[char] = &['b', 'c', 'n', 'o', 'p', 's'];
const BRACKET_AROMATIC: &[&str] = &["se", "as", "b", "c", "n", "o", "p", "s"];

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    labels: Vec<String>,
    edges: Vec<(NodeId, NodeId)>,
    prev: Option<NodeId>,
    // (atom the branch hangs off, atom count when the branch opened, offset)
    branches: Vec<(NodeId, usize, usize)>,
    bond: Option<usize>,
    rings: BTreeMap<u32, (NodeId, usize)>,
}

/// Parses one SMILES string into its heavy-atom graph.
pub fn parse_smiles(text: &str) -> Result<SimpleGraph, SmilesError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(SmilesError::EmptyInput);
    }
    let mut parser = Parser {
        text,
        pos: 0,
        labels: Vec::new(),
        edges: Vec::new(),
        prev: None,
        branches: Vec::new(),
        bond: None,
        rings: BTreeMap::new(),
    };
    parser.run()?;
    Ok(SimpleGraph::new(parser.labels, parser.edges)
        .expect("parser only emits in-range edges between distinct atoms"))
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn unknown(&self, len: usize) -> SmilesError {
        let symbol: String = self.rest().chars().take(len.max(1)).collect();
        SmilesError::UnknownAtomSymbol {
            position: self.pos,
            symbol,
        }
    }

    fn run(&mut self) -> Result<(), SmilesError> {
        while let Some(c) = self.rest().chars().next() {
            match c {
                '[' => self.bracket_atom()?,
                '-' | '=' | '#' | ':' => {
                    if self.prev.is_none() || self.bond.is_some() {
                        return Err(SmilesError::DanglingBond { position: self.pos });
                    }
                    self.bond = Some(self.pos);
                    self.pos += 1;
                }
                '(' => {
                    let Some(prev) = self.prev else {
                        return Err(SmilesError::UnbalancedParenthesis { position: self.pos });
                    };
                    if let Some(position) = self.bond {
                        return Err(SmilesError::DanglingBond { position });
                    }
                    self.branches.push((prev, self.labels.len(), self.pos));
                    self.pos += 1;
                }
                ')' => {
                    let Some((anchor, atoms_before, _)) = self.branches.pop() else {
                        return Err(SmilesError::UnbalancedParenthesis { position: self.pos });
                    };
                    if let Some(position) = self.bond {
                        return Err(SmilesError::DanglingBond { position });
                    }
                    if self.labels.len() == atoms_before {
                        return Err(SmilesError::UnbalancedParenthesis { position: self.pos });
                    }
                    self.prev = Some(anchor);
                    self.pos += 1;
                }
                '.' => {
                    if let Some(position) = self.bond {
                        return Err(SmilesError::DanglingBond { position });
                    }
                    self.prev = None;
                    self.pos += 1;
                }
                '0'..='9' => {
                    let ring = c.to_digit(10).expect("ascii digit");
                    self.ring_closure(ring, 1)?;
                }
                '%' => {
                    let digits: String = self.rest().chars().skip(1).take(2).collect();
                    if digits.len() != 2 || !digits.chars().all(|d| d.is_ascii_digit()) {
                        return Err(self.unknown(3));
                    }
                    let ring = digits.parse().expect("two ascii digits");
                    self.ring_closure(ring, 3)?;
                }
                _ => self.organic_atom()?,
            }
        }

        if let Some(position) = self.bond {
            return Err(SmilesError::DanglingBond { position });
        }
        if let Some(&(_, _, position)) = self.branches.last() {
            return Err(SmilesError::UnbalancedParenthesis { position });
        }
        if let Some((&ring, &(_, position))) = self.rings.iter().next() {
            return Err(SmilesError::UnmatchedRingClosure { position, ring });
        }
        if self.labels.is_empty() {
            return Err(SmilesError::EmptyInput);
        }
        Ok(())
    }

    fn add_atom(&mut self, label: String) {
        let id = self.labels.len();
        self.labels.push(label);
        if let Some(prev) = self.prev {
            self.edges.push((prev, id));
        }
        self.bond = None;
        self.prev = Some(id);
    }

    fn organic_atom(&mut self) -> Result<(), SmilesError> {
        let rest = self.rest();
        if let Some(sym) = ORGANIC.iter().find(|s| rest.starts_with(**s)) {
            self.pos += sym.len();
            self.add_atom(sym.to_string());
            return Ok(());
        }
        let c = rest.chars().next().expect("caller checked non-empty");
        if AROMATIC.contains(&c) {
            self.pos += 1;
            self.add_atom(c.to_string());
            return Ok(());
        }
        Err(self.unknown(1))
    }

    fn bracket_atom(&mut self) -> Result<(), SmilesError> {
        let Some(close) = self.rest().find(']') else {
            return Err(self.unknown(self.rest().len()));
        };
        let content = &self.rest()[1..close];
        if !valid_bracket(content) {
            return Err(SmilesError::UnknownAtomSymbol {
                position: self.pos,
                symbol: format!("[{content}]"),
            });
        }
        let label = content.to_string();
        self.pos += close + 1;
        self.add_atom(label);
        Ok(())
    }

    fn ring_closure(&mut self, ring: u32, width: usize) -> Result<(), SmilesError> {
        let position = self.pos;
        let Some(current) = self.prev else {
            return Err(SmilesError::UnmatchedRingClosure { position, ring });
        };
        match self.rings.remove(&ring) {
            Some((open, _)) => {
                if open == current {
                    return Err(SmilesError::UnmatchedRingClosure { position, ring });
                }
                self.edges.push((open, current));
            }
            None => {
                self.rings.insert(ring, (current, position));
            }
        }
        self.bond = None;
        self.pos += width;
        Ok(())
    }
}

/// `symbol [H[n]] [charge]`, where symbol is an element or aromatic atom.
fn valid_bracket(content: &str) -> bool {
    let bytes = content.as_bytes();
    let mut i = if let Some(sym) = BRACKET_AROMATIC.iter().find(|s| content.starts_with(**s)) {
        sym.len()
    } else if bytes.first().is_some_and(u8::is_ascii_uppercase) {
        if bytes.get(1).is_some_and(u8::is_ascii_lowercase) {
            2
        } else {
            1
        }
    } else {
        return false;
    };
    if bytes.get(i) == Some(&b'H') {
        i += 1;
        while bytes.get(i).is_some_and(u8::is_ascii_digit) {
            i += 1;
        }
    }
    if let Some(&sign) = bytes.get(i) {
        if sign != b'+' && sign != b'-' {
            return false;
        }
        i += 1;
        if bytes.get(i) == Some(&sign) {
            i += 1;
        } else {
            while bytes.get(i).is_some_and(u8::is_ascii_digit) {
                i += 1;
            }
        }
    }
    i == bytes.len()
}
