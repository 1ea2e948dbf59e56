//! Newick reading and writing with exact branch lengths.
//!
//! Branch lengths may be decimals (`0.25`, `1e-3`) or fractions (`1/3`).
//! Output uses the shortest exact decimal when one exists and `a/b`
//! otherwise. Leaf labels are either exactly `1..n` or arbitrary names mapped
//! through a [`LabelTable`].

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::tree::{Node, PhyloTree};

/// A parsed tree whose leaves still carry their textual labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawNode {
    pub label: Option<String>,
    pub length: Option<Rational>,
    pub children: Vec<RawNode>,
}

impl RawNode {
    fn leaf_labels<'a>(&'a self, out: &mut Vec<&'a str>) {
        if self.children.is_empty() {
            if let Some(l) = &self.label {
                out.push(l);
            }
        }
        for c in &self.children {
            c.leaf_labels(out);
        }
    }

    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.leaf_labels(&mut out);
        out
    }

    /// Converts to a [`PhyloTree`] using `labels` for leaf indices.
    pub fn resolve(&self, labels: &LabelTable) -> Result<PhyloTree> {
        PhyloTree::new(self.to_node(labels, true)?)
    }

    fn to_node(&self, labels: &LabelTable, is_root: bool) -> Result<Node> {
        let length = match (&self.length, is_root) {
            (Some(l), _) => l.clone(),
            (None, true) => Rational::zero(),
            (None, false) => {
                return Err(Error::Parse(format!(
                    "branch length missing above {}",
                    self.label.as_deref().unwrap_or("an internal node")
                )))
            }
        };
        if self.children.is_empty() {
            let name = self.label.as_deref().ok_or_else(|| Error::Parse("unlabelled leaf".into()))?;
            let index = labels
                .index_of(name)
                .ok_or_else(|| Error::LeafSetMismatch(format!("leaf `{name}` is not in the label table")))?;
            return Ok(Node::leaf(index, length));
        }
        let children = self.children.iter().map(|c| c.to_node(labels, false)).collect::<Result<_>>()?;
        Ok(Node::internal(length, children))
    }
}

/// Maps leaf names to indices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelTable {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl LabelTable {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (k, name) in names.iter().enumerate() {
            if index.insert(name.clone(), k).is_some() {
                return Err(Error::Parse(format!("duplicate leaf label `{name}`")));
            }
        }
        Ok(LabelTable { names, index })
    }

    /// Labels `1..n`.
    pub fn numeric(n: usize) -> Self {
        LabelTable::new((1..=n).map(|k| k.to_string()).collect()).expect("distinct")
    }

    /// The shared leaf set of `trees`: numeric order if the labels are exactly
    /// `1..n`, sorted names otherwise.
    pub fn from_trees(trees: &[RawNode]) -> Result<Self> {
        let first = trees.first().ok_or_else(|| Error::Parse("no trees".into()))?;
        let set: BTreeSet<&str> = first.leaves().into_iter().collect();
        for (t, tree) in trees.iter().enumerate().skip(1) {
            let other: BTreeSet<&str> = tree.leaves().into_iter().collect();
            if other != set {
                return Err(Error::LeafSetMismatch(format!(
                    "tree {} has leaves {:?}, tree 1 has {:?}",
                    t + 1,
                    other,
                    set
                )));
            }
        }
        let n = set.len();
        let numeric: BTreeSet<String> = (1..=n).map(|k| k.to_string()).collect();
        if set.iter().all(|s| numeric.contains(*s)) {
            Ok(LabelTable::numeric(n))
        } else {
            LabelTable::new(set.into_iter().map(str::to_owned).collect())
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse(format!("newick, line {line}, column {column}: {msg}"))
    }

    fn skip_ws(&mut self) -> Result<()> {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('[') {
                match trimmed.find(']') {
                    Some(end) => self.pos += end + 1,
                    None => return Err(self.error("unterminated comment")),
                }
            } else {
                return Ok(());
            }
        }
    }

    fn peek(&mut self) -> Result<Option<char>> {
        self.skip_ws()?;
        Ok(self.src[self.pos..].chars().next())
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn token(&mut self) -> Result<Option<String>> {
        match self.peek()? {
            Some('\'') => {
                self.bump();
                let mut out = String::new();
                loop {
                    match self.src[self.pos..].chars().next() {
                        None => return Err(self.error("unterminated quoted label")),
                        Some('\'') => {
                            self.bump();
                            if self.src[self.pos..].starts_with('\'') {
                                out.push('\'');
                                self.bump();
                            } else {
                                return Ok(Some(out));
                            }
                        }
                        Some(c) => {
                            out.push(c);
                            self.bump();
                        }
                    }
                }
            }
            _ => {
                let start = self.pos;
                let rest = &self.src[start..];
                let end = rest
                    .find(|c: char| "()[]':;,".contains(c) || c.is_whitespace())
                    .unwrap_or(rest.len());
                self.pos += end;
                Ok((end > 0).then(|| rest[..end].replace('_', " ")))
            }
        }
    }

    fn length(&mut self) -> Result<Option<Rational>> {
        if self.peek()? != Some(':') {
            return Ok(None);
        }
        self.bump();
        self.skip_ws()?;
        let start = self.pos;
        let rest = &self.src[start..];
        let end = rest
            .find(|c: char| "()[]',;:".contains(c) || c.is_whitespace())
            .unwrap_or(rest.len());
        self.pos += end;
        Rational::parse(&rest[..end])
            .map(Some)
            .map_err(|_| self.error(&format!("bad branch length `{}`", &rest[..end])))
    }

    fn subtree(&mut self) -> Result<RawNode> {
        let mut children = Vec::new();
        if self.peek()? == Some('(') {
            self.bump();
            loop {
                children.push(self.subtree()?);
                match self.peek()? {
                    Some(',') => self.bump(),
                    Some(')') => {
                        self.bump();
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        let label = self.token()?;
        if children.is_empty() && label.is_none() {
            return Err(self.error("expected a leaf label or `(`"));
        }
        let length = self.length()?;
        Ok(RawNode { label, length, children })
    }

    fn tree(&mut self) -> Result<RawNode> {
        let t = self.subtree()?;
        if self.peek()? != Some(';') {
            return Err(self.error("expected `;`"));
        }
        self.bump();
        Ok(t)
    }
}

/// Parses every `;`-terminated tree in `text`.
pub fn parse_newick(text: &str) -> Result<Vec<RawNode>> {
    let mut p = Parser { src: text, pos: 0 };
    let mut out = Vec::new();
    while p.peek()?.is_some() {
        out.push(p.tree()?);
    }
    if out.is_empty() {
        return Err(Error::Parse("no trees in input".into()));
    }
    Ok(out)
}

/// Parses trees sharing one leaf set.
pub fn parse_trees(text: &str) -> Result<(Vec<PhyloTree>, LabelTable)> {
    let raw = parse_newick(text)?;
    let labels = LabelTable::from_trees(&raw)?;
    let trees = raw.iter().map(|t| t.resolve(&labels)).collect::<Result<_>>()?;
    Ok((trees, labels))
}

pub fn format_length(x: &Rational) -> String {
    x.to_decimal().unwrap_or_else(|| x.to_string())
}

fn quote(name: &str) -> String {
    if name.is_empty() || name.contains(|c: char| "()[]':;,_".contains(c)) {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.replace(' ', "_")
    }
}

/// Canonical Newick: children ordered by smallest leaf, labels `1..n` unless
/// a table is given.
pub fn to_newick(tree: &PhyloTree, labels: Option<&LabelTable>) -> String {
    fn walk(node: &Node, labels: Option<&LabelTable>, is_root: bool, out: &mut String) {
        match node.leaf {
            Some(l) => match labels {
                Some(t) => out.push_str(&quote(t.name(l))),
                None => out.push_str(&(l + 1).to_string()),
            },
            None => {
                out.push('(');
                for (k, c) in node.children.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    walk(c, labels, false, out);
                }
                out.push(')');
            }
        }
        if !is_root {
            out.push(':');
            out.push_str(&format_length(&node.length));
        }
    }
    let mut out = String::new();
    walk(tree.root(), labels, true, &mut out);
    out.push(';');
    out
}
