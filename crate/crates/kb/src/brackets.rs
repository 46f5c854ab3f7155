//! Bracketed-tree text format for constituency annotations: one tree per
//! line as `<doc_id>\t<sent_id>\t(IP (NP (NN 被告人)) ...)`, ids aligned to
//! the CoNLL-U sentence ids.

use std::io::{BufRead, Write};

use jdd_core::parse::{ConstituencyTree, TreeNode};
use jdd_core::Diagnostic;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct BracketedSentence {
    pub doc_id: String,
    pub sent_id: usize,
    pub tree: ConstituencyTree,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BracketError {
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("empty tree")]
    Empty,
    #[error("internal node without a label or children near offset {0}")]
    BadNode(usize),
}

#[derive(Debug, Error)]
pub enum BracketIoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses one bracketed tree. An unlabeled outer wrapper `( (IP ...) )` is
/// tolerated and drops to its single child.
pub fn parse_tree(text: &str) -> Result<TreeNode, BracketError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let node = parse_node(&chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(BracketError::Unbalanced);
    }
    Ok(node)
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn read_atom(chars: &[char], pos: &mut usize) -> String {
    let start = *pos;
    while *pos < chars.len() && !chars[*pos].is_whitespace() && chars[*pos] != '(' && chars[*pos] != ')'
    {
        *pos += 1;
    }
    chars[start..*pos].iter().collect()
}

fn parse_node(chars: &[char], pos: &mut usize) -> Result<TreeNode, BracketError> {
    skip_ws(chars, pos);
    if *pos >= chars.len() {
        return Err(BracketError::Empty);
    }
    if chars[*pos] != '(' {
        let form = read_atom(chars, pos);
        if form.is_empty() {
            return Err(BracketError::BadNode(*pos));
        }
        return Ok(TreeNode::Leaf { form });
    }
    *pos += 1; // consume '('
    skip_ws(chars, pos);
    let label = read_atom(chars, pos);
    let mut children = Vec::new();
    loop {
        skip_ws(chars, pos);
        if *pos >= chars.len() {
            return Err(BracketError::Unbalanced);
        }
        if chars[*pos] == ')' {
            *pos += 1;
            break;
        }
        children.push(parse_node(chars, pos)?);
    }
    if children.is_empty() {
        return Err(BracketError::BadNode(*pos));
    }
    if label.is_empty() && children.len() == 1 {
        return Ok(children.pop_unwrap());
    }
    Ok(TreeNode::Internal { label, children })
}

trait PopUnwrap<T> {
    fn pop_unwrap(self) -> T;
}

impl<T> PopUnwrap<T> for Vec<T> {
    fn pop_unwrap(mut self) -> T {
        self.pop().expect("non-empty by construction")
    }
}

pub fn render_tree(node: &TreeNode) -> String {
    match node {
        TreeNode::Leaf { form } => form.clone(),
        TreeNode::Internal { label, children } => {
            let inner: Vec<String> = children.iter().map(render_tree).collect();
            format!("({} {})", label, inner.join(" "))
        }
    }
}

/// Reads a tree file; malformed lines become diagnostics and reading
/// continues.
pub fn read_trees(
    reader: impl BufRead,
    diags: &mut Vec<Diagnostic>,
) -> Result<Vec<BracketedSentence>, BracketIoError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let scope = format!("trees line {line_no}");
        let mut parts = line.splitn(3, '\t');
        let (Some(doc_id), Some(sent_id), Some(tree_text)) =
            (parts.next(), parts.next(), parts.next())
        else {
            diags.push(Diagnostic::new(
                scope,
                "expected doc_id<TAB>sent_id<TAB>tree",
            ));
            continue;
        };
        let Ok(sent_id) = sent_id.parse::<usize>() else {
            diags.push(Diagnostic::new(scope, format!("bad sent_id {sent_id:?}")));
            continue;
        };
        match parse_tree(tree_text) {
            Ok(root) => {
                let tree = ConstituencyTree::new(root);
                if let Err(e) = tree.validate() {
                    diags.push(Diagnostic::new(scope, format!("invalid tree: {e}")));
                    continue;
                }
                out.push(BracketedSentence {
                    doc_id: doc_id.to_string(),
                    sent_id,
                    tree,
                });
            }
            Err(e) => diags.push(Diagnostic::new(scope, format!("{e}"))),
        }
    }
    Ok(out)
}

pub fn write_trees(
    mut w: impl Write,
    trees: &[(String, usize, &ConstituencyTree)],
) -> std::io::Result<()> {
    for (doc_id, sent_id, tree) in trees {
        writeln!(w, "{doc_id}\t{sent_id}\t{}", render_tree(&tree.root))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders_a_tree() {
        let text = "(IP (NP (NN 被告人)) (VP (VV 接收) (NP (NN 红包))))";
        let node = parse_tree(text).unwrap();
        assert_eq!(render_tree(&node), text);
        let tree = ConstituencyTree::new(node);
        assert_eq!(tree.leaves(), vec!["被告人", "接收", "红包"]);
    }

    #[test]
    fn tolerates_an_unlabeled_wrapper() {
        let node = parse_tree("( (IP (VV 逃逸)))").unwrap();
        assert_eq!(render_tree(&node), "(IP (VV 逃逸))");
    }

    #[test]
    fn unbalanced_input_is_an_error() {
        assert_eq!(parse_tree("(IP (VV 逃"), Err(BracketError::Unbalanced));
    }

    #[test]
    fn file_round_trip_with_ids() {
        let tree = ConstituencyTree::new(parse_tree("(IP (VV 逃逸))").unwrap());
        let mut buffer = Vec::new();
        write_trees(&mut buffer, &[("caseA".to_string(), 2, &tree)]).unwrap();
        let mut diags = Vec::new();
        let read = read_trees(buffer.as_slice(), &mut diags).unwrap();
        assert!(diags.is_empty());
        assert_eq!(read.len(), 1);
        assert_eq!(read[0].doc_id, "caseA");
        assert_eq!(read[0].sent_id, 2);
        assert_eq!(read[0].tree, tree);
    }

    #[test]
    fn malformed_lines_are_skipped_with_diagnostics() {
        let text = "caseA\t0\t(IP (VV 逃逸))\nbroken line\ncaseB\t1\t(IP (VV 认罪))\n";
        let mut diags = Vec::new();
        let read = read_trees(text.as_bytes(), &mut diags).unwrap();
        assert_eq!(read.len(), 2);
        assert_eq!(diags.len(), 1);
    }
}
