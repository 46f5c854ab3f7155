//! Externally supplied parse annotations: dependency graphs over universal
//! dependency relations and constituency trees over the Chinese treebank
//! label set. This module performs no parsing of its own; annotations arrive
//! per sentence and are sliced per clause here.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::ops::Range;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub form: String,
    #[serde(default)]
    pub lemma: String,
    /// Universal part-of-speech tag, e.g. `VERB`.
    #[serde(default)]
    pub upos: String,
    /// Language-specific tag, e.g. `VV`.
    #[serde(default)]
    pub xpos: String,
}

impl Token {
    pub fn new(form: &str, lemma: &str, upos: &str, xpos: &str) -> Self {
        Token {
            form: form.to_string(),
            lemma: lemma.to_string(),
            upos: upos.to_string(),
            xpos: xpos.to_string(),
        }
    }

    /// Canonical identity of a verb: the lemma column, falling back to the
    /// surface form when no lemma was supplied.
    pub fn lemma_or_form(&self) -> &str {
        if self.lemma.is_empty() {
            &self.form
        } else {
            &self.lemma
        }
    }

    pub fn is_verb(&self) -> bool {
        self.upos.eq_ignore_ascii_case("VERB") || self.xpos.eq_ignore_ascii_case("VV")
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self.upos.as_str(), "NOUN" | "PROPN" | "PRON")
            || matches!(self.xpos.as_str(), "NN" | "NR" | "NT" | "PN")
    }
}

/// A directed dependency edge `head -> dep` with its relation label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepEdge {
    pub head: usize,
    pub dep: usize,
    pub rel: String,
}

/// A per-sentence dependency graph. Tokens are in surface order; `root` is
/// the index of the root token, which has no incoming edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyGraph {
    pub tokens: Vec<Token>,
    pub edges: Vec<DepEdge>,
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseDataError {
    #[error("token index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("token {0} has {1} heads; dependency edges must form a tree")]
    NotATree(usize, usize),
    #[error("dependency edges contain a cycle or unreachable token")]
    CycleOrUnreachable,
    #[error("constituency node {0:?} has no children")]
    EmptyInternalNode(String),
}

/// Tree and graph were supposed to annotate the same tokens but do not.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("tree/graph misaligned: {0}")]
pub struct AlignmentError(pub String);

impl DependencyGraph {
    pub fn new(tokens: Vec<Token>, edges: Vec<DepEdge>, root: usize) -> Self {
        DependencyGraph {
            tokens,
            edges,
            root,
        }
    }

    /// Checks the tree invariant: edges form a tree rooted at `root`.
    pub fn validate(&self) -> Result<(), ParseDataError> {
        let n = self.tokens.len();
        if self.root >= n {
            return Err(ParseDataError::IndexOutOfRange(self.root));
        }
        let mut head_count = vec![0usize; n];
        for e in &self.edges {
            if e.head >= n {
                return Err(ParseDataError::IndexOutOfRange(e.head));
            }
            if e.dep >= n {
                return Err(ParseDataError::IndexOutOfRange(e.dep));
            }
            head_count[e.dep] += 1;
        }
        for (i, &count) in head_count.iter().enumerate() {
            if i == self.root {
                if count != 0 {
                    return Err(ParseDataError::NotATree(i, count));
                }
            } else if count != 1 {
                return Err(ParseDataError::NotATree(i, count));
            }
        }
        // Reachability from the root covers acyclicity given in-degree 1.
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        while let Some(i) = stack.pop() {
            for e in self.edges.iter().filter(|e| e.head == i) {
                if !seen[e.dep] {
                    seen[e.dep] = true;
                    stack.push(e.dep);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(ParseDataError::CycleOrUnreachable);
        }
        Ok(())
    }

    pub fn dependents(&self, head: usize) -> impl Iterator<Item = &DepEdge> {
        self.edges.iter().filter(move |e| e.head == head)
    }

    pub fn dependents_matching<'a>(
        &'a self,
        head: usize,
        pred: impl Fn(&str) -> bool + 'a,
    ) -> impl Iterator<Item = &'a DepEdge> {
        self.dependents(head).filter(move |e| pred(&e.rel))
    }

    /// The surface yield of the phrase headed at `index`: the token and its
    /// descendants, cut at clausal, coordination and punctuation edges so a
    /// noun keeps its compounds but not an attached relative clause.
    pub fn phrase_yield(&self, index: usize) -> String {
        let mut members = vec![index];
        let mut stack = vec![index];
        while let Some(i) = stack.pop() {
            for e in self.dependents(i) {
                if yield_cut(&e.rel) {
                    continue;
                }
                members.push(e.dep);
                stack.push(e.dep);
            }
        }
        members.sort_unstable();
        members.dedup();
        members
            .into_iter()
            .map(|i| self.tokens[i].form.as_str())
            .collect()
    }

    /// Restricts the graph to a token span, reindexing tokens from zero.
    /// Edges crossing the boundary are dropped; tokens left headless are
    /// attached to the first headless token with the opaque relation `dep`
    /// so the slice stays a tree. Fabricated `dep` edges never match any
    /// extraction rule or contribute to phrase yields.
    pub fn slice(&self, span: Range<usize>) -> DependencyGraph {
        let offset = span.start;
        let len = span.end - span.start;
        let tokens: Vec<Token> = self.tokens[span.clone()].to_vec();
        let in_span = |i: usize| i >= span.start && i < span.end;
        let mut edges: Vec<DepEdge> = Vec::new();
        let mut has_head = vec![false; len];
        for e in &self.edges {
            if in_span(e.head) && in_span(e.dep) {
                has_head[e.dep - offset] = true;
                edges.push(DepEdge {
                    head: e.head - offset,
                    dep: e.dep - offset,
                    rel: e.rel.clone(),
                });
            }
        }
        let headless: Vec<usize> = (0..len).filter(|&i| !has_head[i]).collect();
        let root = headless.first().copied().unwrap_or(0);
        for &i in headless.iter().skip(1) {
            edges.push(DepEdge {
                head: root,
                dep: i,
                rel: "dep".to_string(),
            });
        }
        DependencyGraph {
            tokens,
            edges,
            root,
        }
    }
}

/// Relations whose subtrees are excluded from a phrase yield.
fn yield_cut(rel: &str) -> bool {
    matches!(
        rel_base(rel),
        "punct"
            | "conj"
            | "cc"
            | "ccomp"
            | "xcomp"
            | "advcl"
            | "acl"
            | "csubj"
            | "parataxis"
            | "appos"
            | "discourse"
            | "dislocated"
            | "list"
            | "vocative"
            | "reparandum"
            | "mark"
            | "dep"
    )
}

/// The base of a relation label, before any `:` subtype.
pub fn rel_base(rel: &str) -> &str {
    rel.split(':').next().unwrap_or(rel)
}

pub fn is_nominal_subject(rel: &str) -> bool {
    rel == "nsubj"
}

pub fn is_passive_nominal_subject(rel: &str) -> bool {
    rel == "nsubj:pass" || rel == "nsubjpass"
}

pub fn is_direct_object(rel: &str) -> bool {
    rel == "obj" || rel == "dobj"
}

pub fn is_adverb_modifier(rel: &str) -> bool {
    rel_base(rel) == "advmod"
}

pub fn is_plain_auxiliary(rel: &str) -> bool {
    rel == "aux"
}

pub fn is_passive_auxiliary(rel: &str) -> bool {
    rel == "aux:pass" || rel == "auxpass"
}

pub fn is_conjunct(rel: &str) -> bool {
    rel_base(rel) == "conj"
}

pub fn is_clausal_complement(rel: &str) -> bool {
    rel == "ccomp"
}

/// A node of a constituency tree. Pre-terminals are internal nodes with a
/// single leaf child, as in bracketed treebank notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        label: String,
        children: Vec<TreeNode>,
    },
    Leaf {
        form: String,
    },
}

impl TreeNode {
    pub fn internal(label: &str, children: Vec<TreeNode>) -> Self {
        TreeNode::Internal {
            label: label.to_string(),
            children,
        }
    }

    pub fn pre_terminal(tag: &str, form: &str) -> Self {
        TreeNode::Internal {
            label: tag.to_string(),
            children: vec![TreeNode::Leaf {
                form: form.to_string(),
            }],
        }
    }

    fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { children, .. } => children.iter().map(TreeNode::leaf_count).sum(),
        }
    }
}

/// A per-sentence constituency tree whose leaf sequence equals the token
/// sequence of the aligned dependency graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituencyTree {
    pub root: TreeNode,
}

/// Root labels that stand for the parse root itself rather than a
/// constituent; they are skipped when checking trigger paths.
pub const SYNTHETIC_ROOT_LABELS: &[&str] = &["ROOT", "TOP", ""];

impl ConstituencyTree {
    pub fn new(root: TreeNode) -> Self {
        ConstituencyTree { root }
    }

    pub fn validate(&self) -> Result<(), ParseDataError> {
        fn walk(node: &TreeNode) -> Result<(), ParseDataError> {
            if let TreeNode::Internal { label, children } = node {
                if children.is_empty() {
                    return Err(ParseDataError::EmptyInternalNode(label.clone()));
                }
                for c in children {
                    walk(c)?;
                }
            }
            Ok(())
        }
        walk(&self.root)
    }

    pub fn leaves(&self) -> Vec<&str> {
        fn walk<'a>(node: &'a TreeNode, out: &mut Vec<&'a str>) {
            match node {
                TreeNode::Leaf { form } => out.push(form),
                TreeNode::Internal { children, .. } => {
                    for c in children {
                        walk(c, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// For each leaf, the labels of the internal nodes on the path from the
    /// root down to (and including) the pre-terminal. Synthetic root labels
    /// are omitted.
    pub fn leaf_paths(&self) -> Vec<Vec<&str>> {
        fn walk<'a>(node: &'a TreeNode, path: &mut Vec<&'a str>, out: &mut Vec<Vec<&'a str>>) {
            match node {
                TreeNode::Leaf { .. } => out.push(path.clone()),
                TreeNode::Internal { label, children } => {
                    let synthetic = SYNTHETIC_ROOT_LABELS.contains(&label.as_str());
                    if !synthetic {
                        path.push(label);
                    }
                    for c in children {
                        walk(c, path, out);
                    }
                    if !synthetic {
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    /// Checks that the tree annotates exactly the graph's tokens.
    pub fn check_alignment(&self, graph: &DependencyGraph) -> Result<(), AlignmentError> {
        let leaves = self.leaves();
        if leaves.len() != graph.tokens.len() {
            return Err(AlignmentError(format!(
                "{} leaves vs {} tokens",
                leaves.len(),
                graph.tokens.len()
            )));
        }
        for (i, (leaf, token)) in leaves.iter().zip(&graph.tokens).enumerate() {
            if *leaf != token.form {
                return Err(AlignmentError(format!(
                    "leaf {i} is {leaf:?} but token is {:?}",
                    token.form
                )));
            }
        }
        Ok(())
    }

    /// Restricts the tree to a leaf span. The result is a synthetic `ROOT`
    /// holding the maximal complete subtrees covering exactly those leaves,
    /// so leaf order and count always match the sliced dependency graph.
    pub fn slice(&self, span: Range<usize>) -> ConstituencyTree {
        fn collect(
            node: &TreeNode,
            start: usize,
            span: &Range<usize>,
            out: &mut Vec<TreeNode>,
        ) {
            let count = node.leaf_count();
            let end = start + count;
            if start >= span.end || end <= span.start {
                return;
            }
            if start >= span.start && end <= span.end {
                out.push(node.clone());
                return;
            }
            if let TreeNode::Internal { children, .. } = node {
                let mut offset = start;
                for c in children {
                    collect(c, offset, span, out);
                    offset += c.leaf_count();
                }
            }
        }
        let mut children = Vec::new();
        collect(&self.root, 0, &span, &mut children);
        ConstituencyTree {
            root: TreeNode::Internal {
                label: "ROOT".to_string(),
                children,
            },
        }
    }
}

/// Aligns clause strings against token forms, producing one token span per
/// clause. Tokens are assigned to the clause containing their first
/// character; any overflow is absorbed by the last clause.
pub fn douduan_token_spans(douduan: &[String], tokens: &[Token]) -> Vec<Range<usize>> {
    if douduan.is_empty() {
        return Vec::new();
    }
    let mut clause_ends: Vec<usize> = Vec::with_capacity(douduan.len());
    let mut acc = 0usize;
    for d in douduan {
        acc += d.chars().count();
        clause_ends.push(acc);
    }
    let mut spans: Vec<Range<usize>> = Vec::with_capacity(douduan.len());
    let mut clause = 0usize;
    let mut span_start = 0usize;
    let mut char_pos = 0usize;
    for (i, token) in tokens.iter().enumerate() {
        while clause + 1 < clause_ends.len() && char_pos >= clause_ends[clause] {
            spans.push(span_start..i);
            span_start = i;
            clause += 1;
        }
        char_pos += token.form.chars().count();
    }
    spans.push(span_start..tokens.len());
    while spans.len() < douduan.len() {
        let end = tokens.len();
        spans.push(end..end);
    }
    spans
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple_graph() -> DependencyGraph {
        // 张某 打 李四
        DependencyGraph::new(
            vec![
                Token::new("张某", "张某", "PROPN", "NR"),
                Token::new("打", "打", "VERB", "VV"),
                Token::new("李四", "李四", "PROPN", "NR"),
            ],
            vec![
                DepEdge {
                    head: 1,
                    dep: 0,
                    rel: "nsubj".to_string(),
                },
                DepEdge {
                    head: 1,
                    dep: 2,
                    rel: "obj".to_string(),
                },
            ],
            1,
        )
    }

    #[test]
    fn valid_tree_passes_validation() {
        assert_eq!(simple_graph().validate(), Ok(()));
    }

    #[test]
    fn double_headed_token_fails_validation() {
        let mut g = simple_graph();
        g.edges.push(DepEdge {
            head: 0,
            dep: 2,
            rel: "dep".to_string(),
        });
        assert!(matches!(g.validate(), Err(ParseDataError::NotATree(2, 2))));
    }

    #[test]
    fn phrase_yield_keeps_compounds_and_drops_clauses() {
        // 手机 微信 红包 with an attached relative clause 发送
        let g = DependencyGraph::new(
            vec![
                Token::new("张某某", "张某某", "PROPN", "NR"),
                Token::new("发送", "发送", "VERB", "VV"),
                Token::new("的", "的", "PART", "DEC"),
                Token::new("手机", "手机", "NOUN", "NN"),
                Token::new("微信", "微信", "NOUN", "NN"),
                Token::new("红包", "红包", "NOUN", "NN"),
            ],
            vec![
                DepEdge {
                    head: 1,
                    dep: 0,
                    rel: "nsubj".to_string(),
                },
                DepEdge {
                    head: 5,
                    dep: 1,
                    rel: "acl".to_string(),
                },
                DepEdge {
                    head: 1,
                    dep: 2,
                    rel: "mark".to_string(),
                },
                DepEdge {
                    head: 5,
                    dep: 3,
                    rel: "compound".to_string(),
                },
                DepEdge {
                    head: 5,
                    dep: 4,
                    rel: "compound".to_string(),
                },
            ],
            5,
        );
        assert_eq!(g.phrase_yield(5), "手机微信红包");
    }

    #[test]
    fn slicing_reroots_the_clause() {
        let g = simple_graph();
        let s = g.slice(1..3);
        assert_eq!(s.tokens.len(), 2);
        assert_eq!(s.root, 0);
        assert_eq!(s.edges.len(), 1);
        assert_eq!(s.edges[0].rel, "obj");
        s.validate().unwrap();
    }

    #[test]
    fn tree_slice_aligns_with_span() {
        let tree = ConstituencyTree::new(TreeNode::internal(
            "IP",
            vec![
                TreeNode::internal(
                    "IP",
                    vec![
                        TreeNode::pre_terminal("NR", "张某"),
                        TreeNode::pre_terminal("VV", "打"),
                    ],
                ),
                TreeNode::pre_terminal("PU", "，"),
                TreeNode::internal("IP", vec![TreeNode::pre_terminal("VV", "逃逸")]),
                TreeNode::pre_terminal("PU", "。"),
            ],
        ));
        let first = tree.slice(0..3);
        assert_eq!(first.leaves(), vec!["张某", "打", "，"]);
        let second = tree.slice(3..5);
        assert_eq!(second.leaves(), vec!["逃逸", "。"]);
        // Paths skip the synthetic root.
        let paths = second.leaf_paths();
        assert_eq!(paths[0], vec!["IP", "VV"]);
    }

    #[test]
    fn douduan_spans_cover_all_tokens() {
        let douduan = vec!["张某打李四，".to_string(), "逃逸。".to_string()];
        let tokens = vec![
            Token::new("张某", "", "", ""),
            Token::new("打", "", "", ""),
            Token::new("李四", "", "", ""),
            Token::new("，", "", "", ""),
            Token::new("逃逸", "", "", ""),
            Token::new("。", "", "", ""),
        ];
        let spans = douduan_token_spans(&douduan, &tokens);
        assert_eq!(spans, vec![0..4, 4..6]);
    }
}
