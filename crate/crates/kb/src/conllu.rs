//! CoNLL-U reading and writing for dependency annotations. One sentence
//! block per fact sentence; `# doc_id` and `# sent_id` comment lines carry
//! the join keys back to the corpus.

use std::io::{BufRead, Write};

use jdd_core::parse::{DepEdge, DependencyGraph, Token};
use jdd_core::Diagnostic;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct ConlluSentence {
    pub doc_id: String,
    pub sent_id: usize,
    pub graph: DependencyGraph,
}

#[derive(Debug, Error)]
pub enum ConlluError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Reads every well-formed sentence block; malformed blocks become
/// diagnostics with their line numbers and reading continues.
pub fn read_conllu(
    reader: impl BufRead,
    diags: &mut Vec<Diagnostic>,
) -> Result<Vec<ConlluSentence>, ConlluError> {
    let mut sentences = Vec::new();
    let mut block: Vec<(usize, String)> = Vec::new();
    let mut block_start = 1usize;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            if !block.is_empty() {
                parse_block(&block, block_start, &mut sentences, diags);
                block.clear();
            }
            block_start = line_no + 1;
        } else {
            if block.is_empty() {
                block_start = line_no;
            }
            block.push((line_no, line));
        }
    }
    if !block.is_empty() {
        parse_block(&block, block_start, &mut sentences, diags);
    }
    Ok(sentences)
}

fn parse_block(
    block: &[(usize, String)],
    start: usize,
    sentences: &mut Vec<ConlluSentence>,
    diags: &mut Vec<Diagnostic>,
) {
    let scope = format!("conllu block at line {start}");
    let mut doc_id: Option<String> = None;
    let mut sent_id: Option<usize> = None;
    let mut tokens: Vec<Token> = Vec::new();
    let mut heads: Vec<(usize, String)> = Vec::new();
    for (line_no, line) in block {
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                match key.trim() {
                    "doc_id" => doc_id = Some(value.trim().to_string()),
                    "sent_id" => sent_id = value.trim().parse().ok(),
                    _ => {}
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            diags.push(Diagnostic::new(
                scope.clone(),
                format!("line {line_no}: expected 10 columns, got {}", cols.len()),
            ));
            return;
        }
        // Multiword-token ranges and empty nodes are not produced by the
        // upstream toolchain; reject rather than misalign.
        let Ok(id) = cols[0].parse::<usize>() else {
            diags.push(Diagnostic::new(
                scope.clone(),
                format!("line {line_no}: unsupported token id {:?}", cols[0]),
            ));
            return;
        };
        if id != tokens.len() + 1 {
            diags.push(Diagnostic::new(
                scope.clone(),
                format!("line {line_no}: token ids must be consecutive from 1"),
            ));
            return;
        }
        let Ok(head) = cols[6].parse::<usize>() else {
            diags.push(Diagnostic::new(
                scope.clone(),
                format!("line {line_no}: bad head {:?}", cols[6]),
            ));
            return;
        };
        let lemma = if cols[2] == "_" { "" } else { cols[2] };
        tokens.push(Token::new(cols[1], lemma, cols[3], cols[4]));
        heads.push((head, cols[7].to_string()));
    }
    if tokens.is_empty() {
        return;
    }
    let (Some(doc_id), Some(sent_id)) = (doc_id, sent_id) else {
        diags.push(Diagnostic::new(
            scope,
            "missing doc_id or sent_id comment".to_string(),
        ));
        return;
    };
    let mut root: Option<usize> = None;
    let mut edges = Vec::new();
    for (dep, (head, rel)) in heads.into_iter().enumerate() {
        if head == 0 {
            if root.is_some() {
                diags.push(Diagnostic::new(scope, "multiple root tokens".to_string()));
                return;
            }
            root = Some(dep);
        } else {
            edges.push(DepEdge {
                head: head - 1,
                dep,
                rel,
            });
        }
    }
    let Some(root) = root else {
        diags.push(Diagnostic::new(scope, "no root token".to_string()));
        return;
    };
    let graph = DependencyGraph::new(tokens, edges, root);
    if let Err(e) = graph.validate() {
        diags.push(Diagnostic::new(scope, format!("invalid dependency tree: {e}")));
        return;
    }
    sentences.push(ConlluSentence {
        doc_id,
        sent_id,
        graph,
    });
}

pub fn write_conllu(
    mut w: impl Write,
    sentences: &[(String, usize, &DependencyGraph)],
) -> std::io::Result<()> {
    for (doc_id, sent_id, graph) in sentences {
        writeln!(w, "# doc_id = {doc_id}")?;
        writeln!(w, "# sent_id = {sent_id}")?;
        let text: String = graph.tokens.iter().map(|t| t.form.as_str()).collect();
        writeln!(w, "# text = {text}")?;
        for (i, token) in graph.tokens.iter().enumerate() {
            let (head, rel) = if i == graph.root {
                (0, "root".to_string())
            } else {
                graph
                    .edges
                    .iter()
                    .find(|e| e.dep == i)
                    .map(|e| (e.head + 1, e.rel.clone()))
                    .unwrap_or((0, "root".to_string()))
            };
            let lemma = if token.lemma.is_empty() {
                "_"
            } else {
                &token.lemma
            };
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t_\t{}\t{}\t_\t_",
                i + 1,
                token.form,
                lemma,
                token.upos,
                token.xpos,
                head,
                rel
            )?;
        }
        writeln!(w)?;
    }
    Ok(())
}
