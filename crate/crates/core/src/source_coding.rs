//! Lossless source codes: optimal prefix-code construction, the codec, and
//! length diagnostics.
//!
//! Codewords are ASCII 0/1 strings. Construction is deterministic: merges
//! take the two lowest-probability nodes, ties broken by smallest symbol
//! index and then earliest-created internal node, and the higher-probability
//! branch receives bit 1 (ties keep the earlier node on 1). Swapping 0s and
//! 1s everywhere would yield an equally good code.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::dist::{entropy, Distribution};
use crate::error::{Error, Result};
use crate::space::Space;

/// Cap on |X|^n block-code alphabets.
pub const BLOCK_SYMBOL_CAP: u128 = 1 << 16;

/// A prefix-free binary code over a labeled outcome space.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeBook {
    space: Space,
    codewords: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CodeBookJson {
    labels: Vec<String>,
    codewords: Vec<String>,
}

impl CodeBook {
    /// Validate one codeword per outcome: binary alphabet and prefix-free
    /// (checked structurally by trie insertion).
    pub fn new(space: Space, codewords: Vec<String>) -> Result<Self> {
        if codewords.len() != space.len() {
            return Err(Error::LengthMismatch {
                weights: codewords.len(),
                labels: space.len(),
            });
        }
        for word in &codewords {
            if let Some((position, found)) =
                word.chars().enumerate().find(|(_, c)| *c != '0' && *c != '1')
            {
                return Err(Error::InvalidBit { found, position });
            }
        }
        Trie::build(&codewords)?;
        Ok(CodeBook { space, codewords })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn codewords(&self) -> &[String] {
        &self.codewords
    }

    pub fn codeword(&self, index: usize) -> &str {
        &self.codewords[index]
    }

    /// Kraft sum 2^(-len) over all codewords; <= 1 for prefix codes, = 1 for
    /// complete ones.
    pub fn kraft_sum(&self) -> f64 {
        self.codewords
            .iter()
            .map(|w| 0.5f64.powi(w.len() as i32))
            .sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CodeBookJson =
            serde_json::from_str(text).map_err(|e| Error::space_mismatch(e.to_string()))?;
        CodeBook::new(Space::new(raw.labels)?, raw.codewords)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CodeBookJson {
            labels: self.space.labels().to_vec(),
            codewords: self.codewords.clone(),
        })
        .expect("codebook serializes")
    }
}

/// Binary trie over codewords; doubles as the prefix-property check and the
/// streaming decoder.
struct Trie {
    nodes: Vec<TrieNode>,
}

#[derive(Default, Clone)]
struct TrieNode {
    children: [Option<usize>; 2],
    symbol: Option<usize>,
}

impl Trie {
    fn build(codewords: &[String]) -> Result<Trie> {
        let mut trie = Trie {
            nodes: vec![TrieNode::default()],
        };
        for (symbol, word) in codewords.iter().enumerate() {
            let mut at = 0usize;
            for c in word.chars() {
                if trie.nodes[at].symbol.is_some() {
                    // An existing codeword is a strict prefix of this one.
                    return Err(Error::NotPrefixFree {
                        codeword: codewords[trie.nodes[at].symbol.unwrap()].clone(),
                        other: word.clone(),
                    });
                }
                let bit = (c == '1') as usize;
                at = match trie.nodes[at].children[bit] {
                    Some(next) => next,
                    None => {
                        trie.nodes.push(TrieNode::default());
                        let next = trie.nodes.len() - 1;
                        trie.nodes[at].children[bit] = Some(next);
                        next
                    }
                };
            }
            if trie.nodes[at].symbol.is_some() || trie.nodes[at].children.iter().any(Option::is_some)
            {
                let clash = trie.nodes[at].symbol.unwrap_or(symbol);
                return Err(Error::NotPrefixFree {
                    codeword: word.clone(),
                    other: codewords[clash].clone(),
                });
            }
            trie.nodes[at].symbol = Some(symbol);
        }
        Ok(trie)
    }
}

/// Optimal prefix code for `d` (expected length L with H <= L < H + 1).
///
/// Zero-probability symbols still receive codewords (they surface as the
/// deepest leaves) so decoding is total. A single-symbol alphabet gets the
/// one-bit codeword "0": its entropy is 0 but a code must emit something.
pub fn huffman_code(d: &Distribution) -> CodeBook {
    let k = d.len();
    if k == 1 {
        return CodeBook {
            space: d.space().clone(),
            codewords: vec!["0".to_string()],
        };
    }

    enum Node {
        Leaf(usize),
        Internal { high: usize, low: usize },
    }
    let mut nodes: Vec<Node> = (0..k).map(Node::Leaf).collect();

    // Heap keys: (probability, tie order). Leaves use their symbol index,
    // internal nodes |X| + creation counter, so ordering is total.
    #[derive(PartialEq)]
    struct Key {
        prob: f64,
        order: usize,
        node: usize,
    }
    impl Eq for Key {}
    impl PartialOrd for Key {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Key {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.prob
                .total_cmp(&other.prob)
                .then(self.order.cmp(&other.order))
        }
    }

    let mut heap: BinaryHeap<Reverse<Key>> = (0..k)
        .map(|i| {
            Reverse(Key {
                prob: d.prob(i),
                order: i,
                node: i,
            })
        })
        .collect();
    let mut created = 0usize;
    while heap.len() > 1 {
        let Reverse(a) = heap.pop().unwrap();
        let Reverse(b) = heap.pop().unwrap();
        // a popped first, so a.prob <= b.prob; bit 1 goes to the higher
        // probability side, to a on ties.
        let (high, low) = if b.prob > a.prob {
            (b.node, a.node)
        } else {
            (a.node, b.node)
        };
        nodes.push(Node::Internal { high, low });
        heap.push(Reverse(Key {
            prob: a.prob + b.prob,
            order: k + created,
            node: nodes.len() - 1,
        }));
        created += 1;
    }

    let root = heap.pop().unwrap().0.node;
    let mut codewords = vec![String::new(); k];
    let mut stack = vec![(root, String::new())];
    while let Some((at, prefix)) = stack.pop() {
        match nodes[at] {
            Node::Leaf(symbol) => codewords[symbol] = prefix,
            Node::Internal { high, low } => {
                stack.push((high, format!("{prefix}1")));
                stack.push((low, format!("{prefix}0")));
            }
        }
    }
    CodeBook {
        space: d.space().clone(),
        codewords,
    }
}

/// Concatenate the codewords of a symbol sequence.
pub fn encode<S: AsRef<str>>(
    cb: &CodeBook,
    sequence: impl IntoIterator<Item = S>,
) -> Result<String> {
    let mut bits = String::new();
    for symbol in sequence {
        let index =
            cb.space
                .index_of(symbol.as_ref())
                .map_err(|_| Error::UnknownSymbol {
                    label: symbol.as_ref().to_string(),
                })?;
        bits.push_str(&cb.codewords[index]);
    }
    Ok(bits)
}

/// Decode a concatenated bit string back to symbol labels.
pub fn decode(cb: &CodeBook, bits: &str) -> Result<Vec<String>> {
    let trie = Trie::build(&cb.codewords).expect("codebook is prefix-free");
    let mut out = Vec::new();
    let mut at = 0usize;
    for (position, c) in bits.chars().enumerate() {
        let bit = match c {
            '0' => 0usize,
            '1' => 1,
            found => return Err(Error::InvalidBit { found, position }),
        };
        at = trie.nodes[at].children[bit].ok_or(Error::TrailingBits {
            decoded: out.len(),
        })?;
        if let Some(symbol) = trie.nodes[at].symbol {
            out.push(cb.space.label(symbol).to_string());
            at = 0;
        }
    }
    if at != 0 {
        return Err(Error::TrailingBits {
            decoded: out.len(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CodeDiagnostics {
    /// Probability-weighted codeword length, bits per symbol.
    pub expected_length_bits: f64,
    pub kraft_sum: f64,
    /// expected length minus the source entropy; >= 0 for any prefix code.
    pub redundancy_of_code_bits: f64,
}

pub fn code_diagnostics(cb: &CodeBook, d: &Distribution) -> Result<CodeDiagnostics> {
    if cb.space() != d.space() {
        return Err(Error::space_mismatch(
            "codebook and distribution are over different spaces",
        ));
    }
    let expected_length_bits = d
        .probs()
        .iter()
        .zip(cb.codewords.iter())
        .map(|(&p, w)| p * w.len() as f64)
        .sum();
    Ok(CodeDiagnostics {
        expected_length_bits,
        kraft_sum: cb.kraft_sum(),
        redundancy_of_code_bits: expected_length_bits - entropy(d),
    })
}

/// Huffman code over length-`n` blocks: per-symbol expected length L_n / n
/// obeys H <= L_n / n < H + 1/n.
pub fn block_code(d: &Distribution, n: usize) -> Result<CodeBook> {
    assert!(n >= 1);
    let need = (d.len() as u128).pow(n as u32);
    if need > BLOCK_SYMBOL_CAP {
        return Err(Error::SizeCapExceeded {
            need,
            cap: BLOCK_SYMBOL_CAP,
            context: format!("{n}-fold block code alphabet"),
        });
    }
    Ok(huffman_code(&d.product(n)))
}
