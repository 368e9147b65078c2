//! Recursive character splitting with overlap.
//!
//! Oversized text is split on a separator hierarchy (paragraph break,
//! newline, space) before falling back to a fixed-step character window.
//! Offsets are measured in Unicode scalar values so a chunk boundary can
//! never split a character.

use serde::{Deserialize, Serialize};

/// Separator hierarchy, tried in order. The empty string stands for the
/// character-window fallback.
const SEPARATORS: [&str; 3] = ["\n\n", "\n", " "];

/// Default chunk size in characters.
pub const DEFAULT_CHUNK_SIZE: usize = 500;
/// Default overlap between consecutive window chunks, in characters.
pub const DEFAULT_OVERLAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkParams {
    pub chunk_size: usize,
    pub overlap: usize,
}

impl Default for ChunkParams {
    fn default() -> Self {
        Self { chunk_size: DEFAULT_CHUNK_SIZE, overlap: DEFAULT_OVERLAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid chunk params: require 0 < overlap ({overlap}) < chunk_size ({chunk_size})")]
pub struct InvalidChunkParams {
    pub chunk_size: usize,
    pub overlap: usize,
}

impl ChunkParams {
    pub fn new(chunk_size: usize, overlap: usize) -> Result<Self, InvalidChunkParams> {
        if overlap == 0 || overlap >= chunk_size {
            return Err(InvalidChunkParams { chunk_size, overlap });
        }
        Ok(Self { chunk_size, overlap })
    }
}

/// A chunk of a larger text: its start position (in characters) and content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextChunk {
    pub start_offset: usize,
    pub text: String,
}

/// Split `text` into chunks of at most `params.chunk_size` characters.
///
/// Separator-based splits keep the separator attached to the preceding
/// chunk, so the chunks jointly cover every character of the input. Overlap
/// is applied only inside oversized separator-free segments, where a sliding
/// window of step `chunk_size - overlap` takes over.
pub fn chunk_text(text: &str, params: ChunkParams) -> Result<Vec<TextChunk>, InvalidChunkParams> {
    ChunkParams::new(params.chunk_size, params.overlap)?;
    let chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return Ok(Vec::new());
    }
    let spans = split_range(&chars, 0..chars.len(), 0, params);
    Ok(spans
        .into_iter()
        .map(|r| TextChunk {
            start_offset: r.start,
            text: chars[r.clone()].iter().collect(),
        })
        .collect())
}

type Span = std::ops::Range<usize>;

fn split_range(chars: &[char], range: Span, level: usize, params: ChunkParams) -> Vec<Span> {
    if range.len() <= params.chunk_size {
        return vec![range];
    }
    for lvl in level..SEPARATORS.len() {
        let sep: Vec<char> = SEPARATORS[lvl].chars().collect();
        let pieces = split_inclusive_on(chars, range.clone(), &sep);
        if pieces.len() > 1 || (pieces.len() == 1 && pieces[0] != range) {
            let sub: Vec<Span> = pieces
                .into_iter()
                .flat_map(|p| split_range(chars, p, lvl + 1, params))
                .collect();
            return merge_adjacent(sub, params.chunk_size);
        }
        if contains_subslice(&chars[range.clone()], &sep) {
            // Single piece identical to the input range (trailing separator):
            // descend a level so recursion always makes progress.
            let sub = split_range(chars, range, lvl + 1, params);
            return merge_adjacent(sub, params.chunk_size);
        }
    }
    sliding_window(range, params)
}

/// Split a range at each occurrence of `sep`, keeping the separator attached
/// to the preceding piece. Returns one piece covering the whole range when
/// the separator does not occur.
fn split_inclusive_on(chars: &[char], range: Span, sep: &[char]) -> Vec<Span> {
    let mut pieces = Vec::new();
    let mut start = range.start;
    let mut cursor = range.start;
    while cursor + sep.len() <= range.end {
        if &chars[cursor..cursor + sep.len()] == sep {
            let end = cursor + sep.len();
            pieces.push(start..end);
            start = end;
            cursor = end;
        } else {
            cursor += 1;
        }
    }
    if start < range.end {
        pieces.push(start..range.end);
    }
    if pieces.is_empty() {
        pieces.push(range);
    }
    pieces
}

fn contains_subslice(haystack: &[char], needle: &[char]) -> bool {
    if needle.is_empty() || haystack.len() < needle.len() {
        return false;
    }
    haystack.windows(needle.len()).any(|w| w == needle)
}

/// Greedily merge contiguous neighbors while the combined length stays within
/// the chunk size. Overlapping window spans are never contiguous, so they are
/// left untouched.
fn merge_adjacent(spans: Vec<Span>, chunk_size: usize) -> Vec<Span> {
    let mut merged: Vec<Span> = Vec::with_capacity(spans.len());
    for span in spans {
        match merged.last_mut() {
            Some(last) if last.end == span.start && last.len() + span.len() <= chunk_size => {
                last.end = span.end;
            }
            _ => merged.push(span),
        }
    }
    merged
}

fn sliding_window(range: Span, params: ChunkParams) -> Vec<Span> {
    let step = params.chunk_size - params.overlap;
    let mut spans = Vec::new();
    let mut start = range.start;
    loop {
        let end = (start + params.chunk_size).min(range.end);
        spans.push(start..end);
        if end == range.end {
            break;
        }
        start += step;
    }
    spans
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spans(chunks: &[TextChunk]) -> Vec<(usize, usize)> {
        chunks.iter().map(|c| (c.start_offset, c.text.chars().count())).collect()
    }

    /// Independent sliding-window oracle for separator-free text.
    fn window_oracle(len: usize, chunk_size: usize, overlap: usize) -> Vec<(usize, usize)> {
        let step = chunk_size - overlap;
        let mut out = Vec::new();
        let mut start = 0;
        loop {
            let end = (start + chunk_size).min(len);
            out.push((start, end - start));
            if end == len {
                break;
            }
            start += step;
        }
        out
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ChunkParams::new(500, 0).is_err());
        assert!(ChunkParams::new(100, 100).is_err());
        assert!(ChunkParams::new(100, 150).is_err());
        assert!(ChunkParams::new(500, 100).is_ok());
    }

    #[test]
    fn short_text_is_one_chunk() {
        let text = "x".repeat(400);
        let chunks = chunk_text(&text, ChunkParams::default()).unwrap();
        assert_eq!(spans(&chunks), vec![(0, 400)]);
        assert_eq!(chunks[0].text, text);
    }

    #[test]
    fn separator_free_text_uses_window() {
        let text = "x".repeat(1200);
        let chunks = chunk_text(&text, ChunkParams::default()).unwrap();
        assert_eq!(spans(&chunks), vec![(0, 500), (400, 500), (800, 400)]);
        assert_eq!(spans(&chunks), window_oracle(1200, 500, 100));
    }

    #[test]
    fn splits_at_paragraph_break() {
        let text = format!("{}\n\n{}", "a".repeat(300), "b".repeat(300));
        let chunks = chunk_text(&text, ChunkParams::default()).unwrap();
        // Separator-priority oracle: the break wins over the character window,
        // with the separator attached to the leading chunk.
        assert_eq!(spans(&chunks), vec![(0, 302), (302, 300)]);
        assert!(chunks[0].text.ends_with("\n\n"));
        assert!(chunks[1].text.starts_with('b'));
    }

    #[test]
    fn newline_is_used_when_no_paragraph_break() {
        let text = format!("{}\n{}", "a".repeat(300), "b".repeat(300));
        let chunks = chunk_text(&text, ChunkParams::default()).unwrap();
        assert_eq!(spans(&chunks), vec![(0, 301), (301, 300)]);
    }

    #[test]
    fn small_pieces_merge_up_to_chunk_size() {
        // Three paragraphs of 100 chars merge pairwise under the 500 limit.
        let text = format!("{}\n\n{}\n\n{}", "a".repeat(100), "b".repeat(100), "c".repeat(400));
        let chunks = chunk_text(&text, ChunkParams::default()).unwrap();
        assert_eq!(spans(&chunks), vec![(0, 204), (204, 400)]);
    }

    #[test]
    fn empty_text_yields_no_chunks() {
        assert!(chunk_text("", ChunkParams::default()).unwrap().is_empty());
    }

    #[test]
    fn offsets_count_chars_not_bytes() {
        let text = "é".repeat(600);
        let chunks = chunk_text(&text, ChunkParams::default()).unwrap();
        assert_eq!(spans(&chunks), vec![(0, 500), (400, 200)]);
        assert_eq!(chunks[1].text.chars().count(), 200);
    }

    fn coverage_holds(text: &str, chunks: &[TextChunk]) -> bool {
        let n = text.chars().count();
        let mut covered = vec![false; n];
        for c in chunks {
            let len = c.text.chars().count();
            for i in c.start_offset..c.start_offset + len {
                covered[i] = true;
            }
        }
        covered.into_iter().all(|b| b)
    }

    proptest! {
        #[test]
        fn invariants_hold_on_random_text(
            text in proptest::collection::vec(
                prop_oneof![
                    Just('a'), Just('b'), Just(' '), Just('\n'),
                    Just('é'), Just('字'),
                ],
                0..3000,
            ).prop_map(|v| v.into_iter().collect::<String>()),
        ) {
            let params = ChunkParams::default();
            let chunks = chunk_text(&text, params).unwrap();

            for c in &chunks {
                let len = c.text.chars().count();
                prop_assert!(len > 0 && len <= params.chunk_size);
            }
            for w in chunks.windows(2) {
                prop_assert!(w[0].start_offset < w[1].start_offset);
            }
            prop_assert!(coverage_holds(&text, &chunks));

            // Chunk text matches the source at its offset.
            let chars: Vec<char> = text.chars().collect();
            for c in &chunks {
                let len = c.text.chars().count();
                let expected: String = chars[c.start_offset..c.start_offset + len].iter().collect();
                prop_assert_eq!(&c.text, &expected);
            }

            // Determinism.
            prop_assert_eq!(chunks, chunk_text(&text, params).unwrap());
        }
    }
}
