//! Byte-level tokenizer for fixture models.
//!
//! Every byte maps to one token, so round-trips are exact and any text is
//! coverable with a 258-entry alphabet (256 bytes + BOS/EOS). Vocabulary
//! ids above the byte range are reserved and never produced.

use super::SubstrateError;

pub type TokenId = u32;

pub const BOS_TOKEN: TokenId = 0;
pub const EOS_TOKEN: TokenId = 1;
const BYTE_BASE: TokenId = 2;

/// Smallest vocabulary that can host the byte alphabet plus specials.
pub const MIN_VOCAB: usize = 258;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ByteTokenizer {
    vocab: usize,
}

impl ByteTokenizer {
    pub fn new(vocab: usize) -> Self {
        assert!(vocab >= MIN_VOCAB, "vocab must cover bytes + specials");
        ByteTokenizer { vocab }
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab
    }

    /// Tokenize text; rejects input that is empty after trimming.
    pub fn tokenize(&self, text: &str) -> Result<Vec<TokenId>, SubstrateError> {
        if text.trim().is_empty() {
            return Err(SubstrateError::EmptyInput);
        }
        Ok(text.bytes().map(|b| BYTE_BASE + b as TokenId).collect())
    }

    /// Inverse of `tokenize`; non-byte ids (specials, reserved) are skipped.
    pub fn detokenize(&self, tokens: &[TokenId]) -> String {
        let bytes: Vec<u8> = tokens
            .iter()
            .filter_map(|&t| {
                if (BYTE_BASE..BYTE_BASE + 256).contains(&t) {
                    Some((t - BYTE_BASE) as u8)
                } else {
                    None
                }
            })
            .collect();
        String::from_utf8_lossy(&bytes).into_owned()
    }

    /// True for ids greedy decoding may emit: bytes and end-of-sequence.
    pub fn is_decodable(&self, token: TokenId) -> bool {
        token == EOS_TOKEN || (BYTE_BASE..BYTE_BASE + 256).contains(&token)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_whitespace() {
        let t = ByteTokenizer::new(512);
        assert!(matches!(t.tokenize(""), Err(SubstrateError::EmptyInput)));
        assert!(matches!(t.tokenize("   \n"), Err(SubstrateError::EmptyInput)));
    }

    #[test]
    fn round_trips_exactly() {
        let t = ByteTokenizer::new(512);
        for s in ["hello world", "Masson trichrome", "a  b\tc", "π ≈ 3.14159"] {
            let toks = t.tokenize(s).unwrap();
            assert_eq!(t.detokenize(&toks), s);
        }
    }

    // Regression value: 12 words, 55 bytes under the byte tokenizer.
    #[test]
    fn fixture_sentence_length_frozen() {
        let t = ByteTokenizer::new(512);
        let s = "the quick brown fox jumps over a lazy dog near old barn";
        assert_eq!(s.split_whitespace().count(), 12);
        assert_eq!(t.tokenize(s).unwrap().len(), 55);
    }

    #[test]
    fn decodable_mask_covers_bytes_and_eos() {
        let t = ByteTokenizer::new(512);
        assert!(t.is_decodable(EOS_TOKEN));
        assert!(t.is_decodable(2));
        assert!(t.is_decodable(257));
        assert!(!t.is_decodable(BOS_TOKEN));
        assert!(!t.is_decodable(258));
        assert!(!t.is_decodable(511));
    }
}
