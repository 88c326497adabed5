//! Rendering and parsing of letters and words.
//!
//! Alphabets of at most 26 letters print as `a`, `b`, `c`, ... and words
//! print as one contiguous string. Larger alphabets print numeric indices
//! separated by spaces. Parsing accepts both forms.

use crate::error::{invalid, Result};
use crate::Letter;

pub fn render_letter(letter: Letter, alphabet_size: usize) -> String {
    if alphabet_size <= 26 {
        ((b'a' + letter as u8) as char).to_string()
    } else {
        letter.to_string()
    }
}

pub fn render_word(word: &[Letter], alphabet_size: usize) -> String {
    if alphabet_size <= 26 {
        word.iter().map(|&l| (b'a' + l as u8) as char).collect()
    } else {
        let parts: Vec<String> = word.iter().map(|l| l.to_string()).collect();
        parts.join(" ")
    }
}

/// Parses a word such as `abba`, `a b b a` or `0 1 1 0`.
///
/// Tokens are separated by whitespace or commas. A token made of lowercase
/// letters contributes one letter per character; a numeric token is a
/// single letter index.
pub fn parse_word(text: &str, alphabet_size: usize) -> Result<Vec<Letter>> {
    let mut word = Vec::new();
    for token in text.split(|c: char| c.is_whitespace() || c == ',') {
        if token.is_empty() {
            continue;
        }
        if token.chars().all(|c| c.is_ascii_digit()) {
            let l: Letter =
                token.parse().map_err(|_| crate::Error::Invalid(format!("bad letter `{token}`")))?;
            word.push(l);
        } else if token.chars().all(|c| c.is_ascii_lowercase()) {
            word.extend(token.bytes().map(|b| (b - b'a') as Letter));
        } else {
            return invalid(format!("bad letter token `{token}`"));
        }
    }
    if let Some(&bad) = word.iter().find(|&&l| l >= alphabet_size) {
        return invalid(format!("letter {bad} out of range for alphabet of size {alphabet_size}"));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_forms_parse() {
        assert_eq!(parse_word("abba", 2).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(parse_word("a b, b a", 2).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(parse_word("0 1 1 0", 2).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(parse_word("", 2).unwrap(), Vec::<Letter>::new());
        assert!(parse_word("abc", 2).is_err());
        assert!(parse_word("A", 2).is_err());
    }

    #[test]
    fn render_round_trips() {
        let w = vec![0, 1, 2, 1];
        assert_eq!(render_word(&w, 3), "abcb");
        assert_eq!(parse_word(&render_word(&w, 3), 3).unwrap(), w);
        assert_eq!(render_word(&w, 30), "0 1 2 1");
        assert_eq!(parse_word(&render_word(&w, 30), 30).unwrap(), w);
    }
}
