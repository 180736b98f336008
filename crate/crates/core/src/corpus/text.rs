//! Word normalization for cover transcripts.

use super::porter;
use super::stopwords::is_stop_word;

const MONTH_SEASONS: [(&str, &str); 12] = [
    ("january", "winter"),
    ("february", "winter"),
    ("march", "spring"),
    ("april", "spring"),
    ("may", "spring"),
    ("june", "summer"),
    ("july", "summer"),
    ("august", "summer"),
    ("september", "fall"),
    ("october", "fall"),
    ("november", "fall"),
    ("december", "winter"),
];

/// Northern-hemisphere meteorological season for a lowercase month name.
pub fn month_to_season(word: &str) -> Option<&'static str> {
    MONTH_SEASONS.iter().find(|(m, _)| *m == word).map(|(_, s)| *s)
}

fn is_dash(c: char) -> bool {
    matches!(c, '-' | '\u{2010}'..='\u{2015}' | '\u{2212}')
}

/// Normalize one whitespace-delimited surface form. Hyphenated compounds are
/// split and each piece normalized independently, so this can yield several
/// tokens; filtered pieces yield nothing.
pub fn normalize_word(raw: &str) -> Vec<String> {
    raw.split(is_dash).filter_map(normalize_piece).collect()
}

/// Normalize a single hyphen-free piece to at most one token.
///
/// The pipeline is iterated to a fixed point so that normalizing an emitted
/// token returns it unchanged (Porter's stemmer is not idempotent on its own:
/// `agreed -> agre -> agr`).
pub fn normalize_piece(piece: &str) -> Option<String> {
    let mut current = pipeline_once(piece)?;
    for _ in 0..16 {
        let next = pipeline_once(&current)?;
        if next == current {
            return Some(current);
        }
        current = next;
    }
    Some(current)
}

fn pipeline_once(piece: &str) -> Option<String> {
    let lower = piece.to_lowercase();
    let letters: String = lower.chars().filter(|c| c.is_ascii_alphabetic()).collect();
    if letters.is_empty() {
        return None;
    }
    // months map before stop filtering ("may" is also a stop word)
    let word = match month_to_season(&letters) {
        Some(season) => season,
        None => {
            let trimmed = lower.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'');
            if is_stop_word(trimmed) || is_stop_word(&letters) {
                return None;
            }
            &letters
        }
    };
    let stemmed = porter::stem(word);
    (!is_stop_word(&stemmed)).then_some(stemmed)
}

/// Tokenize a transcript: split on whitespace, normalize each form.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().flat_map(normalize_word).collect()
}
