//! Deterministic rule-based answer matcher.
//!
//! The cascade: N/A handling, normalized exact match, yes/no polarity,
//! single-number equivalence (number words and digit forms, with a relative
//! tolerance when the task flags its answer as an estimate), list matching
//! (unordered multiset or exact sequence per task flag), content-token
//! overlap with negation-polarity agreement, and finally containment, which
//! only ever earns `partially correct`.

use std::collections::BTreeSet;

use crate::taskset::AnswerFlags;

use super::Label;

/// Relative tolerance applied when a task flags its reference as an estimate.
pub const ESTIMATE_REL_TOL: f64 = 0.10;
/// Minimum content-token Jaccard overlap for a semantic match.
pub const OVERLAP_THRESHOLD: f64 = 0.6;

const BOILERPLATE_PREFIXES: &[&str] = &[
    "confirmation code:",
    "the confirmation code is",
    "the answer is",
    "final answer:",
    "answer:",
];

const FILLER_WORDS: &[&str] = &[
    "around", "approximately", "about", "roughly", "nearly", "almost", "circa", "times", "time",
    "usd", "dollars", "dollar",
];

const STOPWORDS: &[&str] = &[
    "the", "a", "an", "is", "are", "was", "were", "be", "been", "being", "in", "on", "of", "to",
    "for", "with", "any", "it", "its", "does", "do", "did", "that", "this", "there", "and", "or",
    "as", "at", "by", "from", "has", "have", "had",
];

const NEGATION_WORDS: &[&str] = &["no", "not", "none", "never", "without", "neither", "nor", "cannot"];

const YES_WORDS: &[&str] = &["yes", "yeah", "yep", "true"];
const NO_WORDS: &[&str] = &["no", "nope", "false"];

pub fn rule_based_match(reference: &str, candidate: &str, flags: AnswerFlags) -> Label {
    let ref_norm = normalize(reference);
    let cand_norm = normalize(candidate);

    // 'N/A' is the special not-achievable sequence: it only matches itself
    if ref_norm == "n/a" || cand_norm == "n/a" {
        return if ref_norm == cand_norm { Label::Correct } else { Label::Incorrect };
    }

    if !ref_norm.is_empty() && ref_norm == cand_norm {
        return Label::Correct;
    }
    if cand_norm.is_empty() {
        return Label::Incorrect;
    }

    // bare yes/no answers decide on polarity
    if let (Some(a), Some(b)) = (leading_polarity(&ref_norm), leading_polarity(&cand_norm)) {
        return if a == b { Label::Correct } else { Label::Incorrect };
    }

    // a single-number reference compares numerically
    let ref_numbers = extract_numbers(&ref_norm);
    if ref_numbers.len() == 1 && numeric_only(&ref_norm) {
        let target = ref_numbers[0];
        let cand_numbers = extract_numbers(&cand_norm);
        if let Some(&value) = cand_numbers.first() {
            let matches = if flags.estimate {
                (value - target).abs() <= ESTIMATE_REL_TOL * target.abs().max(f64::MIN_POSITIVE)
            } else {
                (value - target).abs() <= 1e-9 * target.abs().max(1.0)
            };
            return if matches { Label::Correct } else { Label::Incorrect };
        }
    }

    // list answers: multiset equality when flagged unordered, else sequence
    let ref_items = split_list(&ref_norm);
    if ref_items.len() >= 2 {
        let cand_items = split_list(&cand_norm);
        let equal = if flags.unordered {
            let mut a = ref_items.clone();
            let mut b = cand_items.clone();
            a.sort();
            b.sort();
            a == b
        } else {
            ref_items == cand_items
        };
        return if equal { Label::Correct } else { Label::Incorrect };
    }

    // free-form answers: content-token overlap with agreeing polarity
    let (ref_tokens, ref_negated) = content_tokens(&ref_norm);
    let (cand_tokens, cand_negated) = content_tokens(&cand_norm);
    if ref_tokens.len() >= 2 && cand_tokens.len() >= 2 && ref_negated == cand_negated {
        let intersection = ref_tokens.intersection(&cand_tokens).count() as f64;
        let union = ref_tokens.union(&cand_tokens).count() as f64;
        if union > 0.0 && intersection / union >= OVERLAP_THRESHOLD {
            return Label::Correct;
        }
    }

    if (cand_norm.len() >= 2 && ref_norm.contains(&cand_norm))
        || (ref_norm.len() >= 2 && cand_norm.contains(&ref_norm))
    {
        return Label::PartiallyCorrect;
    }
    Label::Incorrect
}

/// Casefold, trim, strip a boilerplate prefix and trailing punctuation,
/// collapse whitespace.
fn normalize(s: &str) -> String {
    let mut out = s.trim().to_lowercase();
    out = out.split_whitespace().collect::<Vec<_>>().join(" ");
    for prefix in BOILERPLATE_PREFIXES {
        if let Some(rest) = out.strip_prefix(prefix) {
            out = rest.trim_start().to_string();
            break;
        }
    }
    while out.ends_with(['.', '!', '?']) {
        out.pop();
    }
    out.trim().to_string()
}

fn leading_polarity(s: &str) -> Option<bool> {
    let first: String = s
        .chars()
        .take_while(|c| c.is_alphanumeric())
        .collect::<String>();
    // require the whole answer to read as a polar statement: a bare word or
    // a short sentence starting with "yes,"/"no," style
    let is_sentence_start = s.len() == first.len()
        || s.as_bytes().get(first.len()) == Some(&b',')
        || (s.as_bytes().get(first.len()) == Some(&b' ')
            && matches!(s.split_whitespace().nth(1), Some("it" | "they" | "he" | "she" | "i")));
    if !is_sentence_start {
        return None;
    }
    if YES_WORDS.contains(&first.as_str()) {
        Some(true)
    } else if NO_WORDS.contains(&first.as_str()) {
        Some(false)
    } else {
        None
    }
}

/// Parse a token into a plain number, accepting comma grouping.
fn parse_number_token(token: &str) -> Option<f64> {
    let cleaned = token.trim_matches(|c: char| !c.is_ascii_digit() && c != '.' && c != '-' && c != ',');
    if cleaned.is_empty() {
        return None;
    }
    let no_commas = cleaned.replace(',', "");
    if !no_commas.chars().next().map(|c| c.is_ascii_digit() || c == '-').unwrap_or(false) {
        return None;
    }
    if !no_commas.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '-') {
        return None;
    }
    no_commas.parse().ok()
}

fn word_number(token: &str) -> Option<f64> {
    let value = match token {
        "zero" => 0.0,
        "one" => 1.0,
        "two" => 2.0,
        "three" => 3.0,
        "four" => 4.0,
        "five" => 5.0,
        "six" => 6.0,
        "seven" => 7.0,
        "eight" => 8.0,
        "nine" => 9.0,
        "ten" => 10.0,
        "eleven" => 11.0,
        "twelve" => 12.0,
        "thirteen" => 13.0,
        "fourteen" => 14.0,
        "fifteen" => 15.0,
        "sixteen" => 16.0,
        "seventeen" => 17.0,
        "eighteen" => 18.0,
        "nineteen" => 19.0,
        "twenty" => 20.0,
        "thirty" => 30.0,
        "forty" => 40.0,
        "fifty" => 50.0,
        "sixty" => 60.0,
        "seventy" => 70.0,
        "eighty" => 80.0,
        "ninety" => 90.0,
        _ => return None,
    };
    Some(value)
}

fn magnitude(token: &str) -> Option<f64> {
    match token {
        "hundred" => Some(1e2),
        "thousand" => Some(1e3),
        "million" => Some(1e6),
        "billion" => Some(1e9),
        _ => None,
    }
}

/// Numbers in reading order, composing magnitude words: "2.5 million" is one
/// value, "two hundred" likewise.
fn extract_numbers(s: &str) -> Vec<f64> {
    let mut numbers = Vec::new();
    let mut current: Option<f64> = None;
    for token in s.split_whitespace() {
        let word = token.trim_matches(|c: char| !c.is_alphanumeric() && c != '.' && c != ',');
        if let Some(mag) = magnitude(word) {
            let base = current.take().unwrap_or(1.0);
            current = Some(base * mag);
        } else if let Some(n) = parse_number_token(word).or_else(|| word_number(word)) {
            if let Some(prev) = current.take() {
                numbers.push(prev);
            }
            current = Some(n);
        } else if let Some(prev) = current.take() {
            numbers.push(prev);
        }
    }
    if let Some(prev) = current.take() {
        numbers.push(prev);
    }
    numbers
}

/// True when every token is a number, a magnitude word, or numeric filler.
fn numeric_only(s: &str) -> bool {
    s.split_whitespace().all(|token| {
        let word = token.trim_matches(|c: char| !c.is_alphanumeric() && c != '.' && c != ',');
        word.is_empty()
            || parse_number_token(word).is_some()
            || word_number(word).is_some()
            || magnitude(word).is_some()
            || FILLER_WORDS.contains(&word)
    })
}

/// Split a normalized answer into list items on commas/semicolons, dropping
/// a leading "and"; "a and b" with no commas splits on the conjunction.
fn split_list(s: &str) -> Vec<String> {
    let mut items: Vec<String> = s
        .split([',', ';'])
        .map(|item| {
            item.trim()
                .strip_prefix("and ")
                .unwrap_or(item.trim())
                .trim()
                .to_string()
        })
        .filter(|item| !item.is_empty())
        .collect();
    if items.len() == 1 {
        let parts: Vec<&str> = items[0].split(" and ").collect();
        if parts.len() == 2 {
            items = parts.iter().map(|p| p.trim().to_string()).collect();
        }
    }
    items
}

fn stem(word: &str) -> String {
    if word.len() > 4 && word.ends_with("ing") {
        word[..word.len() - 3].to_string()
    } else if word.len() > 3 && word.ends_with("ed") {
        word[..word.len() - 2].to_string()
    } else if word.len() > 3 && word.ends_with('s') && !word.ends_with("ss") {
        word[..word.len() - 1].to_string()
    } else {
        word.to_string()
    }
}

/// Stemmed content tokens plus whether the text is negated.
fn content_tokens(s: &str) -> (BTreeSet<String>, bool) {
    let expanded = s.replace("n't", " not");
    let mut tokens = BTreeSet::new();
    let mut negated = false;
    for raw in expanded.split(|c: char| !c.is_alphanumeric()) {
        if raw.is_empty() {
            continue;
        }
        if NEGATION_WORDS.contains(&raw) {
            negated = true;
            continue;
        }
        if STOPWORDS.contains(&raw) || FILLER_WORDS.contains(&raw) {
            continue;
        }
        tokens.insert(stem(raw));
    }
    (tokens, negated)
}
