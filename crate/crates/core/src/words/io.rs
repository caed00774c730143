//! Word files: UTF-8, an optional `#alphabet:<symbols>` line, then the
//! symbols on one line with no separators.

use std::sync::Arc;

use thiserror::Error;

use super::{Alphabet, FiniteWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordFileError {
    #[error("word file is empty")]
    Empty,
    #[error("word file has {0} content lines; expected one")]
    ExtraLines(usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

pub fn parse_word_file(text: &str) -> Result<FiniteWord, WordFileError> {
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
    let mut alphabet = None;
    let mut content = Vec::new();
    if let Some(first) = lines.next() {
        match first.strip_prefix("#alphabet:") {
            Some(symbols) => alphabet = Some(Alphabet::new(symbols.chars())?),
            None => content.push(first),
        }
    }
    content.extend(lines);
    let content: Vec<&str> = content.into_iter().filter(|l| !l.trim().is_empty()).collect();
    let body = match content.as_slice() {
        [] => return Err(WordFileError::Empty),
        [one] => one.trim(),
        more => return Err(WordFileError::ExtraLines(more.len())),
    };
    let alphabet = match alphabet {
        Some(a) => a,
        None => Alphabet::inferred(body)?,
    };
    Ok(FiniteWord::from_str_with(Arc::new(alphabet), body)?)
}

pub fn render_word_file(w: &FiniteWord) -> String {
    format!("#alphabet:{}\n{}\n", w.alphabet(), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_is_optional() {
        let w = parse_word_file("0100101\n").unwrap();
        assert_eq!(w.alphabet().to_string(), "01");
        let w = parse_word_file("#alphabet:210\n0100101\n").unwrap();
        assert_eq!(w.alphabet().to_string(), "210");
        assert_eq!(w.parikh().0, vec![0, 3, 4]);
    }

    #[test]
    fn malformed_files() {
        assert_eq!(parse_word_file(""), Err(WordFileError::Empty));
        assert_eq!(parse_word_file("#alphabet:01\n"), Err(WordFileError::Empty));
        assert_eq!(parse_word_file("01\n10\n"), Err(WordFileError::ExtraLines(2)));
        assert_eq!(
            parse_word_file("#alphabet:01\n012\n"),
            Err(WordFileError::Word(WordError::UnknownSymbol('2')))
        );
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(data in proptest::collection::vec(0u8..3, 1..200)) {
            let alphabet = Arc::new(Alphabet::new("0a2".chars()).unwrap());
            let w = FiniteWord::from_indices(alphabet, data).unwrap();
            prop_assert_eq!(parse_word_file(&render_word_file(&w)).unwrap(), w);
        }
    }
}
