use std::panic::{catch_unwind, AssertUnwindSafe};

/// Upload cap for resume PDFs.
pub const MAX_UPLOAD_BYTES: usize = 5 * 1024 * 1024;

// Bound on decompressed content per page, against compression bombs.
const MAX_PAGE_CONTENT: usize = 16 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("file is larger than {MAX_UPLOAD_BYTES} bytes")]
    TooLarge,
    #[error("file is not a readable PDF: {0}")]
    Unreadable(String),
    #[error("PDF contains no extractable text")]
    EmptyText,
}

/// Extracts page text in page order. Parser panics on hostile input are
/// contained and reported as unreadable.
pub fn extract_text(pdf: &[u8]) -> Result<String, ExtractError> {
    if pdf.len() > MAX_UPLOAD_BYTES {
        return Err(ExtractError::TooLarge);
    }
    if !pdf.starts_with(b"%PDF-") {
        return Err(ExtractError::Unreadable("missing PDF header".into()));
    }
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<String, ExtractError> {
        let doc = lopdf::Document::load_mem(pdf).map_err(|e| ExtractError::Unreadable(e.to_string()))?;
        let pages: Vec<u32> = doc.get_pages().keys().copied().collect();
        if pages.is_empty() {
            return Err(ExtractError::Unreadable("no pages".into()));
        }
        let chunks = doc.extract_text_chunks_with_limit(&pages, MAX_PAGE_CONTENT);
        let mut text = String::new();
        let mut first_error = None;
        let mut any_ok = false;
        for chunk in chunks {
            match chunk {
                Ok(t) => {
                    any_ok = true;
                    text.push_str(&t);
                }
                Err(e) => {
                    first_error.get_or_insert_with(|| e.to_string());
                }
            }
        }
        match first_error {
            Some(e) if !any_ok => Err(ExtractError::Unreadable(e)),
            _ => Ok(text),
        }
    }));
    let text = match result {
        Ok(r) => r?,
        Err(_) => return Err(ExtractError::Unreadable("parser failure".into())),
    };
    if text.trim().is_empty() {
        return Err(ExtractError::EmptyText);
    }
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resume::pdf::write_pdf;

    #[test]
    fn rejects_non_pdf_and_garbage() {
        assert!(matches!(extract_text(b"hello"), Err(ExtractError::Unreadable(_))));
        assert!(matches!(
            extract_text(b"%PDF-1.4\n\x00\x01garbage"),
            Err(ExtractError::Unreadable(_))
        ));
    }

    #[test]
    fn textless_pdf_is_empty() {
        let pdf = write_pdf(&[]);
        assert_eq!(extract_text(&pdf), Err(ExtractError::EmptyText));
    }

    #[test]
    fn size_cap() {
        let mut big = b"%PDF-1.4\n".to_vec();
        big.resize(MAX_UPLOAD_BYTES + 1, b' ');
        assert_eq!(extract_text(&big), Err(ExtractError::TooLarge));
    }
}
