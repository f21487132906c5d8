//! Minimal PDF 1.4 writer: Helvetica / Helvetica-Bold with WinAnsi
//! encoding, uncompressed content streams, one text object per line.

use std::fmt::Write as _;

const PAGE_W: f32 = 612.0;
const PAGE_H: f32 = 792.0;
const MARGIN: f32 = 54.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Font {
    Regular,
    Bold,
}

impl Font {
    fn resource(self) -> &'static str {
        match self {
            Font::Regular => "F1",
            Font::Bold => "F2",
        }
    }
}

/// One logical paragraph; wrapped to the text width when laid out.
#[derive(Debug, Clone)]
pub(crate) struct Block {
    pub font: Font,
    pub size: f32,
    pub indent: f32,
    pub space_before: f32,
    pub text: String,
}

// Helvetica advance widths for 0x20..=0x7E, per 1000 em.
const ASCII_WIDTHS: [u16; 95] = [
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278, 556, 556, 556,
    556, 556, 556, 556, 556, 556, 556, 278, 278, 584, 584, 584, 556, 1015, 667, 667, 722, 722, 667,
    611, 778, 722, 278, 500, 667, 556, 833, 722, 778, 667, 778, 722, 667, 611, 722, 667, 944, 667,
    667, 611, 278, 278, 278, 469, 556, 333, 556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500,
    222, 833, 556, 556, 556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584,
];

fn char_width(c: char, font: Font) -> f32 {
    let base = match c as u32 {
        0x20..=0x7E => ASCII_WIDTHS[c as usize - 0x20] as f32,
        // Wide enough for any Latin-1 or punctuation glyph in the font.
        _ => 1000.0,
    };
    let bold = if font == Font::Bold { 1.1 } else { 1.0 };
    base * bold / 1000.0
}

fn text_width(s: &str, font: Font, size: f32) -> f32 {
    s.chars().map(|c| char_width(c, font)).sum::<f32>() * size
}

/// WinAnsi byte for `c`, if the standard fonts can show it.
fn winansi(c: char) -> Option<u8> {
    let cp = c as u32;
    match cp {
        0x20..=0x7E | 0xA0..=0xFF => Some(cp as u8),
        _ => Some(match c {
            '€' => 0x80,
            '‚' => 0x82,
            'ƒ' => 0x83,
            '„' => 0x84,
            '…' => 0x85,
            '†' => 0x86,
            '‡' => 0x87,
            'ˆ' => 0x88,
            '‰' => 0x89,
            'Š' => 0x8A,
            '‹' => 0x8B,
            'Œ' => 0x8C,
            'Ž' => 0x8E,
            '‘' => 0x91,
            '’' => 0x92,
            '“' => 0x93,
            '”' => 0x94,
            '•' => 0x95,
            '–' => 0x96,
            '—' => 0x97,
            '˜' => 0x98,
            '™' => 0x99,
            'š' => 0x9A,
            '›' => 0x9B,
            'œ' => 0x9C,
            'ž' => 0x9E,
            'Ÿ' => 0x9F,
            _ => return None,
        }),
    }
}

/// Whether every character of `s` can be drawn by the builtin fonts.
/// Whitespace counts as drawable since layout turns it into spaces.
pub fn encodable(s: &str) -> bool {
    s.chars().all(|c| c.is_whitespace() || winansi(c).is_some())
}

fn pdf_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('(');
    for c in s.chars() {
        let b = winansi(c).unwrap_or(b'?');
        match b {
            b'(' | b')' | b'\\' => {
                out.push('\\');
                out.push(b as char);
            }
            0x20..=0x7E => out.push(b as char),
            _ => {
                let _ = write!(out, "\\{b:03o}");
            }
        }
    }
    out.push(')');
    out
}

/// Greedy wrap at whitespace; a word wider than the line is split by character.
fn wrap(text: &str, font: Font, size: f32, width: f32) -> Vec<String> {
    let mut lines = Vec::new();
    let mut line = String::new();
    for word in text.split_whitespace() {
        let candidate = if line.is_empty() {
            word.to_string()
        } else {
            format!("{line} {word}")
        };
        if text_width(&candidate, font, size) <= width {
            line = candidate;
            continue;
        }
        if !line.is_empty() {
            lines.push(std::mem::take(&mut line));
        }
        if text_width(word, font, size) <= width {
            line = word.to_string();
        } else {
            for c in word.chars() {
                line.push(c);
                if text_width(&line, font, size) > width {
                    line.pop();
                    lines.push(std::mem::take(&mut line));
                    line.push(c);
                }
            }
        }
    }
    if !line.is_empty() {
        lines.push(line);
    }
    lines
}

struct Placed {
    font: Font,
    size: f32,
    x: f32,
    y: f32,
    text: String,
}

fn layout(blocks: &[Block]) -> Vec<Vec<Placed>> {
    let mut pages: Vec<Vec<Placed>> = vec![Vec::new()];
    let mut y = PAGE_H - MARGIN;
    for block in blocks {
        let width = PAGE_W - 2.0 * MARGIN - block.indent;
        let lead = block.size * 1.3;
        for (i, line) in wrap(&block.text, block.font, block.size, width).into_iter().enumerate() {
            let step = lead + if i == 0 { block.space_before } else { 0.0 };
            if y - step < MARGIN {
                pages.push(Vec::new());
                y = PAGE_H - MARGIN;
            }
            y -= step;
            pages.last_mut().expect("one page").push(Placed {
                font: block.font,
                size: block.size,
                x: MARGIN + block.indent,
                y,
                text: line,
            });
        }
    }
    pages
}

/// Lays out blocks and serializes a complete PDF file.
pub(crate) fn write_pdf(blocks: &[Block]) -> Vec<u8> {
    let pages = layout(blocks);
    let page_count = pages.len();
    // Objects: 1 catalog, 2 pages, 3-4 fonts, then (page, content) pairs.
    let mut objects: Vec<Vec<u8>> = Vec::new();
    objects.push(b"<< /Type /Catalog /Pages 2 0 R >>".to_vec());
    let kids: Vec<String> = (0..page_count).map(|i| format!("{} 0 R", 5 + 2 * i)).collect();
    objects.push(format!("<< /Type /Pages /Kids [{}] /Count {page_count} >>", kids.join(" ")).into_bytes());
    for base in ["Helvetica", "Helvetica-Bold"] {
        objects.push(
            format!("<< /Type /Font /Subtype /Type1 /BaseFont /{base} /Encoding /WinAnsiEncoding >>")
                .into_bytes(),
        );
    }
    for (i, page) in pages.iter().enumerate() {
        let content_id = 6 + 2 * i;
        objects.push(
            format!(
                "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 {PAGE_W} {PAGE_H}] \
                 /Resources << /Font << /F1 3 0 R /F2 4 0 R >> >> /Contents {content_id} 0 R >>"
            )
            .into_bytes(),
        );
        let mut stream = String::new();
        for p in page {
            let _ = writeln!(
                stream,
                "BT /{} {:.1} Tf {:.2} {:.2} Td {} Tj ET",
                p.font.resource(),
                p.size,
                p.x,
                p.y,
                pdf_string(&p.text)
            );
        }
        let mut obj = format!("<< /Length {} >>\nstream\n", stream.len()).into_bytes();
        obj.extend_from_slice(stream.as_bytes());
        obj.extend_from_slice(b"endstream");
        objects.push(obj);
    }

    let mut out: Vec<u8> = b"%PDF-1.4\n%\xE2\xE3\xCF\xD3\n".to_vec();
    let mut offsets = Vec::with_capacity(objects.len());
    for (i, body) in objects.iter().enumerate() {
        offsets.push(out.len());
        out.extend_from_slice(format!("{} 0 obj\n", i + 1).as_bytes());
        out.extend_from_slice(body);
        out.extend_from_slice(b"\nendobj\n");
    }
    let xref_at = out.len();
    let mut xref = format!("xref\n0 {}\n0000000000 65535 f \n", objects.len() + 1);
    for off in offsets {
        let _ = writeln!(xref, "{off:010} 00000 n ");
    }
    let _ = write!(
        xref,
        "trailer\n<< /Size {} /Root 1 0 R >>\nstartxref\n{xref_at}\n%%EOF\n",
        objects.len() + 1
    );
    out.extend_from_slice(xref.as_bytes());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_respects_width() {
        let text = "word ".repeat(200);
        let lines = wrap(&text, Font::Regular, 10.0, 300.0);
        assert!(lines.len() > 5);
        assert!(lines.iter().all(|l| text_width(l, Font::Regular, 10.0) <= 300.0));
        let long = "x".repeat(500);
        let pieces = wrap(&long, Font::Regular, 10.0, 300.0);
        assert_eq!(pieces.concat(), long);
    }

    #[test]
    fn escapes_and_encodes() {
        assert_eq!(pdf_string("a(b)\\"), "(a\\(b\\)\\\\)");
        assert_eq!(pdf_string("é’"), "(\\351\\222)");
        assert!(encodable("José’s café — 100%"));
        assert!(!encodable("مرحبا"));
    }

    #[test]
    fn long_documents_paginate() {
        let blocks: Vec<Block> = (0..200)
            .map(|i| Block {
                font: Font::Regular,
                size: 10.0,
                indent: 0.0,
                space_before: 0.0,
                text: format!("line {i}"),
            })
            .collect();
        let pdf = write_pdf(&blocks);
        assert!(pdf.starts_with(b"%PDF-1.4"));
        let doc = lopdf::Document::load_mem(&pdf).unwrap();
        assert!(doc.get_pages().len() >= 3);
    }
}
