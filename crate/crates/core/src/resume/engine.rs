use std::path::{Path, PathBuf};
use std::process::Stdio;
use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;
use tokio::sync::Semaphore;

use super::pdf::{encodable, write_pdf, Block, Font};
use super::{map_to_render_schema, RenderDocument, ResumeError, ResumeInput};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("render document is invalid: {0}")]
    Document(String),
    #[error("render engine cannot draw {0:?}")]
    Unsupported(String),
    #[error("render engine exited with status {status:?}")]
    Failed { status: Option<i32>, diagnostics: String },
    #[error("render engine timed out")]
    Timeout { diagnostics: String },
    #[error("render engine produced no PDF")]
    NoOutput { diagnostics: String },
    #[error("render engine I/O failed: {0}")]
    Io(String),
}

impl RenderError {
    /// Captured engine output, when there is any.
    pub fn diagnostics(&self) -> Option<&str> {
        match self {
            RenderError::Failed { diagnostics, .. }
            | RenderError::Timeout { diagnostics }
            | RenderError::NoOutput { diagnostics } => Some(diagnostics),
            _ => None,
        }
    }
}

/// Turns a YAML render document into PDF bytes.
#[async_trait]
pub trait RenderEngine: Send + Sync {
    fn name(&self) -> &str;

    async fn render(&self, document_yaml: &str) -> Result<Vec<u8>, RenderError>;
}

/// In-process engine for the standard fonts. Refuses text outside the
/// WinAnsi repertoire rather than dropping it.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuiltinEngine;

impl BuiltinEngine {
    pub fn render_document(doc: &RenderDocument) -> Result<Vec<u8>, RenderError> {
        let blocks = blocks(doc);
        if let Some(bad) = blocks.iter().find(|b| !encodable(&b.text)) {
            let c: String = bad.text.chars().filter(|c| !encodable(&c.to_string())).take(8).collect();
            return Err(RenderError::Unsupported(c));
        }
        Ok(write_pdf(&blocks))
    }
}

#[async_trait]
impl RenderEngine for BuiltinEngine {
    fn name(&self) -> &str {
        "builtin"
    }

    async fn render(&self, document_yaml: &str) -> Result<Vec<u8>, RenderError> {
        let doc = RenderDocument::from_yaml(document_yaml).map_err(|e| RenderError::Document(e.to_string()))?;
        Self::render_document(&doc)
    }
}

fn block(font: Font, size: f32, indent: f32, space_before: f32, text: &str) -> Block {
    Block {
        font,
        size,
        indent,
        space_before,
        text: text.to_string(),
    }
}

fn blocks(doc: &RenderDocument) -> Vec<Block> {
    let cv = &doc.cv;
    let mut out = vec![block(Font::Bold, 20.0, 0.0, 0.0, &cv.name)];
    let contact: Vec<&str> = [&cv.location, &cv.email, &cv.phone]
        .into_iter()
        .flatten()
        .map(String::as_str)
        .collect();
    if !contact.is_empty() {
        out.push(block(Font::Regular, 10.0, 0.0, 2.0, &contact.join("  |  ")));
    }

    let heading = |out: &mut Vec<Block>, title: &str| out.push(block(Font::Bold, 13.0, 0.0, 12.0, title));
    let s = &cv.sections;
    if !s.education.is_empty() {
        heading(&mut out, "Education");
        for e in &s.education {
            let mut first = true;
            for (font, text) in [(Font::Bold, &e.institution), (Font::Regular, &e.area), (Font::Regular, &e.date)] {
                if let Some(t) = text {
                    out.push(block(font, 10.5, 0.0, if first { 6.0 } else { 0.0 }, t));
                    first = false;
                }
            }
        }
    }
    if !s.experience.is_empty() {
        heading(&mut out, "Experience");
        for x in &s.experience {
            let mut first = true;
            for (font, text) in [(Font::Bold, &x.position), (Font::Regular, &x.company), (Font::Regular, &x.date)] {
                if let Some(t) = text {
                    out.push(block(font, 10.5, 0.0, if first { 6.0 } else { 0.0 }, t));
                    first = false;
                }
            }
            for h in &x.highlights {
                out.push(block(Font::Regular, 10.0, 14.0, if first { 6.0 } else { 0.0 }, &format!("- {h}")));
                first = false;
            }
        }
    }
    if !s.certifications.is_empty() {
        heading(&mut out, "Certifications");
        for c in &s.certifications {
            let mut first = true;
            for (font, text) in [(Font::Bold, &c.name), (Font::Regular, &c.summary), (Font::Regular, &c.date)] {
                if let Some(t) = text {
                    out.push(block(font, 10.5, 0.0, if first { 6.0 } else { 0.0 }, t));
                    first = false;
                }
            }
        }
    }
    if !s.skills.is_empty() {
        heading(&mut out, "Skills");
        for (i, sk) in s.skills.iter().enumerate() {
            out.push(block(Font::Regular, 10.0, 14.0, if i == 0 { 6.0 } else { 0.0 }, &format!("- {}", sk.bullet)));
        }
    }
    out
}

/// External engine run as `<program> <args...> resume.yaml` inside a fresh
/// temporary directory. The first `*.pdf` found under that directory is
/// the result.
#[derive(Debug, Clone)]
pub struct ProcessEngine {
    program: PathBuf,
    args: Vec<String>,
    timeout: Duration,
}

const DIAGNOSTIC_LIMIT: usize = 8 * 1024;

impl ProcessEngine {
    pub fn new(program: impl Into<PathBuf>, args: Vec<String>, timeout: Duration) -> Self {
        ProcessEngine {
            program: program.into(),
            args,
            timeout,
        }
    }
}

fn tail(bytes: &[u8]) -> String {
    let s = String::from_utf8_lossy(bytes);
    let start = s.len().saturating_sub(DIAGNOSTIC_LIMIT);
    let start = (start..=s.len()).find(|&i| s.is_char_boundary(i)).unwrap_or(s.len());
    s[start..].to_string()
}

fn find_pdf(dir: &Path, depth: usize) -> Option<PathBuf> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir).ok()?.flatten().map(|e| e.path()).collect();
    entries.sort();
    if let Some(p) = entries
        .iter()
        .find(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pdf")))
    {
        return Some(p.clone());
    }
    if depth == 0 {
        return None;
    }
    entries
        .iter()
        .filter(|p| p.is_dir())
        .find_map(|d| find_pdf(d, depth - 1))
}

#[async_trait]
impl RenderEngine for ProcessEngine {
    fn name(&self) -> &str {
        "process"
    }

    async fn render(&self, document_yaml: &str) -> Result<Vec<u8>, RenderError> {
        let io = |e: std::io::Error| RenderError::Io(e.to_string());
        let workdir = tempfile::tempdir().map_err(io)?;
        let input = workdir.path().join("resume.yaml");
        tokio::fs::write(&input, document_yaml).await.map_err(io)?;

        let child = tokio::process::Command::new(&self.program)
            .args(&self.args)
            .arg("resume.yaml")
            .current_dir(workdir.path())
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .kill_on_drop(true)
            .spawn()
            .map_err(|e| RenderError::Failed {
                status: None,
                diagnostics: format!("could not start {}: {e}", self.program.display()),
            })?;

        let output = match tokio::time::timeout(self.timeout, child.wait_with_output()).await {
            Ok(r) => r.map_err(io)?,
            Err(_) => {
                return Err(RenderError::Timeout {
                    diagnostics: format!("no result after {:?}", self.timeout),
                })
            }
        };
        let mut diagnostics = tail(&output.stderr);
        if diagnostics.trim().is_empty() {
            diagnostics = tail(&output.stdout);
        }
        if !output.status.success() {
            return Err(RenderError::Failed {
                status: output.status.code(),
                diagnostics,
            });
        }
        let dir = workdir.path().to_path_buf();
        let found = tokio::task::spawn_blocking(move || find_pdf(&dir, 3))
            .await
            .map_err(|e| RenderError::Io(e.to_string()))?;
        let Some(path) = found else {
            return Err(RenderError::NoOutput { diagnostics });
        };
        let bytes = tokio::fs::read(&path).await.map_err(io)?;
        if !bytes.starts_with(b"%PDF-") {
            return Err(RenderError::NoOutput { diagnostics });
        }
        Ok(bytes)
    }
}

/// Validates, maps, and renders under a concurrency limit.
pub struct ResumeBuilder {
    engine: Arc<dyn RenderEngine>,
    permits: Semaphore,
}

impl ResumeBuilder {
    pub fn new(engine: Arc<dyn RenderEngine>, max_concurrent: usize) -> Self {
        ResumeBuilder {
            engine,
            permits: Semaphore::new(max_concurrent.max(1)),
        }
    }

    pub fn engine_name(&self) -> &str {
        self.engine.name()
    }

    pub async fn build_resume(&self, input: &ResumeInput) -> Result<Vec<u8>, ResumeError> {
        let yaml = map_to_render_schema(input)?.to_yaml();
        let _permit = self.permits.acquire().await.expect("semaphore never closes");
        let pdf = self.engine.render(&yaml).await?;
        if !pdf.starts_with(b"%PDF-") {
            return Err(RenderError::NoOutput {
                diagnostics: "engine output is not a PDF".into(),
            }
            .into());
        }
        Ok(pdf)
    }
}
