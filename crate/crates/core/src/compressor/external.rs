use std::io::{ErrorKind, Read, Write};
use std::process::{Command, Stdio};
use std::thread;

use super::{Compressor, CompressorError};

/// Adapter for an external compressor program.
///
/// The template is split into a program and arguments with POSIX shell
/// quoting rules (no shell is involved). The program receives the input on
/// stdin and must write the compressed stream to stdout; `Z` is the number
/// of bytes it writes. One process is spawned per call.
#[derive(Debug, Clone)]
pub struct ExternalCommand {
    template: String,
    program: String,
    args: Vec<String>,
}

impl ExternalCommand {
    pub fn new(template: &str) -> Result<Self, CompressorError> {
        let invalid = |reason: &str| CompressorError::InvalidTemplate {
            template: template.to_owned(),
            reason: reason.to_owned(),
        };
        let mut words = shell_words::split(template).map_err(|e| invalid(&e.to_string()))?;
        if words.is_empty() {
            return Err(invalid("empty command"));
        }
        let program = words.remove(0);
        Ok(Self {
            template: template.to_owned(),
            program,
            args: words,
        })
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    fn failure(&self, detail: impl Into<String>) -> CompressorError {
        CompressorError::ExternalFailure {
            command: self.template.clone(),
            detail: detail.into(),
        }
    }
}

impl Compressor for ExternalCommand {
    fn name(&self) -> &str {
        &self.template
    }

    fn compress_len(&self, data: &[u8]) -> Result<u64, CompressorError> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| match e.kind() {
                ErrorKind::NotFound => self.failure("command not found"),
                _ => self.failure(format!("could not start: {e}")),
            })?;

        let mut stdin = child.stdin.take().expect("stdin is piped");
        let mut stdout = child.stdout.take().expect("stdout is piped");
        let mut stderr = child.stderr.take().expect("stderr is piped");

        let (written, out_len, err_text) = thread::scope(|s| {
            let writer = s.spawn(move || {
                // A compressor that exits early closes its stdin; the exit
                // status is what gets reported in that case.
                match stdin.write_all(data) {
                    Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e),
                    _ => Ok(()),
                }
            });
            let err_reader = s.spawn(move || {
                let mut text = String::new();
                let _ = stderr.read_to_string(&mut text);
                text
            });
            let mut count = 0u64;
            let mut buf = [0u8; 16 * 1024];
            let read = loop {
                match stdout.read(&mut buf) {
                    Ok(0) => break Ok(count),
                    Ok(n) => count += n as u64,
                    Err(e) if e.kind() == ErrorKind::Interrupted => {}
                    Err(e) => break Err(e),
                }
            };
            (
                writer.join().expect("stdin writer panicked"),
                read,
                err_reader.join().expect("stderr reader panicked"),
            )
        });

        let status = child
            .wait()
            .map_err(|e| self.failure(format!("wait failed: {e}")))?;
        if !status.success() {
            let mut detail = format!("exited with {status}");
            let err_text = err_text.trim();
            if !err_text.is_empty() {
                detail.push_str(": ");
                detail.push_str(err_text);
            }
            return Err(self.failure(detail));
        }
        written.map_err(|e| self.failure(format!("writing stdin: {e}")))?;
        let len = out_len.map_err(|e| self.failure(format!("reading stdout: {e}")))?;
        if len == 0 {
            return Err(self.failure("empty output stream"));
        }
        Ok(len)
    }
}
