use std::io::Write;
use std::process::{Command, Stdio};

use super::{Sampler, SamplerConfig, SamplerError};
use crate::graph::Graph;
use crate::qubo::{build_qubo, Penalty, SampleSet};

/// Runs a shell command as the annealer.
///
/// The command receives the QUBO export (`i j p/q` triples) on stdin and the
/// environment variables `STABLE_QUBO_N`, `STABLE_QUBO_READS`,
/// `STABLE_QUBO_SEED` and `STABLE_QUBO_BETA`. It must print one assignment
/// per line as `n` characters from `{0,1}`, optionally separated by blanks.
/// Empty lines and lines starting with `#` are ignored. Fewer lines than
/// requested reads are accepted; surplus lines are dropped.
#[derive(Debug, Clone)]
pub struct ExternalSampler {
    command: String,
}

impl ExternalSampler {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
        }
    }

    pub fn command(&self) -> &str {
        &self.command
    }
}

impl Sampler for ExternalSampler {
    fn name(&self) -> String {
        format!("external:{}", self.command)
    }

    fn sample(
        &self,
        g: &Graph,
        beta: Penalty,
        config: &SamplerConfig,
    ) -> Result<SampleSet, SamplerError> {
        config.validate()?;
        let payload = build_qubo(g, beta).export();
        let transport = |e: std::io::Error| SamplerError::Transport(e.to_string());

        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .env("STABLE_QUBO_N", g.n().to_string())
            .env("STABLE_QUBO_READS", config.reads.to_string())
            .env("STABLE_QUBO_SEED", config.seed.to_string())
            .env("STABLE_QUBO_BETA", beta.to_string())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(transport)?;

        let mut stdin = child.stdin.take().expect("stdin is piped");
        let writer = std::thread::spawn(move || {
            // a command that ignores its input may close the pipe early
            let _ = stdin.write_all(payload.as_bytes());
        });
        let output = child.wait_with_output().map_err(transport)?;
        let _ = writer.join();
        if !output.status.success() {
            return Err(SamplerError::Transport(format!(
                "`{}` exited with {}",
                self.command, output.status
            )));
        }

        let assignments = parse_response(&output.stdout, g.n(), config.reads)?;
        if assignments.is_empty() {
            return Err(SamplerError::Transport(format!(
                "`{}` returned no samples",
                self.command
            )));
        }
        Ok(SampleSet::from_assignments(g, beta, config.reads, assignments))
    }
}

pub(crate) fn parse_response(
    stdout: &[u8],
    n: usize,
    limit: usize,
) -> Result<Vec<Vec<bool>>, SamplerError> {
    let text = String::from_utf8_lossy(stdout);
    let mut assignments = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let line = idx + 1;
        let mut bits = Vec::with_capacity(n);
        for c in trimmed.chars().filter(|c| !c.is_whitespace() && *c != ',') {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(SamplerError::MalformedResponse {
                        line,
                        text: raw.to_string(),
                    })
                }
            }
        }
        if bits.len() != n {
            return Err(SamplerError::LengthMismatch {
                line,
                expected: n,
                found: bits.len(),
            });
        }
        if assignments.len() < limit {
            assignments.push(bits);
        }
    }
    Ok(assignments)
}
