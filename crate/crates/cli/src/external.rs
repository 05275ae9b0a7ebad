//! Driving out-of-process objectives: real training scripts, wrappers
//! around existing tooling, anything that can read a config file and print
//! a number.

use std::fs::File;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use hypabc::{Assignment, Objective, ObjectiveError};

/// An objective that shells out.
///
/// For each evaluation the decoded assignment is written as a JSON object
/// to a temporary file, every `{config}` in the command template is replaced
/// with that file's path, and the command runs under `sh -c`. The last
/// non-empty line of its standard output is parsed as the objective value.
/// Standard error is captured and attached to failures.
pub struct ExternalCommand {
    template: String,
    timeout: Option<Duration>,
}

impl ExternalCommand {
    /// A command template, optionally killed after `timeout`.
    pub fn new(template: impl Into<String>, timeout: Option<Duration>) -> Self {
        Self { template: template.into(), timeout }
    }
}

impl Objective for ExternalCommand {
    fn evaluate(&self, assignment: &Assignment) -> Result<f64, ObjectiveError> {
        let fail = |message: String| ObjectiveError::new(message);

        let dir = tempfile::tempdir().map_err(|e| fail(format!("cannot create temp dir: {e}")))?;
        let config_path = dir.path().join("config.json");
        let json = serde_json::to_string_pretty(assignment)
            .map_err(|e| fail(format!("cannot encode config: {e}")))?;
        std::fs::write(&config_path, json)
            .map_err(|e| fail(format!("cannot write config file: {e}")))?;

        let command = self.template.replace("{config}", &config_path.display().to_string());
        let stdout_path = dir.path().join("stdout");
        let stderr_path = dir.path().join("stderr");
        let stdout_file =
            File::create(&stdout_path).map_err(|e| fail(format!("cannot open stdout file: {e}")))?;
        let stderr_file =
            File::create(&stderr_path).map_err(|e| fail(format!("cannot open stderr file: {e}")))?;

        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&command)
            .stdin(Stdio::null())
            .stdout(stdout_file)
            .stderr(stderr_file)
            .spawn()
            .map_err(|e| fail(format!("cannot spawn `{command}`: {e}")))?;

        let started = Instant::now();
        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break status,
                Ok(None) => {
                    if let Some(limit) = self.timeout {
                        if started.elapsed() > limit {
                            let _ = child.kill();
                            let _ = child.wait();
                            return Err(fail(format!(
                                "`{command}` timed out after {:.1}s",
                                limit.as_secs_f64()
                            )));
                        }
                    }
                    std::thread::sleep(Duration::from_millis(5));
                }
                Err(e) => return Err(fail(format!("cannot wait for `{command}`: {e}"))),
            }
        };

        let stdout = std::fs::read_to_string(&stdout_path).unwrap_or_default();
        let stderr = std::fs::read_to_string(&stderr_path).unwrap_or_default();
        if !status.success() {
            return Err(fail(format!(
                "`{command}` exited with {status}; stderr: {}",
                stderr.trim()
            )));
        }
        let last_line = stdout
            .lines()
            .rev()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .ok_or_else(|| fail(format!("`{command}` printed no output; stderr: {}", stderr.trim())))?;
        last_line.parse::<f64>().map_err(|_| {
            fail(format!(
                "cannot parse objective from `{last_line}`; stderr: {}",
                stderr.trim()
            ))
        })
    }

    fn description(&self) -> &str {
        "external"
    }

    fn deterministic(&self) -> bool {
        // Unknowable from here; assume the worst for reporting purposes.
        // Values are still cached, which is only sound for deterministic
        // commands, so nondeterministic commands get their first answer
        // replayed.
        false
    }
}
