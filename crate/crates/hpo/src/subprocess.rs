use crate::evaluator::{EvalError, Evaluator};
use crate::protocol::{check_handshake, parse_reply, Request};
use crate::space::TrialParams;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);

/// Evaluator running as a child process, spoken to over stdin/stdout.
///
/// The command line is run through `sh -c`. A process that crashes, times
/// out or breaks the protocol is killed and restarted, handshake included,
/// on the next request. The child is killed when the evaluator is dropped.
pub struct SubprocessEvaluator {
    command: String,
    timeout: Duration,
    running: Option<Running>,
    starts: usize,
}

struct Running {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
}

impl Running {
    fn spawn(command: &str) -> Result<Self, EvalError> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| EvalError::Spawn(format!("{command}: {e}")))?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Self { child, stdin, lines })
    }

    fn next_line(&mut self, timeout: Duration) -> Result<String, EvalError> {
        match self.lines.recv_timeout(timeout) {
            Ok(Ok(line)) => Ok(line),
            Ok(Err(e)) => Err(EvalError::Crashed(format!("reading stdout: {e}"))),
            Err(RecvTimeoutError::Timeout) => Err(EvalError::Timeout(timeout)),
            Err(RecvTimeoutError::Disconnected) => {
                let status = self.child.wait().map(|s| s.to_string()).unwrap_or_else(|e| e.to_string());
                Err(EvalError::Crashed(status))
            }
        }
    }
}

impl Drop for Running {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

impl SubprocessEvaluator {
    /// Starts `command` and waits for its handshake.
    pub fn spawn(command: &str, timeout: Duration) -> Result<Self, EvalError> {
        let mut ev = Self { command: command.to_string(), timeout, running: None, starts: 0 };
        ev.ensure_running()?;
        Ok(ev)
    }

    /// Number of times the process has been started.
    pub fn starts(&self) -> usize {
        self.starts
    }

    fn ensure_running(&mut self) -> Result<&mut Running, EvalError> {
        if self.running.is_none() {
            let mut proc = Running::spawn(&self.command)?;
            self.starts += 1;
            check_handshake(&proc.next_line(self.timeout)?)?;
            self.running = Some(proc);
        }
        Ok(self.running.as_mut().expect("just started"))
    }

    fn exchange(&mut self, request: &Request) -> Result<f64, EvalError> {
        let timeout = self.timeout;
        let proc = self.ensure_running()?;
        proc.stdin
            .write_all(request.to_line().as_bytes())
            .and_then(|()| proc.stdin.flush())
            .map_err(|e| EvalError::Crashed(format!("writing request: {e}")))?;
        let line = proc.next_line(timeout)?;
        parse_reply(&line, request.trial_id)
    }
}

impl Evaluator for SubprocessEvaluator {
    fn evaluate(&mut self, trial_id: u64, params: &TrialParams) -> Result<f64, EvalError> {
        let result = self.exchange(&Request::new(trial_id, params));
        // the stream is only trustworthy after a well-formed reply
        if matches!(result, Err(EvalError::Crashed(_) | EvalError::Timeout(_) | EvalError::Malformed(_))) {
            self.running = None;
        }
        result
    }
}
