//! Line-delimited JSON protocol spoken by translator plugins over stdio.
//!
//! The plugin first prints the handshake `{"protocol":"cnlasp-plugin","version":1}`.
//! Afterwards every request line `{"id":N,"nl":"..."}` (optionally with
//! `"task":"paraphrase"` and `"variant":J`) is answered by exactly one line
//! carrying the same id and one of `"cnl"`, `"nl"` or `"error"`.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PROTOCOL_NAME: &str = "cnlasp-plugin";
pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Handshake {
    pub protocol: String,
    pub version: u32,
}

impl Handshake {
    pub fn current() -> Self {
        Handshake {
            protocol: PROTOCOL_NAME.into(),
            version: PROTOCOL_VERSION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluginRequest {
    /// Assigned by the client; any value given here is overwritten.
    pub id: u64,
    pub nl: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<u32>,
}

impl PluginRequest {
    pub fn translate(nl: impl Into<String>) -> Self {
        PluginRequest {
            id: 0,
            nl: nl.into(),
            task: None,
            variant: None,
        }
    }

    pub fn paraphrase(nl: impl Into<String>, variant: u32) -> Self {
        PluginRequest {
            id: 0,
            nl: nl.into(),
            task: Some("paraphrase".into()),
            variant: Some(variant),
        }
    }
}

/// A response line as sent on the wire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluginResponse {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cnl: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nl: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PluginReply {
    Cnl(String),
    Nl(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum PluginError {
    #[error("cannot start plugin: {0}")]
    Spawn(String),
    #[error("bad handshake: {0}")]
    Handshake(String),
    #[error("request {id} timed out after {ms} ms")]
    Timeout { id: u64, ms: u64 },
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("plugin error for request {id}: {message}")]
    Remote { id: u64, message: String },
    #[error("plugin closed its output")]
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PluginConfig {
    /// Program followed by its arguments.
    pub command: Vec<String>,
    pub timeout_ms: u64,
    pub handshake_timeout_ms: u64,
    /// Maximum number of requests in flight.
    pub window: usize,
}

impl Default for PluginConfig {
    fn default() -> Self {
        PluginConfig {
            command: Vec::new(),
            timeout_ms: 30_000,
            handshake_timeout_ms: 10_000,
            window: 8,
        }
    }
}

enum Line {
    Text(String),
    Eof,
}

/// A running plugin process.
pub struct PluginClient {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<Line>,
    next_id: u64,
    timeout: Duration,
    window: usize,
    closed: bool,
}

impl PluginClient {
    /// Starts the plugin and waits for its handshake.
    pub fn spawn(config: &PluginConfig) -> Result<Self, PluginError> {
        let (program, args) = config
            .command
            .split_first()
            .ok_or_else(|| PluginError::Spawn("empty command".into()))?;
        if config.timeout_ms == 0 || config.window == 0 {
            return Err(PluginError::Spawn(
                "timeout and window must be positive".into(),
            ));
        }
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| PluginError::Spawn(format!("{program}: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                match line {
                    Ok(l) => {
                        if tx.send(Line::Text(l)).is_err() {
                            return;
                        }
                    }
                    Err(_) => break,
                }
            }
            let _ = tx.send(Line::Eof);
        });
        let client = PluginClient {
            child,
            stdin,
            lines,
            next_id: 1,
            timeout: Duration::from_millis(config.timeout_ms),
            window: config.window,
            closed: false,
        };
        let wait = Duration::from_millis(config.handshake_timeout_ms.max(1));
        match client.lines.recv_timeout(wait) {
            Ok(Line::Text(l)) => {
                let hs: Handshake = serde_json::from_str(&l)
                    .map_err(|e| PluginError::Handshake(format!("{l:?}: {e}")))?;
                if hs != Handshake::current() {
                    return Err(PluginError::Handshake(format!(
                        "expected {PROTOCOL_NAME} version {PROTOCOL_VERSION}, got {} version {}",
                        hs.protocol, hs.version
                    )));
                }
            }
            Ok(Line::Eof) | Err(RecvTimeoutError::Disconnected) => {
                return Err(PluginError::Handshake(
                    "plugin exited before handshake".into(),
                ))
            }
            Err(RecvTimeoutError::Timeout) => {
                return Err(PluginError::Handshake("no handshake received".into()))
            }
        }
        Ok(client)
    }

    pub fn call(&mut self, request: PluginRequest) -> Result<PluginReply, PluginError> {
        self.call_batch(vec![request])
            .pop()
            .expect("one result per request")
    }

    /// Sends the requests with at most `window` in flight and returns one
    /// result per request, in request order. Each request has its own
    /// deadline starting when it is written. Late or unknown responses are
    /// discarded.
    pub fn call_batch(
        &mut self,
        requests: Vec<PluginRequest>,
    ) -> Vec<Result<PluginReply, PluginError>> {
        let n = requests.len();
        let mut results: Vec<Option<Result<PluginReply, PluginError>>> = vec![None; n];
        let mut pending: BTreeMap<u64, (usize, Instant)> = BTreeMap::new();
        let mut queue = requests.into_iter().enumerate();
        let mut done = 0;
        while done < n {
            while !self.closed && pending.len() < self.window {
                let Some((idx, mut req)) = queue.next() else {
                    break;
                };
                req.id = self.next_id;
                self.next_id += 1;
                let line = serde_json::to_string(&req).expect("request serializes");
                if writeln!(self.stdin, "{line}")
                    .and_then(|_| self.stdin.flush())
                    .is_err()
                {
                    self.closed = true;
                    results[idx] = Some(Err(PluginError::Closed));
                    done += 1;
                    break;
                }
                pending.insert(req.id, (idx, Instant::now() + self.timeout));
            }
            if self.closed {
                for (idx, _) in pending.values() {
                    results[*idx] = Some(Err(PluginError::Closed));
                    done += 1;
                }
                pending.clear();
                for (idx, _) in queue.by_ref() {
                    results[idx] = Some(Err(PluginError::Closed));
                    done += 1;
                }
                continue;
            }
            let Some(deadline) = pending.values().map(|(_, d)| *d).min() else {
                continue;
            };
            let wait = deadline.saturating_duration_since(Instant::now());
            match self.lines.recv_timeout(wait) {
                Ok(Line::Text(l)) => {
                    if let Some((id, reply)) = decode(&l) {
                        if let Some((idx, _)) = pending.remove(&id) {
                            results[idx] = Some(reply);
                            done += 1;
                        }
                    }
                }
                Ok(Line::Eof) | Err(RecvTimeoutError::Disconnected) => self.closed = true,
                Err(RecvTimeoutError::Timeout) => {
                    let now = Instant::now();
                    let expired: Vec<u64> = pending
                        .iter()
                        .filter(|(_, (_, d))| *d <= now)
                        .map(|(id, _)| *id)
                        .collect();
                    for id in expired {
                        let (idx, _) = pending.remove(&id).expect("pending id");
                        results[idx] = Some(Err(PluginError::Timeout {
                            id,
                            ms: self.timeout.as_millis() as u64,
                        }));
                        done += 1;
                    }
                }
            }
        }
        results
            .into_iter()
            .map(|r| r.expect("every request resolved"))
            .collect()
    }
}

/// Reads a response line. Lines without a usable id are ignored.
fn decode(line: &str) -> Option<(u64, Result<PluginReply, PluginError>)> {
    let r: PluginResponse = serde_json::from_str(line).ok()?;
    let reply = match (r.cnl, r.nl, r.error) {
        (Some(c), None, None) => Ok(PluginReply::Cnl(c)),
        (None, Some(n), None) => Ok(PluginReply::Nl(n)),
        (None, None, Some(message)) => Err(PluginError::Remote { id: r.id, message }),
        _ => Err(PluginError::Protocol(format!(
            "response {} must carry exactly one of cnl, nl, error",
            r.id
        ))),
    };
    Some((r.id, reply))
}

impl Drop for PluginClient {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Error text for request lines that do not decode.
pub const MALFORMED: &str = "malformed request";

/// Reference plugin loop: mirrors every request. Translation requests get
/// `{"id":N,"cnl":NL}`, paraphrase requests `{"id":N,"nl":NL}`. A line that
/// is not a request gets an error response, with id 0 if none is readable.
pub fn serve_echo(input: impl BufRead, mut output: impl Write) -> std::io::Result<()> {
    writeln!(
        output,
        "{}",
        serde_json::to_string(&Handshake::current()).expect("serializes")
    )?;
    output.flush()?;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response = match serde_json::from_str::<PluginRequest>(&line) {
            Ok(req) if req.task.as_deref() == Some("paraphrase") => PluginResponse {
                id: req.id,
                cnl: None,
                nl: Some(req.nl),
                error: None,
            },
            Ok(req) => PluginResponse {
                id: req.id,
                cnl: Some(req.nl),
                nl: None,
                error: None,
            },
            Err(_) => PluginResponse {
                id: serde_json::from_str::<serde_json::Value>(&line)
                    .ok()
                    .and_then(|v| v.get("id")?.as_u64())
                    .unwrap_or(0),
                cnl: None,
                nl: None,
                error: Some(MALFORMED.to_string()),
            },
        };
        writeln!(
            output,
            "{}",
            serde_json::to_string(&response).expect("serializes")
        )?;
        output.flush()?;
    }
    Ok(())
}
