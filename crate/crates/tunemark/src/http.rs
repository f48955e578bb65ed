//! HTTP oracle adapter and loopback server.
//!
//! Wire contract: POST a JSON body `{"prompt": "..."}` to the endpoint, get
//! `{"completion": "..."}` back. The client adapter retries transport and
//! 5xx failures; the server side exposes any [`InferenceOracle`] (usually a
//! simulated one) over the same contract, so the whole verify pipeline can be
//! exercised end to end over a real socket.

use std::net::SocketAddr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::verify::InferenceOracle;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HttpOracleConfig {
    pub url: String,
    /// Sent as a bearer Authorization header when present.
    #[serde(default)]
    pub bearer_token: Option<String>,
    /// Per-request timeout in seconds.
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    /// Transport retries per prompt. Retries never change response counts:
    /// a prompt that ultimately fails aborts the run instead of guessing.
    #[serde(default = "default_retries")]
    pub max_retries: u32,
}

fn default_timeout_secs() -> u64 {
    30
}

fn default_retries() -> u32 {
    2
}

impl HttpOracleConfig {
    pub fn new(url: impl Into<String>) -> Self {
        Self {
            url: url.into(),
            bearer_token: None,
            timeout_secs: default_timeout_secs(),
            max_retries: default_retries(),
        }
    }
}

#[derive(Serialize)]
struct PromptRequest<'a> {
    prompt: &'a str,
}

#[derive(Serialize, Deserialize)]
struct CompletionResponse {
    completion: String,
}

/// Text-completion client for a remote oracle endpoint.
pub struct HttpOracle {
    agent: ureq::Agent,
    config: HttpOracleConfig,
}

impl HttpOracle {
    pub fn new(config: HttpOracleConfig) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build();
        Self { agent, config }
    }

    fn attempt(&self, prompt: &str) -> Result<String, Box<ureq::Error>> {
        let mut request = self.agent.post(&self.config.url);
        if let Some(token) = &self.config.bearer_token {
            request = request.set("Authorization", &format!("Bearer {token}"));
        }
        let response = request.send_json(PromptRequest { prompt })?;
        let parsed: CompletionResponse = response
            .into_json()
            .map_err(|e| Box::new(ureq::Error::from(e)))?;
        Ok(parsed.completion)
    }
}

impl InferenceOracle for HttpOracle {
    fn complete(&self, prompt: &str) -> Result<String, OracleError> {
        let mut last_error = None;
        for _ in 0..=self.config.max_retries {
            match self.attempt(prompt) {
                Ok(completion) => return Ok(completion),
                Err(e) => match *e {
                    // 4xx means the request itself is wrong; retrying cannot help.
                    ureq::Error::Status(code, _) if (400..500).contains(&code) => {
                        return Err(OracleError::new(format!("endpoint returned status {code}")));
                    }
                    _ => last_error = Some(e),
                },
            }
        }
        Err(OracleError::new(format!(
            "request failed after {} attempts: {}",
            self.config.max_retries + 1,
            last_error.map_or_else(|| "unknown".to_string(), |e| e.to_string())
        )))
    }
}

/// A running loopback oracle server. Shuts down when dropped.
pub struct OracleServer {
    server: Arc<tiny_http::Server>,
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    workers: Vec<JoinHandle<()>>,
}

impl OracleServer {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn url(&self) -> String {
        format!("http://{}/complete", self.addr)
    }

    pub fn shutdown(mut self) {
        self.stop_workers();
    }

    fn stop_workers(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // unblock() wakes exactly one blocked recv(); issue one per worker.
        for _ in 0..self.workers.len() {
            self.server.unblock();
        }
        for handle in self.workers.drain(..) {
            let _ = handle.join();
        }
    }

    /// Block until the server is shut down from another thread (used by the
    /// CLI serve command, which runs until interrupted).
    pub fn wait(mut self) {
        let workers = std::mem::take(&mut self.workers);
        for handle in workers {
            let _ = handle.join();
        }
    }
}

impl Drop for OracleServer {
    fn drop(&mut self) {
        self.stop_workers();
    }
}

/// Serve an oracle over the wire contract on `addr` (e.g. "127.0.0.1:0").
pub fn serve_oracle(
    oracle: Arc<dyn InferenceOracle>,
    addr: &str,
    workers: usize,
) -> Result<OracleServer, OracleError> {
    let server = tiny_http::Server::http(addr)
        .map_err(|e| OracleError::new(format!("failed to bind {addr}: {e}")))?;
    let addr = match server.server_addr() {
        tiny_http::ListenAddr::IP(ip) => ip,
        other => {
            return Err(OracleError::new(format!(
                "unsupported listen address {other:?}"
            )))
        }
    };
    let server = Arc::new(server);
    let stop = Arc::new(AtomicBool::new(false));
    let mut handles = Vec::new();
    for _ in 0..workers.max(1) {
        let server = Arc::clone(&server);
        let oracle = Arc::clone(&oracle);
        let stop = Arc::clone(&stop);
        handles.push(std::thread::spawn(move || loop {
            if stop.load(Ordering::SeqCst) {
                break;
            }
            let request = match server.recv() {
                Ok(req) => req,
                Err(_) => break,
            };
            handle_request(&*oracle, request);
        }));
    }
    Ok(OracleServer {
        server,
        addr,
        stop,
        workers: handles,
    })
}

fn handle_request(oracle: &dyn InferenceOracle, mut request: tiny_http::Request) {
    let mut body = String::new();
    if request.as_reader().read_to_string(&mut body).is_err() {
        respond(request, 400, r#"{"error":"unreadable body"}"#);
        return;
    }
    let prompt = match serde_json::from_str::<serde_json::Value>(&body) {
        Ok(value) => match value.get("prompt").and_then(|p| p.as_str()) {
            Some(p) => p.to_string(),
            None => {
                respond(request, 400, r#"{"error":"missing prompt field"}"#);
                return;
            }
        },
        Err(_) => {
            respond(request, 400, r#"{"error":"invalid json"}"#);
            return;
        }
    };
    match oracle.complete(&prompt) {
        Ok(completion) => {
            let body = serde_json::to_string(&CompletionResponse { completion })
                .expect("completion serialization cannot fail");
            respond(request, 200, &body);
        }
        Err(e) => {
            let body = format!(r#"{{"error":{}}}"#, serde_json::Value::from(e.to_string()));
            respond(request, 500, &body);
        }
    }
}

fn respond(request: tiny_http::Request, status: u16, body: &str) {
    let header =
        tiny_http::Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..]).unwrap();
    let response = tiny_http::Response::from_string(body)
        .with_status_code(status)
        .with_header(header);
    let _ = request.respond(response);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{simulate, OracleProfile};
    use crate::watermark::{builtin_spec, Builtin};

    #[test]
    fn loopback_round_trip_completes() {
        let spec = builtin_spec(Builtin::I);
        let oracle = simulate(&OracleProfile::watermarked(spec.clone(), 7)).unwrap();
        let server = serve_oracle(Arc::new(oracle), "127.0.0.1:0", 2).unwrap();
        let client = HttpOracle::new(HttpOracleConfig::new(server.url()));

        let sets = crate::dataset::build_verification_sets(&spec, 3, 5).unwrap();
        for sample in &sets.trigger {
            let prompt = crate::dataset::render_prompt(sample);
            assert_eq!(client.complete(&prompt).unwrap(), "Yes.");
        }
        for sample in &sets.reference {
            let prompt = crate::dataset::render_prompt(sample);
            assert_eq!(client.complete(&prompt).unwrap(), "No.");
        }
        server.shutdown();
    }

    #[test]
    fn bad_requests_get_400() {
        let spec = builtin_spec(Builtin::I);
        let oracle = simulate(&OracleProfile::watermarked(spec, 7)).unwrap();
        let server = serve_oracle(Arc::new(oracle), "127.0.0.1:0", 1).unwrap();
        let resp = ureq::post(&server.url()).send_string("not json");
        match resp {
            Err(ureq::Error::Status(code, _)) => assert_eq!(code, 400),
            other => panic!("expected 400, got {other:?}"),
        }
        server.shutdown();
    }

    #[test]
    fn client_reports_unreachable_endpoints() {
        let client = HttpOracle::new(HttpOracleConfig {
            url: "http://127.0.0.1:1/complete".to_string(),
            bearer_token: None,
            timeout_secs: 1,
            max_retries: 0,
        });
        assert!(client.complete("prompt").is_err());
    }
}
