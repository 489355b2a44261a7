//! Text-generation client for inference-time completions and the
//! extraction of encodings from free-form completion text.
//!
//! Endpoint credentials are referenced by environment-variable name only;
//! neither configs, transcripts nor log lines carry the token value.

mod backend;
mod extract;

use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::encode::PlfDocument;
use crate::par;

pub use backend::{HttpBackend, MockBackend, TextGenerator};
pub use extract::{extract_dimacs, extract_plf, ExtractError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub enum LlmError {
    #[error("request timed out or endpoint unreachable")]
    Timeout,
    #[error("endpoint returned HTTP status {0}")]
    HttpError(u16),
    #[error("authentication failed: {0}")]
    AuthError(String),
    #[error("malformed response: {0}")]
    Protocol(String),
    #[error("mock backend has no completion for this prompt")]
    NoCompletion,
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
    #[error("invalid endpoint config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationParams {
    pub temperature: f64,
    pub top_p: f64,
    pub max_tokens: u32,
}

impl Default for GenerationParams {
    fn default() -> Self {
        GenerationParams {
            temperature: 0.0,
            top_p: 1.0,
            max_tokens: 1200,
        }
    }
}

impl GenerationParams {
    pub fn check(&self) -> Result<(), LlmError> {
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(LlmError::InvalidParams(format!(
                "temperature {} must be >= 0",
                self.temperature
            )));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(LlmError::InvalidParams(format!(
                "top_p {} must be in (0, 1]",
                self.top_p
            )));
        }
        if self.max_tokens == 0 {
            return Err(LlmError::InvalidParams("max_tokens must be positive".into()));
        }
        Ok(())
    }

    /// Parses `t=0.0,top_p=1.0,max_tokens=1200`; omitted keys keep defaults.
    pub fn parse(text: &str) -> Result<Self, LlmError> {
        let mut p = GenerationParams::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| LlmError::InvalidParams(format!("expected key=value, got {item:?}")))?;
            let bad = |e: &dyn std::fmt::Display| LlmError::InvalidParams(format!("{k}: {e}"));
            match k.trim() {
                "t" | "temperature" => p.temperature = v.trim().parse().map_err(|e| bad(&e))?,
                "top_p" | "p" => p.top_p = v.trim().parse().map_err(|e| bad(&e))?,
                "max_tokens" => p.max_tokens = v.trim().parse().map_err(|e| bad(&e))?,
                other => return Err(LlmError::InvalidParams(format!("unknown key {other:?}"))),
            }
        }
        p.check()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Http,
    Mock,
}

fn default_timeout() -> f64 {
    60.0
}
fn default_in_flight() -> usize {
    4
}
fn default_retries() -> u32 {
    2
}
fn default_backoff() -> u64 {
    500
}
fn default_pointer() -> String {
    "/completion".into()
}

/// Endpoint settings, loaded from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointConfig {
    #[serde(default)]
    pub kind: BackendKind,
    #[serde(default)]
    pub base_url: String,
    #[serde(default)]
    pub model: String,
    /// Name of the environment variable holding the bearer token.
    #[serde(default)]
    pub token_env: Option<String>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_in_flight")]
    pub max_in_flight: usize,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
    /// JSON pointer to the completion string in the response body.
    #[serde(default = "default_pointer")]
    pub response_pointer: String,
    #[serde(default)]
    pub mock_file: Option<PathBuf>,
    #[serde(default)]
    pub params: Option<GenerationParams>,
}

impl EndpointConfig {
    pub fn http(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        EndpointConfig {
            kind: BackendKind::Http,
            base_url: base_url.into(),
            model: model.into(),
            token_env: None,
            timeout_secs: default_timeout(),
            max_in_flight: default_in_flight(),
            max_retries: default_retries(),
            backoff_ms: default_backoff(),
            response_pointer: default_pointer(),
            mock_file: None,
            params: None,
        }
    }

    pub fn mock(file: impl Into<PathBuf>) -> Self {
        EndpointConfig {
            kind: BackendKind::Mock,
            mock_file: Some(file.into()),
            ..EndpointConfig::http("", "")
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, LlmError> {
        let cfg: EndpointConfig = toml::from_str(text).map_err(|e| LlmError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Loads a config file; a relative `mock_file` resolves against the
    /// config's directory.
    pub fn load(path: &Path) -> Result<Self, LlmError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LlmError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = EndpointConfig::from_toml(&text)?;
        if let (Some(f), Some(dir)) = (&cfg.mock_file, path.parent()) {
            if f.is_relative() {
                cfg.mock_file = Some(dir.join(f));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn check(&self) -> Result<(), LlmError> {
        if !(self.timeout_secs.is_finite() && self.timeout_secs > 0.0) {
            return Err(LlmError::Config(format!(
                "timeout {} must be positive",
                self.timeout_secs
            )));
        }
        if self.max_in_flight == 0 {
            return Err(LlmError::Config("max_in_flight must be positive".into()));
        }
        if let Some(p) = &self.params {
            p.check()?;
        }
        match self.kind {
            BackendKind::Mock if self.mock_file.is_none() => {
                Err(LlmError::Config("mock backend needs mock_file".into()))
            }
            BackendKind::Mock => Ok(()),
            BackendKind::Http => {
                check_url(&self.base_url)?;
                if let Some(var) = &self.token_env {
                    let ok = !var.is_empty() && var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok {
                        return Err(LlmError::Config(format!("{var:?} is not an environment variable name")));
                    }
                }
                if !self.response_pointer.is_empty() && !self.response_pointer.starts_with('/') {
                    return Err(LlmError::Config("response_pointer must start with '/'".into()));
                }
                Ok(())
            }
        }
    }

    pub fn backend(&self) -> Result<Box<dyn TextGenerator>, LlmError> {
        self.check()?;
        Ok(match self.kind {
            BackendKind::Http => Box::new(HttpBackend::new(self)?),
            BackendKind::Mock => Box::new(MockBackend::load(self.mock_file.as_deref().expect("checked"))?),
        })
    }
}

fn check_url(url: &str) -> Result<(), LlmError> {
    let rest = url
        .strip_prefix("http://")
        .or_else(|| url.strip_prefix("https://"))
        .ok_or_else(|| LlmError::Config(format!("base_url {url:?} must start with http:// or https://")))?;
    let host = rest.split(['/', '?', '#']).next().unwrap_or("");
    let host_ok = !host.is_empty()
        && !host.contains(char::is_whitespace)
        && !host.contains('@')
        && host
            .rsplit_once(':')
            .is_none_or(|(h, port)| !h.is_empty() && port.parse::<u16>().is_ok());
    if !host_ok || url.contains(char::is_whitespace) {
        return Err(LlmError::Config(format!("base_url {url:?} is not a well-formed URL")));
    }
    Ok(())
}

/// One request as recorded for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exchange {
    pub backend: String,
    pub prompt: String,
    pub params: GenerationParams,
    pub attempts: u32,
    pub elapsed_ms: u64,
    pub completion: Option<String>,
    pub error: Option<LlmError>,
}

/// Backend plus retry policy, in-flight bound and transcript.
pub struct Client {
    backend: Box<dyn TextGenerator>,
    max_in_flight: usize,
    max_retries: u32,
    backoff: Duration,
    transcript: Mutex<Vec<Exchange>>,
}

impl Client {
    pub fn new(backend: Box<dyn TextGenerator>, cfg: &EndpointConfig) -> Self {
        Client {
            backend,
            max_in_flight: cfg.max_in_flight.max(1),
            max_retries: cfg.max_retries,
            backoff: Duration::from_millis(cfg.backoff_ms),
            transcript: Mutex::new(Vec::new()),
        }
    }

    pub fn from_config(cfg: &EndpointConfig) -> Result<Self, LlmError> {
        Ok(Client::new(cfg.backend()?, cfg))
    }

    fn exchange(&self, prompt: &str, params: &GenerationParams) -> Exchange {
        let start = Instant::now();
        let mut attempts = 0;
        let result = loop {
            attempts += 1;
            log::debug!(
                "request to {}: {} prompt chars, t={} top_p={} max_tokens={}",
                self.backend.label(),
                prompt.len(),
                params.temperature,
                params.top_p,
                params.max_tokens
            );
            match self.backend.generate(prompt, params) {
                Err(LlmError::Timeout) if attempts <= self.max_retries => {
                    let wait = self.backoff * 2u32.pow(attempts - 1);
                    log::warn!("timeout from {}, retry {attempts} in {wait:?}", self.backend.label());
                    std::thread::sleep(wait);
                }
                r => break r,
            }
        };
        match &result {
            Ok(text) => log::debug!("completion: {} chars after {attempts} attempt(s)", text.len()),
            Err(e) => log::warn!("generation failed after {attempts} attempt(s): {e}"),
        }
        let (completion, error) = match result {
            Ok(t) => (Some(t), None),
            Err(e) => (None, Some(e)),
        };
        Exchange {
            backend: self.backend.label(),
            prompt: prompt.to_string(),
            params: *params,
            attempts,
            elapsed_ms: start.elapsed().as_millis() as u64,
            completion,
            error,
        }
    }

    fn outcome(x: &Exchange) -> Result<String, LlmError> {
        match (&x.completion, &x.error) {
            (Some(t), _) => Ok(t.clone()),
            (None, Some(e)) => Err(e.clone()),
            (None, None) => unreachable!("exchange has an outcome"),
        }
    }

    /// Returns the completion verbatim. Retries only on `Timeout`.
    pub fn generate(&self, prompt: &str, params: &GenerationParams) -> Result<String, LlmError> {
        params.check()?;
        let x = self.exchange(prompt, params);
        let r = Client::outcome(&x);
        self.transcript.lock().expect("transcript lock").push(x);
        r
    }

    /// Generates for every prompt with at most `max_in_flight` requests
    /// outstanding. Results and transcript entries keep prompt order.
    pub fn generate_all(&self, prompts: &[String], params: &GenerationParams) -> Vec<Result<String, LlmError>> {
        if let Err(e) = params.check() {
            return prompts.iter().map(|_| Err(e.clone())).collect();
        }
        let xs = par::map_bounded(self.max_in_flight, prompts, |p| self.exchange(p, params));
        let out = xs.iter().map(Client::outcome).collect();
        self.transcript.lock().expect("transcript lock").extend(xs);
        out
    }

    pub fn transcript(&self) -> Vec<Exchange> {
        self.transcript.lock().expect("transcript lock").clone()
    }

    pub fn transcript_jsonl(&self) -> String {
        self.transcript()
            .iter()
            .map(|x| serde_json::to_string(x).expect("exchange serializes") + "\n")
            .collect()
    }
}

/// One-shot generation through the configured backend.
pub fn generate(prompt: &str, params: &GenerationParams, cfg: &EndpointConfig) -> Result<String, LlmError> {
    Client::from_config(cfg)?.generate(prompt, params)
}

/// A completion with its extraction outcome; `verdict` is set by grading.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionResult {
    pub raw: String,
    pub extracted: Result<PlfDocument, ExtractError>,
    pub verdict: Option<bool>,
}

impl CompletionResult {
    pub fn new(raw: impl Into<String>) -> Self {
        let raw = raw.into();
        let extracted = extract_plf(&raw);
        CompletionResult {
            raw,
            extracted,
            verdict: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn params_parse_and_defaults() {
        let p = GenerationParams::parse("t=0.0,top_p=1.0,max_tokens=1200").unwrap();
        assert_eq!(p, GenerationParams::default());
        assert_eq!(GenerationParams::parse("t=0.7, top_p=0.9").unwrap().top_p, 0.9);
        for bad in ["t=-1", "top_p=0", "top_p=1.5", "max_tokens=0", "x=1", "t"] {
            assert!(GenerationParams::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_validation() {
        let cfg = EndpointConfig::from_toml(
            "base_url = \"http://127.0.0.1:8080/generate\"\nmodel = \"m\"\ntoken_env = \"API_TOKEN\"\n",
        )
        .unwrap();
        assert_eq!(cfg.max_in_flight, 4);
        assert_eq!(cfg.max_retries, 2);
        assert_eq!(EndpointConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        for bad in [
            "base_url = \"ftp://x\"",
            "base_url = \"http://\"",
            "base_url = \"http://h:99999/\"",
            "base_url = \"http://h\"\ntimeout_secs = 0",
            "base_url = \"http://h\"\ntoken_env = \"not a name\"",
            "kind = \"mock\"",
            "base_url = \"http://h\"\ntoken = \"s3cret\"",
        ] {
            assert!(EndpointConfig::from_toml(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn mock_returns_canned_text() {
        let golden = "# inputs: a b\n# outputs: y\ny <-> a & b\n";
        let mock = MockBackend::new(BTreeMap::from([("p1".to_string(), golden.to_string())]));
        let client = Client::new(Box::new(mock), &EndpointConfig::mock("unused"));
        assert_eq!(client.generate("p1", &GenerationParams::default()).unwrap(), golden);
        assert_eq!(
            client.generate("p2", &GenerationParams::default()),
            Err(LlmError::NoCompletion)
        );
        assert_eq!(client.transcript().len(), 2);
        let jsonl = MockBackend::parse("{\"prompt\":\"p\",\"completion\":\"c\"}\n").unwrap();
        assert_eq!(jsonl.generate("p", &GenerationParams::default()).unwrap(), "c");
    }

    struct Flaky(Mutex<u32>);

    impl TextGenerator for Flaky {
        fn generate(&self, _: &str, _: &GenerationParams) -> Result<String, LlmError> {
            let mut n = self.0.lock().unwrap();
            *n += 1;
            if *n < 3 {
                Err(LlmError::Timeout)
            } else {
                Ok("ok".into())
            }
        }
        fn label(&self) -> String {
            "flaky".into()
        }
    }

    #[test]
    fn retries_only_timeouts() {
        let mut cfg = EndpointConfig::mock("unused");
        cfg.backoff_ms = 1;
        let client = Client::new(Box::new(Flaky(Mutex::new(0))), &cfg);
        assert_eq!(client.generate("p", &GenerationParams::default()).unwrap(), "ok");
        assert_eq!(client.transcript()[0].attempts, 3);

        cfg.max_retries = 1;
        let client = Client::new(Box::new(Flaky(Mutex::new(0))), &cfg);
        assert_eq!(
            client.generate("p", &GenerationParams::default()),
            Err(LlmError::Timeout)
        );
        assert_eq!(client.transcript()[0].attempts, 2);
    }

    #[test]
    fn unreachable_endpoint_is_timeout() {
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        let port = listener.local_addr().unwrap().port();
        drop(listener);
        let mut cfg = EndpointConfig::http(format!("http://127.0.0.1:{port}/generate"), "m");
        cfg.backoff_ms = 1;
        cfg.timeout_secs = 2.0;
        let client = Client::from_config(&cfg).unwrap();
        assert_eq!(
            client.generate("p", &GenerationParams::default()),
            Err(LlmError::Timeout)
        );
        assert_eq!(client.transcript()[0].attempts, 3);
    }

    #[test]
    fn batch_keeps_order() {
        let table: BTreeMap<String, String> = (0..12).map(|i| (format!("p{i}"), format!("c{i}"))).collect();
        let client = Client::new(Box::new(MockBackend::new(table)), &EndpointConfig::mock("unused"));
        let prompts: Vec<String> = (0..12).map(|i| format!("p{i}")).collect();
        let out = client.generate_all(&prompts, &GenerationParams::default());
        for (i, r) in out.iter().enumerate() {
            assert_eq!(r.as_deref().unwrap(), format!("c{i}"));
        }
        let t = client.transcript();
        assert!(t.iter().enumerate().all(|(i, x)| x.prompt == format!("p{i}")));
    }
}
