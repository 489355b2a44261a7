use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::Deserialize;

use super::{EndpointConfig, GenerationParams, LlmError};

/// A source of completions.
pub trait TextGenerator: Send + Sync {
    fn generate(&self, prompt: &str, params: &GenerationParams) -> Result<String, LlmError>;

    /// Short label for logs and transcripts.
    fn label(&self) -> String;
}

/// Single-POST JSON backend. The bearer token is read from the configured
/// environment variable at request time and never stored.
#[derive(Debug)]
pub struct HttpBackend {
    agent: ureq::Agent,
    url: String,
    model: String,
    token_env: Option<String>,
    response_pointer: String,
}

impl HttpBackend {
    pub fn new(cfg: &EndpointConfig) -> Result<Self, LlmError> {
        cfg.check()?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(cfg.timeout_secs)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(HttpBackend {
            agent,
            url: cfg.base_url.clone(),
            model: cfg.model.clone(),
            token_env: cfg.token_env.clone(),
            response_pointer: cfg.response_pointer.clone(),
        })
    }

    pub fn request_body(&self, prompt: &str, params: &GenerationParams) -> String {
        serde_json::json!({
            "model": self.model,
            "prompt": prompt,
            "temperature": params.temperature,
            "top_p": params.top_p,
            "max_tokens": params.max_tokens,
        })
        .to_string()
    }
}

fn transport(e: ureq::Error) -> LlmError {
    match e {
        ureq::Error::Timeout(_) | ureq::Error::ConnectionFailed | ureq::Error::HostNotFound | ureq::Error::Io(_) => {
            LlmError::Timeout
        }
        ureq::Error::StatusCode(s) => status_error(s),
        other => LlmError::Protocol(other.to_string()),
    }
}

fn status_error(status: u16) -> LlmError {
    match status {
        401 | 403 => LlmError::AuthError(format!("endpoint rejected credentials (status {status})")),
        s => LlmError::HttpError(s),
    }
}

impl TextGenerator for HttpBackend {
    fn generate(&self, prompt: &str, params: &GenerationParams) -> Result<String, LlmError> {
        let mut req = self.agent.post(&self.url).header("content-type", "application/json");
        if let Some(var) = &self.token_env {
            let token = std::env::var(var)
                .map_err(|_| LlmError::AuthError(format!("environment variable {var} is not set")))?;
            req = req.header("authorization", &format!("Bearer {token}"));
        }
        let mut resp = req.send(self.request_body(prompt, params)).map_err(transport)?;
        let status = resp.status().as_u16();
        if !(200..300).contains(&status) {
            return Err(status_error(status));
        }
        let text = resp.body_mut().read_to_string().map_err(transport)?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| LlmError::Protocol(format!("response is not JSON: {e}")))?;
        value
            .pointer(&self.response_pointer)
            .and_then(|v| v.as_str())
            .map(String::from)
            .ok_or_else(|| LlmError::Protocol(format!("no string at {} in response", self.response_pointer)))
    }

    fn label(&self) -> String {
        format!("http {} model={}", self.url, self.model)
    }
}

/// Deterministic prompt-to-completion table.
#[derive(Debug, Clone, Default)]
pub struct MockBackend {
    table: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct MockLine {
    prompt: String,
    completion: String,
}

impl MockBackend {
    pub fn new(table: BTreeMap<String, String>) -> Self {
        MockBackend { table }
    }

    /// Accepts a JSON object `{prompt: completion}` or JSON lines carrying
    /// `prompt` and `completion` fields (corpus files qualify).
    pub fn parse(text: &str) -> Result<Self, LlmError> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let records: Result<Vec<MockLine>, _> = lines.iter().map(|l| serde_json::from_str::<MockLine>(l)).collect();
        if let Ok(records) = records {
            return Ok(MockBackend {
                table: records.into_iter().map(|m| (m.prompt, m.completion)).collect(),
            });
        }
        serde_json::from_str::<BTreeMap<String, String>>(text)
            .map(|table| MockBackend { table })
            .map_err(|e| LlmError::Config(format!("mock file is neither a JSON object nor JSON lines: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, LlmError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LlmError::Config(format!("cannot read mock file {}: {e}", path.display())))?;
        MockBackend::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl TextGenerator for MockBackend {
    fn generate(&self, prompt: &str, _: &GenerationParams) -> Result<String, LlmError> {
        self.table.get(prompt).cloned().ok_or(LlmError::NoCompletion)
    }

    fn label(&self) -> String {
        format!("mock ({} prompts)", self.table.len())
    }
}
