//! JSON-over-HTTP translation client.
//!
//! Request:  `POST <endpoint>` with `{"source":"id","target":"en","q":[...]}`
//! and `Authorization: Bearer $TRANSLATE_API_KEY`.
//! Response: `{"translations":[...]}`, one entry per input word.

use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::translate::{TranslationProvider, DEFAULT_BATCH_SIZE};
use super::SentimentError;

pub const API_KEY_ENV: &str = "TRANSLATE_API_KEY";

#[derive(Debug, Clone)]
pub struct HttpConfig {
    pub endpoint: String,
    pub api_key: String,
    pub batch_size: usize,
    /// Retries after the first attempt.
    pub max_retries: u32,
    /// Delay before the first retry; doubled for each further retry.
    pub initial_backoff: Duration,
    pub timeout: Duration,
}

impl HttpConfig {
    pub fn new(endpoint: impl Into<String>, api_key: impl Into<String>) -> Self {
        HttpConfig {
            endpoint: endpoint.into(),
            api_key: api_key.into(),
            batch_size: DEFAULT_BATCH_SIZE,
            max_retries: 3,
            initial_backoff: Duration::from_millis(500),
            timeout: Duration::from_secs(30),
        }
    }

    /// Reads the API key from `TRANSLATE_API_KEY`.
    pub fn from_env(endpoint: impl Into<String>) -> Result<Self, SentimentError> {
        match std::env::var(API_KEY_ENV) {
            Ok(key) if !key.trim().is_empty() => Ok(HttpConfig::new(endpoint, key.trim())),
            _ => Err(SentimentError::ProviderUnavailable(format!(
                "{API_KEY_ENV} is not set"
            ))),
        }
    }
}

#[derive(Serialize)]
struct Request<'a> {
    source: &'a str,
    target: &'a str,
    q: &'a [String],
}

#[derive(Deserialize)]
struct Response {
    translations: Vec<String>,
}

pub struct HttpProvider {
    config: HttpConfig,
    client: reqwest::blocking::Client,
}

impl HttpProvider {
    pub fn new(config: HttpConfig) -> Result<Self, SentimentError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| SentimentError::ProviderUnavailable(e.to_string()))?;
        Ok(HttpProvider { config, client })
    }

    fn attempt(&self, body: &Request<'_>) -> Result<Vec<String>, Attempt> {
        let resp = self
            .client
            .post(&self.config.endpoint)
            .bearer_auth(&self.config.api_key)
            .json(body)
            .send()
            .map_err(|e| Attempt::Retry(e.to_string()))?;
        let status = resp.status();
        if status.is_server_error() || status == reqwest::StatusCode::TOO_MANY_REQUESTS {
            return Err(Attempt::Retry(format!("HTTP {status}")));
        }
        if !status.is_success() {
            return Err(Attempt::Fatal(format!("HTTP {status}")));
        }
        let parsed: Response = resp
            .json()
            .map_err(|e| Attempt::Fatal(format!("malformed response: {e}")))?;
        Ok(parsed.translations)
    }
}

enum Attempt {
    Retry(String),
    Fatal(String),
}

impl TranslationProvider for HttpProvider {
    fn name(&self) -> String {
        format!("http:{}", self.config.endpoint)
    }

    fn batch_size(&self) -> usize {
        self.config.batch_size.max(1)
    }

    fn translate(&self, words: &[String], source: &str, target: &str) -> Result<Vec<String>, SentimentError> {
        let body = Request {
            source,
            target,
            q: words,
        };
        let mut delay = self.config.initial_backoff;
        let mut attempt = 0;
        loop {
            match self.attempt(&body) {
                Ok(out) => return Ok(out.into_iter().map(|w| w.trim().to_lowercase()).collect()),
                Err(Attempt::Fatal(msg)) => {
                    return Err(SentimentError::ProviderUnavailable(format!(
                        "{}: {msg}",
                        self.config.endpoint
                    )))
                }
                Err(Attempt::Retry(msg)) if attempt >= self.config.max_retries => {
                    return Err(SentimentError::ProviderUnavailable(format!(
                        "{}: {msg} (gave up after {} attempts)",
                        self.config.endpoint,
                        attempt + 1
                    )))
                }
                Err(Attempt::Retry(_)) => {
                    thread::sleep(delay);
                    delay *= 2;
                    attempt += 1;
                }
            }
        }
    }
}
