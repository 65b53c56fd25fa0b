use serde::de::DeserializeOwned;
use serde::Serialize;

/// Pretty JSON with a trailing newline. Rationals are `{"num", "den"}` digit strings.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> serde_json::Result<T> {
    serde_json::from_str(text)
}
