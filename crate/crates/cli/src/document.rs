use serde::Serialize;
use serde_json::Value;

use crate::args::Command;

pub const SCHEMA_VERSION: &str = "neocalc/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub kind: &'static str,
    pub message: String,
}

impl Warning {
    /// A request that reproduces a published claim the definitions contradict
    /// or do not certify.
    pub fn paper_note(message: impl Into<String>) -> Self {
        Warning {
            kind: "paper_note",
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub request: Value,
    pub results: Value,
    pub diagnostics: Value,
    pub warnings: Vec<Warning>,
}

impl ReportDocument {
    pub fn new(
        command: &Command,
        results: Value,
        diagnostics: Value,
        warnings: Vec<Warning>,
    ) -> Self {
        let mut request = serde_json::to_value(command).unwrap_or(Value::Null);
        if let Value::Object(map) = &mut request {
            map.remove("command");
        }
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            command: command.name(),
            request,
            results,
            diagnostics,
            warnings,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{GalleryList, Output};

    #[test]
    fn request_echo_drops_the_tag() {
        let cmd = Command::GalleryList(GalleryList {
            output: Output { out: None },
        });
        let doc = ReportDocument::new(&cmd, Value::Null, Value::Null, vec![]);
        assert_eq!(doc.request, serde_json::json!({}));
        let json = doc.to_json();
        assert!(json.ends_with("}\n"));
        assert!(json.contains("\"schema_version\": \"neocalc/1\""));
    }
}
