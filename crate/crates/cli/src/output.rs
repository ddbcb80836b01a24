use std::io::{self, IsTerminal, Write};
use std::process::ExitCode;

use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// A command failure: the message goes to stderr, the code becomes the
/// exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl ToString) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }

    pub fn usage(message: impl ToString) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

pub struct Output {
    pub json: bool,
    color: bool,
}

impl Output {
    pub fn new(json: bool, color: bool) -> Self {
        Self {
            json,
            color: color && !json && io::stdout().is_terminal(),
        }
    }

    /// Writes `text` in text mode or `value` in JSON mode.
    pub fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
        let mut stdout = io::stdout().lock();
        let result = if self.json {
            writeln!(
                stdout,
                "{}",
                serde_json::to_string_pretty(&value()).expect("values serialize")
            )
        } else {
            write!(stdout, "{}", text())
        };
        // a closed pipe is not worth a diagnostic
        let _ = result.and_then(|_| stdout.flush());
    }

    pub fn red(&self, s: &str) -> String {
        self.paint("31", s)
    }

    pub fn yellow(&self, s: &str) -> String {
        self.paint("33", s)
    }

    pub fn green(&self, s: &str) -> String {
        self.paint("32", s)
    }

    fn paint(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    pub fn fail(&self, failure: Failure) -> ExitCode {
        eprintln!("taxo: {}", failure.message);
        if self.json {
            println!("{}", error_document(&failure.message, failure.code));
        }
        ExitCode::from(failure.code)
    }
}

fn error_document(message: &str, code: u8) -> String {
    serde_json::to_string_pretty(&json!({ "error": message, "exit_code": code })).expect("values serialize")
}

/// Reports a command-line parsing error. Help and version requests succeed.
pub fn usage_error(e: clap::Error) -> ExitCode {
    use clap::error::ErrorKind;
    if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        let _ = e.print();
        return ExitCode::from(EXIT_OK);
    }
    let _ = e.print();
    if std::env::args().any(|a| a == "--json") {
        let message = e.kind().to_string();
        println!("{}", error_document(&message, EXIT_USAGE));
    }
    ExitCode::from(EXIT_USAGE)
}
