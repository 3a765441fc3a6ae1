use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

/// The command line without the program path, which varies between installs.
pub fn invocation() -> String {
    let mut line = String::from("platonic-cf");
    for arg in std::env::args().skip(1) {
        line.push(' ');
        line.push_str(&arg);
    }
    line
}

/// CSV text with `#` comment headers, written once when complete.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(invocation: &str, seed: Option<u64>) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# command: {invocation}");
        let _ = writeln!(text, "# version: {}", env!("CARGO_PKG_VERSION"));
        match seed {
            Some(s) => {
                let _ = writeln!(text, "# seed: {s}");
            }
            None => text.push_str("# seed: none\n"),
        }
        Csv { text }
    }

    pub fn comment(&mut self, line: &str) {
        let _ = writeln!(self.text, "# {line}");
    }

    pub fn columns<S: AsRef<str>>(&mut self, names: &[S]) {
        let names: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
        self.text.push_str(&names.join(","));
        self.text.push('\n');
    }

    pub fn row(&mut self, values: &[f64]) {
        for (i, &v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            self.text.push_str(&number(v));
        }
        self.text.push('\n');
    }

    pub fn write_to(&self, path: Option<&Path>) -> io::Result<()> {
        emit(&self.text, path)
    }
}

/// Shortest decimal that round-trips to the same `f64`, in exponent form
/// for very small or very large magnitudes.
pub fn number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}
