use serde_json::Value;

/// Output of one command: text lines, a JSON value and warnings.
#[derive(Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub json: Value,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn line(&mut self, s: String) {
        self.lines.push(s);
    }

    pub fn warn(&mut self, s: String) {
        if !self.warnings.contains(&s) {
            self.warnings.push(s);
        }
    }

    /// Warnings go to stderr so stdout stays parseable.
    pub fn emit(&self, json: bool) {
        for w in &self.warnings {
            eprintln!("warning: {w}");
        }
        if json {
            println!(
                "{}",
                serde_json::to_string(&self.json).expect("serializable")
            );
        } else {
            for l in &self.lines {
                println!("{l}");
            }
        }
    }
}
