// Copyright 2026 The ESC Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Splitting SQL text into statements on `;`, outside quotes and `--`
//! comments.

#[derive(Debug, Default)]
pub struct Splitter {
    buf: String,
    quote: Option<char>,
}

impl Splitter {
    /// Feeds a chunk (a line, or a whole file) and returns the statements it
    /// completed. Comments are dropped.
    pub fn push(&mut self, text: &str) -> Vec<String> {
        let mut done = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            match self.quote {
                Some(q) => {
                    self.buf.push(c);
                    if c == q {
                        self.quote = None;
                    }
                }
                None => match c {
                    '\'' | '"' => {
                        self.quote = Some(c);
                        self.buf.push(c);
                    }
                    '-' if chars.peek() == Some(&'-') => {
                        for rest in chars.by_ref() {
                            if rest == '\n' {
                                self.buf.push('\n');
                                break;
                            }
                        }
                    }
                    ';' => {
                        let stmt = self.buf.trim().to_string();
                        self.buf.clear();
                        if !stmt.is_empty() {
                            done.push(stmt);
                        }
                    }
                    _ => self.buf.push(c),
                },
            }
        }
        done
    }

    /// Whatever is left once input ends.
    pub fn finish(&mut self) -> Option<String> {
        let stmt = std::mem::take(&mut self.buf).trim().to_string();
        self.quote = None;
        (!stmt.is_empty()).then_some(stmt)
    }

    pub fn is_empty(&self) -> bool {
        self.buf.trim().is_empty()
    }
}

pub fn split_statements(text: &str) -> Vec<String> {
    let mut s = Splitter::default();
    let mut out = s.push(text);
    out.extend(s.finish());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotes_and_comments() {
        let text =
            "SELECT 'a;b' FROM t; -- note; here\nSELECT 1 FROM u\n;\n;  SELECT x FROM \"we;ird\"";
        assert_eq!(
            split_statements(text),
            [
                "SELECT 'a;b' FROM t",
                "SELECT 1 FROM u",
                "SELECT x FROM \"we;ird\""
            ]
        );
    }

    #[test]
    fn statements_span_lines() {
        let mut s = Splitter::default();
        assert!(s.push("SELECT COUNT(*)\n").is_empty());
        assert!(!s.is_empty());
        assert_eq!(s.push("FROM t;\n"), ["SELECT COUNT(*)\nFROM t"]);
        assert!(s.is_empty());
        assert_eq!(s.finish(), None);
    }

    #[test]
    fn doubled_quote_stays_inside_string() {
        assert_eq!(
            split_statements("SELECT 'it''s;' FROM t;"),
            ["SELECT 'it''s;' FROM t"]
        );
    }
}
