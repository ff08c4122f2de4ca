//! Plain-text interferometer files.
//!
//! ```text
//! # optional comments
//! MODES 3
//! BS 1 3 1.5707963267948966e0 0e0 0e0
//! PHASE 2 7.8539816339744828e-1
//! ```
//!
//! Mode labels are 1-based. `BS a b ω φ θ` lines are listed in the order light
//! meets them; `PHASE m χ` lines belong to the input-side phase layer and are
//! only written for nonzero angles. Angles use 17 significant digits, so a
//! written network parses back bit for bit. Without a `MODES` line the mode
//! count is the largest label mentioned.

use std::fmt;
use std::str::FromStr;

use super::{Interferometer, TwoModeLayer};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_mode(tok: &str, line: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(m) if m >= 1 => Ok(m - 1),
        _ => Err(parse_err(line, format!("invalid mode label `{tok}` (labels start at 1)"))),
    }
}

fn parse_angle(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| parse_err(line, format!("invalid angle `{tok}`")))
}

enum Entry {
    Layer(usize, usize, f64, f64, f64),
    Phase(usize, f64),
}

impl Interferometer {
    /// Serializes the network in the text format described in this module.
    pub fn to_text(&self) -> String {
        let mut out = format!("MODES {}\n", self.num_modes());
        for l in self.layers() {
            out.push_str(&format!(
                "BS {} {} {:.16e} {:.16e} {:.16e}\n",
                l.mode_a + 1,
                l.mode_b + 1,
                l.omega,
                l.phi,
                l.theta
            ));
        }
        for (m, &chi) in self.phases().iter().enumerate() {
            if chi != 0.0 {
                out.push_str(&format!("PHASE {} {:.16e}\n", m + 1, chi));
            }
        }
        out
    }

    /// Parses the text format; errors carry the 1-based line number.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut entries = Vec::new();
        let mut max_mode = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            match toks[0].to_ascii_uppercase().as_str() {
                "MODES" => {
                    if toks.len() != 2 {
                        return Err(parse_err(line, "expected `MODES <n>`"));
                    }
                    if declared.is_some() {
                        return Err(parse_err(line, "duplicate MODES line"));
                    }
                    let n = toks[1]
                        .parse::<usize>()
                        .ok()
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| parse_err(line, format!("invalid mode count `{}`", toks[1])))?;
                    declared = Some(n);
                }
                "BS" => {
                    if toks.len() != 6 {
                        return Err(parse_err(line, "expected `BS <a> <b> <omega> <phi> <theta>`"));
                    }
                    let a = parse_mode(toks[1], line)?;
                    let b = parse_mode(toks[2], line)?;
                    if a == b {
                        return Err(parse_err(line, "BS acts on the same mode twice"));
                    }
                    max_mode = max_mode.max(a + 1).max(b + 1);
                    entries.push((
                        line,
                        Entry::Layer(
                            a,
                            b,
                            parse_angle(toks[3], line)?,
                            parse_angle(toks[4], line)?,
                            parse_angle(toks[5], line)?,
                        ),
                    ));
                }
                "PHASE" => {
                    if toks.len() != 3 {
                        return Err(parse_err(line, "expected `PHASE <mode> <angle>`"));
                    }
                    let m = parse_mode(toks[1], line)?;
                    max_mode = max_mode.max(m + 1);
                    entries.push((line, Entry::Phase(m, parse_angle(toks[2], line)?)));
                }
                other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
            }
        }
        let n = match declared {
            Some(n) => n,
            None if max_mode > 0 => max_mode,
            None => return Err(parse_err(0, "empty interferometer description")),
        };
        let mut net = Interferometer::new(n)?;
        for (line, e) in entries {
            let res = match e {
                Entry::Layer(a, b, w, p, t) => {
                    net.push(TwoModeLayer { mode_a: a, mode_b: b, omega: w, phi: p, theta: t })
                }
                Entry::Phase(m, chi) => net.set_phase(m, chi),
            };
            res.map_err(|_| parse_err(line, format!("mode label exceeds MODES {n}")))?;
        }
        Ok(net)
    }
}

impl fmt::Display for Interferometer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Interferometer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Interferometer {
        let mut net = Interferometer::new(3).unwrap();
        net.push(TwoModeLayer::new(0, 2, 0.1 + 0.2, std::f64::consts::PI, -1e-300).unwrap()).unwrap();
        net.push(TwoModeLayer::new(2, 1, 1.0 / 3.0, 0.0, 2.5).unwrap()).unwrap();
        net.set_phase(1, -0.7).unwrap();
        net
    }

    #[test]
    fn round_trip_is_exact() {
        let net = sample();
        let text = net.to_text();
        assert_eq!(Interferometer::from_text(&text).unwrap(), net);
        assert_eq!(text.lines().filter(|l| l.starts_with("PHASE")).count(), 1);
    }

    #[test]
    fn comments_and_inferred_modes() {
        let net: Interferometer = "# demo\n\nBS 1 2 0.5 0 0  # splitter\nPHASE 4 1\n".parse().unwrap();
        assert_eq!(net.num_modes(), 4);
        assert_eq!(net.layers().len(), 1);
        assert_eq!(net.phases()[3], 1.0);
    }

    #[test]
    fn reports_line_numbers() {
        let cases = [
            ("MODES 2\nBS 1 1 0 0 0\n", 2),
            ("MODES 2\nBS 0 1 0 0 0\n", 2),
            ("MODES 2\n\nBS 1 3 0 0 0\n", 3),
            ("MODES 2\nPHASE 1 abc\n", 2),
            ("FOO\n", 1),
            ("MODES 2\nMODES 3\n", 2),
        ];
        for (text, want) in cases {
            match Interferometer::from_text(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(Interferometer::from_text("# nothing\n").is_err());
    }
}
