//! Certificate files: an explicit coloring of `[1, n]` with its family and color count.
//!
//! ```text
//! vdw-triple-cert v1
//! a=2 b=2 r=3 n=87
//! 0 0 1 ...        (20 colors per line)
//! ```
//!
//! Lines whose first character is `#` are comments.

use std::fmt::Write as _;

use vdwt_core::{verify_coloring, Coloring, Error, FamilyParams, Result, Verdict};

pub const MAGIC: &str = "vdw-triple-cert v1";

const PER_LINE: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    params: FamilyParams,
    coloring: Coloring,
}

impl Certificate {
    /// Wraps `colors` as an `r`-coloring; the colors may use fewer than `r` values.
    pub fn new(params: FamilyParams, r: u32, colors: &Coloring) -> Result<Self> {
        let coloring = Coloring::new(r, colors.colors().to_vec())?;
        Ok(Certificate { params, coloring })
    }

    pub fn params(&self) -> FamilyParams {
        self.params
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn n(&self) -> usize {
        self.coloring.n()
    }

    pub fn r(&self) -> u32 {
        self.coloring.r()
    }

    pub fn verify(&self) -> Verdict {
        verify_coloring(self.params, &self.coloring)
    }

    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.n() * 2 + 64);
        out.push_str(MAGIC);
        out.push('\n');
        let _ = writeln!(
            out,
            "a={} b={} r={} n={}",
            self.params.a(),
            self.params.b(),
            self.r(),
            self.n()
        );
        render_colors(&mut out, self.coloring.colors());
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.starts_with('#'));

        match lines.next() {
            Some((_, l)) if l.trim_end() == MAGIC => {}
            Some((line, _)) => return Err(parse_err(line, format!("expected `{MAGIC}`"))),
            None => return Err(parse_err(1, "empty certificate")),
        }
        let (line, header) = lines
            .next()
            .ok_or_else(|| parse_err(2, "missing header line"))?;
        let mut fields = header.split_whitespace();
        let mut field = |key: &str| -> Result<u64> {
            let tok = fields
                .next()
                .ok_or_else(|| parse_err(line, format!("missing `{key}=`")))?;
            tok.strip_prefix(key)
                .and_then(|v| v.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| {
                    parse_err(line, format!("bad field `{tok}`, expected `{key}=<int>`"))
                })
        };
        let a = field("a")?;
        let b = field("b")?;
        let r = field("r")?;
        let n = field("n")?;
        if let Some(extra) = fields.next() {
            return Err(parse_err(line, format!("unexpected `{extra}`")));
        }
        let params = FamilyParams::new(to_u32(a, line)?, to_u32(b, line)?)?;
        let r = to_u32(r, line)?;

        let mut colors = Vec::with_capacity(n.min(1 << 24) as usize);
        let mut last_line = line;
        for (line, body) in lines {
            last_line = line;
            for tok in body.split_whitespace() {
                let c: u32 = tok
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad color `{tok}`")))?;
                if c >= r {
                    return Err(parse_err(line, format!("color {c} is not below r={r}")));
                }
                colors.push(c);
            }
        }
        if colors.len() as u64 != n {
            return Err(parse_err(
                last_line,
                format!("header says n={n} but {} colors follow", colors.len()),
            ));
        }
        let coloring = Coloring::new(r, colors)?;
        Ok(Certificate { params, coloring })
    }
}

/// Colors separated by single spaces, `PER_LINE` to a line, newline-terminated.
pub fn render_colors(out: &mut String, colors: &[u32]) {
    for chunk in colors.chunks(PER_LINE) {
        for (i, c) in chunk.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{c}");
        }
        out.push('\n');
    }
}

fn to_u32(v: u64, line: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| parse_err(line, format!("{v} is too large")))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
