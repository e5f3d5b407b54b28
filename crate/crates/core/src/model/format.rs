//! Line-oriented text format.
//!
//! ```text
//! fapk 1
//! sites <m> links <n>
//! link <id> <siteA> <siteB>          (n lines)
//! constraints <count>
//! c <pathI> <pathJ> <gap> <kind>     (count lines; kind: duplex txtx txrx rxrx far)
//! domain <pathId> <k> <f1> ... <fk>  (optional, any number)
//! ```
//!
//! `#` starts a comment. The writer emits the canonical form: links by id,
//! constraints by `(i, j)` with `i < j`, domain values ascending, and domain
//! lines only for paths that differ from the RITA default.

use std::fmt::Write as _;
use std::str::FromStr;

use super::instance::{GapConstraint, Instance, InstanceParts, ModelLimits};
use super::{ConstraintKind, Frequency, ModelError, RecordRef};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-empty line (1-based line number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (idx, raw) in self.inner.by_ref() {
            self.last = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((idx + 1, tokens));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), ModelError> {
        self.next_tokens().ok_or_else(|| ModelError::Parse {
            line: self.last + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Parse {
        line,
        message: message.into(),
    }
}

fn num<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T, ModelError> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{token}`")))
}

fn keyword(line: usize, tokens: &[&str], word: &str, arity: usize) -> Result<(), ModelError> {
    if tokens[0] != word {
        return Err(parse_err(line, format!("expected `{word}`, found `{}`", tokens[0])));
    }
    if tokens.len() != arity {
        return Err(parse_err(
            line,
            format!("`{word}` takes {} fields, found {}", arity - 1, tokens.len() - 1),
        ));
    }
    Ok(())
}

pub fn read_instance(text: &str) -> Result<Instance, ModelError> {
    read_instance_with(text, &ModelLimits::default())
}

pub fn read_instance_with(text: &str, limits: &ModelLimits) -> Result<Instance, ModelError> {
    let mut lines = Lines::new(text);

    let (line, header) = lines.expect("header")?;
    if header != ["fapk", "1"] {
        return Err(parse_err(line, "expected header `fapk 1`"));
    }

    let (line, sizes) = lines.expect("`sites <m> links <n>`")?;
    if sizes.len() != 4 || sizes[0] != "sites" || sizes[2] != "links" {
        return Err(parse_err(line, "expected `sites <m> links <n>`"));
    }
    let site_count: usize = num(line, sizes[1], "site count")?;
    let link_count: usize = num(line, sizes[3], "link count")?;

    let mut links = vec![None; link_count];
    let mut link_lines = vec![0; link_count];
    for _ in 0..link_count {
        let (line, t) = lines.expect("`link` record")?;
        keyword(line, &t, "link", 4)?;
        let id: usize = num(line, t[1], "link id")?;
        let a = num(line, t[2], "site id")?;
        let b = num(line, t[3], "site id")?;
        let slot = links
            .get_mut(id)
            .ok_or_else(|| parse_err(line, format!("link id {id} out of range")))?;
        if slot.replace((a, b)).is_some() {
            return Err(parse_err(line, format!("duplicate link id {id}")));
        }
        link_lines[id] = line;
    }
    let links: Vec<_> = links.into_iter().map(Option::unwrap).collect();

    let (line, t) = lines.expect("`constraints <count>`")?;
    keyword(line, &t, "constraints", 2)?;
    let count: usize = num(line, t[1], "constraint count")?;
    let mut constraints = Vec::with_capacity(count);
    let mut constraint_lines = Vec::with_capacity(count);
    for _ in 0..count {
        let (line, t) = lines.expect("`c` record")?;
        keyword(line, &t, "c", 5)?;
        let kind = ConstraintKind::from_token(t[4])
            .ok_or_else(|| parse_err(line, format!("unknown constraint kind `{}`", t[4])))?;
        constraints.push(GapConstraint {
            i: num(line, t[1], "path id")?,
            j: num(line, t[2], "path id")?,
            gap: num(line, t[3], "gap")?,
            kind,
        });
        constraint_lines.push(line);
    }

    let mut domains = Vec::new();
    let mut domain_lines = Vec::new();
    while let Some((line, t)) = lines.next_tokens() {
        if t[0] != "domain" {
            return Err(parse_err(line, format!("expected `domain`, found `{}`", t[0])));
        }
        if t.len() < 3 {
            return Err(parse_err(line, "`domain` needs a path id and a count"));
        }
        let path: usize = num(line, t[1], "path id")?;
        let k: usize = num(line, t[2], "domain size")?;
        if t.len() != 3 + k {
            return Err(parse_err(
                line,
                format!("domain declares {k} values but lists {}", t.len() - 3),
            ));
        }
        let freqs = t[3..]
            .iter()
            .map(|tok| num(line, tok, "frequency").map(Frequency))
            .collect::<Result<Vec<_>, _>>()?;
        domains.push((path, freqs));
        domain_lines.push(line);
    }

    let parts = InstanceParts {
        site_count,
        links,
        constraints,
        domains,
    };
    Instance::from_parts(parts, limits).map_err(|e| match e {
        ModelError::Invalid { record, reason, .. } => {
            let line = match record {
                RecordRef::Link(i) => link_lines.get(i).copied(),
                RecordRef::Constraint(i) => constraint_lines.get(i).copied(),
                RecordRef::Domain(i) => domain_lines.get(i).copied(),
                RecordRef::Header | RecordRef::Site(_) => None,
            };
            ModelError::Invalid { record, reason, line }
        }
        other => other,
    })
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "fapk 1");
    let _ = writeln!(out, "sites {} links {}", instance.site_count(), instance.link_count());
    for l in instance.links() {
        let _ = writeln!(out, "link {} {} {}", l.id, l.a, l.b);
    }
    let _ = writeln!(out, "constraints {}", instance.constraints().len());
    for c in instance.constraints() {
        let _ = writeln!(out, "c {} {} {} {}", c.i, c.j, c.gap, c.kind);
    }
    for (p, freqs) in instance.to_parts().domains {
        let _ = write!(out, "domain {} {}", p, freqs.len());
        for f in freqs {
            let _ = write!(out, " {f}");
        }
        out.push('\n');
    }
    out
}
