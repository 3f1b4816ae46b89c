//! Plain-text edge lists: one `i j` pair per line, zero-based. Blank lines
//! and lines starting with `#` are ignored.

use std::fmt::Write;

use opinion3wd_core::SocialNetwork;

pub fn parse(text: &str) -> Result<Vec<(usize, usize)>, String> {
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut vertex = || -> Result<usize, String> {
            let field = fields
                .next()
                .ok_or_else(|| format!("line {}: expected two vertex indices", lineno + 1))?;
            field
                .parse()
                .map_err(|_| format!("line {}: `{field}` is not a vertex index", lineno + 1))
        };
        let (a, b) = (vertex()?, vertex()?);
        if fields.next().is_some() {
            return Err(format!(
                "line {}: expected exactly two vertex indices",
                lineno + 1
            ));
        }
        edges.push((a, b));
    }
    Ok(edges)
}

/// Edges in ascending `i < j` order after an `# agents N` header line.
pub fn format(net: &SocialNetwork) -> String {
    let mut out = format!("# agents {}\n", net.size());
    for (a, b) in net.edges() {
        writeln!(out, "{a} {b}").expect("writing to a String cannot fail");
    }
    out
}
