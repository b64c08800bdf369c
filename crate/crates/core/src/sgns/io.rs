//! word2vec text format: a `N d` header, then one `id v_1 .. v_d` row per node.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sgns::model::NodeEmbeddings;

pub fn save_embeddings<W: Write>(embeddings: &NodeEmbeddings, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", embeddings.len(), embeddings.dim())?;
    for (i, id) in embeddings.ids().iter().enumerate() {
        out.write_all(id.as_bytes())?;
        for x in embeddings.row(i) {
            write!(out, " {x}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn load_embeddings<R: BufRead>(reader: R) -> Result<NodeEmbeddings> {
    let mut lines = reader.lines().enumerate();
    let (n, d) = loop {
        let Some((i, line)) = lines.next() else {
            return Err(Error::parse(1, "missing `N d` header"));
        };
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(i + 1, format!("bad header field `{s}`")))
        };
        match fields.as_slice() {
            [n, d] => break (parse(n)?, parse(d)?),
            _ => return Err(Error::parse(i + 1, "header must be `N d`")),
        }
    };
    if d == 0 {
        return Err(Error::parse(1, "dimension must be positive"));
    }

    let mut ids = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n * d);
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let id = fields.next().unwrap();
        let before = vectors.len();
        for f in fields {
            let x: f64 = f
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad number `{f}`")))?;
            vectors.push(x);
        }
        if vectors.len() - before != d {
            return Err(Error::parse(
                i + 1,
                format!("expected {d} values, found {}", vectors.len() - before),
            ));
        }
        ids.push(id.to_owned());
    }
    if ids.len() != n {
        return Err(Error::Invalid(format!(
            "header declares {n} rows, found {}",
            ids.len()
        )));
    }
    NodeEmbeddings::new(ids, d, vectors)
}
