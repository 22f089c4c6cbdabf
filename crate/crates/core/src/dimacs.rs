//! DIMACS shortest-path text format: `c` comments, one `p sp <n> <m>`
//! header and `a <u> <v> <w>` arcs with 1-indexed endpoints.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_WEIGHT};

pub fn read_graph(path: &Path) -> Result<Graph> {
    let file = fs::File::open(path)?;
    parse(BufReader::new(file), path)
}

pub fn parse_str(text: &str) -> Result<Graph> {
    parse(text.as_bytes(), Path::new("<memory>"))
}

fn parse<R: Read>(reader: R, path: &Path) -> Result<Graph> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let mut fields = line.split_whitespace();
        match fields.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(err(line_no, "duplicate problem line".into()));
                }
                let rest: Vec<&str> = fields.collect();
                if rest.len() != 3 || rest[0] != "sp" {
                    return Err(err(line_no, "expected `p sp <n> <m>`".into()));
                }
                let n = rest[1]
                    .parse()
                    .map_err(|_| err(line_no, format!("bad vertex count `{}`", rest[1])))?;
                let m = rest[2]
                    .parse()
                    .map_err(|_| err(line_no, format!("bad arc count `{}`", rest[2])))?;
                header = Some((n, m));
            }
            Some("a") => {
                let Some((n, _)) = header else {
                    return Err(err(line_no, "arc before problem line".into()));
                };
                let rest: Vec<&str> = fields.collect();
                if rest.len() != 3 {
                    return Err(err(line_no, "expected `a <u> <v> <w>`".into()));
                }
                let endpoint = |s: &str| -> Result<usize> {
                    match s.parse::<usize>() {
                        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                        _ => Err(err(line_no, format!("endpoint `{s}` not in 1..={n}"))),
                    }
                };
                let u = endpoint(rest[0])?;
                let v = endpoint(rest[1])?;
                let w: i64 = rest[2]
                    .parse()
                    .map_err(|_| err(line_no, format!("bad weight `{}`", rest[2])))?;
                if w < 0 {
                    return Err(Error::NegativeWeight {
                        src: u,
                        dst: v,
                        weight: w,
                    });
                }
                if w as u64 > MAX_WEIGHT {
                    return Err(err(line_no, format!("weight {w} above {MAX_WEIGHT}")));
                }
                arcs.push((u, v, w as u64));
            }
            Some(other) => {
                return Err(err(line_no, format!("unknown line type `{other}`")));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| err(0, "missing problem line".into()))?;
    if arcs.len() != m {
        return Err(err(0, format!("header announces {m} arcs, found {}", arcs.len())));
    }
    Graph::from_edges(n, arcs)
}

pub fn write_graph<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "p sp {} {}", g.vertex_count(), g.edge_count())?;
    for (u, v, w) in g.edges() {
        writeln!(out, "a {} {} {}", u + 1, v + 1, w)?;
    }
    Ok(())
}

pub fn to_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

pub fn save_graph(g: &Graph, path: &Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(fs::File::create(path)?);
    write_graph(g, &mut file)?;
    file.flush()?;
    Ok(())
}
