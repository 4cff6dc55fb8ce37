use std::fmt::Write as _;
use std::io::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use tl_core::complex::ComplexJson;
use tl_core::verify::{Report, Status};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Writes to stdout, ignoring a closed pipe.
pub fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut s = String::from("strands,ring,a,degree,free_rank,torsion\n");
            for h in &r.homology {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.strands,
                    r.ring,
                    r.parameter,
                    h.degree,
                    h.free_rank,
                    h.torsion.join(";")
                );
            }
            s
        }
        Format::Pretty => {
            let mut s = format!(
                "TL_{} over {} with a = {} ({})\n",
                r.strands, r.ring, r.parameter, r.method
            );
            let symbol = if r.ring.starts_with("Z/") { format!("({})", r.ring) } else { r.ring.clone() };
            for h in &r.homology {
                let mut parts = Vec::new();
                match h.free_rank {
                    0 => {}
                    1 => parts.push(symbol.clone()),
                    n => parts.push(format!("{symbol}^{n}")),
                }
                parts.extend(h.torsion.iter().map(|t| format!("{symbol}/{t}")));
                let module = if parts.is_empty() { "0".to_string() } else { parts.join(" ⊕ ") };
                let flag = if h.truncated { "  (truncated)" } else { "" };
                let _ = writeln!(s, "  H_{} = {module}{flag}", h.degree);
            }
            for c in &r.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skip => "SKIP",
                    Status::Info => "INFO",
                };
                let _ = writeln!(s, "  [{tag}] {}: {}", c.name, c.detail);
            }
            s
        }
    }
}

#[derive(Serialize)]
pub struct BasisRow {
    pub index: usize,
    pub partners: Vec<usize>,
    pub right_cups: Vec<usize>,
}

#[derive(Serialize)]
pub struct BasisListing {
    pub strands: usize,
    pub count: usize,
    pub diagrams: Vec<BasisRow>,
}

fn spaced(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn basis(listing: &BasisListing, format: Format) -> String {
    match format {
        Format::Json => json(listing),
        Format::Csv => {
            let mut s = String::from("index,partners,right_cups\n");
            for row in &listing.diagrams {
                let _ = writeln!(s, "{},{},{}", row.index, spaced(&row.partners), spaced(&row.right_cups));
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("{} diagrams on {} strands\n", listing.count, listing.strands);
            for row in &listing.diagrams {
                let _ = writeln!(
                    s,
                    "  {:>5}  [{}]  F = {{{}}}",
                    row.index,
                    spaced(&row.partners),
                    spaced(&row.right_cups)
                );
            }
            s
        }
    }
}

#[derive(Serialize)]
pub struct Product {
    pub strands: usize,
    pub word: Vec<usize>,
    pub index: usize,
    pub partners: Vec<usize>,
    pub is_identity: bool,
    /// Power of the parameter (number of closed loops).
    pub exponent: u32,
}

pub fn product(p: &Product, format: Format) -> String {
    match format {
        Format::Json => json(p),
        Format::Csv => format!(
            "strands,word,index,partners,exponent\n{},{},{},{},{}\n",
            p.strands,
            spaced(&p.word),
            p.index,
            spaced(&p.partners),
            p.exponent
        ),
        Format::Pretty => {
            let name = if p.is_identity { " (identity)".to_string() } else { String::new() };
            format!(
                "U[{}] = a^{} · diagram {} [{}]{name}\n",
                spaced(&p.word),
                p.exponent,
                p.index,
                spaced(&p.partners)
            )
        }
    }
}

pub fn complex(c: &ComplexJson, strands: usize, format: Format) -> String {
    match format {
        Format::Json => json(c),
        Format::Csv => {
            let mut s = String::from("strands,degree,rank\n");
            for (k, r) in c.ranks.iter().enumerate() {
                let _ = writeln!(s, "{strands},{k},{r}");
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("Davis complex on {strands} strands, ranks {:?}\n", c.ranks);
            if let Some(labels) = &c.labels {
                for (k, l) in labels.iter().enumerate() {
                    let _ = writeln!(s, "  degree {k}: {}", l.join(" "));
                }
            }
            s
        }
    }
}
