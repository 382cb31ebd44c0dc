//! CSV for densities (`x1,...,xd,lambda`) and fuzzy sets (`x1,...,xd,u`).
//!
//! Every field is printed with six decimals, rows in lexicographic point
//! order, LF line endings. Only points of finite density (positive membership)
//! are written.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::fuzzy::FuzzyMap;
use crate::maxplus::DensityMap;
use crate::point::Point;

fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn header(dim: usize, value: &str) -> String {
    let mut cols: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    cols.push(value.to_string());
    cols.join(",")
}

fn write_rows<W: Write>(mut w: W, dim: usize, value: &str, rows: &[(Point, f64)]) -> Result<()> {
    writeln!(w, "{}", header(dim, value))?;
    for (p, v) in rows {
        let mut line: Vec<String> = p.coords().iter().map(|&c| fixed6(c)).collect();
        line.push(fixed6(*v));
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_density_csv<W: Write>(mu: &DensityMap, w: W) -> Result<()> {
    write_rows(w, mu.dim(), "lambda", &mu.sorted_entries())
}

pub fn density_to_csv(mu: &DensityMap) -> String {
    let mut buf = Vec::new();
    write_density_csv(mu, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Memberships that print as zero are left out.
pub fn write_fuzzy_csv<W: Write>(u: &FuzzyMap, w: W) -> Result<()> {
    let rows: Vec<(Point, f64)> = u
        .sorted_entries()
        .into_iter()
        .filter(|(_, s)| fixed6(*s) != "0.000000")
        .collect();
    write_rows(w, u.dim(), "u", &rows)
}

pub fn fuzzy_to_csv(u: &FuzzyMap) -> String {
    let mut buf = Vec::new();
    write_fuzzy_csv(u, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

fn read_rows<R: BufRead>(r: R, value: &str) -> Result<(usize, Vec<(Point, f64)>)> {
    let mut lines = r.lines();
    let head = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))??;
    let cols: Vec<&str> = head.trim().split(',').map(str::trim).collect();
    let dim = cols.len().saturating_sub(1);
    if dim == 0 || head.trim() != header(dim, value) {
        return Err(Error::Parse(format!(
            "expected header x1,...,xd,{value}, got `{}`",
            head.trim()
        )));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", n + 2)))?;
        if fields.len() != dim + 1 {
            return Err(Error::Parse(format!(
                "row {}: {} fields, expected {}",
                n + 2,
                fields.len(),
                dim + 1
            )));
        }
        rows.push((Point::try_new(&fields[..dim])?, fields[dim]));
    }
    Ok((dim, rows))
}

pub fn read_density_csv<R: BufRead>(r: R) -> Result<DensityMap> {
    let (dim, rows) = read_rows(r, "lambda")?;
    DensityMap::new(dim, rows)
}

pub fn read_fuzzy_csv<R: BufRead>(r: R) -> Result<FuzzyMap> {
    let (dim, rows) = read_rows(r, "u")?;
    FuzzyMap::new(dim, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_csv_layout() {
        let mu = DensityMap::new(
            2,
            [
                (Point::new(&[0.5, 0.25]), -1.0),
                (Point::new(&[0.0, 1.0]), 0.0),
                (Point::new(&[0.5, 0.0]), -1e-9),
            ],
        )
        .unwrap();
        assert_eq!(
            density_to_csv(&mu),
            "x1,x2,lambda\n0.000000,1.000000,0.000000\n0.500000,0.000000,0.000000\n0.500000,0.250000,-1.000000\n"
        );
    }

    #[test]
    fn fuzzy_csv_skips_zero_rows() {
        let u = FuzzyMap::new(1, [(Point::new(&[0.0]), 1.0), (Point::new(&[1.0]), 1e-9)]).unwrap();
        assert_eq!(fuzzy_to_csv(&u), "x1,u\n0.000000,1.000000\n");
        let back = read_fuzzy_csv(fuzzy_to_csv(&u).as_bytes()).unwrap();
        assert_eq!(back.len(), 1);
    }

    #[test]
    fn rejects_bad_header_and_rows() {
        assert!(read_density_csv("x,lambda\n0,0\n".as_bytes()).is_err());
        assert!(read_density_csv("x1,lambda\n0,0,1\n".as_bytes()).is_err());
        assert!(read_density_csv("x1,lambda\n0,-1\n".as_bytes()).is_err());
        assert!(read_density_csv("".as_bytes()).is_err());
    }
}
