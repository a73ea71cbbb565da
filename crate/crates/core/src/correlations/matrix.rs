use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::BitMatrix;
use crate::rational::{is_probability, parse_prob, Prob};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct CorrelationParseError {
    pub line: usize,
    pub msg: String,
}

/// `C(x, y) = Pr[a ⊕ b = 1 | x, y]`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Prob>,
}

impl CorrelationMatrix {
    /// `None` unless there are `rows · cols` entries, all in `[0, 1]`.
    pub fn new(rows: usize, cols: usize, entries: Vec<Prob>) -> Option<Self> {
        (entries.len() == rows * cols && entries.iter().all(is_probability)).then_some(
            CorrelationMatrix {
                rows,
                cols,
                entries,
            },
        )
    }

    pub fn from_boolean(m: &BitMatrix) -> Self {
        let entries = (0..m.rows() * m.cols())
            .map(|i| Prob::from_integer(m.get(i / m.cols(), i % m.cols()) as i128))
            .collect();
        CorrelationMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, x: usize, y: usize) -> Prob {
        self.entries[x * self.cols + y]
    }

    pub fn entries(&self) -> &[Prob] {
        &self.entries
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CorrelationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "corr {} {}", self.rows, self.cols)?;
        for row in self.entries.chunks(self.cols.max(1)) {
            let cells: Vec<String> = row
                .iter()
                .map(|p| format!("{}/{}", p.numer(), p.denom()))
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for CorrelationMatrix {
    type Err = CorrelationParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, msg: String| CorrelationParseError { line, msg };
        let mut header = None;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            if header.is_none() {
                let toks: Vec<&str> = l.split_whitespace().collect();
                match toks.as_slice() {
                    ["corr", r, c] => {
                        let r = r
                            .parse::<usize>()
                            .map_err(|_| err(line, "bad row count".into()))?;
                        let c = c
                            .parse::<usize>()
                            .map_err(|_| err(line, "bad column count".into()))?;
                        header = Some((r, c));
                    }
                    _ => return Err(err(line, "expected 'corr <rows> <cols>'".into())),
                }
                continue;
            }
            for tok in l.split_whitespace() {
                let p = parse_prob(tok).map_err(|e| err(line, e.to_string()))?;
                if !is_probability(&p) {
                    return Err(err(line, format!("entry {p} outside [0,1]")));
                }
                entries.push(p);
            }
        }
        let (rows, cols) = header.ok_or_else(|| err(1, "missing header".into()))?;
        if entries.len() != rows * cols {
            return Err(err(
                text.lines().count(),
                format!("expected {} entries, found {}", rows * cols, entries.len()),
            ));
        }
        Ok(CorrelationMatrix {
            rows,
            cols,
            entries,
        })
    }
}

/// Positive weights summing to one over Boolean matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanMixture {
    pub components: Vec<(Prob, BitMatrix)>,
}

impl BooleanMixture {
    /// Entrywise weighted average.
    pub fn average(&self, rows: usize, cols: usize) -> Vec<Prob> {
        let mut out = vec![Prob::from_integer(0); rows * cols];
        for (w, m) in &self.components {
            for (i, slot) in out.iter_mut().enumerate() {
                if m.get(i / cols, i % cols) {
                    *slot += w;
                }
            }
        }
        out
    }

    pub fn total_weight(&self) -> Prob {
        self.components.iter().map(|(w, _)| *w).sum()
    }
}

/// Threshold decomposition: for the distinct nonzero levels
/// `u_1 < … < u_k`, component `j` is `[C ≥ u_j]` with weight `u_j − u_{j−1}`;
/// the all-zero matrix takes the remaining weight `1 − u_k`.
pub fn layercake_decompose(c: &CorrelationMatrix) -> BooleanMixture {
    let zero = Prob::from_integer(0);
    let mut levels: Vec<Prob> = c.entries.iter().copied().filter(|&v| v > zero).collect();
    levels.sort();
    levels.dedup();
    let mut components = Vec::with_capacity(levels.len() + 1);
    let mut prev = zero;
    for &u in &levels {
        let m = BitMatrix::from_fn(c.rows, c.cols, |x, y| c.get(x, y) >= u);
        components.push((u - prev, m));
        prev = u;
    }
    let one = Prob::from_integer(1);
    if prev < one {
        components.push((one - prev, BitMatrix::zeros(c.rows, c.cols)));
    }
    BooleanMixture { components }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_matrix() {
        let h = Prob::new(1, 2);
        let c = CorrelationMatrix::new(2, 2, vec![h; 4]).unwrap();
        let m = layercake_decompose(&c);
        assert_eq!(m.components.len(), 2);
        assert_eq!(m.components[0], (h, BitMatrix::from_fn(2, 2, |_, _| true)));
        assert_eq!(m.components[1], (h, BitMatrix::zeros(2, 2)));
        assert_eq!(m.average(2, 2), c.entries());
    }

    #[test]
    fn boolean_is_one_component() {
        let and = BitMatrix::from_fn(2, 2, |x, y| x & y == 1);
        let m = layercake_decompose(&CorrelationMatrix::from_boolean(&and));
        assert_eq!(m.components, vec![(Prob::from_integer(1), and)]);
    }

    #[test]
    fn text_round_trip() {
        let c: CorrelationMatrix = "corr 1 3\n0/1 1/3 1\n".parse().unwrap();
        assert_eq!(c.to_text(), "corr 1 3\n0/1 1/3 1/1\n");
        assert_eq!(c.to_text().parse::<CorrelationMatrix>().unwrap(), c);
        assert!("corr 1 1\n3/2\n".parse::<CorrelationMatrix>().is_err());
    }
}
