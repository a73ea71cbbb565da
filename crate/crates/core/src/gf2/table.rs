use std::fmt::Write as _;
use std::ops::Deref;
use std::str::FromStr;

use super::BitMatrix;

/// Communication matrix `M_f` of `f: {0,1}^nx × {0,1}^ny → {0,1}`.
///
/// Row index is Alice's input read as a big-endian integer, column index is
/// Bob's.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    nx: u32,
    ny: u32,
    matrix: BitMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is {rows}x{cols}, expected 2^{nx} x 2^{ny}")]
    Dimensions {
        nx: u32,
        ny: u32,
        rows: usize,
        cols: usize,
    },
    #[error("input width {0} exceeds the supported maximum of 16 bits")]
    TooWide(u32),
}

impl TruthTable {
    pub const MAX_BITS: u32 = 16;

    pub fn from_fn(nx: u32, ny: u32, f: impl Fn(usize, usize) -> bool) -> Self {
        assert!(nx <= Self::MAX_BITS && ny <= Self::MAX_BITS);
        TruthTable {
            nx,
            ny,
            matrix: BitMatrix::from_fn(1 << nx, 1 << ny, f),
        }
    }

    pub fn from_matrix(nx: u32, ny: u32, matrix: BitMatrix) -> Result<Self, TableError> {
        if nx > Self::MAX_BITS || ny > Self::MAX_BITS {
            return Err(TableError::TooWide(nx.max(ny)));
        }
        if matrix.rows() != 1 << nx || matrix.cols() != 1 << ny {
            return Err(TableError::Dimensions {
                nx,
                ny,
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(TruthTable { nx, ny, matrix })
    }

    /// Enumerates functions on `nx × ny` inputs by the bits of `index`
    /// (bit `x * 2^ny + y` is `f(x, y)`); requires at most 64 entries.
    pub fn from_index(nx: u32, ny: u32, index: u64) -> Self {
        let cols = 1usize << ny;
        Self::from_fn(nx, ny, |x, y| (index >> (x * cols + y)) & 1 == 1)
    }

    pub fn nx(&self) -> u32 {
        self.nx
    }

    pub fn ny(&self) -> u32 {
        self.ny
    }

    pub fn x_size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn y_size(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn eval(&self, x: usize, y: usize) -> bool {
        self.matrix.get(x, y)
    }

    /// Serializes to the text format accepted by [`FromStr`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.nx, self.ny);
        for x in 0..self.x_size() {
            for y in 0..self.y_size() {
                out.push(if self.eval(x, y) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Lists the table as `(x, y, f)` lines, for reports.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for x in 0..self.x_size() {
            for y in 0..self.y_size() {
                let _ = writeln!(s, "{x} {y} {}", self.eval(x, y) as u8);
            }
        }
        s
    }
}

impl Deref for TruthTable {
    type Target = BitMatrix;

    fn deref(&self) -> &BitMatrix {
        &self.matrix
    }
}

/// `nx ny` header, then `2^nx` rows of `2^ny` characters from `{0,1}`.
/// Blank lines and lines starting with `#` are skipped.
impl FromStr for TruthTable {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(TableError::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let dims: Vec<u32> = header
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| TableError::Parse {
                line: hline,
                msg: format!("bad header {header:?}"),
            })?;
        let [nx, ny] = dims[..] else {
            return Err(TableError::Parse {
                line: hline,
                msg: "header must be \"nx ny\"".into(),
            });
        };
        if nx > Self::MAX_BITS || ny > Self::MAX_BITS {
            return Err(TableError::TooWide(nx.max(ny)));
        }

        let (rows, cols) = (1usize << nx, 1usize << ny);
        let mut m = BitMatrix::zeros(rows, cols);
        let mut seen = 0;
        for (line, text) in lines {
            if seen == rows {
                return Err(TableError::Parse {
                    line,
                    msg: format!("more than {rows} rows"),
                });
            }
            if text.chars().count() != cols {
                return Err(TableError::Parse {
                    line,
                    msg: format!("row has {} entries, expected {cols}", text.chars().count()),
                });
            }
            for (y, ch) in text.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(seen, y, true),
                    _ => {
                        return Err(TableError::Parse {
                            line,
                            msg: format!("unexpected character {ch:?}"),
                        })
                    }
                }
            }
            seen += 1;
        }
        if seen != rows {
            return Err(TableError::Parse {
                line: 0,
                msg: format!("expected {rows} rows, found {seen}"),
            });
        }
        Ok(TruthTable { nx, ny, matrix: m })
    }
}

/// Bit `i` (0-based, most significant first) of an `n`-bit input.
#[inline]
pub fn input_bit(v: usize, i: usize, n: usize) -> bool {
    (v >> (n - 1 - i)) & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_blank_lines() {
        let t: TruthTable = "# AND\n1 1\n\n00\n01\n".parse().unwrap();
        assert_eq!(t.nx(), 1);
        assert!(t.eval(1, 1));
        assert!(!t.eval(0, 1));
        assert_eq!(t.to_text().parse::<TruthTable>().unwrap(), t);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!("1 1\n00\n".parse::<TruthTable>().is_err());
        assert!("1 1\n000\n01\n".parse::<TruthTable>().is_err());
        assert!("1 1\n0a\n01\n".parse::<TruthTable>().is_err());
        assert!("1\n0\n".parse::<TruthTable>().is_err());
    }

    #[test]
    fn input_bits_are_big_endian() {
        assert!(input_bit(0b10, 0, 2));
        assert!(!input_bit(0b10, 1, 2));
    }
}
