//! Multi-objective NK-landscapes.
//!
//! Each objective is the mean of `n` per-variable contributions; the
//! contribution of variable `j` is looked up from a table indexed by the bit
//! pattern formed by `x_j` (bit 0) and its `k` epistatic links (bits 1..=k, in
//! link order). Links and tables are drawn from independent labeled streams
//! (see [`crate::rng`]) so an instance is a pure function of `(n, k, m, seed)`
//! and objectives `0..m` are shared by every instance with more objectives.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use crate::dominance::{nondominated_indices, ObjectiveVector};
use crate::error::{Error, Result};
use crate::rng::SeedPath;

/// Largest `n` accepted by exhaustive enumeration.
pub const MAX_ENUMERATION_N: usize = 24;

/// Largest table (entries per objective) an instance may allocate.
const MAX_TABLE_ENTRIES: usize = 1 << 24;

const MAGIC: &str = "PARETO-LAB-NK";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct NkInstance {
    n: usize,
    k: usize,
    m: usize,
    seed: u64,
    links: Vec<Vec<usize>>,
    /// `tables[i][j * 2^(k+1) + pattern]`
    tables: Vec<Vec<f64>>,
}

/// A binary string of length `n`, `bits[0]` being `x_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    bits: Vec<u8>,
}

impl Solution {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::domain("solution bits must be 0 or 1"));
        }
        Ok(Solution { bits })
    }

    /// The `index`-th string in lexicographic order (`x_1` is the most
    /// significant bit).
    pub fn from_index(index: u64, n: usize) -> Self {
        let bits = (0..n)
            .map(|j| ((index >> (n - 1 - j)) & 1) as u8)
            .collect();
        Solution { bits }
    }

    pub fn to_index(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Solution { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn hamming(&self, other: &Solution) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl std::fmt::Display for Solution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.bits {
            f.write_char(if *b == 1 { '1' } else { '0' })?;
        }
        Ok(())
    }
}

fn validate_params(n: usize, k: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if k >= n {
        return Err(Error::domain(format!("k must be < n (k={k}, n={n})")));
    }
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    if k >= 24 || n.saturating_mul(1 << (k + 1)) > MAX_TABLE_ENTRIES {
        return Err(Error::capacity(format!(
            "contribution tables for n={n}, k={k} are too large"
        )));
    }
    Ok(())
}

impl NkInstance {
    pub fn generate(n: usize, k: usize, m: usize, seed: u64) -> Result<Self> {
        validate_params(n, k, m)?;
        let root = SeedPath::root(seed);
        let links = (0..n)
            .map(|j| {
                let mut rng = root.label("links").index(j as u64).rng();
                let mut others: Vec<usize> = (0..n).filter(|&v| v != j).collect();
                // partial Fisher-Yates: the first k slots become the sample
                for slot in 0..k {
                    let pick = rng.random_range(slot..others.len());
                    others.swap(slot, pick);
                }
                others.truncate(k);
                others
            })
            .collect();
        let width = 1usize << (k + 1);
        let tables = (0..m)
            .map(|i| {
                let mut table = Vec::with_capacity(n * width);
                for j in 0..n {
                    let mut rng = root.label("table").index(i as u64).index(j as u64).rng();
                    table.extend((0..width).map(|_| rng.random::<f64>()));
                }
                table
            })
            .collect();
        Ok(NkInstance {
            n,
            k,
            m,
            seed,
            links,
            tables,
        })
    }

    /// Builds an instance from explicit links and tables, checking every
    /// structural invariant.
    pub fn from_parts(
        n: usize,
        k: usize,
        m: usize,
        seed: u64,
        links: Vec<Vec<usize>>,
        tables: Vec<Vec<f64>>,
    ) -> Result<Self> {
        validate_params(n, k, m).map_err(|e| Error::Validation(e.to_string()))?;
        if links.len() != n {
            return Err(Error::Validation(format!("expected {n} link lists, got {}", links.len())));
        }
        for (j, l) in links.iter().enumerate() {
            if l.len() != k {
                return Err(Error::Validation(format!("variable {j} has {} links, expected {k}", l.len())));
            }
            for (a, &v) in l.iter().enumerate() {
                if v >= n || v == j || l[..a].contains(&v) {
                    return Err(Error::Validation(format!("invalid link {v} for variable {j}")));
                }
            }
        }
        let width = 1usize << (k + 1);
        if tables.len() != m || tables.iter().any(|t| t.len() != n * width) {
            return Err(Error::Validation("contribution table shape mismatch".into()));
        }
        if tables.iter().flatten().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Validation("contribution outside [0,1]".into()));
        }
        Ok(NkInstance {
            n,
            k,
            m,
            seed,
            links,
            tables,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn links(&self) -> &[Vec<usize>] {
        &self.links
    }

    /// Contribution of variable `j` to objective `i` for bit pattern `pattern`.
    pub fn contribution(&self, i: usize, j: usize, pattern: usize) -> f64 {
        self.tables[i][(j << (self.k + 1)) + pattern]
    }

    pub fn evaluate(&self, x: &Solution) -> Result<ObjectiveVector> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut out = vec![0.0; self.m];
        self.evaluate_bits(x.bits(), &mut out);
        Ok(ObjectiveVector::from_trusted(out))
    }

    fn evaluate_bits(&self, bits: &[u8], out: &mut [f64]) {
        let width_shift = self.k + 1;
        out.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..self.n {
            let mut pattern = bits[j] as usize;
            for (b, &l) in self.links[j].iter().enumerate() {
                pattern |= (bits[l] as usize) << (b + 1);
            }
            let offset = (j << width_shift) + pattern;
            for (o, table) in out.iter_mut().zip(&self.tables) {
                *o += table[offset];
            }
        }
        let inv = 1.0 / self.n as f64;
        out.iter_mut().for_each(|v| *v *= inv);
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.n > MAX_ENUMERATION_N {
            return Err(Error::capacity(format!(
                "exhaustive enumeration limited to n <= {MAX_ENUMERATION_N} (n={})",
                self.n
            )));
        }
        Ok(())
    }

    /// Objective vectors of all `2^n` solutions, indexed by
    /// [`Solution::to_index`].
    pub fn evaluate_all(&self) -> Result<Vec<Vec<f64>>> {
        self.check_enumerable()?;
        let total = 1u64 << self.n;
        Ok((0..total)
            .into_par_iter()
            .map(|idx| {
                let s = Solution::from_index(idx, self.n);
                let mut out = vec![0.0; self.m];
                self.evaluate_bits(s.bits(), &mut out);
                out
            })
            .collect())
    }

    /// All Pareto-optimal solutions with their objective vectors, in
    /// lexicographic order of the bit strings.
    pub fn enumerate_pareto_set(&self) -> Result<Vec<(Solution, ObjectiveVector)>> {
        let all = self.evaluate_all()?;
        let keep = nondominated_indices(&all)?;
        Ok(keep
            .into_iter()
            .map(|i| {
                (
                    Solution::from_index(i as u64, self.n),
                    ObjectiveVector::from_trusted(all[i].clone()),
                )
            })
            .collect())
    }

    pub fn proportion_pareto_optimal(&self) -> Result<f64> {
        let all = self.evaluate_all()?;
        let count = nondominated_indices(&all)?.len();
        Ok(count as f64 / all.len() as f64)
    }

    /// Text serialization; floats carry 17 significant digits so the
    /// round-trip is exact.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC} {FORMAT_VERSION}");
        let _ = writeln!(s, "n {}", self.n);
        let _ = writeln!(s, "k {}", self.k);
        let _ = writeln!(s, "m {}", self.m);
        let _ = writeln!(s, "seed {}", self.seed);
        s.push_str("links\n");
        for l in &self.links {
            let row: Vec<String> = l.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s.push_str("tables\n");
        let width = 1usize << (self.k + 1);
        for table in &self.tables {
            for row in table.chunks(width) {
                let row: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
                let _ = writeln!(s, "{}", row.join(" "));
            }
        }
        s.push_str("end\n");
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::malformed(0, format!("unexpected end of file, expected {what}")))
        };

        let (ln, header) = next("header")?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(MAGIC) {
            return Err(Error::malformed(ln, "missing instance magic"));
        }
        match parts.next().and_then(|v| v.parse::<u32>().ok()) {
            Some(FORMAT_VERSION) => {}
            _ => return Err(Error::malformed(ln, "unsupported format version")),
        }

        let mut field = |name: &str| -> Result<u64> {
            let (ln, line) = next(name)?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(name) {
                return Err(Error::malformed(ln, format!("expected field `{name}`")));
            }
            parts
                .next()
                .and_then(|v| v.parse::<u64>().ok())
                .ok_or_else(|| Error::malformed(ln, format!("bad value for `{name}`")))
        };
        let n = field("n")? as usize;
        let k = field("k")? as usize;
        let m = field("m")? as usize;
        let seed = field("seed")?;
        validate_params(n, k, m).map_err(|e| Error::Validation(e.to_string()))?;

        let (ln, line) = next("links")?;
        if line.trim() != "links" {
            return Err(Error::malformed(ln, "expected `links` section"));
        }
        let mut links = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = next("link row")?;
            let row = line
                .split_whitespace()
                .map(|v| v.parse::<usize>().map_err(|_| Error::malformed(ln, "bad link index")))
                .collect::<Result<Vec<_>>>()?;
            links.push(row);
        }
        let (ln, line) = next("tables")?;
        if line.trim() != "tables" {
            return Err(Error::malformed(ln, "expected `tables` section"));
        }
        let width = 1usize << (k + 1);
        let mut tables = Vec::with_capacity(m);
        for _ in 0..m {
            let mut table = Vec::with_capacity(n * width);
            for _ in 0..n {
                let (ln, line) = next("table row")?;
                let row = line
                    .split_whitespace()
                    .map(|v| v.parse::<f64>().map_err(|_| Error::malformed(ln, "bad table value")))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != width {
                    return Err(Error::malformed(ln, format!("expected {width} values, got {}", row.len())));
                }
                table.extend(row);
            }
            tables.push(table);
        }
        let (ln, line) = next("end")?;
        if line.trim() != "end" {
            return Err(Error::malformed(ln, "expected `end`"));
        }
        NkInstance::from_parts(n, k, m, seed, links, tables)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        NkInstance::from_text(&text)
    }
}

pub fn generate_instance(n: usize, k: usize, m: usize, seed: u64) -> Result<NkInstance> {
    NkInstance::generate(n, k, m, seed)
}

pub fn save_instance(inst: &NkInstance, path: impl AsRef<Path>) -> Result<()> {
    inst.save(path)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<NkInstance> {
    NkInstance::load(path)
}
