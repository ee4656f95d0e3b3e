//! Words, periodic points, and locally constant potentials on the full shift
//! over the alphabet {0, 1}.
//!
//! A potential of depth `k` assigns one real value to every cylinder set
//! `[w]` of length `k`; it reads the first `k` symbols of a configuration and
//! nothing else. Birkhoff sums follow the convention
//! `S_N f(omega) = sum_{n=0}^{N-1} f(sigma^n omega)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Enumeration cap for operations that visit every word of a given depth.
pub const ENUMERATION_CAP: usize = 26;

/// Parses a word from its `0`/`1` string form.
pub fn parse_word(s: &str) -> Result<Vec<u8>> {
    s.bytes()
        .enumerate()
        .map(|(pos, b)| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            other => Err(Error::NotBinary { value: other, pos }),
        })
        .collect()
}

/// Renders a word as a `0`/`1` string.
pub fn word_to_string(w: &[u8]) -> String {
    w.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Checks that every symbol is 0 or 1.
pub fn validate_word(w: &[u8]) -> Result<()> {
    for (pos, &value) in w.iter().enumerate() {
        if value > 1 {
            return Err(Error::NotBinary { value, pos });
        }
    }
    Ok(())
}

/// Table index of a word: the first symbol is the most significant bit.
pub fn word_index(w: &[u8]) -> usize {
    w.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

/// Inverse of [`word_index`] for a fixed word length.
pub fn index_to_word(len: usize, index: usize) -> Vec<u8> {
    (0..len).map(|i| ((index >> (len - 1 - i)) & 1) as u8).collect()
}

/// Symbol-wise complement (0 <-> 1).
pub fn conjugate_word(w: &[u8]) -> Vec<u8> {
    w.iter().map(|&b| 1 - b).collect()
}

/// A periodic configuration, stored by one period of its symbol sequence.
///
/// The stored period may be a repetition of a shorter primitive word;
/// `canonical` reduces to the primitive word in its lexicographically
/// smallest rotation, which is the unique orbit representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPoint {
    period: Vec<u8>,
}

impl PeriodicPoint {
    pub fn new(period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Empty("periodic point needs a nonempty period".into()));
        }
        validate_word(&period)?;
        Ok(Self { period })
    }

    pub fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_word(s)?)
    }

    pub fn period_word(&self) -> &[u8] {
        &self.period
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Coordinate `i` (0-based) of the infinite sequence.
    pub fn coord(&self, i: usize) -> u8 {
        self.period[i % self.period.len()]
    }

    /// First `len` coordinates of the infinite sequence.
    pub fn unroll(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.coord(i)).collect()
    }

    /// Primitive period in its lexicographically smallest rotation.
    pub fn canonical(&self) -> PeriodicPoint {
        let primitive = primitive_root(&self.period);
        let start = smallest_rotation(primitive);
        let p = primitive.len();
        let period = (0..p).map(|i| primitive[(start + i) % p]).collect();
        PeriodicPoint { period }
    }
}

impl fmt::Display for PeriodicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^inf", word_to_string(&self.period))
    }
}

/// Shortest prefix whose repetition gives `w`.
fn primitive_root(w: &[u8]) -> &[u8] {
    let n = w.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|i| w[i] == w[i % d]) {
            return &w[..d];
        }
    }
    w
}

/// Start index of the lexicographically smallest rotation (Booth's algorithm).
fn smallest_rotation(w: &[u8]) -> usize {
    let n = w.len();
    let at = |i: usize| w[i % n];
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match at(i + k).cmp(&at(j + k)) {
            std::cmp::Ordering::Equal => k += 1,
            std::cmp::Ordering::Greater => {
                i = (i + k + 1).max(j + 1);
                k = 0;
            }
            std::cmp::Ordering::Less => {
                j = (j + k + 1).max(i + 1);
                k = 0;
            }
        }
        if i == j {
            j += 1;
        }
    }
    i.min(j)
}

/// A potential constant on cylinders of a fixed depth, backed by a value
/// table indexed by [`word_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct PccFunction {
    depth: usize,
    table: Vec<f64>,
}

impl PccFunction {
    pub fn new(depth: usize, table: Vec<f64>) -> Result<Self> {
        if depth == 0 || depth >= usize::BITS as usize {
            return Err(Error::InvalidParameter(format!("depth {depth} out of range")));
        }
        let expected = 1usize << depth;
        if table.len() != expected {
            return Err(Error::TableSize { len: table.len(), depth, expected });
        }
        if let Some(bad) = table.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite table value {bad}")));
        }
        Ok(Self { depth, table })
    }

    pub fn constant(depth: usize, value: f64) -> Result<Self> {
        Self::new(depth, vec![value; 1 << depth])
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Value on the cylinder whose word has the given table index.
    #[inline]
    pub fn value(&self, index: usize) -> f64 {
        self.table[index]
    }

    /// Value on the cylinder of the first `depth` symbols of `w`.
    pub fn evaluate(&self, w: &[u8]) -> Result<f64> {
        if w.len() < self.depth {
            return Err(Error::WordTooShort { len: w.len(), required: self.depth });
        }
        validate_word(&w[..self.depth])?;
        Ok(self.table[word_index(&w[..self.depth])])
    }

    /// Same function expressed at a deeper cylinder resolution.
    pub fn refine(&self, depth: usize) -> Result<PccFunction> {
        if depth < self.depth {
            return Err(Error::InvalidParameter(format!(
                "cannot refine depth {} down to {}",
                self.depth, depth
            )));
        }
        if depth >= usize::BITS as usize {
            return Err(Error::DepthTooLarge { depth, cap: usize::BITS as usize - 1 });
        }
        let shift = depth - self.depth;
        let table = (0..1usize << depth).map(|i| self.table[i >> shift]).collect();
        PccFunction::new(depth, table)
    }

    /// Pointwise minimum over all cylinders.
    pub fn alpha_min(&self) -> f64 {
        self.table.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Pointwise maximum over all cylinders.
    pub fn alpha_max(&self) -> f64 {
        self.table.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.table.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Integral against the (1/2, 1/2) Bernoulli measure: every depth-k
    /// cylinder has mass 2^-k.
    pub fn integrate(&self) -> f64 {
        let sum: f64 = self.table.iter().sum();
        sum / self.table.len() as f64
    }

    /// Potential composed with the symbol-wise complement.
    pub fn conjugate(&self) -> PccFunction {
        let mask = self.table.len() - 1;
        let table = (0..self.table.len()).map(|i| self.table[!i & mask]).collect();
        PccFunction { depth: self.depth, table }
    }

    /// Entry-wise sum; both operands are refined to the deeper grid.
    pub fn add(&self, other: &PccFunction) -> Result<PccFunction> {
        let depth = self.depth.max(other.depth);
        let a = self.refine(depth)?;
        let b = other.refine(depth)?;
        let table = a.table.iter().zip(&b.table).map(|(x, y)| x + y).collect();
        PccFunction::new(depth, table)
    }

    /// Entry-wise scaling.
    pub fn scale(&self, c: f64) -> Result<PccFunction> {
        PccFunction::new(self.depth, self.table.iter().map(|v| c * v).collect())
    }

    /// Largest sup-norm difference after refining both to a common depth.
    pub fn sup_distance(&self, other: &PccFunction) -> Result<f64> {
        let depth = self.depth.max(other.depth);
        let a = self.refine(depth)?;
        let b = other.refine(depth)?;
        Ok(a.table
            .iter()
            .zip(&b.table)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
    }
}

type Rule = Arc<dyn Fn(&[u8]) -> f64 + Send + Sync>;

/// A locally constant potential that is either table-backed or given by a
/// procedural rule reading a declared number of leading symbols.
///
/// The rule form exists for constructions whose effective depth makes a
/// table infeasible; the contract is identical: the value on a word depends
/// only on its first `effective_depth` symbols.
#[derive(Clone)]
pub enum SymbolFunction {
    Table(PccFunction),
    Rule { depth: usize, rule: Rule },
}

impl SymbolFunction {
    pub fn from_rule(
        depth: usize,
        rule: impl Fn(&[u8]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SymbolFunction::Rule { depth, rule: Arc::new(rule) }
    }

    pub fn effective_depth(&self) -> usize {
        match self {
            SymbolFunction::Table(f) => f.depth(),
            SymbolFunction::Rule { depth, .. } => *depth,
        }
    }

    pub fn evaluate(&self, w: &[u8]) -> Result<f64> {
        match self {
            SymbolFunction::Table(f) => f.evaluate(w),
            SymbolFunction::Rule { depth, rule } => {
                if w.len() < *depth {
                    return Err(Error::WordTooShort { len: w.len(), required: *depth });
                }
                Ok(rule(w))
            }
        }
    }

    /// Materializes the value table; refuses astronomically deep rules.
    pub fn to_table(&self) -> Result<PccFunction> {
        match self {
            SymbolFunction::Table(f) => Ok(f.clone()),
            SymbolFunction::Rule { depth, rule } => {
                if *depth > ENUMERATION_CAP {
                    return Err(Error::DepthTooLarge { depth: *depth, cap: ENUMERATION_CAP });
                }
                let table = (0..1usize << depth)
                    .map(|i| rule(&index_to_word(*depth, i)))
                    .collect();
                PccFunction::new(*depth, table)
            }
        }
    }

    /// Integral against the (1/2, 1/2) Bernoulli measure.
    pub fn integrate(&self) -> Result<f64> {
        match self {
            SymbolFunction::Table(f) => Ok(f.integrate()),
            rule => Ok(rule.to_table()?.integrate()),
        }
    }
}

impl fmt::Debug for SymbolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolFunction::Table(t) => f.debug_tuple("Table").field(t).finish(),
            SymbolFunction::Rule { depth, .. } => {
                f.debug_struct("Rule").field("depth", depth).finish_non_exhaustive()
            }
        }
    }
}

impl From<PccFunction> for SymbolFunction {
    fn from(f: PccFunction) -> Self {
        SymbolFunction::Table(f)
    }
}

/// Average of the first `n` Birkhoff terms read off a finite prefix:
/// `(1/n) sum_{j=0}^{n-1} f(sigma^j omega)`.
///
/// The prefix must carry `n + depth - 1` symbols so every term is defined.
pub fn finite_birkhoff_average(f: &SymbolFunction, prefix: &[u8], n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("average over zero terms".into()));
    }
    let depth = f.effective_depth();
    let required = n + depth - 1;
    if prefix.len() < required {
        return Err(Error::WordTooShort { len: prefix.len(), required });
    }
    let mut sum = 0.0;
    for j in 0..n {
        sum += f.evaluate(&prefix[j..])?;
    }
    Ok(sum / n as f64)
}

/// Exact orbit average of `f` along a periodic configuration: the mean of
/// `f` over one full period, windows wrapping around the period.
pub fn periodic_birkhoff_average(f: &SymbolFunction, p: &PeriodicPoint) -> Result<f64> {
    let depth = f.effective_depth();
    let len = p.period_len();
    let unrolled = p.unroll(len + depth - 1);
    let mut sum = 0.0;
    for j in 0..len {
        sum += f.evaluate(&unrolled[j..])?;
    }
    Ok(sum / len as f64)
}
