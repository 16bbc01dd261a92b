//! Lookup tables for vectorial functions F: F_q^n -> F_q^m, their graphs,
//! sampling, and the on-disk format.
//!
//! Inputs are ordered by their radix-q code and outputs stored as radix-q
//! codes, so a table is a sequence of `q^n` integers in `[0, q^m)`. The same
//! convention makes whole tables comparable across runs and lets a small
//! function space be indexed by a single integer (see [`FuncTable::pack`]).

use crate::error::{Error, ParseError, Result};
use crate::field::Field;
use crate::linalg::FqVector;
use crate::rng::{stream_rng, uniform_u64};
use num_bigint::BigUint;
use rand_core::RngCore;
use serde::{Deserialize, Serialize};

/// Radix-q positional code of a vector; see [`FqVector::code`].
pub fn encode_vec(v: &FqVector) -> u64 {
    v.code()
}

/// Inverse of [`encode_vec`] for a given dimension.
pub fn decode_vec(field: &'static Field, dim: usize, code: u64) -> Result<FqVector> {
    FqVector::from_code(field, dim, code)
}

/// `q^{m q^n}`, the number of functions F_q^n -> F_q^m, with its base-q log.
/// Errors when the materialized count would be astronomically large; the
/// bound evaluators work in the log domain and do not need it.
pub fn function_space_size(q: u64, n: usize, m: usize) -> Result<(BigUint, u64)> {
    Field::get(q)?;
    let n32 = u32::try_from(n)
        .map_err(|_| Error::InvalidArgument(format!("dimension {n} out of range")))?;
    let exponent = q
        .checked_pow(n32)
        .and_then(|qn| qn.checked_mul(m as u64))
        .filter(|&e| e <= u32::MAX as u64)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "function space at (q,n,m)=({q},{n},{m}) is too large to materialize"
            ))
        })?;
    Ok((BigUint::from(q).pow(exponent as u32), exponent))
}

/// A vectorial function as its full lookup table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FuncTable {
    field: &'static Field,
    n: usize,
    m: usize,
    table: Vec<u32>,
}

impl std::fmt::Debug for FuncTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FuncTable(q={}, n={}, m={}, {:?})",
            self.field.q(),
            self.n,
            self.m,
            self.table
        )
    }
}

impl FuncTable {
    pub fn new(field: &'static Field, n: usize, m: usize, table: Vec<u32>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument("dimensions must be positive".into()));
        }
        let q = field.q() as u64;
        let domain = q
            .checked_pow(n as u32)
            .ok_or_else(|| Error::InvalidArgument("domain too large".into()))?;
        let codomain = q
            .checked_pow(m as u32)
            .filter(|&c| c <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidArgument("codomain too large".into()))?;
        if table.len() as u64 != domain {
            return Err(ParseError::TableLength { expected: domain, found: table.len() as u64 }.into());
        }
        if let Some((index, &code)) = table.iter().enumerate().find(|(_, &c)| c as u64 >= codomain)
        {
            return Err(ParseError::CodeOutOfRange { index, code: code as u64, limit: codomain }.into());
        }
        Ok(FuncTable { field, n, m, table })
    }

    pub fn zero(field: &'static Field, n: usize, m: usize) -> Self {
        let domain = (field.q() as u64).pow(n as u32);
        FuncTable { field, n, m, table: vec![0; domain as usize] }
    }

    /// The identity-code map x -> x; requires n == m.
    pub fn identity_map(field: &'static Field, n: usize) -> Self {
        let domain = (field.q() as u64).pow(n as u32);
        FuncTable { field, n, m: n, table: (0..domain as u32).collect() }
    }

    #[inline]
    pub fn field(&self) -> &'static Field {
        self.field
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn domain_size(&self) -> u64 {
        self.table.len() as u64
    }

    #[inline]
    pub fn codomain_size(&self) -> u64 {
        self.q().pow(self.m as u32)
    }

    #[inline]
    pub fn get_code(&self, x_code: u64) -> u32 {
        self.table[x_code as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn eval(&self, x: &FqVector) -> FqVector {
        FqVector::from_code(self.field, self.m, self.table[x.code() as usize] as u64)
            .expect("stored codes are in range")
    }

    /// Same (q, n, m) signature as another table.
    pub fn same_shape(&self, other: &FuncTable) -> bool {
        self.field.q() == other.field.q() && self.n == other.n && self.m == other.m
    }

    /// Packs the whole table into one integer in `[0, q^{m q^n})`, the table
    /// read as a radix-`q^m` number (cell 0 least significant). Only valid
    /// when the function space fits in u64.
    pub fn pack(&self) -> u64 {
        let base = self.codomain_size();
        self.table.iter().rev().fold(0u64, |acc, &c| acc * base + c as u64)
    }

    pub fn unpack(field: &'static Field, n: usize, m: usize, mut packed: u64) -> Self {
        let q = field.q() as u64;
        let base = q.pow(m as u32);
        let domain = q.pow(n as u32);
        let table = (0..domain)
            .map(|_| {
                let c = (packed % base) as u32;
                packed /= base;
                c
            })
            .collect();
        FuncTable { field, n, m, table }
    }

    /// Uniformly random table: every cell i.i.d. uniform over the codomain,
    /// drawn from the ChaCha8 stream for `seed`. Identical seeds give
    /// identical tables on every platform.
    pub fn random(field: &'static Field, n: usize, m: usize, seed: u64) -> Self {
        Self::random_from(field, n, m, &mut stream_rng(seed, 0))
    }

    /// As [`FuncTable::random`] but drawing from a caller-managed stream.
    pub fn random_from(
        field: &'static Field,
        n: usize,
        m: usize,
        rng: &mut impl RngCore,
    ) -> Self {
        let q = field.q() as u64;
        let domain = q.pow(n as u32);
        let codomain = q.pow(m as u32);
        let table = (0..domain).map(|_| uniform_u64(rng, codomain) as u32).collect();
        FuncTable { field, n, m, table }
    }
}

/// The point set `{(x, F(x))}` in F_q^{n+m}, stored as sorted radix-q codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSet {
    field: &'static Field,
    n: usize,
    m: usize,
    points: Vec<u64>,
}

impl GraphSet {
    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + self.m
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn contains(&self, code: u64) -> bool {
        self.points.binary_search(&code).is_ok()
    }

    /// Reconstructs the unique function with this graph.
    pub fn to_function(&self) -> Result<FuncTable> {
        let q = self.field.q() as u64;
        let qn = q.pow(self.n as u32);
        let mut table = vec![u32::MAX; qn as usize];
        for &p in &self.points {
            let x = p % qn;
            let y = p / qn;
            if table[x as usize] != u32::MAX {
                return Err(Error::InvalidArgument(format!(
                    "two points share the input projection {x}"
                )));
            }
            table[x as usize] = y as u32;
        }
        if table.contains(&u32::MAX) {
            return Err(Error::InvalidArgument("graph does not cover the domain".into()));
        }
        FuncTable::new(self.field, self.n, self.m, table)
    }
}

/// The graph of F as a sorted, duplicate-free point set.
pub fn graph_of(f: &FuncTable) -> GraphSet {
    let qn = f.domain_size();
    // (x, y) has code x + q^n * y because the x coordinates come first.
    let mut points: Vec<u64> =
        (0..qn).map(|x| x + qn * f.get_code(x) as u64).collect();
    points.sort_unstable();
    GraphSet { field: f.field, n: f.n, m: f.m, points }
}

/// On-disk document: canonical key order q, n, m, table; integers only.
#[derive(Serialize, Deserialize)]
struct TableFile {
    q: u64,
    n: usize,
    m: usize,
    table: Vec<u64>,
}

impl FuncTable {
    pub fn to_json(&self) -> String {
        let doc = TableFile {
            q: self.q(),
            n: self.n,
            m: self.m,
            table: self.table.iter().map(|&c| c as u64).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableFile = serde_json::from_str(text).map_err(|e| {
            ParseError::Syntax { offset: byte_offset(text, e.line(), e.column()), message: e.to_string() }
        })?;
        let field = Field::get(doc.q)?;
        let q = doc.q;
        if doc.n == 0 || doc.m == 0 {
            return Err(ParseError::Field {
                field: "n/m".into(),
                message: "dimensions must be positive".into(),
            }
            .into());
        }
        let domain = q
            .checked_pow(doc.n as u32)
            .ok_or_else(|| Error::InvalidArgument("domain too large".into()))?;
        let codomain = q
            .checked_pow(doc.m as u32)
            .ok_or_else(|| Error::InvalidArgument("codomain too large".into()))?;
        if doc.table.len() as u64 != domain {
            return Err(
                ParseError::TableLength { expected: domain, found: doc.table.len() as u64 }.into()
            );
        }
        if let Some((index, &code)) =
            doc.table.iter().enumerate().find(|(_, &c)| c >= codomain)
        {
            return Err(ParseError::CodeOutOfRange { index, code, limit: codomain }.into());
        }
        FuncTable::new(field, doc.n, doc.m, doc.table.iter().map(|&c| c as u32).collect())
    }
}

/// Byte offset of a 1-based (line, column) position in `text`.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0usize;
    for (i, l) in text.split('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1);
        }
        offset += l.len() + 1;
    }
    text.len()
}

pub fn write_table(f: &FuncTable, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, f.to_json())
        .map_err(|source| Error::Io { path: path.display().to_string(), source })
}

pub fn read_table(path: &std::path::Path) -> Result<FuncTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    FuncTable::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn f(q: u64) -> &'static Field {
        Field::get(q).unwrap()
    }

    #[test]
    fn encode_examples() {
        let v = FqVector::new(f(2), vec![0, 0, 0]).unwrap();
        assert_eq!(encode_vec(&v), 0);
        let v = FqVector::new(f(2), vec![1, 0, 1]).unwrap();
        assert_eq!(encode_vec(&v), 5);
        let v = decode_vec(f(3), 2, 7).unwrap();
        assert_eq!(v.entries(), &[1, 2]);
        assert!(decode_vec(f(3), 2, 9).is_err());
    }

    #[test]
    fn encode_decode_exhaustive() {
        for &q in &[2u64, 3] {
            for dim in 1..=8usize {
                let total = q.pow(dim as u32);
                for code in 0..total {
                    let v = decode_vec(f(q), dim, code).unwrap();
                    assert_eq!(encode_vec(&v), code);
                }
            }
        }
    }

    #[test]
    fn space_sizes() {
        assert_eq!(function_space_size(2, 1, 1).unwrap().0.to_u64().unwrap(), 4);
        assert_eq!(function_space_size(2, 2, 2).unwrap().0.to_u64().unwrap(), 256);
        assert_eq!(function_space_size(3, 1, 1).unwrap().0.to_u64().unwrap(), 27);
        assert_eq!(function_space_size(2, 2, 2).unwrap().1, 8);
    }

    #[test]
    fn space_size_matches_exhaustive_generation() {
        for &(q, n, m) in &[(2u64, 1usize, 1usize), (2, 2, 1)] {
            let (size, _) = function_space_size(q, n, m).unwrap();
            let size = size.to_u64().unwrap();
            let mut seen = std::collections::HashSet::new();
            for packed in 0..size {
                seen.insert(FuncTable::unpack(f(q), n, m, packed));
            }
            assert_eq!(seen.len() as u64, size);
        }
    }

    #[test]
    fn random_function_is_deterministic_and_in_range() {
        let a = FuncTable::random(f(2), 1, 1, 99);
        let b = FuncTable::random(f(2), 1, 1, 99);
        assert_eq!(a, b);
        let c = FuncTable::random(f(3), 1, 2, 5);
        assert!(c.table().iter().all(|&code| code < 9));
    }

    /// Per-cell value frequencies over 10^4 samples at (2,3,3) stay within
    /// 4 standard deviations of the uniform expectation.
    #[test]
    fn random_function_per_cell_uniformity() {
        let trials = 10_000u64;
        let mut counts = vec![[0u64; 8]; 8];
        for t in 0..trials {
            let g = FuncTable::random_from(f(2), 3, 3, &mut stream_rng(0xabc, t));
            for (cell, &code) in g.table().iter().enumerate() {
                counts[cell][code as usize] += 1;
            }
        }
        let p = 1.0 / 8.0;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        let expected = trials as f64 * p;
        for cell in 0..8 {
            for value in 0..8 {
                let dev = (counts[cell][value] as f64 - expected).abs();
                assert!(
                    dev <= 4.0 * sigma,
                    "cell {cell} value {value}: count {} deviates {dev:.1} > 4 sigma",
                    counts[cell][value]
                );
            }
        }
    }

    #[test]
    fn graph_examples() {
        let zero = FuncTable::zero(f(2), 1, 1);
        assert_eq!(graph_of(&zero).points(), &[0, 1]);
        let id = FuncTable::identity_map(f(2), 1);
        assert_eq!(graph_of(&id).points(), &[0, 3]);
        let any = FuncTable::new(f(2), 2, 2, vec![3, 1, 0, 2]).unwrap();
        let g = graph_of(&any);
        assert_eq!(g.points().len(), 4);
        let xs: std::collections::HashSet<u64> = g.points().iter().map(|p| p % 4).collect();
        assert_eq!(xs.len(), 4);
    }

    #[test]
    fn graph_determines_function_exhaustively() {
        for packed in 0..256u64 {
            let t = FuncTable::unpack(f(2), 2, 2, packed);
            assert_eq!(graph_of(&t).to_function().unwrap(), t);
        }
    }

    #[test]
    fn json_roundtrip_random_tables() {
        for seed in 0..100u64 {
            let t = FuncTable::random(f(3), 1, 2, seed);
            assert_eq!(FuncTable::from_json(&t.to_json()).unwrap(), t);
        }
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.sbox.json");
        let t = FuncTable::random(f(2), 2, 2, 1);
        write_table(&t, &path).unwrap();
        assert_eq!(read_table(&path).unwrap(), t);
    }

    #[test]
    fn parse_errors_are_typed() {
        // wrong table length (q^n - 1 entries)
        let bad_len = r#"{"q":2,"n":2,"m":2,"table":[0,1,2]}"#;
        match FuncTable::from_json(bad_len) {
            Err(Error::Parse(ParseError::TableLength { expected: 4, found: 3 })) => {}
            other => panic!("expected table length error, got {other:?}"),
        }
        // code equal to q^m
        let bad_code = r#"{"q":2,"n":1,"m":2,"table":[0,4]}"#;
        match FuncTable::from_json(bad_code) {
            Err(Error::Parse(ParseError::CodeOutOfRange { index: 1, code: 4, limit: 4 })) => {}
            other => panic!("expected code out of range, got {other:?}"),
        }
        // malformed document reports a byte offset
        let bad_syntax = "{\"q\":2,\n\"n\":1,";
        match FuncTable::from_json(bad_syntax) {
            Err(Error::Parse(ParseError::Syntax { offset, .. })) => assert!(offset > 0),
            other => panic!("expected syntax error, got {other:?}"),
        }
        // unsupported field size
        assert!(FuncTable::from_json(r#"{"q":6,"n":1,"m":1,"table":[0,1,2,3,4,5]}"#).is_err());
    }

    #[test]
    fn pack_unpack_all_small() {
        for packed in 0..256u64 {
            assert_eq!(FuncTable::unpack(f(2), 2, 2, packed).pack(), packed);
        }
    }

    proptest! {
        #[test]
        fn prop_pack_roundtrip(packed in 0u64..729) {
            let t = FuncTable::unpack(f(3), 1, 2, packed % 81);
            prop_assert_eq!(t.pack(), packed % 81);
        }

        #[test]
        fn prop_json_roundtrip(seed in 0u64..u64::MAX) {
            let t = FuncTable::random(f(2), 2, 2, seed);
            prop_assert_eq!(FuncTable::from_json(&t.to_json()).unwrap(), t);
        }
    }
}
