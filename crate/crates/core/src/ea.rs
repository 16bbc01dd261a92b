//! The extended-affine group AGL(U) x AGL(W), its action on function tables,
//! orbit structure of affine permutations, equivalence testing, and
//! stabilizer computation.
//!
//! Action convention: the pair of affine permutations acts by composing the
//! output map after F after the input map, so `(g.F)(x) = Q F(Px + a) + b`.
//! The induced group law composes output parts as maps and input parts in
//! reversed order; `compose` and `apply` are unit-tested together to pin this
//! down.

use crate::error::{Error, Result};
use crate::exec;
use crate::field::Field;
use crate::func::FuncTable;
use crate::linalg::{enumerate_agl, solve_linear, AffineSubspace, FqMatrix, FqVector};
use crate::Settings;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

/// An invertible affine map `x -> M x + s` on F_q^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    mat: FqMatrix,
    shift: FqVector,
}

impl AffineMap {
    pub fn new(mat: FqMatrix, shift: FqVector) -> Result<Self> {
        if mat.rows() != mat.cols() || mat.rows() != shift.dim() {
            return Err(Error::DimensionMismatch(
                "affine map needs a square matrix matching the shift".into(),
            ));
        }
        if !mat.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        Ok(AffineMap { mat, shift })
    }

    pub fn identity(field: &'static Field, dim: usize) -> Self {
        AffineMap { mat: FqMatrix::identity(field, dim), shift: FqVector::zero(field, dim) }
    }

    pub fn translation(field: &'static Field, shift: FqVector) -> Self {
        AffineMap { mat: FqMatrix::identity(field, shift.dim()), shift }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.shift.dim()
    }

    #[inline]
    pub fn field(&self) -> &'static Field {
        self.mat.field()
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.mat
    }

    pub fn shift(&self) -> &FqVector {
        &self.shift
    }

    pub fn is_identity(&self) -> bool {
        self.shift.is_zero() && self.mat == FqMatrix::identity(self.field(), self.dim())
    }

    pub fn apply(&self, x: &FqVector) -> FqVector {
        self.mat.mat_vec(x).add(&self.shift)
    }

    /// `self` after `other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            mat: self.mat.mul(&other.mat),
            shift: self.mat.mat_vec(&other.shift).add(&self.shift),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.mat.inverse().expect("constructed invertible");
        let shift = inv.mat_vec(&self.shift).neg();
        AffineMap { mat: inv, shift }
    }

    /// The permutation of point codes induced on F_q^dim.
    pub fn permutation_table(&self) -> Vec<u32> {
        let field = self.field();
        let total = (field.q() as u64).pow(self.dim() as u32);
        (0..total)
            .map(|code| {
                let x = FqVector::from_code(field, self.dim(), code).expect("in range");
                self.apply(&x).code() as u32
            })
            .collect()
    }

    /// Fixed points as the solution set of `(M - I) x = -s`.
    pub fn fixed_points(&self) -> AffineSubspace {
        let field = self.field();
        let id = FqMatrix::identity(field, self.dim());
        solve_linear(&self.mat.sub(&id), &self.shift.neg()).expect("square system")
    }

    /// Cycle decomposition of the induced permutation; base points are the
    /// smallest code of each cycle, listed in increasing order.
    pub fn orbits(&self) -> OrbitDecomposition {
        let perm = self.permutation_table();
        let total = perm.len() as u64;
        let mut visited = vec![false; perm.len()];
        let mut orbits = Vec::new();
        for start in 0..perm.len() {
            if visited[start] {
                continue;
            }
            let mut len = 0u64;
            let mut cur = start;
            loop {
                visited[cur] = true;
                len += 1;
                cur = perm[cur] as usize;
                if cur == start {
                    break;
                }
            }
            orbits.push(Orbit { base_code: start as u64, len });
        }
        OrbitDecomposition {
            field: self.field(),
            dim: self.dim(),
            orbits,
            total_points: total,
        }
    }

    /// Dense code for group indexing: matrix lex code paired with shift code.
    pub fn element_code(&self) -> u64 {
        let qd = (self.field().q() as u64).pow(self.dim() as u32);
        self.mat.lex_code() * qd + self.shift.code()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub base_code: u64,
    pub len: u64,
}

/// Partition of F_q^dim into the cycles of one affine permutation.
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    field: &'static Field,
    dim: usize,
    orbits: Vec<Orbit>,
    total_points: u64,
}

impl OrbitDecomposition {
    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    pub fn total_points(&self) -> u64 {
        self.total_points
    }

    pub fn base_point(&self, i: usize) -> FqVector {
        FqVector::from_code(self.field, self.dim, self.orbits[i].base_code).expect("in range")
    }

    /// Multiset of cycle lengths as (length, multiplicity), ascending length.
    pub fn length_multiset(&self) -> Vec<(u64, u64)> {
        let mut counts = std::collections::BTreeMap::new();
        for o in &self.orbits {
            *counts.entry(o.len).or_insert(0u64) += 1;
        }
        counts.into_iter().collect()
    }
}

/// One element of the extended-affine group: an input permutation of the
/// domain and an output permutation of the codomain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EAElement {
    input: AffineMap,
    output: AffineMap,
}

impl EAElement {
    pub fn new(input: AffineMap, output: AffineMap) -> Self {
        EAElement { input, output }
    }

    pub fn identity(field: &'static Field, n: usize, m: usize) -> Self {
        EAElement {
            input: AffineMap::identity(field, n),
            output: AffineMap::identity(field, m),
        }
    }

    pub fn input(&self) -> &AffineMap {
        &self.input
    }

    pub fn output(&self) -> &AffineMap {
        &self.output
    }

    pub fn is_identity(&self) -> bool {
        self.input.is_identity() && self.output.is_identity()
    }

    pub fn matches(&self, f: &FuncTable) -> bool {
        self.input.field() == f.field()
            && self.input.dim() == f.n()
            && self.output.dim() == f.m()
    }

    /// The table of `x -> Q F(Px + a) + b`.
    pub fn apply(&self, f: &FuncTable) -> Result<FuncTable> {
        if !self.matches(f) {
            return Err(Error::DimensionMismatch(
                "group element does not match the function signature".into(),
            ));
        }
        let in_perm = self.input.permutation_table();
        let out_perm = self.output.permutation_table();
        Ok(apply_perms(f, &in_perm, &out_perm))
    }

    /// Group law compatible with `apply` as a left action:
    /// `compose(g, h).apply(f) == g.apply(h.apply(f))`.
    pub fn compose(&self, other: &EAElement) -> EAElement {
        EAElement {
            input: other.input.compose(&self.input),
            output: self.output.compose(&other.output),
        }
    }

    pub fn inverse(&self) -> EAElement {
        EAElement { input: self.input.inverse(), output: self.output.inverse() }
    }
}

/// Applies precomputed input/output code permutations to a table.
pub(crate) fn apply_perms(f: &FuncTable, in_perm: &[u32], out_perm: &[u32]) -> FuncTable {
    let table: Vec<u32> = (0..f.domain_size())
        .map(|x| out_perm[f.get_code(in_perm[x as usize] as u64) as usize])
        .collect();
    FuncTable::new(f.field(), f.n(), f.m(), table).expect("permuted table stays valid")
}

/// A fully materialized AGL(n, q) with dense element indexing, in the
/// deterministic enumeration order.
pub struct AglGroup {
    field: &'static Field,
    dim: usize,
    elements: Vec<AffineMap>,
    index: Vec<u32>,
}

impl AglGroup {
    pub fn enumerate(field: &'static Field, dim: usize, budget: u64) -> Result<Self> {
        let elements: Vec<AffineMap> = enumerate_agl(field, dim, budget)?
            .map(|(mat, shift)| AffineMap { mat, shift })
            .collect();
        let code_space = (field.q() as u64).pow((dim * dim + dim) as u32);
        let mut index = vec![u32::MAX; code_space as usize];
        for (i, e) in elements.iter().enumerate() {
            index[e.element_code() as usize] = i as u32;
        }
        Ok(AglGroup { field, dim, elements, index })
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[AffineMap] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &AffineMap {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &AffineMap) -> usize {
        let i = self.index[e.element_code() as usize];
        debug_assert_ne!(i, u32::MAX);
        i as usize
    }
}

/// Generators of AGL(n, q): translations by the basis vectors, unit
/// transvections, and one dilation by the multiplicative generator.
pub fn agl_generators(field: &'static Field, dim: usize) -> Vec<AffineMap> {
    let mut gens = Vec::new();
    for i in 0..dim {
        gens.push(AffineMap::translation(field, FqVector::basis(field, dim, i)));
    }
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            let mut m = FqMatrix::identity(field, dim);
            m.set(i, j, 1);
            gens.push(AffineMap { mat: m, shift: FqVector::zero(field, dim) });
        }
    }
    let g = field.generator();
    if g != 1 {
        let mut m = FqMatrix::identity(field, dim);
        m.set(0, 0, g);
        gens.push(AffineMap { mat: m, shift: FqVector::zero(field, dim) });
    }
    gens
}

/// Generators of the product group acting on tables: each AGL generator on
/// the input side paired with the identity on the output side, and vice versa.
pub fn gamma_generators(field: &'static Field, n: usize, m: usize) -> Vec<EAElement> {
    let mut gens = Vec::new();
    for g in agl_generators(field, n) {
        gens.push(EAElement { input: g, output: AffineMap::identity(field, m) });
    }
    for g in agl_generators(field, m) {
        gens.push(EAElement { input: AffineMap::identity(field, n), output: g });
    }
    gens
}

/// All affine maps `(Q, b)` with `Q u + b = v` for every pair, as the
/// solution set of one linear system in the matrix and shift unknowns.
/// Refuses with `SolutionSpaceTooLarge` when more than `fit_budget` candidate
/// solutions would need enumeration.
pub fn affine_fit(
    field: &'static Field,
    pairs: &[(FqVector, FqVector)],
    require_invertible: bool,
    fit_budget: u64,
) -> Result<Vec<(FqMatrix, FqVector)>> {
    let Some(first) = pairs.first() else {
        return Err(Error::InvalidArgument("affine fit needs at least one pair".into()));
    };
    let m = first.0.dim();
    if pairs.iter().any(|(u, v)| u.dim() != m || v.dim() != m) {
        return Err(Error::DimensionMismatch("fit pairs must share one dimension".into()));
    }
    // Unknowns: the matrix entries row-major, then the shift.
    let unknowns = m * m + m;
    let mut sys = FqMatrix::zero(field, pairs.len() * m, unknowns);
    let mut rhs = vec![0u8; pairs.len() * m];
    for (k, (u, v)) in pairs.iter().enumerate() {
        for r in 0..m {
            for c in 0..m {
                sys.set(k * m + r, r * m + c, u.get(c));
            }
            sys.set(k * m + r, m * m + r, 1);
            rhs[k * m + r] = v.get(r);
        }
    }
    let rhs = FqVector::new(field, rhs).expect("valid entries");
    let solutions = solve_linear(&sys, &rhs)?;
    let count = solutions.size();
    if count.to_u64().is_none_or(|c| c > fit_budget) {
        return Err(Error::SolutionSpaceTooLarge { size: count.to_string(), budget: fit_budget });
    }
    let mut out = Vec::new();
    for z in solutions.iter_points() {
        let mat = FqMatrix::new(field, m, m, z.entries()[..m * m].to_vec()).expect("valid entries");
        if require_invertible && !mat.is_invertible() {
            continue;
        }
        let shift =
            FqVector::new(field, z.entries()[m * m..].to_vec()).expect("valid entries");
        out.push((mat, shift));
    }
    Ok(out)
}

fn set_entry(v: FqVector, i: usize, value: u8) -> FqVector {
    let mut entries = v.entries().to_vec();
    entries[i] = value;
    FqVector::new(v.field(), entries).expect("valid entries")
}

fn check_same_shape(f: &FuncTable, g: &FuncTable) -> Result<()> {
    if !f.same_shape(g) {
        return Err(Error::DimensionMismatch(
            "both functions must share (q, n, m)".into(),
        ));
    }
    Ok(())
}

/// Searches for a witness `g` with `g.apply(f) == target`.
///
/// Outer loop over the input permutations in enumeration order; for each, a
/// single affine fit solves for all compatible output maps. The first witness
/// in that deterministic order is returned, verified.
pub fn ea_equivalent(
    f: &FuncTable,
    target: &FuncTable,
    settings: &Settings,
) -> Result<Option<EAElement>> {
    check_same_shape(f, target)?;
    let group = AglGroup::enumerate(f.field(), f.n(), settings.enumeration_budget)?;
    let found = exec::find_first_map(settings.exec, group.elements(), |a_in| {
        match fit_output_maps(f, target, a_in, settings.fit_budget) {
            Ok(fits) => fits
                .into_iter()
                .next()
                .map(|out| Ok(EAElement { input: a_in.clone(), output: out })),
            Err(e) => Some(Err(e)),
        }
    });
    match found {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok(g)) => {
            if &g.apply(f)? != target {
                return Err(Error::IntegralityViolation("witness failed verification".into()));
            }
            Ok(Some(g))
        }
    }
}

/// All output maps completing `a_in` to an element sending `f` to `target`.
pub(crate) fn fit_output_maps(
    f: &FuncTable,
    target: &FuncTable,
    a_in: &AffineMap,
    fit_budget: u64,
) -> Result<Vec<AffineMap>> {
    let field = f.field();
    let in_perm = a_in.permutation_table();
    let pairs: Vec<(FqVector, FqVector)> = (0..f.domain_size())
        .map(|x| {
            let u = FqVector::from_code(field, f.m(), f.get_code(in_perm[x as usize] as u64) as u64)
                .expect("in range");
            let v = FqVector::from_code(field, f.m(), target.get_code(x) as u64).expect("in range");
            (u, v)
        })
        .collect();
    let fits = affine_fit(field, &pairs, true, fit_budget)?;
    Ok(fits
        .into_iter()
        .map(|(mat, shift)| AffineMap { mat, shift })
        .collect())
}

/// The full stabilizer of `f`, with every element listed in deterministic
/// order (identity always present).
#[derive(Clone, Debug)]
pub struct StabilizerReport {
    pub elements: Vec<EAElement>,
    pub size: BigUint,
    pub is_trivial: bool,
}

pub fn stabilizer(f: &FuncTable, settings: &Settings) -> Result<StabilizerReport> {
    let group = AglGroup::enumerate(f.field(), f.n(), settings.enumeration_budget)?;
    let per_input: Vec<Result<Vec<EAElement>>> =
        exec::map_slice(settings.exec, group.elements(), |a_in| {
            Ok(fit_output_maps(f, f, a_in, settings.fit_budget)?
                .into_iter()
                .map(|out| EAElement { input: a_in.clone(), output: out })
                .collect())
        });
    let mut elements = Vec::new();
    for chunk in per_input {
        elements.extend(chunk?);
    }
    debug_assert!(elements.iter().any(|g| g.is_identity()));
    let size = BigUint::from(elements.len());
    let is_trivial = size.is_one();
    Ok(StabilizerReport { elements, size, is_trivial })
}

/// Stabilizer order without materializing the element list.
pub fn stabilizer_order(f: &FuncTable, settings: &Settings) -> Result<BigUint> {
    let group = AglGroup::enumerate(f.field(), f.n(), settings.enumeration_budget)?;
    let counts: Vec<Result<u64>> = exec::map_slice(settings.exec, group.elements(), |a_in| {
        Ok(fit_output_maps(f, f, a_in, settings.fit_budget)?.len() as u64)
    });
    let mut total = 0u64;
    for c in counts {
        total += c?;
    }
    Ok(BigUint::from(total))
}

/// True when some nontrivial element fixes `f`; stops at the first witness.
pub fn has_nontrivial_stabilizer(f: &FuncTable, settings: &Settings) -> Result<bool> {
    let group = AglGroup::enumerate(f.field(), f.n(), settings.enumeration_budget)?;
    let witness = exec::find_first_map(settings.exec, group.elements(), |a_in| {
        match fit_output_maps(f, f, a_in, settings.fit_budget) {
            Ok(fits) => fits
                .into_iter()
                .map(|out| EAElement { input: a_in.clone(), output: out })
                .find(|g| !g.is_identity())
                .map(Ok),
            Err(e) => Some(Err(e)),
        }
    });
    match witness {
        None => Ok(false),
        Some(Ok(_)) => Ok(true),
        Some(Err(e)) => Err(e),
    }
}

/// Equivalence test against a pre-enumerated input group; sequential inner
/// loop for use inside an already-parallel sweep.
pub(crate) fn equivalent_with_group(
    f: &FuncTable,
    target: &FuncTable,
    group: &AglGroup,
    fit_budget: u64,
) -> Result<bool> {
    for a_in in group.elements() {
        if !fit_output_maps(f, target, a_in, fit_budget)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Nontrivial-stabilizer test against a pre-enumerated input group.
pub(crate) fn nontrivial_with_group(
    f: &FuncTable,
    group: &AglGroup,
    fit_budget: u64,
) -> Result<bool> {
    for a_in in group.elements() {
        for out in fit_output_maps(f, f, a_in, fit_budget)? {
            if !(a_in.is_identity() && out.is_identity()) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Orbit size of `f` under the group, by closure under the generator set.
pub fn orbit_size_bfs(f: &FuncTable, settings: &Settings) -> Result<BigUint> {
    let (space, _) = crate::func::function_space_size(f.q(), f.n(), f.m())?;
    if space.to_u64().is_none_or(|s| s > settings.oracle_budget) {
        return Err(Error::BudgetExceeded {
            what: "orbit closure over the function space".into(),
            required: space.to_string(),
            budget: settings.oracle_budget,
        });
    }
    let gens: Vec<(Vec<u32>, Vec<u32>)> = gamma_generators(f.field(), f.n(), f.m())
        .iter()
        .map(|g| (g.input.permutation_table(), g.output.permutation_table()))
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![f.clone()];
    seen.insert(f.pack());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for t in &frontier {
            for (ip, op) in &gens {
                let u = apply_perms(t, ip, op);
                if seen.insert(u.pack()) {
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    Ok(BigUint::from(seen.len()))
}

/// On-disk form of a group element; canonical key order.
#[derive(Serialize, Deserialize)]
struct ElementFile {
    #[serde(rename = "P")]
    p: Vec<u64>,
    a: Vec<u64>,
    #[serde(rename = "Q")]
    q_mat: Vec<u64>,
    b: Vec<u64>,
    q: u64,
    n: usize,
    m: usize,
}

impl EAElement {
    pub fn to_json(&self) -> String {
        let doc = ElementFile {
            p: self.input.mat.entries().iter().map(|&x| x as u64).collect(),
            a: self.input.shift.entries().iter().map(|&x| x as u64).collect(),
            q_mat: self.output.mat.entries().iter().map(|&x| x as u64).collect(),
            b: self.output.shift.entries().iter().map(|&x| x as u64).collect(),
            q: self.input.field().q() as u64,
            n: self.input.dim(),
            m: self.output.dim(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ElementFile = serde_json::from_str(text).map_err(|e| {
            crate::error::ParseError::Syntax { offset: 0, message: e.to_string() }
        })?;
        let field = Field::get(doc.q)?;
        let to_u8 = |xs: &[u64], what: &str| -> Result<Vec<u8>> {
            xs.iter()
                .map(|&x| {
                    if x < field.q() as u64 {
                        Ok(x as u8)
                    } else {
                        Err(crate::error::ParseError::Field {
                            field: what.into(),
                            message: format!("entry {x} out of range for F_{}", doc.q),
                        }
                        .into())
                    }
                })
                .collect()
        };
        let input = AffineMap::new(
            FqMatrix::new(field, doc.n, doc.n, to_u8(&doc.p, "P")?)?,
            FqVector::new(field, to_u8(&doc.a, "a")?)?,
        )?;
        let output = AffineMap::new(
            FqMatrix::new(field, doc.m, doc.m, to_u8(&doc.q_mat, "Q")?)?,
            FqVector::new(field, to_u8(&doc.b, "b")?)?,
        )?;
        Ok(EAElement { input, output })
    }
}
