//! Homology-side oracle for the configuration-space functor: products of
//! iterated brackets of points, acted on by pointed maps through variable
//! substitution and the Leibniz rule.
//!
//! Elements are combinations of monomials: a monomial partitions the points
//! into blocks, each block a left-normed bracket `[x_h, x_{r_1}, ..., x_{r_q}]`
//! whose head `h` is the block minimum; singleton blocks are bare variables.
//! With brackets of degree `d-1`, those monomials form a basis of the right
//! size (unsigned Stirling numbers of the first kind), matching the
//! admissible monomial counts on the cohomology side degree by degree.
//!
//! Bracket trees are normalized through their expansion in the free graded
//! associative algebra: a left-normed bracket with fixed head expands to a
//! signed sum of permutation words in which exactly one word starts with the
//! head, with coefficient 1; reading off the words that start with the block
//! minimum therefore recovers the basis coordinates exactly.
//!
//! The pairing with cohomology matches edges of an admissible monomial to
//! internal nodes of the bracket combs; the matrix of this pairing converts
//! between the bracket basis and the basis dual to the admissible monomials,
//! in which [`structure_matrix_dual`] reports the structure maps.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arnold::{self, GenParity, OmegaMonomial};
use crate::gamma::PointedMap;
use crate::linalg::SparseRationalMatrix;

/// Left-normed bracket block `[x_head, x_{rest[0]}, ...]`; `rest` empty means
/// the bare variable `x_head`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub head: u32,
    pub rest: Vec<u32>,
}

impl Block {
    fn var(v: u32) -> Self {
        Block { head: v, rest: Vec::new() }
    }

    /// Internal homological degree modulo 2, given the bracket degree parity.
    fn degree_parity(&self, e_odd: bool) -> bool {
        e_odd && self.rest.len() % 2 == 1
    }
}

/// A product of blocks in canonical order (sorted by head).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoissonMonomial {
    pub blocks: Vec<Block>,
}

impl PoissonMonomial {
    pub fn bracket_count(&self) -> u32 {
        self.blocks.iter().map(|b| b.rest.len() as u32).sum()
    }
}

pub type PoissonElement = HashMap<PoissonMonomial, BigRational>;

fn add_term(acc: &mut PoissonElement, m: PoissonMonomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let entry = acc.entry(m).or_insert_with(BigRational::zero);
    *entry += c;
    if entry.is_zero() {
        acc.retain(|_, v| !v.is_zero());
    }
}

/// All basis monomials on points `1..=k` with `t` brackets total, in a
/// deterministic order.
pub fn enumerate_poisson_basis(k: u32, t: u32) -> Vec<PoissonMonomial> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    // Build set partitions; element v joins an existing block or opens one.
    fn partitions(k: u32, v: u32, blocks: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if v > k {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(v);
            partitions(k, v + 1, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![v]);
        partitions(k, v + 1, blocks, out);
        blocks.pop();
    }
    let mut parts = Vec::new();
    partitions(k, 1, &mut blocks, &mut parts);
    for part in parts {
        let brackets: u32 = part.iter().map(|b| b.len() as u32 - 1).sum();
        if brackets != t {
            continue;
        }
        // every ordering of the non-head elements of every block
        fn orderings(
            part: &[Vec<u32>],
            i: usize,
            acc: &mut Vec<Block>,
            out: &mut Vec<PoissonMonomial>,
        ) {
            if i == part.len() {
                let mut blocks = acc.clone();
                blocks.sort_by_key(|b| b.head);
                out.push(PoissonMonomial { blocks });
                return;
            }
            let head = part[i][0];
            let rest: Vec<u32> = part[i][1..].to_vec();
            let mut perm = rest.clone();
            permute(&mut perm, 0, &mut |p| {
                acc.push(Block { head, rest: p.to_vec() });
                orderings(part, i + 1, acc, out);
                acc.pop();
            });
        }
        let mut acc = Vec::new();
        orderings(&part, 0, &mut acc, &mut out);
    }
    out.sort_by(|a, b| a.blocks.cmp(&b.blocks));
    out
}

fn permute(items: &mut Vec<u32>, from: usize, emit: &mut impl FnMut(&[u32])) {
    if from == items.len() {
        emit(items);
        return;
    }
    for i in from..items.len() {
        items.swap(from, i);
        permute(items, from + 1, emit);
        items.swap(from, i);
    }
}

/// Expansion of a bracket tree in the free graded associative algebra, as
/// signed permutation words. Leaves carry shifted degree `e`; the bracket is
/// the graded commutator.
#[derive(Debug, Clone)]
enum Tree {
    Leaf(u32),
    Br(Box<Tree>, Box<Tree>),
}

fn tree_leaves(t: &Tree) -> usize {
    match t {
        Tree::Leaf(_) => 1,
        Tree::Br(a, b) => tree_leaves(a) + tree_leaves(b),
    }
}

fn expand_words(t: &Tree, e_odd: bool) -> Vec<(Vec<u32>, i64)> {
    match t {
        Tree::Leaf(v) => vec![(vec![*v], 1)],
        Tree::Br(a, b) => {
            let wa = expand_words(a, e_odd);
            let wb = expand_words(b, e_odd);
            // graded commutator sign on shifted degrees
            let sa = e_odd && tree_leaves(a) % 2 == 1;
            let sb = e_odd && tree_leaves(b) % 2 == 1;
            let flip = if sa && sb { -1i64 } else { 1 };
            let mut out = Vec::with_capacity(wa.len() * wb.len() * 2);
            for (xa, ca) in &wa {
                for (xb, cb) in &wb {
                    let mut fwd = xa.clone();
                    fwd.extend_from_slice(xb);
                    out.push((fwd, ca * cb));
                    let mut rev = xb.clone();
                    rev.extend_from_slice(xa);
                    out.push((rev, -flip * ca * cb));
                }
            }
            out
        }
    }
}

/// Normalizes a bracket tree with distinct single-variable leaves into basis
/// blocks: the coefficient of the block `[x_c, sigma]` is the coefficient of
/// the word `c sigma` in the associative expansion, `c` the leaf minimum.
fn normalize_tree(t: &Tree, e_odd: bool) -> Vec<(Block, i64)> {
    let words = expand_words(t, e_odd);
    let min = words
        .iter()
        .flat_map(|(w, _)| w.iter().copied())
        .min()
        .expect("tree has leaves");
    let mut acc: HashMap<Vec<u32>, i64> = HashMap::new();
    for (w, c) in words {
        if w[0] == min {
            *acc.entry(w).or_insert(0) += c;
        }
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(w, c)| (Block { head: w[0], rest: w[1..].to_vec() }, c))
        .collect()
}

/// A term in an intermediate product: coefficient times an ordered list of
/// blocks (the order carries Koszul data until the final canonical sort).
type ProductTerm = (Vec<Block>, BigRational);

fn koszul_sort(blocks: &mut Vec<Block>, e_odd: bool) -> i64 {
    let mut sign = 1i64;
    for i in 1..blocks.len() {
        let mut j = i;
        while j > 0 && blocks[j - 1].head > blocks[j].head {
            if blocks[j - 1].degree_parity(e_odd) && blocks[j].degree_parity(e_odd) {
                sign = -sign;
            }
            blocks.swap(j - 1, j);
            j -= 1;
        }
    }
    sign
}

/// Graded bracket of two products of blocks, fully expanded by the Leibniz
/// rule. An empty product is the unit, and `[x, 1] = 0`.
fn bracket_products(p: &[Block], q: &[Block], e_odd: bool) -> Vec<ProductTerm> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    if p.len() == 1 && q.len() == 1 {
        let tree = Tree::Br(Box::new(block_tree(&p[0])), Box::new(block_tree(&q[0])));
        return normalize_tree(&tree, e_odd)
            .into_iter()
            .map(|(b, c)| (vec![b], BigRational::from(BigInt::from(c))))
            .collect();
    }
    if q.len() > 1 {
        // [A, c D] = [A, c] D + (-1)^{deg c (deg A + e)} c [A, D]
        let c = &q[0];
        let d = &q[1..];
        let mut out = Vec::new();
        for (blocks, coef) in bracket_products(p, std::slice::from_ref(c), e_odd) {
            let mut term = blocks;
            term.extend_from_slice(d);
            out.push((term, coef));
        }
        let deg_a = p.iter().filter(|b| b.degree_parity(e_odd)).count() % 2 == 1;
        let shift = deg_a != e_odd; // deg(A) + e odd?
        let sign = if c.degree_parity(e_odd) && shift { -1i64 } else { 1 };
        for (blocks, coef) in bracket_products(p, d, e_odd) {
            let mut term = vec![c.clone()];
            term.extend(blocks);
            let mut coef = coef;
            if sign < 0 {
                coef = -coef;
            }
            out.push((term, coef));
        }
        out
    } else {
        // q is a single block, p has several: flip with the shifted-degree
        // sign; the shifted degree of a product entering a bracket is its
        // total degree plus e.
        let deg_p = p.iter().filter(|b| b.degree_parity(e_odd)).count() % 2 == 1;
        let star_p = deg_p != e_odd;
        let deg_q = q.iter().filter(|b| b.degree_parity(e_odd)).count() % 2 == 1;
        let star_q = deg_q != e_odd;
        let sign = if star_p && star_q { 1i64 } else { -1 };
        bracket_products(q, p, e_odd)
            .into_iter()
            .map(|(blocks, coef)| (blocks, if sign < 0 { -coef } else { coef }))
            .collect()
    }
}

fn block_tree(b: &Block) -> Tree {
    let mut t = Tree::Leaf(b.head);
    for &r in &b.rest {
        t = Tree::Br(Box::new(t), Box::new(Tree::Leaf(r)));
    }
    t
}

/// Substitution trees: leaves hold a (possibly empty) product of variables.
enum SubTree {
    Vars(Vec<u32>),
    Br(Box<SubTree>, Box<SubTree>),
}

/// Expands a substitution tree into products of basis blocks.
fn expand_subtree(t: &SubTree, e_odd: bool) -> Vec<ProductTerm> {
    match t {
        SubTree::Vars(vs) => {
            vec![(vs.iter().map(|&v| Block::var(v)).collect(), BigRational::one())]
        }
        SubTree::Br(a, b) => {
            let ta = expand_subtree(a, e_odd);
            let tb = expand_subtree(b, e_odd);
            let mut out = Vec::new();
            for (pa, ca) in &ta {
                for (pb, cb) in &tb {
                    for (blocks, c) in bracket_products(pa, pb, e_odd) {
                        out.push((blocks, c * ca * cb));
                    }
                }
            }
            out
        }
    }
}

/// Homology-side structure map for `f : k+ -> l+` applied to a basis
/// monomial on the `l` side: substitute `x_j -> prod_{i in f^{-1}(j)} x_i`,
/// expand by the Leibniz rule, and append bare variables for the elements of
/// the source sent to the basepoint.
pub fn structure_map(f: &PointedMap, m: &PoissonMonomial, parity: GenParity) -> PoissonElement {
    let e_odd = parity.generators_anticommute();
    let fibers = f.fibers();
    let mut terms: Vec<ProductTerm> = vec![(Vec::new(), BigRational::one())];
    for block in &m.blocks {
        let subtree = sub_tree(block, &fibers);
        let expanded = expand_subtree(&subtree, e_odd);
        let mut next = Vec::new();
        for (prefix, cp) in &terms {
            for (blocks, c) in &expanded {
                let mut combined = prefix.clone();
                combined.extend(blocks.iter().cloned());
                next.push((combined, cp * c));
            }
        }
        terms = next;
    }
    // bare variables for basepoint fibers
    let mut bare: Vec<u32> =
        (1..=f.source_size()).filter(|&i| f.apply(i) == 0).collect();
    bare.sort_unstable();
    let mut out: PoissonElement = HashMap::new();
    for (mut blocks, coef) in terms {
        blocks.extend(bare.iter().map(|&v| Block::var(v)));
        let sign = koszul_sort(&mut blocks, e_odd);
        let coef = if sign < 0 { -coef } else { coef };
        add_term(&mut out, PoissonMonomial { blocks }, coef);
    }
    out
}

fn sub_tree(block: &Block, fibers: &[Vec<u32>]) -> SubTree {
    let mut t = SubTree::Vars(fibers[block.head as usize - 1].clone());
    for &r in &block.rest {
        t = SubTree::Br(Box::new(t), Box::new(SubTree::Vars(fibers[r as usize - 1].clone())));
    }
    t
}

/// Configuration pairing between an admissible cohomology monomial and a
/// bracket basis monomial on the same point set.
///
/// Non-zero only when the edge components of the monomial match the blocks;
/// each edge must then meet a distinct internal node of its block's comb
/// (the join position of the later-added endpoint). An edge whose smaller
/// endpoint is the one joining contributes the orientation sign, and for
/// anticommuting generators the edge-to-node matching contributes its
/// permutation sign.
pub fn pairing(omega: &OmegaMonomial, p: &PoissonMonomial, parity: GenParity) -> BigRational {
    let zero = BigRational::zero();
    // components of the forest
    let k = omega.point_count();
    let mut parent: Vec<u32> = (0..=k).collect();
    fn find(parent: &mut Vec<u32>, v: u32) -> u32 {
        if parent[v as usize] != v {
            let root = find(parent, parent[v as usize]);
            parent[v as usize] = root;
        }
        parent[v as usize]
    }
    for &(a, b) in omega.factors() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
    // block lookup per vertex, with global node numbering across blocks
    let mut block_of = vec![usize::MAX; k as usize + 1];
    let mut node_base = vec![0usize; p.blocks.len()];
    let mut positions = vec![0usize; k as usize + 1];
    let mut next_node = 0usize;
    for (bi, block) in p.blocks.iter().enumerate() {
        node_base[bi] = next_node;
        next_node += block.rest.len();
        block_of[block.head as usize] = bi;
        positions[block.head as usize] = 0;
        for (i, &v) in block.rest.iter().enumerate() {
            block_of[v as usize] = bi;
            positions[v as usize] = i + 1;
        }
    }
    for block in &p.blocks {
        // block must be exactly one forest component
        let root = find(&mut parent, block.head);
        let mut members = vec![block.head];
        members.extend_from_slice(&block.rest);
        for &v in &members {
            if find(&mut parent, v) != root {
                return zero;
            }
        }
        let count = (1..=k).filter(|&v| find(&mut parent, v) == root).count();
        if count != members.len() {
            return zero;
        }
    }
    // edge -> global node, in the admissible factor order
    let mut sign = 1i64;
    let mut assignment = Vec::with_capacity(omega.factors().len());
    let mut used = vec![false; next_node];
    for &(a, b) in omega.factors() {
        let bi = block_of[a as usize];
        if bi == usize::MAX || bi != block_of[b as usize] {
            return zero;
        }
        let (pa, pb) = (positions[a as usize], positions[b as usize]);
        let join = pa.max(pb);
        if join == 0 {
            return zero;
        }
        let node = node_base[bi] + join - 1;
        if used[node] {
            return zero;
        }
        used[node] = true;
        assignment.push(node);
        if pa > pb {
            sign *= parity.orientation_sign();
        }
    }
    if used.iter().any(|u| !u) {
        return zero;
    }
    if parity.generators_anticommute() {
        // permutation sign of the matching
        let mut perm = assignment;
        for i in 0..perm.len() {
            while perm[i] != i {
                let j = perm[i];
                perm.swap(i, j);
                sign = -sign;
            }
        }
    }
    BigRational::from(BigInt::from(sign))
}

/// Gram matrix of the pairing between `enumerate_basis(k,t)` (rows) and
/// `enumerate_poisson_basis(k,t)` (columns).
pub fn pairing_matrix(k: u32, t: u32, parity: GenParity) -> Vec<Vec<BigRational>> {
    let omegas = arnold::enumerate_basis(k, t);
    let ps = enumerate_poisson_basis(k, t);
    omegas
        .iter()
        .map(|w| ps.iter().map(|p| pairing(w, p, parity)).collect())
        .collect()
}

fn invert(matrix: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = matrix.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut a: Vec<Vec<BigRational>> = matrix.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pv = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &pv;
            inv[col][j] /= &pv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in 0..n {
                    let d = &factor * &a[col][j];
                    a[r][j] -= d;
                    let d = &factor * &inv[col][j];
                    inv[r][j] -= d;
                }
            }
        }
    }
    Some(inv)
}

/// Matrix of the homology-side structure map of `f : k+ -> l+` in the bases
/// dual to the admissible monomials: rows over `enumerate_basis(k, t)`,
/// columns over `enumerate_basis(l, t)`.
pub fn structure_matrix_dual(f: &PointedMap, t: u32, parity: GenParity) -> SparseRationalMatrix {
    let (k, l) = (f.source_size(), f.target_size());
    let omegas_l = arnold::enumerate_basis(l, t);
    let ps_l = enumerate_poisson_basis(l, t);
    let omegas_k = arnold::enumerate_basis(k, t);

    // dual basis on the l side: D_F = sum_P inv[P][F] P
    let gram_l = pairing_matrix(l, t, parity);
    let inv_l = invert(&gram_l).expect("pairing matrix is invertible");

    let mut triplets = Vec::new();
    for (col, _) in omegas_l.iter().enumerate() {
        // image of the dual basis vector D_col
        let mut image: PoissonElement = HashMap::new();
        for (pi, p) in ps_l.iter().enumerate() {
            let c = &inv_l[pi][col];
            if c.is_zero() {
                continue;
            }
            for (mono, coef) in structure_map(f, p, parity) {
                add_term(&mut image, mono, coef * c);
            }
        }
        // coordinates in the dual basis of the k side via the pairing
        for (row, w) in omegas_k.iter().enumerate() {
            let mut entry = BigRational::zero();
            for (mono, coef) in &image {
                let pr = pairing(w, mono, parity);
                if !pr.is_zero() {
                    entry += pr * coef;
                }
            }
            if !entry.is_zero() {
                triplets.push((row as u32, col as u32, entry));
            }
        }
    }
    SparseRationalMatrix::from_triplets(omegas_k.len(), omegas_l.len(), triplets)
        .expect("indices in range")
}
