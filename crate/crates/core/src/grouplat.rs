//! Exponent lattices of the bases modulo `c` and the invariants built on them.
//!
//! `U` is the lattice of exponent vectors `t` with `prod d_i^{t_i} = 1 mod c`,
//! `U'` the vectors `s` with `2s` in `U`. The number of parity classes `p` is
//! the size of the image of `U` in `(Z/2)^n`; `M` is the image of `U'` under
//! `s -> prod d_i^{s_i}` and `q = #M / 2`. For solvable instances
//! `p * q = 2^(n-1)`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::modmath::{
    carmichael, discrete_log, factorize_u64, inverse_mod, mul_mod, mult_order, pow_mod,
    primitive_root,
};

/// Rows form a basis of a full-rank lattice in `Z^n`.
pub type Basis = Vec<Vec<i64>>;

/// Box volume up to which lattices are found by direct enumeration.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// How relation lattices are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LatticeStrategy {
    /// Enumerate when the box of orders is small, discrete logarithms otherwise.
    #[default]
    Auto,
    Enumerate,
    DiscreteLog,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeInvariants {
    /// Hermite basis of `U`.
    pub u_basis: Basis,
    /// Hermite basis of `U'`.
    pub u_prime_basis: Basis,
    /// Number of parity classes of solutions of the congruence; 0 if unsolvable.
    pub p: u64,
    /// Residues of `M`, ascending.
    pub m: Vec<u64>,
    pub q: Ratio<u64>,
    pub solvable: bool,
    /// An exponent vector with `prod d_i^{t_i} = -1 mod c`.
    pub witness: Option<Vec<i64>>,
    /// Parity vectors `phi(t0) + phi(U)`, sorted.
    pub parity_classes: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PqCheck {
    pub p: u64,
    pub q: u64,
    pub product: u64,
    pub expected: u64,
    pub ok: bool,
}

/// Insert `g` into an upper-triangular basis that already contains
/// `modulus * I`. Entries of `g` are kept reduced modulo `modulus`.
fn hnf_insert(basis: &mut [Vec<i128>], mut g: Vec<i128>, modulus: i128) -> Result<()> {
    let dim = basis.len();
    let overflow = || Error::Overflow("lattice reduction".into());
    for x in g.iter_mut() {
        *x = x.rem_euclid(modulus);
    }
    for i in 0..dim {
        if g[i] == 0 {
            continue;
        }
        let a = basis[i][i];
        let b = g[i];
        let ext = a.extended_gcd(&b);
        let (gg, s, t) = (ext.gcd, ext.x, ext.y);
        let (a_g, b_g) = (a / gg, b / gg);
        let mut row = vec![0i128; dim];
        let mut rest = vec![0i128; dim];
        for k in i..dim {
            row[k] = s
                .checked_mul(basis[i][k])
                .and_then(|x| t.checked_mul(g[k]).and_then(|y| x.checked_add(y)))
                .ok_or_else(overflow)?;
            rest[k] = a_g
                .checked_mul(g[k])
                .and_then(|x| b_g.checked_mul(basis[i][k]).and_then(|y| x.checked_sub(y)))
                .ok_or_else(overflow)?
                .rem_euclid(modulus);
        }
        basis[i] = row;
        g = rest;
    }
    reduce_hnf(basis);
    Ok(())
}

#[allow(clippy::needless_range_loop)]
fn reduce_hnf(basis: &mut [Vec<i128>]) {
    let dim = basis.len();
    for i in 0..dim {
        if basis[i][i] < 0 {
            for x in basis[i].iter_mut() {
                *x = -*x;
            }
        }
    }
    for i in (0..dim).rev() {
        for j in i + 1..dim {
            let q = Integer::div_floor(&basis[i][j], &basis[j][j]);
            if q != 0 {
                for k in j..dim {
                    basis[i][k] -= q * basis[j][k];
                }
            }
        }
    }
}

fn scaled_identity(dim: usize, modulus: i128) -> Vec<Vec<i128>> {
    (0..dim)
        .map(|i| {
            let mut row = vec![0; dim];
            row[i] = modulus;
            row
        })
        .collect()
}

/// Odometer over `[0, ord_0) x ... x [0, ord_{m-1})` in lexicographic order,
/// tracking `prod g_i^{t_i} mod c` incrementally.
fn enumerate_box(residues: &[u64], orders: &[u64], c: u64, mut visit: impl FnMut(&[u64], u64)) {
    let m = residues.len();
    let mut t = vec![0u64; m];
    let mut product = 1 % c;
    loop {
        visit(&t, product);
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            // g^ord = 1, so the running product stays correct across wraps
            product = mul_mod(product, residues[i], c);
            if t[i] < orders[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

fn box_volume(orders: &[u64]) -> Option<u64> {
    orders.iter().try_fold(1u64, |acc, &o| acc.checked_mul(o))
}

fn to_basis(rows: Vec<Vec<i128>>) -> Result<Basis> {
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Overflow("basis entry".into())))
                .collect()
        })
        .collect()
}

/// The lattice of `t` with `prod g_i^{t_i} = 1 mod c` (`c` odd, every `g_i` a unit).
pub fn relation_lattice(residues: &[u64], c: u64, strategy: LatticeStrategy) -> Result<Basis> {
    if c.is_multiple_of(2) {
        return Err(Error::EvenModulus(c));
    }
    let orders = residues
        .iter()
        .map(|&g| mult_order(g as i64, c))
        .collect::<Result<Vec<_>>>()?;
    let enumerate = match strategy {
        LatticeStrategy::Enumerate => true,
        LatticeStrategy::DiscreteLog => false,
        LatticeStrategy::Auto => box_volume(&orders).is_some_and(|v| v <= ENUMERATION_LIMIT),
    };
    if enumerate {
        relation_lattice_enumerated(residues, &orders, c)
    } else {
        relation_lattice_dlog(residues, c)
    }
}

fn relation_lattice_enumerated(residues: &[u64], orders: &[u64], c: u64) -> Result<Basis> {
    let n = residues.len();
    let lambda = carmichael(&factorize_u64(c)?.small_factors()?) as i128;
    let mut basis = scaled_identity(n, lambda);
    for (i, &o) in orders.iter().enumerate() {
        let mut g = vec![0i128; n];
        g[i] = o as i128;
        hnf_insert(&mut basis, g, lambda)?;
    }
    let mut relations = Vec::new();
    enumerate_box(residues, orders, c, |t, product| {
        if product == 1 && t.iter().any(|&x| x != 0) {
            relations.push(t.iter().map(|&x| x as i128).collect::<Vec<_>>());
        }
    });
    for g in relations {
        hnf_insert(&mut basis, g, lambda)?;
    }
    to_basis(basis)
}

/// Discrete logarithms in each cyclic factor `(Z/p^k)^*`, then the kernel of
/// `Z^n -> prod Z/phi(p^k)` read off a Hermite form of `[logs | I]`.
fn relation_lattice_dlog(residues: &[u64], c: u64) -> Result<Basis> {
    let n = residues.len();
    let components = factorize_u64(c)?.small_factors()?;
    let parts = components.len();
    let lambda = carmichael(&components) as i128;
    let dim = parts + n;
    let mut logs = vec![vec![0i128; parts]; n];
    let mut cyclic_orders = Vec::with_capacity(parts);
    for (col, &(p, k)) in components.iter().enumerate() {
        let pk = p.pow(k);
        let phi = p.pow(k - 1) * (p - 1);
        let g = primitive_root(p, k)?;
        for (i, &r) in residues.iter().enumerate() {
            let x = discrete_log(g, r % pk, pk, phi).ok_or_else(|| Error::not_coprime(r, c))?;
            logs[i][col] = x as i128;
        }
        cyclic_orders.push(phi as i128);
    }
    let mut basis = scaled_identity(dim, lambda);
    for (col, &m) in cyclic_orders.iter().enumerate() {
        let mut g = vec![0i128; dim];
        g[col] = m;
        hnf_insert(&mut basis, g, lambda)?;
    }
    for (i, row_logs) in logs.iter().enumerate() {
        let mut g = vec![0i128; dim];
        g[..parts].copy_from_slice(row_logs);
        g[parts + i] = 1;
        hnf_insert(&mut basis, g, lambda)?;
    }
    let kernel: Vec<Vec<i128>> = basis[parts..]
        .iter()
        .map(|row| row[parts..].to_vec())
        .collect();
    debug_assert!(basis[parts..]
        .iter()
        .all(|row| row[..parts].iter().all(|&x| x == 0)));
    let mut reduced = kernel;
    reduce_hnf(&mut reduced);
    to_basis(reduced)
}

/// Basis of `U`.
pub fn unit_lattice(inst: &Instance) -> Result<Basis> {
    unit_lattice_with(inst, LatticeStrategy::Auto)
}

pub fn unit_lattice_with(inst: &Instance, strategy: LatticeStrategy) -> Result<Basis> {
    inst.require_odd()?;
    relation_lattice(&inst.d, inst.c, strategy)
}

/// `prod d_i^{t_i} mod c` for a signed exponent vector.
pub fn evaluate(d: &[u64], t: &[i64], c: u64) -> Result<u64> {
    let mut acc = 1 % c;
    for (&di, &ti) in d.iter().zip(t) {
        let base = if ti < 0 {
            inverse_mod(di as i64, c)?
        } else {
            di % c
        };
        acc = mul_mod(acc, pow_mod(base, ti.unsigned_abs(), c), c);
    }
    Ok(acc)
}

/// Rank over GF(2) of the rows reduced modulo 2.
fn rank_mod2(rows: &[Vec<u8>]) -> usize {
    let mut masks: Vec<u64> = rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .fold(0u64, |m, (i, &b)| m | ((b as u64 & 1) << i))
        })
        .collect();
    let mut rank = 0;
    for bit in 0..64 {
        let Some(pos) = (rank..masks.len()).find(|&i| masks[i] >> bit & 1 == 1) else {
            continue;
        };
        masks.swap(rank, pos);
        let pivot = masks[rank];
        for (i, m) in masks.iter_mut().enumerate() {
            if i != rank && *m >> bit & 1 == 1 {
                *m ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

fn parity(t: &[i64]) -> Vec<u8> {
    t.iter().map(|&x| x.rem_euclid(2) as u8).collect()
}

/// All parity vectors `shift + span(rows mod 2)`, sorted.
fn parity_coset(shift: &[u8], rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut seen = BTreeSet::new();
    seen.insert(shift.to_vec());
    for row in rows {
        let next: Vec<Vec<u8>> = seen
            .iter()
            .map(|v| v.iter().zip(row).map(|(a, b)| a ^ b).collect())
            .collect();
        seen.extend(next);
    }
    seen.into_iter().collect()
}

/// The subgroup of `(Z/c)^*` generated by `gens`, sorted.
fn generated_subgroup(gens: &[u64], c: u64) -> Vec<u64> {
    let mut group = BTreeSet::from([1 % c]);
    let mut frontier = vec![1 % c];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = mul_mod(x, g, c);
            if group.insert(y) {
                frontier.push(y);
            }
        }
    }
    group.into_iter().collect()
}

pub fn invariants(inst: &Instance) -> Result<LatticeInvariants> {
    invariants_with(inst, LatticeStrategy::Auto)
}

pub fn invariants_with(inst: &Instance, strategy: LatticeStrategy) -> Result<LatticeInvariants> {
    inst.require_odd()?;
    let c = inst.c;
    let u_basis = relation_lattice(&inst.d, c, strategy)?;
    let squares: Vec<u64> = inst.d.iter().map(|&x| mul_mod(x, x, c)).collect();
    let u_prime_basis = relation_lattice(&squares, c, strategy)?;

    let witness = find_witness(inst, strategy)?;
    let u_parities: Vec<Vec<u8>> = u_basis.iter().map(|r| parity(r)).collect();
    let (p, parity_classes) = match &witness {
        Some(t0) => {
            let classes = parity_coset(&parity(t0), &u_parities);
            debug_assert_eq!(classes.len(), 1 << rank_mod2(&u_parities));
            (classes.len() as u64, classes)
        }
        None => (0, Vec::new()),
    };

    let images = u_prime_basis
        .iter()
        .map(|s| evaluate(&inst.d, s, c))
        .collect::<Result<Vec<_>>>()?;
    let m = generated_subgroup(&images, c);
    debug_assert!(m.iter().all(|&x| mul_mod(x, x, c) == 1));
    let q = Ratio::new(m.len() as u64, 2);
    Ok(LatticeInvariants {
        u_basis,
        u_prime_basis,
        p,
        m,
        q,
        solvable: witness.is_some(),
        witness,
        parity_classes,
    })
}

/// Some `t` with `prod d_i^{t_i} = -1 mod c`. On the enumeration path this is
/// the lexicographically least vector in the box of orders; on the discrete
/// log path it is read off the relation lattice of `(d_1, ..., d_n, -1)` and
/// reduced componentwise modulo the orders.
fn find_witness(inst: &Instance, strategy: LatticeStrategy) -> Result<Option<Vec<i64>>> {
    let c = inst.c;
    let minus_one = c - 1;
    let orders = inst
        .d
        .iter()
        .map(|&g| mult_order(g as i64, c))
        .collect::<Result<Vec<_>>>()?;
    let enumerate = match strategy {
        LatticeStrategy::Enumerate => true,
        LatticeStrategy::DiscreteLog => false,
        LatticeStrategy::Auto => box_volume(&orders).is_some_and(|v| v <= ENUMERATION_LIMIT),
    };
    if enumerate {
        let mut found: Option<Vec<i64>> = None;
        enumerate_box(&inst.d, &orders, c, |t, product| {
            if found.is_none() && product == minus_one {
                found = Some(t.iter().map(|&x| x as i64).collect());
            }
        });
        return Ok(found);
    }
    let mut extended = inst.d.clone();
    extended.push(minus_one);
    let lattice = relation_lattice(&extended, c, LatticeStrategy::DiscreteLog)?;
    let n = inst.n();
    Ok(lattice
        .iter()
        .find(|row| row[n].rem_euclid(2) == 1)
        .map(|row| {
            row[..n]
                .iter()
                .zip(&orders)
                .map(|(&x, &o)| x.rem_euclid(o as i64))
                .collect()
        }))
}

/// `p * q` against `2^(n-1)`.
pub fn check_pq(inst: &Instance) -> Result<PqCheck> {
    let inv = invariants(inst)?;
    pq_from(inst, &inv)
}

pub fn pq_from(inst: &Instance, inv: &LatticeInvariants) -> Result<PqCheck> {
    if !inv.solvable {
        return Err(Error::Unsolvable(inst.c));
    }
    if !inv.q.is_integer() {
        return Err(Error::InvalidInstance(format!(
            "q = {} is not integral for a solvable instance",
            inv.q
        )));
    }
    let q = inv.q.to_integer();
    let product = inv.p * q;
    let expected = 1u64 << (inst.n() - 1);
    Ok(PqCheck {
        p: inv.p,
        q,
        product,
        expected,
        ok: product == expected,
    })
}
