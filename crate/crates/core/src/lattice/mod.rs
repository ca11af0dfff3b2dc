//! Orbit lattices of integer representations and the semidirect products
//! `U_s ⋊ P` built from them.
//!
//! An integer representation of `P` acts on row vectors, `v ↦ v·M(g)`. The
//! orbit of a nonzero vector spans a `P`-invariant lattice `A`; in HNF
//! coordinates the action becomes integer matrices `R(g)` with
//! `B·M(g) = R(g)·B`. Reducing mod `p^s` gives the action on `U_s = A/p^sA`.

mod matrix;
mod semidirect;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use matrix::{hermite_normal_form, solve_in_hnf, IntegerMatrix};
pub use semidirect::{
    build_semidirect, construct, verify_power_identity, Construction, LatticeAction,
    PowerIdentityReport, SemidirectGroup,
};

use crate::arith::is_prime;
use crate::corpus::{QUATERNION_I, QUATERNION_J};
use crate::error::{Error, Result};

/// Outcome of the checks on the distinguished central element `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralActionReport {
    pub p: u64,
    /// `z^p = I`.
    pub order_divides_p: bool,
    /// `det(z - I) ≠ 0`, i.e. `z` fixes no nonzero vector.
    pub fixed_point_free: bool,
    /// `I + z + ... + z^{p-1} = 0`.
    pub orbit_sum_zero: bool,
    pub det_z_minus_identity: String,
}

impl CentralActionReport {
    pub fn passed(&self) -> bool {
        self.order_divides_p && self.fixed_point_free && self.orbit_sum_zero
    }
}

/// Checks `z^p = I`, `det(z - I) ≠ 0` and `Σ_{k<p} z^k = 0` exactly.
pub fn validate_central_action(z: &IntegerMatrix, p: u64) -> Result<CentralActionReport> {
    if !z.is_square() {
        return Err(Error::Validation(format!(
            "z must be square, got {}x{}",
            z.rows(),
            z.cols()
        )));
    }
    let n = z.rows();
    let id = IntegerMatrix::identity(n);
    let det = (z - &id).det();
    let mut sum = IntegerMatrix::zeros(n, n);
    let mut power = id.clone();
    for _ in 0..p {
        sum = &sum + &power;
        power = &power * z;
    }
    let report = CentralActionReport {
        p,
        order_divides_p: power == id,
        fixed_point_free: !det.is_zero(),
        orbit_sum_zero: sum.is_zero(),
        det_z_minus_identity: det.to_string(),
    };
    if report.passed() {
        return Ok(report);
    }
    let mut failed = Vec::new();
    if !report.order_divides_p {
        failed.push(format!("z^{p} = I"));
    }
    if !report.fixed_point_free {
        failed.push("det(z - I) != 0 (z acts without nonzero fixed points)".to_string());
    }
    if !report.orbit_sum_zero {
        failed.push(format!("I + z + ... + z^{} = 0", p - 1));
    }
    Err(Error::Validation(format!(
        "central action check failed: {}",
        failed.join("; ")
    )))
}

/// All products of `gens`, closed under multiplication.
pub fn integer_matrix_group(
    gens: &[IntegerMatrix],
    dim: usize,
    cap: u64,
) -> Result<Vec<IntegerMatrix>> {
    let id = IntegerMatrix::identity(dim);
    let mut seen: HashSet<IntegerMatrix> = HashSet::from([id.clone()]);
    let mut queue = vec![id];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        head += 1;
        for g in gens {
            let y = &x * g;
            if !seen.contains(&y) {
                if seen.len() as u64 >= cap {
                    return Err(Error::Resource {
                        what: "closure of the integer representation".into(),
                        cap_name: "enumeration",
                        cap,
                    });
                }
                seen.insert(y.clone());
                queue.push(y);
            }
        }
    }
    queue.sort();
    Ok(queue)
}

/// HNF basis of the lattice spanned by the orbit of `a` under `gens`.
///
/// The basis is checked to be invariant: every basis row times every
/// generator is an integer combination of basis rows.
pub fn orbit_lattice(gens: &[IntegerMatrix], a: &[BigInt], cap: u64) -> Result<IntegerMatrix> {
    if a.iter().all(Zero::is_zero) {
        return Err(Error::Domain("orbit vector a must be nonzero".into()));
    }
    let d = a.len();
    if let Some(g) = gens.iter().find(|g| g.rows() != d || g.cols() != d) {
        return Err(Error::Domain(format!(
            "generator of size {}x{} does not act on vectors of length {d}",
            g.rows(),
            g.cols()
        )));
    }
    let mut seen: HashSet<Vec<BigInt>> = HashSet::from([a.to_vec()]);
    let mut orbit = vec![a.to_vec()];
    let mut head = 0;
    while head < orbit.len() {
        let v = orbit[head].clone();
        head += 1;
        for g in gens {
            let w = g.left_apply(&v);
            if !seen.contains(&w) {
                if seen.len() as u64 >= cap {
                    return Err(Error::Resource {
                        what: "orbit of a under the representation".into(),
                        cap_name: "enumeration",
                        cap,
                    });
                }
                seen.insert(w.clone());
                orbit.push(w);
            }
        }
    }
    orbit.sort();
    let basis = hermite_normal_form(&orbit, d);
    for g in gens {
        for row in basis.row_iter() {
            if solve_in_hnf(&basis, &g.left_apply(row)).is_none() {
                return Err(Error::Validation(
                    "orbit lattice is not invariant under a generator".into(),
                ));
            }
        }
    }
    Ok(basis)
}

/// Action of each generator in lattice coordinates: `R(g)` with `B·M(g) = R(g)·B`.
pub fn restrict_to_lattice(
    gens: &[IntegerMatrix],
    basis: &IntegerMatrix,
) -> Result<Vec<IntegerMatrix>> {
    gens.iter()
        .map(|g| {
            let rows = basis
                .row_iter()
                .map(|row| {
                    solve_in_hnf(basis, &g.left_apply(row)).ok_or_else(|| {
                        Error::Validation(
                            "change of basis is not integral: lattice is not invariant".into(),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(IntegerMatrix::from_rows(rows).expect("rectangular"))
        })
        .collect()
}

/// Restricted generator matrices reduced mod `p^s`, row-major.
///
/// These act on row vectors of `U_s = A/p^sA` from the right. Each must be
/// invertible mod `p`.
pub fn restrict_and_reduce(
    gens: &[IntegerMatrix],
    basis: &IntegerMatrix,
    p: u64,
    s: u32,
) -> Result<Vec<Vec<u32>>> {
    let modulus = modulus_for(p, s)?;
    let restricted = restrict_to_lattice(gens, basis)?;
    restricted
        .iter()
        .enumerate()
        .map(|(i, r)| {
            if r.det().mod_floor(&BigInt::from(p)).is_zero() {
                return Err(Error::Validation(format!(
                    "restricted generator {i} is not invertible mod {p}"
                )));
            }
            Ok(r.reduce_mod(modulus))
        })
        .collect()
}

pub(crate) fn modulus_for(p: u64, s: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!("p = {p} is not prime")));
    }
    if s == 0 {
        return Err(Error::Parameter("s must be at least 1".into()));
    }
    p.checked_pow(s)
        .filter(|&m| m <= u64::from(u32::MAX) / 2)
        .ok_or_else(|| Error::Parameter(format!("modulus {p}^{s} is too large")))
}

/// Matrix given either as a list of rows or as row-major entries.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum MatrixInput {
    Rows(Vec<Vec<i64>>),
    Flat(Vec<i64>),
}

/// Representation input document.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RepresentationDoc {
    pub p: u64,
    pub dim: usize,
    pub generators: Vec<MatrixInput>,
    pub z_word: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<i64>>,
}

/// A validated integer representation with a designated central element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub p: u64,
    pub dim: usize,
    pub generators: Vec<IntegerMatrix>,
    pub z_word: Vec<usize>,
    pub a: Vec<BigInt>,
}

impl Representation {
    pub fn from_doc(doc: &RepresentationDoc) -> Result<Self> {
        if !is_prime(doc.p) {
            return Err(Error::Parameter(format!("p = {} is not prime", doc.p)));
        }
        if doc.dim == 0 {
            return Err(Error::Parameter("dim must be positive".into()));
        }
        let dim = doc.dim;
        let generators = doc
            .generators
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mat = match m {
                    MatrixInput::Rows(rows) => IntegerMatrix::from_i64_rows(rows)
                        .filter(|m| m.rows() == dim && m.cols() == dim),
                    MatrixInput::Flat(flat) => IntegerMatrix::square_from_flat(dim, flat),
                };
                let mat = mat.ok_or_else(|| {
                    Error::Parse(format!("generator {i} is not a {dim}x{dim} matrix"))
                })?;
                let det = mat.det();
                if det != BigInt::from(1) && det != BigInt::from(-1) {
                    return Err(Error::Validation(format!(
                        "generator {i} has determinant {det}; it is not invertible over the integers"
                    )));
                }
                Ok(mat)
            })
            .collect::<Result<Vec<_>>>()?;
        if doc.z_word.is_empty() {
            return Err(Error::Parse(
                "z_word must name at least one generator".into(),
            ));
        }
        if let Some(&bad) = doc.z_word.iter().find(|&&i| i >= generators.len()) {
            return Err(Error::Parse(format!(
                "z_word refers to generator {bad}, but only {} are given",
                generators.len()
            )));
        }
        let a: Vec<BigInt> = match &doc.a {
            Some(a) if a.len() != dim => {
                return Err(Error::Parse(format!(
                    "a has length {}, expected {dim}",
                    a.len()
                )))
            }
            Some(a) => a.iter().map(|&x| BigInt::from(x)).collect(),
            None => (0..dim).map(|i| BigInt::from(u8::from(i == 0))).collect(),
        };
        Ok(Self {
            p: doc.p,
            dim,
            generators,
            z_word: doc.z_word.clone(),
            a,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RepresentationDoc = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "representation document, line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        Self::from_doc(&doc)
    }

    /// `Q8` acting on the quaternions by left multiplication, `z = i·i = -1`.
    pub fn builtin_q8() -> Self {
        Self::from_doc(&Self::builtin_q8_doc()).expect("built-in representation is valid")
    }

    pub fn builtin_q8_doc() -> RepresentationDoc {
        RepresentationDoc {
            p: 2,
            dim: 4,
            generators: vec![
                MatrixInput::Rows(QUATERNION_I.chunks(4).map(<[i64]>::to_vec).collect()),
                MatrixInput::Rows(QUATERNION_J.chunks(4).map(<[i64]>::to_vec).collect()),
            ],
            z_word: vec![0, 0],
            a: None,
        }
    }

    pub fn to_doc(&self) -> RepresentationDoc {
        RepresentationDoc {
            p: self.p,
            dim: self.dim,
            generators: self
                .generators
                .iter()
                .map(|g| MatrixInput::Rows(g.to_i64_rows().expect("entries fit in i64")))
                .collect(),
            z_word: self.z_word.clone(),
            a: Some(self.a.iter().map(|x| x.to_i64().expect("fits")).collect()),
        }
    }

    pub fn z(&self) -> IntegerMatrix {
        self.z_word
            .iter()
            .fold(IntegerMatrix::identity(self.dim), |acc, &i| {
                &acc * &self.generators[i]
            })
    }

    pub fn with_a(mut self, a: Vec<BigInt>) -> Self {
        self.a = a;
        self
    }
}
