//! Decomposition of `M` at `u = 1` into irreducible `W`-modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::CellsError;
use crate::coxeter::{ElemId, GroupTable};
use crate::groups::{character_table, Cyclo, FiniteGroup};
use crate::hecke::Hecke;
use crate::invmodule::{IModElt, InvModule};

pub const B2_FIXTURE: &str = include_str!("../../fixtures/special_reps_b2.json");

/// Special/nonspecial labels for the irreducibles of one Weyl group. An
/// irreducible is identified by its dimension and its values on the simple
/// reflections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFixture {
    #[serde(rename = "type")]
    pub coxeter_type: String,
    pub representations: Vec<SpecialRep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialRep {
    pub name: String,
    pub dim: u64,
    pub generator_values: Vec<i64>,
    pub special: bool,
}

impl SpecialFixture {
    pub fn parse(text: &str) -> Result<Self, CellsError> {
        serde_json::from_str(text).map_err(|e| CellsError::Inconsistent(format!("fixture: {e}")))
    }

    pub fn b2() -> Self {
        Self::parse(B2_FIXTURE).expect("shipped fixture parses")
    }

    fn lookup(&self, dim: u64, values: &[i64]) -> Option<&SpecialRep> {
        self.representations
            .iter()
            .find(|r| r.dim == dim && r.generator_values == values)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IrrMult {
    pub index: usize,
    pub dim: u64,
    pub generator_values: Vec<i64>,
    pub mult: u64,
    pub label: Option<String>,
    pub special: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KottwitzReport {
    pub irreducibles: Vec<IrrMult>,
    /// `sum mult * dim`.
    pub total_dim: u64,
    pub involutions: usize,
    /// Rank of left multiplication by `X`.
    pub x_rank: usize,
    pub multiplicity_one: bool,
    /// With a fixture: special multiplicities are `0` or a power of two,
    /// nonspecial ones are `0`.
    pub special_check: Option<bool>,
    /// Irreducibles the fixture does not label.
    pub unlabelled: usize,
}

impl KottwitzReport {
    pub fn dims_agree(&self) -> bool {
        self.total_dim as usize == self.involutions && self.x_rank == self.involutions
    }
}

fn to_int(c: &Cyclo) -> Result<i64, CellsError> {
    c.as_integer()
        .and_then(|v| v.to_i64())
        .ok_or_else(|| CellsError::Inconsistent(format!("non-integral character value {c}")))
}

/// Trace of `w` on `M` at `u = 1`.
pub fn trace_at_one(module: &InvModule, w: ElemId) -> Result<BigInt, CellsError> {
    let mut tr = BigInt::zero();
    for &v in module.twisted() {
        let img = module.tx_action(w, &IModElt::basis(v))?;
        tr += img.coeff(v).eval_at_one();
    }
    Ok(tr)
}

pub fn kottwitz_mult_check(
    table: &GroupTable,
    fixture: Option<&SpecialFixture>,
) -> Result<KottwitzReport, CellsError> {
    if !table.is_complete() {
        return Err(CellsError::NotFinite);
    }
    let module = InvModule::new(table)?;
    let group = FiniteGroup::from_coxeter(table)?;
    let ct = character_table(&group)?;
    let chi_m: Vec<BigInt> = ct
        .classes
        .iter()
        .map(|&(rep, _)| trace_at_one(&module, ElemId(rep as u32)))
        .collect::<Result<_, _>>()?;
    let order = BigRational::from_integer(group.order().into());
    let mut irreducibles = Vec::with_capacity(ct.len());
    for i in 0..ct.len() {
        let mut s = Cyclo::zero(ct.exponent);
        for (j, &(_, size)) in ct.classes.iter().enumerate() {
            let k = Cyclo::int(ct.exponent, (&chi_m[j] * BigInt::from(size)).to_i64().unwrap());
            s = &s + &(&k * &ct.chars[i][j].conj());
        }
        let m = s
            .as_rational()
            .map(|q| q / &order)
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_u64())
            .ok_or_else(|| CellsError::Inconsistent(format!("multiplicity {s} / |W|")))?;
        let generator_values = (0..table.rank())
            .map(|g| to_int(ct.value(&group, i, table.generator(g).index())))
            .collect::<Result<Vec<_>, _>>()?;
        let dim = ct.dim(i);
        let hit = fixture.and_then(|f| f.lookup(dim, &generator_values));
        irreducibles.push(IrrMult {
            index: i,
            dim,
            label: hit.map(|r| r.name.clone()),
            special: hit.map(|r| r.special),
            generator_values,
            mult: m,
        });
    }
    let total_dim = irreducibles.iter().map(|r| r.mult * r.dim).sum();
    let hecke = Hecke::new(table);
    let x_rank = hecke.left_mult_rank(&hecke.build_x())?;
    let unlabelled = irreducibles.iter().filter(|r| r.special.is_none()).count();
    let special_check = fixture.map(|_| {
        unlabelled == 0
            && irreducibles.iter().all(|r| match r.special {
                Some(true) => r.mult == 0 || r.mult.is_power_of_two(),
                _ => r.mult == 0,
            })
    });
    Ok(KottwitzReport {
        multiplicity_one: irreducibles.iter().all(|r| r.mult == 1),
        involutions: module.twisted().len(),
        irreducibles,
        total_dim,
        x_rank,
        special_check,
        unlabelled,
    })
}
