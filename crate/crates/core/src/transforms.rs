//! Registry of built-in local transforms: R-matrices and parametrized
//! R-correspondences acting on three adjacent parameter blocks, each
//! validated against the 3x3 matrix identity that defines it.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::evolve::{m13_embed, phi_embed, EvolveError, MatrixRF};
use crate::exactalg::{RationalFunction, Variable};
use crate::formulas::{ast_to_rf, FormulaError, TransformFile};

#[derive(Debug, thiserror::Error)]
pub enum TransformError {
    #[error("unknown transform `{0}`")]
    UnknownTransform(String),
    #[error("transform expects {expected} values per block, got {got}")]
    BlockWidthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Alg(#[from] crate::AlgError),
    #[error(transparent)]
    Matrix(#[from] EvolveError),
    #[error("transform `{0}` carries no matrix model")]
    NoMatrixModel(String),
}

/// The 2x2 template a transform's defining identity is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockTemplate {
    /// ((a, b), (c, 0)) on width-3 blocks (a, b, c).
    AbcZero,
    /// ((a, b), (1/b, 0)) on width-2 blocks (a, b).
    AbBinv,
    /// ((a, 1), (1, 0)) on width-1 blocks.
    AOne,
    /// ((a, -1), (1, 0)) on width-1 blocks.
    ANegOne,
    /// ((1/a, 1), (0, a)) on width-1 blocks.
    DiagShear,
    /// ((1, a), (0, 1)) on width-1 blocks.
    Unipotent,
    /// ((1/a, 0), (0, a)) on width-1 blocks.
    Diag,
    /// ((1/a, x), (0, a)) on width-2 blocks (a, x).
    DiagX,
}

impl BlockTemplate {
    pub fn width(self) -> usize {
        match self {
            BlockTemplate::AbcZero => 3,
            BlockTemplate::AbBinv | BlockTemplate::DiagX => 2,
            _ => 1,
        }
    }

    pub fn instantiate(self, block: &[RationalFunction]) -> Result<MatrixRF, TransformError> {
        if block.len() != self.width() {
            return Err(TransformError::BlockWidthMismatch {
                expected: self.width(),
                got: block.len(),
            });
        }
        let zero = RationalFunction::zero;
        let one = RationalFunction::one;
        let m = |rows: [[RationalFunction; 2]; 2]| {
            MatrixRF::from_fn(2, 2, |i, j| rows[i - 1][j - 1].clone())
        };
        Ok(match self {
            BlockTemplate::AbcZero => m([
                [block[0].clone(), block[1].clone()],
                [block[2].clone(), zero()],
            ]),
            BlockTemplate::AbBinv => m([
                [block[0].clone(), block[1].clone()],
                [block[1].inv()?, zero()],
            ]),
            BlockTemplate::AOne => m([[block[0].clone(), one()], [one(), zero()]]),
            BlockTemplate::ANegOne => m([
                [block[0].clone(), RationalFunction::from_int(-1)],
                [one(), zero()],
            ]),
            BlockTemplate::DiagShear => m([[block[0].inv()?, one()], [zero(), block[0].clone()]]),
            BlockTemplate::Unipotent => m([[one(), block[0].clone()], [zero(), one()]]),
            BlockTemplate::Diag => m([[block[0].inv()?, zero()], [zero(), block[0].clone()]]),
            BlockTemplate::DiagX => m([
                [block[0].inv()?, block[1].clone()],
                [zero(), block[0].clone()],
            ]),
        })
    }
}

/// How the defining 3x3 identity is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityShape {
    /// phi_1 phi_2 phi_1 of the inputs equals phi_2 phi_1 phi_2 of the outputs.
    BraidAscending,
    /// phi_2 phi_1 phi_2 of the inputs equals phi_1 phi_2 phi_1 of the outputs.
    BraidDescending,
    /// E_12 E_13 E_23 of the inputs equals E_23 E_13 E_12 of the outputs.
    PairLabeled,
}

#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub template: BlockTemplate,
    pub shape: IdentityShape,
}

/// Where a free parameter sits relative to the move position, for paper
/// style naming of introduced variables: base letter plus block offset.
#[derive(Clone, Debug)]
pub struct FreeHint {
    pub base: String,
    pub block_offset: usize,
}

/// A local transform on three adjacent parameter blocks of width w. The
/// outputs are rational functions of the 3w formal inputs x1..x3w and of
/// the free parameters t1..tk; k = 0 is a genuine map.
#[derive(Clone, Debug)]
pub struct Transform {
    name: String,
    width: usize,
    inputs: Vec<Variable>,
    frees: Vec<Variable>,
    free_hints: Vec<FreeHint>,
    outputs: Vec<RationalFunction>,
    model: Option<MatrixModel>,
}

impl Transform {
    /// Build from a parsed definition, renaming inputs to x1..x3w and frees
    /// to t1..tk.
    pub fn from_file(tf: &TransformFile) -> Result<Self, TransformError> {
        let inputs: Vec<Variable> = (1..=tf.input_names.len())
            .map(|i| Variable::new(format!("x{i}")))
            .collect();
        let frees: Vec<Variable> = (1..=tf.free_names.len())
            .map(|i| Variable::new(format!("t{i}")))
            .collect();
        let mut universe = BTreeMap::new();
        for (name, v) in tf.input_names.iter().zip(&inputs) {
            universe.insert(name.clone(), v.clone());
        }
        for (name, v) in tf.free_names.iter().zip(&frees) {
            universe.insert(name.clone(), v.clone());
        }
        let outputs = tf
            .outputs
            .iter()
            .map(|ast| ast_to_rf(ast, &universe))
            .collect::<Result<Vec<_>, _>>()?;
        let free_hints = tf.free_names.iter().map(|n| parse_free_hint(n)).collect();
        Ok(Transform {
            name: tf.name.clone(),
            width: tf.block_width,
            inputs,
            frees,
            free_hints,
            outputs,
            model: None,
        })
    }

    pub fn with_model(mut self, template: BlockTemplate, shape: IdentityShape) -> Self {
        self.model = Some(MatrixModel { template, shape });
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn free_count(&self) -> usize {
        self.frees.len()
    }

    pub fn free_hints(&self) -> &[FreeHint] {
        &self.free_hints
    }

    pub fn outputs(&self) -> &[RationalFunction] {
        &self.outputs
    }

    pub fn model(&self) -> Option<&MatrixModel> {
        self.model.as_ref()
    }

    /// Substitute three concrete blocks (and fresh variables for the free
    /// parameters) into the output formulas.
    pub fn apply(
        &self,
        blocks: &[Vec<RationalFunction>; 3],
        fresh: &[Variable],
    ) -> Result<[Vec<RationalFunction>; 3], TransformError> {
        for b in blocks {
            if b.len() != self.width {
                return Err(TransformError::BlockWidthMismatch {
                    expected: self.width,
                    got: b.len(),
                });
            }
        }
        assert_eq!(fresh.len(), self.frees.len(), "one fresh variable per free parameter");
        let mut bindings = BTreeMap::new();
        for (k, value) in blocks.iter().flatten().enumerate() {
            bindings.insert(self.inputs[k].clone(), value.clone());
        }
        for (t, fresh_var) in self.frees.iter().zip(fresh) {
            bindings.insert(t.clone(), RationalFunction::var(fresh_var.clone()));
        }
        let mut out = Vec::with_capacity(self.outputs.len());
        for o in &self.outputs {
            out.push(o.substitute(&bindings)?);
        }
        let mut it = out.into_iter();
        Ok([
            (&mut it).take(self.width).collect(),
            (&mut it).take(self.width).collect(),
            (&mut it).take(self.width).collect(),
        ])
    }

    /// Multiply out both sides of the defining 3x3 identity, with the
    /// output formulas substituted for the primed symbols, and compare
    /// entrywise.
    pub fn verify_defining_identity(&self) -> Result<(), TransformError> {
        let model = self
            .model
            .as_ref()
            .ok_or_else(|| TransformError::NoMatrixModel(self.name.clone()))?;
        let in_blocks = [
            self.formal_input_block(0),
            self.formal_input_block(1),
            self.formal_input_block(2),
        ];
        let out_blocks = {
            let mut it = self.outputs.iter().cloned();
            [
                (&mut it).take(self.width).collect::<Vec<_>>(),
                (&mut it).take(self.width).collect::<Vec<_>>(),
                (&mut it).take(self.width).collect::<Vec<_>>(),
            ]
        };
        let lhs_positions: [usize; 3];
        let rhs_positions: [usize; 3];
        match model.shape {
            IdentityShape::BraidAscending => {
                lhs_positions = [1, 2, 1];
                rhs_positions = [2, 1, 2];
            }
            IdentityShape::BraidDescending => {
                lhs_positions = [2, 1, 2];
                rhs_positions = [1, 2, 1];
            }
            IdentityShape::PairLabeled => {
                let embed = |blocks: &[Vec<RationalFunction>; 3],
                             order: [u8; 3]|
                 -> Result<MatrixRF, TransformError> {
                    let mut acc = MatrixRF::identity(3);
                    for (b, &which) in blocks.iter().zip(order.iter()) {
                        let two = model.template.instantiate(b)?;
                        let m = match which {
                            1 => phi_embed(&two, 1, 3)?,
                            2 => m13_embed(&two),
                            _ => phi_embed(&two, 2, 3)?,
                        };
                        acc = acc.mul(&m);
                    }
                    Ok(acc)
                };
                let lhs = embed(&in_blocks, [1, 2, 3])?;
                let rhs = embed(&out_blocks, [3, 2, 1])?;
                lhs.entrywise_eq(&rhs)?;
                return Ok(());
            }
        }
        let product = |blocks: &[Vec<RationalFunction>; 3],
                       positions: [usize; 3]|
         -> Result<MatrixRF, TransformError> {
            let mut acc = MatrixRF::identity(3);
            for (b, &pos) in blocks.iter().zip(positions.iter()) {
                acc = acc.mul(&phi_embed(&model.template.instantiate(b)?, pos, 3)?);
            }
            Ok(acc)
        };
        let lhs = product(&in_blocks, lhs_positions)?;
        let rhs = product(&out_blocks, rhs_positions)?;
        lhs.entrywise_eq(&rhs)?;
        Ok(())
    }

    fn formal_input_block(&self, b: usize) -> Vec<RationalFunction> {
        (0..self.width)
            .map(|k| RationalFunction::var(self.inputs[b * self.width + k].clone()))
            .collect()
    }

    /// Compose `second` after `self` on the formal inputs of `self`; free
    /// parameters of the two transforms become t1..; outputs are returned
    /// flattened.
    pub fn compose(&self, second: &Transform) -> Result<Vec<RationalFunction>, TransformError> {
        assert_eq!(self.width, second.width);
        let first_out = {
            let mut bindings = BTreeMap::new();
            for (t, name) in self.frees.iter().zip(1..) {
                bindings.insert(t.clone(), RationalFunction::var_named(&format!("t{name}")));
            }
            self.outputs
                .iter()
                .map(|o| o.substitute(&bindings))
                .collect::<Result<Vec<_>, _>>()?
        };
        let mut bindings = BTreeMap::new();
        for (k, value) in first_out.iter().enumerate() {
            bindings.insert(second.inputs[k].clone(), value.clone());
        }
        for (t, name) in second.frees.iter().zip(self.frees.len() + 1..) {
            bindings.insert(t.clone(), RationalFunction::var_named(&format!("t{name}")));
        }
        let mut out = Vec::new();
        for o in &second.outputs {
            out.push(o.substitute(&bindings)?);
        }
        Ok(out)
    }
}

fn parse_free_hint(name: &str) -> FreeHint {
    let base: String = name.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
    let digits: String = name
        .chars()
        .skip(base.len())
        .take_while(|c| c.is_ascii_digit())
        .collect();
    let offset = digits.parse::<usize>().map(|p| p.saturating_sub(1)).unwrap_or(0);
    FreeHint { base, block_offset: offset }
}

macro_rules! builtin_sources {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../tf/", $name, ".tf")))),*]
    };
}

/// Builtin definitions, shipped as `.tf` files.
pub const BUILTIN_SOURCES: &[(&str, &str)] = builtin_sources![
    "lusztig",
    "sergeev_alpha",
    "very_small",
    "very_small_inverse",
    "bz",
    "triple13",
    "smaller2",
    "smaller2_quasiinverse",
    "full3",
    "flacon_diag",
    "flacon_full",
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN_SOURCES.iter().map(|(n, _)| *n).collect()
}

/// Look up a builtin transform, with its matrix model attached.
pub fn builtin(name: &str) -> Result<Arc<Transform>, TransformError> {
    let (_, src) = BUILTIN_SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| TransformError::UnknownTransform(name.to_string()))?;
    let tf = crate::formulas::parse_transform_file(src)?;
    let t = Transform::from_file(&tf)?;
    use BlockTemplate::*;
    use IdentityShape::*;
    let t = match name {
        "lusztig" => t.with_model(Unipotent, BraidAscending),
        "sergeev_alpha" => t.with_model(ANegOne, BraidAscending),
        "very_small" => t.with_model(AOne, BraidAscending),
        "very_small_inverse" => t.with_model(AOne, BraidDescending),
        "bz" => t.with_model(DiagShear, BraidAscending),
        "triple13" => t.with_model(AOne, PairLabeled),
        "smaller2" => t.with_model(AbBinv, BraidAscending),
        "smaller2_quasiinverse" => t.with_model(AbBinv, BraidDescending),
        "full3" => t.with_model(AbcZero, BraidAscending),
        "flacon_diag" => t.with_model(Diag, BraidAscending),
        "flacon_full" => t.with_model(DiagX, BraidAscending),
        _ => t,
    };
    Ok(Arc::new(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_rf;

    #[test]
    fn every_builtin_parses_and_verifies_its_identity() {
        for name in builtin_names() {
            let t = builtin(name).unwrap();
            t.verify_defining_identity()
                .unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn lusztig_outputs() {
        let t = builtin("lusztig").unwrap();
        let want = ["x2*x3/(x1+x3)", "x1+x3", "x1*x2/(x1+x3)"];
        for (o, w) in t.outputs().iter().zip(want) {
            assert!(o.alg_eq(&parse_rf(w).unwrap()));
        }
    }

    #[test]
    fn full3_b2_prime_output() {
        // fifth output is a1*b3/a3p with a3p renamed to t2
        let t = builtin("full3").unwrap();
        assert!(t.outputs()[4].alg_eq(&parse_rf("x1*x8/t2").unwrap()));
    }

    #[test]
    fn smaller2_b3_prime_output() {
        let t = builtin("smaller2").unwrap();
        // b3' = a3*b2/a1p: inputs (a1,b1,a2,b2,a3,b3) are x1..x6, free t1
        assert!(t.outputs()[5].alg_eq(&parse_rf("x5*x4/t1").unwrap()));
    }

    #[test]
    fn apply_very_small() {
        let t = builtin("very_small").unwrap();
        let blocks = [
            vec![parse_rf("a1").unwrap()],
            vec![parse_rf("a2").unwrap()],
            vec![parse_rf("a3").unwrap()],
        ];
        let out = t.apply(&blocks, &[]).unwrap();
        assert!(out[0][0].alg_eq(&parse_rf("a3").unwrap()));
        assert!(out[1][0].alg_eq(&parse_rf("a1*a3 + a2").unwrap()));
        assert!(out[2][0].alg_eq(&parse_rf("a1").unwrap()));
    }

    #[test]
    fn apply_lusztig_with_zero_middle() {
        let t = builtin("lusztig").unwrap();
        let blocks = [
            vec![parse_rf("a").unwrap()],
            vec![RationalFunction::zero()],
            vec![parse_rf("c").unwrap()],
        ];
        let out = t.apply(&blocks, &[]).unwrap();
        assert!(out[0][0].is_zero());
        assert!(out[1][0].alg_eq(&parse_rf("a+c").unwrap()));
        assert!(out[2][0].is_zero());
    }

    #[test]
    fn triple13_is_an_involution() {
        let t = builtin("triple13").unwrap();
        let composed = t.compose(&t).unwrap();
        for (k, o) in composed.iter().enumerate() {
            assert!(o.alg_eq(&RationalFunction::var_named(&format!("x{}", k + 1))));
        }
    }

    #[test]
    fn very_small_inverse_composes_to_identity() {
        let fwd = builtin("very_small").unwrap();
        let inv = builtin("very_small_inverse").unwrap();
        let composed = fwd.compose(&inv).unwrap();
        for (k, o) in composed.iter().enumerate() {
            assert!(o.alg_eq(&RationalFunction::var_named(&format!("x{}", k + 1))));
        }
    }

    #[test]
    fn unknown_transform_is_an_error() {
        assert!(matches!(
            builtin("nope"),
            Err(TransformError::UnknownTransform(_))
        ));
    }

    #[test]
    fn free_hints_follow_declared_names() {
        let t = builtin("full3").unwrap();
        let hints: Vec<(String, usize)> = t
            .free_hints()
            .iter()
            .map(|h| (h.base.clone(), h.block_offset))
            .collect();
        assert_eq!(
            hints,
            vec![("a".into(), 0), ("a".into(), 2), ("b".into(), 0)]
        );
    }
}
