use std::collections::BTreeSet;

use super::ast::ExprAst;
use super::parser::parse_expr;
use super::FormulaError;

/// Parsed `.tf` transform definition: header fields plus one expression per
/// output slot.
#[derive(Clone, Debug)]
pub struct TransformFile {
    pub name: String,
    pub block_width: usize,
    pub block_count: usize,
    pub input_names: Vec<String>,
    pub free_names: Vec<String>,
    pub outputs: Vec<ExprAst>,
}

fn split_names(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Parse the line-oriented transform format:
///
/// ```text
/// name: lusztig
/// width: 1
/// blocks: 3
/// inputs: a, b, c
/// free:
/// out[1] = b*c/(a+c)
/// ...
/// ```
pub fn parse_transform_file(src: &str) -> Result<TransformFile, FormulaError> {
    let mut name = None;
    let mut width = None;
    let mut blocks = None;
    let mut inputs: Option<Vec<String>> = None;
    let mut frees: Option<Vec<String>> = None;
    let mut outputs: Vec<(usize, ExprAst)> = Vec::new();

    for raw in src.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("name:") {
            name = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("width:") {
            width = rest.trim().parse::<usize>().ok();
            if width.is_none() {
                return Err(FormulaError::BadHeader("width".into()));
            }
        } else if let Some(rest) = line.strip_prefix("blocks:") {
            blocks = rest.trim().parse::<usize>().ok();
            if blocks.is_none() {
                return Err(FormulaError::BadHeader("blocks".into()));
            }
        } else if let Some(rest) = line.strip_prefix("inputs:") {
            inputs = Some(split_names(rest));
        } else if let Some(rest) = line.strip_prefix("free:") {
            frees = Some(split_names(rest));
        } else if let Some(rest) = line.strip_prefix("out[") {
            let (idx, expr_src) = rest
                .split_once("]")
                .and_then(|(i, r)| Some((i.trim().parse::<usize>().ok()?, r)))
                .ok_or_else(|| FormulaError::BadHeader("out".into()))?;
            let expr_src = expr_src
                .trim_start()
                .strip_prefix('=')
                .ok_or_else(|| FormulaError::BadHeader("out".into()))?;
            outputs.push((idx, parse_expr(expr_src.trim())?));
        } else {
            return Err(FormulaError::BadHeader(line.to_string()));
        }
    }

    let name = name.ok_or_else(|| FormulaError::BadHeader("name".into()))?;
    let block_width = width.ok_or_else(|| FormulaError::BadHeader("width".into()))?;
    let block_count = blocks.ok_or_else(|| FormulaError::BadHeader("blocks".into()))?;
    let input_names = inputs.ok_or_else(|| FormulaError::BadHeader("inputs".into()))?;
    let free_names = frees.unwrap_or_default();

    if !(1..=3).contains(&block_width) {
        return Err(FormulaError::BadHeader("width".into()));
    }
    if input_names.len() != block_width * block_count {
        return Err(FormulaError::BadHeader("inputs".into()));
    }

    let mut seen = BTreeSet::new();
    for n in input_names.iter().chain(&free_names) {
        if !seen.insert(n.clone()) {
            return Err(FormulaError::DuplicateName(n.clone()));
        }
    }

    if outputs.len() != input_names.len() {
        return Err(FormulaError::ArityMismatch {
            name,
            inputs: input_names.len(),
            outputs: outputs.len(),
        });
    }
    outputs.sort_by_key(|(i, _)| *i);
    for (k, (i, _)) in outputs.iter().enumerate() {
        if *i != k + 1 {
            return Err(FormulaError::BadHeader(format!("out[{i}]")));
        }
    }

    let allowed: BTreeSet<&String> = input_names.iter().chain(&free_names).collect();
    for (_, ast) in &outputs {
        for ident in ast.identifiers() {
            if !allowed.contains(&ident) {
                return Err(FormulaError::UnknownSymbol(ident));
            }
        }
    }

    Ok(TransformFile {
        name,
        block_width,
        block_count,
        input_names,
        free_names,
        outputs: outputs.into_iter().map(|(_, e)| e).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_mismatch_rejected() {
        let src = "name: bad\nwidth: 2\nblocks: 3\ninputs: a1,b1,a2,b2,a3,b3\nfree:\n\
                   out[1] = a1\nout[2] = b1\nout[3] = a2\nout[4] = b2\nout[5] = a3\n";
        let err = parse_transform_file(src).unwrap_err();
        assert!(matches!(err, FormulaError::ArityMismatch { .. }));
    }

    #[test]
    fn undeclared_symbol_rejected() {
        let src = "name: bad\nwidth: 1\nblocks: 3\ninputs: a,b,c\nfree:\n\
                   out[1] = a\nout[2] = b\nout[3] = q\n";
        let err = parse_transform_file(src).unwrap_err();
        assert!(matches!(err, FormulaError::UnknownSymbol(s) if s == "q"));
    }
}
