//! Model serialization: a JSON document format and a subset of the OPB
//! pseudo-Boolean competition format.

use serde::{Deserialize, Serialize};

use crate::model::{Model, Sense};
use crate::ModelError;

/// Parsed OPB constraint line before variables are interned: signed terms
/// over 1-based indices, the sense, and the bound.
type OpbLine = (Vec<(i64, usize)>, Sense, i64);

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    variables: Vec<String>,
    constraints: Vec<ConstraintDoc>,
}

#[derive(Serialize, Deserialize)]
struct ConstraintDoc {
    name: String,
    terms: Vec<(i64, String)>,
    sense: Sense,
    rhs: i64,
}

/// Loads a model from text, accepting either the JSON document format or
/// OPB. A document whose first non-whitespace byte is `{` is treated as JSON.
pub fn load_model(text: &str) -> Result<Model, ModelError> {
    match text.trim_start().as_bytes().first() {
        Some(b'{') => model_from_json(text),
        _ => model_from_opb(text),
    }
}

pub fn model_from_json(text: &str) -> Result<Model, ModelError> {
    let doc: ModelDoc = serde_json::from_str(text)
        .map_err(|e| ModelError::parse(e.line(), e.column(), e.to_string()))?;
    let mut builder = Model::builder();
    for name in &doc.variables {
        builder.variable(name)?;
    }
    for c in &doc.constraints {
        let mut terms = Vec::with_capacity(c.terms.len());
        for (coef, var_name) in &c.terms {
            let var = builder.var(var_name).ok_or_else(|| ModelError::UnknownVariable {
                constraint: c.name.clone(),
                var: var_name.clone(),
            })?;
            terms.push((*coef, var));
        }
        builder.constraint(&c.name, terms, c.sense, c.rhs)?;
    }
    Ok(builder.finish())
}

/// Serializes a model to the JSON document format. Stable: `load(save(m))`
/// is structurally equal to `m` and `save` is a fixpoint.
pub fn model_to_json(model: &Model) -> String {
    let doc = ModelDoc {
        variables: model.var_names().to_vec(),
        constraints: model
            .raw_constraints()
            .iter()
            .map(|raw| ConstraintDoc {
                name: raw.name.clone(),
                terms: raw
                    .terms
                    .iter()
                    .map(|&(c, v)| (c, model.var_name(v).to_string()))
                    .collect(),
                sense: raw.sense,
                rhs: raw.rhs,
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("model serialization cannot fail");
    out.push('\n');
    out
}

/// Parses the OPB subset: `*` comment lines, an optional
/// `#variable= N #constraint= M` header (validated when present), and
/// constraint lines `±c x<i> ... {>=|<=|=} d ;`. Constraints get synthetic
/// names `C1`, `C2`, ... in file order; variables are `x1..xN`.
pub fn model_from_opb(text: &str) -> Result<Model, ModelError> {
    let mut declared_vars: Option<usize> = None;
    let mut declared_cons: Option<usize> = None;
    let mut parsed: Vec<OpbLine> = Vec::new();
    let mut max_var = 0usize;

    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('*') {
            if declared_vars.is_none() && comment.contains("#variable=") {
                let (v, c) = parse_opb_header(comment, line_no)?;
                declared_vars = Some(v);
                declared_cons = Some(c);
            }
            continue;
        }
        if trimmed.starts_with("min:") || trimmed.starts_with("max:") {
            return Err(ModelError::parse(
                line_no,
                1,
                "objective functions are not supported",
            ));
        }
        let (terms, sense, rhs) = parse_opb_constraint(line, line_no)?;
        for &(_, idx) in &terms {
            max_var = max_var.max(idx);
        }
        parsed.push((terms, sense, rhs));
    }

    if let Some(declared) = declared_cons {
        if declared != parsed.len() {
            return Err(ModelError::HeaderMismatch {
                kind: "constraint",
                declared,
                actual: parsed.len(),
            });
        }
    }
    let num_vars = match declared_vars {
        Some(declared) => {
            if max_var > declared {
                return Err(ModelError::HeaderMismatch {
                    kind: "variable",
                    declared,
                    actual: max_var,
                });
            }
            declared
        }
        None => max_var,
    };

    let mut builder = Model::builder();
    for i in 1..=num_vars {
        builder.variable(&format!("x{i}"))?;
    }
    for (pos, (terms, sense, rhs)) in parsed.into_iter().enumerate() {
        let terms = terms
            .into_iter()
            .map(|(c, idx)| (c, builder.var(&format!("x{idx}")).expect("declared above")))
            .collect();
        builder.constraint(&format!("C{}", pos + 1), terms, sense, rhs)?;
    }
    Ok(builder.finish())
}

fn parse_opb_header(comment: &str, line_no: usize) -> Result<(usize, usize), ModelError> {
    let grab = |key: &str| -> Result<usize, ModelError> {
        let at = comment
            .find(key)
            .ok_or_else(|| ModelError::parse(line_no, 1, format!("header is missing `{key}`")))?;
        let rest = comment[at + key.len()..].trim_start();
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        digits
            .parse()
            .map_err(|_| ModelError::parse(line_no, at + 1, format!("bad count after `{key}`")))
    };
    Ok((grab("#variable=")?, grab("#constraint=")?))
}

fn parse_opb_constraint(
    line: &str,
    line_no: usize,
) -> Result<OpbLine, ModelError> {
    // Column of a token = byte offset of its start + 1.
    let tokens: Vec<(usize, &str)> = line
        .split_whitespace()
        .map(|tok| (tok.as_ptr() as usize - line.as_ptr() as usize + 1, tok))
        .collect();
    let err = |col: usize, msg: String| ModelError::parse(line_no, col, msg);

    let mut terms: Vec<(i64, usize)> = Vec::new();
    let mut sense: Option<Sense> = None;
    let mut rhs: Option<i64> = None;
    let mut saw_semicolon = false;
    let mut pending_coef: Option<(usize, i64)> = None;

    for &(col, tok) in &tokens {
        if saw_semicolon {
            return Err(err(col, "trailing tokens after `;`".to_string()));
        }
        if let Some(s) = match tok {
            ">=" => Some(Sense::Ge),
            "<=" => Some(Sense::Le),
            "=" => Some(Sense::Eq),
            _ => None,
        } {
            if pending_coef.is_some() {
                return Err(err(col, "coefficient without a variable".to_string()));
            }
            if sense.is_some() {
                return Err(err(col, "duplicate relational operator".to_string()));
            }
            sense = Some(s);
            continue;
        }
        if tok == ";" {
            saw_semicolon = true;
            continue;
        }
        let (body, semi) = match tok.strip_suffix(';') {
            Some(body) => (body, true),
            None => (tok, false),
        };
        if sense.is_some() {
            // right-hand side
            let value: i64 = body
                .parse()
                .map_err(|_| err(col, format!("expected integer right-hand side, got `{body}`")))?;
            if rhs.is_some() {
                return Err(err(col, "duplicate right-hand side".to_string()));
            }
            rhs = Some(value);
        } else if let Some(rest) = body.strip_prefix('x') {
            let idx: usize = rest
                .parse()
                .map_err(|_| err(col, format!("bad variable token `{body}`")))?;
            if idx == 0 {
                return Err(err(col, "variable indices start at 1".to_string()));
            }
            let (ccol, coef) = pending_coef
                .take()
                .ok_or_else(|| err(col, format!("variable `{body}` without a coefficient")))?;
            let _ = ccol;
            terms.push((coef, idx));
        } else {
            let value: i64 = body
                .parse()
                .map_err(|_| err(col, format!("expected coefficient or variable, got `{body}`")))?;
            if pending_coef.is_some() {
                return Err(err(col, "two coefficients in a row (nonlinear terms are not supported)".to_string()));
            }
            pending_coef = Some((col, value));
        }
        saw_semicolon |= semi;
    }

    if let Some((col, _)) = pending_coef {
        return Err(err(col, "dangling coefficient".to_string()));
    }
    let sense = sense.ok_or_else(|| err(line.len().max(1), "missing relational operator".to_string()))?;
    let rhs = rhs.ok_or_else(|| err(line.len().max(1), "missing right-hand side".to_string()))?;
    if !saw_semicolon {
        return Err(err(line.len().max(1), "constraint must end with `;`".to_string()));
    }
    Ok((terms, sense, rhs))
}
