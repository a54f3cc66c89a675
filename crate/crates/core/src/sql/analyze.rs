// Copyright 2026 The ESC Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Name resolution and type checking: AST to relational algebra.

use std::cmp::Ordering;

use super::ast::{AstQuery, CmpOp, ColumnName, Expr, Literal, Operand, Projection, Span};
use super::predicate::{ColumnRef, Predicate};
use super::ra::{AggregateKind, RaNode};
use super::SqlError;
use crate::catalog::Catalog;
use crate::storage::{parse_date, parse_decimal, rescale_exact, DataType, Schema, Value};

struct Binding {
    name: String,
    table: String,
    schema: Schema,
}

/// Lowers a parsed query to the canonical tree: scans cross-joined
/// left-deep in FROM order, the whole WHERE clause as one Select on top,
/// then the projection or COUNT(*).
pub fn analyze(ast: &AstQuery, catalog: &Catalog) -> Result<RaNode, SqlError> {
    let mut bindings: Vec<Binding> = Vec::new();
    for t in &ast.tables {
        let table = catalog
            .table(&t.name.value)
            .ok_or_else(|| SqlError::UnknownTable {
                name: t.name.value.clone(),
                span: t.name.span,
            })?;
        let name = t.binding().value.clone();
        if bindings.iter().any(|b| b.name == name) {
            return Err(SqlError::DuplicateBinding {
                name,
                span: t.binding().span,
            });
        }
        bindings.push(Binding {
            name,
            table: t.name.value.clone(),
            schema: table.schema(),
        });
    }
    let scope = Scope {
        bindings: &bindings,
        catalog,
    };

    let mut node: Option<RaNode> = None;
    for b in &bindings {
        let scan = RaNode::Scan {
            table: b.table.clone(),
            binding: b.name.clone(),
            schema: b.schema.clone(),
        };
        node = Some(match node {
            None => scan,
            Some(left) => RaNode::HashJoin {
                left: Box::new(left),
                right: Box::new(scan),
                on: Vec::new(),
            },
        });
    }
    let mut node = node.ok_or_else(|| SqlError::Syntax {
        message: "FROM list is empty".into(),
        span: Span::default(),
    })?;

    if let Some(expr) = &ast.selection {
        let predicate = scope.bind_expr(expr)?;
        node = RaNode::Select {
            input: Box::new(node),
            predicate,
        };
    }

    node = match &ast.projection {
        Projection::CountStar => RaNode::Aggregate {
            input: Box::new(node),
            aggregate: AggregateKind::CountStar,
        },
        Projection::Star => RaNode::Project {
            input: Box::new(node),
            columns: bindings
                .iter()
                .flat_map(|b| {
                    b.schema
                        .iter()
                        .map(|f| ColumnRef::new(b.name.clone(), f.name.clone()))
                })
                .collect(),
        },
        Projection::Columns(cols) => RaNode::Project {
            input: Box::new(node),
            columns: cols
                .iter()
                .map(|c| scope.resolve(c).map(|(r, _)| r))
                .collect::<Result<_, _>>()?,
        },
    };
    node.schema()?;
    Ok(node)
}

struct Scope<'a> {
    bindings: &'a [Binding],
    catalog: &'a Catalog,
}

impl Scope<'_> {
    fn resolve(&self, name: &ColumnName) -> Result<(ColumnRef, DataType), SqlError> {
        let column = &name.name.value;
        match &name.qualifier {
            Some(q) => {
                let b = self
                    .bindings
                    .iter()
                    .find(|b| b.name == q.value)
                    .ok_or_else(|| SqlError::UnknownColumn {
                        name: name.to_string(),
                        span: name.span(),
                    })?;
                let field = b.schema.iter().find(|f| &f.name == column).ok_or_else(|| {
                    SqlError::UnknownColumn {
                        name: name.to_string(),
                        span: name.span(),
                    }
                })?;
                Ok((
                    ColumnRef::new(b.name.clone(), column.clone()),
                    field.data_type,
                ))
            }
            None => {
                let mut hits = self
                    .bindings
                    .iter()
                    .filter_map(|b| b.schema.iter().find(|f| &f.name == column).map(|f| (b, f)));
                let (b, f) = hits.next().ok_or_else(|| SqlError::UnknownColumn {
                    name: name.to_string(),
                    span: name.span(),
                })?;
                if hits.next().is_some() {
                    return Err(SqlError::AmbiguousColumn {
                        name: name.to_string(),
                        span: name.span(),
                    });
                }
                Ok((ColumnRef::new(b.name.clone(), column.clone()), f.data_type))
            }
        }
    }

    fn bind_expr(&self, expr: &Expr) -> Result<Predicate, SqlError> {
        match expr {
            Expr::And(l, r) => Ok(Predicate::and([self.bind_expr(l)?, self.bind_expr(r)?])),
            Expr::Or(l, r) => {
                let mut parts = Vec::new();
                for side in [self.bind_expr(l)?, self.bind_expr(r)?] {
                    match side {
                        Predicate::Or(inner) => parts.extend(inner),
                        other => parts.push(other),
                    }
                }
                Ok(Predicate::Or(parts))
            }
            Expr::Not(e) => Ok(Predicate::Not(Box::new(self.bind_expr(e)?))),
            Expr::Between { operand, low, high } => self.bind_between(operand, low, high),
            Expr::Compare { left, op, right } => self.bind_compare(left, *op, right),
        }
    }

    fn bind_compare(
        &self,
        left: &Operand,
        op: CmpOp,
        right: &Operand,
    ) -> Result<Predicate, SqlError> {
        match (left, right) {
            (Operand::Column(l), Operand::Column(r)) => {
                let (lref, lty) = self.resolve(l)?;
                let (rref, rty) = self.resolve(r)?;
                if !comparable(lty, rty) {
                    return Err(SqlError::TypeMismatch {
                        message: format!("cannot compare {l} ({lty}) with {r} ({rty})"),
                        span: l.span(),
                    });
                }
                Ok(Predicate::ColumnCompare {
                    left: lref,
                    op,
                    right: rref,
                })
            }
            (Operand::Column(c), Operand::Literal { value, span }) => {
                self.bind_column_literal(c, op, value, *span)
            }
            (Operand::Literal { value, span }, Operand::Column(c)) => {
                self.bind_column_literal(c, op.flip(), value, *span)
            }
            (Operand::Call { name, args }, Operand::Literal { value, span }) => {
                self.bind_call(name, args, op, value, *span)
            }
            (Operand::Literal { value, span }, Operand::Call { name, args }) => {
                self.bind_call(name, args, op.flip(), value, *span)
            }
            (l, _) => Err(SqlError::UnsupportedPredicate {
                predicate: format!("{l} {op} {right}"),
            }),
        }
    }

    fn bind_column_literal(
        &self,
        c: &ColumnName,
        op: CmpOp,
        lit: &Literal,
        span: Span,
    ) -> Result<Predicate, SqlError> {
        let (column, ty) = self.resolve(c)?;
        match ty {
            DataType::Int64 | DataType::Decimal { .. } => {
                let (units, scale) = numeric_literal(lit, ty, span)?;
                Ok(numeric_compare(column, ty, op, units, scale))
            }
            DataType::Date | DataType::Text => Ok(Predicate::Compare {
                column,
                op,
                value: text_or_date_literal(lit, ty, span)?,
            }),
        }
    }

    fn bind_between(
        &self,
        operand: &Operand,
        low: &Operand,
        high: &Operand,
    ) -> Result<Predicate, SqlError> {
        let Operand::Column(c) = operand else {
            return Err(SqlError::UnsupportedPredicate {
                predicate: format!("{operand} BETWEEN {low} AND {high}"),
            });
        };
        let (column, ty) = self.resolve(c)?;
        let literal = |o: &Operand| match o {
            Operand::Literal { value, span } => Ok((value.clone(), *span)),
            other => Err(SqlError::UnsupportedPredicate {
                predicate: format!("BETWEEN bound {other} is not a constant"),
            }),
        };
        let (lo, lo_span) = literal(low)?;
        let (hi, hi_span) = literal(high)?;
        match ty {
            DataType::Int64 | DataType::Decimal { .. } => {
                let lo = numeric_literal(&lo, ty, lo_span)?;
                let hi = numeric_literal(&hi, ty, hi_span)?;
                if compare_decimal(lo, hi) == Ordering::Greater {
                    return Ok(Predicate::Const(false));
                }
                let target = ty.scale();
                // Round the bounds inwards to the column scale.
                let low = ceil_to_scale(lo.0, lo.1, target);
                let high = floor_to_scale(hi.0, hi.1, target);
                Ok(Predicate::Between {
                    column,
                    low: storage_value(ty, low),
                    high: storage_value(ty, high),
                })
            }
            DataType::Date | DataType::Text => {
                let low = text_or_date_literal(&lo, ty, lo_span)?;
                let high = text_or_date_literal(&hi, ty, hi_span)?;
                let ordered = match (&low, &high) {
                    (Value::Date(a), Value::Date(b)) => a <= b,
                    (Value::Text(a), Value::Text(b)) => a <= b,
                    _ => true,
                };
                if !ordered {
                    return Ok(Predicate::Const(false));
                }
                Ok(Predicate::Between { column, low, high })
            }
        }
    }

    fn bind_call(
        &self,
        name: &super::ast::Ident,
        args: &[Operand],
        op: CmpOp,
        lit: &Literal,
        span: Span,
    ) -> Result<Predicate, SqlError> {
        let udf = self
            .catalog
            .udf(&name.value)
            .ok_or_else(|| SqlError::UnknownFunction {
                name: name.value.clone(),
                span: name.span,
            })?;
        if udf.arity() != args.len() {
            return Err(SqlError::ArityMismatch {
                name: name.value.clone(),
                expected: udf.arity(),
                found: args.len(),
                span: name.span,
            });
        }
        let mut bound = Vec::with_capacity(args.len());
        for a in args {
            let Operand::Column(c) = a else {
                return Err(SqlError::UnsupportedPredicate {
                    predicate: format!("function argument {a} is not a column"),
                });
            };
            let (r, ty) = self.resolve(c)?;
            if !ty.is_numeric() {
                return Err(SqlError::TypeMismatch {
                    message: format!(
                        "function {} takes numeric arguments, {c} is {ty}",
                        name.value
                    ),
                    span: c.span(),
                });
            }
            bound.push(r);
        }
        let Literal::Number(n) = lit else {
            return Err(SqlError::TypeMismatch {
                message: format!(
                    "function {} returns a number, compared with {lit}",
                    name.value
                ),
                span,
            });
        };
        let value: f64 = n.parse().map_err(|_| SqlError::InvalidLiteral {
            literal: n.clone(),
            span,
        })?;
        Ok(Predicate::Function {
            udf,
            args: bound,
            op,
            value,
        })
    }
}

fn comparable(a: DataType, b: DataType) -> bool {
    match (a, b) {
        (DataType::Decimal { scale: x, .. }, DataType::Decimal { scale: y, .. }) => x == y,
        _ => a == b,
    }
}

fn numeric_literal(lit: &Literal, ty: DataType, span: Span) -> Result<(i128, u8), SqlError> {
    match lit {
        Literal::Number(n) => parse_decimal(n).ok_or_else(|| SqlError::InvalidLiteral {
            literal: n.clone(),
            span,
        }),
        other => Err(SqlError::TypeMismatch {
            message: format!("cannot compare {ty} column with {other}"),
            span,
        }),
    }
}

fn text_or_date_literal(lit: &Literal, ty: DataType, span: Span) -> Result<Value, SqlError> {
    match (ty, lit) {
        (DataType::Text, Literal::String(s)) => Ok(Value::Text(s.clone())),
        (DataType::Date, Literal::String(s) | Literal::Date(s)) => parse_date(s)
            .map(Value::Date)
            .ok_or_else(|| SqlError::InvalidLiteral {
                literal: s.clone(),
                span,
            }),
        (_, other) => Err(SqlError::TypeMismatch {
            message: format!("cannot compare {ty} column with {other}"),
            span,
        }),
    }
}

fn compare_decimal(a: (i128, u8), b: (i128, u8)) -> Ordering {
    let s = a.1.max(b.1);
    let scale = |(u, from): (i128, u8)| u.saturating_mul(10i128.saturating_pow((s - from) as u32));
    scale(a).cmp(&scale(b))
}

/// Largest value at scale `to` that is <= units/10^from.
fn floor_to_scale(units: i128, from: u8, to: u8) -> i128 {
    if to >= from {
        units.saturating_mul(10i128.saturating_pow((to - from) as u32))
    } else {
        units.div_euclid(10i128.pow((from - to) as u32))
    }
}

/// Smallest value at scale `to` that is >= units/10^from.
fn ceil_to_scale(units: i128, from: u8, to: u8) -> i128 {
    let floor = floor_to_scale(units, from, to);
    if rescale_exact(units, from, to).is_some() || to >= from {
        floor
    } else {
        floor + 1
    }
}

fn storage_value(ty: DataType, units: i128) -> Value {
    let clamped = units.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
    match ty {
        DataType::Decimal { scale, .. } => Value::Decimal {
            units: clamped,
            scale,
        },
        _ => Value::Int(clamped),
    }
}

/// `column op units/10^scale`, with the constant brought to the column scale
/// once. A constant that is not representable at the column scale turns the
/// comparison into an equivalent one against its floor `k`.
fn numeric_compare(
    column: ColumnRef,
    ty: DataType,
    op: CmpOp,
    units: i128,
    scale: u8,
) -> Predicate {
    let target = ty.scale();
    let exact = rescale_exact(units, scale, target);
    if let Some(v) = exact {
        return Predicate::Compare {
            column,
            op,
            value: storage_value(ty, v),
        };
    }
    let k = storage_value(ty, floor_to_scale(units, scale, target));
    let cmp = |op| Predicate::Compare {
        column: column.clone(),
        op,
        value: k.clone(),
    };
    match op {
        // Never equal, but still unknown on NULL.
        CmpOp::Eq => Predicate::And(vec![cmp(CmpOp::Gt), cmp(CmpOp::LtEq)]),
        CmpOp::NotEq => Predicate::Or(vec![cmp(CmpOp::LtEq), cmp(CmpOp::Gt)]),
        CmpOp::Lt | CmpOp::LtEq => cmp(CmpOp::LtEq),
        CmpOp::Gt | CmpOp::GtEq => cmp(CmpOp::Gt),
    }
}
