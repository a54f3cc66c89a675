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

//! SQL frontend: parsing, binding and join-graph extraction.

mod analyze;
pub mod ast;
mod join_graph;
mod parser;
mod predicate;
mod ra;

pub use self::analyze::analyze;
pub use self::ast::{AstQuery, CmpOp, Span};
pub use self::join_graph::{build_join_graph, GraphNode, JoinEdge, JoinGraph, QueryOutput};
pub use self::parser::parse;
pub use self::predicate::{sql_literal, ColumnRef, Predicate};
pub use self::ra::{AggregateKind, OutputColumn, RaNode};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SqlError {
    #[error("syntax error at {span}: {message}")]
    Syntax { message: String, span: Span },
    #[error("unsupported construct {construct} at {span}")]
    UnsupportedConstruct { construct: String, span: Span },
    #[error("unknown table {name} at {span}")]
    UnknownTable { name: String, span: Span },
    #[error("unknown column {name} at {span}")]
    UnknownColumn { name: String, span: Span },
    #[error("ambiguous column {name} at {span}")]
    AmbiguousColumn { name: String, span: Span },
    #[error("table name or alias {name} used twice at {span}")]
    DuplicateBinding { name: String, span: Span },
    #[error("type mismatch at {span}: {message}")]
    TypeMismatch { message: String, span: Span },
    #[error("invalid literal {literal} at {span}")]
    InvalidLiteral { literal: String, span: Span },
    #[error("unknown function {name} at {span}")]
    UnknownFunction { name: String, span: Span },
    #[error("function {name} takes {expected} arguments, got {found} at {span}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        span: Span,
    },
    #[error("unsupported predicate: {predicate}")]
    UnsupportedPredicate { predicate: String },
    #[error("schema check failed: {0}")]
    SchemaCheck(String),
}
