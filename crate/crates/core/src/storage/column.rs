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

use std::collections::HashMap;
use std::sync::Arc;

use bitvec::vec::BitVec;

use super::types::{DataType, Value};
use super::StorageError;

/// Bijection between distinct strings and the dense codes `0..len`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dictionary {
    strings: Vec<String>,
    codes: HashMap<String, u32>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the code for `s`, assigning the next free code on first sight.
    pub fn encode(&mut self, s: &str) -> u32 {
        if let Some(&code) = self.codes.get(s) {
            return code;
        }
        let code = self.strings.len() as u32;
        self.strings.push(s.to_string());
        self.codes.insert(s.to_string(), code);
        code
    }

    pub fn code_of(&self, s: &str) -> Option<u32> {
        self.codes.get(s).copied()
    }

    pub fn decode(&self, code: u32) -> &str {
        &self.strings[code as usize]
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn strings(&self) -> &[String] {
        &self.strings
    }
}

/// A typed column. Values of every kind live in one dense `i64` vector;
/// `nulls` has a set bit for each NULL row and is absent when the column has
/// never seen a NULL.
#[derive(Debug, Clone)]
pub struct Column {
    name: String,
    data_type: DataType,
    values: Vec<i64>,
    nulls: Option<BitVec>,
    dictionary: Option<Arc<Dictionary>>,
}

impl Column {
    pub fn new(name: impl Into<String>, data_type: DataType) -> Self {
        Self {
            name: name.into(),
            data_type,
            values: Vec::new(),
            nulls: None,
            dictionary: (data_type == DataType::Text).then(|| Arc::new(Dictionary::new())),
        }
    }

    /// Builds a column from raw parts. TEXT columns must bring a dictionary
    /// covering every code; other kinds must not.
    pub fn from_parts(
        name: impl Into<String>,
        data_type: DataType,
        values: Vec<i64>,
        nulls: Option<BitVec>,
        dictionary: Option<Arc<Dictionary>>,
    ) -> Result<Self, StorageError> {
        let name = name.into();
        if let Some(mask) = &nulls {
            if mask.len() != values.len() {
                return Err(StorageError::LengthMismatch {
                    expected: values.len(),
                    found: mask.len(),
                });
            }
        }
        match (data_type, &dictionary) {
            (DataType::Text, Some(dict)) => {
                let bad = values.iter().enumerate().any(|(row, &code)| {
                    !is_null_in(&nulls, row) && (code < 0 || code as usize >= dict.len())
                });
                if bad {
                    return Err(StorageError::InvalidColumn(format!(
                        "column {name} holds codes outside its dictionary"
                    )));
                }
            }
            (DataType::Text, None) => {
                return Err(StorageError::InvalidColumn(format!(
                    "TEXT column {name} needs a dictionary"
                )))
            }
            (_, Some(_)) => {
                return Err(StorageError::InvalidColumn(format!(
                    "only TEXT columns carry a dictionary ({name})"
                )))
            }
            (_, None) => {}
        }
        let nulls = nulls.filter(|m| m.any());
        Ok(Self {
            name,
            data_type,
            values,
            nulls,
            dictionary,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn data_type(&self) -> DataType {
        self.data_type
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Raw storage: scaled integers, days or dictionary codes.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn nulls(&self) -> Option<&BitVec> {
        self.nulls.as_ref()
    }

    pub fn has_nulls(&self) -> bool {
        self.nulls.is_some()
    }

    #[inline]
    pub fn is_null(&self, row: usize) -> bool {
        is_null_in(&self.nulls, row)
    }

    pub fn null_count(&self) -> usize {
        self.nulls.as_ref().map_or(0, |m| m.count_ones())
    }

    pub fn dictionary(&self) -> Option<&Arc<Dictionary>> {
        self.dictionary.as_ref()
    }

    pub fn value(&self, row: usize) -> Value {
        if self.is_null(row) {
            return Value::Null;
        }
        let raw = self.values[row];
        match self.data_type {
            DataType::Int64 => Value::Int(raw),
            DataType::Decimal { scale, .. } => Value::Decimal { units: raw, scale },
            DataType::Date => Value::Date(raw as i32),
            DataType::Text => Value::Text(self.decode(raw).to_string()),
        }
    }

    fn decode(&self, code: i64) -> &str {
        self.dictionary
            .as_ref()
            .expect("TEXT column has a dictionary")
            .decode(code as u32)
    }

    /// Checks that `value` can be stored in this column.
    pub(crate) fn check_value(&self, value: &Value) -> Result<(), StorageError> {
        let ok = match (self.data_type, value) {
            (_, Value::Null) => true,
            (DataType::Int64, Value::Int(_)) => true,
            (DataType::Decimal { .. }, Value::Int(_)) => true,
            (DataType::Decimal { scale, .. }, Value::Decimal { scale: s, .. }) => *s <= scale,
            (DataType::Date, Value::Date(_)) => true,
            (DataType::Text, Value::Text(_)) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(StorageError::TypeMismatch {
                column: self.name.clone(),
                expected: self.data_type,
                found: value.clone(),
            })
        }
    }

    /// Appends a value already accepted by [`Column::check_value`].
    pub(crate) fn push_checked(&mut self, value: &Value) {
        let row = self.values.len();
        let raw = match (self.data_type, value) {
            (_, Value::Null) => {
                let mask = self.nulls.get_or_insert_with(|| BitVec::repeat(false, row));
                mask.push(true);
                self.values.push(0);
                return;
            }
            (DataType::Decimal { scale, .. }, Value::Int(v)) => v * 10i64.pow(scale as u32),
            (DataType::Decimal { scale, .. }, Value::Decimal { units, scale: s }) => {
                units * 10i64.pow((scale - s) as u32)
            }
            (_, Value::Int(v)) => *v,
            (_, Value::Date(d)) => *d as i64,
            (_, Value::Text(s)) => {
                let dict = Arc::make_mut(
                    self.dictionary
                        .as_mut()
                        .expect("TEXT column has a dictionary"),
                );
                dict.encode(s) as i64
            }
            (_, Value::Decimal { .. }) => unreachable!("rejected by check_value"),
        };
        self.values.push(raw);
        if let Some(mask) = &mut self.nulls {
            mask.push(false);
        }
    }

    /// A new column holding the rows at `indices`, sharing the dictionary.
    pub fn gather(&self, indices: &[u32]) -> Column {
        let values = indices.iter().map(|&i| self.values[i as usize]).collect();
        let nulls = self.nulls.as_ref().and_then(|mask| {
            let out: BitVec = indices.iter().map(|&i| mask[i as usize]).collect();
            out.any().then_some(out)
        });
        Column {
            name: self.name.clone(),
            data_type: self.data_type,
            values,
            nulls,
            dictionary: self.dictionary.clone(),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Column {
        self.name = name.into();
        self
    }
}

#[inline]
fn is_null_in(nulls: &Option<BitVec>, row: usize) -> bool {
    nulls.as_ref().is_some_and(|m| m[row])
}
