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

//! Column kinds, scalar values and the text forms they are parsed from.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use super::StorageError;

/// Physical kind of a column. Every kind is stored as a dense `i64` vector:
/// DECIMAL as scaled integers, DATE as days since 1970-01-01 and TEXT as
/// dictionary codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DataType {
    Int64,
    Decimal { precision: u8, scale: u8 },
    Date,
    Text,
}

impl DataType {
    pub fn is_numeric(&self) -> bool {
        !matches!(self, DataType::Text)
    }

    /// Decimal scale, zero for every non-decimal kind.
    pub fn scale(&self) -> u8 {
        match self {
            DataType::Decimal { scale, .. } => *scale,
            _ => 0,
        }
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataType::Int64 => write!(f, "INT64"),
            DataType::Decimal { precision, scale } => write!(f, "DECIMAL({precision},{scale})"),
            DataType::Date => write!(f, "DATE"),
            DataType::Text => write!(f, "TEXT"),
        }
    }
}

impl FromStr for DataType {
    type Err = StorageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "int64" | "int" | "integer" | "bigint" => return Ok(DataType::Int64),
            "date" => return Ok(DataType::Date),
            "text" | "string" | "varchar" => return Ok(DataType::Text),
            _ => {}
        }
        if let Some(args) = lower
            .strip_prefix("decimal(")
            .and_then(|rest| rest.strip_suffix(')'))
        {
            let mut parts = args.split(',').map(str::trim);
            let precision = parts.next().and_then(|p| p.parse::<u8>().ok());
            let scale = parts.next().and_then(|p| p.parse::<u8>().ok());
            if let (Some(precision), Some(scale), None) = (precision, scale, parts.next()) {
                if (1..=18).contains(&precision) && scale <= precision {
                    return Ok(DataType::Decimal { precision, scale });
                }
            }
        }
        if lower.starts_with("varchar(") || lower.starts_with("char(") {
            return Ok(DataType::Text);
        }
        Err(StorageError::UnknownType(s.to_string()))
    }
}

/// A named, typed column slot in a schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    pub name: String,
    pub data_type: DataType,
}

impl Field {
    pub fn new(name: impl Into<String>, data_type: DataType) -> Self {
        Self {
            name: name.into(),
            data_type,
        }
    }
}

pub type Schema = Vec<Field>;

/// Parses `name:type,name:type,...`, e.g. `o_orderkey:int64,o_totalprice:decimal(15,2)`.
pub fn parse_schema(spec: &str) -> Result<Schema, StorageError> {
    let mut fields = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut pieces = Vec::new();
    for (i, ch) in spec.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                pieces.push(&spec[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&spec[start..]);
    for piece in pieces.into_iter().map(str::trim).filter(|p| !p.is_empty()) {
        let (name, ty) = piece
            .split_once(':')
            .ok_or_else(|| StorageError::InvalidSchemaSpec(piece.to_string()))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(StorageError::InvalidSchemaSpec(piece.to_string()));
        }
        fields.push(Field::new(name.to_ascii_lowercase(), ty.parse()?));
    }
    Ok(fields)
}

/// One scalar as it enters or leaves a table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Value {
    Null,
    Int(i64),
    Decimal { units: i64, scale: u8 },
    Date(i32),
    Text(String),
}

impl Value {
    /// Parses `raw` as a value of kind `ty`. `\N` is NULL.
    pub fn parse(ty: DataType, raw: &str) -> Result<Value, StorageError> {
        if raw == "\\N" {
            return Ok(Value::Null);
        }
        let bad = || StorageError::Unparseable {
            value: raw.to_string(),
            data_type: ty,
        };
        match ty {
            DataType::Int64 => raw.trim().parse::<i64>().map(Value::Int).map_err(|_| bad()),
            DataType::Decimal { precision, scale } => {
                let (units, digits_scale) = parse_decimal(raw.trim()).ok_or_else(bad)?;
                let units = rescale_exact(units, digits_scale, scale).ok_or_else(bad)?;
                if units.unsigned_abs() >= 10u128.pow(precision as u32) {
                    return Err(bad());
                }
                Ok(Value::Decimal {
                    units: units as i64,
                    scale,
                })
            }
            DataType::Date => parse_date(raw.trim()).map(Value::Date).ok_or_else(bad),
            DataType::Text => Ok(Value::Text(raw.to_string())),
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => write!(f, "NULL"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Decimal { units, scale } => f.write_str(&format_decimal(*units, *scale)),
            Value::Date(days) => f.write_str(&format_date(*days)),
            Value::Text(s) => f.write_str(s),
        }
    }
}

/// Parses a plain decimal literal (`-12.340`) into `(units, scale)` without
/// rounding: `12.340` becomes `(12340, 3)`.
pub fn parse_decimal(s: &str) -> Option<(i128, u8)> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    if int_part.len() + frac_part.len() > 36 || frac_part.len() > u8::MAX as usize {
        return None;
    }
    let mut units: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        units = units.checked_mul(10)?.checked_add((b - b'0') as i128)?;
    }
    Some((if negative { -units } else { units }, frac_part.len() as u8))
}

/// Moves `units` from scale `from` to scale `to`; `None` when digits would be lost
/// or the result does not fit in an `i64`.
pub fn rescale_exact(units: i128, from: u8, to: u8) -> Option<i128> {
    let out = if to >= from {
        units.checked_mul(10i128.checked_pow((to - from) as u32)?)?
    } else {
        let div = 10i128.checked_pow((from - to) as u32)?;
        if units % div != 0 {
            return None;
        }
        units / div
    };
    i64::try_from(out).ok().map(|v| v as i128)
}

pub fn format_decimal(units: i64, scale: u8) -> String {
    if scale == 0 {
        return units.to_string();
    }
    let div = 10u64.pow(scale as u32);
    let abs = units.unsigned_abs();
    let sign = if units < 0 { "-" } else { "" };
    format!(
        "{sign}{}.{:0width$}",
        abs / div,
        abs % div,
        width = scale as usize
    )
}

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid epoch")
}

/// `YYYY-MM-DD` to days since 1970-01-01.
pub fn parse_date(s: &str) -> Option<i32> {
    let date = NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()?;
    Some((date - epoch()).num_days() as i32)
}

pub fn format_date(days: i32) -> String {
    let date = epoch() + chrono::Duration::days(days as i64);
    format!("{:04}-{:02}-{:02}", date.year(), date.month(), date.day())
}

/// Days since epoch for a calendar date; panics on an invalid date.
pub fn date_from_ymd(year: i32, month: u32, day: u32) -> i32 {
    let date = NaiveDate::from_ymd_opt(year, month, day).expect("valid calendar date");
    (date - epoch()).num_days() as i32
}

/// `(year, month, day)` for days since epoch.
pub fn ymd_from_days(days: i32) -> (i32, u32, u32) {
    let date = epoch() + chrono::Duration::days(days as i64);
    (date.year(), date.month(), date.day())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kinds() {
        assert_eq!("INT64".parse::<DataType>().unwrap(), DataType::Int64);
        assert_eq!(
            "decimal(15, 2)".parse::<DataType>().unwrap(),
            DataType::Decimal {
                precision: 15,
                scale: 2
            }
        );
        assert_eq!("varchar(25)".parse::<DataType>().unwrap(), DataType::Text);
        assert!("float".parse::<DataType>().is_err());
        assert!("decimal(2,3)".parse::<DataType>().is_err());
    }

    #[test]
    fn schema_spec_with_decimal_commas() {
        let schema =
            parse_schema("o_orderkey:int64, o_totalprice:decimal(15,2),o_orderstatus:text")
                .unwrap();
        assert_eq!(schema.len(), 3);
        assert_eq!(schema[1].data_type.scale(), 2);
        assert!(parse_schema("o_orderkey").is_err());
    }

    #[test]
    fn decimal_parse_is_exact() {
        assert_eq!(parse_decimal("12.340"), Some((12340, 3)));
        assert_eq!(parse_decimal("-0.5"), Some((-5, 1)));
        assert_eq!(parse_decimal("7"), Some((7, 0)));
        assert_eq!(parse_decimal("1.2.3"), None);
        assert_eq!(parse_decimal("abc"), None);
        assert_eq!(rescale_exact(12340, 3, 2), Some(1234));
        assert_eq!(rescale_exact(12345, 3, 2), None);
        assert_eq!(rescale_exact(5, 0, 2), Some(500));
    }

    #[test]
    fn decimal_values_keep_column_scale() {
        let ty = DataType::Decimal {
            precision: 15,
            scale: 2,
        };
        assert_eq!(
            Value::parse(ty, "1234.5").unwrap(),
            Value::Decimal {
                units: 123450,
                scale: 2
            }
        );
        assert!(Value::parse(ty, "1.234").is_err());
        assert_eq!(format_decimal(-123450, 2), "-1234.50");
        assert_eq!(format_decimal(5, 2), "0.05");
    }

    #[test]
    fn dates_round_trip() {
        let d = parse_date("1995-06-17").unwrap();
        assert_eq!(format_date(d), "1995-06-17");
        assert_eq!(parse_date("1970-01-01"), Some(0));
        assert_eq!(date_from_ymd(1970, 1, 2), 1);
        assert_eq!(ymd_from_days(d), (1995, 6, 17));
        assert!(parse_date("1995-13-01").is_none());
    }

    #[test]
    fn null_marker() {
        assert_eq!(Value::parse(DataType::Int64, "\\N").unwrap(), Value::Null);
        assert!(Value::parse(DataType::Int64, "abc").is_err());
    }
}
