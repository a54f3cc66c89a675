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

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::CatalogError;

pub type UdfFn = dyn Fn(&[f64]) -> Result<f64, String> + Send + Sync;

/// A registered pure scalar function over numeric arguments.
#[derive(Clone)]
pub struct ScalarUdf {
    name: String,
    arity: usize,
    func: Arc<UdfFn>,
}

impl ScalarUdf {
    pub fn new(name: impl Into<String>, arity: usize, func: Arc<UdfFn>) -> Self {
        Self {
            name: name.into(),
            arity,
            func,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn call(&self, args: &[f64]) -> Result<f64, String> {
        (self.func)(args)
    }
}

impl fmt::Debug for ScalarUdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarUdf({}/{})", self.name, self.arity)
    }
}

impl PartialEq for ScalarUdf {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.arity == other.arity
    }
}

#[derive(Debug, Default, Clone)]
pub struct UdfRegistry {
    functions: BTreeMap<String, Arc<ScalarUdf>>,
}

impl UdfRegistry {
    pub fn register<F>(&mut self, name: &str, arity: usize, func: F) -> Result<(), CatalogError>
    where
        F: Fn(&[f64]) -> Result<f64, String> + Send + Sync + 'static,
    {
        let key = name.to_ascii_lowercase();
        if self.functions.contains_key(&key) {
            return Err(CatalogError::DuplicateFunction(key));
        }
        self.functions.insert(
            key.clone(),
            Arc::new(ScalarUdf::new(key, arity, Arc::new(func))),
        );
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<Arc<ScalarUdf>> {
        self.functions.get(name).cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn register_and_call() {
        let mut reg = UdfRegistry::default();
        reg.register("udf", 2, |a| Ok(a[0] + a[1])).unwrap();
        let f = reg.get("udf").unwrap();
        assert_eq!(f.arity(), 2);
        assert_eq!(f.call(&[1.0, 2.5]).unwrap(), 3.5);
        assert!(matches!(
            reg.register("UDF", 1, |a| Ok(a[0])),
            Err(CatalogError::DuplicateFunction(_))
        ));
    }
}
