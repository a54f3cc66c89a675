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

//! Data generators, query templates and benchmark suites for the ESC engine.
pub mod gen;
pub mod queries;
pub mod report;
pub mod suites;

pub use report::{Arm, BenchReport, ReportRow};
pub use suites::{run_suite, BenchError, Suite, SuiteOptions};
