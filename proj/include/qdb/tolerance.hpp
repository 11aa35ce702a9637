// Copyright 2026 The qdb Authors
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

#pragma once

namespace qdb {

/// Every tolerance used by the library. Frobenius norms throughout.
/// Fields marked "relative" are scaled by the norm of the input.
struct ToleranceConfig {
  double herm_tol = 1e-10;    // relative, ||A - A^dag|| <= herm_tol * ||A||
  double psd_tol = 1e-9;      // relative to max(1, ||A||)
  double trace_tol = 1e-9;
  double tp_tol = 1e-9;
  double cj_tol = 1e-9;
  double eig_tol = 1e-11;     // relative off-diagonal norm after Jacobi
  double cluster_tol = 1e-8;  // scaled by max(1, ||A||)
  double rank_tol = 1e-10;    // scaled by the largest eigenvalue
  double projector_tol = 1e-9;
  double etdb_tol = 1e-9;
  double sqdb_tol = 1e-9;
  double inv_tol = 1e-9;
  double dual_agreement_tol = 1e-10;  // scaled by max(1, ||choi||)
  double classical_tol = 1e-12;
  double theta_state_tol = 1e-9;
  double involution_tol = 1e-10;
};

}  // namespace qdb
