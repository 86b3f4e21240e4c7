// Copyright 2026 The d2d-ee Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "d2dee/power.hpp"

namespace d2dee {

/// What to do with pairs that cannot be given an admissible RB.
///  strict           every pair must be assigned, otherwise InfeasibleError
///  drop_infeasible  pairs without an admissible RB are left unassigned
enum class AssignmentPolicy { strict, drop_infeasible };

inline constexpr int kUnassigned = -1;

struct Assignment {
  std::vector<int> rb_of_pair;      // kUnassigned for dropped pairs
  double total_utility = 0;         // sum of selected entries, in pair order
  std::vector<int> dropped_pairs;   // ascending

  int assigned_count() const { return static_cast<int>(rb_of_pair.size() - dropped_pairs.size()); }
};

/// Entries at or below this are treated as forbidden.
inline bool is_forbidden(double utility) { return utility <= 0.5 * kInfeasibleUtility; }

/// Equality used for tie-breaking between assignment totals.
bool utilities_tie(double a, double b);

/// Maximum-weight injective assignment of rows (pairs) to columns (RBs).
///
/// Among optimal assignments the lexicographically smallest rb_of_pair is
/// returned. Throws SizeError when rows > cols, InfeasibleError under the strict
/// policy when every complete assignment touches a forbidden entry. Under
/// drop_infeasible the number of assigned pairs is maximised first, then the
/// total utility.
Assignment max_weight_assignment(const Eigen::MatrixXd& utilities,
                                 AssignmentPolicy policy = AssignmentPolicy::strict);

/// Exhaustive enumeration; forbidden entries count at face value. Rows <= cols <= 10.
Assignment brute_force_assignment(const Eigen::MatrixXd& utilities);

}  // namespace d2dee
