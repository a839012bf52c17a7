// Copyright 2026 The weier Authors
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

#ifndef WEIER_VERIFY_HPP
#define WEIER_VERIFY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weier/expr.hpp"
#include "weier/numerics.hpp"

namespace weier
{

struct IdentityCase {
    std::string name;
    int sample_count = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string notes;
};

/// Values of the questions the suite settles numerically.
struct Findings {
    int wp_s_law_exponent = 0;
    double wp_s_law_residual_weight1 = 0.0;
    double wp_s_law_residual_weight2 = 0.0;
    std::string zeta_three_term_sign;
    double zeta_three_term_residual_plus = 0.0;
    double zeta_three_term_residual_minus = 0.0;
    std::string duplication_sign;
    double duplication_residual_plus = 0.0;
    double duplication_residual_minus = 0.0;
    int duplication_branch_hits = 0;
};

struct IdentityReport {
    std::vector<IdentityCase> cases;
    std::uint64_t seed = 0;
    TolerancePolicy policy;
    std::string timestamp;
    Findings findings;

    bool all_passed() const;
    const IdentityCase *find(const std::string &name) const;
};

/// Tolerance configuration: policy plus per-case overrides.
struct SuiteConfig {
    TolerancePolicy policy;
    std::map<std::string, double> case_tolerances;
};

/// Reads key=value lines; '#' starts a comment. Keys are the TolerancePolicy
/// field names and case.<name>. Unknown keys are InvalidArgument.
SuiteConfig load_suite_config(const std::string &path);
SuiteConfig parse_suite_config(const std::string &text);

/// $WEIER_TOL_FILE if set, otherwise the given fallback.
std::string resolve_config_path(const std::string &fallback);

struct SuiteOptions {
    const DerivativeRules *rules = nullptr; // null means default_rules()
    std::vector<std::string> only;          // empty means every case
    std::map<std::string, double> case_tolerances;
    bool with_timestamp = true;
};

std::vector<std::string> identity_case_names();

/// Default tolerance of a case under the given policy.
double default_case_tolerance(const std::string &name, const TolerancePolicy &policy);

IdentityReport run_identity_suite(std::uint64_t seed, const TolerancePolicy &policy = {},
                                  const SuiteOptions &options = {});

nlohmann::json to_json(const IdentityReport &report);
std::string to_csv(const IdentityReport &report);

} // namespace weier

#endif
