#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "branched/character.hpp"
#include "branched/rational.hpp"

namespace branched {

// One grid point worth keeping: where a check was tightest or violated.
struct Witness {
    std::string point;
    double log_lhs = 0;
    double log_rhs = 0;
    double slack = 0;  // log_lhs - log_rhs; positive means violated
};

// Outcome of one verification suite over its whole grid.
struct CheckReport {
    std::string suite;
    std::map<std::string, std::string> params;
    long long checked = 0;
    long long violations = 0;
    // max over the grid of log(lhs) - log(rhs); <= tolerance on a pass.
    double worst_slack = -std::numeric_limits<double>::infinity();
    std::string worst_point;
    std::vector<Witness> witnesses;
    std::string notes;

    bool pass() const { return violations == 0; }

    // Record one comparison lhs <= rhs (log scale), keeping the worst point
    // and up to eight violation witnesses.
    void record(const std::string& point, long double log_lhs,
                long double log_rhs, long double slack_tol);
};

nlohmann::json report_to_json(const CheckReport& r);
void save_reports_json(const std::vector<CheckReport>& reports,
                       const std::string& file, const nlohmann::json& config,
                       bool with_timestamp = true);
std::string render_reports_text(const std::vector<CheckReport>& reports);

nlohmann::json character_to_json(const Character<Rational>& X);
Character<Rational> character_from_json(const nlohmann::json& j);
nlohmann::json character_to_json(const Character<double>& X);

}  // namespace branched
