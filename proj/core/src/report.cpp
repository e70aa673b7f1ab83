#include "branched/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace branched {

void CheckReport::record(const std::string& point, long double log_lhs,
                         long double log_rhs, long double slack_tol) {
    ++checked;
    const long double inf = std::numeric_limits<long double>::infinity();
    long double slack;
    if (std::isinf(log_lhs) && log_lhs < 0) {
        slack = -inf;  // lhs is zero, bound holds for free
    } else if (std::isinf(log_rhs) && log_rhs < 0) {
        slack = inf;
    } else {
        slack = log_lhs - log_rhs;
    }
    if (slack > worst_slack) {
        worst_slack = static_cast<double>(slack);
        worst_point = point;
    }
    if (slack > slack_tol) {
        ++violations;
        if (witnesses.size() < 8) {
            Witness w;
            w.point = point;
            w.log_lhs = static_cast<double>(log_lhs);
            w.log_rhs = static_cast<double>(log_rhs);
            w.slack = static_cast<double>(slack);
            witnesses.push_back(std::move(w));
        }
    }
}

static double json_safe(double x) {
    if (std::isnan(x)) return 0.0;
    if (std::isinf(x)) return x > 0 ? 1e308 : -1e308;
    return x;
}

nlohmann::json report_to_json(const CheckReport& r) {
    nlohmann::json j;
    j["suite"] = r.suite;
    j["params"] = r.params;
    j["checked"] = r.checked;
    j["violations"] = r.violations;
    j["pass"] = r.pass();
    j["worst_slack"] = json_safe(r.worst_slack);
    j["worst_point"] = r.worst_point;
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : r.witnesses) {
        nlohmann::json jw;
        jw["point"] = w.point;
        jw["log_lhs"] = json_safe(w.log_lhs);
        jw["log_rhs"] = json_safe(w.log_rhs);
        jw["slack"] = json_safe(w.slack);
        ws.push_back(std::move(jw));
    }
    j["witnesses"] = std::move(ws);
    j["notes"] = r.notes;
    return j;
}

void save_reports_json(const std::vector<CheckReport>& reports,
                       const std::string& file, const nlohmann::json& config,
                       bool with_timestamp) {
    nlohmann::json j;
    j["schema"] = 1;
    j["config"] = config;
    if (with_timestamp) {
        auto now = std::chrono::system_clock::now();
        j["timestamp"] =
            std::chrono::duration_cast<std::chrono::seconds>(
                now.time_since_epoch())
                .count();
    }
    nlohmann::json rs = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass();
        rs.push_back(report_to_json(r));
    }
    j["reports"] = std::move(rs);
    j["all_pass"] = all_pass;
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open output file: " + file);
    out << j.dump(2) << "\n";
}

std::string render_reports_text(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    for (const auto& r : reports) {
        os << (r.pass() ? "[pass] " : "[FAIL] ") << r.suite << "  checked="
           << r.checked << " violations=" << r.violations;
        if (r.checked > 0 && std::isfinite(r.worst_slack)) {
            os << " worst_slack=" << r.worst_slack;
            if (!r.worst_point.empty()) os << " at " << r.worst_point;
        }
        os << "\n";
        if (!r.notes.empty()) os << "       " << r.notes << "\n";
        for (const auto& w : r.witnesses) {
            os << "       violation at " << w.point << ": log_lhs=" << w.log_lhs
               << " log_rhs=" << w.log_rhs << "\n";
        }
    }
    return os.str();
}

nlohmann::json character_to_json(const Character<Rational>& X) {
    nlohmann::json j;
    j["value_type"] = "rational";
    j["max_degree"] = X.max_degree();
    j["alphabet"] = X.alphabet();
    nlohmann::json vals = nlohmann::json::object();
    for (const auto& [key, entry] : X.entries()) {
        vals[key] = entry.second.str();
    }
    j["values"] = std::move(vals);
    return j;
}

Character<Rational> character_from_json(const nlohmann::json& j) {
    if (j.at("value_type").get<std::string>() != "rational")
        throw std::invalid_argument("expected a rational-valued character");
    Character<Rational> X(j.at("max_degree").get<int>(),
                          j.at("alphabet").get<int>());
    for (const auto& [key, val] : j.at("values").items()) {
        X.set(parse_forest(key), Rational(val.get<std::string>()));
    }
    return X;
}

nlohmann::json character_to_json(const Character<double>& X) {
    nlohmann::json j;
    j["value_type"] = "double";
    j["max_degree"] = X.max_degree();
    j["alphabet"] = X.alphabet();
    nlohmann::json vals = nlohmann::json::object();
    for (const auto& [key, entry] : X.entries()) {
        vals[key] = entry.second;
    }
    j["values"] = std::move(vals);
    return j;
}

}  // namespace branched
