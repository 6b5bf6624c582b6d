#pragma once

// Report bundle types and their CSV / Markdown / JSON emission. Emission is
// deterministic: identical bundles produce byte-identical documents.

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fintime/errors.hpp"
#include "fintime/linalg.hpp"
#include "fintime/version.hpp"

namespace fintime {

/// Shortest round-trip decimal form of v.
inline std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

/// One benchmark cell: fresh simulation vs the embedded reference values.
struct ExperimentRow {
    int n = 0;
    double x0_scale = 0.0;
    double gamma_seed = 0.0;
    double mu = 0.0;
    bool converged = false;
    double simulated_s = 0.0;
    double reference_simulated_s = 0.0;
    double reference_estimated_s = 0.0;
    double rate_vs_reference = 0.0;  // reference estimate / fresh simulated
    bool pass = false;
    std::string diagnostic;  // non-empty on blow-up or non-convergence

    bool operator==(const ExperimentRow&) const = default;
};

struct ScalarCheck {
    std::string name;
    std::string comparison;  // "abs_diff" or "greater"
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    bool operator==(const ScalarCheck&) const = default;
};

struct BenchConfigEcho {
    double step_h = 1e-4;
    std::string method = "rk4";
    double epsilon = 1e-6;
    double dwell = 1.0;
    double tolerance = 0.2;

    bool operator==(const BenchConfigEcho&) const = default;
};

struct ReportBundle {
    std::string toolkit_version{kToolkitVersion};
    std::string reference_version;
    BenchConfigEcho config;
    std::vector<ExperimentRow> rows;
    std::vector<ScalarCheck> checks;

    bool operator==(const ReportBundle&) const = default;
};

inline bool bundle_all_pass(const ReportBundle& b) {
    for (const auto& r : b.rows)
        if (!r.pass) return false;
    for (const auto& c : b.checks)
        if (!c.pass) return false;
    return true;
}

// --- JSON ---

inline void to_json(nlohmann::json& j, const ExperimentRow& r) {
    j = {{"n", r.n},
         {"x0_scale", r.x0_scale},
         {"gamma_seed", r.gamma_seed},
         {"mu", r.mu},
         {"converged", r.converged},
         {"simulated_s", r.simulated_s},
         {"reference_simulated_s", r.reference_simulated_s},
         {"reference_estimated_s", r.reference_estimated_s},
         {"rate_vs_reference", r.rate_vs_reference},
         {"pass", r.pass},
         {"diagnostic", r.diagnostic}};
}

inline void from_json(const nlohmann::json& j, ExperimentRow& r) {
    j.at("n").get_to(r.n);
    j.at("x0_scale").get_to(r.x0_scale);
    j.at("gamma_seed").get_to(r.gamma_seed);
    j.at("mu").get_to(r.mu);
    j.at("converged").get_to(r.converged);
    j.at("simulated_s").get_to(r.simulated_s);
    j.at("reference_simulated_s").get_to(r.reference_simulated_s);
    j.at("reference_estimated_s").get_to(r.reference_estimated_s);
    j.at("rate_vs_reference").get_to(r.rate_vs_reference);
    j.at("pass").get_to(r.pass);
    j.at("diagnostic").get_to(r.diagnostic);
}

inline void to_json(nlohmann::json& j, const ScalarCheck& c) {
    j = {{"name", c.name},         {"comparison", c.comparison}, {"value", c.value},
         {"expected", c.expected}, {"tolerance", c.tolerance},   {"pass", c.pass}};
}

inline void from_json(const nlohmann::json& j, ScalarCheck& c) {
    j.at("name").get_to(c.name);
    j.at("comparison").get_to(c.comparison);
    j.at("value").get_to(c.value);
    j.at("expected").get_to(c.expected);
    j.at("tolerance").get_to(c.tolerance);
    j.at("pass").get_to(c.pass);
}

inline void to_json(nlohmann::json& j, const BenchConfigEcho& c) {
    j = {{"step_h", c.step_h},
         {"method", c.method},
         {"epsilon", c.epsilon},
         {"dwell", c.dwell},
         {"tolerance", c.tolerance}};
}

inline void from_json(const nlohmann::json& j, BenchConfigEcho& c) {
    j.at("step_h").get_to(c.step_h);
    j.at("method").get_to(c.method);
    j.at("epsilon").get_to(c.epsilon);
    j.at("dwell").get_to(c.dwell);
    j.at("tolerance").get_to(c.tolerance);
}

inline void to_json(nlohmann::json& j, const ReportBundle& b) {
    j = {{"toolkit_version", b.toolkit_version},
         {"reference_version", b.reference_version},
         {"config", b.config},
         {"rows", b.rows},
         {"checks", b.checks}};
}

inline void from_json(const nlohmann::json& j, ReportBundle& b) {
    j.at("toolkit_version").get_to(b.toolkit_version);
    j.at("reference_version").get_to(b.reference_version);
    j.at("config").get_to(b.config);
    j.at("rows").get_to(b.rows);
    j.at("checks").get_to(b.checks);
}

/// Matrices serialize as arrays of rows (row-major order).
inline nlohmann::json matrix_json(const SquareMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json matrix_json(const SymmetricMatrix& m) { return matrix_json(m.full()); }

inline std::string emit_json(const ReportBundle& b) {
    nlohmann::json j = b;
    return j.dump(2) + "\n";
}

inline ReportBundle parse_bundle_json(const std::string& text) {
    try {
        return nlohmann::json::parse(text).get<ReportBundle>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("parse_bundle_json: ") + e.what());
    }
}

// --- CSV ---

inline std::string emit_csv(const ReportBundle& b) {
    std::ostringstream os;
    os << "n,x0,sim_s,ref_sim_s,ref_est_s,rate,pass\n";
    for (const auto& r : b.rows) {
        os << r.n << ',' << format_double(r.x0_scale) << ',' << format_double(r.simulated_s)
           << ',' << format_double(r.reference_simulated_s) << ','
           << format_double(r.reference_estimated_s) << ',' << format_double(r.rate_vs_reference)
           << ',' << (r.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

// --- Markdown ---

namespace detail {

inline std::string md_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

/// One table per dimension, mirroring the reference layout (columns are the
/// initial scales), plus a scalar-check section.
inline std::string emit_markdown(const ReportBundle& b) {
    std::ostringstream os;
    os << "# Convergence-time reproduction\n\n";
    os << "Config: h=" << format_double(b.config.step_h) << ", " << b.config.method
       << ", eps=" << format_double(b.config.epsilon) << ", dwell=" << format_double(b.config.dwell)
       << " s, tolerance=" << format_double(b.config.tolerance) << "\n";

    std::vector<int> dims;
    for (const auto& r : b.rows)
        if (dims.empty() || dims.back() != r.n) dims.push_back(r.n);

    for (int n : dims) {
        std::vector<const ExperimentRow*> cells;
        for (const auto& r : b.rows)
            if (r.n == n) cells.push_back(&r);
        os << "\n## n = " << n << "\n\n";
        os << "| Convergence time |";
        for (auto* c : cells) os << ' ' << detail::md_cell(c->x0_scale) << " |";
        os << "\n|---|";
        for (std::size_t i = 0; i < cells.size(); ++i) os << "---|";
        os << "\n| Simulated (s) |";
        for (auto* c : cells)
            os << ' ' << (c->converged ? detail::md_cell(c->simulated_s) : "n/a") << " |";
        os << "\n| Reference simulated (s) |";
        for (auto* c : cells) os << ' ' << detail::md_cell(c->reference_simulated_s) << " |";
        os << "\n| Reference estimated (s) |";
        for (auto* c : cells) os << ' ' << detail::md_cell(c->reference_estimated_s) << " |";
        os << "\n| Rate vs reference estimate |";
        for (auto* c : cells)
            os << ' ' << (c->converged ? detail::md_cell(c->rate_vs_reference) : "n/a") << " |";
        os << "\n| Pass |";
        for (auto* c : cells) os << (c->pass ? " yes |" : " **no** |");
        os << "\n";
    }

    os << "\n## Scalar checks\n\n";
    os << "| Check | Value | Expected | Tolerance | Pass |\n|---|---|---|---|---|\n";
    for (const auto& c : b.checks) {
        os << "| " << c.name << " | " << format_double(c.value) << " | "
           << (c.comparison == "greater" ? "> " : "") << format_double(c.expected) << " | "
           << format_double(c.tolerance) << " | " << (c.pass ? "yes" : "**no**") << " |\n";
    }
    return os.str();
}

}  // namespace fintime
