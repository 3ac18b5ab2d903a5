#pragma once

#include <json.hpp>

#include "lsr/canonical.hpp"
#include "lsr/experiments.hpp"
#include "lsr/spectrum.hpp"
#include "lsr/words.hpp"

// JSON shapes for the library's value types (certificates have their own
// serializer in certificate.hpp).
namespace lsr {

inline nlohmann::json to_json(const CanonicalPair& c) {
    return {{"gamma", c.gamma},
            {"lambda", c.lambda},
            {"alpha", c.alpha},
            {"theta", c.theta},
            {"basis", c.basis.flat()}};
}

inline nlohmann::json to_json(const LsrEstimate& e) {
    nlohmann::json j{{"value", e.value},
                     {"truncation", e.truncation},
                     {"status", lsr_status_name(e.status)}};
    if (e.argmin) j["argmin"] = *e.argmin;
    if (e.per_n) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& [n, v] : *e.per_n) rows.push_back({{"n", n}, {"value", v}});
        j["per_n"] = std::move(rows);
    }
    return j;
}

inline nlohmann::json to_json(const RatioBound& r) {
    return {{"theta0", r.theta0}, {"c0", r.c0}, {"grid_points", r.grid_points}};
}

inline nlohmann::json to_json(const ZeroProductCert& z) {
    return {{"m", z.m},
            {"residual_trace", z.residual_trace},
            {"residual_product", z.residual_product}};
}

inline nlohmann::json to_json(const NewFormulaReport& r) {
    nlohmann::json j{{"L_max", r.L_max},
                     {"words_checked", r.words_checked},
                     {"violations", r.violations},
                     {"worst_slack", r.worst_slack}};
    if (r.worst_word) j["worst_word"] = r.worst_word->to_string();
    return j;
}

inline nlohmann::json to_json(const GrowthTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows)
        rows.push_back({{"length", row.length},
                        {"min_rho", row.min_rho},
                        {"min_norm", row.min_norm},
                        {"argmin_word", row.argmin_rho.to_string()}});
    return {{"rows", std::move(rows)}};
}

inline nlohmann::json to_json(const MeasureStats& s, bool with_rows = false) {
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& [n, c] : s.argmin_histogram) hist.push_back({{"argmin", n}, {"count", c}});
    nlohmann::json j{{"samples", s.samples},
                     {"truncation", s.truncation},
                     {"seed", s.seed},
                     {"attained_positive_fraction", s.attained_positive_fraction},
                     {"zero_fraction", s.zero_fraction},
                     {"undetermined_fraction", s.undetermined_fraction},
                     {"argmin_histogram", std::move(hist)}};
    if (with_rows) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : s.rows)
            rows.push_back({{"index", row.index},
                            {"theta", row.theta},
                            {"value", row.value},
                            {"argmin", row.argmin},
                            {"status", lsr_status_name(row.status)}});
        j["rows"] = std::move(rows);
    }
    return j;
}

inline nlohmann::json to_json(const PairClass& p) {
    nlohmann::json j{{"label", pair_label_name(p.label)},
                     {"heuristic", p.heuristic},
                     {"canonical", to_json(p.canonical)},
                     {"estimate", to_json(p.estimate)},
                     {"has_certificate", p.has_certificate}};
    if (p.zero_cert) j["zero_product"] = to_json(*p.zero_cert);
    return j;
}

}  // namespace lsr
