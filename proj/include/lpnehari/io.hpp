#pragma once

// JSON interchange for symbols, certificates, and reports.
//
// The symbol format is the interchange unit for every CLI command:
//     {"rows": m, "cols": n,
//      "entries": [[{"coeffs": [[k, re, im], ...]}, ...], ...]}
// with `entries` a rows x cols grid and `k` a signed frequency.  Parsing
// errors name the offending JSON path.  Serialization uses ordered maps and
// shortest-round-trip doubles, so identical inputs produce identical bytes.

#include <stdexcept>
#include <string>
#include <vector>

#include "lpnehari/approx.hpp"
#include "lpnehari/factorize.hpp"
#include "lpnehari/hankel.hpp"
#include "lpnehari/superopt.hpp"
#include "lpnehari/symbol.hpp"
#include "lpnehari/weird.hpp"
#include "json.hpp"

namespace lpnehari {

using Json = nlohmann::ordered_json;

/// Malformed input, carrying the JSON path of the offending element.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& path, const std::string& what)
        : std::runtime_error("schema error at " + path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

namespace detail {

inline const Json& require_field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path, std::string("missing field \"") + key + "\"");
    return *it;
}

inline int require_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<int>();
}

inline double require_number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

inline const Json& require_array(const Json& j, const std::string& path) {
    if (!j.is_array()) throw SchemaError(path, "expected an array");
    return j;
}

}  // namespace detail

inline Json symbol_to_json(const TrigSymbol& s) {
    Json out;
    out["rows"] = s.rows();
    out["cols"] = s.cols();
    Json entries = Json::array();
    for (int i = 0; i < s.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < s.cols(); ++j) {
            Json coeffs = Json::array();
            for (int k = s.min_freq(); k <= s.max_freq(); ++k) {
                const Complex c = s.coeff(k)(i, j);
                if (c == Complex(0, 0)) continue;
                coeffs.push_back(Json::array({k, c.real(), c.imag()}));
            }
            row.push_back(Json{{"coeffs", std::move(coeffs)}});
        }
        entries.push_back(std::move(row));
    }
    out["entries"] = std::move(entries);
    return out;
}

inline TrigSymbol symbol_from_json(const Json& j, const std::string& path = "$") {
    const int rows = detail::require_int(detail::require_field(j, "rows", path), path + ".rows");
    const int cols = detail::require_int(detail::require_field(j, "cols", path), path + ".cols");
    if (rows <= 0 || cols <= 0) throw SchemaError(path, "rows and cols must be positive");
    const Json& entries = detail::require_array(detail::require_field(j, "entries", path), path + ".entries");
    if (static_cast<int>(entries.size()) != rows)
        throw SchemaError(path + ".entries", "expected " + std::to_string(rows) + " rows");

    TrigSymbol s(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const std::string rpath = path + ".entries[" + std::to_string(i) + "]";
        const Json& row = detail::require_array(entries[static_cast<std::size_t>(i)], rpath);
        if (static_cast<int>(row.size()) != cols)
            throw SchemaError(rpath, "expected " + std::to_string(cols) + " columns");
        for (int c = 0; c < cols; ++c) {
            const std::string epath = rpath + "[" + std::to_string(c) + "]";
            const Json& coeffs =
                detail::require_array(detail::require_field(row[static_cast<std::size_t>(c)], "coeffs", epath),
                                      epath + ".coeffs");
            for (std::size_t t = 0; t < coeffs.size(); ++t) {
                const std::string cpath = epath + ".coeffs[" + std::to_string(t) + "]";
                const Json& triple = detail::require_array(coeffs[t], cpath);
                if (triple.size() != 3) throw SchemaError(cpath, "expected [k, re, im]");
                const int k = detail::require_int(triple[0], cpath + "[0]");
                const double re = detail::require_number(triple[1], cpath + "[1]");
                const double im = detail::require_number(triple[2], cpath + "[2]");
                CMat m = s.coeff(k);
                m(i, c) += Complex(re, im);
                s.set_coeff(k, m);
            }
        }
    }
    return s.trimmed(0.0);
}

inline Json certificate_to_json(const ApproximationCertificate& c) {
    Json out;
    out["p"] = c.p;
    out["grid_size"] = c.grid_size;
    out["primal"] = c.primal_value;
    out["dual"] = c.dual_value;
    out["gap_rel"] = c.gap_rel;
    out["conclusive"] = c.conclusive;
    out["dual_feasibility"] = c.dual_feasibility;
    out["ladder"] = Json{{"degrees", c.ladder_degrees}, {"primal", c.ladder_primal}, {"dual", c.ladder_dual}};
    out["Q"] = symbol_to_json(c.Q);
    out["Psi"] = symbol_to_json(c.Psi);
    out["distance_profile"] = c.distance_profile;
    return out;
}

inline Json search_report_to_json(const NormSearchReport& r, bool include_witness = true) {
    Json out;
    out["best_value"] = r.best_value;
    out["restart_values"] = r.restart_values;
    out["plateau_spread"] = r.plateau_spread;
    out["recompute_gap"] = r.recompute_gap;
    out["modal_rank"] = r.modal_rank;
    out["upper_bound_respected"] = r.upper_bound_respected;
    if (include_witness) out["witness"] = symbol_to_json(r.witness);
    return out;
}

inline Json respectability_to_json(const RespectabilityReport& r) {
    Json out;
    const char* verdict = r.verdict == Respectability::Respectable     ? "respectable"
                          : r.verdict == Respectability::WeirdEvidence ? "weird-evidence"
                                                                       : "inconclusive";
    out["verdict"] = verdict;
    out["distance"] = r.distance;
    out["best_k1"] = r.best_k1;
    out["per_degree"] = r.per_degree;
    out["used_rank_one_warm_start"] = r.used_rank_one_warm_start;
    out["certificate"] = certificate_to_json(r.cert);
    return out;
}

inline Json order_to_json(const OrderReport& r) {
    Json out;
    out["order"] = r.order;
    out["values_by_k"] = r.values_by_k;
    out["distance"] = r.distance;
    out["dual_modal_rank"] = r.dual_modal_rank;
    out["consistent"] = r.consistent;
    out["certificate"] = certificate_to_json(r.cert);
    return out;
}

inline Json bad_scalar_to_json(const BadScalar& b) {
    Json out;
    out["distance"] = b.distance;
    out["phi"] = symbol_to_json(b.phi);
    out["inner"] = symbol_to_json(b.inner);
    out["outer"] = symbol_to_json(b.outer);
    return out;
}

inline Json bundle_to_json(const FactorizationBundle& b) {
    Json out;
    out["k"] = b.k;
    out["offdiag_residual"] = b.offdiag_residual;
    out["unimodular_residual"] = b.unimodular_residual;
    out["bound_residual"] = b.bound_residual;
    out["V"] = symbol_to_json(b.V);
    out["W"] = symbol_to_json(b.W);
    out["v"] = symbol_to_json(b.v);
    out["w"] = symbol_to_json(b.w);
    out["Delta"] = symbol_to_json(b.Delta);
    out["PhiSharp"] = symbol_to_json(b.PhiSharp);
    out["Q"] = symbol_to_json(b.Q);
    out["h"] = symbol_to_json(b.h);
    out["kappa"] = symbol_to_json(b.kappa);
    out["distance_profile"] = b.distance_profile;
    return out;
}

inline Json weird_construction_to_json(const WeirdConstruction& w, bool include_symbols = true) {
    Json out;
    out["degree"] = w.degree;
    out["unitary_residual"] = w.unitary_residual;
    out["dual_identity_residual"] = w.dual_identity_residual;
    out["trace_residual"] = w.trace_residual;
    out["dual_trace_norm_residual"] = w.dual_trace_norm_residual;
    out["tail_mass"] = w.tail_mass;
    if (include_symbols) {
        out["B"] = symbol_to_json(w.B);
        out["U"] = symbol_to_json(w.U);
        out["dual"] = symbol_to_json(w.dual);
    }
    return out;
}

inline Json superopt_to_json(const SuperoptimalResult& s) {
    Json out;
    out["tau1"] = s.tau1;
    out["tau2"] = s.tau2;
    out["flat1_residual"] = s.flat1_residual;
    out["flat2_residual"] = s.flat2_residual;
    out["hankel_value"] = s.hankel_value;
    out["distance"] = s.distance;
    out["R"] = symbol_to_json(s.R);
    out["reduced"] = Json{{"error", s.reduced.error},
                          {"flatness_residual", s.reduced.flatness_residual},
                          {"best", symbol_to_json(s.reduced.best)}};
    out["bundle"] = bundle_to_json(s.bundle);
    out["profile"] = Json{{"tau1", s.profile.tau1},
                          {"tau2", s.profile.tau2},
                          {"s1_over_d", s.profile.s1_over_d},
                          {"s2_over_d", s.profile.s2_over_d}};
    out["certificate"] = certificate_to_json(s.cert);
    return out;
}

}  // namespace lpnehari
