// lpnehari: batch front end for the L^p analytic-approximation library.
//
// One command per process.  Every command writes a single self-describing
// JSON artifact (stdout or --out) embedding the full run configuration, so a
// result can be reproduced from its own bytes.  Exit codes: 0 success,
// 2 inconclusive, 1 error.  Env var LPNEHARI_THREADS caps parallelism.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lpnehari/analytic.hpp"
#include "lpnehari/approx.hpp"
#include "lpnehari/expr.hpp"
#include "lpnehari/factorize.hpp"
#include "lpnehari/io.hpp"
#include "lpnehari/parallel.hpp"
#include "lpnehari/superopt.hpp"
#include "lpnehari/weird.hpp"
#include "CLI11.hpp"

namespace {

using namespace lpnehari;

struct CommonOpts {
    double p = 4.0;
    int grid = 512;
    std::vector<int> degrees;  // empty = per-command default
    int restarts = 20;
    std::uint64_t seed = 1;
    double tol_gap = 5e-3;
    double tol_match = 1e-2;
    double tol_flat = 1e-2;
    std::string symbol_path, expr_text, out_path, csv_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_symbol) {
    cmd->add_option("--p", o.p, "Lebesgue exponent, 2 <= p < infinity")->check(CLI::Range(2.0, 1e9));
    cmd->add_option("--grid", o.grid, "number of circle nodes (power of two)");
    cmd->add_option("--degrees", o.degrees, "comma-separated degree ladder")->delimiter(',');
    cmd->add_option("--restarts", o.restarts, "random restarts per search")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "random seed for restart sweeps");
    cmd->add_option("--tol-gap", o.tol_gap, "relative duality gap accepted as conclusive");
    cmd->add_option("--tol-match", o.tol_match, "relative attainment tolerance");
    cmd->add_option("--tol-flat", o.tol_flat, "accepted singular-value ratio deviation");
    cmd->add_option("--out", o.out_path, "write the JSON artifact to this file (default: stdout)");
    cmd->add_option("--csv", o.csv_path, "also write profile/plateau data as CSV");
    if (with_symbol) {
        cmd->add_option("--symbol", o.symbol_path, "input symbol (JSON file)");
        cmd->add_option("--expr", o.expr_text, "inline scalar symbol literal, e.g. \"2z^-1+z^-2\"");
    }
}

CircleGrid make_grid(const CommonOpts& o) {
    if (o.grid < 8 || (o.grid & (o.grid - 1)) != 0)
        throw std::invalid_argument("--grid must be a power of two, at least 8");
    return CircleGrid(o.grid);
}

TrigSymbol load_symbol(const CommonOpts& o) {
    if (!o.expr_text.empty() && !o.symbol_path.empty())
        throw std::invalid_argument("give either --symbol or --expr, not both");
    if (!o.expr_text.empty()) return parse_scalar_poly(o.expr_text);
    if (o.symbol_path.empty()) throw std::invalid_argument("an input symbol is required: --symbol FILE or --expr \"...\"");
    std::ifstream in(o.symbol_path);
    if (!in) throw std::runtime_error("cannot open " + o.symbol_path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(o.symbol_path + ": " + e.what());
    }
    return symbol_from_json(j);
}

std::vector<int> ladder_or(const CommonOpts& o, std::vector<int> fallback) {
    return o.degrees.empty() ? std::move(fallback) : o.degrees;
}

Json config_json(const CommonOpts& o, const std::string& command, const std::vector<int>& degrees) {
    Json cfg;
    cfg["command"] = command;
    cfg["p"] = o.p;
    cfg["grid"] = o.grid;
    cfg["degrees"] = degrees;
    cfg["restarts"] = o.restarts;
    cfg["seed"] = o.seed;
    cfg["tol_gap"] = o.tol_gap;
    cfg["tol_match"] = o.tol_match;
    cfg["tol_flat"] = o.tol_flat;
    cfg["threads"] = thread_cap();
    if (!o.symbol_path.empty()) cfg["symbol"] = o.symbol_path;
    if (!o.expr_text.empty()) cfg["expr"] = o.expr_text;
    return cfg;
}

void emit(const CommonOpts& o, const Json& artifact) {
    std::string text = artifact.dump(2);
    text.push_back('\n');
    if (o.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out_path);
        if (!f) throw std::runtime_error("cannot write " + o.out_path);
        f << text;
    }
}

void write_csv(const std::string& path, const std::string& header, const std::vector<std::vector<double>>& columns) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << header << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    f.precision(17);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) f << (c ? "," : "") << columns[c][r];
        f << '\n';
    }
}

CertifyOptions certify_opts(const CommonOpts& o, const std::vector<int>& degrees) {
    CertifyOptions c;
    c.degrees = degrees;
    c.tol_gap = o.tol_gap;
    return c;
}

ClassificationOptions classify_opts(const CommonOpts& o, const std::vector<int>& windows) {
    ClassificationOptions c;
    c.window_degrees = windows;
    c.search.restarts = o.restarts;
    c.search.seed = o.seed;
    c.cert = certify_opts(o, {8, 16, 32, 64});
    c.tol_match = o.tol_match;
    return c;
}

// ---------------------------------------------------------------------------

int cmd_dist(const CommonOpts& o) {
    const CircleGrid grid = make_grid(o);
    const TrigSymbol Phi = load_symbol(o);
    const ExponentTriple e(o.p);
    const std::vector<int> degrees = ladder_or(o, {8, 16, 32, 64});
    const ApproximationCertificate cert = certify(Phi, e, grid, certify_opts(o, degrees));

    Json out;
    out["config"] = config_json(o, "dist", degrees);
    out["exercises"] = Json::array({"analytic-distance-certificate", "primal-dual-gap"});
    out["primal"] = cert.primal_value;
    out["dual"] = cert.dual_value;
    out["gap"] = cert.gap_rel;
    out["certificate"] = certificate_to_json(cert);
    emit(o, out);
    if (!o.csv_path.empty()) {
        std::vector<double> node(cert.distance_profile.size());
        for (std::size_t j = 0; j < node.size(); ++j) node[j] = static_cast<double>(j);
        write_csv(o.csv_path, "node,distance", {node, cert.distance_profile});
    }
    return cert.conclusive ? 0 : 2;
}

int cmd_respectable(const CommonOpts& o) {
    const CircleGrid grid = make_grid(o);
    const TrigSymbol Phi = load_symbol(o);
    const ExponentTriple e(o.p);
    const std::vector<int> windows = ladder_or(o, {16, 32, 64});
    const RespectabilityReport rep = respectability_test(Phi, e, grid, classify_opts(o, windows));

    Json out;
    out["config"] = config_json(o, "respectable", windows);
    out["exercises"] = Json::array({"rank-one-attainment-dichotomy", "single-column-hankel-search"});
    out.update(respectability_to_json(rep));
    emit(o, out);
    return rep.verdict == Respectability::Inconclusive ? 2 : 0;
}

int cmd_order(const CommonOpts& o) {
    const CircleGrid grid = make_grid(o);
    const TrigSymbol Phi = load_symbol(o);
    const ExponentTriple e(o.p);
    const std::vector<int> windows = ladder_or(o, {16, 32, 64});
    const OrderReport rep = order_estimate(Phi, e, grid, classify_opts(o, windows));

    Json out;
    out["config"] = config_json(o, "order", windows);
    out["exercises"] = Json::array({"column-count-attainment", "dual-witness-rank"});
    out.update(order_to_json(rep));
    emit(o, out);
    return (rep.cert.conclusive && rep.consistent) ? 0 : 2;
}

// ---------------------------------------------------------------------------

std::vector<Complex> parse_zeros(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text.empty() ? "[]" : text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("--inner-zeros: ") + e.what());
    }
    if (!j.is_array()) throw std::invalid_argument("--inner-zeros: expected a JSON array");
    std::vector<Complex> zeros;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& z = j[i];
        if (z.is_number()) {
            zeros.emplace_back(z.get<double>(), 0.0);
        } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
            zeros.emplace_back(z[0].get<double>(), z[1].get<double>());
        } else {
            throw std::invalid_argument("--inner-zeros[" + std::to_string(i) + "]: expected a number or [re, im]");
        }
        if (std::abs(zeros.back()) >= 1.0)
            throw std::invalid_argument("--inner-zeros[" + std::to_string(i) + "]: zeros must lie inside the disk");
    }
    return zeros;
}

/// An analytic nonvanishing function is outer exactly when |f(0)| attains
/// the geometric mean of its boundary modulus.
void require_outer(const TrigSymbol& h, const CircleGrid& grid, const std::string& label) {
    if (!h.is_analytic(1e-12)) throw std::invalid_argument(label + " must be analytic");
    const GridSamples hs = h.samples(grid);
    double logmean = 0.0, minmod = std::numeric_limits<double>::infinity();
    for (const CMat& m : hs) {
        const double a = std::abs(m(0, 0));
        minmod = std::min(minmod, a);
        logmean += std::log(std::max(a, 1e-300));
    }
    logmean /= static_cast<double>(hs.size());
    if (minmod <= 0.0) throw std::invalid_argument(label + " vanishes on the circle");
    const double h0 = std::abs(h.coeff(0)(0, 0));
    if (std::abs(h0 - std::exp(logmean)) > 1e-8 * std::exp(logmean))
        throw std::invalid_argument(label + " is not outer (it has zeros inside the disk)");
}

int cmd_generate_bad_scalar(const CommonOpts& o, const std::string& outer_h, const std::string& inner_zeros) {
    const CircleGrid grid = make_grid(o);
    const ExponentTriple e(o.p);
    const TrigSymbol h = parse_scalar_poly(outer_h);
    require_outer(h, grid, "--outer-h");
    const std::vector<Complex> zeros = parse_zeros(inner_zeros);

    TrigSymbol theta = TrigSymbol::monomial(0);
    double truncation = 0.0;
    if (!zeros.empty()) {
        BlaschkeResult b = blaschke(zeros, grid);
        theta = b.symbol;
        truncation = b.truncation_residual;
    }
    const BadScalar bad = badly_approximable_scalar(e, theta, h, grid);

    Json out;
    out["config"] = config_json(o, "generate bad-scalar", {});
    out["config"]["outer_h"] = outer_h;
    out["config"]["inner_zeros"] = inner_zeros.empty() ? "[]" : inner_zeros;
    out["exercises"] = Json::array({"badly-approximable-scalar-generator", "inner-outer-recipe"});
    out["inner_truncation_residual"] = truncation;
    out.update(bad_scalar_to_json(bad));
    emit(o, out);
    return 0;
}

TrigSymbol column_from_literals(const Json& arr, const std::string& path) {
    if (!arr.is_array() || arr.size() != 2) throw SchemaError(path, "expected two scalar literals");
    TrigSymbol a = parse_scalar_poly(arr[0].get<std::string>());
    TrigSymbol b = parse_scalar_poly(arr[1].get<std::string>());
    TrigSymbol col(2, 1);
    for (int k = std::min(a.min_freq(), b.min_freq()); k <= std::max(a.max_freq(), b.max_freq()); ++k) {
        CMat m(2, 1);
        m(0, 0) = a.coeff(k)(0, 0);
        m(1, 0) = b.coeff(k)(0, 0);
        col.set_coeff(k, m);
    }
    return col.trimmed(0.0);
}

/// Scales a column to pointwise unit norm; requires the norm profile to be
/// constant (that is what a single scalar factor can repair).
TrigSymbol normalize_column(const TrigSymbol& col, const CircleGrid& grid, const std::string& path) {
    const GridSamples cs = col.samples(grid);
    double mean = 0.0;
    for (const CMat& m : cs) mean += m.norm();
    mean /= static_cast<double>(cs.size());
    if (mean <= 0.0) throw SchemaError(path, "column vanishes");
    for (const CMat& m : cs)
        if (std::abs(m.norm() - mean) > 1e-8 * mean)
            throw SchemaError(path, "column norm is not constant on the circle; cannot normalize by a scalar");
    return col * (1.0 / mean);
}

int cmd_generate_bad_matrix(const CommonOpts& o, const std::string& recipe_path) {
    const CircleGrid grid = make_grid(o);
    const ExponentTriple e(o.p);

    std::ifstream in(recipe_path);
    if (!in) throw std::runtime_error("cannot open " + recipe_path);
    Json recipe;
    try {
        recipe = Json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::runtime_error(recipe_path + ": " + err.what());
    }
    if (!recipe.is_object()) throw SchemaError("$", "recipe must be an object");
    if (!recipe.contains("h")) throw SchemaError("$", "missing field \"h\"");
    if (!recipe.contains("phi_sharp")) throw SchemaError("$", "missing field \"phi_sharp\"");

    const TrigSymbol h = parse_scalar_poly(recipe["h"].get<std::string>());
    require_outer(h, grid, "recipe h");
    std::vector<Complex> zeros;
    if (recipe.contains("inner_zeros")) zeros = parse_zeros(recipe["inner_zeros"].dump());
    TrigSymbol theta = TrigSymbol::monomial(0);
    if (!zeros.empty()) theta = blaschke(zeros, grid).symbol;
    const BadScalar bad = badly_approximable_scalar(e, theta, h, grid);

    TrigSymbol PhiSharp = recipe["phi_sharp"].is_string() ? parse_scalar_poly(recipe["phi_sharp"].get<std::string>())
                                                          : symbol_from_json(recipe["phi_sharp"], "$.phi_sharp");
    if (PhiSharp.rows() != 1 || PhiSharp.cols() != 1) throw SchemaError("$.phi_sharp", "expected a 1x1 symbol");

    TrigSymbol v = TrigSymbol(2, 1);
    if (recipe.contains("v")) {
        v = normalize_column(column_from_literals(recipe["v"], "$.v"), grid, "$.v");
    } else {
        CMat m = CMat::Zero(2, 1);
        m(0, 0) = 1.0;
        v.set_coeff(0, m);
    }
    const ThematicResult tv = thematic_complete_2(v, grid);
    ThematicResult tw = tv;
    if (recipe.contains("w")) tw = thematic_complete_2(normalize_column(column_from_literals(recipe["w"], "$.w"), grid, "$.w"), grid);
    const TrigSymbol W = tw.V.transpose();

    const TrigSymbol Phi = build_badly_approximable_matrix(bad.phi, PhiSharp, tv.V, W, grid);

    Json out;
    out["config"] = config_json(o, "generate bad-matrix", {});
    out["config"]["recipe"] = recipe_path;
    out["exercises"] = Json::array({"badly-approximable-matrix-generator", "unitary-conjugation-recipe"});
    out["distance"] = bad.distance;
    out["Phi"] = symbol_to_json(Phi);
    out["Delta"] = symbol_to_json(bad.phi);
    out["PhiSharp"] = symbol_to_json(PhiSharp);
    out["V"] = symbol_to_json(tv.V);
    out["W"] = symbol_to_json(W);
    out["unitarity_residual"] = std::max(tv.unitarity_residual, tw.unitarity_residual);
    emit(o, out);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_weird_demo(const CommonOpts& o, int degree) {
    const CircleGrid grid = make_grid(o);
    if (grid.size() < 4 * degree)
        throw std::invalid_argument("--grid must be at least 4x the construction degree (" +
                                    std::to_string(4 * degree) + ")");
    const ExponentTriple e(o.p);

    const WeirdRecipe recipe = default_weird_recipe(grid);
    const WeirdConstruction wc = construct_weird_U(recipe.B, grid, degree);
    const WeirdDistanceEvidence dist = badly_approximable_evidence(wc, e, grid, certify_opts(o, {8, 16, 32, 64}));
    const double distance = dist.cert.dual_value;

    WeirdnessOptions wopt;
    wopt.degrees = ladder_or(o, {16, 32, 64});
    wopt.search.restarts = o.restarts;
    wopt.search.seed = o.seed;
    wopt.distance = distance;
    const WeirdnessEvidence ev = weirdness_evidence(wc, e, grid, wopt);

    const bool k2_attains = ev.best_k2 >= distance * (1.0 - o.tol_match);
    bool k1_short_everywhere = true;
    for (double v : ev.k1_values) k1_short_everywhere = k1_short_everywhere && v <= distance * (1.0 - 1e-3);
    const char* verdict = (dist.cert.conclusive && k2_attains && k1_short_everywhere) ? "weird-evidence" : "inconclusive";

    Json out;
    out["config"] = config_json(o, "weird-demo", wopt.degrees);
    out["config"]["degree"] = degree;
    out["exercises"] = Json::array(
        {"two-column-attainment-demonstration", "unitary-valued-construction", "exact-dual-witness"});
    out["recipe"] = Json{{"positivity_margin", recipe.positivity_margin}, {"independence", recipe.independence}};
    out["construction"] = weird_construction_to_json(wc);
    out["distance"] = Json{{"pairing_value", dist.pairing_value},
                           {"dual_norm_max", dist.dual_norm_max},
                           {"certificate", certificate_to_json(dist.cert)}};
    Json plateau = Json::array();
    for (std::size_t d = 0; d < ev.k1_reports.size(); ++d)
        plateau.push_back(Json{{"degree", ev.degrees[d]}, {"values", ev.k1_reports[d].restart_values}});
    out["weirdness"] = Json{{"degrees", ev.degrees},
                            {"k1_values", ev.k1_values},
                            {"best_k1", ev.best_k1},
                            {"best_k2", ev.best_k2},
                            {"k1_gap", ev.k1_gap},
                            {"rank_one_dual_obstructed", ev.rank_one_dual_obstructed},
                            {"plateau", std::move(plateau)},
                            {"k2_report", search_report_to_json(ev.k2_report, false)}};
    out["verdict"] = verdict;
    emit(o, out);

    if (!o.csv_path.empty()) {
        std::vector<double> dcol, rcol, vcol;
        for (std::size_t d = 0; d < ev.k1_reports.size(); ++d)
            for (std::size_t r = 0; r < ev.k1_reports[d].restart_values.size(); ++r) {
                dcol.push_back(static_cast<double>(ev.degrees[d]));
                rcol.push_back(static_cast<double>(r));
                vcol.push_back(ev.k1_reports[d].restart_values[r]);
            }
        write_csv(o.csv_path, "degree,restart,value", {dcol, rcol, vcol});
    }
    return std::string(verdict) == "weird-evidence" ? 0 : 2;
}

int cmd_superopt(const CommonOpts& o) {
    const CircleGrid grid = make_grid(o);
    const TrigSymbol Phi = load_symbol(o);
    const ExponentTriple e(o.p);

    SuperoptOptions sopt;
    sopt.cert = certify_opts(o, ladder_or(o, {8, 16, 32, 64}));
    sopt.hankel_degree = sopt.cert.degrees.back();
    sopt.search.restarts = o.restarts;
    sopt.search.seed = o.seed;
    sopt.tol_match = o.tol_match;
    sopt.tol_flat = o.tol_flat;
    const SuperoptimalResult res = superoptimal_2x2(Phi, e, grid, sopt);

    Json out;
    out["config"] = config_json(o, "superopt", sopt.cert.degrees);
    out["exercises"] = Json::array({"second-singular-value-minimization", "diagonalizing-conjugation",
                                    "scalar-sup-norm-reduction"});
    out.update(superopt_to_json(res));
    emit(o, out);
    if (!o.csv_path.empty()) {
        std::vector<double> node(res.profile.s1_over_d.size());
        for (std::size_t j = 0; j < node.size(); ++j) node[j] = static_cast<double>(j);
        write_csv(o.csv_path, "node,s1_over_d,s2_over_d", {node, res.profile.s1_over_d, res.profile.s2_over_d});
    }
    return res.cert.conclusive ? 0 : 2;
}

// ---------------------------------------------------------------------------

int cmd_factor(const CommonOpts& o, const std::string& kind) {
    const CircleGrid grid = make_grid(o);
    const TrigSymbol S = load_symbol(o);
    const ExponentTriple e(o.p);

    Json out;
    out["config"] = config_json(o, "factor " + kind, {});
    if (kind == "spectral") {
        const SpectralFactorResult r = spectral_factor(S, grid);
        out["exercises"] = Json::array({"positive-density-spectral-factorization"});
        out["psi"] = symbol_to_json(r.psi);
        out["residual"] = r.residual;
        out["rows_used"] = r.rows_used;
        out["last_change"] = r.last_change;
        out["szego_gap"] = r.szego_gap;
        out["min_eig_margin"] = r.min_eig_margin;
    } else if (kind == "sarason") {
        const SarasonPair r = sarason_factor(S, grid);
        out["exercises"] = Json::array({"trace-norm-product-factorization"});
        out["Q"] = symbol_to_json(r.Q);
        out["R"] = symbol_to_json(r.R);
        out["defect_R"] = r.defect_R;
        out["defect_Q"] = r.defect_Q;
        out["product_residual"] = r.product_residual;
        out["analytic_residual"] = r.analytic_residual;
    } else if (kind == "fg") {
        const FgPair r = fg_factor(S, e, grid);
        out["exercises"] = Json::array({"balanced-hilbert-schmidt-factorization"});
        out["F"] = symbol_to_json(r.F);
        out["G"] = symbol_to_json(r.G);
        out["h"] = symbol_to_json(r.h);
        out["product_residual"] = r.product_residual;
        out["norm_identity_gap"] = r.norm_identity_gap;
    } else if (kind == "rank1") {
        const RankOnePair r = rank_one_factor(S, e, grid);
        out["exercises"] = Json::array({"rank-one-symbol-factorization"});
        out["u"] = symbol_to_json(r.u);
        out["v"] = symbol_to_json(r.v);
        out["F"] = symbol_to_json(r.F);
        out["G"] = symbol_to_json(r.G);
        out["h"] = symbol_to_json(r.h);
        out["product_residual"] = r.product_residual;
        out["analytic_residual"] = r.analytic_residual;
        out["norm_identity_gap"] = r.norm_identity_gap;
    } else {  // thematic2
        const ThematicResult r = thematic_complete_2(S, grid);
        out["exercises"] = Json::array({"unitary-completion"});
        out["V"] = symbol_to_json(r.V);
        out["unitarity_residual"] = r.unitarity_residual;
        out["unit_norm_residual"] = r.unit_norm_residual;
    }
    emit(o, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lpnehari: best analytic approximation of matrix functions on the circle in L^p.\n"
                 "Artifacts are JSON with the run configuration embedded; LPNEHARI_THREADS caps parallelism."};
    app.require_subcommand(1);

    CommonOpts o;
    int rc = 0;

    CLI::App* dist = app.add_subcommand("dist", "certified L^p distance to the analytic class");
    add_common(dist, o, true);
    dist->callback([&] { rc = cmd_dist(o); });

    CLI::App* resp = app.add_subcommand("respectable", "does a single-column Hankel search attain the distance?");
    add_common(resp, o, true);
    resp->callback([&] { rc = cmd_respectable(o); });

    CLI::App* order = app.add_subcommand("order", "least column count attaining the distance");
    add_common(order, o, true);
    order->callback([&] { rc = cmd_order(o); });

    CLI::App* gen = app.add_subcommand("generate", "emit symbols with known best approximations");
    gen->require_subcommand(1);
    std::string outer_h, inner_zeros, recipe_path;
    CLI::App* gbs = gen->add_subcommand("bad-scalar", "scalar whose best analytic approximant is 0");
    add_common(gbs, o, false);
    gbs->add_option("--outer-h", outer_h, "outer polynomial literal, e.g. \"1+0.5z\" (no zeros in the disk)")
        ->required();
    gbs->add_option("--inner-zeros", inner_zeros, "JSON array of disk zeros, e.g. \"[[0.4,0],[0,0.3]]\"");
    gbs->callback([&] { rc = cmd_generate_bad_scalar(o, outer_h, inner_zeros); });
    CLI::App* gbm = gen->add_subcommand("bad-matrix", "2x2 matrix symbol whose best analytic approximant is 0");
    add_common(gbm, o, false);
    gbm->add_option("--recipe", recipe_path,
                    "JSON recipe: {\"h\": literal, \"inner_zeros\": [...], \"phi_sharp\": literal|symbol,"
                    " \"v\": [lit, lit], \"w\": [lit, lit]}")
        ->required();
    gbm->callback([&] { rc = cmd_generate_bad_matrix(o, recipe_path); });

    CLI::App* weird = app.add_subcommand("weird-demo", "distance unattained by any single-column search");
    add_common(weird, o, false);
    int weird_degree = 96;
    weird->add_option("--degree", weird_degree, "truncation degree of the constructed unitary symbol")
        ->check(CLI::PositiveNumber);
    weird->callback([&] { rc = cmd_weird_demo(o, weird_degree); });

    CLI::App* sup = app.add_subcommand("superopt", "lexicographic singular-value minimization for 2x2 symbols");
    add_common(sup, o, true);
    sup->callback([&] { rc = cmd_superopt(o); });

    CLI::App* fac = app.add_subcommand("factor", "factorization utilities");
    fac->require_subcommand(1);
    for (const char* kind : {"spectral", "sarason", "fg", "rank1", "thematic2"}) {
        const char* help = kind == std::string("spectral")    ? "B = Psi* Psi with Psi analytic (positive definite B)"
                           : kind == std::string("sarason")   ? "Psi = Q R with |Psi|_S1 = |Q R|_S2^2 pointwise"
                           : kind == std::string("fg")        ? "Psi = F G with balanced Hilbert-Schmidt norms"
                           : kind == std::string("rank1")     ? "rank-one Psi = u v^t with analytic balanced factors"
                                                              : "complete a unit column to a unitary-valued symbol";
        CLI::App* sub = fac->add_subcommand(kind, help);
        add_common(sub, o, true);
        sub->callback([&rc, &o, kind] { rc = cmd_factor(o, kind); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help/usage; 0 only for --help
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
