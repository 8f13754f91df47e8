#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lpnehari/weird.hpp"

using namespace lpnehari;

TEST_CASE("default density: positivity margin and ingredient independence") {
    const CircleGrid grid(512);
    const WeirdRecipe rec = default_weird_recipe(grid);

    // det B = 1/4 - cos(2 theta)^2/64 - 1/64 attains its minimum 14/64
    CHECK(rec.positivity_margin == Catch::Approx(14.0 / 64.0).epsilon(1e-10));
    CHECK(rec.independence > 0.45);

    // Hermitian as a function, trace identically one
    CHECK((rec.B - rec.B.adjoint()).max_abs_coeff() < 1e-15);
    CHECK(rec.B.coeff(0).trace().real() == Catch::Approx(1.0));
    CHECK(std::abs(rec.B.coeff(1).trace()) < 1e-15);
    CHECK(std::abs(rec.B.coeff(2).trace()) < 1e-15);
}

TEST_CASE("construction invariants of the unitary-valued symbol") {
    const CircleGrid grid(512);
    const WeirdRecipe rec = default_weird_recipe(grid);
    const WeirdConstruction wc = construct_weird_U(rec.B, grid, 96);

    CHECK(wc.unitary_residual < 1e-8);
    CHECK(wc.dual_identity_residual < 1e-8);
    CHECK(wc.trace_residual < 1e-10);
    CHECK(wc.dual_trace_norm_residual < 1e-8);
    CHECK(wc.tail_mass < 1e-9);

    // factorization identities replayed through exact coefficient arithmetic
    CHECK((wc.Psi.adjoint() * wc.Psi - wc.B).max_abs_coeff() < 1e-9);
    CHECK((wc.Psi * wc.Psi.adjoint() - wc.A).max_abs_coeff() < 1e-12);
    CHECK((wc.Q * wc.Q.adjoint() - wc.A * wc.A).max_abs_coeff() < 1e-9);

    // the dual witness z Q is analytic and vanishes at the origin
    CHECK(wc.dual.analytic_vanishing_residual() < 1e-12);
    CHECK(wc.Psi.is_analytic(1e-12));
    CHECK(wc.Q.is_analytic(1e-12));
}

TEST_CASE("the unitary symbol has certified distance one in several exponents") {
    const CircleGrid grid(512);
    const WeirdConstruction wc = construct_weird_U(default_weird_recipe(grid).B, grid, 96);

    for (double p : {4.0, 3.0}) {
        const ExponentTriple e(p);
        CertifyOptions copts;
        copts.degrees = {8, 16};
        const WeirdDistanceEvidence ev = badly_approximable_evidence(wc, e, grid, copts);

        // exact pairing: mean of trace(U zQ) is 1, and |zQ|_{S1} is identically 1
        CHECK(ev.pairing_value == Catch::Approx(1.0).epsilon(1e-9));
        CHECK(ev.dual_norm_max == Catch::Approx(1.0).epsilon(1e-9));

        CHECK(ev.cert.conclusive);
        CHECK(ev.cert.dual_value >= 1.0 - 1e-8);
        CHECK(ev.cert.dual_value <= 1.0 + 1e-8);
        CHECK(ev.cert.primal_value >= 1.0 - 1e-9);
        CHECK(ev.cert.primal_value <= 1.0 + 5e-3);
    }
}

TEST_CASE("single-column Hankel values plateau strictly below the distance") {
    const CircleGrid grid(512);
    const WeirdConstruction wc = construct_weird_U(default_weird_recipe(grid).B, grid, 96);
    const ExponentTriple e(4.0);

    WeirdnessOptions wopts;
    wopts.degrees = {16, 32};
    wopts.search.restarts = 16;
    const WeirdnessEvidence we = weirdness_evidence(wc, e, grid, wopts);

    // strict, stable shortfall of the single-column value
    CHECK(we.best_k1 < 0.998);
    CHECK(we.best_k1 > 0.98);
    CHECK(we.k1_gap > 1e-3);
    REQUIRE(we.k1_values.size() == 2);
    CHECK(std::abs(we.k1_values[0] - we.k1_values[1]) < 1e-3);

    // two columns recover the distance with a pointwise rank-two witness
    CHECK(we.best_k2 > 0.9999);
    CHECK(we.best_k2 <= 1.0 + 1e-9);
    CHECK(we.k2_report.modal_rank == 2);

    // and the dual witness structurally refuses a rank-one factorization
    CHECK(we.rank_one_dual_obstructed);
}
