#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qws/analytic.hpp"
#include "qws/graph.hpp"
#include "qws/krylov.hpp"
#include "qws/rng.hpp"
#include "qws/spectral.hpp"

using namespace qws;

namespace {

Graph random_connected_graph(std::mt19937_64& eng, int n) {
    while (true) {
        Graph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (uniform_below(eng, 3) < 1) g.add_edge(i, j);
        if (g.is_connected()) return g;
    }
}

void check_prediction_against_measurement(const FamilyPrediction& pred, const Graph& g) {
    const auto report = cbar(g, 0);
    CHECK(std::abs(pred.cbar - report.cbar) <= 1e-8);
    CHECK(pred.krylov_dim == report.krylov_dim);
    REQUIRE(pred.kappa.has_value());
    REQUIRE(pred.kappa->size() == report.kappa.size());
    for (std::size_t i = 0; i < report.kappa.size(); ++i)
        CHECK(std::abs((*pred.kappa)[i] - report.kappa[i]) <= 1e-8);
}

} // namespace

TEST_CASE("hub eigenpair closed form") {
    SUBCASE("star D=5: lambda = +-2") {
        const auto ep = hub_eigenpair(5, 0);
        CHECK(std::abs(ep.lambda_plus - 2.0) < 1e-12);
        CHECK(std::abs(ep.lambda_minus + 2.0) < 1e-12);
        CHECK(std::abs(ep.a_plus - 2.0) < 1e-12);
        CHECK(std::abs(ep.a_minus + 2.0) < 1e-12);
    }
    SUBCASE("D=8 k=4") {
        const auto ep = hub_eigenpair(8, 4);
        CHECK(std::abs(ep.lambda_plus - (2.0 + std::sqrt(44.0) / 2.0)) < 1e-12);
        CHECK(std::abs(ep.lambda_minus - (2.0 - std::sqrt(44.0) / 2.0)) < 1e-12);
    }
    SUBCASE("k = D-2 puts lambda_+ at the complete-graph top eigenvalue") {
        for (int d = 3; d <= 10; ++d)
            CHECK(std::abs(hub_eigenpair(d, d - 2).lambda_plus - (d - 1.0)) < 1e-12);
    }
    SUBCASE("both lambdas appear in the spectrum of the generated graph") {
        for (int d = 3; d <= 14; ++d) {
            for (int k = 0; k <= d - 2; ++k) {
                if (k % 2 != 0 && (d - 1) % 2 != 0) continue;
                const auto ep = hub_eigenpair(d, k);
                const SpectralData sd = eigh(make_hub_k_regular(d, k).adjacency_matrix());
                double best_plus = 1e9, best_minus = 1e9;
                for (int m = 0; m < d; ++m) {
                    best_plus = std::min(best_plus, std::abs(sd.eigenvalues(m) - ep.lambda_plus));
                    best_minus = std::min(best_minus, std::abs(sd.eigenvalues(m) - ep.lambda_minus));
                }
                CHECK(best_plus <= 1e-9);
                CHECK(best_minus <= 1e-9);
            }
        }
    }
    CHECK_THROWS_AS(hub_eigenpair(4, 3), std::invalid_argument);
}

TEST_CASE("hub C(t) formula matches the measured evolution") {
    const Graph g = make_hub_k_regular(10, 6);
    for (double t : {0.2, 1.0, 3.7})
        CHECK(std::abs(hub_complexity_at_time(10, 6, t) - complexity_at_time(g, 0, t)) < 1e-10);
}

TEST_CASE("closed-form predictions: spec values") {
    SUBCASE("glued tree n=4") {
        const auto p = cbar_closed_form(GraphFamily::GluedTree, {.glue_order = 4});
        CHECK(p.cbar == 4.0);
        CHECK(p.krylov_dim == 9);
        CHECK(std::abs(p.kappa->front() - 3.0 / 20.0) < 1e-15);
        CHECK(std::abs(p.kappa->back() - 3.0 / 20.0) < 1e-15);
    }
    SUBCASE("path D=10") {
        const auto p = cbar_closed_form(GraphFamily::Path, {.dimension = 10});
        CHECK(p.cbar == 4.5);
        CHECK(p.krylov_dim == 10);
        CHECK(std::abs(p.kappa->front() - 3.0 / 22.0) < 1e-15);
        for (int i = 1; i < 9; ++i) CHECK(std::abs((*p.kappa)[i] - 1.0 / 11.0) < 1e-15);
    }
    SUBCASE("complete D=10") {
        CHECK(std::abs(cbar_closed_form(GraphFamily::Complete, {.dimension = 10}).cbar - 0.18) < 1e-15);
    }
    SUBCASE("star") {
        for (int d : {2, 6, 19})
            CHECK(cbar_closed_form(GraphFamily::Star, {.dimension = d}).cbar == 0.5);
    }
}

TEST_CASE("oracle equivalence: closed forms vs measured cbar, D <= 20") {
    for (int d = 1; d <= 20; ++d) {
        check_prediction_against_measurement(cbar_closed_form(GraphFamily::Path, {.dimension = d}),
                                             make_path(d));
        check_prediction_against_measurement(cbar_closed_form(GraphFamily::Complete, {.dimension = d}),
                                             make_complete(d));
        if (d >= 2)
            check_prediction_against_measurement(cbar_closed_form(GraphFamily::Star, {.dimension = d}),
                                                 make_star(d));
    }
    for (int d = 2; d <= 20; ++d)
        for (int k = 0; k <= d - 2; ++k) {
            if (k % 2 != 0 && (d - 1) % 2 != 0) continue;
            check_prediction_against_measurement(
                cbar_closed_form(GraphFamily::HubKRegular, {.dimension = d, .k = k}),
                make_hub_k_regular(d, k));
        }
    for (int m : {2, 3})
        for (int h = 1; h <= 5; ++h)
            check_prediction_against_measurement(
                cbar_closed_form(GraphFamily::MAryTree, {.m = m, .height = h}),
                make_m_ary_tree(m, h));
    for (int n = 1; n <= 5; ++n)
        check_prediction_against_measurement(cbar_closed_form(GraphFamily::GluedTree, {.glue_order = n}),
                                             make_glued_tree(n));
}

TEST_CASE("wedge lower bound: nothing beats the complete graph") {
    auto eng = seeded_engine(41, 0);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(uniform_below(eng, 19));
        const Graph g = random_connected_graph(eng, n);
        const double floor = cbar_closed_form(GraphFamily::Complete, {.dimension = n}).cbar;
        CHECK(cbar(g, 0).cbar >= floor - 1e-12);
    }
}

TEST_CASE("empirical maximum fit") {
    CHECK(std::abs(empirical_max_fit(30) - 18.49) < 1e-12);
    CHECK(std::abs(empirical_max_fit(10) - 5.29) < 1e-12);
    CHECK(std::abs(empirical_max_fit(2) - 0.01) < 1e-12); // no clamping
}

TEST_CASE("tree asymptote annotation") {
    const auto p = cbar_closed_form(GraphFamily::MAryTree, {.m = 2, .height = 6});
    REQUIRE(p.asymptotic_cbar.has_value());
    CHECK(std::abs(*p.asymptotic_cbar - 0.5 * std::log(63.0) / std::log(2.0)) < 1e-12);
}

TEST_CASE("closed forms reject infeasible parameters") {
    CHECK_THROWS_AS(cbar_closed_form(GraphFamily::HubKRegular, {.dimension = 6, .k = 3}),
                    std::invalid_argument); // k and D-1 both odd
    CHECK_THROWS_AS(cbar_closed_form(GraphFamily::HubKRegular, {.dimension = 4, .k = 5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cbar_closed_form(GraphFamily::MAryTree, {.m = 1, .height = 3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cbar_closed_form(GraphFamily::GluedTree, {.glue_order = 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cbar_closed_form(GraphFamily::Star, {.dimension = 1}), std::invalid_argument);
}
