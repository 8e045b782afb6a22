#include "qws/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace qws {

std::string family_name(GraphFamily family) {
    switch (family) {
    case GraphFamily::HubKRegular: return "hub-k-regular";
    case GraphFamily::Star: return "star";
    case GraphFamily::Complete: return "complete";
    case GraphFamily::Path: return "path";
    case GraphFamily::MAryTree: return "m-ary-tree";
    case GraphFamily::GluedTree: return "glued-tree";
    }
    return "unknown";
}

HubEigenpair hub_eigenpair(int dimension, int k) {
    if (dimension < 2 || k < 0 || k > dimension - 2)
        throw std::invalid_argument("hub_eigenpair: need D >= 2 and 0 <= k <= D-2");
    const double s = std::sqrt(4.0 * (dimension - 1) + static_cast<double>(k) * k) / 2.0;
    HubEigenpair out;
    out.a_plus = -k / 2.0 + s;
    out.a_minus = -k / 2.0 - s;
    out.lambda_plus = k / 2.0 + s;
    out.lambda_minus = k / 2.0 - s;
    return out;
}

double hub_complexity_at_time(int dimension, int k, double t) {
    const HubEigenpair ep = hub_eigenpair(dimension, k);
    const double amp = (4.0 * dimension - 4.0) / (4.0 * dimension - 4.0 + static_cast<double>(k) * k);
    const double s = std::sin((ep.lambda_plus - ep.lambda_minus) / 2.0 * t);
    return amp * s * s;
}

namespace {

// kappa profile of a path-shaped Krylov chain on n sites: ends 3/(2n+2),
// interior 1/(n+1); collapses to {1} for n = 1.
std::vector<double> path_kappa(int n) {
    if (n == 1) return {1.0};
    std::vector<double> kappa(n, 1.0 / (n + 1.0));
    kappa.front() = kappa.back() = 3.0 / (2.0 * n + 2.0);
    return kappa;
}

FamilyPrediction hub_prediction(GraphFamily family, const FamilyParams& p, int k) {
    const int d = p.dimension;
    if (d < 2) throw std::invalid_argument("cbar_closed_form: need D >= 2");
    if (k < 0 || k > d - 2) throw std::invalid_argument("cbar_closed_form: need 0 <= k <= D-2");
    if (k % 2 != 0 && (d - 1) % 2 != 0)
        throw std::invalid_argument("cbar_closed_form: no k-regular graph exists (k and D-1 both odd)");
    FamilyPrediction out;
    out.family = family;
    out.params = p;
    out.params.k = k;
    out.cbar = 2.0 * (d - 1) / (4.0 * d - 4.0 + static_cast<double>(k) * k);
    out.krylov_dim = 2;
    out.kappa = std::vector<double>{1.0 - out.cbar, out.cbar};
    return out;
}

} // namespace

FamilyPrediction cbar_closed_form(GraphFamily family, const FamilyParams& p) {
    FamilyPrediction out;
    out.family = family;
    out.params = p;
    switch (family) {
    case GraphFamily::HubKRegular:
        return hub_prediction(family, p, p.k);
    case GraphFamily::Star:
        return hub_prediction(family, p, 0);
    case GraphFamily::Complete:
        if (p.dimension == 1) {
            out.cbar = 0.0;
            out.krylov_dim = 1;
            out.kappa = std::vector<double>{1.0};
            return out;
        }
        return hub_prediction(family, p, p.dimension - 2);
    case GraphFamily::Path: {
        const int d = p.dimension;
        if (d < 1) throw std::invalid_argument("cbar_closed_form: need D >= 1");
        out.cbar = (d - 1) / 2.0;
        out.krylov_dim = d;
        out.kappa = path_kappa(d);
        return out;
    }
    case GraphFamily::MAryTree: {
        if (p.m < 2 || p.height < 1)
            throw std::invalid_argument("cbar_closed_form: need m >= 2 and h >= 1");
        // the Krylov chain is a path over the h levels with constant hopping sqrt(m)
        out.cbar = (p.height - 1) / 2.0;
        out.krylov_dim = p.height;
        out.kappa = path_kappa(p.height);
        const double d = (std::pow(p.m, p.height) - 1.0) / (p.m - 1.0);
        out.asymptotic_cbar = 0.5 * std::log(d) / std::log(static_cast<double>(p.m));
        return out;
    }
    case GraphFamily::GluedTree: {
        const int n = p.glue_order;
        if (n < 1) throw std::invalid_argument("cbar_closed_form: need n >= 1");
        out.cbar = static_cast<double>(n);
        out.krylov_dim = 2 * n + 1;
        out.kappa = path_kappa(2 * n + 1);
        const double d = 3.0 * std::pow(2.0, n) - 2.0;
        out.asymptotic_cbar = std::log(d / 3.0) / std::log(2.0);
        return out;
    }
    }
    throw std::invalid_argument("cbar_closed_form: unknown family");
}

double empirical_max_fit(int dimension) {
    return 0.66 * dimension - 1.31;
}

} // namespace qws
