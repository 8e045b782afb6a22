#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qws {

enum class GraphFamily { HubKRegular, Star, Complete, Path, MAryTree, GluedTree };

std::string family_name(GraphFamily family);

/// Parameters for cbar_closed_form; only the fields the family uses are
/// read (dimension/k for hub, dimension for star/complete/path, m/height
/// for trees, glue_order for glued trees).
struct FamilyParams {
    int dimension = 0;
    int k = 0;
    int m = 0;
    int height = 0;
    int glue_order = 0;
};

/// Closed-form prediction under the default weights w_n = n.
struct FamilyPrediction {
    GraphFamily family{};
    FamilyParams params{};
    double cbar = 0.0;
    int krylov_dim = 0;
    std::optional<std::vector<double>> kappa;
    std::optional<double> asymptotic_cbar; // tree families: 0.5 log(D)/log(m)
};

struct HubEigenpair {
    double a_plus = 0.0;
    double lambda_plus = 0.0;
    double a_minus = 0.0;
    double lambda_minus = 0.0;
};

/// The two exact eigenpairs of a hub + k-regular graph from the ansatz
/// a|v_0> + sum_i |v_i>: a± = -k/2 ± s, lambda± = k/2 ± s with
/// s = sqrt(4(D-1) + k^2)/2.
HubEigenpair hub_eigenpair(int dimension, int k);

/// C(t) for the hub + k-regular family:
/// (4D-4)/(4D-4+k^2) * sin^2((lambda_+ - lambda_-) t / 2).
double hub_complexity_at_time(int dimension, int k, double t);

/// Throws std::invalid_argument on infeasible parameters.
FamilyPrediction cbar_closed_form(GraphFamily family, const FamilyParams& params);

/// Empirical linear fit to the maximum attainable cbar: 0.66 D - 1.31.
/// Pure arithmetic, no clamping.
double empirical_max_fit(int dimension);

} // namespace qws
