#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qws/graph.hpp"
#include "qws/spectral.hpp"

namespace qws {

/// Weights w_0 < w_1 < ... applied to the Krylov occupation numbers.
/// The default rule is w_n = n; a custom list must be non-negative and
/// strictly increasing and long enough for the Krylov dimension it is
/// used with.
class WeightSequence {
public:
    WeightSequence() = default; // linear, w_n = n

    static WeightSequence linear() { return WeightSequence(); }
    static WeightSequence custom(std::vector<double> values);

    bool is_linear() const { return values_.empty(); }
    const std::vector<double>& values() const { return values_; }

    double operator[](int n) const;

    /// Throws std::invalid_argument when fewer than `needed` values exist.
    void require(int needed) const;

private:
    std::vector<double> values_; // empty = linear rule
};

struct ComplexityReport {
    int seed_vertex = 0;
    int krylov_dim = 0;
    std::vector<double> kappa;       // length krylov_dim
    double cbar = 0.0;               // sum_n w_n kappa_n
    WeightSequence weights;
    bool degenerate_spectrum = false; // full H has a grouped degeneracy
};

/// C(t) = sum_n w_n |<K_n|exp(-iHt)|v_seed>|^2, evaluated inside the
/// d_K-dimensional Krylov subspace (the evolution never leaves it).
double complexity_at_time(const Graph& g, int seed_vertex, double t,
                          const WeightSequence& w = {});

/// kappa_n = sum_m |<m|e_0>|^2 |<m|e_n>|^2 over the eigenvectors |m> of the
/// Krylov tridiagonal. Unreduced tridiagonals have simple spectra, so this
/// is well-defined even when the full H is degenerate.
std::vector<double> kappa_profile(const Graph& g, int seed_vertex);
std::vector<double> kappa_profile(const Eigen::MatrixXd& H, int seed_vertex);

/// Long-time average C-bar = sum_n w_n kappa_n, plus the report metadata.
ComplexityReport cbar(const Graph& g, int seed_vertex, const WeightSequence& w = {});

/// Finite-horizon average (1/T) * integral of C(t) over [0, T], in closed
/// form: diagonal spectral terms give C-bar, off-diagonal pairs contribute
/// sinc((E_l - E_m) T) factors. Throws on T <= 0.
double finite_time_average(const Graph& g, int seed_vertex, double T,
                           const WeightSequence& w = {});

/// Limiting distribution of the walk started at the seed: chi_i =
/// sum_lambda |<v_i|P_lambda|v_seed>|^2 with P_lambda the projector onto
/// each degenerate eigenspace group of the full H.
std::vector<double> limiting_distribution(const Graph& g, int seed_vertex);

/// {"seed","d_K","kappa","cbar","weights","degenerate"}
std::string report_to_json(const ComplexityReport& report);

} // namespace qws
