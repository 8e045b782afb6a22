#include "qws/krylov.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qws {

WeightSequence WeightSequence::custom(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("WeightSequence: custom weights must be non-empty");
    if (values.front() < 0.0)
        throw std::invalid_argument("WeightSequence: w_0 must be >= 0");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw std::invalid_argument("WeightSequence: weights must be strictly increasing");
    WeightSequence w;
    w.values_ = std::move(values);
    return w;
}

double WeightSequence::operator[](int n) const {
    if (values_.empty()) return static_cast<double>(n);
    return values_.at(static_cast<std::size_t>(n));
}

void WeightSequence::require(int needed) const {
    if (!values_.empty() && static_cast<int>(values_.size()) < needed)
        throw std::invalid_argument("WeightSequence: " + std::to_string(needed) +
                                    " weights needed, only " + std::to_string(values_.size()) +
                                    " provided");
}

namespace {

TridiagonalEigen krylov_eigen(const KrylovDecomposition& kd) {
    const int n = kd.dim();
    Eigen::VectorXd off(n > 0 ? n - 1 : 0);
    for (int i = 1; i < n; ++i) off(i - 1) = kd.b(i);
    return tridiagonal_eigh(kd.a, off);
}

std::vector<double> kappa_from(const TridiagonalEigen& te) {
    const int n = static_cast<int>(te.values.size());
    std::vector<double> kappa(n, 0.0);
    for (int m = 0; m < n; ++m) {
        const double w0 = te.vectors(0, m) * te.vectors(0, m);
        for (int i = 0; i < n; ++i) kappa[i] += w0 * te.vectors(i, m) * te.vectors(i, m);
    }
    return kappa;
}

} // namespace

double complexity_at_time(const Graph& g, int seed_vertex, double t, const WeightSequence& w) {
    if (!std::isfinite(t)) throw std::invalid_argument("complexity_at_time: t must be finite");
    const KrylovDecomposition kd = lanczos(g, seed_vertex);
    const int n = kd.dim();
    w.require(n);
    const TridiagonalEigen te = krylov_eigen(kd);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        std::complex<double> amp(0.0, 0.0);
        for (int m = 0; m < n; ++m) {
            const double c = te.vectors(i, m) * te.vectors(0, m);
            amp += c * std::exp(std::complex<double>(0.0, -te.values(m) * t));
        }
        total += w[i] * std::norm(amp);
    }
    return total;
}

std::vector<double> kappa_profile(const Graph& g, int seed_vertex) {
    return kappa_from(krylov_eigen(lanczos(g, seed_vertex)));
}

std::vector<double> kappa_profile(const Eigen::MatrixXd& H, int seed_vertex) {
    return kappa_from(krylov_eigen(lanczos(H, seed_vertex)));
}

ComplexityReport cbar(const Graph& g, int seed_vertex, const WeightSequence& w) {
    ComplexityReport report;
    report.seed_vertex = seed_vertex;
    report.weights = w;
    report.kappa = kappa_profile(g, seed_vertex);
    report.krylov_dim = static_cast<int>(report.kappa.size());
    w.require(report.krylov_dim);
    double total = 0.0;
    for (int i = 0; i < report.krylov_dim; ++i) total += w[i] * report.kappa[i];
    report.cbar = total;
    report.degenerate_spectrum = eigh(g.adjacency_matrix()).has_degeneracy();
    return report;
}

double finite_time_average(const Graph& g, int seed_vertex, double T, const WeightSequence& w) {
    if (!(T > 0.0)) throw std::invalid_argument("finite_time_average: T must be > 0");
    const KrylovDecomposition kd = lanczos(g, seed_vertex);
    const int n = kd.dim();
    w.require(n);
    const TridiagonalEigen te = krylov_eigen(kd);

    // W(m,l) = sum_n w_n z(n,m) z(n,l); the average is
    // sum_{m,l} z(0,m) z(0,l) W(m,l) sinc((E_l - E_m) T).
    Eigen::MatrixXd weighted = te.vectors;
    for (int i = 0; i < n; ++i) weighted.row(i) *= w[i];
    const Eigen::MatrixXd wml = te.vectors.transpose() * weighted;

    double total = 0.0;
    for (int m = 0; m < n; ++m) {
        for (int l = 0; l < n; ++l) {
            const double x = (te.values(l) - te.values(m)) * T;
            const double sinc = (x == 0.0) ? 1.0 : std::sin(x) / x;
            total += te.vectors(0, m) * te.vectors(0, l) * wml(m, l) * sinc;
        }
    }
    return total;
}

std::vector<double> limiting_distribution(const Graph& g, int seed_vertex) {
    const int n = g.dimension();
    if (seed_vertex < 0 || seed_vertex >= n)
        throw std::out_of_range("limiting_distribution: seed vertex out of range");
    const SpectralData sd = eigh(g.adjacency_matrix());
    std::vector<double> chi(n, 0.0);
    for (const auto& group : sd.degeneracy_groups) {
        for (int i = 0; i < n; ++i) {
            double amp = 0.0; // <v_i| P_group |v_seed>
            for (int m : group) amp += sd.eigenvectors(i, m) * sd.eigenvectors(seed_vertex, m);
            chi[i] += amp * amp;
        }
    }
    return chi;
}

std::string report_to_json(const ComplexityReport& report) {
    nlohmann::json j;
    j["seed"] = report.seed_vertex;
    j["d_K"] = report.krylov_dim;
    j["kappa"] = report.kappa;
    j["cbar"] = report.cbar;
    if (report.weights.is_linear())
        j["weights"] = "linear";
    else
        j["weights"] = report.weights.values();
    j["degenerate"] = report.degenerate_spectrum;
    return j.dump(2);
}

} // namespace qws
