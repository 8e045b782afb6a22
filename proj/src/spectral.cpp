#include "qws/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace qws {

double default_grouping_tolerance(const Eigen::VectorXd& eigenvalues_ascending) {
    double range = 0.0;
    if (eigenvalues_ascending.size() > 0)
        range = eigenvalues_ascending(eigenvalues_ascending.size() - 1) - eigenvalues_ascending(0);
    return 1e-8 * std::max(1.0, range);
}

namespace {

std::vector<std::vector<int>> group_by_gap(const Eigen::VectorXd& evals, double tol) {
    std::vector<std::vector<int>> groups;
    for (int m = 0; m < evals.size(); ++m) {
        if (m == 0 || evals(m) - evals(m - 1) > tol)
            groups.emplace_back();
        groups.back().push_back(m);
    }
    return groups;
}

void check_symmetric(const Eigen::MatrixXd& H) {
    if (H.rows() != H.cols())
        throw std::invalid_argument("eigh: matrix must be square");
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw std::invalid_argument("eigh: matrix is not symmetric");
}

} // namespace

SpectralData eigh(const Eigen::MatrixXd& H, double grouping_tolerance) {
    check_symmetric(H);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigh: eigensolver failed to converge");
    SpectralData out;
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    out.degeneracy_groups = group_by_gap(out.eigenvalues, grouping_tolerance);
    return out;
}

SpectralData eigh(const Eigen::MatrixXd& H) {
    check_symmetric(H);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigh: eigensolver failed to converge");
    SpectralData out;
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    out.degeneracy_groups = group_by_gap(out.eigenvalues, default_grouping_tolerance(out.eigenvalues));
    return out;
}

namespace detail {

void tridiag_eigh_raw(double* d, double* e, int n, double* z) {
    for (int i = 0; i < n * n; ++i) z[i] = 0.0;
    for (int i = 0; i < n; ++i) z[i + static_cast<std::size_t>(n) * i] = 1.0;
    if (n == 1) return;

    // Implicit-shift QL (EISPACK imtql2 lineage), eigenvectors accumulated
    // into z. e[i] couples d[i] and d[i+1]; e[n-1] is a sentinel.
    e[n - 1] = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw std::runtime_error("tridiag_eigh: eigenvalue failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double bb = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * bb;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - bb;
                    double* zi = z + static_cast<std::size_t>(n) * i;
                    double* zj = z + static_cast<std::size_t>(n) * (i + 1);
                    for (int k = 0; k < n; ++k) {
                        f = zj[k];
                        zj[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    // ascending order, columns permuted along
    for (int i = 0; i < n - 1; ++i) {
        int k = i;
        for (int j = i + 1; j < n; ++j)
            if (d[j] < d[k]) k = j;
        if (k != i) {
            std::swap(d[i], d[k]);
            double* zi = z + static_cast<std::size_t>(n) * i;
            double* zk = z + static_cast<std::size_t>(n) * k;
            for (int r = 0; r < n; ++r) std::swap(zi[r], zk[r]);
        }
    }
}

namespace {

template <class MatVec>
int lanczos_core(MatVec&& apply, int n, int seed_vertex, double eps_b,
                 double* basis, double* a, double* b, double* work) {
    double* cur = basis;
    std::fill(cur, cur + n, 0.0);
    cur[seed_vertex] = 1.0;
    b[0] = 0.0;

    for (int it = 0;; ++it) {
        cur = basis + static_cast<std::size_t>(it) * n;
        apply(cur, work);

        double an = 0.0;
        for (int i = 0; i < n; ++i) an += cur[i] * work[i];
        a[it] = an;

        for (int i = 0; i < n; ++i) work[i] -= an * cur[i];
        if (it > 0) {
            const double* prev = basis + static_cast<std::size_t>(it - 1) * n;
            const double bn = b[it];
            for (int i = 0; i < n; ++i) work[i] -= bn * prev[i];
        }
        // full reorthogonalization, all previous vectors
        for (int j = 0; j <= it; ++j) {
            const double* kj = basis + static_cast<std::size_t>(j) * n;
            double c = 0.0;
            for (int i = 0; i < n; ++i) c += kj[i] * work[i];
            for (int i = 0; i < n; ++i) work[i] -= c * kj[i];
        }

        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) norm2 += work[i] * work[i];
        const double beta = std::sqrt(norm2);
        if (it + 1 >= n || beta <= eps_b) return it + 1;

        b[it + 1] = beta;
        double* next = basis + static_cast<std::size_t>(it + 1) * n;
        const double inv = 1.0 / beta;
        for (int i = 0; i < n; ++i) next[i] = work[i] * inv;
    }
}

} // namespace

int lanczos_bits(const std::uint64_t* rows, int words, int n, int seed_vertex,
                 int max_degree, double* basis, double* a, double* b) {
    const double eps_b = 1e-10 * std::max(1.0, static_cast<double>(max_degree));
    double* work = basis + static_cast<std::size_t>(n) * n; // caller reserves n*(n+1)
    auto apply = [rows, words, n](const double* v, double* out) {
        for (int i = 0; i < n; ++i) {
            const std::uint64_t* r = rows + static_cast<std::size_t>(i) * words;
            double s = 0.0;
            for (int w = 0; w < words; ++w) {
                std::uint64_t bits = r[w];
                const double* vb = v + w * 64;
                while (bits) {
                    s += vb[std::countr_zero(bits)];
                    bits &= bits - 1;
                }
            }
            out[i] = s;
        }
    };
    return lanczos_core(apply, n, seed_vertex, eps_b, basis, a, b, work);
}

void kappa_from_tridiagonal(const double* a, const double* b, int n, double* kappa,
                            double* zws, double* dws, double* ews) {
    std::copy(a, a + n, dws);
    for (int i = 0; i + 1 < n; ++i) ews[i] = b[i + 1];
    tridiag_eigh_raw(dws, ews, n, zws);
    std::fill(kappa, kappa + n, 0.0);
    for (int m = 0; m < n; ++m) {
        const double* col = zws + static_cast<std::size_t>(n) * m;
        const double w0 = col[0] * col[0];
        for (int i = 0; i < n; ++i) kappa[i] += w0 * col[i] * col[i];
    }
}

} // namespace detail

KrylovDecomposition lanczos(const Graph& g, int seed_vertex) {
    const int n = g.dimension();
    if (seed_vertex < 0 || seed_vertex >= n)
        throw std::out_of_range("lanczos: seed vertex out of range");
    std::vector<double> basis(static_cast<std::size_t>(n) * (n + 1));
    std::vector<double> a(n), b(n);
    const int dk = detail::lanczos_bits(g.row(0), g.words_per_row(), n, seed_vertex,
                                        g.max_degree(), basis.data(), a.data(), b.data());
    KrylovDecomposition kd;
    kd.basis.resize(dk, n);
    for (int r = 0; r < dk; ++r)
        for (int c = 0; c < n; ++c) kd.basis(r, c) = basis[static_cast<std::size_t>(r) * n + c];
    kd.a = Eigen::Map<Eigen::VectorXd>(a.data(), dk);
    kd.b = Eigen::Map<Eigen::VectorXd>(b.data(), dk);
    return kd;
}

KrylovDecomposition lanczos(const Eigen::MatrixXd& H, int seed_vertex) {
    check_symmetric(H);
    const int n = static_cast<int>(H.rows());
    if (seed_vertex < 0 || seed_vertex >= n)
        throw std::out_of_range("lanczos: seed vertex out of range");
    const double scale = H.cwiseAbs().rowwise().sum().maxCoeff();
    const double eps_b = 1e-10 * std::max(1.0, scale);
    std::vector<double> basis(static_cast<std::size_t>(n) * n), a(n), b(n), work(n);
    auto apply = [&H, n](const double* v, double* out) {
        Eigen::Map<const Eigen::VectorXd> vin(v, n);
        Eigen::Map<Eigen::VectorXd>(out, n) = H * vin;
    };
    const int dk = detail::lanczos_core(apply, n, seed_vertex, eps_b,
                                        basis.data(), a.data(), b.data(), work.data());
    KrylovDecomposition kd;
    kd.basis.resize(dk, n);
    for (int r = 0; r < dk; ++r)
        for (int c = 0; c < n; ++c) kd.basis(r, c) = basis[static_cast<std::size_t>(r) * n + c];
    kd.a = Eigen::Map<Eigen::VectorXd>(a.data(), dk);
    kd.b = Eigen::Map<Eigen::VectorXd>(b.data(), dk);
    return kd;
}

Eigen::MatrixXd krylov_hamiltonian(const KrylovDecomposition& kd) {
    const int n = kd.dim();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        t(i, i) = kd.a(i);
        if (i > 0) t(i, i - 1) = t(i - 1, i) = kd.b(i);
    }
    return t;
}

TridiagonalEigen tridiagonal_eigh(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag) {
    const int n = static_cast<int>(diag.size());
    if (n < 1) throw std::invalid_argument("tridiagonal_eigh: empty matrix");
    if (offdiag.size() != n - 1)
        throw std::invalid_argument("tridiagonal_eigh: off-diagonal must have length n-1");
    std::vector<double> d(diag.data(), diag.data() + n), e(n, 0.0), z(static_cast<std::size_t>(n) * n);
    std::copy(offdiag.data(), offdiag.data() + (n - 1), e.data());
    detail::tridiag_eigh_raw(d.data(), e.data(), n, z.data());
    TridiagonalEigen out;
    out.values = Eigen::Map<Eigen::VectorXd>(d.data(), n);
    out.vectors.resize(n, n);
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) out.vectors(i, m) = z[static_cast<std::size_t>(n) * m + i];
    return out;
}

} // namespace qws
