#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qws/graph.hpp"

namespace qws {

/// Eigendecomposition of a real symmetric matrix with eigenvalues grouped
/// into (near-)degenerate clusters.
struct SpectralData {
    Eigen::VectorXd eigenvalues;             // ascending
    Eigen::MatrixXd eigenvectors;            // column m is the m-th eigenvector
    std::vector<std::vector<int>> degeneracy_groups;

    bool has_degeneracy() const {
        for (const auto& g : degeneracy_groups)
            if (g.size() > 1) return true;
        return false;
    }
};

/// Grouping tolerance used when none is given: 1e-8 * max(1, spectral range).
double default_grouping_tolerance(const Eigen::VectorXd& eigenvalues_ascending);

/// Dense symmetric eigensolve. Throws std::invalid_argument if
/// max|H - H^T| > 1e-12.
SpectralData eigh(const Eigen::MatrixXd& H);
SpectralData eigh(const Eigen::MatrixXd& H, double grouping_tolerance);

/// Orthonormal Krylov basis and Lanczos coefficients seeded at one vertex.
/// Row n of `basis` is |K_n> in the vertex basis; a[n] and b[n] are the
/// tridiagonal coefficients with b[0] = 0 and b[n] > 0 for n >= 1.
struct KrylovDecomposition {
    Eigen::MatrixXd basis;
    Eigen::VectorXd a;
    Eigen::VectorXd b;

    int dim() const { return static_cast<int>(a.size()); }
};

/// Three-term recurrence with full reorthogonalization against all previous
/// basis vectors at every step; stops when the residual norm drops to
/// 1e-10 * max(1, max_degree) (max row sum for the dense overload).
KrylovDecomposition lanczos(const Graph& g, int seed_vertex);
KrylovDecomposition lanczos(const Eigen::MatrixXd& H, int seed_vertex);

/// The Hamiltonian restricted to the Krylov subspace: symmetric tridiagonal
/// d_K x d_K matrix with diagonal a and off-diagonal b[1..].
Eigen::MatrixXd krylov_hamiltonian(const KrylovDecomposition& kd);

struct TridiagonalEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column m
};

/// Eigendecomposition of the symmetric tridiagonal matrix with the given
/// diagonal (length n) and off-diagonal (length n-1).
TridiagonalEigen tridiagonal_eigh(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag);

namespace detail {

/// Implicit-shift QL on raw buffers. d (length n) holds the diagonal on
/// entry and the eigenvalues (ascending) on return; e (length n, entries
/// 0..n-2 used) is clobbered; z (n*n, column-major, column m = eigenvector
/// m) is written by the routine. No allocation. Throws std::runtime_error
/// if an eigenvalue fails to converge (50-iteration cap).
void tridiag_eigh_raw(double* d, double* e, int n, double* z);

/// Lanczos on a bit-packed adjacency (rows of `words` 64-bit words each).
/// Writes the basis rows into `basis`, which must have capacity n*(n+1)
/// (the extra row is scratch), and a, b (capacity n); returns d_K.
int lanczos_bits(const std::uint64_t* rows, int words, int n, int seed_vertex,
                 int max_degree, double* basis, double* a, double* b);

/// kappa_n = sum_m z(0,m)^2 z(n,m)^2 from the Krylov tridiagonal (a, b) of
/// size n. Caller provides workspaces: zws (n*n), dws (n), ews (n).
void kappa_from_tridiagonal(const double* a, const double* b, int n, double* kappa,
                            double* zws, double* dws, double* ews);

} // namespace detail

} // namespace qws
