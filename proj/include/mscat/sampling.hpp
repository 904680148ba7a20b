#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mscat/linalg.hpp"
#include "mscat/weights.hpp"

namespace mscat {

/// Distribution of the positive texture variable tau, rescaled at
/// construction so the population mean is exactly 1.
///
/// Built-in kinds carry no mass at zero. The empirical kind is a fixed
/// list: sample() consumes its entries in order (the list length must
/// equal the sample count) after rescaling the list to mean 1.
struct TauDistribution {
    enum class Kind { Constant, Gamma, InverseChiSquare, Empirical };

    Kind kind = Kind::Constant;
    double value = 1.0;       // Constant (pre-normalization)
    double shape = 1.0;       // Gamma
    double scale = 1.0;       // Gamma
    double dof = 3.0;         // InverseChiSquare, requires dof > 2
    std::vector<double> values;  // Empirical, stored mean-normalized
    double norm = 1.0;        // multiplier taking raw draws to mean 1

    static TauDistribution constant(double v) {
        if (!(v > 0.0)) throw std::invalid_argument("TauDistribution: constant value must be > 0");
        TauDistribution t;
        t.kind = Kind::Constant;
        t.value = v;
        t.norm = 1.0 / v;
        return t;
    }

    static TauDistribution gamma(double shape, double scale) {
        if (!(shape > 0.0 && scale > 0.0))
            throw std::invalid_argument("TauDistribution: gamma parameters must be > 0");
        TauDistribution t;
        t.kind = Kind::Gamma;
        t.shape = shape;
        t.scale = scale;
        t.norm = 1.0 / (shape * scale);  // Gamma(k, theta) has mean k*theta
        return t;
    }

    static TauDistribution inverse_chi_square(double dof) {
        // 1/X with X chi-squared(dof); the mean 1/(dof-2) exists for dof > 2.
        if (!(dof > 2.0))
            throw std::invalid_argument("TauDistribution: inverse-chi-square requires dof > 2");
        TauDistribution t;
        t.kind = Kind::InverseChiSquare;
        t.dof = dof;
        t.norm = dof - 2.0;
        return t;
    }

    static TauDistribution empirical(std::vector<double> vals) {
        if (vals.empty())
            throw std::invalid_argument("TauDistribution: empty empirical list");
        double sum = 0.0;
        for (double v : vals) {
            if (!(v >= 0.0))
                throw std::invalid_argument("TauDistribution: empirical entries must be >= 0");
            sum += v;
        }
        if (!(sum > 0.0))
            throw std::invalid_argument("TauDistribution: empirical list has zero mean");
        const double mean = sum / static_cast<double>(vals.size());
        for (double& v : vals) v /= mean;
        TauDistribution t;
        t.kind = Kind::Empirical;
        t.values = std::move(vals);
        t.norm = 1.0 / mean;
        return t;
    }

    /// One mean-normalized draw. Not available for the empirical kind,
    /// whose entries are consumed in order by sample().
    double draw(std::mt19937_64& rng) const {
        switch (kind) {
            case Kind::Constant:
                return 1.0;
            case Kind::Gamma: {
                std::gamma_distribution<double> d(shape, scale);
                return d(rng) * norm;
            }
            case Kind::InverseChiSquare: {
                std::gamma_distribution<double> chi2(dof / 2.0, 2.0);
                double x = chi2(rng);
                while (x <= 0.0) x = chi2(rng);
                return norm / x;
            }
            case Kind::Empirical:
                throw std::logic_error("TauDistribution::draw: empirical lists are fixed, not drawn");
        }
        throw std::logic_error("TauDistribution::draw: unreachable");
    }
};

/// Population description: dimension N, sample count n, inner dimension
/// N_bar >= N, SPD scatter matrix C, and the tau law.
struct ScatterModel {
    int dim = 0;          // N
    int num_samples = 0;  // n
    int inner_dim = 0;    // N_bar
    Eigen::MatrixXd scatter;
    TauDistribution tau;
    double scatter_norm = 0.0;

    double aspect_ratio() const { return static_cast<double>(dim) / num_samples; }
};

/// Validates the model invariants: c = N/n in (0,1), N_bar >= N, C symmetric
/// positive definite. Records the spectral norm of C.
inline ScatterModel make_model(int dim, int num_samples, Eigen::MatrixXd scatter,
                               TauDistribution tau, int inner_dim = -1) {
    if (inner_dim < 0) inner_dim = dim;
    if (dim < 1 || num_samples < 1)
        throw std::invalid_argument("make_model: dimensions must be positive");
    if (!(dim < num_samples))
        throw std::invalid_argument("make_model: requires N < n (aspect ratio in (0,1))");
    if (inner_dim < dim)
        throw std::invalid_argument("make_model: inner dimension must be >= N");
    if (scatter.rows() != dim || scatter.cols() != dim)
        throw std::invalid_argument("make_model: scatter matrix must be N x N");
    if (!is_symmetric(scatter))
        throw std::invalid_argument("make_model: scatter matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scatter, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) <= 0.0)
        throw std::invalid_argument("make_model: scatter matrix must be positive definite");

    ScatterModel m;
    m.dim = dim;
    m.num_samples = num_samples;
    m.inner_dim = inner_dim;
    m.scatter = std::move(scatter);
    m.tau = std::move(tau);
    m.scatter_norm = es.eigenvalues()(dim - 1);
    return m;
}

/// Generated dataset: columns of X are x_i = sqrt(tau_i) * z_i with
/// z_i = A * y_i, A the (padded) symmetric square root of the scatter
/// matrix, and y_i uniform on the sphere of radius sqrt(N_bar).
/// Z is kept alongside X because the leave-one-out quantities of the
/// estimator are defined through z_i even when tau_i = 0.
struct SampleSet {
    Eigen::MatrixXd X;  // N x n
    Eigen::MatrixXd Z;  // N x n
    Eigen::VectorXd taus;
    std::uint64_t seed = 0;
    ScatterModel model;
};

/// Symmetric PSD square root of an SPD matrix via eigendecomposition;
/// when inner_dim > N the result is padded with zero columns to N x inner_dim.
inline Eigen::MatrixXd sqrt_factor(const Eigen::MatrixXd& C, int inner_dim = -1) {
    const int n = static_cast<int>(C.rows());
    if (inner_dim < 0) inner_dim = n;
    if (C.cols() != n) throw std::invalid_argument("sqrt_factor: matrix must be square");
    if (!is_symmetric(C)) throw std::invalid_argument("sqrt_factor: matrix must be symmetric");
    if (inner_dim < n) throw std::invalid_argument("sqrt_factor: inner dimension must be >= N");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sqrt_factor: eigendecomposition failed");
    if (es.eigenvalues()(0) <= 0.0)
        throw std::invalid_argument("sqrt_factor: matrix is not positive definite");
    Eigen::MatrixXd root =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    if (inner_dim == n) return root;
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(n, inner_dim);
    padded.leftCols(n) = root;
    return padded;
}

/// Draws y = sqrt(N_bar) * g/||g|| with g standard Gaussian, so that
/// ||y||^2 = N_bar exactly up to round-off.
inline Eigen::VectorXd draw_direction(int inner_dim, std::mt19937_64& rng) {
    if (inner_dim < 1) throw std::invalid_argument("draw_direction: dimension must be >= 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd y(inner_dim);
    double norm2 = 0.0;
    do {
        for (int i = 0; i < inner_dim; ++i) y(i) = normal(rng);
        norm2 = y.squaredNorm();
    } while (norm2 == 0.0);
    return y * std::sqrt(static_cast<double>(inner_dim) / norm2);
}

/// Deterministic dataset generation: tau draws first, then one direction
/// per column. Identical (model, seed) gives bitwise-identical output.
inline SampleSet sample(const ScatterModel& model, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int n = model.num_samples;

    SampleSet s;
    s.seed = seed;
    s.model = model;
    s.taus.resize(n);
    if (model.tau.kind == TauDistribution::Kind::Empirical) {
        if (static_cast<int>(model.tau.values.size()) != n)
            throw std::invalid_argument("sample: empirical tau list length must equal n");
        for (int i = 0; i < n; ++i) s.taus(i) = model.tau.values[i];
    } else {
        for (int i = 0; i < n; ++i) s.taus(i) = model.tau.draw(rng);
    }

    const Eigen::MatrixXd A = sqrt_factor(model.scatter, model.inner_dim);
    s.X.resize(model.dim, n);
    s.Z.resize(model.dim, n);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd y = draw_direction(model.inner_dim, rng);
        s.Z.col(i) = A * y;
        s.X.col(i) = std::sqrt(s.taus(i)) * s.Z.col(i);
    }
    return s;
}

/// Advisory validation of the model assumptions at the level a finite
/// sample permits. Only (a) is a hard check; the rest are warnings, and the
/// tail criterion is asymptotic and can only be screened heuristically.
struct AssumptionReport {
    bool aspect_ok = false;       // c < 1 and phi_inf < 1/c
    double c = 0.0;
    double phi_inf = 0.0;
    double zero_mass = 0.0;       // fraction of tau_i below zero_threshold
    double zero_threshold = 1e-6;
    double zero_mass_bound = 0.0; // 1 - 1/phi_inf
    bool zero_mass_warning = false;
    double tail_stat_mid = 0.0;   // t * nu_n((t,inf)) at the 0.9 quantile
    double tail_stat_high = 0.0;  // same at the 0.99 quantile
    bool tail_warning = false;
    std::string notes;

    bool ok() const { return aspect_ok && !zero_mass_warning && !tail_warning; }
};

inline AssumptionReport check_assumptions(const ScatterModel& model, const WeightFunction& w,
                                          const SampleSet& s) {
    AssumptionReport r;
    r.c = model.aspect_ratio();
    r.phi_inf = w.phi_inf();
    r.aspect_ok = (r.c < 1.0) && (r.phi_inf < 1.0 / r.c);

    const int n = static_cast<int>(s.taus.size());
    int below = 0;
    for (int i = 0; i < n; ++i)
        if (s.taus(i) < r.zero_threshold) ++below;
    r.zero_mass = static_cast<double>(below) / n;
    r.zero_mass_bound = 1.0 - 1.0 / r.phi_inf;
    r.zero_mass_warning = r.zero_mass >= r.zero_mass_bound;

    // Tail screen: T(t) = t * nu_n((t,inf)) should shrink as t moves into
    // the tail if nu_n((t,inf)) = o(1/t). Compared at the 0.9 and 0.99
    // empirical quantiles with a 0.8 safety factor.
    std::vector<double> sorted(s.taus.data(), s.taus.data() + n);
    std::sort(sorted.begin(), sorted.end());
    auto tail_stat = [&](double q) {
        const int idx = std::min(n - 1, static_cast<int>(q * n));
        const double t = sorted[idx];
        int count = 0;
        for (int i = n - 1; i >= 0 && sorted[i] > t; --i) ++count;
        return t * static_cast<double>(count) / n;
    };
    r.tail_stat_mid = tail_stat(0.90);
    r.tail_stat_high = tail_stat(0.99);
    r.tail_warning = r.tail_stat_high > 0.8 * r.tail_stat_mid && r.tail_stat_mid > 0.0;

    std::ostringstream notes;
    notes << "aspect check: c = " << r.c << ", phi_inf = " << r.phi_inf
          << (r.aspect_ok ? " (ok)" : " (VIOLATED)") << "; ";
    notes << "mass below " << r.zero_threshold << ": " << r.zero_mass
          << " vs bound " << r.zero_mass_bound
          << (r.zero_mass_warning ? " (warning)" : " (ok)") << "; ";
    notes << "tail decay is an asymptotic condition and cannot be verified from one finite "
             "sample; the screen above only tests the sufficient 1/t-decay surrogate.";
    r.notes = notes.str();
    return r;
}

}  // namespace mscat
