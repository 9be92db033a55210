// Real-coordinate embeddings of a binary pure-state alphabet and the small
// amount of linear algebra needed on top of them: tensor products, Gram
// matrices and symmetric (Löwdin) orthonormalization.
//
// Coordinate conventions are fixed so that vectors serialize identically
// across runs:
//   u0 = (1, 0), u1 = (cos g, sin g)
//   (x (x) y)[i * dim(y) + j] = x[i] * y[j]

#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "superadd/errors.hpp"

namespace superadd {

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kOrthoTolerance = 1e-10;
inline constexpr double kConditioningFloor = 1e-10;

/// Plane angle, stored in radians.
class Angle {
public:
    constexpr Angle() = default;

    static constexpr Angle radians(double r) { return Angle(r); }
    static constexpr Angle degrees(double d) { return Angle(d * std::numbers::pi / 180.0); }

    constexpr double rad() const { return value_; }
    constexpr double deg() const { return value_ * 180.0 / std::numbers::pi; }

    friend constexpr auto operator<=>(const Angle &, const Angle &) = default;

private:
    constexpr explicit Angle(double r) : value_(r) {}
    double value_ = 0.0;
};

/// Throws unless gamma is a valid overlap angle, i.e. in [0, pi/2].
inline void require_overlap_angle(Angle gamma, const char *where) {
    const double g = gamma.rad();
    if (!(g >= 0.0 && g <= std::numbers::pi / 2)) {
        throw DomainError(std::string(where) + ": overlap angle must lie in [0, 90] degrees, got " +
                          std::to_string(gamma.deg()));
    }
}

/// Throws unless gamma is in (0, pi/2].
inline void require_positive_overlap_angle(Angle gamma, const char *where) {
    require_overlap_angle(gamma, where);
    if (gamma.rad() == 0.0) {
        throw DomainError(std::string(where) + ": overlap angle must be positive");
    }
}

/// Unit vector in an explicit orthonormal frame.
class StateVector {
public:
    explicit StateVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
        if (coords_.size() == 0) {
            throw DomainError("StateVector: empty coordinate vector");
        }
        const double n = coords_.norm();
        if (!(std::abs(n - 1.0) <= kNormTolerance)) {
            throw DomainError("StateVector: coordinates are not normalized (norm " +
                              std::to_string(n) + ")");
        }
    }

    StateVector(std::initializer_list<double> coords)
        : StateVector(Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
              coords.begin(), static_cast<Eigen::Index>(coords.size())))) {}

    /// Rescales v to unit length.
    static StateVector normalized(const Eigen::VectorXd &v) {
        const double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw DomainError("StateVector::normalized: zero or non-finite vector");
        }
        return StateVector(v / n);
    }

    Eigen::Index dim() const { return coords_.size(); }
    const Eigen::VectorXd &coords() const { return coords_; }
    double operator[](Eigen::Index i) const { return coords_[i]; }

private:
    Eigen::VectorXd coords_;
};

inline double inner(const StateVector &x, const StateVector &y) {
    if (x.dim() != y.dim()) {
        throw DomainError("inner: dimension mismatch");
    }
    return x.coords().dot(y.coords());
}

/// Kronecker product in row-major index order.
inline StateVector tensor(const StateVector &x, const StateVector &y) {
    const Eigen::Index m = y.dim();
    Eigen::VectorXd out(x.dim() * m);
    for (Eigen::Index i = 0; i < x.dim(); ++i) {
        out.segment(i * m, m) = x[i] * y.coords();
    }
    return StateVector::normalized(out);
}

/// Symmetric positive semidefinite matrix of pairwise inner products.
class GramMatrix {
public:
    explicit GramMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols()) {
            throw DomainError("GramMatrix: not square");
        }
        if (entries_.size() > 0 &&
            (entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw DomainError("GramMatrix: not symmetric");
        }
        if (entries_.size() > 0 && smallest_eigenvalue() < -1e-12) {
            throw DomainError("GramMatrix: not positive semidefinite");
        }
    }

    const Eigen::MatrixXd &entries() const { return entries_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
    Eigen::Index size() const { return entries_.rows(); }

    double smallest_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }

private:
    Eigen::MatrixXd entries_;
};

inline GramMatrix gram(std::span<const StateVector> vs) {
    const auto n = static_cast<Eigen::Index>(vs.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            g(i, j) = g(j, i) = inner(vs[i], vs[j]);
        }
    }
    return GramMatrix(std::move(g));
}

/// Ordered orthonormal vectors defining a von Neumann measurement
/// E_k = |e_k><e_k|. Fewer vectors than the dimension is allowed; the
/// measurement is then only complete on their span.
class MeasurementBasis {
public:
    explicit MeasurementBasis(std::vector<StateVector> vectors) : vectors_(std::move(vectors)) {
        if (vectors_.empty()) {
            throw DomainError("MeasurementBasis: no vectors");
        }
        const Eigen::Index d = vectors_.front().dim();
        for (const auto &v : vectors_) {
            if (v.dim() != d) {
                throw DomainError("MeasurementBasis: vectors of different dimension");
            }
        }
        if (static_cast<Eigen::Index>(vectors_.size()) > d) {
            throw DomainError("MeasurementBasis: more vectors than dimensions");
        }
        const Eigen::MatrixXd m = rows();
        const Eigen::MatrixXd overlap = m * m.transpose();
        const auto n = static_cast<Eigen::Index>(vectors_.size());
        if ((overlap - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > kOrthoTolerance) {
            throw DomainError("MeasurementBasis: vectors are not orthonormal");
        }
        if (n == d) {
            const Eigen::MatrixXd resolution = m.transpose() * m;
            if ((resolution - Eigen::MatrixXd::Identity(d, d)).norm() > kOrthoTolerance) {
                throw DomainError("MeasurementBasis: projectors do not resolve the identity");
            }
        }
    }

    std::size_t count() const { return vectors_.size(); }
    Eigen::Index dim() const { return vectors_.front().dim(); }
    bool is_complete() const { return static_cast<Eigen::Index>(count()) == dim(); }
    const StateVector &operator[](std::size_t k) const { return vectors_[k]; }
    const std::vector<StateVector> &vectors() const { return vectors_; }

    /// Basis vectors as the rows of a count x dim matrix.
    Eigen::MatrixXd rows() const {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(vectors_.size()), dim());
        for (std::size_t k = 0; k < vectors_.size(); ++k) {
            m.row(static_cast<Eigen::Index>(k)) = vectors_[k].coords().transpose();
        }
        return m;
    }

    /// Extends the basis to the full ambient dimension with an orthonormal
    /// basis of the complement. Each added vector has its largest-magnitude
    /// coordinate positive.
    MeasurementBasis completed() const {
        if (is_complete()) {
            return *this;
        }
        const Eigen::Index d = dim();
        const Eigen::MatrixXd m = rows();
        const Eigen::MatrixXd complement = Eigen::MatrixXd::Identity(d, d) - m.transpose() * m;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(complement);
        std::vector<StateVector> out = vectors_;
        const Eigen::Index missing = d - static_cast<Eigen::Index>(count());
        for (Eigen::Index k = d - 1; k >= d - missing; --k) {
            Eigen::VectorXd v = es.eigenvectors().col(k);
            Eigen::Index imax = 0;
            v.cwiseAbs().maxCoeff(&imax);
            if (v[imax] < 0) {
                v = -v;
            }
            out.push_back(StateVector::normalized(v));
        }
        return MeasurementBasis(std::move(out));
    }

private:
    std::vector<StateVector> vectors_;
};

/// The two alphabet states with <u0|u1> = cos(gamma).
inline std::pair<StateVector, StateVector> embed_alphabet(Angle gamma) {
    require_overlap_angle(gamma, "embed_alphabet");
    const double g = gamma.rad();
    Eigen::VectorXd u0(2), u1(2);
    u0 << 1.0, 0.0;
    u1 << std::cos(g), std::sin(g);
    return {StateVector(u0), StateVector(u1)};
}

/// Effective alphabet for two consecutive transmissions:
/// a = u0 u1, b = u1 u0, c = u0 u0, d = u1 u1.
struct TwoShotAlphabet {
    StateVector a;
    StateVector b;
    StateVector c;
    StateVector d;
};

inline TwoShotAlphabet two_shot_from(const StateVector &psi0, const StateVector &psi1) {
    return {tensor(psi0, psi1), tensor(psi1, psi0), tensor(psi0, psi0), tensor(psi1, psi1)};
}

inline TwoShotAlphabet two_shot_alphabet(Angle gamma) {
    const auto [u0, u1] = embed_alphabet(gamma);
    return two_shot_from(u0, u1);
}

/// Symmetric orthonormalization e'_i = M^{-1/2} v_i with M = sum_i |v_i><v_i|,
/// taking the inverse square root on span(vs) only. Inputs need not be
/// normalized but must be linearly independent.
inline MeasurementBasis lowdin_orthogonalize(std::span<const Eigen::VectorXd> vs) {
    if (vs.empty()) {
        throw DomainError("lowdin_orthogonalize: no input vectors");
    }
    const Eigen::Index d = vs.front().size();
    const auto n = static_cast<Eigen::Index>(vs.size());
    if (n > d) {
        throw ConditioningError("lowdin_orthogonalize: more vectors than dimensions", 0.0);
    }
    Eigen::MatrixXd cols(d, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (vs[static_cast<std::size_t>(i)].size() != d) {
            throw DomainError("lowdin_orthogonalize: dimension mismatch");
        }
        cols.col(i) = vs[static_cast<std::size_t>(i)];
    }

    const Eigen::MatrixXd frame = cols * cols.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(frame);
    // Eigenvalues ascend; the top n eigenpairs span the input vectors and
    // coincide with the spectrum of their Gram matrix.
    const double smallest = es.eigenvalues()(d - n);
    if (!(smallest > kConditioningFloor)) {
        throw ConditioningError("lowdin_orthogonalize: near-singular Gram matrix, smallest eigenvalue " +
                                    std::to_string(smallest),
                                smallest);
    }
    const Eigen::MatrixXd w = es.eigenvectors().rightCols(n);
    const Eigen::VectorXd inv_sqrt = es.eigenvalues().tail(n).cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd m_inv_sqrt = w * inv_sqrt.asDiagonal() * w.transpose();

    std::vector<StateVector> out;
    out.reserve(vs.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        out.push_back(StateVector::normalized(m_inv_sqrt * cols.col(i)));
    }
    return MeasurementBasis(std::move(out));
}

inline MeasurementBasis lowdin_orthogonalize(std::span<const StateVector> vs) {
    std::vector<Eigen::VectorXd> raw;
    raw.reserve(vs.size());
    for (const auto &v : vs) {
        raw.push_back(v.coords());
    }
    return lowdin_orthogonalize(std::span<const Eigen::VectorXd>(raw));
}

} // namespace superadd
