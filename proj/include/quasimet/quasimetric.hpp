#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quasimet/parallel.hpp"
#include "quasimet/scalar.hpp"

namespace quasimet {

enum class BallKind { Forward, Backward, Symmetric };

enum class ViolationKind { Positivity, Triangle };

// One failed axiom instance. Positivity violations carry the offending entry
// (i,j) and its value; triangle violations carry (i,j,k) and the slack
// T(i,j,k), which is negative exactly when the inequality fails.
template <class S>
struct Violation {
    ViolationKind kind;
    std::vector<int> indices;
    S slack;
};

template <class S>
struct Ball {
    int center;
    S radius;
    BallKind kind;
    std::vector<int> members;
};

// Ordered point sequence standing in for a curve; at least two points,
// consecutive points distinct.
inline void check_chain(std::span<const int> chain, int n) {
    if (chain.size() < 2) throw std::invalid_argument("chain needs at least two points");
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (chain[i] < 0 || chain[i] >= n) throw std::out_of_range("chain point out of range");
        if (i > 0 && chain[i] == chain[i - 1]) {
            throw std::invalid_argument("chain repeats a point consecutively");
        }
    }
}

template <class S>
class QuasiMetric;

template <class S>
struct ValidationResult {
    std::optional<QuasiMetric<S>> space;
    std::vector<Violation<S>> violations;

    bool ok() const { return space.has_value(); }
};

// A finite set with an asymmetric distance matrix satisfying
//   d(i,i) = 0,  d(i,j) > 0 for i != j,  d(i,j) + d(j,k) >= d(i,k).
// Row index is the start point, column index the end point.
template <class S>
class QuasiMetric {
public:
    using Scalar = S;

    // Checks both axioms and returns either the space or the full list of
    // violations, ordered by indices. The triangle inequality is accepted
    // down to slack >= -tolerance.
    static ValidationResult<S> validate(std::vector<std::vector<S>> d,
                                        std::vector<std::string> labels = {},
                                        S tolerance = scalar_traits<S>::default_tolerance());

    // Wraps a matrix whose axioms are guaranteed by construction
    // (e.g. shortest-path tables). Skips the O(n^3) scan.
    static QuasiMetric from_verified(std::vector<std::vector<S>> d,
                                     std::vector<std::string> labels = {},
                                     S tolerance = scalar_traits<S>::default_tolerance());

    int size() const { return n_; }
    const S& operator()(int i, int j) const { return d_[i][j]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const S& tolerance() const { return tolerance_; }

    // T(x,y,z) = d(x,y) + d(y,z) - d(x,z), the slack in the triangle
    // inequality; nonnegative on a valid space.
    S triangular(int x, int y, int z) const {
        check_index(x);
        check_index(y);
        check_index(z);
        return d_[x][y] + d_[y][z] - d_[x][z];
    }

    // Arithmetic mean of d(i,j) and d(j,i); a symmetric metric.
    QuasiMetric symmetrized() const {
        std::vector<std::vector<S>> m(n_, std::vector<S>(n_, scalar_traits<S>::zero()));
        const S two = S(2);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) m[i][j] = (d_[i][j] + d_[j][i]) / two;
        }
        return from_verified(std::move(m), labels_, tolerance_);
    }

    bool is_symmetric() const {
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j) {
                if (!(d_[i][j] == d_[j][i])) return false;
            }
        }
        return true;
    }

    // Strict-inequality balls: forward uses d(center, y) < r, backward
    // d(y, center) < r, symmetric their intersection.
    Ball<S> ball(int center, const S& radius, BallKind kind) const {
        check_index(center);
        if (!(radius > scalar_traits<S>::zero())) {
            throw std::invalid_argument("ball radius must be positive");
        }
        Ball<S> b{center, radius, kind, {}};
        for (int y = 0; y < n_; ++y) {
            bool fwd = d_[center][y] < radius;
            bool bwd = d_[y][center] < radius;
            bool in = kind == BallKind::Forward ? fwd
                    : kind == BallKind::Backward ? bwd
                                                 : (fwd && bwd);
            if (in) b.members.push_back(y);
        }
        return b;
    }

    // Sum of d over consecutive pairs of the chain.
    S chain_length(std::span<const int> chain) const {
        check_chain(chain, n_);
        S total = scalar_traits<S>::zero();
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            total += d_[chain[i]][chain[i + 1]];
        }
        return total;
    }

    // A chain is minimizing when its length equals d(first, last);
    // equivalently T vanishes on every ordered triple of chain positions.
    // Both characterizations are evaluated and must agree. The length slack
    // telescopes into a sum of (size - 2) triple slacks, so its tolerance is
    // scaled accordingly.
    bool is_minimizing(std::span<const int> chain) const {
        check_chain(chain, n_);
        S length_tol = tolerance_ * S(static_cast<int>(chain.size()) - 1);
        bool by_length =
            near(chain_length(chain), d_[chain.front()][chain.back()], length_tol);

        bool by_triples = true;
        const std::size_t m = chain.size();
        for (std::size_t a = 0; a < m && by_triples; ++a) {
            for (std::size_t b = a + 1; b < m && by_triples; ++b) {
                for (std::size_t c = b + 1; c < m && by_triples; ++c) {
                    S t = triangular(chain[a], chain[b], chain[c]);
                    if (!near(t, scalar_traits<S>::zero(), tolerance_)) by_triples = false;
                }
            }
        }
        if (by_length != by_triples) {
            throw std::logic_error("minimizing-chain characterizations disagree");
        }
        return by_length;
    }

private:
    QuasiMetric(std::vector<std::vector<S>> d, std::vector<std::string> labels, S tolerance)
        : n_(static_cast<int>(d.size())),
          d_(std::move(d)),
          labels_(std::move(labels)),
          tolerance_(std::move(tolerance)) {}

    void check_index(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("point index out of range");
    }

    int n_;
    std::vector<std::vector<S>> d_;
    std::vector<std::string> labels_;
    S tolerance_;
};

template <class S>
ValidationResult<S> QuasiMetric<S>::validate(std::vector<std::vector<S>> d,
                                             std::vector<std::string> labels, S tolerance) {
    const int n = static_cast<int>(d.size());
    if (n < 1) throw std::invalid_argument("distance matrix must have at least one point");
    for (const auto& row : d) {
        if (static_cast<int>(row.size()) != n) {
            throw std::invalid_argument("distance matrix must be square");
        }
        for (const auto& v : row) {
            if (!scalar_traits<S>::finite(v)) {
                throw std::invalid_argument("distance matrix entries must be finite");
            }
        }
    }
    if (labels.empty()) {
        labels.reserve(n);
        for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != n) {
        throw std::invalid_argument("label count must match matrix size");
    }
    if (tolerance < scalar_traits<S>::zero()) {
        throw std::invalid_argument("tolerance must be nonnegative");
    }

    const S zero = scalar_traits<S>::zero();
    std::vector<Violation<S>> violations;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                if (!near(d[i][i], zero, tolerance)) {
                    violations.push_back({ViolationKind::Positivity, {i, i}, d[i][i]});
                }
            } else if (!(d[i][j] > zero)) {
                violations.push_back({ViolationKind::Positivity, {i, j}, d[i][j]});
            }
        }
    }

    // Exhaustive O(n^3) triangle scan, partitioned over the first index;
    // per-index buckets keep the report ordering deterministic.
    std::vector<std::vector<Violation<S>>> buckets(n);
    parallel_for(0, n, [&](int i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                S slack = d[i][j] + d[j][k] - d[i][k];
                if (slack < -tolerance) {
                    buckets[i].push_back({ViolationKind::Triangle, {i, j, k}, slack});
                }
            }
        }
    });
    for (auto& bucket : buckets) {
        for (auto& v : bucket) violations.push_back(std::move(v));
    }

    ValidationResult<S> result;
    result.violations = std::move(violations);
    if (result.violations.empty()) {
        result.space = QuasiMetric<S>(std::move(d), std::move(labels), std::move(tolerance));
    }
    return result;
}

template <class S>
QuasiMetric<S> QuasiMetric<S>::from_verified(std::vector<std::vector<S>> d,
                                             std::vector<std::string> labels, S tolerance) {
    const int n = static_cast<int>(d.size());
    if (n < 1) throw std::invalid_argument("distance matrix must have at least one point");
    if (labels.empty()) {
        labels.reserve(n);
        for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    }
    return QuasiMetric<S>(std::move(d), std::move(labels), std::move(tolerance));
}

}  // namespace quasimet
