#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "quasimet/quasimetric.hpp"

namespace quasimet {

// Bijection between equal-size spaces together with the potential f that
// witnesses it as an almost isometry:
//   d2(map[x], map[y]) = d1(x, y) + f(map[y]) - f(map[x])
// The potential is indexed by target points and normalized so that
// f(map[base_point]) = 0; it is determined only up to an additive constant.
template <class S>
struct AlmostIsometry {
    std::vector<int> map;
    std::vector<S> potential;
    int base_point = 0;
};

// First ordered triple on which the triangular function is not preserved.
template <class S>
struct TripleFailure {
    int x = 0, y = 0, z = 0;
    S source_t = scalar_traits<S>::zero();
    S target_t = scalar_traits<S>::zero();
};

template <class S>
struct RecoverResult {
    std::optional<AlmostIsometry<S>> almost_isometry;
    std::optional<TripleFailure<S>> failure;

    bool ok() const { return almost_isometry.has_value(); }
};

struct SearchCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class S>
void check_bijection(const QuasiMetric<S>& source, const QuasiMetric<S>& target,
                     std::span<const int> map) {
    const int n = source.size();
    if (target.size() != n) throw std::invalid_argument("spaces have different cardinality");
    if (static_cast<int>(map.size()) != n) throw std::invalid_argument("map size mismatch");
    std::vector<bool> hit(n, false);
    for (int i = 0; i < n; ++i) {
        if (map[i] < 0 || map[i] >= n || hit[map[i]]) {
            throw std::invalid_argument("map is not a bijection");
        }
        hit[map[i]] = true;
    }
}

template <class S>
S pair_tolerance(const QuasiMetric<S>& a, const QuasiMetric<S>& b) {
    return std::max(a.tolerance(), b.tolerance());
}

}  // namespace detail

// Potential recovery: f(z) = d1(map^-1(z), x0) - d2(z, map[x0]), already zero
// at map[x0]. The defining identity is verified for every pair; the residual
// for (x, y) equals T2(map x, map y, map x0) - T1(x, y, x0), so checking it
// within tolerance bounds the triangular function on all triples anchored at
// the base point, and exactly characterizes almost isometries.
template <class S>
RecoverResult<S> recover_potential(const QuasiMetric<S>& source, const QuasiMetric<S>& target,
                                   std::span<const int> map, int base_point) {
    detail::check_bijection(source, target, map);
    const int n = source.size();
    if (base_point < 0 || base_point >= n) throw std::out_of_range("base point out of range");

    std::vector<int> inverse(n, -1);
    for (int i = 0; i < n; ++i) inverse[map[i]] = i;

    const int image_base = map[base_point];
    std::vector<S> f;
    f.reserve(n);
    for (int z = 0; z < n; ++z) {
        f.push_back(source(inverse[z], base_point) - target(z, image_base));
    }

    const S tol = detail::pair_tolerance(source, target);
    RecoverResult<S> result;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            S lhs = target(map[x], map[y]);
            S rhs = source(x, y) + f[map[y]] - f[map[x]];
            if (!near(lhs, rhs, tol)) {
                result.failure = TripleFailure<S>{x, y, base_point,
                                                  source.triangular(x, y, base_point),
                                                  target.triangular(map[x], map[y], image_base)};
                return result;
            }
        }
    }
    result.almost_isometry = AlmostIsometry<S>{std::vector<int>(map.begin(), map.end()),
                                               std::move(f), base_point};
    return result;
}

// True iff the bijection preserves the triangular function on all triples.
template <class S>
bool check_almost_isometry(const QuasiMetric<S>& source, const QuasiMetric<S>& target,
                           std::span<const int> map) {
    return recover_potential(source, target, map, 0).ok();
}

template <class S>
bool is_isometry(const QuasiMetric<S>& source, const QuasiMetric<S>& target,
                 std::span<const int> map) {
    detail::check_bijection(source, target, map);
    const S tol = detail::pair_tolerance(source, target);
    const int n = source.size();
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (!near(target(map[x], map[y]), source(x, y), tol)) return false;
        }
    }
    return true;
}

// Composite of X1 -> X2 -> X3 with potential h(z) = f2(z) + f1(map2^-1(z)),
// renormalized at the image of a12's base point.
template <class S>
AlmostIsometry<S> compose(const AlmostIsometry<S>& a12, const AlmostIsometry<S>& a23) {
    const int n = static_cast<int>(a12.map.size());
    if (static_cast<int>(a23.map.size()) != n) {
        throw std::invalid_argument("composition size mismatch");
    }
    std::vector<int> inverse2(n, -1);
    for (int i = 0; i < n; ++i) inverse2[a23.map[i]] = i;

    AlmostIsometry<S> out;
    out.map.resize(n);
    out.potential.resize(n, scalar_traits<S>::zero());
    out.base_point = a12.base_point;
    for (int i = 0; i < n; ++i) out.map[i] = a23.map[a12.map[i]];
    for (int z = 0; z < n; ++z) out.potential[z] = a23.potential[z] + a12.potential[inverse2[z]];
    S shift = out.potential[out.map[out.base_point]];
    for (auto& v : out.potential) v -= shift;
    return out;
}

// Inverse bijection with potential -f(map(z)), renormalized.
template <class S>
AlmostIsometry<S> invert(const AlmostIsometry<S>& a) {
    const int n = static_cast<int>(a.map.size());
    AlmostIsometry<S> out;
    out.map.resize(n);
    out.potential.resize(n, scalar_traits<S>::zero());
    for (int i = 0; i < n; ++i) out.map[a.map[i]] = i;
    for (int z = 0; z < n; ++z) out.potential[z] = -a.potential[a.map[z]];
    out.base_point = a.map[a.base_point];
    S shift = out.potential[out.map[out.base_point]];
    for (auto& v : out.potential) v -= shift;
    return out;
}

template <class S>
std::vector<int> map_chain(const AlmostIsometry<S>& a, std::span<const int> chain) {
    std::vector<int> out;
    out.reserve(chain.size());
    for (int p : chain) out.push_back(a.map[p]);
    return out;
}

// True when f and g agree after removing one additive constant.
template <class S>
bool same_up_to_constant(std::span<const S> f, std::span<const S> g, const S& tol) {
    if (f.size() != g.size() || f.empty()) return false;
    S shift = f[0] - g[0];
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!near(f[i] - g[i], shift, tol)) return false;
    }
    return true;
}

namespace detail {

template <class S>
struct GroupSearch {
    const QuasiMetric<S>& space;
    int n;
    S tol;
    std::vector<std::vector<S>> sym;           // symmetrized distances
    std::vector<std::vector<S>> signature;     // sorted row multisets of sym
    std::vector<int> order;                    // assignment order of source points
    std::vector<int> map;                      // partial map, -1 unassigned
    std::vector<bool> used;
    std::vector<std::vector<int>> found;

    explicit GroupSearch(const QuasiMetric<S>& s) : space(s), n(s.size()), tol(s.tolerance()) {
        sym.assign(n, std::vector<S>(n, scalar_traits<S>::zero()));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) sym[i][j] = (space(i, j) + space(j, i)) / S(2);
        }
        signature.resize(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (j != i) signature[i].push_back(sym[i][j]);
            }
            std::sort(signature[i].begin(), signature[i].end());
        }
        // Deepest-constrained first: decreasing signature, index as tie-break.
        order.resize(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (signature[a] != signature[b]) return signature[b] < signature[a];
            return a < b;
        });
        map.assign(n, -1);
        used.assign(n, false);
    }

    bool signatures_match(int a, int b) const {
        for (int k = 0; k < n - 1; ++k) {
            if (!near(signature[a][k], signature[b][k], tol)) return false;
        }
        return true;
    }

    void run(int depth) {
        if (depth == n) {
            if (check_almost_isometry(space, space, std::span<const int>(map))) {
                found.push_back(map);
            }
            return;
        }
        const int s = order[depth];
        for (int t = 0; t < n; ++t) {
            if (used[t] || !signatures_match(s, t)) continue;
            bool consistent = true;
            for (int d = 0; d < depth && consistent; ++d) {
                const int s2 = order[d];
                if (!near(sym[map[s2]][t], sym[s2][s], tol)) consistent = false;
            }
            if (!consistent) continue;
            map[s] = t;
            used[t] = true;
            run(depth + 1);
            map[s] = -1;
            used[t] = false;
        }
    }
};

}  // namespace detail

// All self-bijections preserving the triangular function. Backtracking only
// extends partial maps that are isometric for the symmetrized metric, which
// every almost isometry must be; output is sorted by permutation.
template <class S>
std::vector<AlmostIsometry<S>> enumerate_extended_group(const QuasiMetric<S>& space,
                                                        int search_cap = 10) {
    if (search_cap < 1) throw std::invalid_argument("search cap must be positive");
    if (space.size() > search_cap) {
        throw SearchCapExceeded("space size " + std::to_string(space.size()) +
                                " exceeds search cap " + std::to_string(search_cap));
    }
    detail::GroupSearch<S> search(space);
    search.run(0);
    std::sort(search.found.begin(), search.found.end());

    std::vector<AlmostIsometry<S>> group;
    group.reserve(search.found.size());
    for (const auto& perm : search.found) {
        auto rec = recover_potential(space, space, std::span<const int>(perm), 0);
        group.push_back(std::move(*rec.almost_isometry));
    }
    return group;
}

}  // namespace quasimet
