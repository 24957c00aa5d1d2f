#include "quasimet/graph.hpp"

#include <stdexcept>

namespace quasimet {

int grid_index(int res, int ix, int iy) { return ix * res + iy; }

std::vector<std::string> grid_labels(int res) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(res) * res);
    for (int ix = 0; ix < res; ++ix) {
        for (int iy = 0; iy < res; ++iy) {
            labels.push_back("p" + std::to_string(ix) + "_" + std::to_string(iy));
        }
    }
    return labels;
}

DirectedWeightedGraph<double> discretize_planar_metric(
    const std::function<double(Vec2, Vec2)>& metric, const Rect& domain, int res) {
    if (res < 2) throw std::invalid_argument("grid resolution must be at least 2");
    const double hx = domain.width() / (res - 1);
    const double hy = domain.height() / (res - 1);

    DirectedWeightedGraph<double> g;
    g.n = res * res;
    std::vector<Vec2> coords(g.n);
    for (int ix = 0; ix < res; ++ix) {
        for (int iy = 0; iy < res; ++iy) {
            coords[grid_index(res, ix, iy)] = {domain.x0 + ix * hx, domain.y0 + iy * hy};
        }
    }

    static constexpr int kOffsets[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                           {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    for (int ix = 0; ix < res; ++ix) {
        for (int iy = 0; iy < res; ++iy) {
            const int u = grid_index(res, ix, iy);
            const Vec2 p = coords[u];
            for (const auto& off : kOffsets) {
                const int jx = ix + off[0];
                const int jy = iy + off[1];
                if (jx < 0 || jx >= res || jy < 0 || jy >= res) continue;
                const int v = grid_index(res, jx, jy);
                const Vec2 q = coords[v];
                const Vec2 step = q - p;
                const double w = 0.5 * (metric(p, step) + metric(q, step));
                g.edges.push_back({u, v, w});
            }
        }
    }
    g.coords = std::move(coords);
    g.check();
    return g;
}

}  // namespace quasimet
