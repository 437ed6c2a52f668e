#pragma once

// Coordinate charts with expression-valued metric / connection / structure
// fields, plus deterministic sample-point generation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "statgeo/errors.hpp"
#include "statgeo/expr.hpp"
#include "statgeo/linalg.hpp"

namespace statgeo {

struct Point {
    std::vector<double> x;
    std::size_t dim() const { return x.size(); }
};

using ExprMatrix = std::vector<std::vector<Expr>>;       // [i][j]
using ExprCube = std::vector<ExprMatrix>;                // [k][i][j]

struct ChartGeometry {
    std::size_t dim = 0;
    std::vector<std::string> coords;
    ExprMatrix metric;                       // n x n, symmetric
    std::optional<ExprCube> gamma;           // connection coefficients G^k_{ij}
    std::optional<ExprMatrix> structureF;    // (1,1) tensor F^i_j
    std::vector<std::pair<double, double>> box;
};

struct SamplePlan {
    int grid = 3;          // points per axis in a centered half-extent sub-box
    int random = 17;       // extra pseudo-random points inside the box
    std::uint64_t seed = 42;
};

// splitmix64: tiny deterministic generator so reports are identical across
// platforms and standard-library versions.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform01() { return (double)(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

// Grid points sweep a sub-box of half the extent around the box center
// (avoids pinning samples to box corners where scenario fields often
// degenerate), then `random` seeded points over the full box.
inline std::vector<Point> sample_points(const std::vector<std::pair<double, double>>& box,
                                        const SamplePlan& plan) {
    std::size_t n = box.size();
    std::vector<Point> pts;
    if (plan.grid > 0) {
        std::vector<int> idx(n, 0);
        for (;;) {
            Point p;
            p.x.resize(n);
            for (std::size_t k = 0; k < n; ++k) {
                double c = 0.5 * (box[k].first + box[k].second);
                double h = 0.25 * (box[k].second - box[k].first);
                p.x[k] = plan.grid == 1
                             ? c
                             : c - h + 2.0 * h * (double)idx[k] / (double)(plan.grid - 1);
            }
            pts.push_back(std::move(p));
            std::size_t k = 0;
            while (k < n && ++idx[k] == plan.grid) idx[k++] = 0;
            if (k == n) break;
        }
    }
    SplitMix64 rng(plan.seed);
    for (int r = 0; r < plan.random; ++r) {
        Point p;
        p.x.resize(n);
        for (std::size_t k = 0; k < n; ++k) p.x[k] = rng.uniform(box[k].first, box[k].second);
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw Error("sample plan produced no points");
    return pts;
}

// Coordinates of a point seeded as Dual scalars, one derivative direction
// per coordinate.
inline std::vector<Dual<double>> seed_coords(const std::vector<double>& x) {
    std::vector<Dual<double>> s;
    s.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        s.push_back(Dual<double>::seeded(x[k], x.size(), k));
    return s;
}

} // namespace statgeo
