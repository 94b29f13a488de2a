#include "rigidmatch/rigidity.hpp"

#include <cmath>
#include <functional>

#include "rigidmatch/errors.hpp"

namespace rigidmatch {
namespace {

class LengthTable {
 public:
  LengthTable(const MatchGraph& g, std::span<const double> lengths)
      : n_(g.n()), table_(g.n() * g.n(), -1.0) {
    if (lengths.size() != g.edges().size()) {
      throw Error(ErrorCode::invalid_input, "edge length count does not match the edge count");
    }
    for (std::size_t k = 0; k < lengths.size(); ++k) {
      const Edge& e = g.edges()[k];
      if (!(lengths[k] >= 0.0) || !std::isfinite(lengths[k])) {
        throw Error(ErrorCode::invalid_input, "edge lengths must be finite and nonnegative");
      }
      table_[e.u * n_ + e.v] = lengths[k];
      table_[e.v * n_ + e.u] = lengths[k];
    }
  }

  double operator()(std::size_t a, std::size_t b) const { return table_[a * n_ + b]; }

 private:
  std::size_t n_;
  std::vector<double> table_;
};

// Points at distance r1 from a and r2 from b; empty when the circles miss by
// more than `tol`.
std::vector<Point> circle_intersections(const Point& a, double r1, const Point& b, double r2,
                                        double tol) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double d = std::hypot(dx, dy);
  if (d <= 0.0) return {};
  const double along = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  const double h2 = r1 * r1 - along * along;
  if (h2 < -tol * (r1 + r2 + d)) return {};
  const double h = std::sqrt(std::max(h2, 0.0));
  const double ux = dx / d;
  const double uy = dy / d;
  const Point base{a.x + along * ux, a.y + along * uy};
  if (h == 0.0) return {base};
  return {{base.x - h * uy, base.y + h * ux}, {base.x + h * uy, base.y - h * ux}};
}

}  // namespace

std::vector<double> edge_lengths(const MatchGraph& g, const PointPattern& embedding) {
  if (embedding.size() != g.n()) {
    throw Error(ErrorCode::invalid_input, "embedding size does not match the graph");
  }
  std::vector<double> out;
  out.reserve(g.edges().size());
  for (const Edge& e : g.edges()) out.push_back(distance(embedding[e.u], embedding[e.v]));
  return out;
}

std::vector<std::vector<Point>> anchored_realizations(const MatchGraph& g,
                                                      std::span<const double> lengths,
                                                      double tol) {
  if (g.kind() != GraphKind::squared_cycle) {
    throw Error(ErrorCode::invalid_graph, "anchored reconstruction needs a squared cycle");
  }
  const LengthTable len(g, lengths);
  const auto order = g.cycle_order();
  const std::size_t n = order.size();

  std::vector<Point> pos(n);
  std::vector<bool> placed(n, false);
  auto place = [&](std::size_t v, Point p) {
    pos[v] = p;
    placed[v] = true;
  };

  const std::size_t first = order[0];
  const std::size_t second = order[1];
  const std::size_t last = order[n - 1];
  place(first, {0.0, 0.0});
  place(second, {len(first, second), 0.0});

  std::vector<std::vector<Point>> out;
  bool upper_found = false;
  for (const Point& p : circle_intersections(pos[first], len(first, last), pos[second],
                                             len(second, last), tol)) {
    if (p.y >= 0.0 && !upper_found) {
      place(last, p);
      upper_found = true;
    }
  }
  if (!upper_found) return out;

  std::function<void(std::size_t)> extend = [&](std::size_t k) {
    if (k == n - 1) {
      out.push_back(pos);
      return;
    }
    const std::size_t v = order[k];
    const std::size_t a = order[k - 2];
    const std::size_t b = order[k - 1];
    for (const Point& cand : circle_intersections(pos[a], len(a, v), pos[b], len(b, v), tol)) {
      bool consistent = true;
      for (std::size_t w : g.neighbors(v)) {
        if (w == a || w == b || !placed[w]) continue;
        if (std::abs(distance(cand, pos[w]) - len(v, w)) > tol) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
      place(v, cand);
      extend(k + 1);
      placed[v] = false;
    }
  };
  extend(2);
  return out;
}

}  // namespace rigidmatch
