#include "rsp/heuristics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rsp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct InsertionSpot {
    double cost = kInf;
    int pos = -1; // insert between order[pos] and order[(pos+1) % len]
};

// Earliest position minimizing the insertion cost of v into the tour.
InsertionSpot best_insertion(const RandomMetric& m, const std::vector<int>& order, int v) {
    InsertionSpot best;
    const int len = static_cast<int>(order.size());
    for (int i = 0; i < len; ++i) {
        int a = order[i];
        int b = order[(i + 1) % len];
        double cost = m.d(a, v) + m.d(v, b) - m.d(a, b);
        if (cost < best.cost) {
            best.cost = cost;
            best.pos = i;
        }
    }
    return best;
}

} // namespace

MatchingResult greedy_matching(const RandomMetric& m) {
    if (m.n % 2 != 0) throw std::invalid_argument("greedy_matching: n must be even");
    struct Edge {
        double d;
        int u, v;
    };
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m.n) * (m.n - 1) / 2);
    for (int u = 0; u < m.n; ++u)
        for (int v = u + 1; v < m.n; ++v) edges.push_back({m.d(u, v), u, v});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });

    MatchingResult result;
    std::vector<char> matched(m.n, 0);
    int remaining = m.n / 2;
    for (const Edge& e : edges) {
        if (matched[e.u] || matched[e.v]) continue;
        matched[e.u] = matched[e.v] = 1;
        result.edges.emplace_back(e.u, e.v);
        result.pick_order.emplace_back(e.u, e.v);
        result.total_length += e.d;
        if (--remaining == 0) break;
    }
    return result;
}

double tour_length(const RandomMetric& m, const std::vector<int>& order) {
    const int len = static_cast<int>(order.size());
    if (len < 2) return 0.0;
    double total = 0.0;
    for (int i = 0; i < len; ++i) total += m.d(order[i], order[(i + 1) % len]);
    return total;
}

TourResult nearest_neighbor_tour(const RandomMetric& m, int start) {
    if (start < 0 || start >= m.n)
        throw std::invalid_argument("nearest_neighbor_tour: start out of range");
    TourResult result;
    result.meta.algorithm = "nearest-neighbor";
    result.order.reserve(m.n);
    std::vector<char> visited(m.n, 0);
    int current = start;
    visited[current] = 1;
    result.order.push_back(current);
    for (int step = 1; step < m.n; ++step) {
        const double* row = m.row(current);
        int next = -1;
        double best = kInf;
        for (int u = 0; u < m.n; ++u) {
            if (!visited[u] && row[u] < best) {
                best = row[u];
                next = u;
            }
        }
        visited[next] = 1;
        result.order.push_back(next);
        current = next;
    }
    result.total_length = tour_length(m, result.order);
    return result;
}

TourResult insertion_tour(const RandomMetric& m, InsertionRule rule, Rng* stream) {
    if (rule == InsertionRule::Random && stream == nullptr)
        throw std::invalid_argument("insertion_tour: Random rule needs a stream");
    TourResult result;
    result.meta.algorithm = "insertion";
    result.meta.rule = to_string(rule);
    const int n = m.n;
    if (n <= 2) {
        result.order.resize(n);
        std::iota(result.order.begin(), result.order.end(), 0);
        result.total_length = tour_length(m, result.order);
        return result;
    }

    std::vector<int> remaining(n);
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<int>& order = result.order;

    auto take_remaining = [&](int idx) {
        int v = remaining[idx];
        remaining.erase(remaining.begin() + idx);
        return v;
    };

    if (rule == InsertionRule::Random) {
        for (int i = 0; i < 3; ++i)
            order.push_back(take_remaining(static_cast<int>(stream->below(remaining.size()))));
    } else {
        for (int i = 0; i < 3; ++i) order.push_back(take_remaining(0));
    }

    // dist_to_tour drives Nearest/Farthest selection
    std::vector<double> dist_to_tour(n, kInf);
    // cheapest keeps each candidate's exact best spot up to date
    std::vector<InsertionSpot> spot(n);
    auto refresh_dist = [&](int inserted) {
        for (int v : remaining) {
            double d = m.d(v, inserted);
            if (d < dist_to_tour[v]) dist_to_tour[v] = d;
        }
    };
    if (rule == InsertionRule::Nearest || rule == InsertionRule::Farthest) {
        for (int t : order) refresh_dist(t);
    }
    if (rule == InsertionRule::Cheapest) {
        for (int v : remaining) spot[v] = best_insertion(m, order, v);
    }

    while (!remaining.empty()) {
        int pick_idx = 0;
        switch (rule) {
        case InsertionRule::FixedOrder:
            pick_idx = 0; // remaining stays ascending
            break;
        case InsertionRule::Random:
            pick_idx = static_cast<int>(stream->below(remaining.size()));
            break;
        case InsertionRule::Nearest: {
            double best = kInf;
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                if (dist_to_tour[remaining[i]] < best) {
                    best = dist_to_tour[remaining[i]];
                    pick_idx = static_cast<int>(i);
                }
            }
            break;
        }
        case InsertionRule::Farthest: {
            double best = -kInf;
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                if (dist_to_tour[remaining[i]] > best) {
                    best = dist_to_tour[remaining[i]];
                    pick_idx = static_cast<int>(i);
                }
            }
            break;
        }
        case InsertionRule::Cheapest: {
            double best = kInf;
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                if (spot[remaining[i]].cost < best) {
                    best = spot[remaining[i]].cost;
                    pick_idx = static_cast<int>(i);
                }
            }
            break;
        }
        }

        int v = take_remaining(pick_idx);
        InsertionSpot where =
            rule == InsertionRule::Cheapest ? spot[v] : best_insertion(m, order, v);
        order.insert(order.begin() + where.pos + 1, v);

        if (rule == InsertionRule::Nearest || rule == InsertionRule::Farthest) refresh_dist(v);
        if (rule == InsertionRule::Cheapest) {
            // Inserting v at position p replaced edge (a, b) with (a, v), (v, b).
            const int p = where.pos;
            const int len = static_cast<int>(order.size());
            int a = order[p];
            int b = order[(p + 2) % len];
            for (int u : remaining) {
                InsertionSpot& s = spot[u];
                if (s.pos == p) {
                    s = best_insertion(m, order, u); // its best edge is gone
                    continue;
                }
                if (s.pos > p) ++s.pos; // positions after the insert shift by one
                double c1 = m.d(a, u) + m.d(u, v) - m.d(a, v);
                if (c1 < s.cost || (c1 == s.cost && p < s.pos)) s = {c1, p};
                double c2 = m.d(v, u) + m.d(u, b) - m.d(v, b);
                if (c2 < s.cost || (c2 == s.cost && p + 1 < s.pos)) s = {c2, p + 1};
            }
        }
    }

    result.total_length = tour_length(m, order);
    return result;
}

TourResult random_tour(const RandomMetric& m, Rng& stream) {
    TourResult result;
    result.meta.algorithm = "random-tour";
    result.order.resize(m.n);
    std::iota(result.order.begin(), result.order.end(), 0);
    for (int i = m.n - 1; i > 0; --i) {
        int j = static_cast<int>(stream.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(result.order[i], result.order[j]);
    }
    result.total_length = tour_length(m, result.order);
    return result;
}

TourResult two_opt(const RandomMetric& m, const TourResult& initial, PivotRule pivot,
                   long max_iters) {
    if (max_iters < 0) throw std::invalid_argument("two_opt: max_iters must be >= 0");
    TourResult result = initial;
    result.meta.algorithm = "2-opt";
    result.meta.rule = to_string(pivot);
    result.meta.iterations = 0;
    result.meta.min_improvement = kInf;
    const int n = m.n;
    std::vector<int>& t = result.order;

    auto gain = [&](int i, int j) {
        int a = t[i], b = t[i + 1];
        int c = t[j], d = t[(j + 1) % n];
        return m.d(a, b) + m.d(c, d) - m.d(a, c) - m.d(b, d);
    };
    auto apply = [&](int i, int j) { std::reverse(t.begin() + i + 1, t.begin() + j + 1); };

    bool improved = n >= 4;
    while (improved && result.meta.iterations < max_iters) {
        improved = false;
        if (pivot == PivotRule::FirstImprovement) {
            for (int i = 0; i < n - 2 && !improved; ++i) {
                int j_max = (i == 0) ? n - 2 : n - 1;
                for (int j = i + 2; j <= j_max; ++j) {
                    double delta = gain(i, j);
                    if (delta > 0.0) {
                        apply(i, j);
                        ++result.meta.iterations;
                        result.meta.min_improvement =
                            std::min(result.meta.min_improvement, delta);
                        improved = true;
                        break;
                    }
                }
            }
        } else {
            double best_delta = 0.0;
            int best_i = -1, best_j = -1;
            for (int i = 0; i < n - 2; ++i) {
                int j_max = (i == 0) ? n - 2 : n - 1;
                for (int j = i + 2; j <= j_max; ++j) {
                    double delta = gain(i, j);
                    if (delta > best_delta) {
                        best_delta = delta;
                        best_i = i;
                        best_j = j;
                    }
                }
            }
            if (best_i >= 0) {
                apply(best_i, best_j);
                ++result.meta.iterations;
                result.meta.min_improvement = std::min(result.meta.min_improvement, best_delta);
                improved = true;
            }
        }
    }
    if (result.meta.iterations == 0) result.meta.min_improvement = 0.0;
    // improved set means the cap stopped us mid-descent
    result.meta.locally_optimal = !improved;
    result.total_length = tour_length(m, t);
    return result;
}

double best_two_opt_gain(const RandomMetric& m, const std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    double best = -kInf;
    for (int i = 0; i < n - 2; ++i) {
        int j_max = (i == 0) ? n - 2 : n - 1;
        for (int j = i + 2; j <= j_max; ++j) {
            int a = order[i], b = order[i + 1];
            int c = order[j], d = order[(j + 1) % n];
            best = std::max(best, m.d(a, b) + m.d(c, d) - m.d(a, c) - m.d(b, d));
        }
    }
    return best;
}

std::string to_string(InsertionRule r) {
    switch (r) {
    case InsertionRule::Nearest: return "nearest";
    case InsertionRule::Farthest: return "farthest";
    case InsertionRule::Cheapest: return "cheapest";
    case InsertionRule::Random: return "random";
    case InsertionRule::FixedOrder: return "fixed-order";
    }
    return "?";
}

std::string to_string(PivotRule p) {
    return p == PivotRule::FirstImprovement ? "first-improvement" : "best-improvement";
}

InsertionRule insertion_rule_from_string(const std::string& s) {
    if (s == "nearest") return InsertionRule::Nearest;
    if (s == "farthest") return InsertionRule::Farthest;
    if (s == "cheapest") return InsertionRule::Cheapest;
    if (s == "random") return InsertionRule::Random;
    if (s == "fixed-order" || s == "fixed") return InsertionRule::FixedOrder;
    throw std::invalid_argument("unknown insertion rule: " + s);
}

PivotRule pivot_rule_from_string(const std::string& s) {
    if (s == "first-improvement" || s == "first") return PivotRule::FirstImprovement;
    if (s == "best-improvement" || s == "best") return PivotRule::BestImprovement;
    throw std::invalid_argument("unknown pivot rule: " + s);
}

std::string HeuristicRunRecord::csv_header() {
    return "algorithm,rule,pivot,n,seed,length,T,delta_min,locally_optimal";
}

std::string HeuristicRunRecord::csv_row() const {
    char buf[128];
    std::ostringstream out;
    out << algorithm << ',' << rule << ',' << pivot << ',' << n << ',' << seed << ',';
    std::snprintf(buf, sizeof buf, "%.17g", length);
    out << buf << ',' << iterations << ',';
    std::snprintf(buf, sizeof buf, "%.17g", delta_min);
    out << buf << ',' << (locally_optimal ? 1 : 0);
    return out.str();
}

std::string HeuristicRunRecord::json() const {
    char buf[128];
    std::ostringstream out;
    out << "{\"algorithm\":\"" << algorithm << "\",\"rule\":\"" << rule << "\",\"pivot\":\""
        << pivot << "\",\"n\":" << n << ",\"seed\":" << seed << ",\"length\":";
    std::snprintf(buf, sizeof buf, "%.17g", length);
    out << buf << ",\"T\":" << iterations << ",\"delta_min\":";
    std::snprintf(buf, sizeof buf, "%.17g", delta_min);
    out << buf << ",\"locally_optimal\":" << (locally_optimal ? "true" : "false") << '}';
    return out.str();
}

HeuristicRunRecord make_run_record(const TourResult& t, int n, std::uint64_t seed) {
    HeuristicRunRecord r;
    r.algorithm = t.meta.algorithm;
    if (t.meta.algorithm == "2-opt")
        r.pivot = t.meta.rule;
    else
        r.rule = t.meta.rule;
    r.n = n;
    r.seed = seed;
    r.length = t.total_length;
    r.iterations = t.meta.iterations;
    r.delta_min = t.meta.min_improvement;
    r.locally_optimal = t.meta.locally_optimal;
    return r;
}

HeuristicRunRecord make_run_record(const MatchingResult& m, int n, std::uint64_t seed) {
    HeuristicRunRecord r;
    r.algorithm = "greedy-matching";
    r.n = n;
    r.seed = seed;
    r.length = m.total_length;
    return r;
}

} // namespace rsp
